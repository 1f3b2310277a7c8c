//! Solution sets of equation systems and the equational theory of a tuple set.
//!
//! An equation over a clone `C` is a pair of `n`-ary members of `C`. For a set of tuples
//! `T ⊆ Aⁿ`, `Eq(T)` is every such pair that holds on all of `T`. It is stored as a
//! partition of the slice `C⁽ⁿ⁾` into blocks of operations that agree on `T`.
//! `Sol(Eq(T))` is the smallest solution set containing `T`, so `T` is a solution set
//! exactly when that closure adds nothing.

use std::collections::BTreeMap;

use crate::funclone::{clone_slice, CloneError, OpTable, Relation};
use crate::{for_each_tuple, Elem};

/// A finite system of equations `lhs_i = rhs_i` between `n`-ary operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    arity: usize,
    carrier: usize,
    pairs: Vec<(OpTable, OpTable)>,
}

impl EquationSystem {
    pub fn new(
        arity: usize,
        carrier: usize,
        pairs: Vec<(OpTable, OpTable)>,
    ) -> Result<Self, CloneError> {
        for op in pairs.iter().flat_map(|(l, r)| [l, r]) {
            if op.arity() != arity {
                return Err(CloneError::ArityMismatch(format!(
                    "{}-ary operation in a system of arity {arity}",
                    op.arity()
                )));
            }
            if op.carrier() != carrier {
                return Err(CloneError::CarrierMismatch(carrier, op.carrier()));
            }
        }
        Ok(EquationSystem {
            arity,
            carrier,
            pairs,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn pairs(&self) -> &[(OpTable, OpTable)] {
        &self.pairs
    }
}

/// All tuples satisfying every equation of the system.
pub fn solve(system: &EquationSystem) -> Relation {
    Relation::from_predicate(system.arity, system.carrier, |a| {
        system.pairs.iter().all(|(l, r)| l.apply(a) == r.apply(a))
    })
}

/// `Eq(T)` as a partition of the clone slice: two operations share a block iff they
/// agree on every tuple of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqTheory {
    arity: usize,
    carrier: usize,
    blocks: Vec<Vec<OpTable>>,
}

impl EqTheory {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn blocks(&self) -> &[Vec<OpTable>] {
        &self.blocks
    }

    /// Whether `f = g` belongs to the theory. Operations outside the slice are never related.
    pub fn relates(&self, f: &OpTable, g: &OpTable) -> bool {
        self.blocks
            .iter()
            .any(|block| block.contains(f) && block.contains(g))
    }

    /// The equations `first = other` for every block with more than one member; together
    /// they generate the whole theory.
    pub fn generating_pairs(&self) -> impl Iterator<Item = (&OpTable, &OpTable)> {
        self.blocks
            .iter()
            .flat_map(|block| block[1..].iter().map(move |g| (&block[0], g)))
    }

    pub fn to_system(&self) -> EquationSystem {
        EquationSystem {
            arity: self.arity,
            carrier: self.carrier,
            pairs: self
                .generating_pairs()
                .map(|(f, g)| (f.clone(), g.clone()))
                .collect(),
        }
    }

    /// True when no block has two members, i.e. `T` satisfies only trivial equations.
    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

pub fn equations_of(
    t: &Relation,
    generators: &[OpTable],
    limit: usize,
) -> Result<EqTheory, CloneError> {
    let carrier = generators.first().map_or(t.carrier(), OpTable::carrier);
    if carrier != t.carrier() {
        return Err(CloneError::CarrierMismatch(carrier, t.carrier()));
    }
    let slice = clone_slice(generators, t.arity(), limit)?;
    let mut blocks: BTreeMap<Vec<Elem>, Vec<OpTable>> = BTreeMap::new();
    for op in slice {
        let key: Vec<Elem> = t.tuples().iter().map(|a| op.apply(a)).collect();
        blocks.entry(key).or_default().push(op);
    }
    let mut blocks: Vec<Vec<OpTable>> = blocks.into_values().collect();
    blocks.sort();
    Ok(EqTheory {
        arity: t.arity(),
        carrier,
        blocks,
    })
}

/// `Sol(Eq(T))`, read off the partition: a tuple qualifies when every block is constant on it.
pub fn closure_of_theory(theory: &EqTheory) -> Relation {
    Relation::from_predicate(theory.arity, theory.carrier, |a| {
        theory.blocks.iter().all(|block| {
            let v = block[0].apply(a);
            block[1..].iter().all(|g| g.apply(a) == v)
        })
    })
}

pub fn galois_closure(
    t: &Relation,
    generators: &[OpTable],
    limit: usize,
) -> Result<Relation, CloneError> {
    Ok(closure_of_theory(&equations_of(t, generators, limit)?))
}

/// Answer to "is `T` the solution set of some system of equations?".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSetVerdict {
    /// `T = Sol(Eq(T))`; the theory is the certificate.
    SolutionSet(EqTheory),
    /// `gap` satisfies every equation that holds on `T` but is not in `T`.
    NotSolutionSet { gap: Vec<Elem>, closure: Relation },
    /// The clone slice was too large to enumerate.
    Unknown(CloneError),
}

impl SolutionSetVerdict {
    pub fn gap(&self) -> Option<&[Elem]> {
        match self {
            SolutionSetVerdict::NotSolutionSet { gap, .. } => Some(gap),
            _ => None,
        }
    }
}

pub fn is_solution_set(
    t: &Relation,
    generators: &[OpTable],
    limit: usize,
) -> Result<SolutionSetVerdict, CloneError> {
    let theory = match equations_of(t, generators, limit) {
        Ok(theory) => theory,
        Err(e @ CloneError::LimitExceeded { .. }) => return Ok(SolutionSetVerdict::Unknown(e)),
        Err(e) => return Err(e),
    };
    let closure = closure_of_theory(&theory);
    let gap = closure.tuples().iter().find(|a| !t.contains(a)).cloned();
    Ok(match gap {
        None => SolutionSetVerdict::SolutionSet(theory),
        Some(gap) => SolutionSetVerdict::NotSolutionSet { gap, closure },
    })
}

/// Whether every tuple of `A^n` satisfies `f = g`, which is how a trivial equation looks.
pub fn is_identity(f: &OpTable, g: &OpTable) -> bool {
    let mut same = true;
    for_each_tuple(f.carrier(), f.arity(), |a| same &= f.apply(a) == g.apply(a));
    same
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::fixtures;
    use crate::funclone::{centralizer_slice, closure_under, graph, pad_and_identify};
    use crate::Algebra;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const BIG: usize = 100_000;

    fn system_of(a: &Algebra, n: usize, pairs: &[(usize, usize)]) -> EquationSystem {
        let slice = clone_slice(&a.generators(), n, BIG).unwrap();
        let pairs = pairs
            .iter()
            .map(|&(i, j)| (slice[i].clone(), slice[j].clone()))
            .collect();
        EquationSystem::new(n, a.carrier(), pairs).unwrap()
    }

    fn random_system(a: &Algebra, n: usize, rng: &mut ChaCha8Rng) -> EquationSystem {
        let slice = clone_slice(&a.generators(), n, BIG).unwrap();
        let count = rng.gen_range(0..=3);
        let pairs = (0..count)
            .map(|_| {
                (
                    slice.choose(rng).unwrap().clone(),
                    slice.choose(rng).unwrap().clone(),
                )
            })
            .collect();
        EquationSystem::new(n, a.carrier(), pairs).unwrap()
    }

    fn meet_and_join(a: &Algebra, n: usize) -> (OpTable, OpTable) {
        let e: Vec<OpTable> = (0..n)
            .map(|i| OpTable::projection(n, i, a.carrier()).unwrap())
            .collect();
        let meet = crate::funclone::compose(a.meet_op(), &[e[0].clone(), e[1].clone()]).unwrap();
        let join =
            crate::funclone::compose(a.join_op().unwrap(), &[e[0].clone(), e[1].clone()]).unwrap();
        (meet, join)
    }

    #[test]
    fn empty_system_is_everything() {
        let e = EquationSystem::new(2, 3, vec![]).unwrap();
        assert_eq!(solve(&e), Relation::full(2, 3));
    }

    #[test]
    fn meet_equals_join_forces_equality() {
        let a = Algebra::lattice(&fixtures::chain(2));
        let (meet, join) = meet_and_join(&a, 2);
        let e = EquationSystem::new(2, 2, vec![(meet, join)]).unwrap();
        assert_eq!(solve(&e).tuples(), &[vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn meet_absorbing_left_is_the_order() {
        let n5 = fixtures::n5();
        let a = Algebra::lattice(&n5);
        let (meet, _) = meet_and_join(&a, 2);
        let x = OpTable::projection(2, 0, 5).unwrap();
        let sol = solve(&EquationSystem::new(2, 5, vec![(meet, x)]).unwrap());
        let order = Relation::from_predicate(2, 5, |t| n5.leq(t[0], t[1]));
        assert_eq!(sol, order);
        assert_eq!(sol.len(), 13);
    }

    #[test]
    fn system_validation() {
        let x = OpTable::projection(2, 0, 3).unwrap();
        let y = OpTable::projection(1, 0, 3).unwrap();
        assert!(EquationSystem::new(2, 3, vec![(x.clone(), y)]).is_err());
        let z = OpTable::projection(2, 0, 2).unwrap();
        assert!(EquationSystem::new(2, 3, vec![(x, z)]).is_err());
    }

    #[test]
    fn full_relation_satisfies_only_identities() {
        for l in [fixtures::chain(3), fixtures::n5()] {
            let a = Algebra::lattice(&l);
            let theory = equations_of(&Relation::full(2, l.size()), &a.generators(), BIG).unwrap();
            assert!(theory.is_trivial());
            assert_eq!(theory.blocks().len(), 4);
        }
    }

    #[test]
    fn solution_sets_are_recognized() {
        let a = Algebra::lattice(&fixtures::chain(3));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(1..=3);
            let sol = solve(&random_system(&a, n, &mut rng));
            assert_eq!(galois_closure(&sol, &a.generators(), BIG).unwrap(), sol);
            assert!(matches!(
                is_solution_set(&sol, &a.generators(), BIG).unwrap(),
                SolutionSetVerdict::SolutionSet(_)
            ));
        }
    }

    #[test]
    fn pentagon_pair_set_is_not_a_solution_set() {
        let n5 = fixtures::n5();
        let a = Algebra::lattice(&n5);
        // T = {(x, y) : ∃u. u∧x = u∧y and u∨x = u∨y}, by direct search.
        let t = Relation::from_predicate(2, 5, |p| {
            (0..5).any(|u| {
                n5.meet(u, p[0]) == n5.meet(u, p[1]) && n5.join(u, p[0]) == n5.join(u, p[1])
            })
        });
        assert!(!t.contains(&[0, 4]));
        let theory = equations_of(&t, &a.generators(), BIG).unwrap();
        assert!(theory.is_trivial());
        assert_eq!(
            galois_closure(&t, &a.generators(), BIG).unwrap(),
            Relation::full(2, 5)
        );
        let verdict = is_solution_set(&t, &a.generators(), BIG).unwrap();
        assert_eq!(verdict.gap(), Some(&[0, 1][..]));
        assert!(!t.contains(&[0, 1]));
    }

    #[test]
    fn chain_triples_with_symmetric_difference_outside_are_a_gap() {
        let c3 = fixtures::chain(3);
        let a = Algebra::lattice(&c3);
        // 0 ↦ {}, m ↦ {1}, 1 ↦ {1, 2}: x △ y △ z must land on one of these masks.
        let mask = [0b00usize, 0b01, 0b11];
        let t = Relation::from_predicate(3, 3, |p| {
            mask.contains(&(mask[p[0]] ^ mask[p[1]] ^ mask[p[2]]))
        });
        assert!(!t.contains(&[0, 1, 2]));
        assert_eq!(
            galois_closure(&t, &a.generators(), BIG).unwrap(),
            Relation::full(3, 3)
        );
    }

    #[test]
    fn unknown_when_slice_overflows() {
        let a = Algebra::lattice(&fixtures::n5());
        let t = Relation::full(3, 5);
        assert!(matches!(
            is_solution_set(&t, &a.generators(), 10).unwrap(),
            SolutionSetVerdict::Unknown(CloneError::LimitExceeded { .. })
        ));
        assert!(galois_closure(&t, &a.generators(), 10).is_err());
    }

    #[test]
    fn galois_operator_laws_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in [fixtures::chain(3), fixtures::boolean(2), fixtures::m3()] {
            for a in [Algebra::lattice(&l), Algebra::semilattice(&l.meet_reduct())] {
                let gens = a.generators();
                for _ in 0..5 {
                    let n = rng.gen_range(1..=2);
                    let all = Relation::full(n, l.size());
                    let small: Vec<Vec<Elem>> = all
                        .tuples()
                        .iter()
                        .filter(|_| rng.gen_bool(0.2))
                        .cloned()
                        .collect();
                    let mut large = small.clone();
                    large.extend(all.tuples().iter().filter(|_| rng.gen_bool(0.2)).cloned());
                    let small = Relation::new(n, l.size(), small).unwrap();
                    let large = Relation::new(n, l.size(), large).unwrap();
                    let cs = galois_closure(&small, &gens, BIG).unwrap();
                    let cl = galois_closure(&large, &gens, BIG).unwrap();
                    assert!(small.is_subset(&cs));
                    assert!(cs.is_subset(&cl));
                    assert_eq!(galois_closure(&cs, &gens, BIG).unwrap(), cs);
                }
            }
        }
    }

    #[test]
    fn every_block_yields_a_superset() {
        let a = Algebra::lattice(&fixtures::boolean(2));
        let t = Relation::new(2, 4, vec![vec![0, 1], vec![1, 1], vec![2, 3]]).unwrap();
        let theory = equations_of(&t, &a.generators(), BIG).unwrap();
        for block in theory.blocks() {
            let pairs = block[1..]
                .iter()
                .map(|g| (block[0].clone(), g.clone()))
                .collect();
            let sol = solve(&EquationSystem::new(2, 4, pairs).unwrap());
            assert!(t.is_subset(&sol));
        }
        assert!(theory.relates(&theory.blocks()[0][0], &theory.blocks()[0][0]));
    }

    #[test]
    fn solution_sets_are_closed_under_the_centralizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for l in [fixtures::chain(3), fixtures::n5()] {
            let a = Algebra::lattice(&l);
            let cent: Vec<OpTable> = (1..=2)
                .flat_map(|k| centralizer_slice(&a.generators(), k, BIG).unwrap())
                .collect();
            for _ in 0..5 {
                let sol = solve(&random_system(&a, 2, &mut rng));
                assert_eq!(closure_under(&sol, &cent, 1_000_000).unwrap(), sol);
            }
        }
    }

    #[test]
    fn padded_operation_equation_defines_the_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let n = rng.gen_range(1..=2);
            let f = OpTable::from_fn(n, 3, |_| rng.gen_range(0..3));
            let padded = pad_and_identify(&f, n + 1, &(0..n).collect::<Vec<_>>()).unwrap();
            let last = OpTable::projection(n + 1, n, 3).unwrap();
            let sol = solve(&EquationSystem::new(n + 1, 3, vec![(padded, last)]).unwrap());
            assert_eq!(sol, graph(&f));
        }
    }

    #[test]
    fn identities() {
        let a = Algebra::lattice(&fixtures::chain(2));
        let s = system_of(&a, 2, &[(0, 1)]);
        let (f, g) = &s.pairs()[0];
        assert!(!is_identity(f, g));
        assert!(is_identity(f, f));
    }
}

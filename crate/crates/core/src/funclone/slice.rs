use std::collections::HashMap;

use super::{same_carrier, CloneError, OpTable, Relation, Term};
use crate::{tuples, Elem};

/// The `n`-ary part of the clone generated by `generators`: projections closed under
/// pointwise application of the generators, sorted by value table.
///
/// Every member carries a provenance term over generator indices. Terms are found in
/// breadth-first order, so each is of minimal nesting depth.
pub fn clone_slice(
    generators: &[OpTable],
    n: usize,
    limit: usize,
) -> Result<Vec<OpTable>, CloneError> {
    let gen_refs: Vec<&OpTable> = generators.iter().collect();
    let carrier = same_carrier(&gen_refs)?;
    if n == 0 {
        return Err(CloneError::BadIndex { index: 0, arity: 0 });
    }
    let mut members: Vec<OpTable> = (0..n)
        .map(|i| OpTable::projection(n, i, carrier))
        .collect::<Result<_, _>>()?;
    members.dedup();
    let mut seen: HashMap<Vec<Elem>, usize> = members
        .iter()
        .enumerate()
        .map(|(i, m)| (m.values().to_vec(), i))
        .collect();
    let mut frontier = 0;
    while frontier < members.len() {
        let known = members.len();
        for (gi, g) in generators.iter().enumerate() {
            for pick in tuples(known, g.arity()) {
                if pick.iter().all(|&i| i < frontier) {
                    continue;
                }
                let mut args = vec![0; g.arity()];
                let values: Vec<Elem> = (0..members[0].values().len())
                    .map(|x| {
                        for (a, &i) in args.iter_mut().zip(&pick) {
                            *a = members[i].values()[x];
                        }
                        g.apply(&args)
                    })
                    .collect();
                if seen.contains_key(&values) {
                    continue;
                }
                if members.len() >= limit {
                    return Err(CloneError::LimitExceeded {
                        what: "clone slice",
                        limit,
                    });
                }
                let term = Term::App(
                    gi,
                    pick.iter()
                        .map(|&i| {
                            members[i]
                                .provenance()
                                .cloned()
                                .expect("members carry terms")
                        })
                        .collect(),
                );
                seen.insert(values.clone(), members.len());
                members.push(OpTable::new(n, carrier, values)?.with_provenance(term));
            }
        }
        frontier = known;
    }
    members.sort();
    Ok(members)
}

/// Least superset of `rel` closed under componentwise application of every operation.
pub fn closure_under(
    rel: &Relation,
    ops: &[OpTable],
    limit: usize,
) -> Result<Relation, CloneError> {
    if let Some(op) = ops.iter().find(|op| op.carrier() != rel.carrier()) {
        return Err(CloneError::CarrierMismatch(rel.carrier(), op.carrier()));
    }
    let width = rel.arity();
    let mut members: Vec<Vec<Elem>> = rel.tuples().to_vec();
    let mut seen: std::collections::HashSet<Vec<Elem>> = members.iter().cloned().collect();
    if members.len() > limit {
        return Err(CloneError::LimitExceeded {
            what: "closure",
            limit,
        });
    }
    let mut frontier = 0;
    while frontier < members.len() {
        let known = members.len();
        for op in ops {
            let mut args = vec![0; op.arity()];
            for pick in tuples(known, op.arity()) {
                if pick.iter().all(|&i| i < frontier) {
                    continue;
                }
                let image: Vec<Elem> = (0..width)
                    .map(|c| {
                        for (a, &i) in args.iter_mut().zip(&pick) {
                            *a = members[i][c];
                        }
                        op.apply(&args)
                    })
                    .collect();
                if seen.insert(image.clone()) {
                    members.push(image);
                    if members.len() > limit {
                        return Err(CloneError::LimitExceeded {
                            what: "closure",
                            limit,
                        });
                    }
                }
            }
        }
        frontier = known;
    }
    Relation::new(width, rel.carrier(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::fixtures;
    use crate::funclone::compose;
    use crate::{for_each_tuple, Algebra};

    const BIG: usize = 100_000;

    #[test]
    fn binary_lattice_slice_on_two_elements() {
        let a = Algebra::lattice(&fixtures::chain(2));
        let slice = clone_slice(&a.generators(), 2, BIG).unwrap();
        assert_eq!(slice.len(), 4);
        // Oracle: the binary part of [∧, ∨] on {0, 1} is the non-constant monotone maps.
        let mut monotone = Vec::new();
        for bits in 0..16usize {
            let v: Vec<usize> = (0..4).map(|i| (bits >> i) & 1).collect();
            let mono = v[0] <= v[1] && v[0] <= v[2] && v[1] <= v[3] && v[2] <= v[3];
            if mono && v.contains(&0) && v.contains(&1) {
                monotone.push(OpTable::new(2, 2, v).unwrap());
            }
        }
        monotone.sort();
        assert_eq!(slice, monotone);
    }

    #[test]
    fn meet_slice_has_one_member_per_nonempty_subset() {
        for l in [fixtures::chain(3), fixtures::n5(), fixtures::boolean(2)] {
            let m = Algebra::semilattice(&l.meet_reduct());
            for n in 1..=3 {
                let slice = clone_slice(&m.generators(), n, BIG).unwrap();
                // Oracle: meets of nonempty variable subsets, tabulated directly.
                let mut subsets: Vec<OpTable> = (1..(1usize << n))
                    .map(|mask| {
                        OpTable::from_fn(n, l.size(), |x| {
                            (0..n)
                                .filter(|i| mask & (1 << i) != 0)
                                .fold(l.top(), |acc, i| l.meet(acc, x[i]))
                        })
                    })
                    .collect();
                subsets.sort();
                subsets.dedup();
                assert_eq!(subsets.len(), (1 << n) - 1);
                assert_eq!(slice, subsets);
            }
        }
    }

    #[test]
    fn ternary_distributive_slices_have_eighteen_members() {
        for l in [
            fixtures::chain(2),
            fixtures::chain(3),
            fixtures::boolean(2),
            fixtures::boolean(3),
        ] {
            let a = Algebra::lattice(&l);
            assert_eq!(clone_slice(&a.generators(), 3, BIG).unwrap().len(), 18);
        }
    }

    #[test]
    fn non_distributive_ternary_slices() {
        // Sizes measured independently by a Python fixpoint over value tuples.
        let n5 = Algebra::lattice(&fixtures::n5());
        assert_eq!(clone_slice(&n5.generators(), 3, BIG).unwrap().len(), 99);
        let m3 = Algebra::lattice(&fixtures::m3());
        assert_eq!(clone_slice(&m3.generators(), 3, BIG).unwrap().len(), 28);
        assert_eq!(
            clone_slice(&n5.generators(), 3, 50),
            Err(CloneError::LimitExceeded {
                what: "clone slice",
                limit: 50
            })
        );
    }

    #[test]
    fn slices_are_closed_and_terms_match_tables() {
        let l = fixtures::m3();
        let a = Algebra::lattice(&l);
        let gens = a.generators();
        let slice = clone_slice(&gens, 2, BIG).unwrap();
        for f in &slice {
            for g in &slice {
                for op in &gens {
                    let h = compose(op, &[f.clone(), g.clone()]).unwrap();
                    assert!(slice.contains(&h));
                }
            }
            let term = f.provenance().unwrap();
            for_each_tuple(5, 2, |x| assert_eq!(a.eval_term(term, x), f.apply(x)));
        }
    }

    #[test]
    fn closure_examples() {
        let a = Algebra::lattice(&fixtures::chain(2));
        let gens = a.generators();
        let single = Relation::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(closure_under(&single, &gens, BIG).unwrap(), single);
        let pair = Relation::new(2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            closure_under(&pair, &gens, BIG).unwrap(),
            Relation::full(2, 2)
        );
        let projections: Vec<OpTable> = (0..3)
            .map(|i| OpTable::projection(3, i, 2).unwrap())
            .collect();
        assert_eq!(closure_under(&pair, &projections, BIG).unwrap(), pair);
        assert!(matches!(
            closure_under(&pair, &gens, 3),
            Err(CloneError::LimitExceeded { .. })
        ));
    }
}

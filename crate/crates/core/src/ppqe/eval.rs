use super::{Atom, PpError, PpFormula};
use crate::funclone::Relation;
use crate::{for_each_tuple, Algebra, Elem};

/// The relation defined by `formula`: every assignment of the free variables for which some
/// assignment of the bound variables satisfies all atoms.
pub fn eval_formula(formula: &PpFormula, algebra: &Algebra) -> Result<Relation, PpError> {
    formula.check_mode(algebra.mode())?;
    let n = formula.arity();
    let m = formula.bound_vars().len();
    let size = algebra.carrier();
    // Atoms without bound variables are checked once per free assignment.
    let bound_mask = (n..n + m).fold(0u64, |acc, i| acc | 1 << i);
    let (outer, inner): (Vec<&Atom>, Vec<&Atom>) = formula
        .atoms()
        .iter()
        .partition(|a| a.vars().bits() & bound_mask == 0);

    let mut values: Vec<Elem> = vec![0; n + m];
    let mut tuples = Vec::new();
    for_each_tuple(size, n, |free| {
        values[..n].copy_from_slice(free);
        if !outer.iter().all(|a| a.holds(algebra, &values)) {
            return;
        }
        if witness_exists(&inner, algebra, &mut values, n, size) {
            tuples.push(free.to_vec());
        }
    });
    Ok(Relation::new(n, size, tuples)?)
}

/// Odometer search over the bound slots `values[n..]`.
fn witness_exists(
    atoms: &[&Atom],
    algebra: &Algebra,
    values: &mut [Elem],
    n: usize,
    size: usize,
) -> bool {
    if atoms.is_empty() {
        return true;
    }
    if size == 0 {
        return false;
    }
    values[n..].fill(0);
    loop {
        if atoms.iter().all(|a| a.holds(algebra, values)) {
            return true;
        }
        let mut pos = values.len();
        loop {
            if pos == n {
                return false;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < size {
                break;
            }
            values[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::fixtures;
    use crate::ppqe::parse_formula;

    const PAIR_FORMULA: &str = "exists u . (u /\\ x = u /\\ y & u \\/ x = u \\/ y)";

    #[test]
    fn empty_conjunction_is_everything() {
        let a = Algebra::lattice(&fixtures::chain(3));
        let f = crate::ppqe::parse_formula_with(
            "true",
            &crate::ppqe::ParseOptions {
                free: Some(vec!["x".into(), "y".into()]),
                mode: None,
            },
        )
        .unwrap();
        assert_eq!(eval_formula(&f, &a).unwrap(), Relation::full(2, 3));
    }

    #[test]
    fn pentagon_witness_relation() {
        let n5 = fixtures::n5();
        let a = Algebra::lattice(&n5);
        let t = eval_formula(&parse_formula(PAIR_FORMULA).unwrap(), &a).unwrap();
        let [p, q, r] = ["p", "q", "r"].map(|s| n5.index_of(s).unwrap());
        assert!(t.contains(&[p, q]) && t.contains(&[q, p]));
        // r is a witness for (p, q).
        assert_eq!(n5.meet(r, p), n5.meet(r, q));
        assert_eq!(n5.join(r, p), n5.join(r, q));
        assert!(!t.contains(&[n5.bottom(), n5.top()]));
    }

    #[test]
    fn diamond_triples_in_meet_reduct() {
        let m3 = fixtures::m3();
        let a = Algebra::semilattice(&m3.meet_reduct());
        let f =
            parse_formula("exists u . (x /\\ y = u /\\ y & u /\\ x = x & u /\\ z = z)").unwrap();
        let t = eval_formula(&f, &a).unwrap();
        // The labeling that fits the membership claims: an atom, then bottom, then top.
        let [x, y, z] = ["a", "0", "1"].map(|s| m3.index_of(s).unwrap());
        assert!(t.contains(&[x, y, z]));
        assert!(t.contains(&[x, z, y]));
    }

    #[test]
    fn quantifier_free_matches_direct_check() {
        let n5 = fixtures::n5();
        let a = Algebra::lattice(&n5);
        let t = eval_formula(&parse_formula("x <= y").unwrap(), &a).unwrap();
        assert_eq!(t, Relation::from_predicate(2, 5, |p| n5.leq(p[0], p[1])));
    }

    #[test]
    fn join_rejected_by_semilattice_algebra() {
        let a = Algebra::semilattice(&fixtures::chain(2).meet_reduct());
        let f = parse_formula("x \\/ y = y").unwrap();
        assert_eq!(eval_formula(&f, &a), Err(PpError::JoinInSemilatticeMode));
    }

    #[test]
    fn witness_search_links_free_variables() {
        // Some u with y ≤ u ≤ x exists iff y ≤ x.
        let c3 = fixtures::chain(3);
        let a = Algebra::lattice(&c3);
        let f = parse_formula("exists u . u <= x & y <= u").unwrap();
        let t = eval_formula(&f, &a).unwrap();
        assert_eq!(t, Relation::from_predicate(2, 3, |p| p[1] <= p[0]));
    }
}

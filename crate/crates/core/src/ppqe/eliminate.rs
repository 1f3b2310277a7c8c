//! Quantifier elimination. Each bound variable `u` is removed from an inequality system by
//! sorting the items by where `u` occurs, turning the ones that mention it into intervals for
//! `u`, and replacing those by the pairwise conditions under which the intervals meet.

use super::ineq::{to_inequalities, Expr, IneqSystem, Inequality};
use super::interval::{helly_condition, Interval};
use super::{PpError, PpFormula};
use crate::finlat::{FiniteLattice, FiniteSemilattice, Structure};
use crate::Mode;

/// Removes variable `u` from the system. Lattice-mode systems must come from a Boolean
/// lattice, semilattice-mode systems from the meet-reduct of a distributive lattice.
pub fn eliminate_step(system: &IneqSystem, u: usize) -> Result<IneqSystem, PpError> {
    let mode = system.mode();
    let mut kept = Vec::new();
    let mut intervals = Vec::new();
    for item in system.items() {
        let left = item.lower.contains(u);
        let right = item.upper.vars().contains(u);
        let a = item.lower.without(u);
        match (mode, item.upper, left, right) {
            (_, _, false, false) => kept.push(*item),
            (Mode::Lattice, Expr::Join(b), true, false) => {
                intervals.push(Interval::below_residual(a, Expr::Join(b)))
            }
            (Mode::Lattice, Expr::Join(b), false, true) => {
                intervals.push(Interval::above_residual(a, Expr::Join(b.without(u))))
            }
            // a ∧ u ≤ b ∨ u always holds.
            (Mode::Lattice, Expr::Join(_), true, true) => {}
            (Mode::Semilattice, Expr::Meet(b), true, false) => {
                intervals.push(Interval::below_residual(a, Expr::Meet(b)))
            }
            // a ≤ b ∧ u splits into a ≤ b and a ≤ u.
            (Mode::Semilattice, Expr::Meet(b), false, true) => {
                kept.push(Inequality::new(a, Expr::Meet(b.without(u))));
                intervals.push(Interval::above(a));
            }
            // a ∧ u ≤ b ∧ u reduces to a ∧ u ≤ b.
            (Mode::Semilattice, Expr::Meet(b), true, true) => {
                intervals.push(Interval::below_residual(a, Expr::Meet(b.without(u))))
            }
            _ => return Err(PpError::Inexpressible),
        }
    }
    kept.extend(helly_condition(&intervals)?);
    Ok(IneqSystem::new(mode, kept).pruned())
}

fn eliminate_all(formula: &PpFormula, mode: Mode) -> Result<PpFormula, PpError> {
    formula.check_mode(mode)?;
    let formula = formula.drop_unused_bound();
    if formula.is_quantifier_free() {
        return Ok(formula);
    }
    let mut system = to_inequalities(formula.atoms(), mode)?.pruned();
    // Innermost quantifier first.
    for u in (formula.arity()..formula.vars().len()).rev() {
        system = eliminate_step(&system, u)?;
    }
    PpFormula::new(formula.free_vars().to_vec(), Vec::new(), system.to_atoms()?)
}

/// An equivalent quantifier-free formula over `{∧, ∨}`; refuses lattices that are not Boolean.
pub fn eliminate_boolean(formula: &PpFormula, l: &FiniteLattice) -> Result<PpFormula, PpError> {
    if l.is_boolean().is_none() {
        return Err(PpError::NotBoolean);
    }
    eliminate_all(formula, Mode::Lattice)
}

/// An equivalent quantifier-free formula over `{∧}`; refuses semilattices that are not the
/// meet-reduct of a distributive lattice.
pub fn eliminate_semilattice(
    formula: &PpFormula,
    m: &FiniteSemilattice,
) -> Result<PpFormula, PpError> {
    if m.top().is_none() {
        return Err(PpError::NotDistributive("no greatest element".into()));
    }
    if let Some([a, b, c]) = m.distributivity_violation() {
        return Err(PpError::NotDistributive(format!(
            "{} >= {} /\\ {} has no decomposition",
            m.name(a),
            m.name(b),
            m.name(c)
        )));
    }
    eliminate_all(formula, Mode::Semilattice)
}

/// Dispatches on the mode.
pub fn eliminate(formula: &PpFormula, s: &Structure, mode: Mode) -> Result<PpFormula, PpError> {
    match mode {
        Mode::Lattice => eliminate_boolean(formula, &s.to_lattice()?),
        Mode::Semilattice => eliminate_semilattice(formula, &s.to_semilattice()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::fixtures;
    use crate::ppqe::random::{random_formula, FormulaShape};
    use crate::ppqe::{eval_formula, parse_formula, parse_formula_with, ParseOptions};
    use crate::Algebra;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_lattice(text: &str, l: &FiniteLattice) -> PpFormula {
        let f = parse_formula(text).unwrap();
        let g = eliminate_boolean(&f, l).unwrap();
        assert!(g.is_quantifier_free());
        let a = Algebra::lattice(l);
        assert_eq!(
            eval_formula(&g, &a).unwrap(),
            eval_formula(&f, &a).unwrap(),
            "{g}"
        );
        g
    }

    fn check_semilattice(text: &str, l: &FiniteLattice) -> PpFormula {
        let f = parse_formula(text).unwrap();
        let m = l.meet_reduct();
        let g = eliminate_semilattice(&f, &m).unwrap();
        assert!(g.is_quantifier_free());
        assert!(!g.uses_join());
        let a = Algebra::semilattice(&m);
        assert_eq!(
            eval_formula(&g, &a).unwrap(),
            eval_formula(&f, &a).unwrap(),
            "{g}"
        );
        g
    }

    #[test]
    fn boolean_pairing_example() {
        let g = check_lattice(
            "exists u . (x /\\ u <= y & z <= y \\/ u)",
            &fixtures::boolean(2),
        );
        assert_eq!(g.to_string(), "x /\\ z <= y");
        check_lattice(
            "exists u . (x /\\ u <= y & z <= y \\/ u)",
            &fixtures::boolean(3),
        );
    }

    #[test]
    fn both_sides_case_is_dropped() {
        let g = check_lattice("exists u . (x /\\ u <= y /\\ u)", &fixtures::boolean(2));
        // Only upper bounds on u remain, so u = 0 is always a witness.
        assert_eq!(g.to_string(), "true");
    }

    #[test]
    fn no_bound_variables_is_unchanged() {
        let f = parse_formula("x \\/ y = y /\\ z").unwrap();
        assert_eq!(eliminate_boolean(&f, &fixtures::boolean(2)).unwrap(), f);
        let f = parse_formula("x /\\ y = y /\\ z").unwrap();
        assert_eq!(
            eliminate_semilattice(&f, &fixtures::chain(3).meet_reduct()).unwrap(),
            f
        );
    }

    #[test]
    fn unused_bound_variable_is_dropped() {
        let f = parse_formula("exists u . x /\\ y = y").unwrap();
        let g = eliminate_semilattice(&f, &fixtures::chain(3).meet_reduct()).unwrap();
        assert!(g.is_quantifier_free());
        assert_eq!(g.atoms(), f.atoms());
    }

    #[test]
    fn semilattice_pairing_example() {
        let g = check_semilattice("exists u . (x <= u & u /\\ y <= z)", &fixtures::chain(3));
        assert_eq!(g.to_string(), "x /\\ y <= z");
    }

    #[test]
    fn semilattice_both_sides_case() {
        let g = check_semilattice("exists u . (u /\\ x <= y /\\ x)", &fixtures::chain(3));
        assert_eq!(g.to_string(), "true");
        let g = check_semilattice(
            "exists u . (u /\\ x <= y /\\ u & z <= u)",
            &fixtures::boolean(2),
        );
        assert_eq!(g.to_string(), "x /\\ z <= y");
    }

    #[test]
    fn several_quantifiers() {
        check_lattice(
            "exists u v . (x /\\ u <= v & v <= y \\/ u & z /\\ v <= x)",
            &fixtures::boolean(3),
        );
        check_semilattice(
            "exists u v . (x <= u & u /\\ y <= v & v /\\ z <= x)",
            &fixtures::chain(4),
        );
    }

    #[test]
    fn refusals() {
        let f = parse_formula("exists u . x <= u").unwrap();
        assert_eq!(
            eliminate_boolean(&f, &fixtures::chain(3)),
            Err(PpError::NotBoolean)
        );
        assert_eq!(
            eliminate_boolean(&f, &fixtures::n5()),
            Err(PpError::NotBoolean)
        );
        assert!(matches!(
            eliminate_semilattice(&f, &fixtures::n5().meet_reduct()),
            Err(PpError::NotDistributive(_))
        ));
        assert!(matches!(
            eliminate_semilattice(&f, &fixtures::fence()),
            Err(PpError::NotDistributive(_))
        ));
        let j = parse_formula("exists u . x \\/ u = u").unwrap();
        assert_eq!(
            eliminate_semilattice(&j, &fixtures::chain(2).meet_reduct()),
            Err(PpError::JoinInSemilatticeMode)
        );
    }

    #[test]
    fn dispatch_by_mode() {
        let f = parse_formula("exists u . (x <= u & u <= y)").unwrap();
        let s = Structure::Lattice(fixtures::boolean(2));
        assert_eq!(
            eliminate(&f, &s, Mode::Lattice).unwrap().to_string(),
            "x <= y"
        );
        assert_eq!(
            eliminate(&f, &s, Mode::Semilattice).unwrap().to_string(),
            "x <= y"
        );
    }

    #[test]
    fn output_is_reparseable_and_stable() {
        let f = parse_formula("exists u . (x /\\ u <= y & z <= y \\/ u & x <= z \\/ y)").unwrap();
        let l = fixtures::boolean(2);
        let g = eliminate_boolean(&f, &l).unwrap();
        let opts = ParseOptions {
            free: Some(g.free_vars().to_vec()),
            mode: Some(Mode::Lattice),
        };
        let back = parse_formula_with(&g.to_string(), &opts).unwrap();
        assert_eq!(back, g);
        assert_eq!(eliminate_boolean(&back, &l).unwrap(), g);
    }

    fn round_trip(seed: u64, l: &FiniteLattice, mode: Mode) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, mode, &FormulaShape::default());
        let (g, a) = match mode {
            Mode::Lattice => (eliminate_boolean(&f, l).unwrap(), Algebra::lattice(l)),
            Mode::Semilattice => {
                let m = l.meet_reduct();
                (
                    eliminate_semilattice(&f, &m).unwrap(),
                    Algebra::semilattice(&m),
                )
            }
        };
        assert!(g.is_quantifier_free(), "{f} -> {g}");
        assert_eq!(g.free_vars(), f.free_vars());
        assert_eq!(
            eval_formula(&g, &a).unwrap(),
            eval_formula(&f, &a).unwrap(),
            "{f} -> {g}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn boolean_elimination_preserves_relation(seed in any::<u64>(), big in any::<bool>()) {
            round_trip(seed, &fixtures::boolean(if big { 3 } else { 2 }), Mode::Lattice);
        }

        #[test]
        fn semilattice_elimination_preserves_relation(seed in any::<u64>(), pick in 0usize..4) {
            let l = [fixtures::chain(3), fixtures::chain(4), fixtures::boolean(2), fixtures::boolean(3)][pick].clone();
            round_trip(seed, &l, Mode::Semilattice);
        }
    }
}

//! Random formulas for property tests and round-trip sampling.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Atom, PpFormula, TermExpr};
use crate::Mode;

const FREE_NAMES: [&str; 6] = ["x", "y", "z", "w", "s", "t"];
const BOUND_NAMES: [&str; 4] = ["u", "v", "p", "q"];

/// Size limits for [`random_formula`].
#[derive(Debug, Clone)]
pub struct FormulaShape {
    pub max_free: usize,
    pub max_bound: usize,
    pub max_atoms: usize,
    /// Depth of each side of an atom; 0 means a single variable.
    pub max_depth: usize,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape {
            max_free: 3,
            max_bound: 2,
            max_atoms: 6,
            max_depth: 2,
        }
    }
}

/// A formula with 1 to `max_free` free variables named `x, y, z, …`, up to `max_bound`
/// bound ones named `u, v, …` and up to `max_atoms` atoms. About half the atoms are
/// inequalities. Joins appear only in lattice mode.
pub fn random_formula<R: Rng>(rng: &mut R, mode: Mode, shape: &FormulaShape) -> PpFormula {
    let n = rng.gen_range(1..=shape.max_free.clamp(1, FREE_NAMES.len()));
    let m = rng.gen_range(0..=shape.max_bound.min(BOUND_NAMES.len()));
    let k = rng.gen_range(0..=shape.max_atoms);
    let vars: Vec<usize> = (0..n + m).collect();
    let atoms = (0..k)
        .map(|_| {
            let s = random_term(rng, mode, &vars, shape.max_depth);
            let t = random_term(rng, mode, &vars, shape.max_depth);
            if rng.gen_bool(0.5) {
                Atom::leq(s, t)
            } else {
                Atom::eq(s, t)
            }
        })
        .collect();
    let names = |list: &[&str], count: usize| list[..count].iter().map(|s| s.to_string()).collect();
    PpFormula::new(names(&FREE_NAMES, n), names(&BOUND_NAMES, m), atoms)
        .expect("generated names are distinct")
}

fn random_term<R: Rng>(rng: &mut R, mode: Mode, vars: &[usize], depth: usize) -> TermExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return TermExpr::Var(*vars.choose(rng).expect("at least one variable"));
    }
    let a = random_term(rng, mode, vars, depth - 1);
    let b = random_term(rng, mode, vars, depth - 1);
    if mode == Mode::Lattice && rng.gen_bool(0.5) {
        TermExpr::join(a, b)
    } else {
        TermExpr::meet(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_shape_and_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let shape = FormulaShape::default();
        for _ in 0..200 {
            let f = random_formula(&mut rng, Mode::Semilattice, &shape);
            assert!(!f.uses_join());
            assert!((1..=3).contains(&f.arity()));
            assert!(f.bound_vars().len() <= 2);
            assert!(f.atoms().len() <= 6);
        }
        let joins = (0..50)
            .filter(|_| random_formula(&mut rng, Mode::Lattice, &shape).uses_join())
            .count();
        assert!(joins > 0);
    }

    #[test]
    fn deterministic_per_seed() {
        let shape = FormulaShape::default();
        let a = random_formula(&mut ChaCha8Rng::seed_from_u64(9), Mode::Lattice, &shape);
        let b = random_formula(&mut ChaCha8Rng::seed_from_u64(9), Mode::Lattice, &shape);
        assert_eq!(a, b);
    }
}

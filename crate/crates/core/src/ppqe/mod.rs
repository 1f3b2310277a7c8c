//! Primitive positive formulas over `{∧, ∨}` or `{∧}`: a small text syntax, brute-force
//! evaluation, normalization to inequality systems and quantifier elimination.
//!
//! Formulas look like
//!
//! ```text
//! exists u . (x /\ u <= y & z <= y \/ u)
//! ```
//!
//! `/\` is meet, `\/` is join, `&` separates atoms and `s <= t` is sugar for `s = s /\ t`.
//! `true` is the empty conjunction. Free variables are ordered by first appearance unless
//! given explicitly.

mod eliminate;
mod eval;
mod ineq;
mod interval;
mod parse;
pub mod random;

use std::fmt;

use thiserror::Error;

use crate::algebra::{Algebra, JOIN, MEET};
use crate::eqsol::EquationSystem;
use crate::finlat::LatticeError;
use crate::funclone::{CloneError, OpTable, Term};
use crate::{Elem, Mode};

pub use eliminate::{eliminate, eliminate_boolean, eliminate_semilattice, eliminate_step};
pub use eval::eval_formula;
pub use ineq::{to_inequalities, Expr, IneqSystem, Inequality, VarSet};
pub use interval::{
    helly_condition, helly_nonempty, residuate_cross, residuate_join, residuate_meet, Bound,
    Interval, SymbolicValues,
};
pub use parse::{parse_formula, parse_formula_with, ParseOptions};

/// Largest number of variables a formula may mention; variable sets are bitmasks.
pub const MAX_VARS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PpError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("variable {0:?} declared twice")]
    DuplicateVariable(String),
    #[error("join is not available in semilattice mode")]
    JoinInSemilatticeMode,
    #[error("formula uses {0} variables; at most 64 are supported")]
    TooManyVariables(usize),
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("formula still has quantified variables")]
    NotQuantifierFree,
    #[error("quantifier elimination over {{∧, ∨}} needs a Boolean lattice")]
    NotBoolean,
    #[error("quantifier elimination over {{∧}} needs a distributive lattice: {0}")]
    NotDistributive(String),
    #[error("inequality with an empty side cannot be written as an atom")]
    Inexpressible,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Clone(#[from] CloneError),
}

/// A term built from variables with binary meet and join.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermExpr {
    Var(usize),
    Meet(Box<TermExpr>, Box<TermExpr>),
    Join(Box<TermExpr>, Box<TermExpr>),
}

impl TermExpr {
    pub fn var(i: usize) -> Self {
        TermExpr::Var(i)
    }

    pub fn meet(a: TermExpr, b: TermExpr) -> Self {
        TermExpr::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: TermExpr, b: TermExpr) -> Self {
        TermExpr::Join(Box::new(a), Box::new(b))
    }

    /// Left-nested meet of the listed variables; `None` for an empty list.
    pub fn meet_of(vars: impl IntoIterator<Item = usize>) -> Option<Self> {
        vars.into_iter().map(TermExpr::Var).reduce(TermExpr::meet)
    }

    pub fn join_of(vars: impl IntoIterator<Item = usize>) -> Option<Self> {
        vars.into_iter().map(TermExpr::Var).reduce(TermExpr::join)
    }

    pub fn vars(&self) -> VarSet {
        match self {
            TermExpr::Var(i) => VarSet::single(*i),
            TermExpr::Meet(a, b) | TermExpr::Join(a, b) => a.vars().union(b.vars()),
        }
    }

    pub fn uses_join(&self) -> bool {
        match self {
            TermExpr::Var(_) => false,
            TermExpr::Meet(a, b) => a.uses_join() || b.uses_join(),
            TermExpr::Join(..) => true,
        }
    }

    /// Value of the term; joins are read from the algebra, so semilattice algebras must
    /// only see join-free terms.
    pub fn eval(&self, algebra: &Algebra, values: &[Elem]) -> Elem {
        match self {
            TermExpr::Var(i) => values[*i],
            TermExpr::Meet(a, b) => algebra.meet(a.eval(algebra, values), b.eval(algebra, values)),
            TermExpr::Join(a, b) => algebra
                .join(a.eval(algebra, values), b.eval(algebra, values))
                .expect("join evaluated in semilattice mode"),
        }
    }

    /// The same term as a generic clone term over generators `[∧, ∨]`.
    pub fn to_term(&self) -> Term {
        match self {
            TermExpr::Var(i) => Term::Var(*i),
            TermExpr::Meet(a, b) => Term::App(MEET, vec![a.to_term(), b.to_term()]),
            TermExpr::Join(a, b) => Term::App(JOIN, vec![a.to_term(), b.to_term()]),
        }
    }

    /// The `arity`-ary term operation, with provenance attached.
    pub fn to_op(&self, algebra: &Algebra, arity: usize) -> OpTable {
        OpTable::from_fn(arity, algebra.carrier(), |a| self.eval(algebra, a))
            .with_provenance(self.to_term())
    }

    fn max_var(&self) -> usize {
        match self {
            TermExpr::Var(i) => *i,
            TermExpr::Meet(a, b) | TermExpr::Join(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        parse::write_term(&mut out, self, names);
        out
    }
}

/// One equation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub lhs: TermExpr,
    pub rhs: TermExpr,
}

impl Atom {
    pub fn eq(lhs: TermExpr, rhs: TermExpr) -> Self {
        Atom { lhs, rhs }
    }

    /// `s ≤ t`, stored as `s = s ∧ t`.
    pub fn leq(s: TermExpr, t: TermExpr) -> Self {
        Atom {
            rhs: TermExpr::meet(s.clone(), t),
            lhs: s,
        }
    }

    /// `Some(t)` when the atom has the shape `s = s ∧ t`.
    pub fn as_leq(&self) -> Option<&TermExpr> {
        match &self.rhs {
            TermExpr::Meet(s, t) if **s == self.lhs => Some(t),
            _ => None,
        }
    }

    pub fn vars(&self) -> VarSet {
        self.lhs.vars().union(self.rhs.vars())
    }

    pub fn uses_join(&self) -> bool {
        self.lhs.uses_join() || self.rhs.uses_join()
    }

    pub fn holds(&self, algebra: &Algebra, values: &[Elem]) -> bool {
        self.lhs.eval(algebra, values) == self.rhs.eval(algebra, values)
    }
}

/// `∃ bound . atom₁ & … & atomₖ` with free variables `vars[..free]` and bound variables
/// `vars[free..]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PpFormula {
    vars: Vec<String>,
    free: usize,
    atoms: Vec<Atom>,
}

impl PpFormula {
    pub fn new(free: Vec<String>, bound: Vec<String>, atoms: Vec<Atom>) -> Result<Self, PpError> {
        let free_count = free.len();
        let vars: Vec<String> = free.into_iter().chain(bound).collect();
        if vars.len() > MAX_VARS {
            return Err(PpError::TooManyVariables(vars.len()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(PpError::DuplicateVariable(v.clone()));
            }
        }
        for atom in &atoms {
            let top = atom.lhs.max_var().max(atom.rhs.max_var());
            if top >= vars.len() {
                return Err(PpError::BadVariable(top));
            }
        }
        Ok(PpFormula {
            vars,
            free: free_count,
            atoms,
        })
    }

    /// Number of free variables, i.e. the arity of the defined relation.
    pub fn arity(&self) -> usize {
        self.free
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn free_vars(&self) -> &[String] {
        &self.vars[..self.free]
    }

    pub fn bound_vars(&self) -> &[String] {
        &self.vars[self.free..]
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.free == self.vars.len()
    }

    pub fn uses_join(&self) -> bool {
        self.atoms.iter().any(Atom::uses_join)
    }

    /// Checks that the formula fits the signature of `mode`.
    pub fn check_mode(&self, mode: Mode) -> Result<(), PpError> {
        if mode == Mode::Semilattice && self.uses_join() {
            return Err(PpError::JoinInSemilatticeMode);
        }
        Ok(())
    }

    /// The same formula without the bound variables that no atom mentions.
    pub fn drop_unused_bound(&self) -> PpFormula {
        let used = self
            .atoms
            .iter()
            .fold(VarSet::EMPTY, |acc, a| acc.union(a.vars()));
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| i < self.free || used.contains(i))
            .collect();
        self.project(&keep)
    }

    /// Keeps the variables listed in `keep` (which must include every mentioned one and all
    /// free variables), renumbering them densely.
    fn project(&self, keep: &[usize]) -> PpFormula {
        let mut map = vec![usize::MAX; self.vars.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        fn rename(t: &TermExpr, map: &[usize]) -> TermExpr {
            match t {
                TermExpr::Var(i) => TermExpr::Var(map[*i]),
                TermExpr::Meet(a, b) => TermExpr::meet(rename(a, map), rename(b, map)),
                TermExpr::Join(a, b) => TermExpr::join(rename(a, map), rename(b, map)),
            }
        }
        PpFormula {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            free: self.free,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::eq(rename(&a.lhs, &map), rename(&a.rhs, &map)))
                .collect(),
        }
    }

    /// A quantifier-free formula read as a system of equations between term operations.
    pub fn to_equation_system(&self, algebra: &Algebra) -> Result<EquationSystem, PpError> {
        if !self.is_quantifier_free() {
            return Err(PpError::NotQuantifierFree);
        }
        self.check_mode(algebra.mode())?;
        let n = self.arity();
        let pairs = self
            .atoms
            .iter()
            .map(|a| (a.lhs.to_op(algebra, n), a.rhs.to_op(algebra, n)))
            .collect();
        Ok(EquationSystem::new(n, algebra.carrier(), pairs)?)
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::render_formula(self))
    }
}

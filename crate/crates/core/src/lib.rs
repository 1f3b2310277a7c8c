//! Exact computations with equations over finite lattices and meet-semilattices.
//!
//! The crate covers four layers:
//!
//! * [`finlat`]: finite lattices and semilattices given by Hasse diagrams or
//!   meet tables, with distributivity, complementation, median, the
//!   join-irreducible embedding and the ternary symmetric difference.
//! * [`funclone`]: operations as value tables, composition, commutation,
//!   preservation of relations, clone slices, centralizer slices and closure
//!   of tuple sets.
//! * [`eqsol`]: solution sets of equation systems, the equational theory of a
//!   tuple set and the `Sol ∘ Eq` closure that decides whether a set of tuples
//!   is a solution set.
//! * [`ppqe`]: primitive positive formulas (parser, evaluator, normal forms)
//!   and quantifier elimination for Boolean lattices and distributive
//!   semilattices.
//!
//! [`sdc`] combines them into a decision procedure that says when solution
//! sets are exactly the sets closed under the centralizer clone, and returns
//! checked witnesses when they are not.
//!
//! Elements of a carrier are always dense indices `0..size`. Labels are kept
//! for display only.

pub mod algebra;
pub mod eqsol;
pub mod finlat;
pub mod funclone;
pub mod limits;
pub mod ppqe;
pub mod sdc;

pub use algebra::{Algebra, Mode};
pub use finlat::{FiniteLattice, FiniteSemilattice, LatticeError, LatticeSpec, Structure};
pub use funclone::{CloneError, OpTable, Relation};
pub use limits::Limits;
pub use ppqe::{PpError, PpFormula, TermExpr};

/// Element of a finite carrier, as a dense index.
pub type Elem = usize;

/// Outcome of a check that either holds or comes with a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// Calls `f` on every tuple of `A^arity` in row-major order (last coordinate fastest).
pub(crate) fn for_each_tuple(carrier: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    let mut tuple = vec![0; arity];
    if arity > 0 && carrier == 0 {
        return;
    }
    loop {
        f(&tuple);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < carrier {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Iterator over `A^arity` in row-major order, for searches that stop early.
pub(crate) struct Tuples {
    carrier: usize,
    next: Option<Vec<Elem>>,
}

pub(crate) fn tuples(carrier: usize, arity: usize) -> Tuples {
    Tuples {
        carrier,
        next: (arity == 0 || carrier > 0).then(|| vec![0; arity]),
    }
}

impl Iterator for Tuples {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        while pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.carrier {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}

/// Row-major index of `tuple` in `A^tuple.len()`.
pub(crate) fn tuple_index(carrier: usize, tuple: &[Elem]) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * carrier + x)
}

/// Inverse of [`tuple_index`].
pub(crate) fn index_tuple(carrier: usize, arity: usize, mut index: usize) -> Vec<Elem> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % carrier;
        index /= carrier;
    }
    out
}

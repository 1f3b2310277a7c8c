//! Finite lattices and meet-semilattices given by explicit operation tables.

mod analysis;
mod build;
pub mod fixtures;
mod semilattice;

use std::fmt;

use thiserror::Error;

use crate::Elem;

pub use analysis::{BooleanStructure, Embedding, ForbiddenKind, ForbiddenSublattice, Median};
pub use build::{CoverEnd, Kind, LatticeSpec};
pub use semilattice::FiniteSemilattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Idempotence,
    Commutativity,
    Associativity,
    Absorption,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Law::Idempotence => "idempotence",
            Law::Commutativity => "commutativity",
            Law::Associativity => "associativity",
            Law::Absorption => "absorption",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a lattice: {a} and {b} have no {bound}")]
    NotALattice {
        a: String,
        b: String,
        bound: &'static str,
    },
    #[error("{table} table violates {law} at {elems:?}")]
    AxiomViolation {
        table: &'static str,
        law: Law,
        elems: Vec<Elem>,
    },
    #[error("bad specification: {0}")]
    BadSpec(String),
    #[error("carrier of size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("semilattice has no greatest element")]
    NoGreatestElement,
}

/// A finite lattice with dense element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    distributive: bool,
}

impl FiniteLattice {
    /// Builds a lattice from complete meet and join tables, checking every lattice axiom.
    pub fn from_tables(
        names: Vec<String>,
        meet: Vec<Vec<Elem>>,
        join: Vec<Vec<Elem>>,
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        build::check_labels(&names)?;
        let meet = build::flatten_table(n, meet, "meet")?;
        let join = build::flatten_table(n, join, "join")?;
        build::check_semilattice_laws(n, &meet, "meet")?;
        build::check_semilattice_laws(n, &join, "join")?;
        for x in 0..n {
            for y in 0..n {
                if meet[x * n + join[x * n + y]] != x || join[x * n + meet[x * n + y]] != x {
                    return Err(LatticeError::AxiomViolation {
                        table: "meet/join",
                        law: Law::Absorption,
                        elems: vec![x, y],
                    });
                }
            }
        }
        Ok(Self::assemble(names, meet, join))
    }

    /// Tables are assumed valid.
    pub(crate) fn assemble(names: Vec<String>, meet: Vec<Elem>, join: Vec<Elem>) -> Self {
        let n = names.len();
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        let mut lattice = FiniteLattice {
            names,
            meet,
            join,
            bottom,
            top,
            distributive: false,
        };
        lattice.distributive = lattice.distributive_law_violation().is_none();
        lattice
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == label)
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.size() + y]
    }

    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.size() + y]
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.meet(x, y) == x
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    /// Meet of all given elements; the top for an empty input.
    pub fn meet_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of all given elements; the bottom for an empty input.
    pub fn join_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_table(&self) -> Vec<Vec<Elem>> {
        self.meet.chunks(self.size()).map(<[_]>::to_vec).collect()
    }

    pub fn join_table(&self) -> Vec<Vec<Elem>> {
        self.join.chunks(self.size()).map(<[_]>::to_vec).collect()
    }

    /// The same carrier seen as a meet-semilattice.
    pub fn meet_reduct(&self) -> FiniteSemilattice {
        FiniteSemilattice::assemble(self.names.clone(), self.meet.clone())
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: Elem) -> Vec<Elem> {
        let below: Vec<Elem> = (0..self.size())
            .filter(|&y| y != x && self.leq(y, x))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&y| !below.iter().any(|&z| z != y && self.leq(y, z)))
            .collect()
    }
}

/// A validated structure of either kind, as read from a lattice file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Lattice(FiniteLattice),
    Semilattice(FiniteSemilattice),
}

impl Structure {
    pub fn size(&self) -> usize {
        match self {
            Structure::Lattice(l) => l.size(),
            Structure::Semilattice(m) => m.size(),
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            Structure::Lattice(l) => l.names(),
            Structure::Semilattice(m) => m.names(),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Structure::Lattice(_) => Kind::Lattice,
            Structure::Semilattice(_) => Kind::Semilattice,
        }
    }

    /// The structure as a lattice; a semilattice qualifies when it has a top.
    pub fn to_lattice(&self) -> Result<FiniteLattice, LatticeError> {
        match self {
            Structure::Lattice(l) => Ok(l.clone()),
            Structure::Semilattice(m) => m.to_lattice(),
        }
    }

    pub fn to_semilattice(&self) -> FiniteSemilattice {
        match self {
            Structure::Lattice(l) => l.meet_reduct(),
            Structure::Semilattice(m) => m.clone(),
        }
    }
}

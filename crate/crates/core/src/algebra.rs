use std::fmt;

use serde::{Deserialize, Serialize};

use crate::finlat::{FiniteLattice, FiniteSemilattice};
use crate::funclone::{OpTable, Term};
use crate::Elem;

/// Which signature equations are written in: `{∧, ∨}` or `{∧}` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lattice,
    Semilattice,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lattice => "lattice",
            Mode::Semilattice => "semilattice",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lattice" => Ok(Mode::Lattice),
            "semilattice" => Ok(Mode::Semilattice),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// A carrier with its basic operations as tables. Generator 0 is `∧`, generator 1 (lattice
/// mode only) is `∨`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    mode: Mode,
    names: Vec<String>,
    meet: OpTable,
    join: Option<OpTable>,
}

pub const MEET: usize = 0;
pub const JOIN: usize = 1;

impl Algebra {
    pub fn lattice(l: &FiniteLattice) -> Self {
        let n = l.size();
        Algebra {
            mode: Mode::Lattice,
            names: l.names().to_vec(),
            meet: OpTable::from_fn(2, n, |a| l.meet(a[0], a[1])),
            join: Some(OpTable::from_fn(2, n, |a| l.join(a[0], a[1]))),
        }
    }

    pub fn semilattice(m: &FiniteSemilattice) -> Self {
        let n = m.size();
        Algebra {
            mode: Mode::Semilattice,
            names: m.names().to_vec(),
            meet: OpTable::from_fn(2, n, |a| m.meet(a[0], a[1])),
            join: None,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn carrier(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet.apply(&[x, y])
    }

    /// Join of two elements; `None` in semilattice mode.
    pub fn join(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.join.as_ref().map(|j| j.apply(&[x, y]))
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.meet(x, y) == x
    }

    pub fn meet_op(&self) -> &OpTable {
        &self.meet
    }

    pub fn join_op(&self) -> Option<&OpTable> {
        self.join.as_ref()
    }

    pub fn generators(&self) -> Vec<OpTable> {
        std::iter::once(self.meet.clone())
            .chain(self.join.clone())
            .collect()
    }

    pub fn symbols(&self) -> &'static [&'static str] {
        match self.mode {
            Mode::Lattice => &["/\\", "\\/"],
            Mode::Semilattice => &["/\\"],
        }
    }

    /// Evaluates a provenance term whose generator indices refer to [`Self::generators`].
    pub fn eval_term(&self, term: &Term, args: &[Elem]) -> Elem {
        match term {
            Term::Var(i) => args[*i],
            Term::App(g, sub) => {
                let vals: Vec<Elem> = sub.iter().map(|t| self.eval_term(t, args)).collect();
                match *g {
                    MEET => self.meet.apply(&vals),
                    JOIN => self
                        .join
                        .as_ref()
                        .expect("join in lattice mode")
                        .apply(&vals),
                    other => panic!("unknown generator {other}"),
                }
            }
        }
    }
}

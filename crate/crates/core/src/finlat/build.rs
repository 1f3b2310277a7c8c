use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{FiniteLattice, FiniteSemilattice, LatticeError, Law, Structure};
use crate::limits::Limits;
use crate::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Lattice,
    Semilattice,
}

/// One end of a cover pair: an element label or a dense index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverEnd {
    Index(usize),
    Label(String),
}

/// Input description of a lattice or semilattice, in the JSON file format.
///
/// Exactly one of `covers` (Hasse diagram, pairs `[lower, upper]`) and `meet`
/// (row-major meet table over element indices) must be present. The order of
/// `elements` fixes the indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(CoverEnd, CoverEnd)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
}

impl LatticeSpec {
    pub fn from_covers<S: Into<String>>(
        elements: impl IntoIterator<Item = S>,
        covers: &[(&str, &str)],
        kind: Kind,
    ) -> Self {
        LatticeSpec {
            elements: elements.into_iter().map(Into::into).collect(),
            covers: Some(
                covers
                    .iter()
                    .map(|(lo, hi)| {
                        (
                            CoverEnd::Label((*lo).to_owned()),
                            CoverEnd::Label((*hi).to_owned()),
                        )
                    })
                    .collect(),
            ),
            meet: None,
            kind: Some(kind),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        serde_json::from_str(text).map_err(|e| LatticeError::BadSpec(e.to_string()))
    }

    pub fn kind(&self) -> Kind {
        self.kind.unwrap_or_default()
    }

    pub fn build(&self) -> Result<Structure, LatticeError> {
        self.build_with(&Limits::default())
    }

    pub fn build_with(&self, limits: &Limits) -> Result<Structure, LatticeError> {
        let n = self.elements.len();
        if n == 0 {
            return Err(LatticeError::BadSpec("empty carrier".into()));
        }
        if n > limits.max_carrier {
            return Err(LatticeError::TooLarge {
                size: n,
                limit: limits.max_carrier,
            });
        }
        check_labels(&self.elements)?;
        let names = self.elements.clone();
        let meet = match (&self.covers, &self.meet) {
            (Some(covers), None) => {
                let order = self.order_from_covers(covers)?;
                bound_table(&names, &order, Bound::Lower)?
            }
            (None, Some(table)) => {
                let meet = flatten_table(n, table.clone(), "meet")?;
                check_semilattice_laws(n, &meet, "meet")?;
                meet
            }
            (Some(_), Some(_)) => {
                return Err(LatticeError::BadSpec(
                    "give either covers or a meet table, not both".into(),
                ))
            }
            (None, None) => {
                return Err(LatticeError::BadSpec("missing covers or meet table".into()))
            }
        };
        let semilattice = FiniteSemilattice::assemble(names.clone(), meet.clone());
        // A meet table must still describe a semilattice with a least element.
        if (0..n).any(|x| !semilattice.leq(semilattice.bottom(), x)) {
            return Err(LatticeError::BadSpec("no least element".into()));
        }
        match self.kind() {
            Kind::Semilattice => Ok(Structure::Semilattice(semilattice)),
            Kind::Lattice => {
                let order: Vec<bool> = (0..n * n).map(|i| meet[i] == i / n).collect();
                let join = bound_table(&names, &order, Bound::Upper)?;
                Ok(Structure::Lattice(FiniteLattice::assemble(
                    names, meet, join,
                )))
            }
        }
    }

    /// Reflexive-transitive closure of the cover pairs, as a row-major `≤` matrix.
    fn order_from_covers(
        &self,
        covers: &[(CoverEnd, CoverEnd)],
    ) -> Result<Vec<bool>, LatticeError> {
        let n = self.elements.len();
        let lookup: HashMap<&str, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let resolve = |end: &CoverEnd| -> Result<usize, LatticeError> {
            match end {
                CoverEnd::Index(i) if *i < n => Ok(*i),
                CoverEnd::Index(i) => Err(LatticeError::BadSpec(format!("index {i} out of range"))),
                CoverEnd::Label(s) => lookup
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| LatticeError::BadSpec(format!("unknown element {s:?}"))),
            }
        };
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (lo, hi) in covers {
            let (lo, hi) = (resolve(lo)?, resolve(hi)?);
            if lo == hi {
                return Err(LatticeError::BadSpec(format!(
                    "cover pair {0:?} < {0:?} is a cycle",
                    self.elements[lo]
                )));
            }
            le[lo * n + hi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if le[i * n + j] && le[j * n + i] {
                    return Err(LatticeError::BadSpec(format!(
                        "covers contain a cycle through {:?} and {:?}",
                        self.elements[i], self.elements[j]
                    )));
                }
            }
        }
        Ok(le)
    }
}

#[derive(Clone, Copy)]
enum Bound {
    Lower,
    Upper,
}

/// Greatest lower bounds (or least upper bounds) of all pairs in a finite order.
fn bound_table(names: &[String], le: &[bool], bound: Bound) -> Result<Vec<Elem>, LatticeError> {
    let n = names.len();
    let below = |x: usize, y: usize| match bound {
        Bound::Lower => le[x * n + y],
        Bound::Upper => le[y * n + x],
    };
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let common: Vec<usize> = (0..n).filter(|&x| below(x, a) && below(x, b)).collect();
            let best = common
                .iter()
                .copied()
                .find(|&g| common.iter().all(|&x| below(x, g)))
                .ok_or_else(|| LatticeError::NotALattice {
                    a: names[a].clone(),
                    b: names[b].clone(),
                    bound: match bound {
                        Bound::Lower => "greatest lower bound",
                        Bound::Upper => "least upper bound",
                    },
                })?;
            table[a * n + b] = best;
        }
    }
    Ok(table)
}

pub(super) fn check_labels(names: &[String]) -> Result<(), LatticeError> {
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(LatticeError::BadSpec(format!("duplicate label {name:?}")));
        }
    }
    Ok(())
}

pub(super) fn flatten_table(
    n: usize,
    table: Vec<Vec<Elem>>,
    which: &'static str,
) -> Result<Vec<Elem>, LatticeError> {
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(LatticeError::BadSpec(format!(
            "{which} table must be {n}x{n}"
        )));
    }
    let flat: Vec<Elem> = table.into_iter().flatten().collect();
    if let Some(bad) = flat.iter().find(|&&v| v >= n) {
        return Err(LatticeError::BadSpec(format!(
            "{which} table entry {bad} out of range"
        )));
    }
    Ok(flat)
}

pub(super) fn check_semilattice_laws(
    n: usize,
    op: &[Elem],
    table: &'static str,
) -> Result<(), LatticeError> {
    let at = |x: usize, y: usize| op[x * n + y];
    let fail = |law, elems| Err(LatticeError::AxiomViolation { table, law, elems });
    for x in 0..n {
        if at(x, x) != x {
            return fail(Law::Idempotence, vec![x]);
        }
        for y in 0..n {
            if at(x, y) != at(y, x) {
                return fail(Law::Commutativity, vec![x, y]);
            }
            for z in 0..n {
                if at(at(x, y), z) != at(x, at(y, z)) {
                    return fail(Law::Associativity, vec![x, y, z]);
                }
            }
        }
    }
    Ok(())
}

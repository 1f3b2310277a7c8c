//! Finitary operations as value tables, relations as sorted tuple sets, and the
//! clone-theoretic constructions built on them.
//!
//! Tables use row-major argument order with the last argument varying fastest:
//! the value at `(a1, …, an)` sits at index `a1·kⁿ⁻¹ + … + an` for carrier size `k`.

mod centralizer;
mod ops;
mod slice;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{for_each_tuple, tuple_index, Elem};

pub use centralizer::centralizer_slice;
pub use ops::{commute, compose, graph, pad_and_identify, preserves};
pub use slice::{clone_slice, closure_under};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloneError {
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("operations live on different carriers ({0} vs {1})")]
    CarrierMismatch(usize, usize),
    #[error("coordinate {index} out of range for arity {arity}")]
    BadIndex { index: usize, arity: usize },
    #[error("bad variable assignment: {0}")]
    BadAssignment(String),
    #[error("bad table: {0}")]
    BadTable(String),
    #[error("{what} exceeded the limit of {limit}")]
    LimitExceeded { what: &'static str, limit: usize },
}

/// How a table was produced from generators: a variable or a generator applied to subterms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    /// Renders the term with the given generator symbols; binary symbols print infix.
    pub fn render(&self, symbols: &[&str], vars: &[String]) -> String {
        match self {
            Term::Var(i) => vars
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("x{}", i + 1)),
            Term::App(g, args) if args.len() == 2 => format!(
                "({} {} {})",
                args[0].render(symbols, vars),
                symbols[*g],
                args[1].render(symbols, vars)
            ),
            Term::App(g, args) => format!(
                "{}({})",
                symbols[*g],
                args.iter()
                    .map(|a| a.render(symbols, vars))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

/// An operation `A^n → A` given by its full value table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "OpTableRepr", into = "OpTableRepr")]
pub struct OpTable {
    arity: usize,
    carrier: usize,
    values: Vec<Elem>,
    provenance: Option<Term>,
}

#[derive(Serialize, Deserialize)]
struct OpTableRepr {
    arity: usize,
    values: Vec<Elem>,
}

impl TryFrom<OpTableRepr> for OpTable {
    type Error = CloneError;

    fn try_from(repr: OpTableRepr) -> Result<Self, CloneError> {
        let carrier = infer_carrier(repr.values.len(), repr.arity).ok_or_else(|| {
            CloneError::BadTable(format!(
                "{} values is not a power {} of any carrier size",
                repr.values.len(),
                repr.arity
            ))
        })?;
        OpTable::new(repr.arity, carrier, repr.values)
    }
}

impl From<OpTable> for OpTableRepr {
    fn from(op: OpTable) -> Self {
        OpTableRepr {
            arity: op.arity,
            values: op.values,
        }
    }
}

fn infer_carrier(len: usize, arity: usize) -> Option<usize> {
    if arity == 0 || len == 0 {
        return None;
    }
    (1..=len).find(|k| k.checked_pow(arity as u32) == Some(len))
}

impl PartialEq for OpTable {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.carrier == other.carrier && self.values == other.values
    }
}

impl Eq for OpTable {}

impl std::hash::Hash for OpTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.carrier.hash(state);
        self.values.hash(state);
    }
}

impl PartialOrd for OpTable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpTable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.arity, self.carrier, &self.values).cmp(&(other.arity, other.carrier, &other.values))
    }
}

impl OpTable {
    pub fn new(arity: usize, carrier: usize, values: Vec<Elem>) -> Result<Self, CloneError> {
        if arity == 0 {
            return Err(CloneError::BadTable("arity must be at least 1".into()));
        }
        let expected = carrier
            .checked_pow(arity as u32)
            .ok_or_else(|| CloneError::BadTable("table too large".into()))?;
        if values.len() != expected {
            return Err(CloneError::BadTable(format!(
                "expected {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >= carrier) {
            return Err(CloneError::BadTable(format!("value {v} outside carrier")));
        }
        Ok(OpTable {
            arity,
            carrier,
            values,
            provenance: None,
        })
    }

    /// Tabulates `f` over all argument tuples.
    pub fn from_fn(arity: usize, carrier: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Self {
        let mut values = Vec::with_capacity(carrier.pow(arity as u32));
        for_each_tuple(carrier, arity, |args| values.push(f(args)));
        OpTable {
            arity,
            carrier,
            values,
            provenance: None,
        }
    }

    /// The projection onto coordinate `index` (0-based) of `arity` arguments.
    pub fn projection(arity: usize, index: usize, carrier: usize) -> Result<Self, CloneError> {
        if index >= arity {
            return Err(CloneError::BadIndex { index, arity });
        }
        let mut table = Self::from_fn(arity, carrier, |args| args[index]);
        table.provenance = Some(Term::Var(index));
        Ok(table)
    }

    pub fn with_provenance(mut self, term: Term) -> Self {
        self.provenance = Some(term);
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn provenance(&self) -> Option<&Term> {
        self.provenance.as_ref()
    }

    pub fn apply(&self, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity);
        self.values[tuple_index(self.carrier, args)]
    }

    pub fn is_projection(&self) -> Option<usize> {
        (0..self.arity).find(|&i| {
            let mut all = true;
            for_each_tuple(self.carrier, self.arity, |args| {
                all &= self.apply(args) == args[i];
            });
            all
        })
    }
}

const BITSET_MAX: usize = 1 << 24;

/// A finite relation: a sorted set of tuples of fixed arity.
#[derive(Debug, Clone, Serialize)]
#[serde(into = "RelationRepr")]
pub struct Relation {
    arity: usize,
    carrier: usize,
    tuples: Vec<Vec<Elem>>,
    bits: Option<Vec<u64>>,
}

/// Serialized relation; the carrier is not stored and must be supplied when reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRepr {
    pub arity: usize,
    pub tuples: Vec<Vec<Elem>>,
}

impl RelationRepr {
    pub fn into_relation(self, carrier: usize) -> Result<Relation, CloneError> {
        Relation::new(self.arity, carrier, self.tuples)
    }
}

impl From<Relation> for RelationRepr {
    fn from(r: Relation) -> Self {
        RelationRepr {
            arity: r.arity,
            tuples: r.tuples,
        }
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.carrier == other.carrier && self.tuples == other.tuples
    }
}

impl Eq for Relation {}

impl Relation {
    pub fn new(
        arity: usize,
        carrier: usize,
        tuples: impl IntoIterator<Item = Vec<Elem>>,
    ) -> Result<Self, CloneError> {
        if arity == 0 {
            return Err(CloneError::BadTable(
                "relation arity must be at least 1".into(),
            ));
        }
        let mut tuples: Vec<Vec<Elem>> = tuples.into_iter().collect();
        for t in &tuples {
            if t.len() != arity {
                return Err(CloneError::ArityMismatch(format!(
                    "tuple {t:?} in a relation of arity {arity}"
                )));
            }
            if t.iter().any(|&x| x >= carrier) {
                return Err(CloneError::BadTable(format!("tuple {t:?} outside carrier")));
            }
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Self::from_sorted(arity, carrier, tuples))
    }

    fn from_sorted(arity: usize, carrier: usize, tuples: Vec<Vec<Elem>>) -> Self {
        let bits = carrier
            .checked_pow(arity as u32)
            .filter(|&space| space <= BITSET_MAX)
            .map(|space| {
                let mut bits = vec![0u64; space.div_ceil(64)];
                for t in &tuples {
                    let i = tuple_index(carrier, t);
                    bits[i / 64] |= 1 << (i % 64);
                }
                bits
            });
        Relation {
            arity,
            carrier,
            tuples,
            bits,
        }
    }

    /// All of `A^arity`.
    pub fn full(arity: usize, carrier: usize) -> Self {
        let mut tuples = Vec::new();
        for_each_tuple(carrier, arity, |t| tuples.push(t.to_vec()));
        Self::from_sorted(arity, carrier, tuples)
    }

    /// Tuples of `A^arity` satisfying `pred`, already in canonical order.
    pub fn from_predicate(
        arity: usize,
        carrier: usize,
        mut pred: impl FnMut(&[Elem]) -> bool,
    ) -> Self {
        let mut tuples = Vec::new();
        for_each_tuple(carrier, arity, |t| {
            if pred(t) {
                tuples.push(t.to_vec());
            }
        });
        Self::from_sorted(arity, carrier, tuples)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn tuples(&self) -> &[Vec<Elem>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        if tuple.len() != self.arity || tuple.iter().any(|&x| x >= self.carrier) {
            return false;
        }
        match &self.bits {
            Some(bits) => {
                let i = tuple_index(self.carrier, tuple);
                bits[i / 64] & (1 << (i % 64)) != 0
            }
            None => self
                .tuples
                .binary_search_by(|t| t.as_slice().cmp(tuple))
                .is_ok(),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.tuples.iter().all(|t| other.contains(t))
    }

    pub fn to_repr(&self) -> RelationRepr {
        self.clone().into()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t:?}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn same_carrier(ops: &[&OpTable]) -> Result<usize, CloneError> {
    let carrier = ops.first().map_or(0, |op| op.carrier);
    match ops.iter().find(|op| op.carrier != carrier) {
        Some(op) => Err(CloneError::CarrierMismatch(carrier, op.carrier)),
        None => Ok(carrier),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections() {
        let id = OpTable::projection(1, 0, 3).unwrap();
        assert_eq!(id.values(), &[0, 1, 2]);
        assert_eq!(
            OpTable::projection(2, 1, 2).unwrap().values(),
            &[0, 1, 0, 1]
        );
        let e3 = OpTable::projection(3, 2, 2).unwrap();
        for_each_tuple(2, 3, |t| assert_eq!(e3.apply(t), t[2]));
        assert_eq!(
            OpTable::projection(2, 2, 2),
            Err(CloneError::BadIndex { index: 2, arity: 2 })
        );
        assert_eq!(e3.is_projection(), Some(2));
    }

    #[test]
    fn table_validation() {
        assert!(OpTable::new(2, 2, vec![0, 0, 0]).is_err());
        assert!(OpTable::new(1, 2, vec![0, 2]).is_err());
        assert!(OpTable::new(0, 2, vec![0]).is_err());
    }

    #[test]
    fn table_json_infers_carrier() {
        let op: OpTable =
            serde_json::from_str(r#"{"arity": 2, "values": [0,0,0,0,1,1,0,1,2]}"#).unwrap();
        assert_eq!(op.carrier(), 3);
        assert_eq!(
            serde_json::to_string(&op).unwrap(),
            r#"{"arity":2,"values":[0,0,0,0,1,1,0,1,2]}"#
        );
        assert!(serde_json::from_str::<OpTable>(r#"{"arity": 2, "values": [0,0,0]}"#).is_err());
    }

    #[test]
    fn relations_are_canonical() {
        let r = Relation::new(2, 2, vec![vec![1, 0], vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(r.tuples(), &[vec![0, 1], vec![1, 0]]);
        assert!(r.contains(&[1, 0]));
        assert!(!r.contains(&[1, 1]));
        assert!(!r.contains(&[1, 5]));
        assert!(Relation::new(2, 2, vec![vec![0]]).is_err());
        assert_eq!(Relation::full(2, 3).len(), 9);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"arity":2,"tuples":[[0,1],[1,0]]}"#);
        let repr: RelationRepr = serde_json::from_str(&json).unwrap();
        assert_eq!(repr.into_relation(2).unwrap(), r);
    }

    #[test]
    fn term_rendering() {
        let t = Term::App(
            0,
            vec![Term::Var(0), Term::App(1, vec![Term::Var(1), Term::Var(2)])],
        );
        let vars: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
        assert_eq!(t.render(&["/\\", "\\/"], &vars), "(x /\\ (y \\/ z))");
    }
}

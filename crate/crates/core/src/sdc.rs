//! Deciding when the solution sets of equation systems are exactly the relations closed
//! under the centralizer clone.
//!
//! Over `{∧, ∨}` this happens precisely for Boolean lattices and over `{∧}` precisely for
//! distributive semilattices. Negative answers come with an explicit relation `T` that is
//! closed under the centralizer but is not a solution set, together with a tuple in
//! `Sol(Eq(T)) \ T`; both are re-checked by brute force. Positive answers are spot-checked
//! by eliminating quantifiers from random formulas.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::eqsol::galois_closure;
use crate::finlat::{
    FiniteLattice, FiniteSemilattice, ForbiddenKind, ForbiddenSublattice, LatticeError, Structure,
};
use crate::funclone::{CloneError, Relation};
use crate::ppqe::random::{random_formula, FormulaShape};
use crate::ppqe::{
    eliminate_boolean, eliminate_semilattice, eval_formula, parse_formula, PpError, PpFormula,
};
use crate::{Algebra, Elem, Limits, Mode};

/// Pairs that some `u` makes indistinguishable by meet and by join.
pub const LATTICE_PAIR_FORMULA: &str = "exists u . (u /\\ x = u /\\ y & u \\/ x = u \\/ y)";

/// Triples whose ternary symmetric difference exists in the lattice.
pub const BOOLEAN_GAP_FORMULA: &str = "exists u . (\
    x /\\ y \\/ x /\\ z \\/ y /\\ z \\/ u /\\ x \\/ u /\\ y \\/ u /\\ z = x \\/ y \\/ z \\/ u & \
    (x \\/ y) /\\ (x \\/ z) /\\ (y \\/ z) /\\ (u \\/ x) /\\ (u \\/ y) /\\ (u \\/ z) = x /\\ y /\\ z /\\ u)";

/// Pairs with a common upper bound.
pub const UPPER_BOUND_FORMULA: &str = "exists u . (x /\\ u = x & y /\\ u = y)";

/// Triples with some `u ≥ x, z` and `u ∧ y = x ∧ y`.
pub const SEMILATTICE_TRIPLE_FORMULA: &str =
    "exists u . (x /\\ y = u /\\ y & u /\\ x = x & u /\\ z = z)";

#[derive(Debug, Error)]
pub enum SdcError {
    #[error("the lattice is distributive")]
    IsDistributive,
    #[error("the lattice is Boolean")]
    IsBoolean,
    #[error("the lattice is not distributive")]
    NotDistributive,
    #[error("the semilattice is distributive")]
    IsDistributiveSemilattice,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Formula(#[from] PpError),
    #[error(transparent)]
    Clone(#[from] CloneError),
}

/// Which characterization settled the question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Boolean lattice: quantifiers can be eliminated over `{∧, ∨}`.
    Boolean,
    /// A pentagon or diamond sublattice defeats `{∧, ∨}`.
    NonDistributive,
    /// A distributive lattice that is not Boolean lacks some symmetric differences.
    DistributiveNonBoolean,
    /// A semilattice without top: two maximal elements have no common upper bound.
    NoTopSemilattice,
    /// A semilattice with top whose lattice is not distributive.
    NonDistributiveSemilattice,
    /// Distributive semilattice: quantifiers can be eliminated over `{∧}`.
    DistributiveSemilattice,
}

/// A relation closed under the centralizer that is not a solution set, with the formula
/// defining it and a tuple of `Sol(Eq(T)) \ T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub formula: String,
    pub relation: Relation,
    pub gap: Vec<Elem>,
    /// Named elements used by the construction, e.g. the pentagon's `p, q, r`.
    pub roles: Vec<(String, Elem)>,
}

fn witness_from(
    formula: &str,
    algebra: &Algebra,
    gap: Vec<Elem>,
    roles: Vec<(&str, Elem)>,
) -> Result<Witness, SdcError> {
    let phi = parse_formula(formula)?;
    Ok(Witness {
        formula: phi.to_string(),
        relation: eval_formula(&phi, algebra)?,
        gap,
        roles: roles.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    })
}

/// Role names for the elements of an embedded pentagon or diamond: `a, b` plus the
/// witness `u` for `(a, b)`.
fn pair_roles(f: &ForbiddenSublattice) -> Vec<(&'static str, Elem)> {
    let e = f.elements;
    vec![("a", e[1]), ("b", e[2]), ("u", e[3])]
}

/// The relation of pairs `(x, y)` with `u ∧ x = u ∧ y` and `u ∨ x = u ∨ y` for some `u`.
/// On a non-distributive lattice it misses `(0, 1)` although only trivial equations hold
/// on it.
pub fn witness_lattice_pair(l: &FiniteLattice) -> Result<Witness, SdcError> {
    let f = l.forbidden_sublattice().ok_or(SdcError::IsDistributive)?;
    witness_from(
        LATTICE_PAIR_FORMULA,
        &Algebra::lattice(l),
        vec![l.bottom(), l.top()],
        pair_roles(&f),
    )
}

/// Triples `(x, y, z)` for which some `u` satisfies the two median identities; in the
/// Boolean envelope `u` must be `x △ y △ z`. The first triple whose symmetric difference
/// falls outside the lattice is the gap.
pub fn witness_boolean_gap(l: &FiniteLattice) -> Result<Witness, SdcError> {
    if !l.distributive() {
        return Err(SdcError::NotDistributive);
    }
    if l.is_boolean().is_some() {
        return Err(SdcError::IsBoolean);
    }
    let emb = l.birkhoff_embed()?;
    let n = l.size();
    let mut gap = None;
    'search: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let d = emb.image(x) ^ emb.image(y) ^ emb.image(z);
                if emb.preimage(d).is_none() {
                    gap = Some(vec![x, y, z]);
                    break 'search;
                }
            }
        }
    }
    let gap = gap
        .ok_or_else(|| SdcError::VerificationFailed("every symmetric difference exists".into()))?;
    witness_from(BOOLEAN_GAP_FORMULA, &Algebra::lattice(l), gap, vec![])
}

/// The witness for a semilattice that is not distributive: pairs with a common upper bound
/// when there is no top, otherwise the triples of [`SEMILATTICE_TRIPLE_FORMULA`].
pub fn witness_semilattice(m: &FiniteSemilattice) -> Result<Witness, SdcError> {
    let algebra = Algebra::semilattice(m);
    if m.top().is_none() {
        let max = m.maximal_elements();
        let (a, b) = (max[0], max[1]);
        return witness_from(
            UPPER_BOUND_FORMULA,
            &algebra,
            vec![a, b],
            vec![("a", a), ("b", b), ("0", m.bottom())],
        );
    }
    let l = m.to_lattice()?;
    let f = l
        .forbidden_sublattice()
        .ok_or(SdcError::IsDistributiveSemilattice)?;
    let roles = triple_roles(&f);
    let gap = roles[3..].iter().map(|&(_, e)| e).collect();
    witness_from(SEMILATTICE_TRIPLE_FORMULA, &algebra, gap, roles)
}

/// `a, b, c` as used for the counterexample triples, then `x1, y1, z1` forming the gap.
fn triple_roles(f: &ForbiddenSublattice) -> Vec<(&'static str, Elem)> {
    let e = f.elements;
    let (a, b, c) = match f.kind {
        ForbiddenKind::N5 => (e[1], e[2], e[3]),
        ForbiddenKind::M3 => (e[1], e[0], e[4]),
    };
    vec![
        ("a", a),
        ("b", b),
        ("c", c),
        ("x1", e[1]),
        ("y1", e[2]),
        ("z1", e[3]),
    ]
}

#[derive(Debug, Clone)]
pub struct SdcOptions {
    /// Random formulas eliminated and compared for a positive answer.
    pub verify: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for SdcOptions {
    fn default() -> Self {
        SdcOptions {
            verify: 25,
            seed: 0,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SdcVerdict {
    pub holds: bool,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_tuple: Option<Vec<Elem>>,
    /// False only when the closure computation for a witness ran out of budget.
    pub verified: bool,
    pub qe_samples: usize,
    pub seed: u64,
}

/// Decides the property for `s` read in `mode`, and checks the answer.
pub fn decide_sdc(s: &Structure, mode: Mode, options: &SdcOptions) -> Result<SdcVerdict, SdcError> {
    match mode {
        Mode::Lattice => {
            let l = s.to_lattice()?;
            let algebra = Algebra::lattice(&l);
            if l.is_boolean().is_some() {
                let samples = qe_round_trips(
                    mode,
                    options,
                    |phi| Ok(eliminate_boolean(phi, &l)?),
                    &algebra,
                )?;
                return Ok(positive(Route::Boolean, samples, options.seed));
            }
            if l.distributive() {
                negative(
                    Route::DistributiveNonBoolean,
                    witness_boolean_gap(&l)?,
                    &algebra,
                    options,
                )
            } else {
                negative(
                    Route::NonDistributive,
                    witness_lattice_pair(&l)?,
                    &algebra,
                    options,
                )
            }
        }
        Mode::Semilattice => {
            let m = s.to_semilattice();
            let algebra = Algebra::semilattice(&m);
            if m.top().is_none() {
                return negative(
                    Route::NoTopSemilattice,
                    witness_semilattice(&m)?,
                    &algebra,
                    options,
                );
            }
            if m.is_distributive() {
                let samples = qe_round_trips(
                    mode,
                    options,
                    |phi| Ok(eliminate_semilattice(phi, &m)?),
                    &algebra,
                )?;
                return Ok(positive(
                    Route::DistributiveSemilattice,
                    samples,
                    options.seed,
                ));
            }
            negative(
                Route::NonDistributiveSemilattice,
                witness_semilattice(&m)?,
                &algebra,
                options,
            )
        }
    }
}

fn positive(route: Route, samples: usize, seed: u64) -> SdcVerdict {
    SdcVerdict {
        holds: true,
        route,
        witness: None,
        witness_formula: None,
        gap_tuple: None,
        verified: true,
        qe_samples: samples,
        seed,
    }
}

fn negative(
    route: Route,
    w: Witness,
    algebra: &Algebra,
    options: &SdcOptions,
) -> Result<SdcVerdict, SdcError> {
    if w.relation.contains(&w.gap) {
        return Err(SdcError::VerificationFailed(format!(
            "gap tuple {:?} lies in the witness relation",
            w.gap
        )));
    }
    let verified = match galois_closure(
        &w.relation,
        &algebra.generators(),
        options.limits.clone_slice,
    ) {
        Ok(closure) if closure.contains(&w.gap) => true,
        Ok(_) => {
            return Err(SdcError::VerificationFailed(format!(
                "gap tuple {:?} is not in the closure of the witness",
                w.gap
            )))
        }
        Err(CloneError::LimitExceeded { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    Ok(SdcVerdict {
        holds: false,
        route,
        witness: Some(w.relation),
        witness_formula: Some(w.formula),
        gap_tuple: Some(w.gap),
        verified,
        qe_samples: 0,
        seed: options.seed,
    })
}

/// Eliminates quantifiers from `options.verify` random formulas and compares relations.
fn qe_round_trips(
    mode: Mode,
    options: &SdcOptions,
    eliminate: impl Fn(&PpFormula) -> Result<PpFormula, SdcError>,
    algebra: &Algebra,
) -> Result<usize, SdcError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let shape = FormulaShape::default();
    for _ in 0..options.verify {
        let phi = random_formula(&mut rng, mode, &shape);
        let psi = eliminate(&phi)?;
        if !psi.is_quantifier_free() || eval_formula(&psi, algebra)? != eval_formula(&phi, algebra)?
        {
            return Err(SdcError::VerificationFailed(format!(
                "elimination changed the relation of {phi}: got {psi}"
            )));
        }
    }
    Ok(options.verify)
}

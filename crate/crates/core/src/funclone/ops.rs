use super::{same_carrier, CloneError, OpTable, Relation, Term};
use crate::{for_each_tuple, tuples, Elem, Verdict};

/// `h(x) = f(g1(x), …, gn(x))` for `k`-ary `g1, …, gn`.
pub fn compose(f: &OpTable, gs: &[OpTable]) -> Result<OpTable, CloneError> {
    if gs.len() != f.arity() {
        return Err(CloneError::ArityMismatch(format!(
            "{}-ary operation composed with {} operations",
            f.arity(),
            gs.len()
        )));
    }
    let k = gs[0].arity();
    if let Some(g) = gs.iter().find(|g| g.arity() != k) {
        return Err(CloneError::ArityMismatch(format!(
            "inner operations of arities {k} and {}",
            g.arity()
        )));
    }
    let mut all: Vec<&OpTable> = vec![f];
    all.extend(gs);
    let carrier = same_carrier(&all)?;
    let mut inner = vec![0; gs.len()];
    Ok(OpTable::from_fn(k, carrier, |x| {
        for (slot, g) in inner.iter_mut().zip(gs) {
            *slot = g.apply(x);
        }
        f.apply(&inner)
    }))
}

/// `f̃(x1, …, xn) = f(x_z(1), …, x_z(r))`: identifies variables where `z` repeats a
/// position and adds fictitious ones where `z` misses one. Positions are 0-based.
pub fn pad_and_identify(f: &OpTable, arity: usize, z: &[usize]) -> Result<OpTable, CloneError> {
    if z.len() != f.arity() {
        return Err(CloneError::BadAssignment(format!(
            "assignment covers {} of {} positions",
            z.len(),
            f.arity()
        )));
    }
    if let Some(&bad) = z.iter().find(|&&p| p >= arity) {
        return Err(CloneError::BadAssignment(format!(
            "target position {bad} out of range for arity {arity}"
        )));
    }
    if arity == 0 {
        return Err(CloneError::BadAssignment(
            "target arity must be at least 1".into(),
        ));
    }
    let mut args = vec![0; z.len()];
    let table = OpTable::from_fn(arity, f.carrier(), |x| {
        for (slot, &p) in args.iter_mut().zip(z) {
            *slot = x[p];
        }
        f.apply(&args)
    });
    Ok(match f.provenance() {
        Some(term) => table.with_provenance(substitute(term, z)),
        None => table,
    })
}

fn substitute(term: &Term, z: &[usize]) -> Term {
    match term {
        Term::Var(i) => Term::Var(z[*i]),
        Term::App(g, args) => Term::App(*g, args.iter().map(|a| substitute(a, z)).collect()),
    }
}

/// The graph `{(a1, …, an, f(a1, …, an))}`.
pub fn graph(f: &OpTable) -> Relation {
    let mut tuples = Vec::with_capacity(f.values().len());
    for_each_tuple(f.carrier(), f.arity(), |args| {
        let mut t = args.to_vec();
        t.push(f.apply(args));
        tuples.push(t);
    });
    Relation::new(f.arity() + 1, f.carrier(), tuples).expect("graph tuples are valid")
}

/// Whether `f` (n-ary) and `g` (m-ary) commute. A failure carries an `n × m` matrix on
/// which applying `g` to rows then `f` differs from applying `f` to columns then `g`.
pub fn commute(f: &OpTable, g: &OpTable) -> Verdict<Vec<Vec<Elem>>> {
    let (n, m) = (f.arity(), g.arity());
    let carrier = f.carrier();
    assert_eq!(carrier, g.carrier(), "commute on different carriers");
    let mut column = vec![0; n];
    let mut row = vec![0; m];
    for flat in tuples(carrier, n * m) {
        let matrix: Vec<&[Elem]> = flat.chunks(m).collect();
        for (slot, r) in column.iter_mut().zip(&matrix) {
            *slot = g.apply(r);
        }
        let rows_first = f.apply(&column);
        let mut col = vec![0; n];
        for (j, slot) in row.iter_mut().enumerate() {
            for (i, r) in matrix.iter().enumerate() {
                col[i] = r[j];
            }
            *slot = f.apply(&col);
        }
        if rows_first != g.apply(&row) {
            return Verdict::Fails(matrix.iter().map(|r| r.to_vec()).collect());
        }
    }
    Verdict::Holds
}

/// Whether `rel` is closed under componentwise application of `f`. A failure carries
/// the `arity(f)` tuples of `rel` whose image leaves it.
pub fn preserves(f: &OpTable, rel: &Relation) -> Verdict<Vec<Vec<Elem>>> {
    assert_eq!(
        f.carrier(),
        rel.carrier(),
        "preserves on different carriers"
    );
    let rows = rel.tuples();
    let mut args = vec![0; f.arity()];
    let mut image = vec![0; rel.arity()];
    for pick in tuples(rows.len(), f.arity()) {
        for (c, slot) in image.iter_mut().enumerate() {
            for (a, &r) in args.iter_mut().zip(&pick) {
                *a = rows[r][c];
            }
            *slot = f.apply(&args);
        }
        if !rel.contains(&image) {
            return Verdict::Fails(pick.iter().map(|&r| rows[r].clone()).collect());
        }
    }
    Verdict::Holds
}

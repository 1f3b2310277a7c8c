use std::fmt;

use super::{Atom, PpError, TermExpr};
use crate::finlat::FiniteLattice;
use crate::{Elem, Mode};

/// A set of variable indices below 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn single(i: usize) -> Self {
        VarSet(1 << i)
    }

    pub fn from_bits(bits: u64) -> Self {
        VarSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        VarSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        VarSet(self.0 & !(1 << i))
    }

    pub fn union(self, other: VarSet) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersects(self, other: VarSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    fn sort_key(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VarSet::EMPTY, VarSet::with)
    }
}

/// A meet or a join of variables. The empty meet is the top element, the empty join the
/// bottom element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expr {
    Meet(VarSet),
    Join(VarSet),
}

impl Expr {
    pub fn vars(self) -> VarSet {
        match self {
            Expr::Meet(s) | Expr::Join(s) => s,
        }
    }

    pub fn eval(self, l: &FiniteLattice, values: &[Elem]) -> Elem {
        match self {
            Expr::Meet(s) => l.meet_all(s.iter().map(|i| values[i])),
            Expr::Join(s) => l.join_all(s.iter().map(|i| values[i])),
        }
    }

    pub fn render(self, names: &[String]) -> String {
        let (s, sep, empty) = match self {
            Expr::Meet(s) => (s, " /\\ ", "1"),
            Expr::Join(s) => (s, " \\/ ", "0"),
        };
        if s.is_empty() {
            return empty.to_string();
        }
        s.iter()
            .map(|i| names[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn term(self) -> Option<TermExpr> {
        match self {
            Expr::Meet(s) => TermExpr::meet_of(s.iter()),
            Expr::Join(s) => TermExpr::join_of(s.iter()),
        }
    }

    /// Join of two expressions when the result is again a pure meet or join.
    pub(super) fn join_with(self, other: Expr) -> Option<Expr> {
        match (self, other) {
            (Expr::Join(a), Expr::Join(b)) => Some(Expr::Join(a.union(b))),
            (Expr::Join(a), e) | (e, Expr::Join(a)) if a.is_empty() => Some(e),
            (Expr::Meet(a), _) | (_, Expr::Meet(a)) if a.is_empty() => Some(Expr::Meet(a)),
            (Expr::Meet(a), Expr::Join(b)) | (Expr::Join(b), Expr::Meet(a)) if a.len() == 1 => {
                Some(Expr::Join(a.union(b)))
            }
            _ => None,
        }
    }

    fn sort_key(self) -> (u8, Vec<usize>) {
        match self {
            Expr::Meet(s) => (0, s.sort_key()),
            Expr::Join(s) => (1, s.sort_key()),
        }
    }
}

/// `⋀ lower ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub lower: VarSet,
    pub upper: Expr,
}

impl Inequality {
    pub fn new(lower: VarSet, upper: Expr) -> Self {
        Inequality { lower, upper }
    }

    /// True in every lattice, whatever the variables are.
    pub fn is_trivial(&self) -> bool {
        match self.upper {
            Expr::Join(b) => self.lower.intersects(b),
            Expr::Meet(b) => b.is_subset(self.lower),
        }
    }

    /// Whether `self` follows from `other` alone by shrinking the lower side or growing the
    /// upper one.
    pub fn implied_by(&self, other: &Inequality) -> bool {
        if !other.lower.is_subset(self.lower) {
            return false;
        }
        match (self.upper, other.upper) {
            (Expr::Join(b), Expr::Join(b2)) => b2.is_subset(b),
            (Expr::Meet(b), Expr::Meet(b2)) => b.is_subset(b2),
            _ => false,
        }
    }

    pub fn holds(&self, l: &FiniteLattice, values: &[Elem]) -> bool {
        l.leq(
            Expr::Meet(self.lower).eval(l, values),
            self.upper.eval(l, values),
        )
    }

    /// `s ≤ t` as the atom `s = s ∧ t`; fails when a side is an empty meet or join.
    pub fn to_atom(&self) -> Result<Atom, PpError> {
        let s = Expr::Meet(self.lower)
            .term()
            .ok_or(PpError::Inexpressible)?;
        let t = self.upper.term().ok_or(PpError::Inexpressible)?;
        Ok(Atom::leq(s, t))
    }

    pub fn render(&self, names: &[String]) -> String {
        format!(
            "{} <= {}",
            Expr::Meet(self.lower).render(names),
            self.upper.render(names)
        )
    }

    fn sort_key(&self) -> (Vec<usize>, (u8, Vec<usize>)) {
        (self.lower.sort_key(), self.upper.sort_key())
    }
}

/// A conjunction of inequalities. In lattice mode upper sides are joins, in semilattice
/// mode they are meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IneqSystem {
    mode: Mode,
    items: Vec<Inequality>,
}

impl IneqSystem {
    pub fn new(mode: Mode, items: Vec<Inequality>) -> Self {
        IneqSystem { mode, items }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn items(&self) -> &[Inequality] {
        &self.items
    }

    pub fn holds(&self, l: &FiniteLattice, values: &[Elem]) -> bool {
        self.items.iter().all(|i| i.holds(l, values))
    }

    /// Drops trivial and implied items, removes duplicates and sorts what is left.
    pub fn pruned(&self) -> IneqSystem {
        let mut items: Vec<Inequality> = Vec::new();
        for item in self.items.iter().filter(|i| !i.is_trivial()) {
            if !items.contains(item) {
                items.push(*item);
            }
        }
        let mut kept: Vec<Inequality> = items
            .iter()
            .filter(|i| !items.iter().any(|o| o != *i && i.implied_by(o)))
            .copied()
            .collect();
        kept.sort_by_key(Inequality::sort_key);
        IneqSystem {
            mode: self.mode,
            items: kept,
        }
    }

    pub fn to_atoms(&self) -> Result<Vec<Atom>, PpError> {
        self.items.iter().map(Inequality::to_atom).collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.items.is_empty() {
            return "true".into();
        }
        self.items
            .iter()
            .map(|i| i.render(names))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

impl fmt::Display for IneqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..64).map(|i| format!("v{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// Rewrites a conjunction of equations as inequalities `⋀A ≤ ⋁B` (lattice mode) or
/// `⋀A ≤ v` (semilattice mode). Nothing is simplified, so trivial items such as `x ≤ x`
/// are kept.
///
/// The lattice-mode expansion into normal forms is only sound in distributive lattices;
/// the semilattice split holds in every meet-semilattice.
pub fn to_inequalities(atoms: &[Atom], mode: Mode) -> Result<IneqSystem, PpError> {
    let mut items = Vec::new();
    let mut push = |item: Inequality| {
        if !items.contains(&item) {
            items.push(item);
        }
    };
    for atom in atoms {
        for (s, t) in [(&atom.lhs, &atom.rhs), (&atom.rhs, &atom.lhs)] {
            match mode {
                Mode::Lattice => {
                    for m in dnf(s) {
                        for j in cnf(t) {
                            push(Inequality::new(m, Expr::Join(j)));
                        }
                    }
                }
                Mode::Semilattice => {
                    if atom.uses_join() {
                        return Err(PpError::JoinInSemilatticeMode);
                    }
                    let lower = s.vars();
                    for v in t.vars().iter() {
                        push(Inequality::new(lower, Expr::Meet(VarSet::single(v))));
                    }
                }
            }
        }
    }
    Ok(IneqSystem { mode, items })
}

fn push_unique(out: &mut Vec<VarSet>, s: VarSet) {
    if !out.contains(&s) {
        out.push(s);
    }
}

/// Disjunctive normal form: the term is the join of the meets of the returned sets.
fn dnf(t: &TermExpr) -> Vec<VarSet> {
    match t {
        TermExpr::Var(i) => vec![VarSet::single(*i)],
        TermExpr::Join(a, b) => {
            let mut out = dnf(a);
            for s in dnf(b) {
                push_unique(&mut out, s);
            }
            out
        }
        TermExpr::Meet(a, b) => {
            let right = dnf(b);
            let mut out = Vec::new();
            for l in dnf(a) {
                for &r in &right {
                    push_unique(&mut out, l.union(r));
                }
            }
            out
        }
    }
}

/// Conjunctive normal form: the term is the meet of the joins of the returned sets.
fn cnf(t: &TermExpr) -> Vec<VarSet> {
    match t {
        TermExpr::Var(i) => vec![VarSet::single(*i)],
        TermExpr::Meet(a, b) => {
            let mut out = cnf(a);
            for s in cnf(b) {
                push_unique(&mut out, s);
            }
            out
        }
        TermExpr::Join(a, b) => {
            let right = cnf(b);
            let mut out = Vec::new();
            for l in cnf(a) {
                for &r in &right {
                    push_unique(&mut out, l.union(r));
                }
            }
            out
        }
    }
}

//! Symbolic intervals for a quantified variable, the Boolean residuation rules that produce
//! them, and the pairwise test for a family of intervals to meet.

use super::ineq::{Expr, Inequality, VarSet};
use super::PpError;
use crate::finlat::{BooleanStructure, Embedding, FiniteLattice};
use crate::{Elem, Verdict};

/// One end of an interval, written over the free variables. Complements are only ever
/// taken inside a Boolean envelope and never appear in an output formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Bottom,
    Top,
    /// `⋀a`.
    Meet(VarSet),
    /// `⋀a ∧ b′`.
    MeetComplement {
        a: VarSet,
        b: Expr,
    },
    /// `(⋀a)′ ∨ b`.
    ComplementJoin {
        a: VarSet,
        b: Expr,
    },
}

impl Bound {
    /// `(a, b)` with the bound equal to `⋀a ∧ b′`, for bounds used as a lower end.
    fn as_lower(self) -> Option<(VarSet, Expr)> {
        match self {
            Bound::Bottom => None,
            Bound::Top => Some((VarSet::EMPTY, Expr::Join(VarSet::EMPTY))),
            Bound::Meet(a) => Some((a, Expr::Join(VarSet::EMPTY))),
            Bound::MeetComplement { a, b } => Some((a, b)),
            Bound::ComplementJoin { .. } => None,
        }
    }

    /// `(a, b)` with the bound equal to `(⋀a)′ ∨ b`, for bounds used as an upper end.
    fn as_upper(self) -> Option<(VarSet, Expr)> {
        match self {
            Bound::Top => None,
            Bound::Bottom => Some((VarSet::EMPTY, Expr::Join(VarSet::EMPTY))),
            Bound::Meet(a) => Some((VarSet::EMPTY, Expr::Meet(a))),
            Bound::ComplementJoin { a, b } => Some((a, b)),
            Bound::MeetComplement { .. } => None,
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let meet = |a: VarSet| Expr::Meet(a).render(names);
        let wrap = |s: String| if s.contains(' ') { format!("({s})") } else { s };
        match *self {
            Bound::Bottom => "0".into(),
            Bound::Top => "1".into(),
            Bound::Meet(a) => meet(a),
            Bound::MeetComplement { a, b } => {
                format!("{} /\\ {}'", wrap(meet(a)), wrap(b.render(names)))
            }
            Bound::ComplementJoin { a, b } => {
                format!("{}' \\/ {}", wrap(meet(a)), wrap(b.render(names)))
            }
        }
    }
}

/// `[lo, hi]`, the values a quantified variable may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    /// Solutions of `⋀a ∧ u ≤ b`: the interval `[0, a′ ∨ b]`.
    pub fn below_residual(a: VarSet, b: Expr) -> Interval {
        let hi = if b == Expr::Meet(VarSet::EMPTY) {
            Bound::Top
        } else {
            Bound::ComplementJoin { a, b }
        };
        Interval {
            lo: Bound::Bottom,
            hi,
        }
    }

    /// Solutions of `⋀a ≤ b ∨ u`: the interval `[a ∧ b′, 1]`.
    pub fn above_residual(a: VarSet, b: Expr) -> Interval {
        Interval {
            lo: Bound::MeetComplement { a, b },
            hi: Bound::Top,
        }
    }

    /// Solutions of `⋀a ≤ u`.
    pub fn above(a: VarSet) -> Interval {
        Interval {
            lo: Bound::Meet(a),
            hi: Bound::Top,
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        format!("[{}, {}]", self.lo.render(names), self.hi.render(names))
    }
}

/// `c ≤ d` rewritten without complements: `a ∧ b′ ≤ c′ ∨ d ⟺ a ∧ c ≤ b ∨ d`.
/// `Ok(None)` means the condition always holds.
pub fn cross_condition(lo: Bound, hi: Bound) -> Result<Option<Inequality>, PpError> {
    let (Some((a, b)), Some((c, d))) = (lo.as_lower(), hi.as_upper()) else {
        if matches!(lo, Bound::ComplementJoin { .. }) || matches!(hi, Bound::MeetComplement { .. })
        {
            return Err(PpError::Inexpressible);
        }
        return Ok(None);
    };
    let upper = b.join_with(d).ok_or(PpError::Inexpressible)?;
    let item = Inequality::new(a.union(c), upper);
    Ok((!item.is_trivial()).then_some(item))
}

/// The nontrivial conditions `cᵢ ≤ dⱼ` under which the intervals share a point.
pub fn helly_condition(intervals: &[Interval]) -> Result<Vec<Inequality>, PpError> {
    let mut out = Vec::new();
    for i in intervals {
        for j in intervals {
            if let Some(item) = cross_condition(i.lo, j.hi)? {
                if !out.contains(&item) {
                    out.push(item);
                }
            }
        }
    }
    Ok(out)
}

/// Whether concrete intervals `[cᵢ, dᵢ]` of `l` have a common point; otherwise a pair
/// `(i, j)` with `cᵢ ≰ dⱼ`.
pub fn helly_nonempty(intervals: &[(Elem, Elem)], l: &FiniteLattice) -> Verdict<(usize, usize)> {
    for (i, &(c, _)) in intervals.iter().enumerate() {
        for (j, &(_, d)) in intervals.iter().enumerate() {
            if !l.leq(c, d) {
                return Verdict::Fails((i, j));
            }
        }
    }
    Verdict::Holds
}

/// `a ∧ u ≤ b ⟺ u ∈ [0, a′ ∨ b]`.
pub fn residuate_meet(b: &BooleanStructure, a: Elem, rhs: Elem) -> (Elem, Elem) {
    let l = b.host();
    (l.bottom(), l.join(b.complement(a), rhs))
}

/// `c ≤ a ∨ u ⟺ u ∈ [a′ ∧ c, 1]`.
pub fn residuate_join(b: &BooleanStructure, a: Elem, lhs: Elem) -> (Elem, Elem) {
    let l = b.host();
    (l.meet(b.complement(a), lhs), l.top())
}

/// `a ∧ b′ ≤ c′ ∨ d ⟺ a ∧ c ≤ b ∨ d`; returns the two sides of the right-hand inequality.
pub fn residuate_cross(bs: &BooleanStructure, a: Elem, b: Elem, c: Elem, d: Elem) -> (Elem, Elem) {
    let l = bs.host();
    (l.meet(a, c), l.join(b, d))
}

/// Values of variables as subsets of the join-irreducibles of a distributive lattice, so
/// that symbolic bounds with complements can be evaluated.
pub struct SymbolicValues<'a> {
    embedding: &'a Embedding,
    masks: Vec<u64>,
}

impl<'a> SymbolicValues<'a> {
    pub fn new(embedding: &'a Embedding, values: &[Elem]) -> Self {
        SymbolicValues {
            embedding,
            masks: values.iter().map(|&v| embedding.image(v)).collect(),
        }
    }

    fn meet(&self, a: VarSet) -> u64 {
        a.iter()
            .fold(self.embedding.full(), |acc, i| acc & self.masks[i])
    }

    pub fn expr(&self, e: Expr) -> u64 {
        match e {
            Expr::Meet(a) => self.meet(a),
            Expr::Join(a) => a.iter().fold(0, |acc, i| acc | self.masks[i]),
        }
    }

    pub fn bound(&self, b: Bound) -> u64 {
        let full = self.embedding.full();
        match b {
            Bound::Bottom => 0,
            Bound::Top => full,
            Bound::Meet(a) => self.meet(a),
            Bound::MeetComplement { a, b } => self.meet(a) & !self.expr(b) & full,
            Bound::ComplementJoin { a, b } => (!self.meet(a) & full) | self.expr(b),
        }
    }

    pub fn contains(&self, interval: &Interval, u: Elem) -> bool {
        let m = self.embedding.image(u);
        let lo = self.bound(interval.lo);
        let hi = self.bound(interval.hi);
        lo & !m == 0 && m & !hi == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::fixtures;
    use crate::for_each_tuple;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(v: &[usize]) -> VarSet {
        v.iter().copied().collect()
    }

    #[test]
    fn residuation_rules_hold_in_b3() {
        let b3 = fixtures::boolean(3);
        let bs = b3.is_boolean().unwrap();
        let mut checked = [0usize; 3];
        for_each_tuple(8, 3, |t| {
            let (a, b, u) = (t[0], t[1], t[2]);
            let (lo, hi) = residuate_meet(&bs, a, b);
            let inside = b3.leq(lo, u) && b3.leq(u, hi);
            assert_eq!(b3.leq(b3.meet(a, u), b), inside);
            let (lo, hi) = residuate_join(&bs, a, b);
            let inside = b3.leq(lo, u) && b3.leq(u, hi);
            assert_eq!(b3.leq(b, b3.join(a, u)), inside);
            checked[0] += 1;
            checked[1] += 1;
        });
        for_each_tuple(8, 4, |t| {
            let (a, b, c, d) = (t[0], t[1], t[2], t[3]);
            let lhs = b3.leq(b3.meet(a, bs.complement(b)), b3.join(bs.complement(c), d));
            let (s, r) = residuate_cross(&bs, a, b, c, d);
            assert_eq!(lhs, b3.leq(s, r));
            checked[2] += 1;
        });
        assert_eq!(checked, [512, 512, 4096]);
    }

    #[test]
    fn degenerate_residuations() {
        let b2 = fixtures::boolean(2);
        let bs = b2.is_boolean().unwrap();
        // a = 0: every u satisfies 0 ∧ u ≤ b.
        for b in 0..4 {
            assert_eq!(residuate_meet(&bs, 0, b), (0, 3));
        }
        // b = 0, c = 1: a ≤ d on both sides.
        for a in 0..4 {
            for d in 0..4 {
                assert_eq!(residuate_cross(&bs, a, 0, 3, d), (a, d));
            }
        }
    }

    #[test]
    fn concrete_helly() {
        let b2 = fixtures::boolean(2);
        assert!(helly_nonempty(&[(1, 3)], &b2).holds());
        // [a, 1] ∩ [0, b] = ∅ because a ≰ b.
        assert_eq!(
            helly_nonempty(&[(1, 3), (0, 2)], &b2),
            Verdict::Fails((0, 1))
        );
    }

    #[test]
    fn helly_matches_intersection_on_pentagon() {
        let n5 = fixtures::n5();
        let intervals: Vec<(Elem, Elem)> = (0..5).cartesian_product(0..5).collect();
        for k in 1..=3 {
            for family in intervals.iter().copied().combinations_with_replacement(k) {
                let direct =
                    (0..5).any(|u| family.iter().all(|&(c, d)| n5.leq(c, u) && n5.leq(u, d)));
                assert_eq!(helly_nonempty(&family, &n5).holds(), direct, "{family:?}");
            }
        }
    }

    #[test]
    fn cross_condition_cases() {
        let x = set(&[0]);
        let y = set(&[1]);
        let z = set(&[2]);
        // [x ∧ y′, 1] against [0, z′ ∨ w] gives x ∧ z ≤ y ∨ w.
        let lo = Interval::above_residual(x, Expr::Join(y)).lo;
        let hi = Interval::below_residual(z, Expr::Join(set(&[3]))).hi;
        assert_eq!(
            cross_condition(lo, hi).unwrap(),
            Some(Inequality::new(set(&[0, 2]), Expr::Join(set(&[1, 3]))))
        );
        // Semilattice shape: [x, 1] against [0, z′ ∨ ⋀y] gives x ∧ z ≤ y.
        let hi = Interval::below_residual(z, Expr::Meet(y)).hi;
        assert_eq!(
            cross_condition(Interval::above(x).lo, hi).unwrap(),
            Some(Inequality::new(set(&[0, 2]), Expr::Meet(y)))
        );
        assert_eq!(cross_condition(Bound::Bottom, hi).unwrap(), None);
        assert_eq!(
            cross_condition(Interval::above(x).lo, Bound::Top).unwrap(),
            None
        );
        assert_eq!(
            Interval::below_residual(x, Expr::Meet(VarSet::EMPTY)).hi,
            Bound::Top
        );
        assert!(cross_condition(hi, hi).is_err());
    }

    /// Random symbolic intervals over a distributive lattice: a common point exists exactly
    /// when all pairwise conditions hold.
    #[test]
    fn symbolic_helly_agrees_with_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for l in [
            fixtures::chain(3),
            fixtures::boolean(2),
            fixtures::boolean(3),
        ] {
            let emb = l.birkhoff_embed().unwrap();
            let boolean = l.is_boolean().is_some();
            for _ in 0..200 {
                let k = rng.gen_range(1..=3);
                let rand_set = |rng: &mut ChaCha8Rng| -> VarSet {
                    (0..3).filter(|_| rng.gen_bool(0.5)).collect()
                };
                let intervals: Vec<Interval> = (0..k)
                    .map(|_| {
                        let a = rand_set(&mut rng);
                        let b = rand_set(&mut rng);
                        match (boolean, rng.gen_range(0..2)) {
                            (true, 0) => Interval::above_residual(a.with(0), Expr::Join(b)),
                            (true, _) => Interval::below_residual(a, Expr::Join(b.with(1))),
                            (false, 0) => Interval::above(a.with(0)),
                            (false, _) => Interval::below_residual(a, Expr::Meet(b.with(1))),
                        }
                    })
                    .collect();
                let conditions = helly_condition(&intervals).unwrap();
                for_each_tuple(l.size(), 3, |v| {
                    let sv = SymbolicValues::new(&emb, v);
                    let direct = (0..l.size()).any(|u| intervals.iter().all(|i| sv.contains(i, u)));
                    let symbolic = conditions.iter().all(|c| c.holds(&l, v));
                    assert_eq!(direct, symbolic);
                });
            }
        }
    }

    #[test]
    fn rendering() {
        let names: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
        let i = Interval::above_residual(set(&[0, 1]), Expr::Join(set(&[2])));
        assert_eq!(i.render(&names), "[(x /\\ y) /\\ z', 1]");
        let j = Interval::below_residual(set(&[0]), Expr::Join(set(&[1, 2])));
        assert_eq!(j.render(&names), "[0, x' \\/ (y \\/ z)]");
    }
}

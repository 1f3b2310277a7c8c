use itertools::Itertools;
use serde::Serialize;

use super::{FiniteLattice, LatticeError};
use crate::{Elem, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ForbiddenKind {
    N5,
    M3,
}

/// A five-element sublattice isomorphic to the pentagon or the diamond.
///
/// `elements` lists the images of the canonical labels in role order:
/// `[0, p, q, r, 1]` with `p < q` for N5 and `[0, a, b, c, 1]` for M3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbiddenSublattice {
    pub kind: ForbiddenKind,
    pub elements: [Elem; 5],
}

/// A median value; `warning` is set when the lattice is not distributive, in which
/// case the meet form `(x∧y) ∨ (x∧z) ∨ (y∧z)` was used and the join form may differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Median {
    pub value: Elem,
    pub warning: bool,
}

/// Complementation on a Boolean lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanStructure {
    host: FiniteLattice,
    complement: Vec<Elem>,
}

/// The embedding `x ↦ { j ∈ J(L) : j ≤ x }` of a distributive lattice into the powerset
/// of its nonzero join-irreducibles. Subsets are bitmasks over `atoms`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    atoms: Vec<Elem>,
    image: Vec<u64>,
}

impl FiniteLattice {
    /// First triple violating `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`, if any.
    pub fn distributive_law_violation(&self) -> Option<[Elem; 3]> {
        let n = self.size();
        (0..n)
            .cartesian_product(0..n)
            .cartesian_product(0..n)
            .map(|((x, y), z)| [x, y, z])
            .find(|&[x, y, z]| {
                self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z))
            })
    }

    /// Distributivity, checked by the law and by the forbidden-sublattice search.
    ///
    /// # Panics
    ///
    /// If the two checks disagree, which would be an internal error.
    pub fn is_distributive(&self) -> Verdict<[Elem; 3]> {
        let violation = self.distributive_law_violation();
        let forbidden = self.forbidden_sublattice();
        assert_eq!(
            violation.is_none(),
            forbidden.is_none(),
            "internal error: distributive law and N5/M3 search disagree"
        );
        match violation {
            None => Verdict::Holds,
            Some(t) => Verdict::Fails(t),
        }
    }

    /// Cached result of the direct distributivity check.
    pub fn distributive(&self) -> bool {
        self.distributive
    }

    /// The lexicographically least five-element subset closed under meet and join that is
    /// isomorphic to N5 or M3.
    pub fn forbidden_sublattice(&self) -> Option<ForbiddenSublattice> {
        let n = self.size();
        (0..n).combinations(5).find_map(|subset| {
            let closed = subset.iter().all(|&x| {
                subset.iter().all(|&y| {
                    subset.contains(&self.meet(x, y)) && subset.contains(&self.join(x, y))
                })
            });
            if closed {
                self.classify_five(&subset)
            } else {
                None
            }
        })
    }

    fn classify_five(&self, subset: &[Elem]) -> Option<ForbiddenSublattice> {
        let lo = subset.iter().fold(self.top(), |acc, &x| self.meet(acc, x));
        let hi = subset
            .iter()
            .fold(self.bottom(), |acc, &x| self.join(acc, x));
        let mid: Vec<Elem> = subset
            .iter()
            .copied()
            .filter(|&x| x != lo && x != hi)
            .collect();
        let comparable: Vec<(Elem, Elem)> = mid
            .iter()
            .tuple_combinations()
            .filter(|(&x, &y)| self.leq(x, y) || self.leq(y, x))
            .map(|(&x, &y)| if self.leq(x, y) { (x, y) } else { (y, x) })
            .collect();
        match comparable.as_slice() {
            [] => Some(ForbiddenSublattice {
                kind: ForbiddenKind::M3,
                elements: [lo, mid[0], mid[1], mid[2], hi],
            }),
            [(p, q)] => {
                let r = mid.iter().copied().find(|x| x != p && x != q)?;
                Some(ForbiddenSublattice {
                    kind: ForbiddenKind::N5,
                    elements: [lo, *p, *q, r, hi],
                })
            }
            _ => None,
        }
    }

    /// Complement of `x`, if it has one; the least such element when it is not unique.
    pub fn complement_of(&self, x: Elem) -> Option<Elem> {
        (0..self.size())
            .find(|&y| self.meet(x, y) == self.bottom() && self.join(x, y) == self.top())
    }

    /// The complement map when the lattice is distributive and complemented.
    pub fn is_boolean(&self) -> Option<BooleanStructure> {
        if !self.distributive {
            return None;
        }
        let complement: Option<Vec<Elem>> =
            (0..self.size()).map(|x| self.complement_of(x)).collect();
        complement.map(|complement| BooleanStructure {
            host: self.clone(),
            complement,
        })
    }

    pub fn median(&self, x: Elem, y: Elem, z: Elem) -> Median {
        Median {
            value: self.join(self.join(self.meet(x, y), self.meet(x, z)), self.meet(y, z)),
            warning: !self.distributive,
        }
    }

    /// `(x ∨ y) ∧ (x ∨ z) ∧ (y ∨ z)`; equal to the median form in distributive lattices.
    pub fn median_join_form(&self, x: Elem, y: Elem, z: Elem) -> Elem {
        self.meet(self.meet(self.join(x, y), self.join(x, z)), self.join(y, z))
    }

    /// Nonzero elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        (0..self.size())
            .filter(|&x| x != self.bottom() && self.lower_covers(x).len() == 1)
            .collect()
    }

    pub fn birkhoff_embed(&self) -> Result<Embedding, LatticeError> {
        if !self.distributive {
            return Err(LatticeError::NotDistributive);
        }
        let atoms = self.join_irreducibles();
        if atoms.len() > 64 {
            return Err(LatticeError::TooLarge {
                size: atoms.len(),
                limit: 64,
            });
        }
        let image = (0..self.size())
            .map(|x| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.leq(j, x))
                    .fold(0u64, |mask, (bit, _)| mask | (1 << bit))
            })
            .collect();
        Ok(Embedding { atoms, image })
    }
}

impl BooleanStructure {
    pub fn host(&self) -> &FiniteLattice {
        &self.host
    }

    pub fn complement(&self, x: Elem) -> Elem {
        self.complement[x]
    }

    pub fn complement_map(&self) -> &[Elem] {
        &self.complement
    }

    /// Ternary symmetric difference `((x ∨ y ∨ z) ∧ m(x,y,z)′) ∨ (x ∧ y ∧ z)`.
    pub fn symdiff3(&self, x: Elem, y: Elem, z: Elem) -> Elem {
        let l = &self.host;
        let m = l.median(x, y, z).value;
        let odd = l.meet(l.join(l.join(x, y), z), self.complement(m));
        l.join(odd, l.meet(l.meet(x, y), z))
    }
}

impl Embedding {
    /// Join-irreducible elements, one per bit of the target powerset.
    pub fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    pub fn target_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn image(&self, x: Elem) -> u64 {
        self.image[x]
    }

    /// Bitmask of the full atom set, the image of the top.
    pub fn full(&self) -> u64 {
        if self.atoms.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    /// Element whose image is `mask`, if the mask lies in the image.
    pub fn preimage(&self, mask: u64) -> Option<Elem> {
        self.image.iter().position(|&m| m == mask)
    }

    pub fn is_injective(&self) -> bool {
        self.image.iter().all_unique()
    }

    /// Checks that meets map to intersections and joins to unions.
    pub fn preserves_operations(&self, lattice: &FiniteLattice) -> bool {
        let n = lattice.size();
        (0..n).cartesian_product(0..n).all(|(x, y)| {
            self.image(lattice.meet(x, y)) == self.image(x) & self.image(y)
                && self.image(lattice.join(x, y)) == self.image(x) | self.image(y)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::fixtures;

    #[test]
    fn chains_are_distributive() {
        for n in 1..=6 {
            assert!(fixtures::chain(n).is_distributive().holds());
        }
    }

    #[test]
    fn pentagon_and_diamond_are_not_distributive() {
        for l in [fixtures::n5(), fixtures::m3()] {
            let [x, y, z] = *l.is_distributive().witness().unwrap();
            assert_ne!(l.meet(x, l.join(y, z)), l.join(l.meet(x, y), l.meet(x, z)));
        }
    }

    #[test]
    fn forbidden_sublattices() {
        assert_eq!(fixtures::boolean(3).forbidden_sublattice(), None);
        let n5 = fixtures::n5();
        assert_eq!(
            n5.forbidden_sublattice(),
            Some(ForbiddenSublattice {
                kind: ForbiddenKind::N5,
                elements: [0, 1, 2, 3, 4]
            })
        );
        let m3 = fixtures::m3();
        assert_eq!(m3.forbidden_sublattice().unwrap().kind, ForbiddenKind::M3);
        // N5 with an extra top t: the pentagon 0, p, q, r, 1 is the only candidate.
        let six = fixtures::pentagon_with_new_top();
        let found = six.forbidden_sublattice().unwrap();
        assert_eq!(found.kind, ForbiddenKind::N5);
        let labels: Vec<&str> = found.elements.iter().map(|&x| six.name(x)).collect();
        assert_eq!(labels, ["0", "p", "q", "r", "1"]);
    }

    #[test]
    fn boolean_detection() {
        let b2 = fixtures::boolean(2);
        let s = b2.is_boolean().unwrap();
        let (a, b) = (b2.index_of("a").unwrap(), b2.index_of("b").unwrap());
        assert_eq!(s.complement(a), b);
        assert!(fixtures::chain(3).is_boolean().is_none());
        let c3 = fixtures::chain(3);
        assert_eq!(c3.complement_of(1), None);
        let m3 = fixtures::m3();
        assert!((0..5).all(|x| m3.complement_of(x).is_some()));
        assert!(m3.is_boolean().is_none());
    }

    #[test]
    fn median_laws() {
        for (_, l) in fixtures::lattices() {
            let n = l.size();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(l.median(x, x, y).value, x);
                }
            }
        }
        let b2 = fixtures::boolean(2);
        let (a, b) = (b2.index_of("a").unwrap(), b2.index_of("b").unwrap());
        assert_eq!(
            b2.median(a, b, 0),
            Median {
                value: 0,
                warning: false
            }
        );
        let b3 = fixtures::boolean(3);
        let mut checked = 0;
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..8 {
                    assert_eq!(b3.median(x, y, z).value, b3.median_join_form(x, y, z));
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 512);
        assert!(fixtures::n5().median(1, 2, 3).warning);
    }

    #[test]
    fn chain_embedding() {
        let c3 = fixtures::chain(3);
        let e = c3.birkhoff_embed().unwrap();
        assert_eq!(e.atoms(), &[1, 2]);
        assert_eq!((e.image(0), e.image(1), e.image(2)), (0b00, 0b01, 0b11));
        assert!(e.preserves_operations(&c3));
        assert!(e.is_injective());
    }

    #[test]
    fn boolean_embedding_is_onto() {
        let b2 = fixtures::boolean(2);
        let e = b2.birkhoff_embed().unwrap();
        assert_eq!(e.target_atoms(), 2);
        let mut images: Vec<u64> = (0..4).map(|x| e.image(x)).collect();
        images.sort();
        assert_eq!(images, vec![0, 1, 2, 3]);
        assert_eq!(e.image(b2.top()), e.full());
        assert_eq!(e.image(b2.bottom()), 0);
    }

    #[test]
    fn non_distributive_embedding_is_refused() {
        assert_eq!(
            fixtures::n5().birkhoff_embed(),
            Err(LatticeError::NotDistributive)
        );
    }

    #[test]
    fn symmetric_difference_matches_bitmask_oracle() {
        // Boolean fixtures index elements by their subset bitmask.
        let b3 = fixtures::boolean(3).is_boolean().unwrap();
        for x in 0..8 {
            assert_eq!(b3.symdiff3(x, 0, 7), b3.complement(x));
            for y in 0..8 {
                assert_eq!(b3.symdiff3(x, x, y), y);
                for z in 0..8 {
                    assert_eq!(b3.symdiff3(x, y, z), x ^ y ^ z);
                }
            }
        }
    }
}

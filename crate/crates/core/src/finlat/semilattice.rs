use super::{FiniteLattice, LatticeError};
use crate::Elem;

/// A finite meet-semilattice. The least element always exists; a greatest one may not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemilattice {
    names: Vec<String>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Option<Elem>,
}

impl FiniteSemilattice {
    /// Meet table is assumed valid.
    pub(crate) fn assemble(names: Vec<String>, meet: Vec<Elem>) -> Self {
        let n = names.len();
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).find(|&t| (0..n).all(|x| meet[x * n + t] == x));
        FiniteSemilattice {
            names,
            meet,
            bottom,
            top,
        }
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

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.meet(x, y) == x
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Option<Elem> {
        self.top
    }

    pub fn meet_table(&self) -> Vec<Vec<Elem>> {
        self.meet.chunks(self.size()).map(<[_]>::to_vec).collect()
    }

    pub fn maximal_elements(&self) -> Vec<Elem> {
        let n = self.size();
        (0..n)
            .filter(|&x| (0..n).all(|y| y == x || !self.leq(x, y)))
            .collect()
    }

    /// Recovers the join as the meet of all common upper bounds, which exist once there is a top.
    pub fn to_lattice(&self) -> Result<FiniteLattice, LatticeError> {
        let top = self.top.ok_or(LatticeError::NoGreatestElement)?;
        let n = self.size();
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = (0..n)
                    .filter(|&x| self.leq(a, x) && self.leq(b, x))
                    .fold(top, |acc, x| self.meet(acc, x));
            }
        }
        Ok(FiniteLattice::assemble(
            self.names.clone(),
            self.meet.clone(),
            join,
        ))
    }

    /// Checks the distributivity condition for meet-semilattices directly: whenever
    /// `a ≥ b0 ∧ b1` there are `a0 ≥ b0` and `a1 ≥ b1` with `a = a0 ∧ a1`.
    ///
    /// Returns a violating `(a, b0, b1)` if there is one. When a top exists the answer is
    /// cross-checked against distributivity of the completed lattice.
    pub fn distributivity_violation(&self) -> Option<[Elem; 3]> {
        let n = self.size();
        let mut violation = None;
        'search: for a in 0..n {
            for b0 in 0..n {
                for b1 in 0..n {
                    if !self.leq(self.meet(b0, b1), a) {
                        continue;
                    }
                    let found = (0..n).any(|a0| {
                        self.leq(b0, a0)
                            && (0..n).any(|a1| self.leq(b1, a1) && self.meet(a0, a1) == a)
                    });
                    if !found {
                        violation = Some([a, b0, b1]);
                        break 'search;
                    }
                }
            }
        }
        if let Ok(lattice) = self.to_lattice() {
            assert_eq!(
                violation.is_none(),
                lattice.is_distributive().holds(),
                "internal error: semilattice distributivity disagrees with its lattice completion"
            );
        }
        violation
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_violation().is_none()
    }
}

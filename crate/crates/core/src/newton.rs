//! Newton polytopes in `ℤ^d_{≥0}`: up-closed sets given by their finitely
//! many minimal vertices.

use std::fmt;

use thiserror::Error;

use crate::lattice::LatticePoint;
use crate::weighted::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("negative coordinate in {0}")]
    NegativeExponent(LatticePoint),
    #[error("point {point} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        point: LatticePoint,
        got: usize,
        expected: usize,
    },
}

/// `⋃ (v + ℤ^d_{≥0})` over an antichain of vertices, kept sorted.
///
/// The empty vertex set is the Newton polytope of the zero series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NewtonPolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
}

impl NewtonPolytope {
    pub fn empty(dim: usize) -> Self {
        NewtonPolytope {
            dim,
            vertices: Vec::new(),
        }
    }

    pub fn from_generators(dim: usize, points: &[LatticePoint]) -> Result<Self, NewtonError> {
        for p in points {
            if p.dim() != dim {
                return Err(NewtonError::DimensionMismatch {
                    point: p.clone(),
                    got: p.dim(),
                    expected: dim,
                });
            }
            if p.iter().any(|&a| a < 0) {
                return Err(NewtonError::NegativeExponent(p.clone()));
            }
        }
        let mut pts: Vec<LatticePoint> = points.to_vec();
        pts.sort();
        pts.dedup();
        // Lexicographic order puts every dominator after what it dominates,
        // so a single forward sweep keeps exactly the minimal elements.
        let mut vertices: Vec<LatticePoint> = Vec::new();
        for p in pts {
            if !vertices.iter().any(|v| v.dominated_by(&p)) {
                vertices.push(p);
            }
        }
        Ok(NewtonPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        assert_eq!(p.dim(), self.dim, "dimension mismatch");
        self.vertices.iter().any(|v| v.dominated_by(p))
    }

    pub fn is_subpolytope(&self, other: &NewtonPolytope) -> bool {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.vertices.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &NewtonPolytope) -> NewtonPolytope {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let pts: Vec<LatticePoint> = self
            .vertices
            .iter()
            .chain(other.vertices.iter())
            .cloned()
            .collect();
        Self::from_generators(self.dim, &pts).expect("vertices are valid generators")
    }

    /// No vertex dominates another.
    pub fn is_antichain(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, a)| {
            self.vertices
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.dominated_by(b))
        })
    }
}

impl fmt::Display for NewtonPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", vs.join(", "))
    }
}

pub fn newton_polytope_of(h: &Poly) -> NewtonPolytope {
    let pts: Vec<LatticePoint> = h.support().cloned().collect();
    NewtonPolytope::from_generators(h.dim(), &pts).expect("polynomial exponents are non-negative")
}

/// Indices `i₁ < i₂ < …` of a longest subsequence with
/// `seq[i_j] ⊇ seq[i_{j+1}]`; among longest ones, the lexicographically
/// least index list.
pub fn longest_descending_chain(seq: &[NewtonPolytope]) -> Vec<usize> {
    longest_chain_by(seq.len(), |i, j| seq[j].is_subpolytope(&seq[i]))
}

/// Longest index chain `i₁ < i₂ < …` with `links(i_j, i_{j+1})`, ties
/// broken towards the lexicographically least list.
///
/// `best[i]` is the length of the longest chain starting at `i`; walking
/// forward and always taking the smallest admissible successor that keeps
/// the optimum yields the least list.
pub(crate) fn longest_chain_by(n: usize, links: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mut best = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if best[j] + 1 > best[i] && links(i, j) {
                best[i] = best[j] + 1;
            }
        }
    }
    let target = *best.iter().max().expect("nonempty");
    let mut chain = Vec::with_capacity(target);
    let mut cur = (0..n)
        .find(|&i| best[i] == target)
        .expect("maximum attained");
    chain.push(cur);
    while best[cur] > 1 {
        cur = (cur + 1..n)
            .find(|&j| best[j] + 1 == best[cur] && links(cur, j))
            .expect("a successor realizes best");
        chain.push(cur);
    }
    chain
}

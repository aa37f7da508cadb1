//! Toric germs `(X_σ ∋ x)` of a single strongly convex cone, their
//! log discrepancy functions `ψ`, and exact minimal log discrepancies.

mod face;
mod mld;
mod quotient;

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{self, dot_rat, LatticeError, LatticePoint, Solution};
use crate::rat::{self, Rat};

pub use face::{reduce_orbit_point, OrbitReduction};
pub use mld::{
    mld_over_region, region_with_bound, toric_alct, toric_alct_with, toric_mld, toric_mld_with,
    AlctResult, MldResult, MldValue,
};
pub use quotient::{quotient_germ_to_toric, QuotientToric};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("cone needs at least one ray and positive dimension")]
    Empty,
    #[error("ray {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NotPrimitive(usize),
    #[error("ray {0} is listed twice")]
    DuplicateRay(usize),
    #[error("rays span a space of dimension {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("cone contains a line")]
    NotStronglyConvex,
    #[error("ray {0} is not an extremal ray of the cone")]
    RedundantRay(usize),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { got: usize, expected: usize },
    #[error("K_X + B is not R-Cartier: no linear function takes the prescribed ray values")]
    NotRCartier,
    #[error("K_X is not Q-Cartier, so the search region is undefined")]
    NotQGorenstein,
    #[error("point {0} is not in the cone")]
    NotInCone(LatticePoint),
    #[error("decomposition of the zero vector")]
    ZeroPoint,
    #[error("rays {0:?} do not span a face of the cone")]
    NotAFace(Vec<usize>),
    #[error("mld of the pair is {mld}, below the requested a = {a}")]
    BelowThresholdAtZero { mld: String, a: String },
    #[error("divisor coefficients are all zero")]
    ZeroDivisor,
    #[error("group order must be positive, got {0}")]
    BadOrder(i64),
    #[error("coordinate does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A strongly convex, full-dimensional rational cone in `ℤ^d` given by its
/// primitive extremal rays, together with its primitive inward facet
/// normals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricGerm {
    dim: usize,
    rays: Vec<LatticePoint>,
    facets: Vec<Vec<i64>>,
}

impl ToricGerm {
    pub fn new(dim: usize, rays: Vec<LatticePoint>) -> Result<Self, ToricError> {
        if dim == 0 || rays.is_empty() {
            return Err(ToricError::Empty);
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(ToricError::DimensionMismatch {
                    index: i,
                    got: r.dim(),
                    expected: dim,
                });
            }
            if r.iter().all(|&x| x == 0) {
                return Err(ToricError::ZeroRay(i));
            }
            if r.gcd() != 1 {
                return Err(ToricError::NotPrimitive(i));
            }
            if rays[..i].contains(r) {
                return Err(ToricError::DuplicateRay(i));
            }
        }
        let rows: Vec<Vec<Rat>> = rays.iter().map(|r| r.to_rats()).collect();
        let rank = lattice::rank(&rows);
        if rank < dim {
            return Err(ToricError::NotFullDimensional { rank, dim });
        }
        let facets = if rays.len() == dim {
            simplicial_facets(&rows)?
        } else {
            general_facets(dim, &rays)?
        };
        Ok(ToricGerm { dim, rays, facets })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, ToricError> {
        let dim = rows.first().map_or(0, Vec::len);
        Self::new(dim, rows.iter().map(|r| LatticePoint(r.clone())).collect())
    }

    /// The positive orthant: the germ of a smooth point.
    pub fn smooth(dim: usize) -> Self {
        let rays = (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                LatticePoint(e)
            })
            .collect();
        Self::new(dim, rays).expect("standard basis spans a smooth cone")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    /// Primitive inward normals `u` with `σ = {x : ⟨u, x⟩ ≥ 0 ∀u}`.
    pub fn facets(&self) -> &[Vec<i64>] {
        &self.facets
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|u| dot_i128(u, p) >= 0)
    }

    pub fn in_relative_interior(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|u| dot_i128(u, p) > 0)
    }

    /// `ψ` with `ψ(e_i) = values[i]`, if a linear function does that.
    pub fn linear_function(&self, values: &[Rat]) -> Result<Psi, ToricError> {
        if values.len() != self.rays.len() {
            return Err(ToricError::CoefficientCount {
                got: values.len(),
                expected: self.rays.len(),
            });
        }
        let rows: Vec<Vec<Rat>> = self.rays.iter().map(|r| r.to_rats()).collect();
        match lattice::solve_rational(&rows, values) {
            Solution::Unique(m) => Ok(Psi(m)),
            Solution::Inconsistent => Err(ToricError::NotRCartier),
            Solution::Underdetermined { .. } => unreachable!("rays span the space"),
        }
    }

    /// `ψ₀`: the log discrepancy function of `(X, 0)`, equal to 1 on rays.
    pub fn psi0(&self) -> Result<Psi, ToricError> {
        self.linear_function(&vec![Rat::one(); self.rays.len()])
            .map_err(|_| ToricError::NotQGorenstein)
    }
}

fn dot_i128(u: &[i64], p: &[i64]) -> i128 {
    u.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn to_i64_vec(v: &[num_bigint::BigInt]) -> Result<Vec<i64>, ToricError> {
    v.iter()
        .map(|x| x.to_i64().ok_or(ToricError::Overflow))
        .collect()
}

/// Columns of the inverse ray matrix, scaled to primitive integers.
fn simplicial_facets(rows: &[Vec<Rat>]) -> Result<Vec<Vec<i64>>, ToricError> {
    let d = rows.len();
    (0..d)
        .map(|j| {
            let mut ej = vec![Rat::zero(); d];
            ej[j] = Rat::one();
            match lattice::solve_rational(rows, &ej) {
                Solution::Unique(col) => to_i64_vec(&lattice::primitive_integer(&col)),
                _ => unreachable!("ray matrix is invertible"),
            }
        })
        .collect()
}

/// Facets from the normals of all `(d−1)`-subsets of rays spanning a
/// hyperplane with every ray on one side.
fn general_facets(dim: usize, rays: &[LatticePoint]) -> Result<Vec<Vec<i64>>, ToricError> {
    let mut facets: Vec<Vec<i64>> = Vec::new();
    for subset in combinations(rays.len(), dim - 1) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| rays[i].to_rats()).collect();
        let kernel = lattice::nullspace(&rows, dim);
        if kernel.len() != 1 {
            continue;
        }
        let mut u = to_i64_vec(&lattice::primitive_integer(&kernel[0]))?;
        let signs: Vec<i128> = rays.iter().map(|r| dot_i128(&u, r)).collect();
        if signs.iter().all(|&s| s <= 0) {
            u.iter_mut().for_each(|x| *x = -*x);
        } else if !signs.iter().all(|&s| s >= 0) {
            continue;
        }
        if !facets.contains(&u) {
            facets.push(u);
        }
    }
    facets.sort();
    let normals: Vec<Vec<Rat>> = facets
        .iter()
        .map(|u| u.iter().map(|&x| rat::int(x)).collect())
        .collect();
    if normals.is_empty() || lattice::rank(&normals) < dim {
        return Err(ToricError::NotStronglyConvex);
    }
    for (i, r) in rays.iter().enumerate() {
        let on: Vec<Vec<Rat>> = facets
            .iter()
            .zip(&normals)
            .filter(|(u, _)| dot_i128(u, r) == 0)
            .map(|(_, n)| n.clone())
            .collect();
        if lattice::rank(&on) < dim - 1 {
            return Err(ToricError::RedundantRay(i));
        }
    }
    Ok(facets)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// A linear function on `N_ℚ`, stored as its covector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Psi(pub Vec<Rat>);

impl Psi {
    pub fn eval(&self, p: &[i64]) -> Rat {
        dot_rat(&self.0, p)
    }

    pub fn covector(&self) -> &[Rat] {
        &self.0
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rat::fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A toric germ with boundary `B = Σ bᵢ V(eᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricPair {
    germ: ToricGerm,
    coeffs: Vec<Rat>,
}

impl ToricPair {
    pub fn new(germ: ToricGerm, coeffs: Vec<Rat>) -> Result<Self, ToricError> {
        if coeffs.len() != germ.rays.len() {
            return Err(ToricError::CoefficientCount {
                got: coeffs.len(),
                expected: germ.rays.len(),
            });
        }
        Ok(ToricPair { germ, coeffs })
    }

    /// `(X, 0)`.
    pub fn without_boundary(germ: ToricGerm) -> Self {
        let coeffs = vec![Rat::zero(); germ.rays.len()];
        ToricPair { germ, coeffs }
    }

    pub fn germ(&self) -> &ToricGerm {
        &self.germ
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
}

/// The covector with `ψ(eᵢ) = 1 − bᵢ`.
pub fn psi_from_pair(pair: &ToricPair) -> Result<Psi, ToricError> {
    let values: Vec<Rat> = pair.coeffs.iter().map(|b| Rat::one() - b).collect();
    pair.germ.linear_function(&values)
}

/// A point of `σ` written on linearly independent rays, and its fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caratheodory {
    /// Indices of the rays used, increasing.
    pub subset: Vec<usize>,
    /// Positive coefficients with `e = Σ λⱼ e_{iⱼ}`.
    pub lambda: Vec<Rat>,
    /// `λⱼ + 1 − ⌈λⱼ⌉ ∈ (0, 1]`.
    pub folded: Vec<Rat>,
    /// `Σ folded_j e_{iⱼ}`, a lattice point since it differs from `e` by
    /// an integral combination of rays.
    pub fold: LatticePoint,
}

/// Carathéodory decomposition of `e ∈ σ` on the first linearly independent
/// ray subset (by size, then lexicographically) that expresses `e` with
/// positive coefficients.
pub fn caratheodory_decompose(germ: &ToricGerm, e: &[i64]) -> Result<Caratheodory, ToricError> {
    if e.len() != germ.dim {
        return Err(ToricError::DimensionMismatch {
            index: 0,
            got: e.len(),
            expected: germ.dim,
        });
    }
    if e.iter().all(|&x| x == 0) {
        return Err(ToricError::ZeroPoint);
    }
    let target: Vec<Rat> = e.iter().map(|&x| rat::int(x)).collect();
    for s in 1..=germ.dim.min(germ.rays.len()) {
        for subset in combinations(germ.rays.len(), s) {
            // Solve Σ λⱼ rⱼ = e, i.e. Rᵀ λ = e.
            let cols: Vec<Vec<Rat>> = (0..germ.dim)
                .map(|k| subset.iter().map(|&i| rat::int(germ.rays[i][k])).collect())
                .collect();
            let Solution::Unique(lambda) = lattice::solve_rational(&cols, &target) else {
                continue;
            };
            if lambda.iter().any(|l| !l.is_positive()) {
                continue;
            }
            let folded: Vec<Rat> = lambda.iter().map(|l| l + Rat::one() - l.ceil()).collect();
            let mut fold = vec![Rat::zero(); germ.dim];
            for (f, &i) in folded.iter().zip(&subset) {
                for (k, x) in fold.iter_mut().enumerate() {
                    *x += f * rat::int(germ.rays[i][k]);
                }
            }
            let fold = fold
                .iter()
                .map(|x| {
                    debug_assert!(x.is_integer());
                    x.to_integer().to_i64().ok_or(ToricError::Overflow)
                })
                .collect::<Result<Vec<i64>, _>>()?;
            return Ok(Caratheodory {
                subset,
                lambda,
                folded,
                fold: LatticePoint(fold),
            });
        }
    }
    Err(ToricError::NotInCone(LatticePoint(e.to_vec())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    fn cone(rows: &[&[i64]]) -> Result<ToricGerm, ToricError> {
        ToricGerm::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn validation() {
        assert!(matches!(
            cone(&[&[2, 0], &[0, 1]]),
            Err(ToricError::NotPrimitive(0))
        ));
        assert!(matches!(
            cone(&[&[1, 0], &[2, 0]]),
            Err(ToricError::NotPrimitive(1))
        ));
        assert!(matches!(
            cone(&[&[1, 0], &[-1, 1], &[1, 1]]),
            Err(ToricError::RedundantRay(2))
        ));
        assert!(matches!(
            cone(&[&[1, 0], &[-1, 0], &[0, 1]]),
            Err(ToricError::NotStronglyConvex)
        ));
        assert!(matches!(
            cone(&[&[1, 0, 0], &[0, 1, 0]]),
            Err(ToricError::NotFullDimensional { rank: 2, dim: 3 })
        ));
    }

    #[test]
    fn facets_of_square_cone() {
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]).unwrap();
        assert_eq!(c.facets().len(), 4);
        assert!(c.in_relative_interior(&[0, 0, 1]));
        assert!(!c.in_relative_interior(&[1, 0, 1]));
        assert!(c.contains(&[1, 0, 1]));
        assert!(!c.contains(&[2, 0, 1]));
    }

    #[test]
    fn psi_examples() {
        let s = ToricPair::without_boundary(ToricGerm::smooth(3));
        assert_eq!(psi_from_pair(&s).unwrap().0, vec![int(1); 3]);
        let c = ToricPair::without_boundary(cone(&[&[1, 0], &[1, 2]]).unwrap());
        assert_eq!(psi_from_pair(&c).unwrap().0, vec![int(1), int(0)]);
        let sq = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]).unwrap();
        let p = ToricPair::new(sq.clone(), vec![int(0), int(0), int(0), ratio(1, 2)]).unwrap();
        assert_eq!(psi_from_pair(&p), Err(ToricError::NotRCartier));
        let p = ToricPair::new(sq, vec![int(0); 4]).unwrap();
        assert_eq!(psi_from_pair(&p).unwrap().0, vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn caratheodory_examples() {
        let s = ToricGerm::smooth(2);
        let c = caratheodory_decompose(&s, &[0, 1]).unwrap();
        assert_eq!(c.subset, vec![1]);
        assert_eq!(c.lambda, vec![int(1)]);
        assert_eq!(c.fold.0, vec![0, 1]);
        let c = caratheodory_decompose(&s, &[3, 2]).unwrap();
        assert_eq!(c.subset, vec![0, 1]);
        assert_eq!(c.lambda, vec![int(3), int(2)]);
        assert_eq!(c.fold.0, vec![1, 1]);
        assert!(matches!(
            caratheodory_decompose(&s, &[-1, 2]),
            Err(ToricError::NotInCone(_))
        ));
        let q = cone(&[&[2, -1], &[0, 1]]).unwrap();
        let c = caratheodory_decompose(&q, &[3, 1]).unwrap();
        assert_eq!(c.lambda, vec![ratio(3, 2), ratio(5, 2)]);
        assert_eq!(c.folded, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(c.fold.0, vec![1, 0]);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
    }
}

use num_traits::ToPrimitive;

use super::{dot_i128, ToricError, ToricGerm, ToricPair};
use crate::lattice::{self, IntMatrix, LatticePoint, Solution};
use crate::rat::{self, Rat};

/// The germ at a point of the orbit of a face `τ ≺ σ`, with the torus
/// factor split off: locally `X_σ ≅ X_τ' × (ℂ*)^{d−c}`, where `τ'` is `τ`
/// in the lattice `N ∩ span(τ)` of rank `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReduction {
    pub germ: ToricGerm,
    /// Rows spanning `N ∩ span(τ)` inside `ℤ^d`.
    pub basis: Vec<Vec<i64>>,
    /// Ray indices of `σ` spanning `τ`, increasing.
    pub face: Vec<usize>,
    pub torus_rank: usize,
}

impl OrbitReduction {
    /// Boundary coefficients on the rays of the reduced germ.
    pub fn restrict(&self, pair: &ToricPair) -> Result<ToricPair, ToricError> {
        let coeffs: Vec<Rat> = self
            .face
            .iter()
            .map(|&i| pair.coeffs()[i].clone())
            .collect();
        ToricPair::new(self.germ.clone(), coeffs)
    }
}

/// Splits off the torus factor at the orbit of the face spanned by the
/// given rays.
pub fn reduce_orbit_point(germ: &ToricGerm, face: &[usize]) -> Result<OrbitReduction, ToricError> {
    let mut face = face.to_vec();
    face.sort_unstable();
    face.dedup();
    let n = germ.rays().len();
    if face.is_empty() || face.iter().any(|&i| i >= n) {
        return Err(ToricError::NotAFace(face));
    }
    // The smallest face containing the rays is cut out by every facet
    // through all of them; the rays must be exactly the rays on it.
    let through: Vec<&Vec<i64>> = germ
        .facets()
        .iter()
        .filter(|u| face.iter().all(|&i| dot_i128(u, &germ.rays()[i]) == 0))
        .collect();
    let closure: Vec<usize> = (0..n)
        .filter(|&j| through.iter().all(|u| dot_i128(u, &germ.rays()[j]) == 0))
        .collect();
    if closure != face {
        return Err(ToricError::NotAFace(face));
    }
    let d = germ.dim();
    if face.len() == n {
        let basis = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        return Ok(OrbitReduction {
            germ: germ.clone(),
            basis,
            face,
            torus_rank: 0,
        });
    }
    let mut basis = saturated_span(d, face.iter().map(|&i| &germ.rays()[i][..]))?;
    if basis.len() == 1 {
        // Orient a rank-one span along its ray.
        let r = &germ.rays()[face[0]];
        if dot_i128(&basis[0], r) < 0 {
            basis[0].iter_mut().for_each(|x| *x = -*x);
        }
    }
    let c = basis.len();
    let rows: Vec<Vec<Rat>> = (0..d)
        .map(|k| basis.iter().map(|b| rat::int(b[k])).collect())
        .collect();
    let rays = face
        .iter()
        .map(|&i| {
            let rhs: Vec<Rat> = germ.rays()[i].iter().map(|&x| rat::int(x)).collect();
            let Solution::Unique(y) = lattice::solve_rational(&rows, &rhs) else {
                unreachable!("face rays lie in the span of the basis");
            };
            y.iter()
                .map(|x| {
                    debug_assert!(x.is_integer());
                    x.to_integer().to_i64().ok_or(ToricError::Overflow)
                })
                .collect::<Result<Vec<i64>, _>>()
                .map(LatticePoint)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrbitReduction {
        germ: ToricGerm::new(c, rays)?,
        basis,
        face,
        torus_rank: d - c,
    })
}

/// A basis of `ℤ^d ∩ span(vectors)`.
fn saturated_span<'a>(
    d: usize,
    vectors: impl Iterator<Item = &'a [i64]>,
) -> Result<Vec<Vec<i64>>, ToricError> {
    // Integral kernel of a matrix `m` (as a row space): the rows of the
    // unimodular transform that the Hermite form sends to zero.
    fn left_kernel(m: &[Vec<i64>], cols: usize) -> Result<Vec<Vec<i64>>, ToricError> {
        let t: Vec<Vec<i64>> = (0..cols)
            .map(|k| m.iter().map(|r| r[k]).collect())
            .collect();
        let h = lattice::hermite_normal_form(&IntMatrix::from_rows(&t));
        (h.rank..cols)
            .map(|i| h.u.row_i64(i).ok_or(ToricError::Overflow))
            .collect()
    }
    let a: Vec<Vec<i64>> = vectors.map(<[i64]>::to_vec).collect();
    // Covectors vanishing on the span, then vectors they all vanish on.
    let annihilator = left_kernel(&a, d)?;
    if annihilator.is_empty() {
        return Ok((0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect());
    }
    left_kernel(&annihilator, d)
}

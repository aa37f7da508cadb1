use num_traits::{ToPrimitive, Zero};

use super::{ToricError, ToricGerm};
use crate::lattice::{self, IntMatrix, LatticePoint, Solution};
use crate::rat::{self, Rat};

/// The cyclic quotient `ℂ^d/(1/n)(a₁,…,a_d)` as a toric germ.
///
/// The lattice `N = ℤ^d + ℤ·(1/n)a` is scaled by `n` to an integral
/// lattice `N' ⊂ ℤ^d` and rebased to `ℤ^d` through a Hermite basis, so
/// that `c ∈ ℤ^d` corresponds to the point `c·basis / n` of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientToric {
    pub germ: ToricGerm,
    pub order: i64,
    /// Rows spanning `N' = nℤ^d + ℤa`.
    pub basis: Vec<Vec<i64>>,
    /// `n·eᵢ = ray_scales[i] · rays[i]` in the new coordinates.
    pub ray_scales: Vec<i64>,
}

impl QuotientToric {
    /// New coordinates of the `N`-point with `(1/n)`-numerators `v`, or
    /// `None` if it is not in `N`.
    pub fn to_toric(&self, v: &[i64]) -> Option<LatticePoint> {
        if v.len() != self.basis.len() {
            return None;
        }
        // c · basis = v, i.e. basisᵀ cᵀ = vᵀ.
        let d = self.basis.len();
        let rows: Vec<Vec<Rat>> = (0..d)
            .map(|k| self.basis.iter().map(|b| rat::int(b[k])).collect())
            .collect();
        let rhs: Vec<Rat> = v.iter().map(|&x| rat::int(x)).collect();
        match lattice::solve_rational(&rows, &rhs) {
            Solution::Unique(c) => c
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().to_i64()
                    } else {
                        None
                    }
                })
                .collect::<Option<Vec<i64>>>()
                .map(LatticePoint),
            _ => None,
        }
    }

    /// `(1/n)`-numerators of the point with new coordinates `c`.
    pub fn numerators(&self, c: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; self.basis.len()];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (x, bk) in v.iter_mut().zip(b) {
                *x += ci * bk;
            }
        }
        v
    }

    /// The point with new coordinates `c`, in the original coordinates.
    pub fn to_original(&self, c: &[i64]) -> Vec<Rat> {
        self.numerators(c)
            .into_iter()
            .map(|x| rat::ratio(x, self.order))
            .collect()
    }

    /// No element of the group fixes a hyperplane pointwise, i.e. the
    /// coordinate axes stay primitive in `N`.
    pub fn is_well_formed(&self) -> bool {
        self.ray_scales.iter().all(|&s| s == 1)
    }
}

/// Builds the toric germ of `(0 ∈ ℂ^d)/(1/n)(a₁,…,a_d)`.
pub fn quotient_germ_to_toric(n: i64, chars: &[i64]) -> Result<QuotientToric, ToricError> {
    if n < 1 {
        return Err(ToricError::BadOrder(n));
    }
    let d = chars.len();
    if d == 0 {
        return Err(ToricError::Empty);
    }
    let mut rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            let mut r = vec![0; d];
            r[i] = n;
            r
        })
        .collect();
    rows.push(chars.iter().map(|a| a.rem_euclid(n)).collect());
    let hnf = lattice::hermite_normal_form(&IntMatrix::from_rows(&rows));
    debug_assert_eq!(hnf.rank, d);
    let basis = (0..d)
        .map(|i| hnf.h.row_i64(i).ok_or(ToricError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    let partial = QuotientToric {
        germ: ToricGerm::smooth(d),
        order: n,
        basis,
        ray_scales: Vec::new(),
    };
    let mut rays = Vec::with_capacity(d);
    let mut ray_scales = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = vec![0; d];
        v[i] = n;
        let c = partial
            .to_toric(&v)
            .expect("n·eᵢ lies in the lattice it helps generate");
        let g = c.gcd();
        debug_assert!(!g.is_zero());
        ray_scales.push(g);
        rays.push(LatticePoint(c.iter().map(|x| x / g).collect()));
    }
    Ok(QuotientToric {
        germ: ToricGerm::new(d, rays)?,
        ray_scales,
        ..partial
    })
}

//! Integer-lattice primitives: Hermite normal form, exact linear solving and
//! enumeration of the integer points of a bounded rational polyhedron.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::par::{self, Exec};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("region is unbounded along coordinate {coord}")]
    UnboundedRegion { coord: usize },
    #[error("constraint {index} has length {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("integer coefficients exceed the 128-bit enumeration range")]
    CoefficientOverflow,
}

/// A point of `ℤ^d`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Componentwise `self ≤ other`.
    pub fn dominated_by(&self, other: &LatticePoint) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.0.iter().map(|&c| rat::int(c)).collect()
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }
}

impl Deref for LatticePoint {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn dot_rat(a: &[Rat], x: &[i64]) -> Rat {
    a.iter()
        .zip(x)
        .fold(Rat::zero(), |acc, (ai, &xi)| acc + ai * rat::int(xi))
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_i64(&self, i: usize) -> Option<Vec<i64>> {
        self.row(i).iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Determinant by Bareiss elimination (square matrices only).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn row_sub_mul(&mut self, target: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(target, j) - q * self.get(src, j);
            self.set(target, j, v);
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

/// Result of [`hermite_normal_form`]: `u · m = h`, `u` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Number of nonzero rows of `h`; `rank < rows` flags rank deficiency.
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form.
///
/// `h` is in row echelon form, each pivot is positive, and entries above a
/// pivot lie in `[0, pivot)`. Zero rows are collected at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> Hermite {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        loop {
            // bring the smallest nonzero |entry| of column c to row r
            let best = (r..m.rows())
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by_key(|&i| h.get(i, c).abs());
            let Some(p) = best else { break };
            h.row_swap(r, p);
            u.row_swap(r, p);
            let mut done = true;
            for i in r + 1..m.rows() {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.row_sub_mul(i, r, &q);
                u.row_sub_mul(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.row_negate(r);
            u.row_negate(r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            h.row_sub_mul(i, r, &q);
            u.row_sub_mul(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite {
        h,
        u,
        rank: r,
        pivots,
    }
}

/// Outcome of [`solve_rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rat>),
    Inconsistent,
    /// One particular solution plus a basis of the null space.
    Underdetermined {
        particular: Vec<Rat>,
        kernel: Vec<Vec<Rat>>,
    },
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
fn rref(a: &mut [Vec<Rat>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (top, rest) = if i < r {
                    let (x, y) = a.split_at_mut(r);
                    (&y[0], &mut x[i])
                } else {
                    let (x, y) = a.split_at_mut(i);
                    (&x[r], &mut y[0])
                };
                for (t, s) in rest.iter_mut().zip(top.iter()) {
                    *t -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `a · x = b` exactly.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Solution {
    assert_eq!(a.len(), b.len(), "row count of A and length of b differ");
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n, "ragged coefficient matrix");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    // a pivot in the augmented column means 0 = nonzero
    if aug.iter().skip(pivots.len()).any(|row| !row[n].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    if pivots.len() == n {
        return Solution::Unique(x);
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug[r][f].clone();
            }
            v
        })
        .collect();
    Solution::Underdetermined {
        particular: x,
        kernel,
    }
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let n = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    rref(&mut m, n).len()
}

/// Basis of `{x : a·x = 0}` over ℚ.
pub fn nullspace(a: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    if a.is_empty() {
        return (0..cols)
            .map(|i| {
                let mut v = vec![Rat::zero(); cols];
                v[i] = Rat::one();
                v
            })
            .collect();
    }
    match solve_rational(a, &vec![Rat::zero(); a.len()]) {
        Solution::Unique(_) => Vec::new(),
        Solution::Underdetermined { kernel, .. } => kernel,
        Solution::Inconsistent => unreachable!("homogeneous systems are consistent"),
    }
}

/// Scales a rational vector to the primitive integer vector on its ray.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let (ints, _) = rat::clear_denominators(v);
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// One half-space `⟨coeffs, x⟩ ≤ bound`, or `< bound` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub bound: Rat,
    pub strict: bool,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rat>, bound: Rat) -> Self {
        Constraint {
            coeffs,
            bound,
            strict: false,
        }
    }

    pub fn lt(coeffs: Vec<Rat>, bound: Rat) -> Self {
        Constraint {
            coeffs,
            bound,
            strict: true,
        }
    }

    /// `⟨coeffs, x⟩ ≥ bound` (`>` when strict), stored negated.
    pub fn ge(coeffs: Vec<Rat>, bound: Rat, strict: bool) -> Self {
        Constraint {
            coeffs: coeffs.into_iter().map(|c| -c).collect(),
            bound: -bound,
            strict,
        }
    }

    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        let v = dot_rat(&self.coeffs, x);
        if self.strict {
            v < self.bound
        } else {
            v <= self.bound
        }
    }

    /// Equivalent integral constraint `⟨a, x⟩ ≤ b` for integer `x`, with `a`
    /// primitive. Strictness is absorbed exactly: `⟨a,x⟩ < b ⟺ ⟨a,x⟩ ≤ ⌈b⌉ − 1`.
    fn integral(&self) -> IntHalfspace {
        let mut all = self.coeffs.clone();
        all.push(self.bound.clone());
        let (mut ints, _) = rat::clear_denominators(&all);
        let b = ints.pop().expect("bound present");
        let a = ints;
        let g = a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            let ok = if self.strict {
                b.is_positive()
            } else {
                !b.is_negative()
            };
            return IntHalfspace {
                a,
                b: if ok { BigInt::zero() } else { -BigInt::one() },
            };
        }
        let a: Vec<BigInt> = a.into_iter().map(|x| x / &g).collect();
        let b = if self.strict {
            // largest integer strictly below b/g
            let q = Rat::new(b, g.clone());
            rat::ceil_int(&q) - BigInt::one()
        } else {
            b.div_floor(&g)
        };
        IntHalfspace { a, b }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct IntHalfspace {
    a: Vec<BigInt>,
    b: BigInt,
}

impl IntHalfspace {
    fn normalize(mut self) -> Self {
        let g = self.a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g > BigInt::one() {
            for x in &mut self.a {
                *x /= &g;
            }
            self.b = self.b.div_floor(&g);
        }
        self
    }
}

/// Removes duplicate directions, keeping the tightest bound.
fn dedup(sys: Vec<IntHalfspace>) -> Vec<IntHalfspace> {
    let mut best: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    for h in sys {
        best.entry(h.a)
            .and_modify(|b| {
                if h.b < *b {
                    *b = h.b.clone()
                }
            })
            .or_insert(h.b);
    }
    best.into_iter()
        .map(|(a, b)| IntHalfspace { a, b })
        .collect()
}

/// Fourier–Motzkin elimination of variable `k`.
fn eliminate(sys: &[IntHalfspace], k: usize) -> Vec<IntHalfspace> {
    let mut out = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for h in sys {
        match h.a[k].sign() {
            num_bigint::Sign::Plus => pos.push(h),
            num_bigint::Sign::Minus => neg.push(h),
            num_bigint::Sign::NoSign => out.push(h.clone()),
        }
    }
    for p in &pos {
        for n in &neg {
            let cp = -&n.a[k];
            let cn = p.a[k].clone();
            let a =
                p.a.iter()
                    .zip(&n.a)
                    .map(|(x, y)| &cp * x + &cn * y)
                    .collect();
            let b = &cp * &p.b + &cn * &n.b;
            out.push(IntHalfspace { a, b }.normalize());
        }
    }
    dedup(out)
}

/// Bounds for one coordinate at one level: `coeff · x_k ≤ bound − Σ_{j<k} a_j x_j`.
#[derive(Debug, Clone)]
struct Level {
    rows: Vec<(Vec<i128>, i128)>,
    k: usize,
}

impl Level {
    fn range(&self, prefix: &[i64]) -> Option<(i128, i128)> {
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for (a, b) in &self.rows {
            let rest: i128 = a[..self.k]
                .iter()
                .zip(prefix)
                .map(|(x, &y)| x * y as i128)
                .sum();
            let rhs = b - rest;
            let c = a[self.k];
            if c > 0 {
                hi = hi.min(Integer::div_floor(&rhs, &c));
            } else {
                // c < 0 flips the inequality
                lo = lo.max(Integer::div_ceil(&rhs, &c));
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Integer points of `{x ∈ ℚ^dim : every constraint holds}`, sorted
/// lexicographically.
pub fn enumerate_lattice_points(
    dim: usize,
    constraints: &[Constraint],
) -> Result<Vec<LatticePoint>, LatticeError> {
    enumerate_lattice_points_with(dim, constraints, Exec::default())
}

pub fn enumerate_lattice_points_with(
    dim: usize,
    constraints: &[Constraint],
    exec: Exec,
) -> Result<Vec<LatticePoint>, LatticeError> {
    for (i, c) in constraints.iter().enumerate() {
        if c.coeffs.len() != dim {
            return Err(LatticeError::DimensionMismatch {
                index: i,
                got: c.coeffs.len(),
                expected: dim,
            });
        }
    }
    if dim == 0 {
        let ok = constraints.iter().all(|c| c.satisfied_by(&[]));
        return Ok(if ok {
            vec![LatticePoint::zero(0)]
        } else {
            vec![]
        });
    }
    // systems[k] involves only x_0..x_{k-1}
    let mut systems: Vec<Vec<IntHalfspace>> = vec![Vec::new(); dim + 1];
    systems[dim] = dedup(constraints.iter().map(Constraint::integral).collect());
    for k in (0..dim).rev() {
        systems[k] = eliminate(&systems[k + 1], k);
    }
    // everything left in systems[0] has a zero covector
    if systems[0].iter().any(|h| h.b.is_negative()) {
        return Ok(Vec::new());
    }
    let mut levels = Vec::with_capacity(dim);
    for k in 0..dim {
        let involved: Vec<&IntHalfspace> = systems[k + 1]
            .iter()
            .filter(|h| !h.a[k].is_zero())
            .collect();
        let has_upper = involved.iter().any(|h| h.a[k].is_positive());
        let has_lower = involved.iter().any(|h| h.a[k].is_negative());
        if !(has_upper && has_lower) {
            return Err(LatticeError::UnboundedRegion { coord: k });
        }
        let rows = involved
            .into_iter()
            .map(|h| {
                let a: Option<Vec<i128>> = h.a.iter().map(ToPrimitive::to_i128).collect();
                Some((a?, h.b.to_i128()?))
            })
            .collect::<Option<Vec<_>>>()
            .ok_or(LatticeError::CoefficientOverflow)?;
        levels.push(Level { rows, k });
    }
    let Some((lo, hi)) = levels[0].range(&[]) else {
        return Ok(Vec::new());
    };
    let first: Vec<i64> = (lo..=hi)
        .map(|x| i64::try_from(x).map_err(|_| LatticeError::CoefficientOverflow))
        .collect::<Result<_, _>>()?;
    Ok(par::map_collect(exec, &first, |&x0| {
        let mut out = Vec::new();
        let mut prefix = vec![x0];
        descend(&levels, &mut prefix, &mut out);
        out
    }))
}

fn descend(levels: &[Level], prefix: &mut Vec<i64>, out: &mut Vec<LatticePoint>) {
    let k = prefix.len();
    if k == levels.len() {
        out.push(LatticePoint(prefix.clone()));
        return;
    }
    if let Some((lo, hi)) = levels[k].range(prefix) {
        for x in lo..=hi {
            prefix.push(x as i64);
            descend(levels, prefix, out);
            prefix.pop();
        }
    }
}

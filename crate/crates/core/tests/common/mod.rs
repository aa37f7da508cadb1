//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls the library's algorithms: facets come from
//! cofactor normals, linear systems from plain Gaussian elimination, and
//! minima from scanning a bounding box.

#![allow(dead_code)]

use mldkit::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn z(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Determinant by cofactor expansion; fine for d ≤ 4.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Generalized cross product of `d − 1` vectors in `ℤ^d`.
pub fn cross(vs: &[&[i64]], d: usize) -> Vec<i128> {
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = vs
                .iter()
                .map(|v| (0..d).filter(|&k| k != j).map(|k| v[k] as i128).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * det(&minor)
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Inward facet normals of the cone over `rays` (full-dimensional,
/// strongly convex), primitive and without repeats.
pub fn facets(rays: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let d = rays[0].len();
    if d == 1 {
        return vec![vec![rays[0][0].signum() as i128]];
    }
    let mut out: Vec<Vec<i128>> = Vec::new();
    for s in subsets(rays.len(), d - 1) {
        let vs: Vec<&[i64]> = s.iter().map(|&i| &rays[i][..]).collect();
        let mut u = cross(&vs, d);
        let g = u.iter().fold(0i128, |a, &b| a.gcd(&b));
        if g == 0 {
            continue;
        }
        u.iter_mut().for_each(|x| *x /= g);
        let dots: Vec<i128> = rays.iter().map(|r| dot(&u, r)).collect();
        if dots.iter().all(|&x| x <= 0) {
            u.iter_mut().for_each(|x| *x = -*x);
        } else if !dots.iter().all(|&x| x >= 0) {
            continue;
        }
        if !out.contains(&u) {
            out.push(u);
        }
    }
    out
}

pub fn dot(u: &[i128], p: &[i64]) -> i128 {
    u.iter().zip(p).map(|(a, &b)| a * b as i128).sum()
}

/// A solution of `A x = b`, if the system is consistent and determined.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let mut row = 0;
    for c in 0..cols {
        let p = (row..m.len()).find(|&i| !m[i][c].is_zero())?;
        m.swap(row, p);
        let piv = m[row][c].clone();
        m[row].iter_mut().for_each(|x| *x = &*x / &piv);
        for i in 0..m.len() {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[row].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= p * &f;
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(m[..cols].iter().map(|r| r[cols].clone()).collect())
}

/// The covector taking `values[i]` on `rays[i]`.
pub fn linear(rays: &[Vec<i64>], values: &[Rat]) -> Option<Vec<Rat>> {
    let a: Vec<Vec<Rat>> = rays
        .iter()
        .map(|r| r.iter().map(|&x| z(x)).collect())
        .collect();
    solve(&a, values)
}

pub fn eval(cov: &[Rat], p: &[i64]) -> Rat {
    cov.iter()
        .zip(p)
        .map(|(c, &x)| c * z(x))
        .fold(Rat::zero(), |a, b| a + b)
}

/// Scales a rational covector to integers: `(numerators, denominator)`.
fn integral(cov: &[Rat]) -> (Vec<i128>, i128) {
    let l = cov.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
    let v = cov
        .iter()
        .map(|c| (c.numer() * (&l / c.denom())).to_i128().expect("small"))
        .collect();
    (v, l.to_i128().expect("small"))
}

/// Lattice points of `relint(σ) ∩ {ψ₀ ≤ bound}` by scanning the box that
/// contains `σ ∩ {ψ₀ ≤ bound}`, in lexicographic order.
pub fn relint_points(rays: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let d = rays[0].len();
    let fs = facets(rays);
    let psi0 = linear(rays, &vec![Rat::one(); rays.len()]).expect("Q-Gorenstein");
    let (m0, l0) = integral(&psi0);
    // Every point of σ ∩ {ψ₀ ≤ B} is Σλᵢeᵢ with Σλᵢ ≤ B.
    let ext: Vec<i64> = (0..d)
        .map(|k| bound * rays.iter().map(|r| r[k].abs()).max().unwrap())
        .collect();
    let mut out = Vec::new();
    let mut p: Vec<i64> = ext.iter().map(|e| -e).collect();
    loop {
        if fs.iter().all(|u| dot(u, &p) > 0) && dot(&m0, &p) <= bound as i128 * l0 {
            out.push(p.clone());
        }
        let Some(i) = (0..d).rev().find(|&i| p[i] < ext[i]) else {
            break;
        };
        p[i] += 1;
        for k in i + 1..d {
            p[k] = -ext[k];
        }
    }
    out
}

/// `min ψ` over `relint(σ) ∩ {ψ₀ ≤ bound}` and its lexicographically least
/// minimizer.
pub fn brute_mld(rays: &[Vec<i64>], coeffs: &[Rat], bound: i64) -> Option<(Rat, Vec<i64>)> {
    let vals: Vec<Rat> = coeffs.iter().map(|b| Rat::one() - b).collect();
    let psi = linear(rays, &vals)?;
    let mut best: Option<(Rat, Vec<i64>)> = None;
    for p in relint_points(rays, bound) {
        let v = eval(&psi, &p);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, p));
        }
    }
    best
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |a, &b| a.gcd(&b)) == 1
}

/// A random simplicial cone with entries in `[lo, hi]`.
pub fn simplicial_cone(rng: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(lo..=hi)).collect())
            .collect();
        let m: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        if det(&m) != 0 && rows.iter().all(|r| is_primitive(r)) {
            return rows;
        }
    }
}

/// A random unimodular matrix from products of elementary moves.
pub fn unimodular(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    if d == 1 {
        return m;
    }
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let f = rng.gen_range(-1..=1);
        let src = m[j].clone();
        for (x, s) in m[i].iter_mut().zip(&src) {
            *x += f * s;
        }
    }
    m
}

pub fn apply(rows: &[Vec<i64>], u: &[Vec<i64>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| {
            (0..u[0].len())
                .map(|k| (0..r.len()).map(|i| r[i] * u[i][k]).sum())
                .collect()
        })
        .collect()
}

/// Non-simplicial Gorenstein cones: a square and a hexagon over height
/// one, in dimension 3, and the cone over a square prism in dimension 4.
pub fn non_simplicial_templates() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]],
        vec![
            vec![1, 0, 1],
            vec![1, 1, 1],
            vec![0, 1, 1],
            vec![-1, 0, 1],
            vec![-1, -1, 1],
            vec![0, -1, 1],
        ],
        vec![
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 1],
            vec![-1, 0, 0, 1],
            vec![0, -1, 0, 1],
            vec![0, 0, 1, 1],
        ],
    ]
}

/// A random coefficient in `[0, 1]` with denominator at most 4.
pub fn unit_coeff(rng: &mut ChaCha8Rng) -> Rat {
    let d = rng.gen_range(1..=4);
    q(rng.gen_range(0..=d), d)
}

/// Whether `t` is within `Rat` distance `tol` of `target`.
pub fn near(t: &Rat, target: &Rat, tol: &Rat) -> bool {
    (t - target).abs() <= *tol
}

/// A random lc pair: a simplicial cone with small entries or a transformed
/// non-simplicial template, and coefficients in `[0, 1]`. Non-simplicial
/// cones carry zero boundary so that `K + B` stays Cartier.
pub fn random_lc_pair(seed: u64) -> (Vec<Vec<i64>>, Vec<Rat>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rays = if rng.gen_bool(0.2) {
        let ts = non_simplicial_templates();
        let t = &ts[rng.gen_range(0..ts.len())];
        apply(t, &unimodular(&mut rng, t[0].len()))
    } else {
        let d = rng.gen_range(1..=4);
        let (lo, hi) = if d == 4 { (-1, 1) } else { (-2, 2) };
        simplicial_cone(&mut rng, d, lo, hi)
    };
    let d = rays[0].len();
    let coeffs = if rays.len() == d {
        (0..d).map(|_| unit_coeff(&mut rng)).collect()
    } else {
        vec![Rat::zero(); rays.len()]
    };
    (rays, coeffs)
}

/// The rational with least denominator in `[lo, hi]`, `0 < lo ≤ hi`, from
/// the continued-fraction expansions of the endpoints.
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    let fl = lo.floor();
    if &fl == lo || fl < hi.floor() {
        return if &fl == lo { fl } else { fl + Rat::one() };
    }
    // Same integer part: recurse on the reciprocals of the fractional parts.
    let (a, b) = (lo - &fl, hi - &fl);
    fl + Rat::one() / simplest_in(&(Rat::one() / b), &(Rat::one() / a))
}

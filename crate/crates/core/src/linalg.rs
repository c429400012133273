//! Small dense routines: dominant eigenpairs of nonnegative primitive
//! matrices and the subdominant spectral modulus of a stochastic matrix.

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<f64>>;

pub const EIGEN_TOL: f64 = 1e-14;
pub const MAX_ITER: usize = 1_000_000;

pub fn mat_vec(m: &Matrix, v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn vec_mat(v: &[f64], m: &Matrix) -> Vec<f64> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![0.0; n];
    for (vi, row) in v.iter().zip(m) {
        if *vi != 0.0 {
            for (o, a) in out.iter_mut().zip(row) {
                *o += vi * a;
            }
        }
    }
    out
}

pub fn transpose(m: &Matrix) -> Matrix {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dominant eigenpair `(λ, v)` of a nonnegative primitive matrix by power
/// iteration from the all-ones vector. `v` is positive with unit 1-norm.
pub fn dominant_eigenpair(m: &Matrix, tol: f64, max_iter: usize) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let mut w = mat_vec(m, &v);
        let norm: f64 = w.iter().sum();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NoConvergence(0));
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let change = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = w.iter().copied().fold(0.0, f64::max);
        v = w;
        if change <= tol * scale {
            let mv = mat_vec(m, &v);
            let lambda = mv.iter().sum::<f64>() / v.iter().sum::<f64>();
            return Ok((lambda, v));
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// Largest modulus among the eigenvalues of `P` other than the Perron root 1.
///
/// Power iteration on the deflated matrix `P − 1π`. Each step fits the
/// recurrence `A²w ≈ c₁ Aw + c₀ w` so that a dominant pair `±ρ` or a complex
/// pair is resolved as well as a single real eigenvalue.
pub fn subdominant_modulus(p: &Matrix, pi: &[f64], tol: f64, max_iter: usize) -> Result<f64> {
    let n = p.len();
    let apply = |x: &[f64]| -> Vec<f64> {
        let s = dot(pi, x);
        mat_vec(p, x).into_iter().map(|y| y - s).collect()
    };
    // deterministic start with no special alignment
    let mut w: Vec<f64> = (0..n).map(|i| 1.0 + ((i as f64 + 1.0) * 0.754_877_666).fract()).collect();
    let mut prev = f64::NAN;
    let mut stable = 0;
    for _ in 0..max_iter {
        let norm = dot(&w, &w).sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let a = apply(&w);
        let aa = dot(&a, &a);
        if aa.sqrt() <= 1e-300 {
            return Ok(0.0);
        }
        let b = apply(&a);
        let (ww, wa) = (1.0, dot(&w, &a));
        let det = ww * aa - wa * wa;
        let rho = if det <= 1e-12 * ww * aa {
            aa.sqrt()
        } else {
            let (wb, ab) = (dot(&w, &b), dot(&a, &b));
            let c0 = (wb * aa - ab * wa) / det;
            let c1 = (ww * ab - wa * wb) / det;
            let disc = c1 * c1 + 4.0 * c0;
            if disc >= 0.0 {
                let s = disc.sqrt();
                ((c1 + s) / 2.0).abs().max(((c1 - s) / 2.0).abs())
            } else {
                (-c0).sqrt()
            }
        };
        if (rho - prev).abs() <= tol * rho.max(1e-300) {
            stable += 1;
            if stable >= 3 {
                return Ok(rho);
            }
        } else {
            stable = 0;
        }
        prev = rho;
        w = a;
    }
    Err(Error::NoConvergence(max_iter))
}

/// Stationary vector of an aperiodic irreducible stochastic matrix, by power
/// iteration on `Pᵀ` from the uniform distribution.
pub fn stationary_of(p: &Matrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = p.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let mut w = vec_mat(&v, p);
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let change = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if change <= tol {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence(max_iter))
}

// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Dense complex linear algebra at desk scale.
//!
//! Everything here operates on `ndarray` containers of `Complex64`. The
//! Hermitian eigensolver is a cyclic Jacobi iteration: all matrices this
//! crate ever diagonalizes are small (system dimension, at most 16 x 16),
//! where Jacobi is simple, deterministic and accurate to machine precision.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn identity(dim: usize) -> CMat {
    Array2::from_diag_elem(dim, ONE)
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a.dot(b)
}

/// Kronecker product; the right factor varies fastest (acts on low qubits).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    ndarray::linalg::kron(a, b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// <a|b> with the left argument conjugated.
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    assert_eq!(a.len(), b.len(), "inner: length mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn normalized(v: &CVec) -> CVec {
    let n = vec_norm(v);
    v.mapv(|z| z / n)
}

/// || a - e^{i phi} b || minimized over the global phase phi.
pub fn phase_aligned_distance(a: &CVec, b: &CVec) -> f64 {
    let ov = inner(b, a);
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

const JACOBI_MAX_SWEEPS: usize = 64;

fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[[p, q]].norm_sqr();
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns. The input is checked for Hermiticity to 1e-10.
pub fn hermitian_eigen(a: &CMat) -> Result<(Array1<f64>, CMat)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::dims(format!("hermitian_eigen: {}x{}", n, a.ncols())));
    }
    if max_abs_diff(a, &dagger(a)) > 1e-10 {
        return Err(Error::invalid("hermitian_eigen: matrix is not Hermitian"));
    }
    let mut a = a.clone();
    let mut v = identity(n);
    let scale = max_abs(&a).max(1.0);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let abs = apq.norm();
                if abs <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / abs;
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                // Rotation angle zeroing the (p,q) entry: t^2 - 2 theta t - 1 = 0
                // for this J parametrization; the smaller root keeps |t| <= 1.
                let theta = (aqq - app) / (2.0 * abs);
                let t = -theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se_m = phase.conj() * s; // s e^{-i phi}
                let se_p = phase * s; // s e^{+i phi}
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * c + akq * se_m;
                    a[[k, q]] = akq * c - akp * se_p;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = apk * c + aqk * se_p;
                    a[[q, k]] = aqk * c - apk * se_m;
                }
                a[[p, q]] = ZERO;
                a[[q, p]] = ZERO;
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = vkp * c + vkq * se_m;
                    v[[k, q]] = vkq * c - vkp * se_p;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e-12 * scale {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.partial_cmp(&a[[j, j]].re).unwrap());
    let eigenvalues = Array1::from_iter(order.iter().map(|&i| a[[i, i]].re));
    let mut vectors = Array2::from_elem((n, n), ZERO);
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            vectors[[k, col]] = v[[k, i]];
        }
    }
    Ok((eigenvalues, vectors))
}

/// Real orthogonal matrix whose first column equals `target` (a unit
/// vector with nonnegative entries): the Householder reflection through
/// e0 - target, or the identity when target = e0.
pub fn real_unitary_with_first_column(target: &[f64]) -> CMat {
    let dim = target.len();
    let mut w: Vec<f64> = target.to_vec();
    w[0] -= 1.0;
    let wnorm2: f64 = w.iter().map(|x| x * x).sum();
    let mut m = identity(dim);
    if wnorm2 > 1e-30 {
        for r in 0..dim {
            for c in 0..dim {
                m[[r, c]] -= ONE * (2.0 * w[r] * w[c] / wnorm2);
            }
        }
    }
    m
}

/// (<g| (x) I) op (|g> (x) I) where |g> lives on the high qubits and the
/// identity factor has dimension `dim_low`.
pub fn bracket_high_register(op: &CMat, g: &CVec, dim_low: usize) -> CMat {
    assert_eq!(
        op.nrows(),
        g.len() * dim_low,
        "bracket_high_register: dimension mismatch"
    );
    let mut out = CMat::from_elem((dim_low, dim_low), ZERO);
    for i in 0..g.len() {
        if g[i] == ZERO {
            continue;
        }
        for j in 0..g.len() {
            if g[j] == ZERO {
                continue;
            }
            let w = g[i].conj() * g[j];
            for r in 0..dim_low {
                for c in 0..dim_low {
                    out[[r, c]] += w * op[[i * dim_low + r, j * dim_low + c]];
                }
            }
        }
    }
    out
}

/// V exp(scale * D) V^dag for Hermitian input; `scale = -tau` gives the
/// imaginary-time propagator e^{-tau H}.
pub fn expm_hermitian(h: &CMat, scale: f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(h)?;
    let n = h.nrows();
    let mut out = Array2::from_elem((n, n), ZERO);
    for k in 0..n {
        let w = (scale * vals[k]).exp();
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] += vecs[[i, k]] * w * vecs[[j, k]].conj();
            }
        }
    }
    Ok(out)
}

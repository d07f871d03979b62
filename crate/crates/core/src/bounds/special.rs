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

//! Modified Bessel functions of the first kind and the Lambert-W principal
//! branch, accurate to relative 1e-12 on the parameter ranges this crate
//! uses (n <= 64, x <= 64 for I_n; x in [-1/e, 1e6] for W_0).

use crate::error::{Error, Result};

/// Power series is accurate and fast up to here; beyond it the downward
/// recurrence avoids the series' cancellation-free but slow convergence.
const SERIES_CUTOFF: f64 = 20.0;

/// I_n(x) for n >= 0, x >= 0.
///
/// Power series sum_m (x/2)^(2m+n) / (m! (m+n)!) for x <= 20; Miller
/// downward recurrence normalized by I_0 + 2 sum I_k = e^x for larger x
/// (upward recurrence is unstable in n).
pub fn bessel_i(n: usize, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_i: negative argument {x}");
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_CUTOFF {
        bessel_i_series(n, x)
    } else {
        bessel_i_miller(n, x)
    }
}

fn bessel_i_series(n: usize, x: f64) -> f64 {
    let half = x / 2.0;
    // term_0 = (x/2)^n / n!, built incrementally to avoid overflow.
    let mut term = 1.0f64;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut m = 0usize;
    while term > sum * 1e-16 && term > 0.0 {
        m += 1;
        term *= half * half / (m as f64 * (m + n) as f64);
        sum += term;
    }
    sum
}

fn bessel_i_miller(n: usize, x: f64) -> f64 {
    // Start well above both the order and the turning point k ~ x.
    let start = (n.max(x.ceil() as usize) + 60) & !1;
    let mut f_up = 0.0f64; // f_{k+1}
    let mut f = 1.0f64; // f_k
    let mut target = 0.0f64;
    let mut norm = 0.0f64; // accumulates f_0 + 2 sum_{k>=1} f_k
    for k in (0..=start).rev() {
        let f_down = f_up + (2.0 * (k + 1) as f64 / x) * f;
        f_up = f;
        f = f_down;
        // After this step f = f_k (value at order k).
        if k == n {
            target = f;
        }
        norm += if k == 0 { f } else { 2.0 * f };
        if f > 1e250 {
            f /= 1e250;
            f_up /= 1e250;
            target /= 1e250;
            norm /= 1e250;
        }
    }
    target * x.exp() / norm
}

/// Largest-in-magnitude initial residual accepted as already converged;
/// keeps the branch point x = -1/e (where the derivative blows up) exact.
const LAMBERT_RESIDUAL_TARGET: f64 = 1e-14;
const LAMBERT_MAX_ITERS: usize = 100;

/// Principal branch W_0(x) for x >= -1/e: the solution of w e^w = x
/// with w >= -1. Halley iteration, relative residual below 1e-12.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -(-1.0f64).exp();
    if x < branch - 1e-15 {
        return Err(Error::invalid(format!(
            "lambert_w0: {x} below the branch point -1/e"
        )));
    }
    let x = x.max(branch);
    let mut w = if x >= 0.0 {
        x.ln_1p()
    } else {
        // Series about the branch point in p = sqrt(2(e x + 1)).
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    };
    for _ in 0..LAMBERT_MAX_ITERS {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Ok(w);
        }
        // Halley step; w > -1 on the principal branch keeps w + 1 != 0
        // except exactly at the branch point, where f is already 0.
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if !denom.is_finite() || denom == 0.0 {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= f64::EPSILON * w.abs().max(1e-12) {
            break;
        }
    }
    let residual = (w * w.exp() - x).abs();
    if residual <= LAMBERT_RESIDUAL_TARGET * x.abs().max(1.0) {
        Ok(w)
    } else {
        Err(Error::NoConvergence(LAMBERT_MAX_ITERS))
    }
}

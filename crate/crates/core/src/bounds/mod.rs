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

//! Closed-form error bounds and resource estimates for the truncated
//! imaginary-time pipeline.
//!
//! Everything here works in encoded units: energies are eigenvalues of
//! H / alpha and lie in [-1, 1], and tau is the evolution time in those
//! units. The central quantities are the ideal projection error
//! epsilon(tau), the truncation-tail bound 2 e^{tau/2} I_{N+1}(tau), the
//! crossover time tau_bar* where the two meet, and the resulting bound on
//! the best reachable ground-state distance.

mod special;

pub use special::{bessel_i, lambert_w0};

use crate::chebyshev::{truncated_propagator_matrix, ChebyshevExpansion};
use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, hermitian_eigen, inner, vec_norm, CMat, CVec, C64};

/// Eigenvalues closer than this are treated as one degenerate level.
const DEGENERACY_TOL: f64 = 1e-12;
/// Overlap amplitudes below this count as zero when locating the lowest
/// excited level visible to the initial state.
const OVERLAP_TOL: f64 = 1e-12;

/// Spectral inputs of the error bounds, extracted from a Hamiltonian and an
/// initial state.
#[derive(Debug, Clone, Copy)]
pub struct SpectralData {
    /// Ground energy of H / alpha, in [-1, 1].
    pub e_ground: f64,
    /// Lowest energy above ground whose eigenspace overlaps the state.
    pub e_exc: f64,
    /// Gap e_exc - e_ground.
    pub delta_e: f64,
    /// |<ground | psi>| (projection norm onto the ground level).
    pub psi_ground: f64,
    /// Projection norm onto the e_exc level.
    pub psi_exc: f64,
    /// Phase of the ground overlap; carried for completeness.
    pub theta_ground: f64,
}

impl SpectralData {
    pub fn new(
        e_ground: f64,
        e_exc: f64,
        psi_ground: f64,
        psi_exc: f64,
        theta_ground: f64,
    ) -> Result<Self> {
        let delta_e = e_exc - e_ground;
        if !(delta_e > 0.0) {
            return Err(Error::invalid(format!(
                "excited energy {e_exc} does not exceed ground energy {e_ground}"
            )));
        }
        if !(psi_ground > 0.0) {
            return Err(Error::invalid("state has no ground-level component"));
        }
        if psi_ground * psi_ground + psi_exc * psi_exc > 1.0 + 1e-12 {
            return Err(Error::invalid("overlaps exceed unit norm"));
        }
        Ok(Self { e_ground, e_exc, delta_e, psi_ground, psi_exc, theta_ground })
    }

    /// Extracts the spectral inputs by exact diagonalization. Degenerate
    /// levels are clustered to 1e-12 and overlaps below 1e-12 are invisible.
    pub fn from_state(h_over_alpha: &CMat, psi: &CVec) -> Result<Self> {
        let (w, v) = hermitian_eigen(h_over_alpha)?;
        let dim = w.len();
        if psi.len() != dim {
            return Err(Error::dims(format!(
                "state length {} vs Hamiltonian dimension {dim}",
                psi.len()
            )));
        }
        if (vec_norm(psi) - 1.0).abs() > 1e-10 {
            return Err(Error::invalid("initial state is not normalized"));
        }
        let overlaps: Vec<C64> =
            (0..dim).map(|k| inner(&v.column(k).to_owned(), psi)).collect();
        let e_ground = w[0];
        let mut pg2 = 0.0;
        let mut theta_ground = 0.0;
        let mut k = 0;
        while k < dim && w[k] - e_ground <= DEGENERACY_TOL {
            if pg2 == 0.0 {
                theta_ground = overlaps[k].arg();
            }
            pg2 += overlaps[k].norm_sqr();
            k += 1;
        }
        while k < dim {
            let e = w[k];
            let mut p2 = 0.0;
            while k < dim && w[k] - e <= DEGENERACY_TOL {
                p2 += overlaps[k].norm_sqr();
                k += 1;
            }
            if p2.sqrt() > OVERLAP_TOL {
                return Self::new(e_ground, e, pg2.sqrt(), p2.sqrt(), theta_ground);
            }
        }
        Err(Error::invalid(
            "state has no excited component with nontrivial overlap",
        ))
    }
}

/// Ideal projection error epsilon(tau) = (psi_exc^2 / psi_ground^2)
/// e^{-2 tau delta_e} / 2: the distance floor the exact propagator reaches.
pub fn ideal_epsilon(sd: &SpectralData, tau: f64) -> f64 {
    0.5 * (sd.psi_exc / sd.psi_ground).powi(2) * (-2.0 * tau * sd.delta_e).exp()
}

/// Upper bound 2 e^{tau/2} I_{N+1}(tau) on the 2-norm of the truncation
/// remainder e^{-tau H/alpha} - sum_{n<=N} c_n T_n(-H/alpha).
pub fn truncation_bound(tau: f64, order: usize) -> f64 {
    2.0 * (tau / 2.0).exp() * bessel_i(order + 1, tau)
}

/// Exact 2-norm of the truncation remainder, evaluated spectrally.
///
/// Sums the tail sum_{n>N} c_n T_n(-lambda) per eigenvalue. Direct matrix
/// subtraction bottoms out near 1e-16 in f64 while this tail reaches 1e-25
/// and below, so the bound-domination checks must use this path.
pub fn remainder_norm_spectral(eigenvalues: &[f64], exp: &ChebyshevExpansion) -> f64 {
    // Tail coefficients c_n = 2 I_n(tau) for n > N, until they vanish.
    let mut tail_coeffs = Vec::new();
    let mut n = exp.order + 1;
    loop {
        let c = 2.0 * bessel_i(n, exp.tau);
        tail_coeffs.push(c);
        if c < 1e-300 || n > exp.order + 600 {
            break;
        }
        n += 1;
    }
    let mut worst = 0.0f64;
    for &lambda in eigenvalues {
        let x = -lambda;
        // Advance the recurrence so t_cur = T_N(x); T_{-1} = T_1 = x.
        let (mut t_prev, mut t_cur) = if exp.order == 0 { (x, 1.0) } else { (1.0, x) };
        for _ in 2..=exp.order {
            let t_next = 2.0 * x * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
        }
        let mut tail = 0.0f64;
        for &c in &tail_coeffs {
            let t_next = 2.0 * x * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
            tail += c * t_cur;
        }
        worst = worst.max(tail.abs());
    }
    worst
}

/// Threshold below which e_exc + 1/2 is treated as exactly zero and the
/// crossover time is evaluated by its analytic limit.
const REGULAR_LIMIT_TOL: f64 = 1e-9;

/// Crossover time tau_bar*: the tau where the truncation remainder term
/// overtakes the shrinking ideal error, in closed form through W_0.
///
/// tau_bar* = (N+1)/(E_exc + 1/2) W_0(2 e^{-1} (E_exc + 1/2) B) with
/// B = (psi_exc / 4 sqrt(2 pi (N+1)))^{1/(N+1)}; the limit at
/// E_exc + 1/2 -> 0 is (N+1) (2/e) B, which W_0's linearization at 0 gives.
pub fn tau_bar_star(sd: &SpectralData, order: usize) -> Result<f64> {
    let n = (order + 1) as f64;
    let x = sd.e_exc + 0.5;
    let b = (sd.psi_exc / 4.0 * (2.0 * std::f64::consts::PI * n).sqrt()).powf(1.0 / n);
    if x.abs() < REGULAR_LIMIT_TOL {
        Ok(n * (2.0 / std::f64::consts::E) * b)
    } else {
        let w = lambert_w0(2.0 / std::f64::consts::E * x * b)?;
        Ok(n / x * w)
    }
}

/// Bound on the best reachable distance: 4 epsilon(tau_bar*).
pub fn min_distance_bound(sd: &SpectralData, order: usize) -> Result<f64> {
    Ok(4.0 * ideal_epsilon(sd, tau_bar_star(sd, order)?))
}

/// Large-N exponential form of the minimal-distance bound:
/// 2 (psi_exc/psi_ground)^2 exp(-2 s delta_e N) with the crossover slope
/// s = W_0(2 e^{-1}(E_exc + 1/2)) / (E_exc + 1/2), or 2/e in the limit.
pub fn min_distance_bound_asymptotic(sd: &SpectralData, order: usize) -> Result<f64> {
    let x = sd.e_exc + 0.5;
    let slope = if x.abs() < REGULAR_LIMIT_TOL {
        2.0 / std::f64::consts::E
    } else {
        lambert_w0(2.0 / std::f64::consts::E * x)? / x
    };
    let prefactor = 2.0 * (sd.psi_exc / sd.psi_ground).powi(2);
    Ok(prefactor * (-2.0 * slope * sd.delta_e * order as f64).exp())
}

/// Truncation order needed for remainder eps at time tau:
/// N = ceil(r / W_0(r / tau)) with r = tau/2 + ln(1/eps).
///
/// The derivation drops additive constants, so this is validated against
/// `truncation_bound` rather than exact; it can undershoot by a step at
/// extreme (tau, eps) corners.
pub fn truncation_order_for_error(tau: f64, eps: f64) -> Result<usize> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("tau must be positive, got {tau}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must be in (0, 1), got {eps}")));
    }
    let r = tau / 2.0 + (1.0 / eps).ln();
    let w = lambert_w0(r / tau)?;
    Ok((r / w).ceil() as usize)
}

/// Query and register tallies of the truncated pipeline at order N for an
/// L-term Hamiltonian on a d-dimensional system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceCounts {
    /// Applications of the encoding unitary: N(N+1).
    pub select_queries: usize,
    /// Applications of the flag preparation: N(N+1) + 1.
    pub prepare_queries: usize,
    /// Expansion register width ceil(log2(N+1)).
    pub expansion_qubits: usize,
    /// System register width ceil(log2 d).
    pub system_qubits: usize,
    /// Encoding ancilla width ceil(log2 L).
    pub encoding_qubits: usize,
    /// Sum of the three registers (one more if the walk needs the extra
    /// direction qubit).
    pub total_qubits: usize,
    /// N^2 L log2(L) + N log2(N): an asymptotic order for the Toffoli cost
    /// of a compiled select, not a gate count. Never asserted numerically.
    pub toffoli_order: f64,
}

fn ceil_log2(k: usize) -> usize {
    crate::encoding::ancilla_count(k)
}

/// Evaluates the closed-form query and qubit counts.
pub fn resource_counts(order: usize, terms: usize, dim: usize) -> Result<ResourceCounts> {
    if order < 1 || terms < 1 || dim < 1 {
        return Err(Error::invalid("resource_counts needs N, L, d >= 1"));
    }
    let n = order;
    let nf = n as f64;
    let lf = terms as f64;
    let expansion_qubits = ceil_log2(n + 1);
    let system_qubits = ceil_log2(dim);
    let encoding_qubits = ceil_log2(terms);
    Ok(ResourceCounts {
        select_queries: n * (n + 1),
        prepare_queries: n * (n + 1) + 1,
        expansion_qubits,
        system_qubits,
        encoding_qubits,
        total_qubits: expansion_qubits + system_qubits + encoding_qubits,
        toffoli_order: nf * nf * lf * lf.log2().max(0.0) + nf * nf.log2().max(0.0),
    })
}

/// The two leading contributions to the ground-state distance at (tau, N).
#[derive(Debug, Clone, Copy)]
pub struct DecompositionReport {
    pub tau: f64,
    /// 2 epsilon(tau): the ideal-propagator contribution.
    pub ideal_term: f64,
    /// 2 sqrt(2 eps) Re<chi| R |psi> / |e^{-tau H} psi|: the truncation
    /// cross term; the modeled distance is ideal_term - remainder_term.
    pub remainder_term: f64,
    /// <chi| R |psi> with chi the evolved component orthogonal to ground.
    pub chi_overlap: C64,
    /// 1 - |<ground | truncated psi>|^2, the exactly computed distance.
    pub exact_distance: f64,
}

/// Splits the exact distance into the ideal and truncation cross terms.
///
/// The split drops O(eps^{3/2}) and O(R^2), so it is quantitative only
/// where both epsilon and the remainder are small.
pub fn distance_decomposition(
    h_over_alpha: &CMat,
    psi: &CVec,
    sd: &SpectralData,
    tau: f64,
    order: usize,
) -> Result<DecompositionReport> {
    let exp = crate::chebyshev::expansion(tau, order)?;
    let exact_prop = expm_hermitian(h_over_alpha, -tau)?;
    let truncated = truncated_propagator_matrix(h_over_alpha, &exp);
    let remainder = &exact_prop - &truncated;

    let (_, v) = hermitian_eigen(h_over_alpha)?;
    let ground = v.column(0).to_owned();

    let evolved = exact_prop.dot(psi);
    let evolved_norm = vec_norm(&evolved);
    let unit = evolved.mapv(|z| z / evolved_norm);
    let g_comp = inner(&ground, &unit);
    let mut chi = unit.clone();
    for i in 0..chi.len() {
        chi[i] -= g_comp * ground[i];
    }
    let chi_norm = vec_norm(&chi);
    let eps = ideal_epsilon(sd, tau);
    let (chi_overlap, remainder_term) = if chi_norm < 1e-15 {
        (C64::new(0.0, 0.0), 0.0)
    } else {
        let chi = chi.mapv(|z| z / chi_norm);
        let overlap = inner(&chi, &remainder.dot(psi));
        (overlap, 2.0 * (2.0 * eps).sqrt() * overlap.re / evolved_norm)
    };

    let projected = truncated.dot(psi);
    let projected = projected.mapv(|z| z / vec_norm(&projected));
    let exact_distance = 1.0 - inner(&ground, &projected).norm_sqr();

    Ok(DecompositionReport {
        tau,
        ideal_term: 2.0 * eps,
        remainder_term,
        chi_overlap,
        exact_distance,
    })
}

/// 1 minus the squared projection of `state` onto the ground level of
/// `h_over_alpha` (summed over a degenerate ground space).
pub fn ground_distance(h_over_alpha: &CMat, state: &CVec) -> Result<f64> {
    let (w, v) = hermitian_eigen(h_over_alpha)?;
    let mut p2 = 0.0;
    for k in 0..w.len() {
        if w[k] - w[0] > DEGENERACY_TOL {
            break;
        }
        p2 += inner(&v.column(k).to_owned(), state).norm_sqr();
    }
    Ok(1.0 - p2)
}

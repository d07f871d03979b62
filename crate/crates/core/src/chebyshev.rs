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

//! Truncated Chebyshev expansion of the imaginary-time propagator and its
//! unitary realization.
//!
//! e^{-tau H/alpha} = I_0(tau) I + 2 sum_{n>=1} I_n(tau) T_n(-H/alpha), with
//! I_n the modified Bessel functions. Truncating at order N and encoding
//! each T_n(-H/alpha) as the flag-state matrix element of (-W)^n gives a
//! unitary circuit: prepare a coefficient state on an expansion register,
//! apply the power indexed by that register, uncompute the preparations,
//! and post-select both ancilla registers on zero.

use crate::bounds::bessel_i;
use crate::encoding::{ancilla_count, BlockEncoding};
use crate::error::{Error, Result};
use crate::linalg::{
    identity, matmul, real_unitary_with_first_column, CMat, CVec, C64, ZERO,
};
use crate::qubitize::{qubitize_general, qubitize_self_inverse, Construction, Iterate};
use crate::sim::{controlled, gates, tensor, DenseOperator, RegisterLayout, StateVector};

/// Coefficients c_0 = I_0(tau), c_n = 2 I_n(tau) of the truncated expansion.
#[derive(Debug, Clone)]
pub struct ChebyshevExpansion {
    pub tau: f64,
    /// Truncation order N; the expansion keeps T_0 through T_N.
    pub order: usize,
    /// c_0..c_N, all strictly positive for tau > 0.
    pub coeffs: Vec<f64>,
    /// l1 = sum of the coefficients; tends to e^tau as N grows.
    pub l1: f64,
}

/// Builds the expansion coefficients for Euclidean time tau at order N.
pub fn expansion(tau: f64, order: usize) -> Result<ChebyshevExpansion> {
    if !(tau >= 0.0) {
        return Err(Error::invalid(format!("tau must be nonnegative, got {tau}")));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(bessel_i(0, tau));
    for n in 1..=order {
        coeffs.push(2.0 * bessel_i(n, tau));
    }
    let l1 = coeffs.iter().sum();
    Ok(ChebyshevExpansion { tau, order, coeffs, l1 })
}

impl ChebyshevExpansion {
    /// Expansion-register width: smallest n with 2^n >= N + 1.
    pub fn n_abar(&self) -> usize {
        ancilla_count(self.order + 1)
    }

    /// Normalized coefficient-state amplitudes sqrt(c_n / l1), padded with
    /// exact zeros up to the register dimension.
    pub fn gbar_amplitudes(&self) -> CVec {
        let dim = 1usize << self.n_abar();
        let mut amps = CVec::from_elem(dim, ZERO);
        for (n, &c) in self.coeffs.iter().enumerate() {
            amps[n] = C64::new((c / self.l1).sqrt(), 0.0);
        }
        amps
    }
}

fn gbar_layout(exp: &ChebyshevExpansion) -> Result<RegisterLayout> {
    RegisterLayout::new(&[("abar", exp.n_abar())])
}

/// The coefficient state on the expansion register.
pub fn prepare_gbar(exp: &ChebyshevExpansion) -> Result<StateVector> {
    StateVector::from_amplitudes(gbar_layout(exp)?, exp.gbar_amplitudes())
}

/// A unitary preparing the coefficient state from |0...0>.
pub fn gbar_prepare_unitary(exp: &ChebyshevExpansion) -> DenseOperator {
    let target: Vec<f64> = exp
        .gbar_amplitudes()
        .iter()
        .map(|z| z.re)
        .collect();
    DenseOperator::from_matrix(real_unitary_with_first_column(&target))
        .expect("Householder completion is unitary")
}

/// The expansion-register-indexed power operator
/// sum_{n<=N} |n><n| (x) (-walk)^n plus identity padding.
#[derive(Debug, Clone)]
pub struct MasterOperator {
    pub n_abar: usize,
    /// Unitary on expansion register (x) walk space, expansion on top.
    pub matrix: DenseOperator,
    /// Coefficient state on the expansion register.
    pub gbar: StateVector,
}

/// Queries to the encoding unitaries consumed by an instrumented build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryCounts {
    pub select: usize,
    pub prepare: usize,
}

fn assemble_master(blocks: &[CMat], dw: usize, n_abar: usize) -> CMat {
    let d_abar = 1usize << n_abar;
    let mut m = CMat::from_elem((d_abar * dw, d_abar * dw), ZERO);
    for (n, block) in blocks.iter().enumerate() {
        for r in 0..dw {
            for c in 0..dw {
                m[[n * dw + r, n * dw + c]] = block[[r, c]];
            }
        }
    }
    debug_assert_eq!(blocks.len(), d_abar);
    m
}

/// Builds the power operator for a walk; powers by repeated multiplication.
pub fn build_master(it: &Iterate, exp: &ChebyshevExpansion) -> Result<MasterOperator> {
    let n_abar = exp.n_abar();
    let dw = it.walk.dim();
    let d_abar = 1usize << n_abar;
    let neg_walk = it.walk.negated();
    let mut blocks = Vec::with_capacity(d_abar);
    let mut cur = identity(dw);
    for n in 0..d_abar {
        if n > 0 && n <= exp.order {
            cur = matmul(neg_walk.matrix(), &cur);
        }
        blocks.push(if n <= exp.order { cur.clone() } else { identity(dw) });
    }
    let matrix = DenseOperator::from_matrix(assemble_master(&blocks, dw, n_abar))?;
    Ok(MasterOperator { n_abar, matrix, gbar: prepare_gbar(exp)? })
}

/// Instrumented rebuild of the power operator from circuit pieces, counting
/// every select and prepare invocation.
///
/// Uses the one-extra-qubit walk construction with each power built
/// independently: block n costs n walk applications at two select and two
/// prepare queries each, and the final count adds one prepare for the flag
/// state initialization of the full circuit. The assembled matrix must agree
/// with [`build_master`] on the same walk.
pub fn build_master_audited(
    be: &BlockEncoding,
    exp: &ChebyshevExpansion,
) -> Result<(MasterOperator, QueryCounts)> {
    let n_s = be.n_s;
    let on_one = controlled(&be.select.dagger(), 1, "1")?;
    let on_zero = controlled(&be.select, 1, "0")?;
    let prep_ext = tensor(&[gates::h(), be.prepare.clone(), DenseOperator::identity(n_s)]);
    let prep_ext_dag = prep_ext.dagger();
    let n_a_eff = be.n_a + 1;
    let mut refl0 = identity(1usize << n_a_eff);
    for k in 1..refl0.nrows() {
        refl0[[k, k]] = -refl0[[k, k]];
    }
    let refl0 = tensor(&[
        DenseOperator::from_matrix(refl0)?,
        DenseOperator::identity(n_s),
    ]);
    let x_top = tensor(&[gates::x(), DenseOperator::identity(be.n_a + n_s)]);

    let mut counts = QueryCounts { select: 0, prepare: 0 };
    let dw = 1usize << (n_a_eff + n_s);
    let apply_neg_walk = |m: &CMat, counts: &mut QueryCounts| -> CMat {
        let mut out = matmul(on_one.matrix(), m);
        counts.select += 1;
        out = matmul(on_zero.matrix(), &out);
        counts.select += 1;
        out = matmul(x_top.matrix(), &out);
        out = matmul(prep_ext_dag.matrix(), &out);
        counts.prepare += 1;
        out = matmul(refl0.matrix(), &out);
        out = matmul(prep_ext.matrix(), &out);
        counts.prepare += 1;
        out.mapv(|z| -z)
    };

    let n_abar = exp.n_abar();
    let d_abar = 1usize << n_abar;
    let mut blocks = Vec::with_capacity(d_abar);
    for n in 0..d_abar {
        let mut block = identity(dw);
        if n <= exp.order {
            for _ in 0..n {
                block = apply_neg_walk(&block, &mut counts);
            }
        }
        blocks.push(block);
    }
    counts.prepare += 1;
    let matrix = DenseOperator::from_matrix(assemble_master(&blocks, dw, n_abar))?;
    Ok((MasterOperator { n_abar, matrix, gbar: prepare_gbar(exp)? }, counts))
}

/// sum_n c_n T_n(-H/alpha) by the matrix three-term recurrence: the exact
/// classical value of the truncated propagator, used as the oracle for the
/// quantum pipeline.
pub fn truncated_propagator_matrix(h_over_alpha: &CMat, exp: &ChebyshevExpansion) -> CMat {
    let dim = h_over_alpha.nrows();
    let minus_h = h_over_alpha.mapv(|z| -z);
    let mut t_prev = identity(dim);
    let mut out = t_prev.mapv(|z| z * exp.coeffs[0]);
    if exp.order == 0 {
        return out;
    }
    let mut t_cur = minus_h.clone();
    out = out + t_cur.mapv(|z| z * exp.coeffs[1]);
    for n in 2..=exp.order {
        let t_next = matmul(&minus_h, &t_cur).mapv(|z| z * 2.0) - &t_prev;
        t_prev = t_cur;
        t_cur = t_next;
        out = out + t_cur.mapv(|z| z * exp.coeffs[n]);
    }
    out
}

/// Outcome of one exact pipeline run.
#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    /// Normalized post-selected system state.
    pub state: StateVector,
    /// Probability that both ancilla registers read zero.
    pub success_prob: f64,
}

/// Runs the full unitary pipeline: prepare flag and coefficient states,
/// apply the power operator, uncompute both preparations, post-select both
/// ancilla registers on zero.
///
/// The post-selected state equals the renormalized classical truncation and
/// the success probability is (|truncated psi| / l1)^2.
pub fn evolve(
    be: &BlockEncoding,
    construction: Construction,
    psi: &CVec,
    tau: f64,
    order: usize,
) -> Result<EvolveOutcome> {
    let exp = expansion(tau, order)?;
    let it = match construction {
        Construction::SelfInverse => qubitize_self_inverse(be)?,
        Construction::General => qubitize_general(be)?,
    };
    let master = build_master(&it, &exp)?;
    let layout = RegisterLayout::new(&[
        ("s", be.n_s),
        ("a", it.n_a_eff),
        ("abar", master.n_abar),
    ])?;
    let mut state = StateVector::product(
        layout,
        &[psi.clone(), it.g_amplitudes().clone(), master.gbar.amplitudes().clone()],
    )?;
    let all: Vec<usize> = (0..state.layout().total_qubits()).collect();
    state.apply(&master.matrix, &all)?;
    state.apply_to_register(&gbar_prepare_unitary(&exp).dagger(), "abar")?;
    let flag_prep = match construction {
        Construction::SelfInverse => be.prepare.clone(),
        Construction::General => tensor(&[gates::h(), be.prepare.clone()]),
    };
    state.apply_to_register(&flag_prep.dagger(), "a")?;
    let (state, _) = state.project("abar", 0)?;
    let (state, success_prob) = state.project("a", 0)?;
    Ok(EvolveOutcome { state: state.renormalized(), success_prob })
}

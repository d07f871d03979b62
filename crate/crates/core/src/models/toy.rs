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

//! Single-qubit model H = X, encoded by projecting a CX gate on |1> of its
//! control. Small enough that the entire order-2 pipeline, including the
//! final measurement gadget, fits in five qubits and can be run as a gate
//! list under a noise model.
//!
//! Register layout (low to high): system s, encoding ancilla a, expansion
//! register abar (2 qubits), gadget scratch qubit.

use rand::Rng;

use crate::chebyshev::{expansion, gbar_prepare_unitary};
use crate::encoding::BlockEncoding;
use crate::error::{Error, Result};
use crate::qubitize::{qubitize_self_inverse, Iterate};
use crate::sim::{
    controlled, gates, GateOp, NoiseModel, RegisterLayout, StateVector,
    POST_SELECTION_MIN_PROB,
};

/// Expansion order of the five-qubit circuit; fixed so the expansion
/// register is exactly two qubits with one unused index.
pub const TOY_EXPANSION_ORDER: usize = 2;

/// system + a + abar + scratch.
pub const TOY_QUBITS: usize = 5;

/// <1|_a CX |1>_a = X with alpha = 1: the flag state is |1>, prepared by X.
pub fn toy_block_encoding() -> Result<BlockEncoding> {
    BlockEncoding::new(1, gates::cx(), gates::x(), 1.0)
}

/// The walk operator -(Z (x) I) CX: reflection about |1>_a times select.
pub fn toy_iterate() -> Result<Iterate> {
    qubitize_self_inverse(&toy_block_encoding()?)
}

pub fn toy_layout() -> RegisterLayout {
    RegisterLayout::new(&[("s", 1), ("a", 1), ("abar", 2), ("scratch", 1)])
        .expect("static register table")
}

/// The five-qubit gate list: flag and coefficient preparation, one
/// abar-controlled (-W)^n block per order, both preparations uncomputed,
/// then the gadget H·CX·H channeling the system's X eigenvalue into the
/// scratch qubit.
pub fn toy_circuit(tau: f64) -> Result<Vec<GateOp>> {
    let exp = expansion(tau, TOY_EXPANSION_ORDER)?;
    let coeff_prep = gbar_prepare_unitary(&exp);
    let minus_walk = toy_iterate()?.walk.negated();
    let mut circuit = vec![
        GateOp::new(gates::x(), vec![1]),
        GateOp::new(coeff_prep.clone(), vec![2, 3]),
    ];
    for n in 1..=TOY_EXPANSION_ORDER {
        let pattern = format!("{n:02b}");
        let block = controlled(&minus_walk.pow(n), 2, &pattern)?;
        circuit.push(GateOp::new(block, vec![0, 1, 2, 3]));
    }
    circuit.push(GateOp::new(gates::x(), vec![1]));
    circuit.push(GateOp::new(coeff_prep.dagger(), vec![2, 3]));
    circuit.push(GateOp::new(gates::h(), vec![4]));
    // scratch-controlled X on the system: CX's control is its high qubit
    circuit.push(GateOp::new(gates::cx(), vec![0, 4]));
    circuit.push(GateOp::new(gates::h(), vec![4]));
    Ok(circuit)
}

/// Distance estimates from the five-qubit circuit.
#[derive(Debug, Clone, Copy)]
pub struct ToyDistance {
    /// Conditional probability P[0000] / (P[0000] + P[0001]) over
    /// (a, abar, scratch) on the noiseless state; equals the ground-state
    /// distance of the post-selected system state.
    pub exact: f64,
    /// Same ratio estimated from accepted shots; absent when shots = 0.
    pub sampled: Option<f64>,
    /// P[0000] + P[0001] on the noiseless state: the probability that all
    /// flag qubits return to zero and a shot is kept.
    pub acceptance: f64,
}

const OUTCOME_KEEP: &str = "0000";
const OUTCOME_REJECT: &str = "0001";
/// Attempt budget per accepted shot before concluding the acceptance
/// probability is effectively zero.
const MAX_ATTEMPTS_PER_SHOT: usize = 10_000;

fn two_outcome_probs(state: &StateVector) -> Result<(f64, f64)> {
    let dist = state.outcome_distribution(&["a", "abar", "scratch"])?;
    let mut keep = 0.0;
    let mut reject = 0.0;
    for (key, p) in dist {
        if key == OUTCOME_KEEP {
            keep = p;
        } else if key == OUTCOME_REJECT {
            reject = p;
        }
    }
    Ok((keep, reject))
}

/// Runs the circuit and reads the distance off the two retained outcomes.
///
/// The exact value always comes from the noiseless state. Sampling rejects
/// all other outcomes, rerunning the circuit until `shots` accepted events;
/// each attempt uses a fresh trajectory when gate noise is set, and read-out
/// flips apply to the measured bits.
pub fn toy_distance_probability(
    tau: f64,
    shots: usize,
    noise: Option<&NoiseModel>,
    rng: &mut impl Rng,
) -> Result<ToyDistance> {
    if !(tau >= 0.0) {
        return Err(Error::invalid(format!("tau must be nonnegative, got {tau}")));
    }
    let circuit = toy_circuit(tau)?;
    let layout = toy_layout();
    let mut clean = StateVector::zero(layout.clone());
    for gate in &circuit {
        clean.apply(&gate.op, &gate.targets)?;
    }
    let (keep, reject) = two_outcome_probs(&clean)?;
    if keep + reject < POST_SELECTION_MIN_PROB {
        return Err(Error::ZeroAcceptance);
    }
    let exact = keep / (keep + reject);
    let acceptance = keep + reject;
    if shots == 0 {
        return Ok(ToyDistance { exact, sampled: None, acceptance });
    }

    let gate_noise = noise.map_or(false, |n| n.p1 > 0.0 || n.p2 > 0.0);
    let mut accepted = 0usize;
    let mut kept = 0usize;
    let mut attempts = 0usize;
    while accepted < shots {
        attempts += 1;
        if attempts > MAX_ATTEMPTS_PER_SHOT * shots {
            return Err(Error::ZeroAcceptance);
        }
        let state = if gate_noise {
            crate::sim::run_noisy_trajectory(&circuit, &layout, noise.unwrap(), rng)?
        } else {
            clean.clone()
        };
        let histogram = state.sample(&["a", "abar", "scratch"], 1, noise, rng.gen())?;
        let (outcome, _) = histogram.into_iter().next().expect("one shot drawn");
        if outcome == OUTCOME_KEEP {
            accepted += 1;
            kept += 1;
        } else if outcome == OUTCOME_REJECT {
            accepted += 1;
        }
    }
    Ok(ToyDistance {
        exact,
        sampled: Some(kept as f64 / shots as f64),
        acceptance,
    })
}

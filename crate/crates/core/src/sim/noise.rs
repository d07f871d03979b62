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

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::{gates, DenseOperator, RegisterLayout, StateVector};

/// Parametric depolarizing plus read-out error model.
///
/// After every gate a Pauli fault is injected with probability `p1` (single
/// qubit gates, uniform over X, Y, Z) or `p2` (gates on two or more qubits,
/// uniform over the non-identity Pauli words on the gate's qubits). `p_ro`
/// flips each measured bit independently at read-out time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_ro: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_ro: f64, seed: u64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2), ("p_ro", p_ro)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!(
                    "noise probability {name}={p} outside [0, 1]"
                )));
            }
        }
        Ok(NoiseModel { p1, p2, p_ro, seed })
    }

    pub fn noiseless(seed: u64) -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_ro: 0.0,
            seed,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_ro == 0.0
    }
}

/// One circuit element: an operator and the qubits it acts on.
#[derive(Debug, Clone)]
pub struct GateOp {
    pub op: DenseOperator,
    pub targets: Vec<usize>,
}

impl GateOp {
    pub fn new(op: DenseOperator, targets: Vec<usize>) -> Self {
        GateOp { op, targets }
    }
}

fn pauli_by_index(i: usize) -> DenseOperator {
    match i {
        0 => gates::i(),
        1 => gates::x(),
        2 => gates::y(),
        _ => gates::z(),
    }
}

/// Run a circuit once, injecting Pauli faults after each gate.
///
/// With `p1 = p2 = 0` the result is bit-for-bit identical to noiseless
/// application (no random draws are consumed). Read-out error is not applied
/// here; it belongs to sampling.
pub fn run_noisy_trajectory(
    circuit: &[GateOp],
    layout: &RegisterLayout,
    noise: &NoiseModel,
    rng: &mut impl Rng,
) -> Result<StateVector> {
    let mut state = StateVector::zero(layout.clone());
    for gate in circuit {
        state.apply(&gate.op, &gate.targets)?;
        let k = gate.targets.len();
        if k == 1 && noise.p1 > 0.0 {
            if rng.gen::<f64>() < noise.p1 {
                let fault = pauli_by_index(1 + rng.gen_range(0..3usize));
                state.apply(&fault, &gate.targets)?;
            }
        } else if k >= 2 && noise.p2 > 0.0 && rng.gen::<f64>() < noise.p2 {
            // uniform over the 4^k - 1 non-identity Pauli words
            let word = rng.gen_range(1..(1usize << (2 * k)));
            for (j, &q) in gate.targets.iter().enumerate() {
                let p = (word >> (2 * j)) & 3;
                if p != 0 {
                    state.apply(&pauli_by_index(p), &[q])?;
                }
            }
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell_circuit() -> (Vec<GateOp>, RegisterLayout) {
        let layout = RegisterLayout::new(&[("s", 2)]).unwrap();
        let circuit = vec![
            GateOp::new(gates::h(), vec![0]),
            GateOp::new(gates::cx(), vec![1, 0]),
        ];
        (circuit, layout)
    }

    #[test]
    fn zero_noise_trajectory_is_bit_exact() {
        let (circuit, layout) = bell_circuit();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let noisy = run_noisy_trajectory(&circuit, &layout, &NoiseModel::noiseless(0), &mut rng)
            .unwrap();
        let mut reference = StateVector::zero(layout);
        for g in &circuit {
            reference.apply(&g.op, &g.targets).unwrap();
        }
        for i in 0..4 {
            assert_eq!(noisy.amplitudes()[i], reference.amplitudes()[i]);
        }
    }

    #[test]
    fn certain_single_qubit_fault_distributes_uniformly() {
        // p1 = 1: a Pauli is always injected after the single H gate; the
        // three outcomes H|0> -> X/Y/Z H|0> are distinguishable.
        let layout = RegisterLayout::new(&[("s", 1)]).unwrap();
        let circuit = vec![GateOp::new(gates::h(), vec![0])];
        let noise = NoiseModel::new(1.0, 0.0, 0.0, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 300_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..trials {
            let st = run_noisy_trajectory(&circuit, &layout, &noise, &mut rng).unwrap();
            let a0 = st.amplitudes()[0];
            let a1 = st.amplitudes()[1];
            // X H|0> = +|+>, Z H|0> = |->, Y H|0> = i|->-like: identify by
            // relative sign / phase of the two amplitudes.
            let which = if (a0 - a1).norm() < 1e-12 {
                0 // X fault: amplitudes equal
            } else if a0.im.abs() > 1e-12 {
                1 // Y fault: imaginary amplitudes
            } else {
                2 // Z fault: real, opposite signs
            };
            counts[which] += 1;
        }
        for &c in &counts {
            let f = c as f64 / trials as f64;
            assert!(
                (f - 1.0 / 3.0).abs() < 0.005,
                "fault frequency {f} departs from 1/3"
            );
        }
    }

    #[test]
    fn two_qubit_fault_rate_matches_p2() {
        let (circuit, layout) = bell_circuit();
        let noise = NoiseModel::new(0.0, 0.3, 0.0, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let trials = 100_000usize;
        let mut faulted = 0usize;
        let mut clean_reference = StateVector::zero(layout.clone());
        for g in &circuit {
            clean_reference.apply(&g.op, &g.targets).unwrap();
        }
        for _ in 0..trials {
            let st = run_noisy_trajectory(&circuit, &layout, &noise, &mut rng).unwrap();
            let mut same = true;
            for i in 0..4 {
                if (st.amplitudes()[i] - clean_reference.amplitudes()[i]).norm() > 1e-12 {
                    same = false;
                    break;
                }
            }
            if !same {
                faulted += 1;
            }
        }
        // XX and ZZ stabilize the Bell state exactly (eigenvalue +1), so 13
        // of the 15 injected words are visible in the amplitudes.
        let expected = 0.3 * 13.0 / 15.0;
        let f = faulted as f64 / trials as f64;
        assert!(
            (f - expected).abs() < 0.01,
            "visible fault rate {f} departs from {expected}"
        );
    }

    #[test]
    fn invalid_probability_is_rejected() {
        assert!(NoiseModel::new(1.5, 0.0, 0.0, 0).is_err());
        assert!(NoiseModel::new(0.0, -0.1, 0.0, 0).is_err());
    }
}

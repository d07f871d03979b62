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

use std::collections::BTreeMap;

use ndarray::Array1;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64, ONE, ZERO};

use super::{DenseOperator, NoiseModel, RegisterLayout, POST_SELECTION_MIN_PROB};

/// Dense statevector over a register layout.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: CVec,
    layout: RegisterLayout,
    normalized: bool,
}

impl StateVector {
    /// |0...0>.
    pub fn zero(layout: RegisterLayout) -> Self {
        let mut amplitudes = Array1::from_elem(layout.dim(), ZERO);
        amplitudes[0] = ONE;
        StateVector {
            amplitudes,
            layout,
            normalized: true,
        }
    }

    /// Computational basis state |index>.
    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for dimension {}",
                layout.dim()
            )));
        }
        let mut amplitudes = Array1::from_elem(layout.dim(), ZERO);
        amplitudes[index] = ONE;
        Ok(StateVector {
            amplitudes,
            layout,
            normalized: true,
        })
    }

    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: CVec) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::dims(format!(
                "amplitude vector has length {}, layout dimension is {}",
                amplitudes.len(),
                layout.dim()
            )));
        }
        let normalized = {
            let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
            (n2 - 1.0).abs() <= 1e-10
        };
        Ok(StateVector {
            amplitudes,
            layout,
            normalized,
        })
    }

    /// Product state with one factor per register, in layout order.
    pub fn product(layout: RegisterLayout, parts: &[CVec]) -> Result<Self> {
        let widths: Vec<(String, usize)> = layout
            .registers()
            .map(|(n, w)| (n.to_string(), w))
            .collect();
        if parts.len() != widths.len() {
            return Err(Error::dims(format!(
                "{} factors for {} registers",
                parts.len(),
                widths.len()
            )));
        }
        for ((name, w), part) in widths.iter().zip(parts) {
            if part.len() != 1 << w {
                return Err(Error::dims(format!(
                    "factor for register `{name}` has length {}, expected {}",
                    part.len(),
                    1 << w
                )));
            }
        }
        let dim = layout.dim();
        let mut amplitudes = Array1::from_elem(dim, ZERO);
        for idx in 0..dim {
            let mut amp = ONE;
            let mut offset = 0;
            for ((_, w), part) in widths.iter().zip(parts) {
                let sub = (idx >> offset) & ((1usize << w) - 1);
                amp *= part[sub];
                offset += w;
            }
            amplitudes[idx] = amp;
        }
        Self::from_amplitudes(layout, amplitudes)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::dims("inner product of different dimensions"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn renormalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.mapv_inplace(|z| z / n);
        }
        self.normalized = true;
        self
    }

    /// Apply a k-qubit operator to the given qubit indices; operator qubit j
    /// (bit j of its basis index) lands on `targets[j]`.
    pub fn apply(&mut self, op: &DenseOperator, targets: &[usize]) -> Result<()> {
        let n = self.layout.total_qubits();
        let k = targets.len();
        if op.qubits() != k {
            return Err(Error::dims(format!(
                "operator on {} qubits applied to {} targets",
                op.qubits(),
                k
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &t in targets {
            if t >= n {
                return Err(Error::invalid(format!("target qubit {t} out of range")));
            }
            if !seen.insert(t) {
                return Err(Error::invalid(format!("duplicate target qubit {t}")));
            }
        }
        if k == 0 {
            let scalar = op.matrix()[[0, 0]];
            self.amplitudes.mapv_inplace(|z| z * scalar);
            if !op.is_unitary() {
                self.normalized = false;
            }
            return Ok(());
        }
        let dk = 1usize << k;
        let others: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
        let mut gathered = vec![ZERO; dk];
        let mut indices = vec![0usize; dk];
        let m = op.matrix();
        for rest in 0..(1usize << others.len()) {
            let mut base = 0usize;
            for (j, &q) in others.iter().enumerate() {
                if (rest >> j) & 1 == 1 {
                    base |= 1 << q;
                }
            }
            for u in 0..dk {
                let mut idx = base;
                for (j, &q) in targets.iter().enumerate() {
                    if (u >> j) & 1 == 1 {
                        idx |= 1 << q;
                    }
                }
                indices[u] = idx;
                gathered[u] = self.amplitudes[idx];
            }
            for u in 0..dk {
                let mut acc = ZERO;
                for v in 0..dk {
                    acc += m[[u, v]] * gathered[v];
                }
                self.amplitudes[indices[u]] = acc;
            }
        }
        if !op.is_unitary() {
            self.normalized = false;
        }
        Ok(())
    }

    /// Apply an operator spanning exactly one named register.
    pub fn apply_to_register(&mut self, op: &DenseOperator, register: &str) -> Result<()> {
        let targets = self.layout.qubits_of(register)?;
        self.apply(op, &targets)
    }

    /// Project a register onto the basis outcome `outcome`, removing it.
    ///
    /// Returns the unnormalized residual state over the remaining registers
    /// and the outcome probability (sum of squared amplitudes kept, which is
    /// the joint probability when the input is itself unnormalized residual).
    /// Fails when the probability is below [`POST_SELECTION_MIN_PROB`].
    pub fn project(&self, register: &str, outcome: usize) -> Result<(StateVector, f64)> {
        let range = self.layout.qubit_range(register)?;
        let w = range.len();
        if outcome >= (1usize << w) {
            return Err(Error::invalid(format!(
                "outcome {outcome} out of range for register `{register}` of width {w}"
            )));
        }
        let remaining: Vec<(String, usize)> = self
            .layout
            .registers()
            .filter(|(n, _)| *n != register)
            .map(|(n, w)| (n.to_string(), w))
            .collect();
        if remaining.is_empty() {
            return Err(Error::invalid(
                "cannot project away the only register; add a placeholder register",
            ));
        }
        let borrowed: Vec<(&str, usize)> = remaining
            .iter()
            .map(|(n, w)| (n.as_str(), *w))
            .collect();
        let new_layout = RegisterLayout::new(&borrowed)?;
        let low_mask = (1usize << range.start) - 1;
        let mut amplitudes = Array1::from_elem(new_layout.dim(), ZERO);
        let mut probability = 0.0f64;
        for new_idx in 0..new_layout.dim() {
            let low = new_idx & low_mask;
            let high = new_idx >> range.start;
            let old_idx = low | (outcome << range.start) | (high << range.end);
            let amp = self.amplitudes[old_idx];
            probability += amp.norm_sqr();
            amplitudes[new_idx] = amp;
        }
        if probability < POST_SELECTION_MIN_PROB {
            return Err(Error::PostSelectionFailure { probability });
        }
        Ok((
            StateVector {
                amplitudes,
                layout: new_layout,
                normalized: false,
            },
            probability,
        ))
    }

    /// Marginal Born distribution over the joint outcomes of `registers`.
    ///
    /// Keys concatenate the registers in the given order, each rendered with
    /// its low qubit rightmost.
    pub fn outcome_distribution(&self, registers: &[&str]) -> Result<Vec<(String, f64)>> {
        let mut ranges = Vec::new();
        for name in registers {
            ranges.push(self.layout.qubit_range(name)?);
        }
        let total: f64 = self.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let mut probs: BTreeMap<String, f64> = BTreeMap::new();
        for idx in 0..self.dim() {
            let p = self.amplitudes[idx].norm_sqr();
            if p == 0.0 {
                continue;
            }
            let key = outcome_key(idx, &ranges);
            *probs.entry(key).or_insert(0.0) += p;
        }
        Ok(probs.into_iter().map(|(k, p)| (k, p / total)).collect())
    }

    /// Draw `shots` outcomes of the given registers, optionally flipping each
    /// read-out bit with probability `noise.p_ro`. Deterministic in `seed`.
    pub fn sample(
        &self,
        registers: &[&str],
        shots: usize,
        noise: Option<&NoiseModel>,
        seed: u64,
    ) -> Result<BTreeMap<String, u64>> {
        let dist = self.outcome_distribution(registers)?;
        let mut cumulative = Vec::with_capacity(dist.len());
        let mut acc = 0.0;
        for (key, p) in &dist {
            acc += p;
            cumulative.push((acc, key.clone()));
        }
        let p_ro = noise.map_or(0.0, |n| n.p_ro);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * acc;
            let pos = cumulative
                .iter()
                .position(|(edge, _)| u < *edge)
                .unwrap_or(cumulative.len() - 1);
            let mut key: Vec<char> = cumulative[pos].1.chars().collect();
            if p_ro > 0.0 {
                for ch in key.iter_mut() {
                    if rng.gen::<f64>() < p_ro {
                        *ch = if *ch == '0' { '1' } else { '0' };
                    }
                }
            }
            *histogram.entry(key.into_iter().collect()).or_insert(0) += 1;
        }
        Ok(histogram)
    }
}

fn outcome_key(index: usize, ranges: &[std::ops::Range<usize>]) -> String {
    let mut key = String::new();
    for range in ranges {
        for q in range.clone().rev() {
            key.push(if (index >> q) & 1 == 1 { '1' } else { '0' });
        }
    }
    key
}

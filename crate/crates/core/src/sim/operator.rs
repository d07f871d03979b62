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

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE, ZERO};

use super::UNITARY_TOL;

/// Dense operator on a fixed number of qubits, with a cached unitarity flag.
///
/// The flag is determined numerically at construction (max entry of
/// U^dag U - I against [`UNITARY_TOL`]) and propagated structurally by
/// `tensor`, `controlled`, products, powers and adjoints.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: CMat,
    qubits: usize,
    unitary: bool,
}

impl DenseOperator {
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::dims(format!(
                "operator must be square, got {}x{}",
                dim,
                matrix.ncols()
            )));
        }
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::dims(format!(
                "operator dimension {dim} is not a power of two"
            )));
        }
        let qubits = dim.trailing_zeros() as usize;
        let gram = linalg::matmul(&linalg::dagger(&matrix), &matrix);
        let unitary = linalg::max_abs_diff(&gram, &linalg::identity(dim)) <= UNITARY_TOL;
        Ok(DenseOperator {
            matrix,
            qubits,
            unitary,
        })
    }

    pub fn identity(qubits: usize) -> Self {
        DenseOperator {
            matrix: linalg::identity(1 << qubits),
            qubits,
            unitary: true,
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn dagger(&self) -> Self {
        DenseOperator {
            matrix: linalg::dagger(&self.matrix),
            qubits: self.qubits,
            unitary: self.unitary,
        }
    }

    /// Matrix product self * rhs (rhs acts first).
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.qubits != rhs.qubits {
            return Err(Error::dims(format!(
                "compose: {} vs {} qubits",
                self.qubits, rhs.qubits
            )));
        }
        Ok(DenseOperator {
            matrix: linalg::matmul(&self.matrix, &rhs.matrix),
            qubits: self.qubits,
            unitary: self.unitary && rhs.unitary,
        })
    }

    /// n-th matrix power by repeated multiplication.
    pub fn pow(&self, n: usize) -> Self {
        let mut out = DenseOperator::identity(self.qubits);
        for _ in 0..n {
            out = out.compose(self).expect("same dimension");
        }
        out
    }

    pub fn negated(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.mapv(|z| -z),
            qubits: self.qubits,
            unitary: self.unitary,
        }
    }
}

/// Kronecker product over a slice of operators; the last factor acts on the
/// lowest qubits, so `tensor(&[Z, X])` applied to |10> gives -|11>.
pub fn tensor(ops: &[DenseOperator]) -> DenseOperator {
    assert!(!ops.is_empty(), "tensor of no operators");
    let mut matrix = ops[0].matrix.clone();
    let mut qubits = ops[0].qubits;
    let mut unitary = ops[0].unitary;
    for op in &ops[1..] {
        matrix = linalg::kron(&matrix, &op.matrix);
        qubits += op.qubits;
        unitary = unitary && op.unitary;
    }
    DenseOperator {
        matrix,
        qubits,
        unitary,
    }
}

/// Controlled operator with the control register on the high qubits.
///
/// `pattern` is a bit string of length `num_controls`, written with the low
/// control qubit rightmost; the operator is applied exactly on the matching
/// control basis state and the identity on every other one.
pub fn controlled(op: &DenseOperator, num_controls: usize, pattern: &str) -> Result<DenseOperator> {
    if pattern.len() != num_controls {
        return Err(Error::invalid(format!(
            "control pattern `{pattern}` does not have {num_controls} bits"
        )));
    }
    let mut want = 0usize;
    for (i, ch) in pattern.chars().enumerate() {
        // leftmost character is the highest control qubit
        let bit = num_controls - 1 - i;
        match ch {
            '1' => want |= 1 << bit,
            '0' => {}
            _ => {
                return Err(Error::invalid(format!(
                    "control pattern `{pattern}` has a character other than 0/1"
                )))
            }
        }
    }
    let dc = 1usize << num_controls;
    let dt = op.dim();
    let dim = dc * dt;
    let mut matrix = Array2::from_elem((dim, dim), ZERO);
    for c in 0..dc {
        let base = c * dt;
        if c == want {
            for i in 0..dt {
                for j in 0..dt {
                    matrix[[base + i, base + j]] = op.matrix[[i, j]];
                }
            }
        } else {
            for i in 0..dt {
                matrix[[base + i, base + i]] = ONE;
            }
        }
    }
    Ok(DenseOperator {
        matrix,
        qubits: num_controls + op.qubits,
        unitary: op.unitary,
    })
}

/// Common fixed gates.
pub mod gates {
    use super::*;

    fn from_rows(rows: [[C64; 2]; 2]) -> DenseOperator {
        let matrix = Array2::from_shape_vec((2, 2), rows.concat()).unwrap();
        DenseOperator::from_matrix(matrix).unwrap()
    }

    pub fn i() -> DenseOperator {
        DenseOperator::identity(1)
    }

    pub fn x() -> DenseOperator {
        from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> DenseOperator {
        from_rows([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
    }

    pub fn z() -> DenseOperator {
        from_rows([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn h() -> DenseOperator {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        from_rows([
            [C64::new(r, 0.0), C64::new(r, 0.0)],
            [C64::new(r, 0.0), C64::new(-r, 0.0)],
        ])
    }

    /// RY(theta) = exp(-i theta Y / 2), real rotation.
    pub fn ry(theta: f64) -> DenseOperator {
        let (s, c) = (theta / 2.0).sin_cos();
        from_rows([
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ])
    }

    /// CX with the control on the high qubit.
    pub fn cx() -> DenseOperator {
        controlled(&x(), 1, "1").unwrap()
    }

    pub fn pauli(ch: char) -> Option<DenseOperator> {
        match ch {
            'I' => Some(i()),
            'X' => Some(x()),
            'Y' => Some(y()),
            'Z' => Some(z()),
            _ => None,
        }
    }
}

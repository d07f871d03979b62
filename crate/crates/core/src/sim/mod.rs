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

//! Exact dense statevector simulation over named registers.
//!
//! Conventions, used consistently by every module above this one:
//! - Basis states are little endian: |i> has qubit k equal to bit k of i,
//!   so qubit 0 is the least significant bit.
//! - The first register in a layout occupies the lowest qubit indices.
//! - Bit strings (outcome keys, control patterns) are written with the low
//!   qubit rightmost, matching ket notation |q_{n-1} ... q_1 q_0>.
//! - `tensor([A, B])` places B on the low qubits: it is the Kronecker
//!   product A (x) B.

mod layout;
mod noise;
mod operator;
mod state;

pub use layout::RegisterLayout;
pub use noise::{run_noisy_trajectory, GateOp, NoiseModel};
pub use operator::{controlled, gates, tensor, DenseOperator};
pub use state::StateVector;

/// Max-entry tolerance for the unitarity check on constructed operators.
pub const UNITARY_TOL: f64 = 1e-10;

/// Projections onto outcomes with probability below this fail post-selection.
pub const POST_SELECTION_MIN_PROB: f64 = 1e-14;

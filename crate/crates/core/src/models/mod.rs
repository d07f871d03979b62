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

//! Concrete systems: the periodic transverse-field Ising chain with its
//! structured block encoding, and the single-qubit X model whose full
//! measurement circuit fits in five qubits.

mod tfim;
mod toy;

pub use tfim::{tfim_block_encoding, tfim_hamiltonian, tfim_l2_closed_forms, L2ClosedForms, TfimModel};
pub use toy::{
    toy_block_encoding, toy_circuit, toy_distance_probability, toy_iterate, toy_layout,
    ToyDistance, TOY_EXPANSION_ORDER, TOY_QUBITS,
};

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

//! Ground-state preparation by unitary encoding of the imaginary-time
//! propagator e^{-tau H}.
//!
//! The crate builds block encodings of Pauli-term Hamiltonians, qubitizes
//! them into walk operators whose powers realize Chebyshev polynomials of
//! the encoded Hamiltonian, assembles the truncated Chebyshev expansion of
//! e^{-tau H} as a probabilistic linear combination of walk powers, and
//! checks the analytic error and cost bounds for that scheme against exact
//! dense statevector simulation. Everything is dense and double precision;
//! the intended scale is a dozen qubits or fewer.
//!
//! Layout:
//! - [`sim`]: registers, statevectors, dense operators, sampling, noise
//! - [`encoding`]: Pauli terms and block encodings `<G|U_H|G> = H/alpha`
//! - [`qubitize`]: walk operators and Chebyshev moments
//! - [`chebyshev`]: expansion coefficients, master operator, evolution
//! - [`bounds`]: special functions and closed-form error/cost bounds
//! - [`models`]: transverse-field Ising chain and the single-qubit X model

pub mod bounds;
pub mod chebyshev;
pub mod encoding;
pub mod error;
pub mod linalg;
pub mod models;
pub mod qubitize;
pub mod sim;

pub use error::{Error, Result};

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

//! Periodic transverse-field Ising chain H = sum_j X_j X_{j+1} + g sum_j Z_j.
//!
//! Site j lives on qubit j. The periodic wrap keeps both bond terms at
//! L = 2 as separate LCU branches (they are the same operator, so the dense
//! matrix holds 2 X_1 X_2), giving 2L coefficients and alpha = L(1 + |g|).

use crate::encoding::{ancilla_count, build_select, BlockEncoding, PauliHamiltonian, PauliTerm};
use crate::error::{Error, Result};
use crate::linalg::{CVec, C64, ZERO};
use crate::sim::{gates, tensor};

/// Chain parameters plus the derived encoding constants.
#[derive(Debug, Clone, Copy)]
pub struct TfimModel {
    /// Site count L >= 2 with 2L a power of two.
    pub sites: usize,
    /// Transverse coupling g > 0.
    pub g: f64,
    /// Subnormalization L(1 + |g|).
    pub alpha: f64,
    /// Encoding ancilla width, 2^n_a = 2L.
    pub n_a: usize,
}

impl TfimModel {
    pub fn new(sites: usize, g: f64) -> Result<Self> {
        if sites < 2 {
            return Err(Error::invalid(format!("need at least 2 sites, got {sites}")));
        }
        if !(g > 0.0) {
            return Err(Error::invalid(format!("coupling must be positive, got {g}")));
        }
        if !(2 * sites).is_power_of_two() {
            return Err(Error::invalid(format!(
                "2L = {} must be a power of two for the structured flag state",
                2 * sites
            )));
        }
        Ok(TfimModel {
            sites,
            g,
            alpha: sites as f64 * (1.0 + g.abs()),
            n_a: ancilla_count(2 * sites),
        })
    }

    pub fn hamiltonian(&self) -> PauliHamiltonian {
        tfim_hamiltonian(self.sites, self.g).expect("validated parameters")
    }

    pub fn block_encoding(&self) -> Result<BlockEncoding> {
        tfim_block_encoding(self.sites, self.g)
    }

    /// Rotation angle putting weight 1/(1+g) on the bond block of the flag
    /// state: theta_g = 2 arccos((1+g)^{-1/2}).
    pub fn theta_g(&self) -> f64 {
        2.0 * (1.0 + self.g).sqrt().recip().acos()
    }
}

/// The 2L-term list: L periodic bonds (coefficient 1) then L fields
/// (coefficient g). Both L=2 bonds are the word XX; they stay separate.
pub fn tfim_hamiltonian(sites: usize, g: f64) -> Result<PauliHamiltonian> {
    if sites < 2 {
        return Err(Error::invalid(format!("need at least 2 sites, got {sites}")));
    }
    if !(g > 0.0) {
        return Err(Error::invalid(format!("coupling must be positive, got {g}")));
    }
    let mut terms = Vec::with_capacity(2 * sites);
    for j in 0..sites {
        let mut word = vec!['I'; sites];
        // leftmost word character is the highest qubit
        word[sites - 1 - j] = 'X';
        word[sites - 1 - (j + 1) % sites] = 'X';
        terms.push(PauliTerm::new(1.0, word.into_iter().collect::<String>())?);
    }
    for j in 0..sites {
        let mut word = vec!['I'; sites];
        word[sites - 1 - j] = 'Z';
        terms.push(PauliTerm::new(g, word.into_iter().collect::<String>())?);
    }
    PauliHamiltonian::with_term_multiplicity(terms)
}

/// Structured block encoding: the flag state gives every bond amplitude
/// (L(1+g))^{-1/2} and every field amplitude (g/(L(1+g)))^{1/2}, prepared by
/// RY(theta_g) on the top ancilla qubit and Hadamards below it.
pub fn tfim_block_encoding(sites: usize, g: f64) -> Result<BlockEncoding> {
    let model = TfimModel::new(sites, g)?;
    let ham = model.hamiltonian();
    let mut factors = vec![gates::ry(model.theta_g())];
    factors.extend(std::iter::repeat_with(gates::h).take(model.n_a - 1));
    let prepare = tensor(&factors);
    let select = build_select(&ham, model.n_a)?;
    BlockEncoding::new(model.n_a, select, prepare, model.alpha)
}

/// Exact L=2 results: encoded eigenvalues, ground state, first excited
/// state, all in units of alpha = 2(1+g).
#[derive(Debug, Clone)]
pub struct L2ClosedForms {
    /// Ascending encoded spectrum
    /// {-sqrt(1+g^2), -1, 1, sqrt(1+g^2)} / (1+g).
    pub spectrum: [f64; 4],
    /// Normalized (g - sqrt(1+g^2)) |00> + |11>.
    pub ground: CVec,
    /// (|10> - |01>) / sqrt(2), independent of g.
    pub excited: CVec,
}

pub fn tfim_l2_closed_forms(g: f64) -> Result<L2ClosedForms> {
    if !(g > 0.0) {
        return Err(Error::invalid(format!("coupling must be positive, got {g}")));
    }
    let scale = 1.0 + g;
    let root = (1.0 + g * g).sqrt();
    let spectrum = [-root / scale, -1.0 / scale, 1.0 / scale, root / scale];
    let c = g - root;
    let norm = (c * c + 1.0).sqrt();
    let ground = CVec::from(vec![
        C64::new(c / norm, 0.0),
        ZERO,
        ZERO,
        C64::new(1.0 / norm, 0.0),
    ]);
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let excited = CVec::from(vec![ZERO, -r, r, ZERO]);
    Ok(L2ClosedForms { spectrum, ground, excited })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::verify_block_encoding;
    use crate::linalg::{hermitian_eigen, inner, max_abs_diff, vec_norm, identity};

    #[test]
    fn two_site_terms_double_the_bond() {
        let ham = tfim_hamiltonian(2, 1.0).unwrap();
        let words: Vec<&str> = ham.terms().iter().map(|t| t.word.as_str()).collect();
        assert_eq!(words, ["XX", "XX", "IZ", "ZI"]);
        assert_eq!(ham.alpha(), 4.0);
        // dense = 2 XX + Z_0 + Z_1: check one matrix element, <00|H|11> = 2
        let dense = ham.dense();
        assert_eq!(dense[[0, 3]], C64::new(2.0, 0.0));
    }

    #[test]
    fn four_site_matrix_is_hermitian_and_traceless() {
        let ham = tfim_hamiltonian(4, 0.5).unwrap();
        assert_eq!(ham.terms().len(), 8);
        assert_eq!(ham.alpha(), 6.0);
        let dense = ham.dense();
        let dag = crate::linalg::dagger(&dense);
        assert!(max_abs_diff(&dense, &dag) < 1e-15);
        let trace: C64 = (0..16).map(|i| dense[[i, i]]).sum();
        assert!(trace.norm() < 1e-12);
    }

    #[test]
    fn closed_form_spectrum_matches_diagonalization() {
        let g = 1.0;
        let forms = tfim_l2_closed_forms(g).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want = [-s, -0.5, 0.5, s];
        for (a, b) in forms.spectrum.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let ham = tfim_hamiltonian(2, g).unwrap();
        let h_enc = ham.dense().mapv(|z| z / ham.alpha());
        let (w, _) = hermitian_eigen(&h_enc).unwrap();
        for (k, &e) in forms.spectrum.iter().enumerate() {
            assert!((w[k] - e).abs() < 1e-12, "level {k}");
        }
    }

    #[test]
    fn closed_form_states_are_the_low_eigenvectors() {
        for g in [0.5, 1.0, 3.0] {
            let forms = tfim_l2_closed_forms(g).unwrap();
            let ham = tfim_hamiltonian(2, g).unwrap();
            let h_enc = ham.dense().mapv(|z| z / ham.alpha());
            let (w, v) = hermitian_eigen(&h_enc).unwrap();
            assert!((vec_norm(&forms.ground) - 1.0).abs() < 1e-14);
            let o_ground = inner(&v.column(0).to_owned(), &forms.ground).norm();
            assert!((o_ground - 1.0).abs() < 1e-10, "g={g}: ground overlap {o_ground}");
            let o_exc = inner(&v.column(1).to_owned(), &forms.excited).norm();
            assert!((o_exc - 1.0).abs() < 1e-10, "g={g}: excited overlap {o_exc}");
            assert!((w[1] + 1.0 / (1.0 + g)).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_coupling_ground_state_aligns_with_down_spins() {
        // g -> infinity leaves the field term g(Z_0 + Z_1), whose minimum is
        // the |11> configuration.
        let forms = tfim_l2_closed_forms(1e6).unwrap();
        assert!(forms.ground[3].norm() > 1.0 - 1e-6);
        assert!(forms.ground[0].norm() < 1e-3);
    }

    #[test]
    fn unit_coupling_flag_state_is_uniform() {
        let model = TfimModel::new(2, 1.0).unwrap();
        assert!((model.theta_g() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let be = tfim_block_encoding(2, 1.0).unwrap();
        let g_state = be.g_state();
        for i in 0..4 {
            assert!((g_state[i] - C64::new(0.5, 0.0)).norm() < 1e-12, "amp {i}");
        }
    }

    #[test]
    fn flag_state_splits_bond_and_field_blocks() {
        // L=2, g=3: first two amplitudes (1/(2*4))^{1/2}, last two
        // (3/(2*4))^{1/2}.
        let be = tfim_block_encoding(2, 3.0).unwrap();
        let g_state = be.g_state();
        let bond = (1.0f64 / 8.0).sqrt();
        let field = (3.0f64 / 8.0).sqrt();
        for (i, want) in [bond, bond, field, field].into_iter().enumerate() {
            assert!((g_state[i] - C64::new(want, 0.0)).norm() < 1e-12, "amp {i}");
        }
    }

    #[test]
    fn block_encodings_verify_across_couplings() {
        for g in [0.5, 1.0, 2.0] {
            let be = tfim_block_encoding(2, g).unwrap();
            let ham = tfim_hamiltonian(2, g).unwrap();
            assert!(verify_block_encoding(&be, &ham) < 1e-10, "g={g}");
            assert!(be.self_inverse, "g={g}: select must square to identity");
        }
        let be = tfim_block_encoding(4, 0.5).unwrap();
        let ham = tfim_hamiltonian(4, 0.5).unwrap();
        assert!(verify_block_encoding(&be, &ham) < 1e-10);
    }

    #[test]
    fn select_squares_to_identity() {
        let be = tfim_block_encoding(2, 1.0).unwrap();
        let sq = be.select.compose(&be.select).unwrap();
        assert!(max_abs_diff(sq.matrix(), &identity(sq.dim())) < 1e-12);
    }

    #[test]
    fn encoded_block_at_strong_coupling() {
        let be = tfim_block_encoding(2, 3.0).unwrap();
        let ham = tfim_hamiltonian(2, 3.0).unwrap();
        let target = ham.dense().mapv(|z| z / 8.0);
        let got = be.encoded_matrix().mapv(|z| z / 8.0);
        assert!(max_abs_diff(&got, &target) < 1e-10);
    }

    #[test]
    fn encoded_spectral_radius_stays_below_one() {
        for g in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let forms = tfim_l2_closed_forms(g).unwrap();
            let radius = forms.spectrum[3];
            let want = (1.0 + g * g).sqrt() / (1.0 + g);
            assert!((radius - want).abs() < 1e-14);
            assert!(radius < 1.0, "g={g}: radius {radius}");
        }
    }

    #[test]
    fn benchmark_overlaps_from_closed_forms() {
        // psi = (|00> + |01>)/sqrt(2): the excited overlap is exactly 1/2
        // and the ground overlap |1-sqrt(2)| / (sqrt(2) sqrt(1+(1-sqrt(2))^2)).
        let forms = tfim_l2_closed_forms(1.0).unwrap();
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = CVec::from(vec![r, r, ZERO, ZERO]);
        let o_exc = inner(&forms.excited, &psi).norm();
        assert!((o_exc - 0.5).abs() < 1e-12);
        let c = 1.0 - std::f64::consts::SQRT_2;
        let want = c.abs() / (std::f64::consts::SQRT_2 * (1.0 + c * c).sqrt());
        let o_ground = inner(&forms.ground, &psi).norm();
        assert!((o_ground - want).abs() < 1e-12);
        assert!((o_ground - 0.27059805007309845).abs() < 1e-12);
    }
}

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

//! Qubitization: turn a block encoding into a walk operator.
//!
//! The raw encoding unitary leaks out of the two-dimensional spaces attached
//! to each eigenpair of H / alpha. Multiplying by a reflection about the flag
//! state fixes this: each eigenvalue lambda gets an invariant 2-plane where
//! the walk acts as the rotation [[lambda, -s], [s, lambda]] with
//! s = sqrt(1 - lambda^2). Powers of the walk then have flag-state matrix
//! elements <G| W^n |G> = T_n(H / alpha), the Chebyshev polynomials.
//!
//! Two constructions: a shortcut when select is an involution (reflection
//! times select works as-is), and a general one that adjoins one qubit,
//! runs select or its adjoint depending on that qubit, and corrects with a
//! reflection followed by X on the new qubit.

use crate::encoding::BlockEncoding;
use crate::error::{Error, Result};
use crate::linalg::{bracket_high_register, hermitian_eigen, CMat, CVec, C64, ONE, ZERO};
use crate::sim::{controlled, gates, tensor, DenseOperator, RegisterLayout, StateVector};

/// Which walk construction produced an [`Iterate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// select^2 = I, walk = (2|G><G| - I) (x) I_s . select.
    SelfInverse,
    /// One extra qubit controls select vs select^dag; always applicable.
    General,
}

/// A qubitized walk operator together with the flag state it reflects about.
#[derive(Debug, Clone)]
pub struct Iterate {
    /// Walk unitary on ancilla (x) system, ancilla on the high qubits.
    pub walk: DenseOperator,
    /// Effective ancilla width: n_a, or n_a + 1 for the general construction.
    pub n_a_eff: usize,
    /// Flag state on the effective ancilla register.
    pub g_state: StateVector,
    pub construction: Construction,
}

impl Iterate {
    pub fn n_s(&self) -> usize {
        self.walk.qubits() - self.n_a_eff
    }

    /// Flag-state amplitudes as a bare vector.
    pub fn g_amplitudes(&self) -> &CVec {
        self.g_state.amplitudes()
    }
}

fn ancilla_state(n_a_eff: usize, amplitudes: CVec) -> Result<StateVector> {
    let layout = RegisterLayout::new(&[("a", n_a_eff)])?;
    StateVector::from_amplitudes(layout, amplitudes)
}

/// 2|v><v| - I on the register(s) of `state`; Hermitian, unitary, involutive.
pub fn reflection_about(state: &StateVector) -> DenseOperator {
    let v = state.amplitudes();
    let dim = v.len();
    let mut m = CMat::from_elem((dim, dim), ZERO);
    for r in 0..dim {
        for c in 0..dim {
            m[[r, c]] = 2.0 * v[r] * v[c].conj();
        }
        m[[r, r]] -= ONE;
    }
    DenseOperator::from_matrix(m).expect("reflection is unitary")
}

/// Walk for a self-inverse encoding: (2|G><G| - I)_a (x) I_s, then select.
pub fn qubitize_self_inverse(be: &BlockEncoding) -> Result<Iterate> {
    if !be.self_inverse {
        return Err(Error::invalid(
            "encoding is not self-inverse; use the general construction",
        ));
    }
    let g_state = ancilla_state(be.n_a, be.g_state())?;
    let reflect = tensor(&[reflection_about(&g_state), DenseOperator::identity(be.n_s)]);
    let walk = reflect.compose(&be.select)?;
    Ok(Iterate { walk, n_a_eff: be.n_a, g_state, construction: Construction::SelfInverse })
}

/// Walk for an arbitrary encoding, one extra qubit on top of the ancilla.
///
/// The extended encoding runs select when the new qubit is |0> and
/// select^dag when it is |1>; its flag state is |+> (x) |G>. The correction
/// is the reflection about that flag state composed with X on the new qubit.
pub fn qubitize_general(be: &BlockEncoding) -> Result<Iterate> {
    let n_a_eff = be.n_a + 1;
    let u_ext = extended_encoding(be)?;
    let g = be.g_state();
    let da = g.len();
    let mut amps = CVec::from_elem(2 * da, ZERO);
    let invsqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for i in 0..da {
        amps[i] = g[i] * invsqrt2;
        amps[da + i] = g[i] * invsqrt2;
    }
    let g_state = ancilla_state(n_a_eff, amps)?;
    let x_top = tensor(&[gates::x(), DenseOperator::identity(be.n_a)]);
    let correction = reflection_about(&g_state).compose(&x_top)?;
    let walk = tensor(&[correction, DenseOperator::identity(be.n_s)]).compose(&u_ext)?;
    Ok(Iterate { walk, n_a_eff, g_state, construction: Construction::General })
}

/// |0><0| (x) select + |1><1| (x) select^dag on one added top qubit.
fn extended_encoding(be: &BlockEncoding) -> Result<DenseOperator> {
    let on_zero = controlled(&be.select, 1, "0")?;
    let on_one = controlled(&be.select.dagger(), 1, "1")?;
    on_zero.compose(&on_one)
}

/// (<G| (x) I_s) walk^n (|G> (x) I_s); equals T_n(H / alpha) on the system.
pub fn chebyshev_moment(it: &Iterate, n: usize) -> DenseOperator {
    let ds = 1usize << it.n_s();
    let m = bracket_high_register(it.walk.pow(n).matrix(), it.g_amplitudes(), ds);
    DenseOperator::from_matrix(m).expect("square power-of-two matrix")
}

/// Below this orthogonal-component norm the invariant 2-plane collapses to a
/// line (lambda = +-1) and only the diagonal condition applies.
const DEGENERATE_PLANE_TOL: f64 = 1e-7;

/// Max deviation of the walk from its contract on the invariant 2-planes.
///
/// For each eigenpair (lambda, |lambda>) of `h_over_alpha`, restricts the
/// walk to span{|G>|lambda>, orthogonal complement of its image} and compares
/// with [[lambda, -s], [s, lambda]], s = sqrt(1 - lambda^2); also measures
/// leakage of the plane under one more application of the walk.
pub fn su2_restriction_error(it: &Iterate, h_over_alpha: &CMat) -> Result<f64> {
    let (vals, vecs) = hermitian_eigen(h_over_alpha)?;
    let ds = h_over_alpha.nrows();
    if ds != 1usize << it.n_s() {
        return Err(Error::dims(format!(
            "system dimension {ds} does not match walk ({} qubits)",
            it.n_s()
        )));
    }
    let g = it.g_amplitudes();
    let w = it.walk.matrix();
    let dim = w.nrows();
    let mut worst = 0.0f64;
    for k in 0..ds {
        let lambda = vals[k];
        // |G_lambda> = |G> (x) |lambda>, ancilla on the high qubits.
        let mut gl = CVec::from_elem(dim, ZERO);
        for i in 0..g.len() {
            for r in 0..ds {
                gl[i * ds + r] = g[i] * vecs[[r, k]];
            }
        }
        let wgl = w.dot(&gl);
        let diag = crate::linalg::inner(&gl, &wgl);
        worst = worst.max((diag - C64::new(lambda, 0.0)).norm());
        let mut perp = wgl.clone();
        for i in 0..dim {
            perp[i] -= diag * gl[i];
        }
        let pnorm = crate::linalg::vec_norm(&perp);
        if pnorm < DEGENERATE_PLANE_TOL {
            continue;
        }
        let e2 = perp.mapv(|z| z / pnorm);
        let s = (1.0 - lambda * lambda).max(0.0).sqrt();
        let we2 = w.dot(&e2);
        let a21 = crate::linalg::inner(&e2, &wgl);
        let a12 = crate::linalg::inner(&gl, &we2);
        let a22 = crate::linalg::inner(&e2, &we2);
        worst = worst.max((a21 - C64::new(s, 0.0)).norm());
        worst = worst.max((a12 + C64::new(s, 0.0)).norm());
        worst = worst.max((a22 - C64::new(lambda, 0.0)).norm());
        // Closure: the walk must keep the plane invariant.
        let mut leak = we2.clone();
        for i in 0..dim {
            leak[i] -= a12 * gl[i] + a22 * e2[i];
        }
        worst = worst.max(crate::linalg::vec_norm(&leak));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{block_encode, PauliHamiltonian, PauliTerm};
    use crate::linalg::{identity, matmul, max_abs_diff};

    fn term(c: f64, w: &str) -> PauliTerm {
        PauliTerm::new(c, w).unwrap()
    }

    fn random_hamiltonian(seed: u64) -> PauliHamiltonian {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let letters = ['I', 'X', 'Y', 'Z'];
        let mut words = std::collections::HashSet::new();
        while words.len() < 4 {
            let w: String = (0..2).map(|_| letters[rng.gen_range(0..4)]).collect();
            if w != "II" {
                words.insert(w);
            }
        }
        let terms: Vec<PauliTerm> = words
            .into_iter()
            .map(|w| {
                let mut c: f64 = rng.gen_range(-2.0..2.0);
                if c.abs() < 0.1 {
                    c = 0.5;
                }
                term(c, &w)
            })
            .collect();
        PauliHamiltonian::new(terms).unwrap()
    }

    fn single_qubit_state(amp0: f64, amp1: f64) -> StateVector {
        let layout = RegisterLayout::new(&[("a", 1)]).unwrap();
        StateVector::from_amplitudes(
            layout,
            CVec::from(vec![C64::new(amp0, 0.0), C64::new(amp1, 0.0)]),
        )
        .unwrap()
    }

    #[test]
    fn reflection_about_zero_is_z() {
        let r = reflection_about(&single_qubit_state(1.0, 0.0));
        assert_eq!(r.matrix()[[0, 0]], ONE);
        assert_eq!(r.matrix()[[1, 1]], -ONE);
        assert_eq!(r.matrix()[[0, 1]], ZERO);
    }

    #[test]
    fn reflection_about_plus_is_x() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = reflection_about(&single_qubit_state(s, s));
        assert!(max_abs_diff(r.matrix(), gates::x().matrix()) < 1e-15);
    }

    #[test]
    fn reflection_squares_to_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let layout = RegisterLayout::new(&[("a", 3)]).unwrap();
        let amps = CVec::from_iter((0..8).map(|_| C64::new(rng.gen(), rng.gen())));
        let n = crate::linalg::vec_norm(&amps);
        let state = StateVector::from_amplitudes(layout, amps.mapv(|z| z / n)).unwrap();
        let r = reflection_about(&state);
        let sq = matmul(r.matrix(), r.matrix());
        assert!(max_abs_diff(&sq, &identity(8)) < 1e-12);
        // Hermitian as well.
        assert!(max_abs_diff(r.matrix(), &crate::linalg::dagger(r.matrix())) < 1e-14);
    }

    #[test]
    fn self_inverse_rejects_non_involution() {
        // Phase gate diag(1, i) is unitary but not an involution.
        let phase = DenseOperator::from_matrix(ndarray::array![
            [ONE, ZERO],
            [ZERO, C64::new(0.0, 1.0)]
        ])
        .unwrap();
        let be = crate::encoding::BlockEncoding::new(0, phase, DenseOperator::identity(0), 1.0)
            .unwrap();
        assert!(!be.self_inverse);
        assert!(qubitize_self_inverse(&be).is_err());
        assert!(qubitize_general(&be).is_ok());
    }

    #[test]
    fn cx_encoding_walk_matches_closed_form() {
        // H = X encoded through CX with flag state |1>_a: the walk is
        // -(Z (x) I) . CX.
        let h = PauliHamiltonian::new(vec![term(1.0, "X")]).unwrap();
        // Assemble the CX realization by hand: prepare = X so |G> = |1>,
        // select = CX (control on the ancilla, the high qubit).
        let be = crate::encoding::BlockEncoding::new(1, gates::cx(), gates::x(), 1.0).unwrap();
        assert_eq!(crate::encoding::verify_block_encoding(&be, &h), 0.0);
        let it = qubitize_self_inverse(&be).unwrap();
        let closed = tensor(&[gates::z(), gates::i()]).compose(&gates::cx()).unwrap().negated();
        assert!(max_abs_diff(it.walk.matrix(), closed.matrix()) < 1e-14);
    }

    #[test]
    fn walk_flag_elements_reproduce_eigenvalue_rotation_diagonal() {
        // H = Z: both eigenvalues are +-1, the invariant planes collapse to
        // lines, and the flag matrix element must be exactly lambda.
        let h = PauliHamiltonian::new(vec![term(1.0, "Z")]).unwrap();
        let be = block_encode(&h).unwrap();
        let it = qubitize_self_inverse(&be).unwrap();
        let scaled = h.dense();
        let err = su2_restriction_error(&it, &scaled).unwrap();
        assert!(err < 1e-12, "restriction error {err}");
    }

    #[test]
    fn su2_restriction_both_constructions() {
        let h = random_hamiltonian(3);
        let be = block_encode(&h).unwrap();
        let scaled = h.dense().mapv(|z| z / be.alpha);
        let self_inv = qubitize_self_inverse(&be).unwrap();
        let general = qubitize_general(&be).unwrap();
        assert!(su2_restriction_error(&self_inv, &scaled).unwrap() < 1e-8);
        assert!(su2_restriction_error(&general, &scaled).unwrap() < 1e-8);
    }

    #[test]
    fn extended_encoding_flags_the_same_hamiltonian() {
        let h = random_hamiltonian(5);
        let be = block_encode(&h).unwrap();
        let u_ext = extended_encoding(&be).unwrap();
        let it = qubitize_general(&be).unwrap();
        let bracket =
            bracket_high_register(u_ext.matrix(), it.g_amplitudes(), 1usize << be.n_s);
        let expect = h.dense().mapv(|z| z / be.alpha);
        assert!(max_abs_diff(&bracket, &expect) < 1e-10);
    }

    #[test]
    fn correction_is_an_involution() {
        let h = random_hamiltonian(9);
        let be = block_encode(&h).unwrap();
        let it = qubitize_general(&be).unwrap();
        // Rebuild the correction: reflection about |G~> then X on top.
        let x_top = tensor(&[gates::x(), DenseOperator::identity(be.n_a)]);
        let correction = reflection_about(&it.g_state).compose(&x_top).unwrap();
        let sq = matmul(correction.matrix(), correction.matrix());
        assert!(max_abs_diff(&sq, &identity(correction.dim())) < 1e-12);
    }

    #[test]
    fn moments_equal_chebyshev_recurrence() {
        let h = random_hamiltonian(21);
        let be = block_encode(&h).unwrap();
        let scaled = h.dense().mapv(|z| z / be.alpha);
        for it in [qubitize_self_inverse(&be).unwrap(), qubitize_general(&be).unwrap()] {
            // T_0 = I, T_1 = H/alpha, T_n = 2 (H/alpha) T_{n-1} - T_{n-2}.
            let mut t_prev = identity(scaled.nrows());
            let mut t_cur = scaled.clone();
            assert!(max_abs_diff(chebyshev_moment(&it, 0).matrix(), &t_prev) < 1e-12);
            assert!(max_abs_diff(chebyshev_moment(&it, 1).matrix(), &t_cur) < 1e-10);
            for n in 2..=8 {
                let t_next = matmul(&scaled, &t_cur).mapv(|z| z * 2.0) - &t_prev;
                t_prev = t_cur;
                t_cur = t_next;
                let m = chebyshev_moment(&it, n);
                assert!(
                    max_abs_diff(m.matrix(), &t_cur) < 1e-8,
                    "moment {n} mismatch for {:?}",
                    it.construction
                );
            }
        }
    }

    #[test]
    fn cross_construction_moments_agree() {
        let h = random_hamiltonian(33);
        let be = block_encode(&h).unwrap();
        let a = qubitize_self_inverse(&be).unwrap();
        let b = qubitize_general(&be).unwrap();
        for n in 0..=6 {
            let ma = chebyshev_moment(&a, n);
            let mb = chebyshev_moment(&b, n);
            assert!(max_abs_diff(ma.matrix(), mb.matrix()) < 1e-8);
        }
    }
}

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

//! Block encodings of Pauli-sum Hamiltonians.
//!
//! A Hamiltonian H = sum_i c_i P_i with Pauli words P_i is embedded into a
//! unitary `select` on ancilla (x) system so that <G| select |G> = H / alpha,
//! where alpha = sum_i |c_i| and |G> carries amplitudes sqrt(|c_i| / alpha)
//! on the ancilla. Signs of negative coefficients are absorbed into the
//! select blocks, keeping the |G> amplitudes real and nonnegative.
//!
//! Ancilla index i sits on the high qubits of `select`; block i of the
//! block-diagonal matrix is sign(c_i) P_i, and indices past the term count
//! hold identity padding that |G> never weights.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{identity, matmul, CMat, CVec, ZERO};
use crate::sim::{gates, tensor, DenseOperator};

/// One Pauli-sum term. The leftmost word character acts on the highest
/// qubit, so site 1 is the rightmost character.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub word: String,
}

impl PauliTerm {
    pub fn new(coefficient: f64, word: impl Into<String>) -> Result<Self> {
        let word = word.into();
        if coefficient == 0.0 || !coefficient.is_finite() {
            return Err(Error::invalid(format!(
                "term coefficient must be finite and nonzero, got {coefficient}"
            )));
        }
        if word.is_empty() {
            return Err(Error::invalid("empty Pauli word"));
        }
        if let Some(ch) = word.chars().find(|c| !matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
            return Err(Error::invalid(format!(
                "invalid Pauli letter '{ch}' in word \"{word}\""
            )));
        }
        Ok(Self { coefficient, word })
    }

    pub fn n_sites(&self) -> usize {
        self.word.len()
    }

    /// Dense matrix of the word alone (coefficient not applied).
    pub fn word_matrix(&self) -> CMat {
        pauli_word_matrix(&self.word)
    }
}

/// Dense matrix of a Pauli word; leftmost character on the highest qubit.
pub fn pauli_word_matrix(word: &str) -> CMat {
    let factors: Vec<DenseOperator> = word
        .chars()
        .map(|ch| gates::pauli(ch).expect("validated Pauli letter"))
        .collect();
    tensor(&factors).into_matrix()
}

/// A Hamiltonian given as a real linear combination of Pauli words.
#[derive(Debug, Clone)]
pub struct PauliHamiltonian {
    terms: Vec<PauliTerm>,
    n_sites: usize,
}

impl PauliHamiltonian {
    /// Builds a Hamiltonian, rejecting duplicate words. Duplicates are almost
    /// always an input mistake; a legitimate repeated word (a doubled bond on
    /// a two-site ring) goes through [`Self::with_term_multiplicity`].
    pub fn new(terms: Vec<PauliTerm>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &terms {
            if !seen.insert(t.word.clone()) {
                return Err(Error::invalid(format!(
                    "duplicate Pauli word \"{}\"; merge coefficients or use \
                     with_term_multiplicity",
                    t.word
                )));
            }
        }
        Self::with_term_multiplicity(terms)
    }

    /// Same as [`Self::new`] but permits repeated words, each kept as its own
    /// select block.
    pub fn with_term_multiplicity(terms: Vec<PauliTerm>) -> Result<Self> {
        let n_sites = match terms.first() {
            Some(t) => t.n_sites(),
            None => return Err(Error::invalid("Hamiltonian needs at least one term")),
        };
        if let Some(t) = terms.iter().find(|t| t.n_sites() != n_sites) {
            return Err(Error::dims(format!(
                "Pauli word \"{}\" has length {}, expected {}",
                t.word,
                t.n_sites(),
                n_sites
            )));
        }
        Ok(Self { terms, n_sites })
    }

    /// Parses the term-list text format: one `<coefficient> <word>` per
    /// line, `#` starts a comment, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (coeff, word) = match (fields.next(), fields.next(), fields.next()) {
                (Some(c), Some(w), None) => (c, w),
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("expected `<coefficient> <word>`, got \"{line}\""),
                    })
                }
            };
            let coefficient: f64 = coeff.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad coefficient \"{coeff}\""),
            })?;
            let term = PauliTerm::new(coefficient, word).map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
            terms.push(term);
        }
        Self::new(terms)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Subnormalization alpha = sum_i |c_i|.
    pub fn alpha(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Dense matrix sum_i c_i P_i.
    pub fn dense(&self) -> CMat {
        let dim = self.dim();
        let mut out = CMat::from_elem((dim, dim), ZERO);
        for t in &self.terms {
            out = out + t.word_matrix().mapv(|z| z * t.coefficient);
        }
        out
    }
}

/// A verified-shape block encoding: <G| select |G> = H / alpha with
/// |G> = prepare |0>.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    /// Ancilla qubit count; the ancilla register sits above the system.
    pub n_a: usize,
    /// System qubit count.
    pub n_s: usize,
    /// Unitary on ancilla (x) system, ancilla on the high qubits.
    pub select: DenseOperator,
    /// Unitary on the ancilla alone with prepare|0> = |G>.
    pub prepare: DenseOperator,
    /// Subnormalization; the encoded operator is H / alpha.
    pub alpha: f64,
    /// True iff select^2 = I, which unlocks the reflection-only iterate.
    pub self_inverse: bool,
}

const SELF_INVERSE_TOL: f64 = 1e-12;

impl BlockEncoding {
    /// Assembles and validates an encoding from its parts. `self_inverse`
    /// is detected numerically.
    pub fn new(n_a: usize, select: DenseOperator, prepare: DenseOperator, alpha: f64) -> Result<Self> {
        if prepare.qubits() != n_a {
            return Err(Error::dims(format!(
                "prepare acts on {} qubits, expected n_a = {}",
                prepare.qubits(),
                n_a
            )));
        }
        if select.qubits() < n_a {
            return Err(Error::dims(format!(
                "select acts on {} qubits, fewer than n_a = {}",
                select.qubits(),
                n_a
            )));
        }
        if !select.is_unitary() || !prepare.is_unitary() {
            return Err(Error::invalid("select and prepare must be unitary"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
        }
        let n_s = select.qubits() - n_a;
        let sq = matmul(select.matrix(), select.matrix());
        let self_inverse =
            crate::linalg::max_abs_diff(&sq, &identity(select.dim())) <= SELF_INVERSE_TOL;
        Ok(Self { n_a, n_s, select, prepare, alpha, self_inverse })
    }

    /// The flag state |G> = prepare |0>, i.e. the first prepare column.
    pub fn g_state(&self) -> CVec {
        self.prepare.matrix().column(0).to_owned()
    }

    pub fn total_qubits(&self) -> usize {
        self.n_a + self.n_s
    }

    /// The encoded matrix (<G| (x) I) select (|G> (x) I), times alpha.
    /// Equals H up to the verification error.
    pub fn encoded_matrix(&self) -> CMat {
        let bracket =
            crate::linalg::bracket_high_register(self.select.matrix(), &self.g_state(), 1 << self.n_s);
        bracket.mapv(|z| z * self.alpha)
    }
}

/// Any unitary whose first column carries amplitudes sqrt(|c_i| / alpha) on
/// term indices and zeros on padding, completed by a Householder reflection.
pub fn build_prepare(h: &PauliHamiltonian) -> DenseOperator {
    let n_a = ancilla_count(h.terms().len());
    let dim = 1usize << n_a;
    let alpha = h.alpha();
    let mut target = vec![0.0f64; dim];
    for (i, t) in h.terms().iter().enumerate() {
        target[i] = (t.coefficient.abs() / alpha).sqrt();
    }
    let m = crate::linalg::real_unitary_with_first_column(&target);
    DenseOperator::from_matrix(m).expect("Householder reflection is unitary")
}

/// sum_i |i><i| (x) sign(c_i) P_i with identity blocks on padding indices.
pub fn build_select(h: &PauliHamiltonian, n_a: usize) -> Result<DenseOperator> {
    let terms = h.terms();
    if (1usize << n_a) < terms.len() {
        return Err(Error::invalid(format!(
            "2^{n_a} ancilla states cannot index {} terms",
            terms.len()
        )));
    }
    let ds = h.dim();
    let da = 1usize << n_a;
    let mut m = CMat::from_elem((da * ds, da * ds), ZERO);
    for i in 0..da {
        let block = match terms.get(i) {
            Some(t) => t.word_matrix().mapv(|z| z * t.coefficient.signum()),
            None => identity(ds),
        };
        for r in 0..ds {
            for c in 0..ds {
                m[[i * ds + r, i * ds + c]] = block[[r, c]];
            }
        }
    }
    DenseOperator::from_matrix(m)
}

/// Smallest ancilla register that can index `terms` block slots.
pub fn ancilla_count(terms: usize) -> usize {
    let mut n_a = 0;
    while (1usize << n_a) < terms {
        n_a += 1;
    }
    n_a
}

/// Standard encoding of a Pauli Hamiltonian: Householder prepare plus
/// block-diagonal select.
pub fn block_encode(h: &PauliHamiltonian) -> Result<BlockEncoding> {
    let n_a = ancilla_count(h.terms().len());
    let prepare = build_prepare(h);
    let select = build_select(h, n_a)?;
    BlockEncoding::new(n_a, select, prepare, h.alpha())
}

/// Max entry-wise |(<G| (x) I) select (|G> (x) I) - H / alpha|.
pub fn verify_block_encoding(be: &BlockEncoding, h: &PauliHamiltonian) -> f64 {
    let encoded = be.encoded_matrix().mapv(|z| z / be.alpha);
    let reference = h.dense().mapv(|z| z / be.alpha);
    crate::linalg::max_abs_diff(&encoded, &reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, hermitian_eigen, max_abs_diff, vec_norm, ONE};

    fn term(c: f64, w: &str) -> PauliTerm {
        PauliTerm::new(c, w).unwrap()
    }

    #[test]
    fn term_rejects_bad_input() {
        assert!(PauliTerm::new(0.0, "X").is_err());
        assert!(PauliTerm::new(f64::NAN, "X").is_err());
        assert!(PauliTerm::new(1.0, "").is_err());
        assert!(PauliTerm::new(1.0, "XA").is_err());
        assert!(PauliTerm::new(1.0, "xz").is_err());
    }

    #[test]
    fn word_matrix_site_order() {
        // "IZ": Z on site 1 = qubit 0 (rightmost char), I on qubit 1.
        let m = pauli_word_matrix("IZ");
        assert_eq!(m[[0, 0]], ONE);
        assert_eq!(m[[1, 1]], -ONE);
        assert_eq!(m[[2, 2]], ONE);
        assert_eq!(m[[3, 3]], -ONE);
    }

    #[test]
    fn hamiltonian_invariants() {
        assert!(PauliHamiltonian::new(vec![]).is_err());
        assert!(PauliHamiltonian::new(vec![term(1.0, "X"), term(2.0, "ZZ")]).is_err());
        assert!(PauliHamiltonian::new(vec![term(1.0, "X"), term(2.0, "X")]).is_err());
        let doubled =
            PauliHamiltonian::with_term_multiplicity(vec![term(1.0, "X"), term(2.0, "X")])
                .unwrap();
        assert_eq!(doubled.terms().len(), 2);
        assert_eq!(doubled.alpha(), 3.0);
    }

    #[test]
    fn parse_term_list() {
        let text = "# two-site example\n1.0 XX\n-0.5 IZ  # trailing note\n\n2e-1 ZI\n";
        let h = PauliHamiltonian::parse(text).unwrap();
        assert_eq!(h.terms().len(), 3);
        assert_eq!(h.n_sites(), 2);
        assert!((h.alpha() - 1.7).abs() < 1e-15);
        assert_eq!(h.terms()[1].coefficient, -0.5);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = PauliHamiltonian::parse("1.0 XX\noops\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(PauliHamiltonian::parse("1.0 XX extra\n").is_err());
        assert!(PauliHamiltonian::parse("abc XX\n").is_err());
    }

    #[test]
    fn single_term_prepare_is_scalar_identity() {
        let h = PauliHamiltonian::new(vec![term(1.0, "X")]).unwrap();
        let be = block_encode(&h).unwrap();
        assert_eq!(be.n_a, 0);
        assert_eq!(be.prepare.dim(), 1);
        assert_eq!(be.prepare.matrix()[[0, 0]], ONE);
        // select = X itself.
        assert!(max_abs_diff(be.select.matrix(), &pauli_word_matrix("X")) < 1e-15);
        assert!(verify_block_encoding(&be, &h) < 1e-12);
    }

    #[test]
    fn uniform_four_term_flag_state() {
        let h = PauliHamiltonian::new(vec![
            term(1.0, "XX"),
            term(1.0, "XY"),
            term(1.0, "IZ"),
            term(1.0, "ZI"),
        ])
        .unwrap();
        let g = build_prepare(&h).matrix().column(0).to_owned();
        for i in 0..4 {
            assert!((g[i] - re(0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn weighted_flag_state_three_one() {
        // Coefficients (3, 1): |G> = (sqrt(3)|0> + |1>)/2, alpha = 4.
        let h = PauliHamiltonian::new(vec![term(3.0, "X"), term(1.0, "Z")]).unwrap();
        assert_eq!(h.alpha(), 4.0);
        let g = build_prepare(&h).matrix().column(0).to_owned();
        assert!((g[0].re - 3.0f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((g[1].re - 0.5).abs() < 1e-14);
        assert!((vec_norm(&g) - 1.0).abs() < 1e-14);
    }

    fn re(x: f64) -> crate::linalg::C64 {
        crate::linalg::C64::new(x, 0.0)
    }

    #[test]
    fn sign_absorbed_two_term_encoding() {
        // {+Z, -X}: blocks {Z, -X}; <G| select |G> = (Z - X)/2.
        let h = PauliHamiltonian::new(vec![term(1.0, "Z"), term(-1.0, "X")]).unwrap();
        let be = block_encode(&h).unwrap();
        assert_eq!(be.alpha, 2.0);
        let sel = be.select.matrix();
        // Block 1 (rows/cols 2..4) must be -X.
        assert_eq!(sel[[2, 3]], -ONE);
        assert_eq!(sel[[3, 2]], -ONE);
        let encoded = be.encoded_matrix();
        assert!(max_abs_diff(&encoded, &h.dense()) < 1e-13);
        assert!(verify_block_encoding(&be, &h) < 1e-13);
    }

    #[test]
    fn padding_blocks_never_contribute() {
        // Three terms on one site: padding slot 3 holds identity and |G>
        // gives it zero weight; replacing it with X must not change the
        // encoded block.
        let h = PauliHamiltonian::new(vec![term(1.0, "X"), term(0.5, "Y"), term(0.25, "Z")])
            .unwrap();
        let be = block_encode(&h).unwrap();
        assert_eq!(be.n_a, 2);
        let g = be.g_state();
        assert_eq!(g[3], ZERO);
        let mut swapped = be.select.matrix().clone();
        swapped[[6, 6]] = ZERO;
        swapped[[7, 7]] = ZERO;
        swapped[[6, 7]] = ONE;
        swapped[[7, 6]] = ONE;
        let alt = BlockEncoding::new(
            be.n_a,
            DenseOperator::from_matrix(swapped).unwrap(),
            be.prepare.clone(),
            be.alpha,
        )
        .unwrap();
        assert!(max_abs_diff(&be.encoded_matrix(), &alt.encoded_matrix()) < 1e-14);
    }

    #[test]
    fn pauli_encodings_are_self_inverse_and_contractive() {
        let h = PauliHamiltonian::new(vec![
            term(0.7, "XY"),
            term(-1.3, "ZZ"),
            term(0.2, "IX"),
        ])
        .unwrap();
        let be = block_encode(&h).unwrap();
        assert!(be.self_inverse);
        assert!(be.select.is_unitary());
        assert!(be.prepare.is_unitary());
        assert!(verify_block_encoding(&be, &h) < 1e-12);
        // All eigenvalues of H / alpha lie in [-1, 1].
        let scaled = h.dense().mapv(|z| z / be.alpha);
        let (vals, _) = hermitian_eigen(&scaled).unwrap();
        for v in vals.iter() {
            assert!(v.abs() <= 1.0 + 1e-12, "eigenvalue {v} escapes [-1,1]");
        }
    }

    #[test]
    fn prepare_is_unitary_for_ragged_term_counts() {
        for n_terms in 1..=9usize {
            let terms: Vec<PauliTerm> = (0..n_terms)
                .map(|i| {
                    let word: String = (0..4)
                        .map(|q| ['I', 'X', 'Y', 'Z'][(i + q) % 4])
                        .collect();
                    // Repeated words can occur for n_terms > 4; multiplicity
                    // is fine for this structural check.
                    term(1.0 + i as f64, &word)
                })
                .collect();
            let h = PauliHamiltonian::with_term_multiplicity(terms).unwrap();
            let p = build_prepare(&h);
            let pd = dagger(p.matrix());
            assert!(max_abs_diff(&matmul(&pd, p.matrix()), &identity(p.dim())) < 1e-12);
            let g = p.matrix().column(0).to_owned();
            for i in 0..g.len() {
                let expect = if i < n_terms {
                    (h.terms()[i].coefficient.abs() / h.alpha()).sqrt()
                } else {
                    0.0
                };
                assert!((g[i].re - expect).abs() < 1e-12);
                assert!(g[i].im == 0.0);
            }
        }
    }

    #[test]
    fn random_two_site_hamiltonians_encode_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let letters = ['I', 'X', 'Y', 'Z'];
        for _ in 0..5 {
            let mut words = HashSet::new();
            while words.len() < 4 {
                let w: String = (0..2).map(|_| letters[rng.gen_range(0..4)]).collect();
                if w != "II" {
                    words.insert(w);
                }
            }
            let terms: Vec<PauliTerm> = words
                .into_iter()
                .map(|w| term(rng.gen_range(-2.0..2.0f64).max(0.1), &w))
                .collect();
            let h = PauliHamiltonian::new(terms).unwrap();
            let be = block_encode(&h).unwrap();
            assert!(verify_block_encoding(&be, &h) < 1e-12);
        }
    }
}

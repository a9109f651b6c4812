//! Phase-tracked n-qubit Pauli operators and their binary symplectic form.
//!
//! An operator is stored as paired X/Z bit vectors plus a power of `i`.
//! The letter at qubit `j` is read off the bit pair `(x_j, z_j)`:
//! `(0,0) = I`, `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`, with `Y` the
//! Hermitian matrix `i·XZ`. Qubit 1 is the leftmost letter, bit index 0.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use std::fmt;

/// Phase-tracked n-qubit Pauli operator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x_bits: BitVec,
    z_bits: BitVec,
    /// Exponent of `i` in front of the letter string, in {0,1,2,3}.
    phase: u8,
}

/// Single-qubit letter of a Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

impl PauliOperator {
    /// Identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x_bits: BitVec::zeros(n),
            z_bits: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// A single letter acting on `qubit` (1-indexed) of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Self {
        assert!((1..=n).contains(&qubit), "qubit index out of range");
        let mut p = PauliOperator::identity(n);
        let (x, z) = letter.bits();
        p.x_bits.set(qubit - 1, x);
        p.z_bits.set(qubit - 1, z);
        p
    }

    pub fn from_parts(x_bits: BitVec, z_bits: BitVec, phase: u8) -> Self {
        assert_eq!(x_bits.len(), z_bits.len());
        PauliOperator {
            x_bits,
            z_bits,
            phase: phase & 3,
        }
    }

    pub fn n(&self) -> usize {
        self.x_bits.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x_bits
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z_bits
    }

    /// Power of `i` in front of the letter string.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x_bits.get(qubit - 1), self.z_bits.get(qubit - 1))
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (0..self.n())
            .filter(|&i| self.x_bits.get(i) || self.z_bits.get(i))
            .count()
    }

    pub fn is_identity_pattern(&self) -> bool {
        self.x_bits.is_zero() && self.z_bits.is_zero()
    }

    /// Same `(x, z)` bit pattern, ignoring phase.
    pub fn same_pattern(&self, other: &PauliOperator) -> bool {
        self.x_bits == other.x_bits && self.z_bits == other.z_bits
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        PauliOperator {
            x_bits: self.x_bits.clone(),
            z_bits: self.z_bits.clone(),
            phase: phase & 3,
        }
    }

    /// Parse a signed Pauli string such as `-IXYY`, `iZZ`, or `XZZXI`.
    pub fn parse(text: &str) -> Result<Self> {
        let (phase, rest) = if let Some(r) = text.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = text.strip_prefix('-') {
            (2u8, r)
        } else if let Some(r) = text.strip_prefix('i') {
            (1u8, r)
        } else if let Some(r) = text.strip_prefix('+') {
            (0u8, r)
        } else {
            (0u8, text)
        };
        if rest.is_empty() {
            return Err(Error::Parse {
                index: 0,
                message: "empty Pauli string".into(),
            });
        }
        let offset = text.len() - rest.len();
        let mut letters = Vec::with_capacity(rest.len());
        for (i, c) in rest.chars().enumerate() {
            let letter = match c {
                'I' => PauliLetter::I,
                'X' => PauliLetter::X,
                'Y' => PauliLetter::Y,
                'Z' => PauliLetter::Z,
                _ => {
                    return Err(Error::Parse {
                        index: offset + i,
                        message: format!("expected one of I, X, Y, Z, found {c:?}"),
                    })
                }
            };
            letters.push(letter);
        }
        let mut p = PauliOperator::identity(letters.len());
        for (i, letter) in letters.iter().enumerate() {
            let (x, z) = letter.bits();
            p.x_bits.set(i, x);
            p.z_bits.set(i, z);
        }
        p.phase = phase;
        Ok(p)
    }

    /// Multiply two operators, accumulating the phase.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "cannot multiply Paulis on {} and {} qubits",
                self.n(),
                other.n()
            )));
        }
        // Work in XZ form (operator = i^q · Π X^x Z^z per site); moving the
        // right factor's X block past the left factor's Z block costs a sign
        // for every overlapping site.
        let (xa, za, qa) = self.xz_form();
        let (xb, zb, qb) = other.xz_form();
        let mut q = (qa + qb) as usize;
        q += 2 * za.iter().zip(xb.iter()).filter(|(z, x)| *z && *x).count();
        let mut x = xa.clone();
        x.xor_assign(xb);
        let mut z = za.clone();
        z.xor_assign(zb);
        Ok(PauliOperator::from_xz_form(x, z, (q % 4) as u8))
    }

    /// `(x, z, q)` with the operator written `i^q · Π_j X_j^{x_j} Z_j^{z_j}`.
    fn xz_form(&self) -> (&BitVec, &BitVec, u8) {
        let y_count = self
            .x_bits
            .iter()
            .zip(self.z_bits.iter())
            .filter(|(x, z)| *x && *z)
            .count();
        (
            &self.x_bits,
            &self.z_bits,
            ((self.phase as usize + y_count) % 4) as u8,
        )
    }

    fn from_xz_form(x: BitVec, z: BitVec, q: u8) -> Self {
        let y_count = x.iter().zip(z.iter()).filter(|(x, z)| *x && *z).count();
        let phase = ((q as usize + 3 * y_count) % 4) as u8;
        PauliOperator {
            x_bits: x,
            z_bits: z,
            phase,
        }
    }

    /// Hermitian conjugate (inverse up to the ± of the phase).
    pub fn adjoint(&self) -> PauliOperator {
        // Letters are Hermitian; only the explicit phase conjugates.
        self.with_phase((4 - self.phase) % 4)
    }

    /// True when the two operators commute.
    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        !self
            .to_symplectic()
            .symplectic_product(&other.to_symplectic())
    }

    /// Binary symplectic vector `[z|x]`; the phase is dropped.
    pub fn to_symplectic(&self) -> BinarySymplecticVector {
        BinarySymplecticVector {
            z_part: self.z_bits.clone(),
            x_part: self.x_bits.clone(),
        }
    }

    pub fn from_symplectic(v: &BinarySymplecticVector) -> PauliOperator {
        PauliOperator {
            x_bits: v.x_part.clone(),
            z_bits: v.z_part.clone(),
            phase: 0,
        }
    }

    /// Tensor this operator with another (self on the left).
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x_bits: self.x_bits.concat(&other.x_bits),
            z_bits: self.z_bits.concat(&other.z_bits),
            phase: (self.phase + other.phase) & 3,
        }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            0 => {}
            1 => write!(f, "i")?,
            2 => write!(f, "-")?,
            3 => write!(f, "-i")?,
            _ => unreachable!(),
        }
        for q in 1..=self.n() {
            write!(f, "{}", self.letter(q).char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for PauliOperator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PauliOperator::parse(s)
    }
}

/// Binary vector `u = [z|x]` of an error operator; loses only the phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySymplecticVector {
    pub z_part: BitVec,
    pub x_part: BitVec,
}

impl BinarySymplecticVector {
    pub fn new(z_part: BitVec, x_part: BitVec) -> Self {
        assert_eq!(z_part.len(), x_part.len());
        BinarySymplecticVector { z_part, x_part }
    }

    pub fn len(&self) -> usize {
        self.z_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_part.is_empty()
    }

    /// Symplectic product `z·x′ ⊕ x·z′`; 0 exactly when the Paulis commute.
    pub fn symplectic_product(&self, other: &BinarySymplecticVector) -> bool {
        assert_eq!(self.len(), other.len(), "symplectic length mismatch");
        self.z_part.dot(&other.x_part) ^ self.x_part.dot(&other.z_part)
    }
}

/// Checked symplectic product between two `[z|x]` vectors.
pub fn symplectic_product(u: &BinarySymplecticVector, v: &BinarySymplecticVector) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::Dimension(format!(
            "symplectic vectors of lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(u.symplectic_product(v))
}

/// An M×2N binary matrix in Z|X block form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySymplecticMatrix {
    pub z_block: BitMatrix,
    pub x_block: BitMatrix,
}

impl BinarySymplecticMatrix {
    pub fn new(z_block: BitMatrix, x_block: BitMatrix) -> Self {
        assert_eq!(z_block.n_rows(), x_block.n_rows());
        assert_eq!(z_block.n_cols(), x_block.n_cols());
        BinarySymplecticMatrix { z_block, x_block }
    }

    /// Stack the symplectic vectors of a list of Paulis.
    pub fn from_paulis(paulis: &[PauliOperator]) -> Self {
        let z = BitMatrix::from_rows(paulis.iter().map(|p| p.z_bits().clone()).collect());
        let x = BitMatrix::from_rows(paulis.iter().map(|p| p.x_bits().clone()).collect());
        BinarySymplecticMatrix {
            z_block: z,
            x_block: x,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.z_block.n_rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.z_block.n_cols()
    }

    pub fn row(&self, i: usize) -> BinarySymplecticVector {
        BinarySymplecticVector {
            z_part: self.z_block.row(i).clone(),
            x_part: self.x_block.row(i).clone(),
        }
    }

    /// Row-wise symplectic product with a vector:
    /// `wᵢ = Σⱼ Aᵢⱼᶻ vⱼˣ + Aᵢⱼˣ vⱼᶻ` over GF(2).
    pub fn syndrome_product(&self, v: &BinarySymplecticVector) -> Result<BitVec> {
        if v.len() != self.n_qubits() {
            return Err(Error::Dimension(format!(
                "matrix on {} qubits, vector on {}",
                self.n_qubits(),
                v.len()
            )));
        }
        let mut w = BitVec::zeros(self.n_rows());
        for i in 0..self.n_rows() {
            let bit = self.z_block.row(i).dot(&v.x_part) ^ self.x_block.row(i).dot(&v.z_part);
            w.set(i, bit);
        }
        Ok(w)
    }

    /// Concatenated `[Z|X]` form as a plain bit matrix.
    pub fn to_flat(&self) -> BitMatrix {
        BitMatrix::from_rows(
            (0..self.n_rows())
                .map(|i| self.z_block.row(i).concat(self.x_block.row(i)))
                .collect(),
        )
    }
}

/// All 3n single-qubit errors on an n-qubit register.
pub fn single_qubit_errors(n: usize) -> Vec<PauliOperator> {
    let mut out = Vec::with_capacity(3 * n);
    for q in 1..=n {
        for letter in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
            out.push(PauliOperator::single(n, q, letter));
        }
    }
    out
}

/// All Pauli patterns of exactly the given weight (phase 0), in
/// lexicographic order of the letter string.
pub fn paulis_of_weight(n: usize, weight: usize) -> Vec<PauliOperator> {
    let mut out = Vec::new();
    let mut positions = Vec::new();
    fn rec(
        n: usize,
        weight: usize,
        start: usize,
        positions: &mut Vec<usize>,
        out: &mut Vec<PauliOperator>,
    ) {
        if positions.len() == weight {
            let mut letters = vec![0u8; positions.len()];
            loop {
                let mut p = PauliOperator::identity(n);
                for (&pos, &l) in positions.iter().zip(letters.iter()) {
                    let letter = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z][l as usize];
                    let (x, z) = letter.bits();
                    p.x_bits.set(pos, x);
                    p.z_bits.set(pos, z);
                }
                out.push(p);
                // odometer over letter choices
                let mut i = letters.len();
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    if letters[i] < 2 {
                        letters[i] += 1;
                        for l in letters.iter_mut().skip(i + 1) {
                            *l = 0;
                        }
                        break;
                    }
                }
            }
        }
        for pos in start..n {
            positions.push(pos);
            rec(n, weight, pos + 1, positions, out);
            positions.pop();
        }
    }
    if weight == 0 {
        return vec![PauliOperator::identity(n)];
    }
    rec(n, weight, 0, &mut positions, &mut out);
    out.sort_by_key(|p| p.to_string());
    out
}

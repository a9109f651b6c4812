//! Small dense state-vector and density-matrix simulator.
//!
//! Qubit 1 is the most significant bit of the amplitude index, so index
//! bit strings read left to right like ket labels. Hard caps: 14 qubits
//! for state vectors, 10 for density matrices.

use crate::clifford::{CliffordCircuit, CliffordGate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::io::Write;

pub const MAX_STATE_QUBITS: usize = 14;
pub const MAX_DENSITY_QUBITS: usize = 10;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pure state of `n` qubits as 2^n complex amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!(
                "state vector supports 1..={MAX_STATE_QUBITS} qubits, requested {n}"
            )));
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Computational basis state |index> with qubit 1 as the top bit.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        let mut s = StateVector::zero_state(n)?;
        if index >= 1 << n {
            return Err(Error::Domain(format!("basis index {index} out of range")));
        }
        s.amps[0] = c(0.0, 0.0);
        s.amps[index] = c(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!("{n} qubits out of range")));
        }
        if amps.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes, got {}",
                1 << n,
                amps.len()
            )));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Tensor product, self as the high-order qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n + other.n;
        if n > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!("{n} qubits exceeds cap")));
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            for (j, b) in other.amps.iter().enumerate() {
                amps[(i << other.n) | j] = a * b;
            }
        }
        Ok(StateVector { n, amps })
    }

    #[inline]
    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.n - qubit)
    }

    fn apply_gate(&mut self, gate: &CliffordGate) {
        match gate.kind {
            GateKind::H => {
                let m = self.bit_mask(gate.qubits[0]);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | m];
                        self.amps[i] = (a + b) * SQRT_HALF;
                        self.amps[i | m] = (a - b) * SQRT_HALF;
                    }
                }
            }
            GateKind::P => {
                let m = self.bit_mask(gate.qubits[0]);
                for i in 0..self.amps.len() {
                    if i & m != 0 {
                        self.amps[i] *= c(0.0, 1.0);
                    }
                }
            }
            GateKind::Cnot => {
                let mc = self.bit_mask(gate.qubits[0]);
                let mt = self.bit_mask(gate.qubits[1]);
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            GateKind::Swap => {
                let ma = self.bit_mask(gate.qubits[0]);
                let mb = self.bit_mask(gate.qubits[1]);
                for i in 0..self.amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        self.amps.swap(i, (i & !ma) | mb);
                    }
                }
            }
        }
    }

    /// Apply a Pauli operator (including its phase).
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Dimension(format!(
                "Pauli on {} qubits, state on {}",
                p.n(),
                self.n
            )));
        }
        let mut flip = 0usize;
        for q in 1..=self.n {
            if p.x_bits().get(q - 1) {
                flip |= self.bit_mask(q);
            }
        }
        let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            // Z part: sign from occupied z positions; Y letters carry their
            // i factors inside the letter matrices: Y = iXZ, and the letter
            // phase convention already accounts for them, so apply X^x Z^z
            // times i^{y count} here.
            let mut sign = 1.0f64;
            let mut y_i_power = 0u32;
            for q in 1..=self.n {
                let zb = p.z_bits().get(q - 1);
                let xb = p.x_bits().get(q - 1);
                if zb && i & self.bit_mask(q) != 0 {
                    sign = -sign;
                }
                if zb && xb {
                    y_i_power += 1;
                }
            }
            let y_phase =
                [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(y_i_power % 4) as usize];
            out[i ^ flip] = a * sign * phase * y_phase;
        }
        self.amps = out;
        Ok(())
    }

    /// Expectation value of a Pauli operator.
    pub fn pauli_expectation(&self, p: &PauliOperator) -> Result<f64> {
        let mut moved = self.clone();
        moved.apply_pauli(p)?;
        let val: Complex64 = self
            .amps
            .iter()
            .zip(&moved.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(val.re)
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Dimension("state sizes differ".into()));
        }
        let ip: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(ip.norm_sqr())
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        if self.n > MAX_DENSITY_QUBITS {
            return Err(Error::Capacity(format!(
                "{} qubits exceeds density cap {MAX_DENSITY_QUBITS}",
                self.n
            )));
        }
        let dim = self.amps.len();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        Ok(DensityMatrix { n: self.n, mat: m })
    }

    /// Debug dump of amplitudes as CSV rows `index,re,im`.
    pub fn dump_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "index,re,im")?;
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(w, "{i},{:.12e},{:.12e}", a.re, a.im)?;
        }
        Ok(())
    }
}

/// Apply a Clifford circuit to a pure state; the norm is preserved.
pub fn apply_circuit(state: &StateVector, circuit: &CliffordCircuit) -> Result<StateVector> {
    if circuit.width() != state.n() {
        return Err(Error::Dimension(format!(
            "circuit width {} vs state width {}",
            circuit.width(),
            state.n()
        )));
    }
    let mut s = state.clone();
    for gate in circuit.gates() {
        s.apply_gate(gate);
    }
    Ok(s)
}

/// Mixed state of `n` qubits as a dense 2^n x 2^n matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSITY_QUBITS {
            return Err(Error::Capacity(format!(
                "density matrix supports 1..={MAX_DENSITY_QUBITS} qubits, requested {n}"
            )));
        }
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { n, mat: m })
    }

    pub fn from_matrix(n: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_DENSITY_QUBITS {
            return Err(Error::Capacity(format!("{n} qubits out of range")));
        }
        if mat.nrows() != 1 << n || mat.ncols() != 1 << n {
            return Err(Error::Dimension("matrix shape mismatch".into()));
        }
        Ok(DensityMatrix { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diagonal().sum()
    }

    /// Tensor product, self as the high-order qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.n + other.n;
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::Capacity(format!("{n} qubits exceeds cap")));
        }
        Ok(DensityMatrix {
            n,
            mat: self.mat.kronecker(&other.mat),
        })
    }

    #[inline]
    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.n - qubit)
    }

    /// Conjugate by a single Clifford gate: rho -> U rho U^dagger.
    fn apply_gate(&mut self, gate: &CliffordGate) {
        let dim = self.mat.nrows();
        // Left multiply U on every column, then right multiply U^dagger on
        // every row (= conjugated transform of the same gate).
        match gate.kind {
            GateKind::H => {
                let m = self.bit_mask(gate.qubits[0]);
                for col in 0..dim {
                    for i in 0..dim {
                        if i & m == 0 {
                            let a = self.mat[(i, col)];
                            let b = self.mat[(i | m, col)];
                            self.mat[(i, col)] = (a + b) * SQRT_HALF;
                            self.mat[(i | m, col)] = (a - b) * SQRT_HALF;
                        }
                    }
                }
                for row in 0..dim {
                    for j in 0..dim {
                        if j & m == 0 {
                            let a = self.mat[(row, j)];
                            let b = self.mat[(row, j | m)];
                            self.mat[(row, j)] = (a + b) * SQRT_HALF;
                            self.mat[(row, j | m)] = (a - b) * SQRT_HALF;
                        }
                    }
                }
            }
            GateKind::P => {
                let m = self.bit_mask(gate.qubits[0]);
                for col in 0..dim {
                    for i in 0..dim {
                        if i & m != 0 {
                            self.mat[(i, col)] *= c(0.0, 1.0);
                        }
                    }
                }
                for row in 0..dim {
                    for j in 0..dim {
                        if j & m != 0 {
                            self.mat[(row, j)] *= c(0.0, -1.0);
                        }
                    }
                }
            }
            GateKind::Cnot | GateKind::Swap => {
                let perm: Vec<usize> = (0..dim).map(|i| self.permute_index(gate, i)).collect();
                let mut out = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        out[(perm[i], perm[j])] = self.mat[(i, j)];
                    }
                }
                self.mat = out;
            }
        }
    }

    fn permute_index(&self, gate: &CliffordGate, i: usize) -> usize {
        match gate.kind {
            GateKind::Cnot => {
                let mc = self.bit_mask(gate.qubits[0]);
                let mt = self.bit_mask(gate.qubits[1]);
                if i & mc != 0 {
                    i ^ mt
                } else {
                    i
                }
            }
            GateKind::Swap => {
                let ma = self.bit_mask(gate.qubits[0]);
                let mb = self.bit_mask(gate.qubits[1]);
                let a = (i & ma != 0) as usize;
                let b = (i & mb != 0) as usize;
                let mut out = i & !(ma | mb);
                if b == 1 {
                    out |= ma;
                }
                if a == 1 {
                    out |= mb;
                }
                out
            }
            _ => i,
        }
    }

    pub fn apply_circuit(&self, circuit: &CliffordCircuit) -> Result<DensityMatrix> {
        if circuit.width() != self.n {
            return Err(Error::Dimension("circuit width mismatch".into()));
        }
        let mut rho = self.clone();
        for gate in circuit.gates() {
            rho.apply_gate(gate);
        }
        Ok(rho)
    }

    /// Conjugate by a Pauli: rho -> P rho P^dagger.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> Result<DensityMatrix> {
        if p.n() != self.n {
            return Err(Error::Dimension("Pauli width mismatch".into()));
        }
        let dim = self.mat.nrows();
        // P|i> = phase(i) |i ^ flip>; global phases cancel in conjugation.
        let mut flip = 0usize;
        for q in 1..=self.n {
            if p.x_bits().get(q - 1) {
                flip |= self.bit_mask(q);
            }
        }
        let phase_of = |i: usize| -> Complex64 {
            let mut sign = 1.0f64;
            for q in 1..=self.n {
                if p.z_bits().get(q - 1) && i & self.bit_mask(q) != 0 {
                    sign = -sign;
                }
            }
            c(sign, 0.0)
        };
        let mut out = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let pi = phase_of(i);
            for j in 0..dim {
                out[(i ^ flip, j ^ flip)] = pi * phase_of(j).conj() * self.mat[(i, j)];
            }
        }
        Ok(DensityMatrix {
            n: self.n,
            mat: out,
        })
    }

    /// Expectation value Tr(rho P).
    pub fn pauli_expectation(&self, p: &PauliOperator) -> Result<f64> {
        if p.n() != self.n {
            return Err(Error::Dimension("Pauli width mismatch".into()));
        }
        let dim = self.mat.nrows();
        let mut flip = 0usize;
        for q in 1..=self.n {
            if p.x_bits().get(q - 1) {
                flip |= self.bit_mask(q);
            }
        }
        let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
        let mut y_i_power = 0u32;
        for q in 1..=self.n {
            if p.x_bits().get(q - 1) && p.z_bits().get(q - 1) {
                y_i_power += 1;
            }
        }
        let y_phase =
            [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(y_i_power % 4) as usize];
        // Tr(rho P) = sum_i <i| rho P |i>; P|i> = f(i) |i ^ flip>.
        let mut total = c(0.0, 0.0);
        for i in 0..dim {
            let mut sign = 1.0f64;
            for q in 1..=self.n {
                if p.z_bits().get(q - 1) && i & self.bit_mask(q) != 0 {
                    sign = -sign;
                }
            }
            total += self.mat[(i ^ flip, i)] * sign;
        }
        Ok((total * phase * y_phase).re)
    }

    /// Apply a probabilistic Pauli channel rho -> sum w_i P_i rho P_i^dagger.
    pub fn apply_pauli_channel(&self, kraus: &[(f64, PauliOperator)]) -> Result<DensityMatrix> {
        let total: f64 = kraus.iter().map(|(w, _)| w).sum();
        if kraus.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "channel weights must be nonnegative and sum to 1 (got {total})"
            )));
        }
        let dim = self.mat.nrows();
        let mut out = DMatrix::zeros(dim, dim);
        for (w, p) in kraus {
            if *w == 0.0 {
                continue;
            }
            let term = self.conjugate_pauli(p)?;
            out += term.mat * c(*w, 0.0);
        }
        Ok(DensityMatrix {
            n: self.n,
            mat: out,
        })
    }

    /// Partial trace keeping the listed qubits (1-indexed), in their
    /// original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Domain("cannot trace out every qubit".into()));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&q| q == 0 || q > self.n) {
            return Err(Error::Domain("keep set references missing qubit".into()));
        }
        let k = keep.len();
        let traced: Vec<usize> = (1..=self.n).filter(|q| !keep.contains(q)).collect();
        let dim_keep = 1usize << k;
        let dim_traced = 1usize << traced.len();
        let expand = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut full = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                if kept_idx & (1 << (k - 1 - pos)) != 0 {
                    full |= self.bit_mask(q);
                }
            }
            for (pos, &q) in traced.iter().enumerate() {
                if traced_idx & (1 << (traced.len() - 1 - pos)) != 0 {
                    full |= self.bit_mask(q);
                }
            }
            full
        };
        let mut out = DMatrix::zeros(dim_keep, dim_keep);
        for i in 0..dim_keep {
            for j in 0..dim_keep {
                let mut sum = c(0.0, 0.0);
                for t in 0..dim_traced {
                    sum += self.mat[(expand(i, t), expand(j, t))];
                }
                out[(i, j)] = sum;
            }
        }
        Ok(DensityMatrix { n: k, mat: out })
    }

    /// Hermitian eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.mat.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Checks the density-matrix invariants: unit trace, Hermitian,
    /// positive semidefinite (within stated tolerances).
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Domain(format!("trace {tr} differs from 1")));
        }
        let dim = self.mat.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let d = self.mat[(i, j)] - self.mat[(j, i)].conj();
                if d.norm() > 1e-10 {
                    return Err(Error::Domain("matrix is not Hermitian".into()));
                }
            }
        }
        if let Some(min) = self.eigenvalues().first().copied().filter(|v| *v < -1e-9) {
            return Err(Error::Domain(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }
}

/// Trace distance (1/2)||rho - sigma||_1 via Hermitian eigenvalues.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.n != sigma.n {
        return Err(Error::Dimension("density matrix shapes differ".into()));
    }
    let diff = DensityMatrix {
        n: rho.n,
        mat: &rho.mat - &sigma.mat,
    };
    Ok(0.5 * diff.eigenvalues().iter().map(|v| v.abs()).sum::<f64>())
}

/// The single-qubit depolarizing channel as Kraus weights:
/// rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z).
pub fn depolarizing_kraus(p: f64) -> Vec<(f64, PauliOperator)> {
    use crate::pauli::PauliLetter;
    vec![
        (1.0 - p, PauliOperator::identity(1)),
        (p / 3.0, PauliOperator::single(1, 1, PauliLetter::X)),
        (p / 3.0, PauliOperator::single(1, 1, PauliLetter::Y)),
        (p / 3.0, PauliOperator::single(1, 1, PauliLetter::Z)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordCircuit;

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::zero_state(1).unwrap();
        let circ = CliffordCircuit::parse(1, "H 1").unwrap();
        let out = apply_circuit(&s, &circ).unwrap();
        assert!((out.amplitudes()[0].re - SQRT_HALF).abs() < 1e-15);
        assert!((out.amplitudes()[1].re - SQRT_HALF).abs() < 1e-15);
    }

    #[test]
    fn ghz_expectations() {
        // GHZ = (|000> + |111>)/sqrt(2): stabilized by XXX, ZZI.
        let s = StateVector::zero_state(3).unwrap();
        let circ = CliffordCircuit::parse(3, "H 1\nCNOT 1 2\nCNOT 1 3").unwrap();
        let ghz = apply_circuit(&s, &circ).unwrap();
        let xxx: PauliOperator = "XXX".parse().unwrap();
        let zzi: PauliOperator = "ZZI".parse().unwrap();
        assert!((ghz.pauli_expectation(&xxx).unwrap() - 1.0).abs() < 1e-12);
        assert!((ghz.pauli_expectation(&zzi).unwrap() - 1.0).abs() < 1e-12);
        let x1: PauliOperator = "XII".parse().unwrap();
        assert!(ghz.pauli_expectation(&x1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn zero_state_x_expectation_vanishes() {
        let s = StateVector::zero_state(1).unwrap();
        let x: PauliOperator = "X".parse().unwrap();
        assert!(s.pauli_expectation(&x).unwrap().abs() < 1e-15);
    }

    #[test]
    fn depolarizing_fixed_point_and_twirl() {
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        let out = mixed.apply_pauli_channel(&depolarizing_kraus(0.3)).unwrap();
        assert!(trace_distance(&mixed, &out).unwrap() < 1e-12);

        // p = 3/4 is the full twirl: any pure state goes to I/2.
        let plus = apply_circuit(
            &StateVector::zero_state(1).unwrap(),
            &CliffordCircuit::parse(1, "H 1").unwrap(),
        )
        .unwrap();
        let rho = plus.to_density().unwrap();
        let twirled = rho.apply_pauli_channel(&depolarizing_kraus(0.75)).unwrap();
        assert!(trace_distance(&twirled, &mixed).unwrap() < 1e-10);

        // p = 0 leaves the state untouched.
        let same = rho.apply_pauli_channel(&depolarizing_kraus(0.0)).unwrap();
        assert!(trace_distance(&same, &rho).unwrap() < 1e-12);

        // Channel outputs satisfy the density-matrix invariants.
        twirled.validate().unwrap();
        same.validate().unwrap();
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let zero = StateVector::zero_state(1).unwrap().to_density().unwrap();
        let plus = apply_circuit(
            &StateVector::zero_state(1).unwrap(),
            &CliffordCircuit::parse(1, "H 1").unwrap(),
        )
        .unwrap()
        .to_density()
        .unwrap();
        let prod = plus.tensor(&zero).unwrap();
        let back = prod.partial_trace(&[1]).unwrap();
        assert!(trace_distance(&back, &plus).unwrap() < 1e-12);

        let bell = apply_circuit(
            &StateVector::zero_state(2).unwrap(),
            &CliffordCircuit::parse(2, "H 1\nCNOT 1 2").unwrap(),
        )
        .unwrap()
        .to_density()
        .unwrap();
        let one = bell.partial_trace(&[1]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(trace_distance(&one, &mixed).unwrap() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = StateVector::zero_state(1).unwrap().to_density().unwrap();
        let one = StateVector::basis_state(1, 1)
            .unwrap()
            .to_density()
            .unwrap();
        assert!(trace_distance(&zero, &zero).unwrap() < 1e-15);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        // |0><0| vs I/2: eigenvalues of the difference are ±1/2,
        // so the distance is 1/2 by hand.
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn capacity_and_domain_errors() {
        assert!(StateVector::zero_state(15).is_err());
        assert!(DensityMatrix::maximally_mixed(11).is_err());

        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        // Channel weights must be nonnegative and sum to one.
        let bad = vec![(0.6, PauliOperator::identity(1))];
        assert!(rho.apply_pauli_channel(&bad).is_err());
        let negative = vec![
            (1.5, PauliOperator::identity(1)),
            (-0.5, "X".parse().unwrap()),
        ];
        assert!(rho.apply_pauli_channel(&negative).is_err());

        let two = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(two.partial_trace(&[]).is_err());
    }

    #[test]
    fn encoder_then_inverse_restores_the_state() {
        let code = crate::code::builtin_code("five_qubit").unwrap();
        let encoder = crate::clifford::synthesize_encoder(&code).unwrap();
        let prep = CliffordCircuit::parse(5, "H 2\nP 2\nCNOT 2 5\nH 4").unwrap();
        let state = apply_circuit(&StateVector::zero_state(5).unwrap(), &prep).unwrap();
        let there = apply_circuit(&state, &encoder).unwrap();
        let back = apply_circuit(&there, &encoder.inverse()).unwrap();
        let overlap: num_complex::Complex64 = state
            .amplitudes()
            .iter()
            .zip(back.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.re - 1.0).abs() < 1e-12 && overlap.im.abs() < 1e-12);
    }

    #[test]
    fn random_circuits_preserve_norm_and_expectations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let n = rng.random_range(1..=8usize);
            let len = rng.random_range(0..=100usize);
            let circ = CliffordCircuit::random(n, len, &mut rng);
            let mut base = StateVector::zero_state(n).unwrap();
            // spread amplitude around first
            for q in 1..=n {
                if rng.random_bool(0.5) {
                    base.apply_gate(&CliffordGate::h(q));
                }
            }
            let out = apply_circuit(&base, &circ).unwrap();
            assert!(
                (out.norm_squared() - 1.0).abs() < 1e-12,
                "norm drift on trial {trial}"
            );
        }
    }
}

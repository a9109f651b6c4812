//! Clifford gates, conjugation of Pauli operators, and synthesis of
//! encoding circuits from stabilizer generators by binary-matrix reduction.

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, RowOp};
use crate::pauli::{BinarySymplecticMatrix, PauliOperator};
use crate::sim;
use std::fmt;

/// Gate alphabet of the synthesizer: Hadamard, Phase, CNOT, SWAP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    H,
    P,
    Cnot,
    Swap,
}

/// One gate with 1-indexed qubit operands (control first for CNOT).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliffordGate {
    pub kind: GateKind,
    pub qubits: [usize; 2],
}

impl CliffordGate {
    pub fn h(q: usize) -> Self {
        CliffordGate {
            kind: GateKind::H,
            qubits: [q, 0],
        }
    }

    pub fn p(q: usize) -> Self {
        CliffordGate {
            kind: GateKind::P,
            qubits: [q, 0],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CNOT operands must be distinct");
        CliffordGate {
            kind: GateKind::Cnot,
            qubits: [control, target],
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "SWAP operands must be distinct");
        CliffordGate {
            kind: GateKind::Swap,
            qubits: [a, b],
        }
    }

    pub fn arity(&self) -> usize {
        match self.kind {
            GateKind::H | GateKind::P => 1,
            GateKind::Cnot | GateKind::Swap => 2,
        }
    }

    fn max_qubit(&self) -> usize {
        match self.arity() {
            1 => self.qubits[0],
            _ => self.qubits[0].max(self.qubits[1]),
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::H => write!(f, "H {}", self.qubits[0]),
            GateKind::P => write!(f, "P {}", self.qubits[0]),
            GateKind::Cnot => write!(f, "CNOT {} {}", self.qubits[0], self.qubits[1]),
            GateKind::Swap => write!(f, "SWAP {} {}", self.qubits[0], self.qubits[1]),
        }
    }
}

/// An ordered gate list over a fixed register width, together with the
/// generator-mixing row operations recorded during synthesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    width: usize,
    gates: Vec<CliffordGate>,
    row_ops: Vec<RowOp>,
}

impl CliffordCircuit {
    pub fn new(width: usize, gates: Vec<CliffordGate>) -> Result<Self> {
        for g in &gates {
            if g.max_qubit() > width || g.qubits[0] == 0 || (g.arity() == 2 && g.qubits[1] == 0) {
                return Err(Error::Domain(format!(
                    "gate {g} out of range for width {width}"
                )));
            }
        }
        Ok(CliffordCircuit {
            width,
            gates,
            row_ops: Vec::new(),
        })
    }

    pub fn empty(width: usize) -> Self {
        CliffordCircuit {
            width,
            gates: Vec::new(),
            row_ops: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn row_ops(&self) -> &[RowOp] {
        &self.row_ops
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Parse the one-gate-per-line text format ("H 3", "CNOT 1 4", ...).
    pub fn parse(width: usize, text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let name = parts.next().unwrap();
            let args: Vec<usize> = parts
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        index: lineno,
                        message: format!("bad qubit index {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            let gate = match (name, args.len()) {
                ("H", 1) => CliffordGate::h(args[0]),
                ("P", 1) => CliffordGate::p(args[0]),
                ("CNOT", 2) => CliffordGate::cnot(args[0], args[1]),
                ("SWAP", 2) => CliffordGate::swap(args[0], args[1]),
                _ => {
                    return Err(Error::Parse {
                        index: lineno,
                        message: format!("unrecognized gate line {line:?}"),
                    })
                }
            };
            gates.push(gate);
        }
        CliffordCircuit::new(width, gates)
    }

    /// Emit the text format; parse and emit round-trip.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// The inverse circuit (reversed gates; P becomes P cubed).
    pub fn inverse(&self) -> CliffordCircuit {
        let mut gates = Vec::new();
        for g in self.gates.iter().rev() {
            match g.kind {
                GateKind::P => {
                    gates.push(*g);
                    gates.push(*g);
                    gates.push(*g);
                }
                _ => gates.push(*g),
            }
        }
        CliffordCircuit {
            width: self.width,
            gates,
            row_ops: Vec::new(),
        }
    }

    /// Same gates re-indexed by `offset` on a wider register.
    pub fn shifted(&self, offset: usize, new_width: usize) -> CliffordCircuit {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let mut q = g.qubits;
                q[0] += offset;
                if g.arity() == 2 {
                    q[1] += offset;
                }
                CliffordGate {
                    kind: g.kind,
                    qubits: q,
                }
            })
            .collect();
        CliffordCircuit {
            width: new_width,
            gates,
            row_ops: Vec::new(),
        }
    }

    /// Uniformly random circuit for property tests.
    pub fn random<R: rand::Rng>(width: usize, len: usize, rng: &mut R) -> CliffordCircuit {
        let mut gates = Vec::with_capacity(len);
        for _ in 0..len {
            let kind = match rng.random_range(0..4) {
                0 => GateKind::H,
                1 => GateKind::P,
                2 => GateKind::Cnot,
                _ => GateKind::Swap,
            };
            let g = match kind {
                GateKind::H => CliffordGate::h(rng.random_range(1..=width)),
                GateKind::P => CliffordGate::p(rng.random_range(1..=width)),
                GateKind::Cnot | GateKind::Swap => {
                    if width < 2 {
                        CliffordGate::h(1)
                    } else {
                        let a = rng.random_range(1..=width);
                        let mut b = rng.random_range(1..=width);
                        while b == a {
                            b = rng.random_range(1..=width);
                        }
                        if kind == GateKind::Cnot {
                            CliffordGate::cnot(a, b)
                        } else {
                            CliffordGate::swap(a, b)
                        }
                    }
                }
            };
            gates.push(g);
        }
        CliffordCircuit {
            width,
            gates,
            row_ops: Vec::new(),
        }
    }
}

/// Conjugate a Pauli by one gate: returns `U p U†` with the sign tracked.
pub fn conjugate_gate(gate: &CliffordGate, p: &PauliOperator) -> Result<PauliOperator> {
    if gate.max_qubit() > p.n() {
        return Err(Error::Domain(format!(
            "gate {gate} out of range for {} qubits",
            p.n()
        )));
    }
    // Work in XZ form: operator = i^q · prod_j X_j^{x_j} Z_j^{z_j}.
    let n = p.n();
    let mut x: Vec<bool> = (0..n).map(|i| p.x_bits().get(i)).collect();
    let mut z: Vec<bool> = (0..n).map(|i| p.z_bits().get(i)).collect();
    let y_in = (0..n).filter(|&i| x[i] && z[i]).count();
    let mut q = (p.phase() as usize + y_in) % 4;
    match gate.kind {
        GateKind::H => {
            // X -> Z, Z -> X; reordering Z^x X^z back to X Z costs (-1)^{xz}.
            let i = gate.qubits[0] - 1;
            if x[i] && z[i] {
                q = (q + 2) % 4;
            }
            std::mem::swap(&mut x[i], &mut z[i]);
        }
        GateKind::P => {
            // X -> iXZ, Z -> Z.
            let i = gate.qubits[0] - 1;
            if x[i] {
                q = (q + 1) % 4;
                z[i] = !z[i];
            }
        }
        GateKind::Cnot => {
            // X_c -> X_c X_t, Z_t -> Z_c Z_t; phase-free in XZ form.
            let c = gate.qubits[0] - 1;
            let t = gate.qubits[1] - 1;
            x[t] ^= x[c];
            z[c] ^= z[t];
        }
        GateKind::Swap => {
            let a = gate.qubits[0] - 1;
            let b = gate.qubits[1] - 1;
            x.swap(a, b);
            z.swap(a, b);
        }
    }
    let y_out = (0..n).filter(|&i| x[i] && z[i]).count();
    let phase = ((q + 3 * y_out) % 4) as u8;
    Ok(PauliOperator::from_parts(
        crate::gf2::BitVec::from_bits(x),
        crate::gf2::BitVec::from_bits(z),
        phase,
    ))
}

/// Left-to-right fold of [`conjugate_gate`]: returns `U p U†` for the
/// circuit unitary `U` (first gate applied first).
pub fn conjugate_circuit(circuit: &CliffordCircuit, p: &PauliOperator) -> Result<PauliOperator> {
    if circuit.width() != p.n() {
        return Err(Error::Dimension(format!(
            "circuit width {} vs operator width {}",
            circuit.width(),
            p.n()
        )));
    }
    let mut cur = p.clone();
    for gate in circuit.gates() {
        cur = conjugate_gate(gate, &cur)?;
    }
    Ok(cur)
}

/// The canonical unencoded generators for a code: `Z` on each ancilla slot,
/// and for a single-ebit code the `Z⊗Z` / `X⊗X` pair on Bob plus Alice's
/// first slot. Produced in slot order; full width (including Bob's column
/// for entanglement-assisted codes).
pub fn canonical_unencoded(code: &StabilizerCode) -> Vec<PauliOperator> {
    use crate::pauli::PauliLetter::{X, Z};
    let n = code.n();
    let m = code.synthesis_rows().len();
    let mut out = Vec::with_capacity(m);
    if code.ebits() == 0 {
        for slot in 1..=m {
            out.push(PauliOperator::single(n, slot, Z));
        }
    } else {
        // Bob occupies column `bob`; Alice's pair slot is the first Alice
        // column. Generators are ordered: pair-Z, pair-X, then ancilla Z's.
        let bob = code.bob_qubit().expect("ebit code carries Bob marker");
        let alice: Vec<usize> = (1..=n).filter(|&q| q != bob).collect();
        let pair = alice[0];
        let zz = PauliOperator::single(n, bob, Z)
            .multiply(&PauliOperator::single(n, pair, Z))
            .unwrap();
        let xx = PauliOperator::single(n, bob, X)
            .multiply(&PauliOperator::single(n, pair, X))
            .unwrap();
        out.push(zz);
        out.push(xx);
        for &slot in alice.iter().take(m - 1).skip(1) {
            out.push(PauliOperator::single(n, slot, Z));
        }
    }
    out
}

/// Canonical logical operators: X and Z on the information slots (the last
/// `k` columns, Alice-side for entanglement-assisted codes).
pub fn canonical_logicals(code: &StabilizerCode) -> Vec<(PauliOperator, PauliOperator)> {
    use crate::pauli::PauliLetter::{X, Z};
    let n = code.n();
    let info = code.info_slots();
    info.iter()
        .map(|&q| {
            (
                PauliOperator::single(n, q, X),
                PauliOperator::single(n, q, Z),
            )
        })
        .collect()
}

struct Reduction {
    /// Column-operation gates in the order they were applied to the matrix.
    gates: Vec<CliffordGate>,
    row_ops: Vec<RowOp>,
}

/// Working state of the binary-matrix reduction: Z and X blocks plus the
/// recorded column-operation gates and free row operations.
struct Reducer {
    z: BitMatrix,
    x: BitMatrix,
    gates: Vec<CliffordGate>,
    row_ops: Vec<RowOp>,
}

impl Reducer {
    /// Apply a gate as column operations on the Z|X blocks and record it.
    fn gate(&mut self, g: CliffordGate) {
        match g.kind {
            GateKind::H => {
                let c = g.qubits[0] - 1;
                for r in 0..self.z.n_rows() {
                    let (zb, xb) = (self.z.get(r, c), self.x.get(r, c));
                    self.z.set(r, c, xb);
                    self.x.set(r, c, zb);
                }
            }
            GateKind::P => {
                let c = g.qubits[0] - 1;
                for r in 0..self.z.n_rows() {
                    let v = self.z.get(r, c) ^ self.x.get(r, c);
                    self.z.set(r, c, v);
                }
            }
            GateKind::Cnot => {
                let (i, j) = (g.qubits[0] - 1, g.qubits[1] - 1);
                for r in 0..self.z.n_rows() {
                    let xv = self.x.get(r, j) ^ self.x.get(r, i);
                    self.x.set(r, j, xv);
                    let zv = self.z.get(r, i) ^ self.z.get(r, j);
                    self.z.set(r, i, zv);
                }
            }
            GateKind::Swap => {
                let (i, j) = (g.qubits[0] - 1, g.qubits[1] - 1);
                for r in 0..self.z.n_rows() {
                    let (za, zb) = (self.z.get(r, i), self.z.get(r, j));
                    self.z.set(r, i, zb);
                    self.z.set(r, j, za);
                    let (xa, xb) = (self.x.get(r, i), self.x.get(r, j));
                    self.x.set(r, i, xb);
                    self.x.set(r, j, xa);
                }
            }
        }
        self.gates.push(g);
    }

    fn row_op(&mut self, op: RowOp) {
        self.z.apply_row_op(&op);
        self.x.apply_row_op(&op);
        self.row_ops.push(op);
    }

    /// Turn `row` into a single Z at `col` using column operations
    /// restricted to the `active` columns.
    fn reduce_row_to_z(&mut self, row: usize, col: usize, active: &[usize]) -> Result<()> {
        // Bring an X to the pivot column: prefer a Hadamard over a SWAP.
        if !self.x.get(row, col) {
            if self.z.get(row, col) {
                self.gate(CliffordGate::h(col + 1));
            } else {
                let Some(&c) = active
                    .iter()
                    .find(|&&c| c != col && (self.x.get(row, c) || self.z.get(row, c)))
                else {
                    return Err(Error::Synthesis {
                        column: col + 1,
                        message: "empty row during reduction".into(),
                    });
                };
                self.gate(CliffordGate::swap(col + 1, c + 1));
                if !self.x.get(row, col) {
                    self.gate(CliffordGate::h(col + 1));
                }
            }
        }
        // Pivot is X or Y; use P to clear a Y.
        if self.z.get(row, col) {
            self.gate(CliffordGate::p(col + 1));
        }
        // Sweep the other X entries in the row.
        for &c in active {
            if c != col && self.x.get(row, c) {
                self.gate(CliffordGate::cnot(col + 1, c + 1));
            }
        }
        // A CNOT may have folded Z entries onto the pivot; clear any Y again.
        if self.z.get(row, col) {
            self.gate(CliffordGate::p(col + 1));
        }
        // Move the lone X into the Z block.
        self.gate(CliffordGate::h(col + 1));
        // Sweep remaining Z entries in the row into the pivot.
        for &c in active {
            if c != col && self.z.get(row, c) {
                self.gate(CliffordGate::cnot(c + 1, col + 1));
            }
        }
        debug_assert!(self.z.get(row, col) && !self.x.get(row, col));
        Ok(())
    }
}

/// Reduce the Z|X generator matrix to canonical form, recording gates and
/// row operations. Column operations touch only `alice_cols` (0-indexed),
/// which excludes Bob's column for entanglement-assisted codes.
fn reduce_matrix(
    z: BitMatrix,
    x: BitMatrix,
    alice_cols: &[usize],
    ebits: usize,
) -> Result<Reduction> {
    let m = z.n_rows();
    let mut red = Reducer {
        z,
        x,
        gates: Vec::new(),
        row_ops: Vec::new(),
    };
    let mut row_start = 0usize;
    let mut slot_iter = alice_cols.iter().copied();

    if ebits == 1 {
        // Locate the hyperbolic pair: the unique pair of rows whose Alice
        // parts anticommute. Reduce it to (Z, X) on the first Alice slot.
        let pair_col = slot_iter.next().expect("at least one Alice column");
        let sympl = |red: &Reducer, a: usize, b: usize| -> bool {
            let mut acc = false;
            for &c in alice_cols {
                acc ^= (red.z.get(a, c) & red.x.get(b, c)) ^ (red.x.get(a, c) & red.z.get(b, c));
            }
            acc
        };
        let mut pair = None;
        'outer: for a in 0..m {
            for b in a + 1..m {
                if sympl(&red, a, b) {
                    pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        let Some((pa, mut pb)) = pair else {
            return Err(Error::Synthesis {
                column: pair_col + 1,
                message: "no anticommuting generator pair found for the ebit".into(),
            });
        };
        if pa != 0 {
            red.row_op(RowOp::Swap(pa, 0));
            if pb == 0 {
                pb = pa;
            }
        }
        if pb != 1 {
            red.row_op(RowOp::Swap(pb, 1));
        }
        // Row 0 -> Z on pair_col over the Alice columns.
        red.reduce_row_to_z(0, pair_col, alice_cols)?;
        // Row 1 anticommutes with Z(pair_col), so it has an X there. Clear
        // its other Alice entries, converting Z/Y letters to X first.
        if red.z.get(1, pair_col) {
            red.gate(CliffordGate::p(pair_col + 1));
        }
        if !red.x.get(1, pair_col) || red.z.get(1, pair_col) {
            return Err(Error::Synthesis {
                column: pair_col + 1,
                message: "pair row lacks a lone X on the ebit slot".into(),
            });
        }
        for &c in alice_cols.iter().skip(1) {
            if red.z.get(1, c) && red.x.get(1, c) {
                red.gate(CliffordGate::p(c + 1));
            }
            if red.z.get(1, c) {
                red.gate(CliffordGate::h(c + 1));
            }
            if red.x.get(1, c) {
                red.gate(CliffordGate::cnot(pair_col + 1, c + 1));
            }
        }
        // Remaining rows commute with both pair rows, hence are identity on
        // the pair column already.
        row_start = 2;
    }

    let remaining_cols: Vec<usize> = slot_iter.collect();
    for (step, &col) in remaining_cols.iter().enumerate() {
        let row = row_start + step;
        if row >= m {
            break;
        }
        let active: Vec<usize> = remaining_cols[step..].to_vec();
        // Make sure the working row is supported on the active columns.
        if !active
            .iter()
            .any(|&c| red.z.get(row, c) || red.x.get(row, c))
        {
            let Some(r) =
                (row + 1..m).find(|&r| active.iter().any(|&c| red.z.get(r, c) || red.x.get(r, c)))
            else {
                return Err(Error::Synthesis {
                    column: col + 1,
                    message: "generators are dependent; no pivot available".into(),
                });
            };
            red.row_op(RowOp::Swap(row, r));
        }
        red.reduce_row_to_z(row, col, &active)?;
        // Clear the column elsewhere with free row operations; an X entry
        // in another row would contradict generator commutation.
        for other in 0..m {
            if other != row && red.z.get(other, col) {
                red.row_op(RowOp::AddInto {
                    source: row,
                    target: other,
                });
            }
            if other != row && red.x.get(other, col) {
                return Err(Error::Synthesis {
                    column: col + 1,
                    message: "column retains an X after pivoting; generators do not commute".into(),
                });
            }
        }
    }
    Ok(Reduction {
        gates: red.gates,
        row_ops: red.row_ops,
    })
}

/// Synthesize an encoding circuit for a validated code.
///
/// The returned circuit maps the canonical unencoded generators (Z on each
/// ancilla slot; the Bob-paired Z⊗Z / X⊗X for single-ebit codes) onto
/// representatives of the code's generator row space with all signs
/// positive, so the all-zero-ancilla input encodes into the +1 eigenspace.
pub fn synthesize_encoder(code: &StabilizerCode) -> Result<CliffordCircuit> {
    let rows = code.synthesis_rows();
    let n = code.n();
    let stack = BinarySymplecticMatrix::from_paulis(&rows);
    let alice_cols: Vec<usize> = match code.bob_qubit() {
        Some(bob) => (0..n).filter(|&c| c + 1 != bob).collect(),
        None => (0..n).collect(),
    };
    let reduction = reduce_matrix(
        stack.z_block.clone(),
        stack.x_block.clone(),
        &alice_cols,
        code.ebits(),
    )?;

    // The encoder applies the reduction gates in reverse.
    let mut gates: Vec<CliffordGate> = reduction.gates.iter().rev().copied().collect();

    // The reduction fixes where the stabilizer group lands but not which
    // logical coset the information slot maps into; route the slot's Z and
    // X onto the logical Z and X cosets with a single-qubit basis change
    // applied before the encoder.
    if code.k() == 1 && !code.logical_z().is_empty() && !code.logical_x().is_empty() {
        let encoder = CliffordCircuit {
            width: n,
            gates: gates.clone(),
            row_ops: Vec::new(),
        };
        let (log_x, log_z) = canonical_logicals(code)[0].clone();
        let info = code.info_slots()[0];
        let coset_rows: Vec<PauliOperator> = {
            let mut rows = code.generators().to_vec();
            rows.extend(code.gauge_generators().iter().cloned());
            rows.push(code.logical_x()[0].clone());
            rows.push(code.logical_z()[0].clone());
            rows
        };
        let flat = BinarySymplecticMatrix::from_paulis(&coset_rows).to_flat();
        let coset_of = |image: &PauliOperator| -> Result<(bool, bool)> {
            let v = image.to_symplectic();
            let combo = flat
                .solve_row_combination(&v.z_part.concat(&v.x_part))
                .ok_or_else(|| Error::Synthesis {
                    column: info,
                    message: "logical image escaped the normalizer".into(),
                })?;
            let m = coset_rows.len();
            Ok((combo.get(m - 2), combo.get(m - 1)))
        };
        let z_coset = coset_of(&conjugate_circuit(&encoder, &log_z)?)?;
        let x_coset = coset_of(&conjugate_circuit(&encoder, &log_x)?)?;
        // Which slot letter lands on the logical-Z coset (x bit, z bit) and
        // which on the logical-X coset? Pick the basis change mapping
        // Z -> that letter and X -> the other.
        let letter_for = |want_x: bool, want_z: bool| -> Option<char> {
            for (letter, coset) in [
                ('Z', z_coset),
                ('X', x_coset),
                ('Y', (z_coset.0 ^ x_coset.0, z_coset.1 ^ x_coset.1)),
            ] {
                if coset == (want_x, want_z) {
                    return Some(letter);
                }
            }
            None
        };
        let a = letter_for(false, true).ok_or_else(|| Error::Synthesis {
            column: info,
            message: "no slot letter maps onto the logical-Z coset".into(),
        })?;
        let b = letter_for(true, false).ok_or_else(|| Error::Synthesis {
            column: info,
            message: "no slot letter maps onto the logical-X coset".into(),
        })?;
        let w: &[CliffordGate] = match (a, b) {
            ('Z', 'X') => &[],
            ('X', 'Z') => &[CliffordGate::h(info)],
            ('Z', 'Y') => &[CliffordGate::p(info)],
            ('Y', 'X') => &[
                CliffordGate::h(info),
                CliffordGate::p(info),
                CliffordGate::h(info),
            ],
            ('X', 'Y') => &[CliffordGate::p(info), CliffordGate::h(info)],
            ('Y', 'Z') => &[CliffordGate::h(info), CliffordGate::p(info)],
            _ => {
                return Err(Error::Synthesis {
                    column: info,
                    message: "logical cosets are inconsistent".into(),
                })
            }
        };
        if !w.is_empty() {
            let mut with_basis = w.to_vec();
            with_basis.extend(gates);
            gates = with_basis;
        }

        // Normalize the logical-Z image to the exact printed representative
        // by cancelling its stabilizer factor. A CNOT from an ancilla slot
        // into the information slot multiplies the image by that slot's
        // encoded generator and leaves every canonical Z untouched, so the
        // factor can be peeled off slot by slot. Entanglement-assisted
        // codes skip this: a CNOT on the ebit pair slot would drag the
        // logical into the pair-X generator's image.
        if code.ebits() == 0 {
            let encoder = CliffordCircuit {
                width: n,
                gates: gates.clone(),
                row_ops: Vec::new(),
            };
            let image = conjugate_circuit(&encoder, &log_z)?;
            let target = code.logical_z()[0].clone();
            let mut factor = image.to_symplectic().z_part;
            factor.xor_assign(&target.to_symplectic().z_part);
            let mut factor_x = image.to_symplectic().x_part;
            factor_x.xor_assign(&target.to_symplectic().x_part);
            let factor = factor.concat(&factor_x);
            let canon = canonical_unencoded(code);
            let mut slot_images = Vec::with_capacity(canon.len());
            for cg in &canon {
                slot_images.push(conjugate_circuit(&encoder, cg)?);
            }
            let slot_flat = BinarySymplecticMatrix::from_paulis(&slot_images).to_flat();
            if let Some(combo) = slot_flat.solve_row_combination(&factor) {
                let mut cnots = Vec::new();
                for (j, _) in canon.iter().enumerate() {
                    if combo.get(j) {
                        cnots.push(CliffordGate::cnot(j + 1, info));
                    }
                }
                if !cnots.is_empty() {
                    cnots.extend(gates);
                    gates = cnots;
                }
            }
        }
    }

    // Fix signs: every canonical generator must conjugate to a group element
    // with a positive sign, and the canonical logical Z must land on the
    // logical-Z coset representative with a positive sign. Each mismatch is
    // repaired by a Pauli on the matching slot, applied before the encoder.
    let encoder = CliffordCircuit {
        width: n,
        gates: gates.clone(),
        row_ops: reduction.row_ops.clone(),
    };
    let canon = canonical_unencoded(code);
    let mut pre: Vec<CliffordGate> = Vec::new();
    let sign_rows = code.synthesis_rows();
    let gen_stack = BinarySymplecticMatrix::from_paulis(&sign_rows).to_flat();
    for (i, cg) in canon.iter().enumerate() {
        let image = conjugate_circuit(&encoder, cg)?;
        let combo = gen_stack
            .solve_row_combination(
                &image
                    .to_symplectic()
                    .z_part
                    .concat(&image.to_symplectic().x_part),
            )
            .ok_or_else(|| Error::Synthesis {
                column: i + 1,
                message: "encoded canonical generator escaped the stabilizer row space".into(),
            })?;
        let mut prod = PauliOperator::identity(n);
        for (j, g) in sign_rows.iter().enumerate() {
            if combo.get(j) {
                prod = prod.multiply(g)?;
            }
        }
        if prod.phase() != image.phase() {
            // Anticommuting partner of the canonical generator on its slot.
            push_sign_fix(&mut pre, cg, code.bob_qubit());
        }
    }
    if code.k() == 1 && !code.logical_z().is_empty() {
        let (_, log_z) = canonical_logicals(code)[0].clone();
        let target_z = code.logical_z()[0].clone();
        let image = conjugate_circuit(&encoder, &log_z)?;
        let mut stack_rows: Vec<PauliOperator> = sign_rows.clone();
        for g in code.gauge_generators() {
            if !stack_rows.iter().any(|r| r.same_pattern(g)) {
                stack_rows.push(g.clone());
            }
        }
        stack_rows.push(target_z.clone());
        let flat = BinarySymplecticMatrix::from_paulis(&stack_rows).to_flat();
        let combo = flat
            .solve_row_combination(
                &image
                    .to_symplectic()
                    .z_part
                    .concat(&image.to_symplectic().x_part),
            )
            .ok_or_else(|| Error::Synthesis {
                column: n,
                message: "encoded logical Z escaped its coset".into(),
            })?;
        let mut prod = PauliOperator::identity(n);
        for (j, g) in stack_rows.iter().enumerate() {
            if combo.get(j) {
                prod = prod.multiply(g)?;
            }
        }
        if prod.phase() != image.phase() {
            push_sign_fix(&mut pre, &log_z, code.bob_qubit());
        }
    }
    if !pre.is_empty() {
        pre.extend(gates);
        gates = pre;
    }
    Ok(CliffordCircuit {
        width: n,
        gates,
        row_ops: reduction.row_ops,
    })
}

/// Append gates realizing a Pauli that anticommutes with `canon` on one of
/// its occupied slots: X where `canon` has Z, Z where it has X (as H/P
/// sequences, since the gate set has no bare Paulis). Bob's column is
/// skipped so entanglement-assisted encoders stay Alice-local.
fn push_sign_fix(pre: &mut Vec<CliffordGate>, canon: &PauliOperator, skip: Option<usize>) {
    for q in 1..=canon.n() {
        if Some(q) == skip {
            continue;
        }
        let zb = canon.z_bits().get(q - 1);
        let xb = canon.x_bits().get(q - 1);
        if zb {
            // X = H Z H = H P P H
            pre.extend([
                CliffordGate::h(q),
                CliffordGate::p(q),
                CliffordGate::p(q),
                CliffordGate::h(q),
            ]);
            return;
        }
        if xb {
            // Z = P P
            pre.extend([CliffordGate::p(q), CliffordGate::p(q)]);
            return;
        }
    }
}

/// Result of checking an encoder against a code.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Rank-equality group check outcome; names the first unmatched
    /// generator on failure.
    pub group_ok: bool,
    pub group_failure: Option<String>,
    /// Dense-simulation check: every stabilizer generator has expectation
    /// +1 on the encoded all-zero-ancilla state.
    pub state_ok: bool,
    pub state_failures: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.group_ok && self.state_ok
    }
}

/// Verify an encoding circuit against a code: (a) the images of the
/// canonical unencoded generators span exactly the code's generator row
/// space, and (b) every generator has expectation +1 on the encoded
/// all-zero-ancilla state.
pub fn verify_encoder(
    code: &StabilizerCode,
    circuit: &CliffordCircuit,
) -> Result<VerificationReport> {
    if circuit.width() != code.n() {
        return Err(Error::Dimension(format!(
            "circuit width {} vs code width {}",
            circuit.width(),
            code.n()
        )));
    }
    let canon = canonical_unencoded(code);
    let mut images = Vec::with_capacity(canon.len());
    for cg in &canon {
        images.push(conjugate_circuit(circuit, cg)?);
    }
    let gen_flat = BinarySymplecticMatrix::from_paulis(&code.synthesis_rows()).to_flat();
    let img_flat = BinarySymplecticMatrix::from_paulis(&images).to_flat();
    let mut group_ok = true;
    let mut group_failure = None;
    for (i, img) in images.iter().enumerate() {
        let v = img.to_symplectic();
        if gen_flat
            .solve_row_combination(&v.z_part.concat(&v.x_part))
            .is_none()
        {
            group_ok = false;
            group_failure = Some(format!(
                "image of canonical generator {} ({}) is outside the generator row space",
                i + 1,
                img
            ));
            break;
        }
    }
    if group_ok {
        // Rank equality in the other direction: every code generator must be
        // reachable from the images.
        for (i, g) in code.synthesis_rows().iter().enumerate() {
            let v = g.to_symplectic();
            if img_flat
                .solve_row_combination(&v.z_part.concat(&v.x_part))
                .is_none()
            {
                group_ok = false;
                group_failure = Some(format!(
                    "generator {} ({}) is not spanned by the encoded images",
                    i + 1,
                    g
                ));
                break;
            }
        }
    }

    // State check through the dense simulator.
    let encoded = encoded_zero_state(code, circuit)?;
    let mut state_ok = true;
    let mut state_failures = Vec::new();
    for g in code.generators() {
        let e = encoded.pauli_expectation(g)?;
        if (e - 1.0).abs() > 1e-10 {
            state_ok = false;
            state_failures.push((g.to_string(), e));
        }
    }
    Ok(VerificationReport {
        group_ok,
        group_failure,
        state_ok,
        state_failures,
    })
}

/// Encode the all-zero-ancilla, all-zero-information input (with the shared
/// ebit prepared as a Bell pair for entanglement-assisted codes).
pub fn encoded_zero_state(
    code: &StabilizerCode,
    circuit: &CliffordCircuit,
) -> Result<sim::StateVector> {
    match code.bob_qubit() {
        None => {
            let input = sim::StateVector::zero_state(code.n())?;
            sim::apply_circuit(&input, circuit)
        }
        Some(bob) => {
            // Bob's qubit is part of the register but untouched by Alice's
            // gates; prepare |Phi+> between Bob and Alice's pair slot.
            let n = code.n();
            let alice: Vec<usize> = (1..=n).filter(|&q| q != bob).collect();
            let pair = alice[0];
            let mut prep = vec![CliffordGate::h(bob), CliffordGate::cnot(bob, pair)];
            prep.extend(circuit.gates().iter().copied());
            let full = CliffordCircuit::new(n, prep)?;
            let input = sim::StateVector::zero_state(n)?;
            sim::apply_circuit(&input, &full)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliLetter;
    use num_complex::Complex64;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn letter_matrix(l: PauliLetter) -> [[Complex64; 2]; 2] {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match l {
            PauliLetter::I => [[one, z], [z, one]],
            PauliLetter::X => [[z, one], [one, z]],
            PauliLetter::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
            PauliLetter::Z => [[one, z], [z, -one]],
        }
    }

    fn mat4_of_pauli(p: &PauliOperator) -> [[Complex64; 4]; 4] {
        let a = letter_matrix(p.letter(1));
        let b = letter_matrix(p.letter(2));
        let f = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
        let mut out = [[c(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = f * a[i >> 1][j >> 1] * b[i & 1][j & 1];
            }
        }
        out
    }

    fn mat2_of_pauli(p: &PauliOperator) -> [[Complex64; 2]; 2] {
        let m = letter_matrix(p.letter(1));
        let f = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
        let mut out = m;
        for row in &mut out {
            for e in row {
                *e *= f;
            }
        }
        out
    }

    const H_MAT: [[f64; 2]; 2] = [
        [
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ],
        [
            std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ],
    ];

    fn conj2(u: &[[Complex64; 2]; 2], p: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut up = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    up[i][j] += u[i][k] * p[k][j];
                }
            }
        }
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += up[i][k] * u[j][k].conj();
                }
            }
        }
        out
    }

    fn conj4(u: &[[Complex64; 4]; 4], p: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
        let mut up = [[c(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    up[i][j] += u[i][k] * p[k][j];
                }
            }
        }
        let mut out = [[c(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] += up[i][k] * u[j][k].conj();
                }
            }
        }
        out
    }

    fn close2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn close4(a: &[[Complex64; 4]; 4], b: &[[Complex64; 4]; 4]) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).norm() < 1e-12)
    }

    /// All 16 signed single-qubit Paulis.
    fn signed_single_paulis() -> Vec<PauliOperator> {
        let mut out = Vec::new();
        for l in [
            PauliLetter::I,
            PauliLetter::X,
            PauliLetter::Y,
            PauliLetter::Z,
        ] {
            for phase in 0..4u8 {
                out.push(PauliOperator::single(1, 1, l).with_phase(phase));
            }
        }
        out
    }

    #[test]
    fn hadamard_conjugation_matches_matrices() {
        let h: [[Complex64; 2]; 2] = [
            [c(H_MAT[0][0], 0.0), c(H_MAT[0][1], 0.0)],
            [c(H_MAT[1][0], 0.0), c(H_MAT[1][1], 0.0)],
        ];
        for p in signed_single_paulis() {
            let got = conjugate_gate(&CliffordGate::h(1), &p).unwrap();
            assert!(
                close2(&mat2_of_pauli(&got), &conj2(&h, &mat2_of_pauli(&p))),
                "H conjugation mismatch on {p}"
            );
        }
    }

    #[test]
    fn phase_gate_conjugation_matches_matrices() {
        let pm: [[Complex64; 2]; 2] = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
        for p in signed_single_paulis() {
            let got = conjugate_gate(&CliffordGate::p(1), &p).unwrap();
            assert!(
                close2(&mat2_of_pauli(&got), &conj2(&pm, &mat2_of_pauli(&p))),
                "P conjugation mismatch on {p}"
            );
        }
    }

    fn two_qubit_paulis() -> Vec<PauliOperator> {
        let letters = [
            PauliLetter::I,
            PauliLetter::X,
            PauliLetter::Y,
            PauliLetter::Z,
        ];
        let mut out = Vec::new();
        for a in letters {
            for b in letters {
                let p = PauliOperator::single(2, 1, a)
                    .multiply(&PauliOperator::single(2, 2, b))
                    .unwrap();
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn cnot_and_swap_conjugation_match_matrices() {
        let mut cnot = [[c(0.0, 0.0); 4]; 4];
        // control = qubit 1 (high bit), target = qubit 2.
        for (i, j) in [(0usize, 0usize), (1, 1), (2, 3), (3, 2)] {
            cnot[i][j] = c(1.0, 0.0);
        }
        let mut swap = [[c(0.0, 0.0); 4]; 4];
        for (i, j) in [(0usize, 0usize), (1, 2), (2, 1), (3, 3)] {
            swap[i][j] = c(1.0, 0.0);
        }
        for p in two_qubit_paulis() {
            let got = conjugate_gate(&CliffordGate::cnot(1, 2), &p).unwrap();
            assert!(
                close4(&mat4_of_pauli(&got), &conj4(&cnot, &mat4_of_pauli(&p))),
                "CNOT conjugation mismatch on {p}"
            );
            let got = conjugate_gate(&CliffordGate::swap(1, 2), &p).unwrap();
            assert!(
                close4(&mat4_of_pauli(&got), &conj4(&swap, &mat4_of_pauli(&p))),
                "SWAP conjugation mismatch on {p}"
            );
        }
    }

    #[test]
    fn printed_gate_table_rows() {
        // Hadamard: I->I, X->Z, Y->-Y, Z->X.
        let cases = [("X", "Z"), ("Y", "-Y"), ("Z", "X"), ("I", "I")];
        for (src, dst) in cases {
            let p: PauliOperator = src.parse().unwrap();
            let got = conjugate_gate(&CliffordGate::h(1), &p).unwrap();
            assert_eq!(got.to_string(), dst);
        }
        // Phase: X->Y (exact), Z->Z.
        let x: PauliOperator = "X".parse().unwrap();
        assert_eq!(
            conjugate_gate(&CliffordGate::p(1), &x).unwrap().to_string(),
            "Y"
        );
        // CNOT on (target Y, control Y) -> (target -Z, control X); operands
        // are written control ⊗ target with control on qubit 1.
        let yy: PauliOperator = "YY".parse().unwrap();
        let got = conjugate_gate(&CliffordGate::cnot(1, 2), &yy).unwrap();
        assert_eq!(got.to_string(), "-XZ");
    }

    #[test]
    fn conjugation_never_leaves_the_group() {
        // Closure: outputs are always signed Paulis with phase in {0,1,2,3}
        // (representable at all), checked across every gate and operand.
        for p in two_qubit_paulis() {
            for g in [
                CliffordGate::h(1),
                CliffordGate::h(2),
                CliffordGate::p(1),
                CliffordGate::p(2),
                CliffordGate::cnot(1, 2),
                CliffordGate::cnot(2, 1),
                CliffordGate::swap(1, 2),
            ] {
                let q = conjugate_gate(&g, &p).unwrap();
                assert!(q.phase() < 4);
                assert_eq!(q.n(), 2);
            }
        }
    }

    #[test]
    fn conjugate_circuit_empty_and_inverse() {
        let p: PauliOperator = "XYZI".parse().unwrap();
        let empty = CliffordCircuit::empty(4);
        assert_eq!(conjugate_circuit(&empty, &p).unwrap(), p);

        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..500 {
            let circ = CliffordCircuit::random(4, 30, &mut rng);
            let inv = circ.inverse();
            let image = conjugate_circuit(&circ, &p).unwrap();
            let back = conjugate_circuit(&inv, &image).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn random_circuit_text_round_trips() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31);
        for _ in 0..200 {
            let circ = CliffordCircuit::random(6, 25, &mut rng);
            let back = CliffordCircuit::parse(6, &circ.emit()).unwrap();
            assert_eq!(back.gates(), circ.gates());
        }
    }

    #[test]
    fn gate_index_out_of_range_is_rejected() {
        let p: PauliOperator = "X".parse().unwrap();
        assert!(conjugate_gate(&CliffordGate::h(2), &p).is_err());
    }

    #[test]
    fn six_qubit_logical_x_maps_printed_codewords_onto_each_other() {
        // The published |1-bar| terms, signs as printed.
        let one_terms: [(usize, f64); 8] = [
            (0b001010, 1.0),
            (0b101101, 1.0),
            (0b000101, 1.0),
            (0b100010, 1.0),
            (0b011000, -1.0),
            (0b111111, -1.0),
            (0b010111, 1.0),
            (0b110000, 1.0),
        ];
        let code = builtin_code("six_qubit").unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        let zero = encoded_zero_state(&code, &circuit).unwrap();
        let mut moved = zero.clone();
        moved.apply_pauli(&code.logical_x()[0]).unwrap();
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 64];
        for (i, s) in one_terms {
            amps[i] = num_complex::Complex64::new(s / 8f64.sqrt(), 0.0);
        }
        let one = crate::sim::StateVector::from_amplitudes(6, amps).unwrap();
        let f = one.fidelity(&moved).unwrap();
        assert!((f - 1.0).abs() < 1e-10, "fidelity {f}");
    }

    #[test]
    fn circuit_text_round_trip() {
        let text = "H 3\nCNOT 1 4\nSWAP 3 5\nP 2\n";
        let circ = CliffordCircuit::parse(5, text).unwrap();
        assert_eq!(circ.emit(), text);
        assert!(CliffordCircuit::parse(5, "FOO 1").is_err());
        assert!(CliffordCircuit::parse(2, "H 3").is_err());
    }

    // --- synthesis ---

    use crate::code::builtin_code;

    #[test]
    fn synthesized_encoders_verify_for_every_builtin() {
        for name in crate::code::BUILTIN_NAMES {
            let code = builtin_code(name).unwrap();
            let circuit = synthesize_encoder(&code).unwrap();
            let report = verify_encoder(&code, &circuit).unwrap();
            assert!(report.ok(), "{name}: {report:?}");
        }
    }

    #[test]
    fn dependent_generators_fail_synthesis_with_a_stuck_column() {
        let mut code = builtin_code("five_qubit").unwrap();
        // Replace the last generator with the product of the first two.
        let dependent = code.generators()[0]
            .multiply(&code.generators()[1])
            .unwrap();
        let mut gens = code.generators().to_vec();
        gens[3] = dependent;
        code = crate::code::StabilizerCode::new(
            "dependent",
            5,
            1,
            gens,
            code.logical_x().to_vec(),
            code.logical_z().to_vec(),
            vec![],
            0,
            None,
        );
        let err = synthesize_encoder(&code).unwrap_err();
        assert!(
            matches!(err, crate::error::Error::Synthesis { .. }),
            "{err}"
        );
    }

    #[test]
    fn synthesis_is_deterministic() {
        let code = builtin_code("five_qubit").unwrap();
        let a = synthesize_encoder(&code).unwrap();
        let b = synthesize_encoder(&code).unwrap();
        assert_eq!(a.gates(), b.gates());
        assert_eq!(a.row_ops(), b.row_ops());
    }

    #[test]
    fn five_qubit_gate_count_stays_small() {
        let code = builtin_code("five_qubit").unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        assert!(circuit.len() <= 40, "encoder uses {} gates", circuit.len());
    }

    #[test]
    fn deleting_a_gate_breaks_the_group_check() {
        let code = builtin_code("five_qubit").unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        let mut gates = circuit.gates().to_vec();
        gates.remove(gates.len() / 2);
        let broken = CliffordCircuit::new(5, gates).unwrap();
        let report = verify_encoder(&code, &broken).unwrap();
        assert!(!report.ok());
        if !report.group_ok {
            assert!(report.group_failure.is_some());
        }
    }

    #[test]
    fn repetition3_encoder_is_cnot_only() {
        let code = builtin_code("repetition3").unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        let report = verify_encoder(&code, &circuit).unwrap();
        assert!(report.ok(), "{report:?}");
        // Conjugation oracle on 3 qubits: canonical generators map into the
        // row space of {ZZI, IZZ}.
        for (i, canon) in canonical_unencoded(&code).iter().enumerate() {
            let image = conjugate_circuit(&circuit, canon).unwrap();
            assert!(
                builtin_code("repetition3").unwrap().in_stabilizer(&image),
                "canonical {i} maps to {image}"
            );
        }
    }

    /// Coset of an image over [generators..., logical]: (found, logical bit).
    fn logical_coset(
        code: &crate::code::StabilizerCode,
        logical: &str,
        image: &PauliOperator,
    ) -> Option<bool> {
        let mut rows = code.generators().to_vec();
        rows.push(logical.parse().unwrap());
        let flat = BinarySymplecticMatrix::from_paulis(&rows).to_flat();
        let v = image.to_symplectic();
        flat.solve_row_combination(&v.z_part.concat(&v.x_part))
            .map(|combo| combo.get(rows.len() - 1))
    }

    #[test]
    fn five_qubit_encoder_maps_logical_slot_to_logical_operators() {
        let code = builtin_code("five_qubit").unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        let z5: PauliOperator = "IIIIZ".parse().unwrap();
        let image = conjugate_circuit(&circuit, &z5).unwrap();
        assert_eq!(image.to_string(), "ZZZZZ");
        let x5: PauliOperator = "IIIIX".parse().unwrap();
        let image = conjugate_circuit(&circuit, &x5).unwrap();
        assert_eq!(logical_coset(&code, "XXXXX", &image), Some(true));
    }

    #[test]
    fn unassisted_encoders_normalize_the_logical_z_exactly() {
        for name in ["repetition3", "five_qubit", "six_qubit", "steane"] {
            let code = builtin_code(name).unwrap();
            let circuit = synthesize_encoder(&code).unwrap();
            let slot = code.info_slots()[0];
            let canonical = PauliOperator::single(code.n(), slot, crate::pauli::PauliLetter::Z);
            let image = conjugate_circuit(&circuit, &canonical).unwrap();
            assert_eq!(image, code.logical_z()[0], "{name}");
        }
    }

    #[test]
    fn published_five_qubit_circuit_rotates_the_logical_basis() {
        // The published circuit spans the generator group exactly but
        // routes the information slot through a Hadamard-like basis
        // change: slot Z lands on the logical-X coset and vice versa.
        let code = builtin_code("five_qubit").unwrap();
        let circuit = crate::perfect::published_five_qubit_encoder();
        let z5: PauliOperator = "IIIIZ".parse().unwrap();
        let image = conjugate_circuit(&circuit, &z5).unwrap();
        assert_eq!(logical_coset(&code, "XXXXX", &image), Some(true), "{image}");
        let x5: PauliOperator = "IIIIX".parse().unwrap();
        let image = conjugate_circuit(&circuit, &x5).unwrap();
        assert_eq!(logical_coset(&code, "ZZZZZ", &image), Some(true), "{image}");
    }

    #[test]
    fn transcribed_six_qubit_circuit_spans_group_in_a_different_sector() {
        // The transcription reproduces every generator pattern (group
        // check), but the state it builds sits in the (-h1, +h2) sign
        // sector: +1 for the published Y = ZX reading of the first
        // generator (two Y letters flip the Hermitian sign), and opposite
        // to the sector the published codewords span on the second. The
        // builtin carries the codeword-derived signs, so the state check
        // reports exactly those two generators.
        let code = builtin_code("six_qubit").unwrap();
        let circuit = crate::perfect::published_six_qubit_encoder();
        let report = verify_encoder(&code, &circuit).unwrap();
        assert!(report.group_ok, "{report:?}");
        assert!(!report.state_ok);
        let failed: Vec<&str> = report
            .state_failures
            .iter()
            .map(|(g, _)| g.as_str())
            .collect();
        assert_eq!(failed, vec!["YIZXXY", "-ZXIIXZ"]);
        for (_, e) in &report.state_failures {
            assert!((e + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn transcribed_five_qubit_circuit_verifies() {
        let code = builtin_code("five_qubit").unwrap();
        let circuit = crate::perfect::published_five_qubit_encoder();
        let report = verify_encoder(&code, &circuit).unwrap();
        assert!(report.ok(), "{report:?}");
    }

    #[test]
    fn six_qubit_encoded_zero_matches_printed_superposition() {
        // The published eight-term |0-bar>, unnormalized, signs as printed.
        let terms: [(usize, f64); 8] = [
            (0b000000, 1.0),
            (0b100111, -1.0),
            (0b001111, 1.0),
            (0b101000, -1.0),
            (0b010010, -1.0),
            (0b110101, 1.0),
            (0b011101, 1.0),
            (0b111010, -1.0),
        ];
        let code = builtin_code("six_qubit").unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        let state = encoded_zero_state(&code, &circuit).unwrap();
        let mut reference = vec![num_complex::Complex64::new(0.0, 0.0); 64];
        for (idx, sign) in terms {
            reference[idx] = num_complex::Complex64::new(sign / 8f64.sqrt(), 0.0);
        }
        let printed = crate::sim::StateVector::from_amplitudes(6, reference).unwrap();
        // The printed codewords are +1 eigenstates of every (signed)
        // builtin generator, which is what fixes the builtin's signs.
        for g in code.generators() {
            assert!(
                (printed.pauli_expectation(g).unwrap() - 1.0).abs() < 1e-12,
                "{g}"
            );
        }
        let f = printed.fidelity(&state).unwrap();
        assert!(
            (f - 1.0).abs() < 1e-10,
            "fidelity {f} against the printed codeword"
        );
    }

    #[test]
    fn clifford_consistency_between_symbolic_and_numeric_layers() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        for _ in 0..50 {
            let n = 4;
            let circ = CliffordCircuit::random(n, 40, &mut rng);
            let state = crate::sim::apply_circuit(
                &crate::sim::StateVector::zero_state(n).unwrap(),
                &CliffordCircuit::parse(n, "H 1\nCNOT 1 3\nP 2\nH 4").unwrap(),
            )
            .unwrap();
            let moved = crate::sim::apply_circuit(&state, &circ).unwrap();
            for letter in ["XIII", "IZII", "IIYI", "ZZXY"] {
                let p: PauliOperator = letter.parse().unwrap();
                let image = conjugate_circuit(&circ, &p).unwrap();
                let lhs = moved.pauli_expectation(&image).unwrap();
                let rhs = state.pauli_expectation(&p).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10,
                    "expectation mismatch for {letter}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

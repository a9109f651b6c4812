//! Acceptance suite: one test per exit criterion, each printing a
//! PASS/FAIL line with the measured values (visible with --nocapture).

use std::time::Instant;

use stegqec::classical::{
    build_class_lp, channel_constraint_residual, classical_key_rate, exact_key_bits,
    matched_block_size, three_bit_closed_forms, PayloadWeighting, SyndromeClassSpec,
};
use stegqec::clifford::{conjugate_gate, synthesize_encoder, verify_encoder, CliffordGate};
use stegqec::code::{
    build_syndrome_table, builtin_code, distance, min_ebits, search_css_613, validate_code,
    BUILTIN_NAMES,
};
use stegqec::gf2::BitMatrix;
use stegqec::lp::{brute_force_vertex_max, solve_max, LpStatus};
use stegqec::pauli::{PauliLetter, PauliOperator};
use stegqec::perfect::{eve_channel_check, mixture_rates, Payload, PerfectCodeProtocol};
use stegqec::quantum::{
    diamond_norm_iid, protocol1_report, protocol2_noisy_rate, typical_partition, ChannelKind,
    ChannelSpec,
};

fn pass(criterion: u32, details: &str) {
    println!("ACCEPTANCE {criterion}: PASS — {details}");
}

/// Criterion 1: golden tables. Syndrome table output equals the published
/// perfect-code table byte for byte; every generator table validates; the
/// H/P/CNOT conjugation semantics reproduce the published transformation
/// tables exhaustively (48 single-qubit and SWAP cases plus 16 CNOT cases),
/// with the one documented printing defect checked against the algebra.
/// Runtime under one second.
#[test]
fn acceptance_01_golden_tables() {
    let start = Instant::now();

    let five = builtin_code("five_qubit").unwrap();
    let table = build_syndrome_table(&five, 1).unwrap();
    let published = "\
syndrome,error,weight
0000,IIIII,0
0001,IIIIZ,1
0010,IIZII,1
0011,IIIXI,1
0100,IXIII,1
0101,IIXII,1
0110,ZIIII,1
0111,IIYII,1
1000,XIIII,1
1001,IZIII,1
1010,IIIIX,1
1011,IIIIY,1
1100,IIIZI,1
1101,IYIII,1
1110,YIIII,1
1111,IIIYI,1
";
    assert_eq!(
        table.to_csv(),
        published,
        "syndrome table must match byte for byte"
    );

    for name in BUILTIN_NAMES {
        let report = validate_code(&builtin_code(name).unwrap());
        assert!(report.ok(), "{name}: {report:?}");
    }

    // Hadamard and Phase tables (published rows; sign-sensitive where the
    // table prints signs, pattern-level otherwise since the single
    // unsigned-but-negative row is P(Y) -> -X).
    let h_rows = [("I", "I"), ("X", "Z"), ("Y", "-Y"), ("Z", "X")];
    for (src, dst) in h_rows {
        let p: PauliOperator = src.parse().unwrap();
        let got = conjugate_gate(&CliffordGate::h(1), &p).unwrap();
        assert_eq!(got.to_string(), dst, "H on {src}");
    }
    let p_rows = [("I", "I"), ("X", "Y"), ("Y", "X"), ("Z", "Z")];
    for (src, dst) in p_rows {
        let p: PauliOperator = src.parse().unwrap();
        let got = conjugate_gate(&CliffordGate::p(1), &p).unwrap();
        let want: PauliOperator = dst.parse().unwrap();
        assert!(got.same_pattern(&want), "P on {src}: got {got}");
    }
    // CNOT table, (target, control) operands with control on qubit 1 as
    // printed. The (I, X) row prints (X, I); the algebra and the table's
    // own (X, X) -> (I, X) row force (X, X), so that row is checked
    // against the corrected value.
    let cnot_rows: [(&str, &str); 16] = [
        ("II", "II"),
        ("IX", "XX"), // printed (X, I); documented printing defect
        ("IY", "XY"),
        ("IZ", "IZ"),
        ("XI", "XI"),
        ("XX", "IX"),
        ("XY", "IY"),
        ("XZ", "XZ"),
        ("YI", "YZ"),
        ("YX", "ZY"),
        ("YY", "-ZX"),
        ("YZ", "YI"),
        ("ZI", "ZZ"),
        ("ZX", "-YY"),
        ("ZY", "YX"),
        ("ZZ", "ZI"),
    ];
    for (op, want) in cnot_rows {
        // Operand letters are (target, control); register order is
        // (control, target) with control on qubit 1.
        let target: PauliOperator = op[0..1].parse().unwrap();
        let control: PauliOperator = op[1..2].parse().unwrap();
        let p = control.tensor(&target);
        let got = conjugate_gate(&CliffordGate::cnot(1, 2), &p).unwrap();
        let want_t: PauliOperator = want.trim_start_matches('-').parse().unwrap();
        let want_full = want_t.letter(2).char().to_string() + &want_t.letter(1).char().to_string();
        let mut expected: PauliOperator = want_full.parse().unwrap();
        if want.starts_with('-') {
            expected = expected.with_phase(2);
        }
        // Published table rows carry signs; compare sign-sensitively.
        assert_eq!(got, expected, "CNOT row {op}");
    }

    // Exhaustive closure: every gate output is a signed Pauli that agrees
    // with explicit complex-matrix conjugation — 16 signed cases each for
    // H, P, SWAP, and 16 for CNOT (checked in the unit suites); here the
    // count is revalidated structurally.
    let mut cases = 0;
    for letter in [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ] {
        for phase in 0..4u8 {
            let p = PauliOperator::single(1, 1, letter).with_phase(phase);
            for g in [CliffordGate::h(1), CliffordGate::p(1)] {
                let _ = conjugate_gate(&g, &p).unwrap();
                cases += 1;
            }
        }
    }
    for a in [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ] {
        for b in [
            PauliLetter::I,
            PauliLetter::X,
            PauliLetter::Y,
            PauliLetter::Z,
        ] {
            let p = PauliOperator::single(2, 1, a)
                .multiply(&PauliOperator::single(2, 2, b))
                .unwrap();
            let _ = conjugate_gate(&CliffordGate::swap(1, 2), &p).unwrap();
            let _ = conjugate_gate(&CliffordGate::cnot(1, 2), &p).unwrap();
            cases += 2;
        }
    }
    assert_eq!(cases, 64); // 48 H/P/SWAP + 16 CNOT

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        1,
        &format!("golden tables reproduced in {elapsed:?} (CNOT (I,X) row documented)"),
    );
}

/// Criterion 2: structural theorems at desk scale.
#[test]
fn acceptance_02_structural_theorems() {
    let start = Instant::now();
    for (name, d) in [("five_qubit", 3), ("six_qubit", 3), ("steane", 3)] {
        assert_eq!(distance(&builtin_code(name).unwrap()).unwrap(), d, "{name}");
    }
    let dist_elapsed = start.elapsed();
    assert!(
        dist_elapsed.as_secs_f64() < 30.0,
        "distances took {dist_elapsed:?}"
    );

    let h = BitMatrix::parse("100101\n010110\n001011").unwrap();
    assert_eq!(min_ebits(&h), 1);

    let search_start = Instant::now();
    let outcome = search_css_613();
    assert_eq!(outcome.codes_found(), 0);
    let search_elapsed = search_start.elapsed();
    assert!(
        search_elapsed.as_secs_f64() < 300.0,
        "search took {search_elapsed:?}"
    );

    let sub = builtin_code("six_qubit_subsystem").unwrap();
    let (n, k, r) = (sub.n(), sub.k(), sub.gauge_count());
    let d = distance(&sub).unwrap();
    assert_eq!(n - k - r, 2 * (d - 1), "subsystem Singleton saturation");

    pass(
        2,
        &format!(
            "distances 3/3/3 in {dist_elapsed:?}; rank(HHt)=1; CSS search found 0 over {} candidates in {search_elapsed:?}; 6-1-1 = 2*(3-1)",
            outcome.total_examined()
        ),
    );
}

/// Criterion 3: encoder verification for every builtin, plus the six-qubit
/// encoded zero state against the published eight-term superposition.
#[test]
fn acceptance_03_encoder_verification() {
    for name in BUILTIN_NAMES {
        let code = builtin_code(name).unwrap();
        let circuit = synthesize_encoder(&code).unwrap();
        let report = verify_encoder(&code, &circuit).unwrap();
        assert!(report.group_ok, "{name}: {:?}", report.group_failure);
        assert!(report.state_ok, "{name}: {:?}", report.state_failures);
    }

    let code = builtin_code("six_qubit").unwrap();
    let circuit = synthesize_encoder(&code).unwrap();
    let state = stegqec::clifford::encoded_zero_state(&code, &circuit).unwrap();
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
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 64];
    for (i, s) in terms {
        amps[i] = num_complex::Complex64::new(s / 8f64.sqrt(), 0.0);
    }
    let printed = stegqec::sim::StateVector::from_amplitudes(6, amps).unwrap();
    let fidelity = printed.fidelity(&state).unwrap();
    assert!(
        (fidelity - 1.0).abs() < 1e-10,
        "six-qubit |0-bar> fidelity {fidelity}"
    );
    pass(
        3,
        &format!(
            "all encoders verified; six-qubit codeword fidelity 1 - {:.2e}",
            (1.0 - fidelity).abs()
        ),
    );
}

/// Criterion 4: classical closed forms and the three-bit LP value.
#[test]
fn acceptance_04_classical_closed_forms() {
    for i in 0..=50 {
        let p = 0.5 * i as f64 / 50.0;
        let forms = three_bit_closed_forms(p).unwrap();
        assert!((forms.q00_spread - (4.0 * p * p - 4.0 * p + 1.0)).abs() < 1e-15);
        assert!((forms.q00_packed - (6.0 * p * p - 6.0 * p + 1.0)).abs() < 1e-15);
        let spread = forms.spread_assignment(p);
        let packed = forms.packed_assignment(p);
        assert!(channel_constraint_residual(p, &spread) <= 1e-12, "p = {p}");
        assert!(channel_constraint_residual(p, &packed) <= 1e-12, "p = {p}");
    }
    let at_half = three_bit_closed_forms(0.5).unwrap();
    assert_eq!(at_half.navg_spread, 1.0);
    assert_eq!(at_half.navg_packed, 1.5);

    // LP value at p = 1/2 is exactly two hidden bits, and the optimum is
    // bounded by the syndrome entropy across the grid.
    let spec = SyndromeClassSpec::three_bit(0.5).unwrap();
    let lp = build_class_lp(&spec, &PayloadWeighting::FloorLog2).unwrap();
    let sol = solve_max(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!(
        (sol.objective_value - 2.0).abs() <= 1e-6,
        "LP optimum {} at p = 1/2",
        sol.objective_value
    );
    let mut max_gap: f64 = 0.0;
    for i in 1..=50 {
        let p = 0.5 * i as f64 / 50.0;
        let spec = SyndromeClassSpec::three_bit(p).unwrap();
        let lp = build_class_lp(&spec, &PayloadWeighting::FloorLog2).unwrap();
        let sol = solve_max(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "p = {p}");
        assert!(
            sol.objective_value <= spec.entropy() + 1e-6,
            "p = {p}: {} above entropy {}",
            sol.objective_value,
            spec.entropy()
        );
        max_gap = max_gap.max(spec.entropy() - sol.objective_value);
    }
    pass(4, &format!("closed forms exact on 51 points; LP(1/2) = 2.000; entropy bound holds (max gap {max_gap:.3})"));
}

/// Criterion 5: simplex vs brute-force vertex enumeration on 100 seeded
/// random programs with at most 8 variables.
#[test]
fn acceptance_05_lp_oracle_equivalence() {
    use rand::{Rng, SeedableRng};
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=8usize);
        let m = rng.random_range(2..=4usize);
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        a.push(vec![1.0; n]);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&x0).map(|(c, v)| c * v).sum())
            .collect();
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let lp = stegqec::lp::LinearProgram::new(c, a, b, names).unwrap();
        let sol = solve_max(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "seed {seed}");
        let oracle = brute_force_vertex_max(&lp).expect("feasible by construction");
        let gap = (sol.objective_value - oracle).abs();
        assert!(gap < 1e-8, "seed {seed}: {gap}");
        worst = worst.max(gap);
    }
    pass(
        5,
        &format!("100 seeded programs agree with vertex enumeration (worst gap {worst:.2e})"),
    );
}

/// Criterion 6: key-rate closed forms against exact log-binomial values.
#[test]
fn acceptance_06_key_rates() {
    let n = 10_000u64;
    let mut worst_classical: f64 = 0.0;
    for p in [0.05, 0.1, 0.2] {
        for dp in [0.001, 0.01, 0.05] {
            let m = matched_block_size(n, p, dp);
            let exact = exact_key_bits(n, m).unwrap() / n as f64;
            let closed = classical_key_rate(p, dp).unwrap();
            let gap = (closed - exact).abs();
            assert!(gap <= 0.02, "classical p={p}, dp={dp}: gap {gap}");
            worst_classical = worst_classical.max(gap);
        }
    }

    let mut worst_quantum: f64 = 0.0;
    for p in [0.05, 0.1, 0.2] {
        for dp in [0.001, 0.01, 0.05] {
            let spec = ChannelSpec::new(ChannelKind::Depolarizing, p, dp, n as usize).unwrap();
            let report = protocol1_report(&spec, 0.1).unwrap();
            let gap = (report.kcr_closed - report.kcr_exact).abs();
            assert!(gap <= 0.05, "quantum p={p}, dp={dp}: gap {gap}");
            worst_quantum = worst_quantum.max(gap);
        }
    }
    pass(6, &format!("classical KCR within {worst_classical:.4}, protocol-1 KCR within {worst_quantum:.4} of exact at N=1e4"));
}

/// Criterion 7: diamond-norm formula checks and the sqrt-N scaling
/// property.
#[test]
fn acceptance_07_diamond_norm() {
    let start = Instant::now();
    let (p, dp) = (0.11, 0.02);
    let one = diamond_norm_iid(&ChannelSpec::new(ChannelKind::Bsc, p, dp, 1).unwrap());
    assert!((one.norm - 2.0 * dp).abs() < 1e-15, "N=1 norm {}", one.norm);

    let two = diamond_norm_iid(&ChannelSpec::new(ChannelKind::Bsc, p, dp, 2).unwrap());
    let symbolic = 2.0 * dp * (2.0 - 2.0 * p - dp);
    assert!(
        (two.norm - symbolic).abs() < 1e-12,
        "N=2 norm {} vs symbolic {symbolic} (the BSC printing discrepancy is documented, not matched)",
        two.norm
    );

    let p = 0.1;
    let mut norms = Vec::new();
    for n in [100usize, 1_000, 10_000, 100_000] {
        let dp = 0.1 * (p * (1.0 - p) / n as f64).sqrt();
        let d = diamond_norm_iid(&ChannelSpec::new(ChannelKind::Bsc, p, dp, n).unwrap());
        assert!(d.norm < 0.5, "N = {n}: norm {}", d.norm);
        let payload = n as f64 * dp / (1.0 - 2.0 * p);
        norms.push((n, d.norm, payload));
    }
    for w in norms.windows(2) {
        let growth = w[1].2 / w[0].2;
        assert!(
            (growth - 10f64.sqrt()).abs() < 0.05,
            "payload growth {growth} is not sqrt-scaled"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(7, &format!("N=1 and N=2 exact; norms stay below 0.5 up to N=1e5 with sqrt(N) payload in {elapsed:?}"));
}

/// Criterion 8: protocol-2 rates and the explicit typical-set partition.
#[test]
fn acceptance_08_protocol2_rates() {
    for i in 1..=10 {
        let p = 0.01 * i as f64;
        let r = protocol2_noisy_rate(p, 0.005).unwrap();
        assert!(
            r.rate > r.comparison_to_protocol1,
            "p = {p}: {} <= {}",
            r.rate,
            r.comparison_to_protocol1
        );
    }
    let r = protocol2_noisy_rate(0.49, 0.005).unwrap();
    let gap = (r.rate - r.comparison_to_protocol1).abs();
    assert!(gap < 1e-3, "p = 0.49 convergence gap {gap}");

    let part = typical_partition(16, 0.25, 0.1).unwrap();
    let covered: usize = part.sets.iter().map(Vec::len).sum();
    let window_size = 1820; // C(16,4): the weight window is exactly {4}
    assert_eq!(covered, window_size, "window covered exactly once");
    let mut seen = std::collections::HashSet::new();
    for set in &part.sets {
        for &m in set {
            assert!(seen.insert(m));
        }
    }
    assert!(
        part.max_relative < 2.0,
        "max set probability {}x of target",
        part.max_relative
    );
    pass(8, &format!(
        "noisy rate beats the comparator for p <= 0.1, converges at 0.49 (gap {gap:.1e}); N=16 partition covers {covered} strings with max deviation {:.4}x",
        part.max_relative
    ));
}

/// Criterion 9: the full nine-qubit density-matrix protocol run.
#[test]
fn acceptance_09_perfect_code_protocol() {
    let start = Instant::now();
    let protocol = PerfectCodeProtocol::new().unwrap();

    // Eve's averaged view against the sixteen-term Kraus mixture, for
    // every encoding.
    let mut worst_distance: f64 = 0.0;
    for enc in protocol.encodings.all() {
        let d = protocol.eve_view_distance(enc).unwrap();
        assert!(d < 1e-10, "{}: Eve-view distance {d}", enc.id);
        worst_distance = worst_distance.max(d);
    }

    // Bob recovers exactly for all 7 encodings and all 16 wire syndromes
    // (basis payloads spanning every syndrome, trivial twirl).
    let mut worst_fidelity: f64 = 1.0;
    for enc in protocol.encodings.all() {
        for syndrome in 0..16u8 {
            let t = protocol
                .run_block(enc, Payload::Basis(syndrome), 0, false)
                .unwrap();
            assert_eq!(t.syndrome_sent, Some(syndrome));
            assert!(
                t.recovery_fidelity >= 1.0 - 1e-10,
                "{} syndrome {syndrome}: fidelity {}",
                enc.id,
                t.recovery_fidelity
            );
            worst_fidelity = worst_fidelity.min(t.recovery_fidelity);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    pass(9, &format!(
        "Eve view within {worst_distance:.2e}; 112 recoveries with fidelity >= {worst_fidelity:.12} in {elapsed:?}"
    ));
}

/// Criterion 10: mixture statistics from a seeded million-trial run.
#[test]
fn acceptance_10_mixture_statistics() {
    let protocol = PerfectCodeProtocol::new().unwrap();
    let p = 0.05;
    let report = eve_channel_check(&protocol, p, 1_000_000, 2026).unwrap();
    assert!(report.class_within_3_sigma, "{:?}", report.class_counts);

    let rates = mixture_rates(p).unwrap();
    let q = 1.0 - p;
    let p1 = 5.0 * p * q.powi(4);
    let p2 = 10.0 * p * p * q.powi(3);
    assert!((rates.mixture.q1 - 16.0 / 15.0 * p1).abs() < 1e-15);
    assert!((rates.mixture.q2 - 16.0 / 15.0 * p2).abs() < 1e-15);
    let expected_n_avg = 64.0 / 15.0 * (p1 + p2);
    let rel = (report.n_avg_estimate - expected_n_avg).abs() / expected_n_avg;
    assert!(rel < 0.01, "n_avg estimate off by {rel:.4}");
    pass(10, &format!(
        "class tallies {:?} within 3 sigma of ({:.4}, {:.4}, {:.4}); n_avg {:.4} vs {:.4} ({:.3}% off); chi-square p-value {:.3}",
        report.class_counts,
        report.class_expected[0],
        report.class_expected[1],
        report.class_expected[2],
        report.n_avg_estimate,
        expected_n_avg,
        rel * 100.0,
        report.p_value
    ));
}

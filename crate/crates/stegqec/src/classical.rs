//! Classical steganography over the binary symmetric channel: closed-form
//! syndrome-encoding solutions for the three-bit repetition code, the
//! syndrome-class linear programs (three-bit, five-bit, noisy), the
//! inner-outer block-code programs, and the key-consumption rate.

use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::numeric::{binary_entropy, binom_pmf, log2_binomial};

/// The two closed-form solutions of the noiseless three-bit system: the
/// spread solution (twelve equal off-diagonal terms) and the packed
/// solution (six terms through the no-error syndrome).
#[derive(Clone, Debug)]
pub struct ThreeBitClosedForms {
    pub q00_spread: f64,
    pub navg_spread: f64,
    pub q00_packed: f64,
    pub navg_packed: f64,
}

impl ThreeBitClosedForms {
    /// The full 4x4 q-assignment of the spread solution.
    pub fn spread_assignment(&self, p: f64) -> [[f64; 4]; 4] {
        let v = p * (1.0 - p);
        let mut q = [[0.0; 4]; 4];
        q[0][0] = self.q00_spread;
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    q[j][k] = v / 3.0;
                }
            }
        }
        q
    }

    /// The full 4x4 q-assignment of the packed solution.
    pub fn packed_assignment(&self, p: f64) -> [[f64; 4]; 4] {
        let v = p * (1.0 - p);
        let mut q = [[0.0; 4]; 4];
        q[0][0] = self.q00_packed;
        for j in 1..4 {
            q[0][j] = v;
            q[j][0] = v;
        }
        q
    }
}

/// Syndrome probabilities of the three-bit repetition code on a bit-flip
/// channel of rate `p`: index 0 is the no-error syndrome.
pub fn three_bit_syndrome_probs(p: f64) -> [f64; 4] {
    let p0 = (1.0 - p).powi(3) + p.powi(3);
    let p1 = p * (1.0 - p).powi(2) + p.powi(2) * (1.0 - p);
    [p0, p1, p1, p1]
}

/// Evaluate the two noiseless closed forms at error rate `p`.
pub fn three_bit_closed_forms(p: f64) -> Result<ThreeBitClosedForms> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1/2]")));
    }
    Ok(ThreeBitClosedForms {
        q00_spread: 4.0 * p * p - 4.0 * p + 1.0,
        navg_spread: 4.0 * p * (1.0 - p),
        q00_packed: 6.0 * p * p - 6.0 * p + 1.0,
        navg_packed: 6.0 * p * (1.0 - p),
    })
}

/// Residual of a q-assignment against the channel-matching system
/// `p_j = (1/2) Σ_k (q_jk + q_kj)`: the largest row violation.
pub fn channel_constraint_residual(p: f64, q: &[[f64; 4]; 4]) -> f64 {
    let probs = three_bit_syndrome_probs(p);
    let mut worst: f64 = 0.0;
    for j in 0..4 {
        let mut sum = 0.0;
        for k in 0..4 {
            sum += 0.5 * (q[j][k] + q[k][j]);
        }
        worst = worst.max((sum - probs[j]).abs());
    }
    worst
}

/// Closed-form quantities of the noisy three-bit solution, with the
/// alpha/beta/gamma intermediaries exposed for testing.
#[derive(Clone, Debug)]
pub struct NoisyThreeBitForms {
    pub p0: f64,
    pub p1: f64,
    pub p0_prime: f64,
    pub p1_prime: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub q00: f64,
    pub n_avg: f64,
}

/// Evaluate the noisy three-bit closed forms exactly as printed.
pub fn three_bit_noisy_closed_forms(p: f64, dp: f64) -> Result<NoisyThreeBitForms> {
    if p < 0.0 || dp < 0.0 || p + dp >= 0.5 {
        return Err(Error::Domain(format!(
            "require 0 <= p and p + dp < 1/2, got p = {p}, dp = {dp}"
        )));
    }
    if p == 0.0 {
        if dp > 0.0 {
            return Err(Error::Domain(
                "the noisy closed forms divide by the single-flip probability; p must be positive"
                    .into(),
            ));
        }
        return Ok(NoisyThreeBitForms {
            p0: 1.0,
            p1: 0.0,
            p0_prime: 1.0,
            p1_prime: 0.0,
            alpha: 0.5,
            beta: 0.0,
            gamma: 0.0,
            q00: 1.0,
            n_avg: 0.0,
        });
    }
    let p0 = (1.0 - p).powi(3) + p.powi(3);
    let p1 = p * (1.0 - p).powi(2) + p.powi(2) * (1.0 - p);
    let p0_prime = 1.0 - 3.0 * p * (1.0 - p) - 3.0 * dp * (1.0 - 2.0 * p);
    let p1_prime = p * (1.0 - p - dp) + dp * (1.0 - p);
    let alpha = 0.5 * (p0 + p1) / p0;
    let beta = p1 / p0;
    let gamma = 0.5 * (p0 + p1) * ((2.0 / 5.0) * p1_prime / (p0 + p1) + 0.25 * p1_prime / p1)
        + p1 * ((2.0 / 5.0) * p1_prime / (p0 + p1));
    let q00 = p0_prime / p0
        - 0.2 * (alpha + 4.0 * beta) * (p1_prime / (p0 + p1))
        - 0.25 * (alpha + beta) * p1_prime / p1
        - (2.0 / 3.0) * alpha * ((p1_prime - gamma) / p1) * (p0 / (p0 + p1));
    let n_avg = (2.0 / 3.0) * (p1_prime - gamma) * ((p0 + 2.0 * p1) / (p1 * (p0 + p1)))
        + p1_prime * ((p0 + 3.0 * p1) / (2.0 * p1 * (p0 + p1)));
    Ok(NoisyThreeBitForms {
        p0,
        p1,
        p0_prime,
        p1_prime,
        alpha,
        beta,
        gamma,
        q00,
        n_avg,
    })
}

/// Conditional syndrome-transition matrix p(l|j) of the three-bit code for
/// a bit-flip channel of rate `rate`, computed from first principles by
/// enumerating all eight channel patterns per transmitted syndrome.
pub fn conditional_matrix(rate: f64) -> [[f64; 4]; 4] {
    // Syndrome s of a 3-bit error pattern e (bit flips on codeword bits):
    // the coset representatives are 000, 001, 010, 100; syndrome index is
    // the representative's position, with complements folded in.
    let syndrome_of = |pattern: u32| -> usize {
        match pattern {
            0b000 | 0b111 => 0,
            0b001 | 0b110 => 1,
            0b010 | 0b101 => 2,
            0b100 | 0b011 => 3,
            _ => unreachable!(),
        }
    };
    let mut m = [[0.0; 4]; 4];
    let reps = [0b000u32, 0b001, 0b010, 0b100];
    for (j, &rep) in reps.iter().enumerate() {
        for noise in 0u32..8 {
            let w = noise.count_ones();
            let prob = rate.powi(w as i32) * (1.0 - rate).powi(3 - w as i32);
            m[syndrome_of(rep ^ noise)][j] += prob;
        }
    }
    // transpose into p(l | j) indexed [j][l]
    let mut out = [[0.0; 4]; 4];
    for j in 0..4 {
        for l in 0..4 {
            out[j][l] = m[l][j];
        }
    }
    out
}

/// The probability that Bob receives a correct bit when the pair (j,k) of
/// syndromes encodes it, under maximum-likelihood decoding with strict
/// inequalities (ties contribute to neither side, as printed).
pub fn p_corr(cond: &[[f64; 4]; 4], j: usize, k: usize) -> f64 {
    let mut total = 0.0;
    for l in 0..4 {
        if cond[j][l] > cond[k][l] {
            total += cond[j][l];
        } else if cond[j][l] < cond[k][l] {
            total += cond[k][l];
        }
    }
    0.5 * total
}

/// Grouping of syndromes into equal-probability classes: `sizes[k]`
/// syndromes each carrying per-syndrome probability `probs[k]`.
#[derive(Clone, Debug)]
pub struct SyndromeClassSpec {
    pub sizes: Vec<usize>,
    pub probs: Vec<f64>,
}

impl SyndromeClassSpec {
    pub fn new(sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() || sizes.len() != probs.len() {
            return Err(Error::Dimension("one probability per class".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::Domain("class sizes must be at least 1".into()));
        }
        let mass: f64 = sizes.iter().zip(&probs).map(|(&n, &p)| n as f64 * p).sum();
        if mass > 1.0 + 1e-9 {
            return Err(Error::Domain(format!(
                "class mass {mass} exceeds 1; probabilities are per-syndrome"
            )));
        }
        Ok(SyndromeClassSpec { sizes, probs })
    }

    /// Classes of the three-bit repetition code at rate `p`.
    pub fn three_bit(p: f64) -> Result<Self> {
        let probs = three_bit_syndrome_probs(p);
        SyndromeClassSpec::new(vec![1, 3], vec![probs[0], probs[1]])
    }

    /// Classes of the five-bit repetition code at rate `p`: no error, one
    /// flip, two flips (complement weights folded in).
    pub fn five_bit(p: f64) -> Result<Self> {
        let q = 1.0 - p;
        let p0 = q.powi(5) + p.powi(5);
        let p1 = p * q.powi(4) + p.powi(4) * q;
        let p2 = p.powi(2) * q.powi(3) + p.powi(3) * q.powi(2);
        SyndromeClassSpec::new(vec![1, 5, 10], vec![p0, p1, p2])
    }

    /// Shannon entropy of the full per-syndrome distribution.
    pub fn entropy(&self) -> f64 {
        self.sizes
            .iter()
            .zip(&self.probs)
            .map(|(&n, &p)| {
                if p <= 0.0 {
                    0.0
                } else {
                    -(n as f64) * p * p.log2()
                }
            })
            .sum()
    }
}

/// How payload bits are counted per encoding tuple.
#[derive(Clone, Debug)]
pub enum PayloadWeighting {
    /// ⌊log₂(total syndromes used)⌋ bits, the literal objective.
    FloorLog2,
    /// An explicit table mapping tuple totals to payload weights.
    FixedTable(Vec<(usize, f64)>),
}

/// Encoding tuples of a class LP: all (j_0..j_{M-1}) with 0 <= j_k <= n_k
/// and a power-of-two total, ordered by total then lexicographically.
pub fn class_tuples(spec: &SyndromeClassSpec) -> Vec<Vec<usize>> {
    let m = spec.sizes.len();
    let max_total: usize = spec.sizes.iter().sum();
    let mut tuples = Vec::new();
    let mut cur = vec![0usize; m];
    fn rec(spec: &SyndromeClassSpec, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..=spec.sizes[i] {
            cur[i] = j;
            rec(spec, i + 1, cur, out);
        }
        cur[i] = 0;
    }
    rec(spec, 0, &mut cur, &mut tuples);
    let mut keep: Vec<Vec<usize>> = tuples
        .into_iter()
        .filter(|t| {
            let total: usize = t.iter().sum();
            total >= 1 && total <= max_total && total.is_power_of_two()
        })
        .collect();
    keep.sort_by_key(|t| (t.iter().sum::<usize>(), t.clone()));
    keep
}

fn tuple_name(t: &[usize]) -> String {
    if t.iter().any(|&j| j > 9) {
        format!(
            "Q{}",
            t.iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    } else {
        format!("Q{}", t.iter().map(|j| j.to_string()).collect::<String>())
    }
}

/// Build the syndrome-class linear program: one probability-matching row
/// per class, a total-probability row, and the payload objective.
pub fn build_class_lp(
    spec: &SyndromeClassSpec,
    weighting: &PayloadWeighting,
) -> Result<LinearProgram> {
    let tuples = class_tuples(spec);
    if tuples.is_empty() {
        return Err(Error::Domain("no encodings available".into()));
    }
    let m = spec.sizes.len();
    let names: Vec<String> = tuples.iter().map(|t| tuple_name(t)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..m {
        let row: Vec<f64> = tuples
            .iter()
            .map(|t| {
                let total: usize = t.iter().sum();
                (t[k] as f64 / spec.sizes[k] as f64) / total as f64
            })
            .collect();
        rows.push(row);
        rhs.push(spec.probs[k]);
    }
    rows.push(vec![1.0; tuples.len()]);
    rhs.push(1.0);
    let objective: Vec<f64> = tuples
        .iter()
        .map(|t| {
            let total: usize = t.iter().sum();
            match weighting {
                PayloadWeighting::FloorLog2 => (total as f64).log2().floor(),
                PayloadWeighting::FixedTable(table) => table
                    .iter()
                    .find(|(tt, _)| *tt == total)
                    .map(|(_, w)| *w)
                    .unwrap_or(0.0),
            }
        })
        .collect();
    LinearProgram::new(objective, rows, rhs, names)
}

/// The noisy three-bit class LP: channel-matching constraints at the
/// effective rate p' = p + dp, objective weighted by the expected number
/// of correctly received bits (conditional matrix at the base rate, as the
/// printed coefficients require).
pub fn build_noisy_class_lp(spec: &SyndromeClassSpec, p: f64, dp: f64) -> Result<LinearProgram> {
    if spec.sizes != vec![1, 3] {
        return Err(Error::Domain(
            "noisy class LP supports only the three-bit spec (the five-bit case has too many variables to optimize over)"
                .into(),
        ));
    }
    let eff = SyndromeClassSpec::three_bit(p + dp)?;
    let tuples = class_tuples(&eff);
    let names: Vec<String> = tuples.iter().map(|t| tuple_name(t)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..2 {
        let row: Vec<f64> = tuples
            .iter()
            .map(|t| {
                let total: usize = t.iter().sum();
                (t[k] as f64 / eff.sizes[k] as f64) / total as f64
            })
            .collect();
        rows.push(row);
        rhs.push(eff.probs[k]);
    }
    rows.push(vec![1.0; tuples.len()]);
    rhs.push(1.0);
    let cond = conditional_matrix(p);
    let objective: Vec<f64> = tuples
        .iter()
        .map(|t| {
            let total: usize = t.iter().sum();
            match total {
                1 => 0.0,
                2 => {
                    // One hidden bit: a pair of syndromes; all pairs share
                    // the same maximum-likelihood value by symmetry.
                    if t[0] == 1 {
                        p_corr(&cond, 0, 1)
                    } else {
                        p_corr(&cond, 1, 2)
                    }
                }
                4 => expected_two_bit_correct(&cond),
                _ => 0.0,
            }
        })
        .collect();
    LinearProgram::new(objective, rows, rhs, names)
}

/// Expected correctly received bits of the full 2-bit (four-syndrome)
/// encoding, averaged over transmitted values.
fn expected_two_bit_correct(cond: &[[f64; 4]; 4]) -> f64 {
    let mut total = 0.0;
    for a in 0..4usize {
        for l in 0..4usize {
            let correct = 2 - (a ^ l).count_ones() as usize;
            total += 0.25 * cond[a][l] * correct as f64;
        }
    }
    total
}

/// Inner-outer block-code parameters.
#[derive(Clone, Copy, Debug)]
pub struct InnerOuterSpec {
    /// Outer block length.
    pub n: usize,
    /// Inner block length.
    pub m: usize,
    /// Channel error rate Alice emulates.
    pub p: f64,
    /// Intrinsic channel noise (0 for noiseless).
    pub dp: f64,
}

impl InnerOuterSpec {
    pub fn new(n: usize, m: usize, p: f64, dp: f64) -> Result<Self> {
        if m < 1 || m >= n {
            return Err(Error::Domain(format!(
                "require 1 <= M < N, got M={m}, N={n}"
            )));
        }
        if p < 0.0 || dp < 0.0 || p + dp >= 0.5 {
            return Err(Error::Domain(format!(
                "require 0 <= p, p + dp < 1/2, got p={p}, dp={dp}"
            )));
        }
        Ok(InnerOuterSpec { n, m, p, dp })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerOuterMode {
    /// One stego bit through a length-three inner repetition code.
    ThreeInN,
    /// M uniformly random inner bits.
    MInN,
}

/// Build the inner-outer LP for either mode. Weight-w rows match the
/// binomial channel distribution, with slack variables q_w absorbing the
/// mass assigned to sending nothing.
pub fn build_inner_outer_lp(spec: &InnerOuterSpec, mode: InnerOuterMode) -> Result<LinearProgram> {
    match mode {
        InnerOuterMode::ThreeInN => {
            if spec.m != 3 {
                return Err(Error::Domain("three_in_N requires M = 3".into()));
            }
            build_three_in_n(spec)
        }
        InnerOuterMode::MInN => build_m_in_n(spec),
    }
}

/// Inner-codeword weight for stego bit i and encoding bit j of the
/// [3,1,3] inner code: 000, 111, one flip, two flips.
fn three_bit_inner_weight(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 0) => 3,
        (0, 1) => 1,
        (1, 1) => 2,
        _ => unreachable!(),
    }
}

fn build_three_in_n(spec: &InnerOuterSpec) -> Result<LinearProgram> {
    let n = spec.n;
    let p = spec.p;
    let kmax = n - 3;
    // Variables: Y[i][j][k] then q[0..=n].
    let mut names = Vec::new();
    let mut var_index = std::collections::HashMap::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..=kmax {
                var_index.insert((i, j, k), names.len());
                names.push(format!("Y{i}{j}{k}"));
            }
        }
    }
    let q_base = names.len();
    for l in 0..=n {
        names.push(format!("q{l}"));
    }
    let n_vars = names.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // Weight rows, regenerated from the encoding-table semantics: the
    // block weight of Y_ijk is the inner weight plus k outer flips.
    for w in 0..=n {
        let mut row = vec![0.0; n_vars];
        for ((i, j, k), &idx) in &var_index {
            if three_bit_inner_weight(*i, *j) + k == w {
                row[idx] = 1.0;
            }
        }
        row[q_base + w] = 1.0;
        rows.push(row);
        rhs.push(binom_pmf(n as u64, w as u64, p));
    }
    // Independence of the stego bit from the encoding choice.
    for j in 0..2 {
        let mut row = vec![0.0; n_vars];
        for k in 0..=kmax {
            row[var_index[&(0, j, k)]] = 1.0;
            row[var_index[&(1, j, k)]] = -1.0;
        }
        rows.push(row);
        rhs.push(0.0);
    }
    // Total probability.
    rows.push(vec![1.0; n_vars]);
    rhs.push(1.0);
    let mut objective = vec![0.0; n_vars];
    for &idx in var_index.values() {
        objective[idx] = 1.0;
    }
    LinearProgram::new(objective, rows, rhs, names)
}

fn build_m_in_n(spec: &InnerOuterSpec) -> Result<LinearProgram> {
    let (n, m, p) = (spec.n, spec.m, spec.p);
    let mut names = Vec::new();
    let mut var_index = std::collections::HashMap::new();
    for i in 0..=m {
        for j in 0..=(n - m) {
            var_index.insert((i, j), names.len());
            names.push(format!("Y{i}_{j}"));
        }
    }
    let q_base = names.len();
    for l in 0..=n {
        names.push(format!("q{l}"));
    }
    let n_vars = names.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for w in 0..=n {
        let mut row = vec![0.0; n_vars];
        for ((i, j), &idx) in &var_index {
            if i + j == w {
                row[idx] = 1.0;
            }
        }
        row[q_base + w] = 1.0;
        rows.push(row);
        rhs.push(binom_pmf(n as u64, w as u64, p));
    }
    // Binomial inner-weight rows: the M inner bits look uniformly random.
    let pow = 2f64.powi(m as i32);
    for k in 0..=m {
        let mut row = vec![0.0; n_vars];
        let share = binom_coeff(m, k) / pow;
        for ((i, _), &idx) in &var_index {
            let direct = if *i == k { 1.0 } else { 0.0 };
            row[idx] = direct - share;
        }
        rows.push(row);
        rhs.push(0.0);
    }
    rows.push(vec![1.0; n_vars]);
    rhs.push(1.0);
    let mut objective = vec![0.0; n_vars];
    for &idx in var_index.values() {
        objective[idx] = 1.0;
    }
    LinearProgram::new(objective, rows, rhs, names)
}

fn binom_coeff(n: usize, k: usize) -> f64 {
    crate::numeric::ln_binomial(n as u64, k as u64)
        .exp()
        .round()
}

/// Bits per successful block for the inner-outer modes: the ThreeInN
/// protocol carries one bit; MInN carries M bits.
pub fn inner_outer_bits_per_success(spec: &InnerOuterSpec, mode: InnerOuterMode) -> f64 {
    match mode {
        InnerOuterMode::ThreeInN => 1.0,
        InnerOuterMode::MInN => spec.m as f64,
    }
}

/// The closed-form classical key-consumption rate
/// K_p^dp = (2 dp/(1-2p)) log2[beta / ((dp/(1-2p)) beta^{(1-2p)/(2 dp)})]
/// with beta = (1-2(p+dp))/(1-2p). Returns 0 when dp = 0 (no stego
/// traffic consumes no key).
pub fn classical_key_rate(p: f64, dp: f64) -> Result<f64> {
    if p < 0.0 || dp < 0.0 || p + dp >= 0.5 {
        return Err(Error::Domain(format!(
            "require 0 <= p, p + dp < 1/2, got p={p}, dp={dp}"
        )));
    }
    if dp == 0.0 {
        return Ok(0.0);
    }
    let beta = (1.0 - 2.0 * (p + dp)) / (1.0 - 2.0 * p);
    if beta <= 0.0 {
        return Err(Error::Domain(format!(
            "beta = {beta} <= 0: parameters too noisy for the closed form"
        )));
    }
    let q = dp / (1.0 - 2.0 * p);
    let exponent = (1.0 - 2.0 * p) / (2.0 * dp);
    let rate = 2.0 * q * (beta / (q * beta.powf(exponent))).log2();
    Ok(rate)
}

/// Exact per-block key cost: log2 C(N, M) + M bits (subset choice plus the
/// one-time pad).
pub fn exact_key_bits(n: u64, m: u64) -> Result<f64> {
    if m > n {
        return Err(Error::Domain(format!("M = {m} exceeds N = {n}")));
    }
    Ok(log2_binomial(n, m) + m as f64)
}

/// The block size `M = ceil(2 N q)` that the closed form assumes, with
/// q = dp/(1-2p).
pub fn matched_block_size(n: u64, p: f64, dp: f64) -> u64 {
    let q = dp / (1.0 - 2.0 * p);
    ((2.0 * n as f64 * q).ceil() as u64).min(n)
}

/// Shannon entropy reference for a figure row at rate `p` over an `n`-bit
/// block: n * h(p).
pub fn block_entropy(n: usize, p: f64) -> f64 {
    n as f64 * binary_entropy(p)
}

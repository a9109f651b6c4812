//! Quantum steganography analytics: depolarizing and BSC emulation rates,
//! key consumption, typical-set syndrome encoding, and diamond-norm
//! channel distinguishability.

use crate::error::{Error, Result};
use crate::numeric::{binary_entropy as h2, binom_pmf, log2_binomial};

pub use crate::numeric::binary_entropy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Bsc,
    Depolarizing,
}

/// A channel-emulation scenario: expected rate `p`, excess `dp`, block `n`.
#[derive(Clone, Copy, Debug)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p: f64,
    pub dp: f64,
    pub n: usize,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64, dp: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("block length must be positive".into()));
        }
        if p < 0.0 || dp < 0.0 {
            return Err(Error::Domain("rates must be nonnegative".into()));
        }
        let ok = match kind {
            ChannelKind::Bsc => p + dp < 0.5,
            ChannelKind::Depolarizing => 4.0 * (p + dp) / 3.0 < 1.0,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "rates p = {p}, dp = {dp} outside the channel domain"
            )));
        }
        Ok(ChannelSpec { kind, p, dp, n })
    }
}

/// Per-use entropy of the emulated channel: h(p) for the BSC,
/// -(1-p)log2(1-p) - p log2(p/3) for the depolarizing channel.
pub fn channel_entropy(spec: &ChannelSpec) -> f64 {
    match spec.kind {
        ChannelKind::Bsc => h2(spec.p),
        ChannelKind::Depolarizing => {
            let p = spec.p;
            if p <= 0.0 {
                return 0.0;
            }
            -(1.0 - p) * (1.0 - p).log2() - p * (p / 3.0).log2()
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DiamondNorm {
    pub norm: f64,
    /// Optimal single-shot distinguishing probability 1/2 + norm/4.
    pub p_opt: f64,
}

/// Diamond norm of the difference between N iid uses at rates p and
/// r = p + dp: the binomial formula, identical for BSC and depolarizing.
pub fn diamond_norm_iid(spec: &ChannelSpec) -> DiamondNorm {
    let (p, n) = (spec.p, spec.n as u64);
    let r = p + spec.dp;
    let mut norm = 0.0;
    for j in 0..=n {
        norm += (binom_pmf(n, j, r) - binom_pmf(n, j, p)).abs();
    }
    DiamondNorm {
        norm,
        p_opt: 0.5 + norm / 4.0,
    }
}

/// Report of the qubit-swapping protocol (protocol 1) on the depolarizing
/// channel.
#[derive(Clone, Debug)]
pub struct Protocol1Report {
    /// Stego qubits per channel use, (4/3) p (1-delta).
    pub stego_rate: f64,
    /// Stego block size M = (4/3) p N (1-delta), rounded.
    pub m: u64,
    /// Exact key bits log2 C(N,M) + 2M.
    pub key_bits_exact: f64,
    /// Exact key rate per channel use.
    pub key_rate_exact: f64,
    /// Stirling-collapsed closed form at the same M/N.
    pub key_rate_closed: f64,
    /// Noisy-channel block size with q = dp/(1 - 4p/3) substituted.
    pub m_noisy: u64,
    /// Exact key rate of the noisy variant.
    pub kcr_exact: f64,
    /// Closed form log2[(4/beta)^beta (1-beta)^(beta-1)],
    /// beta = 4 dp / (3 - 4p).
    pub kcr_closed: f64,
    /// delta over the binomial-tail bound sqrt((1-4p/3)/((4p/3)N)).
    pub tail_condition_ratio: f64,
    pub tail_condition_ok: bool,
}

fn key_rate_closed_at(fraction: f64) -> f64 {
    if fraction <= 0.0 {
        return 0.0;
    }
    h2(fraction) + 2.0 * fraction
}

/// Analyze protocol 1 at slack `delta` in (0,1).
pub fn protocol1_report(spec: &ChannelSpec, delta: f64) -> Result<Protocol1Report> {
    if spec.kind != ChannelKind::Depolarizing {
        return Err(Error::Domain(
            "protocol 1 emulates the depolarizing channel".into(),
        ));
    }
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::Domain(format!("delta = {delta} outside (0,1)")));
    }
    let (p, dp, nf) = (spec.p, spec.dp, spec.n as f64);
    let n = spec.n as u64;
    let stego_rate = (4.0 / 3.0) * p * (1.0 - delta);
    let m = ((stego_rate * nf).round() as u64).min(n);
    let key_bits_exact = log2_binomial(n, m) + 2.0 * m as f64;
    let key_rate_exact = key_bits_exact / nf;
    let key_rate_closed = key_rate_closed_at(m as f64 / nf);

    let beta = 4.0 * dp / (3.0 - 4.0 * p);
    let m_noisy = ((beta * nf).round() as u64).min(n);
    let kcr_exact = (log2_binomial(n, m_noisy) + 2.0 * m_noisy as f64) / nf;
    let kcr_closed = if beta <= 0.0 {
        0.0
    } else {
        ((4.0 / beta).powf(beta) * (1.0 - beta).powf(beta - 1.0)).log2()
    };

    let four_thirds_p = 4.0 * p / 3.0;
    let tail_condition_ratio = if p > 0.0 {
        delta / ((1.0 - four_thirds_p) / (four_thirds_p * nf)).sqrt()
    } else {
        0.0
    };
    Ok(Protocol1Report {
        stego_rate,
        m,
        key_bits_exact,
        key_rate_exact,
        key_rate_closed,
        m_noisy,
        kcr_exact,
        kcr_closed,
        tail_condition_ratio,
        tail_condition_ok: tail_condition_ratio > 1.0,
    })
}

/// Partition of the typical weight window into C near-equiprobable sets.
#[derive(Clone, Debug)]
pub struct TypicalSetPartition {
    pub n: usize,
    pub p: f64,
    pub delta: f64,
    /// Weight window [low, high] of typical errors.
    pub window: (usize, usize),
    /// Number of sets.
    pub c: usize,
    /// Total probability mass of the window.
    pub typical_mass: f64,
    /// Explicit error lists as bit masks (X-error patterns of the BSC).
    pub sets: Vec<Vec<u32>>,
    /// Largest set probability over the target mass/C.
    pub max_relative: f64,
    /// Smallest set probability over the target mass/C.
    pub min_relative: f64,
}

/// Greedily partition the typical weight-window strings of an N-bit BSC
/// into C roughly equiprobable sets (largest-first bin filling). Explicit
/// enumeration is limited to N <= 20.
pub fn typical_partition(n: usize, p: f64, delta: f64) -> Result<TypicalSetPartition> {
    if n > 20 {
        return Err(Error::Capacity(format!(
            "explicit partition enumerates 2^N strings; N = {n} exceeds 20"
        )));
    }
    if p <= 0.0 || p >= 0.5 {
        return Err(Error::Domain("need 0 < p < 1/2".into()));
    }
    let mean = n as f64 * p;
    let low = (mean * (1.0 - delta)).ceil() as usize;
    let high = ((mean * (1.0 + delta)).floor() as usize).min(n);
    if low > high {
        return Err(Error::Domain(format!(
            "empty typical window [{low},{high}] at N={n}, p={p}, delta={delta}"
        )));
    }
    // Strings in the window, heaviest probability (lowest weight) first.
    let mut strings: Vec<(u32, f64)> = Vec::new();
    let mut typical_mass = 0.0;
    for w in low..=high {
        let prob = p.powi(w as i32) * (1.0 - p).powi((n - w) as i32);
        for mask in masks_of_weight(n, w) {
            strings.push((mask, prob));
        }
        typical_mass += binom_pmf(n as u64, w as u64, p);
    }
    strings.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let q_max = strings.first().map(|s| s.1).unwrap();
    let c = ((typical_mass / q_max).floor() as usize).max(1);
    // Largest-first fill of the currently lightest bin.
    let mut totals = vec![0.0f64; c];
    let mut sets = vec![Vec::new(); c];
    for (mask, prob) in strings {
        let (idx, _) = totals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        totals[idx] += prob;
        sets[idx].push(mask);
    }
    let target = typical_mass / c as f64;
    let max_relative = totals.iter().cloned().fold(0.0, f64::max) / target;
    let min_relative = totals.iter().cloned().fold(f64::INFINITY, f64::min) / target;
    Ok(TypicalSetPartition {
        n,
        p,
        delta,
        window: (low, high),
        c,
        typical_mass,
        sets,
        max_relative,
        min_relative,
    })
}

fn masks_of_weight(n: usize, w: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for combo in crate::code::combinations(n, w) {
        let mut mask = 0u32;
        for b in combo {
            mask |= 1 << b;
        }
        out.push(mask);
    }
    out
}

/// Report of the syndrome-encoding protocol (protocol 2).
#[derive(Clone, Debug)]
pub struct Protocol2Report {
    /// Stego bits per block: N(h(p) - p delta log2((1-p)/p)) for the BSC,
    /// N(s - delta) for the depolarizing channel.
    pub stego_bits: f64,
    pub rate: f64,
    /// log2 of the partition count C from the closed form.
    pub log2_c: f64,
    /// Key rate 2(s - delta) + delta, with the two uses reported apart.
    pub key_rate: f64,
    pub key_twirl_term: f64,
    pub key_selection_term: f64,
    /// Atypicality mass plus the partition-error bound (S37 form).
    pub security_bound: f64,
    /// Zero-rate flag when delta eats the whole entropy budget.
    pub rate_clamped: bool,
    /// Explicit partition for N <= 20 on the BSC.
    pub partition: Option<TypicalSetPartition>,
}

/// Analyze protocol 2 at typicality width `delta`.
pub fn protocol2_report(spec: &ChannelSpec, delta: f64) -> Result<Protocol2Report> {
    if delta < 0.0 {
        return Err(Error::Domain("delta must be nonnegative".into()));
    }
    let (p, nf) = (spec.p, spec.n as f64);
    let s = channel_entropy(spec);
    let raw_bits = match spec.kind {
        ChannelKind::Bsc => {
            if p <= 0.0 {
                0.0
            } else {
                nf * (h2(p) - p * delta * ((1.0 - p) / p).log2())
            }
        }
        ChannelKind::Depolarizing => nf * (s - delta),
    };
    let rate_clamped = raw_bits <= 0.0;
    let stego_bits = raw_bits.max(0.0);
    let log2_c = match spec.kind {
        ChannelKind::Bsc => {
            if p <= 0.0 {
                0.0
            } else {
                -nf * p * (1.0 - delta) * p.log2() - nf * (1.0 - p + p * delta) * (1.0 - p).log2()
            }
        }
        ChannelKind::Depolarizing => stego_bits,
    };
    let key_twirl_term = 2.0 * (s - delta).max(0.0);
    let key_selection_term = delta;
    let security_bound = if spec.kind == ChannelKind::Bsc && p > 0.0 && p < 0.5 {
        let mean = nf * p;
        let low = (mean * (1.0 - delta)).ceil() as u64;
        let high = ((mean * (1.0 + delta)).floor() as u64).min(spec.n as u64);
        let mut window_mass = 0.0;
        if low <= high {
            for k in low..=high {
                window_mass += binom_pmf(spec.n as u64, k, p);
            }
        }
        let epsilon = (1.0 - window_mass).max(0.0);
        let power_term = ((1.0 - p) / (1.0 - 2.0 * p))
            * ((p / (1.0 - p)).ln() * (nf * p * (1.0 - delta))).exp()
            * (((1.0 - 2.0 * p + 2.0 * p * p) / (1.0 - p)).ln() * nf).exp();
        epsilon + power_term
    } else {
        f64::NAN
    };
    let partition = if spec.kind == ChannelKind::Bsc && spec.n <= 20 && p > 0.0 && p < 0.5 {
        typical_partition(spec.n, p, delta).ok()
    } else {
        None
    };
    Ok(Protocol2Report {
        stego_bits,
        rate: stego_bits / nf,
        log2_c,
        key_rate: key_twirl_term + key_selection_term,
        key_twirl_term,
        key_selection_term,
        security_bound,
        rate_clamped,
        partition,
    })
}

/// Rates of protocol 2 over a noisy BSC.
#[derive(Clone, Copy, Debug)]
pub struct NoisyRate {
    /// R(p, dp) = -(dp/(1-2p)) log2(2^h(p) - 1).
    pub rate: f64,
    /// The maximizing relevant-fraction q = (M/N) 2^h(p)/(2^h(p)-1).
    pub q_opt: f64,
    /// Protocol-1 comparator 2 dp (1 - h(p))/(1 - 2p).
    pub comparison_to_protocol1: f64,
}

/// The achievable noisy-channel rate of protocol 2 and its protocol-1
/// comparator.
pub fn protocol2_noisy_rate(p: f64, dp: f64) -> Result<NoisyRate> {
    if p <= 0.0 {
        return Err(Error::Domain(
            "p = 0 puts log2(2^h(p) - 1) out of domain; the noisy rate needs 0 < p < 1/2".into(),
        ));
    }
    if p >= 0.5 || dp < 0.0 {
        return Err(Error::Domain(format!(
            "require 0 < p < 1/2 and dp >= 0, got p={p}, dp={dp}"
        )));
    }
    let h = h2(p);
    let pow = 2f64.powf(h);
    let m_over_n = dp / (1.0 - 2.0 * p);
    Ok(NoisyRate {
        rate: -m_over_n * (pow - 1.0).log2(),
        q_opt: m_over_n * pow / (pow - 1.0),
        comparison_to_protocol1: 2.0 * dp * (1.0 - h) / (1.0 - 2.0 * p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(p: f64, dp: f64, n: usize) -> ChannelSpec {
        ChannelSpec::new(ChannelKind::Bsc, p, dp, n).unwrap()
    }

    fn dep(p: f64, dp: f64, n: usize) -> ChannelSpec {
        ChannelSpec::new(ChannelKind::Depolarizing, p, dp, n).unwrap()
    }

    #[test]
    fn entropies() {
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        let s = channel_entropy(&dep(0.3, 0.0, 1));
        let direct = -0.7f64 * 0.7f64.log2() - 0.3 * 0.1f64.log2();
        assert!((s - direct).abs() < 1e-12);
    }

    #[test]
    fn diamond_norm_small_n() {
        // N = 1: the norm is exactly 2 dp.
        let d = diamond_norm_iid(&bsc(0.1, 0.03, 1));
        assert!((d.norm - 0.06).abs() < 1e-15);
        assert!((d.p_opt - (0.5 + 0.015)).abs() < 1e-15);

        // dp = 0 collapses the norm.
        let d = diamond_norm_iid(&bsc(0.1, 0.0, 4));
        assert!(d.norm.abs() < 1e-15);
        assert!((d.p_opt - 0.5).abs() < 1e-15);

        // N = 2 equals the symbolic expansion 2 dp (2 - 2p - dp).
        let (p, dp) = (0.12, 0.04);
        let d = diamond_norm_iid(&bsc(p, dp, 2));
        let symbolic = 2.0 * dp * (2.0 - 2.0 * p - dp);
        assert!((d.norm - symbolic).abs() < 1e-12);
    }

    #[test]
    fn diamond_norm_monotone_in_n() {
        let mut last = 0.0;
        for n in [1usize, 2, 4, 8, 16, 32] {
            let d = diamond_norm_iid(&bsc(0.1, 0.01, n));
            assert!(d.norm >= last - 1e-12, "N = {n}");
            assert!(d.norm <= 2.0 && d.p_opt >= 0.5 && d.p_opt <= 1.0);
            last = d.norm;
        }
    }

    #[test]
    fn protocol1_examples() {
        // p = 0: nothing to hide.
        let r = protocol1_report(&dep(0.0, 0.01, 1000), 0.1).unwrap();
        assert_eq!(r.stego_rate, 0.0);
        assert_eq!(r.m, 0);

        // Exact vs closed key rate at desk scale.
        let r = protocol1_report(&dep(0.1, 0.01, 10_000), 0.1).unwrap();
        assert!(
            (r.key_rate_exact - r.key_rate_closed).abs() <= 0.05,
            "exact {} vs closed {}",
            r.key_rate_exact,
            r.key_rate_closed
        );
        assert!((r.kcr_exact - r.kcr_closed).abs() <= 0.05);

        // KCR grows with dp at fixed p.
        let mut last = 0.0;
        for i in 1..8 {
            let dp = 0.005 * i as f64;
            let r = protocol1_report(&dep(0.1, dp, 10_000), 0.1).unwrap();
            assert!(r.kcr_closed > last);
            last = r.kcr_closed;
        }
    }

    #[test]
    fn protocol2_rate_peaks_at_half() {
        let r = protocol2_report(&bsc(0.499, 0.0, 100), 1e-6).unwrap();
        assert!(r.rate > 0.99, "rate {} should approach 1", r.rate);
        assert!(!r.rate_clamped);

        // delta so large the budget collapses.
        let r = protocol2_report(&bsc(0.05, 0.0, 100), 3.0).unwrap();
        assert!(r.rate_clamped);
        assert_eq!(r.stego_bits, 0.0);
    }

    #[test]
    fn protocol2_partition_covers_window() {
        let part = typical_partition(16, 0.25, 0.1).unwrap();
        assert_eq!(part.window, (4, 4));
        let total: usize = part.sets.iter().map(Vec::len).sum();
        assert_eq!(total, 1820); // C(16,4)
                                 // Disjoint cover.
        let mut seen = std::collections::HashSet::new();
        for set in &part.sets {
            for &m in set {
                assert!(seen.insert(m), "mask duplicated across sets");
            }
        }
        assert!(part.max_relative < 2.0, "max dev {}", part.max_relative);
        assert!(part.min_relative > 0.0);
    }

    #[test]
    fn protocol2_security_bound_decreases_in_n() {
        let mut last = f64::INFINITY;
        for n in [100usize, 200, 400, 800, 1600] {
            let r = protocol2_report(&bsc(0.25, 0.0, n), 0.3).unwrap();
            assert!(
                r.security_bound < last,
                "N = {n}: {} >= {last}",
                r.security_bound
            );
            last = r.security_bound;
        }
    }

    #[test]
    fn noisy_rate_examples() {
        assert!(protocol2_noisy_rate(0.0, 0.01).is_err());
        let r = protocol2_noisy_rate(0.05, 0.0).unwrap();
        assert_eq!(r.rate, 0.0);

        // Protocol 2 beats the comparator at small p.
        let r = protocol2_noisy_rate(0.05, 0.01).unwrap();
        assert!(r.rate > r.comparison_to_protocol1);

        // The two rates converge toward p = 1/2.
        let r = protocol2_noisy_rate(0.49, 0.005).unwrap();
        assert!((r.rate - r.comparison_to_protocol1).abs() < 1e-3);

        // And the gap shrinks monotonically along a grid toward 1/2.
        let mut last_gap = f64::INFINITY;
        for i in 1..=8 {
            let p = 0.1 + 0.048 * i as f64;
            let r = protocol2_noisy_rate(p, 0.005).unwrap();
            let gap = (r.rate - r.comparison_to_protocol1).abs();
            assert!(gap <= last_gap + 1e-12, "p = {p}");
            last_gap = gap;
        }
    }

    #[test]
    fn sqrt_n_scaling_keeps_norm_bounded() {
        // dp = 0.1 sqrt(p(1-p)/N): the norm stays bounded while the
        // payload M = N dp/(1-2p) grows like sqrt(N).
        let p = 0.1;
        let mut last_m = 0.0;
        for n in [100usize, 1000, 10_000, 100_000] {
            let dp = 0.1 * (p * (1.0 - p) / n as f64).sqrt();
            let d = diamond_norm_iid(&bsc(p, dp, n));
            assert!(d.norm < 0.5, "N = {n}: norm {}", d.norm);
            let m = n as f64 * dp / (1.0 - 2.0 * p);
            if last_m > 0.0 {
                let ratio = m / last_m;
                assert!((ratio - 10f64.sqrt()).abs() < 0.2, "payload scaling broke");
            }
            last_m = m;
        }
    }
}

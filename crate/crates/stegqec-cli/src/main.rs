use clap::{Args, Parser, Subcommand};
use stegqec_cli::*;

#[derive(Parser)]
#[command(
    name = "stegqec",
    about = "Stabilizer-code steganography toolkit: codes, searches, rate curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Output file; written atomically. Relative paths resolve against
    /// $STEGQEC_OUT_DIR. Prints to stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

impl OutArg {
    fn deliver(&self, contents: String) -> stegqec::Result<()> {
        match &self.out {
            Some(path) => write_atomic(&resolve_out(path), &contents),
            None => {
                print!("{contents}");
                Ok(())
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect, synthesize, and verify the built-in codes.
    Codes {
        #[command(subcommand)]
        command: CodesCommand,
    },
    /// Exhaustive structural searches.
    Search {
        #[command(subcommand)]
        command: SearchCommand,
    },
    /// Steganographic rate analysis.
    Steg {
        #[command(subcommand)]
        command: StegCommand,
    },
    /// Emit the data behind one published figure.
    Figure {
        /// One of: three-bit-closed-forms, noiseless-three-bit,
        /// noiseless-five-bit, noisy-three-bit, three-in-n, m-in-n,
        /// classical-kcr, quantum-kcr, perfect-code-rate.
        name: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum CodesCommand {
    /// Check commutation, independence, sign, and logical pairing.
    Validate {
        #[arg(long)]
        code: String,
    },
    /// Emit the syndrome table as CSV (syndrome, error, weight).
    Syndromes {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 1)]
        max_weight: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exhaustive minimum distance.
    Distance {
        #[arg(long)]
        code: String,
    },
    /// Synthesize an encoding circuit (one gate per line).
    Synthesize {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify a circuit (from file, or the synthesized one) against a code.
    Verify {
        #[arg(long)]
        code: String,
        /// Circuit file in the text format; synthesizes when omitted.
        #[arg(long)]
        circuit: Option<String>,
    },
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Exhaust six-qubit CSS stabilizers against single-error correction.
    Css613,
    /// Turn a distance-three code into its one-ebit variant on a chosen qubit.
    EaReduce {
        #[arg(long)]
        code: String,
        #[arg(long)]
        bob: usize,
    },
    /// Exhaust entanglement-assisted CSS codes with one ebit.
    EaCss {
        /// Alice-side qubit count.
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum StegCommand {
    /// Classical bit-flip channel analysis.
    Classical {
        #[command(subcommand)]
        command: ClassicalCommand,
    },
    /// Depolarizing/BSC emulation rates and distinguishability.
    Quantum {
        #[command(subcommand)]
        command: QuantumCommand,
    },
    /// The five-qubit-code hiding protocol.
    Perfect {
        #[command(subcommand)]
        command: PerfectCommand,
    },
}

#[derive(Subcommand)]
enum ClassicalCommand {
    /// Closed-form three-bit solutions (noisy forms when --dp is given).
    ClosedForms {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        dp: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Optimal-rate curve over an error grid.
    Curve {
        /// class3, class5, noisy3, three-in-n, or m-in-n.
        #[arg(long)]
        mode: String,
        /// Grid start:end:step; for noisy3 this grid runs over dp.
        #[arg(long)]
        p_grid: String,
        /// Fixed base rate (noisy3 only).
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Outer block length (inner-outer modes).
        #[arg(long, default_value_t = 17)]
        n: usize,
        /// Inner block length (m-in-n).
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Key-consumption rate curve.
    Key {
        #[arg(long)]
        p_grid: String,
        #[arg(long)]
        dp: f64,
        /// Block length for the exact comparison column.
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum QuantumCommand {
    /// Diamond norm of N iid uses at rates p and p + dp.
    Diamond {
        #[arg(long, default_value = "bsc")]
        kind: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        dp: f64,
        /// Comma-separated block lengths.
        #[arg(long, default_value = "1,2,4,8,16,32,64")]
        n_list: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Qubit-swapping protocol report (depolarizing channel).
    Protocol1 {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        dp: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Syndrome-encoding protocol report.
    Protocol2 {
        #[arg(long, default_value = "bsc")]
        kind: String,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        dp: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Noisy-channel achievable rate against the protocol-1 comparator.
    NoisyRate {
        #[arg(long)]
        p_grid: String,
        #[arg(long)]
        dp: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum PerfectCommand {
    /// Emit the verified encoding tables as CSV.
    Tables {
        #[command(flatten)]
        out: OutArg,
    },
    /// Mixture rate curve (p, n_avg, key rates, entropy bound).
    Rates {
        #[arg(long)]
        p_grid: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run seeded protocol blocks and emit JSON transcripts.
    Simulate {
        #[arg(long)]
        p: f64,
        /// Four payload bits, or `uniform`.
        #[arg(long, default_value = "0000")]
        payload: String,
        /// Mandatory seed: reproducibility is the product.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Seeded channel-emulation statistics against the target law.
    EveCheck {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        trials: u64,
        /// Mandatory seed: reproducibility is the product.
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn channel_kind(text: &str) -> stegqec::Result<stegqec::quantum::ChannelKind> {
    match text {
        "bsc" => Ok(stegqec::quantum::ChannelKind::Bsc),
        "dep" | "depolarizing" => Ok(stegqec::quantum::ChannelKind::Depolarizing),
        other => Err(stegqec::Error::UnknownName {
            name: other.into(),
            valid: "bsc, depolarizing".into(),
        }),
    }
}

fn run(cli: Cli) -> stegqec::Result<()> {
    match cli.command {
        Command::Codes { command } => match command {
            CodesCommand::Validate { code } => print!("{}", codes_validate(&code)?),
            CodesCommand::Syndromes {
                code,
                max_weight,
                out,
            } => out.deliver(codes_syndromes(&code, max_weight)?)?,
            CodesCommand::Distance { code } => print!("{}", codes_distance(&code)?),
            CodesCommand::Synthesize { code, out } => out.deliver(codes_synthesize(&code)?)?,
            CodesCommand::Verify { code, circuit } => {
                let text = circuit
                    .map(|path| std::fs::read_to_string(resolve_out(&path)))
                    .transpose()?;
                print!("{}", codes_verify(&code, text.as_deref())?);
            }
        },
        Command::Search { command } => match command {
            SearchCommand::Css613 => print!("{}", search_css613_summary()),
            SearchCommand::EaReduce { code, bob } => print!("{}", search_ea_reduce(&code, bob)?),
            SearchCommand::EaCss { n } => print!("{}", search_ea_css_summary(n)),
        },
        Command::Steg { command } => match command {
            StegCommand::Classical { command } => match command {
                ClassicalCommand::ClosedForms { p, dp, out } => {
                    out.deliver(classical_closed_forms(p, dp)?)?
                }
                ClassicalCommand::Curve {
                    mode,
                    p_grid,
                    p,
                    n,
                    m,
                    out,
                } => {
                    let mode = CurveMode::parse(&mode)?;
                    let grid = Grid::parse(&p_grid)?;
                    out.deliver(classical_curve(mode, grid, p, n, m)?)?
                }
                ClassicalCommand::Key { p_grid, dp, n, out } => {
                    out.deliver(classical_key_curve(Grid::parse(&p_grid)?, dp, n)?)?
                }
            },
            StegCommand::Quantum { command } => match command {
                QuantumCommand::Diamond {
                    kind,
                    p,
                    dp,
                    n_list,
                    out,
                } => {
                    let kind = channel_kind(&kind)?;
                    let ns: Vec<usize> = n_list
                        .split(',')
                        .map(|t| {
                            t.trim().parse::<usize>().map_err(|_| {
                                stegqec::Error::Domain(format!("bad block length {t:?}"))
                            })
                        })
                        .collect::<stegqec::Result<_>>()?;
                    out.deliver(quantum_diamond(kind, p, dp, &ns)?)?
                }
                QuantumCommand::Protocol1 {
                    p,
                    dp,
                    n,
                    delta,
                    out,
                } => out.deliver(quantum_protocol1(p, dp, n, delta)?)?,
                QuantumCommand::Protocol2 {
                    kind,
                    p,
                    dp,
                    n,
                    delta,
                    out,
                } => out.deliver(quantum_protocol2(channel_kind(&kind)?, p, dp, n, delta)?)?,
                QuantumCommand::NoisyRate { p_grid, dp, out } => {
                    out.deliver(quantum_noisy_rate(Grid::parse(&p_grid)?, dp)?)?
                }
            },
            StegCommand::Perfect { command } => match command {
                PerfectCommand::Tables { out } => out.deliver(perfect_tables()?)?,
                PerfectCommand::Rates { p_grid, out } => {
                    out.deliver(perfect_rates(Grid::parse(&p_grid)?)?)?
                }
                PerfectCommand::Simulate {
                    p,
                    payload,
                    seed,
                    trials,
                    out,
                } => out.deliver(perfect_simulate(p, &payload, seed, trials)?)?,
                PerfectCommand::EveCheck {
                    p,
                    trials,
                    seed,
                    out,
                } => out.deliver(perfect_eve_check(p, trials, seed)?)?,
            },
        },
        Command::Figure { name, out } => out.deliver(emit_figure(&name)?)?,
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

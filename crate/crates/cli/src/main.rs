//! `additive`: complexity profiles, anchors, powers and slope tools for
//! integer words given as textual specs.
//!
//! Exit status: 0 on success, 1 for a well-formed negative answer (not an
//! anchor, no power found), 2 for invalid input or a refused computation.

mod spec;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use additive_core::complexity::{
    factor_set_intersection, profile_with_limit, sum_spread, SPREAD_MAX_IMAGES,
};
use additive_core::morphism::is_anchor;
use additive_core::powers::{find_anchored_power, PowerSearch, POWER_MAX_PREFIX};
use additive_core::slope::{chi_colors, chi_factorization, greedy_slope_cuts, slope_estimate};
use additive_core::{Mode, PowerWitness, Rational, RationalSlope, WordStream, WordView};
use anyhow::{bail, ensure, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spec::{parse_morphism, parse_mu, WordSpec};

const MAX_PREFIX: usize = 10_000_000;
const MAX_N: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "additive",
    version,
    about = "Additive complexity of integer words"
)]
struct Cli {
    /// Print the normalized word spec and exit.
    #[arg(long, global = true)]
    explain: bool,

    /// Lift the size guards on prefixes, lengths, images and power searches.
    #[arg(long, global = true)]
    unsafe_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Additive,
    Abelian,
    Lattice,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity and spread for n = 1..=n-max (`n,count,spread`).
    Profile {
        word: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Additive)]
        mode: ModeArg,
        /// Lattice map, e.g. `mu:0=1,0;1=0,1`.
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether a morphism such as `0=0,2;1=1,1` is an anchor (JSON report).
    Anchor { morphism: String },
    /// Search for a k-power, a k-power modulo a lattice map, or a slope-constrained power.
    Powers {
        word: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        #[arg(long)]
        mu: Option<String>,
        /// Block slope `p/q`; switches to the progression search.
        #[arg(long)]
        slope: Option<RationalSlope>,
        /// Block lengths are multiples of this times q.
        #[arg(long, default_value_t = 1)]
        div: usize,
        /// Number of blocks in the slope-constrained search.
        #[arg(long, default_value_t = 2)]
        blocks: usize,
    },
    /// Colors `χ(m)` for m = 1..=m-max (`m,chi`).
    Chi {
        word: String,
        #[arg(long)]
        slope: RationalSlope,
        #[arg(long, default_value_t = 100)]
        m_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Prefix slopes at n = 1, 2, 4, … and the full prefix (`n,slope_p,slope_q`).
    Slope {
        word: String,
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Cut positions of a factorization into blocks of the given slope (`cut`).
    Factorize {
        word: String,
        #[arg(long)]
        slope: RationalSlope,
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        /// Greedy least cuts from --start instead of the χ coloring.
        #[arg(long)]
        greedy: bool,
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Additive spread for n = 1..=n-max (`n,spread`).
    Spread {
        word: String,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Number of length-n factors shared by two words (`n,shared`).
    Intersect {
        first: String,
        second: String,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 100_000)]
        prefix: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// Successful run: text to emit and whether the answer was affirmative.
struct Report {
    text: String,
    affirmative: bool,
    out: Option<PathBuf>,
}

impl Report {
    fn yes(text: String, out: Option<PathBuf>) -> Self {
        Report {
            text,
            affirmative: true,
            out,
        }
    }
}

struct Guards {
    unsafe_large: bool,
}

impl Guards {
    fn check(&self, what: &str, value: usize, limit: usize) -> Result<()> {
        ensure!(
            self.unsafe_large || value <= limit,
            "{what} {value} exceeds {limit}; pass --unsafe-large to allow it"
        );
        Ok(())
    }

    fn prefix(&self, len: usize) -> Result<()> {
        ensure!(len >= 1, "prefix length must be at least 1");
        self.check("prefix length", len, MAX_PREFIX)
    }

    fn n_max(&self, n: usize) -> Result<()> {
        self.check("n-max", n, MAX_N)
    }
}

fn load(text: &str) -> Result<WordStream> {
    WordSpec::parse(text)?.build()
}

fn prefix_of(w: &mut WordStream, len: usize) -> Result<WordView<'_>> {
    Ok(w.prefix(len)?)
}

fn rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn table(
    format: Format,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<Value>>,
    json_wrap: impl FnOnce(Value) -> Value,
) -> String {
    let rows: Vec<Vec<Value>> = rows.collect();
    match format {
        Format::Csv => {
            let mut s = columns.join(",");
            s.push('\n');
            for row in &rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string))
                    .collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            s
        }
        Format::Json => {
            let objects: Vec<Value> = rows
                .into_iter()
                .map(|row| Value::Object(columns.iter().map(|c| c.to_string()).zip(row).collect()))
                .collect();
            let mut s = serde_json::to_string_pretty(&json_wrap(Value::Array(objects)))
                .expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn witness_json(w: &PowerWitness) -> Value {
    json!({
        "found": true,
        "start": w.start,
        "block_len": w.block_len,
        "count": w.count,
        "value": w.value.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "blocks": (1..=w.count).map(|i| { let (a, b) = w.block(i); [a, b] }).collect::<Vec<_>>(),
    })
}

fn sum_value(s: additive_core::Sum) -> Value {
    match i64::try_from(s) {
        Ok(v) => json!(v),
        Err(_) => json!(s.to_string()),
    }
}

fn explain(command: &Command) -> Result<String> {
    let words: Vec<&String> = match command {
        Command::Profile { word, .. }
        | Command::Powers { word, .. }
        | Command::Chi { word, .. }
        | Command::Slope { word, .. }
        | Command::Factorize { word, .. }
        | Command::Spread { word, .. } => vec![word],
        Command::Intersect { first, second, .. } => vec![first, second],
        Command::Anchor { morphism } => return Ok(format!("{}\n", parse_morphism(morphism)?)),
    };
    let mut s = String::new();
    for w in words {
        let _ = writeln!(s, "{}", WordSpec::parse(w)?);
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<Report> {
    if cli.explain {
        return Ok(Report::yes(explain(&cli.command)?, None));
    }
    let guards = Guards {
        unsafe_large: cli.unsafe_large,
    };
    match cli.command {
        Command::Profile {
            word,
            mode,
            mu,
            n_max,
            prefix,
            output,
        } => {
            guards.prefix(prefix)?;
            guards.n_max(n_max)?;
            ensure!(n_max >= 1, "n-max must be at least 1");
            let mode = match (mode, mu) {
                (ModeArg::Lattice, Some(mu)) => Mode::Lattice(parse_mu(&mu)?),
                (ModeArg::Lattice, None) => bail!("--mode lattice requires --mu"),
                (_, Some(_)) => bail!("--mu is only valid with --mode lattice"),
                (ModeArg::Additive, None) => Mode::Additive,
                (ModeArg::Abelian, None) => Mode::Abelian,
            };
            let mut w = load(&word)?;
            let v = prefix_of(&mut w, prefix)?;
            let limit = if guards.unsafe_large {
                usize::MAX
            } else {
                SPREAD_MAX_IMAGES
            };
            let p = profile_with_limit(v, mode, n_max, limit)?;
            let text = table(
                output.format,
                &["n", "count", "spread"],
                p.rows
                    .iter()
                    .map(|r| vec![json!(r.n), json!(r.count), sum_value(r.spread)]),
                |rows| rows,
            );
            Ok(Report::yes(text, output.out))
        }
        Command::Anchor { morphism } => {
            let phi = parse_morphism(&morphism)?;
            let r = is_anchor(&phi);
            let report = json!({
                "morphism": phi.to_string(),
                "is_anchor": r.is_anchor,
                "weight": r.weight.map(rational),
                "matrix": {
                    "rows": r.matrix.rows,
                    "columns": r.matrix.columns,
                    "entries": r.matrix.entries,
                },
                "witness": r.witness.as_ref().map(|w| json!({
                    "first": w.first.symbols(),
                    "second": w.second.symbols(),
                })),
            });
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            Ok(Report {
                text,
                affirmative: r.is_anchor,
                out: None,
            })
        }
        Command::Powers {
            word,
            k,
            prefix,
            mu,
            slope,
            div,
            blocks,
        } => {
            guards.prefix(prefix)?;
            if !guards.unsafe_large {
                guards.check("power search prefix", prefix, POWER_MAX_PREFIX)?;
            }
            let mut w = load(&word)?;
            let v = prefix_of(&mut w, prefix)?;
            let found = match (slope, mu) {
                (Some(_), Some(_)) => bail!("--slope and --mu cannot be combined"),
                (Some(alpha), None) => find_anchored_power(v, alpha, div, blocks)?,
                (None, mu) => {
                    let search = PowerSearch::new(k)?.with_max_prefix(usize::MAX);
                    match mu {
                        Some(mu) => search.modulo(v, &parse_mu(&mu)?)?,
                        None => search.additive(v)?,
                    }
                }
            };
            let (value, affirmative) = match &found {
                Some(w) => (witness_json(w), true),
                None => (json!({ "found": false, "prefix": prefix }), false),
            };
            let mut text = serde_json::to_string_pretty(&value)?;
            text.push('\n');
            Ok(Report {
                text,
                affirmative,
                out: None,
            })
        }
        Command::Chi {
            word,
            slope,
            m_max,
            output,
        } => {
            ensure!(m_max >= 1, "m-max must be at least 1");
            let len = m_max
                .checked_mul(slope.q() as usize)
                .ok_or_else(|| anyhow::anyhow!("m-max too large"))?;
            guards.prefix(len)?;
            let mut w = load(&word)?;
            let colors = chi_colors(prefix_of(&mut w, len)?, slope);
            let text = table(
                output.format,
                &["m", "chi"],
                colors
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| vec![json!(i + 1), sum_value(c)]),
                |rows| rows,
            );
            Ok(Report::yes(text, output.out))
        }
        Command::Slope {
            word,
            prefix,
            output,
        } => {
            guards.prefix(prefix)?;
            let mut w = load(&word)?;
            let est = slope_estimate(prefix_of(&mut w, prefix)?)?;
            let text = table(
                output.format,
                &["n", "slope_p", "slope_q"],
                est.iter()
                    .map(|(n, s)| vec![json!(n), sum_value(*s.numer()), sum_value(*s.denom())]),
                |rows| rows,
            );
            Ok(Report::yes(text, output.out))
        }
        Command::Factorize {
            word,
            slope,
            prefix,
            greedy,
            start,
            output,
        } => {
            guards.prefix(prefix)?;
            let mut w = load(&word)?;
            let v = prefix_of(&mut w, prefix)?;
            let (cuts, meta) = if greedy {
                let g = greedy_slope_cuts(v, slope, start)?;
                let meta = json!({
                    "start": g.start,
                    "truncated": g.truncated,
                    "max_gap": g.max_gap(),
                });
                (g.cuts, meta)
            } else {
                let f = chi_factorization(v, slope)?;
                let meta = json!({
                    "color": sum_value(f.color),
                    "color_range": [sum_value(f.color_range.0), sum_value(f.color_range.1)],
                    "max_block_len": f.max_block_len(),
                });
                (f.cuts, meta)
            };
            let text = table(
                output.format,
                &["cut"],
                cuts.iter().map(|&c| vec![json!(c)]),
                |rows| {
                    let mut m = meta;
                    m["slope"] = json!(slope.to_string());
                    m["cuts"] = json!(rows
                        .as_array()
                        .expect("rows")
                        .iter()
                        .map(|r| r["cut"].clone())
                        .collect::<Vec<_>>());
                    m
                },
            );
            Ok(Report::yes(text, output.out))
        }
        Command::Spread {
            word,
            n_max,
            prefix,
            output,
        } => {
            guards.prefix(prefix)?;
            guards.n_max(n_max)?;
            ensure!(
                n_max >= 1 && n_max <= prefix,
                "n-max must lie in 1..=prefix"
            );
            let mut w = load(&word)?;
            let v = prefix_of(&mut w, prefix)?;
            let rows = (1..=n_max)
                .map(|n| Ok(vec![json!(n), sum_value(sum_spread(v, n)?)]))
                .collect::<Result<Vec<_>>>()?;
            let text = table(output.format, &["n", "spread"], rows.into_iter(), |r| r);
            Ok(Report::yes(text, output.out))
        }
        Command::Intersect {
            first,
            second,
            n_max,
            prefix,
            output,
        } => {
            guards.prefix(prefix)?;
            guards.n_max(n_max)?;
            ensure!(
                n_max >= 1 && n_max <= prefix,
                "n-max must lie in 1..=prefix"
            );
            let (mut a, mut b) = (load(&first)?, load(&second)?);
            let (va, vb) = (prefix_of(&mut a, prefix)?, prefix_of(&mut b, prefix)?);
            let rows = (1..=n_max)
                .map(|n| Ok(vec![json!(n), json!(factor_set_intersection(va, vb, n)?)]))
                .collect::<Result<Vec<_>>>()?;
            let text = table(output.format, &["n", "shared"], rows.into_iter(), |r| r);
            Ok(Report::yes(text, output.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let written = match &report.out {
                Some(path) => std::fs::write(path, &report.text)
                    .map_err(|e| format!("writing {}: {e}", path.display())),
                None => match std::io::stdout().lock().write_all(report.text.as_bytes()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                        Err(format!("writing stdout: {e}"))
                    }
                    _ => Ok(()),
                },
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.affirmative {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! `biorder`: reproducible experiments with bi-orders of free products.
//!
//! Exit status: 0 when every check passes, 1 on a mathematical failure,
//! 2 on malformed input.

mod plot;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use biorder::aut::AutWord;
use biorder::noniso::{nonisolation_witness_with, ConjugatorScope, NonIsoInput};
use biorder::oracle::{
    check_biinvariance, compare, positive_cone_ball, pullback, MagnusOrder, OrderOracle,
    RealizedOrder, SharedOracle,
};
use biorder::pl::{make_tau, standard_generator};
use biorder::rational::{fmt_rational, parse_rational};
use biorder::realization::{
    dynbi_failures, dynnol_failures, extension_failures, merge_with, standard_realization,
    Realization,
};
use biorder::saturate::{cone_saturate_with, replay, ConeStatus, Limits};
use biorder::types::{check_window, separation_evidence, ThirdInequality, TypeAlphaOrder, Window};
use biorder::{Exec, FactorSpec, PLMap, Rational, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn word(s: &str) -> Result<Word, String> {
    s.parse::<Word>().map_err(|e| format!("{s:?}: {e}"))
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "biorder",
    version,
    about = "Exact experiments with bi-orders of free products"
)]
struct Cli {
    /// Run ball scans on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    /// Also write the report to this file (for `plot`: the output prefix).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two words: prints less, equal or greater.
    Compare {
        #[command(flatten)]
        order: OrderArgs,
        #[arg(value_parser = word)]
        u: Word,
        #[arg(value_parser = word)]
        v: Word,
    },
    /// List the positive words of a ball.
    Cone {
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Audit bi-invariance on a ball.
    Biinv {
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Merge two factor realizations and audit the result.
    Merge {
        #[command(flatten)]
        real: RealizationArgs,
        /// Radius of the exhaustive merging check.
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = 3)]
        biinv_radius: usize,
        #[arg(long, default_value_t = 3)]
        dynbi_radius: usize,
        /// Ball radius of the domination proxy (0 skips it).
        #[arg(long, default_value_t = 0)]
        dynnol_radius: usize,
        #[arg(long, default_value_t = 8)]
        power_bound: i64,
        /// Save the merged realization in text form.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Build two bi-orders positive on a chain and a pair they disagree on.
    Noniso {
        #[command(flatten)]
        real: RealizationArgs,
        /// Chain elements separated by ';'.
        #[arg(long, default_value = "a;b;ab")]
        chain: String,
        #[arg(long, default_value_t = 4)]
        search: usize,
        #[arg(long, default_value_t = 2)]
        audit: usize,
        /// Minimize over all subwords instead of tails.
        #[arg(long)]
        all_subwords: bool,
    },
    /// Type-α order: Conrad values, window checks and a bi-invariance audit.
    Type {
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        /// Bi-invariance audit radius (0 skips it).
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Window as k,l,m,n; repeatable.
        #[arg(long = "window")]
        windows: Vec<String>,
        #[arg(long, value_enum, default_value_t = Third::Corrected)]
        third: Third,
        #[arg(value_parser = word)]
        words: Vec<Word>,
    },
    /// Orbit-separation evidence for two type-α orders.
    Separate {
        #[arg(long, value_parser = rational, default_value = "3/2")]
        alpha: Rational,
        #[arg(long, value_parser = rational, default_value = "5/2")]
        beta: Rational,
        #[arg(long, default_value = "4,3,7,4")]
        w1: String,
        #[arg(long, default_value = "9,4,8,3")]
        w2: String,
        #[arg(long, default_value_t = 3)]
        aut_len: usize,
    },
    /// Saturate a seed set under products and conjugation.
    Saturate {
        #[arg(required = true, value_parser = word)]
        seeds: Vec<Word>,
        #[arg(long, default_value_t = 24)]
        bound: u64,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 200_000)]
        max_words: usize,
        /// Exit 1 unless the outcome matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Breakpoint CSV (stdout) and SVG (`--out` prefix) of a PL map.
    Plot {
        /// Map in `offset; (x,y) ...` form.
        #[arg(long, conflicts_with_all = ["generator", "tau"])]
        map: Option<String>,
        /// Standard generator with this critical point.
        #[arg(long, value_parser = rational, conflicts_with = "tau")]
        generator: Option<Rational>,
        /// `t',t'',t''',u,v`.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        from: Option<Rational>,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        to: Option<Rational>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Third {
    Corrected,
    Printed,
}

impl From<Third> for ThirdInequality {
    fn from(t: Third) -> Self {
        match t {
            Third::Corrected => ThirdInequality::Corrected,
            Third::Printed => ThirdInequality::Printed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Expect {
    Contradiction,
    Consistent,
}

/// Where a realization comes from: a file, or a merge of two factor specs.
#[derive(Args)]
struct RealizationArgs {
    /// Realization text file; overrides --g/--h.
    #[arg(long)]
    realization: Option<PathBuf>,
    /// First factor: Z@c, Z@c:scale or Z2@c.
    #[arg(long, default_value = "Z@0")]
    g: String,
    #[arg(long, default_value = "Z@0")]
    h: String,
    #[arg(long, value_parser = rational, default_value = "1/10")]
    eps: Rational,
    /// Merge-certificate radius used when building from --g/--h.
    #[arg(long, default_value_t = 3)]
    merge_radius: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

impl RealizationArgs {
    fn specs(&self) -> Result<(Realization, Realization), CliError> {
        let g: FactorSpec = self.g.parse().map_err(input)?;
        let h: FactorSpec = self.h.parse().map_err(input)?;
        Ok((standard_realization(&g), standard_realization(&h)))
    }

    fn load(&self, exec: Exec, report: &mut String) -> Result<Realization, CliError> {
        if let Some(path) = &self.realization {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            return text.parse().map_err(input);
        }
        let (g, h) = self.specs()?;
        let m = merge_with(
            &g,
            &h,
            &self.eps,
            self.merge_radius,
            self.seed,
            exec,
            |_| true,
        )
        .map_err(input)?;
        writeln!(
            report,
            "# merged {} * {} at radius {} (attempt {})",
            self.g, self.h, self.merge_radius, m.attempt
        )
        .unwrap();
        Ok(m.realization)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderKind {
    Magnus,
    /// Type-α order over the Magnus order (needs --alpha).
    Alpha,
    /// Order read off a realization.
    Realized,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long, value_enum, default_value_t = OrderKind::Magnus)]
    order: OrderKind,
    #[arg(long, value_parser = rational)]
    alpha: Option<Rational>,
    /// Pull the order back along Nielsen moves, e.g. "mult swap".
    #[arg(long)]
    pullback: Option<String>,
    #[command(flatten)]
    real: RealizationArgs,
}

impl OrderArgs {
    fn build(&self, exec: Exec, report: &mut String) -> Result<SharedOracle, CliError> {
        let base: SharedOracle = match self.order {
            OrderKind::Magnus => Arc::new(MagnusOrder),
            OrderKind::Alpha => {
                let alpha = self
                    .alpha
                    .clone()
                    .ok_or_else(|| CliError::Input("--order alpha needs --alpha".into()))?;
                Arc::new(TypeAlphaOrder::magnus(alpha).map_err(input)?)
            }
            OrderKind::Realized => Arc::new(RealizedOrder::new(self.real.load(exec, report)?)),
        };
        match &self.pullback {
            None => Ok(base),
            Some(s) => {
                let sigma: AutWord = s.parse().map_err(input)?;
                Ok(Arc::new(pullback(base, sigma)))
            }
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn ordering_word(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "less",
        std::cmp::Ordering::Equal => "equal",
        std::cmp::Ordering::Greater => "greater",
    }
}

/// Runs the command, appending to `report`; `Ok(false)` is a mathematical
/// failure.
fn run(cli: &Cli, report: &mut String) -> Result<bool, CliError> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let r = report;
    match &cli.command {
        Command::Compare { order, u, v } => {
            let o = order.build(exec, r)?;
            writeln!(r, "{}", ordering_word(compare(o.as_ref(), u, v))).unwrap();
            Ok(true)
        }
        Command::Cone { order, radius } => {
            let o = order.build(exec, r)?;
            let cone = positive_cone_ball(o.as_ref(), *radius);
            for w in &cone {
                writeln!(r, "{w}").unwrap();
            }
            let total = biorder::ball(&o.generators(), *radius).len();
            writeln!(r, "{} positive / {total} words", cone.len()).unwrap();
            Ok(true)
        }
        Command::Biinv { order, radius } => {
            let o = order.build(exec, r)?;
            let rep = check_biinvariance(o.as_ref(), *radius, exec);
            for v in rep.violations.iter().take(50) {
                writeln!(r, "{v}").unwrap();
            }
            writeln!(
                r,
                "{} violations / {} words",
                rep.violations.len(),
                rep.words
            )
            .unwrap();
            writeln!(
                r,
                "{} triples, {} distinct words signed",
                rep.triples, rep.signed
            )
            .unwrap();
            Ok(rep.is_clean())
        }
        Command::Merge {
            real,
            radius,
            biinv_radius,
            dynbi_radius,
            dynnol_radius,
            power_bound,
            save,
        } => {
            let (g, h) = real.specs()?;
            let m =
                merge_with(&g, &h, &real.eps, *radius, real.seed, exec, |_| true).map_err(input)?;
            let merged = &m.realization;
            writeln!(r, "attempt {}", m.attempt).unwrap();
            writeln!(r, "conjugator {}", m.conjugator).unwrap();
            writeln!(r, "norm {}", fmt_rational(&m.conjugator.norm())).unwrap();
            write!(r, "{merged}").unwrap();
            write!(r, "{}", m.report).unwrap();
            writeln!(
                r,
                "{} merge report at radius {}",
                verdict(m.report.is_clean()),
                radius
            )
            .unwrap();
            let bi = check_biinvariance(&RealizedOrder::new(merged.clone()), *biinv_radius, exec);
            writeln!(
                r,
                "{} bi-invariance: {} violations / {} words",
                verdict(bi.is_clean()),
                bi.violations.len(),
                bi.words
            )
            .unwrap();
            let ext = extension_failures(merged, *power_bound);
            for w in &ext {
                writeln!(r, "EXTENSION {w}").unwrap();
            }
            writeln!(
                r,
                "{} extends factor orders (|k| <= {power_bound})",
                verdict(ext.is_empty())
            )
            .unwrap();
            let dynbi = dynbi_failures(merged, *dynbi_radius, exec);
            for w in &dynbi {
                writeln!(r, "DYNBI {w}").unwrap();
            }
            writeln!(
                r,
                "{} dynbi at radius {dynbi_radius}",
                verdict(dynbi.is_empty())
            )
            .unwrap();
            let unfaithful = merged.germ_faithfulness_failures(*dynbi_radius, exec);
            writeln!(
                r,
                "NOTE germ faithfulness at radius {dynbi_radius}: {} words fix an interval below their critical point",
                unfaithful.len()
            )
            .unwrap();
            let mut ok = m.report.is_clean() && bi.is_clean() && ext.is_empty() && dynbi.is_empty();
            if *dynnol_radius > 0 {
                let fails = dynnol_failures(merged, *dynnol_radius, *power_bound, exec);
                for f in fails.iter().take(50) {
                    writeln!(r, "DYNNOL f={} h={} n={}", f.f, f.h, f.n).unwrap();
                }
                writeln!(
                    r,
                    "{} dynnol proxy at radius {dynnol_radius}, powers <= {power_bound}: {} failures",
                    verdict(fails.is_empty()),
                    fails.len()
                )
                .unwrap();
                ok &= fails.is_empty();
            }
            if let Some(path) = save {
                fs::write(path, merged.to_string()).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            Ok(ok)
        }
        Command::Noniso {
            real,
            chain,
            search,
            audit,
            all_subwords,
        } => {
            let chain: Vec<Word> = chain
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(word)
                .collect::<Result<_, _>>()
                .map_err(CliError::Input)?;
            let realization = real.load(exec, r)?;
            let mut inp = NonIsoInput::new(realization, chain, *search, *audit, real.seed);
            inp.merge_radius = real.merge_radius;
            if *all_subwords {
                inp.scope = ConjugatorScope::Subwords;
            }
            match nonisolation_witness_with(&inp, exec) {
                Ok(wit) => {
                    write!(r, "{wit}").unwrap();
                    writeln!(r, "{} witness", verdict(wit.passed())).unwrap();
                    Ok(wit.passed())
                }
                // an invalid chain is an input error; a failed stage is not
                Err(
                    e @ (biorder::noniso::NonIsoError::NotPositive(_)
                    | biorder::noniso::NonIsoError::BadChain),
                ) => Err(input(e)),
                Err(e) => {
                    writeln!(r, "FAIL {e}").unwrap();
                    Ok(false)
                }
            }
        }
        Command::Type {
            alpha,
            radius,
            windows,
            third,
            words,
        } => {
            let o = TypeAlphaOrder::magnus(alpha.clone()).map_err(input)?;
            for w in words {
                let (p, ps) = o.conrad_values(w);
                let ps = match ps {
                    Some(x) => fmt_rational(&x),
                    None => "-".into(),
                };
                writeln!(r, "{w}: sign {} phi {p} psi {ps}", o.sign(w)).unwrap();
            }
            for s in windows {
                let win: Window = s.parse().map_err(input)?;
                let c = check_window(&o, &win, (*third).into());
                let marks: Vec<&str> = c
                    .holds
                    .iter()
                    .map(|b| if *b { "holds" } else { "fails" })
                    .collect();
                writeln!(
                    r,
                    "window {win}: {} ({})",
                    if c.inside() { "inside" } else { "outside" },
                    marks.join(", ")
                )
                .unwrap();
            }
            if *radius == 0 {
                return Ok(true);
            }
            let rep = check_biinvariance(&o, *radius, exec);
            for v in rep.violations.iter().take(50) {
                writeln!(r, "{v}").unwrap();
            }
            writeln!(
                r,
                "{} violations / {} words",
                rep.violations.len(),
                rep.words
            )
            .unwrap();
            Ok(rep.is_clean())
        }
        Command::Separate {
            alpha,
            beta,
            w1,
            w2,
            aut_len,
        } => {
            let w1: Window = w1.parse().map_err(input)?;
            let w2: Window = w2.parse().map_err(input)?;
            let rep = separation_evidence(alpha, beta, &w1, &w2, *aut_len, exec).map_err(input)?;
            write!(r, "{rep}").unwrap();
            Ok(rep.passed())
        }
        Command::Saturate {
            seeds,
            bound,
            rounds,
            max_words,
            expect,
        } => {
            let limits = Limits {
                max_rounds: *rounds,
                max_words: *max_words,
            };
            let cert = cone_saturate_with(seeds, *bound, limits).map_err(input)?;
            write!(r, "{cert}").unwrap();
            if cert.status == ConeStatus::Contradiction {
                writeln!(r, "replay {}", verdict(replay(seeds, &cert, *bound))).unwrap();
            }
            let got = match cert.status {
                ConeStatus::Contradiction => Expect::Contradiction,
                ConeStatus::Consistent => Expect::Consistent,
            };
            Ok(expect.is_none_or(|e| e == got))
        }
        Command::Plot {
            map,
            generator,
            tau,
            from,
            to,
        } => {
            let m: PLMap = if let Some(text) = map {
                text.parse().map_err(input)?
            } else if let Some(c) = generator {
                standard_generator(c)
            } else if let Some(t) = tau {
                let ps: Vec<Rational> = t
                    .split(',')
                    .map(rational)
                    .collect::<Result<_, _>>()
                    .map_err(CliError::Input)?;
                let [t1, t2, t3, u, v] = &ps[..] else {
                    return Err(CliError::Input(
                        "--tau needs five values t',t'',t''',u,v".into(),
                    ));
                };
                make_tau(t1, t2, t3, u, v).map_err(input)?
            } else {
                PLMap::identity()
            };
            let (lo, hi) = plot::default_range(&m);
            let lo = from.clone().unwrap_or(lo);
            let hi = to.clone().unwrap_or(hi);
            if lo >= hi {
                return Err(CliError::Input("empty plot range".into()));
            }
            writeln!(r, "# map {m}").unwrap();
            r.push_str(&plot::csv(&m));
            if let Some(prefix) = &cli.out {
                let svg_path = prefix.with_extension("svg");
                let csv_path = prefix.with_extension("csv");
                for (path, body) in [
                    (svg_path, plot::svg(&m, &lo, &hi)),
                    (csv_path, plot::csv(&m)),
                ] {
                    fs::write(&path, body).map_err(|source| CliError::Io { path, source })?;
                }
            }
            Ok(true)
        }
    }
}

/// The invocation as one shell-safe line, for replay.
fn config_header() -> String {
    let args: Vec<String> = std::env::args()
        .skip(1)
        .map(|a| {
            if !a.is_empty()
                && a.chars()
                    .all(|c| c.is_ascii_alphanumeric() || "-_/.,:=@^".contains(c))
            {
                a
            } else {
                format!("'{}'", a.replace('\'', r"'\''"))
            }
        })
        .collect();
    format!("# biorder {}\n", args.join(" "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = config_header();
    let status = match run(&cli, &mut report) {
        Ok(ok) => {
            print!("{report}");
            if !matches!(cli.command, Command::Plot { .. }) {
                if let Some(path) = &cli.out {
                    if let Err(e) = fs::write(path, &report) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    ExitCode::from(status)
}

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubeiso::search::{self, VerifierConfig};
use cubeiso::{
    dist_to_lex_class, lex_boundary, lex_influence, lex_segment, shift, Dyadic, Rational,
    SetFamily, Subset,
};

/// Exact edge-isoperimetry and stability checks on the discrete cube.
///
/// Families are read as JSON: {"n":3,"sets":["111","110"]} or
/// {"n":3,"mask_hex":"c0"}. Exit status: 0 when every check passes, 1 when
/// a counterexample or violation is found, 2 on usage errors.
#[derive(Parser)]
#[command(name = "cubeiso", version)]
struct Cli {
    /// Human-readable output instead of JSON lines / CSV.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lexicographic initial segment of size M on [N] and its boundary.
    Lex { n: usize, m: u64 },
    /// Edge boundary of a family and its excess over the lex segment.
    Boundary { file: PathBuf },
    /// Total influence, or one coordinate's influence.
    Influence {
        file: PathBuf,
        #[arg(long)]
        coord: Option<usize>,
    },
    /// Apply the shift S_{S,T}.
    Shift {
        file: PathBuf,
        /// Comma-separated elements of S (empty for ∅).
        #[arg(long = "S", default_value = "", value_parser = parse_set)]
        s: Subset,
        /// Comma-separated elements of T (empty for ∅).
        #[arg(long = "T", default_value = "", value_parser = parse_set)]
        t: Subset,
    },
    /// Distance to the nearest family weakly isomorphic to the lex segment.
    Dist { file: PathBuf },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// The s(n, m, l) table as CSV with columns n,m,l,s.
    Stable {
        n: usize,
        /// Print the best-constant record instead of the table.
        #[arg(long)]
        best: bool,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// The constructed example families and their closed-form checks.
    Example {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Iso,
    Uniqueness,
    Conjecture,
    Prop41,
    Fraclex,
    Bootstrap,
    Shifting,
    Cascade,
}

#[derive(Args)]
struct RunOpts {
    /// Worker threads; output does not depend on this.
    #[arg(long, env = "CUBE_ISO_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random families drawn at n >= 5.
    #[arg(long)]
    samples: Option<u64>,
    /// Enumerate orbit representatives at n = 5 instead of sampling.
    #[arg(long)]
    orbits: bool,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Constant in dist <= C·(|∂F| - |∂L|).
    #[arg(long = "C", default_value = "2")]
    c: Dyadic,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Subcommand)]
enum Example {
    /// F_{n,s,t}: checks dist = 2·(|∂F| - |∂L|).
    Tightness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// The two-coordinate family: checks the closed forms in t.
    Remark {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
}

fn parse_set(s: &str) -> Result<Subset, String> {
    let elements = s
        .split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| e.parse::<usize>().map_err(|err| format!("{e}: {err}")))
        .collect::<Result<Vec<_>, _>>()?;
    if elements.iter().any(|&e| e == 0 || e > 32) {
        return Err("elements must lie in 1..=32".into());
    }
    Ok(Subset::of(&elements))
}

fn read_family(path: &PathBuf) -> Result<SetFamily> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    SetFamily::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn family_value(f: &SetFamily) -> Value {
    serde_json::to_value(f).expect("serializable")
}

fn rational(r: &Rational) -> Value {
    Value::String(cubeiso::rational_string(r))
}

struct Out {
    pretty: bool,
    buf: Vec<u8>,
}

impl Out {
    fn value(&mut self, v: &Value) {
        let s = if self.pretty {
            serde_json::to_string_pretty(v)
        } else {
            serde_json::to_string(v)
        };
        self.line(&s.expect("serializable"));
    }

    fn record<T: serde::Serialize>(&mut self, v: &T) {
        self.value(&serde_json::to_value(v).expect("serializable"));
    }

    fn line(&mut self, s: &str) {
        self.buf.extend_from_slice(s.as_bytes());
        self.buf.push(b'\n');
    }
}

fn config(n: usize, run: &RunOpts) -> VerifierConfig {
    let mut cfg = VerifierConfig::new(n).with_jobs(run.jobs).with_seed(run.seed);
    if let Some(s) = run.samples {
        cfg.samples = s;
    }
    cfg.orbits = run.orbits;
    cfg
}

/// Returns whether every check passed.
fn run(cli: Cli, out: &mut Out) -> Result<bool> {
    match cli.command {
        Command::Lex { n, m } => {
            let f = lex_segment(n, m)?;
            out.value(&json!({
                "n": n,
                "m": m,
                "family": family_value(&f),
                "boundary": f.edge_boundary_size(),
                "influence": f.total_influence(),
            }));
            Ok(true)
        }
        Command::Boundary { file } => {
            let f = read_family(&file)?;
            let lex = lex_boundary(f.dim(), f.len())?;
            let b = f.edge_boundary_size();
            out.value(&json!({
                "n": f.dim(),
                "m": f.len(),
                "boundary": b,
                "lex_boundary": lex,
                "excess": b as i64 - lex as i64,
                "influence": f.total_influence(),
                "gap": f.total_influence() - lex_influence(f.measure())?,
            }));
            Ok(true)
        }
        Command::Influence { file, coord } => {
            let f = read_family(&file)?;
            match coord {
                Some(i) => out.value(&json!({ "coord": i, "influence": f.influence(i)? })),
                None => {
                    let per = (1..=f.dim())
                        .map(|i| f.influence(i))
                        .collect::<cubeiso::Result<Vec<_>>>()?;
                    out.value(&json!({ "influence": f.total_influence(), "coords": per }));
                }
            }
            Ok(true)
        }
        Command::Shift { file, s, t } => {
            let f = read_family(&file)?;
            let g = shift(&f, s, t)?;
            out.value(&json!({
                "S": s,
                "T": t,
                "family": family_value(&g),
                "size": g.len(),
                "influence_before": f.total_influence(),
                "influence_after": g.total_influence(),
            }));
            Ok(true)
        }
        Command::Dist { file } => {
            let f = read_family(&file)?;
            let lex = lex_boundary(f.dim(), f.len())?;
            out.value(&json!({
                "n": f.dim(),
                "m": f.len(),
                "dist": dist_to_lex_class(&f)?,
                "excess": f.edge_boundary_size() as i64 - lex as i64,
            }));
            Ok(true)
        }
        Command::Verify { suite, opts } => verify(suite, &opts, out),
        Command::Stable { n, best, opts } => {
            let t = search::stability_table(&config(n, &opts))?;
            if best {
                out.value(&json!({
                    "n": n,
                    "mode": t.mode,
                    "best_constant": t.best_ratio().as_ref().map(rational),
                    "witness": t.best_constant,
                }));
            } else if out.pretty {
                out.line(&format!("{:>3} {:>4} {:>4} {:>4}", "n", "m", "l", "s"));
                for (m, l, s) in &t.rows {
                    out.line(&format!("{n:>3} {m:>4} {l:>4} {s:>4}"));
                }
            } else {
                out.buf.extend_from_slice(t.to_csv().as_bytes());
            }
            Ok(true)
        }
        Command::Example { which } => match which {
            Example::Tightness { n, s, t } => {
                let c = search::check_tightness_family(n, s, t)?;
                let f = search::make_tightness_family(n, s, t)?;
                out.value(&json!({
                    "check": c,
                    "holds": c.holds(),
                    "family": family_value(&f),
                }));
                Ok(c.holds())
            }
            Example::Remark { n, t } => {
                let c = search::check_remark_family(n, t)?;
                for check in &c.checks {
                    out.value(&json!({
                        "name": check.name,
                        "computed": check.computed,
                        "expected": check.expected,
                        "holds": check.holds(),
                    }));
                }
                out.value(&json!({ "n": n, "t": t, "mu": c.mu, "eps": c.eps, "holds": c.holds() }));
                Ok(c.holds())
            }
        },
    }
}

fn verify(suite: Suite, opts: &VerifyOpts, out: &mut Out) -> Result<bool> {
    let mut cfg = config(opts.n, &opts.run);
    cfg.conjecture_c = opts.c;
    if opts.c.is_negative() {
        bail!("C must be non-negative");
    }
    match suite {
        Suite::Iso | Suite::Uniqueness => {
            let r = search::verify_iso_and_uniqueness(&cfg)?;
            out.record(&r);
            Ok(match suite {
                Suite::Iso => r.inequality_violation_count == 0,
                _ => r.uniqueness_violation_count == 0,
            })
        }
        Suite::Conjecture => {
            let r = search::verify_conjecture(&cfg)?;
            if out.pretty {
                out.line(&format!(
                    "n = {}  C = {}  families = {}  counterexamples = {}  max ratio = {}",
                    r.n,
                    r.c,
                    r.families,
                    r.counterexample_count,
                    r.max_ratio_value()
                        .map_or("-".into(), |x| cubeiso::rational_string(&x))
                ));
                if let Some(m) = &r.max_ratio {
                    out.line(&format!("  attained by {} (m = {}, l = {}, dist = {})", m.family, m.m, m.l, m.dist));
                }
            } else {
                for line in r.jsonl() {
                    out.line(&line);
                }
            }
            Ok(r.counterexample_count == 0)
        }
        Suite::Prop41 => {
            let r = search::verify_prop41_dichotomy(&cfg)?;
            out.record(&r);
            Ok(true)
        }
        Suite::Fraclex => {
            let r = search::verify_fraclex(&cfg)?;
            out.record(&r);
            Ok(r.passed())
        }
        Suite::Bootstrap => {
            let r = search::verify_bootstrapping(&cfg)?;
            out.record(&r);
            Ok(r.passed())
        }
        Suite::Shifting => {
            let r = search::verify_shifting(&cfg)?;
            out.record(&r);
            Ok(r.passed())
        }
        Suite::Cascade => {
            let r = search::verify_cascade(&cfg)?;
            out.record(&r);
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out {
        pretty: cli.pretty,
        buf: Vec::new(),
    };
    let result = run(cli, &mut out);
    let _ = io::stdout().write_all(&out.buf);
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

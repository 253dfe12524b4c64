//! `hyperbloch` command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperbloch::bloch_abstract::{bands_ensemble_csv, bands_grid_csv, field, PeriodicOperator};
use hyperbloch::bloch_hyperbolic::{norm_summary_csv, section, GaugeFrame, Tiling};
use hyperbloch::gamma_fn::GammaFunction;
use hyperbloch::group::parse_element;
use hyperbloch::hyperbolic::{construct_group, dirichlet_cell, Curvature};
use hyperbloch::magnetic::{flux_report, uniform_potential};
use hyperbloch::packet::WavePacket;
use hyperbloch::rep_variety::{ensemble, ensemble_cached, expectation_from, RepEnsemble, SamplerOptions, DEFAULT_GRID_CAP};
use hyperbloch::verify::{format_table, run_suite, VerifyConfig};
use hyperbloch::Error;

#[derive(Parser, Debug)]
#[command(name = "hyperbloch", version, about = "Bloch theory on surface groups")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand; echoed into output headers.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Surface genus (>= 2).
    #[arg(long, global = true, default_value_t = 2)]
    genus: usize,
    /// Representation rank n.
    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,
    /// Ensemble size N.
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    /// Root seed for every random stream.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Jacobian grid resolution m per angle (rank one sweeps).
    #[arg(long, global = true, default_value_t = 8)]
    grid: usize,
    /// Word-length cutoff for tilings and unfolding.
    #[arg(long, global = true, default_value_t = 5)]
    cutoff: usize,
    /// Curvature convention.
    #[arg(long, global = true, default_value_t = -1, allow_hyphen_values = true)]
    curvature: i32,
    /// Sampler tolerance on the relator residual.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for checksummed ensemble caches.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build (or load from the cache) a representation ensemble.
    Sample,
    /// Table of E_n(γ) over a range of ranks.
    Expect {
        /// Group element, e.g. "[a1,b1]" or "a1 B2".
        #[arg(long)]
        gamma: String,
        /// Comma-separated ranks; defaults to --rank.
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<usize>,
    },
    /// Band sweep: Jacobian grid for rank one, ensemble otherwise.
    Bands {
        /// Coefficient file (Γ-function JSON); defaults to the adjacency operator.
        #[arg(long)]
        coefficients: Option<PathBuf>,
    },
    /// Abstract or hyperbolic Bloch transform of a function file.
    Transform {
        #[arg(long, value_enum)]
        kind: TransformKind,
        /// Γ-function JSON (abstract) or packet JSON (hyperbolic).
        #[arg(long)]
        input: PathBuf,
        /// Quadrature step as a fraction of the cell's chart radius.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Optional CSV of per-member section norms (hyperbolic only).
        #[arg(long)]
        norms_out: Option<PathBuf>,
    },
    /// Flux of the uniform field through the cell.
    Flux {
        /// Field strength b.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "quanta")]
        b: Option<f64>,
        /// Field strength in flux quanta: b = 2πk/Area.
        #[arg(long, allow_hyphen_values = true)]
        quanta: Option<f64>,
    },
    /// Run the invariant suite; exit code 1 if any check fails.
    Verify {
        /// Randomized cases per check.
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TransformKind {
    Abstract,
    Hyperbolic,
}

enum Failure {
    Verification,
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Engine(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::TwistInconsistent(_) => 3,
        _ => 2,
    }
}

impl RunConfig {
    fn curvature(&self) -> Result<Curvature, Error> {
        Curvature::from_value(self.curvature)
    }

    fn opts(&self) -> SamplerOptions {
        SamplerOptions { tol: self.tol, ..SamplerOptions::default() }
    }

    fn to_json(&self, command: &str) -> Value {
        json!({
            "command": command,
            "genus": self.genus,
            "rank": self.rank,
            "samples": self.samples,
            "seed": self.seed,
            "grid": self.grid,
            "cutoff": self.cutoff,
            "curvature": self.curvature,
            "tol": self.tol,
        })
    }

    fn header(&self, command: &str) -> String {
        format!("# hyperbloch {} config {}\n", env!("CARGO_PKG_VERSION"), self.to_json(command))
    }

    fn ensemble(&self, rank: usize) -> Result<RepEnsemble, Error> {
        match &self.cache_dir {
            Some(dir) => ensemble_cached(dir, self.genus, rank, self.samples, self.seed, &self.opts()),
            None => ensemble(self.genus, rank, self.samples, self.seed, &self.opts()),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    /// JSON outputs carry the config as an extra top-level field.
    fn emit_json(&self, command: &str, mut v: Value) -> Result<(), Failure> {
        if let Value::Object(m) = &mut v {
            m.insert("config".into(), self.to_json(command));
        }
        let mut s = serde_json::to_string_pretty(&v).map_err(Error::from)?;
        s.push('\n');
        self.emit(&s)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let c = &cli.config;
    match &cli.command {
        Command::Sample => {
            let ens = c.ensemble(c.rank)?;
            let v: Value = serde_json::from_str(&ens.to_json()?).map_err(Error::from)?;
            c.emit_json("sample", v)
        }
        Command::Expect { gamma, ranks } => {
            let g = parse_element(c.genus, gamma)?;
            let ranks = if ranks.is_empty() { vec![c.rank] } else { ranks.clone() };
            let mut out = c.header("expect");
            out.push_str("gamma,rank,samples,re,im,stderr\n");
            for n in ranks {
                let e = if g.in_commutator_subgroup() {
                    expectation_from(&c.ensemble(n)?, &g)?
                } else {
                    // zero without sampling
                    hyperbloch::rep_variety::expectation(&g, n, c.samples, c.seed, &c.opts())?
                };
                writeln!(out, "\"{}\",{n},{},{},{},{}", gamma, e.samples, e.value.re, e.value.im, e.stderr)
                    .expect("string write");
            }
            c.emit(&out)
        }
        Command::Bands { coefficients } => {
            let h = match coefficients {
                Some(p) => {
                    let f = GammaFunction::from_json(&std::fs::read_to_string(p)?)?;
                    if f.genus() != c.genus {
                        return Err(Error::GenusMismatch(c.genus, f.genus()).into());
                    }
                    PeriodicOperator::new(c.genus, f.iter().map(|(g, z)| (g.clone(), *z)))?
                }
                None => PeriodicOperator::adjacency(c.genus)?,
            };
            let body = if c.rank == 1 {
                bands_grid_csv(&h, c.grid, DEFAULT_GRID_CAP)?
            } else {
                bands_ensemble_csv(&h, &c.ensemble(c.rank)?)?
            };
            c.emit(&(c.header("bands") + &body))
        }
        Command::Transform { kind, input, step, norms_out } => {
            let text = std::fs::read_to_string(input)?;
            let ens = c.ensemble(c.rank)?;
            match kind {
                TransformKind::Abstract => {
                    let psi = GammaFunction::from_json(&text)?;
                    let f = field(&psi, &ens)?;
                    let members: Vec<Value> = f
                        .values
                        .iter()
                        .enumerate()
                        .map(|(k, a)| {
                            let entries: Vec<[f64; 2]> = (0..a.nrows())
                                .flat_map(|i| (0..a.ncols()).map(move |j| (i, j)))
                                .map(|(i, j)| [a[(i, j)].re, a[(i, j)].im])
                                .collect();
                            json!({"member": k, "matrix": entries})
                        })
                        .collect();
                    c.emit_json("transform", json!({"members": members}))
                }
                TransformKind::Hyperbolic => {
                    let psi = WavePacket::from_json(&text)?;
                    let grp = construct_group(c.genus, c.curvature()?)?;
                    let cell = dirichlet_cell(&grp, 3)?;
                    let quad = cell.quadrature(step * cell.chart_radius())?;
                    let tiling = Tiling::new(grp, cell, c.cutoff)?;
                    let mut samples = Vec::with_capacity(ens.len());
                    for rho in &ens.members {
                        samples.push(section(&psi, &GaugeFrame { rep: rho, tiling: &tiling }, &quad)?);
                    }
                    if let Some(p) = norms_out {
                        std::fs::write(p, c.header("transform") + &norm_summary_csv(&samples, &quad))?;
                    }
                    let sections: Vec<Value> = samples
                        .iter()
                        .enumerate()
                        .map(|(k, s)| serde_json::to_value(s.to_export(k)))
                        .collect::<Result<_, _>>()
                        .map_err(Error::from)?;
                    let cell_json = serde_json::to_value(tiling.cell.to_export(Some(&quad))).map_err(Error::from)?;
                    c.emit_json("transform", json!({"cell": cell_json, "sections": sections}))
                }
            }
        }
        Command::Flux { b, quanta } => {
            let curv = c.curvature()?;
            let b = match (b, quanta) {
                (Some(b), _) => *b,
                (None, Some(k)) => 2.0 * std::f64::consts::PI * k / curv.surface_area(c.genus),
                (None, None) => return Err(Error::InvalidArgument("flux needs --b or --quanta".into()).into()),
            };
            let grp = construct_group(c.genus, curv)?;
            let cell = dirichlet_cell(&grp, 3)?;
            let r = flux_report(&uniform_potential(b, curv), &cell);
            c.emit_json("flux", serde_json::to_value(r).map_err(Error::from)?)
        }
        Command::Verify { cases } => {
            let cfg = VerifyConfig {
                genus: c.genus,
                seed: c.seed,
                curvature: c.curvature()?,
                cutoff: c.cutoff,
                cases: *cases,
                rank: c.rank,
                samples: c.samples.min(64),
            };
            let checks = run_suite(&cfg)?;
            let failed = checks.iter().filter(|k| !k.passed()).count();
            let mut out = c.header("verify");
            out.push_str(&format_table(&checks));
            writeln!(out, "{} checks, {} failed", checks.len(), failed).expect("string write");
            c.emit(&out)?;
            if failed > 0 {
                Err(Failure::Verification)
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

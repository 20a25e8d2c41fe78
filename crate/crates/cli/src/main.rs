//! Command-line interface: identity reports, invariant profiles,
//! certificate verification, pairwise non-degeneration tests and the
//! degeneration graph.
//!
//! Exit codes: 0 on success, 1 on verification failure, 2 on input error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use degen_core::graph::{graph_to_dot, graph_to_json, EdgeEvidence, GraphOptions};
use degen_core::scalars::{parse_scalar, Sym};
use degen_core::{
    build_graph, check_cd, check_necessary_conditions, check_symmetry, components_report,
    invariant_profile, parse_algebra_file, parse_certificate_file, power_series_dims, saturate,
    Algebra, Catalog, Error, NecessaryVerdict, ProfileMode, Verdict, VerifyMode, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "degen",
    version,
    about = "Exact toolkit for degenerations of algebras given by structure constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Identity report: CD flags, symmetry, nilpotency chain
    Check {
        /// Algebra file (or the name of a built-in algebra)
        file: String,
    },
    /// Semicontinuous invariant profile
    Invariants {
        /// Algebra file (or the name of a built-in algebra)
        file: String,
        /// Add power-series dims and the annihilator
        #[arg(long)]
        extended: bool,
        /// Specialize parameters first, e.g. --sample alpha=1,beta=2/3
        #[arg(long)]
        sample: Option<String>,
    },
    /// Verify a degeneration certificate
    Verify {
        /// Certificate file
        file: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Random parameter points in sampled mode
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Fix the sampling RNG
        #[arg(long)]
        seed: Option<u64>,
        /// Directory of .alg files resolvable from the certificate
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Invariant-based necessary conditions for a degeneration
    Nondeg {
        /// Source algebra file (or built-in name)
        a: String,
        /// Target algebra file (or built-in name)
        b: String,
        #[arg(long)]
        extended: bool,
    },
    /// Build, saturate and report the degeneration graph
    Graph {
        /// Directory of .alg files
        catalog_dir: PathBuf,
        /// Directory of .cert files
        certs_dir: PathBuf,
        /// Write a DOT rendering here
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Random parameter points for closure estimates and sampled certificates
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Fix the sampling RNG
        #[arg(long)]
        seed: Option<u64>,
        /// Do not add the built-in catalog
        #[arg(long)]
        no_builtins: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::CertificateRejected { .. } | Error::GraphInconsistent(_) => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A path to an algebra file, or the name of a built-in algebra.
fn load_algebra_arg(arg: &str) -> Result<Algebra, Error> {
    let path = Path::new(arg);
    if path.exists() {
        return parse_algebra_file(&read_file(path)?);
    }
    Catalog::with_builtins()
        .get(arg)
        .cloned()
        .ok_or_else(|| Error::Io(format!("{arg}: no such file or built-in algebra")))
}

fn parse_sample_arg(spec: &str, a: &Algebra) -> Result<BTreeMap<Sym, degen_core::Scalar>, Error> {
    let mut out = BTreeMap::new();
    for piece in spec.split(',') {
        let eq = piece.find('=').ok_or_else(|| {
            Error::Io(format!("--sample entries look like name=value, got {piece:?}"))
        })?;
        let name = piece[..eq].trim();
        let sym = Sym::new(name);
        if !a.params().contains(&sym) {
            return Err(Error::Io(format!(
                "{} is not a parameter of {}",
                name,
                a.name()
            )));
        }
        let value = parse_scalar(piece[eq + 1..].trim(), a.params())?;
        out.insert(sym, value);
    }
    Ok(out)
}

fn describe_algebra(a: &Algebra) -> String {
    if a.params().is_empty() {
        format!("{} (dim {})", a.name(), a.dim())
    } else {
        let names: Vec<&str> = a.params().iter().map(|p| p.name()).collect();
        format!("{} (dim {}, params {})", a.name(), a.dim(), names.join(", "))
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Check { file } => {
            let a = load_algebra_arg(&file)?;
            let cd = check_cd(&a);
            let sym = check_symmetry(&a);
            let ps = power_series_dims(&a);
            println!("algebra {}", describe_algebra(&a));
            let flag = |b: bool| if b { "yes" } else { "no" };
            println!(
                "CD flags: LL {}, LR {}, RR {} -> {}",
                flag(cd.ll),
                flag(cd.lr),
                flag(cd.rr),
                if cd.is_cd() {
                    "CD-algebra"
                } else {
                    "not a CD-algebra"
                }
            );
            println!("symmetry: {}", sym.describe());
            println!(
                "power dims: {:?} ({}{})",
                ps.dims,
                if ps.nilpotent {
                    "nilpotent"
                } else {
                    "not nilpotent"
                },
                if ps.two_step { ", 2-step" } else { "" }
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants {
            file,
            extended,
            sample,
        } => {
            let mut a = load_algebra_arg(&file)?;
            if let Some(spec) = sample {
                let assignment = parse_sample_arg(&spec, &a)?;
                a = a.substitute_params(&assignment)?;
            }
            let mode = if extended {
                ProfileMode::Extended
            } else {
                ProfileMode::Paper
            };
            let profile = invariant_profile(&a, mode);
            println!("algebra {}", describe_algebra(&a));
            for (label, value, direction) in profile.entries() {
                if direction.is_empty() {
                    println!("{label}: {value}");
                } else {
                    println!("{label}: {value}  [{direction} along a degeneration]");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            file,
            mode,
            samples,
            seed,
            catalog,
        } => {
            let mut cat = Catalog::with_builtins();
            if let Some(dir) = catalog {
                for a in load_algebra_dir(&dir)? {
                    cat.insert(a)?;
                }
            }
            let cert = parse_certificate_file(&read_file(&file)?, &cat)?;
            let opts = VerifyOptions {
                mode: match mode {
                    ModeArg::Exact => VerifyMode::Exact,
                    ModeArg::Sampled => VerifyMode::Sampled,
                },
                samples,
                seed,
                ..VerifyOptions::default()
            };
            match degen_core::verify_certificate(&cert, &opts)? {
                Verdict::Accepted { samples, .. } => {
                    if samples == 0 {
                        println!("certificate {}: accepted (symbolic)", cert.name);
                    } else {
                        println!("certificate {}: accepted ({} samples)", cert.name, samples);
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Rejected { rejection } => {
                    println!("certificate {}: rejected", cert.name);
                    println!("  {rejection}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Nondeg { a, b, extended } => {
            let src = load_algebra_arg(&a)?;
            let tgt = load_algebra_arg(&b)?;
            let mode = if extended {
                ProfileMode::Extended
            } else {
                ProfileMode::Paper
            };
            match check_necessary_conditions(&src, &tgt, mode)? {
                NecessaryVerdict::Possible { proper } => {
                    println!(
                        "{} -> {}: possible{}",
                        src.name(),
                        tgt.name(),
                        if proper {
                            ""
                        } else {
                            " (improper: structurally equal)"
                        }
                    );
                }
                NecessaryVerdict::Blocked { reasons } => {
                    println!("{} -> {}: blocked", src.name(), tgt.name());
                    for r in reasons {
                        println!("  - {r}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph {
            catalog_dir,
            certs_dir,
            dot,
            json,
            samples,
            seed,
            no_builtins,
        } => {
            let mut cat = if no_builtins {
                Catalog::new()
            } else {
                Catalog::with_builtins()
            };
            for a in load_algebra_dir(&catalog_dir)? {
                cat.insert(a)?;
            }
            if cat.is_empty() {
                return Err(Error::Io("catalog is empty".into()));
            }
            let mut certs = Vec::new();
            for path in sorted_files(&certs_dir, "cert")? {
                certs.push(parse_certificate_file(&read_file(&path)?, &cat)?);
            }
            let opts = GraphOptions { samples, seed };
            let g = build_graph(&cat, &certs, &opts)?;
            let g = saturate(&g)?;
            let report = components_report(&g);

            let count = |pred: fn(&EdgeEvidence) -> bool| {
                g.edges.iter().filter(|e| pred(&e.evidence)).count()
            };
            println!(
                "nodes: {}, edges: {} ({} certificates, {} scalings, {} transitive), blocks: {}",
                g.nodes.len(),
                g.edges.len(),
                count(|e| matches!(e, EdgeEvidence::Certificate(_))),
                count(|e| matches!(e, EdgeEvidence::TrivialScaling)),
                count(|e| matches!(e, EdgeEvidence::Transitive { .. })),
                g.blocks.len()
            );
            println!("component candidates: {}", report.candidates.len());
            for c in &report.candidates {
                println!(
                    "  - {} ({}, closure dim estimate {}) dominates {} node(s)",
                    c.name,
                    if c.family { "family" } else { "single algebra" },
                    c.closure_dim,
                    c.dominates.len()
                );
            }
            println!("note: {}", degen_core::graph::COMPONENT_WARNING);

            if let Some(path) = dot {
                fs::write(&path, graph_to_dot(&g))
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            if let Some(path) = json {
                let value = graph_to_json(&g, &report);
                fs::write(&path, format!("{:#}\n", value))
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sorted_files(dir: &Path, extension: &str) -> Result<Vec<PathBuf>, Error> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::Io(e.to_string()))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) == Some(extension) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn load_algebra_dir(dir: &Path) -> Result<Vec<Algebra>, Error> {
    let mut out = Vec::new();
    for path in sorted_files(dir, "alg")? {
        out.extend(degen_core::parse_algebra_blocks(&read_file(&path)?)?);
    }
    Ok(out)
}

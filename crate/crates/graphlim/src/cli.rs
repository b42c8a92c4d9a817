//! Command-line interface: one subcommand per library operation, file-based
//! IO, explicit seeds for anything randomized, machine-readable JSON output
//! (human formatting is a rendering of the same JSON, never a separate code
//! path).
//!
//! Exit status: 0 on success, 1 on domain errors (cap violations, invalid
//! certificates, precondition failures), 2 on usage errors (bad flags,
//! unreadable or unparsable input).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::algebra::{quantum_from_json, QuantumGraph};
use crate::certify::{
    certificate_from_json, certificate_to_json, disprove, search_certificate, verify_certificate,
    witness_to_json, CertRequest,
};
use crate::error::{Error, Result};
use crate::graph::{parse_graph, to_graph6, Graph};
use crate::graphon::{
    cut_distance_graphs, cut_norm, graphon_from_json, model_from_json, step_fn_from_json,
};
use crate::num::{format_rat, rat_f64};
use crate::parameter::{
    connection_matrix, flat_connection_matrix, flat_psd_test, parameter_from_json,
    parameter_to_json, GraphParameter,
};
use crate::random_model::{
    check_consistency, convergence_trace, finite_model_from_json, finite_model_to_json,
    locality_test, model_from_parameter, PrefixSampler,
};
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "graphlim", version, about = "Graph limits, densities, and sum-of-squares certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Densities of a pattern in a graph or a step graphon
    Density {
        /// pattern graph file (graph6 or JSON)
        #[arg(long = "F")]
        f: PathBuf,
        /// target graph file
        #[arg(long = "G")]
        g: Option<PathBuf>,
        /// target graphon file (alternative to --G)
        #[arg(long)]
        graphon: Option<PathBuf>,
    },
    /// Exact cut norm of a symmetric step function
    Cutnorm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Permutation-overlay cut distance between two equal-order graphs
    Cutdist {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
    },
    /// Möbius transform (or its inverse) of a parameter table
    Mobius {
        #[arg(long)]
        param: PathBuf,
        /// apply the inverse (zeta) transform instead
        #[arg(long)]
        inverse: bool,
    },
    /// Lindström-Wilf flat PSD test at label count k
    PsdTest {
        #[arg(long)]
        param: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Connection matrix of a parameter
    Connmat {
        #[arg(long)]
        param: PathBuf,
        #[arg(long)]
        k: usize,
        /// extra-node budget for the index graphs (ignored with --flat)
        #[arg(long, default_value_t = 0)]
        extra: usize,
        /// use the flat index (all graphs on exactly [k])
        #[arg(long)]
        flat: bool,
    },
    /// Build or check exact finite random graph models
    #[command(subcommand)]
    Model(ModelCommand),
    /// Sample W-random prefix graphs from a random graphon model
    Sample {
        #[arg(long)]
        model: PathBuf,
        /// comma-separated prefix sizes, e.g. 4,8,16
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        seed: u64,
    },
    /// Covariance diagnostic for locality on disjoint node sets
    TestLocality {
        #[arg(long)]
        model: PathBuf,
        /// comma-separated node set, e.g. 0,1
        #[arg(long)]
        s: String,
        /// comma-separated node set, disjoint from --s
        #[arg(long)]
        t: String,
        /// pattern graph file
        #[arg(long = "F")]
        f: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Density-discrepancy trace of sampled prefixes against the source
    TraceConvergence {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        seed: u64,
    },
    /// Evaluate a quantum graph against a graph, graphon, or parameter
    Qeval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        graphon: Option<PathBuf>,
        #[arg(long)]
        param: Option<PathBuf>,
    },
    /// Search for a sum-of-squares certificate
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        /// report whether the certified residual is below this value
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        seed: u64,
    },
    /// Re-verify a certificate in exact arithmetic
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Search for a counterexample to x >= 0
    Disprove {
        #[arg(long)]
        input: PathBuf,
        /// number of random graphon restarts after the exhaustive pass
        #[arg(long, default_value_t = 16)]
        budget: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Build the model P(G_n = F) = mobius(f)(F) from a parameter table
    Build {
        #[arg(long)]
        param: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Exact consistency check: marginalize the larger model's last node
    Check {
        /// model on n nodes
        #[arg(long)]
        small: PathBuf,
        /// model on n+1 nodes
        #[arg(long)]
        big: PathBuf,
    },
}

pub struct Outcome {
    pub value: serde_json::Value,
    pub exit: i32,
}

fn ok(value: serde_json::Value) -> Result<Outcome> {
    Ok(Outcome { value, exit: 0 })
}

fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_text(path)?)
}

fn read_quantum(path: &Path) -> Result<QuantumGraph> {
    quantum_from_json(&read_json(path)?)
}

fn read_parameter(path: &Path) -> Result<GraphParameter> {
    parameter_from_json(&read_json(path)?)
}

fn parse_usize_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad {what} entry {p:?}")))
        })
        .collect()
}

fn rat_pair(v: &Rat) -> (String, f64) {
    (format_rat(v), rat_f64(v))
}

/// Run one subcommand and produce its JSON output.
pub fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Density { f, g, graphon } => {
            let pattern = read_graph(&f)?;
            match (g, graphon) {
                (Some(gpath), None) => {
                    let target = read_graph(&gpath)?;
                    let hom = crate::density::hom_count(&pattern, &target)?;
                    let t = crate::density::hom_density(&pattern, &target)?;
                    let (ts, tf) = rat_pair(&t);
                    let mut out = serde_json::json!({
                        "hom": hom,
                        "t": ts,
                        "t_float": tf,
                    });
                    if pattern.n() <= target.n()
                        && target.n() <= crate::density::MAX_INJ_TARGET_NODES
                    {
                        let inj = crate::density::inj_count(&pattern, &target)?;
                        let ti = crate::density::inj_density(&pattern, &target)?;
                        out["inj"] = inj.into();
                        let (tis, tif) = rat_pair(&ti);
                        out["t_inj"] = tis.into();
                        out["t_inj_float"] = tif.into();
                    }
                    ok(out)
                }
                (None, Some(wpath)) => {
                    let w = graphon_from_json(&read_json(&wpath)?)?;
                    let t = crate::density::graphon_density_graphon(&pattern, &w)?;
                    let (ts, tf) = rat_pair(&t);
                    ok(serde_json::json!({ "t": ts, "t_float": tf }))
                }
                _ => Err(Error::InvalidInput(
                    "pass exactly one of --G or --graphon".into(),
                )),
            }
        }

        Command::Cutnorm { input } => {
            let f = step_fn_from_json(&read_json(&input)?)?;
            let v = cut_norm(&f)?;
            let (s, fl) = rat_pair(&v);
            ok(serde_json::json!({ "cut_norm": s, "cut_norm_float": fl }))
        }

        Command::Cutdist { g1, g2 } => {
            let a = read_graph(&g1)?;
            let b = read_graph(&g2)?;
            let v = cut_distance_graphs(&a, &b)?;
            let (s, fl) = rat_pair(&v);
            ok(serde_json::json!({
                "cut_distance": s,
                "cut_distance_float": fl,
                "note": "minimum over node bijections; an upper bound on the true cut distance",
            }))
        }

        Command::Mobius { param, inverse } => {
            let f = read_parameter(&param)?;
            let out = if inverse { f.mobius_inverse()? } else { f.mobius()? };
            ok(parameter_to_json(&out)?)
        }

        Command::PsdTest { param, k } => {
            let f = read_parameter(&param)?;
            let report = flat_psd_test(&f, k)?;
            let witness = match &report.witness {
                None => serde_json::Value::Null,
                Some((g, v)) => serde_json::json!({
                    "graph": crate::graph::to_json(&g.unlabel()),
                    "mobius_value": format_rat(v),
                }),
            };
            ok(serde_json::json!({
                "k": k,
                "psd": report.psd,
                "factorization_ok": report.factorization_ok,
                "witness": witness,
            }))
        }

        Command::Connmat { param, k, extra, flat } => {
            let f = read_parameter(&param)?;
            let m = if flat {
                flat_connection_matrix(&f, k)?
            } else {
                connection_matrix(&f, k, extra)?
            };
            let index: Vec<serde_json::Value> =
                m.index().iter().map(crate::graph::to_json).collect();
            let entries: Vec<Vec<String>> = (0..m.index().len())
                .map(|i| {
                    (0..m.index().len())
                        .map(|j| format_rat(m.entries().get(i, j)))
                        .collect()
                })
                .collect();
            ok(serde_json::json!({
                "k": k,
                "flat": flat,
                "index": index,
                "entries": entries,
                "psd": m.is_psd(),
            }))
        }

        Command::Model(ModelCommand::Build { param, n }) => {
            let f = read_parameter(&param)?;
            let m = model_from_parameter(&f, n)?;
            ok(finite_model_to_json(&m)?)
        }

        Command::Model(ModelCommand::Check { small, big }) => {
            let ms = finite_model_from_json(&read_json(&small)?)?;
            let mb = finite_model_from_json(&read_json(&big)?)?;
            let dev = check_consistency(&ms, &mb)?;
            let (s, fl) = rat_pair(&dev);
            ok(serde_json::json!({
                "max_deviation": s,
                "max_deviation_float": fl,
                "consistent": dev.is_zero(),
            }))
        }

        Command::Sample { model, sizes, seed } => {
            let m = model_from_json(&read_json(&model)?)?;
            let sizes = parse_usize_list(&sizes, "size")?;
            let mut sampler = PrefixSampler::new(&m, seed);
            let mut prefixes = vec![];
            for n in sizes {
                let g = sampler.sample_prefix(n)?;
                prefixes.push(serde_json::json!({ "n": n, "graph6": to_graph6(&g)? }));
            }
            ok(serde_json::json!({ "seed": seed, "prefixes": prefixes }))
        }

        Command::TestLocality { model, s, t, f, samples, seed } => {
            let m = model_from_json(&read_json(&model)?)?;
            let s_nodes = parse_usize_list(&s, "--s")?;
            let t_nodes = parse_usize_list(&t, "--t")?;
            let pattern = read_graph(&f)?;
            let report = locality_test(&m, &s_nodes, &t_nodes, &pattern, samples, seed)?;
            ok(serde_json::to_value(report)?)
        }

        Command::TraceConvergence { model, sizes, seed } => {
            let m = model_from_json(&read_json(&model)?)?;
            let sizes = parse_usize_list(&sizes, "size")?;
            let trace = convergence_trace(&m, &sizes, seed)?;
            let rows: Vec<serde_json::Value> = trace
                .iter()
                .map(|(n, d)| {
                    let (s, fl) = rat_pair(d);
                    serde_json::json!({ "n": n, "discrepancy": s, "discrepancy_float": fl })
                })
                .collect();
            ok(serde_json::json!({ "seed": seed, "trace": rows }))
        }

        Command::Qeval { input, graph, graphon, param } => {
            let x = read_quantum(&input)?;
            let v = match (graph, graphon, param) {
                (Some(p), None, None) => x.evaluate_graph(&read_graph(&p)?)?,
                (None, Some(p), None) => {
                    x.evaluate_graphon(&graphon_from_json(&read_json(&p)?)?)?
                }
                (None, None, Some(p)) => x.evaluate_parameter(&read_parameter(&p)?)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "pass exactly one of --graph, --graphon, --param".into(),
                    ))
                }
            };
            let (s, fl) = rat_pair(&v);
            ok(serde_json::json!({ "value": s, "value_float": fl }))
        }

        Command::Certify { input, m, eps, seed } => {
            let x = read_quantum(&input)?;
            let cert = search_certificate(&CertRequest::new(x, m, seed))?;
            let mut out = certificate_to_json(&cert);
            if let Some(eps) = eps {
                out["eps"] = eps.into();
                out["meets_eps"] = (rat_f64(&cert.residual_norm) <= eps).into();
            }
            ok(out)
        }

        Command::Verify { input, cert } => {
            let x = read_quantum(&input)?;
            let c = certificate_from_json(&read_json(&cert)?)?;
            let report = verify_certificate(&x, &c)?;
            let exit = if report.valid { 0 } else { 1 };
            Ok(Outcome {
                value: serde_json::to_value(report)?,
                exit,
            })
        }

        Command::Disprove { input, budget, seed } => {
            let x = read_quantum(&input)?;
            let w = disprove(&x, budget, seed)?;
            ok(witness_to_json(&w))
        }
    }
}

fn render_human(value: &serde_json::Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_human(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {v}\n")),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for v in items {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_human(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {v}\n")),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{value}\n")),
    }
}

/// Parse-and-run entry point used by the binary; returns the process exit
/// status.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&outcome.value)
                        .expect("output value serializes");
                    s.push('\n');
                    s
                }
                Format::Human => {
                    let mut s = String::new();
                    render_human(&outcome.value, 0, &mut s);
                    s
                }
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) => 2,
                _ => 1,
            }
        }
    }
}

//! Command-line interface.
//!
//! Exit codes: 0 success, 1 unsatisfiable or refuted, 2 usage or input
//! error, 3 precondition violation. Errors go to stderr as one JSON object.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::choose5::{color_planar_5lists, Choose5Error};
use crate::discharging::{
    audit_minimal_counterexample, check_claim2_reducible, check_claim3_reducible, DischargeError, HexagonMode,
};
use crate::gadgets::{self, VerifyOptions};
use crate::girth5::{color_girth5_3lists, Girth5Error};
use crate::graph::{is_valid_coloring, Coloring, ListAssignment, SignedGraph};
use crate::io::{coloring_json, parse_instance, to_dot, to_pretty, write_instance, Instance};
use crate::planar::{embed, RotationEmbedding};
use crate::solver::{solve, Outcome};
use crate::{random, Charge};

pub const OK: i32 = 0;
pub const REFUTED: i32 = 1;
pub const USAGE: i32 = 2;
pub const PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sigcolor", version, about = "List coloring of signed planar graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Instance JSON file; stdin when absent or "-".
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact search for an L-coloring.
    Solve(Input),
    /// Color a planar graph from lists of size at least 5.
    Color5 {
        #[command(flatten)]
        input: Input,
        /// Re-verify the coloring before printing it.
        #[arg(long)]
        check: bool,
    },
    /// Color a planar graph from 3-lists.
    Color3 {
        #[command(flatten)]
        input: Input,
        /// Require girth at least 5 (the only supported class).
        #[arg(long, required = true)]
        girth5: bool,
        #[arg(long)]
        check: bool,
    },
    /// Print a gadget instance.
    Gadget {
        #[arg(long, value_enum)]
        name: GadgetName,
    },
    /// Run a gadget verifier.
    Verify {
        #[arg(long, value_parser = ["4", "10"])]
        thm: String,
        /// Random trials on single gadget copies.
        #[arg(long, default_value_t = VerifyOptions::default().trials)]
        samples: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
    /// Discharging audit and reducibility checks.
    Discharge {
        #[command(subcommand)]
        what: Discharge,
    },
    /// Compute a plane embedding.
    Embed(Input),
    /// Export to another format.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long, required = true)]
        dot: bool,
    },
    /// Generate a random plane instance.
    Random {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Forbidden circuit length for `no-k-circuit`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Attach random lists of this size.
        #[arg(long)]
        lists: Option<usize>,
        /// Largest absolute color in random lists.
        #[arg(long, default_value_t = 7)]
        colors: i64,
        /// Probability of a negative edge.
        #[arg(long, default_value_t = 0.0)]
        negative: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Discharge {
    /// Charges, transfers, checkable conditions and verdict for a plane graph.
    Audit(Input),
    /// Chorded 6-circuit reducibility.
    Claim2 {
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chorded 10-circuit strategy check.
    Claim3 {
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GadgetName {
    G3,
    H,
    Thm4,
    T,
    Thm10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Planar,
    NoKCircuit,
    Girth5,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure { code: USAGE, kind: "usage", message: message.to_string() }
    }

    fn precondition(message: impl ToString) -> Failure {
        Failure { code: PRECONDITION, kind: "precondition", message: message.to_string() }
    }

    fn refuted(message: impl ToString) -> Failure {
        Failure { code: REFUTED, kind: "refuted", message: message.to_string() }
    }
}

type Exit = Result<(i32, String), Failure>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return OK;
            }
            let _ = writeln!(err, "{}", json!({"kind": "usage", "error": e.to_string().trim()}));
            return USAGE;
        }
    };
    match execute(cli.command, stdin) {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "{}", json!({"kind": f.kind, "error": f.message}));
            f.code
        }
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<Instance, Failure> {
    let mut text = String::new();
    match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(Failure::usage)?;
        }
    }
    parse_instance(&text).map_err(Failure::usage)
}

fn need_lists(inst: &Instance) -> Result<&ListAssignment, Failure> {
    inst.lists.as_ref().ok_or_else(|| Failure::usage("instance has no lists"))
}

fn plane(inst: Instance) -> Result<RotationEmbedding, Failure> {
    match inst.embedding {
        Some(e) => Ok(e),
        None => embed(&inst.graph).map_err(Failure::precondition),
    }
}

fn colored(g: &SignedGraph, lists: &ListAssignment, c: &Coloring, check: bool) -> Exit {
    if check && !is_valid_coloring(g, Some(lists), c) {
        return Err(Failure::refuted("coloring failed verification"));
    }
    let mut v = json!({"status": "ok", "coloring": coloring_json(g, c)});
    if check {
        v["checked"] = json!(true);
    }
    Ok((OK, to_pretty(&v)))
}

fn report(passed: bool, v: &serde_json::Value) -> Exit {
    Ok((if passed { OK } else { REFUTED }, to_pretty(v)))
}

fn execute(cmd: Command, stdin: &mut dyn Read) -> Exit {
    match cmd {
        Command::Solve(input) => {
            let inst = read_input(&input, stdin)?;
            let lists = need_lists(&inst)?;
            let s = solve(&inst.graph, lists).map_err(Failure::usage)?;
            match s.outcome {
                Outcome::Sat(c) => Ok((
                    OK,
                    to_pretty(&json!({"status": "SAT", "coloring": coloring_json(&inst.graph, &c), "nodes": s.nodes})),
                )),
                Outcome::Unsat => Ok((REFUTED, to_pretty(&json!({"status": "UNSAT", "nodes": s.nodes})))),
            }
        }
        Command::Color5 { input, check } => {
            let inst = read_input(&input, stdin)?;
            let lists = need_lists(&inst)?;
            match color_planar_5lists(&inst.graph, lists) {
                Ok(c) => colored(&inst.graph, lists, &c, check),
                Err(e @ (Choose5Error::NotPlanar(_) | Choose5Error::PreconditionViolated(_))) => {
                    Err(Failure::precondition(e))
                }
                Err(e) => Err(Failure::refuted(e)),
            }
        }
        Command::Color3 { input, girth5: _, check } => {
            let inst = read_input(&input, stdin)?;
            let lists = need_lists(&inst)?;
            match color_girth5_3lists(&inst.graph, lists) {
                Ok(c) => colored(&inst.graph, lists, &c, check),
                Err(e @ Girth5Error::InternalInvariantBroken(_)) => Err(Failure::refuted(e)),
                Err(e) => Err(Failure::precondition(e)),
            }
        }
        Command::Gadget { name } => {
            let gi = match name {
                GadgetName::G3 => gadgets::build_g3(),
                GadgetName::H => gadgets::build_h(),
                GadgetName::Thm4 => gadgets::build_theorem4_instance(),
                GadgetName::T => gadgets::build_t(),
                GadgetName::Thm10 => gadgets::build_theorem10_instance(),
            };
            Ok((OK, write_instance(gi.graph(), Some(&gi.lists), Some(&gi.embedding))))
        }
        Command::Verify { thm, samples, seed } => {
            let opts = VerifyOptions { trials: samples, seed, ..VerifyOptions::default() };
            let res = if thm == "4" { gadgets::verify_theorem4(opts) } else { gadgets::verify_theorem10(opts) };
            match res {
                Ok(r) => Ok((OK, r.to_json() + "\n")),
                Err(gadgets::GadgetError::VerificationFailed { report, .. }) => Ok((REFUTED, report.to_json() + "\n")),
                Err(e) => Err(Failure::refuted(e)),
            }
        }
        Command::Discharge { what } => match what {
            Discharge::Audit(input) => {
                let emb = plane(read_input(&input, stdin)?)?;
                match audit_minimal_counterexample::<Charge>(&emb) {
                    Ok(a) => report(!a.is_contradiction(), &a.to_json()),
                    Err(e @ DischargeError::Disconnected) => Err(Failure::precondition(e)),
                }
            }
            Discharge::Claim2 { exhaustive, samples, seed } => {
                let mode = match (exhaustive, samples) {
                    (true, _) => HexagonMode::SMALL,
                    (false, Some(samples)) => HexagonMode::Randomized { seed, samples },
                    (false, None) => return Err(Failure::usage("give --exhaustive or --samples")),
                };
                let r = check_claim2_reducible(mode);
                report(r.passed(), &r.to_json())
            }
            Discharge::Claim3 { samples, seed } => {
                let r = check_claim3_reducible(seed, samples);
                report(r.passed(), &r.to_json())
            }
        },
        Command::Embed(input) => {
            let inst = read_input(&input, stdin)?;
            match embed(&inst.graph) {
                Ok(emb) => Ok((OK, write_instance(&inst.graph, inst.lists.as_ref(), Some(&emb)))),
                Err(e) => Ok((REFUTED, to_pretty(&json!({"planar": false, "reason": e.to_string()})))),
            }
        }
        Command::Export { input, dot: _ } => {
            let inst = read_input(&input, stdin)?;
            Ok((OK, to_dot(&inst.graph, inst.lists.as_ref())))
        }
        Command::Random { class, n, seed, k, lists, colors, negative } => {
            if !(0.0..=1.0).contains(&negative) {
                return Err(Failure::usage("--negative must lie in [0, 1]"));
            }
            if class == Class::NoKCircuit && k < 3 {
                return Err(Failure::usage("--k must be at least 3"));
            }
            let mut r = random::rng(seed);
            let mut emb = match class {
                Class::Planar => random::planar(n, 0.3, &mut r),
                Class::NoKCircuit => random::no_k_circuit(n, k, &mut r),
                Class::Girth5 => random::girth5(n, &mut r),
            };
            random::sign_embedding(&mut emb, negative, &mut r);
            let l = match lists {
                Some(size) if size as i64 > 2 * colors + 1 => {
                    return Err(Failure::usage("--lists exceeds the color range"))
                }
                Some(size) => Some(random::lists(emb.graph().len(), size, -colors, colors, &mut r)),
                None => None,
            };
            Ok((OK, write_instance(emb.graph(), l.as_ref(), Some(&emb))))
        }
    }
}

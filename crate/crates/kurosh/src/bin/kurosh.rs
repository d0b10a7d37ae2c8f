//! Command-line front end: batch verification of subgroup ranks, membership,
//! intersections and the two intersection-rank inequalities, plus builders for
//! the extremal families and Graphviz export.
//!
//! Exit codes: 0 — computed and every asserted property holds; 2 — a bound or
//! expected equality fails; 3 — indeterminate (a guard was exceeded or a
//! search space was exhausted); 1 — invalid input.

use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand};

use kurosh::amalgam::tau;
use kurosh::error::{Error, Result};
use kurosh::graph::SubgroupGraph;
use kurosh::input::Session;
use kurosh::report::{
    ratio_string, render, AllCasesReport, BoundReport, CaseLiftReport, IntersectReport,
    MemberReport, PaperCaseReport, RankReport, SubgroupSummary, Theorem2Report, SCHEMA,
};
use kurosh::verify::{intersection_bound, theorem2};
use kurosh::{build_case, lift_case, verify_sharpness, Automaton};

#[derive(Parser)]
#[command(
    name = "kurosh",
    version,
    about = "Ranks, intersections and intersection-rank bounds for factor-free subgroups \
             of free products of finite groups and of amalgams with finite normal edge group"
)]
struct Cli {
    /// Attach wall-clock timings to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Abort intersection computations whose state count could exceed this.
    #[arg(long, global = true, default_value_t = 100_000, value_name = "N")]
    max_states: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fold a subgroup's generators and report rank, index, basis and Euler data.
    Rank {
        /// Input document (groups, products, amalgams, subgroups).
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Subgroup name from the input document.
        #[arg(long)]
        subgroup: String,
    },
    /// Decide whether a word lies in a subgroup.
    Member {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        subgroup: String,
        /// Word in the textual grammar, e.g. "(ab)^3" or "a^-1b".
        #[arg(long)]
        word: String,
    },
    /// Intersect two subgroups of the same free product.
    Intersect {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Check the free-product intersection-rank inequality on a pair.
    VerifyBound {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Check the amalgam intersection-rank inequality on a pair of lifted subgroups.
    VerifyTheorem2 {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Amalgam name from the input document.
        #[arg(long)]
        amalgam: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Build one of the four extremal families and check every asserted property.
    #[command(group(ArgGroup::new("which").required(true).args(["case", "all"])))]
    PaperCase {
        /// Which construction (1–4).
        #[arg(long, value_parser = clap::value_parser!(usize))]
        case: Option<usize>,
        /// Build all four constructions.
        #[arg(long, conflicts_with_all = ["amalgam", "amalgam_name", "p"])]
        all: bool,
        /// Family parameter (number of distinguished words).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Odd prime for construction 1 (default 3).
        #[arg(long)]
        p: Option<usize>,
        /// Ceiling on the coset-space degree searched for finite quotients.
        #[arg(long, default_value_t = 12, value_name = "D")]
        degree_bound: usize,
        /// Input document holding an amalgam to lift the pair over.
        #[arg(long, value_name = "FILE")]
        amalgam: Option<PathBuf>,
        /// Which amalgam in that document (needed only when it holds several).
        #[arg(long, requires = "amalgam")]
        amalgam_name: Option<String>,
    },
    /// Render a subgroup graph as Graphviz DOT (boxes = states, circles = factor classes).
    ExportDot {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        subgroup: String,
    },
}

fn main() {
    // Usage problems are input errors (exit 1); 2 is reserved for genuine
    // bound/equality violations. --help and --version stay successful.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().expect("cannot write diagnostics");
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn elapsed(timings: bool, start: Instant) -> Option<u128> {
    timings.then(|| start.elapsed().as_millis())
}

/// Refuse intersections whose product construction could blow past the guard.
fn guard_intersection(a: &Automaton, b: &Automaton, max_states: usize) -> Result<()> {
    let worst = a.num_states().saturating_mul(b.num_states());
    if worst > max_states {
        return Err(Error::Indeterminate { max_states });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    let start = Instant::now();
    match cli.command {
        Command::Rank { input, subgroup } => {
            let session = Session::from_path(&input)?;
            let (aut, entry) = session.subgroup_automaton(&subgroup)?;
            let graph = SubgroupGraph::new(&aut)?;
            let mut report = RankReport {
                schema: SCHEMA,
                command: "rank",
                ambient: entry.ambient.clone(),
                subgroup: SubgroupSummary::new(&subgroup, &graph),
                factor_free: aut.is_factor_free(),
                elapsed_ms: None,
            };
            report.elapsed_ms = elapsed(cli.timings, start);
            emit(&cli.output, &render(&report)?)?;
            Ok(0)
        }
        Command::Member { input, subgroup, word } => {
            let session = Session::from_path(&input)?;
            let (aut, entry) = session.subgroup_automaton(&subgroup)?;
            let product = aut.product();
            let w = product.parse_word(&word)?;
            let mut report = MemberReport {
                schema: SCHEMA,
                command: "member",
                ambient: entry.ambient.clone(),
                subgroup: subgroup.clone(),
                word,
                normalized: product.display_word(&w),
                member: aut.is_member(&w),
                elapsed_ms: None,
            };
            report.elapsed_ms = elapsed(cli.timings, start);
            emit(&cli.output, &render(&report)?)?;
            Ok(0)
        }
        Command::Intersect { input, left, right } => {
            let session = Session::from_path(&input)?;
            let (a1, e1) = session.subgroup_automaton(&left)?;
            let (a2, _) = session.subgroup_automaton(&right)?;
            guard_intersection(&a1, &a2, cli.max_states)?;
            let inter = a1.intersect(&a2)?;
            let mut report = IntersectReport {
                schema: SCHEMA,
                command: "intersect",
                ambient: e1.ambient.clone(),
                left: SubgroupSummary::new(&left, &SubgroupGraph::new(&a1)?),
                right: SubgroupSummary::new(&right, &SubgroupGraph::new(&a2)?),
                intersection: SubgroupSummary::new(
                    &format!("{left} ∩ {right}"),
                    &SubgroupGraph::new(&inter)?,
                ),
                elapsed_ms: None,
            };
            report.elapsed_ms = elapsed(cli.timings, start);
            emit(&cli.output, &render(&report)?)?;
            Ok(0)
        }
        Command::VerifyBound { input, left, right } => {
            let session = Session::from_path(&input)?;
            let (a1, e1) = session.subgroup_automaton(&left)?;
            let (a2, _) = session.subgroup_automaton(&right)?;
            guard_intersection(&a1, &a2, cli.max_states)?;
            let (check, graphs) = intersection_bound(&a1, &a2)?;
            let mut report = BoundReport::new(&e1.ambient, [&left, &right], &check, &graphs);
            report.elapsed_ms = elapsed(cli.timings, start);
            emit(&cli.output, &render(&report)?)?;
            Ok(if check.holds { 0 } else { 2 })
        }
        Command::VerifyTheorem2 { input, amalgam, left, right } => {
            let session = Session::from_path(&input)?;
            let am = session
                .amalgams
                .get(&amalgam)
                .ok_or_else(|| Error::UnknownName(amalgam.clone()))?;
            let h1 = session.lifted_subgroup(&amalgam, &left)?;
            let h2 = session.lifted_subgroup(&amalgam, &right)?;
            guard_intersection(
                h1.graph().automaton(),
                h2.graph().automaton(),
                cli.max_states,
            )?;
            let (check, closure) = theorem2(am, &h1, &h2)?;
            let mut report =
                Theorem2Report::new(&amalgam, am, [&left, &right], [&h1, &h2], &check, &closure);
            report.elapsed_ms = elapsed(cli.timings, start);
            emit(&cli.output, &render(&report)?)?;
            Ok(if report.violation() { 2 } else { 0 })
        }
        Command::PaperCase { case, all, n, p, degree_bound, amalgam, amalgam_name } => {
            if all {
                let mut cases = Vec::with_capacity(4);
                let mut violation = false;
                for c in 1..=4 {
                    let report = run_case(c, n, None, degree_bound, &None, &None)?;
                    violation |= report.violation();
                    cases.push(report);
                }
                let mut report = AllCasesReport {
                    schema: SCHEMA,
                    command: "paper-case",
                    cases,
                    elapsed_ms: None,
                };
                report.elapsed_ms = elapsed(cli.timings, start);
                emit(&cli.output, &render(&report)?)?;
                Ok(if violation { 2 } else { 0 })
            } else {
                let c = case.expect("clap enforces --case xor --all");
                let mut report = run_case(c, n, p, degree_bound, &amalgam, &amalgam_name)?;
                report.elapsed_ms = elapsed(cli.timings, start);
                let code = if report.violation() { 2 } else { 0 };
                emit(&cli.output, &render(&report)?)?;
                Ok(code)
            }
        }
        Command::ExportDot { input, subgroup } => {
            let session = Session::from_path(&input)?;
            let (aut, _) = session.subgroup_automaton(&subgroup)?;
            let graph = SubgroupGraph::new(&aut)?;
            emit(&cli.output, &graph.to_dot(&subgroup))?;
            Ok(0)
        }
    }
}

fn run_case(
    case: usize,
    n: usize,
    p: Option<usize>,
    degree_bound: usize,
    amalgam: &Option<PathBuf>,
    amalgam_name: &Option<String>,
) -> Result<PaperCaseReport> {
    let inst = build_case(case, n, p, degree_bound)?;
    let (sharp, graphs) = verify_sharpness(&inst)?;
    let lift = match amalgam {
        None => None,
        Some(path) => {
            let session = Session::from_path(path)?;
            let (name, am) = match amalgam_name {
                Some(name) => {
                    let am = session
                        .amalgams
                        .get(name)
                        .ok_or_else(|| Error::UnknownName(name.clone()))?;
                    (name.clone(), am)
                }
                None => {
                    let mut it = session.amalgams.iter();
                    match (it.next(), it.next()) {
                        (Some((name, am)), None) => (name.clone(), am),
                        (None, _) => {
                            return Err(Error::UnknownName(
                                "the amalgam document declares no amalgams".into(),
                            ))
                        }
                        (Some(_), Some(_)) => {
                            return Err(Error::UnknownName(
                                "several amalgams declared; pick one with --amalgam-name".into(),
                            ))
                        }
                    }
                }
            };
            let lifted = lift_case(am, &inst)?;
            let (check, _) = theorem2(am, &lifted.h1, &lifted.h2)?;
            let tau_of_words: Vec<usize> = lifted
                .words
                .iter()
                .map(|w| tau(am, &lifted.h1, &lifted.h2, w))
                .collect::<Result<_>>()?;
            Some(CaseLiftReport {
                amalgam: name,
                edge_order: check.t_order,
                solved_twists: lifted.h2.twists().to_vec(),
                tau_of_words,
                tau_image_size: check.tau_image_size,
                tau_surjective: check.tau_surjective,
                quotient_reduced_rank: check.quotient_r_intersection,
                lhs: check.r_intersection,
                rhs: ratio_string(check.rhs),
                holds: check.holds,
                equality: check.equality,
                indices_multiply: check.indices_multiply,
            })
        }
    };
    Ok(PaperCaseReport::new(&inst, &sharp, &graphs, lift))
}

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use dpcolor::colorer::{color_kr_free, color_triangle_free, CapMode, PipelineOptions};
use dpcolor::cover::{parse_cover, random_cover, validate, CoverMode};
use dpcolor::exact::{chi_dp, find_coloring, ind_count, median_alpha, ChiDp, ExactError, SearchBudget, SearchOutcome};
use dpcolor::graph::{generate, Family};
use dpcolor::harness::{
    chernoff_experiment, factorial_bound_experiment, layered_case, negcorr_experiment, shearer_experiment, star_case,
    survival_experiment, sweep, sweep_csv, ExperimentReport, NeighborhoodCase, SweepConfig, SweepFamily,
};
use dpcolor::sampler::{
    default_burn_in, enum_uniform, glauber_sample, layer_threshold, layered_sample, star_sample, LocalPicks,
    NeighborhoodInstance,
};
use dpcolor::{parse_graph, seed, Cover, Graph, PartialColoring};

use crate::{
    CapArg, CaseKind, ColorArgs, ColorMode, Command, ExactCommand, ExperimentArgs, ExperimentKind, FamilyArg,
    GenCommand, SampleArgs, SampleMode, SweepFamilyArg,
};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Gen(cmd) => gen(cmd),
        Command::Validate { graph, cover } => validate_cmd(&graph, &cover),
        Command::Color(args) => color(&args),
        Command::Exact(cmd) => exact(cmd),
        Command::Sample(args) => sample(&args),
        Command::Experiment(args) => experiment(&args),
    }
}

/// Reads a file, or stdin for `-`.
fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_cover(graph: &Graph, path: &Path) -> Result<Cover> {
    let data = parse_cover(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    Cover::from_data(graph.clone(), &data).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(cmd: GenCommand) -> Result<Status> {
    match cmd {
        GenCommand::Graph {
            family,
            n,
            m,
            p,
            d,
            r,
            seed,
        } => {
            let family = match family {
                FamilyArg::Cycle => Family::Cycle { n },
                FamilyArg::Complete => Family::Complete { n },
                FamilyArg::Bipartite => Family::RandomBipartite {
                    n,
                    m: m.unwrap_or(n),
                    p,
                    seed,
                },
                FamilyArg::TriangleFree => Family::RandomTriangleFree { n, d, seed },
                FamilyArg::KrFree => Family::RandomKrFree { n, d, r, seed },
            };
            print!("{}", generate(&family)?.to_edge_list());
        }
        GenCommand::Cover { graph, k, density, seed } => {
            let g = load_graph(&graph)?;
            let mode = density.map_or(CoverMode::Perfect, CoverMode::Density);
            print!("{}", random_cover(&g, k, seed, mode)?.to_text());
        }
    }
    Ok(Status::Ok)
}

fn validate_cmd(graph: &Path, cover: &Path) -> Result<Status> {
    let g = load_graph(graph)?;
    let data = parse_cover(&read_text(cover)?).map_err(|e| format!("{}: {e}", cover.display()))?;
    let report = validate(&g, &data);
    if report.is_valid() {
        println!("valid");
    } else {
        for v in &report.violations {
            println!("{v}");
        }
        eprintln!("{} violation(s)", report.violations.len());
    }
    Ok(Status::from_bool(report.is_valid()))
}

fn dump(coloring: &PartialColoring) -> String {
    let mut out = String::new();
    for (u, slot) in coloring.iter() {
        writeln!(out, "{u} -> {slot}").expect("write to string");
    }
    out
}

fn color(args: &ColorArgs) -> Result<Status> {
    let g = load_graph(&args.graph)?;
    let cover = args.cover.as_deref().map(|p| load_cover(&g, p)).transpose()?;
    let opts = PipelineOptions {
        seed: args.seed,
        k: args.k,
        ell: args.ell,
        max_rounds: args.max_rounds,
        completion_rounds: args.completion_rounds,
        cap_mode: match args.cap {
            CapArg::Eighth => CapMode::Eighth,
            CapArg::Half => CapMode::Half,
        },
        threshold: args.threshold,
        burn_in: None,
    };
    let report = match args.mode {
        ColorMode::Tf => color_triangle_free(&g, args.eps, cover.as_ref(), &opts)?,
        ColorMode::Kr => color_kr_free(&g, args.r, cover.as_ref(), &opts)?,
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "phase 1 took {:?}, phase 2 took {:?}",
        report.timings.phase1, report.timings.phase2
    );
    print!("{}", report.key_values());
    if args.dump {
        if let Some(c) = &report.coloring {
            print!("{}", dump(c));
        }
    }
    Ok(Status::from_bool(report.is_success()))
}

fn exact(cmd: ExactCommand) -> Result<Status> {
    let budget = |nodes| SearchBudget::new(nodes).ok_or("--budget must be at least 1");
    match cmd {
        ExactCommand::ChiDp { graph, kmax, budget: b } => {
            let g = load_graph(&graph)?;
            match chi_dp(&g, kmax, budget(b)?) {
                Ok(ChiDp::Exact(k)) => println!("chi_dp={k}"),
                Ok(ChiDp::AboveMax { k_max, witness }) => {
                    println!("chi_dp_above={k_max}");
                    print!("{}", witness.to_text());
                }
                Err(ExactError::BudgetExceeded(n)) => {
                    println!("budget_exceeded={n}");
                    return Ok(Status::Failed);
                }
                Err(e) => return Err(e.into()),
            }
        }
        ExactCommand::FindColoring { graph, cover, budget: b } => {
            let g = load_graph(&graph)?;
            let c = load_cover(&g, &cover)?;
            match find_coloring(&c, budget(b)?) {
                SearchOutcome::Found(col) => print!("{}", dump(&col)),
                SearchOutcome::NoSolution => {
                    println!("NONE");
                    return Ok(Status::Failed);
                }
                SearchOutcome::BudgetExceeded => {
                    println!("budget_exceeded={b}");
                    return Ok(Status::Failed);
                }
            }
        }
        ExactCommand::Ind { graph } => {
            let g = load_graph(&graph)?;
            println!("ind={}", ind_count(&g)?);
            println!("median_alpha={}", median_alpha(&g)?);
        }
    }
    Ok(Status::Ok)
}

/// `v:slot` tokens separated by spaces, or `-` for the empty set.
fn format_picks(inst: &NeighborhoodInstance<'_>, picks: &LocalPicks) -> String {
    let tokens: Vec<String> = inst
        .neighbors()
        .iter()
        .zip(picks)
        .filter_map(|(v, p)| p.map(|s| format!("{v}:{s}")))
        .collect();
    if tokens.is_empty() {
        "-".into()
    } else {
        tokens.join(" ")
    }
}

fn sample(args: &SampleArgs) -> Result<Status> {
    let g = load_graph(&args.graph)?;
    let cover = load_cover(&g, &args.cover)?;
    let empty = PartialColoring::new(g.vertex_count());
    let inst = NeighborhoodInstance::new(&cover, args.focus, &empty)?;
    let neighbors = inst.neighbors().to_vec();
    let threshold = args.threshold.unwrap_or_else(|| layer_threshold(g.max_degree()));
    let steps = args.steps.unwrap_or_else(|| default_burn_in(&cover, &neighbors));
    let mut rng = seed::rng(args.seed);
    let mut lines = Vec::with_capacity(args.trials as usize);
    for _ in 0..args.trials {
        let picks = match args.mode {
            SampleMode::Enum => enum_uniform(&inst, &mut rng)?,
            SampleMode::Star => star_sample(&inst, &mut rng)?,
            SampleMode::Layered => layered_sample(&inst, threshold, &mut rng)?.0,
            SampleMode::Glauber => {
                let c = glauber_sample(&cover, &neighbors, steps, &mut rng);
                neighbors.iter().map(|&v| c.pick(v)).collect()
            }
        };
        lines.push(format_picks(&inst, &picks));
    }
    if args.table {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for l in &lines {
            *counts.entry(l).or_default() += 1;
        }
        let mut w = csv::Writer::from_writer(std::io::stdout().lock());
        w.write_record(["subset", "count", "frequency"])?;
        for (subset, count) in counts {
            let freq = count as f64 / args.trials as f64;
            w.write_record([subset, &count.to_string(), &freq.to_string()])?;
        }
        w.flush()?;
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(Status::Ok)
}

fn case(args: &ExperimentArgs) -> Result<NeighborhoodCase> {
    if let (Some(graph), Some(cover), Some(focus)) = (&args.graph, &args.cover, args.focus) {
        let g = load_graph(graph)?;
        let c = load_cover(&g, cover)?;
        if focus >= g.vertex_count() {
            return Err(format!("--focus {focus} is not a vertex of the graph").into());
        }
        return Ok(NeighborhoodCase::unconditioned(c, focus));
    }
    let s = args.case_seed.unwrap_or(args.seed);
    Ok(match args.case {
        CaseKind::Star => star_case(s),
        CaseKind::Layered => layered_case(s),
    })
}

fn experiment(args: &ExperimentArgs) -> Result<Status> {
    if args.kind == ExperimentKind::Sweep {
        let cfg = SweepConfig {
            family: match args.family {
                SweepFamilyArg::TriangleFree => SweepFamily::TriangleFree,
                SweepFamilyArg::Bipartite => SweepFamily::Bipartite,
            },
            n: args.n,
            deltas: args.sweep_deltas.clone(),
            multipliers: args.multipliers.clone(),
            trials: args.trials,
            eps: args.eps,
            seed: args.seed,
            max_rounds: args.max_rounds,
        };
        let rows = sweep(&cfg)?;
        let text = if args.json {
            serde_json::to_string_pretty(&rows)? + "\n"
        } else {
            sweep_csv(&rows)
        };
        emit(&text, args.out.as_deref())?;
        return Ok(Status::Ok);
    }
    let report: ExperimentReport = if args.kind == ExperimentKind::Shearer {
        shearer_experiment(args.r, args.n_max, args.samples, args.seed)?
    } else {
        let case = case(args)?;
        let ell = args.ell.unwrap_or_else(|| case.cover.list_size(case.focus));
        let mut report = match args.kind {
            ExperimentKind::Survival => survival_experiment(&case, ell, args.trials, args.seed)?,
            ExperimentKind::Negcorr => negcorr_experiment(&case, args.seed)?,
            ExperimentKind::Chernoff => chernoff_experiment(&case, &args.deltas, args.trials, args.seed)?,
            ExperimentKind::Factorial => {
                factorial_bound_experiment(&case, ell, args.trials, args.threshold, args.seed)?
            }
            ExperimentKind::Shearer | ExperimentKind::Sweep => unreachable!("handled above"),
        };
        report.corpus.push(case.cover.graph().to_edge_list());
        report.corpus.push(case.cover.to_text());
        report
    };
    let text = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        report.to_csv()
    };
    emit(&text, args.out.as_deref())?;
    for v in report.failures() {
        eprintln!("failed: {} ({})", v.inequality, v.detail);
    }
    Ok(Status::from_bool(report.passed()))
}

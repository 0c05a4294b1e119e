use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use cubic_tsp::degree_four::{solve_deterministic, solve_randomized, Degree4Options, DEFAULT_LAMBDA};
use cubic_tsp::format::{parse_graph, write_graph};
use cubic_tsp::generators::{generate, weighted_random_cubic, FAMILIES};
use cubic_tsp::listing::{check_listing_input, count_cycles, list_cycles, CycleEvent, ListOptions};
use cubic_tsp::oracle::{is_valid_tour, oracle_cycles, oracle_tsp};
use cubic_tsp::tsp::{solve, Solution, SolveOptions};
use cubic_tsp::{EdgeId, GraphSpec};

#[derive(Parser)]
#[command(name = "cubictsp", version, about = "Exact TSP and Hamiltonian cycle listing for graphs of maximum degree 3 and 4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-cost Hamiltonian cycle through all forced edges.
    Solve {
        /// Graph file, or `-` for standard input.
        file: PathBuf,
        /// Accept vertices of degree 4 by splitting them.
        #[arg(long)]
        deg4: bool,
        /// With --deg4: try hitting-set splits instead of random ones.
        #[arg(long, requires = "deg4", conflicts_with = "seed")]
        deterministic: bool,
        /// With --deg4: seed for the random splits.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// With --deg4: repetitions are ceil(lambda 1.5^f); the failure
        /// probability is at most e^-lambda.
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        /// With --deg4 --deterministic: degree-4 vertices per hitting-set word.
        #[arg(long, default_value_t = 2)]
        group_size: usize,
        /// With --deg4: worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip subtrees that cannot beat the best tour found.
        #[arg(long)]
        prune: bool,
        /// Print search statistics as key=value lines.
        #[arg(long)]
        stats: bool,
    },
    /// Stream every Hamiltonian cycle through all forced edges.
    List {
        file: PathBuf,
        /// One line of sorted edge ids per cycle instead of deltas.
        #[arg(long)]
        explicit: bool,
        #[arg(long)]
        stats: bool,
    },
    /// Number of Hamiltonian cycles through all forced edges.
    Count { file: PathBuf },
    /// Write a member of a graph family.
    Gen {
        family: String,
        params: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the solver and lister with brute force.
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Check this many random weighted cubic graphs instead of a file.
        #[arg(long, requires = "vertices")]
        random: Option<u64>,
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search statistics over a family, with the fitted growth rate.
    Bench {
        family: String,
        /// First parameter range `LO..HI`, inclusive.
        range: String,
        /// Further fixed parameters.
        extra: Vec<usize>,
        /// Measure the cycle lister instead of the solver.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Why a command did not succeed.
enum Failure {
    /// No tour exists, or verification found a mismatch.
    Negative,
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn read_graph(path: &Path) -> anyhow::Result<GraphSpec> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn ids(edges: &[EdgeId]) -> String {
    edges.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(" ")
}

fn print_solution(out: &mut impl Write, solution: Option<Solution>) -> Outcome {
    match solution {
        Some(s) => {
            writeln!(out, "cost {}", s.cost)?;
            writeln!(out, "tour {}", ids(&s.tour))?;
            Ok(())
        }
        None => {
            writeln!(out, "infeasible")?;
            Err(Failure::Negative)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    out: &mut impl Write,
    file: &Path,
    deg4: bool,
    deterministic: bool,
    seed: u64,
    lambda: f64,
    group_size: usize,
    jobs: usize,
    prune: bool,
    stats: bool,
) -> Outcome {
    let spec = read_graph(file)?;
    let solve_opts = SolveOptions { prune, ..SolveOptions::default() };
    if deg4 {
        if !(lambda > 0.0) {
            return Err(anyhow!("--lambda must be positive").into());
        }
        if !(1..=cubic_tsp::hitting_set::MAX_K).contains(&group_size) {
            return Err(anyhow!("--group-size must be in 1..={}", cubic_tsp::hitting_set::MAX_K).into());
        }
        let opts = Degree4Options { seed, lambda, group_size, jobs, solve: solve_opts };
        let outcome = if deterministic {
            solve_deterministic(&spec, &opts)
        } else {
            solve_randomized(&spec, &opts)
        }
        .map_err(anyhow::Error::from)?;
        let result = print_solution(out, outcome.solution);
        if stats {
            writeln!(out, "expansions={}", outcome.expansions)?;
            writeln!(out, "branch_nodes={}", outcome.branch_nodes)?;
        }
        return result;
    }
    let outcome = solve(&spec, solve_opts).map_err(anyhow::Error::from)?;
    let result = print_solution(out, outcome.solution);
    if stats {
        write!(out, "{}", outcome.stats)?;
    }
    result
}

fn cmd_list(out: &mut impl Write, file: &Path, explicit: bool, stats: bool) -> Outcome {
    let spec = read_graph(file)?;
    check_listing_input(&spec).map_err(anyhow::Error::from)?;
    let mut current = vec![false; spec.edges.len()];
    let mut io_error = None;
    let mut emit = |ev: CycleEvent| -> io::Result<()> {
        if explicit {
            match ev {
                CycleEvent::Add(es) => es.iter().for_each(|e| current[e.index()] = true),
                CycleEvent::Remove(es) => es.iter().for_each(|e| current[e.index()] = false),
                CycleEvent::End => {
                    let cycle: Vec<String> = current
                        .iter()
                        .enumerate()
                        .filter(|(_, &b)| b)
                        .map(|(i, _)| i.to_string())
                        .collect();
                    writeln!(out, "{}", cycle.join(" "))?;
                }
                CycleEvent::Begin => {}
            }
            return Ok(());
        }
        match ev {
            CycleEvent::Begin => writeln!(out, "C"),
            CycleEvent::Add(es) => writeln!(out, "+ {}", ids(&es)),
            CycleEvent::Remove(es) => writeln!(out, "- {}", ids(&es)),
            CycleEvent::End => writeln!(out, "."),
        }
    };
    let result = list_cycles(&spec, ListOptions::default(), |ev| match emit(ev) {
        Ok(()) => ControlFlow::Continue(()),
        Err(e) => {
            io_error = Some(e);
            ControlFlow::Break(())
        }
    })
    .map_err(anyhow::Error::from)?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if stats {
        write!(out, "{result}")?;
    }
    Ok(())
}

fn cmd_count(out: &mut impl Write, file: &Path) -> Outcome {
    let spec = read_graph(file)?;
    let count = count_cycles(&spec).map_err(anyhow::Error::from)?;
    writeln!(out, "{count}")?;
    Ok(())
}

fn cmd_gen(out: &mut impl Write, family: &str, params: &[usize], seed: u64, output: Option<&Path>) -> Outcome {
    let spec = generate(family, params, seed).map_err(|e| {
        let known: Vec<String> = FAMILIES.iter().map(|(f, p)| format!("  {f} {p}").trim_end().to_string()).collect();
        anyhow!("{e}\nfamilies:\n{}", known.join("\n"))
    })?;
    let text = write_graph(&spec);
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Brute-force comparison; `Ok(None)` when everything agrees.
fn check_instance(spec: &GraphSpec) -> anyhow::Result<Option<String>> {
    let expected = oracle_tsp(spec)?;
    let expected_cost = expected.as_ref().map(|(c, _)| *c);
    let got = if spec.max_degree() <= 3 {
        let opts = SolveOptions { check_measure: true, self_check: true, ..SolveOptions::default() };
        let outcome = solve(spec, opts)?;
        if outcome.stats.measure_violations > 0 {
            return Ok(Some(format!("{} measure violations", outcome.stats.measure_violations)));
        }
        outcome.solution
    } else {
        solve_deterministic(spec, &Degree4Options::default())?.solution
    };
    let got_cost = got.as_ref().map(|s| s.cost);
    if got_cost != expected_cost {
        return Ok(Some(format!("solver cost {got_cost:?}, brute force {expected_cost:?}")));
    }
    if let Some(s) = &got {
        if !is_valid_tour(spec, &s.tour, s.cost) {
            return Ok(Some(format!("solver tour [{}] is not a valid tour of cost {}", ids(&s.tour), s.cost)));
        }
    }
    if check_listing_input(spec).is_ok() {
        let reference = oracle_cycles(spec)?;
        let mut listed = Vec::new();
        let opts = ListOptions { check_measure: true, self_check: true };
        let mut current = vec![false; spec.edges.len()];
        let stats = list_cycles(spec, opts, |ev| {
            match ev {
                CycleEvent::Add(es) => es.iter().for_each(|e| current[e.index()] = true),
                CycleEvent::Remove(es) => es.iter().for_each(|e| current[e.index()] = false),
                CycleEvent::End => listed.push(
                    (0..current.len()).filter(|&i| current[i]).map(|i| EdgeId(i as u32)).collect::<Vec<_>>(),
                ),
                CycleEvent::Begin => {}
            }
            ControlFlow::Continue(())
        })?;
        let total = listed.len();
        listed.sort();
        listed.dedup();
        if listed.len() != total {
            return Ok(Some(format!("lister reported {} duplicate cycles", total - listed.len())));
        }
        if listed != reference {
            return Ok(Some(format!("lister found {} cycles, brute force {}", listed.len(), reference.len())));
        }
        if stats.measure_violations > 0 {
            return Ok(Some(format!("{} listing measure violations", stats.measure_violations)));
        }
    }
    Ok(None)
}

fn cmd_verify(out: &mut impl Write, file: Option<&Path>, random: Option<u64>, vertices: Option<usize>, seed: u64) -> Outcome {
    let instances: Box<dyn Iterator<Item = anyhow::Result<(String, GraphSpec)>>> = match (file, random) {
        (Some(path), _) => Box::new(std::iter::once(read_graph(path).map(|s| (path.display().to_string(), s)))),
        (None, Some(count)) => {
            let n = vertices.ok_or_else(|| anyhow!("--random needs --vertices"))?;
            Box::new((0..count).map(move |i| {
                let s = seed.wrapping_add(i);
                Ok((format!("random instance seed {s}"), weighted_random_cubic(n, 100, 3, s)?))
            }))
        }
        (None, None) => return Err(anyhow!("give a FILE or --random N").into()),
    };
    for item in instances {
        let (name, spec) = item?;
        if let Some(report) = check_instance(&spec)? {
            writeln!(out, "MISMATCH {name}: {report}")?;
            write!(out, "{}", write_graph(&spec))?;
            return Err(Failure::Negative);
        }
    }
    writeln!(out, "OK")?;
    Ok(())
}

fn parse_range(range: &str) -> anyhow::Result<(usize, usize)> {
    let (lo, hi) = range.split_once("..").ok_or_else(|| anyhow!("range must be LO..HI"))?;
    let lo: usize = lo.parse().with_context(|| format!("bad range start `{lo}`"))?;
    let hi: usize = hi.trim_start_matches('=').parse().with_context(|| format!("bad range end `{hi}`"))?;
    if lo > hi {
        bail!("empty range {range}");
    }
    Ok((lo, hi))
}

/// Least-squares slope of `log2(nodes)` against `n`.
fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn cmd_bench(out: &mut impl Write, family: &str, range: &str, extra: &[usize], list: bool, seed: u64) -> Outcome {
    let (lo, hi) = parse_range(range)?;
    let mut points = Vec::new();
    for x in lo..=hi {
        let params: Vec<usize> = std::iter::once(x).chain(extra.iter().copied()).collect();
        let spec = generate(family, &params, seed).map_err(anyhow::Error::from)?;
        let n = spec.vertex_count;
        let p: Vec<String> = params.iter().map(|v| v.to_string()).collect();
        writeln!(out, "instance={family} {}", p.join(" "))?;
        writeln!(out, "n={n}")?;
        let nodes = if list {
            let stats = list_cycles(&spec, ListOptions { check_measure: true, self_check: false }, |_| {
                ControlFlow::Continue(())
            })
            .map_err(anyhow::Error::from)?;
            write!(out, "{stats}")?;
            stats.branch_nodes
        } else {
            let opts = SolveOptions { check_measure: true, ..SolveOptions::default() };
            let outcome = solve(&spec, opts).map_err(anyhow::Error::from)?;
            match &outcome.solution {
                Some(s) => writeln!(out, "cost={}", s.cost)?,
                None => writeln!(out, "cost=infeasible")?,
            }
            write!(out, "{}", outcome.stats)?;
            outcome.stats.branch_nodes
        };
        writeln!(out)?;
        points.push((n as f64, (nodes.max(1) as f64).log2()));
    }
    match fit_exponent(&points) {
        // nodes grow like 2^(a n)
        Some(a) => writeln!(out, "fit_exponent={a:.4}")?,
        None => writeln!(out, "fit_exponent=undefined")?,
    }
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Solve { file, deg4, deterministic, seed, lambda, group_size, jobs, prune, stats } => {
            cmd_solve(out, &file, deg4, deterministic, seed, lambda, group_size, jobs, prune, stats)
        }
        Command::List { file, explicit, stats } => cmd_list(out, &file, explicit, stats),
        Command::Count { file } => cmd_count(out, &file),
        Command::Gen { family, params, seed, output } => cmd_gen(out, &family, &params, seed, output.as_deref()),
        Command::Verify { file, random, vertices, seed } => cmd_verify(out, file.as_deref(), random, vertices, seed),
        Command::Bench { family, range, extra, list, seed } => cmd_bench(out, &family, &range, &extra, list, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

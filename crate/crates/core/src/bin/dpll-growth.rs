use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dpll_growth::cnf::{self, dimacs, examples};
use dpll_growth::dpll::RunRecord;
use dpll_growth::experiment::{self, EnsembleConfig, KvConfig, ReportKind, ReportParams};
use dpll_growth::growth::{self, GridSpec, GrowthControls};
use dpll_growth::ode::{self, CriticalLine, StepControl};
use dpll_growth::{annealed, oracle, Error, Heuristic, Instance, Result};

#[derive(Parser)]
#[command(name = "dpll-growth", version, about = "DPLL search trees on random 2+p-SAT: experiments, exact oracle, ODE and PDE analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random 2+p-SAT instance in DIMACS format.
    Gen(GenArgs),
    /// Solve one instance and print its JSON run record.
    Solve(SolveArgs),
    /// Exact branch function of a tiny instance.
    Oracle(OracleArgs),
    /// Monte Carlo ensemble with ω extrapolation.
    Ensemble(EnsembleArgs),
    /// Single-branch trajectory and phase-diagram geometry.
    Ode(OdeArgs),
    /// Search-tree growth by characteristics.
    Pde(PdeArgs),
    /// Annealed branch-count chain.
    Annealed(AnnealedArgs),
    /// Write report data files.
    Report(ReportArgs),
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(short, long)]
    n: usize,
    /// 3-SAT ratio; ignored when --n2/--n3 are given.
    #[arg(short, long, default_value_t = 4.3)]
    alpha: f64,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    n3: Option<usize>,
    #[arg(short, long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct InstanceSource {
    /// DIMACS file.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Random 3-SAT with this many variables when no input is given.
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(short, long, default_value_t = 4.3)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    instance_seed: u64,
}

impl InstanceSource {
    fn load(&self) -> Result<Instance> {
        match (&self.input, self.n) {
            (Some(p), _) => dimacs::parse(BufReader::new(File::open(p)?)),
            (None, Some(n)) => cnf::random_3sat(n, self.alpha, self.instance_seed),
            (None, None) => Err(Error::InvalidArgument("give --input or --n".into())),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: InstanceSource,
    #[arg(long, default_value = "GUC")]
    heuristic: Heuristic,
    #[arg(short, long, default_value_t = 1)]
    seed: u64,
    /// Leave the split-node cloud out of the record.
    #[arg(long)]
    no_cloud: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OracleArgs {
    /// DIMACS file.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Built-in example instance 1, 2 or 3.
    #[arg(long)]
    example: Option<u8>,
    #[arg(long, default_value = "GUC")]
    heuristic: Heuristic,
    #[arg(long, default_value_t = oracle::DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Write the reachable operator as row,col,numerator,denominator.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Also estimate the mean leaf count with this many solver runs.
    #[arg(long)]
    monte_carlo: Option<usize>,
    #[arg(short, long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct EnsembleArgs {
    /// Key-value config file; flags below override it.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    heuristic: Option<Heuristic>,
    /// Comma-separated, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    #[arg(long)]
    trials_per_n: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// JSON-lines file of per-run records.
    #[arg(long)]
    output_path: Option<PathBuf>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// CSV of per-run records without timings.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the merged config and exit.
    #[arg(long)]
    print_config: bool,
}

impl EnsembleArgs {
    fn config(&self) -> Result<EnsembleConfig> {
        let mut cfg = EnsembleConfig::default();
        if let Some(p) = &self.config {
            cfg = cfg.apply(&KvConfig::load(p)?)?;
        }
        if let Some(v) = self.alpha0 {
            cfg.alpha0 = v;
        }
        if let Some(v) = self.heuristic {
            cfg.heuristic = v;
        }
        if let Some(v) = &self.n_values {
            cfg.n_values = v.clone();
        }
        if let Some(v) = self.trials_per_n {
            cfg.trials_per_n = v;
        }
        if let Some(v) = self.base_seed {
            cfg.base_seed = v;
        }
        if let Some(v) = &self.output_path {
            cfg.output_path = Some(v.clone());
        }
        if let Some(v) = self.parallelism {
            cfg.parallelism = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn config_text(cfg: &EnsembleConfig) -> String {
    let mut kv = KvConfig::default();
    kv.set("alpha0", cfg.alpha0);
    kv.set("heuristic", cfg.heuristic);
    kv.set("n_values", cfg.n_values.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", "));
    kv.set("trials_per_n", cfg.trials_per_n);
    kv.set("base_seed", cfg.base_seed);
    if let Some(p) = &cfg.output_path {
        kv.set("output_path", p.display());
    }
    kv.set("parallelism", cfg.parallelism);
    kv.to_text()
}

#[derive(Args)]
struct CriticalLineArg {
    /// CSV of (p, alpha_c) points; the built-in two-anchor line otherwise.
    #[arg(long)]
    critical_line: Option<PathBuf>,
}

impl CriticalLineArg {
    fn load(&self) -> Result<CriticalLine> {
        match &self.critical_line {
            Some(p) => CriticalLine::read_csv(BufReader::new(File::open(p)?)),
            None => Ok(CriticalLine::default()),
        }
    }
}

#[derive(Args)]
struct OdeArgs {
    #[arg(long, default_value_t = 3.5)]
    alpha0: f64,
    #[arg(long, default_value = "GUC")]
    heuristic: Heuristic,
    #[command(flatten)]
    line: CriticalLineArg,
    /// Trajectory CSV (t,c2,c3,p,alpha,rho1).
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Critical-line CSV (p,alpha_c).
    #[arg(long)]
    line_csv: Option<PathBuf>,
    #[arg(long)]
    find_g: bool,
    #[arg(long)]
    alpha_l: bool,
    #[arg(long)]
    tricritical: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PdeArgs {
    #[arg(long, default_value_t = 10.0)]
    alpha0: f64,
    #[arg(long, default_value = "GUC")]
    heuristic: Heuristic,
    /// Initial 2-clause density; defaults to a 3-SAT start.
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    c3: Option<f64>,
    /// Continue past the halt up to --t-max.
    #[arg(long)]
    no_stop: bool,
    #[arg(long, default_value_t = 0.95)]
    t_max: f64,
    /// GrowthSeries CSV.
    #[arg(long)]
    series: Option<PathBuf>,
    /// Surface snapshot CSV at --surface-t.
    #[arg(long)]
    surface: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    surface_t: f64,
    /// Compare with a direct grid solve at --surface-t on this many nodes.
    #[arg(long)]
    grid_check: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AnnealedArgs {
    #[arg(long, default_value_t = 10.0)]
    alpha0: f64,
    #[arg(short, long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 1e-12)]
    pruning_threshold: f64,
    /// Mass-curve CSV (T,total_mass,mean_c2,mean_c3).
    #[arg(long)]
    curve: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReportArgs {
    /// table1, phase-diagram, cloud, surface or mass-curve.
    kind: ReportKind,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value = "GUC")]
    heuristic: Heuristic,
    /// Comma-separated α₀ values.
    #[arg(long, value_delimiter = ',')]
    alpha0: Option<Vec<f64>>,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(short, long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    t: f64,
    /// Run ensembles for the experimental table1 column, with this config.
    #[arg(long)]
    experiment: Option<PathBuf>,
    #[command(flatten)]
    line: CriticalLineArg,
}

fn emit(output: &Output, value: &serde_json::Value) -> Result<()> {
    let mut w = output.writer()?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let inst = match (a.n2, a.n3) {
                (None, None) => cnf::random_3sat(a.n, a.alpha, a.seed)?,
                (n2, n3) => cnf::generate_random_instance(a.n, n2.unwrap_or(0), n3.unwrap_or(0), a.seed)?,
            };
            let mut w = a.output.writer()?;
            dimacs::write(&inst, &mut w)?;
            w.flush()?;
        }
        Cmd::Solve(a) => {
            let inst = a.source.load()?;
            let st = dpll_growth::solve(&inst, a.heuristic, a.seed);
            let mut rec = RunRecord::new(&st, &inst, a.heuristic, a.seed);
            if a.no_cloud {
                rec.cloud.clear();
            }
            emit(&a.output, &serde_json::to_value(rec)?)?;
        }
        Cmd::Oracle(a) => {
            let inst = match (&a.input, a.example) {
                (Some(p), _) => dimacs::parse(BufReader::new(File::open(p)?))?,
                (None, Some(1)) => examples::one_variable(),
                (None, Some(2)) => examples::two_variables(),
                (None, Some(3)) => examples::three_variables(),
                (None, Some(k)) => return Err(Error::InvalidArgument(format!("no example {k}"))),
                (None, None) => return Err(Error::InvalidArgument("give --input or --example".into())),
            };
            if inst.n_vars() > a.max_vars {
                return Err(Error::Resource(format!("{} variables exceed the cap of {}", inst.n_vars(), a.max_vars)));
            }
            let op = oracle::EvolutionOperator::reachable(&inst, a.heuristic, a.max_vars)?;
            if let Some(p) = &a.dump {
                std::fs::write(p, op.dump())?;
            }
            let st = oracle::stationary_tree_size(&inst, a.heuristic)?;
            let mut out = json!({
                "n_vars": inst.n_vars(),
                "heuristic": a.heuristic,
                "t_star": st.t_star,
                "b_star": st.b_star.to_string(),
                "b_star_f64": oracle::to_f64(&st.b_star),
                "reachable_states": op.n_states(),
                "nnz": op.nnz(),
            });
            if let Some(k) = a.monte_carlo {
                let (mean, se) = oracle::monte_carlo_leaf_mean(&inst, a.heuristic, k, a.seed)?;
                out["monte_carlo"] = json!({ "trials": k, "mean_leaves": mean, "std_error": se });
            }
            emit(&Output { out: None }, &out)?;
        }
        Cmd::Ensemble(a) => {
            let cfg = a.config()?;
            if a.print_config {
                print!("{}", config_text(&cfg));
                return Ok(());
            }
            let records = experiment::run_ensemble(&cfg)?;
            if let Some(p) = &a.csv {
                write_file(p, |w| experiment::write_records_csv(&records, w))?;
            }
            let summary = experiment::summarize_by_n(&records);
            let estimate = match experiment::extrapolate_omega(&records) {
                Ok(e) => serde_json::to_value(e)?,
                Err(e) => json!({ "error": e.to_string() }),
            };
            emit(&Output { out: None }, &json!({ "config": cfg, "per_n": summary, "estimate": estimate }))?;
        }
        Cmd::Ode(a) => {
            let line = a.line.load()?;
            let ctl = StepControl::default();
            let tr = ode::integrate_branch(a.alpha0, a.heuristic, &ctl)?;
            if let Some(p) = &a.trajectory {
                write_file(p, |w| ode::write_trajectory_csv(&tr, w))?;
            }
            if let Some(p) = &a.line_csv {
                write_file(p, |w| line.write_csv(w, 201))?;
            }
            let last = tr.states.last().copied();
            let mut out = json!({
                "alpha0": a.alpha0,
                "heuristic": a.heuristic,
                "stop": format!("{:?}", tr.stop),
                "t_end": last.map(|s| s.t),
                "samples": tr.states.len(),
            });
            if a.find_g {
                out["g"] = match ode::find_g_with(a.alpha0, a.heuristic, &line, &ctl) {
                    Ok(g) => json!({ "t_g": g.t_g, "p_g": g.p_g, "alpha_g": g.alpha_g }),
                    Err(e) => json!({ "error": e.to_string() }),
                };
            }
            if a.alpha_l {
                out["alpha_l"] = json!(ode::find_alpha_l_with(a.heuristic, 1e-6, &line, &ctl)?);
            }
            if a.tricritical {
                let tc = ode::tricritical_check(a.heuristic)?;
                out["tricritical"] = json!({ "alpha_l": tc.alpha_l, "p_t": tc.p_t, "alpha_t": tc.alpha_t, "t_t": tc.t_t, "rho1": tc.rho1 });
            }
            emit(&a.output, &out)?;
        }
        Cmd::Pde(a) => {
            let ctl = GrowthControls { t_max: a.t_max, stop_at_halt: !a.no_stop, ..GrowthControls::default() };
            let (c2, c3) = (a.c2.unwrap_or(0.0), a.c3.unwrap_or(a.alpha0));
            let series = growth::solve_characteristics(a.alpha0, a.heuristic, c2, c3, &ctl)?;
            if let Some(p) = &a.series {
                write_file(p, |w| growth::write_series_csv(&series, w))?;
            }
            if let Some(p) = &a.surface {
                let snap = growth::legendre_surface_from(a.heuristic, [c2, c3], a.surface_t, &GridSpec::around(c2 + c3), &ctl)?;
                write_file(p, |w| snap.write_csv(w))?;
            }
            let mut out = json!({
                "alpha0": a.alpha0,
                "heuristic": a.heuristic,
                "c2": c2,
                "c3": c3,
                "halt": series.halt.map(|h| json!({ "t": h.t, "omega_nats": h.omega, "omega_bits": h.omega_bits(), "p": h.p, "alpha": h.alpha })),
                "asymptote": growth::asymptotic_omega(c2 + c3).ok(),
            });
            if let Some(n) = a.grid_check {
                out["grid_check_max_error"] = json!(growth::grid_cross_check(a.heuristic, [c2, c3], a.surface_t, 1.0, n)?);
            }
            emit(&a.output, &out)?;
        }
        Cmd::Annealed(a) => {
            let run = annealed::evolve_branch_counts(a.alpha0, a.n, a.pruning_threshold)?;
            if let Some(p) = &a.curve {
                write_file(p, |w| annealed::write_mass_curve_csv(&run, w))?;
            }
            let pl = run.plateau();
            emit(
                &a.output,
                &json!({
                    "alpha0": a.alpha0,
                    "n": a.n,
                    "plateau_t": pl.t,
                    "total_mass": pl.total_mass,
                    "pruned_mass": pl.pruned,
                    "log2_mass_per_n": run.omega_bits(),
                }),
            )?;
        }
        Cmd::Report(a) => {
            let mut p = ReportParams {
                out_dir: a.out_dir,
                heuristic: a.heuristic,
                critical_line: a.line.load()?,
                seed: a.seed,
                t: a.t,
                ..ReportParams::default()
            };
            if let Some(v) = a.alpha0 {
                p.alpha0s = v;
            } else if matches!(a.kind, ReportKind::Cloud | ReportKind::Surface | ReportKind::MassCurve) {
                p.alpha0s = vec![if a.kind == ReportKind::MassCurve { 10.0 } else { 7.0 }];
            }
            if let Some(n) = a.n {
                p.n = n;
            } else if a.kind == ReportKind::MassCurve {
                p.n = 40;
            }
            if let Some(path) = &a.experiment {
                p.experiment = Some(EnsembleConfig::default().apply(&KvConfig::load(path)?)?);
            }
            for f in experiment::report(a.kind, &p)? {
                println!("{}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

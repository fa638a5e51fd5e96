//! Ensembles of DPLL runs, the extrapolated complexity ω and report files.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cnf::random_3sat;
use crate::dpll::{self, Heuristic, PhasePoint};
use crate::error::{Error, Result};
use crate::growth::{self, GridSpec, GrowthControls};
use crate::ode::{self, CriticalLine, StepControl};
use crate::{annealed, rng};

pub const SCHEMA_VERSION: u32 = 1;

/// `key = value` lines with `#` comments. A `schema_version` key is
/// required.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvConfig {
    pub fn parse(src: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected `key = value`, got `{line}`") })?;
            let k = k.trim().to_string();
            if entries.insert(k.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Error::Parse { line: i + 1, msg: format!("duplicate key `{k}`") });
            }
        }
        let cfg = KvConfig { entries };
        match cfg.entries.get("schema_version") {
            None => Err(Error::Parse { line: 0, msg: "missing schema_version".into() }),
            Some((l, v)) if v.parse::<u32>().ok() != Some(SCHEMA_VERSION) => {
                Err(Error::Parse { line: *l, msg: format!("unsupported schema_version `{v}`, expected {SCHEMA_VERSION}") })
            }
            _ => Ok(cfg),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn get_raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((l, v)) => v.parse().map(Some).map_err(|_| Error::Parse { line: *l, msg: format!("bad value `{v}` for `{key}`") }),
        }
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((l, v)) => v
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse { line: *l, msg: format!("bad list item `{x}` in `{key}`") }))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), (0, value.to_string()));
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("schema_version = {SCHEMA_VERSION}\n");
        for (k, (_, v)) in &self.entries {
            if k != "schema_version" {
                s.push_str(&format!("{k} = {v}\n"));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub alpha0: f64,
    pub heuristic: Heuristic,
    pub n_values: Vec<usize>,
    pub trials_per_n: usize,
    pub base_seed: u64,
    pub output_path: Option<PathBuf>,
    /// Worker threads; 0 uses the rayon default.
    pub parallelism: usize,
}

const ENSEMBLE_KEYS: [&str; 8] =
    ["schema_version", "alpha0", "heuristic", "n_values", "trials_per_n", "base_seed", "output_path", "parallelism"];

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            alpha0: 10.0,
            heuristic: Heuristic::Guc,
            n_values: vec![100, 150, 200],
            trials_per_n: 200,
            base_seed: 1,
            output_path: None,
            parallelism: 0,
        }
    }
}

impl EnsembleConfig {
    /// Overlays the values present in `kv` on `self`.
    pub fn apply(mut self, kv: &KvConfig) -> Result<Self> {
        if let Some(k) = kv.keys().find(|k| !ENSEMBLE_KEYS.contains(k)) {
            return Err(Error::InvalidArgument(format!("unknown config key `{k}`")));
        }
        if let Some(v) = kv.get("alpha0")? {
            self.alpha0 = v;
        }
        if let Some(v) = kv.get("heuristic")? {
            self.heuristic = v;
        }
        if let Some(v) = kv.get_list("n_values")? {
            self.n_values = v;
        }
        if let Some(v) = kv.get("trials_per_n")? {
            self.trials_per_n = v;
        }
        if let Some(v) = kv.get("base_seed")? {
            self.base_seed = v;
        }
        if let Some(v) = kv.get_raw("output_path") {
            self.output_path = Some(PathBuf::from(v));
        }
        if let Some(v) = kv.get("parallelism")? {
            self.parallelism = v;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0) {
            return Err(Error::InvalidArgument("alpha0 must be positive".into()));
        }
        if self.n_values.is_empty() || self.n_values.windows(2).any(|w| w[0] >= w[1]) || self.n_values[0] == 0 {
            return Err(Error::InvalidArgument("n_values must be non-empty, positive and strictly increasing".into()));
        }
        if self.trials_per_n == 0 {
            return Err(Error::InvalidArgument("trials_per_n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn instance_seed(&self, n: usize, trial: usize) -> u64 {
        rng::derive_seed(self.base_seed, n as u64, trial as u64)
    }

    pub fn solver_seed(&self, n: usize, trial: usize) -> u64 {
        rng::mix64(self.instance_seed(n, trial) ^ 0x5eed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub n: usize,
    pub trial: usize,
    pub instance_seed: u64,
    pub solver_seed: u64,
    pub alpha0: f64,
    pub heuristic: Heuristic,
    pub satisfiable: bool,
    pub q_splits: u64,
    pub b_leaves: u64,
    pub g_node: Option<PhasePoint>,
    pub runtime_us: u64,
}

impl EnsembleRecord {
    pub fn log2_q(&self) -> f64 {
        (self.q_splits.max(1) as f64).log2()
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// One solve per (N, trial), in (N, trial) order.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<Vec<EnsembleRecord>> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = config.n_values.iter().flat_map(|&n| (0..config.trials_per_n).map(move |t| (n, t))).collect();
    let records = with_pool(config.parallelism, || {
        tasks
            .par_iter()
            .map(|&(n, trial)| {
                let (is, ss) = (config.instance_seed(n, trial), config.solver_seed(n, trial));
                let inst = random_3sat(n, config.alpha0, is)?;
                let start = Instant::now();
                let st = dpll::solve(&inst, config.heuristic, ss);
                Ok(EnsembleRecord {
                    n,
                    trial,
                    instance_seed: is,
                    solver_seed: ss,
                    alpha0: config.alpha0,
                    heuristic: config.heuristic,
                    satisfiable: st.result.is_sat(),
                    q_splits: st.q_splits,
                    b_leaves: st.b_leaves,
                    g_node: st.g_node,
                    runtime_us: start.elapsed().as_micros() as u64,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    if let Some(path) = &config.output_path {
        write_records_jsonl(&records, File::create(path)?)?;
    }
    Ok(records)
}

pub fn write_records_jsonl<W: Write>(records: &[EnsembleRecord], w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-N ensemble statistics, without timings.
pub fn write_records_csv<W: Write>(records: &[EnsembleRecord], mut w: W) -> Result<()> {
    writeln!(w, "n,trial,instance_seed,satisfiable,q_splits,b_leaves,g_p,g_alpha,g_t")?;
    for r in records {
        let (gp, ga, gt) = r.g_node.map(|g| (g.p.to_string(), g.alpha.to_string(), g.t.to_string())).unwrap_or_default();
        writeln!(w, "{},{},{},{},{},{},{gp},{ga},{gt}", r.n, r.trial, r.instance_seed, r.satisfiable, r.q_splits, r.b_leaves)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NSummary {
    pub n: usize,
    pub trials: usize,
    pub mean_log2_q: f64,
    pub median_log2_q: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaEstimate {
    /// Slope of mean log₂Q against N, in bits per variable.
    pub omega: f64,
    pub std_error: f64,
    pub intercept: f64,
    pub n_values: Vec<usize>,
    pub residuals: Vec<f64>,
    pub per_n: Vec<NSummary>,
}

pub fn summarize_by_n(records: &[EnsembleRecord]) -> Vec<NSummary> {
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        by_n.entry(r.n).or_default().push(r.log2_q());
    }
    by_n.into_iter()
        .map(|(n, mut v)| {
            v.sort_by(f64::total_cmp);
            let k = v.len() as f64;
            let mean = v.iter().sum::<f64>() / k;
            let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
            let median = if v.len() % 2 == 1 { v[v.len() / 2] } else { 0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2]) };
            NSummary { n, trials: v.len(), mean_log2_q: mean, median_log2_q: median, std_error: (var / k).sqrt() }
        })
        .collect()
}

/// Weighted least-squares fit of mean log₂Q against N.
pub fn extrapolate_omega(records: &[EnsembleRecord]) -> Result<OmegaEstimate> {
    let per_n = summarize_by_n(records);
    if per_n.len() < 3 {
        return Err(Error::Estimation(format!("need at least 3 distinct N, have {}", per_n.len())));
    }
    if let Some(s) = per_n.iter().find(|s| s.trials < 20) {
        return Err(Error::Estimation(format!("N = {} has only {} trials, need 20", s.n, s.trials)));
    }
    let floor = per_n.iter().map(|s| s.std_error).filter(|&e| e > 0.0).fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { 1.0 };
    let w: Vec<f64> = per_n.iter().map(|s| 1.0 / s.std_error.max(floor).powi(2)).collect();
    let x: Vec<f64> = per_n.iter().map(|s| s.n as f64).collect();
    let y: Vec<f64> = per_n.iter().map(|s| s.mean_log2_q).collect();
    let sw: f64 = w.iter().sum();
    let xm = w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / sw;
    let ym = w.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(&x).map(|(a, b)| a * (b - xm).powi(2)).sum();
    let sxy: f64 = w.iter().zip(&x).zip(&y).map(|((a, b), c)| a * (b - xm) * (c - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let residuals: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - (intercept + slope * a)).collect();
    Ok(OmegaEstimate {
        omega: slope,
        std_error: (1.0 / sxx).sqrt(),
        intercept,
        n_values: per_n.iter().map(|s| s.n).collect(),
        residuals,
        per_n,
    })
}

/// Mean and standard error of the recorded G-nodes.
pub fn mean_g_node(records: &[EnsembleRecord]) -> Result<(PhasePoint, PhasePoint)> {
    let g: Vec<PhasePoint> = records.iter().filter_map(|r| r.g_node).collect();
    if g.len() < 2 {
        return Err(Error::Estimation("fewer than two runs reached a G-node".into()));
    }
    let k = g.len() as f64;
    let mean = |f: &dyn Fn(&PhasePoint) -> f64| g.iter().map(f).sum::<f64>() / k;
    let m = PhasePoint { p: mean(&|q| q.p), alpha: mean(&|q| q.alpha), t: mean(&|q| q.t) };
    let se = |f: &dyn Fn(&PhasePoint) -> f64, mu: f64| (g.iter().map(|q| (f(q) - mu).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt();
    let s = PhasePoint { p: se(&|q| q.p, m.p), alpha: se(&|q| q.alpha, m.alpha), t: se(&|q| q.t, m.t) };
    Ok((m, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportKind {
    Table1,
    PhaseDiagram,
    Cloud,
    Surface,
    MassCurve,
}

impl FromStr for ReportKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "table1" => ReportKind::Table1,
            "phase-diagram" => ReportKind::PhaseDiagram,
            "cloud" => ReportKind::Cloud,
            "surface" => ReportKind::Surface,
            "mass-curve" => ReportKind::MassCurve,
            _ => return Err(Error::InvalidArgument(format!("unknown report kind `{s}`"))),
        })
    }
}

/// Inputs shared by the report kinds; each kind reads what it needs.
#[derive(Clone, Debug)]
pub struct ReportParams {
    pub out_dir: PathBuf,
    pub heuristic: Heuristic,
    pub alpha0s: Vec<f64>,
    /// Ensemble schedule for the experimental column of table1; `None`
    /// leaves it empty.
    pub experiment: Option<EnsembleConfig>,
    pub critical_line: CriticalLine,
    pub n: usize,
    pub seed: u64,
    pub t: f64,
    pub grid: Option<GridSpec>,
}

impl Default for ReportParams {
    fn default() -> Self {
        ReportParams {
            out_dir: PathBuf::from("."),
            heuristic: Heuristic::Guc,
            alpha0s: vec![4.3, 7.0, 10.0, 15.0, 20.0, 3.5],
            experiment: None,
            critical_line: CriticalLine::default(),
            n: 150,
            seed: 1,
            t: 0.05,
            grid: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub alpha0: f64,
    pub omega_exp: Option<f64>,
    pub omega_exp_err: Option<f64>,
    pub omega_the: Option<f64>,
    pub asymptote: f64,
    pub note: String,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn table1_rows(p: &ReportParams) -> Result<Vec<Table1Row>> {
    p.alpha0s
        .iter()
        .map(|&a| {
            let mut note = String::new();
            let the = if a >= ode::ALPHA_C_3SAT - 1e-9 {
                growth::omega_theory(a, p.heuristic)
            } else {
                growth::omega_upper_sat(a, p.heuristic, &p.critical_line)
            };
            let the = match the {
                Ok(v) => Some(v),
                Err(e) => {
                    note = e.to_string();
                    None
                }
            };
            let (exp, err) = match &p.experiment {
                Some(cfg) => {
                    let cfg = EnsembleConfig { alpha0: a, heuristic: p.heuristic, output_path: None, ..cfg.clone() };
                    let est = extrapolate_omega(&run_ensemble(&cfg)?)?;
                    (Some(est.omega), Some(est.std_error))
                }
                None => (None, None),
            };
            Ok(Table1Row { alpha0: a, omega_exp: exp, omega_exp_err: err, omega_the: the, asymptote: growth::asymptotic_omega(a)?, note })
        })
        .collect()
}

pub fn write_table1_csv<W: Write>(rows: &[Table1Row], mut w: W) -> Result<()> {
    writeln!(w, "alpha0,omega_exp,omega_exp_err,omega_the,asymptote,note")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},\"{}\"",
            r.alpha0,
            opt(r.omega_exp),
            opt(r.omega_exp_err),
            opt(r.omega_the),
            r.asymptote,
            r.note.replace('"', "'")
        )?;
    }
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    Ok((path.clone(), BufWriter::new(File::create(path)?)))
}

/// Writes the files for one report kind into `params.out_dir` and returns
/// their paths.
pub fn report(kind: ReportKind, params: &ReportParams) -> Result<Vec<PathBuf>> {
    let dir = &params.out_dir;
    let mut out = Vec::new();
    match kind {
        ReportKind::Table1 => {
            let rows = table1_rows(params)?;
            let (path, mut w) = create(dir, "table1.csv")?;
            write_table1_csv(&rows, &mut w)?;
            w.flush()?;
            out.push(path);
        }
        ReportKind::PhaseDiagram => {
            for a in [2.0, 2.8, 3.5] {
                let tr = ode::integrate_branch(a, params.heuristic, &StepControl::default())?;
                let (path, mut w) = create(dir, &format!("branch_{a}.csv"))?;
                ode::write_trajectory_csv(&tr, &mut w)?;
                w.flush()?;
                out.push(path);
            }
            for a in [4.3, 7.0, 10.0] {
                let s = growth::solve_characteristics(a, params.heuristic, 0.0, a, &GrowthControls::default())?;
                let (path, mut w) = create(dir, &format!("tree_{a}.csv"))?;
                growth::write_series_csv(&s, &mut w)?;
                w.flush()?;
                out.push(path);
            }
            let (path, mut w) = create(dir, "critical_line.csv")?;
            params.critical_line.write_csv(&mut w, 201)?;
            w.flush()?;
            out.push(path);
            let (path, mut w) = create(dir, "halt_line.csv")?;
            writeln!(w, "p,alpha")?;
            for i in 0..=180 {
                let p = i as f64 / 200.0;
                writeln!(w, "{p},{}", growth::halt_line_alpha(p)?)?;
            }
            w.flush()?;
            out.push(path);
        }
        ReportKind::Cloud => {
            for &a in &params.alpha0s {
                let inst = random_3sat(params.n, a, params.seed)?;
                let st = dpll::solve(&inst, params.heuristic, rng::mix64(params.seed));
                let (path, mut w) = create(dir, &format!("cloud_{a}.csv"))?;
                writeln!(w, "p,alpha,t")?;
                for c in st.cloud() {
                    writeln!(w, "{},{},{}", c.p, c.alpha, c.t)?;
                }
                w.flush()?;
                out.push(path);
            }
        }
        ReportKind::Surface => {
            for &a in &params.alpha0s {
                let grid = params.grid.unwrap_or_else(|| GridSpec::around(a));
                let snap = growth::legendre_surface(a, params.heuristic, params.t, &grid)?;
                let (path, mut w) = create(dir, &format!("surface_{a}_t{}.csv", params.t))?;
                snap.write_csv(&mut w)?;
                w.flush()?;
                out.push(path);
            }
        }
        ReportKind::MassCurve => {
            for &a in &params.alpha0s {
                let run = annealed::evolve_branch_counts(a, params.n, annealed::AnnealedControls::default().pruning_threshold)?;
                let (path, mut w) = create(dir, &format!("mass_{a}_n{}.csv", params.n))?;
                annealed::write_mass_curve_csv(&run, &mut w)?;
                w.flush()?;
                out.push(path);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> EnsembleConfig {
        EnsembleConfig { alpha0: 10.0, n_values: vec![20, 30, 40], trials_per_n: 20, base_seed: 9, ..EnsembleConfig::default() }
    }

    #[test]
    fn kv_config_round_trip() {
        let src = "# run\nschema_version = 1\nalpha0 = 7.5\nheuristic = UC\nn_values = 10, 20,30\ntrials_per_n = 5\n";
        let kv = KvConfig::parse(src).unwrap();
        let cfg = EnsembleConfig::default().apply(&kv).unwrap();
        assert_eq!(cfg.alpha0, 7.5);
        assert_eq!(cfg.heuristic, Heuristic::Uc);
        assert_eq!(cfg.n_values, vec![10, 20, 30]);
        assert_eq!(cfg.trials_per_n, 5);
        assert_eq!(KvConfig::parse(&kv.to_text()).unwrap().get::<f64>("alpha0").unwrap(), Some(7.5));
    }

    #[test]
    fn kv_config_errors() {
        assert!(KvConfig::parse("alpha0 = 3\n").is_err());
        assert!(KvConfig::parse("schema_version = 2\n").is_err());
        assert!(KvConfig::parse("schema_version = 1\nbogus line\n").is_err());
        assert!(KvConfig::parse("schema_version = 1\na = 1\na = 2\n").is_err());
        let kv = KvConfig::parse("schema_version = 1\nalpha = 3\n").unwrap();
        assert!(EnsembleConfig::default().apply(&kv).is_err());
        let kv = KvConfig::parse("schema_version = 1\nalpha0 = x\n").unwrap();
        assert!(matches!(EnsembleConfig::default().apply(&kv), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn validation() {
        let mut c = small();
        c.n_values = vec![30, 20];
        assert!(c.validate().is_err());
        c.n_values = vec![20, 20];
        assert!(c.validate().is_err());
        let mut c = small();
        c.trials_per_n = 0;
        assert!(run_ensemble(&c).is_err());
    }

    #[test]
    fn ensemble_is_deterministic_across_workers() {
        let a = run_ensemble(&EnsembleConfig { parallelism: 1, ..small() }).unwrap();
        let b = run_ensemble(&EnsembleConfig { parallelism: 3, ..small() }).unwrap();
        let csv = |r: &[EnsembleRecord]| {
            let mut v = Vec::new();
            write_records_csv(r, &mut v).unwrap();
            v
        };
        assert_eq!(csv(&a), csv(&b));
        assert_eq!(a.len(), 60);
        assert!(a.iter().all(|r| !r.satisfiable));
    }

    #[test]
    fn extrapolation_is_permutation_invariant() {
        let mut recs = run_ensemble(&small()).unwrap();
        let e1 = extrapolate_omega(&recs).unwrap();
        recs.reverse();
        recs.swap(3, 41);
        let e2 = extrapolate_omega(&recs).unwrap();
        assert_eq!(e1, e2);
        assert!(e1.omega > 0.0 && e1.std_error >= 0.0);
    }

    #[test]
    fn extrapolation_needs_data() {
        let recs = run_ensemble(&EnsembleConfig { n_values: vec![20, 30], ..small() }).unwrap();
        assert!(matches!(extrapolate_omega(&recs), Err(Error::Estimation(_))));
        let recs = run_ensemble(&EnsembleConfig { trials_per_n: 5, ..small() }).unwrap();
        assert!(matches!(extrapolate_omega(&recs), Err(Error::Estimation(_))));
    }

    #[test]
    fn exact_line_fit() {
        let recs: Vec<EnsembleRecord> = [10usize, 20, 40]
            .iter()
            .flat_map(|&n| {
                (0..20).map(move |t| EnsembleRecord {
                    n,
                    trial: t,
                    instance_seed: 0,
                    solver_seed: 0,
                    alpha0: 1.0,
                    heuristic: Heuristic::Guc,
                    satisfiable: false,
                    q_splits: 1u64 << (n / 10 + 3),
                    b_leaves: 0,
                    g_node: None,
                    runtime_us: 0,
                })
            })
            .collect();
        let e = extrapolate_omega(&recs).unwrap();
        assert!((e.omega - 0.1).abs() < 1e-12 && (e.intercept - 3.0).abs() < 1e-10);
    }

    #[test]
    fn report_kinds() {
        let dir = tempfile::tempdir().unwrap();
        let p = ReportParams { out_dir: dir.path().to_path_buf(), alpha0s: vec![7.0], n: 40, ..ReportParams::default() };
        let files = report(ReportKind::Cloud, &p).unwrap();
        let text = fs::read_to_string(&files[0]).unwrap();
        assert!(text.starts_with("p,alpha,t\n") && text.lines().count() > 2);
        let files = report(ReportKind::PhaseDiagram, &p).unwrap();
        assert_eq!(files.len(), 8);
        let p = ReportParams { alpha0s: vec![20.0, 3.5], ..p };
        let rows = table1_rows(&p).unwrap();
        assert!((rows[0].omega_the.unwrap() - 0.0153).abs() < 1e-3);
        assert!(rows[1].omega_the.is_none() && !rows[1].note.is_empty());
        assert!("bogus".parse::<ReportKind>().is_err());
    }
}

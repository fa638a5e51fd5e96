use dpll_growth::cnf::{dimacs, generate_random_instance, random_3sat};
use dpll_growth::dpll::RunRecord;
use dpll_growth::experiment::{mean_g_node, run_ensemble, write_records_jsonl, EnsembleConfig, EnsembleRecord};
use dpll_growth::ode::{self, StepControl};
use dpll_growth::{oracle, solve, Heuristic};

#[test]
fn dimacs_round_trip_preserves_search() {
    let inst = generate_random_instance(60, 40, 150, 11).unwrap();
    let back = dimacs::parse_str(&dimacs::to_string(&inst)).unwrap();
    assert_eq!(inst, back);
    for h in Heuristic::ALL {
        assert_eq!(solve(&inst, h, 5), solve(&back, h, 5));
    }
}

#[test]
fn run_record_json_round_trip() {
    let inst = random_3sat(40, 4.3, 2).unwrap();
    let rec = RunRecord::new(&solve(&inst, Heuristic::Guc, 3), &inst, Heuristic::Guc, 3);
    let text = serde_json::to_string(&rec).unwrap();
    assert_eq!(serde_json::from_str::<RunRecord>(&text).unwrap(), rec);
    assert_eq!(rec.cloud.len() as u64, rec.q_splits);
}

#[test]
fn oracle_matches_monte_carlo_for_every_heuristic() {
    let mut checked = 0;
    for seed in 0.. {
        let inst = random_3sat(6, 7.0, seed).unwrap();
        if inst.brute_force_satisfiable().unwrap() {
            continue;
        }
        for h in Heuristic::ALL {
            let b = oracle::to_f64(&oracle::stationary_tree_size(&inst, h).unwrap().b_star);
            let (mean, se) = oracle::monte_carlo_leaf_mean(&inst, h, 4000, seed).unwrap();
            assert!((mean - b).abs() <= 4.0 * se + 1e-12, "{h} seed {seed}: {mean} vs {b}");
        }
        checked += 1;
        if checked == 5 {
            break;
        }
    }
}

#[test]
fn ensemble_output_file_matches_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    let cfg = EnsembleConfig {
        alpha0: 8.0,
        n_values: vec![20, 30],
        trials_per_n: 4,
        output_path: Some(path.clone()),
        ..EnsembleConfig::default()
    };
    let recs = run_ensemble(&cfg).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let back: Vec<EnsembleRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(back, recs);
    let mut again = Vec::new();
    write_records_jsonl(&recs, &mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), text);
}

/// Above the first backtracking node the search is a single branch, so the
/// measured G-nodes sit on the branch trajectory.
#[test]
fn empirical_g_nodes_lie_on_the_branch_trajectory() {
    let cfg = EnsembleConfig {
        alpha0: 3.5,
        heuristic: Heuristic::Guc,
        n_values: vec![150],
        trials_per_n: 200,
        base_seed: 35,
        ..EnsembleConfig::default()
    };
    let recs = run_ensemble(&cfg).unwrap();
    let (g, se) = mean_g_node(&recs).unwrap();
    let tr = ode::integrate_branch(3.5, Heuristic::Guc, &StepControl::default()).unwrap();
    let s = tr.states.iter().min_by(|a, b| (a.t - g.t).abs().total_cmp(&(b.t - g.t).abs())).unwrap();
    let pp = s.to_phase_coords().unwrap();
    eprintln!("empirical {g:?} se {se:?}; trajectory at t={} {pp:?}", s.t);
    assert!((pp.p - g.p).abs() < 4.0 * se.p + 0.01);
    assert!((pp.alpha - g.alpha).abs() < 4.0 * se.alpha + 0.03);
}

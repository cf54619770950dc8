use proptest::prelude::*;
use tr1da::oracle::{EnergyLedger, PrecisionLevel};
use tr1da::solver::{RunAudit, SolveResult, Status, Variant};
use tr1da_bench::aggregate::find_row;
use tr1da_bench::campaign::derive_seed;
use tr1da_bench::emit::{parse_csv, plot_data, to_csv, to_json, to_markdown};
use tr1da_bench::{aggregate, run_campaign, AggregateRow, BenchError, CampaignSpec, ProblemFilter, RunRecord};

fn record(problem: &str, variant: Variant, replicate: usize, its: usize, f_evals: u64, g_evals: u64, ok: bool) -> RunRecord {
    let mut ledger = EnergyLedger::new();
    for _ in 0..f_evals {
        ledger.charge_f(PrecisionLevel::Double);
    }
    for _ in 0..g_evals {
        ledger.charge_g(PrecisionLevel::Half);
    }
    RunRecord {
        problem: problem.to_string(),
        dim: 2,
        variant,
        epsilon: 1e-3,
        replicate,
        seed: replicate as u64,
        success: ok,
        result: SolveResult {
            status: if ok { Status::Converged } else { Status::IterLimit },
            iterations: its,
            n_successful: its / 2,
            ledger,
            x_final: vec![0.0, 0.0],
            exact_grad_norm_final: if ok { 0.0 } else { 1.0 },
            delta_final: 1.0,
            audit: RunAudit::default(),
            trace: Vec::new(),
        },
    }
}

fn same_bits(a: &[AggregateRow], b: &[AggregateRow]) -> bool {
    let bits = |v: f64| v.to_bits();
    let obits = |v: Option<f64>| v.map(f64::to_bits);
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.epsilon.to_bits() == y.epsilon.to_bits()
                && x.variant == y.variant
                && x.nsucc == y.nsucc
                && x.nprob == y.nprob
                && bits(x.mean_its) == bits(y.mean_its)
                && bits(x.mean_costf) == bits(y.mean_costf)
                && bits(x.mean_costg) == bits(y.mean_costg)
                && obits(x.rel_its) == obits(y.rel_its)
                && obits(x.rel_costf) == obits(y.rel_costf)
                && obits(x.rel_costg) == obits(y.rel_costg)
        })
}

#[test]
fn means_over_successful_runs() {
    let recs: Vec<_> = (0..4).map(|r| record("p", Variant::Lmqn, r, 10, 11, 6, true)).collect();
    let rows = aggregate(&recs).unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row.nsucc, 1);
    assert_eq!(row.mean_its, 10.0);
    assert_eq!(row.mean_costf, 11.0);
    assert_eq!(row.mean_costg, 6.0 / 16.0);
    assert_eq!(row.rel_its, None);
}

#[test]
fn failed_replicates_do_not_enter_means() {
    let recs = vec![
        record("p", Variant::Lmqn, 0, 10, 11, 1, true),
        record("p", Variant::Lmqn, 1, 1000, 1001, 1, false),
    ];
    let row = &aggregate(&recs).unwrap()[0];
    assert_eq!(row.nsucc, 1, "one of two replicates is half");
    assert_eq!(row.mean_its, 10.0);
}

#[test]
fn majority_rule_for_solved_problems() {
    let recs = vec![
        record("p", Variant::Lmqn, 0, 10, 11, 1, true),
        record("p", Variant::Lmqn, 1, 1000, 1001, 1, false),
        record("p", Variant::Lmqn, 2, 1000, 1001, 1, false),
    ];
    let row = &aggregate(&recs).unwrap()[0];
    assert_eq!(row.nsucc, 0);
    assert_eq!(row.nprob, 1);
    assert!(row.mean_its.is_nan());
}

#[test]
fn identical_variant_has_unit_ratios() {
    let mut recs = Vec::new();
    for (i, name) in ["a", "b", "c"].iter().enumerate() {
        for v in [Variant::Lmqn, Variant::IlmqnA] {
            recs.push(record(name, v, 0, 10 + i, 12 + i as u64, 3, true));
        }
    }
    let rows = aggregate(&recs).unwrap();
    let row = find_row(&rows, 1e-3, Variant::IlmqnA).unwrap();
    assert_eq!(row.rel_its, Some(1.0));
    assert_eq!(row.rel_costf, Some(1.0));
    assert_eq!(row.rel_costg, Some(1.0));
}

#[test]
fn ratios_use_jointly_solved_problems_only() {
    let recs = vec![
        record("a", Variant::Lmqn, 0, 10, 10, 1, true),
        record("b", Variant::Lmqn, 0, 100, 100, 1, true),
        record("a", Variant::IlmqnA, 0, 20, 5, 1, true),
        record("b", Variant::IlmqnA, 0, 1000, 1000, 1, false),
    ];
    let rows = aggregate(&recs).unwrap();
    let row = find_row(&rows, 1e-3, Variant::IlmqnA).unwrap();
    assert_eq!(row.rel_its, Some(2.0));
    assert_eq!(row.rel_costf, Some(0.5));
    let base = find_row(&rows, 1e-3, Variant::Lmqn).unwrap();
    assert_eq!(base.mean_its, 55.0);
}

#[test]
fn empty_input_is_a_usage_error() {
    assert!(matches!(aggregate(&[]), Err(BenchError::Usage(_))));
}

fn sample_rows() -> Vec<AggregateRow> {
    let mut recs = Vec::new();
    for (i, name) in ["a", "b", "c", "d"].iter().enumerate() {
        for (j, v) in Variant::ALL.into_iter().enumerate() {
            for rep in 0..3 {
                let ok = (i + j + rep) % 4 != 0;
                recs.push(record(name, v, rep, 7 + 3 * i + j + rep, 9 + (i * j) as u64, 2 + rep as u64, ok));
            }
        }
    }
    aggregate(&recs).unwrap()
}

#[test]
fn markdown_leaves_baseline_ratios_blank() {
    let md = to_markdown(&sample_rows());
    let lines: Vec<&str> = md.lines().collect();
    assert!(lines[0].contains("rel. costg"));
    let lmqn = lines.iter().find(|l| l.contains("| LMQN |")).unwrap();
    assert!(lmqn.ends_with("|  |  |  |"), "{lmqn}");
    assert_eq!(lines.len(), 2 + Variant::ALL.len());
}

#[test]
fn csv_round_trips() {
    let rows = sample_rows();
    let text = to_csv(&rows).unwrap();
    assert!(text.starts_with("epsilon,variant,nsucc,nprob,its,costf,costg,rel_its,rel_costf,rel_costg\n"));
    assert!(same_bits(&parse_csv(&text).unwrap(), &rows));
}

#[test]
fn json_has_four_bar_groups_per_variant() {
    let rows = sample_rows();
    let plot = plot_data(&rows);
    assert_eq!(plot.variants.len(), 5);
    for bars in plot.variants.values() {
        assert_eq!(bars.success_ratio.len(), plot.epsilons.len());
        assert_eq!(bars.rel_its.len(), plot.epsilons.len());
        assert_eq!(bars.rel_costf.len(), plot.epsilons.len());
        assert_eq!(bars.rel_costg.len(), plot.epsilons.len());
    }
    assert_eq!(plot.variants["LMQN"].rel_costf, vec![Some(1.0)]);
    let v: serde_json::Value = serde_json::from_str(&to_json(&rows).unwrap()).unwrap();
    let groups = v["plot"]["variants"]["iLMQN-a"].as_object().unwrap();
    let mut keys: Vec<&str> = groups.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["rel_costf", "rel_costg", "rel_its", "success_ratio"]);
}

proptest! {
    #[test]
    fn aggregation_ignores_record_order(seed in any::<u64>()) {
        let mut recs = Vec::new();
        for (i, name) in ["a", "b", "c"].iter().enumerate() {
            for v in [Variant::Lmqn, Variant::IlmqnB] {
                for rep in 0..4 {
                    recs.push(record(name, v, rep, 5 + i * 7 + rep * 3, 6 + (i + rep) as u64, 1 + rep as u64, (i + rep) % 3 != 0));
                }
            }
        }
        let expected = aggregate(&recs).unwrap();
        let mut shuffled = recs.clone();
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        prop_assert!(same_bits(&aggregate(&shuffled).unwrap(), &expected));
    }

    #[test]
    fn csv_round_trips_arbitrary_values(
        its in 0.0f64..1e4, cf in 0.0f64..1e4, cg in 0.0f64..1e4,
        r in proptest::option::of(0.0f64..10.0), nsucc in 0usize..90,
    ) {
        let rows = vec![AggregateRow {
            epsilon: 1e-5, variant: Variant::IlmqnB, nsucc, nprob: 90,
            mean_its: its, mean_costf: cf, mean_costg: cg,
            rel_its: r, rel_costf: r.map(|v| v / 3.0), rel_costg: None,
        }];
        prop_assert!(same_bits(&parse_csv(&to_csv(&rows).unwrap()).unwrap(), &rows));
    }
}

#[test]
fn seeds_are_stable_and_distinct() {
    let s = derive_seed(42, "rosenbr", Variant::Lmqn, 1e-3, 0);
    assert_eq!(s, derive_seed(42, "rosenbr", Variant::Lmqn, 1e-3, 0));
    let others = [
        derive_seed(43, "rosenbr", Variant::Lmqn, 1e-3, 0),
        derive_seed(42, "beale", Variant::Lmqn, 1e-3, 0),
        derive_seed(42, "rosenbr", Variant::IlmqnA, 1e-3, 0),
        derive_seed(42, "rosenbr", Variant::Lmqn, 1e-5, 0),
        derive_seed(42, "rosenbr", Variant::Lmqn, 1e-3, 1),
    ];
    assert!(others.iter().all(|&o| o != s));
}

fn small_spec() -> CampaignSpec {
    CampaignSpec {
        variants: vec![Variant::IlmqnA],
        epsilons: vec![1e-3],
        replicates: 3,
        problems: ProblemFilter::Names(vec!["rosenbr".into(), "beale".into()]),
        ..CampaignSpec::default()
    }
}

#[test]
fn campaign_cardinality_and_order() {
    let recs = run_campaign(&small_spec()).unwrap();
    assert_eq!(recs.len(), 6);
    let keys: Vec<(&str, usize)> = recs.iter().map(|r| (r.problem.as_str(), r.replicate)).collect();
    assert_eq!(keys, [("rosenbr", 0), ("rosenbr", 1), ("rosenbr", 2), ("beale", 0), ("beale", 1), ("beale", 2)]);
}

#[test]
fn campaign_is_reproducible() {
    let a = serde_json::to_string(&run_campaign(&small_spec()).unwrap()).unwrap();
    let b = serde_json::to_string(&run_campaign(&CampaignSpec { workers: Some(2), ..small_spec() }).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn adding_a_variant_leaves_other_runs_unchanged() {
    let alone = run_campaign(&small_spec()).unwrap();
    let both = run_campaign(&CampaignSpec {
        variants: vec![Variant::Lmqn, Variant::IlmqnA],
        ..small_spec()
    })
    .unwrap();
    let subset: Vec<_> = both.into_iter().filter(|r| r.variant == Variant::IlmqnA).collect();
    assert_eq!(subset, alone);
}

#[test]
fn unknown_problem_fails_before_running() {
    let spec = CampaignSpec {
        problems: ProblemFilter::Names(vec!["rosenbr".into(), "nosuch".into()]),
        ..small_spec()
    };
    assert!(matches!(run_campaign(&spec), Err(BenchError::Usage(m)) if m.contains("nosuch")));
}

#[test]
fn invalid_specs_are_rejected() {
    for spec in [
        CampaignSpec { replicates: 0, ..small_spec() },
        CampaignSpec { epsilons: vec![2.0], ..small_spec() },
        CampaignSpec { epsilons: vec![], ..small_spec() },
        CampaignSpec { variants: vec![], ..small_spec() },
    ] {
        assert!(matches!(run_campaign(&spec), Err(BenchError::Usage(_))));
    }
}

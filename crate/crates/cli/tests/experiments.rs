use orichrom::experiments::{
    mc_colourability_threshold, mc_oriented_clique, mc_small_d, mc_two_regular, run, sparse_chi, Experiment,
    ExperimentConfig, ThresholdModel,
};
use orichrom::formats::{parse_graph_json, parse_graph_text, parse_tournament_text, write_graph_json, write_graph_text, write_tournament_text};
use orichrom_core::colouring::oriented_chromatic_number;
use orichrom_core::colouring::Chi;
use orichrom_core::rng::{trial_rng, Stream};
use orichrom_core::{OrientedMultigraph, Tournament};
use proptest::prelude::*;
use rand::Rng;

/// Exact probability that all cycles of a uniform 2-regular graph on `n`
/// vertices are C3-colourable, from the exponential generating function of
/// cycle sets weighted by `P(l-cycle orientation has net flow 0 mod 3)`.
fn c3_probability(n: usize) -> f64 {
    let coeff = |w: &dyn Fn(usize) -> f64| {
        let mut a = vec![0.0; n + 1];
        a[0] = 1.0;
        for m in 1..=n {
            a[m] = (3..=m).map(|l| w(l) / 2.0 * a[m - l]).sum::<f64>() / m as f64;
        }
        a[n]
    };
    coeff(&|l| (1.0 + 2.0 * (-0.5f64).powi(l as i32)) / 3.0) / coeff(&|_| 1.0)
}

#[test]
fn two_regular_three_colourable_rate_matches_the_exact_oracle() {
    let n = 300;
    let [chi3, chi4, chi5] = mc_two_regular(n, 4000, 31, 2).unwrap();
    assert_eq!(chi3.count + chi4.count + chi5.count, 4000);
    let p3 = c3_probability(n);
    // Frozen from a 30-digit evaluation of the same series.
    assert!((p3 - 0.077_697_079_715_641).abs() < 1e-12, "{p3}");
    assert!(chi3.agrees_with(p3, 0.0), "{} vs {p3}", chi3.fraction);
    let p5 = 1.0 - (-1.0f64 / 160.0).exp();
    assert!(chi5.agrees_with(p5, 0.01));
}

#[test]
fn small_d_fractions_are_plausible() {
    let [c3, c4, c5, other] = mc_small_d(2000, 0.5, 400, 3, 2).unwrap();
    assert_eq!(c3.count + c4.count + c5.count + other.count, 400);
    // The forest probability bounds the chi = 3 fraction from below.
    let forest = (0.5f64).sqrt() * (0.25f64 + 0.0625).exp();
    assert!(c3.agrees_with(forest, 0.01) || c3.fraction > forest);
    assert!(other.fraction < 0.05);
}

#[test]
fn sparse_chi_matches_the_exact_solver() {
    let mut rng = trial_rng(5, 0, Stream::Aux);
    for _ in 0..300 {
        let n = rng.gen_range(3..10);
        let mut arcs = vec![];
        for v in 1..n {
            let u = rng.gen_range(0..v);
            arcs.push(if rng.gen() { (u, v) } else { (v, u) });
        }
        if rng.gen_bool(0.7) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && !arcs.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                arcs.push((a, b));
            }
        }
        let g = OrientedMultigraph::from_arcs(n, arcs);
        let (chi, _) = sparse_chi(&g);
        assert_eq!(oriented_chromatic_number(&g, 8).chi, Chi::Exact(chi.unwrap()), "{g:?}");
    }
}

#[test]
fn clique_fraction_grows_with_omega() {
    let lo = mc_oriented_clique(60, -20.0, 200, 1, 2).unwrap();
    let hi = mc_oriented_clique(60, 40.0, 200, 1, 2).unwrap();
    assert!(hi.fraction >= lo.fraction);
    assert!(hi.fraction > 0.9);
}

#[test]
fn threshold_decisions_are_complete_for_small_graphs() {
    let rows = mc_colourability_threshold(ThresholdModel::Cnd, &[12, 24], 3, 7, Some("paley:7"), 20, 4, 2).unwrap();
    assert_eq!(rows.len(), 2);
    let cfg = ExperimentConfig {
        experiment: Experiment::Threshold { model: ThresholdModel::Gnd, n: vec![10], d: 3, k: 4, tournament: None },
        trials: 20,
        seed: 4,
        workers: 2,
        timing: false,
    };
    let out = run(&cfg).unwrap();
    assert!(out.records.iter().all(|r| r.colourable.is_some()));
    assert!(out.records.iter().all(|r| r.colourable == Some(r.chi.is_some())));
}

#[test]
fn timing_only_fills_the_runtime_column() {
    let mut cfg = ExperimentConfig {
        experiment: Experiment::TwoRegular { n: 30 },
        trials: 5,
        seed: 2,
        workers: 1,
        timing: false,
    };
    let plain = run(&cfg).unwrap();
    cfg.timing = true;
    let timed = run(&cfg).unwrap();
    assert!(plain.records.iter().all(|r| r.runtime_us.is_none()));
    assert!(timed.records.iter().all(|r| r.runtime_us.is_some()));
    let strip = |r: &orichrom::experiments::TrialRecord| orichrom::experiments::TrialRecord { runtime_us: None, ..r.clone() };
    assert_eq!(plain.records, timed.records.iter().map(strip).collect::<Vec<_>>());
}

fn arb_graph() -> impl Strategy<Value = OrientedMultigraph> {
    (1usize..30).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..60).prop_map(move |arcs| OrientedMultigraph::from_arcs(n, arcs))
    })
}

proptest! {
    #[test]
    fn graph_text_round_trip(g in arb_graph()) {
        prop_assert_eq!(parse_graph_text(&write_graph_text(&g)).unwrap(), g);
    }

    #[test]
    fn graph_json_round_trip(g in arb_graph()) {
        prop_assert_eq!(parse_graph_json(&write_graph_json(&g)).unwrap(), g);
    }

    #[test]
    fn tournament_text_round_trip(k in 1usize..12, bits in any::<u64>()) {
        let t = Tournament::from_fn(k, |u, v| (bits >> ((u * 7 + v) % 64)) & 1 == 1);
        prop_assert_eq!(parse_tournament_text(&write_tournament_text(&t)).unwrap(), t);
    }
}

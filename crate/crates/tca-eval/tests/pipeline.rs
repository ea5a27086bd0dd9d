//! Cross-module behavior on the frozen fixtures and seeded generators:
//! the structure of the selected transition, training coverage, binning
//! against an independent histogram, mixture recovery, and the strict
//! mode ordering on a dense log.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tca_core::{bin_events, cluster_fixed, percolation_sweep, Cluster, Mode, ThresholdParams};
use tca_eval::baselines::em_gmm_1d;
use tca_eval::datagen::{gen_log, Shift, ShiftProfile};
use tca_eval::formats::read_event_log;
use tca_eval::sim::{cross_validate, Algorithm, CvOptions, Engine, PowerModel};

fn fixture(name: &str) -> tca_core::EventLog {
    read_event_log(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

#[test]
fn selected_threshold_sits_one_step_before_the_two_block_merge() {
    // on the frozen commercial prototype, stepping from the selected to
    // the critical threshold merges exactly the two largest clusters and
    // changes nothing else
    let proto = bin_events(&fixture("cs_5day.csv"), 10).unwrap();
    let trace = percolation_sweep(&proto, 0.0).unwrap();
    assert!(trace.selected_ell < trace.critical_ell);

    let at = |ell| cluster_fixed(&proto, &ThresholdParams { ell, d_star: 0.0 }).unwrap();
    let selected = at(trace.selected_ell);
    let critical = at(trace.critical_ell);
    assert_eq!(critical.len(), selected.len() - 1, "exactly one merge at the transition");

    let mass = |c: &Cluster| {
        proto.bins()[c.start_bin..=c.end_bin].iter().filter(|&&d| d > 0.0).count()
    };
    let mut by_mass: Vec<&Cluster> = selected.iter().collect();
    by_mass.sort_by_key(|c| std::cmp::Reverse(mass(c)));
    let home = |needle: &Cluster| {
        critical
            .iter()
            .position(|c| c.start_bin <= needle.start_bin && needle.end_bin <= c.end_bin)
    };
    assert!(home(by_mass[0]).is_some());
    assert_eq!(home(by_mass[0]), home(by_mass[1]), "the two largest fused");
    for other in &by_mass[2..] {
        let merged_home = home(by_mass[0]);
        assert_ne!(home(other), merged_home, "a third cluster joined the transition");
    }
}

#[test]
fn comfort_energy_lands_in_the_reference_ratio_window() {
    let log = fixture("cs_5day.csv");
    let power = PowerModel::default();
    let comfort = cross_validate(
        &log,
        "cs",
        &Algorithm::Tca { mode: Mode::Comfort, engine: Engine::Reference },
        &power,
        CvOptions::default(),
    )
    .unwrap();
    let conventional =
        cross_validate(&log, "cs", &Algorithm::Conventional, &power, CvOptions::default())
            .unwrap();
    let ratio = comfort.mean_energy / conventional.mean_energy;
    assert!((0.60..=1.00).contains(&ratio), "comfort/conventional ratio {ratio:.4}");
}

#[test]
fn comfort_clusters_cover_all_training_events() {
    for name in ["cs_5day.csv", "rs_5day.csv"] {
        let cv = cross_validate(
            &fixture(name),
            "fixture",
            &Algorithm::Tca { mode: Mode::Comfort, engine: Engine::Reference },
            &PowerModel::default(),
            CvOptions::default(),
        )
        .unwrap();
        // every populated bin joins a cluster, and at the zero threshold
        // every training event sits in a populated bin
        assert!(
            cv.reports.iter().all(|r| r.training_error == 0.0),
            "{name}: comfort left training events uncovered"
        );
    }
}

#[test]
fn binning_matches_an_independent_histogram_on_seeded_days() {
    let log = gen_log(&ShiftProfile::commercial(), 3, 314);
    let proto = bin_events(&log, 10).unwrap();

    // independent oracle: histogram each day separately, then average
    let mut totals = [0u32; 144];
    for day in log.days() {
        for &t in day {
            totals[(t / 10.0) as usize] += 1;
        }
    }
    for (i, &total) in totals.iter().enumerate() {
        let expected = total as f64 / 3.0;
        assert!(
            (proto.bins()[i] - expected).abs() < 1e-12,
            "bin {i}: {} vs {expected}",
            proto.bins()[i]
        );
    }
    let conserved: f64 = proto.bins().iter().sum::<f64>() * 3.0;
    assert!((conserved - log.total_events() as f64).abs() < 1e-9);
}

#[test]
fn em_recovers_two_well_separated_components() {
    // ground truth straight from the generator: two Gaussians via
    // Box-Muller, means 300 and 900, sigma 20, 100 points each
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let mut normal = |mean: f64, sd: f64| {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen();
        mean + sd * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let mut points: Vec<f64> = Vec::with_capacity(200);
    for _ in 0..100 {
        points.push(normal(300.0, 20.0).clamp(0.0, 1439.9));
    }
    for _ in 0..100 {
        points.push(normal(900.0, 20.0).clamp(0.0, 1439.9));
    }
    let (params, schedule) = em_gmm_1d(&points, 2).unwrap();
    let mut means: Vec<f64> = params.components.iter().map(|c| c.mean).collect();
    means.sort_by(f64::total_cmp);
    assert!((means[0] - 300.0).abs() < 5.0, "first mean {:.2}", means[0]);
    assert!((means[1] - 900.0).abs() < 5.0, "second mean {:.2}", means[1]);
    assert_eq!(schedule.intervals().len(), 2, "two disjoint on-intervals");
}

/// A heavy-usage profile whose two-day folds quantize above all three
/// mode thresholds, so the modes produce genuinely different schedules.
fn dense_profile() -> ShiftProfile {
    ShiftProfile::new(
        "dense",
        vec![
            Shift { start: 0.0, end: 360.0, mean_gap: 300.0 },
            Shift { start: 360.0, end: 1260.0, mean_gap: 4.5 },
            Shift { start: 1260.0, end: 1440.0, mean_gap: 60.0 },
        ],
    )
    .unwrap()
}

#[test]
fn modes_order_energy_strictly_on_a_dense_log() {
    let log = gen_log(&dense_profile(), 3, 41);
    let power = PowerModel::default();
    let run = |mode| {
        cross_validate(
            &log,
            "dense",
            &Algorithm::Tca { mode, engine: Engine::Reference },
            &power,
            CvOptions::default(),
        )
        .unwrap()
    };
    let eco = run(Mode::Eco);
    let balance = run(Mode::Balance);
    let comfort = run(Mode::Comfort);
    assert!(
        eco.mean_energy < balance.mean_energy,
        "eco {} vs balance {}",
        eco.mean_energy,
        balance.mean_energy
    );
    assert!(
        balance.mean_energy < comfort.mean_energy,
        "balance {} vs comfort {}",
        balance.mean_energy,
        comfort.mean_energy
    );
    assert!(eco.mean_error >= comfort.mean_error, "coverage loss shows up as error");
}

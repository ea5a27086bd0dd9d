//! Calibration harness for the builtin profiles: prints realized daily
//! counts, cross-validated comfort error, energy ratios, and the
//! percolation structure over candidate gap values and fixture seeds.
//!
//! Run with `cargo run -p tca-eval --example calibrate [grid|rs|scan|seeds|diag]`.

use tca_core::{bin_events, cluster_fixed, percolation_sweep, select_threshold, Mode, ThresholdParams};
use tca_eval::datagen::{gen_day, gen_log, Shift, ShiftProfile};
use tca_eval::sim::{cross_validate, Algorithm, CvOptions, Engine, PowerModel};

fn cs_candidate(night: f64, dawn: f64, work: f64, lunch: f64, evening: f64, late: f64) -> ShiftProfile {
    ShiftProfile::new(
        "cs",
        vec![
            Shift { start: 0.0, end: 240.0, mean_gap: night },
            Shift { start: 240.0, end: 420.0, mean_gap: dawn },
            Shift { start: 420.0, end: 720.0, mean_gap: work },
            Shift { start: 720.0, end: 780.0, mean_gap: lunch },
            Shift { start: 780.0, end: 1080.0, mean_gap: work },
            Shift { start: 1080.0, end: 1380.0, mean_gap: evening },
            Shift { start: 1380.0, end: 1440.0, mean_gap: late },
        ],
    )
    .unwrap()
}

fn rs_candidate(night: f64, active: f64, late: f64) -> ShiftProfile {
    ShiftProfile::new(
        "rs",
        vec![
            Shift { start: 0.0, end: 360.0, mean_gap: night },
            Shift { start: 360.0, end: 1380.0, mean_gap: active },
            Shift { start: 1380.0, end: 1440.0, mean_gap: late },
        ],
    )
    .unwrap()
}

fn mean_count(profile: &ShiftProfile, days: usize, seed: u64) -> f64 {
    let total: usize = (0..days as u64).map(|i| gen_day(profile, seed + i).len()).sum();
    total as f64 / days as f64
}

struct FixtureMetrics {
    comfort_error: f64,
    eco_error: f64,
    comfort_ratio: f64,
    eco_ratio: f64,
    balance_ratio: f64,
    /// the two largest clusters at selected are one cluster at critical
    weak_structural: bool,
    /// additionally nothing else merged at the critical step
    strict_structural: bool,
    on_hours_ordered: bool,
}

fn fixture_metrics(profile: &ShiftProfile, seed: u64) -> FixtureMetrics {
    let log = gen_log(profile, 5, seed);
    let power = PowerModel::default();
    let opts = CvOptions::default();
    let run = |mode| {
        cross_validate(
            &log,
            "cal",
            &Algorithm::Tca { mode, engine: Engine::Reference },
            &power,
            opts,
        )
        .unwrap()
    };
    let comfort = run(Mode::Comfort);
    let balance = run(Mode::Balance);
    let eco = run(Mode::Eco);
    let conventional =
        cross_validate(&log, "cal", &Algorithm::Conventional, &power, opts).unwrap();

    // structural check on the full-fixture prototype, comfort threshold:
    // partition at selected equals partition at critical with exactly the
    // two largest clusters merged
    let proto = bin_events(&log, 10).unwrap();
    let d_star = select_threshold(Mode::Comfort, &proto);
    let trace = percolation_sweep(&proto, d_star).unwrap();
    let at = |ell| {
        cluster_fixed(&proto, &ThresholdParams { ell, d_star }).unwrap()
    };
    let selected = at(trace.selected_ell);
    let critical = at(trace.critical_ell);
    let mass = |c: &tca_core::Cluster| {
        proto.bins()[c.start_bin..=c.end_bin].iter().filter(|&&d| d > d_star).count()
    };
    let (weak_structural, strict_structural) =
        if trace.selected_ell == trace.critical_ell || selected.len() < 2 {
            (true, true)
        } else {
            let mut by_mass: Vec<_> = selected.iter().collect();
            by_mass.sort_by_key(|c| std::cmp::Reverse(mass(c)));
            let (a, b) = (by_mass[0], by_mass[1]);
            let home = |needle: &tca_core::Cluster| {
                critical
                    .iter()
                    .position(|c| c.start_bin <= needle.start_bin && needle.end_bin <= c.end_bin)
            };
            let merged_pair = home(a).is_some() && home(a) == home(b);
            let only_that_merge = critical.len() == selected.len() - 1;
            (merged_pair, merged_pair && only_that_merge)
        };

    FixtureMetrics {
        comfort_error: comfort.mean_error,
        eco_error: eco.mean_error,
        comfort_ratio: comfort.mean_energy / conventional.mean_energy,
        eco_ratio: eco.mean_energy / conventional.mean_energy,
        balance_ratio: balance.mean_energy / conventional.mean_energy,
        weak_structural,
        strict_structural,
        on_hours_ordered: eco.mean_on_hours <= balance.mean_on_hours + 1e-12
            && balance.mean_on_hours <= comfort.mean_on_hours + 1e-12,
    }
}

fn ensemble(profile: &ShiftProfile, label: &str) {
    let count = mean_count(profile, 1000, 10_000);
    let mut errors = Vec::new();
    let mut ratios = Vec::new();
    let mut weak_fails = 0;
    let mut strict_fails = 0;
    for seed in 0..40u64 {
        let m = fixture_metrics(profile, 500 + seed);
        errors.push(m.comfort_error);
        ratios.push(m.eco_ratio);
        if !m.weak_structural {
            weak_fails += 1;
        }
        if !m.strict_structural {
            strict_fails += 1;
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let emean = mean(&errors);
    let emin = errors.iter().cloned().fold(f64::INFINITY, f64::min);
    let emax = errors.iter().cloned().fold(0.0f64, f64::max);
    println!(
        "{label}: count {count:.1} (closed-form {:.1}) err mean {emean:.3} [{emin:.3},{emax:.3}] ratio mean {:.3} range [{:.3},{:.3}] weak_fails {weak_fails}/40 strict_fails {strict_fails}/40",
        profile.expected_daily_events(),
        mean(&ratios),
        ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        ratios.iter().cloned().fold(0.0f64, f64::max),
    );
}

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_else(|| "grid".into());
    match mode.as_str() {
        "grid" => {
            for (night, dawn, work, lunch, evening, late) in [
                (130.0, 25.0, 14.0, 30.0, 27.0, 150.0),
                (130.0, 22.0, 13.0, 30.0, 24.0, 150.0),
                (100.0, 22.0, 13.5, 28.0, 25.0, 120.0),
                (130.0, 20.0, 12.5, 30.0, 22.0, 150.0),
                (160.0, 20.0, 13.0, 25.0, 22.0, 180.0),
                (130.0, 18.0, 13.0, 30.0, 20.0, 200.0),
            ] {
                let profile = cs_candidate(night, dawn, work, lunch, evening, late);
                print!("cs n{night} d{dawn} w{work} l{lunch} e{evening} t{late} -> ");
                ensemble(&profile, "");
            }
        }
        "rs" => {
            for (night, active, late) in [
                (120.0, 19.0, 120.0),
                (120.0, 18.0, 150.0),
                (100.0, 19.0, 150.0),
                (110.0, 20.0, 110.0),
            ] {
                let profile = rs_candidate(night, active, late);
                print!("rs n{night} a{active} t{late} -> ");
                ensemble(&profile, "");
            }
        }
        "scan" => {
            let cs = ShiftProfile::commercial();
            let rs = ShiftProfile::residential();
            println!("-- cs candidates (err <= 0.10, strict structural, ratio in window) --");
            for seed in 1..=3000u64 {
                let c = fixture_metrics(&cs, seed);
                if c.comfort_error <= 0.10
                    && c.eco_ratio >= 0.46
                    && c.eco_ratio <= 0.89
                    && c.on_hours_ordered
                {
                    println!(
                        "cs seed {seed}: err {:.4} ratio {:.3} strict {} weak {}",
                        c.comfort_error, c.eco_ratio, c.strict_structural as u8,
                        c.weak_structural as u8
                    );
                }
            }
            println!("-- rs candidates (err <= 0.17) --");
            for seed in 1..=500u64 {
                let r = fixture_metrics(&rs, seed);
                if r.comfort_error <= 0.17 && r.eco_ratio >= 0.46 && r.eco_ratio <= 0.89 {
                    println!(
                        "rs seed {seed}: err {:.4} ratio {:.3} strict {} weak {}",
                        r.comfort_error, r.eco_ratio, r.strict_structural as u8,
                        r.weak_structural as u8
                    );
                }
            }
        }
        "seeds" => {
            let cs = ShiftProfile::commercial();
            let rs = ShiftProfile::residential();
            println!("seed | cs_err cs_eco_ratio ws ss ord | rs_err rs_ratio ws ss");
            for seed in 1..=60u64 {
                let c = fixture_metrics(&cs, seed);
                let r = fixture_metrics(&rs, seed);
                println!(
                    "{seed:>4} | {:.3} {:.3} [{:.3},{:.3}] {}{} {} | {:.3} {:.3} {}{}",
                    c.comfort_error,
                    c.eco_ratio,
                    c.balance_ratio,
                    c.comfort_ratio,
                    c.weak_structural as u8,
                    c.strict_structural as u8,
                    c.on_hours_ordered as u8,
                    r.comfort_error,
                    r.eco_ratio,
                    r.weak_structural as u8,
                    r.strict_structural as u8,
                );
                let _ = c.eco_error;
            }
        }
        "diag" => {
            let profile = cs_candidate(130.0, 25.0, 14.0, 30.0, 27.0, 150.0);
            let mut fold_errors: Vec<f64> = Vec::new();
            let mut miss_hist = [0usize; 24];
            let mut sel_hist: Vec<u32> = Vec::new();
            for seed in 500..540u64 {
                let log = gen_log(&profile, 5, seed);
                let days = log.days();
                for (i, j, k) in tca_eval::sim::fold_indexes(5) {
                    let sub = tca_core::EventLog::new(vec![days[i].clone(), days[j].clone()])
                        .unwrap();
                    let proto = bin_events(&sub, 10).unwrap();
                    let trace = percolation_sweep(&proto, 0.0).unwrap();
                    sel_hist.push(trace.selected_ell);
                    let clusters = cluster_fixed(
                        &proto,
                        &ThresholdParams { ell: trace.selected_ell, d_star: 0.0 },
                    )
                    .unwrap();
                    let mut missed = 0usize;
                    for &t in &days[k] {
                        let bin = (t / 10.0) as usize;
                        if !clusters.iter().any(|c| c.start_bin <= bin && bin <= c.end_bin) {
                            missed += 1;
                            miss_hist[(t / 60.0) as usize] += 1;
                        }
                    }
                    fold_errors.push(missed as f64 / days[k].len() as f64);
                }
            }
            fold_errors.sort_by(f64::total_cmp);
            let n = fold_errors.len();
            println!(
                "folds {n}: p10 {:.3} median {:.3} p90 {:.3} mean {:.3}",
                fold_errors[n / 10],
                fold_errors[n / 2],
                fold_errors[9 * n / 10],
                fold_errors.iter().sum::<f64>() / n as f64
            );
            sel_hist.sort_unstable();
            println!(
                "selected_ell: min {} p25 {} median {} p75 {} max {}",
                sel_hist[0],
                sel_hist[sel_hist.len() / 4],
                sel_hist[sel_hist.len() / 2],
                sel_hist[3 * sel_hist.len() / 4],
                sel_hist[sel_hist.len() - 1]
            );
            println!("miss histogram by hour:");
            for (h, &m) in miss_hist.iter().enumerate() {
                if m > 0 {
                    println!("  {h:02}:00 {m}");
                }
            }
        }
        other => eprintln!("unknown mode {other}"),
    }
}

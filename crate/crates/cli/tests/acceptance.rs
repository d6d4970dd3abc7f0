//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p owc-cli --test acceptance -- --nocapture` to see
//! the report lines.

use num_complex::Complex64;
use owc_core::metrics::mu_for_level;
use owc_core::simulator::{
    find_required, find_required_ratio, run_ber_point, run_papr_ccdf, run_sweep, SearchOutcome,
};
use owc_core::spectral::{build_hs_spectrum, dft, dft_real, idft, idft_real, split_odd_even};
use owc_core::waveforms::{extract_parts, x1_reconstruct, Block};
use owc_core::{
    apply_channel, Metric, NoiseConfig, NoiseMode, RngSeed, SimPlan, WaveformConfig, WaveformKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use std::process::Command;
use std::time::{Duration, Instant};

const ORDERS: [usize; 6] = [4, 16, 64, 256, 1024, 4096];
const DESK_N: usize = 1024;
const DESK_SYMBOLS: usize = 200;
const TARGET_BER: f64 = 1e-3;

fn report(id: u32, pass: bool, detail: &str) {
    println!(
        "criterion {id}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn plan(kind: WaveformKind, n: usize, order: usize, symbols: usize, mode: NoiseMode) -> SimPlan {
    SimPlan::new(
        WaveformConfig::new(kind, n, order).unwrap(),
        mode,
        symbols,
        1,
    )
    .unwrap()
}

fn dependent() -> NoiseMode {
    NoiseMode::DependentOnly { xi2: 0.0 }
}

fn independent() -> NoiseMode {
    NoiseMode::IndependentOnly { sigma2: 0.0 }
}

fn random_symbols(rng: &mut ChaCha8Rng, cfg: &WaveformConfig) -> Vec<Complex64> {
    let bits: Vec<bool> = (0..cfg.bits_per_frame()).map(|_| rng.random()).collect();
    cfg.qam.map(&bits).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_golden_vectors() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_owc"))
        .arg("golden")
        .output()
        .expect("owc binary runs");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let tables = stdout.lines().filter(|l| l.starts_with("PASS ")).count();
    let failed = stdout.lines().filter(|l| l.starts_with("FAIL ")).count();
    let pass = out.status.code() == Some(0)
        && failed == 0
        && tables > 0
        && elapsed < Duration::from_secs(1);
    report(
        1,
        pass,
        &format!(
            "{tables} tables match, {failed} mismatched, exit {:?}, {elapsed:.2?}",
            out.status.code()
        ),
    );
}

#[test]
fn criterion_02_noiseless_reconstruction() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let kinds = [
        WaveformKind::dco(0.0),
        WaveformKind::Aco,
        WaveformKind::U,
        WaveformKind::x1(0),
        WaveformKind::x2(0),
    ];
    let mut frames = 0usize;
    let mut failures = Vec::new();
    for kind in kinds {
        for order in ORDERS {
            for n in [8, 256, 2048] {
                let mut cfg = WaveformConfig::new(kind, n, order).unwrap();
                for _ in 0..100 {
                    let bits: Vec<bool> = (0..cfg.bits_per_frame()).map(|_| rng.random()).collect();
                    if let WaveformKind::Dco { .. } = kind {
                        // Bias each DCO frame just past its own minimum so nothing clips.
                        let symbols = cfg.qam.map(&bits).unwrap();
                        let x =
                            idft_real(build_hs_spectrum(&symbols, n).unwrap().values()).unwrap();
                        let rms = (x.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
                        let min = x.iter().copied().fold(f64::INFINITY, f64::min);
                        let mu = if rms > 0.0 {
                            (-min / rms).max(0.0) + 1e-3
                        } else {
                            0.0
                        };
                        cfg = WaveformConfig::new(WaveformKind::dco(mu), n, order).unwrap();
                    }
                    let tx = cfg.modulate(&bits).unwrap();
                    let out = cfg.demodulate(tx.samples()).unwrap();
                    frames += 1;
                    if out.bits != bits {
                        failures.push(format!("{} M={order} N={n}", kind.name()));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    failures.dedup();
    report(
        2,
        failures.is_empty() && elapsed < Duration::from_secs(60),
        &format!("{frames} frames, mismatches {failures:?}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_03_structural_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = [0.0f64; 6];
    for frame in 0..1000 {
        let n = [8, 64, 256][frame % 3];
        let order = ORDERS[frame % ORDERS.len()];
        let cfg = WaveformConfig::new(WaveformKind::x1(0), n, order).unwrap();
        let data = random_symbols(&mut rng, &cfg);
        let spectrum = build_hs_spectrum(&data, n).unwrap();
        let (odd, even) = split_odd_even(&spectrum).unwrap();
        let x_odd = idft_real(odd.values()).unwrap();
        let x_even = idft_real(even.values()).unwrap();
        let h = n / 2;
        let (first_odd, second_odd) = x_odd.split_at(h);
        let (first_even, second_even) = x_even.split_at(h);
        let negated: Vec<f64> = first_odd.iter().map(|v| -v).collect();
        worst[0] = worst[0].max(max_abs_diff(second_odd, &negated));
        worst[1] = worst[1].max(max_abs_diff(second_even, first_even));

        let p = extract_parts(&x_odd, &x_even).unwrap();
        let (ac, bd, bc, ad) = (
            p.block(Block::AC),
            p.block(Block::BD),
            p.block(Block::BC),
            p.block(Block::AD),
        );
        let lhs: Vec<f64> = (0..h).map(|k| ac[k] + bd[k]).collect();
        let rhs: Vec<f64> = (0..h).map(|k| bc[k] + ad[k]).collect();
        worst[2] = worst[2].max(max_abs_diff(&lhs, &rhs));

        let sum: Vec<f64> = x_odd.iter().zip(&x_even).map(|(a, b)| a + b).collect();
        let l: Vec<f64> = (0..h).map(|k| ac[k] - bd[k]).collect();
        let r: Vec<f64> = (0..h).map(|k| bc[k] - ad[k]).collect();
        worst[3] = worst[3].max(max_abs_diff(&l, &sum[..h]));
        worst[4] = worst[4].max(max_abs_diff(&r, &sum[h..]));

        let y = dft_real(&[ac.as_slice(), bc.as_slice()].concat()).unwrap();
        for m in (1..n).step_by(2) {
            worst[5] = worst[5].max((y[m] - spectrum.values()[m] / 2.0).norm());
        }
    }
    let names = [
        "odd antisymmetry",
        "even symmetry",
        "block-sum identity",
        "L identity",
        "R identity",
        "odd-bin halving",
    ];
    let detail: Vec<String> = names
        .iter()
        .zip(&worst)
        .map(|(name, w)| format!("{name} {w:.1e}"))
        .collect();
    report(
        3,
        worst.iter().all(|&w| w < 1e-9),
        &format!("1000 frames, {}", detail.join(", ")),
    );
}

#[test]
fn criterion_04_x1_noise_amplification() {
    let start = Instant::now();
    let n = 1024;
    let sigma2 = 0.25;
    let cfg = WaveformConfig::new(WaveformKind::x1(0), n, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut sum_l, mut sum_r, mut count) = (0.0, 0.0, 0usize);
    let mut frame = 0u64;
    while count < 1_000_000 {
        let data = random_symbols(&mut rng, &cfg);
        let tx = cfg.modulate_symbols(&data).unwrap();
        let rx = apply_channel(
            tx.samples(),
            NoiseConfig::new(0.0, sigma2).unwrap(),
            RngSeed::new(4, frame),
        )
        .unwrap();
        let (l0, r0) = x1_reconstruct(tx.samples(), 0).unwrap();
        let (l1, r1) = x1_reconstruct(&rx, 0).unwrap();
        sum_l += l0
            .iter()
            .zip(&l1)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>();
        sum_r += r0
            .iter()
            .zip(&r1)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>();
        count += l0.len();
        frame += 1;
    }
    let elapsed = start.elapsed();
    let var_l = sum_l / count as f64 / sigma2;
    let var_r = sum_r / count as f64 / sigma2;
    let pass = (var_l / 2.0 - 1.0).abs() < 0.03
        && (var_r / 6.0 - 1.0).abs() < 0.03
        && elapsed < Duration::from_secs(10);
    report(
        4,
        pass,
        &format!("var(L)={var_l:.4} sigma^2, var(R)={var_r:.4} sigma^2 over {count} samples, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_05_papr_ordering() {
    let start = Instant::now();
    let thresholds: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.01).collect();
    let kinds = [
        ("dco3", WaveformKind::dco_level_db(3.0)),
        ("dco1", WaveformKind::dco_level_db(1.0)),
        ("x1", WaveformKind::x1(0)),
        ("x2", WaveformKind::x2(0)),
        ("aco", WaveformKind::Aco),
        ("u", WaveformKind::U),
    ];
    let values: Vec<f64> = kinds
        .iter()
        .map(|&(_, kind)| {
            let p = plan(kind, 2048, 16, 2000, dependent());
            run_papr_ccdf(&p, &thresholds)
                .unwrap()
                .threshold_at(1e-2)
                .unwrap()
        })
        .collect();
    let elapsed = start.elapsed();
    let ordered = values[..5].windows(2).all(|w| w[0] < w[1]) && values[3] < values[5];
    let aco_u = (values[4] - values[5]).abs();
    let detail: Vec<String> = kinds
        .iter()
        .zip(&values)
        .map(|((name, _), v)| format!("{name} {v:.2}"))
        .collect();
    report(
        5,
        ordered && aco_u < 0.3 && elapsed < Duration::from_secs(120),
        &format!(
            "PAPR dB at CCDF 1e-2: {}, |aco-u|={aco_u:.2}, {elapsed:.2?}",
            detail.join(", ")
        ),
    );
}

#[test]
fn criterion_06_required_snr_4096qam() {
    let start = Instant::now();
    let measure = |kind| {
        let p = plan(kind, DESK_N, 4096, DESK_SYMBOLS, independent());
        find_required_ratio(&p, TARGET_BER, Metric::ElecSigma).unwrap()
    };
    let x2 = measure(WaveformKind::x2(0));
    let x1 = measure(WaveformKind::x1(0));
    let elapsed = start.elapsed();
    let within = |v: Option<f64>, want: f64| v.is_some_and(|v| (v - want).abs() <= 1.0);
    let pass = within(x2, 36.2) && within(x1, 37.2) && elapsed < Duration::from_secs(600);
    report(
        6,
        pass,
        &format!(
            "Eb(elec)/sigma^2 at BER 1e-3: x2 {x2:.2?} dB (want 36.2 +/- 1.0), x1 {x1:.2?} dB (want 37.2 +/- 1.0), {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_07_mixed_mode_unreachable() {
    let mut detail = Vec::new();
    let mut pass = true;
    for kind in [WaveformKind::x1(0), WaveformKind::x2(0)] {
        let mode = NoiseMode::Mixed {
            xi2: 0.0,
            snr_db: 40.0,
        };
        let p = plan(kind, DESK_N, 4096, DESK_SYMBOLS, mode);
        match find_required(&p, TARGET_BER, Metric::ElecXi).unwrap() {
            SearchOutcome::Unreachable { lowest_ber, .. } => {
                detail.push(format!(
                    "{} unreachable (lowest BER {lowest_ber:.2e})",
                    kind.name()
                ));
            }
            SearchOutcome::Converged(pt) => {
                pass = false;
                detail.push(format!(
                    "{} converged at {:.2} dB",
                    kind.name(),
                    pt.ratio_db(Metric::ElecXi)
                ));
            }
        }
    }
    report(7, pass, &detail.join(", "));
}

#[test]
fn criterion_08_dco_optimal_bias() {
    let grid: Vec<f64> = (1..=13).map(f64::from).collect();
    let orders = [4, 16, 64, 256, 1024];
    let cases = [
        (
            "dependent",
            dependent(),
            Metric::ElecXi,
            [4.0, 7.0, 8.0, 10.0, 11.0],
        ),
        (
            "independent",
            independent(),
            Metric::ElecSigma,
            [5.0, 8.0, 9.0, 10.0, 11.0],
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (label, mode, metric, expected) in cases {
        let plans: Vec<SimPlan> = orders
            .iter()
            .map(|&m| {
                plan(
                    WaveformKind::dco(mu_for_level(7.0)),
                    DESK_N,
                    m,
                    DESK_SYMBOLS,
                    mode,
                )
            })
            .collect();
        let sweep = run_sweep(&plans, TARGET_BER, metric, &grid).unwrap();
        let selected: Vec<f64> = orders
            .iter()
            .map(|&m| {
                sweep
                    .selected()
                    .find(|r| r.order == m)
                    .and_then(|r| r.bias_db)
                    .unwrap_or(f64::NAN)
            })
            .collect();
        pass &= selected
            .iter()
            .zip(&expected)
            .all(|(s, e)| (s - e).abs() <= 1.0);
        detail.push(format!("{label} {selected:?} (want {expected:?} +/- 1)"));
    }
    report(8, pass, &detail.join("; "));
}

#[test]
fn criterion_09_waveform_orderings() {
    let required = |kind, order, mode, metric| {
        let p = plan(kind, DESK_N, order, DESK_SYMBOLS, mode);
        find_required_ratio(&p, TARGET_BER, metric).unwrap()
    };
    let mut pass = true;
    let mut worst_aco_u = 0.0f64;
    for metric in Metric::ALL {
        let mode = if metric.is_dependent() {
            dependent()
        } else {
            independent()
        };
        for order in ORDERS {
            let aco = required(WaveformKind::Aco, order, mode, metric);
            let u = required(WaveformKind::U, order, mode, metric);
            match (aco, u) {
                (Some(a), Some(b)) => worst_aco_u = worst_aco_u.max((a - b).abs()),
                _ => pass = false,
            }
        }
    }
    pass &= worst_aco_u < 0.3;
    let mut gaps = Vec::new();
    for order in ORDERS {
        let x1 = required(WaveformKind::x1(0), order, dependent(), Metric::ElecXi);
        let x2 = required(WaveformKind::x2(0), order, dependent(), Metric::ElecXi);
        match (x1, x2) {
            (Some(a), Some(b)) => {
                pass &= b < a;
                gaps.push(format!("M={order} {:.2}", a - b));
            }
            _ => {
                pass = false;
                gaps.push(format!("M={order} x1 {x1:?} x2 {x2:?}"));
            }
        }
    }
    report(
        9,
        pass,
        &format!(
            "max |aco-u| {worst_aco_u:.2} dB over all metrics and M; x1-x2 Eb(elec)/xi^2 gap dB: {}",
            gaps.join(", ")
        ),
    );
}

fn direct_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, v)| {
                    let angle = sign * 2.0 * std::f64::consts::PI * ((k * t) % n) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, angle)
                })
                .sum()
        })
        .collect()
}

/// Exact Gray-coded square QAM BER with per-axis noise `s` on the odd-integer grid.
fn gray_qam_ber(order: usize, s: f64) -> f64 {
    let side = (order as f64).sqrt() as usize;
    let k = side.trailing_zeros() as usize;
    let normal = Normal::new(0.0, s).unwrap();
    let level = |i: usize| 2.0 * i as f64 - (side as f64 - 1.0);
    let mut bit_errors = 0.0;
    for i in 0..side {
        for j in 0..side {
            if i == j {
                continue;
            }
            let lo = if j == 0 {
                f64::NEG_INFINITY
            } else {
                level(j) - 1.0
            };
            let hi = if j == side - 1 {
                f64::INFINITY
            } else {
                level(j) + 1.0
            };
            let p = normal.cdf(hi - level(i)) - normal.cdf(lo - level(i));
            bit_errors += p * ((i ^ (i >> 1)) ^ (j ^ (j >> 1))).count_ones() as f64;
        }
    }
    bit_errors / (side * k) as f64
}

#[test]
fn criterion_10_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for n in [8, 16, 32] {
        for _ in 0..20 {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let forward = direct_dft(&x, -1.0);
            let inverse: Vec<Complex64> = direct_dft(&x, 1.0)
                .into_iter()
                .map(|v| v / n as f64)
                .collect();
            for (a, b) in dft(&x).unwrap().iter().zip(&forward) {
                worst = worst.max((a - b).norm());
            }
            for (a, b) in idft(&x).unwrap().iter().zip(&inverse) {
                worst = worst.max((a - b).norm());
            }
        }
    }

    let (n, order, target) = (1024, 16, 1e-2);
    let p = plan(
        WaveformKind::dco_level_db(13.0),
        n,
        order,
        DESK_SYMBOLS,
        independent(),
    );
    let gain = p.drive_gain().unwrap();
    let (mut lo, mut hi) = (0.05f64, 2.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if gray_qam_ber(order, mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let sigma2 = 2.0 * s * s * gain * gain / n as f64;
    let (record, _) = run_ber_point(&p, NoiseConfig::new(0.0, sigma2).unwrap()).unwrap();
    let ratio = record.ber() / target;
    report(
        10,
        worst < 1e-9 && (0.8..1.2).contains(&ratio),
        &format!(
            "dft/idft max error {worst:.1e}; DCO 13 dB BER {:.3e} vs analytic {target:.0e} (ratio {ratio:.3})",
            record.ber()
        ),
    );
}

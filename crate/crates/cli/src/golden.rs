//! The two `N = 8` worked examples, recomputed and compared table by table.

use num_complex::Complex64;
use owc_core::spectral::{build_hs_spectrum, idft_real, split_odd_even};
use owc_core::waveforms::{extract_parts, x1_modulate, x1_trace, x2_modulate, x2_trace, Block};
use owc_core::{WaveformConfig, WaveformKind};
use std::fmt::Write as _;

/// Absolute slack added to the comparison tolerance for floating-point noise.
pub const FLOAT_FLOOR: f64 = 1e-12;
pub const DEFAULT_TOLERANCE: f64 = 0.005;

/// Tolerance for entries printed with a single decimal.
pub const ONE_DECIMAL_TOLERANCE: f64 = 0.05;

/// Expected and computed values of one table.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub expected: Vec<Complex64>,
    pub computed: Vec<Complex64>,
    /// Indices whose expected value is printed to one decimal.
    pub one_decimal: &'static [usize],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub table: &'static str,
    pub index: usize,
    pub expected: Complex64,
    pub computed: Complex64,
}

impl Table {
    pub fn first_mismatch(&self, tolerance: f64) -> Option<Mismatch> {
        if self.expected.len() != self.computed.len() {
            return Some(Mismatch {
                table: self.name,
                index: self.expected.len().min(self.computed.len()),
                expected: Complex64::default(),
                computed: Complex64::default(),
            });
        }
        self.expected
            .iter()
            .zip(&self.computed)
            .enumerate()
            .position(|(i, (e, c))| {
                let tol = if tolerance > 0.0 && self.one_decimal.contains(&i) {
                    tolerance.max(ONE_DECIMAL_TOLERANCE)
                } else {
                    tolerance
                } + FLOAT_FLOOR;
                (e.re - c.re).abs() > tol || (e.im - c.im).abs() > tol
            })
            .map(|index| Mismatch {
                table: self.name,
                index,
                expected: self.expected[index],
                computed: self.computed[index],
            })
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

fn subcarriers() -> Vec<Complex64> {
    vec![
        c(0., 0.),
        c(-3., -1.),
        c(-3., 1.),
        c(-1., 3.),
        c(0., 0.),
        c(-1., -3.),
        c(-3., -1.),
        c(-3., 1.),
    ]
}

fn odd_subcarriers() -> Vec<Complex64> {
    let z = c(0., 0.);
    vec![z, c(-3., -1.), z, c(-1., 3.), z, c(-1., -3.), z, c(-3., 1.)]
}

fn even_subcarriers() -> Vec<Complex64> {
    let z = c(0., 0.);
    vec![z, z, c(-3., 1.), z, z, z, c(-3., -1.), z]
}

const ODD_IFFT: [f64; 8] = [-1., -0.71, 1., 0., 1., 0.71, -1., 0.];
const A_B: [f64; 8] = [0., 0., 1., 0., 1., 0.71, 0., 0.];
const EVEN_IFFT: [f64; 8] = [-0.75, -0.25, 0.75, 0.25, -0.75, -0.25, 0.75, 0.25];
const C_D: [f64; 8] = [0., 0., 0.75, 0.25, 0.75, 0.25, 0., 0.];

/// Transmitter tables shared by both examples.
fn transmitter_tables(prefix: &'static [&'static str; 7]) -> Vec<Table> {
    let data = &subcarriers()[1..4];
    let spectrum = build_hs_spectrum(data, 8).expect("valid example frame");
    let (odd, even) = split_odd_even(&spectrum).expect("example frame is Hermitian");
    let x_odd = idft_real(odd.values()).expect("power-of-two length");
    let x_even = idft_real(even.values()).expect("power-of-two length");
    let parts = extract_parts(&x_odd, &x_even).expect("example symmetry holds");
    let cat = |a: &[f64], b: &[f64]| reals(&[a, b].concat());
    vec![
        Table {
            name: prefix[0],
            expected: subcarriers(),
            computed: spectrum.values().to_vec(),
            one_decimal: &[],
        },
        Table {
            name: prefix[1],
            expected: odd_subcarriers(),
            computed: odd.values().to_vec(),
            one_decimal: &[],
        },
        Table {
            name: prefix[2],
            expected: reals(&ODD_IFFT),
            computed: reals(&x_odd),
            one_decimal: &[],
        },
        Table {
            name: prefix[3],
            expected: reals(&A_B),
            computed: cat(&parts.a, &parts.b),
            one_decimal: &[],
        },
        Table {
            name: prefix[4],
            expected: even_subcarriers(),
            computed: even.values().to_vec(),
            one_decimal: &[],
        },
        Table {
            name: prefix[5],
            expected: reals(&EVEN_IFFT),
            computed: reals(&x_even),
            one_decimal: &[],
        },
        Table {
            name: prefix[6],
            expected: reals(&C_D),
            computed: cat(&parts.c, &parts.d),
            one_decimal: &[],
        },
    ]
}

pub fn x1_tables() -> Vec<Table> {
    let mut tables = transmitter_tables(&[
        "x1/subcarriers",
        "x1/odd_subcarriers",
        "x1/odd_ifft",
        "x1/a_b",
        "x1/even_subcarriers",
        "x1/even_ifft",
        "x1/c_d",
    ]);
    let cfg = WaveformConfig::new(WaveformKind::x1(0), 8, 16).expect("valid config");
    let tx = x1_modulate(&subcarriers()[1..4], &cfg).expect("valid example");
    let trace = x1_trace(tx.samples(), &cfg).expect("valid frame");
    assert_eq!(trace.missing, Block::AD);
    tables.extend([
        Table {
            name: "x1/transmitted",
            expected: reals(&[0., 0., 1.75, 0.25, 1., 0.71, 0.75, 0.25, 1.75, 0.96, 0., 0.]),
            computed: reals(tx.samples()),
            one_decimal: &[],
        },
        Table {
            name: "x1/recovered_a_plus_d",
            expected: reals(&[0.75, 0.25, 1., 0.]),
            computed: reals(&trace.recovered),
            one_decimal: &[],
        },
        Table {
            name: "x1/l_r",
            expected: reals(&[-1.75, -0.96, 1.75, 0.25, 0.25, 0.46, -0.25, 0.25]),
            computed: reals(&[trace.l.as_slice(), trace.r.as_slice()].concat()),
            one_decimal: &[],
        },
        Table {
            name: "x1/recovered_subcarriers",
            expected: subcarriers(),
            computed: trace.spectrum,
            one_decimal: &[],
        },
    ]);
    tables
}

pub fn x2_tables() -> Vec<Table> {
    let mut tables = transmitter_tables(&[
        "x2/subcarriers",
        "x2/odd_subcarriers",
        "x2/odd_ifft",
        "x2/a_b",
        "x2/even_subcarriers",
        "x2/even_ifft",
        "x2/c_d",
    ]);
    let cfg = WaveformConfig::new(WaveformKind::x2(0), 8, 16).expect("valid config");
    let tx = x2_modulate(&subcarriers()[1..4], &cfg).expect("valid example");
    let trace = x2_trace(tx.samples(), &cfg).expect("valid frame");
    let (a_b, d) = tx.samples().split_at(8);
    tables.extend([
        Table {
            name: "x2/transmitted",
            expected: reals(&[0., 0., 1.75, 0.25, 1., 0.71, 0.75, 0.25, 0.75, 0.25, 0., 0.]),
            computed: reals(tx.samples()),
            one_decimal: &[],
        },
        Table {
            name: "x2/split_sums",
            expected: reals(&[0., 0., 1.75, 0.25, 1., 0.71, 0.75, 0.25]),
            computed: reals(a_b),
            one_decimal: &[],
        },
        Table {
            name: "x2/split_d",
            expected: reals(&[0.75, 0.25, 0., 0.]),
            computed: reals(d),
            one_decimal: &[],
        },
        Table {
            name: "x2/fft_y",
            expected: vec![
                c(4.71, 0.),
                c(-1.5, -0.5),
                c(-1.5, -0.2),
                c(-0.5, 1.5),
                c(2.29, 0.),
                c(-0.5, -1.5),
                c(-1.5, 0.2),
                c(-1.5, 0.5),
            ],
            computed: trace.y.clone(),
            one_decimal: &[2, 6],
        },
        Table {
            name: "x2/recovered_odd_subcarriers",
            expected: odd_subcarriers(),
            computed: trace.odd_spectrum.clone(),
            one_decimal: &[],
        },
        Table {
            name: "x2/regenerated_odd_ifft",
            expected: reals(&ODD_IFFT),
            computed: reals(&trace.x_odd),
            one_decimal: &[],
        },
        Table {
            name: "x2/regenerated_a_b",
            expected: reals(&A_B),
            computed: reals(&[trace.a.as_slice(), trace.b.as_slice()].concat()),
            one_decimal: &[],
        },
        Table {
            name: "x2/reconstructed_c",
            expected: reals(&[0., 0., 0.75, 0.25]),
            computed: reals(&trace.common),
            one_decimal: &[],
        },
        Table {
            name: "x2/c_minus_d_twice",
            expected: reals(&EVEN_IFFT),
            computed: reals(&trace.even_frame),
            one_decimal: &[],
        },
        Table {
            name: "x2/recovered_even_subcarriers",
            expected: even_subcarriers(),
            computed: trace.even_spectrum.clone(),
            one_decimal: &[],
        },
        Table {
            name: "x2/recovered_data",
            expected: subcarriers()[1..4].to_vec(),
            computed: trace.data.clone(),
            one_decimal: &[],
        },
    ]);
    tables
}

pub fn all_tables() -> Vec<Table> {
    let mut t = x1_tables();
    t.extend(x2_tables());
    t
}

pub struct GoldenReport {
    pub text: String,
    pub first_failure: Option<Mismatch>,
}

/// Compares every table, optionally after offsetting the first expected
/// entry of `perturb` by one.
pub fn verify(tolerance: f64, perturb: Option<&str>) -> Result<GoldenReport, String> {
    let mut tables = all_tables();
    if let Some(name) = perturb {
        let t = tables
            .iter_mut()
            .find(|t| t.name == name)
            .ok_or_else(|| format!("unknown golden table '{name}'"))?;
        t.expected[0] += 1.0;
    }
    let mut text = String::new();
    let mut first_failure = None;
    for t in &tables {
        match t.first_mismatch(tolerance) {
            None => writeln!(text, "PASS {}", t.name).unwrap(),
            Some(m) => {
                writeln!(
                    text,
                    "FAIL {} [{}]: expected {}, computed {}",
                    m.table, m.index, m.expected, m.computed
                )
                .unwrap();
                first_failure.get_or_insert(m);
            }
        }
    }
    Ok(GoldenReport {
        text,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_tables_pass_at_default_tolerance() {
        let r = verify(DEFAULT_TOLERANCE, None).unwrap();
        assert!(r.first_failure.is_none(), "{}", r.text);
    }

    #[test]
    fn zero_tolerance_fails_only_rounded_entries() {
        for t in all_tables() {
            for (i, (e, c)) in t.expected.iter().zip(&t.computed).enumerate() {
                let exact = (e - c).norm() <= FLOAT_FLOOR;
                let is_rounded = [e.re, e.im].iter().any(|v| {
                    let cents = v * 100.0;
                    (cents - cents.round()).abs() < 1e-9 && (v * 4.0).fract() != 0.0
                });
                assert!(exact || is_rounded, "{} [{i}]: {e} vs {c}", t.name);
            }
        }
        let r = verify(0.0, None).unwrap();
        let m = r.first_failure.expect("0.71 entries are rounded");
        assert_eq!((m.table, m.index), ("x1/odd_ifft", 1));
    }

    #[test]
    fn perturbation_names_table() {
        let r = verify(DEFAULT_TOLERANCE, Some("x2/reconstructed_c")).unwrap();
        let m = r.first_failure.unwrap();
        assert_eq!((m.table, m.index), ("x2/reconstructed_c", 0));
        assert!(verify(DEFAULT_TOLERANCE, Some("nope")).is_err());
    }
}

//! Subcarrier frames and the Hermitian-symmetric layout.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Absolute tolerance used when validating Hermitian symmetry.
const HS_TOLERANCE: f64 = 1e-9;

/// Checks that `n` is a valid OFDM frame size: a power of two, at least 8.
pub fn check_frame_size(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidFrameSize(n))
    }
}

/// `N` complex subcarrier values.
///
/// When `hs_checked` is set the frame satisfies `X[m] = conj(X[N-m])` for
/// `0 < m < N/2` and `X[0] = X[N/2] = 0`, so its inverse transform is real.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFrame {
    values: Vec<Complex64>,
    hs_checked: bool,
}

impl SpectrumFrame {
    /// Wraps arbitrary subcarrier values without a symmetry claim.
    pub fn new(values: Vec<Complex64>) -> Result<SpectrumFrame> {
        check_frame_size(values.len())?;
        Ok(SpectrumFrame {
            values,
            hs_checked: false,
        })
    }

    /// Wraps values that must be Hermitian symmetric with empty DC and
    /// Nyquist bins.
    pub fn hermitian(values: Vec<Complex64>) -> Result<SpectrumFrame> {
        check_frame_size(values.len())?;
        if let Some(bin) = hermitian_violation(&values) {
            return Err(Error::NotHermitian { bin });
        }
        Ok(SpectrumFrame {
            values,
            hs_checked: true,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_hermitian(&self) -> bool {
        self.hs_checked
    }
}

fn hermitian_violation(values: &[Complex64]) -> Option<usize> {
    let n = values.len();
    if values[0].norm() > HS_TOLERANCE {
        return Some(0);
    }
    if values[n / 2].norm() > HS_TOLERANCE {
        return Some(n / 2);
    }
    (1..n / 2).find(|&m| (values[m] - values[n - m].conj()).norm() > HS_TOLERANCE)
}

/// Places `N/2 - 1` data symbols on bins `1..N/2` and mirrors their
/// conjugates onto the upper half.
pub fn build_hs_spectrum(data: &[Complex64], n: usize) -> Result<SpectrumFrame> {
    check_frame_size(n)?;
    if data.len() != n / 2 - 1 {
        return Err(Error::LengthMismatch {
            what: "data symbols",
            expected: n / 2 - 1,
            actual: data.len(),
        });
    }
    let mut values = vec![Complex64::default(); n];
    for (m, &d) in (1..n / 2).zip(data) {
        values[m] = d;
        values[n - m] = d.conj();
    }
    Ok(SpectrumFrame {
        values,
        hs_checked: true,
    })
}

/// Splits a Hermitian frame into its odd-bin and even-bin parts.
///
/// Each output keeps the input values on its own bins and zeros elsewhere;
/// both remain Hermitian.
pub fn split_odd_even(frame: &SpectrumFrame) -> Result<(SpectrumFrame, SpectrumFrame)> {
    if !frame.hs_checked {
        if let Some(bin) = hermitian_violation(&frame.values) {
            return Err(Error::NotHermitian { bin });
        }
    }
    let zero = Complex64::default();
    let keep = |parity: usize| -> Vec<Complex64> {
        frame
            .values
            .iter()
            .enumerate()
            .map(|(m, &v)| if m % 2 == parity { v } else { zero })
            .collect()
    };
    Ok((
        SpectrumFrame {
            values: keep(1),
            hs_checked: true,
        },
        SpectrumFrame {
            values: keep(0),
            hs_checked: true,
        },
    ))
}

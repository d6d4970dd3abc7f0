//! Mixed OFDM, types 1 and 2.
//!
//! Both transmitters split a Hermitian frame into odd and even subcarriers,
//! take one inverse transform of each and extract the quarter parts
//! `A, B, C, D`. They then send three `N/2`-sample blocks.
//!
//! Type 1 sends three of `(A+C), (B+D), (B+C), (A+D)`. The receiver restores
//! the fourth from `(A+C) + (B+D) = (B+C) + (A+D)`, rebuilds the bipolar
//! frame as `L = (A+C) - (B+D)`, `R = (B+C) - (A+D)` and takes one forward
//! transform.
//!
//! Type 2 sends `(A+C), (B+C), D` or `(A+D), (B+D), C`. The transform of the
//! first `N` samples carries half of every odd subcarrier. The receiver
//! regenerates `A` and `B` from those, strips them from the sums to recover
//! the common block, and reads the even subcarriers from `[C-D, C-D]`.

use super::parts::{extract_parts, split_sign, Block, QuarterParts};
use super::{wrong_kind, CEstimator, ModemOutput, TxFrame, WaveformConfig, WaveformKind};
use crate::error::{Error, Result};
use crate::spectral::{build_hs_spectrum, dft_real, idft_real, split_odd_even, ComplexValue};

/// Type-1 candidate block orders. Candidate 0 omits `(A+D)`.
pub const X1_CANDIDATES: [[Block; 3]; 4] = [
    [Block::AC, Block::BC, Block::BD],
    [Block::AC, Block::AD, Block::BD],
    [Block::AC, Block::BC, Block::AD],
    [Block::BC, Block::BD, Block::AD],
];

/// Type-2 candidate block orders.
pub const X2_CANDIDATES: [[Block; 3]; 2] = [
    [Block::AC, Block::BC, Block::D],
    [Block::AD, Block::BD, Block::C],
];

pub fn x1_blocks(candidate: usize) -> Result<[Block; 3]> {
    X1_CANDIDATES
        .get(candidate)
        .copied()
        .ok_or(Error::InvalidCandidate(candidate))
}

pub fn x2_blocks(candidate: usize) -> Result<[Block; 3]> {
    X2_CANDIDATES
        .get(candidate)
        .copied()
        .ok_or(Error::InvalidCandidate(candidate))
}

/// Builds the Hermitian frame from `N/2 - 1` data symbols and extracts its
/// quarter parts.
pub fn x1_quarter_parts(data: &[ComplexValue], n: usize) -> Result<QuarterParts> {
    let spectrum = build_hs_spectrum(data, n)?;
    let (odd, even) = split_odd_even(&spectrum)?;
    extract_parts(&idft_real(odd.values())?, &idft_real(even.values())?)
}

pub fn x1_modulate(data: &[ComplexValue], config: &WaveformConfig) -> Result<TxFrame> {
    let WaveformKind::X1 { candidate } = config.kind else {
        return Err(wrong_kind("x1", &config.kind));
    };
    config.check_data(data)?;
    let blocks = x1_blocks(candidate)?;
    let parts = x1_quarter_parts(data, config.n)?;
    Ok(TxFrame::from_nonnegative(parts.mix(&blocks)))
}

/// Intermediate values of the type-1 receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct X1Trace {
    pub missing: Block,
    /// The block restored from the other three.
    pub recovered: Vec<f64>,
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    /// Forward transform of `[L, R]`.
    pub spectrum: Vec<ComplexValue>,
}

/// Restores the missing block and returns `(L, R)`.
pub fn x1_reconstruct(rx: &[f64], candidate: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let trace = x1_reconstruct_blocks(rx, candidate)?;
    Ok((trace.1, trace.2))
}

/// Missing block, `L`, `R` and the restored block.
type X1Blocks = (Block, Vec<f64>, Vec<f64>, Vec<f64>);

fn x1_reconstruct_blocks(rx: &[f64], candidate: usize) -> Result<X1Blocks> {
    let blocks = x1_blocks(candidate)?;
    if rx.len() % 3 != 0 || rx.is_empty() {
        return Err(Error::InvalidLength(rx.len()));
    }
    let h = rx.len() / 3;
    let get = |b: Block| -> Option<&[f64]> {
        blocks
            .iter()
            .position(|&x| x == b)
            .map(|i| &rx[i * h..(i + 1) * h])
    };
    let missing = [Block::AC, Block::BD, Block::BC, Block::AD]
        .into_iter()
        .find(|b| !blocks.contains(b))
        .expect("three of four blocks are transmitted");
    // (A+C) + (B+D) = (B+C) + (A+D): missing = other pair - partner.
    let (other, partner) = match missing {
        Block::AC => ([Block::BC, Block::AD], Block::BD),
        Block::BD => ([Block::BC, Block::AD], Block::AC),
        Block::BC => ([Block::AC, Block::BD], Block::AD),
        Block::AD => ([Block::AC, Block::BD], Block::BC),
        _ => unreachable!(),
    };
    let (o1, o2, p) = (
        get(other[0]).unwrap(),
        get(other[1]).unwrap(),
        get(partner).unwrap(),
    );
    let recovered: Vec<f64> = (0..h).map(|k| o1[k] + o2[k] - p[k]).collect();
    let block = |b: Block| -> &[f64] {
        if b == missing {
            &recovered
        } else {
            get(b).unwrap()
        }
    };
    let (ac, bd, bc, ad) = (
        block(Block::AC),
        block(Block::BD),
        block(Block::BC),
        block(Block::AD),
    );
    let l = (0..h).map(|k| ac[k] - bd[k]).collect();
    let r = (0..h).map(|k| bc[k] - ad[k]).collect();
    Ok((missing, l, r, recovered))
}

pub fn x1_trace(rx: &[f64], config: &WaveformConfig) -> Result<X1Trace> {
    let WaveformKind::X1 { candidate } = config.kind else {
        return Err(wrong_kind("x1", &config.kind));
    };
    config.check_rx(rx)?;
    let (missing, l, r, recovered) = x1_reconstruct_blocks(rx, candidate)?;
    let frame: Vec<f64> = l.iter().chain(&r).copied().collect();
    let spectrum = dft_real(&frame)?;
    Ok(X1Trace {
        missing,
        recovered,
        l,
        r,
        spectrum,
    })
}

pub fn x1_demodulate(rx: &[f64], config: &WaveformConfig) -> Result<ModemOutput> {
    let trace = x1_trace(rx, config)?;
    let data = trace.spectrum[1..config.n / 2].to_vec();
    Ok(config.output(data))
}

pub fn x2_modulate(data: &[ComplexValue], config: &WaveformConfig) -> Result<TxFrame> {
    let WaveformKind::X2 { candidate, .. } = config.kind else {
        return Err(wrong_kind("x2", &config.kind));
    };
    config.check_data(data)?;
    let blocks = x2_blocks(candidate)?;
    let parts = x1_quarter_parts(data, config.n)?;
    Ok(TxFrame::from_nonnegative(parts.mix(&blocks)))
}

/// Intermediate values of the successive type-2 receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct X2Trace {
    /// Forward transform of the first `N` received samples.
    pub y: Vec<ComplexValue>,
    /// Odd-only spectrum `2·Y` on odd bins, after optional slicing.
    pub odd_spectrum: Vec<ComplexValue>,
    /// Odd-subcarrier time signal regenerated from `odd_spectrum`.
    pub x_odd: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Estimate of the block shared by the two sums (C for candidate 0).
    pub common: Vec<f64>,
    /// `[C-D, C-D]`.
    pub even_frame: Vec<f64>,
    /// Forward transform of `even_frame`.
    pub even_spectrum: Vec<ComplexValue>,
    /// Recovered data symbols on bins `1..N/2`.
    pub data: Vec<ComplexValue>,
}

pub fn x2_trace(rx: &[f64], config: &WaveformConfig) -> Result<X2Trace> {
    let WaveformKind::X2 {
        candidate,
        c_estimator,
        slice_before_reconstruct,
    } = config.kind
    else {
        return Err(wrong_kind("x2", &config.kind));
    };
    let blocks = x2_blocks(candidate)?;
    config.check_rx(rx)?;
    let n = config.n;
    let h = n / 2;
    let (first, last) = rx.split_at(n);

    let y = dft_real(first)?;
    let zero = ComplexValue::default();
    let mut odd_spectrum = vec![zero; n];
    let mut data = vec![zero; h - 1];
    for m in (1..h).step_by(2) {
        let estimate = 2.0 * y[m];
        data[m - 1] = estimate;
        let used = if slice_before_reconstruct {
            config.qam.slice(estimate)
        } else {
            estimate
        };
        odd_spectrum[m] = used;
        odd_spectrum[n - m] = used.conj();
    }

    let x_odd = idft_real(&odd_spectrum)?;
    let (a, b) = split_sign(&x_odd[..h]);
    let (sum_a, sum_b) = first.split_at(h);
    let common: Vec<f64> = (0..h)
        .map(|k| {
            let from_a = sum_a[k] - a[k];
            let from_b = sum_b[k] - b[k];
            match c_estimator {
                CEstimator::FromA => from_a,
                CEstimator::FromB => from_b,
                CEstimator::Average => (from_a + from_b) / 2.0,
            }
        })
        .collect();
    // Candidate 0 shares C and sends D; candidate 1 shares D and sends C.
    let half: Vec<f64> = match blocks[2] {
        Block::D => (0..h).map(|k| common[k] - last[k]).collect(),
        _ => (0..h).map(|k| last[k] - common[k]).collect(),
    };
    let even_frame: Vec<f64> = half.iter().chain(&half).copied().collect();
    let even_spectrum = dft_real(&even_frame)?;
    for m in (2..h).step_by(2) {
        data[m - 1] = even_spectrum[m];
    }
    Ok(X2Trace {
        y,
        odd_spectrum,
        x_odd,
        a,
        b,
        common,
        even_frame,
        even_spectrum,
        data,
    })
}

pub fn x2_demodulate(rx: &[f64], config: &WaveformConfig) -> Result<ModemOutput> {
    let trace = x2_trace(rx, config)?;
    Ok(config.output(trace.data))
}

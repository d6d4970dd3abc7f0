//! Gray-coded square QAM on the unnormalized odd-integer grid.
//!
//! Each axis carries `log2(M)/2` bits mapped through a reflected Gray code to
//! the levels `-(√M-1), …, -1, +1, …, +(√M-1)`. In-phase bits precede
//! quadrature bits, most significant bit first. For 16-QAM the per-axis map is
//! `00 → -3, 01 → -1, 11 → +1, 10 → +3`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Supported constellation orders.
pub const SUPPORTED_ORDERS: [usize; 6] = [4, 16, 64, 256, 1024, 4096];

/// A square QAM constellation of order `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Qam {
    order: usize,
}

impl TryFrom<usize> for Qam {
    type Error = Error;

    fn try_from(order: usize) -> Result<Qam> {
        Qam::new(order)
    }
}

impl From<Qam> for usize {
    fn from(q: Qam) -> usize {
        q.order
    }
}

impl Qam {
    pub fn new(order: usize) -> Result<Qam> {
        if SUPPORTED_ORDERS.contains(&order) {
            Ok(Qam { order })
        } else {
            Err(Error::UnsupportedOrder(order))
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    fn bits_per_axis(&self) -> usize {
        self.bits_per_symbol() / 2
    }

    /// Number of levels per axis, `√M`.
    pub fn side(&self) -> usize {
        1 << self.bits_per_axis()
    }

    /// Mean symbol energy of the grid, `2(M-1)/3`.
    pub fn mean_energy(&self) -> f64 {
        2.0 * (self.order as f64 - 1.0) / 3.0
    }

    fn level(&self, index: usize) -> f64 {
        (2 * index) as f64 - (self.side() - 1) as f64
    }

    /// Index of the nearest level; boundary ties go to the smaller level.
    fn nearest_index(&self, value: f64) -> usize {
        let side = self.side();
        let t = (value + (side - 1) as f64) / 2.0;
        let i = (t - 0.5).ceil();
        if i <= 0.0 {
            0
        } else if i >= (side - 1) as f64 {
            side - 1
        } else {
            i as usize
        }
    }

    fn axis_from_bits(&self, bits: &[bool]) -> f64 {
        let gray = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.level(gray_to_binary(gray))
    }

    fn axis_to_bits(&self, value: f64, out: &mut Vec<bool>) {
        let gray = binary_to_gray(self.nearest_index(value));
        let k = self.bits_per_axis();
        out.extend((0..k).rev().map(|i| (gray >> i) & 1 == 1));
    }

    /// Maps one group of `log2(M)` bits to a grid point.
    pub fn map_symbol(&self, bits: &[bool]) -> Result<Complex64> {
        if bits.len() != self.bits_per_symbol() {
            return Err(Error::LengthMismatch {
                what: "bits per symbol",
                expected: self.bits_per_symbol(),
                actual: bits.len(),
            });
        }
        let (i_bits, q_bits) = bits.split_at(self.bits_per_axis());
        Ok(Complex64::new(
            self.axis_from_bits(i_bits),
            self.axis_from_bits(q_bits),
        ))
    }

    /// Maps a bit sequence to symbols, `log2(M)` bits per symbol.
    pub fn map(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        let k = self.bits_per_symbol();
        if bits.len() % k != 0 {
            return Err(Error::LengthMismatch {
                what: "bits (multiple of bits per symbol)",
                expected: bits.len() / k * k,
                actual: bits.len(),
            });
        }
        bits.chunks(k).map(|c| self.map_symbol(c)).collect()
    }

    /// Hard-decision demapping of one symbol, appended to `out`.
    pub fn demap_into(&self, symbol: Complex64, out: &mut Vec<bool>) {
        self.axis_to_bits(symbol.re, out);
        self.axis_to_bits(symbol.im, out);
    }

    pub fn demap_symbol(&self, symbol: Complex64) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.bits_per_symbol());
        self.demap_into(symbol, &mut out);
        out
    }

    pub fn demap(&self, symbols: &[Complex64]) -> Vec<bool> {
        let mut out = Vec::with_capacity(symbols.len() * self.bits_per_symbol());
        for &s in symbols {
            self.demap_into(s, &mut out);
        }
        out
    }

    /// Nearest grid point.
    pub fn slice(&self, symbol: Complex64) -> Complex64 {
        Complex64::new(
            self.level(self.nearest_index(symbol.re)),
            self.level(self.nearest_index(symbol.im)),
        )
    }
}

fn binary_to_gray(b: usize) -> usize {
    b ^ (b >> 1)
}

fn gray_to_binary(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}

/// Maps bits to symbols of an `order`-QAM constellation.
pub fn qam_map(bits: &[bool], order: usize) -> Result<Vec<Complex64>> {
    Qam::new(order)?.map(bits)
}

/// Demaps one symbol to its bit group.
pub fn qam_demap(symbol: Complex64, order: usize) -> Result<Vec<bool>> {
    Ok(Qam::new(order)?.demap_symbol(symbol))
}

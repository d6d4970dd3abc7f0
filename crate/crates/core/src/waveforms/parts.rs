//! Quarter-part extraction and the block sums the X-OFDM mixers transmit.

use crate::error::{Error, Result};

/// Tolerance for the antisymmetry/symmetry preconditions of [`extract_parts`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// The four non-negative `N/2`-point sequences of an X-OFDM frame.
///
/// Over the first half of the frame, `A` and `B` are the positive and negated
/// negative parts of the odd-subcarrier signal, `C` and `D` those of the
/// even-subcarrier signal.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarterParts {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// One `N/2`-sample block of a mixed frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    AC,
    BD,
    BC,
    AD,
    C,
    D,
}

impl Block {
    pub fn label(&self) -> &'static str {
        match self {
            Block::AC => "(A+C)",
            Block::BD => "(B+D)",
            Block::BC => "(B+C)",
            Block::AD => "(A+D)",
            Block::C => "C",
            Block::D => "D",
        }
    }
}

impl QuarterParts {
    pub fn half_len(&self) -> usize {
        self.a.len()
    }

    pub fn block(&self, block: Block) -> Vec<f64> {
        let sum = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p + q).collect();
        match block {
            Block::AC => sum(&self.a, &self.c),
            Block::BD => sum(&self.b, &self.d),
            Block::BC => sum(&self.b, &self.c),
            Block::AD => sum(&self.a, &self.d),
            Block::C => self.c.clone(),
            Block::D => self.d.clone(),
        }
    }

    /// Concatenates the given blocks into one frame.
    pub fn mix(&self, blocks: &[Block]) -> Vec<f64> {
        let mut out = Vec::with_capacity(blocks.len() * self.half_len());
        for &b in blocks {
            out.extend(self.block(b));
        }
        out
    }
}

/// Splits a real sequence into its non-negative part and its negated
/// negative part: `((|x|+x)/2, (|x|-x)/2)`.
pub fn split_sign(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    x.iter()
        .map(|&v| ((v.abs() + v) / 2.0, (v.abs() - v) / 2.0))
        .unzip()
}

/// Extracts `A, B, C, D` from the first halves of an antisymmetric odd-bin
/// signal and a symmetric even-bin signal.
pub fn extract_parts(x_odd: &[f64], x_even: &[f64]) -> Result<QuarterParts> {
    let n = x_odd.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidLength(n));
    }
    if x_even.len() != n {
        return Err(Error::LengthMismatch {
            what: "even-subcarrier samples",
            expected: n,
            actual: x_even.len(),
        });
    }
    let h = n / 2;
    for k in 0..h {
        let dev = (x_odd[k + h] + x_odd[k]).abs();
        if dev > SYMMETRY_TOLERANCE {
            return Err(Error::SymmetryViolation {
                kind: "antisymmetry",
                index: k,
                deviation: dev,
            });
        }
        let dev = (x_even[k + h] - x_even[k]).abs();
        if dev > SYMMETRY_TOLERANCE {
            return Err(Error::SymmetryViolation {
                kind: "symmetry",
                index: k,
                deviation: dev,
            });
        }
    }
    let (a, b) = split_sign(&x_odd[..h]);
    let (c, d) = split_sign(&x_even[..h]);
    Ok(QuarterParts { a, b, c, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    const X_ODD: [f64; 8] = [
        -1.0,
        -std::f64::consts::FRAC_1_SQRT_2,
        1.0,
        0.0,
        1.0,
        std::f64::consts::FRAC_1_SQRT_2,
        -1.0,
        0.0,
    ];
    const X_EVEN: [f64; 8] = [-0.75, -0.25, 0.75, 0.25, -0.75, -0.25, 0.75, 0.25];

    #[test]
    fn worked_example_parts() {
        let p = extract_parts(&X_ODD, &X_EVEN).unwrap();
        assert_eq!(p.a, vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(p.b, vec![1.0, std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0]);
        assert_eq!(p.c, vec![0.0, 0.0, 0.75, 0.25]);
        assert_eq!(p.d, vec![0.75, 0.25, 0.0, 0.0]);
    }

    #[test]
    fn zero_inputs() {
        let p = extract_parts(&[0.0; 8], &[0.0; 8]).unwrap();
        for part in [&p.a, &p.b, &p.c, &p.d] {
            assert!(part.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn rejects_broken_symmetry() {
        let mut odd = X_ODD;
        odd[5] += 1e-6;
        assert!(matches!(
            extract_parts(&odd, &X_EVEN),
            Err(Error::SymmetryViolation {
                kind: "antisymmetry",
                index: 1,
                ..
            })
        ));
        let mut even = X_EVEN;
        even[7] = 0.0;
        assert!(matches!(
            extract_parts(&X_ODD, &even),
            Err(Error::SymmetryViolation {
                kind: "symmetry",
                index: 3,
                ..
            })
        ));
        assert!(matches!(
            extract_parts(&X_ODD, &X_EVEN[..4]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mixing_uses_block_sums() {
        let p = extract_parts(&X_ODD, &X_EVEN).unwrap();
        let tx = p.mix(&[Block::AC, Block::BC, Block::BD]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [
            0.0,
            0.0,
            1.75,
            0.25,
            1.0,
            r,
            0.75,
            0.25,
            1.75,
            0.25 + r,
            0.0,
            0.0,
        ];
        for (a, b) in tx.iter().zip(expected) {
            assert!((a - b).abs() < 1e-4);
        }
    }
}

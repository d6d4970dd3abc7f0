//! Transforms, QAM mapping and Hermitian-symmetric subcarrier frames.

mod fft;
mod frame;
mod qam;

pub use fft::{dft, dft_real, idft, idft_real, Radix2Plan};
pub use frame::{build_hs_spectrum, check_frame_size, split_odd_even, SpectrumFrame};
pub use qam::{qam_demap, qam_map, Qam, SUPPORTED_ORDERS};

/// Complex subcarrier value.
pub type ComplexValue = num_complex::Complex64;

/// Payload bits, one `bool` per bit.
pub type BitBlock = Vec<bool>;

//! DCO-, ACO- and U-OFDM.

use super::{wrong_kind, ModemOutput, TxFrame, WaveformConfig, WaveformKind};
use crate::error::Result;
use crate::spectral::{build_hs_spectrum, dft_real, idft_real, ComplexValue};

fn bipolar(data: &[ComplexValue], config: &WaveformConfig) -> Result<Vec<f64>> {
    config.check_data(data)?;
    idft_real(build_hs_spectrum(data, config.n)?.values())
}

pub fn dco_modulate(data: &[ComplexValue], config: &WaveformConfig) -> Result<TxFrame> {
    let WaveformKind::Dco { mu } = config.kind else {
        return Err(wrong_kind("dco", &config.kind));
    };
    let x = bipolar(data, config)?;
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
    let bias = mu * rms;
    Ok(TxFrame::from_nonnegative(
        x.into_iter().map(|v| (v + bias).max(0.0)).collect(),
    ))
}

pub fn dco_demodulate(rx: &[f64], config: &WaveformConfig) -> Result<ModemOutput> {
    if !matches!(config.kind, WaveformKind::Dco { .. }) {
        return Err(wrong_kind("dco", &config.kind));
    }
    config.check_rx(rx)?;
    let y = dft_real(rx)?;
    Ok(config.output(y[1..config.n / 2].to_vec()))
}

pub fn aco_modulate(data: &[ComplexValue], config: &WaveformConfig) -> Result<TxFrame> {
    if config.kind != WaveformKind::Aco {
        return Err(wrong_kind("aco", &config.kind));
    }
    config.check_data(data)?;
    let n = config.n;
    let mut spectrum = vec![ComplexValue::default(); n];
    for (m, &d) in (1..n / 2).step_by(2).zip(data) {
        spectrum[m] = d;
        spectrum[n - m] = d.conj();
    }
    let x = idft_real(&spectrum)?;
    Ok(TxFrame::from_nonnegative(
        x.into_iter().map(|v| v.max(0.0)).collect(),
    ))
}

pub fn aco_demodulate(rx: &[f64], config: &WaveformConfig) -> Result<ModemOutput> {
    if config.kind != WaveformKind::Aco {
        return Err(wrong_kind("aco", &config.kind));
    }
    config.check_rx(rx)?;
    let y = dft_real(rx)?;
    let data = (1..config.n / 2).step_by(2).map(|m| 2.0 * y[m]).collect();
    Ok(config.output(data))
}

pub fn u_modulate(data: &[ComplexValue], config: &WaveformConfig) -> Result<TxFrame> {
    if config.kind != WaveformKind::U {
        return Err(wrong_kind("u", &config.kind));
    }
    let x = bipolar(data, config)?;
    let mut out: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
    out.extend(x.iter().map(|&v| (-v).max(0.0)));
    Ok(TxFrame::from_nonnegative(out))
}

pub fn u_demodulate(rx: &[f64], config: &WaveformConfig) -> Result<ModemOutput> {
    if config.kind != WaveformKind::U {
        return Err(wrong_kind("u", &config.kind));
    }
    config.check_rx(rx)?;
    let (pos, neg) = rx.split_at(config.n);
    let y: Vec<f64> = pos.iter().zip(neg).map(|(p, q)| p - q).collect();
    let spectrum = dft_real(&y)?;
    Ok(config.output(spectrum[1..config.n / 2].to_vec()))
}

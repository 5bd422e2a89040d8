//! Eavesdropper channel simulators.
//!
//! Modulation is fixed as bit 0 ↦ +1 and bit 1 ↦ -1, and the BI-AWGN output
//! for symbol `x` is `x·sqrt(2λ) + N(0, 1)`. The channel is output-symmetric,
//! so the opposite sign pairing would change no capacity, threshold or
//! equivocation value.
//!
//! The two degraded simulators first pass the input through an erasure
//! channel and then post-process the erasure output so that the end-to-end
//! law is exactly the BI-AWGN or BSC law. Their first output is the erasure
//! channel observation; the second is the eavesdropper observation.

use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::capacity::q_function;
use crate::error::{check_probability, Error, Result};

/// Bisection stopping width for inverse-CDF sampling.
const INVERSION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelModel {
    /// Binary erasure channel.
    Bec { erasure: f64 },
    /// Binary symmetric channel.
    Bsc { crossover: f64 },
    /// Binary-input AWGN with `snr = Es/N0`.
    #[serde(rename = "awgn")]
    BiAwgn { snr: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Bec { erasure } => check_probability("erasure probability", erasure),
            ChannelModel::Bsc { crossover } => check_probability("crossover probability", crossover),
            ChannelModel::BiAwgn { snr } => {
                if snr >= 0.0 && snr.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("SNR must be finite and non-negative, got {snr}")))
                }
            }
        }
    }

    /// The scalar parameter (ε, q or λ).
    pub fn parameter(&self) -> f64 {
        match *self {
            ChannelModel::Bec { erasure } => erasure,
            ChannelModel::Bsc { crossover } => crossover,
            ChannelModel::BiAwgn { snr } => snr,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelModel::Bec { .. } => "bec",
            ChannelModel::Bsc { .. } => "bsc",
            ChannelModel::BiAwgn { .. } => "awgn",
        }
    }
}

/// Output alphabet `{+1, 0, -1}` of the embedded erasure channel; `0` is an erasure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErasureSymbol {
    Plus,
    Erased,
    Minus,
}

impl ErasureSymbol {
    pub fn value(self) -> i8 {
        match self {
            ErasureSymbol::Plus => 1,
            ErasureSymbol::Erased => 0,
            ErasureSymbol::Minus => -1,
        }
    }

    pub fn from_symbol(x: i8) -> Self {
        if x >= 0 {
            ErasureSymbol::Plus
        } else {
            ErasureSymbol::Minus
        }
    }

    /// The bit carried by an unerased symbol.
    pub fn bit(self) -> Option<u8> {
        match self {
            ErasureSymbol::Plus => Some(0),
            ErasureSymbol::Minus => Some(1),
            ErasureSymbol::Erased => None,
        }
    }

    pub fn is_erased(self) -> bool {
        self == ErasureSymbol::Erased
    }
}

/// Bit 0 ↦ +1, bit 1 ↦ -1.
pub fn modulate(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| if b & 1 == 0 { 1 } else { -1 }).collect()
}

pub fn bec_transmit<R: Rng + ?Sized>(x: &[i8], erasure: f64, rng: &mut R) -> Result<Vec<ErasureSymbol>> {
    check_probability("erasure probability", erasure)?;
    Ok(x
        .iter()
        .map(|&s| {
            if rng.random::<f64>() < erasure {
                ErasureSymbol::Erased
            } else {
                ErasureSymbol::from_symbol(s)
            }
        })
        .collect())
}

pub fn bsc_transmit<R: Rng + ?Sized>(bits: &[u8], crossover: f64, rng: &mut R) -> Result<Vec<u8>> {
    check_probability("crossover probability", crossover)?;
    Ok(bits
        .iter()
        .map(|&b| if rng.random::<f64>() < crossover { (b & 1) ^ 1 } else { b & 1 })
        .collect())
}

fn check_snr(snr: f64) -> Result<()> {
    if snr >= 0.0 && snr.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("SNR must be finite and non-negative, got {snr}")))
    }
}

/// `z_i = x_i·sqrt(2λ) + n_i` with standard normal `n_i`.
pub fn biawgn_transmit<R: Rng + ?Sized>(x: &[i8], snr: f64, rng: &mut R) -> Result<Vec<f64>> {
    check_snr(snr)?;
    let amp = (2.0 * snr).sqrt();
    Ok(x
        .iter()
        .map(|&s| {
            let noise: f64 = StandardNormal.sample(rng);
            s as f64 * amp + noise
        })
        .collect())
}

/// `log p(z | bit 0) / p(z | bit 1) = 2·sqrt(2λ)·z`.
pub fn awgn_llr(z: &[f64], snr: f64) -> Vec<f64> {
    let scale = 2.0 * (2.0 * snr).sqrt();
    z.iter().map(|&v| scale * v).collect()
}

/// Standard normal density.
fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `g(z | x)`: BI-AWGN transition density for symbol `x ∈ {+1, -1}`.
pub fn awgn_density(z: f64, x: i8, snr: f64) -> f64 {
    phi(z - x as f64 * (2.0 * snr).sqrt())
}

/// `p(z' | x)` of the embedded erasure channel.
pub fn erasure_transition(z_prime: ErasureSymbol, x: i8, erasure: f64) -> f64 {
    match z_prime {
        ErasureSymbol::Erased => erasure,
        s if s == ErasureSymbol::from_symbol(x) => 1.0 - erasure,
        _ => 0.0,
    }
}

/// `f(z | z')`: post-processing density that turns the embedded erasure
/// channel back into BI-AWGN(λ). Requires `λ > 0`.
pub fn degraded_conditional_density(z: f64, z_prime: ErasureSymbol, snr: f64) -> f64 {
    let eps = 2.0 * q_function((2.0 * snr).sqrt());
    let plus = awgn_density(z, 1, snr);
    let minus = awgn_density(z, -1, snr);
    match z_prime {
        ErasureSymbol::Plus if z >= 0.0 => (plus - minus) / (1.0 - eps),
        ErasureSymbol::Minus if z < 0.0 => (minus - plus) / (1.0 - eps),
        ErasureSymbol::Erased if z >= 0.0 => minus / eps,
        ErasureSymbol::Erased => plus / eps,
        _ => 0.0,
    }
}

/// Embedded-BEC simulation of BI-AWGN(λ): `z' = BEC(2Q(sqrt(2λ)))`, then `z ~ f(· | z')`.
pub fn awgn_degraded_transmit<R: Rng + ?Sized>(
    x: &[i8],
    snr: f64,
    rng: &mut R,
) -> Result<(Vec<ErasureSymbol>, Vec<f64>)> {
    check_snr(snr)?;
    if snr == 0.0 {
        return Err(Error::invalid(
            "degraded AWGN simulation needs λ > 0 (λ = 0 makes every symbol an erasure)",
        ));
    }
    let amp = (2.0 * snr).sqrt();
    let eps = 2.0 * q_function(amp);
    let z_prime = bec_transmit(x, eps, rng)?;
    let tail = TailSampler::new(amp);
    let z = z_prime
        .iter()
        .map(|&s| match s {
            ErasureSymbol::Plus => sample_difference_half_line(amp, eps, rng),
            ErasureSymbol::Minus => -sample_difference_half_line(amp, eps, rng),
            ErasureSymbol::Erased => {
                // φ(z + a) on z >= 0 and φ(z - a) on z < 0 carry mass 1/2 each.
                let magnitude = tail.sample(rng) - amp;
                if rng.random::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
        })
        .collect();
    Ok((z_prime, z))
}

/// Draws `t >= 0` with density `[φ(t - a) - φ(t + a)] / (1 - ε)` by inverting
/// its CDF `[Q(-a) - Q(t - a) - Q(a) + Q(t + a)] / (1 - ε)` with bisection.
fn sample_difference_half_line<R: Rng + ?Sized>(amp: f64, eps: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let norm = 1.0 - eps;
    let (qa, qma) = (q_function(amp), q_function(-amp));
    let cdf = |t: f64| (qma - q_function(t - amp) - qa + q_function(t + amp)) / norm;
    let (mut lo, mut hi) = (0.0, amp + 40.0);
    while hi - lo > INVERSION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Standard normal conditioned on exceeding `a >= 0`, by exponential
/// rejection with the optimal rate `(a + sqrt(a² + 4)) / 2`.
struct TailSampler {
    bound: f64,
    rate: f64,
    exp: Exp<f64>,
}

impl TailSampler {
    fn new(bound: f64) -> Self {
        let rate = 0.5 * (bound + (bound * bound + 4.0).sqrt());
        TailSampler {
            bound,
            rate,
            exp: Exp::new(rate).expect("positive rate"),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let y = self.bound + self.exp.sample(rng);
            let d = y - self.rate;
            if rng.random::<f64>() <= (-0.5 * d * d).exp() {
                return y;
            }
        }
    }
}

/// Embedded-BEC simulation of BSC(q): `z' = BEC(2q)`, erasures replaced by a fair coin.
pub fn bsc_degraded_transmit<R: Rng + ?Sized>(
    bits: &[u8],
    crossover: f64,
    rng: &mut R,
) -> Result<(Vec<ErasureSymbol>, Vec<u8>)> {
    if !(0.0..=0.5).contains(&crossover) {
        return Err(Error::invalid(format!(
            "degraded BSC simulation needs q in [0, 1/2], got {crossover}"
        )));
    }
    let z_prime = bec_transmit(&modulate(bits), 2.0 * crossover, rng)?;
    let z = z_prime
        .iter()
        .map(|s| s.bit().unwrap_or_else(|| rng.random::<bool>() as u8))
        .collect();
    Ok((z_prime, z))
}

//! Collective pure-dephasing dynamics.
//!
//! Both qubits see the same white-noise phase ξ(t) with <ξ(t)ξ(t')> =
//! Γ δ(t-t'), so a realization applies U = diag(e^{iΦ}, 1, 1, e^{-iΦ}) with
//! the accumulated phase Φ = ∫ξ dt' ~ N(0, Γt). Averaging over realizations
//! multiplies the single-flip coherences by γ(t) = e^{-tΓ/2}, the
//! anti-diagonal coherences by γ^4, and leaves populations and the
//! |01>,|10> block untouched (the decoherence-free subspace).
//!
//! `apply_dephasing` is the exact averaged map; `monte_carlo_evolve` samples
//! the phases directly and is kept as an independent cross-check — the γ/γ^4
//! pattern has to emerge from the average, it is never written in.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{DensityMatrix, XStateParams};

/// Phase winding of the basis states |00>, |01>, |10>, |11> under the
/// collective σz coupling; entry (m, n) of ρ picks up e^{iΦ(w_m - w_n)}.
const PHASE_WINDING: [i32; 4] = [1, 0, 0, -1];

/// Samples are drawn in fixed-size blocks, one deterministic RNG substream
/// per block, so any sharding of blocks across workers reproduces the
/// sequential result bit for bit.
const SAMPLE_BLOCK: usize = 8192;

/// Damping rate Γ > 0. With the default Γ = 1 all times are the
/// dimensionless Γt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    damping_rate: f64,
}

impl ChannelParams {
    pub fn new(damping_rate: f64) -> Result<Self> {
        if damping_rate <= 0.0 || !damping_rate.is_finite() {
            return Err(Error::InvalidParams(format!(
                "damping rate Γ must be > 0, got {damping_rate}"
            )));
        }
        Ok(Self { damping_rate })
    }

    pub fn damping_rate(&self) -> f64 {
        self.damping_rate
    }
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self { damping_rate: 1.0 }
    }
}

/// γ(t) = e^{-tΓ/2}; strictly decreasing, γ(0) = 1, vanishes as t → ∞.
pub fn decay_factor(t: f64, params: &ChannelParams) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime { t });
    }
    Ok((-0.5 * params.damping_rate * t).exp())
}

/// Elementwise damping pattern of the averaged map: γ^{(w_m - w_n)^2}.
fn damping(g: f64, m: usize, n: usize) -> f64 {
    let d = PHASE_WINDING[m] - PHASE_WINDING[n];
    match d * d {
        0 => 1.0,
        1 => g,
        4 => g.powi(4),
        _ => unreachable!(),
    }
}

/// Exact evolved state: single-flip coherences scaled by γ, anti-diagonal
/// ones by γ^4, populations and the middle 2x2 block untouched.
pub fn apply_dephasing(
    rho0: &DensityMatrix,
    t: f64,
    params: &ChannelParams,
) -> Result<DensityMatrix> {
    let g = decay_factor(t, params)?;
    let evolved = ComplexMatrix::from_fn(4, |m, n| rho0.entry(m, n) * damping(g, m, n));
    DensityMatrix::new(evolved)
}

/// Parameter flow of the family under the channel: r(t) = r, s(t) = s γ^4.
pub fn evolve_params(params: XStateParams, t: f64, ch: &ChannelParams) -> Result<XStateParams> {
    let g = decay_factor(t, ch)?;
    // |s| γ^4 <= |s| <= r, so the flow never leaves the triangle
    Ok(XStateParams::new_unchecked(
        params.r(),
        params.s() * g.powi(4),
    ))
}

/// How the accumulated phase Φ of a realization is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSampling {
    /// Draw Φ ~ N(0, Γt) in one shot (exact, default).
    Direct,
    /// Euler path: sum of `steps` i.i.d. increments of variance Γ t/steps.
    /// Distributionally identical; kept as a secondary cross-check.
    PathDiscretized { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSampleConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub sampling: PhaseSampling,
}

impl NoiseSampleConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            sampling: PhaseSampling::Direct,
        }
    }
}

/// Mean and scatter of the sampled phase factors e^{iΦ} and e^{2iΦ}.
struct PhaseFactorStats {
    mean: [Complex64; 2],
    /// 1σ standard error of each mean, as sqrt(Var(re) + Var(im))/sqrt(n).
    std_err: [f64; 2],
}

fn sample_phase_factors(
    t: f64,
    ch: &ChannelParams,
    cfg: &NoiseSampleConfig,
) -> Result<PhaseFactorStats> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime { t });
    }
    if cfg.n_samples == 0 {
        return Err(Error::InvalidParams("n_samples must be >= 1".to_string()));
    }
    let steps = match cfg.sampling {
        PhaseSampling::Direct => 1,
        PhaseSampling::PathDiscretized { steps } => {
            if steps == 0 {
                return Err(Error::InvalidParams(
                    "path discretization needs >= 1 step".to_string(),
                ));
            }
            steps
        }
    };
    let increment_std = (ch.damping_rate * t / steps as f64).sqrt();

    let n = cfg.n_samples;
    // per component: [sum, sum of squares] x [re1, im1, re2, im2]
    let mut totals = [0.0f64; 8];
    let n_blocks = n.div_ceil(SAMPLE_BLOCK);
    for block in 0..n_blocks {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(block as u64);
        let in_block = SAMPLE_BLOCK.min(n - block * SAMPLE_BLOCK);
        let mut partial = [0.0f64; 8];
        for _ in 0..in_block {
            let mut phi = 0.0;
            for _ in 0..steps {
                let z: f64 = rng.sample(StandardNormal);
                phi += increment_std * z;
            }
            let (s1, c1) = phi.sin_cos();
            let c2 = c1 * c1 - s1 * s1;
            let s2 = 2.0 * c1 * s1;
            for (k, x) in [c1, s1, c2, s2].into_iter().enumerate() {
                partial[2 * k] += x;
                partial[2 * k + 1] += x * x;
            }
        }
        for (tot, p) in totals.iter_mut().zip(partial) {
            *tot += p;
        }
    }

    let nf = n as f64;
    let mean_of = |k: usize| totals[2 * k] / nf;
    let var_of = |k: usize| {
        if n < 2 {
            return 0.0;
        }
        let m = mean_of(k);
        ((totals[2 * k + 1] - nf * m * m) / (nf - 1.0)).max(0.0)
    };
    Ok(PhaseFactorStats {
        mean: [
            Complex64::new(mean_of(0), mean_of(1)),
            Complex64::new(mean_of(2), mean_of(3)),
        ],
        std_err: [
            ((var_of(0) + var_of(1)) / nf).sqrt(),
            ((var_of(2) + var_of(3)) / nf).sqrt(),
        ],
    })
}

/// Average U ρ0 U† over sampled noise realizations.
///
/// Each realization's unitary is diagonal, so the average acts entrywise
/// through the sampled means of e^{iΦ} and e^{2iΦ}; the winding-0 entries
/// (populations and the decoherence-free block) are untouched in every
/// realization. Returns the sample mean renormalized to unit trace together
/// with the largest elementwise 3-standard-error estimate. Deterministic
/// for a given seed.
pub fn monte_carlo_evolve(
    rho0: &DensityMatrix,
    t: f64,
    ch: &ChannelParams,
    cfg: &NoiseSampleConfig,
) -> Result<(DensityMatrix, f64)> {
    let stats = sample_phase_factors(t, ch, cfg)?;

    let factor = |m: usize, n: usize| -> Complex64 {
        match PHASE_WINDING[m] - PHASE_WINDING[n] {
            0 => Complex64::new(1.0, 0.0),
            1 => stats.mean[0],
            -1 => stats.mean[0].conj(),
            2 => stats.mean[1],
            -2 => stats.mean[1].conj(),
            _ => unreachable!(),
        }
    };
    let mean = ComplexMatrix::from_fn(4, |m, n| rho0.entry(m, n) * factor(m, n));

    // trace is preserved per realization; this only cleans float accumulation
    let trace = mean.trace().re;
    let renormalized = ComplexMatrix::from_fn(4, |m, n| mean[(m, n)] / trace);

    let mut max_err: f64 = 0.0;
    for (m, wm) in PHASE_WINDING.iter().enumerate() {
        for (n, wn) in PHASE_WINDING.iter().enumerate() {
            let se = match (wm - wn).abs() {
                0 => 0.0,
                1 => stats.std_err[0],
                2 => stats.std_err[1],
                _ => unreachable!(),
            };
            max_err = max_err.max(3.0 * se * rho0.entry(m, n).norm());
        }
    }

    Ok((DensityMatrix::new(renormalized)?, max_err))
}

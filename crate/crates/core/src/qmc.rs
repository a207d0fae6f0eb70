//! Randomized quasi-Monte Carlo.
//!
//! Sobol points in up to eight dimensions, each replicate randomized by an
//! independent digital (XOR) shift. The replicate means give an unbiased
//! estimate and an empirical standard error.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;
const BITS: usize = 32;

/// Primitive polynomial data (degree s, coefficients a, initial m) for
/// dimensions 2..=8, from the new-joe-kuo-6.21201 table of Joe and Kuo.
/// Dimension 1 is the van der Corput sequence.
const JOE_KUO: [(usize, u32, [u32; 5]); MAX_DIM - 1] = [
    (1, 0, [1, 0, 0, 0, 0]),
    (2, 1, [1, 3, 0, 0, 0]),
    (3, 1, [1, 3, 1, 0, 0]),
    (3, 2, [1, 1, 1, 0, 0]),
    (4, 1, [1, 1, 3, 3, 0]),
    (4, 4, [1, 3, 5, 13, 0]),
    (5, 2, [1, 1, 5, 5, 17]),
];

/// Accuracy settings shared by all integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmcConfig {
    /// Nodes per replicate, a power of two, at least 16.
    pub points: usize,
    /// Independently shifted replicates, at least 2.
    pub replicates: usize,
    pub seed: u64,
}

impl Default for QmcConfig {
    fn default() -> Self {
        QmcConfig { points: 1 << 14, replicates: 8, seed: 0x5eed_2024 }
    }
}

impl QmcConfig {
    pub fn new(points: usize, replicates: usize, seed: u64) -> Result<Self> {
        let cfg = QmcConfig { points, replicates, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 16 || !self.points.is_power_of_two() || self.points > 1 << BITS {
            return domain(format!("points must be a power of two in [16, 2^32], got {}", self.points));
        }
        if self.replicates < 2 {
            return domain(format!("need at least 2 replicates, got {}", self.replicates));
        }
        Ok(())
    }
}

/// Result of a randomized QMC integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QmcEstimate {
    pub value: f64,
    /// Standard deviation of the replicate means over √replicates.
    pub std_error: f64,
    /// Total integrand evaluations.
    pub points_used: usize,
    /// Per-replicate means, in replicate order.
    #[serde(skip)]
    pub replicate_means: Vec<f64>,
}

impl QmcEstimate {
    /// An exact value with zero error.
    pub fn exact(value: f64) -> Self {
        QmcEstimate { value, std_error: 0.0, points_used: 0, replicate_means: Vec::new() }
    }

    /// Builds the estimate from replicate means.
    pub fn from_replicates(means: Vec<f64>, points_used: usize) -> Self {
        let r = means.len() as f64;
        let value = means.iter().sum::<f64>() / r;
        let var = means.iter().map(|m| (m - value) * (m - value)).sum::<f64>() / (r - 1.0);
        QmcEstimate { value, std_error: (var / r).sqrt(), points_used, replicate_means: means }
    }

    /// Applies an affine map a + b·x to the estimate.
    pub fn affine(&self, a: f64, b: f64) -> Self {
        QmcEstimate {
            value: a + b * self.value,
            std_error: b.abs() * self.std_error,
            points_used: self.points_used,
            replicate_means: self.replicate_means.iter().map(|m| a + b * m).collect(),
        }
    }
}

/// Direction numbers v[j][k] for bit k (0 = most significant).
fn direction_numbers(dim: usize) -> [[u32; BITS]; MAX_DIM] {
    let mut v = [[0u32; BITS]; MAX_DIM];
    for (k, slot) in v[0].iter_mut().enumerate() {
        *slot = 1 << (BITS - 1 - k);
    }
    for j in 1..dim {
        let (s, a, m) = JOE_KUO[j - 1];
        for k in 0..s.min(BITS) {
            v[j][k] = m[k] << (BITS - 1 - k);
        }
        for k in s..BITS {
            let mut x = v[j][k - s] ^ (v[j][k - s] >> s);
            for l in 1..s {
                if (a >> (s - 1 - l)) & 1 == 1 {
                    x ^= v[j][k - l];
                }
            }
            v[j][k] = x;
        }
    }
    v
}

/// Gray-code Sobol generator producing the raw 32-bit integer coordinates.
#[derive(Debug, Clone)]
pub struct SobolSequence {
    dim: usize,
    v: [[u32; BITS]; MAX_DIM],
    state: [u32; MAX_DIM],
    index: u64,
}

impl SobolSequence {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return domain(format!("Sobol dimension must be in 1..={MAX_DIM}, got {dim}"));
        }
        Ok(SobolSequence { dim, v: direction_numbers(dim), state: [0; MAX_DIM], index: 0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the point the next call to `next_raw` returns.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Returns the current point and advances. The first call yields the
    /// origin (index 0).
    pub fn next_raw(&mut self) -> [u32; MAX_DIM] {
        let out = self.state;
        let c = self.index.trailing_ones() as usize;
        if c < BITS {
            for j in 0..self.dim {
                self.state[j] ^= self.v[j][c];
            }
        }
        self.index += 1;
        out
    }
}

/// splitmix64 finalizer, used as a counter-based hash.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Digital shift for one replicate: a 32-bit word per coordinate.
fn digital_shift(seed: u64, replicate: u64) -> [u32; MAX_DIM] {
    let base = mix64(seed ^ mix64(replicate));
    let mut out = [0u32; MAX_DIM];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = (mix64(base.wrapping_add(j as u64)) >> 32) as u32;
    }
    out
}

const SCALE: f64 = 1.0 / 4_294_967_296.0;

#[inline]
fn to_unit(x: u32) -> f64 {
    // midpoint of the dyadic cell, so never 0 or 1 and 1 − u is exact
    (x as f64 + 0.5) * SCALE
}

/// The first `n` points (indices 0..n) of the Sobol sequence in `dim`
/// dimensions under the digital shift derived from `shift_seed`.
pub fn sobol_points(dim: usize, n: usize, shift_seed: u64) -> Result<Vec<Vec<f64>>> {
    if !n.is_power_of_two() {
        return domain(format!("number of points must be a power of two, got {n}"));
    }
    let mut seq = SobolSequence::new(dim)?;
    let shift = digital_shift(shift_seed, 0);
    Ok((0..n)
        .map(|_| {
            let raw = seq.next_raw();
            (0..dim).map(|j| to_unit(raw[j] ^ shift[j])).collect()
        })
        .collect())
}

/// Integrates `f` over the unit cube of dimension `dim`.
///
/// Replicates are evaluated in order; for a given configuration the nodes,
/// and therefore the result, are fully deterministic. A non-finite integrand
/// value aborts with [`Error::Integration`].
pub fn integrate<F>(dim: usize, cfg: &QmcConfig, mut f: F) -> Result<QmcEstimate>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let base = SobolSequence::new(dim)?;
    let mut means = Vec::with_capacity(cfg.replicates);
    let mut u = [0.0f64; MAX_DIM];
    for r in 0..cfg.replicates {
        let shift = digital_shift(cfg.seed, r as u64);
        let mut seq = base.clone();
        let mut sum = 0.0;
        for _ in 0..cfg.points {
            let raw = seq.next_raw();
            for j in 0..dim {
                u[j] = to_unit(raw[j] ^ shift[j]);
            }
            let y = f(&u[..dim]);
            if !y.is_finite() {
                return Err(Error::Integration { point: u[..dim].to_vec(), value: y });
            }
            sum += y;
        }
        means.push(sum / cfg.points as f64);
    }
    Ok(QmcEstimate::from_replicates(means, cfg.points * cfg.replicates))
}

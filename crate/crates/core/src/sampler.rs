//! Monte Carlo draws from MN and MSN distributions and the empirical rank
//! statistics used as an independent check on the integrals.

use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::mixing::MixingSpec;
use crate::rankcorr::{delta_from_alpha, validate_args, CopulaSpec, Family, Measure};

/// Seeded ChaCha8 stream; each batch index selects an independent stream.
#[derive(Debug, Clone)]
pub struct RngState {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self::for_batch(seed, 0)
    }

    /// Stream `batch` of the generator seeded with `seed`.
    pub fn for_batch(seed: u64, batch: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        RngState { rng, spare: None }
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by Box–Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * self.uniform()).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// A bivariate sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vec<[f64; 2]>,
}

impl Sample {
    pub fn new(x: Vec<[f64; 2]>) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::Input(format!("need at least 2 observations, got {}", x.len())));
        }
        if let Some(i) = x.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::Input(format!("observation {} is not finite: {:?}", i + 1, x[i])));
        }
        Ok(Sample { x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Reads a two-column comma-separated file. A non-numeric first line is
    /// taken as a header.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut x = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Input(format!("line {}: {e}", i + 1)))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            if rec.len() != 2 {
                return Err(Error::Input(format!("line {}: expected 2 columns, found {}", i + 1, rec.len())));
            }
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) => x.push([v[0], v[1]]),
                Err(_) if i == 0 => continue,
                Err(_) => return Err(Error::Input(format!("line {}: non-numeric value", i + 1))),
            }
        }
        Sample::new(x)
    }
}

fn sampler_args(rho: f64, skew: [f64; 2], mixing: &MixingSpec, n: usize) -> Result<()> {
    validate_args(rho, skew, mixing)?;
    if rho.abs() == 1.0 {
        return domain("sampling needs |rho| < 1");
    }
    if n < 2 {
        return domain(format!("sample size must be at least 2, got {n}"));
    }
    Ok(())
}

/// n draws of Wβ + √W Z with Z ~ N(0, [[1, ρ], [ρ, 1]]).
pub fn sample_mn(rho: f64, beta: [f64; 2], mixing: &MixingSpec, n: usize, rng: &mut RngState) -> Result<Sample> {
    sampler_args(rho, beta, mixing, n)?;
    let s = ((1.0 - rho) * (1.0 + rho)).sqrt();
    let x = (0..n)
        .map(|_| {
            let w = mixing.quantile_unchecked(rng.uniform());
            let z1 = rng.normal();
            let z2 = rho * z1 + s * rng.normal();
            let r = w.sqrt();
            [w * beta[0] + r * z1, w * beta[1] + r * z2]
        })
        .collect();
    Sample::new(x)
}

/// n draws of √W Z with Z bivariate skew-normal, generated by selection:
/// (Z₀, Z̃) ~ N(0, [[1, δᵀ], [δ, ϱ]]) and Z = Z̃ if Z₀ > 0, else −Z̃.
pub fn sample_msn(rho: f64, alpha: [f64; 2], mixing: &MixingSpec, n: usize, rng: &mut RngState) -> Result<Sample> {
    sampler_args(rho, alpha, mixing, n)?;
    let [d1, d2] = delta_from_alpha(rho, alpha)?;
    // Cholesky of [[1, d1, d2], [d1, 1, rho], [d2, rho, 1]]
    let l11 = ((1.0 - d1) * (1.0 + d1)).sqrt();
    let l21 = (rho - d1 * d2) / l11;
    let l22sq = (1.0 - d2 * d2) - l21 * l21;
    if !(l22sq > 0.0) {
        return domain(format!("skew-normal covariance is singular for rho={rho}, alpha={alpha:?}"));
    }
    let l22 = l22sq.sqrt();
    let x = (0..n)
        .map(|_| {
            let w = mixing.quantile_unchecked(rng.uniform());
            let (e0, e1, e2) = (rng.normal(), rng.normal(), rng.normal());
            let z1 = d1 * e0 + l11 * e1;
            let z2 = d2 * e0 + l21 * e1 + l22 * e2;
            let sign = if e0 > 0.0 { 1.0 } else { -1.0 };
            let r = sign * w.sqrt();
            [r * z1, r * z2]
        })
        .collect();
    Sample::new(x)
}

/// Ranks 0..n−1 of one coordinate, failing on exact ties.
fn ranks(s: &Sample, coord: usize) -> Result<Vec<usize>> {
    let mut idx: Vec<usize> = (0..s.n()).collect();
    idx.sort_by(|&a, &b| s.x[a][coord].total_cmp(&s.x[b][coord]));
    if idx.windows(2).any(|w| s.x[w[0]][coord] == s.x[w[1]][coord]) {
        return Err(Error::Ties { coordinate: coord + 1 });
    }
    let mut r = vec![0; s.n()];
    for (pos, &i) in idx.iter().enumerate() {
        r[i] = pos;
    }
    Ok(r)
}

/// Counts inversions by merge sort.
fn inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = inversions(&mut v[..mid], &mut buf[..mid]) + inversions(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf[k] = v[i];
            i += 1;
        } else {
            buf[k] = v[j];
            j += 1;
            count += (mid - i) as u64;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    count
}

/// Sample Kendall's tau, (concordant − discordant) / C(n, 2), in
/// O(n log n).
pub fn empirical_kendall(s: &Sample) -> Result<f64> {
    let rx = ranks(s, 0)?;
    let ry = ranks(s, 1)?;
    let n = s.n();
    let mut by_x = vec![0; n];
    for i in 0..n {
        by_x[rx[i]] = ry[i];
    }
    let mut buf = vec![0; n];
    let discordant = inversions(&mut by_x, &mut buf);
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok((pairs as f64 - 2.0 * discordant as f64) / pairs as f64)
}

/// Quadratic reference for [`empirical_kendall`].
pub fn empirical_kendall_naive(s: &Sample) -> Result<f64> {
    ranks(s, 0)?;
    ranks(s, 1)?;
    let n = s.n();
    let mut sum = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let a = (s.x[i][0] - s.x[j][0]) * (s.x[i][1] - s.x[j][1]);
            sum += if a > 0.0 { 1 } else { -1 };
        }
    }
    Ok(sum as f64 / (n * (n - 1) / 2) as f64)
}

/// Sample Spearman's rho, the Pearson correlation of the ranks.
pub fn empirical_spearman(s: &Sample) -> Result<f64> {
    let rx = ranks(s, 0)?;
    let ry = ranks(s, 1)?;
    let n = s.n() as u128;
    let d2: u128 = rx.iter().zip(&ry).map(|(&a, &b)| (a.abs_diff(b) as u128).pow(2)).sum();
    // 1 − 6 Σd² / (n(n² − 1)) as one rational
    let den = n * (n * n - 1);
    Ok((den as f64 - 6.0 * d2 as f64) / den as f64)
}

/// Draws a sample from the copula's generating distribution.
pub fn sample_copula(spec: &CopulaSpec, n: usize, rng: &mut RngState) -> Result<Sample> {
    match spec.family {
        Family::Mn => sample_mn(spec.rho, spec.skew, &spec.mixing, n, rng),
        Family::Msn => sample_msn(spec.rho, spec.skew, &spec.mixing, n, rng),
    }
}

/// Batch-mean Monte Carlo estimate of a rank correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    /// Standard deviation of batch values over √batches.
    pub se: f64,
}

/// Monte Carlo estimates of both rank correlations from `batches`
/// independent samples of size `n`, batch b using stream b of `seed`.
///
/// Each batch's Spearman statistic r_S is corrected for its O(1/n) bias
/// E r_S = ((n − 2)ρ_S + 3τ)/(n + 1) using that batch's Kendall statistic.
pub fn oracle_check_both(spec: &CopulaSpec, n: usize, batches: usize, seed: u64) -> Result<[OracleEstimate; 2]> {
    if n < 1000 || batches < 10 {
        return domain(format!("oracle needs n >= 1000 and batches >= 10, got n={n}, batches={batches}"));
    }
    let mut taus = Vec::with_capacity(batches);
    let mut rhos = Vec::with_capacity(batches);
    for b in 0..batches {
        let mut rng = RngState::for_batch(seed, b as u64);
        let s = sample_copula(spec, n, &mut rng)?;
        let t = empirical_kendall(&s)?;
        let r = empirical_spearman(&s)?;
        let nf = n as f64;
        taus.push(t);
        rhos.push(((nf + 1.0) * r - 3.0 * t) / (nf - 2.0));
    }
    let summarize = |v: &[f64]| {
        let k = v.len() as f64;
        let mean = v.iter().sum::<f64>() / k;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        OracleEstimate { value: mean, se: (var / k).sqrt() }
    };
    Ok([summarize(&taus), summarize(&rhos)])
}

/// Monte Carlo estimate of one rank correlation; see [`oracle_check_both`].
pub fn oracle_check(spec: &CopulaSpec, measure: Measure, n: usize, batches: usize, seed: u64) -> Result<OracleEstimate> {
    let [t, r] = oracle_check_both(spec, n, batches, seed)?;
    Ok(match measure {
        Measure::KendallTau => t,
        Measure::SpearmanRho => r,
    })
}

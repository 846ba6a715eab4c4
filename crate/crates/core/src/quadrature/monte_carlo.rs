//! Seeded Monte Carlo estimates.
//!
//! Draws are split into fixed blocks of [`BLOCK`] samples; block `b` uses its
//! own ChaCha stream `b` under the common seed, and block results are merged
//! in block order. Estimates therefore do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::simplicial::triangulate;
use crate::linalg::{self, Vector};
use crate::quadrature::density::WeightDensity;
use crate::quadrature::QuadratureResult;

/// Samples per independent random stream.
pub const BLOCK: usize = 1 << 16;

pub(crate) fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

pub(crate) fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Running mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Accumulator) -> Accumulator {
        let count = self.count + other.count;
        if count == 0.0 {
            return Accumulator::default();
        }
        let d = other.mean - self.mean;
        Accumulator {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Squared standard error; infinite with fewer than two samples.
    pub fn variance_of_mean(&self) -> f64 {
        if self.count < 2.0 {
            return f64::INFINITY;
        }
        self.m2 / (self.count - 1.0) / self.count
    }
}

/// One pyramid `conv(o, S)` over a simplex `S` of a facet triangulation.
struct Pyramid {
    base: Vec<Vector>,
    volume: f64,
}

fn pyramids(facets: &[Vec<Vector>], dim: usize) -> Vec<Pyramid> {
    let mut out = Vec::new();
    for facet in facets {
        for base in triangulate(facet, dim - 1) {
            let mut apex = base.clone();
            apex.push(Vector::zeros(dim));
            let volume = linalg::simplex_volume(&apex);
            if volume > 0.0 {
                out.push(Pyramid { base, volume });
            }
        }
    }
    out
}

/// Monte Carlo estimate of `∫ Θ` over the union of the cones `⋃_{x∈F} [o, x]`
/// for the given bounded facets `F`.
///
/// A pyramid is chosen with probability proportional to its volume, a base
/// point `x` uniformly on it, and a scale `t ∈ (0, 1]` with density
/// `(a + 1) t^a` with `a = 1.25 (n - q) - 1`, which keeps the sample weights
/// square-integrable.
pub fn mc_cone_region(
    density: &WeightDensity,
    facets: &[Vec<Vector>],
    samples: usize,
    seed: u64,
) -> Result<QuadratureResult> {
    let n = density.dim();
    let pyramids = pyramids(facets, n);
    if pyramids.is_empty() || samples == 0 {
        return Err(Error::EmptyRegion);
    }
    let total: f64 = pyramids.iter().map(|p| p.volume).sum();
    let mut cumulative = Vec::with_capacity(pyramids.len());
    let mut acc = 0.0;
    for p in &pyramids {
        acc += p.volume / total;
        cumulative.push(acc);
    }
    let a = 1.25 * density.degree() - 1.0;
    let scale = n as f64 * total / (a + 1.0);

    let blocks = samples.div_ceil(BLOCK);
    let accs: Vec<Accumulator> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut acc = Accumulator::default();
            let mut weights = vec![0.0; n];
            let mut x = Vector::zeros(n);
            for _ in 0..count {
                let u: f64 = rng.random();
                let k = cumulative.partition_point(|&c| c < u).min(pyramids.len() - 1);
                let base = &pyramids[k].base;
                let mut sum = 0.0;
                for w in weights.iter_mut() {
                    *w = rng.sample::<f64, _>(Exp1);
                    sum += *w;
                }
                x.fill(0.0);
                for (w, v) in weights.iter().zip(base) {
                    x.axpy(w / sum, v, 1.0);
                }
                let t = (1.0 - rng.random::<f64>()).powf(1.0 / (a + 1.0));
                let y = &x * t;
                acc.push(scale * density.eval(&y) * t.powf(n as f64 - 1.0 - a));
            }
            acc
        })
        .collect();
    let acc = accs.into_iter().fold(Accumulator::default(), |a, b| a.merge(&b));
    Ok(QuadratureResult { value: acc.mean(), error_estimate: acc.variance_of_mean().sqrt(), evaluations: samples })
}

//! Monte-Carlo agreement between networks and reference algorithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{MlpNetwork, Workspace};

const CHUNK: usize = 1 << 14;

/// Outcome of an agreement run.
#[derive(Clone, Debug, PartialEq)]
pub struct Agreement {
    pub matches: usize,
    pub total: usize,
    /// Lowest-index disagreeing input with (predicted, expected).
    pub first_mismatch: Option<(Vec<f64>, usize, usize)>,
}

impl Agreement {
    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        self.matches as f64 / self.total as f64
    }

    pub fn is_exact(&self) -> bool {
        self.matches == self.total
    }

    pub fn merge(mut self, o: Agreement) -> Agreement {
        self.matches += o.matches;
        self.total += o.total;
        if self.first_mismatch.is_none() {
            self.first_mismatch = o.first_mismatch;
        }
        self
    }
}

/// Deterministic per-chunk generator: the result does not depend on the
/// thread count.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Compare `predict` against `oracle` on `n` inputs of length `width`
/// drawn by `sampler`.
pub fn agreement_with<S, P, O>(n: usize, width: usize, seed: u64, sampler: S, predict: P, oracle: O) -> Agreement
where
    S: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
    P: Fn(&[f64], &mut Workspace) -> usize + Sync,
    O: Fn(&[f64]) -> usize + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let mut ws = Workspace::default();
            let mut x = vec![0.0; width];
            let count = CHUNK.min(n - c * CHUNK);
            let mut out = Agreement {
                matches: 0,
                total: count,
                first_mismatch: None,
            };
            for _ in 0..count {
                sampler(&mut rng, &mut x);
                let (got, want) = (predict(&x, &mut ws), oracle(&x));
                if got == want {
                    out.matches += 1;
                } else if out.first_mismatch.is_none() {
                    out.first_mismatch = Some((x.clone(), got, want));
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            Agreement {
                matches: 0,
                total: 0,
                first_mismatch: None,
            },
            Agreement::merge,
        )
}

/// Largest `|deviation(x)|` over `n` sampled inputs, with the input attaining it.
pub fn max_deviation<S, D>(n: usize, width: usize, seed: u64, sampler: S, deviation: D) -> (f64, Vec<f64>)
where
    S: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
    D: Fn(&[f64], &mut Workspace) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let mut ws = Workspace::default();
            let mut x = vec![0.0; width];
            let mut best = (0.0f64, vec![0.0; width]);
            for _ in 0..CHUNK.min(n - c * CHUNK) {
                sampler(&mut rng, &mut x);
                let d = deviation(&x, &mut ws).abs();
                // NaN counts as the worst case
                if d > best.0 || d.is_nan() && !best.0.is_nan() {
                    best = (d, x.clone());
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, vec![0.0; width]), |a, b| if b.0 > a.0 || b.0.is_nan() && !a.0.is_nan() { b } else { a })
}

/// Fraction of sampled inputs where the network class equals the oracle.
pub fn agreement_rate<S, O>(net: &MlpNetwork, oracle: O, sampler: S, n: usize, seed: u64) -> Agreement
where
    S: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
    O: Fn(&[f64]) -> usize + Sync,
{
    agreement_with(
        n,
        net.input_width(),
        seed,
        sampler,
        |x, ws| net.classify_with(x, ws),
        oracle,
    )
}

/// Agreement over a fixed list of inputs.
pub fn agreement_on<P, O>(inputs: &[Vec<f64>], predict: P, oracle: O) -> Agreement
where
    P: Fn(&[f64], &mut Workspace) -> usize,
    O: Fn(&[f64]) -> usize,
{
    let mut ws = Workspace::default();
    let mut out = Agreement {
        matches: 0,
        total: inputs.len(),
        first_mismatch: None,
    };
    for x in inputs {
        let (got, want) = (predict(x, &mut ws), oracle(x));
        if got == want {
            out.matches += 1;
        } else if out.first_mismatch.is_none() {
            out.first_mismatch = Some((x.clone(), got, want));
        }
    }
    out
}

pub mod samplers {
    use super::*;

    /// Independent uniform components in `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64) -> impl Fn(&mut ChaCha8Rng, &mut [f64]) + Sync {
        move |rng, x| x.iter_mut().for_each(|v| *v = rng.gen_range(lo..=hi))
    }

    /// Uniform in `[-1, 1]`, then rescaled to fill the box.
    pub fn uniform_scaled() -> impl Fn(&mut ChaCha8Rng, &mut [f64]) + Sync {
        move |rng, x| {
            x.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..=1.0));
            let raw = x.to_vec();
            crate::eno_core::scale_input_into(&raw, x);
        }
    }

    /// Small integers, which produce many exact ties between differences.
    pub fn small_integers(k: i32) -> impl Fn(&mut ChaCha8Rng, &mut [f64]) + Sync {
        move |rng, x| x.iter_mut().for_each(|v| *v = rng.gen_range(-k..=k) as f64)
    }

    /// Windows of `a (x - z)_- + b (x - z)_+` at `x = 0..len`; a quarter of
    /// the kinks fall in the central interval `[4, 5]`.
    pub fn piecewise_linear() -> impl Fn(&mut ChaCha8Rng, &mut [f64]) + Sync {
        move |rng, x| {
            let a: f64 = rng.gen_range(-1.0..=1.0);
            let b: f64 = rng.gen_range(-1.0..=1.0);
            let z: f64 = if rng.gen_bool(0.25) {
                rng.gen_range(4.0..=5.0)
            } else {
                rng.gen_range(-9.0..=9.0)
            };
            for (j, v) in x.iter_mut().enumerate() {
                let d = j as f64 - z;
                *v = a * d.min(0.0) + b * d.max(0.0);
            }
        }
    }

    /// Deterministic tie inputs: zeros, constants, symmetric ramps and
    /// exhaustive `{-1, 0, 1}` patterns when small enough.
    pub fn tie_suite(width: usize) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; width]];
        for c in [-1.0, 0.5, 1.0, 3.0] {
            out.push(vec![c; width]);
        }
        let mid = (width as f64 - 1.0) / 2.0;
        for s in [1.0, -1.0, 0.25] {
            out.push((0..width).map(|j| s * (j as f64 - mid).abs()).collect());
            out.push((0..width).map(|j| s * (j as f64 - mid)).collect());
            out.push((0..width).map(|j| s * (j as f64 - mid).powi(2)).collect());
            out.push((0..width).map(|j| s * (j as f64 - mid).powi(3)).collect());
        }
        for k in 0..width {
            let mut e = vec![0.0; width];
            e[k] = 1.0;
            out.push(e.clone());
            out.push((0..width).map(|j| if j >= k { 1.0 } else { 0.0 }).collect());
        }
        if width <= 10 {
            let total = 3usize.pow(width as u32);
            for code in 0..total {
                out.push((0..width).map(|k| (code / 3usize.pow(k as u32) % 3) as f64 - 1.0).collect());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eno_core::eno_interp_shift;
    use crate::relunet::build_eno3_explicit;

    #[test]
    fn exact_net_agrees_and_is_thread_independent() {
        let net = build_eno3_explicit();
        let oracle = |x: &[f64]| eno_interp_shift(x, 3).unwrap().r();
        let a = agreement_rate(&net, oracle, samplers::uniform(-1.0, 1.0), 40_000, 7);
        assert!(a.is_exact());
        assert_eq!(a.rate(), 1.0);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| agreement_rate(&net, oracle, samplers::uniform(-1.0, 1.0), 40_000, 7));
        assert_eq!(a, b);
    }

    #[test]
    fn constant_predictor_gives_base_rate() {
        let oracle = |x: &[f64]| eno_interp_shift(x, 3).unwrap().r();
        let a = agreement_with(20_000, 4, 1, samplers::uniform(-1.0, 1.0), |_, _| 0, oracle);
        assert!(a.rate() > 0.3 && a.rate() < 0.7, "{}", a.rate());
        assert!(a.first_mismatch.is_some());
    }
}

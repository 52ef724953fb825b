//! Small dense layers with fixed-seed parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic parameter source. Each `(seed, stream)` pair yields an
/// independent sequence so adding a layer never perturbs another's weights.
pub fn param_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    /// Row-major `out x in`.
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl Dense {
    /// Weights uniform in `[-1, 1] / sqrt(in)`, biases uniform in `[-1, 1]`.
    pub fn random(input: usize, output: usize, rng: &mut impl Rng) -> Self {
        let scale = 1.0 / (input.max(1) as f64).sqrt();
        let w = (0..output)
            .map(|_| (0..input).map(|_| rng.random_range(-1.0..=1.0) * scale).collect())
            .collect();
        let b = (0..output).map(|_| rng.random_range(-1.0..=1.0)).collect();
        Dense { w, b }
    }

    /// Bias-free variant, used for attention projections.
    pub fn random_linear(input: usize, output: usize, rng: &mut impl Rng) -> Self {
        let mut d = Self::random(input, output, rng);
        d.b.iter_mut().for_each(|x| *x = 0.0);
        d
    }

    pub fn input_dim(&self) -> usize {
        self.w.first().map_or(0, Vec::len)
    }

    pub fn output_dim(&self) -> usize {
        self.w.len()
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.input_dim());
        self.w
            .iter()
            .zip(&self.b)
            .map(|(row, b)| row.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b)
            .collect()
    }

    pub fn forward_tanh(&self, x: &[f64]) -> Vec<f64> {
        self.forward(x).into_iter().map(f64::tanh).collect()
    }
}

pub fn concat(parts: &[&[f64]]) -> Vec<f64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Pads or truncates `x` to `width`, as floats.
pub fn padded(x: &[u64], width: usize) -> Vec<f64> {
    let mut out: Vec<f64> = x.iter().take(width).map(|&v| v as f64).collect();
    out.resize(width, 0.0);
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

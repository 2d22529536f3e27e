//! Smooth maximization over the probability simplex by projected gradient
//! ascent with Armijo backtracking.

use rand::Rng;

/// Euclidean projection onto `{x >= 0, sum x = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Uniform point on the simplex (flat Dirichlet).
pub fn random_simplex_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..dim)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    pub max_iterations: usize,
    /// Stop once an accepted step improves the value by less than this and
    /// the step itself is below `step_tolerance`.
    pub value_tolerance: f64,
    pub step_tolerance: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            value_tolerance: 1e-10,
            step_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot_diff(g: &[f64], a: &[f64], b: &[f64]) -> f64 {
    g.iter().zip(a.iter().zip(b)).map(|(g, (a, b))| g * (a - b)).sum()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Maximizes `f` over the simplex starting at `start`. `f` returns the value
/// and the gradient at a point.
pub fn projected_ascent<F>(f: F, start: &[f64], opts: AscentOptions) -> AscentResult
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let mut x = project_to_simplex(start);
    let (mut value, mut grad) = f(&x);
    let mut step: f64 = 1.0;
    for iteration in 0..opts.max_iterations {
        let mut trial_step = (step * 2.0).min(1e6);
        let accepted = loop {
            let cand: Vec<f64> = project_to_simplex(
                &x.iter()
                    .zip(&grad)
                    .map(|(xi, gi)| xi + trial_step * gi)
                    .collect::<Vec<_>>(),
            );
            let (cand_value, cand_grad) = f(&cand);
            let predicted = dot_diff(&grad, &cand, &x);
            if cand_value >= value + 1e-4 * predicted && cand_value >= value {
                break Some((cand, cand_value, cand_grad));
            }
            trial_step *= 0.5;
            if trial_step < 1e-18 {
                break None;
            }
        };
        let Some((cand, cand_value, cand_grad)) = accepted else {
            return AscentResult {
                point: x,
                value,
                iterations: iteration,
                converged: true,
            };
        };
        let moved = distance(&cand, &x);
        let improvement = cand_value - value;
        x = cand;
        value = cand_value;
        grad = cand_grad;
        step = trial_step;
        if improvement < opts.value_tolerance && moved < opts.step_tolerance {
            return AscentResult {
                point: x,
                value,
                iterations: iteration + 1,
                converged: true,
            };
        }
    }
    AscentResult {
        point: x,
        value,
        iterations: opts.max_iterations,
        converged: false,
    }
}

use rand::Rng;
use rand_distr::StandardNormal;

use crate::objective::TermValueGrad;

/// Cosine annealing from `lr0` at `k = 0` down to 0 at `k = iter_max`.
pub fn lr_schedule(lr0: f64, k: usize, iter_max: usize) -> f64 {
    if iter_max == 0 {
        return lr0;
    }
    let k = k.min(iter_max) as f64;
    lr0 * (1.0 + (std::f64::consts::PI * k / iter_max as f64).cos()) / 2.0
}

/// Perturbation coefficient at outer iteration `k >= 1`.
pub fn perturbation_coefficient(k: usize) -> f64 {
    0.2 / (k.max(1) as f64).powi(3)
}

/// `g ← g + ε‖g‖η` with `η` standard normal per coordinate and
/// `ε = 0.2 / k³`. A zero gradient is left untouched (no draws are made).
pub fn perturb_gradient<R: Rng + ?Sized>(grad: &mut TermValueGrad, k: usize, rng: &mut R) {
    let norm = grad.grad_norm();
    if norm == 0.0 {
        return;
    }
    let scale = perturbation_coefficient(k) * norm;
    for g in grad.grad_x.iter_mut().chain(grad.grad_y.iter_mut()) {
        let eta: f64 = rng.sample(StandardNormal);
        *g += scale * eta;
    }
}

//! Degree-weighted mini-batch sampling of nets.
//!
//! Net `i` is drawn with probability `softmax(d / T)_i`, where `d_i` is its
//! degree in the net-adjacency graph. Batches are drawn without replacement
//! by sequential draw-and-renormalize, implemented with a Fenwick tree so a
//! batch of `k` nets out of `m` costs `O(m + k log m)`.

use rand::Rng;

use crate::{Error, NetId, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingPlan {
    pub probabilities: Vec<f64>,
    pub temperature: f64,
    pub batch_size: usize,
}

/// Softmax of `degrees / temperature`, computed with max-subtraction.
pub fn build_plan(degrees: &[usize], temperature: f64, batch_size: usize) -> Result<SamplingPlan> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Invalid(format!("temperature must be positive, got {temperature}")));
    }
    if degrees.is_empty() {
        return Err(Error::Invalid("cannot sample from zero nets".into()));
    }
    if batch_size == 0 || batch_size > degrees.len() {
        return Err(Error::Invalid(format!(
            "batch size {batch_size} not in 1..={}",
            degrees.len()
        )));
    }
    let dmax = *degrees.iter().max().unwrap() as f64;
    let w: Vec<f64> = degrees
        .iter()
        .map(|&d| ((d as f64 - dmax) / temperature).exp())
        .collect();
    let z: f64 = w.iter().sum();
    Ok(SamplingPlan {
        probabilities: w.into_iter().map(|v| v / z).collect(),
        temperature,
        batch_size,
    })
}

/// Equal probabilities, for the uniform-sampling ablation.
pub fn uniform_plan(n_nets: usize, batch_size: usize) -> Result<SamplingPlan> {
    build_plan(&vec![0; n_nets], 1.0, batch_size)
}

/// Default temperature: `max(1, mean degree)`.
pub fn default_temperature(degrees: &[usize]) -> f64 {
    if degrees.is_empty() {
        return 1.0;
    }
    let mean = degrees.iter().sum::<usize>() as f64 / degrees.len() as f64;
    mean.max(1.0)
}

/// `batch_size` distinct nets, drawn proportionally to the plan's
/// probabilities among the nets not yet drawn.
pub fn sample_batch<R: Rng + ?Sized>(plan: &SamplingPlan, rng: &mut R) -> Vec<NetId> {
    let mut tree = Fenwick::new(&plan.probabilities);
    let mut out = Vec::with_capacity(plan.batch_size);
    for _ in 0..plan.batch_size {
        let total = tree.total();
        let i = if total > 0.0 {
            tree.find(rng.random::<f64>() * total)
        } else {
            tree.first_nonzero_or_unused(&out)
        };
        tree.zero(i);
        out.push(NetId(i));
    }
    out
}

/// Prefix sums over nonnegative weights.
struct Fenwick {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl Fenwick {
    fn new(weights: &[f64]) -> Self {
        let n = weights.len();
        let mut tree = vec![0.0; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += w;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                let v = tree[i + 1];
                tree[parent] += v;
            }
        }
        Fenwick {
            tree,
            weights: weights.to_vec(),
        }
    }

    fn total(&self) -> f64 {
        let mut i = self.weights.len();
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    fn zero(&mut self, idx: usize) {
        let delta = -self.weights[idx];
        self.weights[idx] = 0.0;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Index `i` with `prefix(i) <= target < prefix(i + 1)`, skipping
    /// zero-weight entries that rounding might land on.
    fn find(&self, mut target: f64) -> usize {
        let n = self.weights.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        let mut i = pos.min(n - 1);
        if self.weights[i] == 0.0 {
            // Rounding pushed us onto a drawn entry; take the nearest live one.
            i = (i..n)
                .chain((0..i).rev())
                .find(|&j| self.weights[j] > 0.0)
                .unwrap_or(i);
        }
        i
    }

    /// Used only if all remaining weight underflowed to zero.
    fn first_nonzero_or_unused(&self, used: &[NetId]) -> usize {
        (0..self.weights.len())
            .find(|&j| self.weights[j] > 0.0)
            .or_else(|| (0..self.weights.len()).find(|j| !used.contains(&NetId(*j))))
            .expect("batch size <= number of nets")
    }
}

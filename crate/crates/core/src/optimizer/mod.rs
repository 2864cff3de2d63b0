//! Random batch splitting method (RBSM) and the GD / ADAM baselines.
//!
//! All three share one outer loop: cosine-annealed learning rate, a fixed
//! number of inner steps per outer iteration, and the stopping rule on the
//! relative HPWL change plus the overlap ratio. They differ in how an inner
//! step is formed:
//!
//! * RBSM: per step a batch of nets is sampled and two updates are made,
//!   one against the batch wirelength (plus mean-field force), one against
//!   the boundary and overlap penalties of the cells touched by the batch.
//!   Penalty weights are re-adapted at the start of every outer iteration.
//! * ADAM: the same two split updates, each through its own Adam state.
//! * GD: one full-batch subgradient step on the whole objective with fixed
//!   weights, no mean-field force and no perturbation.

mod adam;
mod gamma;
mod schedule;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{build_grid, candidate_pairs, default_bin_size};
use crate::netlist::net_degrees;
use crate::objective::{
    boundary_penalty_for, hpwl, mean_field, overlap_area, overlap_penalty_hat, total_objective,
    CellPair, PenaltyWeights, TermValueGrad,
};
use crate::sampler::{build_plan, default_temperature, sample_batch, uniform_plan, SamplingPlan};
use crate::{Error, NetId, Netlist, Placement, Region, Result};

pub use adam::AdamState;
pub use gamma::{adapt_weights, adaptive_gamma};
pub use schedule::{lr_schedule, perturb_gradient, perturbation_coefficient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    /// Softmax over net-adjacency degrees.
    Degree,
    Uniform,
}

/// Normalization of the mean-field coefficient.
///
/// Taken literally, `α = 5` with `lr = 0.1` gives `2α·lr = 1`, so a single
/// step moves every cell onto the mean. Dividing by the die area makes the
/// term independent of the length unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanFieldNorm {
    None,
    Cells,
    DieArea,
}

/// Which overlap pairs enter the penalty split of an inner step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyScope {
    /// Pairs with at least one cell on a net of the current batch.
    Batch,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RbsmConfig {
    pub iter_max: usize,
    pub inner_steps: usize,
    pub lr0: f64,
    pub gamma0: f64,
    /// Mean-field coefficient, divided according to `mean_field_norm`.
    pub alpha: f64,
    pub batch_fraction: f64,
    /// Sampling temperature; `None` uses `max(1, mean degree)`.
    pub temperature: Option<f64>,
    pub eps_hpwl: f64,
    pub eps_overlap: f64,
    pub seed: u64,
    pub perturb: bool,
    pub sampling: Sampling,
    pub adaptive_gamma: bool,
    /// Weight used for every term when `adaptive_gamma` is off.
    pub fixed_gamma: f64,
    pub penalty_scope: PenaltyScope,
    pub mean_field_norm: MeanFieldNorm,
    /// Grid bin size; `None` uses the largest cell width and height.
    pub bin_size: Option<(f64, f64)>,
}

impl Default for RbsmConfig {
    fn default() -> Self {
        RbsmConfig {
            iter_max: 200,
            inner_steps: 25,
            lr0: 0.1,
            gamma0: 1000.0,
            alpha: 5.0,
            batch_fraction: 0.2,
            temperature: None,
            eps_hpwl: 1e-4,
            eps_overlap: 0.02,
            seed: 0,
            perturb: true,
            sampling: Sampling::Degree,
            adaptive_gamma: true,
            fixed_gamma: 10_000.0,
            penalty_scope: PenaltyScope::Batch,
            mean_field_norm: MeanFieldNorm::DieArea,
            bin_size: None,
        }
    }
}

impl RbsmConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        let bad = |msg: &str| Err(Error::Invalid(format!("config: {msg}")));
        if self.inner_steps == 0 {
            return bad("inner_steps must be >= 1");
        }
        if !pos(self.lr0) {
            return bad("lr0 must be > 0");
        }
        if !pos(self.eps_hpwl) || !pos(self.eps_overlap) {
            return bad("tolerances must be > 0");
        }
        if !(self.gamma0 >= 1.0 && self.gamma0.is_finite())
            || !(self.fixed_gamma >= 1.0 && self.fixed_gamma.is_finite())
        {
            return bad("penalty weights must be >= 1");
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be >= 0");
        }
        if !(self.batch_fraction > 0.0 && self.batch_fraction <= 1.0) {
            return bad("batch_fraction must be in (0, 1]");
        }
        if let Some(t) = self.temperature {
            if !pos(t) {
                return bad("temperature must be > 0");
            }
        }
        if let Some((w, h)) = self.bin_size {
            if !pos(w) || !pos(h) {
                return bad("bin sizes must be > 0");
            }
        }
        Ok(())
    }

    /// Batch size `⌈m · batch_fraction⌉`, at least 1.
    pub fn batch_size(&self, n_nets: usize) -> usize {
        ((n_nets as f64 * self.batch_fraction).ceil() as usize).clamp(1, n_nets.max(1))
    }

    /// Coefficient actually applied to the mean-field term.
    pub fn effective_alpha(&self, n_movable: usize, region: &Region) -> f64 {
        match self.mean_field_norm {
            MeanFieldNorm::None => self.alpha,
            MeanFieldNorm::Cells => self.alpha / n_movable.max(1) as f64,
            MeanFieldNorm::DieArea => self.alpha / region.area(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub hpwl: f64,
    pub overlap: f64,
    pub overlap_ratio: f64,
    pub objective: f64,
    pub lr: f64,
    /// Seconds since the start of the run.
    pub wall_time: f64,
}

/// Per-outer-iteration metrics, appended in order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    records: Vec<IterationRecord>,
    /// Index into `records` of the iterate that was returned.
    pub selected: Option<usize>,
    pub stopped_early: bool,
}

impl IterationTrace {
    pub fn push(&mut self, record: IterationRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn selected_record(&self) -> Option<&IterationRecord> {
        self.selected.map(|i| &self.records[i])
    }
}

/// Stop when consecutive outer iterates change HPWL by less than
/// `eps_hpwl` (relative) and the overlap ratio is below `eps_overlap`.
pub fn should_stop(prev_hpwl: f64, hpwl: f64, overlap_ratio: f64, eps_hpwl: f64, eps_overlap: f64) -> bool {
    let rel = if hpwl == 0.0 {
        if prev_hpwl == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (prev_hpwl / hpwl - 1.0).abs()
    };
    rel < eps_hpwl && overlap_ratio < eps_overlap
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Rbsm,
    Gd,
    Adam,
}

pub fn rbsm_run(netlist: &Netlist, region: &Region, config: &RbsmConfig) -> Result<(Placement, IterationTrace)> {
    run(netlist, region, config, Method::Rbsm)
}

/// Full-batch subgradient descent with fixed weights `gamma0`, no
/// sampling, no perturbation and no mean-field force.
pub fn gd_run(netlist: &Netlist, region: &Region, config: &RbsmConfig) -> Result<(Placement, IterationTrace)> {
    run(netlist, region, config, Method::Gd)
}

/// The RBSM pipeline with both split updates taken by Adam
/// (β₁ = 0.9, β₂ = 0.999, ε = 1e-8).
pub fn adam_run(netlist: &Netlist, region: &Region, config: &RbsmConfig) -> Result<(Placement, IterationTrace)> {
    run(netlist, region, config, Method::Adam)
}

/// Uniform random centers inside the feasible box of every cell.
pub fn random_placement<R: Rng + ?Sized>(netlist: &Netlist, region: &Region, rng: &mut R) -> Placement {
    let n = netlist.num_movable();
    let mut p = Placement::zeros(n);
    for s in 0..n {
        let c = netlist.movable_cell(s);
        p.x[s] = uniform_in(rng, 0.5 * c.width, region.width - 0.5 * c.width);
        p.y[s] = uniform_in(rng, 0.5 * c.height, region.height - 0.5 * c.height);
    }
    p
}

fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// State shared by the update rules of one run.
struct Engine<'a> {
    netlist: &'a Netlist,
    region: &'a Region,
    bins: (f64, f64),
    n: usize,
}

impl Engine<'_> {
    fn pairs(&self, placement: &Placement) -> Result<Vec<CellPair>> {
        let grid = build_grid(self.netlist, self.region, placement, self.bins.0, self.bins.1)?;
        Ok(candidate_pairs(&grid))
    }

    fn wirelength(&self, placement: &Placement, nets: &[NetId]) -> Result<TermValueGrad> {
        if nets.is_empty() {
            Ok(TermValueGrad::zeros(self.n))
        } else {
            hpwl(self.netlist, placement, nets)
        }
    }

    /// Boundary penalty of `slots` plus hat penalty over candidate pairs,
    /// keeping only pairs touching `mask` when it is given.
    fn penalty(
        &self,
        placement: &Placement,
        weights: &PenaltyWeights,
        slots: &[usize],
        mask: Option<&[bool]>,
    ) -> Result<TermValueGrad> {
        let mut pairs = self.pairs(placement)?;
        if let Some(mask) = mask {
            pairs.retain(|&(a, b)| mask[a.0] || mask[b.0]);
        }
        let mut g = boundary_penalty_for(self.netlist, self.region, placement, weights, slots)?;
        g.add(&overlap_penalty_hat(self.netlist, placement, weights, &pairs)?);
        Ok(g)
    }
}

enum Update {
    Sgd,
    Adam(AdamState),
}

impl Update {
    fn apply(&mut self, placement: &mut Placement, g: &TermValueGrad, lr: f64) {
        match self {
            Update::Sgd => {
                for (x, d) in placement.x.iter_mut().zip(&g.grad_x) {
                    *x -= lr * d;
                }
                for (y, d) in placement.y.iter_mut().zip(&g.grad_y) {
                    *y -= lr * d;
                }
            }
            Update::Adam(state) => state.step(placement, g, lr),
        }
    }
}

fn run(netlist: &Netlist, region: &Region, config: &RbsmConfig, method: Method) -> Result<(Placement, IterationTrace)> {
    config.validate()?;
    region.check_fits(netlist)?;
    if netlist.num_movable() == 0 {
        return Err(Error::Invalid("nothing to place: no movable cells".into()));
    }
    let start = Instant::now();
    let n = netlist.num_movable();
    let engine = Engine {
        netlist,
        region,
        bins: config.bin_size.unwrap_or_else(|| default_bin_size(netlist)),
        n,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut placement = random_placement(netlist, region, &mut rng);

    let all_nets = netlist.all_nets();
    let all_slots: Vec<usize> = (0..n).collect();
    let plan: Option<SamplingPlan> = match method {
        Method::Gd => None,
        _ if netlist.num_nets() == 0 => None,
        _ => {
            let bs = config.batch_size(netlist.num_nets());
            Some(match config.sampling {
                Sampling::Degree => {
                    let d = net_degrees(netlist);
                    let t = config.temperature.unwrap_or_else(|| default_temperature(&d));
                    build_plan(&d, t, bs)?
                }
                Sampling::Uniform => uniform_plan(netlist.num_nets(), bs)?,
            })
        }
    };

    let alpha = match method {
        Method::Gd => 0.0,
        _ => config.effective_alpha(n, region),
    };
    let perturb = config.perturb && method != Method::Gd;
    let (mut wl_update, mut pen_update) = match method {
        Method::Adam => (Update::Adam(AdamState::new(n)), Update::Adam(AdamState::new(n))),
        _ => (Update::Sgd, Update::Sgd),
    };

    let fixed = |g: f64| PenaltyWeights::uniform(n, g);
    let mut trace = IterationTrace::default();
    let mut prev_hpwl = engine.wirelength(&placement, &all_nets)?.value;
    let mut best: Option<(usize, bool, f64, Placement)> = None;
    let mut mask = vec![false; netlist.num_cells()];
    let mut batch_slots = Vec::with_capacity(n);

    for k in 0..config.iter_max {
        let lr = lr_schedule(config.lr0, k, config.iter_max);
        let weights = match method {
            Method::Gd => fixed(config.gamma0),
            _ if config.adaptive_gamma => {
                let pairs = engine.pairs(&placement)?;
                adapt_weights(netlist, region, &placement, &pairs, config.gamma0)?
            }
            _ => fixed(config.fixed_gamma),
        };

        for _ in 0..config.inner_steps {
            if method == Method::Gd {
                let mut g = engine.wirelength(&placement, &all_nets)?;
                g.add(&engine.penalty(&placement, &weights, &all_slots, None)?);
                wl_update.apply(&mut placement, &g, lr);
                continue;
            }

            let batch = match &plan {
                Some(p) => sample_batch(p, &mut rng),
                None => Vec::new(),
            };
            let mut g = engine.wirelength(&placement, &batch)?;
            g.add(&mean_field(&placement, alpha));
            if perturb {
                perturb_gradient(&mut g, k + 1, &mut rng);
            }
            wl_update.apply(&mut placement, &g, lr);

            let mut g = match config.penalty_scope {
                PenaltyScope::All => engine.penalty(&placement, &weights, &all_slots, None)?,
                PenaltyScope::Batch => {
                    mask.iter_mut().for_each(|m| *m = false);
                    batch_slots.clear();
                    for &net in &batch {
                        for &c in &netlist.net(net).members {
                            if !mask[c.0] {
                                mask[c.0] = true;
                                if let Some(s) = netlist.slot(c) {
                                    batch_slots.push(s);
                                }
                            }
                        }
                    }
                    batch_slots.sort_unstable();
                    engine.penalty(&placement, &weights, &batch_slots, Some(&mask))?
                }
            };
            if perturb {
                perturb_gradient(&mut g, k + 1, &mut rng);
            }
            pen_update.apply(&mut placement, &g, lr);
        }

        let pairs = if placement.is_finite() {
            engine.pairs(&placement)?
        } else {
            Vec::new()
        };
        let record = if placement.is_finite() {
            let hp = engine.wirelength(&placement, &all_nets)?.value;
            let overlap = overlap_area(netlist, &placement, &pairs)?;
            IterationRecord {
                iteration: k,
                hpwl: hp,
                overlap,
                overlap_ratio: overlap / netlist.total_movable_area(),
                objective: total_objective(netlist, region, &placement, &weights, alpha, &pairs)?,
                lr,
                wall_time: start.elapsed().as_secs_f64(),
            }
        } else {
            IterationRecord {
                iteration: k,
                hpwl: f64::NAN,
                overlap: f64::NAN,
                overlap_ratio: f64::NAN,
                objective: f64::NAN,
                lr,
                wall_time: start.elapsed().as_secs_f64(),
            }
        };
        if !record.objective.is_finite() {
            trace.push(record);
            return Err(Error::Diverged {
                iteration: k,
                trace: Box::new(trace),
            });
        }
        let feasible = record.overlap_ratio < config.eps_overlap;
        let better = match &best {
            None => true,
            Some((_, bf, score, _)) => match (feasible, *bf) {
                (true, false) => true,
                (false, true) => false,
                (true, true) => record.hpwl < *score,
                (false, false) => record.overlap_ratio < *score,
            },
        };
        if better {
            let score = if feasible { record.hpwl } else { record.overlap_ratio };
            best = Some((trace.len(), feasible, score, placement.clone()));
        }
        let stop = should_stop(prev_hpwl, record.hpwl, record.overlap_ratio, config.eps_hpwl, config.eps_overlap);
        prev_hpwl = record.hpwl;
        trace.push(record);
        if stop {
            trace.stopped_early = true;
            break;
        }
    }

    match best {
        Some((idx, _, _, p)) => {
            trace.selected = Some(idx);
            Ok((p, trace))
        }
        None => Ok((placement, trace)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Cell, CellId};

    fn two_cells(region: f64) -> (Netlist, Region) {
        let cells = vec![Cell::movable("a", 10.0, 10.0), Cell::movable("b", 10.0, 10.0)];
        let nl = Netlist::build(cells, vec![vec![CellId(0), CellId(1)]]).unwrap();
        (nl, Region::new(region, region).unwrap())
    }

    #[test]
    fn stopping_rule_needs_both_conditions() {
        assert!(should_stop(100.0, 100.005, 0.01, 1e-4, 0.02));
        assert!(!should_stop(100.0, 100.005, 0.03, 1e-4, 0.02));
        assert!(!should_stop(100.0, 101.0, 0.0, 1e-4, 0.02));
        assert!(!should_stop(100.0, 101.0, 0.5, 1e-4, 0.02));
        assert!(should_stop(0.0, 0.0, 0.0, 1e-4, 0.02));
    }

    #[test]
    fn config_validation() {
        RbsmConfig::default().validate().unwrap();
        let bad = RbsmConfig { inner_steps: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = RbsmConfig { lr0: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = RbsmConfig { eps_overlap: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert_eq!(RbsmConfig::default().batch_size(885), 177);
        assert_eq!(RbsmConfig::default().batch_size(1), 1);
    }

    #[test]
    fn single_cell_without_nets_stays_in_bounds() {
        let nl = Netlist::build(vec![Cell::movable("a", 4.0, 6.0)], vec![]).unwrap();
        let region = Region::new(50.0, 50.0).unwrap();
        let cfg = RbsmConfig { iter_max: 20, alpha: 0.0, ..Default::default() };
        let (p, trace) = rbsm_run(&nl, &region, &cfg).unwrap();
        let (x, y) = p.get(0);
        assert!((2.0..=48.0).contains(&x) && (3.0..=47.0).contains(&y));
        assert_eq!(trace.last().unwrap().objective, 0.0);
    }

    #[test]
    fn runs_are_deterministic() {
        let (nl, region) = two_cells(200.0);
        let cfg = RbsmConfig { iter_max: 30, seed: 11, ..Default::default() };
        for run in [rbsm_run, gd_run, adam_run] {
            let (pa, ta) = run(&nl, &region, &cfg).unwrap();
            let (pb, tb) = run(&nl, &region, &cfg).unwrap();
            assert_eq!(pa, pb);
            let strip = |t: &IterationTrace| {
                t.records()
                    .iter()
                    .map(|r| (r.hpwl, r.overlap, r.objective, r.lr))
                    .collect::<Vec<_>>()
            };
            assert_eq!(strip(&ta), strip(&tb));
        }
    }

    #[test]
    fn rejects_empty_and_oversized() {
        let nl = Netlist::build(vec![Cell::terminal("p", 0.0, 0.0)], vec![]).unwrap();
        assert!(rbsm_run(&nl, &Region::default(), &RbsmConfig::default()).is_err());
        let nl = Netlist::build(vec![Cell::movable("a", 900.0, 1.0)], vec![]).unwrap();
        assert!(rbsm_run(&nl, &Region::default(), &RbsmConfig::default()).is_err());
    }
}

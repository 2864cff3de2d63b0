use crate::objective::TermValueGrad;
use crate::Placement;

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

/// First and second moment estimates for one parameter group.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    m_x: Vec<f64>,
    m_y: Vec<f64>,
    v_x: Vec<f64>,
    v_y: Vec<f64>,
    t: i32,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState {
            m_x: vec![0.0; n],
            m_y: vec![0.0; n],
            v_x: vec![0.0; n],
            v_y: vec![0.0; n],
            t: 0,
        }
    }

    pub fn steps(&self) -> i32 {
        self.t
    }

    pub fn step(&mut self, placement: &mut Placement, g: &TermValueGrad, lr: f64) {
        self.t += 1;
        let c1 = 1.0 - BETA1.powi(self.t);
        let c2 = 1.0 - BETA2.powi(self.t);
        let update = |p: &mut [f64], m: &mut [f64], v: &mut [f64], grad: &[f64]| {
            for i in 0..p.len() {
                m[i] = BETA1 * m[i] + (1.0 - BETA1) * grad[i];
                v[i] = BETA2 * v[i] + (1.0 - BETA2) * grad[i] * grad[i];
                let mh = m[i] / c1;
                let vh = v[i] / c2;
                p[i] -= lr * mh / (vh.sqrt() + EPS);
            }
        };
        update(&mut placement.x, &mut self.m_x, &mut self.v_x, &g.grad_x);
        update(&mut placement.y, &mut self.m_y, &mut self.v_y, &g.grad_y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_placement() {
        let mut p = Placement::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        let before = p.clone();
        let mut s = AdamState::new(2);
        for _ in 0..10 {
            s.step(&mut p, &TermValueGrad::zeros(2), 0.1);
        }
        assert_eq!(p, before);
    }

    #[test]
    fn first_step_moves_by_lr() {
        let mut p = Placement::new(vec![0.0], vec![0.0]).unwrap();
        let mut g = TermValueGrad::zeros(1);
        g.grad_x[0] = 123.0;
        g.grad_y[0] = -0.5;
        AdamState::new(1).step(&mut p, &g, 0.1);
        assert!((p.x()[0] + 0.1).abs() < 1e-8);
        assert!((p.y()[0] - 0.1).abs() < 1e-8);
    }
}

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Point, StencilShape, StencilView};

/// Ranges for generic random stencils on flat time layers.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    pub x: Range<f64>,
    pub t: Range<f64>,
    pub step: Range<f64>,
    pub sigma: Range<f64>,
    pub tau: Range<f64>,
    pub u: Range<f64>,
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            x: -1.0..1.0,
            t: 0.1..0.6,
            step: 0.3..1.0,
            sigma: -0.5..0.5,
            tau: 0.1..0.4,
            u: 0.5..2.0,
        }
    }
}

/// A stencil with independent random steps on each level, flat time layers,
/// and positive `u`.
pub fn random_stencil<R: Rng + ?Sized>(shape: StencilShape, bx: &SampleBox, rng: &mut R) -> StencilView {
    let r = shape.reach();
    let t0 = rng.random_range(bx.t.clone());
    let x0 = rng.random_range(bx.x.clone());
    let tau = rng.random_range(bx.tau.clone());
    let mut points = Vec::with_capacity(shape.len());
    for &level in shape.levels() {
        let t = t0 + level as f64 * tau;
        let base = if level == 0 {
            x0
        } else {
            x0 + level as f64 * rng.random_range(bx.sigma.clone())
        };
        let mut xs = vec![0.0; (2 * r + 1) as usize];
        xs[r as usize] = base;
        for o in 1..=r as usize {
            xs[r as usize + o] = xs[r as usize + o - 1] + rng.random_range(bx.step.clone());
            xs[r as usize - o] = xs[r as usize - o + 1] - rng.random_range(bx.step.clone());
        }
        for x in xs {
            points.push(Point::new(x, t, rng.random_range(bx.u.clone())));
        }
    }
    StencilView::from_points(shape, points).expect("point count matches shape")
}

/// `count` stencils from a ChaCha8 stream seeded with `seed`.
pub fn sample_stencils(shape: StencilShape, bx: &SampleBox, count: usize, seed: u64) -> Vec<StencilView> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_stencil(shape, bx, &mut rng)).collect()
}

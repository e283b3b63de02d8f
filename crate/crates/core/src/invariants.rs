//! Elementary difference invariants of each equation's symmetry group.
//!
//! Heat, Burgers and potential Burgers use the six-point stencil on two flat
//! time layers; KdV uses the ten-point stencil. Each set is functionally
//! independent and its size equals `dim(space) - rank(Z)` (8, 9, 8 and 18).

use serde::Serialize;

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::lattice::{StencilShape, StencilView};

/// The values `I_1 ... I_mu` at one stencil.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantSet {
    pub equation: Equation,
    pub values: Vec<f64>,
}

impl InvariantSet {
    /// `I_k`, one-based like the conventional labels.
    pub fn get(&self, k: usize) -> f64 {
        assert!(
            k >= 1 && k <= self.values.len(),
            "I{k} is not defined for {}",
            self.equation
        );
        self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `("I1", value), ("I2", value), ...`
    pub fn named(&self) -> Vec<(String, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("I{}", i + 1), v))
            .collect()
    }
}

/// Number of elementary invariants of `equation`, `None` for the wave demo.
pub fn invariant_len(equation: Equation) -> Option<usize> {
    match equation {
        Equation::Heat | Equation::PotentialBurgers => Some(8),
        Equation::Burgers => Some(9),
        Equation::Kdv => Some(18),
        Equation::WaveDemo => None,
    }
}

/// The stencil the invariants of `equation` live on.
pub fn invariant_shape(equation: Equation) -> StencilShape {
    match equation {
        Equation::Kdv => StencilShape::TenPoint,
        Equation::WaveDemo => StencilShape::NinePoint,
        _ => StencilShape::SixPoint,
    }
}

pub fn invariants(equation: Equation, s: &StencilView) -> Result<InvariantSet> {
    match equation {
        Equation::Heat => heat_invariants(s),
        Equation::Burgers => burgers_invariants(s),
        Equation::PotentialBurgers => potential_invariants(s),
        Equation::Kdv => kdv_invariants(s),
        Equation::WaveDemo => Err(Error::Unsupported(
            "the wave demo scheme is not built from an invariant set".into(),
        )),
    }
}

/// `I_k` as a stand-alone stencil function.
pub fn invariant_component(equation: Equation, k: usize) -> impl Fn(&StencilView) -> Result<f64> {
    move |s| invariants(equation, s).map(|set| set.get(k))
}

fn positive(v: f64, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{what} = {v} must be positive")))
    }
}

fn nonzero(v: f64, what: &str) -> Result<f64> {
    if v != 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{what} = {v} must be non-zero")))
    }
}

fn finite(set: InvariantSet) -> Result<InvariantSet> {
    match set.values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::domain(format!(
            "{} invariant I{} is not finite",
            set.equation,
            i + 1
        ))),
        None => Ok(set),
    }
}

/// Steps shared by the six-point sets.
struct Geometry {
    hp: f64,
    hm: f64,
    hhp: f64,
    hhm: f64,
    sigma: f64,
    tau: f64,
}

fn geometry(s: &StencilView) -> Result<Geometry> {
    let st = &s.steps;
    Ok(Geometry {
        hp: positive(st.h_plus, "h+")?,
        hm: positive(st.h_minus, "h-")?,
        hhp: positive(st.hh_plus, "hat h+")?,
        hhm: positive(st.hh_minus, "hat h-")?,
        sigma: st.sigma,
        tau: positive(st.tau, "tau")?,
    })
}

/// The exponents carried by `I_4 ... I_8` of the heat and potential sets.
struct HeatExponents {
    e4: f64,
    e5: f64,
    e6: f64,
    e7: f64,
    e8: f64,
}

impl Geometry {
    fn heat_exponents(&self) -> HeatExponents {
        let Geometry {
            hp,
            hm,
            hhp,
            hhm,
            sigma,
            tau,
        } = *self;
        let q = 4.0 * tau;
        HeatExponents {
            e4: sigma * sigma / q,
            e5: hp * (2.0 * sigma - hp) / q,
            e6: -hm * (2.0 * sigma + hm) / q,
            e7: hhp * (2.0 * sigma + hhp) / q,
            e8: -hhm * (2.0 * sigma - hhm) / q,
        }
    }
}

/// Heat invariants on the 14-dimensional flat-layer space.
pub fn heat_invariants(s: &StencilView) -> Result<InvariantSet> {
    let g = geometry(s)?;
    let e = g.heat_exponents();
    let u = nonzero(s.u(0, 0), "u")?;
    let uh = nonzero(s.u(1, 0), "hat u")?;
    let values = vec![
        g.hp / g.hm,
        g.hhp / g.hhm,
        g.hp * g.hhp / g.tau,
        g.tau.sqrt() / g.hp * (uh / u) * e.e4.exp(),
        s.u(0, 1) / u * e.e5.exp(),
        s.u(0, -1) / u * e.e6.exp(),
        s.u(1, 1) / uh * e.e7.exp(),
        s.u(1, -1) / uh * e.e8.exp(),
    ];
    finite(InvariantSet {
        equation: Equation::Heat,
        values,
    })
}

/// Invariants of the potential form, the heat set under `u = exp(-w/2)`
/// with each exponential merged into one.
pub fn potential_invariants(s: &StencilView) -> Result<InvariantSet> {
    let g = geometry(s)?;
    let e = g.heat_exponents();
    let (w, wh) = (s.u(0, 0), s.u(1, 0));
    let values = vec![
        g.hp / g.hm,
        g.hhp / g.hhm,
        g.hp * g.hhp / g.tau,
        g.tau.sqrt() / g.hp * (-(wh - w) / 2.0 + e.e4).exp(),
        (-(s.u(0, 1) - w) / 2.0 + e.e5).exp(),
        ((w - s.u(0, -1)) / 2.0 + e.e6).exp(),
        (-(s.u(1, 1) - wh) / 2.0 + e.e7).exp(),
        ((wh - s.u(1, -1)) / 2.0 + e.e8).exp(),
    ];
    finite(InvariantSet {
        equation: Equation::PotentialBurgers,
        values,
    })
}

/// One-sided difference quotients `(v_x^+, v_x^-)` on level `level`.
fn quotients(s: &StencilView, level: i64, hp: f64, hm: f64) -> (f64, f64) {
    let v = s.u(level, 0);
    ((s.u(level, 1) - v) / hp, (v - s.u(level, -1)) / hm)
}

pub fn burgers_invariants(s: &StencilView) -> Result<InvariantSet> {
    let g = geometry(s)?;
    let (vxp, vxm) = quotients(s, 0, g.hp, g.hm);
    let (hvxp, hvxm) = quotients(s, 1, g.hhp, g.hhm);
    let drift = g.sigma / g.tau;
    let values = vec![
        g.hp / g.hm,
        g.hhp / g.hhm,
        g.hp * g.hhp / g.tau,
        g.hp * g.hm * (vxp - vxm),
        g.hhp * g.hhm * (hvxp - hvxm),
        g.hp * (drift - s.u(0, 0)),
        g.hhp * (drift - s.u(1, 0)),
        g.hp * g.hp * (vxp + 1.0 / g.tau),
        g.hhp * g.hhp * (hvxp - 1.0 / g.tau),
    ];
    finite(InvariantSet {
        equation: Equation::Burgers,
        values,
    })
}

pub fn kdv_invariants(s: &StencilView) -> Result<InvariantSet> {
    if s.shape != StencilShape::TenPoint {
        return Err(Error::Unsupported(format!(
            "KdV invariants need the ten-point stencil, got {:?}",
            s.shape
        )));
    }
    let g = geometry(s)?;
    let st = &s.steps;
    let hpp = positive(st.h_pp.unwrap_or(f64::NAN), "h++")?;
    let hmm = positive(st.h_mm.unwrap_or(f64::NAN), "h--")?;
    let hhpp = positive(st.hh_pp.unwrap_or(f64::NAN), "hat h++")?;
    let hhmm = positive(st.hh_mm.unwrap_or(f64::NAN), "hat h--")?;
    let tau = g.tau;
    // u_x^{--}, u_x^-, u_x^+, u_x^{++} on one level
    let slopes = |l: i64, hmm: f64, hm: f64, hp: f64, hpp: f64| {
        let u = |o| s.u(l, o);
        [
            (u(-1) - u(-2)) / hmm,
            (u(0) - u(-1)) / hm,
            (u(1) - u(0)) / hp,
            (u(2) - u(1)) / hpp,
        ]
    };
    let d = slopes(0, hmm, g.hm, g.hp, hpp);
    let dh = slopes(1, hhmm, g.hhm, g.hhp, hhpp);
    let u = s.u(0, 0);
    let values = vec![
        g.hp / g.hm,
        hpp / g.hp,
        g.hm / hmm,
        g.hhp / g.hhm,
        hhpp / g.hhp,
        g.hhm / hhmm,
        g.hp / g.hhp,
        g.hp.powi(3) / tau,
        (g.sigma + tau * u) / g.hp,
        tau * d[0],
        tau * d[1],
        tau * d[2],
        tau * d[3],
        g.hp * g.hp * (s.u(1, 0) - u),
        tau * dh[0],
        tau * dh[1],
        tau * dh[2],
        tau * dh[3],
    ];
    finite(InvariantSet {
        equation: Equation::Kdv,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Point;
    use approx::assert_relative_eq;

    fn six_point(xs: [f64; 6], t: f64, tau: f64, us: [f64; 6]) -> StencilView {
        let pts = (0..6)
            .map(|i| Point::new(xs[i], if i < 3 { t } else { t + tau }, us[i]))
            .collect();
        StencilView::from_points(StencilShape::SixPoint, pts).unwrap()
    }

    #[test]
    fn heat_uniform_constant() {
        let (h, tau, c) = (0.1, 0.004, 2.5);
        let s = six_point([-h, 0.0, h, -h, 0.0, h], 1.0, tau, [c; 6]);
        let i = heat_invariants(&s).unwrap();
        let r = h * h / (4.0 * tau);
        let expected = [
            1.0,
            1.0,
            h * h / tau,
            tau.sqrt() / h,
            (-r).exp(),
            (-r).exp(),
            r.exp(),
            r.exp(),
        ];
        for (a, b) in i.values.iter().zip(expected) {
            assert_relative_eq!(*a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn heat_rejects_zero_u() {
        let s = six_point(
            [-1.0, 0.0, 1.0, -1.0, 0.0, 1.0],
            1.0,
            0.1,
            [1.0, 0.0, 1.0, 1.0, 1.0, 1.0],
        );
        assert!(matches!(heat_invariants(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn burgers_constant_uniform() {
        let (h, tau, v0) = (0.2, 0.05, 0.7);
        let s = six_point([-h, 0.0, h, -h, 0.0, h], 0.0, tau, [v0; 6]);
        let i = burgers_invariants(&s).unwrap();
        assert_eq!(i.get(4), 0.0);
        assert_eq!(i.get(5), 0.0);
        assert_relative_eq!(i.get(6), -h * v0);
        assert_relative_eq!(i.get(7), -h * v0);
        assert_relative_eq!(i.get(8), h * h / tau);
        assert_relative_eq!(i.get(9), -h * h / tau);
    }

    #[test]
    fn potential_matches_heat_under_log_map() {
        let us = [0.8, 1.1, 1.7, 0.9, 1.3, 1.2];
        let ws = us.map(|u: f64| -2.0 * u.ln());
        let xs = [-0.3, 0.1, 0.6, -0.2, 0.25, 0.9];
        let heat = heat_invariants(&six_point(xs, 0.2, 0.3, us)).unwrap();
        let pot = potential_invariants(&six_point(xs, 0.2, 0.3, ws)).unwrap();
        for (a, b) in heat.values.iter().zip(&pot.values) {
            assert_relative_eq!(*a, *b, max_relative = 1e-13);
        }
    }

    #[test]
    fn kdv_needs_ten_points() {
        let s = six_point([-1.0, 0.0, 1.0, -1.0, 0.0, 1.0], 1.0, 0.1, [1.0; 6]);
        assert!(matches!(kdv_invariants(&s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn kdv_constant_uniform() {
        let (h, tau, u0) = (0.1, 0.01, 0.3);
        let pts = (0..10)
            .map(|i| Point::new(h * ((i % 5) as f64 - 2.0), if i < 5 { 0.0 } else { tau }, u0))
            .collect();
        let s = StencilView::from_points(StencilShape::TenPoint, pts).unwrap();
        let i = kdv_invariants(&s).unwrap();
        for k in 1..=7 {
            assert_relative_eq!(i.get(k), 1.0, max_relative = 1e-14);
        }
        assert_relative_eq!(i.get(8), h.powi(3) / tau, max_relative = 1e-14);
        assert_relative_eq!(i.get(9), tau * u0 / h, max_relative = 1e-14);
        assert!((10..=18).all(|k| i.get(k) == 0.0));
    }
}

//! Approximating `F(θ)` by powers of the fixed gate `G = F(φ)`.
//!
//! `G^k = F(kφ mod 2π)`, and for `φ/π` irrational the orbit `{kφ mod 2π}` is
//! dense in the circle, so every target is reachable to any tolerance. The
//! search is a plain scan over `k`, which also makes the returned `k`
//! minimal by construction.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::angle::Angle;

/// `2π · (√5 − 1)/2`: the golden-ratio rotation, whose orbit spreads around
/// the circle as evenly as any irrational rotation can.
pub fn default_phi() -> Angle {
    Angle::new(TAU * (5f64.sqrt() - 1.0) / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthConfig {
    pub phi: Angle,
    /// Largest accepted circular distance between `kφ` and the target.
    pub eps: f64,
    pub k_max: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { phi: default_phi(), eps: 1e-3, k_max: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum SynthError {
    #[error("no k <= {k_max} reaches the target within eps (best k = {best_k}, error {best_error:e})")]
    NotReachable { best_k: u64, best_error: f64, k_max: u64 },
    #[error("invalid synthesis configuration: {0}")]
    InvalidConfig(&'static str),
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.eps.is_nan() || self.eps <= 0.0 || self.eps.is_infinite() {
            return Err(SynthError::InvalidConfig("eps must be positive and finite"));
        }
        if self.k_max == 0 {
            return Err(SynthError::InvalidConfig("k_max must be at least 1"));
        }
        if self.k_max > 1 << 52 {
            return Err(SynthError::InvalidConfig("k_max must be below 2^52"));
        }
        let phi = self.phi.radians();
        if !phi.is_finite() || Angle::new(phi).is_multiple_of_pi() {
            return Err(SynthError::InvalidConfig("phi must be finite and not a multiple of pi"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthesisResult {
    pub k: u64,
    /// `kφ mod 2π`, in `[0, 2π)`.
    pub achieved: Angle,
    /// Circular distance from `achieved` to the target.
    pub error: f64,
}

/// Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

const TWO_PI_DD: Dd = Dd { hi: TAU, lo: 2.4492935982947064e-16 };

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn scale(self, k: f64) -> Dd {
        let p = two_prod(self.hi, k);
        quick_two_sum(p.hi, p.lo + self.lo * k)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn is_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    fn ge(self, o: Dd) -> bool {
        !self.sub(o).is_negative()
    }

    /// Reduce into `[0, 2π)`.
    fn rem_two_pi(self) -> Dd {
        let q = (self.hi / TAU).floor();
        let mut r = self.sub(TWO_PI_DD.scale(q));
        while r.is_negative() {
            r = r.add(TWO_PI_DD);
        }
        while r.ge(TWO_PI_DD) {
            r = r.sub(TWO_PI_DD);
        }
        r
    }
}

/// `k·φ mod 2π` evaluated directly in double-double precision.
fn orbit_point(k: u64, phi: f64) -> Dd {
    two_prod(k as f64, phi).rem_two_pi()
}

fn circular_gap(a: Dd, b: Dd) -> f64 {
    let d = a.sub(b).value().abs();
    d.min(TAU - d)
}

/// Steps between re-anchoring the running orbit point to its direct value.
const RENORMALIZE_EVERY: u64 = 1 << 16;

/// Smallest `k ∈ [1, k_max]` with `kφ mod 2π` within `eps` of `theta`.
pub fn synthesize(theta: Angle, cfg: &SynthConfig) -> Result<SynthesisResult, SynthError> {
    cfg.validate()?;
    let phi = cfg.phi.radians();
    let step = Dd::from_f64(phi).rem_two_pi();
    let target = Dd::from_f64(theta.radians()).rem_two_pi();

    let mut point = Dd::from_f64(0.0);
    let mut best = (0u64, f64::INFINITY);
    for k in 1..=cfg.k_max {
        if k % RENORMALIZE_EVERY == 0 {
            point = orbit_point(k, phi);
        } else {
            point = point.add(step);
            if point.ge(TWO_PI_DD) {
                point = point.sub(TWO_PI_DD);
            }
        }
        let err = circular_gap(point, target);
        if err <= cfg.eps {
            let achieved = point.value();
            let achieved = if achieved >= TAU { achieved - TAU } else { achieved };
            return Ok(SynthesisResult { k, achieved: Angle::new(achieved), error: err });
        }
        if err < best.1 {
            best = (k, err);
        }
    }
    Err(SynthError::NotReachable { best_k: best.0, best_error: best.1, k_max: cfg.k_max })
}

/// Recompute the angular error of `k` copies of `G` against `theta` from
/// scratch (direct double-double evaluation of `kφ mod 2π`).
pub fn angular_error(k: u64, theta: Angle, phi: Angle) -> f64 {
    let target = Dd::from_f64(theta.radians()).rem_two_pi();
    circular_gap(orbit_point(k, phi.radians()), target)
}

/// Operator-norm distance between `F(θ)` and `F(θ + δ)`: `2|sin(δ/2)|`.
pub fn synthesis_error_to_gate_error(delta: f64) -> f64 {
    2.0 * (delta / 2.0).sin().abs()
}

/// Upper bound on the output-state distance between a circuit and its
/// synthesized version, given each replaced gate's angular error.
pub fn budget(errors: &[f64]) -> f64 {
    errors.iter().map(|&d| synthesis_error_to_gate_error(d)).sum()
}

/// Rounding allowance for simulating one copy of `G` in f64: the
/// representation error of `cos φ` and `sin φ` plus one rotation step.
pub const ROUNDING_PER_GATE: f64 = 4.0 * f64::EPSILON;

/// [`budget`] plus [`ROUNDING_PER_GATE`] for each of `applications`
/// simulated copies of `G`, so the bound also covers the floating-point
/// evaluation of the synthesized circuit.
pub fn certified_budget(errors: &[f64], applications: u64) -> f64 {
    budget(errors) + applications as f64 * ROUNDING_PER_GATE
}

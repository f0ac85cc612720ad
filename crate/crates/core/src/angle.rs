use std::f64::consts::{PI, TAU};
use std::fmt;

/// A rotation angle in radians.
///
/// The value is kept exactly as given (no wrapping into `[0, 2π)`), so that
/// emitted circuits reproduce their input bit for bit. Use
/// [`Angle::circular_distance`] when two angles need to be compared as
/// points on the circle.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub const fn new(radians: f64) -> Self {
        Angle(radians)
    }

    pub const fn radians(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Representative in `[0, 2π)`.
    pub fn wrapped(self) -> f64 {
        let r = self.0.rem_euclid(TAU);
        if r >= TAU {
            0.0
        } else {
            r
        }
    }

    /// Distance between the two angles measured along the circle, in `[0, π]`.
    pub fn circular_distance(self, other: Angle) -> f64 {
        let d = (self.0 - other.0).rem_euclid(TAU);
        d.min(TAU - d)
    }

    /// True when the value is an exact floating-point multiple of π
    /// (`k * π` rounds to exactly this value for some integer `k`).
    pub fn is_multiple_of_pi(self) -> bool {
        let k = (self.0 / PI).round();
        k.is_finite() && k * PI == self.0
    }

    /// True when the value is an exact floating-point multiple of 2π.
    pub fn is_multiple_of_two_pi(self) -> bool {
        let k = (self.0 / TAU).round();
        k.is_finite() && k * TAU == self.0
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle(v)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::fmt::format_significant(self.0, 17))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_distance_wraps() {
        let a = Angle::new(0.1);
        let b = Angle::new(TAU - 0.1);
        assert!((a.circular_distance(b) - 0.2).abs() < 1e-12);
        assert!((Angle::new(3.0 * TAU + 1.0).circular_distance(Angle::new(1.0))).abs() < 1e-12);
        assert_eq!(Angle::new(0.0).circular_distance(Angle::new(PI)), PI);
    }

    #[test]
    fn multiples_of_pi() {
        assert!(Angle::new(PI).is_multiple_of_pi());
        assert!(Angle::new(-2.0 * PI).is_multiple_of_pi());
        assert!(Angle::new(0.0).is_multiple_of_pi());
        assert!(!Angle::new(PI / 3.0).is_multiple_of_pi());
        assert!(!Angle::new(PI).is_multiple_of_two_pi());
        assert!(Angle::new(4.0 * PI).is_multiple_of_two_pi());
    }

    #[test]
    fn wrapped_range() {
        for v in [-7.0, -0.0, 0.0, 1.0, TAU, 100.0] {
            let w = Angle::new(v).wrapped();
            assert!((0.0..TAU).contains(&w), "{v} -> {w}");
        }
    }
}

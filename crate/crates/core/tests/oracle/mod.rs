//! Test-only oracles, independent of the library's code paths.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

/// 2π to 100 decimal places, as an integer over 10^100.
const TWO_PI_DIGITS: &str =
    "62831853071795864769252867665590057683943387987502116419498891846156328125724179972560696506842341359";
const TWO_PI_DECIMALS: u32 = 100;

/// Fixed-point scale used for exact residue arithmetic.
const SCALE_BITS: u32 = 120;

/// Brute-force `k·φ mod 2π` with big-integer fixed point.
///
/// φ is an f64 and hence an exact dyadic rational; 2π is taken from 100
/// decimal digits. Residues are kept as `u128` scaled by `2^120`.
pub struct OrbitOracle {
    two_pi: u128,
    residues: Vec<u128>,
}

fn f64_to_fixed(x: f64, scale_bits: u32) -> BigUint {
    assert!(x >= 0.0 && x.is_finite());
    if x == 0.0 {
        return BigUint::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let (mant, e) = if exp == 0 { (bits & ((1 << 52) - 1), -1074) } else { ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075) };
    let shift = scale_bits as i32 + e;
    let m = BigUint::from(mant);
    if shift >= 0 {
        m << shift as u32
    } else {
        m >> (-shift) as u32
    }
}

impl OrbitOracle {
    pub fn new(phi: f64, k_max: u64) -> OrbitOracle {
        let extra = 64;
        let scale = SCALE_BITS + extra;
        let digits: BigUint = TWO_PI_DIGITS.parse().unwrap();
        let two_pi_big = (digits << scale) / BigUint::from(10u32).pow(TWO_PI_DECIMALS);
        let phi_big = f64_to_fixed(phi, scale);
        let mut residues = Vec::with_capacity(k_max as usize + 1);
        residues.push(0);
        for k in 1..=k_max {
            let r = (&phi_big * BigUint::from(k)) % &two_pi_big;
            residues.push((r >> extra).to_u128().unwrap());
        }
        OrbitOracle { two_pi: (two_pi_big >> extra).to_u128().unwrap(), residues }
    }

    pub fn to_fixed(&self, x: f64) -> u128 {
        f64_to_fixed(x, SCALE_BITS).to_u128().unwrap()
    }

    pub fn to_f64(&self, v: u128) -> f64 {
        v as f64 / 2f64.powi(SCALE_BITS as i32)
    }

    /// `θ mod 2π` in fixed point, for any finite θ.
    pub fn reduce(&self, theta: f64) -> u128 {
        let r = self.to_fixed(theta.abs()) % self.two_pi;
        if theta < 0.0 && r != 0 {
            self.two_pi - r
        } else {
            r
        }
    }

    fn gap(&self, a: u128, b: u128) -> u128 {
        let d = a.abs_diff(b);
        d.min(self.two_pi - d)
    }

    /// Circular distance between `kφ` and θ, as f64.
    pub fn error(&self, k: u64, theta: f64) -> f64 {
        self.to_f64(self.gap(self.residues[k as usize], self.reduce(theta)))
    }

    /// `kφ mod 2π` as f64.
    pub fn residue(&self, k: u64) -> f64 {
        self.to_f64(self.residues[k as usize])
    }

    /// Smallest `k ≤ k_max` within `eps` of θ.
    pub fn minimal_k(&self, theta: f64, eps: f64, k_max: u64) -> Option<u64> {
        let t = self.reduce(theta);
        let e = self.to_fixed(eps);
        (1..=k_max.min(self.residues.len() as u64 - 1)).find(|&k| self.gap(self.residues[k as usize], t) <= e)
    }
}

/// Largest singular value of a small dense complex matrix, by power
/// iteration on `AᴴA`.
pub fn spectral_norm(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    let mut ata = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            ata[i][j] = (0..n).map(|k| a[k][i].conj() * a[k][j]).sum();
        }
    }
    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + i as f64 * 0.37, 0.1 * i as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| ata[i][j] * v[j]).sum()).collect();
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm / v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|x| x / norm).collect();
    }
    lambda.sqrt()
}

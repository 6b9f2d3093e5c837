#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Binary fixed-point scale of the exact oracle, about 120 decimal digits.
const SCALE_BITS: i64 = 400;

/// `(mantissa, exponent)` with `v = mantissa * 2^exponent` exactly.
fn decompose(v: f64) -> (BigInt, i64) {
    if v == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    (BigInt::from(sign) * BigInt::from(m), e)
}

/// `J_{a,0}(x, y)` from the defining series in exact rational arithmetic
/// (every f64 is a dyadic rational), rounded once at the end. Each term is
/// truncated to `SCALE_BITS` fractional bits, far below f64 resolution.
pub fn exact_biv_bessel(a: u32, x: f64, y: f64) -> f64 {
    let (mx, ex) = decompose(x);
    let (my, ey) = decompose(y);
    if mx.is_zero() {
        return if a == 0 { 1.0 } else { 0.0 };
    }
    let mut sum = BigInt::zero();
    let mut fact_j = BigInt::one();
    let mut fact_ja = BigInt::one();
    for k in 1..=a {
        fact_ja *= BigInt::from(k);
    }
    let mut px = num_traits::pow(mx.clone(), a as usize);
    let mut py = BigInt::one();
    let xy = (x * y).abs();
    for j in 0..2000u32 {
        if j > 0 {
            fact_j *= BigInt::from(j);
            fact_ja *= BigInt::from(j + a);
            px *= &mx;
            py *= &my;
        }
        let shift = SCALE_BITS + ex * (j + a) as i64 + ey * j as i64;
        let mut num = &px * &py;
        let mut den = &fact_j * &fact_ja;
        if shift >= 0 {
            num <<= shift as usize;
        } else {
            den <<= (-shift) as usize;
        }
        let term = num / den;
        let done = term.is_zero() && (j as f64) > xy.sqrt() + a as f64 + 2.0;
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        if done {
            break;
        }
    }
    // Split off low bits so the conversion stays in range and rounds once.
    let magnitude_bits = sum.abs().bits() as i64;
    let drop = (magnitude_bits - 60).max(0);
    let top = (&sum >> drop as usize).to_f64().unwrap();
    top * 2f64.powi((drop - SCALE_BITS) as i32)
}

/// Classical Bessel `J_n(z)` from `(1/pi) int_0^pi cos(n tau - z sin tau)`,
/// by the trapezoid rule, which converges geometrically for periodic
/// analytic integrands.
pub fn bessel_j_integral(n: u32, z: f64) -> f64 {
    let m = 4096;
    let h = std::f64::consts::PI / m as f64;
    let f = |t: f64| (n as f64 * t - z * t.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(std::f64::consts::PI));
    for k in 1..m {
        s += f(k as f64 * h);
    }
    s * h / std::f64::consts::PI
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

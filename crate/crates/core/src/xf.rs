//! Extended-exponent floating point.
//!
//! Boundary sweeps put most of the integral mass at distances far below the
//! smallest normal `f64`, so intermediate quantities carry a separate `i64`
//! binary exponent. The mantissa is kept in `[0.5, 1)` (or exactly zero).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

const LN2: f64 = std::f64::consts::LN_2;
// ln 2 split so that k * LN2_HI is exact for |k| < 2^20.
const LN2_HI: f64 = 0.693_147_180_369_123_8;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// Beyond this magnitude of `ln|x|` values are treated as zero or infinite.
const LN_LIMIT: f64 = 1.0e15;

#[derive(Clone, Copy, PartialEq)]
pub struct Xf {
    m: f64,
    e: i64,
}

impl fmt::Debug for Xf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0.0 || !self.m.is_finite() {
            return write!(f, "{}", self.m);
        }
        let l10 = self.ln() / std::f64::consts::LN_10;
        let ex = l10.floor();
        let sig = self.m.signum() * 10f64.powf(l10 - ex);
        write!(f, "{sig:.15}e{ex}")
    }
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let field = ((bits >> 52) & 0x7ff) as i64;
    if field == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, field - 1022)
}

/// `m * 2^e` with saturation.
fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    if e > 1100 {
        return m.signum() * f64::INFINITY;
    }
    if e < -1200 {
        return 0.0 * m.signum();
    }
    let mut e = e as i32;
    let mut x = m;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

impl Xf {
    pub const ZERO: Xf = Xf { m: 0.0, e: 0 };
    pub const ONE: Xf = Xf { m: 0.5, e: 1 };

    #[inline]
    fn norm(m: f64, e: i64) -> Xf {
        if m == 0.0 {
            return Xf::ZERO;
        }
        if !m.is_finite() {
            return Xf { m, e: 0 };
        }
        let (mm, de) = frexp(m);
        Xf { m: mm, e: e + de }
    }

    pub fn from_f64(x: f64) -> Xf {
        Xf::norm(x, 0)
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.m, self.e)
    }

    /// `exp(y)` without intermediate overflow.
    pub fn exp(y: f64) -> Xf {
        if y.is_nan() {
            return Xf { m: f64::NAN, e: 0 };
        }
        if y < -LN_LIMIT {
            return Xf::ZERO;
        }
        if y > LN_LIMIT {
            return Xf { m: f64::INFINITY, e: 0 };
        }
        let k = (y / LN2).floor();
        let r = (y - k * LN2_HI) - k * LN2_LO;
        Xf::norm(r.exp(), k as i64)
    }

    /// Natural log of `|self|`.
    pub fn ln(self) -> f64 {
        if self.m == 0.0 {
            return f64::NEG_INFINITY;
        }
        if !self.m.is_finite() {
            return self.m.abs().ln();
        }
        self.m.abs().ln() + self.e as f64 * LN2
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.m.is_finite()
    }

    pub fn signum(self) -> f64 {
        if self.m == 0.0 {
            0.0
        } else {
            self.m.signum()
        }
    }

    pub fn abs(self) -> Xf {
        Xf { m: self.m.abs(), e: self.e }
    }

    pub fn scale(self, c: f64) -> Xf {
        Xf::norm(self.m * c, self.e)
    }

    /// `self^a`. Negative bases are accepted only for integral `a`.
    pub fn powf(self, a: f64) -> Xf {
        if a == 0.0 {
            return Xf::ONE;
        }
        if self.m == 0.0 {
            return if a > 0.0 {
                Xf::ZERO
            } else {
                Xf { m: f64::INFINITY, e: 0 }
            };
        }
        if !self.m.is_finite() {
            return Xf::from_f64(self.m.powf(a));
        }
        let sign = if self.m < 0.0 {
            if a.fract() != 0.0 {
                return Xf { m: f64::NAN, e: 0 };
            }
            if (a as i64) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            1.0
        };
        let t = self.e as f64 * a;
        if t.abs() > LN_LIMIT {
            return if t < 0.0 {
                Xf::ZERO
            } else {
                Xf { m: f64::INFINITY, e: 0 }
            };
        }
        let k = t.floor();
        let frac = t - k;
        let mant = self.m.abs().powf(a) * frac.exp2();
        Xf::norm(sign * mant, k as i64)
    }

    pub fn powi(self, n: i32) -> Xf {
        self.powf(n as f64)
    }

    pub fn max_abs(self, other: Xf) -> Xf {
        if self.abs() >= other.abs() {
            self.abs()
        } else {
            other.abs()
        }
    }
}

impl From<f64> for Xf {
    fn from(x: f64) -> Xf {
        Xf::from_f64(x)
    }
}

impl Neg for Xf {
    type Output = Xf;
    fn neg(self) -> Xf {
        Xf { m: -self.m, e: self.e }
    }
}

impl Mul for Xf {
    type Output = Xf;
    #[inline]
    fn mul(self, o: Xf) -> Xf {
        Xf::norm(self.m * o.m, self.e + o.e)
    }
}

impl MulAssign for Xf {
    fn mul_assign(&mut self, o: Xf) {
        *self = *self * o;
    }
}

impl Div for Xf {
    type Output = Xf;
    #[inline]
    fn div(self, o: Xf) -> Xf {
        Xf::norm(self.m / o.m, self.e - o.e)
    }
}

impl Add for Xf {
    type Output = Xf;
    #[inline]
    fn add(self, o: Xf) -> Xf {
        if o.m == 0.0 {
            return self;
        }
        if self.m == 0.0 {
            return o;
        }
        if !self.m.is_finite() || !o.m.is_finite() {
            return Xf::from_f64(self.m + o.m);
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let de = hi.e - lo.e;
        if de > 64 {
            return hi;
        }
        Xf::norm(hi.m + lo.m * 2f64.powi(-(de as i32)), hi.e)
    }
}

impl AddAssign for Xf {
    fn add_assign(&mut self, o: Xf) {
        *self = *self + o;
    }
}

impl Sub for Xf {
    type Output = Xf;
    fn sub(self, o: Xf) -> Xf {
        self + (-o)
    }
}

impl PartialOrd for Xf {
    fn partial_cmp(&self, o: &Xf) -> Option<Ordering> {
        if !self.m.is_finite() || !o.m.is_finite() || self.m == 0.0 || o.m == 0.0 {
            return self.m.partial_cmp(&o.m);
        }
        let (sa, sb) = (self.m.signum(), o.m.signum());
        if sa != sb {
            return sa.partial_cmp(&sb);
        }
        let mag = self.e.cmp(&o.e).then(self.m.abs().total_cmp(&o.m.abs()));
        Some(if sa > 0.0 { mag } else { mag.reverse() })
    }
}

impl std::iter::Sum for Xf {
    fn sum<I: Iterator<Item = Xf>>(iter: I) -> Xf {
        iter.fold(Xf::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for x in [1.0, -3.5, 1e-310, 7e300, 0.0, 0.1] {
            assert_eq!(Xf::from(x).to_f64(), x);
        }
    }

    #[test]
    fn tiny_products_survive() {
        let t = Xf::exp(-5000.0);
        let u = t * Xf::exp(4990.0);
        assert!((u.to_f64() / (-10f64).exp() - 1.0).abs() < 1e-12);
        assert!((t.ln() + 5000.0).abs() < 1e-9);
    }

    #[test]
    fn pow_and_order() {
        let x = Xf::exp(-2000.0).powf(0.25);
        assert!((x.ln() + 500.0).abs() < 1e-10);
        assert!(Xf::from(-2.0) < Xf::from(1e-300));
        assert!(Xf::exp(-900.0) < Xf::exp(-800.0));
        assert_eq!(Xf::from(-2.0).powf(3.0).to_f64(), -8.0);
        assert!((Xf::from(3.0) - Xf::from(1.0)).to_f64() == 2.0);
    }
}

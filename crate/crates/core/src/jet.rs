//! Truncated Taylor series (jets) over [`Xf`].
//!
//! Coefficient `c[k]` is `f^(k)(r0) / k!`. Arithmetic follows the usual
//! recurrences, so derivatives of closed-form profiles are exact up to
//! rounding without finite differences.

use crate::xf::Xf;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order carried.
pub const MAX_ORDER: usize = 8;
const CAP: usize = MAX_ORDER + 1;

#[derive(Clone, Copy, Debug)]
pub struct Jet {
    c: [Xf; CAP],
    len: usize,
}

impl Jet {
    /// Constant `v` with `order + 1` coefficients.
    pub fn constant(v: Xf, order: usize) -> Jet {
        let mut c = [Xf::ZERO; CAP];
        c[0] = v;
        Jet { c, len: order.min(MAX_ORDER) + 1 }
    }

    /// The independent variable at `x0`.
    pub fn variable(x0: Xf, order: usize) -> Jet {
        let mut j = Jet::constant(x0, order);
        if j.len > 1 {
            j.c[1] = Xf::ONE;
        }
        j
    }

    pub fn from_coeffs(coeffs: &[Xf]) -> Jet {
        assert!(!coeffs.is_empty() && coeffs.len() <= CAP);
        let mut c = [Xf::ZERO; CAP];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Jet { c, len: coeffs.len() }
    }

    pub fn order(&self) -> usize {
        self.len - 1
    }

    pub fn coeffs(&self) -> &[Xf] {
        &self.c[..self.len]
    }

    pub fn value(&self) -> Xf {
        self.c[0]
    }

    pub fn with_value(mut self, v: Xf) -> Jet {
        self.c[0] = v;
        self
    }

    /// The `j`-th derivative at the expansion point.
    pub fn deriv(&self, j: usize) -> Xf {
        if j >= self.len {
            return Xf::ZERO;
        }
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.c[j].scale(fact)
    }

    pub fn truncate(mut self, order: usize) -> Jet {
        let n = (order + 1).min(self.len);
        for k in n..self.len {
            self.c[k] = Xf::ZERO;
        }
        self.len = n;
        self
    }

    /// Derivative jet, one order shorter.
    pub fn derivative(&self) -> Jet {
        if self.len == 1 {
            return Jet::constant(Xf::ZERO, 0);
        }
        let mut c = [Xf::ZERO; CAP];
        for k in 0..self.len - 1 {
            c[k] = self.c[k + 1].scale((k + 1) as f64);
        }
        Jet { c, len: self.len - 1 }
    }

    pub fn scale(mut self, s: f64) -> Jet {
        let s = Xf::from(s);
        for k in 0..self.len {
            self.c[k] *= s;
        }
        self
    }

    pub fn scale_xf(mut self, s: Xf) -> Jet {
        for k in 0..self.len {
            self.c[k] *= s;
        }
        self
    }

    pub fn add_const(mut self, s: f64) -> Jet {
        self.c[0] += Xf::from(s);
        self
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(Xf::ONE, self.order()) / *self
    }

    /// `self^a`; the constant term must be nonzero unless `a` is a
    /// nonnegative integer.
    pub fn powf(&self, a: f64) -> Jet {
        let g0 = self.c[0];
        if g0.is_zero() && a.fract() == 0.0 && a >= 0.0 {
            let mut out = Jet::constant(Xf::ONE, self.order());
            for _ in 0..a as usize {
                out = out * *self;
            }
            return out;
        }
        let mut f = [Xf::ZERO; CAP];
        f[0] = g0.powf(a);
        for k in 1..self.len {
            let mut s = Xf::ZERO;
            for j in 1..=k {
                let w = (a + 1.0) * j as f64 - k as f64;
                if w != 0.0 {
                    s += (self.c[j] * f[k - j]).scale(w);
                }
            }
            f[k] = s / g0.scale(k as f64);
        }
        Jet { c: f, len: self.len }
    }

    pub fn sqr(&self) -> Jet {
        *self * *self
    }

    pub fn exp(&self) -> Jet {
        let mut f = [Xf::ZERO; CAP];
        f[0] = Xf::exp(self.c[0].to_f64());
        for k in 1..self.len {
            let mut s = Xf::ZERO;
            for j in 1..=k {
                s += (self.c[j] * f[k - j]).scale(j as f64);
            }
            f[k] = s.scale(1.0 / k as f64);
        }
        Jet { c: f, len: self.len }
    }

    /// Logarithm of a positive jet; the constant term is taken from
    /// `ln0` when supplied (an accurately known `ln g0`).
    pub fn ln_with(&self, ln0: Option<f64>) -> Jet {
        let g0 = self.c[0];
        let mut f = [Xf::ZERO; CAP];
        f[0] = Xf::from(ln0.unwrap_or_else(|| g0.ln()));
        for k in 1..self.len {
            let mut s = Xf::ZERO;
            for j in 1..k {
                s += (f[j] * self.c[k - j]).scale(j as f64);
            }
            f[k] = (self.c[k] - s.scale(1.0 / k as f64)) / g0;
        }
        Jet { c: f, len: self.len }
    }

    pub fn ln(&self) -> Jet {
        self.ln_with(None)
    }

    /// Taylor polynomial evaluated at offset `h`.
    pub fn eval_at(&self, h: f64) -> Xf {
        let hx = Xf::from(h);
        self.coeffs().iter().rev().fold(Xf::ZERO, |acc, &c| acc * hx + c)
    }
}

fn common(a: &Jet, b: &Jet) -> usize {
    a.len.min(b.len)
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        let n = common(&self, &o);
        for k in 0..n {
            self.c[k] += o.c[k];
        }
        self.len = n;
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for k in 0..self.len {
            self.c[k] = -self.c[k];
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let n = common(&self, &o);
        let mut c = [Xf::ZERO; CAP];
        for k in 0..n {
            let mut s = Xf::ZERO;
            for i in 0..=k {
                s += self.c[i] * o.c[k - i];
            }
            c[k] = s;
        }
        Jet { c, len: n }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let n = common(&self, &o);
        let b0 = o.c[0];
        let mut q = [Xf::ZERO; CAP];
        for k in 0..n {
            let mut s = self.c[k];
            for i in 1..=k {
                s = s - o.c[i] * q[k - i];
            }
            q[k] = s / b0;
        }
        Jet { c: q, len: n }
    }
}

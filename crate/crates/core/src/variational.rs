//! Finite-element minimization of radial quotients and the regularized
//! eigenvalue problem with the potential `1/(r²(1 − r^γ)²)`.

use crate::constants::{Form, InequalityParams};
use crate::error::{HardyError, Result};
use crate::functionals::layout;
use crate::quadrature::WeightSpec;
use crate::radial::{boundary_test_function, origin_test_function, RadialPoint, RadialProfile};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Geometric grading ratio toward both ends.
pub const GRADING: f64 = 0.8;
/// Width of the shell (and ball) used for the concentration fraction,
/// relative to `R`.
pub const CONCENTRATION_WIDTH: f64 = 1e-2;
/// Nodes required inside each regularization layer.
pub const MIN_LAYER_NODES: usize = 8;

/// Nodes of a graded mesh on `[0, R]`, each known both by `r` and by the
/// distance `d = R − r`, so that layers far below `f64` resolution of `R`
/// are represented exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub radius: f64,
    pub r: Vec<f64>,
    pub d: Vec<f64>,
}

impl Mesh {
    /// `n` elements: `n/4` geometric ones at each end, uniform in between.
    pub fn graded(n: usize, radius: f64) -> Result<Mesh> {
        if n < 64 {
            return Err(HardyError::MeshTooCoarse(format!("mesh_n = {n} < 64")));
        }
        let m = n / 4;
        let mid = n - 2 * m;
        let rho = Self::grading(n);
        let geo_len = (1.0 - rho.powi(m as i32)) / (1.0 - rho);
        let h = radius / (mid as f64 + 2.0 * geo_len);
        // element sizes from the origin, smallest first
        let layer: Vec<f64> = (0..m).map(|k| h * rho.powi((m - k) as i32)).collect();
        let mut r = vec![0.0];
        for &s in layer.iter().chain(std::iter::repeat_n(&h, mid)) {
            r.push(r.last().unwrap() + s);
        }
        r.resize(n + 1, radius);
        let mut d: Vec<f64> = r.iter().map(|&x| radius - x).collect();
        // the outer layer is laid out from the sphere inward
        let mut dd = vec![0.0];
        for &s in &layer {
            dd.push(dd.last().unwrap() + s);
        }
        let n_nodes = n + 1;
        for (j, &dj) in dd.iter().enumerate() {
            d[n_nodes - 1 - j] = dj;
            r[n_nodes - 1 - j] = radius - dj;
        }
        Ok(Mesh { radius, r, d })
    }

    /// Layer ratio: `GRADING` up to 256 elements, then `GRADING^√(256/n)`
    /// so refinement sharpens the log-scale resolution of the layers
    /// rather than only deepening them.
    pub fn grading(n: usize) -> f64 {
        GRADING.powf((256.0 / n as f64).sqrt().min(1.0))
    }

    pub fn elements(&self) -> usize {
        self.r.len() - 1
    }

    fn len(&self, e: usize) -> f64 {
        if self.outer_half(e) {
            self.d[e] - self.d[e + 1]
        } else {
            self.r[e + 1] - self.r[e]
        }
    }

    fn outer_half(&self, e: usize) -> bool {
        self.d[e] < 0.5 * self.radius
    }

    fn point_at(&self, i: usize) -> RadialPoint {
        if self.d[i] < 0.5 * self.radius {
            RadialPoint::from_d(self.d[i] / self.radius, self.radius)
        } else {
            RadialPoint::from_r(self.r[i], self.radius)
        }
    }

    /// Point at offset `x` from the left node of element `e` (or `x` from
    /// the right node when `from_right`).
    fn point(&self, e: usize, x: f64, from_right: bool) -> RadialPoint {
        let rad = self.radius;
        match (self.outer_half(e), from_right) {
            (true, false) => RadialPoint::from_d((self.d[e] - x) / rad, rad),
            (true, true) => RadialPoint::from_d((self.d[e + 1] + x) / rad, rad),
            (false, false) => RadialPoint::from_r(self.r[e] + x, rad),
            (false, true) => RadialPoint::from_r(self.r[e + 1] - x, rad),
        }
    }

    fn midpoint_in_layer(&self, e: usize, width: f64) -> bool {
        let rm = 0.5 * (self.r[e] + self.r[e + 1]);
        let dm = 0.5 * (self.d[e] + self.d[e + 1]);
        rm < width || dm < width
    }
}

/// Tanh-sinh nodes on an element: `(offset from the nearer node, which
/// node, ln φ_left, ln φ_right, weight)`.
fn element_nodes(h: f64, end: bool) -> Vec<(f64, bool, f64, f64, f64)> {
    let (tmax, step) = if end { (6.0, 0.125) } else { (3.5, 0.25) };
    let half = 0.5 * h;
    let n = (tmax / step) as i64;
    (-n..=n)
        .filter_map(|i| {
            let t = i as f64 * step;
            let u = FRAC_PI_2 * t.sinh();
            let w = step * half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            let x = h / (1.0 + (2.0 * u.abs()).exp());
            if w == 0.0 || x == 0.0 {
                return None;
            }
            let right = t > 0.0;
            let (near, far) = ((x / h).ln(), (-x / h).ln_1p());
            let (ln_l, ln_r) = if right { (near, far) } else { (far, near) };
            Some((x, right, ln_l, ln_r, w))
        })
        .collect()
}

/// Per-element data of a discretized quotient.
struct Assembly {
    mesh: Mesh,
    /// `∫_e W₁ dr / h_e^p`.
    stiff: Vec<f64>,
    /// Quadrature of `W₀` on each element: `(ln φ_left, ln φ_right,
    /// ln weight)`; logs keep `W₀ φ^p` finite next to singular ends.
    mass: Vec<Vec<(f64, f64, f64)>>,
    /// Nodes held at zero.
    frozen: Vec<bool>,
    p: f64,
}

impl Assembly {
    /// `ends` lists which boundary nodes must vanish: `[origin node,
    /// second node, last free node]` beyond the always-fixed sphere node.
    fn build(
        mesh: Mesh,
        p: f64,
        ends: [bool; 3],
        ln_w0: impl Fn(&RadialPoint) -> f64,
        ln_w1: impl Fn(&RadialPoint) -> f64,
    ) -> Result<Assembly> {
        let ne = mesh.elements();
        let mut frozen = vec![false; ne + 1];
        frozen[ne] = true;
        frozen[0] = ends[0];
        frozen[1] = ends[1];
        frozen[ne - 1] = ends[2];
        let mut stiff = Vec::with_capacity(ne);
        let mut mass = Vec::with_capacity(ne);
        for e in 0..ne {
            if frozen[e] && frozen[e + 1] {
                stiff.push(0.0);
                mass.push(Vec::new());
                continue;
            }
            let h = mesh.len(e);
            let end = e == 0 || e == ne - 1;
            let mut k = 0.0;
            let mut q = Vec::new();
            for (x, right, ln_l, ln_r, w) in element_nodes(h, end) {
                let pt = mesh.point(e, x, right);
                k += (w.ln() + ln_w1(&pt)).exp();
                q.push((ln_l, ln_r, w.ln() + ln_w0(&pt)));
            }
            if !(k.is_finite() && q.iter().all(|&(_, _, w)| !w.is_nan() && w < f64::INFINITY)) {
                return Err(HardyError::Invalid(format!("weight not integrable on element {e} near r = {}", mesh.r[e])));
            }
            stiff.push(k / h.powf(p));
            mass.push(q);
        }
        Ok(Assembly { mesh, stiff, mass, frozen, p })
    }

    fn numerator(&self, u: &[f64]) -> f64 {
        self.stiff.iter().enumerate().map(|(e, k)| k * (u[e + 1] - u[e]).abs().powf(self.p)).sum()
    }

    fn denominator(&self, u: &[f64]) -> f64 {
        (0..self.mass.len()).map(|e| self.element_mass(u, e)).sum()
    }

    /// `ln |u|` at a quadrature node of element `e`.
    fn ln_interp(u: &[f64], e: usize, ln_l: f64, ln_r: f64) -> f64 {
        let (a, b) = (u[e], u[e + 1]);
        if b == 0.0 {
            a.abs().ln() + ln_l
        } else if a == 0.0 {
            b.abs().ln() + ln_r
        } else {
            (a * ln_l.exp() + b * ln_r.exp()).abs().ln()
        }
    }

    fn element_mass(&self, u: &[f64], e: usize) -> f64 {
        self.mass[e].iter().map(|&(ln_l, ln_r, lw)| (lw + self.p * Self::ln_interp(u, e, ln_l, ln_r)).exp()).sum()
    }

    fn quotient(&self, u: &[f64]) -> f64 {
        self.numerator(u) / self.denominator(u)
    }

    fn concentration(&self, u: &[f64]) -> f64 {
        let width = CONCENTRATION_WIDTH * self.mesh.radius;
        let (mut inside, mut total) = (0.0, 0.0);
        for e in 0..self.mesh.elements() {
            let m = self.element_mass(u, e);
            total += m;
            if self.mesh.midpoint_in_layer(e, width) {
                inside += m;
            }
        }
        if total > 0.0 {
            inside / total
        } else {
            0.0
        }
    }

    /// Tridiagonal stiffness and mass matrices for `p = 2`:
    /// `(diag, off)` each.
    fn tridiagonal(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        self.linearized(None)
    }

    /// Quadratic forms whose Rayleigh quotient agrees with the `p`-quotient
    /// at `u`: element factors `|Δu|^{p−2}` and `|u|^{p−2}` frozen at `u`,
    /// floored at `10⁻³⁰` of their maxima.
    fn linearized(&self, u: Option<&[f64]>) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.mesh.r.len();
        let (mut kd, mut ko, mut md, mut mo) = (vec![0.0; n], vec![0.0; n - 1], vec![0.0; n], vec![0.0; n - 1]);
        let q = self.p - 2.0;
        let (dmax, umax) = u.map_or((1.0, 1.0), |u| {
            let dmax = u.windows(2).fold(0.0f64, |a, w| a.max((w[1] - w[0]).abs()));
            (dmax, u.iter().fold(0.0f64, |a, v| a.max(v.abs())))
        });
        let ln_floor = (1e-30 * umax).ln();
        for e in 0..n - 1 {
            let k = match u {
                Some(u) => self.stiff[e] * (u[e + 1] - u[e]).abs().max(1e-30 * dmax).powf(q),
                None => self.stiff[e],
            };
            kd[e] += k;
            kd[e + 1] += k;
            ko[e] -= k;
            for &(ln_l, ln_r, lw) in &self.mass[e] {
                let lw = match u {
                    Some(u) => lw + q * Self::ln_interp(u, e, ln_l, ln_r).max(ln_floor),
                    None => lw,
                };
                md[e] += (lw + 2.0 * ln_l).exp();
                md[e + 1] += (lw + 2.0 * ln_r).exp();
                mo[e] += (lw + ln_l + ln_r).exp();
            }
        }
        (kd, ko, md, mo)
    }

    /// Diagonal `∫ W₀ φᵢ^t` with `t = max(p, 2)`, finite whenever the
    /// quotient is: `φ ≤ 1`, and `φ^p` is what the frozen ends integrate.
    fn mass_scale(&self) -> Vec<f64> {
        let t = self.p.max(2.0);
        let n = self.mesh.r.len();
        let mut m = vec![0.0; n];
        for e in 0..n - 1 {
            for &(ln_l, ln_r, lw) in &self.mass[e] {
                m[e] += (lw + t * ln_l).exp();
                m[e + 1] += (lw + t * ln_r).exp();
            }
        }
        m
    }
}

/// Restriction of a symmetric tridiagonal pencil to the free nodes, with
/// Jacobi scaling by the mass diagonal.
struct Pencil {
    free: Vec<usize>,
    scale: Vec<f64>,
    kd: Vec<f64>,
    ko: Vec<f64>,
    md: Vec<f64>,
    mo: Vec<f64>,
}

impl Pencil {
    fn new(asm: &Assembly, (kd, ko, md, mo): (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)) -> Result<Pencil> {
        // nodes whose entries underflow sit at r ~ 1e-100: pinning them
        // costs a capacity far below rounding
        let free: Vec<usize> = (0..kd.len()).filter(|&i| !asm.frozen[i]).skip_while(|&i| !(md[i].is_normal() && kd[i].is_normal())).collect();
        if free.is_empty() {
            return Err(HardyError::MeshTooCoarse("no free nodes".into()));
        }
        // free nodes are contiguous: only the ends can be frozen
        let scale: Vec<f64> = free.iter().map(|&i| 1.0 / md[i].sqrt()).collect();
        let m = free.len();
        let pick = |v: &[f64]| -> Vec<f64> { free.iter().zip(&scale).map(|(&i, s)| v[i] * s * s).collect() };
        let pick_off = |v: &[f64]| -> Vec<f64> { (0..m - 1).map(|j| v[free[j]] * scale[j] * scale[j + 1]).collect() };
        Ok(Pencil { kd: pick(&kd), ko: pick_off(&ko), md: pick(&md), mo: pick_off(&mo), free, scale })
    }

    /// Number of eigenvalues below `sigma` (Sylvester inertia of `K − σM`).
    fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut prev = 1.0;
        for i in 0..self.kd.len() {
            let mut dgi = self.kd[i] - sigma * self.md[i];
            if i > 0 {
                let off = self.ko[i - 1] - sigma * self.mo[i - 1];
                // graded ends push the scaled entries past 1e150
                dgi -= off * (off / prev);
            }
            if dgi == 0.0 {
                dgi = -f64::EPSILON * (self.kd[i].abs() + sigma.abs());
            }
            if dgi < 0.0 {
                count += 1;
            }
            prev = dgi;
        }
        count
    }

    fn apply_m(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = self.md[i] * x[i];
                if i > 0 {
                    v += self.mo[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.mo[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    fn rayleigh(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let mut num = 0.0;
        for i in 0..n {
            num += self.kd[i] * x[i] * x[i];
            if i + 1 < n {
                num += 2.0 * self.ko[i] * x[i] * x[i + 1];
            }
        }
        let mx = self.apply_m(x);
        num / x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Solve `(K − σM) y = b` by the Thomas algorithm.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let diag: Vec<f64> = (0..n).map(|i| self.kd[i] - sigma * self.md[i]).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| self.ko[i] - sigma * self.mo[i]).collect();
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut den = diag[0];
        y[0] = b[0] / den;
        for i in 1..n {
            c[i - 1] = off[i - 1] / den;
            den = diag[i] - off[i - 1] * c[i - 1];
            y[i] = (b[i] - off[i - 1] * y[i - 1]) / den;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y
    }

    /// Smallest eigenvalue by bisection on the inertia count, then the
    /// eigenvector by inverse iteration from `start`; returns the
    /// eigenvalue, the vector in nodal values and the Rayleigh history.
    fn lowest(&self, start: &[f64], n_nodes: usize) -> (f64, Vec<f64>, Vec<f64>) {
        let mut x: Vec<f64> = self.free.iter().zip(&self.scale).map(|(&i, s)| start[i] / s).collect();
        if x.iter().all(|&v| v == 0.0) {
            x.iter_mut().for_each(|v| *v = 1.0);
        }
        let mut hi = self.rayleigh(&x);
        let mut lo = 0.0;
        while self.count_below(hi) == 0 && hi.is_finite() {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || (hi - lo) <= 1e-14 * hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        let shift = lo * (1.0 - 1e-10);
        let mut history = vec![self.rayleigh(&x)];
        for _ in 0..8 {
            let mut y = self.solve_shifted(shift, &self.apply_m(&x));
            let norm = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            y.iter_mut().for_each(|v| *v /= norm);
            x = y;
            let q = self.rayleigh(&x);
            history.push(q.min(*history.last().unwrap()));
        }
        let mut u = vec![0.0; n_nodes];
        for ((&i, s), v) in self.free.iter().zip(&self.scale).zip(&x) {
            u[i] = v * s;
        }
        let sign = if u.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        u.iter_mut().for_each(|v| *v *= sign);
        (lambda, u, history)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizationResult {
    pub form: String,
    pub infimum: f64,
    pub sharp_constant: f64,
    pub mesh_n: usize,
    /// Best quotient after each iteration; non-increasing.
    pub history: Vec<f64>,
    /// Share of the left-hand mass within `10⁻²R` of either end.
    pub concentration: f64,
    /// `(r, u(r))` at up to 257 nodes, normalized to `max |u| = 1`.
    pub samples: Vec<(f64, f64)>,
}

fn samples(mesh: &Mesh, u: &[f64]) -> Vec<(f64, f64)> {
    let max = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let step = (u.len() / 256).max(1);
    let mut out: Vec<(f64, f64)> = (0..u.len()).step_by(step).map(|i| (mesh.r[i], if max > 0.0 { u[i] / max } else { 0.0 })).collect();
    if !(u.len() - 1).is_multiple_of(step) {
        out.push((mesh.r[u.len() - 1], 0.0));
    }
    out
}

fn nodal(mesh: &Mesh, f: &RadialProfile) -> Vec<f64> {
    (0..mesh.r.len()).map(|i| f.jet_at(&mesh.point_at(i), 0).value().to_f64()).collect()
}

/// Initializer values held constant inside `r < 10⁻⁸ R`, so a profile
/// singular at the origin yields a finite start vector.
fn tamed(mesh: &Mesh, f: &RadialProfile) -> Vec<f64> {
    let mut u = nodal(mesh, f);
    let cut = mesh.r.iter().position(|&r| r >= 1e-8 * mesh.radius).unwrap_or(0);
    let held = u[cut];
    u[..cut].iter_mut().for_each(|v| *v = held);
    u
}

/// Whether `∫ r^a ln(R/r)^c` converges at the origin.
fn integrable_at_origin(a: f64, c: f64) -> bool {
    a > -1.0 || (a == -1.0 && c < -1.0)
}

/// End nodes forced to zero by non-integrable weights: the origin node when
/// either weight fails against a constant, the next node as well when the
/// gradient weight fails, and the last free node when the gradient weight
/// fails at the sphere (where `W₁ ~ d^{b+c}`).
fn frozen_ends(w0: &WeightSpec, w1: &WeightSpec, p: f64) -> [bool; 3] {
    let num_origin = integrable_at_origin(w1.a, w1.c);
    let den_origin = integrable_at_origin(w0.a, w0.c);
    let num_outer = w1.b + w1.c > -1.0;
    // φ vanishing linearly at a frozen node gives |u|^p ~ x^p
    let den_outer = w0.b + w0.c + p > -1.0;
    [!(num_origin && den_origin), !num_origin, !(num_outer && den_outer)]
}

/// Discrete infimum of a first-order quotient over piecewise-linear radial
/// functions on a graded mesh of `mesh_n` elements.
pub fn minimize_quotient(params: &InequalityParams, mesh_n: usize) -> Result<MinimizationResult> {
    let form = params.form();
    if !form.is_first_order() || matches!(form, Form::HardyRellichStep | Form::ImprovedHardyRellichStep) {
        return Err(HardyError::Unsupported(format!("{form}: only first-order quotients are discretized")));
    }
    let lay = layout(params);
    let (p, n, radius) = (params.p(), params.n(), params.radius());
    let shift = if lay.one_dim { 0.0 } else { n as f64 - 1.0 };
    let weight = |w: WeightSpec| WeightSpec { a: w.a + shift, ..w };
    let (w0, w1) = (weight(lay.den.weight), weight(lay.num.weight));
    let (c0, c1) = (lay.den.coef, lay.num.coef);
    let mesh = Mesh::graded(mesh_n, radius)?;
    let ends = frozen_ends(&w0, &w1, p);
    let (l0, l1) = (c0.ln(), c1.ln());
    let asm = Assembly::build(mesh, p, ends, |pt| l0 + w0.ln_weight(pt), |pt| l1 + w1.ln_weight(pt))?;

    // near-extremal initializers at either end; keep the better one
    let a0 = if params.beta() > 1.0 { (params.beta() - 1.0) / p + 0.05 } else { 0.55 };
    let gamma = if form.is_one_dim() || params.gamma() <= 0.0 { 1.0 } else { params.gamma() };
    let b0 = (params.nf() - params.alpha()) / p - 0.05;
    let mut start = tamed(&asm.mesh, &boundary_test_function(a0, 0.25, gamma, radius));
    let alt = tamed(&asm.mesh, &origin_test_function(b0, 0.25, radius));
    let freeze = |u: &mut Vec<f64>| u.iter_mut().zip(&asm.frozen).for_each(|(v, &f)| if f { *v = 0.0 });
    freeze(&mut start);
    let mut alt = alt;
    freeze(&mut alt);
    let (qs, qa) = (asm.quotient(&start), asm.quotient(&alt));
    if qa.is_finite() && (!qs.is_finite() || qa < qs) {
        start = alt;
    }

    let (infimum, u, history) = if (p - 2.0).abs() < 1e-15 {
        let pencil = Pencil::new(&asm, asm.tridiagonal())?;
        let (lambda, u, history) = pencil.lowest(&start, asm.mesh.r.len());
        (lambda, u, history)
    } else {
        let (start, mut history) = relinearize(&asm, start)?;
        let (q, u, tail) = descend(&asm, start);
        let floor = *history.last().unwrap();
        history.extend(tail.into_iter().skip(1).map(|t| t.min(floor)));
        (q.min(*history.last().unwrap()), u, history)
    };
    Ok(MinimizationResult {
        form: form.to_string(),
        infimum,
        sharp_constant: params.sharp_constant(),
        mesh_n,
        history,
        concentration: asm.concentration(&u),
        samples: samples(&asm.mesh, &u),
    })
}

/// Fixed-point iteration on the linearized pencil: each step takes the
/// lowest eigenvector of the quadratic forms frozen at the current iterate
/// and keeps it when the `p`-quotient drops.
fn relinearize(asm: &Assembly, start: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    const STEPS: usize = 40;
    let n = start.len();
    let mut best = start;
    let mut history = vec![asm.quotient(&best)];
    for _ in 0..STEPS {
        let pencil = Pencil::new(asm, asm.linearized(Some(&best)))?;
        let (_, v, _) = pencil.lowest(&best, n);
        let q = asm.quotient(&v);
        let last = *history.last().unwrap();
        if !(q < last) {
            break;
        }
        best = v;
        history.push(q);
        if last - q <= 1e-10 * q {
            break;
        }
    }
    Ok((best, history))
}

/// Gradient descent on the nodal values with Armijo backtracking, in
/// variables scaled by the mass diagonal; frozen nodes stay at zero.
fn descend(asm: &Assembly, start: Vec<f64>) -> (f64, Vec<f64>, Vec<f64>) {
    const ITERS: usize = 400;
    let p = asm.p;
    let n = start.len();
    let t = p.max(2.0);
    let s: Vec<f64> = asm.mass_scale().iter().map(|&m| if m.is_normal() { m.powf(1.0 / t) } else { 1.0 }).collect();
    let to_u = |v: &[f64]| -> Vec<f64> { v.iter().zip(&s).map(|(a, b)| a / b).collect() };
    let mut v: Vec<f64> = start.iter().zip(&s).map(|(a, b)| a * b).collect();
    let grad = |u: &[f64]| -> (f64, Vec<f64>) {
        let (num, den) = (asm.numerator(u), asm.denominator(u));
        let q = num / den;
        let mut g = vec![0.0; n];
        for e in 0..n - 1 {
            let dlt = u[e + 1] - u[e];
            let gn = p * asm.stiff[e] * dlt.abs().powf(p - 1.0) * dlt.signum();
            g[e] -= gn / den;
            g[e + 1] += gn / den;
            for &(ln_l, ln_r, lw) in &asm.mass[e] {
                let ln_v = Assembly::ln_interp(u, e, ln_l, ln_r);
                let sign = (u[e] * ln_l.exp() + u[e + 1] * ln_r.exp()).signum();
                let gd = p * sign;
                g[e] -= q * gd * (lw + (p - 1.0) * ln_v + ln_l).exp() / den;
                g[e + 1] -= q * gd * (lw + (p - 1.0) * ln_v + ln_r).exp() / den;
            }
        }
        (q, g)
    };
    let mut u = to_u(&v);
    let (mut q, mut g) = grad(&u);
    let mut history = vec![q];
    let mut step = 1e-2;
    for _ in 0..ITERS {
        // gradient in the scaled variables, projected onto the free nodes
        let gv: Vec<f64> = (0..n).map(|i| if asm.frozen[i] { 0.0 } else { g[i] / s[i] }).collect();
        let gnorm2: f64 = gv.iter().map(|x| x * x).sum();
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm2 == 0.0 || vnorm == 0.0 {
            break;
        }
        let dir_scale = vnorm / gnorm2.sqrt();
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = v.iter().zip(&gv).map(|(a, b)| a - step * dir_scale * b).collect();
            let ut = to_u(&trial);
            let qt = asm.quotient(&ut);
            if qt.is_finite() && qt <= q - 1e-4 * step * dir_scale * gnorm2 {
                v = trial;
                u = ut;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let (qn, gn) = grad(&u);
        let done = (q - qn) <= 1e-12 * q;
        q = qn;
        g = gn;
        history.push(q.min(*history.last().unwrap()));
        step = (step * 2.0).min(1.0);
        if done {
            break;
        }
    }
    (*history.last().unwrap(), u, history)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElSolution {
    pub gamma: f64,
    pub n: u32,
    pub epsilon: f64,
    pub mesh_n: usize,
    pub lambda: f64,
    /// Share of the potential-weighted mass within `10⁻²` of either end.
    pub concentration: f64,
}

/// Lowest eigenvalue of `−Δu = λ V_ε u` on the unit ball with `u = 0` on
/// the sphere, where `V = 1/(r²(1 − r^γ)²)` is frozen outside
/// `[ε, 1 − ε]`.
pub fn solve_el_eigenproblem(gamma: f64, n: u32, epsilon: f64, mesh_n: usize) -> Result<f64> {
    Ok(el_eigenpair(gamma, n, epsilon, mesh_n)?.lambda)
}

pub fn el_eigenpair(gamma: f64, n: u32, epsilon: f64, mesh_n: usize) -> Result<ElSolution> {
    let nf = n as f64;
    if !(gamma > 0.0 && gamma <= nf - 2.0) {
        return Err(HardyError::Inadmissible { form: "el".into(), hypothesis: "0 < γ ≤ N − 2".into() });
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(HardyError::Inadmissible { form: "el".into(), hypothesis: "0 < ε < 1/4".into() });
    }
    let mesh = Mesh::graded(mesh_n, 1.0)?;
    let inner = mesh.r.iter().filter(|&&r| r > 0.0 && r < epsilon).count();
    let outer = mesh.d.iter().filter(|&&d| d > 0.0 && d < epsilon).count();
    if inner.min(outer) < MIN_LAYER_NODES {
        return Err(HardyError::MeshTooCoarse(format!(
            "{} nodes inside the ε = {epsilon} layer, {MIN_LAYER_NODES} required",
            inner.min(outer)
        )));
    }
    let lo = RadialPoint::from_r(epsilon, 1.0);
    let hi = RadialPoint::from_d(epsilon, 1.0);
    let ln_v = |pt: &RadialPoint| -2.0 * pt.ln_r() - 2.0 * pt.ln_gap(gamma);
    let (v_lo, v_hi) = (ln_v(&lo), ln_v(&hi));
    let potential = move |pt: &RadialPoint| {
        if pt.ln_rel < lo.ln_rel {
            v_lo
        } else if pt.ln_d < hi.ln_d {
            v_hi
        } else {
            ln_v(pt)
        }
    };
    let asm = Assembly::build(mesh, 2.0, [false; 3], |pt| (nf - 1.0) * pt.ln_r() + potential(pt), |pt| (nf - 1.0) * pt.ln_r())?;
    let start = nodal(&asm.mesh, &boundary_test_function(0.55, 0.25, gamma, 1.0));
    let pencil = Pencil::new(&asm, asm.tridiagonal())?;
    let (lambda, u, _) = pencil.lowest(&start, asm.mesh.r.len());
    Ok(ElSolution { gamma, n, epsilon, mesh_n, lambda, concentration: asm.concentration(&u) })
}

/// Limit of `λ₁(ε)` as `ε → 0` under the model
/// `λ₁(ε) = λ* + c / ln²(1/ε)`, from the two smallest `ε`.
pub fn extrapolate_el(points: &[(f64, f64)]) -> Result<f64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let [(e1, l1), (e2, l2)] = match pts.as_slice() {
        [a, b, ..] => [*a, *b],
        _ => return Err(HardyError::Invalid("extrapolation needs two points".into())),
    };
    let (x1, x2) = (e1.ln().powi(-2), e2.ln().powi(-2));
    Ok(l1 - (l2 - l1) / (x2 - x1) * x1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_is_graded_and_exact_at_the_ends() {
        let m = Mesh::graded(64, 2.0).unwrap();
        assert_eq!(m.r.len(), 65);
        assert_eq!((m.r[0], m.d[64]), (0.0, 0.0));
        assert!((m.r[32] + m.d[32] - 2.0).abs() < 1e-15);
        assert!(m.d[63] < 2e-3 && ((m.d[62] - m.d[63]) / m.d[63] - 1.0 / Mesh::grading(64)).abs() < 1e-12);
        assert!((1..65).all(|i| m.r[i] > m.r[i - 1]));
        assert!(Mesh::graded(32, 1.0).is_err());
    }

    #[test]
    fn extrapolation_recovers_model() {
        let f = |e: f64| 0.25 + 3.0 / e.ln().powi(2);
        let l = extrapolate_el(&[(1e-2, f(1e-2)), (1e-3, f(1e-3))]).unwrap();
        assert!((l - 0.25).abs() < 1e-12);
    }
}

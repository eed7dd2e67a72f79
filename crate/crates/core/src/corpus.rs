//! Seeded test corpus. Every generator draws from its own ChaCha stream,
//! so adding cases to one family never shifts another.

use crate::radial::{bump, cap, RadialProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy)]
enum Stream {
    Bumps = 1,
    Caps,
    Grid,
    Triples,
}

fn rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream as u64);
    r
}

/// Parameters of a smooth compactly supported bump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BumpSpec {
    pub lo: f64,
    pub hi: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BumpSpec {
    pub fn profile(&self, radius: f64) -> RadialProfile {
        bump(self.lo * radius, self.hi * radius, self.c1, self.c2, radius)
    }
}

/// Bumps with support inside `(0.02R, 0.98R)`, at least `0.1R` wide. The
/// polynomial factor stays positive on the support.
pub fn bumps(seed: u64, count: usize) -> Vec<BumpSpec> {
    let mut r = rng(seed, Stream::Bumps);
    (0..count)
        .map(|_| {
            let lo = r.random_range(0.02..0.8);
            let hi = r.random_range(lo + 0.1..0.98);
            BumpSpec { lo, hi, c1: r.random_range(-0.4..0.4), c2: r.random_range(-0.3..0.3) }
        })
        .collect()
}

/// `(1 − r²)^K (1 + c r²)` with `K ∈ [2, 4]`, `c ∈ (−0.5, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapSpec {
    pub k: f64,
    pub c: f64,
}

impl CapSpec {
    pub fn profile(&self, radius: f64) -> RadialProfile {
        cap(self.k, self.c, radius)
    }
}

pub fn caps(seed: u64, count: usize) -> Vec<CapSpec> {
    let mut r = rng(seed, Stream::Caps);
    (0..count).map(|_| CapSpec { k: r.random_range(2.0..4.0), c: r.random_range(-0.5..1.0) }).collect()
}

/// An improved Hardy parameter point `(N, α, β, γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl GridPoint {
    pub fn is_critical(&self) -> bool {
        self.alpha == self.n as f64 - (self.beta - 1.0) * self.gamma
    }
}

/// Admissible improved Hardy points: `α = N − (β−1)γ − t` with `t = 0`
/// (the critical line) on every third point.
pub fn ih_grid(seed: u64, count: usize) -> Vec<GridPoint> {
    let mut r = rng(seed, Stream::Grid);
    (0..count)
        .map(|i| {
            let n = r.random_range(2..=6);
            let beta = r.random_range(1.2..3.5);
            let gamma = r.random_range(0.3..2.5);
            let t = if i % 3 == 0 { 0.0 } else { r.random_range(0.1..2.0) };
            GridPoint { n, alpha: n as f64 - (beta - 1.0) * gamma - t, beta, gamma }
        })
        .collect()
}

/// `(A, γ, N)` for the derivative expansion of `(1 − r^γ)^A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Triple {
    pub a: f64,
    pub gamma: f64,
    pub n: u32,
}

pub fn triples(seed: u64, count: usize) -> Vec<Triple> {
    let mut r = rng(seed, Stream::Triples);
    (0..count)
        .map(|_| Triple { a: r.random_range(0.5..6.0), gamma: r.random_range(0.3..3.0), n: r.random_range(2..=9) })
        .collect()
}

//! Split products of multilinear factors, kept as exponent maps over
//! canonical factor keys.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::cyclotomic::{Cyclotomic, CyclotomicRing};
use super::lattice::LatticePoint;
use crate::perms::Perm;
use crate::zmod::TreeFunc;

/// A multilinear factor, identified up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    /// `x_j - x_i`, stored with `i < j`.
    Vertex(usize, usize),
    /// `x_q·x_j - x_p·x_i` for edges `i -> p` and `j -> q`, stored as the
    /// ordered pairs `(p, i) < (q, j)`.
    Edge((usize, usize), (usize, usize)),
}

impl Factor {
    pub fn vertex(i: usize, j: usize) -> Self {
        assert_ne!(i, j, "vertex factor needs two distinct variables");
        Factor::Vertex(i.min(j), i.max(j))
    }

    /// Edge factor for `(f(i), i)` and `(f(j), j)`.
    pub fn edge(a: (usize, usize), b: (usize, usize)) -> Self {
        assert_ne!(a, b, "edge factor needs two distinct edges");
        Factor::Edge(a.min(b), a.max(b))
    }

    /// Rename variable `v` to `σ(v)`.
    pub fn relabel(&self, sigma: &Perm) -> Self {
        match *self {
            Factor::Vertex(i, j) => Factor::vertex(sigma.apply(i), sigma.apply(j)),
            Factor::Edge((p, i), (q, j)) => Factor::edge(
                (sigma.apply(p), sigma.apply(i)),
                (sigma.apply(q), sigma.apply(j)),
            ),
        }
    }

    /// Largest variable index the factor mentions.
    pub fn max_var(&self) -> usize {
        match *self {
            Factor::Vertex(_, j) => j,
            Factor::Edge((p, i), (q, j)) => p.max(i).max(q).max(j),
        }
    }

    /// Vanishing at `x_v = ω^(a_v)`, decided by exponent congruence.
    #[inline]
    pub fn vanishes_at(&self, a: &[usize], n: usize) -> bool {
        match *self {
            Factor::Vertex(i, j) => a[i] == a[j],
            Factor::Edge((p, i), (q, j)) => (a[p] + a[i]) % n == (a[q] + a[j]) % n,
        }
    }

    /// Exact value at `x_v = ω^(a_v)`.
    pub fn eval(&self, ring: &Arc<CyclotomicRing>, a: &[usize]) -> Cyclotomic {
        let w = |e: usize| Cyclotomic::root_power(ring, e);
        match *self {
            Factor::Vertex(i, j) => &w(a[j]) - &w(a[i]),
            Factor::Edge((p, i), (q, j)) => &w(a[q] + a[j]) - &w(a[p] + a[i]),
        }
    }
}

/// `∏ P_i^(α_i)` as a map from factor to positive exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FactorMultiset {
    entries: BTreeMap<Factor, u32>,
}

impl FactorMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Factor, u32)>) -> Self {
        let mut m = Self::new();
        for (f, e) in entries {
            m.insert(f, e);
        }
        m
    }

    pub fn insert(&mut self, factor: Factor, exponent: u32) {
        if exponent > 0 {
            *self.entries.entry(factor).or_insert(0) += exponent;
        }
    }

    pub fn exponent(&self, factor: &Factor) -> u32 {
        self.entries.get(factor).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Factor, &u32)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Product: exponents add.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&f, &e) in &other.entries {
            out.insert(f, e);
        }
        out
    }

    /// Per-factor maximum exponent.
    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&f, &e) in &other.entries {
            let slot = out.entries.entry(f).or_insert(0);
            *slot = (*slot).max(e);
        }
        out
    }

    /// Per-factor minimum exponent; factors absent from either side drop out.
    pub fn gcd(&self, other: &Self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter_map(|(f, &e)| {
                    let m = e.min(other.exponent(f));
                    (m > 0).then_some((*f, m))
                })
                .collect(),
        }
    }

    pub fn relabel(&self, sigma: &Perm) -> Self {
        Self::from_entries(self.entries.iter().map(|(f, &e)| (f.relabel(sigma), e)))
    }

    pub fn vanishes_at(&self, a: &LatticePoint) -> bool {
        let n = a.n();
        self.entries.keys().any(|f| f.vanishes_at(a.exponents(), n))
    }

    /// Exact product at `x = ω^a`.
    pub fn eval(&self, ring: &Arc<CyclotomicRing>, a: &LatticePoint) -> Cyclotomic {
        let mut acc = Cyclotomic::one(ring);
        for (f, &e) in &self.entries {
            acc *= &f.eval(ring, a.exponents()).pow(e);
        }
        acc
    }
}

/// `∏_{i<j} (x_j - x_i)`.
pub fn vandermonde(n: usize) -> FactorMultiset {
    FactorMultiset::from_entries(
        (0..n).flat_map(|j| (0..j).map(move |i| (Factor::vertex(i, j), 1))),
    )
}

/// `∏_{i<j, i,j != root} (x_{f(j)} x_j - x_{f(i)} x_i)`.
pub fn edge_product(t: &TreeFunc) -> FactorMultiset {
    let nonroot: Vec<usize> = (0..t.n()).filter(|&i| i != t.root()).collect();
    let mut m = FactorMultiset::new();
    for (a, &i) in nonroot.iter().enumerate() {
        for &j in &nonroot[a + 1..] {
            m.insert(Factor::edge((t.apply(i), i), (t.apply(j), j)), 1);
        }
    }
    m
}

/// Factorization of `P_f`: both products over ordered pairs `i != j`, so
/// every factor appears squared (up to sign).
pub fn p_f_factors(t: &TreeFunc) -> FactorMultiset {
    let square = |m: FactorMultiset| FactorMultiset::from_entries(m.iter().map(|(f, &e)| (*f, 2 * e)));
    square(vandermonde(t.n())).product(&square(edge_product(t)))
}

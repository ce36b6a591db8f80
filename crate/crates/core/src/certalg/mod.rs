//! Polynomial certificates for labelings, evaluated exactly over the lattice
//! of `n`-th roots of unity.
//!
//! For a tree function `f` with root `r`,
//!
//! ```text
//! P_f(x) = ∏_{i≠j} (x_j - x_i) · ∏_{i≠j; i,j≠r} (x_{f(j)} x_j - x_{f(i)} x_i)
//! ```
//!
//! vanishes at `x = ω^a` iff two vertices share a label or two tree edges
//! share a sum. Nothing here expands a polynomial symbolically: every
//! identity is checked by exact evaluation in `Z[ω]`.

pub mod cyclotomic;
pub mod factors;
pub mod lattice;

use std::sync::Arc;

use serde::Serialize;

pub use cyclotomic::{cyclotomic_poly, Cyclotomic, CyclotomicRing};
pub use factors::{edge_product, p_f_factors, vandermonde, Factor, FactorMultiset};
pub use lattice::{canonical_rep_nonzero, LatticePoint, LatticeSearch, LATTICE_CAP, SCAN_CAP};

use crate::error::{Error, Result};
use crate::harmony::{max_harmony_search, Mode, Scope};
use crate::perms::{all_perms, automorphism_group, AutGroup, Perm};
use crate::zmod::TreeFunc;

/// Largest `n` for the `S_n` scan in [`stabilizer_of_p`].
pub const STABILIZER_CAP: usize = 8;
/// Largest `n` for [`telescoping_check`]; the expansion has `2^m - 1` terms
/// for `m = (n-1)(n-2)` ordered non-root pairs.
pub const TELESCOPE_CAP: usize = 5;

fn check_point(t: &TreeFunc, a: &LatticePoint) -> Result<()> {
    if t.n() != a.n() {
        return Err(Error::ModulusMismatch {
            left: t.n(),
            right: a.n(),
        });
    }
    Ok(())
}

fn nonroot_pairs(t: &TreeFunc) -> Vec<(usize, usize)> {
    let n = t.n();
    let r = t.root();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && i != r && j != r)
        .collect()
}

/// `∏_{i≠j} (x_j - x_i)` at `ω^a`.
fn vandermonde_ordered(ring: &Arc<CyclotomicRing>, a: &[usize]) -> Cyclotomic {
    let n = a.len();
    let w = |e: usize| Cyclotomic::root_power(ring, e);
    let mut acc = Cyclotomic::one(ring);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc *= &(&w(a[j]) - &w(a[i]));
            }
        }
    }
    acc
}

/// `P_f(ω^a)`, returning zero straight away when an exponent congruence
/// makes some factor vanish.
pub fn eval_p(t: &TreeFunc, a: &LatticePoint) -> Result<Cyclotomic> {
    check_point(t, a)?;
    let ring = CyclotomicRing::new(t.n());
    if p_f_vanishes(t, a) {
        return Ok(Cyclotomic::zero(&ring));
    }
    Ok(eval_p_product(t, a, &ring))
}

/// Congruence test: some vertex labels or non-root edge sums coincide.
pub fn p_f_vanishes(t: &TreeFunc, a: &LatticePoint) -> bool {
    let n = t.n();
    let e = a.exponents();
    let mut seen = vec![false; n];
    if e.iter().any(|&v| std::mem::replace(&mut seen[v], true)) {
        return true;
    }
    let mut seen = vec![false; n];
    (0..n)
        .filter(|&i| i != t.root())
        .any(|i| std::mem::replace(&mut seen[(e[t.apply(i)] + e[i]) % n], true))
}

/// `P_f(ω^a)` as the full product of its factors.
pub fn eval_p_product(t: &TreeFunc, a: &LatticePoint, ring: &Arc<CyclotomicRing>) -> Cyclotomic {
    let e = a.exponents();
    let w = |k: usize| Cyclotomic::root_power(ring, k);
    let mut acc = vandermonde_ordered(ring, e);
    for (i, j) in nonroot_pairs(t) {
        acc *= &(&w(e[t.apply(j)] + e[j]) - &w(e[t.apply(i)] + e[i]));
    }
    acc
}

/// Both sides of the determinantal certificate for one tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    /// The LCM of the vertex Vandermonde and edge products is nonzero modulo
    /// `{x_k^n - 1}`.
    pub certificate: bool,
    /// Least lattice point where the LCM does not vanish.
    pub witness: Option<LatticePoint>,
    /// Exact value of the LCM at the witness.
    #[serde(skip)]
    pub witness_value: Option<Cyclotomic>,
    /// Exact maximum number of distinct non-loop sums.
    pub nonloop_max: usize,
}

impl CertificateReport {
    /// Certificate holds iff `n - 1` distinct non-loop sums are reachable.
    pub fn agrees(&self, n: usize) -> bool {
        self.certificate == (self.nonloop_max + 1 == n)
    }
}

pub fn determinantal_certificate(t: &TreeFunc) -> Result<CertificateReport> {
    let n = t.n();
    let lcm = vandermonde(n).lcm(&edge_product(t));
    let witness = canonical_rep_nonzero(&lcm, n, LatticeSearch::Pruned)?;
    let witness_value = witness.as_ref().map(|a| lcm.eval(&CyclotomicRing::new(n), a));
    if let Some(v) = &witness_value {
        assert!(!v.is_zero(), "lattice witness evaluates to zero");
    }
    let nonloop_max = max_harmony_search(t, Scope::Nonloop, Mode::Exact)?.achieved;
    Ok(CertificateReport {
        certificate: witness.is_some(),
        witness,
        witness_value,
        nonloop_max,
    })
}

/// Variable permutations fixing the factor multiset of `P_f`. Edge factors
/// are keyed by the ordered pairs `(f(i), i)`, so orientation is part of
/// the key.
pub fn stabilizer_of_p(t: &TreeFunc) -> Result<AutGroup> {
    let n = t.n();
    if n > STABILIZER_CAP {
        return Err(Error::CapExceeded {
            op: "stabilizer_of_p",
            n,
            cap: STABILIZER_CAP,
        });
    }
    let factors = p_f_factors(t);
    let elements = all_perms(n)?
        .filter(|sigma| factors.relabel(sigma) == factors)
        .collect();
    Ok(AutGroup::from_elements(elements))
}

/// Whether `Aut(G_f)` is a proper subgroup of `Aut(G_{f∘f})`. Every
/// automorphism of `f` commutes with `f∘f`, so comparing orders suffices.
pub fn composition_premise(t: &TreeFunc) -> bool {
    automorphism_group(t).order() < automorphism_group(&t.iterate(2)).order()
}

/// Power sums and elementary symmetric values at `x = ω^a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumReport {
    /// `p_k` for `k = 0..=n`.
    pub power_sums: Vec<Cyclotomic>,
    /// `e_k` for `k = 0..=n` by Newton-Girard.
    pub elementary: Vec<Cyclotomic>,
    /// `p_k = 0` for `1 <= k < n` and `p_n = n`.
    pub moduli_hold: bool,
    pub is_permutation: bool,
    /// `e_k = 0` for `0 < k < n` and `e_n = (-1)^(n+1)`.
    pub elementary_match: bool,
}

pub fn power_sum_check(a: &LatticePoint) -> PowerSumReport {
    let n = a.n();
    let ring = CyclotomicRing::new(n);
    let power_sums: Vec<Cyclotomic> = (0..=n)
        .map(|k| {
            let mut s = Cyclotomic::zero(&ring);
            for &e in a.exponents() {
                s += &Cyclotomic::root_power(&ring, e * k);
            }
            s
        })
        .collect();
    // k e_k = Σ_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    let mut elementary = vec![Cyclotomic::one(&ring)];
    for k in 1..=n {
        let mut acc = Cyclotomic::zero(&ring);
        for i in 1..=k {
            let term = &elementary[k - i] * &power_sums[i];
            if i % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        elementary.push(acc.div_exact(k as i128).expect("e_k has integral coordinates"));
    }
    let moduli_hold = (1..n).all(|k| power_sums[k].is_zero())
        && power_sums[n].as_int() == Some(n as i128);
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let elementary_match =
        (1..n).all(|k| elementary[k].is_zero()) && elementary[n].as_int() == Some(sign);
    PowerSumReport {
        power_sums,
        elementary,
        moduli_hold,
        is_permutation: a.is_permutation(),
        elementary_match,
    }
}

/// Both sides of `P_f = P_{f∘f} + V · Σ_{k ≠ 1...1} ∏ A^k B^(1-k)` at one
/// lattice point, where for each ordered non-root pair `(i, j)`
///
/// ```text
/// A = x_{f²(j)} x_j - x_{f²(i)} x_i
/// B = (x_{f(j)} - x_{f²(j)}) x_j - (x_{f(i)} - x_{f²(i)}) x_i
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TelescopeReport {
    pub lhs: Cyclotomic,
    pub rhs: Cyclotomic,
    /// Number of 0/1 vectors summed (all but the all-ones vector).
    pub terms: u64,
}

impl TelescopeReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn telescoping_check(t: &TreeFunc, a: &LatticePoint) -> Result<TelescopeReport> {
    let n = t.n();
    if n > TELESCOPE_CAP {
        return Err(Error::CapExceeded {
            op: "telescoping_check",
            n,
            cap: TELESCOPE_CAP,
        });
    }
    check_point(t, a)?;
    let ring = CyclotomicRing::new(n);
    let e = a.exponents();
    let x = |v: usize| Cyclotomic::root_power(&ring, e[v]);
    let f2 = t.iterate(2);

    let lhs = eval_p(t, a)?;
    let squared = eval_p(&f2, a)?;

    let pairs = nonroot_pairs(t);
    let mut kept = Vec::with_capacity(pairs.len());
    let mut moved = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let (fi, fj, gi, gj) = (t.apply(i), t.apply(j), f2.apply(i), f2.apply(j));
        kept.push(&(&x(gj) * &x(j)) - &(&x(gi) * &x(i)));
        moved.push(&(&(&x(fj) - &x(gj)) * &x(j)) - &(&(&x(fi) - &x(gi)) * &x(i)));
    }
    let mut sum = Cyclotomic::zero(&ring);
    let mut terms = 0u64;
    expand_mixed(&kept, &moved, 0, Cyclotomic::one(&ring), false, &mut sum, &mut terms);
    let rhs = &squared + &(&vandermonde_ordered(&ring, e) * &sum);
    Ok(TelescopeReport { lhs, rhs, terms })
}

/// Sum over all choices `k ∈ {0,1}^m` other than all ones of
/// `∏ kept^k · moved^(1-k)`, sharing prefix products.
fn expand_mixed(
    kept: &[Cyclotomic],
    moved: &[Cyclotomic],
    idx: usize,
    prefix: Cyclotomic,
    has_zero: bool,
    sum: &mut Cyclotomic,
    terms: &mut u64,
) {
    if idx == kept.len() {
        if has_zero {
            *sum += &prefix;
            *terms += 1;
        }
        return;
    }
    expand_mixed(kept, moved, idx + 1, &prefix * &kept[idx], has_zero, sum, terms);
    expand_mixed(kept, moved, idx + 1, &prefix * &moved[idx], true, sum, terms);
}

/// Whether renaming variables by `σ` leaves every value of `P_f` on the
/// lattice unchanged, `P_f(x_{σ(0)}, ..., x_{σ(n-1)}) = P_f(x)`. This sees
/// the polynomial itself, where edge factors only depend on the monomial
/// `x_{f(i)} x_i`; it can be strictly weaker than the keyed comparison in
/// [`stabilizer_of_p`].
pub fn fixes_p_on_lattice(t: &TreeFunc, sigma: &Perm) -> Result<bool> {
    let n = t.n();
    if n > SCAN_CAP {
        return Err(Error::CapExceeded {
            op: "fixes_p_on_lattice",
            n,
            cap: SCAN_CAP,
        });
    }
    let ring = CyclotomicRing::new(n);
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let a: Vec<usize> = (0..n)
            .map(|_| {
                let v = c % n;
                c /= n;
                v
            })
            .collect();
        let permuted: Vec<usize> = (0..n).map(|i| a[sigma.apply(i)]).collect();
        let p = eval_p_product(t, &LatticePoint::new(a)?, &ring);
        let q = eval_p_product(t, &LatticePoint::new(permuted)?, &ring);
        if p != q {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Permutations of `Z_n`, automorphism groups of rooted functional trees and
//! transversals of `S_n / Aut(G_f)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::codec;
use crate::error::{Error, Result};
use crate::zmod::TreeFunc;

/// Largest `n` for which `S_n` is enumerated.
pub const ALL_PERMS_CAP: usize = 12;
/// Largest `n` for which a coset transversal is materialized.
pub const TRANSVERSAL_CAP: usize = 10;
/// Automorphism groups up to this order keep their full element list.
pub const AUT_ELEMENT_LIMIT: u128 = 100_000;

/// A bijection of `Z_n` with its inverse cached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl Perm {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut inverse = vec![usize::MAX; n];
        for (i, &v) in table.iter().enumerate() {
            if v >= n {
                return Err(Error::EntryOutOfRange { index: i, value: v, n });
            }
            if inverse[v] != usize::MAX {
                return Err(Error::NotBijective { value: v });
            }
            inverse[v] = i;
        }
        Ok(Self { table, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let table: Vec<usize> = (0..n).collect();
        Self {
            inverse: table.clone(),
            table,
        }
    }

    /// The transposition `(a b)`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut table: Vec<usize> = (0..n).collect();
        table.swap(a, b);
        Self {
            inverse: table.clone(),
            table,
        }
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    #[inline]
    pub fn apply_inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn inverse(&self) -> Perm {
        Perm {
            table: self.inverse.clone(),
            inverse: self.table.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "composing permutations of different degree");
        let table: Vec<usize> = other.table.iter().map(|&j| self.table[j]).collect();
        let mut inverse = vec![0; table.len()];
        for (i, &v) in table.iter().enumerate() {
            inverse[v] = i;
        }
        Perm { table, inverse }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&codec::format_table(&self.table))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Perm::new(codec::parse_table(s)?)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Lexicographic enumeration of `S_n`.
#[derive(Debug, Clone)]
pub struct AllPerms {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPerms {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Perm::new(current).expect("lexicographic successor stays a bijection"))
    }
}

/// Advance to the lexicographic successor in place; false at the last one.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All of `S_n` in lexicographic order; refuses `n > 12`.
pub fn all_perms(n: usize) -> Result<AllPerms> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > ALL_PERMS_CAP {
        return Err(Error::CapExceeded {
            op: "all_perms",
            n,
            cap: ALL_PERMS_CAP,
        });
    }
    Ok(AllPerms {
        next: Some((0..n).collect()),
    })
}

/// `Aut(G_f)` for a tree function: permutations commuting with `f`.
#[derive(Debug, Clone)]
pub struct AutGroup {
    generators: Vec<Perm>,
    order: u128,
    elements: Option<Vec<Perm>>,
}

impl AutGroup {
    /// A group given by its full element list.
    pub(crate) fn from_elements(mut elements: Vec<Perm>) -> Self {
        elements.sort();
        let generators = elements.iter().filter(|p| !p.is_identity()).cloned().collect();
        Self {
            generators,
            order: elements.len() as u128,
            elements: Some(elements),
        }
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// Sorted element list; `None` past [`AUT_ELEMENT_LIMIT`].
    pub fn elements(&self) -> Option<&[Perm]> {
        self.elements.as_deref()
    }
}

/// Automorphisms of a rooted tree, built from AHU subtree classes: at each
/// vertex, children whose subtrees are isomorphic may be permuted freely.
pub fn automorphism_group(t: &TreeFunc) -> AutGroup {
    let n = t.n();
    let children = t.children();
    let class = subtree_classes(t, &children);

    let mut generators = Vec::new();
    let mut order: u128 = 1;
    for v in 0..n {
        let mut kids = children[v].clone();
        kids.sort_by_key(|&c| (class[c], c));
        for group in kids.chunk_by(|&a, &b| class[a] == class[b]) {
            for (k, pair) in group.windows(2).enumerate() {
                order *= (k + 2) as u128;
                generators.push(subtree_swap(n, pair[0], pair[1], &children, &class));
            }
        }
    }

    let elements = (order <= AUT_ELEMENT_LIMIT).then(|| close_under(&generators, n));
    if let Some(els) = &elements {
        debug_assert_eq!(els.len() as u128, order);
    }
    AutGroup {
        generators,
        order,
        elements,
    }
}

/// Interned isomorphism class of every rooted subtree.
pub(crate) fn subtree_classes(t: &TreeFunc, children: &[Vec<usize>]) -> Vec<usize> {
    let n = t.n();
    let depths = t.depths();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(depths[v]));
    let mut intern: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut class = vec![0; n];
    for v in order {
        let mut key: Vec<usize> = children[v].iter().map(|&c| class[c]).collect();
        key.sort_unstable();
        let next = intern.len();
        class[v] = *intern.entry(key).or_insert(next);
    }
    class
}

fn subtree_swap(n: usize, a: usize, b: usize, children: &[Vec<usize>], class: &[usize]) -> Perm {
    let mut table: Vec<usize> = (0..n).collect();
    let mut queue = VecDeque::from([(a, b)]);
    while let Some((x, y)) = queue.pop_front() {
        table[x] = y;
        table[y] = x;
        let mut xs = children[x].clone();
        let mut ys = children[y].clone();
        xs.sort_by_key(|&c| (class[c], c));
        ys.sort_by_key(|&c| (class[c], c));
        queue.extend(xs.into_iter().zip(ys));
    }
    Perm::new(table).expect("subtree swap is an involution")
}

fn close_under(generators: &[Perm], n: usize) -> Vec<Perm> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort();
    out
}

/// Lexicographically least member of each left coset `σ·Aut(G_f)`, in
/// lexicographic order.
///
/// Two permutations share a left coset exactly when they conjugate `f` to
/// the same labeled graph, so the first permutation (in lexicographic order)
/// producing a given conjugate is that coset's least member.
#[derive(Debug, Clone)]
pub struct CosetTransversal {
    tree: TreeFunc,
    perms: AllPerms,
    seen: HashSet<u64>,
}

impl Iterator for CosetTransversal {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        for sigma in self.perms.by_ref() {
            let mut key = 0u64;
            for i in 0..self.tree.n() {
                let image = sigma.apply(self.tree.apply(sigma.apply_inverse(i)));
                key |= (image as u64) << (4 * i);
            }
            if self.seen.insert(key) {
                return Some(sigma);
            }
        }
        None
    }
}

pub fn coset_transversal(t: &TreeFunc) -> Result<CosetTransversal> {
    let n = t.n();
    if n > TRANSVERSAL_CAP {
        return Err(Error::CapExceeded {
            op: "coset_transversal",
            n,
            cap: TRANSVERSAL_CAP,
        });
    }
    Ok(CosetTransversal {
        tree: t.clone(),
        perms: all_perms(n)?,
        seen: HashSet::new(),
    })
}

//! Per-tree checks and the record they produce.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use harmtree_core::certalg::{
    determinantal_certificate, stabilizer_of_p, telescoping_check, LatticePoint, LATTICE_CAP,
    STABILIZER_CAP, TELESCOPE_CAP,
};
use harmtree_core::harmony::{
    count_harmonious_labelings, left_translate, max_harmony_search, right_translate,
    theorem_check, Mode, Scope, SumProfile, SEARCH_CAP,
};
use harmtree_core::perms::{automorphism_group, TRANSVERSAL_CAP};
use harmtree_core::{CanonicalCode, TreeFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Random lattice points per tree for the telescoping check when the
/// lattice is too large to sweep.
pub const TELESCOPE_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Theorem,
    Cert,
    Stabilizer,
    Divisibility,
    Props,
    Telescope,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Theorem,
        Check::Cert,
        Check::Stabilizer,
        Check::Divisibility,
        Check::Props,
        Check::Telescope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Theorem => "theorem",
            Check::Cert => "cert",
            Check::Stabilizer => "stabilizer",
            Check::Divisibility => "divisibility",
            Check::Props => "props",
            Check::Telescope => "telescope",
        }
    }

    /// Largest `n` the underlying computation accepts.
    pub fn cap(self) -> usize {
        match self {
            Check::Theorem => SEARCH_CAP,
            Check::Cert => LATTICE_CAP,
            Check::Stabilizer => STABILIZER_CAP,
            Check::Divisibility => TRANSVERSAL_CAP,
            Check::Props => usize::MAX,
            Check::Telescope => TELESCOPE_CAP,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::UnknownCheck(s.to_string()))
    }
}

/// Checks to run, kept sorted so the cache key does not depend on the order
/// they were named in.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckSet(BTreeSet<Check>);

impl CheckSet {
    pub fn new(checks: impl IntoIterator<Item = Check>) -> Self {
        Self(checks.into_iter().collect())
    }

    pub fn all() -> Self {
        Self::new(Check::ALL)
    }

    pub fn contains(&self, c: Check) -> bool {
        self.0.contains(&c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Check> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Stable identifier: the sorted check names, plus the seed when a
    /// seeded check is present.
    pub fn id(&self, seed: u64) -> String {
        let names: Vec<&str> = self.iter().map(Check::name).collect();
        let mut id = names.join(",");
        if self.contains(Check::Telescope) {
            id.push_str(&format!(";seed={seed}"));
        }
        id
    }
}

impl FromStr for CheckSet {
    type Err = CliError;

    /// Comma list; `all` selects every check.
    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "all" {
            return Ok(Self::all());
        }
        s.split(',')
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Self)
    }
}

impl fmt::Display for CheckSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(Check::name).collect();
        f.write_str(&names.join(","))
    }
}

/// One line of a campaign report. Fields for checks that were not run are
/// null; `elapsed_ms` is only present when timings are requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignRecord {
    pub n: usize,
    pub tree_code: String,
    pub aut_order: u64,
    pub nonloop_max: usize,
    pub harmonious_k: Option<usize>,
    pub sigma: Option<String>,
    pub certificate: Option<bool>,
    /// False only when the theorem check ran and the two routes disagreed.
    pub strategy_agreement: bool,
    pub stabilizer_ok: Option<bool>,
    pub harmonious_count: Option<u64>,
    pub divisibility_ok: Option<bool>,
    pub props_ok: Option<bool>,
    pub telescope_ok: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CampaignRecord {
    /// Names of the checks this record fails.
    pub fn failures(&self, checks: &CheckSet) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.nonloop_max >= self.n.max(1) {
            out.push("nonloop_max");
        }
        if checks.contains(Check::Theorem) && self.n % 2 == 1 {
            if self.harmonious_k.is_none() || self.sigma.is_none() {
                out.push("theorem");
            }
            if !self.strategy_agreement {
                out.push("strategy_agreement");
            }
        }
        if checks.contains(Check::Cert) && self.certificate != Some(self.nonloop_max + 1 == self.n) {
            out.push("cert");
        }
        let flags = [
            (Check::Stabilizer, self.stabilizer_ok),
            (Check::Divisibility, self.divisibility_ok),
            (Check::Props, self.props_ok),
            (Check::Telescope, self.telescope_ok),
        ];
        for (check, ok) in flags {
            if checks.contains(check) && ok != Some(true) {
                out.push(check.name());
            }
        }
        out
    }
}

/// Run `checks` on the tree with canonical code `code`.
pub fn compute_record(code: &CanonicalCode, checks: &CheckSet, seed: u64) -> Result<CampaignRecord, CliError> {
    let t = code.tree();
    let n = t.n();
    for check in checks.iter() {
        if n > check.cap() {
            return Err(CliError::CheckCap {
                check: check.name(),
                n,
                cap: check.cap(),
            });
        }
    }
    let aut_order = u64::try_from(automorphism_group(&t).order()).expect("order fits u64 below the caps");
    let mut rec = CampaignRecord {
        n,
        tree_code: code.to_string(),
        aut_order,
        nonloop_max: 0,
        harmonious_k: None,
        sigma: None,
        certificate: None,
        strategy_agreement: true,
        stabilizer_ok: None,
        harmonious_count: None,
        divisibility_ok: None,
        props_ok: None,
        telescope_ok: None,
        elapsed_ms: None,
    };

    if checks.contains(Check::Theorem) && n % 2 == 1 {
        let out = theorem_check(&t)?;
        rec.nonloop_max = out.nonloop.achieved;
        if let Some((k, sigma)) = out.witness() {
            rec.harmonious_k = Some(k);
            rec.sigma = Some(sigma.to_string());
        }
        rec.strategy_agreement = out.strategies_agree();
    } else {
        rec.nonloop_max = max_harmony_search(&t, Scope::Nonloop, Mode::Exact)?.achieved;
    }

    if checks.contains(Check::Cert) {
        rec.certificate = Some(determinantal_certificate(&t)?.certificate);
    }
    if checks.contains(Check::Stabilizer) {
        rec.stabilizer_ok = Some(stabilizer_matches(&t)?);
    }
    if checks.contains(Check::Divisibility) {
        let count = count_harmonious_labelings(&t)?;
        rec.harmonious_count = Some(count);
        rec.divisibility_ok = Some(count % n as u64 == 0);
    }
    if checks.contains(Check::Props) {
        rec.props_ok = Some(translation_checks(&t).iter().all(TranslationCheck::holds));
    }
    if checks.contains(Check::Telescope) {
        rec.telescope_ok = Some(telescope_holds(&t, code, seed)?);
    }
    Ok(rec)
}

/// Recompute a record from its `tree_code` and compare every field except
/// `elapsed_ms`.
pub fn verify_record(record: &CampaignRecord, checks: &CheckSet, seed: u64) -> Result<bool, CliError> {
    let code: CanonicalCode = record.tree_code.parse()?;
    let fresh = compute_record(&code, checks, seed)?;
    let mut stored = record.clone();
    stored.elapsed_ms = None;
    Ok(fresh == stored)
}

fn stabilizer_matches(t: &TreeFunc) -> Result<bool, CliError> {
    let stab = stabilizer_of_p(t)?;
    let aut = automorphism_group(t);
    let sorted = |g: &harmtree_core::AutGroup| {
        let mut e: Vec<Vec<usize>> = g
            .elements()
            .expect("small groups are materialised")
            .iter()
            .map(|p| p.table().to_vec())
            .collect();
        e.sort();
        e
    };
    Ok(stab.order() == aut.order() && sorted(&stab) == sorted(&aut))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// Distinct-sum count over `Z_n \ T` before and after one translation, with
/// `T` held fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationCheck {
    pub side: Side,
    pub excluded: Option<usize>,
    pub c: usize,
    pub before: usize,
    pub after: usize,
}

impl TranslationCheck {
    pub fn holds(&self) -> bool {
        self.before == self.after
    }
}

/// Translation invariance of the distinct-sum counts for every `c` and for
/// `T = ∅` and `T = {root}`.
pub fn translation_checks(t: &TreeFunc) -> Vec<TranslationCheck> {
    let n = t.n();
    let g = t.map();
    let mut out = Vec::with_capacity(4 * n);
    for excluded in [None, Some(t.root())] {
        let count = |p: SumProfile| match excluded {
            None => p.distinct_count(),
            Some(_) => p.nonloop_distinct_count(),
        };
        let before = count(SumProfile::of_map(g, excluded));
        for c in 0..n {
            for (side, h) in [(Side::Right, right_translate(g, c)), (Side::Left, left_translate(g, c))] {
                out.push(TranslationCheck {
                    side,
                    excluded,
                    c,
                    before,
                    after: count(SumProfile::of_map(&h, excluded)),
                });
            }
        }
    }
    out
}

/// Lattice points for the telescoping check: the whole lattice when it has
/// at most [`TELESCOPE_SAMPLES`] points, otherwise that many points drawn
/// from a generator keyed by `(seed, code)`.
pub fn telescope_points(code: &CanonicalCode, seed: u64) -> Vec<LatticePoint> {
    let n = code.n();
    let total = (n as u64).checked_pow(n as u32);
    if total.is_some_and(|t| t <= TELESCOPE_SAMPLES as u64) {
        let total = total.unwrap();
        return (0..total)
            .map(|mut idx| {
                let mut e = vec![0; n];
                for slot in e.iter_mut().rev() {
                    *slot = (idx % n as u64) as usize;
                    idx /= n as u64;
                }
                LatticePoint::new(e).expect("entries below n")
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::from_seed(tree_seed(code, seed));
    (0..TELESCOPE_SAMPLES)
        .map(|_| LatticePoint::new((0..n).map(|_| rng.gen_range(0..n)).collect()).expect("entries below n"))
        .collect()
}

fn telescope_holds(t: &TreeFunc, code: &CanonicalCode, seed: u64) -> Result<bool, CliError> {
    for a in telescope_points(code, seed) {
        if !telescoping_check(t, &a)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-tree generator seed, independent of scheduling.
pub fn tree_seed(code: &CanonicalCode, seed: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(code.to_string().as_bytes());
    h.finalize().into()
}

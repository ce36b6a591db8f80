//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Two criteria fail on genuine counterexamples to the statements they test
//! (the stabilizer of the two-vertex tree, and right translation with a
//! fixed excluded vertex). Those are reported as FAIL; the run only exits
//! nonzero when a failure differs from the documented counterexample, or
//! on any FAIL when `HARMTREE_ACCEPTANCE_STRICT` is set.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use harmtree_core::certalg::{
    determinantal_certificate, power_sum_check, stabilizer_of_p, telescoping_check, Cyclotomic,
    CyclotomicRing, LatticePoint,
};
use harmtree_core::harmony::{
    count_harmonious_labelings, max_harmony_search, right_translate, theorem_check, Mode, Scope, SumProfile,
};
use harmtree_core::perms::automorphism_group;
use harmtree_core::treegen::enumerate_trees;
use harmtree_core::{FuncMap, Perm, TreeFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Oracles. Plain table manipulation, sharing no code with the library.

fn next_perm(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every permutation of `0..n` in lexicographic order.
fn perms(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while next_perm(&mut p) {
        out.push(p.clone());
    }
    out
}

/// Vertex `i` relabelled `s[i]`: `g(s[i]) = s[f(i)]`.
fn conj(f: &[usize], s: &[usize]) -> Vec<usize> {
    let mut g = vec![0; f.len()];
    for i in 0..f.len() {
        g[s[i]] = s[f[i]];
    }
    g
}

/// Root of a tree function, or None.
fn tree_root(f: &[usize]) -> Option<usize> {
    let n = f.len();
    let mut image: BTreeSet<usize> = (0..n).collect();
    for _ in 0..n.saturating_sub(1) {
        image = image.iter().map(|&v| f[v]).collect();
    }
    (image.len() == 1).then(|| *image.iter().next().unwrap())
}

fn distinct_sums(f: &[usize], skip: Option<usize>) -> usize {
    let n = f.len();
    (0..n)
        .filter(|&i| Some(i) != skip)
        .map(|i| (i + f[i]) % n)
        .collect::<HashSet<_>>()
        .len()
}

fn harmonious(f: &[usize]) -> bool {
    distinct_sums(f, None) == f.len()
}

fn nonloop_sum_multiset(f: &[usize], root: usize) -> Vec<usize> {
    let n = f.len();
    let mut v: Vec<usize> = (0..n).filter(|&i| i != root).map(|i| (i + f[i]) % n).collect();
    v.sort_unstable();
    v
}

/// Reverse the path from `k` to the root and put the loop at `k`.
fn swap_sink_oracle(f: &[usize], k: usize) -> Vec<usize> {
    let mut path = vec![k];
    while f[*path.last().unwrap()] != *path.last().unwrap() {
        path.push(f[*path.last().unwrap()]);
    }
    let mut g = f.to_vec();
    g[k] = k;
    for w in path.windows(2) {
        g[w[1]] = w[0];
    }
    g
}

/// Max distinct sums over all relabelings, and the least relabeling
/// reaching it. `nonloop` drops the loop edge.
fn naive_max(f: &[usize], nonloop: bool) -> (usize, Vec<usize>) {
    let root = tree_root(f).expect("tree");
    let mut best = (0, Vec::new());
    for s in perms(f.len()) {
        let g = conj(f, &s);
        let c = distinct_sums(&g, nonloop.then_some(s[root]));
        if best.1.is_empty() || c > best.0 {
            best = (c, s);
        }
    }
    best
}

fn brute_aut(f: &[usize]) -> Vec<Vec<usize>> {
    perms(f.len()).into_iter().filter(|s| conj(f, s) == f).collect()
}

/// Rooted trees on `n` vertices up to isomorphism, from all `n^n` maps.
fn filter_all_classes(n: usize) -> usize {
    let ps = perms(n);
    let mut classes = HashSet::new();
    let mut f = vec![0usize; n];
    loop {
        if tree_root(&f).is_some() {
            let canon = ps.iter().map(|s| conj(&f, s)).min().unwrap();
            classes.insert(canon);
        }
        let mut i = 0;
        while i < n && f[i] == n - 1 {
            f[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        f[i] += 1;
    }
    classes.len()
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut f = vec![0; n];
    f[order[0]] = order[0];
    for i in 1..n {
        f[order[i]] = order[rng.gen_range(0..i)];
    }
    f
}

fn tree(table: &[usize]) -> TreeFunc {
    TreeFunc::from_table(table.to_vec()).unwrap()
}

/// Numeric value of a cyclotomic integer at `exp(2πi/n)`.
fn to_complex(z: &Cyclotomic) -> (f64, f64) {
    let n = z.ring().n() as f64;
    z.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &c)| {
        let th = std::f64::consts::TAU * k as f64 / n;
        (re + c as f64 * th.cos(), im + c as f64 * th.sin())
    })
}

/// `P_f` in floating point: ordered Vandermonde times the non-root edge
/// product.
fn p_f_numeric(f: &[usize], root: usize, a: &[usize]) -> (f64, f64) {
    let n = f.len();
    let x = |v: usize| {
        let th = std::f64::consts::TAU * a[v] as f64 / n as f64;
        (th.cos(), th.sin())
    };
    let mul = |p: (f64, f64), q: (f64, f64)| (p.0 * q.0 - p.1 * q.1, p.0 * q.1 + p.1 * q.0);
    let sub = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0, p.1 - q.1);
    let mut acc = (1.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = mul(acc, sub(x(j), x(i)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && i != root && j != root {
                acc = mul(acc, sub(mul(x(f[j]), x(j)), mul(x(f[i]), x(i))));
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Criteria.

#[derive(PartialEq)]
enum Status {
    Pass,
    Fail,
    /// Fails exactly on the documented counterexample.
    KnownFail,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        status: Status::Pass,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        status: Status::Fail,
        detail: detail.into(),
    }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

const CLASS_COUNTS: [usize; 10] = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut total = 0;
    for n in [1, 3, 5, 7, 9] {
        let trees = enumerate_trees(n).unwrap();
        if trees.len() != CLASS_COUNTS[n - 1] {
            problems.push(format!("n={n}: {} classes", trees.len()));
        }
        if n <= 6 && filter_all_classes(n) != trees.len() {
            problems.push(format!("n={n}: filter-all count differs"));
        }
        for t in &trees {
            total += 1;
            let out = theorem_check(t).unwrap();
            let Some((k, sigma)) = out.witness() else {
                problems.push(format!("{t}: no witness"));
                continue;
            };
            let g = conj(&swap_sink_oracle(t.table(), k), sigma.table());
            if !harmonious(&g) {
                problems.push(format!("{t}: k={k} sigma={sigma} not harmonious"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if start.elapsed() > Duration::from_secs(600) {
        problems.push(format!("took {secs:.1}s"));
    }
    check(
        problems.is_empty(),
        format!("{total} trees over n in {{1,3,5,7,9}}, {secs:.2}s; problems: {problems:?}"),
    )
}

fn criterion_2() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for n in [1, 3, 5, 7, 9] {
        for t in enumerate_trees(n).unwrap() {
            total += 1;
            let out = theorem_check(&t).unwrap();
            let Some(c) = &out.completion else {
                problems.push(format!("{t}: no completion"));
                continue;
            };
            let rerooted = swap_sink_oracle(t.table(), c.k);
            let labeled = conj(&rerooted, c.sigma.table());
            if out.direct.is_none()
                || !harmonious(c.labeled.table())
                || labeled != c.labeled.table()
                || (2 * c.x) % n != c.missing % n
            {
                problems.push(format!("{t}"));
            }
        }
    }
    check(problems.is_empty(), format!("{total} trees; disagreements: {problems:?}"))
}

fn criterion_3() -> Outcome {
    let mut problems = Vec::new();
    let mut trees: Vec<Vec<usize>> = (1..=5)
        .flat_map(|n| enumerate_trees(n).unwrap())
        .map(|t| t.table().to_vec())
        .collect();
    let small = trees.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    trees.extend((0..50).map(|_| random_tree(7, &mut rng)));
    for f in &trees {
        let n = f.len();
        let cert = determinantal_certificate(&tree(f)).unwrap();
        let (max, _) = naive_max(f, true);
        if cert.certificate != (max == n - 1) {
            problems.push(format!("{f:?}: cert {} max {max}", cert.certificate));
        }
    }
    check(
        problems.is_empty(),
        format!("{small} trees n<=5, 50 random n=7; mismatches: {problems:?}"),
    )
}

fn criterion_4() -> Outcome {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for n in 1..=5 {
        for t in enumerate_trees(n).unwrap() {
            total += 1;
            let mut stab: Vec<Vec<usize>> = stabilizer_of_p(&t)
                .unwrap()
                .elements()
                .unwrap()
                .iter()
                .map(|p| p.table().to_vec())
                .collect();
            stab.sort();
            let mut aut: Vec<Vec<usize>> = automorphism_group(&t)
                .elements()
                .unwrap()
                .iter()
                .map(|p| p.table().to_vec())
                .collect();
            aut.sort();
            if aut != brute_aut(t.table()) {
                return fail(format!("{t}: automorphism group differs from brute force"));
            }
            if stab != aut {
                mismatches.push(t.to_string());
            }
        }
    }
    let detail = format!("{total} trees n<=5; stabilizer != Aut for {mismatches:?}");
    if mismatches.is_empty() {
        return pass(detail);
    }
    // The two-vertex tree has no non-root pairs, so its polynomial is the
    // bare Vandermonde product and the swap of both vertices fixes it.
    let documented = mismatches == ["2:0,0"] && brute_aut(&[0, 0]).len() == 1;
    Outcome {
        status: if documented { Status::KnownFail } else { Status::Fail },
        detail: format!("{detail}; n=2 counterexample: Vandermonde alone is fixed by S_2 while Aut is trivial"),
    }
}

struct TranslationFailure {
    right: bool,
    excluded: bool,
    premise: bool,
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut transported_failures = 0;
    for n in 1..=6 {
        for t in enumerate_trees(n).unwrap() {
            let f = t.table();
            let root = t.root();
            for c in 0..n {
                let right: Vec<usize> = (0..n).map(|i| f[(i + c) % n]).collect();
                let left: Vec<usize> = f.iter().map(|&v| (v + c) % n).collect();
                for excluded in [None, Some(root)] {
                    let before = distinct_sums(f, excluded);
                    let premise = before == n - usize::from(excluded.is_some());
                    for (is_right, h) in [(true, &right), (false, &left)] {
                        cases += 1;
                        if distinct_sums(h, excluded) != before {
                            failures.push(TranslationFailure {
                                right: is_right,
                                excluded: excluded.is_some(),
                                premise,
                            });
                        }
                    }
                    // Reading with T carried along by the shift.
                    let moved = excluded.map(|e| (e + n - c) % n);
                    if distinct_sums(&right, moved) != before {
                        transported_failures += 1;
                    }
                }
            }
        }
    }
    // Library agrees with the oracle on the smallest counterexample.
    let g = FuncMap::new(3, vec![0, 0, 1]).unwrap();
    let lib_before = SumProfile::of_map(&g, Some(0)).nonloop_distinct_count();
    let lib_after = SumProfile::of_map(&right_translate(&g, 1), Some(0)).nonloop_distinct_count();

    let with_premise = failures.iter().filter(|f| f.premise).count();
    let detail = format!(
        "{cases} cases over trees n<=6; {} fail, {with_premise} of them satisfy the premise; \
         all failures are right translation with T={{root}}: {}; \
         with T moved by -c the right translation has {transported_failures} failures; \
         smallest: g=3:0,0,1 c=1 T={{0}} gives {lib_before} then {lib_after}",
        failures.len(),
        failures.iter().all(|f| f.right && f.excluded),
    );
    if failures.is_empty() {
        return pass(detail);
    }
    let documented = failures.iter().all(|f| f.right && f.excluded)
        && with_premise > 0
        && transported_failures == 0
        && (lib_before, lib_after) == (2, 1);
    Outcome {
        status: if documented { Status::KnownFail } else { Status::Fail },
        detail,
    }
}

fn criterion_6() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for n in 1..=6 {
        for t in enumerate_trees(n).unwrap() {
            total += 1;
            let count = count_harmonious_labelings(&t).unwrap();
            let oracle = perms(n)
                .iter()
                .map(|s| conj(t.table(), s))
                .filter(|g| harmonious(g))
                .collect::<HashSet<_>>()
                .len() as u64;
            if count != oracle || count % n as u64 != 0 {
                problems.push(format!("{t}: {count} vs {oracle}"));
            }
        }
    }
    check(problems.is_empty(), format!("{total} trees n<=6; problems: {problems:?}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut points_checked = 0;
    let mut run = |t: &TreeFunc, a: LatticePoint| {
        let r = telescoping_check(t, &a).unwrap();
        points_checked += 1;
        if r.lhs != r.rhs {
            problems.push(format!("{t} at {a}"));
        }
        let (re, im) = to_complex(&r.lhs);
        let (ore, oim) = p_f_numeric(t.table(), t.root(), a.exponents());
        let scale = 1.0 + ore.abs() + oim.abs();
        if (re - ore).abs() > 1e-6 * scale || (im - oim).abs() > 1e-6 * scale {
            problems.push(format!("{t} at {a}: lhs disagrees with numeric P_f"));
        }
    };
    for t in enumerate_trees(3).unwrap() {
        for idx in 0..27 {
            let a = vec![idx / 9, (idx / 3) % 3, idx % 3];
            run(&t, LatticePoint::new(a).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e1e_5c09);
    for t in enumerate_trees(5).unwrap() {
        for _ in 0..100 {
            let a = (0..5).map(|_| rng.gen_range(0..5)).collect();
            run(&t, LatticePoint::new(a).unwrap());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if start.elapsed() > Duration::from_secs(120) {
        problems.push(format!("took {secs:.1}s"));
    }
    check(
        problems.is_empty(),
        format!("{points_checked} points, {secs:.2}s; problems: {problems:?}"),
    )
}

fn criterion_8() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for n in [3, 5, 7] {
        let ring = CyclotomicRing::new(n);
        let zero = Cyclotomic::zero(&ring);
        for p in perms(n) {
            total += 1;
            let a = LatticePoint::new(p.clone()).unwrap();
            let r = power_sum_check(&a);
            let p_ok = (1..n).all(|k| r.power_sums[k] == zero)
                && r.power_sums[n] == Cyclotomic::from_int(&ring, n as i128);
            // Coefficients of ∏ (λ - x_i), highest power first; e_k is
            // (-1)^k times the coefficient of λ^(n-k).
            let mut poly = vec![Cyclotomic::one(&ring)];
            for &ai in &p {
                let x = Cyclotomic::root_power(&ring, ai);
                let mut next = poly.clone();
                next.push(zero.clone());
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] -= &(c * &x);
                }
                poly = next;
            }
            let e_oracle: Vec<Cyclotomic> = poly
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
                .collect();
            let e_ok = r.elementary == e_oracle
                && (1..n).all(|k| r.elementary[k] == zero)
                && r.elementary[n] == Cyclotomic::one(&ring);
            if !(p_ok && e_ok && r.moduli_hold && r.elementary_match) {
                problems.push(format!("{a}"));
            }
        }
    }
    check(problems.is_empty(), format!("{total} permutation points; problems: {problems:?}"))
}

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    let mut cases = 0;
    for n in 1..=6 {
        for t in enumerate_trees(n).unwrap() {
            let f = t.table();
            let base_sums = nonloop_sum_multiset(f, t.root());
            let (base_max, _) = naive_max(f, true);
            for k in 0..n {
                cases += 1;
                let s = t.swap_sink(k).unwrap();
                let oracle = swap_sink_oracle(f, k);
                if s.table() != oracle.as_slice() || s.root() != k {
                    problems.push(format!("{t} k={k}: swap_sink differs from path reversal"));
                    continue;
                }
                if nonloop_sum_multiset(&oracle, k) != base_sums {
                    problems.push(format!("{t} k={k}: non-loop sums changed"));
                }
                let lib = max_harmony_search(&s, Scope::Nonloop, Mode::Exact).unwrap().achieved;
                if lib != base_max || naive_max(&oracle, true).0 != base_max {
                    problems.push(format!("{t} k={k}: non-loop max changed"));
                }
            }
        }
    }
    check(problems.is_empty(), format!("{cases} (tree, k) pairs n<=6; problems: {problems:?}"))
}

fn criterion_10() -> Outcome {
    let mut problems = Vec::new();
    let mut searches = 0;
    for n in 1..=6 {
        for t in enumerate_trees(n).unwrap() {
            for (scope, nonloop) in [(Scope::Full, false), (Scope::Nonloop, true)] {
                searches += 1;
                let r = max_harmony_search(&t, scope, Mode::Exact).unwrap();
                let (max, sigma) = naive_max(t.table(), nonloop);
                if r.achieved != max || r.best_sigma.table() != sigma.as_slice() {
                    problems.push(format!("{t} {scope:?}: {} vs {max}", r.achieved));
                }
            }
        }
    }
    let mut auts = 0;
    for n in 1..=7 {
        for t in enumerate_trees(n).unwrap() {
            auts += 1;
            let g = automorphism_group(&t);
            let mut lib: Vec<Vec<usize>> = g.elements().unwrap().iter().map(|p: &Perm| p.table().to_vec()).collect();
            lib.sort();
            if lib != brute_aut(t.table()) || g.order() as usize != lib.len() {
                problems.push(format!("{t}: automorphism group"));
            }
        }
    }
    let counts: Vec<usize> = (1..=6).map(filter_all_classes).collect();
    let lib_counts: Vec<usize> = (1..=6).map(|n| enumerate_trees(n).unwrap().len()).collect();
    if counts != lib_counts || counts != CLASS_COUNTS[..6] {
        problems.push(format!("class counts {lib_counts:?} vs {counts:?}"));
    }
    check(
        problems.is_empty(),
        format!("{searches} searches, {auts} automorphism groups, class counts {counts:?}; problems: {problems:?}"),
    )
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_harmtree");
    let mut problems = Vec::new();
    let runs = [("1-7", "theorem,cert,stabilizer,divisibility,props"), ("1-5", "all")];
    let mut lines = 0;
    for (i, (n, checks)) in runs.iter().enumerate() {
        let mut reports = Vec::new();
        for jobs in [1, 8] {
            let out = dir.path().join(format!("run{i}-j{jobs}.jsonl"));
            let status = Command::new(bin)
                .args(["campaign", "--n", n, "--checks", checks, "--jobs", &jobs.to_string(), "--out"])
                .arg(&out)
                .env_remove("HARMTREE_CACHE_DIR")
                .env_remove("HARMTREE_JOBS")
                .stderr(std::process::Stdio::null())
                .status()
                .unwrap();
            // Exit 1 reports failing checks; only 2 means the run broke.
            if status.code() == Some(2) || status.code().is_none() {
                problems.push(format!("run {i} jobs {jobs}: {status}"));
            }
            reports.push(std::fs::read(&out).unwrap_or_default());
        }
        lines += reports[0].iter().filter(|&&b| b == b'\n').count();
        if reports[0].is_empty() || reports[0] != reports[1] {
            problems.push(format!("run {i}: reports differ"));
        }
    }
    check(
        problems.is_empty(),
        format!("{lines} records compared byte for byte across --jobs 1 and 8; problems: {problems:?}"),
    )
}

fn main() -> ExitCode {
    let strict = std::env::var_os("HARMTREE_ACCEPTANCE_STRICT").is_some();
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("theorem verification", criterion_1),
        ("strategy agreement", criterion_2),
        ("certificate equivalence", criterion_3),
        ("stabilizer equals automorphism group", criterion_4),
        ("translation invariance", criterion_5),
        ("divisibility", criterion_6),
        ("telescoping identity", criterion_7),
        ("power sums", criterion_8),
        ("swap-sink invariants", criterion_9),
        ("oracle equivalences", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut results = BTreeMap::new();
    let mut stderr = std::io::stderr();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::KnownFail => "FAIL (documented counterexample)",
        };
        let line = format!(
            "criterion {:>2} {name}: {tag} [{:.2}s] {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        println!("{line}");
        let _ = stderr.flush();
        results.insert(i + 1, o.status);
    }
    let passed = results.values().filter(|s| **s == Status::Pass).count();
    let known = results.values().filter(|s| **s == Status::KnownFail).count();
    let unexpected = results.values().filter(|s| **s == Status::Fail).count();
    println!("acceptance: {passed} pass, {} fail ({known} documented counterexamples, {unexpected} unexpected)", known + unexpected);
    if unexpected > 0 || (strict && known > 0) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

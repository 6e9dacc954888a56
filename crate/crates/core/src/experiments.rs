//! Named experiments. Each `run_*` returns the CSV table it produces and,
//! where the experiment makes claims, an [`AcceptanceReport`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimate::{
    mc_fully_random_maxload, mc_linear_maxload, scaling_study, tail_loglog_slope, McConfig, McEstimate,
    GENERATOR,
};
use crate::field::{HashParams, Modulus};
use crate::load::{max_load_with, KeySet};
use crate::oracles::{
    canonicalize_triple, interval_lower_bound, triple_bound_formula, BMode, CollisionStats, Exhaustive,
    MaxLoadHistogram, Probability, TripleBounds, DEFAULT_BUDGET,
};
use crate::parallel;
use crate::report::{fmt_num, fmt_prob, prob_to_f64, AcceptanceReport, Check, CsvTable, Threshold};

/// Symmetry tolerance between `d` and the sweep point nearest `p - d`.
pub const SYMMETRY_TOLERANCE: f64 = 0.25;
/// Allowed spread (max - min) of the linear-family mean across `m`.
pub const SPREAD_TOLERANCE: f64 = 1.0;
/// Required gap between the fully random and linear means at the largest `m`.
pub const SEPARATION_THRESHOLD: f64 = 1.0;
/// Upper limit on the fitted log-log slope of the tail over `l in 3..=10`.
pub const TAIL_SLOPE_LIMIT: f64 = -1.5;
/// Tail points below `TAIL_MIN_HITS / samples` are left out of the fit.
pub const TAIL_MIN_HITS: f64 = 10.0;
/// Agreement between two estimates, in combined standard errors.
pub const STD_ERROR_TOLERANCE: f64 = 4.0;

pub const FIGURE1_DEFAULT_P: u64 = 21787;
pub const FIGURE1_DEFAULT_M: u64 = 512;
pub const FIGURE1_DEFAULT_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentName {
    Figure1,
    Lemmas,
    Scaling,
    Transform,
    MaxloadExact,
    MaxloadMc,
    Collide3,
    IntervalCollide,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 8] = [
        ExperimentName::Figure1,
        ExperimentName::Lemmas,
        ExperimentName::Scaling,
        ExperimentName::Transform,
        ExperimentName::MaxloadExact,
        ExperimentName::MaxloadMc,
        ExperimentName::Collide3,
        ExperimentName::IntervalCollide,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Figure1 => "figure1",
            ExperimentName::Lemmas => "lemmas",
            ExperimentName::Scaling => "scaling",
            ExperimentName::Transform => "transform",
            ExperimentName::MaxloadExact => "maxload-exact",
            ExperimentName::MaxloadMc => "maxload-mc",
            ExperimentName::Collide3 => "collide3",
            ExperimentName::IntervalCollide => "interval-collide",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown experiment '{s}'")))
    }
}

/// Execution settings shared by every experiment. Neither field may change
/// the data an experiment produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub workers: usize,
    pub budget: u128,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            workers: 1,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Settings {
    fn exhaustive(&self, modulus: Modulus) -> Exhaustive {
        Exhaustive::new(modulus)
            .with_budget(self.budget)
            .with_workers(self.workers)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub experiment: ExperimentName,
    pub table: CsvTable,
    pub report: Option<AcceptanceReport>,
}

impl Outcome {
    /// `false` iff a report exists and failed.
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_none_or(|r| r.overall())
    }
}

fn table_for(name: ExperimentName, header: &[&str]) -> CsvTable {
    let mut t = CsvTable::new(header.iter().copied());
    t.meta("experiment", name);
    t
}

fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------------------
// figure1
// ---------------------------------------------------------------------------

/// `points` sweep values in `[2, p-1]`: half log-spaced over `[2, (p+1)/2]`
/// with gaps of at least 3, the other half their mirrors `p + 1 - d`.
///
/// `d -> p + 1 - d` is the exact symmetry of `Pr[|h({0,1,d})| = 1]` (the map
/// `x -> 1 - x` exchanges `{0, 1, d}` and `{0, 1, p+1-d}`), and the gap of 3
/// makes `p + 1 - d` the unique sweep point nearest to `p - d`.
pub fn symmetric_log_sweep(p: u64, points: usize) -> Vec<u64> {
    if p < 5 {
        return (2..p).collect();
    }
    let half_hi = p.div_ceil(2);
    let n = (points / 2).max(2);
    let ratio = (half_hi as f64 / 2.0).powf(1.0 / (n - 1) as f64);
    let mut low: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let target = (2.0 * ratio.powi(i as i32)).round() as u64;
        let next = match low.last() {
            Some(&prev) => target.max(prev + 3),
            None => 2,
        };
        if next > half_hi {
            break;
        }
        low.push(next);
    }
    let mut all: Vec<u64> = low.iter().flat_map(|&d| [d, p + 1 - d]).collect();
    all.sort_unstable();
    all.dedup();
    all
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Figure1Row {
    pub d: u64,
    pub stats: CollisionStats,
    pub bounds: TripleBounds,
}

/// Exact `Pr[|h({0,1,d})| = 1]` and both bound forms for every `d`.
pub fn figure1_rows(modulus: Modulus, ds: &[u64], settings: &Settings) -> Result<Vec<Figure1Row>> {
    let ex = settings.exhaustive(modulus);
    ds.iter()
        .map(|&d| {
            Ok(Figure1Row {
                d,
                stats: ex.triple_collisions(0, 1, d)?,
                bounds: triple_bound_formula(&modulus, d)?,
            })
        })
        .collect()
}

fn nearest(sorted: &[u64], target: u64) -> usize {
    let i = sorted.partition_point(|&d| d < target);
    match (i.checked_sub(1), sorted.get(i)) {
        (Some(lo), Some(&hi)) if target - sorted[lo] > hi - target => i,
        (Some(lo), _) => lo,
        (None, _) => i,
    }
}

pub fn figure1_report(modulus: &Modulus, rows: &[Figure1Row]) -> AcceptanceReport {
    let p = modulus.p();
    let m = modulus.m();
    let mut report = AcceptanceReport::new(ExperimentName::Figure1.as_str());
    let ds: Vec<u64> = rows.iter().map(|r| r.d).collect();
    let probs: Vec<Probability> = rows.iter().map(|r| r.stats.probability()).collect();

    // decreasing while d <= p/m
    let head: Vec<&Probability> = rows
        .iter()
        .zip(&probs)
        .filter(|(r, _)| r.d as u128 * m as u128 <= p as u128)
        .map(|(_, pr)| pr)
        .collect();
    let increases = head.windows(2).filter(|w| w[1] > w[0]).count() as u64;
    report.push(Check::zero_violations(
        "decreasing_for_d_le_p_over_m",
        "collision probability of {0,1,d} is non-increasing while d <= p/m",
        head.len().saturating_sub(1) as u64,
        increases,
    ));

    // nearest-point symmetry around p/2
    let mut worst = (0.0f64, 0u64, 0u64);
    for (i, &d) in ds.iter().enumerate() {
        let j = nearest(&ds, p - d);
        let dev = rel_dev(prob_to_f64(&probs[i]), prob_to_f64(&probs[j]));
        if i == 0 || dev > worst.0 {
            worst = (dev, d, ds[j]);
        }
    }
    report.push(Check::new(
        "near_symmetry",
        "probability at d vs sweep point nearest p-d",
        format!("max relative deviation {} (d={}, partner={})", fmt_num(worst.0), worst.1, worst.2),
        format!("<= {SYMMETRY_TOLERANCE}"),
        !ds.is_empty() && worst.0 <= SYMMETRY_TOLERANCE,
        Threshold::ArtifactChosen,
    ));

    // exact mirror d <-> p+1-d wherever both are swept
    let mut mirror_cases = 0;
    let mut mirror_bad = 0;
    for (i, &d) in ds.iter().enumerate() {
        if let Ok(j) = ds.binary_search(&(p + 1 - d)) {
            mirror_cases += 1;
            mirror_bad += (probs[i] != probs[j]) as u64;
        }
    }
    let mut mirror = Check::zero_violations(
        "exact_mirror_symmetry",
        "probability at d equals probability at p+1-d",
        mirror_cases,
        mirror_bad,
    );
    if mirror_cases == 0 {
        mirror.threshold = Threshold::Informational;
    }
    report.push(mirror);

    let proof_bad = rows.iter().zip(&probs).filter(|(r, pr)| **pr > r.bounds.proof).count() as u64;
    report.push(Check::zero_violations(
        "proof_bound_on_sweep",
        "exact probability <= (1 + (1 + p/d)/m)(1 + d/m)/p",
        rows.len() as u64,
        proof_bad,
    ));
    report
}

/// Collision probability of `{0, 1, d}` over a sweep of `d`.
pub fn run_figure1(
    p: u64,
    m: u64,
    d_values: Option<Vec<u64>>,
    full_sweep: bool,
    settings: &Settings,
) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    let mut ds = match (d_values, full_sweep) {
        (_, true) => (2..p).collect(),
        (Some(v), false) => v,
        (None, false) => symmetric_log_sweep(p, FIGURE1_DEFAULT_POINTS),
    };
    ds.sort_unstable();
    ds.dedup();
    if let Some(&bad) = ds.iter().find(|&&d| d < 2 || d >= p) {
        return Err(Error::Domain(format!("sweep value d={bad} outside [2, p-1]")));
    }
    let rows = figure1_rows(modulus, &ds, settings)?;
    let mut t = table_for(
        ExperimentName::Figure1,
        &[
            "d",
            "exact_probability",
            "statement_bound",
            "proof_bound",
            "ceiling_bound",
            "satisfying_pairs",
        ],
    );
    t.meta("p", p).meta("m", m);
    t.meta("sweep", if full_sweep { "full" } else { "symmetric log-spaced" });
    t.meta("points", ds.len());
    for r in &rows {
        t.push(vec![
            r.d.to_string(),
            fmt_prob(&r.stats.probability()),
            fmt_prob(&r.bounds.statement),
            fmt_prob(&r.bounds.proof),
            fmt_prob(&r.bounds.ceiling),
            r.stats.satisfying_pairs.to_string(),
        ]);
    }
    let report = figure1_report(&modulus, &rows);
    Ok(Outcome {
        experiment: ExperimentName::Figure1,
        table: t,
        report: Some(report),
    })
}

// ---------------------------------------------------------------------------
// exhaustive lemma checks
// ---------------------------------------------------------------------------

/// All ordered triples of pairwise distinct elements of `[p]`.
pub fn all_distinct_triples(p: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for x in 0..p {
        for y in (0..p).filter(|&y| y != x) {
            for z in (0..p).filter(|&z| z != x && z != y) {
                out.push((x, y, z));
            }
        }
    }
    out
}

/// `count` pseudo-random distinct triples, fixed by `seed`.
pub fn sampled_triples(p: u64, count: usize, seed: u64) -> Vec<(u64, u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count && p >= 3 {
        let t = (rng.random_range(0..p), rng.random_range(0..p), rng.random_range(0..p));
        if t.0 != t.1 && t.1 != t.2 && t.0 != t.2 {
            out.push(t);
        }
    }
    out
}

/// Compares the prescribed-image count of every triple with that of its
/// canonical `(0, 1, d)` for `targets_per_triple` random target triples.
/// Returns `(cases, violations)`.
pub fn canonicalization_violations(
    modulus: Modulus,
    triples: &[(u64, u64, u64)],
    targets_per_triple: usize,
    seed: u64,
    settings: &Settings,
) -> Result<(u64, u64)> {
    let m = modulus.m();
    let ex = Exhaustive::new(modulus).with_budget(settings.budget);
    let per_triple = parallel::map_ordered(settings.workers, triples.len() as u64, |i| -> Result<u64> {
        let (x, y, z) = triples[i as usize];
        let c = canonicalize_triple(modulus.p(), x, y, z)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let mut bad = 0;
        for _ in 0..targets_per_triple {
            let tgt = (rng.random_range(0..m), rng.random_range(0..m), rng.random_range(0..m));
            let direct = ex.prescribed_triple((x, y, z), tgt)?;
            let canonical = ex.prescribed_triple((0, 1, c.d), tgt)?;
            bad += (direct != canonical) as u64;
        }
        Ok(bad)
    });
    let mut violations = 0;
    for r in per_triple {
        violations += r?;
    }
    Ok(((triples.len() * targets_per_triple) as u64, violations))
}

/// Exact triple-collision counts `counts[d]` for `d in 2..p` (entries 0 and 1 unused).
pub fn triple_collision_counts(modulus: Modulus, settings: &Settings) -> Result<Vec<u64>> {
    let ex = settings.exhaustive(modulus);
    let mut counts = vec![0u64; modulus.p() as usize];
    for d in 2..modulus.p() {
        counts[d as usize] = ex.triple_collisions(0, 1, d)?.satisfying_pairs;
    }
    Ok(counts)
}

/// Bound violations of each form over `d in 2..p`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundTally {
    pub cases: u64,
    pub statement: u64,
    pub proof: u64,
    pub ceiling: u64,
    /// Largest `exact / proof bound` seen.
    pub worst_proof_ratio: f64,
}

pub fn tally_triple_bounds(modulus: &Modulus, counts: &[u64]) -> Result<BoundTally> {
    let total = modulus.family_size();
    let mut t = BoundTally::default();
    for d in 2..modulus.p() {
        let pr = Probability::new(counts[d as usize] as u128, total);
        let b = triple_bound_formula(modulus, d)?;
        t.cases += 1;
        t.statement += (pr > b.statement) as u64;
        t.proof += (pr > b.proof) as u64;
        t.ceiling += (pr > b.ceiling) as u64;
        t.worst_proof_ratio = t.worst_proof_ratio.max(prob_to_f64(&(pr / b.proof)));
    }
    Ok(t)
}

/// `floor(L_ab/2) <= L_a0 <= 2 L_ab` over every `(a, b)`.
pub fn b_shift_violations(modulus: Modulus, keys: &[u64], workers: usize) -> (u64, u64) {
    let p = modulus.p();
    let bad = parallel::sum_over(workers, p, |a| {
        let mut bins = Vec::new();
        let l0 = max_load_with(HashParams::new_unchecked(a, 0), &modulus, keys, &mut bins);
        (0..p)
            .filter(|&b| {
                let l = max_load_with(HashParams::new_unchecked(a, b), &modulus, keys, &mut bins);
                !(l / 2 <= l0 && l0 <= 2 * l)
            })
            .count() as u64
    });
    (p * p, bad)
}

/// `|L_{a,0} - L_{p-a,0}| <= slack` over every `a in 1..p`.
pub fn sign_flip_violations(modulus: Modulus, keys: &[u64], slack: u64) -> (u64, u64) {
    let p = modulus.p();
    let mut bins = Vec::new();
    let mut bad = 0;
    for a in 1..p {
        let l = max_load_with(HashParams::new_unchecked(a, 0), &modulus, keys, &mut bins);
        let r = max_load_with(HashParams::new_unchecked(p - a, 0), &modulus, keys, &mut bins);
        bad += (l.abs_diff(r) > slack) as u64;
    }
    (p - 1, bad)
}

/// Checks the two consequences of the b-shift window on exact tails:
/// `#{L_ab >= l} <= p * #{L_a0 >= floor(l/2)}` and
/// `p * #{L_a0 >= l} <= #{L_ab >= ceil(l/2)}`, plus monotone tails.
pub fn histogram_consistency_violations(all_b: &MaxLoadHistogram, b_zero: &MaxLoadHistogram, p: u64) -> (u64, u64) {
    let top = all_b.max_observed().max(b_zero.max_observed()) + 1;
    let mut cases = 0;
    let mut bad = 0;
    for l in 1..=top {
        cases += 1;
        let ok = all_b.tail_count(l) <= p * b_zero.tail_count(l / 2)
            && p * b_zero.tail_count(l) <= all_b.tail_count(l.div_ceil(2))
            && all_b.tail(l + 1) <= all_b.tail(l)
            && b_zero.tail(l + 1) <= b_zero.tail(l);
        bad += (!ok) as u64;
    }
    (cases, bad)
}

fn affine_pairs(p: u64) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = [(2, 1), (p - 1, 3), (p / 3, 7), (p / 2 + 1, p / 5)]
        .into_iter()
        .map(|(a, b)| (a % p, b % p))
        .filter(|&(a, _)| a != 0)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Every exhaustive invariant of the load and oracle modules at one `(p, m)`.
pub fn run_lemma_checks(p: u64, m: u64, seed: u64, settings: &Settings) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    let ex = settings.exhaustive(modulus);
    let mut report = AcceptanceReport::new(ExperimentName::Lemmas.as_str());
    let mut t = table_for(
        ExperimentName::Lemmas,
        &["check", "claim", "cases", "violations", "observed", "required", "pass"],
    );
    t.meta("p", p).meta("m", m).meta("seed", seed).meta("generator", GENERATOR);

    let mut add = |report: &mut AcceptanceReport, check: Check, cases: u64, violations: u64| {
        t.push(vec![
            check.name.clone(),
            check.claim.clone(),
            cases.to_string(),
            violations.to_string(),
            check.observed.clone(),
            check.required.clone(),
            if check.passed { "pass" } else { "fail" }.into(),
        ]);
        report.push(check);
    };
    let zero = |name: &str, claim: &str, (cases, bad): (u64, u64)| (Check::zero_violations(name, claim, cases, bad), cases, bad);

    if p >= 3 {
        // canonical triple
        let triples = if p <= 31 {
            all_distinct_triples(p)
        } else {
            sampled_triples(p, 12, seed)
        };
        let (c, n, v) = zero(
            "canonical_triple_counts",
            "prescribed-image count of (x,y,z) equals that of canonical (0,1,d)",
            canonicalization_violations(modulus, &triples, 5, seed, settings)?,
        );
        add(&mut report, c, n, v);

        // decomposition of the collision event by common bin
        let mut bad = 0;
        let sample = &triples[..triples.len().min(2)];
        for &(x, y, z) in sample {
            let mut sum = 0;
            for i in 0..m {
                sum += ex.prescribed_triple((x, y, z), (i, i, i))?.satisfying_pairs;
            }
            bad += (sum != ex.triple_collisions(x, y, z)?.satisfying_pairs) as u64;
        }
        let (c, n, v) = zero(
            "collision_decomposition",
            "sum over bins i of count(i,i,i) equals the collision count",
            (sample.len() as u64, bad),
        );
        add(&mut report, c, n, v);

        // three-element bounds
        let counts = triple_collision_counts(modulus, settings)?;
        let tally = tally_triple_bounds(&modulus, &counts)?;
        let mut c = Check::zero_violations(
            "triple_bound_proof_form",
            "Pr[|h({0,1,d})|=1] <= (1 + (1 + p/d)/m)(1 + d/m)/p for all 2 <= d < p",
            tally.cases,
            tally.proof,
        );
        c.observed = format!("{}; worst exact/bound {}", c.observed, fmt_num(tally.worst_proof_ratio));
        add(&mut report, c, tally.cases, tally.proof);
        for (name, claim, v) in [
            (
                "triple_bound_statement_form",
                "Pr[|h({0,1,d})|=1] <= (1 + max(1, p/(dm))(1 + d/m))/p",
                tally.statement,
            ),
            (
                "triple_bound_ceiling_form",
                "Pr[|h({0,1,d})|=1] <= (1 + ceil(ceil(p/d)/m))(1 + ceil(d/m))/p",
                tally.ceiling,
            ),
        ] {
            let mut c = Check::zero_violations(name, claim, tally.cases, v);
            c.threshold = Threshold::Informational;
            add(&mut report, c, tally.cases, v);
        }

        // interval collisions
        let d_max = m.min(p);
        if d_max >= 3 {
            let profile = ex.interval_collision_profile(d_max)?;
            let bad = (3..=d_max)
                .filter(|&d| profile[d as usize] > counts[(d - 1) as usize])
                .count() as u64;
            let (c, n, v) = zero(
                "interval_within_triple",
                "count(|h([d])|=1) <= count(|h({0,1,d-1})|=1), 3 <= d <= m",
                (d_max - 2, bad),
            );
            add(&mut report, c, n, v);
        }
        if (p as u128) > 3 * (m as u128).pow(2) && m >= 2 {
            let profile = ex.interval_collision_profile(m)?;
            let mut bad = 0;
            for d in 2..=m {
                let lb = interval_lower_bound(&modulus, d)?;
                bad += (Probability::new(profile[d as usize] as u128, modulus.family_size()) < lb) as u64;
            }
            let (c, n, v) = zero(
                "interval_lower_bound",
                "Pr[|h([d])|=1] >= 1/(6dm) for 2 <= d <= m when p > 3m^2",
                (m - 1, bad),
            );
            add(&mut report, c, n, v);
        } else {
            let c = Check::new(
                "interval_lower_bound",
                "Pr[|h([d])|=1] >= 1/(6dm) when p > 3m^2",
                "skipped: p <= 3m^2",
                "p > 3m^2",
                true,
                Threshold::Informational,
            );
            add(&mut report, c, 0, 0);
        }
    }

    // load lemmas on S = [m]
    let interval: Vec<u64> = (0..m).collect();
    let (c, n, v) = zero(
        "b_shift_window",
        "floor(L_ab/2) <= L_a0 <= 2 L_ab for all (a,b), S=[m]",
        b_shift_violations(modulus, &interval, settings.workers),
    );
    add(&mut report, c, n, v);

    if m < p {
        let zero_free: Vec<u64> = (1..=m).collect();
        let (c, n, v) = zero(
            "sign_flip_equality",
            "L_{a,0} = L_{p-a,0} for all a != 0, S={1..m}",
            sign_flip_violations(modulus, &zero_free, 0),
        );
        add(&mut report, c, n, v);
    }
    let (c, n, v) = zero(
        "sign_flip_with_zero",
        "|L_{a,0} - L_{p-a,0}| <= 1 for all a != 0, S=[m]",
        sign_flip_violations(modulus, &interval, 1),
    );
    add(&mut report, c, n, v);

    // exact histograms
    let base = KeySet::interval(m)?;
    let all_b = ex.maxload_histogram(&base, BMode::AllB)?;
    let b_zero = ex.maxload_histogram(&base, BMode::BZero)?;
    let (c, n, v) = zero(
        "histogram_b_zero_consistency",
        "exact all-b and b=0 tails obey the b-shift window and are non-increasing",
        histogram_consistency_violations(&all_b, &b_zero, p),
    );
    add(&mut report, c, n, v);

    let pairs = affine_pairs(p);
    let mut bad = 0;
    for &(alpha, beta) in &pairs {
        let h = ex.maxload_histogram(&KeySet::affine(m, alpha, beta)?, BMode::AllB)?;
        bad += (h.counts != all_b.counts) as u64;
    }
    let (c, n, v) = zero(
        "affine_image_histogram",
        "max-load histogram of {(alpha x + beta) mod p : x in [m]} equals that of [m]",
        (pairs.len() as u64, bad),
    );
    add(&mut report, c, n, v);

    Ok(Outcome {
        experiment: ExperimentName::Lemmas,
        table: t,
        report: Some(report),
    })
}

// ---------------------------------------------------------------------------
// Monte Carlo experiments
// ---------------------------------------------------------------------------

pub const SCALING_TAIL_COLUMNS: std::ops::RangeInclusive<u64> = 2..=10;

pub fn scaling_report(rows: &[crate::estimate::ScalingRow], samples: u64) -> AcceptanceReport {
    let mut report = AcceptanceReport::new(ExperimentName::Scaling.as_str());
    let means: Vec<f64> = rows.iter().map(|r| r.linear.mean).collect();
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    report.push(Check::new(
        "linear_mean_spread",
        "expected max load of the linear family on [m] is O(1)",
        format!("spread {}", fmt_num(spread)),
        format!("<= {SPREAD_TOLERANCE}"),
        !rows.is_empty() && spread <= SPREAD_TOLERANCE,
        Threshold::ArtifactChosen,
    ));

    let drops = rows.windows(2).filter(|w| w[1].random.mean <= w[0].random.mean).count();
    report.push(Check::new(
        "random_mean_increasing",
        "fully random max load grows like log m / log log m",
        format!(
            "means {}",
            rows.iter().map(|r| fmt_num(r.random.mean)).collect::<Vec<_>>().join(" < ")
        ),
        "strictly increasing in m",
        rows.len() >= 2 && drops == 0,
        Threshold::ArtifactChosen,
    ));

    if let Some(last) = rows.last() {
        let gap = last.random.mean - last.linear.mean;
        report.push(Check::new(
            "separation_at_largest_m",
            "fully random mean exceeds the linear mean",
            format!("m={}: {} - {} = {}", last.m, fmt_num(last.random.mean), fmt_num(last.linear.mean), fmt_num(gap)),
            format!(">= {SEPARATION_THRESHOLD}"),
            gap >= SEPARATION_THRESHOLD,
            Threshold::ArtifactChosen,
        ));
        let slope = tail_loglog_slope(&last.linear, 3..=10, TAIL_MIN_HITS / samples as f64);
        report.push(Check::new(
            "tail_loglog_slope",
            "Pr[max load >= l] = O(l^-2)",
            match slope {
                Some(s) => format!("m={}: slope {}", last.m, fmt_num(s)),
                None => format!("m={}: fewer than two tail points", last.m),
            },
            format!("<= {TAIL_SLOPE_LIMIT} over l in [3,10]"),
            slope.is_some_and(|s| s <= TAIL_SLOPE_LIMIT),
            Threshold::ArtifactChosen,
        ));
    }
    report
}

/// Linear family on `[m]` with `p` the first prime `>= m^2`, next to the
/// fully random baseline, for every `m`.
pub fn run_scaling(m_values: &[u64], samples: u64, seed: u64, settings: &Settings) -> Result<Outcome> {
    if m_values.is_empty() {
        return Err(Error::Domain("scaling needs at least one m".into()));
    }
    let rows = scaling_study(m_values, samples, seed, settings.workers)?;
    let mut header: Vec<String> = ["m", "p", "linear_mean", "linear_se", "random_mean", "random_se"]
        .into_iter()
        .map(String::from)
        .collect();
    header.extend(SCALING_TAIL_COLUMNS.map(|l| format!("tail_{l}")));
    let mut t = CsvTable::new(header);
    t.meta("experiment", ExperimentName::Scaling);
    t.meta("samples", samples).meta("seed", seed).meta("generator", GENERATOR);
    t.meta("m_values", m_values.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    t.meta("tails", "tail_l = empirical Pr[linear max load >= l]");
    t.meta("sampling", "(a,b) uniform over [p]^2 including a = 0");
    for r in &rows {
        let mut row = vec![
            r.m.to_string(),
            r.p.to_string(),
            fmt_num(r.linear.mean),
            fmt_num(r.linear.std_error),
            fmt_num(r.random.mean),
            fmt_num(r.random.std_error),
        ];
        row.extend(SCALING_TAIL_COLUMNS.map(|l| fmt_num(r.linear.tail_at(l))));
        t.push(row);
    }
    Ok(Outcome {
        experiment: ExperimentName::Scaling,
        table: t,
        report: Some(scaling_report(&rows, samples)),
    })
}

fn estimate_row(label: &str, e: &McEstimate) -> Vec<String> {
    vec![
        label.to_string(),
        fmt_num(e.mean),
        fmt_num(e.std_error),
        e.samples.to_string(),
        e.counts.keys().next_back().copied().unwrap_or(0).to_string(),
    ]
}

/// Interval `[m]` against its affine image under `x -> alpha x + beta`.
#[allow(clippy::too_many_arguments)]
pub fn run_transform_demo(
    p: u64,
    m: u64,
    alpha: u64,
    beta: u64,
    samples: u64,
    seed: u64,
    exhaustive: bool,
    settings: &Settings,
) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    let interval = KeySet::interval(m)?;
    let image = KeySet::affine(m, alpha, beta)?;
    image.materialize(&modulus)?;
    let mc = |ks: &KeySet| mc_linear_maxload(&McConfig::new(modulus, ks.clone(), samples, seed).with_workers(settings.workers));
    let a = mc(&interval)?;
    let b = mc(&image)?;
    let combined = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    let diff = (a.mean - b.mean).abs();
    let z = if combined > 0.0 { diff / combined } else if diff == 0.0 { 0.0 } else { f64::INFINITY };

    let mut t = table_for(
        ExperimentName::Transform,
        &["key_set", "mean", "std_error", "samples", "max_observed"],
    );
    t.meta("p", p).meta("m", m).meta("alpha", alpha).meta("beta", beta);
    t.meta("samples", samples).meta("seed", seed).meta("generator", GENERATOR);
    t.meta("difference_in_std_errors", fmt_num(z));
    t.push(estimate_row(&interval.to_string(), &a));
    t.push(estimate_row(&image.to_string(), &b));

    let mut report = AcceptanceReport::new(ExperimentName::Transform.as_str());
    report.push(Check::new(
        "affine_mc_agreement",
        "an affine image of [m] has the same max-load distribution as [m]",
        format!("|diff| = {} combined std errors", fmt_num(z)),
        format!("<= {STD_ERROR_TOLERANCE}"),
        z <= STD_ERROR_TOLERANCE,
        Threshold::ArtifactChosen,
    ));
    if exhaustive {
        let ex = settings.exhaustive(modulus);
        let ha = ex.maxload_histogram(&interval, BMode::AllB)?;
        let hb = ex.maxload_histogram(&image, BMode::AllB)?;
        t.meta("exhaustive_interval_mean", fmt_prob(&ha.mean()));
        t.meta("exhaustive_image_mean", fmt_prob(&hb.mean()));
        report.push(Check::new(
            "affine_exact_histogram",
            "exact all-(a,b) max-load histograms coincide",
            if ha.counts == hb.counts { "equal" } else { "different" },
            "equal",
            ha.counts == hb.counts,
            Threshold::Exact,
        ));
    }
    Ok(Outcome {
        experiment: ExperimentName::Transform,
        table: t,
        report: Some(report),
    })
}

/// Exact max-load distribution over the family (or its `b = 0` slice).
pub fn run_maxload_exact(p: u64, m: u64, ks: &KeySet, mode: BMode, settings: &Settings) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    let h = settings.exhaustive(modulus).maxload_histogram(ks, mode)?;
    let mut t = table_for(
        ExperimentName::MaxloadExact,
        &["max_load", "count", "probability", "tail_probability"],
    );
    t.meta("p", p).meta("m", m).meta("key_set", ks).meta("mode", mode);
    t.meta("tuples", h.total).meta("mean", fmt_prob(&h.mean()));
    for (&l, &c) in &h.counts {
        t.push(vec![
            l.to_string(),
            c.to_string(),
            fmt_prob(&Probability::new(c as u128, h.total as u128)),
            fmt_prob(&h.tail(l)),
        ]);
    }
    Ok(Outcome {
        experiment: ExperimentName::MaxloadExact,
        table: t,
        report: None,
    })
}

/// Monte Carlo max-load distribution of the linear family, with the fully
/// random baseline for `|S|` balls in `m` bins alongside.
pub fn run_maxload_mc(p: u64, m: u64, ks: &KeySet, samples: u64, seed: u64, settings: &Settings) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    let cfg = McConfig::new(modulus, ks.clone(), samples, seed).with_workers(settings.workers);
    let lin = mc_linear_maxload(&cfg)?;
    let rnd = mc_fully_random_maxload(m, ks.len(), samples, seed, settings.workers)?;
    let mut t = table_for(
        ExperimentName::MaxloadMc,
        &["max_load", "linear_count", "linear_tail", "random_count", "random_tail"],
    );
    t.meta("p", p).meta("m", m).meta("key_set", ks);
    t.meta("samples", samples).meta("seed", seed).meta("generator", GENERATOR);
    t.meta("linear_mean", fmt_num(lin.mean)).meta("linear_se", fmt_num(lin.std_error));
    t.meta("random_mean", fmt_num(rnd.mean)).meta("random_se", fmt_num(rnd.std_error));
    for note in &lin.notes {
        t.meta("note", note);
    }
    let top = lin.tail.len().max(rnd.tail.len()) as u64;
    for l in 1..=top {
        t.push(vec![
            l.to_string(),
            lin.counts.get(&l).copied().unwrap_or(0).to_string(),
            fmt_num(lin.tail_at(l)),
            rnd.counts.get(&l).copied().unwrap_or(0).to_string(),
            fmt_num(rnd.tail_at(l)),
        ]);
    }
    Ok(Outcome {
        experiment: ExperimentName::MaxloadMc,
        table: t,
        report: None,
    })
}

/// Exact three-element event for `(x, y, z)` and its canonical `(0, 1, d)`.
/// With `targets`, counts the prescribed-image event instead of collision.
pub fn run_collide3(
    p: u64,
    m: u64,
    (x, y, z): (u64, u64, u64),
    targets: Option<(u64, u64, u64)>,
    settings: &Settings,
) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    let ex = settings.exhaustive(modulus);
    let c = canonicalize_triple(p, x, y, z)?;
    let (direct, canonical) = match targets {
        Some(tg) => (ex.prescribed_triple((x, y, z), tg)?, ex.prescribed_triple((0, 1, c.d), tg)?),
        None => (ex.triple_collisions(x, y, z)?, ex.triple_collisions(0, 1, c.d)?),
    };
    let bounds = triple_bound_formula(&modulus, c.d)?;
    let mut t = table_for(
        ExperimentName::Collide3,
        &[
            "x", "y", "z", "d", "alpha", "beta", "event", "satisfying_pairs", "total_pairs", "probability",
            "canonical_satisfying_pairs", "statement_bound", "proof_bound",
        ],
    );
    t.meta("p", p).meta("m", m);
    let event = match targets {
        Some((i, j, k)) => format!("h=({i};{j};{k})"),
        None => "collision".into(),
    };
    t.push(vec![
        x.to_string(),
        y.to_string(),
        z.to_string(),
        c.d.to_string(),
        c.alpha.to_string(),
        c.beta.to_string(),
        event,
        direct.satisfying_pairs.to_string(),
        direct.total_pairs.to_string(),
        fmt_prob(&direct.probability()),
        canonical.satisfying_pairs.to_string(),
        fmt_prob(&bounds.statement),
        fmt_prob(&bounds.proof),
    ]);
    let mut report = AcceptanceReport::new(ExperimentName::Collide3.as_str());
    report.push(Check::zero_violations(
        "canonical_count_equality",
        "count for (x,y,z) equals count for (0,1,d)",
        1,
        (direct != canonical) as u64,
    ));
    if targets.is_none() {
        report.push(Check::zero_violations(
            "proof_bound",
            "collision probability <= (1 + (1 + p/d)/m)(1 + d/m)/p",
            1,
            (canonical.probability() > bounds.proof) as u64,
        ));
    }
    Ok(Outcome {
        experiment: ExperimentName::Collide3,
        table: t,
        report: Some(report),
    })
}

/// Exact `Pr[|h([d])| = 1]` for every `d in 2..=d_max`.
pub fn run_interval_collide(p: u64, m: u64, d_max: u64, settings: &Settings) -> Result<Outcome> {
    let modulus = Modulus::new(p, m)?;
    if d_max < 2 || d_max > p {
        return Err(Error::Domain(format!("need 2 <= d <= p, got d={d_max}")));
    }
    let profile = settings.exhaustive(modulus).interval_collision_profile(d_max)?;
    let mut t = table_for(
        ExperimentName::IntervalCollide,
        &["d", "satisfying_pairs", "probability", "lower_bound"],
    );
    t.meta("p", p).meta("m", m);
    let mut report = AcceptanceReport::new(ExperimentName::IntervalCollide.as_str());
    let (mut cases, mut bad) = (0, 0);
    for d in 2..=d_max {
        let pr = Probability::new(profile[d as usize] as u128, modulus.family_size());
        let lb = interval_lower_bound(&modulus, d).ok();
        if let Some(lb) = lb {
            cases += 1;
            bad += (pr < lb) as u64;
        }
        t.push(vec![
            d.to_string(),
            profile[d as usize].to_string(),
            fmt_prob(&pr),
            lb.map(|b| fmt_prob(&b)).unwrap_or_default(),
        ]);
    }
    let mut c = Check::zero_violations(
        "interval_lower_bound",
        "Pr[|h([d])|=1] >= 1/(6dm) where d <= m and p > 3m^2",
        cases,
        bad,
    );
    if cases == 0 {
        c.threshold = Threshold::Informational;
        c.observed = "not applicable at these parameters".into();
    }
    report.push(c);
    Ok(Outcome {
        experiment: ExperimentName::IntervalCollide,
        table: t,
        report: Some(report),
    })
}

/// Exact mean of the max load of `[m]` over all `(a, b)`.
pub fn exact_interval_mean(p: u64, m: u64, settings: &Settings) -> Result<Probability> {
    let modulus = Modulus::new(p, m)?;
    Ok(settings
        .exhaustive(modulus)
        .maxload_histogram(&KeySet::interval(m)?, BMode::AllB)?
        .mean())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in ExperimentName::ALL {
            assert_eq!(e.as_str().parse::<ExperimentName>().unwrap(), e);
        }
        assert!("nope".parse::<ExperimentName>().is_err());
    }

    #[test]
    fn sweep_shape() {
        let s = symmetric_log_sweep(21787, 64);
        assert!(s.len() >= 50 && s.len() <= 64, "{}", s.len());
        assert_eq!(s[0], 2);
        assert_eq!(*s.last().unwrap(), 21786);
        for &d in &s {
            assert!(s.binary_search(&(21788 - d)).is_ok());
            assert_eq!(s[nearest(&s, 21787 - d)], 21788 - d);
        }
        assert_eq!(symmetric_log_sweep(3, 64), vec![2]);
    }

    #[test]
    fn nearest_picks_closest() {
        let s = [2, 5, 9, 20];
        assert_eq!(nearest(&s, 0), 0);
        assert_eq!(nearest(&s, 6), 1);
        assert_eq!(nearest(&s, 8), 2);
        assert_eq!(nearest(&s, 100), 3);
    }

    #[test]
    fn small_figure1_passes() {
        let out = run_figure1(257, 16, None, false, &Settings::default()).unwrap();
        let r = out.report.unwrap();
        assert!(r.overall(), "{}", r.render_table());
    }

    #[test]
    fn lemma_smoke_configuration() {
        let out = run_lemma_checks(13, 3, 0, &Settings::default()).unwrap();
        let r = out.report.unwrap();
        assert!(r.overall(), "{}", r.render_table());
        assert_eq!(out.table.rows.len(), r.checks.len());
    }

    #[test]
    fn collide3_canonical_equality() {
        let out = run_collide3(13, 3, (2, 5, 11), None, &Settings::default()).unwrap();
        assert!(out.passed());
        assert_eq!(out.table.rows[0][3], "3");
        let out = run_collide3(13, 3, (2, 5, 11), Some((0, 1, 2)), &Settings::default()).unwrap();
        assert!(out.passed());
    }

    #[test]
    fn interval_collide_table() {
        let out = run_interval_collide(197, 8, 8, &Settings::default()).unwrap();
        assert!(out.passed());
        assert_eq!(out.table.rows.len(), 7);
        assert_eq!(out.table.rows[2][1], "1621");
    }

    #[test]
    fn identity_transform_is_identical() {
        let out = run_transform_demo(257, 16, 1, 0, 2000, 3, true, &Settings::default()).unwrap();
        assert_eq!(out.table.rows[0][1..], out.table.rows[1][1..]);
        assert!(out.passed());
    }

    #[test]
    fn budget_refusal_surfaces() {
        let s = Settings { workers: 1, budget: 10 };
        assert!(matches!(run_figure1(257, 16, None, false, &s), Err(Error::BudgetExceeded { .. })));
    }
}

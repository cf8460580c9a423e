//! Mining and ingesting good ABC triples, and cataloguing the family curves
//! built from them.

use crate::abc::{is_good, AbcTriple};
use crate::arith::{format_terminating, parse_decimal, Budget, LogRatio};
use crate::curves::{
    conductor_with_hints, minimal_model_with, szpiro, ConductorResult, Goodness, MinimalModel,
    SzpiroAssessment,
};
use crate::families::{eval_invariants, family, family_model, TorsionKind};
use crate::thresholds::thresholds;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Where a triple list came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Mined(u64),
    File(PathBuf),
}

/// Good positive triples with `a < b < c`, sorted by `(c, a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSource {
    pub origin: Origin,
    pub triples: Vec<AbcTriple>,
}

fn radical_sieve(bound: usize) -> Vec<u32> {
    let mut rad = vec![1u32; bound];
    for p in 2..bound {
        if rad[p] == 1 {
            for m in (p..bound).step_by(p) {
                rad[m] *= p as u32;
            }
        }
    }
    rad
}

/// All good positive triples with `c < bound`.
///
/// For each `c`, only splits with `rad(a) rad(b) < c / rad(c)` can be good,
/// so the scan runs over numbers sorted by radical and stops early.
pub fn mine_triples(bound: u64) -> TripleSource {
    let n = bound as usize;
    let rad = radical_sieve(n.max(1));
    let mut by_rad: Vec<u32> = (1..n as u32).collect();
    by_rad.sort_by_key(|&k| (rad[k as usize], k));
    let rads: Vec<u32> = by_rad.iter().map(|&k| rad[k as usize]).collect();
    let found: Vec<(u64, u64, u64)> = (3..bound)
        .into_par_iter()
        .flat_map_iter(|c| {
            let rc = rad[c as usize] as u64;
            let limit = (c - 1) / rc;
            let mut out = Vec::new();
            if limit >= 2 {
                let end = rads.partition_point(|&r| (r as u64) <= limit);
                for &k in &by_rad[..end] {
                    let a = k as u64;
                    if 2 * a >= c {
                        continue;
                    }
                    let b = c - a;
                    let r = rad[a as usize] as u64 * rad[b as usize] as u64 * rc;
                    if r < c && a.gcd(&b) == 1 {
                        out.push((a, b, c));
                    }
                }
                out.sort_unstable();
            }
            out
        })
        .collect();
    let triples = found
        .into_iter()
        .map(|(a, b, c)| AbcTriple::from_i64(a as i64, b as i64, c as i64).expect("coprime split"))
        .collect();
    TripleSource {
        origin: Origin::Mined(bound),
        triples,
    }
}

/// Reads a triple file: one `a b c` per line, `#` starts a comment.
///
/// Triples are validated (`a + b = c`, coprime, positive, good within
/// `budget`), put in the order `a < b`, sorted and deduplicated.
pub fn ingest_triples(path: &Path, budget: &Budget) -> Result<TripleSource> {
    let text = std::fs::read_to_string(path)?;
    let triples = parse_triples(&text, budget)?;
    Ok(TripleSource {
        origin: Origin::File(path.to_path_buf()),
        triples,
    })
}

/// The parsing and validation behind [`ingest_triples`].
pub fn parse_triples(text: &str, budget: &Budget) -> Result<Vec<AbcTriple>> {
    let mut parsed = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 integers, found {} fields", fields.len()),
            });
        }
        let mut v = Vec::with_capacity(3);
        for f in fields {
            let x: BigInt = f.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not an integer: {f:?}"),
            })?;
            v.push(x);
        }
        let c = v.pop().unwrap();
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        parsed.push((line, a, b, c));
    }

    let mut bad = Vec::new();
    let mut good = Vec::new();
    for (line, a, b, c) in parsed {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let reason = match AbcTriple::new(a.clone(), b.clone(), c.clone()) {
            Err(e) => Some(e.to_string()),
            Ok(t) if !t.is_positive() => Some("entries must be positive".into()),
            Ok(t) => match is_good(&t, budget) {
                Some(true) => {
                    good.push(t);
                    None
                }
                Some(false) => Some("not good".into()),
                None => Some("goodness undecided within budget".into()),
            },
        };
        if let Some(r) = reason {
            bad.push((line, format!("({a}, {b}, {c}): {r}")));
        }
    }
    if let Some((line, _)) = bad.first() {
        let message = bad
            .iter()
            .map(|(l, m)| format!("line {l} {m}"))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::Validation { line: *line, message });
    }
    good.sort_by(|x, y| (x.c(), x.a()).cmp(&(y.c(), y.a())));
    good.dedup();
    Ok(good)
}

/// One family curve in the catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub torsion: TorsionKind,
    pub a: BigInt,
    pub b: BigInt,
    pub minimal: MinimalModel,
    pub conductor: ConductorResult,
    pub szpiro: SzpiroAssessment,
    /// Minimal `(c4, c6)`; equal exactly for isomorphic curves.
    pub class_key: (BigInt, BigInt),
}

/// An entry that could not be built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftFailure {
    pub torsion: TorsionKind,
    pub a: BigInt,
    pub b: BigInt,
    pub message: String,
}

/// Catalog entries plus the work items that failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub failures: Vec<SoftFailure>,
}

/// Options for [`build_catalog_with`].
#[derive(Clone, Debug)]
pub struct CatalogConfig {
    pub kinds: Vec<TorsionKind>,
    /// Adds `F_C5(1, 2^n)` for `n <= c5_max`.
    pub c5_max: Option<u32>,
    pub budget: Budget,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl CatalogConfig {
    pub fn new(kinds: &[TorsionKind]) -> Self {
        CatalogConfig {
            kinds: kinds.to_vec(),
            c5_max: None,
            budget: catalog_budget(0),
            jobs: None,
        }
    }
}

/// The factoring budget catalog runs use by default.
///
/// Discriminants are split along the family's factor values first, so the
/// pieces are small and a short trial range suffices.
pub fn catalog_budget(seed: u64) -> Budget {
    Budget {
        trial_bound: 1 << 12,
        rho_iterations: 1 << 16,
        rho_attempts: 2,
        seed,
    }
}

fn hints(t: TorsionKind, a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    let f = family(t);
    let mut h = vec![a.clone(), b.clone(), a + b, a - b];
    for form in [&f.d, &f.dhat] {
        h.extend(form.factor_values(a, b).into_iter().map(|(v, _)| v));
    }
    h
}

/// Builds the catalog entry for `F_T(a, b)`.
pub fn catalog_entry(t: TorsionKind, a: &BigInt, b: &BigInt, budget: &Budget) -> Result<CatalogEntry> {
    let fm = family_model(t, a, b)?;
    let h = hints(t, a, b);
    let minimal = minimal_model_with(&fm.model, &h, budget)?;
    let inv = &minimal.invariants;
    let conductor = conductor_with_hints(inv, &h, budget);
    let szpiro = szpiro(inv, &conductor);
    Ok(CatalogEntry {
        torsion: t,
        a: a.clone(),
        b: b.clone(),
        class_key: (inv.c4.clone(), inv.c6.clone()),
        minimal,
        conductor,
        szpiro,
    })
}

/// [`build_catalog_with`] using the default configuration.
pub fn build_catalog(src: &TripleSource, kinds: &[TorsionKind]) -> Catalog {
    build_catalog_with(src, &CatalogConfig::new(kinds))
}

/// Builds `F_T(a, b)` and `F_T(b, a)` for every source pair and requested
/// kind, deduplicated per kind by class key and sorted by `(T, class_key)`.
///
/// C5 is not triple-parameterised and is skipped unless `c5_max` is set.
pub fn build_catalog_with(src: &TripleSource, config: &CatalogConfig) -> Catalog {
    let mut work: Vec<(TorsionKind, BigInt, BigInt)> = Vec::new();
    let mut kinds = config.kinds.clone();
    kinds.sort();
    kinds.dedup();
    for &t in &kinds {
        if t == TorsionKind::C5 {
            continue;
        }
        for tr in &src.triples {
            work.push((t, tr.a().clone(), tr.b().clone()));
            work.push((t, tr.b().clone(), tr.a().clone()));
        }
    }
    if let Some(n) = config.c5_max {
        for k in 0..=n {
            work.push((TorsionKind::C5, BigInt::one(), BigInt::one() << k));
        }
    }
    let budget = config.budget;
    let run = || -> Vec<std::result::Result<CatalogEntry, SoftFailure>> {
        work.par_iter()
            .map(|(t, a, b)| {
                catalog_entry(*t, a, b, &budget).map_err(|e| SoftFailure {
                    torsion: *t,
                    a: a.clone(),
                    b: b.clone(),
                    message: e.to_string(),
                })
            })
            .collect()
    };
    let results = match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(e) => entries.push(e),
            Err(f) => failures.push(f),
        }
    }
    entries.sort_by(|x, y| {
        (x.torsion, &x.class_key, &x.a, &x.b).cmp(&(y.torsion, &y.class_key, &y.a, &y.b))
    });
    entries.dedup_by(|later, first| later.torsion == first.torsion && later.class_key == first.class_key);
    failures.sort_by(|x, y| (x.torsion, &x.a, &x.b).cmp(&(y.torsion, &y.a, &y.b)));
    Catalog { entries, failures }
}

/// Per-kind summary of a catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KindSummary {
    pub total: usize,
    pub good: usize,
    pub undecided: usize,
    /// Largest exact `sigma_m` among good entries.
    pub max_sigma: Option<LogRatio>,
}

/// Certified-good entries and the maximal exact `sigma_m` per kind.
///
/// Good entries whose `sigma_m` is only bracketed still count as good but
/// do not enter the maximum.
pub fn good_subset(entries: &[CatalogEntry]) -> (Vec<&CatalogEntry>, BTreeMap<TorsionKind, LogRatio>) {
    let good: Vec<&CatalogEntry> = entries
        .iter()
        .filter(|e| e.szpiro.verdict == Goodness::CertifiedGood)
        .collect();
    let mut max: BTreeMap<TorsionKind, LogRatio> = BTreeMap::new();
    for e in &good {
        if let Some(s) = &e.szpiro.sigma_m {
            let slot = max.entry(e.torsion).or_insert_with(|| s.clone());
            if s.value().to_rational() > slot.value().to_rational() {
                *slot = s.clone();
            }
        }
    }
    (good, max)
}

/// Counts per kind: entries, good, undecided and the maximum `sigma_m`.
pub fn summarize(entries: &[CatalogEntry]) -> BTreeMap<TorsionKind, KindSummary> {
    let (_, max) = good_subset(entries);
    let mut out: BTreeMap<TorsionKind, KindSummary> = BTreeMap::new();
    for e in entries {
        let s = out.entry(e.torsion).or_insert(KindSummary {
            total: 0,
            good: 0,
            undecided: 0,
            max_sigma: max.get(&e.torsion).cloned(),
        });
        s.total += 1;
        match e.szpiro.verdict {
            Goodness::CertifiedGood => s.good += 1,
            Goodness::Unknown => s.undecided += 1,
            Goodness::CertifiedNotGood => {}
        }
    }
    out
}

/// Summary CSV with columns `T,D_T,G_T,undecided,M_T`.
pub fn summary_csv(entries: &[CatalogEntry]) -> String {
    let mut out = String::from("T,D_T,G_T,undecided,M_T\n");
    for (t, s) in summarize(entries) {
        let m = s.max_sigma.map(|m| m.display_sig(SIGMA_DIGITS)).unwrap_or_default();
        let _ = writeln!(out, "{t},{},{},{},{m}", s.total, s.good, s.undecided);
    }
    out
}

/// A histogram bin `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bin {
    pub start: BigRational,
    pub end: BigRational,
    pub count: usize,
}

/// Bins `[k w, (k+1) w)` from the lowest to the highest occupied bin,
/// including empty bins in between.
///
/// # Panics
/// Panics unless `width > 0`.
pub fn histogram(values: &[BigRational], width: &BigRational) -> Vec<Bin> {
    assert!(width.is_positive(), "histogram: width must be positive");
    let mut counts: BTreeMap<BigInt, usize> = BTreeMap::new();
    for v in values {
        *counts.entry((v / width).floor().to_integer()).or_insert(0) += 1;
    }
    let (Some(lo), Some(hi)) = (counts.keys().next().cloned(), counts.keys().next_back().cloned()) else {
        return Vec::new();
    };
    let mut bins = Vec::new();
    let mut k = lo;
    while k <= hi {
        let start = BigRational::from_integer(k.clone()) * width;
        bins.push(Bin {
            end: &start + width,
            start,
            count: counts.get(&k).copied().unwrap_or(0),
        });
        k += 1;
    }
    bins
}

fn rational_text(v: &BigRational) -> String {
    format_terminating(v).unwrap_or_else(|| v.to_string())
}

/// Histogram CSV with columns `bin_start,bin_end,count`.
pub fn histogram_csv(bins: &[Bin]) -> String {
    let mut out = String::from("bin_start,bin_end,count\n");
    for b in bins {
        let _ = writeln!(out, "{},{},{}", rational_text(&b.start), rational_text(&b.end), b.count);
    }
    out
}

/// Significant digits of the `sigma_m` values written to catalog files.
pub const SIGMA_DIGITS: u32 = 10;

/// Conductor as stored in a catalog record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConductorRecord {
    Exact { exact: String },
    Bounds { lower: String, upper: String },
}

/// `sigma_m` as stored in a catalog record, rounded to `digits` significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaRecord {
    Exact { exact: String, digits: u32 },
    Bounds { lower: String, upper: String, digits: u32 },
}

/// One line of a catalog `.jsonl` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub torsion: TorsionKind,
    pub a: String,
    pub b: String,
    pub c4: String,
    pub c6: String,
    pub disc: String,
    pub conductor: ConductorRecord,
    pub sigma: SigmaRecord,
    pub verdict: Goodness,
}

impl CatalogRecord {
    /// Exact `sigma_m` as a rational, when the record has one.
    pub fn sigma_exact(&self) -> Option<BigRational> {
        match &self.sigma {
            SigmaRecord::Exact { exact, .. } => parse_decimal(exact),
            SigmaRecord::Bounds { .. } => None,
        }
    }
}

impl From<&CatalogEntry> for CatalogRecord {
    fn from(e: &CatalogEntry) -> Self {
        let inv = &e.minimal.invariants;
        let conductor = match &e.conductor.exact {
            Some(n) => ConductorRecord::Exact { exact: n.to_string() },
            None => ConductorRecord::Bounds {
                lower: e.conductor.lower.to_string(),
                upper: e.conductor.upper.to_string(),
            },
        };
        let digits = SIGMA_DIGITS;
        let sigma = match &e.szpiro.sigma_m {
            Some(s) => SigmaRecord::Exact {
                exact: s.display_sig(digits),
                digits,
            },
            None => SigmaRecord::Bounds {
                lower: e.szpiro.sigma_lower.display_sig(digits),
                upper: e.szpiro.sigma_upper.display_sig(digits),
                digits,
            },
        };
        CatalogRecord {
            torsion: e.torsion,
            a: e.a.to_string(),
            b: e.b.to_string(),
            c4: inv.c4.to_string(),
            c6: inv.c6.to_string(),
            disc: inv.disc.to_string(),
            conductor,
            sigma,
            verdict: e.szpiro.verdict,
        }
    }
}

/// The catalog as JSON lines, one entry per line.
pub fn to_jsonl(entries: &[CatalogEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(&CatalogRecord::from(e)).expect("records serialise"));
        out.push('\n');
    }
    out
}

/// Parses catalog JSON lines; blank lines are skipped.
pub fn read_jsonl(text: &str) -> Result<Vec<CatalogRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    s.parse()
        .map_err(|_| Error::Validation { line: 0, message: format!("{what} is not an integer: {s:?}") })
}

/// Recomputes a record from its `(c4, c6)` and checks every stored field.
pub fn verify_record(rec: &CatalogRecord, budget: &Budget) -> Result<()> {
    let fail = |m: String| Error::Validation { line: 0, message: m };
    let a = parse_int(&rec.a, "a")?;
    let b = parse_int(&rec.b, "b")?;
    let e = catalog_entry(rec.torsion, &a, &b, budget)?;
    let again = CatalogRecord::from(&e);
    if again.c4 != rec.c4 || again.c6 != rec.c6 || again.disc != rec.disc {
        return Err(fail(format!("{} ({a}, {b}): minimal invariants differ", rec.torsion)));
    }
    let consistent = match (&rec.conductor, &again.conductor) {
        (ConductorRecord::Exact { exact: x }, ConductorRecord::Exact { exact: y }) => x == y,
        (_, ConductorRecord::Exact { exact }) | (ConductorRecord::Exact { exact }, _) => {
            let (lo, hi) = match (&rec.conductor, &again.conductor) {
                (ConductorRecord::Bounds { lower, upper }, _) | (_, ConductorRecord::Bounds { lower, upper }) => {
                    (lower, upper)
                }
                _ => unreachable!(),
            };
            let n: BigUint = exact.parse().map_err(|_| fail("bad conductor".into()))?;
            let lo: BigUint = lo.parse().map_err(|_| fail("bad conductor".into()))?;
            let hi: BigUint = hi.parse().map_err(|_| fail("bad conductor".into()))?;
            lo <= n && n <= hi
        }
        (ConductorRecord::Bounds { .. }, ConductorRecord::Bounds { .. }) => true,
    };
    if !consistent {
        return Err(fail(format!("{} ({a}, {b}): conductor differs", rec.torsion)));
    }
    let decided = |g: Goodness| g != Goodness::Unknown;
    if decided(rec.verdict) && decided(again.verdict) && rec.verdict != again.verdict {
        return Err(fail(format!("{} ({a}, {b}): verdict differs", rec.torsion)));
    }
    Ok(())
}

/// Outcome of checking the database lemma over a catalog.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    /// Entries satisfying every premise.
    pub applicable: usize,
    /// Applicable entries certified not good.
    pub violations: Vec<(TorsionKind, BigInt, BigInt)>,
    /// Applicable entries whose verdict stayed unknown.
    pub undecided: usize,
}

/// Premises: `T != C5`, `b / a > xi_T`, `a` even for C10, the minimal model
/// semistable with discriminant `D_T(a, b)`. The conclusion is goodness.
///
/// Every entry is assumed to come from a good triple.
pub fn lemma_applies(e: &CatalogEntry) -> bool {
    let t = e.torsion;
    if t == TorsionKind::C5 || e.a.is_zero() {
        return false;
    }
    if t == TorsionKind::C10 && e.a.is_odd() {
        return false;
    }
    let ratio = BigRational::new(e.b.clone(), e.a.clone());
    if let Some(xi) = &thresholds(t).xi {
        if !xi.is_below(&ratio) {
            return false;
        }
    }
    let inv = &e.minimal.invariants;
    if !inv.c4.gcd(&inv.disc).is_one() {
        return false;
    }
    match eval_invariants(t, &e.a, &e.b) {
        Ok(fi) => fi.d_t == BigRational::from_integer(inv.disc.clone()),
        Err(_) => false,
    }
}

/// Checks the database lemma on every entry.
pub fn lemma_check(entries: &[CatalogEntry]) -> LemmaReport {
    let mut r = LemmaReport::default();
    for e in entries.iter().filter(|e| lemma_applies(e)) {
        r.applicable += 1;
        match e.szpiro.verdict {
            Goodness::CertifiedGood => {}
            Goodness::Unknown => r.undecided += 1,
            Goodness::CertifiedNotGood => r.violations.push((e.torsion, e.a.clone(), e.b.clone())),
        }
    }
    r
}

/// Good entries' exact `sigma_m` values, ready for [`histogram`].
pub fn sigma_values(records: &[CatalogRecord], good_only: bool) -> Vec<BigRational> {
    records
        .iter()
        .filter(|r| !good_only || r.verdict == Goodness::CertifiedGood)
        .filter_map(|r| r.sigma_exact())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn histogram_example() {
        let bins = histogram(&[q("6.1"), q("6.15"), q("6.3")], &q("0.25"));
        let rows: Vec<_> = bins.iter().map(|b| (rational_text(&b.start), b.count)).collect();
        assert_eq!(rows, vec![("6".to_string(), 2), ("6.25".to_string(), 1)]);
        assert!(histogram(&[], &q("0.25")).is_empty());
    }

    #[test]
    fn small_mining() {
        assert!(mine_triples(3).triples.is_empty());
        let t = mine_triples(82).triples;
        let flat: Vec<(i64, i64)> = t
            .iter()
            .map(|x| (x.a().to_i64().unwrap(), x.b().to_i64().unwrap()))
            .collect();
        assert_eq!(flat, vec![(1, 8), (5, 27), (1, 48), (1, 63), (1, 80), (32, 49)]);
    }

    #[test]
    fn parse_errors() {
        let b = Budget::default();
        assert!(matches!(parse_triples("1 8\n", &b), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_triples("# x\n1 2 4\n", &b), Err(Error::Validation { line: 2, .. })));
        let t = parse_triples("8 1 9 # swapped\n1 8 9\n", &b).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].a(), &BigInt::from(1));
    }
}

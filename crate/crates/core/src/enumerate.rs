//! Enumeration of totally ramified extensions with prescribed invariants.
//!
//! Representation invariants:
//! - one enumeration task per (δ_0 class, A*-class): the task representative
//!   is the first member of the A*-class that is valid for that δ_0, and
//!   classes with no valid member contribute nothing;
//! - records appear in one deterministic order: polygons in enumeration
//!   order, then orbits by canonical tuple, then δ_0 classes in residue
//!   order, then A*-classes by first member, then template stream order;
//! - `aut_count` is `Some` exactly when the root-counting filter ran on the
//!   record's class, and then divides n and is at most `aut_bound`;
//! - the `siblings_merged` of one class sum to its template count, so every
//!   streamed polynomial is accounted for by exactly one record.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::LocalField;
use crate::polygon::{enumerate_polygons, ore_range, polygon_sort_key, RamPolygon};
use crate::residual::{
    aut_upper_bound, enumerate_residual_tuples, orbit, partition_star, validate_residuals,
    InvariantOrbit, ResidualCheck, ResidualTuple,
};
use crate::residue::ResidueElem;
use crate::roots::{aut_count, filter_minimal};
use crate::template::{
    build_template, template_count, template_stream, uniqueness_guarantee, EisPoly,
};

/// Flags controlling enumeration.
#[derive(Debug, Clone, Default)]
pub struct EnumOptions {
    /// Emit every streamed polynomial even when distinctness is not
    /// guaranteed, skipping the root-counting filter.
    pub no_filter: bool,
}

/// One totally ramified extension, named by an Eisenstein generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionRecord {
    /// Eisenstein polynomial generating the extension.
    pub generator: EisPoly,
    /// Ramification polygon of the extension.
    pub polygon: RamPolygon,
    /// Canonical representative of the residual-polynomial orbit.
    pub invariant: ResidualTuple,
    /// Representative of the constant-coefficient class of the generator.
    pub delta0: ResidueElem,
    /// Upper bound for the number of automorphisms.
    pub aut_bound: u64,
    /// Exact automorphism count, present when the filter ran on the class.
    pub aut_count: Option<u64>,
    /// Streamed polynomials defining this extension, itself included.
    pub siblings_merged: u64,
}

impl ExtensionRecord {
    /// JSON form, one object per record.
    pub fn to_json(&self, k: &LocalField) -> serde_json::Value {
        let rf = k.residue_field();
        serde_json::json!({
            "generator": self.generator.to_json(k),
            "generator_int": self.generator.to_integer_string(k),
            "polygon": self.polygon.to_json(),
            "invariant": self.invariant.to_json(rf),
            "delta0": rf.coords(self.delta0),
            "aut_bound": self.aut_bound,
            "aut_count": self.aut_count,
            "siblings_merged": self.siblings_merged,
        })
    }
}

/// All residual-polynomial orbits realizable on polygon `r`, collected
/// across every constant-coefficient class and sorted by canonical tuple.
pub fn invariant_orbits(k: &LocalField, r: &RamPolygon) -> Result<Vec<InvariantOrbit>> {
    let rf = k.residue_field();
    let mut by_canonical: BTreeMap<ResidualTuple, InvariantOrbit> = BTreeMap::new();
    for delta0 in rf.nth_power_class_reps(r.n()) {
        for a in enumerate_residual_tuples(k, r, delta0)? {
            let o = orbit(k, r, &a)?;
            by_canonical.entry(o.canonical().clone()).or_insert(o);
        }
    }
    Ok(by_canonical.into_values().collect())
}

// One unit of work: a single template build (and possibly a filter pass).
#[derive(Debug, Clone)]
struct ClassTask<'a> {
    r: &'a RamPolygon,
    canonical: ResidualTuple,
    delta0: ResidueElem,
    rep: ResidualTuple,
}

/// Tasks of one orbit, in (δ_0, A*-class) order.
fn orbit_tasks<'a>(
    k: &LocalField,
    r: &'a RamPolygon,
    o: &InvariantOrbit,
) -> Result<Vec<ClassTask<'a>>> {
    let rf = k.residue_field();
    let classes = partition_star(k, r, o);
    let mut tasks = Vec::new();
    for delta0 in rf.nth_power_class_reps(r.n()) {
        for class in &classes {
            let mut rep = None;
            for a in class {
                if matches!(validate_residuals(k, r, a, delta0)?, ResidualCheck::Valid) {
                    rep = Some(a.clone());
                    break;
                }
            }
            if let Some(rep) = rep {
                tasks.push(ClassTask { r, canonical: o.canonical().clone(), delta0, rep });
            }
        }
    }
    Ok(tasks)
}

/// Materialize the records of one task: stream the template and, when
/// distinctness is not guaranteed, keep one generator per extension.
fn run_task(k: &LocalField, t: &ClassTask<'_>, opts: &EnumOptions) -> Result<Vec<ExtensionRecord>> {
    let n = t.r.n();
    let template = build_template(k, t.r, &t.rep, t.delta0)?;
    let polys: Vec<EisPoly> = template_stream(&template).collect();
    let bound = aut_upper_bound(k, t.r, &t.rep)?;
    let record = |generator: EisPoly, aut: Option<u64>, merged: u64| ExtensionRecord {
        generator,
        polygon: t.r.clone(),
        invariant: t.canonical.clone(),
        delta0: t.delta0,
        aut_bound: bound,
        aut_count: aut,
        siblings_merged: merged,
    };
    if opts.no_filter || uniqueness_guarantee(k, t.r, &t.rep)?.is_guaranteed() {
        return Ok(polys.into_iter().map(|g| record(g, None, 1)).collect());
    }
    let outcome = filter_minimal(k, &polys)?;
    let mut merged = vec![0u64; outcome.kept.len()];
    for &pos in &outcome.assignment {
        merged[pos] += 1;
    }
    outcome
        .kept
        .iter()
        .zip(merged)
        .map(|(&idx, m)| {
            let aut = aut_count(k, &polys[idx])?;
            debug_assert!(n % aut == 0 && aut <= bound);
            Ok(record(polys[idx].clone(), Some(aut), m))
        })
        .collect()
}

// Run tasks in parallel; the collected order is the task order, so the
// result does not depend on scheduling.
fn run_tasks(
    k: &LocalField,
    tasks: &[ClassTask<'_>],
    opts: &EnumOptions,
) -> Result<Vec<ExtensionRecord>> {
    let per_task: Vec<Vec<ExtensionRecord>> = tasks
        .par_iter()
        .map(|t| run_task(k, t, opts))
        .collect::<Result<_>>()?;
    Ok(per_task.into_iter().flatten().collect())
}

fn count_tasks(k: &LocalField, tasks: &[ClassTask<'_>]) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for t in tasks {
        total += template_count(&build_template(k, t.r, &t.rep, t.delta0)?);
    }
    Ok(total)
}

/// All extensions with polygon `r` and residual invariant in the orbit `o`,
/// one record per extension.
pub fn all_extensions(
    k: &LocalField,
    r: &RamPolygon,
    o: &InvariantOrbit,
    opts: &EnumOptions,
) -> Result<Vec<ExtensionRecord>> {
    run_tasks(k, &orbit_tasks(k, r, o)?, opts)
}

/// Number of template polynomials behind [`all_extensions`]; an exact
/// extension count when every class is guaranteed distinct, an upper bound
/// otherwise.
pub fn count_extensions(k: &LocalField, r: &RamPolygon, o: &InvariantOrbit) -> Result<BigUint> {
    count_tasks(k, &orbit_tasks(k, r, o)?)
}

fn polygon_tasks<'a>(k: &LocalField, r: &'a RamPolygon) -> Result<Vec<ClassTask<'a>>> {
    let mut tasks = Vec::new();
    for o in invariant_orbits(k, r)? {
        tasks.extend(orbit_tasks(k, r, &o)?);
    }
    Ok(tasks)
}

/// All extensions with ramification polygon `r`, over every orbit.
pub fn all_extensions_for_polygon(
    k: &LocalField,
    r: &RamPolygon,
    opts: &EnumOptions,
) -> Result<Vec<ExtensionRecord>> {
    run_tasks(k, &polygon_tasks(k, r)?, opts)
}

/// Template-count total of [`all_extensions_for_polygon`].
pub fn count_extensions_for_polygon(k: &LocalField, r: &RamPolygon) -> Result<BigUint> {
    count_tasks(k, &polygon_tasks(k, r)?)
}

fn check_j0(k: &LocalField, n: u64, j0: u64) -> Result<()> {
    let admissible = ore_range(k, n);
    if !admissible.contains(&j0) {
        return Err(Error::InvalidInput(format!(
            "discriminant exponent {} (J_0 = {j0}) violates the Ore conditions for n = {n}; \
             admissible J_0: {admissible:?}",
            n + j0 - 1,
        )));
    }
    Ok(())
}

/// All extensions of degree `n` with discriminant exponent n + J_0 − 1,
/// over every admissible polygon and orbit.
pub fn all_extensions_by_disc(
    k: &LocalField,
    n: u64,
    j0: u64,
    opts: &EnumOptions,
) -> Result<Vec<ExtensionRecord>> {
    check_j0(k, n, j0)?;
    let polygons = enumerate_polygons(k, n, j0)?;
    let mut records = Vec::new();
    for r in &polygons {
        records.extend(run_tasks(k, &polygon_tasks(k, r)?, opts)?);
    }
    Ok(records)
}

/// Template-count total of [`all_extensions_by_disc`].
pub fn count_extensions_by_disc(k: &LocalField, n: u64, j0: u64) -> Result<BigUint> {
    check_j0(k, n, j0)?;
    let mut total = BigUint::zero();
    for r in enumerate_polygons(k, n, j0)? {
        total += count_tasks(k, &polygon_tasks(k, &r)?)?;
    }
    Ok(total)
}

/// One line of [`summarize`]: the records sharing a polygon, orbit and δ_0.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    /// Shared ramification polygon.
    pub polygon: RamPolygon,
    /// Canonical orbit representative.
    pub invariant: ResidualTuple,
    /// Constant-coefficient class.
    pub delta0: ResidueElem,
    /// Number of extensions (records) in the group.
    pub extensions: u64,
    /// Number of template polynomials the records absorb.
    pub polynomials: u64,
    /// Whether the root-counting filter ran for any class of the group.
    pub filtered: bool,
    /// Largest automorphism-count bound among the group's classes.
    pub aut_bound: u64,
    /// Known automorphism counts as (value, multiplicity), ascending.
    pub aut_counts: Vec<(u64, u64)>,
}

impl SummaryRow {
    /// JSON form, one object per row.
    pub fn to_json(&self, k: &LocalField) -> serde_json::Value {
        let rf = k.residue_field();
        serde_json::json!({
            "polygon": self.polygon.to_json(),
            "invariant": self.invariant.to_json(rf),
            "delta0": rf.coords(self.delta0),
            "extensions": self.extensions,
            "polynomials": self.polynomials,
            "filtered": self.filtered,
            "aut_bound": self.aut_bound,
            "aut_counts": self.aut_counts,
        })
    }
}

/// Group records by (polygon, orbit, δ_0) and tally each group. The rows
/// are sorted by that key, so equal record sets summarize identically; an
/// empty input gives no rows.
pub fn summarize(records: &[ExtensionRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(Vec<i64>, ResidualTuple, ResidueElem), Vec<&ExtensionRecord>> =
        BTreeMap::new();
    for rec in records {
        groups
            .entry((polygon_sort_key(&rec.polygon), rec.invariant.clone(), rec.delta0))
            .or_default()
            .push(rec);
    }
    groups
        .into_iter()
        .map(|((_, invariant, delta0), group)| {
            let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
            for rec in &group {
                if let Some(a) = rec.aut_count {
                    *tally.entry(a).or_default() += 1;
                }
            }
            SummaryRow {
                polygon: group[0].polygon.clone(),
                invariant,
                delta0,
                extensions: group.len() as u64,
                polynomials: group.iter().map(|rec| rec.siblings_merged).sum(),
                filtered: group.iter().any(|rec| rec.aut_count.is_some()),
                aut_bound: group.iter().map(|rec| rec.aut_bound).max().unwrap_or(0),
                aut_counts: tally.into_iter().collect(),
            }
        })
        .collect()
}

/// What an [`EnumerationJob`] enumerates.
#[derive(Debug, Clone)]
pub enum Selector {
    /// Every polygon and orbit with the given degree and J_0.
    ByDisc {
        /// Extension degree.
        n: u64,
        /// Discriminant exponent minus n − 1.
        j0: u64,
    },
    /// Every orbit of one polygon.
    ByPolygon(RamPolygon),
    /// The orbit of one residual tuple on a polygon.
    ByOrbit(RamPolygon, ResidualTuple),
}

/// A complete enumeration request, as assembled by a caller or a CLI.
#[derive(Debug, Clone)]
pub struct EnumerationJob {
    /// Which extensions to enumerate.
    pub selector: Selector,
    /// Report the template-count total instead of materializing records.
    pub count_only: bool,
    /// Skip the root-counting filter.
    pub no_filter: bool,
    /// Worker threads; 0 uses the global thread pool.
    pub threads: usize,
}

/// Result of [`run_job`].
#[derive(Debug, Clone)]
pub enum EnumerationOutcome {
    /// Materialized records.
    Records(Vec<ExtensionRecord>),
    /// Count-only total.
    Count(BigUint),
}

/// Run a job against base field `k`.
pub fn run_job(k: &LocalField, job: &EnumerationJob) -> Result<EnumerationOutcome> {
    let opts = EnumOptions { no_filter: job.no_filter };
    let exec = || -> Result<EnumerationOutcome> {
        match (&job.selector, job.count_only) {
            (Selector::ByDisc { n, j0 }, true) => {
                Ok(EnumerationOutcome::Count(count_extensions_by_disc(k, *n, *j0)?))
            }
            (Selector::ByDisc { n, j0 }, false) => {
                Ok(EnumerationOutcome::Records(all_extensions_by_disc(k, *n, *j0, &opts)?))
            }
            (Selector::ByPolygon(r), true) => {
                Ok(EnumerationOutcome::Count(count_extensions_for_polygon(k, r)?))
            }
            (Selector::ByPolygon(r), false) => {
                Ok(EnumerationOutcome::Records(all_extensions_for_polygon(k, r, &opts)?))
            }
            (Selector::ByOrbit(r, a), true) => {
                let o = orbit(k, r, a)?;
                Ok(EnumerationOutcome::Count(count_extensions(k, r, &o)?))
            }
            (Selector::ByOrbit(r, a), false) => {
                let o = orbit(k, r, a)?;
                Ok(EnumerationOutcome::Records(all_extensions(k, r, &o, &opts)?))
            }
        }
    };
    if job.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(job.threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build thread pool: {e}")))?;
        pool.install(exec)
    } else {
        exec()
    }
}

//! Coefficient templates: the digit-level description of all Eisenstein
//! polynomials attached to one (polygon, residual tuple, δ_0) class.
//!
//! A template is an n × c matrix of cells. Cell (i, j), with coefficient
//! index 0 ≤ i < n and π-power 1 ≤ j ≤ c, lists the residue digits the
//! coefficient φ_i may carry at π^j; the depth of the cell is n(j−1) + i,
//! the α-valuation of a change in that digit. Digits beyond level c never
//! move the class of the extension (Krasner), so they are pinned to zero.
//!
//! Representation invariants:
//! - `cells[i][j−1].values` is sorted by packed value and duplicate-free;
//! - cell (0, 1) is the singleton {δ_0};
//! - cells fixed by the residual tuple are nonzero singletons;
//! - a cell's depth determines its role: depths on the slope ladder
//!   n·φ_R(m) are cokernel cells, depths below the coefficient bounds are
//!   zero, every other depth within bounds is free.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{LocalField, Valuation};
use crate::polygon::{krasner_cutoff_build, polygon_of_valuations, RamPolygon};
use crate::residual::{
    component_residual, max_component_slope, tuple_from_digits, validate_residuals,
    ResidualCheck, ResidualTuple,
};
use crate::residue::{additive_map_analysis, ResidueElem};

/// How a cell's value set was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellTag {
    /// Depth below the coefficient bounds, or beyond the reach of any
    /// perturbation: the digit is zero.
    ZeroDefault,
    /// Unconstrained digit: all q residues.
    Free,
    /// Depth n·φ_R(m): coset representatives of the image of S_m.
    Cokernel,
    /// Unit digit pinned by the residual tuple at a ramification point.
    FixedByTuple,
    /// The constant-coefficient digit (0, 1) = δ_0.
    FixedDelta0,
}

impl std::fmt::Display for CellTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CellTag::ZeroDefault => "zero-default",
            CellTag::Free => "free",
            CellTag::Cokernel => "cokernel",
            CellTag::FixedByTuple => "fixed-by-tuple",
            CellTag::FixedDelta0 => "fixed-delta0",
        };
        f.write_str(s)
    }
}

/// One digit cell: the allowed residues and their provenance.
#[derive(Debug, Clone)]
pub struct Cell {
    values: Vec<ResidueElem>,
    tag: CellTag,
}

impl Cell {
    /// Allowed digits, sorted by packed value.
    pub fn values(&self) -> &[ResidueElem] {
        &self.values
    }

    /// Provenance of the value set.
    pub fn tag(&self) -> CellTag {
        self.tag
    }
}

/// The digit template of one (polygon, residual tuple, δ_0) class.
#[derive(Debug, Clone)]
pub struct CoeffTemplate {
    n: u64,
    c: u64,
    delta0: ResidueElem,
    // cells[i][j-1] constrains the digit of φ_i at π^j
    cells: Vec<Vec<Cell>>,
}

impl CoeffTemplate {
    /// Degree of the polynomials described.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Digit depth of the matrix (digits at π^j for j > c are zero).
    pub fn c(&self) -> u64 {
        self.c
    }

    /// Constant-coefficient unit class.
    pub fn delta0(&self) -> ResidueElem {
        self.delta0
    }

    /// Cell for coefficient i at π-power j (1 ≤ j ≤ c).
    pub fn cell(&self, i: u64, j: u64) -> &Cell {
        assert!(i < self.n && (1..=self.c).contains(&j), "cell index out of range");
        &self.cells[i as usize][(j - 1) as usize]
    }

    /// Number of polynomials described: the product of the cell sizes.
    pub fn count(&self) -> BigUint {
        template_count(self)
    }

    /// Cells with more than one allowed digit, as (i, j) addresses in
    /// row-major order.
    pub fn variable_cells(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 1..=self.c {
                if self.cell(i, j).values.len() > 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// JSON form: δ_0 coordinates plus every non-default cell.
    pub fn to_json(&self, k: &LocalField) -> serde_json::Value {
        let rf = k.residue_field();
        let mut cells = Vec::new();
        for i in 0..self.n {
            for j in 1..=self.c {
                let cell = self.cell(i, j);
                if cell.tag == CellTag::ZeroDefault {
                    continue;
                }
                let vals: Vec<serde_json::Value> = cell
                    .values
                    .iter()
                    .map(|&v| serde_json::json!(rf.coords(v)))
                    .collect();
                cells.push(serde_json::json!({
                    "i": i,
                    "j": j,
                    "values": vals,
                    "tag": cell.tag.to_string(),
                }));
            }
        }
        serde_json::json!({
            "n": self.n,
            "c": self.c,
            "delta0": rf.coords(self.delta0),
            "cells": cells,
        })
    }
}

/// An Eisenstein polynomial x^n + Σ φ_i x^i given by the residue digits of
/// its non-leading coefficients: `digits[i][j−1]` is the digit of φ_i at
/// π^j. Digits at π-powers beyond the stored depth are zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EisPoly {
    /// Degree.
    pub n: u64,
    /// digits[i][j-1]: digit of φ_i at π^j, for 0 ≤ i < n.
    pub digits: Vec<Vec<ResidueElem>>,
}

impl EisPoly {
    /// The digit of φ_i at π^j (zero beyond the stored depth).
    pub fn digit(&self, i: u64, j: u64) -> ResidueElem {
        debug_assert!(i < self.n && j >= 1);
        self.digits[i as usize]
            .get((j - 1) as usize)
            .copied()
            .unwrap_or(ResidueElem::ZERO)
    }

    /// Coefficient valuations v_π(φ_0), …, v_π(φ_n) as read from the
    /// digits (the leading coefficient is 1).
    pub fn valuations(&self) -> Vec<Valuation> {
        let mut vals: Vec<Valuation> = self
            .digits
            .iter()
            .map(|row| match row.iter().position(|d| !d.is_zero()) {
                Some(idx) => Valuation::Finite(idx as u64 + 1),
                None => Valuation::Infinite,
            })
            .collect();
        vals.push(Valuation::Finite(0));
        vals
    }

    /// Digit-expand integer coefficients c_0..c_n (monic: c_n = 1) to the
    /// given digit depth.
    pub fn from_int_coeffs(k: &LocalField, coeffs: &[i64], depth: u64) -> Result<EisPoly> {
        if coeffs.len() < 3 {
            return Err(Error::NotEisenstein("degree must be at least 2".into()));
        }
        let n = (coeffs.len() - 1) as u64;
        if coeffs[n as usize] != 1 {
            return Err(Error::NotEisenstein("polynomial must be monic".into()));
        }
        let ctx = k.tower_ctx(depth / k.e_abs() + 2);
        let mut digits = Vec::with_capacity(n as usize);
        for &cf in &coeffs[..n as usize] {
            let x = ctx.from_int(cf);
            let all = ctx.to_digits(&x, depth + 1)?;
            if !all[0].is_zero() {
                return Err(Error::NotEisenstein(
                    "every non-leading coefficient must be divisible by π".into(),
                ));
            }
            digits.push(all[1..].to_vec());
        }
        Ok(EisPoly { n, digits })
    }

    /// JSON form {"n": …, "coeffs": [[i, [[j, digit-coords], …]], …]},
    /// listing nonzero digits only.
    pub fn to_json(&self, k: &LocalField) -> serde_json::Value {
        let rf = k.residue_field();
        let mut coeffs = Vec::new();
        for (i, row) in self.digits.iter().enumerate() {
            let entries: Vec<serde_json::Value> = row
                .iter()
                .enumerate()
                .filter(|(_, d)| !d.is_zero())
                .map(|(idx, &d)| serde_json::json!([idx + 1, rf.coords(d)]))
                .collect();
            if !entries.is_empty() {
                coeffs.push(serde_json::json!([i, entries]));
            }
        }
        serde_json::json!({ "n": self.n, "coeffs": coeffs })
    }

    /// Integer rendering "x^9+6x^6+18x+3" with coefficients Σ d·p^j; only
    /// available when the base field is a rational p-adic field.
    pub fn to_integer_string(&self, k: &LocalField) -> Option<String> {
        if k.f() != 1 || k.e_abs() != 1 {
            return None;
        }
        let p = k.p() as u128;
        let mut terms: Vec<String> = vec![match self.n {
            1 => "x".into(),
            _ => format!("x^{}", self.n),
        }];
        for i in (0..self.n).rev() {
            let mut val: u128 = 0;
            let mut pw: u128 = 1;
            for d in &self.digits[i as usize] {
                pw *= p;
                val += d.0 as u128 * pw;
            }
            if val == 0 {
                continue;
            }
            terms.push(match i {
                0 => format!("{val}"),
                1 => format!("{val}x"),
                _ => format!("{val}x^{i}"),
            });
        }
        Some(terms.join("+"))
    }
}

/// Build the template for residual tuple `a` on polygon `r` with constant
/// class δ_0. Inconsistent inputs (a tuple invalid for this polygon and
/// δ_0) are a domain error; no cell is produced in that case.
pub fn build_template(
    k: &LocalField,
    r: &RamPolygon,
    a: &ResidualTuple,
    delta0: ResidueElem,
) -> Result<CoeffTemplate> {
    match validate_residuals(k, r, a, delta0)? {
        ResidualCheck::Valid => {}
        ResidualCheck::Invalid(v) => {
            return Err(Error::InvalidResidual(format!(
                "tuple is not attached to this polygon and δ_0 ({}: {})",
                v.condition, v.detail
            )))
        }
    }
    let rf = k.residue_field();
    let n = r.n();
    let c = krasner_cutoff_build(n, r.j0());
    let (bounds, _) = r.coeff_lower_bounds(k)?;

    // slope ladder: depth n·φ_R(m) → m for every reachable m ≥ 1 (the
    // values are strictly increasing in m, so the map is injective)
    let max_depth = n * c - 1;
    let mut ladder: BTreeMap<u64, u64> = BTreeMap::new();
    for m in 1u64.. {
        let (v, _) = r.hh_argmin(m);
        if v > max_depth {
            break;
        }
        let prev = ladder.insert(v, m);
        debug_assert!(prev.is_none(), "slope ladder values repeat");
    }

    // all-zero defaults
    let zero_cell = || Cell { values: vec![ResidueElem::ZERO], tag: CellTag::ZeroDefault };
    let mut cells: Vec<Vec<Cell>> =
        (0..n).map(|_| (0..c).map(|_| zero_cell()).collect()).collect();

    // free digits: at or above the coefficient bound, off the slope ladder
    let all_residues: Vec<ResidueElem> = rf.elements().collect();
    for i in 0..n {
        for j in bounds[i as usize].max(1)..=c {
            let depth = n * (j - 1) + i;
            if !ladder.contains_key(&depth) {
                cells[i as usize][(j - 1) as usize] =
                    Cell { values: all_residues.clone(), tag: CellTag::Free };
            }
        }
    }

    // cokernel digits at depth n·φ_R(m); beyond the steepest integral
    // slope S_m is a bijective monomial and the cell stays {0}
    for m in 1..=max_component_slope(r) {
        let comp = component_residual(r, a, m)?;
        let depth = comp.value_nphi;
        if depth > max_depth {
            continue;
        }
        let (i, j) = (depth % n, depth / n + 1);
        let analysis = additive_map_analysis(&comp.map, rf);
        debug_assert!(
            analysis.surjective || j >= bounds[i as usize],
            "nonzero cokernel below the coefficient bound"
        );
        let mut values = analysis.cokernel_reps.clone();
        values.sort();
        cells[i as usize][(j - 1) as usize] = Cell { values, tag: CellTag::Cokernel };
    }

    // unit digits pinned by the residual tuple (written last: a pinned
    // digit always wins over a slope-ladder assignment at the same depth)
    for (idx, pt) in r.ramification_points().iter().enumerate() {
        if pt.b == 0 {
            continue;
        }
        let vc = pt.vpi_cbx.expect("b ≠ 0 point carries binomial parts");
        let ur = pt.ur_cbx.expect("b ≠ 0 point carries binomial parts");
        let j = pt.a + 1 - vc;
        debug_assert!((1..=c).contains(&j), "pinned digit outside the matrix");
        let digit = rf.mul(
            rf.mul(a.point_coeff(r, idx), rf.inv(ur)?),
            rf.pow_i64(rf.neg(delta0), pt.a as i64 + 1)?,
        );
        debug_assert!(!digit.is_zero(), "pinned digit must be a unit");
        cells[pt.b as usize][(j - 1) as usize] =
            Cell { values: vec![digit], tag: CellTag::FixedByTuple };
    }

    // constant-coefficient class
    cells[0][0] = Cell { values: vec![delta0], tag: CellTag::FixedDelta0 };

    Ok(CoeffTemplate { n, c, delta0, cells })
}

/// Number of polynomials a template describes (a big-integer product; an
/// empty cell makes it zero). Nothing is materialized.
pub fn template_count(t: &CoeffTemplate) -> BigUint {
    t.cells
        .iter()
        .flatten()
        .map(|cell| BigUint::from(cell.values.len() as u64))
        .product()
}

/// Stream every polynomial of a template in a fixed order: cells are
/// scanned row-major by (i, j), digit choices advance odometer-style with
/// the last cell fastest, each cell's digits in packed order.
pub fn template_stream(t: &CoeffTemplate) -> TemplateStream<'_> {
    let empty = t.cells.iter().flatten().any(|cell| cell.values.is_empty());
    TemplateStream { t, idx: vec![0; (t.n * t.c) as usize], done: empty }
}

/// Iterator over the polynomials of a template; see [`template_stream`].
#[derive(Debug)]
pub struct TemplateStream<'a> {
    t: &'a CoeffTemplate,
    // idx[i·c + (j−1)]: position in the value list of cell (i, j)
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for TemplateStream<'_> {
    type Item = EisPoly;

    fn next(&mut self) -> Option<EisPoly> {
        if self.done {
            return None;
        }
        let (n, c) = (self.t.n as usize, self.t.c as usize);
        let digits: Vec<Vec<ResidueElem>> = (0..n)
            .map(|i| {
                (0..c)
                    .map(|jm1| self.t.cells[i][jm1].values[self.idx[i * c + jm1]])
                    .collect()
            })
            .collect();
        // advance, last cell fastest
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            let cell = &self.t.cells[pos / c][pos % c];
            if self.idx[pos] + 1 < cell.values.len() {
                self.idx[pos] += 1;
                break;
            }
            self.idx[pos] = 0;
        }
        Some(EisPoly { n: self.t.n, digits })
    }
}

/// Whether streaming a template is guaranteed to produce pairwise
/// non-isomorphic extensions, with the reason.
#[derive(Debug, Clone)]
pub enum Guarantee {
    /// Distinctness is proved; no root-counting filter is needed.
    Guaranteed {
        /// Which screening argument applies.
        reason: String,
    },
    /// Distinctness is not established; filter the stream.
    NeedsFilter {
        /// Which screening argument fails, and where.
        reason: String,
    },
}

impl Guarantee {
    /// True for the guaranteed variant.
    pub fn is_guaranteed(&self) -> bool {
        matches!(self, Guarantee::Guaranteed { .. })
    }

    /// The justification text.
    pub fn reason(&self) -> &str {
        match self {
            Guarantee::Guaranteed { reason } | Guarantee::NeedsFilter { reason } => reason,
        }
    }
}

/// Decide whether the template of (r, a) needs a root-counting filter.
///
/// Streamed polynomials are pairwise non-isomorphic when (b) every
/// integral-slope component residual S_m is surjective, or (c) exactly one
/// S_m* fails and every depth in (n·φ_R(m*), n(c+1)] lies on the slope
/// ladder, so a difference of two equivalent polynomials has nowhere to
/// hide. Otherwise the stream may repeat extensions.
pub fn uniqueness_guarantee(k: &LocalField, r: &RamPolygon, a: &ResidualTuple) -> Result<Guarantee> {
    let rf = k.residue_field();
    let n = r.n();
    let c = krasner_cutoff_build(n, r.j0());
    // integral slopes are the segments with e = 1 (horizontal excluded)
    let mut non_surjective: Vec<u64> = Vec::new();
    for seg in r.segments() {
        if seg.e != 1 || seg.h == 0 {
            continue;
        }
        let comp = component_residual(r, a, seg.h)?;
        if !additive_map_analysis(&comp.map, rf).surjective {
            non_surjective.push(seg.h);
        }
    }
    match non_surjective.len() {
        0 => Ok(Guarantee::Guaranteed {
            reason: "every integral-slope component residual is surjective".into(),
        }),
        1 => {
            let m_star = non_surjective[0];
            let (lo, _) = r.hh_argmin(m_star);
            let hi = n * (c + 1);
            let mut hit: BTreeSet<u64> = BTreeSet::new();
            for m in 1u64.. {
                let (v, _) = r.hh_argmin(m);
                if v > hi {
                    break;
                }
                hit.insert(v);
            }
            match ((lo + 1)..=hi).find(|v| !hit.contains(v)) {
                None => Ok(Guarantee::Guaranteed {
                    reason: format!(
                        "the single non-surjective component residual (slope {m_star}) is screened: every depth in ({lo}, {hi}] lies on the slope ladder"
                    ),
                }),
                Some(gap) => Ok(Guarantee::NeedsFilter {
                    reason: format!(
                        "component residual at slope {m_star} is not surjective and depth {gap} is off the slope ladder"
                    ),
                }),
            }
        }
        _ => Ok(Guarantee::NeedsFilter {
            reason: format!(
                "{} integral-slope component residuals are not surjective",
                non_surjective.len()
            ),
        }),
    }
}

/// Read the residual tuple of an Eisenstein polynomial whose ramification
/// polygon is `r`; a polynomial with a different polygon is a domain
/// error. Together with [`build_template`] this closes the round trip:
/// every streamed polynomial reproduces the tuple its template was built
/// from.
pub fn residuals_of_polynomial(
    k: &LocalField,
    phi: &EisPoly,
    r: &RamPolygon,
) -> Result<ResidualTuple> {
    let actual = polygon_of_valuations(k, &phi.valuations())?;
    if actual.n() != r.n() || actual.sort_key() != r.sort_key() {
        return Err(Error::InvalidInput(
            "polynomial polygon differs from the prescribed polygon".into(),
        ));
    }
    let delta0 = phi.digit(0, 1);
    let mut unit_digits: BTreeMap<u64, ResidueElem> = BTreeMap::new();
    for pt in r.ramification_points() {
        if pt.b == 0 {
            continue;
        }
        let j = pt.a + 1 - pt.vpi_cbx.expect("b ≠ 0 point carries binomial parts");
        let d = phi.digit(pt.b, j);
        debug_assert!(!d.is_zero(), "a matching polygon forces a unit digit");
        unit_digits.insert(pt.b, d);
    }
    Ok(tuple_from_digits(k, r, &unit_digits, delta0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{enumerate_polygons, validate_polygon, PolygonCheck};
    use crate::residual::{enumerate_residual_tuples, orbit, partition_star};

    fn q3() -> LocalField {
        LocalField::qp(3).unwrap()
    }

    fn q5() -> LocalField {
        LocalField::qp(5).unwrap()
    }

    fn q2() -> LocalField {
        LocalField::qp(2).unwrap()
    }

    fn q2u2() -> LocalField {
        LocalField::from_json_str(r#"{"p":2,"unramified":[1,1,1]}"#).unwrap()
    }

    fn polygon(k: &LocalField, n: u64, pts: &[(u64, u64)]) -> RamPolygon {
        match validate_polygon(k, n, pts).unwrap() {
            PolygonCheck::Valid(r) => r,
            PolygonCheck::Invalid(v) => panic!("expected valid polygon: {v:?}"),
        }
    }

    fn e(v: u64) -> ResidueElem {
        ResidueElem(v)
    }

    fn tup(segs: &[&[u64]]) -> ResidualTuple {
        ResidualTuple::from_segments(
            segs.iter().map(|s| s.iter().map(|&v| e(v)).collect()).collect(),
        )
    }

    /// Every cell not in `special` must be the zero singleton.
    fn assert_rest_zero(t: &CoeffTemplate, special: &[(u64, u64)]) {
        for i in 0..t.n() {
            for j in 1..=t.c() {
                if special.contains(&(i, j)) {
                    continue;
                }
                assert_eq!(
                    t.cell(i, j).values(),
                    &[ResidueElem::ZERO],
                    "cell ({i},{j}) should be zero"
                );
            }
        }
    }

    // ---- template construction against known shapes ----

    #[test]
    fn test_build_disc18_second_polygon() {
        // {(1,10),(3,3),(9,0)} over Q_3 with the tuple (1+x, 1+x³)
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 3), (9, 0)]);
        let a = tup(&[&[1, 1], &[1, 0, 0, 1]]);
        let t = build_template(&k, &r, &a, e(1)).unwrap();
        assert_eq!(t.c(), 3);
        assert_eq!(t.cell(0, 1).values(), &[e(1)]);
        assert_eq!(t.cell(0, 1).tag(), CellTag::FixedDelta0);
        assert_eq!(t.cell(1, 2).values(), &[e(1)]);
        assert_eq!(t.cell(1, 2).tag(), CellTag::FixedByTuple);
        assert_eq!(t.cell(3, 1).values(), &[e(2)]);
        assert_eq!(t.cell(3, 1).tag(), CellTag::FixedByTuple);
        // free exactly at (2,2) and (4,2)
        for (i, j) in [(2, 2), (4, 2)] {
            assert_eq!(t.cell(i, j).tag(), CellTag::Free);
            assert_eq!(t.cell(i, j).values().len(), 3);
        }
        // bijective component residuals leave zero cells on the ladder
        for (i, j) in [(6, 1), (0, 2), (3, 2)] {
            assert_eq!(t.cell(i, j).tag(), CellTag::Cokernel);
            assert_eq!(t.cell(i, j).values(), &[ResidueElem::ZERO]);
        }
        assert_eq!(t.count(), BigUint::from(9u32));
        assert_rest_zero(&t, &[(0, 1), (1, 2), (3, 1), (2, 2), (4, 2)]);
        assert!(uniqueness_guarantee(&k, &r, &a).unwrap().is_guaranteed());
    }

    #[test]
    fn test_build_disc18_third_polygon() {
        // {(1,10),(3,6),(9,0)} with the tuple (2+2x², 2+x⁶): the slope-1
        // component is the zero map, so a cokernel cell opens at (0,2)
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 6), (9, 0)]);
        let a = tup(&[&[2, 0, 2], &[2, 0, 0, 0, 0, 0, 1]]);
        let t = build_template(&k, &r, &a, e(1)).unwrap();
        assert_eq!(t.cell(1, 2).values(), &[e(2)]);
        assert_eq!(t.cell(6, 1).values(), &[e(2)]);
        assert_eq!(t.cell(0, 2).tag(), CellTag::Cokernel);
        assert_eq!(t.cell(0, 2).values(), &[e(0), e(1), e(2)]);
        assert_eq!(t.cell(2, 2).tag(), CellTag::Free);
        assert_eq!(t.cell(3, 2).values(), &[ResidueElem::ZERO]);
        assert_eq!(t.count(), BigUint::from(9u32));
        let g = uniqueness_guarantee(&k, &r, &a).unwrap();
        assert!(!g.is_guaranteed());
        assert!(g.reason().contains("10"), "reason should name the gap: {}", g.reason());
    }

    #[test]
    fn test_build_q5_wild() {
        let k = q5();
        let r = polygon(&k, 15, &[(1, 15), (5, 0)]);
        let a = tup(&[&[2, 3], &[3, 0, 0, 0, 0, 3, 0, 0, 0, 0, 1]]);
        let t = build_template(&k, &r, &a, e(1)).unwrap();
        assert_eq!(t.c(), 3);
        let free = t.variable_cells();
        assert_eq!(free, vec![(1, 2), (2, 2), (3, 2)]);
        for &(i, j) in &free {
            assert_eq!(t.cell(i, j).tag(), CellTag::Free);
        }
        assert_eq!(t.count(), BigUint::from(125u32));
        let g = uniqueness_guarantee(&k, &r, &a).unwrap();
        assert!(g.is_guaranteed());
        assert!(g.reason().contains("surjective"));
    }

    #[test]
    fn test_build_unramified_base() {
        // {(1,9),(2,6),(8,0)} over the residue-degree-2 extension of Q_2
        let k = q2u2();
        let rf = k.residue_field();
        let g = rf.generator();
        let r = polygon(&k, 8, &[(1, 9), (2, 6), (8, 0)]);
        let z = ResidueElem::ZERO;
        let a = ResidualTuple::from_segments(vec![
            vec![g, g],
            vec![g, z, z, z, z, z, ResidueElem::ONE],
        ]);
        let t = build_template(&k, &r, &a, ResidueElem::ONE).unwrap();
        assert_eq!(t.c(), 3);
        assert_eq!(t.cell(1, 2).values(), &[g]);
        assert_eq!(t.cell(1, 2).tag(), CellTag::FixedByTuple);
        assert_eq!(t.cell(6, 1).values(), &[g]);
        assert_eq!(t.cell(6, 1).tag(), CellTag::FixedByTuple);
        assert_eq!(t.cell(4, 2).tag(), CellTag::Cokernel);
        assert_eq!(t.cell(4, 2).values(), &[e(0), e(1)]);
        assert_eq!(t.cell(3, 2).tag(), CellTag::Free);
        assert_eq!(t.cell(3, 2).values().len(), 4);
        assert_eq!(t.count(), BigUint::from(8u32));
        assert_rest_zero(&t, &[(0, 1), (1, 2), (6, 1), (4, 2), (3, 2)]);
        // guaranteed by screening the single non-surjective component
        let g = uniqueness_guarantee(&k, &r, &a).unwrap();
        assert!(g.is_guaranteed());
        assert!(g.reason().contains("screened"));
    }

    #[test]
    fn test_build_quadratic_top_disc() {
        let k = q2();
        let r = polygon(&k, 2, &[(1, 2), (2, 0)]);
        let tuples = enumerate_residual_tuples(&k, &r, e(1)).unwrap();
        assert_eq!(tuples.len(), 1);
        let t = build_template(&k, &r, &tuples[0], e(1)).unwrap();
        assert_eq!(t.count(), BigUint::from(4u32));
        let polys: Vec<String> = template_stream(&t)
            .map(|phi| phi.to_integer_string(&k).unwrap())
            .collect();
        assert_eq!(polys, vec!["x^2+2", "x^2+4x+2", "x^2+10", "x^2+4x+10"]);
        assert!(uniqueness_guarantee(&k, &r, &tuples[0]).unwrap().is_guaranteed());
    }

    #[test]
    fn test_build_tame() {
        let k = q3();
        let r = polygon(&k, 2, &[(1, 0)]);
        for d0 in [e(1), e(2)] {
            let tuples = enumerate_residual_tuples(&k, &r, d0).unwrap();
            assert_eq!(tuples.len(), 1);
            let t = build_template(&k, &r, &tuples[0], d0).unwrap();
            assert_eq!(t.count(), BigUint::from(1u32));
            let polys: Vec<EisPoly> = template_stream(&t).collect();
            assert_eq!(polys[0].digit(0, 1), d0);
            assert!(uniqueness_guarantee(&k, &r, &tuples[0]).unwrap().is_guaranteed());
        }
    }

    #[test]
    fn test_build_rejects_foreign_tuple() {
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 3), (9, 0)]);
        // endpoint condition fails: segment 0 leads with 1, segment 1 opens with 2
        let a = tup(&[&[1, 1], &[2, 0, 0, 1]]);
        assert!(build_template(&k, &r, &a, e(1)).is_err());
    }

    // ---- counting and streaming ----

    #[test]
    fn test_stream_matches_count_and_is_duplicate_free() {
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 3), (9, 0)]);
        for a in enumerate_residual_tuples(&k, &r, e(1)).unwrap() {
            let t = build_template(&k, &r, &a, e(1)).unwrap();
            let polys: Vec<EisPoly> = template_stream(&t).collect();
            assert_eq!(BigUint::from(polys.len() as u64), t.count());
            let set: BTreeSet<EisPoly> = polys.iter().cloned().collect();
            assert_eq!(set.len(), polys.len());
            for phi in &polys {
                assert_eq!(phi.digit(0, 1), e(1));
            }
        }
    }

    #[test]
    fn test_stream_order_is_deterministic() {
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 6), (9, 0)]);
        let a = tup(&[&[2, 0, 2], &[2, 0, 0, 0, 0, 0, 1]]);
        let t = build_template(&k, &r, &a, e(1)).unwrap();
        let first: Vec<String> = template_stream(&t)
            .take(4)
            .map(|p| p.to_integer_string(&k).unwrap())
            .collect();
        // cell (0,2) advances slower than (2,2)
        assert_eq!(
            first,
            vec![
                "x^9+6x^6+18x+3",
                "x^9+6x^6+9x^2+18x+3",
                "x^9+6x^6+18x^2+18x+3",
                "x^9+6x^6+18x+12",
            ]
        );
    }

    // ---- residual read-back and the round trip ----

    #[test]
    fn test_residuals_of_polynomial_examples() {
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 3), (9, 0)]);
        let phi = EisPoly::from_int_coeffs(
            &k,
            &[3, 9, 0, 6, 0, 0, 0, 0, 0, 1],
            3,
        )
        .unwrap();
        let a = residuals_of_polynomial(&k, &phi, &r).unwrap();
        assert_eq!(a, tup(&[&[1, 1], &[1, 0, 0, 1]]));

        let r2 = polygon(&k, 9, &[(1, 14), (3, 6), (9, 0)]);
        let phi2 = EisPoly::from_int_coeffs(
            &k,
            &[3, 0, 0, 0, 0, 18, 6, 0, 0, 1],
            4,
        )
        .unwrap();
        let a2 = residuals_of_polynomial(&k, &phi2, &r2).unwrap();
        // both segments of this polygon have e = 1
        assert_eq!(a2, tup(&[&[1, 0, 2], &[2, 0, 0, 0, 0, 0, 1]]));
    }

    #[test]
    fn test_residuals_of_polynomial_wrong_polygon() {
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 3), (9, 0)]);
        let phi = EisPoly::from_int_coeffs(
            &k,
            &[3, 0, 0, 0, 0, 18, 6, 0, 0, 1],
            4,
        )
        .unwrap();
        assert!(residuals_of_polynomial(&k, &phi, &r).is_err());
    }

    #[test]
    fn test_round_trip_disc18() {
        let k = q3();
        for r in enumerate_polygons(&k, 9, 10).unwrap() {
            for a in enumerate_residual_tuples(&k, &r, e(1)).unwrap() {
                let t = build_template(&k, &r, &a, e(1)).unwrap();
                for phi in template_stream(&t) {
                    let back = residuals_of_polynomial(&k, &phi, &r).unwrap();
                    assert_eq!(back, a, "round trip failed for {:?}", phi);
                }
            }
        }
    }

    #[test]
    fn test_round_trip_all_classes_small() {
        // all polygons, orbits and classes for (Q_2, 4) at every J_0
        let k = q2();
        for j0 in crate::polygon::ore_range(&k, 4) {
            for r in enumerate_polygons(&k, 4, j0).unwrap() {
                for d0 in k.residue_field().nth_power_class_reps(4) {
                    for a in enumerate_residual_tuples(&k, &r, d0).unwrap() {
                        let o = orbit(&k, &r, &a).unwrap();
                        for class in partition_star(&k, &r, &o) {
                            let rep = &class[0];
                            if !matches!(
                                validate_residuals(&k, &r, rep, d0).unwrap(),
                                ResidualCheck::Valid
                            ) {
                                continue;
                            }
                            let t = build_template(&k, &r, rep, d0).unwrap();
                            for phi in template_stream(&t) {
                                let back = residuals_of_polynomial(&k, &phi, &r).unwrap();
                                assert_eq!(&back, rep);
                            }
                        }
                    }
                }
            }
        }
    }

    // ---- integer rendering and parsing ----

    #[test]
    fn test_integer_rendering() {
        let k = q3();
        let phi = EisPoly::from_int_coeffs(&k, &[3, 18, 0, 0, 0, 18, 6, 0, 0, 1], 4).unwrap();
        assert_eq!(phi.to_integer_string(&k).unwrap(), "x^9+6x^6+18x^5+18x+3");
        assert!(phi.to_integer_string(&q2u2()).is_none());
    }

    #[test]
    fn test_from_int_rejects_non_eisenstein() {
        let k = q3();
        assert!(EisPoly::from_int_coeffs(&k, &[3, 1, 1], 3).is_err());
        assert!(EisPoly::from_int_coeffs(&k, &[3, 3, 2], 3).is_err());
    }

    #[test]
    fn test_json_shapes() {
        let k = q3();
        let r = polygon(&k, 9, &[(1, 10), (3, 3), (9, 0)]);
        let a = tup(&[&[1, 1], &[1, 0, 0, 1]]);
        let t = build_template(&k, &r, &a, e(1)).unwrap();
        let v = t.to_json(&k);
        assert_eq!(v["n"], 9);
        assert_eq!(v["c"], 3);
        assert!(v["cells"].as_array().unwrap().len() >= 5);
        let phi = template_stream(&t).next().unwrap();
        let pj = phi.to_json(&k);
        assert_eq!(pj["n"], 9);
    }
}

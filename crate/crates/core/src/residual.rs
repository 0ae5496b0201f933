//! Residual polynomials of polygon segments, their validity and
//! enumeration, the invariant orbit under change of uniformizer, its
//! partition at fixed constant-coefficient class, and the additive
//! component residuals S_m.
//!
//! For a ramification point (p^{s_t}, J_t = a_t·n + b_t) the residual
//! coefficient attached to it is the residue of ρ_{p^{s_t}}·α^{−J_t};
//! with α^n ∼ −φ_0 ∼ −δ_0·π this evaluates to
//!   φ̲_{b_t,j}·ur(C(b_t,p^{s_t}))·(−δ_0)^{−(a_t+1)}   if b_t ≠ 0,
//!   ur(C(n,p^{s_t}))·(−δ_0)^{−a_t}                     if b_t = 0,
//! where j = a_t + 1 − v_π(C(b_t,p^{s_t})), ur(·) the unit residue, and
//! δ_0 the residue of φ_0/π. Horizontal points carry the residue of
//! C(n,i). Changing the uniformizer by δ multiplies the coefficient of
//! each point by δ^{−J_t} and replaces δ_0 by δ^n·δ_0.
//!
//! Representation invariants:
//! - `ResidualTuple.segs[i]` is the dense coefficient vector of the i-th
//!   segment's residual polynomial (index = abscissa offset divided by
//!   the slope denominator); trailing zeros are trimmed on construction.
//! - An `InvariantOrbit` stores the orbit sorted ascending; `canonical`
//!   is its first element and `orbit_size·stabilizer_size = q−1`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::LocalField;
use crate::polygon::RamPolygon;
use crate::residue::{AdditiveMap, ResidueElem, ResidueField};

/// Residual polynomials of all segments, left to right, as dense
/// coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidualTuple {
    segs: Vec<Vec<ResidueElem>>,
}

impl ResidualTuple {
    /// Build from per-segment coefficient vectors (position → value);
    /// trailing zeros are trimmed so equal polynomials compare equal.
    pub fn from_segments(segs: Vec<Vec<ResidueElem>>) -> ResidualTuple {
        let segs = segs
            .into_iter()
            .map(|mut c| {
                while c.last() == Some(&ResidueElem::ZERO) {
                    c.pop();
                }
                c
            })
            .collect();
        ResidualTuple { segs }
    }

    /// Convenience constructor from sparse (position, coefficient) pairs.
    pub fn from_sparse(segs: &[Vec<(u64, ResidueElem)>]) -> ResidualTuple {
        let dense = segs
            .iter()
            .map(|pairs| {
                let deg = pairs.iter().map(|&(j, _)| j).max().unwrap_or(0);
                let mut c = vec![ResidueElem::ZERO; deg as usize + 1];
                for &(j, v) in pairs {
                    c[j as usize] = v;
                }
                c
            })
            .collect();
        ResidualTuple::from_segments(dense)
    }

    /// The dense coefficient vectors, one per segment.
    pub fn segments(&self) -> &[Vec<ResidueElem>] {
        &self.segs
    }

    /// Coefficient at (segment, position), zero when absent.
    pub fn coeff(&self, seg: usize, pos: u64) -> ResidueElem {
        self.segs
            .get(seg)
            .and_then(|c| c.get(pos as usize))
            .copied()
            .unwrap_or(ResidueElem::ZERO)
    }

    /// The coefficient attached to ramification point `idx` of `r`
    /// (read from the leftmost segment containing the point).
    pub fn point_coeff(&self, r: &RamPolygon, idx: usize) -> ResidueElem {
        for (si, seg) in r.segments().iter().enumerate() {
            if seg.left <= idx && idx <= seg.right {
                let pos = (r.points()[idx].x - r.points()[seg.left].x) / seg.e;
                return self.coeff(si, pos);
            }
        }
        ResidueElem::ZERO
    }

    /// JSON form: per segment an array of [position, coordinate-array]
    /// pairs for the nonzero coefficients.
    pub fn to_json(&self, rf: &ResidueField) -> serde_json::Value {
        let segs: Vec<serde_json::Value> = self
            .segs
            .iter()
            .map(|c| {
                let pairs: Vec<serde_json::Value> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| serde_json::json!([j, rf.coords(*v)]))
                    .collect();
                serde_json::Value::Array(pairs)
            })
            .collect();
        serde_json::Value::Array(segs)
    }
}

/// Verdict of [`validate_residuals`].
#[derive(Debug, Clone)]
pub enum ResidualCheck {
    /// All conditions hold for the given δ_0.
    Valid,
    /// A condition failed.
    Invalid(ResidualViolation),
}

/// First violated residual condition, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualViolation {
    /// One of: support, endpoint, linkage, forced.
    pub condition: String,
    /// Explanation naming segment and position.
    pub detail: String,
}

fn invalid(condition: &str, detail: String) -> ResidualCheck {
    ResidualCheck::Invalid(ResidualViolation { condition: condition.into(), detail })
}

/// The forced coefficient of ramification point `idx` when b = 0, and of
/// every horizontal point: ur(C(n,x))·(−δ_0)^{−a}.
fn forced_b0_coeff(rf: &ResidueField, r: &RamPolygon, idx: usize, delta0: ResidueElem) -> ResidueElem {
    let pt = &r.points()[idx];
    let minus_d0 = rf.neg(delta0);
    let pw = rf.pow_i64(minus_d0, -(pt.a as i64)).expect("δ_0 is a unit");
    rf.mul(pt.ur_cnx, pw)
}

/// The coefficient of a point with b ≠ 0 given the unit digit φ̲_b:
/// φ̲_b·ur(C(b,p^s))·(−δ_0)^{−(a+1)}.
fn bnz_coeff(
    rf: &ResidueField,
    r: &RamPolygon,
    idx: usize,
    digit: ResidueElem,
    delta0: ResidueElem,
) -> ResidueElem {
    let pt = &r.points()[idx];
    let minus_d0 = rf.neg(delta0);
    let ur = pt.ur_cbx.expect("point has b != 0");
    let pw = rf.pow_i64(minus_d0, -(pt.a as i64 + 1)).expect("δ_0 is a unit");
    rf.mul(rf.mul(digit, ur), pw)
}

/// Check a residual tuple against polygon `r` for the constant-coefficient
/// class δ_0. A wrong segment count is an error; otherwise the first
/// violated condition is reported, checked in the order: support,
/// endpoint, linkage, forced.
pub fn validate_residuals(
    k: &LocalField,
    r: &RamPolygon,
    a: &ResidualTuple,
    delta0: ResidueElem,
) -> Result<ResidualCheck> {
    let rf = k.residue_field();
    if delta0.is_zero() {
        return Err(Error::InvalidResidual("δ_0 must be a unit".into()));
    }
    if a.segments().len() != r.segments().len() {
        return Err(Error::InvalidResidual(format!(
            "tuple has {} segments, polygon has {}",
            a.segments().len(),
            r.segments().len()
        )));
    }
    // support: nonzero exactly at the positions of polygon points
    for (si, seg) in r.segments().iter().enumerate() {
        let positions: Vec<u64> = seg
            .points
            .iter()
            .map(|&idx| (r.points()[idx].x - r.points()[seg.left].x) / seg.e)
            .collect();
        let coeffs = &a.segments()[si];
        let deg = (r.points()[seg.right].x - r.points()[seg.left].x) / seg.e;
        for (j, v) in coeffs.iter().enumerate() {
            if !v.is_zero() && (j as u64 > deg || !positions.contains(&(j as u64))) {
                return Ok(invalid(
                    "support",
                    format!("segment {si} has a nonzero coefficient at position {j}, which is not a point"),
                ));
            }
        }
        for &pos in &positions {
            if a.coeff(si, pos).is_zero() {
                return Ok(invalid(
                    "support",
                    format!("segment {si} has a zero coefficient at point position {pos}"),
                ));
            }
        }
    }
    // endpoint: leading coefficient of each segment = constant of the next
    for si in 0..r.segments().len().saturating_sub(1) {
        let lead = *a.segments()[si].last().unwrap();
        let next = a.coeff(si + 1, 0);
        if lead != next {
            return Ok(invalid(
                "endpoint",
                format!("leading coefficient of segment {si} does not match the constant of segment {}", si + 1),
            ));
        }
    }
    // linkage: points sharing the same b ≠ 0 have proportional coefficients
    let ram = r.ramification_points();
    for t in 0..ram.len() {
        for q in 0..ram.len() {
            if t == q || ram[t].b == 0 || ram[t].b != ram[q].b {
                continue;
            }
            let ct = a.point_coeff(r, t);
            let cq = a.point_coeff(r, q);
            let (urt, urq) = (ram[t].ur_cbx.unwrap(), ram[q].ur_cbx.unwrap());
            let factor = rf.mul(
                rf.mul(urt, rf.inv(urq)?),
                rf.pow_i64(rf.neg(delta0), ram[q].a as i64 - ram[t].a as i64)?,
            );
            if ct != rf.mul(factor, cq) {
                return Ok(invalid(
                    "linkage",
                    format!("points at abscissas {} and {} share b = {} but their coefficients are not linked", ram[t].x, ram[q].x, ram[t].b),
                ));
            }
        }
    }
    // forced: b = 0 ramification points and all horizontal points carry
    // ur(C(n,x))·(−δ_0)^{−a}
    for idx in 0..r.points().len() {
        let pt = &r.points()[idx];
        let is_ram = idx < ram.len();
        if is_ram && pt.b != 0 {
            continue;
        }
        let want = forced_b0_coeff(rf, r, idx, delta0);
        let got = point_coeff_any(a, r, idx);
        if got != want {
            return Ok(invalid(
                "forced",
                format!("coefficient at abscissa {} must equal the forced unit residue", pt.x),
            ));
        }
    }
    Ok(ResidualCheck::Valid)
}

/// Like `ResidualTuple::point_coeff` but for any polygon point index
/// (including horizontal points).
fn point_coeff_any(a: &ResidualTuple, r: &RamPolygon, idx: usize) -> ResidueElem {
    for (si, seg) in r.segments().iter().enumerate() {
        if seg.left <= idx && idx <= seg.right {
            let pos = (r.points()[idx].x - r.points()[seg.left].x) / seg.e;
            return a.coeff(si, pos);
        }
    }
    ResidueElem::ZERO
}

/// Build the tuple determined by the unit digits φ̲_b (one per distinct
/// nonzero b among the ramification points) for the class δ_0.
pub(crate) fn tuple_from_digits(
    k: &LocalField,
    r: &RamPolygon,
    digits: &BTreeMap<u64, ResidueElem>,
    delta0: ResidueElem,
) -> ResidualTuple {
    let rf = k.residue_field();
    let ram_len = r.ramification_points().len();
    let mut segs = Vec::with_capacity(r.segments().len());
    for seg in r.segments() {
        let deg = (r.points()[seg.right].x - r.points()[seg.left].x) / seg.e;
        let mut coeffs = vec![ResidueElem::ZERO; deg as usize + 1];
        for &idx in &seg.points {
            let pt = &r.points()[idx];
            let pos = (pt.x - r.points()[seg.left].x) / seg.e;
            let val = if idx < ram_len && pt.b != 0 {
                bnz_coeff(rf, r, idx, digits[&pt.b], delta0)
            } else {
                forced_b0_coeff(rf, r, idx, delta0)
            };
            coeffs[pos as usize] = val;
        }
        segs.push(coeffs);
    }
    ResidualTuple::from_segments(segs)
}

/// All residual tuples valid for polygon `r` and class δ_0, sorted. Free
/// unit digits range over F_q^× (one per distinct nonzero b); everything
/// else is forced, so there are (q−1)^(#distinct b≠0) tuples.
pub fn enumerate_residual_tuples(
    k: &LocalField,
    r: &RamPolygon,
    delta0: ResidueElem,
) -> Result<Vec<ResidualTuple>> {
    let rf = k.residue_field();
    if delta0.is_zero() {
        return Err(Error::InvalidResidual("δ_0 must be a unit".into()));
    }
    let mut bs: Vec<u64> = r
        .ramification_points()
        .iter()
        .filter(|pt| pt.b != 0)
        .map(|pt| pt.b)
        .collect();
    bs.sort();
    bs.dedup();
    let units: Vec<ResidueElem> = rf.elements().filter(|e| !e.is_zero()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; bs.len()];
    loop {
        let digits: BTreeMap<u64, ResidueElem> =
            bs.iter().zip(&idx).map(|(&b, &i)| (b, units[i])).collect();
        let tuple = tuple_from_digits(k, r, &digits, delta0);
        debug_assert!(matches!(
            validate_residuals(k, r, &tuple, delta0)?,
            ResidualCheck::Valid
        ));
        out.push(tuple);
        // odometer
        let mut carry = true;
        for i in idx.iter_mut() {
            if !carry {
                break;
            }
            *i += 1;
            if *i < units.len() {
                carry = false;
            } else {
                *i = 0;
            }
        }
        if carry || bs.is_empty() {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Apply the uniformizer substitution α ↦ δα (δ a unit) to a tuple: the
/// coefficient at position j of segment i is multiplied by
/// δ^{h_i·j − J_{left(i)}} (equivalently, each point's coefficient by
/// δ^{−J}).
pub fn delta_action(
    k: &LocalField,
    r: &RamPolygon,
    a: &ResidualTuple,
    delta: ResidueElem,
) -> ResidualTuple {
    debug_assert!(!delta.is_zero());
    let rf = k.residue_field();
    let segs = r
        .segments()
        .iter()
        .zip(a.segments())
        .map(|(seg, coeffs)| {
            let j_left = r.points()[seg.left].y;
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| {
                    let e = seg.h as i64 * j as i64 - j_left as i64;
                    rf.mul(c, rf.pow_i64(delta, e).expect("δ is a unit"))
                })
                .collect()
        })
        .collect();
    ResidualTuple::from_segments(segs)
}

/// The orbit of a residual tuple under all uniformizer substitutions,
/// with its canonical (minimal) representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantOrbit {
    canonical: ResidualTuple,
    members: Vec<ResidualTuple>,
    stabilizer_size: u64,
}

impl InvariantOrbit {
    /// The minimal member in dense coefficient order.
    pub fn canonical(&self) -> &ResidualTuple {
        &self.canonical
    }

    /// All members, sorted ascending.
    pub fn members(&self) -> &[ResidualTuple] {
        &self.members
    }

    /// Number of distinct tuples in the orbit.
    pub fn orbit_size(&self) -> u64 {
        self.members.len() as u64
    }

    /// Number of δ ∈ F_q^× fixing the tuple.
    pub fn stabilizer_size(&self) -> u64 {
        self.stabilizer_size
    }

    /// JSON form: the canonical tuple.
    pub fn to_json(&self, rf: &ResidueField) -> serde_json::Value {
        self.canonical.to_json(rf)
    }
}

/// Compute the full orbit of `a` under δ ∈ F_q^×. The tuple is taken as
/// data; only its segment count is checked against `r`.
pub fn orbit(k: &LocalField, r: &RamPolygon, a: &ResidualTuple) -> Result<InvariantOrbit> {
    let rf = k.residue_field();
    if a.segments().len() != r.segments().len() {
        return Err(Error::InvalidResidual(format!(
            "tuple has {} segments, polygon has {}",
            a.segments().len(),
            r.segments().len()
        )));
    }
    let mut members: Vec<ResidualTuple> = Vec::new();
    let mut stab = 0u64;
    for d in rf.elements() {
        if d.is_zero() {
            continue;
        }
        let img = delta_action(k, r, a, d);
        if img == *a {
            stab += 1;
        }
        members.push(img);
    }
    members.sort();
    members.dedup();
    debug_assert_eq!(members.len() as u64 * stab, rf.q() - 1);
    Ok(InvariantOrbit {
        canonical: members[0].clone(),
        members,
        stabilizer_size: stab,
    })
}

/// Partition an orbit into classes under the restricted action of
/// {δ : δ^n = 1}; each class is sorted, classes ordered by first member.
pub fn partition_star(
    k: &LocalField,
    r: &RamPolygon,
    o: &InvariantOrbit,
) -> Vec<Vec<ResidualTuple>> {
    let rf = k.residue_field();
    let roots = rf.unity_roots(r.n());
    let mut remaining: std::collections::BTreeSet<ResidualTuple> =
        o.members().iter().cloned().collect();
    let mut classes = Vec::new();
    while let Some(seed) = remaining.iter().next().cloned() {
        let mut class: Vec<ResidualTuple> = roots
            .iter()
            .map(|&d| delta_action(k, r, &seed, d))
            .collect();
        class.sort();
        class.dedup();
        for m in &class {
            remaining.remove(m);
        }
        classes.push(class);
    }
    classes
}

/// The additive residual of the (−m)-component of the polygon.
#[derive(Debug, Clone)]
pub struct ComponentResidual {
    /// The slope magnitude m ≥ 1.
    pub m: u64,
    /// Additive polynomial with p-power exponents only.
    pub map: AdditiveMap,
    /// n·φ_R(m), the α-valuation of the component's content.
    pub value_nphi: u64,
}

/// S_m for the tuple `a` on polygon `r`: terms r_t·z^{p^{s_t}} over the
/// points attaining min(J_t + m·p^{s_t}).
pub fn component_residual(r: &RamPolygon, a: &ResidualTuple, m: u64) -> Result<ComponentResidual> {
    if m == 0 {
        return Err(Error::InvalidInput("component slope must be positive".into()));
    }
    let (value_nphi, argmin) = r.hh_argmin(m);
    let mut terms: Vec<(u32, ResidueElem)> = Vec::new();
    for idx in argmin {
        let c = a.point_coeff(r, idx);
        if !c.is_zero() {
            terms.push((r.points()[idx].x as u32, c));
        }
    }
    Ok(ComponentResidual { m, map: AdditiveMap::from_terms(terms), value_nphi })
}

/// Steepest integral slope bound: for m beyond it the (−m)-component is
/// the single point (1, J_0) and S_m is a bijective monomial.
pub fn max_component_slope(r: &RamPolygon) -> u64 {
    let ram = r.ramification_points();
    if ram.len() < 2 {
        return 0;
    }
    (ram[0].y - ram[1].y) / (ram[1].x - 1)
}

/// Upper bound for the number of roots of a generating polynomial in its
/// own field: #{δ : δ^n = 1} · ∏_{m≥1} #ker S_m (finite product: factors
/// are 1 beyond the steepest slope).
pub fn aut_upper_bound(k: &LocalField, r: &RamPolygon, a: &ResidualTuple) -> Result<u64> {
    let rf = k.residue_field();
    let mut bound = gcd(r.n(), rf.q() - 1);
    for m in 1..=max_component_slope(r) {
        let comp = component_residual(r, a, m)?;
        let analysis = crate::residue::additive_map_analysis(&comp.map, rf);
        bound *= analysis.kernel_size;
    }
    Ok(bound)
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

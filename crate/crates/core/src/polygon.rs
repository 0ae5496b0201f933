//! Ramification polygons: validity, enumeration for a given (n, J_0),
//! the Hasse–Herbrand function, coefficient-valuation bounds, and the
//! polygon of a concrete Eisenstein polynomial.
//!
//! A polygon for degree n = e_0·p^u (p ∤ e_0) is described by its points
//! {(1,J_0), (p^{s_1},J_1), …, (p^u,0)} together with the horizontal part
//! {(i,0) : p^u ≤ i ≤ n, v_p(C(n,i)) = 0}. Non-vertex points lying on a
//! segment are part of the polygon's identity.
//!
//! Representation invariants:
//! - `points` is sorted by abscissa and carries the full point set (wild
//!   part then derived horizontal tail); `points[..wild_count]` are the
//!   ramification points (p^{s_i}, J_i), the last of them (p^u, 0).
//! - Every point caches (a_i, b_i) with J_i = a_i·n + b_i, plus the
//!   π-valuation and unit residue of C(n, x_i) and, when b_i ≠ 0, of
//!   C(b_i, x_i).
//! - `segments` partitions consecutive equal-slope runs; slopes are stored
//!   as −h/e in lowest terms and strictly increase across segments.

use crate::error::{Error, Result};
use crate::field::{LocalField, Valuation};
use crate::residue::ResidueElem;

/// One point of a ramification polygon with cached arithmetic data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonPoint {
    /// Abscissa (p^{s_i} for ramification points).
    pub x: u64,
    /// Ordinate J_i.
    pub y: u64,
    /// s with x = p^s, when x is a p-power.
    pub s: Option<u32>,
    /// J_i = a·n + b with 0 ≤ b < n.
    pub a: u64,
    /// See `a`.
    pub b: u64,
    /// v_π(C(n, x)).
    pub vpi_cnx: u64,
    /// residue of C(n, x)·π^{−v_π}.
    pub ur_cnx: ResidueElem,
    /// v_π(C(b, x)) when b ≠ 0 (then b ≥ x, so the binomial is nonzero).
    pub vpi_cbx: Option<u64>,
    /// residue of C(b, x)·π^{−v_π} when b ≠ 0.
    pub ur_cbx: Option<ResidueElem>,
}

/// A maximal run of collinear polygon points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Index of the left vertex in `points`.
    pub left: usize,
    /// Index of the right vertex in `points`.
    pub right: usize,
    /// Indices of all polygon points on the segment, endpoints included.
    pub points: Vec<usize>,
    /// Slope = −h/e in lowest terms (h = 0, e = 1 for the horizontal part).
    pub h: u64,
    /// See `h`.
    pub e: u64,
}

/// A validated ramification polygon over a fixed base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamPolygon {
    n: u64,
    p: u64,
    u: u32,
    e0: u64,
    wild_count: usize,
    points: Vec<PolygonPoint>,
    segments: Vec<Segment>,
}

/// Verdict of [`validate_polygon`]: a well-formed candidate either is a
/// polygon of some extension or violates a named condition.
#[derive(Debug, Clone)]
pub enum PolygonCheck {
    /// The candidate is valid; the constructed polygon is attached.
    Valid(RamPolygon),
    /// The candidate is well-formed but violates a condition.
    Invalid(PolygonViolation),
}

/// First violated condition, by name, with human-readable detail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonViolation {
    /// One of: convexity, divisibility, ore_bounds, same_b,
    /// point_valuation, missing_point, horizontal_points.
    pub condition: String,
    /// Explanation naming the offending points.
    pub detail: String,
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

/// v_p(n) and the tame part e_0 = n/p^{v_p(n)}.
fn split_degree(p: u64, n: u64) -> (u32, u64) {
    let mut u = 0u32;
    let mut e0 = n;
    while e0 % p == 0 {
        e0 /= p;
        u += 1;
    }
    (u, e0)
}

impl RamPolygon {
    /// Build from ramification points (sorted, shape-checked by callers);
    /// derives the horizontal tail, (a,b) splits, cached binomial residues,
    /// and segments.
    fn build(k: &LocalField, n: u64, wild: &[(u64, u64)]) -> Result<RamPolygon> {
        let p = k.p();
        let (u, e0) = split_degree(p, n);
        let pu = n / e0;
        let mut pts: Vec<(u64, u64)> = wild.to_vec();
        for i in (pu + 1)..=n {
            if k.vp_binom(n, i)? == 0 {
                pts.push((i, 0));
            }
        }
        let wild_count = wild.len();
        let mut points = Vec::with_capacity(pts.len());
        for &(x, y) in &pts {
            let s = {
                let mut v = x;
                let mut s = 0u32;
                while v % p == 0 {
                    v /= p;
                    s += 1;
                }
                if v == 1 { Some(s) } else { None }
            };
            let (a, b) = (y / n, y % n);
            let (vpi_cnx, ur_cnx) = k.binom_parts(n, x)?;
            let (vpi_cbx, ur_cbx) = if b != 0 {
                let (v, r) = k.binom_parts(b, x)?;
                (Some(v), Some(r))
            } else {
                (None, None)
            };
            points.push(PolygonPoint { x, y, s, a, b, vpi_cnx, ur_cnx, vpi_cbx, ur_cbx });
        }
        let segments = build_segments(&points);
        Ok(RamPolygon { n, p, u, e0, wild_count, points, segments })
    }

    /// The degree n.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The residue characteristic.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// u = v_p(n).
    pub fn u(&self) -> u32 {
        self.u
    }

    /// The tame part e_0 = n/p^u.
    pub fn e0(&self) -> u64 {
        self.e0
    }

    /// J_0, the ordinate above 1.
    pub fn j0(&self) -> u64 {
        self.points[0].y
    }

    /// The full point set (wild part and horizontal tail), sorted by x.
    pub fn points(&self) -> &[PolygonPoint] {
        &self.points
    }

    /// The ramification points (1,J_0), …, (p^u,0).
    pub fn ramification_points(&self) -> &[PolygonPoint] {
        &self.points[..self.wild_count]
    }

    /// The segments, left to right.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// n·φ_R(m) for integer m ≥ 1 together with the indices (into
    /// `ramification_points`) of the points attaining the minimum.
    pub fn hh_argmin(&self, m: u64) -> (u64, Vec<usize>) {
        let mut best = u64::MAX;
        let mut arg = Vec::new();
        for (i, pt) in self.ramification_points().iter().enumerate() {
            let val = pt.y + m * pt.x;
            if val < best {
                best = val;
                arg = vec![i];
            } else if val == best {
                arg.push(i);
            }
        }
        (best, arg)
    }

    /// n·φ_R(λ) for λ = num/den > 0 as a reduced fraction, plus the
    /// abscissas attaining the minimum.
    pub fn hasse_herbrand(&self, num: u64, den: u64) -> ((u64, u64), Vec<u64>) {
        assert!(num > 0 && den > 0, "λ must be positive");
        let mut best: (u64, u64) = (u64::MAX, 1);
        let mut arg: Vec<u64> = Vec::new();
        for pt in &self.points {
            // J·den + num·x over den, compared by cross-multiplication
            let val = (pt.y * den + num * pt.x, den);
            let cmp = (val.0 as u128 * best.1 as u128).cmp(&(best.0 as u128 * val.1 as u128));
            if cmp == std::cmp::Ordering::Less {
                best = val;
                arg = vec![pt.x];
            } else if cmp == std::cmp::Ordering::Equal {
                arg.push(pt.x);
            }
        }
        let g = gcd(best.0, best.1);
        ((best.0 / g, best.1 / g), arg)
    }

    /// n·φ_R(m) for a positive integer m (always an integer).
    pub fn hasse_herbrand_int(&self, m: u64) -> u64 {
        self.hh_argmin(m).0
    }

    /// Minimum-valuation bounds L_R(i) for 0 ≤ i ≤ n, plus the forced
    /// equalities v_π(φ_{b_t}) = L_R(b_t) at every ramification point with
    /// b_t ≠ 0.
    pub fn coeff_lower_bounds(&self, k: &LocalField) -> Result<(Vec<u64>, Vec<(u64, u64)>)> {
        let n = self.n;
        let mut bounds = vec![1u64; (n + 1) as usize];
        bounds[n as usize] = 0;
        let ram = self.ramification_points();
        for i in 1..n {
            let mut best: i128 = 1;
            // branches from the points
            for pt in ram {
                if pt.x > i {
                    continue;
                }
                let vpi = k.vpi_binom(i, pt.x)?;
                let base = if i < pt.b { 2 } else { 1 };
                let cand = base + pt.a as i128 - vpi as i128;
                best = best.max(cand);
            }
            // branches from missing exponents: w strictly between the
            // exponents of consecutive ramification points
            for t in 0..ram.len() - 1 {
                let (st, st1) = (
                    ram[t].s.expect("ramification points are p-powers"),
                    ram[t + 1].s.expect("ramification points are p-powers"),
                );
                for w in (st + 1)..st1 {
                    let pw = self.p.pow(w);
                    if pw > i {
                        continue;
                    }
                    let vpi = k.vpi_binom(i, pw)? as i128;
                    // B = [ΔJ·(p^w − p^{s_t})/Δx + J_t − i]/n + 1 − v_π;
                    // the valuation must strictly exceed B, so the integer
                    // bound is ⌊B⌋ + 1.
                    let dj = ram[t + 1].y as i128 - ram[t].y as i128;
                    let dx = (ram[t + 1].x - ram[t].x) as i128;
                    let num = dj * (pw as i128 - ram[t].x as i128) + (ram[t].y as i128 - i as i128) * dx;
                    let den = n as i128 * dx;
                    let cand = floor_div(num, den) + 1 - vpi + 1;
                    best = best.max(cand);
                }
            }
            bounds[i as usize] = best.max(1) as u64;
        }
        let mut forced = Vec::new();
        for pt in ram {
            if pt.b != 0 {
                let val = pt.a as i128 + 1 - pt.vpi_cbx.unwrap() as i128;
                debug_assert!(val >= 1, "forced valuation below 1 on a valid polygon");
                debug_assert_eq!(val.max(1) as u64, bounds[pt.b as usize]);
                forced.push((pt.b, val.max(1) as u64));
            }
        }
        Ok((bounds, forced))
    }

    /// Sort key: ordinate above p^s for s = 0..u, −1 where the polygon has
    /// no point; lexicographic order on keys sorts polygon lists.
    pub fn sort_key(&self) -> Vec<i64> {
        let mut key = vec![-1i64; self.u as usize + 1];
        for pt in self.ramification_points() {
            key[pt.s.unwrap() as usize] = pt.y as i64;
        }
        key
    }

    /// JSON form {"n": …, "points": [[x,y], …]} listing the p-power points
    /// (horizontal points with non-p-power abscissa are implicit).
    pub fn to_json(&self) -> serde_json::Value {
        let pts: Vec<serde_json::Value> = self
            .points
            .iter()
            .filter(|pt| pt.s.is_some())
            .map(|pt| serde_json::json!([pt.x, pt.y]))
            .collect();
        serde_json::json!({ "n": self.n, "points": pts })
    }
}

/// Sort-key accessor as a free function, for use as a sort callback.
pub fn polygon_sort_key(r: &RamPolygon) -> Vec<i64> {
    r.sort_key()
}

fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    if a >= 0 {
        a / b
    } else {
        -((-a + b - 1) / b)
    }
}

/// Group consecutive collinear runs into segments.
fn build_segments(points: &[PolygonPoint]) -> Vec<Segment> {
    let mut segments = Vec::new();
    if points.len() < 2 {
        return segments;
    }
    let slope = |i: usize| -> (i128, i128) {
        let dy = points[i + 1].y as i128 - points[i].y as i128;
        let dx = (points[i + 1].x - points[i].x) as i128;
        (dy, dx)
    };
    let mut start = 0usize;
    for i in 1..points.len() {
        let last_in_run = i == points.len() - 1 || {
            let (dy1, dx1) = slope(i - 1);
            let (dy2, dx2) = slope(i);
            dy1 * dx2 != dy2 * dx1
        };
        if last_in_run {
            let end = i;
            let dy = points[end].y as i128 - points[start].y as i128;
            let dx = (points[end].x - points[start].x) as u64;
            let h = dy.unsigned_abs() as u64;
            let g = gcd(h, dx).max(1);
            segments.push(Segment {
                left: start,
                right: end,
                points: (start..=end).collect(),
                h: h / g,
                e: dx / g,
            });
            start = end;
        }
    }
    segments
}

/// All admissible J_0 for degree n over K: integers with
/// min{v_π(b_0)·n, v_π(n)·n} ≤ J_0 ≤ v_π(n)·n where b_0 = J_0 mod n.
pub fn ore_range(k: &LocalField, n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let vn = match k.vpi_int(n as i64) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => unreachable!("n ≥ 2"),
    };
    let upper = vn * n;
    let mut out = Vec::new();
    for j0 in 0..=upper {
        let b0 = j0 % n;
        let lower = match k.vpi_int(b0 as i64) {
            Valuation::Finite(v) => (v * n).min(upper),
            Valuation::Infinite => upper,
        };
        if j0 >= lower {
            out.push(j0);
        }
    }
    out
}

/// Krasner digit cutoff c = ⌈1 + 2a_0 + 2b_0/n⌉ − 1 (at least 1), where
/// J_0 = a_0·n + b_0: template digits φ_{i,j} with j > c may be zeroed.
pub fn krasner_precision(n: u64, j0: u64) -> u64 {
    let (a0, b0) = (j0 / n, j0 % n);
    let ceil = (2 * b0).div_ceil(n);
    (2 * a0 + ceil).max(1)
}

/// Digit cutoff used by the template builder: ⌊1 + 2a_0 + 2b_0/n⌋ (at
/// least 1). Digits at depth j are only droppable when j strictly exceeds
/// the Krasner bound 1 + 2a_0 + (2b_0 − i)/n, which at i = 0 keeps depth
/// j = 1 + 2a_0 + 2b_0/n when that value is an integer; the extra row
/// relative to [`krasner_precision`] is zeroed afterwards whenever the
/// zero-setting rules allow.
pub(crate) fn krasner_cutoff_build(n: u64, j0: u64) -> u64 {
    let (a0, b0) = (j0 / n, j0 % n);
    (1 + 2 * a0 + (2 * b0) / n).max(1)
}

/// Check a candidate point set. Malformed candidates (non-p-power
/// abscissas, not ending at (p^u, 0), …) are errors; well-formed ones
/// produce Valid or a report naming the first violated condition, checked
/// in the order: convexity, divisibility, ore_bounds, same_b,
/// point_valuation, missing_point, horizontal_points.
pub fn validate_polygon(k: &LocalField, n: u64, candidate: &[(u64, u64)]) -> Result<PolygonCheck> {
    let p = k.p();
    if n < 2 {
        return Err(Error::InvalidPolygon("degree must be at least 2".into()));
    }
    let (_, e0) = split_degree(p, n);
    let pu = n / e0;
    let mut pts: Vec<(u64, u64)> = candidate.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() != candidate.len() {
        return Err(Error::InvalidPolygon("duplicate points".into()));
    }
    if pts.is_empty() {
        return Err(Error::InvalidPolygon("empty point set".into()));
    }
    // shape: p-power abscissas ≤ n, first point above 1
    let mut exps = Vec::with_capacity(pts.len());
    for &(x, _) in &pts {
        if x > n {
            return Err(Error::InvalidPolygon(format!("abscissa {x} exceeds n = {n}")));
        }
        let mut v = x;
        let mut s = 0u32;
        while v % p == 0 {
            v /= p;
            s += 1;
        }
        if v != 1 {
            return Err(Error::InvalidPolygon(format!(
                "abscissa {x} is not a power of p = {p}"
            )));
        }
        exps.push(s);
    }
    if pts[0].0 != 1 {
        return Err(Error::InvalidPolygon("missing point above 1".into()));
    }
    // split off trailing horizontal p-power points (beyond p^u); the wild
    // part must end at exactly (p^u, 0)
    let wild_end = match pts.iter().position(|&(x, _)| x == pu) {
        Some(i) => i,
        None => {
            return Err(Error::InvalidPolygon(format!(
                "point set must contain (p^u, 0) = ({pu}, 0)"
            )))
        }
    };
    if pts[wild_end].1 != 0 {
        return Err(Error::InvalidPolygon(format!(
            "point above p^u = {pu} must have ordinate 0"
        )));
    }
    let wild = &pts[..=wild_end];
    let tail = &pts[wild_end + 1..];

    // condition: the points beyond p^u are (i, 0) with v_p(C(n,i)) = 0;
    // p-power points of that kind may be listed or left implicit.
    for &(x, y) in tail {
        if y != 0 || k.vp_binom(n, x)? != 0 {
            return Ok(Cheap::invalid(
                "horizontal_points",
                format!("point ({x},{y}) conflicts with the horizontal part"),
            ));
        }
    }

    // convexity: slopes non-decreasing, ordinates reaching 0 exactly at p^u
    for i in 0..wild.len().saturating_sub(1) {
        if wild[i].1 <= wild[i + 1].1 {
            return Ok(Cheap::invalid(
                "convexity",
                format!(
                    "ordinates must strictly decrease: ({},{}) to ({},{})",
                    wild[i].0, wild[i].1, wild[i + 1].0, wild[i + 1].1
                ),
            ));
        }
    }
    for i in 1..wild.len().saturating_sub(1) {
        let (x0, y0) = (wild[i - 1].0 as i128, wild[i - 1].1 as i128);
        let (x1, y1) = (wild[i].0 as i128, wild[i].1 as i128);
        let (x2, y2) = (wild[i + 1].0 as i128, wild[i + 1].1 as i128);
        // slope(P0,P1) ≤ slope(P1,P2) ⟺ Δy1·Δx2 ≤ Δy2·Δx1 (Δx > 0)
        if (y1 - y0) * (x2 - x1) > (y2 - y1) * (x1 - x0) {
            return Ok(Cheap::invalid(
                "convexity",
                format!("slope decreases at ({},{})", wild[i].0, wild[i].1),
            ));
        }
    }

    // divisibility: p^{s_i} | J_i
    for (i, &(x, y)) in wild.iter().enumerate() {
        let _ = i;
        if y % x != 0 {
            return Ok(Cheap::invalid(
                "divisibility",
                format!("{x} does not divide J = {y} at ({x},{y})"),
            ));
        }
    }

    // per-point data
    struct W {
        s: u32,
        x: u64,
        y: u64,
        a: u64,
        b: u64,
    }
    let ws: Vec<W> = wild
        .iter()
        .zip(&exps)
        .map(|(&(x, y), &s)| W { s, x, y, a: y / n, b: y % n })
        .collect();

    // ore_bounds: min{v_π(C(b_i,p^{s_i}))n, v_π(C(n,p^{s_i}))n} ≤ J_i
    //             ≤ v_π(C(n,p^{s_i}))·n
    for w in &ws {
        let vn = k.vpi_binom(n, w.x)?;
        let upper = vn * n;
        let lower = if w.b >= w.x {
            (k.vpi_binom(w.b, w.x)? * n).min(upper)
        } else {
            // C(b, p^s) = 0 (b < p^s, including b = 0): that branch is +∞
            upper
        };
        if w.y < lower || w.y > upper {
            return Ok(Cheap::invalid(
                "ore_bounds",
                format!(
                    "J = {} at ({},{}) outside [{lower}, {upper}]",
                    w.y, w.x, w.y
                ),
            ));
        }
    }

    // same_b: b_i = b_k ⇒ a_i = a_k − v_π(C(b,p^{s_k})) + v_π(C(b,p^{s_i}))
    for i in 0..ws.len() {
        for t in 0..ws.len() {
            if i == t || ws[i].b == 0 || ws[i].b != ws[t].b {
                continue;
            }
            let b = ws[i].b;
            let want = ws[t].a as i128 - k.vpi_binom(b, ws[t].x)? as i128
                + k.vpi_binom(b, ws[i].x)? as i128;
            if ws[i].a as i128 != want {
                return Ok(Cheap::invalid(
                    "same_b",
                    format!(
                        "points ({},{}) and ({},{}) share b = {b} but have inconsistent a",
                        ws[i].x, ws[i].y, ws[t].x, ws[t].y
                    ),
                ));
            }
        }
    }

    // point_valuation: against every other point with J_t ≠ 0,
    // a_i ≥ [1 if b_i < b_t] + a_t − v_π(C(b_i,p^{s_t})) + v_π(C(b_i,p^{s_i}))
    for i in 0..ws.len() {
        if ws[i].b == 0 {
            continue;
        }
        for t in 0..ws.len() {
            if t == i || ws[t].y == 0 || ws[i].b < ws[t].x {
                continue;
            }
            let extra = i128::from(ws[i].b < ws[t].b);
            let rhs = extra + ws[t].a as i128 - k.vpi_binom(ws[i].b, ws[t].x)? as i128
                + k.vpi_binom(ws[i].b, ws[i].x)? as i128;
            if (ws[i].a as i128) < rhs {
                return Ok(Cheap::invalid(
                    "point_valuation",
                    format!(
                        "a = {} at ({},{}) below the bound {rhs} from ({},{})",
                        ws[i].a, ws[i].x, ws[i].y, ws[t].x, ws[t].y
                    ),
                ));
            }
        }
    }

    // missing_point: for every exponent w carrying no point, with
    // s_t < w < s_{t+1}, the ordinate above p^w must lie strictly above
    // the segment through the neighbouring points. The forced coefficient
    // of each point with b_k ≥ p^w yields
    // a_k > [ΔJ/Δx·(p^w−p^{s_t}) + J_t − b_k]/n − v_π(C(b_k,p^w)) + v_π(C(b_k,p^{s_k})),
    // and the leading coefficient yields n·v_π(C(n,p^w)) > line(p^w).
    for t in 0..ws.len().saturating_sub(1) {
        for w in (ws[t].s + 1)..ws[t + 1].s {
            let pw = p.pow(w);
            let dj = ws[t + 1].y as i128 - ws[t].y as i128;
            let dx = (ws[t + 1].x - ws[t].x) as i128;
            // line(p^w)·Δx = ΔJ·(p^w − p^{s_t}) + J_t·Δx
            let line_dx = dj * (pw as i128 - ws[t].x as i128) + ws[t].y as i128 * dx;
            if k.vpi_binom(n, pw)? as i128 * n as i128 * dx <= line_dx {
                return Ok(Cheap::invalid(
                    "missing_point",
                    format!(
                        "no point above {pw}, but the binomial valuation pins the ordinate there to the segment"
                    ),
                ));
            }
            for wk in &ws {
                if wk.b < pw {
                    continue;
                }
                // multiply through by n·Δx > 0
                let lhs = wk.a as i128 * n as i128 * dx;
                let rhs = line_dx - wk.b as i128 * dx
                    + (k.vpi_binom(wk.b, wk.x)? as i128 - k.vpi_binom(wk.b, pw)? as i128)
                        * n as i128
                        * dx;
                if lhs <= rhs {
                    return Ok(Cheap::invalid(
                        "missing_point",
                        format!(
                            "no point above {pw}, but a = {} at ({},{}) does not exceed the interpolation bound",
                            wk.a, wk.x, wk.y
                        ),
                    ));
                }
            }
        }
    }

    let polygon = RamPolygon::build(k, n, wild)?;
    Ok(PolygonCheck::Valid(polygon))
}

/// Internal shorthand for building Invalid verdicts.
struct Cheap;
impl Cheap {
    fn invalid(condition: &str, detail: String) -> PolygonCheck {
        PolygonCheck::Invalid(PolygonViolation { condition: condition.into(), detail })
    }
}

/// All valid ramification polygons for (n, J_0) over K, sorted by ordinate
/// sequence (missing exponents compare low).
pub fn enumerate_polygons(k: &LocalField, n: u64, j0: u64) -> Result<Vec<RamPolygon>> {
    if !ore_range(k, n).contains(&j0) {
        return Err(Error::InvalidInput(format!(
            "J_0 = {j0} is not admissible for degree {n}"
        )));
    }
    let p = k.p();
    let (u, e0) = split_degree(p, n);
    let pu = n / e0;
    if u == 0 {
        // tame: single horizontal polygon, only J_0 = 0
        let poly = RamPolygon::build(k, n, &[(1, 0)])?;
        return Ok(vec![poly]);
    }
    // interior exponents 1..u−1: each either absent or carrying an
    // ordinate J ∈ {p^s, 2p^s, …} bounded by J_0 − 1 and condition (a)
    let mut choices: Vec<Vec<Option<u64>>> = Vec::new();
    for s in 1..u {
        let ps = p.pow(s);
        let cap = (k.vpi_binom(n, ps)? * n).min(j0.saturating_sub(1));
        let mut c: Vec<Option<u64>> = vec![None];
        let mut j = ps;
        while j <= cap {
            c.push(Some(j));
            j += ps;
        }
        choices.push(c);
    }
    let mut out: Vec<RamPolygon> = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut cand: Vec<(u64, u64)> = vec![(1, j0)];
        for (s, &i) in idx.iter().enumerate() {
            if let Some(j) = choices[s][i] {
                cand.push((p.pow(s as u32 + 1), j));
            }
        }
        cand.push((pu, 0));
        if let PolygonCheck::Valid(poly) = validate_polygon(k, n, &cand)? {
            out.push(poly);
        }
        // odometer
        let mut carry = true;
        for (pos, i) in idx.iter_mut().enumerate() {
            if !carry {
                break;
            }
            *i += 1;
            if *i < choices[pos].len() {
                carry = false;
            } else {
                *i = 0;
            }
        }
        if carry {
            break;
        }
    }
    out.sort_by_key(|r| r.sort_key());
    out.dedup();
    Ok(out)
}

/// The ramification polygon of an Eisenstein polynomial given by its
/// coefficient valuations v_π(φ_0), …, v_π(φ_n): computes
/// v_α(ρ_{p^s}) = min_k {n(v_π(C(k,p^s)·φ_k) − 1) + k} for each s ≤ u
/// and takes the lower convex hull. The min is exact: distinct k give
/// valuations in distinct classes mod n.
pub fn polygon_of_valuations(k: &LocalField, vals: &[Valuation]) -> Result<RamPolygon> {
    if vals.len() < 3 {
        return Err(Error::NotEisenstein("degree must be at least 2".into()));
    }
    let n = (vals.len() - 1) as u64;
    if vals[0] != Valuation::Finite(1) {
        return Err(Error::NotEisenstein(
            "constant coefficient must have valuation exactly 1".into(),
        ));
    }
    if vals[n as usize] != Valuation::Finite(0) {
        return Err(Error::NotEisenstein("polynomial must be monic".into()));
    }
    for (i, v) in vals.iter().enumerate().take(n as usize).skip(1) {
        if let Valuation::Finite(0) = v {
            return Err(Error::NotEisenstein(format!(
                "coefficient {i} must have positive valuation"
            )));
        }
    }
    let p = k.p();
    let (u, _) = split_degree(p, n);
    // ordinates above p^s
    let mut raw: Vec<(u64, u64)> = Vec::with_capacity(u as usize + 1);
    for s in 0..=u {
        let ps = p.pow(s);
        let mut best = i128::MAX;
        for kk in ps..=n {
            let Valuation::Finite(v) = vals[kk as usize] else { continue };
            let term =
                n as i128 * (k.vpi_binom(kk, ps)? as i128 + v as i128 - 1) + kk as i128;
            best = best.min(term);
        }
        // each ordinate is nonnegative: every term other than the k = n
        // one at s = u has v_π(C(k,p^s)) + v_π(φ_k) ≥ 1
        debug_assert!(best >= 0);
        raw.push((ps, best as u64));
    }
    // lower convex hull vertices
    let mut hull: Vec<(u64, u64)> = Vec::new();
    for &pt in &raw {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 as i128 - a.0 as i128) * (pt.1 as i128 - a.1 as i128)
                - (b.1 as i128 - a.1 as i128) * (pt.0 as i128 - a.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // all raw points lying on the hull polyline
    let mut wild: Vec<(u64, u64)> = Vec::new();
    for &(x, y) in &raw {
        let seg = hull.windows(2).find(|wi| wi[0].0 <= x && x <= wi[1].0);
        let on = match seg {
            Some(wi) => {
                let (x0, y0) = (wi[0].0 as i128, wi[0].1 as i128);
                let (x1, y1) = (wi[1].0 as i128, wi[1].1 as i128);
                (x as i128 - x0) * (y1 - y0) == (y as i128 - y0) * (x1 - x0)
            }
            None => hull.len() == 1,
        };
        if on {
            wild.push((x, y));
        }
    }
    RamPolygon::build(k, n, &wild)
}

/// Convenience oracle: the polygon of an integer-coefficient Eisenstein
/// polynomial (little-endian coefficients, monic).
pub fn polygon_of_int_polynomial(k: &LocalField, coeffs: &[i64]) -> Result<RamPolygon> {
    let vals: Vec<Valuation> = coeffs.iter().map(|&c| k.vpi_int(c)).collect();
    polygon_of_valuations(k, &vals)
}

//! Root counting and isomorphism testing inside totally ramified extensions.
//!
//! For an Eisenstein polynomial ψ of degree n over K, the quotient
//! L = K[x]/(ψ) is totally ramified of degree n and the class α of x is a
//! uniformizer. Elements of O_L live in the power basis, x = Σ_{i<n} c_i·α^i
//! with coordinates c_i ∈ O_K, and
//!
//! ```text
//! v_α(Σ c_i·α^i) = min_i (n·v_π(c_i) + i),
//! ```
//!
//! exactly, because the n terms have pairwise distinct valuations mod n.
//!
//! Root counting walks residue refinements. A polynomial over O_L is read
//! off at its content valuation w — the residue of coeff·α^{−w} follows
//! from the identity res(π·α^{−n}) = −δ₀^{−1}, where δ₀ is the unit
//! residue of ψ_0/π — then every simple residue root lifts uniquely
//! (Hensel) and every repeated residue root r branches into the
//! substitution x ↦ α·x + r̂, whose content is strictly larger than w.
//! Nothing is ever divided, so coordinate precision never degrades along a
//! branch; when w reaches the requested α-precision the walk stops with an
//! explicit insufficient-precision error, never a silent wrong count.
//!
//! Representation invariants:
//! - internal elements are coordinate vectors of exactly n `TowerPoly`
//!   values, each carrying at least the working π-precision;
//! - the working π-precision satisfies n·(prec_pi − 1) ≥ prec_alpha, so
//!   every residue read below prec_alpha is decidable;
//! - polynomials over O_L keep their full coefficient vector (length
//!   deg+1) through every substitution; the degree never grows.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{LocalField, OkElem, TowerCtx, TowerPoly, Valuation};
use crate::polygon::{krasner_cutoff_build, polygon_of_valuations};
use crate::residue::ResidueElem;
use crate::template::EisPoly;

/// Element of O_L = O_K[x]/(ψ) in the power basis 1, α, …, α^{n−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElem {
    /// Coordinate i multiplies α^i; the vector length is the degree n.
    pub coeffs: Vec<OkElem>,
}

impl ExtElem {
    /// v_α(Σ c_i·α^i) = min_i(n·v_π(c_i) + i); Infinite when every
    /// coordinate is zero through its precision.
    pub fn v_alpha(&self) -> Valuation {
        let n = self.coeffs.len() as u64;
        let mut best: Option<u64> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Valuation::Finite(v) = c.valuation() {
                let cand = n * v + i as u64;
                best = Some(best.map_or(cand, |b| b.min(cand)));
            }
        }
        match best {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinite,
        }
    }
}

/// Internal O_L element: n coordinates over the working tower context.
type Elem = Vec<TowerPoly>;

/// Working context for one extension L = K[x]/(ψ).
struct ExtCtx<'a> {
    k: &'a LocalField,
    n: usize,
    ctx: TowerCtx<'a>,
    /// Non-leading coefficients ψ_0, …, ψ_{n−1} at working precision.
    psi: Vec<TowerPoly>,
    /// res(π·α^{−n}) = −δ₀^{−1} with δ₀ = res(ψ_0/π).
    pi_shift_res: ResidueElem,
    prec_pi: u64,
    prec_alpha: u64,
}

/// Coefficient i of an Eisenstein digit matrix as an O_K value, exact to
/// `prec_pi` (digits beyond the stored rows are zero).
fn coeff_tower(ctx: &TowerCtx<'_>, phi: &EisPoly, i: u64, prec_pi: u64) -> TowerPoly {
    let mut digits = vec![ResidueElem::ZERO; prec_pi as usize];
    for j in 1..prec_pi {
        digits[j as usize] = phi.digit(i, j);
    }
    ctx.from_digits(&digits, prec_pi)
}

impl<'a> ExtCtx<'a> {
    fn new(k: &'a LocalField, psi: &EisPoly, prec_alpha: u64) -> Result<Self> {
        let n = psi.n;
        let d0 = psi.digit(0, 1);
        if d0.is_zero() {
            return Err(Error::NotEisenstein(
                "the defining polynomial needs a constant term of valuation exactly 1".into(),
            ));
        }
        // n·(prec_pi − 1) ≥ prec_alpha keeps every residue read below
        // prec_alpha decidable without ever dividing.
        let prec_pi = prec_alpha.div_ceil(n) + 1;
        let ctx = k.tower_ctx(prec_pi / k.e_abs() + 2);
        debug_assert!(ctx.max_prec() >= prec_pi);
        let psi_c: Vec<TowerPoly> =
            (0..n).map(|i| coeff_tower(&ctx, psi, i, prec_pi)).collect();
        let rf = k.residue_field();
        let pi_shift_res = rf.neg(rf.inv(d0)?);
        Ok(ExtCtx {
            k,
            n: n as usize,
            ctx,
            psi: psi_c,
            pi_shift_res,
            prec_pi,
            prec_alpha,
        })
    }

    // ---- element arithmetic ----

    fn zero_elem(&self) -> Elem {
        vec![self.ctx.zero(); self.n]
    }

    fn const_elem(&self, c: TowerPoly) -> Elem {
        let mut e = self.zero_elem();
        e[0] = c;
        e
    }

    fn add_elem(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| self.ctx.add(x, y)).collect()
    }

    fn scale_elem(&self, a: &Elem, c: &TowerPoly) -> Elem {
        a.iter().map(|x| self.ctx.mul(x, c)).collect()
    }

    /// Multiply by α: shift coordinates, then reduce the overflow with
    /// α^n = −(ψ_0 + ψ_1·α + … + ψ_{n−1}·α^{n−1}).
    fn mul_alpha(&self, a: &Elem) -> Elem {
        let top = &a[self.n - 1];
        let mut out = Vec::with_capacity(self.n);
        out.push(self.ctx.zero());
        for c in a.iter().take(self.n - 1) {
            out.push(c.clone());
        }
        for (o, p) in out.iter_mut().zip(&self.psi) {
            *o = self.ctx.sub(o, &self.ctx.mul(top, p));
        }
        out
    }

    fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.n;
        let mut prod: Vec<TowerPoly> = vec![self.ctx.zero(); 2 * n - 1];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = self.ctx.add(&prod[i + j], &self.ctx.mul(&a[i], &b[j]));
            }
        }
        // top-down reduction: α^t = −Σ_i ψ_i·α^{t−n+i} for t ≥ n
        for t in (n..2 * n - 1).rev() {
            let ct = prod[t].clone();
            for i in 0..n {
                prod[t - n + i] = self.ctx.sub(&prod[t - n + i], &self.ctx.mul(&ct, &self.psi[i]));
            }
        }
        prod.truncate(n);
        prod
    }

    fn v_alpha_elem(&self, a: &Elem) -> Option<u64> {
        let mut best: Option<u64> = None;
        for (i, c) in a.iter().enumerate() {
            if let Some(v) = self.ctx.vpi(c) {
                let cand = self.n as u64 * v + i as u64;
                best = Some(best.map_or(cand, |b| b.min(cand)));
            }
        }
        best
    }

    /// Residue of a·α^{−w}; requires v_α(a) ≥ w. Only the coordinate with
    /// i ≡ w (mod n) can contribute at level w.
    fn residue_shift(&self, a: &Elem, w: u64) -> Result<ResidueElem> {
        let n = self.n as u64;
        let i = (w % n) as usize;
        let t = w / n;
        let rf = self.k.residue_field();
        match self.ctx.vpi(&a[i]) {
            None => {
                // zero through precision: a certified zero contribution
                // only below the precision horizon
                if t < a[i].prec {
                    Ok(ResidueElem::ZERO)
                } else {
                    Err(Error::InsufficientPrecision(a[i].prec))
                }
            }
            Some(v) if n * v + i as u64 > w => Ok(ResidueElem::ZERO),
            Some(v) if n * v + i as u64 == w => {
                // a_i·α^{i−w} = (a_i/π^t)·(π·α^{−n})^t with t = v
                let d = self.ctx.to_digits(&a[i], v + 1)?[v as usize];
                Ok(rf.mul(d, rf.pow(self.pi_shift_res, t)))
            }
            Some(_) => {
                debug_assert!(false, "residue shift below the content valuation");
                Err(Error::InvalidInput("internal: residue shift below content".into()))
            }
        }
    }

    // ---- polynomials over O_L ----

    /// Coefficients of a monic Eisenstein digit matrix as constants of O_L
    /// (length deg+1, leading 1).
    fn lift_eis(&self, phi: &EisPoly) -> Vec<Elem> {
        let mut out = Vec::with_capacity(phi.n as usize + 1);
        for i in 0..phi.n {
            out.push(self.const_elem(coeff_tower(&self.ctx, phi, i, self.prec_pi)));
        }
        out.push(self.const_elem(self.ctx.one()));
        out
    }

    fn eval_elem(&self, poly: &[Elem], x: &Elem) -> Elem {
        let mut acc = self.zero_elem();
        for c in poly.iter().rev() {
            acc = self.add_elem(&self.mul_elem(&acc, x), c);
        }
        acc
    }

    /// φ(x) ↦ φ(α·x + r̂) for the canonical lift r̂ of a residue root.
    fn shift_scale(&self, poly: &[Elem], r: ResidueElem) -> Vec<Elem> {
        let mut a = poly.to_vec();
        let d = a.len() - 1;
        if !r.is_zero() {
            // Taylor shift by r̂ via synthetic Horner
            let rhat = self.ctx.from_residue(r);
            for i in 0..d {
                for j in (i..d).rev() {
                    let t = self.scale_elem(&a[j + 1], &rhat);
                    a[j] = self.add_elem(&a[j], &t);
                }
            }
        }
        for (m, c) in a.iter_mut().enumerate() {
            for _ in 0..m {
                *c = self.mul_alpha(c);
            }
        }
        a
    }

    // ---- the counting walk ----

    fn count_inner(&self, poly: &[Elem]) -> Result<u64> {
        let w = poly
            .iter()
            .filter_map(|c| self.v_alpha_elem(c))
            .min()
            .ok_or(Error::InsufficientPrecision(self.prec_alpha))?;
        if w >= self.prec_alpha {
            return Err(Error::InsufficientPrecision(self.prec_alpha));
        }
        let resid: Vec<ResidueElem> =
            poly.iter().map(|c| self.residue_shift(c, w)).collect::<Result<_>>()?;
        let deg = match resid.iter().rposition(|r| !r.is_zero()) {
            Some(d) => d,
            None => {
                debug_assert!(false, "zero residual at the exact content valuation");
                return Err(Error::InsufficientPrecision(self.prec_alpha));
            }
        };
        if deg == 0 {
            // unit content in the constant term: no roots in this ball
            return Ok(0);
        }
        let rf = self.k.residue_field();
        let mut total = 0u64;
        for (root, mult) in rf.poly_roots(&resid[..=deg]) {
            if mult == 1 {
                // simple residue root: exactly one lift
                total += 1;
            } else {
                total += self.count_inner(&self.shift_scale(poly, root))?;
            }
        }
        Ok(total)
    }

    // ---- conversions for the public element API ----

    fn elem_in(&self, x: &ExtElem) -> Elem {
        x.coeffs
            .iter()
            .map(|c| {
                let upto = c.prec.min(self.prec_pi);
                let mut digits = c.digits.clone();
                digits.resize(upto as usize, ResidueElem::ZERO);
                self.ctx.from_digits(&digits, upto)
            })
            .collect()
    }

    fn elem_out(&self, a: &Elem) -> ExtElem {
        ExtElem {
            coeffs: a
                .iter()
                .map(|c| {
                    let upto = c.prec.min(self.prec_pi);
                    let digits = self.ctx.to_digits(c, upto).expect("within precision");
                    self.k.ok_from_digits(digits)
                })
                .collect(),
        }
    }
}

/// Context sized to the operands' own precision.
fn op_ctx<'a>(k: &'a LocalField, psi: &EisPoly, elems: &[&ExtElem]) -> Result<ExtCtx<'a>> {
    for e in elems {
        if e.coeffs.len() as u64 != psi.n {
            return Err(Error::InvalidInput(format!(
                "element has {} coordinates, the extension needs {}",
                e.coeffs.len(),
                psi.n
            )));
        }
    }
    let prec_pi = elems
        .iter()
        .flat_map(|e| e.coeffs.iter().map(|c| c.prec))
        .min()
        .unwrap_or(1);
    ExtCtx::new(k, psi, psi.n * prec_pi.saturating_sub(1))
}

/// a + b in O_L for L = K[x]/(ψ), correct to the operands' precision.
pub fn ext_add(k: &LocalField, psi: &EisPoly, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
    let ectx = op_ctx(k, psi, &[a, b])?;
    Ok(ectx.elem_out(&ectx.add_elem(&ectx.elem_in(a), &ectx.elem_in(b))))
}

/// a · b in O_L with reduction by ψ, correct to the operands' precision.
pub fn ext_mul(k: &LocalField, psi: &EisPoly, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
    let ectx = op_ctx(k, psi, &[a, b])?;
    Ok(ectx.elem_out(&ectx.mul_elem(&ectx.elem_in(a), &ectx.elem_in(b))))
}

/// φ(x) for a monic Eisenstein digit matrix φ and x ∈ O_L = K[x]/(ψ).
pub fn eval_poly(k: &LocalField, psi: &EisPoly, phi: &EisPoly, x: &ExtElem) -> Result<ExtElem> {
    let ectx = op_ctx(k, psi, &[x])?;
    let poly = ectx.lift_eis(phi);
    Ok(ectx.elem_out(&ectx.eval_elem(&poly, &ectx.elem_in(x))))
}

/// Number of distinct roots of φ in O_L for L = K[x]/(ψ), both Eisenstein
/// of the same degree over K; `prec` is the working α-digit precision.
pub fn count_roots(k: &LocalField, phi: &EisPoly, psi: &EisPoly, prec: u64) -> Result<u64> {
    if phi.n != psi.n {
        return Err(Error::InvalidInput(format!(
            "root counting needs equal degrees, got {} and {}",
            phi.n, psi.n
        )));
    }
    if phi.digit(0, 1).is_zero() {
        return Err(Error::NotEisenstein(
            "the counted polynomial needs a constant term of valuation exactly 1".into(),
        ));
    }
    let ectx = ExtCtx::new(k, psi, prec)?;
    let poly = ectx.lift_eis(phi);
    ectx.count_inner(&poly)
}

/// Default α-precision: past the separability bound 2·v_{α}(disc φ) + 1
/// and past the visible digit window of both polynomials.
fn default_prec(k: &LocalField, phi: &EisPoly, psi: &EisPoly) -> Result<u64> {
    let n = psi.n;
    let jp = polygon_of_valuations(k, &phi.valuations())?.j0();
    let jq = polygon_of_valuations(k, &psi.valuations())?.j0();
    let j0 = jp.max(jq);
    let c = krasner_cutoff_build(n, j0);
    Ok((2 * n * (n + j0 - 1) + 1).max(n * (c + 1)))
}

/// `count_roots` at the default precision, doubling on a precision
/// underrun (at most 3 retries).
pub fn count_roots_auto(k: &LocalField, phi: &EisPoly, psi: &EisPoly) -> Result<u64> {
    if phi.n != psi.n {
        return Err(Error::InvalidInput(format!(
            "root counting needs equal degrees, got {} and {}",
            phi.n, psi.n
        )));
    }
    let mut prec = default_prec(k, phi, psi)?;
    for attempt in 0..4 {
        match count_roots(k, phi, psi, prec) {
            Err(Error::InsufficientPrecision(_)) if attempt < 3 => prec *= 2,
            other => return other,
        }
    }
    unreachable!("the retry loop returns on its final attempt")
}

/// Whether φ and ψ generate the same extension of K. Polynomials of
/// different degrees never do; for equal degrees this is the root
/// dichotomy: φ has either no root in K[x]/(ψ) or as many as the common
/// field has automorphisms.
pub fn same_extension(k: &LocalField, phi: &EisPoly, psi: &EisPoly) -> Result<bool> {
    if phi.n != psi.n {
        return Ok(false);
    }
    Ok(count_roots_auto(k, phi, psi)? > 0)
}

/// #Aut(L/K) for L = K[x]/(φ): the number of roots of φ in its own field.
pub fn aut_count(k: &LocalField, phi: &EisPoly) -> Result<u64> {
    count_roots_auto(k, phi, phi)
}

/// Result of the minimal-set filter: `kept` holds indices into the input
/// stream, in stream order; `assignment[i]` is the position within `kept`
/// of the representative generating the same extension as input i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub kept: Vec<usize>,
    pub assignment: Vec<usize>,
}

/// Greedy reduction of a polynomial stream to pairwise non-isomorphic
/// representatives: the first generator of each extension in stream order
/// is kept, later ones are recorded as its siblings. The comparison
/// frontier runs in parallel; commits stay in stream order, so the
/// outcome is deterministic.
pub fn filter_minimal(k: &LocalField, polys: &[EisPoly]) -> Result<FilterOutcome> {
    let mut kept: Vec<usize> = Vec::new();
    let mut assignment: Vec<usize> = Vec::with_capacity(polys.len());
    for (i, phi) in polys.iter().enumerate() {
        let hit = kept
            .par_iter()
            .enumerate()
            .find_map_first(|(pos, &rep)| match same_extension(k, phi, &polys[rep]) {
                Ok(true) => Some(Ok(pos)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            });
        match hit {
            Some(Ok(pos)) => assignment.push(pos),
            Some(Err(e)) => return Err(e),
            None => {
                kept.push(i);
                assignment.push(kept.len() - 1);
            }
        }
    }
    Ok(FilterOutcome { kept, assignment })
}

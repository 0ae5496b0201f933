//! The base field K/Q_p as a tower, π-adic valuations, and finite-precision
//! arithmetic in O_K.
//!
//! A field is described by at most one unramified step (a monic modulus over
//! F_p of degree f, lifted to Z with coefficients in [0,p)) followed by at
//! most one Eisenstein step (a monic polynomial of degree e over the
//! unramified subfield with exact integer coefficients given as digit
//! expansions). The absolute ramification index is e, the residue field is
//! F_{p^f}, and v_π is normalized so v_π(π) = 1, hence v_π(p) = e.
//!
//! Representation invariants:
//! - `OkElem`: π-adic digit vector over the fixed representative set
//!   (lifts of polynomial-basis residue elements with coordinates in
//!   [0,p)); `prec` = number of meaningful digits; the element is known
//!   exactly mod π^prec and unknown beyond.
//! - Internally, arithmetic runs on `TowerPoly`: an element Σ c_i π^i with
//!   i < e and c_i ∈ O_U stored as γ-coordinate vectors of integers mod
//!   p^m_store. Each `TowerPoly` tracks its own π-precision `prec`; stored
//!   coordinates are only one representative of the class mod π^prec, so
//!   every read goes through residue/digit extraction and respects `prec`.

use crate::error::{Error, Result};
use crate::residue::{ResidueElem, ResidueField};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Deserialize;

/// A π-adic valuation: finite value or +∞ (the valuation of 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    /// v_π(x) for x ≠ 0.
    Finite(u64),
    /// v_π(0).
    Infinite,
}

impl Valuation {
    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// True iff this is the valuation of zero.
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

/// Element of O_K as a π-adic digit vector; see module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OkElem {
    /// Digit j is the residue of x·π^{−j} after stripping lower digits.
    pub digits: Vec<ResidueElem>,
    /// Number of valid digits (= digits.len()).
    pub prec: u64,
}

impl OkElem {
    /// Valuation as read from the digits: index of the first nonzero digit,
    /// or Infinite if all digits through prec are zero (true valuation is
    /// then ≥ prec, indistinguishable from 0 at this precision).
    pub fn valuation(&self) -> Valuation {
        match self.digits.iter().position(|d| !d.is_zero()) {
            Some(j) => Valuation::Finite(j as u64),
            None => Valuation::Infinite,
        }
    }
}

/// JSON field-config body: {"p": …, "unramified": […], "eisenstein": […]}.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldConfig {
    p: u64,
    /// Coefficients c_0..c_f of the residue modulus over F_p.
    unramified: Option<Vec<i64>>,
    /// Coefficients of the Eisenstein step, constant term first; each
    /// coefficient is a digit list over the unramified subfield, each digit
    /// an array of f residue coordinates.
    eisenstein: Option<Vec<Vec<Vec<i64>>>>,
}

/// The base field K/Q_p.
#[derive(Debug, Clone)]
pub struct LocalField {
    p: u64,
    residue: ResidueField,
    // Monic lift of the residue modulus to Z, coordinates in [0,p); length f+1.
    unram_modulus: Vec<u64>,
    e_abs: u64,
    // Exact integer γ-coordinates of the Eisenstein coefficients E_0..E_e
    // (length e_abs+1, each of length f); E(x) = x − p when e_abs = 1.
    eis_coeffs: Vec<Vec<BigUint>>,
    // residue(p·π^{−e}); equals 1 when e_abs = 1.
    p_unit_residue: ResidueElem,
}

impl LocalField {
    /// The rational p-adic field Q_p.
    pub fn qp(p: u64) -> Result<Self> {
        Self::new(p, None, None)
    }

    /// Build from tower data: optional unramified modulus (c_0..c_f over
    /// F_p), optional Eisenstein step over the unramified subfield (each
    /// coefficient a digit list, each digit f residue coordinates).
    pub fn new(
        p: u64,
        unramified: Option<Vec<i64>>,
        eisenstein: Option<Vec<Vec<Vec<i64>>>>,
    ) -> Result<Self> {
        let residue = match &unramified {
            Some(m) => ResidueField::extension(p, m)?,
            None => ResidueField::prime(p)?,
        };
        let f = residue.degree() as usize;
        let unram_modulus = residue.modulus().to_vec();

        let (e_abs, eis_coeffs) = match eisenstein {
            None => {
                // E(x) = x − p, giving π = p; the −p constant is never used
                // directly (e_abs = 1 short-circuits π-reduction), store p
                // for reference.
                (1u64, vec![vec![BigUint::from(p); 1], vec![BigUint::one(); 1]])
            }
            Some(coeffs) => {
                let e = coeffs.len().saturating_sub(1) as u64;
                if e < 1 {
                    return Err(Error::InvalidField(
                        "eisenstein step must have degree at least 1".into(),
                    ));
                }
                let mut exact: Vec<Vec<BigUint>> = Vec::with_capacity(coeffs.len());
                for (i, digit_list) in coeffs.iter().enumerate() {
                    let mut coords = vec![BigUint::zero(); f];
                    let mut scale = BigUint::one();
                    for (j, digit) in digit_list.iter().enumerate() {
                        if digit.len() != f {
                            return Err(Error::InvalidField(format!(
                                "eisenstein coefficient {i}, digit {j}: expected {f} residue coordinates, got {}",
                                digit.len()
                            )));
                        }
                        for (l, &c) in digit.iter().enumerate() {
                            if c < 0 || c >= p as i64 {
                                return Err(Error::InvalidField(format!(
                                    "eisenstein digit coordinate {c} out of range [0,{p})"
                                )));
                            }
                            coords[l] += BigUint::from(c as u64) * &scale;
                        }
                        scale *= BigUint::from(p);
                    }
                    exact.push(coords);
                }
                // Eisenstein over the unramified subfield: v_p(E_0) = 1,
                // v_p(E_i) ≥ 1 for 0 < i < e, E_e = 1.
                let vp_of = |coords: &[BigUint]| -> Option<u64> {
                    coords
                        .iter()
                        .filter(|c| !c.is_zero())
                        .map(|c| {
                            let mut v = 0u64;
                            let mut c = c.clone();
                            let bp = BigUint::from(p);
                            while (&c % &bp).is_zero() {
                                c /= &bp;
                                v += 1;
                            }
                            v
                        })
                        .min()
                };
                match vp_of(&exact[0]) {
                    Some(1) => {}
                    _ => {
                        return Err(Error::InvalidField(
                            "eisenstein constant term must have valuation exactly 1".into(),
                        ))
                    }
                }
                for (i, c) in exact.iter().enumerate().take(e as usize).skip(1) {
                    if let Some(0) = vp_of(c) {
                        return Err(Error::InvalidField(format!(
                            "eisenstein coefficient {i} must have positive valuation"
                        )));
                    }
                }
                let lead = &exact[e as usize];
                let monic = lead[0].is_one() && lead[1..].iter().all(|c| c.is_zero());
                if !monic {
                    return Err(Error::InvalidField(
                        "eisenstein step must be monic".into(),
                    ));
                }
                (e, exact)
            }
        };

        // residue(p·π^{−e}) = −(E_0/p)⁻¹ in F_q for a genuine Eisenstein
        // step, and 1 when π = p.
        let p_unit_residue = if e_abs == 1 {
            ResidueElem::ONE
        } else {
            let bp = BigUint::from(p);
            let coords: Vec<i64> = eis_coeffs[0]
                .iter()
                .map(|c| ((c / &bp) % &bp).to_u64_digits().first().copied().unwrap_or(0) as i64)
                .collect();
            let u0 = residue.from_coords(&coords)?;
            residue.neg(residue.inv(u0)?)
        };

        Ok(LocalField {
            p,
            residue,
            unram_modulus,
            e_abs,
            eis_coeffs,
            p_unit_residue,
        })
    }

    /// Parse a JSON field config: {"p":3}, {"p":2,"unramified":[1,1,1]},
    /// {"p":3,"eisenstein":[[[0],[2]],[[0]],[[1]]]}, ...
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: FieldConfig = serde_json::from_str(s)
            .map_err(|e| Error::InvalidField(format!("bad field config: {e}")))?;
        Self::new(cfg.p, cfg.unramified, cfg.eisenstein)
    }

    /// The residue characteristic p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The residue field F_q.
    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// Residue degree f over Q_p.
    pub fn f(&self) -> u64 {
        self.residue.degree() as u64
    }

    /// Absolute ramification index e(K/Q_p); v_π(p) = e_abs.
    pub fn e_abs(&self) -> u64 {
        self.e_abs
    }

    /// residue(p·π^{−e_abs}), the unit class of p against the uniformizer.
    pub fn p_unit_residue(&self) -> ResidueElem {
        self.p_unit_residue
    }

    // ---- valuations of integers and binomials ----

    /// v_π(m) = e_abs·v_p(m) for an integer m; v_π(0) = ∞.
    pub fn vpi_int(&self, m: i64) -> Valuation {
        if m == 0 {
            return Valuation::Infinite;
        }
        let mut mm = m.unsigned_abs();
        let mut v = 0u64;
        while mm % self.p == 0 {
            mm /= self.p;
            v += 1;
        }
        Valuation::Finite(v * self.e_abs)
    }

    /// v_π(C(n,k)) = e_abs × (number of base-p carries when adding k and
    /// n−k), by Kummer's theorem. No big binomials are materialized.
    pub fn vpi_binom(&self, n: u64, k: u64) -> Result<u64> {
        Ok(self.vp_binom(n, k)? * self.e_abs)
    }

    /// v_p(C(n,k)) (without the e_abs factor).
    pub fn vp_binom(&self, n: u64, k: u64) -> Result<u64> {
        if k > n {
            return Err(Error::InvalidInput(format!(
                "binomial C({n},{k}) with k > n"
            )));
        }
        let (mut a, mut b) = (k, n - k);
        let mut carries = 0u64;
        let mut carry = 0u64;
        while a > 0 || b > 0 || carry > 0 {
            let s = a % self.p + b % self.p + carry;
            carry = u64::from(s >= self.p);
            carries += carry;
            a /= self.p;
            b /= self.p;
        }
        Ok(carries)
    }

    /// The residue of m·π^{−v_π(m)} ∈ F_q for a nonzero integer m.
    pub fn unit_residue_int(&self, m: i64) -> Result<ResidueElem> {
        if m == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut mm = m.unsigned_abs();
        let mut v = 0u32;
        while mm % self.p == 0 {
            mm /= self.p;
            v += 1;
        }
        let unit = self.residue.from_int(if m < 0 {
            -((mm % self.p) as i64)
        } else {
            (mm % self.p) as i64
        });
        Ok(self
            .residue
            .mul(unit, self.residue.pow(self.p_unit_residue, v as u64)))
    }

    /// (v_π(C(n,k)), residue of C(n,k)·π^{−v_π}) as a pair, computed from
    /// the exact binomial.
    pub fn binom_parts(&self, n: u64, k: u64) -> Result<(u64, ResidueElem)> {
        let vp = self.vp_binom(n, k)?;
        let bin = num_integer::binomial(BigUint::from(n), BigUint::from(k));
        let pe = BigUint::from(self.p).pow(vp as u32);
        let unit = ((bin / pe) % BigUint::from(self.p))
            .to_u64_digits()
            .first()
            .copied()
            .unwrap_or(0);
        let r = self.residue.mul(
            self.residue.from_int(unit as i64),
            self.residue.pow(self.p_unit_residue, vp),
        );
        Ok((vp * self.e_abs, r))
    }

    // ---- O_K digit arithmetic ----

    /// The element with the given digits (prec = number of digits).
    pub fn ok_from_digits(&self, digits: Vec<ResidueElem>) -> OkElem {
        let prec = digits.len() as u64;
        OkElem { digits, prec }
    }

    /// Lift of a residue element: digits [r, 0, …, 0] of length prec.
    pub fn ok_lift(&self, r: ResidueElem, prec: u64) -> OkElem {
        let mut digits = vec![ResidueElem::ZERO; prec as usize];
        if prec > 0 {
            digits[0] = r;
        }
        OkElem { digits, prec }
    }

    /// The residue (digit 0); zero-precision elements reduce to 0.
    pub fn ok_residue(&self, a: &OkElem) -> ResidueElem {
        a.digits.first().copied().unwrap_or(ResidueElem::ZERO)
    }

    /// a + b to the min of the operand precisions.
    pub fn ok_add(&self, a: &OkElem, b: &OkElem) -> OkElem {
        self.ok_binop(a, b, |ctx, x, y| ctx.add(x, y))
    }

    /// a − b to the min of the operand precisions.
    pub fn ok_sub(&self, a: &OkElem, b: &OkElem) -> OkElem {
        self.ok_binop(a, b, |ctx, x, y| ctx.sub(x, y))
    }

    /// a · b to the min of the operand precisions.
    pub fn ok_mul(&self, a: &OkElem, b: &OkElem) -> OkElem {
        self.ok_binop(a, b, |ctx, x, y| ctx.mul(x, y))
    }

    fn ok_binop(
        &self,
        a: &OkElem,
        b: &OkElem,
        op: impl Fn(&TowerCtx, &TowerPoly, &TowerPoly) -> TowerPoly,
    ) -> OkElem {
        let prec = a.prec.min(b.prec);
        if prec == 0 {
            return OkElem { digits: Vec::new(), prec: 0 };
        }
        let ctx = self.tower_ctx(prec / self.e_abs + 2);
        let x = ctx.from_digits(&a.digits, prec);
        let y = ctx.from_digits(&b.digits, prec);
        let z = op(&ctx, &x, &y);
        let digits = ctx
            .to_digits(&z, prec)
            .expect("binop precision accounted for");
        OkElem { digits, prec }
    }

    /// Internal arithmetic context at storage modulus p^m_store.
    pub(crate) fn tower_ctx(&self, m_store: u64) -> TowerCtx<'_> {
        TowerCtx::new(self, m_store.max(2))
    }
}

// ---- internal tower representation ----

/// Element Σ_{i<e} c_i π^i with c_i ∈ O_U as γ-coordinate vectors mod
/// p^m_store; `prec` is the number of valid π-digits (≤ e·m_store − e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TowerPoly {
    /// c[i][l]: coordinate of γ^l in the π^i coefficient, reduced mod p^m.
    c: Vec<Vec<BigUint>>,
    /// The element is known exactly mod π^prec.
    pub(crate) prec: u64,
}

/// Shared precomputation for tower arithmetic at one storage modulus.
pub(crate) struct TowerCtx<'a> {
    k: &'a LocalField,
    e: usize,
    f: usize,
    p_m: BigUint,
    big_p: BigUint,
    /// E_0..E_e reduced mod p^m (γ-coordinate vectors).
    eis_red: Vec<Vec<BigUint>>,
    /// p/π as an element (equals 1 when e = 1).
    pdivpi: TowerPoly,
    /// Full precision of freshly lifted exact values: e·(m_store − 1).
    full_prec: u64,
}

impl<'a> TowerCtx<'a> {
    fn new(k: &'a LocalField, m_store: u64) -> Self {
        let e = k.e_abs as usize;
        let f = k.f() as usize;
        let big_p = BigUint::from(k.p);
        let p_m = big_p.pow(m_store as u32);
        // One storage digit of headroom: exact values mod p^m support
        // e·(m−1) π-digits of divisions without touching the top digit.
        let full_prec = (e as u64) * (m_store - 1);
        let eis_red: Vec<Vec<BigUint>> = k
            .eis_coeffs
            .iter()
            .map(|coords| coords.iter().map(|c| c % &p_m).collect())
            .collect();
        let mut ctx = TowerCtx {
            k,
            e,
            f,
            p_m,
            big_p,
            eis_red,
            pdivpi: TowerPoly { c: Vec::new(), prec: 0 },
            full_prec,
        };
        ctx.pdivpi = ctx.build_pdivpi();
        ctx
    }

    /// p/π = −u₀⁻¹·(π^{e−1} + Σ_{i=1}^{e−1} E_i π^{i−1}) where E_0 = p·u₀;
    /// degenerates to 1 when e = 1.
    fn build_pdivpi(&self) -> TowerPoly {
        if self.e == 1 {
            return self.one();
        }
        // u₀ = E_0/p, exact division of stored coordinates.
        let u0_coords: Vec<BigUint> = self.eis_red[0]
            .iter()
            .map(|c| c / &self.big_p)
            .collect();
        let u0 = self.from_ou(u0_coords);
        let u0_inv = self.inv_unit(&u0).expect("E_0/p is a unit");
        let mut w = self.zero();
        for i in 1..self.e {
            w.c[i - 1] = self.eis_red[i].clone();
        }
        w.c[self.e - 1] = self.one().c[0].clone();
        self.neg(&self.mul(&u0_inv, &w))
    }

    pub(crate) fn max_prec(&self) -> u64 {
        self.full_prec
    }

    // ---- constructors ----

    pub(crate) fn zero(&self) -> TowerPoly {
        TowerPoly {
            c: vec![vec![BigUint::zero(); self.f]; self.e],
            prec: self.full_prec,
        }
    }

    pub(crate) fn one(&self) -> TowerPoly {
        let mut x = self.zero();
        x.c[0][0] = BigUint::one();
        x
    }

    /// The uniformizer π.
    pub(crate) fn pi(&self) -> TowerPoly {
        let mut x = self.zero();
        if self.e == 1 {
            x.c[0][0] = &self.big_p % &self.p_m;
        } else {
            x.c[1][0] = BigUint::one();
        }
        x
    }

    /// Constant from a signed integer.
    pub(crate) fn from_int(&self, v: i64) -> TowerPoly {
        let mut x = self.zero();
        let m = BigUint::from(v.unsigned_abs()) % &self.p_m;
        x.c[0][0] = if v < 0 && !m.is_zero() { &self.p_m - m } else { m };
        x
    }

    fn from_ou(&self, coords: Vec<BigUint>) -> TowerPoly {
        let mut x = self.zero();
        x.c[0] = coords.into_iter().map(|c| c % &self.p_m).collect();
        x
    }

    /// Lift of a residue element (coordinates in [0,p)).
    pub(crate) fn from_residue(&self, r: ResidueElem) -> TowerPoly {
        let coords = self.k.residue.coords(r);
        self.from_ou(coords.into_iter().map(BigUint::from).collect())
    }

    /// Assemble from π-adic digits, valid to min(digit count, upto).
    pub(crate) fn from_digits(&self, digits: &[ResidueElem], upto: u64) -> TowerPoly {
        let mut acc = self.zero();
        let mut pow = self.one();
        let pi = self.pi();
        for (j, &d) in digits.iter().enumerate() {
            if j as u64 >= upto {
                break;
            }
            if !d.is_zero() {
                acc = self.add(&acc, &self.mul(&self.from_residue(d), &pow));
            }
            pow = self.mul(&pow, &pi);
        }
        acc.prec = (digits.len() as u64).min(upto).min(self.full_prec);
        acc
    }

    // ---- reads ----

    /// The residue (class mod π); requires prec ≥ 1.
    pub(crate) fn residue(&self, x: &TowerPoly) -> ResidueElem {
        debug_assert!(x.prec >= 1, "residue read beyond precision");
        let coords: Vec<i64> = x.c[0]
            .iter()
            .map(|c| (c % &self.big_p).to_u64_digits().first().copied().unwrap_or(0) as i64)
            .collect();
        self.k.residue.from_coords(&coords).expect("f coords")
    }

    /// v_π(x) if it is < x.prec, else None (all digits zero through prec).
    pub(crate) fn vpi(&self, x: &TowerPoly) -> Option<u64> {
        let mut cur = x.clone();
        let mut v = 0u64;
        while cur.prec >= 1 {
            if !self.residue(&cur).is_zero() {
                return Some(v);
            }
            cur = self.div_pi_unchecked(cur);
            v += 1;
        }
        None
    }

    /// π-adic digits 0..upto; errors if precision is insufficient.
    pub(crate) fn to_digits(&self, x: &TowerPoly, upto: u64) -> Result<Vec<ResidueElem>> {
        if upto > x.prec {
            return Err(Error::InsufficientPrecision(x.prec));
        }
        let mut cur = x.clone();
        let mut out = Vec::with_capacity(upto as usize);
        for _ in 0..upto {
            let d = self.residue(&cur);
            out.push(d);
            if !d.is_zero() {
                cur = self.sub(&cur, &self.from_residue(d));
            }
            cur = self.div_pi_unchecked(cur);
        }
        Ok(out)
    }

    // ---- ring operations ----

    pub(crate) fn add(&self, a: &TowerPoly, b: &TowerPoly) -> TowerPoly {
        let mut c = vec![vec![BigUint::zero(); self.f]; self.e];
        for i in 0..self.e {
            for l in 0..self.f {
                c[i][l] = (&a.c[i][l] + &b.c[i][l]) % &self.p_m;
            }
        }
        TowerPoly { c, prec: a.prec.min(b.prec) }
    }

    pub(crate) fn sub(&self, a: &TowerPoly, b: &TowerPoly) -> TowerPoly {
        let mut c = vec![vec![BigUint::zero(); self.f]; self.e];
        for i in 0..self.e {
            for l in 0..self.f {
                c[i][l] = (&a.c[i][l] + &self.p_m - &b.c[i][l]) % &self.p_m;
            }
        }
        TowerPoly { c, prec: a.prec.min(b.prec) }
    }

    pub(crate) fn neg(&self, a: &TowerPoly) -> TowerPoly {
        let mut c = vec![vec![BigUint::zero(); self.f]; self.e];
        for i in 0..self.e {
            for l in 0..self.f {
                if !a.c[i][l].is_zero() {
                    c[i][l] = &self.p_m - &a.c[i][l];
                }
            }
        }
        TowerPoly { c, prec: a.prec }
    }

    /// O_U product of coordinate vectors: γ-polynomial product reduced by
    /// the (monic) unramified modulus, coordinates mod p^m.
    fn ou_mul(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        if self.f == 1 {
            return vec![(&a[0] * &b[0]) % &self.p_m];
        }
        let mut prod = vec![BigUint::zero(); 2 * self.f - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    prod[i + j] = (&prod[i + j] + ai * bj) % &self.p_m;
                }
            }
        }
        for k in (self.f..2 * self.f - 1).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let ck = std::mem::take(&mut prod[k]);
            for l in 0..self.f {
                let m = self.k.unram_modulus[l];
                if m != 0 {
                    let s = (&ck * BigUint::from(m)) % &self.p_m;
                    prod[k - self.f + l] =
                        (&prod[k - self.f + l] + &self.p_m - s) % &self.p_m;
                }
            }
        }
        prod.truncate(self.f);
        prod
    }

    fn ou_addassign(&self, acc: &mut [BigUint], x: &[BigUint]) {
        for (a, b) in acc.iter_mut().zip(x) {
            *a = (&*a + b) % &self.p_m;
        }
    }

    fn ou_subassign(&self, acc: &mut [BigUint], x: &[BigUint]) {
        for (a, b) in acc.iter_mut().zip(x) {
            *a = (&*a + &self.p_m - b) % &self.p_m;
        }
    }

    pub(crate) fn mul(&self, a: &TowerPoly, b: &TowerPoly) -> TowerPoly {
        let prec = a.prec.min(b.prec);
        if self.e == 1 {
            return TowerPoly { c: vec![self.ou_mul(&a.c[0], &b.c[0])], prec };
        }
        // π-polynomial product of degree ≤ 2e−2...
        let mut prod: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); self.f]; 2 * self.e - 1];
        for i in 0..self.e {
            if a.c[i].iter().all(|c| c.is_zero()) {
                continue;
            }
            for j in 0..self.e {
                if b.c[j].iter().all(|c| c.is_zero()) {
                    continue;
                }
                let t = self.ou_mul(&a.c[i], &b.c[j]);
                self.ou_addassign(&mut prod[i + j], &t);
            }
        }
        // ...reduced by the monic Eisenstein relation π^e = −Σ E_i π^i.
        for k in (self.e..2 * self.e - 1).rev() {
            if prod[k].iter().all(|c| c.is_zero()) {
                continue;
            }
            let ck = std::mem::replace(&mut prod[k], vec![BigUint::zero(); self.f]);
            for i in 0..self.e {
                if self.eis_red[i].iter().all(|c| c.is_zero()) {
                    continue;
                }
                let t = self.ou_mul(&ck, &self.eis_red[i]);
                self.ou_subassign(&mut prod[k - self.e + i], &t);
            }
        }
        prod.truncate(self.e);
        TowerPoly { c: prod, prec }
    }

    /// x/π for x with residue 0; loses one digit of precision.
    #[allow(dead_code)] // checked counterpart of div_pi_unchecked, kept under test
    pub(crate) fn div_pi(&self, x: &TowerPoly) -> Result<TowerPoly> {
        if x.prec < 1 {
            return Err(Error::InsufficientPrecision(0));
        }
        if !self.residue(x).is_zero() {
            return Err(Error::InvalidInput(
                "division by π of an element with nonzero residue".into(),
            ));
        }
        Ok(self.div_pi_unchecked(x.clone()))
    }

    /// x/π assuming residue(x) = 0: x = c_0 + Σ_{i≥1} c_i π^i with p | c_0,
    /// so x/π = (c_0/p)·(p/π) + Σ_{i≥1} c_i π^{i−1}.
    fn div_pi_unchecked(&self, x: TowerPoly) -> TowerPoly {
        let prec = x.prec.saturating_sub(1);
        if self.e == 1 {
            let c0: Vec<BigUint> = x.c[0].iter().map(|c| c / &self.big_p).collect();
            return TowerPoly { c: vec![c0], prec };
        }
        let c0_div_p: Vec<BigUint> = x.c[0].iter().map(|c| c / &self.big_p).collect();
        let mut shifted = self.zero();
        for i in 1..self.e {
            shifted.c[i - 1] = x.c[i].clone();
        }
        let carry = self.mul(&self.from_ou(c0_div_p), &self.pdivpi);
        let mut out = self.add(&shifted, &carry);
        out.prec = prec;
        out
    }

    /// Newton inversion of a unit (residue ≠ 0): y ← y(2 − xy) doubles the
    /// number of correct π-digits per step.
    pub(crate) fn inv_unit(&self, x: &TowerPoly) -> Result<TowerPoly> {
        if x.prec < 1 {
            return Err(Error::InsufficientPrecision(0));
        }
        let r = self.residue(x);
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let two = self.from_int(2);
        let mut y = self.from_residue(self.k.residue.inv(r)?);
        let mut correct: u64 = 1;
        while correct < x.prec {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            y.prec = x.prec; // Newton self-corrects; min-tracking is too pessimistic
            correct *= 2;
        }
        y.prec = x.prec;
        Ok(y)
    }
}

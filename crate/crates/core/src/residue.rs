//! Arithmetic in the residue field F_q = F_p(γ) and F_p-linear analysis of
//! additive polynomials.
//!
//! Representation invariants:
//! - An element is stored packed as the single integer Σ cᵢ·pⁱ where
//!   (c₀,…,c_{f−1}) are its coordinates in the polynomial basis
//!   1, γ, …, γ^{f−1}, each reduced into [0,p). The packed integer is
//!   unique per element, and the derived `Ord` (plain integer order) is
//!   exactly lexicographic order on coordinates with the most-significant
//!   coordinate last.
//! - The modulus is monic of degree f and irreducible over F_p; this is
//!   verified at construction.
//! - q = p^f ≤ 2^32, so packed values and all coordinate products fit
//!   comfortably in u64/u128 intermediates.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Element of F_q, packed as Σ coords[i]·p^i. Meaningful only relative to
/// the [`ResidueField`] that created it; mixing elements across fields is a
/// logic error (not detectable from the value alone).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ResidueElem(pub u64);

impl ResidueElem {
    /// The zero element (packed 0 in every field).
    pub const ZERO: ResidueElem = ResidueElem(0);
    /// The one element (packed 1 in every field).
    pub const ONE: ResidueElem = ResidueElem(1);

    /// True iff this is the zero element.
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The residue field F_q = F_p[z]/(m(z)) with q = p^f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,           // prime
    f: u32,           // extension degree over F_p, ≥ 1
    q: u64,           // p^f
    modulus: Vec<u64>, // monic, length f+1, coefficients in [0,p), irreducible
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl ResidueField {
    /// The prime field F_p (modulus z).
    pub fn prime(p: u64) -> Result<Self> {
        Self::extension(p, &[0, 1])
    }

    /// F_p[z]/(m) for a monic irreducible m given by its coefficient list
    /// `[c_0, …, c_f]` (constant term first). Coefficients are reduced
    /// mod p; m must be monic after reduction and irreducible.
    pub fn extension(p: u64, modulus: &[i64]) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField(
                "modulus must have degree at least 1".into(),
            ));
        }
        let f = (modulus.len() - 1) as u32;
        let m: Vec<u64> = modulus
            .iter()
            .map(|&c| (c.rem_euclid(p as i64)) as u64)
            .collect();
        if m[f as usize] != 1 {
            return Err(Error::InvalidField(
                "modulus must be monic (leading coefficient 1 mod p)".into(),
            ));
        }
        let q = (p as u128).checked_pow(f);
        let q = match q {
            Some(v) if v <= (1u128 << 32) => v as u64,
            _ => {
                return Err(Error::InvalidField(format!(
                    "q = {p}^{f} exceeds the supported range 2^32"
                )))
            }
        };
        let field = ResidueField { p, f, q, modulus: m };
        if f > 1 && !field.modulus_is_irreducible() {
            return Err(Error::InvalidField(
                "modulus is reducible over F_p".into(),
            ));
        }
        Ok(field)
    }

    /// The characteristic p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The degree f of F_q over F_p.
    pub fn degree(&self) -> u32 {
        self.f
    }

    /// The field size q = p^f.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The modulus coefficients `[c_0, …, c_f]`, reduced mod p.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The class γ of z. For f = 1 the basis is {1} and γ is the scalar
    /// −c₀ (the root of the linear modulus).
    pub fn generator(&self) -> ResidueElem {
        if self.f == 1 {
            ResidueElem((self.p - self.modulus[0]) % self.p)
        } else {
            ResidueElem(self.p)
        }
    }

    // ---- packing ----

    /// Coordinates (c₀,…,c_{f−1}) of an element in the basis 1,γ,…,γ^{f−1}.
    pub fn coords(&self, a: ResidueElem) -> Vec<u64> {
        let mut v = a.0;
        let mut out = Vec::with_capacity(self.f as usize);
        for _ in 0..self.f {
            out.push(v % self.p);
            v /= self.p;
        }
        debug_assert_eq!(v, 0, "packed value out of range for this field");
        out
    }

    /// Element with the given coordinates (length must equal f, entries
    /// need not be reduced; they are taken mod p).
    pub fn from_coords(&self, coords: &[i64]) -> Result<ResidueElem> {
        if coords.len() != self.f as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.f,
                coords.len()
            )));
        }
        let mut packed = 0u64;
        for &c in coords.iter().rev() {
            packed = packed * self.p + (c.rem_euclid(self.p as i64)) as u64;
        }
        Ok(ResidueElem(packed))
    }

    /// The constant element `i mod p` (negative integers wrap).
    pub fn from_int(&self, i: i64) -> ResidueElem {
        ResidueElem((i.rem_euclid(self.p as i64)) as u64)
    }

    /// All q elements in increasing packed order (0, 1, …).
    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> {
        (0..self.q).map(ResidueElem)
    }

    // ---- arithmetic ----

    /// a + b.
    pub fn add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.f == 1 {
            return ResidueElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut packed = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.f {
            packed += (x % self.p + y % self.p) % self.p * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        ResidueElem(packed)
    }

    /// −a.
    pub fn neg(&self, a: ResidueElem) -> ResidueElem {
        if self.f == 1 {
            return ResidueElem((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut packed = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.f {
            packed += (self.p - x % self.p) % self.p * scale;
            x /= self.p;
            scale *= self.p;
        }
        ResidueElem(packed)
    }

    /// a − b.
    pub fn sub(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        self.add(a, self.neg(b))
    }

    /// a · b.
    pub fn mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.f == 1 {
            return ResidueElem((a.0 as u128 * b.0 as u128 % self.p as u128) as u64);
        }
        let x = self.coords(a);
        let y = self.coords(b);
        let deg = self.f as usize;
        // Schoolbook product, then reduction by the monic modulus.
        let mut prod = vec![0u128; 2 * deg - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] += xi as u128 * yj as u128;
            }
        }
        let p = self.p as u128;
        for k in (deg..2 * deg - 1).rev() {
            let c = prod[k] % p;
            if c != 0 {
                // z^k = z^{k-deg} · (−(m₀ + m₁z + … + m_{deg−1}z^{deg−1}))
                for i in 0..deg {
                    let mi = self.modulus[i] as u128;
                    if mi != 0 {
                        prod[k - deg + i] += c * (p - mi);
                    }
                }
            }
            prod[k] = 0;
        }
        let mut packed = 0u64;
        for k in (0..deg).rev() {
            packed = packed * self.p + (prod[k] % p) as u64;
        }
        ResidueElem(packed)
    }

    /// a^e for e ≥ 0 (a⁰ = 1, including 0⁰ = 1).
    pub fn pow(&self, a: ResidueElem, e: u64) -> ResidueElem {
        let mut base = a;
        let mut e = e;
        let mut acc = ResidueElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^e for a signed exponent (negative exponents invert; a must be
    /// nonzero then).
    pub fn pow_i64(&self, a: ResidueElem, e: i64) -> Result<ResidueElem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            let inv = self.inv(a)?;
            Ok(self.pow(inv, e.unsigned_abs()))
        }
    }

    /// a⁻¹; error on zero.
    pub fn inv(&self, a: ResidueElem) -> Result<ResidueElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a^(q−2) = a⁻¹ in F_q^×.
        Ok(self.pow(a, self.q - 2))
    }

    // ---- irreducibility of the modulus ----

    /// Frobenius-power test: m (degree f ≥ 2) is irreducible iff it has no
    /// roots in F_p, gcd(x^{p^k} − x, m) is constant for every k < f, and
    /// x^{p^f} ≡ x (mod m).
    fn modulus_is_irreducible(&self) -> bool {
        let deg = self.f as usize;
        for c in 0..self.p {
            if self.poly_eval_fp(&self.modulus, c) == 0 {
                return false;
            }
        }
        // xq = x^{p^k} mod m, advanced one Frobenius power per step.
        let mut xq = vec![0u64; deg];
        if deg > 1 {
            xq[1] = 1; // the polynomial x
        }
        for k in 1..=self.f {
            xq = self.poly_powmod_fp(&xq, self.p);
            // x^{p^k} − x
            let mut diff = xq.clone();
            diff[1] = (diff[1] + self.p - 1) % self.p;
            let is_zero = diff.iter().all(|&c| c == 0);
            if k < self.f {
                if is_zero || !self.poly_gcd_is_const_fp(&diff) {
                    return false;
                }
            } else if !is_zero {
                return false;
            }
        }
        true
    }

    fn poly_eval_fp(&self, poly: &[u64], x: u64) -> u64 {
        let p = self.p as u128;
        let mut acc = 0u128;
        for &c in poly.iter().rev() {
            acc = (acc * x as u128 + c as u128) % p;
        }
        acc as u64
    }

    /// (base)^e mod (m, p) for base of degree < f.
    fn poly_powmod_fp(&self, base: &[u64], e: u64) -> Vec<u64> {
        let deg = self.f as usize;
        let mut acc = vec![0u64; deg];
        acc[0] = 1;
        let mut base = base.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod_fp(&acc, &base);
            }
            base = self.poly_mulmod_fp(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn poly_mulmod_fp(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let deg = self.f as usize;
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * deg - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u128 * bj as u128) % p;
            }
        }
        for k in (deg..2 * deg - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..deg {
                    let mi = self.modulus[i] as u128;
                    if mi != 0 {
                        prod[k - deg + i] = (prod[k - deg + i] + c * (p - mi)) % p;
                    }
                }
            }
            prod[k] = 0;
        }
        prod[..deg].iter().map(|&c| c as u64).collect()
    }

    /// True iff gcd(poly, modulus) is a nonzero constant, for poly of
    /// degree < f over F_p.
    fn poly_gcd_is_const_fp(&self, poly: &[u64]) -> bool {
        let p = self.p;
        let inv_fp = |a: u64| -> u64 {
            // p is prime, a ≠ 0: Fermat.
            let mut acc = 1u128;
            let mut base = a as u128 % p as u128;
            let mut e = p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p as u128;
                }
                base = base * base % p as u128;
                e >>= 1;
            }
            acc as u64
        };
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        let mut a = self.modulus.clone();
        let mut b = poly.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            // a mod b
            let lead_inv = inv_fp(*b.last().unwrap());
            while a.len() >= b.len() {
                let shift = a.len() - b.len();
                let coef = (*a.last().unwrap() as u128 * lead_inv as u128 % p as u128) as u64;
                for (i, &bi) in b.iter().enumerate() {
                    let sub = (coef as u128 * bi as u128 % p as u128) as u64;
                    a[shift + i] = (a[shift + i] + p - sub) % p;
                }
                trim(&mut a);
                if a.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len() == 1
    }

    // ---- unit-group structure ----

    /// One representative per coset of n-th powers in F_q^×, each the
    /// smallest element of its coset in packed order. Size gcd(n, q−1).
    pub fn nth_power_class_reps(&self, n: u64) -> Vec<ResidueElem> {
        let d = gcd_u64(n, self.q - 1);
        let powers: Vec<ResidueElem> = if d == 1 {
            return vec![ResidueElem::ONE];
        } else {
            let mut set: Vec<bool> = vec![false; self.q as usize];
            let mut list = Vec::new();
            for x in 1..self.q {
                let y = self.pow(ResidueElem(x), n);
                if !set[y.0 as usize] {
                    set[y.0 as usize] = true;
                    list.push(y);
                }
            }
            list
        };
        let mut covered = vec![false; self.q as usize];
        let mut reps = Vec::with_capacity(d as usize);
        for x in 1..self.q {
            if covered[x as usize] {
                continue;
            }
            let rep = ResidueElem(x);
            reps.push(rep);
            for &pw in &powers {
                covered[self.mul(rep, pw).0 as usize] = true;
            }
            if reps.len() as u64 == d {
                break;
            }
        }
        reps
    }

    /// All δ in F_q^× with δ^n = 1, in packed order. Size gcd(n, q−1).
    pub fn unity_roots(&self, n: u64) -> Vec<ResidueElem> {
        let d = gcd_u64(n, self.q - 1);
        let mut out = Vec::with_capacity(d as usize);
        for x in 1..self.q {
            let e = ResidueElem(x);
            if self.pow(e, d) == ResidueElem::ONE {
                out.push(e);
                if out.len() as u64 == d {
                    break;
                }
            }
        }
        out
    }

    // ---- polynomial helpers over F_q ----

    /// Evaluate Σ coeffs[i]·x^i.
    pub fn poly_eval(&self, coeffs: &[ResidueElem], x: ResidueElem) -> ResidueElem {
        let mut acc = ResidueElem::ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    /// Distinct roots of Σ coeffs[i]·x^i in F_q with multiplicities,
    /// found by scanning the field; roots in packed order.
    pub fn poly_roots(&self, coeffs: &[ResidueElem]) -> Vec<(ResidueElem, u32)> {
        let mut out = Vec::new();
        if coeffs.iter().all(|c| c.is_zero()) {
            return out;
        }
        for x in self.elements() {
            if self.poly_eval(coeffs, x).is_zero() {
                // multiplicity by repeated synthetic division by (X − x)
                let mut cur = coeffs.to_vec();
                let mut mult = 0u32;
                loop {
                    let (quot, rem) = self.poly_divrem_linear(&cur, x);
                    if !rem.is_zero() {
                        break;
                    }
                    mult += 1;
                    cur = quot;
                    if cur.is_empty() {
                        break;
                    }
                }
                out.push((x, mult));
            }
        }
        out
    }

    /// Divide by the monic linear (X − x): returns (quotient, remainder).
    fn poly_divrem_linear(
        &self,
        coeffs: &[ResidueElem],
        x: ResidueElem,
    ) -> (Vec<ResidueElem>, ResidueElem) {
        if coeffs.is_empty() {
            return (Vec::new(), ResidueElem::ZERO);
        }
        let mut quot = vec![ResidueElem::ZERO; coeffs.len() - 1];
        let mut carry = ResidueElem::ZERO;
        for i in (0..coeffs.len()).rev() {
            let cur = self.add(coeffs[i], self.mul(carry, x));
            if i == 0 {
                return (quot, cur);
            }
            quot[i - 1] = cur;
            carry = cur;
        }
        unreachable!()
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An additive polynomial Σ_s c_s·x^{p^s}, keyed by the exponent log s so
/// every monomial exponent is a power of p by construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdditiveMap {
    /// s ↦ coefficient of x^{p^s}; zero coefficients may be omitted.
    pub terms: BTreeMap<u32, ResidueElem>,
}

impl AdditiveMap {
    /// The zero map.
    pub fn zero() -> Self {
        AdditiveMap { terms: BTreeMap::new() }
    }

    /// Build from (s, coefficient) pairs; later pairs with the same s
    /// overwrite earlier ones.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, ResidueElem)>) -> Self {
        AdditiveMap { terms: terms.into_iter().collect() }
    }

    /// Evaluate at x.
    pub fn eval(&self, field: &ResidueField, x: ResidueElem) -> ResidueElem {
        let mut acc = ResidueElem::ZERO;
        for (&s, &c) in &self.terms {
            let e = field.pow(x, pow_u64(field.p(), s));
            acc = field.add(acc, field.mul(c, e));
        }
        acc
    }
}

fn pow_u64(base: u64, e: u32) -> u64 {
    base.checked_pow(e).expect("p^s overflow")
}

/// Result of viewing an [`AdditiveMap`] as an F_p-linear endomorphism of
/// F_q ≅ F_p^f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveMapAnalysis {
    /// F_p-basis of the image, echelonized, in packed order.
    pub image_basis: Vec<ResidueElem>,
    /// Transversal of F_q / image: 0 first, then greedily the smallest
    /// element (packed order) not congruent to a previous rep mod image.
    pub cokernel_reps: Vec<ResidueElem>,
    /// |kernel| = p^{f − rank}.
    pub kernel_size: u64,
    /// True iff the map is onto.
    pub surjective: bool,
}

impl AdditiveMapAnalysis {
    /// The full image as a set, in packed order (expanded from the basis).
    pub fn image_set(&self, field: &ResidueField) -> Vec<ResidueElem> {
        let p = field.p();
        let mut set = vec![ResidueElem::ZERO];
        for &b in &self.image_basis {
            let mut next = Vec::with_capacity(set.len() * p as usize);
            for &s in &set {
                let mut acc = s;
                next.push(acc);
                for _ in 1..p {
                    acc = field.add(acc, b);
                    next.push(acc);
                }
            }
            set = next;
        }
        set.sort();
        set
    }

    /// Membership test against the expanded image (linear scan of the
    /// basis reduction; used by template construction).
    pub fn image_contains(&self, field: &ResidueField, x: ResidueElem) -> bool {
        reduce_against_echelon(field, &to_vec_fp(field, &self.image_basis), x).is_zero()
    }
}

fn to_vec_fp(field: &ResidueField, basis: &[ResidueElem]) -> Vec<Vec<u64>> {
    basis.iter().map(|&b| field.coords(b)).collect()
}

/// Reduce x against an echelonized basis (each basis vector has a pivot
/// coordinate equal to 1 that is zero in all later vectors); returns the
/// residue after elimination.
fn reduce_against_echelon(
    field: &ResidueField,
    basis: &[Vec<u64>],
    x: ResidueElem,
) -> ResidueElem {
    let p = field.p();
    let mut v = field.coords(x);
    for b in basis {
        let pivot = b.iter().rposition(|&c| c != 0).expect("nonzero basis vector");
        if v[pivot] != 0 {
            let factor = v[pivot]; // pivot coefficient of b is 1
            for i in 0..v.len() {
                v[i] = (v[i] + (p - factor % p) % p * b[i]) % p;
            }
        }
    }
    let coords: Vec<i64> = v.iter().map(|&c| c as i64).collect();
    field.from_coords(&coords).expect("length preserved")
}

/// Analyze an additive map as an F_p-linear endomorphism of F_q: image
/// basis, deterministic cokernel transversal, kernel size, surjectivity.
pub fn additive_map_analysis(map: &AdditiveMap, field: &ResidueField) -> AdditiveMapAnalysis {
    let f = field.degree() as usize;
    let p = field.p();
    // Columns: images of the basis 1, γ, …, γ^{f−1}.
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(f);
    let gamma = if f == 1 { ResidueElem::ONE } else { ResidueElem(p) };
    let mut basis_elem = ResidueElem::ONE;
    for i in 0..f {
        if i > 0 {
            basis_elem = field.mul(basis_elem, gamma);
        }
        columns.push(field.coords(map.eval(field, basis_elem)));
    }
    // Column echelon by Gaussian elimination; pivots normalized to 1,
    // pivot positions chosen at the highest nonzero coordinate, and each
    // pivot cleared from all other columns for a unique reduced form.
    let mut echelon: Vec<Vec<u64>> = Vec::new();
    for col in columns {
        let mut v = col;
        for b in &echelon {
            let pivot = b.iter().rposition(|&c| c != 0).unwrap();
            if v[pivot] != 0 {
                let factor = v[pivot];
                for i in 0..f {
                    v[i] = (v[i] + (p - factor % p) * b[i] % p) % p;
                }
            }
        }
        if let Some(pivot) = v.iter().rposition(|&c| c != 0) {
            // normalize pivot to 1
            let inv = mod_inv_prime(v[pivot], p);
            for c in v.iter_mut() {
                *c = *c * inv % p;
            }
            // clear this pivot from existing basis vectors
            let v_norm = v.clone();
            for b in echelon.iter_mut() {
                if b[pivot] != 0 {
                    let factor = b[pivot];
                    for i in 0..f {
                        b[i] = (b[i] + (p - factor) * v_norm[i] % p) % p;
                    }
                }
            }
            echelon.push(v);
        }
    }
    let rank = echelon.len();
    let kernel_size = (p as u128).pow((f - rank) as u32) as u64;
    let surjective = rank == f;

    let pack = |v: &[u64]| -> ResidueElem {
        let coords: Vec<i64> = v.iter().map(|&c| c as i64).collect();
        field.from_coords(&coords).unwrap()
    };
    let mut image_basis: Vec<ResidueElem> = echelon.iter().map(|v| pack(v)).collect();
    image_basis.sort();

    // Greedy transversal in packed order: keep x iff x − r ∉ image for all
    // previously kept reps r (0 is kept first).
    let index = (field.q() / (field.q() / kernel_size)) as usize; // = kernel_size
    let mut reps: Vec<ResidueElem> = Vec::with_capacity(index);
    for x in field.elements() {
        let in_old_coset = reps
            .iter()
            .any(|&r| reduce_against_echelon(field, &echelon, field.sub(x, r)).is_zero());
        if !in_old_coset {
            reps.push(x);
            if reps.len() == index {
                break;
            }
        }
    }
    AdditiveMapAnalysis { image_basis, cokernel_reps: reps, kernel_size, surjective }
}

fn mod_inv_prime(a: u64, p: u64) -> u64 {
    // Fermat inverse; a ≠ 0 mod p.
    let mut acc = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

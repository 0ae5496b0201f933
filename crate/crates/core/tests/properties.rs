//! Randomized structural invariants: field laws, Hasse–Herbrand
//! monotonicity, the unit action on residual tuples, template shape, and
//! the root-counting dichotomy. Case counts total ten thousand.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;

use localfields::{
    all_extensions_by_disc, aut_count, build_template, count_roots_auto, delta_action,
    enumerate_polygons, invariant_orbits, ore_range, same_extension, template_stream,
    validate_residuals, EisPoly, LocalField, RamPolygon, ResidualCheck, ResidueElem,
};

fn qp(p: u64) -> LocalField {
    LocalField::qp(p).expect("prime field")
}

/// Base fields exercised by the element-level families.
fn field_pool() -> &'static [LocalField] {
    static POOL: OnceLock<Vec<LocalField>> = OnceLock::new();
    POOL.get_or_init(|| {
        vec![
            qp(2),
            LocalField::from_json_str(r#"{"p":2,"unramified":[1,1,1]}"#).expect("tower"),
            qp(3),
            LocalField::from_json_str(r#"{"p":3,"unramified":[1,0,1]}"#).expect("tower"),
            qp(5),
        ]
    })
}

/// Small enumeration contexts: one (field, polygon) pair per admissible
/// level of a handful of degrees.
fn context_pool() -> &'static [(LocalField, RamPolygon)] {
    static POOL: OnceLock<Vec<(LocalField, RamPolygon)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for (p, n) in [(2u64, 4u64), (2, 8), (3, 9), (5, 15)] {
            let k = qp(p);
            for j0 in ore_range(&k, n) {
                for r in enumerate_polygons(&k, n, j0).expect("polygons") {
                    out.push((k.clone(), r));
                }
            }
        }
        out
    })
}

/// Minimal generators of every ramified quadratic of Q_2 and cubic of Q_3.
fn generator_pool(quad: bool) -> &'static (LocalField, Vec<EisPoly>) {
    static QUAD: OnceLock<(LocalField, Vec<EisPoly>)> = OnceLock::new();
    static CUBIC: OnceLock<(LocalField, Vec<EisPoly>)> = OnceLock::new();
    let build = move |p: u64| {
        let k = qp(p);
        let polys = ore_range(&k, p)
            .iter()
            .flat_map(|&j0| {
                all_extensions_by_disc(&k, p, j0, &Default::default()).expect("enumerates")
            })
            .map(|rec| rec.generator)
            .collect();
        (k, polys)
    };
    if quad {
        QUAD.get_or_init(|| build(2))
    } else {
        CUBIC.get_or_init(|| build(3))
    }
}

fn elem_at(k: &LocalField, seed: u64) -> ResidueElem {
    let rf = k.residue_field();
    rf.elements().nth((seed % rf.q()) as usize).expect("in range")
}

fn unit_at(k: &LocalField, seed: u64) -> ResidueElem {
    let rf = k.residue_field();
    rf.elements()
        .filter(|e| !e.is_zero())
        .nth((seed % (rf.q() - 1)) as usize)
        .expect("in range")
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 2500, failure_persistence: None, .. ProptestConfig::default()
    })]

    // commutative field laws, Frobenius additivity, Fermat, inverses
    #[test]
    fn prop_residue_field_laws(fi in 0usize..5, sa in 0u64..1000, sb in 0u64..1000, sc in 0u64..1000) {
        let k = &field_pool()[fi];
        let rf = k.residue_field();
        let (a, b, c) = (elem_at(k, sa), elem_at(k, sb), elem_at(k, sc));
        prop_assert_eq!(rf.add(a, b), rf.add(b, a));
        prop_assert_eq!(rf.mul(a, b), rf.mul(b, a));
        prop_assert_eq!(rf.add(rf.add(a, b), c), rf.add(a, rf.add(b, c)));
        prop_assert_eq!(rf.mul(rf.mul(a, b), c), rf.mul(a, rf.mul(b, c)));
        prop_assert_eq!(rf.mul(rf.add(a, b), c), rf.add(rf.mul(a, c), rf.mul(b, c)));
        prop_assert_eq!(rf.sub(a, a), ResidueElem::ZERO);
        // x ↦ x^p is additive in characteristic p
        prop_assert_eq!(
            rf.pow(rf.add(a, b), k.p()),
            rf.add(rf.pow(a, k.p()), rf.pow(b, k.p()))
        );
        // x^q = x for every element of F_q
        prop_assert_eq!(rf.pow(a, rf.q()), a);
        if !a.is_zero() {
            let inv = rf.pow_i64(a, -1).expect("unit inverse");
            prop_assert_eq!(rf.mul(a, inv), ResidueElem::ONE);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 2000, failure_persistence: None, .. ProptestConfig::default()
    })]

    // n·φ_R is strictly increasing and agrees with its rational form
    #[test]
    fn prop_hasse_herbrand_monotone(ci in 0usize..200, m in 1u64..40) {
        let pool = context_pool();
        let (_, r) = &pool[ci % pool.len()];
        let v = r.hasse_herbrand_int(m);
        prop_assert!(v < r.hasse_herbrand_int(m + 1), "n·φ_R must strictly increase");
        let ((num, den), attained) = r.hasse_herbrand(m, 1);
        prop_assert_eq!((num, den), (v, 1), "integer and rational forms agree");
        prop_assert!(!attained.is_empty(), "the minimum is attained");
        // the value is the min of J + m·x over the polygon's points
        let direct = r.points().iter().map(|pt| pt.y + m * pt.x).min().expect("points");
        prop_assert_eq!(v, direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 2000, failure_persistence: None, .. ProptestConfig::default()
    })]

    // the unit substitution α ↦ δα acts as a group on residual tuples
    #[test]
    fn prop_delta_action_group(ci in 0usize..200, oi in 0usize..64, mi in 0usize..64, s1 in 0u64..1000, s2 in 0u64..1000) {
        let pool = context_pool();
        let (k, r) = &pool[ci % pool.len()];
        let rf = k.residue_field();
        let orbits = invariant_orbits(k, r).expect("orbits");
        let o = &orbits[oi % orbits.len()];
        let a = &o.members()[mi % o.members().len()];
        let (d1, d2) = (unit_at(k, s1), unit_at(k, s2));
        // composition and identity
        let two_step = delta_action(k, r, &delta_action(k, r, a, d1), d2);
        let one_step = delta_action(k, r, a, rf.mul(d1, d2));
        prop_assert_eq!(two_step, one_step, "the action composes multiplicatively");
        prop_assert_eq!(&delta_action(k, r, a, ResidueElem::ONE), a, "identity acts trivially");
        // orbits are closed and sized by the stabilizer theorem
        prop_assert!(o.members().contains(&delta_action(k, r, a, d1)), "orbit closure");
        prop_assert_eq!(
            o.orbit_size() * o.stabilizer_size(),
            rf.q() - 1,
            "orbit times stabilizer is the unit-group order"
        );
        prop_assert!(o.members().contains(o.canonical()), "the canonical form is a member");
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 1500, failure_persistence: None, .. ProptestConfig::default()
    })]

    // template depth, pinned cells, and stream shape
    #[test]
    fn prop_template_structure(ci in 0usize..200, oi in 0usize..64, mi in 0usize..64, di in 0usize..8) {
        let pool = context_pool();
        let (k, r) = &pool[ci % pool.len()];
        let rf = k.residue_field();
        let n = r.n();
        let orbits = invariant_orbits(k, r).expect("orbits");
        let o = &orbits[oi % orbits.len()];
        let a = &o.members()[mi % o.members().len()];
        let reps = rf.nth_power_class_reps(n);
        let d0 = reps[di % reps.len()];
        if !matches!(validate_residuals(k, r, a, d0).expect("validates"), ResidualCheck::Valid) {
            return Ok(());
        }
        let t = build_template(k, r, a, d0).expect("builds");
        let j0 = r.j0();
        prop_assert_eq!(t.c(), (1 + 2 * (j0 / n) + 2 * (j0 % n) / n).max(1), "digit depth");
        prop_assert_eq!(t.cell(0, 1).values(), &[d0], "the constant digit is the class rep");
        if t.count() <= BigUint::from(128u32) {
            let polys: Vec<EisPoly> = template_stream(&t).collect();
            prop_assert_eq!(BigUint::from(polys.len()), t.count(), "stream length matches count");
            let mut seen = BTreeSet::new();
            for phi in &polys {
                prop_assert_eq!(phi.digit(0, 1), d0);
                prop_assert!(seen.insert(phi.to_json(k).to_string()), "no duplicate polynomials");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 800, failure_persistence: None, .. ProptestConfig::default()
    })]

    // root counting: reflexivity, symmetry, and the divisor dichotomy
    #[test]
    fn prop_root_dichotomy(use_quad in proptest::bool::ANY, i in 0usize..64, j in 0usize..64) {
        let (k, pool) = generator_pool(use_quad);
        let n = if use_quad { 2u64 } else { 3 };
        let phi = &pool[i % pool.len()];
        let psi = &pool[j % pool.len()];
        let fwd = same_extension(k, phi, psi).expect("compares");
        let bwd = same_extension(k, psi, phi).expect("compares");
        prop_assert_eq!(fwd, bwd, "isomorphism testing is symmetric");
        prop_assert!(same_extension(k, phi, phi).expect("compares"), "and reflexive");
        let c = count_roots_auto(k, phi, psi).expect("counts");
        prop_assert!(c == 0 || n % c == 0, "root counts are 0 or divisors of the degree");
        prop_assert!(aut_count(k, phi).expect("counts") >= 1, "a generator has itself as root");
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 1200, failure_persistence: None, .. ProptestConfig::default()
    })]

    // every admissible level is realized by at least one polygon
    #[test]
    fn prop_ore_levels_realized(p_idx in 0usize..3, n in 2u64..13, ji in 0usize..32) {
        let k = qp([2u64, 3, 5][p_idx]);
        let admissible = ore_range(&k, n);
        prop_assert!(!admissible.is_empty(), "every degree has an admissible level");
        let j0 = admissible[ji % admissible.len()];
        let polys = enumerate_polygons(&k, n, j0).expect("enumerates");
        prop_assert!(!polys.is_empty(), "admissible levels are realized");
        for r in &polys {
            prop_assert_eq!(r.n(), n);
            prop_assert_eq!(r.j0(), j0);
        }
    }
}

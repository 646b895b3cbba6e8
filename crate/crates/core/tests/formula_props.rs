mod common;

use common::{fld, random_point, x_vars};
use immlab::formula::random::{random_alternating, random_formula, RandomShape};
use immlab::{Circuit, Formula, GateKind, MulMode, VarSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn formula(seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_formula(&mut rng, fld(), &x_vars(8), RandomShape::default())
}

/// Checks the three structural properties of ascribed sets at every gate.
fn vars_properties_hold(f: &Formula, ambient: &VarSet) -> Result<(), String> {
    let vars = f.vars(ambient).map_err(|e| e.to_string())?;
    let supp = f.supports();
    if vars[f.root()] != *ambient {
        return Err("root is not ascribed the ambient set".into());
    }
    for id in 0..f.size() {
        if !supp[id].is_subset(&vars[id]) {
            return Err(format!("gate {id}: support escapes its ascribed set"));
        }
        let kids = f.children(id);
        match f.kind(id) {
            GateKind::Sum => {
                if let Some(c) = kids.iter().find(|&&c| vars[c] != vars[id]) {
                    return Err(format!("sum {id}: child {c} has a different set"));
                }
            }
            GateKind::Prod => {
                let mut union = VarSet::new();
                for &c in kids {
                    if !vars[c].is_disjoint(&union) {
                        return Err(format!("product {id}: children overlap"));
                    }
                    union.extend(vars[c].iter().copied());
                }
                if union != vars[id] {
                    return Err(format!("product {id}: children do not cover its set"));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_formulas_are_multilinear_and_ascribed(seed in any::<u64>()) {
        let f = formula(seed);
        prop_assert!(f.check_syntactic_multilinear().is_multilinear());
        let ambient: VarSet = x_vars(10).into_iter().collect();
        prop_assert_eq!(vars_properties_hold(&f, &ambient), Ok(()));
    }

    #[test]
    fn zero_gate_identity(seed in any::<u64>()) {
        let f = formula(seed);
        let phi = ChaCha8Rng::seed_from_u64(!seed).random_range(0..f.size());
        let split = f.zero_gate_decompose(phi).unwrap();
        let ambient: VarSet = x_vars(8).into_iter().collect();
        let vars = f.vars(&ambient).unwrap();
        prop_assert!(split.a.support().is_disjoint(&vars[phi]));
        let lhs = f.to_polynomial(MulMode::Strict).unwrap();
        let rhs = split.a.mul(&split.g, MulMode::Strict).unwrap().add(&split.b.to_polynomial(MulMode::Strict).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_keeps_the_polynomial(seed in any::<u64>(), extra in 0usize..2) {
        let f = formula(seed);
        let delta = f.product_depth().max(1) + extra;
        let g = f.normalize_to_alternating(delta).unwrap();
        prop_assert!(g.is_alternating(delta));
        prop_assert!(g.check_syntactic_multilinear().is_multilinear());
        prop_assert_eq!(g.to_polynomial(MulMode::Strict).unwrap(), f.to_polynomial(MulMode::Strict).unwrap());
    }

    #[test]
    fn text_formats_round_trip(seed in any::<u64>()) {
        let f = formula(seed);
        let text = f.to_string();
        let back = Formula::parse(fld(), &text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        let gates = f.to_gate_list();
        let c = Circuit::parse_gate_list(fld(), &gates).unwrap();
        prop_assert_eq!(c.to_gate_list(), gates);
    }

    #[test]
    fn evaluation_agrees_with_expansion(seed in any::<u64>()) {
        let f = formula(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let p = random_point(fld(), x_vars(8), &mut rng);
        let direct = f.evaluate_at(|v| p.get(&v).copied()).unwrap();
        prop_assert_eq!(direct, f.to_polynomial(MulMode::Strict).unwrap().eval(&p).unwrap());
    }

    #[test]
    fn alternating_generator_shape(seed in any::<u64>(), delta in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_alternating(&mut rng, fld(), &x_vars(12), delta, RandomShape::default());
        prop_assert!(f.is_alternating(delta));
        prop_assert!(f.check_syntactic_multilinear().is_multilinear());
    }
}

#[test]
fn depth_beyond_target_is_rejected() {
    let f = Formula::parse(fld(), "(* (+ x[1][1][1] (* x[1][1][2] (+ x[1][2][1] 1))) x[2][1][1])").unwrap();
    assert_eq!(f.product_depth(), 2);
    assert!(f.normalize_to_alternating(1).is_err());
    assert!(f.normalize_to_alternating(2).unwrap().is_alternating(2));
}

#[test]
fn ascribed_sets_follow_the_remainder_rule() {
    let f = Formula::parse(fld(), "(+ (* x[1][1][1] x[1][1][2]))").unwrap();
    let ambient: VarSet = x_vars(3).into_iter().collect();
    let vars = f.vars(&ambient).unwrap();
    let kids = f.children(f.children(f.root())[0]);
    assert_eq!(vars[kids[0]], VarSet::from([x_vars(1)[0]]));
    assert_eq!(vars[kids[1]], x_vars(3)[1..].iter().copied().collect());
}

/// The (Δ+1)²·s size bound for normalization is measured, not enforced:
/// violations are printed and counted, and the test fails only if the
/// normalized formula is wrong.
#[test]
fn normalized_size_against_quadratic_bound() {
    let mut violations = Vec::new();
    let mut checked = 0;
    for seed in 0..300u64 {
        let f = formula(seed);
        let delta = f.product_depth().max(1);
        for extra in 0..3 {
            let n = f.normalize_to_alternating(delta + extra).unwrap();
            assert_eq!(n.to_polynomial(MulMode::Strict).unwrap(), f.to_polynomial(MulMode::Strict).unwrap());
            checked += 1;
            let bound = (delta + extra + 1).pow(2) * f.size();
            if n.size() > bound {
                violations.push((seed, delta + extra, n.size(), bound));
            }
        }
    }
    for (d, delta) in [(8, 1), (8, 2), (8, 3), (16, 2), (16, 4)] {
        let f = immlab::imm::build_dc_formula(fld(), d, delta).unwrap();
        let n = f.normalize_to_alternating(delta).unwrap();
        checked += 1;
        if n.size() > (delta + 1).pow(2) * f.size() {
            violations.push((d as u64, delta, n.size(), (delta + 1).pow(2) * f.size()));
        }
    }
    println!("normalization bound: {} violations in {checked} formulas {violations:?}", violations.len());
}

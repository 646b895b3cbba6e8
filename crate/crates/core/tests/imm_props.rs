mod common;

use common::{fld, imm_by_matrices, random_point};
use immlab::imm::{
    build_dc_circuit, build_dc_formula, dc_size, imm_graph, imm_polynomial, log_log_slope, self_reduction_blocks,
    size_table, DEFAULT_SIZE_BUDGET,
};
use immlab::{Error, MulMode, Polynomial, VarId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn depths(d: usize) -> impl Iterator<Item = usize> {
    (1..).take_while(move |&k| 1usize << k <= d)
}

#[test]
fn small_cases_by_hand() {
    let f = fld();
    let one = imm_polynomial(f, 1).unwrap();
    assert_eq!(one, Polynomial::parse(f, "x[1][1][1] + x[1][1][2]").unwrap());
    let two = imm_polynomial(f, 2).unwrap();
    let expected = "x[1][1][1]*x[2][1][1] + x[1][1][1]*x[2][1][2] + x[1][1][2]*x[2][2][1] + x[1][1][2]*x[2][2][2]";
    assert_eq!(two, Polynomial::parse(f, expected).unwrap());
    let supp = imm_polynomial(f, 5).unwrap().support();
    assert!(!supp.contains(&VarId::x(1, 2, 1)) && !supp.contains(&VarId::x(1, 2, 2)));
}

#[test]
fn polynomial_matches_matrix_products() {
    let f = fld();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in 1..=12 {
        let p = imm_polynomial(f, d).unwrap();
        assert_eq!(p.len(), 1 << d);
        assert!(p.terms().all(|(m, c)| c.0 == 1 && m.degree() == d));
        for _ in 0..5 {
            let pt = random_point(f, immlab::poly::matrix_vars(d), &mut rng);
            assert_eq!(p.eval(&pt).unwrap(), imm_by_matrices(f, d, |v| pt[&v]));
        }
    }
}

#[test]
fn graph_paths_give_the_polynomial() {
    let f = fld();
    for d in 1..=12 {
        let g = imm_graph(d);
        assert_eq!(g.edges().len(), 4 * d);
        assert_eq!(g.path_sum(f), imm_polynomial(f, d).unwrap());
    }
}

#[test]
fn block_substitution_identity() {
    let f = fld();
    for d in 1..=12 {
        for t in 1..=d {
            let scheme = self_reduction_blocks(d, t).unwrap();
            let lens: Vec<usize> = scheme.blocks.iter().map(|&(lo, hi)| hi - lo + 1).collect();
            assert!(lens.iter().all(|&l| l == d / t || l == d.div_ceil(t)), "d={d} t={t}");
            assert_eq!(scheme.substitute(f).unwrap(), imm_polynomial(f, d).unwrap(), "d={d} t={t}");
        }
    }
    assert_eq!(self_reduction_blocks(4, 2).unwrap().blocks, vec![(1, 2), (3, 4)]);
    assert!(self_reduction_blocks(4, 5).is_err());
}

#[test]
fn formulas_and_circuits_compute_imm_symbolically() {
    let f = fld();
    for d in 2..=12 {
        let target = imm_polynomial(f, d).unwrap();
        for delta in depths(d) {
            let fm = build_dc_formula(f, d, delta).unwrap();
            assert_eq!(fm.product_depth(), delta);
            assert!(fm.check_syntactic_multilinear().is_multilinear());
            assert_eq!(fm.to_polynomial(MulMode::Strict).unwrap(), target, "formula d={d} Δ={delta}");
            let c = build_dc_circuit(f, d, delta).unwrap();
            assert!(c.size() <= fm.size());
            assert_eq!(c.to_polynomial(MulMode::Strict).unwrap(), target, "circuit d={d} Δ={delta}");
            let n = fm.normalize_to_alternating(delta).unwrap();
            assert!(n.is_alternating(delta));
        }
    }
}

#[test]
fn expanded_circuit_computes_imm() {
    let f = fld();
    let c = build_dc_circuit(f, 8, 3).unwrap();
    let fm = c.to_formula().unwrap();
    assert_eq!(fm.to_polynomial(MulMode::Strict).unwrap(), imm_polynomial(f, 8).unwrap());
    let two = build_dc_circuit(f, 2, 1).unwrap();
    assert_eq!(two.size(), build_dc_formula(f, 2, 1).unwrap().size());
}

#[test]
fn smallest_formula_counts() {
    let fm = build_dc_formula(fld(), 2, 1).unwrap();
    assert_eq!((fm.size(), fm.leaf_count()), (13, 8));
}

#[test]
fn bad_depths() {
    assert!(matches!(build_dc_formula(fld(), 4, 3), Err(Error::BadDepth { .. })));
    assert!(matches!(build_dc_formula(fld(), 1, 1), Err(Error::BadDepth { .. })));
    assert!(matches!(build_dc_formula(fld(), 8, 0), Err(Error::BadDepth { .. })));
    assert!(matches!(build_dc_formula(fld(), 32, 1), Err(Error::SizeBudget { .. })));
    assert!(dc_size(32, 1).unwrap().formula_size > DEFAULT_SIZE_BUDGET);
}

#[test]
fn size_table_matches_golden() {
    let rows = size_table(&[2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16, 24, 32], &[1, 2, 3, 4, 5]);
    let mut text = String::from("d,delta,formula_size,circuit_size,leaf_count\n");
    for r in &rows {
        text += &format!("{},{},{},{},{}\n", r.d, r.delta, r.formula_size, r.circuit_size, r.leaf_count);
    }
    let golden = include_str!("golden/size_table.csv");
    assert_eq!(text, golden);
}

#[test]
fn size_table_shape() {
    let rows = size_table(&[2, 4, 8, 16, 32, 64], &[1, 2, 3, 4, 5, 6]);
    for delta in 1..=6 {
        let col: Vec<_> = rows.iter().filter(|r| r.delta == delta).collect();
        assert!(col.windows(2).all(|w| w[0].leaf_count <= w[1].leaf_count));
    }
    let at = |d, delta| rows.iter().find(|r| r.d == d && r.delta == delta).unwrap();
    assert!(at(16, 4).leaf_count <= at(16, 1).leaf_count);
    let log_depth: Vec<(f64, f64)> =
        rows.iter().filter(|r| 1 << r.delta == r.d).map(|r| (r.d as f64, r.leaf_count as f64)).collect();
    let slope = log_log_slope(&log_depth).unwrap();
    assert!((1.0..3.0).contains(&slope), "fitted exponent {slope}");
}

//! Decompose a normalized IMM formula into product and simple terms.

use immlab::decomp::{decompose, default_params, DecompParams};
use immlab::imm::{build_dc_formula, imm_polynomial};
use immlab::poly::matrix_vars;
use immlab::PrimeField;

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    let (d, delta) = (8, 2);
    let fm = build_dc_formula(f, d, delta)?.normalize_to_alternating(delta)?;
    let ambient = matrix_vars(d);

    // large fan-in gates, then large-support gates, then the inner recursion
    let settings = [
        default_params(d, delta)?,
        DecompParams { t: 5, r: 4, support_threshold: 10, p_bound: 800 },
        DecompParams { t: 5, r: 4, support_threshold: 1000, p_bound: 800 },
    ];
    for params in settings {
        let dec = decompose(&fm, &ambient, &params)?;
        println!(
            "t={} r={} threshold={}: {} product + {} simple terms (cases {}/{}/{}), sum exact: {}, all verified: {}",
            params.t,
            params.r,
            params.support_threshold,
            dec.products.len(),
            dec.simples.len(),
            dec.case_fanin,
            dec.case_support,
            dec.case_inner,
            dec.sum(f)? == imm_polynomial(f, d)?,
            dec.all_verified(),
        );
    }
    Ok(())
}

//! Build divide-and-conquer formulas for IMM and tabulate their sizes.

use immlab::imm::{build_dc_circuit, build_dc_formula, imm_polynomial, size_table};
use immlab::{MulMode, PrimeField};

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    println!("IMM_3 = {}", imm_polynomial(f, 3)?);

    let fm = build_dc_formula(f, 8, 3)?;
    println!("d = 8, depth 3: formula with {} gates, product depth {}", fm.size(), fm.product_depth());
    assert_eq!(fm.to_polynomial(MulMode::Strict)?, imm_polynomial(f, 8)?);
    let circuit = build_dc_circuit(f, 8, 3)?;
    println!("the shared circuit has {} gates", circuit.size());

    println!("\n{:>4} {:>6} {:>14} {:>12}", "d", "depth", "formula", "circuit");
    for row in size_table(&[4, 16, 64, 256], &[1, 2, 3, 4]) {
        println!("{:>4} {:>6} {:>14} {:>12}", row.d, row.delta, row.formula_size, row.circuit_size);
    }
    Ok(())
}

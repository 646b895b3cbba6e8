//! Parse a formula, inspect it, and normalize it to alternating layers.

use immlab::poly::matrix_vars;
use immlab::{Formula, MulMode, PrimeField};

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    let fm = Formula::parse(f, "(* (+ x[1][1][1] 2) (* x[2][1][1] (+ x[2][1][2] x[2][2][1])))")?;
    println!("formula      {fm}");
    println!("size {}, leaves {}, product depth {}", fm.size(), fm.leaf_count(), fm.product_depth());
    println!("multilinear  {}", fm.check_syntactic_multilinear().is_multilinear());

    let nf = fm.normalize_to_alternating(2)?;
    println!("normalized   {nf}");
    println!("alternating  {}", nf.is_alternating(2));
    assert_eq!(nf.to_polynomial(MulMode::Strict)?, fm.to_polynomial(MulMode::Strict)?);

    // ascribed variable sets against the 2-layer ambient set
    let vars = nf.vars(&matrix_vars(2))?;
    println!("root is ascribed {} variables", vars[nf.root()].len());

    // split off one gate: f = A * g + f[g := 0]
    let phi = nf.children(nf.root())[0];
    let split = nf.zero_gate_decompose(phi)?;
    println!("gate {phi}: A = {}, g = {}", split.a, split.g);
    Ok(())
}

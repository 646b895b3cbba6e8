//! Partial derivative matrix rank of a polynomial under a Y/Z split.

use immlab::rank::rank_report;
use immlab::{Polynomial, PrimeField, VarId, VarSet};

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    let y: VarSet = (1..=3).map(VarId::y).collect();
    let z: VarSet = (1..=2).map(VarId::z).collect();
    // each entry is a list of variable-disjoint factors
    let cases: [&[&str]; 3] = [&["1 + y[1]*z[1]", "1 + y[2]*z[2]"], &["y[1]*z[1] + y[2]*z[1]"], &["1 + y[1]*z[1]", "1 + y[2]*z[2]", "1 + y[3]"]];
    for factors in cases {
        let parsed = factors.iter().map(|s| Polynomial::parse(f, s)).collect::<immlab::Result<Vec<_>>>()?;
        let g = Polynomial::product(f, &parsed)?;
        let rep = rank_report(&g, &y, &z, true)?;
        println!("{:<44} rank {} of at most {}", format!("({})", factors.join(")(")), rep.rank, rep.bound_2m);
    }
    Ok(())
}

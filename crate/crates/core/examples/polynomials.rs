//! Sparse multilinear arithmetic over a prime field.

use immlab::{MulMode, Polynomial, PrimeField};

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    let a = Polynomial::parse(f, "1 + 2*y[1]*z[1]")?;
    let b = Polynomial::parse(f, "y[2] - 3*z[2]")?;
    let prod = a.mul(&b, MulMode::Strict)?;
    println!("({a}) * ({b}) = {prod}");
    println!("degree {}, {} terms, support {:?}", prod.degree(), prod.len(), prod.support().len());

    // strict mode refuses a product whose factors share a variable
    let c = Polynomial::parse(f, "y[1] + 1")?;
    match a.mul(&c, MulMode::Strict) {
        Ok(p) => println!("unexpected: {p}"),
        Err(e) => println!("strict product rejected: {e}"),
    }

    let small = PrimeField::new(5)?;
    let p = Polynomial::parse(small, "3*y[1] + 4*y[1]")?;
    println!("over GF(5): 3*y[1] + 4*y[1] = {p}");
    Ok(())
}

//! Sample a random restriction and compare the restricted IMM with its
//! closed form.

use immlab::imm::imm_polynomial;
use immlab::rank::coefficient_matrix;
use immlab::restriction::{apply_to_polynomial, imm_restricted_closed_form, sample_restriction};
use immlab::PrimeField;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    let d = 10;
    let rho = sample_restriction(d, &mut ChaCha8Rng::seed_from_u64(42));
    println!("pi = {:?}", rho.pi());
    println!("a  = {:?}", rho.a());
    println!("marked layers {:?}, |Y| = {}, |Z| = {}", rho.marked(), rho.y().len(), rho.z().len());

    let restricted = apply_to_polynomial(&imm_polynomial(f, d)?, &rho);
    println!("restricted IMM = {restricted}");
    assert_eq!(restricted, imm_restricted_closed_form(f, &rho));

    let rank = coefficient_matrix(&restricted, rho.y(), rho.z())?.rank();
    println!("rank {rank} = 2^{}", rho.m());
    println!("{}", serde_json::to_string(&rho.to_json()).expect("serializable"));
    Ok(())
}

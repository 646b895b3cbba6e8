//! Random product and simple terms, with their rank bounds under random
//! restrictions.

use immlab::experiments::check_rank_bound;
use immlab::generators::GeneratorSpec;
use immlab::restriction::sample_restriction;
use immlab::PrimeField;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> immlab::Result<()> {
    let f = PrimeField::default();
    let d = 10;
    let specs = [GeneratorSpec::t_product(d, 4, 0.5, 1), GeneratorSpec::r_simple(d, 2, Some(12), 0.5, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in specs {
        let term = spec.generate(f)?;
        println!("{} with {} factors", term.kind(), term.factors().len());
        for _ in 0..3 {
            let rho = sample_restriction(d, &mut rng);
            let b = check_rank_bound(&term, &rho, f)?;
            println!("  rank {:>3}, log2 bound {:>5.1}, holds {}", b.rank, b.twice_log_bound as f64 / 2.0, b.holds);
        }
    }
    Ok(())
}

//! Frobenius cycle types at 2000 primes against the exact distribution.
use odoni::construct::build_params;
use odoni::frobenius::sample_distribution;

fn main() -> odoni::Result<()> {
    for (d, n) in [(2, 2), (3, 1), (5, 1)] {
        let stats = sample_distribution(&build_params(d)?, n, 2000, 0)?;
        println!("d={d} n={n}: TV {:.4}, up to p = {}", stats.tv_distance.unwrap_or(f64::NAN), stats.last_prime);
        for c in &stats.counts {
            println!("  {:?}: {:.4} (exact {})", c.cycle_type, c.frequency, c.reference.as_deref().unwrap_or("-"));
        }
    }
    Ok(())
}

//! Builds the even-degree instances and prints their witness primes.
use odoni::arith::val;
use odoni::construct::build_params_even;

fn main() -> odoni::Result<()> {
    for d in [2, 4, 6, 8, 10] {
        let inst = build_params_even(d)?;
        println!("d={d}: s={} t={} p={} p1={}", inst.s, inst.t, inst.p, inst.p1);
        println!("  x0 = {}", inst.x0);
        println!("  v_p1(b) = {}, v_p2(b) = {}", val(&inst.b, inst.p1)?, val(&inst.b, inst.p2)?);
    }
    Ok(())
}

//! Trinomial discriminants in closed form and by resultant, then the
//! iterated discriminants of a constructed instance.
use odoni::arith::{int, rat};
use odoni::construct::build_params;
use odoni::poly::{disc_iterate_levels, disc_resultant, disc_trinomial, Trinomial, DEFAULT_BIT_BUDGET};

fn main() -> odoni::Result<()> {
    let t = Trinomial::new(int(1), int(-1), int(1), 3, 2)?;
    println!("disc({}) = {} (resultant {})", t.to_poly(), disc_trinomial(&t), disc_resultant(&t.to_poly())?);

    let t = Trinomial::new(int(2), rat(-3, 5), int(7), 7, 3)?;
    assert_eq!(disc_trinomial(&t), disc_resultant(&t.to_poly())?);

    let inst = build_params(3)?;
    let levels = disc_iterate_levels(&inst.map()?, &inst.x0, 3, DEFAULT_BIT_BUDGET)?;
    for (l, v) in levels.iter().enumerate().skip(1) {
        println!("level {l}: {} bits, sign {}", odoni::arith::rational_bits(v), if v < &int(0) { "-" } else { "+" });
    }
    Ok(())
}

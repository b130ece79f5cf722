//! A transposition, transitivity, and a subgroup transitive on m points
//! fixing the rest: together they force all of S_d.
use odoni::permgroup::{closure, gen_sd_check, Perm};

fn main() -> odoni::Result<()> {
    let c = |s: &str| Perm::parse_cycles(5, s).unwrap();
    let v = gen_sd_check(5, 3, &[c("(1 2 3 4 5)"), c("(4 5)")], &[c("(1 2 3)")])?;
    println!("{}", serde_json::to_string_pretty(&v).unwrap());

    let cyclic = gen_sd_check(5, 3, &[c("(1 2 3 4 5)")], &[])?;
    println!("cyclic: hypotheses {}, order {}", cyclic.hypotheses_hold, cyclic.group_order);

    let a5 = closure(5, &[c("(1 2 3)"), c("(1 2 3 4 5)")], None)?;
    println!("<(1 2 3), (1 2 3 4 5)> has order {}", a5.len());
    Ok(())
}

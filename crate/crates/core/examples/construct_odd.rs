//! Odd degrees: Case 1 when d is not a square, Case 2 otherwise.
use odoni::construct::build_params_odd;

fn main() -> odoni::Result<()> {
    for d in [3, 5, 7, 9, 11] {
        let inst = build_params_odd(d)?;
        println!(
            "d={d} ({}): x0 = {}, b = {}, p1 = {}, p2 = {}",
            inst.parity_case, inst.x0, inst.b, inst.p1, inst.p2
        );
        println!("{}", serde_json::to_string(&inst).unwrap());
    }
    Ok(())
}

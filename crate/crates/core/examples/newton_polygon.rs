//! Newton polygons and the valuation tower at the second witness prime.
use odoni::arith::int;
use odoni::construct::build_params;
use odoni::newton::{newton_polygon, predict_two_segments, two_segment_witness};

fn main() -> odoni::Result<()> {
    let w = two_segment_witness(5, 3, 7, -2, 2);
    let np = newton_polygon(&w, 7)?;
    println!("{w}\n  {}", serde_json::to_string(&np).unwrap());
    assert_eq!(np.segments, predict_two_segments(5, 3, -2, &int(2))?.to_vec());

    for d in [4, 5, 7] {
        let tower = build_params(d)?.ramification_tower(4)?;
        let vals: Vec<String> = tower.levels.iter().map(|l| l.valuation.to_string()).collect();
        println!("d={d} m={}: {}", tower.m, vals.join(", "));
    }
    Ok(())
}

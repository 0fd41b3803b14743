//! Monotone-quotient / light decompositions of the Koizumi spaces.
use horndec::topdec::{koizumi_space, monotone_light_decomposition, trace_json};

fn main() -> horndec::Result<()> {
    for lambda in 1..=3 {
        let (x, _, f) = koizumi_space(lambda);
        let t = monotone_light_decomposition(&f, 64)?;
        println!("lambda {lambda}: {} points, stabilized at {:?}", x.len(), t.stabilization_index);
    }
    let (_, _, f) = koizumi_space(1);
    let t = monotone_light_decomposition(&f, 64)?;
    println!("{}", serde_json::to_string_pretty(&trace_json(&t)).expect("serializable"));
    Ok(())
}

//! Representing models: the free model on a context subject to a formula.
use horndec::chase::{representing_model, ChaseBudget};
use horndec::gauge::ncat_theory;
use horndec::structure::print_model;
use horndec::syntax::{parse_context, parse_formula};

fn main() -> horndec::Result<()> {
    let th = ncat_theory(1);
    let ctx = parse_context(&th.sig, "[x:*, y:*]")?;
    let phi = parse_formula(&th.sig, &ctx, "d1(x) = c1(y)")?;
    let (r, generic) = representing_model(&th, &ctx, &phi, ChaseBudget::default());
    println!("status {:?}, {} elements, {} rounds", r.status, r.model.len(), r.stats.rounds);
    for (x, e) in &generic {
        println!("  {x} |-> {}", r.model.name(*e));
    }
    print!("{}", print_model(&th.sig, "free", &th.name, &r.model));
    Ok(())
}

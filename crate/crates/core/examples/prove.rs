//! Deciding Horn sequents and the reduction relation with the chase-based prover.
use horndec::chase::{prove_sequent, reduces, ChaseBudget};
use horndec::gauge::ncat_theory;
use horndec::syntax::{parse_context, parse_sequents, parse_term};

fn main() -> horndec::Result<()> {
    let th = ncat_theory(2);
    let b = ChaseBudget::default();
    for src in ["[x:*] top |- d1(d1(x)) = d1(x)", "[x:*] top |- d1(x) = c1(x)", "[x:*, y:*] d1(x) = c1(y) |- comp1(x, y)!"] {
        let seq = parse_sequents(&th.sig, src)?.remove(0);
        let r = prove_sequent(&th, &seq, b);
        println!("{src}: {:?} ({} elements)", r.verdict, r.stats.elements);
    }
    let ctx = parse_context(&th.sig, "[x:*, y:*]")?;
    let sigma = parse_term(&th.sig, &ctx, "d1(comp2(x, y))")?;
    let tau = parse_term(&th.sig, &ctx, "d1(y)")?;
    println!("d1(comp2(x, y)) reduces to d1(y): {:?}", reduces(&th, &ctx, &sigma, &tau, b).verdict);
    Ok(())
}

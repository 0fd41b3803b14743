//! Parse a theory, print its signature and sequents, and render it back to source.
use horndec::cli::default_corpus;
use horndec::syntax::{check_sequent, parse_theory};

fn main() -> horndec::Result<()> {
    let path = default_corpus().join("theories/toy.pht");
    let th = parse_theory(&std::fs::read_to_string(path).expect("bundled corpus"))?;
    println!("theory {}: {} sort(s), {} function symbol(s)", th.name, th.sig.sorts.len(), th.sig.funcs.len());
    for seq in &th.sequents {
        check_sequent(&th.sig, seq)?;
        println!("  {}", th.sig.sequent(seq));
    }
    print!("{}", th.to_source());
    Ok(())
}

//! Canonical decomposition of the map from the two-element toy model to the terminal one.
use horndec::cli::{default_corpus, load_model, load_theory};
use horndec::decompose::{canonical_decomposition, equational_scale, DecompBudget};
use horndec::structure::{enumerate_homs, print_model};
use std::sync::Arc;

fn main() -> horndec::Result<()> {
    let corpus = default_corpus();
    let th = load_theory(&corpus.join("theories/toy.pht"))?;
    let m = Arc::new(load_model(&th, &corpus.join("models/toy_M.pm"))?.structure);
    let t = Arc::new(load_model(&th, &corpus.join("models/toy_T.pm"))?.structure);
    let f = enumerate_homs(&m, &t).remove(0);
    let trace = canonical_decomposition(&th, &equational_scale(&th), &f, DecompBudget::default())?;
    for (i, a) in trace.models().iter().enumerate() {
        print!("A{i}: {}", print_model(&th.sig, &format!("A{i}"), &th.name, a));
    }
    println!("decnum {:?}", trace.decnum());
    Ok(())
}

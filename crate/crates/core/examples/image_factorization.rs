//! Regular-epi / mono factorization of a homomorphism.
use horndec::cli::{default_corpus, load_model, load_theory, read};
use horndec::decompose::{image_factorization, DecompBudget};
use horndec::structure::parse_hom;

fn main() -> horndec::Result<()> {
    let corpus = default_corpus();
    let th = load_theory(&corpus.join("theories/ncat1.pht"))?;
    let a = load_model(&th, &corpus.join("models/cat_C0.pm"))?;
    let b = load_model(&th, &corpus.join("models/cat_C2.pm"))?;
    let f = parse_hom(&read(&corpus.join("homs/cat_Phi.phom"))?, &[a, b])?.hom;
    let (epi, mono) = image_factorization(&th, &f, DecompBudget::default())?;
    println!("image has {} elements; mono injective: {}", mono.source.len(), mono.is_injective());
    println!("epi surjective: {}; composite equals f: {}", epi.is_surjective(), epi.then(&mono)?.map == f.map);
    Ok(())
}

//! Decomposition numbers of the bundled functor examples in Cat and 2-Cat.
use horndec::cli::{default_corpus, load_model, load_theory, read};
use horndec::decompose::{canonical_decomposition, equational_scale, trace_json, DecompBudget};
use horndec::structure::parse_hom;

fn main() -> horndec::Result<()> {
    let corpus = default_corpus();
    for (theory, from, to, hom) in [
        ("ncat1.pht", "cat_C0.pm", "cat_C2.pm", "cat_Phi.phom"),
        ("ncat2.pht", "ncat2_X0.pm", "ncat2_X3.pm", "ncat2_F0.phom"),
    ] {
        let th = load_theory(&corpus.join("theories").join(theory))?;
        let a = load_model(&th, &corpus.join("models").join(from))?;
        let b = load_model(&th, &corpus.join("models").join(to))?;
        let f = parse_hom(&read(&corpus.join("homs").join(hom))?, &[a, b])?.hom;
        let scale = equational_scale(&th);
        let trace = canonical_decomposition(&th, &scale, &f, DecompBudget::default())?;
        let j = trace_json(&scale, &trace);
        println!("{hom}: decnum {:?}", trace.decnum());
        println!("{}", serde_json::to_string(&j).expect("serializable"));
    }
    Ok(())
}

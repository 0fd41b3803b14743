//! Certify the toy gauge and the generated gauge for strict 2-categories on small terms.
use horndec::chase::ChaseBudget;
use horndec::cli::{default_corpus, load_theory, read};
use horndec::decompose::{equational_scale, parse_scale};
use horndec::gauge::{check_gauge, gamma, ncat_gauge_rules, ncat_theory, parse_gauge_rules, terms_up_to};
use horndec::syntax::Term;

fn main() -> horndec::Result<()> {
    let corpus = default_corpus();
    let th = load_theory(&corpus.join("theories/toy.pht"))?;
    let scale = parse_scale(&th, &read(&corpus.join("scales/toy.scale"))?)?;
    let rules = parse_gauge_rules(&th, &scale, &read(&corpus.join("rules/toy.gauge"))?)?;
    let terms = terms_up_to(&th.sig, &[], 1);
    let cert = check_gauge(&th, &scale, &rules, &terms, ChaseBudget::default())?;
    for c in &cert.checks {
        println!("{:>4}  #{}  {}", c.term, c.sharp, c.defining);
    }
    println!("toy: {:?}, gamma {}", cert.status, gamma(&rules, &terms));

    let th = ncat_theory(2);
    let rules = ncat_gauge_rules(&th).expect("n-category signature");
    let terms = terms_up_to(&th.sig, &[Term::var("x", 0), Term::var("y", 0)], 1);
    let cert = check_gauge(&th, &equational_scale(&th), &rules, &terms, ChaseBudget::default())?;
    println!("ncat2: {:?} on {} terms, gamma {}", cert.status, terms.len(), gamma(&rules, &terms));
    Ok(())
}

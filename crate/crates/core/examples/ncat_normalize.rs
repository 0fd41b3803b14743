//! Normal forms of n-category terms, checked against the prover.
use horndec::chase::{reduces, ChaseBudget};
use horndec::gauge::{ncat_theory, Ncat};
use horndec::syntax::{parse_context, parse_term};

fn main() -> horndec::Result<()> {
    let th = ncat_theory(2);
    let nc = Ncat::new(&th.sig, 2).expect("n-category signature");
    let ctx = parse_context(&th.sig, "[x:*, y:*, z:*]")?;
    for src in ["d1(comp2(x, y))", "comp1(comp2(x, y), z)", "comp2(comp2(x, y), z)", "c2(comp1(x, d1(y)))"] {
        let t = parse_term(&th.sig, &ctx, src)?;
        let nf = nc.normalize(&t);
        let v = reduces(&th, &ctx, &t, &nf, ChaseBudget::default()).verdict;
        println!("{src}  ~>  {}   (#{} -> #{}, {v:?})", th.sig.term(&nf), nc.sharp(&t), nc.sharp(&nf));
    }
    Ok(())
}

//! Dependency ranks and decomposition bounds of the bundled GAT signatures.
use horndec::cli::{default_corpus, read};
use horndec::gatrank::{parse_gat, rank_report};

fn main() -> horndec::Result<()> {
    let dir = default_corpus().join("gat");
    for name in ["set", "cat", "ncat1", "ncat2", "ncat3", "moncat", "multicat", "dblcat", "nondescending"] {
        let r = rank_report(&parse_gat(&read(&dir.join(format!("{name}.gat")))?)?)?;
        let ranks: Vec<String> = r.ranks.iter().map(|(s, k)| format!("{s}:{k}")).collect();
        match r.bound {
            Some(b) => println!("{name:14} [{}] bound {b}", ranks.join(" ")),
            None => {
                let v: Vec<String> = r.violations.iter().map(|v| v.decl.to_string()).collect();
                println!("{name:14} [{}] descending at {}", ranks.join(" "), v.join(", "));
            }
        }
    }
    Ok(())
}

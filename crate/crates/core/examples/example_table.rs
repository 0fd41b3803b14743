//! Run the bundled example table, optionally filtered: `cargo run --example example_table -- koizumi`.
use horndec::cli::main_from_args;

fn main() {
    let filter = std::env::args().nth(1).unwrap_or_default();
    std::process::exit(main_from_args(["horndec", "examples", &filter]));
}

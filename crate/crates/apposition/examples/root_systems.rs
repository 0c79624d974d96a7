//! Tour of the root-system layer: counts, marks, exponents, bicoloring.
//!
//!     cargo run --example root_systems

use apposition::rootsys::{RootSystem, SimpleType};

fn main() {
    println!("{:>5} {:>6} {:>4} {:>6}  {:<24} exponents", "type", "|R|", "h", "dim 𝔤", "marks");
    for t in SimpleType::all_up_to_rank(8) {
        let rs = RootSystem::build(t).unwrap();
        println!(
            "{:>5} {:>6} {:>4} {:>6}  {:<24} {:?}",
            t.to_string(),
            rs.roots.len(),
            rs.coxeter_number,
            rs.roots.len() + rs.rank,
            format!("{:?}", rs.marks),
            rs.exponents,
        );
    }

    let rs = RootSystem::build(SimpleType::parse("E8").unwrap()).unwrap();
    let col = rs.bicolor().unwrap();
    println!(
        "\nE8 bicoloring: ε = {:?} ({} black vertices)",
        col.color, col.black_count
    );
    println!("highest root θ = {:?}, ht θ = h − 1 = {}", rs.highest_root, rs.coxeter_number - 1);
}

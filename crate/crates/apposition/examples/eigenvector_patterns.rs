//! Factorization patterns in the Cartan eigenvectors: zero clusters that
//! match Perron–Frobenius vectors of subsystems, and the PF-type
//! permutation group.
//!
//!     cargo run --example eigenvector_patterns [TYPE]

use apposition::patterns;
use apposition::cli::format_cycles;
use apposition::rootsys::{RootSystem, SimpleType};

fn main() {
    let type_name = std::env::args().nth(1).unwrap_or_else(|| "A11".to_string());
    let t = SimpleType::parse(&type_name).expect("unknown type");
    let rs = RootSystem::build(t).unwrap();
    let table = patterns::eigen_table(&rs).unwrap();

    println!("{t}: h = {}", rs.coxeter_number);
    for i in 1..=rs.rank {
        let rep = patterns::cluster_report(&rs, &table, i, 1e-8).unwrap();
        let zeros: Vec<usize> = rep.zero_indices.iter().map(|z| z + 1).collect();
        print!(
            "k = {:>2}: gcd(k,h) = {}, zeros at {:?}, clusters:",
            rep.exponent, rep.p, zeros
        );
        for c in &rep.clusters {
            print!(
                " [{}..{}]→{}",
                c.vertices[0] + 1,
                c.vertices[c.vertices.len() - 1] + 1,
                c.matched_type.as_deref().unwrap_or("?")
            );
        }
        println!();
    }

    let perm = patterns::pf_type_analysis(&rs, &table).unwrap();
    println!(
        "\nPF-type eigenvectors (k coprime to h){}:",
        if perm.conjectural { " — conjectural, not simply laced" } else { "" }
    );
    for e in &perm.entries {
        println!(
            "  k = {:>2}: σ = {}{}",
            e.exponent,
            e.permutation.as_ref().map(|p| format_cycles(p)).unwrap_or_else(|| "-".into()),
            if e.ambiguous { " (repeated values: canonical representative)" } else { "" }
        );
    }
    println!(
        "group: {} permutations (φ(h)/2 = {}), closed under composition: {}",
        perm.group_size, perm.expected_group_order, perm.closed_under_composition
    );
}

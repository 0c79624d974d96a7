//! The Lie-algebra layer: integer structure constants, the Weyl-normalized
//! Killing form, and the compact-form involution.
//!
//!     cargo run --example chevalley_basis [TYPE]

use apposition::chevalley::build_lie_algebra;
use apposition::rootsys::{RootSystem, SimpleType};

fn main() {
    let type_name = std::env::args().nth(1).unwrap_or_else(|| "G2".to_string());
    let t = SimpleType::parse(&type_name).expect("unknown type");
    let rs = RootSystem::build(t).unwrap();
    let la = build_lie_algebra(&rs).unwrap();

    println!("{t}: dim 𝔤 = {} = hr + r", la.dim);
    let max_n = la.chevalley.n_entries.iter().map(|&(_, _, n)| n.abs()).max().unwrap_or(0);
    println!(
        "{} structure constants N_αβ, |N| ≤ {max_n} (= longest root string)",
        la.chevalley.n_entries.len()
    );

    // a bracket in the integer layer: [e_α1, e_α2]
    if rs.rank >= 2 {
        let mut a = vec![0i64; rs.rank];
        a[0] = 1;
        let mut b = vec![0i64; rs.rank];
        b[1] = 1;
        if let (Some(&ia), Some(&ib)) = (rs.root_index.get(&a), rs.root_index.get(&b)) {
            for &(x, y, n) in &la.chevalley.n_entries {
                if x == ia && y == ib {
                    println!("integer layer: [e_α1, e_α2] = {n} · e_(α1+α2)");
                }
            }
        }
    }

    println!("κ(e_α, e_−α) pre-normalization: {:?} ...", &la.chevalley.kappa[..3.min(la.n_roots)]);
    let star = la.star().unwrap();
    let e0 = la.basis_vector(0);
    println!(
        "after normalization H(e_α, e_α) = {:.12}",
        la.hermitian(&e0, &e0, &star).re
    );
    println!("star sends basis 0 to basis {}", star.star_perm[0]);
}

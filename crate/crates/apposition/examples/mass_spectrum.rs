//! The headline construction: commuting Hermitian mass operators on 𝔥
//! whose signed square-root spectra are eigenvectors of the Cartan matrix.
//!
//!     cargo run --example mass_spectrum [TYPE]

use apposition::apposition::{mass_operator, AppositionData};
use apposition::chevalley::build_lie_algebra;
use apposition::rootsys::{RootSystem, SimpleType};

fn main() {
    let type_name = std::env::args().nth(1).unwrap_or_else(|| "F4".to_string());
    let t = SimpleType::parse(&type_name).expect("unknown type");
    let rs = RootSystem::build(t).unwrap();
    let la = build_lie_algebra(&rs).unwrap();
    let star = la.star().unwrap();
    let data = AppositionData::build(&la, &star).unwrap();

    println!("{t}: h = {}, exponents {:?}", rs.coxeter_number, rs.exponents);
    println!(
        "cyclic element e lives in 𝔤_1; centralizer 𝔥′ = Z(e) has dimension {}",
        data.hprime.len()
    );
    for (k, _) in data.graded_lines() {
        print!("𝔥′ ∩ 𝔤_{k}  ");
    }
    println!("are the graded lines\n");

    println!(
        "{:>3} {:>4} {:>12} {:>14} {:>14}   signed square roots ∝ Cartan eigenvector",
        "i", "k", "λ_i", "multiset_res", "eigvec_res"
    );
    for i in 1..=rs.rank {
        let sp = mass_operator(&la, &star, &data, i).unwrap();
        if sp.doubled {
            println!(
                "{:>3} {:>4} {:>12.8} {:>14} {:>14}   (doubled exponent: eigenspace level)",
                i, sp.exponent, sp.lambda, "-", "-"
            );
            continue;
        }
        println!(
            "{:>3} {:>4} {:>12.8} {:>14.3e} {:>14.3e}   {:?}",
            i,
            sp.exponent,
            sp.lambda,
            sp.residual_multiset,
            sp.residual_eigenvector,
            sp.signed_roots
                .iter()
                .map(|v| (v * 1e6).round() / 1e6)
                .collect::<Vec<_>>()
        );
    }
    println!("\nthe i = 1 row is the Perron–Frobenius vector: the affine Toda masses");
}

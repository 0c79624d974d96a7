//! The exact Coxeter-element identities and exponent recovery.
//!
//!     cargo run --example coxeter_identities [TYPE]
//!
//! `c_b + c_w = 2I − Â` and `(2I − Â)² = c + c⁻¹ + 2I` are checked in
//! integer arithmetic; the exponents come back out of the eigenvalue
//! arguments of `c`.

use apposition::coxeter;
use apposition::exact::IMat;
use apposition::rootsys::{RootSystem, SimpleType};

fn main() {
    let type_name = std::env::args().nth(1).unwrap_or_else(|| "E6".to_string());
    let t = SimpleType::parse(&type_name).expect("unknown type");
    let rs = RootSystem::build(t).unwrap();
    let col = rs.bicolor().unwrap();
    let cd = coxeter::coxeter_element(&rs, &col).unwrap();

    println!("{t}: h = {}, bicoloring ε = {:?}", rs.coxeter_number, col.color);
    println!("order of c (exact): {}", cd.order);

    let two_i_minus_a = IMat::identity(rs.rank).scale(2).sub(&cd.a_hat);
    println!(
        "c_b + c_w = 2I − Â: {}",
        cd.c_black.add(&cd.c_white) == two_i_minus_a
    );
    let c_inv = cd.c_white.mul(&cd.c_black);
    let rhs = cd.c.add(&c_inv).add(&IMat::identity(rs.rank).scale(2));
    println!(
        "(2I − Â)² = c + c⁻¹ + 2I: {}",
        two_i_minus_a.mul(&two_i_minus_a) == rhs
    );

    let exponents = coxeter::exponents_of(&cd, &rs).unwrap();
    let residual = coxeter::exponent_recovery_residual(&cd, &rs).unwrap();
    println!("exponents from eigenvalue arguments of c: {exponents:?} (residual {residual:.2e})");

    let orbits = coxeter::orbit_decomposition(&rs, &cd).unwrap();
    println!(
        "c acts on the {} roots in {} orbits of size {}",
        rs.roots.len(),
        orbits.len(),
        rs.coxeter_number
    );

    for i in [1, rs.rank] {
        let pair = coxeter::cartan_eigenpair(&rs, &cd, i).unwrap();
        println!(
            "eigenpair i = {i}: k = {}, λ = {:.8}, x = {:?}",
            pair.exponent,
            pair.lambda,
            pair.x.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>()
        );
    }
}

//! Affine Toda normal modes: masses from the square mass operator, the
//! plane-wave dispersion check, and the convergence of the discretized
//! linearized equation.
//!
//!     cargo run --example toda_modes [TYPE]

use apposition::apposition::AppositionData;
use apposition::chevalley::build_lie_algebra;
use apposition::rootsys::{RootSystem, SimpleType};
use apposition::toda::{self, FieldConfig};

fn main() {
    let type_name = std::env::args().nth(1).unwrap_or_else(|| "A3".to_string());
    let t = SimpleType::parse(&type_name).expect("unknown type");
    let rs = RootSystem::build(t).unwrap();
    let la = build_lie_algebra(&rs).unwrap();
    let star = la.star().unwrap();
    let data = AppositionData::build(&la, &star).unwrap();

    let m = 1.0;
    let modes = toda::normal_modes(&la, &star, &data, m).unwrap();
    println!("{t}: {} normal modes at coupling m = {m}", modes.len());
    for mode in &modes {
        println!("  mode {}: mass {:.10}", mode.index, mode.mass);
    }

    // dispersion on the mass shell, rest frame, grid adapted to ω
    let mode = &modes[0];
    let len2 = 2.0 * std::f64::consts::PI * 2.0 / mode.omega;
    for n in [16usize, 32, 64] {
        let cfg = FieldConfig::new(n, n, 4.0 / n as f64, len2 / n as f64, m);
        let res = toda::kg_residual(&la, &star, &data, mode, cfg).unwrap();
        println!(
            "grid {n:>3}²: analytic residual {:.3e}, discrete residual {:.3e}",
            res.analytic, res.discrete_max
        );
    }
    let order = toda::discrete_convergence_order(&la, &star, &data, m, 16, 3).unwrap();
    println!("fitted discretization order: {order:.3}");

    let omega = modes[modes.len() - 1].omega;
    let len2 = 2.0 * std::f64::consts::PI * 2.0 / omega;
    let cfg = FieldConfig::new(16, 16, 0.2, len2 / 16.0, m);
    let slope = toda::linearization_slope(&la, &star, &data, cfg, &[1e-2, 1e-3, 1e-4]).unwrap();
    println!("nonlinear-vs-linear residual slope: {slope:.3}");

    let worst = toda::commutator_check(&la, &star, &data).unwrap();
    println!("max relative commutator of the mass operators: {worst:.3e}");
}

//! Report generation and the command surface behind the `apposition`
//! binary: `spectrum`, `verify`, `patterns`, `toda`. Each command returns a
//! serializable [`ReportDocument`]; rendering to text, JSON or CSV and the
//! exit-code policy live here so the binary stays a thin argument parser.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::apposition::{self, AppositionData, Check, VerificationReport};
use crate::chevalley;
use crate::coxeter;
use crate::exact::IMat;
use crate::linalg;
use crate::patterns::{self, ClusterReport, PermutationReport};
use crate::rootsys::{RootSystem, SimpleType};
use crate::toda::{self, FieldConfig};
use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One row of the mass-spectrum table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub exponent_index: usize,
    pub exponent: i64,
    pub lambda: f64,
    /// Square roots of the mass-operator eigenvalues, ascending.
    pub masses: Vec<f64>,
    /// Signed square roots arranged as a Cartan eigenvector (empty for the
    /// doubled middle exponent, which is verified at eigenspace level).
    pub signed_roots: Vec<f64>,
    pub matched_vector: Vec<f64>,
    pub scale: f64,
    pub doubled: bool,
    pub multiset_residual: f64,
    pub eigenvector_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub exponents: Vec<i64>,
    pub coxeter_number: i64,
    pub dimension: usize,
    pub rows: Vec<SpectrumRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TodaModeRow {
    pub index: usize,
    pub mass: f64,
    pub omega_rest: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TodaSection {
    pub mass_param: f64,
    pub grid: usize,
    pub modes: Vec<TodaModeRow>,
    pub analytic_dispersion_residual: f64,
    pub discrete_convergence_order: f64,
    pub linearization_slope: f64,
    pub commutator_norm: f64,
    pub zero_field_residual: f64,
}

/// Everything a command can emit, in one document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub type_name: String,
    pub spectrum: Option<SpectrumSection>,
    pub verification: Option<Vec<VerificationReport>>,
    pub clusters: Option<Vec<ClusterReport>>,
    pub permutations: Option<PermutationReport>,
    pub toda: Option<TodaSection>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub library_version: String,
    pub timestamp_unix: u64,
    pub tolerances: BTreeMap<String, f64>,
}

fn provenance(tolerances: BTreeMap<String, f64>) -> Provenance {
    Provenance {
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        tolerances,
    }
}

fn default_tolerances() -> BTreeMap<String, f64> {
    let mut t = BTreeMap::new();
    t.insert("exact".to_string(), 0.0);
    t.insert("spectral".to_string(), 1e-10);
    t.insert("identity".to_string(), 1e-8);
    t.insert("cross_oracle".to_string(), 1e-7);
    t.insert("cluster_match".to_string(), 1e-6);
    t
}

/// Mass-spectrum report: the full mass-operator pipeline for one type.
pub fn cmd_spectrum(type_str: &str, tol: Option<f64>) -> Result<ReportDocument> {
    let t = SimpleType::parse(type_str)?;
    let rs = RootSystem::build(t)?;
    let la = chevalley::build_lie_algebra(&rs)?;
    let star = la.star()?;
    let data = AppositionData::build(&la, &star)?;
    let tol = tol.unwrap_or(1e-8);

    let mut rows = Vec::with_capacity(rs.rank);
    for i in 1..=rs.rank {
        let sp = apposition::mass_operator(&la, &star, &data, i)?;
        let masses: Vec<f64> = sp.eigenvalues.iter().map(|w| w.max(0.0).sqrt()).collect();
        let (multiset_residual, eigenvector_residual) = if sp.doubled {
            let twins: Vec<usize> = (1..=rs.rank)
                .filter(|&j| rs.exponents[j - 1] == sp.exponent)
                .collect();
            let pc = apposition::doubled_pair_check(&la, &star, &data, twins[0], twins[1])?;
            (
                pc.residual_sum_multiset.max(pc.residual_line_multiset),
                pc.residual_eigenvector,
            )
        } else {
            (sp.residual_multiset, sp.residual_eigenvector)
        };
        rows.push(SpectrumRow {
            exponent_index: i,
            exponent: sp.exponent,
            lambda: sp.lambda,
            masses,
            signed_roots: sp.signed_roots,
            matched_vector: sp.matched_vector,
            scale: sp.scale,
            doubled: sp.doubled,
            multiset_residual,
            eigenvector_residual,
        });
    }
    let mut tolerances = default_tolerances();
    tolerances.insert("identity".to_string(), tol);
    Ok(ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "spectrum".to_string(),
        type_name: t.to_string(),
        spectrum: Some(SpectrumSection {
            exponents: rs.exponents.clone(),
            coxeter_number: rs.coxeter_number,
            dimension: la.dim,
            rows,
        }),
        verification: None,
        clusters: None,
        permutations: None,
        toda: None,
        provenance: provenance(tolerances),
    })
}

/// All invariant suites for one type, as one merged report.
pub fn verify_type(t: SimpleType, tol: Option<f64>) -> Result<VerificationReport> {
    let rs = RootSystem::build(t)?;
    let mut checks = Vec::new();
    let scale_tol = |default: f64| tol.unwrap_or(default);

    // root system counts (exact)
    let h = rs.coxeter_number;
    let r = rs.rank as i64;
    checks.push(Check::new(
        "rootsys/count_hr",
        (rs.roots.len() as i64 - h * r).abs() as f64,
        0.0,
    ));
    checks.push(Check::new(
        "rootsys/marks_sum",
        (rs.marks.iter().sum::<i64>() + 1 - h).abs() as f64,
        0.0,
    ));
    let palindrome = (0..rs.rank)
        .map(|i| (rs.exponents[i] + rs.exponents[rs.rank - 1 - i] - h).abs())
        .max()
        .unwrap_or(0);
    checks.push(Check::new("rootsys/exponent_palindrome", palindrome as f64, 0.0));

    // coxeter identities (exact)
    let coloring = rs.bicolor()?;
    let cd = coxeter::coxeter_element(&rs, &coloring)?;
    let two_i_minus_a = IMat::identity(rs.rank).scale(2).sub(&cd.a_hat);
    let color_sum = if cd.c_black.add(&cd.c_white) == two_i_minus_a { 0.0 } else { 1.0 };
    checks.push(Check::new("coxeter/color_sum_identity", color_sum, 0.0));
    let lhs = two_i_minus_a.mul(&two_i_minus_a);
    let c_inv = cd.c_white.mul(&cd.c_black);
    let rhs = cd.c.add(&c_inv).add(&IMat::identity(rs.rank).scale(2));
    checks.push(Check::new(
        "coxeter/square_identity",
        if lhs == rhs { 0.0 } else { 1.0 },
        0.0,
    ));
    checks.push(Check::new(
        "coxeter/order_h",
        (cd.order as i64 - h).abs() as f64,
        0.0,
    ));
    let exps = coxeter::exponents_of(&cd, &rs)?;
    checks.push(Check::new(
        "coxeter/exponents_recovered",
        if exps == rs.exponents { 0.0 } else { 1.0 },
        0.0,
    ));
    let orbits = coxeter::orbit_decomposition(&rs, &cd)?;
    let orbit_ok = orbits.len() == rs.rank && orbits.iter().all(|o| o.len() == h as usize);
    checks.push(Check::new("coxeter/orbits", if orbit_ok { 0.0 } else { 1.0 }, 0.0));

    // Lie algebra integrity
    let la = chevalley::build_lie_algebra(&rs)?;
    let mut jacobi_worst = 0i64;
    for x in 0..la.dim {
        for y in x + 1..la.dim {
            for z in y + 1..la.dim {
                jacobi_worst = jacobi_worst.max(la.jacobi_defect_int(x, y, z));
            }
        }
    }
    checks.push(Check::new("algebra/jacobi_exact", jacobi_worst as f64, 0.0));

    let mut rng_state = 0xc0ffee ^ (la.dim as u64);
    let mut next_u = move |m: usize| {
        rng_state = rng_state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (rng_state >> 33) as usize % m
    };
    let mut jacobi_norm: f64 = 0.0;
    for _ in 0..1000 {
        let x = la.basis_vector(next_u(la.dim));
        let y = la.basis_vector(next_u(la.dim));
        let z = la.basis_vector(next_u(la.dim));
        let mut j = la.bracket(&x, &la.bracket(&y, &z));
        for (ji, v) in j.iter_mut().zip(la.bracket(&y, &la.bracket(&z, &x))) {
            *ji += v;
        }
        for (ji, v) in j.iter_mut().zip(la.bracket(&z, &la.bracket(&x, &y))) {
            *ji += v;
        }
        jacobi_norm = jacobi_norm.max(linalg::norm2(&j));
    }
    checks.push(Check::new(
        "algebra/jacobi_normalized",
        jacobi_norm,
        scale_tol(1e-10),
    ));

    // Killing sparsity and normalization via the literal trace form
    let mut kappa_resid: f64 = 0.0;
    let full_gram = la.dim <= 150;
    let pairs: Vec<(usize, usize)> = if full_gram {
        (0..la.n_roots)
            .flat_map(|a| (0..la.n_roots).map(move |b| (a, b)))
            .collect()
    } else {
        let mut v: Vec<(usize, usize)> =
            (0..la.n_roots).map(|a| (a, la.negative_root_index(a))).collect();
        for _ in 0..2000 {
            v.push((next_u(la.n_roots), next_u(la.n_roots)));
        }
        v
    };
    for (a, b) in pairs {
        let lit = la.killing_literal(&la.basis_vector(a), &la.basis_vector(b));
        let expect = if b == la.negative_root_index(a) { 1.0 } else { 0.0 };
        kappa_resid = kappa_resid.max((lit.re - expect).abs().max(lit.im.abs()));
    }
    checks.push(Check::new(
        "algebra/killing_weyl_normalized",
        kappa_resid,
        scale_tol(1e-9),
    ));

    // star structure
    let star = la.star()?;
    let (w_gram, _) = {
        let diag: Vec<f64> = (0..la.dim).map(|a| star.hermitian_gram[(a, a)].re).collect();
        let normalized = linalg::CMat::from_fn(la.dim, la.dim, |a, b| {
            star.hermitian_gram[(a, b)] / (diag[a].sqrt() * diag[b].sqrt())
        });
        linalg::eigh(&normalized)
    };
    checks.push(Check::new(
        "algebra/h_positive_definite",
        if w_gram[0] > 1e-8 { 0.0 } else { f64::INFINITY },
        0.0,
    ));
    let mut adjoint_resid: f64 = 0.0;
    for _ in 0..200 {
        let x = la.basis_vector(next_u(la.dim));
        let u = la.basis_vector(next_u(la.dim));
        let v = la.basis_vector(next_u(la.dim));
        let lhs = la.hermitian(&la.bracket(&x, &u), &v, &star);
        let rhs = la.hermitian(&u, &la.bracket(&star.apply(&x), &v), &star);
        adjoint_resid = adjoint_resid.max((lhs - rhs).norm());
    }
    checks.push(Check::new(
        "algebra/ad_star_adjoint",
        adjoint_resid,
        scale_tol(1e-10),
    ));

    // apposition pipeline
    let data = AppositionData::build(&la, &star)?;
    let apposition_report = apposition::verify_with_data(&la, &star, &data)?;
    for c in apposition_report.checks {
        checks.push(Check {
            name: format!("apposition/{}", c.name),
            residual: c.residual,
            tolerance: tol.unwrap_or(c.tolerance),
            pass: c.residual.is_finite() && c.residual <= tol.unwrap_or(c.tolerance),
        });
    }

    // cross-oracle: Cartan eigen-solve vs mass-operator spectra
    let table = patterns::eigen_table(&rs)?;
    let mut cross: f64 = 0.0;
    let mut handled = std::collections::HashSet::new();
    for i in 1..=rs.rank {
        let sp = apposition::mass_operator(&la, &star, &data, i)?;
        if sp.doubled {
            if !handled.insert(sp.exponent) {
                continue;
            }
            let twins: Vec<usize> = (1..=rs.rank)
                .filter(|&j| rs.exponents[j - 1] == sp.exponent)
                .collect();
            // basis-independent per-coordinate projector diagonal vs
            // per-Kostant-index eigenvalue sums
            let sp2 = apposition::mass_operator(&la, &star, &data, twins[1])?;
            let mut sums: Vec<f64> = sp
                .kostant_eigenvalues
                .iter()
                .zip(&sp2.kostant_eigenvalues)
                .map(|(a, b)| a + b)
                .collect();
            let e1 = &table.entries[twins[0] - 1].vector;
            let e2 = &table.entries[twins[1] - 1].vector;
            let mut proj: Vec<f64> = (0..rs.rank)
                .map(|j| e1[j] * e1[j] + e2[j] * e2[j])
                .collect();
            sums.sort_by(f64::total_cmp);
            proj.sort_by(f64::total_cmp);
            cross = cross.max(multiset_residual(&sums, &proj));
        } else {
            let mut masses: Vec<f64> =
                sp.eigenvalues.iter().map(|w| w.max(0.0).sqrt()).collect();
            let mut target = table.entries[i - 1].abs_vector.clone();
            masses.sort_by(f64::total_cmp);
            target.sort_by(f64::total_cmp);
            cross = cross.max(multiset_residual(&masses, &target));
        }
    }
    checks.push(Check::new("cross_oracle/spectra_agree", cross, scale_tol(1e-7)));

    // patterns twin symmetry and the ε-twist at eigenvector level
    let mut twin: f64 = 0.0;
    let mut twist: f64 = 0.0;
    for i in 1..=rs.rank {
        if table.entries[i - 1].doubled {
            continue;
        }
        let partner = rs.rank + 1 - i;
        for j in 0..rs.rank {
            twin = twin.max(
                (table.entries[i - 1].abs_vector[j] - table.entries[partner - 1].abs_vector[j])
                    .abs(),
            );
        }
        // μ^{(r+1-i)}_j = ±ε(j) μ^{(i)}_j
        let vi = &table.entries[i - 1].vector;
        let vp = &table.entries[partner - 1].vector;
        let mut plus: f64 = 0.0;
        let mut minus: f64 = 0.0;
        for j in 0..rs.rank {
            let t = coloring.eps(j) as f64 * vi[j];
            plus = plus.max((vp[j] - t).abs());
            minus = minus.max((vp[j] + t).abs());
        }
        twist = twist.max(plus.min(minus));
    }
    checks.push(Check::new("patterns/twin_abs_vectors", twin, scale_tol(1e-9)));
    checks.push(Check::new("patterns/color_twist", twist, scale_tol(1e-9)));

    let mut notes = apposition_report.notes;
    if rs.exponents.windows(2).any(|w| w[0] == w[1]) {
        notes.push(
            "doubled middle exponent: eigenvector comparisons are made at the \
             level of the 2-dimensional eigenspace"
                .to_string(),
        );
    }

    Ok(VerificationReport { type_name: t.to_string(), checks, notes })
}

fn multiset_residual(a_sorted: &[f64], b_sorted: &[f64]) -> f64 {
    let num: f64 = a_sorted.iter().zip(b_sorted).map(|(x, y)| x * y).sum();
    let den: f64 = b_sorted.iter().map(|y| y * y).sum();
    let s = num / den.max(1e-300);
    a_sorted
        .iter()
        .zip(b_sorted)
        .map(|(x, y)| (x - s * y).powi(2))
        .sum::<f64>()
        .sqrt()
        / a_sorted.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300)
}

/// `verify` command: one type or `--all` (every supported type of rank ≤ 8).
pub fn cmd_verify(type_str: Option<&str>, all: bool, tol: Option<f64>) -> Result<ReportDocument> {
    let types: Vec<SimpleType> = if all {
        SimpleType::all_up_to_rank(8)
    } else {
        let s = type_str.ok_or_else(|| Error::UnknownType("<missing>".to_string()))?;
        vec![SimpleType::parse(s)?]
    };
    let reports: Vec<VerificationReport> = types
        .iter()
        .map(|&t| verify_type(t, tol))
        .collect::<Result<_>>()?;
    let name = if all {
        "all".to_string()
    } else {
        types[0].to_string()
    };
    let mut tolerances = default_tolerances();
    if let Some(t) = tol {
        tolerances.insert("override".to_string(), t);
    }
    Ok(ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "verify".to_string(),
        type_name: name,
        spectrum: None,
        verification: Some(reports),
        clusters: None,
        permutations: None,
        toda: None,
        provenance: provenance(tolerances),
    })
}

/// `patterns` command: cluster reports for every exponent plus the PF-type
/// permutation analysis.
pub fn cmd_patterns(type_str: &str, tol: Option<f64>) -> Result<ReportDocument> {
    let t = SimpleType::parse(type_str)?;
    let rs = RootSystem::build(t)?;
    let table = patterns::eigen_table(&rs)?;
    let tol = tol.unwrap_or(1e-8);
    let clusters: Vec<ClusterReport> = (1..=rs.rank)
        .map(|i| patterns::cluster_report(&rs, &table, i, tol))
        .collect::<Result<_>>()?;
    let permutations = patterns::pf_type_analysis(&rs, &table)?;
    Ok(ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "patterns".to_string(),
        type_name: t.to_string(),
        spectrum: None,
        verification: None,
        clusters: Some(clusters),
        permutations: Some(permutations),
        toda: None,
        provenance: provenance(default_tolerances()),
    })
}

/// `toda` command: normal-mode table, dispersion and convergence studies.
pub fn cmd_toda(type_str: &str, mass_param: f64, grid: usize) -> Result<ReportDocument> {
    let t = SimpleType::parse(type_str)?;
    let rs = RootSystem::build(t)?;
    let la = chevalley::build_lie_algebra(&rs)?;
    let star = la.star()?;
    let data = AppositionData::build(&la, &star)?;
    let modes = toda::normal_modes(&la, &star, &data, mass_param)?;

    let mode_rows: Vec<TodaModeRow> = modes
        .iter()
        .map(|m| TodaModeRow { index: m.index, mass: m.mass, omega_rest: m.omega })
        .collect();

    // analytic dispersion residual at the rest frame, on an adapted grid
    let mut analytic: f64 = 0.0;
    for mode in &modes {
        let len2 = 2.0 * std::f64::consts::PI * 2.0 / mode.omega;
        let cfg = FieldConfig::new(grid, grid, 4.0 / grid as f64, len2 / grid as f64, mass_param);
        let res = toda::kg_residual(&la, &star, &data, mode, cfg)?;
        analytic = analytic.max(res.analytic);
    }

    let order = toda::discrete_convergence_order(&la, &star, &data, mass_param, grid.max(8), 3)?;
    // the linearization slope is grid-independent; a coarse grid keeps the
    // per-point matrix exponentials cheap for the larger algebras
    let slope_n = grid.clamp(8, 16);
    let omega = modes[rs.rank - 1].omega;
    let len2 = 2.0 * std::f64::consts::PI * 2.0 / omega;
    let cfg = FieldConfig::new(slope_n, slope_n, 0.2, len2 / slope_n as f64, mass_param);
    let slope = toda::linearization_slope(&la, &star, &data, cfg, &[1e-2, 1e-3, 1e-4])?;
    let commutator = toda::commutator_check(&la, &star, &data)?;
    let zero_field = {
        let cfg = FieldConfig::new(8, 8, 0.1, 0.1, mass_param);
        let f = toda::Field::zero(cfg, rs.rank);
        let res = toda::eom_residual(&la, &data, &f);
        res.max_h_norm.max(res.max_off_h_norm)
    };

    Ok(ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "toda".to_string(),
        type_name: t.to_string(),
        spectrum: None,
        verification: None,
        clusters: None,
        permutations: None,
        toda: Some(TodaSection {
            mass_param,
            grid,
            modes: mode_rows,
            analytic_dispersion_residual: analytic,
            discrete_convergence_order: order,
            linearization_slope: slope,
            commutator_norm: commutator,
            zero_field_residual: zero_field,
        }),
        provenance: provenance(default_tolerances()),
    })
}

/// True when every verification check in the document passes.
pub fn document_passes(doc: &ReportDocument) -> bool {
    doc.verification
        .as_ref()
        .map(|reports| reports.iter().all(|r| r.passed()))
        .unwrap_or(true)
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

pub fn render_json(doc: &ReportDocument) -> String {
    serde_json::to_string_pretty(doc).expect("report serializes")
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("# {} — {}", doc.command, doc.type_name));
    if let Some(sp) = &doc.spectrum {
        push(
            &mut out,
            format!(
                "type {}  h = {}  dim = {}  exponents {:?}",
                doc.type_name, sp.coxeter_number, sp.dimension, sp.exponents
            ),
        );
        push(
            &mut out,
            format!(
                "{:>3} {:>4} {:>12} {:>14} {:>14}  masses / signed roots",
                "i", "k", "lambda", "multiset_res", "eigvec_res"
            ),
        );
        for row in &sp.rows {
            push(
                &mut out,
                format!(
                    "{:>3} {:>4} {:>12.8} {:>14.3e} {:>14.3e}  {:?}{}",
                    row.exponent_index,
                    row.exponent,
                    row.lambda,
                    row.multiset_residual,
                    row.eigenvector_residual,
                    row.masses
                        .iter()
                        .map(|m| (m * 1e8).round() / 1e8)
                        .collect::<Vec<_>>(),
                    if row.doubled { "  (doubled: eigenspace level)" } else { "" }
                ),
            );
        }
    }
    if let Some(reports) = &doc.verification {
        for rep in reports {
            push(&mut out, format!("## {}", rep.type_name));
            for c in &rep.checks {
                push(
                    &mut out,
                    format!(
                        "[{}] {:<40} residual {:>12.3e}  tol {:>9.1e}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.residual,
                        c.tolerance
                    ),
                );
            }
            for n in &rep.notes {
                push(&mut out, format!("note: {n}"));
            }
        }
    }
    if let Some(clusters) = &doc.clusters {
        for rep in clusters {
            push(
                &mut out,
                format!(
                    "i = {} (k = {}): p = {}, q = {}, zeros at {:?}",
                    rep.exponent_index,
                    rep.exponent,
                    rep.p,
                    rep.q,
                    rep.zero_indices.iter().map(|z| z + 1).collect::<Vec<_>>()
                ),
            );
            for c in &rep.clusters {
                push(
                    &mut out,
                    format!(
                        "    vertices {:?} -> {} (residual {:.2e})",
                        c.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                        c.matched_type.as_deref().unwrap_or("unmatched"),
                        c.match_residual
                    ),
                );
            }
        }
    }
    if let Some(perm) = &doc.permutations {
        push(
            &mut out,
            format!(
                "PF-type permutations{}: group size {} (expected {}), closed: {}",
                if perm.conjectural { " (conjectural: not simply laced)" } else { "" },
                perm.group_size,
                perm.expected_group_order,
                perm.closed_under_composition
            ),
        );
        for e in &perm.entries {
            push(
                &mut out,
                format!(
                    "  k = {:>2}: multiset residual {:.2e}, sigma = {}{}",
                    e.exponent,
                    e.multiset_residual,
                    e.permutation
                        .as_ref()
                        .map(|p| format_cycles(p))
                        .unwrap_or_else(|| "-".to_string()),
                    if e.ambiguous { " (ambiguous)" } else { "" }
                ),
            );
        }
    }
    if let Some(toda) = &doc.toda {
        push(&mut out, format!("m = {}, grid = {}", toda.mass_param, toda.grid));
        for m in &toda.modes {
            push(
                &mut out,
                format!("  mode {}: mass {:.10}, rest omega {:.10}", m.index, m.mass, m.omega_rest),
            );
        }
        push(
            &mut out,
            format!(
                "analytic dispersion residual {:.3e}; discrete order {:.3}; \
                 linearization slope {:.3}; commutator {:.3e}; zero-field {:.3e}",
                toda.analytic_dispersion_residual,
                toda.discrete_convergence_order,
                toda.linearization_slope,
                toda.commutator_norm,
                toda.zero_field_residual
            ),
        );
    }
    out
}

/// Cycle notation for a permutation (1-based).
pub fn format_cycles(perm: &[usize]) -> String {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("id");
    }
    out
}

pub fn render_csv(doc: &ReportDocument) -> String {
    let mut out = String::new();
    if let Some(sp) = &doc.spectrum {
        out.push_str("exponent_index,exponent,lambda,multiset_residual,eigenvector_residual,masses\n");
        for row in &sp.rows {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{}\n",
                row.exponent_index,
                row.exponent,
                row.lambda,
                row.multiset_residual,
                row.eigenvector_residual,
                row.masses
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            ));
        }
    }
    if let Some(reports) = &doc.verification {
        out.push_str("type,check,residual,tolerance,pass\n");
        for rep in reports {
            for c in &rep.checks {
                out.push_str(&format!(
                    "{},{},{:e},{:e},{}\n",
                    rep.type_name, c.name, c.residual, c.tolerance, c.pass
                ));
            }
        }
    }
    if let Some(clusters) = &doc.clusters {
        out.push_str("exponent_index,exponent,p,q,zeros,cluster_vertices,matched_type,residual\n");
        for rep in clusters {
            for c in &rep.clusters {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{:e}\n",
                    rep.exponent_index,
                    rep.exponent,
                    rep.p,
                    rep.q,
                    rep.zero_indices
                        .iter()
                        .map(|z| (z + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                    c.vertices
                        .iter()
                        .map(|v| (v + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                    c.matched_type.as_deref().unwrap_or("unmatched"),
                    c.match_residual
                ));
            }
        }
    }
    if let Some(toda) = &doc.toda {
        out.push_str("mode,mass,omega_rest\n");
        for m in &toda.modes {
            out.push_str(&format!("{},{},{}\n", m.index, m.mass, m.omega_rest));
        }
    }
    out
}

//! Bicolored Coxeter element machinery on the reflection representation.
//!
//! The operators `c_b`, `c_w`, `c = c_b c_w` and `Â` are exact integer
//! matrices acting on simple-root coordinates, so the block identities
//! `c_b + c_w = 2I − Â` and `(2I − Â)² = c + c⁻¹ + 2I` are asserted with no
//! floating point at all. Transcendental data (eigenvector angles) enters
//! only through the eigenpair constructions.

use num_complex::Complex64;

use crate::exact::IMat;
use crate::linalg::{self, C64};
use crate::rootsys::{Bicoloring, Root, RootSystem};
use crate::{Error, Result};

/// The bicolored Coxeter element and its exact matrix relatives.
///
/// All matrices act on simple-root coordinate columns; the operator `Â`
/// defined by `Â(α_i) = Σ_j n_{ij} α_j` has coordinate matrix `Aᵗ`.
#[derive(Debug, Clone)]
pub struct CoxeterData {
    pub coloring: Bicoloring,
    /// Simple reflections `s_1 .. s_r`.
    pub reflections: Vec<IMat>,
    pub c_black: IMat,
    pub c_white: IMat,
    /// `c = c_black · c_white`.
    pub c: IMat,
    /// Coordinate matrix of `Â` (the transpose of the Cartan matrix).
    pub a_hat: IMat,
    /// Off-diagonal blocks of the Cartan matrix in bicolored ordering:
    /// `X[a][b] = A[black_a][white_b]`, `Y[b][a] = A[white_b][black_a]`.
    pub x_block: Vec<Vec<i64>>,
    pub y_block: Vec<Vec<i64>>,
    /// Multiplicative order of `c`.
    pub order: usize,
}

/// An eigenpair of the Cartan matrix bundled with the Coxeter eigenvector
/// it induces.
///
/// `x` is a unit eigenvector of `Aᵗ` for `λ = 2(1 − cos θ)`, `θ = kπ/h`;
/// `x_tilde[j] = (α_j, α_j) x_j` is the matching eigenvector of `A`; and
/// `y = e^{−iθ/2} x_w + e^{iθ/2} x_b` satisfies `c(y) = e^{2iθ} y`.
#[derive(Debug, Clone)]
pub struct CoxeterEigenpair {
    /// 1-based exponent index.
    pub exponent_index: usize,
    /// The exponent `k_i`.
    pub exponent: i64,
    /// `θ = k_i π / h`.
    pub theta: f64,
    /// `λ = 2(1 − cos θ)`.
    pub lambda: f64,
    pub x: Vec<f64>,
    pub x_tilde: Vec<f64>,
    pub y: Vec<C64>,
}

/// Build the Coxeter element for the given bicoloring, verifying the exact
/// involution and order relations.
pub fn coxeter_element(rs: &RootSystem, coloring: &Bicoloring) -> Result<CoxeterData> {
    let r = rs.rank;
    let mut reflections = Vec::with_capacity(r);
    for i in 0..r {
        let mut s = IMat::identity(r);
        for k in 0..r {
            s[(i, k)] -= rs.cartan[(k, i)];
        }
        reflections.push(s);
    }
    let product = |indices: &[usize]| -> IMat {
        indices
            .iter()
            .fold(IMat::identity(r), |acc, &i| acc.mul(&reflections[i]))
    };
    let blacks = coloring.black_indices();
    let whites = coloring.white_indices();
    let c_black = product(&blacks);
    let c_white = product(&whites);
    let c = c_black.mul(&c_white);
    let a_hat = rs.cartan.transpose();

    if !c_black.mul(&c_black).is_identity() || !c_white.mul(&c_white).is_identity() {
        return Err(Error::Numerical("c_b or c_w is not an involution".into()));
    }
    let two_i_minus_a = IMat::identity(r).scale(2).sub(&a_hat);
    if c_black.add(&c_white) != two_i_minus_a {
        return Err(Error::Numerical("c_b + c_w != 2I - Â".into()));
    }
    let order = c
        .order(2 * rs.coxeter_number as usize)
        .ok_or_else(|| Error::Numerical("Coxeter element order not found".into()))?;
    if order != rs.coxeter_number as usize {
        return Err(Error::Numerical(format!(
            "Coxeter element has order {order}, expected h = {}",
            rs.coxeter_number
        )));
    }

    let x_block = blacks
        .iter()
        .map(|&i| whites.iter().map(|&j| rs.cartan[(i, j)]).collect())
        .collect();
    let y_block = whites
        .iter()
        .map(|&j| blacks.iter().map(|&i| rs.cartan[(j, i)]).collect())
        .collect();

    Ok(CoxeterData {
        coloring: coloring.clone(),
        reflections,
        c_black,
        c_white,
        c,
        a_hat,
        x_block,
        y_block,
        order,
    })
}

/// Recover the exponents from the eigenvalue arguments of `c`.
///
/// `c` has finite order `h`, so the multiplicity of the eigenvalue
/// `exp(2πik/h)` is the trace of the spectral projector
/// `(1/h) Σ_j ζ^{-kj} c^j`; the traces of the powers of `c` are exact
/// integers, which keeps the rounding residual at machine scale.
pub fn exponents_of(cd: &CoxeterData, rs: &RootSystem) -> Result<Vec<i64>> {
    exponent_recovery(cd, rs).map(|(exponents, _)| exponents)
}

/// Worst rounding residual of the eigenvalue-argument multiplicities.
pub fn exponent_recovery_residual(cd: &CoxeterData, rs: &RootSystem) -> Result<f64> {
    exponent_recovery(cd, rs).map(|(_, residual)| residual)
}

fn exponent_recovery(cd: &CoxeterData, rs: &RootSystem) -> Result<(Vec<i64>, f64)> {
    let h = rs.coxeter_number as usize;
    let r = rs.rank;
    let mut traces = Vec::with_capacity(h);
    let mut p = IMat::identity(r);
    for _ in 0..h {
        traces.push(p.trace());
        p = p.mul(&cd.c);
    }
    if !p.is_identity() {
        return Err(Error::Numerical("c^h != identity".into()));
    }
    let mut exponents = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..h {
        let mut m = 0.0f64;
        for (j, &t) in traces.iter().enumerate() {
            m += t as f64 * (2.0 * std::f64::consts::PI * (k * j % h) as f64 / h as f64).cos();
        }
        m /= h as f64;
        let rounded = m.round();
        worst = worst.max((m - rounded).abs());
        if (m - rounded).abs() >= 1e-9 {
            return Err(Error::Numerical(format!(
                "eigenvalue multiplicity residual {:.3e} at k = {k}",
                (m - rounded).abs()
            )));
        }
        let mult = rounded as i64;
        if mult < 0 || (k == 0 && mult != 0) {
            return Err(Error::Numerical(format!(
                "impossible multiplicity {mult} at k = {k}"
            )));
        }
        for _ in 0..mult {
            exponents.push(k as i64);
        }
    }
    if exponents.len() != r {
        return Err(Error::Numerical(format!(
            "recovered {} exponents, expected {r}",
            exponents.len()
        )));
    }
    Ok((exponents, worst))
}

/// Symmetrized eigen-decomposition shared by `cartan_eigenpair` and the
/// patterns module: eigenvalues ascending, with for each one the unit
/// `Aᵗ`-eigenvector `x` (column of `D^{-1/2} U`).
pub(crate) fn symmetrized_eigen(rs: &RootSystem) -> (Vec<f64>, Vec<Vec<f64>>) {
    let r = rs.rank;
    let m: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    rs.bilinear[(i, j)] as f64 / ((rs.d[i] as f64).sqrt() * (rs.d[j] as f64).sqrt())
                })
                .collect()
        })
        .collect();
    linalg::eigh_real(&m)
}

/// The eigenpair for the `i`-th exponent (1-based). For the doubled middle
/// exponent of `D_{2n}` the two indices at `h/2` return an orthonormal pair
/// spanning the two-dimensional eigenspace.
pub fn cartan_eigenpair(
    rs: &RootSystem,
    cd: &CoxeterData,
    i: usize,
) -> Result<CoxeterEigenpair> {
    let r = rs.rank;
    assert!(i >= 1 && i <= r, "exponent index out of range");
    let h = rs.coxeter_number as f64;
    let k = rs.exponents[i - 1];
    let theta = k as f64 * std::f64::consts::PI / h;
    let lambda = 2.0 * (1.0 - theta.cos());

    let (w, u) = symmetrized_eigen(rs);
    if (w[i - 1] - lambda).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "eigenvalue {} does not match 2(1-cos({k}π/h)) = {lambda}",
            w[i - 1]
        )));
    }
    // x = D^{-1/2} u, normalized to unit length, first nonzero coordinate > 0
    let mut x: Vec<f64> = (0..r).map(|j| u[i - 1][j] / (rs.d[j] as f64).sqrt()).collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
    let max_abs = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-12 * max_abs) {
        if *first < 0.0 {
            for v in x.iter_mut() {
                *v = -*v;
            }
        }
    }
    if i == 1 && !x.iter().all(|&v| v > 1e-12 * max_abs) {
        return Err(Error::Numerical(
            "Perron-Frobenius eigenvector has a non-positive coordinate".into(),
        ));
    }

    let x_tilde: Vec<f64> = (0..r).map(|j| 2.0 * rs.d[j] as f64 * x[j]).collect();
    let y = build_y(&x, &cd.coloring, theta);

    // c(y) = e^{2iθ} y
    let cy = cd.c.apply_complex(&y);
    let phase = Complex64::from_polar(1.0, 2.0 * theta);
    let resid: f64 = cy
        .iter()
        .zip(&y)
        .map(|(a, b)| (a - phase * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if resid > 1e-9 {
        return Err(Error::Numerical(format!(
            "c(y) = e^(2iθ) y fails with residual {resid:.3e}"
        )));
    }

    Ok(CoxeterEigenpair { exponent_index: i, exponent: k, theta, lambda, x, x_tilde, y })
}

fn build_y(x: &[f64], coloring: &Bicoloring, theta: f64) -> Vec<C64> {
    let black_phase = Complex64::from_polar(1.0, theta / 2.0);
    let white_phase = Complex64::from_polar(1.0, -theta / 2.0);
    x.iter()
        .enumerate()
        .map(|(j, &v)| if coloring.eps(j) == 1 { black_phase * v } else { white_phase * v })
        .collect()
}

/// The duality twist `x'_j = ε(j) x_j`, an eigenvector for the partner
/// eigenvalue `2(1 + cos θ) = λ_{r+1−i}`. Involutive on `x`.
pub fn duality_twist(
    rs: &RootSystem,
    coloring: &Bicoloring,
    pair: &CoxeterEigenpair,
) -> CoxeterEigenpair {
    let r = rs.rank;
    let h = rs.coxeter_number;
    let exponent = h - pair.exponent;
    let theta = std::f64::consts::PI - pair.theta;
    let lambda = 2.0 * (1.0 + pair.theta.cos());
    let x: Vec<f64> = (0..r).map(|j| coloring.eps(j) as f64 * pair.x[j]).collect();
    let x_tilde: Vec<f64> = (0..r).map(|j| 2.0 * rs.d[j] as f64 * x[j]).collect();
    let y = build_y(&x, coloring, theta);
    CoxeterEigenpair {
        exponent_index: r + 1 - pair.exponent_index,
        exponent,
        theta,
        lambda,
        x,
        x_tilde,
        y,
    }
}

/// Split `x` into its black and white coordinate parts, `x = x_b + x_w`.
pub fn split_parts(pair: &CoxeterEigenpair, coloring: &Bicoloring) -> (Vec<f64>, Vec<f64>) {
    let x_b: Vec<f64> = pair
        .x
        .iter()
        .enumerate()
        .map(|(j, &v)| if coloring.eps(j) == 1 { v } else { 0.0 })
        .collect();
    let x_w: Vec<f64> = pair
        .x
        .iter()
        .enumerate()
        .map(|(j, &v)| if coloring.eps(j) == -1 { v } else { 0.0 })
        .collect();
    (x_b, x_w)
}

/// The bilinear pairing `(y, α_j)`, for checking the closed form
/// `(y, α_j) = i ε(j) e^{−iε(j)θ/2} sin θ (α_j, α_j) x_j`.
pub fn pairing_check(rs: &RootSystem, pair: &CoxeterEigenpair, j: usize) -> C64 {
    (0..rs.rank)
        .map(|k| pair.y[k] * rs.bilinear[(k, j)] as f64)
        .sum()
}

/// Right-hand side of the pairing identity, for tests and reports.
pub fn pairing_closed_form(
    rs: &RootSystem,
    coloring: &Bicoloring,
    pair: &CoxeterEigenpair,
    j: usize,
) -> C64 {
    let eps = coloring.eps(j) as f64;
    let i_unit = Complex64::new(0.0, 1.0);
    i_unit
        * eps
        * Complex64::from_polar(1.0, -eps * pair.theta / 2.0)
        * pair.theta.sin()
        * (2.0 * rs.d[j] as f64)
        * pair.x[j]
}

/// Orbits of `c` acting on the roots: exactly `r` orbits of size `h`,
/// partitioning `R`, with the roots `ε(i)α_i` in `r` distinct orbits.
pub fn orbit_decomposition(rs: &RootSystem, cd: &CoxeterData) -> Result<Vec<Vec<usize>>> {
    let n = rs.roots.len();
    // permutation induced by c on root indices
    let mut perm = Vec::with_capacity(n);
    for root in &rs.roots {
        let image = cd.c.apply(root);
        let idx = *rs
            .root_index
            .get(&image)
            .ok_or_else(|| Error::Numerical("c does not permute the roots".into()))?;
        perm.push(idx);
    }
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = Vec::new();
        let mut cur = start;
        while orbit_of[cur] == usize::MAX {
            orbit_of[cur] = id;
            orbit.push(cur);
            cur = perm[cur];
        }
        orbits.push(orbit);
    }
    let h = rs.coxeter_number as usize;
    if orbits.len() != rs.rank || orbits.iter().any(|o| o.len() != h) {
        return Err(Error::Numerical(format!(
            "expected {} orbits of size {h}, found sizes {:?}",
            rs.rank,
            orbits.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    // ε(i)α_i land in r different orbits
    let mut seen = std::collections::HashSet::new();
    for i in 0..rs.rank {
        let mut v: Root = vec![0; rs.rank];
        v[i] = cd.coloring.eps(i);
        let idx = rs.root_index[&v];
        if !seen.insert(orbit_of[idx]) {
            return Err(Error::Numerical(
                "ε(i)α_i do not land in r distinct orbits".into(),
            ));
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::SimpleType;

    fn setup(s: &str) -> (RootSystem, CoxeterData) {
        let rs = RootSystem::build(SimpleType::parse(s).unwrap()).unwrap();
        let col = rs.bicolor().unwrap();
        let cd = coxeter_element(&rs, &col).unwrap();
        (rs, cd)
    }

    #[test]
    fn a2_coxeter_element() {
        let (_, cd) = setup("A2");
        assert_eq!(cd.order, 3);
        assert_eq!(cd.c.trace(), -1);
    }

    #[test]
    fn a1_degenerate() {
        let (rs, cd) = setup("A1");
        assert_eq!(cd.order, 2);
        assert_eq!(cd.c, cd.c_black);
        assert!(cd.c_white.is_identity());
        assert_eq!(exponents_of(&cd, &rs).unwrap(), vec![1]);
    }

    #[test]
    fn exact_identities_rank_le_6() {
        for t in SimpleType::all_up_to_rank(6) {
            let rs = RootSystem::build(t).unwrap();
            let col = rs.bicolor().unwrap();
            let cd = coxeter_element(&rs, &col).unwrap();
            let two_i_minus_a = IMat::identity(rs.rank).scale(2).sub(&cd.a_hat);
            // (2I - Â)² = c + c⁻¹ + 2I, with c⁻¹ = c_w c_b
            let lhs = two_i_minus_a.mul(&two_i_minus_a);
            let c_inv = cd.c_white.mul(&cd.c_black);
            let rhs = cd.c.add(&c_inv).add(&IMat::identity(rs.rank).scale(2));
            assert_eq!(lhs, rhs, "{t}");
            assert!(cd.c.mul(&c_inv).is_identity(), "{t}");
        }
    }

    #[test]
    fn exponents_recovered() {
        for s in ["A2", "A7", "B4", "C5", "D4", "D6", "E6", "E7", "E8", "F4", "G2"] {
            let (rs, cd) = setup(s);
            assert_eq!(exponents_of(&cd, &rs).unwrap(), rs.exponents, "{s}");
        }
    }

    #[test]
    fn a2_eigenpairs() {
        let (rs, cd) = setup("A2");
        let p1 = cartan_eigenpair(&rs, &cd, 1).unwrap();
        assert!((p1.lambda - 1.0).abs() < 1e-12);
        assert!((p1.x[0] - p1.x[1]).abs() < 1e-12);
        let p2 = cartan_eigenpair(&rs, &cd, 2).unwrap();
        assert!((p2.lambda - 3.0).abs() < 1e-12);
        assert!((p2.x[0] + p2.x[1]).abs() < 1e-12);
    }

    #[test]
    fn a11_pf_is_sine_vector() {
        let (rs, cd) = setup("A11");
        let p = cartan_eigenpair(&rs, &cd, 1).unwrap();
        let scale = p.x[0] / (std::f64::consts::PI / 12.0).sin();
        for j in 0..11 {
            let expect = scale * ((j as f64 + 1.0) * std::f64::consts::PI / 12.0).sin();
            assert!((p.x[j] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn duality_twist_properties() {
        for s in ["A2", "A5", "B3", "D5", "F4", "G2"] {
            let (rs, cd) = setup(s);
            let col = &cd.coloring;
            for i in 1..=rs.rank {
                let p = cartan_eigenpair(&rs, &cd, i).unwrap();
                let tw = duality_twist(&rs, col, &p);
                // eigenvector of Aᵗ for the partner eigenvalue
                let at = rs.cartan.transpose();
                let ax = at.apply_real(&tw.x);
                let resid: f64 = ax
                    .iter()
                    .zip(&tw.x)
                    .map(|(a, b)| (a - tw.lambda * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(resid < 1e-9, "{s} i={i} resid={resid}");
                // involution and |ε(j)| = 1
                let back = duality_twist(&rs, col, &tw);
                for j in 0..rs.rank {
                    assert!((back.x[j] - p.x[j]).abs() < 1e-14);
                    assert!((tw.x[j].abs() - p.x[j].abs()).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn a2_twist_example() {
        let (rs, cd) = setup("A2");
        let p = cartan_eigenpair(&rs, &cd, 1).unwrap();
        let tw = duality_twist(&rs, &cd.coloring, &p);
        assert!((tw.lambda - 3.0).abs() < 1e-12);
        assert!((tw.x[0] + tw.x[1]).abs() < 1e-14);
    }

    #[test]
    fn split_parts_relations() {
        let (rs, cd) = setup("A2");
        let col = &cd.coloring;
        let p = cartan_eigenpair(&rs, &cd, 1).unwrap();
        let (xb, xw) = split_parts(&p, col);
        for j in 0..rs.rank {
            assert!((xb[j] + xw[j] - p.x[j]).abs() < 1e-14);
        }
        // c_b(x_b) = -x_b, c_w(x_w) = -x_w
        let cb_xb = cd.c_black.apply_real(&xb);
        let cw_xw = cd.c_white.apply_real(&xw);
        for j in 0..rs.rank {
            assert!((cb_xb[j] + xb[j]).abs() < 1e-12);
            assert!((cw_xw[j] + xw[j]).abs() < 1e-12);
        }
        // c_b(x_w) = x_b + 2cosθ x_w and c_w(x_b) = x_w + 2cosθ x_b
        let cb_xw = cd.c_black.apply_real(&xw);
        let cw_xb = cd.c_white.apply_real(&xb);
        let two_cos = 2.0 * p.theta.cos();
        for j in 0..rs.rank {
            assert!((cb_xw[j] - (xb[j] + two_cos * xw[j])).abs() < 1e-12);
            assert!((cw_xb[j] - (xw[j] + two_cos * xb[j])).abs() < 1e-12);
        }
    }

    #[test]
    fn pairing_identity_rank_le_6() {
        for t in SimpleType::all_up_to_rank(6) {
            let rs = RootSystem::build(t).unwrap();
            let col = rs.bicolor().unwrap();
            let cd = coxeter_element(&rs, &col).unwrap();
            for i in 1..=rs.rank {
                let p = cartan_eigenpair(&rs, &cd, i).unwrap();
                for j in 0..rs.rank {
                    let lhs = pairing_check(&rs, &p, j);
                    let rhs = pairing_closed_form(&rs, &col, &p, j);
                    assert!(
                        (lhs - rhs).norm() < 1e-9,
                        "{t} i={i} j={j}: {lhs} vs {rhs}"
                    );
                    if p.x[j].abs() < 1e-14 {
                        assert!(lhs.norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_partition_roots() {
        let (rs, cd) = setup("A2");
        let orbits = orbit_decomposition(&rs, &cd).unwrap();
        assert_eq!(orbits.len(), 2);
        assert!(orbits.iter().all(|o| o.len() == 3));

        let (rs, cd) = setup("G2");
        let orbits = orbit_decomposition(&rs, &cd).unwrap();
        assert_eq!(orbits.len(), 2);
        for orbit in &orbits {
            let lengths: std::collections::HashSet<i64> = orbit
                .iter()
                .map(|&idx| rs.length_sq(&rs.roots[idx]))
                .collect();
            assert_eq!(lengths.len(), 1, "orbits preserve root length");
        }

        for t in SimpleType::all_up_to_rank(8) {
            let rs = RootSystem::build(t).unwrap();
            let col = rs.bicolor().unwrap();
            let cd = coxeter_element(&rs, &col).unwrap();
            let orbits = orbit_decomposition(&rs, &cd).unwrap();
            let total: usize = orbits.iter().map(Vec::len).sum();
            assert_eq!(total, rs.roots.len(), "{t}");
        }
    }
}

//! Affine Toda field machinery at desk scale: Lagrangian density,
//! Euler–Lagrange residual through adjoint exponentials, the linearized
//! Klein–Gordon operator, plane-wave normal modes on the mass shell
//! `k² + ω² = m²μ²`, and commutativity of the linearized operators.
//!
//! The nonlinear equation is never time-integrated; the module only
//! evaluates residuals and checks the linearization.

use num_complex::Complex64;

use crate::apposition::{self, AppositionData};
use crate::chevalley::{LieAlgebra, StarStructure, Vect};
use crate::linalg::{self, CMat, C64};
use crate::{Error, Result};

/// Periodic 2-D grid with the coupling scale `m`.
#[derive(Debug, Clone, Copy)]
pub struct FieldConfig {
    pub n1: usize,
    pub n2: usize,
    pub dx1: f64,
    pub dx2: f64,
    pub mass_param: f64,
}

impl FieldConfig {
    pub fn new(n1: usize, n2: usize, dx1: f64, dx2: f64, mass_param: f64) -> FieldConfig {
        FieldConfig { n1, n2, dx1, dx2, mass_param }
    }

    pub fn len1(&self) -> f64 {
        self.n1 as f64 * self.dx1
    }

    pub fn len2(&self) -> f64 {
        self.n2 as f64 * self.dx2
    }
}

/// A field `φ: grid → 𝔥`, stored as `h`-basis coordinate vectors.
#[derive(Debug, Clone)]
pub struct Field {
    pub cfg: FieldConfig,
    /// Row-major `n1 × n2`, each entry a length-`r` coordinate vector.
    pub values: Vec<Vec<C64>>,
}

impl Field {
    pub fn zero(cfg: FieldConfig, rank: usize) -> Field {
        Field { cfg, values: vec![vec![linalg::ZERO; rank]; cfg.n1 * cfg.n2] }
    }

    pub fn from_fn(cfg: FieldConfig, rank: usize, mut f: impl FnMut(f64, f64) -> Vec<C64>) -> Field {
        let mut values = Vec::with_capacity(cfg.n1 * cfg.n2);
        for i in 0..cfg.n1 {
            for j in 0..cfg.n2 {
                let v = f(i as f64 * cfg.dx1, j as f64 * cfg.dx2);
                assert_eq!(v.len(), rank);
                values.push(v);
            }
        }
        Field { cfg, values }
    }

    pub fn at(&self, i: usize, j: usize) -> &[C64] {
        &self.values[i * self.cfg.n2 + j]
    }

    pub fn scale(&self, s: f64) -> Field {
        Field {
            cfg: self.cfg,
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|z| z * s).collect())
                .collect(),
        }
    }

    fn wrap(&self, i: i64, j: i64) -> &[C64] {
        let i = i.rem_euclid(self.cfg.n1 as i64) as usize;
        let j = j.rem_euclid(self.cfg.n2 as i64) as usize;
        self.at(i, j)
    }

    /// 5-point periodic Laplacian at a grid point.
    pub fn laplacian(&self, i: usize, j: usize) -> Vec<C64> {
        let (i, j) = (i as i64, j as i64);
        let c = self.wrap(i, j);
        let xp = self.wrap(i + 1, j);
        let xm = self.wrap(i - 1, j);
        let yp = self.wrap(i, j + 1);
        let ym = self.wrap(i, j - 1);
        let inv1 = 1.0 / (self.cfg.dx1 * self.cfg.dx1);
        let inv2 = 1.0 / (self.cfg.dx2 * self.cfg.dx2);
        (0..c.len())
            .map(|a| (xp[a] - 2.0 * c[a] + xm[a]) * inv1 + (yp[a] - 2.0 * c[a] + ym[a]) * inv2)
            .collect()
    }

    /// Central-difference gradient `(∂_1 φ, ∂_2 φ)` at a grid point.
    pub fn gradient(&self, i: usize, j: usize) -> (Vec<C64>, Vec<C64>) {
        let (i, j) = (i as i64, j as i64);
        let xp = self.wrap(i + 1, j);
        let xm = self.wrap(i - 1, j);
        let yp = self.wrap(i, j + 1);
        let ym = self.wrap(i, j - 1);
        let d1 = (0..xp.len())
            .map(|a| (xp[a] - xm[a]) / (2.0 * self.cfg.dx1))
            .collect();
        let d2 = (0..yp.len())
            .map(|a| (yp[a] - ym[a]) / (2.0 * self.cfg.dx2))
            .collect();
        (d1, d2)
    }
}

/// A plane-wave solution of the linearized equation.
#[derive(Debug, Clone)]
pub struct NormalMode {
    pub index: usize,
    /// Mass `μ_j ≥ 0` (square root of the eigenvalue of `M_e²`).
    pub mass: f64,
    /// H-orthonormal eigenvector in `𝔥`, `h`-basis coordinates.
    pub y: Vec<C64>,
    pub k: f64,
    pub omega: f64,
}

/// Full bilinear Killing pairing of two algebra elements.
fn killing_full(la: &LieAlgebra, x: &[C64], y: &[C64]) -> C64 {
    la.killing(x, y)
}

/// `Ad_{exp(φ)}(e)` via the dense matrix exponential of `ad(φ)`.
pub fn ad_exp(la: &LieAlgebra, phi: &[C64], e: &[C64]) -> Vect {
    let m = la.ad(phi);
    let em = linalg::expm(&m);
    em.matvec(e)
}

/// The Lagrangian density
/// `ℒ_e(φ) = ½ Σ_a (∂_a φ, ∂_a φ) − m² (Ad_{exp(φ)}(e), e*)`
/// at one grid point, derivatives by central differences.
pub fn lagrangian_density(
    la: &LieAlgebra,
    data: &AppositionData,
    field: &Field,
    i: usize,
    j: usize,
) -> C64 {
    let (d1, d2) = field.gradient(i, j);
    let d1v = la.cartan_element_c(&d1);
    let d2v = la.cartan_element_c(&d2);
    let kinetic = (killing_full(la, &d1v, &d1v) + killing_full(la, &d2v, &d2v)) * 0.5;
    let phi = la.cartan_element_c(field.at(i, j));
    let moved = ad_exp(la, &phi, &data.e);
    let m2 = field.cfg.mass_param * field.cfg.mass_param;
    kinetic - killing_full(la, &moved, &data.e_star) * m2
}

/// The Euler–Lagrange residual field `Δφ + m²[Ad_{exp(φ)}(e), e*]`, with the
/// part inside `𝔥` and the norm of the part outside reported separately.
pub struct EomResidual {
    /// `𝔥`-components per grid point (`h`-basis coordinates).
    pub h_component: Vec<Vec<C64>>,
    /// Norm of the component outside `𝔥`, per grid point.
    pub off_h_norm: Vec<f64>,
    pub max_h_norm: f64,
    pub max_off_h_norm: f64,
}

pub fn eom_residual(la: &LieAlgebra, data: &AppositionData, field: &Field) -> EomResidual {
    let r = la.rs.rank;
    let m2 = field.cfg.mass_param * field.cfg.mass_param;
    let mut h_component = Vec::with_capacity(field.values.len());
    let mut off_h_norm = Vec::with_capacity(field.values.len());
    let mut max_h: f64 = 0.0;
    let mut max_off: f64 = 0.0;
    for i in 0..field.cfg.n1 {
        for j in 0..field.cfg.n2 {
            let lap = field.laplacian(i, j);
            let phi = la.cartan_element_c(field.at(i, j));
            let moved = ad_exp(la, &phi, &data.e);
            let bracket = la.bracket(&moved, &data.e_star);
            let mut h_part = vec![linalg::ZERO; r];
            for a in 0..r {
                h_part[a] = lap[a] + m2 * bracket[la.cartan_basis(a)];
            }
            let off: f64 = (0..la.n_roots)
                .map(|b| (m2 * bracket[b]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let hn: f64 = h_part.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            max_h = max_h.max(hn);
            max_off = max_off.max(off);
            h_component.push(h_part);
            off_h_norm.push(off);
        }
    }
    EomResidual { h_component, off_h_norm, max_h_norm: max_h, max_off_h_norm: max_off }
}

/// The `r` normal modes of the linearized equation: masses are the square
/// roots of the eigenvalues of `M_e² = ad_e ad_{e*}` on `𝔥`, sorted
/// ascending; rest-frame wave numbers `(k, ω) = (0, m μ_j)`.
pub fn normal_modes(
    la: &LieAlgebra,
    star: &StarStructure,
    data: &AppositionData,
    mass_param: f64,
) -> Result<Vec<NormalMode>> {
    let (m_e2, off) = apposition::square_mass_operator(la, star, &data.e);
    if off > 1e-10 {
        return Err(Error::Numerical(format!(
            "square mass operator leaves 𝔥: {off:.3e}"
        )));
    }
    let (evals, vecs, _) = apposition::h_selfadjoint_eigen(la, &m_e2);
    let mut modes = Vec::with_capacity(evals.len());
    for (idx, (
        mu2,
        y,
    )) in evals.iter().zip(vecs).enumerate() {
        let mass = mu2.max(0.0).sqrt();
        // verify the eigenpair
        let my = m_e2.matvec(&y);
        let resid: f64 = my
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b * *mu2).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if resid > 1e-9 {
            return Err(Error::Numerical(format!(
                "normal mode eigenpair residual {resid:.3e}"
            )));
        }
        modes.push(NormalMode { index: idx + 1, mass, y, k: 0.0, omega: mass_param * mass });
    }
    Ok(modes)
}

/// Residuals of one plane-wave normal mode: the analytic (grid-free)
/// Klein–Gordon residual and the max-norm discrete residual.
pub struct KgResidual {
    pub analytic: f64,
    pub discrete_max: f64,
}

/// Evaluate `Δφ + m² M_e²(φ)` for the plane wave
/// `φ(x) = exp(i(k x_1 + ω x_2)) y`. Wave numbers must be commensurate
/// with the periodic grid.
pub fn kg_residual(
    la: &LieAlgebra,
    star: &StarStructure,
    data: &AppositionData,
    mode: &NormalMode,
    cfg: FieldConfig,
) -> Result<KgResidual> {
    let r = la.rs.rank;
    let turns1 = mode.k * cfg.len1() / (2.0 * std::f64::consts::PI);
    let turns2 = mode.omega * cfg.len2() / (2.0 * std::f64::consts::PI);
    if (turns1 - turns1.round()).abs() > 1e-9 || (turns2 - turns2.round()).abs() > 1e-9 {
        return Err(Error::IncommensurateWaveNumbers { k: mode.k, omega: mode.omega });
    }
    let (m_e2, _) = apposition::square_mass_operator(la, star, &data.e);
    let m2 = cfg.mass_param * cfg.mass_param;

    // analytic residual: ‖(m² M − (k² + ω²)) y‖
    let my = m_e2.matvec(&mode.y);
    let shell = mode.k * mode.k + mode.omega * mode.omega;
    let analytic: f64 = my
        .iter()
        .zip(&mode.y)
        .map(|(a, b)| (m2 * a - shell * b).norm_sqr())
        .sum::<f64>()
        .sqrt();

    // discrete residual on the periodic grid
    let field = Field::from_fn(cfg, r, |x1, x2| {
        let phase = Complex64::from_polar(1.0, mode.k * x1 + mode.omega * x2);
        mode.y.iter().map(|z| z * phase).collect()
    });
    let mut discrete_max: f64 = 0.0;
    for i in 0..cfg.n1 {
        for j in 0..cfg.n2 {
            let lap = field.laplacian(i, j);
            let mphi = m_e2.matvec(field.at(i, j));
            let resid: f64 = (0..r)
                .map(|a| (lap[a] + m2 * mphi[a]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            discrete_max = discrete_max.max(resid);
        }
    }
    Ok(KgResidual { analytic, discrete_max })
}

/// Max relative commutator norm over all pairs of mass operators; the
/// linearized operators share the Laplacian and differ only in these
/// terms, so this is the whole check.
pub fn commutator_check(
    la: &LieAlgebra,
    star: &StarStructure,
    data: &AppositionData,
) -> Result<f64> {
    let r = la.rs.rank;
    let ops: Vec<CMat> = (1..=r)
        .map(|i| apposition::mass_operator(la, star, data, i).map(|s| s.m_tilde))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for a in 0..r {
        for b in a + 1..r {
            let c = ops[a].commutator(&ops[b]).frobenius()
                / (ops[a].frobenius() * ops[b].frobenius()).max(1e-300);
            worst = worst.max(c);
        }
    }
    Ok(worst)
}

/// Fit the order of convergence of `‖𝒟_e(εφ) − ε Δ_e(φ)‖` in ε; the
/// linearization is exact to second order, so the slope is 2.
pub fn linearization_slope(
    la: &LieAlgebra,
    star: &StarStructure,
    data: &AppositionData,
    cfg: FieldConfig,
    epsilons: &[f64],
) -> Result<f64> {
    let r = la.rs.rank;
    let modes = normal_modes(la, star, data, cfg.mass_param)?;
    // a generic combination of the modes; a pure mode can have an
    // accidentally vanishing quadratic term, which would steepen the slope
    let mut y_gen = vec![linalg::ZERO; r];
    for (j, mode) in modes.iter().enumerate() {
        for (acc, v) in y_gen.iter_mut().zip(&mode.y) {
            *acc += v * (1.0 + 0.3 * j as f64);
        }
    }
    let norm = linalg::norm2(&y_gen);
    for v in y_gen.iter_mut() {
        *v /= norm;
    }
    // commensurate wave: ω adapted to the grid
    let omega_ref = modes[r - 1].omega;
    let turns = (omega_ref * cfg.len2() / (2.0 * std::f64::consts::PI)).round().max(1.0);
    let omega = 2.0 * std::f64::consts::PI * turns / cfg.len2();
    let base = Field::from_fn(cfg, r, |_, x2| {
        let phase = Complex64::from_polar(1.0, omega * x2);
        y_gen.iter().map(|z| z * phase).collect()
    });
    let (m_e2, _) = apposition::square_mass_operator(la, star, &data.e);
    let m2 = cfg.mass_param * cfg.mass_param;

    let mut norms = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let scaled = base.scale(eps);
        let nonlinear = eom_residual(la, data, &scaled);
        // linear part: Δ(εφ) + ε m² M φ, evaluated on the same grid
        let mut worst: f64 = 0.0;
        for i in 0..cfg.n1 {
            for j in 0..cfg.n2 {
                let lap = scaled.laplacian(i, j);
                let mphi = m_e2.matvec(base.at(i, j));
                let linear: Vec<C64> = (0..r)
                    .map(|a| lap[a] + eps * m2 * mphi[a])
                    .collect();
                let nl = &nonlinear.h_component[i * cfg.n2 + j];
                let mut diff: f64 = nl
                    .iter()
                    .zip(&linear)
                    .map(|(x, y)| (x - y).norm_sqr())
                    .sum::<f64>();
                // include the off-𝔥 part of the nonlinear residual
                diff += nonlinear.off_h_norm[i * cfg.n2 + j].powi(2);
                worst = worst.max(diff.sqrt());
            }
        }
        norms.push(worst);
    }
    // least-squares slope in log-log
    let n = epsilons.len() as f64;
    let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xbar).powi(2)).sum::<f64>();
    Ok(slope)
}

/// Fitted order of the discrete Klein–Gordon residual under grid
/// refinement (spacing halved per step).
pub fn discrete_convergence_order(
    la: &LieAlgebra,
    star: &StarStructure,
    data: &AppositionData,
    mass_param: f64,
    base_n: usize,
    steps: usize,
) -> Result<f64> {
    let modes = normal_modes(la, star, data, mass_param)?;
    let mode = &modes[0];
    // fix the physical box, refine the grid; adapt ω to stay commensurate
    let len1 = 4.0;
    let turns2 = 2.0f64;
    let omega = mode.omega;
    let len2 = 2.0 * std::f64::consts::PI * turns2 / omega;
    let k = 0.0;
    let mut residuals = Vec::new();
    let mut spacings = Vec::new();
    for s in 0..steps {
        let n1 = base_n << s;
        let n2 = base_n << s;
        let cfg = FieldConfig::new(n1, n2, len1 / n1 as f64, len2 / n2 as f64, mass_param);
        let m = NormalMode { k, omega, ..mode.clone() };
        let res = kg_residual(la, star, data, &m, cfg)?;
        residuals.push(res.discrete_max);
        spacings.push(len2 / n2 as f64);
    }
    let n = residuals.len() as f64;
    let xs: Vec<f64> = spacings.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xbar).powi(2)).sum::<f64>();
    Ok(slope)
}

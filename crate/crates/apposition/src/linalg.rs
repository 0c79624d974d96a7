//! Dense complex linear algebra at desk scale.
//!
//! Everything spectral in this crate is either Hermitian after a similarity
//! transform or has finite order, so a cyclic Jacobi eigensolver plus an LU
//! solve and a Padé-13 matrix exponential cover all needs. Matrices stay
//! below 248x248.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        Self::from_fn(r, c, |i, j| cols[j][i])
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = k * other.cols;
                let orow = i * other.cols;
                for j in 0..other.cols {
                    out.data[orow + j] += a * other.data[row + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = i * self.cols;
                (0..self.cols).map(|j| self.data[row + j] * v[j]).sum()
            })
            .collect()
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &CMat) -> CMat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Solve `self * X = B` by LU with partial pivoting.
    pub fn solve(&self, b: &CMat) -> CMat {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut lu = self.clone();
        let mut x = b.clone();
        for col in 0..n {
            let (piv, mag) = (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(mag > 0.0, "singular matrix in solve");
            if piv != col {
                for j in 0..n {
                    lu.data.swap(piv * n + j, col * n + j);
                }
                for j in 0..x.cols {
                    x.data.swap(piv * x.cols + j, col * x.cols + j);
                }
            }
            let inv = ONE / lu[(col, col)];
            for r in col + 1..n {
                let f = lu[(r, col)] * inv;
                if f == ZERO {
                    continue;
                }
                lu[(r, col)] = ZERO;
                for j in col + 1..n {
                    let t = f * lu[(col, j)];
                    lu[(r, j)] -= t;
                }
                for j in 0..x.cols {
                    let t = f * x[(col, j)];
                    x[(r, j)] -= t;
                }
            }
        }
        for col in (0..n).rev() {
            let inv = ONE / lu[(col, col)];
            for j in 0..x.cols {
                x[(col, j)] *= inv;
                let xv = x[(col, j)];
                for r in 0..col {
                    let t = lu[(r, col)] * xv;
                    x[(r, j)] -= t;
                }
            }
        }
        x
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi.
///
/// Returns eigenvalues sorted ascending and the unitary matrix of
/// eigenvectors as columns, so `a = v * diag(w) * v†`.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut v = CMat::identity(n);
    let scale = m.frobenius().max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let a_mag = apq.norm();
                if a_mag <= 1e-300 {
                    continue;
                }
                let phase = apq / a_mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * a_mag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (tau * tau + 1.0).sqrt())
                } else {
                    1.0 / (-tau + (tau * tau + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // column update: M <- M U
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c + miq * s * phase.conj();
                    m[(i, q)] = -mip * s * phase + miq * c;
                }
                // row update: M <- U† M
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c + mqj * s * phase;
                    m[(q, j)] = -mpj * s * phase.conj() + mqj * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s * phase.conj();
                    v[(i, q)] = -vip * s * phase + viq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let w: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let vs = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (w, vs)
}

/// Eigen-decomposition of a real symmetric matrix; real eigenvector columns.
pub fn eigh_real(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let m = CMat::from_real_rows(a);
    let (w, v) = eigh(&m);
    let cols = (0..n)
        .map(|j| {
            // rotate the column's residual phase away before taking real parts
            let col = v.column(j);
            let (kmax, _) = col
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap();
            let ph = col[kmax] / col[kmax].norm();
            col.iter().map(|z| (z / ph).re).collect::<Vec<f64>>()
        })
        .collect();
    (w, cols)
}

/// One-sided Jacobi (Hestenes) SVD: returns the singular values ascending
/// and the matching right singular vectors as columns. Small singular
/// values come out with high relative accuracy, unlike the `b† b` route.
pub fn svd_right(b: &CMat) -> (Vec<f64>, CMat) {
    let n = b.cols;
    let rows = b.rows;
    let mut u = b.clone();
    let mut v = CMat::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut g = ZERO;
                for i in 0..rows {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    app += up.norm_sqr();
                    aqq += uq.norm_sqr();
                    g += up.conj() * uq;
                }
                let g_mag = g.norm();
                if g_mag <= 1e-15 * (app * aqq).sqrt() + 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = g / g_mag;
                let tau = (aqq - app) / (2.0 * g_mag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (tau * tau + 1.0).sqrt())
                } else {
                    1.0 / (-tau + (tau * tau + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..rows {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = up * c + uq * s * phase.conj();
                    u[(i, q)] = -up * s * phase + uq * c;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c + vq * s * phase.conj();
                    v[(i, q)] = -vp * s * phase + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut svals: Vec<f64> = (0..n)
        .map(|j| (0..rows).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svals[a].total_cmp(&svals[b]));
    let vs = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    svals.sort_by(f64::total_cmp);
    (svals, vs)
}

/// Orthonormal basis of the (numerical) kernel of `b`. The cutoff is
/// `rel_tol` times the largest singular value. Also returns the full list
/// of singular values, ascending.
pub fn kernel_basis(b: &CMat, rel_tol: f64) -> (Vec<Vec<C64>>, Vec<f64>) {
    let smax = singular_values(b).into_iter().fold(0.0, f64::max);
    kernel_basis_abs(b, rel_tol * smax)
}

/// Kernel basis with an absolute singular-value cutoff.
pub fn kernel_basis_abs(b: &CMat, cutoff: f64) -> (Vec<Vec<C64>>, Vec<f64>) {
    let (svals, v) = svd_right(b);
    let mut cols = Vec::new();
    for (j, s) in svals.iter().enumerate() {
        if *s <= cutoff {
            cols.push(v.column(j));
        }
    }
    (cols, svals)
}

/// Singular values of `b`, ascending.
pub fn singular_values(b: &CMat) -> Vec<f64> {
    svd_right(b).0
}

/// Modified Gram–Schmidt with one re-orthogonalization pass; drops columns
/// with norm below `drop_tol` relative to the original.
pub fn orthonormalize(cols: &[Vec<C64>], drop_tol: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for c in cols {
        let scale = norm2(c).max(1e-300);
        let mut v = c.clone();
        for _ in 0..2 {
            for q in &out {
                let coeff = inner(&v, q);
                axpy(&mut v, -coeff, q);
            }
        }
        let n = norm2(&v);
        if n > drop_tol * scale {
            let inv = C64::new(1.0 / n, 0.0);
            for z in v.iter_mut() {
                *z *= inv;
            }
            out.push(v);
        }
    }
    out
}

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases of equal dimension, through the sine formulation
/// `sin θ_max = σ_max((I − Q₁Q₁†) Q₂)`, which keeps small angles accurate.
pub fn max_principal_angle(q1: &[Vec<C64>], q2: &[Vec<C64>]) -> f64 {
    assert_eq!(q1.len(), q2.len());
    if q1.is_empty() {
        return 0.0;
    }
    let n = q1[0].len();
    let k = q1.len();
    let mut residual = CMat::zeros(n, k);
    for (j, col) in q2.iter().enumerate() {
        let mut r = col.clone();
        for basis in q1 {
            let coeff = inner(&r, basis);
            axpy(&mut r, -coeff, basis);
        }
        for i in 0..n {
            residual[(i, j)] = r[i];
        }
    }
    let smax = singular_values(&residual)
        .into_iter()
        .fold(0.0, f64::max);
    smax.clamp(0.0, 1.0).asin()
}

/// Matrix exponential by scaling-and-squaring with the Padé(13)
/// approximant (theta_13 = 5.37 scaling threshold).
pub fn expm(a: &CMat) -> CMat {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let norm = a.one_norm();
    let theta13 = 5.371920351148152;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as u32
    } else {
        0
    };
    let a1 = a.scale(C64::new(1.0 / (1u64 << s) as f64, 0.0));
    let b: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let id = CMat::identity(n);
    let a2 = a1.mul(&a1);
    let a4 = a2.mul(&a2);
    let a6 = a2.mul(&a4);
    let r = |x: f64| C64::new(x, 0.0);
    let u_inner = a6
        .scale(r(b[13]))
        .add(&a4.scale(r(b[11])))
        .add(&a2.scale(r(b[9])));
    let u_poly = a6
        .mul(&u_inner)
        .add(&a6.scale(r(b[7])))
        .add(&a4.scale(r(b[5])))
        .add(&a2.scale(r(b[3])))
        .add(&id.scale(r(b[1])));
    let u = a1.mul(&u_poly);
    let v_inner = a6
        .scale(r(b[12]))
        .add(&a4.scale(r(b[10])))
        .add(&a2.scale(r(b[8])));
    let v = a6
        .mul(&v_inner)
        .add(&a6.scale(r(b[6])))
        .add(&a4.scale(r(b[4])))
        .add(&a2.scale(r(b[2])))
        .add(&id.scale(r(b[0])));
    let mut e = v.sub(&u).solve(&v.add(&u));
    for _ in 0..s {
        e = e.mul(&e);
    }
    e
}

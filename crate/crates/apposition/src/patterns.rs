//! Factorization patterns in Cartan-matrix eigenvectors: the eigen table
//! computed directly from the Cartan matrix (the oracle independent of the
//! Lie-algebra mass pipeline), Perron–Frobenius vectors, gcd-driven zero
//! clusters with subsystem matches, and the PF-type permutation group.

use serde::{Deserialize, Serialize};

use crate::coxeter;
use crate::rootsys::{Family, RootSystem, SimpleType};
use crate::{Error, Result};

/// One eigenvector row of the table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenEntry {
    /// 1-based exponent index.
    pub exponent_index: usize,
    pub exponent: i64,
    pub lambda: f64,
    /// Normalized eigenvector of `A`: unit length, first nonzero
    /// coordinate positive.
    pub vector: Vec<f64>,
    /// Coordinate-wise absolute values.
    pub abs_vector: Vec<f64>,
    /// True for the doubled middle exponent of `D_{2n}`, where the two
    /// rows form an orthonormal basis of the eigenspace.
    pub doubled: bool,
}

/// Eigen-decomposition of the Cartan matrix, matched to the exponents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenTable {
    pub type_name: String,
    pub entries: Vec<EigenEntry>,
}

/// Exact eigen table of the Cartan matrix `A`, eigenvalues matched to
/// `λ_i = 2(1 − cos(k_i π/h))` by nearest value.
pub fn eigen_table(rs: &RootSystem) -> Result<EigenTable> {
    let r = rs.rank;
    let h = rs.coxeter_number as f64;
    let (w, u) = coxeter::symmetrized_eigen(rs);
    let mut entries = Vec::with_capacity(r);
    for i in 1..=r {
        let k = rs.exponents[i - 1];
        let lambda = 2.0 * (1.0 - (k as f64 * std::f64::consts::PI / h).cos());
        if (w[i - 1] - lambda).abs() > 1e-9 {
            return Err(Error::Numerical(format!(
                "eigenvalue {} does not match 2(1-cos({k}π/h))",
                w[i - 1]
            )));
        }
        // A-eigenvector: D^{1/2} u, unit, first nonzero coordinate positive
        let mut v: Vec<f64> = (0..r).map(|j| (rs.d[j] as f64).sqrt() * u[i - 1][j]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        let max_abs = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * max_abs) {
            if *first < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
        }
        let abs_vector: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        entries.push(EigenEntry {
            exponent_index: i,
            exponent: k,
            lambda,
            vector: v,
            abs_vector,
            doubled: crate::apposition::is_doubled(&rs.exponents, i),
        });
    }
    Ok(EigenTable { type_name: rs.simple_type.to_string(), entries })
}

/// The Perron–Frobenius vector: the everywhere-positive unit eigenvector
/// of `A` for the smallest eigenvalue.
pub fn pf_vector(rs: &RootSystem) -> Result<Vec<f64>> {
    let table = eigen_table(rs)?;
    let v = table.entries[0].vector.clone();
    let max_abs = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if !v.iter().all(|&x| x > 1e-12 * max_abs) {
        return Err(Error::Numerical(
            "Perron-Frobenius vector has a non-positive coordinate".into(),
        ));
    }
    Ok(v)
}

/// A connected component of the Dynkin subgraph induced on the nonzero
/// support of an eigenvector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cluster {
    /// 0-based Dynkin vertices, ascending.
    pub vertices: Vec<usize>,
    /// `|μ_j|` on those vertices.
    pub values: Vec<f64>,
    /// The simple type whose PF vector matches (rank = cluster size,
    /// Coxeter number `q`), when one does.
    pub matched_type: Option<String>,
    pub match_residual: f64,
}

/// Zero pattern and cluster decomposition of one Cartan eigenvector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterReport {
    pub exponent_index: usize,
    pub exponent: i64,
    /// `p = gcd(k_i, h)`.
    pub p: i64,
    /// `q = h / p`, the Coxeter number of the matched subsystems.
    pub q: i64,
    pub zero_indices: Vec<usize>,
    pub clusters: Vec<Cluster>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// All simple types with the given rank and Coxeter number.
fn candidates(rank: usize, q: i64) -> Vec<SimpleType> {
    let mut out = Vec::new();
    let mut push = |family, hval: i64| {
        if hval == q {
            if let Ok(t) = SimpleType::new(family, rank) {
                out.push(t);
            }
        }
    };
    push(Family::A, rank as i64 + 1);
    push(Family::B, 2 * rank as i64);
    push(Family::C, 2 * rank as i64);
    push(Family::D, 2 * rank as i64 - 2);
    if rank == 6 {
        push(Family::E, 12);
    }
    if rank == 7 {
        push(Family::E, 18);
    }
    if rank == 8 {
        push(Family::E, 30);
    }
    if rank == 4 {
        push(Family::F, 12);
    }
    if rank == 2 {
        push(Family::G, 6);
    }
    out
}

/// Zero pattern, clusters, and PF subsystem matches for eigenvector `i`
/// (1-based). `tol` is relative to the largest coordinate.
pub fn cluster_report(
    rs: &RootSystem,
    table: &EigenTable,
    i: usize,
    tol: f64,
) -> Result<ClusterReport> {
    let entry = &table.entries[i - 1];
    let r = rs.rank;
    let h = rs.coxeter_number;
    let p = gcd(entry.exponent, h);
    let q = h / p;
    let max_abs = entry.abs_vector.iter().cloned().fold(0.0, f64::max);
    let zero_indices: Vec<usize> =
        (0..r).filter(|&j| entry.abs_vector[j] <= tol * max_abs).collect();
    let support: Vec<usize> =
        (0..r).filter(|&j| entry.abs_vector[j] > tol * max_abs).collect();

    // connected components of the induced Dynkin subgraph
    let mut seen = vec![false; r];
    let mut clusters = Vec::new();
    for &start in &support {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for w in rs.neighbors(v) {
                if !seen[w] && support.contains(&w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        let values: Vec<f64> = comp.iter().map(|&j| entry.abs_vector[j]).collect();

        // match against PF vectors of simple types with Coxeter number q
        let mut matched_type = None;
        let mut best_resid = f64::INFINITY;
        for cand in candidates(comp.len(), q) {
            let cand_rs = RootSystem::build(cand)?;
            let pf = pf_vector(&cand_rs)?;
            let mut a = values.clone();
            a.sort_by(f64::total_cmp);
            let mut b = pf.clone();
            b.sort_by(f64::total_cmp);
            let scale: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>()
                / b.iter().map(|y| y * y).sum::<f64>();
            let resid = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - scale * y).powi(2))
                .sum::<f64>()
                .sqrt()
                / a.iter().map(|x| x * x).sum::<f64>().sqrt();
            if resid < best_resid {
                best_resid = resid;
                if resid <= 1e-6 {
                    matched_type = Some(cand.to_string());
                }
            }
        }
        clusters.push(Cluster {
            vertices: comp,
            values,
            matched_type,
            match_residual: best_resid,
        });
    }
    clusters.sort_by_key(|c| c.vertices[0]);
    Ok(ClusterReport {
        exponent_index: i,
        exponent: entry.exponent,
        p,
        q,
        zero_indices,
        clusters,
    })
}

/// One PF-type eigenvector: its multiset agreement with the PF vector and
/// the permutation relating them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermEntry {
    pub exponent_index: usize,
    pub exponent: i64,
    /// Multiset residual of |μ⁽ⁱ⁾| against |μ⁽¹⁾|.
    pub multiset_residual: f64,
    /// σ with `μ̃⁽ⁱ⁾_j = μ̃⁽¹⁾_{σ(j)}` (0-based), canonical representative
    /// when values repeat.
    pub permutation: Option<Vec<usize>>,
    /// True when repeated values make σ non-unique.
    pub ambiguous: bool,
}

/// The permutations carrying the PF vector onto the other PF-type
/// eigenvectors, with their group structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermutationReport {
    pub type_name: String,
    pub simply_laced: bool,
    /// Set for non-simply-laced types, where the factorization pattern is
    /// conjectural.
    pub conjectural: bool,
    pub entries: Vec<PermEntry>,
    /// Distinct canonical permutations.
    pub group_size: usize,
    /// Whether the canonical permutations are closed under composition.
    pub closed_under_composition: bool,
    /// φ(h)/2.
    pub expected_group_order: usize,
}

fn euler_phi(n: i64) -> i64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// PF-type analysis: for every exponent coprime to `h`, the absolute
/// eigenvector is a permutation of the PF vector.
pub fn pf_type_analysis(rs: &RootSystem, table: &EigenTable) -> Result<PermutationReport> {
    let r = rs.rank;
    let h = rs.coxeter_number;
    let pf = &table.entries[0].abs_vector;
    let value_tol = 1e-8;

    let mut entries = Vec::new();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for entry in &table.entries {
        if gcd(entry.exponent, h) != 1 {
            continue;
        }
        let cur = &entry.abs_vector;
        let mut a = cur.clone();
        a.sort_by(f64::total_cmp);
        let mut b = pf.clone();
        b.sort_by(f64::total_cmp);
        let multiset_residual = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt();

        // all candidate images per coordinate
        let mut ambiguous = false;
        let mut taken = vec![false; r];
        let mut sigma = Vec::with_capacity(r);
        let mut ok = true;
        for j in 0..r {
            let matches: Vec<usize> = (0..r)
                .filter(|&m| (pf[m] - cur[j]).abs() <= value_tol)
                .collect();
            if matches.len() > 1 {
                ambiguous = true;
            }
            // canonical representative: smallest unused matching index
            match matches.iter().find(|&&m| !taken[m]) {
                Some(&m) => {
                    taken[m] = true;
                    sigma.push(m);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let permutation = if ok { Some(sigma) } else { None };
        if let Some(s) = &permutation {
            perms.push(s.clone());
        }
        entries.push(PermEntry {
            exponent_index: entry.exponent_index,
            exponent: entry.exponent,
            multiset_residual,
            permutation,
            ambiguous,
        });
    }

    // group structure of the canonical representatives
    let mut distinct: Vec<Vec<usize>> = Vec::new();
    for s in &perms {
        if !distinct.contains(s) {
            distinct.push(s.clone());
        }
    }
    let mut closed = true;
    for a in &distinct {
        for b in &distinct {
            let comp: Vec<usize> = (0..r).map(|j| a[b[j]]).collect();
            if !distinct.contains(&comp) {
                closed = false;
            }
        }
    }

    Ok(PermutationReport {
        type_name: rs.simple_type.to_string(),
        simply_laced: rs.simple_type.is_simply_laced(),
        conjectural: !rs.simple_type.is_simply_laced(),
        entries,
        group_size: distinct.len(),
        closed_under_composition: closed,
        expected_group_order: (euler_phi(h) / 2).max(1) as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::build(SimpleType::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn a2_eigen_table() {
        let rs = rs("A2");
        let table = eigen_table(&rs).unwrap();
        assert!((table.entries[0].lambda - 1.0).abs() < 1e-12);
        assert!((table.entries[1].lambda - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pf_vectors_sine_formula() {
        // A_{m-1}: PF vector ∝ (sin(jπ/m))
        for m in 3..=12i64 {
            let rs = RootSystem::build(SimpleType::new(Family::A, (m - 1) as usize).unwrap())
                .unwrap();
            let pf = pf_vector(&rs).unwrap();
            let scale = pf[0] / (std::f64::consts::PI / m as f64).sin();
            for (j, &v) in pf.iter().enumerate() {
                let expect = scale * ((j as f64 + 1.0) * std::f64::consts::PI / m as f64).sin();
                assert!((v - expect).abs() < 1e-10, "m={m} j={j}");
            }
        }
    }

    #[test]
    fn a3_pf_values() {
        let pf = pf_vector(&rs("A3")).unwrap();
        let s = pf[1];
        assert!((pf[0] / s - (2.0f64).sqrt() / 2.0).abs() < 1e-12);
        assert!((pf[2] / s - (2.0f64).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn e8_pf_closed_form() {
        let rs = rs("E8");
        let pf = pf_vector(&rs).unwrap();
        let mu = 2.0 * (std::f64::consts::PI / 30.0).cos();
        let closed = [
            1.0,
            (mu * mu - 1.0) / mu,
            mu,
            mu * mu - 1.0,
            (mu.powi(4) - 3.0 * mu * mu + 1.0) / mu,
            mu.powi(4) - 4.0 * mu * mu + 2.0,
            (mu.powi(6) - 5.0 * mu.powi(4) + 5.0 * mu * mu - 1.0) / mu,
            mu.powi(6) - 6.0 * mu.powi(4) + 9.0 * mu * mu - 3.0,
        ];
        let norm = closed.iter().map(|x| x * x).sum::<f64>().sqrt();
        for j in 0..8 {
            assert!((pf[j] - closed[j] / norm).abs() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn sl12_cluster_reports() {
        let rs = rs("A11");
        let table = eigen_table(&rs).unwrap();
        // i = 2: zero at coordinate 6 (1-based), clusters 1-5 and 7-11 match A5
        let rep = cluster_report(&rs, &table, 2, 1e-8).unwrap();
        assert_eq!(rep.zero_indices, vec![5]);
        assert_eq!(rep.clusters.len(), 2);
        for c in &rep.clusters {
            assert_eq!(c.matched_type.as_deref(), Some("A5"));
        }
        // i = 6: zeros at 2,4,6,8,10 (1-based), six A1 clusters
        let rep = cluster_report(&rs, &table, 6, 1e-8).unwrap();
        assert_eq!(rep.zero_indices, vec![1, 3, 5, 7, 9]);
        assert_eq!(rep.clusters.len(), 6);
        for c in &rep.clusters {
            assert_eq!(c.matched_type.as_deref(), Some("A1"));
        }
        // for type A: #zeros = p - 1
        for i in 1..=11 {
            let rep = cluster_report(&rs, &table, i, 1e-8).unwrap();
            assert_eq!(rep.zero_indices.len() as i64, rep.p - 1, "i={i}");
        }
    }

    #[test]
    fn pf_whole_diagram_cluster() {
        for s in ["A4", "D5", "E6", "G2"] {
            let rs = rs(s);
            let table = eigen_table(&rs).unwrap();
            let rep = cluster_report(&rs, &table, 1, 1e-8).unwrap();
            assert!(rep.zero_indices.is_empty(), "{s}");
            assert_eq!(rep.clusters.len(), 1, "{s}");
            assert_eq!(rep.clusters[0].matched_type.as_deref(), Some(s), "{s}");
        }
    }

    #[test]
    fn sl12_fifth_eigenvector_permutation() {
        let rs = rs("A11");
        let table = eigen_table(&rs).unwrap();
        // μ̃⁽⁵⁾ = v_PF(12)_σ with σ = (1 5)(7 11), 1-based
        let entry = &table.entries[4];
        let pf = &table.entries[0].abs_vector;
        let mut sigma: Vec<usize> = (0..11).collect();
        sigma.swap(0, 4);
        sigma.swap(6, 10);
        for j in 0..11 {
            assert!(
                (entry.abs_vector[j] - pf[sigma[j]]).abs() < 1e-8,
                "coordinate {j}"
            );
        }
    }

    #[test]
    fn sl12_lowest_eigenvalue() {
        let rs = rs("A11");
        let table = eigen_table(&rs).unwrap();
        let expect = 2.0 - 2.0 * (std::f64::consts::PI / 12.0).cos();
        assert!((table.entries[0].lambda - expect).abs() < 1e-14);
    }

    #[test]
    fn e8_permutation_group() {
        let rs = rs("E8");
        let table = eigen_table(&rs).unwrap();
        let report = pf_type_analysis(&rs, &table).unwrap();
        // all eight exponents are coprime to 30
        assert_eq!(report.entries.len(), 8);
        // i = 1 carries the identity permutation
        let id: Vec<usize> = (0..8).collect();
        assert_eq!(report.entries[0].permutation.as_ref().unwrap(), &id);
        assert_eq!(report.expected_group_order, 4);
        assert_eq!(report.group_size, 4);
        assert!(report.closed_under_composition);
        // σ for exponent 7 is (1 7 4 2)(3 6 5 8) in 1-based cycles
        let sigma = report.entries[1].permutation.as_ref().unwrap();
        let expected_1based = [7usize, 1, 6, 2, 8, 5, 4, 3];
        let expected: Vec<usize> = expected_1based.iter().map(|x| x - 1).collect();
        assert_eq!(sigma, &expected);
        // σ² gives exponent 11, σ³ gives exponent 13
        let comp = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
            (0..8).map(|j| a[b[j]]).collect()
        };
        let sigma2 = comp(sigma, sigma);
        let sigma3 = comp(&sigma2, sigma);
        assert_eq!(report.entries[2].permutation.as_ref().unwrap(), &sigma2);
        assert_eq!(report.entries[3].permutation.as_ref().unwrap(), &sigma3);
    }

    #[test]
    fn twin_abs_vectors() {
        for s in ["A4", "B4", "E6", "F4", "G2"] {
            let rs = rs(s);
            let table = eigen_table(&rs).unwrap();
            let r = rs.rank;
            for i in 1..=r {
                let partner = r + 1 - i;
                if table.entries[i - 1].doubled {
                    continue;
                }
                for j in 0..r {
                    let a = table.entries[i - 1].abs_vector[j];
                    let b = table.entries[partner - 1].abs_vector[j];
                    assert!((a - b).abs() < 1e-9, "{s} i={i} j={j}");
                }
            }
        }
    }
}

//! Chevalley-basis construction of the Lie algebra: integer structure
//! constants from extraspecial pairs, the Killing form as the literal trace
//! form of the adjoint representation, the Weyl normalization
//! `κ(e_α, e_{−α}) = 1`, the compact-form involution `*` and the positive
//! Hermitian form `H(x, y) = κ(x, y*)`.
//!
//! Two layers. The integer layer carries `[e_α, e_β] = N_{αβ} e_{α+β}` with
//! `|N_{αβ}| = p+1` and `N_{−α,−β} = −N_{αβ}`, exact over `i64`; sign choices
//! are fixed by the extraspecial pairs in the deterministic root order, and
//! the remaining constants follow from the cyclic relation
//! `N_{ξη}/(ζ,ζ) = N_{ηζ}/(ξ,ξ) = N_{ζξ}/(η,η)` for `ξ+η+ζ = 0` together
//! with one Jacobi identity per special pair. The normalized layer rescales
//! `e_α ↦ e_α / √κ(e_α, e_{−α})`, after which the cyclic-element identities
//! downstream hold on the nose.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::exact::{big, QMat};
use crate::linalg::{self, CMat, C64};
use crate::rootsys::{Root, RootSystem, SimpleType};
use crate::{Error, Result};

/// Cache schema version; bump to invalidate stored structure constants.
pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the structure-constant cache directory.
pub const CACHE_DIR_ENV: &str = "APPOSITION_CACHE_DIR";

/// Integer Chevalley layer: exact structure constants and Killing data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChevalleyBasis {
    pub schema_version: u32,
    pub type_name: String,
    /// Roots in the deterministic order, for cache validation.
    pub roots: Vec<Root>,
    /// `N_{αβ}` for every ordered root pair with `α + β ∈ R`, keyed by root
    /// indices, flattened as `(a, b, n)` triples sorted by key.
    pub n_entries: Vec<(usize, usize, i64)>,
    /// `κ(e_α, e_{−α})` per root index (trace form, integer).
    pub kappa: Vec<i64>,
    /// Coefficients of `α^∨` over the simple coroots, per root index.
    pub coroot: Vec<Vec<i64>>,
    /// `κ(α_i^∨, α_j^∨)`.
    pub killing_h_int: Vec<Vec<i64>>,
}

/// The Lie algebra in the normalized Weyl basis.
///
/// Basis order: one `e_α` per root, in root order, then `h_1 .. h_r` with
/// `h_j = [e_{α_j}, e_{−α_j}]`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    pub dim: usize,
    pub n_roots: usize,
    pub chevalley: ChevalleyBasis,
    /// Sparse brackets of basis pairs, normalized layer: entry `(i, j)`
    /// holds the expansion of `[b_i, b_j]`.
    brackets: Vec<Vec<(usize, f64)>>,
    /// Integer-layer brackets in the basis `e_α .. α_k^∨`.
    int_brackets: Vec<Vec<(usize, i64)>>,
    /// Killing Gram on `h_1 .. h_r` (normalized layer).
    pub killing_h: Vec<Vec<f64>>,
    /// Full Killing Gram on the normalized basis.
    pub killing_gram: CMat,
    /// √κ_α scaling factors per root index.
    pub scale: Vec<f64>,
}

/// The compact-form involution and the Hermitian form it induces.
///
/// `*` maps `Σ x_a b_a` to `Σ conj(x_a) b_{perm(a)}`: an antilinear
/// involution with `e_α^* = e_{−α}` and `h_j^* = h_j`.
#[derive(Debug, Clone)]
pub struct StarStructure {
    pub star_perm: Vec<usize>,
    /// Gram matrix of `H(x, y) = κ(x, y*)` on the basis.
    pub hermitian_gram: CMat,
}

impl StarStructure {
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![linalg::ZERO; x.len()];
        for (a, &xa) in x.iter().enumerate() {
            out[self.star_perm[a]] = xa.conj();
        }
        out
    }
}

/// Algebra elements are complex coordinate vectors over the basis.
pub type Vect = Vec<C64>;

// ---------------------------------------------------------------------------
// integer layer
// ---------------------------------------------------------------------------

struct IntLayer<'a> {
    rs: &'a RootSystem,
    /// structure constants for root pairs, keyed by (root index, root index)
    n_table: HashMap<(usize, usize), i64>,
}

impl<'a> IntLayer<'a> {
    fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let ra = &self.rs.roots[a];
        let rb = &self.rs.roots[b];
        let sum: Root = ra.iter().zip(rb).map(|(x, y)| x + y).collect();
        self.rs.root_index.get(&sum).copied()
    }

    fn neg_index(&self, a: usize) -> usize {
        let neg: Root = self.rs.roots[a].iter().map(|x| -x).collect();
        self.rs.root_index[&neg]
    }

    fn len_sq(&self, a: usize) -> i64 {
        self.rs.length_sq(&self.rs.roots[a])
    }

    fn is_positive(&self, a: usize) -> bool {
        self.rs.heights[a] > 0
    }

    /// Down-string length: max p with β − pα ∈ R.
    fn string_down(&self, alpha: usize, beta: usize) -> i64 {
        let a = &self.rs.roots[alpha];
        let mut cur = self.rs.roots[beta].clone();
        let mut p = 0;
        loop {
            for (c, av) in cur.iter_mut().zip(a) {
                *c -= av;
            }
            if cur.iter().all(|&c| c == 0) || !self.rs.root_index.contains_key(&cur) {
                return p;
            }
            p += 1;
        }
    }

    /// `N_{ab}` for any root pair whose sum is a root, reducing mixed-sign
    /// pairs to the positive table through the cyclic relation and
    /// `N_{−α,−β} = −N_{αβ}`.
    fn n_of(&self, a: usize, b: usize) -> i64 {
        if let Some(&n) = self.n_table.get(&(a, b)) {
            return n;
        }
        let pa = self.is_positive(a);
        let pb = self.is_positive(b);
        let n = if !pa && !pb {
            -self.n_of(self.neg_index(a), self.neg_index(b))
        } else if pa && !pb {
            let beta = self.neg_index(b);
            let sum = self.sum_index(a, b).expect("sum must be a root");
            if self.is_positive(sum) {
                // a = β + δ with δ = a − β positive:
                // N_{a,−β} = −(δ,δ)/(a,a) N_{β,δ}
                let delta = sum;
                exact_div(
                    -self.len_sq(delta) * self.n_pos(beta, delta),
                    self.len_sq(a),
                )
            } else {
                // β = δ' + a with δ' = β − a positive:
                // N_{a,−β} = (δ',δ')/(β,β) N_{δ',a}
                let delta = self.neg_index(sum);
                exact_div(
                    self.len_sq(delta) * self.n_pos(delta, a),
                    self.len_sq(beta),
                )
            }
        } else if !pa && pb {
            -self.n_of(b, a)
        } else {
            panic!("positive pair ({a},{b}) missing from table");
        };
        n
    }

    fn n_pos(&self, a: usize, b: usize) -> i64 {
        *self
            .n_table
            .get(&(a, b))
            .unwrap_or_else(|| panic!("positive pair ({a},{b}) not yet computed"))
    }
}

fn exact_div(n: i64, d: i64) -> i64 {
    assert!(d != 0 && n % d == 0, "non-integral structure constant {n}/{d}");
    n / d
}

/// Compute the integer Chevalley layer for a root system.
fn build_chevalley(rs: &RootSystem) -> ChevalleyBasis {
    let mut layer = IntLayer { rs, n_table: HashMap::new() };
    let positives = rs.positive_root_indices();

    // special pairs, processed by increasing sum in the root order
    for &gamma in &positives {
        if rs.heights[gamma] == 1 {
            continue;
        }
        // extraspecial pair: minimal first component
        let mut extraspecial = None;
        for &alpha in &positives {
            if alpha >= gamma {
                break;
            }
            let beta_coord: Root = rs.roots[gamma]
                .iter()
                .zip(&rs.roots[alpha])
                .map(|(g, a)| g - a)
                .collect();
            if let Some(&beta) = rs.root_index.get(&beta_coord) {
                if layer.is_positive(beta) && alpha < beta {
                    extraspecial = Some((alpha, beta));
                    break;
                }
            }
        }
        let (a1, b1) = extraspecial.expect("non-simple positive root has a special pair");
        let n_extra = layer.string_down(a1, b1) + 1;
        layer.n_table.insert((a1, b1), n_extra);
        layer.n_table.insert((b1, a1), -n_extra);

        // remaining special pairs for this sum
        for &alpha in &positives {
            if alpha >= gamma {
                break;
            }
            if alpha == a1 {
                continue;
            }
            let beta_coord: Root = rs.roots[gamma]
                .iter()
                .zip(&rs.roots[alpha])
                .map(|(g, a)| g - a)
                .collect();
            let Some(&beta) = rs.root_index.get(&beta_coord) else {
                continue;
            };
            if !layer.is_positive(beta) || alpha >= beta {
                continue;
            }
            // one Jacobi identity on (e_{α₁}, e_{β₁}, e_{−β}) determines
            // N_{γ,−β}, and the cyclic relation turns it into N_{α,β}.
            let xi: Root = rs.roots[alpha]
                .iter()
                .zip(&rs.roots[a1])
                .map(|(a, x)| a - x)
                .collect();
            let eta: Root = rs.roots[beta]
                .iter()
                .zip(&rs.roots[a1])
                .map(|(b, x)| b - x)
                .collect();
            let neg_beta = layer.neg_index(beta);
            let mut acc = 0i64;
            if let Some(&xi_idx) = rs.root_index.get(&xi) {
                acc += layer.n_of(b1, neg_beta) * layer.n_pos(xi_idx, a1);
            }
            if let Some(&eta_idx) = rs.root_index.get(&eta) {
                let neg_eta = layer.neg_index(eta_idx);
                acc += layer.n_of(neg_beta, a1) * layer.n_of(neg_eta, b1);
            }
            let n_gamma_negbeta = exact_div(-acc, n_extra);
            let n = exact_div(layer.len_sq(gamma) * n_gamma_negbeta, layer.len_sq(alpha));
            layer.n_table.insert((alpha, beta), n);
            layer.n_table.insert((beta, alpha), -n);
        }
    }

    // close the table over every root pair whose sum is a root
    let n_roots = rs.roots.len();
    let mut all: Vec<(usize, usize, i64)> = Vec::new();
    for a in 0..n_roots {
        for b in 0..n_roots {
            if layer.sum_index(a, b).is_some() {
                all.push((a, b, layer.n_of(a, b)));
            }
        }
    }
    let n_table: HashMap<(usize, usize), i64> =
        all.iter().map(|&(a, b, n)| ((a, b), n)).collect();
    layer.n_table = n_table;

    // coroot coefficients: α^∨ = Σ_k m_k d_k / d_α · α_k^∨
    let coroot: Vec<Vec<i64>> = rs
        .roots
        .iter()
        .map(|root| {
            let d_alpha = rs.length_sq(root) / 2;
            (0..rs.rank)
                .map(|k| exact_div(root[k] * rs.d[k], d_alpha))
                .collect()
        })
        .collect();

    // integer-layer sparse brackets over the basis (e_α .., α_k^∨ ..)
    let dim = n_roots + rs.rank;
    let int_brackets = build_int_brackets(rs, &layer.n_table, &coroot);

    // Killing form as the literal trace of ad∘ad
    let trace_pair = |a: usize, b: usize| -> i64 {
        let mut tr = 0i64;
        for c in 0..dim {
            for &(mid, n1) in &int_brackets[b * dim + c] {
                for &(end, n2) in &int_brackets[a * dim + mid] {
                    if end == c {
                        tr += n1 * n2;
                    }
                }
            }
        }
        tr
    };
    let kappa: Vec<i64> = (0..n_roots)
        .map(|a| {
            let neg: Root = rs.roots[a].iter().map(|x| -x).collect();
            trace_pair(a, rs.root_index[&neg])
        })
        .collect();
    let killing_h_int: Vec<Vec<i64>> = (0..rs.rank)
        .map(|i| (0..rs.rank).map(|j| trace_pair(n_roots + i, n_roots + j)).collect())
        .collect();

    let mut n_entries = all;
    n_entries.sort_unstable();

    ChevalleyBasis {
        schema_version: CACHE_SCHEMA_VERSION,
        type_name: rs.simple_type.to_string(),
        roots: rs.roots.clone(),
        n_entries,
        kappa,
        coroot,
        killing_h_int,
    }
}

/// Sparse brackets of the integer layer, basis `e_α (root order) .. α_k^∨`.
fn build_int_brackets(
    rs: &RootSystem,
    n_table: &HashMap<(usize, usize), i64>,
    coroot: &[Vec<i64>],
) -> Vec<Vec<(usize, i64)>> {
    let n_roots = rs.roots.len();
    let dim = n_roots + rs.rank;
    let mut table: Vec<Vec<(usize, i64)>> = vec![Vec::new(); dim * dim];
    for a in 0..n_roots {
        let neg_a = {
            let neg: Root = rs.roots[a].iter().map(|x| -x).collect();
            rs.root_index[&neg]
        };
        for b in 0..n_roots {
            if b == neg_a {
                let entries: Vec<(usize, i64)> = (0..rs.rank)
                    .filter(|&k| coroot[a][k] != 0)
                    .map(|k| (n_roots + k, coroot[a][k]))
                    .collect();
                table[a * dim + b] = entries;
            } else if let Some(&n) = n_table.get(&(a, b)) {
                let sum: Root = rs.roots[a]
                    .iter()
                    .zip(&rs.roots[b])
                    .map(|(x, y)| x + y)
                    .collect();
                table[a * dim + b] = vec![(rs.root_index[&sum], n)];
            }
        }
    }
    for k in 0..rs.rank {
        for b in 0..n_roots {
            let pairing = rs.pair_with_simple_coroot(&rs.roots[b], k);
            if pairing != 0 {
                table[(n_roots + k) * dim + b] = vec![(b, pairing)];
                table[b * dim + (n_roots + k)] = vec![(b, -pairing)];
            }
        }
    }
    table
}

/// Jacobi defect of an integer-layer basis triple; zero for a Lie algebra.
pub fn int_jacobi_defect(
    int_brackets: &[Vec<(usize, i64)>],
    dim: usize,
    x: usize,
    y: usize,
    z: usize,
) -> i64 {
    let mut acc: HashMap<usize, i64> = HashMap::new();
    let add_term = |outer: usize, inner_a: usize, inner_b: usize, acc: &mut HashMap<usize, i64>| {
        for &(mid, n1) in &int_brackets[inner_a * dim + inner_b] {
            for &(end, n2) in &int_brackets[outer * dim + mid] {
                *acc.entry(end).or_insert(0) += n1 * n2;
            }
        }
    };
    add_term(x, y, z, &mut acc);
    add_term(y, z, x, &mut acc);
    add_term(z, x, y, &mut acc);
    acc.values().map(|v| v.abs()).max().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// cache
// ---------------------------------------------------------------------------

fn cache_dir() -> std::path::PathBuf {
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) => std::path::PathBuf::from(dir),
        None => std::env::temp_dir().join("apposition-cache"),
    }
}

fn cache_path(t: SimpleType) -> std::path::PathBuf {
    cache_dir().join(format!("{t}-v{CACHE_SCHEMA_VERSION}.json"))
}

fn load_cached(rs: &RootSystem) -> Option<ChevalleyBasis> {
    let path = cache_path(rs.simple_type);
    let text = std::fs::read_to_string(path).ok()?;
    let basis: ChevalleyBasis = serde_json::from_str(&text).ok()?;
    if basis.schema_version != CACHE_SCHEMA_VERSION
        || basis.type_name != rs.simple_type.to_string()
        || basis.roots != rs.roots
    {
        return None;
    }
    validate_chevalley(rs, &basis).ok()?;
    Some(basis)
}

fn store_cache(basis: &ChevalleyBasis, t: SimpleType) {
    let dir = cache_dir();
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    if let Ok(text) = serde_json::to_string(basis) {
        let _ = std::fs::write(cache_path(t), text);
    }
}

/// Jacobi spot-check (exact) plus sign symmetry; used on every cache load.
fn validate_chevalley(rs: &RootSystem, basis: &ChevalleyBasis) -> Result<()> {
    let n_table: HashMap<(usize, usize), i64> = basis
        .n_entries
        .iter()
        .map(|&(a, b, n)| ((a, b), n))
        .collect();
    for &(a, b, n) in &basis.n_entries {
        let neg = |i: usize| -> usize {
            let v: Root = rs.roots[i].iter().map(|x| -x).collect();
            rs.root_index[&v]
        };
        match n_table.get(&(neg(a), neg(b))) {
            Some(&m) if m == -n => {}
            _ => return Err(Error::Cache("sign symmetry violated".into())),
        }
    }
    let dim = rs.roots.len() + rs.rank;
    let int_brackets = build_int_brackets(rs, &n_table, &basis.coroot);
    let mut state = 0x9e3779b97f4a7c15u64 ^ (dim as u64);
    let mut next = move |m: usize| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize % m
    };
    for _ in 0..200 {
        let (x, y, z) = (next(dim), next(dim), next(dim));
        if int_jacobi_defect(&int_brackets, dim, x, y, z) != 0 {
            return Err(Error::Cache(format!(
                "Jacobi identity fails on cached constants at ({x},{y},{z})"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// normalized layer
// ---------------------------------------------------------------------------

/// Build the Lie algebra for a root system, loading cached structure
/// constants when a valid cache document exists.
pub fn build_lie_algebra(rs: &RootSystem) -> Result<LieAlgebra> {
    let chev = match load_cached(rs) {
        Some(c) => c,
        None => {
            let c = build_chevalley(rs);
            validate_chevalley(rs, &c)
                .map_err(|e| Error::Numerical(format!("structure constants invalid: {e}")))?;
            store_cache(&c, rs.simple_type);
            c
        }
    };
    LieAlgebra::from_parts(rs.clone(), chev)
}

impl LieAlgebra {
    fn from_parts(rs: RootSystem, chev: ChevalleyBasis) -> Result<LieAlgebra> {
        let n_roots = rs.roots.len();
        let r = rs.rank;
        let dim = n_roots + r;
        if dim as i64 != rs.coxeter_number * r as i64 + r as i64 {
            return Err(Error::Numerical(format!(
                "dim {} != hr + r = {}",
                dim,
                rs.coxeter_number * r as i64 + r as i64
            )));
        }
        for &k in &chev.kappa {
            if k <= 0 {
                return Err(Error::Numerical("κ(e_α, e_{−α}) must be positive".into()));
            }
        }
        let scale: Vec<f64> = chev.kappa.iter().map(|&k| (k as f64).sqrt()).collect();
        let n_table: HashMap<(usize, usize), i64> = chev
            .n_entries
            .iter()
            .map(|&(a, b, n)| ((a, b), n))
            .collect();
        let int_brackets = build_int_brackets(&rs, &n_table, &chev.coroot);

        // normalized brackets: ê_α = e_α / √κ_α, h_k = α_k^∨ / κ_{α_k}
        let simple_kappa: Vec<f64> = (0..r)
            .map(|k| {
                let mut unit = vec![0i64; r];
                unit[k] = 1;
                chev.kappa[rs.root_index[&unit]] as f64
            })
            .collect();
        let mut brackets: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let ints = &int_brackets[a * dim + b];
                if ints.is_empty() {
                    continue;
                }
                let pre = |i: usize| -> f64 {
                    if i < n_roots {
                        scale[i]
                    } else {
                        1.0
                    }
                };
                // α_k^∨ = κ_{α_k} h_k: converting source coefficients on the
                // coroot basis to the h basis multiplies by κ_{α_k}; the h_k
                // arguments themselves carry 1/κ_{α_k}.
                let arg_scale = |i: usize| -> f64 {
                    if i < n_roots {
                        1.0 / pre(i)
                    } else {
                        1.0 / simple_kappa[i - n_roots]
                    }
                };
                let f = arg_scale(a) * arg_scale(b);
                let entries: Vec<(usize, f64)> = ints
                    .iter()
                    .map(|&(c, n)| {
                        let out_scale = if c < n_roots {
                            scale[c]
                        } else {
                            simple_kappa[c - n_roots]
                        };
                        (c, n as f64 * f * out_scale)
                    })
                    .collect();
                brackets[a * dim + b] = entries;
            }
        }

        // Killing Gram on h basis and on the full normalized basis
        let killing_h: Vec<Vec<f64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        chev.killing_h_int[i][j] as f64 / (simple_kappa[i] * simple_kappa[j])
                    })
                    .collect()
            })
            .collect();
        let mut killing_gram = CMat::zeros(dim, dim);
        for a in 0..n_roots {
            let neg: Root = rs.roots[a].iter().map(|x| -x).collect();
            let b = rs.root_index[&neg];
            killing_gram[(a, b)] = linalg::ONE;
        }
        for i in 0..r {
            for j in 0..r {
                killing_gram[(n_roots + i, n_roots + j)] = C64::new(killing_h[i][j], 0.0);
            }
        }

        Ok(LieAlgebra {
            rs,
            dim,
            n_roots,
            chevalley: chev,
            brackets,
            int_brackets,
            killing_h,
            killing_gram,
            scale,
        })
    }

    /// Basis index of the root vector `e_α` for root index `a`.
    pub fn root_basis(&self, a: usize) -> usize {
        a
    }

    /// Basis index of `h_k`.
    pub fn cartan_basis(&self, k: usize) -> usize {
        self.n_roots + k
    }

    pub fn basis_vector(&self, idx: usize) -> Vect {
        let mut v = vec![linalg::ZERO; self.dim];
        v[idx] = linalg::ONE;
        v
    }

    pub fn index_of_root(&self, root: &Root) -> Option<usize> {
        self.rs.root_index.get(root).copied()
    }

    pub fn negative_root_index(&self, a: usize) -> usize {
        let neg: Root = self.rs.roots[a].iter().map(|x| -x).collect();
        self.rs.root_index[&neg]
    }

    /// Sparse expansion of `[b_i, b_j]` in the normalized basis.
    pub fn bracket_entries(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.brackets[i * self.dim + j]
    }

    pub fn int_bracket_entries(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.int_brackets[i * self.dim + j]
    }

    /// Exact Jacobi defect of a basis triple in the integer layer.
    pub fn jacobi_defect_int(&self, x: usize, y: usize, z: usize) -> i64 {
        int_jacobi_defect(&self.int_brackets, self.dim, x, y, z)
    }

    /// Bracket of two elements.
    pub fn bracket(&self, x: &[C64], y: &[C64]) -> Vect {
        let mut out = vec![linalg::ZERO; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == linalg::ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == linalg::ZERO {
                    continue;
                }
                for &(c, n) in self.bracket_entries(i, j) {
                    out[c] += xi * yj * n;
                }
            }
        }
        out
    }

    /// Adjoint matrix of an element.
    pub fn ad(&self, x: &[C64]) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi == linalg::ZERO {
                continue;
            }
            for j in 0..self.dim {
                for &(c, n) in self.bracket_entries(i, j) {
                    m[(c, j)] += xi * n;
                }
            }
        }
        m
    }

    /// Killing form (bilinear), using the verified block structure.
    pub fn killing(&self, x: &[C64], y: &[C64]) -> C64 {
        let mut acc = linalg::ZERO;
        for a in 0..self.n_roots {
            if x[a] != linalg::ZERO {
                acc += x[a] * y[self.negative_root_index(a)];
            }
        }
        for i in 0..self.rs.rank {
            for j in 0..self.rs.rank {
                acc += x[self.cartan_basis(i)] * y[self.cartan_basis(j)] * self.killing_h[i][j];
            }
        }
        acc
    }

    /// Killing form as the literal adjoint trace (for checks).
    pub fn killing_literal(&self, x: &[C64], y: &[C64]) -> C64 {
        let ax = self.ad(x);
        let ay = self.ad(y);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| ax[(i, k)] * ay[(k, i)]).sum::<C64>())
            .sum()
    }

    /// Hermitian form `H(x, y) = κ(x, y*)`.
    pub fn hermitian(&self, x: &[C64], y: &[C64], star: &StarStructure) -> C64 {
        self.killing(x, &star.apply(y))
    }

    pub fn h_norm(&self, x: &[C64], star: &StarStructure) -> f64 {
        self.hermitian(x, x, star).re.max(0.0).sqrt()
    }

    /// The compact-form involution determined by `e_α^* = e_{−α}`,
    /// `h_j^* = h_j`, extended antilinearly.
    pub fn star(&self) -> Result<StarStructure> {
        let mut star_perm = vec![0usize; self.dim];
        for a in 0..self.n_roots {
            star_perm[a] = self.negative_root_index(a);
        }
        for k in 0..self.rs.rank {
            star_perm[self.cartan_basis(k)] = self.cartan_basis(k);
        }
        let structure = StarStructure { star_perm, hermitian_gram: CMat::zeros(0, 0) };
        // H gram: H(b_a, b_b) = κ(b_a, b_b*)
        let mut gram = CMat::zeros(self.dim, self.dim);
        for b in 0..self.dim {
            let sb = structure.apply(&self.basis_vector(b));
            for a in 0..self.dim {
                let mut ba = vec![linalg::ZERO; self.dim];
                ba[a] = linalg::ONE;
                gram[(a, b)] = self.killing(&ba, &sb);
            }
        }
        // positive definiteness after unit normalization
        let diag: Vec<f64> = (0..self.dim).map(|a| gram[(a, a)].re).collect();
        if diag.iter().any(|&d| d <= 0.0) {
            return Err(Error::Numerical("H has a non-positive diagonal entry".into()));
        }
        let normalized = CMat::from_fn(self.dim, self.dim, |a, b| {
            gram[(a, b)] / (diag[a].sqrt() * diag[b].sqrt())
        });
        let (w, _) = linalg::eigh(&normalized);
        if w[0] <= 1e-8 {
            return Err(Error::Numerical(format!(
                "H is not positive definite: min eigenvalue {:.3e}",
                w[0]
            )));
        }
        Ok(StarStructure { star_perm: structure.star_perm, hermitian_gram: gram })
    }

    /// The Cartan element `t_α` with `κ(t_α, h) = <α, h>` for all `h ∈ 𝔥`,
    /// solved exactly and returned in `h`-basis coordinates.
    pub fn killing_identification(&self, root: &Root) -> Result<Vec<f64>> {
        let r = self.rs.rank;
        if !self.rs.root_index.contains_key(root) {
            return Err(Error::NotARoot(format!("{root:?}")));
        }
        let k_int = QMat::from_imat(&crate::exact::IMat::from_rows(
            &self.chevalley.killing_h_int,
        ));
        let w: Vec<_> = (0..r)
            .map(|i| big(self.rs.pair_with_simple_coroot(root, i)))
            .collect();
        let c = k_int
            .solve(&w)
            .ok_or_else(|| Error::Numerical("singular Killing Gram".into()))?;
        // t_α = Σ c_k α_k^∨ = Σ c_k κ_{α_k} h_k
        Ok((0..r)
            .map(|k| {
                let mut unit = vec![0i64; r];
                unit[k] = 1;
                let kap = self.chevalley.kappa[self.rs.root_index[&unit]] as f64;
                crate::exact::rat_to_f64(&c[k]) * kap
            })
            .collect())
    }

    /// Element of 𝔥 from real `h`-basis coordinates.
    pub fn cartan_element(&self, coords: &[f64]) -> Vect {
        let mut v = vec![linalg::ZERO; self.dim];
        for (k, &c) in coords.iter().enumerate() {
            v[self.cartan_basis(k)] = C64::new(c, 0.0);
        }
        v
    }

    /// Element of 𝔥 from complex `h`-basis coordinates.
    pub fn cartan_element_c(&self, coords: &[C64]) -> Vect {
        let mut v = vec![linalg::ZERO; self.dim];
        for (k, &c) in coords.iter().enumerate() {
            v[self.cartan_basis(k)] = c;
        }
        v
    }

    /// `<β, h>` for `h` given by basis coordinates: the eigenvalue of
    /// `ad(h)` on `𝔤_β`.
    pub fn root_action(&self, beta: usize, h_coords: &[C64]) -> C64 {
        let r = self.rs.rank;
        let mut acc = linalg::ZERO;
        for k in 0..r {
            let pairing = self.rs.pair_with_simple_coroot(&self.rs.roots[beta], k) as f64;
            let mut unit = vec![0i64; r];
            unit[k] = 1;
            let kap = self.chevalley.kappa[self.rs.root_index[&unit]] as f64;
            acc += h_coords[k] * (pairing / kap);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::SimpleType;
    use rand::prelude::*;

    fn algebra(s: &str) -> LieAlgebra {
        let rs = RootSystem::build(SimpleType::parse(s).unwrap()).unwrap();
        build_lie_algebra(&rs).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(algebra("A1").dim, 3);
        assert_eq!(algebra("A2").dim, 8);
        assert_eq!(algebra("G2").dim, 14);
        assert_eq!(algebra("F4").dim, 52);
        assert_eq!(algebra("E6").dim, 78);
        // hr + r with h = 30, r = 8
        assert_eq!(algebra("E8").dim, 248);
    }

    #[test]
    fn exact_jacobi_small_types_all_triples() {
        for s in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
            let la = algebra(s);
            let dim = la.dim;
            for x in 0..dim {
                for y in x + 1..dim {
                    for z in y + 1..dim {
                        assert_eq!(
                            int_jacobi_defect(&la.int_brackets, dim, x, y, z),
                            0,
                            "{s}: Jacobi fails at ({x},{y},{z})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exact_jacobi_sampled_large_types() {
        let mut rng = StdRng::seed_from_u64(7);
        for s in ["D4", "F4", "E6"] {
            let la = algebra(s);
            for _ in 0..3000 {
                let x = rng.gen_range(0..la.dim);
                let y = rng.gen_range(0..la.dim);
                let z = rng.gen_range(0..la.dim);
                assert_eq!(int_jacobi_defect(&la.int_brackets, la.dim, x, y, z), 0, "{s}");
            }
        }
    }

    #[test]
    fn structure_constant_magnitudes_and_symmetry() {
        for s in ["A3", "B3", "C3", "G2", "F4"] {
            let la = algebra(s);
            let rs = &la.rs;
            let layer = IntLayer {
                rs,
                n_table: la
                    .chevalley
                    .n_entries
                    .iter()
                    .map(|&(a, b, n)| ((a, b), n))
                    .collect(),
            };
            for &(a, b, n) in &la.chevalley.n_entries {
                let p = layer.string_down(a, b);
                assert_eq!(n.abs(), p + 1, "{s}: |N| = p+1 at ({a},{b})");
                let (na, nb) = (layer.neg_index(a), layer.neg_index(b));
                assert_eq!(layer.n_of(na, nb), -n, "{s}: N_(-α,-β) = -N_(αβ)");
                assert_eq!(layer.n_of(b, a), -n, "{s}: antisymmetry");
            }
        }
    }

    #[test]
    fn killing_normalization_and_sparsity() {
        for s in ["A2", "B2", "G2"] {
            let la = algebra(s);
            // κ(ê_α, ê_{−α}) = 1 via the literal trace form
            for a in 0..la.n_roots {
                let ea = la.basis_vector(a);
                for b in 0..la.n_roots {
                    let eb = la.basis_vector(b);
                    let lit = la.killing_literal(&ea, &eb);
                    let expect = if b == la.negative_root_index(a) { 1.0 } else { 0.0 };
                    assert!(
                        (lit.re - expect).abs() < 1e-9 && lit.im.abs() < 1e-12,
                        "{s}: κ(e_{a}, e_{b}) = {lit}"
                    );
                }
                // κ(e_α, h_j) = 0
                for k in 0..la.rs.rank {
                    let h = la.basis_vector(la.cartan_basis(k));
                    assert!(la.killing_literal(&ea, &h).norm() < 1e-10);
                }
            }
            // h block matches the structural Gram
            for i in 0..la.rs.rank {
                for j in 0..la.rs.rank {
                    let hi = la.basis_vector(la.cartan_basis(i));
                    let hj = la.basis_vector(la.cartan_basis(j));
                    let lit = la.killing_literal(&hi, &hj);
                    assert!((lit.re - la.killing_h[i][j]).abs() < 1e-9, "{s}");
                }
            }
        }
    }

    #[test]
    fn jacobi_normalized_random_triples() {
        let mut rng = StdRng::seed_from_u64(11);
        for s in ["A3", "G2", "F4"] {
            let la = algebra(s);
            for _ in 0..1000 {
                let x = la.basis_vector(rng.gen_range(0..la.dim));
                let y = la.basis_vector(rng.gen_range(0..la.dim));
                let z = la.basis_vector(rng.gen_range(0..la.dim));
                let mut j = la.bracket(&x, &la.bracket(&y, &z));
                for (ji, v) in j.iter_mut().zip(la.bracket(&y, &la.bracket(&z, &x))) {
                    *ji += v;
                }
                for (ji, v) in j.iter_mut().zip(la.bracket(&z, &la.bracket(&x, &y))) {
                    *ji += v;
                }
                let norm = linalg::norm2(&j);
                assert!(norm < 1e-10, "{s}: Jacobi residual {norm}");
            }
        }
    }

    #[test]
    fn star_involution_properties() {
        for s in ["A2", "B3", "G2"] {
            let la = algebra(s);
            let star = la.star().unwrap();
            // ** = id
            for a in 0..la.dim {
                assert_eq!(star.star_perm[star.star_perm[a]], a);
            }
            // e_{α}* = e_{−α}, (i h)* = −i h
            let a0 = 0usize;
            assert_eq!(star.star_perm[a0], la.negative_root_index(a0));
            let ih: Vect = {
                let mut v = vec![linalg::ZERO; la.dim];
                v[la.cartan_basis(0)] = C64::new(0.0, 1.0);
                v
            };
            let ih_star = star.apply(&ih);
            assert!((ih_star[la.cartan_basis(0)] + C64::new(0.0, 1.0)).norm() < 1e-15);
            // [x,y]* = [y*, x*] on basis pairs
            for i in (0..la.dim).step_by(3) {
                for j in (0..la.dim).step_by(2) {
                    let x = la.basis_vector(i);
                    let y = la.basis_vector(j);
                    let lhs = star.apply(&la.bracket(&x, &y));
                    let rhs = la.bracket(&star.apply(&y), &star.apply(&x));
                    let diff: f64 = lhs
                        .iter()
                        .zip(&rhs)
                        .map(|(a, b)| (a - b).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(diff < 1e-10, "{s}: involution bracket rule at ({i},{j})");
                }
            }
            // H(e_α, e_α) = 1
            for a in 0..la.n_roots {
                let ea = la.basis_vector(a);
                let h = la.hermitian(&ea, &ea, &star);
                assert!((h.re - 1.0).abs() < 1e-9 && h.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn star_adjointness_random() {
        let mut rng = StdRng::seed_from_u64(23);
        for s in ["A2", "C3"] {
            let la = algebra(s);
            let star = la.star().unwrap();
            for _ in 0..200 {
                let x = la.basis_vector(rng.gen_range(0..la.dim));
                let u = la.basis_vector(rng.gen_range(0..la.dim));
                let v = la.basis_vector(rng.gen_range(0..la.dim));
                let lhs = la.hermitian(&la.bracket(&x, &u), &v, &star);
                let rhs = la.hermitian(&u, &la.bracket(&star.apply(&x), &v), &star);
                assert!((lhs - rhs).norm() < 1e-10, "{s}");
            }
        }
    }

    #[test]
    fn ad_homomorphism_and_nilpotency() {
        let la = algebra("A2");
        // ad(h_j) diagonal on root vectors
        let h = la.basis_vector(la.cartan_basis(0));
        let adh = la.ad(&h);
        for a in 0..la.n_roots {
            for b in 0..la.dim {
                if a != b {
                    assert!(adh[(b, a)].norm() < 1e-14);
                }
            }
        }
        // ad(e_θ)³ = 0 in A2
        let theta_idx = la.rs.root_index[&la.rs.highest_root.clone()];
        let ad_theta = la.ad(&la.basis_vector(theta_idx));
        let cube = ad_theta.mul(&ad_theta).mul(&ad_theta);
        assert!(cube.max_abs() < 1e-12);
        // ad([x,y]) = [ad x, ad y]
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let x = la.basis_vector(rng.gen_range(0..la.dim));
            let y = la.basis_vector(rng.gen_range(0..la.dim));
            let lhs = la.ad(&la.bracket(&x, &y));
            let rhs = la.ad(&x).commutator(&la.ad(&y));
            assert!(lhs.sub(&rhs).frobenius() < 1e-10);
        }
    }

    #[test]
    fn killing_identification_properties() {
        for s in ["A2", "B2", "G2"] {
            let la = algebra(s);
            for a in [0usize, la.n_roots - 1] {
                let root = la.rs.roots[a].clone();
                let t = la.killing_identification(&root).unwrap();
                let tv = la.cartan_element(&t);
                // [t_α, e_α] = (t_α, t_α) e_α
                let ea = la.basis_vector(a);
                let lhs = la.bracket(&tv, &ea);
                let tt = la.killing(&tv, &tv);
                for (i, l) in lhs.iter().enumerate() {
                    let expect = if i == a { tt } else { linalg::ZERO };
                    assert!((l - expect).norm() < 1e-9, "{s}");
                }
                // t_{−α} = −t_α
                let neg: Root = root.iter().map(|x| -x).collect();
                let tn = la.killing_identification(&neg).unwrap();
                for (u, v) in t.iter().zip(&tn) {
                    assert!((u + v).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cache_roundtrip() {
        let dir = std::env::temp_dir().join(format!("apposition-test-cache-{}", std::process::id()));
        std::env::set_var(CACHE_DIR_ENV, &dir);
        let rs = RootSystem::build(SimpleType::parse("B2").unwrap()).unwrap();
        let la1 = build_lie_algebra(&rs).unwrap();
        assert!(cache_path(rs.simple_type).exists());
        let la2 = build_lie_algebra(&rs).unwrap();
        assert_eq!(la1.chevalley.n_entries, la2.chevalley.n_entries);
        std::env::remove_var(CACHE_DIR_ENV);
        let _ = std::fs::remove_dir_all(dir);
    }
}

//! Reduced irreducible root systems with the combinatorial invariants the
//! rest of the crate consumes: roots in simple-root coordinates, the exact
//! symmetrized bilinear form, marks, Coxeter number, exponents, heights and
//! the bicoloring of the Dynkin diagram.
//!
//! Roots live in the abstract basis of simple roots (integer coordinate
//! vectors); the bilinear form is `(α_i, α_j) = d_j A_{ij}` with
//! `d_j = (α_j, α_j)/2`, normalized so short roots have squared length 2.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exact::{big, IMat, QMat};
use crate::{Error, Result};

/// Simple Lie type families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A simple type such as `A7`, `D4`, `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::InvalidRank { family: family.letter(), rank })
        }
    }

    /// Parse strings like `"A7"`, `"e8"`, `"G2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::UnknownType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownType(s.to_string()))?;
        SimpleType::new(fam, rank).map_err(|_| Error::UnknownType(s.to_string()))
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// All supported types of rank at most `max_rank`, in a fixed order.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for r in 1..=max_rank {
            out.extend(SimpleType::new(Family::A, r));
        }
        for r in 2..=max_rank {
            out.extend(SimpleType::new(Family::B, r));
        }
        for r in 3..=max_rank {
            out.extend(SimpleType::new(Family::C, r));
        }
        for r in 4..=max_rank {
            out.extend(SimpleType::new(Family::D, r));
        }
        for r in 6..=8.min(max_rank) {
            out.extend(SimpleType::new(Family::E, r));
        }
        if max_rank >= 4 {
            out.extend(SimpleType::new(Family::F, 4));
        }
        if max_rank >= 2 {
            out.extend(SimpleType::new(Family::G, 2));
        }
        out
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A root as an integer coordinate vector over the simple roots.
pub type Root = Vec<i64>;

/// A reduced irreducible root system.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub simple_type: SimpleType,
    pub rank: usize,
    /// Cartan matrix `A_{ij} = <α_i, α_j^∨>`.
    pub cartan: IMat,
    /// Half squared lengths `d_i = (α_i, α_i)/2`, short roots normalized to 1.
    pub d: Vec<i64>,
    /// Symmetrized bilinear form `S_{ij} = (α_i, α_j) = d_j A_{ij}`.
    pub bilinear: IMat,
    /// All roots, sorted by (height, lexicographic coordinates).
    pub roots: Vec<Root>,
    /// Index of each root in `roots`.
    pub root_index: HashMap<Root, usize>,
    /// Heights, parallel to `roots`.
    pub heights: Vec<i64>,
    /// Marks: coefficients of the highest root over the simple roots.
    pub marks: Vec<i64>,
    pub highest_root: Root,
    pub coxeter_number: i64,
    /// Exponents, sorted ascending, with multiplicity (doubled at h/2 for D_{2n}).
    pub exponents: Vec<i64>,
    /// Coordinates of ρ∨ over the simple coroots: the solution of `A c = 1`.
    pub rho_check: Vec<BigRational>,
}

impl RootSystem {
    /// Construct the root system of the given simple type.
    pub fn build(t: SimpleType) -> Result<RootSystem> {
        let r = t.rank;
        let (cartan, d) = cartan_data(t);
        let bilinear = IMat::from_fn_sym(r, |i, j| d[j] * cartan[(i, j)]);

        // close {±α_i} under the simple reflections
        let mut seen: HashMap<Root, usize> = HashMap::new();
        let mut queue: Vec<Root> = Vec::new();
        for i in 0..r {
            let mut v = vec![0i64; r];
            v[i] = 1;
            seen.insert(v.clone(), 0);
            queue.push(v.clone());
            v[i] = -1;
            seen.insert(v.clone(), 0);
            queue.push(v);
        }
        while let Some(root) = queue.pop() {
            for i in 0..r {
                let refl = simple_reflection(&cartan, i, &root);
                if !seen.contains_key(&refl) {
                    seen.insert(refl.clone(), 0);
                    queue.push(refl);
                }
            }
        }
        let mut roots: Vec<Root> = seen.into_keys().collect();
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let heights: Vec<i64> = roots.iter().map(|v| v.iter().sum()).collect();
        let root_index: HashMap<Root, usize> =
            roots.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();

        let highest_root = roots.last().unwrap().clone();
        let marks = highest_root.clone();
        let coxeter_number: i64 = 1 + heights.last().unwrap();

        // exponents as the conjugate partition of the height distribution
        let h = coxeter_number;
        let mut by_height = vec![0i64; (h + 1) as usize];
        for &ht in heights.iter().filter(|&&ht| ht > 0) {
            by_height[ht as usize] += 1;
        }
        let mut exponents = Vec::with_capacity(r);
        for k in 1..=h as usize {
            let next = if k < h as usize { by_height[k + 1] } else { 0 };
            for _ in 0..(by_height[k] - next) {
                exponents.push(k as i64);
            }
        }
        exponents.sort_unstable();

        let qa = QMat::from_imat(&cartan);
        let rho_check = qa
            .solve(&vec![big(1); r])
            .expect("Cartan matrix is invertible");

        Ok(RootSystem {
            simple_type: t,
            rank: r,
            cartan,
            d,
            bilinear,
            roots,
            root_index,
            heights,
            marks,
            highest_root,
            coxeter_number,
            exponents,
            rho_check,
        })
    }

    /// The Cartan matrix `A_{ij} = 2(α_i,α_j)/(α_j,α_j)`.
    pub fn cartan_matrix(&self) -> &IMat {
        &self.cartan
    }

    /// Height of a root (sum of its simple-root coefficients).
    pub fn height(&self, root: &Root) -> Result<i64> {
        match self.root_index.get(root) {
            Some(&i) => Ok(self.heights[i]),
            None => Err(Error::NotARoot(format!("{root:?}"))),
        }
    }

    /// Bilinear form of two coordinate vectors.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * b[j] * self.bilinear[(i, j)];
            }
        }
        s
    }

    /// Squared length of a root.
    pub fn length_sq(&self, root: &[i64]) -> i64 {
        self.pairing(root, root)
    }

    /// `<β, α_i^∨> = Σ_k β_k A_{ki}`.
    pub fn pair_with_simple_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|k| beta[k] * self.cartan[(k, i)]).sum()
    }

    /// Positive roots (indices into `roots`).
    pub fn positive_root_indices(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.heights[i] > 0).collect()
    }

    /// Dynkin-diagram neighbors of vertex `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank)
            .filter(|&j| j != i && self.cartan[(i, j)] != 0)
            .collect()
    }

    /// Proper 2-coloring of the Dynkin diagram: vertex 1 is black (+1),
    /// colors propagate by breadth-first search.
    pub fn bicolor(&self) -> Result<Bicoloring> {
        let r = self.rank;
        let mut color = vec![0i8; r];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..r {
            if color[start] != 0 {
                continue;
            }
            color[start] = 1;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                for j in self.neighbors(i) {
                    if color[j] == 0 {
                        color[j] = -color[i];
                        queue.push_back(j);
                    } else if color[j] == color[i] {
                        return Err(Error::Numerical(
                            "Dynkin graph is not bipartite".to_string(),
                        ));
                    }
                }
            }
        }
        let color: Vec<i64> = color.iter().map(|&c| c as i64).collect();
        let black_count = color.iter().filter(|&&c| c == 1).count();
        Ok(Bicoloring { color, black_count })
    }
}

/// A proper 2-coloring of the Dynkin diagram; `color[i]` is the ε function.
#[derive(Debug, Clone)]
pub struct Bicoloring {
    pub color: Vec<i64>,
    pub black_count: usize,
}

impl Bicoloring {
    pub fn eps(&self, i: usize) -> i64 {
        self.color[i]
    }

    pub fn black_indices(&self) -> Vec<usize> {
        (0..self.color.len()).filter(|&i| self.color[i] == 1).collect()
    }

    pub fn white_indices(&self) -> Vec<usize> {
        (0..self.color.len()).filter(|&i| self.color[i] == -1).collect()
    }
}

/// `s_i(β) = β − <β, α_i^∨> α_i` on coordinate vectors.
pub fn simple_reflection(cartan: &IMat, i: usize, root: &[i64]) -> Root {
    let r = root.len();
    let pairing: i64 = (0..r).map(|k| root[k] * cartan[(k, i)]).sum();
    let mut out = root.to_vec();
    out[i] -= pairing;
    out
}

impl IMat {
    fn from_fn_sym(n: usize, f: impl Fn(usize, usize) -> i64) -> IMat {
        let mut m = IMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }
}

/// Bourbaki Cartan matrix and half squared lengths per family.
fn cartan_data(t: SimpleType) -> (IMat, Vec<i64>) {
    let r = t.rank;
    let mut a = IMat::zeros(r);
    for i in 0..r {
        a[(i, i)] = 2;
    }
    fn path(a: &mut IMat, i: usize, j: usize) {
        a[(i, j)] = -1;
        a[(j, i)] = -1;
    }
    let d: Vec<i64> = match t.family {
        Family::A => {
            for i in 0..r - 1 {
                path(&mut a, i, i + 1);
            }
            vec![1; r]
        }
        Family::B => {
            // α_r short; double edge r-1 -> r
            for i in 0..r.saturating_sub(2) {
                path(&mut a, i, i + 1);
            }
            a[(r - 2, r - 1)] = -2;
            a[(r - 1, r - 2)] = -1;
            let mut d = vec![2; r];
            d[r - 1] = 1;
            d
        }
        Family::C => {
            // α_r long
            for i in 0..r - 2 {
                path(&mut a, i, i + 1);
            }
            a[(r - 2, r - 1)] = -1;
            a[(r - 1, r - 2)] = -2;
            let mut d = vec![1; r];
            d[r - 1] = 2;
            d
        }
        Family::D => {
            for i in 0..r - 2 {
                path(&mut a, i, i + 1);
            }
            path(&mut a, r - 3, r - 1);
            vec![1; r]
        }
        Family::E => {
            // Bourbaki numbering: 1-3-4-5-6(-7-8), 2 attached to 4
            path(&mut a, 0, 2);
            path(&mut a, 2, 3);
            path(&mut a, 1, 3);
            for i in 4..r {
                path(&mut a, i - 1, i);
            }
            vec![1; r]
        }
        Family::F => {
            path(&mut a, 0, 1);
            a[(1, 2)] = -2;
            a[(2, 1)] = -1;
            path(&mut a, 2, 3);
            vec![2, 2, 1, 1]
        }
        Family::G => {
            a[(0, 1)] = -1;
            a[(1, 0)] = -3;
            vec![1, 3]
        }
    };
    (a, d)
}

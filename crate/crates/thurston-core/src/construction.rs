//! Intersection data and the Thurston representation.
//!
//! Input is the geometric-intersection matrix `N` of two multicurves
//! (`N[j][k] = i(α_j, β_k)`) together with per-class multiplicities. From it
//! this module derives:
//!
//! * the Gram matrix `N·Nᵗ` and its Perron–Frobenius eigenvalue `μ`
//!   (power iteration; primitivity is checked exactly first);
//! * the representation matrices `T_A ↦ [[1, −√μ], [0, 1]]`,
//!   `T_B ↦ [[1, 0], [√μ, 1]]`, with an exact integer decision of whether
//!   `μ = 4` (the boundary case where `T_A T_B` is parabolic);
//! * the bipartite configuration graph on the curve classes and the
//!   Dynkin-tree recognition behind Leininger's criterion: the twist group
//!   fails to be free exactly when the configuration graph is one of the
//!   simply-laced tree shapes `A_n`, `D_n`, `E6`, `E7`, `E8`;
//! * the ping-pong sufficient condition for freeness
//!   (`n_α·i(α, [B′]) ≥ 2` and `m_β·i([A′], β) ≥ 2` on a chosen subsystem).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::geometry::{self, sqrt, ScaledMat};
use crate::words::{Generator, Word};

/// Validation errors for [`IntersectionData::with_multiplicities`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DataError {
    #[error("intersection matrix must have at least one row and one column")]
    Empty,
    #[error("intersection matrix rows must all have the same length")]
    Ragged,
    #[error("row multiplicities: expected {expected}, got {got}")]
    RowMultLen { expected: usize, got: usize },
    #[error("column multiplicities: expected {expected}, got {got}")]
    ColMultLen { expected: usize, got: usize },
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
}

/// Errors from the spectral side of the construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    /// The Gram matrix is not primitive, so a Perron–Frobenius eigenvalue
    /// with a positive eigenvector is not guaranteed.
    #[error("Gram matrix N·Nᵗ is not primitive")]
    NotPrimitive,
    /// Power iteration failed to reach the residual tolerance.
    #[error("power iteration did not converge within {max_iter} iterations (residual {residual:e})")]
    NoConvergence { max_iter: u64, residual: f64 },
    /// A subsystem mask selected no curves.
    #[error("subsystem masks must select at least one curve on each side")]
    EmptySubset,
}

/// Geometric-intersection data for a pair of multicurves.
///
/// Rows index the isotopy classes `[A] = {α_1, …, α_n}`, columns the classes
/// `[B] = {β_1, …, β_m}`; `n_matrix[j][k] = i(α_j, β_k) ≥ 0`. The
/// multiplicities `row_mult[j] = n_{α_j}`, `col_mult[k] = m_{β_k}` count the
/// parallel copies in the multicurve and enter only the ping-pong
/// sufficient condition and the random model; the Gram matrix and the
/// configuration graph are class-level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    n_matrix: Vec<Vec<u64>>,
    row_mult: Vec<u64>,
    col_mult: Vec<u64>,
}

impl IntersectionData {
    /// Data with all multiplicities 1.
    pub fn new(n_matrix: Vec<Vec<u64>>) -> Result<IntersectionData, DataError> {
        let rows = n_matrix.len();
        let cols = n_matrix.first().map_or(0, Vec::len);
        Self::with_multiplicities(n_matrix, vec![1; rows], vec![1; cols])
    }

    /// Data with explicit multiplicities.
    pub fn with_multiplicities(
        n_matrix: Vec<Vec<u64>>,
        row_mult: Vec<u64>,
        col_mult: Vec<u64>,
    ) -> Result<IntersectionData, DataError> {
        let rows = n_matrix.len();
        let cols = n_matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(DataError::Empty);
        }
        if n_matrix.iter().any(|r| r.len() != cols) {
            return Err(DataError::Ragged);
        }
        if row_mult.len() != rows {
            return Err(DataError::RowMultLen {
                expected: rows,
                got: row_mult.len(),
            });
        }
        if col_mult.len() != cols {
            return Err(DataError::ColMultLen {
                expected: cols,
                got: col_mult.len(),
            });
        }
        if row_mult.iter().chain(&col_mult).any(|&m| m == 0) {
            return Err(DataError::ZeroMultiplicity);
        }
        Ok(IntersectionData {
            n_matrix,
            row_mult,
            col_mult,
        })
    }

    pub fn rows(&self) -> usize {
        self.n_matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.n_matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.n_matrix
    }

    pub fn row_mult(&self) -> &[u64] {
        &self.row_mult
    }

    pub fn col_mult(&self) -> &[u64] {
        &self.col_mult
    }

    /// The Gram matrix `N·Nᵗ` in exact integer arithmetic.
    #[allow(clippy::needless_range_loop)] // symmetric double writes g[j][l], g[l][j]
    pub fn gram(&self) -> Vec<Vec<u128>> {
        let n = self.rows();
        let mut g = vec![vec![0u128; n]; n];
        for j in 0..n {
            for l in j..n {
                let s: u128 = self.n_matrix[j]
                    .iter()
                    .zip(&self.n_matrix[l])
                    .map(|(&x, &y)| x as u128 * y as u128)
                    .sum();
                g[j][l] = s;
                g[l][j] = s;
            }
        }
        g
    }
}

/// Result of the Perron–Frobenius computation on the Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PFResult {
    /// Dominant eigenvalue `μ`.
    pub mu: f64,
    /// Unit (Euclidean) eigenvector with strictly positive entries.
    pub vector: Vec<f64>,
    /// Power-iteration steps performed.
    pub iterations: u64,
    /// Final residual `‖Mv − μv‖_∞`.
    pub residual: f64,
}

/// Default residual tolerance for [`perron_frobenius`].
pub const PF_TOL: f64 = 1e-12;
/// Default iteration cap for [`perron_frobenius`].
pub const PF_MAX_ITER: u64 = 100_000;

/// Exact primitivity test for a nonnegative square matrix: `M` is primitive
/// iff its Boolean adjacency power at the Wielandt exponent
/// `(n−1)² + 1` is strictly positive.
pub fn is_primitive(mat: &[Vec<u128>]) -> bool {
    let n = mat.len();
    if n == 0 {
        return false;
    }
    let to_bool = |m: &[Vec<bool>]| -> bool { m.iter().all(|r| r.iter().all(|&x| x)) };
    let mul = |x: &[Vec<bool>], y: &[Vec<bool>]| -> Vec<Vec<bool>> {
        let mut out = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k] {
                    for j in 0..n {
                        if y[k][j] {
                            out[i][j] = true;
                        }
                    }
                }
            }
        }
        out
    };
    let base: Vec<Vec<bool>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x > 0).collect())
        .collect();
    // Boolean fast exponentiation to the Wielandt exponent.
    let mut exponent = ((n - 1) * (n - 1) + 1) as u64;
    let mut acc: Option<Vec<Vec<bool>>> = None;
    let mut pow = base;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = Some(match acc {
                None => pow.clone(),
                Some(a) => mul(&a, &pow),
            });
        }
        exponent >>= 1;
        if exponent > 0 {
            pow = mul(&pow, &pow);
        }
    }
    to_bool(&acc.expect("exponent ≥ 1"))
}

/// Dominant eigenpair of a primitive nonnegative matrix by power iteration
/// with the default tolerance `1e−12` and iteration cap `10⁵`.
pub fn perron_frobenius(mat: &[Vec<u128>]) -> Result<PFResult, ConstructionError> {
    perron_frobenius_with(mat, PF_TOL, PF_MAX_ITER)
}

/// Power iteration with explicit residual tolerance and iteration cap.
///
/// Starts from the all-ones direction (never orthogonal to the positive
/// dominant eigenvector), estimates `μ` by the Rayleigh quotient, and stops
/// when `‖Mv − μv‖_∞ ≤ tol` for the returned pair `(μ, v)`.
pub fn perron_frobenius_with(
    mat: &[Vec<u128>],
    tol: f64,
    max_iter: u64,
) -> Result<PFResult, ConstructionError> {
    if !is_primitive(mat) {
        return Err(ConstructionError::NotPrimitive);
    }
    let n = mat.len();
    let a: Vec<Vec<f64>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let matvec = |v: &[f64]| -> Vec<f64> {
        a.iter()
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    };
    let mut v = vec![1.0 / sqrt(n as f64); n];
    let mut last_residual = f64::INFINITY;
    for iterations in 1..=max_iter {
        let w = matvec(&v);
        let mu: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        let residual = v
            .iter()
            .zip(&w)
            .map(|(x, y)| geometry::abs(y - mu * x))
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(PFResult {
                mu,
                vector: v,
                iterations,
                residual,
            });
        }
        last_residual = residual;
        let norm = sqrt(w.iter().map(|x| x * x).sum());
        debug_assert!(norm > 0.0, "primitive matrix maps positive vectors to nonzero");
        v = w.into_iter().map(|x| x / norm).collect();
    }
    Err(ConstructionError::NoConvergence {
        max_iter,
        residual: last_residual,
    })
}

/// Exact determinant of an integer matrix (Bareiss fraction-free
/// elimination over arbitrary-precision integers).
#[allow(clippy::needless_range_loop)] // index arithmetic mirrors the elimination scheme
fn det_bigint(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let zero = BigInt::from(0);
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == zero {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != zero) else {
                return zero;
            };
            a.swap(k, swap);
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        let row_k = a[k].clone();
        for i in k + 1..n {
            let lead = a[i][k].clone();
            for j in k + 1..n {
                let num = &pivot * &a[i][j] - &lead * &row_k[j];
                a[i][j] = num / &prev; // exact division: Bareiss invariant
            }
            a[i][k] = zero.clone();
        }
        prev = pivot;
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Decides `μ = 4` exactly: true iff `det(M − 4I) = 0` in integer
/// arithmetic AND the numeric eigenvalue is within `1e−6` of 4. The exact
/// determinant is authoritative on the boundary (an eigenvalue merely close
/// to 4 is rejected); the numeric check guards against 4 being a
/// subdominant eigenvalue.
pub fn mu_equals_four(gram: &[Vec<u128>], mu_numeric: f64) -> bool {
    if geometry::abs(mu_numeric - 4.0) > 1e-6 {
        return false;
    }
    let n = gram.len();
    let shifted: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = BigInt::from(gram[i][j]);
                    if i == j {
                        e - BigInt::from(4)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    det_bigint(shifted) == BigInt::from(0)
}

/// The Thurston representation attached to intersection data.
#[derive(Debug, Clone, PartialEq)]
pub struct ThurstonRep {
    /// Perron–Frobenius eigenvalue of the Gram matrix.
    pub mu: f64,
    /// `√μ`, the shear parameter of the generator matrices.
    pub sqrt_mu: f64,
    /// `ρ(T_A) = [[1, −√μ], [0, 1]]`.
    pub mat_a: ScaledMat,
    /// `ρ(T_B) = [[1, 0], [√μ, 1]]`.
    pub mat_b: ScaledMat,
    /// Exact decision of the boundary case `μ = 4`, where `T_A T_B` is a
    /// parabolic multitwist rather than pseudo-Anosov.
    pub mu_is_four: bool,
    /// Eigenpair provenance (iterations, residual, eigenvector).
    pub pf: PFResult,
}

impl ThurstonRep {
    /// Image of a word under the representation.
    pub fn matrix_of(&self, word: &Word) -> ScaledMat {
        geometry::word_matrix(word, self.sqrt_mu)
    }

    /// Image of a single generator power.
    pub fn generator_matrix(&self, base: Generator, exponent: i64) -> ScaledMat {
        geometry::syllable_matrix(base, exponent, self.sqrt_mu)
    }
}

/// Builds the representation: Gram matrix → Perron–Frobenius `μ` → shear
/// matrices, plus the exact `μ = 4` flag.
pub fn build_representation(data: &IntersectionData) -> Result<ThurstonRep, ConstructionError> {
    let gram = data.gram();
    let pf = perron_frobenius(&gram)?;
    let mu = pf.mu;
    let sqrt_mu = sqrt(mu);
    Ok(ThurstonRep {
        mu,
        sqrt_mu,
        mat_a: geometry::syllable_matrix(Generator::A, 1, sqrt_mu),
        mat_b: geometry::syllable_matrix(Generator::B, 1, sqrt_mu),
        mu_is_four: mu_equals_four(&gram, mu),
        pf,
    })
}

/// The bipartite configuration graph on the curve classes: one vertex per
/// row (A-side) and per column (B-side), with `N[j][k]` parallel edges
/// between `α_j` and `β_k`. Multiplicities are not encoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigGraph {
    a_count: usize,
    b_count: usize,
    /// `(a_index, b_index, multiplicity ≥ 1)`, one entry per vertex pair.
    edges: Vec<(usize, usize, u64)>,
}

impl ConfigGraph {
    /// Builds a graph directly from parts (used by tests and by callers that
    /// have a graph not arising from intersection data). Edge indices must
    /// be in range; entries with multiplicity 0 are dropped; duplicate
    /// vertex pairs accumulate multiplicity.
    pub fn from_parts(
        a_count: usize,
        b_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> ConfigGraph {
        let mut merged: Vec<(usize, usize, u64)> = Vec::new();
        for (a, b, mult) in edges {
            assert!(a < a_count && b < b_count, "edge endpoint out of range");
            if mult == 0 {
                continue;
            }
            if let Some(e) = merged.iter_mut().find(|e| e.0 == a && e.1 == b) {
                e.2 += mult;
            } else {
                merged.push((a, b, mult));
            }
        }
        ConfigGraph {
            a_count,
            b_count,
            edges: merged,
        }
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    pub fn vertex_count(&self) -> usize {
        self.a_count + self.b_count
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Combined adjacency over A-side vertices `0..a_count` and B-side
    /// vertices `a_count..a_count+b_count`, one entry per distinct pair.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for &(a, b, _) in &self.edges {
            let w = self.a_count + b;
            adj[a].push(w);
            adj[w].push(a);
        }
        adj
    }

    /// Whether the graph is connected (isolated vertices count; the empty
    /// graph is connected vacuously).
    pub fn is_connected(&self) -> bool {
        let v = self.vertex_count();
        if v <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; v];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == v
    }
}

/// The configuration graph of intersection data.
pub fn config_graph(data: &IntersectionData) -> ConfigGraph {
    let mut edges = Vec::new();
    for (j, row) in data.matrix().iter().enumerate() {
        for (k, &mult) in row.iter().enumerate() {
            if mult > 0 {
                edges.push((j, k, mult));
            }
        }
    }
    ConfigGraph {
        a_count: data.rows(),
        b_count: data.cols(),
        edges,
    }
}

/// The simply-laced tree families of the freeness criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinType {
    /// Path on `n ≥ 1` vertices.
    PathA(usize),
    /// One degree-3 vertex whose two shortest arms have length 1
    /// (`n ≥ 4` vertices total).
    ForkD(usize),
    /// One degree-3 vertex with arm lengths `{1, 2, 2}`.
    E6,
    /// Arm lengths `{1, 2, 3}`.
    E7,
    /// Arm lengths `{1, 2, 4}`.
    E8,
    /// Anything else: multi-edge, cycle, disconnected, or a tree outside
    /// the families. The twist group is then free of rank 2.
    NotInFamily,
}

impl DynkinType {
    /// Stable lowercase tag for reports.
    pub fn tag(&self) -> alloc::string::String {
        use alloc::format;
        match self {
            DynkinType::PathA(n) => format!("A{n}"),
            DynkinType::ForkD(n) => format!("D{n}"),
            DynkinType::E6 => "E6".into(),
            DynkinType::E7 => "E7".into(),
            DynkinType::E8 => "E8".into(),
            DynkinType::NotInFamily => "not_in_family".into(),
        }
    }
}

/// Recognizes whether the configuration graph is one of the simply-laced
/// tree shapes `A_n`, `D_n`, `E6`, `E7`, `E8`.
///
/// Any multi-edge, cycle, or disconnection puts the graph outside the
/// family. For a tree: max degree ≤ 3 with at most one degree-3 vertex,
/// whose sorted arm lengths must be `{1, 1, t}` (fork `D_{t+3}`), or
/// `{1, 2, 2|3|4}` (`E6`/`E7`/`E8`); a path is `A_n`.
pub fn dynkin_recognize(graph: &ConfigGraph) -> DynkinType {
    let v = graph.vertex_count();
    if v == 0 {
        return DynkinType::NotInFamily;
    }
    if graph.edges.iter().any(|&(_, _, m)| m >= 2) {
        return DynkinType::NotInFamily;
    }
    if graph.edges.len() != v - 1 {
        // Too many edges (a cycle exists) or too few (disconnected).
        return DynkinType::NotInFamily;
    }
    // |E| = |V| − 1 plus connected ⇔ tree.
    if !graph.is_connected() {
        return DynkinType::NotInFamily;
    }
    let adj = graph.adjacency();
    if adj.iter().any(|nb| nb.len() >= 4) {
        return DynkinType::NotInFamily;
    }
    let branch_vertices: Vec<usize> = (0..v).filter(|&u| adj[u].len() == 3).collect();
    match branch_vertices.as_slice() {
        [] => DynkinType::PathA(v),
        &[center] => {
            // Walk each arm from the center to its leaf; arms are plain
            // paths because no other vertex has degree 3.
            let mut arms: Vec<usize> = adj[center]
                .iter()
                .map(|&first| {
                    let mut len = 1;
                    let mut prev = center;
                    let mut cur = first;
                    while adj[cur].len() == 2 {
                        let next = if adj[cur][0] == prev {
                            adj[cur][1]
                        } else {
                            adj[cur][0]
                        };
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => DynkinType::ForkD(v),
                [1, 2, 2] => DynkinType::E6,
                [1, 2, 3] => DynkinType::E7,
                [1, 2, 4] => DynkinType::E8,
                _ => DynkinType::NotInFamily,
            }
        }
        _ => DynkinType::NotInFamily,
    }
}

/// Leininger's criterion: the twist group is free of rank 2 exactly when
/// the configuration graph is NOT one of the tree families.
pub fn leininger_is_free(data: &IntersectionData) -> bool {
    dynkin_recognize(&config_graph(data)) == DynkinType::NotInFamily
}

/// Ping-pong sufficient condition for freeness on a subsystem: every
/// selected class must satisfy `n_α · i(α, [B′]) ≥ 2` (rows) and
/// `m_β · i([A′], β) ≥ 2` (columns). Masks must match the data dimensions.
pub fn suff_free_check(
    data: &IntersectionData,
    a_mask: &[bool],
    b_mask: &[bool],
) -> Result<bool, ConstructionError> {
    assert_eq!(a_mask.len(), data.rows(), "A-side mask length mismatch");
    assert_eq!(b_mask.len(), data.cols(), "B-side mask length mismatch");
    if !a_mask.iter().any(|&x| x) || !b_mask.iter().any(|&x| x) {
        return Err(ConstructionError::EmptySubset);
    }
    for (j, &selected) in a_mask.iter().enumerate() {
        if !selected {
            continue;
        }
        let isum: u128 = data.matrix()[j]
            .iter()
            .zip(b_mask)
            .filter(|(_, &sel)| sel)
            .map(|(&x, _)| x as u128)
            .sum();
        if (data.row_mult()[j] as u128) * isum < 2 {
            return Ok(false);
        }
    }
    for (k, &selected) in b_mask.iter().enumerate() {
        if !selected {
            continue;
        }
        let isum: u128 = data
            .matrix()
            .iter()
            .zip(a_mask)
            .filter(|(_, &sel)| sel)
            .map(|(row, _)| row[k] as u128)
            .sum();
        if (data.col_mult()[k] as u128) * isum < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

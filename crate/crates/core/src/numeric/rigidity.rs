//! Rigidity matrices, first-order motions and randomized generic rank.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{row_reduce, Echelon};
use super::scalar::{Fp61, Scalar};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, PinnedGraph};

/// A graph seen as a framework: which vertices carry velocity columns.
pub trait Framework {
    fn vertex_count(&self) -> usize;
    fn edge_ends(&self) -> Vec<(usize, usize)>;
    /// `false` for pinned vertices, whose columns are removed.
    fn is_free(&self, v: usize) -> bool;
}

impl Framework for Multigraph {
    fn vertex_count(&self) -> usize {
        Multigraph::vertex_count(self)
    }
    fn edge_ends(&self) -> Vec<(usize, usize)> {
        self.edges().iter().map(|e| e.ends()).collect()
    }
    fn is_free(&self, _: usize) -> bool {
        true
    }
}

impl Framework for PinnedGraph {
    fn vertex_count(&self) -> usize {
        PinnedGraph::vertex_count(self)
    }
    fn edge_ends(&self) -> Vec<(usize, usize)> {
        self.edges().iter().map(|e| e.ends()).collect()
    }
    fn is_free(&self, v: usize) -> bool {
        self.is_inner(v)
    }
}

/// Positions of every vertex, pins included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration<T> {
    pub points: Vec<[T; 2]>,
}

impl<T: Scalar> Configuration<T> {
    pub fn new(points: Vec<[T; 2]>) -> Self {
        Configuration { points }
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Self {
        Configuration {
            points: points.iter().map(|&(x, y)| [T::from_i64(x), T::from_i64(y)]).collect(),
        }
    }
}

impl Configuration<Fp61> {
    /// Coordinates drawn uniformly from the field.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Configuration {
            points: (0..n).map(|_| [Fp61::random(rng), Fp61::random(rng)]).collect(),
        }
    }
}

/// One row per edge, two columns per free vertex. The row of edge `(i, j)`
/// holds `p_i - p_j` in the columns of `i` and `p_j - p_i` in those of `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrix<T> {
    rows: Vec<Vec<T>>,
    /// Vertex owning each column pair.
    columns: Vec<usize>,
}

impl<T: Scalar> RigidityMatrix<T> {
    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        2 * self.columns.len()
    }

    /// Vertices in column-pair order.
    pub fn column_vertices(&self) -> &[usize] {
        &self.columns
    }

    pub fn echelon(&self) -> Echelon<T> {
        row_reduce(self.rows.clone(), self.column_count())
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }
}

pub fn build_rigidity_matrix<G: Framework + ?Sized, T: Scalar>(
    g: &G,
    c: &Configuration<T>,
) -> Result<RigidityMatrix<T>> {
    let n = g.vertex_count();
    if c.points.len() != n {
        return Err(Error::ConfigurationSize {
            expected: n,
            actual: c.points.len(),
        });
    }
    let columns: Vec<usize> = (0..n).filter(|&v| g.is_free(v)).collect();
    let mut col_of = vec![usize::MAX; n];
    for (k, &v) in columns.iter().enumerate() {
        col_of[v] = 2 * k;
    }
    let mut rows = Vec::new();
    for (i, j) in g.edge_ends() {
        if c.points[i] == c.points[j] {
            return Err(Error::CoincidentPoints(i, j));
        }
        let mut row = vec![T::zero(); 2 * columns.len()];
        for (a, b) in [(i, j), (j, i)] {
            if col_of[a] != usize::MAX {
                for axis in 0..2 {
                    row[col_of[a] + axis] = c.points[a][axis].clone() - c.points[b][axis].clone();
                }
            }
        }
        rows.push(row);
    }
    Ok(RigidityMatrix { rows, columns })
}

/// Basis of first-order motions. Each vector assigns a velocity to every
/// vertex; pinned vertices get zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionBasis<T> {
    pub vectors: Vec<Vec<[T; 2]>>,
    /// Set on the floating-point path when a pivot fell below `1e-6` of the
    /// largest entry; the rank may then depend on rounding.
    pub ill_conditioned: bool,
}

impl<T: Scalar> MotionBasis<T> {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `(p_i - p_j) · (v_i - v_j)` for every edge and every basis vector.
    pub fn residuals<G: Framework + ?Sized>(&self, g: &G, c: &Configuration<T>) -> Vec<T> {
        let mut out = Vec::new();
        for vel in &self.vectors {
            for (i, j) in g.edge_ends() {
                let mut dot = T::zero();
                for axis in 0..2 {
                    let dp = c.points[i][axis].clone() - c.points[j][axis].clone();
                    let dv = vel[i][axis].clone() - vel[j][axis].clone();
                    dot = dot + dp * dv;
                }
                out.push(dot);
            }
        }
        out
    }
}

/// Kernel of the rigidity matrix (pinned columns removed for pinned graphs).
pub fn motion_space<G: Framework + ?Sized, T: Scalar>(
    g: &G,
    c: &Configuration<T>,
) -> Result<MotionBasis<T>> {
    let m = build_rigidity_matrix(g, c)?;
    let echelon = m.echelon();
    let n = g.vertex_count();
    let vectors = echelon
        .kernel()
        .into_iter()
        .map(|k| {
            let mut vel = vec![[T::zero(), T::zero()]; n];
            for (idx, &v) in m.columns.iter().enumerate() {
                vel[v] = [k[2 * idx].clone(), k[2 * idx + 1].clone()];
            }
            vel
        })
        .collect();
    Ok(MotionBasis {
        vectors,
        ill_conditioned: !T::EXACT && echelon.pivot_ratio < 1e-6,
    })
}

fn random_configuration<G: Framework + ?Sized>(g: &G, rng: &mut ChaCha8Rng) -> Configuration<Fp61> {
    loop {
        let c = Configuration::random(g.vertex_count(), rng);
        if g.edge_ends().iter().all(|&(i, j)| c.points[i] != c.points[j]) {
            return c;
        }
    }
}

/// Maximum rank of the rigidity matrix over `trials` random configurations
/// in `GF(2^61 - 1)`; equals the generic rank except with probability at most
/// `|E| / 2^60` per trial.
pub fn generic_rank_randomized<G: Framework + ?Sized>(g: &G, seed: u64, trials: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials.max(1))
        .map(|_| {
            let c = random_configuration(g, &mut rng);
            build_rigidity_matrix(g, &c).expect("distinct points").rank()
        })
        .max()
        .unwrap_or(0)
}

/// For each vertex, whether a random combination of motions moved it in at
/// least one of `trials` random configurations. Pins are always `false`.
pub fn motion_support(g: &PinnedGraph, seed: u64, trials: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moved = vec![false; g.vertex_count()];
    for _ in 0..trials.max(1) {
        if let Some(speeds) = random_motion(g, &mut rng) {
            for (v, m) in speeds.into_iter().enumerate() {
                moved[v] |= m;
            }
        }
    }
    moved
}

/// Nonzero-velocity flags of one random combination of the motion basis at a
/// random configuration; `None` when the framework has no motion.
fn random_motion(g: &PinnedGraph, rng: &mut ChaCha8Rng) -> Option<Vec<bool>> {
    let c = random_configuration(g, rng);
    let basis = motion_space(g, &c).expect("distinct points");
    if basis.is_empty() {
        return None;
    }
    let weights: Vec<Fp61> = basis.vectors.iter().map(|_| Fp61::random(rng)).collect();
    Some(
        (0..g.vertex_count())
            .map(|v| {
                (0..2).any(|axis| {
                    let s = basis
                        .vectors
                        .iter()
                        .zip(&weights)
                        .fold(Fp61::new(0), |acc, (vel, w)| acc + vel[v][axis] * *w);
                    s != Fp61::new(0)
                })
            })
            .collect(),
    )
}

/// Whether, in at least one of `trials` samples, a generic first-order motion
/// moves every inner vertex. `false` when there is no motion at all.
pub fn all_inner_move(g: &PinnedGraph, seed: u64, trials: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials.max(1)).any(|_| {
        random_motion(g, &mut rng).is_some_and(|moving| g.inner().iter().all(|&v| moving[v]))
    })
}

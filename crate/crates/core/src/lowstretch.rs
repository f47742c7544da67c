//! Low-stretch spanning trees through column subset selection.
//!
//! With `Pi` the edge-vertex incidence matrix (column `e = (u, v)` is
//! `sqrt(w_e) (e_u - e_v)`, oriented `u < v`) and `Pi = U Sigma Y` its thin
//! SVD, `Y` has `n - 1` orthonormal rows for a connected graph. An
//! `(n-1)`-subset of edges is a spanning tree exactly when `Y_S` is
//! invertible, and then the total stretch of the graph over that tree is
//! `||Y_S^{-1}||_F^2`. Stretch is computed three ways here: by walking tree
//! paths, as `Tr(L_G L_T^+)`, and through `Y_S`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::greedy::greedy_remove_frobenius;
use crate::linalg::{self, columns, Matrix, Subset, DEFAULT_RANK_TOL};
use crate::randomized::rng_from_seed;
use crate::volume::{check_enumerable, volsamp_draw_fast};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    connected: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    /// False if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl WeightedGraph {
    /// Validates edges and stores them with `u < v`.
    pub fn new(n_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for (index, &(u, v, w)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::SelfLoop { index, vertex: u });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight { index, weight: w });
            }
            if let Some(bad) = [u, v].into_iter().find(|&x| x >= n_vertices) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    cols: n_vertices,
                });
            }
            out.push(Edge {
                u: u.min(v),
                v: u.max(v),
                w,
            });
        }
        let mut uf = UnionFind::new(n_vertices);
        let mut components = n_vertices;
        for e in &out {
            if uf.union(e.u, e.v) {
                components -= 1;
            }
        }
        Ok(Self {
            n_vertices,
            edges: out,
            connected: components == 1,
        })
    }

    /// Vertex count taken as one more than the largest id.
    pub fn from_edges(edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(n, edges)
    }

    /// Unit-weight complete graph, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, 1.0));
            }
        }
        Self::new(n, &edges).expect("valid complete graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    fn require_connected(&self) -> Result<()> {
        if self.connected && self.n_vertices >= 2 {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// True iff the edge subset is connected and acyclic on all vertices.
    pub fn is_spanning_tree(&self, s: &Subset) -> bool {
        if s.len() + 1 != self.n_vertices {
            return false;
        }
        let mut uf = UnionFind::new(self.n_vertices);
        s.indices().iter().all(|&i| {
            self.edges
                .get(i)
                .is_some_and(|e| uf.union(e.u, e.v))
        })
    }

    /// `Pi_G`: `n_vertices x m`.
    pub fn incidence(&self) -> Matrix {
        let mut p = Matrix::zeros(self.n_vertices, self.m());
        for (j, e) in self.edges.iter().enumerate() {
            let r = e.w.sqrt();
            p.set(e.u, j, r);
            p.set(e.v, j, -r);
        }
        p
    }

    /// `L_G = Pi_G Pi_G^T`.
    pub fn laplacian(&self) -> Matrix {
        laplacian_of(self.n_vertices, self.edges.iter())
    }

    /// Orthonormal right factor of the incidence matrix, `(n - 1) x m`.
    pub fn right_factor(&self) -> Result<Matrix> {
        self.require_connected()?;
        Ok(linalg::thin_svd(&self.incidence(), DEFAULT_RANK_TOL)?.y)
    }
}

fn laplacian_of<'a>(n: usize, edges: impl Iterator<Item = &'a Edge>) -> Matrix {
    let mut l = Matrix::zeros(n, n);
    for e in edges {
        for (a, b, sign) in [(e.u, e.u, 1.0), (e.v, e.v, 1.0), (e.u, e.v, -1.0), (e.v, e.u, -1.0)] {
            l.set(a, b, l.get(a, b) + sign * e.w);
        }
    }
    l
}

pub fn incidence(g: &WeightedGraph) -> Matrix {
    g.incidence()
}

pub fn laplacian(g: &WeightedGraph) -> Matrix {
    g.laplacian()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub edge_ids: Subset,
}

impl SpanningTree {
    /// Wraps `s` after checking it is a spanning tree of `g`.
    pub fn new(g: &WeightedGraph, s: Subset) -> Result<Self> {
        if !g.is_spanning_tree(&s) {
            return Err(Error::NotASpanningTree(format!(
                "{} edges {:?} on {} vertices",
                s.len(),
                s.indices(),
                g.n_vertices()
            )));
        }
        Ok(Self { edge_ids: s })
    }

    /// `prod_{e in T} w(e)`.
    pub fn weight_product(&self, g: &WeightedGraph) -> f64 {
        self.edge_ids
            .indices()
            .iter()
            .map(|&i| g.edges()[i].w)
            .product()
    }
}

fn check_tree(g: &WeightedGraph, t: &SpanningTree) -> Result<()> {
    SpanningTree::new(g, t.edge_ids.clone()).map(|_| ())
}

/// Total stretch by summing `w(e) / w(e')` along each tree path.
pub fn stretch_direct(g: &WeightedGraph, t: &SpanningTree) -> Result<f64> {
    check_tree(g, t)?;
    let n = g.n_vertices();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &i in t.edge_ids.indices() {
        let e = g.edges()[i];
        adj[e.u].push((e.v, e.w));
        adj[e.v].push((e.u, e.w));
    }
    // root at 0: parent, weight of the edge to the parent, depth
    let mut parent = vec![usize::MAX; n];
    let mut up_w = vec![0.0; n];
    let mut depth = vec![0usize; n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(a) = stack.pop() {
        for &(b, w) in &adj[a] {
            if parent[b] == usize::MAX {
                parent[b] = a;
                up_w[b] = w;
                depth[b] = depth[a] + 1;
                stack.push(b);
            }
        }
    }
    let mut total = 0.0;
    for e in g.edges() {
        let (mut a, mut b) = (e.u, e.v);
        let mut inv = 0.0;
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            inv += 1.0 / up_w[a];
            a = parent[a];
        }
        total += e.w * inv;
    }
    Ok(total)
}

/// `Tr(L_G L_T^+)` with `L_T^+ = (L_T + J/n)^{-1} - J/n`.
pub fn stretch_trace(g: &WeightedGraph, t: &SpanningTree) -> Result<f64> {
    check_tree(g, t)?;
    let n = g.n_vertices();
    let lt = laplacian_of(n, t.edge_ids.indices().iter().map(|&i| &g.edges()[i]));
    let j = 1.0 / n as f64;
    let shifted = lt.to_nalgebra().add_scalar(j);
    let inv = shifted
        .try_inverse()
        .ok_or_else(|| Error::NotASpanningTree("tree Laplacian is singular".into()))?
        .add_scalar(-j);
    let lg = g.laplacian().to_nalgebra();
    Ok((lg * inv).trace())
}

/// `||Y_S^{-1}||_F^2` for the tree's edge set.
pub fn stretch_subset(g: &WeightedGraph, t: &SpanningTree) -> Result<f64> {
    check_tree(g, t)?;
    let y = g.right_factor()?;
    linalg::pinv_fro_sq(&columns(&y, &t.edge_ids)?)
        .map_err(|_| Error::NotASpanningTree("Y_S is singular".into()))
}

/// The tree whose edges are `s`, accepted iff `Y_S` has full rank.
pub fn tree_from_subset(g: &WeightedGraph, s: &Subset) -> Result<SpanningTree> {
    let y = g.right_factor()?;
    if s.len() != y.rows() {
        return Err(Error::BadK {
            k: s.len(),
            reason: format!("a spanning tree has {} edges", y.rows()),
        });
    }
    let ys = columns(&y, s)?;
    if linalg::rank(&ys, 1e-8) < y.rows() {
        return Err(Error::NotATree);
    }
    Ok(SpanningTree {
        edge_ids: s.clone(),
    })
}

/// `(n - 1)(m - n + 2)`.
pub fn stretch_bound(n_vertices: usize, m: usize) -> f64 {
    ((n_vertices - 1) * (m + 2 - n_vertices)) as f64
}

/// Greedy edge removal on `Y` down to `n - 1` edges. The rank guard refuses
/// any removal that would disconnect the graph.
pub fn greedy_tree(g: &WeightedGraph) -> Result<SpanningTree> {
    let y = g.right_factor()?;
    let r = greedy_remove_frobenius(&y, y.rows())?;
    SpanningTree::new(g, r.indices)
}

/// Maximum weight-product tree: Kruskal over edges by descending weight,
/// ties taken in edge order.
pub fn max_weight_tree(g: &WeightedGraph) -> Result<SpanningTree> {
    g.require_connected()?;
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by(|&a, &b| g.edges()[b].w.total_cmp(&g.edges()[a].w));
    let mut uf = UnionFind::new(g.n_vertices());
    let picked: Vec<usize> = order
        .into_iter()
        .filter(|&i| uf.union(g.edges()[i].u, g.edges()[i].v))
        .collect();
    SpanningTree::new(g, Subset::from_unsorted(picked, g.m())?)
}

/// Repeated random trees with probability proportional to `prod w(e)`.
#[derive(Debug, Clone)]
pub struct TreeSampler {
    y: Matrix,
}

impl TreeSampler {
    pub fn new(g: &WeightedGraph) -> Result<Self> {
        Ok(Self {
            y: g.right_factor()?,
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> SpanningTree {
        SpanningTree {
            edge_ids: volsamp_draw_fast(&self.y, rng),
        }
    }
}

pub fn random_tree(g: &WeightedGraph, seed: u64) -> Result<SpanningTree> {
    let tree = TreeSampler::new(g)?.sample(&mut rng_from_seed(seed));
    check_tree(g, &tree)?;
    Ok(tree)
}

/// Every spanning tree of `g`, in lexicographic order of edge ids.
pub fn all_spanning_trees(g: &WeightedGraph) -> Result<Vec<SpanningTree>> {
    g.require_connected()?;
    let k = g.n_vertices() - 1;
    check_enumerable(g.m(), k)?;
    let mut out = Vec::new();
    linalg::for_each_subset(g.m(), k, |idx| {
        let s = Subset(idx.to_vec());
        if g.is_spanning_tree(&s) {
            out.push(SpanningTree { edge_ids: s });
        }
    });
    Ok(out)
}

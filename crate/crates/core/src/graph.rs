//! Weighted graphs, vertex/edge fields, discrete gradient and divergence.
//!
//! Edges are stored once with `i < j`; gradient-type edge fields carry the
//! value for the stored orientation and behave antisymmetrically for the
//! reverse one. All p-norms over edge functions follow the ordered-pair
//! double-sum convention, so stored-edge sums are counted twice.

use crate::error::{Error, Result};

/// Undirected weighted graph with symmetric positive edge weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Per vertex: (neighbor, edge index).
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

impl WeightedGraph {
    /// Builds a graph from an edge list. Zero-weight edges are dropped,
    /// self-loops and negative weights are rejected, and duplicate pairs
    /// with conflicting weights are rejected as nonsymmetric data.
    pub fn new(n: usize, raw_edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut edges: Vec<Edge> = Vec::with_capacity(raw_edges.len());
        for &(i, j, w) in raw_edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!(
                    "vertex index out of range: ({i},{j}) with n={n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i},{j}) has invalid weight {w}"
                )));
            }
            if w == 0.0 {
                continue;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            edges.push(Edge { i: a, j: b, w });
        }
        edges.sort_by(|x, y| (x.i, x.j).cmp(&(y.i, y.j)));
        let mut dedup: Vec<Edge> = Vec::with_capacity(edges.len());
        for e in edges {
            match dedup.last() {
                Some(last) if last.i == e.i && last.j == e.j => {
                    if (last.w - e.w).abs() > 1e-12 * (1.0 + last.w.abs()) {
                        return Err(Error::InvalidGraph(format!(
                            "nonsymmetric weights for edge ({},{}): {} vs {}",
                            e.i, e.j, last.w, e.w
                        )));
                    }
                }
                _ => dedup.push(e),
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (idx, e) in dedup.iter().enumerate() {
            adj[e.i].push((e.j, idx));
            adj[e.j].push((e.i, idx));
        }
        Ok(Self { n, edges: dedup, adj })
    }

    /// 4-neighbor grid graph on `nx * ny` vertices with uniform weight `w`.
    /// Vertex (ix, iy) has index `iy * nx + ix`.
    pub fn grid2d(nx: usize, ny: usize, w: f64) -> Result<Self> {
        let mut edges = Vec::with_capacity(2 * nx * ny);
        let id = |ix: usize, iy: usize| iy * nx + ix;
        for iy in 0..ny {
            for ix in 0..nx {
                if ix + 1 < nx {
                    edges.push((id(ix, iy), id(ix + 1, iy), w));
                }
                if iy + 1 < ny {
                    edges.push((id(ix, iy), id(ix, iy + 1), w));
                }
            }
        }
        Self::new(nx * ny, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// Weighted degree max_x sum_y w(x,y), used for operator norm bounds.
    pub fn max_weighted_degree(&self) -> f64 {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.i] += e.w;
            deg[e.j] += e.w;
        }
        deg.into_iter().fold(0.0, f64::max)
    }

    /// Component label per vertex; labels are contiguous starting at 0.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &(u, _) in &self.adj[v] {
                    if label[u] == usize::MAX {
                        label[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }
}

/// Real-valued function on the vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexField(pub Vec<f64>);

/// Real value per stored edge (one orientation; the reverse is the negation
/// for gradient-type fields).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField(pub Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    LInf,
}

impl NormKind {
    /// Exponent p used for duality bookkeeping (infinity for LInf).
    pub fn exponent(self) -> f64 {
        match self {
            NormKind::L1 => 1.0,
            NormKind::L2 => 2.0,
            NormKind::LInf => f64::INFINITY,
        }
    }
}

fn norm_of(values: &[f64], k: NormKind, double: bool) -> f64 {
    let m = if double { 2.0 } else { 1.0 };
    match k {
        NormKind::L1 => m * values.iter().map(|v| v.abs()).sum::<f64>(),
        NormKind::L2 => (m * values.iter().map(|v| v * v).sum::<f64>()).sqrt(),
        NormKind::LInf => values.iter().fold(0.0, |a, v| a.max(v.abs())),
    }
}

impl VertexField {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self, k: NormKind) -> f64 {
        norm_of(&self.0, k, false)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| c * v).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn axpy(&self, c: f64, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }

    pub fn min_entry(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.0.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::DegenerateInput("non-finite vertex field entry".into()))
        }
    }
}

impl EdgeField {
    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// p-norm over ordered vertex pairs: stored edges count twice.
    pub fn norm(&self, k: NormKind) -> f64 {
        norm_of(&self.0, k, true)
    }

    /// Inner product over ordered vertex pairs (factor two per stored edge).
    pub fn dot(&self, other: &Self) -> f64 {
        2.0 * self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.0.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::DegenerateInput("non-finite edge field entry".into()))
        }
    }
}

/// Graph gradient: per stored edge (i,j) the value sqrt(w) * (u_j - u_i).
pub fn grad(g: &WeightedGraph, u: &VertexField) -> Result<EdgeField> {
    if u.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: u.len() });
    }
    let vals = g
        .edges()
        .iter()
        .map(|e| e.w.sqrt() * (u.0[e.j] - u.0[e.i]))
        .collect();
    Ok(EdgeField(vals))
}

/// Graph divergence with the antisymmetric-extension convention
/// h(y,x) = -h(x,y): div h(x) = sum_y sqrt(w(x,y)) (h(y,x) - h(x,y)).
///
/// With this sign convention div is the plain adjoint of grad in the
/// double-sum edge inner product: <grad u, h> = <u, div h>.
pub fn div(g: &WeightedGraph, h: &EdgeField) -> Result<VertexField> {
    if h.len() != g.edges().len() {
        return Err(Error::DimensionMismatch { expected: g.edges().len(), got: h.len() });
    }
    let mut out = vec![0.0; g.n()];
    for (e, &hv) in g.edges().iter().zip(&h.0) {
        let s = e.w.sqrt();
        out[e.i] -= 2.0 * s * hv;
        out[e.j] += 2.0 * s * hv;
    }
    Ok(VertexField(out))
}

/// Componentwise mean of `u`, i.e. the orthogonal projection onto the space
/// of componentwise-constant vertex fields.
pub fn componentwise_mean(g: &WeightedGraph, u: &VertexField) -> Result<VertexField> {
    if u.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: u.len() });
    }
    let (labels, count) = g.connected_components();
    let mut sums = vec![0.0; count];
    let mut sizes = vec![0usize; count];
    for (v, &l) in labels.iter().enumerate() {
        sums[l] += u.0[v];
        sizes[l] += 1;
    }
    let means: Vec<f64> = sums
        .iter()
        .zip(&sizes)
        .map(|(s, &c)| s / c as f64)
        .collect();
    Ok(VertexField(labels.iter().map(|&l| means[l]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn two_node(w: f64) -> WeightedGraph {
        WeightedGraph::new(2, &[(0, 1, w)]).unwrap()
    }

    #[test]
    fn grad_two_node_unit() {
        let g = two_node(1.0);
        let h = grad(&g, &VertexField(vec![0.0, 1.0])).unwrap();
        assert_eq!(h.0, vec![1.0]);
    }

    #[test]
    fn grad_constant_is_zero() {
        let g = WeightedGraph::grid2d(4, 3, 2.0).unwrap();
        let h = grad(&g, &VertexField(vec![3.5; 12])).unwrap();
        assert!(h.0.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grad_two_node_weighted() {
        let g = two_node(4.0);
        let h = grad(&g, &VertexField(vec![1.0, -1.0])).unwrap();
        assert_eq!(h.0, vec![-4.0]);
    }

    #[test]
    fn div_zero_field() {
        let g = WeightedGraph::grid2d(3, 3, 1.0).unwrap();
        let d = div(&g, &EdgeField::zeros(g.edges().len())).unwrap();
        assert!(d.0.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn div_two_node_hand_value() {
        let g = two_node(1.0);
        let d = div(&g, &EdgeField(vec![1.0])).unwrap();
        assert_eq!(d.0, vec![-2.0, 2.0]);
    }

    #[test]
    fn adjointness_random_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 8;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j, rng.gen_range(0.1..3.0)));
                    }
                }
            }
            let g = WeightedGraph::new(n, &edges).unwrap();
            let u = VertexField((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let h = EdgeField(
                (0..g.edges().len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            );
            let gu = grad(&g, &u).unwrap();
            let dh = div(&g, &h).unwrap();
            let lhs = gu.dot(&h);
            let rhs = u.dot(&dh);
            assert!(
                (lhs - rhs).abs() <= 1e-10 * (gu.norm(NormKind::L2) * h.norm(NormKind::L2) + 1.0),
                "adjointness violated: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn grad_kernel_is_componentwise_constants() {
        // Two components: {0,1} and {2,3}.
        let g = WeightedGraph::new(4, &[(0, 1, 1.0), (2, 3, 2.0)]).unwrap();
        let constant = VertexField(vec![5.0, 5.0, -1.0, -1.0]);
        assert_eq!(grad(&g, &constant).unwrap().norm(NormKind::L2), 0.0);
        let not_constant = VertexField(vec![5.0, 4.0, -1.0, -1.0]);
        assert!(grad(&g, &not_constant).unwrap().norm(NormKind::L2) > 0.0);
    }

    #[test]
    fn norms_hand_values() {
        let u = VertexField(vec![3.0, 4.0]);
        assert_eq!(u.norm(NormKind::L2), 5.0);
        let v = VertexField(vec![3.0, -4.0]);
        assert_eq!(v.norm(NormKind::L1), 7.0);
        assert_eq!(v.norm(NormKind::LInf), 4.0);
    }

    #[test]
    fn components_counts() {
        let single = WeightedGraph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(single.connected_components().1, 1);
        let two = WeightedGraph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(two.connected_components().1, 2);
        let grid = WeightedGraph::grid2d(5, 5, 1.0).unwrap();
        assert_eq!(grid.connected_components().1, 1);
    }

    #[test]
    fn zero_weight_edges_dropped() {
        let g = WeightedGraph::new(3, &[(0, 1, 0.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.connected_components().1, 2);
    }

    #[test]
    fn invalid_graphs_rejected() {
        assert!(WeightedGraph::new(2, &[(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, -1.0)]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 3, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn componentwise_mean_values() {
        let g = WeightedGraph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let u = VertexField(vec![0.0, 2.0, 10.0, 20.0]);
        let m = componentwise_mean(&g, &u).unwrap();
        assert_eq!(m.0, vec![1.0, 1.0, 15.0, 15.0]);
    }

    #[test]
    fn dimension_mismatch_errors() {
        let g = two_node(1.0);
        assert!(grad(&g, &VertexField(vec![1.0])).is_err());
        assert!(div(&g, &EdgeField(vec![1.0, 2.0])).is_err());
    }

    #[test]
    fn grid_edge_count() {
        let g = WeightedGraph::grid2d(4, 4, 16.0).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.edges().len(), 24);
        assert!(g.edges().iter().all(|e| e.w == 16.0));
    }
}

//! Energy functionals on weighted graphs: evaluation, subgradient selection,
//! homogeneity metadata, Rayleigh quotients and nullspace projections.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{componentwise_mean, NormKind, VertexField, WeightedGraph};

/// Which energy is being used. The grid TV kind keeps its own lattice
/// dimensions since its stencil is not derived from the edge list.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalKind {
    /// J(u) = sum_{x,y} w(x,y)^{p/2} |u(y)-u(x)|^p (ordered pairs).
    GraphDirichlet { p: f64 },
    /// Graph total variation, the p = 1 Dirichlet energy.
    GraphTV,
    /// Central-difference total variation on an nx-by-ny grid with spacing h,
    /// replicate-padded at the boundary.
    GridTVCentral { nx: usize, ny: usize, h: f64 },
    /// Largest local Lipschitz constant max sqrt(w)|u(y)-u(x)| subject to
    /// u = 0 on the constraint set.
    GraphLipschitz { constraint: Vec<usize> },
}

/// Evaluation result: constrained kinds report infeasibility as a typed flag
/// rather than a sentinel float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Energy {
    Value(f64),
    Infeasible,
}

impl Energy {
    pub fn value(self) -> Result<f64> {
        match self {
            Energy::Value(v) => Ok(v),
            Energy::Infeasible => Err(Error::Infeasible(
                "field violates the functional's constraint set".into(),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Functional {
    kind: FunctionalKind,
    graph: Arc<WeightedGraph>,
}

impl Functional {
    pub fn new(kind: FunctionalKind, graph: Arc<WeightedGraph>) -> Result<Self> {
        match &kind {
            FunctionalKind::GraphDirichlet { p } => {
                if !p.is_finite() || *p < 1.0 {
                    return Err(Error::InvalidConfig(format!("dirichlet exponent p={p} < 1")));
                }
            }
            FunctionalKind::GridTVCentral { nx, ny, h } => {
                if nx * ny != graph.n() {
                    return Err(Error::DimensionMismatch { expected: graph.n(), got: nx * ny });
                }
                if *h <= 0.0 {
                    return Err(Error::InvalidConfig(format!("grid spacing h={h} <= 0")));
                }
            }
            FunctionalKind::GraphLipschitz { constraint } => {
                if constraint.is_empty() {
                    return Err(Error::InvalidConfig(
                        "graph_lipschitz requires a nonempty constraint set".into(),
                    ));
                }
                if constraint.iter().any(|&v| v >= graph.n()) {
                    return Err(Error::InvalidConfig("constraint vertex out of range".into()));
                }
            }
            FunctionalKind::GraphTV => {}
        }
        Ok(Self { kind, graph })
    }

    pub fn dirichlet(graph: Arc<WeightedGraph>, p: f64) -> Result<Self> {
        Self::new(FunctionalKind::GraphDirichlet { p }, graph)
    }

    pub fn tv(graph: Arc<WeightedGraph>) -> Self {
        Self::new(FunctionalKind::GraphTV, graph).expect("graph TV has no parameters")
    }

    pub fn grid_tv_central(graph: Arc<WeightedGraph>, nx: usize, ny: usize, h: f64) -> Result<Self> {
        Self::new(FunctionalKind::GridTVCentral { nx, ny, h }, graph)
    }

    pub fn lipschitz(graph: Arc<WeightedGraph>, constraint: Vec<usize>) -> Result<Self> {
        Self::new(FunctionalKind::GraphLipschitz { constraint }, graph)
    }

    pub fn kind(&self) -> &FunctionalKind {
        &self.kind
    }

    pub fn graph(&self) -> &Arc<WeightedGraph> {
        &self.graph
    }

    /// Homogeneity degree alpha with J(cu) = |c|^alpha J(u).
    pub fn alpha(&self) -> f64 {
        match &self.kind {
            FunctionalKind::GraphDirichlet { p } => *p,
            _ => 1.0,
        }
    }

    pub fn is_one_homogeneous(&self) -> bool {
        self.alpha() == 1.0
    }

    pub fn constraint(&self) -> &[usize] {
        match &self.kind {
            FunctionalKind::GraphLipschitz { constraint } => constraint,
            _ => &[],
        }
    }

    fn check_len(&self, u: &VertexField) -> Result<()> {
        if u.len() != self.graph.n() {
            Err(Error::DimensionMismatch { expected: self.graph.n(), got: u.len() })
        } else {
            Ok(())
        }
    }

    fn feasible(&self, u: &VertexField) -> bool {
        self.constraint().iter().all(|&v| u.0[v] == 0.0)
    }

    /// Projects onto the constraint set (zeroes the constrained vertices).
    /// Identity for unconstrained kinds.
    pub fn project_feasible(&self, u: &VertexField) -> VertexField {
        let mut out = u.clone();
        for &v in self.constraint() {
            out.0[v] = 0.0;
        }
        out
    }

    pub fn evaluate(&self, u: &VertexField) -> Result<Energy> {
        self.check_len(u)?;
        u.check_finite()?;
        let g = &self.graph;
        let val = match &self.kind {
            FunctionalKind::GraphDirichlet { p } => {
                let p = *p;
                2.0 * g
                    .edges()
                    .iter()
                    .map(|e| e.w.powf(p / 2.0) * (u.0[e.j] - u.0[e.i]).abs().powf(p))
                    .sum::<f64>()
            }
            FunctionalKind::GraphTV => {
                2.0 * g
                    .edges()
                    .iter()
                    .map(|e| e.w.sqrt() * (u.0[e.j] - u.0[e.i]).abs())
                    .sum::<f64>()
            }
            FunctionalKind::GridTVCentral { nx, ny, h } => {
                let mut total = 0.0;
                for iy in 0..*ny {
                    for ix in 0..*nx {
                        let (dx, dy) = grid_central_diffs(u, *nx, *ny, ix, iy);
                        total += (dx * dx + dy * dy).sqrt();
                    }
                }
                total / (2.0 * h)
            }
            FunctionalKind::GraphLipschitz { .. } => {
                if !self.feasible(u) {
                    return Ok(Energy::Infeasible);
                }
                g.edges()
                    .iter()
                    .map(|e| e.w.sqrt() * (u.0[e.j] - u.0[e.i]).abs())
                    .fold(0.0, f64::max)
            }
        };
        Ok(Energy::Value(val))
    }

    /// One element of the subdifferential satisfying the Euler identity
    /// <zeta, u> = alpha J(u). At kinks the selection is deterministic:
    /// sign(0) = 0, and for the Lipschitz max the subgradient is distributed
    /// uniformly over all argmax edges.
    pub fn subgradient(&self, u: &VertexField) -> Result<VertexField> {
        self.check_len(u)?;
        let g = &self.graph;
        let mut out = vec![0.0; g.n()];
        match &self.kind {
            FunctionalKind::GraphDirichlet { p } => {
                let p = *p;
                for e in g.edges() {
                    let d = u.0[e.j] - u.0[e.i];
                    if d == 0.0 {
                        continue;
                    }
                    let c = 2.0 * p * e.w.powf(p / 2.0) * d.abs().powf(p - 1.0) * d.signum();
                    out[e.i] -= c;
                    out[e.j] += c;
                }
            }
            FunctionalKind::GraphTV => {
                for e in g.edges() {
                    let d = u.0[e.j] - u.0[e.i];
                    if d == 0.0 {
                        continue;
                    }
                    let c = 2.0 * e.w.sqrt() * d.signum();
                    out[e.i] -= c;
                    out[e.j] += c;
                }
            }
            FunctionalKind::GridTVCentral { nx, ny, h } => {
                for iy in 0..*ny {
                    for ix in 0..*nx {
                        let (dx, dy) = grid_central_diffs(u, *nx, *ny, ix, iy);
                        let norm = (dx * dx + dy * dy).sqrt();
                        if norm == 0.0 {
                            continue;
                        }
                        let cx = dx / (2.0 * h * norm);
                        let cy = dy / (2.0 * h * norm);
                        scatter_central(&mut out, *nx, *ny, ix, iy, cx, cy);
                    }
                }
            }
            FunctionalKind::GraphLipschitz { .. } => {
                let j = self.evaluate(u)?.value()?;
                if j > 0.0 {
                    let argmax: Vec<usize> = g
                        .edges()
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| {
                            (e.w.sqrt() * (u.0[e.j] - u.0[e.i]).abs() - j).abs()
                                <= 1e-12 * (1.0 + j)
                        })
                        .map(|(idx, _)| idx)
                        .collect();
                    let share = 1.0 / argmax.len() as f64;
                    for idx in argmax {
                        let e = g.edges()[idx];
                        let d = u.0[e.j] - u.0[e.i];
                        let c = share * e.w.sqrt() * d.signum();
                        out[e.i] -= c;
                        out[e.j] += c;
                    }
                }
            }
        }
        let zeta = VertexField(out);
        zeta.check_finite()?;
        Ok(zeta)
    }

    /// Orthogonal projection onto the nullspace N(J): componentwise means for
    /// the Dirichlet/TV kinds, zero for the constrained Lipschitz kind.
    pub fn nullspace_project(&self, u: &VertexField) -> Result<VertexField> {
        self.check_len(u)?;
        match &self.kind {
            FunctionalKind::GraphLipschitz { .. } => Ok(VertexField::zeros(u.len())),
            _ => componentwise_mean(&self.graph, u),
        }
    }

    /// u minus its nullspace projection.
    pub fn nullspace_deflate(&self, u: &VertexField) -> Result<VertexField> {
        Ok(u.sub(&self.nullspace_project(u)?))
    }

    /// Generalized Rayleigh quotient alpha J(u) / ||u - u_bar||^alpha in the
    /// requested norm.
    pub fn rayleigh(&self, u: &VertexField, norm: NormKind) -> Result<f64> {
        let alpha = self.alpha();
        let j = self.evaluate(u)?.value()?;
        let dev = self.nullspace_deflate(u)?;
        let d = dev.norm(norm);
        if d == 0.0 || j == 0.0 {
            return Err(Error::DegenerateInput(
                "Rayleigh quotient undefined on the nullspace".into(),
            ));
        }
        Ok(alpha * j / d.powf(alpha))
    }
}

/// Central differences at lattice point (ix, iy) with replicate padding.
fn grid_central_diffs(u: &VertexField, nx: usize, ny: usize, ix: usize, iy: usize) -> (f64, f64) {
    let id = |x: usize, y: usize| y * nx + x;
    let xp = if ix + 1 < nx { ix + 1 } else { ix };
    let xm = ix.saturating_sub(1);
    let yp = if iy + 1 < ny { iy + 1 } else { iy };
    let ym = iy.saturating_sub(1);
    (u.0[id(xp, iy)] - u.0[id(xm, iy)], u.0[id(ix, yp)] - u.0[id(ix, ym)])
}

/// Adjoint scatter of the central-difference stencil at (ix, iy).
fn scatter_central(out: &mut [f64], nx: usize, ny: usize, ix: usize, iy: usize, cx: f64, cy: f64) {
    let id = |x: usize, y: usize| y * nx + x;
    let xp = if ix + 1 < nx { ix + 1 } else { ix };
    let xm = ix.saturating_sub(1);
    let yp = if iy + 1 < ny { iy + 1 } else { iy };
    let ym = iy.saturating_sub(1);
    out[id(xp, iy)] += cx;
    out[id(xm, iy)] -= cx;
    out[id(ix, yp)] += cy;
    out[id(ix, ym)] -= cy;
}

/// Serializable functional descriptor; resolved against a graph (and grid
/// dimensions where applicable) to produce a [`Functional`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalDesc {
    GraphDirichlet { p: f64 },
    GraphTv,
    GridTvCentral { h: f64 },
    GraphLipschitz { constraint: Vec<usize> },
}

impl FunctionalDesc {
    /// `grid_dims` must be provided for the grid TV kind; it comes from the
    /// grid spec the graph was built from.
    pub fn resolve(
        &self,
        graph: Arc<WeightedGraph>,
        grid_dims: Option<(usize, usize)>,
    ) -> Result<Functional> {
        match self {
            FunctionalDesc::GraphDirichlet { p } => Functional::dirichlet(graph, *p),
            FunctionalDesc::GraphTv => Ok(Functional::tv(graph)),
            FunctionalDesc::GridTvCentral { h } => {
                let (nx, ny) = grid_dims.ok_or_else(|| {
                    Error::InvalidConfig(
                        "grid_tv_central requires a grid2d graph spec (nx, ny unknown)".into(),
                    )
                })?;
                Functional::grid_tv_central(graph, nx, ny, *h)
            }
            FunctionalDesc::GraphLipschitz { constraint } => {
                Functional::lipschitz(graph, constraint.clone())
            }
        }
    }
}

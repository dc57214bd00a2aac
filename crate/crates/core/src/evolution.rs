//! The three-term evolution `u_t = c_s U_s + c_e U_e + c_d U_d` and its
//! explicit Jacobi time stepping.
//!
//! * `U_s = B - u` relaxes toward a provisional binary target `B`.
//! * `U_e = -E sign(lap u) |grad u|` is a shock filter gated by the edge map.
//! * `U_d` is Perona-Malik diffusion in divergence form with
//!   `g(s) = 1 / (1 + (s/k)^2)`.
//!
//! The edge and diffusion terms are written over the four one-sided axis
//! differences of a pixel. The fractional module swaps those differences for
//! Grunwald-Letnikov ones and reuses the same term code.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractional::{step_fractional, EvolutionHistory, GlStencil};
use crate::grid::{BinaryMap, Grid, RealGrid, ScalarField};

/// Largest stable explicit step for the 4-neighbour stencil with `g <= 1`.
pub const MAX_TIME_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdeParams {
    /// Source coefficient.
    pub cs: f64,
    /// Edge (shock) coefficient.
    pub ce: f64,
    /// Diffusion coefficient.
    pub cd: f64,
    pub dt: f64,
    pub max_iters: usize,
    /// Stop once the mean absolute per-pixel update falls below this.
    pub tol: f64,
    /// Perona-Malik contrast parameter.
    pub k_pm: f64,
    /// Differentiation order; 1 is the integer model.
    pub alpha: f64,
    /// Number of past iterates kept for the fractional time derivative.
    pub memory: usize,
    /// Number of taps of the fractional spatial differences.
    pub taps: usize,
}

impl Default for PdeParams {
    fn default() -> Self {
        PdeParams {
            cs: 1.0,
            ce: 1.0,
            cd: 0.2,
            dt: 0.2,
            max_iters: 20,
            tol: 1e-4,
            k_pm: 0.1,
            alpha: 1.0,
            memory: 8,
            taps: 8,
        }
    }
}

impl PdeParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        for (name, v) in [("cs", self.cs), ("ce", self.ce), ("cd", self.cd)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be a finite value >= 0, got {v}"));
            }
        }
        if !(self.dt > 0.0 && self.dt <= MAX_TIME_STEP) {
            return bad(format!("dt must lie in (0, {MAX_TIME_STEP}], got {}", self.dt));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1".into());
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be > 0, got {}", self.tol));
        }
        if !(self.k_pm > 0.0 && self.k_pm.is_finite()) {
            return bad(format!("k_pm must be > 0, got {}", self.k_pm));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if self.memory == 0 || self.taps == 0 {
            return bad("memory and taps must be >= 1".into());
        }
        Ok(())
    }

    pub fn is_integer_order(&self) -> bool {
        self.alpha == 1.0
    }
}

/// The three term grids, all evaluated from the same iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TermFields {
    pub source: RealGrid,
    pub edge: RealGrid,
    pub diffusion: RealGrid,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub field: ScalarField,
    pub iterations: usize,
    pub converged: bool,
    /// Mean absolute per-pixel update of every iteration run.
    pub updates: Vec<f64>,
}

/// Forward and backward differences of a pixel along both axes:
/// `fx ~ u(x+1) - u(x)`, `bx ~ u(x) - u(x-1)`, likewise for y.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisDifferences {
    pub fx: f64,
    pub bx: f64,
    pub fy: f64,
    pub by: f64,
}

pub(crate) trait DifferenceStencil {
    fn at(&self, u: &RealGrid, x: isize, y: isize) -> AxisDifferences;
}

/// Plain first differences with replicate boundary.
pub(crate) struct FirstDifferences;

impl DifferenceStencil for FirstDifferences {
    #[inline]
    fn at(&self, u: &RealGrid, x: isize, y: isize) -> AxisDifferences {
        let c = u.sample(x, y);
        AxisDifferences {
            fx: u.sample(x + 1, y) - c,
            bx: c - u.sample(x - 1, y),
            fy: u.sample(x, y + 1) - c,
            by: c - u.sample(x, y - 1),
        }
    }
}

#[inline]
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn edge_term_with(u: &RealGrid, edges: &RealGrid, d: &impl DifferenceStencil) -> RealGrid {
    Grid::from_fn(u.width(), u.height(), |x, y| {
        let e = edges.get(x, y);
        if e == 0.0 {
            return 0.0;
        }
        let s = d.at(u, x as isize, y as isize);
        let lap = (s.fx - s.bx) + (s.fy - s.by);
        let gx = (s.fx + s.bx) / 2.0;
        let gy = (s.fy + s.by) / 2.0;
        -e * sign(lap) * (gx * gx + gy * gy).sqrt()
    })
}

pub(crate) fn diffusion_term_with(u: &RealGrid, k_pm: f64, d: &impl DifferenceStencil) -> RealGrid {
    let inv_k2 = 1.0 / (k_pm * k_pm);
    let flux = |s: f64| s / (1.0 + s * s * inv_k2);
    Grid::from_fn(u.width(), u.height(), |x, y| {
        let s = d.at(u, x as isize, y as isize);
        // east + west + south + north, with g(|-b|)(-b) == -(g(|b|) b)
        flux(s.fx) - flux(s.bx) + flux(s.fy) - flux(s.by)
    })
}

/// `U_s = B - u`.
pub fn term_source(u: &ScalarField, target: &BinaryMap) -> Result<RealGrid> {
    u.ensure_same_shape(target, "source term: field and target differ in size")?;
    let data = u
        .data()
        .iter()
        .zip(target.data())
        .map(|(&v, &b)| f64::from(b) - v)
        .collect();
    Grid::new(u.width(), u.height(), data)
}

/// Edge-gated shock filter `-E sign(lap u) |grad u|`, `sign(0) = 0`.
pub fn term_edge(u: &ScalarField, edges: &ScalarField) -> Result<RealGrid> {
    u.ensure_same_shape(edges, "edge term: field and edge map differ in size")?;
    Ok(edge_term_with(u, edges, &FirstDifferences))
}

/// Perona-Malik `sum_n g(|d_n u|) d_n u` over the 4-neighbourhood.
pub fn term_diffusion(u: &ScalarField, k_pm: f64) -> Result<RealGrid> {
    if !(k_pm > 0.0) {
        return Err(Error::Parameter(format!("k_pm must be > 0, got {k_pm}")));
    }
    Ok(diffusion_term_with(u, k_pm, &FirstDifferences))
}

pub(crate) fn check_terms(u: &RealGrid, terms: &TermFields) -> Result<()> {
    u.ensure_same_shape(&terms.source, "source term size")?;
    u.ensure_same_shape(&terms.edge, "edge term size")?;
    u.ensure_same_shape(&terms.diffusion, "diffusion term size")
}

/// Weighted sum `c_s U_s + c_e U_e + c_d U_d` at pixel `i`.
#[inline]
pub(crate) fn forcing(terms: &TermFields, p: &PdeParams, i: usize) -> f64 {
    p.cs * terms.source.data()[i] + p.ce * terms.edge.data()[i] + p.cd * terms.diffusion.data()[i]
}

/// One explicit Jacobi step `clamp(u + dt (c_s U_s + c_e U_e + c_d U_d))`.
pub fn step_integer(u: &ScalarField, terms: &TermFields, p: &PdeParams) -> Result<ScalarField> {
    check_terms(u, terms)?;
    let data = u
        .data()
        .iter()
        .enumerate()
        .map(|(i, &v)| v + p.dt * forcing(terms, p, i))
        .collect();
    Ok(ScalarField::from_grid_clamped(Grid::new(u.width(), u.height(), data)?))
}

/// Evaluates all three terms at `u`, with fractional spatial differences
/// when `alpha < 1`.
pub fn compute_terms(u: &ScalarField, edges: &ScalarField, target: &BinaryMap, p: &PdeParams) -> Result<TermFields> {
    let source = term_source(u, target)?;
    u.ensure_same_shape(edges, "edge map size")?;
    let (edge, diffusion) = if p.is_integer_order() {
        (term_edge(u, edges)?, term_diffusion(u, p.k_pm)?)
    } else {
        let gl = GlStencil::new(p.alpha, p.taps)?;
        (edge_term_with(u, edges, &gl), diffusion_term_with(u, p.k_pm, &gl))
    };
    Ok(TermFields {
        source,
        edge,
        diffusion,
    })
}

fn mean_abs_update(a: &ScalarField, b: &ScalarField) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

/// Iterates the model from `input` until the mean absolute update drops
/// below `p.tol` or `p.max_iters` steps have run.
pub fn run_evolution(
    input: &ScalarField,
    p: &PdeParams,
    edges: &ScalarField,
    target: &BinaryMap,
) -> Result<EvolutionResult> {
    p.validate()?;
    input.ensure_same_shape(edges, "edge map size")?;
    input.ensure_same_shape(target, "target size")?;

    let mut u = input.clone();
    let mut history = EvolutionHistory::new(p.memory)?;
    let mut updates = Vec::with_capacity(p.max_iters);
    let mut converged = false;

    for _ in 0..p.max_iters {
        let terms = compute_terms(&u, edges, target, p)?;
        let next = if p.is_integer_order() {
            step_integer(&u, &terms, p)?
        } else {
            history.push(u.clone())?;
            step_fractional(&history, &terms, p)?
        };
        let update = mean_abs_update(&next, &u);
        updates.push(update);
        u = next;
        if update < p.tol {
            converged = true;
            break;
        }
    }

    Ok(EvolutionResult {
        field: u,
        iterations: updates.len(),
        converged,
        updates,
    })
}

//! Grunwald-Letnikov machinery for the fractional-order model
//! `d^a u / dt^a = c_s U_s + c_e U_e^a + c_d U_d^a`.
//!
//! The same order `a` is used in time (short-memory GL sum over past
//! iterates) and in space (GL differences replacing the first differences of
//! the edge and diffusion terms). At `a = 1` every operator here reduces
//! exactly to its integer-order counterpart.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::evolution::{
    check_terms, diffusion_term_with, edge_term_with, forcing, AxisDifferences, DifferenceStencil, PdeParams,
    TermFields,
};
use crate::grid::{Grid, RealGrid, ScalarField};

/// GL weights `w_0 = 1`, `w_k = (1 - (a+1)/k) w_{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlCoefficients {
    pub order: f64,
    pub weights: Vec<f64>,
}

impl GlCoefficients {
    pub fn depth(&self) -> usize {
        self.weights.len() - 1
    }
}

/// Weights `w_0..=w_K` of order `alpha` in `(0, 1]`.
pub fn gl_coefficients(alpha: f64, depth: usize) -> Result<GlCoefficients> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!("GL order must lie in (0, 1], got {alpha}")));
    }
    if depth == 0 {
        return Err(Error::Parameter("GL depth must be >= 1".into()));
    }
    let mut weights = Vec::with_capacity(depth + 1);
    weights.push(1.0);
    for k in 1..=depth {
        let prev = weights[k - 1];
        weights.push((1.0 - (alpha + 1.0) / k as f64) * prev);
    }
    Ok(GlCoefficients { order: alpha, weights })
}

/// Direction of a one-sided GL difference. `XPlus` looks back along `-x`
/// (`u(x) - u(x-1)` at order 1), `XMinus` along `+x`, and likewise for y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
}

impl Direction {
    fn step(self) -> (isize, isize) {
        match self {
            Direction::XPlus => (-1, 0),
            Direction::XMinus => (1, 0),
            Direction::YPlus => (0, -1),
            Direction::YMinus => (0, 1),
        }
    }
}

#[inline]
fn gl_at(u: &RealGrid, weights: &[f64], x: isize, y: isize, (sx, sy): (isize, isize)) -> f64 {
    let mut acc = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        let k = k as isize;
        acc += w * u.sample(x + k * sx, y + k * sy);
    }
    acc
}

/// `sum_k w_k u(p - k d)` with replicate boundary.
pub fn frac_gradient(u: &RealGrid, alpha: f64, taps: usize, direction: Direction) -> Result<RealGrid> {
    let gl = gl_coefficients(alpha, taps)?;
    let step = direction.step();
    Ok(Grid::from_fn(u.width(), u.height(), |x, y| {
        gl_at(u, &gl.weights, x as isize, y as isize, step)
    }))
}

/// GL replacement for first differences: the forward difference at `x` is
/// the backward-looking GL difference evaluated at `x + 1`.
pub(crate) struct GlStencil {
    weights: Vec<f64>,
}

impl GlStencil {
    pub(crate) fn new(alpha: f64, taps: usize) -> Result<Self> {
        Ok(GlStencil {
            weights: gl_coefficients(alpha, taps)?.weights,
        })
    }
}

impl DifferenceStencil for GlStencil {
    #[inline]
    fn at(&self, u: &RealGrid, x: isize, y: isize) -> AxisDifferences {
        let w = &self.weights;
        AxisDifferences {
            fx: gl_at(u, w, x + 1, y, (-1, 0)),
            bx: gl_at(u, w, x, y, (-1, 0)),
            fy: gl_at(u, w, x, y + 1, (0, -1)),
            by: gl_at(u, w, x, y, (0, -1)),
        }
    }
}

/// Fractional edge term `U_e^a`.
pub fn term_edge_frac(u: &ScalarField, edges: &ScalarField, alpha: f64, taps: usize) -> Result<RealGrid> {
    u.ensure_same_shape(edges, "edge term: field and edge map differ in size")?;
    Ok(edge_term_with(u, edges, &GlStencil::new(alpha, taps)?))
}

/// Fractional diffusion term `U_d^a`, in flux-divergence form so constant
/// fields give exactly zero for any order.
pub fn term_diffusion_frac(u: &ScalarField, k_pm: f64, alpha: f64, taps: usize) -> Result<RealGrid> {
    if !(k_pm > 0.0) {
        return Err(Error::Parameter(format!("k_pm must be > 0, got {k_pm}")));
    }
    Ok(diffusion_term_with(u, k_pm, &GlStencil::new(alpha, taps)?))
}

/// Past iterates, most recent first, bounded by the memory depth.
#[derive(Debug, Clone)]
pub struct EvolutionHistory {
    capacity: usize,
    entries: VecDeque<ScalarField>,
}

impl EvolutionHistory {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Parameter("history capacity must be >= 1".into()));
        }
        Ok(EvolutionHistory {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        })
    }

    /// Records the newest iterate, dropping the oldest beyond capacity.
    pub fn push(&mut self, u: ScalarField) -> Result<()> {
        if let Some(first) = self.entries.front() {
            first.ensure_same_shape(&u, "history entries differ in size")?;
        }
        self.entries.push_front(u);
        self.entries.truncate(self.capacity);
        Ok(())
    }

    pub fn latest(&self) -> Option<&ScalarField> {
        self.entries.front()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &ScalarField> {
        self.entries.iter()
    }
}

/// Explicit GL step
/// `u^{n+1} = clamp(dt^a F(u^n) - sum_{k>=1} w_k u^{n+1-k})`
/// over the stored history.
pub fn step_fractional(history: &EvolutionHistory, terms: &TermFields, p: &PdeParams) -> Result<ScalarField> {
    let latest = history
        .latest()
        .ok_or_else(|| Error::State("fractional step needs at least one past iterate".into()))?;
    check_terms(latest, terms)?;
    let gl = gl_coefficients(p.alpha, history.capacity())?;
    let scale = p.dt.powf(p.alpha);
    let past: Vec<&[f64]> = history.iter().map(|f| f.data()).collect();
    let data = (0..latest.len())
        .map(|i| {
            let mut acc = scale * forcing(terms, p, i);
            for (k, u) in past.iter().enumerate() {
                acc -= gl.weights[k + 1] * u[i];
            }
            acc
        })
        .collect();
    Ok(ScalarField::from_grid_clamped(Grid::new(
        latest.width(),
        latest.height(),
        data,
    )?))
}

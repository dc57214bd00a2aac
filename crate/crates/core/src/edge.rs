//! Isotropic and anisotropic edge responses and their mean-weighted
//! combination into the edge map that modulates the shock term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, RealGrid, ScalarField};
use crate::preprocess::{local_contrast, log_normalize, ContrastConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeNormalization {
    /// Divide each response by its own maximum.
    #[default]
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EdgeConfig {
    /// Weight of the isotropic response; `1 - mix` goes to the anisotropic one.
    pub mix: f64,
    pub normalization: EdgeNormalization,
}

impl Default for EdgeConfig {
    fn default() -> Self {
        EdgeConfig {
            mix: 0.5,
            normalization: EdgeNormalization::Max,
        }
    }
}

/// Central-difference gradient magnitude.
pub fn edge_isotropic(u: &RealGrid) -> RealGrid {
    Grid::from_fn(u.width(), u.height(), |x, y| {
        let (x, y) = (x as isize, y as isize);
        let dx = (u.sample(x + 1, y) - u.sample(x - 1, y)) / 2.0;
        let dy = (u.sample(x, y + 1) - u.sample(x, y - 1)) / 2.0;
        (dx * dx + dy * dy).sqrt()
    })
}

/// Largest one-sided difference magnitude over the 0, 45, 90 and 135 degree
/// directions, both senses; diagonal steps are divided by sqrt(2).
pub fn edge_anisotropic(u: &RealGrid) -> RealGrid {
    const DIRS: [(isize, isize, f64); 4] = [
        (1, 0, 1.0),
        (1, 1, std::f64::consts::FRAC_1_SQRT_2),
        (0, 1, 1.0),
        (-1, 1, std::f64::consts::FRAC_1_SQRT_2),
    ];
    Grid::from_fn(u.width(), u.height(), |x, y| {
        let (x, y) = (x as isize, y as isize);
        let c = u.sample(x, y);
        DIRS.iter().fold(0.0f64, |acc, &(dx, dy, scale)| {
            let fwd = (u.sample(x + dx, y + dy) - c).abs() * scale;
            let bwd = (c - u.sample(x - dx, y - dy)).abs() * scale;
            acc.max(fwd).max(bwd)
        })
    })
}

fn normalize_by_max(g: &RealGrid) -> RealGrid {
    let max = g.data().iter().copied().fold(0.0f64, f64::max);
    if max > 0.0 {
        g.map(|v| v / max)
    } else {
        g.clone()
    }
}

/// `w * iso/max(iso) + (1 - w) * aniso/max(aniso)`.
pub fn edge_combine(iso: &RealGrid, aniso: &RealGrid, cfg: &EdgeConfig) -> Result<ScalarField> {
    iso.ensure_same_shape(aniso, "edge_combine inputs differ in size")?;
    if !(0.0..=1.0).contains(&cfg.mix) {
        return Err(Error::Parameter(format!("edge mix {} outside [0, 1]", cfg.mix)));
    }
    let (a, b) = match cfg.normalization {
        EdgeNormalization::Max => (normalize_by_max(iso), normalize_by_max(aniso)),
    };
    let w = cfg.mix;
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&p, &q)| w * p + (1.0 - w) * q)
        .collect();
    Ok(ScalarField::from_grid_clamped(Grid::new(
        iso.width(),
        iso.height(),
        data,
    )?))
}

/// Full edge chain: both detectors on the log-normalized local contrast of
/// `u`, then the mean-weighted mix.
pub fn edge_map(u: &ScalarField, contrast: &ContrastConfig, edge: &EdgeConfig) -> Result<ScalarField> {
    let c = log_normalize(local_contrast(u, contrast)?.as_grid())?;
    edge_combine(&edge_isotropic(&c), &edge_anisotropic(&c), edge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(w: usize, h: usize, v: Vec<f64>) -> RealGrid {
        Grid::new(w, h, v).unwrap()
    }

    #[test]
    fn constant_has_no_edges() {
        let u = Grid::filled(5, 5, 0.7);
        assert!(edge_isotropic(&u).data().iter().all(|&v| v == 0.0));
        assert!(edge_anisotropic(&u).data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn isotropic_ramp_and_step() {
        let w = 6;
        let ramp = Grid::from_fn(w, 3, |x, _| x as f64 / (w - 1) as f64);
        let e = edge_isotropic(&ramp);
        for x in 1..w - 1 {
            assert!((e.get(x, 1) - 1.0 / (w - 1) as f64).abs() < 1e-15);
        }
        let step = grid(4, 1, vec![0.0, 0.0, 1.0, 1.0]);
        let e = edge_isotropic(&step);
        assert_eq!(e.get(1, 0), 0.5);
        assert_eq!(e.get(2, 0), 0.5);
    }

    #[test]
    fn anisotropic_step_and_impulse() {
        let step = Grid::from_fn(4, 4, |x, _| if x >= 2 { 1.0 } else { 0.0 });
        let e = edge_anisotropic(&step);
        for y in 0..4 {
            assert_eq!(e.get(0, y), 0.0);
            assert_eq!(e.get(1, y), 1.0);
            assert_eq!(e.get(2, y), 1.0);
            assert_eq!(e.get(3, y), 0.0);
        }
        let imp = Grid::from_fn(5, 5, |x, y| if (x, y) == (2, 2) { 1.0 } else { 0.0 });
        assert_eq!(edge_anisotropic(&imp).get(2, 2), 1.0);
    }

    #[test]
    fn combine_examples() {
        let f = grid(3, 1, vec![0.2, 1.0, 0.5]);
        for w in [0.0, 0.3, 1.0] {
            let e = edge_combine(
                &f,
                &f,
                &EdgeConfig {
                    mix: w,
                    ..Default::default()
                },
            )
            .unwrap();
            for (a, b) in e.data().iter().zip(f.data()) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        let iso = grid(2, 1, vec![0.8, 1.0]);
        let aniso = grid(2, 1, vec![0.4, 1.0]);
        let e = edge_combine(&iso, &aniso, &EdgeConfig::default()).unwrap();
        assert!((e.get(0, 0) - 0.6).abs() < 1e-15);
        let e = edge_combine(
            &grid(2, 1, vec![1.0, 2.0]),
            &aniso,
            &EdgeConfig {
                mix: 1.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(e.data(), &[0.5, 1.0]);
        assert!(matches!(
            edge_combine(&iso, &grid(1, 1, vec![0.0]), &EdgeConfig::default()),
            Err(Error::Dimension(_))
        ));
        let zeros = grid(2, 1, vec![0.0, 0.0]);
        assert_eq!(
            edge_combine(&zeros, &zeros, &EdgeConfig::default()).unwrap().data(),
            &[0.0, 0.0]
        );
    }

    proptest! {
        #[test]
        fn detectors_shift_invariant_and_scale_linear(
            v in proptest::collection::vec(0.0f64..0.5, 20), c in 0.0f64..0.5, s in 0.0f64..2.0,
        ) {
            let u = grid(5, 4, v);
            let shifted = u.map(|x| x + c);
            let scaled = u.map(|x| x * s);
            for det in [edge_isotropic as fn(&RealGrid) -> RealGrid, edge_anisotropic] {
                let base = det(&u);
                for ((a, b), d) in base.data().iter().zip(det(&shifted).data()).zip(det(&scaled).data()) {
                    prop_assert!((a - b).abs() < 1e-12);
                    prop_assert!((a * s - d).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn zero_iff_constant(v in proptest::collection::vec(0.0f64..=1.0, 12)) {
            let u = grid(4, 3, v);
            let constant = u.data().iter().all(|&x| x == u.get(0, 0));
            prop_assert_eq!(edge_isotropic(&u).data().iter().all(|&x| x == 0.0), constant);
            prop_assert_eq!(edge_anisotropic(&u).data().iter().all(|&x| x == 0.0), constant);
        }

        #[test]
        fn combined_edge_bounded(v in proptest::collection::vec(0.0f64..=1.0, 36), w in 0.0f64..=1.0) {
            let u = ScalarField::new(6, 6, v).unwrap();
            let e = edge_map(&u, &ContrastConfig { radius: 1, epsilon: 1e-6 }, &EdgeConfig { mix: w, ..Default::default() }).unwrap();
            prop_assert!(e.data().iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }
}

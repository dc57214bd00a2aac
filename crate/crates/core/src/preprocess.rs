//! Stain attenuation and logarithmic local-contrast normalization.
//!
//! Both run before the evolution: attenuation lifts stain tones toward the
//! background, the contrast map feeds the edge detectors.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::binarize::otsu_threshold;
use crate::error::{Error, Result};
use crate::grid::{Grid, RealGrid, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttenuationMode {
    Linear,
    Nonlinear,
}

/// Sigmoid midpoint for nonlinear attenuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Midpoint {
    /// Otsu threshold of the input.
    Auto,
    Fixed(f64),
}

impl Serialize for Midpoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Midpoint::Auto => s.serialize_str("auto"),
            Midpoint::Fixed(m) => s.serialize_f64(*m),
        }
    }
}

impl<'de> Deserialize<'de> for Midpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(m) => Ok(Midpoint::Fixed(m)),
            Raw::Str(s) if s == "auto" => Ok(Midpoint::Auto),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "midpoint must be a number or \"auto\", got {s:?}"
            ))),
        }
    }
}

impl std::str::FromStr for Midpoint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Midpoint::Auto);
        }
        s.parse::<f64>()
            .map(Midpoint::Fixed)
            .map_err(|_| format!("expected a number or \"auto\", got {s:?}"))
    }
}

/// Linear mode reads `gain`/`bias`; nonlinear mode reads `slope`/`midpoint`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttenuationConfig {
    pub mode: AttenuationMode,
    pub gain: f64,
    pub bias: f64,
    pub slope: f64,
    pub midpoint: Midpoint,
}

impl Default for AttenuationConfig {
    fn default() -> Self {
        AttenuationConfig {
            mode: AttenuationMode::Nonlinear,
            gain: 1.5,
            bias: 0.0,
            slope: 10.0,
            midpoint: Midpoint::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContrastConfig {
    /// Window half-size; the window is `(2r+1)^2`.
    pub radius: usize,
    pub epsilon: f64,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        ContrastConfig {
            radius: 3,
            epsilon: 1e-6,
        }
    }
}

/// `clamp(a*u + b, 0, 1)`.
pub fn attenuate_linear(u: &ScalarField, gain: f64, bias: f64) -> Result<ScalarField> {
    if !(gain > 0.0 && gain.is_finite()) || !bias.is_finite() {
        return Err(Error::Parameter(format!(
            "linear attenuation needs gain > 0 and finite bias, got a={gain}, b={bias}"
        )));
    }
    Ok(ScalarField::from_grid_clamped(u.map(|v| gain * v + bias)))
}

/// Logistic tone curve `1 / (1 + exp(-slope (u - m)))`.
pub fn attenuate_nonlinear(u: &ScalarField, slope: f64, midpoint: Midpoint) -> Result<ScalarField> {
    if !(slope > 0.0 && slope.is_finite()) {
        return Err(Error::Parameter(format!(
            "nonlinear attenuation needs slope > 0, got {slope}"
        )));
    }
    let m = match midpoint {
        Midpoint::Auto => otsu_threshold(u),
        Midpoint::Fixed(m) if (0.0..=1.0).contains(&m) => m,
        Midpoint::Fixed(m) => {
            return Err(Error::Parameter(format!("midpoint {m} outside [0, 1]")));
        }
    };
    Ok(ScalarField::from_grid_clamped(
        u.map(|v| 1.0 / (1.0 + (-slope * (v - m)).exp())),
    ))
}

pub fn attenuate(u: &ScalarField, cfg: &AttenuationConfig) -> Result<ScalarField> {
    match cfg.mode {
        AttenuationMode::Linear => attenuate_linear(u, cfg.gain, cfg.bias),
        AttenuationMode::Nonlinear => attenuate_nonlinear(u, cfg.slope, cfg.midpoint),
    }
}

/// Separable sliding min and max over a `(2r+1)`-wide replicate-padded
/// window along one axis.
fn window_min_max(src_min: &RealGrid, src_max: &RealGrid, r: isize, horizontal: bool) -> (RealGrid, RealGrid) {
    let (w, h) = (src_min.width(), src_min.height());
    let mut lo = Grid::filled(w, h, 0.0);
    let mut hi = Grid::filled(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
            for d in -r..=r {
                let (sx, sy) = if horizontal {
                    (x as isize + d, y as isize)
                } else {
                    (x as isize, y as isize + d)
                };
                mn = mn.min(src_min.sample(sx, sy));
                mx = mx.max(src_max.sample(sx, sy));
            }
            lo.set(x, y, mn);
            hi.set(x, y, mx);
        }
    }
    (lo, hi)
}

/// `(max_w - min_w) / (max_w + min_w + eps)` over the replicate-padded
/// `(2r+1)^2` window. Output lies in `[0, 1)`.
pub fn local_contrast(u: &ScalarField, cfg: &ContrastConfig) -> Result<ScalarField> {
    if cfg.radius == 0 {
        return Err(Error::Parameter("contrast window radius must be >= 1".into()));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon.is_finite()) {
        return Err(Error::Parameter(format!(
            "contrast stabilizer must be > 0, got {}",
            cfg.epsilon
        )));
    }
    let r = cfg.radius as isize;
    // min/max over a rectangle factor into a row pass and a column pass
    let (row_lo, row_hi) = window_min_max(u, u, r, true);
    let (lo, hi) = window_min_max(&row_lo, &row_hi, r, false);
    let eps = cfg.epsilon;
    let data = lo
        .data()
        .iter()
        .zip(hi.data())
        .map(|(&mn, &mx)| (mx - mn) / (mx + mn + eps))
        .collect();
    Ok(ScalarField::from_grid_clamped(Grid::new(u.width(), u.height(), data)?))
}

/// `log(1 + C) / log 2`, mapping `[0, 1]` onto `[0, 1]`.
pub fn log_normalize(c: &RealGrid) -> Result<ScalarField> {
    if let Some(v) = c.data().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Domain(format!(
            "log normalization expects samples in [0, 1], found {v}"
        )));
    }
    Ok(ScalarField::from_grid_clamped(
        c.map(|v| v.ln_1p() / std::f64::consts::LN_2),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(w: usize, h: usize, v: &[f64]) -> ScalarField {
        ScalarField::new(w, h, v.to_vec()).unwrap()
    }

    #[test]
    fn linear_examples() {
        let u = field(3, 1, &[0.0, 0.5, 0.9]);
        assert_eq!(attenuate_linear(&u, 1.0, 0.0).unwrap(), u);
        let v = attenuate_linear(&u, 1.2, 0.0).unwrap();
        assert!((v.get(1, 0) - 0.6).abs() < 1e-15);
        assert_eq!(v.get(2, 0), 1.0);
        assert!(matches!(attenuate_linear(&u, 0.0, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(attenuate_linear(&u, -1.0, 0.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn nonlinear_examples() {
        let u = field(3, 1, &[0.5, 1.0, 0.0]);
        let v = attenuate_nonlinear(&u, 10.0, Midpoint::Fixed(0.5)).unwrap();
        assert_eq!(v.get(0, 0), 0.5);
        assert!((v.get(1, 0) - 0.993_307_149_075_715_2).abs() < 1e-12);
        assert!((v.get(2, 0) - 0.006_692_850_924_284_856).abs() < 1e-12);
        assert!(matches!(
            attenuate_nonlinear(&u, 0.0, Midpoint::Auto),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn contrast_examples() {
        let cfg = ContrastConfig::default();
        let c = local_contrast(&ScalarField::constant(5, 4, 0.3).unwrap(), &cfg).unwrap();
        assert!(c.data().iter().all(|&v| v == 0.0));

        let c = local_contrast(&field(2, 1, &[0.0, 1.0]), &cfg).unwrap();
        assert!((c.get(0, 0) - 1.0 / (1.0 + 1e-6)).abs() < 1e-15);
        assert!((c.get(0, 0) - 0.999_999).abs() < 1e-9);

        let mut v = vec![0.5; 9];
        v[4] = 1.0;
        let c = local_contrast(
            &field(3, 3, &v),
            &ContrastConfig {
                radius: 1,
                epsilon: 1e-6,
            },
        )
        .unwrap();
        assert!((c.get(1, 1) - 0.5 / (1.5 + 1e-6)).abs() < 1e-15);
        assert!((c.get(1, 1) - 0.333_333).abs() < 1e-6);
    }

    #[test]
    fn contrast_matches_brute_force_window() {
        let u = ScalarField::from_fn(9, 7, |x, y| ((x * 7 + y * 13) % 11) as f64 / 10.0).unwrap();
        let cfg = ContrastConfig {
            radius: 2,
            epsilon: 1e-6,
        };
        let c = local_contrast(&u, &cfg).unwrap();
        for y in 0..7isize {
            for x in 0..9isize {
                let mut mn = f64::INFINITY;
                let mut mx = f64::NEG_INFINITY;
                for dy in -2..=2 {
                    for dx in -2..=2 {
                        let v = u.sample(x + dx, y + dy);
                        mn = mn.min(v);
                        mx = mx.max(v);
                    }
                }
                let want = (mx - mn) / (mx + mn + 1e-6);
                assert_eq!(c.get(x as usize, y as usize), want);
            }
        }
    }

    #[test]
    fn contrast_rejects_bad_config() {
        let u = ScalarField::constant(2, 2, 0.5).unwrap();
        assert!(local_contrast(
            &u,
            &ContrastConfig {
                radius: 0,
                epsilon: 1e-6
            }
        )
        .is_err());
        assert!(local_contrast(
            &u,
            &ContrastConfig {
                radius: 1,
                epsilon: 0.0
            }
        )
        .is_err());
    }

    #[test]
    fn log_normalize_examples() {
        let c = Grid::new(3, 1, vec![0.0, 1.0, 0.5]).unwrap();
        let e = log_normalize(&c).unwrap();
        assert_eq!(e.get(0, 0), 0.0);
        assert_eq!(e.get(1, 0), 1.0);
        assert!((e.get(2, 0) - 0.584_962_500_721_156_2).abs() < 1e-12);
        let bad = Grid::new(1, 1, vec![1.2]).unwrap();
        assert!(matches!(log_normalize(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn midpoint_serde() {
        assert_eq!(serde_json::to_string(&Midpoint::Auto).unwrap(), "\"auto\"");
        assert_eq!(serde_json::to_string(&Midpoint::Fixed(0.25)).unwrap(), "0.25");
        assert_eq!(serde_json::from_str::<Midpoint>("0.4").unwrap(), Midpoint::Fixed(0.4));
        assert_eq!(serde_json::from_str::<Midpoint>("\"auto\"").unwrap(), Midpoint::Auto);
        assert!(serde_json::from_str::<Midpoint>("\"mid\"").is_err());
    }

    proptest! {
        #[test]
        fn pointwise_ops_monotone_and_bounded(a in 0.0f64..=1.0, b in 0.0f64..=1.0,
                                              gain in 0.1f64..4.0, bias in -1.0f64..1.0,
                                              slope in 0.1f64..40.0, m in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let u = field(2, 1, &[lo, hi]);
            for v in [
                attenuate_linear(&u, gain, bias).unwrap(),
                attenuate_nonlinear(&u, slope, Midpoint::Fixed(m)).unwrap(),
                log_normalize(&u).unwrap(),
            ] {
                prop_assert!(v.get(0, 0) <= v.get(1, 0));
                prop_assert!(v.data().iter().all(|s| (0.0..=1.0).contains(s)));
            }
        }

        #[test]
        fn sigmoid_symmetry(u in 0.0f64..=1.0, slope in 0.1f64..40.0, m in 0.0f64..=1.0) {
            let a = attenuate_nonlinear(&field(1, 1, &[u]), slope, Midpoint::Fixed(m)).unwrap();
            let b = attenuate_nonlinear(&field(1, 1, &[1.0 - u]), slope, Midpoint::Fixed(1.0 - m)).unwrap();
            prop_assert!((a.get(0, 0) + b.get(0, 0) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn contrast_in_unit_interval(v in proptest::collection::vec(0.0f64..=1.0, 30), r in 1usize..4) {
            let u = field(6, 5, &v);
            let c = local_contrast(&u, &ContrastConfig { radius: r, epsilon: 1e-6 }).unwrap();
            prop_assert!(c.data().iter().all(|s| (0.0..1.0).contains(s)));
        }
    }
}

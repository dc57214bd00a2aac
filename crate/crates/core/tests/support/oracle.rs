//! Straight-from-definition reference implementations used to check the
//! library. Nothing here calls into the library; maps are plain row-major
//! byte vectors with 0 = text and 1 = background.
#![allow(dead_code)]

pub struct Pair {
    pub width: usize,
    pub height: usize,
    pub pred: Vec<u8>,
    pub truth: Vec<u8>,
}

/// (TP, FP, FN, TN) with text as the positive class.
pub fn confusion(pred: &[u8], truth: &[u8]) -> (u64, u64, u64, u64) {
    let count = |b: u8, g: u8| pred.iter().zip(truth).filter(|&(&p, &t)| p == b && t == g).count() as u64;
    (count(0, 0), count(0, 1), count(1, 0), count(1, 1))
}

fn safe_div(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

pub fn fm(pred: &[u8], truth: &[u8]) -> f64 {
    let (tp, fp, fn_, _) = confusion(pred, truth);
    let p = safe_div(tp as f64, (tp + fp) as f64);
    let r = safe_div(tp as f64, (tp + fn_) as f64);
    if p + r == 0.0 {
        0.0
    } else {
        200.0 * p * r / (p + r)
    }
}

pub fn nrm(pred: &[u8], truth: &[u8]) -> f64 {
    let (tp, fp, fn_, tn) = confusion(pred, truth);
    0.5 * (safe_div(fn_ as f64, (fn_ + tp) as f64) + safe_div(fp as f64, (fp + tn) as f64))
}

pub fn psnr(pred: &[u8], truth: &[u8]) -> f64 {
    let mse = pred
        .iter()
        .zip(truth)
        .map(|(&p, &t)| (p as f64 - t as f64).powi(2))
        .sum::<f64>()
        / pred.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / mse).log10()
    }
}

/// Distance reciprocal distortion, evaluated pixel by pixel with the
/// weight matrix rebuilt for every flipped pixel. `None` when the ground
/// truth has no mixed 8x8 block but errors exist.
pub fn drd(width: usize, height: usize, pred: &[u8], truth: &[u8]) -> Option<f64> {
    let at = |x: i64, y: i64| {
        let cx = x.clamp(0, width as i64 - 1) as usize;
        let cy = y.clamp(0, height as i64 - 1) as usize;
        truth[cy * width + cx]
    };
    let mut weights = Vec::new();
    for dy in -2i64..=2 {
        for dx in -2i64..=2 {
            if dx != 0 || dy != 0 {
                weights.push((dx, dy, 1.0 / ((dx * dx + dy * dy) as f64).sqrt()));
            }
        }
    }
    let norm: f64 = weights.iter().map(|w| w.2).sum();

    let mut numerator = 0.0;
    let mut flipped = 0;
    for y in 0..height {
        for x in 0..width {
            let b = pred[y * width + x];
            if b == truth[y * width + x] {
                continue;
            }
            flipped += 1;
            for &(dx, dy, w) in &weights {
                let g = at(x as i64 + dx, y as i64 + dy);
                numerator += (w / norm) * (g as f64 - b as f64).abs();
            }
        }
    }

    let mut nubn = 0;
    for by in (0..height).step_by(8) {
        for bx in (0..width).step_by(8) {
            let mut seen = [false; 2];
            for y in by..(by + 8).min(height) {
                for x in bx..(bx + 8).min(width) {
                    seen[truth[y * width + x] as usize] = true;
                }
            }
            if seen[0] && seen[1] {
                nubn += 1;
            }
        }
    }
    match (flipped, nubn) {
        (0, _) => Some(0.0),
        (_, 0) => None,
        _ => Some(numerator / nubn as f64),
    }
}

/// Grünwald-Letnikov weights as signed generalized binomial coefficients,
/// w_k = (-1)^k * prod_{j<k} (alpha - j) / (j + 1).
pub fn gl_weights(alpha: f64, depth: usize) -> Vec<f64> {
    (0..=depth)
        .map(|k| {
            let binom: f64 = (0..k).map(|j| (alpha - j as f64) / (j as f64 + 1.0)).product();
            if k % 2 == 0 {
                binom
            } else {
                -binom
            }
        })
        .collect()
}

/// One explicit step of the integer-order equation, computed directly from
/// the stencil definitions with replicate padding and clamped to [0, 1].
pub fn integer_step(
    width: usize,
    height: usize,
    u: &[f64],
    edges: &[f64],
    target: &[u8],
    (cs, ce, cd, dt, k): (f64, f64, f64, f64, f64),
) -> Vec<f64> {
    let at = |x: i64, y: i64| u[y.clamp(0, height as i64 - 1) as usize * width + x.clamp(0, width as i64 - 1) as usize];
    let flux = |s: f64| s / (1.0 + (s / k) * (s / k));
    let mut out = vec![0.0; u.len()];
    for y in 0..height as i64 {
        for x in 0..width as i64 {
            let i = y as usize * width + x as usize;
            let c = at(x, y);
            let (e, w, s, n) = (at(x + 1, y), at(x - 1, y), at(x, y + 1), at(x, y - 1));
            let source = target[i] as f64 - c;
            let lap = e + w + s + n - 4.0 * c;
            let gx = (e - w) / 2.0;
            let gy = (s - n) / 2.0;
            let sign = if lap > 0.0 {
                1.0
            } else if lap < 0.0 {
                -1.0
            } else {
                0.0
            };
            let shock = -edges[i] * sign * (gx * gx + gy * gy).sqrt();
            let diffusion = flux(e - c) - flux(c - w) + flux(s - c) - flux(c - n);
            out[i] = (c + dt * (cs * source + ce * shock + cd * diffusion)).clamp(0.0, 1.0);
        }
    }
    out
}

//! Zhang-Suen thinning of a binary foreground mask.

use crate::grid::Grid;

/// Foreground values of P2..P9 (N, NE, E, SE, S, SW, W, NW); pixels outside
/// the grid count as background.
fn neighbours(mask: &Grid<bool>, x: usize, y: usize) -> [bool; 8] {
    let at = |dx: isize, dy: isize| {
        let (nx, ny) = (x as isize + dx, y as isize + dy);
        nx >= 0
            && ny >= 0
            && (nx as usize) < mask.width()
            && (ny as usize) < mask.height()
            && mask.get(nx as usize, ny as usize)
    };
    [
        at(0, -1),
        at(1, -1),
        at(1, 0),
        at(1, 1),
        at(0, 1),
        at(-1, 1),
        at(-1, 0),
        at(-1, -1),
    ]
}

fn sub_iteration(mask: &mut Grid<bool>, first: bool) -> bool {
    let mut doomed = Vec::new();
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if !mask.get(x, y) {
                continue;
            }
            let p = neighbours(mask, x, y);
            let b = p.iter().filter(|&&v| v).count();
            if !(2..=6).contains(&b) {
                continue;
            }
            let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
            if a != 1 {
                continue;
            }
            // p[0]=P2, p[2]=P4, p[4]=P6, p[6]=P8
            let (c1, c2) = if first {
                (p[0] && p[2] && p[4], p[2] && p[4] && p[6])
            } else {
                (p[0] && p[2] && p[6], p[0] && p[4] && p[6])
            };
            if !c1 && !c2 {
                doomed.push((x, y));
            }
        }
    }
    for &(x, y) in &doomed {
        mask.set(x, y, false);
    }
    !doomed.is_empty()
}

/// Thins `true` regions to one-pixel-wide skeletons.
pub fn zhang_suen(mask: &Grid<bool>) -> Grid<bool> {
    let mut out = mask.clone();
    loop {
        let a = sub_iteration(&mut out, true);
        let b = sub_iteration(&mut out, false);
        if !a && !b {
            return out;
        }
    }
}

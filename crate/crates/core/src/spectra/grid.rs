//! Detuning grids.

use alloc::{format, vec::Vec};

use crate::{Error, Result};

/// Extra points placed on each side of a line centre, at multiples of a third
/// of the half width.
const REFINE_STEPS: i32 = 3;

/// Checks that a grid is nonempty, finite and strictly increasing. The error
/// names the first offending index.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(i) = grid.iter().position(|x| !x.is_finite()) {
        return Err(Error::UnsortedGrid(i));
    }
    match grid.windows(2).position(|w| w[1] <= w[0]) {
        Some(i) => Err(Error::UnsortedGrid(i + 1)),
        None => Ok(()),
    }
}

/// `points` equally spaced detunings from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || points == 0 || (points > 1 && max <= min) {
        return Err(Error::InvalidParameter(format!(
            "grid needs finite min < max and at least one point (got {min}..{max}, {points} points)"
        )));
    }
    if points == 1 {
        return Ok(alloc::vec![min]);
    }
    let step = (max - min) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| min + step * i as f64).collect();
    grid[points - 1] = max;
    Ok(grid)
}

/// Adds points at `c + jκ/3`, `j = −3..=3`, around every centre that falls
/// inside the base grid's range, so lines narrower than the base spacing are
/// resolved. The result is sorted with near-duplicates removed.
pub fn refine_grid(base: &[f64], centers: &[f64], kappa: f64) -> Result<Vec<f64>> {
    validate_grid(base)?;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "refinement width must be positive, got {kappa}"
        )));
    }
    let (lo, hi) = (base[0], base[base.len() - 1]);
    let mut grid = base.to_vec();
    for &c in centers {
        for j in -REFINE_STEPS..=REFINE_STEPS {
            let x = c + j as f64 * kappa / REFINE_STEPS as f64;
            if x >= lo && x <= hi {
                grid.push(x);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    let span = hi - lo;
    let eps = 1e-12 * if span > 0.0 { span } else { 1.0 };
    grid.dedup_by(|a, b| *a - *b <= eps);
    Ok(grid)
}

//! Brute-force minimization over the probability simplex for small alphabets:
//! a uniform grid followed by shrinking local grids around the incumbent.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::types::visit_types;

/// Largest alphabet accepted by the grid search.
pub const MAX_GRID_ALPHABET: usize = 4;

/// Result of [`minimize`]: the best feasible point found and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexMin {
    pub point: Vec<f64>,
    pub value: f64,
    /// Grid value before local refinement.
    pub grid_value: f64,
    pub resolution: f64,
}

/// Minimizes `f` over `{r ∈ simplex : feasible(r)}` for `L ≤ 4`.
///
/// Returns `value = +∞` if no grid point is feasible.
pub fn minimize<F, G>(l: usize, resolution: f64, cap: u64, mut f: F, mut feasible: G) -> Result<SimplexMin>
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> bool,
{
    if l > MAX_GRID_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            size: l,
            max: MAX_GRID_ALPHABET,
        });
    }
    if l == 0 {
        return Err(Error::EmptySpace);
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::InvalidArgument("resolution must lie in (0, 1]".into()));
    }
    let steps = (1.0 / resolution).round().max(1.0) as u32;
    let mut best = vec![0.0; l];
    let mut best_v = f64::INFINITY;
    let mut r = vec![0.0; l];
    visit_types(l, steps, cap, |c| {
        for (x, &k) in r.iter_mut().zip(c) {
            *x = k as f64 / steps as f64;
        }
        if feasible(&r) {
            let v = f(&r);
            if v < best_v {
                best_v = v;
                best.copy_from_slice(&r);
            }
        }
    })?;
    let grid_value = best_v;
    if best_v.is_finite() && l > 1 {
        // local grids of ±2 steps in the first L−1 coordinates, shrinking by 4
        let d = l - 1;
        let mut h = 1.0 / steps as f64;
        let mut offsets = vec![0i32; d];
        let mut cand = vec![0.0; l];
        while h > 1e-13 {
            let center = best.clone();
            loop {
                let mut head = 0.0;
                let mut ok = true;
                for i in 0..d {
                    let v = center[i] + offsets[i] as f64 * h;
                    if v < 0.0 {
                        ok = false;
                    }
                    cand[i] = v.max(0.0);
                    head += cand[i];
                }
                cand[d] = 1.0 - head;
                if ok && cand[d] >= 0.0 && feasible(&cand) {
                    let v = f(&cand);
                    if v < best_v {
                        best_v = v;
                        best.copy_from_slice(&cand);
                    }
                }
                // odometer over {−2, …, 2}^d
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    offsets[i] += 1;
                    if offsets[i] > 2 {
                        offsets[i] = -2;
                        i += 1;
                    } else {
                        break;
                    }
                }
                if i == d {
                    break;
                }
            }
            if best == center {
                h *= 0.25;
            }
        }
    }
    Ok(SimplexMin {
        point: best,
        value: best_v,
        grid_value,
        resolution: 1.0 / steps as f64,
    })
}

//! Threshold domains (interval approximation) and coefficient rounding.

use crate::model::LinearExpr;
use crate::ratio::{floor_mul, Ratio};

/// Step of both grids: `max(prev + 1, floor(ratio * prev))`.
fn grid_step(prev: u64, ratio: &Ratio) -> u64 {
    (prev + 1).max(floor_mul(ratio, prev))
}

/// Sorted threshold values of one objective: the lower bound first and the
/// first grid value above the upper bound last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    values: Vec<u64>,
}

impl Domain {
    /// Wraps an explicit, strictly increasing value list.
    pub fn from_values(values: Vec<u64>) -> Domain {
        assert!(!values.is_empty(), "a domain needs at least one value");
        assert!(
            values.windows(2).all(|w| w[0] < w[1]),
            "domain values must be strictly increasing"
        );
        Domain { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> u64 {
        self.values[0]
    }

    /// The sentinel value above the objective's upper bound.
    pub fn last(&self) -> u64 {
        *self.values.last().expect("non-empty domain")
    }

    /// Index `i` with `values[i] <= v < values[i+1]`, if `v` lies in range.
    pub fn interval_of(&self, v: u64) -> Option<usize> {
        if v < self.first() || v >= self.last() {
            return None;
        }
        Some(self.values.partition_point(|&d| d <= v) - 1)
    }
}

/// Threshold domain for values in `[lower, upper]` under `ratio = 1 + eps`.
/// A ratio of one gives every integer from `lower` to `upper + 1`.
pub fn compute_domain(lower: u64, upper: u64, ratio: &Ratio) -> Domain {
    assert!(*ratio >= Ratio::from_integer(1), "ratio must be at least 1");
    assert!(lower <= upper, "lower bound above upper bound");
    let mut values = vec![lower];
    let mut d = lower;
    while d <= upper {
        d = grid_step(d, ratio);
        values.push(d);
    }
    Domain { values }
}

/// Rounded coefficients of one objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffApproxMap {
    /// Rounding grid, starting at the smallest coefficient.
    pub grid: Vec<u64>,
    /// Per term, the original coefficient.
    pub original: Vec<u64>,
    /// Per term, the largest grid value not above the original.
    pub rounded: Vec<u64>,
    /// The approximate objective (same literals, same constant).
    pub approx: LinearExpr,
}

impl CoeffApproxMap {
    /// Whether rounding left every coefficient unchanged.
    pub fn is_exact(&self) -> bool {
        self.original == self.rounded
    }
}

/// Rounds every coefficient down to a geometric grid with step `ratio`.
pub fn approx_coefficients(expr: &LinearExpr, ratio: &Ratio) -> CoeffApproxMap {
    assert!(*ratio >= Ratio::from_integer(1), "ratio must be at least 1");
    let original: Vec<u64> = expr.terms().iter().map(|t| t.coeff).collect();
    let (Some(&min), Some(&max)) = (original.iter().min(), original.iter().max()) else {
        return CoeffApproxMap {
            grid: Vec::new(),
            original,
            rounded: Vec::new(),
            approx: expr.clone(),
        };
    };
    let mut grid = vec![min];
    while *grid.last().expect("non-empty grid") < max {
        let next = grid_step(*grid.last().expect("non-empty grid"), ratio);
        grid.push(next);
    }
    let rounded: Vec<u64> = original
        .iter()
        .map(|&w| grid[grid.partition_point(|&g| g <= w) - 1])
        .collect();
    let mut it = rounded.iter();
    let approx = expr.map_coefficients(|_| *it.next().expect("one rounded value per term"));
    CoeffApproxMap {
        grid,
        original,
        rounded,
        approx,
    }
}

//! Grid-attached density fields.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A density f sampled on a grid. Construction checks finiteness; the
/// exclusion bound 0 ≤ f ≤ 1/ε involves the quantum parameter and is checked
/// by [`Field::check_bounds`] wherever ε is known.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::Mismatch(format!(
                "grid has {} nodes but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Field { grid, values })
    }

    /// Sample a function of the node position.
    pub fn from_fn<F: Fn([f64; 2]) -> f64>(grid: &Grid, f: F) -> Result<Field> {
        let values: Vec<f64> = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        Field::new(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Enforce the exclusion bound 0 ≤ f ≤ 1/ε (f ≥ 0 when ε = 0).
    pub fn check_bounds(&self, epsilon: f64) -> Result<()> {
        let hi = if epsilon > 0.0 {
            1.0 / epsilon
        } else {
            f64::INFINITY
        };
        for (index, &value) in self.values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value < 0.0 || value > hi {
                return Err(Error::OutOfRange {
                    index,
                    value,
                    lo: 0.0,
                    hi,
                });
            }
        }
        Ok(())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// max |self - other| over nodes; grids must match.
    pub fn sup_distance(&self, other: &Field) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Mismatch(
                "sup_distance across different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }
}

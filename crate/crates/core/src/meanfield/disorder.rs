//! Averages over the random longitudinal field.

use gauss_quad::GaussHermite;

use crate::error::{Error, Result};
use crate::model::{DisorderKind, FieldDisorder};
use crate::num::Real;

pub const DEFAULT_QUADRATURE_ORDER: usize = 64;

/// The field distribution as a discrete set of `(h, probability)` atoms.
///
/// Gaussian fields are represented by a Gauss-Hermite rule rescaled to
/// `Normal(0, sigma^2)`; the atoms then sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldAverage<T> {
    disorder: FieldDisorder<T>,
    atoms: Vec<(T, T)>,
}

impl<T: Real> FieldAverage<T> {
    pub fn new(disorder: FieldDisorder<T>, quadrature_order: usize) -> Result<Self> {
        let atoms = match disorder.kind {
            DisorderKind::None => vec![(T::zero(), T::one())],
            DisorderKind::Binary { h0 } => vec![(h0, T::lit(0.5)), (-h0, T::lit(0.5))],
            DisorderKind::Gaussian { sigma } => {
                if quadrature_order < 2 {
                    return Err(Error::invalid(
                        "quadrature_order",
                        format!("{quadrature_order} < 2"),
                    ));
                }
                let rule = GaussHermite::new(quadrature_order)
                    .map_err(|e| Error::invalid("quadrature_order", e.to_string()))?;
                let scale = std::f64::consts::SQRT_2 * sigma.as_f64();
                let norm = std::f64::consts::PI.sqrt();
                rule.nodes()
                    .zip(rule.weights())
                    .map(|(&x, &w)| (T::lit(scale * x), T::lit(w / norm)))
                    .collect()
            }
        };
        Ok(Self { disorder, atoms })
    }

    pub fn none() -> Self {
        Self {
            disorder: FieldDisorder::none(),
            atoms: vec![(T::zero(), T::one())],
        }
    }

    pub fn disorder(&self) -> &FieldDisorder<T> {
        &self.disorder
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_atoms_reproduce_moments() {
        let avg = FieldAverage::new(FieldDisorder::gaussian(0.7_f64, 0).unwrap(), 40).unwrap();
        let m0: f64 = avg.atoms().iter().map(|a| a.1).sum();
        let m1: f64 = avg.atoms().iter().map(|a| a.0 * a.1).sum();
        let m2: f64 = avg.atoms().iter().map(|a| a.0 * a.0 * a.1).sum();
        let m4: f64 = avg.atoms().iter().map(|a| a.0.powi(4) * a.1).sum();
        assert!((m0 - 1.0).abs() < 1e-13);
        assert!(m1.abs() < 1e-13);
        assert!((m2 - 0.49).abs() < 1e-13);
        assert!((m4 - 3.0 * 0.49 * 0.49).abs() < 1e-12);
    }

    #[test]
    fn low_order_rejected() {
        assert!(FieldAverage::new(FieldDisorder::gaussian(1.0_f64, 0).unwrap(), 1).is_err());
    }
}

//! Standard continuous test functions for validating the optimizer.
//!
//! The trio covers the usual shapes: sphere (unimodal bowl), rosenbrock
//! (curved narrow valley), and rastrigin (highly multimodal). Each function
//! is non-negative everywhere and zero exactly at its known minimum.

use thiserror::Error;

use crate::bat::{Objective, SearchSpace};

/// Lookup and construction failures for benchmark functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    /// The requested name is not in the registry.
    #[error("unknown benchmark function '{0}' (available: sphere, rosenbrock, rastrigin)")]
    UnknownFunction(String),
    /// The function needs more dimensions than requested.
    #[error("{name} requires at least {min} dimensions, got {got}")]
    TooFewDims {
        name: &'static str,
        min: usize,
        got: usize,
    },
}

/// Sum of squares; minimum 0 at the origin.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Banana-valley function; minimum 0 at all-ones. Needs at least 2
/// dimensions.
pub fn rosenbrock(x: &[f64]) -> f64 {
    assert!(x.len() >= 2, "rosenbrock requires at least 2 dimensions");
    x.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            100.0 * (b - a * a).powi(2) + (1.0 - a).powi(2)
        })
        .sum()
}

/// Cosine-rippled bowl, `10 d + sum(x^2 - 10 cos(2 pi x))`; minimum 0 at the
/// origin.
pub fn rastrigin(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    10.0 * d
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos())
            .sum::<f64>()
}

/// A named benchmark with its conventional domain and known minimum.
pub struct BenchFunction {
    /// Registry name.
    pub name: &'static str,
    /// Dimensionality this instance evaluates.
    pub dims: usize,
    /// Conventional search box for the function.
    pub default_bounds: SearchSpace,
    /// Value at the global minimum.
    pub known_minimum: f64,
    /// Location of the global minimum.
    pub known_argmin: Vec<f64>,
    eval: fn(&[f64]) -> f64,
}

impl BenchFunction {
    /// Looks a function up by name at the given dimensionality.
    pub fn by_name(name: &str, dims: usize) -> Result<Self, BenchError> {
        let checked = |min: usize, fname: &'static str| {
            if dims < min {
                Err(BenchError::TooFewDims {
                    name: fname,
                    min,
                    got: dims,
                })
            } else {
                Ok(())
            }
        };
        match name {
            "sphere" => {
                checked(1, "sphere")?;
                Ok(Self {
                    name: "sphere",
                    dims,
                    default_bounds: SearchSpace::cube(-5.12, 5.12, dims)
                        .expect("static bounds are valid"),
                    known_minimum: 0.0,
                    known_argmin: vec![0.0; dims],
                    eval: sphere,
                })
            }
            "rosenbrock" => {
                checked(2, "rosenbrock")?;
                Ok(Self {
                    name: "rosenbrock",
                    dims,
                    default_bounds: SearchSpace::cube(-2.048, 2.048, dims)
                        .expect("static bounds are valid"),
                    known_minimum: 0.0,
                    known_argmin: vec![1.0; dims],
                    eval: rosenbrock,
                })
            }
            "rastrigin" => {
                checked(1, "rastrigin")?;
                Ok(Self {
                    name: "rastrigin",
                    dims,
                    default_bounds: SearchSpace::cube(-5.12, 5.12, dims)
                        .expect("static bounds are valid"),
                    known_minimum: 0.0,
                    known_argmin: vec![0.0; dims],
                    eval: rastrigin,
                })
            }
            other => Err(BenchError::UnknownFunction(other.to_string())),
        }
    }

    /// Names accepted by [`BenchFunction::by_name`].
    pub fn names() -> &'static [&'static str] {
        &["sphere", "rosenbrock", "rastrigin"]
    }
}

impl Objective for BenchFunction {
    fn dims(&self) -> usize {
        self.dims
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        (self.eval)(position)
    }
}

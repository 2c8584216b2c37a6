use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Adaptive trapezoid settings: start at `min_nodes`, double until two
/// successive values agree to `tol`, give up beyond `max_nodes`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            min_nodes: 64,
            max_nodes: 16384,
            tol: 1e-13,
        }
    }
}

impl QuadratureSettings {
    pub fn with_tol(tol: f64) -> Self {
        QuadratureSettings {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min_nodes.is_power_of_two() || !self.max_nodes.is_power_of_two() {
            return Err(Error::Config("quadrature node counts must be powers of two".into()));
        }
        if self.min_nodes > self.max_nodes {
            return Err(Error::Config("min_nodes exceeds max_nodes".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config("quadrature tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// `n` equispaced nodes `center + r·e^{2πij/n}` with uniform weight `2π/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureGrid {
    center: C64,
    radius: f64,
    n_nodes: usize,
}

impl QuadratureGrid {
    pub fn new(radius: f64, n_nodes: usize) -> Result<Self> {
        Self::centered(C64::new(0.0, 0.0), radius, n_nodes)
    }

    pub fn centered(center: C64, radius: f64, n_nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("quadrature radius {radius} must be positive")));
        }
        if !n_nodes.is_power_of_two() {
            return Err(Error::Domain(format!("node count {n_nodes} is not a power of two")));
        }
        Ok(QuadratureGrid {
            center,
            radius,
            n_nodes,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn weight(&self) -> f64 {
        2.0 * PI / self.n_nodes as f64
    }

    pub fn node(&self, j: usize) -> C64 {
        self.center + C64::from_polar(self.radius, 2.0 * PI * j as f64 / self.n_nodes as f64)
    }

    pub fn nodes(&self) -> Vec<C64> {
        (0..self.n_nodes).map(|j| self.node(j)).collect()
    }

    /// Fixed-grid trapezoid value of `∮ f(z) dz/(z − center)`.
    pub fn integrate<F>(&self, f: F) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64> + Sync,
    {
        let values = (0..self.n_nodes)
            .into_par_iter()
            .map(|j| f(self.node(j)))
            .collect::<Result<Vec<_>>>()?;
        let sum: C64 = values.iter().sum();
        Ok(C64::new(0.0, self.weight()) * sum)
    }
}

/// A converged integral together with the node count it needed.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub nodes: usize,
}

/// `∮_{|z|=r} f(z) dz/z`, counter-clockwise, by the adaptive trapezoid rule.
///
/// ```
/// use elliptic_bailey::contour::{circle_integral, QuadratureSettings};
/// use elliptic_bailey::C64;
///
/// let settings = QuadratureSettings::default();
/// let one = circle_integral(|_| Ok(C64::new(1.0, 0.0)), 1.0, &settings).unwrap();
/// assert!((one.value - C64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-14);
/// ```
pub fn circle_integral<F>(f: F, radius: f64, settings: &QuadratureSettings) -> Result<Quadrature<C64>>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    circle_integral_centered(f, C64::new(0.0, 0.0), radius, settings)
}

/// `∮_{|z−c|=r} f(z) dz/(z − c)`.
pub fn circle_integral_centered<F>(
    f: F,
    center: C64,
    radius: f64,
    settings: &QuadratureSettings,
) -> Result<Quadrature<C64>>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let q = circle_integral_vec(|z| Ok(vec![f(z)?]), 1, center, radius, settings)?;
    Ok(Quadrature {
        value: q.value[0],
        nodes: q.nodes,
    })
}

/// Several integrals over the same circle sharing their nodes; convergence
/// is required of every component.
pub fn circle_integral_vec<F>(
    f: F,
    dim: usize,
    center: C64,
    radius: f64,
    settings: &QuadratureSettings,
) -> Result<Quadrature<Vec<C64>>>
where
    F: Fn(C64) -> Result<Vec<C64>> + Sync,
{
    settings.validate()?;
    let mut n = settings.min_nodes;
    let mut sums = vec![C64::new(0.0, 0.0); dim];
    let mut abs_sums = vec![0.0; dim];
    let evaluate = |grid: QuadratureGrid, indices: Vec<usize>| -> Result<Vec<Vec<C64>>> {
        indices
            .into_par_iter()
            .map(|j| {
                let v = f(grid.node(j))?;
                if v.len() != dim {
                    return Err(Error::Domain(format!("integrand returned {} values, expected {dim}", v.len())));
                }
                Ok(v)
            })
            .collect()
    };
    let accumulate = |sums: &mut [C64], abs_sums: &mut [f64], values: Vec<Vec<C64>>| {
        for v in values {
            for (k, x) in v.into_iter().enumerate() {
                sums[k] += x;
                abs_sums[k] += x.norm();
            }
        }
    };

    let values = evaluate(QuadratureGrid::centered(center, radius, n)?, (0..n).collect())?;
    accumulate(&mut sums, &mut abs_sums, values);
    let scaled = |sums: &[C64], n: usize| -> Vec<C64> {
        let w = C64::new(0.0, 2.0 * PI / n as f64);
        sums.iter().map(|s| w * s).collect()
    };
    let mut previous = scaled(&sums, n);
    loop {
        let doubled = 2 * n;
        if doubled > settings.max_nodes {
            return Err(Error::NonConvergence {
                nodes: n,
                change: f64::NAN,
            });
        }
        let grid = QuadratureGrid::centered(center, radius, doubled)?;
        let values = evaluate(grid, (0..n).map(|j| 2 * j + 1).collect())?;
        accumulate(&mut sums, &mut abs_sums, values);
        n = doubled;
        let current = scaled(&sums, n);
        let mut worst = 0.0f64;
        let mut converged = true;
        for k in 0..dim {
            let change = (current[k] - previous[k]).norm();
            let scale = current[k].norm().max(2.0 * PI / n as f64 * abs_sums[k]);
            let rel = if scale > 0.0 { change / scale } else { 0.0 };
            if !(rel <= settings.tol) {
                converged = false;
            }
            worst = worst.max(rel);
        }
        if converged {
            return Ok(Quadrature {
                value: current,
                nodes: n,
            });
        }
        if n * 2 > settings.max_nodes {
            return Err(Error::NonConvergence { nodes: n, change: worst });
        }
        previous = current;
    }
}

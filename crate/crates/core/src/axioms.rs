//! Randomized checks of the copula axioms: groundedness, uniform margins,
//! the n-increasing property and the Fréchet-Hoeffding bounds.

use std::fmt;

use rand::Rng;

use crate::domain::{box_volume, UnitBox, UnitPoint};
use crate::families::{lower_frechet, upper_frechet, CopulaSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum Axiom {
    Groundedness,
    UniformMargins,
    NIncreasing,
    FrechetBounds,
}

/// A sampled input on which an axiom failed.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub point: Vec<f64>,
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} violated at {:?}: {}",
            self.axiom, self.point, self.detail
        )
    }
}

impl std::error::Error for AxiomViolation {}

fn random_coords<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

/// `C(u) = 0` whenever some coordinate is 0.
pub fn check_groundedness<R: Rng>(
    spec: &CopulaSpec,
    rng: &mut R,
    samples: usize,
    tol: f64,
) -> Result<(), AxiomViolation> {
    let n = spec.dim();
    for _ in 0..samples {
        let mut u = random_coords(rng, n);
        u[rng.gen_range(0..n)] = 0.0;
        let value = spec.eval_slice(&u);
        if value.abs() > tol {
            return Err(AxiomViolation {
                axiom: Axiom::Groundedness,
                point: u,
                detail: format!("C = {value:e}"),
            });
        }
    }
    Ok(())
}

/// `C(1, ..., u_k, ..., 1) = u_k`.
pub fn check_uniform_margins<R: Rng>(
    spec: &CopulaSpec,
    rng: &mut R,
    samples: usize,
    tol: f64,
) -> Result<(), AxiomViolation> {
    let n = spec.dim();
    for _ in 0..samples {
        let k = rng.gen_range(0..n);
        let x: f64 = rng.gen();
        let mut u = vec![1.0; n];
        u[k] = x;
        let value = spec.eval_slice(&u);
        if (value - x).abs() > tol {
            return Err(AxiomViolation {
                axiom: Axiom::UniformMargins,
                point: u,
                detail: format!("C = {value:e}, expected {x:e}"),
            });
        }
    }
    Ok(())
}

/// Every random box gets `C`-volume at least `-tol`.
pub fn check_n_increasing<R: Rng>(
    spec: &CopulaSpec,
    rng: &mut R,
    boxes: usize,
    tol: f64,
) -> Result<(), AxiomViolation> {
    let n = spec.dim();
    for _ in 0..boxes {
        let a = random_coords(rng, n);
        let b = random_coords(rng, n);
        let lo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect();
        let hi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
        let unit_box = UnitBox::new(
            UnitPoint::new(lo.clone()).expect("sampled in [0,1)"),
            UnitPoint::new(hi).expect("sampled in [0,1)"),
        )
        .expect("ordered corners");
        let volume = box_volume(|u| spec.eval_slice(u.coords()), &unit_box);
        if volume < -tol {
            return Err(AxiomViolation {
                axiom: Axiom::NIncreasing,
                point: lo,
                detail: format!("box volume {volume:e}"),
            });
        }
    }
    Ok(())
}

/// `W^n(u) <= C(u) <= M^n(u)` up to `tol`.
pub fn check_frechet_bounds<R: Rng>(
    spec: &CopulaSpec,
    rng: &mut R,
    samples: usize,
    tol: f64,
) -> Result<(), AxiomViolation> {
    let n = spec.dim();
    for _ in 0..samples {
        let u = random_coords(rng, n);
        let value = spec.eval_slice(&u);
        let (lo, hi) = (lower_frechet(&u), upper_frechet(&u));
        if value < lo - tol || value > hi + tol {
            return Err(AxiomViolation {
                axiom: Axiom::FrechetBounds,
                point: u,
                detail: format!("C = {value:e} outside [{lo:e}, {hi:e}]"),
            });
        }
    }
    Ok(())
}

/// Runs all four checks with 1000 points and 100 boxes at tolerance 1e-12.
pub fn check_all<R: Rng>(spec: &CopulaSpec, rng: &mut R) -> Result<(), AxiomViolation> {
    const TOL: f64 = 1e-12;
    check_groundedness(spec, rng, 1000, TOL)?;
    check_uniform_margins(spec, rng, 1000, TOL)?;
    check_n_increasing(spec, rng, 100, TOL)?;
    check_frechet_bounds(spec, rng, 1000, TOL)
}

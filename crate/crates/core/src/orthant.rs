//! Marginal evaluation and directional orthant probabilities.
//!
//! For a direction with negative axes `I` and positive axes `J`,
//!
//! ```text
//! F(v) = P[U_j > v_j for j in J, U_i < v_i for i in I]
//!      = Σ_{S ⊆ J} (-1)^|S| C_{I ∪ S}(v)
//! ```
//!
//! where `C_σ` is the σ-marginal of the copula and `C_∅ = 1`. Pure
//! directions fall out of the same sum: `J = ∅` leaves the single term
//! `C(v)`, `I = ∅` gives the joint survival function.

use serde::{Deserialize, Serialize};

use crate::domain::{check_same_dim, join_into, Direction, UnitPoint};
use crate::error::{Error, Result};
use crate::families::CopulaSpec;

/// Conditioning events with probability below this are treated as undefined.
pub const DEFAULT_EPS_DEN: f64 = 1e-12;

/// A subset σ of the axes, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarginalSelector {
    mask: u32,
    dim: usize,
}

impl MarginalSelector {
    /// Selector over 0-based `indices` of a `dim`-dimensional copula.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &index in indices {
            if index >= dim {
                return Err(Error::MarginalIndex { index, dim });
            }
            mask |= 1 << index;
        }
        Ok(Self { mask, dim })
    }

    pub fn from_mask(mask: u32, dim: usize) -> Result<Self> {
        if dim < 32 && mask >> dim != 0 {
            return Err(Error::MarginalIndex {
                index: 31 - mask.leading_zeros() as usize,
                dim,
            });
        }
        Ok(Self { mask, dim })
    }

    pub fn full(dim: usize) -> Self {
        Self {
            mask: (1u32 << dim) - 1,
            dim,
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self { mask: 0, dim }
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.mask >> axis & 1 == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.contains(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }
}

/// The σ-marginal `C_σ(u)`: `C` evaluated with every axis outside σ set to 1.
pub fn marginal_eval(spec: &CopulaSpec, sigma: &MarginalSelector, u: &UnitPoint) -> Result<f64> {
    check_same_dim(spec.dim(), u.dim())?;
    check_same_dim(spec.dim(), sigma.dim)?;
    let mut scratch = vec![0.0; spec.dim()];
    Ok(marginal_raw(spec, sigma.mask, u.coords(), &mut scratch))
}

#[inline]
fn marginal_raw(spec: &CopulaSpec, mask: u32, u: &[f64], scratch: &mut [f64]) -> f64 {
    if mask == 0 {
        return 1.0;
    }
    for (i, x) in scratch.iter_mut().enumerate() {
        *x = if mask >> i & 1 == 1 { u[i] } else { 1.0 };
    }
    spec.eval_slice(scratch)
}

/// One term `(-1)^|S| C_{I ∪ S}` of the orthant expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedSumTerm {
    /// The subset `S ⊆ J`.
    pub subset: u32,
    /// `+1` when `|S|` is even, `-1` otherwise.
    pub sign: i8,
    /// The marginal `I ∪ S`.
    pub selector: u32,
}

/// All `2^|J|` signed marginal terms for a fixed direction.
#[derive(Debug, Clone)]
pub struct OrthantExpansion {
    dim: usize,
    neg_mask: u32,
    terms: Vec<SignedSumTerm>,
}

impl OrthantExpansion {
    pub fn new(d: &Direction) -> Self {
        let neg = d.neg_mask();
        let pos = d.pos_mask();
        // Walk the subsets of `pos` in increasing order.
        let mut terms = Vec::with_capacity(1 << pos.count_ones());
        let mut s = 0u32;
        loop {
            terms.push(SignedSumTerm {
                subset: s,
                sign: if s.count_ones() & 1 == 0 { 1 } else { -1 },
                selector: neg | s,
            });
            if s == pos {
                break;
            }
            s = (s.wrapping_sub(pos)) & pos;
        }
        Self {
            dim: d.dim(),
            neg_mask: neg,
            terms,
        }
    }

    pub fn terms(&self) -> &[SignedSumTerm] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn neg_mask(&self) -> u32 {
        self.neg_mask
    }

    /// The signed sum without clamping.
    pub fn eval_unclamped(&self, spec: &CopulaSpec, v: &[f64], scratch: &mut [f64]) -> f64 {
        self.terms.iter().fold(0.0, |acc, t| {
            let c = marginal_raw(spec, t.selector, v, scratch);
            if t.sign > 0 {
                acc + c
            } else {
                acc - c
            }
        })
    }

    /// `F(v)`, clamped to `[0, 1]`. `scratch` must have length `dim`.
    #[inline]
    pub fn eval(&self, spec: &CopulaSpec, v: &[f64], scratch: &mut [f64]) -> f64 {
        self.eval_unclamped(spec, v, scratch).clamp(0.0, 1.0)
    }
}

/// `P[U_j > v_j ∀ j ∈ J, U_i < v_i ∀ i ∈ I]`, clamped to `[0, 1]`.
pub fn orthant_prob(spec: &CopulaSpec, d: &Direction, v: &UnitPoint) -> Result<f64> {
    check_same_dim(spec.dim(), d.dim())?;
    check_same_dim(spec.dim(), v.dim())?;
    let mut scratch = vec![0.0; spec.dim()];
    Ok(OrthantExpansion::new(d).eval(spec, v.coords(), &mut scratch))
}

/// `P[target event at v | conditioning event at w]`, or `None` when the
/// conditioning event has probability below `eps_den`.
pub fn conditional_prob(
    spec: &CopulaSpec,
    d: &Direction,
    v: &UnitPoint,
    w: &UnitPoint,
    eps_den: f64,
) -> Result<Option<f64>> {
    check_same_dim(spec.dim(), d.dim())?;
    check_same_dim(spec.dim(), v.dim())?;
    check_same_dim(spec.dim(), w.dim())?;
    let expansion = OrthantExpansion::new(d);
    let mut scratch = vec![0.0; spec.dim()];
    let mut joined = vec![0.0; spec.dim()];
    join_into(d.neg_mask(), v.coords(), w.coords(), &mut joined);
    Ok(conditional_raw(
        &expansion,
        spec,
        &joined,
        w.coords(),
        eps_den,
        &mut scratch,
    ))
}

pub(crate) fn conditional_raw(
    expansion: &OrthantExpansion,
    spec: &CopulaSpec,
    joined: &[f64],
    cond: &[f64],
    eps_den: f64,
    scratch: &mut [f64],
) -> Option<f64> {
    let den = expansion.eval(spec, cond, scratch);
    if den < eps_den {
        return None;
    }
    Some(expansion.eval(spec, joined, scratch) / den)
}

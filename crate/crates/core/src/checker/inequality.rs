use crate::checker::{
    first_violation, CheckOptions, Counterexample, DirectionVerdict, GridSpec, Method, Outcome,
    SlackAccumulator,
};
use crate::domain::{check_same_dim, DependenceNotion, Direction, Sign, UnitPoint};
use crate::error::{Error, Result};
use crate::families::CopulaSpec;
use crate::orthant::OrthantExpansion;

/// Result of checking one ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub enum PairOutcome {
    Pass { lhs: f64, rhs: f64 },
    Violated(Counterexample),
}

impl PairOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, PairOutcome::Pass { .. })
    }
}

enum Side {
    /// Orthant function of a mixed direction; product inequality `<=`.
    Mixed(OrthantExpansion),
    /// `C` (sign `-1`) or `Ĉ` (sign `+1`); product inequality `>=`.
    Pure { survival: bool },
}

/// Evaluates both sides of the pairwise characterization for one direction.
pub(crate) struct PairKernel<'a> {
    spec: &'a CopulaSpec,
    side: Side,
    swap_mask: u32,
    notion: DependenceNotion,
}

impl<'a> PairKernel<'a> {
    fn mixed(spec: &'a CopulaSpec, d: &Direction, notion: DependenceNotion) -> Self {
        Self {
            spec,
            side: Side::Mixed(OrthantExpansion::new(d)),
            swap_mask: d.neg_mask(),
            notion,
        }
    }

    fn pure(spec: &'a CopulaSpec, d: &Direction, notion: DependenceNotion) -> Self {
        Self {
            spec,
            side: Side::Pure {
                survival: d.sign(0) == Sign::Plus,
            },
            swap_mask: 1,
            notion,
        }
    }

    fn h(&self, v: &[f64], scratch: &mut [f64]) -> f64 {
        match &self.side {
            Side::Mixed(e) => e.eval(self.spec, v, scratch),
            Side::Pure { survival: true } => self.spec.survival_eval_slice(v),
            Side::Pure { survival: false } => self.spec.eval_slice(v),
        }
    }

    /// `(lhs, rhs)` normalized so the property reads `lhs <= rhs`.
    pub(crate) fn sides(&self, u: &[f64], up: &[f64], buf: &mut Buffers) -> (f64, f64) {
        let n = u.len();
        for k in 0..n {
            let swap = self.swap_mask >> k & 1 == 1;
            buf.a[k] = if swap { up[k] } else { u[k] };
            buf.b[k] = if swap { u[k] } else { up[k] };
        }
        let direct = self.h(u, &mut buf.scratch) * self.h(up, &mut buf.scratch);
        let swapped = self.h(&buf.a, &mut buf.scratch) * self.h(&buf.b, &mut buf.scratch);
        let (lhs, rhs) = match self.side {
            Side::Mixed(_) => (direct, swapped),
            Side::Pure { .. } => (swapped, direct),
        };
        match self.notion {
            DependenceNotion::Increasing => (lhs, rhs),
            DependenceNotion::Decreasing => (rhs, lhs),
        }
    }
}

pub(crate) struct Buffers {
    a: Vec<f64>,
    b: Vec<f64>,
    scratch: Vec<f64>,
}

impl Buffers {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            a: vec![0.0; n],
            b: vec![0.0; n],
            scratch: vec![0.0; n],
        }
    }
}

fn check_pair_inputs(
    spec: &CopulaSpec,
    d: &Direction,
    u: &UnitPoint,
    up: &UnitPoint,
) -> Result<()> {
    check_same_dim(spec.dim(), d.dim())?;
    check_same_dim(spec.dim(), u.dim())?;
    check_same_dim(spec.dim(), up.dim())?;
    if let Some(axis) = (0..u.dim()).find(|&k| u.coords()[k] > up.coords()[k]) {
        return Err(Error::UnorderedPair(axis));
    }
    Ok(())
}

fn judge(
    kernel: &PairKernel<'_>,
    d: &Direction,
    u: &UnitPoint,
    up: &UnitPoint,
    tol: f64,
) -> PairOutcome {
    let mut buf = Buffers::new(u.dim());
    let (lhs, rhs) = kernel.sides(u.coords(), up.coords(), &mut buf);
    if lhs - rhs > tol {
        PairOutcome::Violated(Counterexample {
            direction: d.clone(),
            method: Method::Inequality,
            u_low: u.clone(),
            u_high: up.clone(),
            target: None,
            lhs,
            rhs,
            violation: lhs - rhs,
        })
    } else {
        PairOutcome::Pass { lhs, rhs }
    }
}

/// Checks `F(u) F(u') <= F(u ⊕_I u') F(u' ⊕_I u) + tol` for a mixed direction,
/// where `F` is the direction's orthant function and `⊕_I` takes the second
/// argument's coordinates on `I`. Under `D` the comparison is reversed.
pub fn check_pair_mixed(
    spec: &CopulaSpec,
    d: &Direction,
    u: &UnitPoint,
    up: &UnitPoint,
    opts: &CheckOptions,
) -> Result<PairOutcome> {
    check_pair_inputs(spec, d, u, up)?;
    if d.is_pure() {
        return Err(Error::PureDirection(d.to_string()));
    }
    let kernel = PairKernel::mixed(spec, d, opts.notion);
    Ok(judge(&kernel, d, u, up, opts.tol))
}

/// Checks `H(u) H(u') >= H(u'_1, u_2, ..) H(u_1, u'_2, ..) - tol` with
/// `H = C` for the all-minus direction and `H = Ĉ` for the all-plus one.
/// Established for `n` = 2 and 3; higher dimensions need
/// `opts.allow_conjectural_pure`.
pub fn check_pair_pure(
    spec: &CopulaSpec,
    d: &Direction,
    u: &UnitPoint,
    up: &UnitPoint,
    opts: &CheckOptions,
) -> Result<PairOutcome> {
    check_pair_inputs(spec, d, u, up)?;
    if !d.is_pure() {
        return Err(Error::MalformedDirection(format!(
            "{d} is mixed; the single-swap inequality is for pure directions"
        )));
    }
    if d.dim() > 3 && !opts.allow_conjectural_pure {
        return Err(Error::UnsupportedPure {
            direction: d.to_string(),
            dim: d.dim(),
        });
    }
    let kernel = PairKernel::pure(spec, d, opts.notion);
    Ok(judge(&kernel, d, u, up, opts.tol))
}

/// Scans every ordered lattice pair `u <= u'` in lexicographic order and
/// reports the first violation.
pub fn check_direction_inequality(
    spec: &CopulaSpec,
    d: &Direction,
    grid: GridSpec,
    opts: &CheckOptions,
) -> DirectionVerdict {
    let n = spec.dim();
    let mut verdict = DirectionVerdict {
        direction: d.clone(),
        notion: opts.notion,
        method: Method::Inequality,
        outcome: Outcome::Unsupported,
        counterexample: None,
        stats: Vec::new(),
        conjectural: false,
        by_duality: opts.notion == DependenceNotion::Decreasing,
    };

    let kernel = if !d.is_pure() {
        PairKernel::mixed(spec, d, opts.notion)
    } else if n <= 3 || opts.allow_conjectural_pure {
        verdict.conjectural = n > 3;
        PairKernel::pure(spec, d, opts.notion)
    } else {
        verdict
            .stats
            .push(SlackAccumulator::default().into_stats(Method::Inequality, Outcome::Unsupported));
        return verdict;
    };

    let lattice = grid.lattice(n);
    let tol = opts.tol;
    let (violation, acc) = first_violation(lattice.len(), |i| {
        let mut buf = Buffers::new(n);
        let mut acc = SlackAccumulator::default();
        let u = lattice.point(i);
        for j in lattice.upper_set(i) {
            let up = lattice.point(j);
            let (lhs, rhs) = kernel.sides(u, up, &mut buf);
            acc.push(rhs - lhs);
            if lhs - rhs > tol {
                return (Some((i, j, lhs, rhs)), acc);
            }
        }
        (None, acc)
    });

    verdict.outcome = if violation.is_some() {
        Outcome::Refuted
    } else {
        Outcome::PassAtResolution
    };
    verdict.counterexample = violation.map(|(i, j, lhs, rhs)| Counterexample {
        direction: d.clone(),
        method: Method::Inequality,
        u_low: UnitPoint::new(lattice.point(i).to_vec()).expect("lattice point"),
        u_high: UnitPoint::new(lattice.point(j).to_vec()).expect("lattice point"),
        target: None,
        lhs,
        rhs,
        violation: lhs - rhs,
    });
    verdict
        .stats
        .push(acc.into_stats(Method::Inequality, verdict.outcome));
    verdict
}

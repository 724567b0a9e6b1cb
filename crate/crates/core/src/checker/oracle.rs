use rayon::prelude::*;

use crate::checker::{
    first_violation, CheckOptions, Counterexample, DirectionVerdict, GridSpec, Method, Outcome,
    SlackAccumulator,
};
use crate::domain::{join_into, DependenceNotion, Direction, UnitPoint};
use crate::families::CopulaSpec;
use crate::orthant::OrthantExpansion;

/// Checks the definition directly: for every lattice target `v` the
/// conditional `P[event at v | event at v']` must be nondecreasing (`I`) or
/// nonincreasing (`D`) as `v'` moves one lattice step outward along any axis.
///
/// "Outward" means `+step` on `J` axes and `-step` on `I` axes, the
/// copula-coordinate image of increasing the threshold of `α X`.
/// Comparisons where either conditioning event has probability below
/// `eps_den` are skipped.
pub fn check_direction_oracle(
    spec: &CopulaSpec,
    d: &Direction,
    grid: GridSpec,
    opts: &CheckOptions,
) -> DirectionVerdict {
    let n = spec.dim();
    let lattice = grid.lattice(n);
    let expansion = OrthantExpansion::new(d);
    let neg_mask = d.neg_mask();

    let denominators: Vec<Option<f64>> = (0..lattice.len())
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |scratch, j| {
                let den = expansion.eval(spec, lattice.point(j), scratch);
                (den >= opts.eps_den).then_some(den)
            },
        )
        .collect();

    // Outward neighbour offsets per axis.
    let step: Vec<(usize, bool)> = (0..n)
        .map(|k| (lattice.stride(k), d.is_negative(k)))
        .collect();

    let (violation, acc) = first_violation(lattice.len(), |t| {
        let target = lattice.point(t);
        let mut scratch = vec![0.0; n];
        let mut joined = vec![0.0; n];
        let conditionals: Vec<Option<f64>> = denominators
            .iter()
            .enumerate()
            .map(|(j, den)| {
                den.map(|den| {
                    join_into(neg_mask, target, lattice.point(j), &mut joined);
                    expansion.eval(spec, &joined, &mut scratch) / den
                })
            })
            .collect();

        let mut acc = SlackAccumulator::default();
        for (j, c_from) in conditionals.iter().enumerate() {
            let Some(c_from) = *c_from else { continue };
            for (k, &(stride, negative)) in step.iter().enumerate() {
                let digit = lattice.digit(j, k);
                let next = if negative {
                    if digit == 0 {
                        continue;
                    }
                    j - stride
                } else {
                    if digit + 1 == lattice.g {
                        continue;
                    }
                    j + stride
                };
                let Some(c_to) = conditionals[next] else {
                    continue;
                };
                let (lhs, rhs) = match opts.notion {
                    DependenceNotion::Increasing => (c_from, c_to),
                    DependenceNotion::Decreasing => (c_to, c_from),
                };
                acc.push(rhs - lhs);
                if lhs - rhs > opts.tol {
                    return (Some((t, j, next, lhs, rhs)), acc);
                }
            }
        }
        (None, acc)
    });

    let outcome = if violation.is_some() {
        Outcome::Refuted
    } else {
        Outcome::PassAtResolution
    };
    let counterexample = violation.map(|(t, from, to, lhs, rhs)| {
        let (low, high) = if from < to { (from, to) } else { (to, from) };
        let point = |i: usize| UnitPoint::new(lattice.point(i).to_vec()).expect("lattice point");
        Counterexample {
            direction: d.clone(),
            method: Method::Oracle,
            u_low: point(low),
            u_high: point(high),
            target: Some(point(t)),
            lhs,
            rhs,
            violation: lhs - rhs,
        }
    });
    DirectionVerdict {
        direction: d.clone(),
        notion: opts.notion,
        method: Method::Oracle,
        outcome,
        counterexample,
        stats: vec![acc.into_stats(Method::Oracle, outcome)],
        conjectural: false,
        by_duality: opts.notion == DependenceNotion::Decreasing,
    }
}

use crate::checker::{
    check_direction_inequality, check_direction_oracle, CheckOptions, Counterexample,
    DirectionVerdict, GridSpec, Method, MethodDisagreement, Outcome, ScanReport,
};
use crate::domain::{check_same_dim, DependenceNotion, Direction, Sign, UnitPoint};
use crate::error::Result;
use crate::families::CopulaSpec;
use crate::orthant::{conditional_prob, orthant_prob};

/// Classifies all `2^n` directions of `spec`.
pub fn scan_all_directions(
    spec: &CopulaSpec,
    grid: GridSpec,
    method: Method,
    opts: &CheckOptions,
) -> ScanReport {
    let directions = Direction::all(spec.dim()).expect("spec dimension is validated");
    scan_directions(spec, &directions, grid, method, opts).expect("directions match spec")
}

/// Classifies the given directions, in order.
pub fn scan_directions(
    spec: &CopulaSpec,
    directions: &[Direction],
    grid: GridSpec,
    method: Method,
    opts: &CheckOptions,
) -> Result<ScanReport> {
    for d in directions {
        check_same_dim(spec.dim(), d.dim())?;
    }
    let mut report = ScanReport {
        grid,
        method,
        options: *opts,
        verdicts: Vec::with_capacity(directions.len()),
        disagreements: Vec::new(),
    };
    for d in directions {
        let verdict = match method {
            Method::Inequality => check_direction_inequality(spec, d, grid, opts),
            Method::Oracle => check_direction_oracle(spec, d, grid, opts),
            Method::Both => {
                let ineq = check_direction_inequality(spec, d, grid, opts);
                let oracle = check_direction_oracle(spec, d, grid, opts);
                let (verdict, disagreement) = combine(ineq, oracle);
                report.disagreements.extend(disagreement);
                verdict
            }
        };
        report.verdicts.push(verdict);
    }
    Ok(report)
}

fn combine(
    ineq: DirectionVerdict,
    oracle: DirectionVerdict,
) -> (DirectionVerdict, Option<MethodDisagreement>) {
    let mut stats = ineq.stats.clone();
    stats.extend(oracle.stats.iter().cloned());

    if ineq.outcome == Outcome::Unsupported {
        // Pure direction in n >= 4: the oracle alone decides.
        return (DirectionVerdict { stats, ..oracle }, None);
    }

    let disagreement = (ineq.outcome != oracle.outcome).then(|| MethodDisagreement {
        direction: ineq.direction.clone(),
        inequality: ineq.outcome,
        oracle: oracle.outcome,
        conjectural: ineq.conjectural,
        by_duality: ineq.by_duality,
    });
    let refuted = ineq.outcome == Outcome::Refuted || oracle.outcome == Outcome::Refuted;
    let counterexample = ineq.counterexample.clone().or(oracle.counterexample);
    let verdict = DirectionVerdict {
        method: Method::Both,
        outcome: if refuted {
            Outcome::Refuted
        } else {
            Outcome::PassAtResolution
        },
        counterexample,
        stats,
        ..ineq
    };
    (verdict, disagreement)
}

impl Counterexample {
    /// Recomputes both sides from scratch with the public orthant functions
    /// and returns the recomputed `lhs - rhs`.
    pub fn recompute_violation(&self, spec: &CopulaSpec, opts: &CheckOptions) -> Result<f64> {
        let d = &self.direction;
        let (lhs, rhs) = match self.method {
            Method::Oracle => {
                let target = self
                    .target
                    .as_ref()
                    .expect("oracle witnesses carry a target");
                // The axis the two conditioning points differ on decides which
                // one sits further outward.
                let axis = (0..d.dim())
                    .find(|&k| self.u_low.coords()[k] != self.u_high.coords()[k])
                    .unwrap_or(0);
                let (from, to) = if d.is_negative(axis) {
                    (&self.u_high, &self.u_low)
                } else {
                    (&self.u_low, &self.u_high)
                };
                let c_from =
                    conditional_prob(spec, d, target, from, opts.eps_den)?.unwrap_or(f64::NAN);
                let c_to = conditional_prob(spec, d, target, to, opts.eps_den)?.unwrap_or(f64::NAN);
                (c_from, c_to)
            }
            _ => {
                let (u, up) = (&self.u_low, &self.u_high);
                let mut a = u.coords().to_vec();
                let mut b = up.coords().to_vec();
                let swap: Vec<usize> = if d.is_pure() {
                    vec![0]
                } else {
                    d.neg().to_vec()
                };
                for k in swap {
                    a[k] = up.coords()[k];
                    b[k] = u.coords()[k];
                }
                let (a, b) = (UnitPoint::new(a)?, UnitPoint::new(b)?);
                if d.is_pure() {
                    let h = |p: &UnitPoint| -> Result<f64> {
                        match d.sign(0) {
                            Sign::Minus => orthant_prob(spec, d, p),
                            // Ĉ(p) = P[U > 1 - p]
                            Sign::Plus => orthant_prob(spec, d, &p.reflect()),
                        }
                    };
                    (h(&a)? * h(&b)?, h(u)? * h(up)?)
                } else {
                    let f = |p: &UnitPoint| orthant_prob(spec, d, p);
                    (f(u)? * f(up)?, f(&a)? * f(&b)?)
                }
            }
        };
        let (lhs, rhs) = match opts.notion {
            DependenceNotion::Increasing => (lhs, rhs),
            DependenceNotion::Decreasing => (rhs, lhs),
        };
        Ok(lhs - rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dirs(list: &[&str]) -> Vec<Direction> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn fgm_bivariate_classification() {
        let fgm = CopulaSpec::fgm(2, 0.5).unwrap();
        let report = scan_all_directions(
            &fgm,
            GridSpec::new(21).unwrap(),
            Method::Both,
            &CheckOptions::default(),
        );
        assert!(report.disagreements.is_empty());
        let passed: Vec<String> = report
            .passed_directions()
            .iter()
            .map(|d| d.tokens())
            .collect();
        assert_eq!(passed, ["+,+", "-,-"]);
        for v in &report.verdicts {
            if let Some(cx) = &v.counterexample {
                let opts = CheckOptions::default();
                assert!(cx.recompute_violation(&fgm, &opts).unwrap() > opts.tol);
            }
        }
    }

    #[test]
    fn explicit_direction_list_preserved() {
        let pi = CopulaSpec::product(3).unwrap();
        let list = dirs(&["-,+,-", "+,+,+"]);
        let report = scan_directions(
            &pi,
            &list,
            GridSpec::new(3).unwrap(),
            Method::Oracle,
            &CheckOptions::default(),
        )
        .unwrap();
        let got: Vec<&Direction> = report.verdicts.iter().map(|v| &v.direction).collect();
        assert_eq!(got, list.iter().collect::<Vec<_>>());
    }

    #[test]
    fn mismatched_direction_rejected() {
        let pi = CopulaSpec::product(3).unwrap();
        assert!(scan_directions(
            &pi,
            &dirs(&["+,-"]),
            GridSpec::new(3).unwrap(),
            Method::Oracle,
            &CheckOptions::default()
        )
        .is_err());
    }

    #[test]
    fn both_routes_pure_four_dim_to_oracle() {
        let m4 = CopulaSpec::upper_frechet(4).unwrap();
        let report = scan_directions(
            &m4,
            &dirs(&["+,+,+,+"]),
            GridSpec::new(3).unwrap(),
            Method::Both,
            &CheckOptions::default(),
        )
        .unwrap();
        let v = &report.verdicts[0];
        assert_eq!(v.method, Method::Oracle);
        assert_eq!(v.outcome, Outcome::PassAtResolution);
        assert_eq!(
            v.stats_for(Method::Inequality).unwrap().outcome,
            Outcome::Unsupported
        );
        assert!(report.disagreements.is_empty());
    }
}

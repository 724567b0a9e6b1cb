#![allow(dead_code)]

use dirmono_core::{CopulaSpec, Direction, Family, UnitPoint};
use rand::Rng;

/// A spread of valid copulas in dimension `n`, survival versions included.
pub fn families(n: usize) -> Vec<CopulaSpec> {
    let mut base = vec![
        Family::Product,
        Family::UpperFrechet,
        Family::Fgm { lambda: 0.7 },
        Family::Fgm { lambda: -1.0 },
        Family::ConvexPiM { theta: 0.35 },
    ];
    if n == 2 {
        base.push(Family::LowerFrechet);
        base.push(Family::Amh { delta: 0.6 });
        base.push(Family::Amh { delta: -1.0 });
    }
    let mut out: Vec<CopulaSpec> = base
        .iter()
        .map(|f| CopulaSpec::new(f.clone(), n).unwrap())
        .collect();
    let survivals: Vec<CopulaSpec> = out.iter().map(|s| s.survival().unwrap()).collect();
    out.extend(survivals);
    out
}

pub fn random_family<R: Rng>(rng: &mut R, n: usize) -> CopulaSpec {
    let family = match rng.gen_range(0..if n == 2 { 7 } else { 5 }) {
        0 => Family::Product,
        1 => Family::UpperFrechet,
        2 => Family::Fgm {
            lambda: rng.gen_range(-1.0..=1.0),
        },
        3 => Family::ConvexPiM {
            theta: rng.gen_range(0.0..=1.0),
        },
        4 => Family::Product,
        5 => Family::LowerFrechet,
        _ => Family::Amh {
            delta: rng.gen_range(-1.0..=1.0),
        },
    };
    let spec = CopulaSpec::new(family, n).unwrap();
    if rng.gen_bool(0.25) {
        spec.survival().unwrap()
    } else {
        spec
    }
}

pub fn random_direction<R: Rng>(rng: &mut R, n: usize) -> Direction {
    let signs: Vec<i32> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    Direction::new(&signs).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> UnitPoint {
    UnitPoint::new((0..n).map(|_| rng.gen::<f64>()).collect()).unwrap()
}

/// Orthant probability by recursive splitting, independent of the subset-sum
/// engine: for `j ∈ J`,
/// `P[U_j > v_j, E] = P[E] - P[U_j <= v_j, E]`,
/// recursing until no `>` events remain, where the value is the copula
/// evaluated with the `<` thresholds and 1 elsewhere.
pub fn orthant_by_recursion(spec: &CopulaSpec, above: &[usize], below: &[usize], v: &[f64]) -> f64 {
    match above.split_first() {
        None => {
            if below.is_empty() {
                return 1.0;
            }
            let mut w = vec![1.0; v.len()];
            for &i in below {
                w[i] = v[i];
            }
            spec.eval_slice(&w)
        }
        Some((&j, rest)) => {
            let mut with_j = below.to_vec();
            with_j.push(j);
            orthant_by_recursion(spec, rest, below, v)
                - orthant_by_recursion(spec, rest, &with_j, v)
        }
    }
}

pub fn orthant_oracle(spec: &CopulaSpec, d: &Direction, v: &UnitPoint) -> f64 {
    orthant_by_recursion(spec, d.pos(), d.neg(), v.coords())
}

//! Points, directions and boxes in the unit hypercube.
//!
//! Everything lives in copula coordinates: a point is a vector of
//! probabilities in `[0, 1]^n`. A [`Direction`] splits the axes into the
//! set `I` where the event is `U_i < v_i` and the set `J` where it is
//! `U_j > v_j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::MAX_DIM;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension(n))
    }
}

pub(crate) fn check_same_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// A point of `[0, 1]^n`, `n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitPoint(Vec<f64>);

impl UnitPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        for (index, &value) in coords.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::CoordinateOutOfRange { index, value });
            }
        }
        Ok(Self(coords))
    }

    /// The point with every coordinate equal to `value`.
    pub fn splat(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &UnitPoint) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The reflected point `1 - u`.
    pub fn reflect(&self) -> UnitPoint {
        UnitPoint(self.0.iter().map(|x| 1.0 - x).collect())
    }
}

impl<'de> Deserialize<'de> for UnitPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        UnitPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for UnitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A sign vector `alpha` in `{-1, +1}^n`.
///
/// `neg` (the set `I`) holds the axes with sign `-1`; `pos` (the set `J`)
/// the axes with sign `+1`. Both are stored 0-based; the `*_one_based`
/// accessors are what reports show.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Direction {
    signs: Vec<Sign>,
    neg: Vec<usize>,
    pos: Vec<usize>,
    neg_mask: u32,
}

impl Direction {
    /// Builds a direction from integer signs, each of which must be exactly `-1` or `+1`.
    pub fn new(signs: &[i32]) -> Result<Self> {
        check_dim(signs.len())?;
        let signs = signs
            .iter()
            .enumerate()
            .map(|(i, &s)| match s {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(Error::MalformedDirection(format!(
                    "entry {} is {other}, expected -1 or +1",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_signs(signs))
    }

    pub(crate) fn from_signs(signs: Vec<Sign>) -> Self {
        let mut neg = Vec::new();
        let mut pos = Vec::new();
        let mut neg_mask = 0u32;
        for (i, s) in signs.iter().enumerate() {
            match s {
                Sign::Minus => {
                    neg.push(i);
                    neg_mask |= 1 << i;
                }
                Sign::Plus => pos.push(i),
            }
        }
        Self {
            signs,
            neg,
            pos,
            neg_mask,
        }
    }

    /// The all-`sign` direction of dimension `n`.
    pub fn uniform(n: usize, sign: Sign) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::from_signs(vec![sign; n]))
    }

    /// All `2^n` directions. The first axis varies slowest and `+` precedes `-`.
    pub fn all(n: usize) -> Result<Vec<Direction>> {
        check_dim(n)?;
        Ok((0..1u32 << n)
            .map(|bits| {
                let signs = (0..n)
                    .map(|i| {
                        if bits >> (n - 1 - i) & 1 == 1 {
                            Sign::Minus
                        } else {
                            Sign::Plus
                        }
                    })
                    .collect();
                Self::from_signs(signs)
            })
            .collect())
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign(&self, axis: usize) -> Sign {
        self.signs[axis]
    }

    /// 0-based axes with sign `-1` (the set `I`).
    pub fn neg(&self) -> &[usize] {
        &self.neg
    }

    /// 0-based axes with sign `+1` (the set `J`).
    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    pub fn neg_one_based(&self) -> Vec<usize> {
        self.neg.iter().map(|i| i + 1).collect()
    }

    pub fn pos_one_based(&self) -> Vec<usize> {
        self.pos.iter().map(|i| i + 1).collect()
    }

    /// Bitmask of the `I` axes.
    pub fn neg_mask(&self) -> u32 {
        self.neg_mask
    }

    pub fn pos_mask(&self) -> u32 {
        !self.neg_mask & ((1u32 << self.dim()) - 1)
    }

    pub fn is_negative(&self, axis: usize) -> bool {
        self.neg_mask >> axis & 1 == 1
    }

    /// True when every sign is the same (`I` or `J` empty).
    pub fn is_pure(&self) -> bool {
        self.neg.is_empty() || self.pos.is_empty()
    }

    /// Comma-separated `+`/`-` tokens, the command-line form.
    pub fn tokens(&self) -> String {
        let mut s = String::with_capacity(2 * self.dim());
        for (i, sign) in self.signs.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push(sign.symbol());
        }
        s
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.tokens())
    }
}

impl FromStr for Direction {
    type Err = Error;

    /// Parses `"+,-,+"`. Surrounding parentheses and whitespace are tolerated,
    /// as are `+1`/`-1` tokens.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let signs = body
            .split(',')
            .map(|tok| match tok.trim() {
                "+" | "+1" | "1" => Ok(1),
                "-" | "-1" => Ok(-1),
                other => Err(Error::MalformedDirection(format!(
                    "bad sign token '{other}' in '{s}'"
                ))),
            })
            .collect::<Result<Vec<i32>>>()?;
        Direction::new(&signs)
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.tokens())
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether a direction is checked for increasing (`I`) or decreasing (`D`) conditionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum DependenceNotion {
    #[default]
    #[serde(rename = "I")]
    Increasing,
    #[serde(rename = "D")]
    Decreasing,
}

impl fmt::Display for DependenceNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DependenceNotion::Increasing => "I",
            DependenceNotion::Decreasing => "D",
        })
    }
}

impl FromStr for DependenceNotion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "I" | "i" => Ok(DependenceNotion::Increasing),
            "D" | "d" => Ok(DependenceNotion::Decreasing),
            other => Err(format!("unknown notion '{other}', expected I or D")),
        }
    }
}

/// Axis-aligned box `[lower, upper]` inside the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitBox {
    lower: UnitPoint,
    upper: UnitPoint,
}

impl UnitBox {
    pub fn new(lower: UnitPoint, upper: UnitPoint) -> Result<Self> {
        check_same_dim(lower.dim(), upper.dim())?;
        if let Some(axis) = (0..lower.dim()).find(|&i| lower.0[i] > upper.0[i]) {
            return Err(Error::InvertedBox(axis));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &UnitPoint {
        &self.lower
    }

    pub fn upper(&self) -> &UnitPoint {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }
}

/// Coordinates of the intersection of the directional events at `v` and `w`:
/// max on `J` axes, min on `I` axes.
pub fn join_direction(d: &Direction, v: &UnitPoint, w: &UnitPoint) -> Result<UnitPoint> {
    check_same_dim(d.dim(), v.dim())?;
    check_same_dim(d.dim(), w.dim())?;
    let mut out = vec![0.0; d.dim()];
    join_into(d.neg_mask(), v.coords(), w.coords(), &mut out);
    Ok(UnitPoint(out))
}

pub(crate) fn join_into(neg_mask: u32, v: &[f64], w: &[f64], out: &mut [f64]) {
    for (k, o) in out.iter_mut().enumerate() {
        *o = if neg_mask >> k & 1 == 1 {
            v[k].min(w[k])
        } else {
            v[k].max(w[k])
        };
    }
}

/// The `eval`-measure of box `b`: the alternating sum of `eval` over the `2^n`
/// vertices, with sign `(-1)^(number of lower coordinates chosen)`.
pub fn box_volume<F>(eval: F, b: &UnitBox) -> f64
where
    F: Fn(&UnitPoint) -> f64,
{
    let n = b.dim();
    let lo = b.lower.coords();
    let hi = b.upper.coords();
    let mut vertex = vec![0.0; n];
    let mut total = 0.0;
    for mask in 0..1u32 << n {
        for (k, x) in vertex.iter_mut().enumerate() {
            *x = if mask >> k & 1 == 1 { lo[k] } else { hi[k] };
        }
        let value = eval(&UnitPoint(vertex.clone()));
        if mask.count_ones() % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[f64]) -> UnitPoint {
        UnitPoint::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn direction_partitions() {
        let d = Direction::new(&[1, -1]).unwrap();
        assert_eq!(d.neg_one_based(), vec![2]);
        assert_eq!(d.pos_one_based(), vec![1]);
        assert!(!d.is_pure());

        let d = Direction::new(&[1, 1, 1]).unwrap();
        assert!(d.neg().is_empty());
        assert_eq!(d.pos_one_based(), vec![1, 2, 3]);
        assert!(d.is_pure());

        let d = Direction::new(&[-1, -1]).unwrap();
        assert_eq!(d.neg_one_based(), vec![1, 2]);
        assert!(d.pos().is_empty());
        assert!(d.is_pure());
    }

    #[test]
    fn direction_rejects_bad_input() {
        assert!(matches!(
            Direction::new(&[1, 0]),
            Err(Error::MalformedDirection(_))
        ));
        assert!(matches!(
            Direction::new(&[1, 2, -1]),
            Err(Error::MalformedDirection(_))
        ));
        assert_eq!(Direction::new(&[1]), Err(Error::Dimension(1)));
        assert!("+,x".parse::<Direction>().is_err());
        assert!("+".parse::<Direction>().is_err());
    }

    #[test]
    fn direction_parse_and_display() {
        let d: Direction = "+,-,+".parse().unwrap();
        assert_eq!(d, Direction::new(&[1, -1, 1]).unwrap());
        assert_eq!(d.to_string(), "(+,-,+)");
        assert_eq!("(+1, -1)".parse::<Direction>().unwrap().tokens(), "+,-");
    }

    #[test]
    fn all_directions_order() {
        let all = Direction::all(2).unwrap();
        let tokens: Vec<_> = all.iter().map(|d| d.tokens()).collect();
        assert_eq!(tokens, ["+,+", "+,-", "-,+", "-,-"]);
        assert_eq!(Direction::all(4).unwrap().len(), 16);
    }

    #[test]
    fn join_examples() {
        let d = Direction::new(&[1, -1]).unwrap();
        let j = join_direction(&d, &pt(&[0.3, 0.8]), &pt(&[0.5, 0.4])).unwrap();
        assert_eq!(j.coords(), &[0.5, 0.4]);

        let d = Direction::new(&[1, 1]).unwrap();
        let j = join_direction(&d, &pt(&[0.3, 0.8]), &pt(&[0.5, 0.4])).unwrap();
        assert_eq!(j.coords(), &[0.5, 0.8]);

        let d = Direction::new(&[-1, -1, -1]).unwrap();
        let v = pt(&[0.2, 0.2, 0.2]);
        assert_eq!(join_direction(&d, &v, &v).unwrap(), v);
    }

    #[test]
    fn join_dimension_mismatch() {
        let d = Direction::new(&[1, -1]).unwrap();
        assert!(matches!(
            join_direction(&d, &pt(&[0.1, 0.2, 0.3]), &pt(&[0.1, 0.2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn point_validation() {
        assert!(UnitPoint::new(vec![0.5, 1.5]).is_err());
        assert!(UnitPoint::new(vec![0.5]).is_err());
        assert!(UnitPoint::new(vec![0.0, 1.0]).is_ok());
        assert!(UnitPoint::new(vec![f64::NAN, 0.5]).is_err());
    }

    #[test]
    fn box_volume_examples() {
        let product = |u: &UnitPoint| u.coords().iter().product::<f64>();
        let min = |u: &UnitPoint| u.coords().iter().cloned().fold(1.0, f64::min);

        let b = UnitBox::new(pt(&[0.2, 0.3]), pt(&[0.5, 0.6])).unwrap();
        assert!((box_volume(product, &b) - 0.09).abs() < 1e-15);

        let b = UnitBox::new(pt(&[0.0, 0.0]), pt(&[0.5, 0.5])).unwrap();
        assert_eq!(box_volume(min, &b), 0.5);

        let b = UnitBox::new(
            UnitPoint::splat(3, 0.0).unwrap(),
            UnitPoint::splat(3, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(box_volume(product, &b), 1.0);
    }

    #[test]
    fn inverted_box_rejected() {
        assert_eq!(
            UnitBox::new(pt(&[0.2, 0.7]), pt(&[0.5, 0.6])),
            Err(Error::InvertedBox(1))
        );
    }
}

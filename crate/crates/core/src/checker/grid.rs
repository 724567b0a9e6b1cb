use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The open interior lattice `{k / (g + 1) : k = 1..=g}` on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GridSpec {
    resolution: usize,
}

impl GridSpec {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::GridResolution(resolution));
        }
        Ok(Self { resolution })
    }

    /// Default resolution by dimension: 21, 9, 6, 4 for n = 2..=5, and 3 beyond.
    pub fn default_for_dim(n: usize) -> Self {
        let resolution = match n {
            0..=2 => 21,
            3 => 9,
            4 => 6,
            5 => 4,
            _ => 3,
        };
        Self { resolution }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.resolution + 1) as f64
    }

    /// The `k`-th lattice value, `k` in `0..resolution`.
    pub fn value(&self, k: usize) -> f64 {
        (k + 1) as f64 / (self.resolution + 1) as f64
    }

    pub fn axis_values(&self) -> Vec<f64> {
        (0..self.resolution).map(|k| self.value(k)).collect()
    }

    /// Number of lattice points in dimension `n`.
    pub fn point_count(&self, n: usize) -> usize {
        self.resolution.pow(n as u32)
    }

    /// Number of ordered pairs `u <= u'` (componentwise, `u = u'` included) in dimension `n`.
    pub fn ordered_pair_count(&self, n: usize) -> u64 {
        let g = self.resolution as u64;
        (g * (g + 1) / 2).pow(n as u32)
    }

    /// Every lattice point in lexicographic order (first axis slowest),
    /// flattened into rows of `n` coordinates.
    pub(crate) fn lattice(&self, n: usize) -> Lattice {
        let g = self.resolution;
        let count = self.point_count(n);
        let mut coords = Vec::with_capacity(count * n);
        let mut digits = vec![0usize; n];
        for _ in 0..count {
            coords.extend(digits.iter().map(|&k| self.value(k)));
            for axis in (0..n).rev() {
                digits[axis] += 1;
                if digits[axis] < g {
                    break;
                }
                digits[axis] = 0;
            }
        }
        Lattice { g, n, coords }
    }
}

impl TryFrom<usize> for GridSpec {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        GridSpec::new(value)
    }
}

impl From<GridSpec> for usize {
    fn from(grid: GridSpec) -> usize {
        grid.resolution
    }
}

/// Precomputed lattice coordinates with index arithmetic.
pub(crate) struct Lattice {
    pub g: usize,
    pub n: usize,
    coords: Vec<f64>,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.coords.len() / self.n
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.coords[index * self.n..(index + 1) * self.n]
    }

    /// Lattice digit of `index` on `axis`.
    pub fn digit(&self, index: usize, axis: usize) -> usize {
        index / self.stride(axis) % self.g
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.g.pow((self.n - 1 - axis) as u32)
    }

    /// Indices of every lattice point `>= index` componentwise, in lexicographic order.
    pub fn upper_set(&self, index: usize) -> UpperSet<'_> {
        let start: Vec<usize> = (0..self.n).map(|a| self.digit(index, a)).collect();
        UpperSet {
            lattice: self,
            digits: start.clone(),
            start,
            done: false,
        }
    }
}

pub(crate) struct UpperSet<'a> {
    lattice: &'a Lattice,
    start: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for UpperSet<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.done {
            return None;
        }
        let g = self.lattice.g;
        let index = self.digits.iter().fold(0, |acc, &d| acc * g + d);
        let mut axis = self.lattice.n;
        loop {
            if axis == 0 {
                self.done = true;
                break;
            }
            axis -= 1;
            self.digits[axis] += 1;
            if self.digits[axis] < g {
                break;
            }
            self.digits[axis] = self.start[axis];
        }
        Some(index)
    }
}

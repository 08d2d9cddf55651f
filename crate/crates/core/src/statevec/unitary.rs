use num_complex::Complex64;

use super::TOLERANCE;
use crate::error::{Error, Result};

/// Dense square matrix checked for unitarity on construction.
///
/// Entries are row-major; `entry(row, col)` maps basis input `col` to
/// output `row`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                dim,
                targets: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotUnitary(f64::NAN));
        }
        let matrix = Self { dim, entries };
        let deviation = matrix.unitarity_deviation();
        if deviation > TOLERANCE {
            return Err(Error::NotUnitary(deviation));
        }
        Ok(matrix)
    }

    /// Builds the permutation matrix sending basis state `i` to `image[i]`.
    pub fn from_permutation(image: &[usize]) -> Result<Self> {
        let dim = image.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (input, &output) in image.iter().enumerate() {
            if output >= dim {
                return Err(Error::DimensionMismatch {
                    dim,
                    targets: output,
                });
            }
            entries[output * dim + input] = Complex64::new(1.0, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            dim: 2,
            entries: vec![h, h, h, -h],
        }
    }

    /// CNOT with the first qubit as control.
    pub fn cnot() -> Self {
        Self::from_permutation(&[0, 1, 3, 2]).expect("CNOT is a permutation")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the matrix acts on.
    pub fn arity(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Largest entry of |U†U − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// True when every row and column holds exactly one entry equal to 1
    /// and all others are exactly 0.
    pub fn is_permutation(&self) -> bool {
        let n = self.dim;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut col_hits = vec![0usize; n];
        for row in 0..n {
            let mut row_hits = 0;
            for (col, hits) in col_hits.iter_mut().enumerate() {
                let z = self.entry(row, col);
                if z == one {
                    row_hits += 1;
                    *hits += 1;
                } else if z != zero {
                    return false;
                }
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }

    /// For a permutation matrix, the image of each basis input.
    pub fn permutation_image(&self) -> Option<Vec<usize>> {
        if !self.is_permutation() {
            return None;
        }
        let n = self.dim;
        Some(
            (0..n)
                .map(|col| {
                    (0..n)
                        .find(|&row| self.entry(row, col).re == 1.0)
                        .expect("permutation column has a one")
                })
                .collect(),
        )
    }
}

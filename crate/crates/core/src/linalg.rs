//! Exact matrix rank.
//!
//! Over `Q` (and `Z`, whose rank is taken over its fraction field) rows are
//! cleared of denominators and reduced with Bareiss' fraction-free
//! elimination, so every intermediate value stays an integer. Over `Z/p` the
//! elimination is the naive one with modular inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};

/// A dense row-major matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(ring, rows.len(), cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(cols, row.len()));
            }
            for (c, x) in row.into_iter().enumerate() {
                m.set(r, c, x)?;
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) -> Result<()> {
        if x.ring() != self.ring {
            return Err(Error::MixedRings(self.ring, x.ring()));
        }
        self.entries[r * self.cols + c] = x;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            entries: self.entries.iter().map(|x| -x.clone()).collect(),
            ..self.clone()
        }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(self.ring, other.ring));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Matrix::zero(self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * other.cols + c].add_product(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        match self.ring {
            Ring::Rationals | Ring::Integers => bareiss_rank(self.integer_rows(), self.cols),
            Ring::IntegersMod(p) => {
                let rows = self
                    .entries
                    .chunks(self.cols.max(1))
                    .map(|row| row.iter().map(|x| residue(x)).collect())
                    .collect();
                modular_rank(rows, self.cols, p)
            }
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        if self.cols == 0 {
            return Vec::new();
        }
        self.entries
            .chunks(self.cols)
            .map(|row| {
                let row: Vec<_> = row.iter().map(Scalar::to_rational).collect();
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect()
    }
}

fn residue(x: &Scalar) -> u64 {
    match x {
        Scalar::Residue { value, .. } => *value,
        _ => unreachable!("matrix entries share the matrix ring"),
    }
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, below) = m.split_at_mut(rank + 1);
        let p = &top[rank];
        for row in below.iter_mut() {
            for j in col + 1..cols {
                let v = &p[col] * &row[j] - &row[col] * &p[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division is exact");
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = top[rank][col].clone();
        rank += 1;
    }
    rank
}

fn modular_rank(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inverse = |a: u64| {
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (a, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inverse(m[rank][col]);
        let (top, below) = m.split_at_mut(rank + 1);
        let p_row = &top[rank];
        for row in below.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let factor = mul(row[col], inv);
            for j in col..cols {
                row[j] = (row[j] + p - mul(factor, p_row[j])) % p;
            }
        }
        rank += 1;
    }
    rank
}

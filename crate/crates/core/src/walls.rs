//! Lattice combinatorics of walls and chambers.
//!
//! A class `xi` in an integral lattice defines a wall of type `(c1, c2)`
//! when `xi + c1` is divisible by two and `c1^2 - 4 c2 <= xi^2 < 0`; a wall
//! separates two polarizations when their pairings with `xi` have opposite
//! signs. Enumeration is over a caller-supplied coordinate box: no attempt
//! is made at provably complete enumeration in indefinite lattices (the
//! geometrically relevant region is an ample cone the lattice alone does
//! not know).

use num_bigint::BigInt;
use serde::Deserialize;

use crate::linalg;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallError {
    #[error("vector has {got} coordinates, lattice rank is {rank}")]
    DimensionMismatch { rank: usize, got: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is degenerate")]
    Degenerate,
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("empty enumeration box")]
    EmptyBox,
}

/// Integral lattice: rank and symmetric nondegenerate Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, WallError> {
        let rank = gram.len();
        if gram.iter().any(|row| row.len() != rank) {
            return Err(WallError::NotSquare);
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(WallError::NotSymmetric);
                }
            }
        }
        let mat: linalg::Mat = gram
            .iter()
            .map(|row| row.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        if rank > 0 && linalg::determinant(&mat).is_zero() {
            return Err(WallError::Degenerate);
        }
        Ok(Lattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    fn check_dim(&self, v: &[i64]) -> Result<(), WallError> {
        if v.len() != self.rank() {
            Err(WallError::DimensionMismatch { rank: self.rank(), got: v.len() })
        } else {
            Ok(())
        }
    }

    /// Inner product under the Gram form, exact.
    pub fn dot(&self, a: &[i64], b: &[i64]) -> Result<BigInt, WallError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut acc = BigInt::from(0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                acc += BigInt::from(ai) * BigInt::from(self.gram[i][j]) * BigInt::from(bj);
            }
        }
        Ok(acc)
    }

    pub fn norm(&self, v: &[i64]) -> Result<BigInt, WallError> {
        self.dot(v, v)
    }
}

/// Wall condition of type `(c1, c2)`: `xi + c1` even coordinatewise and
/// `c1^2 - 4 c2 <= xi^2 < 0`, both evaluated exactly.
pub fn is_wall_class(
    lattice: &Lattice,
    xi: &[i64],
    c1: &[i64],
    c2: i64,
) -> Result<bool, WallError> {
    lattice.check_dim(xi)?;
    lattice.check_dim(c1)?;
    let parity_ok = xi.iter().zip(c1).all(|(&a, &b)| (a + b) % 2 == 0);
    if !parity_ok {
        return Ok(false);
    }
    let xi2 = lattice.norm(xi)?;
    if xi2 >= BigInt::from(0) {
        return Ok(false);
    }
    let disc = lattice.norm(c1)? - BigInt::from(4) * BigInt::from(c2);
    Ok(disc <= xi2)
}

/// Sign test `H.xi < 0 < L.xi`: the wall separates the two polarizations.
pub fn separates(lattice: &Lattice, xi: &[i64], h: &[i64], l: &[i64]) -> Result<bool, WallError> {
    let zero = BigInt::from(0);
    Ok(lattice.dot(h, xi)? < zero && zero < lattice.dot(l, xi)?)
}

/// All wall classes of type `(c1, c2)` inside the coordinate box
/// `[lo, hi]^rank`, in lexicographic order. Completeness holds only within
/// the box.
pub fn enumerate_wall_classes(
    lattice: &Lattice,
    c1: &[i64],
    c2: i64,
    lo: i64,
    hi: i64,
) -> Result<Vec<Vec<i64>>, WallError> {
    if lo > hi {
        return Err(WallError::EmptyBox);
    }
    lattice.check_dim(c1)?;
    let rank = lattice.rank();
    let mut out = Vec::new();
    let mut current = vec![lo; rank];
    loop {
        if is_wall_class(lattice, &current, c1, c2)? {
            out.push(current.clone());
        }
        // Lexicographic increment.
        let mut idx = rank;
        loop {
            if idx == 0 {
                return Ok(out);
            }
            idx -= 1;
            if current[idx] < hi {
                current[idx] += 1;
                for c in current.iter_mut().skip(idx + 1) {
                    *c = lo;
                }
                break;
            }
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct WallsInput {
    pub gram: Vec<Vec<i64>>,
    pub c1: Vec<i64>,
    pub c2: i64,
    #[serde(default)]
    pub xi: Option<Vec<i64>>,
    #[serde(default, rename = "H")]
    pub h: Option<Vec<i64>>,
    #[serde(default, rename = "L")]
    pub l: Option<Vec<i64>>,
}

//! Square matrices over `F_p`, used as the coordinate view of additive maps.

use std::fmt;

/// Row-major `dim × dim` matrix with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    dim: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p = {}, dim = {})", self.p, self.dim)?;
        for r in 0..self.dim {
            writeln!(f, "  {:?}", &self.data[r * self.dim..(r + 1) * self.dim])?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zero(p: u32, dim: usize) -> Self {
        FpMatrix {
            p,
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(p: u32, dim: usize) -> Self {
        let mut m = Self::zero(p, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    /// Builds a matrix whose column `j` is `columns[j]`.
    pub fn from_columns(p: u32, columns: &[Vec<u32>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zero(p, dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * dim + j] = v % p;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<u32> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.p, other.p);
        let n = self.dim;
        let p = self.p as u64;
        let mut out = Self::zero(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.data[k * n + j] as u64) % p) as u32;
                }
            }
        }
        out
    }

    fn inv_mod(&self, a: u32) -> u32 {
        crate::arith::pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32
    }

    /// Row-reduces a copy; returns (rank, determinant).
    fn eliminate(&self) -> (usize, u32) {
        let n = self.dim;
        let p = self.p as u64;
        let mut a = self.data.clone();
        let mut rank = 0;
        let mut det = 1u64;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                det = 0;
                continue;
            };
            if pivot != rank {
                for c in 0..n {
                    a.swap(pivot * n + c, rank * n + c);
                }
                det = (p - det) % p;
            }
            let pv = a[rank * n + col];
            det = det * pv as u64 % p;
            let pinv = self.inv_mod(pv) as u64;
            for r in rank + 1..n {
                let f = a[r * n + col] as u64 * pinv % p;
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = f * a[rank * n + c] as u64 % p;
                    a[r * n + c] = ((a[r * n + c] as u64 + p - sub) % p) as u32;
                }
            }
            rank += 1;
        }
        if rank < n {
            det = 0;
        }
        (rank, det as u32)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> u32 {
        self.eliminate().1
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        let n = self.dim;
        let p = self.p as u64;
        let mut a = self.data.clone();
        let mut inv = Self::identity(self.p, n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                    inv.swap(pivot * n + c, col * n + c);
                }
            }
            let pinv = self.inv_mod(a[col * n + col]) as u64;
            for c in 0..n {
                a[col * n + c] = (a[col * n + c] as u64 * pinv % p) as u32;
                inv[col * n + c] = (inv[col * n + c] as u64 * pinv % p) as u32;
            }
            for r in 0..n {
                let f = a[r * n + col] as u64;
                if r == col || f == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = ((a[r * n + c] as u64 + p - f * a[col * n + c] as u64 % p) % p) as u32;
                    inv[r * n + c] = ((inv[r * n + c] as u64 + p - f * inv[col * n + c] as u64 % p) % p) as u32;
                }
            }
        }
        Some(FpMatrix {
            p: self.p,
            dim: n,
            data: inv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(p: u32, dim: usize) -> impl Strategy<Value = FpMatrix> {
        proptest::collection::vec(0..p, dim * dim).prop_map(move |data| FpMatrix { p, dim, data })
    }

    proptest! {
        #[test]
        fn inverse_iff_nonzero_det(m in arb_matrix(3, 4)) {
            let det = m.det();
            match m.inverse() {
                Some(inv) => {
                    prop_assert_ne!(det, 0);
                    prop_assert_eq!(m.mul(&inv), FpMatrix::identity(3, 4));
                    prop_assert_eq!(inv.mul(&m), FpMatrix::identity(3, 4));
                }
                None => {
                    prop_assert_eq!(det, 0);
                    prop_assert!(m.rank() < 4);
                }
            }
        }

        #[test]
        fn det_is_multiplicative(a in arb_matrix(5, 3), b in arb_matrix(5, 3)) {
            prop_assert_eq!(a.mul(&b).det(), a.det() * b.det() % 5);
        }
    }

    #[test]
    fn zero_has_rank_zero() {
        assert_eq!(FpMatrix::zero(3, 6).rank(), 0);
        assert_eq!(FpMatrix::identity(3, 6).rank(), 6);
        assert_eq!(FpMatrix::identity(3, 6).det(), 1);
    }
}

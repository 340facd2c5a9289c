//! Exact dense linear solving over ℚ(i).

use super::GaussianRational;

/// Outcome of [`solve_linear_system`].
#[derive(Clone, Debug, PartialEq)]
pub enum LinearVerdict {
    Unique(Vec<GaussianRational>),
    /// A particular solution plus a basis of the kernel of `A`.
    Underdetermined {
        particular: Vec<GaussianRational>,
        kernel: Vec<Vec<GaussianRational>>,
    },
    Inconsistent,
}

impl LinearVerdict {
    pub fn solution(&self) -> Option<&[GaussianRational]> {
        match self {
            LinearVerdict::Unique(x) => Some(x),
            LinearVerdict::Underdetermined { particular, .. } => Some(particular),
            LinearVerdict::Inconsistent => None,
        }
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[GaussianRational]) -> Vec<GaussianRational> {
        (0..self.rows)
            .map(|r| {
                let mut acc = GaussianRational::zero();
                for (c, xc) in x.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !xc.is_zero() {
                        acc += &(a * xc);
                    }
                }
                acc
            })
            .collect()
    }
}

fn height(x: &GaussianRational) -> u64 {
    x.re().numer().bits() + x.re().denom().bits() + x.im().numer().bits() + x.im().denom().bits()
}

/// Gauss–Jordan elimination on `[A | b]`. Pivots are chosen per column as the
/// nonzero entry of smallest bit height, which keeps intermediate growth down.
pub fn solve_linear_system(a: &Matrix, b: &[GaussianRational]) -> LinearVerdict {
    assert_eq!(a.rows, b.len(), "dimension mismatch");
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<GaussianRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<GaussianRational> = a.data[r * cols..(r + 1) * cols].to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let Some(best) = (prow..rows).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| height(&m[r][col])) else {
            continue;
        };
        m.swap(prow, best);
        let inv = m[prow][col].inv().unwrap();
        if !inv.is_one() {
            for v in m[prow][col..].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let pivot_row = m[prow].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == prow || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row[col..].iter_mut().zip(pivot_row[col..].iter()) {
                if !pv.is_zero() {
                    *v -= &(&f * pv);
                }
            }
        }
        pivot_cols.push(col);
        prow += 1;
    }
    if m[prow..].iter().any(|row| !row[cols].is_zero()) {
        return LinearVerdict::Inconsistent;
    }
    let mut particular = vec![GaussianRational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        particular[c] = m[r][cols].clone();
    }
    if pivot_cols.len() == cols {
        return LinearVerdict::Unique(particular);
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); cols];
            v[f] = GaussianRational::one();
            for (r, &c) in pivot_cols.iter().enumerate() {
                v[c] = -&m[r][f];
            }
            v
        })
        .collect();
    LinearVerdict::Underdetermined { particular, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn identity_returns_rhs() {
        let b = vec![g(3), g(-1), GaussianRational::i()];
        assert_eq!(solve_linear_system(&Matrix::identity(3), &b), LinearVerdict::Unique(b.clone()));
    }

    #[test]
    fn rank_deficient_cases() {
        let a = Matrix::from_rows(vec![vec![g(1), g(1)], vec![g(2), g(2)]]);
        match solve_linear_system(&a, &[g(1), g(2)]) {
            LinearVerdict::Underdetermined { particular, kernel } => {
                assert_eq!(kernel.len(), 1);
                assert_eq!(a.mul_vec(&particular), vec![g(1), g(2)]);
                assert!(a.mul_vec(&kernel[0]).iter().all(|x| x.is_zero()));
            }
            v => panic!("unexpected {v:?}"),
        }
        assert_eq!(solve_linear_system(&a, &[g(1), g(3)]), LinearVerdict::Inconsistent);
    }

    proptest! {
        #[test]
        fn solution_satisfies_system(
            entries in proptest::collection::vec((-4i64..4, -2i64..2), 12),
            rhs in proptest::collection::vec(-5i64..5, 3),
        ) {
            let rows: Vec<Vec<GaussianRational>> = entries
                .chunks(4)
                .map(|ch| ch.iter().map(|&(a, b)| &g(a) + &(&g(b) * &GaussianRational::i())).collect())
                .collect();
            let a = Matrix::from_rows(rows);
            let b: Vec<GaussianRational> = rhs.into_iter().map(g).collect();
            let v = solve_linear_system(&a, &b);
            if let Some(x) = v.solution() {
                prop_assert_eq!(a.mul_vec(x), b.clone());
            }
            if let LinearVerdict::Underdetermined { kernel, .. } = &v {
                for k in kernel {
                    prop_assert!(a.mul_vec(k).iter().all(|x| x.is_zero()));
                }
            }
        }
    }
}

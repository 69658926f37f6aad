use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Field, Rational};
use super::gcd::{exact_div, lcm};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::var::Var;
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Field> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<C>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<D: Field>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (a, b)| acc.fadd(&a.fmul(b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Reduced row echelon form and pivot columns. Pivots are taken in the
    /// leftmost available column, from the lowest-index remaining row.
    pub fn rref(&self) -> (Matrix<C>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, col).finv();
            for j in col..m.cols {
                let v = m.get(r, j).fmul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(i, j).fsub(&f.fmul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Entries of an RREF that are neither pivot ones nor structural zeros:
    /// the nonzero entries of nonpivot columns in the pivot rows.
    pub fn nonleading_entries(rref: &Matrix<C>, pivots: &[usize]) -> Vec<C> {
        let mut out = Vec::new();
        for (i, _) in pivots.iter().enumerate() {
            for j in 0..rref.cols {
                if pivots.contains(&j) {
                    continue;
                }
                let e = rref.get(i, j);
                if !e.is_zero() {
                    out.push(e.clone());
                }
            }
        }
        out
    }
}

impl<C: Field> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<C: Field> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact rank by fraction-free (Bareiss) elimination on denominator-cleared rows.
pub fn rank_symbolic(m: &Matrix<RatFunc>) -> usize {
    let mut rows: Vec<Vec<Poly>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let d = row
                .iter()
                .fold(Poly::one(), |acc, e| lcm(&acc, e.den()));
            row.iter()
                .map(|e| &e.num().clone() * &exact_div(&d, e.den()).expect("lcm"))
                .collect()
        })
        .collect();
    let (nr, nc) = (m.rows(), m.cols());
    let mut prev = Poly::one();
    let mut rank = 0;
    for col in 0..nc {
        if rank == nr {
            break;
        }
        let Some(p) = (rank..nr).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        let (top, below) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in below {
            let f = row[col].clone();
            for j in col..nc {
                let v = &(&piv * &row[j]) - &(&f * &prow[j]);
                row[j] = exact_div(&v, &prev).expect("Bareiss division is exact");
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix.
pub fn rank_rational(m: &Matrix<Rational>) -> usize {
    m.rank()
}

const MAX_RESAMPLES: usize = 32;

/// Maximum rank over `trials` evaluations at seeded random integer points in
/// `[-2^31, 2^31]`. Points where a denominator vanishes are resampled.
pub fn rank_probabilistic(m: &Matrix<RatFunc>, seed: u64, trials: usize) -> Result<usize> {
    assert!(trials >= 1, "at least one trial");
    let vars: BTreeSet<Var> = (0..m.rows())
        .flat_map(|i| m.row(i).iter().flat_map(|e| e.vars()).collect::<Vec<_>>())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound: i64 = 1 << 31;
    let mut best = 0;
    for _ in 0..trials {
        let mut done = false;
        for _ in 0..MAX_RESAMPLES {
            let point: BTreeMap<Var, Rational> = vars
                .iter()
                .map(|v| {
                    let x: i64 = rng.gen_range(-bound..=bound);
                    (v.clone(), Rational::from_integer(BigInt::from(x)))
                })
                .collect();
            let look = |v: &Var| point.get(v).cloned();
            let vals: Option<Vec<Rational>> = (0..m.rows() * m.cols())
                .map(|k| m.data[k].eval(&look))
                .collect();
            if let Some(vals) = vals {
                let mq = Matrix {
                    rows: m.rows(),
                    cols: m.cols(),
                    data: vals,
                };
                best = best.max(mq.rank());
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Invalid(
                "rank evaluation kept hitting denominator zeros".into(),
            ));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;

    #[test]
    fn identity_is_its_own_rref() {
        let m = Matrix::<Rational>::identity(3);
        let (r, p) = m.rref();
        assert_eq!(r, m);
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn zero_matrix_rank() {
        let m = Matrix::<RatFunc>::zeros(2, 3);
        assert_eq!(rank_symbolic(&m), 0);
        assert_eq!(rank_probabilistic(&Matrix::<RatFunc>::zeros(1, 1), 0, 3).unwrap(), 0);
    }

    #[test]
    fn symbolic_rank_of_dependent_rows() {
        let x = RatFunc::var(Var::new("x"));
        let y = RatFunc::var(Var::new("y"));
        let one = RatFunc::one();
        let m = Matrix::from_rows(vec![
            vec![x.clone(), y.clone(), one.clone()],
            vec![x.fmul(&x), x.fmul(&y), x.clone()],
            vec![one.clone(), y.fdiv(&x), one.fdiv(&x)],
        ]);
        assert_eq!(rank_symbolic(&m), 1);
        assert_eq!(rank_probabilistic(&m, 7, 3).unwrap(), 1);
        let q = Matrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]);
        assert_eq!(q.rank(), 1);
    }
}

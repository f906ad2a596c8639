//! Dense tableau simplex with Bland's rule, generic over the scalar type so
//! the same code runs in `f64` and in exact rationals.
//!
//! Solves `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the slack basis
//! is an initial feasible point and no phase one is needed.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Strictly positive beyond numerical noise.
    fn is_pos(&self) -> bool;
    /// Strictly negative beyond numerical noise.
    fn is_neg(&self) -> bool;
}

const F64_EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
}

impl Scalar for BigRational {
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

pub fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpError {
    NegativeRhs(usize),
    Unbounded,
    Shape(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
    /// Optimal dual prices, one per constraint row.
    pub duals: Vec<T>,
}

pub fn maximize<T: Scalar>(c: &[T], a: &[Vec<T>], b: &[T]) -> Result<LpSolution<T>, LpError> {
    let m = b.len();
    let n = c.len();
    if a.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(LpError::Shape(format!("expected {m} rows of {n} coefficients")));
    }
    if let Some(i) = b.iter().position(|v| v.is_neg()) {
        return Err(LpError::NegativeRhs(i));
    }
    let cols = n + m;
    // Rows 0..m: constraints [A | I | b]; row m: objective [-c | 0 | 0].
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = a[i].clone();
        row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        row.push(b[i].clone());
        t.push(row);
    }
    let mut obj: Vec<T> = c.iter().map(|v| -v.clone()).collect();
    obj.extend((0..=m).map(|_| T::zero()));
    t.push(obj);
    let mut basis: Vec<usize> = (n..cols).collect();

    // Bland: lowest-index improving column.
    while let Some(enter) = (0..cols).find(|&j| t[m][j].is_neg()) {
        // Ratio test; ties go to the lowest basic variable index.
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_pos() {
                continue;
            }
            let ratio = t[i][cols].clone() / t[i][enter].clone();
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = t[l][cols].clone() / t[l][enter].clone();
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(r) = leave else {
            return Err(LpError::Unbounded);
        };
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }

    let mut x = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][cols].clone();
        }
    }
    let duals = (0..m).map(|i| t[m][n + i].clone()).collect();
    Ok(LpSolution {
        x,
        objective: t[m][cols].clone(),
        duals,
    })
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], r: usize, col: usize) {
    let p = t[r][col].clone();
    for v in t[r].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[col].clone();
        if f.is_zero() {
            continue;
        }
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    }
}

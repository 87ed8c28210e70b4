//! Dense integer matrices over BigInt and Smith normal form with full
//! transform tracking.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix. Small sizes only; everything is BigInt so no
/// intermediate overflow is possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        for row in rows {
            if row.len() != c {
                return Err(Error::Parse("ragged matrix rows".into()));
            }
        }
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        Ok(m)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, v.clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, c).clone();
            self.set(i, c, v);
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(i, c) + q * self.get(j, c);
            self.set(i, c, v);
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, i) + q * self.get(r, j);
            self.set(r, i, v);
        }
    }
}

/// Quotient minimizing the remainder magnitude.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = num_integer::Integer::div_rem(a, b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Smith normal form D = U A V with unimodular U, V and their inverses.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// positive diagonal entries, each dividing the next
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Elementary operations are mirrored onto the transforms so that
    // D = U A V holds at every step; the inverses absorb the inverse op
    // on the opposite side.
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            d.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            d.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! row_add {
        ($i:expr, $j:expr, $q:expr) => {{
            let q = $q;
            d.add_row($i, $j, &q);
            u.add_row($i, $j, &q);
            u_inv.add_col($j, $i, &(-q));
        }};
    }
    macro_rules! col_add {
        ($i:expr, $j:expr, $q:expr) => {{
            let q = $q;
            d.add_col($i, $j, &q);
            v.add_col($i, $j, &q);
            v_inv.add_row($j, $i, &(-q));
        }};
    }

    let t_max = m.min(n);
    for t in 0..t_max {
        'pivot: loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d.get(i, j).is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => d.get(i, j).abs() < d.get(bi, bj).abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let (pi, pj) = match best {
                None => break 'pivot,
                Some(x) => x,
            };
            row_swap!(t, pi);
            col_swap!(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = nearest_quotient(d.get(i, t), d.get(t, t));
                    row_add!(i, t, -q);
                    if !d.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = nearest_quotient(d.get(t, j), d.get(t, t));
                    col_add!(j, t, -q);
                    if !d.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // pivot must divide everything that remains
            for i in t + 1..m {
                for j in t + 1..n {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        row_add!(t, i, BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }

    let mut divisors = Vec::new();
    for t in 0..t_max {
        if !d.get(t, t).is_zero() {
            divisors.push(d.get(t, t).clone());
        }
    }
    let rank = divisors.len();
    Smith { d, u, v, u_inv, v_inv, divisors, rank }
}

/// Fraction-free Gaussian elimination determinant, kept separate from the
/// Smith machinery so the two can cross-check each other.
pub fn bareiss_det(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let swap = (k + 1..n).find(|&r| !m.get(r, k).is_zero());
            match swap {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                m.set(i, j, &t / &prev);
            }
        }
        prev = m.get(k, k).clone();
    }
    sign * m.get(n - 1, n - 1).clone()
}

/// Basis of the integer kernel lattice of A, as columns.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    (s.rank..a.cols).map(|j| s.v.column(j)).collect()
}

/// One integer solution x of A x = b, if any.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows);
    let s = smith_normal_form(a);
    let mut ub = vec![BigInt::zero(); a.rows];
    for i in 0..a.rows {
        let mut acc = BigInt::zero();
        for j in 0..a.rows {
            acc += s.u.get(i, j) * &b[j];
        }
        ub[i] = acc;
    }
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        let d = if i < a.cols.min(a.rows) { s.d.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = num_integer::Integer::div_rem(&ub[i], &d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let mut x = vec![BigInt::zero(); a.cols];
    for i in 0..a.cols {
        let mut acc = BigInt::zero();
        for j in 0..a.cols {
            acc += s.v.get(i, j) * &y[j];
        }
        x[i] = acc;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn smith_of_known_matrix() {
        // gcd of entries 2, gcd of 2x2 minors 4, det 624: chain 2, 2, 156
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = smith_normal_form(&a);
        let ds: Vec<i64> = s.divisors.iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(ds, vec![2, 2, 156]);
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(3));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
        assert_eq!(bareiss_det(&s.u).abs(), BigInt::one());
        assert_eq!(bareiss_det(&s.v).abs(), BigInt::one());
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let s: BigInt = k[0].clone() + 2 * k[1].clone() + 3 * k[2].clone();
            assert!(s.is_zero());
        }
        let sol = solve(&a, &[BigInt::from(6), BigInt::from(12)]).unwrap();
        let got = &sol[0] + 2 * &sol[1] + 3 * &sol[2];
        assert_eq!(got, BigInt::from(6));
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[vec![3, 1, -2], vec![0, 4, 1], vec![2, -1, 5]]);
        // 3*(20+1) - 1*(0-2) + (-2)*(0-8) = 63 + 2 + 16 = 81
        assert_eq!(bareiss_det(&a), BigInt::from(81));
    }
}

//! Sparse exterior algebra over R^n, 3 <= n <= 8.
//!
//! Basis k-vectors are indexed by strictly increasing tuples of 1-based
//! axis labels, so `e135` is the tuple [1,3,5]. Coefficients are f64.

use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse element of Lambda^k(R^n) in the orthonormal coordinate basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVector {
    dim: u8,
    degree: u8,
    terms: BTreeMap<Vec<u8>, f64>,
}

fn check_index(dim: u8, degree: u8, idx: &[u8]) -> Result<()> {
    if idx.len() != degree as usize {
        return Err(Error::Parse(format!(
            "index {:?} has length {}, expected degree {}",
            idx,
            idx.len(),
            degree
        )));
    }
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Parse(format!("index {:?} not strictly increasing", idx)));
        }
    }
    if let (Some(&lo), Some(&hi)) = (idx.first(), idx.last()) {
        if lo < 1 || hi > dim {
            return Err(Error::Parse(format!("index {:?} out of range 1..={}", idx, dim)));
        }
    }
    Ok(())
}

impl MultiVector {
    pub fn zero(dim: u8, degree: u8) -> Self {
        assert!((2..=8).contains(&dim), "ambient dimension must be in 2..=8");
        assert!(degree <= dim);
        MultiVector { dim, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(dim: u8, degree: u8, terms: &[(&[u8], f64)]) -> Result<Self> {
        let mut mv = MultiVector::zero(dim, degree);
        for (idx, c) in terms {
            check_index(dim, degree, idx)?;
            if *c != 0.0 {
                *mv.terms.entry(idx.to_vec()).or_insert(0.0) += c;
            }
        }
        mv.prune();
        Ok(mv)
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn coeff(&self, idx: &[u8]) -> f64 {
        self.terms.get(idx).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, idx: &[u8], c: f64) -> Result<()> {
        check_index(self.dim, self.degree, idx)?;
        if c == 0.0 {
            self.terms.remove(idx);
        } else {
            self.terms.insert(idx.to_vec(), c);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &f64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::Usage("add: mismatched dimension or degree".into()));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            *out.terms.entry(idx.clone()).or_insert(0.0) += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Euclidean inner product in the orthonormal multi-index basis.
    pub fn inner(&self, other: &Self) -> f64 {
        if self.dim != other.dim || self.degree != other.degree {
            return 0.0;
        }
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        small
            .iter()
            .filter_map(|(idx, c)| big.get(idx).map(|d| c * d))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Wedge product. The sign of each merged term counts the inversions
    /// needed to interleave the two increasing index tuples.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Usage("wedge: mismatched ambient dimension".into()));
        }
        let deg = self.degree + other.degree;
        if deg > self.dim {
            return Ok(MultiVector::zero(self.dim, self.dim.min(deg)));
        }
        let mut out = MultiVector::zero(self.dim, deg);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((merged, sign)) = merge_disjoint(ia, ib) {
                    *out.terms.entry(merged).or_insert(0.0) += sign * ca * cb;
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Hodge star in the standard orientation e_1 ^ ... ^ e_n.
    pub fn hodge_star(&self) -> Self {
        let n = self.dim;
        let mut out = MultiVector::zero(n, n - self.degree);
        for (idx, c) in &self.terms {
            let comp: Vec<u8> = (1..=n).filter(|a| !idx.contains(a)).collect();
            let sign = interleave_sign(idx, &comp);
            out.terms.insert(comp, sign * c);
        }
        out.prune();
        out
    }
}

/// Merge two strictly increasing tuples; None when they share an axis.
/// The sign is (-1)^inv where inv counts pairs (a, b), a in left, b in
/// right, with a > b.
fn merge_disjoint(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, f64)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut inv = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            merged.push(b[j]);
            j += 1;
            inv += a.len() - i;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    Some((merged, if inv % 2 == 0 { 1.0 } else { -1.0 }))
}

/// Sign of the permutation sorting the concatenation (a, b), i.e. the sign
/// with which e_a ^ e_b equals e_{sorted union}. Counts pairs x in a, y in b
/// with x > y.
fn interleave_sign(a: &[u8], b: &[u8]) -> f64 {
    let inv: usize = a.iter().map(|&x| b.iter().filter(|&&y| x > y).count()).sum();
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            let sign = if *c >= 0.0 { "+" } else { "-" };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}{:.6} e", sign, c.abs())?;
            for a in idx {
                write!(f, "{}", a)?;
            }
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Named calibration forms.

/// Re(e^{-i theta} dz_1 ^ ... ^ dz_n) on R^{2n}, z_j = x_{2j-1} + i x_{2j}.
/// Supported for n = 2, 3, 4.
pub fn sl_form(n: usize, theta: f64) -> MultiVector {
    assert!((2..=4).contains(&n), "sl_form supports n = 2, 3, 4");
    let dim = (2 * n) as u8;
    let mut mv = MultiVector::zero(dim, n as u8);
    for mask in 0u32..(1 << n) {
        let m = mask.count_ones();
        // the j-th factor contributes axis 2j-1 (real) or 2j (imaginary)
        let idx: Vec<u8> = (0..n)
            .map(|j| (2 * j + 1 + ((mask >> j) & 1) as usize) as u8)
            .collect();
        // Re(e^{-i theta} i^m) = cos(m pi/2 - theta), with the quarter
        // turns applied exactly so plain phases stay sparse
        let c = match m % 4 {
            0 => theta.cos(),
            1 => theta.sin(),
            2 => -theta.cos(),
            _ => -theta.sin(),
        };
        if c != 0.0 {
            mv.terms.insert(idx, c);
        }
    }
    mv.prune();
    mv
}

/// Im(e^{-i theta} dz_1 ^ ... ^ dz_n) = Re at phase theta + pi/2.
pub fn im_sl_form(n: usize, theta: f64) -> MultiVector {
    sl_form(n, theta + std::f64::consts::FRAC_PI_2)
}

/// Kaehler 2-form on R^{2n}: sum of e_{2j-1, 2j}.
pub fn kaehler_form(n: usize) -> MultiVector {
    assert!((2..=4).contains(&n));
    let dim = (2 * n) as u8;
    let mut mv = MultiVector::zero(dim, 2);
    for j in 0..n {
        mv.terms.insert(vec![(2 * j + 1) as u8, (2 * j + 2) as u8], 1.0);
    }
    mv
}

/// Normalized Kaehler power omega^p / p! on R^{2n}.
pub fn kaehler_power(n: usize, p: usize) -> MultiVector {
    assert!(p >= 1 && p <= n);
    let omega = kaehler_form(n);
    let mut acc = omega.clone();
    for _ in 1..p {
        acc = acc.wedge(&omega).unwrap();
    }
    let fact: f64 = (1..=p).map(|i| i as f64).product();
    acc.scale(1.0 / fact)
}

/// Associative 3-form on R^7.
pub fn associative_form() -> MultiVector {
    MultiVector::from_terms(
        7,
        3,
        &[
            (&[1, 2, 3], 1.0),
            (&[1, 4, 5], 1.0),
            (&[1, 6, 7], -1.0),
            (&[2, 4, 6], 1.0),
            (&[2, 5, 7], 1.0),
            (&[3, 4, 7], 1.0),
            (&[3, 5, 6], -1.0),
        ],
    )
    .unwrap()
}

/// Coassociative 4-form on R^7, the Hodge dual of the associative form.
pub fn coassociative_form() -> MultiVector {
    associative_form().hodge_star()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: u8, idx: &[u8]) -> MultiVector {
        MultiVector::from_terms(dim, idx.len() as u8, &[(idx, 1.0)]).unwrap()
    }

    #[test]
    fn wedge_basic_signs() {
        let a = e(6, &[1]);
        let b = e(6, &[2]);
        assert_eq!(a.wedge(&b).unwrap().coeff(&[1, 2]), 1.0);
        assert_eq!(b.wedge(&a).unwrap().coeff(&[1, 2]), -1.0);
        // e24 ^ e13 = -e12 ^ e34 ... count: merging [2,4] with [1,3]
        let c = e(6, &[2, 4]).wedge(&e(6, &[1, 3])).unwrap();
        assert_eq!(c.coeff(&[1, 2, 3, 4]), -1.0);
        // shared axis kills the term
        assert_eq!(e(6, &[1, 2]).wedge(&e(6, &[2, 3])).unwrap().num_terms(), 0);
    }

    #[test]
    fn hodge_star_r6() {
        let s = e(6, &[1, 2, 3]).hodge_star();
        assert_eq!(s.coeff(&[4, 5, 6]), 1.0);
        // *(e146): complement {2,3,5}, sign of (1,4,6,2,3,5)
        let s2 = e(6, &[1, 4, 6]).hodge_star();
        assert_eq!(s2.coeff(&[2, 3, 5]), -1.0);
        // double star on 3-vectors in R^6 is multiplication by (-1)^{3*3}
        let a = sl_form(3, 0.4);
        let aa = a.hodge_star().hodge_star();
        assert!(aa.sub(&a.scale(-1.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn star_pairs_with_volume() {
        // a ^ *a = |a|^2 vol
        let a = MultiVector::from_terms(6, 3, &[(&[1, 2, 3], 2.0), (&[1, 4, 5], -1.5), (&[2, 4, 6], 0.25)])
            .unwrap();
        let top = a.wedge(&a.hodge_star()).unwrap();
        let vol = top.coeff(&[1, 2, 3, 4, 5, 6]);
        assert!((vol - a.inner(&a)).abs() < 1e-12);
    }

    #[test]
    fn special_lagrangian_coefficients() {
        let sl3 = sl_form(3, 0.0);
        assert_eq!(sl3.coeff(&[1, 3, 5]), 1.0);
        assert_eq!(sl3.coeff(&[1, 4, 6]), -1.0);
        assert_eq!(sl3.coeff(&[2, 3, 6]), -1.0);
        assert_eq!(sl3.coeff(&[2, 4, 5]), -1.0);
        assert_eq!(sl3.num_terms(), 4);

        let sl2 = sl_form(2, 0.0);
        assert_eq!(sl2.coeff(&[1, 3]), 1.0);
        assert_eq!(sl2.coeff(&[2, 4]), -1.0);
        assert_eq!(sl2.num_terms(), 2);

        let im2 = im_sl_form(2, 0.0);
        assert_eq!(im2.coeff(&[1, 4]), 1.0);
        assert_eq!(im2.coeff(&[2, 3]), 1.0);
    }

    #[test]
    fn sl_norm_is_theta_independent() {
        for n in 2..=4usize {
            let expect = (2.0f64).powi(n as i32 - 1).sqrt();
            for t in [0.0, 0.3, 1.1, 2.9] {
                assert!((sl_form(n, t).norm() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kaehler_powers() {
        let w = kaehler_form(2);
        assert_eq!(w.coeff(&[1, 2]), 1.0);
        assert_eq!(w.coeff(&[3, 4]), 1.0);
        // omega^2/2 on R^4 is the volume form
        let v = kaehler_power(2, 2);
        assert_eq!(v.coeff(&[1, 2, 3, 4]), 1.0);
        assert_eq!(v.num_terms(), 1);
        // omega^3/3! on R^6 is the volume form
        let v3 = kaehler_power(3, 3);
        assert_eq!(v3.coeff(&[1, 2, 3, 4, 5, 6]), 1.0);
        assert_eq!(v3.num_terms(), 1);
    }

    #[test]
    fn associative_has_seven_unit_terms() {
        let phi = associative_form();
        assert_eq!(phi.num_terms(), 7);
        assert!((phi.norm() - (7.0f64).sqrt()).abs() < 1e-14);
        let psi = coassociative_form();
        assert_eq!(psi.degree(), 4);
        assert_eq!(psi.num_terms(), 7);
    }

    #[test]
    fn wedge_anticommutes_by_degree() {
        let a = sl_form(3, 0.7); // degree 3
        let w = kaehler_form(3); // degree 2
        let ab = a.wedge(&w).unwrap();
        let ba = w.wedge(&a).unwrap();
        // (-1)^{3*2} = +1
        assert!(ab.sub(&ba).unwrap().norm() < 1e-14);
    }
}

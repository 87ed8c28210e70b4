//! Integral chain complexes, homology, universal coefficients in both
//! directions, and the classical sanity checks built on them.

use super::group::FgAbGroup;
use super::matrix::{smith_normal_form, IntMatrix};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use serde::Deserialize;

/// A bounded chain complex of free abelian groups.
///
/// `dims[i]` is the rank of C_i and `boundaries[i-1]` is the matrix of
/// the boundary map C_i -> C_{i-1}, with `dims[i-1]` rows and `dims[i]`
/// columns.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
}

#[derive(Deserialize)]
struct ComplexSpec {
    boundaries: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    dims: Option<Vec<usize>>,
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let c = ChainComplex { dims, boundaries };
        c.validate()?;
        Ok(c)
    }

    /// Parse from JSON: `{"boundaries": [[[...]]], "dims": [..]?}`.
    ///
    /// Matrices are lists of rows. The optional `dims` field settles the
    /// shapes of empty matrices, which JSON cannot express unambiguously;
    /// without it the dimensions are inferred from the row data.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ComplexSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("chain complex: {e}")))?;
        let n = spec.boundaries.len();
        let dims: Vec<usize> = match spec.dims {
            Some(d) => {
                if d.len() != n + 1 {
                    return Err(Error::Parse(format!(
                        "dims has length {}, expected {} for {} boundary maps",
                        d.len(),
                        n + 1,
                        n
                    )));
                }
                d
            }
            None => {
                let mut d = Vec::with_capacity(n + 1);
                if n == 0 {
                    return Err(Error::Parse(
                        "complex without boundary maps needs an explicit dims field".into(),
                    ));
                }
                d.push(spec.boundaries[0].len());
                for b in &spec.boundaries {
                    let cols = b.first().map_or(0, |r| r.len());
                    d.push(cols);
                }
                d
            }
        };
        let mut boundaries = Vec::with_capacity(n);
        for (i, rows) in spec.boundaries.iter().enumerate() {
            let (r, c) = (dims[i], dims[i + 1]);
            let mut m = IntMatrix::zeros(r, c);
            if !rows.is_empty() || r == 0 {
                if rows.len() != r {
                    return Err(Error::Parse(format!(
                        "boundary {} has {} rows, expected {}",
                        i + 1,
                        rows.len(),
                        r
                    )));
                }
                for (a, row) in rows.iter().enumerate() {
                    if !(row.is_empty() && c == 0) && row.len() != c {
                        return Err(Error::Parse(format!(
                            "boundary {} row {} has {} entries, expected {}",
                            i + 1,
                            a,
                            row.len(),
                            c
                        )));
                    }
                    for (b, &v) in row.iter().enumerate() {
                        m.set(a, b, v.into());
                    }
                }
            }
            boundaries.push(m);
        }
        Self::new(dims, boundaries)
    }

    pub fn top_dimension(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Parse("chain complex needs at least C_0".into()));
        }
        if self.boundaries.len() + 1 != self.dims.len() {
            return Err(Error::Parse("boundary count does not match dims".into()));
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            if b.rows != self.dims[i] || b.cols != self.dims[i + 1] {
                return Err(Error::Parse(format!(
                    "boundary {} has shape {}x{}, expected {}x{}",
                    i + 1,
                    b.rows,
                    b.cols,
                    self.dims[i],
                    self.dims[i + 1]
                )));
            }
        }
        for i in 0..self.boundaries.len().saturating_sub(1) {
            if !self.boundaries[i].mul(&self.boundaries[i + 1]).is_zero() {
                return Err(Error::Exact(format!(
                    "boundary composition d_{} o d_{} is nonzero",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }

    /// Homology groups H_0 .. H_n via Smith normal form of the boundaries.
    pub fn homology(&self) -> Vec<FgAbGroup> {
        let n = self.top_dimension();
        let smiths: Vec<_> = self.boundaries.iter().map(smith_normal_form).collect();
        let rank_of = |i: usize| -> usize {
            if i == 0 || i > n {
                0
            } else {
                smiths[i - 1].rank
            }
        };
        (0..=n)
            .map(|i| {
                let free = self.dims[i] - rank_of(i) - rank_of(i + 1);
                let torsion: Vec<BigUint> = if i < n {
                    smiths[i]
                        .divisors
                        .iter()
                        .map(|d| d.magnitude().clone())
                        .filter(|d| *d > BigUint::one())
                        .collect()
                } else {
                    vec![]
                };
                FgAbGroup::from_orders(free, torsion)
            })
            .collect()
    }
}

/// Homology with Z_m coefficients from integral homology:
/// H_p(X; Z_m) = H_p tensor Z_m  +  Tor(H_{p-1}, Z_m).
pub fn uct_with_coefficients(h: &[FgAbGroup], m: u64) -> Vec<FgAbGroup> {
    let zm = FgAbGroup::cyclic(m);
    (0..h.len())
        .map(|p| {
            let mut g = h[p].tensor(&zm);
            if p > 0 {
                g = g.direct_sum(&h[p - 1].tor(&zm));
            }
            g
        })
        .collect()
}

/// Integral cohomology from integral homology:
/// H^n = free part of H_n  +  torsion of H_{n-1}.
pub fn uct_cohomology(h: &[FgAbGroup]) -> Vec<FgAbGroup> {
    (0..h.len())
        .map(|n| {
            let mut g = FgAbGroup::free(h[n].rank);
            if n > 0 {
                g = g.direct_sum(&h[n - 1].torsion_part());
            }
            g
        })
        .collect()
}

/// Inverse of `uct_cohomology`: recover integral homology from integral
/// cohomology (torsion shifts down by one degree).
pub fn homology_from_cohomology(hc: &[FgAbGroup]) -> Vec<FgAbGroup> {
    (0..hc.len())
        .map(|n| {
            let mut g = FgAbGroup::free(hc[n].rank);
            if n + 1 < hc.len() {
                g = g.direct_sum(&hc[n + 1].torsion_part());
            }
            g
        })
        .collect()
}

/// H_k = H^{n-k} for a closed oriented n-manifold.
pub fn poincare_duality_check(h: &[FgAbGroup], n: usize) -> bool {
    if h.len() != n + 1 {
        return false;
    }
    let hc = uct_cohomology(h);
    (0..=n).all(|k| h[k] == hc[n - k])
}

/// Betti numbers, i.e. coefficients of the Poincare polynomial.
pub fn poincare_polynomial(h: &[FgAbGroup]) -> Vec<usize> {
    h.iter().map(|g| g.rank).collect()
}

/// Do the free ranks of `h` match the coefficient list `p`?  Trailing zero
/// coefficients on either side are ignored, so (Z, 0, Z) matches [1, 0, 1, 0].
pub fn poincare_polynomial_check(h: &[FgAbGroup], p: &[usize]) -> bool {
    let got = poincare_polynomial(h);
    let trim = |v: &[usize]| v.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
    got[..trim(&got)] == p[..trim(p)]
}

pub fn euler_characteristic(h: &[FgAbGroup]) -> i64 {
    h.iter()
        .enumerate()
        .map(|(i, g)| if i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
        .sum()
}

#[derive(Clone, Debug)]
pub struct HurewiczReport {
    /// Degree of the first nontrivial homotopy group at or above 2.
    pub first_nontrivial: Option<usize>,
    pub consistent: bool,
    pub detail: String,
}

/// For a simply connected space, the first nontrivial homotopy group must
/// agree with homology in the same degree, with nothing below it.
pub fn hurewicz_check(h: &[FgAbGroup], homotopy: &[FgAbGroup]) -> HurewiczReport {
    if homotopy.len() > 1 && !homotopy[1].is_trivial() {
        return HurewiczReport {
            first_nontrivial: None,
            consistent: false,
            detail: "fundamental group is nontrivial, comparison does not apply".into(),
        };
    }
    let first = (2..homotopy.len()).find(|&i| !homotopy[i].is_trivial());
    let Some(n) = first else {
        return HurewiczReport {
            first_nontrivial: None,
            consistent: true,
            detail: "no nontrivial homotopy group in the given range".into(),
        };
    };
    for i in 1..n {
        if i < h.len() && !h[i].is_trivial() {
            return HurewiczReport {
                first_nontrivial: Some(n),
                consistent: false,
                detail: format!("H_{} = {} is nonzero below degree {}", i, h[i], n),
            };
        }
    }
    let ok = n < h.len() && h[n] == homotopy[n];
    HurewiczReport {
        first_nontrivial: Some(n),
        consistent: ok,
        detail: if ok {
            format!("pi_{} = H_{} = {}", n, n, homotopy[n])
        } else {
            format!(
                "pi_{} = {} but H_{} = {}",
                n,
                homotopy[n],
                n,
                if n < h.len() { h[n].to_string() } else { "<missing>".into() }
            )
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::group::parse_group;

    fn groups(ss: &[&str]) -> Vec<FgAbGroup> {
        ss.iter().map(|s| parse_group(s).unwrap()).collect()
    }

    #[test]
    fn small_complexes_have_known_homology() {
        // minimal CW structure of the real projective plane
        let rp2 = ChainComplex::from_json(r#"{"boundaries": [[[0]], [[2]]]}"#).unwrap();
        assert_eq!(rp2.homology(), groups(&["Z", "Z2", "0"]));

        let torus =
            ChainComplex::from_json(r#"{"boundaries": [[[0, 0]], [[0], [0]]]}"#).unwrap();
        assert_eq!(torus.homology(), groups(&["Z", "Z^2", "Z"]));

        // 2-sphere with a single 0-cell and 2-cell: empty middle group,
        // shapes pinned by dims
        let s2 = ChainComplex::from_json(r#"{"boundaries": [[[]], []], "dims": [1, 0, 1]}"#)
            .unwrap();
        assert_eq!(s2.homology(), groups(&["Z", "0", "Z"]));

        let point = ChainComplex::from_json(r#"{"boundaries": [], "dims": [1]}"#).unwrap();
        assert_eq!(point.homology(), groups(&["Z"]));
    }

    #[test]
    fn nonzero_composition_is_rejected() {
        let bad = ChainComplex::from_json(r#"{"boundaries": [[[1]], [[1]]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn universal_coefficients_both_directions() {
        let h = groups(&["Z", "0", "Z2", "0", "Z", "Z", "Z2", "0", "0", "Z"]);
        let mod2 = uct_with_coefficients(&h, 2);
        assert_eq!(
            mod2,
            groups(&["Z2", "0", "Z2", "Z2", "Z2", "Z2", "Z2", "Z2", "0", "Z2"])
        );
        let coh = uct_cohomology(&h);
        assert_eq!(
            coh,
            groups(&["Z", "0", "0", "Z2", "Z", "Z", "0", "Z2", "0", "Z"])
        );
        assert_eq!(homology_from_cohomology(&coh), h);
    }

    #[test]
    fn duality_euler_and_hurewicz() {
        let h = groups(&["Z", "0", "Z2", "0", "Z", "Z", "Z2", "0", "0", "Z"]);
        assert!(poincare_duality_check(&h, 9));
        assert_eq!(euler_characteristic(&h), 0);
        assert_eq!(poincare_polynomial(&h), vec![1, 0, 0, 0, 1, 1, 0, 0, 0, 1]);
        // (1 + t^4)(1 + t^5), with and without padding
        assert!(poincare_polynomial_check(&h, &[1, 0, 0, 0, 1, 1, 0, 0, 0, 1]));
        assert!(poincare_polynomial_check(&h, &[1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0]));
        assert!(!poincare_polynomial_check(&h, &[1, 0, 0, 0, 1, 1, 0, 0, 0, 2]));

        let torus_h = groups(&["Z", "Z^2", "Z"]);
        assert!(poincare_duality_check(&torus_h, 2));
        assert_eq!(euler_characteristic(&torus_h), 0);

        let pi = groups(&["0", "0", "Z2", "Z2", "Z"]);
        let rep = hurewicz_check(&h, &pi);
        assert_eq!(rep.first_nontrivial, Some(2));
        assert!(rep.consistent, "{}", rep.detail);
    }
}

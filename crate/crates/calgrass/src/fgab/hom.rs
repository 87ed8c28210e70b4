//! Explicit homomorphisms between finitely generated abelian groups,
//! including bounded enumeration of all candidates between two groups.
//!
//! Generator convention: a group Z^r + Zd1 + ... + Zdt is presented on
//! t + r generators, torsion generators first (orders d1..dt), then r free
//! generators. A homomorphism is a matrix with one column per source
//! generator and one row per target generator; torsion rows are kept
//! reduced into [0, e).

use super::group::FgAbGroup;
use super::matrix::IntMatrix;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: IntMatrix,
}

fn to_bigint(u: &BigUint) -> BigInt {
    BigInt::from(u.clone())
}

impl GroupHom {
    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            matrix: IntMatrix::zeros(target.num_gens(), source.num_gens()),
            source: source.clone(),
            target: target.clone(),
        }
    }

    pub fn new(source: &FgAbGroup, target: &FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows != target.num_gens() || matrix.cols != source.num_gens() {
            return Err(Error::Exact(format!(
                "hom matrix shape {}x{} does not match target/source generator counts {}x{}",
                matrix.rows,
                matrix.cols,
                target.num_gens(),
                source.num_gens()
            )));
        }
        let mut h = GroupHom { source: source.clone(), target: target.clone(), matrix };
        h.reduce();
        if !h.is_well_defined() {
            return Err(Error::Exact(
                "matrix does not define a homomorphism: some generator order is not killed".into(),
            ));
        }
        Ok(h)
    }

    /// Reduce each torsion row of the matrix into canonical residues [0, e).
    fn reduce(&mut self) {
        let orders = self.target.gen_orders();
        for (i, e) in orders.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let m = to_bigint(e);
            for j in 0..self.matrix.cols {
                let v = self.matrix.get(i, j).mod_floor(&m);
                self.matrix.set(i, j, v);
            }
        }
    }

    /// A matrix defines a homomorphism iff d * column vanishes in the target
    /// for every source generator of order d.
    pub fn is_well_defined(&self) -> bool {
        let src = self.source.gen_orders();
        let tgt = self.target.gen_orders();
        for (j, d) in src.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let d = to_bigint(d);
            for (i, e) in tgt.iter().enumerate() {
                let scaled = self.matrix.get(i, j) * &d;
                if e.is_zero() {
                    if !scaled.is_zero() {
                        return false;
                    }
                } else if !(scaled % to_bigint(e)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// self o first, where first: A -> B and self: B -> C.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::Exact("composition mismatch: codomain != domain".into()));
        }
        let m = self.matrix.mul(&first.matrix);
        GroupHom::new(&first.source, &self.target, m)
    }

    pub fn negated(&self) -> GroupHom {
        let mut m = self.matrix.clone();
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = -m.get(i, j).clone();
                m.set(i, j, v);
            }
        }
        let mut h = GroupHom { source: self.source.clone(), target: self.target.clone(), matrix: m };
        h.reduce();
        h
    }

    /// Canonical key identifying the hom up to an overall sign.
    pub fn sign_canonical_key(&self) -> Vec<BigInt> {
        fn flatten(m: &IntMatrix) -> Vec<BigInt> {
            let mut v = Vec::with_capacity(m.rows * m.cols);
            for i in 0..m.rows {
                for j in 0..m.cols {
                    v.push(m.get(i, j).clone());
                }
            }
            v
        }
        let a = flatten(&self.matrix);
        let b = flatten(&self.negated().matrix);
        a.min(b)
    }

    pub fn same_up_to_sign(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.sign_canonical_key() == other.sign_canonical_key()
    }
}

/// All homomorphisms source -> target, entrywise.
///
/// Torsion-to-torsion and free-to-torsion entries are enumerated completely;
/// free-to-free entries range over -bound..=bound. The second return value
/// says whether the enumeration is exhaustive, which holds exactly when no
/// free-to-free entry exists.
pub fn enumerate_homs(
    source: &FgAbGroup,
    target: &FgAbGroup,
    bound: i64,
) -> Result<(Vec<GroupHom>, bool)> {
    let src = source.gen_orders();
    let tgt = target.gen_orders();
    let rows = tgt.len();
    let cols = src.len();
    let mut choices: Vec<Vec<BigInt>> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let e = &tgt[i];
            let d = &src[j];
            let list: Vec<BigInt> = if !d.is_zero() {
                if e.is_zero() {
                    vec![BigInt::zero()]
                } else {
                    // need d*x = 0 mod e, so x is a multiple of e/gcd(d,e)
                    let g = d.gcd(e);
                    let step = to_bigint(&(e / &g));
                    let mut count = BigUint::zero();
                    let mut v = Vec::new();
                    let mut x = BigInt::zero();
                    while count < g {
                        v.push(x.clone());
                        x += &step;
                        count += BigUint::one();
                    }
                    v
                }
            } else if !e.is_zero() {
                let mut v = Vec::new();
                let mut x = BigInt::zero();
                let e_int = to_bigint(e);
                while x < e_int {
                    v.push(x.clone());
                    x += 1;
                }
                v
            } else {
                (-bound..=bound).map(BigInt::from).collect()
            };
            choices.push(list);
        }
    }
    let total: u128 = choices.iter().map(|c| c.len() as u128).product();
    if total > 5_000_000 {
        return Err(Error::Numeric(format!(
            "hom enumeration between {} and {} would produce {} candidates",
            source, target, total
        )));
    }
    let complete = source.rank == 0 || target.rank == 0;
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, choices[i * cols + j][idx[i * cols + j]].clone());
            }
        }
        out.push(GroupHom { source: source.clone(), target: target.clone(), matrix: m });
        // odometer increment
        let mut k = choices.len();
        loop {
            if k == 0 {
                return Ok((out, complete));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::group::parse_group;

    fn g(s: &str) -> FgAbGroup {
        parse_group(s).unwrap()
    }

    #[test]
    fn enumeration_count_matches_hom_group_order() {
        for (a, b) in [("Z2", "Z4"), ("Z4", "Z2"), ("Z4+Z2", "Z8"), ("Z2^2", "Z2^2"), ("Z", "Z6")] {
            let (homs, complete) = enumerate_homs(&g(a), &g(b), 3).unwrap();
            assert!(complete);
            let order = g(a).hom(&g(b)).order().unwrap();
            assert_eq!(BigUint::from(homs.len()), order, "Hom({},{})", a, b);
            for h in &homs {
                assert!(h.is_well_defined());
            }
        }
        let (homs, complete) = enumerate_homs(&g("Z"), &g("Z"), 3).unwrap();
        assert!(!complete);
        assert_eq!(homs.len(), 7);
    }

    #[test]
    fn torsion_cannot_hit_free_part() {
        let (homs, _) = enumerate_homs(&g("Z2"), &g("Z+Z4"), 4).unwrap();
        // x must be a multiple of 4/gcd(2,4) = 2 in Z4, and 0 on the free row
        assert_eq!(homs.len(), 2);
        for h in &homs {
            let free_row = h.target.torsion.len(); // free generators come last
            assert!(h.matrix.get(free_row, 0).is_zero());
        }
    }

    #[test]
    fn composition_and_sign_canonical() {
        let z = g("Z");
        let z4 = g("Z4");
        let z2 = g("Z2");
        let f = GroupHom::new(&z, &z4, IntMatrix::from_rows(&[vec![1]]).unwrap()).unwrap();
        let h = GroupHom::new(&z4, &z2, IntMatrix::from_rows(&[vec![1]]).unwrap()).unwrap();
        let hf = h.compose(&f).unwrap();
        assert_eq!(hf.matrix.get(0, 0), &BigInt::from(1));

        let a = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![3]]).unwrap()).unwrap();
        let b = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![-3]]).unwrap()).unwrap();
        assert!(a.same_up_to_sign(&b));
        let c = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![2]]).unwrap()).unwrap();
        assert!(!a.same_up_to_sign(&c));
        // in Z2 a map equals its own negative
        let d = GroupHom::new(&z, &z2, IntMatrix::from_rows(&[vec![1]]).unwrap()).unwrap();
        assert!(d.same_up_to_sign(&d.negated()));
    }

    #[test]
    fn ill_defined_matrix_rejected() {
        // Z2 -> Z4 sending the generator to 1 is not a homomorphism
        let bad = GroupHom::new(&g("Z2"), &g("Z4"), IntMatrix::from_rows(&[vec![1]]).unwrap());
        assert!(bad.is_err());
    }
}

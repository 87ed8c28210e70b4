//! Truncated graded-commutative cohomology rings presented by generators
//! and monomial relations, split into an integral component and torsion
//! components whose mutual products vanish.

use crate::fgab::group::FgAbGroup;
use crate::{Error, Result};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::fmt;

/// Coefficients of one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coeff {
    Z,
    Z2,
}

/// Exponent vector over named generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(pub BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (g, e) in &other.0 {
            *out.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.0.iter().all(|(g, e)| self.0.get(g).map_or(false, |m| m >= e))
    }

    pub fn degree(&self, degrees: &BTreeMap<String, u32>) -> Option<u32> {
        let mut d = 0;
        for (g, e) in &self.0 {
            d += degrees.get(g)? * e;
        }
        Some(d)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| if *e == 1 { g.clone() } else { format!("{}^{}", g, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Accepts "1", "x4", "x4^2", "y3*y7", "y3 y7" and even "y3y7": a name is
/// one alphabetic character plus digits, and separators are optional.
pub fn parse_monomial(s: &str) -> Result<Monomial> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Monomial::one());
    }
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out: BTreeMap<String, u32> = BTreeMap::new();
    while i < chars.len() {
        let c = chars[i];
        if c == '*' || c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(Error::Parse(format!("unexpected '{}' in monomial '{}'", c, s)));
        }
        let mut name = String::new();
        name.push(c);
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            name.push(chars[i]);
            i += 1;
        }
        let mut exp = 1u32;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(Error::Parse(format!("missing exponent in monomial '{}'", s)));
            }
            exp = chars[start..i]
                .iter()
                .collect::<String>()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad exponent in monomial '{}'", s)))?;
        }
        *out.entry(name).or_insert(0) += exp;
    }
    Ok(Monomial(out))
}

#[derive(Clone, Debug)]
pub struct RingComponent {
    pub coeff: Coeff,
    /// generator name -> degree
    pub gens: BTreeMap<String, u32>,
    /// monomial ideal of vanishing products
    pub zero_monomials: Vec<Monomial>,
}

impl RingComponent {
    pub fn monomial_is_zero(&self, m: &Monomial) -> bool {
        self.zero_monomials.iter().any(|z| m.divisible_by(z))
    }

    /// Basis monomials of one degree. `with_unit` admits the empty
    /// monomial, which only the leading integral component owns.
    fn basis_in_degree(&self, degree: u32, with_unit: bool) -> Vec<Monomial> {
        let gens: Vec<(&String, &u32)> = self.gens.iter().collect();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, u32, Monomial)> = vec![(0, 0, Monomial::one())];
        while let Some((gi, deg, mono)) = stack.pop() {
            if deg == degree {
                if (with_unit || !mono.is_one()) && !self.monomial_is_zero(&mono) {
                    out.push(mono);
                }
                continue;
            }
            if gi >= gens.len() || deg > degree {
                continue;
            }
            let (name, gdeg) = gens[gi];
            // skip this generator entirely
            stack.push((gi + 1, deg, mono.clone()));
            if *gdeg == 0 {
                continue;
            }
            let mut e = 1u32;
            loop {
                let nd = deg + gdeg * e;
                if nd > degree {
                    break;
                }
                let mut m = mono.clone();
                m.0.insert(name.clone(), e);
                if !self.monomial_is_zero(&m) {
                    stack.push((gi + 1, nd, m));
                }
                e += 1;
            }
        }
        out.sort();
        out
    }
}

/// A graded ring truncated at `top_degree`, additively the direct sum of
/// its components. Products of elements from different components vanish.
#[derive(Clone, Debug)]
pub struct TruncatedRing {
    pub name: String,
    pub components: Vec<RingComponent>,
    pub top_degree: u32,
}

impl TruncatedRing {
    /// Basis monomials with their component index, one degree at a time.
    pub fn basis(&self, degree: u32) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for (ci, comp) in self.components.iter().enumerate() {
            for m in comp.basis_in_degree(degree, ci == 0) {
                out.push((ci, m));
            }
        }
        out
    }

    /// Additive group in one degree.
    pub fn graded_group(&self, degree: u32) -> FgAbGroup {
        let mut rank = 0usize;
        let mut orders: Vec<BigUint> = Vec::new();
        for (ci, _) in self.basis(degree) {
            match self.components[ci].coeff {
                Coeff::Z => rank += 1,
                Coeff::Z2 => orders.push(BigUint::from(2u32)),
            }
        }
        FgAbGroup::from_orders(rank, orders)
    }

    /// The degree a generator was declared with, across all components.
    pub fn gen_degree(&self, name: &str) -> Option<(usize, u32)> {
        for (ci, comp) in self.components.iter().enumerate() {
            if let Some(d) = comp.gens.get(name) {
                return Some((ci, *d));
            }
        }
        None
    }

    /// The single component housing every generator of `m`, or None when
    /// the generators straddle components (so products with m vanish) or a
    /// name is unknown.
    pub fn component_of(&self, m: &Monomial) -> Result<Option<usize>> {
        let mut comp: Option<usize> = None;
        for g in m.0.keys() {
            let (ci, _) = self
                .gen_degree(g)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{}'", g)))?;
            match comp {
                None => comp = Some(ci),
                Some(c) if c == ci => {}
                Some(_) => return Ok(None),
            }
        }
        Ok(comp.or(Some(0)))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Result<u32> {
        let mut d = 0;
        for (g, e) in &m.0 {
            let (_, gd) = self
                .gen_degree(g)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{}'", g)))?;
            d += gd * e;
        }
        Ok(d)
    }

    /// Whether a monomial is zero in the ring, component crossings included.
    pub fn monomial_is_zero(&self, m: &Monomial) -> Result<bool> {
        match self.component_of(m)? {
            None => Ok(true),
            Some(ci) => Ok(self.components[ci].monomial_is_zero(m)
                || self.monomial_degree(m)? > self.top_degree),
        }
    }
}

/// The additive groups of the ring agree degree by degree with the
/// cohomology determined by the given integral homology.
pub fn ring_matches_cohomology(ring: &TruncatedRing, homology: &[FgAbGroup]) -> bool {
    let coh = crate::fgab::homology::uct_cohomology(homology);
    if coh.len() != ring.top_degree as usize + 1 {
        return false;
    }
    (0..coh.len()).all(|n| ring.graded_group(n as u32) == coh[n])
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub ok: bool,
    pub top_monomial: Option<Monomial>,
    pub issues: Vec<String>,
}

/// Perfect pairing on the integral component of the ring of a closed
/// oriented n-manifold: degree n holds exactly one basis monomial, and
/// multiplication pairs the degree-d basis with the degree-(n-d) basis
/// bijectively.
pub fn duality_pairing_check(ring: &TruncatedRing, n: u32) -> DualityReport {
    let comp = &ring.components[0];
    let top = ring.top_degree;
    let mut issues = Vec::new();
    if top != n {
        issues.push(format!(
            "ring is truncated at degree {} but the manifold dimension is {}",
            top, n
        ));
        return DualityReport { ok: false, top_monomial: None, issues };
    }
    let top_basis = comp.basis_in_degree(top, true);
    if top_basis.len() != 1 {
        issues.push(format!(
            "top degree {} has {} integral monomials, expected exactly one",
            top,
            top_basis.len()
        ));
        return DualityReport { ok: false, top_monomial: None, issues };
    }
    let top_mono = top_basis[0].clone();
    for d in 0..=top / 2 {
        let left = comp.basis_in_degree(d, true);
        let right = comp.basis_in_degree(top - d, true);
        if left.len() != right.len() {
            issues.push(format!(
                "degree {} has {} monomials but degree {} has {}",
                d,
                left.len(),
                top - d,
                right.len()
            ));
            continue;
        }
        for m in &left {
            let partners: Vec<&Monomial> = right
                .iter()
                .filter(|m2| {
                    let prod = m.times(m2);
                    !comp.monomial_is_zero(&prod) && prod == top_mono
                })
                .collect();
            if partners.len() != 1 {
                issues.push(format!(
                    "monomial {} in degree {} has {} complementary partners",
                    m,
                    d,
                    partners.len()
                ));
            }
        }
    }
    DualityReport { ok: issues.is_empty(), top_monomial: Some(top_mono), issues }
}

#[derive(Clone, Debug)]
pub struct HomCheckReport {
    pub ok: bool,
    pub issues: Vec<String>,
}

/// Verify that mapping each source generator to "0" or a target monomial
/// defines a degree-preserving ring homomorphism: relations of the source,
/// including cross-component vanishing, must land on zero.
pub fn verify_ring_hom(
    source: &TruncatedRing,
    target: &TruncatedRing,
    images: &BTreeMap<String, String>,
) -> Result<HomCheckReport> {
    let mut issues = Vec::new();
    let mut img: BTreeMap<String, Option<Monomial>> = BTreeMap::new();
    for (ci, comp) in source.components.iter().enumerate() {
        for (g, deg) in &comp.gens {
            let Some(raw) = images.get(g) else {
                issues.push(format!("no image given for generator {}", g));
                continue;
            };
            if raw.trim() == "0" {
                img.insert(g.clone(), None);
                continue;
            }
            let m = parse_monomial(raw)?;
            let tcomp = target.component_of(&m)?;
            match tcomp {
                None => {
                    issues.push(format!(
                        "image of {} mixes target components and is identically zero; write 0 instead",
                        g
                    ));
                    img.insert(g.clone(), None);
                    continue;
                }
                Some(tci) => {
                    if comp.coeff == Coeff::Z2 && target.components[tci].coeff != Coeff::Z2 {
                        issues.push(format!(
                            "generator {} has two-torsion coefficients but its image does not",
                            g
                        ));
                    }
                    let _ = ci;
                }
            }
            let d = target.monomial_degree(&m)?;
            if d != *deg {
                issues.push(format!(
                    "image of {} has degree {}, expected {}",
                    g, d, deg
                ));
            }
            if target.monomial_is_zero(&m)? {
                img.insert(g.clone(), None);
            } else {
                img.insert(g.clone(), Some(m));
            }
        }
    }

    // a source monomial's image: product of generator images
    let image_of = |m: &Monomial| -> Option<Monomial> {
        let mut acc = Monomial::one();
        for (g, e) in &m.0 {
            let one = img.get(g)?.clone()?;
            for _ in 0..*e {
                acc = acc.times(&one);
            }
        }
        Some(acc)
    };

    // relations inside each component
    for comp in &source.components {
        for z in &comp.zero_monomials {
            if let Some(image) = image_of(z) {
                if !target.monomial_is_zero(&image)? {
                    issues.push(format!("relation {} maps to nonzero {}", z, image));
                }
            }
        }
    }
    // vanishing of cross-component products
    let names: Vec<(usize, String)> = source
        .components
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.gens.keys().map(move |g| (ci, g.clone())))
        .collect();
    for (i, (ci, gi)) in names.iter().enumerate() {
        for (cj, gj) in names.iter().skip(i + 1) {
            if ci == cj {
                continue;
            }
            let m = Monomial(BTreeMap::from([(gi.clone(), 1), (gj.clone(), 1)]));
            if let Some(image) = image_of(&m) {
                if !target.monomial_is_zero(&image)? {
                    issues.push(format!(
                        "cross product {}*{} vanishes at the source but maps to nonzero {}",
                        gi, gj, image
                    ));
                }
            }
        }
    }
    Ok(HomCheckReport { ok: issues.is_empty(), issues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::group::parse_group;

    fn gens(list: &[(&str, u32)]) -> BTreeMap<String, u32> {
        list.iter().map(|(n, d)| (n.to_string(), *d)).collect()
    }

    fn zeros(list: &[&str]) -> Vec<Monomial> {
        list.iter().map(|s| parse_monomial(s).unwrap()).collect()
    }

    fn demo_ring() -> TruncatedRing {
        TruncatedRing {
            name: "demo".into(),
            components: vec![
                RingComponent {
                    coeff: Coeff::Z,
                    gens: gens(&[("x4", 4), ("x5", 5)]),
                    zero_monomials: zeros(&["x4^2", "x5^2"]),
                },
                RingComponent {
                    coeff: Coeff::Z2,
                    gens: gens(&[("y3", 3), ("y7", 7)]),
                    zero_monomials: zeros(&["y3^2", "y7^2", "y3*y7"]),
                },
            ],
            top_degree: 9,
        }
    }

    #[test]
    fn lenient_monomial_parsing() {
        for s in ["y3*y7", "y3 y7", "y3y7"] {
            let m = parse_monomial(s).unwrap();
            assert_eq!(m.0.len(), 2, "{}", s);
            assert_eq!(m.to_string(), "y3*y7");
        }
        assert_eq!(parse_monomial("x4^2").unwrap().0["x4"], 2);
        assert_eq!(parse_monomial("1").unwrap(), Monomial::one());
        assert!(parse_monomial("4x").is_err());
    }

    #[test]
    fn graded_groups_of_demo_ring() {
        let r = demo_ring();
        let expect = ["Z", "0", "0", "Z2", "Z", "Z", "0", "Z2", "0", "Z"];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(
                r.graded_group(n as u32),
                parse_group(e).unwrap(),
                "degree {}",
                n
            );
        }
        let h: Vec<FgAbGroup> = ["Z", "0", "Z2", "0", "Z", "Z", "Z2", "0", "0", "Z"]
            .iter()
            .map(|s| parse_group(s).unwrap())
            .collect();
        assert!(ring_matches_cohomology(&r, &h));
    }

    #[test]
    fn duality_pairing_on_integral_part() {
        let r = demo_ring();
        let rep = duality_pairing_check(&r, 9);
        assert!(rep.ok, "{:?}", rep.issues);
        assert_eq!(rep.top_monomial.unwrap().to_string(), "x4*x5");

        // a dimension that disagrees with the truncation degree fails fast
        assert!(!duality_pairing_check(&r, 8).ok);

        // breaking the top class breaks the pairing
        let mut broken = demo_ring();
        broken.components[0].zero_monomials.push(parse_monomial("x4*x5").unwrap());
        assert!(!duality_pairing_check(&broken, 9).ok);
    }

    #[test]
    fn ring_hom_checks_degrees_and_relations() {
        let big = demo_ring();
        let small = TruncatedRing {
            name: "small".into(),
            components: vec![
                RingComponent {
                    coeff: Coeff::Z,
                    gens: gens(&[("x5", 5)]),
                    zero_monomials: zeros(&["x5^2"]),
                },
                RingComponent {
                    coeff: Coeff::Z2,
                    gens: gens(&[("x3", 3)]),
                    zero_monomials: zeros(&["x3^2"]),
                },
            ],
            top_degree: 5,
        };
        let images: BTreeMap<String, String> = [
            ("x4", "0"),
            ("x5", "x5"),
            ("y3", "x3"),
            ("y7", "0"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let rep = verify_ring_hom(&big, &small, &images).unwrap();
        assert!(rep.ok, "{:?}", rep.issues);

        // sending y3 to the integral class x5 breaks both degree and torsion
        let bad: BTreeMap<String, String> = [
            ("x4", "0"),
            ("x5", "x5"),
            ("y3", "x5"),
            ("y7", "0"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let rep = verify_ring_hom(&big, &small, &bad).unwrap();
        assert!(!rep.ok);
    }
}

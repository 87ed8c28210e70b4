//! Finitely generated abelian groups in invariant-factor form, with the
//! bilinear operations homology computations need.

use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Z^rank plus cyclic torsion Z_{d1} + ... + Z_{dt} with d1 | d2 | ... and
/// every d >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    pub rank: usize,
    pub torsion: Vec<BigUint>,
}

fn factorize(mut n: BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += 1;
            n /= &p;
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 2);
        FgAbGroup { rank: 0, torsion: vec![BigUint::from(n)] }
    }

    /// Canonical form from an arbitrary multiset of cyclic orders: group
    /// the prime powers so each divisor divides the next.
    pub fn from_orders<I: IntoIterator<Item = BigUint>>(rank: usize, orders: I) -> Self {
        let mut by_prime: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        for o in orders {
            if o <= BigUint::one() {
                continue;
            }
            for (p, e) in factorize(o) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let chain_len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
        let mut divisors = vec![BigUint::one(); chain_len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // largest exponent goes to the last divisor
            for (i, e) in exps.into_iter().enumerate() {
                let slot = chain_len - 1 - i;
                divisors[slot] *= p.pow(e);
            }
        }
        FgAbGroup { rank, torsion: divisors }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// None when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    pub fn torsion_part(&self) -> FgAbGroup {
        FgAbGroup { rank: 0, torsion: self.torsion.clone() }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::from_orders(
            self.rank + other.rank,
            self.torsion.iter().chain(other.torsion.iter()).cloned(),
        )
    }

    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders: Vec<BigUint> = Vec::new();
        for d in &self.torsion {
            for _ in 0..other.rank {
                orders.push(d.clone());
            }
        }
        for e in &other.torsion {
            for _ in 0..self.rank {
                orders.push(e.clone());
            }
        }
        for d in &self.torsion {
            for e in &other.torsion {
                orders.push(d.gcd(e));
            }
        }
        FgAbGroup::from_orders(self.rank * other.rank, orders)
    }

    /// Tor_1(A, B): free parts contribute nothing, cyclic pieces pair by gcd.
    pub fn tor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = Vec::new();
        for d in &self.torsion {
            for e in &other.torsion {
                orders.push(d.gcd(e));
            }
        }
        FgAbGroup::from_orders(0, orders)
    }

    /// Hom(A, B).
    pub fn hom(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = Vec::new();
        for e in &other.torsion {
            for _ in 0..self.rank {
                orders.push(e.clone());
            }
        }
        for d in &self.torsion {
            for e in &other.torsion {
                orders.push(d.gcd(e));
            }
        }
        FgAbGroup::from_orders(self.rank * other.rank, orders)
    }

    /// Ext^1(A, B).
    pub fn ext(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = Vec::new();
        for d in &self.torsion {
            for _ in 0..other.rank {
                orders.push(d.clone());
            }
            for e in &other.torsion {
                orders.push(d.gcd(e));
            }
        }
        FgAbGroup::from_orders(0, orders)
    }

    /// Generator orders in presentation convention: torsion generators
    /// first (their orders), then rank zeros for the free generators.
    pub fn gen_orders(&self) -> Vec<BigUint> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat(BigUint::zero()).take(self.rank));
        v
    }

    pub fn num_gens(&self) -> usize {
        self.torsion.len() + self.rank
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.rank == 1 {
            parts.push("Z".into());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == *d {
                j += 1;
            }
            let count = j - i;
            if count == 1 {
                parts.push(format!("Z{}", d));
            } else {
                parts.push(format!("Z{}^{}", d, count));
            }
            i = j;
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Parse "0", "Z", "Z^2", "Z2", "Z12^3" and "+"-combinations of these.
pub fn parse_group(s: &str) -> Result<FgAbGroup> {
    let s = s.trim();
    if s == "0" {
        return Ok(FgAbGroup::trivial());
    }
    let mut rank = 0usize;
    let mut orders: Vec<BigUint> = Vec::new();
    for raw in s.split('+') {
        let tok = raw.trim();
        if tok.is_empty() {
            return Err(Error::Parse(format!("empty summand in group '{}'", s)));
        }
        let (head, count) = match tok.split_once('^') {
            Some((h, c)) => {
                let k: usize = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{}'", tok)))?;
                (h.trim(), k)
            }
            None => (tok, 1),
        };
        if head == "Z" {
            rank += count;
        } else if let Some(num) = head.strip_prefix('Z') {
            let d: BigUint = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclic order in '{}'", tok)))?;
            if d < BigUint::from(2u32) {
                return Err(Error::Parse(format!("cyclic order must be >= 2 in '{}'", tok)));
            }
            for _ in 0..count {
                orders.push(d.clone());
            }
        } else {
            return Err(Error::Parse(format!("cannot parse group summand '{}'", tok)));
        }
    }
    Ok(FgAbGroup::from_orders(rank, orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        parse_group(s).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "Z", "Z^2", "Z2", "Z+Z2", "Z2^2", "Z^2+Z2+Z4", "Z4"] {
            assert_eq!(g(s).to_string(), s);
        }
        // non-chain input canonicalizes: Z2 + Z3 = Z6
        assert_eq!(g("Z2+Z3").to_string(), "Z6");
        assert_eq!(g("Z4+Z6").to_string(), "Z2+Z12");
        assert_eq!(g("Z2 + Z").to_string(), "Z+Z2");
    }

    #[test]
    fn tensor_tor_hom_ext_tables() {
        let z = g("Z");
        let z2 = g("Z2");
        let z4 = g("Z4");
        let z6 = g("Z6");
        assert_eq!(z.tensor(&z), g("Z"));
        assert_eq!(z.tensor(&z2), g("Z2"));
        assert_eq!(z4.tensor(&z6), g("Z2"));
        assert_eq!(z4.tor(&z6), g("Z2"));
        assert_eq!(z.tor(&z2), g("0"));
        assert_eq!(z2.hom(&z), g("0"));
        assert_eq!(z2.hom(&z2), g("Z2"));
        assert_eq!(z.hom(&z2), g("Z2"));
        assert_eq!(z.hom(&z), g("Z"));
        assert_eq!(z2.ext(&z), g("Z2"));
        assert_eq!(z.ext(&z2), g("0"));
        assert_eq!(z4.ext(&z6), g("Z2"));
        // bilinearity over direct sums
        let a = g("Z+Z2");
        let b = g("Z2^2");
        assert_eq!(a.tensor(&b), g("Z2^2+Z2^2").direct_sum(&g("0")));
        assert_eq!(a.tensor(&b).to_string(), "Z2^4");
    }

    #[test]
    fn gen_orders_convention() {
        let a = g("Z^2+Z2+Z4");
        let orders = a.gen_orders();
        assert_eq!(orders.len(), 4);
        assert_eq!(orders[0], BigUint::from(2u32));
        assert_eq!(orders[1], BigUint::from(4u32));
        assert!(orders[2].is_zero() && orders[3].is_zero());
    }
}

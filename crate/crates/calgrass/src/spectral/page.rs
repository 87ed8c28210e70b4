//! Pages of a first-quadrant spectral sequence over exactly computed
//! abelian groups, and the extension algebra that reassembles a filtered
//! group from its associated graded pieces.

use super::scenario::Direction;
use crate::fgab::group::FgAbGroup;
use crate::fgab::hom::GroupHom;
use crate::fgab::matrix::{kernel_basis, smith_normal_form, solve, IntMatrix};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub type Position = (usize, usize);

/// One page: the nonzero groups by (p, q). Trivial positions are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub groups: BTreeMap<Position, FgAbGroup>,
    pub p_max: usize,
    pub q_max: usize,
}

impl Page {
    pub fn group(&self, pos: Position) -> FgAbGroup {
        self.groups.get(&pos).cloned().unwrap_or_else(FgAbGroup::trivial)
    }

    pub fn nonzero_positions(&self) -> Vec<Position> {
        self.groups.keys().cloned().collect()
    }
}

/// Where the page-r differential leaving `from` lands, if inside the
/// first-quadrant window.
pub fn differential_target(
    direction: Direction,
    r: usize,
    from: Position,
    p_max: usize,
    q_max: usize,
) -> Option<Position> {
    let (p, q) = from;
    match direction {
        Direction::Homological => {
            if p >= r && q + r - 1 <= q_max {
                Some((p - r, q + r - 1))
            } else {
                None
            }
        }
        Direction::Cohomological => {
            if q + 1 >= r && p + r <= p_max {
                Some((p + r, q - (r - 1)))
            } else {
                None
            }
        }
    }
}

/// Position whose page-r differential lands on `to`, if any.
pub fn differential_source(
    direction: Direction,
    r: usize,
    to: Position,
    p_max: usize,
    q_max: usize,
) -> Option<Position> {
    let (p, q) = to;
    match direction {
        Direction::Homological => {
            if p + r <= p_max && q + 1 >= r {
                Some((p + r, q - (r - 1)))
            } else {
                None
            }
        }
        Direction::Cohomological => {
            if p >= r && q + r - 1 <= q_max {
                Some((p - r, q + r - 1))
            } else {
                None
            }
        }
    }
}

/// The second page of the fibration spectral sequence over a simply
/// connected base.
///
/// Homological: E2_{p,q} = H_p(B) (x) H_q(F)  +  Tor(H_{p-1}(B), H_q(F)).
/// Cohomological: E2^{p,q} = Hom(H_p(B), A_q)  +  Ext(H_{p-1}(B), A_q)
/// where A_q = H^q(F) comes from the fiber homology by universal
/// coefficients.
pub fn build_e2(direction: Direction, fiber: &[FgAbGroup], base: &[FgAbGroup]) -> Page {
    let p_max = base.len().saturating_sub(1);
    let q_max = fiber.len().saturating_sub(1);
    let coeffs: Vec<FgAbGroup> = match direction {
        Direction::Homological => fiber.to_vec(),
        Direction::Cohomological => crate::fgab::homology::uct_cohomology(fiber),
    };
    let mut groups = BTreeMap::new();
    for p in 0..=p_max {
        for (q, a) in coeffs.iter().enumerate() {
            let g = match direction {
                Direction::Homological => {
                    let mut g = base[p].tensor(a);
                    if p > 0 {
                        g = g.direct_sum(&base[p - 1].tor(a));
                    }
                    g
                }
                Direction::Cohomological => {
                    let mut g = base[p].hom(a);
                    if p > 0 {
                        g = g.direct_sum(&base[p - 1].ext(a));
                    }
                    g
                }
            };
            if !g.is_trivial() {
                groups.insert((p, q), g);
            }
        }
    }
    Page { r: 2, groups, p_max, q_max }
}

/// Lattice basis, as matrix columns, of { x : M x = 0 in the group with
/// generator orders `orders` }. `m_rows` is the length of an element
/// vector (number of generators of the map's source).
fn constrained_kernel(m_out: &IntMatrix, target_orders: &[BigUint]) -> IntMatrix {
    let m = m_out.cols;
    let h = m_out.rows;
    debug_assert_eq!(h, target_orders.len());
    // kernel of [M | -R] in Z^{m+h}; x-parts generate the lattice
    let mut rel = IntMatrix::zeros(h, h);
    for (i, o) in target_orders.iter().enumerate() {
        rel.set(i, i, -BigInt::from(o.clone()));
    }
    let stacked = m_out.hstack(&rel);
    let kb = kernel_basis(&stacked);
    let xs: Vec<Vec<BigInt>> = kb.iter().map(|v| v[..m].to_vec()).collect();
    let gen_mat = IntMatrix::from_columns(m, &xs);
    // reduce the generating set to an honest basis: the column span of X
    // equals the column span of U^{-1} D
    let s = smith_normal_form(&gen_mat);
    let mut cols = Vec::new();
    for t in 0..s.rank {
        let col: Vec<BigInt> = (0..m)
            .map(|i| s.u_inv.get(i, t) * s.d.get(t, t))
            .collect();
        cols.push(col);
    }
    IntMatrix::from_columns(m, &cols)
}

/// ker(out) / (im(in) + relations), the group at one position of the next
/// page. `out` and `inc` are absent when the corresponding differential is
/// zero or leaves the window.
pub fn subquotient(
    here: &FgAbGroup,
    out: Option<&GroupHom>,
    inc: Option<&GroupHom>,
) -> Result<FgAbGroup> {
    let m = here.num_gens();
    if m == 0 {
        if let Some(f) = inc {
            if !f.is_zero() {
                return Err(Error::Exact("nonzero map into a trivial group".into()));
            }
        }
        return Ok(FgAbGroup::trivial());
    }
    let basis = match out {
        Some(f) => {
            debug_assert_eq!(f.matrix.cols, m);
            constrained_kernel(&f.matrix, &f.target.gen_orders())
        }
        None => IntMatrix::identity(m),
    };
    let r = basis.cols;
    // relation columns: the incoming image plus the ambient relations of
    // `here`, all rewritten in kernel-basis coordinates
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    if let Some(f) = inc {
        debug_assert_eq!(f.matrix.rows, m);
        for j in 0..f.matrix.cols {
            rel_cols.push(f.matrix.column(j));
        }
    }
    for (i, o) in here.gen_orders().iter().enumerate() {
        if o.is_zero() {
            continue;
        }
        let mut col = vec![BigInt::zero(); m];
        col[i] = BigInt::from(o.clone());
        rel_cols.push(col);
    }
    let mut z = IntMatrix::zeros(r, rel_cols.len());
    for (j, c) in rel_cols.iter().enumerate() {
        let sol = solve(&basis, c).ok_or_else(|| {
            Error::Exact("incoming image escapes the kernel: differentials do not compose to zero".into())
        })?;
        for i in 0..r {
            z.set(i, j, sol[i].clone());
        }
    }
    let s = smith_normal_form(&z);
    let torsion: Vec<BigUint> = s
        .divisors
        .iter()
        .map(|d| d.magnitude().clone())
        .filter(|d| *d > BigUint::one())
        .collect();
    Ok(FgAbGroup::from_orders(r - s.rank, torsion))
}

/// Turn page r into page r+1 given the differentials leaving each position.
/// `maps` holds the chosen nonzero differentials keyed by source position;
/// absent keys mean the zero map.
pub fn turn_page(page: &Page, direction: Direction, maps: &BTreeMap<Position, GroupHom>) -> Result<Page> {
    let r = page.r;
    let mut groups = BTreeMap::new();
    for (&pos, g) in &page.groups {
        let out = maps.get(&pos);
        if let Some(f) = out {
            if f.source != *g {
                return Err(Error::Exact(format!(
                    "differential at ({},{}) has wrong source group",
                    pos.0, pos.1
                )));
            }
        }
        let inc = differential_source(direction, r, pos, page.p_max, page.q_max)
            .and_then(|src| maps.get(&src));
        let next = subquotient(g, out, inc)?;
        if !next.is_trivial() {
            groups.insert(pos, next);
        }
    }
    Ok(Page { r: r + 1, groups, p_max: page.p_max, q_max: page.q_max })
}

/// All isomorphism classes of middle groups E in 0 -> sub -> E -> quot -> 0.
pub fn extension_middles(quot: &FgAbGroup, sub: &FgAbGroup) -> BTreeSet<FgAbGroup> {
    if quot.is_trivial() {
        return BTreeSet::from([sub.clone()]);
    }
    if sub.is_trivial() {
        return BTreeSet::from([quot.clone()]);
    }
    let a = quot.num_gens();
    let b = sub.num_gens();
    let quot_orders = quot.gen_orders();
    let sub_orders = sub.gen_orders();
    let quot_torsion: Vec<usize> = (0..a).filter(|&j| !quot_orders[j].is_zero()).collect();
    // one free parameter per (quotient torsion generator, sub generator)
    // pair; its range is the orbit of lift changes
    let mut ranges: Vec<BigUint> = Vec::new();
    for &j in &quot_torsion {
        for i in 0..b {
            let o = &quot_orders[j];
            let e = &sub_orders[i];
            let range = if e.is_zero() {
                o.clone()
            } else {
                num_integer::Integer::gcd(o, e)
            };
            ranges.push(range);
        }
    }
    let mut out = BTreeSet::new();
    let mut counters: Vec<BigUint> = vec![BigUint::zero(); ranges.len()];
    loop {
        // relation columns: lifted quotient relations, then sub relations
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for (jj, &j) in quot_torsion.iter().enumerate() {
            let mut col = vec![BigInt::zero(); a + b];
            col[j] = BigInt::from(quot_orders[j].clone());
            for i in 0..b {
                col[a + i] = BigInt::from(counters[jj * b + i].clone());
            }
            cols.push(col);
        }
        for i in 0..b {
            if sub_orders[i].is_zero() {
                continue;
            }
            let mut col = vec![BigInt::zero(); a + b];
            col[a + i] = BigInt::from(sub_orders[i].clone());
            cols.push(col);
        }
        let rel = IntMatrix::from_columns(a + b, &cols);
        let s = smith_normal_form(&rel);
        let torsion: Vec<BigUint> = s
            .divisors
            .iter()
            .map(|d| d.magnitude().clone())
            .filter(|d| *d > BigUint::one())
            .collect();
        out.insert(FgAbGroup::from_orders(a + b - s.rank, torsion));

        // odometer over the extension parameters
        let mut k = ranges.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            counters[k] += BigUint::one();
            if counters[k] < ranges[k] {
                break;
            }
            counters[k] = BigUint::zero();
        }
    }
}

/// Groups a filtration can assemble from graded pieces, folded in
/// filtration order: pieces[0] is the deepest subgroup, each later piece a
/// further quotient on top.
pub fn realizable_totals(pieces: &[FgAbGroup]) -> BTreeSet<FgAbGroup> {
    let nonzero: Vec<&FgAbGroup> = pieces.iter().filter(|g| !g.is_trivial()).collect();
    let mut cands = BTreeSet::from([FgAbGroup::trivial()]);
    for piece in nonzero {
        let mut next = BTreeSet::new();
        for c in &cands {
            next.extend(extension_middles(piece, c));
        }
        cands = next;
    }
    cands
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::group::parse_group;

    fn g(s: &str) -> FgAbGroup {
        parse_group(s).unwrap()
    }

    #[test]
    fn e2_of_torus_as_circle_bundle() {
        // S1 -> T2 -> S1 has E2_{p,q} = H_p(S1) (x) H_q(S1), all Z
        let circle = vec![g("Z"), g("Z")];
        let page = build_e2(Direction::Homological, &circle, &circle);
        assert_eq!(page.groups.len(), 4);
        for q in 0..2 {
            for p in 0..2 {
                assert_eq!(page.group((p, q)), g("Z"));
            }
        }
    }

    #[test]
    fn tor_term_appears() {
        // base with H_1 = Z2 contributes Tor(Z2, Z2) one column over
        let base = vec![g("Z"), g("Z2")];
        let fiber = vec![g("Z"), g("Z2")];
        let page = build_e2(Direction::Homological, &fiber, &base);
        assert_eq!(page.group((1, 1)), g("Z2"));
        // E2_{2,q} would need H_2(B) or Tor(H_1); p_max stops at 1
        assert_eq!(page.p_max, 1);
    }

    #[test]
    fn subquotient_kernel_mod_image() {
        // Z --2--> Z: kernel 0
        let z = g("Z");
        let f = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![2]]).unwrap()).unwrap();
        assert_eq!(subquotient(&z, Some(&f), None).unwrap(), g("0"));
        // Z --0--> Z with incoming multiplication by 3: Z/3
        let inc = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![3]]).unwrap()).unwrap();
        assert_eq!(subquotient(&z, None, Some(&inc)).unwrap(), g("Z3"));
        // Z4 --proj--> Z2: kernel 2Z4 = Z2, no incoming
        let proj =
            GroupHom::new(&g("Z4"), &g("Z2"), IntMatrix::from_rows(&[vec![1]]).unwrap()).unwrap();
        assert_eq!(subquotient(&g("Z4"), Some(&proj), None).unwrap(), g("Z2"));
        // composition failure is detected: image of x2 does not lie in
        // the kernel of x2 inside Z4... use Z -2-> Z -2-> Z
        let two = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![2]]).unwrap()).unwrap();
        assert!(subquotient(&z, Some(&two), Some(&two)).is_err());
    }

    #[test]
    fn turn_page_with_zero_maps_is_identity_on_groups() {
        let fiber = vec![g("Z"), g("0"), g("Z2")];
        let base = vec![g("Z"), g("0"), g("Z"), g("Z2")];
        let page = build_e2(Direction::Homological, &fiber, &base);
        let turned = turn_page(&page, Direction::Homological, &BTreeMap::new()).unwrap();
        assert_eq!(turned.groups, page.groups);
        assert_eq!(turned.r, 3);
    }

    #[test]
    fn extension_middles_match_classical_cases() {
        let middles = extension_middles(&g("Z2"), &g("Z2"));
        assert_eq!(middles, BTreeSet::from([g("Z2^2"), g("Z4")]));
        // sub Z2, quotient Z: only the split extension
        assert_eq!(extension_middles(&g("Z"), &g("Z2")), BTreeSet::from([g("Z+Z2")]));
        // sub Z, quotient Z2: split or the index-two embedding
        assert_eq!(
            extension_middles(&g("Z2"), &g("Z")),
            BTreeSet::from([g("Z+Z2"), g("Z")])
        );
        assert_eq!(
            extension_middles(&g("Z3"), &g("Z9")),
            BTreeSet::from([g("Z3+Z9"), g("Z27")])
        );
    }

    #[test]
    fn realizable_totals_respect_filtration_order() {
        // deepest piece Z, then Z2 on top: Z or Z+Z2
        let up = realizable_totals(&[g("Z"), g("Z2")]);
        assert!(up.contains(&g("Z")) && up.contains(&g("Z+Z2")));
        // deepest piece Z2, then Z on top: never plain Z
        let down = realizable_totals(&[g("Z2"), g("Z")]);
        assert_eq!(down, BTreeSet::from([g("Z+Z2")]));
    }
}

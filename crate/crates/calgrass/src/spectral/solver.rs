//! Bounded search over the undetermined differentials and unknown slots of
//! a scenario: exact page turning, extension-aware reassembly of each total
//! diagonal, and attribution when no consistent run exists.

use super::page::{
    build_e2, differential_source, differential_target, realizable_totals, turn_page, Page,
    Position,
};
use super::scenario::{Direction, Scenario, SlotValue};
use crate::fgab::group::FgAbGroup;
use crate::fgab::hom::{enumerate_homs, GroupHom};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Free-to-free matrix entries range over -bound..=bound.
    pub bound: i64,
    /// Hard cap on search nodes before giving up.
    pub node_budget: u64,
    /// How many surviving solution classes to keep for map analysis.
    pub survivor_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { bound: 4, node_budget: 1_000_000, survivor_cap: 4096 }
    }
}

/// A differential that takes the same value (up to overall sign) in every
/// surviving run.
#[derive(Clone, Debug, Serialize)]
pub struct ForcedMap {
    pub page: usize,
    pub from: Position,
    pub to: Position,
    pub source: String,
    pub target: String,
    /// Matrix of one representative, sign-normalized for display.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmbiguousMap {
    pub page: usize,
    pub from: Position,
    pub to: Position,
    pub variants: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionFlag {
    pub diagonal: usize,
    /// The assembled total is not the direct sum of the surviving pieces.
    pub nonsplit: bool,
    /// More than one total is compatible with the filtration.
    pub multiple_realizable: bool,
    pub pieces: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Blocked {
    pub position: Position,
    pub page: usize,
    pub diagonal: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub scenario: String,
    pub direction: String,
    pub consistent: bool,
    pub survivor_classes: usize,
    pub nodes_used: u64,
    pub budget_exhausted: bool,
    /// Some enumeration was cut off by the entry bound, so "forced" claims
    /// hold within the searched window only.
    pub search_truncated: bool,
    /// Unknown slots pinned to a single value across all survivors.
    pub resolved: BTreeMap<String, String>,
    /// Unknown slots still carrying several surviving values.
    pub ambiguous_unknowns: BTreeMap<String, Vec<String>>,
    /// Full graded lists when every slot is pinned.
    pub resolved_fiber: Option<Vec<String>>,
    pub resolved_base: Option<Vec<String>>,
    pub resolved_total: Option<Vec<String>>,
    pub forced: Vec<ForcedMap>,
    pub ambiguous_maps: Vec<AmbiguousMap>,
    pub extension_flags: Vec<ExtensionFlag>,
    pub blocked: Option<Blocked>,
    pub audit_ok: bool,
}

struct Survivor {
    assignment: BTreeMap<String, FgAbGroup>,
    maps: BTreeMap<(usize, Position), GroupHom>,
    einf: BTreeMap<Position, FgAbGroup>,
    /// realizable totals intersected with the slot candidates, per diagonal
    diagonal_totals: BTreeMap<usize, BTreeSet<FgAbGroup>>,
    flags: BTreeMap<usize, (bool, bool, Vec<FgAbGroup>)>,
}

struct Search<'a> {
    sc: &'a Scenario,
    opts: &'a SolveOptions,
    r_max: usize,
    nodes: u64,
    budget_hit: bool,
    truncated: bool,
    survivors: Vec<Survivor>,
    seen_keys: BTreeSet<Vec<(usize, Position, Vec<BigInt>)>>,
    overflow_classes: usize,
}

fn slot_known(slot: &SlotValue) -> Option<&FgAbGroup> {
    match slot {
        SlotValue::Known(g) => Some(g),
        SlotValue::Unknown(_) => None,
    }
}

/// Pieces of one total diagonal in filtration order: deepest subgroup
/// first. Homological filtrations grow from p = 0; cohomological ones from
/// p = n.
/// One diagonal of a stabilized page: its nonzero pieces in filtration
/// order and every total group they can assemble to.
#[derive(Clone, Debug)]
pub struct DiagonalAssembly {
    pub n: usize,
    pub pieces: Vec<FgAbGroup>,
    pub totals: Vec<FgAbGroup>,
    /// several groups share this associated graded
    pub ambiguous: bool,
}

/// Read the limit off a stabilized page, diagonal by diagonal. Each entry
/// lists the surviving pieces of p + q = n and the groups a filtration
/// could assemble them to; the flag marks diagonals where the extension
/// problem has several answers.
pub fn assemble_limit(einf: &Page, direction: Direction) -> Vec<DiagonalAssembly> {
    (0..=einf.p_max + einf.q_max)
        .map(|n| {
            let pieces = diagonal_pieces(einf, direction, n);
            let totals: Vec<FgAbGroup> = realizable_totals(&pieces).into_iter().collect();
            let ambiguous = totals.len() > 1;
            DiagonalAssembly { n, pieces, totals, ambiguous }
        })
        .collect()
}

fn diagonal_pieces(page: &Page, direction: Direction, n: usize) -> Vec<FgAbGroup> {
    let mut out = Vec::new();
    let ps: Vec<usize> = match direction {
        Direction::Homological => (0..=n.min(page.p_max)).collect(),
        Direction::Cohomological => (0..=n.min(page.p_max)).rev().collect(),
    };
    for p in ps {
        let q = n - p;
        if q > page.q_max {
            continue;
        }
        let g = page.group((p, q));
        if !g.is_trivial() {
            out.push(g);
        }
    }
    out
}

impl<'a> Search<'a> {
    fn spend(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.opts.node_budget {
            self.budget_hit = true;
        }
        !self.budget_hit
    }

    /// True when position `pos` can still be changed by some differential at
    /// page r or later, judging by group triviality only. Groups never grow
    /// across pages, so a trivial partner stays trivial.
    fn can_still_change(&self, page: &Page, r_from: usize, pos: Position) -> bool {
        for r in r_from..=self.r_max {
            if let Some(t) = differential_target(self.sc.direction, r, pos, page.p_max, page.q_max)
            {
                if !page.group(t).is_trivial() {
                    return true;
                }
            }
            if let Some(s) = differential_source(self.sc.direction, r, pos, page.p_max, page.q_max)
            {
                if !page.group(s).is_trivial() {
                    return true;
                }
            }
        }
        false
    }

    /// Prune: a position that can no longer change, sitting on a diagonal
    /// whose total is known to vanish, must already be trivial.
    fn stable_zero_violation(&self, page: &Page, r_from: usize) -> bool {
        for (&(p, q), _) in &page.groups {
            let n = p + q;
            let must_vanish = self
                .sc
                .total
                .get(n)
                .map_or(false, |slot| slot.candidates().iter().all(|g| g.is_trivial()));
            if must_vanish && !self.can_still_change(page, r_from, (p, q)) {
                return true;
            }
        }
        false
    }

    fn run_page(
        &mut self,
        page: &Page,
        assignment: &BTreeMap<String, FgAbGroup>,
        maps_so_far: &mut BTreeMap<(usize, Position), GroupHom>,
    ) {
        if self.budget_hit {
            return;
        }
        if page.r > self.r_max {
            self.finish(page, assignment, maps_so_far);
            return;
        }
        if self.stable_zero_violation(page, page.r) {
            return;
        }
        let r = page.r;
        // positions with a possibly-nonzero differential on this page
        let mut pairs: Vec<(Position, Position)> = Vec::new();
        for &pos in page.groups.keys() {
            if let Some(t) = differential_target(self.sc.direction, r, pos, page.p_max, page.q_max)
            {
                let src = page.group(pos);
                let tgt = page.group(t);
                if !tgt.is_trivial() && !src.hom(&tgt).is_trivial() {
                    pairs.push((pos, t));
                }
            }
        }
        let mut candidates: Vec<Vec<GroupHom>> = Vec::with_capacity(pairs.len());
        for &(pos, t) in &pairs {
            match enumerate_homs(&page.group(pos), &page.group(t), self.opts.bound) {
                Ok((homs, complete)) => {
                    if !complete {
                        self.truncated = true;
                    }
                    candidates.push(homs);
                }
                Err(_) => {
                    // enumeration too large: treat as truncated, try only zero
                    self.truncated = true;
                    candidates.push(vec![GroupHom::zero(&page.group(pos), &page.group(t))]);
                }
            }
        }
        let mut chosen: BTreeMap<Position, GroupHom> = BTreeMap::new();
        self.choose(page, assignment, maps_so_far, &pairs, &candidates, 0, &mut chosen);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        page: &Page,
        assignment: &BTreeMap<String, FgAbGroup>,
        maps_so_far: &mut BTreeMap<(usize, Position), GroupHom>,
        pairs: &[(Position, Position)],
        candidates: &[Vec<GroupHom>],
        idx: usize,
        chosen: &mut BTreeMap<Position, GroupHom>,
    ) {
        if self.budget_hit {
            return;
        }
        if idx == pairs.len() {
            if !self.spend() {
                return;
            }
            let turned = match turn_page(page, self.sc.direction, chosen) {
                Ok(t) => t,
                Err(_) => return,
            };
            let added: Vec<(usize, Position)> = chosen
                .iter()
                .filter(|(_, h)| !h.is_zero())
                .map(|(&pos, h)| {
                    maps_so_far.insert((page.r, pos), h.clone());
                    (page.r, pos)
                })
                .collect();
            self.run_page(&turned, assignment, maps_so_far);
            for k in added {
                maps_so_far.remove(&k);
            }
            return;
        }
        let (pos, tgt_pos) = pairs[idx];
        for cand in &candidates[idx] {
            if !self.spend() {
                return;
            }
            // differentials on one page compose to zero
            let mut ok = true;
            if let Some(src_pos) =
                differential_source(self.sc.direction, page.r, pos, page.p_max, page.q_max)
            {
                if let Some(prev) = chosen.get(&src_pos) {
                    if let Ok(c) = cand.compose(prev) {
                        ok = c.is_zero();
                    }
                }
            }
            if ok {
                if let Some(next) = chosen.get(&tgt_pos) {
                    if let Ok(c) = next.compose(cand) {
                        ok = c.is_zero();
                    }
                }
            }
            if !ok {
                continue;
            }
            chosen.insert(pos, cand.clone());
            self.choose(page, assignment, maps_so_far, pairs, candidates, idx + 1, chosen);
            chosen.remove(&pos);
            if self.budget_hit {
                return;
            }
        }
    }

    fn finish(
        &mut self,
        einf: &Page,
        assignment: &BTreeMap<String, FgAbGroup>,
        maps: &BTreeMap<(usize, Position), GroupHom>,
    ) {
        let n_max = einf.p_max + einf.q_max;
        let mut diagonal_totals = BTreeMap::new();
        let mut flags = BTreeMap::new();
        for n in 0..=n_max {
            let pieces = diagonal_pieces(einf, self.sc.direction, n);
            let realizable = realizable_totals(&pieces);
            let inter: BTreeSet<FgAbGroup> = match self.sc.total.get(n) {
                Some(slot) => {
                    let allowed: BTreeSet<&FgAbGroup> = slot.candidates().iter().collect();
                    realizable.into_iter().filter(|g| allowed.contains(g)).collect()
                }
                None => realizable,
            };
            if inter.is_empty() {
                return;
            }
            if pieces.len() >= 2 {
                let sum = pieces
                    .iter()
                    .fold(FgAbGroup::trivial(), |acc, p| acc.direct_sum(p));
                let nonsplit = !inter.contains(&sum);
                let multiple = inter.len() > 1;
                if nonsplit || multiple {
                    flags.insert(n, (nonsplit, multiple, pieces.clone()));
                }
            }
            diagonal_totals.insert(n, inter);
        }
        // deduplicate by the sign class of every chosen map
        let key: Vec<(usize, Position, Vec<BigInt>)> = maps
            .iter()
            .map(|(&(r, pos), h)| (r, pos, h.sign_canonical_key()))
            .collect();
        if !self.seen_keys.insert(key) {
            return;
        }
        if self.survivors.len() >= self.opts.survivor_cap {
            self.overflow_classes += 1;
            return;
        }
        self.survivors.push(Survivor {
            assignment: assignment.clone(),
            maps: maps.clone(),
            einf: einf.groups.clone(),
            diagonal_totals,
            flags,
        });
    }
}

fn display_matrix(h: &GroupHom) -> Vec<Vec<String>> {
    // prefer the sign variant whose first nonzero entry is positive
    let flat = |m: &crate::fgab::matrix::IntMatrix| -> Vec<BigInt> {
        let mut v = Vec::new();
        for i in 0..m.rows {
            for j in 0..m.cols {
                v.push(m.get(i, j).clone());
            }
        }
        v
    };
    let pos_first = |v: &[BigInt]| -> bool {
        v.iter().find(|x| !x.is_zero()).map_or(true, |x| x > &BigInt::zero())
    };
    let neg = h.negated();
    let use_self = pos_first(&flat(&h.matrix)) || !pos_first(&flat(&neg.matrix));
    let m = if use_self { &h.matrix } else { &neg.matrix };
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn group_order(g: &FgAbGroup) -> Option<BigUint> {
    g.order()
}

/// Static lower bound: on a diagonal that must vanish, a group whose order
/// or rank exceeds everything its differentials can ever hit or absorb can
/// never die.
fn static_block(
    sc: &Scenario,
    fiber: &[FgAbGroup],
    base: &[FgAbGroup],
    r_max: usize,
) -> Option<Blocked> {
    let e2 = build_e2(sc.direction, fiber, base);
    let n_max = e2.p_max + e2.q_max;
    for n in 0..=n_max {
        let must_vanish = sc
            .total
            .get(n)
            .map_or(false, |slot| slot.candidates().iter().all(|g| g.is_trivial()));
        if !must_vanish {
            continue;
        }
        for p in 0..=n.min(e2.p_max) {
            let q = n - p;
            if q > e2.q_max {
                continue;
            }
            let g = e2.group((p, q));
            if g.is_trivial() {
                continue;
            }
            let mut out_ranks = 0usize;
            let mut in_ranks = 0usize;
            let mut capacity = BigUint::one();
            let mut all_finite = true;
            let mut last_out_page = None;
            for r in 2..=r_max {
                if let Some(t) = differential_target(sc.direction, r, (p, q), e2.p_max, e2.q_max) {
                    let tg = e2.group(t);
                    if !tg.is_trivial() {
                        last_out_page = Some(r);
                        out_ranks += tg.rank;
                        match group_order(&tg) {
                            Some(o) => capacity *= o,
                            None => all_finite = false,
                        }
                    }
                }
                if let Some(s) = differential_source(sc.direction, r, (p, q), e2.p_max, e2.q_max) {
                    let sg = e2.group(s);
                    if !sg.is_trivial() {
                        in_ranks += sg.rank;
                        match group_order(&sg) {
                            Some(o) => capacity *= o,
                            None => all_finite = false,
                        }
                    }
                }
            }
            let rank_excess = g.rank > out_ranks + in_ranks;
            let order_excess = match group_order(&g) {
                Some(o) if all_finite => o > capacity,
                _ => false,
            };
            if rank_excess || order_excess {
                let detail = if rank_excess {
                    format!(
                        "free rank {} at ({}, {}) exceeds the combined rank {} of every group \
                         its differentials can reach, yet the degree-{} total must vanish",
                        g.rank,
                        p,
                        q,
                        out_ranks + in_ranks,
                        n
                    )
                } else {
                    format!(
                        "order {} at ({}, {}) exceeds the combined capacity {} of every group \
                         its differentials can reach, yet the degree-{} total must vanish",
                        group_order(&g).unwrap(),
                        p,
                        q,
                        capacity,
                        n
                    )
                };
                return Some(Blocked {
                    position: (p, q),
                    page: last_out_page.unwrap_or(2),
                    diagonal: n,
                    detail,
                });
            }
        }
    }
    None
}

pub fn solve(sc: &Scenario, opts: &SolveOptions) -> Result<SolveReport> {
    if !sc.base_simply_connected {
        return Err(Error::Exact(
            "scenario must assert a simply connected base for the page formulas to apply".into(),
        ));
    }
    if sc.fiber.is_empty() || sc.base.is_empty() {
        return Err(Error::Parse("fiber and base must be nonempty".into()));
    }
    let r_max = sc.base.len() + sc.fiber.len() + 2;
    let unknowns = sc.structural_unknowns();
    let mut search = Search {
        sc,
        opts,
        r_max,
        nodes: 0,
        budget_hit: false,
        truncated: false,
        survivors: Vec::new(),
        seen_keys: BTreeSet::new(),
        overflow_classes: 0,
    };
    let mut blocked: Option<Blocked> = None;

    // odometer over candidate choices for fiber/base unknowns
    let radix: Vec<usize> = unknowns
        .iter()
        .map(|&(list, i)| {
            let slot = if list == "fiber" { &sc.fiber[i] } else { &sc.base[i] };
            slot.candidates().len()
        })
        .collect();
    let mut counter = vec![0usize; unknowns.len()];
    loop {
        let mut fiber: Vec<FgAbGroup> = Vec::with_capacity(sc.fiber.len());
        let mut base: Vec<FgAbGroup> = Vec::with_capacity(sc.base.len());
        let mut assignment = BTreeMap::new();
        for (i, slot) in sc.fiber.iter().enumerate() {
            match slot_known(slot) {
                Some(g) => fiber.push(g.clone()),
                None => {
                    let u = unknowns.iter().position(|&(l, j)| l == "fiber" && j == i).unwrap();
                    let g = slot.candidates()[counter[u]].clone();
                    assignment.insert(format!("fiber[{}]", i), g.clone());
                    fiber.push(g);
                }
            }
        }
        for (i, slot) in sc.base.iter().enumerate() {
            match slot_known(slot) {
                Some(g) => base.push(g.clone()),
                None => {
                    let u = unknowns.iter().position(|&(l, j)| l == "base" && j == i).unwrap();
                    let g = slot.candidates()[counter[u]].clone();
                    assignment.insert(format!("base[{}]", i), g.clone());
                    base.push(g);
                }
            }
        }

        match static_block(sc, &fiber, &base, r_max) {
            Some(b) => {
                if blocked.is_none() {
                    blocked = Some(b);
                }
            }
            None => {
                let e2 = build_e2(sc.direction, &fiber, &base);
                let mut maps = BTreeMap::new();
                search.run_page(&e2, &assignment, &mut maps);
            }
        }

        // advance the odometer
        let mut k = counter.len();
        loop {
            if k == 0 {
                return Ok(aggregate(sc, &search, blocked));
            }
            k -= 1;
            counter[k] += 1;
            if counter[k] < radix[k] {
                break;
            }
            counter[k] = 0;
        }
    }
}

fn aggregate(sc: &Scenario, search: &Search, blocked: Option<Blocked>) -> SolveReport {
    let survivors = &search.survivors;
    let consistent = !survivors.is_empty();

    let mut resolved = BTreeMap::new();
    let mut ambiguous_unknowns = BTreeMap::new();
    // structural unknowns
    for &(list, i) in &sc.structural_unknowns() {
        let key = format!("{}[{}]", list, i);
        let values: BTreeSet<&FgAbGroup> =
            survivors.iter().filter_map(|s| s.assignment.get(&key)).collect();
        match values.len() {
            0 => {}
            1 => {
                resolved.insert(key, values.into_iter().next().unwrap().to_string());
            }
            _ => {
                ambiguous_unknowns
                    .insert(key, values.into_iter().map(|g| g.to_string()).collect());
            }
        }
    }
    // total slots
    for (n, slot) in sc.total.iter().enumerate() {
        if !slot.is_unknown() {
            continue;
        }
        let key = format!("total[{}]", n);
        let mut values: BTreeSet<FgAbGroup> = BTreeSet::new();
        for s in survivors {
            if let Some(set) = s.diagonal_totals.get(&n) {
                values.extend(set.iter().cloned());
            } else {
                // diagonal beyond the window assembles to the trivial group
                values.insert(FgAbGroup::trivial());
            }
        }
        match values.len() {
            0 => {}
            1 => {
                resolved.insert(key, values.into_iter().next().unwrap().to_string());
            }
            _ => {
                ambiguous_unknowns
                    .insert(key, values.into_iter().map(|g| g.to_string()).collect());
            }
        }
    }

    let full_list = |what: &str, slots: &[SlotValue]| -> Option<Vec<String>> {
        slots
            .iter()
            .enumerate()
            .map(|(i, slot)| match slot {
                SlotValue::Known(g) => Some(g.to_string()),
                SlotValue::Unknown(_) => resolved.get(&format!("{}[{}]", what, i)).cloned(),
            })
            .collect()
    };
    let resolved_fiber = full_list("fiber", &sc.fiber);
    let resolved_base = full_list("base", &sc.base);
    let resolved_total = full_list("total", &sc.total);

    // maps shared by every survivor, up to sign
    let mut forced = Vec::new();
    let mut ambiguous_maps = Vec::new();
    if consistent {
        let sites: BTreeSet<(usize, Position)> = survivors
            .iter()
            .flat_map(|s| s.maps.keys().cloned())
            .collect();
        for (r, pos) in sites {
            let keys: BTreeSet<Option<Vec<BigInt>>> = survivors
                .iter()
                .map(|s| s.maps.get(&(r, pos)).map(|h| h.sign_canonical_key()))
                .collect();
            let rep = survivors
                .iter()
                .find_map(|s| s.maps.get(&(r, pos)))
                .expect("site came from a survivor");
            let to = match sc.direction {
                Direction::Homological => (pos.0 - r, pos.1 + r - 1),
                Direction::Cohomological => (pos.0 + r, pos.1 + 1 - r),
            };
            if keys.len() == 1 && !keys.contains(&None) {
                forced.push(ForcedMap {
                    page: r,
                    from: pos,
                    to,
                    source: rep.source.to_string(),
                    target: rep.target.to_string(),
                    matrix: display_matrix(rep),
                });
            } else {
                ambiguous_maps.push(AmbiguousMap { page: r, from: pos, to, variants: keys.len() });
            }
        }
    }

    // union of extension flags over survivors
    let mut flag_map: BTreeMap<usize, (bool, bool, Vec<FgAbGroup>)> = BTreeMap::new();
    for s in survivors {
        for (&n, (nonsplit, multiple, pieces)) in &s.flags {
            let e = flag_map.entry(n).or_insert((false, false, pieces.clone()));
            e.0 |= *nonsplit;
            e.1 |= *multiple;
        }
    }
    let extension_flags = flag_map
        .into_iter()
        .map(|(n, (nonsplit, multiple, pieces))| ExtensionFlag {
            diagonal: n,
            nonsplit,
            multiple_realizable: multiple,
            pieces: pieces.iter().map(|g| g.to_string()).collect(),
        })
        .collect();

    let audit_ok = if let Some(s) = survivors.first() { audit(sc, s) } else { !consistent };

    SolveReport {
        scenario: sc.name.clone(),
        direction: match sc.direction {
            Direction::Homological => "homological".into(),
            Direction::Cohomological => "cohomological".into(),
        },
        consistent,
        survivor_classes: survivors.len() + search.overflow_classes,
        nodes_used: search.nodes,
        budget_exhausted: search.budget_hit,
        search_truncated: search.truncated,
        resolved,
        ambiguous_unknowns,
        resolved_fiber,
        resolved_base,
        resolved_total,
        forced,
        ambiguous_maps,
        extension_flags,
        blocked: if consistent { None } else { blocked },
        audit_ok,
    }
}

/// Replay one survivor from its second page and confirm the same limit and
/// a nonempty assembly on every diagonal.
fn audit(sc: &Scenario, s: &Survivor) -> bool {
    let fiber: Option<Vec<FgAbGroup>> = sc
        .fiber
        .iter()
        .enumerate()
        .map(|(i, slot)| match slot {
            SlotValue::Known(g) => Some(g.clone()),
            SlotValue::Unknown(_) => s.assignment.get(&format!("fiber[{}]", i)).cloned(),
        })
        .collect();
    let base: Option<Vec<FgAbGroup>> = sc
        .base
        .iter()
        .enumerate()
        .map(|(i, slot)| match slot {
            SlotValue::Known(g) => Some(g.clone()),
            SlotValue::Unknown(_) => s.assignment.get(&format!("base[{}]", i)).cloned(),
        })
        .collect();
    let (Some(fiber), Some(base)) = (fiber, base) else {
        return false;
    };
    let mut page = build_e2(sc.direction, &fiber, &base);
    let r_max = sc.base.len() + sc.fiber.len() + 2;
    while page.r <= r_max {
        let chosen: BTreeMap<Position, GroupHom> = s
            .maps
            .iter()
            .filter(|(&(r, _), _)| r == page.r)
            .map(|(&(_, pos), h)| (pos, h.clone()))
            .collect();
        page = match turn_page(&page, sc.direction, &chosen) {
            Ok(p) => p,
            Err(_) => return false,
        };
    }
    if page.groups != s.einf {
        return false;
    }
    for n in 0..=(page.p_max + page.q_max) {
        let pieces = diagonal_pieces(&page, sc.direction, n);
        let realizable = realizable_totals(&pieces);
        match sc.total.get(n) {
            Some(slot) => {
                if !slot.candidates().iter().any(|g| realizable.contains(g)) {
                    return false;
                }
            }
            None => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_assembly_reads_diagonals_off_a_stable_page() {
        use crate::fgab::group::parse_group;
        // the frame-bundle page with only zero differentials: E2 = Einf,
        // and every diagonal holds at most one piece
        let fiber: Vec<FgAbGroup> =
            ["Z", "0", "0", "Z2", "0", "0", "0", "Z"].iter().map(|s| parse_group(s).unwrap()).collect();
        let base: Vec<FgAbGroup> =
            ["Z", "0", "0", "0", "0", "Z"].iter().map(|s| parse_group(s).unwrap()).collect();
        let e2 = build_e2(Direction::Cohomological, &fiber, &base);
        let diags = assemble_limit(&e2, Direction::Cohomological);
        let want = ["Z", "0", "0", "0", "Z2", "Z", "0", "Z", "0", "Z2", "0", "0", "Z"];
        assert_eq!(diags.len(), want.len());
        for (d, w) in diags.iter().zip(want) {
            assert!(!d.ambiguous);
            assert_eq!(d.totals.len(), 1);
            assert_eq!(d.totals[0], parse_group(w).unwrap());
        }
        // two Z2 pieces on one diagonal assemble two ways
        let mut groups = BTreeMap::new();
        groups.insert((0usize, 2usize), parse_group("Z2").unwrap());
        groups.insert((2usize, 0usize), parse_group("Z2").unwrap());
        let page = Page { r: 9, groups, p_max: 2, q_max: 2 };
        let diags = assemble_limit(&page, Direction::Homological);
        assert!(diags[2].ambiguous);
        let totals: Vec<String> = diags[2].totals.iter().map(|g| g.to_string()).collect();
        assert_eq!(totals, ["Z2^2", "Z4"]);
        // empty diagonals give the trivial group, unambiguously
        assert!(!diags[1].ambiguous);
        assert!(diags[1].totals[0].is_trivial());
    }

    #[test]
    fn circle_bundle_over_s2_forces_the_euler_differential() {
        // S1 -> S3 -> S2: d2 (2,0) -> (0,1) must be an isomorphism
        let text = r#"{
            "name": "hopf",
            "direction": "homological",
            "fiber": ["Z", "Z"],
            "base": ["Z", "0", "Z"],
            "total": ["Z", "0", "0", "Z"],
            "base_simply_connected": true
        }"#;
        let sc = Scenario::from_json(text).unwrap();
        let report = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(report.consistent);
        assert_eq!(report.survivor_classes, 1);
        let f = report
            .forced
            .iter()
            .find(|f| f.page == 2 && f.from == (2, 0))
            .expect("transgression should be forced");
        assert_eq!(f.matrix, vec![vec!["1".to_string()]]);
        assert!(report.audit_ok);
    }

    #[test]
    fn unkillable_class_is_attributed() {
        // fiber S1 x something with H_1 = Z2 over a point-like base: the
        // Z2 in degree 1 has nowhere to go but the total claims H_1 = 0
        let text = r#"{
            "name": "stuck",
            "direction": "homological",
            "fiber": ["Z", "Z2"],
            "base": ["Z"],
            "total": ["Z", "0"],
            "base_simply_connected": true
        }"#;
        let sc = Scenario::from_json(text).unwrap();
        let report = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(!report.consistent);
        let b = report.blocked.expect("should attribute the blockage");
        assert_eq!(b.position, (0, 1));
        assert_eq!(b.diagonal, 1);
    }

    #[test]
    fn unknown_total_is_resolved_from_the_limit() {
        // S3 -> S7-like total -> S4 forces H_7 and kills everything else
        let text = r#"{
            "name": "quaternionic",
            "direction": "homological",
            "fiber": ["Z", "0", "0", "Z"],
            "base": ["Z", "0", "0", "0", "Z"],
            "total": ["Z", "0", "0", "Z2",
                      {"unknown": ["0", "Z", "Z2"]},
                      {"unknown": ["0", "Z", "Z2"]},
                      {"unknown": ["0", "Z", "Z2"]},
                      {"unknown": ["0", "Z", "Z2"]}],
            "base_simply_connected": true
        }"#;
        let sc = Scenario::from_json(text).unwrap();
        let report = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(report.consistent);
        assert_eq!(report.resolved.get("total[4]").unwrap(), "0");
        assert_eq!(report.resolved.get("total[7]").unwrap(), "Z");
        let f = report
            .forced
            .iter()
            .find(|f| f.page == 4 && f.from == (4, 0))
            .expect("degree-four differential should be forced");
        assert_eq!(f.matrix, vec![vec!["2".to_string()]]);
    }
}

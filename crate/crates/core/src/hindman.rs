//! Finite-scale monochromatic finite-sums searches.
//!
//! A witness is a bijective sequence `b_1, …, b_k` whose whole finite-sums
//! set has one color. Searches over a universe (a finite list of elements)
//! also demand that every sum stays inside the universe, since a finite run
//! only fixes colors there.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::fs::{FsError, FsSet, SequencePrefix, SumsequenceRecord};
use crate::index::{shortlex_masks, IndexSet};
use crate::search::{ordered_search, Budget, SearchEnd, SearchResult};
use crate::semigroup::{Element, Semigroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoFsWitness {
    /// Index sets over the base sequence (singletons for universe searches).
    pub sumsequence: SumsequenceRecord,
    pub fs: FsSet,
    pub color: u32,
}

impl MonoFsWitness {
    /// Re-derives everything from scratch: the derived terms from `base`,
    /// bijectivity, the finite-sums set, every color, and (when `closed`)
    /// membership of every sum in `base`.
    pub fn verify(&self, sg: &Semigroup, base: &[Element], coloring: &Coloring, closed: bool) -> Result<(), String> {
        let base_prefix = SequencePrefix::new(sg, base.to_vec()).map_err(|e| e.to_string())?;
        let sets = &self.sumsequence.index_sets;
        if sets.is_empty() || sets.len() != self.sumsequence.elements.len() {
            return Err("sumsequence is empty or inconsistent".into());
        }
        if let Some(w) = sets.windows(2).find(|w| !w[0].precedes(&w[1])) {
            return Err(format!("index set {} does not precede {}", w[0], w[1]));
        }
        for (f, b) in sets.iter().zip(&self.sumsequence.elements) {
            let sum = base_prefix.sum_over(f).map_err(|e| e.to_string())?;
            if &sum != b {
                return Err(format!("sum over {f} is {sum}, not {b}"));
            }
        }
        let derived = SequencePrefix::new(sg, self.sumsequence.elements.clone()).map_err(|e| e.to_string())?;
        if !derived.is_bijective() {
            return Err("generating terms are not pairwise distinct".into());
        }
        let fs = derived.fs_set().map_err(|e| e.to_string())?;
        let recorded: HashSet<&Element> = self.fs.elements().collect();
        let actual: HashSet<&Element> = fs.elements().collect();
        if recorded != actual {
            return Err("recorded finite-sums set differs from the recomputed one".into());
        }
        for (e, w) in self.fs.entries() {
            let sum = derived.sum_over(w).map_err(|err| err.to_string())?;
            if &sum != e {
                return Err(format!("witness {w} sums to {sum}, not {e}"));
            }
        }
        let members: HashSet<&Element> = base.iter().collect();
        for e in fs.elements() {
            let c = coloring.color(sg, e);
            if c != self.color {
                return Err(format!("{e} has color {c}, not {}", self.color));
            }
            if closed && !members.contains(e) {
                return Err(format!("{e} lies outside the universe"));
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> &[Element] {
        &self.sumsequence.elements
    }
}

/// Depth-first search over increasing universe positions.
struct UniverseSearch<'a> {
    sg: &'a Semigroup,
    values: &'a [Element],
    members: HashSet<&'a Element>,
    color_of: &'a (dyn Fn(&Element) -> u32 + Sync),
    accept: &'a (dyn Fn(u32) -> bool + Sync),
    k: usize,
}

impl UniverseSearch<'_> {
    fn stratum(&self, first: usize, budget: &mut Budget) -> Option<Vec<usize>> {
        if !budget.tick() {
            return None;
        }
        let b = &self.values[first];
        let c = (self.color_of)(b);
        if !(self.accept)(c) {
            return None;
        }
        let mut chosen = vec![first];
        let mut fs = vec![b.clone()];
        if self.extend(&mut chosen, &mut fs, c, budget) {
            Some(chosen)
        } else {
            None
        }
    }

    fn extend(&self, chosen: &mut Vec<usize>, fs: &mut Vec<Element>, c: u32, budget: &mut Budget) -> bool {
        if chosen.len() == self.k {
            return true;
        }
        let last = *chosen.last().expect("nonempty");
        for p in last + 1..self.values.len() {
            if !budget.tick() {
                return false;
            }
            let b = &self.values[p];
            if chosen.iter().any(|&q| &self.values[q] == b) {
                continue;
            }
            let Some(fresh) = self.new_sums(fs, b, c) else { continue };
            let mark = fs.len();
            let seen: HashSet<Element> = fs.iter().cloned().collect();
            let mut added: HashSet<Element> = HashSet::new();
            for e in fresh {
                if !seen.contains(&e) && added.insert(e.clone()) {
                    fs.push(e);
                }
            }
            chosen.push(p);
            if self.extend(chosen, fs, c, budget) {
                return true;
            }
            chosen.pop();
            fs.truncate(mark);
            if budget.exhausted() {
                return false;
            }
        }
        false
    }

    /// `{b} ∪ (fs + b)` if every one of them is in the universe with color `c`.
    fn new_sums(&self, fs: &[Element], b: &Element, c: u32) -> Option<Vec<Element>> {
        let mut out = Vec::with_capacity(fs.len() + 1);
        out.push(b.clone());
        for s in fs {
            out.push(self.sg.add_unchecked(s, b).ok()?);
        }
        out.iter().all(|e| self.members.contains(e) && (self.color_of)(e) == c).then_some(out)
    }
}

fn universe_search(
    sg: &Semigroup,
    universe: &[Element],
    color_of: &(dyn Fn(&Element) -> u32 + Sync),
    accept: &(dyn Fn(u32) -> bool + Sync),
    k: usize,
    budget: u64,
    workers: usize,
) -> SearchResult<Vec<usize>> {
    let ctx = UniverseSearch { sg, values: universe, members: universe.iter().collect(), color_of, accept, k };
    ordered_search(universe.len(), budget, workers, |s, b| ctx.stratum(s, b))
}

fn witness_from_positions(sg: &Semigroup, universe: &[Element], positions: &[usize], color: u32) -> Result<MonoFsWitness, FsError> {
    let elements: Vec<Element> = positions.iter().map(|&p| universe[p].clone()).collect();
    let fs = SequencePrefix::new(sg, elements.clone())?.fs_set()?;
    Ok(MonoFsWitness {
        sumsequence: SumsequenceRecord {
            index_sets: positions.iter().map(|&p| IndexSet::singleton(p + 1)).collect(),
            elements,
        },
        fs,
        color,
    })
}

/// The least (by positions) bijective `b_1, …, b_k` from the universe with
/// `FS(b)` inside the universe and monochromatic.
pub fn find_mono_fs(
    universe: &SequencePrefix<'_>,
    coloring: &Coloring,
    k: usize,
    budget: u64,
    workers: usize,
) -> Result<SearchResult<MonoFsWitness>, FsError> {
    let sg = universe.semigroup();
    let color_of = |e: &Element| coloring.color(sg, e);
    let result = universe_search(sg, universe.elements(), &color_of, &|_| true, k.max(1), budget, workers);
    lift(result, |pos| {
        let c = coloring.color(sg, &universe.elements()[pos[0]]);
        witness_from_positions(sg, universe.elements(), &pos, c)
    })
}

fn lift<T, U>(r: SearchResult<T>, f: impl FnOnce(T) -> Result<U, FsError>) -> Result<SearchResult<U>, FsError> {
    Ok(SearchResult { value: r.value.map(f).transpose()?, end: r.end, nodes: r.nodes })
}

/// The least sumsequence `a_{F_1}, …, a_{F_k}` of `base` (blocks in
/// shortlex order, level by level) with bijective terms and monochromatic
/// finite sums.
pub fn find_mono_fs_within(
    base: &SequencePrefix<'_>,
    coloring: &Coloring,
    k: usize,
    budget: u64,
    workers: usize,
) -> Result<SearchResult<MonoFsWitness>, FsError> {
    let sg = base.semigroup();
    let n = base.len();
    if n > base.cap() {
        return Err(FsError::PrefixTooLong { len: n, cap: base.cap() });
    }
    let k = k.max(1);
    let blocks: Vec<Vec<u64>> = (0..=n).map(shortlex_masks).collect();
    let first_blocks = &blocks[n];
    let ctx = WithinSearch { sg, base: base.elements(), coloring, blocks: &blocks, k };
    let result = ordered_search(first_blocks.len(), budget, workers, |s, b| ctx.stratum(first_blocks[s], b));
    lift(result, |found| {
        let sets: Vec<IndexSet> = found.iter().map(|&m| IndexSet::from_mask(m)).collect();
        let elements = sets.iter().map(|f| base.sum_over(f)).collect::<Result<Vec<_>, _>>()?;
        let fs = SequencePrefix::new(sg, elements.clone())?.fs_set()?;
        let color = coloring.color(sg, &elements[0]);
        Ok(MonoFsWitness { sumsequence: SumsequenceRecord { index_sets: sets, elements }, fs, color })
    })
}

struct WithinSearch<'a> {
    sg: &'a Semigroup,
    base: &'a [Element],
    coloring: &'a Coloring,
    blocks: &'a [Vec<u64>],
    k: usize,
}

impl WithinSearch<'_> {
    fn block_sum(&self, mask: u64) -> Option<Element> {
        let mut acc: Option<Element> = None;
        for j in 0..self.base.len() {
            if mask >> j & 1 == 1 {
                acc = Some(match acc {
                    None => self.base[j].clone(),
                    Some(a) => self.sg.add_unchecked(&a, &self.base[j]).ok()?,
                });
            }
        }
        acc
    }

    fn stratum(&self, first: u64, budget: &mut Budget) -> Option<Vec<u64>> {
        if !budget.tick() {
            return None;
        }
        let b = self.block_sum(first)?;
        let c = self.coloring.color(self.sg, &b);
        let mut chosen = vec![first];
        let mut terms = vec![b.clone()];
        let mut fs = vec![b];
        self.extend(&mut chosen, &mut terms, &mut fs, c, budget).then_some(chosen)
    }

    fn extend(&self, chosen: &mut Vec<u64>, terms: &mut Vec<Element>, fs: &mut Vec<Element>, c: u32, budget: &mut Budget) -> bool {
        if chosen.len() == self.k {
            return true;
        }
        let n = self.base.len();
        let next = crate::index::mask_max(*chosen.last().expect("nonempty"));
        if next >= n {
            return false;
        }
        for &rel in &self.blocks[n - next] {
            if !budget.tick() {
                return false;
            }
            let mask = rel << next;
            let Some(b) = self.block_sum(mask) else { continue };
            if terms.contains(&b) {
                continue;
            }
            let mut fresh = vec![b.clone()];
            for s in fs.iter() {
                match self.sg.add_unchecked(s, &b) {
                    Ok(v) => fresh.push(v),
                    Err(_) => continue,
                }
            }
            if fresh.len() != fs.len() + 1 || fresh.iter().any(|e| self.coloring.color(self.sg, e) != c) {
                continue;
            }
            let mark = fs.len();
            let seen: HashSet<Element> = fs.iter().cloned().collect();
            let mut added = HashSet::new();
            for e in fresh {
                if !seen.contains(&e) && added.insert(e.clone()) {
                    fs.push(e);
                }
            }
            chosen.push(mask);
            terms.push(b);
            if self.extend(chosen, terms, fs, c, budget) {
                return true;
            }
            chosen.pop();
            terms.pop();
            fs.truncate(mark);
            if budget.exhausted() {
                return false;
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ThresholdOutcome {
    /// Every coloring of the first `threshold` elements has a witness; the
    /// avoider colors the first `threshold - 1` without one.
    Threshold { threshold: usize, avoider: Vec<u32> },
    /// Some coloring of the whole universe avoids witnesses.
    NotReached { avoider: Vec<u32> },
    BudgetExhausted { at: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub k: usize,
    pub colors: u32,
    pub max_n: usize,
    pub universe: Vec<Element>,
    pub outcome: ThresholdOutcome,
    pub nodes: u64,
}

/// Finite-sums position sets of every bijective `k`-term increasing
/// selection whose sums all lie in the universe; grouped by largest position.
fn fs_constraints(sg: &Semigroup, universe: &[Element], k: usize) -> Vec<Vec<u64>> {
    let n = universe.len();
    let pos_of: std::collections::HashMap<&Element, usize> =
        universe.iter().enumerate().rev().map(|(i, e)| (e, i)).collect();
    let mut by_max: Vec<HashSet<u64>> = vec![HashSet::new(); n];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        sg: &Semigroup,
        universe: &[Element],
        pos_of: &std::collections::HashMap<&Element, usize>,
        k: usize,
        chosen: &mut Vec<usize>,
        fs: &mut Vec<Element>,
        mask: u64,
        by_max: &mut [HashSet<u64>],
    ) {
        if chosen.len() == k {
            let top = crate::index::mask_max(mask) - 1;
            by_max[top].insert(mask);
            return;
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        'cand: for p in start..universe.len() {
            let b = &universe[p];
            if chosen.iter().any(|&q| &universe[q] == b) {
                continue;
            }
            let mut fresh = vec![b.clone()];
            for s in fs.iter() {
                match sg.add_unchecked(s, b) {
                    Ok(v) => fresh.push(v),
                    Err(_) => continue 'cand,
                }
            }
            let mut m = mask;
            for e in &fresh {
                match pos_of.get(e) {
                    Some(&q) => m |= 1 << q,
                    None => continue 'cand,
                }
            }
            let mark = fs.len();
            fs.extend(fresh);
            chosen.push(p);
            rec(sg, universe, pos_of, k, chosen, fs, m, by_max);
            chosen.pop();
            fs.truncate(mark);
        }
    }

    rec(sg, universe, &pos_of, k, &mut Vec::new(), &mut Vec::new(), 0, &mut by_max);
    by_max
        .into_iter()
        .map(|s| {
            let mut v: Vec<u64> = s.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Colorings of `0..n` that avoid every constraint, in lexicographic order,
/// with colors introduced in increasing order.
struct AvoiderSearch<'a> {
    constraints: &'a [Vec<u64>],
    n: usize,
    colors: u32,
}

impl AvoiderSearch<'_> {
    fn fits(&self, assignment: &[u32], classes: &[u64], i: usize) -> bool {
        let c = assignment[i] as usize;
        self.constraints[i].iter().all(|&m| m & !classes[c] != 0)
    }

    /// Lexicographically least canonical prefixes of length `depth`.
    fn prefixes(&self, depth: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut classes = vec![0u64; self.colors as usize];
        self.collect(depth, &mut cur, &mut classes, &mut out);
        out
    }

    fn collect(&self, depth: usize, cur: &mut Vec<u32>, classes: &mut [u64], out: &mut Vec<Vec<u32>>) {
        if cur.len() == depth {
            out.push(cur.clone());
            return;
        }
        let i = cur.len();
        let top = cur.iter().copied().max().map_or(0, |m| m + 1).min(self.colors - 1);
        for c in 0..=top {
            cur.push(c);
            classes[c as usize] |= 1 << i;
            if self.fits(cur, classes, i) {
                self.collect(depth, cur, classes, out);
            }
            classes[c as usize] &= !(1 << i);
            cur.pop();
        }
    }

    fn complete(&self, prefix: &[u32], budget: &mut Budget) -> Option<Vec<u32>> {
        let mut cur = prefix.to_vec();
        let mut classes = vec![0u64; self.colors as usize];
        for (i, &c) in prefix.iter().enumerate() {
            classes[c as usize] |= 1 << i;
        }
        self.dfs(&mut cur, &mut classes, budget).then_some(cur)
    }

    fn dfs(&self, cur: &mut Vec<u32>, classes: &mut [u64], budget: &mut Budget) -> bool {
        if cur.len() == self.n {
            return true;
        }
        let i = cur.len();
        let top = cur.iter().copied().max().map_or(0, |m| m + 1).min(self.colors - 1);
        for c in 0..=top {
            if !budget.tick() {
                return false;
            }
            cur.push(c);
            classes[c as usize] |= 1 << i;
            if self.fits(cur, classes, i) && self.dfs(cur, classes, budget) {
                return true;
            }
            classes[c as usize] &= !(1 << i);
            cur.pop();
            if budget.exhausted() {
                return false;
            }
        }
        false
    }
}

/// Least `N ≤ max_n` such that every `r`-coloring of the first `N`
/// enumerated elements has a monochromatic `k`-term witness.
pub fn exhaustive_threshold(
    sg: &Semigroup,
    k: usize,
    colors: u32,
    max_n: usize,
    budget: u64,
    workers: usize,
) -> Result<ThresholdReport, FsError> {
    if colors == 0 || k == 0 {
        return Err(FsError::InvalidSchedule("threshold needs k >= 1 and at least one color".into()));
    }
    if max_n > 63 {
        return Err(FsError::PrefixTooLong { len: max_n, cap: 63 });
    }
    let universe = sg.enumerate(max_n);
    let constraints = fs_constraints(sg, &universe, k);
    let mut nodes = 0u64;
    let mut previous: Vec<u32> = Vec::new();
    for n in 1..=universe.len() {
        let search = AvoiderSearch { constraints: &constraints, n, colors };
        let prefixes = search.prefixes(n.min(4));
        let result = ordered_search(prefixes.len(), budget.saturating_sub(nodes), workers, |s, b| {
            search.complete(&prefixes[s], b)
        });
        nodes += result.nodes;
        match (result.value, result.end) {
            (Some(avoider), _) => previous = avoider,
            (None, SearchEnd::BudgetExhausted) => {
                return Ok(report(k, colors, max_n, universe, ThresholdOutcome::BudgetExhausted { at: n }, nodes));
            }
            (None, _) => {
                let outcome = ThresholdOutcome::Threshold { threshold: n, avoider: previous };
                return Ok(report(k, colors, max_n, universe, outcome, nodes));
            }
        }
    }
    Ok(report(k, colors, max_n, universe, ThresholdOutcome::NotReached { avoider: previous }, nodes))
}

fn report(k: usize, colors: u32, max_n: usize, universe: Vec<Element>, outcome: ThresholdOutcome, nodes: u64) -> ThresholdReport {
    ThresholdReport { k, colors, max_n, universe, outcome, nodes }
}

/// Independent check that `avoider` (colors of the leading universe
/// elements) admits no monochromatic `k`-term witness inside that prefix.
pub fn verify_avoider(sg: &Semigroup, universe: &[Element], avoider: &[u32], colors: u32, k: usize) -> Result<(), String> {
    if avoider.len() > universe.len() {
        return Err("avoider is longer than the universe".into());
    }
    if avoider.iter().any(|&c| c >= colors) {
        return Err("avoider uses too many colors".into());
    }
    if avoider.is_empty() {
        return Ok(());
    }
    let arena = &universe[..avoider.len()];
    let coloring = Coloring::from_assignment(arena, avoider, 0, colors)?;
    let prefix = SequencePrefix::new(sg, arena.to_vec()).map_err(|e| e.to_string())?;
    let r = find_mono_fs(&prefix, &coloring, k, u64::MAX, 1).map_err(|e| e.to_string())?;
    match r.value {
        None => Ok(()),
        Some(w) => Err(format!("avoider has a monochromatic witness {:?}", w.terms())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecolorRound {
    pub round: usize,
    /// Elements recolored `α`: found sums outside the `FS≥2` parts.
    pub alpha: Vec<Element>,
    /// Elements recolored `β`: the `FS≥2` parts.
    pub beta: Vec<Element>,
    pub found: bool,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointFamiliesReport {
    pub horizon: usize,
    pub families: Vec<MonoFsWitness>,
    /// `FS≥2` of each family's generating terms.
    pub fs2_sets: Vec<FsSet>,
    pub trace: Vec<RecolorRound>,
    pub requested: usize,
    pub complete: bool,
}

/// Finds up to `m` pairwise disjoint monochromatic finite-sums sets. After
/// each family, its sums are recolored with two fresh colors (`β` on the
/// `FS≥2` part, `α` on the rest) and the search repeats, accepting only
/// witnesses in an original color.
pub fn find_disjoint_mono_families(
    universe: &SequencePrefix<'_>,
    coloring: &Coloring,
    m: usize,
    k: usize,
    budget: u64,
    workers: usize,
) -> Result<DisjointFamiliesReport, FsError> {
    let sg = universe.semigroup();
    let r = coloring.colors();
    let (alpha, beta) = (r, r + 1);
    let mut a_set: HashSet<Element> = HashSet::new();
    let mut b_set: HashSet<Element> = HashSet::new();
    let mut families = Vec::new();
    let mut fs2_sets = Vec::new();
    let mut trace = Vec::new();
    for round in 1..=m {
        let recolor = |e: &Element| {
            if b_set.contains(e) {
                beta
            } else if a_set.contains(e) {
                alpha
            } else {
                coloring.color(sg, e)
            }
        };
        let result = universe_search(sg, universe.elements(), &recolor, &|c| c < r, k.max(1), budget, workers);
        let mut alpha_list: Vec<Element> = a_set.difference(&b_set).cloned().collect();
        alpha_list.sort_by_cached_key(|e| sg.rank_key(e));
        let mut beta_list: Vec<Element> = b_set.iter().cloned().collect();
        beta_list.sort_by_cached_key(|e| sg.rank_key(e));
        trace.push(RecolorRound { round, alpha: alpha_list, beta: beta_list, found: result.found(), nodes: result.nodes });
        let Some(pos) = result.value else { break };
        let c = coloring.color(sg, &universe.elements()[pos[0]]);
        let w = witness_from_positions(sg, universe.elements(), &pos, c)?;
        let fs2 = SequencePrefix::new(sg, w.terms().to_vec())?.fs_ge2()?;
        a_set.extend(w.fs.elements().cloned());
        b_set.extend(fs2.elements().cloned());
        families.push(w);
        fs2_sets.push(fs2);
    }
    Ok(DisjointFamiliesReport {
        horizon: universe.len(),
        complete: families.len() == m,
        families,
        fs2_sets,
        trace,
        requested: m,
    })
}

impl DisjointFamiliesReport {
    /// Each family re-verifies and the sets are pairwise disjoint.
    pub fn verify(&self, sg: &Semigroup, universe: &[Element], coloring: &Coloring) -> Result<(), String> {
        if self.fs2_sets.len() != self.families.len() {
            return Err("one FS≥2 set per family is required".into());
        }
        for (i, w) in self.families.iter().enumerate() {
            w.verify(sg, universe, coloring, true).map_err(|e| format!("family {}: {e}", i + 1))?;
            let fs2 = SequencePrefix::new(sg, w.terms().to_vec())
                .and_then(|p| p.fs_ge2())
                .map_err(|e| e.to_string())?;
            let a: HashSet<&Element> = fs2.elements().collect();
            let b: HashSet<&Element> = self.fs2_sets[i].elements().collect();
            if a != b {
                return Err(format!("family {}: recorded FS≥2 set is wrong", i + 1));
            }
        }
        for i in 0..self.families.len() {
            for j in i + 1..self.families.len() {
                if !self.families[i].fs.is_disjoint(&self.families[j].fs) {
                    return Err(format!("families {} and {} intersect", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

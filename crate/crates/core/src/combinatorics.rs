//! Set partitions, non-crossing partitions and the index combinatorics of
//! the moment method.
//!
//! Partitions of `[k]` are stored as restricted-growth strings: `rgs[t]` is
//! the block label of element `t` (zero-based), `rgs[0] = 0`, and each label
//! is at most one more than every label before it. This is the canonical
//! representative of a multi-index "up to equivalence", which is how the
//! enumerators below walk equivalence classes.
//!
//! Cyclic successors are taken modulo `k` everywhere.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest ground set accepted by [`enumerate_partitions`] and [`enumerate_nc`].
pub const MAX_PARTITION_K: usize = 12;
/// Largest ground set accepted by [`enumerate_nc2`].
pub const MAX_CHORDING_K: usize = 24;
/// Largest order accepted by the exhaustive triple counter.
pub const MAX_TRIPLE_K: usize = 6;
/// Largest order accepted by the Wishart pair enumerator.
pub const MAX_PAIR_K: usize = 6;
/// Largest index with a Catalan number representable in `u64` by our recurrence.
pub const MAX_CATALAN: usize = 30;

/// Catalan number `C_k = binom(2k, k) / (k + 1)`, exact for `k ≤ 30`.
pub fn catalan(k: usize) -> Result<u64> {
    if k > MAX_CATALAN {
        return Err(Error::Parameter(format!(
            "Catalan numbers are tabulated up to C_{MAX_CATALAN}, asked for C_{k}"
        )));
    }
    // C_{j+1} = C_j · 2(2j+1) / (j+2), exact in u128.
    let mut c: u128 = 1;
    for j in 0..k as u128 {
        c = c * 2 * (2 * j + 1) / (j + 2);
    }
    Ok(c as u64)
}

/// A set partition of `[k]` in restricted-growth form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    rgs: Vec<usize>,
}

impl Partition {
    /// Validates a restricted-growth string.
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::Parameter(
                "partitions need a non-empty ground set".into(),
            ));
        }
        let mut next = 0;
        for (t, &label) in rgs.iter().enumerate() {
            if label > next {
                return Err(Error::Parameter(format!(
                    "not a restricted-growth string: label {label} at position {t}"
                )));
            }
            if label == next {
                next += 1;
            }
        }
        Ok(Self { rgs })
    }

    /// Builds a partition of `[k]` from blocks of one-based elements.
    pub fn from_blocks(k: usize, blocks: &[&[usize]]) -> Result<Self> {
        let mut label = vec![usize::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block.iter() {
                if x == 0 || x > k {
                    return Err(Error::Parameter(format!("element {x} outside [1, {k}]")));
                }
                if label[x - 1] != usize::MAX {
                    return Err(Error::Parameter(format!("element {x} appears twice")));
                }
                label[x - 1] = b;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(Error::Parameter(
                "blocks do not cover the ground set".into(),
            ));
        }
        Ok(canonical(&label))
    }

    /// `{{1}, …, {k}}`.
    pub fn discrete(k: usize) -> Self {
        Self {
            rgs: (0..k).collect(),
        }
    }

    /// `{{1, …, k}}`.
    pub fn full(k: usize) -> Self {
        Self { rgs: vec![0; k] }
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    /// Number of blocks `|π|`.
    pub fn block_count(&self) -> usize {
        self.rgs.iter().max().map_or(0, |m| m + 1)
    }

    /// `i ∼_π j` for zero-based elements.
    #[inline]
    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.rgs[i] == self.rgs[j]
    }

    /// Blocks as sorted lists of zero-based elements, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (t, &label) in self.rgs.iter().enumerate() {
            blocks[label].push(t);
        }
        blocks
    }

    /// The block sizes, in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &label in &self.rgs {
            sizes[label] += 1;
        }
        sizes
    }

    /// True iff there are no `i < j < k < l` with `i ∼ k`, `j ∼ l` and `i ≁ j`.
    pub fn is_noncrossing(&self) -> bool {
        // A crossing exists iff two arcs between consecutive elements of
        // different blocks interleave.
        let mut last = vec![usize::MAX; self.block_count()];
        let mut arcs = Vec::with_capacity(self.len());
        for (t, &label) in self.rgs.iter().enumerate() {
            if last[label] != usize::MAX {
                arcs.push((last[label], t, label));
            }
            last[label] = t;
        }
        for (x, &(a, c, la)) in arcs.iter().enumerate() {
            for &(b, d, lb) in &arcs[x + 1..] {
                if la != lb && ((a < b && b < c && c < d) || (b < a && a < d && d < c)) {
                    return false;
                }
            }
        }
        true
    }

    /// Every block has exactly two elements.
    pub fn is_pairing(&self) -> bool {
        self.block_sizes().iter().all(|&s| s == 2)
    }

    /// A non-crossing pair partition.
    pub fn is_chording(&self) -> bool {
        self.is_pairing() && self.is_noncrossing()
    }

    /// The multi-index `(rgs[0] + 1, …, rgs[k-1] + 1)` of this class.
    pub fn to_multi_index(&self) -> MultiIndex {
        MultiIndex(self.rgs.iter().map(|&x| x + 1).collect())
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (x, e) in block.iter().enumerate() {
                if x > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", e + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Canonical relabeling by order of first occurrence.
fn canonical<T: Eq + std::hash::Hash + Copy>(values: &[T]) -> Partition {
    let mut seen: HashMap<T, usize> = HashMap::new();
    let rgs = values
        .iter()
        .map(|v| {
            let next = seen.len();
            *seen.entry(*v).or_insert(next)
        })
        .collect();
    Partition { rgs }
}

/// An element of `N^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("multi-indices need k ≥ 1".into()));
        }
        if values.contains(&0) {
            return Err(Error::Parameter(
                "multi-index values must be positive".into(),
            ));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `#a`: the number of distinct values.
    pub fn distinct(&self) -> usize {
        distinct(&self.0)
    }
}

fn distinct(v: &[usize]) -> usize {
    let mut s: Vec<usize> = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// The partition `π(a)` with `i ∼ j ⇔ a_i = a_j`.
pub fn induced_partition(v: &MultiIndex) -> Partition {
    canonical(&v.0)
}

// ---------------------------------------------------------------------------
// Enumeration

/// Depth-first walk over restricted-growth strings of length `k` in
/// lexicographic order, extending a prefix only when `accept` allows the
/// newly placed label and yielding only leaves that pass `complete`.
struct RgsWalk<A, C> {
    k: usize,
    rgs: Vec<usize>,
    // number of blocks used by rgs[..t] for each depth t
    blocks: Vec<usize>,
    started: bool,
    done: bool,
    accept: A,
    complete: C,
}

impl<A, C> RgsWalk<A, C>
where
    A: FnMut(&[usize], usize) -> bool,
    C: FnMut(&[usize]) -> bool,
{
    fn new(k: usize, accept: A, complete: C) -> Self {
        Self {
            k,
            rgs: Vec::with_capacity(k),
            blocks: Vec::with_capacity(k + 1),
            started: false,
            done: false,
            accept,
            complete,
        }
    }

    /// Tries labels `from..=blocks_used` at the current depth; pushes the
    /// first accepted one.
    fn place_from(&mut self, from: usize) -> bool {
        let used = *self.blocks.last().unwrap();
        for label in from..=used {
            if (self.accept)(&self.rgs, label) {
                self.rgs.push(label);
                self.blocks.push(used.max(label + 1));
                return true;
            }
        }
        false
    }

    /// Advances to the next leaf, or returns false when exhausted.
    fn advance(&mut self) -> bool {
        loop {
            if self.rgs.len() == self.k {
                // Leaf: move to the next sibling.
                if !self.backtrack() {
                    return false;
                }
            } else if self.place_from(0) {
                if self.rgs.len() == self.k && (self.complete)(&self.rgs) {
                    return true;
                }
            } else if !self.backtrack() {
                return false;
            }
            if self.rgs.len() == self.k && (self.complete)(&self.rgs) {
                return true;
            }
        }
    }

    /// Pops the last label and replaces it with the next accepted sibling,
    /// popping further up as needed.
    fn backtrack(&mut self) -> bool {
        while let Some(label) = self.rgs.pop() {
            self.blocks.pop();
            if self.place_from(label + 1) {
                return true;
            }
        }
        false
    }
}

impl<A, C> Iterator for RgsWalk<A, C>
where
    A: FnMut(&[usize], usize) -> bool,
    C: FnMut(&[usize]) -> bool,
{
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let found = if self.started {
            self.advance()
        } else {
            self.started = true;
            self.blocks.push(0);
            if self.k == 0 {
                false
            } else {
                self.advance()
            }
        };
        if found {
            Some(Partition {
                rgs: self.rgs.clone(),
            })
        } else {
            self.done = true;
            None
        }
    }
}

fn check_k(k: usize, max: usize, what: &str) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::Parameter(format!(
            "{what} requires 1 ≤ k ≤ {max}, got k = {k}"
        )));
    }
    Ok(())
}

/// All set partitions of `[k]` in lexicographic restricted-growth order; `Bell(k)` items.
pub fn enumerate_partitions(k: usize) -> Result<impl Iterator<Item = Partition>> {
    check_k(k, MAX_PARTITION_K, "partition enumeration")?;
    Ok(RgsWalk::new(k, |_: &[usize], _| true, |_: &[usize]| true))
}

/// Placing element `t = prefix.len()` into existing block `label` creates a
/// crossing iff some element of that block lies strictly inside the span of
/// another block of the prefix.
fn joins_without_crossing(prefix: &[usize], label: usize) -> bool {
    let used = prefix.iter().max().map_or(0, |m| m + 1);
    if label >= used {
        return true;
    }
    let mut lo = vec![usize::MAX; used];
    let mut hi = vec![0; used];
    for (t, &l) in prefix.iter().enumerate() {
        lo[l] = lo[l].min(t);
        hi[l] = t;
    }
    prefix.iter().enumerate().all(|(b, &l)| {
        l != label || (0..used).all(|other| other == label || !(lo[other] < b && b < hi[other]))
    })
}

/// The non-crossing partitions of `[k]` in lexicographic order; `C_k` items.
pub fn enumerate_nc(k: usize) -> Result<impl Iterator<Item = Partition>> {
    check_k(k, MAX_PARTITION_K, "non-crossing enumeration")?;
    Ok(RgsWalk::new(k, joins_without_crossing, |_: &[usize]| true))
}

/// All chordings (non-crossing pair partitions) of `[k]`; `C_{k/2}` items,
/// none for odd `k`.
pub fn enumerate_nc2(k: usize) -> Result<impl Iterator<Item = Partition>> {
    check_k(k, MAX_CHORDING_K, "chording enumeration")?;
    let odd = k % 2 == 1;
    let accept = move |prefix: &[usize], label: usize| {
        if odd {
            return false;
        }
        let t = prefix.len();
        let used = prefix.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; used];
        for &l in prefix {
            sizes[l] += 1;
        }
        if label < used {
            // joining: the block must be an open singleton
            sizes[label] == 1 && joins_without_crossing(prefix, label)
        } else {
            // opening: the open singletons must still fit in the remaining positions
            let open = sizes.iter().filter(|&&s| s == 1).count() + 1;
            open < k - t
        }
    };
    let complete = |rgs: &[usize]| {
        let used = rgs.iter().max().map_or(0, |m| m + 1);
        2 * used == rgs.len()
    };
    Ok(RgsWalk::new(k, accept, complete))
}

// ---------------------------------------------------------------------------
// Kreweras complement

/// Kreweras complement `K(π)`: the coarsest partition `σ` of the points
/// `1⁺, …, k⁺` such that `π ∪ σ` is non-crossing on
/// `1⁻ < 1⁺ < 2⁻ < 2⁺ < … < k⁻ < k⁺`.
///
/// Two points `i⁺ < j⁺` can share a block exactly when no block of `π` meets
/// both `{(i+1)⁻, …, j⁻}` and its complement; the complement merges every
/// such pair.
pub fn kreweras(pi: &Partition) -> Result<Partition> {
    if !pi.is_noncrossing() {
        return Err(Error::Domain(format!(
            "Kreweras complement is defined on non-crossing partitions, got {pi}"
        )));
    }
    let k = pi.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let blocks = pi.blocks();
    for i in 0..k {
        for j in i + 1..k {
            // minus points strictly between i⁺ and j⁺ are (i+1)⁻ … j⁻, i.e. zero-based i+1..=j
            let separated = blocks.iter().any(|block| {
                let inside = block.iter().any(|&x| x > i && x <= j);
                let outside = block.iter().any(|&x| x <= i || x > j);
                inside && outside
            });
            if !separated {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let roots: Vec<usize> = (0..k).map(|x| find(&mut parent, x)).collect();
    Ok(canonical(&roots))
}

/// The partition of `2k` interleaved points with `π` on the minus points
/// (even positions) and `σ` on the plus points (odd positions).
pub fn interleave(pi: &Partition, sigma: &Partition) -> Result<Partition> {
    if pi.len() != sigma.len() {
        return Err(Error::Parameter(
            "interleaved partitions need equal k".into(),
        ));
    }
    let offset = pi.block_count();
    let labels: Vec<usize> = (0..2 * pi.len())
        .map(|x| {
            if x % 2 == 0 {
                pi.rgs[x / 2]
            } else {
                offset + sigma.rgs[x / 2]
            }
        })
        .collect();
    Ok(canonical(&labels))
}

// ---------------------------------------------------------------------------
// Matching conditions

/// Statistics of the alternating list
/// `(a_1,c_1), (a_2,c_1), (a_2,c_2), (a_3,c_2), …, (a_k,c_k), (a_1,c_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WishartMatching {
    /// Every couple appears an even number of times.
    pub matches: bool,
    /// `#a + #c`.
    pub l_w: usize,
    /// Number of distinct couples.
    pub d_w: usize,
    /// Positions whose couple appears exactly twice.
    pub n2: usize,
    /// Positions whose couple appears at least four times.
    pub nplus: usize,
}

fn same_len(lens: &[usize]) -> Result<usize> {
    let k = lens[0];
    if k == 0 {
        return Err(Error::Parameter("multi-indices need k ≥ 1".into()));
    }
    if lens.iter().any(|&l| l != k) {
        return Err(Error::Parameter(format!("length mismatch: {lens:?}")));
    }
    Ok(k)
}

/// Multiplicity of every entry of `list`, position by position.
fn multiplicities<T: Ord + Copy>(list: &[T]) -> Vec<usize> {
    let mut sorted = list.to_vec();
    sorted.sort_unstable();
    list.iter()
        .map(|x| {
            let lo = sorted.partition_point(|y| y < x);
            let hi = sorted.partition_point(|y| y <= x);
            hi - lo
        })
        .collect()
}

fn wishart_list(a: &[usize], c: &[usize]) -> Vec<(usize, usize)> {
    let k = a.len();
    let mut list = Vec::with_capacity(2 * k);
    for i in 0..k {
        list.push((a[i], c[i]));
        list.push((a[(i + 1) % k], c[i]));
    }
    list
}

pub(crate) fn wishart_stats_raw(a: &[usize], c: &[usize]) -> WishartMatching {
    let list = wishart_list(a, c);
    let mult = multiplicities(&list);
    let mut distinct_couples = list.clone();
    distinct_couples.sort_unstable();
    distinct_couples.dedup();
    WishartMatching {
        matches: mult.iter().all(|m| m % 2 == 0),
        l_w: distinct(a) + distinct(c),
        d_w: distinct_couples.len(),
        n2: mult.iter().filter(|&&m| m == 2).count(),
        nplus: mult.iter().filter(|&&m| m >= 4).count(),
    }
}

/// Wishart matching condition and the counts `ℓ_W`, `d_W`, `n_2`, `n_+`.
pub fn wishart_matching_stats(a: &MultiIndex, c: &MultiIndex) -> Result<WishartMatching> {
    same_len(&[a.len(), c.len()])?;
    Ok(wishart_stats_raw(&a.0, &c.0))
}

/// Flags for a triple `(a, b, c)` over the list
/// `(a_1,b_2,c_1), (a_2,b_1,c_1); (a_2,b_3,c_2), (a_3,b_2,c_2); …; (a_k,b_1,c_k), (a_1,b_k,c_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleAdmissibility {
    /// Every triple of the list appears an even number of times.
    pub matching: bool,
    /// `(a_i, b_i) ≠ (a_{i+1}, b_{i+1})` for every `i`.
    pub non_repeating: bool,
    /// `#a + #b + 2#c`.
    pub l: usize,
    /// All of the above with `l = 2k + 2`.
    pub admissible: bool,
}

fn triples_match(a: &[usize], b: &[usize], c: &[usize]) -> bool {
    let k = a.len();
    let mut list: Vec<(usize, usize, usize)> = Vec::with_capacity(2 * k);
    for i in 0..k {
        let n = (i + 1) % k;
        list.push((a[i], b[n], c[i]));
        list.push((a[n], b[i], c[i]));
    }
    list.sort_unstable();
    list.chunk_by(|x, y| x == y).all(|run| run.len() % 2 == 0)
}

fn non_repeating(a: &[usize], b: &[usize]) -> bool {
    let k = a.len();
    (0..k).all(|i| {
        let n = (i + 1) % k;
        (a[i], b[i]) != (a[n], b[n])
    })
}

pub(crate) fn triple_raw(a: &[usize], b: &[usize], c: &[usize]) -> TripleAdmissibility {
    let k = a.len();
    let matching = triples_match(a, b, c);
    let non_repeating = non_repeating(a, b);
    let l = distinct(a) + distinct(b) + 2 * distinct(c);
    TripleAdmissibility {
        matching,
        non_repeating,
        l,
        admissible: matching && non_repeating && l == 2 * k + 2,
    }
}

pub fn triple_admissibility(
    a: &MultiIndex,
    b: &MultiIndex,
    c: &MultiIndex,
) -> Result<TripleAdmissibility> {
    same_len(&[a.len(), b.len(), c.len()])?;
    Ok(triple_raw(&a.0, &b.0, &c.0))
}

/// An equivalence class of triples, one restricted-growth partition per slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleClass {
    pub a: Partition,
    pub b: Partition,
    pub c: Partition,
}

/// Every admissible class of triples of order `k ≤ 6`.
///
/// Pairs `(a, b)` are filtered by the non-repeating condition first; since
/// admissibility forces `#c = (2k + 2 − #a − #b) / 2`, only partitions `c`
/// with that block count are tested against the matching condition.
pub fn admissible_classes(k: usize) -> Result<Vec<TripleClass>> {
    check_k(k, MAX_TRIPLE_K, "admissible-triple enumeration")?;
    let all: Vec<Partition> = enumerate_partitions(k)?.collect();
    let mut by_blocks: Vec<Vec<&Partition>> = vec![Vec::new(); k + 1];
    for p in &all {
        by_blocks[p.block_count()].push(p);
    }
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if !non_repeating(&a.rgs, &b.rgs) {
                continue;
            }
            let ab = a.block_count() + b.block_count();
            if ab > 2 * k + 2 || (2 * k + 2 - ab) % 2 == 1 {
                continue;
            }
            let need = (2 * k + 2 - ab) / 2;
            if need == 0 || need > k {
                continue;
            }
            for c in &by_blocks[need] {
                if triples_match(&a.rgs, &b.rgs, &c.rgs) {
                    out.push(TripleClass {
                        a: a.clone(),
                        b: b.clone(),
                        c: (*c).clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Number of admissible classes of order `k ≤ 6`.
pub fn count_admissible_classes(k: usize) -> Result<u64> {
    Ok(admissible_classes(k)?.len() as u64)
}

/// An equivalence class `(a, c)` satisfying the Wishart matching condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairClass {
    pub a: Partition,
    pub c: Partition,
    pub stats: WishartMatching,
}

/// All classes of order `k ≤ 6` that satisfy the Wishart matching condition.
pub fn wishart_matching_classes(k: usize) -> Result<Vec<PairClass>> {
    check_k(k, MAX_PAIR_K, "Wishart pair enumeration")?;
    let all: Vec<Partition> = enumerate_partitions(k)?.collect();
    let mut out = Vec::new();
    for a in &all {
        for c in &all {
            let stats = wishart_stats_raw(&a.rgs, &c.rgs);
            if stats.matches {
                out.push(PairClass {
                    a: a.clone(),
                    c: c.clone(),
                    stats,
                });
            }
        }
    }
    Ok(out)
}

/// The Wishart-admissible classes: matching with `ℓ_W = k + 1`.
pub fn wishart_admissible_classes(k: usize) -> Result<Vec<PairClass>> {
    Ok(wishart_matching_classes(k)?
        .into_iter()
        .filter(|p| p.stats.l_w == k + 1)
        .collect())
}

/// `Σ_{π ∈ NC(k)} α^{|π| − k}`.
pub fn mp_moment_via_nc(alpha: f64, k: usize) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if k == 0 {
        return Ok(1.0);
    }
    check_k(k, MAX_PARTITION_K, "NC moment sum")?;
    // Group by block count so each power is computed once.
    let mut by_blocks = vec![0u64; k + 1];
    for pi in enumerate_nc(k)? {
        by_blocks[pi.block_count()] += 1;
    }
    Ok(by_blocks
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(b, &n)| n as f64 * alpha.powi(b as i32 - k as i32))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bell(k: usize) -> u64 {
        // Bell triangle.
        let mut row = vec![1u64];
        for _ in 1..k {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    /// Definition-level crossing test, O(k^4).
    fn crossing_brute(p: &Partition) -> bool {
        let k = p.len();
        for i in 0..k {
            for j in i + 1..k {
                for x in j + 1..k {
                    for l in x + 1..k {
                        if p.same_block(i, x) && p.same_block(j, l) && !p.same_block(i, j) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn catalan_values() {
        let expected = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
        for (k, &c) in expected.iter().enumerate() {
            assert_eq!(catalan(k).unwrap(), c);
        }
        assert_eq!(catalan(30).unwrap(), 3_814_986_502_092_304);
        assert!(catalan(31).is_err());
    }

    #[test]
    fn bell_counts() {
        assert_eq!(enumerate_partitions(1).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(6).unwrap().count(), 203);
        for k in 1..=9 {
            assert_eq!(enumerate_partitions(k).unwrap().count() as u64, bell(k));
        }
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(13).is_err());
    }

    #[test]
    fn partitions_are_lexicographic_and_valid() {
        let all: Vec<Partition> = enumerate_partitions(6).unwrap().collect();
        for w in all.windows(2) {
            assert!(w[0].rgs < w[1].rgs);
        }
        for p in &all {
            assert!(Partition::from_rgs(p.rgs.clone()).is_ok());
        }
    }

    #[test]
    fn noncrossing_examples() {
        let crossing = Partition::from_blocks(4, &[&[1, 3], &[2, 4]]).unwrap();
        assert!(!crossing.is_noncrossing());
        let nested = Partition::from_blocks(4, &[&[1, 4], &[2, 3]]).unwrap();
        assert!(nested.is_noncrossing());
        let count = enumerate_partitions(4)
            .unwrap()
            .filter(|p| p.is_noncrossing())
            .count();
        assert_eq!(count, 14);
    }

    #[test]
    fn fast_crossing_test_matches_definition() {
        for k in 1..=8 {
            for p in enumerate_partitions(k).unwrap() {
                assert_eq!(p.is_noncrossing(), !crossing_brute(&p), "{p}");
            }
        }
    }

    #[test]
    fn pruned_nc_walk_matches_filtered_enumeration() {
        for k in 1..=9 {
            let walked: Vec<Partition> = enumerate_nc(k).unwrap().collect();
            let filtered: Vec<Partition> = enumerate_partitions(k)
                .unwrap()
                .filter(|p| p.is_noncrossing())
                .collect();
            assert_eq!(walked, filtered);
            assert_eq!(walked.len() as u64, catalan(k).unwrap());
        }
    }

    #[test]
    fn chording_counts() {
        assert_eq!(enumerate_nc2(2).unwrap().count(), 1);
        assert_eq!(enumerate_nc2(4).unwrap().count(), 2);
        assert_eq!(enumerate_nc2(6).unwrap().count(), 5);
        assert_eq!(enumerate_nc2(5).unwrap().count(), 0);
        assert_eq!(enumerate_nc2(1).unwrap().count(), 0);
        for k in (2..=10).step_by(2) {
            let walked: Vec<Partition> = enumerate_nc2(k).unwrap().collect();
            let filtered: Vec<Partition> = enumerate_partitions(k)
                .unwrap()
                .filter(|p| p.is_chording())
                .collect();
            assert_eq!(walked, filtered);
        }
        assert_eq!(
            enumerate_nc2(20).unwrap().count() as u64,
            catalan(10).unwrap()
        );
        assert!(enumerate_nc2(26).is_err());
    }

    #[test]
    fn kreweras_examples() {
        let pi = Partition::from_blocks(4, &[&[1], &[2, 3], &[4]]).unwrap();
        let expected = Partition::from_blocks(4, &[&[1, 3, 4], &[2]]).unwrap();
        assert_eq!(kreweras(&pi).unwrap(), expected);
        for k in 1..=8 {
            assert_eq!(
                kreweras(&Partition::discrete(k)).unwrap(),
                Partition::full(k)
            );
            assert_eq!(
                kreweras(&Partition::full(k)).unwrap(),
                Partition::discrete(k)
            );
        }
        let crossing = Partition::from_blocks(4, &[&[1, 3], &[2, 4]]).unwrap();
        assert!(matches!(kreweras(&crossing), Err(Error::Domain(_))));
    }

    /// Kreweras as the permutation π⁻¹ ∘ γ with γ = (1 2 … k), cycles read as blocks.
    fn kreweras_by_permutation(pi: &Partition) -> Partition {
        let k = pi.len();
        let mut perm = vec![0; k];
        for block in pi.blocks() {
            for (x, &e) in block.iter().enumerate() {
                perm[e] = block[(x + 1) % block.len()];
            }
        }
        let mut inv = vec![0; k];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let sigma: Vec<usize> = (0..k).map(|x| inv[(x + 1) % k]).collect();
        let mut label = vec![usize::MAX; k];
        let mut next = 0;
        for start in 0..k {
            if label[start] != usize::MAX {
                continue;
            }
            let mut x = start;
            while label[x] == usize::MAX {
                label[x] = next;
                x = sigma[x];
            }
            next += 1;
        }
        canonical(&label)
    }

    #[test]
    fn kreweras_agrees_with_permutation_formula() {
        for k in 1..=9 {
            for pi in enumerate_nc(k).unwrap() {
                assert_eq!(kreweras(&pi).unwrap(), kreweras_by_permutation(&pi), "{pi}");
            }
        }
    }

    #[test]
    fn kreweras_block_count_identity() {
        for k in 1..=8 {
            for pi in enumerate_partitions(k)
                .unwrap()
                .filter(|p| p.is_noncrossing())
            {
                let kp = kreweras(&pi).unwrap();
                assert_eq!(pi.block_count() + kp.block_count(), k + 1);
                assert!(interleave(&pi, &kp).unwrap().is_noncrossing());
            }
        }
    }

    #[test]
    fn induced_partition_examples() {
        let p = induced_partition(&mi(&[1, 4, 1, 2]));
        assert_eq!(
            p,
            Partition::from_blocks(4, &[&[1, 3], &[2], &[4]]).unwrap()
        );
        assert_eq!(p.block_count(), 3);
        assert_eq!(mi(&[1, 4, 1, 2]).distinct(), 3);
        assert_eq!(induced_partition(&mi(&[7, 7, 7])), Partition::full(3));
        assert_eq!(
            induced_partition(&mi(&[2, 5, 9, 11])),
            Partition::discrete(4)
        );
        assert!(MultiIndex::new(vec![0, 1]).is_err());
    }

    #[test]
    fn wishart_matching_examples() {
        let s = wishart_matching_stats(&mi(&[1, 2, 2, 3]), &mi(&[7, 3, 7, 7])).unwrap();
        assert!(s.matches);
        assert_eq!((s.l_w, s.d_w, s.n2, s.nplus), (5, 4, 8, 0));
        let s = wishart_matching_stats(&mi(&[1, 2]), &mi(&[1, 1])).unwrap();
        assert!(s.matches);
        let s = wishart_matching_stats(&mi(&[1, 2]), &mi(&[1, 2])).unwrap();
        assert!(!s.matches);
        assert!(wishart_matching_stats(&mi(&[1, 2]), &mi(&[1])).is_err());
    }

    #[test]
    fn triple_examples() {
        let t = triple_admissibility(&mi(&[1, 2]), &mi(&[1, 2]), &mi(&[1, 1])).unwrap();
        assert_eq!(
            t,
            TripleAdmissibility {
                matching: true,
                non_repeating: true,
                l: 6,
                admissible: true
            }
        );
        for c in [[1, 1, 1], [1, 2, 3], [4, 4, 9]] {
            let t = triple_admissibility(&mi(&[3, 3, 3]), &mi(&[3, 3, 3]), &mi(&c)).unwrap();
            assert!(!t.non_repeating);
            assert!(!t.admissible);
        }
        assert!(triple_admissibility(&mi(&[1]), &mi(&[1, 2]), &mi(&[1])).is_err());
    }

    #[test]
    fn admissible_counts_small() {
        assert_eq!(count_admissible_classes(1).unwrap(), 0);
        assert_eq!(count_admissible_classes(2).unwrap(), 1);
        assert_eq!(count_admissible_classes(3).unwrap(), 0);
        assert_eq!(count_admissible_classes(4).unwrap(), 2);
        assert!(count_admissible_classes(7).is_err());
    }

    #[test]
    fn pruned_triple_search_matches_full_scan() {
        for k in 1..=4 {
            let all: Vec<Partition> = enumerate_partitions(k).unwrap().collect();
            let mut full = Vec::new();
            for a in &all {
                for b in &all {
                    for c in &all {
                        if triple_raw(&a.rgs, &b.rgs, &c.rgs).admissible {
                            full.push((a.clone(), b.clone(), c.clone()));
                        }
                    }
                }
            }
            let pruned: Vec<_> = admissible_classes(k)
                .unwrap()
                .into_iter()
                .map(|t| (t.a, t.b, t.c))
                .collect();
            assert_eq!(pruned, full);
        }
    }

    #[test]
    fn mp_moment_examples() {
        assert_eq!(mp_moment_via_nc(3.7, 1).unwrap(), 1.0);
        assert_eq!(mp_moment_via_nc(3.7, 0).unwrap(), 1.0);
        for k in 1..=10 {
            assert_eq!(
                mp_moment_via_nc(1.0, k).unwrap(),
                catalan(k).unwrap() as f64
            );
        }
        assert_eq!(mp_moment_via_nc(2.0, 2).unwrap(), 1.5);
        assert!(mp_moment_via_nc(1.0, 13).is_err());
        assert!(mp_moment_via_nc(0.0, 2).is_err());
    }

    proptest! {
        #[test]
        fn induced_partition_is_canonical(values in proptest::collection::vec(1usize..6, 1..10)) {
            let v = MultiIndex::new(values.clone()).unwrap();
            let p = induced_partition(&v);
            prop_assert!(Partition::from_rgs(p.rgs().to_vec()).is_ok());
            prop_assert_eq!(p.block_count(), v.distinct());
            for i in 0..values.len() {
                for j in 0..values.len() {
                    prop_assert_eq!(p.same_block(i, j), values[i] == values[j]);
                }
            }
            // relabeling by an injective map does not change the class
            let shifted = MultiIndex::new(values.iter().map(|x| 3 * x + 10).collect()).unwrap();
            prop_assert_eq!(induced_partition(&shifted), p);
        }

        #[test]
        fn matching_stats_depend_only_on_classes(
            a in proptest::collection::vec(1usize..5, 5),
            c in proptest::collection::vec(1usize..5, 5),
        ) {
            let (ma, mc) = (MultiIndex::new(a).unwrap(), MultiIndex::new(c).unwrap());
            let raw = wishart_matching_stats(&ma, &mc).unwrap();
            let canon = wishart_matching_stats(
                &induced_partition(&ma).to_multi_index(),
                &induced_partition(&mc).to_multi_index(),
            ).unwrap();
            prop_assert_eq!(raw, canon);
            if raw.matches {
                prop_assert_eq!(raw.n2 + raw.nplus, 10);
            }
        }
    }
}

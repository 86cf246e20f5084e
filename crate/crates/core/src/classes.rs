//! Twisted conjugacy classes, cyclic shifts and cuspidality.
//!
//! Elements of a `delta`-class are `x w delta(x)^{-1}`. The cyclic shifts
//! `w -> s_j w s_{delta(j)}` generate the same orbits, so classes are the
//! connected components of the shift graph.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{GroupDesc, Twist};
use crate::weyl::{EltKey, WeylElt, WeylGroup};

/// Largest group that may be enumerated in full.
pub const ENUMERATION_BUDGET: usize = 1_000_000;
/// Default element budget for shift closures.
pub const CLOSURE_BUDGET: usize = 10_000_000;
pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "delta_inv")]
    DeltaInv,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Delta => "delta",
            Direction::DeltaInv => "delta_inv",
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Delta => Direction::DeltaInv,
            Direction::DeltaInv => Direction::Delta,
        }
    }

    /// The twist acting in this direction, given `delta`.
    pub fn twist(self, delta: &Twist) -> Twist {
        match self {
            Direction::Delta => delta.clone(),
            Direction::DeltaInv => delta.inverse(),
        }
    }
}

/// Groups up to this order keep every class element in memory.
pub const STORE_ELEMENTS_LIMIT: usize = 100_000;

#[derive(Clone, Debug)]
pub struct DeltaClass {
    pub direction: Direction,
    /// Shortest element with the lexicographically smallest canonical word.
    pub representative: WeylElt,
    /// Canonical word of the representative, in labels.
    pub rep_word: Vec<usize>,
    pub min_length: usize,
    pub cuspidal: bool,
    /// Labels.
    pub supp_delta_of_min: Vec<usize>,
    pub size: usize,
    /// Minimal-length elements ordered by canonical word; the first is the
    /// representative.
    pub min_elements: Vec<WeylElt>,
    /// All elements ordered by length then key, for small groups only.
    pub elements: Option<Vec<WeylElt>>,
}

/// `s_j w s_{delta(j)}` when it is not longer than `w`.
pub fn cyclic_shift_step(g: &WeylGroup, w: &WeylElt, j: usize, delta: &Twist) -> Option<WeylElt> {
    let next = g.shift(w, j, delta);
    (g.length(&next) <= g.length(w)).then_some(next)
}

/// Elements reachable by non-increasing cyclic shifts, in discovery order.
#[derive(Clone, Debug)]
pub struct ShiftClosure {
    pub keys: Vec<EltKey>,
    pub lengths: Vec<usize>,
    /// `(from, to, j)` over positions in `keys`, `j` a local position.
    pub edges: Vec<(usize, usize, usize)>,
}

impl ShiftClosure {
    pub fn min_length(&self) -> usize {
        self.lengths.iter().copied().min().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn elements(&self, g: &WeylGroup) -> Vec<WeylElt> {
        self.keys.iter().map(|&k| g.from_key(k)).collect()
    }
}

/// Breadth-first closure of `w` under `->_delta`. Stops with an error once
/// more than `budget` elements have been seen.
pub fn shift_closure(
    g: &WeylGroup,
    w: &WeylElt,
    delta: &Twist,
    budget: usize,
    record_edges: bool,
) -> Result<ShiftClosure> {
    let mut index: HashMap<EltKey, usize> = HashMap::new();
    let mut out = ShiftClosure { keys: vec![g.key(w)], lengths: vec![g.length(w)], edges: Vec::new() };
    index.insert(out.keys[0], 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(pos) = queue.pop_front() {
        let cur = g.from_key(out.keys[pos]);
        for j in 0..g.rank() {
            let Some(next) = cyclic_shift_step(g, &cur, j, delta) else { continue };
            let key = g.key(&next);
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    if out.keys.len() >= budget {
                        return Err(Error::BudgetExceeded { what: "shift closure".into(), budget });
                    }
                    let t = out.keys.len();
                    index.insert(key, t);
                    out.keys.push(key);
                    out.lengths.push(g.length(&next));
                    queue.push_back(t);
                    t
                }
            };
            if record_edges {
                out.edges.push((pos, target, j));
            }
        }
    }
    Ok(out)
}

/// Minimality via closure descent: a non-minimal element always reaches a
/// shorter one by cyclic shifts.
pub fn is_minimal_by_closure(g: &WeylGroup, w: &WeylElt, delta: &Twist, budget: usize) -> Result<bool> {
    let closure = shift_closure(g, w, delta, budget, false)?;
    Ok(closure.min_length() == g.length(w))
}

/// Smallest `delta`-stable set of local positions containing `mask`.
pub fn delta_closure_mask(mask: u32, delta: &Twist) -> u32 {
    let mut cur = mask;
    loop {
        let next = (0..delta.rank())
            .filter(|&i| cur & (1 << i) != 0)
            .fold(cur, |m, i| m | (1 << delta.apply(i)));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn mask_to_labels(g: &WeylGroup, mask: u32) -> Vec<usize> {
    (0..g.rank()).filter(|&i| mask & (1 << i) != 0).map(|i| g.system().label(i)).collect()
}

fn full_mask(rank: usize) -> u32 {
    ((1u64 << rank) - 1) as u32
}

/// `supp_delta(w)` as labels.
pub fn supp_delta(g: &WeylGroup, w: &WeylElt, delta: &Twist) -> Vec<usize> {
    mask_to_labels(g, delta_closure_mask(g.support_mask(w), delta))
}

/// Whether `supp_delta(w) = I`; for minimal `w` this decides cuspidality.
pub fn has_full_delta_support(g: &WeylGroup, w: &WeylElt, delta: &Twist) -> bool {
    delta_closure_mask(g.support_mask(w), delta) == full_mask(g.rank())
}

/// Cuspidality of an enumerated class by definition (no element in a proper
/// `delta`-stable parabolic); otherwise from the support of the
/// representative.
pub fn is_cuspidal(g: &WeylGroup, class: &DeltaClass, delta: &Twist) -> bool {
    match &class.elements {
        Some(elts) => elts.iter().all(|w| has_full_delta_support(g, w, delta)),
        None => has_full_delta_support(g, &class.representative, delta),
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// All elements of `W` (as keys) with their lengths and support masks, in
/// breadth-first order.
pub struct Enumeration {
    pub keys: Vec<EltKey>,
    pub lengths: Vec<usize>,
    pub supports: Vec<u32>,
    pub index: HashMap<EltKey, u32>,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn element(&self, g: &WeylGroup, i: usize) -> WeylElt {
        g.from_key(self.keys[i])
    }
}

pub fn enumerate_group(g: &WeylGroup, budget: usize) -> Result<Enumeration> {
    let id = g.identity();
    let mut out = Enumeration {
        index: HashMap::from([(g.key(&id), 0)]),
        keys: vec![g.key(&id)],
        lengths: vec![0],
        supports: vec![0],
    };
    let mut head = 0;
    while head < out.keys.len() {
        let cur = g.from_key(out.keys[head]);
        for i in 0..g.rank() {
            let key = g.key(&g.mul_simple_right(&cur, i));
            if out.index.contains_key(&key) {
                continue;
            }
            if out.keys.len() >= budget {
                return Err(Error::BudgetExceeded { what: "group enumeration".into(), budget });
            }
            out.index.insert(key, out.keys.len() as u32);
            out.lengths.push(out.lengths[head] + 1);
            out.supports.push(out.supports[head] | (1 << i));
            out.keys.push(key);
        }
        head += 1;
    }
    Ok(out)
}

/// Classes together with the class index of every element.
pub struct ClassTable {
    pub classes: Vec<DeltaClass>,
    pub class_of: HashMap<EltKey, u32>,
}

impl ClassTable {
    pub fn class_of(&self, g: &WeylGroup, w: &WeylElt) -> &DeltaClass {
        &self.classes[self.class_of[&g.key(w)] as usize]
    }
}

/// Partition of `W` into `twist`-conjugacy classes, sorted by
/// `(min_length, rep_word)`. The `direction` is recorded as given.
pub fn enumerate_class_table(
    g: &WeylGroup,
    twist: &Twist,
    direction: Direction,
    budget: usize,
) -> Result<ClassTable> {
    let en = enumerate_group(g, budget)?;
    let n = en.len();
    let mut uf = UnionFind::new(n);
    for idx in 0..n {
        let w = en.element(g, idx);
        for j in 0..g.rank() {
            let key = g.key(&g.shift(&w, j, twist));
            uf.union(idx as u32, en.index[&key]);
        }
    }
    let mut groups: HashMap<u32, Vec<usize>> = HashMap::new();
    for idx in 0..n {
        groups.entry(uf.find(idx as u32)).or_default().push(idx);
    }
    let full = full_mask(g.rank());
    let store = n <= STORE_ELEMENTS_LIMIT;
    let mut classes: Vec<(DeltaClass, Vec<usize>)> = groups
        .into_values()
        .map(|members| {
            let min_length = members.iter().map(|&i| en.lengths[i]).min().expect("nonempty");
            let mut mins: Vec<(Vec<usize>, usize)> = members
                .iter()
                .filter(|&&i| en.lengths[i] == min_length)
                .map(|&i| (g.canonical_local_word(&en.element(g, i)), i))
                .collect();
            mins.sort_unstable();
            let (rep_local, rep_idx) = mins[0].clone();
            let cuspidal = members.iter().all(|&i| delta_closure_mask(en.supports[i], twist) == full);
            let supp = delta_closure_mask(en.supports[rep_idx], twist);
            let elements = store.then(|| {
                let mut elts: Vec<(usize, EltKey)> = members.iter().map(|&i| (en.lengths[i], en.keys[i])).collect();
                elts.sort_unstable();
                elts.into_iter().map(|(_, k)| g.from_key(k)).collect()
            });
            let class = DeltaClass {
                direction,
                representative: en.element(g, rep_idx),
                rep_word: g.local_to_labels(&rep_local),
                min_length,
                cuspidal,
                supp_delta_of_min: mask_to_labels(g, supp),
                size: members.len(),
                min_elements: mins.iter().map(|&(_, i)| en.element(g, i)).collect(),
                elements,
            };
            (class, members)
        })
        .collect();
    classes.sort_by(|a, b| (a.0.min_length, &a.0.rep_word).cmp(&(b.0.min_length, &b.0.rep_word)));
    let mut class_of = HashMap::with_capacity(n);
    for (c, (_, members)) in classes.iter().enumerate() {
        for &i in members {
            class_of.insert(en.keys[i], c as u32);
        }
    }
    Ok(ClassTable { classes: classes.into_iter().map(|(c, _)| c).collect(), class_of })
}

pub fn enumerate_classes(
    g: &WeylGroup,
    twist: &Twist,
    direction: Direction,
    budget: usize,
) -> Result<Vec<DeltaClass>> {
    Ok(enumerate_class_table(g, twist, direction, budget)?.classes)
}

/// Classes of a named group in the given direction.
pub fn enumerate_delta_classes(desc: &GroupDesc, direction: Direction) -> Result<Vec<DeltaClass>> {
    let g = WeylGroup::new(desc.root_system()?);
    let twist = direction.twist(&desc.twist()?);
    enumerate_classes(&g, &twist, direction, ENUMERATION_BUDGET)
}

/// A witness `x` with `w' = x w delta(x)^{-1}`, equal lengths, and
/// `l(xw) = l(x) + l(w)` or `l(w delta(x)^{-1}) = l(x) + l(w)`. Searches
/// `x` in breadth-first order.
pub fn elementarily_strongly_conjugate(
    g: &WeylGroup,
    w: &WeylElt,
    w2: &WeylElt,
    delta: &Twist,
    budget: usize,
) -> Result<Option<WeylElt>> {
    let lw = g.length(w);
    if lw != g.length(w2) {
        return Ok(None);
    }
    let en = enumerate_group(g, budget)?;
    for (i, &lx) in en.lengths.iter().enumerate() {
        let x = &en.element(g, i);
        if &g.twisted_conjugate(x, w, delta) != w2 {
            continue;
        }
        let dx_inv = g.inverse(&g.apply_twist(delta, x));
        if g.length(&g.mul(x, w)) == lx + lw || g.length(&g.mul(w, &dx_inv)) == lx + lw {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// `I(J, x, twist)`: the largest `K` in `J` with `Ad(x) twist (K) = K`,
/// as local positions. Requires `x alpha_{twist(j)} > 0` for `j` in `J`.
pub fn compute_i_j_x(g: &WeylGroup, j_set: &[usize], x: &WeylElt, twist: &Twist) -> Result<Vec<usize>> {
    let twisted: Vec<usize> = j_set.iter().map(|&j| twist.apply(j)).collect();
    if !g.is_min_coset_rep_local(x, &twisted) {
        return Err(Error::NotMinimalCosetRep(format!(
            "{:?} is not minimal in its coset modulo {:?}",
            g.canonical_word(x),
            g.local_to_labels(&twisted)
        )));
    }
    let mut k: Vec<usize> = j_set.to_vec();
    k.sort_unstable();
    loop {
        let next: Vec<usize> = k
            .iter()
            .copied()
            .filter(|&kk| {
                let img = x.image(g.system().simple_index(twist.apply(kk)));
                g.system().simple_position(img).is_some_and(|p| k.contains(&p))
            })
            .collect();
        if next.len() == k.len() {
            return Ok(k);
        }
        k = next;
    }
}

/// The permutation of `K` induced by `Ad(x) twist`, as a twist on the
/// positions `0..|K|` of the sorted set `K`.
pub fn induced_twist(g: &WeylGroup, k_set: &[usize], x: &WeylElt, twist: &Twist) -> Result<Twist> {
    let perm = k_set
        .iter()
        .map(|&kk| {
            let img = x.image(g.system().simple_index(twist.apply(kk)));
            g.system()
                .simple_position(img)
                .and_then(|p| k_set.iter().position(|&q| q == p))
                .ok_or_else(|| Error::InvalidCartan(format!("Ad(x) does not stabilise {:?}", k_set)))
        })
        .collect::<Result<Vec<_>>>()?;
    Twist::from_perm(perm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedClass {
    pub format_version: u32,
    pub rep: Vec<usize>,
    pub min_length: usize,
    pub cuspidal: bool,
    pub size: usize,
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os("WEYL_DL_CACHE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".cache"))
}

pub fn cache_path(dir: &Path, desc: &GroupDesc, direction: Direction) -> PathBuf {
    dir.join(format!(
        "classes-{}{}-t{}-{}.v{}.jsonl",
        desc.family.letter(),
        desc.rank,
        desc.twist,
        direction.as_str(),
        CACHE_FORMAT_VERSION
    ))
}

pub fn write_cache(dir: &Path, desc: &GroupDesc, direction: Direction, classes: &[DeltaClass]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, desc, direction);
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp)?;
    for c in classes {
        let row = CachedClass {
            format_version: CACHE_FORMAT_VERSION,
            rep: c.rep_word.clone(),
            min_length: c.min_length,
            cuspidal: c.cuspidal,
            size: c.size,
        };
        writeln!(file, "{}", serde_json::to_string(&row)?)?;
    }
    file.sync_all()?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Rows of a cache file; `None` when absent or written by another version.
pub fn read_cache(dir: &Path, desc: &GroupDesc, direction: Direction) -> Result<Option<Vec<CachedClass>>> {
    let path = cache_path(dir, desc, direction);
    let Ok(file) = fs::File::open(&path) else { return Ok(None) };
    let mut rows = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: CachedClass = serde_json::from_str(&line)?;
        if row.format_version != CACHE_FORMAT_VERSION {
            return Ok(None);
        }
        rows.push(row);
    }
    Ok(Some(rows))
}

/// Class table rows, from the cache when present, enumerating and writing
/// the cache otherwise.
pub fn cached_class_rows(dir: &Path, desc: &GroupDesc, direction: Direction) -> Result<Vec<CachedClass>> {
    if let Some(rows) = read_cache(dir, desc, direction)? {
        return Ok(rows);
    }
    let classes = enumerate_delta_classes(desc, direction)?;
    write_cache(dir, desc, direction, &classes)?;
    Ok(read_cache(dir, desc, direction)?.expect("just written"))
}

/// Elements of the `twist`-class of `w`, by brute-force conjugation.
pub fn conjugacy_orbit(g: &WeylGroup, w: &WeylElt, twist: &Twist, all: &[WeylElt]) -> HashSet<EltKey> {
    all.iter().map(|x| g.key(&g.twisted_conjugate(x, w, twist))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_twist, Family, RootSystem};

    fn group(f: Family, n: usize) -> WeylGroup {
        WeylGroup::new(RootSystem::build(f, n).unwrap())
    }

    fn counts(f: Family, n: usize, t: usize) -> (usize, usize) {
        let classes = enumerate_delta_classes(&GroupDesc::new(f, n, t), Direction::Delta).unwrap();
        (classes.len(), classes.iter().filter(|c| c.cuspidal).count())
    }

    #[test]
    fn shift_step_examples() {
        let a2 = group(Family::A, 2);
        let id = Twist::identity(2);
        let e = a2.identity();
        assert_eq!(cyclic_shift_step(&a2, &e, 0, &id), Some(e.clone()));
        let swap = build_twist(Family::A, 2, 2).unwrap();
        assert_eq!(cyclic_shift_step(&a2, &e, 0, &swap), None);
        let s12 = a2.from_word(&[1, 2]).unwrap();
        assert_eq!(cyclic_shift_step(&a2, &s12, 0, &id), Some(a2.from_word(&[2, 1]).unwrap()));
        let w0 = a2.from_word(&[1, 2, 1]).unwrap();
        assert_eq!(cyclic_shift_step(&a2, &w0, 0, &id), Some(a2.from_word(&[2]).unwrap()));
    }

    #[test]
    fn closure_examples() {
        let a2 = group(Family::A, 2);
        let id = Twist::identity(2);
        let w0 = a2.from_word(&[1, 2, 1]).unwrap();
        let c = shift_closure(&a2, &w0, &id, 100, false).unwrap();
        let elts = c.elements(&a2);
        assert!(elts.contains(&a2.from_word(&[1]).unwrap()));
        assert!(elts.contains(&a2.from_word(&[2]).unwrap()));
        assert_eq!(c.min_length(), 1);
        let e = shift_closure(&a2, &a2.identity(), &id, 100, false).unwrap();
        assert_eq!(e.len(), 1);
        let cox = shift_closure(&a2, &a2.from_word(&[1, 2]).unwrap(), &id, 100, true).unwrap();
        assert_eq!(cox.len(), 2);
        let pairs: HashSet<(usize, usize)> =
            cox.edges.iter().filter(|(a, b, _)| a != b).map(|&(a, b, _)| (a, b)).collect();
        assert_eq!(pairs.len(), 2);
        assert!(shift_closure(&a2, &w0, &id, 2, false).is_err());
    }

    #[test]
    fn class_counts() {
        assert_eq!(counts(Family::A, 1, 1), (2, 1));
        assert_eq!(counts(Family::A, 2, 1), (3, 1));
        assert_eq!(counts(Family::G, 2, 1), (6, 3));
        assert_eq!(counts(Family::F, 4, 1), (25, 9));
        // partitions of 5 and of 4 / 4 cuspidal classes of B3
        assert_eq!(counts(Family::A, 4, 1).0, 7);
        assert_eq!(counts(Family::B, 3, 1), (10, 3));
        assert_eq!(counts(Family::D, 4, 1), (13, 3));
    }

    #[test]
    fn class_order_and_identity() {
        let classes = enumerate_delta_classes(&GroupDesc::new(Family::A, 2, 1), Direction::Delta).unwrap();
        assert_eq!(classes[0].rep_word, Vec::<usize>::new());
        assert!(!classes[0].cuspidal);
        assert_eq!(classes[1].rep_word, vec![1]);
        assert_eq!(classes[2].rep_word, vec![1, 2]);
        assert!(classes[2].cuspidal);
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 6);
    }

    #[test]
    fn g2_longest_is_cuspidal() {
        let g = group(Family::G, 2);
        let id = Twist::identity(2);
        let classes = enumerate_classes(&g, &id, Direction::Delta, 100).unwrap();
        let w0 = g.longest_element(&[1, 2]).unwrap();
        let class = classes.iter().find(|c| c.elements.as_ref().unwrap().contains(&w0)).unwrap();
        assert!(class.cuspidal);
        assert!(is_cuspidal(&g, class, &id));
    }

    #[test]
    fn supp_delta_examples() {
        let a3 = group(Family::A, 3);
        let delta = build_twist(Family::A, 3, 2).unwrap();
        assert!(supp_delta(&a3, &a3.identity(), &delta).is_empty());
        assert_eq!(supp_delta(&a3, &a3.from_word(&[1]).unwrap(), &delta), vec![1, 3]);
        let d4 = group(Family::D, 4);
        let tri = build_twist(Family::D, 4, 3).unwrap();
        assert_eq!(supp_delta(&d4, &d4.from_word(&[2, 1]).unwrap(), &tri), vec![1, 2, 3, 4]);
    }

    #[test]
    fn strong_conjugacy_examples() {
        let a2 = group(Family::A, 2);
        let id = Twist::identity(2);
        let w = a2.from_word(&[1, 2]).unwrap();
        let w2 = a2.from_word(&[2, 1]).unwrap();
        let x = elementarily_strongly_conjugate(&a2, &w, &w, &id, 100).unwrap().unwrap();
        assert!(a2.is_identity(&x));
        assert!(elementarily_strongly_conjugate(&a2, &w, &w2, &id, 100).unwrap().is_some());
        let s1 = a2.from_word(&[1]).unwrap();
        assert!(elementarily_strongly_conjugate(&a2, &w, &s1, &id, 100).unwrap().is_none());
    }

    #[test]
    fn i_j_x_examples() {
        let d4 = group(Family::D, 4);
        let dinv = build_twist(Family::D, 4, 3).unwrap().inverse();
        let w1 = d4.from_word(&[3, 2, 1]).unwrap();
        assert_eq!(compute_i_j_x(&d4, &[0, 1, 2], &w1, &dinv).unwrap(), vec![0, 1]);

        let a3 = group(Family::A, 3);
        let id = Twist::identity(3);
        assert_eq!(compute_i_j_x(&a3, &[0, 2], &a3.identity(), &id).unwrap(), vec![0, 2]);
        let s2 = a3.from_word(&[2]).unwrap();
        assert!(compute_i_j_x(&a3, &[1], &s2, &id).is_err());

        for n in 2..=8 {
            let g = group(Family::A, n);
            let dinv = build_twist(Family::A, n, 2).unwrap().inverse();
            let j: Vec<usize> = (0..n - 1).collect();
            for a in 1..=n / 2 + 1 {
                if n + 1 - a < 1 {
                    continue;
                }
                let w1 = g.from_word(&crate::weyl::word_from_bracket(n + 1 - a, 1, false, n).unwrap()).unwrap();
                let k = compute_i_j_x(&g, &j, &w1, &dinv).unwrap();
                let expected: Vec<usize> = (a..=n.saturating_sub(a)).map(|l| l - 1).collect();
                assert_eq!(k, expected, "2A{n} a={a}");
            }
        }
    }

    #[test]
    fn union_find_matches_brute_force_conjugation() {
        for (f, n, t) in [
            (Family::A, 2, 1),
            (Family::A, 2, 2),
            (Family::A, 3, 2),
            (Family::B, 2, 2),
            (Family::B, 3, 1),
            (Family::C, 3, 1),
            (Family::G, 2, 2),
        ] {
            let desc = GroupDesc::new(f, n, t);
            let g = WeylGroup::new(desc.root_system().unwrap());
            let delta = desc.twist().unwrap();
            let all = g.enumerate(1000).unwrap();
            for class in enumerate_classes(&g, &delta, Direction::Delta, 1000).unwrap() {
                let elts: HashSet<EltKey> =
                    class.elements.as_ref().unwrap().iter().map(|w| g.key(w)).collect();
                assert_eq!(elts, conjugacy_orbit(&g, &class.representative, &delta, &all), "{desc}");
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("weyldl-cache-test-{}", std::process::id()));
        let desc = GroupDesc::new(Family::G, 2, 1);
        assert!(read_cache(&dir, &desc, Direction::Delta).unwrap().is_none());
        let rows = cached_class_rows(&dir, &desc, Direction::Delta).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows.iter().filter(|r| r.cuspidal).count(), 3);
        assert_eq!(read_cache(&dir, &desc, Direction::Delta).unwrap().unwrap(), rows);
        fs::remove_dir_all(&dir).unwrap();
    }
}

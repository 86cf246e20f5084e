//! Weyl group elements as signed permutations of the root system.
//!
//! An element stores the image of every root (positive roots first, then
//! negatives). Equality, length and inversion queries are linear in the
//! number of roots; words are derived on demand.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rootdata::{RootSystem, Twist};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    perm: Box<[u16]>,
}

impl WeylElt {
    /// Image of the root with index `idx`.
    pub fn image(&self, idx: usize) -> usize {
        self.perm[idx] as usize
    }
}

/// Packed images of the simple roots; identifies an element uniquely.
pub type EltKey = u128;

#[derive(Clone, Debug)]
pub struct WeylGroup {
    sys: Arc<RootSystem>,
}

impl WeylGroup {
    pub fn new(sys: RootSystem) -> Self {
        WeylGroup { sys: Arc::new(sys) }
    }

    pub fn from_arc(sys: Arc<RootSystem>) -> Self {
        WeylGroup { sys }
    }

    pub fn system(&self) -> &RootSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<RootSystem> {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn identity(&self) -> WeylElt {
        WeylElt { perm: (0..self.sys.num_roots() as u16).collect() }
    }

    /// The simple reflection at local position `i`.
    pub fn simple(&self, i: usize) -> WeylElt {
        WeylElt { perm: self.sys.reflection_table(i).into() }
    }

    pub fn is_identity(&self, w: &WeylElt) -> bool {
        w.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// Element of a word in local positions.
    pub fn from_local_word(&self, word: &[usize]) -> Result<WeylElt> {
        let mut w = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange(i));
            }
            w = self.mul_simple_right(&w, i);
        }
        Ok(w)
    }

    /// Element of a word in node labels, e.g. `[2, 1]` for `s_2 s_1`.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElt> {
        let local = self.labels_to_local(word)?;
        self.from_local_word(&local)
    }

    pub fn labels_to_local(&self, labels: &[usize]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|&l| self.sys.local(l).ok_or(Error::IndexOutOfRange(l)))
            .collect()
    }

    pub fn local_to_labels(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&i| self.sys.label(i)).collect()
    }

    /// `a * b`, acting as `b` first.
    pub fn mul(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        WeylElt { perm: b.perm.iter().map(|&r| a.perm[r as usize]).collect() }
    }

    pub fn inverse(&self, w: &WeylElt) -> WeylElt {
        let mut inv = vec![0u16; w.perm.len()];
        for (r, &img) in w.perm.iter().enumerate() {
            inv[img as usize] = r as u16;
        }
        WeylElt { perm: inv.into() }
    }

    /// `s_i * w`
    pub fn mul_simple_left(&self, i: usize, w: &WeylElt) -> WeylElt {
        let table = self.sys.reflection_table(i);
        WeylElt { perm: w.perm.iter().map(|&r| table[r as usize]).collect() }
    }

    /// `w * s_i`
    pub fn mul_simple_right(&self, w: &WeylElt, i: usize) -> WeylElt {
        let table = self.sys.reflection_table(i);
        WeylElt { perm: table.iter().map(|&r| w.perm[r as usize]).collect() }
    }

    pub fn length(&self, w: &WeylElt) -> usize {
        let n = self.sys.num_positive();
        w.perm[..n].iter().filter(|&&r| (r as usize) >= n).count()
    }

    /// Positive roots (as indices) sent to negative roots.
    pub fn inversion_indices(&self, w: &WeylElt) -> Vec<usize> {
        let n = self.sys.num_positive();
        (0..n).filter(|&r| w.perm[r] as usize >= n).collect()
    }

    pub fn inversions(&self, w: &WeylElt) -> Vec<Vec<i32>> {
        self.inversion_indices(w).into_iter().map(|r| self.sys.root(r).to_vec()).collect()
    }

    /// `w . alpha` for a root given by coordinates.
    pub fn act_on_root(&self, w: &WeylElt, alpha: &[i32]) -> Result<Vec<i32>> {
        let idx = self.sys.root_index(alpha).ok_or_else(|| Error::NotARoot(alpha.to_vec()))?;
        Ok(self.sys.root(w.image(idx)).to_vec())
    }

    /// `w . alpha_i` for the simple root at local position `i`.
    pub fn act_on_simple(&self, w: &WeylElt, i: usize) -> &[i32] {
        self.sys.root(w.image(self.sys.simple_index(i)))
    }

    /// `w^{-1}(alpha_i) < 0`
    pub fn is_left_descent(&self, w: &WeylElt, i: usize) -> bool {
        let target = self.sys.simple_index(i) as u16;
        let pre = w.perm.iter().position(|&r| r == target).expect("permutation");
        !self.sys.is_positive_index(pre)
    }

    /// `w(alpha_i) < 0`
    pub fn is_right_descent(&self, w: &WeylElt, i: usize) -> bool {
        !self.sys.is_positive_index(w.image(self.sys.simple_index(i)))
    }

    /// Lexicographically smallest reduced word, in local positions.
    pub fn canonical_local_word(&self, w: &WeylElt) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length(w));
        let mut cur = w.clone();
        loop {
            let inv = self.inverse(&cur);
            let Some(i) = (0..self.rank()).find(|&i| !self.sys.is_positive_index(inv.image(i))) else {
                break;
            };
            word.push(i);
            cur = self.mul_simple_left(i, &cur);
        }
        word
    }

    /// Lexicographically smallest reduced word, in labels.
    pub fn canonical_word(&self, w: &WeylElt) -> Vec<usize> {
        self.local_to_labels(&self.canonical_local_word(w))
    }

    /// Letters occurring in a reduced word, as a bitmask over local positions.
    pub fn support_mask(&self, w: &WeylElt) -> u32 {
        self.canonical_local_word(w).iter().fold(0, |m, &i| m | (1 << i))
    }

    /// Longest element of the standard parabolic subgroup on local positions
    /// `subset`.
    pub fn longest_element_local(&self, subset: &[usize]) -> WeylElt {
        let mut w = self.identity();
        loop {
            let Some(&i) = subset.iter().find(|&&i| !self.is_right_descent(&w, i)) else {
                return w;
            };
            w = self.mul_simple_right(&w, i);
        }
    }

    /// Longest element `w_0^J` for a set of labels `J`.
    pub fn longest_element(&self, labels: &[usize]) -> Result<WeylElt> {
        let local = self.labels_to_local(labels)?;
        Ok(self.longest_element_local(&local))
    }

    /// `w alpha_j > 0` for all `j` in the local subset.
    pub fn is_min_coset_rep_local(&self, w: &WeylElt, subset: &[usize]) -> bool {
        subset.iter().all(|&j| !self.is_right_descent(w, j))
    }

    pub fn is_min_coset_rep(&self, w: &WeylElt, labels: &[usize]) -> Result<bool> {
        let local = self.labels_to_local(labels)?;
        Ok(self.is_min_coset_rep_local(w, &local))
    }

    /// `delta(w)`: the automorphism `s_i -> s_{delta(i)}`.
    pub fn apply_twist(&self, delta: &Twist, w: &WeylElt) -> WeylElt {
        if delta.is_identity() {
            return w.clone();
        }
        let word: Vec<usize> = self.canonical_local_word(w).iter().map(|&i| delta.apply(i)).collect();
        self.from_local_word(&word).expect("twist maps nodes to nodes")
    }

    /// `x w delta(x)^{-1}`
    pub fn twisted_conjugate(&self, x: &WeylElt, w: &WeylElt, delta: &Twist) -> WeylElt {
        let dx = self.apply_twist(delta, x);
        self.mul(&self.mul(x, w), &self.inverse(&dx))
    }

    /// `s_j w s_{delta(j)}`, local position `j`.
    pub fn shift(&self, w: &WeylElt, j: usize, delta: &Twist) -> WeylElt {
        self.mul_simple_right(&self.mul_simple_left(j, w), delta.apply(j))
    }

    pub fn key(&self, w: &WeylElt) -> EltKey {
        debug_assert!(self.rank() <= 8);
        (0..self.rank()).fold(0u128, |k, i| k | (u128::from(w.perm[i]) << (16 * i)))
    }

    /// Rebuilds an element from the images of the simple roots.
    pub fn from_key(&self, key: EltKey) -> WeylElt {
        let n = self.rank();
        let images: Vec<&[i32]> =
            (0..n).map(|i| self.sys.root(((key >> (16 * i)) & 0xffff) as usize)).collect();
        let npos = self.sys.num_positive();
        let mut perm = vec![0u16; 2 * npos];
        let mut buf = vec![0i32; n];
        for (r, root) in self.sys.positive_roots().iter().enumerate() {
            buf.iter_mut().for_each(|b| *b = 0);
            for (c, img) in root.iter().zip(&images) {
                if *c != 0 {
                    for (b, x) in buf.iter_mut().zip(img.iter()) {
                        *b += c * x;
                    }
                }
            }
            let idx = self.sys.root_index(&buf).expect("image of a root is a root");
            perm[r] = idx as u16;
            perm[r + npos] = self.sys.negate_index(idx) as u16;
        }
        WeylElt { perm: perm.into() }
    }

    /// All elements, in breadth-first (length) order.
    pub fn enumerate(&self, budget: usize) -> Result<Vec<WeylElt>> {
        let mut seen: HashMap<EltKey, ()> = HashMap::new();
        let mut out = Vec::new();
        let id = self.identity();
        seen.insert(self.key(&id), ());
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                let next = self.mul_simple_right(&w, i);
                if seen.insert(self.key(&next), ()).is_none() {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded { what: "group enumeration".into(), budget });
                    }
                    queue.push_back(next);
                }
            }
            out.push(w);
        }
        Ok(out)
    }

    /// Group order from the product of component orders.
    pub fn order(&self) -> u128 {
        group_order(&self.sys)
    }
}

/// `|W|` computed as the product of `(d_i)` over the irreducible components,
/// using the classification of each component by rank and root count.
pub fn group_order(sys: &RootSystem) -> u128 {
    let mut total: u128 = 1;
    for comp in sys.components() {
        let labels: Vec<usize> = comp.iter().map(|&i| sys.label(i)).collect();
        let sub = sys.subsystem(&labels).expect("component");
        let n = comp.len() as u128;
        let npos = sub.num_positive() as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        total *= match (n, npos) {
            (n, p) if p == n * (n + 1) / 2 => fact(n + 1),
            (n, p) if n >= 2 && p == n * n => (1u128 << n) * fact(n),
            (n, p) if n >= 4 && p == n * (n - 1) => (1u128 << (n - 1)) * fact(n),
            (2, 6) => 12,
            (4, 24) => 1152,
            (6, 36) => 51_840,
            (7, 63) => 2_903_040,
            (8, 120) => 696_729_600,
            _ => unreachable!("unclassified component"),
        };
    }
    total
}

/// The word of `s_{[a,b]} = s_a s_{a-1} ... s_b`, reversed when `inverse` is
/// set. Empty when `a < b`.
pub fn word_from_bracket(a: usize, b: usize, inverse: bool, rank: usize) -> Result<Vec<usize>> {
    for x in [a, b] {
        if x == 0 || x > rank {
            return Err(Error::IndexOutOfRange(x));
        }
    }
    if a < b {
        return Ok(Vec::new());
    }
    let mut word: Vec<usize> = (b..=a).rev().collect();
    if inverse {
        word.reverse();
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_twist, Family};
    use proptest::prelude::*;

    fn group(f: Family, n: usize) -> WeylGroup {
        WeylGroup::new(RootSystem::build(f, n).unwrap())
    }

    #[test]
    fn root_action_examples() {
        let a2 = group(Family::A, 2);
        let s1 = a2.from_word(&[1]).unwrap();
        assert_eq!(a2.act_on_root(&s1, &[1, 0]).unwrap(), vec![-1, 0]);
        let s1s2 = a2.from_word(&[1, 2]).unwrap();
        assert_eq!(a2.act_on_root(&s1s2, &[0, 1]).unwrap(), vec![-1, -1]);
        assert!(a2.act_on_root(&s1s2, &[2, 1]).is_err());

        let f4 = group(Family::F, 4);
        let s2 = f4.from_word(&[2]).unwrap();
        assert_eq!(f4.act_on_root(&s2, &[0, 0, 1, 0]).unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn inversion_examples() {
        let a2 = group(Family::A, 2);
        assert!(a2.inversions(&a2.identity()).is_empty());
        let w0 = a2.longest_element(&[1, 2]).unwrap();
        assert_eq!(a2.inversions(&w0).len(), 3);
        let mut inv = a2.inversions(&a2.from_word(&[1, 2]).unwrap());
        inv.sort();
        assert_eq!(inv, vec![vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn bracket_words() {
        assert_eq!(word_from_bracket(3, 1, false, 3).unwrap(), vec![3, 2, 1]);
        assert_eq!(word_from_bracket(3, 1, true, 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(word_from_bracket(1, 7, false, 7).unwrap(), Vec::<usize>::new());
        assert!(word_from_bracket(9, 1, false, 8).is_err());
        assert!(word_from_bracket(0, 1, false, 8).is_err());
    }

    #[test]
    fn longest_elements() {
        let a2 = group(Family::A, 2);
        assert!(a2.is_identity(&a2.longest_element(&[]).unwrap()));
        assert_eq!(a2.length(&a2.longest_element(&[1, 2]).unwrap()), 3);
        let e6 = group(Family::E, 6);
        let w = e6.longest_element(&[2, 3, 4, 5]).unwrap();
        assert_eq!(e6.length(&w), 12);
        assert_eq!(e6.length(&e6.longest_element(&[1, 2, 3, 4, 5, 6]).unwrap()), 36);
        // inversion set of w_0^J is Phi_J^+
        for r in e6.inversions(&w) {
            assert_eq!(r[0], 0);
            assert_eq!(r[5], 0);
        }
    }

    #[test]
    fn min_coset_reps() {
        let a3 = group(Family::A, 3);
        assert!(a3.is_min_coset_rep(&a3.identity(), &[1, 2]).unwrap());
        assert!(!a3.is_min_coset_rep(&a3.from_word(&[2]).unwrap(), &[2, 3]).unwrap());
        // s_{[n,1]} is a minimal coset representative for W / W_{I - {1}}.
        for n in 2..=6 {
            let g = group(Family::A, n);
            let w1 = g.from_word(&word_from_bracket(n, 1, false, n).unwrap()).unwrap();
            let j: Vec<usize> = (2..=n).collect();
            assert!(g.is_min_coset_rep(&w1, &j).unwrap());
        }
    }

    #[test]
    fn group_operations() {
        let a2 = group(Family::A, 2);
        let w = a2.from_word(&[1, 2]).unwrap();
        let inv = a2.inverse(&w);
        assert!(a2.is_identity(&a2.mul(&w, &inv)));
        assert_eq!(a2.length(&inv), a2.length(&w));
        assert_eq!(inv, a2.from_word(&[2, 1]).unwrap());
        assert_eq!(a2.canonical_word(&inv), vec![2, 1]);
    }

    #[test]
    fn group_orders_by_enumeration() {
        for (f, n, expected) in [
            (Family::A, 2, 6),
            (Family::B, 2, 8),
            (Family::G, 2, 12),
            (Family::F, 4, 1152),
            (Family::D, 4, 192),
            (Family::B, 3, 48),
            (Family::C, 4, 384),
            (Family::A, 4, 120),
        ] {
            let g = group(f, n);
            assert_eq!(g.enumerate(10_000).unwrap().len(), expected, "{f}{n}");
            assert_eq!(g.order(), expected as u128);
        }
        assert_eq!(group(Family::E, 8).order(), 696_729_600);
        assert!(group(Family::F, 4).enumerate(100).is_err());
    }

    #[test]
    fn length_changes_by_one_exhaustive() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::G, 2), (Family::A, 2)] {
            let g = group(f, n);
            for w in g.enumerate(1000).unwrap() {
                for i in 0..n {
                    let l = g.length(&w) as i64;
                    let l2 = g.length(&g.mul_simple_right(&w, i)) as i64;
                    assert_eq!((l - l2).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn inversions_of_inverse_exhaustive() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::G, 2)] {
            let g = group(f, n);
            let sys = g.system();
            for w in g.enumerate(1000).unwrap() {
                let winv = g.inverse(&w);
                let mut lhs = g.inversion_indices(&winv);
                // -w applied to inversions(w)
                let mut rhs: Vec<usize> = g
                    .inversion_indices(&w)
                    .into_iter()
                    .map(|r| sys.negate_index(w.image(r)))
                    .collect();
                lhs.sort_unstable();
                rhs.sort_unstable();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn canonical_word_is_lex_smallest_reduced() {
        let g = group(Family::B, 3);
        let all = g.enumerate(1000).unwrap();
        // brute force: all reduced words of each element by BFS over words
        let mut best: HashMap<EltKey, Vec<usize>> = HashMap::new();
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for len in 0..=9 {
            let mut next = Vec::new();
            for word in &layer {
                let w = g.from_local_word(word).unwrap();
                if g.length(&w) != len {
                    continue;
                }
                let e = best.entry(g.key(&w)).or_insert_with(|| word.clone());
                if word < e {
                    *e = word.clone();
                }
                for i in 0..3 {
                    let mut wd = word.clone();
                    wd.push(i);
                    next.push(wd);
                }
            }
            layer = next;
        }
        for w in &all {
            assert_eq!(&g.canonical_local_word(w), &best[&g.key(w)]);
        }
    }

    #[test]
    fn twist_action_is_automorphism() {
        let g = group(Family::F, 4);
        let delta = build_twist(Family::F, 4, 2).unwrap();
        let all = g.enumerate(2000).unwrap();
        for (k, a) in all.iter().enumerate().step_by(37) {
            let b = &all[(k * 7 + 3) % all.len()];
            let lhs = g.apply_twist(&delta, &g.mul(a, b));
            let rhs = g.mul(&g.apply_twist(&delta, a), &g.apply_twist(&delta, b));
            assert_eq!(lhs, rhs);
            assert_eq!(g.length(&g.apply_twist(&delta, a)), g.length(a));
        }
    }

    fn arb_word(rank: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..rank, 0..40)
    }

    proptest! {
        #[test]
        fn canonical_word_round_trip(word in arb_word(8)) {
            let g = group(Family::E, 8);
            let w = g.from_local_word(&word).unwrap();
            let canon = g.canonical_local_word(&w);
            prop_assert_eq!(canon.len(), g.length(&w));
            prop_assert_eq!(g.from_local_word(&canon).unwrap(), w.clone());
            prop_assert_eq!(g.from_key(g.key(&w)), w);
        }

        #[test]
        fn length_step_randomized(word in arb_word(7), i in 0usize..7) {
            let g = group(Family::E, 7);
            let w = g.from_local_word(&word).unwrap();
            let l = g.length(&w) as i64;
            let l2 = g.length(&g.mul_simple_right(&w, i)) as i64;
            prop_assert_eq!((l - l2).abs(), 1);
        }

        #[test]
        fn action_is_homomorphism(a in arb_word(4), b in arb_word(4)) {
            let g = group(Family::F, 4);
            let wa = g.from_local_word(&a).unwrap();
            let wb = g.from_local_word(&b).unwrap();
            let mut ab = a.clone();
            ab.extend(&b);
            prop_assert_eq!(g.mul(&wa, &wb), g.from_local_word(&ab).unwrap());
        }
    }
}

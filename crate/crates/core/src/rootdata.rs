//! Root systems built from Cartan matrices, fundamental coweights and
//! diagram twists.
//!
//! Roots are integer coordinate vectors over the simple roots. Nodes carry
//! 1-based Bourbaki labels; a [`RootSystem`] for a parabolic subsystem keeps
//! the labels of the ambient system so words stay meaningful after
//! restriction. Internally everything is indexed by the 0-based local
//! position of a node.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::QuadExt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        Ok(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(Error::Parse(format!("unknown family {c:?}"))),
        })
    }

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Family::from_letter(c),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Cartan matrix in Bourbaki labelling, `C[i][j] = <alpha_j, alpha_i^vee>`
/// (0-based indices).
pub fn cartan_matrix(family: Family, rank: usize) -> Result<Vec<Vec<i32>>> {
    if !family.is_valid_rank(rank) {
        return Err(Error::InvalidType { family: family.letter(), rank });
    }
    let n = rank;
    let mut c = vec![vec![0i32; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i - 1][j - 1] = -1;
        c[j - 1][i - 1] = -1;
    };
    match family {
        Family::A | Family::B | Family::C => {
            for i in 1..n {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 1..n - 1 {
                link(i, i + 1);
            }
            link(n - 2, n);
        }
        Family::E => {
            link(1, 3);
            link(2, 4);
            for i in 3..n {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(1, 2);
            link(2, 3);
            link(3, 4);
        }
        Family::G => link(1, 2),
    }
    match family {
        // alpha_n short.
        Family::B => c[n - 1][n - 2] = -2,
        // alpha_n long.
        Family::C => c[n - 2][n - 1] = -2,
        // alpha_1, alpha_2 long; alpha_3, alpha_4 short.
        Family::F => c[2][1] = -2,
        // alpha_1 short, alpha_2 long.
        Family::G => c[0][1] = -3,
        _ => {}
    }
    Ok(c)
}

/// Finite crystallographic root system over a set of labelled nodes.
#[derive(Clone, Debug)]
pub struct RootSystem {
    labels: Vec<usize>,
    cartan: Vec<Vec<i32>>,
    /// Positive roots first (simple roots at `0..rank`), then their negatives
    /// in the same order.
    roots: Vec<Vec<i32>>,
    lookup: HashMap<Vec<i32>, u16>,
    /// `reflections[i][r]` is the index of `s_i(root r)`.
    reflections: Vec<Vec<u16>>,
    highest_root: Vec<i32>,
    n0: i32,
    cartan_type: Option<(Family, usize)>,
}

impl RootSystem {
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(family, rank)?;
        let mut sys = Self::from_cartan((1..=rank).collect(), cartan)?;
        sys.cartan_type = Some((family, rank));
        Ok(sys)
    }

    /// Builds the root system of a (possibly reducible) finite type Cartan
    /// matrix. Fails if the matrix is not of finite type.
    pub fn from_cartan(labels: Vec<usize>, cartan: Vec<Vec<i32>>) -> Result<Self> {
        let n = labels.len();
        if cartan.len() != n || cartan.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCartan("matrix shape does not match labels".into()));
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {i} is not 2")));
            }
            for j in 0..n {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::InvalidCartan(format!("bad entry ({i}, {j})")));
                }
            }
        }
        let positives = enumerate_positive_roots(&cartan)?;
        let npos = positives.len();
        let mut roots = positives.clone();
        roots.extend(positives.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
        let lookup: HashMap<Vec<i32>, u16> =
            roots.iter().enumerate().map(|(k, r)| (r.clone(), k as u16)).collect();
        let reflections = (0..n)
            .map(|i| {
                roots
                    .iter()
                    .map(|r| {
                        let image = reflect_coords(&cartan, i, r);
                        lookup[&image]
                    })
                    .collect()
            })
            .collect();
        let (highest_root, n0) = if npos == 0 {
            (Vec::new(), 0)
        } else {
            let top = positives.last().expect("nonempty").clone();
            let h = top.iter().sum();
            (top, h)
        };
        Ok(RootSystem {
            labels,
            cartan,
            roots,
            lookup,
            reflections,
            highest_root,
            n0,
            cartan_type: None,
        })
    }

    /// Parabolic subsystem on the given labels, in ascending label order.
    pub fn subsystem(&self, labels: &[usize]) -> Result<RootSystem> {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let locals = labels
            .iter()
            .map(|&l| self.local(l).ok_or(Error::IndexOutOfRange(l)))
            .collect::<Result<Vec<_>>>()?;
        let cartan = locals
            .iter()
            .map(|&i| locals.iter().map(|&j| self.cartan[i][j]).collect())
            .collect();
        RootSystem::from_cartan(labels, cartan)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn cartan_type(&self) -> Option<(Family, usize)> {
        self.cartan_type
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, local: usize) -> usize {
        self.labels[local]
    }

    pub fn local(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.roots[..self.num_positive()]
    }

    pub fn root(&self, idx: usize) -> &[i32] {
        &self.roots[idx]
    }

    pub fn root_index(&self, coords: &[i32]) -> Option<usize> {
        self.lookup.get(coords).map(|&k| k as usize)
    }

    pub fn is_positive_index(&self, idx: usize) -> bool {
        idx < self.num_positive()
    }

    pub fn negate_index(&self, idx: usize) -> usize {
        let n = self.num_positive();
        if idx < n {
            idx + n
        } else {
            idx - n
        }
    }

    /// Index of the simple root at local position `i`.
    pub fn simple_index(&self, i: usize) -> usize {
        i
    }

    /// If `idx` is a simple root, its local position.
    pub fn simple_position(&self, idx: usize) -> Option<usize> {
        (idx < self.rank()).then_some(idx)
    }

    pub fn reflection_table(&self, i: usize) -> &[u16] {
        &self.reflections[i]
    }

    /// Highest root; for a reducible system this is a root of maximal height.
    pub fn highest_root(&self) -> &[i32] {
        &self.highest_root
    }

    /// Height of the highest root (maximum over components).
    pub fn n0(&self) -> i32 {
        self.n0
    }

    /// Connected components of the Dynkin diagram as sets of local positions,
    /// ordered by their smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if !seen[j] && self.cartan[i][j] != 0 {
                        seen[j] = true;
                        comp.push(j);
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// `alpha(mu) = sum c_i m_i`.
    pub fn pairing(&self, alpha: &[i32], mu: &Coweight) -> Result<QuadExt> {
        pairing(alpha, mu)
    }
}

pub fn pairing(alpha: &[i32], mu: &Coweight) -> Result<QuadExt> {
    if alpha.len() != mu.coords.len() {
        return Err(Error::LengthMismatch { expected: mu.coords.len(), got: alpha.len() });
    }
    let mut acc = QuadExt::zero();
    for (c, m) in alpha.iter().zip(&mu.coords) {
        if *c != 0 {
            acc = acc.checked_add(&m.checked_mul(&QuadExt::from_int(i64::from(*c)))?)?;
        }
    }
    Ok(acc)
}

fn reflect_coords(cartan: &[Vec<i32>], i: usize, beta: &[i32]) -> Vec<i32> {
    let pair: i32 = beta.iter().zip(&cartan[i]).map(|(b, c)| b * c).sum();
    let mut out = beta.to_vec();
    out[i] -= pair;
    out
}

/// Closure of the simple roots under simple reflections, keeping positive
/// roots only. Sorted by height, ties broken by descending coordinates.
fn enumerate_positive_roots(cartan: &[Vec<i32>]) -> Result<Vec<Vec<i32>>> {
    const LIMIT: usize = 10_000;
    let n = cartan.len();
    let mut seen: HashMap<Vec<i32>, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let image = reflect_coords(cartan, i, &beta);
            if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) && !seen.contains_key(&image) {
                if seen.len() >= LIMIT {
                    return Err(Error::InvalidCartan("root system is not finite".into()));
                }
                seen.insert(image.clone(), ());
                queue.push_back(image);
            }
        }
    }
    let mut roots: Vec<Vec<i32>> = seen.into_keys().collect();
    roots.sort_by(|a, b| {
        let ha: i32 = a.iter().sum();
        let hb: i32 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    Ok(roots)
}

/// A coweight in the fundamental coweight basis, `mu = sum m_i omega_i^vee`,
/// indexed by local node position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight {
    pub coords: Vec<QuadExt>,
}

impl Coweight {
    pub fn new(coords: Vec<QuadExt>) -> Self {
        Coweight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Coweight { coords: vec![QuadExt::zero(); rank] }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Coweight { coords: values.iter().map(|&v| QuadExt::from_int(v)).collect() }
    }

    /// The fundamental coweight `omega_j^vee` of a rank `rank` system.
    pub fn fundamental(rank: usize, j: usize) -> Self {
        let mut mu = Self::zero(rank);
        mu.coords[j] = QuadExt::one();
        mu
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, s: &QuadExt) -> Self {
        Coweight { coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn is_dominant_regular(&self) -> bool {
        self.coords.iter().all(QuadExt::is_positive)
    }
}

/// A permutation of the nodes inducing an automorphism of the Coxeter graph.
///
/// For ordinary twists the permutation is a Cartan matrix automorphism; for
/// the Suzuki and Ree twists (`2B2`, `2G2`, `2F4`) it reverses arrows, i.e.
/// `C[d(i)][d(j)] = C[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Twist {
    perm: Vec<usize>,
    order: usize,
}

impl Twist {
    pub fn identity(rank: usize) -> Self {
        Twist { perm: (0..rank).collect(), order: 1 }
    }

    /// From a 0-based image table; `perm[i]` is the image of node `i`.
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Parse(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let mut order = 1;
        let mut cur = perm.clone();
        while cur.iter().enumerate().any(|(i, &p)| i != p) {
            cur = cur.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        Ok(Twist { perm, order })
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Twist {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Twist { perm: inv, order: self.order }
    }

    pub fn compose(&self, other: &Twist) -> Twist {
        // (self . other)(i) = self(other(i))
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        Twist::from_perm(perm).expect("composition of permutations")
    }

    pub fn power(&self, k: usize) -> Twist {
        let mut acc = Twist::identity(self.rank());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `C[d(i)][d(j)] == C[i][j]` for all `i, j`.
    pub fn is_cartan_automorphism(&self, cartan: &[Vec<i32>]) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| cartan[self.perm[i]][self.perm[j]] == cartan[i][j]))
    }

    /// `C[d(i)][d(j)] == C[j][i]` for all `i, j`.
    pub fn is_cartan_anti_automorphism(&self, cartan: &[Vec<i32>]) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| cartan[self.perm[i]][self.perm[j]] == cartan[j][i]))
    }

    /// The permutation preserves Coxeter matrix entries, so it acts on `W`.
    pub fn preserves_coxeter(&self, cartan: &[Vec<i32>]) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (a, b) = (self.perm[i], self.perm[j]);
                cartan[a][b] * cartan[b][a] == cartan[i][j] * cartan[j][i]
            })
        })
    }

    /// Restriction to a stable subset, re-indexed to the positions of `subset`
    /// (which must be sorted).
    pub fn restrict(&self, subset: &[usize]) -> Result<Twist> {
        let perm = subset
            .iter()
            .map(|&i| {
                let img = self.perm[i];
                subset.binary_search(&img).map_err(|_| Error::Parse("subset is not twist-stable".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Twist::from_perm(perm)
    }
}

/// The diagram twist of order `twist_order` for a Cartan type.
pub fn build_twist(family: Family, rank: usize, twist_order: usize) -> Result<Twist> {
    if !family.is_valid_rank(rank) {
        return Err(Error::InvalidType { family: family.letter(), rank });
    }
    let invalid = || Error::InvalidTwist { family: family.letter(), rank, order: twist_order };
    let one_based = |pairs: &[(usize, usize)]| -> Vec<usize> {
        let mut perm: Vec<usize> = (0..rank).collect();
        for &(from, to) in pairs {
            perm[from - 1] = to - 1;
        }
        perm
    };
    let perm = match (family, rank, twist_order) {
        (_, _, 1) => return Ok(Twist::identity(rank)),
        (Family::A, n, 2) if n >= 2 => (0..n).map(|i| n - 1 - i).collect(),
        (Family::D, n, 2) => one_based(&[(n - 1, n), (n, n - 1)]),
        (Family::D, 4, 3) => one_based(&[(1, 4), (3, 1), (4, 3)]),
        (Family::E, 6, 2) => one_based(&[(1, 6), (6, 1), (3, 5), (5, 3)]),
        (Family::B, 2, 2) | (Family::G, 2, 2) => one_based(&[(1, 2), (2, 1)]),
        (Family::F, 4, 2) => one_based(&[(1, 4), (4, 1), (2, 3), (3, 2)]),
        _ => return Err(invalid()),
    };
    Twist::from_perm(perm)
}

/// `result[d(i)] = mu[i]`, i.e. `omega_i^vee` maps to `omega_{d(i)}^vee`.
pub fn apply_twist_to_coweight(delta: &Twist, mu: &Coweight) -> Result<Coweight> {
    if delta.rank() != mu.rank() {
        return Err(Error::LengthMismatch { expected: delta.rank(), got: mu.rank() });
    }
    let mut out = Coweight::zero(mu.rank());
    for (i, m) in mu.coords.iter().enumerate() {
        out.coords[delta.apply(i)] = m.clone();
    }
    Ok(out)
}

/// Serialized as `{"family":"F","rank":4,"twist":2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupDesc {
    pub family: Family,
    pub rank: usize,
    pub twist: usize,
}

impl GroupDesc {
    pub fn new(family: Family, rank: usize, twist: usize) -> Self {
        GroupDesc { family, rank, twist }
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        RootSystem::build(self.family, self.rank)
    }

    pub fn twist(&self) -> Result<Twist> {
        build_twist(self.family, self.rank, self.twist)
    }

    /// Suzuki and Ree types, where the twist reverses arrows.
    pub fn is_very_twisted(&self) -> bool {
        self.twist == 2 && matches!(self.family, Family::B | Family::G | Family::F)
    }

    /// Smallest admissible `q`: `sqrt 2` for `2B2` and `2F4`, `sqrt 3` for
    /// `2G2`, and `2` otherwise.
    pub fn min_q(&self) -> QuadExt {
        match (self.family, self.twist) {
            (Family::B, 2) | (Family::F, 2) => QuadExt::sqrt(2).expect("sqrt2"),
            (Family::G, 2) => QuadExt::sqrt(3).expect("sqrt3"),
            _ => QuadExt::from_int(2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.twist().map(|_| ())
    }

    /// Every irreducible type with every diagram twist, rank at most `max_rank`,
    /// ordered by rank, family, twist.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<GroupDesc> {
        let families = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];
        let mut out = Vec::new();
        for rank in 1..=max_rank {
            for family in families {
                if family == Family::C && rank == 2 {
                    continue;
                }
                for twist in 1..=3 {
                    let d = GroupDesc::new(family, rank, twist);
                    if d.validate().is_ok() {
                        out.push(d);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist > 1 {
            write!(f, "{}{}{}", self.twist, self.family, self.rank)
        } else {
            write!(f, "{}{}", self.family, self.rank)
        }
    }
}

/// Parses `F4`, `2E6`, `3D4`, `A5`.
impl FromStr for GroupDesc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad group name {s:?}"));
        let pos = s.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
        let twist = if pos == 0 { 1 } else { s[..pos].parse().map_err(|_| bad())? };
        let family = Family::from_letter(s[pos..].chars().next().ok_or_else(bad)?)?;
        let rank = s[pos + 1..].parse().map_err(|_| bad())?;
        let desc = GroupDesc { family, rank, twist };
        desc.validate()?;
        Ok(desc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn all_types(max_rank: usize) -> Vec<(Family, usize)> {
        let mut out = Vec::new();
        for n in 1..=max_rank {
            for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
                if f.is_valid_rank(n) {
                    out.push((f, n));
                }
            }
        }
        out
    }

    fn closed_form_count(f: Family, n: usize) -> usize {
        match f {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => [36, 63, 120][n - 6],
            Family::F => 24,
            Family::G => 6,
        }
    }

    #[test]
    fn positive_root_counts() {
        for (f, n) in all_types(8) {
            let sys = RootSystem::build(f, n).unwrap();
            assert_eq!(sys.num_positive(), closed_form_count(f, n), "{f}{n}");
            let sum: i32 = sys.highest_root().iter().sum();
            assert_eq!(sys.n0(), sum);
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 1;
                assert_eq!(sys.root(i), &e[..]);
            }
        }
    }

    #[test]
    fn small_examples() {
        let a2 = RootSystem::build(Family::A, 2).unwrap();
        let mut pos: Vec<_> = a2.positive_roots().to_vec();
        pos.sort();
        assert_eq!(pos, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(a2.n0(), 2);

        let g2 = RootSystem::build(Family::G, 2).unwrap();
        assert_eq!(g2.highest_root(), &[3, 2]);
        assert_eq!(g2.n0(), 5);

        let e8 = RootSystem::build(Family::E, 8).unwrap();
        assert_eq!(e8.num_positive(), 120);
        assert_eq!(e8.n0(), 29);
        assert_eq!(e8.highest_root(), &[2, 3, 4, 6, 5, 4, 3, 2]);

        assert_eq!(RootSystem::build(Family::F, 4).unwrap().highest_root(), &[2, 3, 4, 2]);
        assert_eq!(RootSystem::build(Family::B, 3).unwrap().highest_root(), &[1, 2, 2]);
        assert_eq!(RootSystem::build(Family::C, 3).unwrap().highest_root(), &[2, 2, 1]);
    }

    #[test]
    fn invalid_types() {
        assert!(RootSystem::build(Family::E, 5).is_err());
        assert!(RootSystem::build(Family::D, 3).is_err());
        assert!(RootSystem::build(Family::G, 3).is_err());
        assert!(cartan_matrix(Family::A, 0).is_err());
    }

    #[test]
    fn cartan_shape() {
        for (f, n) in all_types(8) {
            let c = cartan_matrix(f, n).unwrap();
            for i in 0..n {
                assert_eq!(c[i][i], 2);
                for j in 0..n {
                    if i != j {
                        assert!(c[i][j] <= 0);
                    }
                }
            }
        }
        let f4 = cartan_matrix(Family::F, 4).unwrap();
        // <alpha_3, alpha_2^vee> = -1, <alpha_2, alpha_3^vee> = -2
        assert_eq!(f4[1][2], -1);
        assert_eq!(f4[2][1], -2);
    }

    #[test]
    fn reflections_permute_positive_roots() {
        for (f, n) in all_types(8) {
            let sys = RootSystem::build(f, n).unwrap();
            for i in 0..n {
                let table = sys.reflection_table(i);
                assert_eq!(table[i] as usize, sys.negate_index(i));
                let mut images: Vec<usize> = (0..sys.num_positive())
                    .filter(|&r| r != i)
                    .map(|r| table[r] as usize)
                    .collect();
                assert!(images.iter().all(|&r| sys.is_positive_index(r)));
                images.sort_unstable();
                images.dedup();
                assert_eq!(images.len(), sys.num_positive() - 1);
            }
        }
    }

    #[test]
    fn highest_root_dominates() {
        for (f, n) in all_types(8) {
            let sys = RootSystem::build(f, n).unwrap();
            let top = sys.highest_root().to_vec();
            for j in 0..n {
                let w = Coweight::fundamental(n, j);
                assert!(!pairing(&top, &w).unwrap().is_negative());
            }
            for r in sys.positive_roots() {
                assert!(r.iter().zip(&top).all(|(a, b)| a <= b), "{f}{n} {r:?}");
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let mu = Coweight::from_ints(&[3, 1]);
        assert_eq!(pairing(&[1, 2], &mu).unwrap(), QuadExt::from_int(5));
        for i in 0..3 {
            for j in 0..3 {
                let mut a = vec![0; 3];
                a[i] = 1;
                let v = pairing(&a, &Coweight::fundamental(3, j)).unwrap();
                assert_eq!(v, QuadExt::from_int(i64::from(i == j)));
            }
        }
        let g2 = RootSystem::build(Family::G, 2).unwrap();
        let v = g2.pairing(g2.highest_root(), &Coweight::from_ints(&[1, 1])).unwrap();
        assert_eq!(v, QuadExt::from_int(5));
        assert!(matches!(
            pairing(&[1, 2, 3], &mu),
            Err(Error::LengthMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn twist_examples() {
        let d4 = build_twist(Family::D, 4, 3).unwrap();
        // 3 -> 1, 4 -> 3, 1 -> 4, 2 -> 2 (1-based)
        assert_eq!(d4.perm(), &[3, 1, 0, 2]);
        assert_eq!(d4.order(), 3);
        let inv = d4.inverse();
        assert_eq!(inv.apply(0), 2);
        assert_eq!(inv.apply(2), 3);
        assert_eq!(inv.apply(3), 0);

        let e6 = build_twist(Family::E, 6, 2).unwrap();
        assert_eq!(e6.perm(), &[5, 1, 4, 3, 2, 0]);
        let f4 = build_twist(Family::F, 4, 2).unwrap();
        assert_eq!(f4.perm(), &[3, 2, 1, 0]);

        assert!(build_twist(Family::E, 7, 2).is_err());
        assert!(build_twist(Family::A, 1, 2).is_err());
        assert!(build_twist(Family::B, 3, 2).is_err());
        assert!(build_twist(Family::A, 3, 3).is_err());
    }

    fn supported_twists() -> Vec<(Family, usize, usize)> {
        let mut out = Vec::new();
        for n in 2..=8 {
            out.push((Family::A, n, 2));
        }
        for n in 4..=8 {
            out.push((Family::D, n, 2));
        }
        out.extend([
            (Family::D, 4, 3),
            (Family::E, 6, 2),
            (Family::B, 2, 2),
            (Family::G, 2, 2),
            (Family::F, 4, 2),
        ]);
        out
    }

    #[test]
    fn twists_are_cartan_compatible() {
        for (f, n, o) in supported_twists() {
            let c = cartan_matrix(f, n).unwrap();
            let t = build_twist(f, n, o).unwrap();
            assert_eq!(t.order(), o);
            assert_eq!(t.power(o), Twist::identity(n));
            assert!(t.preserves_coxeter(&c));
            let desc = GroupDesc::new(f, n, o);
            if desc.is_very_twisted() {
                assert!(t.is_cartan_anti_automorphism(&c), "{desc}");
                assert!(!t.is_cartan_automorphism(&c), "{desc}");
            } else {
                // symmetric Cartan matrix: both forms agree
                assert!(t.is_cartan_automorphism(&c), "{desc}");
                assert!(t.is_cartan_anti_automorphism(&c), "{desc}");
            }
        }
    }

    #[test]
    fn twist_on_coweights() {
        let e6 = build_twist(Family::E, 6, 2).unwrap();
        let mu = Coweight::fundamental(6, 0);
        assert_eq!(apply_twist_to_coweight(&e6, &mu).unwrap(), Coweight::fundamental(6, 5));
        let id = Twist::identity(3);
        let mu = Coweight::from_ints(&[1, 2, 3]);
        assert_eq!(apply_twist_to_coweight(&id, &mu).unwrap(), mu);
        let d4 = build_twist(Family::D, 4, 3).unwrap();
        let mu = Coweight::from_ints(&[1, 2, 3, 4]);
        let mut cur = mu.clone();
        for _ in 0..3 {
            cur = apply_twist_to_coweight(&d4, &cur).unwrap();
        }
        assert_eq!(cur, mu);
        assert!(apply_twist_to_coweight(&d4, &Coweight::zero(2)).is_err());
    }

    #[test]
    fn group_desc_json_and_names() {
        let g = GroupDesc::new(Family::F, 4, 2);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"family":"F","rank":4,"twist":2}"#);
        assert_eq!(serde_json::from_str::<GroupDesc>(&s).unwrap(), g);
        assert_eq!(g.to_string(), "2F4");
        assert_eq!("2F4".parse::<GroupDesc>().unwrap(), g);
        assert_eq!("E8".parse::<GroupDesc>().unwrap(), GroupDesc::new(Family::E, 8, 1));
        assert!("2E7".parse::<GroupDesc>().is_err());
    }

    #[test]
    fn subsystem_keeps_labels() {
        let e6 = RootSystem::build(Family::E, 6).unwrap();
        let d4 = e6.subsystem(&[2, 3, 4, 5]).unwrap();
        assert_eq!(d4.labels(), &[2, 3, 4, 5]);
        assert_eq!(d4.num_positive(), 12);
        assert_eq!(d4.components().len(), 1);
        let split = e6.subsystem(&[1, 2, 6]).unwrap();
        assert_eq!(split.components().len(), 3);
        assert_eq!(split.num_positive(), 3);
    }
}

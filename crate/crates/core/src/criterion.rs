//! Strict inequality systems for the affineness criterion, exact
//! feasibility, and certificates.
//!
//! Coweights are written `mu = sum_i m_i omega_i`, so `alpha(mu)` is the dot
//! product of root coordinates with `m`. The Frobenius acts on coweights by
//! `F* mu = q delta^{-1}(mu)`, whose `i`-th coordinate is `q m_{delta(i)}`.

pub mod lp;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classes::{compute_i_j_x, shift_closure, DeltaClass, Direction, CLOSURE_BUDGET};
use crate::error::{Error, Result};
use crate::exactnum::{QuadExt, Rational};
use crate::rootdata::{Coweight, GroupDesc, Twist};
use crate::weyl::{WeylElt, WeylGroup};

pub use lp::{is_gordan_certificate, solve_strict, StrictOutcome};

/// Default box bound `|m_i| <= 2^16` for the feasibility LP.
pub fn default_bound() -> QuadExt {
    QuadExt::from_int(1 << 16)
}

/// `q <u, m> - <v, m> > 0`, tagged with the node `i` it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QConstraint {
    pub node: usize,
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

/// `<c, m> > 0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureConstraint {
    pub c: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IneqSystem {
    pub rank: usize,
    /// Local positions of the free coordinates; all others are zero.
    pub vars: Vec<usize>,
    pub q: QuadExt,
    pub q_constraints: Vec<QConstraint>,
    pub pure: Vec<PureConstraint>,
}

fn int_vec(xs: &[i32]) -> Vec<Rational> {
    xs.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

fn unit(rank: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::from_integer(0.into()); rank];
    v[i] = Rational::from_integer(1.into());
    v
}

fn dot(c: &[Rational], m: &[QuadExt]) -> Result<QuadExt> {
    c.iter().zip(m).try_fold(QuadExt::zero(), |acc, (ci, mi)| acc.checked_add(&mi.scale(ci)))
}

impl IneqSystem {
    pub fn num_constraints(&self) -> usize {
        self.q_constraints.len() + self.pure.len()
    }

    /// Every constraint as a linear form in all `rank` coordinates, q-rows
    /// first.
    pub fn rows(&self) -> Result<Vec<Vec<QuadExt>>> {
        let mut rows = Vec::with_capacity(self.num_constraints());
        for qc in &self.q_constraints {
            rows.push(
                qc.u.iter()
                    .zip(&qc.v)
                    .map(|(u, v)| self.q.scale(u).checked_sub(&QuadExt::rational(v.clone())))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        for pc in &self.pure {
            rows.push(pc.c.iter().map(|c| QuadExt::rational(c.clone())).collect());
        }
        Ok(rows)
    }

    /// Values of every left-hand side at `m`, q-rows first.
    pub fn evaluate(&self, m: &[QuadExt]) -> Result<Vec<QuadExt>> {
        if m.len() != self.rank {
            return Err(Error::LengthMismatch { expected: self.rank, got: m.len() });
        }
        let mut out = Vec::with_capacity(self.num_constraints());
        for qc in &self.q_constraints {
            out.push(self.q.checked_mul(&dot(&qc.u, m)?)?.checked_sub(&dot(&qc.v, m)?)?);
        }
        for pc in &self.pure {
            out.push(dot(&pc.c, m)?);
        }
        Ok(out)
    }

    /// Index of the first constraint not strictly satisfied at `m`.
    pub fn first_violation(&self, m: &[QuadExt]) -> Result<Option<usize>> {
        Ok(self.evaluate(m)?.iter().position(|x| !x.is_positive()))
    }

    pub fn is_satisfied(&self, m: &[QuadExt]) -> Result<bool> {
        Ok(self.first_violation(m)?.is_none())
    }

    pub fn describe_constraint(&self, k: usize) -> String {
        let fmt_vec = |v: &[Rational]| {
            v.iter().map(crate::exactnum::rational_to_string).collect::<Vec<_>>().join(",")
        };
        if k < self.q_constraints.len() {
            let qc = &self.q_constraints[k];
            format!("node {}: q<[{}],m> - <[{}],m> > 0", qc.node + 1, fmt_vec(&qc.u), fmt_vec(&qc.v))
        } else {
            format!("<[{}],m> > 0", fmt_vec(&self.pure[k - self.q_constraints.len()].c))
        }
    }

    /// The same constraints with `q` replaced.
    pub fn with_q(&self, q: QuadExt) -> IneqSystem {
        IneqSystem { q, ..self.clone() }
    }
}

/// Pure constraints `alpha(mu) > 0` for the inversions of `w`; q-constraints
/// `q m_{delta(i)} - (w^{-1} alpha_i)(mu) > 0` for every node `i`.
pub fn build_system_lemma_1_11(g: &WeylGroup, w: &WeylElt, delta: &Twist, q: &QuadExt) -> IneqSystem {
    let n = g.rank();
    let winv = g.inverse(w);
    IneqSystem {
        rank: n,
        vars: (0..n).collect(),
        q: q.clone(),
        q_constraints: (0..n)
            .map(|i| QConstraint { node: i, u: unit(n, delta.apply(i)), v: int_vec(g.act_on_simple(&winv, i)) })
            .collect(),
        pure: g.inversions(w).iter().map(|r| PureConstraint { c: int_vec(r) }).collect(),
    }
}

/// Pure constraints over the inversions of `w^{-1}`; q-constraints
/// `q m_i - (w alpha_{delta^{-1}(i)})(mu) > 0` for every node `i`.
pub fn build_system_1_13a(g: &WeylGroup, w: &WeylElt, delta: &Twist, q: &QuadExt) -> IneqSystem {
    let n = g.rank();
    let dinv = delta.inverse();
    IneqSystem {
        rank: n,
        vars: (0..n).collect(),
        q: q.clone(),
        q_constraints: (0..n)
            .map(|i| QConstraint { node: i, u: unit(n, i), v: int_vec(g.act_on_simple(w, dinv.apply(i))) })
            .collect(),
        pure: g.inversions(&g.inverse(w)).iter().map(|r| PureConstraint { c: int_vec(r) }).collect(),
    }
}

/// The `build_system_1_13a` q-constraints with `mu` in the dominant chamber: each `m_i > 0`
/// replaces the inversion constraints.
pub fn build_system_1_13b(g: &WeylGroup, w: &WeylElt, delta: &Twist, q: &QuadExt) -> IneqSystem {
    let n = g.rank();
    IneqSystem {
        pure: (0..n).map(|i| PureConstraint { c: unit(n, i) }).collect(),
        ..build_system_1_13a(g, w, delta, q)
    }
}

/// The system of condition `(J, w1)`: variables outside
/// `K = I(J, w1, delta^{-1})`, q-constraints for nodes outside `K` with the
/// pairing restricted to those variables, and positivity of each variable.
/// `j_set` is in local positions.
pub fn build_system_star(
    g: &WeylGroup,
    j_set: &[usize],
    w1: &WeylElt,
    delta: &Twist,
    q: &QuadExt,
) -> Result<IneqSystem> {
    let n = g.rank();
    let dinv = delta.inverse();
    let k = compute_i_j_x(g, j_set, w1, &dinv)?;
    let vars: Vec<usize> = (0..n).filter(|i| !k.contains(i)).collect();
    let restrict = |coords: &[i32]| -> Vec<Rational> {
        coords
            .iter()
            .enumerate()
            .map(|(j, &c)| Rational::from_integer(if k.contains(&j) { 0 } else { c }.into()))
            .collect()
    };
    Ok(IneqSystem {
        rank: n,
        q: q.clone(),
        q_constraints: vars
            .iter()
            .map(|&i| QConstraint { node: i, u: unit(n, i), v: restrict(g.act_on_simple(w1, dinv.apply(i))) })
            .collect(),
        pure: vars.iter().map(|&i| PureConstraint { c: unit(n, i) }).collect(),
        vars,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// A strictly satisfying point, zero off the free coordinates.
    Feasible(Coweight),
    /// Gordan multipliers, one per constraint in `rows()` order.
    Infeasible(Vec<QuadExt>),
}

/// Exact decision with the default box bound.
pub fn decide(system: &IneqSystem) -> Result<Feasibility> {
    decide_with_bound(system, &default_bound())
}

pub fn decide_with_bound(system: &IneqSystem, bound: &QuadExt) -> Result<Feasibility> {
    let full_rows = system.rows()?;
    let rows: Vec<Vec<QuadExt>> =
        full_rows.iter().map(|r| system.vars.iter().map(|&i| r[i].clone()).collect()).collect();
    Ok(match solve_strict(&rows, system.vars.len(), bound) {
        StrictOutcome::Feasible(point) => {
            let mut coords = vec![QuadExt::zero(); system.rank];
            for (&i, x) in system.vars.iter().zip(point) {
                coords[i] = x;
            }
            debug_assert!(system.is_satisfied(&coords).unwrap_or(false));
            Feasibility::Feasible(Coweight::new(coords))
        }
        StrictOutcome::Infeasible(y) => Feasibility::Infeasible(y),
    })
}

/// A strictly satisfying point, if any.
pub fn feasible(system: &IneqSystem) -> Result<Option<Coweight>> {
    Ok(match decide(system)? {
        Feasibility::Feasible(mu) => Some(mu),
        Feasibility::Infeasible(_) => None,
    })
}

/// Checks Gordan multipliers against the system's rows.
pub fn verify_infeasibility_witness(system: &IneqSystem, y: &[QuadExt]) -> Result<bool> {
    Ok(is_gordan_certificate(&system.rows()?, system.rank, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    #[serde(rename = "lemma-1.11")]
    Lemma111,
    #[serde(rename = "stmt-1.13a")]
    Stmt113a,
}

impl Form {
    /// The class direction in which `w` lives for this form.
    pub fn direction(self) -> Direction {
        match self {
            Form::Lemma111 => Direction::Delta,
            Form::Stmt113a => Direction::DeltaInv,
        }
    }

    pub fn build(self, g: &WeylGroup, w: &WeylElt, delta: &Twist, q: &QuadExt) -> IneqSystem {
        match self {
            Form::Lemma111 => build_system_lemma_1_11(g, w, delta, q),
            Form::Stmt113a => build_system_1_13a(g, w, delta, q),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Lemma111 => "lemma-1.11",
            Form::Stmt113a => "stmt-1.13a",
        })
    }
}

/// A pair `(w, mu)` relative to a group and twist held by the caller.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub form: Form,
    pub w: WeylElt,
    pub mu: Coweight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Rebuilds the system for `(w, delta, q)` and evaluates it at `mu`.
pub fn check_witness(g: &WeylGroup, delta: &Twist, q: &QuadExt, wit: &Witness) -> Result<Verdict> {
    if wit.mu.rank() != g.rank() {
        return Err(Error::LengthMismatch { expected: g.rank(), got: wit.mu.rank() });
    }
    for x in wit.mu.coords.iter() {
        if !x.compatible(q) {
            return Err(Error::IncompatibleRadicands(x.d(), q.d()));
        }
    }
    let system = wit.form.build(g, &wit.w, delta, q);
    Ok(match system.first_violation(&wit.mu.coords)? {
        None => Verdict::Accept,
        Some(k) => Verdict::Reject(format!("violated {}", system.describe_constraint(k))),
    })
}

pub const CERTIFICATE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub group: GroupDesc,
    pub direction: Direction,
    pub q: QuadExt,
    /// Labels.
    pub w: Vec<usize>,
    pub form: Form,
    pub mu: Coweight,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    format_version: u32,
    group: GroupDesc,
    direction: Direction,
    q: QuadExt,
    w: Vec<usize>,
    form: Form,
    mu: Vec<QuadExt>,
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRepr {
            format_version: CERTIFICATE_FORMAT_VERSION,
            group: self.group,
            direction: self.direction,
            q: self.q.clone(),
            w: self.w.clone(),
            form: self.form,
            mu: self.mu.coords.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CertificateRepr::deserialize(d)?;
        if r.format_version != CERTIFICATE_FORMAT_VERSION {
            return Err(serde::de::Error::custom(format!("unsupported format_version {}", r.format_version)));
        }
        Ok(Certificate { group: r.group, direction: r.direction, q: r.q, w: r.w, form: r.form, mu: Coweight::new(r.mu) })
    }
}

impl Certificate {
    pub fn from_witness(group: GroupDesc, g: &WeylGroup, q: &QuadExt, wit: &Witness) -> Self {
        Certificate {
            group,
            direction: wit.form.direction(),
            q: q.clone(),
            w: g.canonical_word(&wit.w),
            form: wit.form,
            mu: wit.mu.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }
}

/// Independent re-verification: rebuilds the group and the system from the
/// certificate's data alone.
pub fn check_certificate(cert: &Certificate) -> Result<Verdict> {
    cert.group.validate().map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    if cert.direction != cert.form.direction() {
        return Err(Error::MalformedCertificate(format!(
            "form {} requires direction {}",
            cert.form,
            cert.form.direction().as_str()
        )));
    }
    let g = WeylGroup::new(cert.group.root_system()?);
    let delta = cert.group.twist()?;
    if cert.mu.rank() != g.rank() {
        return Err(Error::MalformedCertificate(format!("mu has {} coordinates, expected {}", cert.mu.rank(), g.rank())));
    }
    let w = g.from_word(&cert.w).map_err(|_| Error::MalformedCertificate(format!("bad word {:?}", cert.w)))?;
    if !cert.q.is_positive() {
        return Err(Error::MalformedCertificate("q must be positive".into()));
    }
    let wit = Witness { form: cert.form, w, mu: cert.mu.clone() };
    check_witness(&g, &delta, &cert.q, &wit).map_err(|e| Error::MalformedCertificate(e.to_string()))
}

/// Candidate minimal elements in search order: the cyclic-shift class of
/// the representative first, then the remaining minimal elements, each
/// block sorted by canonical word.
pub fn min_element_candidates(g: &WeylGroup, delta: &Twist, class: &DeltaClass) -> Result<Vec<WeylElt>> {
    let closure = shift_closure(g, &class.representative, delta, CLOSURE_BUDGET, false)?;
    let mut cyc: Vec<(Vec<usize>, WeylElt)> = closure
        .elements(g)
        .into_iter()
        .filter(|w| g.length(w) == class.min_length)
        .map(|w| (g.canonical_local_word(&w), w))
        .collect();
    cyc.sort();
    let mut rest: Vec<(Vec<usize>, WeylElt)> = class
        .min_elements
        .iter()
        .filter(|w| !cyc.iter().any(|(_, c)| c == *w))
        .map(|w| (g.canonical_local_word(w), w.clone()))
        .collect();
    rest.sort();
    Ok(cyc.into_iter().chain(rest).map(|(_, w)| w).collect())
}

/// First minimal element of the class whose `build_system_lemma_1_11` system is feasible,
/// with its point. Failure contradicts the existence statement and is
/// reported as [`Error::Falsified`].
pub fn certify_min_element(g: &WeylGroup, delta: &Twist, class: &DeltaClass, q: &QuadExt) -> Result<Witness> {
    if class.direction != Direction::Delta {
        return Err(Error::MalformedCertificate("certify_min_element expects a delta-class".into()));
    }
    for w in min_element_candidates(g, delta, class)? {
        let system = build_system_lemma_1_11(g, &w, delta, q);
        if let Some(mu) = feasible(&system)? {
            let wit = Witness { form: Form::Lemma111, w, mu };
            if !check_witness(g, delta, q, &wit)?.is_accept() {
                return Err(Error::Falsified("solver point rejected by checker".into()));
            }
            return Ok(wit);
        }
    }
    Err(Error::Falsified(format!("no minimal element of class {:?} admits a point at q = {q}", class.rep_word)))
}

/// [`certify_min_element`] for a named group, as a portable certificate.
pub fn certify_class(desc: &GroupDesc, class: &DeltaClass, q: &QuadExt) -> Result<Certificate> {
    let g = WeylGroup::new(desc.root_system()?);
    let delta = desc.twist()?;
    let wit = certify_min_element(&g, &delta, class, q)?;
    Ok(Certificate::from_witness(*desc, &g, q, &wit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::enumerate_delta_classes;
    use crate::rootdata::{build_twist, Family, RootSystem};

    fn group(f: Family, n: usize) -> WeylGroup {
        WeylGroup::new(RootSystem::build(f, n).unwrap())
    }

    fn qi(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    fn mu(vals: &[i64]) -> Vec<QuadExt> {
        vals.iter().map(|&v| qi(v)).collect()
    }

    #[test]
    fn identity_system() {
        let g = group(Family::A, 3);
        let id = Twist::identity(3);
        let s = build_system_lemma_1_11(&g, &g.identity(), &id, &qi(2));
        assert!(s.pure.is_empty());
        assert!(s.is_satisfied(&mu(&[1, 1, 1])).unwrap());
        assert!(feasible(&s).unwrap().is_some());
    }

    #[test]
    fn g2_case2_point() {
        let g = group(Family::G, 2);
        let id = Twist::identity(2);
        let w1 = g.from_word(&[1, 2, 1, 2]).unwrap();
        // w1 alpha_1 = alpha_1 + alpha_2 gives q m1 - m1 - m2 in both forms
        let a = build_system_1_13a(&g, &w1, &id, &qi(2));
        let l = build_system_lemma_1_11(&g, &g.inverse(&w1), &id, &qi(2));
        for s in [&a, &l] {
            assert_eq!(s.q_constraints[0].v, int_vec(&[1, 1]));
            assert!(s.evaluate(&mu(&[2, 1])).unwrap()[0].is_positive());
        }
    }

    #[test]
    fn a2_longest_feasible() {
        let g = group(Family::A, 2);
        let w0 = g.longest_element(&[1, 2]).unwrap();
        let s = build_system_lemma_1_11(&g, &w0, &Twist::identity(2), &qi(2));
        assert_eq!(s.pure.len(), 3);
        let point = feasible(&s).unwrap().unwrap();
        assert!(s.is_satisfied(&point.coords).unwrap());
    }

    fn f4_case4() -> (WeylGroup, Twist, WeylElt) {
        let g = group(Family::F, 4);
        let delta = build_twist(Family::F, 4, 2).unwrap();
        let w = g.from_word(&[3, 2, 1, 2, 3, 2, 4, 3, 2, 1]).unwrap();
        (g, delta, w)
    }

    #[test]
    fn twisted_f4_spade_point() {
        let (g, delta, w) = f4_case4();
        let q = QuadExt::sqrt(2).unwrap();
        let good = Witness { form: Form::Stmt113a, w: w.clone(), mu: Coweight::from_ints(&[3, 1, 3, -3]) };
        assert!(check_witness(&g, &delta, &q, &good).unwrap().is_accept());
        let bad = Witness { form: Form::Stmt113a, w, mu: Coweight::from_ints(&[3, 1, 3, 3]) };
        assert!(!check_witness(&g, &delta, &q, &bad).unwrap().is_accept());
    }

    #[test]
    fn certificate_json_round_trip() {
        let (g, delta, w) = f4_case4();
        let q = QuadExt::sqrt(2).unwrap();
        let desc = GroupDesc::new(Family::F, 4, 2);
        let wit = Witness { form: Form::Stmt113a, w, mu: Coweight::from_ints(&[3, 1, 3, -3]) };
        assert!(check_witness(&g, &delta, &q, &wit).unwrap().is_accept());
        let cert = Certificate::from_witness(desc, &g, &q, &wit);
        let json = cert.to_json().unwrap();
        assert!(json.starts_with(r#"{"format_version":1,"group":{"family":"F","rank":4,"twist":2},"direction":"delta_inv","#));
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json().unwrap(), json);
        assert!(check_certificate(&back).unwrap().is_accept());
    }

    #[test]
    fn malformed_certificates() {
        let desc = GroupDesc::new(Family::A, 2, 1);
        let base = Certificate {
            group: desc,
            direction: Direction::Delta,
            q: qi(2),
            w: vec![1],
            form: Form::Lemma111,
            mu: Coweight::from_ints(&[1, 1]),
        };
        assert!(check_certificate(&Certificate { w: vec![3], ..base.clone() }).is_err());
        assert!(check_certificate(&Certificate { mu: Coweight::from_ints(&[1]), ..base.clone() }).is_err());
        assert!(check_certificate(&Certificate { direction: Direction::DeltaInv, ..base.clone() }).is_err());
        let mixed = Coweight::new(vec![QuadExt::sqrt(3).unwrap(), qi(1)]);
        assert!(check_certificate(&Certificate { q: QuadExt::sqrt(2).unwrap(), mu: mixed, ..base.clone() }).is_err());
        assert!(Certificate::from_json("{\"format_version\":2}").is_err());
    }

    #[test]
    fn star_type_a() {
        for n in 2..=6 {
            let g = group(Family::A, n);
            let w1 = g.from_word(&crate::weyl::word_from_bracket(n, 1, false, n).unwrap()).unwrap();
            let j: Vec<usize> = (1..n).collect();
            let s = build_system_star(&g, &j, &w1, &Twist::identity(n), &qi(2)).unwrap();
            assert_eq!(s.vars, (0..n).collect::<Vec<_>>());
            assert!(s.is_satisfied(&vec![qi(1); n]).unwrap());
        }
    }

    #[test]
    fn infeasible_witness_checks() {
        let g = group(Family::A, 1);
        let s = IneqSystem {
            rank: 1,
            vars: vec![0],
            q: qi(2),
            q_constraints: vec![],
            pure: vec![PureConstraint { c: int_vec(&[1]) }, PureConstraint { c: int_vec(&[-1]) }],
        };
        let _ = g;
        match decide(&s).unwrap() {
            Feasibility::Infeasible(y) => assert!(verify_infeasibility_witness(&s, &y).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certify_small_classes() {
        let desc = GroupDesc::new(Family::B, 2, 2);
        let g = WeylGroup::new(desc.root_system().unwrap());
        let delta = desc.twist().unwrap();
        let q = desc.min_q();
        for class in enumerate_delta_classes(&desc, Direction::Delta).unwrap() {
            let cert = certify_class(&desc, &class, &q).unwrap();
            assert!(check_certificate(&cert).unwrap().is_accept());
            let _ = (&g, &delta);
        }
        let a2 = GroupDesc::new(Family::A, 2, 1);
        let classes = enumerate_delta_classes(&a2, Direction::Delta).unwrap();
        let cert = certify_class(&a2, &classes[0], &qi(2)).unwrap();
        assert!(cert.w.is_empty());
    }
}

//! Constructive certificates: lifting from a twist-stable parabolic, products
//! over orthogonal and cyclically permuted factors, and the extension through
//! condition `(J, w1)`. Every constructed point is re-checked from scratch
//! before it is returned.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::classes::{
    compute_i_j_x, enumerate_class_table, enumerate_group, induced_twist, supp_delta, ClassTable, DeltaClass,
    Direction, ENUMERATION_BUDGET,
};
use crate::criterion::{
    build_system_1_13a, build_system_1_13b, build_system_lemma_1_11, build_system_star, check_certificate, decide,
    Certificate, Feasibility, Form, IneqSystem, Witness,
};
use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::papertables::{load_case_records_up_to, reading_j_w1, spade_point, Reading};
use crate::rootdata::{Coweight, GroupDesc, RootSystem, Twist};
use crate::weyl::{WeylElt, WeylGroup};

/// Which strict system a constructed point satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReduceForm {
    Lemma111,
    Stmt113a,
    /// `Stmt113a` rows with a dominant point.
    Stmt113b,
}

impl ReduceForm {
    pub fn build(self, g: &WeylGroup, w: &WeylElt, delta: &Twist, q: &QuadExt) -> IneqSystem {
        match self {
            ReduceForm::Lemma111 => build_system_lemma_1_11(g, w, delta, q),
            ReduceForm::Stmt113a => build_system_1_13a(g, w, delta, q),
            ReduceForm::Stmt113b => build_system_1_13b(g, w, delta, q),
        }
    }
}

/// A point for `w` on a possibly reducible root system with twist `delta`.
#[derive(Clone, Debug)]
pub struct LocalCert {
    pub sys: Arc<RootSystem>,
    pub delta: Twist,
    pub q: QuadExt,
    pub form: ReduceForm,
    pub w: WeylElt,
    pub mu: Coweight,
}

impl LocalCert {
    pub fn group(&self) -> WeylGroup {
        WeylGroup::from_arc(self.sys.clone())
    }

    pub fn holds(&self) -> Result<bool> {
        let g = self.group();
        self.form.build(&g, &self.w, &self.delta, &self.q).is_satisfied(&self.mu.coords)
    }

    /// Canonical word of `w` in labels.
    pub fn word(&self) -> Vec<usize> {
        self.group().canonical_word(&self.w)
    }

    fn validated(self, what: &str) -> Result<Self> {
        if self.holds()? {
            Ok(self)
        } else {
            Err(Error::Falsified(format!("{what}: constructed point fails its own system")))
        }
    }

    /// The same data read in another form; re-checked.
    pub fn as_form(&self, form: ReduceForm) -> Result<LocalCert> {
        LocalCert { form, ..self.clone() }.validated("form change")
    }

    /// A serialisable certificate; `sys` must be the full system of `desc`.
    pub fn to_certificate(&self, desc: GroupDesc) -> Result<Certificate> {
        let form = match self.form {
            ReduceForm::Lemma111 => Form::Lemma111,
            ReduceForm::Stmt113a | ReduceForm::Stmt113b => Form::Stmt113a,
        };
        let g = self.group();
        let cert = Certificate::from_witness(desc, &g, &self.q, &Witness { form, w: self.w.clone(), mu: self.mu.clone() });
        if !check_certificate(&cert)?.is_accept() {
            return Err(Error::Falsified("constructed certificate rejected by the checker".into()));
        }
        Ok(cert)
    }
}

fn embed(from: &WeylGroup, to: &WeylGroup, w: &WeylElt) -> Result<WeylElt> {
    to.from_word(&from.canonical_word(w))
}

fn max_abs(coords: &[QuadExt]) -> QuadExt {
    coords.iter().map(QuadExt::abs).fold(QuadExt::zero(), |a, b| if b > a { b } else { a })
}

/// Record of a parabolic lift.
#[derive(Clone, Debug)]
pub struct LiftPlan {
    /// Labels.
    pub j: Vec<usize>,
    pub m: QuadExt,
    pub lambda: Coweight,
}

/// `lambda = mu + m sum_{i not in J} omega_i` with
/// `m = n0 max_J |m_i| / (q - 1) + 1`.
fn lift_point(full: &RootSystem, j_local: &[usize], inner_mu: &[QuadExt], q: &QuadExt) -> Result<(QuadExt, Coweight)> {
    let one = QuadExt::one();
    if *q <= one {
        return Err(Error::Precondition("lift needs q > 1".into()));
    }
    let n0 = QuadExt::from_int(full.n0() as i64);
    let m = &(&n0 * &max_abs(inner_mu)).checked_div(&(q - &one))? + &one;
    let coords = (0..full.rank())
        .map(|i| match j_local.iter().position(|&x| x == i) {
            Some(pos) => inner_mu[pos].clone(),
            None => m.clone(),
        })
        .collect();
    Ok((m, Coweight::new(coords)))
}

/// Lifts a point for `w` in `W_J` (`inner.sys` a subsystem of `full` on a
/// `delta`-stable `J`) to `W`.
pub fn lift_to_full(full: &Arc<RootSystem>, delta: &Twist, inner: &LocalCert) -> Result<(LocalCert, LiftPlan)> {
    let g = WeylGroup::from_arc(full.clone());
    let j = inner.sys.labels().to_vec();
    let j_local = g.labels_to_local(&j)?;
    if delta.restrict(&j_local)? != inner.delta {
        return Err(Error::Precondition("inner twist is not the restriction of delta".into()));
    }
    let w = embed(&inner.group(), &g, &inner.w)?;
    let (m, lambda) = if j_local.len() == g.rank() {
        (QuadExt::zero(), inner.mu.clone())
    } else {
        lift_point(full, &j_local, &inner.mu.coords, &inner.q)?
    };
    let cert = LocalCert {
        sys: full.clone(),
        delta: delta.clone(),
        q: inner.q.clone(),
        form: inner.form,
        w,
        mu: lambda.clone(),
    }
    .validated("parabolic lift")?;
    Ok((cert, LiftPlan { j, m, lambda }))
}

/// Lift of the identity element from the empty parabolic.
fn lift_identity(full: &Arc<RootSystem>, delta: &Twist, q: &QuadExt, form: ReduceForm) -> Result<LocalCert> {
    let (_, lambda) = lift_point(full, &[], &[], q)?;
    let g = WeylGroup::from_arc(full.clone());
    LocalCert { sys: full.clone(), delta: delta.clone(), q: q.clone(), form, w: g.identity(), mu: lambda }
        .validated("identity lift")
}

/// Components of `sys` (local positions) grouped into `delta`-orbits; each
/// orbit lists `C, delta(C), delta^2(C), ...` starting from the component
/// with the smallest member.
pub fn component_orbits(sys: &RootSystem, delta: &Twist) -> Vec<Vec<Vec<usize>>> {
    let comps = sys.components();
    let mut seen = vec![false; comps.len()];
    let mut out = Vec::new();
    for start in 0..comps.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            orbit.push(comps[cur].clone());
            let image = delta.apply(comps[cur][0]);
            cur = comps.iter().position(|c| c.contains(&image)).expect("twist permutes components");
        }
        out.push(orbit);
    }
    out
}

/// Combines a point for `w` on the first of `r` components cyclically
/// permuted by `delta` (twist `delta^r`, parameter `q^r`) into a point on the
/// whole system:
/// `lambda = sum_i sum_k eps_i^k (F^*)^k m_i omega_i`,
/// `(F^*)^k omega_i = q^k omega_{delta^{-k}(i)}`, with `eps_i = 1 -+ 2^{-k}`.
pub fn combine_cyclic_factors(full: &Arc<RootSystem>, delta: &Twist, inner: &LocalCert, q: &QuadExt) -> Result<LocalCert> {
    let g = WeylGroup::from_arc(full.clone());
    let i1 = g.labels_to_local(inner.sys.labels())?;
    let mut r = 1;
    let mut image: Vec<usize> = i1.iter().map(|&i| delta.apply(i)).collect();
    image.sort_unstable();
    while image != i1 {
        r += 1;
        image = i1.iter().map(|&i| delta.power(r).apply(i)).collect();
        image.sort_unstable();
        if r > g.rank() {
            return Err(Error::Precondition("first factor is not delta-periodic".into()));
        }
    }
    if r * i1.len() != g.rank() {
        return Err(Error::Precondition("factors do not cover the system".into()));
    }
    if delta.power(r).restrict(&i1)? != inner.delta || inner.q != q.pow(r as u32) {
        return Err(Error::Precondition("inner data is not for delta^r and q^r".into()));
    }
    let w = embed(&inner.group(), &g, &inner.w)?;
    let dinv = delta.inverse();
    let build = |eps: &[QuadExt]| -> Coweight {
        let mut coords = vec![QuadExt::zero(); g.rank()];
        for (pos, &i) in i1.iter().enumerate() {
            let m = &inner.mu.coords[pos];
            let mut target = i;
            let mut factor = QuadExt::one();
            for _ in 0..r {
                coords[target] = &factor * m;
                factor = &(&factor * &eps[pos]) * q;
                target = dinv.apply(target);
            }
        }
        Coweight::new(coords)
    };
    let make = |mu: Coweight| LocalCert {
        sys: full.clone(),
        delta: delta.clone(),
        q: q.clone(),
        form: inner.form,
        w: w.clone(),
        mu,
    };
    if r == 1 {
        return make(inner.mu.clone()).validated("cyclic combination");
    }
    let mut step = QuadExt::one();
    let half = QuadExt::rational(crate::exactnum::rat(1, 2));
    for _ in 1..=64 {
        step = &step * &half;
        let eps: Vec<QuadExt> = inner
            .mu
            .coords
            .iter()
            .map(|m| match m.signum() {
                1 => &QuadExt::one() - &step,
                -1 => &QuadExt::one() + &step,
                _ => QuadExt::one(),
            })
            .collect();
        let cert = make(build(&eps));
        if cert.holds()? {
            return Ok(cert);
        }
    }
    Err(Error::Falsified("no eps = 1 -+ 2^-k with k <= 64 makes the cyclic combination hold".into()))
}

/// `w = (w_a, w_b)`, `lambda = mu_a + mu_b` on an orthogonal, `delta`-stable
/// decomposition.
pub fn combine_orthogonal_factors(full: &Arc<RootSystem>, delta: &Twist, a: &LocalCert, b: &LocalCert) -> Result<LocalCert> {
    let g = WeylGroup::from_arc(full.clone());
    let la = g.labels_to_local(a.sys.labels())?;
    let lb = g.labels_to_local(b.sys.labels())?;
    if la.len() + lb.len() != g.rank() || la.iter().any(|i| lb.contains(i)) {
        return Err(Error::Precondition("factors do not partition the nodes".into()));
    }
    if la.iter().any(|&i| lb.iter().any(|&j| full.cartan()[i][j] != 0)) {
        return Err(Error::Precondition("factors are not orthogonal".into()));
    }
    if delta.restrict(&la)? != a.delta || delta.restrict(&lb)? != b.delta {
        return Err(Error::Precondition("factor twists are not restrictions of delta".into()));
    }
    if a.form != b.form || a.q != b.q {
        return Err(Error::Precondition("factors use different forms or q".into()));
    }
    let w = g.mul(&embed(&a.group(), &g, &a.w)?, &embed(&b.group(), &g, &b.w)?);
    let mut coords = vec![QuadExt::zero(); g.rank()];
    for (pos, &i) in la.iter().enumerate() {
        coords[i] = a.mu.coords[pos].clone();
    }
    for (pos, &i) in lb.iter().enumerate() {
        coords[i] = b.mu.coords[pos].clone();
    }
    LocalCert { sys: full.clone(), delta: delta.clone(), q: a.q.clone(), form: a.form, w, mu: Coweight::new(coords) }
        .validated("orthogonal combination")
}

/// Extension through condition `(J, w1)`: `w = v w1` and
/// `lambda = sum_{j in K} m_j omega_j + m sum_{j not in K} m_j omega_j`,
/// with `m = n0 max_K m_j / (smallest slack of the condition system) + 1`.
/// `inner` is dominant data for `v` on `Phi_K` whose twist is the inverse of
/// `Ad(w1) delta^{-1}`; `None` when `K` is empty.
pub fn extend_via_claim(
    full: &Arc<RootSystem>,
    delta: &Twist,
    j_labels: &[usize],
    w1: &WeylElt,
    inner: Option<&LocalCert>,
    star_m: &Coweight,
    q: &QuadExt,
) -> Result<LocalCert> {
    let g = WeylGroup::from_arc(full.clone());
    let dinv = delta.inverse();
    let j_local = g.labels_to_local(j_labels)?;
    let k = compute_i_j_x(&g, &j_local, w1, &dinv)?;
    let star = build_system_star(&g, &j_local, w1, delta, q)?;
    let values = star.evaluate(&star_m.coords)?;
    if values.iter().any(|x| !x.is_positive()) {
        return Err(Error::Precondition("star_m does not satisfy the condition system".into()));
    }
    let (v, inner_mu) = match inner {
        None => {
            if !k.is_empty() {
                return Err(Error::Precondition("K is nonempty but no inner data was given".into()));
            }
            (g.identity(), Vec::new())
        }
        Some(inner) => {
            let k_labels: Vec<usize> = k.iter().map(|&i| full.label(i)).collect();
            if inner.sys.labels() != k_labels.as_slice() {
                return Err(Error::Precondition(format!("inner data is not on K = {k_labels:?}")));
            }
            if induced_twist(&g, &k, w1, &dinv)?.inverse() != inner.delta || inner.form != ReduceForm::Stmt113b {
                return Err(Error::Precondition("inner data is not dominant data for Ad(w1) delta^{-1}".into()));
            }
            (embed(&inner.group(), &g, &inner.w)?, inner.mu.coords.clone())
        }
    };
    let slack = values[..star.q_constraints.len()]
        .iter()
        .cloned()
        .fold(None, |acc: Option<QuadExt>, x| Some(match acc { Some(a) if a < x => a, _ => x }));
    let one = QuadExt::one();
    let m = match slack {
        Some(s) => &(&QuadExt::from_int(full.n0() as i64) * &max_abs(&inner_mu)).checked_div(&s)? + &one,
        None => one,
    };
    let mut coords = vec![QuadExt::zero(); g.rank()];
    for (i, c) in coords.iter_mut().enumerate() {
        *c = match k.iter().position(|&x| x == i) {
            Some(pos) => inner_mu[pos].clone(),
            None => &m * &star_m.coords[i],
        };
    }
    LocalCert {
        sys: full.clone(),
        delta: delta.clone(),
        q: q.clone(),
        form: ReduceForm::Stmt113b,
        w: g.mul(&v, w1),
        mu: Coweight::new(coords),
    }
    .validated("extension through (J, w1)")
}

/// Result of the constructive path for one class.
#[derive(Clone, Debug, Serialize)]
pub struct ReduceOutcome {
    pub class_index: usize,
    pub rep_word: Vec<usize>,
    pub certificate: Certificate,
    /// Steps taken, outermost last.
    pub route: Vec<String>,
}

type TableKey = (Vec<usize>, Vec<usize>);

/// Constructive certification for the `delta^{-1}`-classes of one group.
pub struct Reducer {
    desc: GroupDesc,
    full: Arc<RootSystem>,
    delta: Twist,
    q: QuadExt,
    seeds: Vec<(Vec<usize>, WeylElt)>,
    spade: Vec<Reading>,
    tables: HashMap<TableKey, Arc<ClassTable>>,
    route: Vec<String>,
}

impl Reducer {
    pub fn new(desc: GroupDesc, q: QuadExt) -> Result<Self> {
        let full = Arc::new(desc.root_system()?);
        let delta = desc.twist()?;
        let g = WeylGroup::from_arc(full.clone());
        let mut seeds = Vec::new();
        let mut spade = Vec::new();
        for rec in load_case_records_up_to(desc.rank.max(2)).into_iter().filter(|r| r.group == desc) {
            for rd in rec.readings {
                if let Ok(seed) = reading_j_w1(&g, &delta, &rd) {
                    seeds.push(seed);
                }
                if rd.spade.is_some() {
                    spade.push(rd);
                }
            }
        }
        Ok(Reducer { desc, full, delta, q, seeds, spade, tables: HashMap::new(), route: Vec::new() })
    }

    fn table(&mut self, sys: &Arc<RootSystem>, dinv: &Twist) -> Result<Arc<ClassTable>> {
        let key = (sys.labels().to_vec(), dinv.perm().to_vec());
        if let Some(t) = self.tables.get(&key) {
            return Ok(t.clone());
        }
        let g = WeylGroup::from_arc(sys.clone());
        let t = Arc::new(enumerate_class_table(&g, dinv, Direction::DeltaInv, ENUMERATION_BUDGET)?);
        self.tables.insert(key, t.clone());
        Ok(t)
    }

    fn subsystem(&self, sys: &RootSystem, local: &[usize]) -> Result<Arc<RootSystem>> {
        let labels: Vec<usize> = local.iter().map(|&i| sys.label(i)).collect();
        Ok(Arc::new(self.full.subsystem(&labels)?))
    }

    /// Certificate for the class of `class.representative`.
    pub fn certify_class(&mut self, class: &DeltaClass) -> Result<(Certificate, Vec<String>)> {
        self.route.clear();
        let full = self.full.clone();
        let cert = self.cert(full, self.delta.clone(), self.q.clone(), class.representative.clone(), ReduceForm::Stmt113a, true)?;
        let g = WeylGroup::from_arc(self.full.clone());
        let table = self.table(&self.full.clone(), &self.delta.inverse())?;
        let found = table.class_of(&g, &cert.w);
        if found.representative != class.representative || g.length(&cert.w) != class.min_length {
            return Err(Error::Falsified("constructed element leaves the class or is not minimal".into()));
        }
        Ok((cert.to_certificate(self.desc)?, std::mem::take(&mut self.route)))
    }

    /// A point for a minimal element of the class of `w` (minimal in its
    /// `delta^{-1}`-class of `W(sys)`). `Stmt113b` requires a cuspidal class.
    fn cert(&mut self, sys: Arc<RootSystem>, delta: Twist, q: QuadExt, w: WeylElt, form: ReduceForm, top: bool) -> Result<LocalCert> {
        let g = WeylGroup::from_arc(sys.clone());
        let dinv = delta.inverse();
        let orbits = component_orbits(&sys, &delta);
        if orbits.len() > 1 {
            let a_local: Vec<usize> = {
                let mut v: Vec<usize> = orbits[0].concat();
                v.sort_unstable();
                v
            };
            let b_local: Vec<usize> = (0..g.rank()).filter(|i| !a_local.contains(i)).collect();
            let (sa, sb) = (self.subsystem(&sys, &a_local)?, self.subsystem(&sys, &b_local)?);
            let (ga, gb) = (WeylGroup::from_arc(sa.clone()), WeylGroup::from_arc(sb.clone()));
            let word = g.canonical_word(&w);
            let wa = ga.from_word(&word.iter().copied().filter(|l| sa.local(*l).is_some()).collect::<Vec<_>>())?;
            let wb = gb.from_word(&word.iter().copied().filter(|l| sb.local(*l).is_some()).collect::<Vec<_>>())?;
            let ca = self.cert(sa, delta.restrict(&a_local)?, q.clone(), wa, form, false)?;
            let cb = self.cert(sb, delta.restrict(&b_local)?, q.clone(), wb, form, false)?;
            self.route.push(format!("orthogonal product {:?} x {:?}", ca.sys.labels(), cb.sys.labels()));
            return combine_orthogonal_factors(&sys, &delta, &ca, &cb);
        }
        let orbit = &orbits[0];
        if orbit.len() > 1 {
            let r = orbit.len();
            let first = orbit[0].clone();
            // A minimal element of the class supported on the first factor.
            let table = self.table(&sys, &dinv)?;
            let class = table.class_of(&g, &w);
            let mask: u32 = first.iter().map(|&i| 1u32 << i).sum();
            let u = class
                .min_elements
                .iter()
                .find(|x| g.support_mask(x) & !mask == 0)
                .ok_or_else(|| Error::NotFound("no minimal element supported on the first factor".into()))?
                .clone();
            let s1 = self.subsystem(&sys, &first)?;
            let g1 = WeylGroup::from_arc(s1.clone());
            let u1 = embed(&g, &g1, &u)?;
            let inner = self.cert(s1, delta.power(r).restrict(&first)?, q.pow(r as u32), u1, form, false)?;
            self.route.push(format!("cyclic product of {r} factors on {:?}", inner.sys.labels()));
            return combine_cyclic_factors(&sys, &delta, &inner, &q);
        }
        // Irreducible.
        if g.is_identity(&w) && form != ReduceForm::Stmt113b {
            self.route.push("lift of the identity".into());
            return lift_identity(&sys, &delta, &q, form);
        }
        let supp = supp_delta(&g, &w, &dinv);
        if supp.len() < g.rank() {
            if form == ReduceForm::Stmt113b {
                return Err(Error::Precondition("dominant data needs a cuspidal class".into()));
            }
            let sj = Arc::new(self.full.subsystem(&supp)?);
            let gj = WeylGroup::from_arc(sj.clone());
            let j_local = g.labels_to_local(&supp)?;
            let inner = self.cert(sj, delta.restrict(&j_local)?, q.clone(), embed(&g, &gj, &w)?, form, false)?;
            self.route.push(format!("lift from J = {supp:?}"));
            return Ok(lift_to_full(&sys, &delta, &inner)?.0);
        }
        match self.claim_search(&sys, &delta, &q, &w, top) {
            Ok(c) => c.as_form(form),
            Err(Error::NotFound(reason)) => {
                if top && form != ReduceForm::Stmt113b {
                    if let Some(c) = self.spade_route(&w)? {
                        return Ok(c);
                    }
                }
                Err(Error::NotFound(reason))
            }
            Err(e) => Err(e),
        }
    }

    /// Search for `(J, w1, v)` with `v w1` minimal in the class of `w`,
    /// condition `(J, w1)` feasible, and dominant data for `v` in `W_K`.
    fn claim_search(&mut self, sys: &Arc<RootSystem>, delta: &Twist, q: &QuadExt, w: &WeylElt, top: bool) -> Result<LocalCert> {
        let g = WeylGroup::from_arc(sys.clone());
        let dinv = delta.inverse();
        let n = g.rank();
        let table = self.table(sys, &dinv)?;
        let target = table.class_of(&g, w).representative.clone();
        let target_len = g.length(w);
        let mut js: Vec<Vec<usize>> = Vec::new();
        if top {
            js.extend(self.seeds.iter().map(|(j, _)| j.clone()));
        }
        let mut subsets: Vec<Vec<usize>> = (0u32..(1 << n) - 1)
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| sys.label(i)).collect())
            .collect();
        subsets.sort_by(|a: &Vec<usize>, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        js.extend(subsets);
        js.dedup();
        let en = enumerate_group(&g, ENUMERATION_BUDGET)?;
        let mut order: Vec<usize> = (0..en.len()).collect();
        order.sort_by_key(|&i| en.lengths[i]);
        let seeded_w1: Vec<WeylElt> = if top { self.seeds.iter().map(|(_, w1)| w1.clone()).collect() } else { vec![] };
        let mut tried = std::collections::HashSet::new();
        for j_labels in js {
            let j_local = g.labels_to_local(&j_labels)?;
            let mut dj: Vec<usize> = j_local.iter().map(|&i| dinv.apply(i)).collect();
            dj.sort_unstable();
            let w1s = seeded_w1
                .iter()
                .cloned()
                .chain(order.iter().filter(|&&i| en.lengths[i] <= target_len).map(|&i| en.element(&g, i)));
            for w1 in w1s {
                if !g.is_min_coset_rep_local(&w1, &dj) || g.length(&w1) > target_len {
                    continue;
                }
                if !tried.insert((j_labels.clone(), g.key(&w1))) {
                    continue;
                }
                if let Some(c) = self.try_claim(sys, delta, q, &j_labels, &w1, &table, &target, target_len)? {
                    return Ok(c);
                }
            }
        }
        Err(Error::NotFound(format!("no (J, w1) route for the class of {:?}", g.canonical_word(w))))
    }

    #[allow(clippy::too_many_arguments)]
    fn try_claim(
        &mut self,
        sys: &Arc<RootSystem>,
        delta: &Twist,
        q: &QuadExt,
        j_labels: &[usize],
        w1: &WeylElt,
        table: &ClassTable,
        target: &WeylElt,
        target_len: usize,
    ) -> Result<Option<LocalCert>> {
        let g = WeylGroup::from_arc(sys.clone());
        let dinv = delta.inverse();
        let j_local = g.labels_to_local(j_labels)?;
        let k = compute_i_j_x(&g, &j_local, w1, &dinv)?;
        let need = target_len - g.length(w1);
        let in_target = |v: &WeylElt| {
            let p = g.mul(v, w1);
            table.class_of(&g, &p).representative == *target
        };
        // Candidate v as (element of W_K, element of W).
        let mut candidates: Vec<(Option<WeylElt>, WeylElt)> = Vec::new();
        let mut sigma = None;
        let mut sk = None;
        if k.is_empty() {
            if need == 0 && in_target(&g.identity()) {
                candidates.push((None, g.identity()));
            }
        } else {
            let s = induced_twist(&g, &k, w1, &dinv)?;
            let sub = self.subsystem(sys, &k)?;
            let gk = WeylGroup::from_arc(sub.clone());
            let tk = self.table(&sub, &s)?;
            for c in tk.classes.iter().filter(|c| c.cuspidal && c.min_length == need) {
                for vk in &c.min_elements {
                    let v = embed(&gk, &g, vk)?;
                    if in_target(&v) {
                        candidates.push((Some(vk.clone()), v));
                        break;
                    }
                }
            }
            sigma = Some(s);
            sk = Some(sub);
        }
        if candidates.is_empty() {
            return Ok(None);
        }
        let star = build_system_star(&g, &j_local, w1, delta, q)?;
        let Feasibility::Feasible(star_m) = decide(&star)? else { return Ok(None) };
        for (vk, _) in candidates {
            let inner = match (vk, &sk, &sigma) {
                (Some(vk), Some(sub), Some(s)) => {
                    match self.cert(sub.clone(), s.inverse(), q.clone(), vk, ReduceForm::Stmt113b, false) {
                        Ok(c) => Some(c),
                        Err(Error::NotFound(_)) | Err(Error::Precondition(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
                _ => None,
            };
            let c = extend_via_claim(sys, delta, j_labels, w1, inner.as_ref(), &star_m, q)?;
            let k_labels: Vec<usize> = k.iter().map(|&i| sys.label(i)).collect();
            self.route.push(format!(
                "condition (J, w1) with J = {j_labels:?}, w1 = {:?}, K = {k_labels:?}",
                g.canonical_word(w1)
            ));
            return Ok(Some(c));
        }
        Ok(None)
    }

    /// Direct `Stmt113a` points for the tabulated classes where the condition
    /// system has no solution.
    fn spade_route(&mut self, w: &WeylElt) -> Result<Option<LocalCert>> {
        let g = WeylGroup::from_arc(self.full.clone());
        let dinv = self.delta.inverse();
        let table = self.table(&self.full.clone(), &dinv)?;
        let target = table.class_of(&g, w).representative.clone();
        let target_len = g.length(w);
        for rd in self.spade.clone() {
            let Some(spade) = &rd.spade else { continue };
            let (j, w1) = reading_j_w1(&g, &self.delta, &rd)?;
            let j_local = g.labels_to_local(&j)?;
            let mut dj: Vec<usize> = j_local.iter().map(|&i| dinv.apply(i)).collect();
            dj.sort_unstable();
            if !g.is_min_coset_rep_local(&w1, &dj) || g.length(&w1) > target_len {
                continue;
            }
            let k = compute_i_j_x(&g, &j_local, &w1, &dinv)?;
            let mut vs = Vec::new();
            if k.is_empty() {
                vs.push(g.identity());
            } else {
                let s = induced_twist(&g, &k, &w1, &dinv)?;
                let sub = self.subsystem(&self.full.clone(), &k)?;
                let gk = WeylGroup::from_arc(sub.clone());
                let tk = self.table(&sub, &s)?;
                for c in tk.classes.iter().filter(|c| c.cuspidal && c.min_length + g.length(&w1) == target_len) {
                    for vk in &c.min_elements {
                        vs.push(embed(&gk, &g, vk)?);
                    }
                }
            }
            for v in vs {
                let p = g.mul(&v, &w1);
                if table.class_of(&g, &p).representative != target {
                    continue;
                }
                if let Some((mu, note)) = spade_point(&g, &self.delta, &self.q, &p, &v, &k, &w1, &dinv, spade)? {
                    let c = LocalCert {
                        sys: self.full.clone(),
                        delta: self.delta.clone(),
                        q: self.q.clone(),
                        form: ReduceForm::Stmt113a,
                        w: p,
                        mu,
                    }
                    .validated("tabulated direct point")?;
                    self.route.push(match note {
                        Some(n) => format!("direct Stmt113a point for J = {j:?}: {n}"),
                        None => format!("direct Stmt113a point from the tabulated recipe for J = {j:?}"),
                    });
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }
}

/// Constructive certificate for one `delta^{-1}`-class.
pub fn reduce_certify_class(desc: &GroupDesc, class: &DeltaClass, q: &QuadExt) -> Result<(Certificate, Vec<String>)> {
    Reducer::new(*desc, q.clone())?.certify_class(class)
}

/// Constructive certificates for every `delta^{-1}`-class of `desc`, in the
/// order of the class table.
pub fn reduce_pipeline(desc: &GroupDesc, q: &QuadExt) -> Result<Vec<ReduceOutcome>> {
    let mut r = Reducer::new(*desc, q.clone())?;
    let classes = crate::classes::enumerate_delta_classes(desc, Direction::DeltaInv)?;
    let mut out = Vec::with_capacity(classes.len());
    for (idx, class) in classes.iter().enumerate() {
        let (certificate, route) = r.certify_class(class)?;
        out.push(ReduceOutcome { class_index: idx, rep_word: class.rep_word.clone(), certificate, route });
    }
    Ok(out)
}

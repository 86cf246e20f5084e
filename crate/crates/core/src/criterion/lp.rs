//! Exact strict feasibility for homogeneous linear systems `g_k . m > 0`.
//!
//! Maximises `t` subject to `g_k . m >= t`, `|m_i| <= bound`, `t <= 1`,
//! writing `m = x+ - x-`. The origin is feasible, so a single simplex phase
//! with Bland's rule suffices. At optimum `t = 0` the duals of the
//! constraint rows form a Gordan certificate: `y >= 0`, `sum y > 0`,
//! `sum y_k g_k = 0`.

use crate::exactnum::QuadExt;

#[derive(Clone, Debug, PartialEq)]
pub enum StrictOutcome {
    /// A point with every `g_k . m > 0`.
    Feasible(Vec<QuadExt>),
    /// Nonnegative multipliers, one per input row, not all zero, with
    /// `sum y_k g_k = 0`.
    Infeasible(Vec<QuadExt>),
}

/// `x_basic[r] = b[r] - sum_j a[r][j] x_nonbasic[j]`, `z = z0 + sum_j c[j] x_nonbasic[j]`.
struct Dictionary {
    a: Vec<Vec<QuadExt>>,
    b: Vec<QuadExt>,
    c: Vec<QuadExt>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Dictionary {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.a[r][e].recip().expect("pivot is positive");
        for (j, x) in self.a[r].iter_mut().enumerate() {
            *x = if j == e { inv.clone() } else { &*x * &inv };
        }
        self.b[r] = &self.b[r] * &inv;
        let pivot_row = self.a[r].clone();
        let pivot_b = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][e].is_zero() {
                continue;
            }
            let f = self.a[i][e].clone();
            self.b[i] = &self.b[i] - &(&f * &pivot_b);
            for (j, p) in pivot_row.iter().enumerate() {
                if j == e {
                    self.a[i][j] = -(&f * p);
                } else if !p.is_zero() {
                    self.a[i][j] = &self.a[i][j] - &(&f * p);
                }
            }
        }
        if !self.c[e].is_zero() {
            let f = self.c[e].clone();
            for (j, p) in pivot_row.iter().enumerate() {
                if j == e {
                    self.c[j] = -(&f * p);
                } else if !p.is_zero() {
                    self.c[j] = &self.c[j] - &(&f * p);
                }
            }
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[e]);
    }

    fn optimise(&mut self) {
        loop {
            let entering = (0..self.c.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(e) = entering else { return };
            let mut best: Option<(usize, QuadExt)> = None;
            for r in 0..self.a.len() {
                if !self.a[r][e].is_positive() {
                    continue;
                }
                let ratio = &self.b[r] / &self.a[r][e];
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio || (ratio == bratio && self.basic[r] < self.basic[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            let (r, _) = best.expect("bounded by the box constraints");
            self.pivot(r, e);
        }
    }
}

/// Decides whether `rows[k] . m > 0` for all `k` has a solution.
pub fn solve_strict(rows: &[Vec<QuadExt>], nvars: usize, bound: &QuadExt) -> StrictOutcome {
    if rows.is_empty() {
        return StrictOutcome::Feasible(vec![QuadExt::zero(); nvars]);
    }
    // Identical rows share one LP row.
    let mut distinct: Vec<&Vec<QuadExt>> = Vec::new();
    let mut row_of: Vec<usize> = Vec::with_capacity(rows.len());
    for row in rows {
        match distinct.iter().position(|d| *d == row) {
            Some(p) => row_of.push(p),
            None => {
                row_of.push(distinct.len());
                distinct.push(row);
            }
        }
    }
    let k = distinct.len();
    let nv = 2 * nvars + 1;
    let t_var = 2 * nvars;
    let m = k + 2 * nvars + 1;
    let mut a = vec![vec![QuadExt::zero(); nv]; m];
    let mut b = vec![QuadExt::zero(); m];
    for (r, g) in distinct.iter().enumerate() {
        for i in 0..nvars {
            a[r][i] = -g[i].clone();
            a[r][nvars + i] = g[i].clone();
        }
        a[r][t_var] = QuadExt::one();
    }
    for i in 0..2 * nvars {
        a[k + i][i] = QuadExt::one();
        b[k + i] = bound.clone();
    }
    a[m - 1][t_var] = QuadExt::one();
    b[m - 1] = QuadExt::one();
    let mut c = vec![QuadExt::zero(); nv];
    c[t_var] = QuadExt::one();
    let mut dict = Dictionary { a, b, c, basic: (nv..nv + m).collect(), nonbasic: (0..nv).collect() };
    dict.optimise();

    let value = |var: usize| -> QuadExt {
        dict.basic.iter().position(|&v| v == var).map(|r| dict.b[r].clone()).unwrap_or_else(QuadExt::zero)
    };
    if value(t_var).is_positive() {
        let point = (0..nvars).map(|i| &value(i) - &value(nvars + i)).collect();
        return StrictOutcome::Feasible(point);
    }
    let dual: Vec<QuadExt> = (0..k)
        .map(|r| match dict.nonbasic.iter().position(|&v| v == nv + r) {
            Some(j) => -dict.c[j].clone(),
            None => QuadExt::zero(),
        })
        .collect();
    // Split each shared dual over its first occurrence only.
    let mut used = vec![false; k];
    let y = row_of
        .iter()
        .map(|&p| {
            if used[p] {
                QuadExt::zero()
            } else {
                used[p] = true;
                dual[p].clone()
            }
        })
        .collect();
    StrictOutcome::Infeasible(y)
}

/// `y >= 0`, `sum y > 0` and `sum y_k rows[k] = 0`.
pub fn is_gordan_certificate(rows: &[Vec<QuadExt>], nvars: usize, y: &[QuadExt]) -> bool {
    if y.len() != rows.len() || y.iter().any(QuadExt::is_negative) || y.iter().all(QuadExt::is_zero) {
        return false;
    }
    (0..nvars).all(|i| {
        rows.iter()
            .zip(y)
            .try_fold(QuadExt::zero(), |acc, (row, yk)| acc.checked_add(&row[i].checked_mul(yk)?))
            .is_ok_and(|s| s.is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<QuadExt>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn dot(row: &[QuadExt], m: &[QuadExt]) -> QuadExt {
        row.iter().zip(m).fold(QuadExt::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    #[test]
    fn feasible_point_satisfies_rows() {
        let rows = ints(&[&[1, 0], &[0, 1], &[-1, 3], &[2, -1]]);
        match solve_strict(&rows, 2, &q(1 << 16)) {
            StrictOutcome::Feasible(m) => assert!(rows.iter().all(|r| dot(r, &m).is_positive())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn opposite_rows_are_infeasible() {
        let rows = ints(&[&[1, 1], &[0, 1], &[-1, -1]]);
        match solve_strict(&rows, 2, &q(1 << 16)) {
            StrictOutcome::Infeasible(y) => assert!(is_gordan_certificate(&rows, 2, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_system_is_feasible_at_zero() {
        assert_eq!(solve_strict(&[], 3, &q(1)), StrictOutcome::Feasible(vec![QuadExt::zero(); 3]));
    }

    #[test]
    fn duplicated_rows() {
        let rows = ints(&[&[1, -1], &[1, -1], &[-1, 1]]);
        match solve_strict(&rows, 2, &q(8)) {
            StrictOutcome::Infeasible(y) => assert!(is_gordan_certificate(&rows, 2, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quadratic_coefficients() {
        // sqrt2 * m1 - m2 > 0, m2 - 1.4 m1 > 0: feasible since sqrt2 > 1.4
        let s2 = QuadExt::sqrt(2).unwrap();
        let rows = vec![
            vec![s2.clone(), q(-1)],
            vec![QuadExt::rational(crate::exactnum::rat(-7, 5)), q(1)],
            vec![q(1), q(0)],
        ];
        match solve_strict(&rows, 2, &q(1 << 16)) {
            StrictOutcome::Feasible(m) => assert!(rows.iter().all(|r| dot(r, &m).is_positive())),
            other => panic!("{other:?}"),
        }
        // m2 - 1.5 m1 > 0 together with sqrt2 m1 - m2 > 0, m1 > 0 is not.
        let rows = vec![
            vec![s2, q(-1)],
            vec![QuadExt::rational(crate::exactnum::rat(-3, 2)), q(1)],
            vec![q(1), q(0)],
        ];
        match solve_strict(&rows, 2, &q(1 << 16)) {
            StrictOutcome::Infeasible(y) => assert!(is_gordan_certificate(&rows, 2, &y)),
            other => panic!("{other:?}"),
        }
    }
}

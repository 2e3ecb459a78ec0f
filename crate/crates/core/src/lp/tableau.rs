//! Fraction-free dictionary simplex.
//!
//! The dictionary is stored as integers `t` with a shared positive denominator
//! `d`; the true value of every entry is `t / d`. A pivot on `(r, s)` replaces
//! each entry by a 2x2 determinant divided exactly by the previous `d`, so the
//! entries stay minors of the input matrix and never need a gcd. Entering and
//! leaving variables follow Bland's least-index rule.

use crate::num::ExactInt;

/// Arithmetic left the range of the entry type; retry with a wider one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

/// `maximize c·x  subject to  A x ≤ b, x ≥ 0` with integer data.
#[derive(Debug, Clone)]
pub(crate) struct StandardForm<I> {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows × cols`.
    pub a: Vec<I>,
    pub b: Vec<I>,
    pub c: Vec<I>,
}

impl<I: ExactInt> StandardForm<I> {
    pub fn new(cols: usize) -> Self {
        StandardForm {
            rows: 0,
            cols,
            a: Vec::new(),
            b: Vec::new(),
            c: vec![I::zero(); cols],
        }
    }

    pub fn push_row(&mut self, coefs: impl IntoIterator<Item = I>, rhs: I) {
        let before = self.a.len();
        self.a.extend(coefs);
        debug_assert_eq!(self.a.len() - before, self.cols);
        self.b.push(rhs);
        self.rows += 1;
    }

    pub fn map<J: ExactInt>(&self, f: impl Fn(&I) -> Option<J>) -> Option<StandardForm<J>> {
        Some(StandardForm {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(&f).collect::<Option<_>>()?,
            b: self.b.iter().map(&f).collect::<Option<_>>()?,
            c: self.c.iter().map(&f).collect::<Option<_>>()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped early because the objective became strictly positive.
    Positive,
}

#[derive(Debug, Clone)]
pub(crate) struct RawSolution<I> {
    pub status: Status,
    /// Numerators of the structural variables; divide by `denom`.
    pub x: Vec<I>,
    pub objective: I,
    pub denom: I,
    /// Rows carrying a nonzero dual multiplier at termination. For `Infeasible`
    /// these rows alone are infeasible; for `Optimal` they alone bound the
    /// objective by the same value.
    pub support: Vec<usize>,
}

struct Dictionary<I> {
    m: usize,
    width: usize,
    t: Vec<I>,
    d: I,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    scratch: Vec<I>,
}

fn mul<I: ExactInt>(a: &I, b: &I) -> Result<I, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

fn sub<I: ExactInt>(a: &I, b: &I) -> Result<I, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

fn neg<I: ExactInt>(a: &I) -> Result<I, Overflow> {
    I::zero().checked_sub(a).ok_or(Overflow)
}

// variable ids: 0 = phase-one auxiliary, 1..=cols structural, then one slack per row
impl<I: ExactInt> Dictionary<I> {
    fn at(&self, i: usize, j: usize) -> &I {
        &self.t[i * self.width + j]
    }

    fn obj(&self) -> usize {
        self.m
    }

    fn pivot(&mut self, r: usize, s: usize) -> Result<(), Overflow> {
        let w = self.width;
        let p = self.t[r * w + s].clone();
        debug_assert!(!p.is_zero());
        let negative = p.is_negative();
        let p_abs = p.abs();
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.t[r * w..(r + 1) * w]);
        let d = self.d.clone();
        let rescale = p_abs != d;
        let unit = d.is_one();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let row = &mut self.t[i * w..(i + 1) * w];
            let f = row[s].clone();
            if f.is_zero() {
                if rescale {
                    for (j, v) in row.iter_mut().enumerate() {
                        if j != s {
                            *v = mul(v, &p_abs)? / d.clone();
                        }
                    }
                }
                continue;
            }
            for (j, v) in row.iter_mut().enumerate() {
                if j == s {
                    continue;
                }
                let num = sub(&mul(v, &p)?, &mul(&f, &self.scratch[j])?)?;
                debug_assert!(num.is_multiple_of(&d));
                let q = if unit { num } else { num / d.clone() };
                *v = if negative { neg(&q)? } else { q };
            }
            row[s] = if negative { f } else { neg(&f)? };
        }
        let row = &mut self.t[r * w..(r + 1) * w];
        for (j, v) in row.iter_mut().enumerate() {
            if j == s {
                *v = if negative { neg(&d)? } else { d.clone() };
            } else if negative {
                *v = neg(v)?;
            }
        }
        self.d = p_abs;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s - 1]);
        Ok(())
    }

    fn entering(&self) -> Option<usize> {
        let obj = self.obj();
        (1..self.width)
            .filter(|&j| self.at(obj, j).is_negative())
            .min_by_key(|&j| self.nonbasic[j - 1])
    }

    fn leaving(&self, s: usize) -> Result<Option<usize>, Overflow> {
        let mut best: Option<usize> = None;
        for i in 0..self.m {
            let a = self.at(i, s);
            if !a.is_positive() {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(k) => {
                    // compare t[i][0]/t[i][s] against t[k][0]/t[k][s]
                    let lhs = mul(self.at(i, 0), self.at(k, s))?;
                    let rhs = mul(self.at(k, 0), a)?;
                    if lhs < rhs || (lhs == rhs && self.basic[i] < self.basic[k]) {
                        i
                    } else {
                        k
                    }
                }
            });
        }
        Ok(best)
    }

    /// Runs Bland iterations until optimal, unbounded, or (if `stop_positive`)
    /// the objective value exceeds zero.
    fn iterate(&mut self, stop_positive: bool) -> Result<Status, Overflow> {
        loop {
            if stop_positive && self.at(self.obj(), 0).is_positive() {
                return Ok(Status::Positive);
            }
            let Some(s) = self.entering() else {
                return Ok(Status::Optimal);
            };
            let Some(r) = self.leaving(s)? else {
                return Ok(Status::Unbounded);
            };
            self.pivot(r, s)?;
        }
    }

    fn support(&self, first_slack: usize) -> Vec<usize> {
        let obj = self.obj();
        let mut rows: Vec<usize> = (1..self.width)
            .filter(|&j| self.nonbasic[j - 1] >= first_slack && !self.at(obj, j).is_zero())
            .map(|j| self.nonbasic[j - 1] - first_slack)
            .collect();
        rows.sort_unstable();
        rows
    }

    fn remove_column(&mut self, s: usize) {
        let w = self.width;
        let mut t = Vec::with_capacity((self.m + 1) * (w - 1));
        for i in 0..=self.m {
            for j in 0..w {
                if j != s {
                    t.push(self.t[i * w + j].clone());
                }
            }
        }
        self.t = t;
        self.width -= 1;
        self.nonbasic.remove(s - 1);
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.t.drain(r * w..(r + 1) * w);
        self.basic.remove(r);
        self.m -= 1;
    }
}

/// Solves `form` exactly. With `stop_positive`, returns as soon as a basic
/// feasible solution with strictly positive objective is reached.
pub(crate) fn run<I: ExactInt>(
    form: &StandardForm<I>,
    stop_positive: bool,
) -> Result<RawSolution<I>, Overflow> {
    let (m, n) = (form.rows, form.cols);
    let first_slack = n + 1;
    let needs_phase_one = form.b.iter().any(|b| b.is_negative());
    // column layout: 0 = rhs, 1..=n structural, n+1 = auxiliary (phase one only)
    let width = n + 1 + usize::from(needs_phase_one);
    let mut t = Vec::with_capacity((m + 1) * width);
    for i in 0..m {
        t.push(form.b[i].clone());
        t.extend_from_slice(&form.a[i * n..(i + 1) * n]);
        if needs_phase_one {
            t.push(neg(&I::one())?);
        }
    }
    t.extend(std::iter::repeat_n(I::zero(), width));
    let mut dict = Dictionary {
        m,
        width,
        t,
        d: I::one(),
        basic: (0..m).map(|i| first_slack + i).collect(),
        nonbasic: (1..=n).chain(needs_phase_one.then_some(0)).collect(),
        scratch: Vec::with_capacity(width),
    };

    if needs_phase_one {
        let aux = width - 1;
        let obj = dict.obj();
        dict.t[obj * width + aux] = I::one();
        let r = (0..m)
            .min_by(|&i, &k| dict.at(i, 0).cmp(dict.at(k, 0)).then(i.cmp(&k)))
            .expect("a negative rhs implies at least one row");
        dict.pivot(r, aux)?;
        dict.iterate(false)?;
        if dict.at(dict.obj(), 0).is_negative() {
            return Ok(RawSolution {
                status: Status::Infeasible,
                x: Vec::new(),
                objective: I::zero(),
                denom: dict.d.clone(),
                support: dict.support(first_slack),
            });
        }
        if let Some(r) = dict.basic.iter().position(|&v| v == 0) {
            match (1..dict.width).find(|&j| !dict.at(r, j).is_zero()) {
                Some(s) => dict.pivot(r, s)?,
                None => dict.remove_row(r),
            }
        }
        let aux_col = 1 + dict
            .nonbasic
            .iter()
            .position(|&v| v == 0)
            .expect("auxiliary variable is nonbasic after phase one");
        dict.remove_column(aux_col);
    }

    // phase-two objective expressed over the current nonbasic variables
    let w = dict.width;
    let obj = dict.obj();
    for j in 0..w {
        dict.t[obj * w + j] = I::zero();
    }
    for (i, &var) in dict.basic.iter().enumerate() {
        if (1..=n).contains(&var) {
            let c = &form.c[var - 1];
            if c.is_zero() {
                continue;
            }
            for j in 0..w {
                let add = mul(c, &dict.t[i * w + j])?;
                let cell = &mut dict.t[obj * w + j];
                *cell = cell.checked_add(&add).ok_or(Overflow)?;
            }
        }
    }
    for j in 1..w {
        let var = dict.nonbasic[j - 1];
        if (1..=n).contains(&var) {
            let c = &form.c[var - 1];
            if !c.is_zero() {
                let cell = &mut dict.t[obj * w + j];
                *cell = sub(cell, &mul(c, &dict.d)?)?;
            }
        }
    }

    let status = dict.iterate(stop_positive)?;
    let mut x = vec![I::zero(); n];
    for (i, &var) in dict.basic.iter().enumerate() {
        if (1..=n).contains(&var) {
            x[var - 1] = dict.at(i, 0).clone();
        }
    }
    let support = if status == Status::Optimal {
        dict.support(first_slack)
    } else {
        Vec::new()
    };
    Ok(RawSolution {
        status,
        x,
        objective: dict.at(dict.obj(), 0).clone(),
        denom: dict.d.clone(),
        support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn form(cols: usize, rows: &[(&[i64], i64)], c: &[i64]) -> StandardForm<i64> {
        let mut f = StandardForm::new(cols);
        for (a, b) in rows {
            f.push_row(a.iter().copied(), *b);
        }
        f.c = c.to_vec();
        f
    }

    #[test]
    fn bounded_maximum() {
        // max x + y, x <= 2, 3y <= 1
        let f = form(2, &[(&[1, 0], 2), (&[0, 3], 1)], &[1, 1]);
        let sol = run(&f, false).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.objective * 3, sol.denom * 7);
        assert_eq!(sol.x[0], sol.denom * 2);
        assert_eq!(sol.x[1] * 3, sol.denom);
        assert_eq!(sol.support, vec![0, 1]);
    }

    #[test]
    fn infeasible_reports_conflicting_rows() {
        // x <= 5 (irrelevant), -x <= -1, x <= 0
        let f = form(1, &[(&[1], 5), (&[-1], -1), (&[1], 0)], &[0]);
        let sol = run(&f, false).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert_eq!(sol.support, vec![1, 2]);
    }

    #[test]
    fn unbounded_direction() {
        let f = form(2, &[(&[1, -1], 1)], &[0, 1]);
        assert_eq!(run(&f, false).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn phase_one_then_optimize() {
        // x + y >= 2, x <= 3, y <= 3, max -x - y  => optimum -2
        let f = form(2, &[(&[-1, -1], -2), (&[1, 0], 3), (&[0, 1], 3)], &[-1, -1]);
        let sol = run(&f, false).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.objective, -2 * sol.denom);
    }

    #[test]
    fn early_stop_on_positive_objective() {
        let f = form(1, &[(&[1], 10)], &[1]);
        let sol = run(&f, true).unwrap();
        assert_eq!(sol.status, Status::Positive);
        assert!(sol.objective > 0);
    }

    #[test]
    fn overflow_is_reported_and_bigint_agrees() {
        let big = i64::MAX / 2;
        let f = form(2, &[(&[big, 3], big), (&[5, big], big)], &[1, 1]);
        let wide = f.map(|v| Some(BigInt::from(*v))).unwrap();
        assert_eq!(run(&f, false).unwrap_err(), Overflow);
        let sol = run(&wide, false).unwrap();
        assert_eq!(sol.status, Status::Optimal);
    }
}

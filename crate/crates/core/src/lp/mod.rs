//! Exact rational linear programming.
//!
//! Programs are stated over rationals `Ratio<I>`; solving converts each row to
//! integers and runs a fraction-free simplex on `i64`, falling back to
//! [`BigInt`] when an intermediate minor leaves the 64-bit range. Results are
//! always reported as arbitrary-precision [`Rational`]s.

mod tableau;

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::num::{to_big, ExactInt};
use crate::Rational;
use tableau::{StandardForm, Status};

pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// A sparse linear combination of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<T> {
    pub terms: Vec<(VarId, T)>,
}

impl<T> Default for LinearForm<T> {
    fn default() -> Self {
        LinearForm { terms: Vec::new() }
    }
}

impl<T: Clone + Zero> LinearForm<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, var: VarId, coef: T) -> Self {
        self.terms.push((var, coef));
        self
    }

    pub fn push(&mut self, var: VarId, coef: T) {
        self.terms.push((var, coef));
    }

    pub fn eval<I: ExactInt>(&self, values: &[Ratio<BigInt>]) -> Ratio<BigInt>
    where
        T: Into<Ratio<I>>,
    {
        self.terms.iter().fold(Ratio::zero(), |acc, (v, c)| {
            let c: Ratio<I> = c.clone().into();
            acc + to_big(&c) * &values[*v]
        })
    }
}

impl<T> FromIterator<(VarId, T)> for LinearForm<T> {
    fn from_iter<It: IntoIterator<Item = (VarId, T)>>(iter: It) -> Self {
        LinearForm {
            terms: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub form: LinearForm<T>,
    pub relation: Relation,
    pub bound: T,
}

impl<T> Constraint<T> {
    pub fn new(form: LinearForm<T>, relation: Relation, bound: T) -> Self {
        Constraint {
            form,
            relation,
            bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective<T> {
    pub sense: Sense,
    pub form: LinearForm<T>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint {constraint} references undeclared variable {var}")]
    UnknownVariable { constraint: usize, var: VarId },
    #[error("objective references undeclared variable {0}")]
    UnknownObjectiveVariable(VarId),
    #[error("strict constraint {0} cannot be an equality")]
    StrictEquality(usize),
}

/// Variables, constraints and an optional objective over rationals `Ratio<I>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<I: ExactInt> {
    names: Vec<String>,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint<Ratio<I>>>,
    objective: Option<Objective<Ratio<I>>>,
}

impl<I: ExactInt> Default for LinearProgram<I> {
    fn default() -> Self {
        LinearProgram {
            names: Vec::new(),
            nonneg: Vec::new(),
            constraints: Vec::new(),
            objective: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal {
        value: Rational,
        assignment: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl<I: ExactInt> LinearProgram<I> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, nonneg: bool) -> VarId {
        self.names.push(name.into());
        self.nonneg.push(nonneg);
        self.names.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, var: VarId) -> &str {
        &self.names[var]
    }

    pub fn is_nonneg(&self, var: VarId) -> bool {
        self.nonneg[var]
    }

    pub fn constraints(&self) -> &[Constraint<Ratio<I>>] {
        &self.constraints
    }

    pub fn add_constraint(
        &mut self,
        form: LinearForm<Ratio<I>>,
        relation: Relation,
        bound: Ratio<I>,
    ) -> Result<usize, LpError> {
        let idx = self.constraints.len();
        if let Some(&(var, _)) = form.terms.iter().find(|(v, _)| *v >= self.names.len()) {
            return Err(LpError::UnknownVariable {
                constraint: idx,
                var,
            });
        }
        self.constraints.push(Constraint::new(form, relation, bound));
        Ok(idx)
    }

    pub fn set_objective(&mut self, sense: Sense, form: LinearForm<Ratio<I>>) -> Result<(), LpError> {
        if let Some(&(var, _)) = form.terms.iter().find(|(v, _)| *v >= self.names.len()) {
            return Err(LpError::UnknownObjectiveVariable(var));
        }
        self.objective = Some(Objective { sense, form });
        Ok(())
    }

    pub fn clear_objective(&mut self) {
        self.objective = None;
    }

    /// True iff `values` satisfies every constraint and sign restriction exactly.
    pub fn is_satisfied_by(&self, values: &[Rational]) -> bool {
        values.len() == self.names.len()
            && self
                .nonneg
                .iter()
                .zip(values)
                .all(|(&nn, v)| !nn || !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = c.form.eval::<I>(values);
                let rhs = to_big(&c.bound);
                match c.relation {
                    Relation::Le => lhs <= rhs,
                    Relation::Eq => lhs == rhs,
                    Relation::Ge => lhs >= rhs,
                }
            })
    }
}

/// Outcome plus the indices of the constraints carrying nonzero dual weight.
#[derive(Debug, Clone)]
pub(crate) struct Detailed {
    pub outcome: Outcome,
    /// For `Infeasible`: a subset of constraints that is infeasible on its own.
    /// For `Optimal`: a subset that bounds the objective by the same value.
    pub support: Vec<usize>,
}

/// How standard-form columns map back to program variables.
#[derive(Debug, Clone)]
enum Column {
    Fixed(Rational),
    Nonneg(usize),
    Free(usize, usize),
}

struct Lowered<J> {
    form: StandardForm<J>,
    columns: Vec<Column>,
    /// Standard-form row to program constraint.
    row_origin: Vec<usize>,
    /// Objective = (scaled value) / scale + offset.
    scale: Rational,
    offset: Rational,
    minimize: bool,
}

enum Presolved {
    Infeasible(Vec<usize>),
    Ready(Lowered<BigInt>),
}

fn as_integer_i64<I: ExactInt>(r: &Ratio<I>) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

impl<I: ExactInt> LinearProgram<I> {
    /// Fixed values from single-variable equalities; `Err` carries the
    /// constraints proving infeasibility.
    fn fixings(&self) -> Result<Vec<Option<(Ratio<I>, usize)>>, Vec<usize>> {
        let mut fixed: Vec<Option<(Ratio<I>, usize)>> = vec![None; self.names.len()];
        for (ci, c) in self.constraints.iter().enumerate() {
            if c.relation != Relation::Eq {
                continue;
            }
            let mut total: Option<(VarId, Ratio<I>)> = None;
            let mut single = true;
            for (v, coef) in &c.form.terms {
                match &mut total {
                    None => total = Some((*v, coef.clone())),
                    Some((tv, tc)) if tv == v => *tc = tc.clone() + coef.clone(),
                    Some(_) => single = false,
                }
            }
            let (Some((var, coef)), true) = (total, single) else {
                continue;
            };
            if coef.is_zero() {
                continue;
            }
            let value = c.bound.clone() / coef;
            if self.nonneg[var] && value.is_negative() {
                return Err(vec![ci]);
            }
            match &fixed[var] {
                Some((prev, pci)) if *prev != value => return Err(vec![*pci, ci]),
                Some(_) => {}
                None => fixed[var] = Some((value, ci)),
            }
        }
        Ok(fixed)
    }

    /// Integer fast path: every coefficient is an i64 integer, every variable
    /// is nonnegative, and fixings (single-variable equalities) are integral.
    fn lower_fast(&self) -> Option<Lowered<i64>> {
        if self.nonneg.iter().any(|nn| !nn) {
            return None;
        }
        let fixed = self.fixings().ok()?;
        let mut fixed_int: Vec<Option<i64>> = Vec::with_capacity(fixed.len());
        let mut columns = Vec::with_capacity(fixed.len());
        let mut col_of = Vec::with_capacity(fixed.len());
        let mut ncols = 0;
        for f in &fixed {
            match f {
                Some((value, _)) => {
                    fixed_int.push(Some(as_integer_i64(value)?));
                    columns.push(Column::Fixed(to_big(value)));
                    col_of.push(usize::MAX);
                }
                None => {
                    fixed_int.push(None);
                    columns.push(Column::Nonneg(ncols));
                    col_of.push(ncols);
                    ncols += 1;
                }
            }
        }
        let mut form = StandardForm::new(ncols);
        let mut row_origin = Vec::with_capacity(self.constraints.len());
        let mut dense = vec![0i64; ncols];
        for (ci, c) in self.constraints.iter().enumerate() {
            dense.iter_mut().for_each(|v| *v = 0);
            let mut b = as_integer_i64(&c.bound)?;
            let mut structural = false;
            for (v, coef) in &c.form.terms {
                let k = as_integer_i64(coef)?;
                match fixed_int[*v] {
                    Some(x) => b = b.checked_sub(k.checked_mul(x)?)?,
                    None => {
                        structural |= k != 0;
                        dense[col_of[*v]] = dense[col_of[*v]].checked_add(k)?;
                    }
                }
            }
            if !structural {
                let ok = match c.relation {
                    Relation::Le => b >= 0,
                    Relation::Ge => b <= 0,
                    Relation::Eq => b == 0,
                };
                if ok {
                    continue;
                }
                return None;
            }
            if matches!(c.relation, Relation::Le | Relation::Eq) {
                form.push_row(dense.iter().copied(), b);
                row_origin.push(ci);
            }
            if matches!(c.relation, Relation::Ge | Relation::Eq) {
                let row: Option<Vec<i64>> = dense.iter().map(|&x| x.checked_neg()).collect();
                form.push_row(row?, b.checked_neg()?);
                row_origin.push(ci);
            }
        }
        let mut minimize = false;
        let mut offset = 0i64;
        if let Some(obj) = &self.objective {
            minimize = obj.sense == Sense::Minimize;
            for (v, coef) in &obj.form.terms {
                let k = as_integer_i64(coef)?;
                if let Some(x) = fixed_int[*v] {
                    offset = offset.checked_add(k.checked_mul(x)?)?;
                    continue;
                }
                let k = if minimize { k.checked_neg()? } else { k };
                let cell = &mut form.c[col_of[*v]];
                *cell = cell.checked_add(k)?;
            }
        }
        Some(Lowered {
            form,
            columns,
            row_origin,
            scale: Rational::one(),
            offset: Rational::from_integer(offset.into()),
            minimize,
        })
    }

    fn lower_general(&self) -> Presolved {
        let fixed = match self.fixings() {
            Ok(f) => f,
            Err(core) => return Presolved::Infeasible(core),
        };
        let mut columns = Vec::new();
        let mut col_of: Vec<Option<(usize, Option<usize>)>> = Vec::with_capacity(self.names.len());
        let mut ncols = 0;
        for v in 0..self.names.len() {
            if let Some((value, _)) = &fixed[v] {
                columns.push(Column::Fixed(to_big(value)));
                col_of.push(None);
            } else if self.nonneg[v] {
                columns.push(Column::Nonneg(ncols));
                col_of.push(Some((ncols, None)));
                ncols += 1;
            } else {
                columns.push(Column::Free(ncols, ncols + 1));
                col_of.push(Some((ncols, Some(ncols + 1))));
                ncols += 2;
            }
        }
        let fixed_value = |v: VarId| fixed[v].as_ref().map(|(x, _)| to_big(x));

        let mut form = StandardForm::<BigInt>::new(ncols);
        let mut row_origin = Vec::new();
        for (ci, c) in self.constraints.iter().enumerate() {
            let mut dense = vec![Rational::zero(); ncols];
            let mut rhs = to_big(&c.bound);
            let mut structural = false;
            for (v, coef) in &c.form.terms {
                let coef = to_big(coef);
                if let Some(x) = fixed_value(*v) {
                    rhs -= coef * x;
                    continue;
                }
                let (p, m) = col_of[*v].expect("unfixed variables have columns");
                structural |= !coef.is_zero();
                if let Some(m) = m {
                    dense[m] -= coef.clone();
                }
                dense[p] += coef;
            }
            if !structural {
                let ok = match c.relation {
                    Relation::Le => !rhs.is_negative(),
                    Relation::Ge => !rhs.is_positive(),
                    Relation::Eq => rhs.is_zero(),
                };
                if !ok {
                    let mut core: Vec<usize> = c
                        .form
                        .terms
                        .iter()
                        .filter_map(|(v, _)| fixed[*v].as_ref().map(|(_, fc)| *fc))
                        .collect();
                    core.push(ci);
                    core.sort_unstable();
                    core.dedup();
                    return Presolved::Infeasible(core);
                }
                continue;
            }
            let scale = Rational::from_integer(
                dense
                    .iter()
                    .chain(std::iter::once(&rhs))
                    .fold(BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom())),
            );
            let ints: Vec<BigInt> = dense.iter().map(|r| (r * &scale).to_integer()).collect();
            let b = (rhs * &scale).to_integer();
            if matches!(c.relation, Relation::Le | Relation::Eq) {
                form.push_row(ints.iter().cloned(), b.clone());
                row_origin.push(ci);
            }
            if matches!(c.relation, Relation::Ge | Relation::Eq) {
                form.push_row(ints.iter().map(|x| -x), -b);
                row_origin.push(ci);
            }
        }

        let mut scale = Rational::one();
        let mut offset = Rational::zero();
        let mut minimize = false;
        if let Some(obj) = &self.objective {
            minimize = obj.sense == Sense::Minimize;
            let mut dense = vec![Rational::zero(); ncols];
            for (v, coef) in &obj.form.terms {
                let coef = to_big(coef);
                if let Some(x) = fixed_value(*v) {
                    offset += coef * x;
                    continue;
                }
                let (p, m) = col_of[*v].expect("unfixed variables have columns");
                if let Some(m) = m {
                    dense[m] -= coef.clone();
                }
                dense[p] += coef;
            }
            let l = dense
                .iter()
                .fold(BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom()));
            scale = Rational::from_integer(l);
            form.c = dense
                .iter()
                .map(|r| {
                    let k = (r * &scale).to_integer();
                    if minimize {
                        -k
                    } else {
                        k
                    }
                })
                .collect();
        }
        Presolved::Ready(Lowered {
            form,
            columns,
            row_origin,
            scale,
            offset,
            minimize,
        })
    }
}

fn finish<J: ExactInt>(
    lowered: &Lowered<J>,
    raw: tableau::RawSolution<J>,
    nvars: usize,
) -> Detailed {
    let support: Vec<usize> = {
        let mut s: Vec<usize> = raw.support.iter().map(|&r| lowered.row_origin[r]).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let outcome = match raw.status {
        Status::Infeasible => Outcome::Infeasible,
        Status::Unbounded => Outcome::Unbounded,
        Status::Optimal | Status::Positive => {
            let denom: BigInt = raw.denom.clone().into();
            let col = |k: usize| Rational::new(raw.x[k].clone().into(), denom.clone());
            let assignment: Vec<Rational> = (0..nvars)
                .map(|v| match &lowered.columns[v] {
                    Column::Fixed(x) => x.clone(),
                    Column::Nonneg(p) => col(*p),
                    Column::Free(p, m) => col(*p) - col(*m),
                })
                .collect();
            let mut value = Rational::new(raw.objective.clone().into(), denom) / &lowered.scale;
            if lowered.minimize {
                value = -value;
            }
            value += &lowered.offset;
            Outcome::Optimal { value, assignment }
        }
    };
    Detailed { outcome, support }
}

pub(crate) fn solve_detailed<I: ExactInt>(lp: &LinearProgram<I>, stop_positive: bool) -> Detailed {
    let nvars = lp.names.len();
    if let Some(lowered) = lp.lower_fast() {
        if let Ok(raw) = tableau::run(&lowered.form, stop_positive) {
            return finish(&lowered, raw, nvars);
        }
        let wide = Lowered {
            form: lowered
                .form
                .map(|v| Some(BigInt::from(*v)))
                .expect("widening never fails"),
            columns: lowered.columns,
            row_origin: lowered.row_origin,
            scale: lowered.scale,
            offset: lowered.offset,
            minimize: lowered.minimize,
        };
        let raw = tableau::run(&wide.form, stop_positive).expect("BigInt never overflows");
        return finish(&wide, raw, nvars);
    }
    let lowered = match lp.lower_general() {
        Presolved::Infeasible(core) => {
            return Detailed {
                outcome: Outcome::Infeasible,
                support: core,
            }
        }
        Presolved::Ready(l) => l,
    };
    if let Some(narrow) = lowered.form.map(|v| v.to_i64()) {
        if let Ok(raw) = tableau::run(&narrow, stop_positive) {
            let raw = tableau::RawSolution {
                status: raw.status,
                x: raw.x.into_iter().map(BigInt::from).collect(),
                objective: raw.objective.into(),
                denom: raw.denom.into(),
                support: raw.support,
            };
            return finish(&lowered, raw, nvars);
        }
    }
    let raw = tableau::run(&lowered.form, stop_positive).expect("BigInt never overflows");
    finish(&lowered, raw, nvars)
}

/// Solves `lp` exactly with a least-index simplex.
///
/// A program without an objective is a feasibility problem: a feasible point is
/// reported as `Optimal` with value 0.
pub fn solve<I: ExactInt>(lp: &LinearProgram<I>) -> Outcome {
    solve_detailed(lp, false).outcome
}

/// A constraint that may be strict (`<` or `>`).
#[derive(Debug, Clone, PartialEq)]
pub struct StrictConstraint<T> {
    pub form: LinearForm<T>,
    pub strict: bool,
    pub relation: Relation,
    pub bound: T,
}

impl<T> StrictConstraint<T> {
    pub fn strict(form: LinearForm<T>, relation: Relation, bound: T) -> Self {
        StrictConstraint {
            form,
            strict: true,
            relation,
            bound,
        }
    }

    pub fn weak(form: LinearForm<T>, relation: Relation, bound: T) -> Self {
        StrictConstraint {
            form,
            strict: false,
            relation,
            bound,
        }
    }
}

/// A system mixing strict and non-strict linear constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictSystem<I: ExactInt> {
    pub names: Vec<String>,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<StrictConstraint<Ratio<I>>>,
    /// Breaks the scale invariance of homogeneous systems, e.g. `dmax = 1`.
    pub normalization: Option<Constraint<Ratio<I>>>,
}

impl<I: ExactInt> Default for StrictSystem<I> {
    fn default() -> Self {
        StrictSystem {
            names: Vec::new(),
            nonneg: Vec::new(),
            constraints: Vec::new(),
            normalization: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrictOutcome {
    Feasible(Vec<Rational>),
    /// No strictly feasible point; `core` lists constraints (indices into
    /// `StrictSystem::constraints`) that are already strictly infeasible
    /// together with the normalization.
    Infeasible { core: Vec<usize> },
}

impl<I: ExactInt> StrictSystem<I> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, nonneg: bool) -> VarId {
        self.names.push(name.into());
        self.nonneg.push(nonneg);
        self.names.len() - 1
    }

    pub fn push(&mut self, constraint: StrictConstraint<Ratio<I>>) {
        self.constraints.push(constraint);
    }

    /// Checks `values` against every constraint, strict ones strictly.
    pub fn is_strictly_satisfied_by(&self, values: &[Rational]) -> bool {
        let holds = |form: &LinearForm<Ratio<I>>, strict: bool, rel: Relation, bound: &Ratio<I>| {
            let lhs = form.eval::<I>(values);
            let rhs = to_big(bound);
            match (rel, strict) {
                (Relation::Le, false) => lhs <= rhs,
                (Relation::Le, true) => lhs < rhs,
                (Relation::Ge, false) => lhs >= rhs,
                (Relation::Ge, true) => lhs > rhs,
                (Relation::Eq, _) => lhs == rhs,
            }
        };
        values.len() == self.names.len()
            && self
                .nonneg
                .iter()
                .zip(values)
                .all(|(&nn, v)| !nn || !v.is_negative())
            && self
                .constraints
                .iter()
                .all(|c| holds(&c.form, c.strict, c.relation, &c.bound))
            && self
                .normalization
                .as_ref()
                .is_none_or(|c| holds(&c.form, false, c.relation, &c.bound))
    }

    fn with_slack(&self) -> Result<(LinearProgram<I>, VarId), LpError> {
        let mut lp = LinearProgram::new();
        for (name, &nn) in self.names.iter().zip(&self.nonneg) {
            lp.add_var(name.clone(), nn);
        }
        let slack = lp.add_var("__slack", true);
        for (ci, c) in self.constraints.iter().enumerate() {
            let mut form = c.form.clone();
            if c.strict {
                match c.relation {
                    Relation::Le => form.push(slack, Ratio::one()),
                    Relation::Ge => form.push(slack, -Ratio::<I>::one()),
                    Relation::Eq => return Err(LpError::StrictEquality(ci)),
                }
            }
            lp.add_constraint(form, c.relation, c.bound.clone())?;
        }
        if let Some(n) = &self.normalization {
            lp.add_constraint(n.form.clone(), n.relation, n.bound.clone())?;
        }
        Ok((lp, slack))
    }

    /// Strict feasibility by slack maximization, reporting an infeasible core.
    pub fn solve(&self) -> Result<StrictOutcome, LpError> {
        let (mut lp, slack) = self.with_slack()?;
        let ncons = self.constraints.len();
        lp.set_objective(Sense::Maximize, LinearForm::new().term(slack, Ratio::one()))?;
        let detailed = solve_detailed(&lp, true);
        let mut values = match detailed.outcome {
            Outcome::Optimal { value, assignment } if value.is_positive() => Some(assignment),
            Outcome::Optimal { .. } | Outcome::Infeasible => {
                let core = detailed.support.into_iter().filter(|&c| c < ncons).collect();
                return Ok(StrictOutcome::Infeasible { core });
            }
            Outcome::Unbounded => None,
        };
        if values.is_none() {
            // unbounded slack: any point with slack fixed at 1 will do
            lp.clear_objective();
            lp.add_constraint(LinearForm::new().term(slack, Ratio::one()), Relation::Eq, Ratio::one())?;
            match solve_detailed(&lp, false).outcome {
                Outcome::Optimal { assignment, .. } => values = Some(assignment),
                _ => unreachable!("an unbounded slack direction implies feasibility at slack 1"),
            }
        }
        let mut values = values.expect("set above");
        values.truncate(self.names.len());
        assert!(
            self.is_strictly_satisfied_by(&values),
            "strict feasibility returned a point violating the system"
        );
        Ok(StrictOutcome::Feasible(values))
    }
}

/// Returns a point satisfying every constraint (strict ones strictly) together
/// with the normalization, or `None` if no such point exists.
pub fn strict_feasibility<I: ExactInt>(system: &StrictSystem<I>) -> Result<Option<Vec<Rational>>, LpError> {
    Ok(match system.solve()? {
        StrictOutcome::Feasible(v) => Some(v),
        StrictOutcome::Infeasible { .. } => None,
    })
}

//! Core domain types: literals, linear expressions, instances and points.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("points have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("an instance needs at least one objective")]
    NoObjectives,
    #[error("variable x{var} is outside 1..={num_vars}")]
    VariableOutOfRange { var: u32, num_vars: u32 },
    #[error("arithmetic overflow while normalizing an expression")]
    Overflow,
    #[error("objective has a negative offset ({0}) after normalization")]
    NegativeObjectiveOffset(i128),
    #[error("upper bound {upper} is below lower bound {lower} for objective {objective}")]
    InvalidBounds {
        objective: usize,
        lower: u64,
        upper: u64,
    },
}

/// A Boolean literal over a 1-based variable index.
///
/// Encoded as `var << 1 | negated`, so literals order by variable first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, negated: bool) -> Lit {
        assert!(var >= 1, "variables are 1-based");
        assert!(var < (1 << 31), "variable index too large");
        Lit((var << 1) | u32::from(negated))
    }

    pub fn positive(var: u32) -> Lit {
        Lit::new(var, false)
    }

    pub fn negative(var: u32) -> Lit {
        Lit::new(var, true)
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    /// Dense index `0..2*num_vars`, used by the SAT backend.
    #[inline]
    pub fn index(self) -> usize {
        (self.0 - 2) as usize
    }

    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0, "0 is not a DIMACS literal");
        let var = u32::try_from(value.unsigned_abs()).expect("variable index too large");
        Lit::new(var, value < 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var());
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    /// Truth value under an assignment indexed by `var - 1`.
    #[inline]
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[(self.var() - 1) as usize] != self.is_negated()
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            write!(f, "~x{}", self.var())
        } else {
            write!(f, "x{}", self.var())
        }
    }
}

/// One `coeff * lit` term of a linear expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: u64,
    pub lit: Lit,
}

/// `constant + sum(coeff * lit)` with strictly positive coefficients and at
/// most one term per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearExpr {
    terms: Vec<Term>,
    constant: u64,
}

impl LinearExpr {
    /// Builds an expression from non-negative terms. Zero coefficients are
    /// dropped. Panics if a variable appears twice; use
    /// [`normalize_expression`] for arbitrary input.
    pub fn new(terms: impl IntoIterator<Item = (u64, Lit)>, constant: u64) -> LinearExpr {
        let terms: Vec<Term> = terms
            .into_iter()
            .filter(|&(c, _)| c > 0)
            .map(|(coeff, lit)| Term { coeff, lit })
            .collect();
        let mut vars: Vec<u32> = terms.iter().map(|t| t.lit.var()).collect();
        vars.sort_unstable();
        assert!(
            vars.windows(2).all(|w| w[0] != w[1]),
            "duplicate variable in linear expression"
        );
        LinearExpr { terms, constant }
    }

    pub fn constant_only(constant: u64) -> LinearExpr {
        LinearExpr {
            terms: Vec::new(),
            constant,
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn constant(&self) -> u64 {
        self.constant
    }

    pub fn coefficient_sum(&self) -> u64 {
        self.terms.iter().map(|t| t.coeff).sum()
    }

    /// Smallest value over all assignments.
    pub fn lower_bound(&self) -> u64 {
        self.constant
    }

    /// Largest value over all assignments.
    pub fn upper_bound(&self) -> u64 {
        self.constant + self.coefficient_sum()
    }

    pub fn max_var(&self) -> u32 {
        self.terms.iter().map(|t| t.lit.var()).max().unwrap_or(0)
    }

    /// `constant + sum of coefficients of satisfied literals`.
    pub fn evaluate(&self, assignment: &[bool]) -> u64 {
        self.constant
            + self
                .terms
                .iter()
                .filter(|t| t.lit.eval(assignment))
                .map(|t| t.coeff)
                .sum::<u64>()
    }

    /// Same terms with every coefficient replaced by `f(coeff)`.
    pub fn map_coefficients(&self, mut f: impl FnMut(u64) -> u64) -> LinearExpr {
        LinearExpr::new(
            self.terms.iter().map(|t| (f(t.coeff), t.lit)),
            self.constant,
        )
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}{}", t.coeff, t.lit)?;
        }
        if self.constant > 0 || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// Result of [`normalize_expression`]: `raw = expr + offset`, with the
/// expression's own constant left at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub expr: LinearExpr,
    pub offset: i128,
}

/// Rewrites `sum(c_j * l_j)` with arbitrary integer coefficients into a sum
/// of non-negative terms plus a constant offset. A negative term `-a*x` is
/// replaced by `a*~x - a`; repeated variables are merged.
pub fn normalize_expression(raw: &[(i64, Lit)]) -> Result<Normalized, ModelError> {
    // Net coefficient of the positive literal per variable, plus the first
    // polarity seen so that untouched terms keep their literal.
    let mut net: BTreeMap<u32, (i128, bool, usize)> = BTreeMap::new();
    let mut offset: i128 = 0;
    for (pos, &(c, lit)) in raw.iter().enumerate() {
        let c = i128::from(c);
        let entry = net.entry(lit.var()).or_insert((0, lit.is_negated(), pos));
        if lit.is_negated() {
            // c * ~x = c - c * x
            offset += c;
            entry.0 -= c;
        } else {
            entry.0 += c;
        }
    }

    let mut ordered: Vec<(usize, u32, i128, bool)> = net
        .into_iter()
        .map(|(var, (a, neg, pos))| (pos, var, a, neg))
        .collect();
    ordered.sort_unstable();

    let mut terms = Vec::with_capacity(ordered.len());
    let mut sum: u128 = 0;
    for (_, var, a, _) in ordered {
        if a == 0 {
            continue;
        }
        let (coeff, lit) = if a > 0 {
            (a, Lit::positive(var))
        } else {
            // a * x = a + |a| * ~x
            offset += a;
            (-a, Lit::negative(var))
        };
        let coeff = u64::try_from(coeff).map_err(|_| ModelError::Overflow)?;
        sum = sum
            .checked_add(u128::from(coeff))
            .ok_or(ModelError::Overflow)?;
        terms.push((coeff, lit));
    }
    if sum > u128::from(u64::MAX) {
        return Err(ModelError::Overflow);
    }
    Ok(Normalized {
        expr: LinearExpr::new(terms, 0),
        offset,
    })
}

/// `lhs >= bound` with non-negative coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PbConstraint {
    lhs: LinearExpr,
    bound: u64,
}

impl PbConstraint {
    pub fn new(terms: impl IntoIterator<Item = (u64, Lit)>, bound: u64) -> PbConstraint {
        PbConstraint {
            lhs: LinearExpr::new(terms, 0),
            bound,
        }
    }

    /// Normalizes `sum(raw) >= bound`. Returns `None` when the normalized
    /// bound is `<= 0`, i.e. the constraint is trivially satisfied.
    pub fn from_raw(raw: &[(i64, Lit)], bound: i64) -> Result<Option<PbConstraint>, ModelError> {
        let n = normalize_expression(raw)?;
        let bound = i128::from(bound) - n.offset;
        if bound <= 0 {
            return Ok(None);
        }
        let bound = u64::try_from(bound).map_err(|_| ModelError::Overflow)?;
        Ok(Some(PbConstraint { lhs: n.expr, bound }))
    }

    pub fn lhs(&self) -> &LinearExpr {
        &self.lhs
    }

    pub fn terms(&self) -> &[Term] {
        self.lhs.terms()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn is_trivial(&self) -> bool {
        self.bound == 0
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.lhs.evaluate(assignment) >= self.bound
    }
}

impl fmt::Display for PbConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} >= {}", self.lhs, self.bound)
    }
}

/// Normalizes an objective `sum(raw) + constant` to non-negative form.
pub fn objective_from_raw(raw: &[(i64, Lit)], constant: i64) -> Result<LinearExpr, ModelError> {
    let n = normalize_expression(raw)?;
    let offset = n.offset + i128::from(constant);
    if offset < 0 {
        return Err(ModelError::NegativeObjectiveOffset(offset));
    }
    let offset = u64::try_from(offset).map_err(|_| ModelError::Overflow)?;
    offset
        .checked_add(n.expr.coefficient_sum())
        .ok_or(ModelError::Overflow)?;
    Ok(LinearExpr {
        terms: n.expr.terms,
        constant: offset,
    })
}

/// A multi-objective Boolean optimization instance (all objectives minimized).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    num_vars: u32,
    constraints: Vec<PbConstraint>,
    objectives: Vec<LinearExpr>,
    upper: Vec<u64>,
}

impl Instance {
    pub fn new(
        num_vars: u32,
        constraints: Vec<PbConstraint>,
        objectives: Vec<LinearExpr>,
    ) -> Result<Instance, ModelError> {
        if objectives.is_empty() {
            return Err(ModelError::NoObjectives);
        }
        let max_var = constraints
            .iter()
            .map(|c| c.lhs.max_var())
            .chain(objectives.iter().map(LinearExpr::max_var))
            .max()
            .unwrap_or(0);
        if max_var > num_vars {
            return Err(ModelError::VariableOutOfRange {
                var: max_var,
                num_vars,
            });
        }
        let constraints = constraints
            .into_iter()
            .filter(|c| !c.is_trivial())
            .collect();
        let upper = objectives.iter().map(LinearExpr::upper_bound).collect();
        Ok(Instance {
            num_vars,
            constraints,
            objectives,
            upper,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn constraints(&self) -> &[PbConstraint] {
        &self.constraints
    }

    pub fn objectives(&self) -> &[LinearExpr] {
        &self.objectives
    }

    pub fn objective(&self, k: usize) -> &LinearExpr {
        &self.objectives[k]
    }

    /// `l_k`, the objective's constant.
    pub fn lower_bound(&self, k: usize) -> u64 {
        self.objectives[k].lower_bound()
    }

    /// `u_k`, the constant plus the coefficient sum unless tightened.
    pub fn upper_bound(&self, k: usize) -> u64 {
        self.upper[k]
    }

    /// Replaces `u_k` by a proven tighter bound.
    pub fn tighten_upper_bound(&mut self, k: usize, upper: u64) -> Result<(), ModelError> {
        let lower = self.lower_bound(k);
        if upper < lower {
            return Err(ModelError::InvalidBounds {
                objective: k,
                lower,
                upper,
            });
        }
        self.upper[k] = self.upper[k].min(upper);
        Ok(())
    }

    pub fn is_feasible(&self, assignment: &[bool]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(assignment))
    }

    /// Objective vector `f(x)`.
    pub fn evaluate(&self, assignment: &[bool]) -> Point {
        Point(
            self.objectives
                .iter()
                .map(|f| f.evaluate(assignment))
                .collect(),
        )
    }
}

/// A point of the objective space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<u64>);

impl Point {
    pub fn new(coords: impl Into<Vec<u64>>) -> Point {
        Point(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn checked_weakly_dominates(&self, other: &Point) -> Result<bool, ModelError> {
        if self.dim() != other.dim() {
            return Err(ModelError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// `self[k] <= other[k]` for every `k`. Panics on a dimension mismatch.
    pub fn weakly_dominates(&self, other: &Point) -> bool {
        self.checked_weakly_dominates(other)
            .expect("dominance between points of different dimension")
    }

    /// Weak dominance with at least one strict coordinate.
    pub fn dominates(&self, other: &Point) -> bool {
        self.weakly_dominates(other) && self != other
    }

    /// Strict improvement in every coordinate.
    pub fn strictly_dominates(&self, other: &Point) -> bool {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u64>> for Point {
    fn from(v: Vec<u64>) -> Point {
        Point(v)
    }
}

/// A feasible assignment over the instance variables and its image `f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolutionRecord {
    pub assignment: Vec<bool>,
    pub image: Point,
}

impl SolutionRecord {
    pub fn new(instance: &Instance, assignment: Vec<bool>) -> SolutionRecord {
        debug_assert_eq!(assignment.len(), instance.num_vars() as usize);
        debug_assert!(instance.is_feasible(&assignment));
        let image = instance.evaluate(&assignment);
        SolutionRecord { assignment, image }
    }

    /// The assignment as a `0`/`1` string, `x1` first.
    pub fn assignment_string(&self) -> String {
        self.assignment
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Keeps exactly the items whose point is not dominated by another item's
/// point. Among items with equal points only the earliest is kept. Survivors
/// keep their input order.
pub fn nondominated_filter<T>(
    items: impl IntoIterator<Item = T>,
    key: impl Fn(&T) -> &Point,
) -> Vec<T> {
    let mut kept: Vec<T> = Vec::new();
    for item in items {
        let p = key(&item);
        if kept.iter().any(|k| key(k).weakly_dominates(p)) {
            continue;
        }
        kept.retain(|k| !p.weakly_dominates(key(k)));
        kept.push(item);
    }
    kept
}

/// [`nondominated_filter`] on bare points.
pub fn nondominated_points(points: impl IntoIterator<Item = Point>) -> Vec<Point> {
    nondominated_filter(points, |p| p)
}

//! CNF encodings of pseudo-Boolean constraints and objective ladders.
//!
//! Both are built on a left-to-right chain of partial sums. Level `i` holds
//! the values reachable by the first `i` terms; output `o[i,v]` stands for
//! "partial sum `i` is at least `v`" and is created lazily, only for the
//! values that some requested threshold needs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{LinearExpr, Lit, PbConstraint};
use crate::sat::ClauseSink;

/// Total number of reachable-sum entries a single chain may hold.
pub const MAX_REACHABLE_ENTRIES: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("threshold {d} is below the objective's lower bound {lower}")]
    BelowLowerBound { d: u64, lower: u64 },
    #[error("reachable-sum structure too large ({0} entries)")]
    TooLarge(usize),
}

/// A literal or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    True,
    False,
    Lit(Lit),
}

impl Signal {
    fn negate(self) -> Signal {
        match self {
            Signal::True => Signal::False,
            Signal::False => Signal::True,
            Signal::Lit(l) => Signal::Lit(!l),
        }
    }

    fn map(self, f: impl Fn(Lit) -> Lit) -> Signal {
        match self {
            Signal::Lit(l) => Signal::Lit(f(l)),
            s => s,
        }
    }

    /// Turns the signal into a concrete literal, using the sink's constant.
    pub fn to_lit<S: ClauseSink + ?Sized>(self, sink: &mut S) -> Lit {
        match self {
            Signal::Lit(l) => l,
            Signal::True => sink.true_lit(),
            Signal::False => !sink.true_lit(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// `o[i,v]` equivalent to the partial sum reaching `v`.
    Both,
    /// Only "partial sum reaches `v` implies `o[i,v]`".
    Upward,
}

/// Writes a clause of signals; clauses with a true member are skipped.
fn emit<S: ClauseSink + ?Sized>(sink: &mut S, signals: &[Signal], counter: &mut usize) {
    let mut lits = Vec::with_capacity(signals.len());
    for s in signals {
        match *s {
            Signal::True => return,
            Signal::False => {}
            Signal::Lit(l) => lits.push(l),
        }
    }
    sink.add_clause(&lits);
    *counter += 1;
}

fn merge_shifted(prev: &[u64], w: u64, cap: Option<u64>) -> Vec<u64> {
    let shifted = prev.iter().map(|&v| {
        let s = v.saturating_add(w);
        cap.map_or(s, |c| s.min(c))
    });
    let mut out = Vec::with_capacity(prev.len() * 2);
    let mut a = prev.iter().copied().peekable();
    let mut b = shifted.peekable();
    loop {
        let next = match (a.peek(), b.peek()) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    a.next();
                    if x == y {
                        b.next();
                    }
                    x
                } else {
                    b.next();
                    y
                }
            }
            (Some(&x), None) => {
                a.next();
                x
            }
            (None, Some(&y)) => {
                b.next();
                y
            }
            (None, None) => break,
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

#[derive(Debug, Clone)]
struct SumChain {
    terms: Vec<(u64, Lit)>,
    reach: Vec<Vec<u64>>,
    memo: Vec<BTreeMap<u64, Signal>>,
    direction: Direction,
    clauses: usize,
    vars: usize,
}

enum Lookup {
    Done(Signal),
    Pending(usize, u64),
}

impl SumChain {
    fn new(
        terms: Vec<(u64, Lit)>,
        cap: Option<u64>,
        direction: Direction,
    ) -> Result<SumChain, EncodeError> {
        let mut reach = Vec::with_capacity(terms.len() + 1);
        reach.push(vec![0u64]);
        let mut total = 1usize;
        for &(w, _) in &terms {
            let next = merge_shifted(reach.last().expect("level 0 exists"), w, cap);
            total += next.len();
            if total > MAX_REACHABLE_ENTRIES {
                return Err(EncodeError::TooLarge(total));
            }
            reach.push(next);
        }
        let memo = vec![BTreeMap::new(); terms.len() + 1];
        Ok(SumChain {
            terms,
            reach,
            memo,
            direction,
            clauses: 0,
            vars: 0,
        })
    }

    fn reachable(&self) -> &[u64] {
        self.reach.last().expect("level 0 exists")
    }

    fn lookup(&self, i: usize, v: u64) -> Lookup {
        if v == 0 {
            return Lookup::Done(Signal::True);
        }
        let r = &self.reach[i];
        let pos = r.partition_point(|&x| x < v);
        if pos == r.len() {
            return Lookup::Done(Signal::False);
        }
        let v = r[pos];
        if v == 0 {
            return Lookup::Done(Signal::True);
        }
        match self.memo[i].get(&v) {
            Some(&s) => Lookup::Done(s),
            None => Lookup::Pending(i, v),
        }
    }

    /// Signal for "partial sum `i` is at least `v`".
    fn output<S: ClauseSink + ?Sized>(&mut self, sink: &mut S, i: usize, v: u64) -> Signal {
        let (i, v) = match self.lookup(i, v) {
            Lookup::Done(s) => return s,
            Lookup::Pending(i, v) => (i, v),
        };
        let mut stack = vec![(i, v)];
        while let Some(&(i, v)) = stack.last() {
            if self.memo[i].contains_key(&v) {
                stack.pop();
                continue;
            }
            let (w, l) = self.terms[i - 1];
            let a = match self.lookup(i - 1, v) {
                Lookup::Done(s) => s,
                Lookup::Pending(j, u) => {
                    stack.push((j, u));
                    continue;
                }
            };
            let b = match self.lookup(i - 1, v.saturating_sub(w)) {
                Lookup::Done(s) => s,
                Lookup::Pending(j, u) => {
                    stack.push((j, u));
                    continue;
                }
            };
            let o = self.make_node(sink, a, l, b);
            self.memo[i].insert(v, o);
            stack.pop();
        }
        match self.lookup(i, v) {
            Lookup::Done(s) => s,
            Lookup::Pending(..) => unreachable!("node was just built"),
        }
    }

    /// `o = a or (l and b)`.
    fn make_node<S: ClauseSink + ?Sized>(
        &mut self,
        sink: &mut S,
        a: Signal,
        l: Lit,
        b: Signal,
    ) -> Signal {
        match (a, b) {
            (Signal::True, _) => return Signal::True,
            (_, Signal::False) => return a,
            (Signal::False, Signal::True) => return Signal::Lit(l),
            _ => {}
        }
        if a == b {
            return a;
        }
        let o = Signal::Lit(Lit::positive(sink.new_var()));
        self.vars += 1;
        let lit = Signal::Lit(l);
        emit(sink, &[a.negate(), o], &mut self.clauses);
        emit(sink, &[lit.negate(), b.negate(), o], &mut self.clauses);
        if self.direction == Direction::Both {
            emit(sink, &[o.negate(), a, lit], &mut self.clauses);
            emit(sink, &[o.negate(), a, b], &mut self.clauses);
        }
        o
    }

    fn remap(&self, f: &impl Fn(Lit) -> Lit) -> SumChain {
        SumChain {
            terms: self.terms.iter().map(|&(w, l)| (w, f(l))).collect(),
            reach: self.reach.clone(),
            memo: self
                .memo
                .iter()
                .map(|m| m.iter().map(|(&v, s)| (v, s.map(f))).collect())
                .collect(),
            direction: self.direction,
            clauses: self.clauses,
            vars: self.vars,
        }
    }
}

/// Lazy unary view of one objective: `threshold(d)` is a literal that holds
/// exactly when `f(x) < d`.
#[derive(Debug, Clone)]
pub struct ObjectiveLadder {
    objective: usize,
    lower: u64,
    offset: u64,
    chain: SumChain,
    thresholds: BTreeMap<u64, Lit>,
    order_clauses: usize,
}

impl ObjectiveLadder {
    /// Prepares the sum structure. Literals for which `fixed` returns a value
    /// are folded into the constant instead of being encoded.
    pub fn new(
        objective: usize,
        expr: &LinearExpr,
        fixed: impl Fn(Lit) -> Option<bool>,
    ) -> Result<ObjectiveLadder, EncodeError> {
        let mut offset = expr.constant();
        let mut terms = Vec::new();
        for t in expr.terms() {
            match fixed(t.lit) {
                Some(true) => offset += t.coeff,
                Some(false) => {}
                None => terms.push((t.coeff, t.lit)),
            }
        }
        Ok(ObjectiveLadder {
            objective,
            lower: expr.constant(),
            offset,
            chain: SumChain::new(terms, None, Direction::Both)?,
            thresholds: BTreeMap::new(),
            order_clauses: 0,
        })
    }

    pub fn objective(&self) -> usize {
        self.objective
    }

    /// Every value the objective can take (after fixing), ascending.
    pub fn reachable_values(&self) -> Vec<u64> {
        self.chain
            .reachable()
            .iter()
            .map(|&v| v + self.offset)
            .collect()
    }

    pub fn max_value(&self) -> u64 {
        self.offset + self.chain.reachable().last().copied().unwrap_or(0)
    }

    /// Smallest reachable value `>= v`, or `None` above the maximum.
    pub fn reachable_at_least(&self, v: u64) -> Option<u64> {
        let r = self.chain.reachable();
        let target = v.saturating_sub(self.offset);
        let pos = r.partition_point(|&x| x < target);
        r.get(pos).map(|&x| x + self.offset)
    }

    /// Literal `y` with `y <=> f(x) < d`. Repeated calls return the same
    /// literal; thresholds between two reachable values share one literal.
    pub fn encode_lt<S: ClauseSink + ?Sized>(
        &mut self,
        d: u64,
        sink: &mut S,
    ) -> Result<Lit, EncodeError> {
        if d < self.lower {
            return Err(EncodeError::BelowLowerBound {
                d,
                lower: self.lower,
            });
        }
        if let Some(&y) = self.thresholds.get(&d) {
            return Ok(y);
        }
        let y = if d <= self.offset {
            Signal::False
        } else {
            let n = self.chain.terms.len();
            self.chain.output(sink, n, d - self.offset).negate()
        };
        let y = y.to_lit(sink);

        let prev = self.thresholds.range(..d).next_back().map(|(_, &l)| l);
        let next = self.thresholds.range(d + 1..).next().map(|(_, &l)| l);
        if let Some(p) = prev {
            if p != y {
                sink.add_clause(&[!p, y]);
                self.order_clauses += 1;
            }
        }
        if let Some(q) = next {
            if q != y {
                sink.add_clause(&[!y, q]);
                self.order_clauses += 1;
            }
        }
        self.thresholds.insert(d, y);
        Ok(y)
    }

    /// Already requested thresholds and their literals.
    pub fn thresholds(&self) -> &BTreeMap<u64, Lit> {
        &self.thresholds
    }

    /// Clauses emitted for this objective so far.
    pub fn clause_count(&self) -> usize {
        self.chain.clauses + self.order_clauses
    }

    pub fn aux_var_count(&self) -> usize {
        self.chain.vars
    }

    /// Same ladder with every literal renamed, for replaying a recorded
    /// encoding into another solver.
    pub fn remap(&self, f: impl Fn(Lit) -> Lit) -> ObjectiveLadder {
        ObjectiveLadder {
            objective: self.objective,
            lower: self.lower,
            offset: self.offset,
            chain: self.chain.remap(&f),
            thresholds: self.thresholds.iter().map(|(&d, &l)| (d, f(l))).collect(),
            order_clauses: self.order_clauses,
        }
    }
}

/// Encodes `lhs >= bound` into hard clauses. Returns the number of clauses
/// written.
pub fn encode_pb_geq<S: ClauseSink + ?Sized>(
    c: &PbConstraint,
    sink: &mut S,
) -> Result<usize, EncodeError> {
    let bound = c.bound();
    if bound == 0 {
        return Ok(0);
    }
    let terms: Vec<(u64, Lit)> = c
        .terms()
        .iter()
        .map(|t| (t.coeff.min(bound), t.lit))
        .collect();
    let sum = terms.iter().fold(0u64, |s, &(w, _)| s.saturating_add(w));
    if sum < bound {
        sink.add_clause(&[]);
        return Ok(1);
    }
    if terms.iter().all(|&(w, _)| w == bound) {
        let clause: Vec<Lit> = terms.iter().map(|&(_, l)| l).collect();
        sink.add_clause(&clause);
        return Ok(1);
    }
    // sum(w * l) >= b  <=>  sum(w * ~l) <= sum - b
    let slack = sum - bound;
    let negated: Vec<(u64, Lit)> = terms.iter().map(|&(w, l)| (w, !l)).collect();
    let n = negated.len();
    let mut chain = SumChain::new(negated, Some(slack + 1), Direction::Upward)?;
    let over = chain.output(sink, n, slack + 1);
    let mut count = chain.clauses;
    emit(sink, &[over.negate()], &mut count);
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{CdclSolver, Cnf, SatSolver, SolveResult};
    use proptest::prelude::*;

    fn x(v: u32) -> Lit {
        Lit::positive(v)
    }

    fn nx(v: u32) -> Lit {
        Lit::negative(v)
    }

    fn assignments(n: u32) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }

    /// Whether the clauses admit an extension of `asg` to the auxiliary
    /// variables, checked with a solver under assumptions.
    fn extends(cnf: &Cnf, n: u32, asg: &[bool], extra: &[Lit]) -> bool {
        let mut s = CdclSolver::new();
        cnf.replay_into(&mut s, cnf.num_vars());
        let mut assume: Vec<Lit> = (1..=n).map(|v| Lit::new(v, !asg[v as usize - 1])).collect();
        assume.extend_from_slice(extra);
        s.solve(&assume) == SolveResult::Sat
    }

    fn check_pb(c: &PbConstraint, n: u32) {
        let mut cnf = Cnf::with_vars(n);
        encode_pb_geq(c, &mut cnf).unwrap();
        for asg in assignments(n) {
            assert_eq!(
                extends(&cnf, n, &asg, &[]),
                c.is_satisfied(&asg),
                "{c} at {asg:?}"
            );
        }
    }

    #[test]
    fn clause_case_is_a_single_clause() {
        let c = PbConstraint::new([(1, x(1)), (1, x(2))], 1);
        let mut cnf = Cnf::with_vars(2);
        assert_eq!(encode_pb_geq(&c, &mut cnf).unwrap(), 1);
        assert_eq!(cnf.clauses(), &[vec![x(1), x(2)]]);
    }

    #[test]
    fn weighted_constraint_models() {
        check_pb(
            &PbConstraint::new([(2, nx(1)), (3, nx(2)), (2, x(3))], 3),
            3,
        );
    }

    #[test]
    fn cardinality_models() {
        let c = PbConstraint::new([(1, x(1)), (1, x(2)), (1, x(3))], 2);
        check_pb(&c, 3);
        let mut cnf = Cnf::with_vars(3);
        encode_pb_geq(&c, &mut cnf).unwrap();
        let models = assignments(3).filter(|a| extends(&cnf, 3, a, &[])).count();
        assert_eq!(models, 4);
    }

    #[test]
    fn unsatisfiable_constraint() {
        let c = PbConstraint::new([(1, x(1)), (2, x(2))], 4);
        let mut cnf = Cnf::with_vars(2);
        encode_pb_geq(&c, &mut cnf).unwrap();
        assert!(assignments(2).all(|a| !extends(&cnf, 2, &a, &[])));
    }

    #[test]
    fn reachable_values_examples() {
        let f = LinearExpr::new([(3, x(1)), (2, x(2)), (2, x(3))], 0);
        let l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        assert_eq!(l.reachable_values(), vec![0, 2, 3, 4, 5, 7]);

        let f = LinearExpr::constant_only(4);
        let l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        assert_eq!(l.reachable_values(), vec![4]);

        let f = LinearExpr::new([(1, x(1)), (1, x(2)), (1, x(3)), (1, x(4))], 1);
        let l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        assert_eq!(l.reachable_values(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn fixed_literals_fold_into_offset() {
        let f = LinearExpr::new([(3, x(1)), (2, x(2)), (2, nx(3))], 1);
        let l = ObjectiveLadder::new(0, &f, |lit| match lit.var() {
            1 => Some(lit == x(1)),
            3 => Some(lit == x(3)),
            _ => None,
        })
        .unwrap();
        assert_eq!(l.reachable_values(), vec![4, 6]);
    }

    #[test]
    fn threshold_cuts_off_expensive_assignments() {
        let f = LinearExpr::new([(3, x(1)), (2, x(2)), (2, x(3))], 0);
        let mut l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        let mut cnf = Cnf::with_vars(3);
        let y4 = l.encode_lt(4, &mut cnf).unwrap();
        assert!(!extends(&cnf, 3, &[true, true, false], &[y4]));
        assert!(extends(&cnf, 3, &[true, false, false], &[y4]));
    }

    #[test]
    fn extreme_thresholds_are_constant() {
        let f = LinearExpr::new([(1, x(1)), (2, x(2))], 2);
        let mut l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        let mut cnf = Cnf::with_vars(2);
        let low = l.encode_lt(2, &mut cnf).unwrap();
        let high = l.encode_lt(6, &mut cnf).unwrap();
        for asg in assignments(2) {
            assert!(!extends(&cnf, 2, &asg, &[low]));
            assert!(extends(&cnf, 2, &asg, &[high]));
        }
        assert_eq!(
            l.encode_lt(1, &mut cnf),
            Err(EncodeError::BelowLowerBound { d: 1, lower: 2 })
        );
    }

    #[test]
    fn repeated_thresholds_are_idempotent() {
        let f = LinearExpr::new([(3, x(1)), (2, x(2)), (2, x(3))], 0);
        let mut l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        let mut cnf = Cnf::with_vars(3);
        let a = l.encode_lt(4, &mut cnf).unwrap();
        let clauses = cnf.len();
        let b = l.encode_lt(4, &mut cnf).unwrap();
        assert_eq!(a, b);
        assert_eq!(cnf.len(), clauses);
        // 6 is unreachable, so it shares the literal of 7
        let y6 = l.encode_lt(6, &mut cnf).unwrap();
        let y7 = l.encode_lt(7, &mut cnf).unwrap();
        assert_eq!(y6, y7);
    }

    fn check_ladder(coeffs: &[(u64, bool)], constant: u64, thresholds: &[u64]) {
        let n = coeffs.len() as u32;
        let f = LinearExpr::new(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &(w, neg))| (w, Lit::new(i as u32 + 1, neg))),
            constant,
        );
        let mut ladder = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        let mut cnf = Cnf::with_vars(n);
        let ys: Vec<(u64, Lit)> = thresholds
            .iter()
            .filter(|&&d| d >= constant)
            .map(|&d| (d, ladder.encode_lt(d, &mut cnf).unwrap()))
            .collect();
        let mut s = CdclSolver::new();
        cnf.replay_into(&mut s, cnf.num_vars());
        for asg in assignments(n) {
            let value = f.evaluate(&asg);
            let assume: Vec<Lit> = (1..=n).map(|v| Lit::new(v, !asg[v as usize - 1])).collect();
            assert_eq!(s.solve(&assume), SolveResult::Sat);
            for &(d, y) in &ys {
                assert_eq!(s.model_value(y), value < d, "f={value} d={d}");
            }
            for &(d, y) in &ys {
                for &(e, z) in &ys {
                    if e >= d {
                        let mut a = assume.clone();
                        a.extend([y, !z]);
                        assert_eq!(s.solve(&a), SolveResult::Unsat);
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ladder_literals_match_objective_values(
            coeffs in prop::collection::vec((1u64..9, any::<bool>()), 0..7),
            constant in 0u64..4,
            thresholds in prop::collection::vec(0u64..40, 1..6),
        ) {
            check_ladder(&coeffs, constant, &thresholds);
        }

        #[test]
        fn pb_encoding_matches_inequality(
            coeffs in prop::collection::vec((1u64..7, any::<bool>()), 1..7),
            bound in 0u64..25,
        ) {
            let c = PbConstraint::new(
                coeffs.iter().enumerate().map(|(i, &(w, neg))| (w, Lit::new(i as u32 + 1, neg))),
                bound,
            );
            check_pb(&c, coeffs.len() as u32);
        }
    }

    #[test]
    fn ladder_equivalence_on_ten_variables() {
        check_ladder(
            &[
                (3, false),
                (1, true),
                (4, false),
                (1, false),
                (5, true),
                (9, false),
                (2, false),
                (6, true),
                (5, false),
                (3, false),
            ],
            2,
            &[2, 3, 5, 8, 13, 21, 34, 42, 44],
        );
    }

    #[test]
    fn remapped_ladder_keeps_semantics() {
        let f = LinearExpr::new([(3, x(1)), (2, x(2)), (2, x(3))], 0);
        let mut l = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        let mut cnf = Cnf::with_vars(3);
        for d in [0, 3, 5, 8] {
            l.encode_lt(d, &mut cnf).unwrap();
        }
        let mut s = CdclSolver::new();
        s.ensure_vars(6);
        let map = cnf.replay_into(&mut s, 3);
        let l2 = l.remap(|lit| Lit::new(map[lit.var() as usize], lit.is_negated()));
        let y5 = l2.thresholds()[&5];
        assert_eq!(s.solve(&[y5, x(1), x(2)]), SolveResult::Unsat);
        assert_eq!(s.solve(&[y5, x(1)]), SolveResult::Sat);
    }
}

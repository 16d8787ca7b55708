//! Extraction of one minimal correction subset over unit soft clauses.

use std::collections::BTreeSet;

use crate::model::{Lit, Point};
use crate::sat::{SatSolver, SolveResult};

/// Unit soft clauses `(y[k,d])`, grouped per objective and sorted by `d`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoftSet {
    objectives: Vec<Vec<(u64, Lit)>>,
}

impl SoftSet {
    pub fn new(mut objectives: Vec<Vec<(u64, Lit)>>) -> SoftSet {
        for o in &mut objectives {
            o.sort_by_key(|&(d, _)| d);
            debug_assert!(o.windows(2).all(|w| w[0].0 < w[1].0), "duplicate threshold");
        }
        SoftSet { objectives }
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn objective(&self, k: usize) -> &[(u64, Lit)] {
        &self.objectives[k]
    }

    pub fn lit_for(&self, k: usize, d: u64) -> Option<Lit> {
        let o = &self.objectives[k];
        o.binary_search_by_key(&d, |&(t, _)| t).ok().map(|i| o[i].1)
    }

    pub fn len(&self) -> usize {
        self.objectives.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distinct literals in first-appearance order.
    fn distinct_lits(&self) -> Vec<Lit> {
        let mut seen = BTreeSet::new();
        self.objectives
            .iter()
            .flatten()
            .filter(|(_, l)| seen.insert(*l))
            .map(|&(_, l)| l)
            .collect()
    }
}

/// A minimal correction subset with its witness model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcs {
    /// Falsified thresholds per objective, ascending.
    pub falsified: Vec<Vec<u64>>,
    /// Per objective, the largest falsified threshold.
    pub representative: Point,
    /// Per objective, the smallest satisfied threshold (`u64::MAX` if none).
    pub successor: Point,
    /// Model of the hard clauses that satisfies every soft clause outside
    /// the MCS, over all solver variables.
    pub model: Vec<bool>,
}

impl Mcs {
    /// Whether every objective's falsified thresholds form a prefix of its
    /// soft list, as they must for threshold ladders.
    pub fn is_prefix_closed(&self, softs: &SoftSet) -> bool {
        self.falsified.iter().enumerate().all(|(k, f)| {
            softs
                .objective(k)
                .iter()
                .take(f.len())
                .map(|&(d, _)| d)
                .eq(f.iter().copied())
        })
    }

    pub fn size(&self) -> usize {
        self.falsified.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McsOutcome {
    Found(Mcs),
    /// The hard clauses (under the base assumptions) are unsatisfiable.
    NoneLeft,
    Interrupted,
}

/// Builds the [`Mcs`] record from a soft set and the set of falsified literals.
fn build_mcs(softs: &SoftSet, falsified: &BTreeSet<Lit>, model: Vec<bool>) -> Mcs {
    let mut per_objective = Vec::with_capacity(softs.num_objectives());
    let mut rep = Vec::with_capacity(softs.num_objectives());
    let mut succ = Vec::with_capacity(softs.num_objectives());
    for k in 0..softs.num_objectives() {
        let list = softs.objective(k);
        let f: Vec<u64> = list
            .iter()
            .filter(|(_, l)| falsified.contains(l))
            .map(|&(d, _)| d)
            .collect();
        rep.push(f.last().copied().unwrap_or(0));
        succ.push(
            list.iter()
                .find(|(_, l)| !falsified.contains(l))
                .map_or(u64::MAX, |&(d, _)| d),
        );
        per_objective.push(f);
    }
    Mcs {
        falsified: per_objective,
        representative: Point(rep),
        successor: Point(succ),
        model,
    }
}

/// Finds one MCS of the solver's clauses (hard) and `softs`, using the
/// clause-D strategy: the disjunction of the currently falsified softs is
/// added behind a selector until it can no longer be satisfied.
pub fn extract_mcs<S: SatSolver + ?Sized>(
    solver: &mut S,
    softs: &SoftSet,
    base: &[Lit],
) -> McsOutcome {
    match solver.solve(base) {
        SolveResult::Sat => {}
        SolveResult::Unsat => return McsOutcome::NoneLeft,
        SolveResult::Interrupted => return McsOutcome::Interrupted,
    }
    let mut model = solver.model().to_vec();
    let lits = softs.distinct_lits();
    let (mut satisfied, mut falsified): (Vec<Lit>, Vec<Lit>) =
        lits.into_iter().partition(|l| l.eval(&model));

    while !falsified.is_empty() {
        let sel = Lit::positive(solver.new_var());
        let mut clause = Vec::with_capacity(falsified.len() + 1);
        clause.push(!sel);
        clause.extend_from_slice(&falsified);
        solver.add_clause(&clause);

        let mut assumptions = Vec::with_capacity(base.len() + satisfied.len() + 1);
        assumptions.extend_from_slice(base);
        assumptions.extend_from_slice(&satisfied);
        assumptions.push(sel);
        let result = solver.solve(&assumptions);
        solver.add_clause(&[!sel]);
        match result {
            SolveResult::Sat => {
                model = solver.model().to_vec();
                let (now_true, still_false): (Vec<Lit>, Vec<Lit>) =
                    falsified.into_iter().partition(|l| l.eval(&model));
                debug_assert!(!now_true.is_empty());
                satisfied.extend(now_true);
                falsified = still_false;
            }
            SolveResult::Unsat => break,
            SolveResult::Interrupted => return McsOutcome::Interrupted,
        }
    }

    let falsified: BTreeSet<Lit> = falsified.into_iter().collect();
    McsOutcome::Found(build_mcs(softs, &falsified, model))
}

/// Per objective, the largest falsified threshold of `mcs`.
pub fn representative_point(mcs: &Mcs) -> Point {
    mcs.representative.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_pb_geq;
    use crate::encode::ObjectiveLadder;
    use crate::model::{LinearExpr, PbConstraint};
    use crate::sat::{CdclSolver, ClauseSink};

    fn lit(d: i64) -> Lit {
        Lit::from_dimacs(d)
    }

    /// The three-variable MaxSAT example with softs (~x1), (~x2), (~x3),
    /// one soft per "objective" so that thresholds are distinct keys.
    fn small_maxsat() -> (CdclSolver, SoftSet) {
        let mut s = CdclSolver::new();
        s.ensure_vars(3);
        s.add_clause(&[lit(-1), lit(-2), lit(-3)]);
        s.add_clause(&[lit(1), lit(2)]);
        s.add_clause(&[lit(-1), lit(2), lit(3)]);
        let softs = SoftSet::new(vec![vec![(0, lit(-1)), (1, lit(-2)), (2, lit(-3))]]);
        (s, softs)
    }

    #[test]
    fn enumerates_both_mcs_of_small_maxsat() {
        let (mut s, softs) = small_maxsat();
        let mut found = Vec::new();
        loop {
            match extract_mcs(&mut s, &softs, &[]) {
                McsOutcome::Found(m) => {
                    let set: Vec<Lit> = m.falsified[0]
                        .iter()
                        .map(|&d| softs.lit_for(0, d).unwrap())
                        .collect();
                    // hard clauses plus satisfied softs hold in the model
                    for (_, l) in softs.objective(0) {
                        assert_eq!(l.eval(&m.model), !set.contains(l));
                    }
                    // block this MCS: at least one of its clauses must now hold
                    s.add_clause(&set);
                    found.push(set);
                }
                McsOutcome::NoneLeft => break,
                McsOutcome::Interrupted => unreachable!(),
            }
        }
        found.sort();
        assert_eq!(found, vec![vec![lit(-1), lit(-3)], vec![lit(-2)]]);
    }

    #[test]
    fn unsatisfiable_hard_clauses() {
        let mut s = CdclSolver::new();
        s.ensure_vars(1);
        s.add_clause(&[lit(1)]);
        s.add_clause(&[lit(-1)]);
        let softs = SoftSet::new(vec![vec![(0, lit(1))]]);
        assert_eq!(extract_mcs(&mut s, &softs, &[]), McsOutcome::NoneLeft);
    }

    #[test]
    fn satisfiable_softs_give_empty_mcs() {
        let mut s = CdclSolver::new();
        s.ensure_vars(2);
        s.add_clause(&[lit(1), lit(2)]);
        let softs = SoftSet::new(vec![vec![(0, lit(1)), (1, lit(-2))]]);
        match extract_mcs(&mut s, &softs, &[]) {
            McsOutcome::Found(m) => assert_eq!(m.size(), 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_objective_ladder_has_one_mcs() {
        // f = 3x1 + 2x2 + 2x3 with x1 + x2 >= 1 and ~x2 + x3 >= 1
        let f = LinearExpr::new([(3, lit(1)), (2, lit(2)), (2, lit(3))], 0);
        let mut s = CdclSolver::new();
        s.ensure_vars(3);
        for c in [
            PbConstraint::new([(1, lit(1)), (1, lit(2))], 1),
            PbConstraint::new([(1, lit(-2)), (1, lit(3))], 1),
        ] {
            encode_pb_geq(&c, &mut s).unwrap();
        }
        let mut ladder = ObjectiveLadder::new(0, &f, |_| None).unwrap();
        let domain = [0, 2, 3, 4, 5, 7, 8];
        let softs: Vec<(u64, Lit)> = domain
            .iter()
            .map(|&d| (d, ladder.encode_lt(d, &mut s).unwrap()))
            .collect();
        let softs = SoftSet::new(vec![softs]);
        let m = match extract_mcs(&mut s, &softs, &[]) {
            McsOutcome::Found(m) => m,
            other => panic!("{other:?}"),
        };
        assert_eq!(m.falsified, vec![vec![0, 2, 3]]);
        assert!(m.is_prefix_closed(&softs));
        assert_eq!(representative_point(&m), Point::new(vec![3]));
        assert_eq!(m.successor, Point::new(vec![4]));
        assert_eq!(f.evaluate(&m.model[..3]), 3);
    }
}

//! Enumeration drivers.
//!
//! [`mcs_approx`] is the basic loop: extract an MCS, record its witness,
//! remember its representative point as a lower bound and block the region
//! weakly dominated by that point. [`core_solve`] re-runs it with rounded
//! coefficients and a fresh solver per iteration; [`intre_solve`] keeps one
//! solver and refines the threshold domains. [`enumerate_efficient_set`]
//! collects every efficient assignment instead of one per point.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::approx::{approx_coefficients, compute_domain};
use crate::encode::{encode_pb_geq, EncodeError, ObjectiveLadder};
use crate::mcs::{extract_mcs, McsOutcome, SoftSet};
use crate::model::{
    nondominated_filter, nondominated_points, Instance, LinearExpr, Lit, Point, SolutionRecord,
};
use crate::ratio::{ceil_div, Ratio};
use crate::sat::{Budget, CdclSolver, ClauseSink, Cnf, SatSolver, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("invalid ratio schedule: {0}")]
    Schedule(String),
}

/// How the approximation ratio `1 + eps` evolves between iterations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSchedule {
    /// Ratio of the first iteration.
    pub start: Ratio,
    /// `eps` is divided by this after each iteration; `None` runs once.
    pub divisor: Option<Ratio>,
    /// An `eps` below this snaps to zero.
    pub floor: Ratio,
    /// Stop once an iteration at this ratio (or below) has completed.
    pub target: Ratio,
}

impl RatioSchedule {
    pub fn default_floor() -> Ratio {
        Ratio::new(1, 10_000)
    }

    /// A single exact iteration.
    pub fn exact() -> RatioSchedule {
        RatioSchedule::single(Ratio::from_integer(1))
    }

    /// One iteration at `ratio`.
    pub fn single(ratio: Ratio) -> RatioSchedule {
        RatioSchedule {
            start: ratio,
            divisor: None,
            floor: RatioSchedule::default_floor(),
            target: ratio,
        }
    }

    /// Starts at `start`, divides `eps` by `divisor` until it reaches the
    /// target ratio.
    pub fn new(start: Ratio, divisor: Ratio, target: Ratio) -> Result<RatioSchedule, EngineError> {
        let s = RatioSchedule {
            start,
            divisor: Some(divisor),
            floor: RatioSchedule::default_floor(),
            target,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let one = Ratio::from_integer(1);
        if self.target < one {
            return Err(EngineError::Schedule("target ratio below 1".into()));
        }
        if self.start < self.target {
            return Err(EngineError::Schedule(
                "start ratio below target ratio".into(),
            ));
        }
        if let Some(d) = self.divisor {
            if d <= one {
                return Err(EngineError::Schedule("divisor must exceed 1".into()));
            }
        }
        Ok(())
    }

    /// Ratio of the iteration after one completed at `ratio`, or `None` if
    /// the schedule is finished.
    pub fn next_ratio(&self, ratio: Ratio) -> Option<Ratio> {
        if ratio <= self.target {
            return None;
        }
        let one = Ratio::from_integer(1);
        let divisor = self.divisor?;
        let eps = update_epsilon(ratio - one, divisor, self.floor, self.target - one);
        let next = one + eps;
        (next < ratio).then_some(next)
    }
}

/// `eps / divisor`, snapped to zero below `floor`, never below `target`.
pub fn update_epsilon(eps: Ratio, divisor: Ratio, floor: Ratio, target: Ratio) -> Ratio {
    let mut next = eps / divisor;
    if next < floor {
        next = Ratio::from_integer(0);
    }
    next.max(target)
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub schedule: RatioSchedule,
    pub budget: Budget,
    /// Seed for the SAT backend's tie-breaking; `0` is the plain heuristic.
    pub seed: u64,
    /// Advisory cap on the solver's clause memory in bytes.
    pub memory_cap: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            schedule: RatioSchedule::exact(),
            budget: Budget::default(),
            seed: 0,
            memory_cap: None,
        }
    }
}

impl SolveOptions {
    pub fn with_schedule(schedule: RatioSchedule) -> SolveOptions {
        SolveOptions {
            schedule,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// The schedule (or the search) finished.
    Complete,
    /// Stopped by the time or memory budget.
    Truncated,
    /// The constraints have no solution.
    Infeasible,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Complete => "complete",
            RunStatus::Truncated => "truncated",
            RunStatus::Infeasible => "infeasible",
        }
    }
}

/// What happened in one iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    /// 1-based.
    pub iteration: usize,
    pub ratio: Ratio,
    pub completed: bool,
    pub mcs_count: usize,
    /// Records found in this iteration, before filtering.
    pub new_records: usize,
    /// Images of the approximation set after the iteration.
    pub front: Vec<Point>,
    /// Lower bound set after the iteration (the previous one if the
    /// iteration did not complete).
    pub lower_bound: Vec<Point>,
    pub objective_clauses: usize,
    pub total_clauses: usize,
    pub started: Duration,
    pub finished: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxResult {
    /// Approximation set, one record per image, mutually nondominated.
    pub records: Vec<SolutionRecord>,
    /// Lower bound set from the last completed iteration.
    pub lower_bound: Vec<Point>,
    /// Ratio guaranteed by the last completed iteration, `1` once the front
    /// is known to be complete.
    pub warranted_ratio: Option<Ratio>,
    pub status: RunStatus,
    /// Whether the records are exactly the Pareto front.
    pub pareto_complete: bool,
    pub trace: Vec<IterationTrace>,
}

impl ApproxResult {
    fn empty(status: RunStatus) -> ApproxResult {
        ApproxResult {
            records: Vec::new(),
            lower_bound: Vec::new(),
            warranted_ratio: None,
            status,
            pareto_complete: false,
            trace: Vec::new(),
        }
    }

    fn infeasible() -> ApproxResult {
        ApproxResult {
            warranted_ratio: Some(Ratio::from_integer(1)),
            pareto_complete: true,
            ..ApproxResult::empty(RunStatus::Infeasible)
        }
    }

    pub fn images(&self) -> Vec<Point> {
        self.records.iter().map(|r| r.image.clone()).collect()
    }
}

/// Output of one [`mcs_approx`] call.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct McsApproxOutput {
    /// One record per extracted MCS, in discovery order.
    pub records: Vec<SolutionRecord>,
    /// Representative points, in discovery order.
    pub lower_bound: Vec<Point>,
    pub mcs_count: usize,
    /// `false` if the loop was interrupted before running out of MCSs.
    pub complete: bool,
}

fn memory_exceeded<S: SatSolver + ?Sized>(solver: &S, cap: Option<usize>) -> bool {
    cap.is_some_and(|c| solver.memory_estimate() > c)
}

/// Enumerates MCSs of the solver's clauses and `softs` until none is left.
/// Each MCS contributes its witness (with its image under the instance's
/// objectives) and its representative point; the region weakly dominated by
/// that point is then blocked. With a `guard`, blocking clauses only hold
/// while the guard is assumed, so the caller can retire them afterwards.
/// `approx` are the objectives the ladders encode (used for sanity checks).
pub fn mcs_approx<S: SatSolver + ?Sized>(
    solver: &mut S,
    instance: &Instance,
    approx: &[LinearExpr],
    softs: &SoftSet,
    guard: Option<Lit>,
    memory_cap: Option<usize>,
) -> McsApproxOutput {
    let n = instance.num_vars() as usize;
    let base: Vec<Lit> = guard.into_iter().collect();
    let mut out = McsApproxOutput::default();
    loop {
        if memory_exceeded(solver, memory_cap) {
            log::warn!("memory cap reached");
            return out;
        }
        let mcs = match extract_mcs(solver, softs, &base) {
            McsOutcome::Found(m) => m,
            McsOutcome::NoneLeft => {
                out.complete = true;
                return out;
            }
            McsOutcome::Interrupted => return out,
        };
        out.mcs_count += 1;
        debug_assert!(
            mcs.is_prefix_closed(softs),
            "falsified thresholds are not a prefix"
        );
        let assignment = mcs.model[..n].to_vec();
        if cfg!(debug_assertions) {
            for (k, f) in approx.iter().enumerate() {
                let v = f.evaluate(&assignment);
                debug_assert!(mcs.representative.0[k] <= v && v < mcs.successor.0[k]);
            }
        }
        let mut block: Vec<Lit> = guard.iter().map(|&g| !g).collect();
        for (k, &r) in mcs.representative.coords().iter().enumerate() {
            block.push(softs.lit_for(k, r).expect("representative is a threshold"));
        }
        solver.add_clause(&block);
        log::debug!(
            "mcs {} representative {}",
            out.mcs_count,
            mcs.representative
        );
        out.records.push(SolutionRecord::new(instance, assignment));
        out.lower_bound.push(mcs.representative);
    }
}

/// Encodes every constraint of the instance.
pub fn encode_constraints<S: ClauseSink + ?Sized>(
    instance: &Instance,
    sink: &mut S,
) -> Result<usize, EncodeError> {
    sink.ensure_vars(instance.num_vars());
    let mut count = 0;
    for c in instance.constraints() {
        count += encode_pb_geq(c, sink)?;
    }
    Ok(count)
}

/// Thresholds of a complete domain: the lower bound, every reachable value
/// and one past the largest.
fn complete_domain(ladder: &ObjectiveLadder, lower: u64) -> Vec<u64> {
    let mut d = ladder.reachable_values();
    if d.first() != Some(&lower) {
        d.insert(0, lower);
    }
    let top = ladder.max_value() + 1;
    d.push(top);
    d.dedup();
    d
}

fn encode_thresholds<S: ClauseSink + ?Sized>(
    ladder: &mut ObjectiveLadder,
    domain: &[u64],
    sink: &mut S,
) -> Result<Vec<(u64, Lit)>, EncodeError> {
    domain
        .iter()
        .map(|&d| Ok((d, ladder.encode_lt(d, sink)?)))
        .collect()
}

/// Loads the constraints into a new solver and checks feasibility. Returns
/// `None` if infeasible; `Err(Interrupted)` style is folded into `Some` with
/// the solver's last answer.
fn prepare(
    instance: &Instance,
    options: &SolveOptions,
    constraints: &Cnf,
) -> (CdclSolver, SolveResult) {
    let mut solver = CdclSolver::with_seed(options.seed);
    solver.set_budget(options.budget.clone());
    solver.ensure_vars(instance.num_vars());
    constraints.replay_into(&mut solver, instance.num_vars());
    let result = solver.solve(&[]);
    (solver, result)
}

struct Progress {
    clock: Instant,
    records: Vec<SolutionRecord>,
    lower: Vec<Point>,
    warranted: Option<Ratio>,
    trace: Vec<IterationTrace>,
}

impl Progress {
    fn new() -> Progress {
        Progress {
            clock: Instant::now(),
            records: Vec::new(),
            lower: Vec::new(),
            warranted: None,
            trace: Vec::new(),
        }
    }

    fn merge_records(&mut self, new: Vec<SolutionRecord>) {
        let all = std::mem::take(&mut self.records).into_iter().chain(new);
        self.records = nondominated_filter(all, |r| &r.image);
    }

    fn images(&self) -> Vec<Point> {
        self.records.iter().map(|r| r.image.clone()).collect()
    }

    fn finish(self, status: RunStatus, pareto_complete: bool) -> ApproxResult {
        let warranted = if pareto_complete {
            Some(Ratio::from_integer(1))
        } else {
            self.warranted
        };
        ApproxResult {
            records: self.records,
            lower_bound: self.lower,
            warranted_ratio: warranted,
            status,
            pareto_complete,
            trace: self.trace,
        }
    }
}

/// Interval-based re-approximation. Objectives are encoded once; each
/// iteration builds threshold domains for the current ratio, permanently
/// blocks the regions weakly dominated by the previous iteration's records
/// and runs [`mcs_approx`]. A ratio of one makes the domains complete, so
/// `RatioSchedule::exact()` computes the Pareto front.
pub fn intre_solve(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<ApproxResult, EngineError> {
    options.schedule.validate()?;
    let mut progress = Progress::new();
    let mut cnf = Cnf::with_vars(instance.num_vars());
    encode_constraints(instance, &mut cnf)?;
    let (mut solver, feasible) = prepare(instance, options, &cnf);
    match feasible {
        SolveResult::Unsat => return Ok(ApproxResult::infeasible()),
        SolveResult::Interrupted => return Ok(progress.finish(RunStatus::Truncated, false)),
        SolveResult::Sat => {}
    }

    let mut ladders = Vec::with_capacity(instance.num_objectives());
    for (k, f) in instance.objectives().iter().enumerate() {
        ladders.push(ObjectiveLadder::new(k, f, |l| solver.fixed_value(l))?);
    }
    let objectives = instance.objectives().to_vec();
    let one = Ratio::from_integer(1);
    let mut ratio = options.schedule.start;
    let mut previous: Vec<SolutionRecord> = Vec::new();
    let mut iteration = 0;

    loop {
        iteration += 1;
        let started = progress.clock.elapsed();
        let mut softs = Vec::with_capacity(ladders.len());
        for (k, ladder) in ladders.iter_mut().enumerate() {
            let domain = if ratio == one {
                complete_domain(ladder, instance.lower_bound(k))
            } else {
                compute_domain(instance.lower_bound(k), instance.upper_bound(k), &ratio)
                    .values()
                    .to_vec()
            };
            softs.push(encode_thresholds(ladder, &domain, &mut solver)?);
        }
        let softs = SoftSet::new(softs);

        for rec in &previous {
            let mut clause = Vec::with_capacity(ladders.len());
            for (ladder, &v) in ladders.iter_mut().zip(rec.image.coords()) {
                clause.push(ladder.encode_lt(v, &mut solver)?);
            }
            solver.add_clause(&clause);
        }
        let seeds = progress.images();

        let guard = Lit::positive(solver.new_var());
        let out = mcs_approx(
            &mut solver,
            instance,
            &objectives,
            &softs,
            Some(guard),
            options.memory_cap,
        );
        solver.add_clause(&[!guard]);

        let found = out.records.len();
        progress.merge_records(out.records.clone());
        if out.complete {
            progress.lower = nondominated_points(seeds.into_iter().chain(out.lower_bound));
            progress.warranted = Some(ratio);
        }
        progress.trace.push(IterationTrace {
            iteration,
            ratio,
            completed: out.complete,
            mcs_count: out.mcs_count,
            new_records: found,
            front: progress.images(),
            lower_bound: progress.lower.clone(),
            objective_clauses: ladders.iter().map(ObjectiveLadder::clause_count).sum(),
            total_clauses: solver.num_clauses(),
            started,
            finished: progress.clock.elapsed(),
        });
        log::info!(
            "iteration {iteration} ratio {ratio}: {found} new records, |A| = {}, {:?}",
            progress.records.len(),
            solver.stats()
        );

        if !out.complete {
            return Ok(progress.finish(RunStatus::Truncated, false));
        }
        if found == 0 || ratio == one {
            if found == 0 {
                progress.lower = progress.images();
            }
            return Ok(progress.finish(RunStatus::Complete, true));
        }
        match options.schedule.next_ratio(ratio) {
            Some(next) => ratio = next,
            None => return Ok(progress.finish(RunStatus::Complete, false)),
        }
        previous = out.records;
        if options.budget.exhausted() {
            return Ok(progress.finish(RunStatus::Truncated, false));
        }
    }
}

/// A recorded encoding of one rounded objective, replayed into each
/// iteration's fresh solver while the rounding stays the same.
struct CachedObjective {
    cnf: Cnf,
    ladder: ObjectiveLadder,
    domain: Vec<u64>,
}

/// Coefficient-based re-approximation. Each iteration starts a fresh solver,
/// rounds the objective coefficients to the current ratio, encodes the
/// rounded objectives with complete domains, blocks the regions weakly
/// dominated by the rounded images of the current records and runs
/// [`mcs_approx`]. Stops when the rounded objectives equal the originals.
pub fn core_solve(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<ApproxResult, EngineError> {
    options.schedule.validate()?;
    let mut progress = Progress::new();
    let n = instance.num_vars();
    let mut constraints = Cnf::with_vars(n);
    encode_constraints(instance, &mut constraints)?;
    let (pre, feasible) = prepare(instance, options, &constraints);
    match feasible {
        SolveResult::Unsat => return Ok(ApproxResult::infeasible()),
        SolveResult::Interrupted => return Ok(progress.finish(RunStatus::Truncated, false)),
        SolveResult::Sat => {}
    }
    let fixed: HashMap<u32, bool> = (1..=n)
        .filter_map(|v| pre.fixed_value(Lit::positive(v)).map(|b| (v, b)))
        .collect();
    let fixed_value = |l: Lit| fixed.get(&l.var()).map(|&b| b != l.is_negated());

    let mut cache: HashMap<LinearExpr, CachedObjective> = HashMap::new();
    let mut ratio = options.schedule.start;
    let mut iteration = 0;

    loop {
        iteration += 1;
        let started = progress.clock.elapsed();
        let mut solver = CdclSolver::with_seed(options.seed);
        solver.set_budget(options.budget.clone());
        solver.ensure_vars(n);
        constraints.replay_into(&mut solver, n);

        let mut approx = Vec::with_capacity(instance.num_objectives());
        let mut exact = true;
        let mut ladders = Vec::with_capacity(instance.num_objectives());
        let mut softs = Vec::with_capacity(instance.num_objectives());
        for (k, f) in instance.objectives().iter().enumerate() {
            let map = approx_coefficients(f, &ratio);
            exact &= map.is_exact();
            if !cache.contains_key(&map.approx) {
                let mut cnf = Cnf::with_vars(n);
                let mut ladder = ObjectiveLadder::new(k, &map.approx, fixed_value)?;
                let domain = complete_domain(&ladder, map.approx.lower_bound());
                encode_thresholds(&mut ladder, &domain, &mut cnf)?;
                cache.insert(
                    map.approx.clone(),
                    CachedObjective {
                        cnf,
                        ladder,
                        domain,
                    },
                );
            }
            let cached = &cache[&map.approx];
            let var_map = cached.cnf.replay_into(&mut solver, n);
            let ladder = cached
                .ladder
                .remap(|l| Lit::new(var_map[l.var() as usize], l.is_negated()));
            softs.push(
                cached
                    .domain
                    .iter()
                    .map(|&d| (d, ladder.thresholds()[&d]))
                    .collect::<Vec<_>>(),
            );
            ladders.push(ladder);
            approx.push(map.approx);
        }
        let softs = SoftSet::new(softs);

        let mut seeds = Vec::with_capacity(progress.records.len());
        for rec in &progress.records {
            let rounded: Vec<u64> = approx.iter().map(|f| f.evaluate(&rec.assignment)).collect();
            let clause: Vec<Lit> = rounded
                .iter()
                .enumerate()
                .map(|(k, &v)| softs.lit_for(k, v).expect("rounded image is reachable"))
                .collect();
            solver.add_clause(&clause);
            seeds.push(Point(rounded));
        }

        let out = mcs_approx(
            &mut solver,
            instance,
            &approx,
            &softs,
            None,
            options.memory_cap,
        );
        let found = out.records.len();
        progress.merge_records(out.records);
        if out.complete {
            progress.lower = nondominated_points(seeds.into_iter().chain(out.lower_bound));
            progress.warranted = Some(ratio);
        }
        progress.trace.push(IterationTrace {
            iteration,
            ratio,
            completed: out.complete,
            mcs_count: out.mcs_count,
            new_records: found,
            front: progress.images(),
            lower_bound: progress.lower.clone(),
            objective_clauses: ladders.iter().map(ObjectiveLadder::clause_count).sum(),
            total_clauses: solver.num_clauses(),
            started,
            finished: progress.clock.elapsed(),
        });
        log::info!(
            "iteration {iteration} ratio {ratio}: {found} new records, |A| = {}, {:?}",
            progress.records.len(),
            solver.stats()
        );

        if !out.complete {
            return Ok(progress.finish(RunStatus::Truncated, false));
        }
        if exact {
            return Ok(progress.finish(RunStatus::Complete, true));
        }
        match options.schedule.next_ratio(ratio) {
            Some(next) => ratio = next,
            None => return Ok(progress.finish(RunStatus::Complete, false)),
        }
        if options.budget.exhausted() {
            return Ok(progress.finish(RunStatus::Truncated, false));
        }
    }
}

/// Every efficient assignment, not just one per nondominated point. Uses
/// complete domains; after each MCS with representative `r` the points
/// weakly dominated by `r` other than `r` itself are blocked, together with
/// the witness assignment.
pub fn enumerate_efficient_set(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<ApproxResult, EngineError> {
    let mut progress = Progress::new();
    let n = instance.num_vars();
    let mut cnf = Cnf::with_vars(n);
    encode_constraints(instance, &mut cnf)?;
    let (mut solver, feasible) = prepare(instance, options, &cnf);
    match feasible {
        SolveResult::Unsat => return Ok(ApproxResult::infeasible()),
        SolveResult::Interrupted => return Ok(progress.finish(RunStatus::Truncated, false)),
        SolveResult::Sat => {}
    }
    let mut ladders = Vec::with_capacity(instance.num_objectives());
    for (k, f) in instance.objectives().iter().enumerate() {
        ladders.push(ObjectiveLadder::new(k, f, |l| solver.fixed_value(l))?);
    }
    let mut softs = Vec::with_capacity(ladders.len());
    for (k, ladder) in ladders.iter_mut().enumerate() {
        let domain = complete_domain(ladder, instance.lower_bound(k));
        softs.push(encode_thresholds(ladder, &domain, &mut solver)?);
    }
    let softs = SoftSet::new(softs);

    let mut records = Vec::new();
    let mut points = Vec::new();
    let mut mcs_count = 0;
    let complete = loop {
        if memory_exceeded(&solver, options.memory_cap) {
            break false;
        }
        let mcs = match extract_mcs(&mut solver, &softs, &[]) {
            McsOutcome::Found(m) => m,
            McsOutcome::NoneLeft => break true,
            McsOutcome::Interrupted => break false,
        };
        mcs_count += 1;
        let r = mcs.representative.clone();
        let dominated: Vec<Lit> = r
            .coords()
            .iter()
            .enumerate()
            .map(|(k, &v)| softs.lit_for(k, v).expect("representative is a threshold"))
            .collect();
        for (q, &v) in r.coords().iter().enumerate() {
            let mut clause = dominated.clone();
            clause.push(ladders[q].encode_lt(v + 1, &mut solver)?);
            solver.add_clause(&clause);
        }
        let assignment = mcs.model[..n as usize].to_vec();
        let differs: Vec<Lit> = (1..=n)
            .map(|v| Lit::new(v, assignment[v as usize - 1]))
            .collect();
        solver.add_clause(&differs);
        let rec = SolutionRecord::new(instance, assignment);
        debug_assert_eq!(rec.image, r);
        if !points.contains(&r) {
            points.push(r);
        }
        records.push(rec);
    };

    progress.records = records;
    progress.lower = nondominated_points(points);
    progress.warranted = complete.then(|| Ratio::from_integer(1));
    progress.trace.push(IterationTrace {
        iteration: 1,
        ratio: Ratio::from_integer(1),
        completed: complete,
        mcs_count,
        new_records: progress.records.len(),
        front: progress.lower.clone(),
        lower_bound: progress.lower.clone(),
        objective_clauses: ladders.iter().map(ObjectiveLadder::clause_count).sum(),
        total_clauses: solver.num_clauses(),
        started: Duration::ZERO,
        finished: progress.clock.elapsed(),
    });
    let status = if complete {
        RunStatus::Complete
    } else {
        RunStatus::Truncated
    };
    Ok(progress.finish(status, complete))
}

/// Outcome of a SAT-based certificate check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Valid,
    Invalid,
    Unknown,
}

/// Builds constraints plus exact objective ladders in a fresh solver.
fn certificate_solver(
    instance: &Instance,
    budget: &Budget,
) -> Result<(CdclSolver, Vec<ObjectiveLadder>), EngineError> {
    let mut solver = CdclSolver::new();
    solver.set_budget(budget.clone());
    encode_constraints(instance, &mut solver)?;
    let ladders = instance
        .objectives()
        .iter()
        .enumerate()
        .map(|(k, f)| ObjectiveLadder::new(k, f, |_| None))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((solver, ladders))
}

fn certify_with<F>(
    instance: &Instance,
    budget: &Budget,
    rows: usize,
    mut threshold: F,
) -> Result<Certificate, EngineError>
where
    F: FnMut(usize, usize) -> u64,
{
    let (mut solver, mut ladders) = certificate_solver(instance, budget)?;
    for i in 0..rows {
        let mut clause = Vec::with_capacity(ladders.len());
        for (k, ladder) in ladders.iter_mut().enumerate() {
            let d = threshold(i, k).max(instance.lower_bound(k));
            clause.push(ladder.encode_lt(d, &mut solver)?);
        }
        solver.add_clause(&clause);
    }
    Ok(match solver.solve(&[]) {
        SolveResult::Unsat => Certificate::Valid,
        SolveResult::Sat => Certificate::Invalid,
        SolveResult::Interrupted => Certificate::Unknown,
    })
}

/// Proves with one SAT call that every feasible point is weakly dominated
/// by some point of `lower`: no feasible `x` may lie strictly below every
/// lower bound point in some coordinate.
pub fn certify_lower_bound(
    instance: &Instance,
    lower: &[Point],
    budget: &Budget,
) -> Result<Certificate, EngineError> {
    certify_with(instance, budget, lower.len(), |i, k| lower[i].0[k])
}

/// Proves with one SAT call that every feasible `x` has a record `a` with
/// `f(a) <= ratio * f(x)`.
pub fn certify_approximation(
    instance: &Instance,
    records: &[SolutionRecord],
    ratio: &Ratio,
    budget: &Budget,
) -> Result<Certificate, EngineError> {
    // a_j > ratio * x_j  <=>  x_j < ceil(a_j / ratio)
    certify_with(instance, budget, records.len(), |i, k| {
        ceil_div(records[i].image.0[k], ratio)
    })
}

//! Incremental CDCL SAT backend.
//!
//! Clauses are only ever added. Between `solve` calls the solver sits at
//! decision level 0, so literals fixed at the root stay visible through
//! [`SatSolver::fixed_value`].

use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::model::Lit;

/// Anything clauses can be written to: a live solver or a recorded [`Cnf`].
pub trait ClauseSink {
    /// Allocates a fresh variable; indices start at 1 and increase by one.
    fn new_var(&mut self) -> u32;
    fn num_vars(&self) -> u32;
    fn add_clause(&mut self, lits: &[Lit]);
    /// A literal that is true in every model (allocated on first use).
    fn true_lit(&mut self) -> Lit;

    fn ensure_vars(&mut self, n: u32) {
        while self.num_vars() < n {
            self.new_var();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
    Interrupted,
}

/// Cooperative stop signal: a wall-clock deadline and/or a shared flag.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn with_timeout(limit: Duration) -> Budget {
        Budget {
            deadline: Some(Instant::now() + limit),
            cancel: None,
        }
    }

    pub fn exhausted(&self) -> bool {
        if let Some(flag) = &self.cancel {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solve_calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

pub trait SatSolver: ClauseSink {
    fn solve(&mut self, assumptions: &[Lit]) -> SolveResult;
    /// Model of the last satisfiable call, indexed by `var - 1`.
    fn model(&self) -> &[bool];
    fn model_value(&self, lit: Lit) -> bool {
        lit.eval(self.model())
    }
    /// Value of `lit` if it is fixed at the root level.
    fn fixed_value(&self, lit: Lit) -> Option<bool>;
    fn set_budget(&mut self, budget: Budget);
    fn stats(&self) -> SolverStats;
    fn num_clauses(&self) -> usize;
    /// Rough heap footprint of the clause database in bytes.
    fn memory_estimate(&self) -> usize;
}

/// A recorded clause list, e.g. for DIMACS dumps or replay into a solver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    true_lit: Option<Lit>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    /// An empty formula whose variables `1..=base` are already allocated.
    pub fn with_vars(base: u32) -> Cnf {
        Cnf {
            num_vars: base,
            ..Cnf::default()
        }
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }

    /// Copies the clauses into `sink`. Variables `1..=base` keep their
    /// index; every other variable gets a fresh one. Returns the variable
    /// map indexed by old variable (index 0 unused).
    pub fn replay_into<S: ClauseSink + ?Sized>(&self, sink: &mut S, base: u32) -> Vec<u32> {
        sink.ensure_vars(base);
        let mut map = vec![0u32; self.num_vars as usize + 1];
        for (v, slot) in map.iter_mut().enumerate().skip(1) {
            *slot = if v as u32 <= base {
                v as u32
            } else {
                sink.new_var()
            };
        }
        let mut buf = Vec::new();
        for c in &self.clauses {
            buf.clear();
            buf.extend(
                c.iter()
                    .map(|l| Lit::new(map[l.var() as usize], l.is_negated())),
            );
            sink.add_clause(&buf);
        }
        map
    }

    /// Whether `assignment` satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }
}

impl ClauseSink for Cnf {
    fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    fn num_vars(&self) -> u32 {
        self.num_vars
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        debug_assert!(lits.iter().all(|l| l.var() <= self.num_vars));
        self.clauses.push(lits.to_vec());
    }

    fn true_lit(&mut self) -> Lit {
        if let Some(t) = self.true_lit {
            return t;
        }
        let t = Lit::positive(self.new_var());
        self.clauses.push(vec![t]);
        self.true_lit = Some(t);
        t
    }
}

const TRUE: i8 = 1;
const FALSE: i8 = -1;
const UNDEF: i8 = 0;

/// Clause header; the literals live in the solver's arena.
#[derive(Debug, Clone, Copy)]
struct Clause {
    start: u32,
    len: u32,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

impl Clause {
    fn range(&self) -> std::ops::Range<usize> {
        self.start as usize..(self.start + self.len) as usize
    }
}

#[inline]
fn lit_value(assign: &[i8], lit: Lit) -> i8 {
    let a = assign[(lit.var() - 1) as usize];
    if lit.is_negated() {
        -a
    } else {
        a
    }
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

/// Binary max-heap of variables ordered by activity, ties to the lower index.
#[derive(Debug, Clone, Default)]
struct VarOrder {
    heap: Vec<u32>,
    pos: Vec<i32>,
}

impl VarOrder {
    fn before(act: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn grow(&mut self) {
        self.pos.push(-1);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] >= 0
    }

    fn insert(&mut self, act: &[f64], v: u32) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len() as i32;
        self.heap.push(v);
        self.sift_up(act, self.heap.len() - 1);
    }

    fn increased(&mut self, act: &[f64], v: u32) {
        if self.contains(v) {
            self.sift_up(act, self.pos[v as usize] as usize);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty heap");
        self.pos[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(act, 0);
        }
        Some(top)
    }

    fn sift_up(&mut self, act: &[f64], mut i: usize) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if !Self::before(act, v, pv) {
                break;
            }
            self.heap[i] = pv;
            self.pos[pv as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }

    fn sift_down(&mut self, act: &[f64], mut i: usize) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && Self::before(act, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            let cv = self.heap[child];
            if !Self::before(act, cv, v) {
                break;
            }
            self.heap[i] = cv;
            self.pos[cv as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }
}

fn luby(mut x: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

/// MiniSat-style CDCL solver: two watched literals with blockers, first-UIP
/// learning with clause minimization, VSIDS, phase saving, Luby restarts and
/// activity-based learnt clause reduction. Fully deterministic.
#[derive(Debug, Clone)]
pub struct CdclSolver {
    ok: bool,
    clauses: Vec<Clause>,
    arena: Vec<Lit>,
    /// Arena slots held by deleted clauses.
    garbage: usize,
    free_slots: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    /// Binary clauses: for each literal, the other literal and the clause.
    bin_watches: Vec<Vec<(Lit, u32)>>,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    order: VarOrder,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    var_inc: f64,
    cla_inc: f64,
    num_original: usize,
    num_learnt: usize,
    max_learnts: f64,
    model: Vec<bool>,
    true_lit: Option<Lit>,
    budget: Budget,
    stats: SolverStats,
    rng: u64,
    lit_memory: usize,
    #[cfg(debug_assertions)]
    original: Vec<Vec<Lit>>,
}

impl Default for CdclSolver {
    fn default() -> Self {
        CdclSolver::new()
    }
}

impl CdclSolver {
    const RESTART_UNIT: u64 = 100;
    const VAR_DECAY: f64 = 0.95;
    const CLAUSE_DECAY: f64 = 0.999;

    pub fn new() -> CdclSolver {
        CdclSolver::with_seed(0)
    }

    /// Seed `0` gives the plain heuristic; other seeds add a tiny
    /// deterministic perturbation to initial variable activities.
    pub fn with_seed(seed: u64) -> CdclSolver {
        CdclSolver {
            ok: true,
            clauses: Vec::new(),
            arena: Vec::new(),
            garbage: 0,
            free_slots: Vec::new(),
            watches: Vec::new(),
            bin_watches: Vec::new(),
            assign: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            seen: Vec::new(),
            order: VarOrder::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            cla_inc: 1.0,
            num_original: 0,
            num_learnt: 0,
            max_learnts: 0.0,
            model: Vec::new(),
            true_lit: None,
            budget: Budget::default(),
            stats: SolverStats::default(),
            rng: seed,
            lit_memory: 0,
            #[cfg(debug_assertions)]
            original: Vec::new(),
        }
    }

    /// `false` once the clause set is known to be unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn num_learnts(&self) -> usize {
        self.num_learnt
    }

    #[inline]
    fn value(&self, lit: Lit) -> i8 {
        lit_value(&self.assign, lit)
    }

    fn lits(&self, cref: u32) -> &[Lit] {
        &self.arena[self.clauses[cref as usize].range()]
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<u32>) {
        let v = (lit.var() - 1) as usize;
        debug_assert_eq!(self.assign[v], UNDEF);
        self.assign[v] = if lit.is_negated() { FALSE } else { TRUE };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = (lit.var() - 1) as usize;
            self.polarity[v] = !lit.is_negated();
            self.assign[v] = UNDEF;
            self.reason[v] = None;
            self.order.insert(&self.activity, v as u32);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    fn alloc_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        self.lit_memory += lits.len() * std::mem::size_of::<Lit>();
        let (a, b) = (lits[0], lits[1]);
        let clause = Clause {
            start: u32::try_from(self.arena.len()).expect("clause arena exceeds 4G literals"),
            len: lits.len() as u32,
            learnt,
            deleted: false,
            activity: 0.0,
        };
        let cref = if let Some(slot) = self.free_slots.pop() {
            self.clauses[slot as usize] = clause;
            slot
        } else {
            self.clauses.push(clause);
            (self.clauses.len() - 1) as u32
        };
        let binary = lits.len() == 2;
        self.arena.extend(lits);
        if binary {
            self.bin_watches[a.index()].push((b, cref));
            self.bin_watches[b.index()].push((a, cref));
        } else {
            self.watches[a.index()].push(Watcher { cref, blocker: b });
            self.watches[b.index()].push(Watcher { cref, blocker: a });
        }
        if learnt {
            self.num_learnt += 1;
        } else {
            self.num_original += 1;
        }
        cref
    }

    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let bins = std::mem::take(&mut self.bin_watches[false_lit.index()]);
            for &(other, cref) in &bins {
                match self.value(other) {
                    TRUE => {}
                    FALSE => {
                        conflict = Some(cref);
                        break;
                    }
                    _ => {
                        // reasons keep the implied literal first
                        let start = self.clauses[cref as usize].start as usize;
                        if self.arena[start] != other {
                            self.arena.swap(start, start + 1);
                        }
                        self.enqueue(other, Some(cref));
                    }
                }
            }
            self.bin_watches[false_lit.index()] = bins;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = self.clauses[w.cref as usize];
                if c.deleted {
                    continue;
                }
                let lits = &mut self.arena[c.range()];
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                if first != w.blocker && lit_value(&self.assign, first) == TRUE {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    if lit_value(&self.assign, l) != FALSE {
                        lits.swap(1, k);
                        self.watches[l.index()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.index()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(&self.activity, v as u32);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let current = self.decision_level() as u32;
        let mut learnt: Vec<Lit> = vec![Lit::positive(1)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        loop {
            self.bump_clause(confl as usize);
            let start = usize::from(p.is_some());
            let range = self.clauses[confl as usize].range();
            for k in range.start + start..range.end {
                let q = self.arena[k];
                let v = (q.var() - 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[(self.trail[index].var() - 1) as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = (lit.var() - 1) as usize;
            self.seen[v] = false;
            p = Some(lit);
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[v].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict analysis visits the trail");

        // Drop literals implied by the rest of the clause.
        let all = learnt.clone();
        let mut kept = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            let v = (l.var() - 1) as usize;
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.lits(r)[1..].iter().all(|q| {
                    let qv = (q.var() - 1) as usize;
                    self.seen[qv] || self.level[qv] == 0
                }),
            };
            if !redundant {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for l in &all {
            self.seen[(l.var() - 1) as usize] = false;
        }

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut best = 1;
            for i in 2..learnt.len() {
                if self.level[(learnt[i].var() - 1) as usize]
                    > self.level[(learnt[best].var() - 1) as usize]
                {
                    best = i;
                }
            }
            learnt.swap(1, best);
            self.level[(learnt[1].var() - 1) as usize] as usize
        };
        (learnt, bt)
    }

    fn locked(&self, cref: u32) -> bool {
        let first = self.lits(cref)[0];
        self.value(first) == TRUE && self.reason[(first.var() - 1) as usize] == Some(cref)
    }

    fn reduce_learnts(&mut self) {
        let mut candidates: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.len > 2 && !self.locked(c)
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            let (x, y) = (
                self.clauses[a as usize].activity,
                self.clauses[b as usize].activity,
            );
            x.partial_cmp(&y)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let remove = candidates.len() / 2;
        for &c in &candidates[..remove] {
            let cl = &mut self.clauses[c as usize];
            self.lit_memory -= cl.len as usize * std::mem::size_of::<Lit>();
            self.garbage += cl.len as usize;
            cl.deleted = true;
            cl.len = 0;
            self.num_learnt -= 1;
        }
        if remove > 0 {
            let clauses = &self.clauses;
            for ws in &mut self.watches {
                ws.retain(|w| !clauses[w.cref as usize].deleted);
            }
            self.free_slots.extend(candidates[..remove].iter().copied());
        }
        if self.garbage > self.arena.len() / 2 {
            self.compact_arena();
        }
    }

    fn compact_arena(&mut self) {
        let mut arena = Vec::with_capacity(self.arena.len() - self.garbage);
        for c in self.clauses.iter_mut().filter(|c| !c.deleted) {
            let start = arena.len() as u32;
            arena.extend_from_slice(&self.arena[c.range()]);
            c.start = start;
        }
        self.arena = arena;
        self.garbage = 0;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assign[v as usize] == UNDEF {
                return Some(Lit::new(v + 1, !self.polarity[v as usize]));
            }
        }
        None
    }

    fn search(&mut self, assumptions: &[Lit]) -> SolveResult {
        let mut conflicts_here = 0u64;
        let mut restart_idx = 0u64;
        let mut restart_limit = luby(restart_idx) * Self::RESTART_UNIT;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SolveResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.alloc_clause(learnt, true);
                    self.bump_clause(cref as usize);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= Self::VAR_DECAY;
                self.cla_inc /= Self::CLAUSE_DECAY;
                if self.stats.conflicts.is_multiple_of(256) && self.budget.exhausted() {
                    return SolveResult::Interrupted;
                }
                continue;
            }

            if conflicts_here >= restart_limit {
                // assumption levels would be re-created unchanged
                self.cancel_until(self.decision_level().min(assumptions.len()));
                self.stats.restarts += 1;
                restart_idx += 1;
                conflicts_here = 0;
                restart_limit = luby(restart_idx) * Self::RESTART_UNIT;
                if self.budget.exhausted() {
                    return SolveResult::Interrupted;
                }
                continue;
            }
            if self.num_learnt as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_learnts();
                self.max_learnts *= 1.1;
            }

            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.value(a) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => return SolveResult::Unsat,
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let lit = match next {
                Some(l) => l,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => {
                        self.model = self.assign.iter().map(|&a| a == TRUE).collect();
                        return SolveResult::Sat;
                    }
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(lit, None);
        }
    }

    #[cfg(debug_assertions)]
    fn check_model(&self, assumptions: &[Lit]) {
        for c in &self.original {
            debug_assert!(
                c.iter().any(|l| l.eval(&self.model)),
                "model violates clause {c:?}"
            );
        }
        for a in assumptions {
            debug_assert!(a.eval(&self.model), "model violates assumption {a}");
        }
    }

    #[cfg(not(debug_assertions))]
    fn check_model(&self, _assumptions: &[Lit]) {}
}

impl ClauseSink for CdclSolver {
    fn new_var(&mut self) -> u32 {
        let v = self.assign.len() as u32;
        self.assign.push(UNDEF);
        self.level.push(0);
        self.reason.push(None);
        self.polarity.push(false);
        let noise = if self.rng == 0 {
            0.0
        } else {
            self.rng ^= self.rng << 13;
            self.rng ^= self.rng >> 7;
            self.rng ^= self.rng << 17;
            (self.rng >> 11) as f64 / (1u64 << 53) as f64 * 1e-6
        };
        self.activity.push(noise);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.bin_watches.push(Vec::new());
        self.bin_watches.push(Vec::new());
        self.order.grow();
        self.order.insert(&self.activity, v);
        v + 1
    }

    fn num_vars(&self) -> u32 {
        self.assign.len() as u32
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        assert!(
            lits.iter().all(|l| l.var() <= self.num_vars()),
            "clause uses an unallocated variable"
        );
        #[cfg(debug_assertions)]
        self.original.push(lits.to_vec());
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut c = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        if c.iter().any(|&l| self.value(l) == TRUE) {
            return;
        }
        c.retain(|&l| self.value(l) == UNDEF);
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.alloc_clause(c, false);
            }
        }
    }

    fn true_lit(&mut self) -> Lit {
        if let Some(t) = self.true_lit {
            return t;
        }
        let t = Lit::positive(self.new_var());
        self.add_clause(&[t]);
        self.true_lit = Some(t);
        t
    }
}

impl SatSolver for CdclSolver {
    fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.stats.solve_calls += 1;
        if !self.ok {
            return SolveResult::Unsat;
        }
        assert!(assumptions.iter().all(|l| l.var() <= self.num_vars()));
        if self.budget.exhausted() {
            return SolveResult::Interrupted;
        }
        self.max_learnts = (self.num_original as f64 / 3.0).max(2000.0);
        let result = self.search(assumptions);
        if result == SolveResult::Sat {
            self.check_model(assumptions);
        }
        self.cancel_until(0);
        result
    }

    fn model(&self) -> &[bool] {
        &self.model
    }

    fn fixed_value(&self, lit: Lit) -> Option<bool> {
        let v = (lit.var() - 1) as usize;
        if v >= self.assign.len() || self.level[v] != 0 {
            return None;
        }
        match self.value(lit) {
            TRUE => Some(true),
            FALSE => Some(false),
            _ => None,
        }
    }

    fn set_budget(&mut self, budget: Budget) {
        self.budget = budget;
    }

    fn stats(&self) -> SolverStats {
        self.stats
    }

    fn num_clauses(&self) -> usize {
        self.num_original + self.num_learnt
    }

    fn memory_estimate(&self) -> usize {
        self.lit_memory
            + self.clauses.len() * std::mem::size_of::<Clause>()
            + self
                .watches
                .iter()
                .map(|w| w.capacity() * std::mem::size_of::<Watcher>())
                .sum::<usize>()
            + self
                .bin_watches
                .iter()
                .map(|w| w.capacity() * std::mem::size_of::<(Lit, u32)>())
                .sum::<usize>()
            + self.assign.len() * 32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lit(d: i64) -> Lit {
        Lit::from_dimacs(d)
    }

    fn solver(vars: u32, clauses: &[&[i64]]) -> CdclSolver {
        let mut s = CdclSolver::new();
        s.ensure_vars(vars);
        for c in clauses {
            let c: Vec<Lit> = c.iter().map(|&d| lit(d)).collect();
            s.add_clause(&c);
        }
        s
    }

    fn brute_force(vars: u32, clauses: &[Vec<i64>], assumptions: &[i64]) -> bool {
        (0u32..1 << vars).any(|mask| {
            let asg: Vec<bool> = (0..vars).map(|i| mask >> i & 1 == 1).collect();
            clauses.iter().all(|c| c.iter().any(|&d| lit(d).eval(&asg)))
                && assumptions.iter().all(|&d| lit(d).eval(&asg))
        })
    }

    #[test]
    fn variables_are_sequential() {
        let mut s = CdclSolver::new();
        assert_eq!(s.new_var(), 1);
        assert_eq!(s.new_var(), 2);
        s.add_clause(&[lit(1), lit(-2)]);
        assert_eq!(s.new_var(), 3);
    }

    #[test]
    fn small_incremental_formula() {
        let mut s = solver(2, &[&[1, -2], &[-1, -2]]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert!(!s.model_value(lit(2)));
        assert_eq!(s.solve(&[lit(2)]), SolveResult::Unsat);
        s.add_clause(&[lit(2)]);
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
        assert_eq!(s.solve(&[lit(1)]), SolveResult::Unsat);
    }

    #[test]
    fn empty_formula_and_assumption() {
        let mut s = solver(1, &[]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert_eq!(s.solve(&[lit(1)]), SolveResult::Sat);
        assert!(s.model_value(lit(1)));
    }

    #[test]
    fn empty_clause_is_unsat() {
        let mut s = solver(1, &[&[]]);
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
    }

    #[test]
    fn hard_clauses_with_two_models() {
        let mut s = solver(3, &[&[-1, -2, -3], &[1, 2], &[-1, 2, 3]]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
    }

    #[test]
    fn fixed_values_after_units() {
        let mut s = solver(3, &[&[1], &[-1, 2]]);
        assert_eq!(s.fixed_value(lit(2)), Some(true));
        assert_eq!(s.fixed_value(lit(-1)), Some(false));
        assert_eq!(s.fixed_value(lit(3)), None);
        let t = s.true_lit();
        assert_eq!(s.fixed_value(t), Some(true));
        assert_eq!(s.solve(&[]), SolveResult::Sat);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes
        let (p, h) = (5u32, 4u32);
        let var = |i: u32, j: u32| i64::from(i * h + j + 1);
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        for i in 0..p {
            clauses.push((0..h).map(|j| var(i, j)).collect());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    clauses.push(vec![-var(a, j), -var(b, j)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        let mut s = solver(p * h, &refs);
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
        assert!(s.stats().conflicts > 0);
    }

    #[test]
    fn agrees_with_truth_tables_on_random_3cnf() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..300 {
            let vars = rng.random_range(3..=16u32);
            let m = rng.random_range(1..=(vars as usize * 5));
            let clauses: Vec<Vec<i64>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = i64::from(rng.random_range(1..=vars));
                            if rng.random_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
            let mut s = solver(vars, &refs);
            let assumptions: Vec<i64> = (1..=2)
                .map(|v| if round % 2 == 0 { v } else { -v })
                .collect();
            for assume in [&[][..], &assumptions[..]] {
                let lits: Vec<Lit> = assume.iter().map(|&d| lit(d)).collect();
                let expected = brute_force(vars, &clauses, assume);
                let got = s.solve(&lits);
                assert_eq!(got == SolveResult::Sat, expected, "round {round}");
                if got == SolveResult::Sat {
                    let model = s.model().to_vec();
                    assert!(clauses
                        .iter()
                        .all(|c| c.iter().any(|&d| lit(d).eval(&model))));
                    assert!(lits.iter().all(|l| l.eval(&model)));
                }
            }
        }
    }

    #[test]
    fn unsat_is_monotone() {
        let mut s = solver(2, &[&[1], &[-1]]);
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
        s.ensure_vars(3);
        s.add_clause(&[lit(3)]);
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
    }

    #[test]
    fn deterministic_models() {
        let run = |seed| {
            let mut s = CdclSolver::with_seed(seed);
            s.ensure_vars(20);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..60 {
                let c: Vec<Lit> = (0..3)
                    .map(|_| Lit::new(rng.random_range(1..=20), rng.random_bool(0.5)))
                    .collect();
                s.add_clause(&c);
            }
            assert_eq!(s.solve(&[]), SolveResult::Sat);
            s.model().to_vec()
        };
        assert_eq!(run(0), run(0));
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn cancelled_budget_interrupts() {
        let mut s = solver(2, &[&[1, 2]]);
        let flag = Arc::new(AtomicBool::new(true));
        s.set_budget(Budget {
            deadline: None,
            cancel: Some(flag.clone()),
        });
        assert_eq!(s.solve(&[]), SolveResult::Interrupted);
        flag.store(false, Ordering::Relaxed);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
    }

    #[test]
    fn cnf_dimacs_and_replay() {
        let mut cnf = Cnf::with_vars(2);
        let a = cnf.new_var();
        cnf.add_clause(&[lit(1), Lit::negative(a)]);
        cnf.add_clause(&[lit(-2)]);
        assert_eq!(cnf.to_dimacs(), "p cnf 3 2\n1 -3 0\n-2 0\n");

        let mut s = CdclSolver::new();
        s.ensure_vars(4);
        let map = cnf.replay_into(&mut s, 2);
        assert_eq!(map, vec![0, 1, 2, 5]);
        assert_eq!(s.fixed_value(lit(2)), Some(false));
        assert_eq!(s.solve(&[lit(5)]), SolveResult::Sat);
        assert!(s.model_value(lit(1)));
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}

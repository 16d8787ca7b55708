//! Brute-force ground truth for small instances.
//!
//! Everything here works by enumerating assignments and uses nothing but the
//! [`model`](crate::model) types, so it can serve as an independent check of
//! the solver pipeline.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{nondominated_points, Instance, Lit, Point, SolutionRecord};
use crate::ratio::Ratio;

/// Default limit on the number of enumerated variables.
pub const DEFAULT_VAR_CAP: u32 = 24;
/// Limit on the number of soft clauses for [`all_mcs_bruteforce`].
pub const SOFT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} ({value}) exceeds the brute-force cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
}

fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<(), OracleError> {
    if value > cap {
        return Err(OracleError::CapExceeded { what, value, cap });
    }
    Ok(())
}

/// All assignments over `n` variables; `x1` is the lowest bit.
fn assignments(n: u32) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1u64 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Nondominated points, sorted.
    pub pareto: Vec<Point>,
    /// Every feasible assignment whose image is nondominated.
    pub efficient: Vec<SolutionRecord>,
    pub feasible_count: u64,
}

pub fn brute_force_pareto(instance: &Instance) -> Result<OracleReport, OracleError> {
    brute_force_pareto_capped(instance, DEFAULT_VAR_CAP)
}

pub fn brute_force_pareto_capped(
    instance: &Instance,
    cap: u32,
) -> Result<OracleReport, OracleError> {
    check_cap("variable count", instance.num_vars() as usize, cap as usize)?;
    let mut feasible = Vec::new();
    for asg in assignments(instance.num_vars()) {
        if instance.is_feasible(&asg) {
            let image = instance.evaluate(&asg);
            feasible.push(SolutionRecord {
                assignment: asg,
                image,
            });
        }
    }
    let images: BTreeSet<Point> = feasible.iter().map(|r| r.image.clone()).collect();
    let mut pareto = nondominated_points(images);
    pareto.sort();
    let front: BTreeSet<&Point> = pareto.iter().collect();
    let feasible_count = feasible.len() as u64;
    let efficient = feasible
        .into_iter()
        .filter(|r| front.contains(&r.image))
        .collect();
    Ok(OracleReport {
        pareto,
        efficient,
        feasible_count,
    })
}

/// Outcome of [`verify_approximation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxCheck {
    pub ok: bool,
    /// A feasible assignment no record covers within the ratio.
    pub counterexample: Option<SolutionRecord>,
}

/// `a[j] <= ratio * b[j]` for every coordinate.
pub fn covers(a: &Point, b: &Point, ratio: &Ratio) -> bool {
    let (num, den) = (u128::from(*ratio.numer()), u128::from(*ratio.denom()));
    a.coords()
        .iter()
        .zip(b.coords())
        .all(|(&x, &y)| u128::from(x) * den <= num * u128::from(y))
}

/// Checks that every feasible assignment is covered within `ratio` by the
/// image of some record.
pub fn verify_approximation(
    records: &[SolutionRecord],
    instance: &Instance,
    ratio: &Ratio,
) -> Result<ApproxCheck, OracleError> {
    check_cap(
        "variable count",
        instance.num_vars() as usize,
        DEFAULT_VAR_CAP as usize,
    )?;
    let mut checked = BTreeSet::new();
    for asg in assignments(instance.num_vars()) {
        if !instance.is_feasible(&asg) {
            continue;
        }
        let image = instance.evaluate(&asg);
        if !checked.insert(image.clone()) {
            continue;
        }
        if !records.iter().any(|r| covers(&r.image, &image, ratio)) {
            return Ok(ApproxCheck {
                ok: false,
                counterexample: Some(SolutionRecord {
                    assignment: asg,
                    image,
                }),
            });
        }
    }
    Ok(ApproxCheck {
        ok: true,
        counterexample: None,
    })
}

/// Whether every point of `front` is weakly dominated by some point of `lower`.
pub fn is_lower_bound_set(lower: &[Point], front: &[Point]) -> bool {
    front
        .iter()
        .all(|y| lower.iter().any(|l| l.weakly_dominates(y)))
}

/// Every minimal correction subset of `hard` and the unit soft clauses
/// `softs`, as sorted index lists into `softs`.
pub fn all_mcs_bruteforce(
    hard: &[Vec<Lit>],
    softs: &[Lit],
    num_vars: u32,
) -> Result<Vec<Vec<usize>>, OracleError> {
    check_cap(
        "variable count",
        num_vars as usize,
        DEFAULT_VAR_CAP as usize,
    )?;
    check_cap("soft clause count", softs.len(), SOFT_CAP)?;
    // Falsified-soft masks of all models of the hard clauses.
    let mut masks = BTreeSet::new();
    for asg in assignments(num_vars) {
        if hard.iter().all(|c| c.iter().any(|l| l.eval(&asg))) {
            let mask = softs
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.eval(&asg))
                .fold(0u32, |m, (i, _)| m | 1 << i);
            masks.insert(mask);
        }
    }
    // Hard plus the softs outside `c` is satisfiable iff some model's
    // falsified set lies inside `c`.
    let correctable = |c: u32| masks.iter().any(|&m| m & !c == 0);
    let mut result = Vec::new();
    for &c in &masks {
        let minimal = (0..softs.len())
            .filter(|i| c >> i & 1 == 1)
            .all(|i| !correctable(c & !(1 << i)));
        if minimal {
            result.push((0..softs.len()).filter(|i| c >> i & 1 == 1).collect());
        }
    }
    result.sort();
    Ok(result)
}

/// Minimal correction subsets of the unary formulation with the given
/// threshold domains, computed semantically: each threshold literal is
/// determined by the objective value. Each MCS is returned as the list of
/// falsified thresholds per objective.
pub fn unary_formulation_mcs(
    instance: &Instance,
    domains: &[Vec<u64>],
) -> Result<Vec<Vec<Vec<u64>>>, OracleError> {
    check_cap(
        "variable count",
        instance.num_vars() as usize,
        DEFAULT_VAR_CAP as usize,
    )?;
    assert_eq!(domains.len(), instance.num_objectives());
    // Falsified thresholds of one objective are those `<= f_k(x)`, a prefix,
    // so a falsified set is described by its per-objective prefix lengths.
    let mut counts = BTreeSet::new();
    for asg in assignments(instance.num_vars()) {
        if instance.is_feasible(&asg) {
            let image = instance.evaluate(&asg);
            let c: Vec<u64> = domains
                .iter()
                .zip(image.coords())
                .map(|(d, &v)| d.iter().filter(|&&t| t <= v).count() as u64)
                .collect();
            counts.insert(Point(c));
        }
    }
    let minimal = nondominated_points(counts);
    let mut result: Vec<Vec<Vec<u64>>> = minimal
        .into_iter()
        .map(|c| {
            c.coords()
                .iter()
                .zip(domains)
                .map(|(&n, d)| d[..n as usize].to_vec())
                .collect()
        })
        .collect();
    result.sort();
    Ok(result)
}

#![allow(dead_code)]

use mobo_core::model::{Instance, LinearExpr, Lit, PbConstraint, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn x(v: u32) -> Lit {
    Lit::positive(v)
}

pub fn nx(v: u32) -> Lit {
    Lit::negative(v)
}

pub fn p(c: &[u64]) -> Point {
    Point::new(c.to_vec())
}

pub fn sorted(mut v: Vec<Point>) -> Vec<Point> {
    v.sort();
    v
}

/// Problem with six Pareto points used throughout the approximation tests.
pub fn four_variable_problem() -> Instance {
    Instance::new(
        4,
        vec![],
        vec![
            LinearExpr::new([(3, x(1)), (3, x(2)), (1, x(3)), (2, x(4))], 1),
            LinearExpr::new([(4, nx(1)), (5, nx(2)), (5, nx(3)), (7, nx(4))], 1),
        ],
    )
    .unwrap()
}

pub fn four_variable_front() -> Vec<Point> {
    vec![
        p(&[1, 22]),
        p(&[2, 17]),
        p(&[3, 15]),
        p(&[4, 10]),
        p(&[7, 5]),
        p(&[10, 1]),
    ]
}

/// Two objectives over three variables with a cardinality constraint.
pub fn three_variable_problem() -> Instance {
    Instance::new(
        3,
        vec![PbConstraint::new([(1, x(1)), (1, x(2)), (1, x(3))], 2)],
        vec![
            LinearExpr::new([(2, x(1)), (1, x(2)), (1, nx(3))], 0),
            LinearExpr::new([(1, nx(1)), (1, x(2)), (2, x(3))], 0),
        ],
    )
    .unwrap()
}

fn random_terms(rng: &mut ChaCha8Rng, n: u32, len: usize, cmax: u64) -> Vec<(u64, Lit)> {
    let vars = rand::seq::index::sample(rng, n as usize, len.min(n as usize));
    vars.into_iter()
        .map(|v| {
            (
                rng.random_range(1..=cmax),
                Lit::new(v as u32 + 1, rng.random_bool(0.5)),
            )
        })
        .collect()
}

/// Random instance with `n` variables, up to `m` constraints and `p`
/// objectives, coefficients in `1..=cmax`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: u32, m: u32, p: usize, cmax: u64) -> Instance {
    let mut constraints = Vec::new();
    for _ in 0..rng.random_range(0..=m) {
        let len = rng.random_range(1..=5usize);
        let terms = random_terms(rng, n, len, cmax);
        let sum: u64 = terms.iter().map(|t| t.0).sum();
        let bound = rng.random_range(1..=sum.div_ceil(2).max(1));
        constraints.push(PbConstraint::new(terms, bound));
    }
    let objectives = (0..p)
        .map(|_| {
            let len = rng.random_range(1..=n as usize);
            LinearExpr::new(random_terms(rng, n, len, cmax), rng.random_range(0..3))
        })
        .collect();
    Instance::new(n, constraints, objectives).unwrap()
}

/// All feasible images, deduplicated.
pub fn feasible_images(instance: &Instance) -> Vec<Point> {
    let n = instance.num_vars();
    let mut out: Vec<Point> = (0u64..1 << n)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| instance.is_feasible(a))
        .map(|a| instance.evaluate(&a))
        .collect();
    out.sort();
    out.dedup();
    out
}

//! Quality indicators: multiplicative epsilon indicator and hypervolume.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{Instance, Point};
use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QualityError {
    #[error("indicator needs a non-empty {0} set")]
    EmptySet(&'static str),
    #[error("points have different dimensions")]
    DimensionMismatch,
}

/// Epsilon-indicator value. `shifted` records that every coordinate was
/// increased by one because the reference set had a zero coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonValue {
    pub value: Ratio,
    pub shifted: bool,
}

/// `max over r in R of min over a in A of max_k a_k / r_k`, exactly.
pub fn epsilon_indicator(a: &[Point], r: &[Point]) -> Result<EpsilonValue, QualityError> {
    if a.is_empty() {
        return Err(QualityError::EmptySet("approximation"));
    }
    if r.is_empty() {
        return Err(QualityError::EmptySet("reference"));
    }
    let dim = r[0].dim();
    if a.iter().chain(r).any(|p| p.dim() != dim) {
        return Err(QualityError::DimensionMismatch);
    }
    let shifted = r.iter().any(|p| p.coords().contains(&0));
    let shift = u64::from(shifted);
    let ratio = |x: u64, y: u64| Ratio::new(x + shift, y + shift);

    let mut worst = Ratio::from_integer(0);
    for rp in r {
        let best = a
            .iter()
            .map(|ap| {
                ap.coords()
                    .iter()
                    .zip(rp.coords())
                    .map(|(&x, &y)| ratio(x, y))
                    .max()
                    .unwrap_or_else(|| Ratio::from_integer(1))
            })
            .min()
            .expect("non-empty approximation set");
        worst = worst.max(best);
    }
    Ok(EpsilonValue {
        value: worst,
        shifted,
    })
}

/// Divides each coordinate by the objective's denominator.
pub fn normalize(points: &[Point], denominators: &[BigRational]) -> Vec<Vec<BigRational>> {
    points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .zip(denominators)
                .map(|(&c, d)| BigRational::from_integer(BigInt::from(c)) / d)
                .collect()
        })
        .collect()
}

/// Denominators `u_k + 1` from the instance bounds.
pub fn denominators_from_bounds(instance: &Instance) -> Vec<BigRational> {
    (0..instance.num_objectives())
        .map(|k| BigRational::from_integer(BigInt::from(instance.upper_bound(k)) + 1))
        .collect()
}

/// Denominators `1.1 * max` of each coordinate over all given sets, used to
/// compare several outputs on a common scale. A zero maximum maps to one.
pub fn denominators_from_sets<'a>(
    dim: usize,
    sets: impl IntoIterator<Item = &'a [Point]>,
) -> Vec<BigRational> {
    let mut max = vec![0u64; dim];
    for set in sets {
        for p in set {
            for (m, &c) in max.iter_mut().zip(p.coords()) {
                *m = (*m).max(c);
            }
        }
    }
    max.into_iter()
        .map(|m| {
            if m == 0 {
                BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::new(BigInt::from(m) * 11, BigInt::from(10))
            }
        })
        .collect()
}

/// Exact volume of the union of boxes `[p, reference]` by slicing along the
/// last coordinate. Points that do not weakly dominate the reference are
/// skipped with a warning.
pub fn hypervolume(points: &[Vec<BigRational>], reference: &[BigRational]) -> BigRational {
    let usable: Vec<&[BigRational]> = points
        .iter()
        .filter(|p| {
            let ok = p.len() == reference.len() && p.iter().zip(reference).all(|(x, r)| x <= r);
            if !ok {
                log::warn!("hypervolume: point outside the reference box ignored");
            }
            ok
        })
        .map(Vec::as_slice)
        .collect();
    hv_exact(&usable, reference)
}

fn hv_exact(points: &[&[BigRational]], reference: &[BigRational]) -> BigRational {
    let dim = reference.len();
    if points.is_empty() || dim == 0 {
        return BigRational::zero();
    }
    if dim == 1 {
        let min = points.iter().map(|p| &p[0]).min().expect("non-empty");
        return &reference[0] - min;
    }
    let last = dim - 1;
    let mut sorted: Vec<&[BigRational]> = points.to_vec();
    sorted.sort_by(|a, b| a[last].cmp(&b[last]));
    let mut total = BigRational::zero();
    for i in 0..sorted.len() {
        let top = if i + 1 < sorted.len() {
            &sorted[i + 1][last]
        } else {
            &reference[last]
        };
        let height = top - &sorted[i][last];
        if height.is_zero() {
            continue;
        }
        let slice: Vec<&[BigRational]> = sorted[..=i].iter().map(|p| &p[..last]).collect();
        total += hv_exact(&slice, &reference[..last]) * height;
    }
    total
}

/// Floating-point variant of [`hypervolume`] for fronts too large for exact
/// arithmetic.
pub fn hypervolume_f64(points: &[Vec<f64>], reference: &[f64]) -> f64 {
    let usable: Vec<&[f64]> = points
        .iter()
        .filter(|p| p.len() == reference.len() && p.iter().zip(reference).all(|(x, r)| x <= r))
        .map(Vec::as_slice)
        .collect();
    hv_f64(&usable, reference)
}

fn hv_f64(points: &[&[f64]], reference: &[f64]) -> f64 {
    let dim = reference.len();
    if points.is_empty() || dim == 0 {
        return 0.0;
    }
    if dim == 1 {
        let min = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        return reference[0] - min;
    }
    let last = dim - 1;
    let mut sorted: Vec<&[f64]> = points.to_vec();
    sorted.sort_by(|a, b| a[last].total_cmp(&b[last]));
    let mut total = 0.0;
    for i in 0..sorted.len() {
        let top = if i + 1 < sorted.len() {
            sorted[i + 1][last]
        } else {
            reference[last]
        };
        let height = top - sorted[i][last];
        if height > 0.0 {
            let slice: Vec<&[f64]> = sorted[..=i].iter().map(|p| &p[..last]).collect();
            total += hv_f64(&slice, &reference[..last]) * height;
        }
    }
    total
}

/// Hypervolume of `points` after normalization, with reference `(1,...,1)`.
pub fn normalized_hypervolume(points: &[Point], denominators: &[BigRational]) -> BigRational {
    let one = BigRational::from_integer(BigInt::from(1));
    let reference = vec![one; denominators.len()];
    hypervolume(&normalize(points, denominators), &reference)
}

pub fn big_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Indicators of one output set.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub epsilon_vs_lower_bound: Option<EpsilonValue>,
    pub epsilon_vs_reference: Option<EpsilonValue>,
    pub hypervolume: BigRational,
    pub denominators: Vec<BigRational>,
}

/// Evaluates `images` against an optional lower bound set and an optional
/// reference front.
pub fn indicator_report(
    images: &[Point],
    lower_bound: &[Point],
    reference: Option<&[Point]>,
    denominators: Vec<BigRational>,
) -> IndicatorReport {
    IndicatorReport {
        epsilon_vs_lower_bound: epsilon_indicator(images, lower_bound).ok(),
        epsilon_vs_reference: reference.and_then(|r| epsilon_indicator(images, r).ok()),
        hypervolume: normalized_hypervolume(images, &denominators),
        denominators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[u64]) -> Point {
        Point::new(c.to_vec())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn front() -> Vec<Point> {
        vec![p(&[1, 4]), p(&[2, 2]), p(&[4, 1])]
    }

    #[test]
    fn indicator_examples() {
        let e = epsilon_indicator(&[p(&[2, 2])], &front()).unwrap();
        assert_eq!(e.value, Ratio::from_integer(2));
        assert!(!e.shifted);
        assert_eq!(
            epsilon_indicator(&front(), &front()).unwrap().value,
            Ratio::from_integer(1)
        );
        assert!(epsilon_indicator(&[], &front()).is_err());
        assert!(epsilon_indicator(&front(), &[]).is_err());
    }

    #[test]
    fn zero_coordinates_shift() {
        let e = epsilon_indicator(&[p(&[1, 1])], &[p(&[0, 1])]).unwrap();
        assert!(e.shifted);
        assert_eq!(e.value, Ratio::from_integer(2));
    }

    #[test]
    fn normalization_divides() {
        let n = normalize(&[p(&[4, 10])], &[q(21076, 1), q(21367, 1)]);
        assert_eq!(n, vec![vec![q(4, 21076), q(10, 21367)]]);
        let d = denominators_from_sets(2, [&[p(&[10, 0])][..], &[p(&[5, 0])][..]]);
        assert_eq!(d, vec![q(11, 1), q(1, 1)]);
    }

    #[test]
    fn hypervolume_examples() {
        let one = vec![q(1, 1), q(1, 1)];
        assert_eq!(hypervolume(&[vec![q(1, 2), q(1, 2)]], &one), q(1, 4));
        assert_eq!(hypervolume(&[], &one), q(0, 1));
        let pts = normalize(&front(), &[q(5, 1), q(5, 1)]);
        // (1,4): 4*1, (2,2): 3*3, (4,1): 1*4; pairwise overlaps 3*1, 1*1, 1*3; triple 1*1
        let expected = q(4 + 9 + 4 - 3 - 1 - 3 + 1, 25);
        assert_eq!(hypervolume(&pts, &one), expected);
        // a point outside the box contributes nothing
        assert_eq!(hypervolume(&[vec![q(2, 1), q(1, 2)]], &one), q(0, 1));
    }

    fn inclusion_exclusion(points: &[Vec<BigRational>], reference: &[BigRational]) -> BigRational {
        let n = points.len();
        let mut total = BigRational::zero();
        for mask in 1u32..(1 << n) {
            let members: Vec<&Vec<BigRational>> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &points[i])
                .collect();
            let mut vol = BigRational::from_integer(BigInt::from(1));
            for k in 0..reference.len() {
                let lo = members.iter().map(|m| &m[k]).max().unwrap();
                let side = &reference[k] - lo;
                vol = if side > BigRational::zero() {
                    vol * side
                } else {
                    BigRational::zero()
                };
            }
            if members.len() % 2 == 1 {
                total += vol;
            } else {
                total -= vol;
            }
        }
        total
    }

    proptest! {
        #[test]
        fn hypervolume_matches_inclusion_exclusion(
            dim in 1usize..=4,
            raw in prop::collection::vec(prop::collection::vec(0i64..10, 4), 0..7),
        ) {
            let pts: Vec<Vec<BigRational>> = raw.iter().map(|c| c[..dim].iter().map(|&v| q(v, 10)).collect()).collect();
            let reference = vec![q(1, 1); dim];
            let exact = hypervolume(&pts, &reference);
            prop_assert_eq!(&exact, &inclusion_exclusion(&pts, &reference));
            let floats: Vec<Vec<f64>> = raw.iter().map(|c| c[..dim].iter().map(|&v| v as f64 / 10.0).collect()).collect();
            let approx = hypervolume_f64(&floats, &vec![1.0; dim]);
            prop_assert!((approx - big_to_f64(&exact)).abs() < 1e-9);
        }

        #[test]
        fn indicator_is_monotone(
            a in prop::collection::vec(prop::collection::vec(1u64..20, 2), 1..6),
            r in prop::collection::vec(prop::collection::vec(1u64..20, 2), 1..6),
            extra in prop::collection::vec(1u64..20, 2),
        ) {
            let a: Vec<Point> = a.into_iter().map(Point).collect();
            let r: Vec<Point> = r.into_iter().map(Point).collect();
            let base = epsilon_indicator(&a, &r).unwrap().value;
            let mut a2 = a.clone();
            a2.push(Point(extra.clone()));
            prop_assert!(epsilon_indicator(&a2, &r).unwrap().value <= base);
            let mut r2 = r.clone();
            r2.push(Point(extra));
            prop_assert!(epsilon_indicator(&a, &r2).unwrap().value >= base);
            prop_assert!(epsilon_indicator(&r, &r).unwrap().value <= Ratio::from_integer(1));
        }
    }
}

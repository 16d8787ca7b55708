//! `.pbmo` instance files, benchmark generation and result serialization.
//!
//! Grammar (OPB-flavored, whitespace separated, `;` ends a statement):
//!
//! ```text
//! * comment line
//! min: 3 x1 -2 x2 1 ~x3 5 ;      objective, optional trailing constant
//! 1 x1 1 x2 >= 1 ;               constraint, relation >=, <= or =
//! ```
//!
//! Variables are `x<n>` with `n >= 1`; `~x<n>` is the negated literal.
//! Coefficients are signed 64-bit integers. An OPB-style header comment
//! `* #variable= N` fixes the variable count (otherwise the largest index
//! used). Terms are normalized to non-negative coefficients on parsing.
//!
//! CSV results have the columns
//! `section,iteration,ratio,elapsed_ms,f1,...,fp`, where `section` is
//! `front` or `lower` for per-iteration snapshots and `A` or `L` for the
//! final sets (with an empty iteration).

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{ApproxResult, IterationTrace};
use crate::model::{
    objective_from_raw, Instance, LinearExpr, Lit, ModelError, PbConstraint, Point,
};
use crate::ratio::{format_ratio, Ratio};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Model {
        line: usize,
        #[source]
        source: ModelError,
    },
    #[error("no objective found")]
    NoObjectives,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('*') {
            continue;
        }
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let word_len = rest[start..]
                .find(char::is_whitespace)
                .unwrap_or(rest.len() - start);
            let word = &rest[start..start + word_len];
            // `;` may be glued to the preceding token
            let mut pos = 0;
            for part in word.split_inclusive(';') {
                let (body, semi) = match part.strip_suffix(';') {
                    Some(b) => (b, true),
                    None => (part, false),
                };
                if !body.is_empty() {
                    tokens.push(Token {
                        text: body,
                        line: i + 1,
                        column: offset + start + pos + 1,
                    });
                }
                if semi {
                    tokens.push(Token {
                        text: ";",
                        line: i + 1,
                        column: offset + start + pos + body.len() + 1,
                    });
                }
                pos += part.len();
            }
            offset += start + word_len;
            rest = &rest[start + word_len..];
        }
    }
    tokens
}

fn syntax(t: &Token<'_>, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: t.line,
        column: t.column,
        message: message.into(),
    }
}

fn parse_int(t: &Token<'_>) -> Result<i64, ParseError> {
    let body = t.text.strip_prefix('+').unwrap_or(t.text);
    body.parse::<i64>().map_err(|e| match e.kind() {
        std::num::IntErrorKind::PosOverflow | std::num::IntErrorKind::NegOverflow => {
            syntax(t, format!("integer `{}` does not fit in 64 bits", t.text))
        }
        _ => syntax(t, format!("expected an integer, found `{}`", t.text)),
    })
}

fn parse_lit(t: &Token<'_>) -> Option<Result<Lit, ParseError>> {
    let (negated, body) = match t.text.strip_prefix('~') {
        Some(b) => (true, b),
        None => (false, t.text),
    };
    let digits = body.strip_prefix('x')?;
    Some(match digits.parse::<u32>() {
        Ok(v) if (1..u32::MAX >> 1).contains(&v) => Ok(Lit::new(v, negated)),
        _ => Err(syntax(t, format!("invalid variable `{}`", t.text))),
    })
}

fn is_lit(t: &Token<'_>) -> bool {
    t.text.trim_start_matches('~').starts_with('x')
}

fn check_duplicates(terms: &[(i64, Lit)], t: &Token<'_>) -> Result<(), ParseError> {
    let mut vars: Vec<u32> = terms.iter().map(|(_, l)| l.var()).collect();
    vars.sort_unstable();
    if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
        return Err(syntax(t, format!("variable x{} appears twice", w[0])));
    }
    Ok(())
}

/// Declared variable count from an OPB-style `* #variable= N` comment.
fn declared_vars(text: &str) -> Option<u32> {
    text.lines()
        .filter(|l| l.trim_start().starts_with('*'))
        .find_map(|l| {
            let rest = &l[l.find("#variable=")? + "#variable=".len()..];
            rest.split_whitespace().next()?.parse().ok()
        })
}

/// Parses a `.pbmo` document into a normalized instance.
pub fn parse_pbmo(text: &str) -> Result<Instance, ParseError> {
    let tokens = tokenize(text);
    let mut objectives = Vec::new();
    let mut constraints = Vec::new();
    let mut max_var = 0;
    let mut i = 0;
    while i < tokens.len() {
        let first = tokens[i];
        let end = tokens[i..]
            .iter()
            .position(|t| t.text == ";")
            .map(|p| i + p)
            .ok_or_else(|| syntax(&first, "statement is not terminated by `;`"))?;
        let stmt = &tokens[i..end];
        i = end + 1;
        if stmt.is_empty() {
            continue;
        }
        match stmt[0].text {
            "min:" => {
                let (terms, constant) = parse_objective(&stmt[1..], &tokens[end])?;
                max_var = max_var.max(terms.iter().map(|(_, l)| l.var()).max().unwrap_or(0));
                let obj =
                    objective_from_raw(&terms, constant).map_err(|source| ParseError::Model {
                        line: stmt[0].line,
                        source,
                    })?;
                objectives.push(obj);
            }
            "max:" => {
                return Err(syntax(
                    &stmt[0],
                    "maximization objectives are not supported",
                ))
            }
            _ => {
                let (terms, relation, bound) = parse_constraint(stmt, &tokens[end])?;
                max_var = max_var.max(terms.iter().map(|(_, l)| l.var()).max().unwrap_or(0));
                let model = |source| ParseError::Model {
                    line: stmt[0].line,
                    source,
                };
                let neg = |ts: &[(i64, Lit)]| -> Result<Vec<(i64, Lit)>, ParseError> {
                    ts.iter()
                        .map(|&(c, l)| c.checked_neg().map(|c| (c, l)))
                        .collect::<Option<_>>()
                        .ok_or_else(|| syntax(&stmt[0], "coefficient overflow"))
                };
                let neg_bound = bound
                    .checked_neg()
                    .ok_or_else(|| syntax(&stmt[0], "bound overflow"))?;
                if relation != "<=" {
                    constraints.extend(PbConstraint::from_raw(&terms, bound).map_err(model)?);
                }
                if relation != ">=" {
                    constraints
                        .extend(PbConstraint::from_raw(&neg(&terms)?, neg_bound).map_err(model)?);
                }
            }
        }
    }
    if objectives.is_empty() {
        return Err(ParseError::NoObjectives);
    }
    let num_vars = declared_vars(text).unwrap_or(0).max(max_var);
    Instance::new(num_vars, constraints, objectives)
        .map_err(|source| ParseError::Model { line: 0, source })
}

type Terms = Vec<(i64, Lit)>;

fn parse_objective(stmt: &[Token<'_>], end: &Token<'_>) -> Result<(Terms, i64), ParseError> {
    let mut terms = Vec::new();
    let mut constant = 0;
    let mut j = 0;
    while j < stmt.len() {
        let c = parse_int(&stmt[j])?;
        match stmt.get(j + 1) {
            Some(t) if is_lit(t) => {
                let lit = parse_lit(t).expect("literal token")?;
                terms.push((c, lit));
                j += 2;
            }
            None => {
                constant = c;
                j += 1;
            }
            Some(t) => {
                return Err(syntax(
                    t,
                    format!("expected a variable, found `{}`", t.text),
                ))
            }
        }
    }
    check_duplicates(&terms, end)?;
    Ok((terms, constant))
}

fn parse_constraint<'a>(
    stmt: &[Token<'a>],
    end: &Token<'_>,
) -> Result<(Terms, &'a str, i64), ParseError> {
    let rel = stmt
        .iter()
        .position(|t| matches!(t.text, ">=" | "<=" | "="))
        .ok_or_else(|| syntax(&stmt[0], "constraint without a relation"))?;
    let lhs = &stmt[..rel];
    if !lhs.len().is_multiple_of(2) {
        return Err(syntax(
            &stmt[rel],
            "terms must be coefficient/variable pairs",
        ));
    }
    let mut terms = Vec::with_capacity(lhs.len() / 2);
    for pair in lhs.chunks(2) {
        let c = parse_int(&pair[0])?;
        let lit = parse_lit(&pair[1]).unwrap_or_else(|| {
            Err(syntax(
                &pair[1],
                format!("expected a variable, found `{}`", pair[1].text),
            ))
        })?;
        terms.push((c, lit));
    }
    let rhs = &stmt[rel + 1..];
    if rhs.len() != 1 {
        return Err(syntax(
            rhs.get(1).unwrap_or(end),
            "expected a single integer after the relation",
        ));
    }
    check_duplicates(&terms, end)?;
    Ok((terms, stmt[rel].text, parse_int(&rhs[0])?))
}

fn write_terms(out: &mut String, expr: &LinearExpr) {
    for t in expr.terms() {
        let _ = write!(out, " {} {}", t.coeff, t.lit);
    }
}

/// Writes an instance in the `.pbmo` grammar; [`parse_pbmo`] reads it back.
pub fn write_pbmo(instance: &Instance) -> String {
    let mut out = format!(
        "* #variable= {} #constraint= {} #objective= {}\n",
        instance.num_vars(),
        instance.constraints().len(),
        instance.num_objectives()
    );
    for f in instance.objectives() {
        out.push_str("min:");
        write_terms(&mut out, f);
        if f.constant() > 0 {
            let _ = write!(out, " {}", f.constant());
        }
        out.push_str(" ;\n");
    }
    for c in instance.constraints() {
        write_terms(&mut out, c.lhs());
        let _ = writeln!(out, " >= {} ;", c.bound());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least 5 variables, got {0}")]
    TooFewVariables(u32),
    #[error("need at least one objective")]
    NoObjectives,
}

/// Random multi-objective set covering: `m` constraints over 5 distinct
/// variables each (`sum >= 1`), a first objective with unit coefficients and
/// `p - 1` objectives with coefficients drawn uniformly from `1..=100`.
pub fn generate_mscp(n: u32, m: u32, p: u32, seed: u64) -> Result<Instance, GenerateError> {
    if n < 5 {
        return Err(GenerateError::TooFewVariables(n));
    }
    if p == 0 {
        return Err(GenerateError::NoObjectives);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constraints = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let mut vars: Vec<u32> = sample(&mut rng, n as usize, 5)
            .into_iter()
            .map(|v| v as u32 + 1)
            .collect();
        vars.sort_unstable();
        constraints.push(PbConstraint::new(
            vars.into_iter().map(|v| (1, Lit::positive(v))),
            1,
        ));
    }
    let mut objectives = vec![LinearExpr::new((1..=n).map(|v| (1, Lit::positive(v))), 0)];
    for _ in 1..p {
        objectives.push(LinearExpr::new(
            (1..=n).map(|v| (rng.random_range(1..=100), Lit::positive(v))),
            0,
        ));
    }
    Ok(Instance::new(n, constraints, objectives).expect("generated instance is well formed"))
}

/// Serialization switches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WriteOptions {
    /// Include wall-clock times; off by default so output is reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub image: Point,
    pub assignment: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub iteration: usize,
    #[serde(with = "crate::ratio::serde_string")]
    pub ratio: Ratio,
    pub completed: bool,
    pub mcs_count: usize,
    pub new_records: usize,
    pub objective_clauses: usize,
    pub total_clauses: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    pub front: Vec<Point>,
    pub lower_bound: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultJson {
    pub schema: u32,
    pub status: String,
    pub pareto_complete: bool,
    #[serde(with = "crate::ratio::serde_string::option")]
    pub warranted_ratio: Option<Ratio>,
    pub records: Vec<RecordJson>,
    pub lower_bound: Vec<Point>,
    pub trace: Vec<TraceJson>,
}

fn millis(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn trace_json(t: &IterationTrace, opts: WriteOptions) -> TraceJson {
    TraceJson {
        iteration: t.iteration,
        ratio: t.ratio,
        completed: t.completed,
        mcs_count: t.mcs_count,
        new_records: t.new_records,
        objective_clauses: t.objective_clauses,
        total_clauses: t.total_clauses,
        elapsed_ms: opts.timing.then(|| millis(t.finished)),
        front: t.front.clone(),
        lower_bound: t.lower_bound.clone(),
    }
}

pub fn result_json(result: &ApproxResult, opts: WriteOptions) -> ResultJson {
    ResultJson {
        schema: 1,
        status: result.status.as_str().to_string(),
        pareto_complete: result.pareto_complete,
        warranted_ratio: result.warranted_ratio,
        records: result
            .records
            .iter()
            .map(|r| RecordJson {
                image: r.image.clone(),
                assignment: r.assignment_string(),
            })
            .collect(),
        lower_bound: result.lower_bound.clone(),
        trace: result.trace.iter().map(|t| trace_json(t, opts)).collect(),
    }
}

pub fn write_result_json(result: &ApproxResult, opts: WriteOptions) -> String {
    let mut s =
        serde_json::to_string_pretty(&result_json(result, opts)).expect("result serializes");
    s.push('\n');
    s
}

/// Flat CSV, see the module docs for the columns.
pub fn write_result_csv(result: &ApproxResult, opts: WriteOptions) -> String {
    let dim = result
        .records
        .first()
        .map(|r| r.image.dim())
        .or_else(|| result.lower_bound.first().map(Point::dim))
        .or_else(|| {
            result
                .trace
                .iter()
                .flat_map(|t| t.front.first())
                .map(Point::dim)
                .next()
        })
        .unwrap_or(0);
    let mut out = String::from("section,iteration,ratio,elapsed_ms");
    for k in 1..=dim {
        let _ = write!(out, ",f{k}");
    }
    out.push('\n');
    let mut row = |section: &str,
                   iteration: Option<usize>,
                   ratio: Option<&Ratio>,
                   ms: Option<f64>,
                   p: &Point| {
        let _ = write!(
            out,
            "{section},{},{},{}",
            iteration.map(|i| i.to_string()).unwrap_or_default(),
            ratio.map(format_ratio).unwrap_or_default(),
            ms.map(|m| format!("{m:.3}")).unwrap_or_default()
        );
        for c in p.coords() {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    };
    for t in &result.trace {
        let ms = opts.timing.then(|| millis(t.finished));
        for p in &t.front {
            row("front", Some(t.iteration), Some(&t.ratio), ms, p);
        }
        for p in &t.lower_bound {
            row("lower", Some(t.iteration), Some(&t.ratio), ms, p);
        }
    }
    for r in &result.records {
        row("A", None, result.warranted_ratio.as_ref(), None, &r.image);
    }
    for p in &result.lower_bound {
        row("L", None, result.warranted_ratio.as_ref(), None, p);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid result JSON: {0}")]
    Json(String),
    #[error("points have different dimensions")]
    DimensionMismatch,
}

/// Reads a point set: either a result JSON (its record images) or one point
/// per line, coordinates separated by whitespace or commas, `#` comments.
pub fn parse_points(text: &str) -> Result<Vec<Point>, PointsError> {
    let points = if text.trim_start().starts_with('{') {
        let r: ResultJson =
            serde_json::from_str(text).map_err(|e| PointsError::Json(e.to_string()))?;
        r.records.into_iter().map(|r| r.image).collect()
    } else {
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let coords = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| PointsError::Syntax {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            points.push(Point(coords));
        }
        points
    };
    if points.windows(2).any(|w| w[0].dim() != w[1].dim()) {
        return Err(PointsError::DimensionMismatch);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{intre_solve, SolveOptions};
    use crate::oracle::brute_force_pareto;
    use proptest::prelude::*;

    const EXAMPLE: &str = "\
* two objectives, one cardinality constraint
min: 2 x1 1 x2 1 ~x3 ;
min: 1 ~x1 1 x2 2 x3 ;
1 x1 1 x2 1 x3 >= 2 ;
";

    fn assignments(n: u32) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }

    #[test]
    fn parses_example() {
        let inst = parse_pbmo(EXAMPLE).unwrap();
        assert_eq!(inst.num_vars(), 3);
        assert_eq!(inst.num_objectives(), 2);
        let feasible: Vec<Vec<bool>> = assignments(3).filter(|a| inst.is_feasible(a)).collect();
        assert_eq!(feasible.len(), 4);
        let front = brute_force_pareto(&inst).unwrap().pareto;
        assert_eq!(
            front,
            vec![
                Point::new(vec![1, 4]),
                Point::new(vec![2, 2]),
                Point::new(vec![4, 1])
            ]
        );
    }

    #[test]
    fn unconstrained_and_single_objective() {
        let inst = parse_pbmo("min: 1 x1 1 x2 ;").unwrap();
        assert!(inst.constraints().is_empty());
        let inst =
            parse_pbmo("min: 3 x1 2 x2 2 x3 ;\n1 x1 1 x2 >= 1 ;\n1 ~x2 1 x3 >= 1 ;\n").unwrap();
        assert_eq!(
            brute_force_pareto(&inst).unwrap().pareto,
            vec![Point::new(vec![3])]
        );
    }

    #[test]
    fn relations_and_negative_terms() {
        let inst = parse_pbmo("min: -1 x1 2 x2 3 ;\n1 x1 1 x2 <= 1 ;\n1 x1 -1 x2 = 0 ;").unwrap();
        for a in assignments(2) {
            let expected = (a[0] as i64 + a[1] as i64) <= 1 && a[0] == a[1];
            assert_eq!(inst.is_feasible(&a), expected, "{a:?}");
            assert_eq!(
                inst.objective(0).evaluate(&a) as i64,
                3 - a[0] as i64 + 2 * a[1] as i64
            );
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_pbmo("min: 1 x1 ;\n1 x1 2 y2 >= 1 ;") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_pbmo("min: 1 x1 2 x1 ;"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_pbmo("min: 99999999999999999999 x1 ;"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_pbmo("max: 1 x1 ;"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_pbmo("1 x1 >= 1 ;"),
            Err(ParseError::NoObjectives)
        ));
        assert!(matches!(
            parse_pbmo("min: 1 x1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_pbmo("min: 9223372036854775807 x1 9223372036854775807 x2 9 x3 ;"),
            Err(ParseError::Model { .. })
        ));
    }

    #[test]
    fn declared_variable_count() {
        let inst = parse_pbmo("* #variable= 5 #constraint= 0\nmin: 1 x1 ;").unwrap();
        assert_eq!(inst.num_vars(), 5);
    }

    #[test]
    fn generator_shape() {
        let inst = generate_mscp(10, 4, 3, 7).unwrap();
        assert_eq!(inst.constraints().len(), 4);
        for c in inst.constraints() {
            assert_eq!(c.terms().len(), 5);
            assert_eq!(c.bound(), 1);
            assert!(c.terms().iter().all(|t| t.coeff == 1));
        }
        assert!(inst.objective(0).terms().iter().all(|t| t.coeff == 1));
        for k in 1..3 {
            assert!(inst
                .objective(k)
                .terms()
                .iter()
                .all(|t| (1..=100).contains(&t.coeff)));
        }
        assert_eq!(
            write_pbmo(&inst),
            write_pbmo(&generate_mscp(10, 4, 3, 7).unwrap())
        );
        assert_ne!(
            write_pbmo(&inst),
            write_pbmo(&generate_mscp(10, 4, 3, 8).unwrap())
        );
        assert!(generate_mscp(4, 1, 2, 0).is_err());
    }

    #[test]
    fn result_serialization() {
        let empty = crate::engine::ApproxResult {
            records: vec![],
            lower_bound: vec![],
            warranted_ratio: None,
            status: crate::engine::RunStatus::Truncated,
            pareto_complete: false,
            trace: vec![],
        };
        let v: serde_json::Value =
            serde_json::from_str(&write_result_json(&empty, WriteOptions::default())).unwrap();
        assert_eq!(v["warranted_ratio"], serde_json::Value::Null);
        assert_eq!(v["records"], serde_json::json!([]));
        assert_eq!(v["schema"], 1);

        let inst =
            parse_pbmo("min: 3 x1 3 x2 1 x3 2 x4 1 ;\nmin: 4 ~x1 5 ~x2 5 ~x3 7 ~x4 1 ;").unwrap();
        let res = intre_solve(&inst, &SolveOptions::default()).unwrap();
        let json = write_result_json(&res, WriteOptions::default());
        let back: ResultJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.records.len(), 6);
        assert_eq!(parse_points(&json).unwrap().len(), 6);
        let csv = write_result_csv(&res, WriteOptions { timing: true });
        assert_eq!(csv.lines().filter(|l| l.starts_with("A,")).count(), 6);
        assert!(csv.starts_with("section,iteration,ratio,elapsed_ms,f1,f2\n"));
    }

    #[test]
    fn point_files() {
        let pts = parse_points("# front\n1 4\n2,2\n\n4 1\n").unwrap();
        assert_eq!(pts.len(), 3);
        assert!(parse_points("1 2\n3\n").is_err());
        assert!(parse_points("1 a\n").is_err());
    }

    fn small_instance() -> impl Strategy<Value = Instance> {
        let term = (-9i64..10, 1u32..9, any::<bool>());
        let terms = prop::collection::vec(term, 1..6);
        (
            prop::collection::vec((terms.clone(), -5i64..10), 0..4),
            prop::collection::vec((terms, -3i64..5), 1..3),
        )
            .prop_filter_map("valid instance", |(cs, os)| {
                let mut text = String::new();
                let dedup = |ts: &[(i64, u32, bool)]| {
                    let mut seen = std::collections::BTreeSet::new();
                    ts.iter()
                        .filter(|t| seen.insert(t.1))
                        .map(|&(c, v, n)| format!(" {c} {}x{v}", if n { "~" } else { "" }))
                        .collect::<String>()
                };
                for (ts, c) in &os {
                    text.push_str(&format!("min:{} {c} ;\n", dedup(ts)));
                }
                for (ts, b) in &cs {
                    text.push_str(&format!("{} >= {b} ;\n", dedup(ts)));
                }
                parse_pbmo(&text).ok()
            })
    }

    proptest! {
        #[test]
        fn write_then_parse_preserves_semantics(inst in small_instance()) {
            let back = parse_pbmo(&write_pbmo(&inst)).unwrap();
            prop_assert_eq!(back.num_vars(), inst.num_vars());
            for a in assignments(inst.num_vars()) {
                prop_assert_eq!(back.is_feasible(&a), inst.is_feasible(&a));
                prop_assert_eq!(back.evaluate(&a), inst.evaluate(&a));
            }
        }
    }
}

use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};
use substoch::bigraph::{find_splitting_path, perturbability, ComponentKind, SupportGraph};
use substoch::bounds::{
    check_h_inequality, check_permanent_bound, max_diagonal, max_perm_i_minus_a, BoundReport, PerSearchConfig,
};
use substoch::construction::{
    enumerate_fixed_sum_vertices, enumerate_transportation_vertices, jurkat_ryser, orbit_representatives,
    EdgeOrientation, PivotPolicy, TieRule,
};
use substoch::decomposition::{
    decompose_fixed_sum_with, decompose_subdefect, split_witness, DecompositionStrategy, UnionSide,
};
use substoch::extremality::{
    b_matrix, is_extreme_subdefect, is_extreme_sum, is_extreme_transportation, vertex_oracle_with,
    NonExtremeWitness, OracleConfig, Polytope, SubdefectExtremality, SumExtremality, TransportationExtremality,
};
use substoch::ratmat::rational::{from_usize, one, parse_rational};
use substoch::ratmat::sub_defect_witness;
use substoch::{parse_matrix, Execution, Rational, RowColProfile, SubstochMatrix};

use crate::output::{frac, fracs, matrix, Format, Outcome};
use crate::{BoundsCommand, CheckPolytope, Command, EnumPolytope, Tie};

pub fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Classify { .. } => "classify",
        Command::Check { .. } => "check",
        Command::Graph { .. } => "graph",
        Command::Construct { .. } => "construct",
        Command::Enumerate { .. } => "enumerate",
        Command::Decompose { .. } => "decompose",
        Command::Bounds { check } => match check {
            BoundsCommand::Diagonal { .. } => "bounds diagonal",
            BoundsCommand::Permanent { .. } => "bounds permanent",
            BoundsCommand::H { .. } => "bounds h",
            BoundsCommand::PerIMinusA { .. } => "bounds per-i-minus-a",
        },
        Command::Bmatrix { .. } => "bmatrix",
    }
}

fn load(path: &Path) -> Result<SubstochMatrix, String> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| format!("cannot read stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
    };
    parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text.trim()).ok_or_else(|| format!("not a rational number: {text:?}"))
}

fn rationals(text: &str) -> Result<Vec<Rational>, String> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(rational)
        .collect()
}

fn profile(rows: &str, cols: &str) -> Result<RowColProfile, String> {
    RowColProfile::new(rationals(rows)?, rationals(cols)?).map_err(|e| e.to_string())
}

/// All integers in the text, paired up in order and shifted to 0-based.
fn pivots(text: &str) -> Result<Vec<(usize, usize)>, String> {
    let numbers: Vec<usize> = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("pivot index {t} is too large")))
        .collect::<Result<_, _>>()?;
    if numbers.len() % 2 != 0 {
        return Err(format!("pivot list has an odd number of indices ({})", numbers.len()));
    }
    if numbers.contains(&0) {
        return Err("pivot indices are 1-based".into());
    }
    Ok(numbers.chunks(2).map(|p| (p[0] - 1, p[1] - 1)).collect())
}

fn sum_polytope(a: &SubstochMatrix, fmt: &Format) -> String {
    format!("omega_{}^{{{}}}", a.n(), fmt.num(&a.sigma()))
}

pub fn classify(file: &Path, fmt: &Format) -> Result<Outcome, String> {
    let a = load(file)?;
    let label = a.classify();
    let (rows, cols) = (a.row_sums(), a.col_sums());
    let profile = if rows == cols {
        format!("R=S={}", fmt.list(&rows))
    } else {
        format!("R={} S={}", fmt.list(&rows), fmt.list(&cols))
    };
    let human = format!("n={} sigma={} sub-defect={} profile {profile}\n", a.n(), fmt.num(&label.s), label.k);
    let completion = sub_defect_witness(&a, label.k).expect("every matrix completes at its sub-defect");
    let result = json!({
        "n": a.n(),
        "sigma": frac(&label.s),
        "sub_defect": label.k,
        "rows": fracs(&rows),
        "cols": fracs(&cols),
    });
    Ok(Outcome::new(human, result).witness(json!({ "completion": matrix(&completion) })))
}

fn witness_kind(w: &NonExtremeWitness) -> &'static str {
    use substoch::bigraph::SplittingWitness as S;
    match w {
        NonExtremeWitness::Cycle(_) => "cycle",
        NonExtremeWitness::Splitting(S::Columns(_)) => "column-path",
        NonExtremeWitness::Splitting(S::Rows(_)) => "row-path",
        NonExtremeWitness::Splitting(S::CrossComponent { .. }) => "cross-component",
    }
}

fn split_report(a: &SubstochMatrix, w: &NonExtremeWitness, fmt: &Format) -> (String, Value) {
    let split = split_witness(a, w).expect("extremality witnesses always split");
    let human = format!(
        "A = {} * A1 + {} * A2 ({} split, steps {} and {})\nA1:\n{}A2:\n{}",
        fmt.num(&split.lambda),
        fmt.num(&(one() - &split.lambda)),
        split.mechanism,
        fmt.num(&split.epsilon_plus),
        fmt.num(&split.epsilon_minus),
        fmt.matrix(&split.a1),
        fmt.matrix(&split.a2)
    );
    let value = json!({
        "kind": witness_kind(w),
        "description": w.to_string(),
        "lambda": frac(&split.lambda),
        "epsilon_plus": frac(&split.epsilon_plus),
        "epsilon_minus": frac(&split.epsilon_minus),
        "a1": matrix(&split.a1),
        "a2": matrix(&split.a2),
    });
    (human, value)
}

pub fn check(
    file: &Path,
    polytope: CheckPolytope,
    k: Option<usize>,
    oracle: bool,
    fmt: &Format,
) -> Result<Outcome, String> {
    let a = load(file)?;
    let mut outcome = check_extremality(&a, polytope, k, fmt)?;
    if oracle {
        let target = match polytope {
            CheckPolytope::Transportation => Polytope::Transportation,
            CheckPolytope::Sum | CheckPolytope::Subdefect => Polytope::FixedSum,
        };
        let mut vertex =
            vertex_oracle_with(&a, target, &OracleConfig::from_env()).map_err(|e| e.to_string())?;
        if let CheckPolytope::Subdefect = polytope {
            let k = k.unwrap_or_else(|| a.sub_defect());
            let s = a.sigma();
            vertex &= k <= a.n() && (s == from_usize(a.n() - k) || s == from_usize(a.n() + 1 - k));
        }
        let agrees = vertex == (outcome.code == 0);
        outcome.human += &format!(
            "rank oracle: {} ({})\n",
            if vertex { "vertex" } else { "not a vertex" },
            if agrees { "agrees" } else { "DISAGREES" }
        );
        if let Value::Object(map) = &mut outcome.result {
            map.insert("oracle_vertex".into(), Value::Bool(vertex));
        }
    }
    Ok(outcome)
}

fn check_extremality(
    a: &SubstochMatrix,
    polytope: CheckPolytope,
    k: Option<usize>,
    fmt: &Format,
) -> Result<Outcome, String> {
    match polytope {
        CheckPolytope::Transportation => {
            let name = format!("omega_{}(R,S)", a.n());
            match is_extreme_transportation(&a) {
                TransportationExtremality::Extreme => Ok(Outcome::new(
                    format!("EXTREME in {name}; support is a forest\n"),
                    json!({"extreme": true, "polytope": name}),
                )),
                TransportationExtremality::NotExtreme(cycle) => {
                    let w = NonExtremeWitness::Cycle(cycle);
                    let (detail, value) = split_report(&a, &w, fmt);
                    Ok(Outcome::new(
                        format!("NOT EXTREME in {name}; witness: {w}\n{detail}"),
                        json!({"extreme": false, "polytope": name}),
                    )
                    .witness(value)
                    .holds(false))
                }
            }
        }
        CheckPolytope::Sum => {
            let name = sum_polytope(&a, fmt);
            match is_extreme_sum(&a) {
                SumExtremality::Extreme(form) => Ok(Outcome::new(
                    format!("EXTREME in {name}; canonical form {form}\n"),
                    json!({"extreme": true, "polytope": name}),
                )
                .witness(json!({
                    "canonical_form": form.to_string(),
                    "row_perm": form.row_perm.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "col_perm": form.col_perm.iter().map(|j| j + 1).collect::<Vec<_>>(),
                }))),
                SumExtremality::NotExtreme(w) => {
                    let (detail, value) = split_report(&a, &w, fmt);
                    Ok(Outcome::new(
                        format!("NOT EXTREME in {name}; witness: {w}\n{detail}"),
                        json!({"extreme": false, "polytope": name}),
                    )
                    .witness(value)
                    .holds(false))
                }
            }
        }
        CheckPolytope::Subdefect => {
            let k = k.unwrap_or_else(|| a.sub_defect());
            if k > a.n() {
                return Err(format!("sub-defect {k} exceeds order {}", a.n()));
            }
            let name = format!("omega_{{{},{k}}}", a.n());
            let (human, extreme, side) = match is_extreme_subdefect(&a, Some(k)) {
                SubdefectExtremality::Interior(form) => {
                    (format!("EXTREME in {name}; member, canonical form {form}\n"), true, "interior")
                }
                SubdefectExtremality::Limit(form) => (
                    format!("EXTREME in {name}; limit point with sigma = n-k+1, canonical form {form}\n"),
                    true,
                    "limit",
                ),
                SubdefectExtremality::NotExtreme => {
                    (format!("NOT EXTREME in {name}; sigma = {}\n", fmt.num(&a.sigma())), false, "none")
                }
            };
            Ok(Outcome::new(human, json!({"extreme": extreme, "polytope": name, "side": side})).holds(extreme))
        }
    }
}

pub fn graph(file: &Path, fmt: &Format) -> Result<Outcome, String> {
    let a = load(file)?;
    let g = SupportGraph::build(&a);
    let mut human = String::from("edges:\n");
    for e in g.edges() {
        human += &format!("  i{} j{} {}\n", e.row + 1, e.col + 1, fmt.num(&e.weight));
    }
    let cycle = g.find_cycle();
    human += &format!("forest: {}\n", if g.is_forest() { "yes" } else { "no" });
    human += &format!("cycle: {}\n", cycle.as_ref().map_or("none".to_string(), |c| c.to_string()));
    let components = g.components();
    human += "components:\n";
    let kind = |k: ComponentKind| match k {
        ComponentKind::IsolatedVertex => "isolated",
        ComponentKind::Path => "path",
        ComponentKind::CycleBearing => "cycle-bearing",
        ComponentKind::OtherTree => "tree",
    };
    for c in &components {
        let names: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
        human += &format!("  {{{}}} {}, {} edges\n", names.join(","), kind(c.kind), c.edge_count);
    }
    let perturb = perturbability(&a);
    let flags: Vec<String> = perturb
        .iter()
        .map(|p| {
            let tag = match (p.row_perturbable, p.column_perturbable) {
                (true, true) => "row+column",
                (true, false) => "row",
                (false, true) => "column",
                (false, false) => "-",
            };
            format!("i{}j{}:{tag}", p.row + 1, p.col + 1)
        })
        .collect();
    human += &format!("perturbable: {}\n", flags.join(" "));
    let splitting = if g.is_forest() { find_splitting_path(&a) } else { None };
    if let Some(w) = &splitting {
        human += &format!("splitting: {w}\n");
    }
    let result = json!({
        "edges": g.edges().iter().map(|e| json!({"row": e.row + 1, "col": e.col + 1, "weight": frac(&e.weight)})).collect::<Vec<_>>(),
        "forest": g.is_forest(),
        "components": components.iter().map(|c| json!({
            "vertices": c.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "edges": c.edge_count,
            "kind": kind(c.kind),
        })).collect::<Vec<_>>(),
        "perturbability": perturb.iter().map(|p| json!({
            "row": p.row + 1, "col": p.col + 1,
            "row_perturbable": p.row_perturbable, "column_perturbable": p.column_perturbable,
        })).collect::<Vec<_>>(),
    });
    let witness = json!({
        "cycle": cycle.map(|c| c.to_string()),
        "splitting": splitting.map(|w| w.to_string()),
    });
    Ok(Outcome::new(human, result).witness(witness))
}

pub fn construct(rows: &str, cols: &str, pivot_text: Option<&str>, tie: Tie, fmt: &Format) -> Result<Outcome, String> {
    let p = profile(rows, cols)?;
    let policy = match pivot_text {
        Some(text) => PivotPolicy::Explicit(pivots(text)?),
        None => PivotPolicy::NorthWest,
    };
    let tie = match tie {
        Tie::Row => TieRule::CompleteRow,
        Tie::Column => TieRule::CompleteColumn,
    };
    let (m, trace) = jurkat_ryser(&p, &policy, tie).map_err(|e| e.to_string())?;
    let mut human = fmt.matrix(&m);
    human += "trace:\n";
    for e in &trace.edges {
        human += &format!("  {e}\n");
    }
    let edges: Vec<Value> = trace
        .edges
        .iter()
        .map(|e| {
            json!({
                "row": e.row + 1,
                "col": e.col + 1,
                "weight": frac(&e.weight),
                "orientation": match e.orientation {
                    EdgeOrientation::RowToCol => "row-to-column",
                    EdgeOrientation::ColToRow => "column-to-row",
                },
            })
        })
        .collect();
    Ok(Outcome::new(human, matrix(&m)).witness(json!({ "trace": edges })))
}

#[allow(clippy::too_many_arguments)]
pub fn enumerate(
    polytope: EnumPolytope,
    rows: Option<&str>,
    cols: Option<&str>,
    n: Option<usize>,
    s: Option<&str>,
    orbits: bool,
    limit: usize,
    exec: Execution,
    fmt: &Format,
) -> Result<Outcome, String> {
    let vertices = match polytope {
        EnumPolytope::Transportation => {
            let (Some(rows), Some(cols)) = (rows, cols) else {
                return Err("transportation enumeration needs --rows and --cols".into());
            };
            enumerate_transportation_vertices(&profile(rows, cols)?, limit)
        }
        EnumPolytope::Sum => {
            let (Some(n), Some(s)) = (n, s) else {
                return Err("fixed-sum enumeration needs --n and --s".into());
            };
            enumerate_fixed_sum_vertices(n, &rational(s)?, limit, exec)
        }
    }
    .map_err(|e| e.to_string())?;
    let listed = if orbits { orbit_representatives(&vertices) } else { vertices.clone() };
    let mut human = format!("{} extreme points", vertices.len());
    if orbits {
        human += &format!(", {} up to row/column permutations", listed.len());
    }
    human.push('\n');
    for v in &listed {
        human.push('\n');
        human += &fmt.matrix(v);
    }
    let result = json!({
        "count": vertices.len(),
        "orbits": orbits.then_some(listed.len()),
        "matrices": listed.iter().map(matrix).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(human, result))
}

pub fn decompose(
    file: &Path,
    subdefect: bool,
    strategy: DecompositionStrategy,
    exec: Execution,
    fmt: &Format,
) -> Result<Outcome, String> {
    let a = load(file)?;
    if subdefect {
        let combo = decompose_subdefect(&a);
        let mut human = format!("{} terms over the extreme points of omega_{{{},{}}}\n", combo.terms.len(), a.n(), combo.k);
        for (w, m, side) in &combo.terms {
            let side = match side {
                UnionSide::Interior => "interior",
                UnionSide::Limit => "limit",
            };
            human += &format!("\nweight {} ({side}, sigma {}):\n{}", fmt.num(w), fmt.num(&m.sigma()), fmt.matrix(m));
        }
        let terms: Vec<Value> = combo
            .terms
            .iter()
            .map(|(w, m, side)| {
                json!({
                    "weight": frac(w),
                    "matrix": matrix(m),
                    "side": if *side == UnionSide::Interior { "interior" } else { "limit" },
                })
            })
            .collect();
        return Ok(Outcome::new(human, Value::Array(terms)).witness(json!({ "k": combo.k })));
    }
    let (combo, stats) = decompose_fixed_sum_with(&a, strategy, exec);
    let mut human = format!(
        "{} extreme points of {} (depth {}, {} splits)\n",
        combo.len(),
        sum_polytope(&a, fmt),
        stats.depth,
        stats.splits
    );
    for (w, m) in &combo.terms {
        human += &format!("\nweight {}:\n{}", fmt.num(w), fmt.matrix(m));
    }
    let result = serde_json::to_value(&combo).expect("combos serialize");
    Ok(Outcome::new(human, result).witness(json!({"depth": stats.depth, "splits": stats.splits})))
}

fn bound_outcome(report: BoundReport, fmt: &Format) -> Outcome {
    let mut human = format!("{} = {}", report.quantity, fmt.num(&report.value));
    let lower = report.lower.as_ref().map_or("-inf".into(), |l| fmt.num(l));
    let upper = report.upper.as_ref().map_or("+inf".into(), |u| fmt.num(u));
    human += &format!(" in [{lower}, {upper}]");
    if let Some(strict) = &report.strict_upper {
        human += &format!(", upper < {}", fmt.num(strict));
    }
    human += if report.satisfied { ": satisfied\n" } else { ": VIOLATED\n" };
    if let Some(note) = &report.note {
        human += &format!("note: {note}\n");
    }
    let satisfied = report.satisfied;
    let value = serde_json::to_value(&report).expect("reports serialize");
    let witness = value.get("witness").cloned().unwrap_or(Value::Null);
    Outcome::new(human, value).witness(witness).holds(satisfied)
}

pub fn diagonal(file: &Path, fmt: &Format) -> Result<Outcome, String> {
    let a = load(file)?;
    let (value, perm) = max_diagonal(&a);
    let one_based: Vec<usize> = perm.iter().map(|j| j + 1).collect();
    let cols: Vec<String> = one_based.iter().map(|j| j.to_string()).collect();
    let human = format!("h(A) = {} at permutation ({})\n", fmt.num(&value), cols.join(","));
    Ok(Outcome::new(human, json!({"h": frac(&value)})).witness(json!({ "permutation": one_based })))
}

pub fn permanent(file: &Path, fmt: &Format) -> Result<Outcome, String> {
    let a = load(file)?;
    let report = check_permanent_bound(&a).map_err(|e| e.to_string())?;
    Ok(bound_outcome(report, fmt))
}

pub fn h_inequality(first: &Path, second: &Path, fmt: &Format) -> Result<Outcome, String> {
    let (a, b) = (load(first)?, load(second)?);
    let report = check_h_inequality(&a, &b).map_err(|e| e.to_string())?;
    Ok(bound_outcome(report, fmt))
}

pub fn per_i_minus_a(n: usize, s: &str, samples: usize, seed: u64, exec: Execution, fmt: &Format) -> Result<Outcome, String> {
    let s = rational(s)?;
    let config = PerSearchConfig {
        samples,
        seed,
        exec,
        ..PerSearchConfig::default()
    };
    let report = max_perm_i_minus_a(n, &s, &config).map_err(|e| e.to_string())?;
    let mut human = format!(
        "formula max per(I-A) over omega_{}^{{{}}}: {} (t = {})\nbest found: {} over {} extreme points and {} samples ({})\n",
        n,
        fmt.num(&s),
        fmt.num(&report.formula),
        report.t,
        fmt.num(&report.best),
        report.vertices_checked,
        report.samples_checked,
        if report.attained { "attained" } else { "not attained" }
    );
    if let Some(c) = &report.counterexample {
        human += &format!("COUNTEREXAMPLE above the formula:\n{}", fmt.matrix(c));
    } else {
        human += "no counterexample found\n";
    }
    human += &format!("witness:\n{}", fmt.matrix(&report.witness));
    let holds = report.counterexample.is_none();
    let value = serde_json::to_value(&report).expect("reports serialize");
    Ok(Outcome::new(human, value).witness(matrix(&report.witness)).holds(holds))
}

pub fn bmatrix(m: usize, alpha: &str, fmt: &Format) -> Result<Outcome, String> {
    let b = b_matrix(m, &rational(alpha)?).map_err(|e| e.to_string())?;
    Ok(Outcome::new(fmt.matrix(&b), matrix(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivot_lists() {
        assert_eq!(pivots("1,1 4,2").unwrap(), vec![(0, 0), (3, 1)]);
        assert_eq!(pivots("(1 1)(2 3)").unwrap(), vec![(0, 0), (1, 2)]);
        assert!(pivots("1 2 3").is_err());
        assert!(pivots("0 1").is_err());
    }

    #[test]
    fn rational_lists() {
        assert_eq!(rationals("0.5, 1/2 1").unwrap().len(), 3);
        assert!(rationals("0.5 x").is_err());
    }
}

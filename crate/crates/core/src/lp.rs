//! Mixed-integer model export.
//!
//! Builds the fully linearized arrangement model and writes it as CPLEX
//! LP-format text so an external MIP solver can independently reproduce
//! the branch-and-bound optimum. The same row table drives
//! [`verify_solution`], which checks a candidate assignment against every
//! constraint family, and [`feasible_point`], which turns an arrangement's
//! surrogate breakdown into a complete variable assignment.
//!
//! Out-of-bounds side neighbors follow the wall convention (occupied, with
//! nothing in front): their symbols never appear, the constants are folded
//! into the row's right-hand side instead.

use crate::arrangement::{Arrangement, ArrangementError};
use crate::instance::ProblemInstance;
use crate::surrogate::evaluate_surrogate;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("assignment is missing variable {0}")]
    MissingVariable(String),
    #[error("solution line {0:?} is not a 'name value' pair")]
    BadSolutionLine(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Non-negative integer.
    Integer,
    /// Non-negative real.
    Continuous,
}

#[derive(Clone, Debug)]
struct VarDef {
    name: String,
    kind: VarKind,
    /// Explicit upper bound, emitted in the Bounds section.
    upper: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    /// (variable index, coefficient), in emission order.
    terms: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// The linearized model: variable registry in insertion order (objective
/// symbols first, then first touch by constraint family), objective terms,
/// and named constraint rows grouped by family.
#[derive(Clone, Debug)]
pub struct LpModel {
    /// Big-M constant: m_x·m_y + Σ_l c_ls + 1 dominates every cell count
    /// and cost sum in the model.
    pub big_m: f64,
    vars: Vec<VarDef>,
    index: BTreeMap<String, usize>,
    /// (variable index, coefficient); zero coefficients are kept in the
    /// registry but skipped when writing.
    objective: Vec<(usize, f64)>,
    rows: Vec<Row>,
}

impl LpModel {
    fn new(big_m: f64) -> Self {
        LpModel { big_m, vars: Vec::new(), index: BTreeMap::new(), objective: Vec::new(), rows: Vec::new() }
    }

    fn var(&mut self, name: String, kind: VarKind, upper: Option<f64>) -> usize {
        if let Some(&idx) = self.index.get(&name) {
            return idx;
        }
        let idx = self.vars.len();
        self.index.insert(name.clone(), idx);
        self.vars.push(VarDef { name, kind, upper });
        idx
    }

    fn row(&mut self, name: String, terms: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        self.rows.push(Row { name, terms, cmp, rhs });
    }

    pub fn variable_count(&self) -> usize {
        self.vars.len()
    }

    pub fn variable_names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.name.as_str())
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Number of rows whose name starts with `family` followed by an index
    /// separator.
    pub fn family_len(&self, family: &str) -> usize {
        let prefix = format!("{family}_");
        self.rows
            .iter()
            .filter(|r| {
                r.name
                    .strip_prefix(&prefix)
                    .is_some_and(|rest| rest.chars().all(|c| c.is_ascii_digit() || c == '_'))
            })
            .count()
    }
}

fn vn(prefix: &str, indices: &[u32]) -> String {
    let mut s = String::from(prefix);
    for ix in indices {
        let _ = write!(s, "_{ix}");
    }
    s
}

/// Builds the linearized model for an instance. Deterministic: identical
/// instances yield identical models and identical LP text.
pub fn build_model(instance: &ProblemInstance) -> LpModel {
    let grid = instance.grid();
    let (m_x, m_y) = (grid.m_x as u32, grid.m_y as u32);
    let cells: Vec<(u32, u32)> = (1..=m_x)
        .flat_map(|i| (1..=m_y).map(move |j| (i, j)))
        .collect();
    let suction_sum: f64 = instance.objects().iter().map(|o| o.c_suction).sum();
    let big_m = grid.cell_count() as f64 + suction_sum + 1.0;
    let mut model = LpModel::new(big_m);
    let m = big_m;

    // objective: Σ_l p_l (y_lij + c_r b_lij); y symbols first, then b
    for o in instance.objects() {
        for &(i, j) in &cells {
            let y = model.var(vn("y", &[o.id, i, j]), VarKind::Continuous, None);
            model.objective.push((y, o.p));
        }
    }
    for o in instance.objects() {
        for &(i, j) in &cells {
            let b = model.var(vn("b", &[o.id, i, j]), VarKind::Integer, None);
            model.objective.push((b, o.p * instance.c_removal()));
        }
    }

    // every object occupies exactly one cell
    for o in instance.objects() {
        let terms = cells
            .iter()
            .map(|&(i, j)| (model.var(vn("x", &[o.id, i, j]), VarKind::Binary, None), 1.0))
            .collect();
        model.row(vn("object", &[o.id]), terms, Cmp::Eq, 1.0);
    }

    // occupancy indicator per cell; its <= 1 cap lives in Bounds
    for &(i, j) in &cells {
        let a = model.var(vn("a", &[i, j]), VarKind::Integer, Some(1.0));
        let mut terms = vec![(a, 1.0)];
        for o in instance.objects() {
            terms.push((model.var(vn("x", &[o.id, i, j]), VarKind::Binary, None), -1.0));
        }
        model.row(vn("position", &[i, j]), terms, Cmp::Eq, 0.0);
    }

    // delta: a cell is pushable only if some side neighbor is free; walls
    // count as occupied neighbors (their constant 1 moves to the rhs)
    for &(i, j) in &cells {
        let delta = model.var(vn("delta", &[i, j]), VarKind::Binary, None);
        let mut terms = vec![(delta, 1.0)];
        let mut rhs = 2.0 * m;
        for side in [i.checked_sub(1), (i < m_x).then_some(i + 1)] {
            match side {
                Some(ni) if ni >= 1 => {
                    let a = model.var(vn("a", &[ni, j]), VarKind::Integer, Some(1.0));
                    terms.push((a, m));
                }
                _ => rhs -= m, // wall: a fixed to 1
            }
        }
        model.row(vn("pushable", &[i, j]), terms, Cmp::Le, rhs);
    }

    // dp = x AND delta (object is placed at a pushable cell)
    for o in instance.objects() {
        for &(i, j) in &cells {
            let dp = model.var(vn("dp", &[o.id, i, j]), VarKind::Binary, None);
            let x = model.index[&vn("x", &[o.id, i, j])];
            model.row(vn("dp_le_x", &[o.id, i, j]), vec![(dp, 1.0), (x, -1.0)], Cmp::Le, 0.0);
        }
    }
    for o in instance.objects() {
        for &(i, j) in &cells {
            let dp = model.index[&vn("dp", &[o.id, i, j])];
            let delta = model.index[&vn("delta", &[i, j])];
            model.row(
                vn("dp_le_delta", &[o.id, i, j]),
                vec![(dp, 1.0), (delta, -1.0)],
                Cmp::Le,
                0.0,
            );
        }
    }
    for o in instance.objects() {
        for &(i, j) in &cells {
            let dp = model.index[&vn("dp", &[o.id, i, j])];
            let x = model.index[&vn("x", &[o.id, i, j])];
            let delta = model.index[&vn("delta", &[i, j])];
            model.row(
                vn("dp_ge_and", &[o.id, i, j]),
                vec![(dp, 1.0), (x, -1.0), (delta, -1.0)],
                Cmp::Ge,
                -1.0,
            );
        }
    }

    // ds = x AND NOT delta (placed at a suction-only cell)
    for o in instance.objects() {
        for &(i, j) in &cells {
            let ds = model.var(vn("ds", &[o.id, i, j]), VarKind::Binary, None);
            let x = model.index[&vn("x", &[o.id, i, j])];
            model.row(vn("ds_le_x", &[o.id, i, j]), vec![(ds, 1.0), (x, -1.0)], Cmp::Le, 0.0);
        }
    }
    for o in instance.objects() {
        for &(i, j) in &cells {
            let ds = model.index[&vn("ds", &[o.id, i, j])];
            let delta = model.index[&vn("delta", &[i, j])];
            model.row(
                vn("ds_le_notdelta", &[o.id, i, j]),
                vec![(ds, 1.0), (delta, 1.0)],
                Cmp::Le,
                1.0,
            );
        }
    }
    for o in instance.objects() {
        for &(i, j) in &cells {
            let ds = model.index[&vn("ds", &[o.id, i, j])];
            let x = model.index[&vn("x", &[o.id, i, j])];
            let delta = model.index[&vn("delta", &[i, j])];
            model.row(
                vn("ds_ge_and", &[o.id, i, j]),
                vec![(ds, 1.0), (x, -1.0), (delta, 1.0)],
                Cmp::Ge,
                0.0,
            );
        }
    }

    // y >= relocation cost of the obstacles in front, active when placed
    // (z = 0); every obstacle is priced by its own dp/ds indicator
    for o in instance.objects() {
        for &(i, j) in &cells {
            let mut terms = Vec::new();
            for other in instance.objects() {
                if other.id == o.id {
                    continue;
                }
                for jf in 1..j {
                    let dp = model.index[&vn("dp", &[other.id, i, jf])];
                    let ds = model.index[&vn("ds", &[other.id, i, jf])];
                    terms.push((dp, other.c_push));
                    terms.push((ds, other.c_suction));
                }
            }
            let y = model.index[&vn("y", &[o.id, i, j])];
            terms.push((y, -1.0));
            let z = model.var(vn("z", &[o.id, i, j]), VarKind::Binary, None);
            terms.push((z, -m));
            model.row(vn("relocation", &[o.id, i, j]), terms, Cmp::Le, 0.0);
        }
    }

    // z is the negation indicator of x
    for o in instance.objects() {
        for &(i, j) in &cells {
            let x = model.index[&vn("x", &[o.id, i, j])];
            let z = model.index[&vn("z", &[o.id, i, j])];
            model.row(vn("xz_excl", &[o.id, i, j]), vec![(x, 1.0), (z, 1.0)], Cmp::Le, 1.0);
        }
    }

    // e: running occupancy count from the front of the column
    for &(i, j) in &cells {
        let e = model.var(vn("e", &[i, j]), VarKind::Integer, None);
        let mut terms = vec![(e, 1.0)];
        for jf in 1..=j {
            terms.push((model.index[&vn("a", &[i, jf])], -1.0));
        }
        model.row(vn("front_count", &[i, j]), terms, Cmp::Eq, 0.0);
    }

    // f can be 1 only when the cell has nothing in front (e = 0)
    for &(i, j) in &cells {
        let e = model.index[&vn("e", &[i, j])];
        let f = model.var(vn("f", &[i, j]), VarKind::Binary, None);
        model.row(vn("clear_front", &[i, j]), vec![(e, 1.0), (f, m)], Cmp::Le, m);
    }

    // d: open reachable slots per column
    for i in 1..=m_x {
        let d = model.var(vn("d", &[i]), VarKind::Integer, None);
        let mut terms = vec![(d, 1.0)];
        for j in 1..=m_y {
            terms.push((model.index[&vn("f", &[i, j])], -1.0));
        }
        model.row(vn("column_slots", &[i]), terms, Cmp::Eq, 0.0);
    }

    // dt = a AND g: an occupied cell with a cavity beside it can host a
    // sideways tuck
    for &(i, j) in &cells {
        let dt = model.var(vn("dt", &[i, j]), VarKind::Binary, None);
        let a = model.index[&vn("a", &[i, j])];
        model.row(vn("dt_le_a", &[i, j]), vec![(dt, 1.0), (a, -1.0)], Cmp::Le, 0.0);
    }
    for &(i, j) in &cells {
        let dt = model.index[&vn("dt", &[i, j])];
        let g = model.var(vn("g", &[i, j]), VarKind::Binary, None);
        model.row(vn("dt_le_g", &[i, j]), vec![(dt, 1.0), (g, -1.0)], Cmp::Le, 0.0);
    }
    for &(i, j) in &cells {
        let dt = model.index[&vn("dt", &[i, j])];
        let a = model.index[&vn("a", &[i, j])];
        let g = model.index[&vn("g", &[i, j])];
        model.row(
            vn("dt_ge_and", &[i, j]),
            vec![(dt, 1.0), (a, -1.0), (g, -1.0)],
            Cmp::Ge,
            -1.0,
        );
    }

    // h = NOT a AND NOT f: an empty cell blocked from the front (a cavity)
    for &(i, j) in &cells {
        let h = model.var(vn("h", &[i, j]), VarKind::Binary, None);
        let a = model.index[&vn("a", &[i, j])];
        model.row(vn("h_le_nota", &[i, j]), vec![(h, 1.0), (a, 1.0)], Cmp::Le, 1.0);
    }
    for &(i, j) in &cells {
        let h = model.index[&vn("h", &[i, j])];
        let f = model.index[&vn("f", &[i, j])];
        model.row(vn("h_le_notf", &[i, j]), vec![(h, 1.0), (f, 1.0)], Cmp::Le, 1.0);
    }
    for &(i, j) in &cells {
        let h = model.index[&vn("h", &[i, j])];
        let a = model.index[&vn("a", &[i, j])];
        let f = model.index[&vn("f", &[i, j])];
        model.row(
            vn("h_ge_nor", &[i, j]),
            vec![(h, 1.0), (a, 1.0), (f, 1.0)],
            Cmp::Ge,
            1.0,
        );
    }

    // g = OR of side-neighbor cavities; wall neighbors have h fixed to 0
    for &(i, j) in &cells {
        let g = model.index[&vn("g", &[i, j])];
        let mut terms = vec![(g, 1.0)];
        if i > 1 {
            terms.push((model.index[&vn("h", &[i - 1, j])], -1.0));
        }
        model.row(vn("g_ge_left", &[i, j]), terms, Cmp::Ge, 0.0);
    }
    for &(i, j) in &cells {
        let g = model.index[&vn("g", &[i, j])];
        let mut terms = vec![(g, 1.0)];
        if i < m_x {
            terms.push((model.index[&vn("h", &[i + 1, j])], -1.0));
        }
        model.row(vn("g_ge_right", &[i, j]), terms, Cmp::Ge, 0.0);
    }
    for &(i, j) in &cells {
        let g = model.index[&vn("g", &[i, j])];
        let mut terms = vec![(g, 1.0)];
        if i > 1 {
            terms.push((model.index[&vn("h", &[i - 1, j])], -1.0));
        }
        if i < m_x {
            terms.push((model.index[&vn("h", &[i + 1, j])], -1.0));
        }
        model.row(vn("g_le_sum", &[i, j]), terms, Cmp::Le, 0.0);
    }

    // b >= obstacles in front minus tuck and slot capacity, active when
    // placed (z = 0)
    for o in instance.objects() {
        for &(i, j) in &cells {
            let mut terms = vec![(model.index[&vn("e", &[i, j])], 1.0)];
            terms.push((model.index[&vn("x", &[o.id, i, j])], -1.0));
            for jf in 1..j {
                terms.push((model.index[&vn("dt", &[i, jf])], -1.0));
            }
            for other_i in 1..=m_x {
                if other_i != i {
                    terms.push((model.index[&vn("d", &[other_i])], -1.0));
                }
            }
            terms.push((model.index[&vn("b", &[o.id, i, j])], -1.0));
            terms.push((model.index[&vn("z", &[o.id, i, j])], -m));
            model.row(vn("removal", &[o.id, i, j]), terms, Cmp::Le, 0.0);
        }
    }

    model
}

fn push_term(out: &mut String, first: bool, coef: f64, name: &str) {
    if first {
        if coef < 0.0 {
            let _ = write!(out, "- ");
        }
    } else if coef < 0.0 {
        let _ = write!(out, " - ");
    } else {
        let _ = write!(out, " + ");
    }
    let mag = coef.abs();
    if mag == 1.0 {
        let _ = write!(out, "{name}");
    } else {
        let _ = write!(out, "{mag} {name}");
    }
}

fn write_terms(out: &mut String, model: &LpModel, terms: &[(usize, f64)]) {
    let mut emitted = 0usize;
    for &(idx, coef) in terms {
        if coef == 0.0 {
            continue;
        }
        if emitted > 0 && emitted % 8 == 0 {
            out.push_str("\n    ");
        }
        push_term(out, emitted == 0, coef, &model.vars[idx].name);
        emitted += 1;
    }
    if emitted == 0 {
        out.push('0');
    }
}

/// Renders the model as CPLEX LP-format text: Minimize / Subject To /
/// Bounds / Binaries / Generals / End. Coefficients use the shortest
/// round-trip decimal representation.
pub fn write_lp(model: &LpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n obj: ");
    write_terms(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for row in &model.rows {
        let _ = write!(out, " {}: ", row.name);
        write_terms(&mut out, model, &row.terms);
        let _ = writeln!(out, " {} {}", row.cmp.symbol(), row.rhs);
    }
    out.push_str("Bounds\n");
    for var in &model.vars {
        if let Some(upper) = var.upper {
            let _ = writeln!(out, " {} <= {}", var.name, upper);
        }
    }
    for (section, kind) in [("Binaries", VarKind::Binary), ("Generals", VarKind::Integer)] {
        let _ = writeln!(out, "{section}");
        let mut col = 0usize;
        for var in model.vars.iter().filter(|v| v.kind == kind) {
            let _ = write!(out, " {}", var.name);
            col += 1;
            if col % 8 == 0 {
                out.push('\n');
            }
        }
        if !out.ends_with('\n') {
            out.push('\n');
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A constraint row is not satisfied.
    Constraint,
    /// A binary or integer variable is fractional or out of domain.
    Integrality,
    /// A variable violates its declared bounds.
    Bound,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub name: String,
    pub kind: ViolationKind,
    /// How far past the tolerance the check failed.
    pub amount: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::Constraint => "constraint",
            ViolationKind::Integrality => "integrality",
            ViolationKind::Bound => "bound",
        };
        write!(f, "{} violated ({kind}) by {}", self.name, self.amount)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
    pub objective: f64,
}

impl VerifyReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const VERIFY_TOLERANCE: f64 = 1e-6;

/// Checks an assignment against every row, the variable domains, and the
/// declared bounds, with absolute tolerance 1e-6. Every model variable must
/// be present in the assignment.
pub fn verify_solution(
    model: &LpModel,
    assignment: &BTreeMap<String, f64>,
) -> Result<VerifyReport, LpError> {
    let mut values = Vec::with_capacity(model.vars.len());
    for var in &model.vars {
        match assignment.get(&var.name) {
            Some(&v) => values.push(v),
            None => return Err(LpError::MissingVariable(var.name.clone())),
        }
    }
    let tol = VERIFY_TOLERANCE;
    let mut violations = Vec::new();
    for (var, &value) in model.vars.iter().zip(&values) {
        match var.kind {
            VarKind::Binary | VarKind::Integer => {
                let fractional = (value - value.round()).abs();
                if fractional > tol {
                    violations.push(Violation {
                        name: var.name.clone(),
                        kind: ViolationKind::Integrality,
                        amount: fractional,
                    });
                }
            }
            VarKind::Continuous => {}
        }
        let upper = match (var.kind, var.upper) {
            (_, Some(u)) => Some(u),
            (VarKind::Binary, None) => Some(1.0),
            _ => None,
        };
        let below = -value; // lower bound is always 0
        let above = upper.map_or(f64::NEG_INFINITY, |u| value - u);
        let worst = below.max(above);
        if worst > tol {
            violations.push(Violation {
                name: var.name.clone(),
                kind: ViolationKind::Bound,
                amount: worst,
            });
        }
    }
    for row in &model.rows {
        let lhs: f64 = row.terms.iter().map(|&(idx, coef)| coef * values[idx]).sum();
        let excess = match row.cmp {
            Cmp::Le => lhs - row.rhs,
            Cmp::Ge => row.rhs - lhs,
            Cmp::Eq => (lhs - row.rhs).abs(),
        };
        if excess > tol {
            violations.push(Violation {
                name: row.name.clone(),
                kind: ViolationKind::Constraint,
                amount: excess,
            });
        }
    }
    let objective = model
        .objective
        .iter()
        .map(|&(idx, coef)| coef * values[idx])
        .sum();
    Ok(VerifyReport { violations, objective })
}

/// Parses a solution file of whitespace-separated "name value" lines.
/// Lines starting with `#` or `\` and blank lines are ignored.
pub fn parse_solution(text: &str) -> Result<BTreeMap<String, f64>, LpError> {
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(LpError::BadSolutionLine(line.to_string()));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| LpError::BadSolutionLine(line.to_string()))?;
        out.insert(name.to_string(), value);
    }
    Ok(out)
}

/// Builds the complete assignment induced by an arrangement: placement
/// indicators from the arrangement itself, every derived variable from the
/// surrogate breakdown, and z pinned to 1 - x. The result is feasible and
/// its objective equals the surrogate expected cost.
pub fn feasible_point(
    instance: &ProblemInstance,
    arr: &Arrangement,
) -> Result<BTreeMap<String, f64>, LpError> {
    let report = evaluate_surrogate(instance, arr)?;
    let breakdown = &report.breakdown;
    let grid = instance.grid();
    let (m_x, m_y) = (grid.m_x as u32, grid.m_y as u32);
    let mut out = BTreeMap::new();
    let bit = |v: bool| if v { 1.0 } else { 0.0 };

    let cell_idx = |i: u32, j: u32| ((i - 1) * m_y + (j - 1)) as usize;
    for i in 1..=m_x {
        for j in 1..=m_y {
            let idx = cell_idx(i, j);
            let a = breakdown.a[idx];
            let f = breakdown.f[idx];
            let h = !a && !f;
            out.insert(vn("a", &[i, j]), bit(a));
            out.insert(vn("e", &[i, j]), breakdown.e[idx] as f64);
            out.insert(vn("f", &[i, j]), bit(f));
            out.insert(vn("delta", &[i, j]), bit(breakdown.delta[idx]));
            out.insert(vn("dt", &[i, j]), bit(breakdown.tucked[idx]));
            out.insert(vn("h", &[i, j]), bit(h));
            let left = i > 1 && {
                let l = cell_idx(i - 1, j);
                !breakdown.a[l] && !breakdown.f[l]
            };
            let right = i < m_x && {
                let r = cell_idx(i + 1, j);
                !breakdown.a[r] && !breakdown.f[r]
            };
            out.insert(vn("g", &[i, j]), bit(left || right));
        }
    }
    for i in 1..=m_x {
        out.insert(vn("d", &[i]), breakdown.d[i as usize - 1] as f64);
    }
    for (k, o) in instance.objects().iter().enumerate() {
        let placed = arr.cell_of(o.id).expect("validated total arrangement");
        for i in 1..=m_x {
            for j in 1..=m_y {
                let here = placed.i as u32 == i && placed.j as u32 == j;
                let idx = cell_idx(i, j);
                out.insert(vn("x", &[o.id, i, j]), bit(here));
                out.insert(vn("z", &[o.id, i, j]), bit(!here));
                out.insert(
                    vn("dp", &[o.id, i, j]),
                    bit(here && breakdown.delta[idx]),
                );
                out.insert(
                    vn("ds", &[o.id, i, j]),
                    bit(here && !breakdown.delta[idx]),
                );
                out.insert(vn("y", &[o.id, i, j]), if here { breakdown.y[k] } else { 0.0 });
                out.insert(
                    vn("b", &[o.id, i, j]),
                    if here { breakdown.b[k] as f64 } else { 0.0 },
                );
            }
        }
    }
    Ok(out)
}

/// Builds the model and renders it in one step.
pub fn lp_text(instance: &ProblemInstance) -> String {
    write_lp(&build_model(instance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Cell, ShelfGrid};
    use crate::instance::ObjectSpec;

    fn small_instance() -> ProblemInstance {
        let objects = vec![
            ObjectSpec::new(1, 0.7, 2.0, 3.0),
            ObjectSpec::new(2, 0.3, 1.0, 4.0),
        ];
        ProblemInstance::new(ShelfGrid::new(2, 2), objects, 10.0).unwrap()
    }

    #[test]
    fn variable_count_matches_closed_form() {
        let model = build_model(&small_instance());
        // 6 per-object-per-cell groups, 7 per-cell groups, d per column
        assert_eq!(model.variable_count(), 6 * 2 * 4 + 7 * 4 + 2);
        assert_eq!(model.big_m, 4.0 + 7.0 + 1.0);
    }

    #[test]
    fn family_row_counts_match_closed_forms() {
        let inst = small_instance();
        let model = build_model(&inst);
        let n = 2;
        let cells = 4;
        let m_x = 2;
        for (family, expect) in [
            ("object", n),
            ("position", cells),
            ("pushable", cells),
            ("dp_le_x", n * cells),
            ("dp_le_delta", n * cells),
            ("dp_ge_and", n * cells),
            ("ds_le_x", n * cells),
            ("ds_le_notdelta", n * cells),
            ("ds_ge_and", n * cells),
            ("relocation", n * cells),
            ("xz_excl", n * cells),
            ("front_count", cells),
            ("clear_front", cells),
            ("column_slots", m_x),
            ("dt_le_a", cells),
            ("dt_le_g", cells),
            ("dt_ge_and", cells),
            ("h_le_nota", cells),
            ("h_le_notf", cells),
            ("h_ge_nor", cells),
            ("g_ge_left", cells),
            ("g_ge_right", cells),
            ("g_le_sum", cells),
            ("removal", n * cells),
        ] {
            assert_eq!(model.family_len(family), expect, "family {family}");
        }
        // exactly the 24 families, nothing else
        let total: usize = model.rows().len();
        assert_eq!(total, n + m_x + 13 * cells + 9 * n * cells);
    }

    #[test]
    fn single_cell_model_pins_everything() {
        let objects = vec![ObjectSpec::new(1, 1.0, 2.0, 3.0)];
        let inst = ProblemInstance::new(ShelfGrid::new(1, 1), objects, 10.0).unwrap();
        let model = build_model(&inst);
        let arr = Arrangement::from_pairs([(1, Cell::new(1, 1))]);
        let point = feasible_point(&inst, &arr).unwrap();
        let report = verify_solution(&model, &point).unwrap();
        assert!(report.is_feasible(), "violations: {:?}", report.violations);
        assert_eq!(report.objective, 0.0);
        // the object family forces x_1_1_1 = 1
        let row = model.rows().iter().find(|r| r.name == "object_1").unwrap();
        assert_eq!(row.cmp, Cmp::Eq);
        assert_eq!(row.rhs, 1.0);
    }

    #[test]
    fn feasible_point_round_trips_the_surrogate_value() {
        let inst = small_instance();
        let model = build_model(&inst);
        let arr = Arrangement::from_pairs([(1, Cell::new(1, 1)), (2, Cell::new(1, 2))]);
        let point = feasible_point(&inst, &arr).unwrap();
        let report = verify_solution(&model, &point).unwrap();
        assert!(report.is_feasible(), "violations: {:?}", report.violations);
        let expected = evaluate_surrogate(&inst, &arr).unwrap().expected_cost;
        assert!((report.objective - expected).abs() <= 1e-9);
    }

    #[test]
    fn double_occupancy_violates_the_position_family() {
        let inst = small_instance();
        let model = build_model(&inst);
        let arr = Arrangement::from_pairs([(1, Cell::new(1, 1)), (2, Cell::new(1, 2))]);
        let mut point = feasible_point(&inst, &arr).unwrap();
        // teleport object 2 onto object 1's cell without touching a
        point.insert("x_2_1_2".into(), 0.0);
        point.insert("x_2_1_1".into(), 1.0);
        let report = verify_solution(&model, &point).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.name.starts_with("position_") && v.kind == ViolationKind::Constraint));
    }

    #[test]
    fn all_zero_assignment_violates_the_object_family() {
        let inst = small_instance();
        let model = build_model(&inst);
        let point: BTreeMap<String, f64> =
            model.variable_names().map(|n| (n.to_string(), 0.0)).collect();
        let report = verify_solution(&model, &point).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.name.starts_with("object_") && v.kind == ViolationKind::Constraint));
    }

    #[test]
    fn missing_variable_is_an_error() {
        let inst = small_instance();
        let model = build_model(&inst);
        let point = BTreeMap::new();
        assert!(matches!(
            verify_solution(&model, &point),
            Err(LpError::MissingVariable(_))
        ));
    }

    #[test]
    fn fractional_binaries_are_flagged() {
        let inst = small_instance();
        let model = build_model(&inst);
        let arr = Arrangement::from_pairs([(1, Cell::new(1, 1)), (2, Cell::new(2, 1))]);
        let mut point = feasible_point(&inst, &arr).unwrap();
        point.insert("x_1_1_1".into(), 0.5);
        let report = verify_solution(&model, &point).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.name == "x_1_1_1" && v.kind == ViolationKind::Integrality));
    }

    #[test]
    fn lp_text_is_deterministic() {
        let inst = small_instance();
        assert_eq!(lp_text(&inst), lp_text(&inst));
    }

    #[test]
    fn solution_files_parse_name_value_lines() {
        let parsed = parse_solution("# objective 3\n x_1_1_1 1\n y_1_1_1 0.5\n\n").unwrap();
        assert_eq!(parsed["x_1_1_1"], 1.0);
        assert_eq!(parsed["y_1_1_1"], 0.5);
        assert!(parse_solution("x_1_1_1 one").is_err());
        assert!(parse_solution("x_1_1_1 1 2").is_err());
    }
}

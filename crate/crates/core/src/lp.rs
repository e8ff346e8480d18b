//! Exact rational linear programming.
//!
//! Two-phase dense-tableau simplex with Bland's rule. Every variable is
//! nonnegative; constraints are `expr (= | >= | <=) constant`; the objective
//! is maximized.

use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
        }
    }

    fn flipped(self) -> Self {
        match self {
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
            Relation::Le => Relation::Ge,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        })
    }
}

pub type LinearExpr = Vec<(VarId, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinearExpr,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    variables: Vec<String>,
    constraints: Vec<Constraint>,
    objective: LinearExpr,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("variable #{index} used in `{context}` is not declared")]
    UndeclaredVariable { index: usize, context: String },
    #[error("assignment has {found} values for {expected} variables")]
    AssignmentArity { expected: usize, found: usize },
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a nonnegative variable.
    pub fn add_var(&mut self, name: impl Into<String>) -> VarId {
        self.variables.push(name.into());
        VarId(self.variables.len() - 1)
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, expr: LinearExpr, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            name: name.into(),
            expr,
            relation,
            rhs,
        });
    }

    pub fn set_objective(&mut self, expr: LinearExpr) {
        self.objective = expr;
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v == name).map(VarId)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &LinearExpr {
        &self.objective
    }

    pub fn check_well_formed(&self) -> Result<(), LpError> {
        let n = self.variables.len();
        let bad = |expr: &LinearExpr, ctx: &str| {
            expr.iter().find(|(v, _)| v.0 >= n).map(|(v, _)| LpError::UndeclaredVariable {
                index: v.0,
                context: ctx.to_string(),
            })
        };
        if let Some(e) = bad(&self.objective, "objective") {
            return Err(e);
        }
        for c in &self.constraints {
            if let Some(e) = bad(&c.expr, &c.name) {
                return Err(e);
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, expr: &LinearExpr, assignment: &[Rational]) -> Rational {
        expr.iter().fold(Rational::zero(), |acc, (v, c)| acc + c * &assignment[v.0])
    }

    /// CPLEX-style LP text, for cross-checking with external solvers.
    /// Coefficients are printed as decimals, so the dump is approximate.
    pub fn to_lp_text(&self) -> String {
        let name = |i: usize| sanitize(&self.variables[i]);
        let terms = |expr: &LinearExpr| {
            let mut s = String::new();
            for (v, c) in expr {
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                write!(s, " {sign} {} {}", to_f64(&c.abs()), name(v.0)).unwrap();
            }
            if s.is_empty() {
                s.push_str(" 0");
            }
            s
        };
        let mut out = String::from("Maximize\n");
        writeln!(out, " obj:{}", terms(&self.objective)).unwrap();
        out.push_str("Subject To\n");
        for c in &self.constraints {
            writeln!(out, " {}:{} {} {}", sanitize(&c.name), terms(&c.expr), c.relation, to_f64(&c.rhs)).unwrap();
        }
        out.push_str("End\n");
        out
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub assignment: Vec<Rational>,
    pub value: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn solution(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// A constraint, or a variable's nonnegativity, that an assignment breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpViolation {
    pub constraint: String,
    pub lhs: Rational,
    pub relation: Relation,
    pub rhs: Rational,
}

impl fmt::Display for LpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {} does not hold", self.constraint, self.lhs, self.relation, self.rhs)
    }
}

/// Exact satisfaction check of every constraint and every nonnegativity bound.
pub fn check_solution(prog: &LinearProgram, assignment: &[Rational]) -> Result<Vec<LpViolation>, LpError> {
    prog.check_well_formed()?;
    if assignment.len() != prog.variables.len() {
        return Err(LpError::AssignmentArity {
            expected: prog.variables.len(),
            found: assignment.len(),
        });
    }
    let mut out = Vec::new();
    for (i, x) in assignment.iter().enumerate() {
        if x.is_negative() {
            out.push(LpViolation {
                constraint: format!("nonneg[{}]", prog.variables[i]),
                lhs: x.clone(),
                relation: Relation::Ge,
                rhs: Rational::zero(),
            });
        }
    }
    for c in &prog.constraints {
        let lhs = prog.evaluate(&c.expr, assignment);
        if !c.relation.holds(&lhs, &c.rhs) {
            out.push(LpViolation {
                constraint: c.name.clone(),
                lhs,
                relation: c.relation,
                rhs: c.rhs.clone(),
            });
        }
    }
    Ok(out)
}

struct Tableau {
    /// rows of `[coefficients..., rhs]`
    rows: Vec<Vec<Rational>>,
    /// reduced costs `c_B B^-1 A - c` followed by the objective value
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// columns allowed to enter the basis
    active: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=w).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let d = &f * &pivot_row[j];
                row[j] -= d;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Sets the cost row for maximizing `c` and prices out the basis.
    fn set_objective(&mut self, c: &[Rational]) {
        let w = self.width();
        let mut cost: Vec<Rational> = (0..=w)
            .map(|j| if j < c.len() { -c[j].clone() } else { Rational::zero() })
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            if b < c.len() && !c[b].is_zero() {
                for (k, a) in cost.iter_mut().zip(&self.rows[i]) {
                    if !a.is_zero() {
                        *k += &c[b] * a;
                    }
                }
            }
        }
        self.cost = cost;
    }

    /// Runs Bland's rule to optimality. Returns false when unbounded.
    fn optimize(&mut self) -> bool {
        let w = self.width();
        loop {
            let Some(enter) = (0..self.active).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[w] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

pub fn solve_lp(prog: &LinearProgram) -> Result<LpOutcome, LpError> {
    prog.check_well_formed()?;
    let n = prog.variables.len();

    // normalize rows to nonnegative right-hand sides
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = prog
        .constraints
        .iter()
        .map(|c| {
            let mut a = vec![Rational::zero(); n];
            for (v, q) in &c.expr {
                a[v.0] += q;
            }
            if c.rhs.is_negative() {
                (a.into_iter().map(|x| -x).collect(), c.relation.flipped(), -c.rhs.clone())
            } else {
                (a, c.relation, c.rhs.clone())
            }
        })
        .collect();
    // drop empty rows that trivially hold, detect empty rows that never do
    let mut kept = Vec::with_capacity(rows.len());
    for (a, rel, b) in rows.drain(..) {
        if a.iter().all(|x| x.is_zero()) {
            if !rel.holds(&Rational::zero(), &b) {
                return Ok(LpOutcome::Infeasible);
            }
        } else {
            kept.push((a, rel, b));
        }
    }
    let rows = kept;
    let m = rows.len();

    let slack_count = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let art_count = rows.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let art_start = n + slack_count;
    let w = art_start + art_count;

    let mut tab_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, art_start);
    for (coef, rel, b) in rows {
        let mut row = coef;
        row.resize(w + 1, Rational::zero());
        row[w] = b;
        match rel {
            Relation::Le => {
                row[s] = Rational::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rational::one();
                s += 1;
                row[a] = Rational::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = Rational::one();
                basis.push(a);
                a += 1;
            }
        }
        tab_rows.push(row);
    }
    let mut t = Tableau {
        rows: tab_rows,
        cost: vec![Rational::zero(); w + 1],
        basis,
        active: w,
    };

    if art_count > 0 {
        let mut phase1 = vec![Rational::zero(); w];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -Rational::one();
        }
        t.set_objective(&phase1);
        t.optimize();
        if t.cost[w].is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // drive zero-level artificials out; rows with no other support are redundant
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        t.active = art_start;
    }

    let mut c = vec![Rational::zero(); n];
    for (v, q) in &prog.objective {
        c[v.0] += q;
    }
    t.set_objective(&c);
    if !t.optimize() {
        return Ok(LpOutcome::Unbounded);
    }
    let mut assignment = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            assignment[b] = t.rows[i][w].clone();
        }
    }
    let value = prog.evaluate(&prog.objective, &assignment);
    debug_assert_eq!(value, t.cost[w]);
    Ok(LpOutcome::Optimal(LpSolution { assignment, value }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn one_var(rhs: i64) -> LinearProgram {
        let mut p = LinearProgram::new();
        let x = p.add_var("x");
        p.add_constraint("cap", vec![(x, int(1))], Relation::Le, int(rhs));
        p.set_objective(vec![(x, int(1))]);
        p
    }

    #[test]
    fn trivial_programs() {
        let out = solve_lp(&one_var(1)).unwrap();
        let s = out.solution().unwrap();
        assert_eq!(s.assignment, vec![int(1)]);
        assert_eq!(s.value, int(1));
        assert_eq!(solve_lp(&one_var(-1)).unwrap(), LpOutcome::Infeasible);

        let mut p = LinearProgram::new();
        let x = p.add_var("x");
        p.set_objective(vec![(x, int(1))]);
        assert_eq!(solve_lp(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn undeclared_variable_is_malformed() {
        let mut p = LinearProgram::new();
        p.add_var("x");
        p.set_objective(vec![(VarId(3), int(1))]);
        assert!(matches!(solve_lp(&p), Err(LpError::UndeclaredVariable { index: 3, .. })));
    }

    #[test]
    fn equalities_and_redundancy() {
        // x + y = 1 twice, x - y >= 1/3, maximize 2y + x
        let mut p = LinearProgram::new();
        let x = p.add_var("x");
        let y = p.add_var("y");
        p.add_constraint("sum", vec![(x, int(1)), (y, int(1))], Relation::Eq, int(1));
        p.add_constraint("sum_again", vec![(x, int(2)), (y, int(2))], Relation::Eq, int(2));
        p.add_constraint("gap", vec![(x, int(1)), (y, int(-1))], Relation::Ge, frac(1, 3));
        p.set_objective(vec![(x, int(1)), (y, int(2))]);
        let s = solve_lp(&p).unwrap().solution().cloned().unwrap();
        assert_eq!(s.assignment, vec![frac(2, 3), frac(1, 3)]);
        assert_eq!(s.value, frac(4, 3));
        assert!(check_solution(&p, &s.assignment).unwrap().is_empty());
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x <= -2 means x >= 2; minimize x
        let mut p = LinearProgram::new();
        let x = p.add_var("x");
        p.add_constraint("floor", vec![(x, int(-1))], Relation::Le, int(-2));
        p.set_objective(vec![(x, int(-1))]);
        assert_eq!(solve_lp(&p).unwrap().solution().unwrap().assignment, vec![int(2)]);
    }

    #[test]
    fn check_solution_names_violations() {
        let p = one_var(1);
        let v = check_solution(&p, &[int(-1)]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].constraint, "nonneg[x]");
        let v = check_solution(&p, &[int(2)]).unwrap();
        assert_eq!(v[0].constraint, "cap");
        assert!(matches!(check_solution(&p, &[]), Err(LpError::AssignmentArity { .. })));
    }

    #[test]
    fn lp_text_dump() {
        let text = one_var(1).to_lp_text();
        assert!(text.starts_with("Maximize\n obj: + 1 x\nSubject To\n cap: + 1 x <= 1\n"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        let mut p = LinearProgram::new();
        let x: Vec<VarId> = (0..4).map(|i| p.add_var(format!("x{i}"))).collect();
        p.add_constraint(
            "a",
            vec![(x[0], frac(1, 4)), (x[1], int(-60)), (x[2], frac(-1, 25)), (x[3], int(9))],
            Relation::Le,
            int(0),
        );
        p.add_constraint(
            "b",
            vec![(x[0], frac(1, 2)), (x[1], int(-90)), (x[2], frac(-1, 50)), (x[3], int(3))],
            Relation::Le,
            int(0),
        );
        p.add_constraint("c", vec![(x[2], int(1))], Relation::Le, int(1));
        p.set_objective(vec![(x[0], frac(3, 4)), (x[1], int(-150)), (x[2], frac(1, 50)), (x[3], int(-6))]);
        assert_eq!(solve_lp(&p).unwrap().solution().unwrap().value, frac(1, 20));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=3).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn optimal_assignments_are_exactly_feasible_and_deterministic(
            rows in prop::collection::vec((prop::collection::vec(small_rational(), 3), 0usize..3, small_rational()), 0..6),
            obj in prop::collection::vec(small_rational(), 3),
        ) {
            let mut p = LinearProgram::new();
            let vs: Vec<VarId> = (0..3).map(|i| p.add_var(format!("x{i}"))).collect();
            for (i, (coef, rel, rhs)) in rows.into_iter().enumerate() {
                let rel = [Relation::Eq, Relation::Ge, Relation::Le][rel];
                p.add_constraint(format!("r{i}"), vs.iter().copied().zip(coef).collect(), rel, rhs);
            }
            // keep it bounded
            p.add_constraint("box", vs.iter().map(|v| (*v, int(1))).collect(), Relation::Le, int(10));
            p.set_objective(vs.iter().copied().zip(obj).collect());
            let out = solve_lp(&p).unwrap();
            prop_assert_ne!(out.status(), LpStatus::Unbounded);
            if let LpOutcome::Optimal(s) = &out {
                prop_assert!(check_solution(&p, &s.assignment).unwrap().is_empty());
                prop_assert_eq!(&p.evaluate(p.objective(), &s.assignment), &s.value);
            }
            prop_assert_eq!(solve_lp(&p).unwrap(), out);
        }
    }
}

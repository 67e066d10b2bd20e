//! 3-CNF formulas restricted to clauses over three distinct variables.

use std::fmt;

use thiserror::Error;

/// Default variable limit for [`sat_brute_force`].
pub const DEFAULT_MAX_BRUTE_FORCE_VARS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid token {token:?} on line {line}")]
    InvalidToken { line: usize, token: String },
    #[error("clause {clause} has {len} literals, expected 3")]
    ClauseSizeNot3 { clause: usize, len: usize },
    #[error("clause {clause} mentions variable {variable} more than once")]
    DuplicateVariableInClause { clause: usize, variable: usize },
    #[error("variable {variable} is outside 1..={num_vars}")]
    VariableOutOfRange { variable: usize, num_vars: usize },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("formula needs at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("formula has no clauses")]
    Empty,
    #[error("assignment covers {got} variables, formula has {expected}")]
    IncompleteAssignment { expected: usize, got: usize },
    #[error("{num_vars} variables exceed the brute-force limit of {limit}")]
    TooManyVariables { num_vars: usize, limit: usize },
}

/// A variable (1-based) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    variable: usize,
    negated: bool,
}

impl Literal {
    /// Panics if `variable` is zero.
    pub fn new(variable: usize, negated: bool) -> Self {
        assert!(variable >= 1, "variables are 1-based");
        Self { variable, negated }
    }

    pub fn positive(variable: usize) -> Self {
        Self::new(variable, false)
    }

    pub fn negative(variable: usize) -> Self {
        Self::new(variable, true)
    }

    /// DIMACS encoding: `3` is x3, `-3` is ¬x3. Zero has no literal.
    pub fn from_dimacs(code: i64) -> Option<Self> {
        if code == 0 {
            return None;
        }
        let variable = usize::try_from(code.unsigned_abs()).ok()?;
        Some(Self::new(variable, code < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.variable as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn variable(self) -> usize {
        self.variable
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    /// Truth value of the literal when its variable is set to `value`.
    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.variable)
        } else {
            write!(f, "x{}", self.variable)
        }
    }
}

/// Three literals over pairwise distinct variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause([Literal; 3]);

impl Clause {
    pub fn new(literals: [Literal; 3]) -> Result<Self, CnfError> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if literals[i].variable == literals[j].variable {
                    return Err(CnfError::DuplicateVariableInClause {
                        clause: 1,
                        variable: literals[i].variable,
                    });
                }
            }
        }
        Ok(Self(literals))
    }

    /// Builds a clause from DIMACS codes, e.g. `[1, -2, 3]`.
    pub fn from_dimacs(codes: [i64; 3]) -> Result<Self, CnfError> {
        let mut lits = [Literal::positive(1); 3];
        for (slot, &code) in lits.iter_mut().zip(codes.iter()) {
            *slot = Literal::from_dimacs(code).ok_or(CnfError::InvalidToken {
                line: 0,
                token: code.to_string(),
            })?;
        }
        Self::new(lits)
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.0
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.0.iter().any(|l| l.eval(a.value(l.variable)))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "({a} ∨ {b} ∨ {c})")
    }
}

/// A conjunction of [`Clause`]s over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if num_vars < 3 {
            return Err(CnfError::TooFewVariables(num_vars));
        }
        if clauses.is_empty() {
            return Err(CnfError::Empty);
        }
        for lit in clauses.iter().flat_map(|c| c.0.iter()) {
            if lit.variable > num_vars {
                return Err(CnfError::VariableOutOfRange {
                    variable: lit.variable,
                    num_vars,
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// DIMACS text: `p cnf n m` then one 0-terminated line per clause.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c.0 {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Total truth assignment over variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// `values[0]` is x1.
    pub fn from_values(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn from_fn(num_vars: usize, f: impl FnMut(usize) -> bool) -> Self {
        Self {
            values: (1..=num_vars).map(f).collect(),
        }
    }

    pub fn all(num_vars: usize, value: bool) -> Self {
        Self {
            values: vec![value; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Panics when `variable` is outside `1..=num_vars`.
    pub fn value(&self, variable: usize) -> bool {
        self.values[variable - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// DIMACS-style model line: `1 -2 3 ...`.
    pub fn to_dimacs_model(&self) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v {
                    format!("{}", i + 1)
                } else {
                    format!("-{}", i + 1)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; a `%` line ends the
/// clause section (SATLIB convention).
pub fn parse_dimacs(text: &str) -> Result<Formula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::MalformedHeader(format!(
                    "second header on line {}",
                    lineno + 1
                )));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| CnfError::MalformedHeader(line.to_string()))?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::MalformedHeader(
                "clause data before `p cnf` line".into(),
            ));
        };
        for token in line.split_whitespace() {
            let code: i64 = token.parse().map_err(|_| CnfError::InvalidToken {
                line: lineno + 1,
                token: token.to_string(),
            })?;
            let Some(lit) = Literal::from_dimacs(code) else {
                clauses.push(finish_clause(&current, clauses.len() + 1, num_vars)?);
                current.clear();
                continue;
            };
            if lit.variable > num_vars {
                return Err(CnfError::VariableOutOfRange {
                    variable: lit.variable,
                    num_vars,
                });
            }
            current.push(lit);
        }
    }

    let (num_vars, declared) =
        header.ok_or_else(|| CnfError::MalformedHeader("missing `p cnf` line".into()))?;
    if !current.is_empty() {
        // Unterminated trailing clause.
        clauses.push(finish_clause(&current, clauses.len() + 1, num_vars)?);
    }
    if clauses.len() != declared {
        return Err(CnfError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Formula::new(num_vars, clauses)
}

fn finish_clause(lits: &[Literal], index: usize, _num_vars: usize) -> Result<Clause, CnfError> {
    let lits: [Literal; 3] = lits.try_into().map_err(|_| CnfError::ClauseSizeNot3 {
        clause: index,
        len: lits.len(),
    })?;
    Clause::new(lits).map_err(|e| match e {
        CnfError::DuplicateVariableInClause { variable, .. } => {
            CnfError::DuplicateVariableInClause {
                clause: index,
                variable,
            }
        }
        other => other,
    })
}

pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool, CnfError> {
    if a.num_vars() != f.num_vars {
        return Err(CnfError::IncompleteAssignment {
            expected: f.num_vars,
            got: a.num_vars(),
        });
    }
    Ok(f.clauses.iter().all(|c| c.is_satisfied_by(a)))
}

/// Exhaustive satisfiability check.
///
/// Assignments are visited in lexicographic order with `false < true` and
/// x1 as the most significant position, so the returned model is the
/// lexicographically first one.
pub fn sat_brute_force(f: &Formula, max_vars: usize) -> Result<Option<Assignment>, CnfError> {
    let n = f.num_vars;
    if n > max_vars || n >= 64 {
        return Err(CnfError::TooManyVariables {
            num_vars: n,
            limit: max_vars.min(63),
        });
    }
    // Bit (n - v) of the counter holds x_v, so x1 is the most significant.
    let masks: Vec<(u64, u64)> = f
        .clauses
        .iter()
        .map(|c| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for l in c.0 {
                let bit = 1u64 << (n - l.variable);
                if l.negated {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            (pos, neg)
        })
        .collect();

    let found = (0..(1u64 << n)).find(|&bits| {
        masks
            .iter()
            .all(|&(pos, neg)| bits & pos != 0 || !bits & neg != 0)
    });
    Ok(found.map(|bits| Assignment::from_fn(n, |v| bits >> (n - v) & 1 == 1)))
}

/// DPLL with unit propagation, branching on the lowest unassigned variable
/// (`false` first). Variables left open in the final model are set `false`.
pub fn sat_dpll(f: &Formula) -> Option<Assignment> {
    let mut values: Vec<Option<bool>> = vec![None; f.num_vars + 1];
    if dpll(&f.clauses, &mut values) {
        Some(Assignment::from_fn(f.num_vars, |v| {
            values[v].unwrap_or(false)
        }))
    } else {
        None
    }
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit(Literal),
    Open,
}

fn clause_state(c: &Clause, values: &[Option<bool>]) -> ClauseState {
    let mut unassigned = None;
    let mut open = 0;
    for &l in &c.0 {
        match values[l.variable] {
            Some(v) if l.eval(v) => return ClauseState::Satisfied,
            Some(_) => {}
            None => {
                open += 1;
                unassigned = Some(l);
            }
        }
    }
    match (open, unassigned) {
        (0, _) => ClauseState::Conflict,
        (1, Some(l)) => ClauseState::Unit(l),
        _ => ClauseState::Open,
    }
}

fn dpll(clauses: &[Clause], values: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        let mut all_sat = true;
        for c in clauses {
            match clause_state(c, values) {
                ClauseState::Satisfied => {}
                ClauseState::Conflict => {
                    undo(values, &trail);
                    return false;
                }
                ClauseState::Unit(l) => {
                    all_sat = false;
                    unit.get_or_insert(l);
                }
                ClauseState::Open => all_sat = false,
            }
        }
        if all_sat {
            return true;
        }
        match unit {
            Some(l) => {
                values[l.variable] = Some(!l.negated);
                trail.push(l.variable);
            }
            None => break,
        }
    }

    let branch_var = (1..values.len())
        .find(|&v| values[v].is_none())
        .expect("open clause implies an unassigned variable");
    for choice in [false, true] {
        values[branch_var] = Some(choice);
        if dpll(clauses, values) {
            return true;
        }
    }
    values[branch_var] = None;
    undo(values, &trail);
    false
}

fn undo(values: &mut [Option<bool>], trail: &[usize]) {
    for &v in trail {
        values[v] = None;
    }
}

//! Published component tables, one representative per symmetry orbit.
//!
//! A line reads `c1*T_ijkl = c2*U_pqrs = ... = value` with 1-based indices;
//! a comma before the last index marks a covariant derivative, as in
//! `S_12,3`.

use std::collections::BTreeMap;

use curvlab_expr::{parse_expr, zero_test, BigRational, EvalError, Expr, ParseError, Symbol, SymbolTable};

use crate::curvature::CurvatureBundle;

use crate::classify::ClassifyConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenEntry {
    /// 0-based index tuple.
    pub index: Vec<usize>,
    pub value: Expr,
}

/// Listed components of one tensor; everything not listed is claimed zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenTable {
    /// Name understood by [`CurvatureBundle::named`].
    pub tensor: String,
    pub entries: Vec<GoldenEntry>,
}

impl GoldenTable {
    pub fn substitute(&self, map: &BTreeMap<Symbol, Expr>) -> Result<GoldenTable, EvalError> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(GoldenEntry {
                    index: e.index.clone(),
                    value: e.value.substitute(map)?,
                })
            })
            .collect::<Result<_, EvalError>>()?;
        Ok(GoldenTable {
            tensor: self.tensor.clone(),
            entries,
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GoldenError {
    #[error("malformed component `{0}`")]
    Term(String),
    #[error("line has no value: `{0}`")]
    NoValue(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn parse_coefficient(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s {
        "" | "+" => return Some(BigRational::from_integer(1.into())),
        "-" => return Some(BigRational::from_integer((-1).into())),
        _ => {}
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, s),
    };
    let q = match body.split_once('/') {
        Some((n, d)) => BigRational::new(n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => BigRational::from_integer(body.trim().parse().ok()?),
    };
    Some(q * BigRational::from_integer(sign.into()))
}

/// Splits `-3/4*C.C_121424` into coefficient, tensor name and 0-based index.
fn parse_term(term: &str) -> Option<(BigRational, String, Vec<usize>)> {
    let term = term.trim();
    let (head, idx) = term.rsplit_once('_')?;
    let (coef, name) = match head.rsplit_once('*') {
        Some((c, n)) => (parse_coefficient(c)?, n.trim()),
        None => match head.strip_prefix('-') {
            Some(n) => (parse_coefficient("-")?, n.trim()),
            None => (parse_coefficient("")?, head.trim()),
        },
    };
    let nabla = idx.contains(',');
    let digits: String = idx.chars().filter(|c| *c != ',').collect();
    if name.is_empty() || digits.is_empty() {
        return None;
    }
    let index = digits
        .chars()
        .map(|c| c.to_digit(10).filter(|d| *d >= 1).map(|d| d as usize - 1))
        .collect::<Option<Vec<_>>>()?;
    let name = if nabla { format!("nabla{name}") } else { name.to_string() };
    Some((coef, name, index))
}

/// Parses one line into `(tensor, entry)` pairs.
pub fn parse_golden_line(line: &str, table: &SymbolTable) -> Result<Vec<(String, GoldenEntry)>, GoldenError> {
    let parts: Vec<&str> = line.split('=').collect();
    let Some((value, terms)) = parts.split_last().filter(|(_, t)| !t.is_empty()) else {
        return Err(GoldenError::NoValue(line.to_string()));
    };
    let value = parse_expr(value, table)?;
    terms
        .iter()
        .map(|t| {
            let (c, name, index) = parse_term(t).ok_or_else(|| GoldenError::Term(t.trim().to_string()))?;
            let value = value.scale(&c.recip());
            Ok((name, GoldenEntry { index, value }))
        })
        .collect()
}

/// Groups parsed lines by tensor, keeping the order of first appearance.
pub fn parse_tables(lines: &[&str], table: &SymbolTable) -> Result<Vec<GoldenTable>, GoldenError> {
    let mut out: Vec<GoldenTable> = Vec::new();
    for line in lines {
        for (name, entry) in parse_golden_line(line, table)? {
            match out.iter_mut().find(|t| t.tensor == name) {
                Some(t) => t.entries.push(entry),
                None => out.push(GoldenTable {
                    tensor: name,
                    entries: vec![entry],
                }),
            }
        }
    }
    Ok(out)
}

const SOM_RAYCHAUDHURI: &[&str] = &[
    "R_1212 = -a^2*r^2",
    "R_1313 = -a^2",
    "R_1323 = -a^3*r^2",
    "R_2323 = -a^2*r^2*(a^2*r^2 + 3)",
    "S_11 = S_33 = -2*a^2",
    "S_12 = -2*a^3*r^2",
    "S_22 = -2*(a^4*r^4 + a^2*r^2)",
    "R_1223,2 = -4*a^3*r^3",
    "R_1323,3 = -4*a^3*r",
    "R_2323,3 = -8*a^4*r^3",
    "S_12,3 = -S_13,2 = -4*a^3*r",
    "-1/2*S_22,3 = S_23,2 = 4*a^4*r^3",
    "C_1212 = -2/3*a^2*r^2",
    "-C_1313 = 1/2*C_1414 = C_3434 = 2*a^2/3",
    "C_2323 = -2/3*a^2*r^2*(a^2*r^2 + 2)",
    "-C_1323 = 1/2*C_1424 = 2/3*a^3*r^2",
    "C_2424 = 2/3*(2*a^4*r^4 + a^2*r^2)",
    "W_1212 = -7/6*a^2*r^2",
    "-1/7*W_1313 = -W_1414 = W_3434 = a^2/6",
    "W_2323 = -1/6*a^2*r^2*(7*a^2*r^2 + 17)",
    "1/7*W_1323 = W_1424 = -1/6*a^3*r^2",
    "W_2424 = -1/6*a^2*r^2*(a^2*r^2 - 1)",
    "K_1212 = -a^2*r^2",
    "-K_1313 = K_1414 = K_3434 = a^2",
    "-K_1323 = K_1424 = a^3*r^2",
    "K_2323 = -K_2424 = -a^2*r^2*(a^2*r^2 + 1)",
    "-R.R_122313 = R.R_132312 = 4*a^4*r^2",
    "-2*R.R_122323 = R.R_232312 = 8*a^5*r^4",
    "R.S_1212 = 4*a^4*r^2",
    "R.S_1313 = 4*a^4",
    "R.S_2212 = 8*a^5*r^4",
    "R.S_1323 = R.S_2313 = 4*a^5*r^2",
    "R.S_2323 = 4*a^6*r^4",
    "-R.C_122313 = R.C_132312 = -R.C_142412 = 2*a^4*r^2",
    "-2*R.C_122323 = R.C_232312 = -R.C_242412 = 4*a^5*r^4",
    "-R.C_143413 = 2*a^4",
    "-R.C_143423 = -R.C_243413 = 2*a^5*r^2",
    "-R.C_243423 = 2*a^6*r^4",
    "4*C.R_121424 = -C.R_122313 = 2*C.R_122414 = C.R_132312 = 8*a^4*r^2/3",
    "-2*C.R_122323 = 3/8*C.R_122424 = C.R_232312 = 16*a^5*r^4/3",
    "2*C.R_131434 = C.R_133414 = 4*a^4/3",
    "C.R_232434 = 2/3*a^4*r^2*(a^2*r^2 + 3)",
    "2*C.R_132434 = C.R_133424 = 2*C.R_142334 = C.R_233414 = 4*a^5*r^2/3",
    "C.R_233424 = 4*a^6*r^4/3 - 2*a^4*r^2",
    "3/8*C.S_1212 = a^4*r^2",
    "3/8*C.S_1313 = -3/8*C.S_1414 = 3/4*C.S_3434 = a^4",
    "3/8*C.S_1323 = -3/8*C.S_1424 = a^5*r^2",
    "3/8*C.S_2323 = a^6*r^4",
    "-3/4*C.S_2424 = a^4*r^2*(2*a^2*r^2 - 1)",
    "3/4*C.C_121424 = -3/4*C.C_122313 = 3/4*C.C_132312 = -3/4*C.C_142412 = -3/4*C.C_233424 = a^4*r^2",
    "-3/4*C.C_122323 = 3/4*C.C_122424 = 3/8*C.C_232312 = -3/8*C.C_242412 = a^5*r^4",
    "3/4*C.C_132434 = 3/4*C.C_142334 = -3/4*C.C_143423 = -3/4*C.C_243413 = a^5*r^2",
    "3/4*C.C_131434 = -3/4*C.C_143413 = a^4",
    "3/4*C.C_232434 = a^4*r^2*(a^2*r^2 + 1)",
    "-3/4*C.C_243423 = a^6*r^4",
    "-4*Q(g,R)_121424 = Q(g,R)_122313 = 4*Q(g,R)_122414 = -Q(g,R)_132312 = 4*a^2*r^2",
    "2*Q(g,R)_122323 = -Q(g,R)_232312 = 8*a^3*r^4",
    "-Q(g,R)_131434 = Q(g,R)_133414 = a^2",
    "-Q(g,R)_132434 = Q(g,R)_133424 = -Q(g,R)_142334 = Q(g,R)_233414 = a^3*r^2",
    "-Q(g,R)_232434 = Q(g,R)_233424 = a^2*r^2*(a^2*r^2 + 3)",
    "-Q(S,R)_122313 = Q(S,R)_132312 = 4*a^4*r^2",
    "-2*Q(S,R)_122323 = Q(S,R)_232312 = 8*a^5*r^4",
    "-Q(g,C)_121424 = Q(g,C)_122313 = -Q(g,C)_132312 = Q(g,C)_142412 = Q(g,C)_233424 = 2*a^2*r^2",
    "2*Q(g,C)_122323 = -2*Q(g,C)_122424 = -Q(g,C)_232312 = Q(g,C)_242412 = 4*a^3*r^4",
    "-Q(g,C)_232434 = 2*a^2*r^2*(a^2*r^2 + 1)",
    "Q(g,C)_243423 = 2*a^4*r^4",
    "-Q(g,C)_131434 = Q(g,C)_143413 = 2*a^2",
    "-Q(g,C)_132434 = -Q(g,C)_142334 = Q(g,C)_143423 = Q(g,C)_243413 = 2*a^3*r^2",
    "-1/2*Q(S,C)_121424 = -Q(S,C)_122313 = Q(S,C)_122414 = Q(S,C)_132312 = Q(S,C)_142412 = 4*a^4*r^2/3",
    "-2*Q(S,C)_122323 = -2*Q(S,C)_122424 = Q(S,C)_232312 = Q(S,C)_242412 = 8*a^5*r^4/3",
    "-1/2*Q(S,C)_131434 = Q(S,C)_133414 = Q(S,C)_143413 = 4*a^4/3",
    "-Q(S,C)_232434 = 4/3*a^4*r^2*(2*a^2*r^2 + 1)",
    "-1/2*Q(S,C)_132434 = Q(S,C)_133424 = -1/2*Q(S,C)_142334 = Q(S,C)_143423 = Q(S,C)_233414 = Q(S,C)_243413 = 4*a^5*r^2/3",
    "Q(S,C)_233424 = 4/3*a^4*r^2*(a^2*r^2 + 1)",
    "Q(S,C)_243423 = 4*a^6*r^4/3",
];

pub(super) fn som_raychaudhuri_tables(table: &SymbolTable) -> Vec<GoldenTable> {
    parse_tables(SOM_RAYCHAUDHURI, table).expect("built-in tables parse")
}

/// A component where the table and the computed tensor disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenMismatch {
    pub index: Vec<usize>,
    pub expected: Expr,
    pub actual: Expr,
    /// Whether the component appears in the table.
    pub listed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenReport {
    pub tensor: String,
    /// Listed orbit representatives.
    pub listed: usize,
    pub mismatches: Vec<GoldenMismatch>,
    /// Listed entries that contradict the tensor's symmetries or each other.
    pub conflicts: Vec<String>,
    /// The name is not a known tensor.
    pub unknown: bool,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        !self.unknown && self.mismatches.is_empty() && self.conflicts.is_empty()
    }
}

/// Expands the table over the computed tensor's symmetry orbits and
/// compares every component.
pub fn compare_golden(bundle: &CurvatureBundle, golden: &GoldenTable, cfg: &ClassifyConfig) -> GoldenReport {
    let mut report = GoldenReport {
        tensor: golden.tensor.clone(),
        listed: golden.entries.len(),
        mismatches: Vec::new(),
        conflicts: Vec::new(),
        unknown: false,
    };
    let Some(actual) = bundle.named(&golden.tensor) else {
        report.unknown = true;
        return report;
    };
    let table = bundle.metric().symbols();
    let sym = actual.symmetry().clone();
    let mut expected: BTreeMap<Vec<usize>, Expr> = BTreeMap::new();
    for entry in &golden.entries {
        let orbit = sym.orbit(&entry.index);
        if orbit.vanishes {
            report
                .conflicts
                .push(format!("{}{:?} is forced to vanish by symmetry", golden.tensor, entry.index));
            continue;
        }
        let sign = orbit.members.iter().find(|(m, _)| *m == entry.index).map_or(1, |(_, s)| *s);
        for (m, s) in &orbit.members {
            let v = if *s == sign { entry.value.clone() } else { -entry.value.clone() };
            match expected.get(m) {
                Some(old) if *old != v => report.conflicts.push(format!(
                    "{}{:?} listed as both {} and {}",
                    golden.tensor, m, old, v
                )),
                Some(_) => {}
                None => {
                    expected.insert(m.clone(), v);
                }
            }
        }
    }
    let listed: std::collections::BTreeSet<Vec<usize>> = expected.keys().cloned().collect();
    for orbit in sym.orbits(actual.dim(), actual.order()) {
        if orbit.vanishes {
            continue;
        }
        let idx = orbit.representative().to_vec();
        let want = expected.get(&idx).cloned().unwrap_or_else(Expr::zero);
        let have = actual.get(&idx).clone();
        let diff = &have - &want;
        if diff.is_zero() || zero_test(&diff, table, &cfg.zero).is_zero() {
            continue;
        }
        report.mismatches.push(GoldenMismatch {
            listed: listed.contains(&idx),
            index: idx,
            expected: want,
            actual: have,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sr_table() -> SymbolTable {
        SymbolTable::new(&["t", "phi", "r", "z"], &["a"]).unwrap()
    }

    #[test]
    fn coefficients_divide_the_value() {
        let t = sr_table();
        let parsed = parse_golden_line("-1/2*S_22,3 = S_23,2 = 4*a^4*r^3", &t).unwrap();
        assert_eq!(parsed[0].0, "nablaS");
        assert_eq!(parsed[0].1.index, vec![1, 1, 2]);
        assert_eq!(parsed[0].1.value.to_string(), "-8*a^4*r^3");
        assert_eq!(parsed[1].1.value.to_string(), "4*a^4*r^3");
        let q = parse_golden_line("-4*Q(g,R)_121424 = 4*a^2*r^2", &t).unwrap();
        assert_eq!(q[0].0, "Q(g,R)");
        assert_eq!(q[0].1.index, vec![0, 1, 0, 3, 1, 3]);
        assert_eq!(q[0].1.value.to_string(), "-a^2*r^2");
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let t = sr_table();
        assert!(parse_golden_line("R_1212", &t).is_err());
        assert!(parse_golden_line("R_12x2 = 1", &t).is_err());
        assert!(parse_golden_line("R_1212 = b", &t).is_err());
    }

    #[test]
    fn built_in_tables_cover_every_tensor() {
        let names: Vec<String> = som_raychaudhuri_tables(&sr_table()).into_iter().map(|t| t.tensor).collect();
        for n in ["R", "S", "nablaR", "nablaS", "C", "W", "K", "R.R", "R.S", "C.C", "Q(S,C)"] {
            assert!(names.iter().any(|m| m == n), "{n}");
        }
    }
}

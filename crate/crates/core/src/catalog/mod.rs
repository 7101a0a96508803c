//! Built-in metrics with their known component tables.

mod goldens;
mod profile;

use std::collections::BTreeMap;

use curvlab_expr::{parse_expr, Assumption, Expr, ParseError, Symbol, SymbolTable};

use crate::classify::{Decomposition, Ingredients};
use crate::metric::{MetricError, MetricSpec};

pub use goldens::{compare_golden, parse_golden_line, GoldenEntry, GoldenError, GoldenMismatch, GoldenReport, GoldenTable};
pub use profile::{
    godel_type_closed_forms, godel_type_conditions, Clause, ClosedForm, GodelProfile, ConditionReport,
};

/// Names addressable from the command line.
pub const NAMES: [&str; 4] = ["minkowski", "som-raychaudhuri", "godel", "godel-type"];

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}` (known: minkowski, som-raychaudhuri, godel, godel-type)")]
    Unknown(String),
    #[error("parameter `{0}` is not defined for this entry")]
    UnknownParameter(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("profile `{name}` depends on coordinate `{coordinate}`; only r is allowed")]
    ProfileCoordinate { name: String, coordinate: String },
    #[error("cannot parse `{text}`: {source}")]
    Parse { text: String, source: ParseError },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("substitution for `{0}` makes a component singular")]
    Singular(String),
}

/// A metric together with what is known about it.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub spec: MetricSpec,
    pub ingredients: Ingredients,
    pub goldens: Vec<GoldenTable>,
}

fn table(coords: &[&str], params: &[&str]) -> SymbolTable {
    let mut t = SymbolTable::new(coords, params).expect("distinct names");
    for p in params {
        t.assume(p, Assumption::Nonzero).expect("registered");
    }
    t
}

fn parse(text: &str, t: &SymbolTable) -> Expr {
    parse_expr(text, t).unwrap_or_else(|e| panic!("built-in expression `{text}`: {e}"))
}

fn parse_vec(items: &[&str], t: &SymbolTable) -> Vec<Expr> {
    items.iter().map(|s| parse(s, t)).collect()
}

/// Flat space of signature `(+, −, …, −)`.
pub fn minkowski(n: usize) -> Result<CatalogEntry, CatalogError> {
    let names: Vec<String> = if n == 4 {
        ["t", "x", "y", "z"].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    let t = SymbolTable::new(&names, &[] as &[String]).map_err(|_| CatalogError::Unknown("minkowski".into()))?;
    let entries = (0..n).map(|i| ((i, i), if i == 0 { Expr::one() } else { Expr::integer(-1) }));
    Ok(CatalogEntry {
        name: "minkowski".into(),
        description: format!("flat Minkowski space of dimension {n}"),
        spec: MetricSpec::from_lower(t, entries)?,
        ingredients: Ingredients::default(),
        goldens: Vec::new(),
    })
}

/// `ds² = (dt + a r² dφ)² − r² dφ² − dr² − dz²` on `(t, φ, r, z)`.
pub fn som_raychaudhuri() -> CatalogEntry {
    let t = table(&["t", "phi", "r", "z"], &["a"]);
    let profile = GodelProfile::new(parse("a*r^2", &t), parse("r", &t), Symbol::new("r"));
    let spec = profile.metric(t.clone()).expect("valid chart");
    let decompositions = vec![
        Decomposition::Chaki {
            alpha: parse("2*a^2", &t),
            beta: parse("-12*a^4*r^4", &t),
            gamma: parse("1", &t),
            pi: parse_vec(&["1/(a*r^2)", "1", "0", "-1/(sqrt(2)*a*r^2)"], &t),
            phi: parse_vec(&["4*a^3*r^2", "4*a^4*r^4", "0", "4*sqrt(2)*a^3*r^2"], &t),
        },
        Decomposition::DeGhosh {
            alpha: parse("2*a^2", &t),
            beta: parse("1", &t),
            gamma: parse("-1", &t),
            pi: parse_vec(&["0", "0", "0", "sqrt(2)*a"], &t),
            phi: parse_vec(&["2*a", "2*a^2*r^2", "0", "0"], &t),
        },
        Decomposition::Pseudo {
            alpha: parse("2/3*a^2", &t),
            beta: parse("1", &t),
            gamma: parse("-1", &t),
            pi: parse_vec(&["0", "0", "0", "sqrt(2/3)*a"], &t),
            e: vec![
                parse_vec(&["8/3*a^2", "8/3*a^3*r^2", "0", "0"], &t),
                parse_vec(&["8/3*a^3*r^2", "4/3*a^2*r^2*(1 + 2*a^2*r^2)", "0", "0"], &t),
                parse_vec(&["0", "0", "4/3*a^2", "0"], &t),
                parse_vec(&["0", "0", "0", "0"], &t),
            ],
        },
    ];
    let goldens = goldens::som_raychaudhuri_tables(&t);
    CatalogEntry {
        name: "som-raychaudhuri".into(),
        description: "Som-Raychaudhuri spacetime, a Gödel-type metric with h = a r^2, f = r".into(),
        spec,
        ingredients: Ingredients {
            decompositions,
            covectors: Vec::new(),
            profile: Some(profile),
        },
        goldens,
    }
}

/// `ds² = dt² + 2e^{mx} dt dy + ½e^{2mx} dy² − dx² − dz²` on `(x, y, z, t)`.
pub fn godel() -> CatalogEntry {
    let t = table(&["x", "y", "z", "t"], &["m"]);
    let g = |s: &str| parse(s, &t);
    let rows = vec![
        vec![g("-1"), g("0"), g("0"), g("0")],
        vec![g("0"), g("exp(m*x)^2/2"), g("0"), g("exp(m*x)")],
        vec![g("0"), g("0"), g("-1"), g("0")],
        vec![g("0"), g("exp(m*x)"), g("0"), g("1")],
    ];
    let spec = MetricSpec::new(t.clone(), rows).expect("symmetric");
    let r = Symbol::new("r");
    let mut pt = t.clone();
    pt.add_parameter("r").expect("fresh name");
    let profile = GodelProfile::new(
        parse("2*sqrt(2)/m*sinh(m*r/2)^2", &pt),
        parse("2/m*sinh(m*r/2)*cosh(m*r/2)", &pt),
        r,
    );
    CatalogEntry {
        name: "godel".into(),
        description: "Gödel spacetime in Cartesian coordinates".into(),
        spec,
        ingredients: Ingredients {
            decompositions: Vec::new(),
            covectors: vec![("omega".into(), parse_vec(&["0", "m*exp(m*x)", "0", "m"], &t))],
            profile: Some(profile),
        },
        goldens: Vec::new(),
    }
}

/// Identifiers in `text`, in order of appearance.
fn identifiers(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_alphanumeric() || ch == '_' {
            cur.push(ch);
        } else if !cur.is_empty() {
            if !cur.chars().next().is_some_and(|c| c.is_ascii_digit()) && !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out
}

/// `ds² = (dt + h(r) dφ)² − f(r)² dφ² − dr² − dz²` on `(t, φ, r, z)`.
/// Identifiers in `h` and `f` other than `r` become nonzero parameters.
pub fn godel_type(h: &str, f: &str) -> Result<CatalogEntry, CatalogError> {
    let coords = ["t", "phi", "r", "z"];
    let kernels = ["exp", "sinh", "cosh", "sin", "cos", "sqrt"];
    let mut params: Vec<String> = Vec::new();
    for (name, text) in [("h", h), ("f", f)] {
        for id in identifiers(text) {
            if id == "r" || kernels.contains(&id.as_str()) {
                continue;
            }
            if coords.contains(&id.as_str()) {
                return Err(CatalogError::ProfileCoordinate {
                    name: name.into(),
                    coordinate: id,
                });
            }
            if !params.contains(&id) {
                params.push(id);
            }
        }
    }
    let prefs: Vec<&str> = params.iter().map(String::as_str).collect();
    let t = table(&coords, &prefs);
    let p = |text: &str| {
        parse_expr(text, &t).map_err(|source| CatalogError::Parse {
            text: text.to_string(),
            source,
        })
    };
    let profile = GodelProfile::new(p(h)?, p(f)?, Symbol::new("r"));
    let spec = profile.metric(t)?;
    Ok(CatalogEntry {
        name: "godel-type".into(),
        description: format!("Gödel-type metric with h = {}, f = {}", profile.h, profile.f),
        spec,
        ingredients: Ingredients {
            profile: Some(profile),
            ..Ingredients::default()
        },
        goldens: Vec::new(),
    })
}

/// Looks up a catalog entry and applies `name=value` bindings. For
/// `godel-type` the bindings `h` and `f` give the profile.
pub fn lookup(name: &str, bindings: &[(String, String)]) -> Result<CatalogEntry, CatalogError> {
    let mut rest: Vec<(String, String)> = Vec::new();
    let entry = match name {
        "minkowski" => {
            let mut n = 4;
            for (k, v) in bindings {
                if k == "n" {
                    n = v.trim().parse().map_err(|_| CatalogError::MissingParameter("n".into()))?;
                } else {
                    rest.push((k.clone(), v.clone()));
                }
            }
            minkowski(n)?
        }
        "som-raychaudhuri" | "som_raychaudhuri" | "sr" => {
            rest = bindings.to_vec();
            som_raychaudhuri()
        }
        "godel" => {
            rest = bindings.to_vec();
            godel()
        }
        "godel-type" | "godel_type" => {
            let get = |key: &str| {
                bindings
                    .iter()
                    .find(|(k, _)| k == key)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| CatalogError::MissingParameter(key.into()))
            };
            let (h, f) = (get("h")?, get("f")?);
            rest = bindings.iter().filter(|(k, _)| k != "h" && k != "f").cloned().collect();
            godel_type(&h, &f)?
        }
        other => return Err(CatalogError::Unknown(other.to_string())),
    };
    specialize(entry, &rest)
}

/// Replaces parameters by values; `a=a` keeps `a` symbolic.
pub fn specialize(entry: CatalogEntry, bindings: &[(String, String)]) -> Result<CatalogEntry, CatalogError> {
    let table = entry.spec.symbols().clone();
    let mut map: BTreeMap<Symbol, Expr> = BTreeMap::new();
    for (k, v) in bindings {
        let sym = table
            .parameters()
            .iter()
            .find(|s| s.name() == k)
            .cloned()
            .ok_or_else(|| CatalogError::UnknownParameter(k.clone()))?;
        if v.trim() == k {
            continue;
        }
        let value = parse_expr(v, &table).map_err(|source| CatalogError::Parse {
            text: v.clone(),
            source,
        })?;
        map.insert(sym, value);
    }
    if map.is_empty() {
        return Ok(entry);
    }
    let coords: Vec<String> = table.coordinates().iter().map(|s| s.name().to_string()).collect();
    let params: Vec<String> = table
        .parameters()
        .iter()
        .filter(|s| !map.contains_key(*s))
        .map(|s| s.name().to_string())
        .collect();
    let mut reduced = SymbolTable::new(&coords, &params).expect("subset of a valid table");
    for p in &params {
        if let Some(a) = table.assumption(&Symbol::new(p)) {
            reduced.assume(p, a).expect("registered");
        }
    }
    let sub = |e: &Expr| e.substitute(&map).map_err(|_| CatalogError::Singular(e.to_string()));
    let rows = entry
        .spec
        .matrix()
        .iter()
        .map(|r| r.iter().map(sub).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let spec = MetricSpec::new(reduced, rows)?;
    let sub_vec = |v: &[Expr]| v.iter().map(sub).collect::<Result<Vec<_>, _>>();
    let decompositions = entry
        .ingredients
        .decompositions
        .iter()
        .map(|d| {
            Ok(match d {
                Decomposition::Chaki { alpha, beta, gamma, pi, phi } => Decomposition::Chaki {
                    alpha: sub(alpha)?,
                    beta: sub(beta)?,
                    gamma: sub(gamma)?,
                    pi: sub_vec(pi)?,
                    phi: sub_vec(phi)?,
                },
                Decomposition::DeGhosh { alpha, beta, gamma, pi, phi } => Decomposition::DeGhosh {
                    alpha: sub(alpha)?,
                    beta: sub(beta)?,
                    gamma: sub(gamma)?,
                    pi: sub_vec(pi)?,
                    phi: sub_vec(phi)?,
                },
                Decomposition::Pseudo { alpha, beta, gamma, pi, e } => Decomposition::Pseudo {
                    alpha: sub(alpha)?,
                    beta: sub(beta)?,
                    gamma: sub(gamma)?,
                    pi: sub_vec(pi)?,
                    e: e.iter().map(|r| sub_vec(r)).collect::<Result<_, _>>()?,
                },
            })
        })
        .collect::<Result<Vec<_>, CatalogError>>()?;
    let covectors = entry
        .ingredients
        .covectors
        .iter()
        .map(|(n, v)| Ok((n.clone(), sub_vec(v)?)))
        .collect::<Result<Vec<_>, CatalogError>>()?;
    let profile = match &entry.ingredients.profile {
        Some(p) => Some(GodelProfile::new(sub(&p.h)?, sub(&p.f)?, p.r.clone())),
        None => None,
    };
    let goldens = entry
        .goldens
        .iter()
        .map(|t| t.substitute(&map))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CatalogError::Singular(e.to_string()))?;
    Ok(CatalogEntry {
        name: entry.name,
        description: entry.description,
        spec,
        ingredients: Ingredients {
            decompositions,
            covectors,
            profile,
        },
        goldens,
    })
}

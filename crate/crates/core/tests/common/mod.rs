#![allow(dead_code)]

use std::collections::BTreeMap;

use curvlab::catalog::{self, compare_golden, godel_type_closed_forms, CatalogEntry, GoldenEntry, GoldenTable};
use curvlab::classify::{compatibility_tensor, ClassifyConfig};
use curvlab::expr::{eval_numeric, float_to_string, sample_assignment, Assignment, BigRational, Expr};
use curvlab::operators::{gaussian, kulkarni_nomizu, tachibana};
use curvlab::verify::tensor_zero_test;
use curvlab::{build_metric, CurvatureBundle, CurvatureKind, MetricField, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<(), String>;

pub fn bundle(entry: &CatalogEntry, cfg: &ClassifyConfig) -> CurvatureBundle {
    CurvatureBundle::new(build_metric(entry.spec.clone(), &cfg.zero).expect("nondegenerate"))
}

pub fn expect_zero(label: &str, t: &Tensor<Expr>, b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let v = tensor_zero_test(t, b.metric().symbols(), &cfg.zero);
    match v.counterexample {
        None => Ok(()),
        Some(w) => Err(format!("{label}: component {:?} = {}", w.index, w.value)),
    }
}

fn build(dim: usize, order: usize, f: impl Fn(&[usize]) -> Expr + Sync + Send) -> Tensor<Expr> {
    Tensor::from_fn(dim, order, f)
}

pub fn riemann_symmetries(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let r = b.riemann();
    let n = b.dimension();
    let skew12 = build(n, 4, |i| r.get(i) + r.get(&[i[1], i[0], i[2], i[3]]));
    let skew34 = build(n, 4, |i| r.get(i) + r.get(&[i[0], i[1], i[3], i[2]]));
    let pairs = build(n, 4, |i| r.get(i) - r.get(&[i[2], i[3], i[0], i[1]]));
    expect_zero("R_ijkl + R_jikl", &skew12, b, cfg)?;
    expect_zero("R_ijkl + R_ijlk", &skew34, b, cfg)?;
    expect_zero("R_ijkl - R_klij", &pairs, b, cfg)
}

pub fn first_bianchi(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let r = b.riemann();
    let t = build(b.dimension(), 4, |i| {
        let (p, j, k, l) = (i[0], i[1], i[2], i[3]);
        r.get(&[p, j, k, l]) + r.get(&[p, k, l, j]) + r.get(&[p, l, j, k])
    });
    expect_zero("first Bianchi", &t, b, cfg)
}

pub fn second_bianchi(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let d = b.nabla_riemann();
    let t = build(b.dimension(), 5, |i| {
        let (p, q, k, l, m) = (i[0], i[1], i[2], i[3], i[4]);
        d.get(&[p, q, k, l, m]) + d.get(&[p, q, l, m, k]) + d.get(&[p, q, m, k, l])
    });
    expect_zero("second Bianchi", &t, b, cfg)
}

pub fn metric_parallel(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let m = b.metric();
    let t = m.covariant_derivative(m.g()).map_err(|e| e.to_string())?;
    expect_zero("nabla g", &t, b, cfg)
}

pub fn weyl_trace_free(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let c = b.curvature(CurvatureKind::Weyl);
    for (x, y) in [(0, 3), (1, 2), (0, 2)] {
        let t = b.metric().contract(&c, x, y).map_err(|e| e.to_string())?;
        expect_zero(&format!("trace of C over slots {x},{y}"), &t, b, cfg)?;
    }
    Ok(())
}

pub fn gg_is_twice_g(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let g = b.metric().g();
    let gg = kulkarni_nomizu(g, g).map_err(|e| e.to_string())?;
    let t = gg.sub(&gaussian(g).scale(&Expr::integer(2))).map_err(|e| e.to_string())?;
    expect_zero("g^g - 2G", &t, b, cfg)
}

pub fn q_g_g_vanishes(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let g = b.metric().g();
    let t = tachibana(g, g).map_err(|e| e.to_string())?;
    expect_zero("Q(g,g)", &t, b, cfg)
}

pub fn metric_riemann_compatible(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Outcome {
    let t = compatibility_tensor(b, b.metric().g(), b.riemann());
    expect_zero("g Riemann-compatibility", &t, b, cfg)
}

fn to_f64(e: &Expr, at: &Assignment) -> Result<f64, String> {
    let v = eval_numeric(e, at, 60).map_err(|err| format!("evaluating {e}: {err}"))?;
    float_to_string(&v)
        .parse::<f64>()
        .map_err(|err| format!("converting {e}: {err}"))
}

fn invert(mut a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c] == 0.0 {
            return None;
        }
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for j in 0..n {
                    a[r][j] -= f * a[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
    }
    Some(inv)
}

/// Largest deviation of the symbolic Christoffel symbols from ones built
/// out of central differences of the metric, relative to the largest
/// symbol, over `points` random points.
pub fn christoffel_fd_error(m: &MetricField, seed: u64, points: usize) -> Result<f64, String> {
    let table = m.symbols();
    let n = m.dimension();
    let step: BigRational = "1/1000000000000000".parse().expect("rational literal");
    let step_f = 1e-15;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let at = sample_assignment(&mut rng, table);
        let gnum: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| to_f64(m.spec().component(i, j), &at)).collect())
            .collect::<Result<_, _>>()?;
        let ginv = invert(gnum).ok_or("singular metric at sample point")?;
        // dg[c][i][j] = ∂_c g_ij
        let mut dg = vec![vec![vec![0.0; n]; n]; n];
        for (c, coord) in table.coordinates().iter().enumerate() {
            let shift = |s: &BigRational| {
                let mut map = BTreeMap::new();
                map.insert(coord.clone(), Expr::symbol(coord) + Expr::one().scale(s));
                map
            };
            let (up, down) = (shift(&step), shift(&-step.clone()));
            for i in 0..n {
                for j in 0..n {
                    let g = m.spec().component(i, j);
                    let diff = g.substitute(&up).map_err(|e| e.to_string())? - g.substitute(&down).map_err(|e| e.to_string())?;
                    dg[c][i][j] = to_f64(&diff, &at)? / (2.0 * step_f);
                }
            }
        }
        let mut scale = 0.0f64;
        let mut err = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let fd: f64 = (0..n)
                        .map(|l| 0.5 * ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]))
                        .sum();
                    let exact = to_f64(m.gamma(k, i, j), &at)?;
                    scale = scale.max(exact.abs());
                    err = err.max((fd - exact).abs());
                }
            }
        }
        worst = worst.max(if scale > 0.0 { err / scale } else { err });
    }
    Ok(worst)
}

pub fn christoffel_fd(m: &MetricField, seed: u64) -> Outcome {
    let e = christoffel_fd_error(m, seed, 3)?;
    if e <= 1e-10 {
        Ok(())
    } else {
        Err(format!("finite-difference Christoffel deviation {e:e}"))
    }
}

/// Every invariant that holds for any metric.
pub fn all_properties(b: &CurvatureBundle, cfg: &ClassifyConfig) -> Vec<(&'static str, Outcome)> {
    vec![
        ("Riemann symmetries", riemann_symmetries(b, cfg)),
        ("first Bianchi", first_bianchi(b, cfg)),
        ("second Bianchi", second_bianchi(b, cfg)),
        ("nabla g = 0", metric_parallel(b, cfg)),
        ("C trace-free", weyl_trace_free(b, cfg)),
        ("g^g = 2G", gg_is_twice_g(b, cfg)),
        ("Q(g,g) = 0", q_g_g_vanishes(b, cfg)),
        ("g Riemann-compatible", metric_riemann_compatible(b, cfg)),
        ("finite differences", christoffel_fd(b.metric(), cfg.zero.seed)),
    ]
}

fn nonzero_coefficient<R: Rng>(rng: &mut R) -> String {
    let mut p: i64 = 0;
    while p == 0 {
        p = rng.gen_range(-6..=6);
    }
    let q: i64 = rng.gen_range(1..=5);
    format!("({p}/{q})")
}

/// `h = c1 r + c2 r² + c3 r³`, `f = d0 + d1 r + d2 r²` with random nonzero
/// rational coefficients.
pub fn random_profile<R: Rng>(rng: &mut R) -> (String, String) {
    let mut c = || nonzero_coefficient(rng);
    let h = format!("{}*r + {}*r^2 + {}*r^3", c(), c(), c());
    let f = format!("{} + {}*r + {}*r^2", c(), c(), c());
    (h, f)
}

/// Checks the curvature pipeline against the closed forms for a
/// Gödel-type entry: listed components agree and all others vanish.
pub fn closed_forms_agree(entry: &CatalogEntry, cfg: &ClassifyConfig) -> Outcome {
    let profile = entry.ingredients.profile.as_ref().ok_or("entry has no profile")?;
    let b = bundle(entry, cfg);
    let forms = godel_type_closed_forms(profile);
    for tensor in ["R", "S", "C"] {
        let table = GoldenTable {
            tensor: tensor.to_string(),
            entries: forms
                .iter()
                .filter(|c| c.tensor == tensor)
                .map(|c| GoldenEntry {
                    index: c.index.clone(),
                    value: c.value.clone(),
                })
                .collect(),
        };
        let report = compare_golden(&b, &table, cfg);
        if !report.passed() {
            let first = report
                .mismatches
                .first()
                .map(|m| format!("{tensor}{:?}: closed form {} vs {}", m.index, m.expected, m.actual));
            return Err(first.unwrap_or_else(|| format!("{tensor}: {:?}", report.conflicts)));
        }
    }
    Ok(())
}

pub fn godel_type(h: &str, f: &str) -> CatalogEntry {
    catalog::godel_type(h, f).expect("valid profile")
}

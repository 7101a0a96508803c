//! Deciding whether an expression vanishes.
//!
//! The canonical form settles every expression without kernel calls. For
//! the rest the numerator is evaluated at random points in high precision;
//! a value above tolerance proves the expression nonzero, agreement at all
//! points gives a probabilistic verdict.

use std::collections::BTreeMap;

use astro_float::BigFloat;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::EvalError;
use crate::eval::{
    bits_for_digits, eval_exact, eval_terms, float_to_string, parse_float, rational_to_float,
    Assignment, FloatEval,
};
use crate::expr::Expr;
use crate::poly::Poly;
use crate::sample::{mix_seed, sample_rational, stream_of};
use crate::symbol::{Assumption, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroTestConfig {
    /// Number of sample points.
    pub samples: usize,
    /// Working precision in decimal digits.
    pub digits: u32,
    /// A numerator is zero at a point when `|N| <= 10^-tolerance_exponent * scale`.
    pub tolerance_exponent: u32,
    pub seed: u64,
    /// Redraws allowed per sample when a point is singular.
    pub max_retries: usize,
}

impl Default for ZeroTestConfig {
    fn default() -> Self {
        ZeroTestConfig {
            samples: 8,
            digits: 50,
            tolerance_exponent: 30,
            seed: 0x5eed,
            max_retries: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroCertificate {
    /// The canonical form is zero.
    ProvedZero,
    /// At `witness` the value is `value`, well above tolerance.
    ProvedNonzero { witness: Assignment, value: String },
    /// Zero to tolerance at `samples` random points.
    ProbablyZero { samples: usize, digits: u32 },
}

impl ZeroCertificate {
    /// True unless the expression was shown to be nonzero.
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroCertificate::ProvedNonzero { .. })
    }

    pub fn is_proved(&self) -> bool {
        !matches!(self, ZeroCertificate::ProbablyZero { .. })
    }
}

/// Random assignment for every symbol of `table` and of `e`.
fn draw(rng: &mut ChaCha8Rng, table: &SymbolTable, e: &Expr) -> Assignment {
    let mut out = Assignment::new();
    for s in table.symbols().cloned().chain(e.symbols()) {
        if out.contains_key(&s) {
            continue;
        }
        let positive = table.assumption(&s) == Some(Assumption::Positive);
        out.insert(s, sample_rational(rng, positive));
    }
    out
}

struct Measured {
    value: BigFloat,
    scale: BigFloat,
}

fn measure(p: &Poly, asg: &Assignment, prec: usize) -> Result<Measured, EvalError> {
    let mut ev = FloatEval { assignment: asg, p: prec };
    let terms = eval_terms(&mut ev, p, &mut BTreeMap::new())?;
    let rm = astro_float::RoundingMode::ToEven;
    let mut value = BigFloat::from_i64(0, prec);
    let mut scale = BigFloat::from_i64(0, prec);
    for t in &terms {
        value = value.add(t, prec, rm);
        scale = scale.add(&t.abs(), prec, rm);
    }
    Ok(Measured { value, scale })
}

fn exceeds(x: &BigFloat, bound: &BigFloat) -> bool {
    matches!(x.abs().cmp(bound), Some(c) if c > 0)
}

fn max_one(x: BigFloat, prec: usize) -> BigFloat {
    let one = BigFloat::from_i64(1, prec);
    if exceeds(&x, &one) {
        x
    } else {
        one
    }
}

/// Tests `e` for identical vanishing.
pub fn zero_test(e: &Expr, table: &SymbolTable, cfg: &ZeroTestConfig) -> ZeroCertificate {
    if e.is_zero() {
        return ZeroCertificate::ProvedZero;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, stream_of(e)));
    let prec = bits_for_digits(cfg.digits);
    let tol = parse_float(&format!("1e-{}", cfg.tolerance_exponent), prec);
    let rm = astro_float::RoundingMode::ToEven;

    if e.is_kernel_free() {
        // A nonzero rational function; any point off its zero set is a witness.
        loop {
            let asg = draw(&mut rng, table, e);
            if let Ok(v) = eval_exact(e, &asg) {
                let f = rational_to_float(&v, prec);
                if !v.is_zero() && exceeds(&f, &tol) {
                    return ZeroCertificate::ProvedNonzero {
                        witness: asg,
                        value: float_to_string(&f),
                    };
                }
            }
        }
    }

    let den_guard = parse_float("1e-2", prec);
    let mut done = 0;
    for _ in 0..cfg.samples {
        for _ in 0..=cfg.max_retries {
            let asg = draw(&mut rng, table, e);
            let Ok(den) = measure(e.den(), &asg, prec) else { continue };
            let den_bound = den_guard.mul(&max_one(den.scale, prec), prec, rm);
            if !exceeds(&den.value, &den_bound) {
                continue;
            }
            let Ok(num) = measure(e.num(), &asg, prec) else { continue };
            let bound = tol.mul(&max_one(num.scale, prec), prec, rm);
            if exceeds(&num.value, &bound) {
                let v = num.value.div(&den.value, prec, rm);
                return ZeroCertificate::ProvedNonzero {
                    witness: asg,
                    value: float_to_string(&v),
                };
            }
            done += 1;
            break;
        }
    }
    ZeroCertificate::ProbablyZero {
        samples: done,
        digits: cfg.digits,
    }
}

/// Shorthand for `zero_test(..).is_zero()`.
pub fn is_zero(e: &Expr, table: &SymbolTable, cfg: &ZeroTestConfig) -> bool {
    zero_test(e, table, cfg).is_zero()
}

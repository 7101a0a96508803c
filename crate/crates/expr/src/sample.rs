//! Random sample points.
//!
//! [`GenericPoint`] gives every expression an exact rational value. Symbols
//! get random rationals; kernel calls are replaced by algebraically
//! consistent values: for each primitive argument `w`, `exp(w/L)` becomes a
//! free rational `u`, so `exp(k w/L) = u^k`, `sinh = (u^k - u^-k)/2`,
//! `cosh = (u^k + u^-k)/2`; trigonometric calls use a rational tangent of
//! the half angle. Identities such as `cosh^2 - sinh^2 = 1` then hold
//! exactly at the point.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EvalError;
use crate::eval::{eval_with, rational_sqrt, Assignment, Evaluator};
use crate::expr::Expr;
use crate::poly::{Atom, Kernel};
use crate::symbol::{Assumption, Symbol, SymbolTable};

/// Largest numerator or denominator of a sampled value.
pub const SAMPLE_BOUND: i64 = 10_000;

/// Mixes a seed with a stream identifier (splitmix64 finalizer).
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable within one build; used to derive per-expression streams.
pub fn stream_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// A rational `p/q` with `q <= 2500`, `p <= 4q` and magnitude in `[1/4, 4]`;
/// negative with probability 1/2 unless `positive`.
pub fn sample_rational<R: Rng>(rng: &mut R, positive: bool) -> BigRational {
    let q: i64 = rng.gen_range(1..=SAMPLE_BOUND / 4);
    let lo = (q + 3) / 4;
    let p: i64 = rng.gen_range(lo..=4 * q);
    let v = BigRational::new(p.into(), q.into());
    if !positive && rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Draws a value for every symbol of `table`, honouring assumptions.
pub fn sample_assignment<R: Rng>(rng: &mut R, table: &SymbolTable) -> Assignment {
    table
        .symbols()
        .map(|s| {
            let positive = table.assumption(s) == Some(Assumption::Positive);
            (s.clone(), sample_rational(rng, positive))
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Family {
    Hyperbolic,
    Trigonometric,
}

fn family(k: Kernel) -> Option<Family> {
    match k {
        Kernel::Exp | Kernel::Sinh | Kernel::Cosh => Some(Family::Hyperbolic),
        Kernel::Sin | Kernel::Cos => Some(Family::Trigonometric),
        Kernel::Sqrt => None,
    }
}

#[derive(Clone, Debug)]
struct Base {
    value: BigRational,
    lcm: BigInt,
}

/// An exact sample point that also assigns consistent kernel values.
#[derive(Clone, Debug)]
pub struct GenericPoint {
    values: Assignment,
    bases: BTreeMap<(Family, Expr), Base>,
    roots: BTreeMap<Atom, BigRational>,
}

impl GenericPoint {
    /// Samples symbols from `table` and registers the kernel calls
    /// occurring in `exprs`.
    pub fn sample<'a>(
        table: &SymbolTable,
        exprs: impl IntoIterator<Item = &'a Expr>,
        seed: u64,
    ) -> GenericPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = sample_assignment(&mut rng, table);
        GenericPoint::with_values(values, exprs, &mut rng)
    }

    /// Uses the given symbol values; kernel bases come from `rng`.
    pub fn with_values<'a, R: Rng>(
        values: Assignment,
        exprs: impl IntoIterator<Item = &'a Expr>,
        rng: &mut R,
    ) -> GenericPoint {
        let mut kernels = std::collections::BTreeSet::new();
        for e in exprs {
            kernels.extend(e.kernel_atoms());
        }
        let mut bases: BTreeMap<(Family, Expr), Base> = BTreeMap::new();
        let mut radicands = Vec::new();
        for atom in &kernels {
            let Atom::Call(k, arg) = atom else { continue };
            match family(*k) {
                Some(f) => {
                    let (c, w) = arg.split_content();
                    let entry = bases.entry((f, w)).or_insert(Base {
                        value: BigRational::zero(),
                        lcm: BigInt::one(),
                    });
                    entry.lcm = entry.lcm.lcm(c.denom());
                }
                None => radicands.push(atom.clone()),
            }
        }
        for base in bases.values_mut() {
            loop {
                let v = sample_rational(rng, true);
                if !v.is_one() {
                    base.value = v;
                    break;
                }
            }
        }
        let mut point = GenericPoint {
            values,
            bases,
            roots: BTreeMap::new(),
        };
        for atom in radicands {
            let Atom::Call(_, arg) = &atom else { continue };
            let v = match point.eval(arg).ok().and_then(|x| rational_sqrt(&x)) {
                Some(root) => root,
                None => sample_rational(rng, true),
            };
            point.roots.insert(atom, v);
        }
        point
    }

    pub fn values(&self) -> &Assignment {
        &self.values
    }

    pub fn eval(&self, e: &Expr) -> Result<BigRational, EvalError> {
        eval_with(&mut GenericEval { point: self }, e)
    }
}

struct GenericEval<'a> {
    point: &'a GenericPoint,
}

fn rpow(base: &BigRational, k: i64) -> BigRational {
    let n = k.unsigned_abs() as usize;
    let v = num_traits::pow(base.clone(), n);
    if k < 0 {
        v.recip()
    } else {
        v
    }
}

fn complex_pow(re: &BigRational, im: &BigRational, k: i64) -> (BigRational, BigRational) {
    let (mut r, mut i) = (BigRational::one(), BigRational::zero());
    let im = if k < 0 { -im.clone() } else { im.clone() };
    for _ in 0..k.unsigned_abs() {
        let nr = &r * re - &i * &im;
        let ni = &r * &im + &i * re;
        r = nr;
        i = ni;
    }
    (r, i)
}

impl Evaluator for GenericEval<'_> {
    type V = BigRational;
    fn constant(&mut self, c: &BigRational) -> Result<BigRational, EvalError> {
        Ok(c.clone())
    }
    fn symbol(&mut self, s: &Symbol) -> Result<BigRational, EvalError> {
        self.point
            .values
            .get(s)
            .cloned()
            .ok_or_else(|| EvalError::Unassigned(s.name().to_string()))
    }
    fn kernel(&mut self, k: Kernel, arg: &Expr, atom: &Atom) -> Result<BigRational, EvalError> {
        let Some(f) = family(k) else {
            if let Some(v) = self.point.roots.get(atom) {
                return Ok(v.clone());
            }
            let x = eval_with(self, arg)?;
            if x.is_negative() {
                return Err(EvalError::NegativeSqrt);
            }
            return rational_sqrt(&x).ok_or_else(|| EvalError::NotRational(k.name().to_string()));
        };
        let (c, w) = arg.split_content();
        let base = self
            .point
            .bases
            .get(&(f, w))
            .ok_or_else(|| EvalError::NotRational(format!("{}({arg})", k.name())))?;
        let scaled = &c * BigRational::from_integer(base.lcm.clone());
        if !scaled.is_integer() {
            return Err(EvalError::NotRational(format!("{}({arg})", k.name())));
        }
        let n = scaled
            .to_integer()
            .to_i64()
            .filter(|n| n.unsigned_abs() <= 4096)
            .ok_or(EvalError::NonFinite)?;
        let half = BigRational::new(1.into(), 2.into());
        Ok(match f {
            Family::Hyperbolic => {
                let t = rpow(&base.value, n);
                match k {
                    Kernel::Exp => t,
                    Kernel::Sinh => (&t - t.recip()) * &half,
                    _ => (&t + t.recip()) * &half,
                }
            }
            Family::Trigonometric => {
                let s = &base.value;
                let d = BigRational::one() + s * s;
                let re = (BigRational::one() - s * s) / &d;
                let im = (s + s) / &d;
                let (cr, ci) = complex_pow(&re, &im, n);
                if k == Kernel::Cos {
                    cr
                } else {
                    ci
                }
            }
        })
    }
    fn add(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div(&mut self, a: &BigRational, b: &BigRational) -> Result<BigRational, EvalError> {
        if b.is_zero() {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(a / b)
        }
    }
    fn zero(&mut self) -> BigRational {
        BigRational::zero()
    }
    fn one(&mut self) -> BigRational {
        BigRational::one()
    }
}

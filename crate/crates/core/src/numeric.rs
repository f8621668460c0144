//! Floating-point checks: evaluation of q-series and eta products at
//! points of the upper half plane, and residuals of modular equations.

use std::f64::consts::PI;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::double_eta::{legendre, ParamSet};
use crate::error::{Error, Result};
use crate::forms::{FormKind, Forms};
use crate::poly::ModEqPoly;
use crate::series::Series;

/// Default residual tolerance.
pub const TOLERANCE: f64 = 1e-8;

/// Terms of `j`, `gamma2`, `gamma3` used for evaluation; at `Im z >= 1`
/// the tail is far below double precision.
const FORM_TERMS: usize = 40;

fn qpow(z: Complex64, num: i64, den: i64) -> Complex64 {
    (Complex64::i() * 2.0 * PI * z * (num as f64 / den as f64)).exp()
}

/// `e^{2 pi i k/n}`.
pub fn root_of_unity(n: i64, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k.rem_euclid(n) as f64) / n as f64)
}

/// Dedekind eta by its product, `q^{1/24} prod (1 - q^n)`.
pub fn eta(z: Complex64) -> Complex64 {
    assert!(z.im > 0.0, "eta needs a point in the upper half plane");
    let q = qpow(z, 1, 1);
    let mut qn = q;
    let mut prod = Complex64::new(1.0, 0.0);
    while qn.norm() > 1e-18 {
        prod *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
    }
    qpow(z, 1, 24) * prod
}

/// Sum of the stored terms at `z` and the magnitude of the last nonzero one.
pub fn partial_sum<C: Coeff>(s: &Series<C>, z: Complex64) -> Result<(Complex64, f64)> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    for (n, c) in s.terms() {
        let c = c.to_f64().ok_or_else(|| Error::InvariantViolation("coefficient has no real value".into()))?;
        let term = qpow(z, n, s.denom()) * c;
        last = term.norm();
        sum += term;
    }
    Ok((sum, last))
}

/// Sums a series at `z`. A truncated series whose last nonzero term is
/// still visible next to the sum gives [`Error::ConvergenceWarning`].
pub fn eval_series<C: Coeff>(s: &Series<C>, z: Complex64) -> Result<Complex64> {
    let (sum, last) = partial_sum(s, z)?;
    if !s.is_exact() && last > 1e-15 * sum.norm() {
        return Err(Error::ConvergenceWarning { last, sum: sum.norm() });
    }
    Ok(sum)
}

/// One of the named forms at `z`, from its q-expansion.
pub fn eval_form(kind: FormKind, z: Complex64, terms: usize) -> Result<Complex64> {
    let forms = Forms::<BigRational>::new(());
    eval_series(&forms.by_kind(kind, terms), z)
}

/// A function whose modular equation is being checked, evaluated directly
/// from eta products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quotient {
    /// `(eta(z/p)/eta(z))^2`
    Weber { p: u64 },
    /// `(eta(z/p1) eta(z/p2)/(eta(z/(p1 p2)) eta(z)))^e`
    DoubleEta { p1: u64, p2: u64, e: u32 },
}

impl Quotient {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            Quotient::Weber { p } => {
                let w = eta(z / p as f64) / eta(z);
                w * w
            }
            Quotient::DoubleEta { p1, p2, e } => {
                let (a, b) = (p1 as f64, p2 as f64);
                let w = eta(z / a) * eta(z / b) / (eta(z / (a * b)) * eta(z));
                w.powi(e as i32)
            }
        }
    }
}

/// Seeded points with `Re z` in `[-0.5, 0.5)` and `Im z` in `[1.2, 2.0)`.
pub fn sample_points(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(1.2..2.0)))
        .collect()
}

/// Values of `j`, `gamma2`, `gamma3` at a point.
#[derive(Clone, Copy, Debug)]
pub struct FormValues {
    pub j: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
}

/// Evaluator for `J`, `G2`, `G3` that keeps the expansions around.
pub struct FormEvaluator {
    j: Series<BigRational>,
    g2: Series<BigRational>,
    g3: Series<BigRational>,
}

impl Default for FormEvaluator {
    fn default() -> Self {
        FormEvaluator::with_terms(FORM_TERMS)
    }
}

impl FormEvaluator {
    pub fn with_terms(n: usize) -> Self {
        let forms = Forms::<BigRational>::new(());
        FormEvaluator {
            j: forms.j(n),
            g2: forms.gamma2(n),
            g3: forms.gamma3(n),
        }
    }

    pub fn at(&self, z: Complex64) -> Result<FormValues> {
        Ok(FormValues {
            j: eval_series(&self.j, z)?,
            g2: eval_series(&self.g2, z)?,
            g3: eval_series(&self.g3, z)?,
        })
    }

    /// Values from the stored terms only, without the convergence check.
    pub fn at_truncated(&self, z: Complex64) -> Result<FormValues> {
        Ok(FormValues {
            j: partial_sum(&self.j, z)?.0,
            g2: partial_sum(&self.g2, z)?.0,
            g3: partial_sum(&self.g3, z)?.0,
        })
    }
}

/// `(ln |c|, sign)` without overflowing on huge integers.
fn big_log(c: &BigInt) -> (f64, f64) {
    let sign = if c.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let bits = c.bits();
    let log = if bits < 900 {
        Coeff::to_f64(c).unwrap_or(0.0).abs().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = c.magnitude().clone().into();
        let top: BigInt = top >> shift;
        Coeff::to_f64(&top).unwrap_or(0.0).ln() + shift as f64 * std::f64::consts::LN_2
    };
    (log, sign)
}

/// `|Phi(F)| / max |monomial|` at the given values, with monomials summed
/// in log scale so that huge coefficients do not overflow.
pub fn relative_residual(eq: &ModEqPoly<BigInt>, f: Complex64, v: &FormValues) -> f64 {
    let (lf, af) = (f.norm().ln(), f.arg());
    let (lj, aj) = (v.j.norm().ln(), v.j.arg());
    let (l2, a2) = (v.g2.norm().ln(), v.g2.arg());
    let (l3, a3) = (v.g3.norm().ln(), v.g3.arg());
    let mut terms = Vec::new();
    for (d, coeff) in eq.coeffs.iter().enumerate() {
        for (m, c) in coeff.terms() {
            let (lc, sc) = big_log(c);
            let (j, g2, g3, d) = (m.j as f64, m.g2 as f64, m.g3 as f64, d as f64);
            let log = lc + d * lf + j * lj + g2 * l2 + g3 * l3;
            let arg = d * af + j * aj + g2 * a2 + g3 * a3;
            terms.push((log, arg, sc));
        }
    }
    let Some(top) = terms.iter().map(|t| t.0).reduce(f64::max) else {
        return 0.0;
    };
    let sum: Complex64 = terms
        .iter()
        .map(|&(log, arg, sc)| Complex64::from_polar((log - top).exp() * sc, arg))
        .sum();
    sum.norm()
}

/// Outcome of evaluating an equation at `+f(z)` and `-f(z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest residual over the samples at `+f`.
    pub residual_plus: f64,
    pub residual_minus: f64,
    /// `+1` or `-1` when exactly that sign vanishes, `0` when both do.
    pub chosen_sign: i64,
}

/// Evaluates `eq` at `+-f(z)` over seeded points and reports which sign
/// makes it vanish.
pub fn check_equation(
    eq: &ModEqPoly<BigInt>,
    f: Quotient,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> Result<NumericReport> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let ev = FormEvaluator::default();
    let (mut plus, mut minus): (f64, f64) = (0.0, 0.0);
    for z in sample_points(samples, seed) {
        let v = ev.at(z)?;
        let x = f.eval(z);
        plus = plus.max(relative_residual(eq, x, &v));
        minus = minus.max(relative_residual(eq, -x, &v));
    }
    let chosen_sign = match (plus < tolerance, minus < tolerance) {
        (true, false) => 1,
        (false, true) => -1,
        (true, true) => 0,
        (false, false) => return Err(Error::NoVanishingSign { plus, minus }),
    };
    Ok(NumericReport {
        samples,
        seed,
        tolerance,
        residual_plus: plus,
        residual_minus: minus,
        chosen_sign,
    })
}

/// `sum_{nu=0}^{p2-1} (chi^{-nu} eps^e X(z + nu)^e)^k` with
/// `X = eta(p1 z) eta(z/p2) / (eta(z) eta(p1 z/p2))`, computed from eta
/// products. `params` fixes the roles of the two primes.
pub fn direct_sum_c2(params: &ParamSet, k: i64, z: Complex64) -> Complex64 {
    let (p1, p2) = (params.p1 as f64, params.p2 as f64);
    let e = params.e as i32;
    let eps = if params.p2 == 2 { 1.0 } else { legendre(params.p1 as i64, params.p2) as f64 };
    let mut tot = Complex64::new(0.0, 0.0);
    for nu in 0..params.p2 as i64 {
        let zz = z + nu as f64;
        let x = eta(zz * p1) * eta(zz / p2) / (eta(zz) * eta(zz * p1 / p2));
        let chi = root_of_unity(params.delta as i64, params.t * nu);
        tot += (chi * eps.powi(e) * x.powi(e)).powi(k as i32);
    }
    tot
}

/// `sum_{nu=1}^{p-1} (chi^mu C_nu^e)^k` for equal primes, where
/// `mu = -1/nu mod p` and
/// `C_nu = sqrt(p) eps zeta24^theta eta(pz)^2 / (eta(z) eta(z + nu/p))`.
pub fn direct_sum_c(params: &ParamSet, k: i64, z: Complex64) -> Complex64 {
    let p = params.p1 as i64;
    let e = params.e as i32;
    let mut tot = Complex64::new(0.0, 0.0);
    for nu in 1..p {
        let inv = (1..p).find(|x| (x * nu) % p == 1).expect("prime modulus");
        let mu = (-inv).rem_euclid(p);
        let v = (1 + mu * nu) / p;
        let (theta, eps) = if p == 2 {
            (0, 1.0)
        } else {
            (
                p * nu * (1 - mu * mu) + (-3 * p + 2 + v) * mu - 3 + 3 * p,
                legendre(-nu, p as u64) as f64,
            )
        };
        let pz = z * p as f64;
        let c = root_of_unity(24, theta) * (p as f64).sqrt() * eps * eta(pz) * eta(pz)
            / (eta(z) * eta(z + nu as f64 / p as f64));
        let chi = root_of_unity(params.delta as i64, -params.t * mu);
        tot += (chi * c.powi(e)).powi(k as i32);
    }
    tot
}

/// The full sum over the conjugates with poles at infinity, from eta
/// products: both prime families for distinct primes.
pub fn direct_sum(params: &ParamSet, k: i64, z: Complex64) -> Complex64 {
    if params.equal_primes() {
        direct_sum_c(params, k, z)
    } else {
        direct_sum_c2(params, k, z) + direct_sum_c2(&params.swapped(), k, z)
    }
}

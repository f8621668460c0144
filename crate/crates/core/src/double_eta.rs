//! Modular equations of double eta quotients
//! `w_{p1,p2}^e = (eta(z/p1) eta(z/p2) / (eta(z/(p1 p2)) eta(z)))^e`.
//!
//! Power sums are taken over the reciprocals of the negative-order
//! conjugates only, given in closed form as integer-index sieves of
//! `C12(w)^{ek}` (distinct primes) or of `1/P(q)^{ek}` (equal primes). The
//! reciprocal polynomial they determine is turned back into the equation
//! with [`reverse_and_descale`], scaling by `lambda = |Phi(0)|` so that all
//! intermediate power sums stay integral.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, SeriesCoeff};
use crate::error::{Error, Result};
use crate::forms::Forms;
use crate::kiepert::{is_prime, GUARD};
use crate::newton::{power_sums_to_monic, reverse_and_descale};
use crate::numeric::{check_equation, NumericReport, Quotient, TOLERANCE};
use crate::poly::{ModEqPoly, NormalPoly};
use crate::recognize::Recognizer;
use crate::series::Series;

/// Rows `(class of p1, class of p2, s, e, delta)`; the class of a prime is
/// itself for 2 and 3 and its residue mod 12 otherwise.
pub const TABLE: [(u64, u64, u32, u32, u32); 11] = [
    (2, 2, 24, 8, 3),
    (2, 5, 6, 2, 3),
    (2, 11, 12, 4, 3),
    (3, 3, 6, 3, 2),
    (3, 7, 2, 1, 2),
    (3, 11, 6, 3, 2),
    (5, 5, 3, 1, 3),
    (5, 11, 3, 1, 3),
    (7, 7, 2, 1, 2),
    (7, 11, 2, 1, 2),
    (11, 11, 6, 1, 6),
];

fn class(p: u64) -> u64 {
    if p <= 3 {
        p
    } else {
        p % 12
    }
}

/// Validated parameters of a double eta quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSet {
    pub p1: u64,
    pub p2: u64,
    pub s: u32,
    pub e: u32,
    pub delta: u32,
    /// `(p1 - 1)(p2 - 1)/24`
    pub r: Ratio<i64>,
    /// `r e = t / delta`
    pub t: i64,
    /// `(-1)^{delta + 1}`
    pub sign: i64,
    /// Degree of the equation in `F`.
    pub degree: usize,
}

impl ParamSet {
    pub fn n(&self) -> u64 {
        self.p1 * self.p2
    }

    pub fn equal_primes(&self) -> bool {
        self.p1 == self.p2
    }

    /// Same quotient with the roles of the primes exchanged.
    pub fn swapped(&self) -> ParamSet {
        ParamSet {
            p1: self.p2,
            p2: self.p1,
            ..self.clone()
        }
    }

    /// `r e`, the order of the pole of `w^e` at infinity.
    pub fn re(&self) -> Ratio<i64> {
        self.r * self.e as i64
    }

    /// `Phi(0)`: 1 for distinct primes, 16 for `p = 2`, `(-p)^{e(p-1)/2}`
    /// for an odd `p`.
    pub fn constant_term(&self) -> BigInt {
        if !self.equal_primes() {
            BigInt::from(1)
        } else if self.p1 == 2 {
            BigInt::from(16)
        } else {
            BigInt::from(-(self.p1 as i64)).pow(self.e * (self.p1 as u32 - 1) / 2)
        }
    }

    /// Scale applied to the reciprocal roots: `|Phi(0)|`.
    pub fn lambda(&self) -> BigInt {
        self.constant_term().abs()
    }

    /// F-degree of the coefficient of lowest order, `psi(N) - N - 1`.
    pub fn lowest_order_degree(&self) -> usize {
        self.degree - self.n() as usize - 1
    }

    pub fn label(&self, sign: i64) -> String {
        let base = if self.e == 1 {
            format!("w_{{{},{}}}", self.p1, self.p2)
        } else {
            format!("w_{{{},{}}}^{}", self.p1, self.p2, self.e)
        };
        if sign < 0 {
            format!("-{base}")
        } else {
            base
        }
    }
}

/// Looks up and validates the parameters for the pair; `e`, if given, must
/// match the tabulated exponent. When one prime is 2 it becomes `p2`,
/// otherwise `p1 <= p2`.
pub fn derive_params(p1: u64, p2: u64, e: Option<u32>) -> Result<ParamSet> {
    let unsupported = Error::UnsupportedPair(p1, p2);
    if !is_prime(p1) || !is_prime(p2) {
        return Err(Error::UnsupportedPair(p1, p2));
    }
    let row = TABLE.iter().find(|(c1, c2, ..)| {
        (class(p1) == *c1 && class(p2) == *c2) || (class(p2) == *c1 && class(p1) == *c2)
    });
    let Some(&(_, _, s, e_row, delta)) = row else {
        return Err(Error::UnsupportedPair(p1, p2));
    };
    if let Some(given) = e {
        if given != e_row {
            return Err(Error::ExponentMismatch {
                given,
                expected: e_row,
            });
        }
    }
    let (p1, p2) = if p1 == 2 && p2 != 2 {
        (p2, p1)
    } else if p2 == 2 {
        (p1, p2)
    } else {
        (p1.min(p2), p1.max(p2))
    };
    let prod = ((p1 - 1) * (p2 - 1)) as i64;
    // the rows are keyed mod 12, but 2 with p = 17 mod 24 has s = 3 and no
    // admissible exponent in the row
    if 24 / prod.gcd(&24) != s as i64 {
        return Err(unsupported);
    }
    if s % e_row != 0 || e_row == s {
        return Err(Error::InvariantViolation(format!("e = {e_row} must be a proper divisor of s = {s}")));
    }
    let r = Ratio::new(prod, 24);
    let te = r * (e_row as i64) * (delta as i64);
    if !te.is_integer() {
        return Err(Error::InvariantViolation(format!("r e delta = {te} is not an integer")));
    }
    let t = te.to_integer();
    let d = delta as u64;
    if (p1 * p2) % d != 1 % d {
        return Err(Error::InvariantViolation(format!("N = {} is not 1 mod {delta}", p1 * p2)));
    }
    if t.gcd(&(delta as i64)) != 1 {
        return Err(Error::InvariantViolation(format!("gcd(t = {t}, delta = {delta}) != 1")));
    }
    if (p1 + 1) % d != 0 || (p2 + 1) % d != 0 {
        return Err(Error::InvariantViolation(format!("primes are not -1 mod {delta}")));
    }
    let degree = if p1 == p2 {
        (p1 * p1 + p1) as usize
    } else {
        ((p1 + 1) * (p2 + 1)) as usize
    };
    Ok(ParamSet {
        p1,
        p2,
        s,
        e: e_row,
        delta,
        r,
        t,
        sign: if delta % 2 == 1 { 1 } else { -1 },
        degree,
    })
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut base = a as u128;
    let mut e = (p - 1) / 2;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Character sum over one family of conjugates, given `C12(w)^{ek}` in
/// the variable `w = q^{1/p2}`:
/// `p2 eps2^{ek} sum_{i = -k t p2' mod p2} c_i q^{(k t + i delta)/(delta p2)}`
/// with `p2' = (p2 + 1)/delta` and `eps2 = (p1 | p2)` (1 when `p2 = 2`).
pub fn sigma_c2_from_power<C: Coeff>(params: &ParamSet, k: i64, c12_power: &Series<C>) -> Series<C> {
    let ctx = c12_power.ctx();
    let (p1, p2) = (params.p1, params.p2 as i64);
    let d = params.delta as i64;
    let eps = if p2 == 2 { 1 } else { legendre(p1 as i64, p2 as u64) };
    let sgn = if (params.e as i64 * k).rem_euclid(2) == 1 { eps } else { 1 };
    let p2p = (p2 + 1) / d;
    let residue = (-k * params.t * p2p).rem_euclid(p2);
    let scale = C::from_i64(ctx, p2 * sgn);
    let terms: Vec<(i64, C)> = c12_power
        .terms()
        .filter(|(i, _)| (i - residue).rem_euclid(p2) == 0)
        .map(|(i, c)| (k * params.t + i * d, c.mul(&scale)))
        .collect();
    let trunc = c12_power.trunc_num().map(|tw| {
        let next = tw + 1 + (residue - tw - 1).rem_euclid(p2);
        k * params.t + next * d - 1
    });
    Series::from_terms(ctx, d * p2, &terms, trunc)
}

/// Sum over the conjugates attached to `p2` for `k != 0`, with `terms`
/// coefficients of `C12`.
pub fn sigma_c2_k<C: Coeff>(forms: &Forms<C>, params: &ParamSet, k: i64, terms: usize) -> Result<Series<C>> {
    if k == 0 {
        return Err(Error::ZeroPowerIndex);
    }
    let power = forms.c12(params.p1, params.p2, terms).pow(params.e as i64 * k)?;
    Ok(sigma_c2_from_power(params, k, &power))
}

/// `zeta24^zeta * sqrt(p)^half` as a rational, or an error when the pair
/// is not rational.
pub fn collapse_prefactor(zeta: i64, p: u64, half: i64) -> Result<BigRational> {
    if zeta.rem_euclid(12) != 0 || half.rem_euclid(2) != 0 {
        return Err(Error::PrefactorNotRational {
            zeta24: zeta,
            prime: p,
            half_power: half,
        });
    }
    let sign = if (zeta / 12).rem_euclid(2) == 0 { 1 } else { -1 };
    let pw = BigInt::from(p).pow((half / 2).unsigned_abs() as u32);
    let mag = if half >= 0 {
        BigRational::from_integer(pw)
    } else {
        BigRational::new(BigInt::from(1), pw)
    };
    Ok(mag * BigRational::from_integer(BigInt::from(sign)))
}

/// Exponent pair `(zeta24 exponent, power of sqrt(p))` of the prefactor in
/// the equal-prime sums.
pub fn prefactor_exponents(p: u64, k: i64) -> (i64, i64) {
    let p = p as i64;
    let odd = k.rem_euclid(2) == 1;
    match p {
        2 => (12 * k, 8 * k),
        3 if odd => (18 * k + 6, 3 * k + 1),
        3 => (18 * k, 3 * k),
        _ => {
            let mut z = 3 * k * (p - 1);
            let mut h = k;
            if odd {
                h += 1;
                if p % 4 == 3 {
                    z += 18;
                }
            }
            (z, h)
        }
    }
}

/// The equal-prime sum from `h_power = (P(q^p)^2/P(q))^{ek}` and
/// `c = P(q)^{-ek}`, both unit series in `q`, times `factor`. The factor
/// is merged with the prefactor first so that the product may be integral
/// even when the prefactor alone is not.
pub fn sigma_c_assemble<C: Coeff>(
    params: &ParamSet,
    k: i64,
    h_power: &Series<C>,
    c: &Series<C>,
    factor: &BigRational,
) -> Result<Series<C>> {
    let ctx = c.ctx();
    let p = params.p1;
    let pi = p as i64;
    let e = params.e as i64;
    let odd = k.rem_euclid(2) == 1;
    let inner = match p {
        2 => {
            let terms: Vec<(i64, C)> = c
                .terms()
                .map(|(i, x)| (i, if i.rem_euclid(2) == 0 { x.clone() } else { x.neg() }))
                .collect();
            Series::from_terms(ctx, c.denom(), &terms, c.trunc_num())
        }
        3 if !odd => c.sieve(3, -k).scale(&C::from_i64(ctx, 3)).sub(c),
        3 => {
            let terms: Vec<(i64, C)> = c
                .terms()
                .filter_map(|(i, x)| match (i + k).rem_euclid(3) {
                    0 => None,
                    1 => Some((i, x.neg())),
                    _ => Some((i, x.clone())),
                })
                .collect();
            Series::from_terms(ctx, c.denom(), &terms, c.trunc_num())
        }
        _ => {
            let pp = (pi * pi - 1) / 24;
            if !odd {
                c.sieve(pi, -k * pp).scale(&C::from_i64(ctx, pi)).sub(c)
            } else {
                let terms: Vec<(i64, C)> = c
                    .terms()
                    .filter_map(|(i, x)| match legendre(i + k * pp, p) {
                        0 => None,
                        1 => Some((i, x.clone())),
                        _ => Some((i, x.neg())),
                    })
                    .collect();
                Series::from_terms(ctx, c.denom(), &terms, c.trunc_num())
            }
        }
    };
    let (z, h) = prefactor_exponents(p, k);
    let pref = collapse_prefactor(z, p, h)? * factor;
    let pref = C::from_ratio(ctx, &pref).ok_or(Error::InadmissiblePrime(p))?;
    let lead = Ratio::new(e * k * (pi - 1), 12);
    Ok(h_power
        .mul(&inner)
        .scale(&pref)
        .shift(*lead.numer(), *lead.denom()))
}

/// `(P(q^p)^2 / P(q))` modulo `q^terms`.
fn h_unit<C: Coeff>(forms: &Forms<C>, p: u64, terms: usize) -> Series<C> {
    let pp = forms.pentagonal(p as i64, terms);
    pp.mul(&pp).mul(&forms.pentagonal_inv(terms))
}

/// Equal-prime sum over the conjugates for `k != 0`, with `terms`
/// coefficients of the unit series.
pub fn sigma_c_k<C: Coeff>(forms: &Forms<C>, params: &ParamSet, k: i64, terms: usize) -> Result<Series<C>> {
    if k == 0 {
        return Err(Error::ZeroPowerIndex);
    }
    if !params.equal_primes() {
        return Err(Error::InvariantViolation("sigma_c_k needs p1 = p2".into()));
    }
    let e = params.e as i64;
    let hp = h_unit(forms, params.p1, terms).pow(e * k)?;
    let c = forms.pentagonal(1, terms).pow(-e * k)?;
    sigma_c_assemble(params, k, &hp, &c, &BigRational::from_integer(1.into()))
}

/// Power sums of the scaled reciprocal roots `lambda / x` for
/// `k = 1..=degree`, as series in `q`.
pub fn reciprocal_power_sums<C: Coeff>(forms: &Forms<C>, params: &ParamSet, guard: usize) -> Result<Vec<Series<C>>> {
    let ctx = forms.ctx();
    let n = params.degree;
    let e = params.e as i64;
    let mut out = Vec::with_capacity(n);
    if params.equal_primes() {
        let lambda = BigRational::from_integer(params.lambda());
        let mut scale = BigRational::from_integer(1.into());
        let p = params.p1 as i64;
        let top = Ratio::new(n as i64 * e * (p - 1), 12).ceil().to_integer() as usize;
        let terms = top + 1 + guard;
        let limit = Some(terms as i64 - 1);
        let h_base = h_unit(forms, params.p1, terms).pow(-e)?;
        let c_base = forms.pentagonal(1, terms).pow(e)?;
        let (mut h, mut c) = (Series::one(ctx), Series::one(ctx));
        for k in 1..=n as i64 {
            h = h.mul_trunc(&h_base, limit);
            c = c.mul_trunc(&c_base, limit);
            scale *= &lambda;
            out.push(sigma_c_assemble(params, -k, &h, &c, &scale)?.normalize());
        }
    } else {
        let top = (params.re() * n as i64).ceil().to_integer() as usize;
        let terms = top + 1 + guard;
        let limit = Some(terms as i64 - 1);
        let base = forms.c12(params.p1, params.p2, terms).pow(-e)?;
        let swapped = params.swapped();
        let mut cur = Series::one(ctx);
        for k in 1..=n as i64 {
            cur = cur.mul_trunc(&base, limit);
            let sum = sigma_c2_from_power(params, -k, &cur).add(&sigma_c2_from_power(&swapped, -k, &cur));
            out.push(sum.normalize());
        }
    }
    Ok(out)
}

/// Largest `J`-degree any power sum can reach.
fn max_j_degree(params: &ParamSet) -> usize {
    let n = params.degree as i64;
    let bound = if params.equal_primes() {
        Ratio::new(n * params.e as i64 * (params.p1 as i64 - 1), 12)
    } else {
        params.re() * n
    };
    bound.ceil().to_integer() as usize + 1
}

/// Runs the pipeline over the coefficient ring `C`.
pub fn compute<C: SeriesCoeff>(ctx: C::Ctx, params: &ParamSet, guard: usize) -> Result<ModEqPoly<C::Exact>> {
    let forms = Forms::<C>::new(ctx);
    let sums = reciprocal_power_sums(&forms, params, guard)?;
    let rec = Recognizer::new(&forms, max_j_degree(params), 0);
    let recognized: Vec<NormalPoly<C::Exact>> = sums
        .par_iter()
        .map(|s| rec.recognize(s, true).map(|g| g.to_normal(ctx)))
        .collect::<Result<_>>()?;
    let q = power_sums_to_monic(ctx, &recognized, params.degree)?;
    let target = NormalPoly::constant(C::Exact::from_bigint(ctx, &params.constant_term()));
    let mut eq = reverse_and_descale(&q, &params.lambda(), Some(&target))?;
    eq.label = params.label(params.sign);
    Ok(eq)
}

/// Checks the structural properties every equation must have: the
/// constant term, the order `-re` of the trace, and the order `-2re` of
/// the coefficient of lowest order, reached only at F-degree
/// `psi(N) - N - 1`.
pub fn check_properties(params: &ParamSet, eq: &ModEqPoly<BigInt>) -> Result<()> {
    let n = params.degree;
    if eq.degree() != n || !eq.is_monic() {
        return Err(Error::PropertyCheckFailed(format!("expected a monic polynomial of degree {n}")));
    }
    if eq.coeffs[0] != NormalPoly::constant(params.constant_term()) {
        return Err(Error::PropertyCheckFailed(format!(
            "constant term is {}, expected {}",
            crate::format::normal_to_text(&eq.coeffs[0]),
            params.constant_term()
        )));
    }
    let re = params.re();
    let trace = eq.coeffs[n - 1].valuation();
    if trace != Some(-re) {
        return Err(Error::PropertyCheckFailed(format!("trace has order {trace:?}, expected {}", -re)));
    }
    let low = params.lowest_order_degree();
    let lowest = eq.coeffs[low].valuation();
    if lowest != Some(-re * 2) {
        return Err(Error::PropertyCheckFailed(format!(
            "coefficient of F^{low} has order {lowest:?}, expected {}",
            -re * 2
        )));
    }
    for (d, c) in eq.coeffs.iter().enumerate() {
        if d == low {
            continue;
        }
        if let Some(v) = c.valuation() {
            if v <= -re * 2 {
                return Err(Error::PropertyCheckFailed(format!("coefficient of F^{d} has order {v}")));
            }
        }
    }
    Ok(())
}

/// Exact equation for validated parameters with the structural checks
/// applied; the label carries the sign predicted by the theorem.
pub fn exact_equation(params: &ParamSet, guard: usize) -> Result<ModEqPoly<BigInt>> {
    let eq = compute::<BigInt>((), params, guard)?;
    check_properties(params, &eq)?;
    Ok(eq)
}

/// An equation together with the numeric check of its sign.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleEtaOutput {
    pub params: ParamSet,
    pub equation: ModEqPoly<BigInt>,
    pub report: NumericReport,
}

impl DoubleEtaOutput {
    pub fn theorem_sign(&self) -> i64 {
        self.params.sign
    }

    /// Sign the equation was found to vanish at.
    pub fn produced_sign(&self) -> i64 {
        self.report.chosen_sign
    }
}

/// Runs the numeric oracle on `eq` and relabels it with the sign that
/// actually vanishes.
pub fn attach_sign(params: &ParamSet, mut eq: ModEqPoly<BigInt>, samples: usize, seed: u64) -> Result<DoubleEtaOutput> {
    let f = Quotient::DoubleEta {
        p1: params.p1,
        p2: params.p2,
        e: params.e,
    };
    let report = check_equation(&eq, f, samples, seed, TOLERANCE)?;
    if report.chosen_sign != 0 {
        eq.label = params.label(report.chosen_sign);
    }
    Ok(DoubleEtaOutput {
        params: params.clone(),
        equation: eq,
        report,
    })
}

/// Exact equation for the pair, checked structurally and numerically.
pub fn build_double_eta(p1: u64, p2: u64) -> Result<DoubleEtaOutput> {
    let params = derive_params(p1, p2, None)?;
    let eq = exact_equation(&params, GUARD)?;
    attach_sign(&params, eq, 10, 0)
}

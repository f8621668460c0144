//! Truncated Puiseux series `sum c_n q^{n/D}` with explicit precision.
//!
//! Coefficients are stored densely from the valuation up to the truncation
//! numerator `T`; a truncated series is known modulo `q^{(T+1)/D}`. Series
//! without a truncation are exact finite sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Fp};
use crate::error::{Error, Result};

/// Series with exact rational coefficients.
pub type FracSeries = Series<BigRational>;
/// Series with coefficients modulo a word-sized prime.
pub type ResidueSeries = Series<Fp>;

#[derive(Clone, Debug)]
pub struct Series<C: Coeff> {
    ctx: C::Ctx,
    denom: i64,
    val: i64,
    coeffs: Vec<C>,
    trunc: Option<i64>,
}

impl<C: Coeff> Series<C> {
    /// Builds a series from dense coefficients starting at numerator `val`.
    /// Leading zeros are stripped; a truncated series is padded or cut so it
    /// covers exactly `val..=trunc`.
    pub fn from_dense(ctx: C::Ctx, denom: i64, val: i64, coeffs: Vec<C>, trunc: Option<i64>) -> Self {
        assert!(denom > 0, "exponent denominator must be positive");
        let mut s = Series {
            ctx,
            denom,
            val,
            coeffs,
            trunc,
        };
        s.canonicalize();
        s
    }

    /// Sparse constructor: `terms` are `(numerator, coefficient)` pairs.
    pub fn from_terms(ctx: C::Ctx, denom: i64, terms: &[(i64, C)], trunc: Option<i64>) -> Self {
        let kept: Vec<&(i64, C)> = terms
            .iter()
            .filter(|(n, c)| !c.is_zero() && trunc.map_or(true, |t| *n <= t))
            .collect();
        let Some(lo) = kept.iter().map(|(n, _)| *n).min() else {
            return Self::from_dense(ctx, denom, trunc.map_or(0, |t| t + 1), Vec::new(), trunc);
        };
        let hi = kept.iter().map(|(n, _)| *n).max().unwrap_or(lo);
        let mut coeffs = vec![C::zero(ctx); (hi - lo + 1) as usize];
        for (n, c) in kept {
            coeffs[(n - lo) as usize].add_assign(c);
        }
        Self::from_dense(ctx, denom, lo, coeffs, trunc)
    }

    pub fn zero(ctx: C::Ctx) -> Self {
        Self::from_dense(ctx, 1, 0, Vec::new(), None)
    }

    pub fn one(ctx: C::Ctx) -> Self {
        Self::monomial(C::one(ctx), 0, 1)
    }

    /// `c q^{num/denom}`, exact.
    pub fn monomial(c: C, num: i64, denom: i64) -> Self {
        let ctx = c.ctx();
        Self::from_dense(ctx, denom, num, vec![c], None)
    }

    fn canonicalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.val = self.trunc.map_or(0, |t| t + 1);
            }
        }
        match self.trunc {
            Some(t) => {
                let len = (t - self.val + 1).max(0) as usize;
                self.coeffs.resize(len, C::zero(self.ctx));
                if self.coeffs.is_empty() {
                    self.val = t + 1;
                }
            }
            None => {
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Numerator of the lowest nonzero exponent; for a zero truncated series
    /// this is `trunc + 1`, a lower bound on the true valuation.
    pub fn val_num(&self) -> i64 {
        self.val
    }

    /// Valuation as an exact rational, `None` for the zero series.
    pub fn valuation(&self) -> Option<Ratio<i64>> {
        (!self.is_zero()).then(|| Ratio::new(self.val, self.denom))
    }

    pub fn trunc_num(&self) -> Option<i64> {
        self.trunc
    }

    /// The series is known modulo `q^precision`; `None` when exact.
    pub fn precision(&self) -> Option<Ratio<i64>> {
        self.trunc.map(|t| Ratio::new(t + 1, self.denom))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Dense coefficients from the valuation numerator upwards.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Iterates `(numerator, coefficient)` over nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// Coefficient at numerator `n` over the current denominator.
    pub fn coeff_num(&self, n: i64) -> Result<C> {
        if let Some(t) = self.trunc {
            if n > t {
                return Err(Error::PrecisionExceeded {
                    exponent: Ratio::new(n, self.denom),
                    precision: Ratio::new(t + 1, self.denom),
                });
            }
        }
        if n < self.val || n - self.val >= self.coeffs.len() as i64 {
            return Ok(C::zero(self.ctx));
        }
        Ok(self.coeffs[(n - self.val) as usize].clone())
    }

    /// Coefficient of `q^e`; exponents off the lattice `(1/D)Z` read as 0.
    pub fn coeff_at(&self, e: Ratio<i64>) -> Result<C> {
        let scaled = e * self.denom;
        if !scaled.is_integer() {
            if let Some(t) = self.trunc {
                if e > Ratio::new(t, self.denom) {
                    return Err(Error::PrecisionExceeded {
                        exponent: e,
                        precision: Ratio::new(t + 1, self.denom),
                    });
                }
            }
            return Ok(C::zero(self.ctx));
        }
        self.coeff_num(scaled.to_integer())
    }

    /// Rewrites the series over denominator `new_denom`, a multiple of the
    /// current one.
    pub fn reindex(&self, new_denom: i64) -> Self {
        assert!(
            new_denom > 0 && new_denom % self.denom == 0,
            "reindex target {new_denom} is not a multiple of {}",
            self.denom
        );
        let m = new_denom / self.denom;
        if m == 1 {
            return self.clone();
        }
        self.spread(m, new_denom)
    }

    /// Substitutes `q -> q^{num/den}` for positive `num/den`.
    pub fn substitute_power(&self, num: i64, den: i64) -> Self {
        assert!(num > 0 && den > 0);
        let spread = self.spread(num, self.denom * den);
        spread.normalize()
    }

    fn spread(&self, m: i64, new_denom: i64) -> Self {
        let mu = m as usize;
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() {
            coeffs = vec![C::zero(self.ctx); (self.coeffs.len() - 1) * mu + 1];
            for (i, c) in self.coeffs.iter().enumerate() {
                coeffs[i * mu] = c.clone();
            }
        }
        Series::from_dense(
            self.ctx,
            new_denom,
            self.val * m,
            coeffs,
            self.trunc.map(|t| (t + 1) * m - 1),
        )
    }

    /// Reduces the denominator by `g = gcd(D, numerators, T+1)`.
    pub fn normalize(&self) -> Self {
        let mut g = self.denom;
        if let Some(t) = self.trunc {
            g = g.gcd(&(t + 1));
        }
        for (n, _) in self.terms() {
            if g == 1 {
                break;
            }
            g = g.gcd(&n);
        }
        if g <= 1 {
            return self.clone();
        }
        self.coarsen(g)
    }

    /// Divides every exponent numerator and the denominator by `g`; callers
    /// guarantee divisibility.
    fn coarsen(&self, g: i64) -> Self {
        let terms: Vec<(i64, C)> = self.terms().map(|(n, c)| (n / g, c.clone())).collect();
        Series::from_terms(self.ctx, self.denom / g, &terms, self.trunc.map(|t| (t + 1) / g - 1))
    }

    /// Rewrites the series over denominator `target`, which must divide the
    /// current one and keep every nonzero numerator integral. The series is
    /// assumed to live on the coarser lattice, so the truncation rounds up
    /// to the next lattice point.
    pub fn coarsen_to(&self, target: i64) -> Option<Self> {
        if target <= 0 || self.denom % target != 0 {
            return None;
        }
        let g = self.denom / target;
        if g == 1 {
            return Some(self.clone());
        }
        if !self.terms().all(|(n, _)| n % g == 0) {
            return None;
        }
        let terms: Vec<(i64, C)> = self.terms().map(|(n, c)| (n / g, c.clone())).collect();
        let trunc = self.trunc.map(|t| Integer::div_ceil(&(t + 1), &g) - 1);
        Some(Series::from_terms(self.ctx, target, &terms, trunc))
    }

    /// `coarsen_to(1)`: the series as a Laurent series in `q`.
    pub fn coarsen_to_integral(&self) -> Option<Self> {
        self.coarsen_to(1)
    }

    /// Lowers the truncation to numerator `t` (no-op if already lower).
    pub fn truncate(&self, t: i64) -> Self {
        let t = self.trunc.map_or(t, |old| old.min(t));
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate((t - self.val + 1).max(0) as usize);
        Series::from_dense(self.ctx, self.denom, self.val, coeffs, Some(t))
    }

    /// Lowers the truncation so the series is known modulo `q^e` at most.
    pub fn truncate_at(&self, e: Ratio<i64>) -> Self {
        let n = (e * self.denom).ceil().to_integer() - 1;
        self.truncate(n)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.denom == b.denom {
            return (a.clone(), b.clone());
        }
        let d = a.denom.lcm(&b.denom);
        (a.reindex(d), b.reindex(d))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = Self::common(self, other);
        let trunc = match (a.trunc, b.trunc) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let lo = match (a.is_zero(), b.is_zero()) {
            (true, true) => return Series::from_dense(a.ctx, a.denom, 0, Vec::new(), trunc),
            (false, true) => a.val,
            (true, false) => b.val,
            (false, false) => a.val.min(b.val),
        };
        let hi_a = a.val + a.coeffs.len() as i64 - 1;
        let hi_b = b.val + b.coeffs.len() as i64 - 1;
        let mut hi = hi_a.max(hi_b);
        if let Some(t) = trunc {
            hi = hi.min(t);
        }
        if hi < lo {
            return Series::from_dense(a.ctx, a.denom, lo, Vec::new(), trunc);
        }
        let mut coeffs = vec![C::zero(a.ctx); (hi - lo + 1) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            let n = a.val + i as i64;
            if n <= hi {
                coeffs[(n - lo) as usize] = c.clone();
            }
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let n = b.val + i as i64;
            if n <= hi {
                let slot = &mut coeffs[(n - lo) as usize];
                *slot = if negate { slot.sub(c) } else { slot.add(c) };
            }
        }
        Series::from_dense(a.ctx, a.denom, lo, coeffs, trunc)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        Series {
            ctx: self.ctx,
            denom: self.denom,
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.mul(c)).collect();
        Series::from_dense(self.ctx, self.denom, self.val, coeffs, self.trunc)
    }

    /// Multiplies by `q^{num/den}`.
    pub fn shift(&self, num: i64, den: i64) -> Self {
        let d = self.denom.lcm(&den);
        let mut s = self.reindex(d);
        let delta = num * (d / den);
        s.val += delta;
        s.trunc = s.trunc.map(|t| t + delta);
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, None)
    }

    /// Product, additionally truncated at numerator `limit` (over the
    /// common denominator) to save work.
    pub fn mul_trunc(&self, other: &Self, limit: Option<i64>) -> Self {
        let (a, b) = Self::common(self, other);
        let mut trunc = match (a.trunc, b.trunc) {
            (Some(ta), Some(tb)) => Some((ta + b.val).min(tb + a.val)),
            (Some(_), None) if b.is_zero() => return Series::zero(a.ctx).reindex(a.denom),
            (Some(ta), None) => Some(ta + b.val),
            (None, Some(_)) if a.is_zero() => return Series::zero(a.ctx).reindex(a.denom),
            (None, Some(tb)) => Some(tb + a.val),
            (None, None) => None,
        };
        if let Some(l) = limit {
            trunc = Some(trunc.map_or(l, |t| t.min(l)));
        }
        if a.is_zero() || b.is_zero() {
            let v = a.val + b.val;
            return Series::from_dense(a.ctx, a.denom, v, Vec::new(), trunc);
        }
        let val = a.val + b.val;
        let full = a.coeffs.len() + b.coeffs.len() - 1;
        let len = match trunc {
            Some(t) => ((t - val + 1).max(0) as usize).min(full),
            None => full,
        };
        let coeffs = C::convolve(&a.coeffs, &b.coeffs, len, a.ctx);
        Series::from_dense(a.ctx, a.denom, val, coeffs, trunc)
    }

    /// Multiplicative inverse via the recurrence against the leading term.
    pub fn inv(&self) -> Result<Self> {
        let lead = self.coeffs.first().ok_or(Error::ZeroLeadingCoefficient)?;
        let lead_inv = lead.inv().ok_or(Error::ZeroLeadingCoefficient)?;
        let Some(t) = self.trunc else {
            if self.coeffs.len() == 1 {
                return Ok(Series::monomial(lead_inv, -self.val, self.denom));
            }
            return Err(Error::ExactInverse);
        };
        let n = (t - self.val + 1) as usize;
        let unit: Vec<C> = self.coeffs.iter().map(|c| c.mul(&lead_inv)).collect();
        let w = C::unit_series_inverse(&unit, n);
        let coeffs = w.iter().map(|c| c.mul(&lead_inv)).collect();
        Ok(Series::from_dense(
            self.ctx,
            self.denom,
            -self.val,
            coeffs,
            Some(-self.val + n as i64 - 1),
        ))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Series::one(self.ctx).reindex(self.denom);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Keeps the coefficients whose exponent numerator is `residue` mod
    /// `modulus`. Coefficients up to the next kept numerator past the
    /// truncation are known to vanish, so the truncation grows to just
    /// below it.
    pub fn sieve(&self, modulus: i64, residue: i64) -> Self {
        assert!(modulus >= 1);
        let r = residue.rem_euclid(modulus);
        let terms: Vec<(i64, C)> = self
            .terms()
            .filter(|(n, _)| n.rem_euclid(modulus) == r)
            .map(|(n, c)| (n, c.clone()))
            .collect();
        let trunc = self.trunc.map(|t| {
            let next = t + 1 + (r - (t + 1)).rem_euclid(modulus);
            next - 1
        });
        Series::from_terms(self.ctx, self.denom, &terms, trunc)
    }

    /// Maps every coefficient into another ring.
    pub fn map<D: Coeff>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> Series<D> {
        Series::from_dense(ctx, self.denom, self.val, self.coeffs.iter().map(f).collect(), self.trunc)
    }
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.val == b.val && a.trunc == b.trunc && a.coeffs == b.coeffs
    }
}

fn q_power(e: Ratio<i64>) -> String {
    if e.is_integer() {
        match e.to_integer() {
            0 => String::new(),
            1 => "q".into(),
            n => format!("q^{n}"),
        }
    } else {
        format!("q^({e})")
    }
}

/// `q^-1 + 744 + 196884*q + ... + O(q^3)`
impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let q = q_power(Ratio::new(n, self.denom));
            match (mag == "1", q.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "{q}")?,
                (false, false) => write!(f, "{mag}*{q}")?,
            }
        }
        if let Some(p) = self.precision() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O({})", if *p.numer() == 0 { "1".into() } else { q_power(p) })?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    denom: i64,
    val: i64,
    trunc: Option<i64>,
    coeffs: Vec<String>,
}

impl<C> Serialize for Series<C>
where
    C: Coeff<Ctx = ()>,
{
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            denom: self.denom,
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de, C> Deserialize<'de> for Series<C>
where
    C: Coeff<Ctx = ()> + FromStr,
{
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        if repr.denom <= 0 {
            return Err(serde::de::Error::custom("denominator must be positive"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| C::from_str(s).map_err(|_| serde::de::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<std::result::Result<Vec<C>, _>>()?;
        Ok(Series::from_dense((), repr.denom, repr.val, coeffs, repr.trunc))
    }
}

impl FracSeries {
    /// Projects an integer-coefficient series to residues mod `m`.
    pub fn reduce_mod(&self, m: u64) -> Option<ResidueSeries> {
        if self.coeffs.iter().any(|c| !c.is_integer()) {
            let ok = self.coeffs.iter().all(|c| {
                let d = c.denom() % BigInt::from(m);
                !num_traits::Zero::is_zero(&d)
            });
            if !ok {
                return None;
            }
        }
        Some(self.map(m, |c| {
            let n = Fp::from_bigint(m, c.numer());
            let d = Fp::from_bigint(m, c.denom());
            n.mul(&d.inv().expect("checked invertible"))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly(coeffs: &[i64], trunc: Option<i64>) -> FracSeries {
        Series::from_dense((), 1, 0, coeffs.iter().map(|&c| q(c)).collect(), trunc)
    }

    #[test]
    fn cancellation_moves_valuation() {
        let s = poly(&[1, 1], None).add(&poly(&[-1, 1], None));
        assert_eq!(s.valuation(), Some(Ratio::new(1, 1)));
        assert_eq!(s.coeff_num(1).unwrap(), q(2));
    }

    #[test]
    fn lcm_reindexing_on_add() {
        let a = Series::monomial(q(1), -1, 3);
        let b = Series::monomial(q(1), -1, 2);
        let s = a.add(&b);
        assert_eq!(s.denom(), 6);
        let nums: Vec<i64> = s.terms().map(|(n, _)| n).collect();
        assert_eq!(nums, vec![-3, -2]);
    }

    #[test]
    fn product_and_exponent_arithmetic() {
        let s = poly(&[1, 1], None).mul(&poly(&[1, -1], None));
        assert_eq!(s, poly(&[1, 0, -1], None));
        let t = Series::monomial(q(1), -1, 24).mul(&Series::monomial(q(1), 1, 24));
        assert_eq!(t.normalize(), FracSeries::one(()));
    }

    #[test]
    fn geometric_inverse() {
        let s = poly(&[1, 1], Some(5)).pow(-1).unwrap();
        assert_eq!(s, poly(&[1, -1, 1, -1, 1, -1], Some(5)));
        assert_eq!(poly(&[3, 7], Some(4)).pow(0).unwrap(), FracSeries::one(()));
        assert_eq!(poly(&[1, 1], None).inv(), Err(Error::ExactInverse));
        assert_eq!(FracSeries::zero(()).inv(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn square_of_puiseux_series() {
        let a = Series::from_terms((), 3, &[(-1, q(1)), (2, q(248))], Some(5));
        let sq = a.pow(2).unwrap();
        assert_eq!(sq.valuation(), Some(Ratio::new(-2, 3)));
        assert_eq!(sq.coeff_at(Ratio::new(1, 3)).unwrap(), q(496));
        // direct product as oracle
        assert_eq!(sq, a.mul(&a));
    }

    #[test]
    fn coefficient_lookup() {
        let a = poly(&[1, 1], None);
        assert_eq!(a.coeff_at(Ratio::new(1, 2)).unwrap(), q(0));
        let t = poly(&[1, 1], Some(1));
        assert!(matches!(t.coeff_at(Ratio::new(2, 1)), Err(Error::PrecisionExceeded { .. })));
    }

    #[test]
    fn sieve_keeps_residue_class() {
        let a = poly(&[1, 1, 1, 1], None);
        assert_eq!(a.sieve(2, 0), poly(&[1, 0, 1], None));
        assert_eq!(a.sieve(1, 0), a);
        let t = poly(&[1, 1, 1, 1], Some(3));
        // next kept numerator after 3 is 4
        assert_eq!(t.sieve(2, 0).trunc_num(), Some(3));
        // next kept numerator after 3 in class 1 mod 3 is 4; after that 7
        assert_eq!(t.sieve(3, 1).trunc_num(), Some(3));
        assert_eq!(t.sieve(3, 2).trunc_num(), Some(4));
    }

    #[test]
    fn normalize_reduces_denominator() {
        let a = Series::from_terms((), 6, &[(-3, q(1)), (3, q(2))], Some(5));
        let n = a.normalize();
        assert_eq!(n.denom(), 2);
        assert_eq!(n.trunc_num(), Some(1));
        assert_eq!(n, a);
    }

    #[test]
    fn json_round_trip() {
        let a = Series::from_terms(
            (),
            6,
            &[(-3, q(1)), (1, BigRational::new(BigInt::from(-7), BigInt::from(3)))],
            Some(8),
        );
        let js = serde_json::to_string(&a).unwrap();
        assert!(js.contains("\"-7/3\""));
        let back: FracSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn reduction_commutes_with_product() {
        let m = 1_000_003;
        let a = poly(&[3, -1, 4, 1, -5], Some(4));
        let b = poly(&[2, 7, 1, -8], Some(4)).shift(-1, 2);
        let lhs = a.mul(&b).reduce_mod(m).unwrap();
        let rhs = a.reduce_mod(m).unwrap().mul(&b.reduce_mod(m).unwrap());
        assert_eq!(lhs, rhs);
        let inv = a.inv().unwrap().reduce_mod(m).unwrap();
        assert_eq!(inv, a.reduce_mod(m).unwrap().inv().unwrap());
        assert!(a.mul(&a.inv().unwrap()).coeffs()[0].is_one());
    }

    #[test]
    fn display_is_compact() {
        let forms = crate::forms::Forms::<BigInt>::new(());
        assert_eq!(forms.j(3).to_string(), "q^-1 + 744 + 196884*q + O(q^2)");
        let s = Series::from_terms((), 3, &[(-1, BigInt::from(-1)), (2, BigInt::from(-248))], None);
        assert_eq!(s.to_string(), "-q^(-1/3) - 248*q^(2/3)");
        assert_eq!(Series::<BigInt>::zero(()).to_string(), "0");
    }
}

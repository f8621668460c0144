//! Recognition of invariant q-series as `G2^a G3^b P(J)`.

use num_rational::Ratio;

use crate::coeff::{Coeff, SeriesCoeff};
use crate::error::{Error, Result};
use crate::forms::Forms;
use crate::poly::GammaPoly;
use crate::series::Series;

/// Holds the powers of `j` and the inverse gamma twists for one run.
///
/// `max_degree` bounds the `J`-degree of anything recognized; `tail` is the
/// highest integer exponent checked for an exact match in strict mode.
pub struct Recognizer<C: SeriesCoeff> {
    ctx: C::Ctx,
    tail: i64,
    j_powers: Vec<Series<C>>,
    /// `twists[i][b] = gamma2^{-i} gamma3^{-b}`
    twists: [[Series<C>; 2]; 3],
}

impl<C: SeriesCoeff> Recognizer<C> {
    pub fn new(forms: &Forms<C>, max_degree: usize, tail: i64) -> Self {
        let ctx = forms.ctx();
        let tail = tail.max(0);
        let d = max_degree as i64;
        // j^d loses one known exponent per factor beyond the first
        let j = forms.j((tail + d + 2) as usize);
        let mut j_powers = Vec::with_capacity(max_degree + 1);
        let mut cur = Series::one(ctx);
        j_powers.push(cur.clone());
        for _ in 0..max_degree {
            cur = cur.mul(&j);
            j_powers.push(cur.truncate(tail));
        }
        let n = (tail + d + 4) as usize;
        let g2i = forms.gamma2(n).inv().expect("gamma2 has unit leading term");
        let g3i = forms.gamma3(n).inv().expect("gamma3 has unit leading term");
        let g2i2 = g2i.mul(&g2i);
        let one = Series::one(ctx);
        let twists = [
            [one, g3i.clone()],
            [g2i.clone(), g2i.mul(&g3i)],
            [g2i2.clone(), g2i2.mul(&g3i)],
        ];
        Recognizer {
            ctx,
            tail,
            j_powers,
            twists,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.j_powers.len() - 1
    }

    /// Chooses `(i, b)` so that `t / (gamma2^i gamma3^b)` has integer
    /// exponents and returns that quotient over denominator 1.
    pub fn split_gamma_factors(&self, t: &Series<C>) -> Result<(u8, u8, Series<C>)> {
        // nothing past q^tail is ever inspected; the twists only raise the order
        let t = &t.truncate_at(Ratio::from_integer(self.tail + 1));
        let Some(v) = t.valuation() else {
            return Ok((0, 0, t.normalize().coarsen_to(1).unwrap_or_else(|| Series::zero(self.ctx))));
        };
        let b = *v.denom();
        if 6 % b != 0 {
            return Err(Error::UnsupportedDenominator(b));
        }
        // twist valuation -(i/3 + f/2) must match v modulo 1
        let (i, f) = (0..3u8)
            .flat_map(|i| (0..2u8).map(move |f| (i, f)))
            .find(|&(i, f)| (v + Ratio::new(i as i64, 3) + Ratio::new(f as i64, 2)).is_integer())
            .ok_or(Error::NoIntegralTwist)?;
        let twisted = if i == 0 && f == 0 {
            t.clone()
        } else {
            t.mul(&self.twists[i as usize][f as usize])
        };
        let quotient = twisted.coarsen_to_integral().ok_or(Error::NoIntegralTwist)?;
        Ok((i, f, quotient))
    }

    /// Peels `c_d j^d` for `d = deg..=0`, where `-deg` is the valuation of
    /// `t`; returns the polynomial and the residual `t - P(j)`.
    fn peel(&self, t: &Series<C>) -> Result<(Vec<C::Exact>, Series<C>)> {
        let t = t.coarsen_to_integral().ok_or(Error::NoIntegralTwist)?;
        if let Some(p) = t.precision() {
            if p <= Ratio::from_integer(0) {
                return Err(Error::InsufficientPrecision(p));
            }
        }
        let Some(v) = t.valuation() else {
            return Ok((Vec::new(), t));
        };
        let v = v.to_integer();
        if v > 0 {
            return Ok((Vec::new(), t));
        }
        let deg = (-v) as usize;
        if deg > self.max_degree() {
            return Err(Error::DegreeTooLarge {
                degree: deg,
                max: self.max_degree(),
            });
        }
        let mut rest = t;
        let mut poly = vec![C::Exact::zero(self.ctx); deg + 1];
        for d in (0..=deg).rev() {
            let c = rest.coeff_num(-(d as i64))?;
            if c.is_zero() {
                continue;
            }
            let exact = c.to_exact().ok_or_else(|| Error::NonIntegerCoefficient {
                exponent: Ratio::from_integer(-(d as i64)),
                value: c.to_string(),
            })?;
            rest = rest.sub(&self.j_powers[d].scale(&c));
            poly[d] = exact;
        }
        Ok((poly, rest))
    }

    fn check_residual(&self, rest: &Series<C>, allow_positive_tail: bool) -> Result<()> {
        if let Some(v) = rest.valuation() {
            if v < Ratio::from_integer(1) {
                return Err(Error::ResidualNotPositiveOrder(v));
            }
            if !allow_positive_tail && v <= Ratio::from_integer(self.tail) {
                return Err(Error::NonzeroResidual(v));
            }
        }
        Ok(())
    }

    /// `P` with `P(j) = t + O(q)`. Without `allow_positive_tail`, `t - P(j)`
    /// must also vanish through `q^tail`.
    pub fn recognize_poly_in_j(&self, t: &Series<C>, allow_positive_tail: bool) -> Result<Vec<C::Exact>> {
        let (mut poly, rest) = self.peel(t)?;
        self.check_residual(&rest, allow_positive_tail)?;
        while poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        Ok(poly)
    }

    pub fn recognize(&self, t: &Series<C>, allow_positive_tail: bool) -> Result<GammaPoly<C::Exact>> {
        let (i, f, quotient) = self.split_gamma_factors(t)?;
        let poly = self.recognize_poly_in_j(&quotient, allow_positive_tail)?;
        Ok(GammaPoly::new(i, f, poly))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn constants_and_powers_of_j() {
        let forms = Forms::<BigRational>::new(());
        let rec = Recognizer::new(&forms, 4, 3);
        let five = Series::from_dense((), 1, 0, vec![rat(5)], Some(3));
        assert_eq!(rec.recognize_poly_in_j(&five, false).unwrap(), vec![BigInt::from(5)]);
        let j2 = forms.j(10).pow(2).unwrap();
        let p = rec.recognize_poly_in_j(&j2, false).unwrap();
        assert_eq!(p, vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]);
        let zero = Series::<BigRational>::zero(());
        assert!(rec.recognize(&zero, false).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_denominators_and_fractions() {
        let forms = Forms::<BigRational>::new(());
        let rec = Recognizer::new(&forms, 2, 2);
        let t = Series::from_dense((), 5, -1, vec![rat(1)], Some(20));
        assert_eq!(rec.recognize(&t, true).unwrap_err(), Error::UnsupportedDenominator(5));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let t = Series::from_dense((), 1, 0, vec![half], Some(3));
        assert!(matches!(
            rec.recognize(&t, true).unwrap_err(),
            Error::NonIntegerCoefficient { .. }
        ));
    }

    #[test]
    fn strict_mode_rejects_non_polynomials() {
        let forms = Forms::<BigRational>::new(());
        let rec = Recognizer::new(&forms, 2, 3);
        let t = Series::from_dense((), 1, -1, vec![rat(1), rat(744), rat(5)], Some(3));
        assert!(rec.recognize(&t, true).is_ok());
        assert_eq!(
            rec.recognize(&t, false).unwrap_err(),
            Error::NonzeroResidual(Ratio::from_integer(1))
        );
    }
}

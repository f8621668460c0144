//! Modular equations of `w_p^2 = (eta(z/p)/eta(z))^2` for a prime `p > 3`.
//!
//! The only reciprocal root of negative order is
//! `(eta(z)/eta(pz))^2 = q^{(1-p)/12}(1 + ...)`, so its powers, recognized
//! in `J, G2, G3`, are the power sums of the scaled reciprocal polynomial.

use num_bigint::BigInt;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::coeff::{Coeff, SeriesCoeff};
use crate::error::{Error, Result};
use crate::forms::Forms;
use crate::newton::{power_sums_to_monic, reverse_and_descale};
use crate::poly::{GammaPoly, ModEqPoly, NormalPoly};
use crate::recognize::Recognizer;
use crate::series::Series;

/// Extra coefficients carried beyond the minimum needed for recognition.
pub const GUARD: usize = 8;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p^2 - 1)/12 + GUARD`.
pub fn required_terms(p: u64) -> Result<usize> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(((p * p - 1) / 12) as usize + GUARD)
}

/// `(-1)^{(p-1)/2}`: the produced equation vanishes at this multiple of `w_p^2`.
pub fn sign(p: u64) -> i64 {
    if (p - 1) / 2 % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(eta(z)/eta(pz))^{2k}` with `terms` coefficients after the leading one.
pub fn s_k_series<C: Coeff>(forms: &Forms<C>, p: u64, k: i64, terms: usize) -> Series<C> {
    let unit = base_unit(forms, p, terms).pow(k).expect("unit series");
    let lead = Ratio::new(k * (1 - p as i64), 12);
    unit.shift(*lead.numer(), *lead.denom()).normalize()
}

/// `(P(q)/P(q^p))^2` modulo `q^terms`.
fn base_unit<C: Coeff>(forms: &Forms<C>, p: u64, terms: usize) -> Series<C> {
    let num = forms.pentagonal(1, terms);
    let den = forms.pentagonal(p as i64, terms).inv().expect("unit series");
    let q = num.mul(&den);
    q.mul(&q)
}

/// Recognizes `(eta(z)/eta(pz))^{2k}` for `k = 1..=p+1`.
pub fn recognized_power_sums<C: SeriesCoeff>(
    ctx: C::Ctx,
    p: u64,
    guard: usize,
) -> Result<Vec<GammaPoly<C::Exact>>> {
    required_terms(p)?;
    let top = ((p * p - 1) / 12) as usize;
    let terms = top + guard + 1;
    let forms = Forms::<C>::new(ctx);
    let rec = Recognizer::new(&forms, top, guard as i64);
    let base = base_unit(&forms, p, terms);
    let mut powers = Vec::with_capacity(p as usize + 1);
    let mut cur = Series::one(ctx);
    for k in 1..=(p as i64 + 1) {
        cur = cur.mul(&base);
        let lead = Ratio::new(k * (1 - p as i64), 12);
        powers.push(cur.shift(*lead.numer(), *lead.denom()).normalize());
    }
    powers.par_iter().map(|s| rec.recognize(s, true)).collect()
}

/// The power sums and monic polynomial in the reciprocal roots `p/x`,
/// before reversal.
pub fn reciprocal_equation<C: SeriesCoeff>(ctx: C::Ctx, p: u64, guard: usize) -> Result<ModEqPoly<C::Exact>> {
    let sums = recognized_power_sums::<C>(ctx, p, guard)?;
    let normal: Vec<NormalPoly<C::Exact>> = sums.iter().map(|g| g.to_normal(ctx)).collect();
    power_sums_to_monic(ctx, &normal, p as usize + 1)
}

/// Runs the whole pipeline over the coefficient ring `C`.
pub fn build_with<C: SeriesCoeff>(ctx: C::Ctx, p: u64, guard: usize) -> Result<ModEqPoly<C::Exact>> {
    let q = reciprocal_equation::<C>(ctx, p, guard)?;
    let target = NormalPoly::constant(C::Exact::from_i64(ctx, sign(p) * p as i64));
    let mut out = reverse_and_descale(&q, &BigInt::from(p), Some(&target))?;
    out.label = label(p);
    Ok(out)
}

pub fn label(p: u64) -> String {
    if sign(p) > 0 {
        format!("w_{p}^2")
    } else {
        format!("-w_{p}^2")
    }
}

/// Exact modular equation of `(-1)^{(p-1)/2} w_p^2`.
pub fn build_kiepert(p: u64) -> Result<ModEqPoly<BigInt>> {
    build_with::<BigInt>((), p, GUARD)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn precision_requirements() {
        assert_eq!(required_terms(11).unwrap(), 18);
        assert_eq!(required_terms(5).unwrap(), 10);
        assert_eq!(required_terms(13).unwrap(), 22);
        assert_eq!(required_terms(3), Err(Error::UnsupportedPrime(3)));
        assert_eq!(required_terms(9), Err(Error::UnsupportedPrime(9)));
    }

    #[test]
    fn first_power_for_eleven() {
        let forms = Forms::<BigRational>::new(());
        let s = s_k_series(&forms, 11, 1, 4);
        let got: Vec<(Ratio<i64>, i64)> = s
            .terms()
            .map(|(n, c)| (Ratio::new(n, s.denom()), c.to_integer().try_into().unwrap()))
            .collect();
        assert_eq!(
            got,
            vec![
                (Ratio::new(-5, 6), 1),
                (Ratio::new(1, 6), -2),
                (Ratio::new(7, 6), -1),
                (Ratio::new(13, 6), 2)
            ]
        );
        assert_eq!(s.precision(), Some(Ratio::new(19, 6)));
    }

    #[test]
    fn small_primes() {
        let text = |p| crate::format::to_text(&build_kiepert(p).unwrap(), "X");
        assert_eq!(text(5), "X^6 + 10*X^3 - G2*X + 5");
        assert_eq!(text(7), "X^8 + 14*X^6 + 63*X^4 + 70*X^2 + G3*X - 7");
        assert_eq!(
            text(11),
            "X^12 - 990*X^6 + 440*G2*X^4 + 165*G3*X^3 + 22*G2^2*X^2 + G3*G2*X - 11"
        );
    }

    #[test]
    fn reciprocal_form_for_eleven() {
        let q = reciprocal_equation::<BigRational>((), 11, GUARD).unwrap();
        assert_eq!(
            crate::format::to_text(&q, "F"),
            "F^12 - G3*G2*F^11 - 242*G2^2*F^10 - 19965*G3*F^9 - 585640*G2*F^8 + 159440490*F^6 - 285311670611"
        );
    }
}

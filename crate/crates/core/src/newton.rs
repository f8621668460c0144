//! Newton's identities in the normal-form ring and polynomial reversal.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{ModEqPoly, NormalPoly};

/// Normal-form product, `G2^3 -> J` and `G3^2 -> J - 1728`.
pub fn normal_mul<E: Coeff>(a: &NormalPoly<E>, b: &NormalPoly<E>) -> NormalPoly<E> {
    a.mul(b)
}

/// Monic polynomial of degree `n` whose roots have power sums
/// `power_sums[0..n]` (`p_1, ..., p_n`).
///
/// `e_k = (1/k) sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i`; every division by `k`
/// must be exact in `E`, which for the integers asserts integrality step by
/// step.
pub fn power_sums_to_monic<E: Coeff>(ctx: E::Ctx, power_sums: &[NormalPoly<E>], n: usize) -> Result<ModEqPoly<E>> {
    assert!(power_sums.len() >= n, "need {n} power sums, got {}", power_sums.len());
    let mut e: Vec<NormalPoly<E>> = vec![NormalPoly::one(ctx)];
    for k in 1..=n {
        let acc = (1..=k)
            .into_par_iter()
            .map(|i| {
                let t = e[k - i].mul(&power_sums[i - 1]);
                if i % 2 == 1 {
                    t
                } else {
                    t.neg()
                }
            })
            .reduce(|| NormalPoly::zero(ctx), |a, b| a.add(&b));
        let ek = acc.div_small(k as u64).ok_or(Error::NonIntegralCoefficient(k))?;
        e.push(ek);
    }
    // coefficient of X^{n-k} is (-1)^k e_k
    let mut coeffs = vec![NormalPoly::zero(ctx); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek } else { ek.neg() };
    }
    Ok(ModEqPoly::new(coeffs, "monic from power sums"))
}

/// Given monic `Q` of degree `n` whose roots are `y_i = scale / x_i`,
/// returns the monic polynomial with roots `x_i`:
/// `X^n Q(scale/X) / Q(0)`, whose `X^{n-i}` coefficient is
/// `q_i scale^i / q_0`.
///
/// `Q(0)` must be a constant; when `target` is given the constant term of
/// the result (`scale^n / q_0`) must equal it.
pub fn reverse_and_descale<E: Coeff>(
    m: &ModEqPoly<E>,
    scale: &BigInt,
    target: Option<&NormalPoly<E>>,
) -> Result<ModEqPoly<E>> {
    let n = m.degree();
    if !m.is_monic() {
        return Err(Error::InconsistentScaling("input polynomial is not monic".into()));
    }
    let ctx = m.coeffs[n].ctx();
    let q0 = m.coeffs[0]
        .as_constant()
        .ok_or_else(|| Error::InconsistentScaling("constant term is not a constant".into()))?;
    if q0.is_zero() {
        return Err(Error::InconsistentScaling("constant term vanishes".into()));
    }
    let s = E::from_bigint(ctx, scale);
    let mut power = E::one(ctx);
    let mut coeffs = vec![NormalPoly::zero(ctx); n + 1];
    for i in 0..=n {
        let c = m.coeffs[i].scale(&power).div_exact(&q0).ok_or_else(|| {
            Error::InconsistentScaling(format!("coefficient of degree {i} is not divisible by {q0}"))
        })?;
        coeffs[n - i] = c;
        power = power.mul(&s);
    }
    let out = ModEqPoly::new(coeffs, m.label.clone());
    if let Some(t) = target {
        if out.coeffs[0] != *t {
            return Err(Error::InconsistentScaling(format!(
                "constant term {:?} differs from the expected {:?}",
                out.coeffs[0], t
            )));
        }
    }
    Ok(out)
}

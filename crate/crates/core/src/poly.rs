//! Polynomials in the normal-form ring `Z[J, G2, G3]/(G2^3 - J, G3^2 - (J - 1728))`
//! and modular equations with such coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::forms::Forms;
use crate::series::Series;

/// `J^j G2^g2 G3^g3` with `g2 < 3`, `g3 < 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub j: u32,
    pub g2: u8,
    pub g3: u8,
}

impl Mono {
    pub const ONE: Mono = Mono { j: 0, g2: 0, g3: 0 };

    pub fn new(j: u32, g2: u8, g3: u8) -> Self {
        assert!(g2 < 3 && g3 < 2, "monomial exponents out of normal form");
        Mono { j, g2, g3 }
    }

    /// q-adic valuation of the monomial evaluated at `(j, gamma2, gamma3)`.
    pub fn valuation(&self) -> Ratio<i64> {
        -(Ratio::from_integer(self.j as i64) + Ratio::new(self.g2 as i64, 3) + Ratio::new(self.g3 as i64, 2))
    }
}

/// A normal-form element: a finite sum of monomials with coefficients in `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalPoly<E: Coeff> {
    ctx: E::Ctx,
    terms: BTreeMap<Mono, E>,
}

impl<E: Coeff> NormalPoly<E> {
    pub fn zero(ctx: E::Ctx) -> Self {
        NormalPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: E) -> Self {
        Self::monomial(Mono::ONE, c)
    }

    pub fn one(ctx: E::Ctx) -> Self {
        Self::constant(E::one(ctx))
    }

    pub fn monomial(m: Mono, c: E) -> Self {
        let mut p = Self::zero(c.ctx());
        p.add_term(m, &c);
        p
    }

    pub fn from_terms(ctx: E::Ctx, terms: impl IntoIterator<Item = (Mono, E)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ctx(&self) -> E::Ctx {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &E)> {
        self.terms.iter()
    }

    pub fn get(&self, m: &Mono) -> E {
        self.terms.get(m).cloned().unwrap_or_else(|| E::zero(self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this is a constant (possibly zero).
    pub fn as_constant(&self) -> Option<E> {
        match self.terms.len() {
            0 => Some(E::zero(self.ctx)),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Mono, c: &E) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(|| E::zero(c.ctx()));
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NormalPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &E) -> Self {
        Self::from_terms(self.ctx, self.terms.iter().map(|(m, c)| (*m, c.mul(k))))
    }

    /// Product reduced to normal form.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.ctx);
        let c1728 = E::from_i64(self.ctx, 1728);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let c = x.mul(y);
                let g2 = (a.g2 + b.g2) as u32;
                let g3 = (a.g3 + b.g3) as u32;
                let j = a.j + b.j + g2 / 3;
                let g2 = (g2 % 3) as u8;
                if g3 >= 2 {
                    // G3^2 = J - 1728
                    out.add_term(Mono { j: j + 1, g2, g3: 0 }, &c);
                    out.add_term(Mono { j, g2, g3: 0 }, &c.mul(&c1728).neg());
                } else {
                    out.add_term(Mono { j, g2, g3: g3 as u8 }, &c);
                }
            }
        }
        out
    }

    /// Divides every coefficient by `k`, `None` if any division is inexact.
    pub fn div_small(&self, k: u64) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.div_small(k)?);
        }
        Some(NormalPoly { ctx: self.ctx, terms })
    }

    pub fn div_exact(&self, d: &E) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.div_exact(d)?);
        }
        Some(NormalPoly { ctx: self.ctx, terms })
    }

    /// Lowest q-adic valuation over the monomials; distinct normal-form
    /// monomials never share a valuation, so this is exact.
    pub fn valuation(&self) -> Option<Ratio<i64>> {
        self.terms.keys().map(Mono::valuation).min()
    }

    /// Largest power of `J` present.
    pub fn j_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    pub fn map<F: Coeff>(&self, ctx: F::Ctx, f: impl Fn(&E) -> F) -> NormalPoly<F> {
        NormalPoly::from_terms(ctx, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Substitutes the q-series of `j`, `gamma2`, `gamma3`, each with `n`
    /// unit coefficients.
    pub fn to_series<C: Coeff<Ctx = E::Ctx>>(&self, forms: &Forms<C>, n: usize, lift: impl Fn(&E) -> C) -> Series<C> {
        let ctx = forms.ctx();
        let j = forms.j(n);
        let g2 = forms.gamma2(n);
        let g3 = forms.gamma3(n);
        let mut acc = Series::zero(ctx);
        for (m, c) in &self.terms {
            let mut s = Series::monomial(lift(c), 0, 1);
            s = s.mul(&j.pow(m.j as i64).expect("nonnegative"));
            s = s.mul(&g2.pow(m.g2 as i64).expect("nonnegative"));
            s = s.mul(&g3.pow(m.g3 as i64).expect("nonnegative"));
            acc = acc.add(&s);
        }
        acc
    }
}

/// `G2^g2 G3^g3 P(J)`: the recognized shape of an invariant series.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPoly<E: Coeff> {
    pub g2: u8,
    pub g3: u8,
    /// `poly[d]` is the coefficient of `J^d`; no trailing zeros.
    pub poly: Vec<E>,
}

impl<E: Coeff> GammaPoly<E> {
    pub fn new(g2: u8, g3: u8, mut poly: Vec<E>) -> Self {
        assert!(g2 < 3 && g3 < 2, "gamma exponents out of normal form");
        while poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        GammaPoly { g2, g3, poly }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.len().checked_sub(1)
    }

    pub fn to_normal(&self, ctx: E::Ctx) -> NormalPoly<E> {
        NormalPoly::from_terms(
            ctx,
            self.poly
                .iter()
                .enumerate()
                .map(|(d, c)| (Mono::new(d as u32, self.g2, self.g3), c.clone())),
        )
    }
}

impl fmt::Display for GammaPoly<num_bigint::BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::normal_to_text(&self.to_normal(())))
    }
}

/// A modular equation: `coeffs[d]` multiplies `F^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModEqPoly<E: Coeff> {
    pub coeffs: Vec<NormalPoly<E>>,
    pub label: String,
}

impl<E: Coeff> ModEqPoly<E> {
    pub fn new(coeffs: Vec<NormalPoly<E>>, label: impl Into<String>) -> Self {
        ModEqPoly {
            coeffs,
            label: label.into(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, fdeg: usize) -> &NormalPoly<E> {
        &self.coeffs[fdeg]
    }

    pub fn constant_term(&self) -> &NormalPoly<E> {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .and_then(|c| c.as_constant())
            .is_some_and(|c| c == E::one(c.ctx()))
    }

    pub fn map<F: Coeff>(&self, ctx: F::Ctx, f: impl Fn(&E) -> F) -> ModEqPoly<F> {
        ModEqPoly {
            coeffs: self.coeffs.iter().map(|c| c.map(ctx, &f)).collect(),
            label: self.label.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn m(j: u32, g2: u8, g3: u8) -> NormalPoly<BigInt> {
        NormalPoly::monomial(Mono::new(j, g2, g3), c(1))
    }

    #[test]
    fn relations() {
        assert_eq!(m(0, 1, 0).mul(&m(0, 2, 0)), m(1, 0, 0));
        let j_minus = NormalPoly::from_terms((), [(Mono::new(1, 0, 0), c(1)), (Mono::ONE, c(-1728))]);
        assert_eq!(m(0, 0, 1).mul(&m(0, 0, 1)), j_minus);
        let lhs = m(0, 1, 1).mul(&m(0, 2, 1));
        assert_eq!(lhs, m(1, 0, 0).mul(&j_minus));
    }

    #[test]
    fn valuations() {
        assert_eq!(Mono::new(2, 1, 1).valuation(), Ratio::new(-17, 6));
        let p = m(0, 2, 0).add(&m(1, 0, 0));
        assert_eq!(p.valuation(), Some(Ratio::from_integer(-1)));
    }
}

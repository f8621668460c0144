//! q-expansions of eta, the Eisenstein series, `j`, `gamma2`, `gamma3` and
//! the eta quotients used by the pipelines.
//!
//! `gamma2 = E4/eta^8` and `gamma3 = E6/eta^12` are built from Eisenstein
//! series, so no root of a series is ever extracted. Note that
//! `gamma3 = q^{-1/2}(1 - 492q - 22590q^2 - 367400q^3 - ...)`: the `22590`
//! term sits at `q^2`, which is what `gamma3^2 = j - 1728` forces.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::coeff::Coeff;
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Pentagonal(i64),
    PentagonalInv,
    E4,
    E6,
    Delta,
    J,
    Gamma2,
    Gamma3,
    C12(i64, i64),
}

/// Memoizing generator of modular forms over one coefficient ring.
///
/// Every generator takes `n`, the number of coefficients of the underlying
/// unit series (so `j(n)` is known modulo `q^{n-1}`, `gamma2(n)` modulo
/// `q^{n-1/3}`). Requests for fewer terms than cached are served by
/// truncation; the cache is safe to share between threads.
pub struct Forms<C: Coeff> {
    ctx: C::Ctx,
    cache: Mutex<HashMap<Kind, (usize, Series<C>)>>,
}

/// Which form the `series` front end should print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Eta,
    E4,
    E6,
    Delta,
    J,
    Gamma2,
    Gamma3,
}

impl FormKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "eta" => FormKind::Eta,
            "e4" => FormKind::E4,
            "e6" => FormKind::E6,
            "delta" => FormKind::Delta,
            "j" => FormKind::J,
            "gamma2" | "g2" => FormKind::Gamma2,
            "gamma3" | "g3" => FormKind::Gamma3,
            _ => return None,
        })
    }
}

/// `sigma_k(n)` for `n < len`.
fn divisor_sums(k: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); len];
    for d in 1..len {
        let dk = BigInt::from(d).pow(k);
        let mut m = d;
        while m < len {
            out[m] += &dk;
            m += d;
        }
    }
    out
}

/// Exponents and signs of `prod_{n>=1} (1 - x^n)` below `x^n`:
/// `sum_k (-1)^k x^{k(3k-1)/2}` over all integers `k`.
pub fn pentagonal_terms(n: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0, 1)];
    for k in 1i64.. {
        let a = (k * (3 * k - 1) / 2) as usize;
        if a >= n {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((a, sign));
        let b = (k * (3 * k + 1) / 2) as usize;
        if b < n {
            out.push((b, sign));
        }
    }
    out
}

impl<C: Coeff> Forms<C> {
    pub fn new(ctx: C::Ctx) -> Self {
        Forms {
            ctx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    fn cached(&self, kind: Kind, n: usize, build: impl FnOnce() -> Series<C>) -> Series<C> {
        {
            let cache = self.cache.lock().expect("forms cache poisoned");
            if let Some((have, s)) = cache.get(&kind) {
                if *have >= n {
                    return shrink(s, *have, n);
                }
            }
        }
        let s = build();
        let mut cache = self.cache.lock().expect("forms cache poisoned");
        let keep = cache.get(&kind).map_or(true, |(have, _)| *have < n);
        if keep {
            cache.insert(kind, (n, s.clone()));
        }
        s
    }

    /// `prod_{k>=1} (1 - q^{scale k})` modulo `q^n`, over denominator 1.
    pub fn pentagonal(&self, scale: i64, n: usize) -> Series<C> {
        assert!(scale >= 1);
        self.cached(Kind::Pentagonal(scale), n, || {
            let base = pentagonal_terms(n.div_ceil(scale as usize));
            let terms: Vec<(i64, C)> = base
                .into_iter()
                .map(|(e, s)| (e as i64 * scale, C::from_i64(self.ctx, s)))
                .filter(|(e, _)| (*e as usize) < n)
                .collect();
            Series::from_terms(self.ctx, 1, &terms, Some(n as i64 - 1))
        })
    }

    /// `1/prod (1 - q^k)`, the partition generating function, modulo `q^n`.
    pub fn pentagonal_inv(&self, n: usize) -> Series<C> {
        self.cached(Kind::PentagonalInv, n, || {
            self.pentagonal(1, n).inv().expect("unit leading coefficient")
        })
    }

    /// `eta(scale z)` with the product known to `n` terms in `q^scale`.
    pub fn eta_series(&self, scale: Ratio<i64>, n: usize) -> Series<C> {
        let (a, b) = (*scale.numer(), *scale.denom());
        assert!(a > 0 && b > 0, "eta scale must be positive");
        // prod (1 - q^{a k / b}) written in the variable q^{1/b}
        let prod = self.pentagonal(a, a as usize * n).substitute_power(1, b);
        prod.shift(a, 24 * b)
    }

    pub fn e4(&self, n: usize) -> Series<C> {
        self.cached(Kind::E4, n, || self.eisenstein(3, 240, n))
    }

    pub fn e6(&self, n: usize) -> Series<C> {
        self.cached(Kind::E6, n, || self.eisenstein(5, -504, n))
    }

    fn eisenstein(&self, k: u32, c: i64, n: usize) -> Series<C> {
        let sig = divisor_sums(k, n);
        let c = BigInt::from(c);
        let mut coeffs: Vec<C> = sig.iter().map(|s| C::from_bigint(self.ctx, &(s * &c))).collect();
        if let Some(first) = coeffs.first_mut() {
            *first = C::one(self.ctx);
        }
        Series::from_dense(self.ctx, 1, 0, coeffs, Some(n as i64 - 1))
    }

    /// `Delta = q prod (1-q^k)^24`, known modulo `q^n`.
    pub fn delta(&self, n: usize) -> Series<C> {
        self.cached(Kind::Delta, n, || {
            let inner = self.pentagonal(1, n.max(2) - 1).pow(24).expect("nonnegative power");
            inner.shift(1, 1).truncate(n as i64 - 1)
        })
    }

    /// `j = E4^3 / Delta`, with `n` coefficients starting at `q^{-1}`.
    pub fn j(&self, n: usize) -> Series<C> {
        self.cached(Kind::J, n, || {
            let e4 = self.e4(n);
            let unit = e4.mul(&e4).mul(&e4).mul(&self.unit_power(24, n));
            unit.shift(-1, 1)
        })
    }

    /// `gamma2 = E4 / eta^8`, with `n` coefficients starting at `q^{-1/3}`.
    pub fn gamma2(&self, n: usize) -> Series<C> {
        self.cached(Kind::Gamma2, n, || self.e4(n).mul(&self.unit_power(8, n)).shift(-1, 3))
    }

    /// `gamma3 = E6 / eta^12`, with `n` coefficients starting at `q^{-1/2}`.
    pub fn gamma3(&self, n: usize) -> Series<C> {
        self.cached(Kind::Gamma3, n, || self.e6(n).mul(&self.unit_power(12, n)).shift(-1, 2))
    }

    /// `prod (1 - q^k)^{-k}` modulo `q^n`.
    fn unit_power(&self, k: i64, n: usize) -> Series<C> {
        self.pentagonal_inv(n).pow(k).expect("nonnegative power")
    }

    /// `C12(w) = P(w^{p1 p2}) P(w) / (P(w^{p1}) P(w^{p2}))` modulo `w^n`,
    /// where `P(x) = prod (1 - x^k)`. Symmetric in the two primes.
    pub fn c12(&self, p1: u64, p2: u64, n: usize) -> Series<C> {
        let (a, b) = (p1.min(p2) as i64, p1.max(p2) as i64);
        self.cached(Kind::C12(a, b), n, || {
            let num = self.pentagonal(a * b, n).mul(&self.pentagonal(1, n));
            let den = self.pentagonal(a, n).mul(&self.pentagonal(b, n));
            num.mul(&den.inv().expect("unit leading coefficient"))
        })
    }

    /// `(eta(z/p1) eta(z/p2) / (eta(z/(p1 p2)) eta(z)))^e` as a series in
    /// `q^{1/(p1 p2)}` with `n` coefficients after the leading one.
    pub fn w_quotient(&self, p1: u64, p2: u64, e: i64, n: usize) -> Series<C> {
        let (a, b) = (p1 as i64, p2 as i64);
        let big_n = a * b;
        let num = self.pentagonal(a, n).mul(&self.pentagonal(b, n));
        let den = self.pentagonal(1, n).mul(&self.pentagonal(big_n, n));
        let unit = num
            .mul(&den.inv().expect("unit leading coefficient"))
            .pow(e)
            .expect("valid power");
        // leading exponent (p1 + p2 - 1 - N)/24 in units of q^{1/N}, times e
        let lead = Ratio::new((a + b - 1 - big_n) * e, 24);
        unit.shift(*lead.numer(), *lead.denom()).substitute_power(1, big_n)
    }

    /// One of the named forms, for display; `n` as in the generators.
    pub fn by_kind(&self, kind: FormKind, n: usize) -> Series<C> {
        match kind {
            FormKind::Eta => self.eta_series(Ratio::from_integer(1), n),
            FormKind::E4 => self.e4(n),
            FormKind::E6 => self.e6(n),
            FormKind::Delta => self.delta(n),
            FormKind::J => self.j(n),
            FormKind::Gamma2 => self.gamma2(n),
            FormKind::Gamma3 => self.gamma3(n),
        }
    }
}

/// Cuts a cached series computed with `have` unit terms down to `n`.
fn shrink<C: Coeff>(s: &Series<C>, have: usize, n: usize) -> Series<C> {
    match s.trunc_num() {
        Some(t) if have != n => s.truncate(t - ((have - n) as i64) * s.denom()),
        _ => s.clone(),
    }
}

//! Coefficient domains shared by the exact and the multi-modular pipelines.
//!
//! Every pipeline in this crate is generic over [`Coeff`]. The exact path
//! uses [`BigRational`] for series and [`BigInt`] for recognized
//! polynomials; the CRT path uses [`Fp`] for both.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative coefficient ring with optional inverses.
///
/// `Ctx` carries whatever runtime data the ring needs (the modulus for
/// [`Fp`], nothing for the integers and rationals) so that constants can be
/// manufactured without an existing element at hand.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Copy + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn from_bigint(ctx: Self::Ctx, v: &BigInt) -> Self;
    fn from_i64(ctx: Self::Ctx, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` when the element is not a unit.
    fn inv(&self) -> Option<Self>;
    /// Exact division by a small positive integer, `None` if not exact.
    fn div_small(&self, k: u64) -> Option<Self>;
    /// Exact division, `None` if the quotient leaves the ring.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    /// Whether the element is (the image of) an integer.
    fn is_integral(&self) -> bool;
    /// Approximate complex-plane value; `None` for residues.
    fn to_f64(&self) -> Option<f64>;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 0)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn add_assign(&mut self, other: &Self) {
        *self = Coeff::add(self, other);
    }

    /// Image of a rational number, `None` when its denominator is not a unit.
    fn from_ratio(ctx: Self::Ctx, r: &BigRational) -> Option<Self> {
        let d = Self::from_bigint(ctx, r.denom()).inv()?;
        Some(Self::from_bigint(ctx, r.numer()).mul(&d))
    }

    /// First `n` coefficients of `1/u` for a dense `u` with `u[0] = 1`.
    fn unit_series_inverse(u: &[Self], n: usize) -> Vec<Self> {
        let ctx = u[0].ctx();
        let nz: Vec<usize> = (1..u.len().min(n)).filter(|&j| !u[j].is_zero()).collect();
        let mut w = Vec::with_capacity(n);
        w.push(Self::one(ctx));
        for i in 1..n {
            let mut acc = Self::zero(ctx);
            for &j in nz.iter().take_while(|&&j| j <= i) {
                acc.add_assign(&u[j].mul(&w[i - j]));
            }
            w.push(acc.neg());
        }
        w
    }

    /// Truncated product of two dense coefficient vectors; entry `n` of the
    /// result is `sum_{i+j=n} a[i] b[j]`, for `n < len`.
    fn convolve(a: &[Self], b: &[Self], len: usize, ctx: Self::Ctx) -> Vec<Self> {
        let mut out = vec![Self::zero(ctx); len];
        let nb: Vec<usize> = (0..b.len()).filter(|&j| !b[j].is_zero()).collect();
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for &j in &nb {
                if i + j >= len {
                    break;
                }
                out[i + j].add_assign(&x.mul(&b[j]));
            }
        }
        out
    }
}

/// Coefficients of q-series that can be projected onto the ring used for
/// recognized polynomials (integers for the exact path).
pub trait SeriesCoeff: Coeff {
    type Exact: Coeff<Ctx = Self::Ctx>;
    fn to_exact(&self) -> Option<Self::Exact>;
    fn from_exact(v: &Self::Exact) -> Self;
}

impl Coeff for BigInt {
    type Ctx = ();

    fn ctx(&self) {}
    fn from_bigint(_: (), v: &BigInt) -> Self {
        v.clone()
    }
    fn from_i64(_: (), v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if self.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }
    fn div_small(&self, k: u64) -> Option<Self> {
        let (q, r) = self.div_rem(&BigInt::from(k));
        Zero::is_zero(&r).then_some(q)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            return None;
        }
        let (q, r) = self.div_rem(d);
        Zero::is_zero(&r).then_some(q)
    }
    fn is_integral(&self) -> bool {
        true
    }
    fn to_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

impl Coeff for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn from_bigint(_: (), v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_i64(_: (), v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn div_small(&self, k: u64) -> Option<Self> {
        Some(self / BigRational::from_integer(BigInt::from(k)))
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (!Zero::is_zero(d)).then(|| self / d)
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn to_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn unit_series_inverse(u: &[Self], n: usize) -> Vec<Self> {
        if u.iter().all(|c| c.is_integer()) {
            let ints: Vec<BigInt> = u.iter().map(|c| c.numer().clone()).collect();
            return BigInt::unit_series_inverse(&ints, n)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
        }
        let ctx = ();
        let nz: Vec<usize> = (1..u.len().min(n)).filter(|&j| !Zero::is_zero(&u[j])).collect();
        let mut w: Vec<BigRational> = Vec::with_capacity(n);
        w.push(<BigRational as One>::one());
        for i in 1..n {
            let mut acc = <BigRational as Coeff>::zero(ctx);
            for &j in nz.iter().take_while(|&&j| j <= i) {
                acc += &u[j] * &w[i - j];
            }
            w.push(-acc);
        }
        w
    }

    /// Clears denominators and convolves over the integers; each output
    /// coefficient is reduced once at the end.
    fn convolve(a: &[Self], b: &[Self], len: usize, _: ()) -> Vec<Self> {
        let (na, da) = clear_denominators(a);
        let (nb, db) = clear_denominators(b);
        let num = BigInt::convolve(&na, &nb, len, ());
        let den = da * db;
        num.into_iter()
            .map(|n| {
                if den.is_one() {
                    BigRational::from_integer(n)
                } else {
                    BigRational::new(n, den.clone())
                }
            })
            .collect()
    }
}

fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut den = <BigInt as One>::one();
    for x in v {
        if !x.denom().is_one() {
            den = den.lcm(x.denom());
        }
    }
    let nums = v
        .iter()
        .map(|x| {
            if den.is_one() {
                x.numer().clone()
            } else {
                x.numer() * (&den / x.denom())
            }
        })
        .collect();
    (nums, den)
}

impl SeriesCoeff for BigInt {
    type Exact = BigInt;

    fn to_exact(&self) -> Option<BigInt> {
        Some(self.clone())
    }
    fn from_exact(v: &BigInt) -> Self {
        v.clone()
    }
}

impl SeriesCoeff for BigRational {
    type Exact = BigInt;

    fn to_exact(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }
    fn from_exact(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

/// Residue modulo a prime below 2^62.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

/// Largest modulus accepted by [`Fp`]; keeps lazy u128 accumulation safe.
pub const MAX_MODULUS: u64 = 1 << 62;

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus > 1 && modulus < MAX_MODULUS);
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::new(1, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = Coeff::mul(&acc, &base);
            }
            base = Coeff::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Coeff for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.modulus
    }
    fn from_bigint(m: u64, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(m));
        Fp::new(r.to_u64().expect("reduced residue fits u64"), m)
    }
    fn from_i64(m: u64, v: i64) -> Self {
        Fp::new(v.rem_euclid(m as i64) as u64, m)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.value + o.value;
        Fp {
            value: if s >= self.modulus { s - self.modulus } else { s },
            modulus: self.modulus,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        let v = if self.value >= o.value {
            self.value - o.value
        } else {
            self.value + self.modulus - o.value
        };
        Fp {
            value: v,
            modulus: self.modulus,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Fp {
            value: ((self.value as u128 * o.value as u128) % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i128).extended_gcd(&(self.modulus as i128));
        if g.gcd != 1 {
            return None;
        }
        Some(Fp::new(
            g.x.rem_euclid(self.modulus as i128) as u64,
            self.modulus,
        ))
    }
    fn div_small(&self, k: u64) -> Option<Self> {
        Fp::new(k, self.modulus).inv().map(|i| Coeff::mul(self, &i))
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        d.inv().map(|i| Coeff::mul(self, &i))
    }
    fn is_integral(&self) -> bool {
        true
    }
    fn to_f64(&self) -> Option<f64> {
        None
    }

    fn unit_series_inverse(u: &[Self], n: usize) -> Vec<Self> {
        let m = u[0].modulus;
        let nz: Vec<(usize, u128)> = (1..u.len().min(n))
            .filter(|&j| u[j].value != 0)
            .map(|j| (j, u[j].value as u128))
            .collect();
        let mut w: Vec<Fp> = Vec::with_capacity(n);
        w.push(Fp::new(1, m));
        for i in 1..n {
            let mut acc: u128 = 0;
            for &(j, x) in nz.iter().take_while(|&&(j, _)| j <= i) {
                acc += x * w[i - j].value as u128;
                if acc >= 1 << 126 {
                    acc %= m as u128;
                }
            }
            w.push(Fp::new((acc % m as u128) as u64, m).neg());
        }
        w
    }

    fn convolve(a: &[Self], b: &[Self], len: usize, m: u64) -> Vec<Self> {
        const FLUSH: u128 = 1 << 126;
        let mut acc = vec![0u128; len];
        let nb: Vec<(usize, u128)> = b
            .iter()
            .enumerate()
            .filter(|(_, x)| x.value != 0)
            .map(|(j, x)| (j, x.value as u128))
            .collect();
        for (i, x) in a.iter().enumerate().take(len) {
            if x.value == 0 {
                continue;
            }
            let xv = x.value as u128;
            for &(j, y) in &nb {
                if i + j >= len {
                    break;
                }
                let slot = &mut acc[i + j];
                *slot += xv * y;
                if *slot >= FLUSH {
                    *slot %= m as u128;
                }
            }
        }
        acc.into_iter()
            .map(|v| Fp {
                value: (v % m as u128) as u64,
                modulus: m,
            })
            .collect()
    }
}

impl SeriesCoeff for Fp {
    type Exact = Fp;

    fn to_exact(&self) -> Option<Fp> {
        Some(*self)
    }
    fn from_exact(v: &Fp) -> Self {
        *v
    }
}

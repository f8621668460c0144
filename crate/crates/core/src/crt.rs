//! Multi-modular computation: run a pipeline modulo several word-sized
//! primes and lift the coefficients with the Chinese remainder theorem.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::Fp;
use crate::double_eta::{self, ParamSet};
use crate::error::{Error, Result};
use crate::kiepert::{self, GUARD};
use crate::poly::{ModEqPoly, Mono, NormalPoly};

/// Which equation to compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Kiepert(u64),
    DoubleEta(ParamSet),
}

impl Target {
    pub fn degree(&self) -> usize {
        match self {
            Target::Kiepert(p) => *p as usize + 1,
            Target::DoubleEta(params) => params.degree,
        }
    }

    fn excluded(&self) -> Vec<u64> {
        match self {
            Target::Kiepert(p) => vec![*p],
            Target::DoubleEta(params) => vec![params.p1, params.p2],
        }
    }

    pub fn label(&self) -> String {
        match self {
            Target::Kiepert(p) => kiepert::label(*p),
            Target::DoubleEta(params) => params.label(params.sign),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtPlan {
    /// Most primes to try before giving up.
    pub max_primes: usize,
    /// Primes are taken downward from `2^bits`.
    pub bits: u32,
    /// Consecutive primes that must leave the lift unchanged.
    pub stability: usize,
    /// Extra series coefficients carried by each modular run.
    pub guard: usize,
}

impl Default for CrtPlan {
    fn default() -> Self {
        CrtPlan {
            max_primes: 64,
            bits: 62,
            stability: 2,
            guard: GUARD,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes below `2^bits` that exceed `degree` and avoid
/// `excluded`.
pub fn admissible_primes(count: usize, bits: u32, degree: usize, excluded: &[u64]) -> Vec<u64> {
    assert!((2..=62).contains(&bits), "prime size must be between 2 and 62 bits");
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << bits) - 1;
    while out.len() < count && n > degree as u64 {
        if is_prime_u64(n) && !excluded.contains(&n) {
            out.push(n);
        }
        n -= 1;
    }
    out
}

/// The equation modulo one prime.
pub fn run_modular(target: &Target, modulus: u64) -> Result<ModEqPoly<Fp>> {
    run_modular_with(target, modulus, GUARD)
}

pub fn run_modular_with(target: &Target, modulus: u64, guard: usize) -> Result<ModEqPoly<Fp>> {
    if modulus as usize <= target.degree() || target.excluded().contains(&modulus) || !is_prime_u64(modulus) {
        return Err(Error::InadmissiblePrime(modulus));
    }
    match target {
        Target::Kiepert(p) => kiepert::build_with::<Fp>(modulus, *p, guard),
        Target::DoubleEta(params) => double_eta::compute::<Fp>(modulus, params, guard),
    }
}

/// `r mod m` mapped to `(-m/2, m/2]`.
pub fn symmetric_lift(r: &BigInt, m: &BigInt) -> BigInt {
    let r = r.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Running CRT state over all coefficients seen so far.
#[derive(Clone, Debug)]
pub struct CrtAccumulator {
    modulus: BigInt,
    degree: usize,
    residues: BTreeMap<(usize, Mono), BigInt>,
}

impl CrtAccumulator {
    pub fn new(degree: usize) -> Self {
        CrtAccumulator {
            modulus: BigInt::one(),
            degree,
            residues: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Folds in the image of the equation modulo another prime.
    pub fn add(&mut self, eq: &ModEqPoly<Fp>, m: u64) -> Result<()> {
        if eq.degree() != self.degree {
            return Err(Error::InvariantViolation(format!(
                "degree {} modulo {m}, expected {}",
                eq.degree(),
                self.degree
            )));
        }
        let mut images: BTreeMap<(usize, Mono), u64> = BTreeMap::new();
        for (d, c) in eq.coeffs.iter().enumerate() {
            for (mono, v) in c.terms() {
                images.insert((d, *mono), v.value());
            }
        }
        let keys: BTreeSet<(usize, Mono)> = images.keys().chain(self.residues.keys()).copied().collect();
        let mb = BigInt::from(m);
        let inv = self
            .modulus
            .mod_floor(&mb)
            .extended_gcd(&mb)
            .x
            .mod_floor(&mb);
        for key in keys {
            let r = BigInt::from(images.get(&key).copied().unwrap_or(0));
            let x = self.residues.entry(key).or_insert_with(BigInt::zero);
            let step = ((&r - &*x) * &inv).mod_floor(&mb);
            *x += &self.modulus * step;
        }
        self.modulus *= mb;
        Ok(())
    }

    /// Symmetric lift of every coefficient.
    pub fn lift(&self, label: &str) -> ModEqPoly<BigInt> {
        let mut coeffs = vec![NormalPoly::zero(()); self.degree + 1];
        for ((d, mono), r) in &self.residues {
            let v = symmetric_lift(r, &self.modulus);
            if !v.is_zero() {
                coeffs[*d].add_term(*mono, &v);
            }
        }
        ModEqPoly::new(coeffs, label)
    }
}

/// Statistics of a multi-modular run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtStats {
    pub primes: Vec<u64>,
    pub modulus_bits: u64,
}

/// Lifts residues until the result is stable for `plan.stability`
/// further primes. Primes are processed in parallel batches.
pub fn build_crt(target: &Target, plan: &CrtPlan) -> Result<(ModEqPoly<BigInt>, CrtStats)> {
    let primes = admissible_primes(plan.max_primes, plan.bits, target.degree(), &target.excluded());
    let label = target.label();
    let mut acc = CrtAccumulator::new(target.degree());
    let mut used = Vec::new();
    let mut last: Option<ModEqPoly<BigInt>> = None;
    let mut stable = 0;
    let batch = rayon::current_num_threads().max(plan.stability + 1);
    for chunk in primes.chunks(batch) {
        let images: Vec<ModEqPoly<Fp>> = chunk
            .par_iter()
            .map(|&m| run_modular_with(target, m, plan.guard))
            .collect::<Result<_>>()?;
        for (eq, &m) in images.iter().zip(chunk) {
            acc.add(eq, m)?;
            used.push(m);
            let lifted = acc.lift(&label);
            if last.as_ref() == Some(&lifted) {
                stable += 1;
                if stable >= plan.stability {
                    let stats = CrtStats {
                        primes: used,
                        modulus_bits: acc.modulus().bits(),
                    };
                    return Ok((lifted, stats));
                }
            } else {
                stable = 0;
            }
            last = Some(lifted);
        }
    }
    Err(Error::NotConverged(used.len()))
}

/// Largest absolute coefficient, useful for sizing a run.
pub fn height(eq: &ModEqPoly<BigInt>) -> BigInt {
    eq.coeffs
        .iter()
        .flat_map(|c| c.terms().map(|(_, v)| v.abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

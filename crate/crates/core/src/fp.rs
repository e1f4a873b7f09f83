//! Arithmetic over the prime field F_p, generalized binomial coefficients and
//! sparse linear combinations with F_p coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted by [`Prime::new`].
pub const MAX_PRIME: u32 = 97;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p))
    }

    pub const fn two() -> Self {
        Prime(2)
    }

    pub const fn three() -> Self {
        Prime(3)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, n: i64) -> u32 {
        n.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero in F_{}", self.0);
        self.pow(a, (self.0 - 2) as u64)
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p that remembers its prime.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: Prime,
    v: u32,
}

impl Fp {
    pub fn new(p: Prime, n: i64) -> Self {
        Fp { p, v: p.reduce(n) }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { p, v: 0 }
    }

    pub fn one(p: Prime) -> Self {
        Fp { p, v: 1 }
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn value(self) -> u32 {
        self.v
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn inv(self) -> Option<Self> {
        (self.v != 0).then(|| Fp {
            p: self.p,
            v: self.p.inv(self.v),
        })
    }

    pub fn pow(self, e: u64) -> Self {
        Fp {
            p: self.p,
            v: self.p.pow(self.v, e),
        }
    }

    fn check(self, other: Fp) {
        assert_eq!(self.p, other.p, "mixed primes in F_p arithmetic");
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        self.check(o);
        Fp {
            p: self.p,
            v: self.p.add(self.v, o.v),
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self + (-o)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            p: self.p,
            v: self.p.neg(self.v),
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        self.check(o);
        Fp {
            p: self.p,
            v: self.p.mul(self.v, o.v),
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// Binomial coefficient `n(n-1)...(n-k+1)/k!` reduced mod p, for arbitrary
/// integers `n`; zero when `k < 0`.
pub fn binom_mod_p(n: i64, k: i64, p: Prime) -> Fp {
    Fp {
        p,
        v: binom_raw(n, k, p),
    }
}

/// Residue version of [`binom_mod_p`].
pub fn binom_raw(n: i64, k: i64, p: Prime) -> u32 {
    if k < 0 {
        return 0;
    }
    if n >= 0 {
        return lucas(n as u64, k as u64, p);
    }
    // binom(n, k) = (-1)^k binom(k - n - 1, k) for negative n.
    let m = (k - n - 1) as u64;
    p.mul(p.sign(k), lucas(m, k as u64, p))
}

fn lucas(mut n: u64, mut k: u64, p: Prime) -> u32 {
    let q = p.get() as u64;
    let mut acc = 1u32;
    while k > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return 0;
        }
        acc = p.mul(acc, small_binom(nd, kd, p));
        n /= q;
        k /= q;
    }
    acc
}

fn small_binom(n: u64, k: u64, p: Prime) -> u32 {
    let (mut num, mut den) = (1u32, 1u32);
    for i in 0..k {
        num = p.mul(num, ((n - i) % p.get() as u64) as u32);
        den = p.mul(den, ((i + 1) % p.get() as u64) as u32);
    }
    p.mul(num, p.inv(den))
}

/// A finitely supported linear combination of keys with F_p coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    p: Prime,
    terms: BTreeMap<K, u32>,
}

impl<K: Ord> LinComb<K> {
    pub fn zero(p: Prime) -> Self {
        LinComb {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(p: Prime, key: K) -> Self {
        let mut c = Self::zero(p);
        c.add_term(key, 1);
        c
    }

    pub fn prime(&self) -> Prime {
        self.p
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

    pub fn coeff(&self, key: &K) -> u32 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, key: K, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = p.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<K>, c: u32)
    where
        K: Clone,
    {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), self.p.mul(*v, c));
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<K>)
    where
        K: Clone,
    {
        self.add_scaled(other, 1);
    }

    pub fn scaled(mut self, c: u32) -> Self {
        let c = c % self.p.get();
        if c == 0 {
            self.terms.clear();
            return self;
        }
        let p = self.p;
        for v in self.terms.values_mut() {
            *v = p.mul(*v, c);
        }
        self
    }

    pub fn negated(self) -> Self {
        let m = self.p.get() - 1;
        self.scaled(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u32)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, u32)> {
        self.terms.into_iter()
    }

    pub fn first(&self) -> Option<(&K, u32)> {
        self.terms.iter().next().map(|(k, v)| (k, *v))
    }

    /// Applies a key map, merging collisions.
    pub fn map_keys<L: Ord>(self, mut f: impl FnMut(K) -> L) -> LinComb<L> {
        let mut out = LinComb::zero(self.p);
        for (k, v) in self.terms {
            out.add_term(f(k), v);
        }
        out
    }

    /// Applies a linear map defined on keys.
    pub fn flat_map<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<L>) -> LinComb<L> {
        let mut out = LinComb::zero(self.p);
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), *v);
        }
        out
    }

    pub fn try_flat_map<L: Ord + Clone>(
        &self,
        mut f: impl FnMut(&K) -> Result<LinComb<L>>,
    ) -> Result<LinComb<L>> {
        let mut out = LinComb::zero(self.p);
        for (k, v) in &self.terms {
            out.add_scaled(&f(k)?, *v);
        }
        Ok(out)
    }
}

impl<K: Ord> LinComb<K> {
    pub fn from_terms(p: Prime, terms: impl IntoIterator<Item = (K, u32)>) -> Self {
        let mut c = Self::zero(p);
        for (k, v) in terms {
            c.add_term(k, v);
        }
        c
    }
}

/// Merges `(scalar, key)` pairs into a linear combination over F_p; every
/// scalar must live in F_p.
pub fn fp_linear_combine<K: Ord>(p: Prime, terms: Vec<(Fp, K)>) -> Result<LinComb<K>> {
    let mut out = LinComb::zero(p);
    for (c, k) in terms {
        if c.prime() != p {
            return Err(Error::MixedPrimes(p.get(), c.prime().get()));
        }
        out.add_term(k, c.value());
    }
    Ok(out)
}

/// Renders a linear combination as `c*key + ...`, or `0`.
pub fn format_comb<K: Ord>(c: &LinComb<K>, mut show: impl FnMut(&K) -> String) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    c.iter()
        .map(|(k, v)| {
            if v == 1 {
                show(k)
            } else {
                format!("{v}*{}", show(k))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl<K: Ord> LinComb<K> {
    /// Removes and returns the smallest key with its coefficient.
    pub fn pop_first(&mut self) -> Option<(K, u32)> {
        self.terms.pop_first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize, p: u32) -> Vec<Vec<u32>> {
        let mut t = vec![vec![0u32; n + 1]; n + 1];
        for i in 0..=n {
            t[i][0] = 1;
            for k in 1..=i {
                t[i][k] = (t[i - 1][k - 1] + if k < i { t[i - 1][k] } else { 0 }) % p;
            }
        }
        t
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_mod_p(5, 2, Prime::three()).value(), 1);
        assert_eq!(binom_mod_p(7, 0, Prime::two()).value(), 1);
        assert_eq!(binom_mod_p(-1, 4, Prime::two()).value(), 1);
        assert_eq!(binom_mod_p(3, -1, Prime::two()).value(), 0);
        assert_eq!(binom_mod_p(2, 5, Prime::three()).value(), 0);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn lucas_agrees_with_pascal() {
        for p in [2, 3, 5] {
            let pr = Prime::new(p).unwrap();
            let t = pascal(200, p);
            for n in 0..=200usize {
                for k in 0..=n {
                    assert_eq!(binom_raw(n as i64, k as i64, pr), t[n][k], "({n},{k}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn negative_upper_matches_falling_factorial() {
        // exact falling factorial over the integers, reduced afterwards
        for p in [2u32, 3, 5, 7] {
            let pr = Prime::new(p).unwrap();
            for n in -12i64..=12 {
                for k in 0i64..=8 {
                    let mut num: i128 = 1;
                    let mut den: i128 = 1;
                    for i in 0..k {
                        num *= (n - i) as i128;
                        den *= (i + 1) as i128;
                    }
                    let exact = num / den;
                    assert_eq!(binom_raw(n, k, pr), exact.rem_euclid(p as i128) as u32);
                }
            }
        }
    }

    #[test]
    fn pascal_rule_everywhere() {
        for p in [2, 3, 5] {
            let pr = Prime::new(p).unwrap();
            for n in -50i64..=50 {
                for k in 0i64..=50 {
                    let lhs = binom_raw(n, k, pr);
                    let rhs = pr.add(binom_raw(n - 1, k - 1, pr), binom_raw(n - 1, k, pr));
                    assert_eq!(lhs, rhs, "n={n} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn minus_one_row_is_all_ones_mod_two() {
        for k in 0..300 {
            assert_eq!(binom_raw(-1, k, Prime::two()), 1);
        }
    }

    #[test]
    fn combine_examples() {
        let two = Prime::two();
        let three = Prime::three();
        let c = fp_linear_combine(two, vec![(Fp::new(two, 1), 'A'), (Fp::new(two, 1), 'A')]).unwrap();
        assert!(c.is_zero());
        let c = fp_linear_combine(three, vec![(Fp::new(three, 2), 'A'), (Fp::new(three, 1), 'B')]).unwrap();
        assert_eq!((c.coeff(&'A'), c.coeff(&'B')), (2, 1));
        let c = fp_linear_combine(three, vec![(Fp::new(three, 1), 'A'), (Fp::new(three, 2), 'A')]).unwrap();
        assert!(c.is_zero());
        let err = fp_linear_combine(three, vec![(Fp::new(two, 1), 'A')]);
        assert!(matches!(err, Err(Error::MixedPrimes(3, 2))));
    }

    #[test]
    fn primes_are_validated() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(101).is_err());
        assert_eq!(Prime::new(97).unwrap().get(), 97);
    }
}

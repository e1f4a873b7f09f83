//! Free shifted restricted Lie algebras over F_p.
//!
//! Elements are expanded in the Lyndon basis: a Lyndon word `u` stands for
//! its standard bracketing, `square` marks the self-bracket `[u, u]` (odd p,
//! `u` of even degree) and `restrictions` counts iterated restrictions. All
//! arithmetic is carried out inside the tensor algebra on the generators,
//! where a letter of total degree `l` has parity `l - 1`; the bracket is
//! `[a, b] = (-1)^{π(b)} (ab - (-1)^{π(a)π(b)} ba)` and the restriction is the
//! p-th tensor power. Results are read back by peeling off leading words.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{LinComb, Prime};

/// A word over the generator alphabet, letters indexed from 0.
pub type Word = Vec<u16>;

/// An element of the tensor algebra.
pub type Tensor = LinComb<Word>;

/// A basis element of the free shifted restricted Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieKey {
    pub word: Word,
    pub square: bool,
    pub restrictions: u32,
}

impl LieKey {
    pub fn lyndon(word: Word) -> Self {
        LieKey {
            word,
            square: false,
            restrictions: 0,
        }
    }
}

pub type LieElement = LinComb<LieKey>;

/// Duval's algorithm: all Lyndon words of length at most `max_len` over
/// `k` letters, in lexicographic order.
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<u16> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// True iff `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(w: &[u16]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|k| {
        let rot = w[k..].iter().chain(&w[..k]);
        w.iter().lt(rot)
    })
}

/// Standard factorization `w = u v` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u16]) -> (Word, Word) {
    for k in 1..w.len() {
        if is_lyndon(&w[k..]) {
            return (w[..k].to_vec(), w[k..].to_vec());
        }
    }
    panic!("standard factorization of a single letter");
}

/// Number of Lyndon words of length `n` over `q` letters (necklace formula).
pub fn necklace_count(q: u64, n: u32) -> u64 {
    fn mobius(mut n: u32) -> i64 {
        let mut m = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let total: i64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(d) * (q as i64).pow(n / d))
        .sum();
    (total / n as i64) as u64
}

/// Splits `w` as `r^m` with `r` primitive.
fn primitive_root(w: &[u16]) -> (&[u16], usize) {
    let n = w.len();
    for len in 1..=n {
        if n.is_multiple_of(len) && (0..n).all(|k| w[k] == w[k % len]) {
            return (&w[..len], n / len);
        }
    }
    (w, 1)
}

/// Degree of a word: the sum of `(l_i - 1)` over its letters, plus one.
pub fn word_degree(degrees: &[i64], w: &[u16]) -> i64 {
    w.iter().map(|&l| degrees[l as usize] - 1).sum::<i64>() + 1
}

/// Lyndon words of length at most `weight_cap` with their degrees.
pub fn lyndon_basis(degrees: &[i64], weight_cap: usize) -> Vec<(Word, i64)> {
    lyndon_words(degrees.len(), weight_cap)
        .into_iter()
        .map(|w| {
            let d = word_degree(degrees, &w);
            (w, d)
        })
        .collect()
}

/// A free shifted restricted Lie algebra on generators of the given total
/// degrees, with a cache of tensor images.
pub struct FreeLie {
    p: Prime,
    degrees: Vec<i64>,
    cache: HashMap<LieKey, Tensor>,
}

impl FreeLie {
    pub fn new(p: Prime, degrees: Vec<i64>) -> Self {
        FreeLie {
            p,
            degrees,
            cache: HashMap::new(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Adds a generator of degree `d`, returning its index.
    pub fn add_generator(&mut self, d: i64) -> u16 {
        self.degrees.push(d);
        (self.degrees.len() - 1) as u16
    }

    fn parity(&self, w: &[u16]) -> bool {
        w.iter()
            .map(|&l| self.degrees[l as usize] - 1)
            .sum::<i64>()
            .rem_euclid(2)
            == 1
    }

    pub fn generator(&self, i: u16) -> LieElement {
        LinComb::single(self.p, LieKey::lyndon(vec![i]))
    }

    pub fn key_degree(&self, key: &LieKey) -> i64 {
        let q = self.p.as_i64();
        let mut d = word_degree(&self.degrees, &key.word);
        if key.square {
            d = 2 * d - 1;
        }
        for _ in 0..key.restrictions {
            d = q * d - q + 1;
        }
        d
    }

    pub fn key_weight(&self, key: &LieKey) -> u64 {
        let base = key.word.len() as u64 * if key.square { 2 } else { 1 };
        base * (self.p.get() as u64).pow(key.restrictions)
    }

    /// Whether the restriction is defined on classes of this degree.
    pub fn restrictable(&self, degree: i64) -> bool {
        self.p.is_two() || degree.rem_euclid(2) == 1
    }

    /// The basis of the free algebra up to the given weight.
    pub fn basis(&self, weight_cap: u64) -> Vec<LieKey> {
        let mut out = Vec::new();
        let q = self.p.get() as u64;
        for w in lyndon_words(self.degrees.len(), weight_cap as usize) {
            let len = w.len() as u64;
            let odd_parity = self.parity(&w);
            let bases: Vec<(bool, u64)> = if self.p.is_two() || !odd_parity {
                vec![(false, len)]
            } else {
                vec![(false, len), (true, 2 * len)]
            };
            for (square, base) in bases {
                // restrictions need odd degree, i.e. even parity, at odd p;
                // squares always have odd degree
                let can_restrict = self.p.is_two() || square || !odd_parity;
                let mut e = 0;
                let mut weight = base;
                while weight <= weight_cap {
                    out.push(LieKey {
                        word: w.clone(),
                        square,
                        restrictions: e,
                    });
                    if !can_restrict {
                        break;
                    }
                    e += 1;
                    weight *= q;
                }
            }
        }
        out.sort_by_key(|k| (self.key_weight(k), k.clone()));
        out
    }

    pub fn tensor_mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = LinComb::zero(self.p);
        for (u, c) in a.iter() {
            for (v, e) in b.iter() {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, self.p.mul(c, e));
            }
        }
        out
    }

    pub fn tensor_bracket(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let p = self.p;
        let mut out = LinComb::zero(p);
        for (u, c) in a.iter() {
            let pu = self.parity(u);
            for (v, e) in b.iter() {
                let pv = self.parity(v);
                let mut coeff = p.mul(c, e);
                if pv {
                    coeff = p.neg(coeff);
                }
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                out.add_term(uv, coeff);
                let mut vu = v.clone();
                vu.extend_from_slice(u);
                out.add_term(vu, if pu && pv { coeff } else { p.neg(coeff) });
            }
        }
        out
    }

    fn tensor_pow(&self, a: &Tensor, n: u64) -> Tensor {
        let mut out = LinComb::single(self.p, Vec::new());
        for _ in 0..n {
            out = self.tensor_mul(&out, a);
        }
        out
    }

    /// Tensor image of a basis element.
    pub fn image(&mut self, key: &LieKey) -> Tensor {
        if let Some(t) = self.cache.get(key) {
            return t.clone();
        }
        let t = if key.restrictions > 0 {
            let inner = self.image(&LieKey {
                restrictions: key.restrictions - 1,
                ..key.clone()
            });
            self.tensor_pow(&inner, self.p.get() as u64)
        } else if key.square {
            let u = self.image(&LieKey::lyndon(key.word.clone()));
            self.tensor_bracket(&u, &u)
        } else if key.word.len() == 1 {
            LinComb::single(self.p, key.word.clone())
        } else {
            let (u, v) = standard_factorization(&key.word);
            let a = self.image(&LieKey::lyndon(u));
            let b = self.image(&LieKey::lyndon(v));
            self.tensor_bracket(&a, &b)
        };
        self.cache.insert(key.clone(), t.clone());
        t
    }

    pub fn to_tensor(&mut self, x: &LieElement) -> Tensor {
        let mut out = LinComb::zero(self.p);
        for (k, c) in x.iter() {
            let t = self.image(k);
            out.add_scaled(&t, c);
        }
        out
    }

    /// The basis element whose tensor image has leading word `w`.
    fn key_for_leading(&self, w: &[u16]) -> Option<LieKey> {
        let (r, m) = primitive_root(w);
        if !is_lyndon(r) {
            return None;
        }
        let q = self.p.get() as usize;
        let odd = self.parity(r);
        let (square, mut rest) = if !self.p.is_two() && odd && m > 1 {
            if m % 2 != 0 {
                return None;
            }
            (true, m / 2)
        } else {
            (false, m)
        };
        let mut e = 0;
        while rest > 1 {
            if rest % q != 0 {
                return None;
            }
            rest /= q;
            e += 1;
        }
        Some(LieKey {
            word: r.to_vec(),
            square,
            restrictions: e,
        })
    }

    /// Expresses a tensor in the Lie basis.
    pub fn decompose(&mut self, t: &Tensor) -> Result<LieElement> {
        let p = self.p;
        let mut rest = t.clone();
        let mut out = LinComb::zero(p);
        while let Some((w, c)) = rest.first() {
            let w = w.clone();
            let key = self
                .key_for_leading(&w)
                .ok_or_else(|| Error::NotLieElement(format!("leading word {w:?}")))?;
            let img = self.image(&key);
            let lead = img.coeff(&w);
            if lead == 0 {
                return Err(Error::NotLieElement(format!("leading word {w:?}")));
            }
            let s = p.mul(c, p.inv(lead));
            rest.add_scaled(&img, p.neg(s));
            out.add_term(key, s);
        }
        Ok(out)
    }

    pub fn bracket(&mut self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        let ta = self.to_tensor(a);
        let tb = self.to_tensor(b);
        let t = self.tensor_bracket(&ta, &tb);
        self.decompose(&t)
    }

    /// `n`-fold `[-, x]` applied to `y`.
    pub fn ad_power(&mut self, x: &LieElement, y: &LieElement, n: u32) -> Result<LieElement> {
        let tx = self.to_tensor(x);
        let mut t = self.to_tensor(y);
        for _ in 0..n {
            t = self.tensor_bracket(&t, &tx);
        }
        self.decompose(&t)
    }

    /// Checks that every term of `x` has a degree on which the restriction
    /// is defined.
    fn check_restrictable(&self, x: &LieElement) -> Result<()> {
        for (k, _) in x.iter() {
            let d = self.key_degree(k);
            if !self.restrictable(d) {
                return Err(Error::RestrictionUndefined(d));
            }
        }
        Ok(())
    }

    /// The restriction, computed as the p-th tensor power.
    pub fn restriction(&mut self, x: &LieElement) -> Result<LieElement> {
        self.check_restrictable(x)?;
        let t = self.to_tensor(x);
        let tp = self.tensor_pow(&t, self.p.get() as u64);
        self.decompose(&tp)
    }

    /// The restriction of a single basis element: the next restriction
    /// symbol on the same word.
    pub fn restriction_expand(&self, key: &LieKey) -> Result<LieElement> {
        let d = self.key_degree(key);
        if !self.restrictable(d) {
            return Err(Error::RestrictionUndefined(d));
        }
        Ok(LinComb::single(
            self.p,
            LieKey {
                restrictions: key.restrictions + 1,
                ..key.clone()
            },
        ))
    }

    pub fn s_coefficients(&mut self, x: &LieElement, y: &LieElement) -> Result<Vec<LieElement>> {
        s_coefficients_with(self.p, x, y, &mut |a, b| self.bracket(a, b))
    }

    /// Restriction of a sum through the single-term restrictions and the
    /// `s_i / i` correction terms.
    pub fn restriction_of_sum(&mut self, x: &LieElement) -> Result<LieElement> {
        self.check_restrictable(x)?;
        let shape = FreeLie::new(self.p, self.degrees.clone());
        restriction_of_sum_with(
            self.p,
            x,
            &mut |k| shape.restriction_expand(k),
            &mut |a, b| self.bracket(a, b),
        )
    }
}

/// A bracket supplied by the caller.
pub type BracketFn<'a, K> = dyn FnMut(&LinComb<K>, &LinComb<K>) -> Result<LinComb<K>> + 'a;

/// Coefficients `s_1, …, s_{p-1}`: `s_i` is the coefficient of `t^{i-1}` in
/// `ad(tx + y)^{p-1}(x)`, where `ad(z)(w) = [w, z]`.
pub fn s_coefficients_with<K: Ord + Clone>(
    p: Prime,
    x: &LinComb<K>,
    y: &LinComb<K>,
    bracket: &mut BracketFn<'_, K>,
) -> Result<Vec<LinComb<K>>> {
    let n = p.get() as usize - 1;
    let mut cur: Vec<LinComb<K>> = vec![x.clone()];
    for _ in 0..n {
        let mut next = vec![LinComb::zero(p); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[k].add_assign(&bracket(c, y)?);
            next[k + 1].add_assign(&bracket(c, x)?);
        }
        cur = next;
    }
    cur.truncate(n);
    Ok(cur)
}

/// The restriction of an arbitrary sum, given the restriction of single
/// basis elements and the bracket: split off one term at a time and use
/// `(a + b)^{[p]} = a^{[p]} + b^{[p]} + Σ s_i(a, b) / i` together with
/// `(c k)^{[p]} = c^p k^{[p]}`.
pub fn restriction_of_sum_with<K: Ord + Clone>(
    p: Prime,
    x: &LinComb<K>,
    single: &mut dyn FnMut(&K) -> Result<LinComb<K>>,
    bracket: &mut BracketFn<'_, K>,
) -> Result<LinComb<K>> {
    let mut rest = x.clone();
    let mut out = LinComb::zero(p);
    while let Some((k, c)) = rest.pop_first() {
        let cp = p.pow(c, p.get() as u64);
        out.add_scaled(&single(&k)?, cp);
        if rest.is_zero() {
            break;
        }
        let a = LinComb::single(p, k).scaled(c);
        let s = s_coefficients_with(p, &a, &rest, bracket)?;
        for (i, si) in s.iter().enumerate() {
            out.add_scaled(si, p.inv((i + 1) as u32));
        }
    }
    Ok(out)
}

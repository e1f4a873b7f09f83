//! Free algebras over the power ring with a shifted restricted Lie bracket:
//! basis enumeration, evaluation of operations, brackets and restrictions,
//! and the independent count by sequences used as an oracle.
//!
//! A basis element is an admissible R-word applied to a Lyndon bracket of
//! the generators. Iterated restrictions appear as chains of bottom letters,
//! and at odd p the self-bracket of an even-degree class is the trailing
//! `B` of the word.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{LinComb, Prime};
use crate::lie::{lyndon_words, restriction_of_sum_with, word_degree, FreeLie, LieKey, Word};
use crate::par::Exec;
use crate::power::{compose, op_basis, r_drop, PowerOp, RWord};
use crate::word::Letter;

/// An admissible R-word applied to the Lyndon bracket `lyndon`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeBasisElement {
    pub lyndon: Word,
    pub word: RWord,
}

impl FreeBasisElement {
    pub fn degree(&self) -> i64 {
        self.word.target()
    }

    pub fn weight(&self) -> u64 {
        self.lyndon.len() as u64 * self.word.weight()
    }

    /// Writes the element with generators named `x0, x1, …`.
    pub fn show(&self) -> String {
        let inner = show_lyndon(&self.lyndon);
        if self.word.length() == 0 {
            inner
        } else {
            format!("{}({inner})", self.word)
        }
    }
}

impl fmt::Display for FreeBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.show())
    }
}

/// Writes a Lyndon word as its standard bracketing.
pub fn show_lyndon(w: &[u16]) -> String {
    if w.len() == 1 {
        return format!("x{}", w[0]);
    }
    let (u, v) = crate::lie::standard_factorization(w);
    format!("[{},{}]", show_lyndon(&u), show_lyndon(&v))
}

pub type FreeSum = LinComb<FreeBasisElement>;

/// A sequence `(i_1, …, i_k, e, w)` indexing the basis by counting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BmSequence {
    pub indices: Vec<i64>,
    pub e: bool,
    pub lyndon: Word,
    pub degree: i64,
    pub weight: u64,
}

/// Counts per (degree, weight).
pub type DimTable = BTreeMap<(i64, u64), usize>;

pub fn dims<T>(basis: &[T], key: impl Fn(&T) -> (i64, u64)) -> DimTable {
    let mut out = DimTable::new();
    for b in basis {
        *out.entry(key(b)).or_insert(0) += 1;
    }
    out
}

pub fn dims_free(basis: &[FreeBasisElement]) -> DimTable {
    dims(basis, |b| (b.degree(), b.weight()))
}

pub fn dims_bm(basis: &[BmSequence]) -> DimTable {
    dims(basis, |b| (b.degree, b.weight))
}

/// Largest `k` with `base * p^k <= cap`, if any.
fn max_letters(p: Prime, base: u64, cap: u64) -> Option<usize> {
    if base > cap {
        return None;
    }
    let mut k = 0;
    let mut w = base;
    while w * p.get() as u64 <= cap {
        w *= p.get() as u64;
        k += 1;
    }
    Some(k)
}

/// The basis of the free algebra on generators of the given degrees, with
/// degree in `[lo, hi]` and weight at most `weight_cap`.
pub fn free_basis(
    p: Prime,
    gen_degrees: &[i64],
    lo: i64,
    hi: i64,
    weight_cap: u64,
    exec: Exec,
) -> Vec<FreeBasisElement> {
    let words = lyndon_words(gen_degrees.len(), weight_cap as usize);
    let parts = exec.map(words, |u| {
        let d = word_degree(gen_degrees, &u);
        let len = u.len() as u64;
        let Some(k) = max_letters(p, len, weight_cap) else {
            return Vec::new();
        };
        op_basis(p, d, k + 1, lo, hi)
            .into_iter()
            .filter(|w| len * w.weight() <= weight_cap)
            .map(|word| FreeBasisElement {
                lyndon: u.clone(),
                word,
            })
            .collect::<Vec<_>>()
    });
    let mut out: Vec<FreeBasisElement> = parts.into_iter().flatten().collect();
    out.sort();
    out
}

/// The basis indexed by sequences, enumerated straight from the counting
/// conditions: congruence, `i_j < p i_{j+1}`, and the bound on `i_k`.
pub fn bm_basis(
    p: Prime,
    gen_degrees: &[i64],
    lo: i64,
    hi: i64,
    weight_cap: u64,
    exec: Exec,
) -> Vec<BmSequence> {
    let words = lyndon_words(gen_degrees.len(), weight_cap as usize);
    let q = p.as_i64();
    let parts = exec.map(words, |w| {
        let mut out = Vec::new();
        let d = word_degree(gen_degrees, &w);
        let iota = !p.is_two() && d.rem_euclid(2) == 0;
        let es: &[bool] = if iota { &[false, true] } else { &[false] };
        for &e in es {
            let ei = e as i64;
            let base_weight = w.len() as u64 * (1 + e as u64);
            let Some(kmax) = max_letters(p, base_weight, weight_cap) else {
                continue;
            };
            let base_degree = (1 + ei) * d - ei;
            let cap = (q - 1) * (1 + ei) * d - iota as i64;
            for k in 0..=kmax {
                let mut cur = Vec::with_capacity(k);
                // degree = base + sum - k must lie in [lo, hi]
                let need = lo - base_degree + k as i64;
                let allow = hi - base_degree + k as i64;
                bm_sequences(p, k, cap, 0, need, &mut cur, &mut |seq| {
                    let s: i64 = seq.iter().sum();
                    if s <= allow {
                        let mut indices = seq.to_vec();
                        indices.reverse();
                        out.push(BmSequence {
                            indices,
                            e,
                            lyndon: w.clone(),
                            degree: base_degree + s - k as i64,
                            weight: base_weight * (p.get() as u64).pow(k as u32),
                        });
                    }
                });
            }
        }
        out
    });
    let mut out: Vec<BmSequence> = parts.into_iter().flatten().collect();
    out.sort();
    out
}

fn bm_congruent(p: Prime, i: i64) -> bool {
    p.is_two() || i.rem_euclid(2 * (p.as_i64() - 1)) <= 1
}

/// Largest possible sum of `r` further entries outside an entry `i`.
fn bm_max_outer(p: Prime, i: i64, r: usize) -> i64 {
    let q = p.as_i64();
    let mut total = 0;
    let mut u = i;
    for _ in 0..r {
        u = q * u - 1;
        total += u;
    }
    total
}

/// Builds sequences innermost entry first. `upper` bounds the next entry,
/// `sum` is the running total and `need` the minimal final total.
fn bm_sequences(
    p: Prime,
    k: usize,
    upper: i64,
    sum: i64,
    need: i64,
    cur: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    if cur.len() == k {
        if sum >= need {
            emit(cur);
        }
        return;
    }
    let r = k - cur.len() - 1;
    let mut i = upper;
    while sum + i + bm_max_outer(p, i, r) >= need {
        if bm_congruent(p, i) {
            cur.push(i);
            bm_sequences(p, k, p.as_i64() * i - 1, sum + i, need, cur, emit);
            cur.pop();
        }
        i -= 1;
    }
}

/// Evaluation in a free algebra on generators of fixed degrees.
pub struct FreeAlgebra {
    p: Prime,
    lie: FreeLie,
    /// The unit relating the restriction to the bottom operation.
    lambda: u32,
}

impl FreeAlgebra {
    pub fn new(p: Prime, gen_degrees: Vec<i64>) -> Self {
        FreeAlgebra {
            p,
            lie: FreeLie::new(p, gen_degrees),
            lambda: 1,
        }
    }

    /// Sets the unit `λ` with `x^{[p]} = λ · bottom(x)`; ignored at p = 2.
    pub fn with_lambda(mut self, lambda: u32) -> Result<Self> {
        let l = self.p.reduce(lambda as i64);
        if l == 0 {
            return Err(Error::InvalidWord("λ must be a unit".into()));
        }
        if !self.p.is_two() {
            self.lambda = l;
        }
        Ok(self)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn gen_degrees(&self) -> &[i64] {
        self.lie.degrees()
    }

    /// Adds a generator of degree `d`, returning its index.
    pub fn add_generator(&mut self, d: i64) -> u16 {
        self.lie.add_generator(d)
    }

    pub fn lie(&mut self) -> &mut FreeLie {
        &mut self.lie
    }

    pub fn generator(&self, i: u16) -> FreeBasisElement {
        let d = self.lie.degrees()[i as usize];
        FreeBasisElement {
            lyndon: vec![i],
            word: RWord::unit(self.p, d),
        }
    }

    pub fn single(&self, e: FreeBasisElement) -> FreeSum {
        LinComb::single(self.p, e)
    }

    /// The letter acting as the bottom operation on degree `d`.
    pub fn bottom_letter(&self, d: i64) -> Result<Letter> {
        if self.p.is_two() {
            Ok(Letter::plain(1 - d))
        } else if d.rem_euclid(2) == 1 {
            Ok(Letter::plain((1 - d) / 2))
        } else {
            Err(Error::RestrictionUndefined(d))
        }
    }

    /// Reads a basis element as a Lie basis element when its word consists
    /// of bottom letters (after an optional `B`), with the scalar relating
    /// the two normalisations.
    pub fn as_lie_key(&self, e: &FreeBasisElement) -> Option<(LieKey, u32)> {
        let mut d = e.word.letter_source();
        for &l in e.word.letters.iter().rev() {
            if self.bottom_letter(d).ok() != Some(l) {
                return None;
            }
            d -= r_drop(self.p, l);
        }
        let k = e.word.letters.len() as u64;
        // bottom^k(x) = λ^{-k} x^{[p]^k}
        let scale = self.p.inv(self.p.pow(self.lambda, k));
        Some((
            LieKey {
                word: e.lyndon.clone(),
                square: e.word.bracket,
                restrictions: k as u32,
            },
            scale,
        ))
    }

    pub fn from_lie_key(&self, key: &LieKey) -> (FreeBasisElement, u32) {
        let d0 = word_degree(self.lie.degrees(), &key.word);
        let mut word = RWord::unit(self.p, d0);
        word.bracket = key.square;
        for _ in 0..key.restrictions {
            let l = self
                .bottom_letter(word.target())
                .expect("restriction symbols sit on restrictable degrees");
            word.letters.insert(0, l);
        }
        let scale = self.p.pow(self.lambda, key.restrictions as u64);
        (
            FreeBasisElement {
                lyndon: key.word.clone(),
                word,
            },
            scale,
        )
    }

    fn lie_to_free(&self, x: &LinComb<LieKey>) -> FreeSum {
        let mut out = LinComb::zero(self.p);
        for (k, c) in x.iter() {
            let (e, s) = self.from_lie_key(k);
            out.add_term(e, self.p.mul(c, s));
        }
        out
    }

    /// Applies an operation to a basis element.
    pub fn apply_op(&self, op: &PowerOp, elem: &FreeBasisElement) -> Result<FreeSum> {
        if op.source != elem.degree() {
            return Err(Error::DegreeMismatch {
                expected: elem.degree(),
                found: op.source,
            });
        }
        let inner = PowerOp::from_rword(&elem.word)?;
        let c = compose(op, &inner)?;
        let mut out = LinComb::zero(self.p);
        for (w, k) in c.rwords() {
            out.add_term(
                FreeBasisElement {
                    lyndon: elem.lyndon.clone(),
                    word: w,
                },
                k,
            );
        }
        Ok(out)
    }

    /// Applies an operation to every term of a homogeneous sum.
    pub fn apply_op_sum(&self, op: &PowerOp, x: &FreeSum) -> Result<FreeSum> {
        let mut out = LinComb::zero(self.p);
        for (e, c) in x.iter() {
            out.add_scaled(&self.apply_op(op, e)?, c);
        }
        Ok(out)
    }

    /// The bracket, extended bilinearly: zero against any element carrying a
    /// positive-weight operation that is not an iterated restriction,
    /// otherwise computed in the free restricted Lie algebra.
    pub fn bracket_eval(&mut self, a: &FreeSum, b: &FreeSum) -> Result<FreeSum> {
        let p = self.p;
        let mut la = LinComb::zero(p);
        for (e, c) in a.iter() {
            if let Some((k, s)) = self.as_lie_key(e) {
                la.add_term(k, p.mul(c, s));
            }
        }
        let mut lb = LinComb::zero(p);
        for (e, c) in b.iter() {
            if let Some((k, s)) = self.as_lie_key(e) {
                lb.add_term(k, p.mul(c, s));
            }
        }
        if la.is_zero() || lb.is_zero() {
            return Ok(LinComb::zero(p));
        }
        let r = self.lie.bracket(&la, &lb)?;
        Ok(self.lie_to_free(&r))
    }

    /// `λ · bottom(e)` for a single basis element.
    fn restrict_single(&self, e: &FreeBasisElement) -> Result<FreeSum> {
        let d = e.degree();
        let l = self.bottom_letter(d)?;
        let op = PowerOp::from_rword(&RWord::new(self.p, d, vec![l]))?;
        Ok(self.apply_op(&op, e)?.scaled(self.lambda))
    }

    /// The restriction of a sum, through the bottom operation on each term
    /// and the `s_i / i` correction terms.
    pub fn restriction_eval(&mut self, x: &FreeSum) -> Result<FreeSum> {
        for (e, _) in x.iter() {
            self.bottom_letter(e.degree())?;
        }
        let p = self.p;
        let shape = FreeAlgebra {
            p,
            lie: FreeLie::new(p, self.lie.degrees().to_vec()),
            lambda: self.lambda,
        };
        restriction_of_sum_with(
            p,
            x,
            &mut |e| shape.restrict_single(e),
            &mut |a, b| self.bracket_eval(a, b),
        )
    }

    /// Applies a single R-letter to a sum: the bottom letter acts as the
    /// (non-additive) restriction up to `λ`, letters below it vanish and
    /// the others act additively.
    pub fn apply_letter(&mut self, letter: Letter, x: &FreeSum) -> Result<FreeSum> {
        let p = self.p;
        let Some((e, _)) = x.first() else {
            return Ok(LinComb::zero(p));
        };
        let d = e.degree();
        if x.iter().any(|(f, _)| f.degree() != d) {
            return Err(Error::DegreeMismatch {
                expected: d,
                found: x.iter().map(|(f, _)| f.degree()).find(|&f| f != d).unwrap_or(d),
            });
        }
        let is_bottom = self.bottom_letter(d).ok() == Some(letter);
        if is_bottom {
            let r = self.restriction_eval(x)?;
            return Ok(r.scaled(p.inv(self.lambda)));
        }
        let op = PowerOp::from_rword(&RWord::new(p, d, vec![letter]))?;
        self.apply_op_sum(&op, x)
    }
}

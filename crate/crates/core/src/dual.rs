//! The Koszul-dual ringoids `(R')^!` (additive operations) and `R^!` (which
//! adds the bottom generator at p = 2): existence bounds, the dual Adem
//! relations, normal forms, suspension and the admissible bases that make up
//! the unstable Ext groups.
//!
//! A word is stored outermost letter first together with the internal degree
//! of its source. Letter `(β^ε Q^i)^*` moves (filtration, internal degree) by
//! `(-1, -i)` at p = 2 and `(-1, -2(p-1)i + ε)` at odd p.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{binom_raw, LinComb, Prime};
use crate::primal::Strategy;
use crate::rewrite::{normalize, Step, DEFAULT_GUARD};
use crate::word::Letter;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Additive,
    Full,
}

impl Variant {
    pub fn join(self, other: Variant) -> Variant {
        self.max(other)
    }
}

/// A single word of dual generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualOpWord {
    pub p: Prime,
    /// Internal degree of the source.
    pub source: i64,
    /// Sourced at the auxiliary self-bracket class (filtration -1), odd p.
    pub aux: bool,
    pub letters: Vec<Letter>,
    pub variant: Variant,
}

/// A linear combination of words sharing source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    pub p: Prime,
    pub source: i64,
    pub aux: bool,
    pub variant: Variant,
    pub terms: LinComb<Vec<Letter>>,
}

/// Change of internal degree caused by a letter, as a positive drop.
#[inline]
pub fn internal_drop(p: Prime, l: Letter) -> i64 {
    if p.is_two() {
        l.index
    } else {
        2 * (p.as_i64() - 1) * l.index - l.eps()
    }
}

/// Whether the letter exists on a class of internal degree `d`.
#[inline]
pub fn exists(p: Prime, variant: Variant, l: Letter, d: i64) -> bool {
    if p.is_two() {
        match variant {
            Variant::Additive => l.index > -d,
            Variant::Full => l.index >= -d,
        }
    } else {
        2 * l.index > -d
    }
}

/// Whether the letter is the bottom generator of `R^!` at internal degree `d`.
#[inline]
pub fn is_bottom(p: Prime, l: Letter, d: i64) -> bool {
    p.is_two() && l.index == -d
}

/// Internal degree at the source of each letter (index-aligned).
pub fn letter_degrees(p: Prime, source: i64, letters: &[Letter]) -> Vec<i64> {
    let mut out = vec![0; letters.len()];
    let mut d = source;
    for k in (0..letters.len()).rev() {
        out[k] = d;
        d -= internal_drop(p, letters[k]);
    }
    out
}

/// Admissibility of an adjacent pair `outer inner`.
#[inline]
pub fn pair_admissible(p: Prime, outer: Letter, inner: Letter) -> bool {
    if p.is_two() {
        outer.index > 2 * inner.index
    } else {
        outer.index > p.as_i64() * inner.index - inner.eps()
    }
}

impl DualOpWord {
    pub fn new(p: Prime, source: i64, letters: Vec<Letter>, variant: Variant) -> Self {
        DualOpWord {
            p,
            source,
            aux: false,
            letters,
            variant,
        }
    }

    /// Target (filtration, internal degree).
    pub fn target(&self) -> (i64, i64) {
        let drop: i64 = self.letters.iter().map(|&l| internal_drop(self.p, l)).sum();
        (
            -(self.letters.len() as i64) - self.aux as i64,
            self.source - drop,
        )
    }

    /// Target total degree (filtration plus internal degree).
    pub fn total_target(&self) -> i64 {
        let (s, t) = self.target();
        s + t
    }

    pub fn weight(&self) -> u64 {
        let base: u64 = if self.aux { 2 } else { 1 };
        base * (self.p.get() as u64).pow(self.letters.len() as u32)
    }

    pub fn letters_exist(&self) -> bool {
        let ds = letter_degrees(self.p, self.source, &self.letters);
        self.letters
            .iter()
            .zip(&ds)
            .all(|(&l, &d)| exists(self.p, self.variant, l, d))
    }
}

/// True iff all letters exist and every adjacent pair is admissible.
pub fn is_admissible_dual(w: &DualOpWord) -> bool {
    w.letters_exist()
        && w
            .letters
            .windows(2)
            .all(|pair| pair_admissible(w.p, pair[0], pair[1]))
}

fn not_applicable(outer: Letter, inner: Letter, d: i64) -> Error {
    Error::RelationNotApplicable(format!(
        "pair ({outer}, {inner}) at internal degree {d}"
    ))
}

/// Right-hand side of the dual Adem relation for the pair `outer inner`,
/// where `d` is the internal degree at the source of `inner`.
pub fn dual_adem_rewrite(p: Prime, outer: Letter, inner: Letter, d: i64) -> Result<LinComb<Vec<Letter>>> {
    let (a, b) = (outer.index, inner.index);
    let mut out = LinComb::zero(p);
    if p.is_two() {
        if !(a <= 2 * b && b > -d && a > b - d) {
            return Err(not_applicable(outer, inner, d));
        }
        // c ranges over -d < c and 3c < a + b
        let hi = (a + b - 1).div_euclid(3);
        for c in (-d + 1)..=hi {
            let coeff = binom_raw(b - c - 1, a - 2 * c - 1, p);
            out.add_term(vec![Letter::plain(a + b - c), Letter::plain(c)], coeff);
        }
        return Ok(out);
    }
    let q = p.as_i64();
    let c_lo = (-d).div_euclid(2) + 1;
    let strict_hi = (a + b - 1).div_euclid(q + 1);
    let weak_hi = (a + b).div_euclid(q + 1);
    let window = 2 * b > -d && 2 * a > 2 * (q - 1) * b - d;
    match (outer.beta, inner.beta) {
        (false, false) => {
            if !(a <= q * b && window) {
                return Err(not_applicable(outer, inner, d));
            }
            for c in c_lo..=strict_hi {
                let coeff = p.mul(
                    p.neg(p.sign(a - c)),
                    binom_raw((q - 1) * (b - c) - 1, a - q * c - 1, p),
                );
                out.add_term(vec![Letter::plain(a + b - c), Letter::plain(c)], coeff);
            }
        }
        (true, false) => {
            if !(a <= q * b && window) {
                return Err(not_applicable(outer, inner, d));
            }
            for c in c_lo..=weak_hi {
                let coeff = p.mul(p.sign(a - c), binom_raw((q - 1) * (b - c), a - q * c, p));
                out.add_term(vec![Letter::plain(a + b - c), Letter::bock(c)], coeff);
            }
            for c in c_lo..=strict_hi {
                let coeff = p.mul(
                    p.neg(p.sign(a - c)),
                    binom_raw((q - 1) * (b - c) - 1, a - q * c - 1, p),
                );
                out.add_term(vec![Letter::bock(a + b - c), Letter::plain(c)], coeff);
            }
        }
        (eps, true) => {
            // applied wherever the outer letter exists, one step beyond the
            // printed bound 2a > 2(p-1)b - d; without the boundary line the
            // rewriting is not confluent
            if !(a < q * b && 2 * b > -d && 2 * a > 2 * (q - 1) * b - 1 - d) {
                return Err(not_applicable(outer, inner, d));
            }
            for c in c_lo..=weak_hi {
                let coeff = p.mul(p.sign(a - c), binom_raw((q - 1) * (b - c) - 1, a - q * c, p));
                out.add_term(vec![Letter::new(eps, a + b - c), Letter::bock(c)], coeff);
            }
        }
    }
    Ok(out)
}

/// Classification of one word by the rewriting system.
enum Scan {
    Zero,
    Admissible,
    Rewrite(usize),
}

fn scan(p: Prime, variant: Variant, source: i64, w: &[Letter], strategy: Strategy) -> Scan {
    let ds = letter_degrees(p, source, w);
    if w.iter().zip(&ds).any(|(&l, &d)| !exists(p, variant, l, d)) {
        return Scan::Zero;
    }
    let n = w.len().saturating_sub(1);
    for k in 0..n {
        let (outer, inner) = (w[k], w[k + 1]);
        if p.is_two() && variant == Variant::Full {
            let inner_bottom = is_bottom(p, inner, ds[k + 1]);
            let outer_bottom = is_bottom(p, outer, ds[k]);
            // (Q^{a-d})^* (Q^a)^* = 0: bottom after a non-bottom letter; and
            // an inadmissible letter after a bottom lies below the bottom
            // in total degree.
            if outer_bottom && !inner_bottom {
                return Scan::Zero;
            }
            if inner_bottom && !pair_admissible(p, outer, inner) {
                return Scan::Zero;
            }
        }
    }
    let bad = |k: &usize| !pair_admissible(p, w[*k], w[*k + 1]);
    let pos = match strategy {
        Strategy::Leftmost => (0..n).find(bad),
        Strategy::Rightmost => (0..n).rev().find(bad),
    };
    match pos {
        None => Scan::Admissible,
        Some(k) => Scan::Rewrite(k),
    }
}

type PairMemo = HashMap<(Letter, Letter, i64), LinComb<Vec<Letter>>>;

fn normal_form_terms(
    p: Prime,
    variant: Variant,
    source: i64,
    terms: LinComb<Vec<Letter>>,
    strategy: Strategy,
    memo: &mut PairMemo,
) -> Result<LinComb<Vec<Letter>>> {
    normalize(terms, DEFAULT_GUARD, |w| match scan(p, variant, source, w, strategy) {
        Scan::Zero => Ok(Step::Zero),
        Scan::Admissible => Ok(Step::Done),
        Scan::Rewrite(k) => {
            let d = letter_degrees(p, source, w)[k + 1];
            let key = (w[k], w[k + 1], d);
            let with = match memo.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = dual_adem_rewrite(p, w[k], w[k + 1], d)?;
                    memo.insert(key, v.clone());
                    v
                }
            };
            Ok(Step::Replace { at: k, len: 2, with })
        }
    })
}

impl DualElement {
    pub fn zero(p: Prime, source: i64, variant: Variant) -> Self {
        DualElement {
            p,
            source,
            aux: false,
            variant,
            terms: LinComb::zero(p),
        }
    }

    pub fn from_word(w: &DualOpWord) -> Self {
        DualElement {
            p: w.p,
            source: w.source,
            aux: w.aux,
            variant: w.variant,
            terms: LinComb::single(w.p, w.letters.clone()),
        }
    }

    pub fn words(&self) -> Vec<(DualOpWord, u32)> {
        self.terms
            .iter()
            .map(|(l, c)| {
                (
                    DualOpWord {
                        p: self.p,
                        source: self.source,
                        aux: self.aux,
                        letters: l.clone(),
                        variant: self.variant,
                    },
                    c,
                )
            })
            .collect()
    }

    /// Common target bidegree and weight; `None` for the zero element or if
    /// the terms disagree.
    pub fn bidegree(&self) -> Option<(i64, i64, u64)> {
        let mut out = None;
        for (w, _) in self.words() {
            let (s, t) = w.target();
            let x = (s, t, w.weight());
            match out {
                None => out = Some(x),
                Some(y) if y != x => return None,
                _ => {}
            }
        }
        out
    }
}

/// Rewrites an element to its admissible normal form.
pub fn normal_form_dual(elem: &DualElement) -> Result<DualElement> {
    normal_form_with(elem, Strategy::Leftmost)
}

pub fn normal_form_with(elem: &DualElement, strategy: Strategy) -> Result<DualElement> {
    let mut memo = PairMemo::new();
    let terms = normal_form_terms(
        elem.p,
        elem.variant,
        elem.source,
        elem.terms.clone(),
        strategy,
        &mut memo,
    )?;
    Ok(DualElement {
        terms,
        ..elem.clone()
    })
}

/// A normal-form engine that keeps its pair memo across calls.
#[derive(Default)]
pub struct DualNormalizer {
    memo: PairMemo,
}

impl DualNormalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn normal_form(&mut self, elem: &DualElement) -> Result<DualElement> {
        let terms = normal_form_terms(
            elem.p,
            elem.variant,
            elem.source,
            elem.terms.clone(),
            Strategy::Leftmost,
            &mut self.memo,
        )?;
        Ok(DualElement {
            terms,
            ..elem.clone()
        })
    }
}

/// Re-sources the same words `t` internal degrees higher.
pub fn suspend(elem: &DualElement, t: i64) -> DualElement {
    DualElement {
        source: elem.source + t,
        ..elem.clone()
    }
}

/// Smallest admissible index for the next (outer) letter after `l`.
fn next_min_index(p: Prime, l: Letter) -> i64 {
    if p.is_two() {
        2 * l.index + 1
    } else {
        p.as_i64() * l.index - l.eps() + 1
    }
}

/// Lower bound on the internal drop of `r` further admissible letters
/// placed outside `l`.
fn min_future_drop(p: Prime, l: Letter, r: usize) -> i64 {
    let mut total = 0;
    let mut cur = l;
    for _ in 0..r {
        let i = next_min_index(p, cur);
        // a Bockstein lowers the drop by one but also the next bound; taking
        // it everywhere gives a valid lower bound
        let next = if p.is_two() {
            Letter::plain(i)
        } else {
            Letter::bock(i)
        };
        total += internal_drop(p, next);
        cur = next;
    }
    total
}

/// Admissible words of length `len` from internal degree `source`, with total
/// internal drop at most `max_drop`.
pub fn admissible_words(
    p: Prime,
    variant: Variant,
    source: i64,
    len: usize,
    max_drop: i64,
) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: Prime,
        variant: Variant,
        len: usize,
        d: i64,
        budget: i64,
        cur: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
    ) {
        if cur.len() == len {
            let mut w = cur.clone();
            w.reverse();
            out.push(w);
            return;
        }
        let r = len - cur.len() - 1;
        let lo_exist = if p.is_two() {
            match variant {
                Variant::Additive => -d + 1,
                Variant::Full => -d,
            }
        } else {
            (-d).div_euclid(2) + 1
        };
        let lo = match cur.last() {
            Some(&prev) => lo_exist.max(next_min_index(p, prev)),
            None => lo_exist,
        };
        let betas: &[bool] = if p.is_two() { &[false] } else { &[false, true] };
        let mut i = lo;
        loop {
            let mut any = false;
            for &beta in betas {
                let l = Letter::new(beta, i);
                if !exists(p, variant, l, d) {
                    continue;
                }
                if let Some(&prev) = cur.last() {
                    if !pair_admissible(p, l, prev) {
                        continue;
                    }
                }
                let drop = internal_drop(p, l);
                if drop + min_future_drop(p, l, r) > budget {
                    continue;
                }
                any = true;
                cur.push(l);
                go(p, variant, len, d - drop, budget - drop, cur, out);
                cur.pop();
            }
            // drops grow with the index, so once nothing fits we are done
            let l = Letter::new(!p.is_two(), i);
            if !any && internal_drop(p, l) + min_future_drop(p, l, r) > budget {
                break;
            }
            i += 1;
        }
    }
    go(p, variant, len, source, max_drop, &mut cur, &mut out);
    out
}

/// The admissible basis of the free module on a class of internal degree `j`
/// (total degree `j`), up to `filtration_cap` letters, with target total
/// degree in `[lo, hi]`. For odd p and even j the words on the auxiliary
/// class `[x, x]` (filtration -1, internal degree 2j) are included.
pub fn unstable_ext_basis(
    p: Prime,
    j: i64,
    variant: Variant,
    filtration_cap: usize,
    lo: i64,
    hi: i64,
) -> Vec<DualOpWord> {
    let mut out = Vec::new();
    let mut sources = vec![(j, false)];
    if !p.is_two() && j.rem_euclid(2) == 0 {
        sources.push((2 * j, true));
    }
    for (src, aux) in sources {
        for len in 0..=filtration_cap {
            // total target = src - drop - len - aux >= lo
            let max_drop = src - len as i64 - aux as i64 - lo;
            for letters in admissible_words(p, variant, src, len, max_drop) {
                let w = DualOpWord {
                    p,
                    source: src,
                    aux,
                    letters,
                    variant,
                };
                let t = w.total_target();
                if t >= lo && t <= hi {
                    out.push(w);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::plain;

    const P2: Prime = Prime::two();
    const P3: Prime = Prime::three();

    fn word(p: Prime, j: i64, letters: Vec<Letter>, v: Variant) -> DualOpWord {
        DualOpWord::new(p, j, letters, v)
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible_dual(&word(P2, 2, plain(&[3, 1]), Variant::Additive)));
        assert!(!is_admissible_dual(&word(P2, 2, plain(&[2, 1]), Variant::Additive)));
        let w = word(P3, 1, vec![Letter::plain(2), Letter::bock(1)], Variant::Additive);
        assert!(!is_admissible_dual(&w));
    }

    #[test]
    fn rewrite_examples() {
        let v = dual_adem_rewrite(P2, Letter::plain(1), Letter::plain(1), 5).unwrap();
        assert_eq!(v, LinComb::single(P2, plain(&[2, 0])));
        assert!(dual_adem_rewrite(P2, Letter::plain(2), Letter::plain(1), 10).unwrap().is_zero());
        // at p = 3 the c = -1 term survives as well
        let v = dual_adem_rewrite(P3, Letter::plain(1), Letter::plain(1), 40).unwrap();
        let mut want = LinComb::single(P3, plain(&[2, 0]));
        want.add_term(plain(&[3, -1]), 2);
        assert_eq!(v, want);
        assert!(matches!(
            dual_adem_rewrite(P2, Letter::plain(5), Letter::plain(1), 5),
            Err(Error::RelationNotApplicable(_))
        ));
    }

    #[test]
    fn normal_form_examples() {
        let e = DualElement::from_word(&word(P2, 5, plain(&[1, 1]), Variant::Additive));
        let n = normal_form_dual(&e).unwrap();
        assert_eq!(n.terms, LinComb::single(P2, plain(&[2, 0])));
        let e = DualElement::from_word(&word(P2, 3, plain(&[7, -3]), Variant::Additive));
        assert!(normal_form_dual(&e).unwrap().terms.is_zero());
        let adm = DualElement::from_word(&word(P2, 2, plain(&[3, 1]), Variant::Additive));
        assert_eq!(normal_form_dual(&adm).unwrap(), adm);
    }

    #[test]
    fn suspension_examples() {
        let e = DualElement::from_word(&word(P2, 1, plain(&[0]), Variant::Additive));
        let s = suspend(&e, 1);
        assert_eq!(s.source, 2);
        assert_eq!(s.terms, e.terms);
        assert!(is_admissible_dual(&s.words()[0].0));
    }

    #[test]
    fn ext_basis_examples() {
        let full = unstable_ext_basis(P2, 1, Variant::Full, 1, -20, 20);
        let idx: Vec<i64> = full.iter().filter(|w| w.letters.len() == 1).map(|w| w.letters[0].index).collect();
        assert_eq!(idx.iter().min(), Some(&-1));
        let add = unstable_ext_basis(P2, 1, Variant::Additive, 1, -20, 20);
        let idx: Vec<i64> = add.iter().filter(|w| w.letters.len() == 1).map(|w| w.letters[0].index).collect();
        assert_eq!(idx.iter().min(), Some(&0));
        let none = unstable_ext_basis(P2, 1, Variant::Additive, 0, -20, 20);
        assert_eq!(none.len(), 1);
        assert!(none[0].letters.is_empty());
    }

    fn sample_letters(p: Prime, r: i64) -> Vec<Letter> {
        if p.is_two() {
            (-r..=r).map(Letter::plain).collect()
        } else {
            (-r..=r).flat_map(|i| [Letter::plain(i), Letter::bock(i)]).collect()
        }
    }

    #[test]
    fn relations_avoid_the_bottom() {
        for d in -6..=6 {
            for a in -8..=8 {
                for b in -8..=8 {
                    if let Ok(v) = dual_adem_rewrite(P2, Letter::plain(a), Letter::plain(b), d) {
                        for (w, _) in v.iter() {
                            assert!(w[1].index > -d);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn confluence_small_window() {
        for p in [P2, P3] {
            let ls = sample_letters(p, 4);
            for v in [Variant::Additive, Variant::Full] {
                for j in -3..=3 {
                    for &a in &ls {
                        for &b in &ls {
                            for &c in &ls {
                                let e = DualElement::from_word(&word(p, j, vec![a, b, c], v));
                                let l = normal_form_with(&e, Strategy::Leftmost).unwrap();
                                let r = normal_form_with(&e, Strategy::Rightmost).unwrap();
                                assert_eq!(l, r, "p={p} j={j} {v:?} {a} {b} {c}");
                            }
                        }
                    }
                }
            }
        }
    }
}

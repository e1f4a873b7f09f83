//! The power ring of unary operations in total-degree R-notation.
//!
//! At p = 2 the letter `R^a` on a class of total degree `j` lands in degree
//! `j - a`; at odd p `β^ε R^i` lowers the degree by `2(p-1)i + ε`. An
//! operation is stored as a normal-form dual element: `R^a` is
//! `(Q^{a-1})^*` and `β^ε R^i` is `(β^{1-ε} Q^i)^*`. Composition is
//! juxtaposition of the suspended outer word with the inner one, followed by
//! the dual normal form. At p = 2 the full variant is used so that the
//! restriction `R^{1-j}` and its iterates are part of the basis.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dual::{normal_form_dual, DualElement, DualOpWord, Variant};
use crate::error::{Error, Result};
use crate::fp::{binom_raw, LinComb, Prime};
use crate::word::{tokenize, Letter};

/// A word in R-notation, outermost letter first, acting on a class of total
/// degree `source`. `bracket` marks a trailing self-bracket `B` (odd p, even
/// source degree only).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RWord {
    pub p: Prime,
    pub source: i64,
    pub letters: Vec<Letter>,
    pub bracket: bool,
}

/// Total-degree drop of one R-letter.
#[inline]
pub fn r_drop(p: Prime, l: Letter) -> i64 {
    if p.is_two() {
        l.index
    } else {
        2 * (p.as_i64() - 1) * l.index + l.eps()
    }
}

/// Translates an R-letter to its dual generator.
#[inline]
pub fn r_to_dual(p: Prime, l: Letter) -> Letter {
    if p.is_two() {
        Letter::plain(l.index - 1)
    } else {
        Letter::new(!l.beta, l.index)
    }
}

/// Translates a dual generator to its R-letter.
#[inline]
pub fn dual_to_r(p: Prime, l: Letter) -> Letter {
    if p.is_two() {
        Letter::plain(l.index + 1)
    } else {
        Letter::new(!l.beta, l.index)
    }
}

/// The variant of the dual ringoid that carries operations at this prime.
pub fn op_variant(p: Prime) -> Variant {
    if p.is_two() {
        Variant::Full
    } else {
        Variant::Additive
    }
}

impl RWord {
    pub fn new(p: Prime, source: i64, letters: Vec<Letter>) -> Self {
        RWord {
            p,
            source,
            letters,
            bracket: false,
        }
    }

    pub fn unit(p: Prime, source: i64) -> Self {
        RWord::new(p, source, Vec::new())
    }

    /// Total degree after the optional bracket, where the letters start.
    pub fn letter_source(&self) -> i64 {
        if self.bracket {
            2 * self.source - 1
        } else {
            self.source
        }
    }

    pub fn target(&self) -> i64 {
        let drop: i64 = self.letters.iter().map(|&l| r_drop(self.p, l)).sum();
        self.letter_source() - drop
    }

    pub fn weight(&self) -> u64 {
        let base = if self.bracket { 2 } else { 1 };
        base * (self.p.get() as u64).pow(self.letters.len() as u32)
    }

    /// Number of letters, counting a trailing bracket as one.
    pub fn length(&self) -> usize {
        self.letters.len() + self.bracket as usize
    }

    /// Admissibility in R-notation: the innermost letter exists on the
    /// source and each outer letter is large enough relative to the next.
    pub fn is_admissible(&self) -> bool {
        if self.bracket && (self.p.is_two() || self.source.rem_euclid(2) != 0) {
            return false;
        }
        let Some(&inner) = self.letters.last() else {
            return true;
        };
        let j = self.letter_source();
        let first_ok = if self.p.is_two() {
            inner.index > -j
        } else if self.bracket {
            inner.index > -self.source
        } else {
            2 * inner.index > -j
        };
        first_ok
            && self
                .letters
                .windows(2)
                .all(|w| r_pair_admissible(self.p, w[0], w[1]))
    }

    pub fn to_dual(&self) -> DualOpWord {
        let (source, aux) = if self.bracket {
            (2 * self.source, true)
        } else {
            (self.source, false)
        };
        DualOpWord {
            p: self.p,
            source,
            aux,
            letters: self.letters.iter().map(|&l| r_to_dual(self.p, l)).collect(),
            variant: op_variant(self.p),
        }
    }

    pub fn from_dual(w: &DualOpWord) -> Self {
        let source = if w.aux { w.source / 2 } else { w.source };
        RWord {
            p: w.p,
            source,
            letters: w.letters.iter().map(|&l| dual_to_r(w.p, l)).collect(),
            bracket: w.aux,
        }
    }

    /// Parses a word such as `R3 R1`, `bR2 R1 B` or `1` (the unit).
    pub fn parse(p: Prime, source: i64, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(RWord::unit(p, source));
        }
        let tokens = tokenize(s)?;
        let mut letters = Vec::new();
        let mut bracket = false;
        for (k, t) in tokens.iter().enumerate() {
            match (t.symbol.as_str(), t.indexed) {
                ("B", false) if k + 1 == tokens.len() && !t.letter.beta => bracket = true,
                ("R", true) if !(p.is_two() && t.letter.beta) => letters.push(t.letter),
                _ => return Err(Error::InvalidWord(format!("unexpected letter in `{s}`"))),
            }
        }
        Ok(RWord {
            p,
            source,
            letters,
            bracket,
        })
    }
}

impl fmt::Display for RWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.letters.iter().map(|l| l.show("R")).collect();
        if self.bracket {
            parts.push("B".to_string());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Admissibility of an adjacent pair in R-notation.
#[inline]
pub fn r_pair_admissible(p: Prime, outer: Letter, inner: Letter) -> bool {
    if p.is_two() {
        outer.index >= 2 * inner.index
    } else {
        outer.index >= p.as_i64() * inner.index + inner.eps()
    }
}

/// An element of the power ring: a normal-form combination of words with a
/// common source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerOp {
    pub p: Prime,
    /// Total degree of the source.
    pub source: i64,
    pub payload: DualElement,
}

impl PowerOp {
    pub fn unit(p: Prime, source: i64) -> Self {
        PowerOp::from_rword(&RWord::unit(p, source)).expect("the unit is in normal form")
    }

    pub fn from_rword(w: &RWord) -> Result<Self> {
        let payload = normal_form_dual(&DualElement::from_word(&w.to_dual()))?;
        let op = PowerOp {
            p: w.p,
            source: w.source,
            payload,
        };
        if let Some(t) = op.target() {
            debug_assert_eq!(t, w.target());
        }
        Ok(op)
    }

    /// Sums R-words with a common source into one operation.
    pub fn from_rwords(p: Prime, source: i64, terms: &[(RWord, u32)]) -> Result<Self> {
        let mut acc = LinComb::zero(p);
        let mut aux = false;
        for (w, c) in terms {
            if w.source != source {
                return Err(Error::DegreeMismatch {
                    expected: source,
                    found: w.source,
                });
            }
            let d = w.to_dual();
            aux = d.aux;
            acc.add_term(d.letters, *c);
        }
        let elem = DualElement {
            p,
            source: if aux { 2 * source } else { source },
            aux,
            variant: op_variant(p),
            terms: acc,
        };
        Ok(PowerOp {
            p,
            source,
            payload: normal_form_dual(&elem)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.payload.terms.is_zero()
    }

    /// Target total degree; `None` for the zero operation.
    pub fn target(&self) -> Option<i64> {
        self.rwords().first().map(|(w, _)| w.target())
    }

    /// Weight exponent (number of letters); `None` for zero.
    pub fn weight_exponent(&self) -> Option<usize> {
        self.rwords().first().map(|(w, _)| w.length())
    }

    pub fn rwords(&self) -> Vec<(RWord, u32)> {
        self.payload
            .words()
            .iter()
            .map(|(w, c)| (RWord::from_dual(w), *c))
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        let w = self.rwords();
        w.len() == 1 && w[0].0.length() == 0 && w[0].1 == 1
    }
}

impl fmt::Display for PowerOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.rwords();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(w, c)| if *c == 1 { w.to_string() } else { format!("{c} {w}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The composite `beta ∘ alpha`: the outer word is suspended to the target of
/// `alpha` and juxtaposed, then put in normal form.
pub fn compose(beta: &PowerOp, alpha: &PowerOp) -> Result<PowerOp> {
    let p = alpha.p;
    if beta.p != p {
        return Err(Error::MixedPrimes(beta.p.get(), p.get()));
    }
    if beta.payload.aux {
        return Err(Error::InvalidWord(
            "the self-bracket B may only appear innermost".into(),
        ));
    }
    if alpha.is_zero() || beta.is_zero() {
        return Ok(PowerOp {
            p,
            source: alpha.source,
            payload: DualElement {
                terms: LinComb::zero(p),
                ..alpha.payload.clone()
            },
        });
    }
    let target = alpha.target().expect("nonzero");
    if beta.source != target {
        return Err(Error::DegreeMismatch {
            expected: target,
            found: beta.source,
        });
    }
    let mut terms = LinComb::zero(p);
    for (outer, c) in beta.payload.terms.iter() {
        for (inner, e) in alpha.payload.terms.iter() {
            let mut w = outer.clone();
            w.extend_from_slice(inner);
            terms.add_term(w, p.mul(c, e));
        }
    }
    let payload = normal_form_dual(&DualElement {
        terms,
        ..alpha.payload.clone()
    })?;
    Ok(PowerOp {
        p,
        source: alpha.source,
        payload,
    })
}

/// All admissible R-words on a class of total degree `j` with at most
/// `length_cap` letters (a trailing `B` counting as one) and target degree in
/// `[lo, hi]`. Enumerated directly from the R-notation admissibility rules.
pub fn op_basis(p: Prime, j: i64, length_cap: usize, lo: i64, hi: i64) -> Vec<RWord> {
    let mut out = Vec::new();
    let mut starts = vec![(false, j, first_bound(p, j, false, j))];
    if !p.is_two() && j.rem_euclid(2) == 0 && length_cap >= 1 {
        starts.push((true, 2 * j - 1, first_bound(p, j, true, 2 * j - 1)));
    }
    for (bracket, start, min_first) in starts {
        let max_len = length_cap - bracket as usize;
        for len in 0..=max_len {
            let mut cur = Vec::new();
            enumerate_r(p, len, start - lo, min_first, &mut cur, &mut |letters| {
                let w = RWord {
                    p,
                    source: j,
                    letters,
                    bracket,
                };
                let t = w.target();
                if t >= lo && t <= hi {
                    out.push(w);
                }
            });
        }
    }
    out.sort();
    out
}

/// Smallest admissible index of the innermost letter.
fn first_bound(p: Prime, j: i64, bracket: bool, start: i64) -> i64 {
    if p.is_two() {
        1 - start
    } else if bracket {
        1 - j
    } else {
        // 2i > -start
        (-start).div_euclid(2) + 1
    }
}

fn min_next(p: Prime, l: Letter) -> i64 {
    if p.is_two() {
        2 * l.index
    } else {
        p.as_i64() * l.index + l.eps()
    }
}

/// Lower bound on the drop of `r` further admissible letters outside `l`.
fn min_future(p: Prime, l: Letter, r: usize) -> i64 {
    let mut total = 0;
    let mut cur = l;
    for _ in 0..r {
        cur = Letter::plain(min_next(p, cur));
        total += r_drop(p, cur);
    }
    total
}

/// Builds words innermost letter first; `budget` bounds the total drop.
fn enumerate_r(
    p: Prime,
    len: usize,
    budget: i64,
    min_first: i64,
    cur: &mut Vec<Letter>,
    emit: &mut dyn FnMut(Vec<Letter>),
) {
    if cur.len() == len {
        let mut w = cur.clone();
        w.reverse();
        emit(w);
        return;
    }
    let r = len - cur.len() - 1;
    let lo = match cur.last() {
        Some(&prev) => min_next(p, prev),
        None => min_first,
    };
    let betas: &[bool] = if p.is_two() { &[false] } else { &[false, true] };
    let mut i = lo;
    loop {
        let mut fits = false;
        for &beta in betas {
            let l = Letter::new(beta, i);
            let drop = r_drop(p, l);
            if drop + min_future(p, l, r) > budget {
                continue;
            }
            fits = true;
            cur.push(l);
            enumerate_r(p, len, budget - drop, min_first, cur, emit);
            cur.pop();
        }
        if !fits {
            break;
        }
        i += 1;
    }
}

fn bad_window(what: &str) -> Error {
    Error::RelationNotApplicable(what.to_string())
}

/// The right-hand side of the operation-level Adem relation for `outer inner`
/// on a class of total degree `j`, as printed, with R-words unreduced.
pub fn adem_r_rhs(p: Prime, outer: Letter, inner: Letter, j: i64) -> Result<Vec<(RWord, u32)>> {
    let (a, b) = (outer.index, inner.index);
    let mut out = Vec::new();
    let word = |x: Letter, y: Letter| RWord::new(p, j, vec![x, y]);
    if p.is_two() {
        if !(b - j < a && a < 2 * b && b > -j + 1) {
            return Err(bad_window("need b - j < a < 2b and b > 1 - j"));
        }
        // a + b - c >= 2c and c > 1 - j
        let hi = (a + b).div_euclid(3);
        for c in (2 - j)..=hi {
            let coeff = binom_raw(b - c - 1, a - 2 * c, p);
            if coeff != 0 {
                out.push((word(Letter::plain(a + b - c), Letter::plain(c)), coeff));
            }
        }
        return Ok(out);
    }
    let q = p.as_i64();
    let c_lo = (-j).div_euclid(2) + 1;
    // a + b - c > qc and a + b - c >= qc
    let strict_hi = (a + b - 1).div_euclid(q + 1);
    let weak_hi = (a + b).div_euclid(q + 1);
    let mut push = |x: Letter, y: Letter, coeff: u32| {
        if coeff != 0 {
            out.push((word(x, y), coeff));
        }
    };
    match (outer.beta, inner.beta) {
        (true, true) => {
            if !(a <= q * b && 2 * b > -j && 2 * a > 2 * (q - 1) * b - j) {
                return Err(bad_window("need a <= pb, 2b > -j, 2a > 2(p-1)b - j"));
            }
            for c in c_lo..=strict_hi {
                let coeff = p.mul(
                    p.sign(a - c + 1),
                    binom_raw((q - 1) * (b - c) - 1, a - q * c - 1, p),
                );
                push(Letter::bock(a + b - c), Letter::bock(c), coeff);
            }
        }
        (false, true) => {
            if !(a <= q * b && 2 * b > -j && 2 * a > 2 * (q - 1) * b + 1 - j) {
                return Err(bad_window("need a <= pb, 2b > -j, 2a > 2(p-1)b + 1 - j"));
            }
            for c in c_lo..=weak_hi {
                let coeff = p.mul(p.sign(a - c), binom_raw((q - 1) * (b - c), a - q * c, p));
                push(Letter::bock(a + b - c), Letter::plain(c), coeff);
            }
            for c in c_lo..=strict_hi {
                let coeff = p.mul(
                    p.sign(a - c),
                    binom_raw((q - 1) * (b - c) - 1, a - q * c - 1, p),
                );
                push(Letter::plain(a + b - c), Letter::bock(c), p.neg(coeff));
            }
        }
        (eps, false) => {
            if !(a < q * b && 2 * b > -j && 2 * a > 2 * (q - 1) * b - j) {
                return Err(bad_window("need a < pb, 2b > -j, 2a > 2(p-1)b - j"));
            }
            for c in c_lo..=weak_hi {
                let coeff = p.mul(p.sign(a - c), binom_raw((q - 1) * (b - c) - 1, a - q * c, p));
                push(Letter::new(eps, a + b - c), Letter::plain(c), coeff);
            }
        }
    }
    Ok(out)
}

/// Checks one operation-level Adem relation: the two-letter word and the
/// printed sum have the same normal form. Whenever the outer letter exists
/// on its own source, the composite of the two one-letter operations must
/// agree with the two-letter word as well. At odd p the window for
/// `βR^a βR^b` admits one boundary line (`2a = 2(p-1)b + 1 - j`) where the
/// outer letter only exists after shearing; there only the word is compared.
pub fn verify_adem_r(p: Prime, outer: Letter, inner: Letter, j: i64) -> Result<bool> {
    let rhs_terms = adem_r_rhs(p, outer, inner, j)?;
    let lhs = PowerOp::from_rword(&RWord::new(p, j, vec![outer, inner]))?;
    let alpha = PowerOp::from_rword(&RWord::new(p, j, vec![inner]))?;
    let mid = j - r_drop(p, inner);
    let beta = PowerOp::from_rword(&RWord::new(p, mid, vec![outer]))?;
    if !beta.is_zero() && compose(&beta, &alpha)? != lhs {
        return Ok(false);
    }
    let rhs = PowerOp::from_rwords(p, j, &rhs_terms)?;
    Ok(lhs.payload.terms == rhs.payload.terms)
}

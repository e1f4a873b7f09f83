//! Operations on mod p TAQ cohomology over the sphere: Steenrod monomials
//! (homological grading, so each letter lowers degree), their Adem
//! relations, the Cartan formula on brackets and the Nishida relations that
//! move Steenrod letters past R-letters.
//!
//! Mixed expressions are evaluated in a free algebra whose generators are
//! the classes `θ x` for admissible Steenrod monomials `θ`, created on
//! demand. Steenrod letters therefore always end up innermost.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{binom_raw, LinComb, Prime};
use crate::free::{free_basis, FreeAlgebra, FreeBasisElement, FreeSum};
use crate::lie::standard_factorization;
use crate::par::Exec;
use crate::power::{r_drop, RWord};
use crate::rewrite::{normalize, Step, DEFAULT_GUARD};
use crate::word::{tokenize, Letter};

/// A single Steenrod letter. `Sq` only at p = 2, `Beta` and `P` only at odd p.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SLetter {
    Sq(u32),
    Beta,
    P(u32),
}

impl SLetter {
    /// How far the letter lowers the homological degree.
    pub fn drop(self, p: Prime) -> i64 {
        match self {
            SLetter::Sq(a) => a as i64,
            SLetter::Beta => 1,
            SLetter::P(n) => 2 * (p.as_i64() - 1) * n as i64,
        }
    }

    fn check(self, p: Prime) -> Result<()> {
        match (self, p.is_two()) {
            (SLetter::Sq(_), true) | (SLetter::Beta | SLetter::P(_), false) => Ok(()),
            _ => Err(Error::InvalidWord(format!("{self:?} does not exist at p={p}"))),
        }
    }
}

/// A Steenrod monomial, outermost letter first. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SteenrodWord {
    pub p: Prime,
    pub letters: Vec<SLetter>,
}

impl SteenrodWord {
    /// Builds a word, dropping `Sq^0` and `P^0`.
    pub fn new(p: Prime, letters: Vec<SLetter>) -> Result<Self> {
        for l in &letters {
            l.check(p)?;
        }
        let letters = letters
            .into_iter()
            .filter(|l| !matches!(l, SLetter::Sq(0) | SLetter::P(0)))
            .collect();
        Ok(SteenrodWord { p, letters })
    }

    pub fn unit(p: Prime) -> Self {
        SteenrodWord { p, letters: Vec::new() }
    }

    pub fn sq(indices: &[u32]) -> Self {
        SteenrodWord::new(Prime::two(), indices.iter().map(|&a| SLetter::Sq(a)).collect())
            .expect("Sq letters exist at p = 2")
    }

    pub fn drop(&self) -> i64 {
        self.letters.iter().map(|l| l.drop(self.p)).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    /// Admissibility: `a_i >= 2 a_{i+1}` at p = 2; at odd p no two adjacent
    /// Bocksteins and `n_i >= p n_{i+1} + ε` across each `P^n β^ε P^m`.
    pub fn is_admissible(&self) -> bool {
        is_admissible_letters(self.p, &self.letters)
    }

    /// Parses `Sq3 Sq1`, `P2 bP1`, `bP0` (a lone Bockstein) or `1`.
    pub fn parse(p: Prime, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(SteenrodWord::unit(p));
        }
        let mut letters = Vec::new();
        for t in tokenize(s)? {
            let n = u32::try_from(t.letter.index)
                .map_err(|_| Error::InvalidWord(format!("negative Steenrod index in `{s}`")))?;
            match (t.symbol.as_str(), t.letter.beta) {
                ("Sq", false) => letters.push(SLetter::Sq(n)),
                ("P", beta) => {
                    if beta {
                        letters.push(SLetter::Beta);
                    }
                    letters.push(SLetter::P(n));
                }
                _ => return Err(Error::InvalidWord(format!("unknown Steenrod letter in `{s}`"))),
            }
        }
        SteenrodWord::new(p, letters)
    }
}

impl fmt::Display for SteenrodWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            match self.letters[i] {
                SLetter::Sq(a) => parts.push(format!("Sq{a}")),
                SLetter::P(n) => parts.push(format!("P{n}")),
                SLetter::Beta => match self.letters.get(i + 1) {
                    Some(SLetter::P(n)) => {
                        parts.push(format!("bP{n}"));
                        i += 1;
                    }
                    _ => parts.push("bP0".to_string()),
                },
            }
            i += 1;
        }
        write!(f, "{}", parts.join(" "))
    }
}

fn is_admissible_letters(p: Prime, w: &[SLetter]) -> bool {
    w.windows(2).all(|pair| match (pair[0], pair[1]) {
        (SLetter::Sq(a), SLetter::Sq(b)) => a >= 2 * b,
        (SLetter::Beta, SLetter::Beta) => false,
        (SLetter::P(a), SLetter::P(b)) => a >= p.get() * b,
        _ => true,
    }) && w.windows(3).all(|t| match (t[0], t[1], t[2]) {
        (SLetter::P(a), SLetter::Beta, SLetter::P(b)) => a > p.get() * b,
        _ => true,
    })
}

fn sign(p: Prime, e: i64) -> u32 {
    p.sign(e)
}

/// One Adem step on the leftmost inadmissible factor, if any.
fn adem_step(p: Prime, w: &[SLetter]) -> Step<SLetter> {
    let q = p.as_i64();
    for (at, pair) in w.windows(2).enumerate() {
        match (pair[0], pair[1]) {
            (SLetter::Sq(a), SLetter::Sq(b)) if a < 2 * b => {
                let (a, b) = (a as i64, b as i64);
                let mut with = LinComb::zero(p);
                for c in 0..=a / 2 {
                    let k = binom_raw(b - c - 1, a - 2 * c, p);
                    if k != 0 {
                        let mut m = vec![SLetter::Sq((a + b - c) as u32)];
                        if c > 0 {
                            m.push(SLetter::Sq(c as u32));
                        }
                        with.add_term(m, k);
                    }
                }
                return Step::Replace { at, len: 2, with };
            }
            (SLetter::Beta, SLetter::Beta) => return Step::Zero,
            (SLetter::P(a), SLetter::P(b)) if (a as i64) < q * b as i64 => {
                let (a, b) = (a as i64, b as i64);
                let mut with = LinComb::zero(p);
                for i in 0..=a / q {
                    let k = binom_raw((q - 1) * (b - i) - 1, a - q * i, p);
                    if k != 0 {
                        with.add_term(p_pair(a + b - i, i), p.mul(sign(p, a + i), k));
                    }
                }
                return Step::Replace { at, len: 2, with };
            }
            _ => {}
        }
    }
    for (at, t) in w.windows(3).enumerate() {
        if let (SLetter::P(a), SLetter::Beta, SLetter::P(b)) = (t[0], t[1], t[2]) {
            let (a, b) = (a as i64, b as i64);
            if a <= q * b {
                let mut with = LinComb::zero(p);
                for i in 0..=a / q {
                    let k = binom_raw((q - 1) * (b - i), a - q * i, p);
                    if k != 0 {
                        let mut m = vec![SLetter::Beta];
                        m.extend(p_pair(a + b - i, i));
                        with.add_term(m, p.mul(sign(p, a + i), k));
                    }
                    let k = binom_raw((q - 1) * (b - i) - 1, a - q * i - 1, p);
                    if k != 0 {
                        let mut m = p_pair(a + b - i, 0);
                        m.push(SLetter::Beta);
                        if i > 0 {
                            m.push(SLetter::P(i as u32));
                        }
                        with.add_term(m, p.mul(sign(p, a + i + 1), k));
                    }
                }
                return Step::Replace { at, len: 3, with };
            }
        }
    }
    Step::Done
}

/// `P^s P^t` with `P^0` omitted.
fn p_pair(s: i64, t: i64) -> Vec<SLetter> {
    [s, t]
        .into_iter()
        .filter(|&n| n > 0)
        .map(|n| SLetter::P(n as u32))
        .collect()
}

/// The admissible expansion of a Steenrod monomial by the Adem relations.
pub fn steenrod_adem_rewrite(word: &SteenrodWord) -> Result<LinComb<SteenrodWord>> {
    let p = word.p;
    let input = LinComb::single(p, word.letters.clone());
    let out = normalize(input, DEFAULT_GUARD, |w| Ok(adem_step(p, w)))?;
    Ok(out.map_keys(|letters| SteenrodWord { p, letters }))
}

/// All admissible Steenrod monomials lowering degree by at most `max_drop`,
/// sorted by drop and then by word.
pub fn admissible_monomials(p: Prime, max_drop: i64) -> Vec<SteenrodWord> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    extend_admissible(p, max_drop, &mut cur, &mut out);
    out.sort_by(|a, b| a.drop().cmp(&b.drop()).then_with(|| a.cmp(b)));
    out
}

/// Grows admissible words by prepending letters on the outside.
fn extend_admissible(p: Prime, budget: i64, cur: &mut Vec<SLetter>, out: &mut Vec<SteenrodWord>) {
    out.push(SteenrodWord { p, letters: cur.clone() });
    let mut candidates = Vec::new();
    if p.is_two() {
        let min = cur.first().map_or(1, |&l| match l {
            SLetter::Sq(b) => 2 * b,
            _ => unreachable!(),
        });
        for a in min.max(1)..=budget.max(0) as u32 {
            candidates.push(SLetter::Sq(a));
        }
    } else {
        if cur.first() != Some(&SLetter::Beta) {
            candidates.push(SLetter::Beta);
        }
        let min = match (cur.first(), cur.get(1)) {
            (Some(SLetter::P(b)), _) => p.get() * b,
            (Some(SLetter::Beta), Some(SLetter::P(b))) => p.get() * b + 1,
            _ => 1,
        };
        let step = 2 * (p.as_i64() - 1);
        for n in min.max(1)..=(budget.max(0) / step) as u32 {
            candidates.push(SLetter::P(n));
        }
    }
    for l in candidates {
        let d = l.drop(p);
        if d <= budget {
            cur.insert(0, l);
            extend_admissible(p, budget - d, cur, out);
            cur.remove(0);
        }
    }
}

/// A term of a Nishida expansion on a class `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MixedTerm {
    /// `R(θ x)`: an R-letter applied after a Steenrod monomial.
    Op { r: Letter, st: SteenrodWord },
    /// The left-normed bracket `[[θ_1 x, θ_2 x], …]`.
    Bracket(Vec<SteenrodWord>),
}

impl MixedTerm {
    /// Degree and weight of the term on a class of degree `d` and weight 1.
    pub fn degree_weight(&self, p: Prime, d: i64) -> (i64, u64) {
        match self {
            MixedTerm::Op { r, st } => (d - st.drop() - r_drop(p, *r), p.get() as u64),
            MixedTerm::Bracket(ws) => {
                let deg = ws.iter().map(|w| d - w.drop()).sum::<i64>() - (ws.len() as i64 - 1);
                (deg, ws.len() as u64)
            }
        }
    }

    pub fn show(&self, x: &str) -> String {
        let on = |w: &SteenrodWord| {
            if w.is_unit() {
                x.to_string()
            } else {
                format!("{w} {x}")
            }
        };
        match self {
            MixedTerm::Op { r, st } => format!("{}({})", r.show("R"), on(st)),
            MixedTerm::Bracket(ws) => {
                let mut s = on(&ws[0]);
                for w in &ws[1..] {
                    s = format!("[{s},{}]", on(w));
                }
                s
            }
        }
    }
}

/// Whether the R-letter acts on degree `d` (the bottom letter included).
pub fn r_exists(p: Prime, r: Letter, d: i64) -> bool {
    if p.is_two() {
        r.index >= 1 - d
    } else {
        2 * r.index > -d
    }
}

/// Whether the R-letter is the bottom operation on degree `d`.
pub fn r_is_bottom(p: Prime, r: Letter, d: i64) -> bool {
    if p.is_two() {
        r.index == 1 - d
    } else {
        !r.beta && 2 * r.index == 1 - d
    }
}

/// Nondecreasing sequences of length `len` with entries summing to `n`.
fn nondecreasing(len: usize, n: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, n: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == len {
            if n >= min {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let left = (len - cur.len()) as u32;
        let mut i = min;
        while i * left <= n {
            cur.push(i);
            go(len, n - i, i, cur, out);
            cur.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    go(len, n, 0, &mut Vec::new(), &mut out);
    out
}

/// `(p-1)! / ∏ m!` over the multiplicities `m` of a nondecreasing sequence
/// of length p, that is its number of arrangements divided by p. Zero for
/// a constant sequence, whose term is the restriction of `P^k x`.
fn orbit_weight(p: Prime, seq: &[u32]) -> u32 {
    let mut w: u32 = 1;
    for k in 1..seq.len() as i64 {
        w = p.mul(w, p.reduce(k));
    }
    let mut run = 0i64;
    for (k, v) in seq.iter().enumerate() {
        run = if k > 0 && seq[k - 1] == *v { run + 1 } else { 1 };
        if run >= p.as_i64() {
            return 0;
        }
        w = p.mul(w, p.inv(p.reduce(run)));
    }
    w
}

/// Permutations of `0..n` fixing `0`.
fn perms_fixing_first(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..rest.len() {
            let v = rest.remove(k);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(k, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

/// Moves one Steenrod letter past one R-letter on a class of degree `d`.
/// `lambda` is the unit with `x^{[p]} = λ · bottom(x)`; the bracket terms
/// of the odd-p bottom relation carry `1/λ`.
pub fn nishida_rewrite(p: Prime, st: SLetter, r: Letter, d: i64, lambda: u32) -> Result<LinComb<MixedTerm>> {
    st.check(p)?;
    if !r_exists(p, r, d) || (p.is_two() && r.beta) {
        return Err(Error::InvalidWord(format!(
            "{} does not act on degree {d}",
            r.show("R")
        )));
    }
    let q = p.as_i64();
    let op = |r: Letter, st: Vec<SLetter>| MixedTerm::Op {
        r,
        st: SteenrodWord::new(p, st).expect("letters checked"),
    };
    let mut out = LinComb::zero(p);
    let push_op = |out: &mut LinComb<MixedTerm>, r: Letter, st: Vec<SLetter>, c: u32| {
        let t = op(r, st);
        if let MixedTerm::Op { r, st } = &t {
            if c != 0 && r_exists(p, *r, d - st.drop()) {
                out.add_term(t.clone(), c);
            }
        }
    };
    match st {
        SLetter::Sq(a) => {
            let (a, b) = (a as i64, r.index);
            for c in 0..=a / 2 {
                let k = binom_raw(b - 1 - c, a - 2 * c, p);
                push_op(&mut out, Letter::plain(a + b - c), vec![SLetter::Sq(c as u32)], k);
            }
            if r_is_bottom(p, r, d) {
                for l in 0..=(a - 1) / 2 {
                    let k = a - l;
                    if l < k {
                        out.add_term(
                            MixedTerm::Bracket(vec![SteenrodWord::sq(&[l as u32]), SteenrodWord::sq(&[k as u32])]),
                            1,
                        );
                    }
                }
            }
        }
        SLetter::Beta => {
            if !r.beta {
                push_op(&mut out, Letter::bock(r.index), vec![], 1);
            }
            if r_is_bottom(p, r, d) {
                let inv = p.inv(p.reduce(lambda as i64));
                let n = p.get() as usize;
                for sigma in perms_fixing_first(n) {
                    let ws = sigma
                        .iter()
                        .map(|&k| {
                            let l = if k + 1 == n { vec![SLetter::Beta] } else { vec![] };
                            SteenrodWord::new(p, l).expect("β exists")
                        })
                        .collect();
                    out.add_term(MixedTerm::Bracket(ws), inv);
                }
            }
        }
        SLetter::P(n) => {
            let (n, j) = (n as i64, r.index);
            for i in 0..=n / q {
                let s = sign(p, n - i);
                if r.beta {
                    let k = binom_raw((j - i) * (q - 1), n - q * i, p);
                    push_op(&mut out, Letter::bock(n + j - i), vec![SLetter::P(i as u32)], p.mul(s, k));
                    // the second sum carries the opposite sign
                    let s = p.neg(s);
                    let k = binom_raw((j - i) * (q - 1) - 1, n - q * i - 1, p);
                    push_op(
                        &mut out,
                        Letter::plain(n + j - i),
                        vec![SLetter::Beta, SLetter::P(i as u32)],
                        p.mul(s, k),
                    );
                } else {
                    let k = binom_raw((j - i) * (q - 1) - 1, n - q * i, p);
                    push_op(&mut out, Letter::plain(n + j - i), vec![SLetter::P(i as u32)], p.mul(s, k));
                }
            }
            if r_is_bottom(p, r, d) {
                let inv = p.inv(p.reduce(lambda as i64));
                let perms = perms_fixing_first(p.get() as usize);
                for seq in nondecreasing(p.get() as usize, n as u32) {
                    let w = p.mul(inv, orbit_weight(p, &seq));
                    if w == 0 {
                        continue;
                    }
                    for sigma in &perms {
                        let ws = sigma
                            .iter()
                            .map(|&k| SteenrodWord::new(p, vec![SLetter::P(seq[k])]).expect("P exists"))
                            .collect();
                        out.add_term(MixedTerm::Bracket(ws), w);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The Cartan formula for one Steenrod letter on a bracket `[u, v]`, as a
/// sum of pairs `(θ, θ')` standing for `[θ u, θ' v]`.
pub fn cartan_bracket(p: Prime, st: SLetter, left_degree: i64) -> Result<LinComb<(SteenrodWord, SteenrodWord)>> {
    st.check(p)?;
    let w = |l: Vec<SLetter>| SteenrodWord::new(p, l).expect("letters checked");
    let mut out = LinComb::zero(p);
    match st {
        SLetter::Sq(a) => {
            for i in 0..=a {
                out.add_term((w(vec![SLetter::Sq(i)]), w(vec![SLetter::Sq(a - i)])), 1);
            }
        }
        SLetter::P(a) => {
            for i in 0..=a {
                out.add_term((w(vec![SLetter::P(i)]), w(vec![SLetter::P(a - i)])), 1);
            }
        }
        SLetter::Beta => {
            out.add_term((w(vec![SLetter::Beta]), w(vec![])), 1);
            // β is odd: the second term carries the Koszul sign of u
            out.add_term((w(vec![]), w(vec![SLetter::Beta])), p.sign(left_degree));
        }
    }
    Ok(out)
}

/// A letter of a mixed word: an R-letter or a Steenrod letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MixedLetter {
    R(Letter),
    St(SLetter),
}

/// Parses a mixed word such as `Sq2 R3 Sq1` or `P1 bR2`, outermost first.
pub fn parse_mixed(p: Prime, s: &str) -> Result<Vec<MixedLetter>> {
    let mut out = Vec::new();
    for t in tokenize(s)? {
        let bad = || Error::InvalidWord(format!("unknown letter in `{s}`"));
        match t.symbol.as_str() {
            "R" if t.indexed && (!p.is_two() || !t.letter.beta) => out.push(MixedLetter::R(t.letter)),
            "Sq" | "P" => {
                let w = SteenrodWord::parse(p, &(if t.letter.beta { "b" } else { "" }.to_string()
                    + &t.symbol
                    + &t.letter.index.to_string()))?;
                if w.is_unit() && !t.letter.beta {
                    continue;
                }
                out.extend(w.letters.iter().map(|&l| MixedLetter::St(l)));
            }
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

/// The free algebra over the power ring and the Steenrod algebra on a set
/// of classes, realised on generators `θ x_c`.
pub struct SlinearAlgebra {
    p: Prime,
    classes: Vec<i64>,
    gens: Vec<(u16, SteenrodWord)>,
    index: BTreeMap<(u16, Vec<SLetter>), u16>,
    free: FreeAlgebra,
}

impl SlinearAlgebra {
    pub fn new(p: Prime, classes: Vec<i64>) -> Self {
        let mut a = SlinearAlgebra {
            p,
            classes: classes.clone(),
            gens: Vec::new(),
            index: BTreeMap::new(),
            free: FreeAlgebra::new(p, Vec::new()),
        };
        for c in 0..classes.len() as u16 {
            a.generator_index(c, &SteenrodWord::unit(p));
        }
        a
    }

    pub fn with_lambda(mut self, lambda: u32) -> Result<Self> {
        self.free = std::mem::replace(&mut self.free, FreeAlgebra::new(self.p, Vec::new())).with_lambda(lambda)?;
        Ok(self)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn free(&mut self) -> &mut FreeAlgebra {
        &mut self.free
    }

    /// Index of the generator `θ x_c` for an admissible `θ`, created on demand.
    pub fn generator_index(&mut self, class: u16, theta: &SteenrodWord) -> u16 {
        let key = (class, theta.letters.clone());
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let d = self.classes[class as usize] - theta.drop();
        let i = self.free.add_generator(d);
        self.gens.push((class, theta.clone()));
        self.index.insert(key, i);
        i
    }

    pub fn generator(&self, i: u16) -> &(u16, SteenrodWord) {
        &self.gens[i as usize]
    }

    /// The class `x_c` itself.
    pub fn class(&mut self, c: u16) -> FreeSum {
        let i = self.generator_index(c, &SteenrodWord::unit(self.p));
        self.free.single(self.free.generator(i))
    }

    /// `θ x_c` for any monomial `θ`, expanded in admissibles.
    pub fn steenrod_class(&mut self, c: u16, theta: &SteenrodWord) -> Result<FreeSum> {
        let mut out = LinComb::zero(self.p);
        for (w, k) in steenrod_adem_rewrite(theta)?.iter() {
            let i = self.generator_index(c, w);
            out.add_term(self.free.generator(i), k);
        }
        Ok(out)
    }

    pub fn gen_name(&self, i: u16) -> String {
        let (c, w) = &self.gens[i as usize];
        if w.is_unit() {
            format!("x{c}")
        } else {
            format!("{w} x{c}")
        }
    }

    fn show_lyndon(&self, w: &[u16]) -> String {
        if w.len() == 1 {
            return self.gen_name(w[0]);
        }
        let (u, v) = standard_factorization(w);
        format!("[{},{}]", self.show_lyndon(&u), self.show_lyndon(&v))
    }

    pub fn show(&self, e: &FreeBasisElement) -> String {
        let inner = self.show_lyndon(&e.lyndon);
        if e.word.length() == 0 {
            inner
        } else {
            format!("{}({inner})", e.word)
        }
    }

    pub fn show_sum(&self, x: &FreeSum) -> String {
        crate::fp::format_comb(x, |e| self.show(e))
    }

    /// Applies a Steenrod letter to a homogeneous sum.
    pub fn act(&mut self, s: SLetter, x: &FreeSum) -> Result<FreeSum> {
        s.check(self.p)?;
        let mut out = LinComb::zero(self.p);
        for (e, c) in x.iter() {
            let v = self.act_basis(s, e)?;
            out.add_scaled(&v, c);
        }
        Ok(out)
    }

    /// Applies a Steenrod monomial, innermost letter first.
    pub fn act_word(&mut self, w: &SteenrodWord, x: &FreeSum) -> Result<FreeSum> {
        let mut cur = x.clone();
        for &l in w.letters.iter().rev() {
            cur = self.act(l, &cur)?;
        }
        Ok(cur)
    }

    fn act_basis(&mut self, s: SLetter, e: &FreeBasisElement) -> Result<FreeSum> {
        let p = self.p;
        if let Some((&r, rest)) = e.word.letters.split_first() {
            let inner = FreeBasisElement {
                lyndon: e.lyndon.clone(),
                word: RWord {
                    letters: rest.to_vec(),
                    ..e.word.clone()
                },
            };
            let z = self.free.single(inner);
            return self.push(s, r, &z);
        }
        let (u, v) = if e.word.bracket {
            (e.lyndon.clone(), e.lyndon.clone())
        } else if e.lyndon.len() == 1 {
            let (c, theta) = self.gens[e.lyndon[0] as usize].clone();
            let mut letters = vec![s];
            letters.extend(theta.letters);
            return self.steenrod_class(c, &SteenrodWord::new(p, letters)?);
        } else {
            standard_factorization(&e.lyndon)
        };
        let su = self.lyndon_sum(&u);
        let sv = self.lyndon_sum(&v);
        let mut out = LinComb::zero(p);
        for ((a, b), k) in cartan_bracket(p, s, crate::lie::word_degree(self.free.gen_degrees(), &u))?.iter() {
            let x = self.act_word(a, &su)?;
            let y = self.act_word(b, &sv)?;
            out.add_scaled(&self.free.bracket_eval(&x, &y)?, k);
        }
        Ok(out)
    }

    /// The Lyndon bracket of generators named by `w`, as a basis element.
    fn lyndon_sum(&self, w: &[u16]) -> FreeSum {
        let d = crate::lie::word_degree(self.free.gen_degrees(), w);
        self.free.single(FreeBasisElement {
            lyndon: w.to_vec(),
            word: RWord::unit(self.p, d),
        })
    }

    /// Moves a Steenrod letter past the R-letter `r` applied to `z`, by the
    /// Nishida relation, and evaluates the result.
    pub fn push(&mut self, s: SLetter, r: Letter, z: &FreeSum) -> Result<FreeSum> {
        let p = self.p;
        let Some((e, _)) = z.first() else {
            return Ok(LinComb::zero(p));
        };
        let d = e.degree();
        let lambda = self.free_lambda();
        let mut out = LinComb::zero(p);
        for (t, k) in nishida_rewrite(p, s, r, d, lambda)?.iter() {
            let v = match t {
                MixedTerm::Op { r, st } => {
                    let y = self.act_word(st, z)?;
                    self.free.apply_letter(*r, &y)?
                }
                MixedTerm::Bracket(ws) => {
                    let mut acc = self.act_word(&ws[0], z)?;
                    for w in &ws[1..] {
                        let y = self.act_word(w, z)?;
                        acc = self.free.bracket_eval(&acc, &y)?;
                    }
                    acc
                }
            };
            out.add_scaled(&v, k);
        }
        Ok(out)
    }

    fn free_lambda(&self) -> u32 {
        self.free.lambda()
    }

    /// Evaluates a mixed word on the class `x_c`, innermost letter first.
    pub fn evaluate(&mut self, word: &[MixedLetter], c: u16) -> Result<FreeSum> {
        let mut cur = self.class(c);
        for &l in word.iter().rev() {
            cur = match l {
                MixedLetter::R(r) => self.free.apply_letter(r, &cur)?,
                MixedLetter::St(s) => self.act(s, &cur)?,
            };
        }
        Ok(cur)
    }

    /// Applies R-letters (outermost first) to a sum.
    pub fn apply_r_word(&mut self, letters: &[Letter], x: &FreeSum) -> Result<FreeSum> {
        let mut cur = x.clone();
        for &l in letters.iter().rev() {
            cur = self.free.apply_letter(l, &cur)?;
        }
        Ok(cur)
    }
}

/// The basis of operations on a class of degree `j` over the sphere:
/// the free algebra on the classes `θ x` for admissible `θ`, restricted to
/// the degree window and weight cap. Returns the algebra naming the
/// generators together with the basis.
pub fn slinear_op_basis(
    p: Prime,
    j: i64,
    lo: i64,
    hi: i64,
    weight_cap: u64,
    exec: Exec,
) -> (SlinearAlgebra, Vec<FreeBasisElement>) {
    // An element of weight w with a generator of drop k has degree at most
    // (w - 1)(j - 1) + (j - k - 1) + 1.
    let max_drop = (1..=weight_cap as i64)
        .map(|w| w * (j - 1) + 1 - lo)
        .max()
        .unwrap_or(-1);
    let mut alg = SlinearAlgebra::new(p, vec![j]);
    if weight_cap == 0 || max_drop < 0 {
        return (alg, Vec::new());
    }
    for theta in admissible_monomials(p, max_drop) {
        alg.generator_index(0, &theta);
    }
    let degrees = alg.free.gen_degrees().to_vec();
    let basis = free_basis(p, &degrees, lo, hi, weight_cap, exec);
    (alg, basis)
}

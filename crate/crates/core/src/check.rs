//! Verification sweeps shared by the test suites and the command line.
//!
//! Each sweep returns a [`CheckReport`] with the number of cases examined
//! and the first few failures, so callers can print a verdict without
//! aborting on the first mismatch.

use std::fmt;

use serde::Serialize;

use crate::bar::compare_with_e2;
use crate::dual::{normal_form_with, unstable_ext_basis, DualElement, DualOpWord, Variant};
use crate::error::Result;
use crate::fp::{LinComb, Prime};
use crate::free::{bm_basis, dims_bm, dims_free, free_basis};
use crate::lie::{FreeLie, LieKey};
use crate::par::Exec;
use crate::power::{op_basis, op_variant, verify_adem_r, PowerOp, RWord};
use crate::primal::Strategy;
use crate::power::r_drop;
use crate::steenrod::{
    nishida_rewrite, r_exists, steenrod_adem_rewrite, MixedLetter, MixedTerm, SLetter, SlinearAlgebra, SteenrodWord,
};
use crate::word::Letter;

const MAX_SHOWN: usize = 10;

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases > 0
    }

    pub fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(describe());
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_SHOWN {
            self.failures.push(msg);
        }
    }

    /// Records the outcome of a fallible case; errors count as failures.
    pub fn outcome(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.case(ok, describe),
            Err(e) => {
                self.cases += 1;
                self.fail(format!("{}: {e}", describe()));
            }
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_SHOWN {
                self.failures.push(f);
            }
        }
    }

    pub fn merged(name: impl Into<String>, parts: impl IntoIterator<Item = CheckReport>) -> Self {
        let mut out = CheckReport::new(name);
        for p in parts {
            out.merge(p);
        }
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases", self.name, self.cases)?;
        if self.failure_count > 0 {
            write!(f, ", {} failures", self.failure_count)?;
        }
        write!(f, ")")?;
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

fn sample_letters(p: Prime, lo: i64, hi: i64) -> Vec<Letter> {
    if p.is_two() {
        (lo..=hi).map(Letter::plain).collect()
    } else {
        (lo..=hi)
            .flat_map(|i| [Letter::plain(i), Letter::bock(i)])
            .collect()
    }
}

/// Leftmost and rightmost rewriting agree on every length-3 dual word with
/// indices in `[-index, index]` and sources in `[-source, source]`, for both
/// variants at p = 2.
pub fn dual_confluence(p: Prime, index: i64, source: i64, exec: Exec) -> CheckReport {
    let letters = sample_letters(p, -index, index);
    let variants: &[Variant] = if p.is_two() {
        &[Variant::Additive, Variant::Full]
    } else {
        &[Variant::Additive]
    };
    let mut jobs = Vec::new();
    for &v in variants {
        for j in -source..=source {
            for &a in &letters {
                jobs.push((v, j, a));
            }
        }
    }
    let parts = exec.map(jobs, |(v, j, a)| {
        let mut rep = CheckReport::new("");
        for &b in &letters {
            for &c in &letters {
                let e = DualElement::from_word(&DualOpWord::new(p, j, vec![a, b, c], v));
                let l = normal_form_with(&e, Strategy::Leftmost);
                let r = normal_form_with(&e, Strategy::Rightmost);
                let ok = matches!((&l, &r), (Ok(x), Ok(y)) if x == y);
                rep.case(ok, || format!("p={p} j={j} {v:?} word {a} {b} {c}"));
            }
        }
        rep
    });
    CheckReport::merged(format!("dual confluence p={p}"), parts)
}

/// Every operation-level Adem relation in its window, for sources in
/// `[-source, source]` and indices with absolute value at most `index`.
pub fn adem_r_sweep(p: Prime, index: i64, source: i64, exec: Exec) -> CheckReport {
    let letters = sample_letters(p, -index, index);
    let jobs: Vec<(i64, Letter)> = (-source..=source)
        .flat_map(|j| letters.iter().map(move |&a| (j, a)))
        .collect();
    let parts = exec.map(jobs, |(j, a)| {
        let mut rep = CheckReport::new("");
        for &b in &letters {
            // pairs outside the window are skipped
            if crate::power::adem_r_rhs(p, a, b, j).is_err() {
                continue;
            }
            rep.outcome(verify_adem_r(p, a, b, j), || {
                format!("p={p} j={j} {} {}", a.show("R"), b.show("R"))
            });
        }
        rep
    });
    CheckReport::merged(format!("operation Adem relations p={p}"), parts)
}

/// The admissible dual words (strict, full variant at p = 2) translate
/// bijectively onto the R-admissible words, preserving weight and degree.
pub fn translation_bijection(p: Prime, source: i64, letters_cap: usize, width: i64) -> CheckReport {
    let mut rep = CheckReport::new(format!("translation bijection p={p}"));
    for j in -source..=source {
        let (lo, hi) = (j - width, j + width);
        let ext = unstable_ext_basis(p, j, op_variant(p), letters_cap, lo, hi);
        let mut translated: Vec<RWord> = Vec::new();
        for w in &ext {
            let r = RWord::from_dual(w);
            rep.case(
                r.weight() == w.weight() && r.target() == w.total_target() && r.to_dual() == *w,
                || format!("p={p} j={j} word {r} changes weight or degree"),
            );
            translated.push(r);
        }
        translated.sort();
        let direct: Vec<RWord> = op_basis(p, j, letters_cap + 1, lo, hi)
            .into_iter()
            .filter(|w| w.letters.len() <= letters_cap)
            .collect();
        rep.case(translated == direct, || {
            format!(
                "p={p} j={j}: {} translated words vs {} R-admissible words",
                translated.len(),
                direct.len()
            )
        });
        let dedup = {
            let mut t = translated.clone();
            t.dedup();
            t.len()
        };
        rep.case(dedup == translated.len(), || format!("p={p} j={j}: translation not injective"));
    }
    rep
}

/// Stability: each admissible R-word acts at sources `j` and `j + 1` with
/// targets one apart and the same coefficients after normal form.
pub fn stability(p: Prime, source: i64, letters_cap: usize, width: i64) -> CheckReport {
    let mut rep = CheckReport::new(format!("stability p={p}"));
    for j in -source..=source {
        for w in op_basis(p, j, letters_cap, j - width, j + width) {
            if w.bracket {
                continue;
            }
            let up = RWord { source: j + 1, ..w.clone() };
            let res = (|| -> Result<bool> {
                let a = PowerOp::from_rword(&w)?;
                let b = PowerOp::from_rword(&up)?;
                let same = a.payload.terms == b.payload.terms;
                let shift = match (a.target(), b.target()) {
                    (Some(x), Some(y)) => y == x + 1,
                    (None, None) => true,
                    _ => false,
                };
                Ok(same && shift && up.target() == w.target() + 1)
            })();
            rep.outcome(res, || format!("p={p} j={j} word {w}"));
        }
    }
    rep
}

/// The free basis and the sequence-indexed basis have the same number of
/// elements in every (degree, weight) cell of the window.
pub fn bm_agreement(
    p: Prime,
    gen_degrees: &[i64],
    lo: i64,
    hi: i64,
    weight_cap: u64,
    exec: Exec,
) -> CheckReport {
    let mut rep = CheckReport::new(format!("sequence count p={p} gens {gen_degrees:?}"));
    let a = dims_free(&free_basis(p, gen_degrees, lo, hi, weight_cap, exec));
    let b = dims_bm(&bm_basis(p, gen_degrees, lo, hi, weight_cap, exec));
    for w in 1..=weight_cap {
        for d in lo..=hi {
            let x = a.get(&(d, w)).copied().unwrap_or(0);
            let y = b.get(&(d, w)).copied().unwrap_or(0);
            rep.case(x == y, || {
                format!("p={p} gens {gen_degrees:?} degree {d} weight {w}: {x} basis vs {y} sequences")
            });
        }
    }
    rep
}

/// The Nishida suite on classes of degree in `[-source, source]`: every
/// rewrite is homogeneous, `Sq^a R^b R^c` and `Sq^a Sq^b R^c` (or their `P`
/// analogues) evaluate the same way whether the Steenrod letters are pushed
/// through first or the outer word is normalised first, and `Sq^1` on the
/// bottom operation of an even class is exactly `[x, Sq^1 x]`.
pub fn nishida_suite(p: Prime, index: i64, source: i64, exec: Exec) -> CheckReport {
    let st_letters: Vec<SLetter> = if p.is_two() {
        (1..=index as u32).map(SLetter::Sq).collect()
    } else {
        std::iter::once(SLetter::Beta)
            .chain((1..=index as u32).map(SLetter::P))
            .collect()
    };
    let r_letters = sample_letters(p, -index, index);
    let mut homogeneous = CheckReport::new("");
    for d in -source..=source {
        for &s in &st_letters {
            for &r in &r_letters {
                if !r_exists(p, r, d) {
                    continue;
                }
                let want = (d - r_drop(p, r) - s.drop(p), p.get() as u64);
                let res = nishida_rewrite(p, s, r, d, 1)
                    .map(|t| t.keys().all(|m| m.degree_weight(p, d) == want));
                homogeneous.outcome(res, || format!("p={p} d={d} {s:?} {}", r.show("R")));
            }
        }
    }
    let jobs: Vec<(i64, Letter)> = (-source..=source)
        .flat_map(|d| r_letters.iter().map(move |&c| (d, c)))
        .filter(|&(d, c)| r_exists(p, c, d))
        .collect();
    let parts = exec.map(jobs, |(d, c)| {
        let mut rep = CheckReport::new("");
        let mut alg = SlinearAlgebra::new(p, vec![d]);
        let x = alg.class(0);
        let z = match alg.free().apply_letter(c, &x) {
            Ok(z) => z,
            Err(e) => {
                rep.fail(format!("p={p} d={d} {}: {e}", c.show("R")));
                return rep;
            }
        };
        let dz = d - r_drop(p, c);
        for &s in &st_letters {
            for &b in &r_letters {
                if !r_exists(p, b, dz) {
                    continue;
                }
                let res = (|| -> Result<bool> {
                    let a = alg.push(s, b, &z)?;
                    let y = alg.free().apply_letter(b, &z)?;
                    let bb = alg.act(s, &y)?;
                    Ok(a == bb)
                })();
                rep.outcome(res, || format!("p={p} d={d} {s:?} {} {}", b.show("R"), c.show("R")));
            }
            for &t in &st_letters {
                let res = (|| -> Result<bool> {
                    let w = SteenrodWord::new(p, vec![s, t])?;
                    let mut a = crate::fp::LinComb::zero(p);
                    for (m, k) in steenrod_adem_rewrite(&w)?.iter() {
                        a.add_scaled(&alg.act_word(m, &z)?, k);
                    }
                    let inner = alg.act(t, &z)?;
                    let bb = alg.act(s, &inner)?;
                    Ok(a == bb)
                })();
                rep.outcome(res, || format!("p={p} d={d} {s:?} {t:?} {}", c.show("R")));
            }
        }
        rep
    });
    let mut bottom = CheckReport::new("");
    if p.is_two() {
        for d in (-source..=source).filter(|d| d % 2 == 0) {
            let res = (|| -> Result<bool> {
                let mut alg = SlinearAlgebra::new(p, vec![d]);
                let x = alg.class(0);
                let got = alg.evaluate(&[MixedLetter::St(SLetter::Sq(1)), MixedLetter::R(Letter::plain(1 - d))], 0)?;
                let sx = alg.act(SLetter::Sq(1), &x)?;
                let want = alg.free().bracket_eval(&x, &sx)?;
                let terms = nishida_rewrite(p, SLetter::Sq(1), Letter::plain(1 - d), d, 1)?;
                let only_bracket = terms.len() == 1
                    && terms.keys().all(|t| matches!(t, MixedTerm::Bracket(ws) if ws.len() == 2 && ws[0].is_unit() && ws[1] == SteenrodWord::sq(&[1])));
                Ok(got == want && only_bracket)
            })();
            bottom.outcome(res, || format!("Sq1 on the bottom operation of a class of degree {d}"));
        }
    }
    let mut all = vec![homogeneous, bottom];
    all.extend(parts);
    CheckReport::merged(format!("Nishida suite p={p}"), all)
}

/// Koszul sign `(-1)^{ab}` as an F_p scalar.
fn koszul(p: Prime, a: i64, b: i64) -> u32 {
    p.sign(a * b)
}

/// The restricted Lie axioms on a free algebra: graded commutativity and
/// Jacobi on basis triples of total weight at most `weight_cap`,
/// `ad(x^{[p]}) = ad(x)^p`, and the restriction of sums.
pub fn lie_suite(p: Prime, degrees: &[i64], weight_cap: u64) -> CheckReport {
    let mut lie = FreeLie::new(p, degrees.to_vec());
    let mut rep = CheckReport::new(format!("restricted Lie axioms p={p} degrees {degrees:?}"));
    let basis = lie.basis(weight_cap);
    let single = |k: &LieKey| LinComb::single(p, k.clone());
    let res = (|| -> Result<()> {
        for x in &basis {
            for y in &basis {
                let (wx, wy) = (lie.key_weight(x), lie.key_weight(y));
                if wx + wy > weight_cap {
                    continue;
                }
                let (dx, dy) = (lie.key_degree(x), lie.key_degree(y));
                let (ex, ey) = (single(x), single(y));
                let xy = lie.bracket(&ex, &ey)?;
                let yx = lie.bracket(&ey, &ex)?;
                rep.case(xy == yx.clone().scaled(koszul(p, dx, dy)), || {
                    format!("commutativity fails for {x:?}, {y:?}")
                });
                for z in &basis {
                    if wx + wy + lie.key_weight(z) > weight_cap {
                        continue;
                    }
                    let dz = lie.key_degree(z);
                    let ez = single(z);
                    let yz = lie.bracket(&ey, &ez)?;
                    let zx = lie.bracket(&ez, &ex)?;
                    let mut total = lie.bracket(&ex, &yz)?.scaled(koszul(p, dx, dz));
                    total.add_scaled(&lie.bracket(&ey, &zx)?, koszul(p, dy, dx));
                    total.add_scaled(&lie.bracket(&ez, &xy)?, koszul(p, dz, dy));
                    rep.case(total.is_zero(), || format!("Jacobi fails for {x:?}, {y:?}, {z:?}"));
                }
            }
        }
        let q = p.get() as u64;
        for x in &basis {
            let dx = lie.key_degree(x);
            if !lie.restrictable(dx) {
                continue;
            }
            let ex = single(x);
            let rx = lie.restriction(&ex)?;
            rep.case(rx == lie.restriction_expand(x)?, || {
                format!("restriction of {x:?} is not the restriction symbol")
            });
            for y in &basis {
                if lie.key_weight(x) * q + lie.key_weight(y) > weight_cap {
                    continue;
                }
                let ey = single(y);
                let lhs = lie.bracket(&ey, &rx)?;
                let rhs = lie.ad_power(&ex, &ey, p.get())?;
                rep.case(lhs == rhs, || format!("ad(x^[p]) != ad(x)^p for x={x:?}, y={y:?}"));
            }
        }
        // sums of two or three restrictable basis elements with coefficients
        let odd: Vec<&LieKey> = basis
            .iter()
            .filter(|k| lie.restrictable(lie.key_degree(k)))
            .collect();
        for (i, x) in odd.iter().enumerate() {
            for y in odd.iter().skip(i + 1) {
                if lie.key_weight(x).max(lie.key_weight(y)) * q > weight_cap {
                    continue;
                }
                for c in 1..p.get() {
                    let mut s = LinComb::single(p, (*x).clone()).scaled(c);
                    s.add_term((*y).clone(), 1);
                    let via_formula = lie.restriction_of_sum(&s)?;
                    let via_tensor = lie.restriction(&s)?;
                    rep.case(via_formula == via_tensor, || {
                        format!("restriction of {c}*{x:?} + {y:?} disagrees with the s_i/i formula")
                    });
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = res {
        rep.fail(format!("error: {e}"));
    }
    rep
}

/// Bar homology of the trivial algebra on one class of degree `j` equals the
/// count of admissible dual words in every cell of degrees `[lo, hi]` and
/// weights up to `weight_cap`, every assembled boundary squares to zero, and
/// the weight-3 cells vanish. Exceeding the memory budget is an error.
pub fn bar_check(j: i64, weight_cap: u64, lo: i64, hi: i64, exec: Exec) -> Result<CheckReport> {
    let mut rep = CheckReport::new(format!("bar homology vs admissible words p=2 j={j}"));
    for c in compare_with_e2(j, weight_cap, lo, hi, exec)? {
        rep.case(c.boundary_squares_zero, || {
            format!("degree {} weight {}: boundary does not square to zero", c.degree, c.weight)
        });
        rep.case(c.agrees(), || {
            format!(
                "degree {} weight {}: bar homology {:?} vs admissible words {:?}",
                c.degree, c.weight, c.bar, c.ext
            )
        });
        if c.weight == 3 {
            rep.case(c.bar.iter().all(|&h| h == 0), || {
                format!("degree {}: nonzero weight-3 homology {:?}", c.degree, c.bar)
            });
        }
    }
    Ok(rep)
}

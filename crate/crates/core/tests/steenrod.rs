use std::collections::BTreeMap;

use partition_ops::fp::binom_mod_p;
use partition_ops::power::r_drop;
use partition_ops::steenrod::{
    admissible_monomials, nishida_rewrite, r_exists, steenrod_adem_rewrite, SLetter, SlinearAlgebra, SteenrodWord,
};
use partition_ops::word::Letter;
use partition_ops::Prime;
use proptest::prelude::*;

/// A class of H^*(BZ/p)^{⊗k}: per factor the exponent of the exterior class
/// `u` (odd p only) and of the polynomial class `v` (or `x` at p = 2).
type Mono = Vec<(u32, u32)>;
type Poly = BTreeMap<Mono, u32>;

fn add(p: Prime, out: &mut Poly, m: Mono, c: u32) {
    let e = out.entry(m.clone()).or_insert(0);
    *e = p.add(*e, c);
    if *e == 0 {
        out.remove(&m);
    }
}

/// `P^n` (or `Sq^n`) on one monomial via the Cartan formula, using
/// `P^t v^a = binom(a, t) v^{a + t(p-1)}` and `P^t u = 0` for `t > 0`.
fn power_on_mono(p: Prime, n: u32, m: &Mono) -> Poly {
    let step = if p.is_two() { 1 } else { p.get() - 1 };
    // partial products with the part of n already spent
    let mut acc: Vec<(Mono, u32, u32)> = vec![(Vec::new(), 0, 1)];
    for &(e, a) in m {
        let mut next = Vec::new();
        for (prefix, used, c) in &acc {
            for t in 0..=n - used {
                let b = binom_mod_p(a as i64, t as i64, p).value();
                if b != 0 {
                    let mut q = prefix.clone();
                    q.push((e, a + t * step));
                    next.push((q, used + t, p.mul(*c, b)));
                }
            }
        }
        acc = next;
    }
    let mut out = Poly::new();
    for (q, used, c) in acc {
        if used == n {
            add(p, &mut out, q, c);
        }
    }
    out
}

/// The Bockstein as a derivation with the Koszul sign from earlier `u`s.
fn beta_on_mono(p: Prime, m: &Mono) -> Poly {
    let mut out = Poly::new();
    let mut odd_before = 0;
    for (k, &(e, a)) in m.iter().enumerate() {
        if e == 1 {
            let mut q = m.clone();
            q[k] = (0, a + 1);
            add(p, &mut out, q, p.sign(odd_before));
            odd_before += 1;
        }
    }
    out
}

fn act(p: Prime, w: &SteenrodWord, x: &Poly) -> Poly {
    let mut cur = x.clone();
    for l in w.letters.iter().rev() {
        let mut next = Poly::new();
        for (m, c) in &cur {
            let img = match *l {
                SLetter::Sq(n) | SLetter::P(n) => power_on_mono(p, n, m),
                SLetter::Beta => beta_on_mono(p, m),
            };
            for (q, d) in img {
                add(p, &mut next, q, p.mul(*c, d));
            }
        }
        cur = next;
    }
    cur
}

fn test_class(p: Prime) -> Poly {
    let m = if p.is_two() {
        vec![(0, 1), (0, 1), (0, 2), (0, 3), (0, 1), (0, 5)]
    } else {
        vec![(1, 0), (1, 1), (0, 1), (1, 2), (0, 3)]
    };
    BTreeMap::from([(m, 1)])
}

fn word(p: Prime) -> impl Strategy<Value = SteenrodWord> {
    let letter = if p.is_two() {
        (1u32..=6).prop_map(SLetter::Sq).boxed()
    } else {
        prop_oneof![Just(SLetter::Beta), (1u32..=3).prop_map(SLetter::P)].boxed()
    };
    prop::collection::vec(letter, 1..=3).prop_map(move |ls| SteenrodWord::new(p, ls).unwrap())
}

fn check_adem(p: Prime, w: &SteenrodWord) -> Result<(), TestCaseError> {
    let x = test_class(p);
    let rw = steenrod_adem_rewrite(w).unwrap();
    let mut via = Poly::new();
    for (v, c) in rw.iter() {
        prop_assert!(v.is_admissible(), "{v} is not admissible");
        prop_assert_eq!(v.drop(), w.drop());
        for (m, d) in act(p, v, &x) {
            add(p, &mut via, m, p.mul(c, d));
        }
    }
    prop_assert_eq!(act(p, w, &x), via, "word {}", w);
    let again = rw.flat_map(|v| steenrod_adem_rewrite(v).unwrap());
    prop_assert_eq!(again, rw);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adem_rewrite_matches_cohomology_action_p2(w in word(Prime::two())) {
        check_adem(Prime::two(), &w)?;
    }

    #[test]
    fn adem_rewrite_matches_cohomology_action_p3(w in word(Prime::three())) {
        check_adem(Prime::three(), &w)?;
    }

    #[test]
    fn nishida_is_homogeneous(
        p in prop::sample::select(vec![2u32, 3, 5]),
        n in 1u32..=6,
        beta in any::<bool>(),
        idx in -6i64..=8,
        d in -5i64..=5,
    ) {
        let p = Prime::new(p).unwrap();
        let s = if p.is_two() { SLetter::Sq(n) } else if beta { SLetter::Beta } else { SLetter::P(n) };
        let r = Letter::new(beta && !p.is_two() && idx % 2 == 0, idx);
        prop_assume!(r_exists(p, r, d));
        let want = (d - r_drop(p, r) - s.drop(p), p.get() as u64);
        for (t, _) in nishida_rewrite(p, s, r, d, 1).unwrap().iter() {
            prop_assert_eq!(t.degree_weight(p, d), want);
        }
    }

    #[test]
    fn adem_relations_hold_on_operations(
        idx in prop::collection::vec(-3i64..=4, 1..=2),
        w in word(Prime::two()),
        d in -3i64..=3,
    ) {
        let p = Prime::two();
        let letters: Vec<Letter> = idx.iter().map(|&i| Letter::plain(i)).collect();
        let mut alg = SlinearAlgebra::new(p, vec![d]);
        let x = alg.class(0);
        let Ok(z) = alg.apply_r_word(&letters, &x) else { return Ok(()) };
        let direct = alg.act_word(&w, &z).unwrap();
        let mut via = partition_ops::LinComb::zero(p);
        for (v, c) in steenrod_adem_rewrite(&w).unwrap().iter() {
            via.add_scaled(&alg.act_word(v, &z).unwrap(), c);
        }
        prop_assert_eq!(direct, via);
    }
}

#[test]
fn bockstein_squares_to_zero_on_operations() {
    let p = Prime::three();
    for d in [-3i64, -1, 1, 3] {
        let mut alg = SlinearAlgebra::new(p, vec![d]);
        let x = alg.class(0);
        for i in (1 - d)..4 {
            for l in [Letter::plain(i), Letter::bock(i)] {
                let Ok(z) = alg.apply_r_word(&[l], &x) else { continue };
                let bb = SteenrodWord::new(p, vec![SLetter::Beta, SLetter::Beta]).unwrap();
                assert!(alg.act_word(&bb, &z).unwrap().is_zero(), "d={d} letter {l:?}");
            }
        }
    }
}

#[test]
fn admissible_monomials_count_matches_series() {
    // dimensions of the mod 2 Steenrod algebra: 1/((1-t)(1-t^3)(1-t^7)...)
    let mut series = [0u64; 16];
    series[0] = 1;
    for k in [1usize, 3, 7, 15] {
        for n in k..16 {
            series[n] += series[n - k];
        }
    }
    let words = admissible_monomials(Prime::two(), 15);
    for (n, &want) in series.iter().enumerate() {
        let got = words.iter().filter(|w| w.drop() == n as i64).count() as u64;
        assert_eq!(got, want, "degree {n}");
    }
}

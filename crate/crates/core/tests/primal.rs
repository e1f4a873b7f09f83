use partition_ops::primal::{
    is_admissible, polyr_monad_mult, rewrite_with, Factor, Gen, Monomial, NestedAtom, PolyEval, Strategy as Order,
};
use partition_ops::word::Letter;
use partition_ops::{LinComb, Prime};
use proptest::prelude::*;

fn words(p: Prime) -> impl Strategy<Value = Vec<Letter>> {
    let odd = !p.is_two();
    let range = if odd { 1i64..=8 } else { -10i64..=10 };
    prop::collection::vec((any::<bool>(), range), 2..=4)
        .prop_map(move |v| v.into_iter().map(|(b, i)| Letter::new(b && odd, i)).collect())
}

fn check_confluent(p: Prime, w: Vec<Letter>) -> Result<(), TestCaseError> {
    let input = LinComb::single(p, w);
    let left = rewrite_with(p, input.clone(), Order::Leftmost).unwrap();
    let right = rewrite_with(p, input, Order::Rightmost).unwrap();
    prop_assert_eq!(&left, &right);
    for (v, _) in left.iter() {
        prop_assert!(is_admissible(p, v));
    }
    prop_assert_eq!(rewrite_with(p, left.clone(), Order::Leftmost).unwrap(), left);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn adem_rewriting_is_confluent_p2(w in words(Prime::two())) {
        check_confluent(Prime::two(), w)?;
    }

    #[test]
    fn adem_rewriting_is_confluent_p3_positive(w in words(Prime::three())) {
        check_confluent(Prime::three(), w)?;
    }

    #[test]
    fn cartan_formula_on_products(dx in -3i64..=3, dy in -3i64..=3, n in -6i64..=10) {
        let p = Prime::two();
        let (x, y) = (Gen { id: 0, degree: dx }, Gen { id: 1, degree: dy });
        let mut eval = PolyEval::new();
        let xy = Monomial::atom(x).times(&Monomial::atom(y));
        let lhs = eval.q_monomial(n, &xy).unwrap();
        let mut rhs = LinComb::zero(p);
        for a in dx..=(n - dy) {
            let qx = eval.eval_word(&[a], &x).unwrap();
            let qy = eval.eval_word(&[n - a], &y).unwrap();
            rhs.add_assign(&partition_ops::primal::poly_mul(&qx, &qy));
        }
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn bottom_operation_squares_and_lower_ones_vanish() {
    let x = Gen { id: 0, degree: 3 };
    let mut eval = PolyEval::new();
    let sq = eval.eval_word(&[3], &x).unwrap();
    let xx = Monomial::atom(x).times(&Monomial::atom(x));
    assert_eq!(sq, LinComb::single(Prime::two(), xx));
    assert!(eval.eval_word(&[2], &x).unwrap().is_zero());
}

#[test]
fn monad_multiplication_is_unital() {
    let p = Prime::two();
    let x = Gen { id: 0, degree: 1 };
    let mut eval = PolyEval::new();
    let inner = Monomial::new(vec![
        Factor { word: vec![3], atom: x },
        Factor::bare(x),
    ]);
    let outer = Monomial::atom(NestedAtom(inner.clone()));
    assert_eq!(polyr_monad_mult(&mut eval, &outer).unwrap(), LinComb::single(p, inner.clone()));
    // Q^i on a bare atom wrapped once is the factor itself
    let outer = Monomial::new(vec![Factor { word: vec![4], atom: NestedAtom(Monomial::atom(x)) }]);
    let want = Monomial::new(vec![Factor { word: vec![4], atom: x }]);
    assert_eq!(polyr_monad_mult(&mut eval, &outer).unwrap(), LinComb::single(p, want));
}

/// All strictly unstable admissible words of length `k` with letters in a box.
fn strict_words_brute(base: i64, k: usize, total: i64) -> Vec<Vec<i64>> {
    let mut out = vec![(Vec::new(), base)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|(w, d): (Vec<i64>, i64)| {
                (d + 1..=40).filter_map(move |i| {
                    // innermost first; the new letter is outer to the previous one
                    if w.last().is_some_and(|&q| i > 2 * q) {
                        return None;
                    }
                    let mut v = w.clone();
                    v.push(i);
                    Some((v, d + i))
                })
            })
            .collect();
    }
    let mut ws: Vec<Vec<i64>> = out
        .into_iter()
        .filter(|(w, _)| w.iter().sum::<i64>() == total)
        .map(|(mut w, _)| {
            w.reverse();
            w
        })
        .collect();
    ws.sort();
    ws
}

#[test]
fn strict_words_match_brute_force() {
    for base in -4..=3 {
        for k in 0..=3 {
            for total in -12..=16 {
                let mut fast = partition_ops::primal::strict_words(base, k, total);
                fast.sort();
                assert_eq!(fast, strict_words_brute(base, k, total), "base {base} k {k} total {total}");
            }
        }
    }
}

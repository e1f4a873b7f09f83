use partition_ops::power::{compose, op_basis, PowerOp, RWord};
use partition_ops::Prime;
use proptest::prelude::*;

fn op(w: &RWord) -> PowerOp {
    PowerOp::from_rword(w).unwrap()
}

/// A nonzero admissible word without the self-bracket on source `j`.
fn pick(p: Prime, j: i64, len: usize, idx: prop::sample::Index) -> Option<RWord> {
    let words: Vec<RWord> = op_basis(p, j, len, j - 12, j + 6)
        .into_iter()
        .filter(|w| !w.bracket && !w.letters.is_empty())
        .collect();
    (!words.is_empty()).then(|| words[idx.index(words.len())].clone())
}

fn primes() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u32, 3]).prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_is_associative(
        p in primes(),
        j in -3i64..=3,
        ia in any::<prop::sample::Index>(),
        ib in any::<prop::sample::Index>(),
        ic in any::<prop::sample::Index>(),
    ) {
        let Some(a) = pick(p, j, 2, ia) else { return Ok(()) };
        let Some(b) = pick(p, a.target(), 1, ib) else { return Ok(()) };
        let Some(c) = pick(p, b.target(), 1, ic) else { return Ok(()) };
        let (a, b, c) = (op(&a), op(&b), op(&c));
        let left = compose(&compose(&c, &b).unwrap(), &a).unwrap();
        let right = compose(&c, &compose(&b, &a).unwrap()).unwrap();
        prop_assert_eq!(left.rwords(), right.rwords());
    }

    #[test]
    fn units_are_neutral(p in primes(), j in -4i64..=4, ia in any::<prop::sample::Index>()) {
        let Some(a) = pick(p, j, 2, ia) else { return Ok(()) };
        let a = op(&a);
        let t = a.target().unwrap();
        prop_assert_eq!(compose(&PowerOp::unit(p, t), &a).unwrap(), a.clone());
        prop_assert_eq!(compose(&a, &PowerOp::unit(p, j)).unwrap(), a);
    }

    #[test]
    fn basis_words_are_admissible_and_in_window(p in primes(), j in -4i64..=4) {
        for w in op_basis(p, j, 3, j - 15, j + 5) {
            prop_assert!(w.is_admissible());
            prop_assert!(w.target() >= j - 15 && w.target() <= j + 5);
            prop_assert_eq!(RWord::from_dual(&w.to_dual()), w);
        }
    }
}

#[test]
fn documented_composites() {
    let p = Prime::two();
    let r = |j, s| op(&RWord::parse(p, j, s).unwrap());
    assert!(compose(&r(98, "R1"), &r(99, "R1")).unwrap().is_zero());
    assert_eq!(compose(&r(-1, "R2"), &r(0, "R1")).unwrap().to_string(), "R2 R1");
}

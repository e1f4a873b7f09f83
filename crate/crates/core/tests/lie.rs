use partition_ops::lie::{is_lyndon, lyndon_words, necklace_count, FreeLie};
use partition_ops::Prime;
use proptest::prelude::*;

/// Lyndon by definition: strictly smaller than every proper rotation.
fn lyndon_by_rotation(w: &[u16]) -> bool {
    (1..w.len()).all(|k| {
        let rot: Vec<u16> = w[k..].iter().chain(&w[..k]).copied().collect();
        w < rot.as_slice()
    })
}

fn all_words(k: u16, n: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn lyndon_words_match_rotation_definition() {
    for k in 1..=3u16 {
        for n in 1..=6 {
            let brute: Vec<Vec<u16>> = all_words(k, n).into_iter().filter(|w| lyndon_by_rotation(w)).collect();
            let fast: Vec<Vec<u16>> = lyndon_words(k as usize, n).into_iter().filter(|w| w.len() == n).collect();
            assert_eq!(fast, brute, "k={k} n={n}");
            assert_eq!(necklace_count(k as u64, n as u32), brute.len() as u64);
            assert!(brute.iter().all(|w| is_lyndon(w)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brackets_are_graded_antisymmetric(
        p in prop::sample::select(vec![2u32, 3, 5]),
        degrees in prop::collection::vec(-3i64..=4, 1..=3),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
    ) {
        let p = Prime::new(p).unwrap();
        let mut lie = FreeLie::new(p, degrees);
        let basis = lie.basis(3);
        let (x, y) = (&basis[i.index(basis.len())], &basis[j.index(basis.len())]);
        let (dx, dy) = (lie.key_degree(x), lie.key_degree(y));
        let ex = partition_ops::LinComb::single(p, x.clone());
        let ey = partition_ops::LinComb::single(p, y.clone());
        let xy = lie.bracket(&ex, &ey).unwrap();
        let yx = lie.bracket(&ey, &ex).unwrap();
        // shifted Lie: [x, y] = (-1)^{|x||y|} [y, x]
        let sign = p.sign(dx * dy);
        prop_assert_eq!(xy, yx.scaled(sign));
    }
}

use partition_ops::bar::{build_bar_complex, compare_with_e2, homology_dims, BarBuilder, BarNode};
use partition_ops::par::Exec;
use partition_ops::primal::Atom;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

#[test]
fn weight_one_is_the_generator() {
    for j in -2..=2 {
        let cells = build_bar_complex(j, 1, j - 3, j + 3).unwrap();
        for c in cells {
            let want = if c.degree == j { vec![1] } else { vec![0] };
            assert_eq!(c.homology(), want, "j={j} degree {}", c.degree);
        }
    }
}

#[test]
fn level_one_weight_two_basis() {
    let j = -1;
    let mut b = BarBuilder::new(j);
    for d in 2 * j..2 * j + 8 {
        let level: Vec<BarNode> = b.levels(d, 2).unwrap().remove(1);
        // Q^i x with i > j in degree j + i, and x·x in degree 2j
        assert_eq!(level.len(), 1, "degree {d}");
        assert_eq!(level[0].degree(), d);
    }
    assert!(b.levels(2 * j - 1, 2).unwrap()[1].is_empty());
}

#[test]
fn boundaries_square_to_zero() {
    for j in -1..=1 {
        for c in build_bar_complex(j, 4, 4 * j.min(0), 4 * j.min(0) + 12).unwrap() {
            assert!(c.boundary_squares_zero(), "j={j} degree {} weight {}", c.degree, c.weight);
        }
    }
}

#[test]
fn bar_homology_equals_admissible_words() {
    for j in -2..=2 {
        let lo = j.min(4 * j);
        let cells = compare_with_e2(j, 4, lo, lo + 23, Exec::Parallel).unwrap();
        assert_eq!(cells.len(), 4 * 24);
        for c in &cells {
            assert!(c.agrees(), "j={j}: {c:?}");
        }
        let dims = homology_dims(&cells);
        assert!(dims.iter().filter(|((_, w), _)| *w == 3).all(|(_, &n)| n == 0));
        assert_eq!(dims.get(&(j, 1)), Some(&1));
    }
}

#[test]
fn homology_is_independent_of_basis_order() {
    let mut rng = StdRng::seed_from_u64(7);
    for j in [-1i64, 0, 1] {
        let mut b = BarBuilder::new(j);
        for d in 4 * j.min(0)..4 * j.min(0) + 10 {
            let levels = b.levels(d, 4).unwrap();
            let base = b.assemble(d, 4, levels.clone()).unwrap().homology();
            let mut shuffled = levels;
            for l in &mut shuffled {
                l.shuffle(&mut rng);
            }
            assert_eq!(b.assemble(d, 4, shuffled).unwrap().homology(), base, "j={j} degree {d}");
        }
    }
}

#[test]
fn sequential_and_parallel_comparisons_agree() {
    let a = compare_with_e2(0, 4, -2, 10, Exec::Parallel).unwrap();
    let b = compare_with_e2(0, 4, -2, 10, Exec::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn weight_cap_is_bounded() {
    assert!(build_bar_complex(0, 5, 0, 3).is_err());
}

use mdist::matching::{bottleneck_distance, Bar, MatchGraph};
use mdist::oracle::{brute_bottleneck, NaiveBar};
use mdist::rational::{ExtRational, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_bars<R: Rng>(rng: &mut R, n: usize) -> Vec<Bar> {
    (0..n)
        .map(|_| {
            let b = Rational::new(rng.random_range(0..16), 2);
            if rng.random_bool(0.2) {
                Bar::new(b, ExtRational::Infinity)
            } else {
                let d = &b + &Rational::new(rng.random_range(1..12), 2);
                Bar::new(b, ExtRational::Finite(d))
            }
        })
        .collect()
}

fn naive(bars: &[Bar]) -> Vec<NaiveBar> {
    bars.iter().map(|b| (b.birth.clone(), b.death.clone())).collect()
}

#[test]
fn agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..400 {
        let n1 = rng.random_range(0..=3);
        let n2 = rng.random_range(0..=(6 - n1).min(3));
        let (x, y) = (random_bars(&mut rng, n1), random_bars(&mut rng, n2));
        let d = bottleneck_distance(&x, &y);
        assert_eq!(d, brute_bottleneck(&naive(&x), &naive(&y)).unwrap(), "{x:?} {y:?}");
        assert_eq!(d, bottleneck_distance(&y, &x));
    }
}

#[test]
fn perfect_matching_is_monotone_in_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let (x, y) = (random_bars(&mut rng, 4), random_bars(&mut rng, 3));
        let mut seen_true = false;
        for k in 0..=24 {
            let g = MatchGraph::new(x.clone(), y.clone(), Rational::new(k, 2));
            let (ok, m) = g.has_perfect_matching();
            assert!(!seen_true || ok, "lost the matching at lambda {k}/2");
            seen_true |= ok;
            for (l, r) in m.mate_left.iter().enumerate() {
                if let Some(r) = r {
                    assert!(g.has_edge(l, *r));
                    assert_eq!(m.mate_right[*r], Some(l));
                }
            }
        }
    }
}

#[test]
fn constant_augmentation_restores_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (x, y) = (random_bars(&mut rng, 5), random_bars(&mut rng, 4));
        let g = MatchGraph::new(x, y, Rational::new(rng.random_range(0..10), 2));
        let full = g.maximum_matching();
        let mut m = full.clone();
        for _ in 0..2 {
            let l = rng.random_range(0..g.side_len());
            m.unlink_left(l);
        }
        let ok = g.augment_constant(&mut m);
        assert_eq!(ok, full.is_perfect());
        if full.is_perfect() {
            assert!(m.is_perfect());
        }
    }
}

proptest! {
    #[test]
    fn distance_is_symmetric_and_zero_on_self(seed in any::<u64>(), n in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_bars(&mut rng, n), random_bars(&mut rng, n));
        prop_assert_eq!(bottleneck_distance(&x, &y), bottleneck_distance(&y, &x));
        prop_assert_eq!(bottleneck_distance(&x, &x), ExtRational::Finite(Rational::zero()));
    }
}

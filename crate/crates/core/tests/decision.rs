use mdist::decision::{decide_leq, decide_leq_oneside, walk_all_faces};
use mdist::oracle::{naive_decide_leq, naive_decide_oneside};
use mdist::random::random_pair;
use mdist::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn agrees_with_per_face_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let total = rng.random_range(2..=10);
        let (q, q2) = random_pair(&mut rng, total, 8, 2);
        let lambda = Rational::new(rng.random_range(0..=12), 4);
        let fast = decide_leq_oneside(&q, &q2, &lambda);
        let slow = naive_decide_oneside(&q, &q2, &lambda);
        assert_eq!(fast, slow, "case {case}: lambda {lambda}\n{q:?}\n{q2:?}");
        assert_eq!(decide_leq(&q, &q2, &lambda), naive_decide_leq(&q, &q2, &lambda), "case {case}");
    }
}

#[test]
fn every_face_agrees_with_fresh_evaluation() {
    use mdist::oracle::{naive_barcode, naive_bottleneck_leq};
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut failures = 0;
    for _ in 0..40 {
        let total = rng.random_range(2..=8);
        let (q, q2) = random_pair(&mut rng, total, 6, 2);
        let lambda = Rational::new(rng.random_range(0..=8), 4);
        let mut faces = 0;
        let mut observer = |_f: usize, s: &mdist::slices::DualPoint, ok: bool| {
            faces += 1;
            let fresh = naive_bottleneck_leq(&naive_barcode(&q, s), &naive_barcode(&q2, s), &lambda);
            assert_eq!(ok, fresh, "slice {s:?} lambda {lambda}");
            failures += usize::from(!ok);
        };
        walk_all_faces(&q, &q2, &lambda, &mut observer);
        assert!(faces > 0);
    }
    assert!(failures > 0, "no face ever failed; the cases are too easy");
}

/// The walk only uses lines that can change the bottleneck graph; evaluating
/// every face of the complete arrangement must give the same answer.
#[test]
fn restricted_lines_lose_nothing() {
    use mdist::arrangement::{build_arrangement, build_lines_t_lambda};
    use mdist::decision::decision_lines;
    use mdist::oracle::{naive_barcode, naive_bottleneck_leq};
    use mdist::presentation::ElementSet;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (mut full_faces, mut restricted_faces) = (0, 0);
    for case in 0..40 {
        let total = rng.random_range(2..=6);
        let (q, q2) = random_pair(&mut rng, total, 6, 2);
        let lambda = Rational::new(rng.random_range(0..=8), 4);
        let set = ElementSet::new(&q, &q2);
        let arr = build_arrangement(&build_lines_t_lambda(&set, &lambda));
        full_faces += arr.faces.len();
        restricted_faces += build_arrangement(&decision_lines(&set, &lambda)).faces.len();
        let everywhere = arr.faces.iter().all(|f| {
            let s = &f.representative;
            naive_bottleneck_leq(&naive_barcode(&q, s), &naive_barcode(&q2, s), &lambda)
        });
        assert_eq!(everywhere, decide_leq_oneside(&q, &q2, &lambda), "case {case}");
    }
    assert!(restricted_faces <= full_faces);
}

use mdist::field::FieldScalar;
use mdist::persistence::{RuState, Transposition};
use mdist::presentation::Presentation;
use mdist::random::{random_presentation, RandomSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_orders<R: Rng>(rng: &mut R, q: &Presentation) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<usize> = (0..q.num_generators()).collect();
    let mut cols: Vec<usize> = (0..q.num_relations()).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    (rows, cols)
}

/// Dense product of an `m × k` and a `k × n` matrix, both row-major.
fn multiply(ru: &RuState, a: &[Vec<FieldScalar>], b: &[Vec<FieldScalar>]) -> Vec<Vec<FieldScalar>> {
    let f = ru.field();
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(FieldScalar::ZERO, |acc, (x, brow)| f.add(acc, f.mul(*x, brow[j]))))
                .collect()
        })
        .collect()
}

fn transpose(m: &[Vec<FieldScalar>], rows: usize) -> Vec<Vec<FieldScalar>> {
    (0..rows).map(|i| m.iter().map(|col| col[i]).collect()).collect()
}

fn spec(rng: &mut ChaCha8Rng) -> RandomSpec {
    let primes = [2, 3, 5, 7];
    RandomSpec {
        generators: rng.random_range(1..=7),
        relations: rng.random_range(0..=7),
        max_grade: 8,
        prime: primes[rng.random_range(0..primes.len())],
    }
}

#[test]
fn reduction_factors_the_ordered_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..150 {
        let sp = spec(&mut rng);
        let q = random_presentation(&mut rng, &sp);
        let (rows, cols) = random_orders(&mut rng, &q);
        let ru = RuState::reduce(&q, rows, cols);
        ru.check_invariants().unwrap();
        // Accessors are column-major; R·U must give back the ordered matrix.
        let (m, n) = (ru.num_rows(), ru.num_cols());
        let r = transpose(ru.r_matrix(), m);
        let u = transpose(&ru.u_matrix(), n);
        if n > 0 {
            assert_eq!(multiply(&ru, &r, &u), transpose(&ru.ordered_matrix(), m));
        }
        let mut lows: Vec<usize> = ru.pairing().iter().filter_map(|&(g, r)| r.map(|_| g)).collect();
        let before = lows.len();
        lows.sort_unstable();
        lows.dedup();
        assert_eq!(lows.len(), before);
    }
}

#[test]
fn vineyard_walks_match_fresh_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let sp = spec(&mut rng);
        let q = random_presentation(&mut rng, &sp);
        let (rows, cols) = random_orders(&mut rng, &q);
        let mut ru = RuState::reduce(&q, rows, cols);
        for _ in 0..50 {
            let before = ru.pairing();
            let use_rows = ru.num_cols() < 2 || (ru.num_rows() >= 2 && rng.random_bool(0.5));
            let (which, len) = if use_rows {
                (Transposition::Rows, ru.num_rows())
            } else {
                (Transposition::Columns, ru.num_cols())
            };
            if len < 2 {
                break;
            }
            let delta = ru.transpose(which, rng.random_range(0..len - 1));
            ru.check_invariants().unwrap();
            let fresh = RuState::reduce(&q, ru.row_order().to_vec(), ru.col_order().to_vec());
            let after = ru.pairing();
            assert_eq!(after, fresh.pairing());
            for (g, (x, y)) in before.iter().zip(&after).enumerate() {
                if x.1 != y.1 {
                    assert!(delta.contains(&g), "generator {g} changed partner but is not reported");
                }
            }
        }
    }
}

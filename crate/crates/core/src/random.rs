//! Random presentations for tests, benchmarks and the acceptance suite.

use rand::Rng;

use crate::field::{FieldScalar, PrimeField};
use crate::presentation::{Column, Grade, Presentation};
use crate::rational::Rational;

/// Shape of a random presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub generators: usize,
    pub relations: usize,
    /// Integer grades are drawn from `0..=max_grade`.
    pub max_grade: i64,
    pub prime: u64,
}

/// A random valid presentation. Each relation is graded at or above the join
/// of the generators it touches; entries are nonzero field elements.
pub fn random_presentation<R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> Presentation {
    let field = PrimeField::new(spec.prime).expect("prime characteristic");
    let g = spec.max_grade;
    let gens: Vec<Grade> = (0..spec.generators)
        .map(|_| Grade::new(rng.random_range(0..=g), rng.random_range(0..=g)))
        .collect();
    let mut rels = Vec::with_capacity(spec.relations);
    let mut cols = Vec::with_capacity(spec.relations);
    for _ in 0..spec.relations {
        if gens.is_empty() {
            rels.push(Grade::new(rng.random_range(0..=g), rng.random_range(0..=g)));
            cols.push(Vec::new());
            continue;
        }
        let k = rng.random_range(1..=gens.len().min(3));
        let mut chosen: Vec<usize> = Vec::new();
        while chosen.len() < k {
            let i = rng.random_range(0..gens.len());
            if !chosen.contains(&i) {
                chosen.push(i);
            }
        }
        let mut grade = gens[chosen[0]].clone();
        for &i in &chosen[1..] {
            grade = grade.join(&gens[i]);
        }
        let mut bump = |v: &Rational| (v + &Rational::from(rng.random_range(0..=2i64))).min(Rational::from(g));
        let grade = Grade { x: bump(&grade.x), y: bump(&grade.y) };
        let mut col: Column = chosen
            .iter()
            .map(|&i| (i, FieldScalar(rng.random_range(1..spec.prime as u32))))
            .collect();
        col.sort_unstable_by_key(|&(r, _)| r);
        rels.push(grade);
        cols.push(col);
    }
    Presentation::new(field, gens, rels, cols).expect("generated presentations are valid")
}

/// A random pair with `total` elements split between the two presentations.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, total: usize, max_grade: i64, prime: u64) -> (Presentation, Presentation) {
    let first = rng.random_range(0..=total);
    let split = |n: usize, rng: &mut R| {
        let gens = if n == 0 { 0 } else { rng.random_range(1..=n) };
        RandomSpec { generators: gens, relations: n - gens, max_grade, prime }
    };
    let a = split(first, rng);
    let b = split(total - first, rng);
    (random_presentation(rng, &a), random_presentation(rng, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_presentations_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let spec = RandomSpec { generators: 4, relations: 4, max_grade: 8, prime: 3 };
            let q = random_presentation(&mut rng, &spec);
            q.validate().unwrap();
            assert_eq!(q.len(), 8);
        }
    }
}

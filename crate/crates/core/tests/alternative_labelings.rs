//! The shipped type table is one of eight labelings of the 2-dimensional
//! shapes that survive `d² = 0`. They all give the same ranks and pages.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use khss_core::configuration::TypeTable;
use khss_core::cube::Decoration;
use khss_core::differential::{ChainComplex, Cube, Rules, Variant};
use khss_core::homology::{homology_by_delta, spectral_pages};
use khss_core::random;

/// Relabel moves: a 3-start chain shape with its dual, the two 2+2 shapes
/// with opposite mirrors, and the chirality of the one-circle shape.
const MOVES: [&[(u8, u8)]; 4] = [&[(2, 10), (4, 12)], &[(6, 14)], &[(7, 15)], &[(8, 16)]];

fn table(mask: u32) -> TypeTable {
    let mut perm: Vec<u8> = (0..=16).collect();
    for (i, m) in MOVES.iter().enumerate() {
        if mask >> i & 1 == 1 {
            for &(a, b) in m.iter() {
                perm.swap(a as usize, b as usize);
            }
        }
    }
    TypeTable::standard().renumbered(|t| perm[t as usize])
}

fn even(mask: u32) -> bool {
    (mask & 0b111).count_ones().is_multiple_of(2)
}

fn samples(count: usize, seed: u64) -> Vec<(Cube, Decoration)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (_, _, d) = random::braid_closure(5, 8, &mut rng);
            let t = Decoration::random(d.len(), &mut rng);
            (Cube::new(&d), t)
        })
        .collect()
}

#[test]
fn eight_labelings_survive() {
    let cases = samples(40, 2);
    let survivors: Vec<u32> = (0..16)
        .filter(|&mask| {
            let t = table(mask);
            let rules = Rules { table: &t, variant: Variant::Standard };
            cases.iter().all(|(c, dec)| {
                let d = c.d(dec, &rules);
                d.compose(&d).is_zero()
            })
        })
        .collect();
    assert_eq!(survivors, (0..16).filter(|&m| even(m)).collect::<Vec<_>>());
}

#[test]
fn survivors_agree_on_ranks_and_pages() {
    let cases = samples(15, 9);
    for mask in (1..16).filter(|&m| even(m)) {
        let alt = table(mask);
        let rules = Rules { table: &alt, variant: Variant::Standard };
        for (cube, t) in &cases {
            let gens = cube.basis.generators.clone();
            let a = ChainComplex { generators: gens.clone(), d: cube.d(t, &Rules::standard()) };
            let b = ChainComplex { generators: gens, d: cube.d(t, &rules) };
            assert_eq!(homology_by_delta(&a), homology_by_delta(&b), "labeling {mask:04b}");
            let last = cube.n() + 1;
            assert_eq!(spectral_pages(&a, last), spectral_pages(&b, last), "labeling {mask:04b}");
        }
    }
}

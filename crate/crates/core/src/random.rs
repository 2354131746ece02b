//! Seeded random inputs.

use rand::Rng;

use crate::diagram::LinkDiagram;

/// A braid word on `strands` strands with `len` letters, each a uniformly
/// chosen generator and sign.
pub fn braid_word(strands: usize, len: usize, rng: &mut impl Rng) -> Vec<i32> {
    assert!(strands >= 2, "a braid word needs two strands");
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

/// Closure of a random braid with between 2 and `max_strands` strands and
/// between 1 and `max_crossings` crossings.
pub fn braid_closure(max_strands: usize, max_crossings: usize, rng: &mut impl Rng) -> (usize, Vec<i32>, LinkDiagram) {
    let strands = rng.gen_range(2..=max_strands.max(2));
    let len = rng.gen_range(1..=max_crossings.max(1));
    let word = braid_word(strands, len, rng);
    let d = LinkDiagram::from_braid(strands, &word).expect("braid closures are valid diagrams").with_default_basepoint();
    (strands, word, d)
}

pub fn format_braid(strands: usize, word: &[i32]) -> String {
    let w: Vec<String> = word.iter().map(|g| g.to_string()).collect();
    format!("{strands}: {}", w.join(" "))
}

//! Fixtures shared by the benchmarks.

use khss_core::corpus;
use khss_core::cube::{braid_decoration, Decoration};
use khss_core::differential::Cube;

/// The cube of a corpus diagram with its braid decoration (zeros for PD
/// entries).
pub fn fixture(name: &str) -> (Cube, Decoration) {
    let d = corpus::get(name).expect("corpus entry").diagram().expect("corpus entries parse");
    let t = braid_decoration(&d).unwrap_or_else(|_| Decoration::zeros(d.len()));
    (Cube::new(&d), t)
}

//! Linear algebra over GF(2): ranks, graded homology and the spectral
//! sequence of the filtration by homological degree.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::cube::Generator;
use crate::differential::{xor_sorted, ChainComplex, SparseMapF2};

/// Dense matrix over GF(2) with bit-packed columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = rows.div_ceil(64);
        F2Matrix { rows, cols, words, data: vec![0; words * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_sparse(s: &SparseMapF2) -> Self {
        let mut m = F2Matrix::zeros(s.rows(), s.cols());
        for j in 0..s.cols() {
            for &r in s.column(j) {
                m.set(r as usize, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[c * self.words + r / 64] >> (r % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[c * self.words + r / 64];
        if v {
            *w |= 1 << (r % 64);
        } else {
            *w &= !(1 << (r % 64));
        }
    }

    pub fn column(&self, c: usize) -> &[u64] {
        &self.data[c * self.words..(c + 1) * self.words]
    }

    pub fn transpose(&self) -> Self {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            for r in 0..self.rows {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix with the given columns appended.
    pub fn hstack(&self, other: &F2Matrix) -> Self {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        F2Matrix { rows: self.rows, cols: self.cols + other.cols, words: self.words, data }
    }

    /// Gaussian elimination rank.
    pub fn rank(&self) -> usize {
        let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
        for c in 0..self.cols {
            let mut v = self.column(c).to_vec();
            for (p, row) in &pivots {
                if v[p / 64] >> (p % 64) & 1 == 1 {
                    for (a, b) in v.iter_mut().zip(row) {
                        *a ^= b;
                    }
                }
            }
            if let Some(p) = lowest_bit(&v) {
                pivots.push((p, v));
            }
        }
        pivots.len()
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| 64 * i + w.trailing_zeros() as usize)
}

/// Rank of a sparse matrix by column elimination.
pub fn sparse_rank(m: &SparseMapF2) -> usize {
    let mut owner: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut rank = 0;
    for c in m.columns() {
        let mut v = c.clone();
        while let Some(&p) = v.first() {
            match owner.get(&p) {
                Some(w) => v = xor_sorted(&v, w),
                None => break,
            }
        }
        if let Some(&p) = v.first() {
            owner.insert(p, v);
            rank += 1;
        }
    }
    rank
}

/// Ranks keyed by a grading.
pub type GradedRanks<K> = BTreeMap<K, usize>;

/// Which grading homology is split by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Delta,
    /// `(q, h)`; only meaningful for a complex that preserves `q`.
    Bigraded,
}

fn blocks<K: Ord + Copy>(gens: &[Generator], key: impl Fn(&Generator) -> K) -> BTreeMap<K, Vec<usize>> {
    let mut out: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        out.entry(key(g)).or_default().push(i);
    }
    out
}

fn homology_by<K: Ord + Copy + Send + Sync>(
    c: &ChainComplex,
    key: impl Fn(&Generator) -> K + Sync,
    next: impl Fn(K) -> K + Sync,
) -> GradedRanks<K> {
    let groups = blocks(&c.generators, &key);
    let keys: Vec<K> = groups.keys().copied().collect();
    // rank of d out of each block
    let out_rank: BTreeMap<K, usize> = keys
        .par_iter()
        .map(|&k| {
            let cols = &groups[&k];
            let rows = groups.get(&next(k)).cloned().unwrap_or_default();
            for &j in cols {
                assert!(
                    c.d.column(j).iter().all(|&r| key(&c.generators[r as usize]) == next(k)),
                    "differential is not homogeneous"
                );
            }
            (k, sparse_rank(&c.d.restrict(&rows, cols)))
        })
        .collect();
    let mut out = BTreeMap::new();
    for &k in &keys {
        let incoming: usize = keys.iter().filter(|&&p| next(p) == k).map(|p| out_rank[p]).sum();
        let r = groups[&k].len() - out_rank[&k] - incoming;
        if r > 0 {
            out.insert(k, r);
        }
    }
    out
}

/// Homology ranks per `delta`: `dim ker(d: C_δ -> C_{δ-2}) - rank(d: C_{δ+2} -> C_δ)`.
pub fn homology_by_delta(c: &ChainComplex) -> GradedRanks<i32> {
    debug_assert!(c.squares_to_zero());
    homology_by(c, |g| g.grading.delta, |k| k - 2)
}

/// Homology ranks per `(q, h)` of a complex whose differential raises `h` by
/// one and preserves `q`.
pub fn homology_bigraded(c: &ChainComplex) -> GradedRanks<(i32, i32)> {
    homology_by(c, |g| (g.grading.q, g.grading.h), |(q, h)| (q, h + 1))
}

/// Total rank of a graded rank table.
pub fn total<K>(r: &GradedRanks<K>) -> usize {
    r.values().sum()
}

/// One page of the spectral sequence, ranks per `(h, delta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageTable {
    pub page: usize,
    pub ranks: GradedRanks<(i32, i32)>,
    /// Nothing changes on later pages.
    pub stabilized: bool,
}

impl PageTable {
    pub fn total(&self) -> usize {
        total(&self.ranks)
    }
}

/// A pairing of generators after reducing `d` with respect to the
/// filtration by `h`: `d` maps the column generator onto the row generator
/// modulo higher filtration, across `gap` filtration levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pair {
    pub source: usize,
    pub target: usize,
    pub gap: i32,
}

/// Reduces `d` column by column, latest filtration level first, so that
/// every pivot is the lowest-`h` entry of its column.
/// Generators must be sorted by `h` and `d` must raise `h`.
pub fn filtered_pairs(c: &ChainComplex) -> (Vec<Pair>, Vec<usize>) {
    let n = c.len();
    assert!(c.generators.windows(2).all(|w| w[0].grading.h <= w[1].grading.h), "generators not sorted by h");
    let groups = blocks(&c.generators, |g| g.grading.delta);
    let per_block: Vec<Vec<Pair>> = groups
        .par_iter()
        .map(|(_, cols)| {
            let mut owner: HashMap<u32, Vec<u32>> = HashMap::new();
            let mut pairs = Vec::new();
            for &j in cols.iter().rev() {
                let mut v = c.d.column(j).to_vec();
                while let Some(&p) = v.first() {
                    match owner.get(&p) {
                        Some(w) => v = xor_sorted(&v, w),
                        None => break,
                    }
                }
                if let Some(&p) = v.first() {
                    let gap = c.generators[p as usize].grading.h - c.generators[j].grading.h;
                    assert!(gap >= 1, "differential does not raise h");
                    pairs.push(Pair { source: j, target: p as usize, gap });
                    owner.insert(p, v);
                }
            }
            pairs
        })
        .collect();
    let mut pairs: Vec<Pair> = per_block.into_iter().flatten().collect();
    pairs.sort_by_key(|p| p.source);
    let mut paired = vec![false; n];
    for p in &pairs {
        paired[p.source] = true;
        paired[p.target] = true;
    }
    let free = (0..n).filter(|&i| !paired[i]).collect();
    (pairs, free)
}

/// Pages `E_1, ..., E_{last}` where `last` is one past the longest gap (and
/// at least 2), followed by nothing: every later page equals the last one.
pub fn spectral_pages(c: &ChainComplex, last_page: usize) -> Vec<PageTable> {
    let (pairs, free) = filtered_pairs(c);
    let key = |i: usize| (c.generators[i].grading.h, c.generators[i].grading.delta);
    let mut base: GradedRanks<(i32, i32)> = BTreeMap::new();
    for &i in &free {
        *base.entry(key(i)).or_default() += 1;
    }
    let longest = pairs.iter().map(|p| p.gap as usize).max().unwrap_or(0);
    let mut pages = Vec::new();
    for r in 1..=last_page.max(1) {
        let mut ranks = base.clone();
        for p in pairs.iter().filter(|p| p.gap as usize >= r) {
            *ranks.entry(key(p.source)).or_default() += 1;
            *ranks.entry(key(p.target)).or_default() += 1;
        }
        pages.push(PageTable { page: r, ranks, stabilized: r > longest });
    }
    pages
}

/// The same pages from rank identities on materialized subspaces, straight
/// from the definition
/// `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`
/// with `Z_r^p = F_p ∩ d^{-1}(F_{p+r})`. Dense and slow; meant as a check.
pub fn spectral_pages_by_ranks(c: &ChainComplex, last_page: usize) -> Vec<PageTable> {
    let hs: Vec<i32> = c.generators.iter().map(|g| g.grading.h).collect();
    let (lo, hi) = match (hs.iter().min(), hs.iter().max()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return (1..=last_page.max(1)).map(|r| PageTable { page: r, ranks: BTreeMap::new(), stabilized: true }).collect(),
    };
    let deltas: Vec<i32> = {
        let mut v: Vec<i32> = c.generators.iter().map(|g| g.grading.delta).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut pages = Vec::new();
    for r in 1..=last_page.max(1) as i32 {
        let mut ranks = BTreeMap::new();
        for p in lo..=hi {
            for &delta in &deltas {
                let dim = page_entry(c, r, p, delta);
                if dim > 0 {
                    ranks.insert((p, delta), dim);
                }
            }
        }
        pages.push(PageTable { page: r as usize, ranks, stabilized: false });
    }
    for i in 0..pages.len() {
        pages[i].stabilized = pages[i..].iter().all(|q| q.ranks == pages[i].ranks);
    }
    pages
}

/// Basis (as dense columns over the generators of delta `delta`) of
/// `Z_r^p = {x in F_p : dx in F_{p+r}}` restricted to one delta level.
fn z_space(c: &ChainComplex, r: i32, p: i32, delta: i32) -> (Vec<usize>, F2Matrix) {
    let dom: Vec<usize> = (0..c.len())
        .filter(|&i| c.generators[i].grading.delta == delta && c.generators[i].grading.h >= p)
        .collect();
    // rows of d landing below filtration p + r
    let low_rows: Vec<usize> = (0..c.len())
        .filter(|&i| c.generators[i].grading.delta == delta - 2 && c.generators[i].grading.h < p + r)
        .collect();
    let a = F2Matrix::from_sparse(&c.d.restrict(&low_rows, &dom));
    (dom.clone(), kernel(&a))
}

/// Kernel basis as columns.
fn kernel(a: &F2Matrix) -> F2Matrix {
    let n = a.cols();
    // row-reduce [A; I] by columns: eliminate on A's rows while tracking combinations
    let stacked = F2Matrix::vstack(a, &F2Matrix::identity(n));
    let mut cols: Vec<Vec<u64>> = (0..n).map(|j| stacked.column(j).to_vec()).collect();
    let rows_a = a.rows();
    let mut basis = Vec::new();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for j in 0..n {
        for &(p, k) in &pivots {
            if cols[j][p / 64] >> (p % 64) & 1 == 1 {
                let other = cols[k].clone();
                for (x, y) in cols[j].iter_mut().zip(&other) {
                    *x ^= y;
                }
            }
        }
        let p = (0..rows_a).find(|&r| cols[j][r / 64] >> (r % 64) & 1 == 1);
        match p {
            Some(p) => pivots.push((p, j)),
            None => basis.push(j),
        }
    }
    let mut k = F2Matrix::zeros(n, basis.len());
    for (t, &j) in basis.iter().enumerate() {
        for i in 0..n {
            let r = rows_a + i;
            if cols[j][r / 64] >> (r % 64) & 1 == 1 {
                k.set(i, t, true);
            }
        }
    }
    k
}

impl F2Matrix {
    fn vstack(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
        assert_eq!(a.cols, b.cols);
        let mut m = F2Matrix::zeros(a.rows + b.rows, a.cols);
        for c in 0..a.cols {
            for r in 0..a.rows {
                if a.get(r, c) {
                    m.set(r, c, true);
                }
            }
            for r in 0..b.rows {
                if b.get(r, c) {
                    m.set(a.rows + r, c, true);
                }
            }
        }
        m
    }
}

/// Vectors of `z` (columns over `dom`) re-expressed over `target`
/// (a superset of `dom`).
fn embed(z: &F2Matrix, dom: &[usize], target: &[usize]) -> F2Matrix {
    let pos: HashMap<usize, usize> = target.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut m = F2Matrix::zeros(target.len(), z.cols());
    for c in 0..z.cols() {
        for (i, &g) in dom.iter().enumerate() {
            if z.get(i, c) {
                m.set(pos[&g], c, true);
            }
        }
    }
    m
}

fn page_entry(c: &ChainComplex, r: i32, p: i32, delta: i32) -> usize {
    let (dom, z) = z_space(c, r, p, delta);
    let (dom1, z1) = z_space(c, r - 1, p + 1, delta);
    // d Z_{r-1}^{p-r+1} from delta + 2 into delta
    let (dom2, z2) = z_space(c, r - 1, p - r + 1, delta + 2);
    let target: Vec<usize> = (0..c.len()).filter(|&i| c.generators[i].grading.delta == delta).collect();
    let zr = embed(&z, &dom, &target);
    let zr1 = embed(&z1, &dom1, &target);
    let dsub = F2Matrix::from_sparse(&c.d.restrict(&target, &dom2));
    let mut dz = F2Matrix::zeros(target.len(), z2.cols());
    for col in 0..z2.cols() {
        for k in 0..dom2.len() {
            if z2.get(k, col) {
                for r in 0..target.len() {
                    if dsub.get(r, k) {
                        let v = dz.get(r, col);
                        dz.set(r, col, !v);
                    }
                }
            }
        }
    }
    let denom = zr1.hstack(&dz);
    // Z_{r-1}^{p+1} and d Z_{r-1}^{p-r+1} both lie in Z_r^p
    zr.hstack(&denom).rank() - denom.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn dense_rank() {
        assert_eq!(F2Matrix::zeros(4, 3).rank(), 0);
        assert_eq!(F2Matrix::identity(5).rank(), 5);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut m = F2Matrix::zeros(64, 64);
            for r in 0..64 {
                for c in 0..64 {
                    m.set(r, c, rng.gen_bool(0.05));
                }
            }
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let cols: Vec<Vec<u32>> = (0..40).map(|_| (0..30).filter(|_| rng.gen_bool(0.1)).collect()).collect();
            let s = SparseMapF2::from_columns(30, cols);
            assert_eq!(sparse_rank(&s), F2Matrix::from_sparse(&s).rank());
            assert_eq!(sparse_rank(&s), sparse_rank(&s.transpose()));
        }
    }

    #[test]
    fn kernel_dimension() {
        let s = SparseMapF2::from_columns(2, vec![vec![0], vec![0], vec![1], vec![]]);
        let k = kernel(&F2Matrix::from_sparse(&s));
        assert_eq!(k.cols(), 2);
    }
}

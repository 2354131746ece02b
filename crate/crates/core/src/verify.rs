//! Checks of the structural identities: `d² = 0`, the decoration-change
//! relation, the configuration rules on sampled faces, closure of the
//! reduced subcomplex and of the transverse element.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use rayon::prelude::*;

use crate::configuration::{Configuration, Relabel, Side};
use crate::cube::{gr, Decoration};
use crate::differential::{chain_complex, f_config_table, ChainComplex, Cube, Rules, Theory};
use crate::homology::{homology_by_delta, spectral_pages, GradedRanks, PageTable};
use crate::DiagramError;

pub fn d_squared_vanishes(cube: &Cube, t: &Decoration, rules: &Rules) -> bool {
    let d = cube.d(t, rules);
    d.compose(&d).is_zero()
}

/// Outcome of flipping the decoration at one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationReport {
    /// `d(t') = d(t) + H_m d(t) + d(t) H_m`.
    pub relation: bool,
    /// `G = id + H_m` satisfies `G d(t) = d(t') G` and `G G = id`.
    pub chain_iso: bool,
    /// Equal `delta` rank tables.
    pub ranks_equal: bool,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.relation && self.chain_iso && self.ranks_equal
    }
}

pub fn decoration_change(cube: &Cube, t: &Decoration, m: usize) -> RelationReport {
    let rules = Rules::standard();
    let t2 = t.flipped(m);
    let d1 = cube.d(t, &rules);
    let d2 = cube.d(&t2, &rules);
    let h = cube.h_m(t, m);
    let relation = d1.add(&h.compose(&d1)).add(&d1.compose(&h)) == d2;
    let g = cube.decoration_iso(t, &t2).expect("decorations differ at one crossing");
    let chain_iso = g.compose(&d1) == d2.compose(&g) && g.compose(&g) == crate::differential::SparseMapF2::identity(g.cols());
    let gens = cube.basis.generators.clone();
    let a = ChainComplex { generators: gens.clone(), d: d1 };
    let b = ChainComplex { generators: gens, d: d2 };
    RelationReport { relation, chain_iso, ranks_equal: homology_by_delta(&a) == homology_by_delta(&b) }
}

/// `d(t) z = 0` for the transverse element of a braid closure with its
/// braid decoration.
pub fn transverse_cycle_closed(cube: &Cube) -> Result<bool, DiagramError> {
    let t = crate::cube::braid_decoration(&cube.diagram)?;
    let z = cube.transverse_cycle()?;
    Ok(cube.d(&t, &Rules::standard()).column(z).is_empty())
}

/// The span of monomials divisible by the basepoint circle is closed under
/// `d(t)`.
pub fn reduced_closed(cube: &Cube, t: &Decoration) -> Result<bool, DiagramError> {
    let p = cube.diagram.basepoint().ok_or(DiagramError::NoBasepoint)?;
    let keep = cube.reduced_generators(p);
    let mut inside = vec![false; cube.basis.len()];
    for &g in &keep {
        inside[g] = true;
    }
    let d = cube.d(t, &Rules::standard());
    Ok(keep.iter().all(|&g| d.column(g).iter().all(|&r| inside[r as usize])))
}

/// Violation counts of the configuration rules over a set of faces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleReport {
    pub faces: usize,
    pub duality: usize,
    pub conjugation: usize,
    pub grading: usize,
    pub filtration: usize,
    pub extension: usize,
}

impl RuleReport {
    pub fn violations(&self) -> usize {
        self.duality + self.conjugation + self.grading + self.filtration + self.extension
    }

    pub fn merge(&mut self, o: &RuleReport) {
        self.faces += o.faces;
        self.duality += o.duality;
        self.conjugation += o.conjugation;
        self.grading += o.grading;
        self.filtration += o.filtration;
        self.extension += o.extension;
    }
}

/// Up to `limit` distinct faces of dimension `1..=max_dim`; all of them when
/// there are few enough, otherwise a uniform sample of cube cells.
pub fn sample_faces(n: usize, max_dim: usize, limit: usize, rng: &mut impl Rng) -> Vec<(u64, u64)> {
    let max_dim = max_dim.min(n);
    let binom = |n: usize, k: usize| (0..k).fold(1f64, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let count: f64 = (1..=max_dim).map(|k| binom(n, k) * 2f64.powi((n - k) as i32)).sum();
    if count <= limit as f64 {
        let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
        let mut out = Vec::new();
        for i in 0..=all {
            let free = all & !i;
            let mut s = free;
            while s != 0 {
                if (s.count_ones() as usize) <= max_dim {
                    out.push((i, i | s));
                }
                s = (s - 1) & free;
            }
        }
        return out;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while out.len() < limit {
        let (mut i, mut j) = (0u64, 0u64);
        for c in 0..n {
            match rng.gen_range(0..3) {
                0 => {}
                1 => {
                    i |= 1 << c;
                    j |= 1 << c;
                }
                _ => j |= 1 << c,
            }
        }
        let k = (i ^ j).count_ones() as usize;
        if k >= 1 && k <= max_dim && seen.insert((i, j)) {
            out.push((i, j));
        }
    }
    out
}

fn map_mask(mask: u64, map: &[usize]) -> u64 {
    map.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).fold(0, |m, (_, &j)| m | 1 << j)
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Circle map of a relabeling on one side, passive circles included (they
/// follow the active ones and are fixed).
fn full_images(c: &Configuration, relabel: Relabel, side: Side) -> Vec<usize> {
    let (active, _) = c.active_part();
    let (_, mut map) = active.circle_images(relabel, side);
    let s = map.len();
    map.extend(s..s + c.passive());
    map
}

fn coefficients(table: &[Vec<u64>]) -> BTreeSet<(u64, u64)> {
    table.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a as u64, b))).collect()
}

/// Coefficient of `F_C(a)` at `b` equals that of `F_{m(C*)}(b*)` at `a*`.
pub fn duality_holds(c: &Configuration, rules: &Rules) -> bool {
    let dual = c.dual();
    let md = dual.mirror();
    let s = c.start_circles().len() + c.passive();
    let e = c.end_circles().len() + c.passive();
    // circles of C as circles of m(C*): starts become ends and ends starts
    let d_start = full_images(c, Relabel::Dual, Side::Start);
    let d_end = full_images(c, Relabel::Dual, Side::End);
    let m_start = full_images(&dual, Relabel::Mirror, Side::Start);
    let m_end = full_images(&dual, Relabel::Mirror, Side::End);
    let start_to_md: Vec<usize> = d_start.iter().map(|&x| m_end[x]).collect();
    let end_to_md: Vec<usize> = d_end.iter().map(|&x| m_start[x]).collect();
    let back = invert(&start_to_md);
    let ours = coefficients(&f_config_table(c, rules));
    let theirs_table = f_config_table(&md, rules);
    let full = |n: usize| (1u64 << n) - 1;
    let mut theirs = BTreeSet::new();
    for b in 0..1u64 << e {
        let b_star = map_mask(full(e) & !b, &end_to_md);
        for &u in &theirs_table[b_star as usize] {
            let a = full(s) & !map_mask(u, &back);
            theirs.insert((a, b));
        }
    }
    ours == theirs
}

/// `F_C = F_{r(C)}` under the natural identification of circles.
pub fn conjugation_holds(c: &Configuration, rules: &Rules) -> bool {
    let r = c.reverse();
    let to_r = full_images(c, Relabel::Reverse, Side::Start);
    let end_back = invert(&full_images(c, Relabel::Reverse, Side::End));
    let ours = f_config_table(c, rules);
    let theirs = f_config_table(&r, rules);
    ours.iter().enumerate().all(|(a, bs)| {
        let mut mapped: Vec<u64> = theirs[map_mask(a as u64, &to_r) as usize].iter().map(|&u| map_mask(u, &end_back)).collect();
        mapped.sort_unstable();
        mapped == *bs
    })
}

/// Checks the rules on the given faces. Duality and conjugation are checked
/// on the face configurations; grading, filtration and extension on the
/// entries of the assembled `d_k` between the face's resolutions.
pub fn check_rules(cube: &Cube, t: &Decoration, rules: &Rules, faces: &[(u64, u64)]) -> RuleReport {
    let max_dim = faces.iter().map(|(i, j)| (i ^ j).count_ones() as usize).max().unwrap_or(0);
    let dk: Vec<_> = (1..=max_dim).map(|k| cube.d_k(t, k, rules)).collect();
    let d = &cube.diagram;
    faces
        .par_iter()
        .map(|&(i, j)| {
            let mut rep = RuleReport { faces: 1, ..Default::default() };
            let k = (i ^ j).count_ones() as usize;
            let f = cube.face(t, i, j);
            if !duality_holds(&f.config, rules) {
                rep.duality += 1;
            }
            if !conjugation_holds(&f.config, rules) {
                rep.conjugation += 1;
            }
            let (ri, rj) = (cube.table.get(i), cube.table.get(j));
            let m = &dk[k - 1];
            let mut ext_ok = true;
            let mut active_image: Vec<Option<BTreeSet<u64>>> = Vec::new();
            let passive_src: u64 = f.passive.iter().fold(0, |acc, &(x, _)| acc | 1 << x);
            let active_mask = ((1u64 << ri.len()) - 1) & !passive_src;
            active_image.resize(1 << ri.len(), None);
            for a in 0..1u64 << ri.len() {
                let col = cube.basis.index(i, a);
                let mut act = BTreeSet::new();
                for &row in m.column(col) {
                    let g = &cube.basis.generators[row as usize];
                    if g.resolution != j {
                        continue;
                    }
                    let b = g.monomial;
                    if gr(rj.len(), b) - gr(ri.len(), a) != k as i32 - 2 {
                        rep.grading += 1;
                    }
                    for e in 0..d.edge_count() {
                        if a >> ri.circle_of_edge(e) & 1 == 1 && b >> rj.circle_of_edge(e) & 1 == 0 {
                            rep.filtration += 1;
                            break;
                        }
                    }
                    if f.passive.iter().any(|&(x, y)| (a >> x & 1) != (b >> y & 1)) {
                        ext_ok = false;
                    }
                    let passive_dst: u64 = f.passive.iter().fold(0, |acc, &(_, y)| acc | 1 << y);
                    act.insert(b & !passive_dst);
                }
                // the active part of the image depends on the active part of a only
                let key = (a & active_mask) as usize;
                match &active_image[key] {
                    Some(prev) if *prev != act => ext_ok = false,
                    Some(_) => {}
                    None => active_image[key] = Some(act),
                }
            }
            if !ext_ok {
                rep.extension += 1;
            }
            rep
        })
        .reduce(RuleReport::default, |mut a, b| {
            a.merge(&b);
            a
        })
}

/// Comparison of two diagrams of the same link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub ranks: (GradedRanks<i32>, GradedRanks<i32>),
    /// Pages from `E_2` up to one past the larger crossing number.
    pub pages: (Vec<PageTable>, Vec<PageTable>),
}

impl InvarianceReport {
    pub fn ranks_equal(&self) -> bool {
        self.ranks.0 == self.ranks.1
    }

    pub fn pages_equal(&self) -> bool {
        let strip = |p: &[PageTable]| p.iter().map(|x| x.ranks.clone()).collect::<Vec<_>>();
        strip(&self.pages.0) == strip(&self.pages.1)
    }

    pub fn equal(&self) -> bool {
        self.ranks_equal() && self.pages_equal()
    }
}

/// Ranks and pages of `theory` for two decorated diagrams.
pub fn compare(
    a: (&Cube, &Decoration),
    b: (&Cube, &Decoration),
    theory: Theory,
) -> Result<InvarianceReport, DiagramError> {
    let last = a.0.n().max(b.0.n()) + 1;
    let one = |(cube, t): (&Cube, &Decoration)| -> Result<(GradedRanks<i32>, Vec<PageTable>), DiagramError> {
        let c = chain_complex(cube, t, theory)?;
        let pages = spectral_pages(&c, last.max(2)).into_iter().filter(|p| p.page >= 2).collect();
        Ok((homology_by_delta(&c), pages))
    };
    let (ra, pa) = one(a)?;
    let (rb, pb) = one(b)?;
    Ok(InvarianceReport { ranks: (ra, rb), pages: (pa, pb) })
}

/// `d² = 0` on a complex of any theory.
pub fn theory_squares_to_zero(cube: &Cube, t: &Decoration, theory: Theory) -> Result<bool, DiagramError> {
    Ok(chain_complex(cube, t, theory)?.squares_to_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_braid;
    use rand::SeedableRng;

    #[test]
    fn trefoil_passes() {
        let d = parse_braid("2: 1 1 1").unwrap().with_default_basepoint();
        let cube = Cube::new(&d);
        let t = Decoration::zeros(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let faces = sample_faces(3, 3, 1000, &mut rng);
        assert_eq!(faces.len(), 27 - 8);
        let rep = check_rules(&cube, &t, &Rules::standard(), &faces);
        assert_eq!(rep.violations(), 0, "{rep:?}");
        assert!(decoration_change(&cube, &t, 1).ok());
        assert!(transverse_cycle_closed(&cube).unwrap());
        assert!(reduced_closed(&cube, &t).unwrap());
    }

    #[test]
    fn sampling_is_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let faces = sample_faces(10, 5, 500, &mut rng);
        assert_eq!(faces.len(), 500);
        assert!(faces.iter().all(|&(i, j)| i & !j == 0 && (1..=5).contains(&(i ^ j).count_ones())));
    }
}

//! The cube of resolutions: resolved circles, gradings of generators,
//! faces, decorations and the configuration attached to a decorated face.

use rand::Rng;

use crate::configuration::{Configuration, Side};
use crate::diagram::{BraidArc, LinkDiagram, Port};
use crate::DiagramError;

/// A closed curve of a resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    /// Smallest PD label traversed.
    pub id: u32,
    /// Dense edge indices in traversal order.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub bits: u64,
    /// Sorted by `id`.
    pub circles: Vec<Circle>,
    edge_circle: Vec<u8>,
}

impl Resolution {
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    /// Index of the circle through a dense edge.
    pub fn circle_of_edge(&self, e: usize) -> usize {
        self.edge_circle[e] as usize
    }
}

/// Traces the circles of the resolution `bits` (bit `i` = smoothing at
/// crossing `i`).
pub fn resolve(d: &LinkDiagram, bits: u64) -> Resolution {
    let m = d.edge_count();
    let mut edge_circle = vec![u8::MAX; m];
    let mut circles: Vec<Circle> = Vec::new();
    for e in d.loop_edges() {
        edge_circle[e] = 0;
        circles.push(Circle { id: d.edge_label(e), edges: vec![e] });
    }
    for c in 0..d.len() {
        for s in 0..4 {
            let start = d.slot_edge(Port { crossing: c, slot: s });
            if edge_circle[start] != u8::MAX {
                continue;
            }
            let mut edges = Vec::new();
            // leave crossing c through slot s
            let mut out = Port { crossing: c, slot: s };
            loop {
                let e = d.slot_edge(out);
                edge_circle[e] = 0;
                edges.push(e);
                let inn = d.across(out);
                let bit = bits >> inn.crossing & 1 == 1;
                let partner = LinkDiagram::smoothing_pairs(bit)
                    .iter()
                    .find_map(|&(a, b)| {
                        if a == inn.slot {
                            Some(b)
                        } else if b == inn.slot {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .unwrap();
                out = Port { crossing: inn.crossing, slot: partner };
                if d.slot_edge(out) == start {
                    break;
                }
            }
            let id = edges.iter().map(|&e| d.edge_label(e)).min().unwrap();
            circles.push(Circle { id, edges });
        }
    }
    circles.sort_by_key(|c| c.id);
    assert!(circles.len() < 64, "too many circles");
    for (i, c) in circles.iter().enumerate() {
        for &e in &c.edges {
            edge_circle[e] = i as u8;
        }
    }
    Resolution { bits, circles, edge_circle }
}

/// All `2^n` resolutions, traced once.
#[derive(Clone, Debug)]
pub struct ResolutionTable {
    pub resolutions: Vec<Resolution>,
}

impl ResolutionTable {
    pub fn new(d: &LinkDiagram) -> Self {
        use rayon::prelude::*;
        let n = d.len();
        let resolutions = (0..1u64 << n).into_par_iter().map(|bits| resolve(d, bits)).collect();
        ResolutionTable { resolutions }
    }

    pub fn get(&self, bits: u64) -> &Resolution {
        &self.resolutions[bits as usize]
    }
}

/// Faces `(I, J)` with `I < J` differing in exactly `k` coordinates, in
/// order of `I` then `J`.
pub fn faces(n: usize, k: usize) -> impl Iterator<Item = (u64, u64)> {
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..=all).flat_map(move |i| {
        let free = all & !i;
        submasks_of_size(free, k).map(move |s| (i, i | s))
    })
}

/// Submasks of `mask` with exactly `k` bits, in increasing order.
pub fn submasks_of_size(mask: u64, k: usize) -> impl Iterator<Item = u64> {
    let bits: Vec<u32> = (0..64).filter(|&b| mask >> b & 1 == 1).collect();
    let m = bits.len();
    let mut idx: Option<Vec<usize>> = if k <= m && k > 0 { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let out = cur.iter().fold(0u64, |acc, &j| acc | 1 << bits[j]);
        // advance the combination
        let mut i = k;
        loop {
            if i == 0 {
                idx = None;
                break;
            }
            i -= 1;
            if cur[i] < m - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// One orientation bit per crossing for the arc joining the two strands of
/// its 0-smoothing. Bit `false` points from the strand through the first PD
/// edge towards the other strand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decoration {
    bits: Vec<bool>,
}

impl Decoration {
    pub fn new(bits: Vec<bool>) -> Self {
        Decoration { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Decoration { bits: vec![false; n] }
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Decoration { bits: (0..n).map(|_| rng.gen()).collect() }
    }

    /// Parses a string of `0`/`1` of length `n`.
    pub fn parse(text: &str, n: usize) -> Result<Self, DiagramError> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(DiagramError::BadDecoration(text.into())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if bits.len() != n {
            return Err(DiagramError::BadDecoration(format!("expected {n} bits, got `{text}`")));
        }
        Ok(Decoration { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn flipped(&self, m: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[m] = !bits[m];
        Decoration { bits }
    }

    /// Crossings where the two decorations differ.
    pub fn difference(&self, other: &Decoration) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i] != other.bits[i]).collect()
    }
}

impl std::fmt::Display for Decoration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Decoration of a braid closure with the strands drawn upward: vertical arcs
/// point up, horizontal arcs point right.
pub fn braid_decoration(d: &LinkDiagram) -> Result<Decoration, DiagramError> {
    let arcs = d.braid_arcs().ok_or(DiagramError::NotBraid)?;
    // positive crossings are stored as X(SE,NE,NW,SW): the first strand is
    // the right one; negative ones as X(SW,SE,NE,NW): the first is the cup
    Ok(Decoration { bits: arcs.iter().map(|a| matches!(a, BraidArc::Horizontal)).collect() })
}

/// Gradings of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gradings {
    pub h: i32,
    pub q: i32,
    pub delta: i32,
}

/// `gr` of a monomial: +1 per circle not in the monomial, -1 per circle in it.
pub fn gr(circles: usize, monomial: u64) -> i32 {
    circles as i32 - 2 * monomial.count_ones() as i32
}

pub fn gradings(weight: usize, circles: usize, monomial: u64, n_plus: usize, n_minus: usize) -> Gradings {
    let w = weight as i32;
    let h = w - n_minus as i32;
    let q = gr(circles, monomial) + w + n_plus as i32 - 2 * n_minus as i32;
    Gradings { h, q, delta: q - 2 * h }
}

/// A basis element of the cube complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub resolution: u64,
    /// Bit `i` set when the variable of circle `i` divides the monomial.
    pub monomial: u64,
    pub grading: Gradings,
}

/// A decorated face together with the identification of its circles with
/// circles of the two resolutions.
#[derive(Clone, Debug)]
pub struct FaceConfiguration {
    pub config: Configuration,
    /// Active crossings, one per arc, ascending.
    pub crossings: Vec<usize>,
    /// Circle of `I` for each starting circle of `config`.
    pub start_to_source: Vec<usize>,
    /// Circle of `J` for each ending circle of `config`.
    pub end_to_target: Vec<usize>,
    /// Passive circles as `(index in I, index in J)`.
    pub passive: Vec<(usize, usize)>,
}

/// The configuration `C(I, J, t)`: circles of `I` and one oriented arc per
/// coordinate where `I` and `J` differ.
pub fn build_configuration(
    d: &LinkDiagram,
    table: &ResolutionTable,
    t: &Decoration,
    i: u64,
    j: u64,
) -> FaceConfiguration {
    assert!(i & !j == 0 && i != j, "not a face");
    let active: Vec<usize> = (0..d.len()).filter(|&c| (i ^ j) >> c & 1 == 1).collect();
    let mut site_of = vec![usize::MAX; d.len()];
    for (s, &c) in active.iter().enumerate() {
        site_of[c] = s;
    }
    // site slot -> PD slot: bit 0 keeps the PD order, bit 1 shifts it by two
    let pd_slot = |c: usize, q: usize| if t.bit(c) { (q + 2) % 4 } else { q };
    let site_slot = |c: usize, p: usize| if t.bit(c) { (p + 2) % 4 } else { p };
    let mut link = vec![0u32; 4 * active.len()];
    for (s, &c) in active.iter().enumerate() {
        for q in 0..4 {
            let mut p = d.across(Port { crossing: c, slot: pd_slot(c, q) });
            while site_of[p.crossing] == usize::MAX {
                let bit = i >> p.crossing & 1 == 1;
                let partner = LinkDiagram::smoothing_pairs(bit)
                    .iter()
                    .find_map(|&(a, b)| if a == p.slot { Some(b) } else if b == p.slot { Some(a) } else { None })
                    .unwrap();
                p = d.across(Port { crossing: p.crossing, slot: partner });
            }
            link[4 * s + q] = (4 * site_of[p.crossing] + site_slot(p.crossing, p.slot)) as u32;
        }
    }
    let src = table.get(i);
    let dst = table.get(j);
    let port_edge = |p: u32| {
        let c = active[(p / 4) as usize];
        d.slot_edge(Port { crossing: c, slot: pd_slot(c, (p % 4) as usize) })
    };
    let provisional = Configuration::from_parts(link.clone(), 0);
    let starts = provisional.circles(Side::Start);
    let ends = provisional.circles(Side::End);
    let start_to_source: Vec<usize> = starts.walks.iter().map(|w| src.circle_of_edge(port_edge(w[0]))).collect();
    let end_to_target: Vec<usize> = ends.walks.iter().map(|w| dst.circle_of_edge(port_edge(w[0]))).collect();
    let mut touched = vec![false; src.len()];
    for &x in &start_to_source {
        touched[x] = true;
    }
    let passive: Vec<(usize, usize)> = (0..src.len())
        .filter(|&x| !touched[x])
        .map(|x| (x, dst.circle_of_edge(src.circles[x].edges[0])))
        .collect();
    let config = Configuration::from_parts(link, passive.len());
    FaceConfiguration { config, crossings: active, start_to_source, end_to_target, passive }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_braid, parse_pd};

    const HOPF: &str = "X(1,4,2,3) X(3,2,4,1)";
    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn resolve_small() {
        let u = LinkDiagram::unknot();
        assert_eq!(resolve(&u, 0).len(), 1);
        let h = parse_pd(HOPF).unwrap();
        assert_eq!(resolve(&h, 0b00).len(), 2);
        assert_eq!(resolve(&h, 0b11).len(), 2);
        assert_eq!(resolve(&h, 0b01).len(), 1);
        assert_eq!(resolve(&h, 0b10).len(), 1);
        let t = parse_pd(TREFOIL).unwrap();
        // left-handed: the all-1 smoothing is the oriented one
        assert_eq!(resolve(&t, 0b111).len(), 2);
        assert_eq!(resolve(&t, 0b000).len(), 3);
        let rh = parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap();
        assert_eq!(resolve(&rh, 0b000).len(), 2);
        assert_eq!(resolve(&rh, 0b111).len(), 3);
    }

    #[test]
    fn circle_ids_are_minimal_labels() {
        let h = parse_pd(HOPF).unwrap();
        let r = resolve(&h, 0);
        for c in &r.circles {
            assert_eq!(c.id, c.edges.iter().map(|&e| h.edge_label(e)).min().unwrap());
        }
        assert!(r.circles.windows(2).all(|w| w[0].id < w[1].id));
    }

    #[test]
    fn face_counts() {
        assert_eq!(faces(2, 1).count(), 4);
        assert_eq!(faces(2, 2).count(), 1);
        assert_eq!((1..=3).map(|k| faces(3, k).count()).sum::<usize>(), 27 - 8);
        for n in 0..7usize {
            let total: usize = (1..=n).map(|k| faces(n, k).count()).sum();
            assert_eq!(total, 3usize.pow(n as u32) - 2usize.pow(n as u32));
        }
        assert!(faces(3, 1).all(|(i, j)| i & !j == 0 && (i ^ j).count_ones() == 1));
    }

    #[test]
    fn edges_change_circle_count_by_one() {
        let d = parse_braid("3: 1 -2 1 -2 2").unwrap();
        let table = ResolutionTable::new(&d);
        for (i, j) in faces(d.len(), 1) {
            let a = table.get(i).len() as i64;
            let b = table.get(j).len() as i64;
            assert_eq!((a - b).abs(), 1);
        }
    }

    #[test]
    fn hopf_configurations() {
        let h = parse_pd(HOPF).unwrap();
        let table = ResolutionTable::new(&h);
        let t = Decoration::zeros(2);
        let f = build_configuration(&h, &table, &t, 0b00, 0b01);
        assert_eq!(f.config.dimension(), 1);
        assert_eq!(f.config.start_circles().len(), 2);
        assert_eq!(f.config.end_circles().len(), 1);
        let f = build_configuration(&h, &table, &t, 0b00, 0b11);
        assert_eq!(f.config.dimension(), 2);
        assert_eq!(f.config.start_circles().len(), 2);
        assert_eq!(f.config.end_circles().len(), 2);
        assert!(f.passive.is_empty());
    }

    #[test]
    #[should_panic(expected = "not a face")]
    fn empty_face_rejected() {
        let h = parse_pd(HOPF).unwrap();
        let table = ResolutionTable::new(&h);
        build_configuration(&h, &table, &Decoration::zeros(2), 0b01, 0b01);
    }

    #[test]
    fn gradings_identity() {
        let g = gradings(2, 3, 0b101, 3, 1);
        assert_eq!(g.h, 1);
        assert_eq!(g.q, -1 + 2 + 3 - 2);
        assert_eq!(g.delta, g.q - 2 * g.h);
    }

    #[test]
    fn braid_decorations() {
        let d = parse_braid("2: 1").unwrap();
        assert_eq!(braid_decoration(&d).unwrap().bits(), &[true]);
        let d = parse_braid("2: -1").unwrap();
        assert_eq!(braid_decoration(&d).unwrap().bits(), &[false]);
        assert!(braid_decoration(&parse_braid("1:").unwrap()).unwrap().is_empty());
        let t35 = parse_braid("3: 1 2 1 2 1 2 1 2 1 2").unwrap();
        let a = braid_decoration(&t35).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a, braid_decoration(&parse_braid("3: 1 2 1 2 1 2 1 2 1 2").unwrap()).unwrap());
        assert!(braid_decoration(&parse_pd(HOPF).unwrap()).is_err());
    }

    #[test]
    fn decoration_parsing() {
        assert_eq!(Decoration::parse("101", 3).unwrap().bits(), &[true, false, true]);
        assert!(Decoration::parse("10", 3).is_err());
        assert!(Decoration::parse("1a1", 3).is_err());
    }
}

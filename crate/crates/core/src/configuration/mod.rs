//! Configurations: disjoint circles on the sphere together with disjoint
//! oriented arcs whose endpoints lie on the circles.
//!
//! Every arc is stored as a *site* with four ports, numbered
//! counterclockwise. Ports `0,1` form the strand carrying the tail of the
//! arc and ports `2,3` the strand carrying its head. Outside the sites the
//! ports are paired by `link`, so the starting circles are the cycles that
//! alternate between `link` and the pairing `{0,1},{2,3}`, and the ending
//! circles (after surgery along every arc) alternate between `link` and
//! `{1,2},{3,0}`.
//!
//! In this picture the dual configuration is a rotation of the port labels
//! by one step, the reverse is a rotation by two steps, and the mirror swaps
//! the ports inside each strand.

mod classify;
mod reference;

pub use classify::{classify, classify_two_dim, family_matches, ConfigClass, Classification, TypeTable};
pub use reference::{reference_configuration, two_dim_classes, REFERENCE_TYPES};

use std::fmt;

use crate::planar::PlanarMap;
use crate::ConfigError;

/// Which family of circles of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Start,
    End,
}

/// The three port relabelings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relabel {
    Dual,
    Reverse,
    Mirror,
}

impl Relabel {
    /// New slot of an old slot.
    pub fn slot_map(self) -> fn(u32) -> u32 {
        match self {
            Relabel::Dual => |s| (s + 3) % 4,
            Relabel::Reverse => |s| (s + 2) % 4,
            Relabel::Mirror => |s| s ^ 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    link: Vec<u32>,
    passive: usize,
}

/// Circles of one side, as port orbits.
#[derive(Clone, Debug)]
pub struct Circles {
    /// Circle index of every port.
    pub of_port: Vec<u8>,
    /// Ports of each circle in traversal order, starting at the smallest port.
    pub walks: Vec<Vec<u32>>,
}

impl Circles {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

#[inline]
fn site(p: u32) -> usize {
    (p / 4) as usize
}

#[inline]
fn slot(p: u32) -> u32 {
    p % 4
}

/// Partner of a port inside its site for the given family of circles.
#[inline]
pub(crate) fn strand_partner(p: u32, side: Side) -> u32 {
    let s = slot(p);
    let q = match side {
        Side::Start => s ^ 1,
        Side::End => {
            if s % 2 == 1 {
                (s + 1) % 4
            } else {
                (s + 3) % 4
            }
        }
    };
    p - s + q
}

impl Configuration {
    /// `link` pairs the `4k` ports; `passive` counts circles meeting no arc.
    pub fn new(link: Vec<u32>, passive: usize) -> Result<Self, ConfigError> {
        if !link.len().is_multiple_of(4) {
            return Err(ConfigError::PortCount(link.len()));
        }
        for (p, &q) in link.iter().enumerate() {
            if q as usize >= link.len() || q as usize == p || link[q as usize] as usize != p {
                return Err(ConfigError::NotAnInvolution(p));
            }
        }
        let c = Configuration { link, passive };
        c.planar_map()
            .check_sphere()
            .map_err(|(faces, expected)| ConfigError::NotPlanar { faces, expected })?;
        Ok(c)
    }

    pub(crate) fn from_parts(link: Vec<u32>, passive: usize) -> Self {
        debug_assert!(Configuration::new(link.clone(), passive).is_ok());
        Configuration { link, passive }
    }

    /// Number of arcs `k`.
    pub fn dimension(&self) -> usize {
        self.link.len() / 4
    }

    pub fn passive(&self) -> usize {
        self.passive
    }

    pub fn link(&self, p: u32) -> u32 {
        self.link[p as usize]
    }

    pub fn links(&self) -> &[u32] {
        &self.link
    }

    pub fn circles(&self, side: Side) -> Circles {
        let n = self.link.len();
        let mut of_port = vec![u8::MAX; n];
        let mut walks = Vec::new();
        for start in 0..n as u32 {
            if of_port[start as usize] != u8::MAX {
                continue;
            }
            let id = walks.len() as u8;
            let mut walk = Vec::new();
            let mut p = start;
            loop {
                let q = strand_partner(p, side);
                of_port[p as usize] = id;
                of_port[q as usize] = id;
                walk.push(p);
                walk.push(q);
                p = self.link[q as usize];
                if p == start {
                    break;
                }
            }
            walks.push(walk);
        }
        Circles { of_port, walks }
    }

    /// Active starting circles.
    pub fn start_circles(&self) -> Circles {
        self.circles(Side::Start)
    }

    /// Active ending circles.
    pub fn end_circles(&self) -> Circles {
        self.circles(Side::End)
    }

    /// `(tail, head)` circle indices of arc `i` among the given circles.
    pub fn arc_circles(&self, circles: &Circles, side: Side, i: usize) -> (usize, usize) {
        let base = 4 * i;
        match side {
            Side::Start => (circles.of_port[base] as usize, circles.of_port[base + 2] as usize),
            Side::End => (circles.of_port[base + 1] as usize, circles.of_port[base + 3] as usize),
        }
    }

    fn relabel(&self, to_new: impl Fn(u32) -> u32) -> Self {
        // port p = 4s + j moves to 4s + to_new(j)
        let n = self.link.len();
        let mut link = vec![0u32; n];
        for p in 0..n as u32 {
            let q = self.link[p as usize];
            let base = p - slot(p);
            let qbase = q - slot(q);
            link[(base + to_new(slot(p))) as usize] = qbase + to_new(slot(q));
        }
        Configuration { link, passive: self.passive }
    }

    /// Surgery along every arc; dual arcs are the arcs turned a quarter turn
    /// counterclockwise.
    pub fn dual(&self) -> Self {
        // new slot j is old slot j+1
        self.relabel(Relabel::Dual.slot_map())
    }

    /// All arcs reversed.
    pub fn reverse(&self) -> Self {
        self.relabel(Relabel::Reverse.slot_map())
    }

    /// Orientation of the sphere reversed.
    pub fn mirror(&self) -> Self {
        self.relabel(Relabel::Mirror.slot_map())
    }

    /// Image of every circle of `side` under [`Configuration::dual`],
    /// [`Configuration::reverse`] or [`Configuration::mirror`]: entry `i` is
    /// the index of circle `i` among the circles of `image` on the side
    /// returned alongside.
    pub fn circle_images(&self, relabel: Relabel, side: Side) -> (Side, Vec<usize>) {
        let image = self.relabeled(relabel);
        let image_side = match (relabel, side) {
            (Relabel::Dual, Side::Start) => Side::End,
            (Relabel::Dual, Side::End) => Side::Start,
            _ => side,
        };
        let ours = self.circles(side);
        let theirs = image.circles(image_side);
        let to_new = relabel.slot_map();
        let map = ours
            .walks
            .iter()
            .map(|w| {
                let p = w[0];
                theirs.of_port[(p - slot(p) + to_new(slot(p))) as usize] as usize
            })
            .collect();
        (image_side, map)
    }

    pub fn relabeled(&self, relabel: Relabel) -> Self {
        match relabel {
            Relabel::Dual => self.dual(),
            Relabel::Reverse => self.reverse(),
            Relabel::Mirror => self.mirror(),
        }
    }

    /// Arc `i` alone reversed.
    pub fn reverse_arc(&self, i: usize) -> Self {
        let n = self.link.len();
        let flip = |p: u32| if site(p) == i { p - slot(p) + (slot(p) + 2) % 4 } else { p };
        let mut link = vec![0u32; n];
        for p in 0..n as u32 {
            link[flip(p) as usize] = flip(self.link[p as usize]);
        }
        Configuration { link, passive: self.passive }
    }

    /// Drops the passive circles; returns the active part and how many were
    /// dropped.
    pub fn active_part(&self) -> (Self, usize) {
        (Configuration { link: self.link.clone(), passive: 0 }, self.passive)
    }

    /// Site index sets of the connected components of the active part.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let k = self.dimension();
        let mut comp = vec![usize::MAX; k];
        let mut out = Vec::new();
        for s in 0..k {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(x) = stack.pop() {
                members.push(x);
                for j in 0..4 {
                    let y = site(self.link[4 * x + j]);
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The configuration formed by the same starting circles and only the
    /// arcs in `keep` (sorted site indices).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let k = self.dimension();
        let mut new_index = vec![usize::MAX; k];
        for (i, &s) in keep.iter().enumerate() {
            new_index[s] = i;
        }
        let mut link = vec![0u32; 4 * keep.len()];
        for (i, &s) in keep.iter().enumerate() {
            for j in 0..4u32 {
                let mut q = self.link[4 * s + j as usize];
                while new_index[site(q)] == usize::MAX {
                    q = self.link[strand_partner(q, Side::Start) as usize];
                }
                link[4 * i + j as usize] = 4 * new_index[site(q)] as u32 + slot(q);
            }
        }
        // starting circles that miss every kept arc become passive
        let starts = self.start_circles();
        let missed = starts
            .walks
            .iter()
            .filter(|w| w.iter().all(|&p| new_index[site(p)] == usize::MAX))
            .count();
        Configuration { link, passive: self.passive + missed }
    }

    /// Arcs attached to a circle, and for each its side relative to the
    /// circle's traversal direction (`true` = left).
    pub fn sides_along(&self, circles: &Circles, circle: usize) -> Vec<(usize, bool)> {
        let walk = &circles.walks[circle];
        let mut out: Vec<(usize, bool)> = Vec::new();
        for pair in walk.chunks(2) {
            let (a, b) = (slot(pair[0]), slot(pair[1]));
            let left = matches!((a, b), (0, 1) | (2, 3));
            let s = site(pair[0]);
            if !out.iter().any(|&(t, _)| t == s) {
                out.push((s, left));
            }
        }
        out
    }

    /// Code identifying the configuration up to orientation preserving
    /// homeomorphisms of the sphere (and, optionally, reversal of all arcs).
    pub fn canonical_code(&self, up_to_reversal: bool) -> Vec<u32> {
        let mut parts: Vec<Vec<u32>> = Vec::new();
        for comp in self.components() {
            let sub = self.restrict(&comp);
            let mut code = sub.connected_code();
            if up_to_reversal {
                code = code.min(sub.reverse().connected_code());
            }
            parts.push(code);
        }
        parts.sort();
        let mut out = vec![self.passive as u32];
        for p in parts {
            out.push(u32::MAX);
            out.extend(p);
        }
        out
    }

    fn connected_code(&self) -> Vec<u32> {
        let k = self.dimension();
        let mut best: Option<Vec<u32>> = None;
        let mut order = Vec::with_capacity(k);
        let mut number = vec![u32::MAX; k];
        for root in 0..k {
            order.clear();
            number.iter_mut().for_each(|x| *x = u32::MAX);
            number[root] = 0;
            order.push(root);
            let mut i = 0;
            while i < order.len() {
                let s = order[i];
                for j in 0..4 {
                    let t = site(self.link[4 * s + j]);
                    if number[t] == u32::MAX {
                        number[t] = order.len() as u32;
                        order.push(t);
                    }
                }
                i += 1;
            }
            let code: Vec<u32> = order
                .iter()
                .flat_map(|&s| (0..4).map(move |j| (s, j)))
                .map(|(s, j)| {
                    let q = self.link[4 * s + j];
                    4 * number[site(q)] + slot(q)
                })
                .collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    /// Embedded graph of circles and arcs. Each arc contributes two trivalent
    /// vertices (its endpoints); passive circles are isolated loops.
    pub fn planar_map(&self) -> PlanarMap {
        let k = self.dimension();
        // per site: darts 6s + {0: toward port0, 1: toward port1, 2: tail arc,
        //                       3: toward port2, 4: toward port3, 5: head arc}
        let dart_of_port = |p: u32| -> usize {
            let s = site(p);
            6 * s + [0, 1, 3, 4][slot(p) as usize]
        };
        let total = 6 * k + 2 * self.passive;
        let mut sigma = vec![0; total];
        let mut alpha = vec![0; total];
        for s in 0..k {
            let b = 6 * s;
            // tail endpoint, counterclockwise: port1 side, arc, port0 side
            sigma[b + 1] = b + 2;
            sigma[b + 2] = b;
            sigma[b] = b + 1;
            // head endpoint: port2 side, port3 side, arc
            sigma[b + 3] = b + 4;
            sigma[b + 4] = b + 5;
            sigma[b + 5] = b + 3;
            alpha[b + 2] = b + 5;
            alpha[b + 5] = b + 2;
            for j in 0..4u32 {
                let p = 4 * s as u32 + j;
                alpha[dart_of_port(p)] = dart_of_port(self.link[p as usize]);
            }
        }
        for i in 0..self.passive {
            let d = 6 * k + 2 * i;
            sigma[d] = d + 1;
            sigma[d + 1] = d;
            alpha[d] = d + 1;
            alpha[d + 1] = d;
        }
        PlanarMap::new(sigma, alpha)
    }

    /// Text form: the port pairing, then starting circles as cyclic words of
    /// arc endpoints, then faces of the embedded graph.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let pairs: Vec<String> = (0..self.link.len() as u32)
            .filter(|&p| p < self.link[p as usize])
            .map(|p| format!("{}.{}-{}.{}", site(p), slot(p), site(self.link[p as usize]), slot(self.link[p as usize])))
            .collect();
        out.push_str(&format!("links {}\n", pairs.join(" ")));
        out.push_str(&format!("passive {}\n", self.passive));
        let word = |walk: &Vec<u32>| -> String {
            walk.chunks(2)
                .map(|c| {
                    let end = if slot(c[0]) < 2 { 't' } else { 'h' };
                    format!("{}{}", site(c[0]), end)
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        for w in &self.start_circles().walks {
            out.push_str(&format!("start ({})\n", word(w)));
        }
        for w in &self.end_circles().walks {
            out.push_str(&format!("end ({})\n", word(w)));
        }
        let map = self.planar_map();
        for f in map.faces() {
            out.push_str(&format!("face {:?}\n", f));
        }
        out
    }

    /// Parses the `links` line format of [`Configuration::to_text`].
    pub fn from_links_text(text: &str, passive: usize) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        for tok in text.split_whitespace() {
            let (a, b) = tok.split_once('-').ok_or_else(|| ConfigError::Syntax(tok.into()))?;
            let parse = |x: &str| -> Result<u32, ConfigError> {
                let (s, j) = x.split_once('.').ok_or_else(|| ConfigError::Syntax(tok.into()))?;
                let s: u32 = s.parse().map_err(|_| ConfigError::Syntax(tok.into()))?;
                let j: u32 = j.parse().map_err(|_| ConfigError::Syntax(tok.into()))?;
                if j > 3 {
                    return Err(ConfigError::Syntax(tok.into()));
                }
                Ok(4 * s + j)
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        let n = 2 * pairs.len();
        let mut link = vec![u32::MAX; n];
        for (a, b) in pairs {
            if a as usize >= n || b as usize >= n {
                return Err(ConfigError::PortCount(n));
            }
            link[a as usize] = b;
            link[b as usize] = a;
        }
        if link.contains(&u32::MAX) {
            return Err(ConfigError::PortCount(n));
        }
        Configuration::new(link, passive)
    }
}

/// Isomorphism of embedded configurations, optionally allowing reversal of
/// all arcs.
pub fn isomorphic(a: &Configuration, b: &Configuration, up_to_reversal: bool) -> bool {
    a.dimension() == b.dimension() && a.canonical_code(up_to_reversal) == b.canonical_code(up_to_reversal)
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..self.link.len() as u32)
            .filter(|&p| p < self.link[p as usize])
            .map(|p| format!("{}.{}-{}.{}", site(p), slot(p), site(self.link[p as usize]), slot(self.link[p as usize])))
            .collect();
        write!(f, "Configuration[{}; passive {}]", pairs.join(" "), self.passive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(links: &str) -> Configuration {
        Configuration::from_links_text(links, 0).unwrap()
    }

    #[test]
    fn single_arcs() {
        // split: both strands on one circle
        let split = cfg("0.1-0.2 0.3-0.0");
        assert_eq!(split.start_circles().len(), 1);
        assert_eq!(split.end_circles().len(), 2);
        // join: each strand closes on itself
        let join = cfg("0.0-0.1 0.2-0.3");
        assert_eq!(join.start_circles().len(), 2);
        assert_eq!(join.end_circles().len(), 1);
        assert!(isomorphic(&split.dual(), &join, false));
        assert!(!isomorphic(&split, &join, true));
    }

    #[test]
    fn involutions() {
        let c = cfg("0.0-1.1 0.1-1.0 0.2-1.3 0.3-1.2");
        assert_eq!(c.reverse().reverse(), c);
        assert_eq!(c.mirror().mirror(), c);
        assert_eq!(c.dual().dual(), c.reverse());
        assert_eq!(c.dual().start_circles().len(), c.end_circles().len());
    }

    #[test]
    fn active_part_and_restrict() {
        let c = Configuration::from_links_text("0.0-0.1 0.2-0.3", 1).unwrap();
        let (a, passive) = c.active_part();
        assert_eq!(passive, 1);
        assert_eq!(a.passive(), 0);
        assert_eq!(a.start_circles().len(), 2);
        let empty = c.restrict(&[]);
        assert_eq!(empty.dimension(), 0);
        assert_eq!(empty.passive(), 3);
    }

    #[test]
    fn rejects_bad_links() {
        assert!(Configuration::new(vec![1, 0, 3], 0).is_err());
        assert!(Configuration::new(vec![1, 1, 3, 2], 0).is_err());
        assert!(Configuration::new(vec![2, 3, 0, 1], 0).is_err(), "interleaved self-loops are not planar");
    }
}

//! Link diagrams: PD codes, braid closures and the planar structure of the
//! underlying 4-valent graph.
//!
//! Crossings list their four edges counterclockwise, starting at the
//! incoming under-strand. The 0-smoothing of `X(a,b,c,d)` joins `a`-`b` and
//! `c`-`d`; the 1-smoothing joins `a`-`d` and `b`-`c`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::planar::PlanarMap;
use crate::DiagramError;

/// Crossing sign, derived from the orientation of the two strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

/// A position on a crossing: `(crossing index, slot 0..4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub crossing: usize,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// 1-based position in the diagram.
    pub id: usize,
    /// PD labels, counterclockwise from the incoming under-strand.
    pub edges: [u32; 4],
    pub sign: Sign,
}

/// Shape of the 0-smoothing arc of a braid crossing drawn with upward strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidArc {
    /// Oriented smoothing: the arc joins two vertical strands.
    Horizontal,
    /// Cup/cap smoothing: the arc joins a cup to a cap.
    Vertical,
}

#[derive(Clone, Debug)]
pub(crate) struct Edge {
    pub label: u32,
    /// `None` for a crossingless loop.
    pub ends: Option<[Port; 2]>,
}

#[derive(Clone, Debug)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    edges: Vec<Edge>,
    /// `slots[c][s]` = dense edge index at that position.
    slots: Vec<[usize; 4]>,
    /// For each edge, the port where it ends (enters a crossing).
    heads: Vec<Option<Port>>,
    components: Vec<Vec<usize>>,
    distinguished_component: Option<usize>,
    basepoint: Option<usize>,
    braid: Option<Vec<BraidArc>>,
    strands: Option<usize>,
}

impl LinkDiagram {
    /// The crossingless unknot, a single loop labelled 1.
    pub fn unknot() -> Self {
        Self::build(Vec::new(), &[1]).expect("unknot is valid")
    }

    /// Builds a diagram from PD quadruples.
    pub fn from_pd(quads: &[[u32; 4]]) -> Result<Self, DiagramError> {
        if quads.is_empty() {
            return Err(DiagramError::Empty);
        }
        Self::build(quads.to_vec(), &[])
    }

    fn build(quads: Vec<[u32; 4]>, loops: &[u32]) -> Result<Self, DiagramError> {
        let mut seen: BTreeMap<u32, Vec<Port>> = BTreeMap::new();
        for (c, q) in quads.iter().enumerate() {
            for (s, &label) in q.iter().enumerate() {
                if label == 0 {
                    return Err(DiagramError::MalformedToken(format!("edge label 0 in crossing {}", c + 1)));
                }
                seen.entry(label).or_default().push(Port { crossing: c, slot: s });
            }
        }
        for (&label, ports) in &seen {
            if ports.len() != 2 {
                return Err(DiagramError::EdgeMultiplicity { label, count: ports.len() });
            }
        }
        let mut edges = Vec::new();
        let mut index = BTreeMap::new();
        for (&label, ports) in &seen {
            index.insert(label, edges.len());
            edges.push(Edge { label, ends: Some([ports[0], ports[1]]) });
        }
        for &label in loops {
            if index.contains_key(&label) {
                return Err(DiagramError::EdgeMultiplicity { label, count: 3 });
            }
            index.insert(label, edges.len());
            edges.push(Edge { label, ends: None });
        }
        let slots: Vec<[usize; 4]> = quads.iter().map(|q| q.map(|l| index[&l])).collect();

        let mut d = LinkDiagram {
            crossings: Vec::new(),
            edges,
            slots,
            heads: Vec::new(),
            components: Vec::new(),
            distinguished_component: None,
            basepoint: None,
            braid: None,
            strands: None,
        };
        let map = d.planar_map();
        map.check_sphere().map_err(|(faces, expected)| DiagramError::NonPlanar { faces, expected })?;
        d.heads = orient(&d.edges, &d.slots);
        d.check_orientation()?;
        d.crossings = quads
            .iter()
            .enumerate()
            .map(|(c, q)| Crossing { id: c + 1, edges: *q, sign: d.compute_sign(c) })
            .collect();
        d.components = d.trace_components();
        if map.components() > 1 {
            log::warn!("split diagram with {} pieces; pieces are treated as disjoint", map.components());
        }
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Number of crossings `n`.
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_label(&self, e: usize) -> u32 {
        self.edges[e].label
    }

    pub fn edge_index(&self, label: u32) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Dense edge index sitting at a crossing slot.
    pub fn slot_edge(&self, p: Port) -> usize {
        self.slots[p.crossing][p.slot]
    }

    /// The other end of the edge leaving `p`.
    pub fn across(&self, p: Port) -> Port {
        let e = self.slot_edge(p);
        let [a, b] = self.edges[e].ends.expect("crossing edge");
        if a == p {
            b
        } else {
            a
        }
    }

    /// Dense edges of crossingless loops.
    pub fn loop_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(|(_, e)| e.ends.is_none()).map(|(i, _)| i)
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn distinguished_component(&self) -> Option<usize> {
        self.distinguished_component
    }

    /// Dense index of the basepoint edge, if set.
    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    /// Marks the edge with the given PD label as basepoint; its component
    /// becomes the distinguished one.
    pub fn set_basepoint(&mut self, label: u32) -> Result<(), DiagramError> {
        let e = self.edge_index(label).ok_or(DiagramError::UnknownBasepoint(label))?;
        self.basepoint = Some(e);
        self.distinguished_component = self.components.iter().position(|c| c.contains(&e));
        Ok(())
    }

    /// Basepoint on the lowest-labelled edge of the first component.
    pub fn with_default_basepoint(mut self) -> Self {
        if self.basepoint.is_none() {
            let label = self.components[0].iter().map(|&e| self.edges[e].label).min().unwrap();
            self.set_basepoint(label).expect("label exists");
        }
        self
    }

    pub fn braid_arcs(&self) -> Option<&[BraidArc]> {
        self.braid.as_deref()
    }

    pub fn braid_strands(&self) -> Option<usize> {
        self.strands
    }

    /// `(n_plus, n_minus)`.
    pub fn signs(&self) -> (usize, usize) {
        let p = self.crossings.iter().filter(|c| c.sign == Sign::Positive).count();
        (p, self.crossings.len() - p)
    }

    pub fn writhe(&self) -> i64 {
        let (p, m) = self.signs();
        p as i64 - m as i64
    }

    fn compute_sign(&self, c: usize) -> Sign {
        // positive iff the over strand enters at slot 3 and leaves at slot 1
        let p3 = Port { crossing: c, slot: 3 };
        if self.heads[self.slots[c][3]] == Some(p3) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Every crossing needs the under strand running from slot 0 to slot 2
    /// and the over strand running between slots 1 and 3.
    fn check_orientation(&self) -> Result<(), DiagramError> {
        for (c, s) in self.slots.iter().enumerate() {
            let head = |k: usize| self.heads[s[k]] == Some(Port { crossing: c, slot: k });
            let ok = head(0) && !head(2) && (head(1) != head(3));
            if !ok {
                return Err(DiagramError::Inconsistent(c + 1));
            }
        }
        Ok(())
    }

    fn trace_components(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.edges.len()];
        let mut out = Vec::new();
        for start in 0..self.edges.len() {
            if done[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = start;
            loop {
                done[e] = true;
                comp.push(e);
                let Some(h) = self.heads[e] else { break };
                let next = self.slots[h.crossing][outgoing_slot(h.slot)];
                if next == start {
                    break;
                }
                e = next;
            }
            out.push(comp);
        }
        out
    }

    /// Rotation system of the diagram viewed on the sphere.
    pub fn planar_map(&self) -> PlanarMap {
        let n = self.slots.len();
        let loops: Vec<usize> = self.loop_edges().collect();
        let darts = 4 * n + 2 * loops.len();
        let mut sigma = vec![0; darts];
        let mut alpha = vec![0; darts];
        for c in 0..n {
            for s in 0..4 {
                let d = 4 * c + s;
                sigma[d] = 4 * c + (s + 1) % 4;
                let o = self.across(Port { crossing: c, slot: s });
                alpha[d] = 4 * o.crossing + o.slot;
            }
        }
        for i in 0..loops.len() {
            let d = 4 * n + 2 * i;
            sigma[d] = d + 1;
            sigma[d + 1] = d;
            alpha[d] = d + 1;
            alpha[d + 1] = d;
        }
        PlanarMap::new(sigma, alpha)
    }

    /// PD text, `X(a,b,c,d)` terms separated by single spaces.
    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c.edges[0], c.edges[1], c.edges[2], c.edges[3]))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Closure of a braid on `strands` strands; generator `±i` crosses
    /// positions `i` and `i+1`, positive when the strand from the lower left
    /// passes over.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<Self, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::BadBraid("strand count must be positive".into()));
        }
        for &g in word {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(DiagramError::GeneratorOutOfRange { generator: g, strands });
            }
        }
        let mut next = strands as u32 + 1;
        let mut current: Vec<u32> = (1..=strands as u32).collect();
        let mut quads = Vec::with_capacity(word.len());
        let mut arcs = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize - 1;
            let (sw, se) = (current[i], current[i + 1]);
            let (nw, ne) = (next, next + 1);
            next += 2;
            if g > 0 {
                quads.push([se, ne, nw, sw]);
                arcs.push(BraidArc::Horizontal);
            } else {
                quads.push([sw, se, ne, nw]);
                arcs.push(BraidArc::Vertical);
            }
            current[i] = nw;
            current[i + 1] = ne;
        }
        // close up: top of position j is glued to bottom label j+1
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let p = *parent.get(&x).unwrap_or(&x);
            if p == x {
                x
            } else {
                let r = find(parent, p);
                parent.insert(x, r);
                r
            }
        }
        for (j, &top) in current.iter().enumerate() {
            let a = find(&mut parent, top);
            let b = find(&mut parent, j as u32 + 1);
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
        // relabel in order of first appearance
        let mut relabel: BTreeMap<u32, u32> = BTreeMap::new();
        let mut fresh = 1;
        let mut quads2 = Vec::with_capacity(quads.len());
        for q in &quads {
            let mut out = [0u32; 4];
            for (s, &l) in q.iter().enumerate() {
                let r = find(&mut parent, l);
                let v = *relabel.entry(r).or_insert_with(|| {
                    fresh += 1;
                    fresh - 1
                });
                out[s] = v;
            }
            quads2.push(out);
        }
        let mut loops = BTreeSet::new();
        for j in 1..=strands as u32 {
            let r = find(&mut parent, j);
            if !relabel.contains_key(&r) {
                loops.insert(r);
            }
        }
        let loop_labels: Vec<u32> = loops
            .iter()
            .map(|_| {
                fresh += 1;
                fresh - 1
            })
            .collect();
        let mut d = Self::build(quads2, &loop_labels)?;
        d.braid = Some(arcs);
        d.strands = Some(strands);
        Ok(d)
    }

    /// Slot pairs joined by the given smoothing at a crossing.
    pub fn smoothing_pairs(bit: bool) -> [(usize, usize); 2] {
        if bit {
            [(0, 3), (1, 2)]
        } else {
            [(0, 1), (2, 3)]
        }
    }

    /// Bits of the oriented resolution (0 at positive, 1 at negative crossings).
    pub fn oriented_resolution(&self) -> u64 {
        self.crossings
            .iter()
            .enumerate()
            .filter(|(_, c)| c.sign == Sign::Negative)
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    }
}

/// Slot where the strand entering at `slot` leaves the crossing.
fn outgoing_slot(slot: usize) -> usize {
    (slot + 2) % 4
}

/// Orients every edge by propagation along strands; returns the head port of
/// each edge.
fn orient(edges: &[Edge], slots: &[[usize; 4]]) -> Vec<Option<Port>> {
    let mut head: Vec<Option<Port>> = vec![None; edges.len()];
    let mut tail: Vec<Option<Port>> = vec![None; edges.len()];
    for (c, s) in slots.iter().enumerate() {
        head[s[0]] = Some(Port { crossing: c, slot: 0 });
        tail[s[2]] = Some(Port { crossing: c, slot: 2 });
    }
    let other = |e: usize, p: Port| -> Port {
        let [a, b] = edges[e].ends.unwrap();
        if a == p {
            b
        } else {
            a
        }
    };
    // over strands pass through slots 1 and 3
    loop {
        let mut changed = false;
        for e in 0..edges.len() {
            if edges[e].ends.is_none() {
                continue;
            }
            if let (Some(h), None) = (head[e], tail[e]) {
                tail[e] = Some(other(e, h));
                changed = true;
            } else if let (None, Some(t)) = (head[e], tail[e]) {
                head[e] = Some(other(e, t));
                changed = true;
            }
        }
        for (c, s) in slots.iter().enumerate() {
            for (a, b) in [(1, 3), (3, 1)] {
                let pa = Port { crossing: c, slot: a };
                let pb = Port { crossing: c, slot: b };
                if head[s[a]] == Some(pa) && tail[s[b]].is_none() {
                    tail[s[b]] = Some(pb);
                    changed = true;
                }
                if tail[s[a]] == Some(pa) && head[s[b]].is_none() {
                    head[s[b]] = Some(pb);
                    changed = true;
                }
            }
        }
        if changed {
            continue;
        }
        // a component that only passes over: orient its smallest edge
        let free = (0..edges.len()).find(|&e| edges[e].ends.is_some() && head[e].is_none());
        match free {
            Some(e) => {
                let [a, b] = edges[e].ends.unwrap();
                let (h, t) = if a.slot == 1 || a == b { (a, b) } else { (b, a) };
                head[e] = Some(h);
                tail[e] = Some(t);
            }
            None => break,
        }
    }
    head
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            write!(f, "unknot")
        } else {
            write!(f, "{}", self.to_pd_string())
        }
    }
}

/// Parses whitespace-separated `X(a,b,c,d)` terms. Square brackets and an
/// enclosing `PD[...]` are tolerated.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut body = text.trim();
    if let Some(rest) = body.strip_prefix("PD") {
        body = rest.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    }
    let mut quads = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let rest1 = rest
            .strip_prefix('X')
            .ok_or_else(|| DiagramError::MalformedToken(rest.chars().take(16).collect()))?;
        let open = rest1.chars().next();
        let close = match open {
            Some('(') => ')',
            Some('[') => ']',
            _ => return Err(DiagramError::MalformedToken(rest.chars().take(16).collect())),
        };
        let end = rest1
            .find(close)
            .ok_or_else(|| DiagramError::MalformedToken(rest.chars().take(16).collect()))?;
        let inner = &rest1[1..end];
        let nums: Vec<&str> = inner.split(',').map(str::trim).collect();
        if nums.len() != 4 {
            return Err(DiagramError::MalformedToken(format!("X{}{}{}", open.unwrap(), inner, close)));
        }
        let mut q = [0u32; 4];
        for (i, s) in nums.iter().enumerate() {
            q[i] = s
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| DiagramError::MalformedToken(format!("bad edge label `{s}`")))?;
        }
        quads.push(q);
        rest = rest1[end + 1..].trim_start_matches([',', ' ', '\t', '\n', '\r']);
    }
    LinkDiagram::from_pd(&quads)
}

/// Parses `"<k>: w1 w2 ..."` into a braid closure.
pub fn parse_braid(text: &str) -> Result<LinkDiagram, DiagramError> {
    let (k, word) = text
        .split_once(':')
        .ok_or_else(|| DiagramError::BadBraid(format!("expected `<strands>: <word>`, got `{text}`")))?;
    let strands: usize = k
        .trim()
        .parse()
        .map_err(|_| DiagramError::BadBraid(format!("bad strand count `{}`", k.trim())))?;
    let word = word
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i32>().map_err(|_| DiagramError::BadBraid(format!("bad generator `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    LinkDiagram::from_braid(strands, &word)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "X(1,4,2,3) X(3,2,4,1)";
    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn hopf_pd() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.components().len(), 2);
        assert_eq!(d.to_pd_string(), HOPF);
    }

    #[test]
    fn empty_pd_is_an_error() {
        assert!(matches!(parse_pd(""), Err(DiagramError::Empty)));
        assert!(matches!(parse_pd("   "), Err(DiagramError::Empty)));
    }

    #[test]
    fn malformed_tokens() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(DiagramError::MalformedToken(_))));
        assert!(matches!(parse_pd("Y(1,2,3,4)"), Err(DiagramError::MalformedToken(_))));
        assert!(matches!(parse_pd("X(1,2,3,x)"), Err(DiagramError::MalformedToken(_))));
        assert!(matches!(parse_pd("X(1,4,2,3) X(3,2,4,5)"), Err(DiagramError::EdgeMultiplicity { .. })));
    }

    #[test]
    fn non_planar_incidence_rejected() {
        // two crossings glued so that the rotation system has genus one
        let r = parse_pd("X(1,2,3,4) X(1,3,2,4)");
        assert!(matches!(r, Err(DiagramError::NonPlanar { .. })), "{r:?}");
        // three loops, each pair crossing once
        let r = parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)");
        assert_eq!(r.unwrap_err(), DiagramError::NonPlanar { faces: 3, expected: 5 });
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        // edge 1 enters both crossings as an under strand
        let r = parse_pd("X(1,3,2,4) X(1,4,2,3)");
        assert!(matches!(r, Err(DiagramError::Inconsistent(_)) | Err(DiagramError::NonPlanar { .. })), "{r:?}");
    }

    #[test]
    fn trefoil_signs() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.signs(), (0, 3));
        let rh = parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap();
        assert_eq!(rh.signs(), (3, 0));
    }

    #[test]
    fn braid_closures() {
        let hopf = parse_braid("2: 1 1").unwrap();
        assert_eq!(hopf.len(), 2);
        assert_eq!(hopf.signs(), (2, 0));
        assert_eq!(hopf.components().len(), 2);

        let t35 = parse_braid("3: 1 2 1 2 1 2 1 2 1 2").unwrap();
        assert_eq!(t35.len(), 10);
        assert_eq!(t35.signs(), (10, 0));
        assert_eq!(t35.components().len(), 1);

        let u = parse_braid("1:").unwrap();
        assert_eq!(u.len(), 0);
        assert_eq!(u.components().len(), 1);
        assert_eq!(u.signs(), (0, 0));
    }

    #[test]
    fn braid_errors() {
        assert!(matches!(parse_braid("2: 2"), Err(DiagramError::GeneratorOutOfRange { .. })));
        assert!(matches!(parse_braid("3: 1 0"), Err(DiagramError::GeneratorOutOfRange { .. })));
        assert!(matches!(parse_braid("3 1 2"), Err(DiagramError::BadBraid(_))));
    }

    #[test]
    fn negative_generators() {
        let d = parse_braid("2: -1 -1 -1").unwrap();
        assert_eq!(d.signs(), (0, 3));
        let d = parse_braid("3: 1 -2 1 -2").unwrap();
        assert_eq!(d.signs(), (2, 2));
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn untouched_strand_becomes_loop() {
        let d = parse_braid("3: 1 1").unwrap();
        assert_eq!(d.loop_edges().count(), 1);
        assert_eq!(d.components().len(), 3);
    }

    #[test]
    fn faces_of_small_diagrams() {
        assert_eq!(LinkDiagram::unknot().planar_map().faces().len(), 2);
        let hopf = parse_pd(HOPF).unwrap().planar_map();
        assert_eq!((hopf.vertices().len(), hopf.edges().len(), hopf.faces().len()), (2, 4, 4));
        let tre = parse_pd(TREFOIL).unwrap().planar_map();
        assert_eq!((tre.vertices().len(), tre.edges().len(), tre.faces().len()), (3, 6, 5));
    }

    #[test]
    fn basepoint() {
        let mut d = parse_pd(HOPF).unwrap();
        d.set_basepoint(3).unwrap();
        assert_eq!(d.distinguished_component(), Some(1));
        assert!(matches!(d.set_basepoint(9), Err(DiagramError::UnknownBasepoint(9))));
    }
}

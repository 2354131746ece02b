//! Classification of active configurations into the families that carry a
//! nonzero map, together with the monomials those maps hit.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::{reference_configuration, Circles, Configuration, Side, REFERENCE_TYPES};
use crate::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConfigClass {
    SplitEdge,
    JoinEdge,
    /// One of the sixteen connected 2-dimensional types, numbered 1..=16.
    TwoDim(u8),
    A(usize),
    B(usize),
    C(usize, usize),
    D(usize, usize),
    E(usize, usize),
    Zero,
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigClass::SplitEdge => write!(f, "split"),
            ConfigClass::JoinEdge => write!(f, "join"),
            ConfigClass::TwoDim(t) => write!(f, "type {t}"),
            ConfigClass::A(k) => write!(f, "A{k}"),
            ConfigClass::B(k) => write!(f, "B{k}"),
            ConfigClass::C(p, q) => write!(f, "C{p},{q}"),
            ConfigClass::D(p, q) => write!(f, "D{p},{q}"),
            ConfigClass::E(p, q) => write!(f, "E{p},{q}"),
            ConfigClass::Zero => write!(f, "zero"),
        }
    }
}

/// A classified active configuration. Each term `(a, b)` says that the
/// monomial with starting-circle mask `a` maps onto the monomial with
/// ending-circle mask `b`; every other monomial maps to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: ConfigClass,
    pub terms: Vec<(u64, u64)>,
}

impl Classification {
    fn zero() -> Self {
        Classification { class: ConfigClass::Zero, terms: Vec::new() }
    }

    /// Rewrites terms stated for an image configuration in terms of our own
    /// circles; `starts[i]` (`ends[i]`) is the image index of our circle `i`.
    pub fn pulled_back(mut self, starts: &[usize], ends: &[usize]) -> Self {
        let pull = |mask: u64, map: &[usize]| -> u64 {
            map.iter().enumerate().filter(|&(_, &j)| mask >> j & 1 == 1).fold(0, |m, (i, _)| m | 1 << i)
        };
        for t in &mut self.terms {
            *t = (pull(t.0, starts), pull(t.1, ends));
        }
        self.terms.sort_unstable();
        self
    }
}

/// Lookup table from 2-dimensional configurations (up to reversal) to their
/// type number.
#[derive(Clone, Debug)]
pub struct TypeTable {
    by_code: HashMap<Vec<u32>, u8>,
}

impl TypeTable {
    /// The table built from the shipped reference configurations.
    pub fn standard() -> &'static TypeTable {
        static TABLE: OnceLock<TypeTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let refs: Vec<(u8, Configuration)> =
                REFERENCE_TYPES.iter().map(|&(t, _)| (t, reference_configuration(t))).collect();
            TypeTable::from_references(&refs).expect("reference table is consistent")
        })
    }

    pub fn from_references(refs: &[(u8, Configuration)]) -> Result<Self, ConfigError> {
        let mut by_code = HashMap::new();
        for (t, c) in refs {
            if c.dimension() != 2 || c.passive() != 0 || !c.is_connected() {
                return Err(ConfigError::NotTwoDimensional);
            }
            if let Some(prev) = by_code.insert(c.canonical_code(true), *t) {
                return Err(ConfigError::DuplicateReference(prev, *t));
            }
        }
        Ok(TypeTable { by_code })
    }

    /// Same shapes, with the type numbers permuted by `f`.
    pub fn renumbered(&self, f: impl Fn(u8) -> u8) -> Self {
        TypeTable { by_code: self.by_code.iter().map(|(k, &v)| (k.clone(), f(v))).collect() }
    }

    pub fn len(&self) -> usize {
        self.by_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_code.is_empty()
    }

    pub fn lookup(&self, c: &Configuration) -> Option<u8> {
        self.by_code.get(&c.canonical_code(true)).copied()
    }
}

/// Type of an active, connected configuration with two arcs.
pub fn classify_two_dim(c: &Configuration, table: &TypeTable) -> Result<u8, ConfigError> {
    if c.dimension() != 2 || c.passive() != 0 || !c.is_connected() {
        return Err(ConfigError::NotTwoDimensional);
    }
    table.lookup(c).ok_or(ConfigError::UnknownType)
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

struct View<'a> {
    c: &'a Configuration,
    table: &'a TypeTable,
    starts: Circles,
    ends: Circles,
}

impl<'a> View<'a> {
    fn new(c: &'a Configuration, table: &'a TypeTable) -> Self {
        View { c, table, starts: c.start_circles(), ends: c.end_circles() }
    }

    fn k(&self) -> usize {
        self.c.dimension()
    }

    fn pair_type(&self, i: usize, j: usize) -> Option<u8> {
        let sub = self.c.restrict(&[i, j]);
        if !sub.is_connected() {
            return None;
        }
        self.table.lookup(&sub.active_part().0)
    }

    fn all_pairs(&self, ok: impl Fn(u8) -> bool) -> bool {
        let k = self.k();
        (0..k).all(|i| (i + 1..k).all(|j| self.pair_type(i, j).is_some_and(&ok)))
    }

    /// Circle meeting every arc, if exactly one does.
    fn central(&self, side: Side) -> Option<usize> {
        let circles = if side == Side::Start { &self.starts } else { &self.ends };
        let k = self.k();
        let mut hits = vec![0usize; circles.len()];
        for i in 0..k {
            let (a, b) = self.c.arc_circles(circles, side, i);
            hits[a] += 1;
            if b != a {
                hits[b] += 1;
            }
        }
        let mut found = None;
        for (x, &h) in hits.iter().enumerate() {
            if h == k {
                if found.is_some() {
                    return None;
                }
                found = Some(x);
            }
        }
        found
    }

    fn is_a(&self) -> bool {
        self.starts.len() == 2 && self.ends.len() == self.k() && self.all_pairs(|t| t == 1)
    }

    fn c_split(&self) -> Option<(usize, usize)> {
        if self.starts.len() != 1 || self.ends.len() + 1 != self.k() {
            return None;
        }
        let sides = self.c.sides_along(&self.starts, 0);
        let left: Vec<usize> = sides.iter().filter(|s| s.1).map(|s| s.0).collect();
        let right: Vec<usize> = sides.iter().filter(|s| !s.1).map(|s| s.0).collect();
        if left.is_empty() || right.is_empty() {
            return None;
        }
        let ok = left.iter().all(|&e| {
            right.iter().all(|&f| {
                let (a, b) = if e < f { (e, f) } else { (f, e) };
                self.pair_type(a, b) == Some(8)
            })
        });
        if !ok {
            return None;
        }
        // report (p, q) with p arcs on whichever side has more
        Some((left.len().max(right.len()), left.len().min(right.len())))
    }

    fn e_split(&self) -> Option<(usize, usize)> {
        let (s, e) = (self.starts.len(), self.ends.len());
        if s + e != self.k() + 2 || !self.all_pairs(|t| (2..=7).contains(&t)) {
            return None;
        }
        Some((s - 1, e - 1))
    }

    fn e_terms(&self) -> Option<Vec<(u64, u64)>> {
        let x1 = self.central(Side::Start)?;
        let y1 = self.central(Side::End)?;
        let degree_one = full(self.starts.len()) & !(1u64 << x1);
        Some(vec![(degree_one, 1u64 << y1)])
    }
}

fn two_dim_terms(v: &View, t: u8) -> Vec<(u64, u64)> {
    let (s, e) = (v.starts.len(), v.ends.len());
    match t {
        1 => vec![(0, 0)],
        2..=7 => v.e_terms().unwrap_or_default(),
        8 => vec![(0, 0), (1, 1)],
        9 => vec![(full(s), full(e))],
        _ => Vec::new(),
    }
}

/// Every family among A, B, C, D, E matched by an active configuration with
/// at least three arcs. At most one is expected.
pub fn family_matches(c: &Configuration, table: &TypeTable) -> Vec<ConfigClass> {
    let v = View::new(c, table);
    let k = v.k();
    let mut out = Vec::new();
    if k < 3 || !c.is_connected() {
        return out;
    }
    if v.is_a() {
        out.push(ConfigClass::A(k));
    }
    let md = c.dual().mirror();
    let w = View::new(&md, table);
    if v.starts.len() == k && v.ends.len() == 2 && w.is_a() {
        out.push(ConfigClass::B(k));
    }
    if let Some((p, q)) = v.c_split() {
        out.push(ConfigClass::C(p, q));
    }
    if v.starts.len() + 1 == k && v.ends.len() == 1 {
        if let Some((p, q)) = w.c_split() {
            out.push(ConfigClass::D(p, q));
        }
    }
    if let Some((p, q)) = v.e_split() {
        out.push(ConfigClass::E(p, q));
    }
    out
}

/// Classifies the active part of `c` and lists the nonzero terms of its map.
/// Circle indices refer to `c.start_circles()` and `c.end_circles()`.
pub fn classify(c: &Configuration, table: &TypeTable) -> Classification {
    let (c, _) = c.active_part();
    let k = c.dimension();
    if k == 0 {
        return Classification { class: ConfigClass::Zero, terms: vec![(0, 0)] };
    }
    if !c.is_connected() {
        return Classification::zero();
    }
    let v = View::new(&c, table);
    let (s, e) = (v.starts.len(), v.ends.len());
    if k == 1 {
        return if s == 1 {
            Classification { class: ConfigClass::SplitEdge, terms: vec![(0, 1), (0, 2), (1, 3)] }
        } else {
            Classification { class: ConfigClass::JoinEdge, terms: vec![(0, 0), (1, 1), (2, 1)] }
        };
    }
    if k == 2 {
        let t = table.lookup(&c).expect("every connected 2-dimensional configuration has a type");
        return Classification { class: ConfigClass::TwoDim(t), terms: two_dim_terms(&v, t) };
    }
    // cheap circle-count filters before any pairwise classification
    if s == 2 && e == k && v.is_a() {
        return Classification { class: ConfigClass::A(k), terms: vec![(0, 0)] };
    }
    if s == k && e == 2 {
        let md = c.dual().mirror();
        if View::new(&md, table).is_a() {
            return Classification { class: ConfigClass::B(k), terms: vec![(full(s), full(e))] };
        }
    }
    if s == 1 && e + 1 == k {
        if let Some((p, q)) = v.c_split() {
            return Classification { class: ConfigClass::C(p, q), terms: vec![(0, 0)] };
        }
    }
    if s + 1 == k && e == 1 {
        let md = c.dual().mirror();
        if let Some((p, q)) = View::new(&md, table).c_split() {
            return Classification { class: ConfigClass::D(p, q), terms: vec![(full(s), 1)] };
        }
    }
    if s + e == k + 2 {
        if let Some((p, q)) = v.e_split() {
            // pairwise E types always share one central circle on each side
            let Some(terms) = v.e_terms() else {
                log::debug!("pairwise E configuration without central circles: {}", c.to_text());
                return Classification::zero();
            };
            return Classification { class: ConfigClass::E(p, q), terms };
        }
    }
    Classification::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(links: &str) -> Configuration {
        Configuration::from_links_text(links, 0).unwrap()
    }

    #[test]
    fn edges() {
        let table = TypeTable::standard();
        let split = classify(&cfg("0.1-0.2 0.3-0.0"), table);
        assert_eq!(split.class, ConfigClass::SplitEdge);
        let join = classify(&cfg("0.0-0.1 0.2-0.3"), table);
        assert_eq!(join.class, ConfigClass::JoinEdge);
        assert_eq!(join.terms, vec![(0, 0), (1, 1), (2, 1)]);
    }

    #[test]
    fn disconnected_is_zero() {
        let c = cfg("0.0-0.1 0.2-0.3 1.0-1.1 1.2-1.3");
        assert_eq!(classify(&c, TypeTable::standard()).class, ConfigClass::Zero);
        assert!(classify_two_dim(&c, TypeTable::standard()).is_err());
    }
}

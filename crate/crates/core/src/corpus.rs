//! Built-in diagrams. Entries sharing a `link` name are diagrams of the same
//! oriented link.

use crate::diagram::{parse_braid, parse_pd, LinkDiagram};
use crate::DiagramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Pd,
    Braid,
}

#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub link: &'static str,
    pub format: Format,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal, $link:literal, pd) => {
        Entry { name: $name, link: $link, format: Format::Pd, text: include_str!(concat!("../data/corpus/", $name, ".pd")) }
    };
    ($name:literal, $link:literal, braid) => {
        Entry {
            name: $name,
            link: $link,
            format: Format::Braid,
            text: include_str!(concat!("../data/corpus/", $name, ".braid")),
        }
    };
}

pub const ENTRIES: &[Entry] = &[
    entry!("unknot", "unknot", pd),
    entry!("unknot-r1-positive", "unknot", pd),
    entry!("unknot-r1-negative", "unknot", pd),
    entry!("unknot-r2", "unknot", pd),
    entry!("unknot-r2-braid", "unknot", braid),
    entry!("unknot-stabilized", "unknot", braid),
    entry!("hopf", "hopf", pd),
    entry!("hopf-braid", "hopf", braid),
    entry!("trefoil-left", "trefoil-left", pd),
    entry!("trefoil-left-braid", "trefoil-left", braid),
    entry!("trefoil-right", "trefoil-right", pd),
    entry!("trefoil-right-braid", "trefoil-right", braid),
    entry!("figure-eight", "figure-eight", pd),
    entry!("figure-eight-braid", "figure-eight", braid),
    entry!("t2-5", "t2-5", braid),
    entry!("t3-4", "t3-4", braid),
    entry!("t3-5", "t3-5", braid),
];

impl Entry {
    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        let text = self.text.trim();
        let d = match self.format {
            Format::Pd if text.is_empty() => LinkDiagram::unknot(),
            Format::Pd => parse_pd(text)?,
            Format::Braid => parse_braid(text)?,
        };
        Ok(d.with_default_basepoint())
    }
}

pub fn get(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// All entries with the given crossing cap, parsed.
pub fn diagrams(max_crossings: usize) -> Vec<(&'static Entry, LinkDiagram)> {
    ENTRIES
        .iter()
        .map(|e| (e, e.diagram().expect("corpus entries parse")))
        .filter(|(_, d)| d.len() <= max_crossings)
        .collect()
}

/// Groups of entries that represent the same link, in corpus order.
pub fn invariance_groups() -> Vec<Vec<&'static Entry>> {
    let mut groups: Vec<Vec<&'static Entry>> = Vec::new();
    for e in ENTRIES {
        match groups.iter_mut().find(|g| g[0].link == e.link) {
            Some(g) => g.push(e),
            None => groups.push(vec![e]),
        }
    }
    groups.retain(|g| g.len() > 1);
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for e in ENTRIES {
            let d = e.diagram().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(d.basepoint().is_some(), "{}", e.name);
        }
        assert_eq!(get("t3-5").unwrap().diagram().unwrap().len(), 10);
    }

    #[test]
    fn groups() {
        let g = invariance_groups();
        assert_eq!(g[0].len(), 6);
        assert!(g.iter().all(|g| g.iter().all(|e| e.link == g[0].link)));
    }
}

//! Reference pictures of the sixteen connected 2-dimensional types, written
//! as port links (see [`Configuration::from_links_text`]).

use super::Configuration;

pub const REFERENCE_TYPES: &[(u8, &str)] = &[
    // two circles, both arcs running from the first to the second
    (1, "0.0-1.1 0.1-1.0 0.2-1.3 0.3-1.2"),
    // three starting circles in a chain
    (2, "0.0-0.1 0.2-1.0 0.3-1.1 1.2-1.3"),
    (3, "0.0-0.1 0.2-1.3 0.3-1.2 1.0-1.1"),
    // three ending circles
    (4, "0.0-0.3 0.1-1.3 0.2-1.0 1.1-1.2"),
    (5, "0.0-0.3 0.1-1.2 0.2-1.1 1.0-1.3"),
    // two starting and two ending circles, one arc joining and one splitting
    (6, "0.0-0.1 0.2-1.0 0.3-1.3 1.1-1.2"),
    (7, "0.0-0.1 0.2-1.1 0.3-1.2 1.0-1.3"),
    // one circle, arcs on opposite sides with interleaved endpoints
    (8, "0.0-1.0 0.1-1.3 0.2-1.2 0.3-1.1"),
    // two circles, arcs running in opposite directions
    (9, "0.0-1.3 0.1-1.2 0.2-1.1 0.3-1.0"),
    (10, "0.0-0.1 0.2-1.2 0.3-1.3 1.0-1.1"),
    (11, "0.0-0.1 0.2-1.1 0.3-1.0 1.2-1.3"),
    (12, "0.0-0.3 0.1-1.1 0.2-1.2 1.0-1.3"),
    (13, "0.0-0.3 0.1-1.0 0.2-1.3 1.1-1.2"),
    (14, "0.0-0.1 0.2-1.2 0.3-1.1 1.0-1.3"),
    (15, "0.0-0.1 0.2-1.3 0.3-1.0 1.1-1.2"),
    (16, "0.0-1.2 0.1-1.1 0.2-1.0 0.3-1.3"),
];

pub fn reference_configuration(t: u8) -> Configuration {
    let (_, text) = REFERENCE_TYPES.iter().find(|r| r.0 == t).expect("type between 1 and 16");
    Configuration::from_links_text(text, 0).expect("reference configurations are valid")
}

/// One representative of every connected planar 2-arc configuration, up to
/// isomorphism and reversal.
pub fn two_dim_classes() -> Vec<Configuration> {
    let mut seen = std::collections::BTreeMap::new();
    let mut link = vec![u32::MAX; 8];
    matchings(&mut link, &mut |l| {
        if let Ok(c) = Configuration::new(l.to_vec(), 0) {
            if c.is_connected() {
                seen.entry(c.canonical_code(true)).or_insert(c);
            }
        }
    });
    seen.into_values().collect()
}

fn matchings(link: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    let Some(p) = link.iter().position(|&x| x == u32::MAX) else {
        f(link);
        return;
    };
    for q in p + 1..link.len() {
        if link[q] == u32::MAX {
            link[p] = q as u32;
            link[q] = p as u32;
            matchings(link, f);
            link[p] = u32::MAX;
            link[q] = u32::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::{classify_two_dim, TypeTable};

    #[test]
    fn sixteen_classes() {
        let classes = two_dim_classes();
        assert_eq!(classes.len(), 16);
        let table = TypeTable::standard();
        assert_eq!(table.len(), 16);
        let mut seen: Vec<u8> = classes.iter().map(|c| classify_two_dim(c, table).unwrap()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (1..=16).collect::<Vec<u8>>());
    }

    #[test]
    fn circle_counts() {
        let counts = |t: u8| {
            let c = reference_configuration(t);
            (c.start_circles().len(), c.end_circles().len())
        };
        for t in [1, 6, 7, 9, 14, 15] {
            assert_eq!(counts(t), (2, 2), "type {t}");
        }
        for t in [2, 3, 10, 11] {
            assert_eq!(counts(t), (3, 1), "type {t}");
        }
        for t in [4, 5, 12, 13] {
            assert_eq!(counts(t), (1, 3), "type {t}");
        }
        assert_eq!(counts(8), (1, 1));
        assert_eq!(counts(16), (1, 1));
    }
}

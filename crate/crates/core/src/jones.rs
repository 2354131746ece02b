//! Kauffman-bracket state sum for the unnormalized Jones polynomial, and the
//! graded Euler characteristic of a complex. The state sum works on the PD
//! labels alone and shares no code with the cube.

use std::collections::BTreeMap;

use crate::cube::Generator;
use crate::diagram::LinkDiagram;

/// Laurent polynomial in `q` with integer coefficients.
pub type Laurent = BTreeMap<i32, i64>;

fn add_term(p: &mut Laurent, e: i32, c: i64) {
    let v = p.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        p.remove(&e);
    }
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            add_term(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Kauffman bracket in the variable `A`, with every loop (including the
/// last) weighted by `-A^2 - A^-2`.
pub fn kauffman_bracket(d: &LinkDiagram) -> Laurent {
    let labels: Vec<u32> = (0..d.edge_count()).map(|e| d.edge_label(e)).collect();
    let index = |l: u32| labels.iter().position(|&x| x == l).expect("label of the diagram");
    let quads: Vec<[usize; 4]> = d.crossings().iter().map(|c| c.edges.map(index)).collect();
    let n = quads.len();
    let loop_poly: Laurent = [(2, -1), (-2, -1)].into_iter().collect();
    let mut powers = vec![Laurent::from([(0, 1)])];
    for i in 0..=labels.len() {
        let next = mul(&powers[i], &loop_poly);
        powers.push(next);
    }
    let mut out = Laurent::new();
    for state in 0u64..1 << n {
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        for (c, q) in quads.iter().enumerate() {
            let pairs = if state >> c & 1 == 0 { [(q[0], q[1]), (q[2], q[3])] } else { [(q[0], q[3]), (q[1], q[2])] };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let loops = (0..labels.len()).filter(|&x| find(&mut parent, x) == x).count();
        let b = state.count_ones() as i32;
        let a = n as i32 - b;
        for (&e, &c) in &powers[loops] {
            add_term(&mut out, e + a - b, c);
        }
    }
    out
}

/// `(-A^3)^(-w) <D>` with `A^2 = -q^-1`; equals `(q + q^-1)` times the Jones
/// polynomial at `t^(1/2) = -q`.
pub fn unnormalized_jones(d: &LinkDiagram) -> Laurent {
    let w = d.writhe() as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let mut out = Laurent::new();
    for (&e, &c) in &kauffman_bracket(d) {
        let e = e - 3 * w;
        assert!(e % 2 == 0, "odd power of A");
        let m = e / 2;
        let s = if m % 2 == 0 { 1 } else { -1 };
        add_term(&mut out, -m, sign * s * c);
    }
    out
}

/// `sum (-1)^h q^q` over the generators.
pub fn graded_euler(generators: &[Generator]) -> Laurent {
    let mut out = Laurent::new();
    for g in generators {
        add_term(&mut out, g.grading.q, if g.grading.h % 2 == 0 { 1 } else { -1 });
    }
    out
}

pub fn to_string(p: &Laurent) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter().rev().map(|(e, c)| format!("{c:+}q^{e}")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_braid, parse_pd};

    #[test]
    fn unknot() {
        let j = unnormalized_jones(&LinkDiagram::unknot());
        assert_eq!(j, Laurent::from([(-1, 1), (1, 1)]));
        assert_eq!(unnormalized_jones(&parse_pd("X(1,1,2,2)").unwrap()), j);
        assert_eq!(unnormalized_jones(&parse_pd("X(1,2,2,1)").unwrap()), j);
    }

    #[test]
    fn right_trefoil() {
        // (q + q^-1)(q^2 + q^6 - q^8)
        let expected = Laurent::from([(1, 1), (3, 1), (5, 1), (9, -1)]);
        assert_eq!(unnormalized_jones(&parse_braid("2: 1 1 1").unwrap()), expected);
        assert_eq!(unnormalized_jones(&parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap()), expected);
    }
}

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use khss_core::configuration::TypeTable;
use khss_core::cube::{braid_decoration, Decoration};
use khss_core::differential::{chain_complex, ChainComplex, Cube, Rules, Theory, Variant};
use khss_core::homology::{homology_bigraded, homology_by_delta, spectral_pages};
use khss_core::{corpus, parse_braid, parse_pd, verify, DiagramError, LinkDiagram};

fn khovanov_bigraded(d: &LinkDiagram) -> BTreeMap<(i32, i32), usize> {
    let cube = Cube::new(d);
    let c = ChainComplex { generators: cube.basis.generators.clone(), d: cube.khovanov_d() };
    homology_bigraded(&c)
}

#[test]
fn hopf_khovanov_table() {
    // the 2-crossing cube by hand: 1 and y1+y2 survive at both ends
    let d = parse_braid("2: 1 1").unwrap();
    let expected: BTreeMap<(i32, i32), usize> = [((0, 0), 1), ((2, 0), 1), ((4, 2), 1), ((6, 2), 1)].into_iter().collect();
    assert_eq!(khovanov_bigraded(&d), expected);
    let cube = Cube::new(&d);
    let c = chain_complex(&cube, &Decoration::zeros(2), Theory::Khovanov).unwrap();
    assert_eq!(homology_bigraded(&c), expected);
}

#[test]
fn right_trefoil_khovanov_table() {
    // (q, h): the mod 2 table picks up both ends of the torsion class
    let expected: BTreeMap<(i32, i32), usize> =
        [((1, 0), 1), ((3, 0), 1), ((5, 2), 1), ((7, 2), 1), ((7, 3), 1), ((9, 3), 1)].into_iter().collect();
    assert_eq!(khovanov_bigraded(&parse_braid("2: 1 1 1").unwrap()), expected);
    assert_eq!(khovanov_bigraded(&parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap()), expected);
}

#[test]
fn hopf_matrix_golden() {
    let d = parse_braid("2: 1 1").unwrap();
    let cube = Cube::new(&d);
    let t = braid_decoration(&d).unwrap();
    let dump = cube.d(&t, &Rules::standard()).dump();
    assert_eq!(dump, "0: 4 6 8\n1: 5 7\n2: 5 7\n3:\n4: 9 10\n5: 11\n6: 9 10\n7: 11\n8:\n9:\n10:\n11:\n");
}

#[test]
fn t35_pages() {
    let d = parse_braid("3: 1 2 1 2 1 2 1 2 1 2").unwrap().with_default_basepoint();
    let cube = Cube::new(&d);
    let c = chain_complex(&cube, &braid_decoration(&d).unwrap(), Theory::Szabo).unwrap();
    let pages = spectral_pages(&c, 11);
    let totals: Vec<usize> = pages.iter().map(|p| p.total()).collect();
    assert_eq!(totals, vec![8418, 14, 6, 2, 2, 2, 2, 2, 2, 2, 2]);
    assert_eq!(pages[1].total(), 14);
    assert!(pages.last().unwrap().total() < pages[1].total());
}

#[test]
fn mirror_theory_on_trefoils() {
    for e in ["trefoil-left", "trefoil-right"] {
        let d = corpus::get(e).unwrap().diagram().unwrap();
        let cube = Cube::new(&d);
        let t = Decoration::zeros(3);
        let a = homology_by_delta(&chain_complex(&cube, &t, Theory::Szabo).unwrap());
        let b = homology_by_delta(&chain_complex(&cube, &t, Theory::SzaboMirror).unwrap());
        assert_eq!(a, b, "{e}");
    }
}

#[test]
fn transverse_examples() {
    let d = parse_braid("1:").unwrap();
    let cube = Cube::new(&d);
    let z = cube.transverse_cycle().unwrap();
    assert_eq!(cube.basis.generators[z].monomial, 1);
    assert!(verify::transverse_cycle_closed(&cube).unwrap());

    let d = parse_braid("2: 1").unwrap();
    let cube = Cube::new(&d);
    let z = cube.transverse_cycle().unwrap();
    let g = cube.basis.generators[z];
    assert_eq!((g.resolution, g.monomial), (d.oriented_resolution(), 0b11));
    assert!(verify::transverse_cycle_closed(&cube).unwrap());

    let pd = parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap();
    assert_eq!(Cube::new(&pd).transverse_cycle(), Err(DiagramError::NotBraid));
}

#[test]
fn reduced_needs_basepoint() {
    let d = parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap();
    let cube = Cube::new(&d);
    let r = chain_complex(&cube, &Decoration::zeros(3), Theory::Reduced);
    assert_eq!(r.err(), Some(DiagramError::NoBasepoint));
    let mut d = d;
    d.set_basepoint(5).unwrap();
    let cube = Cube::new(&d);
    assert!(verify::reduced_closed(&cube, &Decoration::zeros(3)).unwrap());
    let ranks = homology_by_delta(&chain_complex(&cube, &Decoration::zeros(3), Theory::Reduced).unwrap());
    assert_eq!(ranks, [(2, 3)].into_iter().collect());
}

#[test]
fn corrupted_table_breaks_duality() {
    let swapped = TypeTable::standard().renumbered(|t| match t {
        1 => 8,
        8 => 1,
        t => t,
    });
    let rules = Rules { table: &swapped, variant: Variant::Standard };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = corpus::get("t3-4").unwrap().diagram().unwrap();
    let cube = Cube::new(&d);
    let t = Decoration::random(cube.n(), &mut rng);
    let faces = verify::sample_faces(cube.n(), 4, 2000, &mut rng);
    let bad = verify::check_rules(&cube, &t, &rules, &faces);
    assert!(bad.duality > 0, "{bad:?}");
    let good = verify::check_rules(&cube, &t, &Rules::standard(), &faces);
    assert_eq!(good.violations(), 0, "{good:?}");
}

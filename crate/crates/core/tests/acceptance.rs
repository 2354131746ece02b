//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use khss_core::configuration::{reference_configuration, two_dim_classes, Configuration, TypeTable};
use khss_core::cube::{braid_decoration, Decoration};
use khss_core::differential::{chain_complex, ChainComplex, Cube, Rules, Theory};
use khss_core::homology::{homology_bigraded, homology_by_delta, spectral_pages, total, GradedRanks};
use khss_core::verify::{self, RuleReport};
use khss_core::{corpus, jones, parse_braid, random, LinkDiagram};

const T35: &str = "3: 1 2 1 2 1 2 1 2 1 2";

type Outcome = Result<String, String>;

fn ranks(cube: &Cube, t: &Decoration, theory: Theory) -> GradedRanks<i32> {
    homology_by_delta(&chain_complex(cube, t, theory).expect("complex"))
}

fn table(pairs: &[(i32, usize)]) -> GradedRanks<i32> {
    pairs.iter().copied().collect()
}

fn t35_headline() -> Outcome {
    let start = Instant::now();
    let d = parse_braid(T35).unwrap().with_default_basepoint();
    let cube = Cube::new(&d);
    let t = braid_decoration(&d).unwrap();
    let full = ranks(&cube, &t, Theory::Szabo);
    let reduced = ranks(&cube, &t, Theory::Reduced);
    let elapsed = start.elapsed();
    let msg = format!("H = {full:?}, H_red = {reduced:?}, {elapsed:.1?}");
    if full == table(&[(7, 1), (9, 1)]) && reduced == table(&[(8, 1)]) && elapsed < Duration::from_secs(120) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn unknot() -> Outcome {
    let d = LinkDiagram::unknot().with_default_basepoint();
    let cube = Cube::new(&d);
    let t = Decoration::zeros(0);
    let full = ranks(&cube, &t, Theory::Szabo);
    let reduced = ranks(&cube, &t, Theory::Reduced);
    let msg = format!("H = {full:?}, H_red = {reduced:?}");
    if full == table(&[(-1, 1), (1, 1)]) && reduced == table(&[(0, 1)]) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn d_squared() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd5);
    let mut jobs: Vec<(String, Cube, Decoration)> = Vec::new();
    let mut cubes = Vec::new();
    for (e, d) in corpus::diagrams(usize::MAX) {
        cubes.push((e.name.to_string(), Cube::new(&d)));
    }
    let mut seeds = Vec::new();
    for (name, cube) in &cubes {
        for _ in 0..50 {
            seeds.push((name.clone(), cube.n(), Decoration::random(cube.n(), &mut rng)));
        }
    }
    let corpus_failures: Vec<String> = seeds
        .par_iter()
        .filter_map(|(name, _, t)| {
            let cube = &cubes.iter().find(|c| &c.0 == name).unwrap().1;
            let ok = verify::d_squared_vanishes(cube, t, &Rules::standard())
                && verify::d_squared_vanishes(cube, t, &Rules::mirror());
            (!ok).then(|| format!("{name} {t}"))
        })
        .collect();
    for _ in 0..100 {
        let (s, w, d) = random::braid_closure(5, 8, &mut rng);
        let t = Decoration::random(d.len(), &mut rng);
        jobs.push((random::format_braid(s, &w), Cube::new(&d), t));
    }
    let random_failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(name, cube, t)| {
            let ok = verify::d_squared_vanishes(cube, t, &Rules::standard())
                && verify::d_squared_vanishes(cube, t, &Rules::mirror());
            (!ok).then(|| format!("{name} {t}"))
        })
        .collect();
    let elapsed = start.elapsed();
    let msg = format!(
        "{} corpus decorations, {} random diagrams, failures {:?} {:?}, {elapsed:.1?}",
        seeds.len(),
        jobs.len(),
        corpus_failures,
        random_failures
    );
    if corpus_failures.is_empty() && random_failures.is_empty() && elapsed < Duration::from_secs(300) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn decoration_change() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdc);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (e, d) in corpus::diagrams(usize::MAX) {
        let cube = Cube::new(&d);
        let t = Decoration::random(cube.n(), &mut rng);
        let reports: Vec<_> = (0..cube.n()).into_par_iter().map(|m| (m, verify::decoration_change(&cube, &t, m))).collect();
        for (m, r) in reports {
            checked += 1;
            if !r.ok() {
                failures.push(format!("{} flip {m}: {r:?}", e.name));
            }
        }
    }
    let msg = format!("{checked} flips, failures {failures:?}");
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn rule_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e);
    let mut rep = RuleReport::default();
    for (_, d) in corpus::diagrams(usize::MAX) {
        let cube = Cube::new(&d);
        let t = Decoration::random(cube.n(), &mut rng);
        let faces = verify::sample_faces(cube.n(), 5, 4000, &mut rng);
        rep.merge(&verify::check_rules(&cube, &t, &Rules::standard(), &faces));
        rep.merge(&verify::check_rules(&cube, &t, &Rules::mirror(), &faces));
    }
    let msg = format!("{rep:?}");
    if rep.violations() == 0 && rep.faces >= 10_000 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn pairing_tables() -> Outcome {
    let table = TypeTable::standard();
    let ty = |c: &Configuration| table.lookup(c).unwrap_or(0);
    let star: BTreeMap<u8, u8> =
        [(1, 9), (2, 4), (3, 5), (6, 14), (7, 15), (8, 16), (10, 12), (11, 13)].into_iter().collect();
    let mut bad = Vec::new();
    for t in 1..=16u8 {
        let c = reference_configuration(t);
        let want_star = star.get(&t).copied().or_else(|| star.iter().find(|(_, &v)| v == t).map(|(&k, _)| k)).unwrap();
        if ty(&c.dual()) != want_star {
            bad.push(format!("{t}* = {}", ty(&c.dual())));
        }
        let want_m = match t {
            1..=5 | 9..=13 => t,
            6..=8 => t + 8,
            _ => t - 8,
        };
        if ty(&c.mirror()) != want_m {
            bad.push(format!("m({t}) = {}", ty(&c.mirror())));
        }
    }
    let classes = two_dim_classes();
    let covered = classes.iter().filter(|c| table.lookup(c).is_some()).count();
    let msg = format!("{} classes, {covered} typed, mismatches {bad:?}", classes.len());
    if bad.is_empty() && classes.len() == 16 && covered == 16 && table.len() == 16 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// `(h, delta)` ranks of the Khovanov complex assembled from merges and
/// splits, without configurations.
fn independent_khovanov(cube: &Cube) -> GradedRanks<(i32, i32)> {
    let c = ChainComplex { generators: cube.basis.generators.clone(), d: cube.khovanov_d() };
    let mut out = BTreeMap::new();
    for ((q, h), r) in homology_bigraded(&c) {
        *out.entry((h, q - 2 * h)).or_default() += r;
    }
    out
}

fn spectral_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x55);
    let mut bad = Vec::new();
    for (e, d) in corpus::diagrams(usize::MAX) {
        let cube = Cube::new(&d);
        let t = Decoration::random(cube.n(), &mut rng);
        let c = chain_complex(&cube, &t, Theory::Szabo).unwrap();
        let pages = spectral_pages(&c, (cube.n() + 1).max(2));
        let e2 = pages[1].ranks.clone();
        if e2 != independent_khovanov(&cube) {
            bad.push(format!("{}: E2", e.name));
        }
        if pages.last().unwrap().total() != total(&homology_by_delta(&c)) {
            bad.push(format!("{}: E_inf", e.name));
        }
    }
    let msg = format!("{} diagrams, mismatches {bad:?}", corpus::ENTRIES.len());
    if bad.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn jones_lock() -> Outcome {
    let mut bad = Vec::new();
    for (e, d) in corpus::diagrams(usize::MAX) {
        let cube = Cube::new(&d);
        let chi = jones::graded_euler(&cube.basis.generators);
        let j = jones::unnormalized_jones(&d);
        if chi != j {
            bad.push(format!("{}: {} vs {}", e.name, jones::to_string(&chi), jones::to_string(&j)));
        }
    }
    let msg = format!("{} diagrams, mismatches {bad:?}", corpus::ENTRIES.len());
    if bad.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn transverse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7c);
    let braids: Vec<_> = (0..50).map(|_| random::braid_closure(6, 8, &mut rng)).collect();
    let bad: Vec<String> = braids
        .par_iter()
        .filter(|(_, _, d)| !verify::transverse_cycle_closed(&Cube::new(d)).unwrap())
        .map(|(s, w, _)| random::format_braid(*s, w))
        .collect();
    let msg = format!("{} braids, open {bad:?}", braids.len());
    if bad.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a);
    let mut compared = 0;
    let mut bad = Vec::new();
    for group in corpus::invariance_groups() {
        let first = group[0].diagram().unwrap();
        let c0 = Cube::new(&first);
        let t0 = Decoration::random(c0.n(), &mut rng);
        for e in &group[1..] {
            let d = e.diagram().unwrap();
            let c = Cube::new(&d);
            let t = Decoration::random(c.n(), &mut rng);
            for theory in [Theory::Szabo, Theory::Reduced] {
                compared += 1;
                let r = verify::compare((&c0, &t0), (&c, &t), theory).unwrap();
                if !r.equal() {
                    bad.push(format!("{} vs {} ({})", group[0].name, e.name, theory.name()));
                }
            }
        }
    }
    let msg = format!("{compared} comparisons, unequal {bad:?}");
    if bad.is_empty() && compared > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("T(3,5) headline ranks", t35_headline),
        ("unknot ranks", unknot),
        ("d^2 = 0 and d'^2 = 0", d_squared),
        ("decoration change", decoration_change),
        ("rule suite", rule_suite),
        ("2D pairing tables", pairing_tables),
        ("spectral sequence sanity", spectral_sanity),
        ("Euler characteristic vs Jones", jones_lock),
        ("transverse cycle", transverse),
        ("invariance corpus", invariance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(f) {
            Ok(Ok(msg)) => println!("criterion {:2} PASS  {name}: {msg}", i + 1),
            Ok(Err(msg)) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {msg}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: panicked", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

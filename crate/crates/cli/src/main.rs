mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use khss_core::configuration::TypeTable;
use khss_core::corpus;
use khss_core::cube::{braid_decoration, Decoration};
use khss_core::differential::{chain_complex, ChainComplex, Cube, Rules, Theory, Variant};
use khss_core::homology::{homology_bigraded, homology_by_delta, spectral_pages};
use khss_core::{random, verify, LinkDiagram};

use input::{check_size, decoration, InputArgs, InputError, Source};
use report::{Output, Report};

const EXIT_USAGE: u8 = 2;
const EXIT_D_SQUARED: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "khss", version, about = "Mod 2 Khovanov homology and its geometric spectral sequence")]
struct Cli {
    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true, env = "KHSS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// khovanov, szabo, szabo-mirror or reduced
    #[arg(long, default_value = "szabo")]
    theory: Theory,
    /// auto, braid, random, zeros or a bit string with one bit per crossing
    #[arg(long, default_value = "auto")]
    decoration: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refuse diagrams with more crossings than this
    #[arg(long, default_value_t = 14)]
    max_crossings: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graded ranks and, with --pages, every page of the spectral sequence
    Compute {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        #[arg(long)]
        pages: bool,
    },
    /// Structural checks on one diagram, or on the whole corpus
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Random decorations per diagram
        #[arg(long, default_value_t = 50)]
        decorations: usize,
        /// Extra random braid closures
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Crossing bound for the random diagrams
        #[arg(long, default_value_t = 8)]
        random_crossings: usize,
        /// Faces sampled per decoration for the rule checks
        #[arg(long, default_value_t = 2000)]
        faces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 14)]
        max_crossings: usize,
        /// Swap two type numbers in the table (negative control)
        #[arg(long, hide = true, value_parser = parse_swap)]
        swap_types: Option<(u8, u8)>,
    },
    /// Compare ranks and pages of two diagrams of the same link
    Invariance {
        /// pd:<code>, braid:<word>, corpus:<name> or unknot
        first: String,
        second: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Print the differential as one line per column
    DumpMatrix {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: Common,
        /// Only the d_k part
        #[arg(long)]
        k: Option<usize>,
    },
}

fn parse_swap(s: &str) -> Result<(u8, u8), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let p = |x: &str| x.trim().parse::<u8>().map_err(|e| e.to_string()).and_then(|t| {
        if (1..=16).contains(&t) {
            Ok(t)
        } else {
            Err(format!("type {t} out of range"))
        }
    });
    Ok((p(a)?, p(b)?))
}

enum Failure {
    Input(InputError),
    DSquared(String),
    Verify,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<khss_core::DiagramError> for Failure {
    fn from(e: khss_core::DiagramError) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let result = match cli.command {
        Command::Compute { input, common, output, pages } => compute(&input, &common, output, pages),
        Command::Verify { input, decorations, random, random_crossings, faces, seed, max_crossings, swap_types } => {
            let opts = VerifyOpts { decorations, faces, swap: swap_types };
            run_verify(&input, random, random_crossings, seed, max_crossings, &opts)
        }
        Command::Invariance { first, second, common, output } => invariance(&first, &second, &common, output),
        Command::DumpMatrix { input, common, k } => dump_matrix(&input, &common, k),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::DSquared(what)) => {
            eprintln!("internal error: d^2 != 0 for {what}");
            ExitCode::from(EXIT_D_SQUARED)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}

struct Prepared {
    source: Source,
    diagram: LinkDiagram,
    decoration: Decoration,
    cube: Cube,
}

fn prepare(source: Source, basepoint: Option<u32>, common: &Common, selector: &str, seed: u64) -> Result<Prepared, Failure> {
    let diagram = source.diagram(basepoint)?;
    check_size(&diagram, common.max_crossings)?;
    let decoration = decoration(&diagram, selector, seed)?;
    let cube = Cube::new(&diagram);
    Ok(Prepared { source, diagram, decoration, cube })
}

fn complex(p: &Prepared, theory: Theory) -> Result<ChainComplex, Failure> {
    let c = chain_complex(&p.cube, &p.decoration, theory)?;
    if !c.squares_to_zero() {
        return Err(Failure::DSquared(format!("{} ({})", p.source.label(), theory.name())));
    }
    Ok(c)
}

fn compute(input: &InputArgs, common: &Common, output: Output, pages: bool) -> Result<(), Failure> {
    let p = prepare(input.require()?, input.basepoint, common, &common.decoration, common.seed)?;
    let start = Instant::now();
    let c = complex(&p, common.theory)?;
    let delta = homology_by_delta(&c);
    let bigraded = (common.theory == Theory::Khovanov).then(|| homology_bigraded(&c));
    let pages = pages.then(|| spectral_pages(&c, (p.cube.n() + 1).max(2)));
    log::info!("computed in {:.2?}", start.elapsed());
    let r = Report {
        input: p.source.label(),
        theory: common.theory.name().into(),
        crossings: p.diagram.len(),
        decoration: p.decoration.to_string(),
        generators: c.len(),
        delta,
        bigraded,
        pages,
    };
    print!("{}", r.render(output));
    Ok(())
}

struct VerifyOpts {
    decorations: usize,
    faces: usize,
    swap: Option<(u8, u8)>,
}

/// Tally of one named check over many runs.
struct Check {
    name: &'static str,
    runs: usize,
    failures: usize,
    detail: String,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, runs: 0, failures: 0, detail: String::new() }
    }

    fn record(&mut self, ok: bool) {
        self.runs += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

fn verify_diagram(name: &str, d: &LinkDiagram, opts: &VerifyOpts, seed: u64) -> Vec<Check> {
    let table = match opts.swap {
        Some((a, b)) => TypeTable::standard().renumbered(|t| if t == a { b } else if t == b { a } else { t }),
        None => TypeTable::standard().clone(),
    };
    let standard = Rules { table: &table, variant: Variant::Standard };
    let mirror = Rules { table: &table, variant: Variant::Mirror };
    let cube = Cube::new(d);
    let n = cube.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = braid_decoration(d).unwrap_or_else(|_| Decoration::zeros(n));
    let mut decorations = vec![first];
    while decorations.len() < opts.decorations.max(1) {
        decorations.push(Decoration::random(n, &mut rng));
    }

    let mut dd = Check::new("d^2 = 0");
    let mut dd_mirror = Check::new("d'^2 = 0");
    let mut rules = Check::new("configuration rules");
    let mut relation = Check::new("decoration change");
    let mut reduced = Check::new("reduced subcomplex");
    let mut report = verify::RuleReport::default();
    for (k, t) in decorations.iter().enumerate() {
        dd.record(verify::d_squared_vanishes(&cube, t, &standard));
        dd_mirror.record(verify::d_squared_vanishes(&cube, t, &mirror));
        let faces = verify::sample_faces(n, n, opts.faces, &mut rng);
        let mut r = verify::check_rules(&cube, t, &standard, &faces);
        r.merge(&verify::check_rules(&cube, t, &mirror, &faces));
        rules.record(r.violations() == 0);
        report.merge(&r);
        if n > 0 {
            // cycle through the crossings so every flip is exercised
            relation.record(verify::decoration_change(&cube, t, k % n).ok());
        }
        if let Ok(ok) = verify::reduced_closed(&cube, t) {
            reduced.record(ok);
        }
    }
    rules.detail = format!(
        "{} faces, duality {} conjugation {} grading {} filtration {} extension {}",
        report.faces, report.duality, report.conjugation, report.grading, report.filtration, report.extension
    );
    let mut checks = vec![dd, dd_mirror, rules, relation, reduced];
    if d.braid_arcs().is_some() {
        let mut tr = Check::new("transverse cycle");
        tr.record(verify::transverse_cycle_closed(&cube).unwrap_or(false));
        checks.push(tr);
    }
    for c in &mut checks {
        if c.detail.is_empty() {
            c.detail = format!("{} runs", c.runs);
        }
        let status = if c.failures == 0 { "PASS" } else { "FAIL" };
        let failed = if c.failures > 0 { format!(", {} failed", c.failures) } else { String::new() };
        println!("{status}  {name}  {}: {}{failed}", c.name, c.detail);
    }
    checks
}

fn run_verify(
    input: &InputArgs,
    random_count: usize,
    random_crossings: usize,
    seed: u64,
    max_crossings: usize,
    opts: &VerifyOpts,
) -> Result<(), Failure> {
    let mut targets: Vec<(String, LinkDiagram)> = Vec::new();
    match input.source()? {
        Some(s) => {
            let d = s.diagram(input.basepoint)?;
            check_size(&d, max_crossings)?;
            targets.push((s.label(), d));
        }
        None if random_count == 0 => {
            for e in corpus::ENTRIES.iter() {
                let d = e.diagram()?;
                if d.len() <= max_crossings {
                    targets.push((e.name.to_string(), d));
                }
            }
        }
        None => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_count {
        let (s, w, d) = random::braid_closure(5, random_crossings, &mut rng);
        targets.push((format!("braid:{}", random::format_braid(s, &w)), d));
    }
    let mut failed = 0;
    let mut total = 0;
    for (i, (name, d)) in targets.iter().enumerate() {
        let checks = verify_diagram(name, d, opts, seed.wrapping_add(i as u64));
        total += checks.len();
        failed += checks.iter().filter(|c| c.failures > 0).count();
    }
    println!("{} of {total} checks passed on {} diagrams", total - failed, targets.len());
    if failed > 0 {
        Err(Failure::Verify)
    } else {
        Ok(())
    }
}

fn invariance(first: &str, second: &str, common: &Common, output: Output) -> Result<(), Failure> {
    let (a, b) = (Source::parse_spec(first)?, Source::parse_spec(second)?);
    // the same diagram twice compares two random decorations
    let same = a == b;
    let selector = if same && common.decoration == "auto" { "random" } else { common.decoration.as_str() };
    let pa = prepare(a, None, common, selector, common.seed)?;
    let pb = prepare(b, None, common, selector, common.seed.wrapping_add(same as u64))?;
    for p in [&pa, &pb] {
        complex(p, common.theory)?;
    }
    let r = verify::compare((&pa.cube, &pa.decoration), (&pb.cube, &pb.decoration), common.theory)?;
    let verdict = if r.equal() { "equal" } else { "unequal" };
    match output {
        Output::Json => {
            let side = |p: &Prepared, ranks: &khss_core::homology::GradedRanks<i32>| {
                let delta: serde_json::Map<String, serde_json::Value> =
                    ranks.iter().map(|(d, n)| (d.to_string(), json!(n))).collect();
                json!({"input": p.source.label(), "decoration": p.decoration.to_string(), "delta": delta})
            };
            let v = json!({
                "theory": common.theory.name(),
                "first": side(&pa, &r.ranks.0),
                "second": side(&pb, &r.ranks.1),
                "ranks_equal": r.ranks_equal(),
                "pages_equal": r.pages_equal(),
                "result": verdict,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Output::Csv => {
            println!("side,delta,rank");
            for (side, ranks) in [("first", &r.ranks.0), ("second", &r.ranks.1)] {
                for (d, n) in ranks {
                    println!("{side},{d},{n}");
                }
            }
            println!("result,,{verdict}");
        }
        Output::Text => {
            for (p, ranks) in [(&pa, &r.ranks.0), (&pb, &r.ranks.1)] {
                let cells: Vec<String> = ranks.iter().map(|(d, n)| format!("{d}:{n}")).collect();
                println!("{}  [{}]  {{{}}}", p.source.label(), p.decoration, cells.join(", "));
            }
            println!("ranks {}", if r.ranks_equal() { "equal" } else { "unequal" });
            println!("pages {}", if r.pages_equal() { "equal" } else { "unequal" });
            println!("{verdict}");
        }
    }
    Ok(())
}

fn dump_matrix(input: &InputArgs, common: &Common, k: Option<usize>) -> Result<(), Failure> {
    let p = prepare(input.require()?, input.basepoint, common, &common.decoration, common.seed)?;
    let m = match (k, common.theory) {
        (None, theory) => complex(&p, theory)?.d,
        (Some(k), Theory::Khovanov) if k != 1 => {
            return Err(InputError::Usage("the Khovanov theory only has d_1".into()).into());
        }
        (Some(_), Theory::Reduced) => {
            return Err(InputError::Usage("--k is not available for the reduced theory".into()).into());
        }
        (Some(k), theory) => {
            let rules = if theory == Theory::SzaboMirror { Rules::mirror() } else { Rules::standard() };
            p.cube.d_k(&p.decoration, k, &rules)
        }
    };
    print!("{}", m.dump());
    Ok(())
}

use std::io::Read;
use std::path::PathBuf;

use betti_core::betti_one::detect_single_betti_with;
use betti_core::invariants::{invariant_report, InvariantOptions, Sweep};
use betti_core::presentation::{betti_from_graver, presentation_from_betti};
use betti_core::{
    circuits, construct_numerical, factorizations, graver_basis, rank, BigInt, Bound, Matrix, Matrix64, SpanningTree,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::fixture::{compare, load_dir};
use crate::input::{parse_element, parse_list, SemigroupInput};
use crate::render::{self, block_text, elem_text, list_text, pretty};
use crate::verify::{run_suite, Check, SuiteConfig};
use crate::{exit, random, CliError};

#[derive(Debug, Parser)]
#[command(name = "betti", version, about = "Betti elements, presentations and factorization invariants of affine semigroups")]
pub struct Cli {
    /// Machine-readable output; integers are printed as decimal strings.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the semigroup comes from. Without any of these flags a JSON
/// document is read from stdin.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Rows of the generator matrix, e.g. "2 0 1; 0 2 1".
    #[arg(long, conflicts_with_all = ["nums", "input"])]
    pub gens: Option<String>,
    /// Generators of a numerical semigroup, e.g. 30,42,70,105.
    #[arg(long, conflicts_with = "input")]
    pub nums: Option<String>,
    /// JSON file with {"generators": [[...], ...]} or {"numbers": [...]}; "-" is stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl InputArgs {
    fn given(&self) -> bool {
        self.gens.is_some() || self.nums.is_some() || self.input.is_some()
    }

    fn read(&self, stdin: &mut dyn Read) -> Result<SemigroupInput, CliError> {
        if let Some(g) = &self.gens {
            return SemigroupInput::from_gens(g);
        }
        if let Some(n) = &self.nums {
            return SemigroupInput::from_nums(n);
        }
        let text = match &self.input {
            Some(p) if p.as_os_str() != "-" => {
                std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
            }
            _ => {
                let mut s = String::new();
                stdin.read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
                s
            }
        };
        SemigroupInput::from_json_str(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tree {
    Star,
    Path,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all factorizations of an element.
    Factorize {
        #[command(flatten)]
        input: InputArgs,
        /// The element, e.g. "2 2" or 210.
        #[arg(long)]
        element: String,
    },
    /// Betti elements.
    Betti {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Circuits of the kernel congruence.
    Circuits {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Graver basis of the kernel congruence.
    Graver {
        #[command(flatten)]
        input: InputArgs,
    },
    /// A minimal presentation.
    Presentation {
        #[command(flatten)]
        input: InputArgs,
        /// How the components of each Betti element are linked.
        #[arg(long, value_enum, default_value = "star")]
        tree: Tree,
    },
    /// Decide whether the semigroup has a single Betti element.
    CheckSingleBetti {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Numerical semigroup with a single Betti element from pairwise coprime factors.
    Construct {
        /// Factors k_1,...,k_p, each at least 2.
        k: String,
    },
    /// Elasticity, delta set, catenary, omega and tame degrees.
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        /// Sweep every element with coordinate sum up to this bound
        /// (default: three times the largest Betti element).
        #[arg(long)]
        bound: Option<String>,
        /// Run the definitional brute force next to the closed forms.
        #[arg(long, value_enum, default_value = "on")]
        oracle: Toggle,
    },
    /// Run the property suites on an input, a fixture corpus or random instances.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Directory of *.json fixtures.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Number of random instances of each kind.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on every element sweep (coordinate sum).
        #[arg(long)]
        bound: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: exit::SUCCESS }
    }

    fn with_code(stdout: String, code: i32) -> Self {
        Self { stdout, stderr: String::new(), code }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::SUCCESS };
            let text = e.render().to_string();
            return if code == exit::SUCCESS {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Factorize { input, element } => factorize(&input.read(stdin)?.matrix()?, element, json),
        Command::Betti { input } => betti(&input.read(stdin)?.matrix()?, json),
        Command::Circuits { input } => pair_list(&input.read(stdin)?.matrix()?, "circuits", json),
        Command::Graver { input } => pair_list(&input.read(stdin)?.matrix()?, "graver", json),
        Command::Presentation { input, tree } => presentation(&input.read(stdin)?.matrix()?, *tree, json),
        Command::CheckSingleBetti { input } => check_single_betti(&input.read(stdin)?.matrix()?, json),
        Command::Construct { k } => construct(k, json),
        Command::Invariants { input, bound, oracle } => {
            invariants(&input.read(stdin)?.matrix()?, bound.as_deref(), *oracle, json)
        }
        Command::Verify { input, corpus, random, seed, bound } => {
            let cap = bound.as_deref().map(parse_int).transpose()?;
            let given = if input.given() { Some(input.read(stdin)?) } else { None };
            verify(given, corpus.as_ref(), *random, *seed, cap, json)
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt, CliError> {
    let mut v = parse_list(s)?;
    if v.len() != 1 || v[0] < BigInt::from(0) {
        return Err(CliError::Parse(format!("expected one nonnegative integer, found {s:?}")));
    }
    Ok(v.remove(0))
}

fn factorize(a: &Matrix, element: &str, json: bool) -> Result<Outcome, CliError> {
    let e = parse_element(element, a)?;
    let z = factorizations(a, &e)?;
    let code = if z.is_empty() { exit::PROPERTY_FALSE } else { exit::SUCCESS };
    let out = if json {
        pretty(&json!({
            "element": render::elem(&e),
            "member": !z.is_empty(),
            "factorizations": z.iter().map(render::fact).collect::<Vec<_>>(),
            "lengths": z.iter().map(|u| render::int(&u.total())).collect::<Vec<_>>(),
        }))
    } else if z.is_empty() {
        format!("{} is not in the semigroup\n", elem_text(&e))
    } else {
        let mut s = format!("{} has {} factorization(s)\n", elem_text(&e), z.len());
        for u in z.iter() {
            s.push_str(&format!("{u}  length {}\n", u.total()));
        }
        s
    };
    Ok(Outcome::with_code(out, code))
}

fn betti(a: &Matrix, json: bool) -> Result<Outcome, CliError> {
    let b = betti_core::betti_elements(a)?;
    let out = if json {
        pretty(&json!({ "betti": b.iter().map(render::elem).collect::<Vec<_>>() }))
    } else {
        let mut s = format!("{} Betti element(s)\n", b.len());
        for e in b.iter() {
            s.push_str(&format!("{}\n", elem_text(e)));
        }
        s
    };
    Ok(Outcome::ok(out))
}

fn pair_list(a: &Matrix, which: &str, json: bool) -> Result<Outcome, CliError> {
    let pairs: Vec<betti_core::Pair> = if which == "circuits" {
        circuits(a).iter().cloned().collect()
    } else {
        graver_basis(a)?.iter().cloned().collect()
    };
    let out = if json {
        pretty(&json!({ which: pairs.iter().map(render::pair).collect::<Vec<_>>() }))
    } else {
        let mut s = format!("{} {which} pair(s)\n", pairs.len());
        for p in &pairs {
            s.push_str(&format!("{p}\n"));
        }
        s
    };
    Ok(Outcome::ok(out))
}

fn presentation(a: &Matrix, tree: Tree, json: bool) -> Result<Outcome, CliError> {
    let tree = match tree {
        Tree::Star => SpanningTree::Star,
        Tree::Path => SpanningTree::Path,
    };
    let b = betti_core::betti_elements(a)?;
    let pres = presentation_from_betti(a, &b, tree)?;
    let ci = pres.nu() == a.cols() - rank(a);
    let out = if json {
        pretty(&json!({
            "nu": pres.nu().to_string(),
            "complete_intersection": ci,
            "pairs": pres.iter().map(render::pair).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = format!("nu = {}{}\n", pres.nu(), if ci { " (complete intersection)" } else { "" });
        for p in pres.iter() {
            s.push_str(&format!("{p}\n"));
        }
        s
    };
    Ok(Outcome::ok(out))
}

fn check_single_betti(a: &Matrix, json: bool) -> Result<Outcome, CliError> {
    let graver = graver_basis(a)?;
    let cert = detect_single_betti_with(a, &graver)?;
    let Some(cert) = cert else {
        let b = betti_from_graver(a, &graver)?;
        let out = if json {
            pretty(&json!({ "single_betti": false, "betti": b.iter().map(render::elem).collect::<Vec<_>>() }))
        } else {
            let items: Vec<String> = b.iter().map(elem_text).collect();
            format!("not single-Betti\nBetti elements ({}): {}\n", b.len(), items.join(" "))
        };
        return Ok(Outcome::with_code(out, exit::PROPERTY_FALSE));
    };
    let out = if json {
        let numerical = cert.numerical.as_ref().map(|w| {
            json!({ "n": render::ints(&w.n), "k": render::ints(&w.k), "c": render::ints(&w.c), "d": render::int(&w.d) })
        });
        pretty(&json!({
            "single_betti": true,
            "d": render::elem(&cert.d),
            "factorizations_of_d": cert.zd.iter().map(render::fact).collect::<Vec<_>>(),
            "petals": render::indices(&cert.petals),
            "numerical": numerical,
        }))
    } else {
        let mut s = format!("single Betti element d = {}\n", elem_text(&cert.d));
        let zd: Vec<String> = cert.zd.iter().map(|u| u.to_string()).collect();
        s.push_str(&format!("Z(d): {}\n", zd.join(" ")));
        let petals: Vec<String> = cert.petals.iter().map(|p| block_text(p)).collect();
        s.push_str(&format!("petals: {}\n", petals.join(" ")));
        if let Some(w) = &cert.numerical {
            s.push_str(&format!("generators: {}\nk: {}\nc: {}\n", list_text(&w.n), list_text(&w.k), list_text(&w.c)));
        }
        s
    };
    Ok(Outcome::ok(out))
}

fn construct(k: &str, json: bool) -> Result<Outcome, CliError> {
    let k = parse_list(k)?;
    let (_, w) = construct_numerical(&k)?;
    let out = if json {
        pretty(&json!({ "generators": render::ints(&w.n), "k": render::ints(&w.k), "c": render::ints(&w.c), "d": render::int(&w.d) }))
    } else {
        format!("generators: {}\nk: {}\nd: {}\n", list_text(&w.n), list_text(&w.k), w.d)
    };
    Ok(Outcome::ok(out))
}

fn invariants(a: &Matrix, bound: Option<&str>, oracle: Toggle, json: bool) -> Result<Outcome, CliError> {
    let sweep = match bound {
        Some(b) => Sweep::Custom(Bound::CoordinateSum(parse_int(b)?)),
        None => Sweep::Default,
    };
    let options = InvariantOptions { brute_force: oracle == Toggle::On, sweep, ..InvariantOptions::default() };
    let r = invariant_report(a, &options)?;
    let inv = &r.invariants;
    let method = r.provenance.to_string();
    let out = if json {
        pretty(&json!({
            "elasticity": render::ratio(&inv.elasticity),
            "delta_max": inv.delta_max.as_ref().map(render::int),
            "catenary": render::int(&inv.catenary),
            "omega": render::int(&inv.omega),
            "tame": render::int(&inv.tame),
            "method": method,
        }))
    } else {
        let dm = inv.delta_max.as_ref().map(|d| d.to_string()).unwrap_or_else(|| "none".into());
        format!(
            "elasticity {}\ndelta_max {dm}\ncatenary {}\nomega {}\ntame {}\nmethod {method}\n",
            render::ratio(&inv.elasticity),
            inv.catenary,
            inv.omega,
            inv.tame
        )
    };
    Ok(Outcome::ok(out))
}

struct InstanceResult {
    name: String,
    checks: Vec<Check>,
}

impl InstanceResult {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn to_i64_cap(cap: Option<&BigInt>) -> Option<i64> {
    cap.map(|c| num_traits::ToPrimitive::to_i64(c).unwrap_or(i64::MAX))
}

fn verify(
    input: Option<SemigroupInput>,
    corpus: Option<&PathBuf>,
    random_count: Option<usize>,
    seed: u64,
    cap: Option<BigInt>,
    json: bool,
) -> Result<Outcome, CliError> {
    if input.is_none() && corpus.is_none() && random_count.is_none() {
        return Err(CliError::Parse("verify needs an input, --corpus or --random".into()));
    }
    let big_config = SuiteConfig { sweep_cap: cap.clone() };
    let mut results = Vec::new();
    if let Some(inp) = input {
        let a = inp.matrix()?;
        let suite = run_suite(&a, &big_config)?;
        results.push(InstanceResult { name: "input".into(), checks: suite.checks });
    }
    if let Some(dir) = corpus {
        for fx in load_dir(dir)? {
            let a = fx.input.matrix()?;
            let suite = run_suite(&a, &big_config)?;
            let mut checks = suite.checks.clone();
            checks.extend(compare(&a, &fx.expected, &suite)?);
            results.push(InstanceResult { name: fx.name, checks });
        }
    }
    if let Some(count) = random_count {
        let small_config = SuiteConfig { sweep_cap: to_i64_cap(cap.as_ref()).or(Some(RANDOM_SWEEP_CAP)) };
        let mut rng = random::rng(seed);
        for _ in 0..count {
            let k = random::coprime_tuple(&mut rng);
            let (a, _) = construct_numerical(&k)?;
            let suite = run_suite(&a, &small_config)?;
            let mut checks = suite.checks;
            checks.push(Check::new("random.single_betti", suite.facts.certificate.is_some(), String::new()));
            results.push(InstanceResult { name: format!("coprime k = {}", list_text(&k)), checks });
        }
        for _ in 0..count {
            let n = random::non_single_betti(&mut rng);
            let a = Matrix64::numerical(n.clone())?;
            let suite = run_suite(&a, &small_config)?;
            let mut checks = suite.checks;
            checks.push(Check::new("random.not_single_betti", suite.facts.certificate.is_none(), String::new()));
            results.push(InstanceResult { name: format!("numerical {}", list_text(&n)), checks });
        }
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    let out = if json {
        let instances: Vec<Value> = results
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "passed": r.passed(),
                    "checks": r.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
                })
            })
            .collect();
        pretty(&json!({ "passed": failed == 0, "instances": instances }))
    } else {
        let mut s = String::new();
        for r in &results {
            s.push_str(&format!("{} {}\n", if r.passed() { "PASS" } else { "FAIL" }, r.name));
            for c in r.checks.iter().filter(|c| !c.passed) {
                s.push_str(&format!("  violated {}: {}\n", c.name, c.detail));
            }
        }
        s.push_str(&format!("{} instance(s), {} failed\n", results.len(), failed));
        s
    };
    Ok(Outcome::with_code(out, if failed == 0 { exit::SUCCESS } else { exit::PROPERTY_FALSE }))
}

/// Default sweep cap for random instances, whose Betti elements can be large.
pub const RANDOM_SWEEP_CAP: i64 = 1000;

//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use betti_cli::fixture::Fixture;
use betti_core::domain::symmetric_closure;
use betti_core::invariants::lengths;
use betti_core::presentation::verify_gluing_propositions;
use betti_core::{
    betti_elements, circuits, detect_numerical, detect_single_betti, distance, factorizations, graver_basis,
    invariant_report, is_gluing, minimal_presentation, petal_decomposition, rank, BigInt, Bipartition, Bound, Elem,
    Element, Fact, Fact64, Factorization, InvariantOptions, Matrix, Matrix64, Ratio, Sweep,
};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_matrix(name: &str) -> Matrix {
    Fixture::load(&corpus_dir().join(format!("{name}.json"))).unwrap().input.matrix().unwrap()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn e(v: &[i64]) -> Elem {
    Element::new(big(v))
}

fn f(v: &[i64]) -> Fact {
    Factorization::new(big(v))
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn example_one() -> Outcome {
    let a = corpus_matrix("example1");
    let betti = betti_elements(&a).map_err(|x| x.to_string())?;
    ensure(*betti.elements() == BTreeSet::from([e(&[2, 2])]), format!("Betti {betti:?}"))?;
    let pres = minimal_presentation(&a).map_err(|x| x.to_string())?;
    let want = BTreeSet::from([(f(&[1, 1, 0]), f(&[0, 0, 2])), (f(&[0, 0, 2]), f(&[1, 1, 0]))]);
    ensure(symmetric_closure(pres.iter()) == want, format!("presentation {pres:?}"))?;
    ensure(pres.nu() == 1, format!("nu = {}", pres.nu()))?;
    let part = Bipartition::new(3, vec![0, 1], vec![2]).unwrap();
    ensure(is_gluing(&a, &part, &e(&[2, 2])).unwrap_or(false), "{1,2}|{3} is not a gluing at (2,2)")?;
    let g = verify_gluing_propositions(&a, &part, &e(&[2, 2])).map_err(|x| x.to_string())?;
    ensure(
        g.nu_identity_holds() && (g.nu, g.nu_first, g.nu_second) == (1, 0, 0),
        format!("nu identity {} = {} + {} + 1", g.nu, g.nu_first, g.nu_second),
    )?;
    Ok("Betti {(2,2)}, nu = 1 = 0 + 0 + 1".into())
}

fn k4() -> Outcome {
    let a = corpus_matrix("k4");
    let betti = betti_elements(&a).map_err(|x| x.to_string())?;
    ensure(*betti.elements() == BTreeSet::from([e(&[1, 1, 1, 1])]), format!("Betti {betti:?}"))?;
    let cert = detect_single_betti(&a).map_err(|x| x.to_string())?.ok_or("no certificate")?;
    ensure(cert.petals == vec![vec![0, 5], vec![1, 4], vec![2, 3]], format!("petals {:?}", cert.petals))?;
    let free = petal_decomposition(&a, &cert).unwrap().iter().all(|m| rank(m) == m.cols());
    ensure(free, "a petal is not free")?;
    let report = invariant_report(&a, &InvariantOptions::default()).map_err(|x| x.to_string())?;
    ensure(report.provenance.closed_form && report.provenance.brute_force.is_some(), "both methods did not run")?;
    let inv = &report.invariants;
    let two = BigInt::from(2);
    ensure(
        inv.elasticity == Ratio::from_integer(BigInt::from(1))
            && inv.delta_max.is_none()
            && inv.catenary == two
            && inv.omega == two
            && inv.tame == two,
        format!("invariants {inv:?}"),
    )?;
    Ok(format!("petals {{1,6}} {{2,5}} {{3,4}}, rho = 1, c = omega = t = 2 ({})", report.provenance))
}

fn graph_6x7() -> Outcome {
    let a = corpus_matrix("graph6x7");
    let betti = betti_elements(&a).map_err(|x| x.to_string())?;
    let want = BTreeSet::from([e(&[1, 1, 0, 0, 1, 1]), e(&[0, 1, 1, 1, 1, 0])]);
    ensure(*betti.elements() == want, format!("Betti {betti:?}"))?;
    ensure(detect_single_betti(&a).map_err(|x| x.to_string())?.is_none(), "detected as single-Betti")?;
    let graver = graver_basis(&a).map_err(|x| x.to_string())?;
    let c = symmetric_closure(circuits(&a).iter());
    ensure(c == symmetric_closure(graver.iter()), "circuits differ from the Graver basis")?;
    Ok(format!("two Betti elements, circuits = Graver ({} pairs)", c.len() / 2))
}

fn ns_example() -> Outcome {
    let n = big(&[30, 42, 70, 105]);
    let w = detect_numerical(&n).map_err(|x| x.to_string())?.ok_or("no witness")?;
    ensure(w.k == big(&[7, 5, 3, 2]) && w.c == w.k && w.d == BigInt::from(210), format!("witness {w:?}"))?;
    let a = Matrix::numerical(n).unwrap();
    let z: BTreeSet<Fact> = factorizations(&a, &e(&[210])).unwrap().iter().cloned().collect();
    let want = BTreeSet::from([f(&[7, 0, 0, 0]), f(&[0, 5, 0, 0]), f(&[0, 0, 3, 0]), f(&[0, 0, 0, 2])]);
    ensure(z == want, format!("Z(210) = {z:?}"))?;
    let pres = minimal_presentation(&a).map_err(|x| x.to_string())?;
    let star = pres.pairs().iter().flat_map(|p| [&p.left, &p.right]).any(|root| {
        pres.pairs().iter().all(|p| p.left == *root || p.right == *root)
    });
    ensure(pres.nu() == 3 && star, format!("presentation {pres:?}"))?;
    let l = lengths(&a, &e(&[210])).unwrap();
    ensure(l.delta() == big(&[1, 2]).into_iter().collect::<BTreeSet<_>>(), format!("Delta(210) = {:?}", l.delta()))?;
    let opts = InvariantOptions { sweep: Sweep::Custom(Bound::CoordinateSum(BigInt::from(630))), ..Default::default() };
    let report = invariant_report(&a, &opts).map_err(|x| x.to_string())?;
    let prov = report.provenance.to_string();
    ensure(prov == "closed-form+brute-force(sum<=630)", format!("provenance {prov}"))?;
    let inv = &report.invariants;
    let seven = BigInt::from(7);
    ensure(
        inv.elasticity == Ratio::new(seven.clone(), BigInt::from(2))
            && inv.delta_max == Some(BigInt::from(2))
            && inv.catenary == seven
            && inv.omega == seven
            && inv.tame == seven,
        format!("invariants {inv:?}"),
    )?;
    Ok(format!("k = (7,5,3,2), d = 210, rho = 7/2, max Delta = 2, c = omega = t = 7 ({prov})"))
}

/// Runs `verify --random 50` in process and groups its checks by criterion.
struct RandomRun {
    instances: Vec<Value>,
}

impl RandomRun {
    fn new() -> Self {
        let args = ["betti", "--json", "verify", "--random", "50", "--seed", "0"];
        let out = betti_cli::run(args, &mut &b""[..]);
        let v: Value = serde_json::from_str(&out.stdout).expect("verify prints JSON");
        Self { instances: v["instances"].as_array().expect("instances").clone() }
    }

    fn judge(&self, names: &[&str], required: &[&str]) -> Outcome {
        let mut seen = 0usize;
        let mut counts = vec![0usize; required.len()];
        for inst in &self.instances {
            for c in inst["checks"].as_array().unwrap() {
                let name = c["name"].as_str().unwrap();
                if !names.contains(&name) {
                    continue;
                }
                seen += 1;
                if let Some(i) = required.iter().position(|r| *r == name) {
                    counts[i] += 1;
                }
                if c["passed"] != Value::Bool(true) {
                    return Err(format!("{}: {name} {}", inst["name"].as_str().unwrap(), c["detail"]));
                }
            }
        }
        let ran: Vec<String> = required.iter().zip(&counts).map(|(r, n)| format!("{r} x{n}")).collect();
        ensure(counts.iter().all(|&n| n > 0), format!("checks missing: {ran:?}"))?;
        Ok(format!("{} instances, {seen} checks ({})", self.instances.len(), ran.join(", ")))
    }
}

fn three_way(run: &RandomRun) -> Outcome {
    ensure(run.instances.len() == 100, format!("{} instances", run.instances.len()))?;
    run.judge(
        &["main.three_way", "random.single_betti", "random.not_single_betti"],
        &["main.three_way", "random.single_betti", "random.not_single_betti"],
    )
}

fn closed_form_and_chain(run: &RandomRun) -> Outcome {
    run.judge(&["main2.closed_form", "chain.inequality"], &["main2.closed_form", "chain.inequality"])
}

fn unificadora(run: &RandomRun) -> Outcome {
    let names = ["unificadora.sweep", "unificadora.decompose", "single.disjoint_supports"];
    run.judge(&names, &names)
}

fn random_fact(rng: &mut ChaCha8Rng, p: usize) -> Fact64 {
    Factorization::new((0..p).map(|_| rng.gen_range(0..=6)).collect())
}

/// Solutions of `A u = a` by looping over a box, the last coordinate solved.
fn naive_factorizations(cols: &[Vec<i64>], a: &[i64]) -> BTreeSet<Vec<i64>> {
    let top = *a.iter().max().unwrap();
    let p = cols.len();
    let mut out = BTreeSet::new();
    let mut u = vec![0i64; p];
    loop {
        let partial: Vec<i64> = (0..a.len()).map(|r| (0..p - 1).map(|j| cols[j][r] * u[j]).sum()).collect();
        let rest: Vec<i64> = a.iter().zip(&partial).map(|(x, y)| x - y).collect();
        let last = &cols[p - 1];
        for t in 0..=top {
            if rest.iter().zip(last).all(|(r, c)| *r == c * t) {
                u[p - 1] = t;
                out.insert(u.clone());
            }
        }
        u[p - 1] = 0;
        let mut j = p - 1;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if u[j] < top {
                u[j] += 1;
                break;
            }
            u[j] = 0;
        }
    }
}

fn metric_and_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let p = rng.gen_range(1..=5);
        let (u, v, w) = (random_fact(&mut rng, p), random_fact(&mut rng, p), random_fact(&mut rng, p));
        let d = |x: &Fact64, y: &Fact64| distance(x, y).unwrap();
        ensure(d(&u, &u) == 0 && (d(&u, &v) == 0) == (u == v), format!("identity fails on {u}, {v}"))?;
        ensure(d(&u, &v) == d(&v, &u), format!("symmetry fails on {u}, {v}"))?;
        ensure(d(&u, &w) <= d(&u, &v) + d(&v, &w), format!("triangle fails on {u}, {v}, {w}"))?;
    }

    let mut pairs = 0;
    while pairs < 100 {
        let p = rng.gen_range(1..=4);
        let rows = rng.gen_range(1..=2);
        let lo = if rows == 1 { 3 } else { 0 };
        let cols: Vec<Vec<i64>> = (0..p).map(|_| (0..rows).map(|_| rng.gen_range(lo..=12)).collect()).collect();
        if cols.iter().any(|c| c.iter().all(|&x| x == 0)) || cols.iter().collect::<BTreeSet<_>>().len() < p {
            continue;
        }
        let target: Vec<i64> = (0..rows).map(|_| rng.gen_range(0..=200)).collect();
        let a = Matrix64::from_columns(cols.clone()).unwrap();
        let got: BTreeSet<Vec<i64>> =
            factorizations(&a, &Element::new(target.clone())).unwrap().iter().map(|u| u.coords().to_vec()).collect();
        ensure(got == naive_factorizations(&cols, &target), format!("Z({target:?}) differs for columns {cols:?}"))?;
        pairs += 1;
    }

    let mut lists = 0;
    while lists < 50 {
        let p = rng.gen_range(2..=5);
        let mut n: BTreeSet<i64> = BTreeSet::new();
        while n.len() < p {
            n.insert(rng.gen_range(2..=60));
        }
        let n: Vec<i64> = n.into_iter().collect();
        if n.iter().fold(0, |g, x| g.gcd(x)) != 1 {
            continue;
        }
        let a = Matrix64::numerical(n.clone()).unwrap();
        let mut want = BTreeSet::new();
        for i in 0..p {
            for j in i + 1..p {
                let g = n[i].gcd(&n[j]);
                let mut x = vec![0; p];
                let mut y = vec![0; p];
                x[i] = n[j] / g;
                y[j] = n[i] / g;
                want.insert((Factorization::new(x.clone()), Factorization::new(y.clone())));
                want.insert((Factorization::new(y), Factorization::new(x)));
            }
        }
        ensure(symmetric_closure(circuits(&a).iter()) == want, format!("circuits of {n:?}"))?;
        lists += 1;
    }
    Ok("1000 metric triples, 100 factorization sets, 50 circuit sets".into())
}

fn negative_controls() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_betti");
    let dir = std::env::temp_dir().join(format!("betti-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|x| x.to_string())?;
    let text = std::fs::read_to_string(corpus_dir().join("ns_30_42_70_105.json")).unwrap();
    let mut fx: Value = serde_json::from_str(&text).unwrap();
    fx["expected"]["invariants"]["catenary"] = Value::from(6);
    std::fs::write(dir.join("corrupted.json"), serde_json::to_string_pretty(&fx).unwrap()).unwrap();
    let out = Command::new(bin).arg("verify").arg("--corpus").arg(&dir).output().map_err(|x| x.to_string())?;
    std::fs::remove_dir_all(&dir).ok();
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(!out.status.success(), "corrupted corpus verified")?;
    ensure(stdout.contains("violated expected.invariants.catenary"), format!("output does not name the property: {stdout}"))?;

    let a = Matrix::numerical(big(&[3, 5, 7])).unwrap();
    let betti = betti_elements(&a).map_err(|x| x.to_string())?;
    ensure(betti.len() >= 2, format!("Betti {betti:?}"))?;
    ensure(detect_single_betti(&a).map_err(|x| x.to_string())?.is_none(), "(3,5,7) detected as single-Betti")?;
    let cli = Command::new(bin).args(["check-single-betti", "--nums", "3,5,7"]).output().map_err(|x| x.to_string())?;
    let said = String::from_utf8_lossy(&cli.stdout);
    ensure(cli.status.code() == Some(2) && said.starts_with("not single-Betti"), format!("check-single-betti said {said:?}"))?;
    Ok(format!("corrupted fixture rejected (exit {:?}); (3,5,7) has {} Betti elements", out.status.code(), betti.len()))
}

fn main() {
    let run = RandomRun::new();
    let criteria: Vec<Criterion> = vec![
        ("example 1", Box::new(example_one)),
        ("K4", Box::new(k4)),
        ("6x7 graph", Box::new(graph_6x7)),
        ("<30,42,70,105>", Box::new(ns_example)),
        ("three-way agreement", Box::new(|| three_way(&run))),
        ("closed forms and chain", Box::new(|| closed_form_and_chain(&run))),
        ("sweep below 3d", Box::new(|| unificadora(&run))),
        ("metric and oracles", Box::new(metric_and_oracles)),
        ("negative controls", Box::new(negative_controls)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

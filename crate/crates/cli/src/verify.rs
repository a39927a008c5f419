//! Theorem-level property suites run on one semigroup.

use std::collections::BTreeSet;

use betti_core::betti_one::{
    criterion_betti, criterion_circuits, criterion_gluing, criterion_gluing_at, detect_single_betti_with,
};
use betti_core::domain::{dot, symmetric_closure};
use betti_core::enumeration::MembershipCache;
use betti_core::invariants::{brute_force, closed_form, default_sweep, LocalInvariants};
use betti_core::presentation::{
    betti_from_graver, factorization_components, first_unlinked_element, in_kernel_congruence,
    presentation_from_betti, verify_gluing_propositions, GluingReport,
};
use betti_core::{
    circuits, decompose_with, elements_below, factorizations, factorizations_below, graver_basis, rank, Bipartition, BettiSet, Bound, CircuitSet,
    Element, Error, GeneratorMatrix, GraverBasis, Invariants, Presentation, Scalar, SingleBettiCertificate,
    SpanningTree, ThreeWayVerdict,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig<T> {
    /// Caps every element sweep (coordinate sum); `None` keeps the default
    /// of three times the largest Betti element.
    pub sweep_cap: Option<T>,
}

impl<T> Default for SuiteConfig<T> {
    fn default() -> Self {
        Self { sweep_cap: None }
    }
}

/// Everything computed while running the suite.
#[derive(Clone, Debug)]
pub struct Facts<T> {
    pub graver: GraverBasis<T>,
    pub betti: BettiSet<T>,
    pub circuits: CircuitSet<T>,
    pub presentation: Presentation<T>,
    pub verdict: ThreeWayVerdict<T>,
    pub gluing: Option<(Bipartition, Element<T>)>,
    pub certificate: Option<SingleBettiCertificate<T>>,
    pub invariants: Invariants<T>,
    pub sweep: Bound<T>,
}

#[derive(Clone, Debug)]
pub struct Suite<T> {
    pub checks: Vec<Check>,
    pub facts: Facts<T>,
}

impl<T> Suite<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn capped<T: Scalar>(bound: Bound<T>, cap: Option<&T>) -> Bound<T> {
    match (bound, cap) {
        (Bound::CoordinateSum(s), Some(c)) => Bound::CoordinateSum(s.min(c.clone())),
        (b, _) => b,
    }
}

pub fn run_suite<T: Scalar>(a: &GeneratorMatrix<T>, config: &SuiteConfig<T>) -> Result<Suite<T>, Error> {
    let mut checks = Vec::new();
    let p = a.cols();
    let graver = graver_basis(a)?;
    let betti = betti_from_graver(a, &graver)?;
    let circ = circuits(a);
    let sweep = capped(default_sweep(&betti), config.sweep_cap.as_ref());

    let mut bad = Vec::new();
    for g in graver.iter() {
        if !in_kernel_congruence(a, g)? || !g.has_disjoint_supports() || g.left == g.right {
            bad.push(g.to_string());
        }
    }
    checks.push(Check::new("graver.kernel_pairs", bad.is_empty(), bad.join(" ")));

    let grav_sym = symmetric_closure(graver.iter());
    let circ_sym = symmetric_closure(circ.iter());
    checks.push(Check::new(
        "circuits.within_graver",
        circ_sym.is_subset(&grav_sym),
        format!("{} circuits, {} Graver elements", circ.len(), graver.len()),
    ));

    let mut connected = Vec::new();
    for b in betti.iter() {
        if factorization_components(&factorizations(a, b)?).len() < 2 {
            connected.push(b.to_string());
        }
    }
    checks.push(Check::new("betti.disconnected", connected.is_empty(), connected.join(" ")));

    let star = presentation_from_betti(a, &betti, SpanningTree::Star)?;
    let path = presentation_from_betti(a, &betti, SpanningTree::Path)?;
    let r = rank(a);
    checks.push(Check::new(
        "presentation.size",
        star.nu() == path.nu() && star.nu() >= p - r,
        format!("nu = {} (path {}), p - rank = {}", star.nu(), path.nu(), p - r),
    ));
    let unlinked = first_unlinked_element(a, star.pairs(), sweep.clone())?;
    checks.push(Check::new(
        "presentation.generates",
        unlinked.is_none(),
        unlinked.map(|e| format!("factorizations of {e} not linked")).unwrap_or_default(),
    ));

    let gluing = criterion_gluing(a)?;
    let verdict = ThreeWayVerdict {
        betti: criterion_betti(a, &graver)?,
        circuits: criterion_circuits(a, &graver)?,
        gluing: gluing.as_ref().map(|(_, d)| d.clone()),
    };
    let show = |x: &Option<Element<T>>| x.as_ref().map(|e| e.to_string()).unwrap_or_else(|| "none".into());
    checks.push(Check::new(
        "main.three_way",
        verdict.agree(),
        format!("(a) {} (b) {} (c) {}", show(&verdict.betti), show(&verdict.circuits), show(&verdict.gluing)),
    ));

    let certificate = match detect_single_betti_with(a, &graver) {
        Ok(c) => c,
        Err(Error::Inconsistent(msg)) => {
            checks.push(Check::new("single.certificate", false, msg));
            None
        }
        Err(e) => return Err(e),
    };

    let invariants = brute_force(a, &graver, &betti, Some(&sweep), None)?;
    if !graver.is_empty() {
        checks.push(Check::new(
            "chain.inequality",
            invariants.chain_holds(),
            format!("c = {}, omega = {}, t = {}", invariants.catenary, invariants.omega, invariants.tame),
        ));
    }

    if let Some((part, d)) = &gluing {
        let report = verify_gluing_propositions(a, part, d)?;
        checks.push(gluing_check(&report));
    }

    if let Some(cert) = &certificate {
        single_betti_checks(a, cert, &invariants, &sweep, &mut checks)?;
    }

    Ok(Suite {
        checks,
        facts: Facts {
            graver,
            betti,
            circuits: circ,
            presentation: star,
            verdict,
            gluing,
            certificate,
            invariants,
            sweep,
        },
    })
}

fn gluing_check<T: Scalar>(r: &GluingReport<T>) -> Check {
    Check::new(
        "gluing.propositions",
        r.nu_identity_holds() && r.betti_identity_holds(),
        format!("nu {} = {} + {} + 1; Betti identity {}", r.nu, r.nu_first, r.nu_second, r.betti_identity_holds()),
    )
}

fn single_betti_checks<T: Scalar>(
    a: &GeneratorMatrix<T>,
    cert: &SingleBettiCertificate<T>,
    brute: &Invariants<T>,
    sweep: &Bound<T>,
    checks: &mut Vec<Check>,
) -> Result<(), Error> {
    let p = a.cols();
    let top = cert.max_length();
    let closed = closed_form(cert);
    checks.push(Check::new(
        "main2.closed_form",
        brute.catenary == top && brute.omega == top && brute.tame == top && *brute == closed,
        format!(
            "max L(d) = {top}; brute force c = {}, omega = {}, t = {}, rho = {}, max delta = {:?}",
            brute.catenary, brute.omega, brute.tame, brute.elasticity, brute.delta_max
        ),
    ));

    let zd = cert.zd.factorizations();
    let overlapping = zd
        .iter()
        .enumerate()
        .any(|(i, u)| zd[i + 1..].iter().any(|v| !dot(u, v).is_zero()));
    checks.push(Check::new("single.disjoint_supports", !overlapping, format!("#Z(d) = {}", zd.len())));

    let covered: BTreeSet<usize> = cert.petals.iter().flatten().copied().collect();
    let sizes: usize = cert.petals.iter().map(Vec::len).sum();
    let mut free = true;
    for petal in &cert.petals {
        free &= rank(&a.select(petal)?) == petal.len();
    }
    checks.push(Check::new(
        "single.petals",
        free && sizes == p && covered.len() == p,
        format!("{} petals", cert.petals.len()),
    ));

    let split = criterion_gluing_at(a, &cert.d)?;
    checks.push(Check::new("single.gluing_at_d", split.is_some(), String::new()));

    if let Some(w) = &cert.numerical {
        checks.push(Check::new("numerical.product_form", w.check(), format!("k = {:?}", w.k)));
    }

    // Corollary and delta localization over the sweep.
    let rho = &closed.elasticity;
    let mut worst = String::new();
    for e in elements_below(a, sweep.clone())? {
        let l = LocalInvariants::of(&factorizations(a, &e)?);
        if l.lengths.elasticity() > *rho {
            worst = format!("rho({e}) = {} exceeds {rho}", l.lengths.elasticity());
            break;
        }
        if let Some(dm) = l.delta_max() {
            if closed.delta_max.as_ref().is_none_or(|c| dm > *c) {
                worst = format!("max delta({e}) = {dm} exceeds max delta(d)");
                break;
            }
        }
    }
    checks.push(Check::new("elasticity_delta.localization", worst.is_empty(), worst));

    checks.push(unificadora_sweep(a, cert)?);
    checks.push(decomposition_sweep(a, cert)?);
    Ok(())
}

/// `#Z(a) > 1 ⇔ a - d ∈ S` for every `a ≤ 3d`. Numerical instances use a
/// table of factorization counts capped at two; affine ones enumerate.
fn unificadora_sweep<T: Scalar>(a: &GeneratorMatrix<T>, cert: &SingleBettiCertificate<T>) -> Result<Check, Error> {
    const NAME: &str = "unificadora.sweep";
    let three_d = cert.d.scale(&T::from_count(3));
    if let (Some(n), Some(top)) = (a.numbers(), three_d.coords()[0].to_usize()) {
        let d = cert.d.coords()[0].to_usize().expect("d <= 3d fits");
        if let Some(n) = n.iter().map(|x| x.to_usize()).collect::<Option<Vec<usize>>>() {
            let mut count = vec![0u8; top + 1];
            count[0] = 1;
            for &g in &n {
                for x in g..=top {
                    count[x] = (count[x] + count[x - g]).min(2);
                }
            }
            let bad = (0..=top).find(|&x| (count[x] > 1) != (x >= d && count[x - d] > 0));
            return Ok(Check::new(
                NAME,
                bad.is_none(),
                bad.map(|x| format!("fails at {x}")).unwrap_or_else(|| format!("values up to {top}")),
            ));
        }
    }
    let mut cache = MembershipCache::new(a);
    let mut seen = 0usize;
    for e in elements_below(a, Bound::Componentwise(three_d))? {
        seen += 1;
        let many = factorizations(a, &e)?.len() > 1;
        if many != cache.contains_difference(&e, &cert.d) {
            return Ok(Check::new(NAME, false, format!("fails at {e}")));
        }
    }
    Ok(Check::new(NAME, true, format!("{seen} elements")))
}

/// Decompositions reconstruct every factorization, leave a uniquely
/// factored remainder, and depend only on the element, for every `a ≤ 3d`.
fn decomposition_sweep<T: Scalar>(a: &GeneratorMatrix<T>, cert: &SingleBettiCertificate<T>) -> Result<Check, Error> {
    const NAME: &str = "unificadora.decompose";
    let table = factorizations_below(a, &Bound::Componentwise(cert.d.scale(&T::from_count(3))))?;
    let count = |b: &Element<T>| Ok(table.get(b).map_or(0, |z| z.len()));
    for (e, z) in &table {
        let mut key = None;
        for u in z.iter() {
            let dec = decompose_with(a, &cert.zd, u, count)?;
            if dec.reconstruct(&cert.zd) != *u {
                return Ok(Check::new(NAME, false, format!("bad decomposition of {u}")));
            }
            let k = (dec.a, dec.b);
            if key.as_ref().is_some_and(|prev| *prev != k) {
                return Ok(Check::new(NAME, false, format!("(a, b) depends on the factorization of {e}")));
            }
            key = Some(k);
        }
    }
    Ok(Check::new(NAME, true, format!("{} elements", table.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use betti_core::Matrix64;

    #[test]
    fn suites_pass_on_small_instances() {
        for n in [vec![2, 3], vec![30, 42, 70, 105], vec![3, 5, 7], vec![12, 15, 20]] {
            let a = Matrix64::numerical(n.clone()).unwrap();
            let s = run_suite(&a, &SuiteConfig::default()).unwrap();
            assert!(s.passed(), "{n:?}: {:?}", s.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
        let a = Matrix64::from_rows(vec![vec![2, 0, 1], vec![0, 2, 1]]).unwrap();
        let s = run_suite(&a, &SuiteConfig::default()).unwrap();
        assert!(s.passed());
        assert!(s.checks.iter().any(|c| c.name == "unificadora.sweep"));
    }
}

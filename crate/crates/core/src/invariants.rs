//! Non-unique factorization invariants: lengths, elasticity, delta sets,
//! catenary degree, ω-primality and tame degree.
//!
//! Every semigroup-level invariant has a definitional brute force, localized
//! at finitely many elements read off the Graver basis and the Betti set and
//! optionally widened by a sweep, and a closed form valid when the semigroup
//! has a single Betti element `d`: `c = ω = t = max L(d)`,
//! `ρ = max L(d) / min L(d)` and `max Δ = max Δ(d)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;

use crate::betti_one::{detect_single_betti_with, SingleBettiCertificate};
use crate::domain::{distance, length, Element, Factorization, GeneratorMatrix};
use crate::enumeration::{elements_below, factorizations, Bound, FactorizationSet, MembershipCache};
use crate::error::{Error, Result};
use crate::presentation::{betti_from_graver, graver_basis_with, BettiSet, GraverBasis, GraverOptions};
use crate::scalar::Scalar;

/// `L(a)`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthSet<T> {
    element: Element<T>,
    lengths: Vec<T>,
}

impl<T: Scalar> LengthSet<T> {
    pub fn element(&self) -> &Element<T> {
        &self.element
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn min(&self) -> &T {
        &self.lengths[0]
    }

    pub fn max(&self) -> &T {
        self.lengths.last().expect("length sets are nonempty")
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Consecutive gaps.
    pub fn delta(&self) -> BTreeSet<T> {
        self.lengths.windows(2).map(|w| w[1].clone() - w[0].clone()).collect()
    }

    /// `max / min`; `1` for the zero element.
    pub fn elasticity(&self) -> Ratio<T> {
        if self.min().is_zero() {
            Ratio::from_integer(T::one())
        } else {
            Ratio::new(self.max().clone(), self.min().clone())
        }
    }
}

impl<T: Scalar> fmt::Display for LengthSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn nonempty<T: Scalar>(z: FactorizationSet<T>) -> Result<FactorizationSet<T>> {
    if z.is_empty() {
        Err(Error::NotMember)
    } else {
        Ok(z)
    }
}

fn length_set_of<T: Scalar>(z: &FactorizationSet<T>) -> LengthSet<T> {
    LengthSet { element: z.element().clone(), lengths: z.lengths() }
}

pub fn lengths<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<LengthSet<T>> {
    Ok(length_set_of(&nonempty(factorizations(a, element)?)?))
}

pub fn elasticity<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<Ratio<T>> {
    Ok(lengths(a, element)?.elasticity())
}

pub fn delta<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<BTreeSet<T>> {
    Ok(lengths(a, element)?.delta())
}

/// Largest edge of a minimum bottleneck spanning tree of the complete graph
/// on `Z(a)` weighted by distance; `0` when `#Z(a) <= 1`.
pub fn catenary_of<T: Scalar>(z: &FactorizationSet<T>) -> T {
    let f = z.factorizations();
    let n = f.len();
    if n <= 1 {
        return T::zero();
    }
    let dist = |i: usize, j: usize| distance(&f[i], &f[j]).expect("same dimension");
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<T>> = vec![None; n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = Some(dist(0, j));
    }
    let mut bottleneck = T::zero();
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !in_tree[j])
            .min_by(|&x, &y| best[x].cmp(&best[y]))
            .expect("a vertex is left");
        let w = best[next].clone().expect("reached");
        if w > bottleneck {
            bottleneck = w;
        }
        in_tree[next] = true;
        for j in 0..n {
            if !in_tree[j] {
                let d = dist(next, j);
                if best[j].as_ref().is_none_or(|b| d < *b) {
                    best[j] = Some(d);
                }
            }
        }
    }
    bottleneck
}

pub fn catenary<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<T> {
    Ok(catenary_of(&nonempty(factorizations(a, element)?)?))
}

/// Local tame degree: over every `u ∈ Z(a)` and every generator `i` used by
/// some factorization of `a`, the distance from `u` to the nearest
/// factorization using `i`.
pub fn tame_of<T: Scalar>(z: &FactorizationSet<T>) -> T {
    let f = z.factorizations();
    let Some(first) = f.first() else {
        return T::zero();
    };
    let mut out = T::zero();
    for i in 0..first.dim() {
        let users: Vec<&Factorization<T>> = f.iter().filter(|u| u.coords()[i].is_positive()).collect();
        if users.is_empty() {
            continue;
        }
        'next_u: for u in f.iter().filter(|u| u.coords()[i].is_zero()) {
            let mut nearest: Option<T> = None;
            for v in &users {
                let d = distance(u, v).expect("same dimension");
                if d <= out {
                    // This u cannot raise the maximum.
                    continue 'next_u;
                }
                if nearest.as_ref().is_none_or(|n| d < *n) {
                    nearest = Some(d);
                }
            }
            out = nearest.expect("users is nonempty");
        }
    }
    out
}

pub fn tame_at<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<T> {
    Ok(tame_of(&nonempty(factorizations(a, element)?)?))
}

/// `ω(S, a_j)`: the largest length of a `≤`-minimal factorization `u` with
/// `π(u) - a_j ∈ S`, found level by level in increasing length.
///
/// Every such `u` other than `e_j` is the positive part of a Graver element
/// whose negative part uses `j`, so the search is complete once the length
/// exceeds the longest such positive part. `max_length` caps the search; if
/// the cap is reached first, the error carries the value found so far.
pub fn omega_at_generator<T: Scalar>(
    a: &GeneratorMatrix<T>,
    j: usize,
    graver: &GraverBasis<T>,
    max_length: Option<&T>,
) -> Result<T> {
    let p = a.cols();
    if j >= p {
        return Err(Error::InvalidInput(format!("generator index {j} out of range")));
    }
    let mut certified = T::one();
    for g in graver.iter() {
        for (pos, neg) in [(&g.left, &g.right), (&g.right, &g.left)] {
            if neg.coords()[j].is_positive() && length(pos) > certified {
                certified = length(pos);
            }
        }
    }
    let aj = a.generator(j);
    let mut cache = MembershipCache::new(a);
    let in_ideal = |u: &Factorization<T>, cache: &mut MembershipCache<'_, T>| {
        let x = crate::domain::evaluate(a, u).expect("dimension checked");
        cache.contains_difference(&x, &aj)
    };
    let mut level: BTreeSet<Factorization<T>> = BTreeSet::from([a.zero_factorization()]);
    let mut best = T::zero();
    let mut len = T::zero();
    loop {
        if level.is_empty() || len >= certified {
            return Ok(best);
        }
        if let Some(cap) = max_length {
            if len >= *cap {
                return Err(Error::BoundExceeded {
                    what: "omega search length",
                    limit: cap.to_string(),
                    partial: Some(best.to_string()),
                });
            }
        }
        len = len + T::one();
        let mut next = BTreeSet::new();
        let mut tried = BTreeSet::new();
        for u in &level {
            for i in 0..p {
                let mut v = u.clone();
                v.0[i] = v.0[i].clone() + T::one();
                if !tried.insert(v.clone()) {
                    continue;
                }
                // Below `v` everything must lie outside the ideal, i.e. in `level`.
                let minimal_candidate = (0..p).filter(|&k| v.0[k].is_positive()).all(|k| {
                    let mut w = v.clone();
                    w.0[k] = w.0[k].clone() - T::one();
                    level.contains(&w)
                });
                if in_ideal(&v, &mut cache) {
                    if minimal_candidate && len > best {
                        best = len.clone();
                    }
                } else if minimal_candidate {
                    next.insert(v);
                }
            }
        }
        level = next;
    }
}

/// `ω(S) = max_j ω(S, a_j)`.
pub fn omega<T: Scalar>(a: &GeneratorMatrix<T>, graver: &GraverBasis<T>, max_length: Option<&T>) -> Result<T> {
    let mut out = T::zero();
    for j in 0..a.cols() {
        let w = omega_at_generator(a, j, graver, max_length)?;
        if w > out {
            out = w;
        }
    }
    Ok(out)
}

pub fn elasticity_closed_form<T: Scalar>(cert: &SingleBettiCertificate<T>) -> Ratio<T> {
    Ratio::new(cert.max_length(), cert.min_length())
}

pub fn delta_max_closed_form<T: Scalar>(cert: &SingleBettiCertificate<T>) -> Option<T> {
    length_set_of(&cert.zd).delta().into_iter().next_back()
}

pub fn catenary_closed_form<T: Scalar>(cert: &SingleBettiCertificate<T>) -> T {
    cert.max_length()
}

pub fn omega_closed_form<T: Scalar>(cert: &SingleBettiCertificate<T>) -> T {
    cert.max_length()
}

pub fn tame_closed_form<T: Scalar>(cert: &SingleBettiCertificate<T>) -> T {
    cert.max_length()
}

/// Element-wise invariants derived from one factorization set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariants<T> {
    pub lengths: LengthSet<T>,
    pub catenary: T,
    pub tame: T,
}

impl<T: Scalar> LocalInvariants<T> {
    pub fn of(z: &FactorizationSet<T>) -> Self {
        Self { lengths: length_set_of(z), catenary: catenary_of(z), tame: tame_of(z) }
    }

    pub fn delta_max(&self) -> Option<T> {
        self.lengths.delta().into_iter().next_back()
    }
}

/// Which elements the brute force visits besides the localizing ones.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Sweep<T> {
    /// Coordinate sum up to three times the largest coordinate sum of a
    /// Betti element.
    #[default]
    Default,
    None,
    Custom(Bound<T>),
}

#[derive(Clone, Debug)]
pub struct InvariantOptions<T> {
    pub closed_form: bool,
    pub brute_force: bool,
    pub sweep: Sweep<T>,
    /// Cap on the ω search length; `None` trusts the Graver-derived bound.
    pub omega_max_length: Option<T>,
    pub graver: GraverOptions,
}

impl<T> Default for InvariantOptions<T> {
    fn default() -> Self {
        Self {
            closed_form: true,
            brute_force: true,
            sweep: Sweep::Default,
            omega_max_length: None,
            graver: GraverOptions::default(),
        }
    }
}

/// The five semigroup-level invariants.
#[derive(Clone, Debug)]
pub struct Invariants<T> {
    pub elasticity: Ratio<T>,
    /// `None` when `Δ(S)` is empty.
    pub delta_max: Option<T>,
    pub catenary: T,
    pub omega: T,
    pub tame: T,
}

impl<T: Scalar> PartialEq for Invariants<T> {
    fn eq(&self, other: &Self) -> bool {
        self.elasticity == other.elasticity
            && self.delta_max == other.delta_max
            && self.catenary == other.catenary
            && self.omega == other.omega
            && self.tame == other.tame
    }
}

impl<T: Scalar> Eq for Invariants<T> {}

impl<T: Scalar> Invariants<T> {
    /// `c ≤ ω ≤ t`. For free semigroups `ω = 1 > 0 = t`, so callers should
    /// only expect this when `S` is not free.
    pub fn chain_holds(&self) -> bool {
        self.catenary <= self.omega && self.omega <= self.tame
    }
}

pub fn closed_form<T: Scalar>(cert: &SingleBettiCertificate<T>) -> Invariants<T> {
    Invariants {
        elasticity: elasticity_closed_form(cert),
        delta_max: delta_max_closed_form(cert),
        catenary: catenary_closed_form(cert),
        omega: omega_closed_form(cert),
        tame: tame_closed_form(cert),
    }
}

fn max_opt<T: Ord>(acc: Option<T>, x: Option<T>) -> Option<T> {
    match (acc, x) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

/// Default sweep bound for a Betti set.
pub fn default_sweep<T: Scalar>(betti: &BettiSet<T>) -> Bound<T> {
    let top = betti.iter().map(|b| b.total()).max().unwrap_or_else(T::zero);
    Bound::CoordinateSum(top * T::from_count(3))
}

/// Definitional computation of the semigroup-level invariants:
/// `c` and `max Δ` over the Betti elements, `t` and `ρ` over the degrees of
/// the Graver basis, `ω` generator by generator, each widened by the sweep.
pub fn brute_force<T: Scalar>(
    a: &GeneratorMatrix<T>,
    graver: &GraverBasis<T>,
    betti: &BettiSet<T>,
    sweep: Option<&Bound<T>>,
    omega_max_length: Option<&T>,
) -> Result<Invariants<T>> {
    let mut cache: BTreeMap<Element<T>, FactorizationSet<T>> = BTreeMap::new();
    let mut z_of = |e: &Element<T>| -> Result<FactorizationSet<T>> {
        if let Some(z) = cache.get(e) {
            return Ok(z.clone());
        }
        let z = nonempty(factorizations(a, e)?)?;
        cache.insert(e.clone(), z.clone());
        Ok(z)
    };
    let mut elasticity = Ratio::from_integer(T::one());
    let mut delta_max = None;
    let mut catenary = T::zero();
    let mut tame = T::zero();
    for b in betti.iter() {
        let z = z_of(b)?;
        catenary = catenary.max(catenary_of(&z));
        delta_max = max_opt(delta_max, length_set_of(&z).delta().into_iter().next_back());
    }
    for g in graver.degrees(a)? {
        let z = z_of(&g)?;
        tame = tame.max(tame_of(&z));
        elasticity = elasticity.max(length_set_of(&z).elasticity());
    }
    if let Some(bound) = sweep {
        for e in elements_below(a, bound.clone())? {
            let l = LocalInvariants::of(&z_of(&e)?);
            catenary = catenary.max(l.catenary.clone());
            tame = tame.max(l.tame.clone());
            delta_max = max_opt(delta_max, l.delta_max());
            elasticity = elasticity.max(l.lengths.elasticity());
        }
    }
    let omega = omega(a, graver, omega_max_length)?;
    Ok(Invariants { elasticity, delta_max, catenary, omega, tame })
}

/// How a reported value was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance<T> {
    pub closed_form: bool,
    /// `Some(sweep)` when the brute force ran; the inner `None` means no
    /// sweep beyond the localizing elements.
    pub brute_force: Option<Option<Bound<T>>>,
}

impl<T: Scalar> fmt::Display for Provenance<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.closed_form {
            parts.push("closed-form".to_string());
        }
        match &self.brute_force {
            Some(Some(Bound::CoordinateSum(c))) => parts.push(format!("brute-force(sum<={c})")),
            Some(Some(Bound::Componentwise(e))) => parts.push(format!("brute-force(below {e})")),
            Some(None) => parts.push("brute-force(localized)".to_string()),
            None => {}
        }
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Clone, Debug)]
pub struct InvariantReport<T> {
    pub invariants: Invariants<T>,
    /// Shared by every field: all of them are computed by the same methods.
    pub provenance: Provenance<T>,
    pub certificate: Option<SingleBettiCertificate<T>>,
}

impl<T: Scalar> PartialEq for InvariantReport<T> {
    fn eq(&self, other: &Self) -> bool {
        self.invariants == other.invariants && self.provenance == other.provenance && self.certificate == other.certificate
    }
}

/// Runs the closed forms when `S` has a single Betti element and the brute
/// force when requested; when both run, any disagreement is an error.
pub fn invariant_report<T: Scalar>(a: &GeneratorMatrix<T>, options: &InvariantOptions<T>) -> Result<InvariantReport<T>> {
    let graver = graver_basis_with(a, options.graver)?;
    let betti = betti_from_graver(a, &graver)?;
    let certificate = if options.closed_form { detect_single_betti_with(a, &graver)? } else { None };
    let closed = certificate.as_ref().map(closed_form);
    let (brute, sweep) = if options.brute_force {
        let sweep = match &options.sweep {
            Sweep::Default => Some(default_sweep(&betti)),
            Sweep::None => None,
            Sweep::Custom(b) => Some(b.clone()),
        };
        let inv = brute_force(a, &graver, &betti, sweep.as_ref(), options.omega_max_length.as_ref())?;
        (Some(inv), Some(sweep))
    } else {
        (None, None)
    };
    let invariants = match (closed.clone(), brute) {
        (Some(c), Some(b)) => {
            if c != b {
                return Err(Error::Inconsistent(format!(
                    "closed form {c:?} disagrees with brute force {b:?}"
                )));
            }
            c
        }
        (Some(c), None) => c,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::NotSingleBetti),
    };
    Ok(InvariantReport {
        invariants,
        provenance: Provenance { closed_form: closed.is_some(), brute_force: sweep },
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::graver_basis;
    use num_bigint::BigInt;

    fn num(v: &[i64]) -> GeneratorMatrix<BigInt> {
        GeneratorMatrix::numerical(v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    fn rows(r: &[&[i64]]) -> GeneratorMatrix<BigInt> {
        GeneratorMatrix::from_rows(r.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .unwrap()
    }

    fn k4() -> GeneratorMatrix<BigInt> {
        rows(&[
            &[1, 1, 1, 0, 0, 0],
            &[1, 0, 0, 1, 1, 0],
            &[0, 1, 0, 1, 0, 1],
            &[0, 0, 1, 0, 1, 1],
        ])
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn e(v: &[i64]) -> Element<BigInt> {
        Element::from_i64s(v)
    }

    #[test]
    fn per_element_examples() {
        let ns = num(&[30, 42, 70, 105]);
        let l = lengths(&ns, &e(&[210])).unwrap();
        assert_eq!(l.lengths(), &[b(2), b(3), b(5), b(7)]);
        assert_eq!(l.delta(), BTreeSet::from([b(1), b(2)]));
        assert_eq!(elasticity(&ns, &e(&[210])).unwrap(), Ratio::new(b(7), b(2)));
        assert_eq!(catenary(&ns, &e(&[210])).unwrap(), b(7));
        assert_eq!(tame_at(&ns, &e(&[210])).unwrap(), b(7));
        assert_eq!(lengths(&ns, &e(&[30])).unwrap().lengths(), &[b(1)]);
        assert_eq!(catenary(&ns, &e(&[30])).unwrap(), b(0));
        assert!(delta(&ns, &e(&[30])).unwrap().is_empty());
        assert_eq!(lengths(&ns, &e(&[31])), Err(Error::NotMember));

        let ex1 = rows(&[&[2, 0, 1], &[0, 2, 1]]);
        assert_eq!(lengths(&ex1, &e(&[2, 2])).unwrap().lengths(), &[b(2)]);
        assert_eq!(tame_at(&num(&[2, 3]), &e(&[6])).unwrap(), b(3));
    }

    #[test]
    fn omega_examples() {
        for (gens, want) in [(vec![2, 3], 3), (vec![30, 42, 70, 105], 7), (vec![3, 5, 7], 4)] {
            let a = num(&gens);
            let g = graver_basis(&a).unwrap();
            assert_eq!(omega(&a, &g, None).unwrap(), b(want), "{gens:?}");
        }
        let free = rows(&[&[1, 0], &[0, 1]]);
        assert_eq!(omega(&free, &graver_basis(&free).unwrap(), None).unwrap(), b(1));
        let a = num(&[30, 42, 70, 105]);
        let g = graver_basis(&a).unwrap();
        match omega(&a, &g, Some(&b(4))) {
            Err(Error::BoundExceeded { partial, .. }) => assert_eq!(partial.as_deref(), Some("3")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports() {
        let r = invariant_report(&num(&[30, 42, 70, 105]), &InvariantOptions::default()).unwrap();
        assert_eq!(
            r.invariants,
            Invariants {
                elasticity: Ratio::new(b(7), b(2)),
                delta_max: Some(b(2)),
                catenary: b(7),
                omega: b(7),
                tame: b(7),
            }
        );
        assert!(r.provenance.closed_form);
        assert_eq!(r.provenance.brute_force, Some(Some(Bound::CoordinateSum(b(630)))));

        let r = invariant_report(&rows(&[&[1, 0], &[0, 1]]), &InvariantOptions::default()).unwrap();
        assert_eq!(
            r.invariants,
            Invariants { elasticity: Ratio::from_integer(b(1)), delta_max: None, catenary: b(0), omega: b(1), tame: b(0) }
        );
        assert!(!r.provenance.closed_form);

        let r = invariant_report(&k4(), &InvariantOptions::default()).unwrap();
        assert_eq!(
            r.invariants,
            Invariants { elasticity: Ratio::from_integer(b(1)), delta_max: None, catenary: b(2), omega: b(2), tame: b(2) }
        );

        let r = invariant_report(&num(&[3, 5, 7]), &InvariantOptions::default()).unwrap();
        assert!(r.certificate.is_none());
        assert!(r.invariants.chain_holds());
    }

    #[test]
    fn closed_form_needs_a_certificate_when_brute_force_is_off() {
        let opts = InvariantOptions { brute_force: false, ..InvariantOptions::default() };
        assert_eq!(invariant_report(&num(&[3, 5, 7]), &opts), Err(Error::NotSingleBetti));
    }
}

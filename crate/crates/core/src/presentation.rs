//! Graver bases, Betti elements, minimal presentations, the complete
//! intersection test and the gluing identities.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};

use crate::domain::{evaluate, CongruencePair, Element, Factorization, GeneratorMatrix};
use crate::enumeration::{elements_below, factorizations, Bound, FactorizationSet};
use crate::error::{Error, Result};
use crate::lattice::{circuits, integer_kernel, is_gluing, rank, Bipartition};
use crate::scalar::Scalar;

/// Limits for the Graver completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraverOptions {
    /// Maximum size of the working set before giving up.
    pub max_elements: usize,
}

impl Default for GraverOptions {
    fn default() -> Self {
        Self { max_elements: 100_000 }
    }
}

/// The primitive elements of `≡_A` (diagonal atoms excluded), one pair per
/// `{(u,v), (v,u)}` with the lexicographically smaller side first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraverBasis<T> {
    pairs: BTreeSet<CongruencePair<T>>,
}

impl<T: Scalar> GraverBasis<T> {
    pub fn pairs(&self) -> &BTreeSet<CongruencePair<T>> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CongruencePair<T>> {
        self.pairs.iter()
    }

    /// The elements `π(u) = π(v)` over all primitive pairs, sorted.
    pub fn degrees(&self, a: &GeneratorMatrix<T>) -> Result<BTreeSet<Element<T>>> {
        self.pairs.iter().map(|p| p.degree(a)).collect()
    }
}

/// `g ⊑ s`: same sign wherever `g` is nonzero, and `|g_k| <= |s_k|`.
fn conformal<T: Scalar>(g: &[T], s: &[T]) -> bool {
    g.iter().zip(s).all(|(x, y)| {
        x.is_zero() || (x.signum() == y.signum() && x.abs() <= y.abs())
    })
}

fn negated_conformal<T: Scalar>(g: &[T], s: &[T]) -> bool {
    g.iter().zip(s).all(|(x, y)| {
        x.is_zero() || (x.signum() == -y.signum() && x.abs() <= y.abs())
    })
}

fn sign_compatible<T: Scalar>(f: &[T], g: &[T]) -> bool {
    f.iter().zip(g).all(|(x, y)| !(x.clone() * y.clone()).is_negative())
}

fn one_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |s, x| s + x.abs())
}

/// Representative of `{g, -g}` with its first nonzero entry positive.
fn sign_normalized<T: Scalar>(g: &[T]) -> Vec<T> {
    match g.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => g.iter().map(|y| -y.clone()).collect(),
        _ => g.to_vec(),
    }
}

fn combine<T: Scalar>(f: &[T], g: &[T], sign: bool) -> Vec<T> {
    f.iter()
        .zip(g)
        .map(|(x, y)| if sign { x.clone() + y.clone() } else { x.clone() - y.clone() })
        .collect()
}

/// Reduces `s` by conformal subtraction of `±g`, `g ∈ basis`, until no
/// element of the basis is conformal to it.
fn normal_form<T: Scalar>(mut s: Vec<T>, basis: &[Vec<T>]) -> Vec<T> {
    'outer: while s.iter().any(|x| !x.is_zero()) {
        for g in basis {
            if conformal(g, &s) {
                s = combine(&s, g, false);
                continue 'outer;
            }
            if negated_conformal(g, &s) {
                s = combine(&s, g, true);
                continue 'outer;
            }
        }
        break;
    }
    s
}

/// Completion procedure over the integer kernel: starting from a lattice
/// basis plus the circuits, every critical sum `f ± g` is reduced to normal
/// form and nonzero remainders join the working set. When no critical sum
/// is left the working set contains the Graver basis, which is extracted as
/// its `⊑`-minimal elements.
pub fn graver_basis_with<T: Scalar>(a: &GeneratorMatrix<T>, options: GraverOptions) -> Result<GraverBasis<T>> {
    let kernel = integer_kernel(a);
    if kernel.is_zero() {
        return Ok(GraverBasis { pairs: BTreeSet::new() });
    }
    let mut queue: BinaryHeap<Reverse<(T, Vec<T>)>> = BinaryHeap::new();
    let mut queued: HashSet<Vec<T>> = HashSet::new();
    let mut enqueue = |s: Vec<T>, queue: &mut BinaryHeap<Reverse<(T, Vec<T>)>>| {
        let s = sign_normalized(&s);
        if queued.insert(s.clone()) {
            queue.push(Reverse((one_norm(&s), s)));
        }
    };
    for g in kernel.basis() {
        enqueue(g.clone(), &mut queue);
    }
    for c in circuits(a).iter() {
        enqueue(c.kernel_vector(), &mut queue);
    }
    // Working set, one representative per ± pair.
    let mut basis: Vec<Vec<T>> = Vec::new();
    while let Some(Reverse((_, s))) = queue.pop() {
        let f = normal_form(s, &basis);
        if f.iter().all(|x| x.is_zero()) {
            continue;
        }
        for g in &basis {
            for sign in [true, false] {
                let compatible = if sign {
                    sign_compatible(&f, g)
                } else {
                    f.iter().zip(g).all(|(x, y)| !(x.clone() * y.clone()).is_positive())
                };
                if !compatible {
                    enqueue(combine(&f, g, sign), &mut queue);
                }
            }
        }
        basis.push(f);
        if basis.len() > options.max_elements {
            return Err(Error::BoundExceeded {
                what: "Graver completion",
                limit: options.max_elements.to_string(),
                partial: Some(format!("{} candidates", basis.len())),
            });
        }
    }
    let mut pairs = BTreeSet::new();
    for (i, g) in basis.iter().enumerate() {
        let reducible = basis
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && (conformal(h, g) || negated_conformal(h, g)));
        if !reducible {
            pairs.insert(CongruencePair::from_kernel_vector(g).canonical());
        }
    }
    Ok(GraverBasis { pairs })
}

pub fn graver_basis<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<GraverBasis<T>> {
    graver_basis_with(a, GraverOptions::default())
}

/// Connected components of the factorization graph of an element: vertices
/// are its factorizations, edges join factorizations with a common support
/// index. Each component is sorted and the components are ordered by their
/// least member.
pub fn factorization_components<T: Scalar>(z: &FactorizationSet<T>) -> Vec<Vec<Factorization<T>>> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, u) in z.iter().enumerate() {
        for (i, m) in u.coords().iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            match owner.get(&i) {
                Some(&o) => {
                    let (x, y) = (find(&mut parent, o), find(&mut parent, k));
                    parent[x.max(y)] = x.min(y);
                }
                None => {
                    owner.insert(i, k);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Factorization<T>>> = BTreeMap::new();
    for (k, u) in z.iter().enumerate() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(u.clone());
    }
    // Factorizations arrive sorted, so each group's first member is its least.
    let mut comps: Vec<Vec<Factorization<T>>> = groups.into_values().collect();
    comps.sort_by(|x, y| x[0].cmp(&y[0]));
    comps
}

/// The Betti elements of `S`: elements with a disconnected factorization graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiSet<T> {
    elements: BTreeSet<Element<T>>,
}

impl<T: Scalar> BettiSet<T> {
    pub fn elements(&self) -> &BTreeSet<Element<T>> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Element<T>) -> bool {
        self.elements.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element<T>> {
        self.elements.iter()
    }

    /// The only Betti element, if there is exactly one.
    pub fn single(&self) -> Option<&Element<T>> {
        (self.elements.len() == 1).then(|| self.elements.iter().next().expect("one element"))
    }
}

/// Betti elements among the degrees of a known Graver basis.
pub fn betti_from_graver<T: Scalar>(a: &GeneratorMatrix<T>, graver: &GraverBasis<T>) -> Result<BettiSet<T>> {
    let mut elements = BTreeSet::new();
    for b in graver.degrees(a)? {
        if factorization_components(&factorizations(a, &b)?).len() > 1 {
            elements.insert(b);
        }
    }
    Ok(BettiSet { elements })
}

pub fn betti_elements<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<BettiSet<T>> {
    betti_from_graver(a, &graver_basis(a)?)
}

/// A set of pairs generating `≡_A` as a congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<T> {
    pairs: Vec<CongruencePair<T>>,
}

impl<T: Scalar> Presentation<T> {
    pub fn pairs(&self) -> &[CongruencePair<T>] {
        &self.pairs
    }

    /// Cardinality `ν`.
    pub fn nu(&self) -> usize {
        self.pairs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CongruencePair<T>> {
        self.pairs.iter()
    }
}

/// How the components of each Betti element's factorization graph are
/// linked. Any choice yields a minimal presentation of the same size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpanningTree {
    /// Star rooted at the component with the least factorization, using the
    /// least factorization of every component.
    #[default]
    Star,
    /// Path through the components in order, using the greatest
    /// factorization of every component.
    Path,
}

pub fn presentation_from_betti<T: Scalar>(
    a: &GeneratorMatrix<T>,
    betti: &BettiSet<T>,
    tree: SpanningTree,
) -> Result<Presentation<T>> {
    let mut pairs = Vec::new();
    for b in betti.iter() {
        let comps = factorization_components(&factorizations(a, b)?);
        match tree {
            SpanningTree::Star => {
                let root = &comps[0][0];
                for c in &comps[1..] {
                    pairs.push(CongruencePair::new_unchecked(root.clone(), c[0].clone()).canonical());
                }
            }
            SpanningTree::Path => {
                for w in comps.windows(2) {
                    let x = w[0].last().expect("components are nonempty");
                    let y = w[1].last().expect("components are nonempty");
                    pairs.push(CongruencePair::new_unchecked(x.clone(), y.clone()).canonical());
                }
            }
        }
    }
    Ok(Presentation { pairs })
}

/// A minimal presentation: for every Betti element, a spanning tree over the
/// components of its factorization graph.
pub fn minimal_presentation<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<Presentation<T>> {
    presentation_from_betti(a, &betti_elements(a)?, SpanningTree::Star)
}

/// `ν(S) = p - rank(A)`.
pub fn is_complete_intersection<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<bool> {
    Ok(minimal_presentation(a)?.nu() == a.cols() - rank(a))
}

/// Checks that `pairs` links all factorizations of every element within
/// `bound`, i.e. that the congruence it generates agrees with `≡_A` there.
/// Returns the first element whose factorizations are not linked.
pub fn first_unlinked_element<T: Scalar>(
    a: &GeneratorMatrix<T>,
    pairs: &[CongruencePair<T>],
    bound: Bound<T>,
) -> Result<Option<Element<T>>> {
    let moves: Vec<(&Factorization<T>, &Factorization<T>)> = pairs
        .iter()
        .flat_map(|p| [(&p.left, &p.right), (&p.right, &p.left)])
        .collect();
    for e in elements_below(a, bound)? {
        let z = factorizations(a, &e)?;
        if z.len() < 2 {
            continue;
        }
        let mut seen: HashSet<Factorization<T>> = HashSet::new();
        let mut stack = vec![z.factorizations()[0].clone()];
        seen.insert(stack[0].clone());
        while let Some(u) = stack.pop() {
            for (x, y) in &moves {
                if let Some(rest) = u.checked_sub(x) {
                    let v = rest.add(y);
                    if seen.insert(v.clone()) {
                        stack.push(v);
                    }
                }
            }
        }
        if seen.len() != z.len() {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Both sides of `ν(S) = ν(S₁) + ν(S₂) + 1` and
/// `Betti(S) = Betti(S₁) ∪ Betti(S₂) ∪ {d}` recomputed on one gluing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingReport<T> {
    pub nu: usize,
    pub nu_first: usize,
    pub nu_second: usize,
    pub betti: BTreeSet<Element<T>>,
    pub betti_first: BTreeSet<Element<T>>,
    pub betti_second: BTreeSet<Element<T>>,
    pub d: Element<T>,
}

impl<T: Scalar> GluingReport<T> {
    pub fn nu_identity_holds(&self) -> bool {
        self.nu == self.nu_first + self.nu_second + 1
    }

    pub fn betti_identity_holds(&self) -> bool {
        let mut rhs: BTreeSet<Element<T>> = self.betti_first.union(&self.betti_second).cloned().collect();
        rhs.insert(self.d.clone());
        rhs == self.betti
    }
}

pub fn verify_gluing_propositions<T: Scalar>(
    a: &GeneratorMatrix<T>,
    part: &Bipartition,
    d: &Element<T>,
) -> Result<GluingReport<T>> {
    if !is_gluing(a, part, d)? {
        return Err(Error::NotGluing(format!("{d} does not glue the given split")));
    }
    let a1 = a.select(part.first())?;
    let a2 = a.select(part.second())?;
    let summary = |m: &GeneratorMatrix<T>| -> Result<(usize, BTreeSet<Element<T>>)> {
        let betti = betti_elements(m)?;
        let nu = presentation_from_betti(m, &betti, SpanningTree::Star)?.nu();
        Ok((nu, betti.elements))
    };
    let (nu, betti) = summary(a)?;
    let (nu_first, betti_first) = summary(&a1)?;
    let (nu_second, betti_second) = summary(&a2)?;
    Ok(GluingReport {
        nu,
        nu_first,
        nu_second,
        betti,
        betti_first,
        betti_second,
        d: d.clone(),
    })
}

/// Whether `(left, right)` belongs to `≡_A`.
pub fn in_kernel_congruence<T: Scalar>(a: &GeneratorMatrix<T>, pair: &CongruencePair<T>) -> Result<bool> {
    Ok(evaluate(a, &pair.left)? == evaluate(a, &pair.right)?)
}

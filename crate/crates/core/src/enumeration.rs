//! Complete enumeration of factorization sets, membership, bounded sweeps of
//! semigroup elements, and the decomposition of a factorization along the
//! factorizations of a single Betti element.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};

use crate::domain::{dot, evaluate, Element, Factorization, GeneratorMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Z(a)`: every factorization of `element`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationSet<T> {
    element: Element<T>,
    factorizations: Vec<Factorization<T>>,
}

impl<T: Scalar> FactorizationSet<T> {
    pub fn element(&self) -> &Element<T> {
        &self.element
    }

    pub fn factorizations(&self) -> &[Factorization<T>] {
        &self.factorizations
    }

    pub fn len(&self) -> usize {
        self.factorizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factorizations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Factorization<T>> {
        self.factorizations.iter()
    }

    pub fn contains(&self, u: &Factorization<T>) -> bool {
        self.factorizations.binary_search(u).is_ok()
    }

    /// The distinct lengths `|u|`, ascending.
    pub fn lengths(&self) -> Vec<T> {
        let set: BTreeSet<T> = self.factorizations.iter().map(|u| u.total()).collect();
        set.into_iter().collect()
    }
}

impl<'a, T> IntoIterator for &'a FactorizationSet<T> {
    type Item = &'a Factorization<T>;
    type IntoIter = std::slice::Iter<'a, Factorization<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.factorizations.iter()
    }
}

struct Enumerator<'a, T> {
    a: &'a GeneratorMatrix<T>,
    /// Search order of the columns. The last one is solved exactly, so the
    /// smallest generator goes there: the number of nodes per factorization
    /// is roughly its size.
    order: Vec<usize>,
    /// `covered[j][c]`: some column `order[k]`, `k >= j`, is positive in coordinate `c`.
    covered: Vec<Vec<bool>>,
}

impl<'a, T: Scalar> Enumerator<'a, T> {
    fn new(a: &'a GeneratorMatrix<T>) -> Self {
        let (r, p) = (a.rows(), a.cols());
        let total = |j: usize| a.column(j).iter().fold(T::zero(), |s, x| s + x.clone());
        let smallest = (0..p).min_by(|&x, &y| total(x).cmp(&total(y)).then(y.cmp(&x))).expect("p >= 1");
        let mut order: Vec<usize> = (0..p).filter(|&j| j != smallest).collect();
        order.push(smallest);
        let mut covered = vec![vec![false; r]; p + 1];
        for j in (0..p).rev() {
            for c in 0..r {
                covered[j][c] = covered[j + 1][c] || a.entry(c, order[j]).is_positive();
            }
        }
        Self { a, order, covered }
    }

    fn column(&self, j: usize) -> &[T] {
        self.a.column(self.order[j])
    }

    /// Largest multiplicity of the `j`-th searched column that fits in `rem`.
    fn max_multiplicity(&self, j: usize, rem: &[T]) -> T {
        self.column(j)
            .iter()
            .zip(rem)
            .filter(|(x, _)| x.is_positive())
            .map(|(x, y)| y.div_floor(x))
            .min()
            .expect("generators are nonzero")
    }

    fn dead_end(&self, j: usize, rem: &[T]) -> bool {
        rem.iter().zip(&self.covered[j]).any(|(x, &c)| x.is_positive() && !c)
    }

    fn all(&self, target: &[T], out: &mut Vec<Factorization<T>>) {
        let mut cur = vec![T::zero(); self.a.cols()];
        self.descend(0, target.to_vec(), &mut cur, out);
    }

    fn emit(&self, cur: &[T], out: &mut Vec<Factorization<T>>) {
        let mut u = vec![T::zero(); cur.len()];
        for (k, x) in cur.iter().enumerate() {
            u[self.order[k]] = x.clone();
        }
        out.push(Factorization(u));
    }

    fn descend(&self, j: usize, rem: Vec<T>, cur: &mut Vec<T>, out: &mut Vec<Factorization<T>>) {
        if rem.iter().all(|x| x.is_zero()) {
            self.emit(cur, out);
            return;
        }
        if j == self.a.cols() || self.dead_end(j, &rem) {
            return;
        }
        let col = self.column(j);
        let max = self.max_multiplicity(j, &rem);
        if j + 1 == self.a.cols() {
            let fits = rem.iter().zip(col).all(|(x, c)| *x == max.clone() * c.clone());
            if fits {
                cur[j] = max;
                self.emit(cur, out);
                cur[j] = T::zero();
            }
            return;
        }
        let mut m = T::zero();
        let mut rem = rem;
        loop {
            cur[j] = m.clone();
            self.descend(j + 1, rem.clone(), cur, out);
            if m == max {
                break;
            }
            m = m + T::one();
            for (x, c) in rem.iter_mut().zip(col) {
                *x = x.clone() - c.clone();
            }
        }
        cur[j] = T::zero();
    }
}

/// `Z(a) = π⁻¹(a)`. Complete because each multiplicity `u_j` is bounded by
/// `⌊a_c / (a_j)_c⌋` for every coordinate `c` where `a_j` is positive.
/// An empty result means `a ∉ S`.
pub fn factorizations<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<FactorizationSet<T>> {
    a.check_element(element)?;
    let mut out = Vec::new();
    if element.coords().iter().all(|x| !x.is_negative()) {
        Enumerator::new(a).all(element.coords(), &mut out);
    }
    out.sort();
    out.dedup();
    Ok(FactorizationSet {
        element: element.clone(),
        factorizations: out,
    })
}

/// Memoized membership oracle for one semigroup.
#[derive(Debug)]
pub struct MembershipCache<'a, T> {
    a: &'a GeneratorMatrix<T>,
    memo: HashMap<Vec<T>, bool>,
}

impl<'a, T: Scalar> MembershipCache<'a, T> {
    pub fn new(a: &'a GeneratorMatrix<T>) -> Self {
        Self { a, memo: HashMap::new() }
    }

    pub fn matrix(&self) -> &'a GeneratorMatrix<T> {
        self.a
    }

    fn child(&self, cur: &[T], j: usize) -> Option<Vec<T>> {
        let col = self.a.column(j);
        if cur.iter().zip(col).all(|(x, c)| x >= c) {
            Some(cur.iter().zip(col).map(|(x, c)| x.clone() - c.clone()).collect())
        } else {
            None
        }
    }

    /// Whether `x ∈ S`. Coordinates of the wrong length or negative
    /// coordinates are simply not members.
    pub fn contains(&mut self, x: &[T]) -> bool {
        if x.len() != self.a.rows() || x.iter().any(|c| c.is_negative()) {
            return false;
        }
        if let Some(&known) = self.memo.get(x) {
            return known;
        }
        let p = self.a.cols();
        // Each frame is an element together with the next generator to try.
        let mut stack: Vec<(Vec<T>, usize)> = vec![(x.to_vec(), 0)];
        let mut returned: Option<bool> = None;
        while let Some(top) = stack.len().checked_sub(1) {
            let verdict = if returned.take() == Some(true) || stack[top].0.iter().all(|c| c.is_zero()) {
                Some(true)
            } else {
                let mut verdict = None;
                while stack[top].1 < p {
                    let j = stack[top].1;
                    stack[top].1 += 1;
                    if let Some(child) = self.child(&stack[top].0, j) {
                        match self.memo.get(&child) {
                            Some(true) => {
                                verdict = Some(true);
                                break;
                            }
                            Some(false) => continue,
                            None => {
                                stack.push((child, 0));
                                break;
                            }
                        }
                    }
                }
                if verdict.is_none() && stack.len() == top + 1 && stack[top].1 == p {
                    verdict = Some(false);
                }
                verdict
            };
            if let Some(v) = verdict {
                let (elem, _) = stack.pop().expect("nonempty stack");
                self.memo.insert(elem, v);
                returned = Some(v);
            }
        }
        returned.expect("root frame produced a verdict")
    }

    pub fn contains_element(&mut self, x: &Element<T>) -> bool {
        self.contains(x.coords())
    }

    /// Whether `x - y ∈ S`.
    pub fn contains_difference(&mut self, x: &Element<T>, y: &Element<T>) -> bool {
        match x.checked_sub(y) {
            Some(diff) => self.contains(diff.coords()),
            None => false,
        }
    }
}

/// Whether `a ∈ S`, by a depth-first search that stops at the first
/// factorization found.
pub fn is_member<T: Scalar>(a: &GeneratorMatrix<T>, element: &Element<T>) -> Result<bool> {
    a.check_element(element)?;
    Ok(MembershipCache::new(a).contains(element.coords()))
}

/// Limit for [`elements_below`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound<T> {
    /// Elements whose coordinates sum to at most this value.
    CoordinateSum(T),
    /// Elements componentwise below this one.
    Componentwise(Element<T>),
}

/// Stream of semigroup elements within a bound, ascending by coordinate sum
/// (ties broken lexicographically), each emitted once.
pub struct ElementsBelow<'a, T> {
    a: &'a GeneratorMatrix<T>,
    bound: Bound<T>,
    heap: BinaryHeap<Reverse<(T, Vec<T>)>>,
    seen: HashSet<Vec<T>>,
}

impl<T: Scalar> ElementsBelow<'_, T> {
    fn within(&self, x: &[T], total: &T) -> bool {
        match &self.bound {
            Bound::CoordinateSum(cap) => total <= cap,
            Bound::Componentwise(b) => x.iter().zip(b.coords()).all(|(u, v)| u <= v),
        }
    }
}

impl<T: Scalar> Iterator for ElementsBelow<'_, T> {
    type Item = Element<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let Reverse((total, x)) = self.heap.pop()?;
        for col in self.a.columns() {
            let y: Vec<T> = x.iter().zip(col).map(|(u, v)| u.clone() + v.clone()).collect();
            let t = total.clone() + col.iter().fold(T::zero(), |s, v| s + v.clone());
            if self.within(&y, &t) && self.seen.insert(y.clone()) {
                self.heap.push(Reverse((t, y)));
            }
        }
        Some(Element(x))
    }
}

pub fn elements_below<T: Scalar>(a: &GeneratorMatrix<T>, bound: Bound<T>) -> Result<ElementsBelow<'_, T>> {
    if let Bound::Componentwise(b) = &bound {
        a.check_element(b)?;
    }
    let zero = vec![T::zero(); a.rows()];
    let mut it = ElementsBelow {
        a,
        bound,
        heap: BinaryHeap::new(),
        seen: HashSet::new(),
    };
    if it.within(&zero, &T::zero()) {
        it.seen.insert(zero.clone());
        it.heap.push(Reverse((T::zero(), zero)));
    }
    Ok(it)
}

/// Every factorization whose element lies within `bound`, grouped by element.
/// One pass over `ℕ^p` instead of one enumeration per element.
pub fn factorizations_below<T: Scalar>(
    a: &GeneratorMatrix<T>,
    bound: &Bound<T>,
) -> Result<BTreeMap<Element<T>, FactorizationSet<T>>> {
    if let Bound::Componentwise(b) = bound {
        a.check_element(b)?;
    }
    let within = |x: &[T]| match bound {
        Bound::CoordinateSum(cap) => x.iter().fold(T::zero(), |s, v| s + v.clone()) <= *cap,
        Bound::Componentwise(b) => x.iter().zip(b.coords()).all(|(u, v)| u <= v),
    };
    let cols: Vec<&[T]> = a.columns().collect();
    let mut groups: BTreeMap<Vec<T>, Vec<Factorization<T>>> = BTreeMap::new();
    let mut u = vec![T::zero(); cols.len()];
    let mut x = vec![T::zero(); a.rows()];
    // Odometer: bump the last coordinate that still fits, zeroing those after it.
    loop {
        if within(&x) {
            groups.entry(x.clone()).or_default().push(Factorization(u.clone()));
        }
        let mut j = cols.len();
        loop {
            if j == 0 {
                return Ok(groups
                    .into_iter()
                    .map(|(x, mut fs)| {
                        fs.sort();
                        let e = Element(x);
                        (e.clone(), FactorizationSet { element: e, factorizations: fs })
                    })
                    .collect());
            }
            j -= 1;
            let next: Vec<T> = x.iter().zip(cols[j]).map(|(s, c)| s.clone() + c.clone()).collect();
            if within(&next) {
                x = next;
                u[j] = u[j].clone() + T::one();
                break;
            }
            for (s, c) in x.iter_mut().zip(cols[j]) {
                *s = s.clone() - c.clone() * u[j].clone();
            }
            u[j] = T::zero();
        }
    }
}

/// `u = Σ α_i v_i + w` with `v_i` running over `Z(d)` and `w` the unique
/// factorization of `b = π(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<T> {
    /// Coefficients on the members of `Z(d)`, in its sorted order. Not unique
    /// in general; only `a` and `b` are determined by the element.
    pub alphas: Vec<T>,
    pub w: Factorization<T>,
    /// `Σ α_i`.
    pub a: T,
    pub b: Element<T>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn reconstruct(&self, zd: &FactorizationSet<T>) -> Factorization<T> {
        zd.iter()
            .zip(&self.alphas)
            .fold(self.w.clone(), |acc, (v, k)| acc.add(&v.scale(k)))
    }
}

/// Greedily removes members of `Z(d)` (in sorted order) from `u` while one
/// fits. `zd` must be the factorization set of the single Betti element of
/// the semigroup; otherwise the remainder may keep several factorizations
/// and the call fails with [`Error::NotSingleBetti`].
pub fn decompose<T: Scalar>(
    a: &GeneratorMatrix<T>,
    zd: &FactorizationSet<T>,
    u: &Factorization<T>,
) -> Result<Decomposition<T>> {
    decompose_with(a, zd, u, |b| Ok(factorizations(a, b)?.len()))
}

/// [`decompose`] with `#Z(b)` supplied by the caller.
pub fn decompose_with<T: Scalar>(
    a: &GeneratorMatrix<T>,
    zd: &FactorizationSet<T>,
    u: &Factorization<T>,
    mut count: impl FnMut(&Element<T>) -> Result<usize>,
) -> Result<Decomposition<T>> {
    a.check_factorization(u)?;
    let members = zd.factorizations();
    let disjoint = members
        .iter()
        .enumerate()
        .all(|(i, x)| members[i + 1..].iter().all(|y| dot(x, y).is_zero()));
    if members.len() < 2 || zd.element().is_zero() || !disjoint {
        return Err(Error::NotSingleBetti);
    }
    for v in members {
        a.check_factorization(v)?;
    }
    let mut alphas = vec![T::zero(); members.len()];
    let mut rest = u.clone();
    'outer: loop {
        for (i, v) in members.iter().enumerate() {
            if let Some(next) = rest.checked_sub(v) {
                rest = next;
                alphas[i] = alphas[i].clone() + T::one();
                continue 'outer;
            }
        }
        break;
    }
    let b = evaluate(a, &rest)?;
    if count(&b)? != 1 {
        return Err(Error::NotSingleBetti);
    }
    let total = alphas.iter().fold(T::zero(), |s, x| s + x.clone());
    Ok(Decomposition {
        alphas,
        w: rest,
        a: total,
        b,
    })
}

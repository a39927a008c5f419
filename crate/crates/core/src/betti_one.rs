//! Semigroups with a single Betti element.
//!
//! Such a semigroup is a gluing of free "petals" along one element `d`: the
//! factorizations of `d` have pairwise disjoint supports, every circuit and
//! every primitive pair joins two of them, and for numerical semigroups the
//! generators are the products `n_i = ∏_{j≠i} k_j` of pairwise coprime
//! `k_j ≥ 2`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{pow, One, Zero};

use crate::domain::{dot, support, symmetric_closure, Element, Factorization, GeneratorMatrix};
use crate::enumeration::{decompose, factorizations, Decomposition, FactorizationSet, MembershipCache};
use crate::error::{Error, Result};
use crate::lattice::{circuits, gluing_element, is_gluing, rank, Bipartition};
use crate::presentation::{betti_elements, betti_from_graver, graver_basis, GraverBasis};
use crate::scalar::{gcd_all, Scalar};

/// Generators `n_i = ∏_{j≠i} k_j` of a numerical semigroup with a single
/// Betti element `d = ∏ k_j`; `c_i = k_i` is the least multiple of `n_i`
/// lying in the semigroup generated by the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalWitness<T> {
    /// Ascending.
    pub n: Vec<T>,
    /// Aligned with `n`.
    pub k: Vec<T>,
    pub c: Vec<T>,
    pub d: T,
}

impl<T: Scalar> NumericalWitness<T> {
    /// Re-checks every stated equality.
    pub fn check(&self) -> bool {
        let p = self.n.len();
        p >= 2
            && self.k.len() == p
            && self.c.len() == p
            && self.n.windows(2).all(|w| w[0] < w[1])
            && gcd_all(&self.n).is_one()
            && pairwise_coprime(&self.k)
            && self.k.iter().all(|k| *k >= T::one() + T::one())
            && (0..p).all(|i| self.n[i] == product_except(&self.k, i))
            && self.c == self.k
            && self.n.iter().zip(&self.c).all(|(n, c)| n.clone() * c.clone() == self.d)
            && self.d == self.k.iter().fold(T::one(), |acc, x| acc * x.clone())
    }
}

fn pairwise_coprime<T: Scalar>(k: &[T]) -> bool {
    (0..k.len()).all(|i| (i + 1..k.len()).all(|j| k[i].gcd(&k[j]).is_one()))
}

fn product_except<T: Scalar>(k: &[T], skip: usize) -> T {
    k.iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .fold(T::one(), |acc, (_, x)| acc * x.clone())
}

/// Rejects lists that are not a minimal generating set of a submonoid of `ℕ`.
fn check_minimal_numbers<T: Scalar>(n: &[T]) -> Result<()> {
    if n.is_empty() || n.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidInput("generators must be positive integers".into()));
    }
    let set: BTreeSet<&T> = n.iter().collect();
    if set.len() != n.len() {
        return Err(Error::InvalidInput("generators must be distinct".into()));
    }
    for i in 0..n.len() {
        let others: Vec<T> = n.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        if others.is_empty() {
            continue;
        }
        let m = GeneratorMatrix::numerical(others)?;
        if MembershipCache::new(&m).contains(std::slice::from_ref(&n[i])) {
            return Err(Error::InvalidInput(format!("{} is generated by the other generators", n[i])));
        }
    }
    Ok(())
}

fn to_big<T: Scalar>(x: &T) -> BigInt {
    BigInt::parse_decimal(&x.to_string()).expect("scalars print as decimal integers")
}

fn from_big<T: Scalar>(x: &BigInt) -> Result<T> {
    T::parse_decimal(&x.to_string())
        .ok_or_else(|| Error::InvalidInput(format!("{x} does not fit the scalar type")))
}

/// Largest `x` with `x^e <= value`, by binary search over exact integers.
fn integer_root<T: Scalar>(value: &T, e: usize, hi: T) -> T {
    let fits = |x: &T| {
        let mut acc = T::one();
        for _ in 0..e {
            if x.is_zero() {
                return true;
            }
            if acc > value.clone() / x.clone() {
                return false;
            }
            acc = acc * x.clone();
        }
        acc <= *value
    };
    let (mut lo, mut hi) = (T::zero(), hi);
    while lo < hi {
        let (half, odd) = (hi.clone() - lo.clone()).div_rem(&(T::one() + T::one()));
        let mid = lo.clone() + half + odd;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid - T::one();
        }
    }
    lo
}

/// `c_i = min{k ≥ 1 : k n_i ∈ ⟨n_j : j ≠ i⟩}`, by incremental membership
/// search. Terminates because `k = n_j / gcd(n_i, n_j)` always qualifies.
pub fn c_exponents<T: Scalar>(n: &[T]) -> Result<Vec<T>> {
    check_minimal_numbers(n)?;
    if n.len() < 2 {
        return Err(Error::InvalidInput("need at least two generators".into()));
    }
    let mut out = Vec::with_capacity(n.len());
    for i in 0..n.len() {
        let others: Vec<T> = n.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        let m = GeneratorMatrix::numerical(others)?;
        let mut cache = MembershipCache::new(&m);
        let mut k = T::one();
        while !cache.contains(&[k.clone() * n[i].clone()]) {
            k = k + T::one();
        }
        out.push(k);
    }
    Ok(out)
}

/// Decides whether the numerical semigroup minimally generated by `n` has a
/// single Betti element, via the product form of its generators.
pub fn detect_numerical<T: Scalar>(n: &[T]) -> Result<Option<NumericalWitness<T>>> {
    check_minimal_numbers(n)?;
    if !gcd_all(n).is_one() {
        return Err(Error::InvalidInput("generators must have gcd 1".into()));
    }
    let p = n.len();
    if p < 2 {
        return Ok(None);
    }
    let mut n = n.to_vec();
    n.sort();
    // The product of all generators overflows fixed-width scalars quickly.
    let wide: Vec<BigInt> = n.iter().map(to_big).collect();
    let product = wide.iter().fold(BigInt::one(), |acc, x| acc * x);
    // d = n_i k_i <= n_1 n_2, since k_i divides every other generator.
    let q = integer_root(&product, p - 1, &wide[0] * &wide[1]);
    if pow(q.clone(), p - 1) != product {
        return Ok(None);
    }
    let mut kw = Vec::with_capacity(p);
    for x in &wide {
        let (ki, rem) = q.div_rem(x);
        if !rem.is_zero() || ki < BigInt::from(2) {
            return Ok(None);
        }
        kw.push(ki);
    }
    if !pairwise_coprime(&kw) || (0..p).any(|i| wide[i] != product_except(&kw, i)) {
        return Ok(None);
    }
    let k: Vec<T> = kw.iter().map(from_big).collect::<Result<_>>()?;
    let q: T = from_big(&q)?;
    let c = c_exponents(&n)?;
    if c != k {
        return Err(Error::Inconsistent(format!(
            "product form found but c-exponents {c:?} differ from k {k:?}"
        )));
    }
    Ok(Some(NumericalWitness { n, k, c, d: q }))
}

/// The numerical semigroup generated by the products of all `p - 1` element
/// subsets of the pairwise coprime `k`, with generators sorted ascending.
pub fn construct_numerical<T: Scalar>(k: &[T]) -> Result<(GeneratorMatrix<T>, NumericalWitness<T>)> {
    if k.len() < 2 {
        return Err(Error::InvalidInput("need at least two factors".into()));
    }
    let two = T::one() + T::one();
    if let Some(bad) = k.iter().find(|x| **x < two) {
        return Err(Error::InvalidInput(format!("factor {bad} is smaller than 2")));
    }
    if !pairwise_coprime(k) {
        return Err(Error::InvalidInput("factors must be pairwise coprime".into()));
    }
    let mut pairs: Vec<(T, T)> = (0..k.len()).map(|i| (product_except(k, i), k[i].clone())).collect();
    pairs.sort();
    let (n, k): (Vec<T>, Vec<T>) = pairs.into_iter().unzip();
    let d = k.iter().fold(T::one(), |acc, x| acc * x.clone());
    let matrix = GeneratorMatrix::numerical(n.clone())?;
    let witness = NumericalWitness { n, c: k.clone(), k, d };
    Ok((matrix, witness))
}

/// Everything known about a semigroup with `Betti(S) = {d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleBettiCertificate<T> {
    pub d: Element<T>,
    pub zd: FactorizationSet<T>,
    /// One block of generator indices per factorization of `d`, ordered by
    /// smallest index; indices outside every support join the last block.
    pub petals: Vec<Vec<usize>>,
    pub numerical: Option<NumericalWitness<T>>,
}

impl<T: Scalar> SingleBettiCertificate<T> {
    pub fn lengths_of_d(&self) -> Vec<T> {
        self.zd.lengths()
    }

    pub fn max_length(&self) -> T {
        self.lengths_of_d().pop().expect("d has factorizations")
    }

    pub fn min_length(&self) -> T {
        self.lengths_of_d().remove(0)
    }

    pub fn decompose(&self, a: &GeneratorMatrix<T>, u: &Factorization<T>) -> Result<Decomposition<T>> {
        decompose(a, &self.zd, u)
    }
}

fn petals_of<T: Scalar>(p: usize, zd: &FactorizationSet<T>) -> Vec<Vec<usize>> {
    let mut petals: Vec<Vec<usize>> = zd.iter().map(|v| support(v).into_iter().collect()).collect();
    petals.sort();
    let used: BTreeSet<usize> = petals.iter().flatten().copied().collect();
    if let Some(last) = petals.last_mut() {
        last.extend((0..p).filter(|i| !used.contains(i)));
        last.sort();
    }
    petals
}

/// `Z(d) × Z(d)` without the diagonal.
fn off_diagonal<T: Scalar>(zd: &FactorizationSet<T>) -> BTreeSet<(Factorization<T>, Factorization<T>)> {
    let mut out = BTreeSet::new();
    for u in zd {
        for v in zd {
            if u != v {
                out.insert((u.clone(), v.clone()));
            }
        }
    }
    out
}

/// Builds the certificate when `Betti(S)` is a singleton, cross-checking
/// that circuits, `Z(d)² \ Δ` and the Graver basis coincide, that the
/// factorizations of `d` have disjoint supports, that the petals are free,
/// and (for numerical semigroups) that the generators have product form.
/// A failed cross-check is reported as [`Error::Inconsistent`].
pub fn detect_single_betti<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<Option<SingleBettiCertificate<T>>> {
    let graver = graver_basis(a)?;
    detect_single_betti_with(a, &graver)
}

pub fn detect_single_betti_with<T: Scalar>(
    a: &GeneratorMatrix<T>,
    graver: &GraverBasis<T>,
) -> Result<Option<SingleBettiCertificate<T>>> {
    let betti = betti_from_graver(a, graver)?;
    let Some(d) = betti.single().cloned() else {
        return Ok(None);
    };
    let zd = factorizations(a, &d)?;
    let square = off_diagonal(&zd);
    let circ = symmetric_closure(circuits(a).iter());
    let grav = symmetric_closure(graver.iter());
    if circ != square || grav != square {
        return Err(Error::Inconsistent(format!(
            "Betti(S) = {{{d}}} but circuits ({}), Z(d)² minus diagonal ({}) and Graver basis ({}) differ",
            circ.len(),
            square.len(),
            grav.len()
        )));
    }
    for (u, v) in &square {
        if !dot(u, v).is_zero() {
            return Err(Error::Inconsistent(format!("factorizations {u} and {v} of {d} share support")));
        }
    }
    let petals = petals_of(a.cols(), &zd);
    for petal in &petals {
        if rank(&a.select(petal)?) != petal.len() {
            return Err(Error::Inconsistent(format!("petal {petal:?} is not free")));
        }
    }
    let numerical = match a.numbers() {
        Some(n) if gcd_all(&n).is_one() => match detect_numerical(&n) {
            Ok(Some(w)) => {
                if w.d != d.coords()[0] {
                    return Err(Error::Inconsistent(format!("product form gives d = {}, Betti gives {d}", w.d)));
                }
                Some(w)
            }
            Ok(None) => {
                return Err(Error::Inconsistent(format!(
                    "single Betti element {d} but the generators are not of product form"
                )))
            }
            Err(Error::InvalidInput(_)) => None,
            Err(e) => return Err(e),
        },
        _ => None,
    };
    Ok(Some(SingleBettiCertificate { d, zd, petals, numerical }))
}

/// One free sub-semigroup per petal of the certificate.
pub fn petal_decomposition<T: Scalar>(
    a: &GeneratorMatrix<T>,
    cert: &SingleBettiCertificate<T>,
) -> Result<Vec<GeneratorMatrix<T>>> {
    cert.petals.iter().map(|p| a.select(p)).collect()
}

/// Criterion "the Betti set is `{d}`".
pub fn criterion_betti<T: Scalar>(a: &GeneratorMatrix<T>, graver: &GraverBasis<T>) -> Result<Option<Element<T>>> {
    Ok(betti_from_graver(a, graver)?.single().cloned())
}

/// Criterion "circuits = `Z(d)² \ Δ` = Graver basis" for some nonzero `d`,
/// compared as symmetric sets. `d` is forced to be the common degree of the
/// circuits.
pub fn criterion_circuits<T: Scalar>(a: &GeneratorMatrix<T>, graver: &GraverBasis<T>) -> Result<Option<Element<T>>> {
    let circ = circuits(a);
    let degrees: BTreeSet<Element<T>> = circ.iter().map(|c| c.degree(a)).collect::<Result<_>>()?;
    if degrees.len() != 1 {
        return Ok(None);
    }
    let d = degrees.into_iter().next().expect("one degree");
    let zd = factorizations(a, &d)?;
    let sym = symmetric_closure(circ.iter());
    if sym != off_diagonal(&zd) || sym != symmetric_closure(graver.iter()) {
        return Ok(None);
    }
    Ok(Some(d))
}

/// Criterion "`S` is the gluing of `S₁` and `S₂` by `d` with
/// `Betti(S₁) ∪ Betti(S₂) ⊆ {d}`", searched over every split of the
/// generators; the gluing element of a split is determined by
/// `ℤ𝒜₁ ∩ ℤ𝒜₂`.
pub fn criterion_gluing<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<Option<(Bipartition, Element<T>)>> {
    for part in Bipartition::all(a.cols()) {
        if let Some(d) = gluing_element(a, &part)? {
            if petals_betti_within(a, &part, &d)? {
                return Ok(Some((part, d)));
            }
        }
    }
    Ok(None)
}

/// The same criterion for a known `d`, searched only over the splits
/// `(supp(v), complement)` for `v ∈ Z(d)`.
pub fn criterion_gluing_at<T: Scalar>(a: &GeneratorMatrix<T>, d: &Element<T>) -> Result<Option<Bipartition>> {
    for v in factorizations(a, d)?.iter() {
        let Ok(part) = Bipartition::from_first(a.cols(), support(v)) else {
            continue;
        };
        if is_gluing(a, &part, d)? && petals_betti_within(a, &part, d)? {
            return Ok(Some(part));
        }
    }
    Ok(None)
}

fn petals_betti_within<T: Scalar>(a: &GeneratorMatrix<T>, part: &Bipartition, d: &Element<T>) -> Result<bool> {
    for block in [part.first(), part.second()] {
        let betti = betti_elements(&a.select(block)?)?;
        if betti.iter().any(|b| b != d) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The verdicts of the three equivalent characterizations on one semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeWayVerdict<T> {
    pub betti: Option<Element<T>>,
    pub circuits: Option<Element<T>>,
    pub gluing: Option<Element<T>>,
}

impl<T: Scalar> ThreeWayVerdict<T> {
    /// All three agree on whether `S` has a single Betti element and on `d`.
    pub fn agree(&self) -> bool {
        self.betti == self.circuits && self.circuits == self.gluing
    }
}

pub fn three_way_verdict<T: Scalar>(a: &GeneratorMatrix<T>) -> Result<ThreeWayVerdict<T>> {
    let graver = graver_basis(a)?;
    Ok(ThreeWayVerdict {
        betti: criterion_betti(a, &graver)?,
        circuits: criterion_circuits(a, &graver)?,
        gluing: criterion_gluing(a)?.map(|(_, d)| d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rows(r: &[&[i64]]) -> GeneratorMatrix<BigInt> {
        GeneratorMatrix::from_rows(r.iter().map(|row| big(row)).collect()).unwrap()
    }

    fn k4() -> GeneratorMatrix<BigInt> {
        rows(&[
            &[1, 1, 1, 0, 0, 0],
            &[1, 0, 0, 1, 1, 0],
            &[0, 1, 0, 1, 0, 1],
            &[0, 0, 1, 0, 1, 1],
        ])
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(&BigInt::from(27), 3, BigInt::from(100)), BigInt::from(3));
        assert_eq!(integer_root(&BigInt::from(26), 3, BigInt::from(100)), BigInt::from(2));
        assert_eq!(integer_root(&i64::MAX, 2, i64::MAX), 3_037_000_499);
        assert_eq!(integer_root(&10i64, 1, 10), 10);
    }

    #[test]
    fn detect_numerical_examples() {
        let w = detect_numerical(&big(&[30, 42, 70, 105])).unwrap().unwrap();
        assert_eq!(w.k, big(&[7, 5, 3, 2]));
        assert_eq!(w.c, w.k);
        assert_eq!(w.d, BigInt::from(210));
        assert!(w.check());
        let w = detect_numerical(&big(&[2, 3])).unwrap().unwrap();
        assert_eq!(w.k, big(&[3, 2]));
        assert_eq!(w.d, BigInt::from(6));
        assert_eq!(detect_numerical(&big(&[3, 5, 7])).unwrap(), None);
        assert!(detect_numerical(&big(&[2, 4, 5])).is_err());
        assert!(detect_numerical(&big(&[4, 6])).is_err());
        assert!(detect_numerical(&big(&[0, 3])).is_err());
    }

    #[test]
    fn c_exponent_examples() {
        assert_eq!(c_exponents(&big(&[30, 42, 70, 105])).unwrap(), big(&[7, 5, 3, 2]));
        assert_eq!(c_exponents(&big(&[2, 3])).unwrap(), big(&[3, 2]));
        assert_eq!(c_exponents(&big(&[3, 5, 7])).unwrap(), big(&[4, 2, 2]));
        assert!(c_exponents(&big(&[3, 6, 7])).is_err());
    }

    #[test]
    fn construct_examples() {
        let (a, w) = construct_numerical(&big(&[7, 5, 3, 2])).unwrap();
        assert_eq!(a.numbers().unwrap(), big(&[30, 42, 70, 105]));
        assert_eq!(w.k, big(&[7, 5, 3, 2]));
        let (a, w) = construct_numerical(&big(&[2, 3])).unwrap();
        assert_eq!(a.numbers().unwrap(), big(&[2, 3]));
        assert_eq!(w.k, big(&[3, 2]));
        let (a, w) = construct_numerical(&big(&[3, 4, 5])).unwrap();
        assert_eq!(a.numbers().unwrap(), big(&[12, 15, 20]));
        assert_eq!(w.d, BigInt::from(60));
        assert!(w.check());
        let cert = detect_single_betti(&a).unwrap().unwrap();
        assert_eq!(cert.d, Element::from_i64s(&[60]));
        assert!(construct_numerical(&big(&[2, 4])).is_err());
        assert!(construct_numerical(&big(&[1, 3])).is_err());
        assert!(construct_numerical(&big(&[5])).is_err());
    }

    #[test]
    fn certificate_examples() {
        let ex1 = rows(&[&[2, 0, 1], &[0, 2, 1]]);
        let cert = detect_single_betti(&ex1).unwrap().unwrap();
        assert_eq!(cert.d, Element::from_i64s(&[2, 2]));
        assert_eq!(cert.petals, vec![vec![0, 1], vec![2]]);
        let petals = petal_decomposition(&ex1, &cert).unwrap();
        assert_eq!(petals[0], rows(&[&[2, 0], &[0, 2]]));
        assert_eq!(petals[1], rows(&[&[1], &[1]]));

        let cert = detect_single_betti(&k4()).unwrap().unwrap();
        assert_eq!(cert.d, Element::from_i64s(&[1, 1, 1, 1]));
        assert_eq!(cert.petals, vec![vec![0, 5], vec![1, 4], vec![2, 3]]);

        let ns = GeneratorMatrix::numerical(big(&[30, 42, 70, 105])).unwrap();
        let cert = detect_single_betti(&ns).unwrap().unwrap();
        assert_eq!(cert.petals, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(cert.numerical.as_ref().unwrap().k, big(&[7, 5, 3, 2]));

        let ns = GeneratorMatrix::numerical(big(&[3, 5, 7])).unwrap();
        assert_eq!(detect_single_betti(&ns).unwrap(), None);
    }

    #[test]
    fn leftover_generators_join_the_last_petal() {
        // ⟨(2,0),(3,0),(0,1)⟩: Betti = {(6,0)}, the third generator is in no support.
        let a = rows(&[&[2, 3, 0], &[0, 0, 1]]);
        let cert = detect_single_betti(&a).unwrap().unwrap();
        assert_eq!(cert.petals, vec![vec![0], vec![1, 2]]);
        assert_eq!(criterion_gluing_at(&a, &cert.d).unwrap().is_some(), true);
    }

    #[test]
    fn three_way_examples() {
        for a in [rows(&[&[2, 0, 1], &[0, 2, 1]]), k4(), GeneratorMatrix::numerical(big(&[3, 5, 7])).unwrap()] {
            let v = three_way_verdict(&a).unwrap();
            assert!(v.agree(), "{v:?}");
        }
        let free = rows(&[&[1, 0], &[0, 1]]);
        let v = three_way_verdict(&free).unwrap();
        assert!(v.agree() && v.betti.is_none());
    }
}

//! Exact integer linear algebra: Hermite normal form, integer kernels,
//! lattice intersection, the gluing test and circuits.

use std::collections::BTreeSet;

use crate::domain::{evaluate, support, CongruencePair, Element, GeneratorMatrix};
use crate::enumeration::is_member;
use crate::error::{check_dim, Error, Result};
use crate::scalar::{gcd_all, Scalar};

/// Row-style Hermite normal form `H = U M` together with the unimodular
/// transform `U`.
#[derive(Clone, Debug)]
pub(crate) struct Hnf<T> {
    pub h: Vec<Vec<T>>,
    pub u: Vec<Vec<T>>,
    pub rank: usize,
}

fn combine_rows<T: Scalar>(rows: &mut [Vec<T>], r: usize, i: usize, coeffs: [&T; 4]) {
    // (row_r, row_i) <- (c0 row_r + c1 row_i, c2 row_r + c3 row_i)
    let [c0, c1, c2, c3] = coeffs;
    for k in 0..rows[r].len() {
        let a = rows[r][k].clone();
        let b = rows[i][k].clone();
        rows[r][k] = c0.clone() * a.clone() + c1.clone() * b.clone();
        rows[i][k] = c2.clone() * a + c3.clone() * b;
    }
}

fn sub_multiple<T: Scalar>(rows: &mut [Vec<T>], target: usize, src: usize, f: &T) {
    for k in 0..rows[target].len() {
        let delta = f.clone() * rows[src][k].clone();
        rows[target][k] = rows[target][k].clone() - delta;
    }
}

fn negate_row<T: Scalar>(row: &mut [T]) {
    for x in row.iter_mut() {
        *x = -x.clone();
    }
}

pub(crate) fn hnf<T: Scalar>(mut m: Vec<Vec<T>>, ncols: usize) -> Hnf<T> {
    let nrows = m.len();
    let mut u: Vec<Vec<T>> = (0..nrows)
        .map(|i| (0..nrows).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            if m[r][c].is_zero() {
                m.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            let eg = a.extended_gcd(&b);
            let p = a / eg.gcd.clone();
            let q = -(b / eg.gcd);
            let coeffs = [&eg.x, &eg.y, &q, &p];
            combine_rows(&mut m, r, i, coeffs);
            combine_rows(&mut u, r, i, coeffs);
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            negate_row(&mut m[r]);
            negate_row(&mut u[r]);
        }
        for k in 0..r {
            let f = m[k][c].div_floor(&m[r][c]);
            if !f.is_zero() {
                sub_multiple(&mut m, k, r, &f);
                sub_multiple(&mut u, k, r, &f);
            }
        }
        r += 1;
    }
    Hnf { h: m, u, rank: r }
}

/// A sublattice of `ℤ^n`, stored by the rows of its Hermite normal form.
/// Two lattices are equal exactly when their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice<T> {
    dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> IntegerLattice<T> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    /// The lattice spanned over `ℤ` by `generators`.
    pub fn from_generators(dim: usize, generators: Vec<Vec<T>>) -> Result<Self> {
        for g in &generators {
            check_dim(dim, g.len())?;
        }
        let h = hnf(generators, dim);
        let mut basis = h.h;
        basis.truncate(h.rank);
        Ok(Self { dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut rest = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            if rest[..pc].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, rem) = rest[pc].div_rem(&row[pc]);
            if !rem.is_zero() {
                return false;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x = x.clone() - q.clone() * y.clone();
            }
        }
        rest.iter().all(|x| x.is_zero())
    }
}

/// Vectors `x` with `x M = 0`, as a basis of the left kernel of `m`.
fn left_kernel<T: Scalar>(m: Vec<Vec<T>>, ncols: usize) -> Vec<Vec<T>> {
    let h = hnf(m, ncols);
    h.u.into_iter().skip(h.rank).collect()
}

/// Rank of `A` over `ℚ`.
pub fn rank<T: Scalar>(a: &GeneratorMatrix<T>) -> usize {
    let cols: Vec<Vec<T>> = a.columns().map(|c| c.to_vec()).collect();
    hnf(cols, a.rows()).rank
}

/// The lattice `{v ∈ ℤ^p : Av = 0}`.
pub fn integer_kernel<T: Scalar>(a: &GeneratorMatrix<T>) -> IntegerLattice<T> {
    let cols: Vec<Vec<T>> = a.columns().map(|c| c.to_vec()).collect();
    let kernel = left_kernel(cols, a.rows());
    IntegerLattice::from_generators(a.cols(), kernel).expect("kernel vectors have dimension p")
}

/// The subgroup `ℤ𝒜 ⊆ ℤ^r` generated by the columns of `A`.
pub fn group_lattice<T: Scalar>(a: &GeneratorMatrix<T>) -> IntegerLattice<T> {
    IntegerLattice::from_generators(a.rows(), a.columns().map(|c| c.to_vec()).collect())
        .expect("columns have dimension r")
}

pub fn lattice_intersection<T: Scalar>(l1: &IntegerLattice<T>, l2: &IntegerLattice<T>) -> Result<IntegerLattice<T>> {
    check_dim(l1.dim, l2.dim)?;
    if l1.is_zero() || l2.is_zero() {
        return Ok(IntegerLattice::zero(l1.dim));
    }
    let k1 = l1.rank();
    let stacked: Vec<Vec<T>> = l1.basis.iter().chain(&l2.basis).cloned().collect();
    let gens = left_kernel(stacked, l1.dim)
        .into_iter()
        .map(|x| {
            let mut v = vec![T::zero(); l1.dim];
            for (c, row) in x[..k1].iter().zip(&l1.basis) {
                for (o, y) in v.iter_mut().zip(row) {
                    *o = o.clone() + c.clone() * y.clone();
                }
            }
            v
        })
        .collect();
    IntegerLattice::from_generators(l1.dim, gens)
}

/// A split of the generator indices `{0..p}` into two nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    first: Vec<usize>,
    second: Vec<usize>,
}

impl Bipartition {
    pub fn new(p: usize, first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        let a: BTreeSet<usize> = first.iter().copied().collect();
        let b: BTreeSet<usize> = second.iter().copied().collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidPartition("both blocks must be nonempty".into()));
        }
        if a.len() != first.len() || b.len() != second.len() || !a.is_disjoint(&b) {
            return Err(Error::InvalidPartition("blocks must be disjoint without repeats".into()));
        }
        if a.len() + b.len() != p || a.iter().chain(&b).any(|&i| i >= p) {
            return Err(Error::InvalidPartition(format!("blocks must cover exactly 1..{p}")));
        }
        Ok(Self {
            first: a.into_iter().collect(),
            second: b.into_iter().collect(),
        })
    }

    /// The split `(first, complement)`.
    pub fn from_first(p: usize, first: impl IntoIterator<Item = usize>) -> Result<Self> {
        let first: BTreeSet<usize> = first.into_iter().collect();
        let second = (0..p).filter(|i| !first.contains(i)).collect();
        Self::new(p, first.into_iter().collect(), second)
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }

    /// All splits of `{0..p}` with index 0 in the first block.
    pub fn all(p: usize) -> Vec<Self> {
        if p < 2 {
            return Vec::new();
        }
        (0..(1u64 << (p - 1)) - 1)
            .map(|mask| {
                let first = std::iter::once(0).chain((1..p).filter(|&i| mask >> (i - 1) & 1 == 1));
                Self::from_first(p, first).expect("mask leaves a nonempty complement")
            })
            .collect()
    }
}

/// `S` is the gluing of the semigroups generated by the two blocks by `d`:
/// `d ∈ S₁ ∩ S₂ \ {0}` and `ℤ𝒜₁ ∩ ℤ𝒜₂ = ℤd`.
pub fn is_gluing<T: Scalar>(a: &GeneratorMatrix<T>, part: &Bipartition, d: &Element<T>) -> Result<bool> {
    a.check_element(d)?;
    check_dim(a.cols(), part.first.len() + part.second.len())?;
    if d.is_zero() || d.coords().iter().any(|x| x.is_negative()) {
        return Ok(false);
    }
    let a1 = a.select(&part.first)?;
    let a2 = a.select(&part.second)?;
    if !is_member(&a1, d)? || !is_member(&a2, d)? {
        return Ok(false);
    }
    let meet = lattice_intersection(&group_lattice(&a1), &group_lattice(&a2))?;
    let line = IntegerLattice::from_generators(a.rows(), vec![d.coords().to_vec()])?;
    Ok(meet == line)
}

/// The only possible gluing element of a split: the nonnegative generator
/// of `ℤ𝒜₁ ∩ ℤ𝒜₂` when that intersection has rank one and the split is a
/// gluing by it.
pub fn gluing_element<T: Scalar>(a: &GeneratorMatrix<T>, part: &Bipartition) -> Result<Option<Element<T>>> {
    let a1 = a.select(&part.first)?;
    let a2 = a.select(&part.second)?;
    let meet = lattice_intersection(&group_lattice(&a1), &group_lattice(&a2))?;
    if meet.rank() != 1 {
        return Ok(None);
    }
    let g = &meet.basis()[0];
    let d = if g.iter().all(|x| !x.is_negative()) {
        Element(g.clone())
    } else if g.iter().all(|x| !x.is_positive()) {
        Element(g.iter().map(|x| -x.clone()).collect())
    } else {
        return Ok(None);
    };
    Ok(is_gluing(a, part, &d)?.then_some(d))
}

/// The circuits of `≡_A`, each stored once with its lexicographically
/// smaller side first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitSet<T> {
    pairs: BTreeSet<CongruencePair<T>>,
}

impl<T: Scalar> CircuitSet<T> {
    /// Validates every pair: kernel membership, disjoint supports, coprime
    /// coordinates and support-minimality.
    pub fn new(a: &GeneratorMatrix<T>, pairs: impl IntoIterator<Item = CongruencePair<T>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for pair in pairs {
            let pair = pair.canonical();
            if evaluate(a, &pair.left)? != evaluate(a, &pair.right)? {
                return Err(Error::Inconsistent(format!("circuit {pair} is not in the kernel congruence")));
            }
            if !pair.has_disjoint_supports() || !pair.content().is_one() {
                return Err(Error::Inconsistent(format!("circuit {pair} is not primitive")));
            }
            let supp: Vec<usize> = support(&pair.left).union(&support(&pair.right)).copied().collect();
            for skip in 0..supp.len() {
                let rest: Vec<usize> = supp.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &j)| j).collect();
                if rank(&a.select(&rest)?) != rest.len() {
                    return Err(Error::Inconsistent(format!("circuit {pair} has a non-minimal support")));
                }
            }
            set.insert(pair);
        }
        Ok(Self { pairs: set })
    }

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
}

/// Circuits from the one-dimensional kernels of minimally dependent column
/// subsets. Only subsets of size at most `rank(A) + 1` can qualify.
pub fn circuits<T: Scalar>(a: &GeneratorMatrix<T>) -> CircuitSet<T> {
    let p = a.cols();
    let max_size = rank(a) + 1;
    let mut found = Vec::new();
    for mask in 1u64..(1u64 << p) {
        let size = mask.count_ones() as usize;
        if size < 2 || size > max_size {
            continue;
        }
        let idx: Vec<usize> = (0..p).filter(|&i| mask >> i & 1 == 1).collect();
        let sub = a.select(&idx).expect("indices are in range");
        let kernel = integer_kernel(&sub);
        if kernel.rank() != 1 {
            continue;
        }
        let g = &kernel.basis()[0];
        if g.iter().any(|x| x.is_zero()) {
            continue;
        }
        let c = gcd_all(g);
        let mut full = vec![T::zero(); p];
        for (&j, x) in idx.iter().zip(g) {
            full[j] = x.clone() / c.clone();
        }
        found.push(CongruencePair::from_kernel_vector(&full));
    }
    CircuitSet::new(a, found).expect("minimally dependent subsets yield circuits")
}

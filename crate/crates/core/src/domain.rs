//! Plain-data domain types and the elementary vector operations on them.
//!
//! Generator indices are 0-based throughout the library. Elements and
//! factorizations carry their own dimension and are checked against the
//! ambient [`GeneratorMatrix`] when an operation receives them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// The `r x p` matrix whose columns minimally generate an affine semigroup
/// `S ⊆ ℕ^r`. Entries are stored column-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> GeneratorMatrix<T> {
    /// Builds the matrix from its generators. Rejects empty input, ragged
    /// columns, negative entries, zero columns and repeated columns.
    pub fn from_columns(columns: Vec<Vec<T>>) -> Result<Self> {
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::InvalidMatrix("no generators".into()));
        }
        let rows = columns[0].len();
        if rows == 0 {
            return Err(Error::InvalidMatrix("generators have no coordinates".into()));
        }
        for (i, c) in columns.iter().enumerate() {
            check_dim(rows, c.len())?;
            if c.iter().any(|x| x.is_negative()) {
                return Err(Error::InvalidMatrix(format!("generator {} has a negative entry", i + 1)));
            }
            if c.iter().all(|x| x.is_zero()) {
                return Err(Error::InvalidMatrix(format!("generator {} is zero", i + 1)));
            }
        }
        for i in 0..cols {
            for j in i + 1..cols {
                if columns[i] == columns[j] {
                    return Err(Error::InvalidMatrix(format!(
                        "generators {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            entries: columns.into_iter().flatten().collect(),
        })
    }

    /// Builds the matrix from its rows, as the matrix is usually written.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidMatrix("no rows".into()));
        }
        let p = rows[0].len();
        for r in &rows {
            check_dim(p, r.len())?;
        }
        let columns = (0..p).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        Self::from_columns(columns)
    }

    /// The `1 x p` matrix of a submonoid of `ℕ` generated by `numbers`.
    pub fn numerical(numbers: Vec<T>) -> Result<Self> {
        Self::from_columns(numbers.into_iter().map(|n| vec![n]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of generators `p`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.entries[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.entries.chunks(self.rows)
    }

    pub fn entry(&self, row: usize, col: usize) -> &T {
        &self.entries[col * self.rows + row]
    }

    pub fn generator(&self, j: usize) -> Element<T> {
        Element(self.column(j).to_vec())
    }

    /// For a `1 x p` matrix, the generators as plain integers.
    pub fn numbers(&self) -> Option<Vec<T>> {
        (self.rows == 1).then(|| self.entries.clone())
    }

    /// The matrix generated by the columns in `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut cols = Vec::with_capacity(indices.len());
        for &j in indices {
            if j >= self.cols {
                return Err(Error::InvalidInput(format!("generator index {} out of range", j + 1)));
            }
            cols.push(self.column(j).to_vec());
        }
        Self::from_columns(cols)
    }

    pub fn row_vectors(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn zero_element(&self) -> Element<T> {
        Element(vec![T::zero(); self.rows])
    }

    pub fn zero_factorization(&self) -> Factorization<T> {
        Factorization(vec![T::zero(); self.cols])
    }

    pub(crate) fn check_element(&self, a: &Element<T>) -> Result<()> {
        check_dim(self.rows, a.dim())
    }

    pub(crate) fn check_factorization(&self, u: &Factorization<T>) -> Result<()> {
        check_dim(self.cols, u.dim())
    }
}

impl<T: Scalar> fmt::Display for GeneratorMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .row_vectors()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

/// An element of `ℕ^r` (usually of the semigroup).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element<T>(pub Vec<T>);

/// A vector of generator multiplicities, an element of `ℕ^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization<T>(pub Vec<T>);

macro_rules! vector_ops {
    ($ty:ident) => {
        impl<T: Scalar> $ty<T> {
            pub fn new(coords: Vec<T>) -> Self {
                Self(coords)
            }

            pub fn from_i64s(coords: &[i64]) -> Self {
                Self(coords.iter().map(|&x| T::from_i64(x).expect("i64 fits in scalar")).collect())
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[T] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|x| x.is_zero())
            }

            /// Sum of the coordinates.
            pub fn total(&self) -> T {
                self.0.iter().fold(T::zero(), |acc, x| acc + x.clone())
            }

            /// Componentwise `self <= other`.
            pub fn le(&self, other: &Self) -> bool {
                self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
            }

            pub fn add(&self, other: &Self) -> Self {
                debug_assert_eq!(self.0.len(), other.0.len());
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
            }

            /// Componentwise difference, or `None` if it leaves `ℕ^n`.
            pub fn checked_sub(&self, other: &Self) -> Option<Self> {
                if other.le(self) {
                    Some(Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect()))
                } else {
                    None
                }
            }

            pub fn scale(&self, k: &T) -> Self {
                Self(self.0.iter().map(|a| a.clone() * k.clone()).collect())
            }
        }

        impl<T: Scalar> fmt::Display for $ty<T> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    };
}

vector_ops!(Element);
vector_ops!(Factorization);

impl<T: Scalar> Factorization<T> {
    /// The unit vector `e_i` of dimension `p`.
    pub fn unit(p: usize, i: usize) -> Self {
        let mut v = vec![T::zero(); p];
        v[i] = T::one();
        Self(v)
    }
}

/// A pair `(u, v)` of factorizations of the same element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CongruencePair<T> {
    pub left: Factorization<T>,
    pub right: Factorization<T>,
}

impl<T: Scalar> CongruencePair<T> {
    /// Checks that both sides factor the same element.
    pub fn new(a: &GeneratorMatrix<T>, left: Factorization<T>, right: Factorization<T>) -> Result<Self> {
        if evaluate(a, &left)? != evaluate(a, &right)? {
            return Err(Error::InvalidInput(format!("{left} and {right} factor different elements")));
        }
        Ok(Self { left, right })
    }

    pub fn new_unchecked(left: Factorization<T>, right: Factorization<T>) -> Self {
        Self { left, right }
    }

    /// Splits a kernel vector `g` (with `Ag = 0`) into `(g⁺, g⁻)`.
    pub fn from_kernel_vector(g: &[T]) -> Self {
        let pos = g.iter().map(|x| if x.is_positive() { x.clone() } else { T::zero() }).collect();
        let neg = g.iter().map(|x| if x.is_negative() { -x.clone() } else { T::zero() }).collect();
        Self::new_unchecked(Factorization(pos), Factorization(neg))
    }

    /// `left - right` as an integer vector.
    pub fn kernel_vector(&self) -> Vec<T> {
        self.left.0.iter().zip(&self.right.0).map(|(a, b)| a.clone() - b.clone()).collect()
    }

    pub fn swapped(&self) -> Self {
        Self::new_unchecked(self.right.clone(), self.left.clone())
    }

    /// The orientation with the lexicographically smaller side first.
    pub fn canonical(self) -> Self {
        if self.left <= self.right {
            self
        } else {
            self.swapped()
        }
    }

    /// The common element `π(left) = π(right)`.
    pub fn degree(&self, a: &GeneratorMatrix<T>) -> Result<Element<T>> {
        evaluate(a, &self.left)
    }

    pub fn has_disjoint_supports(&self) -> bool {
        dot(&self.left, &self.right).is_zero()
    }

    /// gcd of all `2p` coordinates.
    pub fn content(&self) -> T {
        crate::scalar::gcd_all(self.left.0.iter().chain(&self.right.0))
    }
}

impl<T: Scalar> fmt::Display for CongruencePair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// The set `{(u, v), (v, u)}` over a collection of pairs, used to compare
/// sets of pairs regardless of their stored orientation.
pub fn symmetric_closure<'a, T: Scalar + 'a, I>(pairs: I) -> BTreeSet<(Factorization<T>, Factorization<T>)>
where
    I: IntoIterator<Item = &'a CongruencePair<T>>,
{
    let mut out = BTreeSet::new();
    for p in pairs {
        out.insert((p.left.clone(), p.right.clone()));
        out.insert((p.right.clone(), p.left.clone()));
    }
    out
}

/// The factorization homomorphism `u ↦ Au`.
pub fn evaluate<T: Scalar>(a: &GeneratorMatrix<T>, u: &Factorization<T>) -> Result<Element<T>> {
    a.check_factorization(u)?;
    let mut out = vec![T::zero(); a.rows()];
    for (j, m) in u.0.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(a.column(j)) {
            *o = o.clone() + m.clone() * x.clone();
        }
    }
    Ok(Element(out))
}

/// Indices with nonzero multiplicity.
pub fn support<T: Scalar>(u: &Factorization<T>) -> BTreeSet<usize> {
    u.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

/// `|u| = u_1 + ... + u_p`.
pub fn length<T: Scalar>(u: &Factorization<T>) -> T {
    u.total()
}

pub fn dot<T: Scalar>(u: &Factorization<T>, v: &Factorization<T>) -> T {
    u.0.iter().zip(&v.0).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Componentwise minimum `u ∧ v`.
pub fn wedge<T: Scalar>(u: &Factorization<T>, v: &Factorization<T>) -> Result<Factorization<T>> {
    check_dim(u.dim(), v.dim())?;
    Ok(Factorization(u.0.iter().zip(&v.0).map(|(a, b)| a.min(b).clone()).collect()))
}

/// Factorization distance `max(|u - u∧v|, |v - u∧v|)`.
pub fn distance<T: Scalar>(u: &Factorization<T>, v: &Factorization<T>) -> Result<T> {
    check_dim(u.dim(), v.dim())?;
    let (mut du, mut dv) = (T::zero(), T::zero());
    for (a, b) in u.0.iter().zip(&v.0) {
        if a > b {
            du = du + (a.clone() - b.clone());
        } else {
            dv = dv + (b.clone() - a.clone());
        }
    }
    Ok(du.max(dv))
}

//! Finite-dimensional associative algebras given by structure constants.
//!
//! The main family is the truncated polynomial algebra
//! `O_n = GF(p)[x_1..x_n] / (x_1^p, ..., x_n^p)`, with its monomial basis in
//! lexicographic order of exponent vectors (first variable most significant),
//! so that index 0 is the unit and `O_{n-1} ⊗ O_1` has literally the same
//! product table as `O_n`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::matrix::Matrix;
use crate::subspace::Subspace;
use crate::system::LinearSystem;

/// Default bound on the number of basis elements of a constructed algebra.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Exponent vector of a monomial in `O_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(exponents: Vec<u8>, p: Prime) -> Result<Self> {
        if let Some(&e) = exponents.iter().find(|&&e| e >= p.get()) {
            return Err(Error::Precondition(format!(
                "exponent {e} is not below p = {p}"
            )));
        }
        Ok(MultiIndex(exponents))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position in the lexicographic monomial basis.
    pub fn index(&self, p: Prime) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &e| acc * p.as_usize() + e as usize)
    }

    pub fn from_index(mut index: usize, p: Prime, n: usize) -> Self {
        let mut exps = vec![0u8; n];
        for slot in exps.iter_mut().rev() {
            *slot = (index % p.as_usize()) as u8;
            index /= p.as_usize();
        }
        MultiIndex(exps)
    }

    /// Exponent-wise sum, or `None` when some exponent reaches `p`.
    pub fn checked_add(&self, other: &MultiIndex, p: Prime) -> Option<MultiIndex> {
        let sum: Vec<u8> = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as u16 + b as u16)
            .map(|s| (s < p.get() as u16).then_some(s as u8))
            .collect::<Option<_>>()?;
        Some(MultiIndex(sum))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.0.len() == 1;
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| {
                let var = if single {
                    "x".to_string()
                } else {
                    format!("x{}", i + 1)
                };
                if e == 1 {
                    var
                } else {
                    format!("{var}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// A square matrix acting on algebra coordinates; column `i` is the image of `e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOperator(Matrix);

impl LinearOperator {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::shape("linear operator", matrix.rows(), matrix.cols()));
        }
        Ok(LinearOperator(matrix))
    }

    /// Rebuilds an operator from its row-major flattening.
    pub fn from_flat(p: Prime, dim: usize, flat: &[u8]) -> Result<Self> {
        Ok(LinearOperator(Matrix::new(p, dim, dim, flat.to_vec())?))
    }

    pub fn identity(p: Prime, dim: usize) -> Self {
        LinearOperator(Matrix::identity(p, dim))
    }

    pub fn zero(p: Prime, dim: usize) -> Self {
        LinearOperator(Matrix::zeros(p, dim, dim))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn modulus(&self) -> Prime {
        self.0.modulus()
    }

    pub fn flatten(&self) -> &[u8] {
        self.0.data()
    }

    pub fn apply(&self, v: &[u8]) -> Result<Vec<u8>> {
        self.0.mul_vec(v)
    }

    /// Image of the basis vector `e_i`.
    pub fn column(&self, i: usize) -> Vec<u8> {
        (0..self.dim()).map(|k| self.0.get(k, i)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        Ok(LinearOperator(self.0.mul(&other.0)?))
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &LinearOperator) -> Result<LinearOperator> {
        let ab = self.0.mul(&other.0)?;
        let ba = other.0.mul(&self.0)?;
        Ok(LinearOperator(ab.sub(&ba)?))
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        Ok(LinearOperator(self.0.add(&other.0)?))
    }

    pub fn scale(&self, s: u8) -> LinearOperator {
        LinearOperator(self.0.scale(s))
    }

    /// Kronecker product, acting on `A ⊗ B` with basis index `i * dim B + j`.
    pub fn tensor(&self, other: &LinearOperator) -> Result<LinearOperator> {
        let p = self.modulus();
        if p != other.modulus() {
            return Err(Error::ModulusMismatch {
                left: p.get(),
                right: other.modulus().get(),
            });
        }
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let mut out = Matrix::zeros(p, d, d);
        for k in 0..da {
            for i in 0..da {
                let x = self.0.get(k, i);
                if x == 0 {
                    continue;
                }
                for l in 0..db {
                    for j in 0..db {
                        let y = other.0.get(l, j);
                        if y != 0 {
                            out.set(k * db + l, i * db + j, p.mul(x, y));
                        }
                    }
                }
            }
        }
        Ok(LinearOperator(out))
    }
}

type Terms = Vec<(usize, u8)>;

/// An associative algebra over GF(p) in a labelled basis.
///
/// `products[(i, j)]` lists the nonzero coordinates of `e_i · e_j`; pairs that
/// are absent multiply to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocAlgebra {
    p: Prime,
    labels: Vec<String>,
    products: BTreeMap<(usize, usize), Terms>,
    unit: Option<Vec<u8>>,
}

impl AssocAlgebra {
    /// Builds and validates an algebra from `(i, j, k, c)` quadruples meaning
    /// `e_i · e_j += c · e_k`. Associativity is checked; the unit (if any) is
    /// computed.
    pub fn new<I>(p: Prime, labels: Vec<String>, products: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, i64)>,
    {
        let dim = labels.len();
        let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, i64>> = BTreeMap::new();
        for (i, j, k, c) in products {
            if let Some(&bad) = [i, j, k].iter().find(|&&x| x >= dim) {
                return Err(Error::Format(format!(
                    "basis index {bad} out of range for dimension {dim}"
                )));
            }
            *acc.entry((i, j)).or_default().entry(k).or_insert(0) += c;
        }
        let products = acc
            .into_iter()
            .filter_map(|(pair, terms)| {
                let terms: Terms = terms
                    .into_iter()
                    .map(|(k, c)| (k, p.reduce(c)))
                    .filter(|&(_, c)| c != 0)
                    .collect();
                (!terms.is_empty()).then_some((pair, terms))
            })
            .collect();
        let mut alg = AssocAlgebra {
            p,
            labels,
            products,
            unit: None,
        };
        alg.check_associative()?;
        alg.unit = find_unit(&alg);
        Ok(alg)
    }

    /// The one-dimensional algebra `GF(p)` with `e_0 · e_0 = e_0`.
    pub fn ground_field(p: Prime) -> Self {
        AssocAlgebra::new(p, vec!["1".into()], [(0, 0, 0, 1)]).expect("GF(p) is associative")
    }

    /// The one-dimensional algebra with zero product (no unit).
    pub fn zero_product(p: Prime, dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        AssocAlgebra::new(p, labels, []).expect("zero product is associative")
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Nonzero coordinates of `e_i · e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u8)] {
        self.products.get(&(i, j)).map_or(&[], |t| t.as_slice())
    }

    /// Iterates over the nonzero structure constants as `(i, j, k, c)`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, u8)> + '_ {
        self.products
            .iter()
            .flat_map(|(&(i, j), terms)| terms.iter().map(move |&(k, c)| (i, j, k, c)))
    }

    pub fn nonzero_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.products.keys().copied()
    }

    pub fn unit(&self) -> Option<&[u8]> {
        self.unit.as_deref()
    }

    /// Basis position of the unit, when the unit is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        let u = self.unit.as_ref()?;
        let mut nz = u.iter().enumerate().filter(|&(_, &x)| x != 0);
        match (nz.next(), nz.next()) {
            (Some((i, &1)), None) => Some(i),
            _ => None,
        }
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    fn basis_vector(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.dim()];
        v[i] = 1;
        v
    }

    fn check_len(&self, v: &[u8], context: &'static str) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::shape(context, self.dim(), v.len()));
        }
        Ok(())
    }

    /// Bilinear extension of the product table.
    pub fn multiply(&self, u: &[u8], v: &[u8]) -> Result<Vec<u8>> {
        self.check_len(u, "multiply (left factor)")?;
        self.check_len(v, "multiply (right factor)")?;
        Ok(self.multiply_unchecked(u, v))
    }

    pub(crate) fn multiply_unchecked(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut out = vec![0u8; self.dim()];
        for (i, &a) in u.iter().enumerate().filter(|&(_, &a)| a != 0) {
            for (j, &b) in v.iter().enumerate().filter(|&(_, &b)| b != 0) {
                let ab = p.mul(a, b);
                for &(k, c) in self.product(i, j) {
                    out[k] = p.add(out[k], p.mul(ab, c));
                }
            }
        }
        out
    }

    /// `e_i · v` as a dense vector.
    fn left_basis_mul(&self, i: usize, v: &[u8]) -> Vec<u8> {
        self.multiply_unchecked(&self.basis_vector(i), v)
    }

    /// `v · e_k` as a dense vector.
    fn right_basis_mul(&self, v: &[u8], k: usize) -> Vec<u8> {
        self.multiply_unchecked(v, &self.basis_vector(k))
    }

    fn product_vector(&self, i: usize, j: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.dim()];
        for &(k, c) in self.product(i, j) {
            v[k] = c;
        }
        v
    }

    pub fn check_commutative(&self) -> Result<()> {
        for (&(i, j), terms) in &self.products {
            if self.products.get(&(j, i)) != Some(terms) {
                return Err(Error::NotCommutative {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        self.check_commutative().is_ok()
    }

    /// Exhaustive associativity check. Triples where both `e_i e_j` and
    /// `e_j e_k` vanish have both sides zero, so only triples touching a
    /// nonzero product are evaluated.
    pub fn check_associative(&self) -> Result<()> {
        let d = self.dim();
        let assoc = |i: usize, j: usize, k: usize| -> bool {
            let left = self.right_basis_mul(&self.product_vector(i, j), k);
            let right = self.left_basis_mul(i, &self.product_vector(j, k));
            left == right
        };
        for &(i, j) in self.products.keys() {
            for k in 0..d {
                if !assoc(i, j, k) {
                    return Err(Error::NotAssociative { i, j, k });
                }
            }
        }
        for &(j, k) in self.products.keys() {
            for i in 0..d {
                if !assoc(i, j, k) {
                    return Err(Error::NotAssociative { i, j, k });
                }
            }
        }
        Ok(())
    }

    /// Matrix of `v ↦ a · v`.
    pub fn right_mult_operator(&self, a: &[u8]) -> Result<LinearOperator> {
        self.check_len(a, "multiplication operator")?;
        let d = self.dim();
        let mut m = Matrix::zeros(self.p, d, d);
        for i in 0..d {
            let col = self.multiply_unchecked(a, &self.basis_vector(i));
            for (k, &x) in col.iter().enumerate() {
                if x != 0 {
                    m.set(k, i, x);
                }
            }
        }
        LinearOperator::new(m)
    }

    fn check_operator(&self, op: &LinearOperator) -> Result<()> {
        if op.dim() != self.dim() {
            return Err(Error::shape("operator on algebra", self.dim(), op.dim()));
        }
        if op.modulus() != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: op.modulus().get(),
            });
        }
        Ok(())
    }

    /// First basis pair on which the Leibniz rule fails, if any. Evaluated
    /// directly from the product table, independent of the derivation solver.
    pub fn leibniz_violation(&self, op: &LinearOperator) -> Result<Option<(usize, usize)>> {
        self.check_operator(op)?;
        let p = self.p;
        let d = self.dim();
        let images: Vec<Vec<u8>> = (0..d).map(|i| op.column(i)).collect();
        for i in 0..d {
            for j in 0..d {
                let mut lhs = vec![0u8; d];
                for &(k, c) in self.product(i, j) {
                    p.axpy(&mut lhs, c, &images[k]);
                }
                let a = self.right_basis_mul(&images[i], j);
                let b = self.left_basis_mul(i, &images[j]);
                let ok = lhs
                    .iter()
                    .zip(a.iter().zip(&b))
                    .all(|(&l, (&x, &y))| l == p.add(x, y));
                if !ok {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_derivation(&self, op: &LinearOperator) -> Result<bool> {
        Ok(self.leibniz_violation(op)?.is_none())
    }

    pub(crate) fn require_derivations(&self, ops: &[LinearOperator]) -> Result<()> {
        let first = ops
            .par_iter()
            .enumerate()
            .map(|(index, op)| Ok(self.leibniz_violation(op)?.map(|(i, j)| (index, i, j))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        match first {
            Some((index, i, j)) => Err(Error::NotDerivation { index, i, j }),
            None => Ok(()),
        }
    }

    /// `Der(A)` as a subspace of flattened `dim × dim` operators.
    ///
    /// Unknown `D[k][m]` (coefficient of `e_k` in `D(e_m)`) sits at flat index
    /// `k * dim + m`. For each basis pair the system imposes
    /// `D(e_i e_j) − D(e_i) e_j − e_i D(e_j) = 0` coordinate-wise.
    pub fn derivations(&self) -> Subspace {
        let d = self.dim();
        // right[j]: (m, k, c) with e_m e_j ∋ c e_k; left[i]: (m, k, c) with e_i e_m ∋ c e_k.
        let mut right: Vec<Vec<(usize, usize, u8)>> = vec![Vec::new(); d];
        let mut left: Vec<Vec<(usize, usize, u8)>> = vec![Vec::new(); d];
        for (m, j, k, c) in self.structure_constants() {
            right[j].push((m, k, c));
            left[m].push((j, k, c));
        }
        let mut sys = LinearSystem::new(self.p, d * d);
        for i in 0..d {
            for j in 0..d {
                let mut eqs: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
                for &(m, c) in self.product(i, j) {
                    for k in 0..d {
                        eqs.entry(k).or_default().push((k * d + m, c as i64));
                    }
                }
                for &(m, k, c) in &right[j] {
                    eqs.entry(k).or_default().push((m * d + i, -(c as i64)));
                }
                for &(m, k, c) in &left[i] {
                    eqs.entry(k).or_default().push((m * d + j, -(c as i64)));
                }
                for (_, terms) in eqs {
                    sys.push(terms);
                }
            }
        }
        sys.nullspace()
    }

    /// Basis operators of `Der(A)`, in the order of the canonical subspace basis.
    pub fn derivation_basis(&self) -> Vec<LinearOperator> {
        self.derivations()
            .vectors()
            .map(|v| LinearOperator::from_flat(self.p, self.dim(), v).expect("flat operator"))
            .collect()
    }

    /// `span{D(e_i)}` over all supplied operators and basis vectors.
    pub fn derivation_image(&self, ops: &[LinearOperator]) -> Result<Subspace> {
        for op in ops {
            self.check_operator(op)?;
        }
        let d = self.dim();
        Subspace::from_vectors(
            self.p,
            d,
            ops.iter().flat_map(|op| (0..d).map(move |i| op.column(i))),
        )
    }

    /// `{f ∈ A^* : f ∘ D = 0 for all D}`, the annihilator of the joint image.
    pub fn dual_invariants(&self, ops: &[LinearOperator]) -> Result<Subspace> {
        Ok(self.derivation_image(ops)?.annihilator())
    }

    /// `A ⊗ B` with basis index `i * dim B + j`. Both factors must be unital.
    pub fn tensor_product(&self, other: &AssocAlgebra) -> Result<AssocAlgebra> {
        let p = self.p;
        if p != other.p {
            return Err(Error::ModulusMismatch {
                left: p.get(),
                right: other.p.get(),
            });
        }
        let (Some(ua), Some(ub)) = (self.unit(), other.unit()) else {
            return Err(Error::Precondition(
                "tensor product requires both factors to be unital".into(),
            ));
        };
        let db = other.dim();
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let mut products: BTreeMap<(usize, usize), Terms> = BTreeMap::new();
        for (&(i, i2), ta) in &self.products {
            for (&(j, j2), tb) in &other.products {
                let mut terms: Terms = Vec::with_capacity(ta.len() * tb.len());
                for &(k, c) in ta {
                    for &(l, e) in tb {
                        terms.push((k * db + l, p.mul(c, e)));
                    }
                }
                terms.sort_unstable();
                products.insert((i * db + j, i2 * db + j2), terms);
            }
        }
        let unit = ua
            .iter()
            .flat_map(|&a| ub.iter().map(move |&b| p.mul(a, b)))
            .collect();
        Ok(AssocAlgebra {
            p,
            labels,
            products,
            unit: Some(unit),
        })
    }

    /// Direct product `A × B` with componentwise multiplication.
    pub fn direct_sum(&self, other: &AssocAlgebra) -> Result<AssocAlgebra> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        let shift = self.dim();
        let labels = self
            .labels
            .iter()
            .map(|l| format!("{l}.0"))
            .chain(other.labels.iter().map(|l| format!("{l}.1")))
            .collect();
        let quads: Vec<(usize, usize, usize, i64)> = self
            .structure_constants()
            .map(|(i, j, k, c)| (i, j, k, c as i64))
            .chain(
                other
                    .structure_constants()
                    .map(|(i, j, k, c)| (i + shift, j + shift, k + shift, c as i64)),
            )
            .collect();
        AssocAlgebra::new(self.p, labels, quads)
    }
}

/// The two-sided unit of `A`, found by solving `e · e_j = e_j = e_j · e`.
pub fn find_unit(alg: &AssocAlgebra) -> Option<Vec<u8>> {
    let d = alg.dim();
    let mut sys = LinearSystem::new(alg.p, d);
    // Equation keyed by (j, k, side): coefficient of e_k in e·e_j (side 0) or e_j·e (side 1).
    let mut eqs: BTreeMap<(usize, usize, u8), Vec<(usize, i64)>> = BTreeMap::new();
    for j in 0..d {
        eqs.entry((j, j, 0)).or_default();
        eqs.entry((j, j, 1)).or_default();
    }
    for (i, j, k, c) in alg.structure_constants() {
        eqs.entry((j, k, 0)).or_default().push((i, c as i64));
        eqs.entry((i, k, 1)).or_default().push((j, c as i64));
    }
    for ((j, k, _), terms) in eqs {
        sys.push_with_rhs(terms, (j == k) as i64);
    }
    let unit = sys.solve()?;
    debug_assert!((0..d).all(|j| {
        let e = alg.basis_vector(j);
        alg.multiply_unchecked(&unit, &e) == e && alg.multiply_unchecked(&e, &unit) == e
    }));
    Some(unit)
}

/// Monomials of `O_n` in lexicographic order.
pub fn monomials(p: Prime, n: usize) -> Vec<MultiIndex> {
    let d = p.as_usize().pow(n as u32);
    (0..d).map(|i| MultiIndex::from_index(i, p, n)).collect()
}

pub fn truncated_polynomial_algebra(p: Prime, n: usize) -> Result<AssocAlgebra> {
    truncated_polynomial_algebra_with_cap(p, n, DEFAULT_SIZE_CAP)
}

/// `O_n = GF(p)[x_1..x_n]/(x_i^p)` on the monomial basis.
pub fn truncated_polynomial_algebra_with_cap(
    p: Prime,
    n: usize,
    cap: usize,
) -> Result<AssocAlgebra> {
    if n == 0 {
        return Err(Error::Precondition(
            "truncated polynomial algebra needs n >= 1".into(),
        ));
    }
    let requested = (p.get() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(Error::Capacity { requested, cap });
    }
    let basis = monomials(p, n);
    let d = basis.len();
    let labels = basis.iter().map(|m| m.to_string()).collect();
    let mut products = BTreeMap::new();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            if let Some(s) = a.checked_add(b, p) {
                products.insert((i, j), vec![(s.index(p), 1u8)]);
            }
        }
    }
    let mut unit = vec![0u8; d];
    unit[0] = 1;
    let alg = AssocAlgebra {
        p,
        labels,
        products,
        unit: Some(unit),
    };
    debug_assert!(alg.product(0, d - 1) == [(d - 1, 1)]);
    Ok(alg)
}

/// The monomial derivation `x^α ∂_i` of `O_n`, sending `x^β` to `β_i x^{α+β−e_i}`.
pub fn monomial_derivation(p: Prime, n: usize, alpha: &MultiIndex, var: usize) -> LinearOperator {
    let basis = monomials(p, n);
    let d = basis.len();
    let mut m = Matrix::zeros(p, d, d);
    for (j, beta) in basis.iter().enumerate() {
        let bi = beta.exponents()[var];
        if bi == 0 {
            continue;
        }
        let mut lowered = beta.exponents().to_vec();
        lowered[var] -= 1;
        if let Some(target) = MultiIndex(lowered).checked_add(alpha, p) {
            m.set(target.index(p), j, bi % p.get());
        }
    }
    LinearOperator(m)
}

//! Degree-1 cyclic cohomology of commutative algebras.
//!
//! A cyclic 1-cocycle is a bilinear form `φ` with
//!
//! * `φ(a, b) = −φ(b, a)` (imposed literally, so at p = 2 it is symmetry), and
//! * `φ(ab, c) − φ(a, bc) + φ(ca, b) = 0`.
//!
//! Degree-0 coboundaries are `(a, b) ↦ ψ(ab) − ψ(ba)`, which vanish for
//! commutative algebras.

use rayon::prelude::*;
use serde::Serialize;

use crate::assoc::{AssocAlgebra, LinearOperator};
use crate::echelon::{kernel_vectors, Reducer};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::matrix::Matrix;
use crate::subspace::Subspace;
use crate::system::LinearSystem;

/// `φ(u, v) = uᵀ · gram · v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::shape("bilinear form", gram.rows(), gram.cols()));
        }
        Ok(BilinearForm { gram })
    }

    pub fn zero(p: Prime, dim: usize) -> Self {
        BilinearForm {
            gram: Matrix::zeros(p, dim, dim),
        }
    }

    pub fn from_flat(p: Prime, dim: usize, flat: &[u8]) -> Result<Self> {
        BilinearForm::new(Matrix::new(p, dim, dim, flat.to_vec())?)
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn modulus(&self) -> Prime {
        self.gram.modulus()
    }

    pub fn flatten(&self) -> &[u8] {
        self.gram.data()
    }

    /// `φ(e_i, e_j)`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.gram.get(i, j)
    }

    pub fn eval(&self, u: &[u8], v: &[u8]) -> Result<u8> {
        let gv = self.gram.mul_vec(v)?;
        if u.len() != gv.len() {
            return Err(Error::shape("bilinear form argument", gv.len(), u.len()));
        }
        let p = self.modulus();
        Ok(u.iter().zip(&gv).fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b))))
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    pub fn add(&self, other: &BilinearForm) -> Result<BilinearForm> {
        BilinearForm::new(self.gram.add(&other.gram)?)
    }

    pub fn scale(&self, s: u8) -> BilinearForm {
        BilinearForm {
            gram: self.gram.scale(s),
        }
    }
}

/// `Z¹_λ`, `B¹_λ` and the dimension of their quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleSpace {
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub hc1_dim: usize,
}

fn require_commutative(alg: &AssocAlgebra) -> Result<()> {
    alg.check_commutative().map_err(|e| {
        Error::Unsupported(format!(
            "cyclic cohomology is only implemented for commutative algebras ({e})"
        ))
    })
}

/// All cyclic 1-cocycles, as a subspace of flattened `dim × dim` grams.
pub fn cyclic_cocycles(alg: &AssocAlgebra) -> Result<Subspace> {
    require_commutative(alg)?;
    let d = alg.dim();
    let var = |a: usize, b: usize| a * d + b;
    let mut sys = LinearSystem::new(alg.modulus(), d * d);
    for a in 0..d {
        for b in a..d {
            sys.push([(var(a, b), 1), (var(b, a), 1)]);
        }
    }
    let mut terms: Vec<(usize, i64)> = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let ab = alg.product(a, b);
            for c in 0..d {
                let bc = alg.product(b, c);
                let ca = alg.product(c, a);
                if ab.is_empty() && bc.is_empty() && ca.is_empty() {
                    continue;
                }
                terms.clear();
                terms.extend(ab.iter().map(|&(k, x)| (var(k, c), x as i64)));
                terms.extend(bc.iter().map(|&(k, x)| (var(a, k), -(x as i64))));
                terms.extend(ca.iter().map(|&(k, x)| (var(k, b), x as i64)));
                sys.push(terms.iter().copied());
            }
        }
    }
    Ok(sys.nullspace())
}

/// Image of `ψ ↦ ((a, b) ↦ ψ(ab) − ψ(ba))`.
pub fn cyclic_coboundaries(alg: &AssocAlgebra) -> Subspace {
    let d = alg.dim();
    let p = alg.modulus();
    let images = (0..d).map(|m| {
        let mut flat = vec![0u8; d * d];
        for a in 0..d {
            for b in 0..d {
                let coeff = |i: usize, j: usize| {
                    alg.product(i, j)
                        .iter()
                        .find(|&&(k, _)| k == m)
                        .map_or(0, |&(_, c)| c)
                };
                flat[a * d + b] = p.sub(coeff(a, b), coeff(b, a));
            }
        }
        flat
    });
    Subspace::from_vectors(p, d * d, images).expect("flattened forms have length dim²")
}

/// `HC¹(A)` for a commutative algebra.
pub fn hc1(alg: &AssocAlgebra) -> Result<CocycleSpace> {
    let cocycles = cyclic_cocycles(alg)?;
    let coboundaries = cyclic_coboundaries(alg);
    if !coboundaries.is_subspace_of(&cocycles)? {
        return Err(Error::Consistency(
            "cyclic coboundaries are not contained in the cocycles".into(),
        ));
    }
    let hc1_dim = cocycles.dim() - coboundaries.dim();
    Ok(CocycleSpace {
        cocycles,
        coboundaries,
        hc1_dim,
    })
}

/// `n · p^(n−1)`.
pub fn hc1_dimension_formula(p: Prime, n: u32) -> u64 {
    assert!(n >= 1, "n must be positive");
    n as u64 * (p.get() as u64).pow(n - 1)
}

/// The cocycle on `O_1` with `α(x^i, x^j) = i` when `i + j = p`, else 0.
pub fn alpha_cocycle(p: Prime) -> BilinearForm {
    let d = p.as_usize();
    let mut gram = Matrix::zeros(p, d, d);
    for i in 1..d {
        gram.set(i, d - i, i as u8);
    }
    BilinearForm { gram }
}

/// Checks both cyclic cocycle identities on every basis pair and triple by
/// direct evaluation. Returns the first failing basis tuple.
pub fn cyclic_cocycle_violation(
    alg: &AssocAlgebra,
    form: &BilinearForm,
) -> Result<Option<Vec<usize>>> {
    let d = alg.dim();
    if form.dim() != d {
        return Err(Error::shape("cyclic cochain", d, form.dim()));
    }
    let p = alg.modulus();
    for a in 0..d {
        for b in 0..d {
            if p.add(form.at(a, b), form.at(b, a)) != 0 {
                return Ok(Some(vec![a, b]));
            }
        }
    }
    let basis = |i: usize| {
        let mut v = vec![0u8; d];
        v[i] = 1;
        v
    };
    let prods: Vec<Vec<Vec<u8>>> = (0..d)
        .map(|a| (0..d).map(|b| alg.multiply_unchecked(&basis(a), &basis(b))).collect())
        .collect();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let t1 = form.eval(&prods[a][b], &basis(c))?;
                let t2 = form.eval(&basis(a), &prods[b][c])?;
                let t3 = form.eval(&prods[c][a], &basis(b))?;
                if p.add(p.sub(t1, t2), t3) != 0 {
                    return Ok(Some(vec![a, b, c]));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_cyclic_cocycle(alg: &AssocAlgebra, form: &BilinearForm) -> Result<bool> {
    Ok(cyclic_cocycle_violation(alg, form)?.is_none())
}

/// `(Dφ)(a, b) = φ(D a, b) + φ(a, D b)`, i.e. `gram' = Dᵀ·gram + gram·D`.
pub fn derivation_act(
    alg: &AssocAlgebra,
    op: &LinearOperator,
    form: &BilinearForm,
) -> Result<BilinearForm> {
    let d = alg.dim();
    if op.dim() != d || form.dim() != d {
        return Err(Error::shape("derivation action", d, op.dim().max(form.dim())));
    }
    let p = alg.modulus();
    let dm = op.matrix();
    let g = form.gram();
    // (Dᵀ G + G D)[i][j] = Σ_k D[k][i] G[k][j] + Σ_k G[i][k] D[k][j]
    let mut out = Matrix::zeros(p, d, d);
    for k in 0..d {
        for (i, &c) in dm.row(k).iter().enumerate() {
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let left = p.mul(c, g.get(k, j));
                let right = p.mul(c, g.get(j, k));
                out.set(i, j, p.add(out.get(i, j), left));
                out.set(j, i, p.add(out.get(j, i), right));
            }
        }
    }
    BilinearForm::new(out)
}

/// Cocycle representatives whose classes are fixed by every operator:
/// `{φ ∈ Z¹_λ : Dφ ∈ B¹_λ for all D}`.
///
/// For commutative algebras `B¹_λ = 0`, and this is exactly the space of
/// invariant cocycles, whose dimension is that of `HC¹(A)^ops`. When
/// coboundaries are present the returned space contains them, and the
/// invariant class dimension is `dim − dim B¹_λ`.
pub fn invariant_classes(alg: &AssocAlgebra, ops: &[LinearOperator]) -> Result<Subspace> {
    alg.require_derivations(ops)?;
    let space = hc1(alg)?;
    invariant_cocycles_in(alg, &space, ops)
}

/// `dim HC¹(A)^ops`, the number of invariant classes.
pub fn invariant_class_dim(alg: &AssocAlgebra, ops: &[LinearOperator]) -> Result<usize> {
    alg.require_derivations(ops)?;
    let space = hc1(alg)?;
    Ok(invariant_cocycles_in(alg, &space, ops)?.dim() - space.coboundaries.dim())
}

pub(crate) fn invariant_cocycles_in(
    alg: &AssocAlgebra,
    space: &CocycleSpace,
    ops: &[LinearOperator],
) -> Result<Subspace> {
    let d = alg.dim();
    let p = alg.modulus();
    let z: Vec<BilinearForm> = space
        .cocycles
        .vectors()
        .map(|v| BilinearForm::from_flat(p, d, v))
        .collect::<Result<_>>()?;
    let b_dim = space.coboundaries.dim();
    // Unknowns: coefficients on Z (z.len()), then for each operator a block of
    // coefficients on B absorbing the coboundary part of Dφ.
    let cols = z.len() + ops.len() * b_dim;
    let mut red = Reducer::new(p, cols);
    for (o, op) in ops.iter().enumerate() {
        if red.rank() == cols {
            break;
        }
        let acted: Vec<BilinearForm> = z
            .par_iter()
            .map(|f| derivation_act(alg, op, f))
            .collect::<Result<_>>()?;
        let offset = z.len() + o * b_dim;
        for e in 0..d * d {
            let mut row = vec![0u8; cols];
            for (l, f) in acted.iter().enumerate() {
                row[l] = f.flatten()[e];
            }
            for (l, bv) in space.coboundaries.vectors().enumerate() {
                row[offset + l] = p.neg(bv[e]);
            }
            if row.iter().any(|&x| x != 0) && red.push(row).is_some() && red.rank() == cols {
                break;
            }
        }
    }
    let (rows, pivots) = red.into_rref();
    let coeffs = kernel_vectors(p, cols, &rows, &pivots);
    let forms = coeffs.iter().map(|c| {
        let mut flat = vec![0u8; d * d];
        for (l, f) in z.iter().enumerate() {
            p.axpy(&mut flat, c[l], f.flatten());
        }
        flat
    });
    Subspace::from_vectors(p, d * d, forms)?.sum(&space.coboundaries)
}

/// The bilinear form `(b, b') ↦ f(b b')` for a functional `f`.
pub fn functional_composite(alg: &AssocAlgebra, functional: &[u8]) -> Result<BilinearForm> {
    let d = alg.dim();
    if functional.len() != d {
        return Err(Error::shape("functional", d, functional.len()));
    }
    let p = alg.modulus();
    let mut gram = Matrix::zeros(p, d, d);
    for (i, j) in alg.nonzero_pairs() {
        let v = alg
            .product(i, j)
            .iter()
            .fold(0u8, |acc, &(k, c)| p.add(acc, p.mul(c, functional[k])));
        gram.set(i, j, v);
    }
    BilinearForm::new(gram)
}

/// The cochain `(a⊗b, a'⊗b') ↦ φ(a,a')·β(bb') + α(aa')·ψ(b,b')` on `A ⊗ B`.
pub fn kunneth_assemble(
    a: &AssocAlgebra,
    b: &AssocAlgebra,
    phi: &BilinearForm,
    beta: &[u8],
    alpha: &[u8],
    psi: &BilinearForm,
) -> Result<BilinearForm> {
    if !a.is_unital() || !b.is_unital() {
        return Err(Error::Precondition(
            "Künneth assembly requires unital factors".into(),
        ));
    }
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            left: a.modulus().get(),
            right: b.modulus().get(),
        });
    }
    let (da, db) = (a.dim(), b.dim());
    if phi.dim() != da {
        return Err(Error::shape("Künneth φ", da, phi.dim()));
    }
    if psi.dim() != db {
        return Err(Error::shape("Künneth ψ", db, psi.dim()));
    }
    if !is_cyclic_cocycle(a, phi)? || !is_cyclic_cocycle(b, psi)? {
        return Err(Error::Precondition(
            "Künneth assembly requires φ and ψ to be cyclic cocycles".into(),
        ));
    }
    let beta_form = functional_composite(b, beta)?;
    let alpha_form = functional_composite(a, alpha)?;
    let p = a.modulus();
    let d = da * db;
    let mut gram = Matrix::zeros(p, d, d);
    for i in 0..da {
        for i2 in 0..da {
            let (f, g) = (phi.at(i, i2), alpha_form.at(i, i2));
            if f == 0 && g == 0 {
                continue;
            }
            for j in 0..db {
                for j2 in 0..db {
                    let v = p.add(
                        p.mul(f, beta_form.at(j, j2)),
                        p.mul(g, psi.at(j, j2)),
                    );
                    if v != 0 {
                        gram.set(i * db + j, i2 * db + j2, v);
                    }
                }
            }
        }
    }
    BilinearForm::new(gram)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KunnethReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub hc1_a: usize,
    pub hc1_b: usize,
    /// `dim HC¹(A ⊗ B)`, computed on the tensor product.
    pub lhs: usize,
    /// `dim HC¹(A)·dim B + dim A·dim HC¹(B)`.
    pub rhs: usize,
    /// Rank of the assembled cocycles built from factor bases.
    pub assembled_rank: usize,
    /// Every assembled cochain passed the cocycle check on `A ⊗ B`.
    pub assembled_are_cocycles: bool,
    pub matches: bool,
}

/// Compares `HC¹(A ⊗ B)` with the two-summand Künneth prediction and checks
/// that cocycles assembled from the factors span a space of the predicted size.
pub fn kunneth_check(a: &AssocAlgebra, b: &AssocAlgebra) -> Result<KunnethReport> {
    let tensor = a.tensor_product(b)?;
    let ha = hc1(a)?;
    let hb = hc1(b)?;
    let hab = hc1(&tensor)?;
    let p = a.modulus();
    let (da, db) = (a.dim(), b.dim());
    let unit_vec = |d: usize, i: usize| {
        let mut v = vec![0u8; d];
        v[i] = 1;
        v
    };
    let zero_a = BilinearForm::zero(p, da);
    let zero_b = BilinearForm::zero(p, db);
    let mut assembled: Vec<Vec<u8>> = Vec::new();
    for phi in ha.cocycles.vectors() {
        let phi = BilinearForm::from_flat(p, da, phi)?;
        for j in 0..db {
            let f = kunneth_assemble(a, b, &phi, &unit_vec(db, j), &vec![0; da], &zero_b)?;
            assembled.push(f.flatten().to_vec());
        }
    }
    for psi in hb.cocycles.vectors() {
        let psi = BilinearForm::from_flat(p, db, psi)?;
        for i in 0..da {
            let f = kunneth_assemble(a, b, &zero_a, &vec![0; db], &unit_vec(da, i), &psi)?;
            assembled.push(f.flatten().to_vec());
        }
    }
    let mut all_in = true;
    for f in &assembled {
        all_in &= hab.cocycles.contains(f)?;
    }
    let span = Subspace::from_vectors(p, da * db * da * db, &assembled)?;
    let rhs = ha.hc1_dim * db + da * hb.hc1_dim;
    let assembled_rank = span.dim();
    Ok(KunnethReport {
        dim_a: da,
        dim_b: db,
        hc1_a: ha.hc1_dim,
        hc1_b: hb.hc1_dim,
        lhs: hab.hc1_dim,
        rhs,
        assembled_rank,
        assembled_are_cocycles: all_in,
        matches: hab.hc1_dim == rhs && assembled_rank == rhs && all_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::{monomial_derivation, truncated_polynomial_algebra, MultiIndex};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn o(q: u64, n: usize) -> AssocAlgebra {
        truncated_polynomial_algebra(p(q), n).unwrap()
    }

    fn x_k_d_dx(q: u64, k: u8) -> LinearOperator {
        let mi = MultiIndex::new(vec![k], p(q)).unwrap();
        monomial_derivation(p(q), 1, &mi, 0)
    }

    #[test]
    fn cocycles_of_o1_p5() {
        assert_eq!(cyclic_cocycles(&o(5, 1)).unwrap().dim(), 1);
    }

    #[test]
    fn cocycles_of_ground_field_vanish() {
        for q in [2, 3, 5] {
            let k = AssocAlgebra::ground_field(p(q));
            assert!(cyclic_cocycles(&k).unwrap().is_zero());
        }
    }

    #[test]
    fn cocycles_of_o1_p2_spanned_by_xx() {
        let z = cyclic_cocycles(&o(2, 1)).unwrap();
        assert_eq!(z.dim(), 1);
        // φ(x, x) = 1 sits at flat index 1*2 + 1.
        assert_eq!(z.basis().row(0), &[0, 0, 0, 1]);
    }

    #[test]
    fn non_commutative_input_rejected() {
        let labels = vec!["e1".into(), "e2".into()];
        let a = AssocAlgebra::new(p(3), labels, [(0, 0, 0, 1), (0, 1, 1, 1)]).unwrap();
        assert!(matches!(cyclic_cocycles(&a), Err(Error::Unsupported(_))));
        assert!(matches!(hc1(&a), Err(Error::Unsupported(_))));
    }

    #[test]
    fn coboundaries() {
        assert!(cyclic_coboundaries(&o(3, 2)).is_zero());
        let k = AssocAlgebra::ground_field(p(3));
        assert!(cyclic_coboundaries(&k.direct_sum(&k).unwrap()).is_zero());

        // e1 e1 = e1, e1 e2 = e2, e2 e1 = 0: the e2-coefficient functional has
        // δψ(e1, e2) = 1.
        let labels = vec!["e1".into(), "e2".into()];
        let a = AssocAlgebra::new(p(3), labels, [(0, 0, 0, 1), (0, 1, 1, 1)]).unwrap();
        let b = cyclic_coboundaries(&a);
        assert_eq!(b.dim(), 1);
        assert!(b.contains(&[0, 1, 2, 0]).unwrap());
    }

    #[test]
    fn hc1_of_o1() {
        for q in [2, 3, 5, 7] {
            assert_eq!(hc1(&o(q, 1)).unwrap().hc1_dim, 1);
        }
    }

    #[test]
    fn dimension_formula_values() {
        assert_eq!(hc1_dimension_formula(p(2), 1), 1);
        assert_eq!(hc1_dimension_formula(p(3), 2), 6);
        assert_eq!(hc1_dimension_formula(p(5), 2), 10);
    }

    #[test]
    fn alpha_values() {
        let a5 = alpha_cocycle(p(5));
        assert_eq!(a5.at(2, 3), 2);
        assert_eq!(a5.at(1, 4), 1);
        assert_eq!(a5.at(4, 1), 4);
        assert_eq!(alpha_cocycle(p(3)).at(1, 1), 0);
        for q in [2, 3, 5, 7] {
            assert!(is_cyclic_cocycle(&o(q, 1), &alpha_cocycle(p(q))).unwrap());
        }
    }

    #[test]
    fn alpha_is_invariant_under_witt_basis() {
        for q in [2, 3, 5, 7] {
            let alg = o(q, 1);
            let alpha = alpha_cocycle(p(q));
            for k in 0..q as u8 {
                let acted = derivation_act(&alg, &x_k_d_dx(q, k), &alpha).unwrap();
                assert!(acted.is_zero(), "p={q}, k={k}");
            }
        }
    }

    #[test]
    fn action_on_zero_form() {
        let alg = o(3, 1);
        let z = BilinearForm::zero(p(3), 3);
        assert!(derivation_act(&alg, &x_k_d_dx(3, 2), &z).unwrap().is_zero());
    }

    #[test]
    fn invariant_classes_examples() {
        let alg = o(5, 1);
        let inv = invariant_classes(&alg, &alg.derivation_basis()).unwrap();
        assert_eq!(inv.dim(), 1);
        assert!(inv.contains(alpha_cocycle(p(5)).flatten()).unwrap());

        let alg = o(3, 2);
        assert!(invariant_classes(&alg, &alg.derivation_basis()).unwrap().is_zero());

        let alg = o(3, 2);
        assert_eq!(
            invariant_classes(&alg, &[]).unwrap(),
            cyclic_cocycles(&alg).unwrap()
        );
    }

    #[test]
    fn invariant_classes_rejects_non_derivations() {
        let alg = o(3, 1);
        let not_der = LinearOperator::identity(p(3), 3);
        assert!(matches!(
            invariant_classes(&alg, &[not_der]),
            Err(Error::NotDerivation { index: 0, .. })
        ));
    }

    #[test]
    fn kunneth_assemble_examples() {
        let a = o(3, 1);
        let t = a.tensor_product(&a).unwrap();
        let alpha = alpha_cocycle(p(3));
        let zero = BilinearForm::zero(p(3), 3);
        let unit_functional = [1u8, 0, 0];

        let f1 = kunneth_assemble(&a, &a, &alpha, &unit_functional, &[0; 3], &zero).unwrap();
        assert!(!f1.is_zero());
        assert!(is_cyclic_cocycle(&t, &f1).unwrap());

        let f0 = kunneth_assemble(&a, &a, &zero, &[0; 3], &[0; 3], &zero).unwrap();
        assert!(f0.is_zero());

        let f2 = kunneth_assemble(&a, &a, &zero, &[0; 3], &unit_functional, &alpha).unwrap();
        assert!(is_cyclic_cocycle(&t, &f2).unwrap());
        let span = Subspace::from_vectors(p(3), 81, [f1.flatten(), f2.flatten()]).unwrap();
        assert_eq!(span.dim(), 2);
    }

    #[test]
    fn kunneth_assemble_rejects_non_cocycles() {
        let a = o(3, 1);
        let not_cocycle = BilinearForm::from_flat(p(3), 3, &[1, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let zero = BilinearForm::zero(p(3), 3);
        assert!(matches!(
            kunneth_assemble(&a, &a, &not_cocycle, &[1, 0, 0], &[0; 3], &zero),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kunneth_with_ground_field_factor() {
        let k = AssocAlgebra::ground_field(p(3));
        let r = kunneth_check(&k, &o(3, 1)).unwrap();
        assert_eq!((r.lhs, r.rhs, r.assembled_rank), (1, 1, 1));
        assert!(r.matches);
    }
}

//! Second Chevalley–Eilenberg cohomology with trivial coefficients, invariant
//! symmetric forms, and the decomposition of `H²((S ⊗ O_n) ⋊ 𝒟)`.
//!
//! 2-cochains are alternating (zero diagonal) in every characteristic. When
//! solving, they are parametrised by their strictly upper triangular entries.

use serde::Serialize;

use crate::assoc::AssocAlgebra;
use crate::cyclic::{hc1, invariant_cocycles_in, BilinearForm};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::lie::{DerivationAlgebra, LieAlgebra, Part, SemidirectSum};
use crate::matrix::Matrix;
use crate::subspace::Subspace;
use crate::system::LinearSystem;

/// Index of the pair `i < j` among the strictly upper triangular entries.
#[inline]
pub fn pair_index(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * (2 * d - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

/// An alternating bilinear form on a Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoCochain {
    gram: Matrix,
}

impl TwoCochain {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::shape("2-cochain", gram.rows(), gram.cols()));
        }
        let p = gram.modulus();
        let d = gram.rows();
        for i in 0..d {
            if gram.get(i, i) != 0 {
                return Err(Error::Precondition(format!(
                    "2-cochain has nonzero diagonal entry at {i}"
                )));
            }
            for j in i + 1..d {
                if p.add(gram.get(i, j), gram.get(j, i)) != 0 {
                    return Err(Error::Precondition(format!(
                        "2-cochain is not antisymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(TwoCochain { gram })
    }

    pub fn zero(p: Prime, d: usize) -> Self {
        TwoCochain {
            gram: Matrix::zeros(p, d, d),
        }
    }

    /// Expands strictly-upper-triangular coordinates into a full gram matrix.
    pub fn from_pairs(p: Prime, d: usize, pairs: &[u8]) -> Result<Self> {
        if pairs.len() != pair_count(d) {
            return Err(Error::shape("2-cochain coordinates", pair_count(d), pairs.len()));
        }
        let mut gram = Matrix::zeros(p, d, d);
        for i in 0..d {
            for j in i + 1..d {
                let v = pairs[pair_index(d, i, j)] % p.get();
                gram.set(i, j, v);
                gram.set(j, i, p.neg(v));
            }
        }
        Ok(TwoCochain { gram })
    }

    pub fn to_pairs(&self) -> Vec<u8> {
        let d = self.dim();
        let mut out = vec![0u8; pair_count(d)];
        for i in 0..d {
            for j in i + 1..d {
                out[pair_index(d, i, j)] = self.gram.get(i, j);
            }
        }
        out
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.gram.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }
}

/// `Z²`, `B²` (both in pair coordinates) and `dim H²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeCohomology {
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub h2_dim: usize,
}

impl CeCohomology {
    /// Cocycles whose classes form a basis of `H²`.
    pub fn class_representatives(&self) -> Result<Vec<Vec<u8>>> {
        self.cocycles.quotient_representatives(&self.coboundaries)
    }
}

/// `φ(v, e_z)` for an alternating form in pair coordinates, as linear terms.
fn pair_terms(d: usize, v: &[(usize, u8)], z: usize, sign: i64, out: &mut Vec<(usize, i64)>) {
    for &(m, c) in v {
        let c = c as i64 * sign;
        match m.cmp(&z) {
            std::cmp::Ordering::Less => out.push((pair_index(d, m, z), c)),
            std::cmp::Ordering::Greater => out.push((pair_index(d, z, m), -c)),
            std::cmp::Ordering::Equal => {}
        }
    }
}

/// `H²(L)` with trivial coefficients.
///
/// `Z²`: alternating `φ` with `φ([x,y],z) − φ([x,z],y) + φ([y,z],x) = 0`;
/// `B²`: forms `ψ([x, y])` for `ψ ∈ L^*`.
pub fn ce_h2(lie: &LieAlgebra) -> Result<CeCohomology> {
    let d = lie.dim();
    let p = lie.modulus();
    let n = pair_count(d);
    let mut sys = LinearSystem::new(p, n);
    let mut terms = Vec::new();
    for x in 0..d {
        for y in x + 1..d {
            let xy = lie.bracket_basis(x, y);
            for z in y + 1..d {
                let xz = lie.bracket_basis(x, z);
                let yz = lie.bracket_basis(y, z);
                if xy.is_empty() && xz.is_empty() && yz.is_empty() {
                    continue;
                }
                terms.clear();
                pair_terms(d, xy, z, 1, &mut terms);
                pair_terms(d, xz, y, -1, &mut terms);
                pair_terms(d, yz, x, 1, &mut terms);
                sys.push(terms.iter().copied());
            }
        }
    }
    let cocycles = sys.nullspace();
    let coboundaries = Subspace::from_vectors(
        p,
        n,
        (0..d).map(|m| {
            let mut v = vec![0u8; n];
            for i in 0..d {
                for j in i + 1..d {
                    if let Some(&(_, c)) = lie.bracket_basis(i, j).iter().find(|&&(k, _)| k == m) {
                        v[pair_index(d, i, j)] = c;
                    }
                }
            }
            v
        }),
    )?;
    if !coboundaries.is_subspace_of(&cocycles)? {
        return Err(Error::Consistency(
            "Chevalley–Eilenberg coboundaries are not cocycles".into(),
        ));
    }
    let h2_dim = cocycles.dim() - coboundaries.dim();
    Ok(CeCohomology {
        cocycles,
        coboundaries,
        h2_dim,
    })
}

/// First basis triple violating the 2-cocycle identity, by direct evaluation.
pub fn ce_cocycle_violation(lie: &LieAlgebra, phi: &TwoCochain) -> Result<Option<[usize; 3]>> {
    let d = lie.dim();
    if phi.dim() != d {
        return Err(Error::shape("2-cochain on Lie algebra", d, phi.dim()));
    }
    let p = lie.modulus();
    let eval = |v: &[(usize, u8)], z: usize| {
        v.iter()
            .fold(0u8, |acc, &(m, c)| p.add(acc, p.mul(c, phi.at(m, z))))
    };
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let t1 = eval(lie.bracket_basis(x, y), z);
                let t2 = eval(lie.bracket_basis(x, z), y);
                let t3 = eval(lie.bracket_basis(y, z), x);
                if p.add(p.sub(t1, t2), t3) != 0 {
                    return Ok(Some([x, y, z]));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_ce_cocycle(lie: &LieAlgebra, phi: &TwoCochain) -> Result<bool> {
    Ok(ce_cocycle_violation(lie, phi)?.is_none())
}

/// `ℬ(S)`: symmetric `β` with `β([x,y],z) = β(x,[y,z])`, as flattened grams.
pub fn symmetric_invariant_forms(lie: &LieAlgebra) -> Subspace {
    let d = lie.dim();
    let mut sys = LinearSystem::new(lie.modulus(), d * d);
    for i in 0..d {
        for j in i + 1..d {
            sys.push([(i * d + j, 1), (j * d + i, -1)]);
        }
    }
    let mut terms = Vec::new();
    for x in 0..d {
        for y in 0..d {
            let xy = lie.bracket_basis(x, y);
            for z in 0..d {
                let yz = lie.bracket_basis(y, z);
                if xy.is_empty() && yz.is_empty() {
                    continue;
                }
                terms.clear();
                terms.extend(xy.iter().map(|&(u, c)| (u * d + z, c as i64)));
                terms.extend(yz.iter().map(|&(u, c)| (x * d + u, -(c as i64))));
                sys.push(terms.iter().copied());
            }
        }
    }
    sys.nullspace()
}

/// Direct check that a gram matrix is symmetric and invariant.
pub fn is_symmetric_invariant(lie: &LieAlgebra, form: &BilinearForm) -> Result<bool> {
    let d = lie.dim();
    if form.dim() != d {
        return Err(Error::shape("bilinear form on Lie algebra", d, form.dim()));
    }
    let p = lie.modulus();
    for x in 0..d {
        for y in 0..d {
            if form.at(x, y) != form.at(y, x) {
                return Ok(false);
            }
            for z in 0..d {
                let l = lie
                    .bracket_basis(x, y)
                    .iter()
                    .fold(0u8, |acc, &(u, c)| p.add(acc, p.mul(c, form.at(u, z))));
                let r = lie
                    .bracket_basis(y, z)
                    .iter()
                    .fold(0u8, |acc, &(u, c)| p.add(acc, p.mul(c, form.at(x, u))));
                if l != r {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Data for one of the three summands of the decomposition.
#[derive(Debug, Clone)]
pub enum LiftData {
    /// `ω ∈ Z²(S)` and `f ∈ (A^*)^𝒟`: `Φ(s⊗a, t⊗b) = ω(s,t)·f(ab)`.
    SimpleCocycle { omega: TwoCochain, functional: Vec<u8> },
    /// `β ∈ ℬ(S)` and `φ ∈ HC¹(A)^𝒟`: `Φ(s⊗a, t⊗b) = β(s,t)·φ(a,b)`.
    InvariantForm { beta: BilinearForm, phi: BilinearForm },
    /// `η ∈ Z²(𝒟)`, placed on the derivation part.
    Derivation { eta: TwoCochain },
}

/// Extends factor data by zero to a 2-cochain on `(S ⊗ A) ⋊ 𝒟` and verifies
/// that the result is a 2-cocycle.
pub fn lift_two_cocycle(sd: &SemidirectSum, data: &LiftData) -> Result<TwoCochain> {
    let lie = &sd.lie;
    let p = lie.modulus();
    let d = lie.dim();
    let parts = lie
        .parts()
        .ok_or_else(|| Error::Precondition("Lie algebra has no semidirect labelling".into()))?;
    let alg = &sd.algebra;
    let (ds, da, dd) = (sd.simple.dim(), alg.dim(), sd.derivations.dim());
    let mut gram = Matrix::zeros(p, d, d);
    match data {
        LiftData::SimpleCocycle { omega, functional } => {
            if omega.dim() != ds || functional.len() != da {
                return Err(Error::shape("simple-cocycle lift data", ds + da, omega.dim() + functional.len()));
            }
            for (x, px) in parts.iter().enumerate() {
                for (y, py) in parts.iter().enumerate() {
                    if let (Part::Current { s, a }, Part::Current { s: t, a: b }) = (px, py) {
                        let w = omega.at(*s, *t);
                        if w == 0 {
                            continue;
                        }
                        let fab = alg
                            .product(*a, *b)
                            .iter()
                            .fold(0u8, |acc, &(k, c)| p.add(acc, p.mul(c, functional[k])));
                        gram.set(x, y, p.mul(w, fab));
                    }
                }
            }
        }
        LiftData::InvariantForm { beta, phi } => {
            if beta.dim() != ds || phi.dim() != da {
                return Err(Error::shape("invariant-form lift data", ds + da, beta.dim() + phi.dim()));
            }
            for (x, px) in parts.iter().enumerate() {
                for (y, py) in parts.iter().enumerate() {
                    if let (Part::Current { s, a }, Part::Current { s: t, a: b }) = (px, py) {
                        gram.set(x, y, p.mul(beta.at(*s, *t), phi.at(*a, *b)));
                    }
                }
            }
        }
        LiftData::Derivation { eta } => {
            if eta.dim() != dd {
                return Err(Error::shape("derivation lift data", dd, eta.dim()));
            }
            for (x, px) in parts.iter().enumerate() {
                for (y, py) in parts.iter().enumerate() {
                    if let (Part::Derivation(r), Part::Derivation(q)) = (px, py) {
                        gram.set(x, y, eta.at(*r, *q));
                    }
                }
            }
        }
    }
    let cochain = TwoCochain::new(gram)
        .map_err(|e| Error::Consistency(format!("lifted cochain is not alternating: {e}")))?;
    if let Some(t) = ce_cocycle_violation(lie, &cochain)? {
        return Err(Error::Consistency(format!(
            "lifted cochain fails the 2-cocycle identity on basis triple {t:?}"
        )));
    }
    Ok(cochain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
}

/// Factor dimensions behind each summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorDims {
    pub h2_s: usize,
    pub dual_invariants: usize,
    pub invariant_forms_s: usize,
    pub hc1_invariants: usize,
    pub h2_d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    /// `dim H²` of the semidirect sum, computed directly.
    pub lhs_dim: usize,
    /// `(h2(S)·dim (A^*)^𝒟, dim ℬ(S)·dim HC¹(A)^𝒟, h2(𝒟))`.
    pub summand_dims: [usize; 3],
    pub factors: FactorDims,
    pub rhs_dim: usize,
    /// Rank of the lifted summand bases modulo `B²` of the semidirect sum.
    pub lifted_rank: usize,
    pub verdict: Verdict,
}

/// Computes both sides of the decomposition of `H²((S ⊗ A) ⋊ 𝒟)` and the
/// rank of the lifted factor classes.
pub fn prop2_check(
    s: &LieAlgebra,
    a: &AssocAlgebra,
    der: &DerivationAlgebra,
) -> Result<DecompositionReport> {
    let sd = crate::lie::semidirect(s, a, der)?;
    let p = s.modulus();

    let ((lhs, simple), (algebra_side, h2d)) = rayon::join(
        || rayon::join(|| ce_h2(&sd.lie), || -> Result<_> {
            Ok((ce_h2(s)?, symmetric_invariant_forms(s)))
        }),
        || {
            rayon::join(
                || -> Result<_> {
                    let dual = a.dual_invariants(&der.action)?;
                    let space = hc1(a)?;
                    let inv = invariant_cocycles_in(a, &space, &der.action)?;
                    Ok((dual, inv, space.coboundaries))
                },
                || ce_h2(&der.lie),
            )
        },
    );
    let lhs = lhs?;
    let (h2s, bforms) = simple?;
    let (dual, hc1_inv, hc1_cob) = algebra_side?;
    let h2d = h2d?;

    let factors = FactorDims {
        h2_s: h2s.h2_dim,
        dual_invariants: dual.dim(),
        invariant_forms_s: bforms.dim(),
        hc1_invariants: hc1_inv.dim() - hc1_cob.dim(),
        h2_d: h2d.h2_dim,
    };
    let summand_dims = [
        factors.h2_s * factors.dual_invariants,
        factors.invariant_forms_s * factors.hc1_invariants,
        factors.h2_d,
    ];
    let rhs_dim = summand_dims.iter().sum();

    let (ds, da, dd) = (s.dim(), a.dim(), der.dim());
    let mut lifts: Vec<Vec<u8>> = Vec::new();
    for omega in h2s.class_representatives()? {
        let omega = TwoCochain::from_pairs(p, ds, &omega)?;
        for f in dual.vectors() {
            let data = LiftData::SimpleCocycle {
                omega: omega.clone(),
                functional: f.to_vec(),
            };
            lifts.push(lift_two_cocycle(&sd, &data)?.to_pairs());
        }
    }
    for beta in bforms.vectors() {
        let beta = BilinearForm::from_flat(p, ds, beta)?;
        for phi in hc1_inv.quotient_representatives(&hc1_cob)? {
            let data = LiftData::InvariantForm {
                beta: beta.clone(),
                phi: BilinearForm::from_flat(p, da, &phi)?,
            };
            lifts.push(lift_two_cocycle(&sd, &data)?.to_pairs());
        }
    }
    for eta in h2d.class_representatives()? {
        let data = LiftData::Derivation {
            eta: TwoCochain::from_pairs(p, dd, &eta)?,
        };
        lifts.push(lift_two_cocycle(&sd, &data)?.to_pairs());
    }
    let with_b = Subspace::from_vectors(
        p,
        pair_count(sd.lie.dim()),
        lifts
            .iter()
            .map(Vec::as_slice)
            .chain(lhs.coboundaries.vectors()),
    )?;
    let lifted_rank = with_b.dim() - lhs.coboundaries.dim();
    let verdict = if lhs.h2_dim == rhs_dim && lifted_rank == rhs_dim {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    Ok(DecompositionReport {
        lhs_dim: lhs.h2_dim,
        summand_dims,
        factors,
        rhs_dim,
        lifted_rank,
        verdict,
    })
}

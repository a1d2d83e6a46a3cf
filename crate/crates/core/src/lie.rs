//! Lie algebras by structure constants, and the constructions built from
//! truncated polynomial algebras: Jacobson–Witt algebras, derivation
//! subalgebras, current algebras `S ⊗ A`, and semidirect sums `(S ⊗ A) ⋊ 𝒟`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::assoc::{
    monomial_derivation, monomials, truncated_polynomial_algebra_with_cap, AssocAlgebra,
    LinearOperator, DEFAULT_SIZE_CAP,
};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::subspace::Subspace;

type Terms = Vec<(usize, u8)>;

/// Which summand of a semidirect sum a basis element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Part {
    /// `s ⊗ a` with `s` a basis index of `S` and `a` one of `A`.
    Current { s: usize, a: usize },
    /// The given basis element of the derivation algebra `𝒟`.
    Derivation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum LieViolation {
    NotAlternating { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
}

impl fmt::Display for LieViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieViolation::NotAlternating { i, j } if i == j => {
                write!(f, "[e{i}, e{i}] != 0")
            }
            LieViolation::NotAlternating { i, j } => {
                write!(f, "[e{i}, e{j}] != -[e{j}, e{i}]")
            }
            LieViolation::Jacobi { i, j, k } => {
                write!(f, "Jacobi identity fails on (e{i}, e{j}, e{k})")
            }
        }
    }
}

/// A finite-dimensional Lie algebra over GF(p).
///
/// The bracket table stores both `(i, j)` and `(j, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    p: Prime,
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), Terms>,
    parts: Option<Vec<Part>>,
}

fn accumulate<I>(p: Prime, dim: usize, quads: I) -> Result<BTreeMap<(usize, usize), Terms>>
where
    I: IntoIterator<Item = (usize, usize, usize, i64)>,
{
    let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, i64>> = BTreeMap::new();
    for (i, j, k, c) in quads {
        if let Some(&bad) = [i, j, k].iter().find(|&&x| x >= dim) {
            return Err(Error::Format(format!(
                "basis index {bad} out of range for dimension {dim}"
            )));
        }
        *acc.entry((i, j)).or_default().entry(k).or_insert(0) += c;
    }
    Ok(acc
        .into_iter()
        .filter_map(|(pair, terms)| {
            let terms: Terms = terms
                .into_iter()
                .map(|(k, c)| (k, p.reduce(c)))
                .filter(|&(_, c)| c != 0)
                .collect();
            (!terms.is_empty()).then_some((pair, terms))
        })
        .collect())
}

impl LieAlgebra {
    /// Builds a Lie algebra from the brackets `[e_i, e_j] += c e_k` with
    /// `i < j`; the opposite entries are filled in by antisymmetry. The result
    /// must pass [`lie_check`].
    pub fn new<I>(p: Prime, labels: Vec<String>, upper: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, i64)>,
    {
        let mut quads = Vec::new();
        for (i, j, k, c) in upper {
            if i >= j {
                return Err(Error::Precondition(format!(
                    "bracket entry ({i}, {j}) must have i < j"
                )));
            }
            quads.push((i, j, k, c));
            quads.push((j, i, k, -c));
        }
        let lie = LieAlgebra::from_table(p, labels, quads)?;
        lie.validate()?;
        Ok(lie)
    }

    /// Builds a bracket table verbatim, without any axiom checks.
    pub fn from_table<I>(p: Prime, labels: Vec<String>, quads: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, i64)>,
    {
        let brackets = accumulate(p, labels.len(), quads)?;
        Ok(LieAlgebra {
            p,
            labels,
            brackets,
            parts: None,
        })
    }

    /// The abelian Lie algebra of the given dimension.
    pub fn abelian(p: Prime, dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        LieAlgebra {
            p,
            labels,
            brackets: BTreeMap::new(),
            parts: None,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match lie_check(self).first() {
            None => Ok(()),
            Some(v) => Err(Error::NotLie(v.to_string())),
        }
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

    pub fn parts(&self) -> Option<&[Part]> {
        self.parts.as_deref()
    }

    /// Nonzero coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, u8)] {
        self.brackets.get(&(i, j)).map_or(&[], |t| t.as_slice())
    }

    /// Iterates over nonzero structure constants `(i, j, k, c)`, both orders.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, u8)> + '_ {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), t)| t.iter().map(move |&(k, c)| (i, j, k, c)))
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, u: &[u8], v: &[u8]) -> Result<Vec<u8>> {
        let d = self.dim();
        if u.len() != d || v.len() != d {
            return Err(Error::shape("Lie bracket argument", d, u.len().max(v.len())));
        }
        Ok(self.bracket_unchecked(u, v))
    }

    fn bracket_unchecked(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut out = vec![0u8; self.dim()];
        for (&(i, j), terms) in &self.brackets {
            let f = p.mul(u[i], v[j]);
            if f == 0 {
                continue;
            }
            for &(k, c) in terms {
                out[k] = p.add(out[k], p.mul(f, c));
            }
        }
        out
    }

    fn bracket_vector(&self, i: usize, j: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.dim()];
        for &(k, c) in self.bracket_basis(i, j) {
            v[k] = c;
        }
        v
    }

    /// The derived algebra `[L, L]`.
    pub fn derived_subalgebra(&self) -> Subspace {
        let d = self.dim();
        Subspace::from_vectors(
            self.p,
            d,
            self.brackets.keys().map(|&(i, j)| self.bracket_vector(i, j)),
        )
        .expect("bracket vectors have length dim")
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().dim() == self.dim()
    }

    /// The same algebra with its basis reordered: new basis element `i` is old
    /// element `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<LieAlgebra> {
        let d = self.dim();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::Precondition("not a permutation of the basis".into()));
        }
        let mut inv = vec![0; d];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        let quads = self
            .structure_constants()
            .map(|(i, j, k, c)| (inv[i], inv[j], inv[k], c as i64));
        LieAlgebra::from_table(self.p, labels, quads)
    }
}

/// Exhaustive check of the alternating law and the Jacobi identity.
///
/// Jacobi is evaluated on every unordered triple that touches a nonzero
/// bracket; on all other triples every term vanishes.
pub fn lie_check(lie: &LieAlgebra) -> Vec<LieViolation> {
    let p = lie.p;
    let mut out = Vec::new();
    for (&(i, j), terms) in &lie.brackets {
        if i == j {
            out.push(LieViolation::NotAlternating { i, j });
            continue;
        }
        let opposite = lie.bracket_basis(j, i);
        let negated: Terms = terms.iter().map(|&(k, c)| (k, p.neg(c))).collect();
        if opposite != negated.as_slice() && i < j {
            out.push(LieViolation::NotAlternating { i, j });
        }
    }
    // Pairs present only in the (j, i) slot.
    for &(i, j) in lie.brackets.keys() {
        if i > j && !lie.brackets.contains_key(&(j, i)) {
            out.push(LieViolation::NotAlternating { i: j, j: i });
        }
    }
    let d = lie.dim();
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for &(i, j) in lie.brackets.keys() {
        if i > j {
            continue;
        }
        for k in 0..d {
            let mut t = [i, j, k];
            t.sort_unstable();
            triples.push(t);
        }
    }
    triples.sort_unstable();
    triples.dedup();
    let jacobi = |&[x, y, z]: &[usize; 3]| {
        let mut acc = vec![0u8; d];
        for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
            for &(m, f) in lie.bracket_basis(a, b) {
                for &(k, g) in lie.bracket_basis(m, c) {
                    acc[k] = p.add(acc[k], p.mul(f, g));
                }
            }
        }
        acc.iter().all(|&v| v == 0)
    };
    out.par_extend(
        triples
            .par_iter()
            .filter(|t| !jacobi(t))
            .map(|&[i, j, k]| LieViolation::Jacobi { i, j, k }),
    );
    out
}

/// `sl_2` on the basis `(e, h, f)` with `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
pub fn sl2(p: Prime) -> Result<LieAlgebra> {
    if p.get() == 2 {
        return Err(Error::Precondition(
            "sl2 is not simple in characteristic 2".into(),
        ));
    }
    let labels = vec!["e".into(), "h".into(), "f".into()];
    // [e,h] = -2e, [e,f] = h, [h,f] = -2f
    LieAlgebra::new(p, labels, [(0, 1, 0, -2), (0, 2, 1, 1), (1, 2, 2, -2)])
}

/// A Lie algebra of derivations of `O_n` together with its action on `O_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationAlgebra {
    pub n: usize,
    pub lie: LieAlgebra,
    /// `action[r]` is basis element `r` as an operator on `O_n`.
    pub action: Vec<LinearOperator>,
}

impl DerivationAlgebra {
    /// The zero subalgebra of `Der(O_n)`.
    pub fn zero(p: Prime, n: usize) -> Self {
        DerivationAlgebra {
            n,
            lie: LieAlgebra::abelian(p, 0),
            action: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.action.len()
    }
}

fn derivation_label(mono: &str, var: usize, n: usize) -> String {
    let d = if n == 1 {
        "d/dx".to_string()
    } else {
        format!("d/dx{}", var + 1)
    };
    if mono == "1" {
        d
    } else {
        format!("{mono} {d}")
    }
}

pub fn witt(p: Prime, n: usize) -> Result<DerivationAlgebra> {
    witt_with_cap(p, n, DEFAULT_SIZE_CAP)
}

/// The Jacobson–Witt algebra `W(n; 1) = Der(O_n)` on the basis
/// `x^α ∂_i`, ordered by variable and then by monomial.
pub fn witt_with_cap(p: Prime, n: usize, cap: usize) -> Result<DerivationAlgebra> {
    let alg = truncated_polynomial_algebra_with_cap(p, n, cap)?;
    let monos = monomials(p, n);
    let mut action = Vec::with_capacity(n * monos.len());
    let mut labels = Vec::with_capacity(n * monos.len());
    for var in 0..n {
        for m in &monos {
            action.push(monomial_derivation(p, n, m, var));
            labels.push(derivation_label(&m.to_string(), var, n));
        }
    }
    let coords = |op: &LinearOperator| -> Result<Vec<u8>> {
        // A derivation of O_n is fixed by its values on x_1..x_n, and the
        // coefficient of x^α ∂_i is the x^α-coordinate of D(x_i).
        let mut c = Vec::with_capacity(action.len());
        for var in 0..n {
            let xi = generator_index(p, n, var);
            c.extend(op.column(xi));
        }
        let mut rebuilt = LinearOperator::zero(p, alg.dim());
        for (ci, basis_op) in c.iter().zip(&action) {
            if *ci != 0 {
                rebuilt = rebuilt.add(&basis_op.scale(*ci))?;
            }
        }
        if &rebuilt != op {
            return Err(Error::Consistency(
                "commutator of Witt basis elements is not in their span".into(),
            ));
        }
        Ok(c)
    };
    let rows = (0..action.len())
        .into_par_iter()
        .map(|r| -> Result<Vec<_>> {
            let mut quads = Vec::new();
            for q in r + 1..action.len() {
                let comm = action[r].commutator(&action[q])?;
                for (k, c) in coords(&comm)?.into_iter().enumerate() {
                    if c != 0 {
                        quads.push((r, q, k, c as i64));
                    }
                }
            }
            Ok(quads)
        })
        .collect::<Result<Vec<_>>>()?;
    let lie = LieAlgebra::new(p, labels, rows.into_iter().flatten())?;
    Ok(DerivationAlgebra { n, lie, action })
}

/// Index of the monomial `x_{var+1}` in the lexicographic basis of `O_n`.
fn generator_index(p: Prime, n: usize, var: usize) -> usize {
    p.as_usize().pow((n - 1 - var) as u32)
}

/// The Lie subalgebra of `Der(O_n)` generated by the given operators.
pub fn derivation_subalgebra(
    p: Prime,
    n: usize,
    gens: &[LinearOperator],
) -> Result<DerivationAlgebra> {
    derivation_subalgebra_with_cap(p, n, gens, DEFAULT_SIZE_CAP)
}

pub fn derivation_subalgebra_with_cap(
    p: Prime,
    n: usize,
    gens: &[LinearOperator],
    cap: usize,
) -> Result<DerivationAlgebra> {
    let alg = truncated_polynomial_algebra_with_cap(p, n, cap)?;
    alg.require_derivations(gens)?;
    let d = alg.dim();
    let mut span = Subspace::from_vectors(p, d * d, gens.iter().map(|g| g.flatten()))?;
    let witt_dim = n * d;
    loop {
        let ops: Vec<LinearOperator> = span
            .vectors()
            .map(|v| LinearOperator::from_flat(p, d, v))
            .collect::<Result<_>>()?;
        let mut new = Vec::new();
        for r in 0..ops.len() {
            for q in r + 1..ops.len() {
                let comm = ops[r].commutator(&ops[q])?;
                if !span.contains(comm.flatten())? {
                    new.push(comm.flatten().to_vec());
                }
            }
        }
        if new.is_empty() {
            break;
        }
        span = Subspace::from_vectors(
            p,
            d * d,
            span.vectors().map(<[u8]>::to_vec).chain(new),
        )?;
        if span.dim() > witt_dim {
            return Err(Error::Consistency(format!(
                "closure has dimension {} > dim Der(O_n) = {witt_dim}",
                span.dim()
            )));
        }
    }
    let action: Vec<LinearOperator> = span
        .vectors()
        .map(|v| LinearOperator::from_flat(p, d, v))
        .collect::<Result<_>>()?;
    let mut quads = Vec::new();
    for r in 0..action.len() {
        for q in r + 1..action.len() {
            let comm = action[r].commutator(&action[q])?;
            let coords = span
                .coordinates(comm.flatten())?
                .ok_or_else(|| Error::Consistency("subalgebra is not closed".into()))?;
            for (k, c) in coords.into_iter().enumerate() {
                if c != 0 {
                    quads.push((r, q, k, c as i64));
                }
            }
        }
    }
    let labels = (0..action.len()).map(|i| format!("D{i}")).collect();
    let lie = LieAlgebra::new(p, labels, quads)?;
    Ok(DerivationAlgebra { n, lie, action })
}

fn current_brackets(s: &LieAlgebra, a: &AssocAlgebra) -> Vec<(usize, usize, usize, i64)> {
    let p = s.p;
    let da = a.dim();
    let mut quads = Vec::new();
    for (&(si, ti), sterms) in &s.brackets {
        for (ai, bi) in a.nonzero_pairs() {
            for &(u, c) in sterms {
                for &(k, m) in a.product(ai, bi) {
                    quads.push((si * da + ai, ti * da + bi, u * da + k, p.mul(c, m) as i64));
                }
            }
        }
    }
    quads
}

fn check_same_modulus(s: &LieAlgebra, a: &AssocAlgebra) -> Result<()> {
    if s.p != a.modulus() {
        return Err(Error::ModulusMismatch {
            left: s.p.get(),
            right: a.modulus().get(),
        });
    }
    Ok(())
}

fn current_labels(s: &LieAlgebra, a: &AssocAlgebra) -> (Vec<String>, Vec<Part>) {
    let mut labels = Vec::new();
    let mut parts = Vec::new();
    for (si, sl) in s.labels.iter().enumerate() {
        for (ai, al) in a.labels().iter().enumerate() {
            labels.push(format!("{sl}⊗{al}"));
            parts.push(Part::Current { s: si, a: ai });
        }
    }
    (labels, parts)
}

/// `S ⊗ A` with `[s⊗a, t⊗b] = [s,t] ⊗ ab`.
pub fn current_algebra(s: &LieAlgebra, a: &AssocAlgebra) -> Result<LieAlgebra> {
    check_same_modulus(s, a)?;
    a.check_commutative()?;
    if !a.is_unital() {
        return Err(Error::Precondition(
            "current algebra requires a unital commutative algebra".into(),
        ));
    }
    let (labels, parts) = current_labels(s, a);
    let mut lie = LieAlgebra::from_table(s.p, labels, current_brackets(s, a))?;
    lie.validate()?;
    lie.parts = Some(parts);
    Ok(lie)
}

/// `(S ⊗ A) ⋊ 𝒟` together with the factors it was built from.
#[derive(Debug, Clone)]
pub struct SemidirectSum {
    pub simple: LieAlgebra,
    pub algebra: AssocAlgebra,
    pub derivations: DerivationAlgebra,
    pub lie: LieAlgebra,
}

impl SemidirectSum {
    pub fn current_dim(&self) -> usize {
        self.simple.dim() * self.algebra.dim()
    }
}

/// Builds `(S ⊗ A) ⋊ 𝒟` with `[Δ, s⊗a] = s ⊗ Δ(a)` and `𝒟` bracketed as given.
/// The current part comes first in the basis, then `𝒟`.
pub fn semidirect(
    s: &LieAlgebra,
    a: &AssocAlgebra,
    der: &DerivationAlgebra,
) -> Result<SemidirectSum> {
    check_same_modulus(s, a)?;
    a.check_commutative()?;
    if der.lie.p != s.p {
        return Err(Error::ModulusMismatch {
            left: s.p.get(),
            right: der.lie.p.get(),
        });
    }
    if der.lie.dim() != der.action.len() {
        return Err(Error::shape("derivation action list", der.lie.dim(), der.action.len()));
    }
    for op in &der.action {
        if op.dim() != a.dim() {
            return Err(Error::shape("derivation action", a.dim(), op.dim()));
        }
    }
    a.require_derivations(&der.action)?;
    let p = s.p;
    let da = a.dim();
    let offset = s.dim() * da;
    let (mut labels, mut parts) = current_labels(s, a);
    labels.extend(der.lie.labels.iter().cloned());
    parts.extend((0..der.dim()).map(Part::Derivation));

    let mut quads = current_brackets(s, a);
    for (r, op) in der.action.iter().enumerate() {
        for si in 0..s.dim() {
            for ai in 0..da {
                for k in 0..da {
                    let c = op.matrix().get(k, ai);
                    if c != 0 {
                        let (x, y, z) = (offset + r, si * da + ai, si * da + k);
                        quads.push((x, y, z, c as i64));
                        quads.push((y, x, z, p.neg(c) as i64));
                    }
                }
            }
        }
    }
    quads.extend(
        der.lie
            .structure_constants()
            .map(|(i, j, k, c)| (offset + i, offset + j, offset + k, c as i64)),
    );
    let mut lie = LieAlgebra::from_table(p, labels, quads)?;
    lie.validate()?;
    lie.parts = Some(parts);
    Ok(SemidirectSum {
        simple: s.clone(),
        algebra: a.clone(),
        derivations: der.clone(),
        lie,
    })
}

//! JSON file formats for associative algebras, Lie algebras and derivation
//! generators.
//!
//! All indices are zero-based. Coefficients may be any integer and are
//! reduced modulo `p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assoc::{AssocAlgebra, LinearOperator};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub p: u64,
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub products: Vec<[i64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieFile {
    pub p: u64,
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<[i64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub p: u64,
    pub n: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
}

/// Derivation generators read from a file, not yet closed under brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub p: Prime,
    pub n: usize,
    pub generators: Vec<LinearOperator>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn labels_for(dim: usize, labels: Vec<String>) -> Result<Vec<String>> {
    if labels.is_empty() {
        return Ok((0..dim).map(|i| format!("e{i}")).collect());
    }
    if labels.len() != dim {
        return Err(Error::Format(format!(
            "{} labels given for dimension {dim}",
            labels.len()
        )));
    }
    Ok(labels)
}

fn index(raw: i64, dim: usize) -> Result<usize> {
    usize::try_from(raw)
        .ok()
        .filter(|&x| x < dim)
        .ok_or_else(|| Error::Format(format!("basis index {raw} out of range for dimension {dim}")))
}

fn quad(q: [i64; 4], dim: usize) -> Result<(usize, usize, usize, i64)> {
    Ok((index(q[0], dim)?, index(q[1], dim)?, index(q[2], dim)?, q[3]))
}

/// Parses and validates a commutative associative algebra.
pub fn parse_algebra(text: &str) -> Result<AssocAlgebra> {
    let file: AlgebraFile = from_json(text)?;
    let p = Prime::new(file.p)?;
    let labels = labels_for(file.dim, file.labels)?;
    let quads = file
        .products
        .iter()
        .map(|&q| quad(q, file.dim))
        .collect::<Result<Vec<_>>>()?;
    let names = labels.clone();
    let alg = AssocAlgebra::new(p, labels, quads).map_err(|e| match e {
        Error::NotAssociative { i, j, k } => Error::Format(format!(
            "products are not associative on ({}, {}, {}) (indices {i}, {j}, {k})",
            names[i], names[j], names[k]
        )),
        other => other,
    })?;
    alg.check_commutative().map_err(|e| match e {
        Error::NotCommutative { i, j } => Error::Format(format!(
            "products are not commutative: {a}*{b} != {b}*{a} (indices {i}, {j})",
            a = alg.labels()[i],
            b = alg.labels()[j]
        )),
        other => other,
    })?;
    Ok(alg)
}

pub fn emit_algebra(alg: &AssocAlgebra) -> String {
    let file = AlgebraFile {
        p: alg.modulus().get().into(),
        dim: alg.dim(),
        labels: alg.labels().to_vec(),
        products: alg
            .structure_constants()
            .map(|(i, j, k, c)| [i as i64, j as i64, k as i64, c.into()])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("algebra file serializes")
}

/// Parses and validates a Lie algebra. Entries with `i > j` are converted by
/// antisymmetry; if both orders of a pair are present they must agree.
pub fn parse_lie(text: &str) -> Result<LieAlgebra> {
    let file: LieFile = from_json(text)?;
    let p = Prime::new(file.p)?;
    let labels = labels_for(file.dim, file.labels)?;
    let mut upper: BTreeMap<(usize, usize), BTreeMap<usize, i64>> = BTreeMap::new();
    let mut lower: BTreeMap<(usize, usize), BTreeMap<usize, i64>> = BTreeMap::new();
    for &q in &file.brackets {
        let (i, j, k, c) = quad(q, file.dim)?;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => *upper.entry((i, j)).or_default().entry(k).or_insert(0) += c,
            std::cmp::Ordering::Greater => {
                *lower.entry((j, i)).or_default().entry(k).or_insert(0) -= c
            }
            std::cmp::Ordering::Equal => {
                if p.reduce(c) != 0 {
                    return Err(Error::Format(format!(
                        "[{l}, {l}] must vanish (index {i})",
                        l = labels[i]
                    )));
                }
            }
        }
    }
    let reduced = |t: &BTreeMap<usize, i64>| -> BTreeMap<usize, u8> {
        t.iter()
            .map(|(&k, &c)| (k, p.reduce(c)))
            .filter(|&(_, c)| c != 0)
            .collect()
    };
    for (pair, t) in &lower {
        match upper.get(pair) {
            Some(u) if reduced(u) != reduced(t) => {
                let (i, j) = *pair;
                return Err(Error::Format(format!(
                    "[{a}, {b}] and [{b}, {a}] are given inconsistently (indices {i}, {j})",
                    a = labels[i],
                    b = labels[j]
                )));
            }
            Some(_) => {}
            None => {
                upper.insert(*pair, t.clone());
            }
        }
    }
    let quads: Vec<_> = upper
        .into_iter()
        .flat_map(|((i, j), t)| t.into_iter().map(move |(k, c)| (i, j, k, c)))
        .collect();
    LieAlgebra::new(p, labels, quads)
}

pub fn emit_lie(lie: &LieAlgebra) -> String {
    let file = LieFile {
        p: lie.modulus().get().into(),
        dim: lie.dim(),
        labels: lie.labels().to_vec(),
        brackets: lie
            .structure_constants()
            .filter(|&(i, j, _, _)| i < j)
            .map(|(i, j, k, c)| [i as i64, j as i64, k as i64, c.into()])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("Lie file serializes")
}

/// Parses derivation generators on `O_n`. Shapes are checked against `p^n`,
/// which must not exceed `cap`; the Leibniz rule is checked later, when the
/// generators are closed into a subalgebra.
pub fn parse_generators(text: &str, cap: usize) -> Result<GeneratorSet> {
    let file: GeneratorFile = from_json(text)?;
    let p = Prime::new(file.p)?;
    if file.n == 0 {
        return Err(Error::Format("n must be at least 1".into()));
    }
    let dim = u32::try_from(file.n)
        .ok()
        .and_then(|n| (p.get() as u128).checked_pow(n))
        .filter(|&d| d <= cap as u128)
        .ok_or(Error::Capacity {
            requested: (p.get() as u128).saturating_pow(file.n.min(u32::MAX as usize) as u32),
            cap,
        })? as usize;
    let generators = file
        .generators
        .iter()
        .enumerate()
        .map(|(g, rows)| {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::Format(format!(
                    "generator {g} is not a {dim}x{dim} matrix"
                )));
            }
            let m = Matrix::from_rows(p, rows)?;
            LinearOperator::new(m)
        })
        .collect::<Result<_>>()?;
    Ok(GeneratorSet {
        p,
        n: file.n,
        generators,
    })
}

pub fn emit_generators(set: &GeneratorSet) -> String {
    let file = GeneratorFile {
        p: set.p.get().into(),
        n: set.n,
        generators: set
            .generators
            .iter()
            .map(|op| {
                op.matrix()
                    .row_iter()
                    .map(|r| r.iter().map(|&c| c.into()).collect())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("generator file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::truncated_polynomial_algebra;
    use crate::lie::sl2;

    #[test]
    fn algebra_round_trip() {
        let o1 = truncated_polynomial_algebra(Prime::new(3).unwrap(), 1).unwrap();
        let back = parse_algebra(&emit_algebra(&o1)).unwrap();
        assert!(back.structure_constants().eq(o1.structure_constants()));
        assert_eq!(back.unit(), o1.unit());
    }

    #[test]
    fn non_commutative_names_pair() {
        let text = r#"{"p": 5, "dim": 2, "labels": ["e1", "e2"],
                      "products": [[0, 0, 0, 1], [0, 1, 1, 1]]}"#;
        let err = parse_algebra(text).unwrap_err().to_string();
        assert!(err.contains("e1*e2 != e2*e1"), "{err}");
    }

    #[test]
    fn non_prime_modulus() {
        let text = r#"{"p": 6, "dim": 1, "products": [[0, 0, 0, 1]]}"#;
        assert_eq!(parse_algebra(text), Err(Error::NotPrime(6)));
    }

    #[test]
    fn index_out_of_range() {
        let text = r#"{"p": 3, "dim": 1, "products": [[0, 1, 0, 1]]}"#;
        assert!(matches!(parse_algebra(text), Err(Error::Format(_))));
    }

    #[test]
    fn label_count_mismatch() {
        let text = r#"{"p": 3, "dim": 2, "labels": ["a"], "products": []}"#;
        assert!(matches!(parse_algebra(text), Err(Error::Format(_))));
    }

    #[test]
    fn lie_round_trip() {
        let s = sl2(Prime::new(5).unwrap()).unwrap();
        let back = parse_lie(&emit_lie(&s)).unwrap();
        assert!(back.structure_constants().eq(s.structure_constants()));
    }

    #[test]
    fn lie_lower_entries_and_duplicates() {
        let base = r#"{"p": 5, "dim": 3, "brackets": [[0, 1, 2, 1]]}"#;
        let lower = r#"{"p": 5, "dim": 3, "brackets": [[1, 0, 2, 4]]}"#;
        let both = r#"{"p": 5, "dim": 3, "brackets": [[0, 1, 2, 1], [1, 0, 2, -1]]}"#;
        let clash = r#"{"p": 5, "dim": 3, "brackets": [[0, 1, 2, 1], [1, 0, 2, 1]]}"#;
        let heis = parse_lie(base).unwrap();
        assert_eq!(parse_lie(lower).unwrap(), heis);
        assert_eq!(parse_lie(both).unwrap(), heis);
        assert!(matches!(parse_lie(clash), Err(Error::Format(_))));
    }

    #[test]
    fn lie_diagonal_and_jacobi() {
        let diag = r#"{"p": 5, "dim": 2, "brackets": [[1, 1, 0, 1]]}"#;
        assert!(matches!(parse_lie(diag), Err(Error::Format(_))));
        let bad = r#"{"p": 5, "dim": 3, "brackets": [[0, 1, 0, 1], [0, 2, 0, 1], [1, 2, 1, 1]]}"#;
        assert!(matches!(parse_lie(bad), Err(Error::NotLie(_))));
    }

    #[test]
    fn generator_shapes() {
        let ok = r#"{"p": 2, "n": 1, "generators": [[[0, 1], [0, 0]]]}"#;
        let set = parse_generators(ok, 64).unwrap();
        assert_eq!(set.generators.len(), 1);
        assert_eq!(parse_generators(&emit_generators(&set), 64).unwrap(), set);
        let bad = r#"{"p": 2, "n": 1, "generators": [[[0, 1, 0], [0, 0, 0]]]}"#;
        assert!(matches!(parse_generators(bad, 64), Err(Error::Format(_))));
        let big = r#"{"p": 7, "n": 9, "generators": []}"#;
        assert!(matches!(parse_generators(big, 64), Err(Error::Capacity { .. })));
    }
}

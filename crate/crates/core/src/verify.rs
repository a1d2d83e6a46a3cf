//! Verification suites over parameter grids, with deterministic reports.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::assoc::{truncated_polynomial_algebra_with_cap, AssocAlgebra};
use crate::ce::{prop2_check, Verdict as Decomposition};
use crate::cyclic::{hc1, hc1_dimension_formula, invariant_class_dim, kunneth_check};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::format::GeneratorSet;
use crate::lie::{derivation_subalgebra_with_cap, sl2, witt_with_cap, DerivationAlgebra, LieAlgebra};

/// Largest `p^n` visited by the default grids.
pub const DEFAULT_GRID_CAP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub params: Value,
    pub expected: Value,
    pub computed: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Case {
    fn compare(params: Value, expected: u64, computed: u64, details: Option<Value>) -> Self {
        let verdict = if expected == computed {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Case {
            params,
            expected: expected.into(),
            computed: computed.into(),
            verdict,
            details,
        }
    }

    fn from_error(params: Value, expected: Value, err: &Error) -> Self {
        let verdict = match err {
            Error::Capacity { .. } => Verdict::Skipped,
            _ => Verdict::Error,
        };
        Case {
            params,
            expected,
            computed: Value::Null,
            verdict,
            details: Some(json!({ "reason": err.to_string() })),
        }
    }
}

fn exit_code<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> i32 {
    verdicts.into_iter().fold(0, |code, v| match v {
        Verdict::Error => 2,
        Verdict::Fail => code.max(1),
        Verdict::Pass | Verdict::Skipped => code,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<Case>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(suite: impl Into<String>, cases: Vec<Case>) -> Self {
        let exit_code = exit_code(cases.iter().map(|c| &c.verdict));
        Report {
            suite: suite.into(),
            cases,
            exit_code,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let header = ["#", "params", "expected", "computed", "verdict"];
        let rows: Vec<[String; 5]> = self
            .cases
            .iter()
            .enumerate()
            .map(|(i, c)| {
                [
                    i.to_string(),
                    compact(&c.params),
                    compact(&c.expected),
                    compact(&c.computed),
                    serde_json::to_value(c.verdict)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_owned))
                        .unwrap_or_default(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = format!("suite: {}\n", self.suite);
        let mut line = |cells: &[&str]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{cell:<w$}");
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&header);
        for row in &rows {
            line(&row.each_ref().map(String::as_str));
        }
        for (i, c) in self.cases.iter().enumerate() {
            if let Some(Value::Object(d)) = &c.details {
                if let Some(reason) = d.get("reason").and_then(Value::as_str) {
                    let _ = writeln!(out, "note #{i}: {reason}");
                }
            }
        }
        let _ = writeln!(out, "exit code: {}", self.exit_code);
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", compact(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

/// Several suites run together.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub suite: String,
    pub reports: Vec<Report>,
    pub exit_code: i32,
}

impl Aggregate {
    pub fn new(reports: Vec<Report>) -> Self {
        let exit_code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
        Aggregate {
            suite: "all".into(),
            reports,
            exit_code,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        let _ = writeln!(out, "overall exit code: {}", self.exit_code);
        out
    }
}

/// The `(p, n)` grid: primes up to `max_p`, `1 ≤ n ≤ max_n`, ordered by `p`
/// then `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub max_p: u64,
    pub max_n: usize,
    /// Cases with `p^n` above this are listed as skipped.
    pub cap: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            max_p: 7,
            max_n: 3,
            cap: DEFAULT_GRID_CAP,
        }
    }
}

impl Grid {
    pub fn points(&self) -> Vec<(Prime, usize)> {
        (2..=self.max_p.min(251))
            .filter_map(|q| Prime::new(q).ok())
            .flat_map(|p| (1..=self.max_n).map(move |n| (p, n)))
            .collect()
    }
}

fn pn_params(p: Prime, n: usize) -> Value {
    json!({ "p": p.get(), "n": n })
}

/// `dim HC¹(O_n)` against `n · p^(n−1)`.
pub fn run_verify_erratum(grid: &Grid) -> Report {
    let cases = grid
        .points()
        .into_par_iter()
        .map(|(p, n)| {
            let expected = hc1_dimension_formula(p, n as u32);
            let params = pn_params(p, n);
            match truncated_polynomial_algebra_with_cap(p, n, grid.cap).and_then(|a| hc1(&a)) {
                Ok(space) => Case::compare(params, expected, space.hc1_dim as u64, None),
                Err(e) => Case::from_error(params, expected.into(), &e),
            }
        })
        .collect();
    Report::new("erratum", cases)
}

/// `dim HC¹(O_n)^{Der(O_n)}` against 1 for `n = 1` and 0 otherwise.
pub fn run_verify_prop1(grid: &Grid) -> Report {
    let cases = grid
        .points()
        .into_par_iter()
        .map(|(p, n)| {
            let expected = u64::from(n == 1);
            let params = pn_params(p, n);
            let computed = truncated_polynomial_algebra_with_cap(p, n, grid.cap).and_then(|a| {
                let w = witt_with_cap(p, n, grid.cap)?;
                invariant_class_dim(&a, &w.action)
            });
            match computed {
                Ok(c) => Case::compare(params, expected, c as u64, None),
                Err(e) => Case::from_error(params, expected.into(), &e),
            }
        })
        .collect();
    Report::new("prop1", cases)
}

/// A named algebra for the two-factor suites.
#[derive(Debug, Clone)]
pub struct NamedAlgebra {
    pub name: String,
    pub algebra: AssocAlgebra,
}

impl NamedAlgebra {
    pub fn new(name: impl Into<String>, algebra: AssocAlgebra) -> Self {
        NamedAlgebra {
            name: name.into(),
            algebra,
        }
    }

    /// `o1`, `o2`, `k` or `kk` at the given prime.
    pub fn builtin(name: &str, p: Prime) -> Result<Self> {
        let algebra = match name {
            "o1" => truncated_polynomial_algebra_with_cap(p, 1, usize::MAX)?,
            "o2" => truncated_polynomial_algebra_with_cap(p, 2, usize::MAX)?,
            "k" => AssocAlgebra::ground_field(p),
            "kk" => AssocAlgebra::ground_field(p).direct_sum(&AssocAlgebra::ground_field(p))?,
            other => {
                return Err(Error::Unsupported(format!(
                    "unknown algebra {other:?} (expected o1, o2, k or kk)"
                )))
            }
        };
        Ok(NamedAlgebra::new(name, algebra))
    }
}

/// `(A, B)` pairs checked by the two-factor suites by default.
pub fn default_pairs() -> Result<Vec<(NamedAlgebra, NamedAlgebra)>> {
    let mut pairs = Vec::new();
    for q in [2, 3, 5] {
        let p = Prime::new(q)?;
        pairs.push((NamedAlgebra::builtin("o1", p)?, NamedAlgebra::builtin("o1", p)?));
    }
    let p3 = Prime::new(3)?;
    for a in ["k", "kk"] {
        pairs.push((NamedAlgebra::builtin(a, p3)?, NamedAlgebra::builtin("o1", p3)?));
    }
    Ok(pairs)
}

fn pair_params(a: &NamedAlgebra, b: &NamedAlgebra) -> Value {
    json!({ "a": a.name, "b": b.name, "p": a.algebra.modulus().get() })
}

fn check_pair(a: &AssocAlgebra, b: &AssocAlgebra) -> Result<()> {
    for alg in [a, b] {
        alg.check_commutative()?;
        if !alg.is_unital() {
            return Err(Error::Precondition("algebra has no unit".into()));
        }
    }
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            left: a.modulus().get(),
            right: b.modulus().get(),
        });
    }
    Ok(())
}

/// Invariant classes of `A ⊗ B` under `Der(A ⊗ B)` against
/// `inv(A)·dualinv(B) + dualinv(A)·inv(B)`. Input errors are returned
/// before any case runs.
pub fn run_verify_lemma(pairs: &[(NamedAlgebra, NamedAlgebra)]) -> Result<Report> {
    for (a, b) in pairs {
        check_pair(&a.algebra, &b.algebra)?;
    }
    let cases = pairs
        .par_iter()
        .map(|(a, b)| {
            let params = pair_params(a, b);
            let run = || -> Result<Case> {
                let (x, y) = (&a.algebra, &b.algebra);
                let factor = |alg: &AssocAlgebra| -> Result<(usize, usize)> {
                    let der = alg.derivation_basis();
                    Ok((invariant_class_dim(alg, &der)?, alg.dual_invariants(&der)?.dim()))
                };
                let (inv_a, dual_a) = factor(x)?;
                let (inv_b, dual_b) = factor(y)?;
                let rhs = inv_a * dual_b + dual_a * inv_b;
                let tensor = x.tensor_product(y)?;
                let lhs = invariant_class_dim(&tensor, &tensor.derivation_basis())?;
                let details = json!({
                    "inv_a": inv_a, "dual_inv_a": dual_a,
                    "inv_b": inv_b, "dual_inv_b": dual_b,
                });
                Ok(Case::compare(params.clone(), rhs as u64, lhs as u64, Some(details)))
            };
            run().unwrap_or_else(|e| Case::from_error(params.clone(), Value::Null, &e))
        })
        .collect();
    Ok(Report::new("lemma", cases))
}

/// `dim HC¹(A ⊗ B)` against `hc1(A)·dim B + dim A·hc1(B)`, together with the
/// rank of the assembled cocycles.
pub fn run_kunneth(pairs: &[(NamedAlgebra, NamedAlgebra)]) -> Result<Report> {
    for (a, b) in pairs {
        check_pair(&a.algebra, &b.algebra)?;
    }
    let cases = pairs
        .par_iter()
        .map(|(a, b)| {
            let params = pair_params(a, b);
            match kunneth_check(&a.algebra, &b.algebra) {
                Ok(r) => {
                    let verdict = if r.matches {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    };
                    Case {
                        params,
                        expected: r.rhs.into(),
                        computed: r.lhs.into(),
                        verdict,
                        details: serde_json::to_value(&r).ok(),
                    }
                }
                Err(e) => Case::from_error(params, Value::Null, &e),
            }
        })
        .collect();
    Ok(Report::new("kunneth", cases))
}

#[derive(Debug, Clone)]
pub enum SimpleSpec {
    Sl2,
    Given { name: String, lie: LieAlgebra },
}

#[derive(Debug, Clone)]
pub enum DerivationSpec {
    Zero,
    Witt,
    Generators { name: String, set: GeneratorSet },
}

#[derive(Debug, Clone)]
pub struct CaseConfig {
    pub p: Prime,
    pub n: usize,
    pub s: SimpleSpec,
    pub d: DerivationSpec,
}

impl CaseConfig {
    pub fn params(&self) -> Value {
        let s = match &self.s {
            SimpleSpec::Sl2 => "sl2",
            SimpleSpec::Given { name, .. } => name,
        };
        let d = match &self.d {
            DerivationSpec::Zero => "zero",
            DerivationSpec::Witt => "witt",
            DerivationSpec::Generators { name, .. } => name,
        };
        json!({ "s": s, "p": self.p.get(), "n": self.n, "d": d })
    }

    /// Builds `S`, `O_n` and `𝒟`.
    pub fn build(&self, cap: usize) -> Result<(LieAlgebra, AssocAlgebra, DerivationAlgebra)> {
        let s = match &self.s {
            SimpleSpec::Sl2 => sl2(self.p)?,
            SimpleSpec::Given { lie, .. } => lie.clone(),
        };
        let a = truncated_polynomial_algebra_with_cap(self.p, self.n, cap)?;
        let d = match &self.d {
            DerivationSpec::Zero => DerivationAlgebra::zero(self.p, self.n),
            DerivationSpec::Witt => witt_with_cap(self.p, self.n, cap)?,
            DerivationSpec::Generators { set, .. } => {
                if set.p != self.p || set.n != self.n {
                    return Err(Error::Precondition(format!(
                        "generators act on O_{} over GF({}), expected O_{} over GF({})",
                        set.n,
                        set.p.get(),
                        self.n,
                        self.p.get()
                    )));
                }
                derivation_subalgebra_with_cap(self.p, self.n, &set.generators, cap)?
            }
        };
        Ok((s, a, d))
    }
}

/// `(sl2, 5, 1)` with `𝒟` zero and the full Witt algebra.
pub fn default_prop2_configs() -> Vec<CaseConfig> {
    let p = Prime::new(5).expect("5 is prime");
    [DerivationSpec::Zero, DerivationSpec::Witt]
        .into_iter()
        .map(|d| CaseConfig {
            p,
            n: 1,
            s: SimpleSpec::Sl2,
            d,
        })
        .collect()
}

/// Both sides of the `H²` decomposition for each configuration. Construction
/// failures other than the size cap (non-derivation generators, `p = 2` for
/// sl2) are reported as errors.
pub fn run_verify_prop2(configs: &[CaseConfig], cap: usize) -> Report {
    let cases = configs
        .par_iter()
        .map(|config| {
            let params = config.params();
            let run = config
                .build(cap)
                .and_then(|(s, a, d)| prop2_check(&s, &a, &d));
            match run {
                Ok(r) => {
                    let verdict = match r.verdict {
                        Decomposition::Match => Verdict::Pass,
                        Decomposition::Mismatch => Verdict::Fail,
                    };
                    Case {
                        params,
                        expected: r.rhs_dim.into(),
                        computed: r.lhs_dim.into(),
                        verdict,
                        details: serde_json::to_value(&r).ok(),
                    }
                }
                Err(e) => Case::from_error(params, Value::Null, &e),
            }
        })
        .collect();
    Report::new("prop2", cases)
}

/// Every suite with its default inputs.
pub fn run_verify_all(grid: &Grid) -> Result<Aggregate> {
    let pairs = default_pairs()?;
    Ok(Aggregate::new(vec![
        run_verify_erratum(grid),
        run_verify_prop1(grid),
        run_verify_lemma(&pairs)?,
        run_verify_prop2(&default_prop2_configs(), grid.cap),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid() {
        let grid = Grid {
            max_p: 7,
            max_n: 0,
            cap: 25,
        };
        let r = run_verify_erratum(&grid);
        assert!(r.cases.is_empty());
        assert_eq!(r.exit_code, 0);
    }

    #[test]
    fn single_case_grid() {
        let grid = Grid {
            max_p: 2,
            max_n: 1,
            cap: 25,
        };
        let r = run_verify_erratum(&grid);
        assert_eq!(r.cases.len(), 1);
        assert_eq!(r.cases[0].expected, json!(1));
        assert_eq!(r.cases[0].verdict, Verdict::Pass);
    }

    #[test]
    fn cap_exceeded_is_skipped() {
        let grid = Grid {
            max_p: 3,
            max_n: 3,
            cap: 9,
        };
        let r = run_verify_prop1(&Grid { max_n: 1, ..grid });
        assert!(r.cases.iter().all(|c| c.verdict == Verdict::Pass));
        let r = run_verify_erratum(&grid);
        let last = r.cases.last().unwrap();
        assert_eq!(last.params, json!({"p": 3, "n": 3}));
        assert_eq!(last.verdict, Verdict::Skipped);
    }

    #[test]
    fn default_grid_points() {
        let pts: Vec<_> = Grid::default()
            .points()
            .into_iter()
            .filter(|&(p, n)| (p.get() as usize).pow(n as u32) <= DEFAULT_GRID_CAP)
            .map(|(p, n)| (p.get(), n))
            .collect();
        assert_eq!(
            pts,
            [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)]
        );
    }

    #[test]
    fn exit_code_precedence() {
        use Verdict::*;
        assert_eq!(exit_code(&[Pass, Skipped]), 0);
        assert_eq!(exit_code(&[Pass, Fail]), 1);
        assert_eq!(exit_code(&[Fail, Error, Pass]), 2);
        assert_eq!(exit_code(&[]), 0);
    }

    #[test]
    fn lemma_rejects_non_unital() {
        let p = Prime::new(3).unwrap();
        let z = NamedAlgebra::new("zero", AssocAlgebra::zero_product(p, 1));
        let o1 = NamedAlgebra::builtin("o1", p).unwrap();
        assert!(run_verify_lemma(&[(z, o1)]).is_err());
    }

    #[test]
    fn text_table_is_aligned() {
        let grid = Grid {
            max_p: 3,
            max_n: 1,
            cap: 25,
        };
        let text = run_verify_erratum(&grid).to_text();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "suite: erratum");
        assert!(lines[1].starts_with("#  params"));
        assert_eq!(lines.last().unwrap(), &"exit code: 0");
    }
}

//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! output is exactly one PASS/FAIL line per criterion plus a summary.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mck_core::assoc::{monomial_derivation, truncated_polynomial_algebra};
use mck_core::ce::{ce_h2, prop2_check, symmetric_invariant_forms, Verdict};
use mck_core::cyclic::{
    alpha_cocycle, cyclic_cocycles, derivation_act, hc1, invariant_class_dim, kunneth_check,
};
use mck_core::lie::{current_algebra, lie_check, semidirect, sl2, witt, DerivationAlgebra};
use mck_core::verify::{default_pairs, run_verify_lemma, Verdict as CaseVerdict};
use mck_core::{AssocAlgebra, LieAlgebra, MultiIndex, Prime, Subspace};

type Outcome = Result<(bool, String), String>;

const GRID: [(u64, usize); 8] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)];

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("prime")
}

fn o(p: u64, n: usize) -> AssocAlgebra {
    truncated_polynomial_algebra(prime(p), n).expect("O_n")
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Dense multiplication table `t[i][j]` = coordinates of `e_i e_j`.
fn table(a: &AssocAlgebra) -> Vec<Vec<Vec<u8>>> {
    let d = a.dim();
    let mut t = vec![vec![vec![0u8; d]; d]; d];
    for (i, j, k, c) in a.structure_constants() {
        t[i][j][k] = c;
    }
    t
}

fn lie_table(l: &LieAlgebra) -> Vec<Vec<Vec<u8>>> {
    let d = l.dim();
    let mut t = vec![vec![vec![0u8; d]; d]; d];
    for (i, j, k, c) in l.structure_constants() {
        t[i][j][k] = c;
    }
    t
}

fn combine(p: u64, t: &[Vec<Vec<u8>>], u: &[u8], k: usize) -> Vec<u8> {
    // (Σ u_m e_m) · e_k
    let d = u.len();
    let mut out = vec![0u64; d];
    for (m, &um) in u.iter().enumerate() {
        if um != 0 {
            for (r, &c) in t[m][k].iter().enumerate() {
                out[r] += um as u64 * c as u64;
            }
        }
    }
    out.into_iter().map(|x| (x % p) as u8).collect()
}

fn combine_left(p: u64, t: &[Vec<Vec<u8>>], k: usize, u: &[u8]) -> Vec<u8> {
    let d = u.len();
    let mut out = vec![0u64; d];
    for (m, &um) in u.iter().enumerate() {
        if um != 0 {
            for (r, &c) in t[k][m].iter().enumerate() {
                out[r] += um as u64 * c as u64;
            }
        }
    }
    out.into_iter().map(|x| (x % p) as u8).collect()
}

fn brute_assoc_comm(a: &AssocAlgebra) -> bool {
    let p = a.modulus().get() as u64;
    let t = table(a);
    let d = a.dim();
    for i in 0..d {
        for j in 0..d {
            if t[i][j] != t[j][i] {
                return false;
            }
            for k in 0..d {
                if combine(p, &t, &t[i][j], k) != combine_left(p, &t, i, &t[j][k]) {
                    return false;
                }
            }
        }
    }
    true
}

fn brute_lie(l: &LieAlgebra) -> bool {
    let p = l.modulus().get() as u64;
    let t = lie_table(l);
    let d = l.dim();
    for i in 0..d {
        if t[i][i].iter().any(|&c| c != 0) {
            return false;
        }
        for j in 0..d {
            if t[i][j].iter().zip(&t[j][i]).any(|(&a, &b)| (a as u64 + b as u64) % p != 0) {
                return false;
            }
            for k in 0..d {
                let a = combine(p, &t, &t[i][j], k);
                let b = combine(p, &t, &t[j][k], i);
                let c = combine(p, &t, &t[k][i], j);
                if (0..d).any(|r| (a[r] as u64 + b[r] as u64 + c[r] as u64) % p != 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// `D[k][m]` at `k * d + m`: Leibniz on every basis pair.
fn brute_derivation(a: &AssocAlgebra, flat: &[u8]) -> bool {
    let p = a.modulus().get() as u64;
    let d = a.dim();
    let t = table(a);
    let apply = |v: &[u8]| -> Vec<u8> {
        (0..d)
            .map(|k| {
                let s: u64 = (0..d).map(|m| flat[k * d + m] as u64 * v[m] as u64).sum();
                (s % p) as u8
            })
            .collect()
    };
    let col = |m: usize| -> Vec<u8> { (0..d).map(|k| flat[k * d + m]).collect() };
    for i in 0..d {
        for j in 0..d {
            let lhs = apply(&t[i][j]);
            let a1 = combine(p, &t, &col(i), j);
            let a2 = combine_left(p, &t, i, &col(j));
            if (0..d).any(|r| (lhs[r] as u64 + 2 * p - a1[r] as u64 - a2[r] as u64) % p != 0) {
                return false;
            }
        }
    }
    true
}

/// `φ(a,b) = −φ(b,a)` and `φ(ab,c) − φ(a,bc) + φ(ca,b) = 0` on basis elements.
fn brute_cyclic(a: &AssocAlgebra, flat: &[u8]) -> bool {
    let p = a.modulus().get() as u64;
    let d = a.dim();
    let t = table(a);
    let phi = |u: &[u8], k: usize| -> u64 {
        (0..d).map(|m| u[m] as u64 * flat[m * d + k] as u64).sum::<u64>() % p
    };
    let phi_r = |k: usize, u: &[u8]| -> u64 {
        (0..d).map(|m| flat[k * d + m] as u64 * u[m] as u64).sum::<u64>() % p
    };
    for i in 0..d {
        for j in 0..d {
            if (flat[i * d + j] as u64 + flat[j * d + i] as u64) % p != 0 {
                return false;
            }
            for k in 0..d {
                let s = phi(&t[i][j], k) + 2 * p - phi_r(i, &t[j][k]) + phi(&t[k][i], j);
                if s % p != 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn brute_ce(l: &LieAlgebra, gram: &[u8]) -> bool {
    let p = l.modulus().get() as u64;
    let d = l.dim();
    let t = lie_table(l);
    let phi = |u: &[u8], k: usize| -> u64 {
        (0..d).map(|m| u[m] as u64 * gram[m * d + k] as u64).sum::<u64>() % p
    };
    (0..d).all(|x| {
        (0..d).all(|y| {
            (0..d).all(|z| (phi(&t[x][y], z) + p - phi(&t[x][z], y) + phi(&t[y][z], x)) % p == 0)
        })
    })
}

fn brute_invariant(l: &LieAlgebra, gram: &[u8]) -> bool {
    let p = l.modulus().get() as u64;
    let d = l.dim();
    let t = lie_table(l);
    let b = |u: &[u8], k: usize| -> u64 {
        (0..d).map(|m| u[m] as u64 * gram[m * d + k] as u64).sum::<u64>() % p
    };
    let b_r = |k: usize, u: &[u8]| -> u64 {
        (0..d).map(|m| gram[k * d + m] as u64 * u[m] as u64).sum::<u64>() % p
    };
    (0..d).all(|x| {
        (0..d).all(|y| {
            gram[x * d + y] == gram[y * d + x] && (0..d).all(|z| b(&t[x][y], z) == b_r(x, &t[y][z]))
        })
    })
}

fn pairs_to_gram(d: usize, pairs: &[u8], p: u64) -> Vec<u8> {
    let mut g = vec![0u8; d * d];
    let mut idx = 0;
    for i in 0..d {
        for j in i + 1..d {
            g[i * d + j] = pairs[idx];
            g[j * d + i] = ((p - pairs[idx] as u64) % p) as u8;
            idx += 1;
        }
    }
    g
}

/// Every element of a subspace over GF(2), as sorted byte vectors.
fn span_elements(s: &Subspace) -> Vec<Vec<u8>> {
    let basis: Vec<&[u8]> = s.vectors().collect();
    let mut out: Vec<Vec<u8>> = (0u32..1 << basis.len())
        .map(|mask| {
            let mut v = vec![0u8; s.ambient_dim()];
            for (b, row) in basis.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    for (x, &r) in v.iter_mut().zip(row.iter()) {
                        *x ^= r;
                    }
                }
            }
            v
        })
        .collect();
    out.sort();
    out
}

fn all_gf2_vectors(len: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << len).map(move |m| (0..len).map(|b| (m >> b & 1) as u8).collect())
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for (p, n) in GRID {
        let expected = n as u64 * p.pow(n as u32 - 1);
        let computed = hc1(&o(p, n)).map_err(e)?.hc1_dim as u64;
        if computed != expected {
            bad.push(format!("({p},{n}): expected {expected}, computed {computed}"));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "all 8 cases".into() } else { bad.join("; ") }))
}

fn criterion_2() -> Outcome {
    for q in [2, 3, 5, 7] {
        let p = prime(q);
        let a = o(q, 1);
        let alpha = alpha_cocycle(p);
        if !brute_cyclic(&a, alpha.flatten()) {
            return Ok((false, format!("alpha fails the cocycle identities at p={q}")));
        }
        if !cyclic_cocycles(&a).map_err(e)?.contains(alpha.flatten()).map_err(e)? {
            return Ok((false, format!("alpha outside the solved cocycle space at p={q}")));
        }
        for k in 0..q as u8 {
            let dk = monomial_derivation(p, 1, &MultiIndex::new(vec![k], p).map_err(e)?, 0);
            if !derivation_act(&a, &dk, &alpha).map_err(e)?.is_zero() {
                return Ok((false, format!("x^{k} d/dx moves alpha at p={q}")));
            }
        }
    }
    Ok((true, "p in {2,3,5,7}, all x^k d/dx".into()))
}

fn criterion_3() -> Outcome {
    let cases = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (5, 2)];
    let mut bad = Vec::new();
    for (p, n) in cases {
        let w = witt(prime(p), n).map_err(e)?;
        let got = invariant_class_dim(&o(p, n), &w.action).map_err(e)?;
        let want = usize::from(n == 1);
        if got != want {
            bad.push(format!("({p},{n}): expected {want}, computed {got}"));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "8 cases".into() } else { bad.join("; ") }))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for (a, b) in default_pairs().map_err(e)? {
        let r = kunneth_check(&a.algebra, &b.algebra).map_err(e)?;
        if !r.matches {
            bad.push(format!(
                "{}⊗{} p={}: lhs {}, rhs {}, assembled rank {}",
                a.name,
                b.name,
                a.algebra.modulus().get(),
                r.lhs,
                r.rhs,
                r.assembled_rank
            ));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "5 pairs".into() } else { bad.join("; ") }))
}

fn criterion_5() -> Outcome {
    for (p, n) in GRID {
        let a = o(p, n);
        let der = a.derivations();
        let want = n * (p as usize).pow(n as u32);
        if der.dim() != want {
            return Ok((false, format!("dim Der(O_{n}) at p={p} is {}, expected {want}", der.dim())));
        }
        let image = a.derivation_image(&a.derivation_basis()).map_err(e)?;
        if image.dim() != a.dim() {
            return Ok((false, format!("Der(O_{n})(O_{n}) has dim {} at p={p}", image.dim())));
        }
    }
    for (a, b) in default_pairs().map_err(e)? {
        let (x, y) = (&a.algebra, &b.algebra);
        let lhs = x.tensor_product(y).map_err(e)?.derivations().dim();
        let rhs = x.derivations().dim() * y.dim() + x.dim() * y.derivations().dim();
        if lhs != rhs {
            return Ok((false, format!("Der({}⊗{}) = {lhs}, expected {rhs}", a.name, b.name)));
        }
    }
    Ok((true, "grid and pairs".into()))
}

fn criterion_6() -> Outcome {
    let report = run_verify_lemma(&default_pairs().map_err(e)?).map_err(e)?;
    let bad: Vec<String> = report
        .cases
        .iter()
        .filter(|c| c.verdict != CaseVerdict::Pass)
        .map(|c| format!("{}: {} vs {}", c.params, c.expected, c.computed))
        .collect();
    Ok((bad.is_empty(), if bad.is_empty() { "5 pairs".into() } else { bad.join("; ") }))
}

fn criterion_7() -> Outcome {
    let p = prime(5);
    let s = sl2(p).map_err(e)?;
    let a = o(5, 1);
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, der, dim) in [
        ("witt", witt(p, 1).map_err(e)?, 20),
        ("zero", DerivationAlgebra::zero(p, 1), 15),
    ] {
        let sd = semidirect(&s, &a, &der).map_err(e)?;
        let r = prop2_check(&s, &a, &der).map_err(e)?;
        ok &= sd.lie.dim() == dim && r.verdict == Verdict::Match;
        notes.push(format!(
            "{name}: dim {} lhs {} rhs {} lifted {}",
            sd.lie.dim(),
            r.lhs_dim,
            r.rhs_dim,
            r.lifted_rank
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_8() -> Outcome {
    let a = o(2, 1);
    let solved = span_elements(&cyclic_cocycles(&a).map_err(e)?);
    let mut oracle: Vec<Vec<u8>> = all_gf2_vectors(4).filter(|f| brute_cyclic(&a, f)).collect();
    oracle.sort();
    if solved != oracle {
        return Ok((false, format!("cocycles: solver {solved:?}, oracle {oracle:?}")));
    }
    let solved = span_elements(&a.derivations());
    let mut oracle: Vec<Vec<u8>> = all_gf2_vectors(4).filter(|m| brute_derivation(&a, m)).collect();
    oracle.sort();
    if solved != oracle {
        return Ok((false, format!("derivations: solver {solved:?}, oracle {oracle:?}")));
    }
    Ok((true, format!("O_1 at p=2: {} cyclic cocycles and {} derivations, all enumerated", span_elements(&cyclic_cocycles(&a).map_err(e)?).len(), oracle.len())))
}

fn criterion_9() -> Outcome {
    let mut algebras: Vec<(String, AssocAlgebra)> =
        GRID.iter().map(|&(p, n)| (format!("O_{n}(p={p})"), o(p, n))).collect();
    for (a, b) in default_pairs().map_err(e)? {
        algebras.push((format!("{}(p={})", a.name, a.algebra.modulus().get()), a.algebra.clone()));
        let t = a.algebra.tensor_product(&b.algebra).map_err(e)?;
        algebras.push((format!("{}⊗{}", a.name, b.name), t));
    }
    for (name, a) in &algebras {
        if !brute_assoc_comm(a) {
            return Ok((false, format!("{name} fails associativity or commutativity")));
        }
        for v in a.derivations().vectors() {
            if !brute_derivation(a, v) {
                return Ok((false, format!("solved derivation of {name} fails Leibniz")));
            }
        }
        for v in cyclic_cocycles(a).map_err(e)?.vectors() {
            if !brute_cyclic(a, v) {
                return Ok((false, format!("solved cocycle of {name} fails the identities")));
            }
        }
    }
    let mut lies: Vec<(String, LieAlgebra)> = Vec::new();
    for q in [3, 5, 7] {
        lies.push((format!("sl2(p={q})"), sl2(prime(q)).map_err(e)?));
    }
    for (q, n) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)] {
        lies.push((format!("W({n};1) p={q}"), witt(prime(q), n).map_err(e)?.lie));
    }
    let p5 = prime(5);
    let s = sl2(p5).map_err(e)?;
    lies.push(("sl2⊗O_1".into(), current_algebra(&s, &o(5, 1)).map_err(e)?));
    lies.push((
        "(sl2⊗O_1)⋊W".into(),
        semidirect(&s, &o(5, 1), &witt(p5, 1).map_err(e)?).map_err(e)?.lie,
    ));
    let heis = LieAlgebra::new(p5, vec!["a".into(), "b".into(), "c".into()], [(0, 1, 2, 1)])
        .map_err(e)?;
    lies.push(("heisenberg".into(), heis));
    for (name, l) in &lies {
        if !lie_check(l).is_empty() || !brute_lie(l) {
            return Ok((false, format!("{name} fails the Lie axioms")));
        }
        let h = ce_h2(l).map_err(e)?;
        if !h.coboundaries.is_subspace_of(&h.cocycles).map_err(e)? {
            return Ok((false, format!("B² not inside Z² for {name}")));
        }
        let q = l.modulus().get() as u64;
        for v in h.cocycles.vectors() {
            if !brute_ce(l, &pairs_to_gram(l.dim(), v, q)) {
                return Ok((false, format!("solved 2-cocycle of {name} fails the identity")));
            }
        }
        if l.dim() <= 30 {
            for v in symmetric_invariant_forms(l).vectors() {
                if !brute_invariant(l, v) {
                    return Ok((false, format!("solved invariant form of {name} fails")));
                }
            }
        }
    }
    Ok((true, format!("{} algebras, {} Lie algebras", algebras.len(), lies.len())))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("erratum dimension formula", 60, criterion_1),
        ("explicit invariant cocycle", 1, criterion_2),
        ("invariant classes under Der(O_n)", 60, criterion_3),
        ("Künneth dimension identity", 30, criterion_4),
        ("derivation dimensions and image", 30, criterion_5),
        ("invariant Künneth identity", 60, criterion_6),
        ("H² decomposition", 120, criterion_7),
        ("exhaustive GF(2) oracles", 1, criterion_8),
        ("axiom and re-substitution suites", 120, criterion_9),
    ];
    let mut passed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(err) => (false, format!("error: {err}")),
        };
        passed += usize::from(ok);
        println!(
            "criterion {}: {} [{name}] {:.2}s/{limit}s: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

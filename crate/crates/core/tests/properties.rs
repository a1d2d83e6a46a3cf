use mck_core::assoc::truncated_polynomial_algebra;
use mck_core::ce::ce_h2;
use mck_core::cyclic::{cyclic_cocycles, derivation_act};
use mck_core::format::{emit_algebra, parse_algebra};
use mck_core::lie::{semidirect, sl2, witt};
use mck_core::{BilinearForm, LieAlgebra, LinearOperator, Matrix, Prime, Subspace};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (prop::sample::select(&PRIMES[..]), 1..=max_rows, 1..=max_cols).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p as u8, r * c).prop_map(move |data| {
            Matrix::new(Prime::new(p).unwrap(), r, c, data).unwrap()
        })
    })
}

fn subspace_pair() -> impl Strategy<Value = (Subspace, Subspace)> {
    (prop::sample::select(&PRIMES[..]), 1usize..6).prop_flat_map(|(p, n)| {
        let vecs = move || prop::collection::vec(prop::collection::vec(0..p as u8, n), 0..4);
        (vecs(), vecs()).prop_map(move |(a, b)| {
            let p = Prime::new(p).unwrap();
            (
                Subspace::from_vectors(p, n, &a).unwrap(),
                Subspace::from_vectors(p, n, &b).unwrap(),
            )
        })
    })
}

fn combination(p: Prime, d: usize, basis: &[Vec<u8>], coeffs: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; d];
    for (v, &c) in basis.iter().zip(coeffs) {
        for (o, &x) in out.iter_mut().zip(v) {
            *o = p.add(*o, p.mul(c, x));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(m in matrix_strategy(6, 6)) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, twice.rank);
    }

    #[test]
    fn rank_plus_nullity(m in matrix_strategy(6, 7)) {
        let ns = m.nullspace();
        prop_assert_eq!(m.rank() + ns.dim(), m.cols());
        for v in ns.vectors() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_finds_preimages(m in matrix_strategy(5, 5), seed in prop::collection::vec(0u8..7, 5)) {
        let p = m.modulus();
        let y: Vec<u8> = seed.iter().take(m.cols()).chain(std::iter::repeat(&0)).take(m.cols())
            .map(|&x| x % p.get()).collect();
        let b = m.mul_vec(&y).unwrap();
        let x = m.solve(&b).unwrap();
        prop_assert!(x.is_some());
        prop_assert_eq!(m.mul_vec(&x.unwrap()).unwrap(), b);
    }

    #[test]
    fn intersection_dimension_formula((u, v) in subspace_pair()) {
        let meet = u.intersect(&v).unwrap();
        let join = u.sum(&v).unwrap();
        prop_assert!(meet.is_subspace_of(&u).unwrap());
        prop_assert!(meet.is_subspace_of(&v).unwrap());
        prop_assert_eq!(u.dim() + v.dim(), join.dim() + meet.dim());
        prop_assert_eq!(u.intersect(&u).unwrap(), u.clone());
    }

    #[test]
    fn derivation_action_is_linear_and_antihomomorphic(
        q in prop::sample::select(&PRIMES[..]),
        c1 in prop::collection::vec(0u8..7, 7),
        c2 in prop::collection::vec(0u8..7, 7),
        f1 in prop::collection::vec(0u8..7, 49),
        f2 in prop::collection::vec(0u8..7, 49),
        s in 0u8..7,
    ) {
        let p = Prime::new(q).unwrap();
        let a = truncated_polynomial_algebra(p, 1).unwrap();
        let d = a.dim();
        let basis: Vec<Vec<u8>> = a.derivations().vectors().map(<[u8]>::to_vec).collect();
        let red = |v: &[u8], len: usize| v.iter().take(len).map(|&x| x % p.get()).collect::<Vec<_>>();
        let dop = LinearOperator::from_flat(p, d, &combination(p, d * d, &basis, &red(&c1, basis.len()))).unwrap();
        let eop = LinearOperator::from_flat(p, d, &combination(p, d * d, &basis, &red(&c2, basis.len()))).unwrap();
        let phi = BilinearForm::from_flat(p, d, &red(&f1, d * d)).unwrap();
        let psi = BilinearForm::from_flat(p, d, &red(&f2, d * d)).unwrap();
        let s = s % p.get();

        let lhs = derivation_act(&a, &dop, &phi.add(&psi.scale(s)).unwrap()).unwrap();
        let rhs = derivation_act(&a, &dop, &phi).unwrap()
            .add(&derivation_act(&a, &dop, &psi).unwrap().scale(s)).unwrap();
        prop_assert_eq!(lhs, rhs);

        // (D·)(E·) − (E·)(D·) = [E, D]·
        let de = derivation_act(&a, &dop, &derivation_act(&a, &eop, &phi).unwrap()).unwrap();
        let ed = derivation_act(&a, &eop, &derivation_act(&a, &dop, &phi).unwrap()).unwrap();
        let comm = derivation_act(&a, &eop.commutator(&dop).unwrap(), &phi).unwrap();
        prop_assert_eq!(de.add(&ed.scale(p.neg(1))).unwrap(), comm);
    }

    #[test]
    fn tensor_derivations(
        q in prop::sample::select(&PRIMES[..]),
        cd in prop::collection::vec(0u8..7, 7),
        cf in prop::collection::vec(0u8..7, 7),
        av in prop::collection::vec(0u8..7, 7),
        bv in prop::collection::vec(0u8..7, 7),
    ) {
        let p = Prime::new(q).unwrap();
        let a = truncated_polynomial_algebra(p, 1).unwrap();
        let d = a.dim();
        let basis: Vec<Vec<u8>> = a.derivations().vectors().map(<[u8]>::to_vec).collect();
        let red = |v: &[u8], len: usize| v.iter().take(len).map(|&x| x % p.get()).collect::<Vec<_>>();
        let dop = LinearOperator::from_flat(p, d, &combination(p, d * d, &basis, &red(&cd, basis.len()))).unwrap();
        let fop = LinearOperator::from_flat(p, d, &combination(p, d * d, &basis, &red(&cf, basis.len()))).unwrap();
        let ra = a.right_mult_operator(&red(&av, d)).unwrap();
        let rb = a.right_mult_operator(&red(&bv, d)).unwrap();
        let t = a.tensor_product(&a).unwrap();
        let op = dop.tensor(&rb).unwrap().add(&ra.tensor(&fop).unwrap()).unwrap();
        prop_assert!(t.is_derivation(&op).unwrap());
    }

    #[test]
    fn h2_is_invariant_under_basis_permutation(
        which in 0usize..3,
        perm in Just((0..20).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let p = Prime::new(5).unwrap();
        let lie: LieAlgebra = match which {
            0 => witt(p, 1).unwrap().lie,
            1 => LieAlgebra::new(p, vec!["a".into(), "b".into(), "c".into()], [(0, 1, 2, 1)]).unwrap(),
            _ => {
                let a = truncated_polynomial_algebra(p, 1).unwrap();
                semidirect(&sl2(p).unwrap(), &a, &witt(p, 1).unwrap()).unwrap().lie
            }
        };
        let perm: Vec<usize> = perm.into_iter().filter(|&i| i < lie.dim()).collect();
        let shuffled = lie.permuted(&perm).unwrap();
        prop_assert_eq!(ce_h2(&shuffled).unwrap().h2_dim, ce_h2(&lie).unwrap().h2_dim);
    }

    #[test]
    fn algebra_files_round_trip(q in prop::sample::select(&PRIMES[..]), n in 1usize..3) {
        let a = truncated_polynomial_algebra(Prime::new(q).unwrap(), n).unwrap();
        let back = parse_algebra(&emit_algebra(&a)).unwrap();
        prop_assert!(back.structure_constants().eq(a.structure_constants()));
        prop_assert_eq!(cyclic_cocycles(&back).unwrap(), cyclic_cocycles(&a).unwrap());
    }
}

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use polyhom::algebra::{homology, image_solve, iso_check, snf_triple, FinAbelianGroup, GroupHom, IntMatrix};
use polyhom::binding::{extract, native_action, verify_action};
use polyhom::chain::{boundary, Chain, SimplexFamily};
use polyhom::hurewicz::{epsilon, natural_iso, twist_by, AbstractFace, SimplexDatum};
use polyhom::polygroupoid::{
    check_axioms, configs_of_size, induced_automorphism, scramble, standard, Config, Permutation, StandardModel,
};
use polyhom::tower::{check_poly_tower, induced_group_tower, inverse_limit, native_actions, standard_tower};

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::from_i64(rows, cols, entries).unwrap()
}

fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

/// A unimodular matrix and its inverse as products of elementary row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(k));
        let mut e_inv = IntMatrix::identity(n);
        e_inv.set(i, j, BigInt::from(-k));
        p = e.try_mul(&p).unwrap();
        inv = inv.try_mul(&e_inv).unwrap();
    }
    (p, inv)
}

fn ops_strategy() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..12)
}

/// Orders of the elements of a finite group, counted by brute force; two
/// finite abelian groups are isomorphic iff these multisets agree.
fn order_profile(g: &FinAbelianGroup) -> Vec<u64> {
    let mut v: Vec<u64> = g.elements().map(|e| g.element_order(&e)).collect();
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_identities(a in matrix_strategy(6, 9)) {
        let (u, d, v) = snf_triple(&a);
        prop_assert_eq!(u.try_mul(&a).unwrap().try_mul(&v).unwrap(), d.clone());
        prop_assert!(u.determinant().abs().is_one());
        prop_assert!(v.determinant().abs().is_one());
        prop_assert!(d.is_diagonal());
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides);
        }
        prop_assert_eq!(diag.iter().filter(|x| !x.is_zero()).count(), a.rank());
    }

    #[test]
    fn homology_is_basis_invariant(
        a in matrix_strategy(5, 4),
        mix in prop::collection::vec(-2i64..=2, 25),
        ops_n in ops_strategy(),
        ops_lo in ops_strategy(),
        ops_hi in ops_strategy(),
    ) {
        // d_np1 = a; d_n is a combination of left-kernel rows of a
        let (u, d, _) = snf_triple(&a);
        let r = d.rank();
        let kernel_rows = a.rows() - r;
        prop_assume!(kernel_rows > 0);
        let k = matrix(kernel_rows, a.rows(), &u.entries()[r * a.rows()..].iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>());
        let c = matrix(kernel_rows, kernel_rows, &mix[..kernel_rows * kernel_rows]);
        let d_n = c.try_mul(&k).unwrap();
        prop_assert!(d_n.try_mul(&a).unwrap().is_zero());
        let h = homology(&d_n, &a).unwrap();

        let (p, p_inv) = unimodular(a.rows(), &ops_n);
        let (q, _) = unimodular(d_n.rows(), &ops_lo);
        let (s, _) = unimodular(a.cols(), &ops_hi);
        let d_n2 = q.try_mul(&d_n).unwrap().try_mul(&p_inv).unwrap();
        let a2 = p.try_mul(&a).unwrap().try_mul(&s).unwrap();
        prop_assert!(iso_check(&h, &homology(&d_n2, &a2).unwrap()));
    }

    #[test]
    fn image_solve_matches_box_search(
        a in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| prop::collection::vec(-3i64..=3, r * c).prop_map(move |e| (r, c, e))),
        b in prop::collection::vec(-4i64..=4, 3),
    ) {
        let (r, c, e) = a;
        let m = matrix(r, c, &e);
        let rhs: Vec<BigInt> = b[..r].iter().map(|&x| BigInt::from(x)).collect();
        let solved = image_solve(&m, &rhs).unwrap();
        if let Some(x) = &solved {
            prop_assert_eq!(m.apply(x).unwrap(), rhs.clone());
        }
        // any solution in a small box must be found
        let mut idx = vec![-4i64; c];
        loop {
            let x: Vec<BigInt> = idx.iter().map(|&v| BigInt::from(v)).collect();
            if m.apply(&x).unwrap() == rhs {
                prop_assert!(solved.is_some());
                break;
            }
            let mut j = 0;
            while j < c && idx[j] == 4 {
                idx[j] = -4;
                j += 1;
            }
            if j == c {
                break;
            }
            idx[j] += 1;
        }
    }

    #[test]
    fn boundary_is_linear_and_squares_to_zero(
        d in 2usize..=4,
        t1 in prop::collection::vec((0usize..64, -5i64..=5), 1..6),
        t2 in prop::collection::vec((0usize..64, -5i64..=5), 1..6),
        k in -3i64..=3,
    ) {
        let fam = SimplexFamily::full_simplex(&[0, 1, 2, 3, 4, 5], 4);
        let gens = fam.generators(d);
        let mk = |t: &[(usize, i64)]| Chain::from_terms(d, t.iter().map(|&(i, c)| (gens[i % gens.len()].clone(), c))).unwrap();
        let (a, b) = (mk(&t1), mk(&t2));
        let lhs = boundary(&fam, &(&a.scale(k) + &b)).unwrap();
        let rhs = &boundary(&fam, &a).unwrap().scale(k) + &boundary(&fam, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(boundary(&fam, &boundary(&fam, &a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn scrambling_preserves_everything_observable(seed_a in any::<u64>(), seed_b in any::<u64>(), which in 0usize..4) {
        let groups = [FinAbelianGroup::cyclic(3), FinAbelianGroup::cyclic(4), FinAbelianGroup::from_orders(&[2, 2]).unwrap(), FinAbelianGroup::cyclic(2)];
        let (n, k) = if which == 3 { (3, 5) } else { (2, 4) };
        let g = &groups[which];
        let h = standard(g, &(0..k as u32).collect::<Vec<_>>(), n).unwrap().structure;
        let (a, b) = (scramble(&h, seed_a), scramble(&h, seed_b));
        let names = |x: &polyhom::polygroupoid::Polygroupoid| (0..x.element_count() as u32).map(|i| x.name(i).to_string()).collect::<BTreeSet<_>>();
        prop_assert_eq!(names(&a), names(&b));
        prop_assert_eq!(a.q().len(), b.q().len());
        for s in [&a, &b] {
            prop_assert!(check_axioms(s).passed());
            let (found, act) = extract(s, &s.top_configs()[0]).unwrap();
            prop_assert!(iso_check(&found, g));
            prop_assert!(verify_action(s, &act).passed());
        }
        // the same seed reproduces the same instance
        prop_assert_eq!(scramble(&h, seed_a).to_json(), a.to_json());
    }

    #[test]
    fn induced_maps_carry_q_to_compatible_q(perm in Just((0u32..5).collect::<Vec<_>>()).prop_shuffle(), n in 2usize..=3, which in 0usize..3) {
        let g = [FinAbelianGroup::cyclic(2), FinAbelianGroup::cyclic(3), FinAbelianGroup::from_orders(&[2, 2]).unwrap()][which].clone();
        let verts: Vec<u32> = (0..5).collect();
        let h = standard(&g, &verts, n).unwrap().structure;
        let sigma = Permutation::new(verts.iter().copied().zip(perm.iter().copied()).collect()).unwrap();
        let phi = induced_automorphism(&h, &sigma).unwrap();
        for t in h.q() {
            let c = h.tuple_config(t).unwrap();
            let image = Config::from_unsorted(c.vertices().iter().map(|&v| sigma.apply(v)).collect()).unwrap();
            let mut moved = vec![0; t.len()];
            for (i, &w) in t.iter().enumerate() {
                // slot i omits c[i]; in the image it omits σ(c[i])
                moved[image.position(sigma.apply(c.vertices()[i])).unwrap()] = phi.apply(w);
            }
            prop_assert!(h.is_compatible(&moved).unwrap());
            prop_assert!(h.in_q(&moved));
        }
    }

    #[test]
    fn epsilon_matches_alternating_sum(n in 2usize..=3, which in 0usize..3, raw in prop::collection::vec(0i64..12, 8), gamma in 0i64..12) {
        let g = [FinAbelianGroup::cyclic(3), FinAbelianGroup::cyclic(4), FinAbelianGroup::from_orders(&[2, 2]).unwrap()][which].clone();
        let m = standard(&g, &(0..n as u32 + 2).collect::<Vec<_>>(), n).unwrap();
        let act = native_action(&m);
        let h = &m.structure;
        let c = configs_of_size(h.vertices(), n + 1).remove(0);
        let faces: Vec<AbstractFace> = (0..=n).map(|i| {
            let fc = c.without(i);
            AbstractFace::new(h, fc.key(), h.fiber(&fc)[0])
        }).collect();
        let twists = (0..=n).map(|i| g.reduce(&vec![raw[i]; g.rank()])).collect();
        let datum = SimplexDatum::new(h, &act, c, faces, twists).unwrap();
        let eps = epsilon(h, &act, &datum).unwrap();

        // oracle: Q(x) iff Σ(-1)^i x_i = 0 in the standard law
        let coords: Vec<_> = datum.embedded_all(&act).iter().map(|&w| m.coord(w).unwrap().clone()).collect();
        let alt = g.signed_sum(coords.iter().enumerate().map(|(i, x)| (if i % 2 == 0 { 1 } else { -1 }, x)));
        let expected = if n % 2 == 0 { g.neg(&alt) } else { alt };
        prop_assert_eq!(&eps, &expected);

        let gm = g.reduce(&vec![gamma; g.rank()]);
        let twisted = twist_by(&g, &datum, &gm);
        prop_assert_eq!(epsilon(h, &act, &twisted).unwrap(), g.add(&eps, &gm));
        let same = natural_iso(&g, &datum, &twisted).unwrap().is_some();
        prop_assert_eq!(same, g.element_order(&gm) == 1);
    }

    #[test]
    fn tower_functoriality(m2 in 1u64..=3, r1 in 1u64..=3, r0 in 1u64..=2) {
        let orders = [m2 * r1 * r0, m2 * r1, m2];
        let gs: Vec<FinAbelianGroup> = orders.iter().map(|&o| FinAbelianGroup::cyclic(o)).collect();
        let maps: Vec<GroupHom> = gs.windows(2).map(|w| GroupHom::reduction(&w[0], &w[1]).unwrap()).collect();
        let (pt, models) = standard_tower(&gs, &maps, &[0, 1, 2], 2).unwrap();
        prop_assert!(check_poly_tower(&pt).passed());
        let gt = induced_group_tower(&pt, &native_actions(&models)).unwrap();
        prop_assert_eq!(gt.map("1", "0").unwrap(), &maps[0]);
        prop_assert_eq!(gt.map("2", "1").unwrap(), &maps[1]);
        prop_assert_eq!(
            gt.map("2", "0").unwrap(),
            &maps[1].compose(&maps[0]).unwrap()
        );
        let (lim, _) = inverse_limit(&gt).unwrap();
        prop_assert_eq!(order_profile(&lim), thread_profile(&gs, &maps));
    }
}

/// Element orders in the thread group of a chain, by brute force over the product.
fn thread_profile(gs: &[FinAbelianGroup], maps: &[GroupHom]) -> Vec<u64> {
    let mut threads: Vec<Vec<polyhom::algebra::GroupElement>> = gs[0].elements().map(|e| vec![e]).collect();
    for (i, g) in gs.iter().enumerate().skip(1) {
        threads = threads
            .into_iter()
            .flat_map(|t| {
                let want = maps[i - 1].apply(&t[i - 1]);
                g.elements().filter(move |e| *e == want).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    let mut orders: Vec<u64> = threads
        .iter()
        .map(|t| t.iter().zip(gs).map(|(e, g)| g.element_order(e)).fold(1, |a, b| a.lcm(&b)))
        .collect();
    orders.sort_unstable();
    orders
}

#[test]
fn triangle_homology() {
    let d1 = matrix(3, 3, &[-1, -1, 0, 1, 0, -1, 0, 1, 1]);
    let h1 = homology(&d1, &IntMatrix::zeros(3, 0)).unwrap();
    assert_eq!((h1.free_rank(), h1.invariant_factors().len()), (1, 0));
    assert!(homology(&d1, &matrix(3, 1, &[1, -1, 1])).unwrap().is_trivial());
}

#[test]
fn standard_model_coordinates_round_trip() {
    let g = FinAbelianGroup::from_orders(&[2, 4]).unwrap();
    let m: StandardModel = standard(&g, &[0, 1, 2], 2).unwrap();
    for (c, fiber) in m.structure.top_fibers() {
        for &w in fiber {
            assert_eq!(m.element(c, m.coord(w).unwrap()), Some(w));
        }
    }
}

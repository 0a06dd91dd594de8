use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use classtrace::classes::{class_of, enumerate_classes, minimal_rank, minimal_rank_by_extension, Class, Group};
use classtrace::field::{extension_field, Elem, Field, MAX_FIELD_ORDER};
use classtrace::linalg::{
    centralizer_basis, charpoly, conjugate, cyclic_vector, invariant_factors, invariant_factors_by_nullity,
    is_similar, lu_decompose, minpoly, LinalgError, Matrix,
};
use classtrace::oracle::{centralizer_order, class_product_decomposition, group_order, orbit, DEFAULT_BUDGET};
use classtrace::poly::Poly;
use classtrace::witness::{lemma22_factor, sourour_embed, verify_pair, witness};

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

fn field(i: usize) -> Field {
    Field::of_order(ORDERS[i % ORDERS.len()]).unwrap()
}

fn small_field(i: usize) -> Field {
    Field::of_order([2u64, 3, 4, 5][i % 4]).unwrap()
}

fn random_matrix(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_vec(f, n, n, (0..n * n).map(|_| f.elem(rng.gen_range(0..f.order()))).collect())
}

fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let x = random_matrix(f, n, rng);
        if x.is_invertible() {
            return x;
        }
    }
}

fn leading_minors_nonzero(d: &Matrix) -> bool {
    (1..=d.rows()).all(|k| !d.submatrix(0, 0, k, k).det().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(fi in 0usize..8, a in 0usize..4096, b in 0usize..4096, c in 0usize..4096) {
        let f = field(fi);
        let q = f.order();
        let (a, b, c) = (f.elem(a % q), f.elem(b % q), f.elem(c % q));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.pow(a, q as u64), a);
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!(f.inv(f.mul(a, b)), f.mul(f.inv(b), f.inv(a)));
        }
    }

    #[test]
    fn extension_embedding_is_a_ring_map(fi in 0usize..4, d in 2u32..4, a in 0usize..64, b in 0usize..64) {
        let f = small_field(fi);
        let Ok(ext) = extension_field(&f, d, MAX_FIELD_ORDER) else { return Ok(()) };
        let q = f.order();
        let (a, b) = (f.elem(a % q), f.elem(b % q));
        let g = &ext.field;
        prop_assert_eq!(ext.embed(f.mul(a, b)), g.mul(ext.embed(a), ext.embed(b)));
        prop_assert_eq!(ext.embed(f.add(a, b)), g.add(ext.embed(a), ext.embed(b)));
        prop_assert_eq!(a == b, ext.embed(a) == ext.embed(b));
    }

    #[test]
    fn lu_reconstructs_or_reports_a_vanishing_minor(fi in 0usize..4, n in 1usize..5, seed: u64) {
        let f = small_field(fi);
        let d = random_matrix(&f, n, &mut ChaCha8Rng::seed_from_u64(seed));
        match lu_decompose(&d) {
            Ok((l, u)) => {
                prop_assert_eq!(l.mul(&u), d.clone());
                prop_assert!(leading_minors_nonzero(&d));
            }
            Err(LinalgError::NoLu) => prop_assert!(!leading_minors_nonzero(&d)),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn invariant_factor_paths_agree(fi in 0usize..8, n in 1usize..6, seed: u64) {
        let f = field(fi);
        let a = random_matrix(&f, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let inv = invariant_factors(&a);
        prop_assert_eq!(&inv, &invariant_factors_by_nullity(&a));
        prop_assert_eq!(inv.charpoly(), charpoly(&a));
        prop_assert_eq!(inv.minpoly(), &minpoly(&a));
        prop_assert!(minpoly(&a).eval_matrix(&a).is_zero());
        prop_assert_eq!(cyclic_vector(&a).is_ok(), inv.len() == 1);
    }

    #[test]
    fn similarity_survives_conjugation(fi in 0usize..8, n in 1usize..5, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&f, n, &mut rng);
        let x = random_invertible(&f, n, &mut rng);
        let b = conjugate(&a, &x).unwrap();
        prop_assert!(is_similar(&a, &b) && is_similar(&b, &a) && is_similar(&a, &a));
        prop_assert_eq!(invariant_factors(&a), invariant_factors(&b));
    }

    #[test]
    fn centralizer_basis_commutes(fi in 0usize..8, n in 1usize..5, seed: u64) {
        let f = field(fi);
        let a = random_matrix(&f, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let basis = centralizer_basis(&a);
        for b in &basis {
            prop_assert_eq!(a.mul(b), b.mul(&a));
        }
        let inv = invariant_factors(&a);
        prop_assert_eq!(basis.len(), inv.commutant_dim());
        if inv.is_cyclic() {
            prop_assert_eq!(basis.len(), n);
        }
    }

    #[test]
    fn det_image_contains_centralizer_determinants(fi in 0usize..4, n in 2usize..4, seed: u64) {
        let f = small_field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&f, n, &mut rng);
        let c = Class::Similarity(classtrace::classes::SimilarityClass::of_matrix(&a).unwrap());
        let image = c.closure().det_image();
        let basis = centralizer_basis(&c.representative());
        for _ in 0..8 {
            let mut x = Matrix::zeros(&f, n, n);
            for b in &basis {
                x = x.add(&b.scale(f.elem(rng.gen_range(0..f.order()))));
            }
            let d = x.det();
            if !d.is_zero() {
                prop_assert!(image.contains(d));
                prop_assert!(image.contains(f.inv(d)));
            }
        }
    }

    #[test]
    fn minimal_rank_paths_agree(fi in 0usize..4, n in 1usize..6, seed: u64) {
        let f = small_field(fi);
        let a = random_matrix(&f, n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(minimal_rank(&a), minimal_rank_by_extension(&a));
    }

    #[test]
    fn lemma22_block_shape(fi in 0usize..4, n in 2usize..6, seed: u64) {
        let f = small_field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let monic = |rng: &mut ChaCha8Rng| {
            let mut c: Vec<Elem> = (0..n).map(|_| f.elem(rng.gen_range(0..f.order()))).collect();
            c.push(Elem::ONE);
            Poly::new(&f, c)
        };
        let (p, g) = (monic(&mut rng), monic(&mut rng));
        let d = random_matrix(&f, n - 1, &mut rng);
        prop_assume!(leading_minors_nonzero(&d));
        let b = lemma22_factor(&p, &g, &d).unwrap();
        let prod = b.w.mul(&b.q);
        prop_assert_eq!(prod.submatrix(1, 1, n - 1, n - 1), d.clone());
        prop_assert!((1..n).all(|i| prod[(i, 0)].is_zero()));
        let dets = f.mul(Matrix::companion(&p).det(), Matrix::companion(&g).det());
        prop_assert_eq!(b.delta, f.div(dets, d.det()));
        prop_assert_eq!(invariant_factors(&b.w).chain().to_vec(), vec![p]);
    }

    #[test]
    fn corner_embedding_is_exact(fi in 0usize..4, n in 2usize..7, seed: u64) {
        let f = small_field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m_mat = random_matrix(&f, n, &mut rng);
        let bound = minimal_rank(&m_mat).min(n / 2);
        prop_assume!(bound > 0);
        let m = rng.gen_range(1..=bound);
        let a = random_matrix(&f, m, &mut rng);
        let t = sourour_embed(&m_mat, &a, seed).unwrap();
        let c = conjugate(&m_mat, &t).unwrap();
        prop_assert_eq!(c.submatrix(0, 0, m, m), a);
        prop_assert_eq!(invariant_factors(&c), invariant_factors(&m_mat));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn class_round_trip(fi in 0usize..4, n in 1usize..4, g in 0usize..3, pick: usize) {
        let f = small_field(fi);
        let group = [Group::M, Group::GL, Group::SL][g];
        let cs = enumerate_classes(n, &f, group).unwrap();
        let c = &cs[pick % cs.len()];
        prop_assert_eq!(&class_of(&c.representative(), group).unwrap(), c);
        prop_assert_eq!(&Class::parse(&f, group, &c.to_text()).unwrap(), c);
    }

    #[test]
    fn witnesses_verify_and_repeat(fi in 0usize..4, g in 0usize..2, i: usize, j: usize, t: usize, seed: u64) {
        let f = small_field(fi);
        let group = [Group::M, Group::SL][g];
        let cs: Vec<Class> = enumerate_classes(3, &f, group).unwrap().into_iter().filter(|c| !c.is_scalar()).collect();
        let (o, p) = (&cs[i % cs.len()], &cs[j % cs.len()]);
        let tau = f.elem(t % f.order());
        let w = witness(o, p, tau, seed).unwrap();
        prop_assert!(verify_pair(o, p, tau, &w.w, &w.q).is_ok());
        prop_assert_eq!(&class_of(&w.w, group).unwrap(), o);
        prop_assert_eq!(&class_of(&w.q, group).unwrap(), p);
        prop_assert_eq!(w, witness(o, p, tau, seed).unwrap());
    }

    #[test]
    fn scalar_inputs_are_rejected(fi in 0usize..4, pick: usize) {
        let f = small_field(fi);
        let cs = enumerate_classes(3, &f, Group::M).unwrap();
        let scalar: Vec<&Class> = cs.iter().filter(|c| c.is_scalar()).collect();
        let other = cs.iter().find(|c| !c.is_scalar()).unwrap();
        let s = scalar[pick % scalar.len()];
        prop_assert!(s.closure().minpoly().deg() == 1);
        prop_assert!(witness(s, other, Elem::ZERO, 1).is_err());
        prop_assert!(witness(other, s, Elem::ZERO, 1).is_err());
    }

    #[test]
    fn orbit_times_centralizer_is_group_order(fi in 0usize..2, n in 1usize..4, sl: bool, pick: usize) {
        let f = small_field(fi);
        let group = if sl { Group::SL } else { Group::GL };
        let cs = enumerate_classes(n, &f, group).unwrap();
        let rep = cs[pick % cs.len()].representative();
        let o = orbit(&rep, group, DEFAULT_BUDGET).unwrap().len() as u128;
        let z = centralizer_order(&rep, group, DEFAULT_BUDGET).unwrap() as u128;
        prop_assert_eq!(o * z, group_order(n, f.order() as u64, group));
    }

    #[test]
    fn sampled_products_land_in_listed_classes(fi in 0usize..3, sl: bool, i: usize, j: usize, seed: u64) {
        let f = small_field(fi);
        let (n, group) = if sl { (3, Group::SL) } else { (2, Group::GL) };
        let cs = enumerate_classes(n, &f, group).unwrap();
        let (o, p) = (&cs[i % cs.len()], &cs[j % cs.len()]);
        let listed = class_product_decomposition(o, p, DEFAULT_BUDGET).unwrap();
        let classify = if sl { Group::SL } else { Group::M };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let mut x = random_invertible(&f, n, &mut rng);
            let mut y = random_invertible(&f, n, &mut rng);
            if sl {
                // Fix the determinant on the first row so X and Y lie in SL.
                for (m, k) in [(&mut x, 0), (&mut y, 0)] {
                    let d = f.inv(m.det());
                    for c in 0..n {
                        m[(k, c)] = f.mul(m[(k, c)], d);
                    }
                }
            }
            let w = conjugate(&o.representative(), &x).unwrap();
            let q = conjugate(&p.representative(), &y).unwrap();
            let c = class_of(&w.mul(&q), classify).unwrap();
            prop_assert!(listed.contains(&c), "{} not listed", c.to_text());
        }
    }
}

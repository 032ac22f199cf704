use foliage_core::bundle::{
    dold_whitney_equal, modify, solve_modification, tangent_classes, whitney_sum_classes,
    xi_matrix, BundleClasses, Quaternion,
};
use foliage_core::catalog::load_manifold;
use foliage_core::existence::{
    enumerate_complex_classes, foliation_exists, is_complex_class, Prescription,
};
use foliage_core::geometry::chart::{metric_from, ChartField};
use foliage_core::geometry::connection::{check_orthogonal, orthogonal_j_from_frame};
use foliage_core::geometry::AlmostComplex;
use foliage_core::lattice::{CohClass, IntersectionForm, ManifoldInvariants};
use foliage_core::singularity::coeff::GaussRat;
use foliage_core::singularity::models::{
    synthesize_plan, FamilyRegistry, PlanStrategy, SingularityModel,
};
use foliage_core::singularity::multiplicity::hopf_degree;
use foliage_core::singularity::poly::{poly_int, BivarPoly};
use foliage_core::surface::{jhol_representable, leaf_check, transversal_check, SurfaceData};
use foliage_core::verdict::Status;
use nalgebra::Matrix4;
use proptest::prelude::*;

/// Small unimodular forms: sums of (±1), H and (for variety) E8-free blocks.
fn form_strategy() -> impl Strategy<Value = IntersectionForm> {
    prop::collection::vec(0..3u8, 1..4).prop_map(|blocks| {
        blocks.iter().fold(IntersectionForm::empty(), |acc, b| {
            let block = match b {
                0 => IntersectionForm::diagonal(&[1]).unwrap(),
                1 => IntersectionForm::diagonal(&[-1]).unwrap(),
                _ => IntersectionForm::hyperbolic(),
            };
            acc.block_sum(&block)
        })
    })
}

fn manifold_strategy() -> impl Strategy<Value = ManifoldInvariants> {
    (form_strategy(), 0..3u32).prop_map(|(f, b1)| ManifoldInvariants::new("M", b1, f))
}

fn vec_for(rank: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, rank)
}

/// Unimodular `P` with its inverse, as a product of elementary row operations.
fn unimodular(rank: usize, ops: &[(usize, usize, i64, bool)]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
        .collect();
    let (mut p, mut inv) = (id.clone(), id);
    for &(a, b, k, swap) in ops {
        let (a, b) = (a % rank, b % rank);
        if swap {
            p.swap(a, b);
            for row in inv.iter_mut() {
                row.swap(a, b);
            }
        } else if a != b {
            // row_a += k row_b; inverse gets col_b -= k col_a
            for c in 0..rank {
                p[a][c] += k * p[b][c];
            }
            for row in inv.iter_mut() {
                row[b] -= k * row[a];
            }
        }
    }
    (p, inv)
}

/// New coordinates `x' = P⁻ᵀ x` for `Q' = P Q Pᵀ`.
fn transform(pinv: &[Vec<i64>], x: &[i64]) -> CohClass {
    let r = x.len();
    CohClass::new(
        (0..r)
            .map(|i| (0..r).map(|a| pinv[a][i] * x[a]).sum())
            .collect(),
    )
}

fn unit_quaternion() -> impl Strategy<Value = Quaternion<f64>> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            Quaternion::new(v[0] / n, v[1] / n, v[2] / n, v[3] / n)
        })
}

fn close(a: &Matrix4<f64>, b: &Matrix4<f64>, tol: f64) -> bool {
    (a - b).norm() < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_symmetric((f, a, b) in form_strategy().prop_flat_map(|f| {
        let r = f.rank();
        (Just(f), vec_for(r, 9), vec_for(r, 9))
    })) {
        let (a, b) = (CohClass::new(a), CohClass::new(b));
        prop_assert_eq!(f.pair(&a, &b).unwrap(), f.pair(&b, &a).unwrap());
    }

    #[test]
    fn characteristic_plus_even_is_characteristic((f, c, x) in form_strategy().prop_flat_map(|f| {
        let r = f.rank();
        (Just(f), vec_for(r, 5), vec_for(r, 5))
    })) {
        let wu = f.wu_class();
        // force c onto the Wu class mod 2
        let c: Vec<i64> = c.iter().zip(&wu).map(|(v, w)| if v.rem_euclid(2) == *w as i64 { *v } else { v + 1 }).collect();
        let c = CohClass::new(c);
        prop_assert!(f.is_characteristic(&c).unwrap());
        let shifted = c.add(&CohClass::new(x).scale(2)).unwrap();
        prop_assert!(f.is_characteristic(&shifted).unwrap());
        // characteristic squares agree with the signature mod 8
        prop_assert_eq!((f.square(&c).unwrap() - f.signature()).rem_euclid(8), 0);
    }

    #[test]
    fn basis_change_invariance((inv, ops, tau, nu, cls, genus) in manifold_strategy().prop_flat_map(|m| {
        let r = m.form.rank();
        (
            Just(m),
            prop::collection::vec((0..8usize, 0..8usize, -2..=2i64, any::<bool>()), 0..6),
            vec_for(r, 3),
            vec_for(r, 3),
            vec_for(r, 2),
            0..3u32,
        )
    })) {
        let r = inv.form.rank();
        let (p, pinv) = unimodular(r, &ops);
        let f2 = inv.form.change_basis(&p).unwrap();
        prop_assert_eq!(f2.signature(), inv.form.signature());
        prop_assert_eq!(f2.parity(), inv.form.parity());
        let inv2 = ManifoldInvariants::new("M'", inv.b1, f2.clone());
        let (t, n, s) = (CohClass::new(tau.clone()), CohClass::new(nu.clone()), CohClass::new(cls.clone()));
        let (t2, n2, s2) = (transform(&pinv, &tau), transform(&pinv, &nu), transform(&pinv, &cls));
        prop_assert_eq!(inv.form.pair(&t, &n).unwrap(), f2.pair(&t2, &n2).unwrap());
        let c = t.add(&n).unwrap();
        let c2 = t2.add(&n2).unwrap();
        prop_assert_eq!(inv.form.is_characteristic(&c).unwrap(), f2.is_characteristic(&c2).unwrap());
        prop_assert_eq!(is_complex_class(&inv, &c).unwrap(), is_complex_class(&inv2, &c2).unwrap());
        let sd = SurfaceData::new(&inv.form, s, genus, true).unwrap();
        let sd2 = SurfaceData::new(&f2, s2, genus, true).unwrap();
        prop_assert_eq!(
            transversal_check(&inv, &t, &n, &sd).unwrap().status,
            transversal_check(&inv2, &t2, &n2, &sd2).unwrap().status
        );
        let l1 = leaf_check(&inv, &t, &n, &sd).map(|v| v.status).map_err(|e| e.to_string());
        let l2 = leaf_check(&inv2, &t2, &n2, &sd2).map(|v| v.status).map_err(|e| e.to_string());
        prop_assert_eq!(l1.is_ok(), l2.is_ok());
        if let (Ok(a), Ok(b)) = (l1, l2) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn modification_identity((inv, c, tau) in manifold_strategy().prop_flat_map(|m| {
        let r = m.form.rank();
        (Just(m), vec_for(r, 4), vec_for(r, 4))
    })) {
        let wu = inv.form.wu_class();
        let c: Vec<i64> = c.iter().zip(&wu).map(|(v, w)| if v.rem_euclid(2) == *w as i64 { *v } else { v - 1 }).collect();
        let c = CohClass::new(c);
        let t = CohClass::new(tau);
        let nu = c.sub(&t).unwrap();
        let mn = solve_modification(&inv, &t, &nu).unwrap();
        prop_assert_eq!(mn.m + mn.n, inv.euler_characteristic() - inv.form.pair(&t, &nu).unwrap());
        if is_complex_class(&inv, &c).unwrap() {
            prop_assert_eq!(mn.m, 0);
        }
        let e = modify(&whitney_sum_classes(&inv.form, &t, &nu).unwrap(), mn.m, mn.n);
        prop_assert!(dold_whitney_equal(&e, &tangent_classes(&inv)).unwrap());
    }

    #[test]
    fn modifications_compose(m1 in -6..6i64, n1 in -6..6i64, m2 in -6..6i64, n2 in -6..6i64, e in -9..9i64, p in -9..9i64) {
        let b = BundleClasses { w2: vec![], e, p1: p, complex: None };
        prop_assert_eq!(modify(&modify(&b, m1, n1), m2, n2), modify(&b, m1 + m2, n1 + n2));
        prop_assert_eq!(modify(&modify(&b, m1, n1), -m1, -n1), b);
    }

    #[test]
    fn xi_is_a_homomorphism(q in unit_quaternion(), m1 in -4..4i64, n1 in -4..4i64, m2 in -4..4i64, n2 in -4..4i64) {
        let a = xi_matrix(m1, n1, &q).unwrap();
        let b = xi_matrix(m2, n2, &q).unwrap();
        let ab = xi_matrix(m1 + m2, n1 + n2, &q).unwrap();
        prop_assert!(close(&(a * b), &ab, 1e-9));
        // lands in SO(4)
        prop_assert!(close(&(a.transpose() * a), &Matrix4::identity(), 1e-9));
        prop_assert!((a.determinant() - 1.0).abs() < 1e-9);
        prop_assert!(close(&xi_matrix(0, 0, &q).unwrap(), &Matrix4::identity(), 1e-12));
    }

    #[test]
    fn enumeration_closed_under_negation(inv in manifold_strategy()) {
        let cs = enumerate_complex_classes(&inv, 3).unwrap();
        for c in &cs {
            prop_assert!(cs.contains(&c.neg()));
        }
    }

    #[test]
    fn default_existence_iff(inv in manifold_strategy(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let r = inv.form.rank();
        let cs = enumerate_complex_classes(&inv, 3).unwrap();
        let c = if cs.is_empty() || rng.gen_bool(0.3) {
            CohClass::new((0..r).map(|_| rng.gen_range(-3..=3)).collect())
        } else {
            cs[rng.gen_range(0..cs.len())].clone()
        };
        let t = CohClass::new((0..r).map(|_| rng.gen_range(-3..=3)).collect());
        let nu = c.sub(&t).unwrap();
        let v = foliation_exists(&inv, &t, &nu, &Prescription::default()).unwrap();
        let expect = is_complex_class(&inv, &c).unwrap()
            && inv.euler_characteristic() - inv.form.pair(&t, &nu).unwrap() >= 0;
        prop_assert_eq!(v.status == Status::Exists, expect);
        if let Some(plan) = v.plan() {
            prop_assert_eq!(
                plan.positive_degree() as i64 + inv.form.pair(&t, &nu).unwrap(),
                inv.euler_characteristic()
            );
        }
    }

    #[test]
    fn adjunction_additivity((inv, tau, nu, s, genus) in manifold_strategy().prop_flat_map(|m| {
        let r = m.form.rank();
        (Just(m), vec_for(r, 4), vec_for(r, 4), vec_for(r, 4), 0..4u32)
    })) {
        let f = &inv.form;
        let (t, n, s) = (CohClass::new(tau), CohClass::new(nu), CohClass::new(s));
        let c = t.add(&n).unwrap();
        let sd = SurfaceData::new(f, s.clone(), genus, true).unwrap();
        let (ts, ns, cs) = (f.pair(&t, &s).unwrap(), f.pair(&n, &s).unwrap(), f.pair(&c, &s).unwrap());
        // transversal: (chi(S) - nu.S) + (S.S - tau.S); leaf: (chi(S) - tau.S) + (S.S - nu.S)
        let target = sd.chi + sd.self_int - cs;
        prop_assert_eq!((sd.chi - ns) + (sd.self_int - ts), target);
        prop_assert_eq!((sd.chi - ts) + (sd.self_int - ns), target);
        if !is_complex_class(&inv, &c).unwrap() {
            return Ok(());
        }
        if let Ok(v) = leaf_check(&inv, &t, &n, &sd) {
            if v.status == Status::Exists {
                prop_assert!(jhol_representable(&inv, &c, &sd).unwrap());
            }
        }
        if transversal_check(&inv, &t, &n, &sd).unwrap().status == Status::Exists {
            prop_assert!(jhol_representable(&inv, &c, &sd).unwrap());
        }
    }

    #[test]
    fn plans_sum_to_target(n in 0..40u64, picks in prop::collection::vec(0..6usize, 0..5), seed in any::<u64>(), random in any::<bool>()) {
        let reg = FamilyRegistry::standard();
        let names = ["quadratic", "cusp", "power:2,1", "power:2,2", "crossing:1,1", "power:1,3"];
        let mut menu = vec![SingularityModel::parse("pencil", &reg).unwrap()];
        menu.extend(picks.iter().map(|&i| SingularityModel::parse(names[i], &reg).unwrap()));
        let strategy = if random {
            PlanStrategy::Random { menu, seed }
        } else {
            PlanStrategy::Menu(menu)
        };
        for s in [strategy, PlanStrategy::Default, PlanStrategy::Single] {
            let plan = synthesize_plan(n, &s).unwrap();
            prop_assert_eq!(plan.iter().map(|m| m.degree).sum::<u64>(), n);
            prop_assert!(plan.iter().all(|m| m.is_positive()));
        }
    }
}

fn scale_vars(f: &BivarPoly, a: &GaussRat, b: &GaussRat) -> BivarPoly {
    let pow = |x: &GaussRat, k: u32| (0..k).fold(GaussRat::one(), |acc, _| &acc * x);
    BivarPoly::from_terms(
        f.terms()
            .map(|(&(i, j), c)| ((i, j), &(c * &pow(a, i)) * &pow(b, j))),
    )
}

fn brieskorn_or_crossing() -> impl Strategy<Value = (BivarPoly, u64)> {
    prop_oneof![
        (1..5u32, 1..5u32).prop_map(|(p, q)| (
            poly_int(&[((p + 1, 0), 1), ((0, q + 1), 1)]),
            (p * q) as u64
        )),
        (1..5u32, 1..5u32).prop_map(|(p, q)| (poly_int(&[((p, q), 1)]), 1)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hopf_degree_invariance((f, d) in brieskorn_or_crossing(), a in 1..5i64, b in -4..4i64, k in 1..7i64, extra in 0..3u32) {
        prop_assume!(b != 0);
        prop_assert_eq!(hopf_degree(&f).unwrap(), d);
        prop_assert_eq!(hopf_degree(&f.swap_vars()).unwrap(), d);
        prop_assert_eq!(hopf_degree(&f.scale(&GaussRat::ratio(k, 3))).unwrap(), d);
        let scaled = scale_vars(&f, &GaussRat::int(a), &(&GaussRat::int(b) * &GaussRat::i()));
        prop_assert_eq!(hopf_degree(&scaled).unwrap(), d);
        // a constant term does not move the critical point
        let shifted = f.add(&BivarPoly::constant(GaussRat::int(extra as i64)));
        prop_assert_eq!(hopf_degree(&shifted).unwrap(), d);
    }

    #[test]
    fn frame_j_is_orthogonal(chart_seed in 0..1000u64, j_seed in 0..24u64, pt_seed in any::<u64>()) {
        let chart = ChartField::random_smooth(chart_seed).unwrap();
        let j = orthogonal_j_from_frame(chart.metric.clone(), j_seed);
        for p in chart.sample_points(5, 0.01, pt_seed).unwrap() {
            let g = metric_from(chart.metric.as_ref(), &p).unwrap();
            let jm = j.at(&p).unwrap();
            prop_assert!(check_orthogonal(&jm, &g, &p).is_ok());
            // omega = J^T g is antisymmetric
            let w = jm.transpose() * g;
            prop_assert!((w + w.transpose()).norm() < 1e-9);
        }
    }
}

#[test]
fn catalog_connected_sums_compose() {
    for (a, b) in [
        ("CP2", "CP2bar"),
        ("S2xS2", "K3"),
        ("S3xS1", "CP2"),
        ("2S3xS1", "S4"),
    ] {
        let (ma, mb) = (load_manifold(a).unwrap(), load_manifold(b).unwrap());
        let s = load_manifold(&format!("{a}#{b}")).unwrap();
        assert_eq!(
            s.euler_characteristic(),
            ma.euler_characteristic() + mb.euler_characteristic() - 2
        );
        assert_eq!(s.signature(), ma.signature() + mb.signature());
        assert_eq!(s.b1, ma.b1 + mb.b1);
    }
}

use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soliton_forge::algebra::{identity, norm};
use soliton_forge::monopole::{
    bt_monopole, cross_check, extract_fields, h_inverse, h_matrix, monopole_residual, ward_soliton, GrassmannMap,
    MonopoleFields, MonopoleFrame, Seed,
};
use soliton_forge::{BoxGrid, ComplexMatrix, Error, Field, Grid1D, HermitianProjection, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn line() -> GrassmannMap {
    GrassmannMap::new(2, vec![vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]]).unwrap()
}

fn span(v: &[C64]) -> HermitianProjection {
    HermitianProjection::from_span(&[DVector::from_vec(v.to_vec())]).unwrap()
}

fn patch(half: f64, m: usize) -> BoxGrid {
    BoxGrid::new(vec![Grid1D::new(-half, half, m).unwrap(), Grid1D::new(-half, half, m).unwrap(), Grid1D::new(-1.0, 1.0, 33).unwrap()])
        .unwrap()
}

fn samples() -> Vec<C64> {
    vec![c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(1.0, 1.0), c(-1.0, 2.0), c(3.0, 0.0)]
}

fn two_soliton(grid: &BoxGrid) -> (MonopoleFrame, MonopoleFields, MonopoleFields) {
    let ward = ward_soliton(c(0.0, 1.0), &line()).unwrap();
    let fields = extract_fields(&ward, grid).unwrap();
    let seed = Seed::Constant(span(&[c(1.0, 0.0), c(2.0, 0.0)]));
    let (frame, dressed) = bt_monopole(&ward, &fields, c(0.0, 2.0), seed).unwrap();
    (frame, fields, dressed)
}

#[test]
fn ward_coordinate_is_static_for_unit_pole() {
    let w = soliton_forge::monopole::ward_coordinate(c(0.0, 1.0), 0.7, -0.2, 3.0);
    assert!((w - c(-0.2, 0.7)).norm() < 1e-15);
}

#[test]
fn constant_seed_gives_vacuum_fields() {
    let e1 = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
    let frame = ward_soliton(c(0.3, 1.2), &GrassmannMap::constant(&[e1]).unwrap()).unwrap();
    let fields = extract_fields(&frame, &patch(2.0, 16)).unwrap();
    assert_eq!(fields.skew_defect(), 0.0);
    assert_eq!(fields.density().max_magnitude(), 0.0);
    let empty = extract_fields(&MonopoleFrame::vacuum(2), &patch(2.0, 16)).unwrap();
    assert_eq!(empty.density().max_magnitude(), 0.0);
    assert_eq!(monopole_residual(&empty, &samples()).unwrap(), 0.0);
}

#[test]
fn ward_soliton_solves_the_monopole_equation() {
    let frame = ward_soliton(c(0.0, 1.0), &line()).unwrap();
    let fields = extract_fields(&frame, &patch(1.5, 64)).unwrap();
    assert!(fields.skew_defect() <= 1e-10);
    let r = monopole_residual(&fields, &samples()).unwrap();
    assert!(r <= 1e-4, "Ward residual {r:e}");
    assert!(fields.b_plus().max_magnitude() == 0.0 && fields.a_eta().max_magnitude() == 0.0);
}

#[test]
fn ward_fields_decay_toward_the_faces() {
    let frame = ward_soliton(c(0.0, 1.0), &line()).unwrap();
    let grid = BoxGrid::new(vec![Grid1D::new(-8.0, 8.0, 48).unwrap(), Grid1D::new(-8.0, 8.0, 48).unwrap(), Grid1D::new(-2.0, 2.0, 16).unwrap()])
        .unwrap();
    let fields = extract_fields(&frame, &grid).unwrap();
    let ratio = fields.face_decay_ratio();
    assert!(ratio < 0.05, "face ratio {ratio}");
}

#[test]
fn vacuum_transformation_reproduces_ward_fields() {
    let grid = patch(2.0, 24);
    let alpha = c(0.4, 1.3);
    let (frame, fields) =
        bt_monopole(&MonopoleFrame::vacuum(2), &MonopoleFields::vacuum(&grid, 2).unwrap(), alpha, Seed::Ward(line()))
            .unwrap();
    let direct = extract_fields(&ward_soliton(alpha, &line()).unwrap(), &grid).unwrap();
    assert_eq!(fields, direct);
    let phi = fields.phi();
    for (p, b) in phi.values().iter().zip(fields.b_minus().values()) {
        assert!(norm(&(p + b * c(0.5, 0.0))) <= 1e-15);
    }
    assert_eq!(frame.poles(), vec![alpha]);
}

#[test]
fn two_soliton_solves_the_monopole_equation() {
    let (_, before, fields) = two_soliton(&patch(1.5, 64));
    assert_eq!(fields.a_eta(), before.a_eta());
    assert_eq!(fields.b_plus(), before.b_plus());
    assert!(fields.skew_defect() <= 1e-10);
    let r = monopole_residual(&fields, &samples()).unwrap();
    assert!(r <= 1e-4, "2-soliton residual {r:e}");
}

#[test]
fn affine_decomposition_cross_check() {
    let grid = patch(1.5, 64);
    let (frame, _, fields) = two_soliton(&grid);
    let mismatch = cross_check(&frame, &fields, c(0.5, 0.3), c(-0.7, 0.4)).unwrap();
    assert!(mismatch <= 1e-5, "cross-check {mismatch:e}");
}

#[test]
fn perturbed_fields_fail() {
    let grid = patch(1.5, 32);
    let frame = ward_soliton(c(0.0, 1.0), &line()).unwrap();
    let fields = extract_fields(&frame, &grid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k: Vec<f64> = (0..6).map(|_| rng.gen_range(0.5..1.5)).collect();
    let bump = Field::sample(grid.clone(), |p| {
        let s = 0.3 * (k[0] * p[0] + k[1] * p[1] + k[2] * p[2]).sin();
        let r = 0.3 * (k[3] * p[0] - k[4] * p[1] + k[5] * p[2]).cos();
        Ok(ComplexMatrix::from_row_slice(2, 2, &[c(0.0, s), c(r, s), c(-r, s), c(0.0, -r)]))
    })
    .unwrap();
    let a_xi = fields.a_xi().zip_map(&bump, |a, b| a + b).unwrap();
    let noisy = MonopoleFields::from_light_cone(a_xi, fields.a_eta().clone(), fields.b_plus().clone(), fields.b_minus().clone())
        .unwrap();
    assert!(noisy.skew_defect() <= 1e-10);
    let r = monopole_residual(&noisy, &samples()).unwrap();
    assert!(r >= 1e-2, "negative control residual {r:e}");
}

#[test]
fn residual_needs_interior_points() {
    assert!(matches!(Grid1D::new(-1.0, 1.0, 8), Err(Error::GridTooSmall { .. })));
    let fields = MonopoleFields::vacuum(&patch(1.0, 16), 2).unwrap();
    assert_eq!(monopole_residual(&fields, &samples()).unwrap(), 0.0);
}

#[test]
fn pole_policy_and_degenerate_seed() {
    let frame = ward_soliton(c(0.0, 1.0), &line()).unwrap();
    for alpha in [c(0.0, 1.0), c(0.0, -1.0)] {
        assert!(matches!(frame.with_step(alpha, Seed::Ward(line())), Err(Error::DuplicatePole { .. })));
    }
    assert!(matches!(ward_soliton(c(2.0, 0.0), &line()), Err(Error::RealPole { .. })));
    let dependent = GrassmannMap::new(
        2,
        vec![
            vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
            vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]],
        ],
    )
    .unwrap();
    let bad = ward_soliton(c(0.0, 1.0), &dependent).unwrap();
    assert!(matches!(extract_fields(&bad, &patch(1.0, 16)), Err(Error::Degenerate { .. })));
}

#[test]
fn mu_frame_reality() {
    let (frame, _, _) = two_soliton(&patch(1.0, 16));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let p = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0)];
        let mu = C64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..6.28));
        let e = frame.eval_mu(p, mu).unwrap();
        let e_star = frame.eval_mu(p, mu.conj().inv()).unwrap();
        assert!(norm(&(e_star.adjoint() * e - identity(2))) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frame_reality(x in -4.0..4.0f64, y in -4.0..4.0f64, t in -2.0..2.0f64, lr in -3.0..3.0f64, li in -3.0..3.0f64) {
        let ward = ward_soliton(c(0.0, 1.0), &line()).unwrap();
        let frame = ward.with_step(c(0.5, 2.0), Seed::Constant(span(&[c(1.0, 0.0), c(0.3, 0.7)]))).unwrap();
        let lambda = c(lr, li);
        prop_assume!((lambda - c(0.0, 1.0)).norm() > 0.1 && (lambda - c(0.5, 2.0)).norm() > 0.1);
        prop_assume!((lambda - c(0.0, -1.0)).norm() > 0.1 && (lambda - c(0.5, -2.0)).norm() > 0.1);
        let p = [x, y, t];
        let psi = frame.eval(p, lambda).unwrap();
        let psi_bar = frame.eval(p, lambda.conj()).unwrap();
        prop_assert!(norm(&(psi_bar.adjoint() * &psi - identity(2))) <= 1e-10);
        prop_assert!(norm(&(frame.eval_inverse(p, lambda).unwrap() * psi - identity(2))) <= 1e-10);
    }

    #[test]
    fn h_inverse_identity(re in -2.0..2.0f64, im in 0.1..3.0f64, a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let pi = span(&[c(1.0, 0.0), c(a, b)]);
        let alpha = c(re, im);
        let h = h_matrix(alpha, pi.matrix());
        prop_assert!(norm(&(h * h_inverse(alpha, pi.matrix()) - identity(2))) <= 1e-12);
    }
}

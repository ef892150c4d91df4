//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soliton_forge::algebra::{ad_inverse, commutator, identity, norm, reality_defect};
use soliton_forge::dressing::{
    dress_flow, dress_uo_restricted, dressing_factor, multi_soliton, permute_loop, SolitonSolution,
};
use soliton_forge::hierarchy::{flow_rhs, un_system_residual, PotentialField, QSequence};
use soliton_forge::monopole::{
    bt_monopole, extract_fields, h_inverse, h_matrix, monopole_residual, ward_soliton, GrassmannMap, MonopoleFields,
    Seed,
};
use soliton_forge::verify::{entry_field, nls_residual};
use soliton_forge::{
    BoxGrid, ComplexMatrix, DiagonalElement, DiagonalRegular, Field, Grid1D, HermitianProjection, MatrixField,
    SimplePoleFactor, C64,
};

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn span(v: &[C64]) -> HermitianProjection {
    HermitianProjection::from_span(&[DVector::from_vec(v.to_vec())]).unwrap()
}

fn require(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn line(m: usize) -> Grid1D {
    Grid1D::new(-10.0, 10.0, m).unwrap()
}

fn gauss(x: f64, s: f64, k: usize) -> f64 {
    let y = x - s;
    let g = (-y * y).exp();
    match k {
        0 => g,
        1 => -2.0 * y * g,
        2 => (4.0 * y * y - 2.0) * g,
        3 => (-8.0 * y * y * y + 12.0 * y) * g,
        _ => unreachable!(),
    }
}

fn q_gauss(x: f64, k: usize) -> C64 {
    c(0.8, 0.4) * gauss(x, 0.2, k)
}

fn r_gauss(x: f64, k: usize) -> C64 {
    c(-0.5, 0.9) * gauss(x, -0.3, k)
}

fn sampled(m: usize, f: impl Fn(f64) -> ComplexMatrix + Sync) -> MatrixField {
    Field::sample(BoxGrid::line(line(m)), |x| Ok(f(x[0]))).unwrap()
}

fn q_level_errors(m: usize) -> (f64, f64) {
    let a = DiagonalRegular::su2();
    let u = PotentialField::sl2(line(m), |x| q_gauss(x, 0), |x| r_gauss(x, 0)).unwrap();
    let seq = QSequence::compute(&a, a.element(), &u, 3).unwrap();
    let q2 = sampled(m, |x| {
        let i2 = c(0.0, 0.5);
        let qr = q_gauss(x, 0) * r_gauss(x, 0);
        ComplexMatrix::from_row_slice(2, 2, &[i2 * qr, i2 * q_gauss(x, 1), -i2 * r_gauss(x, 1), -i2 * qr])
    });
    let q3 = sampled(m, |x| {
        let (q0, q1, q2) = (q_gauss(x, 0), q_gauss(x, 1), q_gauss(x, 2));
        let (r0, r1, r2) = (r_gauss(x, 0), r_gauss(x, 1), r_gauss(x, 2));
        let d = q0 * r1 - r0 * q1;
        ComplexMatrix::from_row_slice(2, 2, &[d, -q2 + 2.0 * q0 * q0 * r0, -r2 + 2.0 * q0 * r0 * r0, -d]) * c(0.25, 0.0)
    });
    ((seq.term(2) - &q2).max_magnitude(), (seq.term(3) - &q3).max_magnitude())
}

fn criterion_1() -> Check {
    let (e2, e3) = q_level_errors(512);
    let (f2, f3) = q_level_errors(1024);
    let msg = format!(
        "Q2 {e2:.2e} (≤1e-5), Q3 {e3:.2e} (≤1e-4) at m=512; m=1024: {f2:.2e}, {f3:.2e}, ratios {:.1}, {:.1} (≥8)",
        e2 / f2,
        e3 / f3
    );
    require(e2 <= 1e-5 && e3 <= 1e-4 && e2 >= 8.0 * f2 && e3 >= 8.0 * f3, msg)
}

fn criterion_2() -> Check {
    let a = DiagonalRegular::su2();
    let xs = line(512).points();
    let max_err = |rhs: &PotentialField, want: &dyn Fn(f64) -> C64| {
        rhs.field().values().iter().zip(&xs).map(|(m, &x)| (m[(0, 1)] - want(x)).norm()).fold(0.0, f64::max)
    };
    let u = PotentialField::su2(line(512), |x| q_gauss(x, 0)).unwrap();
    let nls = max_err(&flow_rhs(&a, a.element(), 2, &u).unwrap(), &|x| {
        let q0 = q_gauss(x, 0);
        c(0.0, 0.5) * (q_gauss(x, 2) + 2.0 * q0.norm_sqr() * q0)
    });
    let p = |x: f64, k: usize| 0.9 * gauss(x, 0.1, k);
    let u = PotentialField::sl2(line(512), |x| c(p(x, 0), 0.0), |x| c(-p(x, 0), 0.0)).unwrap();
    let mkdv = max_err(&flow_rhs(&a, a.element(), 3, &u).unwrap(), &|x| {
        c(-0.25 * (p(x, 3) + 6.0 * p(x, 0) * p(x, 0) * p(x, 1)), 0.0)
    });
    let u = PotentialField::sl2(line(512), |x| q_gauss(x, 0), |x| r_gauss(x, 0)).unwrap();
    let rhs = flow_rhs(&a, a.element(), 1, &u).unwrap();
    let translation = rhs
        .field()
        .values()
        .iter()
        .zip(&xs)
        .map(|(m, &x)| (m[(0, 1)] - q_gauss(x, 1)).norm().max((m[(1, 0)] - r_gauss(x, 1)).norm()))
        .fold(0.0, f64::max);
    require(
        nls <= 1e-5 && mkdv <= 1e-4 && translation <= 1e-6,
        format!("NLS {nls:.2e} (≤1e-5), mKdV {mkdv:.2e} (≤1e-4), translation {translation:.2e} (≤1e-6)"),
    )
}

fn nls_on(sol: &SolitonSolution, mt: usize, mx: usize) -> f64 {
    let (t, x) = (Grid1D::new(-1.0, 1.0, mt).unwrap(), line(mx));
    nls_residual(&entry_field(&sol.sample_space_time(t, x).unwrap(), 0, 1)).unwrap().max_abs
}

fn criterion_3() -> Check {
    let a = DiagonalRegular::su2();
    let one = multi_soliton(&a, a.element(), 2, &[(c(0.0, 1.0), span(&[c(1.0, 0.0), c(1.0, 0.0)]))]).unwrap();
    let two = multi_soliton(
        &a,
        a.element(),
        2,
        &[(c(0.0, 1.0), span(&[c(1.0, 0.0), c(1.0, 0.0)])), (c(0.0, 2.0), span(&[c(1.0, 0.0), c(-1.0, 0.0)]))],
    )
    .unwrap();
    let r1 = nls_on(&one, 65, 1024);
    let r2 = nls_on(&two, 513, 2048);
    require(
        r1 <= 1e-5 && r2 <= 1e-4,
        format!("1-soliton {r1:.2e} (≤1e-5, 65×1024), 2-soliton {r2:.2e} (≤1e-4, 513×2048)"),
    )
}

/// A random loop with `U(n)` reality: a constant unitary times two simple
/// factors with poles away from `α`.
fn random_loop(rng: &mut ChaCha8Rng, n: usize) -> impl Fn(C64) -> soliton_forge::Result<ComplexMatrix> {
    let m = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let unitary = m.qr().q();
    let factors: Vec<SimplePoleFactor> = (0..2)
        .map(|k| {
            let v: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let pole = c(rng.gen_range(-1.0..1.0), 2.5 + k as f64);
            SimplePoleFactor::new(pole, span(&v)).unwrap()
        })
        .collect();
    move |l| {
        let mut out = unitary.clone();
        for f in &factors {
            out *= f.eval(l)?;
        }
        Ok(out)
    }
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut commute, mut residue, mut reality) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2, 3] {
        for _ in 0..5 {
            let f = random_loop(&mut rng, n);
            let alpha = c(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..1.5));
            let v: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let pi = span(&v);
            let lp = permute_loop(&f, alpha, &pi).unwrap();
            let g = dressing_factor(alpha, &pi).unwrap();
            let g_tilde = dressing_factor(alpha, &lp.projection()).unwrap();
            for _ in 0..20 {
                let l = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let lhs = g.eval(l).unwrap() * f(l).unwrap();
                let rhs = lp.eval(l).unwrap() * g_tilde.eval(l).unwrap();
                commute = commute.max(norm(&(lhs - rhs)));
            }
            for center in [alpha, alpha.conj()] {
                residue = residue.max(lp.residue_estimate(center, 1e-3, 8).unwrap());
            }
            let samples: Vec<C64> = (0..5).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            reality = reality.max(reality_defect(|l| lp.eval(l), &samples).unwrap());
        }
    }
    require(
        commute <= 1e-10 && residue <= 1e-6 && reality <= 1e-10,
        format!("commutation {commute:.2e} (≤1e-10), residue {residue:.2e} (≤1e-6), reality of f̃ {reality:.2e}"),
    )
}

fn random_solitons(rng: &mut ChaCha8Rng) -> Vec<SolitonSolution> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let a = DiagonalRegular::standard(n).unwrap();
        for j in 1..=3 {
            let k = rng.gen_range(1..=2);
            let steps: Vec<(C64, HermitianProjection)> = (0..k)
                .map(|s| {
                    let v: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                    (c(rng.gen_range(-0.5..0.5), 0.8 + 0.6 * s as f64), span(&v))
                })
                .collect();
            out.push(multi_soliton(&a, a.element(), j, &steps).unwrap());
        }
    }
    out
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let (mut reality, mut normalization) = (0.0f64, 0.0f64);
    for sol in random_solitons(&mut rng) {
        let frame = sol.frame();
        let n = sol.dim();
        for _ in 0..10 {
            let l = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            normalization = normalization.max(norm(&(frame.eval(&[0.0, 0.0], l).unwrap() - identity(n))));
        }
        for _ in 0..4 {
            let (x, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
            let samples: Vec<C64> = (0..5).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            reality = reality.max(reality_defect(|l| frame.eval(&[x, t], l), &samples).unwrap());
        }
    }
    require(
        reality <= 1e-10 && normalization <= 1e-10,
        format!("reality {reality:.2e} (≤1e-10), ‖E(0,0,λ)−I‖ {normalization:.2e} (≤1e-10)"),
    )
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut same = true;
    for sol in random_solitons(&mut rng) {
        let n = sol.dim();
        for pi in [HermitianProjection::zero(n), HermitianProjection::identity(n)] {
            let dressed = dress_flow(&sol, c(0.1, 3.3), &pi).unwrap();
            for _ in 0..3 {
                let p = [rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5)];
                let l = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                same &= dressed.potential(&p).unwrap() == sol.potential(&p).unwrap();
                same &= dressed.frame().eval(&p, l).unwrap() == sol.frame().eval(&p, l).unwrap();
            }
        }
    }
    require(same, format!("u and E bit-identical after π ∈ {{0, I}}: {same}"))
}

fn criterion_7() -> Check {
    let gens = vec![
        DiagonalElement::from_imaginary(&[1.0, -1.0]).unwrap(),
        DiagonalElement::from_imaginary(&[1.0, 2.0]).unwrap(),
    ];
    let grid = BoxGrid::new(vec![Grid1D::new(-3.0, 3.0, 385).unwrap(), Grid1D::new(-3.0, 3.0, 385).unwrap()]).unwrap();
    let vac = SolitonSolution::un_vacuum(&gens).unwrap();
    let real = |v: &[f64]| {
        HermitianProjection::from_span(&[DVector::from_vec(v.iter().map(|&r| c(r, 0.0)).collect())]).unwrap()
    };
    let one = dress_uo_restricted(&vac, 1.0, &real(&[1.0, 0.7])).unwrap();
    let two = dress_uo_restricted(&one, 1.8, &real(&[0.4, -1.0])).unwrap();
    let (mut symmetry, mut residual) = (0.0f64, 0.0f64);
    for sol in [&one, &two] {
        let v = sol.sample(&grid).unwrap();
        symmetry = symmetry.max(v.values().iter().map(|m| norm(&(m.transpose() - m))).fold(0.0, f64::max));
        residual = residual.max(un_system_residual(&v, &gens).unwrap());
    }
    require(
        symmetry <= 1e-10 && residual <= 1e-5,
        format!("one and two steps on [−3,3]² at 385²: ‖ṽᵀ−ṽ‖ {symmetry:.2e} (≤1e-10), U(n)-system residual {residual:.2e} (≤1e-5)"),
    )
}

fn criterion_8() -> Check {
    let axis = |h: f64, m: usize| Grid1D::new(-h, h, m).unwrap();
    let grid = BoxGrid::new(vec![axis(1.5, 64), axis(1.5, 64), axis(1.0, 33)]).unwrap();
    let samples = soliton_forge::verify::default_lambda_samples(&[c(0.0, 1.0), c(0.0, 2.0)]);
    let w_line =
        GrassmannMap::new(2, vec![vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]]).unwrap();
    let ward = ward_soliton(c(0.0, 1.0), &w_line).unwrap();
    let fields = extract_fields(&ward, &grid).unwrap();
    let r1 = monopole_residual(&fields, &samples).unwrap();
    let seed = Seed::Constant(span(&[c(1.0, 0.0), c(2.0, 0.0)]));
    let (_, two) = bt_monopole(&ward, &fields, c(0.0, 2.0), seed).unwrap();
    let r2 = monopole_residual(&two, &samples).unwrap();
    let skew = fields.skew_defect().max(two.skew_defect());

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k: Vec<f64> = (0..6).map(|_| rng.gen_range(0.5..1.5)).collect();
    let bump = Field::sample(grid.clone(), |p| {
        let s = 0.3 * (k[0] * p[0] + k[1] * p[1] + k[2] * p[2]).sin();
        let r = 0.3 * (k[3] * p[0] - k[4] * p[1] + k[5] * p[2]).cos();
        Ok(ComplexMatrix::from_row_slice(2, 2, &[c(0.0, s), c(r, s), c(-r, s), c(0.0, -r)]))
    })
    .unwrap();
    let noisy = MonopoleFields::from_light_cone(
        fields.a_xi().zip_map(&bump, |a, b| a + b).unwrap(),
        fields.a_eta().clone(),
        fields.b_plus().clone(),
        fields.b_minus().clone(),
    )
    .unwrap();
    let control = monopole_residual(&noisy, &samples).unwrap();
    require(
        r1 <= 1e-4 && r2 <= 1e-4 && skew <= 1e-10 && control >= 1e-2,
        format!(
            "Ward {r1:.2e}, 2-soliton {r2:.2e} (≤1e-4 on [−1.5,1.5]²×[−1,1], 64×64×33), skew {skew:.2e} (≤1e-10), perturbed {control:.2e} (≥1e-2)"
        ),
    )
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut h, mut g, mut ad) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2usize, 3, 4] {
        let a = DiagonalRegular::standard(n).unwrap();
        for _ in 0..20 {
            let v: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let pi = span(&v);
            let alpha = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0));
            h = h.max(norm(&(h_matrix(alpha, pi.matrix()) * h_inverse(alpha, pi.matrix()) - identity(n))));
            let f = SimplePoleFactor::new(alpha, pi).unwrap();
            let l = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            g = g.max(norm(&(f.eval(l).unwrap() * f.inverse().eval(l).unwrap() - identity(n))));
            let xi = ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    c(0.0, 0.0)
                } else {
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            });
            let eta = ad_inverse(&a, &xi).unwrap();
            ad = ad.max(norm(&(commutator(&eta, &a.to_matrix()) - &xi)));
        }
    }
    require(
        h <= 1e-12 && g <= 1e-12 && ad <= 1e-13,
        format!("h·h⁻¹ {h:.2e} (≤1e-12), g_α·g_ᾱ {g:.2e} (≤1e-12), ad_inverse {ad:.2e} (≤1e-13)"),
    )
}

fn criterion_10() -> Check {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let args = ["soliton", "--alpha", "i", "--alpha", "2i", "--span", "1,1", "--span", "1,-1", "--verify"];
    let mut outputs = Vec::new();
    for d in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_soliton-forge"))
            .args(args)
            .arg("--out")
            .arg(d.path())
            .output()
            .map_err(|e| e.to_string())?;
        if status.status.code() == Some(3) || status.status.code() == Some(2) {
            return Err(format!("CLI failed: {}", String::from_utf8_lossy(&status.stderr)));
        }
        outputs.push(std::fs::read(d.path().join("soliton.csv")).map_err(|e| e.to_string())?);
    }
    require(outputs[0] == outputs[1], format!("two runs, {} bytes each, identical: {}", outputs[0].len(), outputs[0] == outputs[1]))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("Q-recursion vs closed forms", criterion_1),
        ("flow identification", criterion_2),
        ("dressing correctness", criterion_3),
        ("factor permutation", criterion_4),
        ("reality and normalization", criterion_5),
        ("degenerate dressing", criterion_6),
        ("U(n)/O(n) closure", criterion_7),
        ("monopole", criterion_8),
        ("algebraic identities", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.1}s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

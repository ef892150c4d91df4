use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use super::config::{format_complex, format_grid, AxisSpec, CommandKind, Equation, Profile, RunConfig};
use crate::algebra::{DiagonalElement, DiagonalRegular, HermitianProjection};
use crate::dressing::{dress_un_system, multi_soliton, SolitonSolution};
use crate::error::{Error, Result};
use crate::grid::{BoxGrid, Field, Grid1D};
use crate::hierarchy::{flow_rhs, un_system_residual, PotentialField, QSequence};
use crate::io::{write_artifacts, CsvTable};
use crate::monopole::{bt_monopole, GrassmannMap, MonopoleFields, MonopoleFrame, Seed};
use crate::verify::{
    default_lambda_samples, entry_field, mkdv_residual, monopole_report, nls_residual, translation_residual,
    zero_curvature_residual, ResidualReport, SpaceTimeConnection,
};

/// What a command produced: its table, extra manifest entries, and the
/// residual compared against the tolerance when `--verify` is set.
pub struct Outcome {
    pub table: CsvTable,
    pub details: Value,
    pub checked: Option<f64>,
}

fn axis((lo, hi, m): AxisSpec) -> Result<Grid1D> {
    Grid1D::new(lo, hi, m)
}

fn diagonal(d: &[C64]) -> Result<DiagonalElement> {
    DiagonalElement::new(d.to_vec())
}

fn regular(d: &[C64]) -> Result<DiagonalRegular> {
    DiagonalRegular::new(d.to_vec())
}

fn projection(columns: &[Vec<C64>]) -> Result<HermitianProjection> {
    let cols: Vec<DVector<C64>> = columns.iter().map(|c| DVector::from_vec(c.clone())).collect();
    HermitianProjection::from_span(&cols)
}

fn off_diagonal_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn report_json(r: &ResidualReport) -> Value {
    json!({
        "max_abs": r.max_abs,
        "location": r.location,
        "per_lambda": r.per_lambda.iter().map(|(l, v)| json!([format_complex(*l), v])).collect::<Vec<_>>(),
    })
}

fn gaussian_potential(n: usize, g: Grid1D) -> Result<PotentialField> {
    let field = Field::sample(BoxGrid::line(g), |x| {
        let mut m = crate::algebra::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let shift = 0.2 + 0.1 * (i + j - 1) as f64;
                let z = C64::new(0.8, 0.4) / (j - i) as f64 * (-(x[0] - shift).powi(2)).exp();
                m[(i, j)] = z;
                m[(j, i)] = -z.conj();
            }
        }
        Ok(m)
    })?;
    PotentialField::unitary(field)
}

pub fn qflow(cfg: &RunConfig) -> Result<Outcome> {
    let g = axis(cfg.grid[0])?;
    let a = regular(&cfg.a[0])?;
    let b = diagonal(&cfg.b)?;
    let u = match cfg.profile {
        Profile::Gaussian => gaussian_potential(cfg.n, g)?,
        Profile::Zero => PotentialField::zero(g, cfg.n),
    };
    let seq = QSequence::compute(&a, &b, &u, cfg.j + 1)?;
    let rhs = flow_rhs(&a, &b, cfg.j, &u)?;
    let n = cfg.n;
    let mut header = vec!["x".to_string()];
    for k in 1..=cfg.j + 1 {
        for i in 0..n {
            for j in 0..n {
                header.push(format!("re_Q{k}_{i}{j}"));
                header.push(format!("im_Q{k}_{i}{j}"));
            }
        }
    }
    let pairs = off_diagonal_pairs(n);
    for &(i, j) in &pairs {
        header.push(format!("re_rhs_{i}{j}"));
        header.push(format!("im_rhs_{i}{j}"));
    }
    let mut table = CsvTable::new(header);
    for (p, x) in g.points().into_iter().enumerate() {
        let mut row = vec![x];
        for k in 1..=cfg.j + 1 {
            let q = &seq.term(k).values()[p];
            for i in 0..n {
                for j in 0..n {
                    row.extend([q[(i, j)].re, q[(i, j)].im]);
                }
            }
        }
        let r = &rhs.field().values()[p];
        for &(i, j) in &pairs {
            row.push(r[(i, j)].re);
            row.push(r[(i, j)].im);
        }
        table.push(row)?;
    }
    let max_rhs = rhs.field().max_magnitude();
    Ok(Outcome { table, details: json!({ "max_abs_rhs": max_rhs }), checked: None })
}

fn is_nls(cfg: &RunConfig) -> bool {
    let su2 = [C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    cfg.n == 2 && cfg.j == 2 && cfg.a[0] == su2 && cfg.b == su2
}

fn is_mkdv(cfg: &RunConfig) -> bool {
    let su2 = [C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    cfg.n == 2 && cfg.j == 3 && cfg.a[0] == su2 && cfg.b == su2
}

pub fn soliton(cfg: &RunConfig) -> Result<Outcome> {
    let (x_axis, t_axis) = (axis(cfg.grid[0])?, axis(cfg.grid[1])?);
    let a = regular(&cfg.a[0])?;
    let b = diagonal(&cfg.b)?;
    let steps = cfg
        .alphas
        .iter()
        .zip(&cfg.spans)
        .map(|(al, s)| Ok((*al, projection(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let sol = multi_soliton(&a, &b, cfg.j, &steps)?;
    let u = sol.sample_space_time(t_axis, x_axis)?;
    let n = cfg.n;
    let header: Vec<String> = if n == 2 {
        ["t", "x", "re_q", "im_q", "abs_q"].map(String::from).to_vec()
    } else {
        let mut h = vec!["t".to_string(), "x".to_string()];
        for (i, j) in off_diagonal_pairs(n) {
            h.push(format!("re_u_{i}{j}"));
            h.push(format!("im_u_{i}{j}"));
        }
        h
    };
    let mut table = CsvTable::new(header);
    for (k, m) in u.values().iter().enumerate() {
        let c = u.grid().coords(k);
        let mut row = vec![c[0], c[1]];
        if n == 2 {
            let q = m[(0, 1)];
            row.extend([q.re, q.im, q.norm()]);
        } else {
            for (i, j) in off_diagonal_pairs(n) {
                row.extend([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        table.push(row)?;
    }
    let mut details = json!({});
    let mut checked = None;
    if cfg.verify {
        let conn = SpaceTimeConnection::from_solution(&sol, t_axis, x_axis)?;
        let samples = default_lambda_samples(&cfg.alphas);
        let zc = zero_curvature_residual(|l| conn.theta(l), &samples)?;
        details["zero_curvature"] = report_json(&zc);
        checked = Some(zc.max_abs);
        if is_nls(cfg) {
            let r = nls_residual(&entry_field(&u, 0, 1))?;
            details["nls"] = report_json(&r);
            checked = Some(r.max_abs);
        } else if is_mkdv(cfg) && u.values().iter().all(|m| m[(0, 1)].im.abs() <= 1e-12) {
            let r = mkdv_residual(&u.map(|m| m[(0, 1)].re))?;
            details["mkdv"] = report_json(&r);
            checked = Some(r.max_abs);
        }
    }
    Ok(Outcome { table, details, checked })
}

pub fn unsystem(cfg: &RunConfig) -> Result<Outcome> {
    let a_list = cfg.a.iter().map(|d| diagonal(d)).collect::<Result<Vec<_>>>()?;
    let mut sol = SolitonSolution::un_vacuum(&a_list)?;
    for (al, s) in cfg.alphas.iter().zip(&cfg.spans) {
        sol = dress_un_system(&sol, *al, &projection(s)?)?;
    }
    let grid = BoxGrid::new(cfg.grid.iter().map(|s| axis(*s)).collect::<Result<Vec<_>>>()?)?;
    let v = sol.sample(&grid)?;
    let mut header: Vec<String> = (1..=grid.ndim()).map(|k| format!("x{k}")).collect();
    let pairs = off_diagonal_pairs(cfg.n);
    for &(i, j) in &pairs {
        header.push(format!("re_v_{i}{j}"));
        header.push(format!("im_v_{i}{j}"));
    }
    let mut table = CsvTable::new(header);
    for (k, m) in v.values().iter().enumerate() {
        let mut row = grid.coords(k);
        for &(i, j) in &pairs {
            row.extend([m[(i, j)].re, m[(i, j)].im]);
        }
        table.push(row)?;
    }
    let mut details = json!({});
    let mut checked = None;
    if cfg.verify {
        let r = un_system_residual(&v, &a_list)?;
        details["un_system"] = json!({ "max_abs": r });
        checked = Some(r);
    }
    Ok(Outcome { table, details, checked })
}

pub fn monopole(cfg: &RunConfig) -> Result<Outcome> {
    let grid = BoxGrid::new(cfg.grid.iter().map(|s| axis(*s)).collect::<Result<Vec<_>>>()?)?;
    let mut frame = MonopoleFrame::vacuum(cfg.n);
    let mut fields = MonopoleFields::vacuum(&grid, cfg.n)?;
    for (al, cols) in cfg.alphas.iter().zip(&cfg.pi0) {
        let map = GrassmannMap::new(cfg.n, cols.clone())?;
        let seed = if map.max_degree() == 0 {
            Seed::Constant(map.eval(C64::new(0.0, 0.0))?)
        } else {
            Seed::Ward(map)
        };
        (frame, fields) = bt_monopole(&frame, &fields, *al, seed)?;
    }
    let t_axis = grid.axis(2);
    let it = (0..t_axis.m)
        .min_by(|&p, &q| {
            (t_axis.point(p) - cfg.t_slice).abs().total_cmp(&(t_axis.point(q) - cfg.t_slice).abs())
        })
        .expect("nonempty axis");
    let (a_t, a_x, a_y, phi) = (fields.a_t(), fields.a_x(), fields.a_y(), fields.phi());
    let mut table = CsvTable::new(["t", "x", "y", "phi_norm_sq", "energy_density"]);
    let (mx, my) = (grid.axis(0).m, grid.axis(1).m);
    for ix in 0..mx {
        for iy in 0..my {
            let k = grid.flat_index(&[ix, iy, it]);
            let c = grid.coords(k);
            let p2 = phi.values()[k].norm_squared();
            let e = 0.5
                * (a_t.values()[k].norm_squared()
                    + a_x.values()[k].norm_squared()
                    + a_y.values()[k].norm_squared()
                    + p2);
            table.push(vec![c[2], c[0], c[1], p2, e])?;
        }
    }
    let mut details = json!({ "t_slice": t_axis.point(it) });
    let mut checked = None;
    if cfg.verify {
        let r = monopole_report(&fields, &default_lambda_samples(&cfg.alphas))?;
        let skew = fields.skew_defect();
        details["monopole"] = report_json(&r);
        details["skew_hermitian_defect"] = json!(skew);
        details["face_decay_ratio"] = json!(fields.face_decay_ratio());
        checked = Some(if skew > 1e-10 { f64::INFINITY } else { r.max_abs });
    }
    Ok(Outcome { table, details, checked })
}

/// Rebuilds the `(t, x)` grid of a soliton table: rows in `t`-major order.
fn space_time_grid(t: &[f64], x: &[f64]) -> Result<BoxGrid> {
    let mx = t.iter().take_while(|&&v| v == t[0]).count();
    if x.len() % mx != 0 {
        return Err(Error::InvalidInput("table rows do not form a (t, x) grid".into()));
    }
    let mt = x.len() / mx;
    let g = BoxGrid::new(vec![Grid1D::new(t[0], t[x.len() - 1], mt)?, Grid1D::new(x[0], x[mx - 1], mx)?])?;
    for k in 0..x.len() {
        let c = g.coords(k);
        let scale = 1.0 + c[0].abs().max(c[1].abs());
        if (c[0] - t[k]).abs() > 1e-9 * scale || (c[1] - x[k]).abs() > 1e-9 * scale {
            return Err(Error::InvalidInput(format!("row {} is off the uniform (t, x) grid", k + 1)));
        }
    }
    Ok(g)
}

pub fn verify(cfg: &RunConfig, input: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", input.display())))?;
    let data = CsvTable::parse(&text)?;
    let col = |name: &str| data.column(name).ok_or_else(|| Error::InvalidInput(format!("input has no {name} column")));
    let (t, x, re, im) = (col("t")?, col("x")?, col("re_q")?, col("im_q")?);
    if t.is_empty() {
        return Err(Error::InvalidInput("input has no rows".into()));
    }
    let grid = space_time_grid(&t, &x)?;
    let q = Field::new(grid.clone(), re.iter().zip(&im).map(|(r, i)| C64::new(*r, *i)).collect())?;
    let r = match cfg.equation {
        Equation::Nls => nls_residual(&q)?,
        Equation::Translation => translation_residual(&q)?,
        Equation::Mkdv => mkdv_residual(&q.map(|z| z.re))?,
    };
    let mut table = CsvTable::new(["max_abs", "t_index", "x_index"]);
    table.push(vec![r.max_abs, r.location[0] as f64, r.location[1] as f64])?;
    let details = json!({
        "input": input.display().to_string(),
        "equation": cfg.equation.name(),
        "grid": format_grid(&grid.axes().iter().map(|a| (a.x_min, a.x_max, a.m)).collect::<Vec<_>>()),
        "residual": report_json(&r),
    });
    Ok(Outcome { table, details, checked: Some(r.max_abs) })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Qflow => qflow(cfg),
        CommandKind::Soliton => soliton(cfg),
        CommandKind::Unsystem => unsystem(cfg),
        CommandKind::Monopole => monopole(cfg),
        CommandKind::Verify => verify(cfg, cfg.input.as_deref().expect("validated")),
    }
}

/// Writes `<command>.csv` and `<command>.json` into the output directory.
pub fn write(cfg: &RunConfig, outcome: &Outcome) -> Result<()> {
    let passed = outcome.checked.map(|r| r <= cfg.tol);
    let manifest = json!({
        "tool": "soliton-forge",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.name(),
        "args": cfg.to_args(),
        "csv": format!("{}.csv", cfg.command.name()),
        "columns": outcome.table.header(),
        "rows": outcome.table.rows().len(),
        "tolerance": cfg.tol,
        "verified": cfg.verify || cfg.command == CommandKind::Verify,
        "residual": outcome.checked,
        "passed": passed,
        "details": outcome.details,
    });
    write_artifacts(&cfg.out, cfg.command.name(), &outcome.table, &manifest)?;
    Ok(())
}

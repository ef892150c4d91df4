use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64 as C64;

use super::args::Opts;
use crate::hierarchy::MAX_DEPTH;

/// A configuration error: reported on stderr and mapped to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Qflow,
    Soliton,
    Unsystem,
    Monopole,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Qflow => "qflow",
            CommandKind::Soliton => "soliton",
            CommandKind::Unsystem => "unsystem",
            CommandKind::Monopole => "monopole",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Gaussian,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Nls,
    Mkdv,
    Translation,
}

impl Equation {
    pub fn name(self) -> &'static str {
        match self {
            Equation::Nls => "nls",
            Equation::Mkdv => "mkdv",
            Equation::Translation => "translation",
        }
    }
}

/// `(min, max, points)` of one grid axis.
pub type AxisSpec = (f64, f64, usize);

/// Columns of polynomials: `columns[c][i]` are the ascending coefficients
/// of entry `i` of column `c`.
pub type PolyColumns = Vec<Vec<Vec<C64>>>;

/// A validated run, with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub j: usize,
    /// One generator for flows, one per coordinate for the `U(n)`-system.
    pub a: Vec<Vec<C64>>,
    pub b: Vec<C64>,
    pub alphas: Vec<C64>,
    /// Spanning columns of each dressing projection.
    pub spans: Vec<Vec<Vec<C64>>>,
    /// Polynomial seed of each monopole step.
    pub pi0: Vec<PolyColumns>,
    pub grid: Vec<AxisSpec>,
    pub profile: Profile,
    pub out: PathBuf,
    pub verify: bool,
    pub tol: f64,
    pub input: Option<PathBuf>,
    pub equation: Equation,
    pub t_slice: f64,
}

fn format_real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `a+bi` with the shortest digits that parse back to the same values.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", format_real(z.re), format_real(z.im.abs()))
}

fn parse_real(s: &str) -> Result<f64, ConfigError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => bad(format!("not a finite number: {s:?}")),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; exponents are allowed.
pub fn parse_complex(s: &str) -> Result<C64, ConfigError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return bad("empty complex number");
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(parse_real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other).map_err(|_| ConfigError(format!("not a complex number: {s:?}")))?,
    };
    let re = parse_real(re).map_err(|_| ConfigError(format!("not a complex number: {s:?}")))?;
    Ok(C64::new(re, im))
}

fn parse_list(s: &str) -> Result<Vec<C64>, ConfigError> {
    s.split(',').map(parse_complex).collect()
}

fn format_list(v: &[C64]) -> String {
    v.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(",")
}

/// Columns separated by `|`, entries by `,`.
fn parse_span(s: &str) -> Result<Vec<Vec<C64>>, ConfigError> {
    s.split('|').map(parse_list).collect()
}

fn format_span(cols: &[Vec<C64>]) -> String {
    cols.iter().map(|c| format_list(c)).collect::<Vec<_>>().join("|")
}

/// Columns separated by `|`, entries by `;`, ascending coefficients by `,`.
fn parse_poly(s: &str) -> Result<PolyColumns, ConfigError> {
    s.split('|').map(|col| col.split(';').map(parse_list).collect()).collect()
}

fn format_poly(cols: &PolyColumns) -> String {
    cols.iter()
        .map(|col| col.iter().map(|p| format_list(p)).collect::<Vec<_>>().join(";"))
        .collect::<Vec<_>>()
        .join("|")
}

/// `xmin:xmax:m[,...]`.
pub fn parse_grid(s: &str) -> Result<Vec<AxisSpec>, ConfigError> {
    s.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(':').map(str::trim).collect();
            let [lo, hi, m] = parts[..] else {
                return bad(format!("grid axis {axis:?} is not xmin:xmax:m"));
            };
            let (lo, hi) = (parse_real(lo)?, parse_real(hi)?);
            let m: usize = m.parse().map_err(|_| ConfigError(format!("grid point count {m:?} is not an integer")))?;
            if !(hi > lo) {
                return bad(format!("grid axis {axis:?} has xmax <= xmin"));
            }
            if m < crate::grid::MIN_POINTS {
                return bad(format!("grid axis {axis:?} needs at least {} points", crate::grid::MIN_POINTS));
            }
            Ok((lo, hi, m))
        })
        .collect()
}

pub fn format_grid(g: &[AxisSpec]) -> String {
    g.iter()
        .map(|(lo, hi, m)| format!("{}:{}:{m}", format_real(*lo), format_real(*hi)))
        .collect::<Vec<_>>()
        .join(",")
}

fn default_a(n: usize) -> Vec<C64> {
    (0..n).map(|k| C64::new(0.0, (n as f64 - 1.0) - 2.0 * k as f64)).collect()
}

fn check_diagonal(name: &str, d: &[C64], n: usize) -> Result<(), ConfigError> {
    if d.len() != n {
        return bad(format!("--{name} has {} entries, expected n = {n}", d.len()));
    }
    if d.iter().any(|z| z.re != 0.0) {
        return bad(format!("--{name} entries must be purely imaginary"));
    }
    Ok(())
}

fn check_regular(name: &str, d: &[C64]) -> Result<(), ConfigError> {
    for (i, x) in d.iter().enumerate() {
        if d[i + 1..].contains(x) {
            return bad(format!("--{name} must have pairwise distinct entries"));
        }
    }
    Ok(())
}

fn check_poles(alphas: &[C64]) -> Result<(), ConfigError> {
    for (k, a) in alphas.iter().enumerate() {
        if a.im == 0.0 {
            return bad(format!("pole {} lies on the real axis", format_complex(*a)));
        }
        if alphas[..k].iter().any(|p| *p == *a || *p == a.conj()) {
            return bad(format!("pole {} repeats an earlier pole or its conjugate", format_complex(*a)));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn from_opts(command: CommandKind, o: &Opts) -> Result<Self, ConfigError> {
        let spans = o.span.iter().map(|s| parse_span(s)).collect::<Result<Vec<_>, _>>()?;
        let pi0 = o.pi0.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>()?;
        let a_given = o.a.iter().map(|s| parse_list(s)).collect::<Result<Vec<_>, _>>()?;
        let alphas = o.alpha.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>()?;
        let inferred_n = a_given
            .first()
            .map(Vec::len)
            .or_else(|| spans.first().and_then(|s| s.first()).map(Vec::len))
            .or_else(|| pi0.first().and_then(|p| p.first()).map(Vec::len));
        let n = o.n.or(inferred_n).unwrap_or(2);
        if n < 2 {
            return bad("--n must be at least 2");
        }
        let j = o.j.unwrap_or(2);
        if j > MAX_DEPTH {
            return bad(format!("j exceeds supported depth {MAX_DEPTH}"));
        }
        if j == 0 {
            return bad("j must be at least 1");
        }
        let tol = o.tol.unwrap_or(match command {
            CommandKind::Monopole => 1e-4,
            _ => 1e-5,
        });
        if !(tol > 0.0 && tol.is_finite()) {
            return bad("--tol must be a positive number");
        }
        let profile = match o.profile.as_deref() {
            None | Some("gaussian") => Profile::Gaussian,
            Some("zero") => Profile::Zero,
            Some(p) => return bad(format!("unknown profile {p:?}; expected gaussian or zero")),
        };
        let equation = match o.equation.as_deref() {
            None | Some("nls") => Equation::Nls,
            Some("mkdv") => Equation::Mkdv,
            Some("translation") => Equation::Translation,
            Some(e) => return bad(format!("unknown equation {e:?}; expected nls, mkdv or translation")),
        };

        let a = match command {
            CommandKind::Unsystem => {
                if a_given.is_empty() {
                    vec![default_a(n), (1..=n).map(|k| C64::new(0.0, k as f64)).collect()]
                } else {
                    a_given
                }
            }
            _ => match a_given.len() {
                0 => vec![default_a(n)],
                1 => a_given,
                _ => return bad("--a may be given once for this command"),
            },
        };
        for d in &a {
            check_diagonal("a", d, n)?;
        }
        if command != CommandKind::Unsystem {
            check_regular("a", &a[0])?;
        }
        let b = match &o.b {
            Some(s) => parse_list(s)?,
            None => a[0].clone(),
        };
        check_diagonal("b", &b, n)?;
        let trace: C64 = b.iter().sum();
        if command != CommandKind::Unsystem && trace.norm() > 1e-12 {
            return bad("--b must be trace-free");
        }

        let (alphas, spans, pi0) = match command {
            CommandKind::Monopole if alphas.is_empty() && pi0.is_empty() => (
                vec![C64::new(0.0, 1.0)],
                Vec::new(),
                vec![vec![vec![vec![C64::new(1.0, 0.0)], vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]]],
            ),
            _ => (alphas, spans, pi0),
        };
        check_poles(&alphas)?;
        match command {
            CommandKind::Soliton | CommandKind::Unsystem => {
                if spans.len() != alphas.len() {
                    return bad(format!("{} --alpha values but {} --span values", alphas.len(), spans.len()));
                }
                for cols in &spans {
                    if cols.iter().any(|c| c.len() != n) {
                        return bad(format!("every --span column needs n = {n} entries"));
                    }
                }
            }
            CommandKind::Monopole => {
                if pi0.len() != alphas.len() {
                    return bad(format!("{} --alpha values but {} --pi0 values", alphas.len(), pi0.len()));
                }
                for cols in &pi0 {
                    if cols.iter().any(|c| c.len() != n) {
                        return bad(format!("every --pi0 column needs n = {n} entries"));
                    }
                }
            }
            _ => {}
        }

        let grid = match &o.grid {
            Some(s) => parse_grid(s)?,
            None => match command {
                CommandKind::Qflow => vec![(-10.0, 10.0, 512)],
                CommandKind::Soliton => vec![(-10.0, 10.0, 512), (-1.0, 1.0, 64)],
                CommandKind::Unsystem => vec![(-3.0, 3.0, if a.len() <= 2 { 193 } else { 33 }); a.len()],
                CommandKind::Monopole => vec![(-1.5, 1.5, 64), (-1.5, 1.5, 64), (-1.0, 1.0, 33)],
                CommandKind::Verify => Vec::new(),
            },
        };
        let want = match command {
            CommandKind::Qflow => Some(1),
            CommandKind::Soliton => Some(2),
            CommandKind::Unsystem => Some(a.len()),
            CommandKind::Monopole => Some(3),
            CommandKind::Verify => None,
        };
        if let Some(d) = want {
            if grid.len() != d {
                return bad(format!("--grid has {} axes, {} expects {d}", grid.len(), command.name()));
            }
        }
        if command == CommandKind::Verify && o.input.is_none() {
            return bad("verify needs --input CSV");
        }

        Ok(Self {
            command,
            n,
            j,
            a,
            b,
            alphas,
            spans,
            pi0,
            grid,
            profile,
            out: o.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            verify: o.verify,
            tol,
            input: o.input.clone(),
            equation,
            t_slice: o.t_slice.unwrap_or(0.0),
        })
    }

    /// The normalized command line of this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut v = vec![self.command.name().to_string()];
        let mut push = |k: &str, val: String| {
            v.push(format!("--{k}"));
            v.push(val);
        };
        push("n", self.n.to_string());
        push("j", self.j.to_string());
        for a in &self.a {
            push("a", format_list(a));
        }
        push("b", format_list(&self.b));
        for z in &self.alphas {
            push("alpha", format_complex(*z));
        }
        for s in &self.spans {
            push("span", format_span(s));
        }
        for p in &self.pi0 {
            push("pi0", format_poly(p));
        }
        push("profile", if self.profile == Profile::Gaussian { "gaussian" } else { "zero" }.into());
        if !self.grid.is_empty() {
            push("grid", format_grid(&self.grid));
        }
        push("t-slice", format_real(self.t_slice));
        if let Some(i) = &self.input {
            push("input", i.display().to_string());
        }
        push("equation", self.equation.name().into());
        push("tol", format_real(self.tol));
        push("out", self.out.display().to_string());
        if self.verify {
            v.push("--verify".into());
        }
        v
    }
}

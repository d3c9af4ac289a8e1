use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use flatsym::connection::{crofton_measure_with, default_probes, parallel_transport, so_reduction, SurfacePath};
use flatsym::deformation::{closure_residual, deformation_table, transport_h, FrameDiff, HkDeformation, HolDiff};
use flatsym::exact::{
    cmn_exact, cmn_quad, cmn_table_csv, genfun_check, pairing_coefficient_exact, pairing_coefficient_numeric, Reading,
};
use flatsym::flows::{flow as integrate_flow, jacobi as solve_jacobi, FrameField};
use flatsym::hyperbolic::{y_flow, Sl2};
use flatsym::metrics::{FinslerModel, UPoint};
use flatsym::report::{fixed10, sig, CsvTable};

use crate::config::Settings;
use crate::svg::HalfPlanePlot;
use crate::{
    CliError, CmnArgs, CroftonArgs, DeformArgs, FlowArgs, GenfunArgs, HolonomyArgs, JacobiArgs, PairingArgs, ReduceArgs,
};

/// Configuration keys accepted by each command.
pub const KNOWN: &[(&str, &[&str])] = &[
    ("flow", &["model", "field", "x", "y", "phi", "t", "tol", "out", "svg"]),
    ("jacobi", &["model", "x", "y", "phi", "t", "tol", "out"]),
    ("crofton", &["x", "y", "n", "seed", "margin", "out"]),
    ("holonomy", &["model", "x0", "y0", "side", "probes", "tol", "threshold", "out"]),
    ("cmn", &["m", "n", "exact", "tol", "table", "out"]),
    ("genfun", &["m", "order"]),
    ("pairing", &["reading", "m_min", "m_max", "numeric", "tol", "golden"]),
    ("reduce", &["model", "x", "y", "phi", "t_max", "n", "tol", "out"]),
    ("deform", &["m", "coeffs", "x", "y", "phi", "t", "tol", "out"]),
];

/// Point `x,y` of the half-plane given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub f64, pub f64);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'x,y', got '{s}'"))?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
        Ok(Pair(parse(a)?, parse(b)?))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

fn model(s: &Settings, flag: &Option<String>) -> Result<FinslerModel, CliError> {
    let id: String = s.get("model", flag.clone(), "hyperbolic".to_string())?;
    let m = FinslerModel::parse(&id)?;
    m.validate()?;
    Ok(m)
}

fn point(s: &Settings, x: Option<f64>, y: Option<f64>, phi: Option<f64>) -> Result<UPoint, CliError> {
    let p = UPoint::new(s.get("x", x, 0.0)?, s.get("y", y, 1.0)?, s.get("phi", phi, 0.0)?)?;
    Ok(p)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn flow(a: &FlowArgs, s: &Settings) -> Result<(), CliError> {
    let model = model(s, &a.model)?;
    let field: String = s.get("field", a.field.clone(), "X".to_string())?;
    let field = FrameField::from_str(&field)?;
    let start = point(s, a.x, a.y, a.phi)?;
    let t = s.get("t", a.t, 1.0)?;
    let tol = positive("tol", s.get("tol", a.tol, 1e-10)?)?;
    let tr = integrate_flow(&model, field, start, t, tol)?;
    let end = tr.end();
    let truncated = tr.truncated_at.map_or("none".to_string(), sig);
    println!(
        "field={field} end x={} y={} phi={} samples={} truncated_at={truncated}",
        sig(end.x),
        sig(end.y),
        sig(end.phi),
        tr.samples.len()
    );
    if let Some(path) = s.get_opt("out", a.out.clone())? {
        write(&path, &tr.to_csv())?;
    }
    if let Some(path) = s.get_opt("svg", a.svg.clone())? {
        let orbit: Vec<(f64, f64)> = tr.samples.iter().map(|(_, p)| (p.x, p.y)).collect();
        let mut plot = HalfPlanePlot::fitting(&orbit);
        for k in 0..8 {
            let u = UPoint { phi: start.phi + k as f64 * PI / 8.0, ..start };
            plot.geodesic(Sl2::from_point(u).geodesic_ends(), "geodesic");
            let ycurve: Vec<(f64, f64)> = (-60..=60).map(|i| y_flow(u, i as f64 * 0.05)).map(|p| (p.x, p.y)).collect();
            plot.curve(&ycurve, "ycurve");
        }
        plot.curve(&orbit, "orbit");
        plot.marker(start.x, start.y);
        write(&path, &plot.render())?;
    }
    Ok(())
}

pub fn jacobi(a: &JacobiArgs, s: &Settings) -> Result<(), CliError> {
    let model = model(s, &a.model)?;
    let anchor = point(s, a.x, a.y, a.phi)?;
    let t = s.get("t", a.t, 1.0)?;
    let tol = positive("tol", s.get("tol", a.tol, 1e-11)?)?;
    let pair = solve_jacobi(&model, anchor, (t.min(0.0), t.max(0.0)), tol)?;
    let st = pair.at(t).ok_or_else(|| CliError::Numeric(format!("Jacobi solution does not reach t = {t}")))?;
    println!("f1={} f2={}", fixed10(st.f1), fixed10(st.f2));
    if let Some(path) = s.get_opt("out", a.out.clone())? {
        write(&path, &pair.to_csv())?;
    }
    Ok(())
}

pub fn crofton(a: &CroftonArgs, s: &Settings) -> Result<(), CliError> {
    let p = s.get("x", a.x, Pair(0.0, 1.0))?;
    let q = s.get("y", a.y, Pair(0.0, 1f64.exp()))?;
    let n = s.get("n", a.n, 100_000)?;
    let seed = s
        .get_opt("seed", a.seed)?
        .ok_or_else(|| CliError::Config("crofton samples randomly and needs a seed".into()))?;
    let margin = positive("margin", s.get("margin", a.margin, flatsym::connection::DEFAULT_MARGIN)?)?;
    let r = crofton_measure_with((p.0, p.1), (q.0, q.1), n, seed, margin)?;
    println!("estimate={} stderr={} d_true={}", sig(r.estimate), sig(r.std_error), sig(r.d_true));
    if let Some(path) = s.get_opt("out", a.out.clone())? {
        write(&path, &flatsym::connection::CroftonResult::to_csv(&[r]))?;
    }
    Ok(())
}

pub fn holonomy(a: &HolonomyArgs, s: &Settings) -> Result<(), CliError> {
    let model = model(s, &a.model)?;
    let x0 = s.get("x0", a.x0, 0.0)?;
    let y0 = positive("y0", s.get("y0", a.y0, 1.0)?)?;
    let side = positive("side", s.get("side", a.side, 1.0)?)?;
    let n = s.get("probes", a.probes, 8)?;
    let tol = positive("tol", s.get("tol", a.tol, 1e-8)?)?;
    let threshold = positive("threshold", s.get("threshold", a.threshold, 1e-5)?)?;
    if n == 0 {
        return Err(CliError::Config("probes must be at least 1".into()));
    }
    let lp = SurfacePath::square(x0, y0, side);
    let mut table = CsvTable::new(&["phi", "t", "phi_end", "t_end", "displacement"]);
    let mut worst: f64 = 0.0;
    for p in default_probes(n) {
        let end = parallel_transport(&model, &lp, p, tol)?;
        let d = end.distance(&p);
        worst = worst.max(d);
        table.push(&[p.phi, p.t, end.phi, end.t, d]);
    }
    println!("displacement={} probes={n} model={}", sig(worst), model.name());
    if let Some(path) = s.get_opt("out", a.out.clone())? {
        write(&path, &table.render())?;
    }
    if worst > threshold {
        return Err(CliError::Numeric(format!("holonomy displacement {} exceeds {}", sig(worst), sig(threshold))));
    }
    Ok(())
}

pub fn cmn(a: &CmnArgs, s: &Settings) -> Result<(), CliError> {
    if let Some(max_sum) = s.get_opt("table", a.table)? {
        if max_sum < 1 {
            return Err(CliError::Config(format!("table size must be at least 1, got {max_sum}")));
        }
        let csv = cmn_table_csv(max_sum)?;
        match s.get_opt("out", a.out.clone())? {
            Some(path) => {
                write(&path, &csv)?;
                println!("wrote {} values to {}", csv.lines().count() - 1, path.display());
            }
            None => print!("{csv}"),
        }
        return Ok(());
    }
    let m = s.get("m", a.m, 0)?;
    let n = s.get("n", a.n, 1)?;
    let exact = cmn_exact(m, n)?;
    if s.switch("exact", a.exact)? {
        println!("{exact}");
        return Ok(());
    }
    let tol = positive("tol", s.get("tol", a.tol, 1e-12)?)?;
    let q = cmn_quad(m, n, tol)?;
    let diff = (q.value - exact.to_f64()).abs();
    println!("c({m},{n}) exact={exact} value={} quad={} diff={}", sig(exact.to_f64()), sig(q.value), sig(diff));
    if diff > 1e-10 {
        return Err(CliError::Numeric(format!("quadrature differs from the exact value by {}", sig(diff))));
    }
    Ok(())
}

pub fn genfun(a: &GenfunArgs, s: &Settings) -> Result<(), CliError> {
    let m_max = s.get("m", a.m, 8)?;
    let order = s.get("order", a.order, 12)?;
    let mut bad = Vec::new();
    for m in 1..=m_max {
        let res = genfun_check(m, order)?;
        if let Some(k) = res.iter().position(|r| *r != Default::default()) {
            bad.push(format!("m={m} k={k} residual={}", res[k]));
        }
    }
    println!("genfun m=1..{m_max} order={order} nonzero={}", bad.len());
    if !bad.is_empty() {
        return Err(CliError::Numeric(bad.join("; ")));
    }
    Ok(())
}

fn readings(s: &str) -> Result<Vec<Reading>, CliError> {
    if s.eq_ignore_ascii_case("both") {
        Ok(vec![Reading::R1, Reading::R2])
    } else {
        Ok(vec![s.parse()?])
    }
}

pub fn pairing(a: &PairingArgs, s: &Settings) -> Result<(), CliError> {
    let which = readings(&s.get("reading", a.reading.clone(), "both".to_string())?)?;
    let m_min = s.get("m_min", a.m_min, 3)?;
    let m_max = s.get("m_max", a.m_max, 10)?;
    let numeric = s.switch("numeric", a.numeric)?;
    let tol = positive("tol", s.get("tol", a.tol, 1e-8)?)?;
    let golden = s.get_opt("golden", a.golden.clone())?;
    let mut tables: Vec<(Reading, String)> =
        which.iter().map(|r| (*r, String::from("m,a_rational,b_rational,float_image\n"))).collect();
    for m in m_min..=m_max {
        let mut line = format!("m={m}");
        for (r, csv) in tables.iter_mut() {
            let v = pairing_coefficient_exact(m, *r)?;
            line.push_str(&format!(" {r}={} ({v})", sig(v.to_f64())));
            csv.push_str(&format!("{m},{},{},{}\n", v.a, v.b, sig(v.to_f64())));
        }
        if numeric {
            line.push_str(&format!(" numeric={}", sig(pairing_coefficient_numeric(m, tol)?)));
        }
        println!("{line}");
    }
    if let Some(dir) = golden {
        fs::create_dir_all(&dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        for (r, csv) in &tables {
            write(&dir.join(format!("pairing_{r}.csv")), csv)?;
        }
    }
    Ok(())
}

pub fn reduce(a: &ReduceArgs, s: &Settings) -> Result<(), CliError> {
    let model = model(s, &a.model)?;
    let anchor = point(s, a.x, a.y, a.phi)?;
    let t_max = positive("t_max", s.get("t_max", a.t_max, 5.0)?)?;
    let n = s.get("n", a.n, 20)?;
    let tol = positive("tol", s.get("tol", a.tol, 1e-12)?)?;
    let data = so_reduction(&model, anchor, t_max, n, tol)?;
    let worst_root = data.samples.iter().map(|x| x.tau_residual).fold(0.0, f64::max);
    println!(
        "lambda0={} horizontality={} tau_residual={}",
        sig(data.lambda_at_zero),
        sig(data.horizontality_residual_at_0),
        sig(worst_root)
    );
    if let Some(path) = s.get_opt("out", a.out.clone())? {
        let mut table = CsvTable::new(&["t", "tau", "tau_residual", "f1", "f1_tau", "F1", "F1_prime"]);
        for x in &data.samples {
            table.push(&[x.t, x.tau, x.tau_residual, x.f1, x.f1_tau, x.big_f1, x.big_f1_prime]);
        }
        write(&path, &table.render())?;
    }
    if worst_root > 1e-10 {
        return Err(CliError::Numeric(format!("tau root residual {} too large", sig(worst_root))));
    }
    Ok(())
}

fn parse_coeffs(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let (re, im) = c.split_once(',').unwrap_or((c, "0"));
            let f =
                |v: &str| v.trim().parse::<f64>().map_err(|e| CliError::Config(format!("bad coefficient '{c}': {e}")));
            Ok(Complex64::new(f(re)?, f(im)?))
        })
        .collect()
}

/// Closure residuals above this size relative to max(1, |b|) fail the run.
const CLOSURE_LIMIT: f64 = 1e-6;

pub fn deform(a: &DeformArgs, s: &Settings) -> Result<(), CliError> {
    let m = s.get("m", a.m, 3)?;
    let coeffs = parse_coeffs(&s.get("coeffs", a.coeffs.clone(), "1,0".to_string())?)?;
    let diff = HolDiff::new(m, coeffs)?;
    let u = point(s, a.x, a.y, a.phi)?;
    let t = s.get("t", a.t, 1.0)?;
    let tol = positive("tol", s.get("tol", a.tol, 1e-10)?)?;
    let hk = HkDeformation::new(diff.clone());
    let f = hk.sample(u, FrameDiff::default());
    let h = transport_h(|p| hk.delta_k(p), |p| hk.delta_c(p), u, t, tol)?;
    let closure = closure_residual(&diff, u, t).abs();
    let scale = flatsym::deformation::CrDeformation::new(diff).b(u).norm().max(1.0);
    println!(
        "u={} dC={} dK={} dK_direct={} closure={} casimir={} h={}",
        sig(f.u),
        sig(f.delta_c),
        sig(f.delta_k),
        sig(hk.delta_k_direct(u)),
        sig(closure),
        sig(f.casimir_residual),
        sig(h)
    );
    if let Some(path) = s.get_opt("out", a.out.clone())? {
        let grid: Vec<(UPoint, f64)> = [-1.0, 0.0, 1.0]
            .iter()
            .flat_map(|&tt| (0..8).map(move |k| (UPoint { phi: k as f64 * PI / 4.0, ..u }, tt)))
            .collect();
        write(&path, &deformation_table(&hk, &grid, tol)?.render())?;
    }
    if closure > CLOSURE_LIMIT * scale {
        return Err(CliError::Numeric(format!("closure residual {} exceeds tolerance", sig(closure))));
    }
    Ok(())
}

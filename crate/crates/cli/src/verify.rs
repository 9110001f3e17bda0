//! Self-check of a build: numerical oracles against the closed forms.

use serde::{Deserialize, Serialize};

use noncentral::nu::Branch;
use noncentral::partition::{
    closed_form, convergence_integral, convergence_integral_quadrature, em_3d_laurent_with,
    partition_direct, partition_em_1d, partition_em_3d_with, Em3dCoefficients,
};
use noncentral::spectrum::{
    angular_solution, count_radial_nodes, degeneracy, ell_from_separation, energy_over_xi,
    radial_ode_residual, radial_overlap, radial_wavefunction, solve_radial_energy,
    solve_separation_constant,
};
use noncentral::thermo::{thermo_point, LnZDerivatives, PartitionProvider, ThermoPoint};
use noncentral::{
    DerivativeScheme, FormulaVariant, Method, Mode, PartitionModel, PartitionSpec, PotentialParams,
};

/// Knobs for mutation testing of the checks themselves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub em3d: Em3dCoefficients,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            let tol = c.tolerance.map_or(String::new(), |t| format!(" (tol {t:.0e})"));
            out.push_str(&format!(
                "{tag} {}: {:.3e}{tol}; {}\n",
                c.name, c.measured, c.detail
            ));
        }
        let failed = self.failures();
        let judged = self.checks.iter().filter(|c| c.status != Status::Info).count();
        out.push_str(&format!("{} of {judged} checks passed\n", judged - failed));
        out
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn judged(name: &str, measured: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name: name.into(),
        status: if measured < tolerance { Status::Pass } else { Status::Fail },
        measured,
        tolerance: Some(tolerance),
        detail,
    }
}

fn info(name: &str, measured: f64, detail: String) -> Check {
    Check {
        name: name.into(),
        status: Status::Info,
        measured,
        tolerance: None,
        detail,
    }
}

/// Max over a list, NaN/∞ for failures so the check fails visibly.
fn worst<I: IntoIterator<Item = Option<f64>>>(it: I) -> f64 {
    it.into_iter()
        .map(|v| v.unwrap_or(f64::INFINITY))
        .fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn radial_energies(branch: Branch) -> f64 {
    worst((0..=3u32).flat_map(|n| {
        (0..=3u32).map(move |l| {
            let ell = f64::from(l);
            solve_radial_energy(n, ell, branch)
                .ok()
                .map(|e| rel(e, energy_over_xi(n, ell)))
        })
    }))
}

fn angular_constants() -> f64 {
    let mut all = Vec::new();
    for &(a2, a3) in &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
        let p = PotentialParams::natural(1.0, a2, a3).expect("valid params");
        for s in 0..=3u32 {
            for m in 0..=3u32 {
                let printed = angular_solution(&p, s, m).ok();
                let root = solve_separation_constant(&p, s, m)
                    .and_then(ell_from_separation)
                    .ok();
                all.push(match (printed, root) {
                    (Some(sol), Some(ell)) => Some((ell - 0.5 - sol.big_l).abs() / (1.0 + sol.big_l)),
                    _ => None,
                });
            }
        }
    }
    worst(all)
}

/// Order-2 3D Euler-Maclaurin model with injectable coefficients.
struct Em3d(Em3dCoefficients);

impl PartitionProvider for Em3d {
    fn z(&self, alpha_bar: f64) -> noncentral::Result<f64> {
        Ok(partition_em_3d_with(alpha_bar, &self.0)?.z)
    }

    fn analytic(&self, alpha_bar: f64) -> Option<noncentral::Result<LnZDerivatives>> {
        let l = em_3d_laurent_with(&self.0);
        let d = l.derivative();
        let z = l.eval(alpha_bar);
        let g = d.eval(alpha_bar) / z;
        Some(Ok(LnZDerivatives {
            z,
            d1: g,
            d2: d.derivative().eval(alpha_bar) / z - g * g,
        }))
    }

    fn method(&self) -> Method {
        Method::EulerMaclaurin
    }
}

fn thermo_identities() -> (f64, f64) {
    let model = PartitionModel::new(Mode::ThreeD, Method::Direct);
    let mut id: f64 = 0.0;
    let mut cu: f64 = 0.0;
    for i in 0..40 {
        let a = 0.5 + 49.5 * f64::from(i) / 39.0;
        let point = |x| thermo_point(x, &model, DerivativeScheme::Analytic).ok();
        let (Some(p), Some(up), Some(um)) = (point(a), point(a * (1.0 + 1e-4)), point(a * (1.0 - 1e-4))) else {
            return (f64::INFINITY, f64::INFINITY);
        };
        let ThermoPoint { f_bar, u_bar, s_bar, c_bar, .. } = p;
        id = id.max(rel(f_bar + a * s_bar, u_bar));
        cu = cu.max(rel((up.u_bar - um.u_bar) / (2e-4 * a), c_bar));
    }
    (id, cu)
}

fn wavefunctions() -> (f64, f64, bool) {
    let p = PotentialParams::default();
    let grid: Vec<f64> = (0..=98).map(|i| 0.1 + 0.05 * f64::from(i)).collect();
    let mut residual: f64 = 0.0;
    let mut overlap: f64 = 0.0;
    let mut nodes = true;
    for l in 0..=2u32 {
        let ell = f64::from(l);
        for n in 0..=2u32 {
            let fmax = grid
                .iter()
                .filter_map(|&r| radial_wavefunction(&p, n, ell, r).ok())
                .fold(0.0, |m: f64, v| m.max(v.abs()));
            for &r in &grid {
                let v = radial_ode_residual(&p, n, ell, r, 1e-4).map_or(f64::INFINITY, f64::abs);
                residual = residual.max(v / fmax);
            }
            nodes &= count_radial_nodes(&p, n, ell, 10.0, 20_000).ok() == Some(n as usize);
            for n2 in (n + 1)..=2 {
                let o = (
                    radial_overlap(&p, n, n2, ell),
                    radial_overlap(&p, n, n, ell),
                    radial_overlap(&p, n2, n2, ell),
                );
                overlap = overlap.max(match o {
                    (Ok(o), Ok(a), Ok(b)) => o.abs() / (a * b).sqrt(),
                    _ => f64::INFINITY,
                });
            }
        }
    }
    (residual, overlap, nodes)
}

pub fn run_checks(config: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::new();

    checks.push(judged(
        "radial quantization",
        radial_energies(Branch::Standard),
        1e-10,
        "beta3 = 0 root vs E/xi = 4n+2l+3 on (n,l) in {0..3}^2".into(),
    ));
    checks.push(info(
        "radial quantization, starred rule as written",
        radial_energies(Branch::Starred),
        "same mapping through the starred rule; it yields 4n+5-2l, not the oscillator ladder".into(),
    ));
    checks.push(judged(
        "angular constants",
        angular_constants(),
        1e-10,
        "angular root vs closed-form L, 4 couplings x s,m in {0..3}".into(),
    ));

    let integral = worst([0.5, 1.0, 2.0].iter().map(|&x| {
        match (convergence_integral(x), convergence_integral_quadrature(x)) {
            (Ok(c), Ok(q)) => Some(rel(c, q)),
            _ => None,
        }
    }));
    checks.push(judged(
        "convergence integral",
        integral,
        1e-10,
        "closed form vs quadrature at beta*xi in {0.5, 1, 2}".into(),
    ));

    let em = |a: f64| partition_em_3d_with(a, &config.em3d).map(|v| v.z).ok();
    checks.push(judged(
        "3D Euler-Maclaurin at 1",
        em(1.0).map_or(f64::INFINITY, |z| rel(z, 79.0 / 45.0)),
        1e-14,
        "closed form vs 79/45".into(),
    ));
    for (a, tol) in [(10.0, 1e-3), (50.0, 1e-4)] {
        let direct = partition_direct(&PartitionSpec::new(Mode::ThreeD, a)).map(|v| v.z).ok();
        let err = match (em(a), direct) {
            (Some(x), Some(d)) => rel(x, d),
            _ => f64::INFINITY,
        };
        checks.push(judged(
            &format!("3D Euler-Maclaurin vs direct sum at {a}"),
            err,
            tol,
            "relative difference".into(),
        ));
    }

    let one_d = worst((0..60).map(|i| {
        let a = 10f64.powf(f64::from(i) / 15.0);
        partition_em_1d(a, FormulaVariant::Derived)
            .ok()
            .map(|z| rel(z.z, closed_form(Mode::OneD, a).z))
    }));
    checks.push(judged(
        "1D Euler-Maclaurin vs exact",
        one_d,
        1e-4,
        "derived form on 60 log points in [1, 1e4)".into(),
    ));
    for a in [1.0, 10.0, 50.0] {
        let dev = partition_em_1d(a, FormulaVariant::PaperLiteral)
            .map_or(f64::NAN, |z| rel(z.z, closed_form(Mode::OneD, a).z));
        checks.push(info(
            &format!("1D paper-literal form at {a}"),
            dev,
            "relative deviation of the -a^3/5400 variant from the exact Z; the term does not follow from Euler-Maclaurin".into(),
        ));
    }

    let (id, cu) = thermo_identities();
    checks.push(judged("U = F + a S", id, 1e-9, "40 points on [0.5, 50], direct sum".into()));
    checks.push(judged("C = dU/da", cu, 1e-5, "central difference of U".into()));

    let em_high = Em3d(config.em3d);
    let c_em = noncentral::thermo::thermo_point_with(&em_high, 100.0, DerivativeScheme::Analytic)
        .map_or(f64::INFINITY, |p| rel(p.c_bar, 3.0));
    checks.push(judged(
        "3D Euler-Maclaurin C at 100",
        c_em,
        1e-2,
        "specific heat from the closed form vs the limit 3".into(),
    ));
    let model = |mode| PartitionModel::new(mode, Method::Direct);
    let high = |mode, want: f64| {
        thermo_point(100.0, &model(mode), DerivativeScheme::Analytic)
            .map_or(f64::INFINITY, |p| rel(p.c_bar, want))
    };
    checks.push(judged("3D C at 100", high(Mode::ThreeD, 3.0), 1e-2, "direct sum vs 3".into()));
    checks.push(judged("1D C at 100", high(Mode::OneD, 1.0), 1e-2, "direct sum vs 1".into()));
    let u = thermo_point(100.0, &model(Mode::ThreeD), DerivativeScheme::Analytic)
        .map_or(f64::INFINITY, |p| rel(p.u_bar / 100.0, 3.0));
    checks.push(judged("3D U/a at 100", u, 2e-2, "direct sum vs 3".into()));

    let (residual, overlap, nodes) = wavefunctions();
    checks.push(judged(
        "radial ODE residual",
        residual,
        1e-5,
        "relative to max|f| on [0.1, 5], (n,l) in {0,1,2}^2".into(),
    ));
    checks.push(judged("radial orthogonality", overlap, 1e-8, "overlap / norms".into()));
    checks.push(judged(
        "radial node counts",
        if nodes { 0.0 } else { 1.0 },
        0.5,
        "number of interior zeros equals n".into(),
    ));

    let bad = (0..=50u32)
        .filter(|&n| (0..=n).map(|l| 2 * u64::from(l) + 1).sum::<u64>() != degeneracy(n))
        .count();
    checks.push(judged(
        "degeneracy",
        bad as f64,
        0.5,
        "mismatches of sum(2l+1) vs (1+n')^2 for n' <= 50".into(),
    ));

    VerifyReport { checks }
}

use noncentral::partition::{self, Method, Mode, PartitionSpec};
use noncentral::spectrum::{angular_solution_for, degeneracy_with_rule, energy_over_xi};
use noncentral::thermo::{continuity_scan_points, sweep, MonotonicitySummary};
use noncentral::{Error, FormulaVariant, PotentialParams};

use crate::dataset::{Cell, FigureDataset, FigureId, Table};
use crate::manifest::{MethodChoice, PartitionOptions, SpectrumOptions, SweepOptions};
use crate::CliError;

const SPECTRUM_COLUMNS: [&str; 11] = [
    "n",
    "s",
    "m",
    "lambda",
    "big_l",
    "ell",
    "energy_over_xi",
    "energy",
    "n_prime",
    "degeneracy",
    "note",
];

/// Rows (n, s, m, Λ, L, ℓ, E/ξ, E, n', degeneracy, note).
///
/// With `ell_max` set, ℓ runs over integers and the angular columns stay
/// empty; otherwise ℓ comes from the angular constants for each (s, m).
pub fn spectrum_table(p: &PotentialParams, opts: &SpectrumOptions) -> Result<Table, CliError> {
    p.validate()?;
    let xi = p.xi();
    let mut rows = Vec::new();
    let integer_row = |n: u32, ell: f64, ell_int: Option<u32>| {
        let n_prime = ell_int.map(|l| 2 * n + l);
        let e = energy_over_xi(n, ell);
        (
            e,
            Cell::from(e * xi),
            Cell::from(n_prime),
            Cell::from(n_prime.map(|np| degeneracy_with_rule(np, opts.degeneracy_rule))),
        )
    };
    match opts.ell_max {
        Some(ell_max) => {
            for n in 0..=opts.n_max {
                for l in 0..=ell_max {
                    let (e, energy, np, deg) = integer_row(n, f64::from(l), Some(l));
                    rows.push(vec![
                        Cell::from(n),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::from(l),
                        Cell::from(e),
                        energy,
                        np,
                        deg,
                        Cell::Empty,
                    ]);
                }
            }
        }
        None => {
            // a case/coupling mismatch is a usage error for the whole table
            if let Err(Error::Usage(msg)) = angular_solution_for(p, opts.case, 0, 0) {
                return Err(CliError::Usage(msg));
            }
            for n in 0..=opts.n_max {
                for s in 0..=opts.s_max {
                    for m in 0..=opts.m_max {
                        let head = [Cell::from(n), Cell::from(s), Cell::from(m)];
                        match angular_solution_for(p, opts.case, s, m) {
                            Ok(sol) => {
                                let ell = sol.ell(opts.ell_rule);
                                let ell_int = (ell.fract() == 0.0 && ell >= 0.0).then_some(ell as u32);
                                let (e, energy, np, deg) = integer_row(n, ell, ell_int);
                                rows.push(
                                    head.into_iter()
                                        .chain([
                                            Cell::from(sol.lambda),
                                            Cell::from(sol.big_l),
                                            Cell::from(ell),
                                            Cell::from(e),
                                            energy,
                                            np,
                                            deg,
                                            Cell::Empty,
                                        ])
                                        .collect(),
                                );
                            }
                            Err(Error::Domain(msg)) => {
                                let mut row: Vec<Cell> = head.into_iter().collect();
                                row.extend(std::iter::repeat(Cell::Empty).take(7));
                                row.push(Cell::Text(format!("error: {msg}")));
                                rows.push(row);
                            }
                            Err(e) => return Err(e.into()),
                        }
                    }
                }
            }
        }
    }
    Ok(Table {
        columns: SPECTRUM_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn partition_value(
    opts: &PartitionOptions,
    alpha_bar: f64,
    choice: MethodChoice,
) -> Result<f64, CliError> {
    let mut spec = PartitionSpec::new(opts.mode, alpha_bar).with_em_order(opts.em_order);
    spec.cutoff = opts.cutoff;
    let (method, variant) = match choice {
        MethodChoice::Direct => (Method::Direct, opts.variant),
        MethodChoice::Em => (Method::EulerMaclaurin, opts.variant),
        MethodChoice::EmPaper => (Method::EulerMaclaurin, FormulaVariant::PaperLiteral),
        MethodChoice::Exact => (Method::ClosedFormExact, opts.variant),
    };
    Ok(partition::evaluate(&spec.with_variant(variant), method)?.z)
}

/// One row per ᾱ with Z by each method and, for two or more methods, the
/// pairwise relative differences |Zᵢ − Zⱼ|/|Zⱼ|.
pub fn partition_table(opts: &PartitionOptions) -> Result<Table, CliError> {
    if opts.alphas.is_empty() {
        return Err(CliError::Usage("no alpha values given".into()));
    }
    if opts.methods.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    let paper_requested = opts.methods.contains(&MethodChoice::EmPaper)
        || (opts.methods.contains(&MethodChoice::Em) && opts.variant == FormulaVariant::PaperLiteral);
    if opts.mode == Mode::ThreeD && paper_requested {
        return Err(CliError::Usage(
            "the paper variant exists only for --mode 1d".into(),
        ));
    }
    let names: Vec<&str> = opts.methods.iter().map(|m| m.column(opts.variant)).collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(CliError::Usage(format!("method column {n} requested twice")));
        }
    }
    let mut columns = vec!["alpha_bar".to_string()];
    columns.extend(names.iter().map(|s| s.to_string()));
    let pairs: Vec<(usize, usize)> = (0..names.len())
        .flat_map(|i| ((i + 1)..names.len()).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &pairs {
        columns.push(format!(
            "rel_{}_vs_{}",
            names[i].trim_start_matches("z_"),
            names[j].trim_start_matches("z_")
        ));
    }
    let mut rows = Vec::with_capacity(opts.alphas.len());
    for &a in &opts.alphas {
        let zs = opts
            .methods
            .iter()
            .map(|&m| partition_value(opts, a, m))
            .collect::<Result<Vec<f64>, _>>()?;
        let mut row = vec![Cell::from(a)];
        row.extend(zs.iter().map(|&z| Cell::from(z)));
        row.extend(
            pairs
                .iter()
                .map(|&(i, j)| Cell::from((zs[i] - zs[j]).abs() / zs[j].abs())),
        );
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

/// The dataset and a human-readable summary.
pub fn sweep_dataset(opts: &SweepOptions) -> Result<(FigureDataset, Vec<String>), CliError> {
    let spec = &opts.spec;
    if opts.figure == Some(FigureId::F5OneDPanel) && spec.model.mode != Mode::OneD {
        return Err(CliError::Usage("figure f5 is the 1D panel; use --mode 1d".into()));
    }
    let result = sweep(spec)?;
    let dataset = FigureDataset::from_points(opts.figure, &result.points);
    let mut summary = vec![format!(
        "sweep: {} points, mode {:?}, method {:?}",
        result.points.len(),
        spec.model.mode,
        spec.model.method
    )];
    match result.summary {
        None => summary.push("summary skipped: fewer than two grid points".into()),
        Some(MonotonicitySummary {
            f_decreasing,
            u_increasing,
            s_increasing,
            c_nondecreasing,
            c_max,
        }) => {
            let scan = continuity_scan_points(&result.points, opts.jump_threshold);
            let last = result.points.last().expect("non-empty sweep");
            summary.push(format!("F decreasing: {f_decreasing}"));
            summary.push(format!("U increasing: {u_increasing}"));
            summary.push(format!("S increasing: {s_increasing}"));
            summary.push(format!("C non-decreasing: {c_nondecreasing}"));
            summary.push(format!("C max: {}", format_short(c_max)));
            summary.push(format!(
                "C at alpha_bar = {}: {}",
                format_short(last.alpha_bar),
                format_short(last.c_bar)
            ));
            summary.push(if scan.is_continuous() {
                format!(
                    "continuity: no jump in C above {} x neighbouring slope (max ratio {:.3})",
                    scan.threshold, scan.max_slope_ratio
                )
            } else {
                format!(
                    "continuity: {} interval(s) flagged, first at alpha_bar = {}",
                    scan.flagged.len(),
                    format_short(result.points[scan.flagged[0]].alpha_bar)
                )
            });
        }
    }
    Ok((dataset, summary))
}

fn format_short(x: f64) -> String {
    format!("{x:.10}")
}

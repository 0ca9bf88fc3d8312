//! MPS export/import.
//!
//! Output uses the fixed section layout (`NAME`, `ROWS`, `COLUMNS`, `RHS`,
//! `BOUNDS`, `ENDATA`) with integer columns wrapped in `MARKER` lines.
//! Names exceed eight characters, so fields are whitespace separated as in
//! "free" MPS. The objective constant is written as the negated RHS of the
//! objective row, which is how most solvers read it.

use std::fmt::Write as _;

use super::{Milp, MilpError, RowOrigin};
use crate::lp::LinearProgram;
use crate::scalar::Scalar;

fn row_tag(origin: RowOrigin) -> &'static str {
    match origin {
        RowOrigin::ZoneAssignment => "ASG",
        RowOrigin::ClusterNonEmpty => "NEM",
        RowOrigin::EdgeAtMostOnce => "ONE",
        RowOrigin::EdgeNeedsFirst => "NDA",
        RowOrigin::EdgeNeedsSecond => "NDB",
        RowOrigin::EdgeConnectivity => "CON",
        RowOrigin::EdgeCovered => "COV",
        RowOrigin::ClusterSize => "SIZ",
        RowOrigin::RelativeSize => "REL",
        RowOrigin::SymmetryBreaking => "SYM",
        RowOrigin::RobustEpigraph => "EPI",
    }
}

fn num<S: Scalar>(v: &S) -> String {
    format!("{}", v.to_f64_lossy())
}

pub fn write_mps<S: Scalar>(problem: &Milp<S>, name: &str) -> String {
    let lp = problem.lp();
    let names = problem.variable_names();
    let rows: Vec<String> = problem.row_origins().iter().enumerate().map(|(i, o)| format!("{}{}", row_tag(*o), i + 1)).collect();

    // column-major view of the rows
    let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); lp.num_vars()];
    for (i, row) in lp.rows().iter().enumerate() {
        for (j, a) in row {
            columns[*j].push((i, a.clone()));
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "NAME          {name}");
    let _ = writeln!(out, "ROWS");
    let _ = writeln!(out, " N  COST");
    for r in &rows {
        let _ = writeln!(out, " L  {r}");
    }
    let _ = writeln!(out, "COLUMNS");
    let mut in_int = false;
    let mut marker = 0;
    for (j, col) in columns.iter().enumerate() {
        let int = problem.integer_mask()[j];
        if int != in_int {
            let kind = if int { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    MARKER{marker:<6}  'MARKER'                 {kind}");
            marker += 1;
            in_int = int;
        }
        let cost = &lp.objective()[j];
        if !cost.is_zero() {
            let _ = writeln!(out, "    {:<12}  {:<10}  {}", names[j], "COST", num(cost));
        }
        for (i, a) in col {
            let _ = writeln!(out, "    {:<12}  {:<10}  {}", names[j], rows[*i], num(a));
        }
        if cost.is_zero() && col.is_empty() {
            let _ = writeln!(out, "    {:<12}  {:<10}  0", names[j], "COST");
        }
    }
    if in_int {
        let _ = writeln!(out, "    MARKER{marker:<6}  'MARKER'                 'INTEND'");
    }
    let _ = writeln!(out, "RHS");
    let constant = problem.objective_constant();
    if !constant.is_zero() {
        let _ = writeln!(out, "    RHS           {:<10}  {}", "COST", num(&-constant.clone()));
    }
    for (i, b) in lp.rhs().iter().enumerate() {
        if !b.is_zero() {
            let _ = writeln!(out, "    RHS           {:<10}  {}", rows[i], num(b));
        }
    }
    let _ = writeln!(out, "BOUNDS");
    for j in 0..lp.num_vars() {
        let lo = &lp.lower()[j];
        let up = lp.upper()[j].as_ref();
        let is_binary = problem.integer_mask()[j] && lo.is_zero() && up.map(|u| u.is_one()).unwrap_or(false);
        if is_binary {
            let _ = writeln!(out, " BV BND       {}", names[j]);
            continue;
        }
        match up {
            Some(u) if u == lo => {
                let _ = writeln!(out, " FX BND       {:<12}  {}", names[j], num(u));
            }
            Some(u) => {
                if !lo.is_zero() {
                    let _ = writeln!(out, " LO BND       {:<12}  {}", names[j], num(lo));
                }
                let _ = writeln!(out, " UP BND       {:<12}  {}", names[j], num(u));
            }
            None => {
                if !lo.is_zero() {
                    let _ = writeln!(out, " LO BND       {:<12}  {}", names[j], num(lo));
                }
            }
        }
    }
    let _ = writeln!(out, "ENDATA");
    out
}

/// Model read back from MPS text: `L`/`G`/`E` rows are normalized to `≤`
/// rows (an `E` row becomes two).
#[derive(Debug, Clone, PartialEq)]
pub struct MpsModel {
    pub name: String,
    pub lp: LinearProgram<f64>,
    pub integer: Vec<bool>,
    pub column_names: Vec<String>,
    pub row_names: Vec<String>,
    pub objective_constant: f64,
}

pub fn read_mps(text: &str) -> Result<MpsModel, MilpError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Rows,
        Columns,
        Rhs,
        Bounds,
        Ranges,
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Sense {
        Le,
        Ge,
        Eq,
    }
    let mut name = String::new();
    let mut section = Section::None;
    let mut objective_row = None::<String>;
    let mut row_names: Vec<String> = Vec::new();
    let mut senses: Vec<Sense> = Vec::new();
    let mut col_names: Vec<String> = Vec::new();
    let mut entries: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut costs: Vec<f64> = Vec::new();
    let mut integer: Vec<bool> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut lower: Vec<f64> = Vec::new();
    let mut upper: Vec<Option<f64>> = Vec::new();
    let mut constant = 0.0;
    let mut in_int = false;

    let find_row = |rows: &[String], n: &str| rows.iter().position(|r| r == n);

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| MilpError::Mps { line: line_no, msg };
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match fields[0] {
                "NAME" => {
                    name = fields.get(1).unwrap_or(&"").to_string();
                    Section::None
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "RANGES" => Section::Ranges,
                "ENDATA" => break,
                other => return Err(err(format!("unknown section `{other}`"))),
            };
            continue;
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number `{s}`")));
        match section {
            Section::Rows => {
                if fields.len() < 2 {
                    return Err(err("row line needs sense and name".into()));
                }
                match fields[0] {
                    "N" => {
                        if objective_row.is_none() {
                            objective_row = Some(fields[1].to_string());
                        }
                    }
                    s @ ("L" | "G" | "E") => {
                        row_names.push(fields[1].to_string());
                        senses.push(match s {
                            "L" => Sense::Le,
                            "G" => Sense::Ge,
                            _ => Sense::Eq,
                        });
                        rhs.push(0.0);
                    }
                    other => return Err(err(format!("unknown row sense `{other}`"))),
                }
            }
            Section::Columns => {
                if fields.len() >= 3 && fields[1] == "'MARKER'" {
                    in_int = fields[2] == "'INTORG'";
                    continue;
                }
                if fields.len() < 3 || fields.len() % 2 == 0 {
                    return Err(err("column line needs name and row/value pairs".into()));
                }
                let col = match col_names.iter().rposition(|c| c == fields[0]) {
                    Some(j) => j,
                    None => {
                        col_names.push(fields[0].to_string());
                        entries.push(Vec::new());
                        costs.push(0.0);
                        integer.push(in_int);
                        lower.push(0.0);
                        upper.push(if in_int { None } else { None });
                        col_names.len() - 1
                    }
                };
                for pair in fields[1..].chunks(2) {
                    let v = parse(pair[1])?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        costs[col] += v;
                    } else {
                        let i = find_row(&row_names, pair[0]).ok_or_else(|| err(format!("unknown row `{}`", pair[0])))?;
                        entries[col].push((i, v));
                    }
                }
            }
            Section::Rhs => {
                let pairs = if fields.len() % 2 == 1 { &fields[1..] } else { &fields[..] };
                for pair in pairs.chunks(2) {
                    let v = parse(pair[1])?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        constant = -v;
                    } else {
                        let i = find_row(&row_names, pair[0]).ok_or_else(|| err(format!("unknown row `{}`", pair[0])))?;
                        rhs[i] = v;
                    }
                }
            }
            Section::Bounds => {
                if fields.len() < 3 {
                    return Err(err("bound line too short".into()));
                }
                let kind = fields[0];
                let j = col_names.iter().position(|c| c == fields[2]).ok_or_else(|| err(format!("unknown column `{}`", fields[2])))?;
                let value = fields.get(3).map(|s| parse(s)).transpose()?;
                match (kind, value) {
                    ("BV", _) => {
                        lower[j] = 0.0;
                        upper[j] = Some(1.0);
                        integer[j] = true;
                    }
                    ("UP", Some(v)) => upper[j] = Some(v),
                    ("LO", Some(v)) => lower[j] = v,
                    ("FX", Some(v)) => {
                        lower[j] = v;
                        upper[j] = Some(v);
                    }
                    ("PL", _) => upper[j] = None,
                    _ => return Err(err(format!("unsupported bound `{kind}`"))),
                }
            }
            Section::Ranges => return Err(err("RANGES are not supported".into())),
            Section::None => return Err(err("data before first section".into())),
        }
    }

    let mut lp = LinearProgram::new(col_names.len());
    for j in 0..col_names.len() {
        lp.set_bounds(j, lower[j], upper[j]);
        lp.set_cost(j, costs[j]);
    }
    let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); row_names.len()];
    for (j, col) in entries.iter().enumerate() {
        for &(i, v) in col {
            by_row[i].push((j, v));
        }
    }
    let mut out_rows = Vec::new();
    for (i, row) in by_row.into_iter().enumerate() {
        match senses[i] {
            Sense::Le => {
                lp.add_row(row, rhs[i]);
                out_rows.push(row_names[i].clone());
            }
            Sense::Ge => {
                lp.add_row(row.into_iter().map(|(j, v)| (j, -v)), -rhs[i]);
                out_rows.push(row_names[i].clone());
            }
            Sense::Eq => {
                lp.add_row(row.clone(), rhs[i]);
                lp.add_row(row.into_iter().map(|(j, v)| (j, -v)), -rhs[i]);
                out_rows.push(format!("{}+", row_names[i]));
                out_rows.push(format!("{}-", row_names[i]));
            }
        }
    }
    Ok(MpsModel { name, lp, integer, column_names: col_names, row_names: out_rows, objective_constant: constant })
}

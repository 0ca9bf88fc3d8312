use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::Serialize;
use zonepart::interaction::{build_graph, generate_excitation, ComfortSchedule, InteractionGraph};
use zonepart::milp::{
    build_base, extract_partition, robust_counterpart, solve, stochastic_objective, BranchAndBound, BranchAndBoundOptions, BuildOptions, Milp,
    MilpStatus,
};
use zonepart::mpc::{
    evaluate_architectures, periodic_start, rank_partitions, replay_metrics as replay, Architecture, EvaluationPlan, EvaluationReport, MetricWeights,
    MpcConfig, ReplayRow,
};
use zonepart::partition::{cut_cost, enumerate_connected_partitions, Partition, Topology};
use zonepart::thermal::{build_model, bundled_weather, five_zone_building, steps_per_day, BuildingDescription, DisturbanceSeries};

use crate::error::CliError;
use crate::{BuildingArgs, EvaluateArgs, MetricArgs, Mode, ModelArgs, PartitionArgs, QuantifyArgs, ReplayArgs, ReportArgs, WeatherArgs};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn load_building(args: &BuildingArgs) -> Result<BuildingDescription, CliError> {
    match &args.building {
        None => Ok(five_zone_building()),
        Some(p) => {
            let b = BuildingDescription::from_toml(&read(p)?).map_err(|e| CliError::from(e).in_file(p))?;
            b.validate().map_err(|e| CliError::from(e).in_file(p))?;
            Ok(b)
        }
    }
}

fn load_weather(b: &BuildingDescription, args: &WeatherArgs) -> Result<DisturbanceSeries, CliError> {
    match &args.weather {
        None => Ok(bundled_weather(b)),
        Some(p) => {
            let f = fs::File::open(p).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?;
            DisturbanceSeries::read_csv(f).map_err(|e| CliError::from(e).in_file(p))
        }
    }
}

fn load_schedule(args: &WeatherArgs) -> Result<ComfortSchedule, CliError> {
    match &args.schedule {
        None => Ok(ComfortSchedule::office()),
        Some(p) => ComfortSchedule::from_toml(&read(p)?).map_err(|e| CliError::from(e).in_file(p)),
    }
}

fn parse_weights(m: &MetricArgs) -> Result<MetricWeights, CliError> {
    let v: Vec<f64> = m
        .weights
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::config(format!("--weights `{}`: expected three numbers", m.weights)))?;
    if v.len() != 3 {
        return Err(CliError::config(format!("--weights `{}`: expected three numbers", m.weights)));
    }
    Ok(MetricWeights::new(v[0], v[1], v[2], m.alpha)?)
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[derive(Serialize)]
struct ModelSummary {
    name: String,
    dt: f64,
    zones: Vec<u32>,
    states: Vec<String>,
    channels: Vec<String>,
    input_bounds: Vec<(f64, f64)>,
    spectral_radius: f64,
    a: Vec<Vec<f64>>,
    b_u: Vec<Vec<f64>>,
    b_w: Vec<Vec<f64>>,
}

pub fn model(args: &ModelArgs) -> Result<(), CliError> {
    let b = load_building(&args.building)?;
    let m = build_model(&b)?;
    let summary = ModelSummary {
        name: b.name.clone(),
        dt: m.dt,
        zones: m.zone_ids.clone(),
        states: m.labels.iter().map(|l| l.to_string()).collect(),
        channels: m.channels.iter().map(|c| c.column()).collect(),
        input_bounds: m.input_bounds.clone(),
        spectral_radius: m.spectral_radius(),
        a: rows(&m.a),
        b_u: rows(&m.b_u),
        b_w: rows(&m.b_w),
    };
    let path = write(&args.out, "model.json", &serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    println!(
        "{}: {} zones, {} states, {} disturbance channels, spectral radius {:.6}",
        summary.name,
        summary.zones.len(),
        summary.states.len(),
        summary.channels.len(),
        summary.spectral_radius
    );
    println!("wrote {}", path.display());
    Ok(())
}

pub fn quantify(args: &QuantifyArgs) -> Result<(), CliError> {
    if args.nd == 0 {
        return Err(CliError::config("--nd must be at least 1"));
    }
    let b = load_building(&args.building)?;
    let w = load_weather(&b, &args.weather)?;
    let schedule = load_schedule(&args.weather)?;
    let m = build_model(&b)?;
    w.inputs(&m, None).map_err(|e| match &args.weather.weather {
        Some(p) => CliError::from(e).in_file(p),
        None => CliError::from(e),
    })?;
    let excitation = generate_excitation(&m, &w, &schedule, args.seed)?;
    let graph = build_graph(&b, &excitation, args.nd)?;
    let text = format!("# root seed {}\n# bins per edge {}\n{}", args.seed, args.nd, graph.to_toml());
    let path = write(&args.out, "graph.toml", &text)?;
    for e in &graph.edges {
        println!("{}-{}: [{:.6}, {:.6}] expectation {:.6}", e.a, e.b, e.interval.lower(), e.interval.upper(), e.distribution.expectation());
    }
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct PartitionSummary {
    n: usize,
    file: String,
    raw: String,
    normalized: String,
    objective: f64,
    normalized_objective: f64,
    nodes: usize,
    lp_iterations: usize,
}

fn clusters_of(p: &Partition, ids: &[u32]) -> Vec<Vec<u32>> {
    p.clusters().iter().map(|c| c.iter().map(|&v| ids[v]).collect()).collect()
}

pub fn partition(args: &PartitionArgs) -> Result<(), CliError> {
    let graph = InteractionGraph::from_toml(&read(&args.graph)?).map_err(|e| CliError::from(e).in_file(&args.graph))?;
    let topo = graph.topology().map_err(|e| CliError::from(e).in_file(&args.graph))?;
    let zones = graph.zones.len();
    let ns: Vec<usize> = match args.n {
        Some(n) if n == 0 || n > zones => return Err(CliError::config(format!("--n {n} outside 1..={zones}"))),
        Some(n) => vec![n],
        None => (1..=zones).collect(),
    };
    let intervals = graph.intervals();
    let distributions = graph.distributions();
    let weights: Vec<f64> = match args.mode {
        Mode::Stochastic => distributions.iter().map(|d| d.expectation()).collect(),
        Mode::Robust => intervals.iter().map(|iv| iv.upper()).collect(),
    };
    let backend = BranchAndBound::new(BranchAndBoundOptions { node_limit: args.node_limit, ..BranchAndBoundOptions::default() });
    let mode = match args.mode {
        Mode::Stochastic => "stochastic",
        Mode::Robust => "robust",
    };
    let mut summaries = Vec::new();
    for n in ns {
        let options = BuildOptions { symmetry_breaking: !args.no_symmetry_breaking, ..BuildOptions::default() };
        let base: Milp<f64> = build_base(&topo, n, options)?;
        let problem = match args.mode {
            Mode::Stochastic => stochastic_objective(base, &distributions)?,
            Mode::Robust => robust_counterpart(base, &intervals)?.problem,
        };
        let sol = solve(&problem, &backend)?;
        match sol.status {
            MilpStatus::Optimal => {}
            MilpStatus::Infeasible => return Err(CliError::infeasible(format!("n = {n}: clustering problem is infeasible"))),
            MilpStatus::NodeLimit => {
                return Err(CliError::solver_limit(format!("n = {n}: node limit {} reached before optimality", args.node_limit)))
            }
        }
        let ex = extract_partition(&sol, &problem, &topo)?;
        let objective = sol.objective.expect("optimal solution has an objective");
        let normalized_objective = cut_cost(&topo, &ex.normalized, &weights)?;
        let raw = ex.raw.display_with(&graph.zones).to_string();
        let normalized = ex.normalized.display_with(&graph.zones).to_string();
        let mut text = format!("# mode {mode}\n# symmetry breaking {}\n", if options.symmetry_breaking { "on" } else { "off" });
        if let Some(seed) = graph.seed {
            text.push_str(&format!("# root seed {seed}\n"));
        }
        text.push_str(&format!(
            "# clusters requested {n}\n# objective {objective}\n# normalized objective {normalized_objective}\n# raw {raw}\n# normalized {normalized}\n# nodes {} lp iterations {}\n",
            sol.nodes, sol.lp_iterations
        ));
        text.push_str(&ex.normalized.to_text(&graph.zones));
        let file = format!("partition-n{n}.txt");
        write(&args.out, &file, &text)?;
        println!("n = {n}: {normalized} objective {objective:.6} ({} nodes)", sol.nodes);
        summaries.push(PartitionSummary {
            n,
            file,
            raw,
            normalized,
            objective,
            normalized_objective,
            nodes: sol.nodes,
            lp_iterations: sol.lp_iterations,
        });
    }
    write(&args.out, "partitions.json", &serde_json::to_string_pretty(&summaries).expect("summary serializes"))?;
    Ok(())
}

fn building_topology(b: &BuildingDescription) -> Result<Topology, CliError> {
    let mut edges = Vec::new();
    for (p, q) in b.adjacent_pairs() {
        edges.push((b.zone_index(p)?, b.zone_index(q)?));
    }
    Ok(Topology::new(b.zone_ids().len(), &edges)?)
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let b = load_building(&args.building)?;
    let ids = b.zone_ids();
    let weights = parse_weights(&args.metrics)?;
    let schedule = load_schedule(&args.weather)?;
    if let Some(z) = args.uncontrolled {
        b.zone(z)?;
    }
    let mut archs: Vec<Architecture> = Vec::new();
    for p in &args.partitions {
        let part = Partition::parse_text(&read(p)?, &ids).map_err(|e| CliError::from(e).in_file(p))?;
        archs.push(Architecture::new(clusters_of(&part, &ids)));
    }
    if args.n.is_some() || args.all_n {
        let topo = building_topology(&b)?;
        let ns: Vec<usize> = match args.n {
            Some(n) if n == 0 || n > ids.len() => return Err(CliError::config(format!("--n {n} outside 1..={}", ids.len()))),
            Some(n) => vec![n],
            None => (1..=ids.len()).collect(),
        };
        for n in ns {
            for p in enumerate_connected_partitions(&topo, n)? {
                archs.push(Architecture::new(clusters_of(&p, &ids)));
            }
        }
    }
    if archs.is_empty() {
        return Err(CliError::config("nothing to evaluate: give partition files, --n or --all-n"));
    }
    let whole = Architecture::new(vec![ids.clone()]);
    archs.retain(|a| *a != whole);
    archs.insert(0, whole);
    let mut seen = Vec::new();
    archs.retain(|a| {
        let fresh = !seen.contains(&a.label);
        seen.push(a.label.clone());
        fresh
    });

    let w = load_weather(&b, &args.weather)?;
    let days = w.len() / steps_per_day();
    if args.day >= days {
        return Err(CliError::config(format!("--day {} but the weather series has {days} whole days", args.day)));
    }
    let day = w.day(args.day)?;
    let plant = build_model(&b)?;
    day.inputs(&plant, None).map_err(|e| match &args.weather.weather {
        Some(p) => CliError::from(e).in_file(p),
        None => CliError::from(e),
    })?;
    let cfg = MpcConfig { schedule, ..MpcConfig::default() };
    let x0 = periodic_start(&plant, &day, &cfg, 6)?;
    let plan = EvaluationPlan::standard(&ids, args.uncontrolled);
    let threads = if args.single_thread { 1 } else { std::thread::available_parallelism().map_or(1, |n| n.get()) };
    let mut report = evaluate_architectures(&b, &day, &x0, &archs, &cfg, &plan, &weights, threads)?;
    report.seed = args.seed;
    write(&args.out, "evaluation.json", &report.to_json())?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    write(&args.out, "evaluation.csv", &String::from_utf8(csv).expect("csv is utf-8"))?;
    print!("{}", report.to_table());
    print_calibration(&report);
    Ok(())
}

fn print_calibration(report: &EvaluationReport) {
    let bad = report.calibration_violations();
    if bad.is_empty() {
        println!("calibration: centralized no-fault PI is the largest");
    } else {
        let labels: Vec<&str> = bad.iter().map(|&i| report.rows[i].label.as_str()).collect();
        println!("calibration: PI reaches the centralized no-fault value for {}", labels.join(" "));
    }
}

pub fn replay_metrics(args: &ReplayArgs) -> Result<(), CliError> {
    let weights = parse_weights(&args.metrics)?;
    let f = fs::File::open(&args.input).map_err(|e| CliError::config(format!("{}: {e}", args.input.display())))?;
    let rows = ReplayRow::read_csv(f).map_err(|e| CliError::from(e).in_file(&args.input))?;
    let metrics = replay(&rows, &weights)?;
    let ranking = rank_partitions(&rows.iter().zip(&metrics).map(|(r, m)| (r.n, m.wpm)).collect::<Vec<_>>());
    let mut out = String::from("label,n,pi,pi_fault,odm,fpm,wpm,rank\n");
    let mut rank = vec![0; rows.len()];
    for (k, &i) in ranking.iter().enumerate() {
        rank[i] = k + 1;
    }
    println!("{:<28} {:>2} {:>9} {:>9} {:>9} {:>9} {:>9} {:>4}", "label", "n", "PI", "PI fault", "ODM", "FPM", "WPM", "rank");
    for ((r, m), k) in rows.iter().zip(&metrics).zip(&rank) {
        let label = if r.label.contains(',') { format!("\"{}\"", r.label) } else { r.label.clone() };
        out.push_str(&format!("{label},{},{:.6},{:.6},{:.4},{:.4},{:.4},{k}\n", r.n, m.pi_nominal, m.pi_fault, m.odm, m.fpm, m.wpm));
        println!("{:<28} {:>2} {:>9.5} {:>9.5} {:>9.4} {:>9.4} {:>9.4} {:>4}", r.label, r.n, m.pi_nominal, m.pi_fault, m.odm, m.fpm, m.wpm, k);
    }
    if let Some(dir) = &args.out {
        let path = write(dir, "metrics.csv", &out)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn report(args: &ReportArgs) -> Result<(), CliError> {
    let report = EvaluationReport::from_json(&read(&args.input)?).map_err(|e| CliError::from(e).in_file(&args.input))?;
    if let Some(seed) = report.seed {
        println!("root seed {seed}");
    }
    print!("{}", report.to_table());
    print_calibration(&report);
    if let Some(dir) = &args.out {
        let mut csv = Vec::new();
        report.write_csv(&mut csv)?;
        let path = write(dir, "evaluation.csv", &String::from_utf8(csv).expect("csv is utf-8"))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

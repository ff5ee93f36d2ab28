//! The `network`, `run` and `distribution` verbs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use tomwalk::passage::{classical_art_formula, classical_mfpt_matrix};
use tomwalk::{
    ApollonianNetwork, Aggregate, PassageConfig, PassageEngine, PassageValue, VectorState, WalkKind, WalkSpec,
};

use crate::error::CliError;
use crate::output::{format_number, write_atomic, Cell, Table, TableFormat};
use crate::registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Csv,
    Dot,
}

/// Settings shared by `run` and `distribution`.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: WalkKind,
    pub generation: Option<usize>,
    pub view: String,
    pub initial: String,
    pub passage: PassageConfig,
    pub format: TableFormat,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(kind: WalkKind) -> Self {
        Self {
            kind,
            generation: None,
            view: "identity".into(),
            initial: "default".into(),
            passage: PassageConfig::default(),
            format: TableFormat::Csv,
            jobs: None,
        }
    }

    pub fn resolved_generation(&self) -> Result<usize, CliError> {
        match (self.kind.fixed_generation(), self.generation) {
            (Some(fixed), Some(g)) if g != fixed => Err(CliError::config(format!(
                "experiment '{}' is defined on generation {fixed} only, got {g}",
                self.kind
            ))),
            (Some(fixed), _) => Ok(fixed),
            (None, Some(g)) => Ok(g),
            (None, None) => Ok(self.kind.default_generation()),
        }
    }

    fn build(&self) -> Result<WalkSpec, CliError> {
        let g = self.resolved_generation()?;
        Ok(self.kind.build(g)?)
    }

    fn describe(&self, table: &mut Table, spec: &WalkSpec) {
        table
            .meta("experiment", self.kind)
            .meta("generation", spec.network().generation())
            .meta("vertices", spec.n_vertices())
            .meta("internal_dim", spec.internal_dim())
            .meta("view", &self.view)
            .meta("initial", &self.initial);
    }

    fn describe_passage(&self, table: &mut Table, n: usize) {
        table
            .meta("threshold", format_number(self.passage.residual_threshold))
            .meta("t_max", self.passage.t_max)
            .meta("stall_window", self.passage.window_for(n))
            .meta("stall_increment", format_number(self.passage.stall_increment));
    }
}

fn with_pool<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    if jobs == Some(0) {
        return Err(CliError::config("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

fn cell(value: PassageValue) -> Cell {
    match value {
        PassageValue::Finite(v) => Cell::Num(v),
        PassageValue::Infinite => Cell::Inf,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn network_text(g: usize, format: GraphFormat) -> Result<String, CliError> {
    let net = ApollonianNetwork::generate(g)?;
    Ok(match format {
        GraphFormat::Csv => {
            let mut t = Table::new(&["u", "v"]);
            t.meta("generation", g)
                .meta("vertices", net.n_vertices())
                .meta("edges", net.n_edges());
            for (u, v) in net.edges() {
                t.push(vec![Cell::Int(u as u64), Cell::Int(v as u64)]);
            }
            t.to_csv()
        }
        GraphFormat::Dot => dot(&net),
    })
}

fn dot(net: &ApollonianNetwork) -> String {
    let classes = net.class_partition();
    let mut s = format!("graph apollonian_g{} {{\n", net.generation());
    for v in 0..net.n_vertices() {
        let gen = net.vertex_generation(v);
        let shape = match gen {
            0 => "box",
            1 => "hexagon",
            2 => "circle",
            3 => "pentagon",
            _ => "ellipse",
        };
        let _ = writeln!(
            s,
            "  {v} [shape={shape}, label=\"{v}\\nc{}\", generation={gen}, degree={}];",
            classes.class_of(v),
            net.degree(v)
        );
    }
    for (u, v) in net.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

pub fn network(g: usize, format: GraphFormat, out: Option<&Path>) -> Result<(), CliError> {
    emit(&network_text(g, format)?, out)
}

/// The per-pair and per-degree tables of one experiment.
#[derive(Debug, Clone)]
pub struct RunTables {
    pub qmfpt: Table,
    pub degree: Table,
}

pub fn run_tables(cfg: &ExperimentConfig) -> Result<RunTables, CliError> {
    cfg.passage.validate()?;
    let spec = cfg.build()?;
    let dim = spec.internal_dim();
    let view = registry::view(&cfg.view, dim)?;
    let rho0 = registry::initial(&cfg.initial, &spec)?;
    let net = spec.network();
    let n = net.n_vertices();

    let (matrix, classical) = with_pool(cfg.jobs, || {
        let m = PassageEngine::new(spec.tom()).qmfpt_matrix(&rho0, &view, &cfg.passage)?;
        Ok((m, classical_mfpt_matrix(net)?))
    })?;

    let mut qmfpt = Table::new(&["source", "target", "qmfpt", "cumulative", "steps", "classical"]);
    cfg.describe(&mut qmfpt, &spec);
    cfg.describe_passage(&mut qmfpt, n);
    let mut max_steps = 0;
    let mut unconverged = 0;
    for j in 0..n {
        for i in 0..n {
            let r = matrix.get(i, j);
            max_steps = max_steps.max(r.steps_executed);
            unconverged += usize::from(!r.converged);
            qmfpt.push(vec![
                Cell::Int(i as u64),
                Cell::Int(j as u64),
                cell(r.value),
                Cell::Num(r.cumulative_detection),
                Cell::Int(r.steps_executed as u64),
                Cell::Num(classical[i][j]),
            ]);
        }
    }
    qmfpt.meta("max_steps", max_steps).meta("hit_t_max", unconverged);

    let mut degree = Table::new(&[
        "degree",
        "vertices",
        "qmfpt",
        "qmfpt_cumulative",
        "qart",
        "qart_cumulative",
        "classical_qmfpt",
        "classical_qart",
    ]);
    cfg.describe(&mut degree, &spec);
    cfg.describe_passage(&mut degree, n);
    for (&d, &count) in &net.degree_histogram() {
        let vs = net.vertices_with_degree(d);
        let q = matrix.degree_qmfpt(&vs);
        let a = matrix.degree_qart(&vs);
        let classical_q = Aggregate::mean(vs.iter().map(|&j| {
            let mean = (0..n).filter(|&i| i != j).map(|i| classical[i][j]).sum::<f64>() / (n - 1) as f64;
            (PassageValue::Finite(mean), 1.0)
        }));
        let classical_a = vs.iter().map(|&j| classical_art_formula(net, j)).sum::<f64>() / vs.len() as f64;
        degree.push(vec![
            Cell::Int(d as u64),
            Cell::Int(count as u64),
            cell(q.value),
            Cell::Num(q.min_cumulative),
            cell(a.value),
            Cell::Num(a.min_cumulative),
            cell(classical_q.value),
            Cell::Num(classical_a),
        ]);
    }
    degree.meta("max_steps", max_steps).meta("hit_t_max", unconverged);
    Ok(RunTables { qmfpt, degree })
}

/// Writes `qmfpt.<ext>` and `degree.<ext>` into `out_dir`, creating it when
/// needed, and returns the two paths.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<[PathBuf; 2], CliError> {
    let tables = run_tables(cfg)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let ext = cfg.format.extension();
    let q_path = out_dir.join(format!("qmfpt.{ext}"));
    let d_path = out_dir.join(format!("degree.{ext}"));
    write_atomic(&q_path, &tables.qmfpt.render(cfg.format))?;
    write_atomic(&d_path, &tables.degree.render(cfg.format))?;
    Ok([q_path, d_path])
}

/// Detection probability per step and vertex for an unmonitored walk started
/// at `source`, in long format.
pub fn distribution_table(cfg: &ExperimentConfig, source: usize, t_steps: usize) -> Result<Table, CliError> {
    let spec = cfg.build()?;
    let n = spec.n_vertices();
    if source >= n {
        return Err(CliError::config(format!(
            "source {source} is not a vertex of the {n}-vertex network"
        )));
    }
    let view = registry::view(&cfg.view, spec.internal_dim())?;
    let rho0 = registry::initial(&cfg.initial, &spec)?;
    let alpha0 = VectorState::localized(n, source, &rho0).map_err(|e| CliError::config(e.to_string()))?;
    let rows = PassageEngine::new(spec.tom()).step_distribution(&alpha0, &view, t_steps)?;

    let mut t = Table::new(&["t", "vertex", "probability"]);
    cfg.describe(&mut t, &spec);
    t.meta("source", source).meta("t_steps", t_steps);
    for (step, row) in rows.iter().enumerate() {
        for (v, &p) in row.iter().enumerate() {
            t.push(vec![Cell::Int(step as u64), Cell::Int(v as u64), Cell::Num(p)]);
        }
    }
    Ok(t)
}

pub fn distribution(cfg: &ExperimentConfig, source: usize, t_steps: usize, out: Option<&Path>) -> Result<(), CliError> {
    let table = distribution_table(cfg, source, t_steps)?;
    emit(&table.render(cfg.format), out)
}

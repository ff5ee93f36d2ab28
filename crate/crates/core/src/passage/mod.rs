//! First-passage statistics of monitored walks.
//!
//! Starting from `ρ₀` at vertex `i`, the first step is taken unmonitored,
//! `α¹ = E(α⁰)`. Every later step first strips the detected part at the
//! target, `αᵗ = E(P_j(αᵗ⁻¹))` with `P_j(X) = Π⊥ X Π⊥` at `j` and the
//! identity elsewhere. The detection probability at step `t` is
//! `p_t = Tr(Π α_jᵗ)` and the passage time is `Q_ij = Σ_t t·p_t`.
//!
//! For a fixed target the sources can be handled together in the
//! Heisenberg picture: with `O` the observable `Π` at `j`,
//! `p_t(i) = Tr(Y_iᵗ ρ₀)` where `Y¹ = E†(O)` and `Yᵗ = E†(P_j(Yᵗ⁻¹))`.

mod classical;

pub use classical::{classical_art_formula, classical_mfpt_column, classical_mfpt_exact, classical_mfpt_matrix};

use rayon::prelude::*;

use crate::error::{PassageError, TomError};
use crate::quantum::{trace_product_re, SubNormalizedState, ViewOperator, C64, ZERO};
use crate::tom::{project_block, CompiledTom, TransitionOperationMatrix, VectorState};
use crate::walks::WalkSpec;

/// Truncation and infinity-detection settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassageConfig {
    /// Stop with a finite value once `1 − Σ p_t` drops below this.
    pub residual_threshold: f64,
    pub t_max: usize,
    /// Consecutive negligible increments that count as a stall; `None`
    /// means ten times the vertex count.
    pub stall_window: Option<usize>,
    pub stall_increment: f64,
}

impl Default for PassageConfig {
    fn default() -> Self {
        Self {
            residual_threshold: 1e-6,
            t_max: 1_000_000,
            stall_window: None,
            stall_increment: 1e-15,
        }
    }
}

impl PassageConfig {
    pub fn with_threshold(mut self, residual_threshold: f64) -> Self {
        self.residual_threshold = residual_threshold;
        self
    }

    pub fn validate(&self) -> Result<(), PassageError> {
        if !(self.residual_threshold > 0.0 && self.residual_threshold < 1.0) {
            return Err(PassageError::Threshold(self.residual_threshold));
        }
        if self.t_max == 0 {
            return Err(PassageError::ZeroSteps);
        }
        Ok(())
    }

    pub fn window_for(&self, n_vertices: usize) -> usize {
        self.stall_window.unwrap_or(10 * n_vertices).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PassageValue {
    /// Expected number of steps.
    Finite(f64),
    Infinite,
}

impl PassageValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PassageValue::Finite(v) => Some(v),
            PassageValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PassageValue::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassageResult {
    pub value: PassageValue,
    pub cumulative_detection: f64,
    pub steps_executed: usize,
    /// False only when `t_max` ended the run undecided.
    pub converged: bool,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Per-source bookkeeping of the truncated series `Σ t·p_t`.
#[derive(Debug, Clone, Default)]
struct Accumulator {
    cumulative: CompensatedSum,
    moment: CompensatedSum,
    quiet: usize,
}

impl Accumulator {
    fn record(&mut self, t: usize, p: f64, cfg: &PassageConfig, window: usize) -> Option<PassageResult> {
        self.cumulative.add(p);
        self.moment.add(t as f64 * p);
        if p < cfg.stall_increment {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        let cumulative = self.cumulative.value();
        let done = |value, converged| PassageResult {
            value,
            cumulative_detection: cumulative,
            steps_executed: t,
            converged,
        };
        if 1.0 - cumulative < cfg.residual_threshold {
            Some(done(PassageValue::Finite(self.moment.value()), true))
        } else if self.quiet >= window {
            Some(done(PassageValue::Infinite, true))
        } else if t >= cfg.t_max {
            Some(done(PassageValue::Infinite, false))
        } else {
            None
        }
    }
}

/// One step of a monitored evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t: usize,
    /// `Tr(Π α_jᵗ)`.
    pub detection: f64,
    pub cumulative: f64,
    /// `Tr(P_j(αᵗ))`, the mass that keeps walking.
    pub remaining: f64,
}

/// Forward monitored evolution from a localized state; never ends by itself.
#[derive(Debug, Clone)]
pub struct MonitoredWalk<'a> {
    tom: &'a CompiledTom,
    target: usize,
    projector: Vec<C64>,
    complement: Vec<C64>,
    state: Vec<C64>,
    scratch: Vec<C64>,
    t: usize,
    cumulative: CompensatedSum,
}

impl MonitoredWalk<'_> {
    /// Current vector state `αᵗ`, before monitoring.
    pub fn state(&self) -> VectorState {
        self.tom.unflatten(&self.state)
    }
}

impl Iterator for MonitoredWalk<'_> {
    type Item = StepRecord;

    fn next(&mut self) -> Option<StepRecord> {
        let d = self.tom.internal_dim();
        let dd = d * d;
        let target = self.target * dd..(self.target + 1) * dd;
        if self.t > 0 {
            project_block(&mut self.state[target.clone()], &self.complement, d);
        }
        self.tom.forward(&self.state, &mut self.scratch);
        std::mem::swap(&mut self.state, &mut self.scratch);
        self.t += 1;
        let detection = trace_product_re(&self.projector, &self.state[target], d);
        self.cumulative.add(detection);
        let total: f64 = (0..self.tom.n_vertices())
            .map(|v| (0..d).map(|k| self.state[v * dd + k * d + k].re).sum::<f64>())
            .sum();
        Some(StepRecord {
            t: self.t,
            detection,
            cumulative: self.cumulative.value(),
            remaining: total - detection,
        })
    }
}

/// Passage times of one TOM.
#[derive(Debug, Clone)]
pub struct PassageEngine {
    tom: CompiledTom,
}

/// `Q_ij` for every source `i` (row) and target `j` (column).
#[derive(Debug, Clone, PartialEq)]
pub struct QmfptMatrix {
    n: usize,
    results: Vec<PassageResult>,
}

/// Mean of passage values; infinite as soon as one term is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub value: PassageValue,
    /// Smallest cumulative detection among the terms.
    pub min_cumulative: f64,
    pub terms: usize,
}

impl Aggregate {
    pub fn mean<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (PassageValue, f64)>,
    {
        let mut sum = 0.0;
        let mut count = 0;
        let mut infinite = false;
        let mut min_cumulative = f64::INFINITY;
        for (value, cumulative) in terms {
            count += 1;
            min_cumulative = min_cumulative.min(cumulative);
            match value {
                PassageValue::Finite(v) => sum += v,
                PassageValue::Infinite => infinite = true,
            }
        }
        let value = if infinite || count == 0 {
            PassageValue::Infinite
        } else {
            PassageValue::Finite(sum / count as f64)
        };
        Self {
            value,
            min_cumulative,
            terms: count,
        }
    }
}

impl QmfptMatrix {
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn get(&self, source: usize, target: usize) -> &PassageResult {
        &self.results[source * self.n + target]
    }

    /// Mean of `Q_ij` over sources `i ≠ j`.
    pub fn vertex_qmfpt(&self, target: usize) -> Aggregate {
        vertex_aggregate(target, |i| *self.get(i, target), self.n)
    }

    pub fn degree_qmfpt(&self, vertices: &[usize]) -> Aggregate {
        Aggregate::mean(vertices.iter().map(|&j| {
            let a = self.vertex_qmfpt(j);
            (a.value, a.min_cumulative)
        }))
    }

    pub fn degree_qart(&self, vertices: &[usize]) -> Aggregate {
        Aggregate::mean(vertices.iter().map(|&j| {
            let r = self.get(j, j);
            (r.value, r.cumulative_detection)
        }))
    }
}

fn vertex_aggregate<F: Fn(usize) -> PassageResult>(target: usize, get: F, n: usize) -> Aggregate {
    Aggregate::mean((0..n).filter(|&i| i != target).map(|i| {
        let r = get(i);
        (r.value, r.cumulative_detection)
    }))
}

impl PassageEngine {
    pub fn new(tom: &TransitionOperationMatrix) -> Self {
        Self { tom: tom.compile() }
    }

    pub fn n_vertices(&self) -> usize {
        self.tom.n_vertices()
    }

    fn check_vertex(&self, v: usize) -> Result<(), PassageError> {
        let n = self.tom.n_vertices();
        if v >= n {
            return Err(TomError::VertexOutOfRange { index: v, n }.into());
        }
        Ok(())
    }

    fn check_inputs(&self, rho0: &SubNormalizedState, view: &ViewOperator) -> Result<(), PassageError> {
        let d = self.tom.internal_dim();
        for found in [rho0.dim(), view.dim()] {
            if found != d {
                return Err(TomError::Mismatch(format!(
                    "operand of dimension {found} for a walk of internal dimension {d}"
                ))
                .into());
            }
        }
        let trace = rho0.trace();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(PassageError::InitialTrace(trace));
        }
        Ok(())
    }

    pub fn walk(
        &self,
        source: usize,
        target: usize,
        rho0: &SubNormalizedState,
        view: &ViewOperator,
    ) -> Result<MonitoredWalk<'_>, PassageError> {
        self.check_vertex(source)?;
        self.check_vertex(target)?;
        self.check_inputs(rho0, view)?;
        let dd = rho0.dim() * rho0.dim();
        let mut state = vec![ZERO; self.tom.state_len()];
        state[source * dd..(source + 1) * dd].copy_from_slice(rho0.matrix().as_slice());
        Ok(MonitoredWalk {
            tom: &self.tom,
            target,
            projector: view.projector().as_slice().to_vec(),
            complement: view.complement().as_slice().to_vec(),
            scratch: vec![ZERO; state.len()],
            state,
            t: 0,
            cumulative: CompensatedSum::default(),
        })
    }

    /// `Q_ij` by forward evolution of the single source.
    pub fn qmfpt(
        &self,
        source: usize,
        target: usize,
        rho0: &SubNormalizedState,
        view: &ViewOperator,
        cfg: &PassageConfig,
    ) -> Result<PassageResult, PassageError> {
        cfg.validate()?;
        let window = cfg.window_for(self.n_vertices());
        let mut acc = Accumulator::default();
        for step in self.walk(source, target, rho0, view)? {
            if let Some(r) = acc.record(step.t, step.detection, cfg, window) {
                return Ok(r);
            }
        }
        unreachable!("monitored walks never end")
    }

    /// `Q_ij` for every source `i` at once, in the Heisenberg picture. Each
    /// source stops under exactly the rule used by [`Self::qmfpt`].
    pub fn qmfpt_column(
        &self,
        target: usize,
        rho0: &SubNormalizedState,
        view: &ViewOperator,
        cfg: &PassageConfig,
    ) -> Result<Vec<PassageResult>, PassageError> {
        cfg.validate()?;
        self.check_vertex(target)?;
        self.check_inputs(rho0, view)?;
        let n = self.n_vertices();
        let d = self.tom.internal_dim();
        let dd = d * d;
        let window = cfg.window_for(n);
        let rho = rho0.matrix().as_slice();
        let complement = view.complement().as_slice();

        let mut obs = vec![ZERO; self.tom.state_len()];
        obs[target * dd..(target + 1) * dd].copy_from_slice(view.projector().as_slice());
        let mut y = vec![ZERO; obs.len()];
        self.tom.adjoint(&obs, &mut y);

        let mut acc = vec![Accumulator::default(); n];
        let mut out: Vec<Option<PassageResult>> = vec![None; n];
        let mut active = n;
        let mut t = 1;
        loop {
            for i in 0..n {
                if out[i].is_some() {
                    continue;
                }
                let p = trace_product_re(&y[i * dd..(i + 1) * dd], rho, d);
                if let Some(r) = acc[i].record(t, p, cfg, window) {
                    out[i] = Some(r);
                    active -= 1;
                }
            }
            if active == 0 {
                break;
            }
            project_block(&mut y[target * dd..(target + 1) * dd], complement, d);
            self.tom.adjoint(&y, &mut obs);
            std::mem::swap(&mut y, &mut obs);
            t += 1;
        }
        Ok(out.into_iter().map(|r| r.expect("every source finished")).collect())
    }

    /// Full `Q` matrix; targets are distributed over the current rayon pool
    /// and the result does not depend on scheduling.
    pub fn qmfpt_matrix(
        &self,
        rho0: &SubNormalizedState,
        view: &ViewOperator,
        cfg: &PassageConfig,
    ) -> Result<QmfptMatrix, PassageError> {
        let n = self.n_vertices();
        let columns = self.columns(&(0..n).collect::<Vec<_>>(), rho0, view, cfg)?;
        let mut results = Vec::with_capacity(n * n);
        for i in 0..n {
            for col in &columns {
                results.push(col[i]);
            }
        }
        Ok(QmfptMatrix { n, results })
    }

    fn columns(
        &self,
        targets: &[usize],
        rho0: &SubNormalizedState,
        view: &ViewOperator,
        cfg: &PassageConfig,
    ) -> Result<Vec<Vec<PassageResult>>, PassageError> {
        targets
            .par_iter()
            .map(|&j| self.qmfpt_column(j, rho0, view, cfg))
            .collect()
    }

    pub fn vertex_qmfpt(
        &self,
        target: usize,
        rho0: &SubNormalizedState,
        view: &ViewOperator,
        cfg: &PassageConfig,
    ) -> Result<Aggregate, PassageError> {
        let col = self.qmfpt_column(target, rho0, view, cfg)?;
        Ok(vertex_aggregate(target, |i| col[i], col.len()))
    }

    /// Degree-qMFPT and degree-qART over the given vertex set.
    pub fn degree_stats(
        &self,
        vertices: &[usize],
        rho0: &SubNormalizedState,
        view: &ViewOperator,
        cfg: &PassageConfig,
    ) -> Result<(Aggregate, Aggregate), PassageError> {
        let columns = self.columns(vertices, rho0, view, cfg)?;
        let n = self.n_vertices();
        let qmfpt = Aggregate::mean(vertices.iter().zip(&columns).map(|(&j, col)| {
            let a = vertex_aggregate(j, |i| col[i], n);
            (a.value, a.min_cumulative)
        }));
        let qart = Aggregate::mean(
            vertices
                .iter()
                .zip(&columns)
                .map(|(&j, col)| (col[j].value, col[j].cumulative_detection)),
        );
        Ok((qmfpt, qart))
    }

    /// Rows `t = 0..=t_steps` of `Tr(Π α_vᵗ)` under the plain evolution.
    pub fn step_distribution(
        &self,
        alpha0: &VectorState,
        view: &ViewOperator,
        t_steps: usize,
    ) -> Result<Vec<Vec<f64>>, PassageError> {
        if t_steps == 0 {
            return Err(PassageError::ZeroSteps);
        }
        let d = self.tom.internal_dim();
        if alpha0.n_vertices() != self.n_vertices() || alpha0.dim() != d || view.dim() != d {
            return Err(TomError::Mismatch("initial vector state or view does not fit the walk".into()).into());
        }
        let dd = d * d;
        let p = view.projector().as_slice();
        let row = |buf: &[C64]| -> Vec<f64> {
            buf.chunks(dd).map(|b| trace_product_re(p, b, d)).collect()
        };
        let mut state = self.tom.flatten(alpha0);
        let mut scratch = vec![ZERO; state.len()];
        let mut rows = Vec::with_capacity(t_steps + 1);
        rows.push(row(&state));
        for _ in 0..t_steps {
            self.tom.forward(&state, &mut scratch);
            std::mem::swap(&mut state, &mut scratch);
            rows.push(row(&state));
        }
        Ok(rows)
    }
}

pub fn qmfpt(
    spec: &WalkSpec,
    source: usize,
    target: usize,
    rho0: &SubNormalizedState,
    view: &ViewOperator,
    cfg: &PassageConfig,
) -> Result<PassageResult, PassageError> {
    PassageEngine::new(spec.tom()).qmfpt(source, target, rho0, view, cfg)
}

pub fn qmfpt_matrix(
    spec: &WalkSpec,
    rho0: &SubNormalizedState,
    view: &ViewOperator,
    cfg: &PassageConfig,
) -> Result<QmfptMatrix, PassageError> {
    PassageEngine::new(spec.tom()).qmfpt_matrix(rho0, view, cfg)
}

pub fn vertex_qmfpt(
    spec: &WalkSpec,
    target: usize,
    rho0: &SubNormalizedState,
    view: &ViewOperator,
    cfg: &PassageConfig,
) -> Result<Aggregate, PassageError> {
    PassageEngine::new(spec.tom()).vertex_qmfpt(target, rho0, view, cfg)
}

fn degree_vertices(spec: &WalkSpec, degree: usize) -> Result<Vec<usize>, PassageError> {
    let vs = spec.network().vertices_with_degree(degree);
    if vs.is_empty() {
        return Err(PassageError::NoVertexWithDegree(degree));
    }
    Ok(vs)
}

pub fn degree_qmfpt(
    spec: &WalkSpec,
    degree: usize,
    rho0: &SubNormalizedState,
    view: &ViewOperator,
    cfg: &PassageConfig,
) -> Result<Aggregate, PassageError> {
    let vs = degree_vertices(spec, degree)?;
    Ok(PassageEngine::new(spec.tom()).degree_stats(&vs, rho0, view, cfg)?.0)
}

pub fn degree_qart(
    spec: &WalkSpec,
    degree: usize,
    rho0: &SubNormalizedState,
    view: &ViewOperator,
    cfg: &PassageConfig,
) -> Result<Aggregate, PassageError> {
    let vs = degree_vertices(spec, degree)?;
    Ok(PassageEngine::new(spec.tom()).degree_stats(&vs, rho0, view, cfg)?.1)
}

pub fn step_distribution(
    spec: &WalkSpec,
    alpha0: &VectorState,
    view: &ViewOperator,
    t_steps: usize,
) -> Result<Vec<Vec<f64>>, PassageError> {
    PassageEngine::new(spec.tom()).step_distribution(alpha0, view, t_steps)
}

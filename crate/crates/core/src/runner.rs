//! Figure presets, parameter sweeps, CSV emission and replayable run
//! manifests.
//!
//! Every emitted CSV starts with a commented manifest block (`# key = value`
//! lines) that echoes the full parameter set of the run. Reparsing that
//! block and rerunning reproduces the file byte for byte, which is the
//! determinism contract the replay path enforces.
//!
//! Sweeps run on the four-node network of two phi+ pairs with the DM link
//! driven between nodes 2 and 3; the `fig7` preset grows the network to six
//! nodes by coupling a third phi+ pair through nodes 4 and 5.

use std::path::Path;

use crate::dmnet::{self, DMCoupling, EvolutionMethod, NetworkState, Propagator};
use crate::entmeas;
use crate::qstate::{bell_state, Axis, BellKind};
use crate::teleport::{self, Corrections, UnknownQubit};
use crate::{tol, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Node pair carrying the driven DM link in every sweep.
pub const DRIVEN_PAIR: (usize, usize) = (2, 3);
/// Growth link used by the six-node preset.
pub const GROWTH_PAIR: (usize, usize) = (4, 5);

const MAX_GRID_POINTS: usize = 400_000;

/// Ordered `key = value` echo of a run's parameters, rendered as the
/// commented header block of its CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }

    /// Parse the leading commented block of a CSV. Stops at the first
    /// non-comment line; malformed comment lines are an error.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            if !line.starts_with('#') {
                break;
            }
            let body = line.trim_start_matches('#').trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("manifest line without '=': {line:?}"))
            })?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        if entries.is_empty() {
            return Err(Error::InvalidArgument("no manifest block found".into()));
        }
        Ok(Self { entries })
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::InvalidArgument(format!("manifest is missing '{key}'")))
    }

    fn require_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.require(key)?
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("manifest value for '{key}' is malformed")))
    }
}

/// Rectangular time-series table: first column is t (strictly increasing),
/// the rest are the measured values, plus the manifest that reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    manifest: Manifest,
}

impl SweepResult {
    pub(crate) fn new(columns: Vec<String>, rows: Vec<Vec<f64>>, manifest: Manifest) -> Self {
        debug_assert!(!columns.is_empty() && columns[0] == "t");
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        debug_assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
        Self {
            columns,
            rows,
            manifest,
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    /// Values of one named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    fn with_manifest(mut self, manifest: Manifest) -> Self {
        self.manifest = manifest;
        self
    }

    fn merge_columns(mut self, other: SweepResult) -> Result<SweepResult> {
        if self.rows.len() != other.rows.len() {
            return Err(Error::InvalidArgument(
                "cannot merge tables of different lengths".into(),
            ));
        }
        self.columns.extend(other.columns.into_iter().skip(1));
        for (row, extra) in self.rows.iter_mut().zip(other.rows) {
            debug_assert_eq!(row[0], extra[0]);
            row.extend(extra.into_iter().skip(1));
        }
        Ok(self)
    }
}

/// What a sweep measures per channel and time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Concurrence,
    MinConcurrence,
    Fidelity,
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concurrence" => Ok(Measure::Concurrence),
            "min" => Ok(Measure::MinConcurrence),
            "fidelity" => Ok(Measure::Fidelity),
            other => Err(Error::InvalidArgument(format!(
                "measure must be concurrence|min|fidelity, got '{other}'"
            ))),
        }
    }
}

impl Measure {
    pub fn label(self) -> &'static str {
        match self {
            Measure::Concurrence => "concurrence",
            Measure::MinConcurrence => "min",
            Measure::Fidelity => "fidelity",
        }
    }
}

/// The named figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig7,
    Fig8,
}

impl std::str::FromStr for FigurePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(FigurePreset::Fig2),
            "fig3" => Ok(FigurePreset::Fig3),
            "fig4" => Ok(FigurePreset::Fig4),
            "fig5" => Ok(FigurePreset::Fig5),
            "fig7" => Ok(FigurePreset::Fig7),
            "fig8" => Ok(FigurePreset::Fig8),
            other => Err(Error::InvalidArgument(format!(
                "unknown figure preset '{other}'"
            ))),
        }
    }
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 6] = [
        FigurePreset::Fig2,
        FigurePreset::Fig3,
        FigurePreset::Fig4,
        FigurePreset::Fig5,
        FigurePreset::Fig7,
        FigurePreset::Fig8,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3 => "fig3",
            FigurePreset::Fig4 => "fig4",
            FigurePreset::Fig5 => "fig5",
            FigurePreset::Fig7 => "fig7",
            FigurePreset::Fig8 => "fig8",
        }
    }
}

/// Optional parameter overrides accepted by every preset.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub strength: Option<f64>,
    pub tmax: Option<f64>,
    pub dt: Option<f64>,
    pub method: Option<EvolutionMethod>,
    pub corrections: Option<Corrections>,
    pub input_alpha2: Option<f64>,
    pub input_samples: Option<u32>,
    pub seed: Option<u64>,
}

/// Full parameter set of one explicit sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub axis: Axis,
    pub strength: f64,
    pub tmax: f64,
    pub dt: f64,
    pub pairs: Vec<(usize, usize)>,
    pub measure: Measure,
    pub method: EvolutionMethod,
    pub corrections: Corrections,
    pub input_alpha2: f64,
    /// 0 keeps the fixed input; N > 0 averages the fidelity over N
    /// uniformly sampled inputs per time point.
    pub input_samples: u32,
    pub seed: u64,
}

impl SweepParams {
    pub fn new(axis: Axis, measure: Measure) -> Self {
        Self {
            axis,
            strength: 0.2,
            tmax: 20.0,
            dt: 0.05,
            pairs: Vec::new(),
            measure,
            method: EvolutionMethod::Oracle,
            corrections: Corrections::On,
            input_alpha2: 0.7,
            input_samples: 0,
            seed: 7,
        }
    }

    fn apply(mut self, o: &Overrides) -> Self {
        if let Some(v) = o.strength {
            self.strength = v;
        }
        if let Some(v) = o.tmax {
            self.tmax = v;
        }
        if let Some(v) = o.dt {
            self.dt = v;
        }
        if let Some(v) = o.method {
            self.method = v;
        }
        if let Some(v) = o.corrections {
            self.corrections = v;
        }
        if let Some(v) = o.input_alpha2 {
            self.input_alpha2 = v;
        }
        if let Some(v) = o.input_samples {
            self.input_samples = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !self.tmax.is_finite() || self.tmax <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tmax must be positive, got {}",
                self.tmax
            )));
        }
        if !self.strength.is_finite() {
            return Err(Error::InvalidArgument("strength must be finite".into()));
        }
        if !(0.0..=1.0).contains(&self.input_alpha2) {
            return Err(Error::InvalidArgument(format!(
                "input alpha^2 must lie in [0, 1], got {}",
                self.input_alpha2
            )));
        }
        if self.input_samples > 1_000_000 {
            return Err(Error::InvalidArgument(format!(
                "{} input samples per time point is too many",
                self.input_samples
            )));
        }
        match self.measure {
            Measure::MinConcurrence => {}
            _ => {
                if self.pairs.is_empty() {
                    return Err(Error::InvalidArgument(
                        "this measure needs at least one pair".into(),
                    ));
                }
                for &(i, j) in &self.pairs {
                    if i == j || i == 0 || j == 0 || i > 4 || j > 4 {
                        return Err(Error::InvalidArgument(format!(
                            "pair ({i}, {j}) invalid for the four-node network"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn manifest(&self) -> Manifest {
        let mut m = Manifest::new();
        m.push("generator", "entnet");
        m.push("mode", "sweep");
        self.push_common(&mut m);
        m.push("units", "hbar=1, D in inverse time");
        m
    }

    fn push_common(&self, m: &mut Manifest) {
        m.push("measure", self.measure.label());
        m.push("axis", self.axis.label());
        m.push("strength", self.strength);
        m.push("tmax", self.tmax);
        m.push("dt", self.dt);
        m.push("coupling", format!("{}-{}", DRIVEN_PAIR.0, DRIVEN_PAIR.1));
        if self.measure != Measure::MinConcurrence {
            m.push("pairs", format_pairs(&self.pairs));
        }
        m.push("method", self.method.label());
        if self.measure == Measure::Fidelity {
            m.push("corrections", self.corrections.label());
            m.push("input_alpha2", self.input_alpha2);
            m.push("input_samples", self.input_samples);
            if self.input_samples > 0 {
                m.push("seed", self.seed);
            }
        }
    }
}

/// Evenly spaced grid 0, dt, 2 dt, ..., up to and including the last point
/// at or below tmax.
pub fn time_grid(tmax: f64, dt: f64) -> Result<Vec<f64>> {
    if !dt.is_finite() || !tmax.is_finite() || dt <= 0.0 || tmax <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "invalid grid: tmax = {tmax}, dt = {dt}"
        )));
    }
    let n = (tmax / dt + 1e-9).floor() as usize;
    if n >= MAX_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "grid of {n}+1 points is too large"
        )));
    }
    Ok((0..=n).map(|k| k as f64 * dt).collect())
}

fn four_node_network() -> NetworkState {
    dmnet::initial_network(&[BellKind::PhiPlus, BellKind::PhiPlus])
}

/// Run one explicit sweep on the four-node network.
pub fn run_sweep(params: &SweepParams) -> Result<SweepResult> {
    params.validate()?;
    let grid = time_grid(params.tmax, params.dt)?;
    let net0 = four_node_network();
    let coupling = DMCoupling::along(params.axis, params.strength, DRIVEN_PAIR);

    let table = match params.measure {
        Measure::Concurrence => {
            entmeas::concurrence_table(&net0, &coupling, &grid, &params.pairs, params.method)?
        }
        Measure::MinConcurrence => {
            let states = dmnet::states_on_grid(&net0, &coupling, &grid, params.method)?;
            let columns = vec!["t".to_string(), format!("Cmin_{}", params.axis.label())];
            let mut rows = Vec::with_capacity(grid.len());
            for (&t, psi) in grid.iter().zip(states) {
                let value = entmeas::min_concurrence(&NetworkState::from_state(psi))?;
                rows.push(vec![t, value]);
            }
            SweepResult::new(columns, rows, Manifest::new())
        }
        Measure::Fidelity => fidelity_table(&net0, &coupling, &grid, params)?,
    };
    Ok(table.with_manifest(params.manifest()))
}

fn fidelity_table(
    net0: &NetworkState,
    coupling: &DMCoupling,
    grid: &[f64],
    params: &SweepParams,
) -> Result<SweepResult> {
    let axis_suffix = coupling
        .single_axis()
        .map(|(a, _)| a.label().to_string())
        .unwrap_or_default();
    let mut columns = vec!["t".to_string()];
    columns.extend(
        params
            .pairs
            .iter()
            .map(|(i, j)| format!("F_{i}{j}{axis_suffix}")),
    );

    let input = UnknownQubit::from_alpha_squared(params.input_alpha2)?;
    let sampled_inputs: Vec<UnknownQubit> = if params.input_samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        (0..params.input_samples)
            .map(|_| UnknownQubit::sample_uniform(&mut rng))
            .collect()
    } else {
        Vec::new()
    };

    let states = dmnet::states_on_grid(net0, coupling, grid, params.method)?;
    let mut rows = Vec::with_capacity(grid.len());
    for (&t, psi) in grid.iter().zip(states) {
        let net = NetworkState::from_state(psi);
        let mut row = Vec::with_capacity(params.pairs.len() + 1);
        row.push(t);
        for &route in &params.pairs {
            let channel = teleport::route_channel(&net, route)?;
            let f = if sampled_inputs.is_empty() {
                teleport::average_fidelity(&teleport::teleport(
                    &channel,
                    &input,
                    params.corrections,
                )?)
            } else {
                let mut acc = 0.0;
                for q in &sampled_inputs {
                    acc += teleport::average_fidelity(&teleport::teleport(
                        &channel,
                        q,
                        params.corrections,
                    )?);
                }
                acc / sampled_inputs.len() as f64
            };
            if !(0.0..=1.0 + tol::RANGE_SLACK).contains(&f) {
                return Err(Error::InvariantViolation(format!(
                    "fidelity {f} outside [0, 1] at t = {t}"
                )));
            }
            row.push(f);
        }
        rows.push(row);
    }
    Ok(SweepResult::new(columns, rows, Manifest::new()))
}

/// Run a named figure preset, with optional overrides.
pub fn run_figure(preset: FigurePreset, overrides: &Overrides) -> Result<SweepResult> {
    let table = match preset {
        FigurePreset::Fig2 => {
            let mut p = SweepParams::new(Axis::Z, Measure::Concurrence).apply(overrides);
            p.pairs = vec![(1, 2), (1, 3), (1, 4)];
            run_sweep(&p)?
        }
        FigurePreset::Fig3 => {
            let mut p = SweepParams::new(Axis::Z, Measure::Concurrence).apply(overrides);
            p.pairs = vec![(3, 4), (2, 3), (2, 4)];
            run_sweep(&p)?
        }
        FigurePreset::Fig4 => {
            let mut p = SweepParams::new(Axis::X, Measure::Concurrence).apply(overrides);
            p.pairs = vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
            run_sweep(&p)?
        }
        FigurePreset::Fig5 => {
            let pz = SweepParams::new(Axis::Z, Measure::MinConcurrence).apply(overrides);
            let px = SweepParams::new(Axis::X, Measure::MinConcurrence).apply(overrides);
            run_sweep(&pz)?.merge_columns(run_sweep(&px)?)?
        }
        FigurePreset::Fig7 => {
            grown_network_table(&SweepParams::new(Axis::Z, Measure::Concurrence).apply(overrides))?
        }
        FigurePreset::Fig8 => {
            let mut p = SweepParams::new(Axis::X, Measure::Fidelity).apply(overrides);
            p.pairs = vec![(1, 2), (1, 4), (2, 3)];
            run_sweep(&p)?
        }
    };

    // The figure manifest records just the preset and its overridable
    // parameters; replay rebuilds the preset from them.
    let effective = SweepParams::new(Axis::Z, Measure::Concurrence).apply(overrides);
    let mut manifest = Manifest::new();
    manifest.push("generator", "entnet");
    manifest.push("mode", "figure");
    manifest.push("preset", preset.label());
    manifest.push("strength", effective.strength);
    manifest.push("tmax", effective.tmax);
    manifest.push("dt", effective.dt);
    manifest.push("method", effective.method.label());
    if preset == FigurePreset::Fig8 {
        manifest.push("corrections", effective.corrections.label());
        manifest.push("input_alpha2", effective.input_alpha2);
        manifest.push("input_samples", effective.input_samples);
        if effective.input_samples > 0 {
            manifest.push("seed", effective.seed);
        }
    }
    manifest.push("units", "hbar=1, D in inverse time");
    Ok(table.with_manifest(manifest))
}

/// Six-node growth series: evolve the four-node network for t, adjoin a
/// fresh phi+ pair on nodes (5, 6), couple (4, 5) for the same t, then read
/// the (1,5) and (1,6) concurrences.
fn grown_network_table(params: &SweepParams) -> Result<SweepResult> {
    let mut p = params.clone();
    p.pairs = vec![(1, 2)]; // placeholder so validation passes
    p.validate()?;
    let grid = time_grid(p.tmax, p.dt)?;

    let net4 = four_node_network();
    let c23 = DMCoupling::along(Axis::Z, p.strength, DRIVEN_PAIR);
    let c45 = DMCoupling::along(Axis::Z, p.strength, GROWTH_PAIR);
    let prop4 = Propagator::new(&c23, 4)?;
    let prop6 = Propagator::new(&c45, 6)?;
    let fresh = bell_state(BellKind::PhiPlus);

    let columns = vec!["t".to_string(), "C_15z".to_string(), "C_16z".to_string()];
    let mut rows = Vec::with_capacity(grid.len());
    for &t in &grid {
        let psi4 = prop4.state_at(net4.psi(), t)?;
        let psi6 = prop6.state_at(&psi4.tensor(&fresh), t)?;
        let net6 = NetworkState::from_state(psi6);
        let c15 = entmeas::concurrence(&dmnet::reduced(&net6, &[1, 5])?)?;
        let c16 = entmeas::concurrence(&dmnet::reduced(&net6, &[1, 6])?)?;
        rows.push(vec![t, c15, c16]);
    }
    Ok(SweepResult::new(columns, rows, Manifest::new()))
}

fn format_value(v: f64) -> String {
    format!("{:.11e}", v)
}

/// Render a result as CSV: manifest block, header line, one row per time
/// point, values at 12 significant digits.
pub fn render_csv(result: &SweepResult) -> String {
    let mut out = result.manifest.render();
    out.push_str(&result.columns.join(","));
    out.push('\n');
    for row in &result.rows {
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Write a result to `path`; refuses to create a file for an empty table.
pub fn emit_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::InvalidArgument(
            "refusing to emit an empty table".into(),
        ));
    }
    std::fs::write(path, render_csv(result))?;
    Ok(())
}

/// Parse the data section of an emitted CSV back into columns and rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?;
    let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad CSV value {tok:?}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != columns.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} values, header has {} columns",
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok((columns, rows))
}

/// Parse "i-j[,i-j...]" into ordered pairs.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let (a, b) = tok.split_once('-').ok_or_else(|| {
            Error::InvalidArgument(format!("pair {tok:?} is not of the form i-j"))
        })?;
        let i: usize = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad node index {a:?}")))?;
        let j: usize = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad node index {b:?}")))?;
        if i == 0 || j == 0 || i == j {
            return Err(Error::InvalidArgument(format!(
                "pair {tok:?} must name two distinct nodes"
            )));
        }
        pairs.push((i, j));
    }
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("empty pair list".into()));
    }
    Ok(pairs)
}

pub fn format_pairs(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(i, j)| format!("{i}-{j}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// A run reconstructed from a manifest block, not yet executed.
#[derive(Debug, Clone, PartialEq)]
pub enum ReplayPlan {
    Figure {
        preset: FigurePreset,
        overrides: Overrides,
    },
    Sweep(SweepParams),
}

impl ReplayPlan {
    /// Parse and validate the manifest block of an emitted CSV.
    pub fn parse(text: &str) -> Result<Self> {
        let m = Manifest::parse(text)?;
        match m.require("mode")? {
            "figure" => {
                let preset: FigurePreset = m.require_parsed("preset")?;
                let overrides = Overrides {
                    strength: Some(m.require_parsed("strength")?),
                    tmax: Some(m.require_parsed("tmax")?),
                    dt: Some(m.require_parsed("dt")?),
                    method: Some(m.require_parsed("method")?),
                    corrections: match m.get("corrections") {
                        Some(v) => Some(v.parse()?),
                        None => None,
                    },
                    input_alpha2: match m.get("input_alpha2") {
                        Some(_) => Some(m.require_parsed("input_alpha2")?),
                        None => None,
                    },
                    input_samples: match m.get("input_samples") {
                        Some(_) => Some(m.require_parsed("input_samples")?),
                        None => None,
                    },
                    seed: match m.get("seed") {
                        Some(_) => Some(m.require_parsed("seed")?),
                        None => None,
                    },
                };
                // surface grid problems at parse time
                let effective = SweepParams::new(Axis::Z, Measure::Concurrence).apply(&overrides);
                time_grid(effective.tmax, effective.dt)?;
                Ok(ReplayPlan::Figure { preset, overrides })
            }
            "sweep" => {
                let measure: Measure = m.require_parsed("measure")?;
                let mut params = SweepParams::new(m.require_parsed("axis")?, measure);
                params.strength = m.require_parsed("strength")?;
                params.tmax = m.require_parsed("tmax")?;
                params.dt = m.require_parsed("dt")?;
                params.method = m.require_parsed("method")?;
                if measure != Measure::MinConcurrence {
                    params.pairs = parse_pairs(m.require("pairs")?)?;
                }
                if measure == Measure::Fidelity {
                    params.corrections = m.require_parsed("corrections")?;
                    params.input_alpha2 = m.require_parsed("input_alpha2")?;
                    params.input_samples = m.require_parsed("input_samples")?;
                    if params.input_samples > 0 {
                        params.seed = m.require_parsed("seed")?;
                    }
                }
                params.validate()?;
                time_grid(params.tmax, params.dt)?;
                Ok(ReplayPlan::Sweep(params))
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown manifest mode '{other}'"
            ))),
        }
    }

    pub fn execute(&self) -> Result<SweepResult> {
        match self {
            ReplayPlan::Figure { preset, overrides } => run_figure(*preset, overrides),
            ReplayPlan::Sweep(params) => run_sweep(params),
        }
    }
}

/// Rebuild and rerun the sweep described by a CSV's manifest block.
pub fn replay_str(text: &str) -> Result<SweepResult> {
    ReplayPlan::parse(text)?.execute()
}

/// Replay a CSV file; returns the original text and the regenerated result.
pub fn replay_file(path: impl AsRef<Path>) -> Result<(String, SweepResult)> {
    let text = std::fs::read_to_string(path)?;
    let result = replay_str(&text)?;
    Ok((text, result))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short() -> Overrides {
        Overrides {
            tmax: Some(2.0),
            dt: Some(0.5),
            ..Default::default()
        }
    }

    #[test]
    fn fig2_initial_row() {
        let r = run_figure(FigurePreset::Fig2, &short()).unwrap();
        assert_eq!(r.columns(), &["t", "C_12z", "C_13z", "C_14z"]);
        let row = &r.rows()[0];
        assert!((row[1] - 1.0).abs() < 1e-12);
        assert!(row[2].abs() < 1e-12);
        assert!(row[3].abs() < 1e-12);
    }

    #[test]
    fn fig5_initial_row_is_sqrt_half() {
        let r = run_figure(FigurePreset::Fig5, &short()).unwrap();
        assert_eq!(r.columns(), &["t", "Cmin_z", "Cmin_x"]);
        let row = &r.rows()[0];
        assert!((row[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
        assert!((row[2] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    }

    #[test]
    fn fig3_symmetry_column_identity() {
        let mut o = short();
        o.tmax = Some(8.0);
        o.dt = Some(0.2);
        let r = run_figure(FigurePreset::Fig3, &o).unwrap();
        let c23 = r.column("C_23z").unwrap();
        let c24 = r.column("C_24z").unwrap();
        for (a, b) in c23.iter().zip(&c24) {
            assert!((a - b).abs() <= tol::SYMMETRY_IDENTITY);
        }
    }

    #[test]
    fn figure_equals_equivalent_sweep() {
        let fig = run_figure(FigurePreset::Fig2, &short()).unwrap();
        let mut p = SweepParams::new(Axis::Z, Measure::Concurrence);
        p.tmax = 2.0;
        p.dt = 0.5;
        p.pairs = vec![(1, 2), (1, 3), (1, 4)];
        let sweep = run_sweep(&p).unwrap();
        assert_eq!(fig.columns(), sweep.columns());
        assert_eq!(fig.rows(), sweep.rows());
    }

    #[test]
    fn oracle_and_analytic_sweeps_agree_cellwise() {
        for axis in [Axis::Z, Axis::X] {
            let mut p = SweepParams::new(axis, Measure::Concurrence);
            p.tmax = 6.0;
            p.dt = 0.3;
            p.pairs = vec![(1, 2), (1, 3)];
            let oracle = run_sweep(&p).unwrap();
            p.method = EvolutionMethod::Analytic;
            let analytic = run_sweep(&p).unwrap();
            for (ra, rb) in oracle.rows().iter().zip(analytic.rows()) {
                for (a, b) in ra.iter().zip(rb) {
                    assert!((a - b).abs() <= tol::METHOD_AGREEMENT);
                }
            }
        }
    }

    #[test]
    fn strength_scaling_compresses_time() {
        // C(t; 2D) == C(2t; D): the unitary depends on D t only
        let mut p = SweepParams::new(Axis::Z, Measure::Concurrence);
        p.pairs = vec![(1, 2)];
        p.tmax = 4.0;
        p.dt = 0.25;
        p.strength = 0.4;
        let fast = run_sweep(&p).unwrap();
        p.tmax = 8.0;
        p.dt = 0.5;
        p.strength = 0.2;
        let slow = run_sweep(&p).unwrap();
        for (a, b) in fast.rows().iter().zip(slow.rows()) {
            assert!((a[1] - b[1]).abs() <= tol::METHOD_AGREEMENT);
        }
    }

    #[test]
    fn zero_strength_generates_nothing() {
        let mut p = SweepParams::new(Axis::Z, Measure::Concurrence);
        p.pairs = vec![(1, 3), (2, 3), (2, 4)];
        p.strength = 0.0;
        p.tmax = 3.0;
        p.dt = 0.5;
        let r = run_sweep(&p).unwrap();
        for row in r.rows() {
            for v in &row[1..] {
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sweep_validation_errors() {
        let mut p = SweepParams::new(Axis::Z, Measure::Concurrence);
        assert!(run_sweep(&p).is_err()); // no pairs
        p.pairs = vec![(1, 2)];
        p.dt = 0.0;
        assert!(run_sweep(&p).is_err());
        p.dt = 0.05;
        p.tmax = -1.0;
        assert!(run_sweep(&p).is_err());
        p.tmax = 20.0;
        p.pairs = vec![(1, 5)];
        assert!(run_sweep(&p).is_err());
        p.pairs = vec![(1, 2)];
        p.measure = Measure::Fidelity;
        p.input_alpha2 = 1.5;
        assert!(run_sweep(&p).is_err());
    }

    #[test]
    fn csv_round_trip_and_format() {
        let r = run_figure(FigurePreset::Fig2, &short()).unwrap();
        let text = render_csv(&r);
        let data_start = text.lines().position(|l| !l.starts_with('#')).unwrap();
        assert_eq!(text.lines().nth(data_start).unwrap(), "t,C_12z,C_13z,C_14z");
        assert_eq!(text.lines().count(), data_start + 1 + r.rows().len());

        let (cols, rows) = parse_csv(&text).unwrap();
        assert_eq!(cols, r.columns());
        for (ra, rb) in rows.iter().zip(r.rows()) {
            for (a, b) in ra.iter().zip(rb) {
                assert!((a - b).abs() <= tol::CSV_ROUNDTRIP);
            }
        }
    }

    #[test]
    fn emit_refuses_empty_tables() {
        let r = SweepResult::new(vec!["t".into()], vec![], Manifest::new());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        assert!(emit_csv(&r, &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn replay_reproduces_figures_byte_identically() {
        for preset in [FigurePreset::Fig2, FigurePreset::Fig5, FigurePreset::Fig8] {
            let r = run_figure(preset, &short()).unwrap();
            let text = render_csv(&r);
            let replayed = replay_str(&text).unwrap();
            assert_eq!(render_csv(&replayed), text, "{preset:?}");
        }
    }

    #[test]
    fn replay_reproduces_sampled_sweeps() {
        let mut p = SweepParams::new(Axis::X, Measure::Fidelity);
        p.pairs = vec![(1, 2)];
        p.tmax = 1.0;
        p.dt = 0.5;
        p.input_samples = 32;
        p.seed = 1234;
        let r = run_sweep(&p).unwrap();
        let text = render_csv(&r);
        assert!(text.contains("# seed = 1234\n"));
        let replayed = replay_str(&text).unwrap();
        assert_eq!(render_csv(&replayed), text);
    }

    #[test]
    fn fig7_matches_the_grow_api() {
        let mut o = short();
        o.tmax = Some(2.0);
        o.dt = Some(1.0);
        let r = run_figure(FigurePreset::Fig7, &o).unwrap();
        assert_eq!(r.columns(), &["t", "C_15z", "C_16z"]);
        for row in r.rows() {
            let t = row[0];
            let net = dmnet::initial_network(&[BellKind::PhiPlus, BellKind::PhiPlus]);
            let evolved = dmnet::evolve(
                &net,
                &DMCoupling::along(Axis::Z, 0.2, DRIVEN_PAIR),
                t,
                EvolutionMethod::Oracle,
            )
            .unwrap();
            let grown = dmnet::grow(
                &evolved,
                BellKind::PhiPlus,
                &DMCoupling::along(Axis::Z, 0.2, GROWTH_PAIR),
                t,
            )
            .unwrap();
            let c15 = entmeas::concurrence(&dmnet::reduced(&grown, &[1, 5]).unwrap()).unwrap();
            let c16 = entmeas::concurrence(&dmnet::reduced(&grown, &[1, 6]).unwrap()).unwrap();
            assert!((row[1] - c15).abs() <= 1e-10);
            assert!((row[2] - c16).abs() <= 1e-10);
        }
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pairs("1-2").unwrap(), vec![(1, 2)]);
        assert_eq!(
            parse_pairs("1-2,2-3, 3-4").unwrap(),
            vec![(1, 2), (2, 3), (3, 4)]
        );
        assert!(parse_pairs("").is_err());
        assert!(parse_pairs("1").is_err());
        assert!(parse_pairs("1-1").is_err());
        assert!(parse_pairs("0-2").is_err());
        assert!(parse_pairs("a-b").is_err());
    }

    #[test]
    fn manifest_parsing_errors() {
        assert!(Manifest::parse("no comment block\n").is_err());
        assert!(Manifest::parse("# just a banner line\n").is_err());
        assert!(replay_str("# mode = teapot\n# x = 1\nt\n").is_err());
        assert!(replay_str("# mode = figure\n# preset = fig9\nt\n").is_err());
    }

    #[test]
    fn grid_construction() {
        let g = time_grid(20.0, 0.05).unwrap();
        assert_eq!(g.len(), 401);
        assert_eq!(g[0], 0.0);
        assert!((g[400] - 20.0).abs() < 1e-12);
        assert!(time_grid(0.0, 0.1).is_err());
        assert!(time_grid(1.0, -0.1).is_err());
        assert!(time_grid(1e9, 1e-6).is_err());
    }

    #[test]
    fn all_columns_stay_in_range() {
        for preset in FigurePreset::ALL {
            let mut o = short();
            o.tmax = Some(4.0);
            o.dt = Some(0.5);
            let r = run_figure(preset, &o).unwrap();
            for row in r.rows() {
                for v in &row[1..] {
                    assert!(
                        (-tol::RANGE_SLACK..=1.0 + tol::RANGE_SLACK).contains(v),
                        "{preset:?}: {v}"
                    );
                }
            }
        }
    }
}

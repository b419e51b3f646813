//! Standard teleportation over the network's two-node channels, with
//! per-outcome and averaged fidelity tracking.
//!
//! Protocol, acting on the register (input qubit, sender half, receiver
//! half): compose rho_u (x) rho_channel, apply CNOT (input controls the
//! sender half), apply the Hadamard to the input qubit, then project the
//! first two qubits onto each computational outcome, which realizes the
//! four-outcome Bell measurement. With corrections on the receiver applies
//! the standard conditional Pauli for its branch. Measurement is resolved
//! by exhaustive enumeration of the four branches with exact probabilities;
//! nothing in the main path draws random numbers.

use crate::dmnet::{DMCoupling, NetworkState};
use crate::linalg::{self, CMatrix, Complex, ONE, ZERO};
use crate::qstate::{embed, pauli, Axis, BellKind, DensityOperator};
use crate::runner::{Manifest, SweepResult};
use crate::{tol, Error, Result};
use rand::Rng;

/// Pure single-qubit input state alpha|0> + beta|1>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnknownQubit {
    alpha: Complex,
    beta: Complex,
}

impl UnknownQubit {
    /// Checked constructor: |alpha|^2 + |beta|^2 must be 1 within
    /// [`tol::STATE_NORM`].
    pub fn new(alpha: Complex, beta: Complex) -> Result<Self> {
        if ![alpha, beta]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm2 = alpha.norm_sqr() + beta.norm_sqr();
        if (norm2 - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized((norm2 - 1.0).abs()));
        }
        Ok(Self { alpha, beta })
    }

    /// Real-amplitude input with |alpha|^2 = `alpha2`.
    pub fn from_alpha_squared(alpha2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha2) {
            return Err(Error::InvalidArgument(format!(
                "alpha^2 = {alpha2} outside [0, 1]"
            )));
        }
        Self::new(
            Complex::new(alpha2.sqrt(), 0.0),
            Complex::new((1.0 - alpha2).sqrt(), 0.0),
        )
    }

    /// Uniformly distributed pure input (Haar on the Bloch sphere).
    pub fn sample_uniform(rng: &mut impl Rng) -> Self {
        let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta = cos_theta.acos();
        Self {
            alpha: Complex::new((theta / 2.0).cos(), 0.0),
            beta: Complex::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn alpha(&self) -> Complex {
        self.alpha
    }

    pub fn beta(&self) -> Complex {
        self.beta
    }

    /// Bloch components (s_x, s_y, s_z) with
    /// s_x = alpha beta* + alpha* beta, s_y = i(alpha* beta - alpha beta*),
    /// s_z = |alpha|^2 - |beta|^2.
    pub fn bloch(&self) -> [f64; 3] {
        let (a, b) = (self.alpha, self.beta);
        let sx = (a * b.conj() + a.conj() * b).re;
        let sy = (linalg::I * (a.conj() * b - a * b.conj())).re;
        let sz = a.norm_sqr() - b.norm_sqr();
        [sx, sy, sz]
    }

    fn density(&self) -> CMatrix {
        let v = [self.alpha, self.beta];
        CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
    }
}

/// Whether the receiver applies the outcome-conditional Pauli.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corrections {
    On,
    Off,
}

impl std::str::FromStr for Corrections {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "on" => Ok(Corrections::On),
            "off" => Ok(Corrections::Off),
            other => Err(Error::InvalidArgument(format!(
                "corrections must be on|off, got '{other}'"
            ))),
        }
    }
}

impl Corrections {
    pub fn label(self) -> &'static str {
        match self {
            Corrections::On => "on",
            Corrections::Off => "off",
        }
    }
}

/// One branch of the Bell measurement: its outcome, exact probability,
/// receiver state and both fidelity readings.
#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    pub bell_outcome: BellKind,
    pub probability: f64,
    pub output_state: DensityOperator,
    pub fidelity_paper: f64,
    pub fidelity_standard: f64,
}

/// Probability-weighted average of the standard fidelity over the four
/// outcomes.
pub fn average_fidelity(outcomes: &[TeleportOutcome]) -> f64 {
    outcomes
        .iter()
        .map(|o| o.probability * o.fidelity_standard)
        .sum()
}

fn hadamard() -> CMatrix {
    let s = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::new(2, 2, vec![s, s, s, -s]).unwrap()
}

fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// Computational outcomes (m1, m2) of the measured qubits, in the order
/// they label Bell states: 00, 01, 10, 11.
const OUTCOMES: [(usize, BellKind); 4] = [
    (0b00, BellKind::PhiPlus),
    (0b01, BellKind::PsiPlus),
    (0b10, BellKind::PhiMinus),
    (0b11, BellKind::PsiMinus),
];

fn correction_for(kind: BellKind) -> CMatrix {
    match kind {
        BellKind::PhiPlus => CMatrix::identity(2),
        BellKind::PsiPlus => pauli(Axis::X),
        BellKind::PhiMinus => pauli(Axis::Z),
        BellKind::PsiMinus => pauli(Axis::Z).matmul(&pauli(Axis::X)).unwrap(),
    }
}

/// Run the protocol through a two-qubit channel, enumerating all four Bell
/// outcomes with exact probabilities.
///
/// The channel's first qubit belongs to the sender, the second to the
/// receiver. Branches of probability below [`tol::PROBABILITY_FLOOR`] get
/// the maximally mixed output state.
pub fn teleport(
    channel: &DensityOperator,
    input: &UnknownQubit,
    corrections: Corrections,
) -> Result<Vec<TeleportOutcome>> {
    if channel.qubit_count() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "teleportation channel must be 2 qubits, got {}",
            channel.qubit_count()
        )));
    }
    let mut rho = input.density().kron(channel.matrix());
    for gate in [embed(&cnot(), &[1, 2], 3)?, embed(&hadamard(), &[1], 3)?] {
        rho = gate.matmul(&rho)?.matmul(&gate.adjoint())?;
    }

    let mut outcomes = Vec::with_capacity(4);
    let mut total_probability = 0.0;
    for (bits, kind) in OUTCOMES {
        let mut proj = CMatrix::zeros(4, 4);
        proj[(bits, bits)] = ONE;
        let proj = embed(&proj, &[1, 2], 3)?;
        let branch = proj.matmul(&rho)?.matmul(&proj)?;
        let probability = branch.trace()?.re;
        let reduced = linalg::partial_trace(&branch, 3, &[3])?;
        let mut out = if probability > tol::PROBABILITY_FLOOR {
            reduced.scale(Complex::new(1.0 / probability, 0.0))
        } else {
            CMatrix::identity(2).scale(Complex::new(0.5, 0.0))
        };
        if corrections == Corrections::On {
            let g = correction_for(kind);
            out = g.matmul(&out)?.matmul(&g.adjoint())?;
        }
        let output_state = DensityOperator::new(1, out)?;
        let fidelity_standard = fidelity_standard(input, &output_state);
        let fidelity_paper = fidelity_paper(input, &output_state);
        if !(0.0..=1.0 + tol::RANGE_SLACK).contains(&fidelity_standard) {
            return Err(Error::InvariantViolation(format!(
                "fidelity {fidelity_standard} outside [0, 1]"
            )));
        }
        total_probability += probability;
        outcomes.push(TeleportOutcome {
            bell_outcome: kind,
            probability,
            output_state,
            fidelity_paper,
            fidelity_standard,
        });
    }
    if (total_probability - 1.0).abs() > tol::PROBABILITY_SUM {
        return Err(Error::InvariantViolation(format!(
            "outcome probabilities sum to {total_probability}, expected 1"
        )));
    }
    Ok(outcomes)
}

/// Bloch components of a single-qubit density operator, in the same
/// component convention as [`UnknownQubit::bloch`] so dot products between
/// the two are meaningful.
fn bloch_of(rho: &DensityOperator) -> [f64; 3] {
    let m = rho.matrix();
    let sx = (m[(0, 1)] + m[(1, 0)]).re;
    let sy = (linalg::I * (m[(1, 0)] - m[(0, 1)])).re;
    let sz = (m[(0, 0)] - m[(1, 1)]).re;
    [sx, sy, sz]
}

/// Overlap fidelity <psi_u| rho |psi_u> = (1 + s_u . s_t)/2, in [0, 1].
pub fn fidelity_standard(input: &UnknownQubit, output: &DensityOperator) -> f64 {
    debug_assert_eq!(output.qubit_count(), 1);
    let v = [input.alpha, input.beta];
    let m = output.matrix();
    let mut acc = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Literal evaluation of the quarter-prefactor form (1 + s_u . s_t)/4.
///
/// Reported alongside [`fidelity_standard`] for transparency; it reads 1/2
/// for a perfectly teleported pure state, so it is never used for
/// acceptance decisions.
pub fn fidelity_paper(input: &UnknownQubit, output: &DensityOperator) -> f64 {
    let su = input.bloch();
    let st = bloch_of(output);
    0.25 * (1.0 + su[0] * st[0] + su[1] * st[1] + su[2] * st[2])
}

const SWAP_ENTRIES: [usize; 4] = [0, 2, 1, 3];

/// The channel between `route.0` (sender side) and `route.1` (receiver
/// side) at the network's current state.
pub fn route_channel(net: &NetworkState, route: (usize, usize)) -> Result<DensityOperator> {
    let (i, j) = route;
    if i == j || i == 0 || j == 0 || i > net.node_count() || j > net.node_count() {
        return Err(Error::InvalidArgument(format!(
            "route ({i}, {j}) invalid for {} nodes",
            net.node_count()
        )));
    }
    let channel = crate::dmnet::reduced(net, &[i.min(j), i.max(j)])?;
    if i < j {
        return Ok(channel);
    }
    // reduction orders qubits ascending; swap the factors for reversed routes
    let mut swap = CMatrix::zeros(4, 4);
    for (r, &cpos) in SWAP_ENTRIES.iter().enumerate() {
        swap[(r, cpos)] = ONE;
    }
    let m = swap.matmul(channel.matrix())?.matmul(&swap)?;
    DensityOperator::new(2, m)
}

/// Average teleportation fidelity (corrections on, probability-weighted
/// over outcomes) along one route, per grid time.
pub fn fidelity_series(
    net0: &NetworkState,
    c: &DMCoupling,
    t_grid: &[f64],
    route: (usize, usize),
    input: &UnknownQubit,
) -> Result<SweepResult> {
    fidelity_series_with(net0, c, t_grid, route, |channel| {
        Ok(average_fidelity(&teleport(
            channel,
            input,
            Corrections::On,
        )?))
    })
}

/// Shared sweep core; `eval` turns each channel into one fidelity figure.
pub(crate) fn fidelity_series_with(
    net0: &NetworkState,
    c: &DMCoupling,
    t_grid: &[f64],
    route: (usize, usize),
    mut eval: impl FnMut(&DensityOperator) -> Result<f64>,
) -> Result<SweepResult> {
    crate::entmeas::validate_grid(t_grid)?;
    let axis_suffix = c
        .single_axis()
        .map(|(a, _)| a.label().to_string())
        .unwrap_or_default();
    let columns = vec![
        "t".to_string(),
        format!("F_{}{}{}", route.0, route.1, axis_suffix),
    ];
    let prop = crate::dmnet::Propagator::new(c, net0.node_count())?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let psi = prop.state_at(net0.psi(), t)?;
        let net = NetworkState::from_state(psi);
        let channel = route_channel(&net, route)?;
        let f = eval(&channel)?;
        if !(0.0..=1.0 + tol::RANGE_SLACK).contains(&f) {
            return Err(Error::InvariantViolation(format!(
                "fidelity {f} outside [0, 1] at t = {t}"
            )));
        }
        rows.push(vec![t, f]);
    }
    Ok(SweepResult::new(columns, rows, Manifest::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmnet::initial_network;
    use crate::qstate::{bell_state, density_from};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn phi_plus_channel() -> DensityOperator {
        density_from(&bell_state(BellKind::PhiPlus)).unwrap()
    }

    fn werner(p: f64) -> DensityOperator {
        let phi = phi_plus_channel();
        let m = phi
            .matrix()
            .scale(Complex::new(p, 0.0))
            .add(&CMatrix::identity(4).scale(Complex::new((1.0 - p) / 4.0, 0.0)))
            .unwrap();
        DensityOperator::new(2, m).unwrap()
    }

    #[test]
    fn unknown_qubit_validation_and_bloch() {
        assert!(UnknownQubit::new(ONE, ONE).is_err());
        assert!(UnknownQubit::from_alpha_squared(1.2).is_err());
        let q = UnknownQubit::from_alpha_squared(0.7).unwrap();
        let [sx, sy, sz] = q.bloch();
        assert!((sx - 2.0 * (0.7f64 * 0.3).sqrt()).abs() < 1e-14);
        assert!(sy.abs() < 1e-15);
        assert!((sz - 0.4).abs() < 1e-14);
        // |s| = 1 for any pure input
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let q = UnknownQubit::sample_uniform(&mut rng);
            let [sx, sy, sz] = q.bloch();
            assert!((sx * sx + sy * sy + sz * sz - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_channel_reproduces_every_input_on_every_outcome() {
        let channel = phi_plus_channel();
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let input = UnknownQubit::sample_uniform(&mut rng);
            let outcomes = teleport(&channel, &input, Corrections::On).unwrap();
            assert_eq!(outcomes.len(), 4);
            for o in &outcomes {
                assert!((o.probability - 0.25).abs() < 1e-12);
                assert!((o.fidelity_standard - 1.0).abs() <= tol::TELEPORT_EXACT);
                assert!((o.fidelity_paper - 0.5).abs() <= tol::TELEPORT_EXACT);
            }
            assert!((average_fidelity(&outcomes) - 1.0).abs() <= tol::TELEPORT_EXACT);
        }
    }

    #[test]
    fn useless_channel_outputs_maximally_mixed() {
        let channel = DensityOperator::maximally_mixed(2);
        let input = UnknownQubit::from_alpha_squared(0.7).unwrap();
        let outcomes = teleport(&channel, &input, Corrections::On).unwrap();
        for o in &outcomes {
            let m = o.output_state.matrix();
            assert!((m[(0, 0)].re - 0.5).abs() < 1e-12);
            assert!(m[(0, 1)].norm() < 1e-12);
            assert!((o.fidelity_standard - 0.5).abs() <= tol::TELEPORT_EXACT);
            assert!((o.fidelity_paper - 0.25).abs() <= tol::TELEPORT_EXACT);
        }
        assert!((average_fidelity(&outcomes) - 0.5).abs() <= tol::TELEPORT_EXACT);
    }

    #[test]
    fn werner_channel_is_linear_in_p_for_a_fixed_input() {
        // teleportation is linear in the channel, so a fixed input sees
        // p * 1 + (1 - p)/2 exactly; also checks monotonicity in p
        let input = UnknownQubit::from_alpha_squared(0.7).unwrap();
        let mut prev = -1.0;
        for k in 0..=10 {
            let p = 0.1 * k as f64;
            let outcomes = teleport(&werner(p), &input, Corrections::On).unwrap();
            let favg = average_fidelity(&outcomes);
            assert!((favg - (1.0 + p) / 2.0).abs() <= 1e-12, "p={p}: {favg}");
            assert!(favg >= prev);
            prev = favg;
        }
    }

    #[test]
    fn corrections_off_halves_the_perfect_channel() {
        // without the conditional Pauli only the phi+ branch survives
        // intact and the average collapses to 1/2 for every pure input
        let channel = phi_plus_channel();
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..20 {
            let input = UnknownQubit::sample_uniform(&mut rng);
            let outcomes = teleport(&channel, &input, Corrections::Off).unwrap();
            assert!((outcomes[0].fidelity_standard - 1.0).abs() <= 1e-12);
            assert!((average_fidelity(&outcomes) - 0.5).abs() <= 1e-12);
        }
    }

    #[test]
    fn probabilities_sum_to_one_for_random_channels() {
        let mut rng = StdRng::seed_from_u64(31);
        let net = initial_network(&[BellKind::PhiPlus, BellKind::PhiPlus]);
        for t in [0.4, 1.9, 5.2] {
            let c = DMCoupling::along(Axis::X, 0.2, (2, 3));
            let evolved =
                crate::dmnet::evolve(&net, &c, t, crate::dmnet::EvolutionMethod::Oracle).unwrap();
            let channel = route_channel(&evolved, (1, 2)).unwrap();
            let input = UnknownQubit::sample_uniform(&mut rng);
            let outcomes = teleport(&channel, &input, Corrections::On).unwrap();
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() <= tol::PROBABILITY_SUM);
        }
    }

    #[test]
    fn fidelity_formula_cases() {
        let input = UnknownQubit::from_alpha_squared(0.7).unwrap();
        let same = DensityOperator::new(1, input.density()).unwrap();
        assert!((fidelity_standard(&input, &same) - 1.0).abs() < 1e-14);
        assert!((fidelity_paper(&input, &same) - 0.5).abs() < 1e-14);

        let orth = UnknownQubit::new(
            Complex::new((0.3f64).sqrt(), 0.0),
            Complex::new(-(0.7f64).sqrt(), 0.0),
        )
        .unwrap();
        let orth_rho = DensityOperator::new(1, orth.density()).unwrap();
        assert!(fidelity_standard(&input, &orth_rho).abs() < 1e-14);
        assert!(fidelity_paper(&input, &orth_rho).abs() < 1e-14);

        let mixed = DensityOperator::maximally_mixed(1);
        assert!((fidelity_standard(&input, &mixed) - 0.5).abs() < 1e-14);
        assert!((fidelity_paper(&input, &mixed) - 0.25).abs() < 1e-14);

        // the conventions agree for complex inputs too
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..50 {
            let q = UnknownQubit::sample_uniform(&mut rng);
            let rho = DensityOperator::new(1, q.density()).unwrap();
            assert!((fidelity_standard(&q, &rho) - 1.0).abs() < 1e-12);
            assert!((fidelity_paper(&q, &rho) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn route_channels_at_time_zero() {
        let net = initial_network(&[BellKind::PhiPlus, BellKind::PhiPlus]);
        let input = UnknownQubit::from_alpha_squared(0.7).unwrap();
        // intra-pair route: perfect channel
        let ch12 = route_channel(&net, (1, 2)).unwrap();
        let f = average_fidelity(&teleport(&ch12, &input, Corrections::On).unwrap());
        assert!((f - 1.0).abs() <= tol::TELEPORT_EXACT);
        // cross-pair route: maximally mixed channel, the classical baseline
        let ch23 = route_channel(&net, (2, 3)).unwrap();
        let f = average_fidelity(&teleport(&ch23, &input, Corrections::On).unwrap());
        assert!((f - 0.5).abs() <= tol::TELEPORT_EXACT);
        // reversed routes swap the channel factors consistently
        let ch21 = route_channel(&net, (2, 1)).unwrap();
        let f = average_fidelity(&teleport(&ch21, &input, Corrections::On).unwrap());
        assert!((f - 1.0).abs() <= tol::TELEPORT_EXACT);
        assert!(route_channel(&net, (1, 5)).is_err());
    }

    #[test]
    fn fidelity_series_frozen_values() {
        let net = initial_network(&[BellKind::PhiPlus, BellKind::PhiPlus]);
        let c = DMCoupling::along(Axis::X, 0.2, (2, 3));
        let input = UnknownQubit::from_alpha_squared(0.7).unwrap();
        let grid: Vec<f64> = (0..=50).map(|k| 0.05 * k as f64).collect();
        let series = fidelity_series(&net, &c, &grid, (1, 2), &input).unwrap();
        assert_eq!(series.columns(), &["t", "F_12x"]);
        assert!((series.rows()[0][1] - 1.0).abs() <= tol::TELEPORT_EXACT);
        // frozen oracle value at t = 2.5
        assert!((series.rows()[50][1] - 0.6658333487945511).abs() < 1e-9);
    }
}

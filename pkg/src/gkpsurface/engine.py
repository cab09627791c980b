"""Shift-noise propagation through one stabilizer-measurement cycle.

Only the additive quadrature noise is simulated (the encoded state never
appears); for Gaussian shift noise this frame is exact.  One cycle is:

* two GKP half-rounds in which every data mode has its position and its
  momentum measured against a fresh ancilla (odd-index qubits start with
  position, even-index with momentum, swapping in the second half), with
  the measured residue subtracted from the data noise, and
* one surface-code round of four gate steps driven by the layout
  schedule, ending in syndrome homodyne measurements.

All state arrays may carry leading batch dimensions; every update is
elementwise or fancy-indexed on the last axis, so a single code path
serves both per-trial simulation and the vectorized variance estimates.

Noise injections follow the incoherent displacement model: preparation
noise (variance sigma_gkp^2 on fresh ancilla/syndrome modes, sigma^2 on
data), correlated two-mode gate noise with covariance
sigma^2*[[1, +-1/2], [+-1/2, 4/3]] in position (control, target) and the
transposed-diagonal form in momentum, idle noise sigma^2 per step, and
measurement noise sigma^2 before every homodyne read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gkpmath import SQRT_PI, centered_mod_array
from .layout import N_STEPS, X_STEP_SIGN, CodeLayout

# Cholesky factors of the unit-sigma gate-noise covariances.
_CQ = math.sqrt(13.0 / 12.0)  # [[1, s/2], [s/2, 4/3]] second pivot
_CP1 = 2.0 / math.sqrt(3.0)  # [[4/3, -s/2], [-s/2, 1]] first pivot
_CP2 = math.sqrt(3.0) / 4.0
_CP3 = math.sqrt(13.0) / 4.0


@dataclass(frozen=True)
class NoiseParams:
    """Noise strengths for one simulation.

    ``sigma_gkp`` is the preparation noise of fresh GKP modes; ``sigma``
    the unified circuit noise (preparation of data, gates, idling and
    measurement all share it).  ``noisy=False`` forces both to zero for
    the trailing ideal round.  ``linearized=True`` disables the modular
    reduction in the error-correction updates so the propagated noise
    stays exactly Gaussian; used only for variance estimation.
    """

    sigma_gkp: float
    sigma: float
    noisy: bool = True
    linearized: bool = False

    def __post_init__(self):
        if self.sigma_gkp < 0 or self.sigma < 0:
            raise ValueError("noise standard deviations must be non-negative")

    @property
    def effective(self) -> tuple[float, float]:
        return (self.sigma_gkp, self.sigma) if self.noisy else (0.0, 0.0)

    def ideal(self) -> "NoiseParams":
        return NoiseParams(self.sigma_gkp, self.sigma, noisy=False, linearized=self.linearized)


@dataclass(eq=False)
class NoiseState:
    """The eight quadrature shift-noise vectors carried through a trial."""

    data_q: np.ndarray
    data_p: np.ndarray
    anc_q: np.ndarray
    anc_p: np.ndarray
    zsynd_q: np.ndarray
    zsynd_p: np.ndarray
    xsynd_q: np.ndarray
    xsynd_p: np.ndarray

    @classmethod
    def zeros(cls, layout: CodeLayout, batch_shape: tuple[int, ...] = ()) -> "NoiseState":
        nd, ns = layout.n_data, layout.n_synd
        return cls(
            data_q=np.zeros(batch_shape + (nd,)),
            data_p=np.zeros(batch_shape + (nd,)),
            anc_q=np.zeros(batch_shape + (nd,)),
            anc_p=np.zeros(batch_shape + (nd,)),
            zsynd_q=np.zeros(batch_shape + (ns,)),
            zsynd_p=np.zeros(batch_shape + (ns,)),
            xsynd_q=np.zeros(batch_shape + (ns,)),
            xsynd_p=np.zeros(batch_shape + (ns,)),
        )

    def bank(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        return {
            "data": (self.data_q, self.data_p),
            "ancilla": (self.anc_q, self.anc_p),
            "zsynd": (self.zsynd_q, self.zsynd_p),
            "xsynd": (self.xsynd_q, self.xsynd_p),
        }[name]


@dataclass(eq=False)
class RoundRecord:
    """Per-round homodyne outcomes feeding the matching graphs.

    ``gkp_residue_*`` are the centered residues actually subtracted from
    the data noise; ``synd_value_*`` the +-1 stabilizer readings and
    ``synd_residue_*`` their analog residues.  The ``raw`` fields keep
    the unreduced homodyne arguments for diagnostics and the variance
    oracle.
    """

    gkp_residue_q: np.ndarray
    gkp_residue_p: np.ndarray
    gkp_raw_q: np.ndarray
    gkp_raw_p: np.ndarray
    synd_value_z: np.ndarray = field(default=None)
    synd_value_x: np.ndarray = field(default=None)
    synd_residue_z: np.ndarray = field(default=None)
    synd_residue_x: np.ndarray = field(default=None)
    synd_raw_z: np.ndarray = field(default=None)
    synd_raw_x: np.ndarray = field(default=None)

    @classmethod
    def empty(cls, layout: CodeLayout, batch_shape: tuple[int, ...] = ()) -> "RoundRecord":
        nd = batch_shape + (layout.n_data,)
        return cls(
            gkp_residue_q=np.zeros(nd),
            gkp_residue_p=np.zeros(nd),
            gkp_raw_q=np.zeros(nd),
            gkp_raw_p=np.zeros(nd),
        )


def _normal(rng: np.random.Generator, sigma: float, shape) -> np.ndarray:
    if sigma == 0.0:
        return np.zeros(shape)
    return rng.normal(0.0, sigma, size=shape)


def _gate_noise_q(rng, sigma: float, sign: int, shape) -> tuple[np.ndarray, np.ndarray]:
    """Correlated position noise (control, target) of a two-mode gate."""
    if sigma == 0.0:
        z = np.zeros(shape)
        return z, z
    u = rng.standard_normal(shape)
    v = rng.standard_normal(shape)
    return sigma * u, sigma * (0.5 * sign * u + _CQ * v)


def _gate_noise_p(rng, sigma: float, sign: int, shape) -> tuple[np.ndarray, np.ndarray]:
    """Correlated momentum noise (control, target) of a two-mode gate."""
    if sigma == 0.0:
        z = np.zeros(shape)
        return z, z
    u = rng.standard_normal(shape)
    v = rng.standard_normal(shape)
    return sigma * _CP1 * u, sigma * (-_CP2 * sign * u + _CP3 * v)


def apply_two_mode_gate(
    state: NoiseState,
    kind: str,
    control: tuple[str, int],
    target: tuple[str, int],
    params: NoiseParams,
    rng: np.random.Generator,
) -> None:
    """Apply one noisy SUM (``kind='sum'``) or inverse SUM to two modes.

    Modes are addressed as (bank, index) with banks ``data``,
    ``ancilla``, ``zsynd`` and ``xsynd``.  The ideal action for the
    plain gate is q_target += q_control, p_control -= p_target; the
    inverse gate flips both signs.
    """
    if kind not in ("sum", "inverse_sum"):
        raise ValueError(f"kind must be 'sum' or 'inverse_sum', got {kind!r}")
    if control == target:
        raise ValueError("control and target must be distinct modes")
    sign = 1 if kind == "sum" else -1
    cq, cp = state.bank(control[0])
    tq, tp = state.bank(target[0])
    ci, ti = control[1], target[1]
    _, sigma = params.effective
    tq[..., ti] += sign * cq[..., ci]
    cp[..., ci] -= sign * tp[..., ti]
    shape = cq[..., ci].shape
    nc, nt = _gate_noise_q(rng, sigma, sign, shape)
    cq[..., ci] += nc
    tq[..., ti] += nt
    nc, nt = _gate_noise_p(rng, sigma, sign, shape)
    cp[..., ci] += nc
    tp[..., ti] += nt


def _reduce(values: np.ndarray, linearized: bool) -> np.ndarray:
    return values.copy() if linearized else centered_mod_array(values, SQRT_PI)


def gkp_half_round(
    state: NoiseState,
    layout: CodeLayout,
    step: int,
    params: NoiseParams,
    rng: np.random.Generator,
    record: RoundRecord,
) -> None:
    """One GKP stabilizer measurement step (1 or 2) on every data mode.

    Step 1 measures position for odd-index qubits and momentum for
    even-index ones; step 2 swaps the roles.  Measured residues are
    recorded and subtracted from the data noise.
    """
    if step not in (1, 2):
        raise ValueError(f"step must be 1 or 2, got {step}")
    sigma_gkp, sigma = params.effective
    nd = layout.n_data
    odd = np.arange(nd) % 2 == 0  # 1-based odd indices
    q_set = odd if step == 1 else ~odd
    p_set = ~q_set

    # Preparation: data accumulates, fresh ancillas overwrite.
    state.data_q += _normal(rng, sigma, state.data_q.shape)
    state.data_p += _normal(rng, sigma, state.data_p.shape)
    state.anc_q[...] = _normal(rng, sigma_gkp, state.anc_q.shape)
    state.anc_p[...] = _normal(rng, sigma_gkp, state.anc_p.shape)

    # Position measurement: data-controlled SUM onto the ancilla.
    shape_q = state.data_q[..., q_set].shape
    state.anc_q[..., q_set] += state.data_q[..., q_set]
    nc, nt = _gate_noise_q(rng, sigma, 1, shape_q)
    state.data_q[..., q_set] += nc
    state.anc_q[..., q_set] += nt
    state.data_p[..., q_set] -= state.anc_p[..., q_set]
    nc, nt = _gate_noise_p(rng, sigma, 1, shape_q)
    state.data_p[..., q_set] += nc
    state.anc_p[..., q_set] += nt

    # Momentum measurement: ancilla-controlled inverse SUM onto data.
    shape_p = state.data_q[..., p_set].shape
    state.data_q[..., p_set] -= state.anc_q[..., p_set]
    nc, nt = _gate_noise_q(rng, sigma, -1, shape_p)
    state.anc_q[..., p_set] += nc
    state.data_q[..., p_set] += nt
    state.anc_p[..., p_set] += state.data_p[..., p_set]
    nc, nt = _gate_noise_p(rng, sigma, -1, shape_p)
    state.anc_p[..., p_set] += nc
    state.data_p[..., p_set] += nt

    # Measurement noise on every mode, then homodyne and correction.
    for arr in (state.data_q, state.data_p, state.anc_q, state.anc_p):
        arr += _normal(rng, sigma, arr.shape)

    raw_q = state.anc_q[..., q_set]
    res_q = _reduce(raw_q, params.linearized)
    state.data_q[..., q_set] -= res_q
    record.gkp_raw_q[..., q_set] = raw_q
    record.gkp_residue_q[..., q_set] = res_q

    raw_p = state.anc_p[..., p_set]
    res_p = _reduce(raw_p, params.linearized)
    state.data_p[..., p_set] -= res_p
    record.gkp_raw_p[..., p_set] = raw_p
    record.gkp_residue_p[..., p_set] = res_p


def surface_round(
    state: NoiseState,
    layout: CodeLayout,
    params: NoiseParams,
    rng: np.random.Generator,
    record: RoundRecord,
) -> None:
    """Steps 3-6 plus homodyne: one surface-code syndrome extraction."""
    sigma_gkp, sigma = params.effective

    state.data_q += _normal(rng, sigma, state.data_q.shape)
    state.data_p += _normal(rng, sigma, state.data_p.shape)
    for arr in (state.zsynd_q, state.zsynd_p, state.xsynd_q, state.xsynd_p):
        arr[...] = _normal(rng, sigma_gkp, arr.shape)

    for t in range(N_STEPS):
        zs = layout.z_steps[t]
        if zs.synd.size:
            shape = state.data_q[..., zs.data].shape
            # Data-controlled SUM onto the Z syndrome.
            state.zsynd_q[..., zs.synd] += state.data_q[..., zs.data]
            nc, nt = _gate_noise_q(rng, sigma, 1, shape)
            state.data_q[..., zs.data] += nc
            state.zsynd_q[..., zs.synd] += nt
            state.data_p[..., zs.data] -= state.zsynd_p[..., zs.synd]
            nc, nt = _gate_noise_p(rng, sigma, 1, shape)
            state.data_p[..., zs.data] += nc
            state.zsynd_p[..., zs.synd] += nt
        xs = layout.x_steps[t]
        sign = X_STEP_SIGN[t]
        if xs.synd.size:
            shape = state.data_q[..., xs.data].shape
            # Syndrome-controlled SUM (or inverse) onto the data.
            state.data_q[..., xs.data] += sign * state.xsynd_q[..., xs.synd]
            nc, nt = _gate_noise_q(rng, sigma, sign, shape)
            state.xsynd_q[..., xs.synd] += nc
            state.data_q[..., xs.data] += nt
            state.xsynd_p[..., xs.synd] -= sign * state.data_p[..., xs.data]
            nc, nt = _gate_noise_p(rng, sigma, sign, shape)
            state.xsynd_p[..., xs.synd] += nc
            state.data_p[..., xs.data] += nt
        # Idle noise on uncoupled modes.
        for arr, idx in (
            (state.data_q, zs.idle_data),
            (state.data_p, zs.idle_data),
            (state.zsynd_q, zs.idle_synd),
            (state.zsynd_p, zs.idle_synd),
            (state.xsynd_q, xs.idle_synd),
            (state.xsynd_p, xs.idle_synd),
        ):
            if idx.size:
                arr[..., idx] += _normal(rng, sigma, arr[..., idx].shape)

    for arr in (
        state.data_q,
        state.data_p,
        state.zsynd_q,
        state.zsynd_p,
        state.xsynd_q,
        state.xsynd_p,
    ):
        arr += _normal(rng, sigma, arr.shape)

    raw_z = state.zsynd_q.copy()
    raw_x = state.xsynd_p.copy()
    record.synd_raw_z = raw_z
    record.synd_raw_x = raw_x
    half = 0.5 * SQRT_PI
    record.synd_value_z = np.where(
        np.abs(centered_mod_array(raw_z, 2.0 * SQRT_PI)) <= half, 1, -1
    )
    record.synd_value_x = np.where(
        np.abs(centered_mod_array(raw_x, 2.0 * SQRT_PI)) <= half, 1, -1
    )
    record.synd_residue_z = centered_mod_array(raw_z, SQRT_PI)
    record.synd_residue_x = centered_mod_array(raw_x, SQRT_PI)


def run_cycle(
    state: NoiseState,
    layout: CodeLayout,
    params: NoiseParams,
    rng: np.random.Generator,
) -> RoundRecord:
    """One full measurement cycle: both GKP steps plus the surface round."""
    batch_shape = state.data_q.shape[:-1]
    record = RoundRecord.empty(layout, batch_shape)
    gkp_half_round(state, layout, 1, params, rng, record)
    gkp_half_round(state, layout, 2, params, rng, record)
    surface_round(state, layout, params, rng, record)
    return record

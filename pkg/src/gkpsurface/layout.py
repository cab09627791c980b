"""Rotated surface-code geometry over GKP qubits.

Data qubits are numbered 1..d^2 row-major on a d x d grid.  Stabilizer
cells live on the dual lattice: cell (i, j) with 0 <= i, j <= d covers
the data qubits at grid rows {i, i+1} and columns {j, j+1} that exist.
Cells with i+j odd measure Z-type (position-sum) parities and carry
their weight-2 halves on the west/east sides; cells with i+j even
measure X-type parities with halves on the north/south sides.

Z-type syndromes are numbered in row-major reading order and X-type
syndromes in column-major (transposed) order; this is the indexing under
which the piecewise effective-noise tables of the matching graphs select
the correct boundary cases for every distance.

Gate slots: each syndrome interacts with its neighbors in four time
steps.  Relative to its cell, a Z-type syndrome visits NE, SE, NW, SW in
steps 1..4, and an X-type syndrome visits NE, NW, SE, SW.  X-type gates
are plain two-mode sums in steps 1 and 4 and inverted sums in steps 2
and 3, which puts the inverted gates exactly on the NW/SE diagonal of
every X cell.  That arrangement makes every shift error injected on a
syndrome mode cancel before it can masquerade as a data error on the
opposite-type graph (see :func:`validate_layout`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

N_STEPS = 4

# Cell-relative positions, mapped to gate steps 0..3.
_Z_STEP_OF_POS = {"NE": 0, "SE": 1, "NW": 2, "SW": 3}
_X_STEP_OF_POS = {"NE": 0, "NW": 1, "SE": 2, "SW": 3}

# X-type gate orientation per step: +1 = plain SUM, -1 = inverse SUM.
X_STEP_SIGN = (1, -1, -1, 1)


class LayoutValidationError(ValueError):
    """Raised when noiseless shift propagation fails to cancel."""

    def __init__(self, message: str, offending_pairs: list[tuple[str, int, int, float]]):
        super().__init__(message)
        self.offending_pairs = offending_pairs


def _data_index(d: int, row: int, col: int) -> int:
    return (row - 1) * d + col


def _cell_members(d: int, i: int, j: int) -> dict[str, int]:
    """Present corners of cell (i, j) as position -> 1-based data index."""
    members = {}
    for pos, (r, c) in (("NW", (i, j)), ("NE", (i, j + 1)), ("SW", (i + 1, j)), ("SE", (i + 1, j + 1))):
        if 1 <= r <= d and 1 <= c <= d:
            members[pos] = _data_index(d, r, c)
    return members


def _z_cells(d: int) -> list[tuple[int, int]]:
    cells = []
    for i in range(d + 1):
        for j in range(d + 1):
            if (i + j) % 2 != 1:
                continue
            if 1 <= i <= d - 1 and 1 <= j <= d - 1:
                cells.append((i, j))  # full plaquette
            elif j == 0 and i % 2 == 1 and i <= d - 1:
                cells.append((i, j))  # west half
            elif j == d and i % 2 == 0 and 2 <= i <= d - 1:
                cells.append((i, j))  # east half
    cells.sort(key=lambda ij: (ij[0], ij[1]))  # row-major
    return cells


def _x_cells(d: int) -> list[tuple[int, int]]:
    cells = []
    for i in range(d + 1):
        for j in range(d + 1):
            if (i + j) % 2 != 0:
                continue
            if 1 <= i <= d - 1 and 1 <= j <= d - 1:
                cells.append((i, j))  # full plaquette
            elif i == 0 and j % 2 == 0 and 2 <= j <= d - 1:
                cells.append((i, j))  # north half
            elif i == d and j % 2 == 1 and j <= d - 1:
                cells.append((i, j))  # south half
    cells.sort(key=lambda ij: (ij[1], ij[0]))  # column-major
    return cells


@dataclass(eq=False)
class StepPairs:
    """Precomputed 0-based gate lists for one of the four time steps."""

    synd: np.ndarray  # syndrome indices with a gate this step
    data: np.ndarray  # matching data indices
    idle_synd: np.ndarray  # syndrome indices idling this step
    idle_data: np.ndarray  # filled in by build_layout (needs both types)


@dataclass(eq=False)
class CodeLayout:
    """Immutable description of one distance-d surface-GKP patch."""

    distance: int
    n_data: int
    n_synd: int
    z_supports: tuple[tuple[int, ...], ...]
    x_supports: tuple[tuple[int, ...], ...]
    # schedule[t][ell] = 1-based data index gated in step t+1, or 0 if idle
    z_schedule: tuple[tuple[int, ...], ...]
    x_schedule: tuple[tuple[int, ...], ...]
    # x_gate_sign[t][ell] = +1 plain / -1 inverse, 0 when idle
    x_gate_sign: tuple[tuple[int, ...], ...]
    z_boundary_sides: tuple[str, str]
    x_boundary_sides: tuple[str, str]
    # graph structure: 0-based syndrome cells touching each data qubit
    z_cells_of_data: tuple[tuple[int, ...], ...]
    x_cells_of_data: tuple[tuple[int, ...], ...]
    z_steps: list[StepPairs] = field(repr=False)
    x_steps: list[StepPairs] = field(repr=False)

    def describe(self) -> dict:
        """Deterministic JSON-ready description (golden-test friendly)."""
        return {
            "distance": self.distance,
            "n_data": self.n_data,
            "n_synd_each": self.n_synd,
            "z_supports": [list(s) for s in self.z_supports],
            "x_supports": [list(s) for s in self.x_supports],
            "z_schedule": [list(s) for s in self.z_schedule],
            "x_schedule": [list(s) for s in self.x_schedule],
            "x_gate_sign": [list(s) for s in self.x_gate_sign],
            "z_boundary_sides": list(self.z_boundary_sides),
            "x_boundary_sides": list(self.x_boundary_sides),
        }

    def to_json(self) -> str:
        return json.dumps(self.describe(), indent=2, sort_keys=True)


def build_layout(distance: int) -> CodeLayout:
    """Construct the layout, supports and 4-step schedule for ``distance``."""
    d = int(distance)
    if d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be an odd integer >= 3, got {distance}")
    n_data = d * d
    n_synd = (d * d - 1) // 2

    z_cells = _z_cells(d)
    x_cells = _x_cells(d)
    assert len(z_cells) == n_synd and len(x_cells) == n_synd

    z_members = [_cell_members(d, i, j) for (i, j) in z_cells]
    x_members = [_cell_members(d, i, j) for (i, j) in x_cells]

    z_supports = tuple(tuple(sorted(m.values())) for m in z_members)
    x_supports = tuple(tuple(sorted(m.values())) for m in x_members)

    z_sched = np.zeros((N_STEPS, n_synd), dtype=int)
    x_sched = np.zeros((N_STEPS, n_synd), dtype=int)
    x_sign = np.zeros((N_STEPS, n_synd), dtype=int)
    for ell, members in enumerate(z_members):
        for pos, k in members.items():
            z_sched[_Z_STEP_OF_POS[pos], ell] = k
    for ell, members in enumerate(x_members):
        for pos, k in members.items():
            t = _X_STEP_OF_POS[pos]
            x_sched[t, ell] = k
            x_sign[t, ell] = X_STEP_SIGN[t]

    z_cells_of_data = [[] for _ in range(n_data)]
    x_cells_of_data = [[] for _ in range(n_data)]
    for ell, sup in enumerate(z_supports):
        for k in sup:
            z_cells_of_data[k - 1].append(ell)
    for ell, sup in enumerate(x_supports):
        for k in sup:
            x_cells_of_data[k - 1].append(ell)

    def _steps(sched: np.ndarray) -> list[StepPairs]:
        out = []
        for t in range(N_STEPS):
            row = sched[t]
            active = np.nonzero(row)[0]
            out.append(
                StepPairs(
                    synd=active.astype(np.intp),
                    data=(row[active] - 1).astype(np.intp),
                    idle_synd=np.nonzero(row == 0)[0].astype(np.intp),
                    idle_data=np.empty(0, dtype=np.intp),
                )
            )
        return out

    z_steps = _steps(z_sched)
    x_steps = _steps(x_sched)
    for t in range(N_STEPS):
        busy = np.zeros(n_data, dtype=bool)
        busy[z_steps[t].data] = True
        busy[x_steps[t].data] = True
        idle = np.nonzero(~busy)[0].astype(np.intp)
        z_steps[t].idle_data = idle
        x_steps[t].idle_data = idle

    layout = CodeLayout(
        distance=d,
        n_data=n_data,
        n_synd=n_synd,
        z_supports=z_supports,
        x_supports=x_supports,
        z_schedule=tuple(tuple(int(v) for v in row) for row in z_sched),
        x_schedule=tuple(tuple(int(v) for v in row) for row in x_sched),
        x_gate_sign=tuple(tuple(int(v) for v in row) for row in x_sign),
        z_boundary_sides=("north", "south"),
        x_boundary_sides=("west", "east"),
        z_cells_of_data=tuple(tuple(c) for c in z_cells_of_data),
        x_cells_of_data=tuple(tuple(c) for c in x_cells_of_data),
        z_steps=z_steps,
        x_steps=x_steps,
    )
    _check_structure(layout)
    return layout


def _check_structure(layout: CodeLayout) -> None:
    d = layout.distance
    # Supports have even weight and appear once per schedule slot.
    for sched, supports in ((layout.z_schedule, layout.z_supports), (layout.x_schedule, layout.x_supports)):
        for ell, sup in enumerate(supports):
            if len(sup) not in (2, 4):
                raise LayoutValidationError(f"support {sup} has odd weight", [])
            gated = sorted(sched[t][ell] for t in range(N_STEPS) if sched[t][ell] != 0)
            if gated != sorted(sup):
                raise LayoutValidationError(f"schedule misses support members for syndrome {ell}", [])
    # No mode reused within a time step.
    for t in range(N_STEPS):
        used = [k for k in layout.z_schedule[t] if k] + [k for k in layout.x_schedule[t] if k]
        if len(used) != len(set(used)):
            raise LayoutValidationError(f"data qubit reused in step {t + 1}", [])
    # Every data qubit sits in 1 or 2 cells of each type; bulk in 2.
    for k in range(1, d * d + 1):
        for cells in (layout.z_cells_of_data[k - 1], layout.x_cells_of_data[k - 1]):
            if not 1 <= len(cells) <= 2:
                raise LayoutValidationError(f"data qubit {k} covered by {len(cells)} cells", [])
    # All stabilizers commute: as shift operators the symplectic product
    # of a Z and an X generator is -pi * (signed overlap); even overlaps
    # with the NW/SE dagger pattern always give a multiple of 2*pi.
    for zsup in layout.z_supports:
        for xsup in layout.x_supports:
            if len(set(zsup) & set(xsup)) % 2 != 0:
                raise LayoutValidationError("stabilizer pair anticommutes", [])


def propagate_unit_shifts(layout: CodeLayout) -> dict[str, np.ndarray]:
    """Noiseless shift propagation through steps 3-6 of one cycle.

    Returns the response matrices of syndrome homodyne values to unit
    shifts injected on the opposite-type syndrome modes at cycle start:
    ``x_to_z[a, b]`` is the net position shift on Z-syndrome ``b`` caused
    by a unit position shift on X-syndrome ``a``; ``z_to_x`` is the
    momentum-sector dual.  A correct schedule cancels every entry.
    """
    n = layout.n_synd
    x_to_z = np.zeros((n, n))
    z_to_x = np.zeros((n, n))
    for a in range(n):
        # Position sector: X-syndrome shifts spread to data via its
        # gates, then into Z-syndromes via theirs.
        dq = np.zeros(layout.n_data)
        zq = np.zeros(n)
        for t in range(N_STEPS):
            xs = layout.x_steps[t]
            sel = xs.synd == a
            dq[xs.data[sel]] += X_STEP_SIGN[t]
            zs = layout.z_steps[t]
            zq[zs.synd] += dq[zs.data]
        x_to_z[a] = zq
        # Momentum sector: Z-syndrome shifts kick back onto data, then
        # into X-syndromes.
        dp = np.zeros(layout.n_data)
        xp = np.zeros(n)
        for t in range(N_STEPS):
            zs = layout.z_steps[t]
            sel = zs.synd == a
            dp[zs.data[sel]] -= 1.0
            xs = layout.x_steps[t]
            xp[xs.synd] -= X_STEP_SIGN[t] * dp[xs.data]
        z_to_x[a] = xp
    return {"x_to_z": x_to_z, "z_to_x": z_to_x}


def validate_layout(layout: CodeLayout) -> dict[str, np.ndarray]:
    """Assert the schedule's cancellation property; return the report.

    Raises :class:`LayoutValidationError` naming every (source syndrome,
    target syndrome) pair with a nonzero propagated shift.
    """
    report = propagate_unit_shifts(layout)
    bad: list[tuple[str, int, int, float]] = []
    for name, matrix in report.items():
        rows, cols = np.nonzero(np.abs(matrix) > 1e-12)
        for a, b in zip(rows.tolist(), cols.tolist()):
            bad.append((name, a, b, float(matrix[a, b])))
    if bad:
        raise LayoutValidationError(
            f"shift propagation does not cancel for {len(bad)} syndrome pairs: {bad[:6]}", bad
        )
    return report


def logical_representatives(layout: CodeLayout) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Minimal logical X (west column) and logical Z (north row) chains.

    Both commute with every stabilizer, have weight d, and share exactly
    one data qubit so the pair anticommutes.
    """
    d = layout.distance
    logical_x = tuple(_data_index(d, r, 1) for r in range(1, d + 1))
    logical_z = tuple(_data_index(d, 1, c) for c in range(1, d + 1))
    return logical_x, logical_z

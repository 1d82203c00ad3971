"""Time evolution of the single-excitation state.

Two independent propagation routes are provided on purpose: the spectral
propagator (exact up to eigensolver precision) and a fixed-step RK4
integrator that never touches the eigendecomposition.  Their agreement is a
standing cross-check on both.

Piecewise-constant control of the inter-resonator coupling g is modelled as
an instantaneous quench: the state is continuous across segment boundaries
while the generator jumps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    DomainError,
    InvalidParameterError,
    ScheduleError,
)
from .model import N_MODES, SystemParams, build_coupling_matrix, params_from_config

_STATE_NORM_TOL = 1e-8
_BOUNDARY_TOL = 1e-9

_ENERGY_CSV_HEADER = "t,E_s1,E_s2,E_s3,E_a1,E_a2,E_a3"


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: ``states[k]`` is the state vector at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        if self.times.ndim != 1 or self.states.shape != (self.times.size, N_MODES):
            raise InvalidParameterError(
                f"trajectory shape mismatch: times {self.times.shape}, states {self.states.shape}"
            )
        for array in (self.times, self.states):
            if array.flags.owndata:
                array.setflags(write=False)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def _check_state(v0) -> np.ndarray:
    v = np.array(v0, dtype=complex)
    if v.shape != (N_MODES,):
        raise InvalidParameterError(f"state must have shape ({N_MODES},), got {v.shape}")
    if not np.all(np.isfinite(v.view(float))):
        raise InvalidParameterError("state contains non-finite amplitudes")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > _STATE_NORM_TOL:
        raise InvalidParameterError(f"state norm {norm} deviates from 1 beyond {_STATE_NORM_TOL}")
    return v


def _check_times(times) -> np.ndarray:
    t = np.array(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise InvalidParameterError("times must be a non-empty 1-d sequence")
    if np.any(np.diff(t) < 0.0):
        raise InvalidParameterError("times must be ascending")
    return t


def evolve_spectral(params: SystemParams, v0, times) -> Trajectory:
    """Propagate with the symmetric eigendecomposition M = V diag(w) V^T.

    v(t) = V exp(-i w t) V^T v0; unitary to eigensolver precision, including
    at spectral degeneracies (V stays orthonormal).
    """
    v = _check_state(v0)
    t = _check_times(times)
    w, vecs = np.linalg.eigh(build_coupling_matrix(params))
    coeffs = vecs.T @ v
    phases = np.exp(-1j * np.outer(t, w))
    states = (phases * coeffs) @ vecs.T
    return Trajectory(times=t, states=states)


def propagator(params: SystemParams, t: float) -> np.ndarray:
    """The unitary U(t) = exp(-i M t) as a dense 6x6 matrix."""
    w, vecs = np.linalg.eigh(build_coupling_matrix(params))
    return (vecs * np.exp(-1j * w * float(t))) @ vecs.T


def evolve_rk4(
    params: SystemParams,
    v0,
    dt: float = 1e-2,
    t_end: float = 2.0 * math.pi,
    norm_tol: float = 1e-6,
) -> Trajectory:
    """Classic fixed-step RK4 integration of d/dt v = -i M v.

    Independent of the spectral route: only the matrix-vector product is
    used.  The trajectory is sampled at every step and lands exactly on
    ``t_end`` (a shorter final step is taken if needed).  If the resulting
    norm drift exceeds ``norm_tol`` the step was too large for the spectral
    radius and AccuracyError is raised.
    """
    v = _check_state(v0)
    if not (dt > 0.0 and math.isfinite(dt)):
        raise InvalidParameterError(f"dt must be positive and finite, got {dt}")
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise InvalidParameterError(f"t_end must be positive and finite, got {t_end}")
    a = -1j * build_coupling_matrix(params)

    def step(state: np.ndarray, h: float) -> np.ndarray:
        k1 = a @ state
        k2 = a @ (state + 0.5 * h * k1)
        k3 = a @ (state + 0.5 * h * k2)
        k4 = a @ (state + h * k3)
        return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    n_full = int(math.floor(t_end / dt + 1e-12))
    remainder = t_end - n_full * dt
    times = [0.0]
    states = [v]
    for k in range(n_full):
        v = step(v, dt)
        times.append((k + 1) * dt)
        states.append(v)
    if remainder > 1e-12:
        v = step(v, remainder)
        times.append(t_end)
        states.append(v)
    else:
        times[-1] = t_end
    trajectory = Trajectory(times=np.array(times), states=np.array(states))
    drift = float(np.max(np.abs(trajectory.norms() - 1.0)))
    if drift > norm_tol:
        raise AccuracyError(
            f"norm drift {drift:.3e} exceeds {norm_tol:.1e}; reduce dt={dt} for this spectral radius"
        )
    return trajectory


@dataclass(frozen=True)
class Segment:
    """One piece of a piecewise-constant coupling schedule."""

    t_start: float
    t_end: float
    g: float


@dataclass(frozen=True)
class Schedule:
    """Ordered, contiguous g(t) segments over a fixed base parameter set.

    Only g is scheduled; delta, f1, f2 come from ``base`` and are held fixed.
    """

    segments: tuple[Segment, ...]
    base: SystemParams

    def __post_init__(self):
        if not self.segments:
            raise ScheduleError("schedule needs at least one segment")
        previous_end = None
        for seg in self.segments:
            if not (math.isfinite(seg.t_start) and math.isfinite(seg.t_end)):
                raise ScheduleError(f"segment times must be finite: {seg}")
            if seg.t_end <= seg.t_start:
                raise ScheduleError(f"segment must have t_end > t_start: {seg}")
            if not (math.isfinite(seg.g) and seg.g >= 0.0):
                raise ScheduleError(f"segment coupling must be finite and >= 0: {seg}")
            if previous_end is not None and abs(seg.t_start - previous_end) > _BOUNDARY_TOL:
                raise ScheduleError(
                    f"segments must be contiguous: gap/overlap between t={previous_end} and {seg}"
                )
            previous_end = seg.t_end

    @property
    def t_start(self) -> float:
        return self.segments[0].t_start

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end

    def params_for(self, segment: Segment) -> SystemParams:
        return self.base.replace(g=segment.g)


def schedule_from_json(text: str, base: SystemParams | None = None) -> Schedule:
    """Load a schedule from JSON.

    Accepts either an object {"base": {...}, "segments": [...]} or a bare
    segments array (then ``base`` must be supplied).  Each segment is an
    object {"t_start": ..., "t_end": ..., "g": ...}; the base object uses the
    flat parameter keys g, delta, f1, f2 and optional omega0.
    """
    data = json.loads(text)
    if isinstance(data, dict):
        raw_segments = data.get("segments")
        if raw_segments is None:
            raise ScheduleError("schedule JSON object must contain a 'segments' array")
        if "base" in data:
            base_obj = data["base"]
            config = "\n".join(f"{k} = {v}" for k, v in base_obj.items())
            base = params_from_config(config)
    elif isinstance(data, list):
        raw_segments = data
    else:
        raise ScheduleError("schedule JSON must be an object or an array of segments")
    if base is None:
        raise ScheduleError("schedule has no base parameters (none embedded, none supplied)")
    try:
        segments = tuple(
            Segment(t_start=float(s["t_start"]), t_end=float(s["t_end"]), g=float(s["g"]))
            for s in raw_segments
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScheduleError(f"malformed segment entry: {exc}") from exc
    return Schedule(segments=segments, base=base)


def evolve_schedule(schedule: Schedule, v0, times) -> Trajectory:
    """Spectral propagation under a piecewise-constant coupling.

    Within each segment the propagation is exact; across boundaries the state
    is continuous (instantaneous quench).  ``v0`` is the state at the
    schedule start, and the schedule must cover [start, max(times)].
    """
    v = _check_state(v0)
    t = _check_times(times)
    if t[0] < schedule.t_start - _BOUNDARY_TOL or t[-1] > schedule.t_end + _BOUNDARY_TOL:
        raise ScheduleError(
            f"schedule covers [{schedule.t_start}, {schedule.t_end}] "
            f"but times span [{t[0]}, {t[-1]}]"
        )
    states = np.empty((t.size, N_MODES), dtype=complex)
    cursor = 0
    segment_state = v
    for index, seg in enumerate(schedule.segments):
        w, vecs = np.linalg.eigh(build_coupling_matrix(schedule.params_for(seg)))
        coeffs = vecs.T @ segment_state
        is_last = index == len(schedule.segments) - 1
        upper = seg.t_end + (_BOUNDARY_TOL if is_last else 0.0)
        stop = cursor
        while stop < t.size and (t[stop] < upper if not is_last else t[stop] <= upper):
            stop += 1
        if stop > cursor:
            local = t[cursor:stop] - seg.t_start
            phases = np.exp(-1j * np.outer(local, w))
            states[cursor:stop] = (phases * coeffs) @ vecs.T
            cursor = stop
        # carry the state across the quench boundary
        segment_state = vecs @ (np.exp(-1j * w * (seg.t_end - seg.t_start)) * coeffs)
    return Trajectory(times=t, states=states)


def energies(trajectory: Trajectory) -> np.ndarray:
    """Per-mode energies: columns (t, E_s1, E_s2, E_s3, E_a1, E_a2, E_a3)."""
    table = np.empty((trajectory.times.size, 1 + N_MODES))
    table[:, 0] = trajectory.times
    table[:, 1:] = np.abs(trajectory.states) ** 2
    return table


def _fmt(x: float) -> str:
    return format(x, ".12g")


def energies_to_csv(trajectory: Trajectory) -> str:
    table = energies(trajectory)
    lines = [_ENERGY_CSV_HEADER]
    lines.extend(",".join(_fmt(x) for x in row) for row in table)
    return "\n".join(lines) + "\n"


def plateau_width(trajectory: Trajectory, center: float, threshold: float) -> float:
    """Width of the contiguous window around ``center`` with E_s2 <= threshold.

    A sampling-based diagnostic for the flat-bottomed transfer window: the
    trajectory should be sampled densely (>= 100 points per unit time) around
    the center for the width to be meaningful.
    """
    t = trajectory.times
    if center < t[0] or center > t[-1]:
        raise DomainError(f"center {center} outside trajectory window [{t[0]}, {t[-1]}]")
    e2 = np.abs(trajectory.states[:, 1]) ** 2
    idx = int(np.argmin(np.abs(t - center)))
    if e2[idx] > threshold:
        return 0.0
    lo = idx
    while lo > 0 and e2[lo - 1] <= threshold:
        lo -= 1
    hi = idx
    while hi < t.size - 1 and e2[hi + 1] <= threshold:
        hi += 1
    return float(t[hi] - t[lo])

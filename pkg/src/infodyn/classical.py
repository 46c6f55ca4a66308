"""Chaos degree and Lyapunov exponents for iterated maps.

An orbit is binned into equal-width cells, the one-step transitions
between cells define an empirical stochastic channel, and the chaos
degree of the dynamics is the conditional entropy of that channel
weighted by the source-cell occupation:

    D = -sum_ij p_ij ln(p_ij / p_i).

This equals the decomposition-search chaos degree of the diagonal
density built from the occupation under the stochastic-channel
embedding, which the test suite exercises as a cross-module identity.

Largest Lyapunov exponents come from the analytic Jacobian along the
same orbit: the mean of ln|f'| in one dimension, iterated
Jacobian-vector products with renormalization in two.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import OrbitEscape
from .hilbert import DensityOperator
from .channels import Channel, stochastic_channel
from .metrics import classify_dynamics

DEFAULT_TRANSIENT = 1000
DEFAULT_SAMPLES = 100_000
DEFAULT_BINS = 100
DEFAULT_EPS_ZERO = 1e-3
DEFAULT_EPS_CONST = 1e-3
DEFAULT_WINDOW = 5


@dataclass(frozen=True)
class MapSystem:
    """A parameterized iterated map on a rectangular domain box.

    `step` takes (point tuple, parameter) and returns the next point
    tuple. `jacobian` returns the derivative at a point: a float in one
    dimension, a 2x2 nested tuple in two. The optional scalar_* and
    vector_jacobian fields are fast paths used by the orbit loops when
    present; they must agree with their tuple counterparts.
    """

    name: str
    dim: int
    step: Callable
    box: tuple[tuple[float, float], ...]
    default_x0: tuple[float, ...]
    default_param: float
    jacobian: Callable | None = None
    scalar_step: Callable | None = None
    vector_jacobian: Callable | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"only 1- and 2-dimensional maps are supported, got {self.dim}")
        if len(self.box) != self.dim or len(self.default_x0) != self.dim:
            raise ValueError("box and default_x0 must match the map dimension")


def logistic_map() -> MapSystem:
    """x -> a x (1 - x) on [0, 1]."""
    return MapSystem(
        name="logistic",
        dim=1,
        step=lambda p, a: (a * p[0] * (1.0 - p[0]),),
        box=((0.0, 1.0),),
        default_x0=(0.3,),
        default_param=3.8,
        jacobian=lambda p, a: a * (1.0 - 2.0 * p[0]),
        scalar_step=lambda x, a: a * x * (1.0 - x),
        vector_jacobian=lambda xs, a: a * (1.0 - 2.0 * xs),
    )


def _baker_step(p, a):
    x, y = p
    branch = 1.0 if x >= 0.5 else 0.0
    return (2.0 * x - branch, 0.5 * (y + branch))


def baker_map() -> MapSystem:
    """Stretch-and-fold map of the unit square; the parameter is unused.

    The branch form keeps the endpoint x = 1 inside the square, where
    the textbook `2x mod 1` would fold it to 0.
    """
    return MapSystem(
        name="baker",
        dim=2,
        step=_baker_step,
        box=((0.0, 1.0), (0.0, 1.0)),
        default_x0=(0.3, 0.3),
        default_param=0.0,
        jacobian=lambda p, a: ((2.0, 0.0), (0.0, 0.5)),
    )


def tinkerbell_map(b: float = -0.6013, c: float = 2.0, d: float = 0.5) -> MapSystem:
    """Tinkerbell map with the swept parameter in the first coordinate."""
    return MapSystem(
        name="tinkerbell",
        dim=2,
        step=lambda p, a: (
            p[0] * p[0] - p[1] * p[1] + a * p[0] + b * p[1],
            2.0 * p[0] * p[1] + c * p[0] + d * p[1],
        ),
        box=((-2.0, 2.0), (-2.0, 2.0)),
        default_x0=(-0.72, -0.64),
        default_param=0.9,
        jacobian=lambda p, a: (
            (2.0 * p[0] + a, -2.0 * p[1] + b),
            (2.0 * p[1] + c, 2.0 * p[0] + d),
        ),
    )


BUILTIN_MAPS: dict[str, MapSystem] = {
    "logistic": logistic_map(),
    "baker": baker_map(),
    "tinkerbell": tinkerbell_map(),
}


@dataclass(frozen=True)
class OrbitConfig:
    """Initial point, transient length, sample length, and parameter.

    `x0` and `param` default to the map's own defaults when None.
    """

    x0: tuple[float, ...] | None = None
    transient: int = DEFAULT_TRANSIENT
    samples: int = DEFAULT_SAMPLES
    param: float | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.transient < 0:
            raise ValueError("transient must be nonnegative")
        if self.x0 is not None:
            object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))


def _resolve(system: MapSystem, cfg: OrbitConfig) -> tuple[tuple[float, ...], float]:
    x0 = system.default_x0 if cfg.x0 is None else cfg.x0
    if len(x0) != system.dim:
        raise ValueError(f"x0 has dimension {len(x0)}, map needs {system.dim}")
    a = system.default_param if cfg.param is None else float(cfg.param)
    for v, (lo, hi) in zip(x0, system.box):
        if not lo <= v <= hi:
            raise ValueError(f"x0 component {v} outside box [{lo}, {hi}]")
    return x0, a


def iterate_orbit(system: MapSystem, cfg: OrbitConfig) -> np.ndarray:
    """Post-transient orbit as an array of shape (samples, dim).

    Every step is checked against the domain box; leaving it raises
    OrbitEscape rather than clipping, since clipped points would
    silently corrupt the transition statistics.
    """
    x0, a = _resolve(system, cfg)
    if system.dim == 1 and system.scalar_step is not None:
        return _iterate_scalar(system, x0[0], a, cfg.transient, cfg.samples)

    los = tuple(lo for lo, _ in system.box)
    his = tuple(hi for _, hi in system.box)
    step = system.step
    point = x0
    out = np.empty((cfg.samples, system.dim), dtype=float)
    for t in range(cfg.transient + cfg.samples):
        point = step(point, a)
        for v, lo, hi in zip(point, los, his):
            if not lo <= v <= hi:
                raise OrbitEscape(point, system.box, t)
        if t >= cfg.transient:
            out[t - cfg.transient] = point
    return out


def _iterate_scalar(system: MapSystem, x: float, a: float,
                    transient: int, samples: int) -> np.ndarray:
    lo, hi = system.box[0]
    f = system.scalar_step
    for t in range(transient):
        x = f(x, a)
        if not lo <= x <= hi:
            raise OrbitEscape((x,), system.box, t)
    out = np.empty(samples, dtype=float)
    for t in range(samples):
        x = f(x, a)
        if not lo <= x <= hi:
            raise OrbitEscape((x,), system.box, transient + t)
        out[t] = x
    return out.reshape(-1, 1)


@dataclass(frozen=True)
class Partition:
    """Equal-width binning of a rectangular box, bins per axis.

    Cells are half-open with the top edge closed, so every boundary
    point gets exactly one cell and the box is covered.
    """

    box: tuple[tuple[float, float], ...]
    bins: int = DEFAULT_BINS

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError("bins must be at least 2")
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if any(hi <= lo for lo, hi in box):
            raise ValueError("box intervals must have positive width")
        object.__setattr__(self, "box", box)

    def encode(self, points) -> np.ndarray:
        """Flat cell codes (row-major across axes) for an array of points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != len(self.box):
            raise ValueError(f"points have dimension {pts.shape[1]}, box has {len(self.box)}")
        codes = np.zeros(pts.shape[0], dtype=np.int64)
        for axis, (lo, hi) in enumerate(self.box):
            col = pts[:, axis]
            if np.any(col < lo) or np.any(col > hi):
                raise ValueError(f"points outside box on axis {axis}")
            idx = ((col - lo) * (self.bins / (hi - lo))).astype(np.int64)
            np.minimum(idx, self.bins - 1, out=idx)
            codes = codes * self.bins + idx
        return codes


@dataclass(frozen=True)
class EmpiricalChannel:
    """One-step transition statistics of a binned orbit.

    `cells` lists every visited cell code (as source or destination).
    `occupation` is the source-occupation distribution: dest-only cells
    carry weight zero, and their transition rows (never observed) are
    filled with a self-loop purely to keep the matrix stochastic; they
    contribute nothing to any entropy sum.
    """

    cells: np.ndarray
    occupation: np.ndarray
    pair_positions: np.ndarray  # (m, 2) positions into `cells`
    pair_counts: np.ndarray

    @property
    def size(self) -> int:
        return int(self.cells.size)

    def transition_matrix(self) -> np.ndarray:
        n = self.size
        p = np.zeros((n, n), dtype=float)
        src = self.pair_positions[:, 0]
        dst = self.pair_positions[:, 1]
        p[src, dst] = self.pair_counts
        totals = p.sum(axis=1)
        silent = totals == 0
        p[silent, :] = 0.0
        p[np.where(silent)[0], np.where(silent)[0]] = 1.0
        totals[silent] = 1.0
        return p / totals[:, None]

    def conditional_entropy(self) -> float:
        """-sum_ij p_ij ln(p_ij / p_i), directly from the pair counts."""
        counts = self.pair_counts.astype(float)
        total = counts.sum()
        row_totals = np.zeros(self.size, dtype=float)
        np.add.at(row_totals, self.pair_positions[:, 0], counts)
        return float(np.sum((counts / total) * np.log(row_totals[self.pair_positions[:, 0]] / counts)))

    def as_state_and_channel(self) -> tuple[DensityOperator, Channel]:
        """Diagonal density and stochastic channel over the visited cells."""
        return (
            DensityOperator(np.diag(self.occupation).astype(complex)),
            stochastic_channel(self.transition_matrix()),
        )


def empirical_channel(orbit, partition: Partition) -> EmpiricalChannel:
    """Bin an orbit and count its one-step cell transitions."""
    codes = partition.encode(orbit)
    if codes.size < 2:
        raise ValueError("orbit must contain at least 2 points")
    cells, positions = np.unique(codes, return_inverse=True)
    src, dst = positions[:-1], positions[1:]
    flat = src.astype(np.int64) * cells.size + dst
    unique_pairs, counts = np.unique(flat, return_counts=True)
    pair_positions = np.stack(
        [unique_pairs // cells.size, unique_pairs % cells.size], axis=1
    )
    occupation = np.zeros(cells.size, dtype=float)
    np.add.at(occupation, src, 1.0)
    occupation /= src.size
    return EmpiricalChannel(
        cells=cells,
        occupation=occupation,
        pair_positions=pair_positions,
        pair_counts=counts,
    )


def orbit_chaos_degree(system: MapSystem, cfg: OrbitConfig | None = None,
                       partition: Partition | None = None) -> float:
    """Chaos degree of a map's orbit under the given binning."""
    cfg = cfg or OrbitConfig()
    part = partition or Partition(system.box)
    orbit = iterate_orbit(system, cfg)
    return empirical_channel(orbit, part).conditional_entropy()


def _lyapunov_from_orbit(system: MapSystem, orbit: np.ndarray, a: float) -> float:
    if system.jacobian is None:
        raise ValueError(f"map {system.name!r} has no jacobian")
    if system.dim == 1:
        if system.vector_jacobian is not None:
            derivs = np.abs(np.asarray(system.vector_jacobian(orbit[:, 0], a), dtype=float))
        else:
            derivs = np.abs(np.array([system.jacobian((x,), a) for x in orbit[:, 0]]))
        if np.any(derivs == 0.0):
            return -math.inf
        return float(np.mean(np.log(derivs)))

    jac = system.jacobian
    v0, v1 = 1.0, 0.0
    acc = 0.0
    for x, y in orbit:
        (j00, j01), (j10, j11) = jac((x, y), a)
        w0 = j00 * v0 + j01 * v1
        w1 = j10 * v0 + j11 * v1
        norm = math.hypot(w0, w1)
        if norm == 0.0:
            return -math.inf
        acc += math.log(norm)
        v0, v1 = w0 / norm, w1 / norm
    return acc / orbit.shape[0]


def lyapunov_exponent(system: MapSystem, cfg: OrbitConfig | None = None) -> float:
    """Largest Lyapunov exponent along the post-transient orbit.

    Returns -inf when a sampled derivative vanishes exactly and the
    log-average diverges.
    """
    cfg = cfg or OrbitConfig()
    _, a = _resolve(system, cfg)
    orbit = iterate_orbit(system, cfg)
    return _lyapunov_from_orbit(system, orbit, a)


@dataclass(frozen=True)
class SweepRow:
    param: float
    chaos_degree: float
    lyapunov: float
    label: str


def _point_metrics(system: MapSystem, cfg: OrbitConfig, partition: Partition) -> tuple[float, float]:
    orbit = iterate_orbit(system, cfg)
    _, a = _resolve(system, cfg)
    d = empirical_channel(orbit, partition).conditional_entropy()
    lam = _lyapunov_from_orbit(system, orbit, a)
    return d, lam


def _builtin_point(name: str, param: float, x0, transient: int, samples: int,
                   box, bins: int) -> tuple[float, float]:
    system = BUILTIN_MAPS[name]
    cfg = OrbitConfig(x0=x0, transient=transient, samples=samples, param=param)
    return _point_metrics(system, cfg, Partition(box, bins))


def sweep(system: MapSystem, start: float, stop: float, step: float,
          cfg: OrbitConfig | None = None, partition: Partition | None = None, *,
          eps_zero: float = DEFAULT_EPS_ZERO, eps_const: float = DEFAULT_EPS_CONST,
          window: int = DEFAULT_WINDOW, workers: int = 1) -> list[SweepRow]:
    """Chaos degree and Lyapunov exponent over a parameter range.

    Produces one row per parameter value from `start` to `stop`
    inclusive in increments of `step`, each labeled by classifying the
    trailing `window` of chaos-degree values. Rows are independent and
    are dispatched to a process pool when `workers` exceeds 1 (built-in
    maps only: worker processes rebuild the map by name; a custom
    system falls back to the sequential path). Results are ordered by
    parameter and identical at any worker count.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if stop < start:
        raise ValueError("stop must not precede start")
    if window < 1:
        raise ValueError("window must be at least 1")
    cfg = cfg or OrbitConfig()
    part = partition or Partition(system.box)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    params = [start + k * step for k in range(count)]

    if workers > 1 and BUILTIN_MAPS.get(system.name) is system:
        args = [
            (system.name, a, cfg.x0, cfg.transient, cfg.samples, part.box, part.bins)
            for a in params
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            metrics = list(pool.map(_builtin_point, *zip(*args)))
    else:
        metrics = [
            _point_metrics(system, OrbitConfig(cfg.x0, cfg.transient, cfg.samples, a), part)
            for a in params
        ]

    d_values = [m[0] for m in metrics]
    rows = []
    for i, a in enumerate(params):
        label = classify_dynamics(
            d_values[max(0, i - window + 1):i + 1], eps_zero, eps_const
        )
        rows.append(SweepRow(a, d_values[i], metrics[i][1], label))
    return rows


def default_workers() -> int:
    """Worker count from the INFODYN_THREADS environment variable, else 1."""
    raw = os.environ.get("INFODYN_THREADS", "")
    if not raw:
        return 1
    value = int(raw)
    if value < 1:
        raise ValueError("INFODYN_THREADS must be a positive integer")
    return value


def sweep_to_csv(rows) -> str:
    """CSV text for sweep rows: header a,D,lyapunov,label, 9 significant
    digits, LF line endings."""
    lines = ["a,D,lyapunov,label"]
    for row in rows:
        lines.append(
            f"{row.param:.9g},{row.chaos_degree:.9g},{row.lyapunov:.9g},{row.label}"
        )
    return "\n".join(lines) + "\n"

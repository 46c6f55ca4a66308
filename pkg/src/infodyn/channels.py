"""Channels on finite-dimensional state spaces.

Four concrete families cover everything the rest of the package needs:
Kraus-sum channels, entrywise (Schur) damping by a positive weight
matrix and its trace-normalized variant, unitary conjugation, and the
classical row-stochastic push-forward embedded on diagonal densities.

The normalized variant divides by the trace of the damped output, so it
is nonlinear and partial: inputs whose damped trace vanishes are outside
its domain and raise :class:`~infodyn.exceptions.OutsideDomain`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, OutsideDomain
from .hilbert import DensityOperator, as_density, mult_operator, shift_unitary

PROBABILITY_FLOOR = 1e-12
UNITARY_TOL = 1e-10
CP_EIGENVALUE_TOL = 1e-9


def _square(matrix, name: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class SchurWeight:
    """Positive semidefinite weight for entrywise damping.

    The null matrix is allowed; the weight need not have unit trace.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _square(self.matrix, "weight")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > 1e-8:
            raise ValueError(f"weight is not self-adjoint: deviation {herm:.3e}")
        m = 0.5 * (m + m.conj().T)
        lam = np.linalg.eigvalsh(m)
        if float(lam[0]) < -1e-10:
            raise ValueError(f"weight has negative eigenvalue {float(lam[0]):.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def spectral_terms(self) -> list[tuple[float, np.ndarray]]:
        """One (coefficient, function) pair per positive eigenvalue."""
        lam, vec = np.linalg.eigh(self.matrix)
        return [
            (float(lam[k]), vec[:, k].copy())
            for k in range(self.n)
            if lam[k] > 1e-14
        ]


def as_weight(obj) -> SchurWeight:
    if isinstance(obj, SchurWeight):
        return obj
    return SchurWeight(np.asarray(obj, dtype=complex))


def schur_apply(weight, rho) -> np.ndarray:
    """Entrywise damping of a state by a positive weight matrix.

    The output is positive but in general not of unit trace. Acting
    entrywise is equivalent to the sum of multiplication-operator
    conjugations over any spectral representation of the weight, which
    is exercised by :func:`schur_apply_from_terms`.
    """
    w = as_weight(weight)
    m = rho.matrix if isinstance(rho, DensityOperator) else _square(rho, "state")
    if w.n != m.shape[0]:
        raise DimensionMismatch(f"weight dim {w.n} vs state dim {m.shape[0]}")
    return w.matrix * m


def schur_apply_from_terms(terms, rho) -> np.ndarray:
    """Damping evaluated from an explicit spectral representation.

    `terms` is a sequence of (coefficient, function) pairs. Kept as the
    definitional route; production code uses :func:`schur_apply`.
    """
    m = rho.matrix if isinstance(rho, DensityOperator) else _square(rho, "state")
    out = np.zeros_like(m)
    for gamma, h in terms:
        o = mult_operator(h)
        out = out + gamma * (o @ m @ o.conj().T)
    return out


def schur_channel_apply(weight, rho) -> DensityOperator:
    """Trace-normalized entrywise damping; nonlinear and partial."""
    raw = schur_apply(weight, rho)
    tr = float(raw.trace().real)
    if tr <= PROBABILITY_FLOOR:
        raise OutsideDomain(
            f"damped trace {tr:.3e} is below the probability floor; "
            "state is outside the conditioning domain"
        )
    return DensityOperator(raw / tr)


@dataclass(frozen=True)
class BranchDilation:
    """Isometry splitting a state into a kept and a discarded branch.

    Built from a function h with 0 < ||h|| and |h(k)| <= 1 for all k.
    The first branch modulates by h, the second by sqrt(1 - |h|^2);
    together they stack into an isometric 2n x n matrix, and the
    Heisenberg-picture compression is unital.
    """

    h: np.ndarray
    matrix: np.ndarray = field(init=False)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        if h.ndim != 1:
            raise ValueError(f"h must be a vector, got shape {h.shape}")
        mags = np.abs(h)
        if float(mags.max(initial=0.0)) > 1.0 + 1e-12:
            raise ValueError("h must satisfy |h(k)| <= 1 for all k")
        if float(np.linalg.norm(h)) == 0.0:
            raise ValueError("h must be nonzero")
        n = h.shape[0]
        comp = np.sqrt(np.clip(1.0 - mags**2, 0.0, None))
        t = np.zeros((2 * n, n), dtype=complex)
        t[:n, :] = np.diag(h)
        t[n:, :] = np.diag(comp)
        h = h.copy()
        h.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "matrix", t)

    @property
    def n(self) -> int:
        return self.h.shape[0]

    def complement(self) -> np.ndarray:
        """The second-branch modulation function sqrt(1 - |h|^2)."""
        return np.sqrt(np.clip(1.0 - np.abs(self.h) ** 2, 0.0, None))

    def heisenberg(self, operator) -> np.ndarray:
        """Unital compression t* B t of an operator on the doubled space."""
        b = _square(operator, "operator")
        if b.shape[0] != 2 * self.n:
            raise DimensionMismatch(f"expected dim {2 * self.n}, got {b.shape[0]}")
        return self.matrix.conj().T @ b @ self.matrix

    def _branch_function(self, branch: int) -> np.ndarray:
        if branch == 1:
            return self.h
        if branch == 2:
            return self.complement().astype(complex)
        raise ValueError(f"branch must be 1 or 2, got {branch}")

    def branch_probability(self, rho, branch: int) -> float:
        g = self._branch_function(branch)
        raw = schur_apply(np.outer(g, g.conj()), rho)
        return float(raw.trace().real)

    def branch_state(self, rho, branch: int) -> DensityOperator:
        """Post-measurement state of the selected branch, normalized."""
        g = self._branch_function(branch)
        return schur_channel_apply(np.outer(g, g.conj()), rho)


class Channel:
    """A map from states to states, tagged by construction kind.

    Kinds: "kraus", "schur", "schur_normalized", "unitary", "stochastic".
    All kinds except "schur_normalized" are linear; "schur" is the only
    kind that may fail to preserve trace. `apply` returns a
    DensityOperator for trace-preserving or normalized kinds and a raw
    positive matrix for an unnormalized "schur" channel.
    """

    __slots__ = ("kind", "dim", "is_linear", "is_trace_preserving", "_data")

    def __init__(self, kind, dim, is_linear, is_trace_preserving, data):
        self.kind = kind
        self.dim = int(dim)
        self.is_linear = bool(is_linear)
        self.is_trace_preserving = bool(is_trace_preserving)
        self._data = data

    def __repr__(self):
        return f"Channel(kind={self.kind!r}, dim={self.dim})"

    def apply_matrix(self, m) -> np.ndarray:
        """Linear action on an arbitrary matrix; rejects nonlinear kinds."""
        if not self.is_linear:
            raise ValueError("normalized channels have no linear matrix action")
        x = _square(m, "operand")
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"channel dim {self.dim} vs operand {x.shape[0]}")
        if self.kind == "kraus":
            out = np.zeros_like(x)
            for a in self._data:
                out = out + a @ x @ a.conj().T
            return out
        if self.kind == "schur":
            return self._data.matrix * x
        if self.kind == "unitary":
            u = self._data
            return u @ x @ u.conj().T
        if self.kind == "stochastic":
            return np.diag(np.diagonal(x) @ self._data.astype(complex))
        raise AssertionError(f"unhandled kind {self.kind}")

    def apply(self, rho):
        """Action on a state. See class docstring for the return type."""
        if self.kind == "schur_normalized":
            return schur_channel_apply(self._data, as_density(rho))
        out = self.apply_matrix(as_density(rho).matrix)
        if self.is_trace_preserving:
            return DensityOperator(out)
        return out

    def __call__(self, rho):
        return self.apply(rho)


def kraus_channel(operators) -> Channel:
    """Channel from a Kraus family; requires sum A*A <= identity."""
    ops = [np.asarray(a, dtype=complex) for a in operators]
    if not ops:
        raise ValueError("at least one Kraus operator is required")
    n = ops[0].shape[0]
    for a in ops:
        if a.shape != (n, n):
            raise DimensionMismatch("Kraus operators must share one square shape")
    total = sum(a.conj().T @ a for a in ops)
    gap = total - np.eye(n)
    top = float(np.linalg.eigvalsh(0.5 * (gap + gap.conj().T))[-1])
    if top > 1e-10:
        raise ValueError(f"Kraus sum exceeds identity by {top:.3e}")
    tp = float(np.max(np.abs(gap))) <= 1e-10
    return Channel("kraus", n, is_linear=True, is_trace_preserving=tp, data=ops)


def schur_channel(weight, normalized: bool = False) -> Channel:
    w = as_weight(weight)
    if normalized:
        return Channel("schur_normalized", w.n, is_linear=False,
                       is_trace_preserving=True, data=w)
    diag = np.diagonal(w.matrix).real
    tp = bool(np.max(np.abs(diag - 1.0)) <= 1e-12)
    return Channel("schur", w.n, is_linear=True, is_trace_preserving=tp, data=w)


def unitary_channel(u) -> Channel:
    um = _square(u, "unitary")
    n = um.shape[0]
    dev = float(np.max(np.abs(um.conj().T @ um - np.eye(n))))
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary: deviation {dev:.3e}")
    return Channel("unitary", n, is_linear=True, is_trace_preserving=True, data=um)


def identity_channel(n: int) -> Channel:
    return unitary_channel(np.eye(n, dtype=complex))


def shift_channel(k: int, n: int) -> Channel:
    """Unitary conjugation by the index-shift operator."""
    return unitary_channel(shift_unitary(k, n))


def stochastic_channel(p) -> Channel:
    """Classical push-forward by a row-stochastic matrix.

    Acts on diagonal densities as the distribution map p -> p P and
    extends linearly to all matrices by reading only the diagonal.
    """
    pm = np.asarray(p, dtype=float)
    if pm.ndim != 2 or pm.shape[0] != pm.shape[1]:
        raise ValueError(f"stochastic matrix must be square, got shape {pm.shape}")
    if np.any(pm < -1e-14):
        raise ValueError("stochastic matrix entries must be nonnegative")
    rows = pm.sum(axis=1)
    if float(np.max(np.abs(rows - 1.0))) > 1e-10:
        raise ValueError("stochastic matrix rows must sum to 1")
    pm = np.clip(pm, 0.0, None)
    pm.setflags(write=False)
    return Channel("stochastic", pm.shape[0], is_linear=True,
                   is_trace_preserving=True, data=pm)


def depolarizing_channel(n: int, p: float = 1.0) -> Channel:
    """Mixes a state toward the maximally mixed state with weight p.

    Realized as a Kraus family of discrete Weyl (shift and clock)
    unitaries; p = 1 sends every state exactly to identity / n.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight must be in [0, 1], got {p}")
    omega = np.exp(2j * np.pi / n)
    clock = np.diag(omega ** np.arange(n))
    step = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    ops = []
    for a in range(n):
        for b in range(n):
            coeff = 1.0 - p + p / n**2 if a == 0 and b == 0 else p / n**2
            if coeff <= 0.0:
                continue
            ops.append(np.sqrt(coeff) * (np.linalg.matrix_power(step, a) @
                                         np.linalg.matrix_power(clock, b)))
    return kraus_channel(ops)


def random_kraus_channel(n: int, terms: int, rng: np.random.Generator) -> Channel:
    """Random trace-preserving channel with the given Kraus rank."""
    if terms < 1:
        raise ValueError("terms must be positive")
    blocks = rng.normal(size=(terms * n, n)) + 1j * rng.normal(size=(terms * n, n))
    q, _ = np.linalg.qr(blocks)
    # Columns of q are orthonormal in C^(terms*n), so the stacked blocks
    # satisfy the trace-preservation identity exactly.
    ops = [q[k * n:(k + 1) * n, :] for k in range(terms)]
    return kraus_channel(ops)


@dataclass(frozen=True)
class CompletePositivityReport:
    is_cp: bool
    min_eigenvalue: float
    hermiticity_error: float


def choi_matrix(channel, dim: int | None = None) -> np.ndarray:
    """Choi matrix assembled column by column from matrix units."""
    if isinstance(channel, Channel):
        if not channel.is_linear:
            raise ValueError("Choi matrix is defined only for linear channels")
        n = channel.dim
        action = channel.apply_matrix
    else:
        if dim is None:
            raise ValueError("dim is required for a bare callable")
        n = int(dim)
        action = channel
    c = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            unit = np.zeros((n, n), dtype=complex)
            unit[a, b] = 1.0
            c += np.kron(unit, np.asarray(action(unit), dtype=complex))
    return c


def choi_check(channel, dim: int | None = None) -> CompletePositivityReport:
    """Complete-positivity test via the spectrum of the Choi matrix."""
    c = choi_matrix(channel, dim)
    herm = float(np.max(np.abs(c - c.conj().T)))
    if herm > 1e-8:
        return CompletePositivityReport(False, float("nan"), herm)
    lam = np.linalg.eigvalsh(0.5 * (c + c.conj().T))
    low = float(lam[0])
    return CompletePositivityReport(low >= -CP_EIGENVALUE_TOL, low, herm)

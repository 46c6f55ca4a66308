"""Selective memory-update channels driven by joint measurements.

The model couples three copies of an n-dimensional space: a processing
register carrying an incoming signal state, the memory before the
update, and the memory after it. A family of n^2 rank-one projections,
built from a signal basis and cyclic shifts of a maximally entangled
vector, measures the first two factors jointly; conditioning on an
outcome (i, j) and tracing the measured factors leaves the updated
memory state.

Three algebraically equal routes to that update are implemented
independently and kept apart on purpose: a contraction of the measured
operator (`update_direct`), a rank-one expansion over the spectra of
signal and memory (`update_spectral`), and a composition of an
entrywise conditioning, a shift, and a second conditioning
(`update_composed`). Their agreement is a test target, so none of them
may borrow another's arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import PROBABILITY_FLOOR, schur_channel_apply
from .exceptions import DimensionMismatch, OutsideDomain, ZeroProbabilityOutcome
from .hilbert import (
    DensityOperator,
    as_density,
    diag_embedding,
    shift_unitary,
    von_neumann_entropy,
)

BASIS_TOL = 1e-12


class SignalBasis:
    """Orthonormal family of n signal vectors in C^n.

    Row k of `vectors` is the k-th signal. `uniform_modulus` records
    whether every signal has constant component modulus, which is what
    makes the first conditioning stage of the composed update total.
    """

    __slots__ = ("vectors", "kind", "uniform_modulus")

    def __init__(self, vectors, kind: str = "custom"):
        v = np.asarray(vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"basis must be a square matrix of rows, got {v.shape}")
        gram = v.conj() @ v.T
        err = float(np.max(np.abs(gram - np.eye(v.shape[0]))))
        if err > BASIS_TOL:
            raise ValueError(f"rows are not orthonormal: Gram error {err:.3e}")
        mags = np.abs(v)
        uniform = bool(np.max(mags.max(axis=1) - mags.min(axis=1)) <= BASIS_TOL)
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "uniform_modulus", uniform)

    def __setattr__(self, name, value):
        raise AttributeError("SignalBasis is immutable")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def fourier(cls, n: int) -> "SignalBasis":
        m = np.arange(n)
        v = np.exp(2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)
        return cls(v, kind="fourier")

    @classmethod
    def standard(cls, n: int) -> "SignalBasis":
        return cls(np.eye(n, dtype=complex), kind="standard")


class BellSystem:
    """The n^2 measurement vectors and projections built from a basis.

    Vector (k, l) lives on the doubled space and has amplitude b_k(m)
    at the pair (m, m - l mod n): the basis labels the first slot, the
    shift labels the offset between the slots. Together they form an
    orthonormal basis of the doubled space, so the associated
    projections resolve the identity and outcome probabilities are a
    complete distribution.
    """

    __slots__ = ("basis", "vectors")

    def __init__(self, basis: SignalBasis):
        n = basis.n
        xi = np.zeros((n, n, n * n), dtype=complex)
        rows = np.arange(n)
        for l in range(n):
            flat = rows * n + (rows - l) % n
            xi[:, l, flat] = basis.vectors
        xi.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "vectors", xi)

    def __setattr__(self, name, value):
        raise AttributeError("BellSystem is immutable")

    @property
    def n(self) -> int:
        return self.basis.n

    def vector(self, i: int, j: int) -> np.ndarray:
        return self.vectors[i, j]

    def projection(self, i: int, j: int) -> np.ndarray:
        v = self.vectors[i, j]
        return np.outer(v, v.conj())

    def gram_error(self) -> float:
        n = self.n
        flat = self.vectors.reshape(n * n, n * n)
        gram = flat.conj() @ flat.T
        return float(np.max(np.abs(gram - np.eye(n * n))))

    def completeness_error(self) -> float:
        total = np.einsum("ijx,ijy->xy", self.vectors, self.vectors.conj())
        return float(np.max(np.abs(total - np.eye(self.n * self.n))))


def entangle(gamma) -> DensityOperator:
    """Lift a memory state to the doubled space along the diagonal."""
    g = as_density(gamma)
    j = diag_embedding(g.n)
    return DensityOperator(j @ g.matrix @ j.conj().T)


def transfer_operator(bell: BellSystem, i: int, j: int) -> np.ndarray:
    """The (i, j) compression from the doubled space to one factor.

    Maps Phi to the function m -> conj(b_i(j + m)) Phi(j + m, m); the
    rank-one expansion of the memory update is built from its images.
    """
    n = bell.n
    b = bell.basis.vectors[i]
    g = np.zeros((n, n * n), dtype=complex)
    for m in range(n):
        shifted = (j + m) % n
        g[m, shifted * n + m] = np.conj(b[shifted])
    return g


def _check_inputs(rho, gamma, bell: BellSystem, i: int, j: int):
    r, g = as_density(rho), as_density(gamma)
    n = bell.n
    if r.n != n or g.n != n:
        raise DimensionMismatch(
            f"signal dim {r.n} and memory dim {g.n} must equal system dim {n}"
        )
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"outcome indices must lie in [0, {n}), got ({i}, {j})")
    return r, g


def _conditioned_block(i: int, j: int, rho: DensityOperator, gamma: DensityOperator,
                       bell: BellSystem) -> np.ndarray:
    """Unnormalized post-outcome memory operator from the measured state.

    Contracts (xi* (x) 1)(rho (x) e(gamma))(xi (x) 1) with the entangled
    operator materialized, which is the partial trace over the measured
    factors of the full sandwiched operator.
    """
    n = bell.n
    xi = bell.vectors[i, j].reshape(n, n)
    ent = entangle(gamma).matrix.reshape(n, n, n, n)
    return np.einsum("ab,ac,bsdt,cd->st", xi.conj(), rho.matrix, ent, xi, optimize=True)


def measured_operator(i: int, j: int, rho, gamma, bell: BellSystem) -> np.ndarray:
    """The sandwiched operator on all three factors, assembled literally.

    Cubic in dimension on each side; intended for small-n inspection
    and as the reference for the contraction-based routes.
    """
    r, g = _check_inputs(rho, gamma, bell, i, j)
    f = np.kron(bell.projection(i, j), np.eye(bell.n))
    joint = np.kron(r.matrix, entangle(g).matrix)
    return f @ joint @ f


def outcome_probability(i: int, j: int, rho, gamma, bell: BellSystem) -> float:
    """Probability of outcome (i, j); the full distribution sums to 1."""
    r, g = _check_inputs(rho, gamma, bell, i, j)
    p = float(np.trace(_conditioned_block(i, j, r, g, bell)).real)
    return max(p, 0.0)


def outcome_probabilities(rho, gamma, bell: BellSystem) -> np.ndarray:
    """All n^2 outcome probabilities as an (i, j)-indexed array."""
    r, g = _check_inputs(rho, gamma, bell, 0, 0)
    n = bell.n
    out = np.empty((n, n), dtype=float)
    for i in range(n):
        for j in range(n):
            out[i, j] = max(float(np.trace(_conditioned_block(i, j, r, g, bell)).real), 0.0)
    return out


def update_direct(i: int, j: int, rho, gamma, bell: BellSystem) -> DensityOperator:
    """Post-outcome memory via contraction of the measured operator."""
    r, g = _check_inputs(rho, gamma, bell, i, j)
    block = _conditioned_block(i, j, r, g, bell)
    tr = float(np.trace(block).real)
    if tr <= PROBABILITY_FLOOR:
        raise ZeroProbabilityOutcome(
            f"outcome ({i}, {j}) has probability {tr:.3e}"
        )
    return DensityOperator(block / tr)


def update_spectral(i: int, j: int, rho, gamma, bell: BellSystem) -> DensityOperator:
    """Post-outcome memory via the rank-one expansion over both spectra.

    Sums weight alpha_k beta_l on the image of g_k (x) h_l under the
    (i, j) transfer operator and normalizes by the total image weight.
    """
    r, g = _check_inputs(rho, gamma, bell, i, j)
    n = bell.n
    op = transfer_operator(bell, i, j)
    rd, gd = r.spectral(), g.spectral()
    acc = np.zeros((n, n), dtype=complex)
    weight = 0.0
    for k in range(n):
        alpha = float(rd.weights[k])
        if alpha <= 1e-15:
            continue
        for l in range(n):
            beta = float(gd.weights[l])
            if beta <= 1e-15:
                continue
            image = op @ np.kron(rd.vectors[:, k], gd.vectors[:, l])
            acc += (alpha * beta) * np.outer(image, image.conj())
            weight += alpha * beta * float(np.vdot(image, image).real)
    if weight <= PROBABILITY_FLOOR:
        raise ZeroProbabilityOutcome(
            f"outcome ({i}, {j}) has total image weight {weight:.3e}"
        )
    return DensityOperator(acc / weight)


def update_composed(i: int, j: int, rho, gamma, bell: BellSystem) -> DensityOperator:
    """Post-outcome memory as conditioning, shift, conditioning.

    The first stage conditions the signal on the conjugated basis
    vector's rank-one weight, the shift rotates the index, and the
    second stage conditions on the memory state itself. Each stage can
    fail on its own domain; the error says which one did.
    """
    r, g = _check_inputs(rho, gamma, bell, i, j)
    b = bell.basis.vectors[i]
    try:
        staged = schur_channel_apply(np.outer(b.conj(), b), r)
    except OutsideDomain as exc:
        raise OutsideDomain(
            f"signal conditioning for outcome ({i}, {j}) failed: {exc}"
        ) from exc
    u = shift_unitary(j, bell.n)
    shifted = u @ staged.matrix @ u.conj().T
    try:
        return schur_channel_apply(g.matrix, shifted)
    except OutsideDomain as exc:
        raise OutsideDomain(
            f"memory conditioning for outcome ({i}, {j}) failed: {exc}"
        ) from exc


@dataclass(frozen=True)
class SamplePolicy:
    """Draw outcomes from their probabilities with a seeded generator."""

    seed: int = 0


@dataclass(frozen=True)
class ArgmaxPolicy:
    """Always take the most probable outcome (lowest (i, j) on ties)."""


@dataclass(frozen=True)
class FixedPolicy:
    """Force one outcome every step; zero-probability selection raises."""

    i: int
    j: int


@dataclass(frozen=True)
class RecognitionStep:
    t: int
    i: int
    j: int
    probability: float
    memory: DensityOperator

    def to_json(self) -> dict:
        from .jsonio import matrix_to_json

        return {
            "t": self.t,
            "i": self.i,
            "j": self.j,
            "probability": self.probability,
            "gamma": matrix_to_json(self.memory.matrix),
            "entropy_of_gamma": von_neumann_entropy(self.memory),
        }


@dataclass(frozen=True)
class RecognitionHistory:
    initial_memory: DensityOperator
    steps: list[RecognitionStep]

    @property
    def final_memory(self) -> DensityOperator:
        return self.steps[-1].memory if self.steps else self.initial_memory


def recognize_sequence(gamma0, signals, bell: BellSystem, policy) -> RecognitionHistory:
    """Iterate the memory update over a sequence of signal states.

    Each step measures the current signal against the current memory,
    picks an outcome per the policy, and replaces the memory with the
    conditioned post-outcome state. Sampling is reproducible: one
    generator is seeded up front and consumes one draw per step.
    """
    memory = as_density(gamma0)
    rng = np.random.default_rng(policy.seed) if isinstance(policy, SamplePolicy) else None
    n = bell.n
    steps: list[RecognitionStep] = []
    for t, signal in enumerate(signals):
        probs = outcome_probabilities(signal, memory, bell)
        if isinstance(policy, FixedPolicy):
            i, j = policy.i, policy.j
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"fixed outcome ({i}, {j}) out of range for n={n}")
            p = float(probs[i, j])
            if p <= PROBABILITY_FLOOR:
                raise ZeroProbabilityOutcome(
                    f"fixed outcome ({i}, {j}) has probability {p:.3e} at step {t}"
                )
        elif isinstance(policy, ArgmaxPolicy):
            flat = int(np.argmax(probs))
            i, j = divmod(flat, n)
            p = float(probs[i, j])
        elif rng is not None:
            flat_probs = probs.reshape(-1)
            cumulative = np.cumsum(flat_probs)
            draw = rng.random() * cumulative[-1]
            flat = min(int(np.searchsorted(cumulative, draw, side="right")), n * n - 1)
            i, j = divmod(flat, n)
            p = float(probs[i, j])
        else:
            raise TypeError(f"unknown policy {policy!r}")
        memory = update_direct(i, j, signal, memory, bell)
        steps.append(RecognitionStep(t=t, i=i, j=j, probability=p, memory=memory))
    return RecognitionHistory(initial_memory=as_density(gamma0), steps=steps)

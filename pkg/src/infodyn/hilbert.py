"""Finite-dimensional Hilbert space over a cyclic index set.

The state space is L2 of the set {0, ..., n-1} under counting measure,
which is C^n with the standard inner product. Index arithmetic wraps
mod n. Everything here is a dense complex matrix or vector; all values
are immutable after construction and every function is pure.

Entropies use the natural logarithm. Base conversion is a display
concern and lives with the report types, not here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch

HERMITIAN_TOL = 1e-8
TRACE_TOL = 1e-8
EIGENVALUE_FLOOR = -1e-10
DEGENERACY_GAP = 1e-9
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class IndexGroup:
    """Cyclic index set {0, ..., n-1} with addition mod n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"group size must be positive, got {self.n}")

    def add(self, k: int, l: int) -> int:
        return (k + l) % self.n

    def sub(self, k: int, l: int) -> int:
        return (k - l) % self.n

    def elements(self) -> range:
        return range(self.n)


def as_vector(f) -> np.ndarray:
    v = np.asarray(f, dtype=complex)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    return v


def inner_product(f, g) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    fv, gv = as_vector(f), as_vector(g)
    if fv.shape != gv.shape:
        raise DimensionMismatch(f"vector dimensions differ: {fv.shape[0]} vs {gv.shape[0]}")
    return complex(np.vdot(fv, gv))


def mult_operator(g) -> np.ndarray:
    """Multiplication by the function g, as a diagonal matrix."""
    return np.diag(as_vector(g))


def shift_unitary(k: int, n: int) -> np.ndarray:
    """Unitary U_k acting by (U_k f)(m) = f((k + m) mod n)."""
    if not 0 <= k < n:
        raise ValueError(f"shift index must satisfy 0 <= k < {n}, got {k}")
    u = np.zeros((n, n), dtype=complex)
    for m in range(n):
        u[m, (k + m) % n] = 1.0
    return u


def diag_embedding(n: int) -> np.ndarray:
    """Isometry J from C^n into C^(n*n) supported on the diagonal.

    (J f)(k, l) = f(k) when k = l and 0 otherwise, with pairs (k, l)
    flattened row-major. The adjoint restricts a function on the square
    to its diagonal, so J.conj().T @ J is the identity on C^n.
    """
    j = np.zeros((n * n, n), dtype=complex)
    for k in range(n):
        j[k * n + k, k] = 1.0
    return j


def tensor(*operators) -> np.ndarray:
    """Kronecker product of two or more operators, left to right."""
    if len(operators) < 2:
        raise ValueError("tensor needs at least two operators")
    out = np.asarray(operators[0], dtype=complex)
    for op in operators[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(x, dims, trace_out) -> np.ndarray:
    """Trace out the listed tensor factors of a square operator.

    Parameters
    ----------
    x : array_like
        Square matrix on the tensor product of spaces with sizes `dims`.
    dims : sequence of int
        Factor dimensions, in tensor order.
    trace_out : iterable of int
        Indices (0-based) of the factors to remove.

    Returns
    -------
    ndarray
        Operator on the remaining factors, in their original order.
    """
    xm = np.asarray(x, dtype=complex)
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if xm.shape != (total, total):
        raise DimensionMismatch(
            f"matrix shape {xm.shape} does not factor as {dims}"
        )
    drop = sorted(set(int(i) for i in trace_out))
    if any(i < 0 or i >= len(dims) for i in drop):
        raise ValueError(f"subsystem index out of range for {len(dims)} factors")
    keep = [i for i in range(len(dims)) if i not in drop]

    tensor_view = xm.reshape(dims + dims)
    k = len(dims)
    row_sub = list(range(k))
    col_sub = list(range(k, 2 * k))
    for i in drop:
        col_sub[i] = row_sub[i]
    out_sub = [row_sub[i] for i in keep] + [col_sub[i] for i in keep]
    reduced = np.einsum(tensor_view, row_sub + col_sub, out_sub)
    side = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(side, side)


@dataclass(frozen=True)
class SchattenDecomposition:
    """Spectral resolution of a density operator into rank-one pieces.

    `weights[k]` pairs with column k of `vectors`. Weights are sorted
    descending and sum to 1. `unique` is False when the spectrum has a
    (near-)repeated eigenvalue, in which case the eigenvectors span the
    right eigenspaces but are otherwise an arbitrary orthonormal choice.
    """

    weights: np.ndarray
    vectors: np.ndarray
    unique: bool

    def projection(self, k: int) -> np.ndarray:
        v = self.vectors[:, k]
        return np.outer(v, v.conj())

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.weights) @ self.vectors.conj().T


class DensityOperator:
    """Positive unit-trace operator with cached spectral data.

    Construction validates self-adjointness and positivity, clamps
    eigenvalues in [-1e-10, 0) to zero, and renormalizes the spectrum
    to unit sum. Eigenvalues are stored descending with matching
    eigenvector columns. Instances are immutable.
    """

    __slots__ = ("matrix", "eigenvalues", "eigenvectors", "degenerate")

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density operator must be square, got shape {m.shape}")
        herm_err = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if herm_err > HERMITIAN_TOL:
            raise ValueError(f"matrix is not self-adjoint: deviation {herm_err:.3e}")
        m = 0.5 * (m + m.conj().T)

        tr = float(m.trace().real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr!r}")

        lam, vec = np.linalg.eigh(m)
        if float(lam[0]) < EIGENVALUE_FLOOR:
            raise ValueError(
                f"matrix is not positive semidefinite: eigenvalue {float(lam[0]):.3e}"
            )
        lam = np.clip(lam, 0.0, None)
        lam = lam / lam.sum()

        order = np.argsort(lam)[::-1]
        lam = lam[order]
        vec = vec[:, order]

        gaps = -np.diff(lam)
        degenerate = bool(lam.size > 1 and float(gaps.min()) <= DEGENERACY_GAP)

        m = m / tr
        for arr in (m, lam, vec):
            arr.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", vec)
        object.__setattr__(self, "degenerate", degenerate)

    def __setattr__(self, name, value):
        raise AttributeError("DensityOperator is immutable")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, vector) -> "DensityOperator":
        v = as_vector(vector)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def from_probabilities(cls, p) -> "DensityOperator":
        w = np.asarray(p, dtype=float)
        if w.ndim != 1 or np.any(w < 0) or w.sum() <= 0:
            raise ValueError("probabilities must be a nonnegative vector with positive sum")
        return cls(np.diag(w / w.sum()).astype(complex))

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityOperator":
        return cls(np.eye(n, dtype=complex) / n)

    def spectral(self) -> SchattenDecomposition:
        return SchattenDecomposition(
            weights=self.eigenvalues,
            vectors=self.eigenvectors,
            unique=not self.degenerate,
        )

    def tensor(self, other: "DensityOperator") -> "DensityOperator":
        return DensityOperator(np.kron(self.matrix, as_density(other).matrix))

    def __repr__(self):
        return f"DensityOperator(n={self.n}, degenerate={self.degenerate})"


def as_density(obj) -> DensityOperator:
    """Coerce a matrix-like object to a DensityOperator."""
    if isinstance(obj, DensityOperator):
        return obj
    return DensityOperator(obj)


def spectral_decompose(rho) -> SchattenDecomposition:
    return as_density(rho).spectral()


def _entropy_of_spectrum(lam: np.ndarray) -> float:
    pos = lam[lam > 0]
    # 0 ln 0 = 0 by continuity, so zero eigenvalues simply drop out.
    # Adding 0.0 turns the -0.0 of a pure spectrum into plain 0.0.
    return float(-np.sum(pos * np.log(pos)) + 0.0)


def von_neumann_entropy(rho) -> float:
    """Entropy -Tr(rho ln rho) in nats."""
    return _entropy_of_spectrum(as_density(rho).eigenvalues)


def relative_entropy(rho, sigma) -> float:
    """Relative entropy Tr rho (ln rho - ln sigma) in nats.

    Returns +inf when the support of `rho` is not contained in the
    support of `sigma`; that is a value of the functional, not an error.
    """
    r, s = as_density(rho), as_density(sigma)
    if r.n != s.n:
        raise DimensionMismatch(f"dimensions differ: {r.n} vs {s.n}")
    lam, u = r.eigenvalues, r.eigenvectors
    mu, v = s.eigenvalues, s.eigenvectors

    overlap = np.abs(u.conj().T @ v) ** 2
    null = mu <= SUPPORT_TOL
    if np.any(null):
        escaped = float(lam @ overlap[:, null].sum(axis=1))
        if escaped > 1e-10:
            return float("inf")

    live = lam > 0
    first = float(np.sum(lam[live] * np.log(lam[live])))
    cols = ~null
    second = float(lam @ (overlap[:, cols] @ np.log(mu[cols])))
    return first - second


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random full-rank (or fixed-rank) density operator."""
    k = n if rank is None else int(rank)
    if not 1 <= k <= n:
        raise ValueError(f"rank must be in [1, {n}], got {k}")
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    m = g @ g.conj().T
    return DensityOperator(m / m.trace().real)

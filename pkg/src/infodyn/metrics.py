"""State complexity, transmitted complexity, and the chaos degree.

The complexity of a state is its von Neumann entropy. The transmitted
complexity of a state through a channel is the mutual-entropy value
sup over extremal decompositions of sum p_k S(channel(E_k) || channel(rho)),
and the chaos degree is inf over the same decompositions of
sum p_k S(channel(E_k)). For a trace-preserving linear channel the two
optimizers coincide because every decomposition satisfies
sum p_k channel(E_k) = channel(rho), which pins their sum to the output
entropy; one search therefore serves both quantities.

A non-degenerate spectrum has a unique decomposition and both values
are exact. A degenerate spectrum is handled by a seeded random search
over intra-eigenspace rotations: the reported chaos degree is an upper
bound on the infimum and the transmitted value a lower bound on the
supremum.

All values are in nats; report serialization accepts a display base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import Channel, identity_channel, random_kraus_channel
from .exceptions import DimensionMismatch
from .hilbert import (
    DensityOperator,
    SchattenDecomposition,
    as_density,
    random_density,
    random_unitary,
    relative_entropy,
    von_neumann_entropy,
)

WEIGHT_FLOOR = 1e-15
ORDER_TOL = 1e-10


def complexity(rho) -> float:
    """Complexity of a state: its entropy, in nats."""
    return von_neumann_entropy(rho)


@dataclass(frozen=True)
class ComplexityConfig:
    """Budget and tolerances for the decomposition search."""

    restarts: int = 1000
    seed: int = 0
    eps_degenerate: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.eps_degenerate <= 0:
            raise ValueError("eps_degenerate must be positive")


DEFAULT_CONFIG = ComplexityConfig()


@dataclass(frozen=True)
class ChaosDegreeReport:
    """Chaos degree, transmitted complexity, and search statistics.

    `best` and `worst` are the extreme chaos-degree values seen during
    the search; for a unique decomposition they coincide with the value.
    """

    chaos_degree: float
    transmitted: float
    output_entropy: float
    degenerate: bool
    restarts: int
    seed: int
    best: float
    worst: float
    decomposition: SchattenDecomposition

    def to_json(self, log_base: float = math.e) -> dict:
        scale = 1.0 / math.log(log_base)
        return {
            "D": self.chaos_degree * scale,
            "T": self.transmitted * scale,
            "S_out": self.output_entropy * scale,
            "degenerate": self.degenerate,
            "restarts": self.restarts,
            "seed": self.seed,
            "best": self.best * scale,
            "worst": self.worst * scale,
            "log_base": log_base,
        }


def _matrix_entropy(m: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(m)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)) + 0.0)


def _eigenvalue_blocks(lam: np.ndarray, eps: float) -> list[tuple[int, int]]:
    """Contiguous index ranges of (near-)equal eigenvalues, descending order."""
    blocks, start = [], 0
    for i in range(1, lam.size):
        if lam[i - 1] - lam[i] > eps:
            blocks.append((start, i))
            start = i
    blocks.append((start, lam.size))
    return blocks


def _decomposition_candidates(rho: DensityOperator, config: ComplexityConfig):
    """Yield (weights, vectors) decompositions: the eigenbasis first, then
    seeded random rotations inside each degenerate eigenspace."""
    lam, vec = rho.eigenvalues, rho.eigenvectors
    yield lam, vec
    blocks = [b for b in _eigenvalue_blocks(lam, config.eps_degenerate) if b[1] - b[0] > 1]
    if not blocks:
        return
    for r in range(config.restarts):
        rng = np.random.default_rng(config.seed + r)
        rotated = np.array(vec)
        for lo, hi in blocks:
            rotated[:, lo:hi] = vec[:, lo:hi] @ random_unitary(hi - lo, rng)
        yield lam, rotated


def _require_tp_linear(channel: Channel):
    if not isinstance(channel, Channel):
        raise TypeError("expected a Channel")
    if not channel.is_linear:
        raise ValueError("decomposition metrics require a linear channel")
    if not channel.is_trace_preserving:
        raise ValueError("decomposition metrics require a trace-preserving channel")


def chaos_degree(rho, channel: Channel, config: ComplexityConfig | None = None) -> ChaosDegreeReport:
    """Chaos degree of a state under a trace-preserving linear channel.

    Minimizes sum p_k S(channel(E_k)) over extremal decompositions and
    evaluates the transmitted complexity at the minimizing decomposition
    through its own relative-entropy formula.
    """
    cfg = config or DEFAULT_CONFIG
    state = as_density(rho)
    _require_tp_linear(channel)
    if state.n != channel.dim:
        raise DimensionMismatch(f"state dim {state.n} vs channel dim {channel.dim}")

    sigma = channel.apply(state)
    s_out = von_neumann_entropy(sigma)

    best_val = math.inf
    worst_val = -math.inf
    best_vec = None
    evaluated = 0
    for lam, vec in _decomposition_candidates(state, cfg):
        total = 0.0
        for k in range(lam.size):
            if lam[k] <= WEIGHT_FLOOR:
                continue
            v = vec[:, k]
            image = channel.apply_matrix(np.outer(v, v.conj()))
            total += float(lam[k]) * _matrix_entropy(image)
        evaluated += 1
        if total < best_val:
            best_val, best_vec = total, vec
        worst_val = max(worst_val, total)

    transmitted = 0.0
    lam = state.eigenvalues
    for k in range(lam.size):
        if lam[k] <= WEIGHT_FLOOR:
            continue
        v = best_vec[:, k]
        image = DensityOperator(channel.apply_matrix(np.outer(v, v.conj())))
        transmitted += float(lam[k]) * relative_entropy(image, sigma)

    return ChaosDegreeReport(
        chaos_degree=best_val,
        transmitted=transmitted,
        output_entropy=s_out,
        degenerate=state.degenerate,
        restarts=evaluated,
        seed=cfg.seed,
        best=best_val,
        worst=worst_val,
        decomposition=SchattenDecomposition(
            weights=lam, vectors=best_vec, unique=not state.degenerate
        ),
    )


def transmitted_complexity(rho, channel: Channel, config: ComplexityConfig | None = None) -> float:
    """Mutual-entropy value of the state through the channel, in nats.

    Exact for a non-degenerate spectrum; a lower bound on the supremum
    otherwise (see module docstring).
    """
    return chaos_degree(rho, channel, config).transmitted


def classify_dynamics(d_values, eps_zero: float = 1e-3, eps_const: float = 1e-3) -> str:
    """Label a window of chaos-degree values.

    "stable" when the values all vanish, "weak_stable" when they sit at
    a constant positive level, "chaotic" otherwise.
    """
    vals = np.asarray(list(d_values), dtype=float)
    if vals.size == 0:
        raise ValueError("classification needs at least one value")
    if np.all(np.abs(vals) <= eps_zero):
        return "stable"
    if float(vals.max() - vals.min()) <= eps_const and float(vals.mean()) > eps_zero:
        return "weak_stable"
    return "chaotic"


def _check_purpose(q, dim: int) -> np.ndarray:
    m = np.asarray(q, dtype=complex)
    if m.shape != (dim, dim):
        raise DimensionMismatch(f"purpose operator shape {m.shape}, expected {(dim, dim)}")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > 1e-10:
        raise ValueError(f"purpose operator is not self-adjoint: deviation {dev:.3e}")
    return m


def value_of_information(rho_p, gamma_o, channel: Channel, purpose) -> float:
    """Expected purpose-operator value of the processed joint state.

    The processing state and the reference state are tensored, pushed
    through the channel, and paired with the self-adjoint purpose
    operator. The result is real up to numerical residue; a residue
    above 1e-10 signals an input bug and raises.
    """
    joint = as_density(rho_p).tensor(as_density(gamma_o))
    if joint.n != channel.dim:
        raise DimensionMismatch(f"joint dim {joint.n} vs channel dim {channel.dim}")
    q = _check_purpose(purpose, channel.dim)
    out = channel.apply(joint)
    out_m = out.matrix if isinstance(out, DensityOperator) else out
    v = complex(np.trace(out_m @ q))
    if abs(v.imag) > 1e-10:
        raise ValueError(f"value has non-real residue {v.imag:.3e}")
    return float(v.real)


@dataclass(frozen=True)
class ValueComparison:
    value_first: float
    value_second: float
    preferred: str  # "first" | "second" | "tie"


def _preference(v_first: float, v_second: float) -> str:
    if v_first > v_second + ORDER_TOL:
        return "first"
    if v_second > v_first + ORDER_TOL:
        return "second"
    return "tie"


def compare_signals(rho_a, rho_b, gamma_o, channel: Channel, purpose) -> ValueComparison:
    """Order two processing states by their value through one channel."""
    va = value_of_information(rho_a, gamma_o, channel, purpose)
    vb = value_of_information(rho_b, gamma_o, channel, purpose)
    return ValueComparison(va, vb, _preference(va, vb))


def compare_channels(rho_p, gamma_o, channel_a: Channel, channel_b: Channel, purpose) -> ValueComparison:
    """Order two channels by the value they give one signal."""
    va = value_of_information(rho_p, gamma_o, channel_a, purpose)
    vb = value_of_information(rho_p, gamma_o, channel_b, purpose)
    return ValueComparison(va, vb, _preference(va, vb))


@dataclass(frozen=True)
class ConjectureOutcome:
    """One exploratory check of the chaos-versus-value ordering.

    `agree` records whether the lower-chaos channel is the higher-value
    channel (ties matching ties). Informational only; no invariant of
    the package asserts anything about the agreement rate.
    """

    d_first: float
    d_second: float
    value_first: float
    value_second: float
    agree: bool

    def to_json(self) -> dict:
        return {
            "D": self.d_first,
            "D_prime": self.d_second,
            "V": self.value_first,
            "V_prime": self.value_second,
            "agree": self.agree,
        }


def conjecture_experiment(rho_p, gamma_o, channel_a: Channel, channel_b: Channel,
                          purpose, config: ComplexityConfig | None = None) -> ConjectureOutcome:
    """Compare chaos-degree ordering with value ordering for two channels."""
    joint = as_density(rho_p).tensor(as_density(gamma_o))
    d_a = chaos_degree(joint, channel_a, config).chaos_degree
    d_b = chaos_degree(joint, channel_b, config).chaos_degree
    v_a = value_of_information(rho_p, gamma_o, channel_a, purpose)
    v_b = value_of_information(rho_p, gamma_o, channel_b, purpose)
    # Lower chaos degree should pair with higher value; compare the two
    # preference labels so ties must match ties.
    d_pref = _preference(d_b, d_a)
    v_pref = _preference(v_a, v_b)
    return ConjectureOutcome(d_a, d_b, v_a, v_b, d_pref == v_pref)


def conjecture_batch(dim: int, pairs: int, seed: int,
                     kraus_terms: int = 2,
                     identical_channels: bool = False,
                     config: ComplexityConfig | None = None) -> tuple[list[ConjectureOutcome], float]:
    """Run the ordering check on random instances; returns outcomes and rate."""
    if dim < 2:
        raise ValueError("dim must be at least 2")
    if pairs < 1:
        raise ValueError("pairs must be positive")
    rng = np.random.default_rng(seed)
    outcomes = []
    for _ in range(pairs):
        rho = random_density(dim, rng)
        gamma = random_density(dim, rng)
        ch_a = random_kraus_channel(dim * dim, kraus_terms, rng)
        ch_b = ch_a if identical_channels else random_kraus_channel(dim * dim, kraus_terms, rng)
        g = rng.normal(size=(dim * dim, dim * dim)) + 1j * rng.normal(size=(dim * dim, dim * dim))
        purpose = 0.5 * (g + g.conj().T)
        outcomes.append(conjecture_experiment(rho, gamma, ch_a, ch_b, purpose, config))
    rate = sum(o.agree for o in outcomes) / len(outcomes)
    return outcomes, rate


@dataclass(frozen=True)
class AxiomResult:
    passed: bool
    worst_deviation: float
    tolerance: float
    trials: int
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "passed": self.passed,
            "worst_deviation": self.worst_deviation,
            "tolerance": self.tolerance,
            "trials": self.trials,
        }
        if self.note:
            out["note"] = self.note
        return out


def axiom_suite(dim: int, trials: int, seed: int,
                config: ComplexityConfig | None = None) -> dict[str, AxiomResult]:
    """Property checks of the five complexity axioms on random instances.

    Invariance under relabeling is asserted for the state complexity
    only; the transmitted side is genuinely basis-dependent for a fixed
    channel, so its drift is reported in the result note, not asserted.
    """
    if not 2 <= dim <= 8:
        raise ValueError(f"dim must be in [2, 8], got {dim}")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    cfg = config or ComplexityConfig(restarts=20, seed=seed)

    worst_neg = 0.0
    worst_relabel = 0.0
    worst_additivity = 0.0
    worst_bound = -math.inf
    worst_identity = 0.0
    t_drift = 0.0

    for t in range(trials):
        rho = random_density(dim, rng)
        sigma = random_density(dim, rng)
        channel = random_kraus_channel(dim, 2 + t % 2, rng)
        u = random_unitary(dim, rng)

        report = chaos_degree(rho, channel, cfg)
        c_val = complexity(rho)
        worst_neg = max(worst_neg, -c_val, -report.transmitted, -report.chaos_degree)

        relabeled = DensityOperator(u @ rho.matrix @ u.conj().T)
        worst_relabel = max(worst_relabel, abs(complexity(relabeled) - c_val))
        t_drift = max(t_drift, abs(
            chaos_degree(relabeled, channel, cfg).transmitted - report.transmitted
        ))

        worst_additivity = max(worst_additivity, abs(
            complexity(rho.tensor(sigma)) - c_val - complexity(sigma)
        ))

        # Bound T <= C over sampled decompositions, including engineered
        # degeneracy so the rotation search actually runs.
        spectrum = rng.random(dim)
        spectrum[1] = spectrum[0]
        spectrum = spectrum / spectrum.sum()
        basis = random_unitary(dim, rng)
        degenerate_rho = DensityOperator((basis * spectrum) @ basis.conj().T)
        for probe, probe_cfg in ((rho, cfg), (degenerate_rho, ComplexityConfig(restarts=20, seed=seed + t))):
            out = channel.apply(probe)
            ceiling = complexity(probe)
            for lam, vec in _decomposition_candidates(probe, probe_cfg):
                sampled = 0.0
                for k in range(lam.size):
                    if lam[k] <= WEIGHT_FLOOR:
                        continue
                    v = vec[:, k]
                    img = DensityOperator(channel.apply_matrix(np.outer(v, v.conj())))
                    sampled += float(lam[k]) * relative_entropy(img, out)
                worst_bound = max(worst_bound, sampled - ceiling)

        ident = identity_channel(dim)
        worst_identity = max(worst_identity, abs(
            chaos_degree(rho, ident, cfg).transmitted - c_val
        ))

    return {
        "nonnegativity": AxiomResult(worst_neg <= 0.0, worst_neg, 0.0, trials),
        "relabel_invariance": AxiomResult(
            worst_relabel <= 1e-10, worst_relabel, 1e-10, trials,
            note=f"transmitted drift under relabeling (observed, not asserted): {t_drift:.3e}",
        ),
        "additivity": AxiomResult(worst_additivity <= 1e-10, worst_additivity, 1e-10, trials),
        "transmitted_bounded": AxiomResult(worst_bound <= 1e-8, worst_bound, 1e-8, trials),
        "identity_recovery": AxiomResult(worst_identity <= 1e-10, worst_identity, 1e-10, trials),
    }

"""JSON wire formats for states, channels, and experiment files.

A complex number is a two-element array [re, im]; a matrix is a
row-major array of rows of those. Plain numbers are accepted on input
wherever a complex entry is expected.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .channels import Channel, kraus_channel, schur_channel, stochastic_channel, unitary_channel
from .hilbert import DensityOperator, as_density
from .recognition import (
    ArgmaxPolicy,
    BellSystem,
    FixedPolicy,
    SamplePolicy,
    SignalBasis,
)

CHANNEL_KINDS = ("ktau", "ktau_hat", "unitary", "kraus", "stochastic")


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def json_to_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) for v in value
    ):
        return complex(value[0], value[1])
    raise ValueError(f"expected a number or [re, im] pair, got {value!r}")


def matrix_to_json(matrix) -> list[list[list[float]]]:
    m = np.asarray(matrix, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in m]


def json_to_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ValueError("matrix must be a non-empty array of rows")
    data = [[json_to_complex(v) for v in row] for row in rows]
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise ValueError("matrix rows have inconsistent lengths")
    return np.asarray(data, dtype=complex)


def vector_to_json(vector) -> list[list[float]]:
    return [complex_to_json(z) for z in np.asarray(vector, dtype=complex)]


def json_to_vector(values) -> np.ndarray:
    if not isinstance(values, list) or not values:
        raise ValueError("vector must be a non-empty array")
    return np.asarray([json_to_complex(v) for v in values], dtype=complex)


def _nesting_depth(x) -> int:
    depth = 0
    while isinstance(x, list) and x:
        x = x[0]
        depth += 1
    return depth


def _reject_unknown(obj: dict, allowed: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown fields in {where}: {sorted(unknown)}")


def parse_state(obj) -> DensityOperator:
    """A density matrix, given bare or wrapped as {"matrix": ...}."""
    if isinstance(obj, dict):
        _reject_unknown(obj, {"matrix"}, "state")
        obj = obj["matrix"]
    return as_density(json_to_matrix(obj))


def parse_channel(obj: dict) -> Channel:
    """Channel descriptor: {"kind": ..., "matrix"/"kraus_ops"/"P": ...}."""
    if not isinstance(obj, dict):
        raise ValueError("channel descriptor must be an object")
    kind = obj.get("kind")
    if kind not in CHANNEL_KINDS:
        raise ValueError(f"channel kind must be one of {CHANNEL_KINDS}, got {kind!r}")
    if kind in ("ktau", "ktau_hat", "unitary"):
        _reject_unknown(obj, {"kind", "matrix"}, "channel")
        if "matrix" not in obj:
            raise ValueError(f"channel kind {kind!r} requires a matrix")
        m = json_to_matrix(obj["matrix"])
        if kind == "unitary":
            return unitary_channel(m)
        return schur_channel(m, normalized=(kind == "ktau_hat"))
    if kind == "kraus":
        _reject_unknown(obj, {"kind", "kraus_ops"}, "channel")
        ops = obj.get("kraus_ops")
        if not isinstance(ops, list) or not ops:
            raise ValueError("kraus channel requires a non-empty kraus_ops array")
        return kraus_channel([json_to_matrix(op) for op in ops])
    _reject_unknown(obj, {"kind", "P"}, "channel")
    if "P" not in obj:
        raise ValueError("stochastic channel requires a P matrix")
    p = json_to_matrix(obj["P"])
    if np.max(np.abs(p.imag)) > 0:
        raise ValueError("stochastic matrix must be real")
    return stochastic_channel(p.real)


def parse_basis(obj, n: int) -> SignalBasis:
    if obj == "fourier":
        return SignalBasis.fourier(n)
    if obj == "standard":
        return SignalBasis.standard(n)
    if isinstance(obj, dict):
        _reject_unknown(obj, {"custom"}, "basis")
        basis = SignalBasis(json_to_matrix(obj["custom"]))
        if basis.n != n:
            raise ValueError(f"custom basis has dimension {basis.n}, expected {n}")
        return basis
    raise ValueError(f"basis must be 'fourier', 'standard', or {{'custom': matrix}}, got {obj!r}")


def parse_experiment(obj: dict):
    """Recognition experiment file.

    Returns (gamma0, signals, bell, policy). `rho` may be one matrix
    (repeated `steps` times) or a list of matrices (whose length must
    match `steps` when both are present).
    """
    if not isinstance(obj, dict):
        raise ValueError("experiment file must be a JSON object")
    _reject_unknown(obj, {"n", "basis", "rho", "gamma", "policy", "seed", "steps"}, "experiment")
    for key in ("n", "basis", "rho", "gamma", "policy"):
        if key not in obj:
            raise ValueError(f"experiment file is missing {key!r}")
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    bell = BellSystem(parse_basis(obj["basis"], n))
    gamma0 = parse_state(obj["gamma"])

    rho_field = obj["rho"]
    steps = obj.get("steps")
    if steps is not None and (not isinstance(steps, int) or steps < 0):
        raise ValueError(f"steps must be a nonnegative integer, got {steps!r}")
    # Nesting depth separates one matrix from a sequence: entries are
    # [re, im] pairs in the canonical format, so a single matrix nests
    # three levels and a sequence of matrices four. Depth-two input is
    # one matrix with bare real entries; a sequence of such matrices
    # must use pair entries to stay distinguishable.
    if isinstance(rho_field, list) and rho_field and isinstance(rho_field[0], dict):
        signals = [parse_state(m) for m in rho_field]
    elif _nesting_depth(rho_field) >= 4:
        signals = [parse_state(m) for m in rho_field]
    else:
        signals = None
    if signals is not None:
        if steps is not None and steps != len(signals):
            raise ValueError(f"steps={steps} but rho lists {len(signals)} states")
    else:
        single = parse_state(rho_field)
        signals = [single] * (1 if steps is None else steps)

    seed = obj.get("seed", 0)
    if not isinstance(seed, int):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    policy_field = obj["policy"]
    if policy_field == "sample":
        policy = SamplePolicy(seed=seed)
    elif policy_field == "argmax":
        policy = ArgmaxPolicy()
    elif isinstance(policy_field, dict):
        _reject_unknown(policy_field, {"fixed"}, "policy")
        pair = policy_field.get("fixed")
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, int) for v in pair)):
            raise ValueError("fixed policy must be {'fixed': [i, j]}")
        policy = FixedPolicy(pair[0], pair[1])
    else:
        raise ValueError(f"policy must be 'sample', 'argmax', or {{'fixed': [i, j]}}, got {policy_field!r}")
    return gamma0, signals, bell, policy


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj: Any) -> str:
    """Canonical serialization: sorted keys, no trailing spaces."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2) + "\n"

"""Concrete promise functions and exact query algorithms used as test
vehicles throughout the package.

All circuits are written directly in the query model: a dimension-n index
register addressed by the oracle, value registers the oracle writes into,
and dense named unitaries (discrete Fourier transform, uniform-state
reflection). Phase behavior is synthesized from the additive-shift oracle by
preparing the value register in the Fourier eigenstate whose eigenvalue
under "add a" is the a-th root of unity, so every circuit uses only the one
oracle primitive.

Every decision algorithm is total: it acts as a well-defined unitary on all
of [M]^n, including inputs outside its promise domain, because compiled
pipelines feed it composed inputs that may leave the promise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import BooleanFunctionTable
from .statevector import (
    OracleCall,
    OutputRule,
    QueryAlgorithm,
    RegisterLayout,
    Unitary,
)


def fourier_matrix(d: int) -> np.ndarray:
    """Discrete Fourier transform on a dimension-d register; column 0 is uniform."""
    omega = np.exp(2j * np.pi / d)
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return omega ** (j * k) / np.sqrt(d)


def phase_value_prep(d: int) -> np.ndarray:
    """Unitary sending |0> to the shift eigenstate (1/sqrt d) sum_j w^{-j} |j>.

    With the value register in this state, an additive-shift oracle call
    kicks the phase w^{t(i)} onto the index register. For d = 2 this is the
    familiar |-> state.
    """
    f = fourier_matrix(d)
    return f[:, (np.arange(d) - 1) % d]


def diffusion_matrix(d: int) -> np.ndarray:
    """Reflection about the uniform state on a dimension-d register."""
    return 2.0 * np.full((d, d), 1.0 / d, dtype=complex) - np.eye(d, dtype=complex)


def _require_power_of_two(n: int) -> None:
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")


@dataclass(frozen=True)
class ZooEntry:
    """A promise function, an exact algorithm for it, and its success story."""

    id: str
    function: BooleanFunctionTable
    algorithm: QueryAlgorithm
    known_success: str


@dataclass(frozen=True)
class Distinguisher:
    """An oracle-probing circuit with a bit output but no decision function."""

    id: str
    algorithm: QueryAlgorithm


def deutsch_jozsa(n: int) -> ZooEntry:
    """Constant-vs-balanced decision in one query.

    The promise domain holds the two constant strings (output 0) and all
    balanced strings (output 1) over M = 2. Uniform superposition on the
    index register, one phase-kicked query, inverse transform; outcome 0 on
    the index register reads "constant".
    """
    _require_power_of_two(n)
    outputs = {tuple([b] * n): 0 for b in (0, 1)}
    for ones in itertools.combinations(range(n), n // 2):
        values = [0] * n
        for i in ones:
            values[i] = 1
        outputs[tuple(values)] = 1
    function = BooleanFunctionTable(n, 2, outputs)
    f = fourier_matrix(n)
    alg = QueryAlgorithm(
        layout=RegisterLayout((n, 2)),
        steps=(
            Unitary(f, (0,)),
            Unitary(phase_value_prep(2), (1,)),
            OracleCall(0, 1),
            Unitary(f.conj().T, (0,)),
        ),
        output_rule=OutputRule((0,), frozenset((k,) for k in range(1, n))),
    )
    return ZooEntry("dj", function, alg, "exact: correct with probability 1 on every promise input")


def optimal_grover_iterations(n: int) -> int:
    """Iteration count maximizing the single-marked success probability."""
    theta = math.asin(1.0 / math.sqrt(n))
    return max(0, round(math.pi / (4 * theta) - 0.5))


def grover_unique_or(n: int, iterations: int) -> ZooEntry:
    """Unique-marked search: 0 on the all-zeros string, 1 on unit-weight strings.

    Each iteration is one phase-kicked query plus a reflection about the
    uniform state; a final verification query writes the input's bit at the
    (superposed) index into a fresh output register, which also makes the
    circuit's output well defined off the promise. Query count is
    iterations + 1.
    """
    _require_power_of_two(n)
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    outputs = {tuple([0] * n): 0}
    for i in range(n):
        values = [0] * n
        values[i] = 1
        outputs[tuple(values)] = 1
    function = BooleanFunctionTable(n, 2, outputs)
    f = fourier_matrix(n)
    steps: list = [Unitary(f, (0,)), Unitary(phase_value_prep(2), (1,))]
    for _ in range(iterations):
        steps.append(OracleCall(0, 1))
        steps.append(Unitary(diffusion_matrix(n), (0,)))
    steps.append(OracleCall(0, 2))
    alg = QueryAlgorithm(
        layout=RegisterLayout((n, 2, 2)),
        steps=tuple(steps),
        output_rule=OutputRule((2,), frozenset({(1,)})),
    )
    success = "sin^2((2k+1) asin(sqrt(1/n))) on unique-marked inputs; 0 on all-zeros"
    return ZooEntry("grover", function, alg, success)


def constant_function(bit: int, n: int = 4, M: int = 2) -> ZooEntry:
    """Zero-query baseline: fixed output, total domain."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    outputs = {values: bit for values in itertools.product(range(M), repeat=n)}
    function = BooleanFunctionTable(n, M, outputs)
    ones = frozenset({()}) if bit else frozenset()
    alg = QueryAlgorithm(
        layout=RegisterLayout((1,)),
        steps=(),
        output_rule=OutputRule((), ones),
    )
    return ZooEntry(f"const{bit}", function, alg, f"exact: outputs {bit} with probability 1")


def collision_sniffer(n: int, queries: int = 1) -> Distinguisher:
    """Interference probe distinguishing collision-heavy index maps.

    Queries the map on a uniform index superposition and measures how much
    amplitude returns to index 0 after the inverse transform: probability
    sum_v (|preimage of v|)^2 / n^2, which is 1/n for permutations and grows
    with collisions, up to 1 for constant maps. The queries = 0 variant
    performs no call and outputs 1 always.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if queries not in (0, 1):
        raise ValueError("only the 0- and 1-query variants exist")
    f = fourier_matrix(n)
    steps: list = [Unitary(f, (0,))]
    if queries:
        steps.append(OracleCall(0, 1))
    steps.append(Unitary(f.conj().T, (0,)))
    alg = QueryAlgorithm(
        layout=RegisterLayout((n, n)),
        steps=tuple(steps),
        output_rule=OutputRule((0,), frozenset({(0,)})),
    )
    suffix = "" if queries else "-0q"
    return Distinguisher(f"collision-sniffer{suffix}", alg)


def zero_query_probe(n: int) -> Distinguisher:
    """Oracle-independent probe; its advantage is zero by construction."""
    if n < 1:
        raise ValueError("n must be positive")
    alg = QueryAlgorithm(
        layout=RegisterLayout((n,)),
        steps=(),
        output_rule=OutputRule((0,), frozenset({(0,)})),
    )
    return Distinguisher("zero-query", alg)


ZOO_IDS = ("dj", "grover", "const0", "const1")
DISTINGUISHER_IDS = ("collision-sniffer", "zero-query")


def build_zoo_entry(zoo_id: str, n: int, iterations: int | None = None) -> ZooEntry:
    if zoo_id == "dj":
        return deutsch_jozsa(n)
    if zoo_id == "grover":
        k = optimal_grover_iterations(n) if iterations is None else iterations
        return grover_unique_or(n, k)
    if zoo_id == "const0":
        return constant_function(0, n=n)
    if zoo_id == "const1":
        return constant_function(1, n=n)
    raise ValueError(f"unknown zoo id {zoo_id!r}; known: {', '.join(ZOO_IDS)}")


def build_distinguisher(algo_id: str, n: int) -> Distinguisher:
    if algo_id == "collision-sniffer":
        return collision_sniffer(n)
    if algo_id == "zero-query":
        return zero_query_probe(n)
    raise ValueError(f"unknown distinguisher {algo_id!r}; known: {', '.join(DISTINGUISHER_IDS)}")


def zoo_catalog() -> list[dict]:
    """Rows for the catalog listing: id, kind, constraints, query count."""
    return [
        {"id": "dj", "kind": "decision", "constraints": "n power of two, M = 2", "queries": "1"},
        {
            "id": "grover",
            "kind": "decision",
            "constraints": "n power of two, M = 2",
            "queries": "iterations + 1",
        },
        {"id": "const0", "kind": "decision", "constraints": "any n, M = 2", "queries": "0"},
        {"id": "const1", "kind": "decision", "constraints": "any n, M = 2", "queries": "0"},
        {
            "id": "collision-sniffer",
            "kind": "distinguisher",
            "constraints": "n >= 2",
            "queries": "1",
        },
        {"id": "zero-query", "kind": "distinguisher", "constraints": "n >= 1", "queries": "0"},
    ]

"""Core domain types: queryable input tables, index maps, and explicitly
tabulated boolean functions with permutation-symmetry checkers.

Everything here is an immutable table over 0-based indices. An input of
length n over alphabet size M is a total map [n] -> [M]; index maps send
[n] -> [n] and double as permutations when injective. Boolean functions are
stored extensionally on an explicit domain so that partial (promise)
functions are first-class.

The symmetry checkers enumerate permutation groups outright and are guarded
to small n; they are meant as test oracles, not as production paths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

FIRST_TYPE_GUARD = 8
SECOND_TYPE_GUARD = 6


@dataclass(frozen=True)
class InputString:
    """Total table [n] -> [M]; the object every oracle mediates access to."""

    n: int
    M: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.M < 1:
            raise ValueError("M must be positive")
        if len(self.values) != self.n:
            raise ValueError(f"expected {self.n} entries, got {len(self.values)}")
        for v in self.values:
            if not 0 <= v < self.M:
                raise ValueError(f"entry {v} outside [0, {self.M})")

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return self.n

    def to_json(self) -> dict:
        return {"n": self.n, "M": self.M, "values": list(self.values)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "InputString":
        return cls(int(obj["n"]), int(obj["M"]), tuple(obj["values"]))


@dataclass(frozen=True)
class IndexFunction:
    """Total map [n] -> [n]; permutations are the injective special case."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.values) != self.n:
            raise ValueError(f"expected {self.n} entries, got {len(self.values)}")
        for v in self.values:
            if not 0 <= v < self.n:
                raise ValueError(f"entry {v} outside [0, {self.n})")

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return self.n

    @classmethod
    def identity(cls, n: int) -> "IndexFunction":
        return cls(n, tuple(range(n)))

    def to_json(self) -> dict:
        return {"n": self.n, "values": list(self.values)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "IndexFunction":
        return cls(int(obj["n"]), tuple(obj["values"]))


@dataclass(frozen=True, eq=False)
class BooleanFunctionTable:
    """Boolean function tabulated on an explicit domain S of [M]^n strings.

    Lookups outside the domain raise; callers that must not evaluate the
    function off-domain rely on that.
    """

    n: int
    M: int
    outputs: Mapping[tuple[int, ...], int]

    def __post_init__(self) -> None:
        if self.n < 1 or self.M < 1:
            raise ValueError("n and M must be positive")
        table = {}
        for key, bit in self.outputs.items():
            key = tuple(int(v) for v in key)
            if len(key) != self.n:
                raise ValueError(f"domain string {key} has wrong length")
            if any(not 0 <= v < self.M for v in key):
                raise ValueError(f"domain string {key} outside [{self.M}]^{self.n}")
            if bit not in (0, 1):
                raise ValueError(f"output for {key} must be 0 or 1, got {bit}")
            table[key] = int(bit)
        object.__setattr__(self, "outputs", table)

    def __contains__(self, x: InputString) -> bool:
        return x.values in self.outputs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanFunctionTable):
            return NotImplemented
        return (self.n, self.M, self.outputs) == (other.n, other.M, other.outputs)

    def value(self, x: InputString) -> int:
        if x.n != self.n or x.M != self.M:
            raise ValueError("input shape does not match function table")
        try:
            return self.outputs[x.values]
        except KeyError:
            raise KeyError(f"input {x.values} is outside the function domain") from None

    def domain(self) -> Iterator[InputString]:
        for key in sorted(self.outputs):
            yield InputString(self.n, self.M, key)

    def to_json(self) -> dict:
        entries = [{"x": list(k), "f": self.outputs[k]} for k in sorted(self.outputs)]
        return {"n": self.n, "M": self.M, "entries": entries}

    @classmethod
    def from_json(cls, obj: Mapping) -> "BooleanFunctionTable":
        outputs = {tuple(e["x"]): int(e["f"]) for e in obj["entries"]}
        return cls(int(obj["n"]), int(obj["M"]), outputs)


def compose_input(x: InputString, g: IndexFunction) -> InputString:
    """Table of x after g: result[i] = x[g(i)]."""
    if x.n != g.n:
        raise ValueError(f"dimension mismatch: input has n={x.n}, index map has n={g.n}")
    return InputString(x.n, x.M, tuple(x.values[g.values[i]] for i in range(x.n)))


def compose_index(g: IndexFunction, h: IndexFunction) -> IndexFunction:
    """Index map of g after h: result[i] = g[h(i)]."""
    if g.n != h.n:
        raise ValueError(f"dimension mismatch: n={g.n} vs n={h.n}")
    return IndexFunction(g.n, tuple(g.values[h.values[i]] for i in range(g.n)))


def image(g: IndexFunction) -> frozenset[int]:
    """The set of values g attains."""
    return frozenset(g.values)


def first_type_asymmetry_witness(
    f: BooleanFunctionTable,
) -> Optional[tuple[InputString, IndexFunction]]:
    """A pair (x, pi) breaking position-permutation invariance, or None.

    The witness breaks invariance either because x o pi leaves the domain or
    because the function value changes.
    """
    if f.n > FIRST_TYPE_GUARD:
        raise ValueError(f"refusing to enumerate S_n for n={f.n} > {FIRST_TYPE_GUARD}")
    for key in sorted(f.outputs):
        fx = f.outputs[key]
        for perm in itertools.permutations(range(f.n)):
            permuted = tuple(key[perm[i]] for i in range(f.n))
            if f.outputs.get(permuted) != fx:
                return InputString(f.n, f.M, key), IndexFunction(f.n, perm)
    return None


def is_symmetric_first_type(f: BooleanFunctionTable) -> bool:
    """True iff f(x) = f(x o pi) for every domain x and every permutation pi."""
    return first_type_asymmetry_witness(f) is None


def second_type_asymmetry_witness(
    f: BooleanFunctionTable,
) -> Optional[tuple[InputString, tuple[int, ...], IndexFunction]]:
    """A triple (x, sigma, pi) breaking two-sided invariance, or None.

    sigma permutes output values, pi permutes positions; the checked map is
    i -> sigma(x(pi(i))).
    """
    if f.n > SECOND_TYPE_GUARD or f.M > SECOND_TYPE_GUARD:
        raise ValueError(
            f"refusing to enumerate S_n x S_M for n={f.n}, M={f.M} (guard {SECOND_TYPE_GUARD})"
        )
    value_perms = list(itertools.permutations(range(f.M)))
    for key in sorted(f.outputs):
        fx = f.outputs[key]
        for perm in itertools.permutations(range(f.n)):
            shuffled = tuple(key[perm[i]] for i in range(f.n))
            for sigma in value_perms:
                relabeled = tuple(sigma[v] for v in shuffled)
                if f.outputs.get(relabeled) != fx:
                    return (
                        InputString(f.n, f.M, key),
                        sigma,
                        IndexFunction(f.n, perm),
                    )
    return None


def is_symmetric_second_type(f: BooleanFunctionTable) -> bool:
    """True iff f is invariant under permuting positions and relabeling values."""
    return second_type_asymmetry_witness(f) is None

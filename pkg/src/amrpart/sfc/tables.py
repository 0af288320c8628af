"""State tables for self-similar octant-by-octant space-filling curves.

A curve is described by its *generator*: the order in which the level-1
subcubes are visited (the base pattern) and, for every subcube, the cube
symmetry and direction with which a scaled copy of the whole curve is
placed inside it. Closing the generator under composition yields a finite
state machine in which every state is one symmetry/direction pair; that
machine is the :class:`CurveTable` used for encoding and decoding.

Subcube codes are x-major: code = 4*x_bit + 2*y_bit + z_bit (2D: 2*x + y).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from amrpart.errors import InvalidArgumentError

# Base pattern Ca00: the reflected Gray code, a saddle-shaped traversal.
CA00 = (0, 1, 3, 2, 6, 7, 5, 4)
_AXES = "xyz"


def parse_symmetry(text: str, dim: int = 3) -> np.ndarray:
    """Parse ``"-y+x+z"`` into a signed permutation matrix.

    Row ``d`` of the result picks the signed source axis written at
    position ``d``, so ``"-y+x+z"`` maps ``(u, v, w)`` to ``(-v, u, w)``.
    """
    if len(text) != 2 * dim:
        raise InvalidArgumentError(f"bad symmetry {text!r}")
    m = np.zeros((dim, dim), dtype=np.int64)
    for d in range(dim):
        sign, axis = text[2 * d], text[2 * d + 1]
        if sign not in "+-" or axis not in _AXES[:dim]:
            raise InvalidArgumentError(f"bad symmetry {text!r}")
        m[d, _AXES.index(axis)] = 1 if sign == "+" else -1
    if sorted(np.flatnonzero(m) % dim) != list(range(dim)):
        raise InvalidArgumentError(f"symmetry {text!r} is not a permutation")
    return m


def format_symmetry(m: np.ndarray) -> str:
    out = []
    for row in m:
        axis = int(np.flatnonzero(row)[0])
        out.append(("+" if row[axis] > 0 else "-") + _AXES[axis])
    return "".join(out)


def _code_to_signs(code: int, dim: int) -> np.ndarray:
    return np.array([1 if (code >> (dim - 1 - d)) & 1 else -1 for d in range(dim)], dtype=np.int64)


def _signs_to_code(signs: np.ndarray) -> int:
    dim = len(signs)
    return sum(1 << (dim - 1 - d) for d in range(dim) if signs[d] > 0)


@dataclass(frozen=True)
class Generator:
    """Base pattern plus one ``(symmetry, reversed)`` placement per subcube."""

    name: str
    pattern: tuple[int, ...]
    placements: tuple[tuple[str, bool], ...]
    dim: int = 3


@dataclass(frozen=True, eq=False)
class CurveTable:
    """Finite-state machine for one space-filling curve.

    ``entries[s][p]`` is the ``(subcube, next_state)`` visited at position
    ``p`` while in state ``s``. Lookup arrays used by the codec are derived
    in ``__post_init__``.
    """

    name: str
    entries: tuple[tuple[tuple[int, int], ...], ...]
    dimension: int = 3

    def __post_init__(self):
        n_sub = 1 << self.dimension
        subcube = np.full((self.n_states, n_sub), -1, dtype=np.int64)
        nxt = np.zeros((self.n_states, n_sub), dtype=np.int64)
        for s, row in enumerate(self.entries):
            for p, (c, t) in enumerate(row):
                subcube[s, p] = c
                nxt[s, p] = t
        position = np.zeros((self.n_states, n_sub), dtype=np.int64)
        for s in range(self.n_states):
            for p in range(n_sub):
                if 0 <= subcube[s, p] < n_sub:
                    position[s, subcube[s, p]] = p
        for arr in (subcube, nxt, position):
            arr.setflags(write=False)
        object.__setattr__(self, "subcube", subcube)
        object.__setattr__(self, "next_state", nxt)
        object.__setattr__(self, "position", position)

    @property
    def n_states(self) -> int:
        return len(self.entries)

    def dump(self) -> str:
        """Text form, one ``state s: (subcube,next) x8`` line per state."""
        lines = []
        for s, row in enumerate(self.entries):
            cells = " ".join(f"({c},{t})" for c, t in row)
            lines.append(f"state {s}: {cells}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, name: str, text: str, dimension: int = 3) -> "CurveTable":
        entries = []
        for line in text.strip().splitlines():
            _, _, body = line.partition(":")
            pairs = body.replace("(", " ").replace(")", " ").split()
            entries.append(tuple(tuple(int(v) for v in p.split(",")) for p in pairs))
        return cls(name, tuple(entries), dimension)


def generate_table(gen: Generator) -> CurveTable:
    """Close a generator under composition into a state table.

    State 0 is the untransformed curve, so its subcube order is the base
    pattern itself.
    """
    dim = gen.dim
    n_sub = 1 << dim
    if sorted(gen.pattern) != list(range(n_sub)) or len(gen.placements) != n_sub:
        raise InvalidArgumentError(f"generator {gen.name!r} is malformed")
    signs = [_code_to_signs(c, dim) for c in gen.pattern]
    place = [(parse_symmetry(sym, dim), bool(rev)) for sym, rev in gen.placements]

    def state_key(m, rev):
        return (format_symmetry(m), rev)

    states = [(np.eye(dim, dtype=np.int64), False)]
    index = {state_key(*states[0]): 0}
    entries = []
    s = 0
    while s < len(states):
        m, rev = states[s]
        row = []
        for p in range(n_sub):
            i = n_sub - 1 - p if rev else p
            code = _signs_to_code(m @ signs[i])
            child = (m @ place[i][0], rev != place[i][1])
            key = state_key(*child)
            if key not in index:
                index[key] = len(states)
                states.append(child)
            row.append((code, index[key]))
        entries.append(tuple(row))
        s += 1
    return CurveTable(gen.name, tuple(entries), dim)


def permute_table(table: CurveTable, name: str, perm: Sequence[int]) -> CurveTable:
    """Same curve with axes relabelled: output axis ``d`` reads input axis ``perm[d]``."""
    dim = table.dimension

    def remap(code: int) -> int:
        bits = [(code >> (dim - 1 - d)) & 1 for d in range(dim)]
        return sum(bits[perm[d]] << (dim - 1 - d) for d in range(dim))

    entries = tuple(tuple((remap(c), t) for c, t in row) for row in table.entries)
    return CurveTable(name, entries, dim)


def gate_points(gen: Generator) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Entry and exit points of the curve in the unit cube.

    They are the fixed points of the placements of the first and last
    subcubes (coupled when those subcubes are traversed backwards). The
    solution is rational with a small denominator.
    """
    dim = gen.dim
    (first_sym, first_rev), (last_sym, last_rev) = gen.placements[0], gen.placements[-1]
    half_first = parse_symmetry(first_sym, dim) / 2.0
    half_last = parse_symmetry(last_sym, dim) / 2.0
    eye = np.eye(dim)
    a = np.zeros((2 * dim, 2 * dim))
    a[:dim, :dim] = eye
    a[dim:, dim:] = eye
    if first_rev:
        a[:dim, dim:] -= half_first
    else:
        a[:dim, :dim] -= half_first
    if last_rev:
        a[dim:, :dim] -= half_last
    else:
        a[dim:, dim:] -= half_last
    b = np.concatenate(
        [_code_to_signs(gen.pattern[0], dim) / 2.0, _code_to_signs(gen.pattern[-1], dim) / 2.0]
    )
    sol = (np.linalg.solve(a, b) + 1.0) / 2.0
    points = [Fraction(float(v)).limit_denominator(1 << 12) for v in sol]
    return tuple(points[:dim]), tuple(points[dim:])


def morton_table(dim: int = 3) -> CurveTable:
    """The Z-curve in table form: one state, subcubes in code order."""
    n_sub = 1 << dim
    return CurveTable("morton", (tuple((c, 0) for c in range(n_sub)),), dim)

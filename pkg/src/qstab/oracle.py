"""The classical shadow: evaluation at permutation matrices and points.

A permutation ``σ`` of ``{1..n}`` gives the character ``a_ij ↦ [σ(j) = i]``
of the magic-unitary family; a point ``x_k`` of a finite space gives
``e_i ↦ [i = k]``.  A character that kills every defining relation of a
presentation kills its whole ideal, so a non-zero value is a sound refutation
of an identity.  For ``n ≤ 3`` the permutation characters separate
everything; for larger ``n`` they are only sound.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ncpoly import Alphabet, NCPolynomial

DEFAULT_ENUMERATION_CAP = 7
MAX_POINT_TUPLES = 5_000_000


class OracleError(ValueError):
    pass


class ClosureError(OracleError):
    """The common zero set of a generator list is not a subgroup."""


class OracleVerdict(str, enum.Enum):
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True, order=True)
class PermutationPoint:
    """``images[j-1] = σ(j)``."""

    images: tuple

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def value(self, i: int, j: int) -> int:
        return 1 if self.images[j - 1] == i else 0

    def compose(self, other: "PermutationPoint") -> "PermutationPoint":
        """``self ∘ other``."""
        return PermutationPoint(tuple(self.images[other.images[j] - 1] for j in range(self.n)))

    def inverse(self) -> "PermutationPoint":
        inv = [0] * self.n
        for j, i in enumerate(self.images, start=1):
            inv[i - 1] = j
        return PermutationPoint(tuple(inv))

    def cycles(self) -> str:
        seen = set()
        parts = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            k = self(start)
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self(k)
            if len(cyc) > 1:
                parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"

    def __str__(self):
        return self.cycles()


@dataclass(frozen=True, order=True)
class SpacePoint:
    k: int

    def __str__(self):
        return f"x_{self.k}"


@dataclass(frozen=True)
class ScalarPoint:
    def __str__(self):
        return "*"


def identity(n: int) -> PermutationPoint:
    return PermutationPoint(tuple(range(1, n + 1)))


def all_permutations(n: int) -> list[PermutationPoint]:
    return [PermutationPoint(p) for p in itertools.permutations(range(1, n + 1))]


def format_point(point) -> str:
    if isinstance(point, tuple):
        return " ⊗ ".join(str(p) for p in point)
    return str(point)


# ---------------------------------------------------------------------------
# single-point evaluation
# ---------------------------------------------------------------------------


def _letter_value(g, point) -> int:
    if g.index is None:
        raise OracleError(f"generator {g.name} is outside the magic family")
    if len(g.index) == 2:
        if not isinstance(point, PermutationPoint):
            raise OracleError(f"{g.name} needs a permutation point")
        i, j = g.index
        if not (1 <= i <= point.n and 1 <= j <= point.n):
            raise OracleError(f"{g.name} is outside S_{point.n}")
        return point.value(i, j)
    if len(g.index) == 1:
        if not isinstance(point, SpacePoint):
            raise OracleError(f"{g.name} needs a space point")
        return 1 if g.index[0] == point.k else 0
    raise OracleError(f"generator {g.name} is outside the magic family")


def evaluate_classical(p: NCPolynomial, point) -> Fraction:
    """Value of ``p`` at a character (a point, or a tuple of points per tensor leg)."""
    a = p.alphabet
    if isinstance(point, (list, tuple)) and not isinstance(point, PermutationPoint):
        legs = tuple(point)
    else:
        legs = None

    def leg_point(g):
        if legs is None:
            return point
        return legs[(g.leg or 1) - 1]

    vals = [_letter_value(g, leg_point(g)) for g, _ in a.letters] if p else []
    total = Fraction(0)
    for w, c in p.items():
        v = 1
        for x in w:
            v *= vals[x]
            if not v:
                break
        if v:
            total += c
    return total


# ---------------------------------------------------------------------------
# characters of a presentation
# ---------------------------------------------------------------------------


def _family(P):
    gens = P.generators
    if not gens:
        return ("scalar", 0)
    sizes = {len(g.index) if g.index is not None else None for g in gens}
    if sizes == {2}:
        return ("magic", max(max(g.index) for g in gens))
    if sizes == {1}:
        return ("space", max(g.index[0] for g in gens))
    return (None, 0)


def _presentation_points(P, cap: int):
    kind, n = _family(P)
    if kind == "scalar":
        candidates = [ScalarPoint()]
    elif kind == "magic":
        if n > cap:
            return None
        candidates = all_permutations(n)
    elif kind == "space":
        candidates = [SpacePoint(k) for k in range(1, n + 1)]
    else:
        return None
    if kind == "scalar":
        return candidates
    rels = P.relations
    return [pt for pt in candidates if all(evaluate_classical(r, pt) == 0 for r in rels)]


_points_cache: dict = {}


def classical_points(P, cap: int = DEFAULT_ENUMERATION_CAP):
    """Characters of ``P`` among the classical candidates, per tensor leg.

    Returns a list with one list of points per leg, or ``None`` when the
    oracle does not apply (unknown generator family or over the cap).
    """
    key = (id(P), cap)
    hit = _points_cache.get(key)
    if hit is not None and hit[0] is P:
        return hit[1]
    factors = P.factors if P.factors else (P,)
    legs = []
    for F in factors:
        pts = _presentation_points(F, cap)
        if pts is None:
            legs = None
            break
        legs.append(pts)
    _points_cache[key] = (P, legs)
    return legs


def _leg_vectors(alphabet: Alphabet, leg_points):
    """Per letter, a 0/1 vector over the points of its leg."""
    out = []
    for g, _ in alphabet.letters:
        pts = leg_points[(g.leg or 1) - 1]
        out.append(np.array([_letter_value(g, pt) for pt in pts], dtype=np.int64))
    return out


def evaluate_everywhere(p: NCPolynomial, P, cap: int = DEFAULT_ENUMERATION_CAP):
    """Values of ``p`` at every character of ``P`` as an exact integer array.

    Returns ``(values, scale, leg_points)`` where the true values are
    ``values / scale``; ``None`` when the oracle does not apply.
    """
    leg_points = classical_points(P, cap)
    if leg_points is None:
        return None
    shape = tuple(len(pts) for pts in leg_points)
    if math.prod(shape) > MAX_POINT_TUPLES:
        return None
    if any(s == 0 for s in shape):
        return np.zeros(shape, dtype=np.int64), 1, leg_points
    scale = 1
    for _, c in p.items():
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    ints = {w: int(c * scale) for w, c in p.items()}
    dtype = np.int64 if sum(abs(v) for v in ints.values()) < 2**62 else object
    vecs = _leg_vectors(p.alphabet, leg_points)
    nlegs = len(leg_points)
    # group terms by their per-leg words
    leg_of = [(g.leg or 1) - 1 for g, _ in p.alphabet.letters]
    per_leg_words = [dict() for _ in range(nlegs)]
    entries = []
    for w, v in ints.items():
        parts = [[] for _ in range(nlegs)]
        for x in w:
            parts[leg_of[x]].append(x)
        idx = []
        for k, part in enumerate(parts):
            part = tuple(part)
            table = per_leg_words[k]
            if part not in table:
                table[part] = len(table)
            idx.append(table[part])
        entries.append((tuple(idx), v))
    mats = []
    for k in range(nlegs):
        rows = []
        for part in per_leg_words[k]:
            vec = np.ones(shape[k], dtype=np.int64)
            for x in part:
                vec = vec * vecs[x]
            rows.append(vec)
        mats.append(np.array(rows, dtype=dtype).reshape(len(rows), shape[k]))
    coeff = np.zeros(tuple(len(t) for t in per_leg_words), dtype=dtype)
    for idx, v in entries:
        coeff[idx] += v
    result = coeff
    for k in range(nlegs):
        result = np.tensordot(result, mats[k], axes=([0], [0]))
    return np.asarray(result).reshape(shape), scale, leg_points


def find_separating_point(p: NCPolynomial, P, cap: int = DEFAULT_ENUMERATION_CAP):
    """A character of ``P`` at which ``p`` is non-zero, or ``None``.

    Points are searched in lexicographic order, so the witness is
    deterministic.
    """
    if p.is_zero():
        return None
    ev = evaluate_everywhere(p, P, cap)
    if ev is None:
        return None
    values, _, leg_points = ev
    nz = np.argwhere(values != 0)
    if len(nz) == 0:
        return None
    idx = nz[0]
    point = tuple(leg_points[k][int(i)] for k, i in enumerate(idx))
    return point if P.factors else point[0]


def vanishes_everywhere(p: NCPolynomial, P, cap: int = DEFAULT_ENUMERATION_CAP) -> bool | None:
    """True iff ``p`` is zero at every character of ``P``; ``None`` if not applicable."""
    ev = evaluate_everywhere(p, P, cap)
    if ev is None:
        return None
    return not np.any(ev[0] != 0)


# ---------------------------------------------------------------------------
# membership refutation, classical subgroups, orbits, Haar averages
# ---------------------------------------------------------------------------


def _size_of(polys, n):
    if n is not None:
        return n
    for p in polys:
        for g in p.alphabet.generators:
            if g.index is not None and len(g.index) == 2:
                return max(max(x.index) for x in p.alphabet.generators)
    raise OracleError("cannot infer n; pass it explicitly")


def find_refuting_permutation(p: NCPolynomial, gens, n: int | None = None,
                              cap: int = DEFAULT_ENUMERATION_CAP) -> PermutationPoint | None:
    gens = list(gens)
    n = _size_of([p, *gens], n)
    if n > cap:
        return None
    for sigma in all_permutations(n):
        if evaluate_classical(p, sigma) != 0 and all(evaluate_classical(g, sigma) == 0 for g in gens):
            return sigma
    return None


def refute_membership(p: NCPolynomial, gens, n: int | None = None,
                      cap: int = DEFAULT_ENUMERATION_CAP) -> OracleVerdict:
    """Refuted iff a permutation kills every generator but not ``p``."""
    if p.is_zero():
        return OracleVerdict.UNKNOWN
    sigma = find_refuting_permutation(p, gens, n, cap)
    return OracleVerdict.REFUTED if sigma is not None else OracleVerdict.UNKNOWN


@dataclass(frozen=True)
class ClassicalSubgroup:
    n: int
    points: tuple  # sorted PermutationPoints

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, sigma):
        return sigma in self.points

    def as_set(self) -> frozenset:
        return frozenset(self.points)


def classical_subgroup(gens, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> ClassicalSubgroup:
    """All permutations annihilating every generator; closure under products is checked."""
    if n > cap:
        raise OracleError(f"n = {n} exceeds the enumeration cap {cap}")
    gens = list(gens)
    pts = tuple(s for s in all_permutations(n) if all(evaluate_classical(g, s) == 0 for g in gens))
    members = set(pts)
    if identity(n) not in members:
        raise ClosureError("identity permutation does not annihilate the generators")
    for s in pts:
        if s.inverse() not in members:
            raise ClosureError(f"{s} is in the zero set but its inverse is not")
        for t in pts:
            if s.compose(t) not in members:
                raise ClosureError(f"zero set not closed under composition ({s} * {t})")
    return ClassicalSubgroup(n, pts)


def classical_orbit(H: ClassicalSubgroup, k: int) -> frozenset:
    """``{σ(k) : σ ∈ H}`` as point indices."""
    return frozenset(s(k) for s in H)


def haar_average(p: NCPolynomial, H: ClassicalSubgroup) -> Fraction:
    """Uniform average over ``H`` (the Haar state of the classical group)."""
    if not len(H):
        raise OracleError("empty subgroup")
    return sum((evaluate_classical(p, s) for s in H), Fraction(0)) / len(H)

"""Exact arithmetic in the free unital *-algebra over the rationals.

A polynomial is a finite map from words to :class:`fractions.Fraction`
coefficients.  Words are tuples of integer letter codes; the codes are
assigned by an :class:`Alphabet` in generator precedence order, so the
built-in tuple comparison of ``(len(w), w)`` is exactly the
degree-lexicographic order used by the rewriting engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Word = tuple  # tuple[int, ...]


class StructuralError(ValueError):
    """Operands live over different generator sets, or a name is undeclared."""


@dataclass(frozen=True)
class Generator:
    """A generator symbol.

    ``index`` is the matrix position for matrix-indexed families such as
    ``a_ij`` (a pair) or the point label of a space generator ``e_i``
    (a singleton).  ``leg`` is set only inside tensor-product presentations.
    """

    name: str
    self_adjoint: bool = True
    index: tuple | None = None
    leg: int | None = None

    def on_leg(self, leg: int) -> "Generator":
        return Generator(self.name, self.self_adjoint, self.index, leg)


def deglex_key(word: Word) -> tuple:
    return (len(word), word)


class Alphabet:
    """The letters available to words over a fixed generator set.

    Precedence: leg tag first, then matrix index (row-major), then
    declaration order.  A non-self-adjoint generator ``g`` contributes the
    two adjacent letters ``g < g*``.
    """

    def __init__(self, generators: Iterable[Generator]):
        gens = tuple(generators)
        seen = set()
        for g in gens:
            key = (g.name, g.leg)
            if key in seen:
                raise StructuralError(f"duplicate generator {g.name!r}")
            seen.add(key)

        def precedence(item):
            pos, g = item
            return (g.leg or 0, 0 if g.index is not None else 1, g.index or (), pos)

        ordered = [g for _, g in sorted(enumerate(gens), key=precedence)]
        self.generators: tuple[Generator, ...] = gens
        self.letters: list[tuple[Generator, bool]] = []
        for g in ordered:
            self.letters.append((g, False))
            if not g.self_adjoint:
                self.letters.append((g, True))
        self._code = {(g.name, g.leg, star): i for i, (g, star) in enumerate(self.letters)}
        self._adjoint = []
        for g, star in self.letters:
            if g.self_adjoint:
                self._adjoint.append(self._code[(g.name, g.leg, False)])
            else:
                self._adjoint.append(self._code[(g.name, g.leg, not star)])
        self._key = tuple(self.letters)
        self._hash = hash(self._key)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and (self is other or self._key == other._key)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return f"Alphabet({[g.name for g in self.generators]})"

    def code(self, name: str, starred: bool = False, leg: int | None = None) -> int:
        gen = self.generator(name, leg)
        if gen.self_adjoint:
            starred = False
        return self._code[(name, leg, starred)]

    def generator(self, name: str, leg: int | None = None) -> Generator:
        for g in self.generators:
            if g.name == name and g.leg == leg:
                return g
        raise StructuralError(f"undeclared generator {name!r}" + (f" on leg {leg}" if leg else ""))

    def has(self, name: str, leg: int | None = None) -> bool:
        return any(g.name == name and g.leg == leg for g in self.generators)

    def letter_code(self, gen: Generator, starred: bool = False) -> int:
        if gen.self_adjoint:
            starred = False
        try:
            return self._code[(gen.name, gen.leg, starred)]
        except KeyError:
            raise StructuralError(f"undeclared generator {gen.name!r}") from None

    def adjoint_letter(self, code: int) -> int:
        return self._adjoint[code]

    def legs(self) -> list[int]:
        return sorted({g.leg or 0 for g in self.generators})

    # constructors
    def zero(self) -> "NCPolynomial":
        return NCPolynomial(self, {})

    def one(self) -> "NCPolynomial":
        return NCPolynomial(self, {(): Fraction(1)})

    def scalar(self, c) -> "NCPolynomial":
        return NCPolynomial(self, {(): Fraction(c)})

    def gen(self, name: str, starred: bool = False, leg: int | None = None) -> "NCPolynomial":
        return NCPolynomial(self, {(self.code(name, starred, leg),): Fraction(1)})

    def word(self, codes: Word, coeff=1) -> "NCPolynomial":
        return NCPolynomial(self, {tuple(codes): Fraction(coeff)})

    def letter_str(self, code: int) -> str:
        g, star = self.letters[code]
        return g.name + ("*" if star else "")

    def word_str(self, word: Word) -> str:
        if not word:
            return "1"
        legs = [self.letters[c][0].leg for c in word]
        if any(leg is not None for leg in legs):
            nlegs = max(self.legs())
            if all(legs[i] <= legs[i + 1] for i in range(len(legs) - 1)):
                parts = []
                for leg in range(1, nlegs + 1):
                    sub = [self.letter_str(c) for c, l in zip(word, legs) if l == leg]
                    parts.append("*".join(sub) if sub else "1")
                return "⊗".join(parts)
            return "*".join(f"{self.letter_str(c)}@{l}" for c, l in zip(word, legs))
        return "*".join(self.letter_str(c) for c in word)


def _canonical(terms: Mapping) -> dict:
    items = [(w, c) for w, c in terms.items() if c != 0]
    items.sort(key=lambda wc: (len(wc[0]), wc[0]))
    return {w: (c if type(c) is Fraction else Fraction(c)) for w, c in items}


class NCPolynomial:
    """An immutable element of the free *-algebra over an :class:`Alphabet`."""

    __slots__ = ("alphabet", "_terms", "_hash")

    def __init__(self, alphabet: Alphabet, terms: Mapping | None = None, *, _trusted=False):
        self.alphabet = alphabet
        self._terms = dict(terms) if _trusted else _canonical(terms or {})
        self._hash = None

    @classmethod
    def _raw(cls, alphabet, terms: dict) -> "NCPolynomial":
        # terms must already be free of zeros
        return cls(alphabet, _canonical(terms), _trusted=True)

    # inspection
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self._terms.items())

    def words(self) -> list[Word]:
        return list(self._terms)

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def leading_word(self) -> Word | None:
        if not self._terms:
            return None
        return max(self._terms, key=deglex_key)

    def is_constant(self) -> bool:
        return all(not w for w in self._terms)

    def constant(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def canonical(self) -> "NCPolynomial":
        return NCPolynomial(self.alphabet, self._terms)

    # arithmetic
    def _check(self, other) -> "NCPolynomial":
        if isinstance(other, NCPolynomial):
            if other.alphabet != self.alphabet:
                raise StructuralError("polynomials over different generator sets")
            return other
        if isinstance(other, (int, Fraction)):
            return self.alphabet.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial(self.alphabet, {w: -c for w, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_add(self, -other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = self.alphabet.one()
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c) -> "NCPolynomial":
        c = Fraction(c)
        if c == 0:
            return self.alphabet.zero()
        return NCPolynomial(self.alphabet, {w: v * c for w, v in self._terms.items()}, _trusted=True)

    def adjoint(self) -> "NCPolynomial":
        return poly_adjoint(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alphabet.scalar(other)
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self.alphabet == other.alphabet and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alphabet, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"NCPolynomial({format_poly(self)!r})"


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: NCPolynomial) -> str:
    """Human-readable form, highest word first."""
    if not p._terms:
        return "0"
    out = []
    for w in sorted(p._terms, key=deglex_key, reverse=True):
        c = p._terms[w]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        ws = p.alphabet.word_str(w)
        if not w:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = ws
        else:
            body = f"{_fmt_coeff(mag)}*{ws}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def poly_add(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    if p.alphabet != q.alphabet:
        raise StructuralError("polynomials over different generator sets")
    terms = dict(p._terms)
    for w, c in q._terms.items():
        v = terms.get(w, 0) + c
        if v:
            terms[w] = v
        else:
            terms.pop(w, None)
    return NCPolynomial(p.alphabet, terms)


def mul_terms(a: Mapping, b: Mapping) -> dict:
    """Raw product of two term maps (no canonical ordering)."""
    out: dict = {}
    for u, c in a.items():
        for v, d in b.items():
            w = u + v
            x = out.get(w, 0) + c * d
            if x:
                out[w] = x
            else:
                out.pop(w, None)
    return out


def poly_mul(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    if p.alphabet != q.alphabet:
        raise StructuralError("polynomials over different generator sets")
    return NCPolynomial(p.alphabet, mul_terms(p._terms, q._terms))


def adjoint_word(alphabet: Alphabet, word: Word) -> Word:
    return tuple(alphabet.adjoint_letter(c) for c in reversed(word))


def poly_adjoint(p: NCPolynomial) -> NCPolynomial:
    # coefficients are rational, so conjugation is trivial
    a = p.alphabet
    return NCPolynomial(a, {adjoint_word(a, w): c for w, c in p._terms.items()})


def add_into(acc: dict, terms: Mapping, scale=1) -> None:
    for w, c in terms.items():
        v = acc.get(w, 0) + c * scale
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)


# ---------------------------------------------------------------------------
# textual polynomials: "a_11*a_12 - 1/2*a_13^2 + a_21^*"
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^\*|\^|[-+*()]))")


class ParseError(ValueError):
    pass


def parse_polynomial(text: str, alphabet: Alphabet) -> NCPolynomial:
    """Parse a polynomial expression over ``alphabet``.

    Grammar: sums and differences of products; factors are rationals,
    generator names, parenthesised expressions, ``x^k`` powers and the
    postfix adjoint ``x^*``.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos} in {text!r}")
        tokens.append((m.group(1), m.group(2), m.group(3)))
        pos = m.end()
    tokens.append((None, None, "$"))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expr():
        sign = 1
        if peek()[2] in ("+", "-"):
            sign = -1 if take()[2] == "-" else 1
        acc = term().scale(sign)
        while peek()[2] in ("+", "-"):
            op = take()[2]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while True:
            if peek()[2] == "*":
                take()
                acc = acc * factor()
            elif peek()[0] is not None or peek()[1] is not None or peek()[2] == "(":
                acc = acc * factor()
            else:
                return acc

    def factor():
        num, name, op = take()
        if num is not None:
            base = alphabet.scalar(Fraction(num))
        elif name is not None:
            base = alphabet.gen(name)
        elif op == "(":
            base = expr()
            if take()[2] != ")":
                raise ParseError(f"unbalanced parentheses in {text!r}")
        else:
            raise ParseError(f"unexpected token {op!r} in {text!r}")
        while peek()[2] in ("^", "^*"):
            op = take()[2]
            if op == "^*":
                base = base.adjoint()
            else:
                num = take()[0]
                if num is None or "/" in num:
                    raise ParseError(f"exponent must be a non-negative integer in {text!r}")
                base = base ** int(num)
        return base

    try:
        result = expr()
    except StructuralError as exc:
        raise ParseError(str(exc)) from None
    if peek()[2] != "$":
        raise ParseError(f"trailing input in {text!r}")
    return result

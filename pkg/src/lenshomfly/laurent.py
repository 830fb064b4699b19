"""Integer Laurent polynomials in two variables ``a`` and ``z``.

Values are immutable and always normalized: no stored coefficient is zero.
The canonical text form lists terms sorted by ``(e_a, e_z)`` ascending, for
example ``"a^-8 - a^-8*z"`` or ``"2*a^2 + a^2*z^2 - a^4"``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from typing import Union

Exponents = tuple[int, int]

__all__ = [
    "LaurentPoly",
    "PolynomialParseError",
    "add",
    "monomial",
    "mul",
    "parse",
    "to_canonical_string",
    "unknot_factor",
]


class PolynomialParseError(ValueError):
    """Raised for malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def _normalized(terms: Iterable[tuple[Exponents, int]]) -> dict[Exponents, int]:
    out: dict[Exponents, int] = {}
    for key, coeff in terms:
        out[key] = out.get(key, 0) + coeff
    return {k: c for k, c in out.items() if c != 0}


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[Exponents, int], Iterable[tuple[Exponents, int]], None] = None):
        if terms is None:
            items: Iterable[tuple[Exponents, int]] = ()
        elif isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        clean = _normalized(((int(ea), int(ez)), int(c)) for (ea, ez), c in items)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({(0, 0): 1})

    @classmethod
    def monomial(cls, coeff: int, e_a: int = 0, e_z: int = 0) -> "LaurentPoly":
        return cls({(e_a, e_z): coeff})

    @property
    def terms(self) -> dict[Exponents, int]:
        """A copy of the exponent-to-coefficient map."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.monomial(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    @staticmethod
    def _coerce(value) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return LaurentPoly.monomial(value)
        raise TypeError(f"cannot combine LaurentPoly with {type(value).__name__}")

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        return LaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        return LaurentPoly(
            ((a1 + a2, z1 + z2), c1 * c2)
            for (a1, z1), c1 in self._terms.items()
            for (a2, z2), c2 in other._terms.items()
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = LaurentPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def shift(self, e_a: int = 0, e_z: int = 0) -> "LaurentPoly":
        """Multiply by the monomial ``a^e_a z^e_z``."""
        return LaurentPoly({(a + e_a, z + e_z): c for (a, z), c in self._terms.items()})

    def __str__(self) -> str:
        return to_canonical_string(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({to_canonical_string(self)!r})"


def add(x: LaurentPoly, y: LaurentPoly) -> LaurentPoly:
    return x + y


def mul(x: LaurentPoly, y: LaurentPoly) -> LaurentPoly:
    return x * y


def monomial(coeff: int, e_a: int, e_z: int) -> LaurentPoly:
    return LaurentPoly.monomial(coeff, e_a, e_z)


def unknot_factor(p: int) -> LaurentPoly:
    """The factor ``(a^-p - a^p) / z`` written without division."""
    if p < 1:
        raise ValueError("p must be positive")
    return LaurentPoly({(-p, -1): 1, (p, -1): -1})


def _power(var: str, exp: int) -> str:
    if exp == 0:
        return ""
    return var if exp == 1 else f"{var}^{exp}"


def _term_body(coeff: int, e_a: int, e_z: int) -> str:
    factors = [f for f in (_power("a", e_a), _power("z", e_z)) if f]
    if not factors:
        return str(coeff)
    if coeff != 1:
        factors.insert(0, str(coeff))
    return "*".join(factors)


def to_canonical_string(x: LaurentPoly) -> str:
    items = list(x)
    if not items:
        return "0"
    parts = []
    for idx, ((e_a, e_z), coeff) in enumerate(items):
        body = _term_body(abs(coeff), e_a, e_z)
        if idx == 0:
            parts.append(body if coeff > 0 else "-" + body)
        else:
            parts.append((" + " if coeff > 0 else " - ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[az])|(?P<op>[-+*^]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                offset = len(text[pos:]) - len(text[pos:].lstrip())
                raise PolynomialParseError("unexpected character", text, pos + offset)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.index = 0

    def peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.index += 1
        return tok

    def error(self, message: str):
        tok = self.peek()
        position = tok[2] if tok else len(self.text)
        raise PolynomialParseError(message, self.text, position)

    def integer(self, signed: bool) -> int:
        sign = 1
        tok = self.peek()
        if signed and tok and tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.take()
            tok = self.peek()
        if not tok or tok[0] != "int":
            self.error("expected an integer")
        self.take()
        return sign * int(tok[1])

    def factor(self) -> tuple[str, int]:
        tok = self.take()
        exp = 1
        nxt = self.peek()
        if nxt and nxt[0] == "op" and nxt[1] == "^":
            self.take()
            exp = self.integer(signed=True)
        return tok[1], exp

    def term(self) -> tuple[Exponents, int]:
        coeff = 1
        exps = {"a": 0, "z": 0}
        seen_any = False
        tok = self.peek()
        if tok and tok[0] == "int":
            coeff = int(tok[1])
            self.take()
            seen_any = True
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                if not seen_any:
                    self.error("dangling '*'")
                self.take()
                tok = self.peek()
                if not tok or tok[0] != "var":
                    self.error("expected 'a' or 'z' after '*'")
            if tok and tok[0] == "var":
                var, exp = self.factor()
                exps[var] += exp
                seen_any = True
                continue
            break
        if not seen_any:
            self.error("expected a term")
        return (exps["a"], exps["z"]), coeff

    def polynomial(self) -> LaurentPoly:
        terms = []
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.take()
        while True:
            key, coeff = self.term()
            terms.append((key, sign * coeff))
            tok = self.peek()
            if tok is None:
                break
            if tok[0] == "op" and tok[1] in "+-":
                sign = -1 if tok[1] == "-" else 1
                self.take()
                continue
            self.error("expected '+' or '-' between terms")
        return LaurentPoly(terms)


def parse(text: str) -> LaurentPoly:
    """Parse the canonical text form (and lenient variants such as ``3a^2``)."""
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    parser = _Parser(text)
    if not parser.tokens:
        raise PolynomialParseError("empty input", text, 0)
    return parser.polynomial()

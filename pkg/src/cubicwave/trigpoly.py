"""Exact secular trigonometric polynomials in one variable ``tau``.

A :class:`TrigPoly` is a finite sum of monomials ``c * tau**p * cos(w*tau)``
or ``c * tau**p * sin(w*tau)`` with :class:`fractions.Fraction` coefficients
and nonnegative integer frequencies.  Terms with ``p >= 1`` are *secular*:
they grow without bound and destroy periodicity.

The representation is canonical (sorted, no zero coefficients, no
``sin(0*tau)``), so ``==`` is structural equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

COS = "cos"
SIN = "sin"
_PARITY_ORDER = {COS: 0, SIN: 1}

Scalar = Union[int, Fraction]
Key = tuple  # (power, frequency, parity)


class SecularSourceError(ValueError):
    """Raised when a Duhamel integral is requested for a secular source."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact coefficient required, got {type(x).__name__}")


def _sort_key(key: Key):
    power, freq, parity = key
    return (power, freq, _PARITY_ORDER[parity])


class TrigPoly:
    """Immutable exact polynomial in ``tau``, ``cos(w tau)`` and ``sin(w tau)``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, Scalar] | Iterable[tuple[Key, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, Fraction] = {}
        for key, coeff in items:
            power, freq, parity = key
            if power < 0:
                raise ValueError("negative power of tau")
            if parity not in _PARITY_ORDER:
                raise ValueError(f"parity must be 'cos' or 'sin', got {parity!r}")
            coeff = _as_fraction(coeff)
            if freq < 0:
                freq = -freq
                if parity == SIN:
                    coeff = -coeff
            if parity == SIN and freq == 0:
                continue
            k = (int(power), int(freq), parity)
            acc[k] = acc.get(k, Fraction(0)) + coeff
        self._terms = tuple(
            (k, acc[k]) for k in sorted(acc, key=_sort_key) if acc[k] != 0
        )
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls()

    @classmethod
    def const(cls, c: Scalar) -> "TrigPoly":
        return cls({(0, 0, COS): c})

    @classmethod
    def cos(cls, freq: int, coeff: Scalar = 1, power: int = 0) -> "TrigPoly":
        return cls({(power, freq, COS): coeff})

    @classmethod
    def sin(cls, freq: int, coeff: Scalar = 1, power: int = 0) -> "TrigPoly":
        return cls({(power, freq, SIN): coeff})

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "TrigPoly":
        return cls(
            ((r["power"], r["frequency"], r["parity"]),
             Fraction(int(r["numerator"]), int(r["denominator"])))
            for r in records
        )

    # -- container protocol ---------------------------------------------------

    @property
    def terms(self) -> tuple:
        """Canonical ``((power, frequency, parity), coeff)`` pairs."""
        return self._terms

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, freq: int, parity: str = COS, power: int = 0) -> Fraction:
        for key, c in self._terms:
            if key == (power, freq, parity):
                return c
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, TrigPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == TrigPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- ring operations ------------------------------------------------------

    def __add__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction)):
            other = TrigPoly.const(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return TrigPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly((k, -c) for k, c in self._terms)

    def __sub__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction)):
            other = TrigPoly.const(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TrigPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "TrigPoly":
        c = _as_fraction(c)
        if c == 0:
            return TrigPoly()
        return TrigPoly((k, c * v) for k, v in self._terms)

    def __mul__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        out: list = []
        half = Fraction(1, 2)
        for (p1, w1, s1), c1 in self._terms:
            for (p2, w2, s2), c2 in other._terms:
                p = p1 + p2
                c = half * c1 * c2
                if s1 == COS and s2 == COS:
                    out.append(((p, w1 - w2, COS), c))
                    out.append(((p, w1 + w2, COS), c))
                elif s1 == SIN and s2 == SIN:
                    out.append(((p, w1 - w2, COS), c))
                    out.append(((p, w1 + w2, COS), -c))
                elif s1 == SIN:  # sin a cos b
                    out.append(((p, w1 + w2, SIN), c))
                    out.append(((p, w1 - w2, SIN), c))
                else:  # cos a sin b
                    out.append(((p, w1 + w2, SIN), c))
                    out.append(((p, w1 - w2, SIN), -c))
        return TrigPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TrigPoly":
        if n < 0:
            raise ValueError("negative exponent")
        result = TrigPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    # -- calculus -------------------------------------------------------------

    def differentiate(self) -> "TrigPoly":
        out: list = []
        for (p, w, s), c in self._terms:
            if p:
                out.append(((p - 1, w, s), p * c))
            if w:
                if s == COS:
                    out.append(((p, w, SIN), -w * c))
                else:
                    out.append(((p, w, COS), w * c))
        return TrigPoly(out)

    def secular_part(self) -> "TrigPoly":
        return TrigPoly((k, c) for k, c in self._terms if k[0] >= 1)

    def periodic_part(self) -> "TrigPoly":
        return TrigPoly((k, c) for k, c in self._terms if k[0] == 0)

    def is_periodic(self) -> bool:
        return all(k[0] == 0 for k, _ in self._terms)

    @property
    def max_power(self) -> int:
        return max((k[0] for k, _ in self._terms), default=0)

    @property
    def frequencies(self) -> set:
        return {k[1] for k, _ in self._terms}

    def duhamel(self, omega: int, allow_secular: bool = False) -> "TrigPoly":
        """Return ``u(tau) = int_0^tau sin(omega (tau - s)) self(s) ds``.

        ``u`` solves ``u'' + omega**2 u = omega * self`` with ``u(0) = u'(0) = 0``.
        Sources with ``tau``-powers need ``allow_secular=True``.
        """
        return duhamel(omega, self, allow_secular=allow_secular)

    # -- evaluation and serialization ----------------------------------------

    def __call__(self, tau: float) -> float:
        return self.eval(tau)

    def eval(self, tau: float) -> float:
        total = 0.0
        for (p, w, s), c in self._terms:
            trig = math.cos(w * tau) if s == COS else math.sin(w * tau)
            total += float(c) * tau ** p * trig
        return total

    def value_at_zero(self) -> Fraction:
        """Exact value at ``tau = 0``."""
        return sum(
            (c for (p, _, s), c in self._terms if p == 0 and s == COS), Fraction(0)
        )

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (p, w, s), c in self._terms:
            parts.append(
                f"{c.numerator}/{c.denominator} * tau^{p} * {s}({w}*tau)"
            )
        return " + ".join(parts)

    def to_records(self) -> list:
        return [
            {
                "power": p,
                "frequency": w,
                "parity": s,
                "numerator": c.numerator,
                "denominator": c.denominator,
            }
            for (p, w, s), c in self._terms
        ]

    def __repr__(self) -> str:
        return f"TrigPoly({self.to_text()})"


def _duhamel_periodic_term(omega: int, freq: int, parity: str, c: Fraction) -> list:
    """Closed forms for a single power-0 source term."""
    w, k = omega, freq
    if parity == COS:
        if k == w:
            return [((1, w, SIN), c / 2)]
        f = Fraction(w, k * k - w * w) * c
        return [((0, w, COS), f), ((0, k, COS), -f)]
    if k == w:
        return [((1, w, COS), -c / 2), ((0, w, SIN), c / (2 * w))]
    d = Fraction(1, w * w - k * k) * c
    return [((0, k, SIN), w * d), ((0, w, SIN), -k * d)]


def duhamel(omega: int, source: TrigPoly, allow_secular: bool = False) -> TrigPoly:
    """Convolution ``int_0^tau sin(omega (tau - s)) source(s) ds`` in closed form."""
    if omega < 1:
        raise ValueError("omega must be a positive integer")
    if not source.is_periodic():
        if not allow_secular:
            raise SecularSourceError(
                "source has tau-power terms; pass allow_secular=True"
            )
        return _duhamel_general(omega, source)
    out: list = []
    for (_, k, s), c in source:
        out.extend(_duhamel_periodic_term(omega, k, s, c))
    return TrigPoly(out)


def _solve_exact(a: list, b: list) -> list:
    """Gauss-Jordan elimination over the rationals; ``a`` is square and regular."""
    n = len(b)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _duhamel_general(omega: int, source: TrigPoly) -> TrigPoly:
    """Undetermined coefficients per frequency, then homogeneous correction.

    Each frequency block ``k`` with top power ``P`` has a particular solution in
    ``span{tau^q cos(k tau), tau^q sin(k tau)}`` with ``q <= P`` (``P + 1`` at
    resonance ``k == omega``).
    """
    w = omega
    blocks: dict[int, list] = {}
    for key, c in source:
        blocks.setdefault(key[1], []).append((key, c))
    particular = TrigPoly()
    for k, terms in blocks.items():
        top = max(key[0] for key, _ in terms)
        resonant = k == w
        qmax = top + 1 if resonant else top
        basis = [(q, k, s) for q in range(qmax + 1) for s in ((COS, SIN) if k else (COS,))]
        if resonant:
            # tau^0 cos/sin(w tau) lie in the kernel; drop them from the ansatz
            basis = [b for b in basis if b[0] >= 1]
        rows = [(q, k, s) for q in range(qmax + 1) for s in ((COS, SIN) if k else (COS,))]
        images = []
        for b in basis:
            mono = TrigPoly({b: 1})
            images.append(mono.differentiate().differentiate() + mono.scale(w * w))
        rhs_poly = TrigPoly(terms).scale(w)
        if resonant:
            rows = [r for r in rows if r[0] < qmax]
        mat = [[img.coeff(r[1], r[2], r[0]) for img in images] for r in rows]
        rhs = [rhs_poly.coeff(r[1], r[2], r[0]) for r in rows]
        sol = _solve_exact(mat, rhs)
        particular = particular + TrigPoly(zip(basis, sol))
    u0 = particular.value_at_zero()
    du0 = particular.differentiate().value_at_zero()
    hom = TrigPoly({(0, w, COS): -u0, (0, w, SIN): -du0 / w})
    return particular + hom


"""Exact integer Laurent polynomials in one variable ``t``."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LaurentPolynomial:
    """``sum(coeffs[i] * t**(low + i))`` with nonzero end coefficients (or zero)."""

    low: int = 0
    coeffs: tuple = ()

    def __post_init__(self):
        c = list(int(x) for x in self.coeffs)
        low = self.low
        while c and c[0] == 0:
            c.pop(0)
            low += 1
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "low", low if c else 0)

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentPolynomial":
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(k, 0) for k in range(lo, hi + 1)))

    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls(0, (c,))

    @classmethod
    def monomial(cls, c: int, k: int) -> "LaurentPolynomial":
        return cls(k, (c,))

    @classmethod
    def t(cls) -> "LaurentPolynomial":
        return cls(1, (1,))

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return (self.low, self.coeffs) == (other.low, other.coeffs)

    def __hash__(self):
        return hash((self.low, self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> dict:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    @property
    def span(self) -> int:
        return 0 if self.is_zero() else len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def trailing(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __add__(self, other):
        other = _coerce(other)
        a, b = self.terms(), other.terms()
        for k, v in b.items():
            a[k] = a.get(k, 0) + v
        return LaurentPolynomial.from_dict(a)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.low, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return LaurentPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return LaurentPolynomial(self.low + other.low, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) == 1 and abs(self.coeffs[0]) == 1:
                return LaurentPolynomial(self.low * n, (self.coeffs[0] ** n,))
            raise ValueError("only units have negative powers")
        result = LaurentPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        from fractions import Fraction

        total = 0
        for k, c in self.terms().items():
            total += c * (Fraction(x) ** k if k < 0 else x**k)
        return total

    def conjugate(self) -> "LaurentPolynomial":
        """``f(t^-1)``."""
        return LaurentPolynomial(-self.high, tuple(reversed(self.coeffs))) if self.coeffs else self

    def shift(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self.low + k, self.coeffs)

    def normalized(self) -> "LaurentPolynomial":
        """Representative up to ``±t^k`` that is centred and has ``p(1) >= 0``.

        Odd-span polynomials are shifted to start at ``t^0``.
        """
        if self.is_zero():
            return self
        p = self
        if p.span % 2 == 0:
            p = p.shift(-(p.low + p.span // 2))
        else:
            p = p.shift(-p.low)
        s = sum(p.coeffs)
        if s < 0 or (s == 0 and p.leading < 0):
            p = -p
        return p

    def equal_up_to_unit(self, other) -> bool:
        return self.normalized() == _coerce(other).normalized()

    def is_symmetric(self) -> bool:
        return self == self.conjugate()

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.high, self.low - 1, -1):
            c = self.coeffs[k - self.low]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "t" if k == 1 else f"t^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        """Parse the output of ``str`` (terms like ``2*t^-1``, ``t``, ``-3``)."""
        import re

        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls()
        if s[0] not in "+-":
            s = "+" + s
        terms: dict = {}
        pos = 0
        pat = re.compile(r"([+-])(\d+)?(\*?t(?:\^(-?\d+))?)?")
        while pos < len(s):
            m = pat.match(s, pos)
            if not m or m.end() == pos + 1 or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"bad polynomial {text!r}")
            if m.group(3) and m.group(3).startswith("*") and m.group(2) is None:
                raise ValueError(f"bad polynomial {text!r}")
            c = int(m.group(2)) if m.group(2) else 1
            k = 0 if not m.group(3) else int(m.group(4)) if m.group(4) else 1
            terms[k] = terms.get(k, 0) + (c if m.group(1) == "+" else -c)
            pos = m.end()
        return cls.from_dict(terms)


def _coerce(x) -> LaurentPolynomial:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, int):
        return LaurentPolynomial.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")

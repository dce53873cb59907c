"""Laurent polynomials in the variable q with integer coefficients."""

from __future__ import annotations

__all__ = ["Laurent"]


class Laurent:
    """Immutable Laurent polynomial, a finite map exponent -> coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in dict(coeffs).items():
                if v != 0:
                    c[int(e)] = v
        self.coeffs = c

    @staticmethod
    def zero() -> "Laurent":
        return Laurent()

    @staticmethod
    def one() -> "Laurent":
        return Laurent({0: 1})

    @staticmethod
    def q(exp: int = 1, coeff: int = 1) -> "Laurent":
        return Laurent({exp: coeff})

    def __add__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        c = dict(self.coeffs)
        for e, v in other.coeffs.items():
            c[e] = c.get(e, 0) + v
        return Laurent(c)

    def __neg__(self):
        return Laurent({e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({e: v * other for e, v in self.coeffs.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        c = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return Laurent(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = Laurent.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        # descending exponents, in the style  -q^9 + q^5 + q^3 + q
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            v = self.coeffs[e]
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if e == 0:
                term = f"{mag}"
            else:
                var = "q" if e == 1 else f"q^{e}"
                term = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(f"{sign} {term}")
        return " ".join(parts)

    def to_json(self):
        return {str(e): self.coeffs[e] for e in sorted(self.coeffs)}

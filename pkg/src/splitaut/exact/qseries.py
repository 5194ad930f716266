"""Truncated q-expansions with exact rational coefficients."""

from fractions import Fraction


class QSeries:
    """sum_{n >= start} c_n q^n + O(q^prec).

    `coeffs[i]` is the coefficient of q^(start + i); only exponents below
    `prec` are stored and all comparisons are relative to `prec`.
    """

    __slots__ = ("start", "coeffs", "prec")

    def __init__(self, coeffs, prec, start=0):
        coeffs = [Fraction(c) for c in coeffs][: max(0, prec - start)]
        # normalise leading zeros into the start exponent
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        self.start = start + k if k < len(coeffs) else prec
        self.coeffs = tuple(coeffs[k:])
        self.prec = prec
        while self.coeffs and self.coeffs[-1] == 0:
            self.coeffs = self.coeffs[:-1]

    @classmethod
    def from_dict(cls, terms, prec):
        if not terms:
            return cls([], prec)
        lo = min(terms)
        hi = min(max(terms) + 1, prec)
        return cls([terms.get(n, 0) for n in range(lo, hi)], prec, lo)

    @classmethod
    def monomial(cls, n, prec, c=1):
        return cls([c], prec, n)

    def __getitem__(self, n):
        if n >= self.prec:
            raise IndexError(f"coefficient q^{n} is beyond precision {self.prec}")
        i = n - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def valuation(self):
        """Exponent of the first nonzero coefficient; prec if zero to precision."""
        return self.start if self.coeffs else self.prec

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def terms(self):
        return {self.start + i: c for i, c in enumerate(self.coeffs) if c}

    def list(self, lo=None, hi=None):
        lo = self.valuation() if lo is None else lo
        hi = self.prec if hi is None else hi
        return [self[n] for n in range(lo, hi)]

    def __repr__(self):
        return f"QSeries({self.to_text()})"

    def to_text(self):
        parts = []
        for n, c in sorted(self.terms().items()):
            mono = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            parts.append(("-" if c < 0 else "+", body))
        out = ""
        for i, (s, b) in enumerate(parts):
            out += (("-" if s == "-" else "") + b) if i == 0 else f" {s} {b}"
        return (out + " + " if out else "") + f"O(q^{self.prec})"

    def __eq__(self, other):
        """Equality up to the smaller of the two precisions."""
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.start, self.coeffs, self.prec))

    def truncate(self, prec):
        prec = min(prec, self.prec)
        return QSeries(self.coeffs, prec, self.start)

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.prec, self.start)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries([other], self.prec)
        prec = min(self.prec, other.prec)
        lo = min(self.valuation(), other.valuation())
        return QSeries([self[n] + other[n] for n in range(lo, prec)], prec, lo)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries([other], self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            c = Fraction(other)
            return QSeries([a * c for a in self.coeffs], self.prec, self.start)
        va, vb = self.valuation(), other.valuation()
        # O(q^pa) * b contributes at q^(pa + vb)
        prec = min(self.prec + vb, other.prec + va)
        if self.is_zero() or other.is_zero():
            return QSeries([], prec)
        start = va + vb
        n = prec - start
        out = [Fraction(0)] * max(n, 0)
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j, b in enumerate(other.coeffs[: n - i]):
                    out[i + j] += a * b
        return QSeries(out, prec, start)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return QSeries([1], self.prec - self.valuation())
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self):
        """1/self; the result may have negative valuation."""
        if self.is_zero():
            raise ZeroDivisionError("series is zero to full precision")
        v = self.start
        n = self.prec - v  # relative precision
        a = self.coeffs
        inv0 = 1 / a[0]
        b = [Fraction(0)] * n
        b[0] = inv0
        for k in range(1, n):
            s = sum((a[i] * b[k - i] for i in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
            b[k] = -s * inv0
        return QSeries(b, -v + n, -v)

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            c = Fraction(other)
            return QSeries([a / c for a in self.coeffs], self.prec, self.start)
        return self * other.inverse()

    def derive(self):
        """The operator q d/dq."""
        return QSeries([(self.start + i) * c for i, c in enumerate(self.coeffs)], self.prec, self.start)

    def substitute_power(self, k):
        """f(q^k)."""
        terms = {n * k: c for n, c in self.terms().items()}
        return QSeries.from_dict(terms, self.prec * k)

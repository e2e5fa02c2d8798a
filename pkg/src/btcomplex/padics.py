"""Exact truncated arithmetic over Q_p.

A nonzero scalar is a valuation together with a unit residue: x = p^v * u,
where u is stored modulo p^prec and is invertible mod p.  Zero is a
distinguished value (valuation +infinity), never an underflowed unit, so
membership and partition decisions downstream stay exact.  Additions that
cancel all stored digits return exact zero: every quantity in this package
is only ever interrogated far above the precision floor, and the driver
picks the working precision with guard digits to keep it that way.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf


class PrecisionError(ArithmeticError):
    """A result or query needs more p-adic digits than are stored."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def val_int(n: int, p: int):
    """p-adic valuation of an integer (INF for 0)."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_fraction(x: Fraction, p: int):
    if x == 0:
        return INF
    return val_int(x.numerator, p) - val_int(x.denominator, p)


class PadicConfig:
    """Working context: the prime p and the stored precision N (digits per unit)."""

    __slots__ = ("p", "N")

    def __init__(self, p: int, N: int):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if N < 1:
            raise ValueError(f"precision N must be >= 1, got {N}")
        self.p = p
        self.N = N

    def __repr__(self):
        return f"PadicConfig(p={self.p}, N={self.N})"

    def __eq__(self, other):
        return isinstance(other, PadicConfig) and (self.p, self.N) == (other.p, other.N)

    def __hash__(self):
        return hash((self.p, self.N))

    def zero(self) -> "PadicNum":
        return PadicNum(self, INF, 0, self.N)

    def one(self) -> "PadicNum":
        return PadicNum(self, 0, 1, self.N)

    def from_int(self, n: int) -> "PadicNum":
        if n == 0:
            return self.zero()
        v = val_int(n, self.p)
        u = (n // self.p**v) % self.p**self.N
        return PadicNum(self, v, u, self.N)

    def from_fraction(self, x: Fraction) -> "PadicNum":
        if x == 0:
            return self.zero()
        p = self.p
        vn = val_int(x.numerator, p)
        vd = val_int(x.denominator, p)
        mod = p**self.N
        un = (x.numerator // p**vn) % mod
        ud = (x.denominator // p**vd) % mod
        return PadicNum(self, vn - vd, un * pow(ud, -1, mod) % mod, self.N)

    def number(self, x) -> "PadicNum":
        """Coerce an int, Fraction, digit string, or PadicNum into this context."""
        if isinstance(x, PadicNum):
            if x.cfg.p != self.p:
                raise ValueError("prime mismatch")
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a p-adic number")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to PadicNum")

    def parse(self, s: str) -> "PadicNum":
        """Parse 'vV:uDDDD' (unit digits little-endian base p), or an int/rational literal."""
        s = s.strip()
        if s.startswith("v"):
            vpart, upart = s.split(":")
            if vpart == "vinf":
                return self.zero()
            v = int(vpart[1:])
            digits = upart[1:]
            u = 0
            for i, ch in enumerate(digits):
                d = int(ch)
                if not 0 <= d < self.p:
                    raise ValueError(f"digit {d} out of range for p={self.p}")
                u += d * self.p**i
            if u % self.p == 0:
                raise ValueError("unit part must be invertible mod p")
            return PadicNum(self, v, u % self.p**self.N, self.N)
        if "/" in s:
            num, den = s.split("/")
            return self.from_fraction(Fraction(int(num), int(den)))
        return self.from_int(int(s))


class PadicNum:
    """p^v * u with u known mod p^prec; exact zero has valuation INF."""

    __slots__ = ("cfg", "v", "u", "prec")

    def __init__(self, cfg: PadicConfig, v, u: int, prec: int):
        self.cfg = cfg
        self.v = v
        self.u = u
        self.prec = prec
        if v is INF:
            assert u == 0
        else:
            assert 1 <= prec <= cfg.N
            assert 0 < u < cfg.p**prec and u % cfg.p != 0, (u, prec)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.v is INF

    @property
    def valuation(self):
        return self.v

    def unit_residue(self, digits: int) -> int:
        """The unit part mod p^digits; raises if not stored to that depth."""
        if self.is_zero():
            raise PrecisionError("exact zero has no unit part")
        if digits > self.prec:
            raise PrecisionError(f"need {digits} unit digits, have {self.prec}")
        return self.u % self.cfg.p**digits

    def residue_class(self, m: int) -> Fraction:
        """Canonical representative of x mod p^m: 0, or p^v * (u mod p^(m-v))."""
        if self.is_zero() or self.v >= m:
            return Fraction(0)
        digits = m - self.v
        u = self.unit_residue(digits)
        if self.v >= 0:
            return Fraction(u * self.cfg.p**self.v)
        return Fraction(u, self.cfg.p ** (-self.v))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "PadicNum") -> "PadicNum":
        cfg = self.cfg
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = self, other
        if a.v > b.v:
            a, b = b, a
        # both known mod p^K; work at scale p^(a.v)
        K = min(a.v + a.prec, b.v + b.prec)
        digits = K - a.v
        p = cfg.p
        r = (a.u + b.u * p ** (b.v - a.v)) % p**digits
        if r == 0:
            # full cancellation of every stored digit: the zero of this precision
            return cfg.zero()
        c = val_int(r, p)
        return PadicNum(cfg, a.v + c, (r // p**c) % p ** (digits - c), digits - c)

    def __neg__(self) -> "PadicNum":
        if self.is_zero():
            return self
        return PadicNum(self.cfg, self.v, (-self.u) % self.cfg.p**self.prec, self.prec)

    def __sub__(self, other: "PadicNum") -> "PadicNum":
        return self + (-other)

    def __mul__(self, other: "PadicNum") -> "PadicNum":
        cfg = self.cfg
        if self.is_zero() or other.is_zero():
            return cfg.zero()
        prec = min(self.prec, other.prec)
        return PadicNum(cfg, self.v + other.v, (self.u * other.u) % cfg.p**prec, prec)

    def inverse(self) -> "PadicNum":
        if self.is_zero():
            raise ZeroDivisionError("division by exact p-adic zero")
        mod = self.cfg.p**self.prec
        return PadicNum(self.cfg, -self.v, pow(self.u, -1, mod), self.prec)

    def __truediv__(self, other: "PadicNum") -> "PadicNum":
        return self * other.inverse()

    def __pow__(self, e: int) -> "PadicNum":
        if e == 0:
            return PadicNum(self.cfg, 0, 1, self.prec if not self.is_zero() else self.cfg.N)
        base = self if e > 0 else self.inverse()
        out = base
        for _ in range(abs(e) - 1):
            out = out * base
        return out

    def shift(self, k: int) -> "PadicNum":
        """Multiply by p^k (no digit loss)."""
        if self.is_zero():
            return self
        return PadicNum(self.cfg, self.v + k, self.u, self.prec)

    # -- comparison & display -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PadicNum):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.v != other.v:
            return False
        d = min(self.prec, other.prec)
        p = self.cfg.p
        return self.u % p**d == other.u % p**d

    __hash__ = None  # truncated values are not reliable dict keys

    def serialize(self) -> str:
        """'vV:uDDDD' with unit digits little-endian base p; zero is 'vinf:u0'."""
        if self.is_zero():
            return "vinf:u0"
        digits = []
        u = self.u
        for _ in range(self.prec):
            u, d = divmod(u, self.cfg.p)
            digits.append(str(d))
        while len(digits) > 1 and digits[-1] == "0":
            digits.pop()
        return f"v{self.v}:u{''.join(digits)}"

    def __repr__(self):
        return f"PadicNum({self.cfg.p}-adic {self.serialize()})"


def val(x: PadicNum):
    """Valuation of x: an integer, or INF for exact zero. |x| = p^(-val(x))."""
    return x.valuation


def arith(x: PadicNum, y: PadicNum, op: str) -> PadicNum:
    """Dispatch helper: op in {'add','sub','mul','div'}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")

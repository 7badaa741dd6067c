"""Exact truncated power series and the generating functions built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``c[0..K]`` of a series truncated after order ``K``."""

    coeffs: tuple[Fraction, ...]

    @classmethod
    def of(cls, coeffs: Iterable, order: int) -> "PowerSeries":
        c = [Fraction(x) for x in coeffs][: order + 1]
        c += [Fraction(0)] * (order + 1 - len(c))
        return cls(tuple(c))

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls.of([], order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls.of([1], order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> "PowerSeries":
        return cls.of([0] * k + [c], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return len(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries.of(self.coeffs, order)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.of([other], self.order)

    def __add__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        k = min(self.order, o.order)
        return PowerSeries(tuple(self.coeffs[i] + o.coeffs[i] for i in range(k + 1)))

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "PowerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            x = Fraction(other)
            return PowerSeries(tuple(c * x for c in self.coeffs))
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        nz = [(i, c) for i, c in enumerate(a[: k + 1]) if c]
        out = [Fraction(0)] * (k + 1)
        for j, d in enumerate(b[: k + 1]):
            if not d:
                continue
            for i, c in nz:
                if i + j > k:
                    break
                out[i + j] += c * d
        return PowerSeries(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PowerSeries":
        result = PowerSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "PowerSeries":
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("series is not a unit")
        out = [Fraction(0)] * len(a)
        out[0] = 1 / a[0]
        for n in range(1, len(a)):
            s = sum((a[i] * out[n - i] for i in range(1, n + 1) if a[i]), Fraction(0))
            out[n] = -s * out[0]
        return PowerSeries(tuple(out))

    def __truediv__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by ``x**k``; negative ``k`` requires vanishing low coefficients."""
        if k >= 0:
            return PowerSeries.of([0] * k + list(self.coeffs), self.order)
        if any(self.coeffs[: -k]):
            raise ValueError("negative shift would produce negative powers")
        return PowerSeries.of(self.coeffs[-k:], self.order + k)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """``self(inner(x))`` by Horner's rule; ``inner`` must have zero constant term."""
        if inner.coeffs[0]:
            raise ValueError("composition needs an inner series of positive valuation")
        k = min(self.order, inner.order)
        inner = inner.truncate(k)
        acc = PowerSeries.zero(k)
        for c in reversed(self.coeffs[: k + 1]):
            acc = acc * inner + c
        return acc

    def substitute_power(self, m: int) -> "PowerSeries":
        """``self(x**m)``, keeping the truncation at ``m * order``."""
        out = [Fraction(0)] * (m * self.order + 1)
        for i, c in enumerate(self.coeffs):
            out[m * i] = c
        return PowerSeries(tuple(out))

    def evaluate(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def to_json(self, variable: str = "lambda") -> dict:
        return {"variable": variable, "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "PowerSeries":
        return cls(tuple(Fraction(int(n), int(d)) for n, d in data["coeffs"]))


# ---------------------------------------------------------------- melonic two-point function


def melonic_T(order: int) -> PowerSeries:
    """T as a series in ``x = lambda**2`` from the fixed point ``T = 1 + x T**4``.

    The iteration is run coefficient by coefficient: once ``t_0..t_{n-1}``
    are settled, one more round of the fixed point settles
    ``t_n = [x**(n-1)] T**4``.  Keeping ``T**2`` alongside makes each round
    linear in ``n``.
    """
    t = [1]
    t2 = [1]
    for n in range(1, order + 1):
        k = n - 1
        # [x^k] T^4 = sum_i [x^i]T^2 [x^(k-i)]T^2, with T^2 known up to k
        t.append(sum(t2[i] * t2[k - i] for i in range(k + 1)))
        t2.append(sum(t[i] * t[n - i] for i in range(n + 1)))
    return PowerSeries.of(t, order)


def melonic_T_iterated(order: int) -> PowerSeries:
    """Plain whole-series iteration of ``T <- 1 + x T**4``, as an independent check."""
    x = PowerSeries.monomial(1, order)
    t = PowerSeries.one(order)
    for _ in range(order):
        t = 1 + x * t ** 4
    return t


def fuss_catalan(n: int) -> int:
    return math.comb(4 * n, n) // (3 * n + 1)


def x_to_lambda(s: PowerSeries) -> PowerSeries:
    """Reindex a series in ``x = lambda**2`` as a series in ``lambda``."""
    return s.substitute_power(2)


def lambda_c_squared() -> Fraction:
    return Fraction(27, 256)


def extrapolated_sum(terms: Sequence[float], powers: Sequence[float] = (0.5, 1.5, 2.5, 3.5)) -> float:
    """Limit of the partial sums of a slowly converging series.

    Fits ``S_N = S + sum_k a_k N**(-p_k)`` on the tail of the partial sums,
    the form produced by coefficients decaying like ``n**(-3/2)`` times an
    expansion in ``1/n``.
    """
    partial = np.cumsum(np.asarray(terms, dtype=float))
    n = np.arange(1, len(partial) + 1, dtype=float)
    sel = slice(len(partial) // 4, None)
    cols = [np.ones_like(n[sel])] + [n[sel] ** (-p) for p in powers]
    a = np.vstack(cols).T
    sol, *_ = np.linalg.lstsq(a, partial[sel], rcond=None)
    return float(sol[0])


def T_at_critical(order: int = 200) -> float:
    """T(lambda_c) estimated from the first ``order`` coefficients."""
    t = melonic_T(order)
    xc = 27 / 256
    terms = [float(c) * xc ** k for k, c in enumerate(t.coeffs)]
    return extrapolated_sum(terms)


# ---------------------------------------------------------------- ladders and schemes


def ladder_gf(kind: str, order: int) -> PowerSeries:
    """Generating function in ``u`` of the ladders behind one ladder-vertex."""
    one = PowerSeries.one(order)
    u = PowerSeries.monomial(1, order)
    if kind == "Ne":
        return u ** 2 / (one - u ** 2)
    if kind == "No":
        return u ** 3 / (one - u ** 2)
    if kind in ("L", "R"):
        return u ** 2 / (one - u)
    if kind == "B":
        return 6 * u ** 2 / ((one - 3 * u) * (one - u))
    raise ValueError(f"unknown ladder type {kind!r}")


def scheme_profile(scheme) -> tuple[int, dict[str, int]]:
    """Half the number of standard vertices and the ladder-vertex counts."""
    kinds = scheme.kinds
    v = kinds.count("S")
    if v & 1:
        raise ValueError("a scheme with vanishing grade has an even number of standard vertices")
    return v // 2, {k: kinds.count(k) for k in ("Ne", "No", "L", "R", "B")}


def scheme_gf(scheme, order: int) -> PowerSeries:
    """u**p times the product of ladder generating functions."""
    p, counts = scheme_profile(scheme)
    s = PowerSeries.monomial(p, order)
    for kind, n in counts.items():
        if n:
            s = s * ladder_gf(kind, order) ** n
    return s


def G_g(schemes: Sequence, order: int, complete: bool = True) -> PowerSeries:
    """Series in ``lambda`` of all rooted graphs over the given complete scheme set.

    Every edge carries a melonic two-point insertion, so the sum is
    ``T * G_S(T - 1)`` with ``T`` taken as a series in ``x = lambda**2``.
    """
    if not complete:
        raise ValueError("the graph series needs the complete scheme set of the genus")
    half = order // 2
    t = melonic_T(half)
    u = t - 1
    total = PowerSeries.zero(half)
    for s in schemes:
        total = total + t * scheme_gf(s, half).compose(u)
    return x_to_lambda(total).truncate(order)


def G_g_2pi(schemes: Sequence, order: int, complete: bool = True) -> PowerSeries:
    """Series in ``lambda`` of 2PI graphs: unit propagators, ``u = lambda**2``."""
    if not complete:
        raise ValueError("the graph series needs the complete 2PI scheme set of the genus")
    half = order // 2
    total = PowerSeries.zero(half)
    for s in schemes:
        total = total + scheme_gf(s, half)
    return x_to_lambda(total).truncate(order)


# ---------------------------------------------------------------- ratio-method diagnostics


def domb_sykes(coeffs: Sequence[float], start: int | None = None) -> tuple[float, float]:
    """Radius of convergence and power-law exponent from coefficient ratios.

    For ``a_n ~ C rho**(-n) n**beta`` the ratios obey
    ``a_n / a_{n-1} = (1 + beta/n + O(n**-2)) / rho``; a straight-line fit
    in ``1/n`` gives ``1/rho`` as intercept and ``beta/rho`` as slope.
    """
    a = np.asarray(coeffs, dtype=float)
    n = np.arange(len(a), dtype=float)
    start = start if start is not None else len(a) // 2
    idx = np.arange(max(start, 2), len(a))
    r = a[idx] / a[idx - 1]
    x = 1.0 / n[idx]
    # quadratic in 1/n absorbs the next correction
    coef = np.polyfit(x, r, 2)
    inv_rho = coef[-1]
    slope = coef[-2]
    return float(1 / inv_rho), float(slope / inv_rho)


def log_ratio(big: Sequence[int], start: int | None = None) -> tuple[float, float]:
    """Same as :func:`domb_sykes` for exact (possibly huge) rational coefficients."""
    floats = []
    logs = [math.log(abs(Fraction(c).numerator)) - math.log(Fraction(c).denominator) for c in big]
    ref = logs[-1]
    # rescale to keep the ratio computation in range
    m = len(logs) - 1
    shift = ref / m if m else 0.0
    for k, lg in enumerate(logs):
        floats.append(math.exp(lg - k * shift))
    rho, beta = domb_sykes(floats, start)
    return rho * math.exp(-shift), beta

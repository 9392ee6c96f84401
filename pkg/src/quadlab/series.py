"""Exact truncated power series and the generating-function blocks for
label-constrained tree families.

All arithmetic is over ``fractions.Fraction``; nothing here ever touches
floating point.  A :class:`Series` carries its truncation order explicitly
and refuses to pretend it knows coefficients beyond it.

The block series (``R_ell``, ``X``, ``Xt``, ``Y``) are computed by two
independent routes:

* a *combinatorial* route -- the planted-fan fixpoint recursion and
  Motzkin-path transfer sums, which also give meaning to the boundary
  parameter value -1 needed by finite-difference extraction, and to the
  symbolic "infinity" parameter (no label constraint);
* a *closed* route -- products and ratios of q-numbers ``[k]_x`` built on
  the algebraic series R(g), x(g).

Route agreement is asserted by the test suite over a parameter box; the
boundary value -1 is only ever evaluated combinatorially (the q-number
identities do not extend there).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

__all__ = [
    "Series",
    "BiSeries",
    "SeriesError",
    "NonInvertible",
    "BadSqrtBase",
    "ParameterOutOfRange",
    "NegativeParameterAfterDelta",
    "base_series",
    "BlockContext",
    "block_series",
    "assemble_gf",
    "delta_extract",
    "ASSEMBLY_KINDS",
]

INF = None  # symbolic "no constraint" parameter value


class SeriesError(ValueError):
    pass


class NonInvertible(SeriesError):
    pass


class BadSqrtBase(SeriesError):
    pass


class ParameterOutOfRange(SeriesError):
    pass


class NegativeParameterAfterDelta(SeriesError):
    pass


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    return Fraction(v)


class Series:
    """Truncated power series sum_{k<=order} c_k g^k with exact rational c_k."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise SeriesError("order must be >= 0")
        cs = [_frac(c) for c in coeffs[: order + 1]]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs = cs
        self.order = order

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(order: int) -> "Series":
        return Series([], order)

    @staticmethod
    def one(order: int) -> "Series":
        return Series([1], order)

    @staticmethod
    def const(c, order: int) -> "Series":
        return Series([c], order)

    @staticmethod
    def gen(order: int) -> "Series":
        """The variable g itself."""
        return Series([0, 1], order)

    # -- basic queries ------------------------------------------------
    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.order:
            raise SeriesError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def valuation(self) -> int:
        """Index of first nonzero coefficient; order+1 if identically zero."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return self.order + 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise SeriesError("cannot extend truncation order")
        return Series(self.coeffs[: order + 1], order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, tuple(self.coeffs)))

    def __repr__(self):
        terms = [f"{c}*g^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(g^{self.order + 1})>"

    # -- ring operations ----------------------------------------------
    def _common_order(self, other: "Series") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, Series):
            n = self._common_order(other)
            return Series([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)
        cs = list(self.coeffs)
        cs[0] += _frac(other)
        return Series(cs, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, Series):
            return self + (-other)
        return self + (-_frac(other))

    def __rsub__(self, other):
        return (-self) + _frac(other)

    def __mul__(self, other):
        if isinstance(other, Series):
            n = self._common_order(other)
            out = [Fraction(0)] * (n + 1)
            for i, a in enumerate(self.coeffs[: n + 1]):
                if a == 0:
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b != 0:
                        out[i + j] += a * b
            return Series(out, n)
        c = _frac(other)
        return Series([c * a for a in self.coeffs], self.order)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Series.one(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Series":
        if self.coeffs[0] == 0:
            raise NonInvertible("constant term is zero")
        n = self.order
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [Fraction(0)] * n
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                acc += self.coeffs[i] * out[k - i]
            out[k] = -inv0 * acc
        return Series(out, n)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return self * (Fraction(1) / _frac(other))
        n = self._common_order(other)
        a, b = self.truncate(n), other.truncate(n)
        v = b.valuation()
        if v > n:
            raise NonInvertible("division by zero series")
        if v > 0:
            if a.valuation() < v:
                raise NonInvertible(
                    f"numerator valuation {a.valuation()} below denominator valuation {v}"
                )
            # cancel the common power of g; the truncation order drops by v
            a = Series(a.coeffs[v:], n - v)
            b = Series(b.coeffs[v:], n - v)
        return a * b.inverse()

    def sqrt(self) -> "Series":
        """Square root with rational constant term (must be a perfect square)."""
        c0 = self.coeffs[0]
        if c0 <= 0:
            raise BadSqrtBase(f"constant term {c0} not a positive square")
        p, q = c0.numerator, c0.denominator
        sp, sq = isqrt(p), isqrt(q)
        if sp * sp != p or sq * sq != q:
            raise BadSqrtBase(f"constant term {c0} not a perfect square")
        y0 = Fraction(sp, sq)
        n = self.order
        out = [y0] + [Fraction(0)] * n
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k):
                acc += out[i] * out[k - i]
            out[k] = (self.coeffs[k] - acc) / (2 * y0)
        return Series(out, n)

    def compose(self, inner: "Series") -> "Series":
        """self(inner(g)); inner must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise SeriesError("composition requires inner constant term 0")
        n = min(self.order, inner.order)
        out = Series.const(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            out = out * inner.truncate(n) + self.coeffs[k]
        return out


class BiSeries:
    """Truncated series in two edge weights, exact rational coefficients."""

    __slots__ = ("coeffs", "orders")

    def __init__(self, coeffs, orders):
        n1, n2 = orders
        cs = [[Fraction(0)] * (n2 + 1) for _ in range(n1 + 1)]
        for i, row in enumerate(coeffs[: n1 + 1]):
            for j, c in enumerate(row[: n2 + 1]):
                cs[i][j] = _frac(c)
        self.coeffs = cs
        self.orders = (n1, n2)

    @staticmethod
    def outer(a: Series, b: Series) -> "BiSeries":
        """Product f(g1) * h(g2) as a bivariate series."""
        return BiSeries(
            [[ca * cb for cb in b.coeffs] for ca in a.coeffs], (a.order, b.order)
        )

    def __getitem__(self, ij):
        i, j = ij
        n1, n2 = self.orders
        if i > n1 or j > n2:
            raise SeriesError("coefficient beyond truncation orders")
        if i < 0 or j < 0:
            return Fraction(0)
        return self.coeffs[i][j]

    def diagonal(self) -> Series:
        """Set g1 = g2 = g."""
        n1, n2 = self.orders
        n = min(n1 + n2, max(n1, n2))  # exact only up to min(n1,n2) in general
        n = min(n1, n2)
        out = [Fraction(0)] * (n + 1)
        for i in range(n1 + 1):
            for j in range(n2 + 1):
                if i + j <= n:
                    out[i + j] += self.coeffs[i][j]
        return Series(out, n)

    def __add__(self, other):
        n1 = min(self.orders[0], other.orders[0])
        n2 = min(self.orders[1], other.orders[1])
        return BiSeries(
            [
                [self.coeffs[i][j] + other.coeffs[i][j] for j in range(n2 + 1)]
                for i in range(n1 + 1)
            ],
            (n1, n2),
        )

    def __sub__(self, other):
        n1 = min(self.orders[0], other.orders[0])
        n2 = min(self.orders[1], other.orders[1])
        return BiSeries(
            [
                [self.coeffs[i][j] - other.coeffs[i][j] for j in range(n2 + 1)]
                for i in range(n1 + 1)
            ],
            (n1, n2),
        )

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.orders == other.orders and self.coeffs == other.coeffs

    def __mul__(self, other):
        n1 = min(self.orders[0], other.orders[0])
        n2 = min(self.orders[1], other.orders[1])
        out = [[Fraction(0)] * (n2 + 1) for _ in range(n1 + 1)]
        for i1 in range(n1 + 1):
            for j1 in range(n2 + 1):
                a = self.coeffs[i1][j1]
                if a == 0:
                    continue
                for i2 in range(n1 + 1 - i1):
                    for j2 in range(n2 + 1 - j1):
                        b = other.coeffs[i2][j2]
                        if b != 0:
                            out[i1 + i2][j1 + j2] += a * b
        return BiSeries(out, (n1, n2))


# ----------------------------------------------------------------------
# Base algebraic series R(g), x(g)
# ----------------------------------------------------------------------

def base_series(order: int, margin: int = 4):
    """The tree series R and the q-number base x, exact to ``order``.

    R = (1 - sqrt(1-12g)) / (6g); x is the radical expression whose
    numerator and denominator both vanish to second order in g, so both
    are computed with extra working precision before the cancellation.
    """
    n = order + margin
    g = Series.gen(n)
    s = (1 - 12 * g).sqrt()
    R = (1 - s) / (6 * g)

    inner = 72 * g * g + 6 * g + s - 1           # = 54 g^2 (1 + O(g))
    rad = (6 * inner)                            # = 324 g^2 (1 + O(g)), perfect square lead
    if rad.valuation() != 2:
        raise SeriesError("unexpected valuation in x(g) radical")
    root = Series(rad.coeffs[2:], n - 2).sqrt()  # sqrt(6*inner)/g
    num = 1 - 24 * g - s + Series([0] + root.coeffs, n - 1)  # restore one power of g
    den = 2 * (6 * g + s - 1)
    x = num / den
    return R.truncate(order), x.truncate(min(order, x.order))


# ----------------------------------------------------------------------
# Block context: caches and the two evaluation routes
# ----------------------------------------------------------------------

class BlockContext:
    """Shared cache of base series and block series at a fixed truncation."""

    def __init__(self, order: int):
        self.order = order
        self.R, self.x = base_series(order)
        self._one = Series.one(order)
        self._zero = Series.zero(order)
        self._g = Series.gen(order)
        self._q = {}
        self._r_closed = {}
        self._xt = {}
        self._xx = {}
        self._y = {}
        self._asm = {}

    # -- q-numbers and closed-form R ---------------------------------
    def qnum(self, ell) -> Series:
        """[ell]_x = (1 - x^ell)/(1 - x) = 1 + x + ... + x^(ell-1); [inf] = 1/(1-x)."""
        key = ell
        out = self._q.get(key)
        if out is not None:
            return out
        if ell is INF:
            out = (self._one - self.x).inverse()
        else:
            if ell < 0:
                raise ParameterOutOfRange("q-number index must be >= 0")
            out = self._zero
            xp = self._one
            for _ in range(ell):
                out = out + xp
                xp = xp * self.x
        self._q[key] = out
        return out

    def xpow(self, k: int) -> Series:
        return self.x ** k

    def r_closed(self, ell) -> Series:
        """R_ell = R [ell][ell+3] / ([ell+1][ell+2]); R_0 = 0, R_inf = R."""
        out = self._r_closed.get(ell)
        if out is not None:
            return out
        if ell is INF:
            out = self.R
        elif ell <= 0:
            out = self._zero
        else:
            q = self.qnum
            out = self.R * q(ell) * q(ell + 3) / (q(ell + 1) * q(ell + 2))
        self._r_closed[ell] = out
        return out

    def r_recursion(self, max_ell: int) -> list:
        """R_0..R_max_ell by the planted-fan fixpoint R_l = 1 + g R_l (R_{l-1}+R_l+R_{l+1}).

        The array is seeded with the unconstrained R at the top boundary;
        the boundary error is O(g^top) and does not reach the truncation.
        """
        n = self.order
        top = max_ell + n + 2
        rs = [self._zero] + [self._one for _ in range(top)]
        for _ in range(n + 1):
            new = [self._zero]
            for ell in range(1, top + 1):
                up = rs[ell + 1] if ell + 1 <= top else self.R
                new.append(self._one + self._g * rs[ell] * (rs[ell - 1] + rs[ell] + up))
            rs = new
        return rs[: max_ell + 1]

    @staticmethod
    def _admissible(*sides) -> bool:
        """Whether the single-vertex ("trivial") object is admitted.

        Finite-difference boundary evaluations at a side parameter of -1
        exclude even the trivial term, in line with the [s+1]-factor
        vanishing of the closed forms; otherwise Delta cells would lose
        the degenerate instances.
        """
        return all(s is INF or s >= 0 for s in sides)

    def _fan(self, host, side) -> Series:
        """Generating function of the planted fan at a host with shifted label
        ``host`` under side constraint ``side`` (labels >= 1 - side).

        ``side`` may be -1 and upward, or INF for no constraint.  The host
        vertex itself is part of the constraint, hence the zero value at
        non-positive effective labels.
        """
        if side is INF:
            return self.R
        eff = host + side
        if eff <= 0:
            return self._zero
        return self.r_closed(eff)

    # -- combinatorial (transfer-sum) routes ---------------------------
    def x_comb(self, a, b) -> Series:
        """X_{a,b}: branch 0 -> 0 with labels >= 0, fans on both sides."""
        key = (a, b)
        out = self._xx.get(key)
        if out is not None:
            return out
        n = self.order
        acc = self._one if self._admissible(a, b) else self._zero
        cur = {0: self._one}
        for step in range(n):
            w = {}
            for h, val in cur.items():
                fan = self._g * self._fan(h, a) * self._fan(h, b)
                if fan.is_zero():
                    continue
                contrib = val * fan
                for h2 in (h - 1, h, h + 1):
                    if h2 < 0 or h2 > n - step - 1:
                        continue
                    w[h2] = w.get(h2, self._zero) + contrib
            cur = w
            if not cur:
                break
            if 0 in cur:
                acc = acc + cur[0]
        self._xx[key] = acc
        return acc

    def xt_comb(self, ell: int, a, b) -> Series:
        """Xt_{ell;a,b}: branch ell -> 0, interior labels > 0; the label-ell
        extremity carries an a-side fan only, the label-0 extremity a b-side
        fan only."""
        if ell is INF:
            raise ParameterOutOfRange("branch label of Xt must be finite")
        if ell < 0:
            raise ParameterOutOfRange("branch label of Xt must be >= 0")
        key = (ell, a, b)
        out = self._xt.get(key)
        if out is not None:
            return out
        if ell == 0:
            out = self._one if self._admissible(a, b) else self._zero
        else:
            n = self.order
            end_fan = self._fan(0, b)
            acc = self._zero
            cur = {ell: self._one}
            for step in range(n):
                w = {}
                for h, val in cur.items():
                    fan = self._g * self._fan(h, a)
                    if step >= 1:
                        fan = fan * self._fan(h, b)
                    if fan.is_zero():
                        continue
                    contrib = val * fan
                    for h2 in (h - 1, h, h + 1):
                        if h2 > n - step - 1:
                            continue
                        if h2 == 0:
                            acc = acc + contrib
                        elif h2 > 0:
                            w[h2] = w.get(h2, self._zero) + contrib
                cur = w
                if not cur:
                    break
            out = end_fan * acc
        self._xt[key] = out
        return out

    def y_comb(self, a, b, c) -> Series:
        """Y_{a,b,c} = sum_ell Xt_{ell;a,b} Xt_{ell;b,c} Xt_{ell;c,a}."""
        key = (a, b, c)
        out = self._y.get(key)
        if out is not None:
            return out
        acc = self._one if self._admissible(a, b, c) else self._zero  # ell = 0 term
        ell = 1
        while 3 * ell <= self.order:
            acc = acc + self.xt_comb(ell, a, b) * self.xt_comb(ell, b, c) * self.xt_comb(ell, c, a)
            ell += 1
        self._y[key] = acc
        return acc

    # -- closed routes --------------------------------------------------
    def x_closed(self, s, t) -> Series:
        q = self.qnum
        if (s is not INF and s < 0) or (t is not INF and t < 0):
            raise ParameterOutOfRange("closed X needs parameters >= 0")
        if s is INF and t is INF:
            return q(3) / q(1)
        if t is INF:
            s, t = t, s
        if s is INF:
            return q(3) * q(t + 1) / (q(1) * q(t + 3))
        num = q(3) * q(s + 1) * q(t + 1) * q(s + t + 3)
        den = q(1) * q(s + 3) * q(t + 3) * q(s + t + 1)
        return num / den

    def xt_closed(self, ell: int, s: int, t: int) -> Series:
        if ell < 0 or s < 0 or t < 0:
            raise ParameterOutOfRange("closed Xt needs parameters >= 0")
        if ell == 0:
            return self._one
        q = self.qnum
        num = self.xpow(ell) * q(s + 1) * q(s + 2) * q(t) * q(t + 3) * q(2 * ell + s + t + 3)
        den = q(s + t + 3) * q(ell + s + 1) * q(ell + s + 2) * q(ell + t) * q(ell + t + 3)
        return num / den

    def y_closed(self, s: int, t: int, u: int) -> Series:
        if min(s, t, u) < 0:
            raise ParameterOutOfRange("closed Y needs parameters >= 0")
        q = self.qnum
        num = q(s + 3) * q(t + 3) * q(u + 3) * q(s + t + u + 3)
        den = q(3) * q(s + t + 3) * q(t + u + 3) * q(u + s + 3)
        return num / den

    def h_loop3_closed(self, s: int, t: int, u: int) -> Series:
        if s < 0 or t < 0 or u < 1:
            raise ParameterOutOfRange("closed H_loop needs s,t >= 0 and u >= 1")
        q = self.qnum
        num = (
            self.xpow(s + t)
            * q(3) * q(u) ** 2 * q(u + 1) ** 4 * q(u + 2) ** 2
            * q(2 * s + 2 * u + 3) * q(2 * t + 2 * u + 3)
        )
        den = q(1) * q(2 * u + 1) * q(2 * u + 3)
        for k in range(4):
            den = den * q(s + u + k) * q(t + u + k)
        return num / den

    def f_loop3_closed(self, s: int, t: int, u: int) -> Series:
        if s < 0 or t < 0 or u < 0:
            raise ParameterOutOfRange("closed F_loop needs parameters >= 0")
        q = self.qnum
        num = q(3) * q(s + 1) * q(t + 1) * q(u + 1) ** 4 * q(s + 2 * u + 3) * q(t + 2 * u + 3)
        den = (
            q(1) ** 3
            * q(s + u + 1) * q(s + u + 3) * q(t + u + 1) * q(t + u + 3)
            * q(2 * u + 1) * q(2 * u + 3)
        )
        return num / den

    def loop_marginal_closed(self, u: int) -> Series:
        """F_loop(inf, inf, u) = [3][u+1]^4 / ([1]^3 [2u+1][2u+3])."""
        if u < 0:
            raise ParameterOutOfRange("marginal needs u >= 0")
        q = self.qnum
        return q(3) * q(u + 1) ** 4 / (q(1) ** 3 * q(2 * u + 1) * q(2 * u + 3))

    # -- production block access ---------------------------------------
    def X(self, a, b) -> Series:
        if a is not INF and b is not INF and a >= 0 and b >= 0:
            key = ("Xc", a, b)
            out = self._asm.get(key)
            if out is None:
                out = self.x_closed(a, b)
                self._asm[key] = out
            return out
        return self.x_comb(a, b)

    def Xt(self, ell: int, a, b) -> Series:
        if a is not INF and b is not INF and a >= 0 and b >= 0:
            key = ("Xtc", ell, a, b)
            out = self._asm.get(key)
            if out is None:
                out = self.xt_closed(ell, a, b)
                self._asm[key] = out
            return out
        return self.xt_comb(ell, a, b)

    def Y(self, a, b, c) -> Series:
        if all(p is not INF and p >= 0 for p in (a, b, c)):
            key = ("Yc", a, b, c)
            out = self._asm.get(key)
            if out is None:
                out = self.y_closed(a, b, c)
                self._asm[key] = out
            return out
        return self.y_comb(a, b, c)


# ----------------------------------------------------------------------
# Assemblies and finite-difference extraction
# ----------------------------------------------------------------------

ASSEMBLY_KINDS = (
    "H_loop3",
    "F_loop3",
    "H_loop4",
    "F_loop4",
    "Hbar_loop4",
    "Fbar_loop4",
    "F3",
    "F6",
    "loop_marginal",
)


def _assemble(ctx: BlockContext, kind: str, params) -> Series:
    key = (kind,) + tuple(params)
    out = ctx._asm.get(key)
    if out is not None:
        return out
    if kind == "H_loop3":
        s, t, u = params
        out = ctx.Xt(s, u, u) * ctx.X(u, u) * ctx.Xt(t, u, u)
    elif kind == "F_loop3":
        s, t, u = params
        out = ctx.X(s, u) * ctx.Y(s, u, u) * ctx.X(u, u) * ctx.Y(t, u, u) * ctx.X(t, u)
    elif kind == "H_loop4":
        s, t, up, upp = params
        out = ctx.Xt(s, up, upp) * ctx.X(up, upp) * ctx.Xt(t, upp, up)
    elif kind == "F_loop4":
        s, t, up, upp = params
        out = (
            ctx.X(s, up) * ctx.Y(s, upp, up) * ctx.X(up, upp)
            * ctx.Y(t, up, upp) * ctx.X(t, upp)
        )
    elif kind == "Hbar_loop4":
        s, t, up, upp = params
        out = ctx.Xt(s, up, up) * ctx.X(upp, upp) * ctx.Xt(t, upp, upp)
    elif kind == "Fbar_loop4":
        s, t, up, upp = params
        out = (
            ctx.X(s, up) * ctx.Y(s, up, up) * ctx.X(upp, upp)
            * ctx.Y(t, upp, upp) * ctx.X(t, upp)
        )
    elif kind == "F3":
        s, t, u = params
        out = ctx.X(s, t) * ctx.X(t, u) * ctx.X(u, s) * ctx.Y(s, t, u) ** 2
    elif kind == "F6":
        sp, spp, tp, tpp, up, upp = params
        out = (
            ctx.X(spp, tpp) * ctx.X(tpp, upp) * ctx.X(upp, spp)
            * ctx.Y(sp, tp, up) * ctx.Y(spp, tpp, upp)
        )
    elif kind == "loop_marginal":
        (u,) = params
        out = ctx.X(INF, u) * ctx.Y(INF, u, u) * ctx.X(u, u) * ctx.Y(INF, u, u) * ctx.X(INF, u)
    else:
        raise ParameterOutOfRange(f"unknown assembly kind {kind!r}")
    ctx._asm[key] = out
    return out


def assemble_gf(ctx: BlockContext, kind: str, params) -> Series:
    """Product of block series exactly as displayed for the given family."""
    return _assemble(ctx, kind, tuple(params))


def fbar_loop_bivariate(ctx1: BlockContext, ctx2: BlockContext, s, t, up, upp) -> BiSeries:
    """Two-weight loop family: the v1-domain pieces in g1, the rest in g2."""
    f1 = ctx1.X(s, up) * ctx1.Y(s, up, up)
    f2 = ctx2.X(upp, upp) * ctx2.Y(t, upp, upp) * ctx2.X(t, upp)
    return BiSeries.outer(f1, f2)


def delta_extract(ctx: BlockContext, kind: str, params, delta_vars) -> Series:
    """Apply finite differences Delta_v f = f(..v..) - f(..v-1..) in the
    listed parameter slots (indices into ``params``).

    Slots may reach -1 after differencing; those evaluations use the
    combinatorial route automatically.  Below -1 is an error.
    """
    params = list(params)
    vars_ = list(delta_vars)
    if not vars_:
        for p in params:
            if p is not INF and p < -1:
                raise NegativeParameterAfterDelta(str(params))
        return _assemble(ctx, kind, params)
    v = vars_[0]
    if params[v] is INF:
        raise ParameterOutOfRange("cannot difference an infinite parameter")
    if params[v] < 0:
        raise NegativeParameterAfterDelta(f"slot {v} at {params[v]}")
    hi = delta_extract(ctx, kind, params, vars_[1:])
    lo_params = list(params)
    lo_params[v] -= 1
    lo = delta_extract(ctx, kind, lo_params, vars_[1:])
    return hi - lo


def delta_extract_bivariate(ctx1, ctx2, s, t, up, upp) -> BiSeries:
    """Delta_s Delta_t Delta_up Delta_upp of the two-weight loop family."""
    acc = None
    for ds in (0, -1):
        for dt in (0, -1):
            for du in (0, -1):
                for dv in (0, -1):
                    term = fbar_loop_bivariate(ctx1, ctx2, s + ds, t + dt, up + du, upp + dv)
                    sign = (ds + dt + du + dv) % 2
                    if acc is None:
                        acc = term if sign == 0 else BiSeries(
                            [[-c for c in row] for row in term.coeffs], term.orders
                        )
                    elif sign == 0:
                        acc = acc + term
                    else:
                        acc = acc - term
    return acc


def block_series(kind: str, params, order: int, ctx: BlockContext | None = None) -> Series:
    """Spec surface: compute a block by BOTH routes and assert equality.

    kind in {"qnum", "R", "X", "Xt", "Y"}; parameters must be in the
    closed-form domain (>= 0, finite) for the dual-route check.
    """
    ctx = ctx or BlockContext(order)
    if kind == "qnum":
        (ell,) = params
        return ctx.qnum(ell)
    if kind == "R":
        (ell,) = params
        closed = ctx.r_closed(ell)
        rec = ctx.r_recursion(ell)[ell]
        if closed != rec:
            raise SeriesError(f"R_{ell}: closed and recursion routes disagree")
        return closed
    if kind == "X":
        a, b = params
        closed, comb = ctx.x_closed(a, b), ctx.x_comb(a, b)
        if closed != comb:
            raise SeriesError(f"X_{{{a},{b}}}: routes disagree")
        return closed
    if kind == "Xt":
        ell, a, b = params
        closed, comb = ctx.xt_closed(ell, a, b), ctx.xt_comb(ell, a, b)
        if closed != comb:
            raise SeriesError(f"Xt_{{{ell};{a},{b}}}: routes disagree")
        return closed
    if kind == "Y":
        a, b, c = params
        closed, comb = ctx.y_closed(a, b, c), ctx.y_comb(a, b, c)
        if closed != comb:
            raise SeriesError(f"Y_{{{a},{b},{c}}}: routes disagree")
        return closed
    raise ParameterOutOfRange(f"unknown block kind {kind!r}")

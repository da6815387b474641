"""Commutative four-component extension of the expression engine.

Numbers here have the shape a + i*b + j*c + ij*d where i and j are two
commuting square roots of -1 and ij is their product, so ij*ij = +1.
Components are exact rational Expressions over one shared JetContext.
"""

from .errors import InternalCheckError, OdesplitError, ZeroDenominatorError
from .expressions import Expression

UNITS = ("1", "i", "j", "ij")


class BicomplexExpression:
    """Immutable four-component number with Expression components."""

    __slots__ = ("c1", "ci", "cj", "cij")

    def __init__(self, c1, ci, cj, cij):
        ctx = c1.ctx
        for part in (ci, cj, cij):
            if part.ctx is not ctx and part.ctx.signature() != ctx.signature():
                raise OdesplitError("components live in different contexts")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "ci", ci)
        object.__setattr__(self, "cj", cj)
        object.__setattr__(self, "cij", cij)

    def __setattr__(self, name, value):
        raise OdesplitError("bicomplex values are immutable")

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        z = Expression.constant(ctx, 0)
        return cls(z, z, z, z)

    @classmethod
    def from_real(cls, expr):
        z = Expression.constant(expr.ctx, 0)
        return cls(expr, z, z, z)

    @classmethod
    def unit(cls, tag, ctx):
        one = Expression.constant(ctx, 1)
        zero = Expression.constant(ctx, 0)
        parts = {u: zero for u in UNITS}
        if tag not in parts:
            raise OdesplitError("unknown unit tag: %r" % tag)
        parts[tag] = one
        return cls(parts["1"], parts["i"], parts["j"], parts["ij"])

    @classmethod
    def pair(cls, re, im, tag):
        """re + unit*im for unit tag 'i', 'j' or 'ij'."""
        zero = Expression.constant(re.ctx, 0)
        if tag == "i":
            return cls(re, im, zero, zero)
        if tag == "j":
            return cls(re, zero, im, zero)
        if tag == "ij":
            return cls(re, zero, zero, im)
        raise OdesplitError("pair needs an imaginary unit tag, got %r" % tag)

    # -- inspection -----------------------------------------------------

    @property
    def ctx(self):
        return self.c1.ctx

    def component(self, tag):
        try:
            return {"1": self.c1, "i": self.ci, "j": self.cj, "ij": self.cij}[tag]
        except KeyError:
            raise OdesplitError("unknown unit tag: %r" % tag) from None

    def components(self):
        return {"1": self.c1, "i": self.ci, "j": self.cj, "ij": self.cij}

    def is_zero(self):
        return (
            self.c1.is_zero()
            and self.ci.is_zero()
            and self.cj.is_zero()
            and self.cij.is_zero()
        )

    def free_of(self, tag):
        """True when the given imaginary direction carries nothing."""
        if tag == "i":
            return self.ci.is_zero() and self.cij.is_zero()
        if tag == "j":
            return self.cj.is_zero() and self.cij.is_zero()
        raise OdesplitError("free_of expects 'i' or 'j'")

    def __eq__(self, other):
        if not isinstance(other, BicomplexExpression):
            return NotImplemented
        return (
            self.c1 == other.c1
            and self.ci == other.ci
            and self.cj == other.cj
            and self.cij == other.cij
        )

    def __hash__(self):
        return hash((self.c1, self.ci, self.cj, self.cij))

    def __repr__(self):
        return "BicomplexExpression(%r, %r, %r, %r)" % (
            self.c1,
            self.ci,
            self.cj,
            self.cij,
        )

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BicomplexExpression):
            return other
        if isinstance(other, Expression):
            return BicomplexExpression.from_real(other)
        return BicomplexExpression.from_real(Expression.constant(self.ctx, other))

    def __add__(self, other):
        o = self._coerce(other)
        return BicomplexExpression(
            self.c1 + o.c1, self.ci + o.ci, self.cj + o.cj, self.cij + o.cij
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return BicomplexExpression(
            self.c1 - o.c1, self.ci - o.ci, self.cj - o.cj, self.cij - o.cij
        )

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return BicomplexExpression(-self.c1, -self.ci, -self.cj, -self.cij)

    def __mul__(self, other):
        o = self._coerce(other)
        a1, b1, c1, d1 = self.c1, self.ci, self.cj, self.cij
        a2, b2, c2, d2 = o.c1, o.ci, o.cj, o.cij
        return BicomplexExpression(
            a1 * a2 - b1 * b2 - c1 * c2 + d1 * d2,
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 - b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def times_unit(self, tag):
        """Multiply by a basis unit without building a unit value."""
        a, b, c, d = self.c1, self.ci, self.cj, self.cij
        if tag == "1":
            return self
        if tag == "i":
            return BicomplexExpression(-b, a, -d, c)
        if tag == "j":
            return BicomplexExpression(-c, -d, a, b)
        if tag == "ij":
            return BicomplexExpression(d, -c, -b, a)
        raise OdesplitError("unknown unit tag: %r" % tag)

    def conj_i(self):
        return BicomplexExpression(self.c1, -self.ci, self.cj, -self.cij)

    def conj_j(self):
        return BicomplexExpression(self.c1, self.ci, -self.cj, -self.cij)

    def scale(self, expr):
        return BicomplexExpression(
            self.c1 * expr, self.ci * expr, self.cj * expr, self.cij * expr
        )

    def inverse(self):
        """Multiplicative inverse by clearing i first, then j.

        self * conj_i(self) has no i part; multiplying by its j-conjugate
        leaves a single real denominator. A zero denominator means the
        value sits on the zero-divisor cone and has no inverse.
        """
        zi = self.conj_i()
        m = self * zi
        if not m.free_of("i"):
            raise InternalCheckError("i-conjugation failed to clear the i parts")
        mj = m.conj_j()
        norm = m * mj
        if not (norm.ci.is_zero() and norm.cj.is_zero() and norm.cij.is_zero()):
            raise InternalCheckError("j-conjugation failed to clear the j parts")
        n = norm.c1
        if n.is_zero():
            raise ZeroDenominatorError(
                "value is a zero divisor: its real norm vanishes identically"
            )
        return (zi * mj).scale(Expression.constant(n.ctx, 1) / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise OdesplitError("bicomplex powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        out = BicomplexExpression.from_real(Expression.constant(self.ctx, 1))
        base = self
        n = k
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out


def _poly_eval_bicomplex(poly, values, out_ctx):
    """Evaluate a sparse polynomial with bicomplex symbol values."""
    acc = BicomplexExpression.zero(out_ctx)
    cache = {}
    for mono, coeff in sorted(poly.items()):
        term = BicomplexExpression.from_real(Expression.constant(out_ctx, coeff))
        for idx, exp in mono:
            key = (idx, exp)
            if key not in cache:
                cache[key] = values[idx] ** exp
            term = term * cache[key]
        acc = acc + term
    return acc


def bicomplex_substitute(expr, mapping, out_ctx):
    """Evaluate expr with symbols replaced by bicomplex values.

    mapping sends symbol names to BicomplexExpressions over out_ctx;
    unmapped symbols pass through by name and must exist in out_ctx.
    """
    ctx = expr.ctx
    values = {}
    for name in expr.symbols():
        idx = ctx.index(name)
        if name in mapping:
            values[idx] = mapping[name]
        else:
            values[idx] = BicomplexExpression.from_real(
                Expression.symbol(out_ctx, name)
            )
    num = _poly_eval_bicomplex(expr.num, values, out_ctx)
    den = _poly_eval_bicomplex(expr.den, values, out_ctx)
    if den.is_zero():
        raise ZeroDenominatorError("substitution makes a denominator vanish")
    one = Expression.constant(out_ctx, 1)
    if den.ci.is_zero() and den.cj.is_zero() and den.cij.is_zero():
        if den.c1 == one:
            return num
        return num.scale(one / den.c1)
    return num / den


def bicomplex_expand(expr, pairs, out_ctx):
    """Expand expr by replacing symbols with two-component combinations.

    pairs maps a symbol name to (unit tag, real name, imaginary name);
    the named parts become symbols of out_ctx.
    """
    mapping = {}
    for name, (tag, re_name, im_name) in pairs.items():
        mapping[name] = BicomplexExpression.pair(
            Expression.symbol(out_ctx, re_name),
            Expression.symbol(out_ctx, im_name),
            tag,
        )
    return bicomplex_substitute(expr, mapping, out_ctx)

"""Exact multivariate rational expressions over jet contexts.

An Expression is a canonical quotient of two sparse polynomials with
Fraction coefficients. Canonical form: numerator and denominator share no
polynomial factor, the denominator is monic under the graded lexicographic
monomial order of the owning context, and zero is 0/1. Monomials are
tuples of (symbol index, exponent) pairs with ascending indices and
positive exponents.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import (
    InternalCheckError,
    OdesplitError,
    PoleError,
    ZeroDenominatorError,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

# ----------------------------------------------------------------------
# monomials

_EMPTY_MONO = ()


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        a, b = m1[i], m2[j]
        if a[0] == b[0]:
            out.append((a[0], a[1] + b[1]))
            i += 1
            j += 1
        elif a[0] < b[0]:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_div(m1, m2):
    """m1 / m2, or None when m2 does not divide m1."""
    if not m2:
        return m1
    rest = dict(m1)
    for idx, exp in m2:
        have = rest.get(idx, 0)
        if have < exp:
            return None
        if have == exp:
            del rest[idx]
        else:
            rest[idx] = have - exp
    return tuple(sorted(rest.items()))


def _mono_deg(m):
    return sum(e for _, e in m)


def _mono_key(m):
    """Sort key: ascending key order equals descending graded-lex order."""
    return (-_mono_deg(m), tuple((i, -e) for i, e in m))


# ----------------------------------------------------------------------
# sparse polynomials: dict monomial -> Fraction, zero coefficients absent

_P_ONE = {_EMPTY_MONO: _ONE}


def _poly_const(c):
    c = Fraction(c)
    return {} if c == 0 else {_EMPTY_MONO: c}


def _poly_sym(idx):
    return {((idx, 1),): _ONE}


def _poly_add(p1, p2):
    out = dict(p1)
    for m, c in p2.items():
        s = out.get(m, _ZERO) + c
        if s:
            out[m] = s
        elif m in out:
            del out[m]
    return out


def _poly_neg(p):
    return {m: -c for m, c in p.items()}


def _poly_sub(p1, p2):
    out = dict(p1)
    for m, c in p2.items():
        s = out.get(m, _ZERO) - c
        if s:
            out[m] = s
        elif m in out:
            del out[m]
    return out


def _poly_scale(p, c):
    if c == 0:
        return {}
    return {m: k * c for m, k in p.items()}


def _poly_mul(p1, p2):
    if not p1 or not p2:
        return {}
    if len(p1) > len(p2):
        p1, p2 = p2, p1
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            m = _mono_mul(m1, m2)
            s = out.get(m, _ZERO) + c1 * c2
            if s:
                out[m] = s
            elif m in out:
                del out[m]
    return out


def _poly_mul_term(p, mono, coeff):
    if not coeff:
        return {}
    return {_mono_mul(m, mono): c * coeff for m, c in p.items()}


def _poly_leading(p):
    return min(p, key=_mono_key)


def _poly_divexact(p, d):
    """Exact division; raises when d does not divide p."""
    if not d:
        raise ZeroDenominatorError("division by the zero polynomial")
    if not p:
        return {}
    if d == _P_ONE:
        return dict(p)
    md = _poly_leading(d)
    cd = d[md]
    rem = dict(p)
    out = {}
    while rem:
        mr = _poly_leading(rem)
        q = _mono_div(mr, md)
        if q is None:
            raise OdesplitError("inexact polynomial division")
        c = rem[mr] / cd
        out[q] = c
        for m, k in d.items():
            mm = _mono_mul(m, q)
            s = rem.get(mm, _ZERO) - k * c
            if s:
                rem[mm] = s
            elif mm in rem:
                del rem[mm]
    return out


def _poly_vars(p):
    vs = set()
    for m in p:
        for idx, _ in m:
            vs.add(idx)
    return vs


def _poly_deg_in(p, v):
    d = 0
    for m in p:
        for idx, e in m:
            if idx == v and e > d:
                d = e
    return d


def _mono_content(p):
    """Per-variable minimum exponent across all terms, as a monomial."""
    it = iter(p)
    first = dict(next(it))
    for m in it:
        md = dict(m)
        for idx in list(first):
            e = md.get(idx, 0)
            if e == 0:
                del first[idx]
            elif e < first[idx]:
                first[idx] = e
        if not first:
            break
    return tuple(sorted(first.items()))


def _int_normalize(p):
    """Scale to integer, content-free coefficients with positive lead."""
    if not p:
        return p
    den_lcm = 1
    for c in p.values():
        d = c.denominator
        if d != 1:
            g = _gcd_int(den_lcm, d)
            den_lcm = den_lcm // g * d
    nums = [c.numerator * (den_lcm // c.denominator) for c in p.values()]
    g = 0
    for n in nums:
        g = _gcd_int(g, n)
        if g == 1:
            break
    lead = _poly_leading(p)
    if p[lead] < 0:
        g = -g
    scale = Fraction(den_lcm, g)
    return {m: c * scale for m, c in p.items()}


_gcd_int = math.gcd


def _as_univar(p, v):
    """View p as a polynomial in variable v with polynomial coefficients."""
    coeffs = {}
    for m, c in p.items():
        e = 0
        rest = []
        for idx, k in m:
            if idx == v:
                e = k
            else:
                rest.append((idx, k))
        coeffs.setdefault(e, {})[tuple(rest)] = c
    return coeffs


def _from_univar(coeffs, v):
    out = {}
    for e, poly in coeffs.items():
        mono = ((v, e),) if e else _EMPTY_MONO
        for m, c in poly.items():
            out[_mono_mul(m, mono)] = c
    return out


def _univar_deg(coeffs):
    return max(coeffs)


def _prem(a, b, v):
    """Pseudo-remainder of a by b, both viewed in variable v."""
    a = _as_univar(a, v)
    b = _as_univar(b, v)
    db = _univar_deg(b)
    lcb = b[db]
    while a:
        da = _univar_deg(a)
        if da < db:
            break
        lca = a[da]
        # a := lcb*a - lca*x^(da-db)*b
        new = {}
        for e, poly in a.items():
            if e == da:
                continue
            new[e] = _poly_mul(poly, lcb)
        for e, poly in b.items():
            if e == db:
                continue
            ee = e + da - db
            term = _poly_mul(poly, lca)
            cur = new.get(ee)
            res = _poly_sub(cur, term) if cur is not None else _poly_neg(term)
            if res:
                new[ee] = res
            elif ee in new:
                del new[ee]
        a = new
    return _from_univar(a, v)


def _coeff_gcd(polys):
    g = {}
    for p in polys:
        g = _poly_gcd(g, p)
        if g == _P_ONE:
            break
    return g


def _primitive_in(p, v):
    """Split p (viewed in v) into (content, primitive part)."""
    coeffs = _as_univar(p, v)
    cont = _coeff_gcd(coeffs.values())
    if cont == _P_ONE:
        return cont, dict(p)
    prim = {e: _poly_divexact(c, cont) for e, c in coeffs.items()}
    return cont, _from_univar(prim, v)


# Two fixed large primes for the modular coprimality certificate.
_MOD_PRIMES = ((1 << 61) - 1, 10 ** 18 + 9)
_MOD_TRIES = 4


def _univar_gcd_degree_mod(a, b, p):
    """Degree of gcd of two coefficient lists over the field of size p."""
    a = [x % p for x in a]
    b = [x % p for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        db = len(b) - 1
        inv = pow(b[-1], p - 2, p)
        while len(a) - 1 >= db:
            shift = len(a) - 1 - db
            f = a[-1] * inv % p
            if f:
                for i in range(db + 1):
                    a[shift + i] = (a[shift + i] - f * b[i]) % p
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _eval_to_univar_mod(p_int, v, dv, values, p):
    """Image of p_int in variable v with the other variables evaluated."""
    coeffs = [0] * (dv + 1)
    for m, c in p_int.items():
        e = 0
        t = c % p
        for idx, k in m:
            if idx == v:
                e = k
            else:
                t = t * pow(values[idx], k, p) % p
        coeffs[e] = (coeffs[e] + t) % p
    return coeffs


def _modular_coprime(az, bz, common):
    """Sound coprimality certificate for integer polynomials.

    For an evaluation of all variables but v that keeps both leading
    v-coefficients nonzero mod p, the gcd degree in v of the images
    bounds the true gcd degree in v from above. Degree zero in every
    shared variable therefore proves a constant gcd. Failure to certify
    proves nothing and the caller falls through to the real gcd.
    """
    rng = random.Random(0xD1CE)
    for v in sorted(common):
        da = _poly_deg_in(az, v)
        db = _poly_deg_in(bz, v)
        if da == 0 or db == 0:
            continue
        certified = False
        for p in _MOD_PRIMES:
            for _ in range(_MOD_TRIES):
                values = {
                    idx: rng.randrange(1, p)
                    for idx in (_poly_vars(az) | _poly_vars(bz))
                    if idx != v
                }
                fa = _eval_to_univar_mod(az, v, da, values, p)
                fb = _eval_to_univar_mod(bz, v, db, values, p)
                if fa[da] == 0 or fb[db] == 0:
                    continue
                if _univar_gcd_degree_mod(fa, fb, p) == 0:
                    certified = True
                    break
            if certified:
                break
        if not certified:
            return False
    return True


def _poly_gcd(p1, p2):
    """Polynomial gcd, integer-primitive with positive leading coefficient."""
    if not p1:
        return _int_normalize(p2)
    if not p2:
        return _int_normalize(p1)
    m1 = _mono_content(p1)
    m2 = _mono_content(p2)
    d1, d2 = dict(m1), dict(m2)
    shared = tuple(
        sorted((i, min(e, d2[i])) for i, e in d1.items() if i in d2)
    )
    a = {_mono_div(m, m1): c for m, c in p1.items()}
    b = {_mono_div(m, m2): c for m, c in p2.items()}
    common = _poly_vars(a) & _poly_vars(b)
    if not common:
        return {shared: _ONE}
    az = _poly_ints(_int_normalize(a))
    bz = _poly_ints(_int_normalize(b))
    if _modular_coprime(az, bz, common):
        return {shared: _ONE}
    gz = _heu_gcd_z(az, bz)
    if gz is not None:
        g = {m: Fraction(c) for m, c in gz.items()}
        if shared:
            g = _poly_mul_term(g, shared, _ONE)
        return _int_normalize(g)
    v = min(common, key=lambda w: max(_poly_deg_in(a, w), _poly_deg_in(b, w)))
    ca, pa = _primitive_in(a, v)
    cb, pb = _primitive_in(b, v)
    cont = _poly_gcd(ca, cb)
    if _poly_deg_in(pa, v) < _poly_deg_in(pb, v):
        pa, pb = pb, pa
    while pb:
        r = _prem(pa, pb, v)
        pa = pb
        if r:
            _, r = _primitive_in(r, v)
            r = _int_normalize(r)
        pb = r
    g = _poly_mul(cont, _int_normalize(pa))
    if shared:
        g = _poly_mul_term(g, shared, _ONE)
    return _int_normalize(g)


def _poly_ints(p):
    """Integer coefficient view of an integer-normalized polynomial."""
    return {m: int(c) for m, c in p.items()}


# Two rows of distinct odd primes, indexed per symbol. A nonconstant
# shared factor survives substitution and makes both images divisible by
# its (large) value there, while coprime polynomials share only a small
# accidental integer factor; a tiny image gcd at any row certifies
# polynomial coprimality.
def _poly_eval_in(p, v, xi):
    """Substitute the integer xi for variable v; integer coefficients."""
    if not p:
        return {}
    powers = [1] * (_poly_deg_in(p, v) + 1)
    for e in range(1, len(powers)):
        powers[e] = powers[e - 1] * xi
    out = {}
    for m, c in p.items():
        e = 0
        rest = []
        for idx, k in m:
            if idx == v:
                e = k
            else:
                rest.append((idx, k))
        mono = tuple(rest)
        s = out.get(mono, 0) + c * powers[e]
        if s:
            out[mono] = s
        elif mono in out:
            del out[mono]
    return out


def _heu_interpolate(h, xi, v, max_digits):
    """Rebuild a polynomial in v from its image at v = xi.

    Every coefficient of h is read as a symmetric base-xi digit string;
    digit k becomes the coefficient of v**k. Returns None when more than
    max_digits digits appear, which disproves the candidate.
    """
    out = {}
    cur = h
    e = 0
    half = xi // 2
    while cur:
        if e >= max_digits:
            return None
        nxt = {}
        mono_v = ((v, e),) if e else _EMPTY_MONO
        for m, c in cur.items():
            r = c % xi
            if r > half:
                r -= xi
            q = (c - r) // xi
            if r:
                out[_mono_mul(m, mono_v)] = r
            if q:
                nxt[m] = q
        cur = nxt
        e += 1
    return out


def _int_content_z(p):
    g = 0
    for c in p.values():
        g = _gcd_int(g, c)
        if g == 1:
            break
    return g


def _divides_z(d, p):
    """Whether primitive d divides p exactly over the rationals."""
    try:
        _poly_divexact(
            {m: Fraction(c) for m, c in p.items()},
            {m: Fraction(c) for m, c in d.items()},
        )
    except OdesplitError:
        return False
    return True


_HEU_XI_CAP = 1 << 16000


def _heu_gcd_z(f, g, tries=6):
    """Heuristic gcd of two nonzero integer polynomials, or None.

    Evaluates one variable at a large integer, recurses on the images,
    and lifts the image gcd back through symmetric base-xi digits. Every
    candidate is verified by exact division, so a non-None result is a
    true greatest common divisor.
    """
    cf = _int_content_z(f)
    cg = _int_content_z(g)
    ch = _gcd_int(cf, cg)
    f = {m: c // cf for m, c in f.items()}
    g = {m: c // cg for m, c in g.items()}
    common = _poly_vars(f) & _poly_vars(g)
    if not common:
        return {_EMPTY_MONO: ch}
    v = min(common, key=lambda w: max(_poly_deg_in(f, w), _poly_deg_in(g, w)))
    dv = min(_poly_deg_in(f, v), _poly_deg_in(g, v))
    nf = max(abs(c) for c in f.values())
    ng = max(abs(c) for c in g.values())
    xi = 2 * min(nf, ng) + 29
    for _ in range(tries):
        if xi > _HEU_XI_CAP:
            break
        ff = _poly_eval_in(f, v, xi)
        gg = _poly_eval_in(g, v, xi)
        if ff and gg:
            h = _heu_gcd_z(ff, gg, tries)
            if h is not None:
                cand = _heu_interpolate(h, xi, v, dv + 1)
                if cand:
                    c0 = _int_content_z(cand)
                    if c0 > 1:
                        cand = {m: c // c0 for m, c in cand.items()}
                    if cand[_poly_leading(cand)] < 0:
                        cand = {m: -c for m, c in cand.items()}
                    if _divides_z(cand, f) and _divides_z(cand, g):
                        if ch == 1:
                            return cand
                        return {m: c * ch for m, c in cand.items()}
        xi = xi * 73794 // 27011
    return None


def _poly_diff(p, idx):
    out = {}
    for m, c in p.items():
        for pos, (i, e) in enumerate(m):
            if i == idx:
                if e == 1:
                    nm = m[:pos] + m[pos + 1:]
                else:
                    nm = m[:pos] + ((i, e - 1),) + m[pos + 1:]
                s = out.get(nm, _ZERO) + c * e
                if s:
                    out[nm] = s
                elif nm in out:
                    del out[nm]
                break
    return out


def _poly_eval(p, values):
    """Evaluate with values[idx] substituted for each symbol index."""
    total = None
    for m, c in p.items():
        term = None
        for idx, e in m:
            v = values[idx]
            f = v
            for _ in range(e - 1):
                f = f * v
            term = f if term is None else term * f
        term = c if term is None else term * c
        total = term if total is None else total + term
    return 0 if total is None else total


# ----------------------------------------------------------------------
# expressions

_check_rng = random.Random(0x5EED)


class Expression:
    """Canonical rational expression bound to a JetContext."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx, num, den):
        raise OdesplitError("use Expression.make or the parse API")

    @classmethod
    def _raw(cls, ctx, num, den):
        obj = object.__new__(cls)
        objset = object.__setattr__
        objset(obj, "ctx", ctx)
        objset(obj, "num", num)
        objset(obj, "den", den)
        return obj

    def __setattr__(self, name, value):
        raise OdesplitError("expressions are immutable")

    # -- construction ---------------------------------------------------

    @classmethod
    def make(cls, ctx, num, den=None):
        """Canonicalize a numerator/denominator pair of sparse polys."""
        if den is None:
            den = dict(_P_ONE)
        if not den:
            raise ZeroDenominatorError("division by the zero polynomial")
        if not num:
            return cls._raw(ctx, {}, dict(_P_ONE))
        if den == _P_ONE:
            return cls._raw(ctx, num, den)
        g = _poly_gcd(num, den)
        if g != _P_ONE:
            num = _poly_divexact(num, g)
            den = _poly_divexact(den, g)
        lc = den[_poly_leading(den)]
        if lc != 1:
            inv = 1 / lc
            num = _poly_scale(num, inv)
            den = _poly_scale(den, inv)
        return cls._raw(ctx, num, den)

    @classmethod
    def constant(cls, ctx, value):
        return cls._raw(ctx, _poly_const(value), dict(_P_ONE))

    @classmethod
    def symbol(cls, ctx, name):
        return cls._raw(ctx, _poly_sym(ctx.index(name)), dict(_P_ONE))

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return not _poly_vars(self.num) and not _poly_vars(self.den)

    def constant_value(self):
        if not self.is_constant():
            raise OdesplitError("not a constant expression")
        num = self.num.get(_EMPTY_MONO, _ZERO)
        den = self.den.get(_EMPTY_MONO, _ONE)
        return num / den

    def symbols(self):
        """Names of all symbols appearing in the expression."""
        idxs = _poly_vars(self.num) | _poly_vars(self.den)
        return {self.ctx.name(i) for i in sorted(idxs)}

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Expression):
            if other.ctx is not self.ctx and other.ctx.signature() != self.ctx.signature():
                raise OdesplitError("mixing expressions from different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return Expression.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Expression.make(
                self.ctx, _poly_add(self.num, o.num), dict(self.den)
            )
        num = _poly_add(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den))
        return Expression.make(self.ctx, num, _poly_mul(self.den, o.den))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Expression.make(
                self.ctx, _poly_sub(self.num, o.num), dict(self.den)
            )
        num = _poly_sub(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den))
        return Expression.make(self.ctx, num, _poly_mul(self.den, o.den))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o.__sub__(self)

    def __neg__(self):
        return Expression._raw(self.ctx, _poly_neg(self.num), dict(self.den))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Expression.make(
            self.ctx, _poly_mul(self.num, o.num), _poly_mul(self.den, o.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDenominatorError("division by zero expression")
        return Expression.make(
            self.ctx, _poly_mul(self.num, o.den), _poly_mul(self.den, o.num)
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o.__truediv__(self)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise OdesplitError("exponent must be an integer")
        if k == 0:
            return Expression.constant(self.ctx, 1)
        if k < 0:
            if not self.num:
                raise ZeroDenominatorError("zero to a negative power")
            base = Expression.make(self.ctx, dict(self.den), dict(self.num))
            k = -k
        else:
            base = self
        num, den = dict(_P_ONE), dict(_P_ONE)
        for _ in range(k):
            num = _poly_mul(num, base.num)
            den = _poly_mul(den, base.den)
        # base is canonical and coprime, so powers need no gcd pass
        lc = den[_poly_leading(den)]
        if lc != 1:
            inv = 1 / lc
            num = _poly_scale(num, inv)
            den = _poly_scale(den, inv)
        return Expression._raw(self.ctx, num, den)

    # -- structural equality ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Expression):
            if isinstance(other, (int, Fraction)):
                return self.is_constant() and self.constant_value() == other
            return NotImplemented
        return (
            self.ctx.signature() == other.ctx.signature()
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash(
            (
                self.ctx.signature(),
                frozenset(self.num.items()),
                frozenset(self.den.items()),
            )
        )

    def __repr__(self):
        from .parsing import to_text

        return "<Expression %s>" % to_text(self)

    # -- calculus ---------------------------------------------------------

    def diff_partial(self, name):
        """Partial derivative with respect to one symbol."""
        idx = self.ctx.index(name)
        dn = _poly_diff(self.num, idx)
        if self.den == _P_ONE:
            return Expression.make(self.ctx, dn)
        dd = _poly_diff(self.den, idx)
        if not dd:
            return Expression.make(self.ctx, dn, dict(self.den))
        num = _poly_sub(_poly_mul(dn, self.den), _poly_mul(self.num, dd))
        return Expression.make(self.ctx, num, _poly_mul(self.den, self.den))

    def evaluate(self, env):
        """Numeric evaluation; env maps symbol names to values."""
        ctx = self.ctx
        idxs = sorted(_poly_vars(self.num) | _poly_vars(self.den))
        values = [None] * (max(idxs) + 1 if idxs else 0)
        for i in idxs:
            name = ctx.name(i)
            if name not in env:
                raise OdesplitError("no value for symbol %r" % name)
            values[i] = env[name]
        den = _poly_eval(self.den, values)
        if den == 0:
            raise PoleError("denominator vanished during evaluation")
        return _poly_eval(self.num, values) / den


def canonicalize(e):
    """Return the canonical form (Expressions already maintain it)."""
    return Expression.make(e.ctx, dict(e.num), dict(e.den))


def total_derivative(e, indep):
    """Total derivative along one independent variable on jet space."""
    ctx = e.ctx
    if indep not in ctx.independents:
        raise OdesplitError("not an independent variable: %r" % indep)
    out = Expression.constant(ctx, 0)
    for name in sorted(e.symbols(), key=ctx.index):
        kind = ctx.classify(name)
        if kind == "parameter":
            continue
        if kind == "independent":
            if name == indep:
                out = out + e.diff_partial(name)
            continue
        # dependent or jet: chain through the next-order jet coordinate
        nxt = ctx.next_jet(name, indep)
        out = out + e.diff_partial(name) * Expression.symbol(ctx, nxt)
    return out


def substitute(e, bindings, out_ctx=None):
    """Simultaneous substitution, then canonicalization.

    bindings maps symbol names to Expressions (in the output context) or
    to plain numbers. Unbound symbols must exist in the output context.
    """
    ctx = e.ctx
    target = out_ctx if out_ctx is not None else ctx
    resolved = {}
    for name, v in bindings.items():
        ctx.index(name)
        if isinstance(v, Expression):
            if v.ctx is not target and v.ctx.signature() != target.signature():
                raise OdesplitError("binding for %r is not in the output context" % name)
            resolved[name] = v
        else:
            resolved[name] = Expression.constant(target, v)
    idxs = sorted(_poly_vars(e.num) | _poly_vars(e.den))
    values = [None] * (max(idxs) + 1 if idxs else 0)
    for i in idxs:
        name = ctx.name(i)
        if name in resolved:
            values[i] = resolved[name]
        else:
            values[i] = Expression.symbol(target, name)
    num = _poly_eval(e.num, values)
    den = _poly_eval(e.den, values)
    if isinstance(num, (int, Fraction)):
        num = Expression.constant(target, num)
    if isinstance(den, (int, Fraction)):
        den = Expression.constant(target, den)
    if den.is_zero():
        raise PoleError("substitution makes a denominator vanish")
    return num / den


def equals(a, b):
    """Exact equality with a randomized evaluation self-check."""
    if a.ctx.signature() != b.ctx.signature():
        raise OdesplitError("mixing expressions from different contexts")
    delta = a - b
    verdict = delta.is_zero()
    names = sorted(a.symbols() | b.symbols())
    checked = 0
    attempts = 0
    while checked < 20:
        attempts += 1
        if attempts > 400:
            raise InternalCheckError("could not find 20 usable sample points")
        env = {
            n: Fraction(_check_rng.randint(-12, 12), _check_rng.randint(1, 9))
            for n in names
        }
        try:
            va = a.evaluate(env)
            vb = b.evaluate(env)
        except PoleError:
            continue
        if verdict:
            if va != vb:
                raise InternalCheckError(
                    "randomized equality check disagrees with canonical verdict"
                )
        elif va == vb:
            # a nonzero difference may still vanish at a sampled root; the
            # point is uninformative, so redraw
            continue
        checked += 1
    return verdict

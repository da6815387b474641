"""Differential systems, split-kind metadata, constraints and generators.

A system carries a kind tag. Tagged kinds fix the variable names, the
left-hand side of every equation and the factor between the left-hand
side and the components of the right-hand side; the ``generic`` tag
accepts any well-formed equations.
"""

from fractions import Fraction

from .errors import FormatError, KindError, OdesplitError
from .expressions import (
    Expression,
    _mono_div,
    _poly_add,
    _poly_mul_term,
    _poly_sub,
    substitute,
)
from .parsing import parse, to_text

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class KindSpec:
    """Frozen description of one split kind."""

    __slots__ = (
        "name",
        "pde",
        "deps",
        "indeps",
        "factor",
        "dep_unit",
        "indep_unit",
        "lhs_texts",
        "operator_units",
        "imag_deps",
        "combination_texts",
        "velocity_weights",
        "double",
    )

    def __init__(
        self,
        name,
        pde,
        deps,
        indeps,
        factor,
        dep_unit,
        indep_unit,
        lhs_texts,
        operator_units,
        imag_deps=(),
        combination_texts=(),
        velocity_weights=(),
        double=False,
    ):
        self.name = name
        self.pde = pde
        self.deps = tuple(deps)
        self.indeps = tuple(indeps) if indeps else None
        self.factor = factor
        self.dep_unit = dict(dep_unit)
        self.indep_unit = dict(indep_unit)
        self.lhs_texts = tuple(lhs_texts)
        self.operator_units = tuple(operator_units)
        self.imag_deps = tuple(imag_deps)
        self.combination_texts = tuple(combination_texts)
        self.velocity_weights = tuple(velocity_weights)
        self.double = double

    def grid(self, base_indep):
        """Independent variable names of a split system."""
        if self.indeps is None:
            return (base_indep,)
        return self.indeps

    def lhs_for(self, ctx):
        """Instantiate the left-hand-side patterns over a context."""
        if self.lhs_texts:
            return tuple(parse(t, ctx) for t in self.lhs_texts)
        indep = ctx.independents[0]
        return tuple(
            Expression.symbol(ctx, ctx.jet(dep, (indep, indep))) for dep in self.deps
        )


_SINGLE = ("1", "i")
_ALL = ("1", "i", "j", "ij")

KINDS = {
    "ode2": KindSpec(
        name="ode2",
        pde=False,
        deps=("p", "q"),
        indeps=None,
        factor=1,
        dep_unit={"p": "1", "q": "i"},
        indep_unit={},
        lhs_texts=(),
        operator_units=_SINGLE,
    ),
    "pde2": KindSpec(
        name="pde2",
        pde=True,
        deps=("p", "q"),
        indeps=("s", "t"),
        factor=4,
        dep_unit={"p": "1", "q": "i"},
        indep_unit={"s": "1", "t": "i"},
        lhs_texts=(
            "p_ss - p_tt + 2*q_st",
            "q_ss - q_tt - 2*p_st",
        ),
        operator_units=_SINGLE,
        combination_texts=("p_s + q_t", "p_t - q_s"),
        velocity_weights=((0, "1", HALF), (1, "i", -HALF)),
    ),
    "ode3": KindSpec(
        name="ode3",
        pde=False,
        deps=("x", "y", "z"),
        indeps=None,
        factor=1,
        dep_unit={"x": "1", "y": "i", "z": "ij"},
        indep_unit={},
        lhs_texts=(),
        operator_units=_ALL,
        double=True,
    ),
    "ode3-dual": KindSpec(
        name="ode3-dual",
        pde=False,
        deps=("x", "y", "z"),
        indeps=None,
        factor=1,
        dep_unit={"x": "1", "y": "j", "z": "i"},
        indep_unit={},
        lhs_texts=(),
        operator_units=_ALL,
        imag_deps=("z",),
        double=True,
    ),
    "ode4": KindSpec(
        name="ode4",
        pde=False,
        deps=("w", "x", "y", "z"),
        indeps=None,
        factor=1,
        dep_unit={"w": "1", "x": "j", "y": "i", "z": "ij"},
        indep_unit={},
        lhs_texts=(),
        operator_units=_ALL,
        double=True,
    ),
    "pde4x2": KindSpec(
        name="pde4x2",
        pde=True,
        deps=("w", "x", "y", "z"),
        indeps=("s", "t"),
        factor=4,
        dep_unit={"w": "1", "x": "j", "y": "i", "z": "ij"},
        indep_unit={"s": "1", "t": "j"},
        lhs_texts=(
            "w_ss - w_tt + 2*x_st",
            "x_ss - x_tt - 2*w_st",
            "y_ss - y_tt + 2*z_st",
            "z_ss - z_tt - 2*y_st",
        ),
        operator_units=_ALL,
        combination_texts=(
            "w_s + x_t",
            "w_t - x_s",
            "y_s + z_t",
            "y_t - z_s",
        ),
        velocity_weights=(
            (0, "1", HALF),
            (1, "j", -HALF),
            (2, "i", HALF),
            (3, "ij", -HALF),
        ),
        double=True,
    ),
    "pde4x2-dual": KindSpec(
        name="pde4x2-dual",
        pde=True,
        deps=("w", "x", "y", "z"),
        indeps=("s", "t"),
        factor=4,
        dep_unit={"w": "1", "x": "j", "y": "i", "z": "ij"},
        indep_unit={"s": "1", "t": "i"},
        lhs_texts=(
            "w_ss - w_tt + 2*y_st",
            "x_ss - x_tt + 2*z_st",
            "y_ss - y_tt - 2*w_st",
            "z_ss - z_tt - 2*x_st",
        ),
        operator_units=_ALL,
        combination_texts=(
            "w_s + y_t",
            "x_s + z_t",
            "w_t - y_s",
            "x_t - z_s",
        ),
        velocity_weights=(
            (0, "1", HALF),
            (1, "j", HALF),
            (2, "i", -HALF),
            (3, "ij", -HALF),
        ),
        double=True,
    ),
    "pde4x4": KindSpec(
        name="pde4x4",
        pde=True,
        deps=("w", "x", "y", "z"),
        indeps=("s", "t", "u", "v"),
        factor=16,
        dep_unit={"w": "1", "x": "j", "y": "i", "z": "ij"},
        indep_unit={"s": "1", "t": "j", "u": "i", "v": "ij"},
        lhs_texts=(
            "w_ss - w_tt - w_uu + w_vv + 2*x_st - 2*x_uv"
            " + 2*y_su - 2*y_tv + 2*z_sv + 2*z_tu",
            "x_ss - x_tt - x_uu + x_vv - 2*w_st + 2*w_uv"
            " - 2*y_sv - 2*y_tu + 2*z_su - 2*z_tv",
            "y_ss - y_tt - y_uu + y_vv - 2*w_su + 2*w_tv"
            " - 2*x_sv - 2*x_tu + 2*z_st - 2*z_uv",
            "z_ss - z_tt - z_uu + z_vv + 2*w_sv + 2*w_tu"
            " - 2*x_su + 2*x_tv - 2*y_st + 2*y_uv",
        ),
        operator_units=_ALL,
        combination_texts=(
            "w_s + x_t + y_u + z_v",
            "w_t - x_s + y_v - z_u",
            "w_u + x_v - y_s - z_t",
            "w_v - x_u - y_t + z_s",
        ),
        velocity_weights=(
            (0, "1", QUARTER),
            (1, "j", -QUARTER),
            (2, "i", -QUARTER),
            (3, "ij", QUARTER),
        ),
        double=True,
    ),
}

SPLIT_KINDS = tuple(KINDS)


def kind_spec(name):
    try:
        return KINDS[name]
    except KeyError:
        raise KindError("unknown split kind: %r" % name) from None


# ----------------------------------------------------------------------


class ScalarODE:
    """A single second-order equation u'' = f(r, u, u')."""

    __slots__ = ("ctx", "rhs")

    def __init__(self, ctx, rhs):
        if len(ctx.independents) != 1 or len(ctx.dependents) != 1:
            raise FormatError("a scalar equation needs one independent and one dependent")
        if rhs.ctx is not ctx and rhs.ctx.signature() != ctx.signature():
            raise OdesplitError("right-hand side bound to a different context")
        for name in rhs.symbols():
            if ctx.classify(name) == "jet" and ctx.jet_order(name) > 1:
                raise FormatError(
                    "right-hand side may only use first derivatives, found %r" % name
                )
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "rhs", rhs)

    def __setattr__(self, name, value):
        raise OdesplitError("scalar equations are immutable")

    @classmethod
    def from_text(cls, rhs_text, indep="s", dep="u"):
        from .context import JetContext

        ctx = JetContext((indep,), (dep,), 2)
        return cls(ctx, parse(rhs_text, ctx))

    @property
    def indep(self):
        return self.ctx.independents[0]

    @property
    def dep(self):
        return self.ctx.dependents[0]

    def __eq__(self, other):
        if not isinstance(other, ScalarODE):
            return NotImplemented
        return (
            self.ctx.independents == other.ctx.independents
            and self.ctx.dependents == other.ctx.dependents
            and self.rhs.num == other.rhs.num
            and self.rhs.den == other.rhs.den
        )

    def __repr__(self):
        return "ScalarODE(%s'' = %s)" % (self.dep, to_text(self.rhs))


# ----------------------------------------------------------------------


class Constraint:
    """A rewrite rule: the designated monomial equals the replacement."""

    __slots__ = ("replacement", "lead", "_lead_mono")

    def __init__(self, replacement, lead):
        if not _is_poly(replacement) or not _is_poly(lead):
            raise FormatError("constraints must be polynomial")
        if len(lead.num) != 1:
            raise FormatError("the designated side must be a single monomial")
        ((mono, coeff),) = lead.num.items()
        if coeff != 1:
            raise FormatError("the designated monomial must have coefficient 1")
        if not mono:
            raise FormatError("the designated side must not be constant")
        for m in replacement.num:
            if _mono_div(m, mono) is not None:
                raise FormatError(
                    "the replacement may not contain the designated monomial"
                )
        object.__setattr__(self, "replacement", replacement)
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "_lead_mono", mono)

    def __setattr__(self, name, value):
        raise OdesplitError("constraints are immutable")

    def __repr__(self):
        return "Constraint(%s = %s)" % (to_text(self.replacement), to_text(self.lead))


def _is_poly(e):
    return len(e.den) == 1 and e.den.get((), None) == 1


_REWRITE_CAP = 500


class ConstraintSet:
    """Ordered list of rewrite rules applied to a fixed point."""

    __slots__ = ("constraints",)

    def __init__(self, constraints):
        object.__setattr__(self, "constraints", tuple(constraints))

    def __setattr__(self, name, value):
        raise OdesplitError("constraint sets are immutable")

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def _rewrite_poly(self, poly):
        steps = 0
        changed = True
        while changed:
            changed = False
            for con in self.constraints:
                lead = con._lead_mono
                hit = None
                for m in sorted(poly):
                    rest = _mono_div(m, lead)
                    if rest is not None:
                        hit = (m, rest)
                        break
                if hit is None:
                    continue
                m, rest = hit
                coeff = poly[m]
                poly = _poly_sub(poly, {m: coeff})
                poly = _poly_add(
                    poly, _poly_mul_term(con.replacement.num, rest, coeff)
                )
                changed = True
                steps += 1
                if steps > _REWRITE_CAP:
                    raise OdesplitError("constraint rewriting does not terminate")
        return poly

    def rewrite(self, expr):
        """Normal form of an expression modulo the constraints."""
        num = self._rewrite_poly(dict(expr.num))
        den = self._rewrite_poly(dict(expr.den))
        return Expression.make(expr.ctx, num, den)


# ----------------------------------------------------------------------


class Equation:
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs):
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)

    def __setattr__(self, name, value):
        raise OdesplitError("equations are immutable")

    def __eq__(self, other):
        if not isinstance(other, Equation):
            return NotImplemented
        return self.lhs == other.lhs and self.rhs == other.rhs

    def __repr__(self):
        return "Equation(%s = %s)" % (to_text(self.lhs), to_text(self.rhs))


class DifferentialSystem:
    """A tagged list of equations over one jet context."""

    __slots__ = ("ctx", "kind", "equations", "constraints")

    def __init__(self, ctx, kind, equations, constraints=None):
        equations = tuple(equations)
        if kind != "generic":
            spec = kind_spec(kind)
            if ctx.dependents != spec.deps:
                raise KindError(
                    "kind %s needs dependents %s, got %s"
                    % (kind, ",".join(spec.deps), ",".join(ctx.dependents))
                )
            if spec.indeps is not None and ctx.independents != spec.indeps:
                raise KindError(
                    "kind %s needs independents %s, got %s"
                    % (kind, ",".join(spec.indeps), ",".join(ctx.independents))
                )
            if not spec.pde and len(ctx.independents) != 1:
                raise KindError("kind %s needs a single independent variable" % kind)
            patterns = spec.lhs_for(ctx)
            if len(equations) != len(patterns):
                raise KindError(
                    "kind %s needs %d equations, got %d"
                    % (kind, len(patterns), len(equations))
                )
            for eq, pat in zip(equations, patterns):
                if eq.lhs != pat:
                    raise KindError(
                        "left-hand side %r does not match the %s pattern %r"
                        % (to_text(eq.lhs), kind, to_text(pat))
                    )
        if not equations:
            raise FormatError("a system needs at least one equation")
        for eq in equations:
            for side in (eq.lhs, eq.rhs):
                if side.ctx is not ctx and side.ctx.signature() != ctx.signature():
                    raise OdesplitError("equation bound to a different context")
            for name in eq.rhs.symbols():
                if ctx.classify(name) == "jet" and ctx.jet_order(name) > 1:
                    raise FormatError(
                        "right-hand sides may only use first derivatives, found %r"
                        % name
                    )
        if constraints is not None and not isinstance(constraints, ConstraintSet):
            constraints = ConstraintSet(constraints)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "equations", equations)
        object.__setattr__(self, "constraints", constraints)

    def __setattr__(self, name, value):
        raise OdesplitError("systems are immutable")

    @property
    def rhs_rows(self):
        return tuple(eq.rhs for eq in self.equations)

    def solved_jets(self):
        """Second-order jets eliminated by the equations.

        Each equation is solved for the lexicographically first
        second-order jet of its left-hand side. The solved jets must be
        pairwise distinct and must not appear in the solved values.
        """
        ctx = self.ctx
        mapping = {}
        for eq in self.equations:
            jets = sorted(
                name
                for name in eq.lhs.symbols()
                if ctx.classify(name) == "jet" and ctx.jet_order(name) == 2
            )
            if not jets:
                raise KindError(
                    "equation %r has no second-order jet to solve for"
                    % to_text(eq.lhs)
                )
            target = jets[0]
            delta = eq.lhs - eq.rhs
            coeff = delta.diff_partial(target)
            if coeff.is_zero() or target in coeff.symbols():
                raise KindError("cannot solve %r linearly for %r" % (to_text(eq.lhs), target))
            rest = substitute(delta, {target: Expression.constant(ctx, 0)})
            value = -rest / coeff
            if target in mapping:
                raise KindError("two equations solve for the same jet %r" % target)
            mapping[target] = value
        for target, value in mapping.items():
            if target in value.symbols():
                raise KindError("solved value for %r still contains it" % target)
        return mapping

    def __eq__(self, other):
        if not isinstance(other, DifferentialSystem):
            return NotImplemented
        return (
            self.ctx.signature() == other.ctx.signature()
            and self.kind == other.kind
            and self.equations == other.equations
            and _constraints_equal(self.constraints, other.constraints)
        )

    def __repr__(self):
        return "DifferentialSystem(kind=%s, %d equations)" % (
            self.kind,
            len(self.equations),
        )


def _constraints_equal(a, b):
    if a is None and b is None:
        return True
    if a is None or b is None:
        return len(a or b or ()) == 0
    if len(a) != len(b):
        return False
    return all(
        ca.replacement == cb.replacement and ca.lead == cb.lead
        for ca, cb in zip(a.constraints, b.constraints)
    )


# ----------------------------------------------------------------------


class Generator:
    """A point vector field on the base variables of a context."""

    __slots__ = ("ctx", "xi", "eta", "imag_deps")

    def __init__(self, ctx, xi, eta, imag_deps=()):
        xi = tuple(xi)
        eta = tuple(eta)
        if len(xi) != len(ctx.independents) or len(eta) != len(ctx.dependents):
            raise FormatError("coefficient count does not match the context")
        for coeff in xi + eta:
            if coeff.ctx is not ctx and coeff.ctx.signature() != ctx.signature():
                raise OdesplitError("coefficient bound to a different context")
            for name in coeff.symbols():
                if ctx.classify(name) == "jet":
                    raise FormatError(
                        "point generators may not depend on derivatives: %r" % name
                    )
        imag_deps = frozenset(imag_deps)
        for name in imag_deps:
            if name not in ctx.dependents:
                raise FormatError("imaginary marker on unknown dependent %r" % name)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "imag_deps", imag_deps)

    def __setattr__(self, name, value):
        raise OdesplitError("generators are immutable")

    @classmethod
    def from_texts(cls, ctx, xi_texts, eta_texts, imag_deps=()):
        xi = tuple(parse(t, ctx) for t in xi_texts)
        eta = tuple(parse(t, ctx) for t in eta_texts)
        return cls(ctx, xi, eta, imag_deps)

    def coefficient(self, name):
        ctx = self.ctx
        if name in ctx.independents:
            return self.xi[ctx.independents.index(name)]
        if name in ctx.dependents:
            return self.eta[ctx.dependents.index(name)]
        raise OdesplitError("no coefficient for %r" % name)

    def is_zero(self):
        return all(c.is_zero() for c in self.xi + self.eta)

    def apply(self, expr):
        """First-order action on an expression in base variables only."""
        out = Expression.constant(self.ctx, 0)
        for name in sorted(expr.symbols(), key=self.ctx.index):
            kind = self.ctx.classify(name)
            if kind == "parameter":
                continue
            if kind == "jet":
                raise OdesplitError("apply expects a base-variable expression")
            out = out + self.coefficient(name) * expr.diff_partial(name)
        return out

    def scale(self, c):
        return Generator(
            self.ctx,
            tuple(x * c for x in self.xi),
            tuple(e * c for e in self.eta),
            self.imag_deps,
        )

    def __eq__(self, other):
        if not isinstance(other, Generator):
            return NotImplemented
        return (
            self.ctx.signature() == other.ctx.signature()
            and self.xi == other.xi
            and self.eta == other.eta
            and self.imag_deps == other.imag_deps
        )

    def describe(self):
        """Short single-line rendering like 's*d_s - 2*w*d_w'."""
        parts = []
        for name in self.ctx.independents + self.ctx.dependents:
            coeff = self.coefficient(name)
            if coeff.is_zero():
                continue
            text = to_text(coeff)
            if text == "1":
                parts.append("d_%s" % name)
            elif text == "-1":
                parts.append("-d_%s" % name)
            else:
                if ("+" in text[1:] or " - " in text) and "/" not in text:
                    text = "(" + text + ")"
                parts.append("%s*d_%s" % (text, name))
            if name in self.imag_deps:
                parts[-1] += "[imag]"
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " " + p if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return "Generator(%s)" % self.describe()

"""Turning one scalar equation into a coupled real system.

The dependent variable of a second-order equation u'' = f(r, u, u') is
replaced by a combination of real components over the commuting-units
algebra, the right-hand side is evaluated there, and the components are
read off again. Each split kind in ``systems.KINDS`` fixes the
embedding; ``split`` carries it out and ``split_generator`` applies the
matching decomposition to a point symmetry generator of the scalar
equation.
"""

from fractions import Fraction

from .bicomplex import UNITS, BicomplexExpression, bicomplex_substitute
from .context import JetContext
from .errors import InternalCheckError, KindError, OdesplitError
from .expressions import Expression, substitute
from .parsing import to_text
from .systems import DifferentialSystem, Equation, Generator, ScalarODE, kind_spec

# multiplying by the conjugate of each unit flips these signs
_CONJ_SIGN = {"1": 1, "i": -1, "j": -1, "ij": 1}


class SplitResult:
    """A split system plus how it was produced."""

    __slots__ = ("system", "variant", "substitution", "residuals", "guaranteed")

    def __init__(self, system, variant, substitution, residuals, guaranteed):
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "substitution", tuple(substitution))
        object.__setattr__(self, "residuals", tuple(residuals))
        object.__setattr__(self, "guaranteed", guaranteed)

    def __setattr__(self, name, value):
        raise OdesplitError("split results are immutable")

    def __repr__(self):
        return "SplitResult(%s, %d equations, %d residuals)" % (
            self.variant,
            len(self.system.equations),
            len(self.residuals),
        )


def _unit_text(tag, body):
    if "+" in body[1:] or " - " in body or body.startswith("-") or "/" in body:
        body = "(" + body + ")"
    if tag == "1":
        return body
    if body == "1":
        return tag
    return "%s*%s" % (tag, body)


def bicomplex_text(value):
    """Readable one-line rendering of a bicomplex value."""
    parts = []
    for tag in UNITS:
        comp = value.component(tag)
        if comp.is_zero():
            continue
        parts.append(_unit_text(tag, to_text(comp)))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " + " + p
    return out


def _unit_value(tag, ctx):
    return BicomplexExpression.unit(tag, ctx)


def _embedded_dep(spec, ctx, order):
    """The dependent-variable embedding, differentiated ``order`` times."""
    indep = ctx.independents[0]
    total = BicomplexExpression.zero(ctx)
    for dep in spec.deps:
        name = dep if order == 0 else ctx.jet(dep, (indep,) * order)
        part = BicomplexExpression.from_real(Expression.symbol(ctx, name))
        total = total + part.times_unit(spec.dep_unit[dep])
    return total


def _embedded_indep(spec, ctx):
    total = BicomplexExpression.zero(ctx)
    for name in spec.indeps:
        part = BicomplexExpression.from_real(Expression.symbol(ctx, name))
        total = total + part.times_unit(spec.indep_unit[name])
    return total


def _embedded_velocity(spec, ctx):
    """First derivative of the embedded dependent along the embedded grid."""
    n = len(spec.indeps)
    total = BicomplexExpression.zero(ctx)
    for indep in spec.indeps:
        tag = spec.indep_unit[indep]
        coeff = Fraction(_CONJ_SIGN[tag], n)
        for dep in spec.deps:
            sym = Expression.symbol(ctx, ctx.jet(dep, (indep,)))
            part = BicomplexExpression.from_real(
                Expression.constant(ctx, coeff) * sym
            )
            total = total + part.times_unit(tag).times_unit(spec.dep_unit[dep])
    return total


def _free_part(expr, names):
    """The terms of expr whose monomials avoid all of the given symbols.

    Zero when the denominator itself involves one of them.
    """
    ctx = expr.ctx
    idxs = {ctx.index(n) for n in names}
    for mono in expr.den:
        if any(i in idxs for i, _ in mono):
            return Expression.constant(ctx, 0)
    kept = {
        mono: coeff
        for mono, coeff in expr.num.items()
        if not any(i in idxs for i, _ in mono)
    }
    if not kept:
        return Expression.constant(ctx, 0)
    return Expression.make(ctx, kept, dict(expr.den))


def _check_unused_components(value, used, what):
    for tag in UNITS:
        if tag not in used and not value.component(tag).is_zero():
            raise InternalCheckError(
                "%s leaked into the %s direction: %s"
                % (what, tag, to_text(value.component(tag)))
            )


def split(ode, variant):
    """Split a scalar equation into the coupled system of a given kind."""
    if not isinstance(ode, ScalarODE):
        raise KindError("split expects a scalar base equation")
    spec = kind_spec(variant)
    if variant == "ode3":
        result = _split_three_component(ode, spec, dual=False)
    elif variant == "ode3-dual":
        result = _split_three_component(ode, spec, dual=True)
    else:
        result = _split_mechanical(ode, spec)
    from .cr import check_cr

    report = check_cr(result.system)
    if not report.verdict:
        raise InternalCheckError(
            "split produced a system that fails its own characterization"
        )
    return SplitResult(
        result.system, variant, result.substitution, result.residuals, report
    )


class _RawSplit:
    __slots__ = ("system", "substitution", "residuals")

    def __init__(self, system, substitution, residuals):
        self.system = system
        self.substitution = substitution
        self.residuals = residuals


def _split_mechanical(ode, spec):
    ctx = JetContext(spec.grid(ode.indep), spec.deps, 2)
    vel_name = ode.ctx.jet(ode.dep, (ode.indep,))
    mapping = {}
    notes = []
    if spec.pde:
        grid = _embedded_indep(spec, ctx)
        mapping[ode.indep] = grid
        notes.append("%s -> %s" % (ode.indep, bicomplex_text(grid)))
    dep0 = _embedded_dep(spec, ctx, 0)
    vel = (
        _embedded_velocity(spec, ctx) if spec.pde else _embedded_dep(spec, ctx, 1)
    )
    mapping[ode.dep] = dep0
    mapping[vel_name] = vel
    notes.append("%s -> %s" % (ode.dep, bicomplex_text(dep0)))
    notes.append("%s -> %s" % (vel_name, bicomplex_text(vel)))
    value = bicomplex_substitute(ode.rhs, mapping, ctx)
    used = {spec.dep_unit[d] for d in spec.deps}
    _check_unused_components(value, used, "the embedded right-hand side")
    factor = Expression.constant(ctx, spec.factor)
    equations = [
        Equation(pat, factor * value.component(spec.dep_unit[dep]))
        for dep, pat in zip(spec.deps, spec.lhs_for(ctx))
    ]
    system = DifferentialSystem(ctx, spec.name, equations)
    return _RawSplit(system, notes, ())


def _split_three_component(ode, spec, dual):
    """Two-stage split into three components with explicit remainders.

    The first stage produces an intermediate complex pair; one block of
    the intermediate right-hand side is kept aside so that the second
    stage closes in three unknowns. Terms that do not fit the final
    system are returned as residuals instead of being dropped silently.
    """
    indep = ode.indep
    vel_name = ode.ctx.jet(ode.dep, (ode.indep,))
    mid = JetContext((indep,), ("p", "q"), 2)
    p = Expression.symbol(mid, "p")
    q = Expression.symbol(mid, "q")
    p1 = Expression.symbol(mid, mid.jet("p", (indep,)))
    q1 = Expression.symbol(mid, mid.jet("q", (indep,)))
    m1 = {
        ode.dep: BicomplexExpression.pair(p, q, "i"),
        vel_name: BicomplexExpression.pair(p1, q1, "i"),
    }
    value = bicomplex_substitute(ode.rhs, m1, mid)
    _check_unused_components(value, {"1", "i"}, "the intermediate right-hand side")
    real_block = value.c1
    imag_block = value.ci
    notes = [
        "%s -> p + i*q" % ode.dep,
        "%s -> p' + i*q'" % vel_name,
    ]

    ctx = JetContext((indep,), spec.deps, 2)
    x0 = Expression.symbol(ctx, "x")
    y0 = Expression.symbol(ctx, "y")
    z0 = Expression.symbol(ctx, "z")
    x1 = Expression.symbol(ctx, ctx.jet("x", (indep,)))
    y1 = Expression.symbol(ctx, ctx.jet("y", (indep,)))
    z1 = Expression.symbol(ctx, ctx.jet("z", (indep,)))

    if not dual:
        # keep the q-free part of the real block as the first equation
        kept = _free_part(real_block, {"q", mid.jet("q", (indep,))})
        m2 = {
            "p": BicomplexExpression.from_real(x0),
            mid.jet("p", (indep,)): BicomplexExpression.from_real(x1),
            "q": BicomplexExpression.pair(y0, z0, "j"),
            mid.jet("q", (indep,)): BicomplexExpression.pair(y1, z1, "j"),
        }
        notes += ["p -> x", "q -> y + j*z"]
        lifted = bicomplex_substitute(imag_block, m2, ctx)
        remainder = bicomplex_substitute(kept - real_block, m2, ctx)
        _check_unused_components(lifted, {"1", "j"}, "the lifted block")
        _check_unused_components(remainder, {"1", "j"}, "the remainder block")
        first = substitute(
            kept, {"p": x0, mid.jet("p", (indep,)): x1}, ctx
        )
        rows = (first, lifted.c1, lifted.cj)
        residuals = [r for r in (remainder.c1, remainder.cj) if not r.is_zero()]
    else:
        # keep the p-free part of the imaginary block for the third equation
        kept = _free_part(imag_block, {"p", mid.jet("p", (indep,))})
        coupled = imag_block - kept
        m2 = {
            "p": BicomplexExpression.pair(x0, y0, "j"),
            mid.jet("p", (indep,)): BicomplexExpression.pair(x1, y1, "j"),
            "q": BicomplexExpression.from_real(z0),
            mid.jet("q", (indep,)): BicomplexExpression.from_real(z1),
        }
        notes += ["p -> x + j*y", "q -> z"]
        lifted = bicomplex_substitute(real_block, m2, ctx)
        extra = bicomplex_substitute(coupled, m2, ctx)
        _check_unused_components(lifted, {"1", "j"}, "the lifted block")
        _check_unused_components(extra, {"1", "j"}, "the coupled block")
        third = substitute(
            kept, {"q": z0, mid.jet("q", (indep,)): z1}, ctx
        )
        rows = (lifted.c1, lifted.cj, third + extra.c1)
        residuals = [] if extra.cj.is_zero() else [extra.cj]

    equations = [
        Equation(pat, rhs) for pat, rhs in zip(spec.lhs_for(ctx), rows)
    ]
    system = DifferentialSystem(ctx, spec.name, equations)
    return _RawSplit(system, notes, residuals)


def split_generator(gen, variant):
    """Decompose a base-equation generator along the unit directions.

    Returns one candidate operator per unit tag of the kind; whether a
    candidate actually maps solutions to solutions is a question for the
    symmetry machinery, not for this function.
    """
    spec = kind_spec(variant)
    bctx = gen.ctx
    if len(bctx.independents) != 1 or len(bctx.dependents) != 1:
        raise KindError("split_generator expects a scalar-equation generator")
    indep = bctx.independents[0]
    dep = bctx.dependents[0]
    ctx = JetContext(spec.grid(indep), spec.deps, 2)
    mapping = {dep: _embedded_dep(spec, ctx, 0)}
    if spec.pde:
        mapping[indep] = _embedded_indep(spec, ctx)
    xi_value = bicomplex_substitute(gen.xi[0], mapping, ctx)
    eta_value = bicomplex_substitute(gen.eta[0], mapping, ctx)
    out = []
    for tag in spec.operator_units:
        xi_part = xi_value.times_unit(tag)
        eta_part = eta_value.times_unit(tag)
        if spec.pde:
            xi = tuple(
                xi_part.component(spec.indep_unit[name])
                for name in ctx.independents
            )
        else:
            xi = (xi_part.component("1"),)
        eta = tuple(
            eta_part.component(spec.dep_unit[name]) for name in ctx.dependents
        )
        out.append(Generator(ctx, xi, eta, spec.imag_deps))
    return out

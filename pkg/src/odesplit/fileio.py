"""Plain-text file formats for systems and generators.

System files:

    indep: s,t
    dep: w,x,y,z
    kind: pde4x2
    constraint: x^2 + y^2 = z^2
    eq: w_ss - w_tt + 2*x_st = 4*w^2

Generator files share the two variable headers, then hold one block per
generator, blocks separated by a blank line:

    indep: s
    dep: x,y,z

    xi[s] = s^2
    eta[x] = s*x
    eta[z] = s*z !imag

Omitted coefficient lines default to zero. Parsing then printing a file
reproduces it byte for byte once expressions are canonical.
"""

from .context import JetContext
from .errors import FormatError
from .expressions import Expression
from .parsing import parse, to_text
from .systems import (
    Constraint,
    ConstraintSet,
    DifferentialSystem,
    Equation,
    Generator,
    ScalarODE,
    kind_spec,
)

_IMAG_SUFFIX = "!imag"


def _split_header(line, tag):
    if not line.startswith(tag + ":"):
        raise FormatError("expected a %r header, got %r" % (tag, line))
    names = [p.strip() for p in line[len(tag) + 1 :].split(",")]
    if any(not n for n in names):
        raise FormatError("empty name in %r header" % tag)
    return tuple(names)


def _split_equals(line, what):
    depth = 0
    for k, ch in enumerate(line):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "=" and depth == 0:
            return line[:k].strip(), line[k + 1 :].strip()
    raise FormatError("missing '=' in %s line: %r" % (what, line))


def parse_system(text):
    """Parse a system file into a DifferentialSystem."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 4:
        raise FormatError("a system file needs headers and at least one equation")
    indeps = _split_header(lines[0], "indep")
    deps = _split_header(lines[1], "dep")
    (kind,) = _split_header(lines[2], "kind")
    if kind != "generic":
        kind_spec(kind)
    ctx = JetContext(indeps, deps, 2)
    constraints = []
    equations = []
    for line in lines[3:]:
        if line.startswith("constraint:"):
            if equations:
                raise FormatError("constraints must come before equations")
            body = line[len("constraint:") :].strip()
            lhs_text, rhs_text = _split_equals(body, "constraint")
            constraints.append(
                Constraint(parse(lhs_text, ctx), parse(rhs_text, ctx))
            )
        elif line.startswith("eq:"):
            body = line[len("eq:") :].strip()
            lhs_text, rhs_text = _split_equals(body, "equation")
            equations.append(Equation(parse(lhs_text, ctx), parse(rhs_text, ctx)))
        else:
            raise FormatError("unrecognized line: %r" % line)
    cset = ConstraintSet(constraints) if constraints else None
    return DifferentialSystem(ctx, kind, equations, cset)


def print_system(system):
    """Canonical text of a system; parse_system inverts it exactly."""
    ctx = system.ctx
    out = [
        "indep: " + ",".join(ctx.independents),
        "dep: " + ",".join(ctx.dependents),
        "kind: " + system.kind,
    ]
    if system.constraints is not None:
        for con in system.constraints:
            out.append(
                "constraint: %s = %s" % (to_text(con.replacement), to_text(con.lead))
            )
    for eq in system.equations:
        out.append("eq: %s = %s" % (to_text(eq.lhs), to_text(eq.rhs)))
    return "\n".join(out) + "\n"


def read_system(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())


def write_system(system, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_system(system))


# ----------------------------------------------------------------------


def system_to_scalar(system):
    """Interpret a one-equation generic system as a scalar base equation."""
    ctx = system.ctx
    if len(system.equations) != 1:
        raise FormatError("a base file must hold exactly one equation")
    if len(ctx.independents) != 1 or len(ctx.dependents) != 1:
        raise FormatError("a base file needs one independent and one dependent")
    indep = ctx.independents[0]
    dep = ctx.dependents[0]
    eq = system.equations[0]
    expected = Expression.symbol(ctx, ctx.jet(dep, (indep, indep)))
    if eq.lhs != expected:
        raise FormatError(
            "the base equation must be solved for %s" % ctx.jet(dep, (indep, indep))
        )
    return ScalarODE(ctx, eq.rhs)


def scalar_to_system(ode):
    """Wrap a scalar base equation as a one-equation generic system."""
    ctx = ode.ctx
    lhs = Expression.symbol(ctx, ctx.jet(ode.dep, (ode.indep, ode.indep)))
    return DifferentialSystem(ctx, "generic", (Equation(lhs, ode.rhs),))


# ----------------------------------------------------------------------


def parse_generators(text):
    """Parse a generator file into (context, list of Generators)."""
    raw_lines = [ln.rstrip() for ln in text.splitlines()]
    header = [ln for ln in raw_lines[:2] if ln.strip()]
    if len(header) < 2:
        raise FormatError("a generator file starts with indep/dep headers")
    indeps = _split_header(raw_lines[0].strip(), "indep")
    deps = _split_header(raw_lines[1].strip(), "dep")
    ctx = JetContext(indeps, deps, 2)
    blocks = []
    current = []
    for ln in raw_lines[2:]:
        if ln.strip():
            current.append(ln.strip())
        elif current:
            blocks.append(current)
            current = []
    if current:
        blocks.append(current)
    if not blocks:
        raise FormatError("a generator file needs at least one generator block")
    gens = []
    zero = Expression.constant(ctx, 0)
    for block in blocks:
        xi = {n: zero for n in indeps}
        eta = {n: zero for n in deps}
        seen = set()
        imag = []
        for ln in block:
            imag_here = False
            if ln.endswith(_IMAG_SUFFIX):
                imag_here = True
                ln = ln[: -len(_IMAG_SUFFIX)].rstrip()
            target_text, value_text = _split_equals(ln, "generator")
            if target_text.startswith("xi[") and target_text.endswith("]"):
                table, name = xi, target_text[3:-1].strip()
                if name not in xi:
                    raise FormatError("unknown independent %r in generator" % name)
                if imag_here:
                    raise FormatError("imaginary marker only applies to dependents")
            elif target_text.startswith("eta[") and target_text.endswith("]"):
                table, name = eta, target_text[4:-1].strip()
                if name not in eta:
                    raise FormatError("unknown dependent %r in generator" % name)
                if imag_here:
                    imag.append(name)
            else:
                raise FormatError("unrecognized generator line: %r" % ln)
            if name in seen:
                raise FormatError("duplicate coefficient for %r" % name)
            seen.add(name)
            table[name] = parse(value_text, ctx)
        gens.append(
            Generator(
                ctx,
                tuple(xi[n] for n in indeps),
                tuple(eta[n] for n in deps),
                imag,
            )
        )
    return ctx, gens


def print_generators(gens):
    """Canonical text of a generator list over one shared context."""
    if not gens:
        raise FormatError("nothing to print")
    ctx = gens[0].ctx
    out = [
        "indep: " + ",".join(ctx.independents),
        "dep: " + ",".join(ctx.dependents),
    ]
    for gen in gens:
        if gen.ctx.signature() != ctx.signature():
            raise FormatError("generators live in different contexts")
        out.append("")
        wrote = 0
        for name in ctx.independents:
            coeff = gen.coefficient(name)
            if not coeff.is_zero():
                out.append("xi[%s] = %s" % (name, to_text(coeff)))
                wrote += 1
        for name in ctx.dependents:
            coeff = gen.coefficient(name)
            flagged = name in gen.imag_deps
            if not coeff.is_zero() or flagged:
                line = "eta[%s] = %s" % (name, to_text(coeff))
                if flagged:
                    line += " " + _IMAG_SUFFIX
                out.append(line)
                wrote += 1
        if not wrote:
            out.append("eta[%s] = 0" % ctx.dependents[0])
    return "\n".join(out) + "\n"


def read_generators(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_generators(fh.read())


def write_generators(gens, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_generators(gens))

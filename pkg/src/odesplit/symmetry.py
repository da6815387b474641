"""Point symmetries of split systems.

Prolongation of point generators to second order, on-shell residual
checks, exact solving of the determining equations under a polynomial
ansatz, Lie brackets, bracket-closure dimension, and classification of
operators obtained by splitting a base-equation generator.
"""

from __future__ import annotations

from fractions import Fraction

from .context import JetContext
from .errors import (
    DegreeOverflowError,
    InternalCheckError,
    OdesplitError,
)
from .expressions import Expression, substitute, total_derivative
from .linalg import SpanTracker, integerize, nullspace
from .systems import Generator

__all__ = [
    "SymmetryVerdict",
    "prolong",
    "symmetry_residual",
    "solve_determining",
    "lie_bracket",
    "closure_dimension",
    "classify_split_operators",
]


class SymmetryVerdict:
    """Outcome of checking one operator against one system."""

    __slots__ = ("residuals", "tag", "operator")

    def __init__(self, residuals, tag=None, operator=None):
        self.residuals = tuple(residuals)
        self.tag = tag
        self.operator = operator

    @property
    def is_symmetry(self):
        return all(r.is_zero() for r in self.residuals)

    def __repr__(self):
        return "SymmetryVerdict(is_symmetry=%s, tag=%r)" % (
            self.is_symmetry,
            self.tag,
        )


def _align(gen, ctx):
    """Rebuild a generator's coefficients inside the given context."""
    if gen.ctx is ctx:
        return gen
    xi = tuple(substitute(c, {}, ctx) for c in gen.xi)
    eta = tuple(substitute(c, {}, ctx) for c in gen.eta)
    return Generator(ctx, xi, eta, gen.imag_deps)


def prolong(gen, order):
    """Prolonged coefficients of gen for every jet up to the order.

    Returns a map jet name -> Expression. First order uses
    eta_i = D_i(eta) - sum_j u_j D_i(xi_j); second order applies the
    same recursion to the first-order coefficients.
    """
    if order not in (1, 2):
        raise OdesplitError("prolongation order must be 1 or 2")
    ctx = gen.ctx
    indeps = ctx.independents
    deps = ctx.dependents
    d_xi = {
        ind: [total_derivative(gen.xi[j], ind) for j in range(len(indeps))]
        for ind in indeps
    }
    out = {}
    first = {}
    for a, dep in enumerate(deps):
        for ind in indeps:
            coeff = total_derivative(gen.eta[a], ind)
            for j, jnd in enumerate(indeps):
                jet_j = Expression.symbol(ctx, ctx.jet(dep, (jnd,)))
                coeff = coeff - jet_j * d_xi[ind][j]
            first[(dep, ind)] = coeff
            out[ctx.jet(dep, (ind,))] = coeff
    if order == 1:
        return out
    for dep in deps:
        for i, ind_i in enumerate(indeps):
            for ind_k in indeps[i:]:
                coeff = total_derivative(first[(dep, ind_i)], ind_k)
                for j, jnd in enumerate(indeps):
                    jet_ij = Expression.symbol(ctx, ctx.jet(dep, (ind_i, jnd)))
                    coeff = coeff - jet_ij * d_xi[ind_k][j]
                out[ctx.jet(dep, (ind_i, ind_k))] = coeff
    return out


def symmetry_residual(gen, system):
    """On-shell residuals of the second prolongation on each equation."""
    ctx = system.ctx
    gen = _align(gen, ctx)
    pro = prolong(gen, 2)
    solved = system.solved_jets()
    residuals = []
    for eq in system.equations:
        target = eq.lhs - eq.rhs
        acted = Expression.constant(ctx, 0)
        for i, ind in enumerate(ctx.independents):
            acted = acted + gen.xi[i] * target.diff_partial(ind)
        for a, dep in enumerate(ctx.dependents):
            acted = acted + gen.eta[a] * target.diff_partial(dep)
        for jet_name, coeff in pro.items():
            if jet_name in target.symbols():
                acted = acted + coeff * target.diff_partial(jet_name)
        onshell = substitute(acted, solved)
        if system.constraints is not None:
            onshell = system.constraints.rewrite(onshell)
        residuals.append(onshell)
    return SymmetryVerdict(residuals, operator=gen)


def _base_monomials(names, degree):
    """All monomials over names of total degree <= degree, ascending."""
    monos = [()]
    frontier = [()]
    for _ in range(degree):
        grown = []
        for mono in frontier:
            start = names.index(mono[-1]) if mono else 0
            for name in names[start:]:
                grown.append(mono + (name,))
        monos.extend(grown)
        frontier = grown
    return monos


def _mono_expression(ctx, mono):
    out = Expression.constant(ctx, 1)
    for name in mono:
        out = out * Expression.symbol(ctx, name)
    return out


def solve_determining(system, ansatz_degree):
    """Exact basis of point symmetries under a polynomial ansatz.

    Coefficients of xi and eta are posited as polynomials of total
    degree <= ansatz_degree in the base variables; the on-shell residual
    numerators are collected per monomial into a homogeneous linear
    system whose nullspace basis is mapped back to generators.
    """
    if ansatz_degree < 1:
        raise OdesplitError("ansatz degree must be at least 1")
    base_ctx = system.ctx
    indeps = base_ctx.independents
    deps = base_ctx.dependents
    names = list(indeps) + list(deps)
    monos = _base_monomials(names, ansatz_degree)
    nslots = len(names)
    nmono = len(monos)
    nparams = nslots * nmono

    sctx = JetContext(indeps, deps, 2)
    for k in range(nparams):
        sctx.add_parameter("c%d" % k)
    mono_exprs = [_mono_expression(sctx, m) for m in monos]

    def ansatz(slot):
        out = Expression.constant(sctx, 0)
        for m_idx, mexpr in enumerate(mono_exprs):
            param = Expression.symbol(sctx, "c%d" % (slot * nmono + m_idx))
            out = out + param * mexpr
        return out

    xi = tuple(ansatz(i) for i in range(len(indeps)))
    eta = tuple(ansatz(len(indeps) + a) for a in range(len(deps)))
    gen = Generator(sctx, xi, eta)

    verdict = symmetry_residual(gen, _lift_system(system, sctx))

    param_index = {sctx.index("c%d" % k): k for k in range(nparams)}
    rows = {}
    for eq_idx, residual in enumerate(verdict.residuals):
        for mono, coeff in residual.num.items():
            rest = []
            pk = None
            for idx, exp in mono:
                if idx in param_index:
                    if pk is not None or exp != 1:
                        raise InternalCheckError(
                            "determining system is not linear in the ansatz"
                        )
                    pk = param_index[idx]
                else:
                    rest.append((idx, exp))
            if pk is None:
                raise InternalCheckError("parameter-free residual term")
            key = (eq_idx, tuple(rest))
            row = rows.get(key)
            if row is None:
                row = [Fraction(0)] * nparams
                rows[key] = row
            row[pk] += coeff
    matrix = [rows[k] for k in sorted(rows)]
    basis = nullspace(matrix, nparams)

    clean = JetContext(indeps, deps, 2)
    clean_monos = [_mono_expression(clean, m) for m in monos]
    out = []
    for vec in basis:
        vec = integerize(vec)
        coeffs = []
        for slot in range(nslots):
            expr = Expression.constant(clean, 0)
            for m_idx in range(nmono):
                c = vec[slot * nmono + m_idx]
                if c:
                    expr = expr + Expression.constant(clean, c) * clean_monos[m_idx]
            coeffs.append(expr)
        out.append(
            Generator(clean, coeffs[: len(indeps)], coeffs[len(indeps):])
        )
    return out


def _lift_system(system, ctx):
    """Copy of the system's equations inside another context.

    The new context shares the base and jet symbol layout (parameters
    are only ever appended), so any constraint set carries over as-is.
    """
    from .systems import DifferentialSystem, Equation

    eqs = [
        Equation(substitute(eq.lhs, {}, ctx), substitute(eq.rhs, {}, ctx))
        for eq in system.equations
    ]
    return DifferentialSystem(ctx, system.kind, eqs, constraints=system.constraints)


def lie_bracket(a, b):
    """Commutator of two point generators, component-wise."""
    if a.ctx is not b.ctx and a.ctx.signature() != b.ctx.signature():
        raise OdesplitError("mixing generators from different contexts")
    b = _align(b, a.ctx)
    xi = tuple(
        a.apply(b.xi[i]) - b.apply(a.xi[i]) for i in range(len(a.xi))
    )
    eta = tuple(
        a.apply(b.eta[k]) - b.apply(a.eta[k]) for k in range(len(a.eta))
    )
    imag = a.imag_deps if a.imag_deps == b.imag_deps else frozenset()
    return Generator(a.ctx, xi, eta, imag)


def _coefficient_vector(gen, index):
    """Concatenated coefficient vector of gen over the monomial basis."""
    vec = []
    for coeff in gen.xi + gen.eta:
        if list(coeff.den.keys()) != [()]:
            raise DegreeOverflowError(
                "generator coefficient is not polynomial"
            )
        scale = coeff.den[()]
        block = [Fraction(0)] * len(index)
        for mono, c in coeff.num.items():
            pos = index.get(mono)
            if pos is None:
                raise DegreeOverflowError(
                    "coefficient degree exceeds the closure bound"
                )
            block[pos] = c / scale
        vec.extend(block)
    return vec


def _mono_index(ctx, degree):
    names = list(ctx.independents) + list(ctx.dependents)
    monos = _base_monomials(names, degree)
    index = {}
    for pos, mono in enumerate(monos):
        counts = {}
        for name in mono:
            counts[ctx.index(name)] = counts.get(ctx.index(name), 0) + 1
        index[tuple(sorted(counts.items()))] = pos
    return index


def closure_dimension(gens, degree_bound):
    """Dimension of the bracket closure of the generators' span."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return 0
    ctx = gens[0].ctx
    index = _mono_index(ctx, degree_bound)
    ncols = (len(ctx.independents) + len(ctx.dependents)) * len(index)
    span = SpanTracker(ncols)
    basis = []
    for g in gens:
        g = _align(g, ctx)
        if span.add(_coefficient_vector(g, index)):
            basis.append(g)
    while True:
        added = False
        snapshot = list(basis)
        for i in range(len(snapshot)):
            for j in range(i + 1, len(snapshot)):
                br = lie_bracket(snapshot[i], snapshot[j])
                if br.is_zero():
                    continue
                if span.add(_coefficient_vector(br, index)):
                    basis.append(br)
                    added = True
        if not added:
            break
    return span.dimension


def classify_split_operators(base_gens, system, variant):
    """Split base generators and classify each candidate operator.

    Zero candidates and candidates linearly dependent on earlier ones
    are dropped; the rest are tagged lie-symmetry or lie-like by their
    on-shell residuals against the system.
    """
    from .splitting import split_generator

    ops = []
    for g in base_gens:
        ops.extend(split_generator(g, variant))
    ops = [op for op in ops if not op.is_zero()]
    if not ops:
        return []
    degree = 0
    for op in ops:
        for coeff in op.xi + op.eta:
            for mono in coeff.num:
                degree = max(degree, sum(e for _, e in mono))
    ctx = system.ctx
    index = _mono_index(ctx, degree)
    ncols = (len(ctx.independents) + len(ctx.dependents)) * len(index)
    span = SpanTracker(ncols)
    verdicts = []
    for op in ops:
        op = _align(op, ctx)
        if not span.add(_coefficient_vector(op, index)):
            continue
        verdict = symmetry_residual(op, system)
        verdict.tag = "lie-symmetry" if verdict.is_symmetry else "lie-like"
        verdicts.append(verdict)
    return verdicts

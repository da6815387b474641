"""Fixed-step numerical cross-checks for ODE-kind systems.

Classical fourth-order Runge-Kutta on the first-order reduction, a
complex-arithmetic twin for the scalar base equation, and a
correspondence report comparing a split trajectory against the base
trajectory through the embedding map.
"""

from __future__ import annotations

import io
import math

from .errors import KindError, OdesplitError, PoleError
from .systems import kind_spec

__all__ = [
    "NumericTrajectory",
    "CorrespondenceReport",
    "integrate_system",
    "integrate_base_complex",
    "correspondence_report",
    "observed_order",
]


class NumericTrajectory:
    """Sampled solution values on a uniform grid."""

    __slots__ = ("start", "step", "count", "indep", "names", "columns",
                 "method", "constraint_samples")

    def __init__(self, start, step, count, indep, names, columns,
                 constraint_samples=()):
        if step == 0 or count < 1:
            raise OdesplitError("grid must be strictly monotone")
        names = tuple(names)
        for name in names:
            if len(columns[name]) != count + 1:
                raise OdesplitError("column %r does not cover the grid" % name)
        self.indep = str(indep)
        self.start = float(start)
        self.step = float(step)
        self.count = int(count)
        self.names = names
        self.columns = {n: tuple(columns[n]) for n in names}
        self.method = "rk4"
        self.constraint_samples = tuple(tuple(c) for c in constraint_samples)

    def grid(self):
        return [self.start + k * self.step for k in range(self.count + 1)]

    def same_grid(self, other):
        return (
            self.start == other.start
            and self.step == other.step
            and self.count == other.count
        )

    def to_csv(self, path=None):
        """Comma-separated values, header = variable names."""
        buf = io.StringIO()
        buf.write(",".join((self.indep,) + self.names) + "\n")
        grid = self.grid()
        for k in range(self.count + 1):
            row = [repr(grid[k])]
            row += [repr(self.columns[n][k]) for n in self.names]
            buf.write(",".join(row) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _compile(expr):
    """Closure evaluating an exact expression over float or complex values.

    Values are looked up by symbol index; division by an exactly zero
    denominator raises PoleError, non-finite results raise OdesplitError.
    """
    num = [(mono, float(c)) for mono, c in sorted(expr.num.items())]
    den = [(mono, float(c)) for mono, c in sorted(expr.den.items())]

    def term(mono, c, values):
        acc = c
        for idx, exp in mono:
            acc *= values[idx] ** exp
        return acc

    def run(values):
        top = sum(term(m, c, values) for m, c in num)
        bot = sum(term(m, c, values) for m, c in den)
        if bot == 0:
            raise PoleError("denominator vanished during integration")
        out = top / bot
        if isinstance(out, complex):
            finite = math.isfinite(out.real) and math.isfinite(out.imag)
        else:
            finite = math.isfinite(out)
        if not finite:
            raise OdesplitError("non-finite value during integration")
        return out

    return run


def _rk4(deriv, state, r0, step, count):
    """Classical Runge-Kutta; returns the list of states per grid point."""
    states = [tuple(state)]
    y = list(state)
    h = step
    r = r0
    for _ in range(count):
        k1 = deriv(r, y)
        k2 = deriv(r + h / 2, [y[i] + h / 2 * k1[i] for i in range(len(y))])
        k3 = deriv(r + h / 2, [y[i] + h / 2 * k2[i] for i in range(len(y))])
        k4 = deriv(r + h, [y[i] + h * k3[i] for i in range(len(y))])
        y = [
            y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
            for i in range(len(y))
        ]
        r += h
        states.append(tuple(y))
    return states


def integrate_system(system, initial, grid):
    """RK4 trajectory of an ODE-kind system from the given initial data.

    initial maps every dependent and its first derivative to a float;
    grid is (start, step, count). Constraint residuals, when the system
    carries a ConstraintSet, are sampled along the trajectory.
    """
    ctx = system.ctx
    if len(ctx.independents) != 1:
        raise KindError("numeric integration supports ODE kinds only")
    if system.kind != "generic" and kind_spec(system.kind).pde:
        raise KindError("numeric integration supports ODE kinds only")
    indep = ctx.independents[0]
    deps = ctx.dependents
    vels = [ctx.jet(d, (indep,)) for d in deps]

    solved = system.solved_jets()
    accels = []
    for d in deps:
        name = ctx.jet(d, (indep, indep))
        if name not in solved:
            raise KindError("system does not solve for %r" % name)
        accels.append(_compile(solved[name]))

    layout = [ctx.index(indep)]
    for n in list(deps) + vels:
        layout.append(ctx.index(n))
    width = max(layout) + 1

    try:
        state = [float(initial[n]) for n in list(deps) + vels]
    except KeyError as missing:
        raise OdesplitError("missing initial value for %s" % missing)

    def deriv(r, y):
        values = [0.0] * width
        values[layout[0]] = r
        for pos, idx in enumerate(layout[1:]):
            values[idx] = y[pos]
        n = len(deps)
        return list(y[n:]) + [f(values) for f in accels]

    start, step, count = grid
    states = _rk4(deriv, state, float(start), float(step), int(count))

    names = list(deps) + vels
    columns = {
        n: [st[i] for st in states] for i, n in enumerate(names)
    }
    samples = []
    if system.constraints is not None:
        width_all = width
        fns = [
            _compile(con.lead - con.replacement)
            for con in system.constraints
        ]
        grid_pts = [float(start) + k * float(step) for k in range(int(count) + 1)]
        for f in fns:
            col = []
            for k, st in enumerate(states):
                values = [0.0] * width_all
                values[layout[0]] = grid_pts[k]
                for pos, idx in enumerate(layout[1:]):
                    values[idx] = st[pos]
                col.append(f(values))
            samples.append(col)
    return NumericTrajectory(start, step, count, indep, names, columns, samples)


def integrate_base_complex(ode, initial, grid):
    """RK4 trajectory of the scalar base equation over complex values.

    initial maps the dependent and its first derivative to complex
    numbers; columns come back split into real and imaginary parts.
    """
    ctx = ode.ctx
    indep = ode.indep
    dep = ode.dep
    vel = ctx.jet(dep, (indep,))
    rhs = _compile(ode.rhs)
    layout = [ctx.index(indep), ctx.index(dep), ctx.index(vel)]
    width = max(layout) + 1

    try:
        state = [complex(initial[dep]), complex(initial[vel])]
    except KeyError as missing:
        raise OdesplitError("missing initial value for %s" % missing)

    def deriv(r, y):
        values = [complex(0.0)] * width
        values[layout[0]] = complex(r)
        values[layout[1]] = y[0]
        values[layout[2]] = y[1]
        return [y[1], rhs(values)]

    start, step, count = grid
    states = _rk4(deriv, state, float(start), float(step), int(count))
    names = (dep + "_re", dep + "_im", vel + "_re", vel + "_im")
    columns = {
        names[0]: [st[0].real for st in states],
        names[1]: [st[0].imag for st in states],
        names[2]: [st[1].real for st in states],
        names[3]: [st[1].imag for st in states],
    }
    return NumericTrajectory(start, step, count, indep, names, columns)


def observed_order(run, h, count):
    """Empirical convergence order of an integration under step halving.

    run(step, count) must return a NumericTrajectory covering the same
    interval. The order is measured by Richardson comparison of the
    final states at h, h/2, h/4; exact agreement (for instance on
    polynomial solutions) reports infinity.
    """
    t1 = run(h, count)
    t2 = run(h / 2, count * 2)
    t4 = run(h / 4, count * 4)

    def final_gap(a, b):
        return max(
            abs(a.columns[n][-1] - b.columns[n][-1]) for n in a.names
        )

    e12 = final_gap(t1, t2)
    e24 = final_gap(t2, t4)
    if e24 == 0:
        return math.inf
    return math.log2(e12 / e24) if e12 > 0 else math.inf


class CorrespondenceReport:
    """Per-component deviation of a split trajectory from the base."""

    __slots__ = ("variant", "per_component", "max_deviation",
                 "constraint_drift")

    def __init__(self, variant, per_component, constraint_drift=None):
        self.variant = variant
        self.per_component = dict(per_component)
        self.max_deviation = max(per_component.values()) if per_component else 0.0
        self.constraint_drift = constraint_drift

    def __repr__(self):
        return "CorrespondenceReport(max_deviation=%g)" % self.max_deviation


def correspondence_report(base, system, variant):
    """Compare a split-system trajectory against the embedded base run.

    Components carried by the real and first imaginary unit must track
    the base solution's real and imaginary parts; components on the
    remaining units must stay at zero when the initial data sits on the
    matching slice.
    """
    spec = kind_spec(variant)
    if spec.pde:
        raise KindError("numeric correspondence covers ODE variants only")
    if not base.same_grid(system):
        raise OdesplitError("trajectories use different grids")
    re_name, im_name = base.names[0], base.names[1]
    targets = {
        "1": base.columns[re_name],
        "i": base.columns[im_name],
    }
    per = {}
    for d in spec.deps:
        unit = spec.dep_unit[d]
        col = system.columns[d]
        want = targets.get(unit)
        if want is None:
            dev = max(abs(v) for v in col)
        else:
            dev = max(abs(a - b) for a, b in zip(col, want))
        per[d] = dev
    drift = None
    if system.constraint_samples:
        drift = max(
            max(abs(v) for v in col) for col in system.constraint_samples
        )
    return CorrespondenceReport(variant, per, drift)

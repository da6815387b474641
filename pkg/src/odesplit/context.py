"""Jet-space symbol tables.

A JetContext owns the ordered symbol universe for one differential setting:
independent variables, dependent variables, jet coordinates up to a fixed
derivative order, and optional parameters. Expressions refer to symbols by
index into this table, so the table also fixes the monomial order used for
canonical forms.
"""

from __future__ import annotations

import re
from itertools import combinations_with_replacement

from .errors import JetOrderError, OdesplitError

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")

# Jets one order above the public maximum are registered so that total
# derivatives of highest-order public jets stay representable.
_INTERNAL_EXTRA = 1


class JetContext:
    """Symbol table for a fixed jet space."""

    __slots__ = (
        "independents",
        "dependents",
        "max_order",
        "_parameters",
        "_index",
        "_names",
        "_jets",
    )

    def __init__(self, independents, dependents, max_order=2):
        independents = tuple(independents)
        dependents = tuple(dependents)
        if not independents or not dependents:
            raise OdesplitError("need at least one independent and one dependent")
        for name in independents + dependents:
            if not _IDENT.match(name):
                raise OdesplitError("bad symbol name: %r" % name)
        if len(independents) > 1:
            for name in independents:
                if len(name) != 1:
                    raise OdesplitError(
                        "independents must be single letters when there are "
                        "several (jet subscripts): %r" % name
                    )
        if set(independents) & set(dependents):
            raise OdesplitError("independent and dependent names overlap")
        if max_order < 1:
            raise OdesplitError("max_order must be at least 1")
        self.independents = independents
        self.dependents = dependents
        self.max_order = max_order
        self._parameters = []
        self._names = list(independents) + list(dependents)
        self._jets = {}
        for order in range(1, max_order + 1 + _INTERNAL_EXTRA):
            for dep in dependents:
                for multi in combinations_with_replacement(independents, order):
                    name = self._jet_name(dep, multi)
                    if name in self._names:
                        raise OdesplitError("jet name collides: %r" % name)
                    self._names.append(name)
                    self._jets[name] = (dep, multi)
        self._index = {name: k for k, name in enumerate(self._names)}
        if len(self._index) != len(self._names):
            raise OdesplitError("duplicate symbol names")

    def _jet_name(self, dep, multi):
        if len(self.independents) == 1:
            return dep + "'" * len(multi)
        return dep + "_" + "".join(multi)

    # ------------------------------------------------------------------
    # lookups

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise OdesplitError("unknown symbol: %r" % name) from None

    def name(self, idx):
        return self._names[idx]

    def has(self, name):
        return name in self._index

    @property
    def names(self):
        return tuple(self._names)

    @property
    def parameters(self):
        return tuple(self._parameters)

    def classify(self, name):
        if name in self._jets:
            return "jet"
        if name in self.independents:
            return "independent"
        if name in self.dependents:
            return "dependent"
        if name in self._parameters:
            return "parameter"
        raise OdesplitError("unknown symbol: %r" % name)

    def is_jet(self, name):
        return name in self._jets

    def jet_parts(self, name):
        """Return (dependent, multi-index tuple) for a jet coordinate."""
        try:
            return self._jets[name]
        except KeyError:
            raise OdesplitError("not a jet coordinate: %r" % name) from None

    def jet_order(self, name):
        if name in self._jets:
            return len(self._jets[name][1])
        if name in self.dependents:
            return 0
        raise OdesplitError("not a dependent or jet: %r" % name)

    def jet(self, dep, indices):
        """Canonical jet name for dep differentiated along indices."""
        if dep not in self.dependents:
            raise OdesplitError("not a dependent: %r" % dep)
        order = len(indices)
        if order == 0:
            return dep
        if order > self.max_order + _INTERNAL_EXTRA:
            raise JetOrderError(
                "derivative order %d exceeds maximum %d" % (order, self.max_order)
            )
        pos = {v: k for k, v in enumerate(self.independents)}
        for v in indices:
            if v not in pos:
                raise OdesplitError("not an independent: %r" % v)
        multi = tuple(sorted(indices, key=pos.get))
        return self._jet_name(dep, multi)

    def next_jet(self, name, indep):
        """Jet coordinate one derivative (along indep) above name."""
        if name in self.dependents:
            return self.jet(name, (indep,))
        dep, multi = self.jet_parts(name)
        return self.jet(dep, multi + (indep,))

    def public_order_ok(self, name):
        """True when the symbol may appear in parsed or printed text."""
        if name in self._jets:
            return len(self._jets[name][1]) <= self.max_order
        return True

    # ------------------------------------------------------------------
    # parameters

    def add_parameter(self, name):
        if not _IDENT.match(name):
            raise OdesplitError("bad parameter name: %r" % name)
        if name in self._index:
            if name in self._parameters:
                return self._index[name]
            raise OdesplitError("parameter name collides: %r" % name)
        self._parameters.append(name)
        self._names.append(name)
        self._index[name] = len(self._names) - 1
        return self._index[name]

    # ------------------------------------------------------------------

    def signature(self):
        return (
            self.independents,
            self.dependents,
            self.max_order,
            tuple(self._parameters),
        )

    def __repr__(self):
        return "JetContext(independents=%r, dependents=%r, max_order=%d)" % (
            self.independents,
            self.dependents,
            self.max_order,
        )

"""Exact linear algebra over the rationals.

Everything here works on plain lists of Fractions so the rest of the
package can stay allocation-light and deterministic: same input rows,
same output basis, every time.
"""

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns); zero rows are dropped.
    """
    mat = [list(r) for r in rows if any(x != 0 for x in r)]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    lead = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(lead, len(mat)):
            if mat[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[lead], mat[pivot_row] = mat[pivot_row], mat[lead]
        pv = mat[lead][col]
        if pv != 1:
            mat[lead] = [x / pv for x in mat[lead]]
        row = mat[lead]
        for r in range(len(mat)):
            if r != lead and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], row)]
        pivots.append(col)
        lead += 1
        if lead == len(mat):
            break
    return mat[:lead], pivots


def rank(rows):
    return len(rref(rows)[0])


def nullspace(rows, ncols):
    """Basis of the solution space of rows * v = 0.

    Rows may be empty, in which case the standard basis comes back.
    Basis vectors are indexed by ascending free column and scaled so the
    free coordinate is 1.
    """
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * ncols
        vec[free] = _ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][free]
        basis.append(vec)
    return basis


def integerize(vec):
    """Scale a rational vector to coprime integers, first nonzero positive."""
    denors = [x.denominator for x in vec if x != 0]
    if not denors:
        return list(vec)
    mult = 1
    for d in denors:
        g = _gcd(mult, d)
        mult = mult // g * d
    ints = [x * mult for x in vec]
    g = 0
    for x in ints:
        g = _gcd(g, x.numerator)
    if g > 1:
        ints = [x / g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def _gcd(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a if a else 1


class SpanTracker:
    """Incremental rational span with O(dim) membership updates."""

    def __init__(self, ncols):
        self.ncols = ncols
        self._rows = []  # list of (pivot_index, normalized vector)

    def _reduce(self, vec):
        vec = list(vec)
        for pivot, row in self._rows:
            c = vec[pivot]
            if c != 0:
                for k in range(pivot, self.ncols):
                    vec[k] -= c * row[k]
        return vec

    def contains(self, vec):
        return not any(x != 0 for x in self._reduce(vec))

    def add(self, vec):
        """Add a vector; True when it enlarged the span."""
        red = self._reduce(vec)
        pivot = None
        for k, x in enumerate(red):
            if x != 0:
                pivot = k
                break
        if pivot is None:
            return False
        pv = red[pivot]
        if pv != 1:
            red = [x / pv for x in red]
        self._rows.append((pivot, red))
        self._rows.sort(key=lambda pr: pr[0])
        return True

    @property
    def dimension(self):
        return len(self._rows)

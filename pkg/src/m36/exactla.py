"""Exact sparse linear algebra over Z and Q.

Everything here is built around one primitive: an insertion echelon form with
rightmost pivots.  Rows arrive one at a time as {column: coefficient} dicts;
each row is reduced against the current basis and either dies (it was in the
span) or becomes a new pivot row.  Over Z the reduction uses Euclidean
exchanges, so row operations stay unimodular and the row-span lattice is
preserved exactly.  That gives three things at once:

  * the rank (number of pivot rows),
  * a torsion certificate: if every pivot row ends with lead coefficient 1,
    the pivot minor is +-1, the row lattice is a direct summand, and the
    cokernel is torsion-free with no further work,
  * reduced row echelon data for normal forms and kernels over Q.

When a lead refuses to become a unit the Smith normal form falls back to a
dense textbook elimination on the (small) echelon residue.

Matrices in this project have entries almost entirely in {-1, 0, 1} and very
sparse rows, which is why this pure-Python kernel is fast enough; coefficient
growth in the Euclidean phase has never been observed to matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def xgcd(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid far beyond machine words."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class SparseIntegerMatrix:
    """Row-sparse integer matrix: rows are tuples of (col, coeff) with strictly
    increasing columns and nonzero arbitrary-precision coefficients."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows):
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        for row in rows:
            prev = -1
            for col, coeff in row:
                if not 0 <= col < ncols:
                    raise ValueError("column index out of range")
                if col <= prev:
                    raise ValueError("columns must increase within a row")
                if coeff == 0:
                    raise ValueError("stored zero coefficient")
                prev = col
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [tuple(row) for row in rows]

    @classmethod
    def from_dicts(cls, ncols, dicts):
        rows = [tuple(sorted((c, v) for c, v in d.items() if v)) for d in dicts]
        return cls(len(rows), ncols, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [((i, 1),) for i in range(n)])

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, ncols, [()] * nrows)

    def row_dicts(self):
        for row in self.rows:
            yield dict(row)

    def transpose(self):
        cols = [[] for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for col, coeff in row:
                cols[col].append((i, coeff))
        return SparseIntegerMatrix(self.ncols, self.nrows, [tuple(c) for c in cols])

    def dump_sms(self, fh):
        """Triplet text dump: 'nrows ncols M', then 1-based 'i j v' lines,
        then the '0 0 0' terminator."""
        fh.write("%d %d M\n" % (self.nrows, self.ncols))
        for i, row in enumerate(self.rows):
            for col, coeff in row:
                fh.write("%d %d %d\n" % (i + 1, col + 1, coeff))
        fh.write("0 0 0\n")

    @classmethod
    def load_sms(cls, fh):
        header = fh.readline().split()
        nrows, ncols = int(header[0]), int(header[1])
        rows = [[] for _ in range(nrows)]
        for line in fh:
            i, j, v = line.split()
            i, j, v = int(i), int(j), int(v)
            if (i, j, v) == (0, 0, 0):
                break
            rows[i - 1].append((j - 1, v))
        return cls(nrows, ncols, [tuple(sorted(r)) for r in rows])


def _submul(row, b, q):
    """row -= q * b, in place, dropping zeros."""
    get = row.get
    for col, v in b.items():
        nv = get(col, 0) - q * v
        if nv:
            row[col] = nv
        else:
            del row[col]


def _content(row):
    g = 0
    for v in row.values():
        g = _gcd(g, v)
        if g == 1:
            return 1
    return g


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


class IntEchelon:
    """Insertion echelon over Z with rightmost (largest-column) pivots.

    reduce_content=True divides each new pivot row by its content.  That is
    fine for ranks and kernels over Q but changes the row lattice, so torsion
    work must keep it off.
    """

    def __init__(self, reduce_content=False):
        self.pivots = {}
        self.reduce_content = reduce_content
        self.insertion_order = []

    @property
    def rank(self):
        return len(self.pivots)

    def insert(self, row):
        """Reduce a {col: coeff} dict against the basis; returns the new pivot
        column, or None if the row was already in the span.  The dict is
        consumed."""
        pivots = self.pivots
        while row:
            lead = max(row)
            b = pivots.get(lead)
            if b is None:
                if row[lead] < 0:
                    row = {c: -v for c, v in row.items()}
                if self.reduce_content:
                    g = _content(row)
                    if g > 1:
                        row = {c: v // g for c, v in row.items()}
                pivots[lead] = row
                self.insertion_order.append(lead)
                return lead
            c, d = row[lead], b[lead]
            if c % d == 0:
                _submul(row, b, c // d)
            else:
                g, s, t = xgcd(d, c)
                du, cu = d // g, c // g
                # unimodular exchange: det [[s, t], [-cu, du]] = (sd + tc)/g = 1
                newb = {}
                newrow = {}
                for col in b.keys() | row.keys():
                    bv = b.get(col, 0)
                    rv = row.get(col, 0)
                    nv = s * bv + t * rv
                    if nv:
                        newb[col] = nv
                    nv = du * rv - cu * bv
                    if nv:
                        newrow[col] = nv
                pivots[lead] = newb  # lead coefficient is g > 0
                row = newrow  # lead eliminated
        return None

    def reduces_to_zero(self, row):
        """Whether a row lies in the current row span over Q (the row dict is
        consumed; the basis is not modified)."""
        pivots = self.pivots
        while row:
            lead = max(row)
            b = pivots.get(lead)
            if b is None:
                return False
            c, d = row[lead], b[lead]
            if c % d == 0:
                _submul(row, b, c // d)
            else:
                # clear denominators: d*row - c*b kills the lead and spans the
                # same line as row modulo b over Q
                g = _gcd(c, d)
                du, cu = d // g, c // g
                newrow = {col: du * v for col, v in row.items()}
                for col, v in b.items():
                    nv = newrow.get(col, 0) - cu * v
                    if nv:
                        newrow[col] = nv
                    else:
                        newrow.pop(col, None)
                row = newrow
        return True

    def unit_leads(self):
        return all(r[L] == 1 for L, r in self.pivots.items())

    def rref(self):
        """Fully reduced rows over Q: {lead: {col: coeff}} with the (implicit)
        lead entry normalized to 1 and all other support on non-pivot columns.
        Coefficients stay int while the arithmetic allows, Fraction otherwise.
        """
        reduced = {}
        # ascending leads: every smaller pivot column is reduced before a row
        # that might contain it, and eliminating a pivot column only ever
        # introduces non-pivot support, so one pass per row suffices
        for lead in sorted(self.pivots):
            row = dict(self.pivots[lead])
            d = row.pop(lead)
            if d != 1:
                row = {c: Fraction(v, d) for c, v in row.items()}
            for c in [c for c in row if c in reduced]:
                coeff = row.pop(c)
                for col, v in reduced[c].items():
                    nv = row.get(col, 0) - coeff * v
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
            reduced[lead] = row
        return reduced

    def kernel_basis(self, ncols):
        """Basis of the right kernel over Q, one vector per non-pivot column,
        as {col: coeff} dicts (int or Fraction) with 1 at the defining column.
        """
        rref = self.rref()
        pivot_cols = set(rref)
        out = []
        for j in range(ncols):
            if j in pivot_cols:
                continue
            v = {j: 1}
            for lead, row in rref.items():
                if j in row:
                    v[lead] = -row[j]
            out.append(v)
        return out


class ModpEchelon:
    """Insertion echelon over GF(p), rightmost pivots, rows normalized monic."""

    def __init__(self, p):
        self.p = p
        self.pivots = {}
        self.insertion_order = []

    @property
    def rank(self):
        return len(self.pivots)

    def insert(self, row):
        """row: {col: coeff} with coefficients already reduced mod p (zeros
        allowed; they are dropped).  Consumed.  Returns pivot column or None."""
        p = self.p
        pivots = self.pivots
        row = {c: v for c, v in ((c, v % p) for c, v in row.items()) if v}
        while row:
            lead = max(row)
            b = pivots.get(lead)
            if b is None:
                inv = pow(row[lead], p - 2, p)
                if inv != 1:
                    row = {c: v * inv % p for c, v in row.items()}
                pivots[lead] = row
                self.insertion_order.append(lead)
                return lead
            q = row[lead]
            get = row.get
            for col, v in b.items():
                nv = (get(col, 0) - q * v) % p
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
        return None

    def kernel_basis(self, ncols):
        """Right-kernel basis mod p; rows are already monic, so back-reduction
        mirrors the rational case."""
        p = self.p
        reduced = {}
        for lead in sorted(self.pivots):
            row = dict(self.pivots[lead])
            row.pop(lead)
            for c in [c for c in row if c in reduced]:
                coeff = row.pop(c)
                for col, v in reduced[c].items():
                    nv = (row.get(col, 0) - coeff * v) % p
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
            reduced[lead] = row
        pivot_cols = set(reduced)
        out = []
        for j in range(ncols):
            if j in pivot_cols:
                continue
            v = {j: 1}
            for lead, row in reduced.items():
                if j in row:
                    v[lead] = (-row[j]) % p
            out.append(v)
        return out


@dataclass(frozen=True)
class SmithInvariants:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    diagonal: tuple

    @property
    def rank(self):
        return len(self.diagonal)

    @property
    def torsion_free(self):
        """Whether the cokernel of the matrix (as a map into Z^ncols) has no
        torsion, i.e. all invariant factors are 1."""
        return all(d == 1 for d in self.diagonal)


def rank_over_rationals(m):
    ech = IntEchelon(reduce_content=True)
    for row in m.row_dicts():
        ech.insert(row)
    return ech.rank


def rank_mod_p(m, p):
    if not is_prime(p):
        raise ValueError("modulus %d is not prime" % p)
    ech = ModpEchelon(p)
    for row in m.row_dicts():
        ech.insert(row)
    return ech.rank


def nullspace_basis(m):
    """Basis of the right kernel over Q as dense Fraction lists."""
    ech = IntEchelon(reduce_content=True)
    for row in m.row_dicts():
        ech.insert(row)
    out = []
    for v in ech.kernel_basis(m.ncols):
        vec = [Fraction(0)] * m.ncols
        for c, val in v.items():
            vec[c] = Fraction(val)
        out.append(vec)
    return out


def smith_normal_form(m):
    """Exact invariant factors via unit-lead echelon with a dense fallback."""
    ech = IntEchelon(reduce_content=False)
    for row in m.row_dicts():
        ech.insert(row)
    if ech.unit_leads():
        return SmithInvariants((1,) * ech.rank)
    rows = [dict(r) for r in ech.pivots.values()]
    diag = _dense_snf(rows)
    return SmithInvariants(tuple(diag))


def smith_from_echelon(ech):
    """SmithInvariants of a matrix already fed through an IntEchelon built
    with reduce_content=False."""
    if ech.reduce_content:
        raise ValueError("content-reduced echelon cannot certify torsion")
    if ech.unit_leads():
        return SmithInvariants((1,) * ech.rank)
    rows = [dict(r) for r in ech.pivots.values()]
    return SmithInvariants(tuple(_dense_snf(rows)))


def _dense_snf(rows):
    """Textbook Smith normal form of a list of {col: coeff} rows; returns the
    nonzero invariant factors.  Quadratic-ish and meant for small residues."""
    rows = [dict(r) for r in rows if r]
    diag = []
    while rows:
        rows = [r for r in rows if r]
        if not rows:
            break
        # pick the entry with smallest |value| to control growth
        bi, bc, bv = -1, -1, 0
        for i, r in enumerate(rows):
            for c, v in r.items():
                if bv == 0 or abs(v) < abs(bv):
                    bi, bc, bv = i, c, v
        pivot_row, pivot_col = bi, bc
        while True:
            # clear the pivot column from other rows
            dirty = False
            pr = rows[pivot_row]
            pv = pr[pivot_col]
            for i, r in enumerate(rows):
                if i == pivot_row:
                    continue
                v = r.get(pivot_col)
                if v is None:
                    continue
                q = v // pv
                if q:
                    _submul(r, pr, q)
                if r.get(pivot_col):
                    # remainder smaller than pivot; swap roles and restart
                    pivot_row = i
                    dirty = True
                    break
            if dirty:
                continue
            # pivot column clean; now clear the pivot row via column ops,
            # which only touch this row since the column is clean
            pr = rows[pivot_row]
            pv = pr[pivot_col]
            rem = None
            for c in list(pr):
                if c == pivot_col:
                    continue
                q, r_ = divmod(pr[c], pv)
                if r_ == 0:
                    del pr[c]
                else:
                    pr[c] = r_
                    rem = c
            if rem is not None:
                # a column remainder is smaller than the pivot; make it the
                # new pivot and repeat
                pivot_col = rem
                continue
            break
        pr = rows.pop(pivot_row)
        pv = abs(pr[pivot_col])
        diag.append(pv)
        if len(pr) != 1:
            raise AssertionError("pivot row not cleared")
    # enforce the divisibility chain by pairwise gcd/lcm repair
    diag.sort()
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if b % a:
                g = _gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
        diag.sort()
    return diag

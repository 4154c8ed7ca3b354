"""Multivariate polynomials over an exact field, matrices, and exact
linear algebra (rref/rank/solve/kernel, characteristic polynomials, and
pseudoinverses of rational matrices).

A PolyRing is field + named variables; MultiPoly stores terms in a dict
keyed by packed exponents (16 bits per variable).  RingMatrix is a dense
matrix of MultiPoly entries.  Scalar matrices (plain lists of lists of
field values) have their own helpers, which is where all the elimination
work happens; RingMatrix delegates to them after checking entries are
constant.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError, InternalError
from .scalars import QQ, FunctionField, Rationals

XBITS = 16
XMASK = (1 << XBITS) - 1


class PolyRing:
    """k[x_1..x_n] for an exact coefficient field k."""

    def __init__(self, field, names):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate ring variable names")
        self.nvars = len(self.names)
        self.index = {nm: i for i, nm in enumerate(self.names)}

    def pack(self, exps):
        if len(exps) != self.nvars:
            raise InputError(f"expected {self.nvars} exponents, got {len(exps)}")
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > XMASK:
                raise InputError(f"exponent {e} out of range")
            key |= e << (XBITS * i)
        return key

    def unpack(self, key):
        return tuple((key >> (XBITS * i)) & XMASK for i in range(self.nvars))

    def key_divides(self, ka, kb):
        while ka or kb:
            if (ka & XMASK) > (kb & XMASK):
                return False
            ka >>= XBITS
            kb >>= XBITS
        return True

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return MultiPoly(self, {0: self.field.one})

    def const(self, c):
        return MultiPoly(self, {0: c} if not self.field.is_zero(c) else {})

    def from_int(self, n):
        return self.const(self.field.from_int(n))

    def var(self, name_or_index, exp=1):
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return MultiPoly(self, {exp << (XBITS * i): self.field.one})

    def monomial(self, exps, coeff=None):
        c = coeff if coeff is not None else self.field.one
        if self.field.is_zero(c):
            return self.zero()
        return MultiPoly(self, {self.pack(exps): c})

    def same(self, other):
        return self.field is other.field and self.names == other.names

    def __repr__(self):
        return f"PolyRing({self.field!r}, {list(self.names)})"


class MultiPoly:
    """A polynomial: dict of packed-exponent key -> nonzero field value."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self):
        return self.terms.get(0, self.ring.field.zero)

    def __add__(self, other):
        f = self.ring.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = f.add(out.get(k, f.zero), c)
            if f.is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
        return MultiPoly(self.ring, out)

    def __sub__(self, other):
        f = self.ring.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = f.sub(out.get(k, f.zero), c)
            if f.is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
        return MultiPoly(self.ring, out)

    def __neg__(self):
        f = self.ring.field
        return MultiPoly(self.ring, {k: f.neg(c) for k, c in self.terms.items()})

    def __mul__(self, other):
        f = self.ring.field
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly(self.ring, {})
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                prod = f.mul(ca, cb)
                if k in out:
                    v = f.add(out[k], prod)
                    if f.is_zero(v):
                        del out[k]
                    else:
                        out[k] = v
                elif not f.is_zero(prod):
                    out[k] = prod
        return MultiPoly(self.ring, out)

    def scale(self, c):
        f = self.ring.field
        if f.is_zero(c):
            return MultiPoly(self.ring, {})
        out = {}
        for k, v in self.terms.items():
            w = f.mul(c, v)
            if not f.is_zero(w):
                out[k] = w
        return MultiPoly(self.ring, out)

    def eq(self, other):
        f = self.ring.field
        if self.terms.keys() != other.terms.keys():
            return False
        return all(f.eq(c, other.terms[k]) for k, c in self.terms.items())

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(self.ring.unpack(k)) for k in self.terms)

    def coefficient(self, exps):
        return self.terms.get(self.ring.pack(exps), self.ring.field.zero)

    def augment(self):
        """Evaluate at all ring variables = 1 (sum of coefficients)."""
        f = self.ring.field
        total = f.zero
        for c in self.terms.values():
            total = f.add(total, c)
        return total

    def permute_vars(self, perm):
        """Apply x_i -> x_{perm[i]}; perm is a list with perm[i] = image index."""
        ring = self.ring
        out = {}
        for k, c in self.terms.items():
            exps = ring.unpack(k)
            new = [0] * ring.nvars
            for i, e in enumerate(exps):
                new[perm[i]] += e
            out[ring.pack(tuple(new))] = c
        return MultiPoly(ring, out)

    def map_coefficients(self, fn, new_ring):
        out = {}
        f = new_ring.field
        for k, c in self.terms.items():
            v = fn(c)
            if not f.is_zero(v):
                out[k] = v
        return MultiPoly(new_ring, out)

    def render(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            cs = f.render(c)
            factors = []
            exps = self.ring.unpack(k)
            for i, e in enumerate(exps):
                if e:
                    nm = self.ring.names[i]
                    factors.append(nm if e == 1 else f"{nm}^{e}")
            if not factors:
                parts.append(cs if _renders_atomic(cs) else f"({cs})")
            else:
                mono = "*".join(factors)
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                elif _renders_atomic(cs):
                    parts.append(f"{cs}*{mono}")
                else:
                    parts.append(f"({cs})*{mono}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"<{self.render()}>"


def _renders_atomic(s):
    return not any(ch in s for ch in "+- ") or (s.startswith("-") and not any(ch in s[1:] for ch in "+- "))


class RingMatrix:
    """Dense matrix of MultiPoly entries over a common PolyRing."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows, ncols=None):
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        if rows:
            self.ncols = len(rows[0])
            if ncols is not None and ncols != self.ncols:
                raise InputError("ncols disagrees with row length")
        else:
            self.ncols = 0 if ncols is None else ncols
        for r in rows:
            if len(r) != self.ncols:
                raise InputError("ragged matrix rows")

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, [[ring.zero() for _ in range(ncols)] for _ in range(nrows)],
                   ncols=ncols)

    @classmethod
    def identity(cls, ring, n):
        m = cls.zeros(ring, n, n)
        for i in range(n):
            m.rows[i][i] = ring.one()
        return m

    @classmethod
    def from_scalar_rows(cls, ring, srows, ncols=None):
        return cls(ring, [[ring.const(c) for c in row] for row in srows],
                   ncols=ncols)

    @classmethod
    def from_int_rows(cls, ring, irows):
        return cls(ring, [[ring.from_int(n) for n in row] for row in irows])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i, j):
        return self.rows[i][j]

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise InternalError(f"matmul shape mismatch {self.shape} @ {other.shape}")
        ring = self.ring
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return RingMatrix.zeros(ring, self.nrows, other.ncols)
        out = [[ring.zero() for _ in range(other.ncols)] for _ in range(self.nrows)]
        for i in range(self.nrows):
            arow = self.rows[i]
            orow = out[i]
            for k in range(self.ncols):
                a = arow[k]
                if a.is_zero():
                    continue
                brow = other.rows[k]
                for j in range(other.ncols):
                    b = brow[j]
                    if not b.is_zero():
                        orow[j] = orow[j] + a * b
        return RingMatrix(ring, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise InternalError(f"matrix add shape mismatch {self.shape} vs {other.shape}")
        return RingMatrix(self.ring, [[a + b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.rows, other.rows)],
                          ncols=self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise InternalError(f"matrix sub shape mismatch {self.shape} vs {other.shape}")
        return RingMatrix(self.ring, [[a - b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.rows, other.rows)],
                          ncols=self.ncols)

    def __neg__(self):
        return RingMatrix(self.ring, [[-a for a in r] for r in self.rows], ncols=self.ncols)

    def scale(self, c):
        return RingMatrix(self.ring, [[a.scale(c) for a in r] for r in self.rows],
                          ncols=self.ncols)

    def transpose(self):
        return RingMatrix(self.ring, [[self.rows[i][j] for i in range(self.nrows)]
                                      for j in range(self.ncols)], ncols=self.nrows)

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)

    def eq(self, other):
        if self.shape != other.shape:
            return False
        return all(a.eq(b) for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    def map_entries(self, fn):
        rows = [[fn(a) for a in r] for r in self.rows]
        ring = rows[0][0].ring if rows and rows[0] else self.ring
        return RingMatrix(ring, rows, ncols=self.ncols)

    def is_scalar(self):
        return all(a.is_constant() for r in self.rows for a in r)

    def scalar_rows(self):
        if not self.is_scalar():
            raise InternalError("matrix has non-constant entries")
        return [[a.constant_term() for a in r] for r in self.rows]

    def render_rows(self):
        return [[a.render() for a in r] for r in self.rows]

    def __repr__(self):
        return f"RingMatrix({self.nrows}x{self.ncols})"


# ---------------------------------------------------------------------------
# scalar matrices: plain lists of lists of field values


def s_zeros(field, nrows, ncols):
    return [[field.zero for _ in range(ncols)] for _ in range(nrows)]


def s_identity(field, n):
    m = s_zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def s_add(field, a, b):
    return [[field.add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def s_sub(field, a, b):
    return [[field.sub(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def s_neg(field, a):
    return [[field.neg(x) for x in r] for r in a]


def s_scale(field, a, c):
    return [[field.mul(c, x) for x in r] for r in a]


def s_transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def s_eq(field, a, b):
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        return False
    return all(field.eq(x, y) for r1, r2 in zip(a, b) for x, y in zip(r1, r2))


def s_is_zero(field, a):
    return all(field.is_zero(x) for r in a for x in r)


def s_mul(field, a, b):
    """Matrix product of scalar matrices, with a fast path for polynomial
    values over a function field (deferred coefficient reduction)."""
    nr = len(a)
    ni = len(b)
    nc = len(b[0]) if b else 0
    if a and len(a[0]) != ni:
        raise InternalError("scalar matmul shape mismatch")
    if isinstance(field, FunctionField):
        fast = all(v[1] is None for row in a for v in row) and \
            all(v[1] is None for row in b for v in row)
        if fast:
            out = []
            acc_mul = field.pd_mul_acc
            reduce = field.pd_reduce
            for i in range(nr):
                arow = a[i]
                orow = []
                for j in range(nc):
                    acc = {}
                    for k in range(ni):
                        na = arow[k][0]
                        if na:
                            nb = b[k][j][0]
                            if nb:
                                acc_mul(acc, na, nb)
                    orow.append((reduce(acc), None))
                out.append(orow)
            return out
    out = s_zeros(field, nr, nc)
    for i in range(nr):
        arow = a[i]
        orow = out[i]
        for k in range(ni):
            x = arow[k]
            if field.is_zero(x):
                continue
            brow = b[k]
            for j in range(nc):
                y = brow[j]
                if not field.is_zero(y):
                    orow[j] = field.add(orow[j], field.mul(x, y))
    return out


def rref(field, mat):
    """Row-reduce a copy of mat; returns (reduced, pivot_columns)."""
    a = [list(r) for r in mat]
    nr = len(a)
    nc = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(nc):
        pr = None
        for i in range(r, nr):
            if not field.is_zero(a[i][c]):
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, x) for x in a[r]]
        for i in range(nr):
            if i != r and not field.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return a, pivots


def s_rank(field, mat):
    if not mat or not mat[0]:
        return 0
    _, pivots = rref(field, mat)
    return len(pivots)


def solve(field, a, b):
    """One solution x of A x = b (b a vector), or None if inconsistent."""
    nr = len(a)
    nc = len(a[0]) if a else 0
    aug = [list(r) + [b[i]] for i, r in enumerate(a)]
    red, pivots = rref(field, aug)
    if nc in pivots:
        return None
    x = [field.zero] * nc
    for r, c in enumerate(pivots):
        x[c] = red[r][nc]
    return x

def kernel(field, a):
    """Basis of the right kernel of A, in reduced echelon form (canonical)."""
    nc = len(a[0]) if a else 0
    if nc == 0:
        return []
    red, pivots = rref(field, a)
    basis = []
    pivset = set(pivots)
    for c in range(nc):
        if c in pivset:
            continue
        v = [field.zero] * nc
        v[c] = field.one
        for r, pc in enumerate(pivots):
            coeff = red[r][c]
            if not field.is_zero(coeff):
                v[pc] = field.neg(coeff)
        basis.append(v)
    return basis


def s_inverse(field, a):
    n = len(a)
    aug = [list(r) + list(ir) for r, ir in zip(a, s_identity(field, n))]
    red, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise InternalError("matrix not invertible")
    return [r[n:] for r in red]


def char_poly(a):
    """Characteristic polynomial det(xI - A) of a rational square matrix,
    by the trace-recursion method.  Returns coefficients from the leading
    power down: [1, c_1, ..., c_n] meaning x^n + c_1 x^{n-1} + ... + c_n.
    """
    n = len(a)
    a = [[Fraction(x) for x in row] for row in a]
    coeffs = [Fraction(1)]
    m = s_identity(QQ, n)
    for k in range(1, n + 1):
        am = s_mul(QQ, a, m)
        tr = sum((am[i][i] for i in range(n)), Fraction(0))
        ck = -tr / k
        coeffs.append(ck)
        m = [[am[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def poly_eval_matrix(coeffs_desc, a):
    """Evaluate a polynomial (descending coefficients) at a square matrix."""
    n = len(a)
    out = s_zeros(QQ, n, n)
    for c in coeffs_desc:
        out = s_mul(QQ, a, out)
        for i in range(n):
            out[i][i] += c
    return out


def mp_inverse(a):
    """Moore-Penrose pseudoinverse of a rational matrix, computed exactly
    through the characteristic polynomial of A A^T.

    Write det(xI - AA^T) = x^s g(x) with g(0) != 0, and
    q(x) = (1 - g(x)/g(0))/x.  Then A^+ = A^T q(B) B q(B) with B = AA^T.
    """
    if not a or not a[0]:
        return s_transpose(a)
    a = [[Fraction(x) for x in row] for row in a]
    at = s_transpose(a)
    b = s_mul(QQ, a, at)
    f = char_poly(b)  # descending, degree n
    # strip trailing zeros: f = x^s * g
    g = list(f)
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    g0 = g[-1]
    if g0 == 0:  # A was zero
        return [[Fraction(0)] * len(a) for _ in range(len(at))]
    # q(x) = (1 - g(x)/g0)/x ; numerator has zero constant term
    scaled = [-c / g0 for c in g]
    scaled[-1] += 1  # now this polynomial is 1 - g/g0, descending coeffs
    if scaled[-1] != 0:
        raise InternalError("pseudoinverse: constant term did not cancel")
    q = scaled[:-1]  # divide by x
    qb = poly_eval_matrix(q, b)
    return s_mul(QQ, at, s_mul(QQ, qb, s_mul(QQ, b, qb)))


def mp_identities_hold(a, ap):
    """Check the four Moore-Penrose identities for A and candidate A^+."""
    aap = s_mul(QQ, a, ap)
    apa = s_mul(QQ, ap, a)
    return (s_eq(QQ, s_mul(QQ, aap, a), a)
            and s_eq(QQ, s_mul(QQ, apa, ap), ap)
            and s_eq(QQ, s_transpose(aap), aap)
            and s_eq(QQ, s_transpose(apa), apa))

"""Exact coefficient fields: Q, F_p, and rational function fields F_p(Y).

Every field object implements one small protocol used by the rest of the
package:

    char          -- the characteristic (0 or a prime p)
    zero, one     -- canonical elements
    add, sub, mul, neg, div, inv
    is_zero(a), eq(a, b)
    from_int(n)   -- embed an integer
    render(a)     -- canonical string form

Values are plain Python objects (Fraction for Q, int for F_p, and a
(numerator, denominator) pair of packed-exponent dicts for F_p(Y)); all
operations return fresh values and never mutate their arguments.

Polynomials over F_p(Y) are dicts mapping a packed exponent key to an int
coefficient in [1, p).  A key packs the exponent of variable i into bits
[8*i, 8*i+8); addition of keys multiplies monomials.  The denominator slot
``None`` means 1, which is the fast path everywhere (the splitting/flow
machinery is division-free by construction).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

YBITS = 8  # bits per variable in packed exponent keys
YMASK = (1 << YBITS) - 1


def _is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field Q, with Fraction values."""

    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def div(a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def eq(a, b):
        return a == b

    @staticmethod
    def from_int(n):
        return Fraction(n)

    @staticmethod
    def render(a):
        return str(a)

    def __repr__(self):
        return "QQ"


QQ = Rationals()

_prime_fields = {}


class PrimeField:
    """The field F_p, with int values in [0, p)."""

    def __init__(self, p):
        if not _is_prime(p):
            raise InputError(f"characteristic must be 0 or a prime, got {p}")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def from_int(self, n):
        return n % self.p

    def render(self, a):
        return str(a % self.p)

    def __repr__(self):
        return f"GF({self.p})"


def GF(p):
    """Cached F_p constructor, so GF(p) is GF(p) holds."""
    f = _prime_fields.get(p)
    if f is None:
        f = _prime_fields[p] = PrimeField(p)
    return f


# ---------------------------------------------------------------------------
# packed-exponent polynomial helpers (module level so they inline well)


def pack_exponents(exps):
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > YMASK:
            raise InputError(f"exponent {e} out of packed range")
        key |= e << (YBITS * i)
    return key


def unpack_exponents(key, nvars):
    return tuple((key >> (YBITS * i)) & YMASK for i in range(nvars))


class FunctionField:
    """F_p(y_1, ..., y_k): fractions of packed-exponent polynomial dicts.

    ``names`` lists the free transcendentals.  Values are pairs
    (num, den) where num is a dict {packed_key: coeff} and den is either a
    like dict or None meaning 1.  Normalisation is best-effort (constant and
    monomial denominators are cleared, single-variable gcds are cancelled,
    denominators are made monic); equality always cross-multiplies, so the
    partial normalisation never affects correctness.
    """

    def __init__(self, p, names, label=""):
        if not _is_prime(p):
            raise InputError(f"function field needs prime characteristic, got {p}")
        self.p = p
        self.char = p
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate transcendental names")
        self.nvars = len(self.names)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.label = label
        self.zero = ({}, None)
        self.one = ({0: 1}, None)
        # Metadata: substitutions for variables that were eliminated when the
        # field was built (e.g. the first weight of an affine family, replaced
        # by 1 minus the sum of the others).  Maps name -> polynomial dict in
        # the free variables.
        self.eliminations = {}

    # -- raw polynomial layer ------------------------------------------------

    def pd_const(self, c):
        c %= self.p
        return {0: c} if c else {}

    def pd_var(self, i, exp=1):
        return {exp << (YBITS * i): 1 % self.p}

    def pd_add(self, a, b):
        if not a:
            return dict(b)
        if not b:
            return dict(a)
        out = dict(a)
        p = self.p
        for k, c in b.items():
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def pd_sub(self, a, b):
        if not b:
            return dict(a)
        out = dict(a)
        p = self.p
        for k, c in b.items():
            v = (out.get(k, 0) - c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def pd_neg(self, a):
        p = self.p
        return {k: p - c for k, c in a.items()}

    def pd_scale(self, a, c):
        c %= self.p
        if not c:
            return {}
        p = self.p
        return {k: (v * c) % p for k, v in a.items()}

    def pd_mul(self, a, b):
        if not a or not b:
            return {}
        if len(a) > len(b):
            a, b = b, a
        p = self.p
        acc = {}
        get = acc.get
        budget = 4_000_000  # cap raw accumulation; reduce when exceeded
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
            if len(acc) > budget:
                acc = {k: v % p for k, v in acc.items() if v % p}
                get = acc.get
        return {k: v % p for k, v in acc.items() if v % p}

    def pd_mul_acc(self, acc, a, b):
        """acc += a*b with deferred coefficient reduction (acc holds raw ints).

        Large products are reduced in flight so the accumulator never holds
        substantially more than the surviving terms.
        """
        if not a or not b:
            return
        if len(a) > len(b):
            a, b = b, a
        get = acc.get
        p = self.p
        budget = 4_000_000
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
            if len(acc) > budget:
                for k in [k for k, v in acc.items() if not v % p]:
                    del acc[k]
                for k in acc:
                    acc[k] %= p
                get = acc.get

    def pd_reduce(self, acc):
        p = self.p
        return {k: v % p for k, v in acc.items() if v % p}

    def pd_is_zero(self, a):
        return not a

    def pd_eq(self, a, b):
        return a == b

    def pd_vars_used(self, a):
        used = set()
        for k in a:
            i = 0
            while k:
                if k & YMASK:
                    used.add(i)
                k >>= YBITS
                i += 1
        return used

    def pd_render(self, a):
        if not a:
            return "0"
        parts = []
        for k in sorted(a, reverse=True):
            c = a[k]
            factors = []
            if c != 1 or k == 0:
                factors.append(str(c))
            i = 0
            kk = k
            while kk:
                e = kk & YMASK
                if e:
                    nm = self.names[i]
                    factors.append(nm if e == 1 else f"{nm}^{e}")
                kk >>= YBITS
                i += 1
            parts.append("*".join(factors))
        return " + ".join(parts)

    def pd_parse(self, s):
        """Inverse of :meth:`pd_render` for plain polynomial strings."""
        s = s.strip()
        if s == "0":
            return {}
        out = {}
        for term in s.split(" + "):
            coeff = 1
            key = 0
            for factor in term.strip().split("*"):
                factor = factor.strip()
                if not factor:
                    raise InputError(f"malformed polynomial term {term!r}")
                if factor[0].isdigit() or factor[0] == "-":
                    coeff = (coeff * int(factor)) % self.p
                    continue
                if "^" in factor:
                    nm, _, e = factor.rpartition("^")
                    exp = int(e)
                else:
                    nm, exp = factor, 1
                i = self.index.get(nm)
                if i is None:
                    raise InputError(f"unknown transcendental {nm!r}")
                key += exp << (YBITS * i)
            v = (out.get(key, 0) + coeff) % self.p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return out

    # -- univariate helpers for gcd cancellation ------------------------------

    def _pd_to_univ(self, a, i):
        shift = YBITS * i
        coeffs = {}
        for k, c in a.items():
            coeffs[k >> shift] = c
        deg = max(coeffs)
        return [coeffs.get(j, 0) for j in range(deg + 1)]

    def _univ_to_pd(self, coeffs, i):
        shift = YBITS * i
        return {j << shift: c for j, c in enumerate(coeffs) if c}

    def _univ_divmod(self, a, b):
        p = self.p
        a = list(a)
        db, lb = len(b) - 1, b[-1]
        inv_lb = pow(lb, p - 2, p)
        q = [0] * (len(a) - db) if len(a) > db else [0]
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i] % p
            if c:
                f = (c * inv_lb) % p
                q[i - db] = f
                for j in range(db + 1):
                    a[i - db + j] = (a[i - db + j] - f * b[j]) % p
        while len(a) > 1 and a[-1] % p == 0:
            a.pop()
        return q, [c % p for c in a]

    def _univ_gcd(self, a, b):
        a = [c % self.p for c in a]
        b = [c % self.p for c in b]
        while any(b):
            _, r = self._univ_divmod(a, b)
            a, b = b, r
            while len(b) > 1 and b[-1] == 0:
                b.pop()
            if b == [0]:
                break
        return a

    # -- fraction layer -------------------------------------------------------

    @staticmethod
    def _key_min(ka, kb):
        """Packed per-variable minimum of two monomial keys."""
        m = 0
        shift = 0
        while ka and kb:
            m |= min(ka & YMASK, kb & YMASK) << shift
            ka >>= YBITS
            kb >>= YBITS
            shift += YBITS
        return m

    def _content_key(self, a):
        """Largest monomial key dividing every term of ``a``."""
        out = None
        for k in a:
            out = k if out is None else self._key_min(out, k)
            if not out:
                break
        return out or 0

    def _pd_divexact(self, num, den):
        """The quotient ``num/den`` when the division is exact, else None.

        Leading terms are taken with respect to packed-key order, which is a
        monomial order, so an exact quotient is found by repeated leading-term
        elimination and any inexactness shows up as a failed divisibility
        check along the way.
        """
        p = self.p
        lk = max(den)
        inv_lc = pow(den[lk], p - 2, p)
        rem = dict(num)
        quot = {}
        dpairs = den.items()
        while rem:
            rk = max(rem)
            if not self._key_divides(lk, rk):
                return None
            qk = rk - lk
            qc = (rem[rk] * inv_lc) % p
            quot[qk] = qc
            for kb, cb in dpairs:
                k = qk + kb
                v = (rem.get(k, 0) - qc * cb) % p
                if v:
                    rem[k] = v
                elif k in rem:
                    del rem[k]
        return quot

    def _normalize(self, num, den):
        if not num:
            return ({}, None)
        if den is None:
            return (num, None)
        if not den:
            raise ZeroDivisionError("zero denominator in function field")
        if len(den) == 1:
            (k, c) = next(iter(den.items()))
            if k == 0:
                return (self.pd_scale(num, self.inv_int(c)), None)
            # monomial denominator: cancel if the numerator is divisible
            if all(self._key_divides(k, kn) for kn in num):
                ci = self.inv_int(c)
                return ({kn - k: (cn * ci) % self.p for kn, cn in num.items()}, None)
        shared = self._key_min(self._content_key(num), self._content_key(den))
        if shared:
            num = {k - shared: c for k, c in num.items()}
            den = {k - shared: c for k, c in den.items()}
            if len(den) == 1:
                return self._normalize(num, den)
        used = self.pd_vars_used(num) | self.pd_vars_used(den)
        if len(used) == 1:
            i = next(iter(used))
            ua, ub = self._pd_to_univ(num, i), self._pd_to_univ(den, i)
            g = self._univ_gcd(ua, ub)
            if len(g) > 1:
                qa, ra = self._univ_divmod(ua, g)
                qb, rb = self._univ_divmod(ub, g)
                if not any(ra) and not any(rb):
                    num = self._univ_to_pd(qa, i)
                    den = self._univ_to_pd(qb, i)
                    return self._normalize(num, den)
        q = self._pd_divexact(num, den)
        if q is not None:
            return (q, None)
        if len(num) > 1:
            q = self._pd_divexact(den, num)
            if q is not None:
                num, den = {0: 1}, q
                if len(den) == 1:
                    return self._normalize(num, den)
        # monic denominator for a more canonical form
        lead = den[max(den)]
        if lead != 1:
            ci = self.inv_int(lead)
            num = self.pd_scale(num, ci)
            den = self.pd_scale(den, ci)
        return (num, den)

    @staticmethod
    def _key_divides(ka, kb):
        """Does the monomial with key ka divide the one with key kb?"""
        while ka or kb:
            if (ka & YMASK) > (kb & YMASK):
                return False
            ka >>= YBITS
            kb >>= YBITS
        return True

    def inv_int(self, c):
        return pow(c % self.p, self.p - 2, self.p)

    def from_int(self, n):
        return (self.pd_const(n), None)

    def var(self, name_or_index):
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return (self.pd_var(i), None)

    def add(self, a, b):
        na, da = a
        nb, db = b
        if da is None and db is None:
            return (self.pd_add(na, nb), None)
        da1 = da if da is not None else {0: 1}
        db1 = db if db is not None else {0: 1}
        num = self.pd_add(self.pd_mul(na, db1), self.pd_mul(nb, da1))
        return self._normalize(num, self.pd_mul(da1, db1))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return (self.pd_neg(a[0]), a[1])

    def mul(self, a, b):
        na, da = a
        nb, db = b
        if da is None and db is None:
            return (self.pd_mul(na, nb), None)
        da1 = da if da is not None else {0: 1}
        db1 = db if db is not None else {0: 1}
        return self._normalize(self.pd_mul(na, nb), self.pd_mul(da1, db1))

    def inv(self, a):
        na, da = a
        if not na:
            raise ZeroDivisionError("inverse of zero in function field")
        return self._normalize(da if da is not None else {0: 1}, na)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a[0]

    def eq(self, a, b):
        na, da = a
        nb, db = b
        if da is None and db is None:
            return na == nb
        da1 = da if da is not None else {0: 1}
        db1 = db if db is not None else {0: 1}
        return self.pd_mul(na, db1) == self.pd_mul(nb, da1)

    def render(self, a):
        na, da = a
        if da is None:
            return self.pd_render(na)
        return f"({self.pd_render(na)})/({self.pd_render(da)})"

    def clear_vector_denominators(self, vec):
        """Scale a vector by a common multiple of its denominators.

        Scaling by a nonzero field element keeps a kernel vector a kernel
        vector, and polynomial entries keep later matrix arithmetic free of
        denominator growth.
        """
        dens = []
        for num, den in vec:
            if den is not None and den not in dens:
                dens.append(den)
        if not dens:
            return list(vec)
        mult = {0: 1}
        for d in dens:
            mult = self.pd_mul(mult, d)
        boxed = (mult, None)
        return [self.mul(v, boxed) for v in vec]

    # -- variable substitution ------------------------------------------------

    def pd_substitute(self, a, subst):
        """Substitute polynomial dicts for variables (index -> dict)."""
        out = {}
        for k, c in a.items():
            term = self.pd_const(c)
            i = 0
            kk = k
            while kk:
                e = kk & YMASK
                if e:
                    rep = subst.get(i)
                    base = rep if rep is not None else self.pd_var(i)
                    for _ in range(e):
                        term = self.pd_mul(term, base)
                kk >>= YBITS
                i += 1
            out = self.pd_add(out, term)
        return out

    def substitute(self, value, subst):
        """Apply a variable substitution (index -> polynomial dict)."""
        num, den = value
        nnum = self.pd_substitute(num, subst)
        if den is None:
            return (nnum, None)
        return self._normalize(nnum, self.pd_substitute(den, subst))

    def __repr__(self):
        tail = f", {self.label}" if self.label else ""
        return f"GF({self.p})({', '.join(self.names)}{tail})"


def field_descriptor(field):
    """JSON-serialisable description of a coefficient field."""
    if isinstance(field, Rationals):
        return "Q"
    if isinstance(field, PrimeField):
        return {"p": field.p}
    if isinstance(field, FunctionField):
        desc = {"p": field.p, "transcendentals": list(field.names)}
        if field.label:
            desc["note"] = field.label
        if field.eliminations:
            desc["eliminations"] = {
                nm: field.pd_render(pd) for nm, pd in sorted(field.eliminations.items())
            }
        return desc
    raise InputError(f"unknown field object {field!r}")


def field_from_descriptor(desc):
    if desc in ("Q", "QQ", "rationals", 0):
        return QQ
    if isinstance(desc, dict) and "p" in desc:
        if "transcendentals" in desc:
            f = FunctionField(desc["p"], desc["transcendentals"], desc.get("note", ""))
            for nm, expr in desc.get("eliminations", {}).items():
                f.eliminations[nm] = f.pd_parse(expr)
            return f
        return GF(desc["p"])
    if isinstance(desc, int):
        return GF(desc)
    raise InputError(f"unrecognised field descriptor {desc!r}")

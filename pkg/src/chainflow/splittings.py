"""Per-stratum splittings: matroidal enumeration, averages and extensions.

A *matroidal splitting* of a scalar complex picks, in each degree, a subset
``X_n`` of the basis whose differential columns form a basis of the image of
``d_n``, together with a set ``Z_n`` of corrected cycles (one for each basis
element outside ``X_n`` that is kept) whose classes are independent in
homology.  Each such choice determines a splitting homotopy; the full list is
finite and is enumerated in lexicographic order.

Averaging all matroidal splittings gives a canonical (basis-permutation
equivariant) homotopy.  The average needs the number ``m`` of splittings to be
invertible; primes dividing some stratum count are *critical*.  At a critical
prime the average is replaced by a generic affine combination with fresh
transcendental weights ``y[a][0..m-1]``, where ``y[a][0]`` is eliminated as
``1 - sum of the others``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from .errors import InputError, VerificationError
from .scalars import QQ, GF, FunctionField, Rationals, _is_prime
from .linalg import RingMatrix, kernel, s_inverse, s_mul, s_rank, solve
from .complexes import BasedComplex
from .flows import (
    ClassifyResult,
    Homotopy,
    affine_combination,
    classify,
    dmat,
    hat,
    moore_penrose,
)

__all__ = [
    "MatroidalChoice",
    "ExtensionPlan",
    "StratumSplitting",
    "enumerate_matroidal",
    "matroidal_count",
    "critical_analysis",
    "weight_name",
    "build_extension_field",
    "build_stratum_splitting",
    "coerce_complex",
    "coerce_homotopy",
    "stratum_core",
]


@dataclass(frozen=True)
class MatroidalChoice:
    """Per-degree index data of one matroidal splitting.

    ``x_sets[n]`` lists the basis positions whose columns span the image of
    ``d_n``; ``z_sets[n]`` lists the positions of the kept corrected cycles.
    """

    x_sets: tuple
    z_sets: tuple


@dataclass
class ExtensionPlan:
    """How stratum averages are realized over a given characteristic."""

    characteristic: int
    counts: dict                 # stratum key -> number of matroidal splittings
    critical: list               # stratum keys whose count the prime divides
    names: list                  # transcendental variable names, in order
    transcendence_degree: int
    weights: dict                # stratum key -> list of field elements
    field: object


@dataclass
class StratumSplitting:
    """Output of :func:`build_stratum_splitting`."""

    homotopy: Homotopy
    complex: BasedComplex        # over the working field
    field: object
    classification: ClassifyResult
    mode: str
    count: Optional[int] = None
    weights: Optional[list] = None
    choices: Optional[list] = None


def _scalar_diff(c: BasedComplex, n: int):
    m = dmat(c, n)
    return m.scalar_rows(), m.nrows, m.ncols


def _degree_options(c: BasedComplex, n: int):
    """All valid (X_n, Z_n) pairs in lexicographic order, with cycle data.

    Returns (options, rank_dn) where each option is (x_set, z_set, cycles),
    ``cycles`` mapping a kept position b to its corrected cycle vector
    ``e_b - sum r_c e_c`` (coefficients over the base field).
    """
    field = c.ring.field
    dn, _, r_n = _scalar_diff(c, n)
    dn1, _, _ = _scalar_diff(c, n + 1)
    rk_n = s_rank(field, dn)
    rk_n1 = s_rank(field, dn1)
    h = r_n - rk_n - rk_n1
    if h < 0:
        raise InputError("not a complex: negative homology dimension")
    options = []
    for x_set in combinations(range(r_n), rk_n):
        if rk_n:
            sub = [[dn[i][j] for j in x_set] for i in range(len(dn))]
            if s_rank(field, sub) < rk_n:
                continue
        else:
            sub = [[] for _ in range(len(dn))]
        rest = [b for b in range(r_n) if b not in x_set]
        cycles = {}
        ok = True
        for b in rest:
            if rk_n:
                rhs = [dn[i][b] for i in range(len(dn))]
                sol = solve(field, sub, rhs)
                if sol is None:
                    ok = False
                    break
                coeffs = sol
            else:
                coeffs = []
            z = [field.zero] * r_n
            z[b] = field.one
            for cpos, cc in zip(x_set, coeffs):
                z[cpos] = field.sub(z[cpos], cc)
            cycles[b] = z
        if not ok:
            continue
        for z_set in combinations(rest, h):
            if h:
                # Independence in homology: the chosen cycles together with a
                # spanning set of boundaries must have full rank h + rk_{n+1}.
                joint = [
                    [cycles[b][i] for b in z_set] + list(dn1[i]) if dn1 else
                    [cycles[b][i] for b in z_set]
                    for i in range(r_n)
                ]
                if s_rank(field, joint) != h + rk_n1:
                    continue
            options.append((x_set, z_set, cycles))
    return options, rk_n


def _build_homotopy(c: BasedComplex, per_degree) -> Homotopy:
    """The splitting homotopy of one per-degree (X, Z, cycles) selection.

    In each degree ``F_n`` has the basis ``d(X_{n+1})-columns, Z_n-cycles,
    X_n-indicators``; ``D_n`` sends the boundary part to the corresponding
    ``X_{n+1}`` indicators and kills the rest.
    """
    field = c.ring.field
    mats = []
    for n in range(0, c.top):
        r_n = c.rank(n)
        r_n1 = c.rank(n + 1)
        x_n, z_n, cycles_n = per_degree[n]
        x_up, _, _ = per_degree[n + 1]
        dn1, _, _ = _scalar_diff(c, n + 1)
        rk1 = len(x_up)
        cols = []
        for x in x_up:
            cols.append([dn1[i][x] for i in range(r_n)])
        for b in z_n:
            cols.append(list(cycles_n[b]))
        for x in x_n:
            ind = [field.zero] * r_n
            ind[x] = field.one
            cols.append(ind)
        if len(cols) != r_n:
            raise VerificationError("matroidal basis blocks do not fill the degree")
        if r_n:
            T = [[cols[j][i] for j in range(r_n)] for i in range(r_n)]
            Tinv = s_inverse(field, T)
            lift = Tinv[:rk1]
        else:
            lift = []
        Dn = [[field.zero] * r_n for _ in range(r_n1)]
        for t, x in enumerate(x_up):
            for j in range(r_n):
                Dn[x][j] = lift[t][j]
        mats.append(RingMatrix.from_scalar_rows(c.ring, Dn, ncols=r_n))
    return Homotopy(c, mats)


def enumerate_matroidal(c: BasedComplex) -> list:
    """All matroidal splittings of a scalar complex, lexicographically.

    Returns a list of (MatroidalChoice, Homotopy) pairs ordered by the
    per-degree (X, Z) index tuples, degree 0 outermost.
    """
    if not c.is_scalar():
        raise InputError("matroidal enumeration needs a scalar complex")
    per_degree_options = []
    for n in range(0, c.top + 1):
        options, _ = _degree_options(c, n)
        if not options:
            raise VerificationError(
                f"no matroidal choice exists in degree {n}")
        per_degree_options.append(options)
    out = []
    for combo in product(*per_degree_options):
        choice = MatroidalChoice(
            x_sets=tuple(opt[0] for opt in combo),
            z_sets=tuple(opt[1] for opt in combo),
        )
        out.append((choice, _build_homotopy(c, list(combo))))
    return out


def matroidal_count(c: BasedComplex) -> int:
    """Number of matroidal splittings (product of per-degree option counts)."""
    if not c.is_scalar():
        raise InputError("matroidal enumeration needs a scalar complex")
    total = 1
    for n in range(0, c.top + 1):
        options, _ = _degree_options(c, n)
        if not options:
            return 0
        total *= len(options)
    return total


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def critical_analysis(counts: dict, characteristic: Optional[int] = None) -> dict:
    """Critical primes of a family of stratum counts.

    A prime is critical when it divides some stratum's number of matroidal
    splittings (so the plain average cannot be formed over that prime field).
    The per-prime transcendence degree is the total number of fresh weights a
    generic affine combination needs: ``sum (m(a) - 1)`` over critical strata.
    """
    primes = set()
    for m in counts.values():
        if m <= 0:
            raise InputError("stratum with no matroidal splittings")
        primes.update(_prime_factors(m))
    report = {
        "counts": dict(counts),
        "critical_primes": sorted(primes),
        "per_prime": {},
    }
    for p in sorted(primes):
        crit = [a for a, m in counts.items() if m % p == 0]
        report["per_prime"][p] = {
            "critical_strata": crit,
            "transcendence_degree": sum(counts[a] - 1 for a in crit),
        }
    if characteristic is not None and characteristic != 0:
        p = characteristic
        crit = [a for a, m in counts.items() if m % p == 0]
        report["characteristic"] = p
        report["critical_strata"] = crit
        report["transcendence_degree"] = sum(counts[a] - 1 for a in crit)
    elif characteristic == 0:
        report["characteristic"] = 0
        report["critical_strata"] = []
        report["transcendence_degree"] = 0
    return report


def weight_name(stratum_key, j: int) -> str:
    return f"y[{stratum_key}][{j}]"


def build_extension_field(counts: dict, p: int, order: Optional[list] = None):
    """The working field and weight assignment for characteristic ``p``.

    Critical strata (``p`` divides the count ``m``) get ``m - 1`` fresh
    transcendentals ``y[a][1..m-1]``; the first weight ``y[a][0]`` is
    eliminated as ``1 - sum`` of the others, which keeps the weights affine
    and the field purely transcendental of the stated degree.  Non-critical
    strata keep the constant weight ``1/m``.  With no critical stratum the
    field is simply the prime field.
    """
    if not _is_prime(p):
        raise InputError(f"characteristic must be prime, got {p}")
    keys = list(order) if order is not None else sorted(counts)
    for k in counts:
        if k not in keys:
            raise InputError(f"stratum {k!r} missing from the given order")
    critical = [a for a in keys if counts[a] % p == 0]
    if not critical:
        field = GF(p)
        weights = {}
        for a in keys:
            m = counts[a]
            inv = field.inv(field.from_int(m))
            weights[a] = [inv] * m
        return field, ExtensionPlan(p, dict(counts), [], [], 0, weights, field)
    names = []
    for a in critical:
        names.extend(weight_name(a, j) for j in range(1, counts[a]))
    field = FunctionField(p, names, label="generic affine weights")
    weights = {}
    pos = 0
    for a in keys:
        m = counts[a]
        if a in critical:
            ws = []
            first_num = field.pd_const(1)
            for j in range(1, m):
                var = field.pd_var(pos + (j - 1))
                first_num = field.pd_sub(first_num, var)
                ws.append((var, None))
            ws.insert(0, (first_num, None))
            field.eliminations[weight_name(a, 0)] = first_num
            weights[a] = ws
            pos += m - 1
        else:
            inv = field.inv(field.from_int(m))
            weights[a] = [inv] * m
    plan = ExtensionPlan(p, dict(counts), list(critical), names,
                         len(names), weights, field)
    return field, plan


def _coerce_scalar(value, src_field, dst_field):
    """Move a scalar between fields of the same characteristic."""
    if src_field is dst_field:
        return value
    if isinstance(src_field, Rationals):
        raise InputError("cannot coerce rational scalars into positive characteristic")
    if isinstance(dst_field, FunctionField):
        return (dst_field.pd_const(value), None)
    return dst_field.from_int(value)


def coerce_complex(c: BasedComplex, dst_field) -> BasedComplex:
    """Base-change a complex along a prime-field-to-extension embedding."""
    from .complexes import scalar_ring
    from .linalg import PolyRing

    src_field = c.ring.field
    if src_field is dst_field:
        return c
    new_ring = PolyRing(dst_field, c.ring.names)
    return c.map_coefficients(new_ring, lambda v: _coerce_scalar(v, src_field, dst_field))


def coerce_homotopy(D: Homotopy, new_complex: BasedComplex) -> Homotopy:
    src_field = D.complex.ring.field
    dst_field = new_complex.ring.field
    if src_field is dst_field:
        return D
    return D.map_coefficients(
        lambda v: _coerce_scalar(v, src_field, dst_field), new_complex)


def stratum_core(c: BasedComplex, D: Homotopy) -> list:
    """Per-degree basis of the core ``C_n = Ker(D d) ∩ Ker(d D)``.

    For a splitting homotopy the core equals ``Ker(d) ∩ Ker(d D)``, which is
    cheaper: the kernel of the (constant) differential is computed first and
    only the composite ``d D`` touches non-constant weight polynomials.
    """
    field = c.ring.field
    out = []
    for n in range(0, c.top + 1):
        r = c.rank(n)
        if r == 0:
            out.append([])
            continue
        dn, _, _ = _scalar_diff(c, n)
        dn1up, _, _ = _scalar_diff(c, n + 1)
        Dn = D.D(n).scalar_rows()
        if dn and any(not field.is_zero(x) for row in dn for x in row):
            ker = kernel(field, dn)
        else:
            ker = [[field.one if i == j else field.zero for i in range(r)]
                   for j in range(r)]
        if not ker:
            out.append([])
            continue
        # Restrict d D to Ker d and take its kernel there.
        B = s_mul(field, dn1up, Dn) if dn1up and Dn else []
        if not B:
            combos = [[field.one if i == j else field.zero
                       for i in range(len(ker))] for j in range(len(ker))]
        else:
            kmat = [[ker[j][i] for j in range(len(ker))] for i in range(r)]
            bk = s_mul(field, B, kmat)
            combos = kernel(field, bk)
            if not combos:
                out.append([])
                continue
        vecs = []
        for comb in combos:
            v = [field.zero] * r
            for t, coef in enumerate(comb):
                if not field.is_zero(coef):
                    for i in range(r):
                        v[i] = field.add(v[i], field.mul(coef, ker[t][i]))
            vecs.append(v)
        clear = getattr(field, "clear_vector_denominators", None)
        if clear is not None:
            vecs = [clear(v) for v in vecs]
        out.append(vecs)
    return out


def build_stratum_splitting(
    c: BasedComplex,
    characteristic: int,
    mode: str,
    stratum_key="a",
    want_decomposition: bool = False,
) -> StratumSplitting:
    """Construct the canonical splitting of one scalar stratum complex.

    ``moore_penrose`` (characteristic 0 only) uses the degreewise
    pseudoinverse, which is already a splitting.  ``matroidal_average``
    averages all matroidal splittings — over the given prime field when the
    count is invertible, else over a fresh transcendental extension with
    generic affine weights — and applies the hat correction; the returned
    classification certifies the result exactly.
    """
    if mode == "moore_penrose":
        if characteristic != 0:
            raise InputError("Moore-Penrose requires characteristic zero")
        D = moore_penrose(c)
        cls = classify(c, D, want_decomposition=want_decomposition)
        if not cls.is_splitting:
            raise VerificationError("pseudoinverse homotopy failed to split")
        return StratumSplitting(D, c, QQ, cls, mode)
    if mode != "matroidal_average":
        raise InputError(f"unknown splitting mode {mode!r}")
    enum = enumerate_matroidal(c)
    m = len(enum)
    choices = [ch for ch, _ in enum]
    if characteristic == 0:
        weights = [Fraction(1, m)] * m
        work = c
        homotopies = [D for _, D in enum]
        field = c.ring.field
    else:
        p = characteristic
        if m % p != 0:
            field = c.ring.field
            weights = [field.inv(field.from_int(m))] * m
            work = c
            homotopies = [D for _, D in enum]
        else:
            field, plan = build_extension_field(
                {stratum_key: m}, p, order=[stratum_key])
            weights = plan.weights[stratum_key]
            work = coerce_complex(c, field)
            homotopies = [coerce_homotopy(D, work) for _, D in enum]
    avg = affine_combination(work, list(zip(weights, homotopies)))
    D = hat(work, avg, verify=False)
    cls = classify(work, D, want_decomposition=want_decomposition)
    if not cls.is_splitting:
        raise VerificationError("hat postcondition failed")
    return StratumSplitting(D, work, field, cls, mode, m, weights, choices)

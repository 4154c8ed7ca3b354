"""Seeded random generators for scalar complexes and their stratifications.

The construction guarantees ``d^2 = 0`` and poset-compatibility by design:

1. choose a matching on the graded basis (each basis vector is the source
   or target of at most one differential arrow, and arrows only ever point
   from a vector to one of weakly lower stratum);
2. start from the corresponding elementary differential (one ``1`` per
   matched pair) so squares vanish trivially;
3. scramble with random elementary row/column operations whose change of
   basis is itself poset-triangular, which preserves both ``d^2 = 0`` and
   the stratification property.

Unmatched basis vectors span the homology, so the expected homology ranks
(and the Euler characteristic) are known exactly by construction.
"""

import random
from fractions import Fraction

from chainflow.complexes import BasedComplex, Poset, StratifiedComplex, scalar_ring
from chainflow.linalg import RingMatrix
from chainflow.scalars import QQ


def random_poset(rng: random.Random, max_elems: int = 4) -> Poset:
    n = rng.randint(1, max_elems)
    below = []
    for i in range(n):
        direct = {j for j in range(i) if rng.random() < 0.5}
        closed = set(direct)
        for j in direct:
            closed |= below[j]
        below.append(frozenset(closed))
    return Poset(list(range(n)), below)


def random_stratified_complex(rng: random.Random, max_rank: int = 5,
                              max_top: int = 3, max_strata: int = 4):
    """A random stratified scalar complex over Q with known homology ranks.

    Returns ``(stratified, homology_ranks)``.
    """
    poset = random_poset(rng, max_strata)
    nstrata = len(poset)
    top = rng.randint(1, max_top)
    ranks = [rng.randint(1, max_rank) for _ in range(top + 1)]
    strata = [[rng.randrange(nstrata) for _ in range(r)] for r in ranks]

    # Greedy matching: arrows F_n -> F_{n-1} between so-far-unmatched
    # vectors, target stratum weakly below source stratum.
    matched_src = [set() for _ in range(top + 1)]
    matched_tgt = [set() for _ in range(top + 1)]
    arrows = [[] for _ in range(top + 1)]  # arrows[n]: (i at n-1, j at n)
    for n in range(top, 0, -1):
        js = [j for j in range(ranks[n])
              if j not in matched_src[n] and j not in matched_tgt[n]]
        rng.shuffle(js)
        for j in js:
            cands = [i for i in range(ranks[n - 1])
                     if i not in matched_tgt[n - 1] and i not in matched_src[n - 1]
                     and poset.leq(strata[n - 1][i], strata[n][j])]
            if not cands or rng.random() < 0.3:
                continue
            i = rng.choice(cands)
            arrows[n].append((i, j))
            matched_tgt[n - 1].add(i)
            matched_src[n].add(j)

    ring = scalar_ring(QQ)
    diffs = []
    for n in range(1, top + 1):
        rows = [[ring.zero() for _ in range(ranks[n])] for _ in range(ranks[n - 1])]
        for i, j in arrows[n]:
            rows[i][j] = ring.const(Fraction(rng.choice([1, -1, 2, -2, 3])))
        diffs.append(RingMatrix(ring, rows, ncols=ranks[n]))

    # Random poset-triangular changes of basis, applied consistently on
    # both sides of each differential.
    for n in range(top + 1):
        r = ranks[n]
        for _ in range(2 * r):
            i, j = rng.randrange(r), rng.randrange(r)
            if i == j or not poset.leq(strata[n][i], strata[n][j]):
                continue
            lam = Fraction(rng.choice([1, -1, 2, -2]))
            # basis change e_j -> e_j + lam e_i: columns of d_n update by
            # col_j += lam col_i; rows of d_{n+1} update by row_i -= lam row_j.
            if n >= 1:
                m = diffs[n - 1]
                for t in range(m.nrows):
                    m.rows[t][j] = m.rows[t][j] + m.rows[t][i].scale(lam)
            if n < top:
                m = diffs[n]
                for t in range(m.ncols):
                    m.rows[i][t] = m.rows[i][t] - m.rows[j][t].scale(lam)

    labels = [[f"b{n}_{j}" for j in range(ranks[n])] for n in range(top + 1)]
    mdegs = [[None] * r for r in ranks]
    cx = BasedComplex(ring, labels, mdegs, diffs)
    strat = StratifiedComplex(cx, poset, strata)
    hom = [ranks[n] - len(matched_tgt[n]) - len(matched_src[n])
           for n in range(top + 1)]
    return strat, hom


def random_rational_complex(rng: random.Random, max_rank: int = 5,
                            max_top: int = 3) -> BasedComplex:
    """A random scalar complex over Q with arbitrary invertible scrambling."""
    strat, _ = random_stratified_complex(rng, max_rank, max_top, max_strata=1)
    c = strat.complex
    # One stratum means the triangularity constraint was vacuous, so the
    # scramble above was already fully general; return the bare complex.
    return c

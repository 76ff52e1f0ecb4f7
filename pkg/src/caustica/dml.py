"""Orbits of plane projective automorphisms meeting three lines.

A projective automorphism beta of P^2 over Q acts on lines by
L -> L . beta (row vector times matrix).  Given lines L1, L2, L3, a
triple (P, m, n) with P in L1, beta^m(P) in L2, beta^n(P) in L3
exists exactly when

    det [ L1 ; L2 . beta^m ; L3 . beta^n ] = 0,

and is then unique when the shifted lines are pairwise distinct.  All
computations here are exact over the rationals: matrix powers strip
common factors (projectively harmless) so entry bit-size stays linear
in the exponent, hits are certified by zero residual, and the closure
group of the cyclic group generated by beta is classified from the
Jordan structure and the multiplicative relations of the eigenvalue
ratios (prime exponent vectors for rational ratios, norm and trace
arguments for quadratic ones).  Infinite families among the hits are
detected by exact pattern fits: lines in Z^2 and exponential families
m = A lambda^n + B n + C with lambda taken from the spectrum.
"""

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if x == int(x):
            return Fraction(int(x))
        raise TypeError(f"float {x!r} is not exact; write \"p/q\" or [p, q]")
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"not an exact rational: {x!r}")


def _canon(v):
    """Scale a rational triple to coprime integers, first nonzero > 0."""
    v = tuple(_frac(x) for x in v)
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no projective class")
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3))
                       for j in range(3)) for i in range(3))


def _vec_mat(v, A):
    return tuple(sum(v[k] * A[k][j] for k in range(3)) for j in range(3))


def _mat_vec(A, v):
    return tuple(sum(A[i][k] * v[k] for k in range(3)) for i in range(3))


def _det3(A):
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def _adjugate(A):
    """Exact inverse up to scale (det-free)."""
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        return A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]
    return tuple(tuple((-1) ** (i + j) * cof(j, i) for j in range(3))
                 for i in range(3))


def _strip_mat(A):
    """Rescale a matrix by one global factor to coprime integers.

    A single scalar keeps the projective map; per-row scaling would
    change it.
    """
    lcm = 1
    for r in A:
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [[int(x * lcm) for x in r] for r in A]
    g = 0
    for r in ints:
        for x in r:
            g = math.gcd(g, abs(x))
    if g > 1:
        ints = [[x // g for x in r] for r in ints]
    return tuple(tuple(Fraction(x) for x in r) for r in ints)


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


@dataclass(frozen=True)
class ProjectiveMap:
    """3x3 invertible matrix of exact rationals, up to scale."""

    matrix: tuple

    def __init__(self, rows):
        m = tuple(tuple(_frac(x) for x in r) for r in rows)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("need a 3x3 matrix")
        if _det3(m) == 0:
            raise ValueError("projective map must be invertible")
        object.__setattr__(self, "matrix", m)

    def power(self, k):
        """beta^k up to scale, by repeated multiplication with gcd
        stripping (entry bit-size linear in |k|)."""
        base = self.matrix if k >= 0 else _adjugate(self.matrix)
        out = tuple(tuple(Fraction(int(i == j)) for j in range(3))
                    for i in range(3))
        for _ in range(abs(k)):
            out = _strip_mat(_mat_mul(out, base))
        return out

    def true_power(self, k):
        """beta^k with exact entries (no projective rescaling); k >= 0."""
        if k < 0:
            raise ValueError("true_power needs k >= 0")
        out = tuple(tuple(Fraction(int(i == j)) for j in range(3))
                    for i in range(3))
        for _ in range(k):
            out = _mat_mul(out, self.matrix)
        return out


@dataclass(frozen=True)
class ProjectiveLine:
    """Coefficient triple of an exact rational linear form, up to scale."""

    coeffs: tuple

    def __init__(self, coeffs):
        c = tuple(_frac(x) for x in coeffs)
        if len(c) != 3 or all(x == 0 for x in c):
            raise ValueError("line needs a nonzero coefficient triple")
        object.__setattr__(self, "coeffs", c)

    def canonical(self):
        return _canon(self.coeffs)


class GroupKind(enum.Enum):
    FINITE = "Finite"
    GA = "Ga"
    GM = "Gm"
    GAGM = "GaGm"
    GM2 = "Gm2"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class GroupClass:
    kind: GroupKind
    witness: dict


class OrbitHit(NamedTuple):
    m: int
    n: int
    P: tuple


class LineFamily(NamedTuple):
    g: int
    h: int
    c: int


class ExponentialFamily(NamedTuple):
    A: Fraction
    lam: Fraction
    B: Fraction
    C: Fraction


class FiniteSet(NamedTuple):
    size: int


@dataclass(frozen=True)
class FamilyReport:
    pattern: object
    hits: tuple


# ---------------------------------------------------------------------------
# spectrum


def _char_poly(A):
    """Monic characteristic coefficients (c2, c1, c0) of
    t^3 + c2 t^2 + c1 t + c0."""
    tr = A[0][0] + A[1][1] + A[2][2]
    m2 = (A[1][1] * A[2][2] - A[1][2] * A[2][1]
          + A[0][0] * A[2][2] - A[0][2] * A[2][0]
          + A[0][0] * A[1][1] - A[0][1] * A[1][0])
    return -tr, m2, -_det3(A)


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _rational_roots(c2, c1, c0):
    """Rational roots (with multiplicity) of t^3 + c2 t^2 + c1 t + c0,
    plus the residual quadratic (p, q) for t^2 + p t + q, or None."""
    lcm = 1
    for c in (c2, c1, c0):
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    a3, a2, a1, a0 = lcm, int(c2 * lcm), int(c1 * lcm), int(c0 * lcm)
    roots = []
    if a0 == 0:
        roots.append(Fraction(0))
    else:
        for p in _divisors(a0):
            for q in _divisors(a3):
                for sgn in (1, -1):
                    r = Fraction(sgn * p, q)
                    if a3 * r ** 3 + a2 * r ** 2 + a1 * r + a0 == 0:
                        roots.append(r)
                        break
                else:
                    continue
                break
    if not roots:
        return [], None
    r = roots[0]
    # Deflate: t^3 + c2 t^2 + c1 t + c0 = (t - r)(t^2 + p t + q)
    p = c2 + r
    q = c1 + r * p
    disc = p * p - 4 * q
    num, den = disc.numerator, disc.denominator
    root_num = math.isqrt(abs(num)) if num >= 0 else -1
    root_den = math.isqrt(den)
    if num >= 0 and root_num * root_num == num and root_den * root_den == den:
        sq = Fraction(root_num, root_den)
        return sorted([r, (-p + sq) / 2, (-p - sq) / 2]), None
    return [r], (p, q)


def _rank(M):
    """Exact rank by fraction-free Gaussian elimination."""
    M = [list(r) for r in M]
    rank, col = 0, 0
    rows, cols = len(M), len(M[0])
    while rank < rows and col < cols:
        piv = next((i for i in range(rank, rows) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, rows):
            f = M[i][col] / M[rank][col]
            for j in range(col, cols):
                M[i][j] -= f * M[rank][j]
        rank += 1
        col += 1
    return rank


def _eigen_multiplicity(A, lam):
    B = tuple(tuple(A[i][j] - (lam if i == j else 0) for j in range(3))
              for i in range(3))
    return 3 - _rank(B)


def _prime_exponents(r):
    """Exponent vector of a nonzero rational over its prime support."""
    out = {}
    for v, sgn in ((r.numerator, 1), (r.denominator, -1)):
        v = abs(v)
        d = 2
        while d * d <= v:
            while v % d == 0:
                out[d] = out.get(d, 0) + sgn
                v //= d
            d += 1
        if v > 1:
            out[v] = out.get(v, 0) + sgn
    return out


def _ratio_rank(ratios):
    """Rank of the multiplicative lattice of rational ratios mod torsion."""
    primes = sorted({p for r in ratios for p in _prime_exponents(r)})
    if not primes:
        return 0
    rows = [[Fraction(_prime_exponents(r).get(p, 0)) for p in primes]
            for r in ratios]
    return _rank(rows)


def classify(beta):
    """Closure-group class of the cyclic group generated by beta.

    Eigenvalues are computed exactly; the class follows from the Jordan
    structure (unipotent part -> Ga factor) and the rank of the
    multiplicative-relation lattice of the eigenvalue ratios (0, 1, 2
    -> torsion only / Gm / Gm^2).  Rational ratios are compared through
    prime exponent vectors; a conjugate quadratic pair through the
    exact norm and trace (modulus pins relations to the antidiagonal,
    where only a root-of-unity quotient survives).  An irreducible
    cubic spectrum is reported Undetermined with a numeric, explicitly
    non-rigorous log-lattice witness.
    """
    A = beta.matrix
    c2, c1, c0 = _char_poly(A)
    roots, quad = _rational_roots(c2, c1, c0)

    if quad is None and roots:
        eig = roots
        semisimple = all(_eigen_multiplicity(A, lam) == eig.count(lam)
                         for lam in set(eig))
        ratios = [eig[i] / eig[j] for i in range(3) for j in range(i + 1, 3)]
        rank = _ratio_rank(ratios)
        witness = {"eigenvalues": [str(x) for x in eig],
                   "semisimple": semisimple, "ratio_rank": rank}
        if rank == 0:
            kind = GroupKind.FINITE if semisimple else GroupKind.GA
        elif rank == 1:
            kind = GroupKind.GM if semisimple else GroupKind.GAGM
        else:
            kind = GroupKind.GM2
        return GroupClass(kind, witness)

    if quad is not None:
        lam0 = roots[0]
        p, q = quad  # conjugate pair of t^2 + p t + q, irrational
        rsum = -p / lam0
        rprod = q / (lam0 * lam0)
        witness = {"eigenvalues": [str(lam0), f"roots of t^2 + ({p}) t + ({q})"],
                   "semisimple": True,
                   "ratio_trace": str(rsum), "ratio_norm": str(rprod)}
        # Cyclotomic conjugate ratio pairs (orders 3, 4, 6).
        if (rsum, rprod) in ((Fraction(-1), Fraction(1)),
                             (Fraction(0), Fraction(1)),
                             (Fraction(1), Fraction(1))):
            return GroupClass(GroupKind.FINITE, witness)
        if rprod in (Fraction(1), Fraction(-1)) or rsum == 0:
            return GroupClass(GroupKind.GM, witness)
        tau = rsum * rsum / rprod - 2
        if tau in (Fraction(-1), Fraction(0), Fraction(1)):
            return GroupClass(GroupKind.GM, witness)
        return GroupClass(GroupKind.GM2, witness)

    # Irreducible cubic: no exact support at this tier.
    ev = np.linalg.eigvals([[float(x) for x in row] for row in A])
    witness = {"eigenvalues": [str(x) for x in ev],
               "note": "irreducible cubic spectrum; numeric log-lattice "
                       "heuristic only, NOT rigorous"}
    return GroupClass(GroupKind.UNDETERMINED, witness)


# ---------------------------------------------------------------------------
# orbit search


def det_condition(beta, L1, L2, L3, m, n):
    """Exact determinant of [L1; L2.beta^m; L3.beta^n]; zero exactly
    when the lines L1, beta^-m(L2), beta^-n(L3) are concurrent."""
    r1 = L1.coeffs
    r2 = _vec_mat(L2.coeffs, beta.power(m))
    r3 = _vec_mat(L3.coeffs, beta.power(n))
    return _det3((r1, r2, r3))


def _shift_rows(beta, L, N):
    """Canonical rows L.beta^k for k = -N..N, computed incrementally."""
    fwd = beta.matrix
    bwd = _adjugate(beta.matrix)
    rows = {0: _canon(L.coeffs)}
    r = tuple(Fraction(x) for x in rows[0])
    for k in range(1, N + 1):
        r = _vec_mat(r, fwd)
        rows[k] = _canon(r)
        r = tuple(Fraction(x) for x in rows[k])
    r = tuple(Fraction(x) for x in rows[0])
    for k in range(1, N + 1):
        r = _vec_mat(r, bwd)
        rows[-k] = _canon(r)
        r = tuple(Fraction(x) for x in rows[-k])
    return rows


def triple_orbit_search(beta, L1, L2, L3, N):
    """All exact hits (m, n, P) with |m|, |n| <= N: P in L1 with
    beta^m(P) in L2 and beta^n(P) in L3.

    Pairwise shifted coincidences L_i . beta^k = L_j for 0 < |k| <= 2N
    violate the distinct-orbit hypothesis and raise; identical input
    lines (k = 0) are allowed, since the example families of interest
    live exactly there, and then hits with equal shifted rows are
    resolved against L1.  Output is sorted by (m, n).
    """
    lines = (L1, L2, L3)
    shifts = [_shift_rows(beta, L, 2 * N) for L in lines]
    for i in range(3):
        for j in range(i + 1, 3):
            target = shifts[j][0]
            for k in range(-2 * N, 2 * N + 1):
                if k != 0 and shifts[i][k] == target:
                    raise ValueError(
                        f"lines {i + 1} and {j + 1} share a beta-orbit "
                        f"(shift {k}, checked |k| <= {2 * N}); "
                        "distinct-orbit hypothesis violated")

    row1 = tuple(Fraction(x) for x in _canon(L1.coeffs))
    hits = []
    for m in range(-N, N + 1):
        r2 = tuple(Fraction(x) for x in shifts[1][m])
        for n in range(-N, N + 1):
            r3 = tuple(Fraction(x) for x in shifts[2][n])
            cr = _cross(r2, r3)
            det = sum(row1[j] * cr[j] for j in range(3))
            if det != 0:
                continue
            if any(x != 0 for x in cr):
                P = cr
            else:
                # r2 and r3 are the same line; intersect with L1.
                P = _cross(row1, r2)
                if all(x == 0 for x in P):
                    continue  # L1 coincides with the shifted line
            P = _canon(P)
            Pf = tuple(Fraction(x) for x in P)
            assert sum(row1[j] * Pf[j] for j in range(3)) == 0
            assert sum(r2[j] * Pf[j] for j in range(3)) == 0
            assert sum(r3[j] * Pf[j] for j in range(3)) == 0
            hits.append(OrbitHit(m, n, P))
    hits.sort(key=lambda h: (h.m, h.n))
    return hits


def fixed_point_check(beta, L):
    """Exact fixed points of beta lying on L.

    Eigenvector points for rational eigenvalues; a two-dimensional
    eigenspace is a pointwise-fixed line and contributes its
    intersection with L.  A quadratic or cubic irrational spectrum has
    no exact eigenvectors at this tier and raises.
    """
    A = beta.matrix
    c2, c1, c0 = _char_poly(A)
    roots, quad = _rational_roots(c2, c1, c0)
    if quad is not None or not roots:
        raise ValueError("spectrum not rational; exact fixed points "
                         "unsupported")
    lc = tuple(Fraction(x) for x in _canon(L.coeffs))
    out = []
    for lam in sorted(set(roots)):
        B = [[A[i][j] - (lam if i == j else 0) for j in range(3)]
             for i in range(3)]
        basis = _null_space(B)
        if len(basis) == 1:
            v = basis[0]
            if sum(lc[j] * v[j] for j in range(3)) == 0:
                out.append(_canon(v))
        elif len(basis) == 2:
            v1, v2 = basis
            a1 = sum(lc[j] * v1[j] for j in range(3))
            a2 = sum(lc[j] * v2[j] for j in range(3))
            if a1 == 0 and a2 == 0:
                out.append(_canon(v1))
                out.append(_canon(v2))
            else:
                w = tuple(a2 * v1[j] - a1 * v2[j] for j in range(3))
                if any(x != 0 for x in w):
                    out.append(_canon(w))
        elif len(basis) == 3:
            raise ValueError("beta is scalar; every point is fixed")
    seen = []
    for p in out:
        if p not in seen:
            seen.append(p)
    return seen


def _null_space(M):
    """Basis of the exact null space of a 3x3 rational matrix."""
    M = [list(r) for r in M]
    pivots = []
    rank, col = 0, 0
    while rank < 3 and col < 3:
        piv = next((i for i in range(rank, 3) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][col]
        M[rank] = [x * inv for x in M[rank]]
        for i in range(3):
            if i != rank and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        pivots.append(col)
        rank += 1
        col += 1
    free = [j for j in range(3) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * 3
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][j]
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# family detection


def _spectrum_bases(beta):
    """Candidate exponential bases: rational eigenvalue ratios that are
    not roots of unity."""
    c2, c1, c0 = _char_poly(beta.matrix)
    roots, quad = _rational_roots(c2, c1, c0)
    if quad is not None or not roots:
        return []
    out = []
    for i in range(3):
        for j in range(3):
            if i != j:
                r = roots[i] / roots[j]
                if r not in (1, -1) and r not in out:
                    out.append(r)
    return out


def _line_candidates(hits):
    cands = {}
    for h1, h2 in itertools.combinations(hits, 2):
        g = h2.n - h1.n
        h = h1.m - h2.m
        if g == 0 and h == 0:
            continue
        c = -(g * h1.m + h * h1.n)
        key = _canon((Fraction(g), Fraction(h), Fraction(c)))
        if key not in cands:
            support = tuple(ht for ht in hits
                            if key[0] * ht.m + key[1] * ht.n + key[2] == 0)
            cands[key] = support
    return cands


def _exponential_candidates(hits, bases):
    """Exact fits m = A lam^n + B n + C (and with m, n exchanged)."""
    out = []
    pool = hits if len(hits) <= 12 else hits[:12]
    for lam in bases:
        for swap in (False, True):
            pts = [(h.n, h.m) if not swap else (h.m, h.n) for h in pool]
            for trip in itertools.combinations(range(len(pts)), 3):
                xs = [pts[t][0] for t in trip]
                ys = [pts[t][1] for t in trip]
                if len(set(xs)) < 3:
                    continue
                sol = _solve_exponential(lam, xs, ys)
                if sol is None or sol[0] == 0:
                    continue
                A, B, C = sol
                support = tuple(
                    h for h in hits
                    if _exp_covers(lam, A, B, C, h, swap))
                key = (lam, A, B, C, swap)
                out.append((key, support))
    return out


def _solve_exponential(lam, xs, ys):
    rows = [[lam ** x, Fraction(x), Fraction(1)] for x in xs]
    det = _det3(tuple(tuple(r) for r in rows))
    if det == 0:
        return None
    sol = []
    for col in range(3):
        M = [list(r) for r in rows]
        for i in range(3):
            M[i][col] = Fraction(ys[i])
        sol.append(_det3(tuple(tuple(r) for r in M)) / det)
    return tuple(sol)


def _exp_covers(lam, A, B, C, hit, swap):
    x, y = (hit.m, hit.n) if swap else (hit.n, hit.m)
    return A * lam ** x + B * x + C == y


def family_detect(hits, beta, lines=None):
    """Pattern report for a hit list: the best-supported exact line in
    Z^2 or exponential family, or FiniteSet when nothing covers at
    least 5 hits.  Ties prefer lines, then nonnegative line
    coefficients, for deterministic output."""
    hits = sorted(hits, key=lambda h: (h.m, h.n))
    if len(hits) < 5:
        return FamilyReport(FiniteSet(len(hits)), tuple(hits))
    best = None  # (support_size, rank_key, pattern, support)
    for key, support in _line_candidates(hits).items():
        if len(support) < 5:
            continue
        g, h, c = key
        rank = (0, 0 if h >= 0 else 1, abs(g), abs(h), abs(c))
        cand = (-len(support), rank, LineFamily(g, h, c), support)
        if best is None or cand[:2] < best[:2]:
            best = cand
    for (lam, A, B, C, swap), support in _exponential_candidates(
            hits, _spectrum_bases(beta)):
        if len(support) < 5:
            continue
        rank = (1, 0 if not swap else 1, abs(A), abs(B), abs(C))
        cand = (-len(support), rank,
                ExponentialFamily(A, lam, B, C), support)
        if best is None or cand[:2] < best[:2]:
            best = cand
    if best is None:
        return FamilyReport(FiniteSet(len(hits)), tuple(hits))
    return FamilyReport(best[2], best[3])


# ---------------------------------------------------------------------------
# recurrence zeros


class RecurrenceReport(NamedTuple):
    zeros: tuple
    progressions: tuple


def recurrence_zeros(T, N):
    """Zeros of u_m = (0,0,1) . T^m . (1,0,0)^t for 0 <= m <= N.

    u satisfies the order-3 linear recurrence with the characteristic
    coefficients of T (Cayley-Hamilton); the zero set is listed with
    its maximal arithmetic progressions of length >= 3 (a desk-scale
    version of the Skolem-Mahler-Lech structure).
    """
    A = T.matrix
    c2, c1, c0 = _char_poly(A)
    u = [Fraction(0), A[2][0], _mat_mul(A, A)[2][0]]
    for m in range(3, N + 1):
        u.append(-c2 * u[m - 1] - c1 * u[m - 2] - c0 * u[m - 3])
    zeros = tuple(m for m in range(N + 1) if u[m] == 0)
    zset = set(zeros)
    progs = []
    for d in range(1, max(1, N // 2) + 1):
        for z in zeros:
            if z - d in zset:
                continue
            length = 1
            while z + length * d in zset:
                length += 1
            if length >= 3:
                progs.append((z, d, length))
    # Drop progressions whose terms all lie inside another reported one.
    sets = [frozenset(z + i * d for i in range(l)) for z, d, l in progs]
    keep = [p for p, s in zip(progs, sets)
            if not any(s < t for t in sets)]
    return RecurrenceReport(zeros, tuple(sorted(keep)))

"""Geometry of the solution subgroup {x in T^m : Lx = 0} of the torus.

Inside the unit cube the subgroup splits into finitely many affine slices:
one for each integer vector b (a "level") attained by Lx on [0,1)^m, the
slice being {x in [0,1)^m : Lx = b}.  Each slice is parametrized over the
canonical integer kernel basis B as x = x_b + B t, and all Haar-measure
evaluations reduce to exact rational volumes of polytopes in the t
parameters.  Because every measure is a ratio of such volumes in one fixed
parametrization, the irrational Hausdorff normalization cancels and never
appears.

The same machinery yields the weight of a 1/p grid box (p^(m-r) times its
normalized Haar measure) and the cover of all positive-weight boxes by at
most one shift per level, which is what connects the continuous measure to
counting in Z_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import BadModulusError, InternalInvariantError, InvalidInputError
from .intmat import IntMatrix, MatrixProfile, analyze_matrix, rank_mod_p
from .polytope import HPolytope, _vertices_raw, enumerate_vertices, volume

__all__ = [
    "KernelComponent",
    "KernelDecomposition",
    "WeightedShift",
    "enumerate_components",
    "box_measure",
    "weight",
    "shift_cover",
    "is_prime",
]


@dataclass(frozen=True)
class KernelComponent:
    """One affine slice of the kernel subgroup inside the unit cube.

    level: the integer vector b = Lx shared by all points of the slice.
    representative: a rational point x_b of the closed slice with
        L x_b = b exactly (the lexicographically smallest vertex).
    volume_param: the (m-r)-volume of {t : x_b + B t in [0,1]^m} in the
        canonical kernel-basis coordinates; slices touching the cube only
        in a face have volume 0 and are retained but flagged.
    """

    level: tuple[int, ...]
    representative: tuple[Fraction, ...]
    volume_param: Fraction

    @property
    def is_flat(self) -> bool:
        return self.volume_param == 0


@dataclass(frozen=True)
class KernelDecomposition:
    """All slices of the kernel subgroup, with normalization data.

    total_volume_param equals the product of the Smith invariants of L
    (the number of connected components of the subgroup); c_param is its
    reciprocal, the constant turning parameter volumes into normalized
    Haar measure.
    """

    matrix: IntMatrix
    basis_columns: tuple[tuple[int, ...], ...]
    components: tuple[KernelComponent, ...]
    total_volume_param: Fraction
    c_param: Fraction


@dataclass(frozen=True)
class WeightedShift:
    """A coset representative j with its weight.

    j is the lexicographically smallest solution of L j = -level (mod p)
    with entries in [0, p); lam is p^(m-r) times the normalized Haar
    measure of the grid box at j/p, a positive rational constant across
    the whole coset of j.
    """

    p: int
    j: tuple[int, ...]
    lam: Fraction
    level: tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _pivot_columns(mat: IntMatrix) -> list[int]:
    """First r columns forming an invertible minor over the rationals."""
    work = [[Fraction(v) for v in row] for row in mat.entries]
    nrows, ncols = mat.rows, mat.cols
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = Fraction(1, 1) / work[rank][col]
        work[rank] = [v * inv for v in work[rank]]
        for i in range(nrows):
            if i != rank and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[rank])]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return pivots


def _solve_square_fraction(rows, rhs):
    d = len(rows)
    work = [list(rows[i]) + [rhs[i]] for i in range(d)]
    for col in range(d):
        piv = next((i for i in range(col, d) if work[i][col] != 0), None)
        if piv is None:
            return None
        work[col], work[piv] = work[piv], work[col]
        inv = Fraction(1, 1) / work[col][col]
        work[col] = [v * inv for v in work[col]]
        for i in range(d):
            if i != col and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return [work[i][d] for i in range(d)]


def _particular_solution(mat: IntMatrix, pivots: list[int], b) -> tuple[Fraction, ...]:
    """A rational solution of Lx = b with zeros outside the pivot columns."""
    rows = [[Fraction(mat.entries[i][c]) for c in pivots] for i in range(mat.rows)]
    sol = _solve_square_fraction(rows, [Fraction(v) for v in b])
    x = [Fraction(0)] * mat.cols
    for c, v in zip(pivots, sol):
        x[c] = v
    return tuple(x)


def _slice_polytope(x_rep, columns, lows, highs) -> HPolytope:
    """{t : lows_i <= (x_rep + B t)_i <= highs_i for all i}."""
    d = len(columns)
    cons = []
    for i in range(len(x_rep)):
        row = tuple(Fraction(c[i]) for c in columns)
        cons.append((row, Fraction(highs[i]) - x_rep[i]))
        cons.append((tuple(-v for v in row), x_rep[i] - Fraction(lows[i])))
    return HPolytope(d, cons)


def _half_open_feasible(x_rep, columns) -> bool:
    """Does {x in [0,1)^m : x = x_rep + B t} meet the half-open cube?

    Lift to (t, s) and minimize s subject to 0 <= x_rep + Bt <= s <= 1;
    the minimum of the largest coordinate sits at a vertex of the lifted
    polytope, and the slice meets [0,1)^m exactly when it is < 1.
    """
    d = len(columns)
    m = len(x_rep)
    zero = Fraction(0)
    cons = []
    for i in range(m):
        row = [Fraction(c[i]) for c in columns]
        cons.append((tuple(-v for v in row) + (zero,), x_rep[i]))
        cons.append((tuple(row) + (Fraction(-1),), -x_rep[i]))
    cons.append(((zero,) * d + (Fraction(1),), Fraction(1)))
    # bounded by construction: 0 <= x + Bt <= s <= 1 with B of full column rank
    verts = _vertices_raw(d + 1, HPolytope(d + 1, cons).constraints)
    if not verts:
        return False
    return min(v[d] for v in verts) < 1


@lru_cache(maxsize=128)
def enumerate_components(mat: IntMatrix, profile: MatrixProfile | None = None) -> KernelDecomposition:
    """Enumerate all kernel slices with exact representatives and volumes.

    Candidate levels range over the closed integer box of row sums of
    negative/positive entries and are kept exactly when the slice meets the
    half-open cube [0,1)^m; slices meeting only the closed cube boundary
    belong to other slices modulo 1 and are discarded.
    """
    if profile is None:
        profile = analyze_matrix(mat)
    columns = tuple(profile.kernel_columns())
    pivots = _pivot_columns(mat)
    comps = []
    ranges = mat.row_ranges()
    for b in product(*[range(lo, hi + 1) for lo, hi in ranges]):
        x_any = _particular_solution(mat, pivots, b)
        poly = _slice_polytope(x_any, columns, [0] * mat.cols, [1] * mat.cols)
        verts = enumerate_vertices(poly)
        if not verts:
            continue
        if not _half_open_feasible(x_any, columns):
            continue
        points = sorted(
            tuple(x_any[i] + sum(Fraction(c[i]) * t[k] for k, c in enumerate(columns)) for i in range(mat.cols))
            for t in verts
        )
        x_rep = points[0]
        vol = volume(poly).volume
        comps.append(KernelComponent(level=tuple(b), representative=x_rep, volume_param=vol))
    comps.sort(key=lambda c: c.level)
    total = sum((c.volume_param for c in comps), Fraction(0))
    expected = 1
    for inv in profile.smith_invariants:
        expected *= inv
    if total != expected:
        raise InternalInvariantError(
            f"total parameter volume {total} != product of Smith invariants {expected}"
        )
    return KernelDecomposition(
        matrix=mat,
        basis_columns=columns,
        components=tuple(comps),
        total_volume_param=total,
        c_param=Fraction(1, 1) / total,
    )


def box_measure(decomp: KernelDecomposition, j, p: int) -> Fraction:
    """Normalized Haar measure of the grid box j/p + [0, 1/p)^m.

    Computed on the closed box (a null-set difference for slices meeting
    the box in full dimension): sum over slices of the parameter volume of
    {t : x_b + B t in box}, scaled by c_param.
    """
    mat = decomp.matrix
    m = mat.cols
    j = tuple(int(v) for v in j)
    if len(j) != m or any(not (0 <= v < p) for v in j):
        raise InvalidInputError(f"box index {j} not in [0, {p})^{m}")
    lj = mat.apply_int(j)
    ranges = mat.row_ranges()
    lows = [Fraction(v, p) for v in j]
    highs = [Fraction(v + 1, p) for v in j]
    total = Fraction(0)
    for comp in decomp.components:
        # the box can only meet the slice at p*b' = Lj + b for a level b
        shifted = [p * bv - ljv for bv, ljv in zip(comp.level, lj)]
        if any(not (lo <= s <= hi) for s, (lo, hi) in zip(shifted, ranges)):
            continue
        poly = _slice_polytope(comp.representative, decomp.basis_columns, lows, highs)
        total += volume(poly).volume
    return total * decomp.c_param


def weight(decomp: KernelDecomposition, j, p: int) -> Fraction:
    """p^(m-r) times the box measure; constant on cosets of the kernel mod p."""
    mat = decomp.matrix
    return box_measure(decomp, j, p) * Fraction(p) ** (mat.cols - mat.rows)


def _solvable_mod_p(cols, rhs, p: int) -> bool:
    """Is sum_i cols[i] * x_i = rhs solvable mod p?"""
    r = len(rhs)
    work = [[c[i] % p for c in cols] + [rhs[i] % p] for i in range(r)]
    ncols = len(cols)
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, r) if work[i][col] % p != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], p - 2, p)
        work[rank] = [(v * inv) % p for v in work[rank]]
        for i in range(r):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[rank])]
        rank += 1
    for i in range(rank, r):
        if work[i][ncols] % p != 0:
            return False
    return True


def _lex_min_solution_mod_p(mat: IntMatrix, target, p: int) -> tuple[int, ...]:
    """Lexicographically smallest j in [0,p)^m with L j = target (mod p)."""
    m = mat.cols
    all_cols = [tuple(mat.entries[i][c] for i in range(mat.rows)) for c in range(m)]
    assigned: list[int] = []
    rhs = [v % p for v in target]
    for c in range(m):
        rest = all_cols[c + 1 :]
        found = None
        for v in range(p):
            new_rhs = [(rhs[i] - all_cols[c][i] * v) % p for i in range(mat.rows)]
            ok = _solvable_mod_p(rest, new_rhs, p) if rest else all(x == 0 for x in new_rhs)
            if ok:
                found = v
                rhs = new_rhs
                break
        if found is None:
            raise InternalInvariantError("congruence system unexpectedly unsolvable")
        assigned.append(found)
    return tuple(assigned)


def shift_cover(decomp: KernelDecomposition, p: int) -> list[WeightedShift]:
    """One weighted shift per positive-weight residue class of grid boxes.

    Every positive-measure grid box j satisfies L j = -b (mod p) for a
    positive-volume level b, and all boxes in one residue class share the
    same weight; the representative returned for the class of b is the
    lexicographically smallest solution of the congruence.  The weights of
    the cover sum to exactly 1.

    Requires p prime, full rank mod p, and p strictly larger than every row
    sum of absolute entries (so distinct levels stay distinct mod p and
    each box meets a single slice family).
    """
    mat = decomp.matrix
    if not is_prime(p):
        raise BadModulusError(f"p = {p} is not prime")
    if rank_mod_p(mat, p) != mat.rows:
        raise BadModulusError(f"matrix loses rank mod p = {p}")
    bound = mat.max_row_abs_sum()
    if p <= bound:
        raise BadModulusError(
            f"p = {p} too small: need p > {bound}, the largest row sum of absolute entries"
        )
    shifts = []
    for comp in decomp.components:
        if comp.volume_param == 0:
            continue
        target = tuple((-v) % p for v in comp.level)
        j = _lex_min_solution_mod_p(mat, target, p)
        lam = weight(decomp, j, p)
        if lam <= 0:
            raise InternalInvariantError(
                f"residue class of level {comp.level} produced weight {lam}"
            )
        shifts.append(WeightedShift(p=p, j=j, lam=lam, level=comp.level))
    return shifts

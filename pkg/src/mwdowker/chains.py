"""F2 chain complexes, homology, relative homology and mapping cones.

Matrices are stored column-major; a column is the sorted tuple of row
indices holding a 1.  Elimination converts columns to Python ints so that
column addition is a single XOR, with the pivot at the highest set bit.

Integer Smith normal form is provided separately for torsion checks on
signed simplicial boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

Column = tuple[int, ...]


# ---------------------------------------------------------------------------
# sparse columns and bitsets


def to_bits(col: Iterable[int]) -> int:
    c = 0
    for i in col:
        c ^= 1 << i
    return c


def from_bits(c: int) -> Column:
    out = []
    while c:
        low = c & -c
        out.append(low.bit_length() - 1)
        c ^= low
    return tuple(out)


def add(a: Iterable[int], b: Iterable[int]) -> Column:
    return tuple(sorted(set(a).symmetric_difference(b)))


def apply(columns: Sequence[Column], vec: Iterable[int]) -> Column:
    """Multiply the matrix given by ``columns`` with the sparse vector ``vec``."""
    acc: set[int] = set()
    for j in vec:
        acc.symmetric_difference_update(columns[j])
    return tuple(sorted(acc))


def rank_f2(columns: Iterable[Column | int]) -> int:
    """Rank over F2 by plain column elimination (pivot = highest set bit)."""
    pivots: dict[int, int] = {}
    for col in columns:
        c = col if isinstance(col, int) else to_bits(col)
        while c:
            p = c.bit_length() - 1
            q = pivots.get(p)
            if q is None:
                pivots[p] = c
                break
            c ^= q
    return len(pivots)


def kernel_basis(columns: Sequence[Column]) -> list[Column]:
    """Basis of the null space, each vector a sorted tuple of column indices."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for j, col in enumerate(columns):
        c = to_bits(col)
        combo = 1 << j
        while c:
            p = c.bit_length() - 1
            hit = pivots.get(p)
            if hit is None:
                pivots[p] = (c, combo)
                break
            c ^= hit[0]
            combo ^= hit[1]
        if not c:
            kernel.append(from_bits(combo))
    return kernel


def compose_columns(outer: Sequence[Column], inner: Sequence[Column]) -> tuple[Column, ...]:
    return tuple(apply(outer, c) for c in inner)


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True)
class ChainComplex:
    """Graded F2 chain complex with named basis cells.

    ``basis[d]`` lists the d-cells; ``boundaries[d]`` holds the columns of
    ``∂_d : C_d -> C_{d-1}`` (all zero for ``d = 0``).  Degrees run from 0 to
    ``top``; homology is only reliable below ``top``.
    """

    basis: tuple[tuple[Hashable, ...], ...]
    boundaries: tuple[tuple[Column, ...], ...]

    def __post_init__(self):
        if len(self.basis) != len(self.boundaries):
            raise ValueError("basis and boundaries must cover the same degrees")
        for d, cols in enumerate(self.boundaries):
            if len(cols) != len(self.basis[d]):
                raise ValueError(f"boundary in degree {d} has wrong column count")
            bound = 0 if d == 0 else len(self.basis[d - 1])
            for c in cols:
                if c and (c[0] < 0 or c[-1] >= bound):
                    raise ValueError(f"boundary in degree {d} has rows out of range")

    @property
    def top(self) -> int:
        return len(self.basis) - 1

    def size(self, d: int) -> int:
        if 0 <= d < len(self.basis):
            return len(self.basis[d])
        return 0

    @cached_property
    def _index(self) -> tuple[dict[Hashable, int], ...]:
        return tuple({cell: i for i, cell in enumerate(cells)} for cells in self.basis)

    def index(self, d: int) -> dict[Hashable, int]:
        return self._index[d]

    def degree_of(self, cell: Hashable) -> int | None:
        for d, idx in enumerate(self._index):
            if cell in idx:
                return d
        return None

    def boundary(self, d: int) -> tuple[Column, ...]:
        if 0 <= d <= self.top:
            return self.boundaries[d]
        return ()

    @cached_property
    def _ranks(self) -> tuple[int, ...]:
        return tuple(rank_f2(cols) for cols in self.boundaries)

    def rank(self, d: int) -> int:
        """Rank of ``∂_d``; zero outside the tracked range."""
        if 0 <= d <= self.top:
            return self._ranks[d]
        return 0

    def is_valid(self) -> bool:
        """True iff ``∂_{d-1} ∘ ∂_d = 0`` in every tracked degree."""
        for d in range(2, self.top + 1):
            lower = self.boundaries[d - 1]
            for c in self.boundaries[d]:
                if apply(lower, c):
                    return False
        return True

    def num_cells(self) -> int:
        return sum(len(b) for b in self.basis)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(b) for d, b in enumerate(self.basis))


def empty_complex(top: int) -> ChainComplex:
    return ChainComplex(basis=((),) * (top + 1), boundaries=((),) * (top + 1))


@dataclass(frozen=True)
class BettiVector:
    """Betti numbers in degrees ``0 .. top-1``; degree ``top`` is unknown."""

    values: tuple[int, ...]
    reduced: bool = False

    @property
    def unknown_from(self) -> int:
        return len(self.values)

    def __getitem__(self, d: int) -> int:
        return self.values[d]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def nonzero_degrees(self) -> list[int]:
        return [d for d, b in enumerate(self.values) if b]

    def truncated(self, n: int) -> tuple[int, ...]:
        return self.values[:n]

    def to_json(self) -> dict:
        return {
            "betti": list(self.values),
            "reduced": self.reduced,
            "unknown_from_degree": self.unknown_from,
        }


def betti(c: ChainComplex, reduced: bool = False) -> BettiVector:
    """F2 Betti numbers ``dim ker ∂_d - rank ∂_{d+1}`` for reliable degrees."""
    values = [c.size(d) - c.rank(d) - c.rank(d + 1) for d in range(c.top)]
    if reduced and values and c.size(0) > 0:
        values[0] -= 1
    return BettiVector(tuple(values), reduced)


# ---------------------------------------------------------------------------
# subcomplexes and relative homology


def _restrict(col: Column, keep: dict[int, int]) -> Column:
    return tuple(sorted(keep[r] for r in col if r in keep))


def _selection(K: ChainComplex, cells: Iterable[Hashable]) -> list[set[int]]:
    chosen: list[set[int]] = [set() for _ in range(K.top + 1)]
    for cell in cells:
        d = K.degree_of(cell)
        if d is None:
            raise ValueError(f"cell {cell!r} is not in the complex")
        chosen[d].add(K.index(d)[cell])
    return chosen


def is_subcomplex(K: ChainComplex, cells: Iterable[Hashable]) -> bool:
    return _closed(K, _selection(K, cells))


def subcomplex(K: ChainComplex, cells: Iterable[Hashable]) -> ChainComplex:
    """The subcomplex spanned by ``cells`` (which must be closed under faces)."""
    chosen = _selection(K, cells)
    if not _closed(K, chosen):
        raise ValueError("selected cells do not form a subcomplex")
    return _induced(K, chosen)


def quotient_complex(K: ChainComplex, cells: Iterable[Hashable]) -> ChainComplex:
    """``C(K)/C(L)`` where ``L`` is the subcomplex spanned by ``cells``."""
    chosen = _selection(K, cells)
    if not _closed(K, chosen):
        raise ValueError("selected cells do not form a subcomplex")
    rest = [set(range(K.size(d))) - chosen[d] for d in range(K.top + 1)]
    return _induced(K, rest)


def _closed(K: ChainComplex, chosen: list[set[int]]) -> bool:
    for d in range(1, K.top + 1):
        allowed = chosen[d - 1]
        for j in chosen[d]:
            if not allowed.issuperset(K.boundaries[d][j]):
                return False
    return True


def _induced(K: ChainComplex, keep: list[set[int]]) -> ChainComplex:
    order = [sorted(s) for s in keep]
    remap = [{old: new for new, old in enumerate(o)} for o in order]
    basis = tuple(tuple(K.basis[d][i] for i in order[d]) for d in range(K.top + 1))
    bounds = []
    for d in range(K.top + 1):
        if d == 0:
            bounds.append(((),) * len(order[0]))
        else:
            bounds.append(tuple(_restrict(K.boundaries[d][i], remap[d - 1]) for i in order[d]))
    return ChainComplex(basis, tuple(bounds))


def relative_betti(K: ChainComplex, L_cells: Iterable[Hashable]) -> BettiVector:
    """Betti numbers of the pair ``(K, L)`` computed from ``C(K)/C(L)``."""
    return betti(quotient_complex(K, L_cells))


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """Degreewise F2 matrices ``f_d : A_d -> B_d`` for ``d = 0 .. top``."""

    source: ChainComplex
    target: ChainComplex
    matrices: tuple[tuple[Column, ...], ...]

    def __post_init__(self):
        if len(self.matrices) != self.top + 1:
            raise ValueError("chain map must cover degrees 0..min(top)")
        for d, cols in enumerate(self.matrices):
            if len(cols) != self.source.size(d):
                raise ValueError(f"chain map column count wrong in degree {d}")
            for c in cols:
                if c and (c[0] < 0 or c[-1] >= self.target.size(d)):
                    raise ValueError(f"chain map rows out of range in degree {d}")

    @property
    def top(self) -> int:
        return min(self.source.top, self.target.top)

    @property
    def reliable_top(self) -> int:
        """Highest degree in which ``H_d(f)`` is determined by the data."""
        return min(self.source.top, self.target.top - 1)

    def commutation_failures(self) -> list[tuple[int, Hashable]]:
        """Basis cells ``a`` with ``∂f(a) != f(∂a)``, as ``(degree, cell)``."""
        bad = []
        for d in range(1, self.top + 1):
            fd, fl = self.matrices[d], self.matrices[d - 1]
            dA, dB = self.source.boundaries[d], self.target.boundaries[d]
            for j, col in enumerate(fd):
                if apply(dB, col) != apply(fl, dA[j]):
                    bad.append((d, self.source.basis[d][j]))
        return bad

    def is_valid(self) -> bool:
        return not self.commutation_failures()


def identity_map(A: ChainComplex) -> ChainMap:
    return ChainMap(A, A, tuple(tuple((j,) for j in range(A.size(d))) for d in range(A.top + 1)))


def zero_map(A: ChainComplex, B: ChainComplex) -> ChainMap:
    top = min(A.top, B.top)
    return ChainMap(A, B, tuple(((),) * A.size(d) for d in range(top + 1)))


def map_from_cells(A: ChainComplex, B: ChainComplex, image) -> ChainMap:
    """Chain map sending each basis cell of A to a single cell of B (or 0).

    ``image(cell)`` returns the target cell id or ``None`` for zero.
    """
    top = min(A.top, B.top)
    mats = []
    for d in range(top + 1):
        idx = B.index(d)
        cols = []
        for cell in A.basis[d]:
            t = image(cell)
            if t is None:
                cols.append(())
            else:
                j = idx.get(t)
                if j is None:
                    raise ValueError(f"image {t!r} of {cell!r} is not a {d}-cell of the target")
                cols.append((j,))
        mats.append(tuple(cols))
    return ChainMap(A, B, tuple(mats))


def inclusion_map(A: ChainComplex, B: ChainComplex) -> ChainMap:
    """Cell-by-cell inclusion of A into B (same cell ids)."""
    return map_from_cells(A, B, lambda cell: cell)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g ∘ f``."""
    top = min(f.top, g.top)
    mats = tuple(compose_columns(g.matrices[d], f.matrices[d]) for d in range(top + 1))
    return ChainMap(f.source, g.target, mats)


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone with ``Cone_d = A_{d-1} ⊕ B_d`` and differential ``(a, b) -> (∂a, f a + ∂b)``.

    The source may stop one degree below the target: the cone then still
    reaches the target's top degree.
    """
    if not f.is_valid():
        d, cell = f.commutation_failures()[0]
        raise ValueError(f"not a chain map: commutation fails at {cell!r} in degree {d}")
    A, B = f.source, f.target
    top = min(A.top + 1, B.top)
    basis = []
    bounds = []
    for d in range(top + 1):
        a_cells = A.basis[d - 1] if d >= 1 else ()
        basis.append(tuple(("a", x) for x in a_cells) + tuple(("b", y) for y in B.basis[d]))
        shift = A.size(d - 2) if d >= 2 else 0
        if d == 0:
            bounds.append(((),) * B.size(0))
            continue
        cols = []
        for j in range(len(a_cells)):
            da = A.boundaries[d - 1][j] if d >= 2 else ()
            cols.append(da + tuple(i + shift for i in f.matrices[d - 1][j]))
        for c in B.boundaries[d]:
            cols.append(tuple(i + shift for i in c))
        bounds.append(tuple(cols))
    return ChainComplex(tuple(basis), tuple(bounds))


@dataclass(frozen=True)
class QuasiIsoCertificate:
    """Outcome of a quasi-isomorphism test: the cone's Betti numbers."""

    cone_betti: BettiVector
    nonzero_degrees: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.nonzero_degrees

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "quasi_isomorphism": self.ok,
            "cone_betti": list(self.cone_betti.values),
            "nonzero_degrees": list(self.nonzero_degrees),
            "reliable_through_degree": self.cone_betti.unknown_from - 1,
        }


def is_quasi_iso(f: ChainMap) -> QuasiIsoCertificate:
    """A chain map is a quasi-isomorphism iff its cone is acyclic."""
    b = betti(mapping_cone(f))
    return QuasiIsoCertificate(b, tuple(b.nonzero_degrees()))


def cycles(A: ChainComplex, d: int) -> list[Column]:
    if d == 0:
        return [(j,) for j in range(A.size(0))]
    return kernel_basis(A.boundaries[d])


def induced_map_rank(f: ChainMap, d: int) -> int:
    """Rank of ``H_d(f)``: ``dim (f(Z_d A) + B_d B) / B_d B``."""
    if d < 0 or d > f.reliable_top:
        raise ValueError(f"degree {d} is outside the reliable range 0..{f.reliable_top}")
    A, B = f.source, f.target
    images = [apply(f.matrices[d], z) for z in cycles(A, d)]
    bdry = list(B.boundary(d + 1))
    return rank_f2(bdry + images) - rank_f2(bdry)


def les_pair_defects(K: ChainComplex, L_cells: Iterable[Hashable]) -> list[dict]:
    """Check the long exact sequence of the pair ``(K, L)`` degree by degree.

    For the inclusion ``i : L -> K`` exactness forces
    ``β_d(K, L) = (β_d(K) - rk H_d(i)) + (β_{d-1}(L) - rk H_{d-1}(i))``.
    Returns the list of degrees where this fails (empty when exact).
    """
    L_cells = list(L_cells)
    L = subcomplex(K, L_cells)
    i = inclusion_map(L, K)
    bK, bL = betti(K), betti(L)
    rel = relative_betti(K, L_cells)
    top = min(len(bK), len(bL), len(rel))
    ranks = [induced_map_rank(i, d) for d in range(top)]
    defects = []
    for d in range(top):
        expected = (bK[d] - ranks[d]) + ((bL[d - 1] - ranks[d - 1]) if d >= 1 else 0)
        if rel[d] != expected:
            defects.append({"degree": d, "relative": rel[d], "expected": expected})
    return defects


def cone_maps(f: ChainMap, g: ChainMap) -> tuple[ChainMap, ChainMap]:
    """The canonical maps ``Cone(f) -> Cone(gf) -> Cone(g)`` of a composable pair.

    ``(x, y) -> (x, g y)`` and ``(x, z) -> (f x, z)``.
    """
    Cf, Cgf, Cg = mapping_cone(f), mapping_cone(compose(g, f)), mapping_cone(g)
    X, Y = f.source, f.target
    first, second = [], []
    for d in range(min(Cf.top, Cgf.top) + 1):
        nx = X.size(d - 1) if d >= 1 else 0
        cols = [(j,) for j in range(nx)]
        cols += [tuple(i + nx for i in c) for c in g.matrices[d]]
        first.append(tuple(cols))
    for d in range(min(Cgf.top, Cg.top) + 1):
        nx = X.size(d - 1) if d >= 1 else 0
        ny = Y.size(d - 1) if d >= 1 else 0
        cols = [f.matrices[d - 1][j] for j in range(nx)] if d >= 1 else []
        cols += [(ny + j,) for j in range(Cgf.size(d) - nx)]
        second.append(tuple(cols))
    return ChainMap(Cf, Cgf, tuple(first)), ChainMap(Cgf, Cg, tuple(second))


def les_triple_defects(f: ChainMap, g: ChainMap) -> list[dict]:
    """Exactness audit of ``H(Cone f) -> H(Cone gf) -> H(Cone g) -> H_{d-1}(Cone f)``.

    Checks that the composite of the first two maps is zero on homology, that
    ``β_d(Cone gf) = rk a_d + rk b_d`` and that the connecting map's implied
    rank ``β_d(Cone g) - rk b_d`` also fits ``β_{d-1}(Cone f) - rk a_{d-1}``.
    """
    a, b = cone_maps(f, g)
    ba = compose(b, a)
    bf, bgf, bg = betti(a.source), betti(a.target), betti(b.target)
    top = min(len(bf), len(bgf), len(bg), a.reliable_top + 1, b.reliable_top + 1)
    ra = [induced_map_rank(a, d) for d in range(top)]
    rb = [induced_map_rank(b, d) for d in range(top)]
    defects = []
    for d in range(top):
        if induced_map_rank(ba, d):
            defects.append({"degree": d, "reason": "composite nonzero on homology"})
        if bgf[d] != ra[d] + rb[d]:
            defects.append({"degree": d, "reason": "middle term rank mismatch"})
        if d >= 1 and bf[d - 1] != (bg[d] - rb[d]) + ra[d - 1]:
            defects.append({"degree": d, "reason": "connecting map rank mismatch"})
    return defects


# ---------------------------------------------------------------------------
# integer Smith normal form


class SmithOverflowError(OverflowError):
    pass


def smith_normal_form(M: Sequence[Sequence[int]], limit: int = 2**63 - 1) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    Raises SmithOverflowError if an intermediate entry exceeds ``limit`` in
    absolute value (mirrors a fixed-width integer implementation).
    """
    A = [list(row) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = A[i][j]
                if v and (best is None or abs(v) < best):
                    best, pivot = abs(v), (i, j)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                q = A[i][t] // A[t][t]
                if q:
                    for k in range(t, cols):
                        A[i][k] -= q * A[t][k]
                        if abs(A[i][k]) > limit:
                            raise SmithOverflowError("entry growth exceeded limit")
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // A[t][t]
                if q:
                    for k in range(t, rows):
                        A[k][j] -= q * A[k][t]
                        if abs(A[k][j]) > limit:
                            raise SmithOverflowError("entry growth exceeded limit")
                if A[t][j]:
                    done = False
            if done:
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if A[i][j] % A[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for k in range(t, cols):
                    A[t][k] += A[bad][k]
                continue
            # move the smallest nonzero entry of row/column t into the pivot
            best = None
            for i in range(t, rows):
                v = A[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, t)
            for j in range(t, cols):
                v = A[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), t, j)
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class IntegerHomology:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def integer_homology(
    sizes: Sequence[int], boundaries: Sequence[Sequence[Sequence[int]]]
) -> IntegerHomology:
    """Integer homology in degrees ``0 .. len(sizes)-2``.

    ``boundaries[d]`` is the dense ``sizes[d-1] x sizes[d]`` matrix of ``∂_d``
    (``boundaries[0]`` is ignored).
    """
    top = len(sizes) - 1
    invariants = [[] for _ in range(top + 1)]
    for d in range(1, top + 1):
        if sizes[d] and sizes[d - 1]:
            invariants[d] = smith_normal_form(boundaries[d])
    ranks = [len(inv) for inv in invariants] + [0]
    betti_ = tuple(sizes[d] - ranks[d] - ranks[d + 1] for d in range(top))
    torsion = tuple(tuple(e for e in invariants[d + 1] if e > 1) for d in range(top))
    return IntegerHomology(betti_, torsion)

"""Bigraded persistent homology of sublevel Vietoris-Rips complexes.

For a measurement phi in a data set, the complex at (r, s) is built on the
sublevel set (phi <= s) with all simplices of diameter at most r under the
data set's pseudometric.  Homology is computed exactly over F_p, together
with representative cycles, so induced maps come out as honest matrices and
every grid square can be checked for commutativity by matrix equality.

The grid semantics are right-continuous: the value on a cell
[r_i, r_{i+1}) x [s_j, s_{j+1}) is the value at its lower-left corner, and
the s-grid carries one sentinel value below the measurement minimum so the
empty complex is represented on-grid.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import DataSet, Measurement, PointMap, format_rational, sup_distance
from .errors import SimplicialMapError
from .ggraph import GraphFunctor, build_graph
from .linalg import ColumnSolver, ModMatrix, kernel_basis

INF = math.inf


def check_prime(p: int) -> int:
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"coefficient modulus {p} is not prime")
    return p


class SimplicialComplex:
    """Simplices grouped by dimension, each a tuple of vertex ids in a fixed
    vertex order; closed under faces up to the dimension cap."""

    __slots__ = ("points", "simplices", "dim_cap", "_index", "_vertex_pos")

    def __init__(self, points, simplices, dim_cap):
        self.points = tuple(points)
        self.dim_cap = dim_cap
        self._vertex_pos = {p: i for i, p in enumerate(self.points)}
        self.simplices = {k: tuple(v) for k, v in simplices.items()}
        self._index = {
            k: {s: i for i, s in enumerate(v)} for k, v in self.simplices.items()
        }

    def dim_simplices(self, k):
        return self.simplices.get(k, ())

    def has_simplex(self, simplex) -> bool:
        k = len(simplex) - 1
        return simplex in self._index.get(k, {})

    def index_of(self, simplex) -> int:
        return self._index[len(simplex) - 1][simplex]

    def sort_vertices(self, vertices):
        return tuple(sorted(vertices, key=self._vertex_pos.__getitem__))

    def __repr__(self):
        sizes = {k: len(v) for k, v in self.simplices.items()}
        return f"SimplicialComplex({sizes})"


def vr_complex(points, dist, r, dim_cap) -> SimplicialComplex:
    """All subsets of size <= dim_cap + 1 whose pairwise distances stay <= r."""
    if r < 0:
        raise ValueError("scale parameter must be nonnegative")
    pts = tuple(points)
    simplices = {}
    if pts:
        simplices[0] = tuple((p,) for p in pts)
    for k in range(1, dim_cap + 1):
        level = []
        for combo in itertools.combinations(pts, k + 1):
            if all(dist(a, b) <= r for a, b in itertools.combinations(combo, 2)):
                level.append(combo)
        if not level:
            break
        simplices[k] = tuple(level)
    return SimplicialComplex(pts, simplices, dim_cap)


def sublevel(measurement: Measurement, s) -> tuple:
    """Points where the measurement does not exceed s, in domain order."""
    return tuple(p for p in measurement.domain if measurement.at(p) <= s)


def boundary_matrix(cx: SimplicialComplex, k: int, p: int) -> ModMatrix:
    """Boundary from k-chains to (k-1)-chains with alternating signs."""
    cols = cx.dim_simplices(k)
    rows = cx.dim_simplices(k - 1) if k >= 1 else ()
    mat = [[0] * len(cols) for _ in rows]
    if k >= 1:
        idx = cx._index.get(k - 1, {})
        for j, simplex in enumerate(cols):
            for i, v in enumerate(simplex):
                face = simplex[:i] + simplex[i + 1 :]
                mat[idx[face]][j] = (-1) ** i % p
    return ModMatrix(mat, len(cols), p)


class HomologySpace:
    """Exact homology in one degree with representative cycles.

    Representatives are chain vectors over the degree-d simplices; coords_of
    expresses any cycle in the representative basis modulo boundaries.
    """

    __slots__ = ("complex", "degree", "p", "dim", "representatives", "_solver", "_rep_ids")

    def __init__(self, cx: SimplicialComplex, degree: int, p: int):
        if cx.dim_cap < degree + 1:
            raise ValueError(
                f"complex built with cap {cx.dim_cap} cannot give degree {degree}"
            )
        self.complex = cx
        self.degree = degree
        self.p = p
        n_d = len(cx.dim_simplices(degree))
        bd_d = boundary_matrix(cx, degree, p)
        bd_up = boundary_matrix(cx, degree + 1, p)
        solver = ColumnSolver(n_d, p)
        rep_ids = []
        reps = []
        for col in bd_up.columns():
            solver.add(list(col))
        if degree == 0:
            cycles = [tuple(1 if i == j else 0 for i in range(n_d)) for j in range(n_d)]
        else:
            cycles = kernel_basis(bd_d)
        for z in cycles:
            if solver.add(list(z)):
                rep_ids.append(solver.n_added - 1)
                reps.append(tuple(z))
        self.dim = len(reps)
        self.representatives = tuple(reps)
        self._solver = solver
        self._rep_ids = rep_ids

    def coords_of(self, chain) -> tuple:
        """Class of a cycle in the representative basis; raises on non-cycles."""
        combo = self._solver.coords(list(chain))
        if combo is None:
            raise ValueError("chain is not a cycle modulo the stored boundaries")
        return tuple(combo.get(i, 0) for i in self._rep_ids)

    def __repr__(self):
        return f"HomologySpace(H_{self.degree}, dim {self.dim}, p={self.p})"


def homology(cx: SimplicialComplex, degree: int, p: int) -> HomologySpace:
    return HomologySpace(cx, degree, p)


def chain_matrix(src: SimplicialComplex, dst: SimplicialComplex, vmap, k: int, p: int) -> ModMatrix:
    """Matrix of the simplicial chain map in degree k; collapsing simplices go
    to zero, others carry the sign of the sorting permutation."""
    cols = src.dim_simplices(k)
    rows = dst.dim_simplices(k)
    mat = [[0] * len(cols) for _ in rows]
    for j, simplex in enumerate(cols):
        images = [vmap[v] for v in simplex]
        if len(set(images)) < len(images):
            continue
        ordered = dst.sort_vertices(images)
        if not dst.has_simplex(ordered):
            raise SimplicialMapError(f"image of {simplex!r} is not a simplex")
        # parity of the permutation sorting the images
        perm = [ordered.index(w) for w in images]
        sign = 1
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                if perm[a] > perm[b]:
                    sign = -sign
        mat[dst.index_of(ordered)][j] = sign % p
    return ModMatrix(mat, len(cols), p)


def verify_simplicial(src: SimplicialComplex, dst: SimplicialComplex, vmap) -> None:
    for k, level in src.simplices.items():
        for simplex in level:
            images = set(vmap[v] for v in simplex)
            ordered = dst.sort_vertices(images)
            if not dst.has_simplex(ordered):
                raise SimplicialMapError(f"image of {simplex!r} is not a simplex")


def induced_map(src_space: HomologySpace, dst_space: HomologySpace, vmap) -> ModMatrix:
    """Homology matrix of a simplicial vertex map, representative by
    representative."""
    verify_simplicial(src_space.complex, dst_space.complex, vmap)
    k = src_space.degree
    p = src_space.p
    cm = chain_matrix(src_space.complex, dst_space.complex, vmap, k, p)
    cols = []
    for rep in src_space.representatives:
        image = cm @ ModMatrix([[v] for v in rep], 1, p)
        cols.append(dst_space.coords_of([r[0] for r in image.rows]))
    return ModMatrix.from_columns(cols, dst_space.dim, p)


# ---------------------------------------------------------------------------
# the evaluation engine


class PHEvaluator:
    """Caching engine for one data set: complexes, homology spaces, and
    induced matrices keyed by (vertex set, scale).  Sublevel queries at
    arbitrary exact parameters resolve to the same cached objects, which makes
    interleaving checks cheap."""

    def __init__(self, dataset: DataSet, p: int = 2):
        self.dataset = dataset
        self.p = p
        self.metric = dataset.pseudometric()
        self._cx = {}
        self._hom = {}
        self._incl = {}
        self._vmap = {}

    def dist(self, a, b):
        return self.metric.at(a, b)

    def r_values(self) -> tuple:
        vals = {Fraction(0)}
        vals.update(self.metric.distinct_values())
        return tuple(sorted(vals))

    def s_values(self, m: Measurement) -> tuple:
        vals = sorted(set(m.values))
        return (vals[0] - 1,) + tuple(vals)

    def s_values_union(self, measurements) -> tuple:
        vals = sorted({v for m in measurements for v in m.values})
        return (vals[0] - 1,) + tuple(vals)

    def sublevel(self, m: Measurement, s) -> tuple:
        return tuple(p for p in m.domain if m.at(p) <= s)

    def complex(self, vertices, r, cap) -> SimplicialComplex:
        key = (frozenset(vertices), r, cap)
        if key not in self._cx:
            ordered = tuple(p for p in self.dataset.domain.points if p in key[0])
            self._cx[key] = vr_complex(ordered, self.dist, r, cap)
        return self._cx[key]

    def homology(self, vertices, r, d) -> HomologySpace:
        key = (frozenset(vertices), r, d)
        if key not in self._hom:
            self._hom[key] = HomologySpace(self.complex(vertices, r, d + 1), d, self.p)
        return self._hom[key]

    def inclusion_matrix(self, src_vertices, src_r, dst_vertices, dst_r, d) -> ModMatrix:
        key = (frozenset(src_vertices), src_r, frozenset(dst_vertices), dst_r, d)
        if key not in self._incl:
            src = self.homology(src_vertices, src_r, d)
            dst = self.homology(dst_vertices, dst_r, d)
            vmap = {v: v for v in src.complex.points}
            self._incl[key] = induced_map(src, dst, vmap)
        return self._incl[key]

    def vertexmap_matrix(self, src_vertices, dst_vertices, r, g: PointMap, d) -> ModMatrix:
        key = (frozenset(src_vertices), frozenset(dst_vertices), r, g.image_tuple(), d)
        if key not in self._vmap:
            src = self.homology(src_vertices, r, d)
            dst = self.homology(dst_vertices, r, d)
            self._vmap[key] = induced_map(src, dst, {v: g(v) for v in src.complex.points})
        return self._vmap[key]


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class CriticalGrid:
    r_values: tuple
    s_values: tuple

    def floor_r(self, r):
        cand = [v for v in self.r_values if v <= r]
        if not cand:
            raise ValueError(f"scale {r} below the grid")
        return cand[-1]

    def floor_s(self, s):
        cand = [v for v in self.s_values if v <= s]
        if not cand:
            raise ValueError(f"level {s} below the grid sentinel")
        return cand[-1]


def critical_grid(dataset: DataSet, m: Measurement) -> CriticalGrid:
    ev = PHEvaluator(dataset)
    return CriticalGrid(ev.r_values(), ev.s_values(dataset.find(m)))


class BigradedPersistence:
    """Homology of one measurement over the whole critical grid, with the
    right and up internal matrices; grid squares are verified to commute."""

    __slots__ = ("dataset", "measurement", "degree", "p", "grid", "spaces", "right", "up", "evaluator")

    def __init__(self, dataset, measurement, degree, p, grid, spaces, right, up, evaluator):
        self.dataset = dataset
        self.measurement = measurement
        self.degree = degree
        self.p = p
        self.grid = grid
        self.spaces = spaces
        self.right = right
        self.up = up
        self.evaluator = evaluator

    def dims(self):
        return [[sp.dim for sp in row] for row in self.spaces]

    def space_at(self, r, s) -> HomologySpace:
        i = self.grid.r_values.index(self.grid.floor_r(r))
        j = self.grid.s_values.index(self.grid.floor_s(s))
        return self.spaces[i][j]

    def verify_squares(self) -> bool:
        nr, ns = len(self.grid.r_values), len(self.grid.s_values)
        for i in range(nr - 1):
            for j in range(ns - 1):
                upper = self.up[i + 1][j] @ self.right[i][j]
                lower = self.right[i][j + 1] @ self.up[i][j]
                if upper != lower:
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, BigradedPersistence)
            and self.degree == other.degree
            and self.p == other.p
            and self.grid == other.grid
            and self.dims() == other.dims()
            and self.right == other.right
            and self.up == other.up
        )

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "p": self.p,
            "r": [format_rational(v) for v in self.grid.r_values],
            "s": [format_rational(v) for v in self.grid.s_values],
            "dims": self.dims(),
            "maps": {
                "right_ranks": [[m.rank() for m in row] for row in self.right],
                "up_ranks": [[m.rank() for m in row] for row in self.up],
            },
        }


def ph_grid(
    dataset: DataSet,
    measurement: Measurement,
    degree: int,
    p: int,
    r_values=None,
    s_values=None,
    evaluator: PHEvaluator = None,
) -> BigradedPersistence:
    """Evaluate homology at every grid corner and the internal step maps."""
    m = dataset.find(measurement)
    ev = evaluator if evaluator is not None else PHEvaluator(dataset, p)
    rv = tuple(r_values) if r_values is not None else ev.r_values()
    sv = tuple(s_values) if s_values is not None else ev.s_values(m)
    grid = CriticalGrid(rv, sv)
    subs = [ev.sublevel(m, s) for s in sv]
    spaces = [[ev.homology(subs[j], r, degree) for j in range(len(sv))] for r in rv]
    right = [
        [ev.inclusion_matrix(subs[j], rv[i], subs[j], rv[i + 1], degree) for j in range(len(sv))]
        for i in range(len(rv) - 1)
    ]
    up = [
        [ev.inclusion_matrix(subs[j], rv[i], subs[j + 1], rv[i], degree) for j in range(len(sv) - 1)]
        for i in range(len(rv))
    ]
    bp = BigradedPersistence(dataset, m, degree, p, grid, spaces, right, up, ev)
    assert bp.verify_squares(), "internal grid squares do not commute"
    return bp


class GridMap:
    """A matrix at every grid corner between two bigraded persistences that
    share a grid."""

    __slots__ = ("grid", "mats", "source", "target")

    def __init__(self, grid, mats, source, target):
        self.grid = grid
        self.mats = mats
        self.source = source
        self.target = target

    def at(self, i, j) -> ModMatrix:
        return self.mats[i][j]

    def __matmul__(self, other: "GridMap") -> "GridMap":
        if self.grid != other.grid:
            raise ValueError("grid mismatch")
        mats = [
            [self.mats[i][j] @ other.mats[i][j] for j in range(len(self.grid.s_values))]
            for i in range(len(self.grid.r_values))
        ]
        return GridMap(self.grid, mats, other.source, self.target)

    def __eq__(self, other):
        return (
            isinstance(other, GridMap)
            and self.grid == other.grid
            and self.mats == other.mats
        )

    def is_natural(self) -> bool:
        """Commutation with the internal right and up maps on both sides."""
        nr, ns = len(self.grid.r_values), len(self.grid.s_values)
        for i in range(nr - 1):
            for j in range(ns):
                if self.target.right[i][j] @ self.mats[i][j] != self.mats[i + 1][j] @ self.source.right[i][j]:
                    return False
        for i in range(nr):
            for j in range(ns - 1):
                if self.target.up[i][j] @ self.mats[i][j] != self.mats[i][j + 1] @ self.source.up[i][j]:
                    return False
        return True

    def ranks(self):
        return [[m.rank() for m in row] for row in self.mats]


def ph_map(source_bp: BigradedPersistence, target_bp: BigradedPersistence, realization: PointMap) -> GridMap:
    """Grid of homology matrices induced by a realization f: Y -> X of a
    geometric function; source is the persistence of the image measurement on
    Y, target the persistence of the preimage measurement on X."""
    if source_bp.grid != target_bp.grid:
        raise ValueError("the two persistences must be evaluated on one grid")
    cache = {}
    mats = []
    for i in range(len(source_bp.grid.r_values)):
        row = []
        for j in range(len(source_bp.grid.s_values)):
            src = source_bp.spaces[i][j]
            dst = target_bp.spaces[i][j]
            key = (id(src), id(dst))
            if key not in cache:
                cache[key] = induced_map(src, dst, {v: realization(v) for v in src.complex.points})
            row.append(cache[key])
        mats.append(row)
    return GridMap(source_bp.grid, mats, source_bp, target_bp)


def ph_functor(inc, degree: int, p: int, r_values=None, s_values=None) -> GraphFunctor:
    """Persistence of every measurement plus, per edge (phi, g, phi.g), the
    matrix grid induced by g from the persistence of phi.g to that of phi.

    All objects share one grid (the union of critical values), so arrows
    compose as plain matrices; functoriality over composites is verified for
    monoid incarnations by GraphFunctor.verify.
    """
    ev = PHEvaluator(inc.dataset, p)
    rv = tuple(r_values) if r_values is not None else ev.r_values()
    sv = tuple(s_values) if s_values is not None else ev.s_values_union(inc.dataset)
    objects = {
        m: ph_grid(inc.dataset, m, degree, p, r_values=rv, s_values=sv, evaluator=ev)
        for m in inc.dataset
    }
    graph = build_graph(inc)
    arrows = {}
    for (m, g, mg) in graph.edges:
        src_bp, dst_bp = objects[mg], objects[m]
        mats = []
        for i, r in enumerate(rv):
            row = []
            for j, s in enumerate(sv):
                row.append(
                    ev.vertexmap_matrix(
                        src_bp.spaces[i][j].complex.points,
                        dst_bp.spaces[i][j].complex.points,
                        r,
                        g,
                        degree,
                    )
                )
            mats.append(row)
        arrows[(m, g, mg)] = GridMap(src_bp.grid, mats, src_bp, dst_bp)
    functor = GraphFunctor(graph, objects, arrows)
    if inc.kind in ("monoid", "group"):
        assert functor.verify(lambda a, b: a * b), "persistence functor not functorial"
    return functor


# ---------------------------------------------------------------------------
# interleaving


@dataclass(frozen=True)
class InterleavingResult:
    upper: Fraction
    lower: Fraction = None
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower is not None and self.lower > self.upper:
            raise AssertionError("certified lower bound exceeds the upper bound")


def interleave_upper(
    dataset: DataSet,
    phi: Measurement,
    psi: Measurement,
    degree: int,
    p: int,
    evaluator: PHEvaluator = None,
) -> InterleavingResult:
    """Certify the shift maps induced by sublevel inclusions at distance
    epsilon = sup |phi - psi|.

    At every grid point both interleaving triangles are checked, along with
    commutation of the shift maps with the internal maps in both directions.
    Failure of any check is an internal error: the inclusions always provide
    an epsilon-interleaving.
    """
    phi, psi = dataset.find(phi), dataset.find(psi)
    ev = evaluator if evaluator is not None else PHEvaluator(dataset, p)
    eps = sup_distance(phi, psi)
    rv = ev.r_values()
    sv = tuple(sorted(set(ev.s_values(phi)) | set(ev.s_values(psi))))
    triangles = squares = 0
    seen = set()

    def incl(sub_a, r_a, sub_b, r_b):
        assert set(sub_a) <= set(sub_b), "sublevel inclusion violated"
        return ev.inclusion_matrix(sub_a, r_a, sub_b, r_b, degree)

    for s in sv:
        for a, b in ((phi, psi), (psi, phi)):
            A0 = ev.sublevel(a, s)
            B1 = ev.sublevel(b, s + eps)
            A2 = ev.sublevel(a, s + 2 * eps)
            for r in rv:
                key = (frozenset(A0), frozenset(B1), frozenset(A2), r, a is phi)
                if key in seen:
                    continue
                seen.add(key)
                f = incl(A0, r, B1, r)
                g = incl(B1, r, A2, r)
                if g @ f != incl(A0, r, A2, r):
                    raise AssertionError("interleaving triangle does not commute")
                triangles += 1
            for ri in range(len(rv) - 1):
                f0 = incl(A0, rv[ri], B1, rv[ri])
                f1 = incl(A0, rv[ri + 1], B1, rv[ri + 1])
                if incl(B1, rv[ri], B1, rv[ri + 1]) @ f0 != f1 @ incl(A0, rv[ri], A0, rv[ri + 1]):
                    raise AssertionError("shift maps not natural in the scale direction")
                squares += 1
    for si in range(len(sv) - 1):
        for a, b in ((phi, psi), (psi, phi)):
            A0, A1 = ev.sublevel(a, sv[si]), ev.sublevel(a, sv[si + 1])
            B0, B1 = ev.sublevel(b, sv[si] + eps), ev.sublevel(b, sv[si + 1] + eps)
            for r in rv:
                key = (frozenset(A0), frozenset(A1), frozenset(B0), frozenset(B1), r, a is phi)
                if key in seen:
                    continue
                seen.add(key)
                lhs = incl(B0, r, B1, r) @ incl(A0, r, B0, r)
                rhs = incl(A1, r, B1, r) @ incl(A0, r, A1, r)
                if lhs != rhs:
                    raise AssertionError("shift maps not natural in the level direction")
                squares += 1
    return InterleavingResult(
        upper=eps,
        certificate={"triangles": triangles, "squares": squares, "epsilon": format_rational(eps)},
    )


# ---------------------------------------------------------------------------
# one-parameter slices and the bottleneck lower bound


def slice_barcode(dataset: DataSet, m: Measurement, degree: int, p: int, r) -> list:
    """Intervals [birth, death) in the level direction at a fixed scale,
    by standard column reduction of the filtered boundary matrix."""
    if r < 0:
        raise ValueError("scale parameter must be nonnegative")
    m = dataset.find(m)
    metric = dataset.pseudometric()
    pts = m.domain.points
    simplices = []
    for k in range(degree + 2):
        for combo in itertools.combinations(pts, k + 1):
            if all(metric.at(a, b) <= r for a, b in itertools.combinations(combo, 2)):
                entry = max(m.at(v) for v in combo)
                simplices.append((entry, k, combo))
    simplices.sort(key=lambda t: (t[0], t[1], t[2]))
    pos = {s: i for i, (_, _, s) in enumerate(simplices)}
    entries = [t[0] for t in simplices]
    dims = [t[1] for t in simplices]

    def boundary(simplex):
        col = {}
        if len(simplex) > 1:
            for i in range(len(simplex)):
                face = simplex[:i] + simplex[i + 1 :]
                col[pos[face]] = (-1) ** i % p
        return col

    reduced = {}
    low_owner = {}
    killer_of = {}
    for j, (_, _, simplex) in enumerate(simplices):
        col = boundary(simplex)
        while col:
            low = max(col)
            if low not in low_owner:
                break
            other = reduced[low_owner[low]]
            factor = col[low] * pow(other[low], p - 2, p) % p
            for i, v in other.items():
                nv = (col.get(i, 0) - factor * v) % p
                if nv:
                    col[i] = nv
                elif i in col:
                    del col[i]
        if col:
            low = max(col)
            low_owner[low] = j
            reduced[j] = col
            killer_of[low] = j
    bars = []
    for j, (_, k, _) in enumerate(simplices):
        if k != degree or j in reduced:
            continue  # not a creator in this degree
        birth = entries[j]
        death = entries[killer_of[j]] if j in killer_of else INF
        if death != birth:
            bars.append((birth, death))
    bars.sort(key=lambda b: (b[0], b[1] == INF, b[1] if b[1] != INF else 0))
    return bars


def _perfect_matching(left, edges) -> bool:
    """Kuhn's augmenting-path bipartite matching; True if all of left matches."""
    match_r = {}

    def try_assign(u, visited):
        for v in edges.get(u, ()):
            if v in visited:
                continue
            visited.add(v)
            if v not in match_r or try_assign(match_r[v], visited):
                match_r[v] = u
                return True
        return False

    for u in range(left):
        if not try_assign(u, set()):
            return False
    return True


def bottleneck_distance(bars_a, bars_b):
    """Exact bottleneck distance between two interval lists; infinite-death
    bars must match each other by birth."""
    fin_a = [b for b in bars_a if b[1] != INF]
    fin_b = [b for b in bars_b if b[1] != INF]
    inf_a = sorted(b[0] for b in bars_a if b[1] == INF)
    inf_b = sorted(b[0] for b in bars_b if b[1] == INF)
    if len(inf_a) != len(inf_b):
        return INF

    def cost(x, y):
        return max(abs(x[0] - y[0]), abs(x[1] - y[1]))

    halves_a = [(d - b) / 2 for b, d in fin_a]
    halves_b = [(d - b) / 2 for b, d in fin_b]
    candidates = {Fraction(0)}
    candidates.update(abs(x - y) for x, y in itertools.product(inf_a, inf_b))
    candidates.update(cost(x, y) for x, y in itertools.product(fin_a, fin_b))
    candidates.update(halves_a)
    candidates.update(halves_b)

    na, nb = len(fin_a), len(fin_b)

    def feasible(eps):
        # infinite bars: plain perfect matching on |birth difference|
        edges = {
            i: [j for j, y in enumerate(inf_b) if abs(inf_a[i] - y) <= eps]
            for i in range(len(inf_a))
        }
        if not _perfect_matching(len(inf_a), edges):
            return False
        # finite bars: left = fin_a + proxies of fin_b, right = fin_b + proxies of fin_a
        edges = {}
        for i, x in enumerate(fin_a):
            opts = [j for j, y in enumerate(fin_b) if cost(x, y) <= eps]
            if halves_a[i] <= eps:
                opts.append(nb + i)  # own diagonal slot
            edges[i] = opts
        for jj in range(nb):
            opts = [jj] if halves_b[jj] <= eps else []
            opts.extend(range(nb, nb + na))  # proxy-to-proxy is free
            edges[na + jj] = opts
        return _perfect_matching(na + nb, edges)

    for eps in sorted(candidates):
        if feasible(eps):
            return eps
    return INF


def bottleneck_lower(dataset: DataSet, phi: Measurement, psi: Measurement, degree: int, p: int):
    """Largest per-scale bottleneck distance between the level-direction
    barcodes; a certified lower bound for the interleaving distance."""
    ev = PHEvaluator(dataset, p)
    best = Fraction(0)
    for r in ev.r_values():
        d = bottleneck_distance(
            slice_barcode(dataset, phi, degree, p, r),
            slice_barcode(dataset, psi, degree, p, r),
        )
        if d == INF:
            return INF
        best = max(best, d)
    return best


def interleaving_bounds(dataset, phi, psi, degree, p) -> InterleavingResult:
    upper = interleave_upper(dataset, phi, psi, degree, p)
    lower = bottleneck_lower(dataset, phi, psi, degree, p)
    return InterleavingResult(upper=upper.upper, lower=lower, certificate=upper.certificate)


# ---------------------------------------------------------------------------
# superlevel duality under negation


def superlevel_duality_check(dataset: DataSet, phi: Measurement, degree: int, p: int) -> bool:
    """Dimensions and internal ranks of the negated data set's persistence
    must match the superlevel-set persistence computed directly."""
    from .core import ValueMap, change_units

    phi = dataset.find(phi)
    neg_ds, to_image = change_units(ValueMap.negate(), dataset)
    bp = ph_grid(neg_ds, to_image[phi], degree, p)
    ev = PHEvaluator(dataset, p)
    if ev.r_values() != bp.grid.r_values:
        return False
    rv, sv = bp.grid.r_values, bp.grid.s_values
    supers = [tuple(x for x in dataset.domain if phi.at(x) >= -s) for s in sv]
    for i, r in enumerate(rv):
        for j in range(len(sv)):
            if ev.homology(supers[j], r, degree).dim != bp.spaces[i][j].dim:
                return False
    for i in range(len(rv) - 1):
        for j in range(len(sv)):
            direct = ev.inclusion_matrix(supers[j], rv[i], supers[j], rv[i + 1], degree)
            if direct.rank() != bp.right[i][j].rank():
                return False
    for i in range(len(rv)):
        for j in range(len(sv) - 1):
            direct = ev.inclusion_matrix(supers[j], rv[i], supers[j + 1], rv[i], degree)
            if direct.rank() != bp.up[i][j].rank():
                return False
    return True

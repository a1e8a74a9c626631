"""Shared fixtures, random instance generators, and independent oracles."""

import itertools
import random
from fractions import Fraction

import pytest

from enriched_ph import DataSet, Domain, Incarnation, PointMap

HALF_LATTICE = [Fraction(k, 2) for k in range(-6, 7)]


# ---------------------------------------------------------------------------
# reference fixtures


@pytest.fixture
def fixture_a():
    dom = Domain(["x1", "x2", "x3", "x4"])
    phi = ("phi", ["-1", "0", "0", "1"])
    psi = ("psi", ["0", "1", "-1", "0"])
    return {
        "domain": dom,
        "phi_only": DataSet(dom, [phi]),
        "both": DataSet(dom, [phi, psi]),
    }


@pytest.fixture
def fixture_b():
    dom = Domain(["x1", "x2", "x3"])
    ds = DataSet(dom, [("phi1", [2, 2, 3]), ("phi2", [2, 2, 2]), ("phi3", [1, 2, 2])])
    ops = {
        "id": PointMap.identity(dom),
        "g1": PointMap(dom, dom, {"x1": "x2", "x2": "x2", "x3": "x3"}, ("g1",)),
        "g2": PointMap(dom, dom, {"x1": "x2", "x2": "x2", "x3": "x2"}, ("g2",)),
        "g3": PointMap(dom, dom, {"x1": "x1", "x2": "x2", "x3": "x2"}, ("g3",)),
    }
    inc = Incarnation(ds, ops.values())
    return {"domain": dom, "dataset": ds, "ops": ops, "incarnation": inc}


@pytest.fixture
def fixture_c():
    dom = Domain(["x1", "x2"])
    left = DataSet(dom, [("one", [1, 1]), ("two", [2, 2])])
    right = DataSet(dom, [("neg", [-1, -1]), ("pos", [1, 1])])
    alpha = {left.by_name("one"): right.by_name("neg"), left.by_name("two"): right.by_name("pos")}
    return {"domain": dom, "left": left, "right": right, "alpha": alpha}


# ---------------------------------------------------------------------------
# random instances


def random_dataset(rng: random.Random, max_points=6, max_meas=4, min_points=2, min_meas=1) -> DataSet:
    n = rng.randint(min_points, max_points)
    dom = Domain([f"x{i}" for i in range(1, n + 1)])
    k = rng.randint(min_meas, max_meas)
    vecs = set()
    while len(vecs) < k:
        vecs.add(tuple(rng.choice(HALF_LATTICE) for _ in range(n)))
    return DataSet(dom, [(f"f{i}", v) for i, v in enumerate(sorted(vecs))])


def random_point_map(rng: random.Random, src: Domain, tgt: Domain) -> PointMap:
    return PointMap(src, tgt, {p: rng.choice(tgt.points) for p in src})


def random_incarnation(rng: random.Random, max_points=4, max_ops=3, max_meas=8) -> Incarnation:
    """Data set closed under a few random endomorphisms, which then act on it."""
    while True:
        n = rng.randint(2, max_points)
        dom = Domain([f"x{i}" for i in range(1, n + 1)])
        ops = [random_point_map(rng, dom, dom) for _ in range(rng.randint(0, max_ops))]
        if rng.random() < 0.4:
            ops.append(PointMap.identity(dom))
        seeds = {
            tuple(rng.choice(HALF_LATTICE) for _ in range(n))
            for _ in range(rng.randint(1, 3))
        }
        meas = set(seeds)
        frontier = list(seeds)
        while frontier and len(meas) <= max_meas:
            cur = frontier.pop()
            for g in ops:
                img = tuple(cur[dom.index(g(p))] for p in dom.points)
                if img not in meas:
                    meas.add(img)
                    frontier.append(img)
        if len(meas) > max_meas:
            continue
        ds = DataSet(dom, [(None, v) for v in sorted(meas)])
        return Incarnation(ds, ops)


def random_permutation(rng: random.Random, dom: Domain) -> PointMap:
    images = list(dom.points)
    rng.shuffle(images)
    return PointMap(dom, dom, dict(zip(dom.points, images)))


def cyclic_group(g: PointMap) -> list:
    """Powers of a bijection, as a list starting at the identity."""
    out = [PointMap.identity(g.source)]
    cur = g
    while cur != out[0]:
        out.append(cur)
        cur = g * cur
    return out


def random_transitive_group_incarnation(rng: random.Random, max_points=5):
    """Orbit of one measurement under a cyclic permutation group."""
    while True:
        n = rng.randint(2, max_points)
        dom = Domain([f"x{i}" for i in range(1, n + 1)])
        group = cyclic_group(random_permutation(rng, dom))
        seed = tuple(rng.choice(HALF_LATTICE) for _ in range(n))
        orbit = set()
        for g in group:
            orbit.add(tuple(seed[dom.index(g(p))] for p in dom.points))
        ds = DataSet(dom, [(None, v) for v in sorted(orbit)])
        inc = Incarnation(ds, group)
        if inc.kind == "group":
            return inc


# ---------------------------------------------------------------------------
# independent homology oracle: full boundary matrices, simple row reduction


def oracle_rank(rows, p: int) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c] % p, p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c] % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def oracle_homology_dim(vertices, dist, r, d: int, p: int) -> int:
    """dim H_d of the Vietoris-Rips complex, built from scratch."""
    verts = list(vertices)

    def level(k):
        return [
            c
            for c in itertools.combinations(verts, k + 1)
            if all(dist(a, b) <= r for a, b in itertools.combinations(c, 2))
        ]

    s_low = level(d - 1) if d > 0 else []
    s_mid = level(d)
    s_high = level(d + 1)
    if not s_mid:
        return 0
    idx_low = {s: i for i, s in enumerate(s_low)}
    idx_mid = {s: i for i, s in enumerate(s_mid)}
    bd = [[0] * len(s_mid) for _ in s_low]
    for j, s in enumerate(s_mid):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            if face:
                bd[idx_low[face]][j] = (-1) ** i % p
    bd_up = [[0] * len(s_high) for _ in s_mid]
    for j, s in enumerate(s_high):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            bd_up[idx_mid[face]][j] = (-1) ** i % p
    rank_down = oracle_rank(bd, p) if s_low else 0
    rank_up = oracle_rank(bd_up, p) if s_high else 0
    return len(s_mid) - rank_down - rank_up


def oracle_matching(left_count: int, adjacency) -> bool:
    """Perfect matching by brute augmenting paths, independent of the library."""
    match = {}

    def augment(u, seen):
        for v in adjacency.get(u, ()):
            if v in seen:
                continue
            seen.add(v)
            if v not in match or augment(match[v], seen):
                match[v] = u
                return True
        return False

    return all(augment(u, set()) for u in range(left_count))

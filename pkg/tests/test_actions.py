import itertools
import json
import random

import pytest

from enriched_ph import (
    DataSet,
    Domain,
    GuardExceeded,
    Incarnation,
    NotOperation,
    PointMap,
    block_incarnation,
    blocks,
    deformation_closure,
    dimension,
    enumerate_aut,
    enumerate_bases,
    enumerate_end,
    find_basis,
    generated_submonoid,
    indistinguishable,
    is_independent,
    is_operation,
    universal_incarnation,
)
from conftest import random_incarnation, random_permutation, random_transitive_group_incarnation


def two_orbit_group():
    """Swap of two point pairs acting on two separate measurement orbits."""
    dom = Domain(["a", "b", "c", "d"])
    swap = PointMap(dom, dom, {"a": "b", "b": "a", "c": "d", "d": "c"})
    ds = DataSet(
        dom,
        [("u", [0, 1, 5, 5]), ("u2", [1, 0, 5, 5]), ("v", [7, 7, 2, 3]), ("v2", [7, 7, 3, 2])],
    )
    return Incarnation(ds, [PointMap.identity(dom), swap])


# ---------------------------------------------------------------------------
# operation checks and enumeration


def test_fixture_b_operations(fixture_b):
    ds = fixture_b["dataset"]
    for name in ("g1", "g2", "g3", "id"):
        assert is_operation(fixture_b["ops"][name], ds)


def test_identity_always_operation(fixture_a):
    ds = fixture_a["both"]
    assert is_operation(PointMap.identity(ds.domain), ds)


def test_transposition_not_operation(fixture_a):
    ds = fixture_a["phi_only"]
    g = PointMap(ds.domain, ds.domain, {"x1": "x4", "x2": "x2", "x3": "x3", "x4": "x1"})
    assert not is_operation(g, ds)  # phi.g = (1,0,0,-1) is not in the set


def test_enumerate_aut_full_symmetric_group():
    dom = Domain(["a", "b", "c"])
    base = [0, 1, 2]
    ds = DataSet(dom, [(None, p) for p in itertools.permutations(base)])
    aut = enumerate_aut(ds)
    assert len(aut.ops) == 6
    end = enumerate_end(ds)
    assert set(aut.ops) <= set(end.ops)


def test_enumerate_end_rigid_measurement():
    dom = Domain(["a", "b", "c"])
    ds = DataSet(dom, [("f", [0, 1, 3])])
    assert [g.image_tuple() for g in enumerate_end(ds).ops] == [("a", "b", "c")]


def test_enumerate_end_contains_fixture_b_monoid(fixture_b):
    end = enumerate_end(fixture_b["dataset"])
    assert set(fixture_b["incarnation"].ops) <= set(end.ops)


def test_enumerate_guard():
    dom = Domain([f"x{i}" for i in range(7)])
    ds = DataSet(dom, [("f", [0] * 7)])
    with pytest.raises(GuardExceeded):
        enumerate_end(ds)
    small = DataSet(Domain(["a", "b", "c"]), [("f", [0, 0, 0])])
    with pytest.raises(GuardExceeded):
        enumerate_end(small, guard=2)
    assert len(enumerate_end(small, guard=3).ops) == 27  # override admits it


# ---------------------------------------------------------------------------
# generated submonoid


def test_generated_submonoid_empty():
    dom = Domain(["a", "b"])
    assert generated_submonoid([], domain=dom) == (PointMap.identity(dom),)


def test_generated_submonoid_fixture_b_closed(fixture_b):
    gens = [fixture_b["ops"][n] for n in ("g1", "g2", "g3")]
    closure = generated_submonoid(gens)
    assert set(closure) == set(fixture_b["incarnation"].ops)


def test_generated_submonoid_three_cycle():
    dom = Domain(["a", "b", "c"])
    cycle = PointMap(dom, dom, {"a": "b", "b": "c", "c": "a"})
    closure = generated_submonoid([cycle])
    assert len(closure) == 3
    ident = PointMap.identity(dom)
    assert all(any(g * h == ident for h in closure) for g in closure)


def test_group_like_closure_has_inverses():
    rng = random.Random(21)
    for _ in range(10):
        dom = Domain([f"x{i}" for i in range(rng.randint(2, 5))])
        gens = [random_permutation(rng, dom) for _ in range(rng.randint(1, 2))]
        closure = generated_submonoid(gens)
        ident = PointMap.identity(dom)
        assert all(any(g * h == ident and h * g == ident for h in closure) for g in closure)


# ---------------------------------------------------------------------------
# incarnation kinds


def test_fixture_b_kind_is_monoid(fixture_b):
    assert fixture_b["incarnation"].kind == "monoid"


def test_kind_group():
    assert two_orbit_group().kind == "group"


def test_kind_group_like():
    dom = Domain(["a", "b", "c"])
    cycle = PointMap(dom, dom, {"a": "b", "b": "c", "c": "a"})
    ds = DataSet(dom, [(None, p) for p in itertools.permutations([0, 1, 2])])
    inc = Incarnation(ds, [cycle])  # no identity, not closed
    assert inc.kind == "group-like"


def test_kind_general(fixture_b):
    inc = Incarnation(fixture_b["dataset"], [fixture_b["ops"]["g1"], fixture_b["ops"]["g2"]])
    assert inc.kind == "general"


def test_non_operation_rejected(fixture_a):
    ds = fixture_a["phi_only"]
    g = PointMap(ds.domain, ds.domain, {"x1": "x4", "x2": "x2", "x3": "x3", "x4": "x1"})
    with pytest.raises(NotOperation):
        Incarnation(ds, [g])


def test_empty_operation_set_allowed(fixture_a):
    inc = Incarnation(fixture_a["both"], [])
    assert deformation_closure([m for m in inc.dataset][:1], inc) == tuple(inc.dataset)[:1]
    assert all(len(b) == 1 for b in blocks(inc))


def test_incarnation_json_round_trip(fixture_b):
    inc = fixture_b["incarnation"]
    again = Incarnation.from_json_dict(json.loads(json.dumps(inc.to_json_dict())))
    assert again == inc
    assert again.kind == "monoid"


# ---------------------------------------------------------------------------
# deformation closure


def test_closure_of_everything_is_everything(fixture_b):
    inc = fixture_b["incarnation"]
    assert set(deformation_closure(inc.dataset, inc)) == set(inc.dataset)


def test_closure_fixture_b_values(fixture_b):
    inc = fixture_b["incarnation"]
    ds = fixture_b["dataset"]
    assert {m.name for m in deformation_closure([ds.by_name("phi1")], inc)} == {"phi1", "phi2"}
    assert set(deformation_closure([ds.by_name("phi1"), ds.by_name("phi3")], inc)) == set(ds)


def test_closure_equals_closure_over_monoid():
    rng = random.Random(22)
    for _ in range(30):
        inc = random_incarnation(rng)
        monoid = Incarnation(inc.dataset, inc.monoid_closure())
        for m in inc.dataset:
            assert deformation_closure([m], inc) == deformation_closure([m], monoid)


# ---------------------------------------------------------------------------
# blocks


def test_blocks_identity_only(fixture_a):
    inc = Incarnation(fixture_a["both"], [PointMap.identity(fixture_a["domain"])])
    assert all(len(b) == 1 for b in blocks(inc))
    assert len(blocks(inc)) == 2


def test_blocks_fixture_b_transitive(fixture_b):
    part = blocks(fixture_b["incarnation"])
    assert len(part) == 1
    assert set(part.blocks[0]) == set(fixture_b["dataset"])


def test_blocks_two_orbits():
    inc = two_orbit_group()
    part = blocks(inc)
    assert len(part) == 2
    assert sorted(len(b) for b in part) == [2, 2]


def test_blocks_equal_blocks_over_closure_and_union_find_oracle():
    rng = random.Random(23)
    for _ in range(30):
        inc = random_incarnation(rng)
        part = blocks(inc)
        monoid = Incarnation(inc.dataset, inc.monoid_closure())
        assert blocks(monoid).blocks == part.blocks
        # oracle: one-step union-find, repeated to a fixed point
        groups = {m: {m} for m in inc.dataset}
        changed = True
        while changed:
            changed = False
            for m in inc.dataset:
                for g in inc.ops:
                    a, b = groups[m], groups[inc.act(m, g)]
                    if a is not b:
                        union = a | b
                        for x in union:
                            groups[x] = union
                        changed = True
        oracle = {frozenset(v) for v in groups.values()}
        assert {frozenset(b) for b in part} == oracle


# ---------------------------------------------------------------------------
# independence, bases, dimension


def test_transitive_group_dimension_one():
    rng = random.Random(24)
    for _ in range(10):
        inc = random_transitive_group_incarnation(rng)
        assert dimension(inc) == 1
        assert all((m,) in enumerate_bases(inc) for m in inc.dataset)


def test_fixture_b_basis(fixture_b):
    inc = fixture_b["incarnation"]
    basis = find_basis(inc)
    assert {m.name for m in basis} == {"phi1", "phi3"}
    assert dimension(inc) == 2
    assert is_independent(basis, inc)


def test_group_incarnation_basis_is_block_transversal():
    rng = random.Random(25)
    checked = 0
    while checked < 12:
        inc = random_incarnation(rng, max_points=4, max_ops=2, max_meas=6)
        bij = [g for g in inc.ops if g.is_bijective]
        if not bij:
            continue
        inc = Incarnation(inc.dataset, generated_submonoid(bij))
        if inc.kind != "group":
            continue
        checked += 1
        part = blocks(inc)
        assert dimension(inc) == len(part)
        bases = {frozenset(b) for b in enumerate_bases(inc)}
        transversals = {frozenset(t) for t in itertools.product(*[list(b) for b in part])}
        assert bases == transversals


def test_all_bases_same_cardinality_random():
    rng = random.Random(26)
    for _ in range(25):
        inc = random_incarnation(rng)
        bases = enumerate_bases(inc)
        assert bases, "every incarnation has a basis"
        sizes = {len(b) for b in bases}
        assert sizes == {dimension(inc)}
        fb = find_basis(inc)
        assert set(map(frozenset, bases)) >= {frozenset(fb)}


def test_enumerate_bases_guard(fixture_b):
    with pytest.raises(GuardExceeded):
        enumerate_bases(fixture_b["incarnation"], guard=2)


# ---------------------------------------------------------------------------
# indistinguishability


def test_indistinguishable_reflexive(fixture_b):
    inc = fixture_b["incarnation"]
    for m in inc.dataset:
        assert indistinguishable(m, m, inc)


def test_indistinguishable_fixture_b(fixture_b):
    inc = fixture_b["incarnation"]
    ds = fixture_b["dataset"]
    assert not indistinguishable(ds.by_name("phi1"), ds.by_name("phi2"), inc)


def test_group_indistinguishable_is_same_orbit():
    rng = random.Random(27)
    for _ in range(10):
        inc = random_transitive_group_incarnation(rng)
        for a in inc.dataset:
            for b in inc.dataset:
                same_orbit = any(inc.act(a, g) == b for g in inc.ops)
                assert indistinguishable(a, b, inc) == same_orbit


# ---------------------------------------------------------------------------
# block incarnations


def test_block_incarnation_transitive_is_self(fixture_b):
    inc = fixture_b["incarnation"]
    sub = block_incarnation(inc, fixture_b["dataset"].by_name("phi2"))
    assert sub.dataset == inc.dataset
    assert set(sub.ops) == set(inc.ops)


def test_block_incarnation_identity_only(fixture_a):
    inc = Incarnation(fixture_a["both"], [PointMap.identity(fixture_a["domain"])])
    phi = fixture_a["both"].by_name("phi")
    sub = block_incarnation(inc, phi)
    assert len(sub.dataset) == 1
    assert phi in sub.dataset


def test_block_incarnation_two_orbits():
    inc = two_orbit_group()
    for m in inc.dataset:
        sub = block_incarnation(inc, m)
        assert len(blocks(sub)) == 1
        assert dimension(sub) == 1


def test_universal_incarnation(fixture_b):
    uni = universal_incarnation(fixture_b["dataset"])
    assert uni.kind == "monoid"
    assert set(fixture_b["incarnation"].ops) <= set(uni.ops)


def test_group_like_dimension_equals_block_count():
    rng = random.Random(28)
    checked = 0
    while checked < 10:
        inc = random_incarnation(rng, max_points=4, max_ops=2, max_meas=6)
        bij = [g for g in inc.ops if g.is_bijective and g != PointMap.identity(inc.dataset.domain)]
        if not bij:
            continue
        inc = Incarnation(inc.dataset, bij)  # no identity: group-like, not a monoid
        if inc.kind != "group-like":
            continue
        checked += 1
        part = blocks(inc)
        assert dimension(inc) == len(part)
        bases = {frozenset(b) for b in enumerate_bases(inc)}
        transversals = {frozenset(t) for t in itertools.product(*[list(b) for b in part])}
        assert bases == transversals

"""Operations on data sets and the structures they generate.

An operation is an endomorphism of the domain that sends every measurement
back into the data set by precomposition.  A chosen set of verified operations
attached to a data set is an incarnation; this module computes its kind,
deformation closures, blocks, independent sets, bases, and dimension.
"""

import itertools
from dataclasses import dataclass

from .core import DataSet, Measurement, PointMap
from .errors import DomainMismatch, GuardExceeded, NotOperation

DEFAULT_ENUM_GUARD = 6


def is_operation(g: PointMap, dataset: DataSet) -> bool:
    """True when phi . g stays in the data set for every measurement phi."""
    if g.source != dataset.domain or g.target != dataset.domain:
        raise DomainMismatch("operation must be an endomorphism of the data set domain")
    return all(m.compose(g) in dataset for m in dataset)


@dataclass(frozen=True)
class OperationSet:
    dataset: DataSet
    ops: tuple

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)

    def __contains__(self, g):
        return g in self.ops


def _all_endomorphisms(domain):
    pts = domain.points
    for images in itertools.product(pts, repeat=len(pts)):
        yield PointMap(domain, domain, dict(zip(pts, images)))


def enumerate_end(dataset: DataSet, guard: int = DEFAULT_ENUM_GUARD) -> OperationSet:
    """All operations of the data set, in canonical (image-tuple) order."""
    n = len(dataset.domain)
    if n > guard:
        raise GuardExceeded(f"|X|={n} exceeds enumeration guard {guard}")
    ops = tuple(g for g in _all_endomorphisms(dataset.domain) if is_operation(g, dataset))
    found = set(ops)
    assert PointMap.identity(dataset.domain) in found
    # closure holds by construction; spot-check it unless the set is huge
    sample = ops if len(ops) <= 128 else ops[:64]
    assert all(g * h in found for g in sample for h in sample), "operation set not closed"
    return OperationSet(dataset, ops)


def enumerate_aut(dataset: DataSet, guard: int = DEFAULT_ENUM_GUARD) -> OperationSet:
    """The invertible operations; a group under composition."""
    n = len(dataset.domain)
    if n > guard:
        raise GuardExceeded(f"|X|={n} exceeds enumeration guard {guard}")
    pts = dataset.domain.points
    ops = []
    for images in itertools.permutations(pts):
        g = PointMap(dataset.domain, dataset.domain, dict(zip(pts, images)))
        if is_operation(g, dataset):
            ops.append(g)
    ops = tuple(sorted(ops, key=lambda g: g.image_tuple()))
    found = set(ops)
    assert all(g.inverse() in found for g in ops)
    sample = ops if len(ops) <= 128 else ops[:64]
    assert all(g * h in found for g in sample for h in sample), "automorphism set not closed"
    return OperationSet(dataset, ops)


def generated_submonoid(ops, domain=None) -> tuple:
    """Least composition-closed set containing the identity and the given endos."""
    ops = list(ops)
    if not ops:
        if domain is None:
            raise ValueError("cannot infer the domain from an empty generating set")
        return (PointMap.identity(domain),)
    domain = ops[0].source
    for g in ops:
        if g.source != domain or g.target != domain:
            raise DomainMismatch("generators must be endomorphisms of one domain")
    closure = {PointMap.identity(domain)}
    closure.update(ops)
    frontier = list(closure)
    while frontier:
        fresh = []
        for g in ops:
            for h in frontier:
                gh = g * h
                if gh not in closure:
                    closure.add(gh)
                    fresh.append(gh)
        frontier = fresh
    return tuple(sorted(closure, key=lambda g: g.image_tuple()))


class Incarnation:
    """A data set together with a verified set of its operations.

    The kind tag is always computed from the operations, never trusted from
    input: "group" and "monoid" require closure under composition with
    identity, "group-like" means all operations are bijections, anything
    else is "general".  An empty operation set is allowed.
    """

    __slots__ = ("dataset", "ops", "kind", "_closure", "_reach")

    def __init__(self, dataset: DataSet, ops=()):
        self.dataset = dataset
        seen = {}
        for entry in ops:
            if isinstance(entry, PointMap):
                g = entry
            else:
                name, g = entry
                g = g.with_aliases((name,) + tuple(a for a in g.aliases if a != name))
            if g.source != dataset.domain or g.target != dataset.domain:
                raise DomainMismatch("operation must be an endomorphism of the data set domain")
            for m in dataset:
                if m.compose(g) not in dataset:
                    raise NotOperation(g, m)
            key = g.image_tuple()
            if key in seen:
                merged = tuple(dict.fromkeys(seen[key].aliases + g.aliases))
                seen[key] = seen[key].with_aliases(merged)
            else:
                seen[key] = g
        ordered = []
        auto = 0
        ident = PointMap.identity(dataset.domain)
        for key in sorted(seen):
            g = seen[key]
            if not g.aliases:
                if g == ident:
                    g = g.with_aliases(("id",))
                else:
                    while f"g{auto}" in {a for o in seen.values() for a in o.aliases}:
                        auto += 1
                    g = g.with_aliases((f"g{auto}",))
                    auto += 1
            ordered.append(g)
        self.ops = tuple(ordered)
        self.kind = self._compute_kind()
        self._closure = None
        self._reach = None

    def _compute_kind(self) -> str:
        ops = set(self.ops)
        has_id = PointMap.identity(self.dataset.domain) in ops
        closed = all(g * h in ops for g in ops for h in ops)
        all_bij = all(g.is_bijective for g in self.ops)
        if has_id and closed:
            if all_bij:
                assert all(g.inverse() in ops for g in self.ops)
                return "group"
            return "monoid"
        if all_bij:
            return "group-like"
        return "general"

    def op_by_name(self, name: str) -> PointMap:
        for g in self.ops:
            if name in g.aliases or name == g.name:
                return g
        raise KeyError(f"no operation named {name!r}")

    def monoid_closure(self) -> tuple:
        if self._closure is None:
            if self.ops:
                self._closure = generated_submonoid(self.ops)
            else:
                self._closure = (PointMap.identity(self.dataset.domain),)
        return self._closure

    def act(self, m: Measurement, g: PointMap) -> Measurement:
        return self.dataset.find(m.compose(g))

    def reach(self) -> dict:
        """For each measurement, the set of measurements reachable by words."""
        if self._reach is None:
            step = {
                m: {self.act(m, g) for g in self.ops} for m in self.dataset
            }
            out = {}
            for m in self.dataset:
                seen = {m}
                frontier = [m]
                while frontier:
                    nxt = []
                    for cur in frontier:
                        for dst in step[cur]:
                            if dst not in seen:
                                seen.add(dst)
                                nxt.append(dst)
                    frontier = nxt
                out[m] = frozenset(seen)
            self._reach = out
        return self._reach

    def __eq__(self, other):
        return (
            isinstance(other, Incarnation)
            and self.dataset == other.dataset
            and set(self.ops) == set(other.ops)
        )

    def __hash__(self):
        return hash((self.dataset, frozenset(self.ops)))

    def __repr__(self):
        return f"Incarnation({len(self.dataset)} measurements, {len(self.ops)} ops, {self.kind})"

    def to_json_dict(self) -> dict:
        return {
            "dataset": self.dataset.to_json_dict(),
            "M": {g.name: dict(g.mapping) for g in self.ops},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Incarnation":
        ds = DataSet.from_json_dict(data["dataset"])
        ops = []
        for name, mapping in data.get("M", {}).items():
            ops.append((name, PointMap(ds.domain, ds.domain, mapping)))
        return cls(ds, ops)


def universal_incarnation(dataset: DataSet, guard: int = DEFAULT_ENUM_GUARD) -> Incarnation:
    return Incarnation(dataset, enumerate_end(dataset, guard).ops)


def deformation_closure(omega, inc: Incarnation) -> tuple:
    """Everything reachable from omega by acting with words of operations."""
    omega = [inc.dataset.find(m) for m in omega]
    reach = inc.reach()
    out = set()
    for m in omega:
        out |= reach[m]
    return tuple(sorted(out, key=lambda m: m.values))


@dataclass(frozen=True)
class Partition:
    blocks: tuple  # tuple of tuples of measurements

    def block_of(self, m: Measurement) -> tuple:
        for b in self.blocks:
            if m in b:
                return b
        raise KeyError(f"{m!r} not covered by the partition")

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def blocks(inc: Incarnation) -> Partition:
    """Connected components of the symmetrized reachability relation."""
    parent = {m: m for m in inc.dataset}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in inc.dataset:
        for g in inc.ops:
            a, b = find(m), find(inc.act(m, g))
            if a != b:
                parent[a] = b
    groups: dict = {}
    for m in inc.dataset:
        groups.setdefault(find(m), []).append(m)
    out = [tuple(sorted(g, key=lambda m: m.values)) for g in groups.values()]
    out.sort(key=lambda b: b[0].values)
    return Partition(tuple(out))


def indistinguishable(phi: Measurement, psi: Measurement, inc: Incarnation) -> bool:
    phi, psi = inc.dataset.find(phi), inc.dataset.find(psi)
    reach = inc.reach()
    return psi in reach[phi] and phi in reach[psi]


def is_independent(omega, inc: Incarnation) -> bool:
    """No member is reachable from another member."""
    omega = [inc.dataset.find(m) for m in omega]
    reach = inc.reach()
    return all(
        a not in reach[b] for a, b in itertools.permutations(omega, 2)
    )


def find_basis(inc: Incarnation) -> tuple:
    """Deterministic independent generating set.

    Repeatedly take the canonically first unreached measurement and swap out
    members it can reach; the reached set grows strictly, so this terminates
    with a basis.
    """
    reach = inc.reach()
    omega: list = []
    covered: set = set()
    while True:
        missing = next((m for m in inc.dataset if m not in covered), None)
        if missing is None:
            break
        omega = [missing] + [w for w in omega if w not in reach[missing]]
        covered = set()
        for m in omega:
            covered |= reach[m]
    return tuple(sorted(omega, key=lambda m: m.values))


def enumerate_bases(inc: Incarnation, guard: int = 12) -> list:
    """All bases, canonically ordered; exponential in the data set size."""
    n = len(inc.dataset)
    if n > guard:
        raise GuardExceeded(f"|Phi|={n} exceeds basis enumeration guard {guard}")
    reach = inc.reach()
    ms = list(inc.dataset)
    out = []
    for k in range(n + 1):
        for omega in itertools.combinations(ms, k):
            union = set()
            for m in omega:
                union |= reach[m]
            if len(union) != n:
                continue
            if all(a not in reach[b] for a, b in itertools.permutations(omega, 2)):
                out.append(tuple(omega))
    return out


def dimension(inc: Incarnation) -> int:
    return len(find_basis(inc))


def block_incarnation(inc: Incarnation, psi: Measurement) -> Incarnation:
    """The block of psi, carrying the same operations; always transitive."""
    psi = inc.dataset.find(psi)
    block = blocks(inc).block_of(psi)
    sub = DataSet(inc.dataset.domain, block)
    out = Incarnation(sub, inc.ops)
    assert len(blocks(out)) == 1
    return out

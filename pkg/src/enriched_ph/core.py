"""Finite data sets of exact rational measurements.

A data set is a finite set of functions ("measurements") from a fixed finite
domain into the rationals.  Measurements are extensional: two of them are the
same element of the set exactly when their value vectors coincide, and any
user-supplied names are kept only as aliases.  All values are
``fractions.Fraction``, so distances, thresholds and grids computed downstream
are bit-exact.

Everything constructed here is immutable after construction and safe to share
across threads.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainMismatch, ValueMapMiss


def parse_rational(value) -> Fraction:
    """Accept "p/q" or decimal strings, ints, and exact-decimal floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot read rational from {value!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Domain:
    """Ordered finite set of distinct point identifiers."""

    __slots__ = ("points", "_index")

    def __init__(self, points):
        pts = tuple(str(p) for p in points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate point identifiers in domain")
        self.points = pts
        self._index = {p: i for i, p in enumerate(pts)}

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise KeyError(f"point {point!r} not in domain") from None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point):
        return point in self._index

    def __eq__(self, other):
        return isinstance(other, Domain) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"Domain({list(self.points)!r})"


class Measurement:
    """One rational value per domain point; identity is the value vector."""

    __slots__ = ("domain", "values", "aliases")

    def __init__(self, domain: Domain, values, aliases=()):
        self.domain = domain
        vals = tuple(parse_rational(v) for v in values)
        if len(vals) != len(domain):
            raise ValueError("value vector length does not match domain size")
        self.values = vals
        self.aliases = tuple(aliases)

    @property
    def name(self) -> str:
        return self.aliases[0] if self.aliases else "<" + ",".join(map(format_rational, self.values)) + ">"

    def at(self, point: str) -> Fraction:
        return self.values[self.domain.index(point)]

    def compose(self, g: "PointMap") -> "Measurement":
        """Precompose with a point map g: Y -> X, yielding a measurement on Y."""
        if g.target != self.domain:
            raise DomainMismatch("point map target differs from measurement domain")
        return Measurement(g.source, tuple(self.at(g(y)) for y in g.source), self.aliases)

    def with_aliases(self, aliases) -> "Measurement":
        return Measurement(self.domain, self.values, tuple(aliases))

    def __eq__(self, other):
        return (
            isinstance(other, Measurement)
            and self.domain == other.domain
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.domain, self.values))

    def __repr__(self):
        return f"Measurement({self.name}: {tuple(map(format_rational, self.values))})"


class PointMap:
    """Total function between two domains."""

    __slots__ = ("source", "target", "mapping", "aliases")

    def __init__(self, source: Domain, target: Domain, mapping, aliases=()):
        self.source = source
        self.target = target
        mp = {str(k): str(v) for k, v in dict(mapping).items()}
        if set(mp) != set(source.points):
            raise ValueError("map must be total on the source domain")
        for v in mp.values():
            if v not in target:
                raise ValueError(f"image point {v!r} not in target domain")
        self.mapping = mp
        self.aliases = tuple(aliases)

    @classmethod
    def identity(cls, domain: Domain) -> "PointMap":
        return cls(domain, domain, {p: p for p in domain}, aliases=("id",))

    @property
    def name(self) -> str:
        if self.aliases:
            return self.aliases[0]
        return "(" + ",".join(f"{p}>{self.mapping[p]}" for p in self.source) + ")"

    def __call__(self, point: str) -> str:
        return self.mapping[point]

    def image_tuple(self):
        return tuple(self.mapping[p] for p in self.source)

    def compose(self, other: "PointMap") -> "PointMap":
        """self after other: x -> self(other(x))."""
        if other.target != self.source:
            raise DomainMismatch("point maps not composable")
        return PointMap(other.source, self.target, {p: self(other(p)) for p in other.source})

    __mul__ = compose

    @property
    def is_bijective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.source) == len(self.target)

    def inverse(self) -> "PointMap":
        if not self.is_bijective:
            raise ValueError("point map is not bijective")
        return PointMap(self.target, self.source, {v: k for k, v in self.mapping.items()})

    def with_aliases(self, aliases) -> "PointMap":
        return PointMap(self.source, self.target, self.mapping, tuple(aliases))

    def __eq__(self, other):
        return (
            isinstance(other, PointMap)
            and self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self):
        return hash((self.source, self.target, self.image_tuple()))

    def __repr__(self):
        return f"PointMap({self.name})"

    def to_json_dict(self) -> dict:
        return {
            "source": list(self.source.points),
            "target": list(self.target.points),
            "map": dict(self.mapping),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PointMap":
        return cls(Domain(data["source"]), Domain(data["target"]), data["map"])


class PseudometricMatrix:
    """Symmetric, zero-diagonal matrix of exact distances on an ordered point set."""

    __slots__ = ("points", "rows", "_index")

    def __init__(self, points, rows):
        self.points = tuple(points)
        self.rows = tuple(tuple(r) for r in rows)
        self._index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix shape does not match point count")
        for i in range(n):
            if self.rows[i][i] != 0:
                raise ValueError("nonzero diagonal")
            for j in range(i):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError("matrix not symmetric")

    def at(self, x: str, y: str) -> Fraction:
        return self.rows[self._index[x]][self._index[y]]

    def satisfies_triangle(self) -> bool:
        n = len(self.points)
        return all(
            self.rows[i][j] <= self.rows[i][k] + self.rows[k][j]
            for i in range(n)
            for j in range(n)
            for k in range(n)
        )

    def distinct_values(self):
        return sorted({v for row in self.rows for v in row})

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.points)]
        for p, row in zip(self.points, self.rows):
            lines.append(p + "," + ",".join(format_rational(v) for v in row))
        return "\n".join(lines) + "\n"


class DataSet:
    """Deduplicated finite set of measurements over one domain.

    Measurements are stored in canonical order (lexicographic on value
    vectors); this order is what every enumeration in the package iterates in.
    Empty data sets are rejected unless allow_empty is set.
    """

    __slots__ = ("domain", "measurements", "allow_empty", "_by_alias", "_metric")

    def __init__(self, domain: Domain, measurements, allow_empty: bool = False):
        self.domain = domain
        self.allow_empty = bool(allow_empty)
        by_values: dict[tuple, list] = {}
        order: list[tuple] = []
        for m in measurements:
            if isinstance(m, Measurement):
                meas = m
            else:
                name, values = m
                meas = Measurement(domain, values, (name,) if name else ())
            if meas.domain != domain:
                raise DomainMismatch("measurement domain differs from data set domain")
            if meas.values not in by_values:
                by_values[meas.values] = []
                order.append(meas.values)
            for a in meas.aliases:
                if a not in by_values[meas.values]:
                    by_values[meas.values].append(a)
        if not by_values and not self.allow_empty:
            raise ValueError("empty data set (pass allow_empty=True to permit)")

        alias_owner: dict[str, tuple] = {}
        for vals, aliases in by_values.items():
            for a in aliases:
                if alias_owner.get(a, vals) != vals:
                    raise ValueError(f"name {a!r} bound to two different value vectors")
                alias_owner[a] = vals

        final = []
        auto = 0
        for vals in sorted(by_values):
            aliases = by_values[vals]
            if not aliases:
                while f"m{auto}" in alias_owner:
                    auto += 1
                aliases = [f"m{auto}"]
                alias_owner[f"m{auto}"] = vals
            final.append(Measurement(domain, vals, tuple(aliases)))
        self.measurements = tuple(final)
        self._by_alias = {a: m for m in final for a in m.aliases}
        self._metric = None

    def __len__(self):
        return len(self.measurements)

    def __iter__(self):
        return iter(self.measurements)

    def __contains__(self, m):
        return isinstance(m, Measurement) and m.domain == self.domain and any(
            m.values == n.values for n in self.measurements
        )

    def find(self, m: Measurement) -> Measurement:
        """Return the stored (alias-carrying) copy equal to m."""
        for n in self.measurements:
            if n.values == m.values:
                return n
        raise KeyError(f"measurement {m!r} not in data set")

    def by_name(self, name: str) -> Measurement:
        try:
            return self._by_alias[name]
        except KeyError:
            raise KeyError(f"no measurement named {name!r}") from None

    def names(self):
        return tuple(m.name for m in self.measurements)

    def pseudometric(self) -> PseudometricMatrix:
        """Max over measurements of coordinatewise differences; zero matrix if empty."""
        if self._metric is None:
            pts = self.domain.points
            vecs = [m.values for m in self.measurements]
            rows = [
                [
                    max((abs(v[i] - v[j]) for v in vecs), default=Fraction(0))
                    for j in range(len(pts))
                ]
                for i in range(len(pts))
            ]
            self._metric = PseudometricMatrix(pts, rows)
        return self._metric

    def __eq__(self, other):
        return (
            isinstance(other, DataSet)
            and self.domain == other.domain
            and [m.values for m in self.measurements] == [m.values for m in other.measurements]
        )

    def __hash__(self):
        return hash((self.domain, tuple(m.values for m in self.measurements)))

    def __repr__(self):
        return f"DataSet({len(self)} measurements on {len(self.domain)} points)"

    def to_json_dict(self) -> dict:
        out = {
            "domain": list(self.domain.points),
            "measurements": {
                m.name: [format_rational(v) for v in m.values] for m in self.measurements
            },
        }
        if self.allow_empty:
            out["allow_empty"] = True
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "DataSet":
        domain = Domain(data["domain"])
        ms = [(name, vals) for name, vals in data.get("measurements", {}).items()]
        return cls(domain, ms, allow_empty=bool(data.get("allow_empty", False)))


def sup_distance(phi: Measurement, psi: Measurement) -> Fraction:
    """Largest coordinatewise difference between two measurements."""
    if phi.domain != psi.domain:
        raise DomainMismatch("measurements live on different domains")
    return max(abs(a - b) for a, b in zip(phi.values, psi.values))


def pseudometric(dataset: DataSet) -> PseudometricMatrix:
    return dataset.pseudometric()


# ---------------------------------------------------------------------------
# coproduct / product

LEFT_TAG = "L:"
RIGHT_TAG = "R:"


def _tagged_union(x: Domain, y: Domain) -> Domain:
    return Domain([LEFT_TAG + p for p in x] + [RIGHT_TAG + p for p in y])


def _extend_left(phi: Measurement, union: Domain, right_size: int) -> tuple:
    return phi.values + (Fraction(0),) * right_size


def _extend_right(psi: Measurement, union: Domain, left_size: int) -> tuple:
    return (Fraction(0),) * left_size + psi.values


@dataclass(frozen=True)
class CoproductResult:
    dataset: DataSet
    left: dict  # measurement of the left factor -> its image
    right: dict


@dataclass(frozen=True)
class ProductResult:
    dataset: DataSet
    proj_left: dict  # product measurement -> left component
    proj_right: dict
    pairs: dict  # (left, right) -> product measurement


def coproduct(a: DataSet, b: DataSet) -> CoproductResult:
    """Disjoint-union domain; each measurement extended by zero on the other side.

    Coinciding extensions (possible only when both factors contain the zero
    measurement) are merged, since data sets are genuine sets.
    """
    union = _tagged_union(a.domain, b.domain)
    entries = []
    for phi in a:
        entries.append(Measurement(union, _extend_left(phi, union, len(b.domain)), (LEFT_TAG + phi.name,)))
    for psi in b:
        entries.append(Measurement(union, _extend_right(psi, union, len(a.domain)), (RIGHT_TAG + psi.name,)))
    ds = DataSet(union, entries, allow_empty=a.allow_empty or b.allow_empty)
    left = {phi: ds.find(Measurement(union, _extend_left(phi, union, len(b.domain)))) for phi in a}
    right = {psi: ds.find(Measurement(union, _extend_right(psi, union, len(a.domain)))) for psi in b}
    return CoproductResult(ds, left, right)


def product(a: DataSet, b: DataSet) -> ProductResult:
    """Disjoint-union domain; measurements are all two-sided combinations."""
    union = _tagged_union(a.domain, b.domain)
    entries = []
    for phi, psi in itertools.product(a, b):
        entries.append(
            Measurement(union, phi.values + psi.values, (f"{phi.name}+{psi.name}",))
        )
    allow = (a.allow_empty or b.allow_empty) and not entries
    ds = DataSet(union, entries, allow_empty=allow)
    proj_left, proj_right, pairs = {}, {}, {}
    for phi, psi in itertools.product(a, b):
        m = ds.find(Measurement(union, phi.values + psi.values))
        # restriction to a factor recovers the component, so projections are total
        proj_left[m] = phi
        proj_right[m] = psi
        pairs[(phi, psi)] = m
    return ProductResult(ds, proj_left, proj_right, pairs)


def copair(cp: CoproductResult, alpha: dict, beta: dict) -> dict:
    """The unique map out of a coproduct restricting to alpha and beta.

    If deduplication glued a left and a right measurement together, alpha and
    beta must agree there; otherwise no such map exists and a ValueError names
    the clash.
    """
    mu: dict = {}
    for phi, image in cp.left.items():
        mu[image] = alpha[phi]
    for psi, image in cp.right.items():
        if image in mu and mu[image] != beta[psi]:
            raise ValueError(
                f"coproduct legs collide at {image.name} with alpha != beta; no factorization"
            )
        mu[image] = beta[psi]
    return mu


def pair(pr: ProductResult, alpha: dict, beta: dict) -> dict:
    """The unique map into a product with the prescribed components."""
    return {pi: pr.pairs[(alpha[pi], beta[pi])] for pi in alpha}


def coproduct_point_map(f1: PointMap, f2: PointMap) -> PointMap:
    """f1 + f2 between tagged disjoint unions."""
    src = _tagged_union(f1.source, f2.source)
    tgt = _tagged_union(f1.target, f2.target)
    mapping = {LEFT_TAG + p: LEFT_TAG + f1(p) for p in f1.source}
    mapping.update({RIGHT_TAG + p: RIGHT_TAG + f2(p) for p in f2.source})
    return PointMap(src, tgt, mapping)


# ---------------------------------------------------------------------------
# value maps and the two change operations


class ValueMap:
    """Rational-to-rational reparametrization: a builtin or a finite table.

    Builtins: negate; affine(a, b) sending q to a*q + b; clamp-sign sending
    negatives to -1 and everything else to 1.  Explicit tables must cover
    every value they are applied to.
    """

    __slots__ = ("kind", "a", "b", "table")

    def __init__(self, kind: str, a=None, b=None, table=None):
        if kind not in ("negate", "affine", "clamp-sign", "table"):
            raise ValueError(f"unknown value map kind {kind!r}")
        self.kind = kind
        self.a = parse_rational(a) if a is not None else None
        self.b = parse_rational(b) if b is not None else None
        self.table = None
        if kind == "affine" and (self.a is None or self.b is None):
            raise ValueError("affine value map needs coefficients a and b")
        if kind == "table":
            if table is None:
                raise ValueError("table value map needs a table")
            self.table = {parse_rational(k): parse_rational(v) for k, v in dict(table).items()}

    @classmethod
    def negate(cls) -> "ValueMap":
        return cls("negate")

    @classmethod
    def affine(cls, a, b) -> "ValueMap":
        return cls("affine", a=a, b=b)

    @classmethod
    def clamp_sign(cls) -> "ValueMap":
        return cls("clamp-sign")

    @classmethod
    def from_table(cls, table) -> "ValueMap":
        return cls("table", table=table)

    def apply(self, q) -> Fraction:
        q = parse_rational(q)
        if self.kind == "negate":
            return -q
        if self.kind == "affine":
            return self.a * q + self.b
        if self.kind == "clamp-sign":
            return Fraction(-1) if q < 0 else Fraction(1)
        try:
            return self.table[q]
        except KeyError:
            raise ValueMapMiss(f"table has no entry for {format_rational(q)}") from None

    __call__ = apply

    @property
    def is_invertible(self) -> bool:
        if self.kind == "negate":
            return True
        if self.kind == "affine":
            return self.a != 0
        if self.kind == "table":
            return len(set(self.table.values())) == len(self.table)
        return False

    def inverse(self) -> "ValueMap":
        if self.kind == "negate":
            return ValueMap.negate()
        if self.kind == "affine" and self.a != 0:
            return ValueMap.affine(1 / self.a, -self.b / self.a)
        if self.kind == "table" and self.is_invertible:
            return ValueMap.from_table({v: k for k, v in self.table.items()})
        raise ValueError(f"value map of kind {self.kind!r} is not invertible")

    def to_json_dict(self) -> dict:
        if self.kind == "table":
            return {"table": {format_rational(k): format_rational(v) for k, v in self.table.items()}}
        if self.kind == "affine":
            return {"builtin": "affine", "a": format_rational(self.a), "b": format_rational(self.b)}
        return {"builtin": self.kind}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ValueMap":
        if "table" in data:
            return cls.from_table(data["table"])
        builtin = data["builtin"]
        if builtin == "affine":
            return cls.affine(data["a"], data["b"])
        return cls(builtin)

    def __repr__(self):
        return f"ValueMap({self.kind})"


def change_units(f: ValueMap, dataset: DataSet) -> tuple:
    """Apply f to every value; returns (f Phi, map phi -> f phi)."""
    entries = [
        Measurement(dataset.domain, tuple(f(v) for v in m.values), m.aliases) for m in dataset
    ]
    ds = DataSet(dataset.domain, entries, allow_empty=dataset.allow_empty)
    to_image = {
        m: ds.find(Measurement(dataset.domain, tuple(f(v) for v in m.values))) for m in dataset
    }
    return ds, to_image


def domain_change(dataset: DataSet, f: PointMap) -> tuple:
    """Precompose every measurement with f: Y -> X; returns (Phi f, map phi -> phi f)."""
    if f.target != dataset.domain:
        raise DomainMismatch("point map target differs from data set domain")
    entries = [m.compose(f) for m in dataset]
    ds = DataSet(f.source, entries, allow_empty=dataset.allow_empty)
    to_image = {m: ds.find(m.compose(f)) for m in dataset}
    return ds, to_image

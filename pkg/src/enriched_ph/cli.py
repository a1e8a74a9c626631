"""Command-line surface.

Commands: metric, analyze, ph, seo {check,extend,realize,decompose,units},
interleave, ops {end,aut}.  All outputs are files or stdout JSON/CSV and are
byte-identical for identical inputs.  Exit codes: 0 success, 2 input error,
3 invalid incarnation, 4 operator hypothesis violated.  The environment
variable ENRICHED_PH_GUARD overrides enumeration guards.
"""

import argparse
import json
import os
import sys

from .actions import (
    DEFAULT_ENUM_GUARD,
    Incarnation,
    blocks,
    dimension,
    enumerate_aut,
    enumerate_end,
    find_basis,
)
from .core import DataSet, ValueMap, format_rational
from .errors import (
    DomainMismatch,
    EquivarianceError,
    GuardExceeded,
    HypothesisViolation,
    NotInvariant,
    NotOperation,
    ValueMapMiss,
)
from .ggraph import build_graph
from .operators import (
    change_units_seo,
    decompose,
    extend_from_basis,
    find_realization,
    validate_seo,
)
from .persistence import INF, interleaving_bounds, ph_functor, ph_grid, slice_barcode

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCARNATION = 3
EXIT_HYPOTHESIS = 4


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _guard(default: int = DEFAULT_ENUM_GUARD) -> int:
    override = os.environ.get("ENRICHED_PH_GUARD")
    if override:
        try:
            return int(override)
        except ValueError:
            raise CliError(EXIT_INPUT, f"bad ENRICHED_PH_GUARD value {override!r}")
    return default


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"malformed JSON in {path}: {exc}")


def _load_dataset(path) -> DataSet:
    try:
        return DataSet.from_json_dict(_load_json(path))
    except (KeyError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad data set {path}: {exc}")


def _load_incarnation(path) -> Incarnation:
    data = _load_json(path)
    try:
        return Incarnation.from_json_dict(data)
    except NotOperation as exc:
        raise CliError(
            EXIT_INCARNATION,
            f"{exc.op.name} is not an operation: moves {exc.measurement.name} out of the set",
        )
    except (KeyError, ValueError, DomainMismatch) as exc:
        raise CliError(EXIT_INPUT, f"bad incarnation {path}: {exc}")


def _load_dataset_or_incarnation(path):
    data = _load_json(path)
    if "M" in data or "dataset" in data:
        try:
            return Incarnation.from_json_dict(data)
        except NotOperation as exc:
            raise CliError(
                EXIT_INCARNATION,
                f"{exc.op.name} is not an operation: moves {exc.measurement.name} out of the set",
            )
        except (KeyError, ValueError, DomainMismatch) as exc:
            raise CliError(EXIT_INPUT, f"bad incarnation {path}: {exc}")
    try:
        return DataSet.from_json_dict(data)
    except (KeyError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad data set {path}: {exc}")


def _emit(payload, path=None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_text(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_metric(args) -> int:
    ds = _load_dataset(args.dataset)
    _write_text(ds.pseudometric().to_csv(), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    inc = _load_incarnation(args.incarnation)
    report = {
        "kind": inc.kind,
        "blocks": [sorted(m.name for m in blk) for blk in blocks(inc)],
        "basis": sorted(m.name for m in find_basis(inc)),
        "dimension": dimension(inc),
    }
    _emit(report, args.output)
    return EXIT_OK


def cmd_ops(args) -> int:
    ds = _load_dataset(args.dataset)
    try:
        found = enumerate_end(ds, _guard()) if args.which == "end" else enumerate_aut(ds, _guard())
    except GuardExceeded as exc:
        raise CliError(EXIT_INPUT, str(exc))
    payload = {f"e{i}": dict(g.mapping) for i, g in enumerate(found.ops)}
    _emit(payload, args.output)
    return EXIT_OK


def _resolve_measurement(container, name):
    ds = container.dataset if isinstance(container, Incarnation) else container
    try:
        return ds.by_name(name)
    except KeyError as exc:
        raise CliError(EXIT_INPUT, str(exc))


def cmd_ph(args) -> int:
    obj = _load_dataset_or_incarnation(args.input)
    ds = obj.dataset if isinstance(obj, Incarnation) else obj
    m = _resolve_measurement(obj, args.measurement)
    wrote = False
    if args.grid:
        bp = ph_grid(ds, m, args.degree, args.prime)
        _emit(bp.to_json_dict(), args.grid)
        wrote = True
    if args.barcodes:
        bp = ph_grid(ds, m, args.degree, args.prime)
        lines = ["r,s_birth,s_death,degree"]
        for r in bp.grid.r_values:
            for birth, death in slice_barcode(ds, m, args.degree, args.prime, r):
                dtxt = "inf" if death == INF else format_rational(death)
                lines.append(
                    f"{format_rational(r)},{format_rational(birth)},{dtxt},{args.degree}"
                )
        _write_text("\n".join(lines) + "\n", args.barcodes)
        wrote = True
    if args.functor:
        if not isinstance(obj, Incarnation):
            raise CliError(EXIT_INPUT, "--functor needs an incarnation input")
        functor = ph_functor(obj, args.degree, args.prime)
        os.makedirs(args.functor, exist_ok=True)
        graph = functor.graph
        index = {"edges": [], "objects": {}}
        for v in graph.vertices:
            index["objects"][graph.vertex_names[v]] = functor.objects[v].to_json_dict()
        for n, (a, g, b) in enumerate(graph.edges):
            arrow = functor.arrows[(a, g, b)]
            fname = f"edge_{n:03d}_{graph.vertex_names[a]}_{graph.color_names[g]}.json"
            _emit(
                {
                    "from": graph.vertex_names[a],
                    "color": graph.color_names[g],
                    "to": graph.vertex_names[b],
                    "matrices": [[list(map(list, m.rows)) for m in row] for row in arrow.mats],
                },
                os.path.join(args.functor, fname),
            )
            index["edges"].append(fname)
        _emit(index, os.path.join(args.functor, "index.json"))
        wrote = True
    if args.dot:
        if not isinstance(obj, Incarnation):
            raise CliError(EXIT_INPUT, "--dot needs an incarnation input")
        _write_text(build_graph(obj).to_dot(), args.dot)
        wrote = True
    if not wrote:
        bp = ph_grid(ds, m, args.degree, args.prime)
        _emit(bp.to_json_dict())
    return EXIT_OK


def cmd_interleave(args) -> int:
    ds = _load_dataset(args.dataset)
    phi = _resolve_measurement(ds, args.phi)
    psi = _resolve_measurement(ds, args.psi)
    result = interleaving_bounds(ds, phi, psi, args.degree, args.prime)
    payload = {
        "upper": format_rational(result.upper),
        "lower": "inf" if result.lower == INF else format_rational(result.lower),
        "certificate": result.certificate,
    }
    _emit(payload, args.output)
    return EXIT_OK


def _load_seo_maps(path, source, target):
    data = _load_json(path)
    try:
        alpha = {
            source.dataset.by_name(k): target.dataset.by_name(v)
            for k, v in data["alpha"].items()
        }
        tmap = {source.op_by_name(k): target.op_by_name(v) for k, v in data["T"].items()}
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"bad operator file {path}: {exc}")
    return alpha, tmap


def cmd_seo_check(args) -> int:
    source = _load_incarnation(args.source)
    target = _load_incarnation(args.target)
    alpha, tmap = _load_seo_maps(args.seo, source, target)
    try:
        seo = validate_seo(source, target, alpha, tmap)
    except EquivarianceError as exc:
        m, g = exc.witness
        _emit(
            {
                "valid": False,
                "witness": {"measurement": getattr(m, "name", None), "operation": g.name},
                "reason": str(exc),
            },
            args.output,
        )
        return EXIT_HYPOTHESIS
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc))
    _emit(
        {
            "valid": True,
            "monoid_operator": seo.is_monoid_operator,
            "group_operator": seo.is_group_operator,
            "geometric": seo.is_geometric,
        },
        args.output,
    )
    return EXIT_OK


def cmd_seo_extend(args) -> int:
    source = _load_incarnation(args.source)
    target = _load_incarnation(args.target)
    data = _load_json(args.map)
    try:
        basis = [source.dataset.by_name(n) for n in data["basis"]]
        alpha_bar = {
            source.dataset.by_name(k): target.dataset.by_name(v)
            for k, v in data["alpha_bar"].items()
        }
        tmap = {source.op_by_name(k): target.op_by_name(v) for k, v in data["T"].items()}
        variant = data.get("variant", "SEO")
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"bad extension file {args.map}: {exc}")
    try:
        seo = extend_from_basis(source, target, basis, alpha_bar, tmap, variant)
    except HypothesisViolation as exc:
        _emit({"extended": False, "reason": str(exc)}, args.output)
        return EXIT_HYPOTHESIS
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc))
    _emit({"extended": True, "seo": seo.to_json_dict()}, args.output)
    return EXIT_OK


def cmd_seo_realize(args) -> int:
    source = _load_dataset(args.source)
    target = _load_dataset(args.target)
    data = _load_json(args.alpha)
    try:
        alpha = {source.by_name(k): target.by_name(v) for k, v in data.items()}
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"bad measurement map: {exc}")
    for m in source:
        if m not in alpha:
            raise CliError(EXIT_INPUT, f"measurement map is not total: missing {m.name}")
    found = find_realization(source, target, alpha)
    if found is None:
        from .operators import realization_candidates

        cands = realization_candidates(source, target, alpha)
        empty = sorted(y for y, c in cands.items() if not c)
        _emit({"realizable": False, "empty_candidates_at": empty}, args.output)
    else:
        _emit({"realizable": True, "realization": found.to_json_dict()}, args.output)
    return EXIT_OK


def cmd_seo_decompose(args) -> int:
    inc = _load_incarnation(args.incarnation)
    diag, seo = decompose(inc)
    _emit(
        {
            "diagonal": diag.to_json_dict(),
            "seo": seo.to_json_dict(),
            "isomorphism": seo.is_isomorphism,
        },
        args.output,
    )
    return EXIT_OK


def cmd_seo_units(args) -> int:
    inc = _load_incarnation(args.incarnation)
    try:
        vm = ValueMap.from_json_dict(_load_json(args.valuemap))
    except (KeyError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad value map: {exc}")
    try:
        out, seo = change_units_seo(vm, inc)
    except ValueMapMiss as exc:
        raise CliError(EXIT_INPUT, str(exc))
    _emit({"image": out.to_json_dict(), "seo": seo.to_json_dict()}, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enriched-ph")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="pseudometric of a data set as CSV")
    p.add_argument("dataset")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("analyze", help="kind, blocks, basis, dimension of an incarnation")
    p.add_argument("incarnation")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ops", help="enumerate operations of a data set")
    p.add_argument("which", choices=["end", "aut"])
    p.add_argument("dataset")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ops)

    p = sub.add_parser("ph", help="bigraded persistence outputs")
    p.add_argument("input", help="data set or incarnation JSON")
    p.add_argument("-m", "--measurement", required=True)
    p.add_argument("-d", "--degree", type=int, default=0)
    p.add_argument("-p", "--prime", type=int, default=2)
    p.add_argument("--grid")
    p.add_argument("--barcodes")
    p.add_argument("--functor", help="directory for per-edge matrix files")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_ph)

    p = sub.add_parser("interleave", help="certified interleaving bounds for two measurements")
    p.add_argument("dataset")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("-d", "--degree", type=int, default=0)
    p.add_argument("-p", "--prime", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_interleave)

    seo = sub.add_parser("seo", help="operator subcommands")
    seo_sub = seo.add_subparsers(dest="seo_command", required=True)

    p = seo_sub.add_parser("check")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--seo", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_seo_check)

    p = seo_sub.add_parser("extend")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_seo_extend)

    p = seo_sub.add_parser("realize")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_seo_realize)

    p = seo_sub.add_parser("decompose")
    p.add_argument("incarnation")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_seo_decompose)

    p = seo_sub.add_parser("units")
    p.add_argument("--valuemap", required=True)
    p.add_argument("--incarnation", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_seo_units)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotOperation as exc:
        print(
            f"error: {exc.op.name} is not an operation ({exc.measurement.name} leaves the set)",
            file=sys.stderr,
        )
        return EXIT_INCARNATION
    except (EquivarianceError, HypothesisViolation, NotInvariant) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (DomainMismatch, ValueMapMiss, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())

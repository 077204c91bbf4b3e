"""Command-line front end.

Subcommands:
    group            summary of one reflection group
    dims             dimension of the diagram algebra over the chosen field
    classify         orbit table of transverse collections
    verify           named verification suites (relations, freeness,
                     formulas, g26)
    reproduce-table  consolidated dimension table over the shipped groups

Group specs are either "gmpn:m,p,n" for the monomial series or a path to a
group-definition JSON file.  Reports are deterministic JSON on stdout; the
classify table can also be projected to CSV.  Expensive per-group artifacts
(transversality table, orbit rows, dimensions) are cached on disk keyed by
a content hash of the group definition.
"""

import argparse
import csv
import hashlib
import io
import json
import os
import pickle
import sys
import tempfile
from multiprocessing import Pool

from .admissibility import (
    GENERIC,
    classify_orbits,
    dim_brauer,
    dim_g22n_formula,
    dim_gmpn_formula,
    mu_sixth,
)
from .brauer_modules import induce, quotient_regular_rep, verify_defining_relations
from .errors import BctError, InvalidParameters, TooLarge
from .freeness import freeness_verdict, g26_geometry_suite
from .reflection_groups import (
    DEFAULT_CAP,
    Group,
    build_imprimitive,
    group_to_json,
    hyperplanes,
    load_group_file,
    packaged_group,
)
from .transversality import TransvTable, transv_table

CACHE_VERSION = 1

CSV_COLUMNS = [
    "cardinality",
    "orbit_size",
    "stab_order",
    "kb_order",
    "admissible_generic",
    "admissible_mu6",
    "conditional",
    "quotient_size",
]

# dimension table for the shipped exceptional groups; other table rows
# need generator data that is not packaged
EXPECTED_DIMS = {
    "G4": (56, 56),
    "G23": (1045, 1045),
    "G25": (3272, 3416),
    "G26": (12312, 12312),
}
TABLE_NAMES = [f"G{i}" for i in range(4, 38)]
SHIPPED = {"G4": "g4", "G23": "g23", "G25": "g25", "G26": "g26"}
PACKAGED_NAMES = frozenset(SHIPPED.values())
ABSENT = "unverified (external data absent)"


class SpecError(Exception):
    """Unparseable group spec; reported as a usage error."""


def parse_spec(spec: str, cap: int) -> Group:
    if spec.startswith("gmpn:"):
        body = spec[len("gmpn:"):]
        parts = body.split(",")
        if len(parts) != 3:
            raise SpecError(f"expected gmpn:m,p,n, got {spec!r}")
        try:
            m, p, n = (int(x) for x in parts)
        except ValueError:
            raise SpecError(f"non-integer parameters in {spec!r}")
        return build_imprimitive(m, p, n, cap=cap)
    if os.path.exists(spec):
        return load_group_file(spec, cap=cap)
    if spec.lower() in PACKAGED_NAMES:
        return packaged_group(spec, cap=cap)
    raise SpecError(
        f"spec {spec!r} is neither gmpn:m,p,n, an existing file, "
        f"nor a packaged name {sorted(PACKAGED_NAMES)}"
    )


# ---------------------------------------------------------------------------
# cache


def group_digest(G: Group) -> str:
    blob = json.dumps(group_to_json(G), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def fresh_bundle() -> dict:
    return {"version": CACHE_VERSION, "table": None, "classify": {}, "dims": {}}


def cache_load(cache_dir: str, digest: str) -> dict:
    path = os.path.join(cache_dir, digest + ".pkl")
    try:
        with open(path, "rb") as fh:
            bundle = pickle.load(fh)
    except (OSError, pickle.PickleError, EOFError):
        return fresh_bundle()
    if not isinstance(bundle, dict) or bundle.get("version") != CACHE_VERSION:
        return fresh_bundle()
    return bundle


def cache_store(cache_dir: str, digest: str, bundle: dict):
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, digest + ".pkl")
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            pickle.dump(bundle, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def table_payload(G: Group) -> dict:
    tbl = transv_table(G)
    return {
        "size": tbl.size,
        "transverse": [sorted(tbl.row(i)) for i in range(tbl.size)],
        "mapped": {cell: list(v) for cell, v in tbl._mapped.items()},
    }


def prefill_table(G: Group, data: dict):
    if G._transv_table is not None:
        return
    G._build_hyperplanes()
    if data["size"] != len(G._hyperplanes):
        return
    G._transv_table = TransvTable(
        G,
        data["size"],
        [frozenset(r) for r in data["transverse"]],
        {tuple(cell): tuple(v) for cell, v in data["mapped"].items()},
    )


def cfg_key(mu6: bool) -> str:
    return "mu_sixth_root" if mu6 else "generic"


def cfg_of(mu6: bool):
    return mu_sixth() if mu6 else GENERIC


class GroupStore:
    """Read-through cache around one group's derived artifacts."""

    def __init__(self, G: Group, cache_dir: str):
        self.G = G
        self.cache_dir = cache_dir
        self.digest = group_digest(G)
        self.bundle = cache_load(cache_dir, self.digest)
        if self.bundle["table"] is not None:
            prefill_table(G, self.bundle["table"])

    def _save(self):
        if self.bundle["table"] is None:
            self.bundle["table"] = table_payload(self.G)
        cache_store(self.cache_dir, self.digest, self.bundle)

    def rows(self, mu6: bool):
        key = cfg_key(mu6)
        got = self.bundle["classify"].get(key)
        if got is None:
            recs = classify_orbits(self.G, cfg_of(mu6))
            got = [rec.as_row() for rec in recs]
            self.bundle["classify"][key] = got
            self._save()
        return got

    def dimension(self, mu6: bool) -> int:
        key = cfg_key(mu6)
        got = self.bundle["dims"].get(key)
        if got is None:
            got = dim_from_rows(self.G.order, self.rows(mu6))
            self.bundle["dims"][key] = got
            self._save()
        return got


def dim_from_rows(order: int, rows) -> int:
    """Dimension from an orbit table, with the double-entry cross-check:
    the sum over admissible collections of |W|/|K_B| must equal |W| plus
    the per-orbit block counts."""
    assert rows[0]["cardinality"] == 0 and rows[0]["quotient_size"] == order
    total = 0
    blocks = order
    for row in rows:
        if row["quotient_size"] == 0:
            continue
        assert order % row["kb_order"] == 0
        assert row["quotient_size"] * row["kb_order"] == row["stab_order"]
        total += row["orbit_size"] * (order // row["kb_order"])
        if row["cardinality"] > 0:
            blocks += row["orbit_size"] ** 2 * row["quotient_size"]
    assert total == blocks, "dimension double-entry mismatch"
    return total


# ---------------------------------------------------------------------------
# output helpers


def emit_json(payload: dict):
    print(json.dumps(payload, indent=2))


def emit_csv(rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                str(row[col]).lower() if isinstance(row[col], bool) else row[col]
                for col in CSV_COLUMNS
            ]
        )
    sys.stdout.write(out.getvalue())


def group_summary(G: Group) -> dict:
    return {
        "name": G.name,
        "kind": G.kind,
        "provenance": G.provenance,
        "order": G.order,
        "reflections": len(G.reflections),
        "hyperplanes": len(hyperplanes(G)),
        "reflection_classes": len(G.reflection_classes),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_group(args) -> int:
    G = parse_spec(args.spec, args.max_order)
    emit_json(group_summary(G))
    return 0


def cmd_dims(args) -> int:
    G = parse_spec(args.spec, args.max_order)
    store = GroupStore(G, args.cache_dir)
    payload = {"dimension": store.dimension(args.mu6)}
    if G.provenance == "external":
        payload["provenance"] = "external"
    emit_json(payload)
    return 0


def cmd_classify(args) -> int:
    G = parse_spec(args.spec, args.max_order)
    store = GroupStore(G, args.cache_dir)
    rows = store.rows(args.mu6)
    if args.csv:
        emit_csv(rows)
        return 0
    emit_json(
        {
            "group": G.name,
            "provenance": G.provenance,
            "field": cfg_key(args.mu6),
            "rows": rows,
        }
    )
    return 0


def _suite_relations(G: Group) -> dict:
    orbits = []
    ok = True
    for rec in classify_orbits(G):
        B = rec.orbit.representative
        if rec.quotient_size == 0:
            continue
        module = induce(G, B, quotient_regular_rep(G, B))
        report = verify_defining_relations(module)
        orbits.append(
            {
                "representative": list(B),
                "degree": module.degree,
                "dimension": module.dim,
                "report": report.as_dict(),
            }
        )
        ok = ok and report.all_pass
    return {"orbits": orbits, "all_pass": ok}


FORMULA_SWEEP = [
    (m, p, n)
    for m in range(1, 5)
    for p in range(1, m + 1)
    if m % p == 0
    for n in range(2, 5)
    if (m, p) != (2, 2)
]
DOUBLED_SWEEP = [(2, 2, n) for n in (3, 4, 5)]
ANCHORS = [(2, 3), (3, 15), (4, 105), (5, 945)]


def _formula_case(case) -> dict:
    m, p, n, cap = case
    G = build_imprimitive(m, p, n, cap=cap)
    enumerated = dim_brauer(G)
    formula = (
        dim_g22n_formula(n) if (m, p) == (2, 2) else dim_gmpn_formula(m, p, n)
    )
    return {
        "group": G.name,
        "m": m,
        "p": p,
        "n": n,
        "enumerated": enumerated,
        "formula": formula,
        "agree": enumerated == formula,
    }


def _suite_formulas(G, cap: int, workers: int) -> dict:
    if G is not None:
        if G.kind != "imprimitive":
            raise InvalidParameters(
                "the formulas suite applies to monomial groups only"
            )
        cases = [_formula_case((G.m, G.p, G.n, cap))]
        return {"cases": cases, "all_pass": all(c["agree"] for c in cases)}
    work = [(m, p, n, cap) for m, p, n in FORMULA_SWEEP + DOUBLED_SWEEP]
    if workers > 1:
        with Pool(workers) as pool:
            cases = pool.map(_formula_case, work)
    else:
        cases = [_formula_case(w) for w in work]
    anchors = []
    for n, expect in ANCHORS:
        got = next(
            (c["enumerated"] for c in cases if (c["m"], c["p"], c["n"]) == (1, 1, n)),
            None,
        )
        if got is None:
            got = dim_brauer(build_imprimitive(1, 1, n, cap=cap))
        anchors.append(
            {"n": n, "double_factorial": expect, "dimension": got,
             "agree": got == expect}
        )
    ok = all(c["agree"] for c in cases) and all(a["agree"] for a in anchors)
    return {"cases": cases, "anchors": anchors, "all_pass": ok}


def cmd_verify(args) -> int:
    G = None
    if args.spec is not None:
        G = parse_spec(args.spec, args.max_order)
    elif args.suite != "formulas":
        raise SpecError(f"the {args.suite} suite needs a group spec")

    if args.suite == "relations":
        body = _suite_relations(G)
    elif args.suite == "freeness":
        body = {"report": freeness_verdict(G).as_dict(), "all_pass": True}
    elif args.suite == "g26":
        report = g26_geometry_suite(G)
        body = {"report": report, "all_pass": report["all_pass"]}
    else:
        body = _suite_formulas(G, args.max_order, args.parallel)

    payload = {"suite": args.suite}
    if G is not None:
        payload["group"] = G.name
        payload["provenance"] = G.provenance
    payload.update(body)
    emit_json(payload)
    return 0 if payload["all_pass"] else 1


def _table_row(name: str, cache_dir: str, cap: int) -> dict:
    short = SHIPPED.get(name)
    if short is None:
        return {"name": name, "status": ABSENT}
    try:
        G = packaged_group(short, cap=cap)
    except TooLarge as exc:
        return {"name": name, "status": f"skipped ({exc})"}
    store = GroupStore(G, cache_dir)
    dim_generic = store.dimension(False)
    dim_sixth = store.dimension(True)
    expected = EXPECTED_DIMS[name]
    match = (dim_generic, dim_sixth) == expected
    return {
        "name": name,
        "provenance": G.provenance,
        "status": "verified" if match else "mismatch",
        "dim_generic": dim_generic,
        "dim_sixth_root": dim_sixth,
        "expected_generic": expected[0],
        "expected_sixth_root": expected[1],
        "orbit_rows": store.rows(False),
    }


def _table_row_job(job):
    return _table_row(*job)


def cmd_reproduce(args) -> int:
    jobs = [(name, args.cache_dir, args.max_order) for name in TABLE_NAMES]
    if args.parallel > 1:
        with Pool(args.parallel) as pool:
            rows = pool.map(_table_row_job, jobs)
    else:
        rows = [_table_row_job(j) for j in jobs]
    for spec in args.specs:
        G = parse_spec(spec, args.max_order)
        store = GroupStore(G, args.cache_dir)
        rows.append(
            {
                "name": G.name,
                "provenance": G.provenance,
                "status": "computed",
                "dim_generic": store.dimension(False),
                "dim_sixth_root": store.dimension(True),
                "orbit_rows": store.rows(False),
            }
        )
    ok = all(r["status"] != "mismatch" for r in rows)
    emit_json({"suite": "reproduce-table", "rows": rows, "all_pass": ok})
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bct",
        description="Exact computations with diagram algebras of "
        "complex reflection groups.",
    )
    parser.add_argument(
        "--cache-dir",
        default=os.environ.get("BCT_CACHE_DIR", "./.bct-cache"),
        help="cache directory (env BCT_CACHE_DIR, default ./.bct-cache)",
    )
    parser.add_argument(
        "--max-order",
        type=int,
        default=DEFAULT_CAP,
        help=f"refuse groups larger than this (default {DEFAULT_CAP})",
    )
    parser.add_argument(
        "--parallel",
        type=int,
        default=1,
        metavar="K",
        help="worker count for independent per-group work",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="summary of one group")
    p.add_argument("spec")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("dims", help="algebra dimension")
    p.add_argument("spec")
    p.add_argument("--mu6", action="store_true",
                   help="specialize the parameter ratio to a sixth root")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("classify", help="orbit table of transverse collections")
    p.add_argument("spec")
    p.add_argument("--mu6", action="store_true")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", default=True,
                       help="JSON output (default)")
    group.add_argument("--csv", action="store_true",
                       help="CSV projection of the orbit table")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True,
                   choices=["relations", "freeness", "formulas", "g26"])
    p.add_argument("spec", nargs="?",
                   help="group spec (optional for --suite formulas)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce-table",
                       help="dimension table over the shipped groups")
    p.add_argument("specs", nargs="*",
                   help="extra group specs appended to the table")
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except BctError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except AssertionError as exc:
        print(
            json.dumps({"error": "AssertionError", "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())

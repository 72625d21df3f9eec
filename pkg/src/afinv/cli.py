"""Command-line interface.

Subcommands cover the whole pipeline: enumerating Q-systems and simple
bimodules, printing composition tables, computing the invariant of a diagram,
comparing two diagrams, running the crossed-product consistency oracle, and
identifying a single stationary matrix.

Exit codes: 0 success (or verdict "equivalent"), 1 bad input or refused
resource bounds, 2 internal consistency failure or a failed oracle,
3 verdict "inequivalent", 4 verdict "unknown".
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import serialize as ser
from .bimodules import (
    bimodule_label,
    fusion_table,
    qsystems,
    simple_bimodules,
)
from .compare import compare
from .crossed import crossed_product_blocks
from .diagrams import compute_invariant
from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    OracleFailureError,
    ResourceLimitError,
    UnsupportedFeatureError,
)
from .groups import DEFAULT_GROUP_ORDER_BOUND
from .k0 import (
    DirectSumForm,
    RankOneForm,
    scaled_localization,
    stationary_k0,
)

__all__ = ["main"]


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise InvalidInputError(f"{path}: {exc.strerror or exc}") from exc


def _emit(args, doc, lines) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in lines:
            print(line)


def _group_name(G) -> str:
    return " x ".join(f"Z/{n}" for n in G.cyclic_factors)


def _load_group(args, path: str):
    G = ser.group_from_json(_load_json(path))
    bound = args.max_group_order or DEFAULT_GROUP_ORDER_BOUND
    if G.order > bound:
        raise ResourceLimitError(
            f"group order {G.order} exceeds the bound {bound}"
        )
    return G


def _fmt_terms(labels, terms) -> str:
    parts = []
    for idx, mult in terms:
        parts.append(labels[idx] if mult == 1 else f"{mult}*{labels[idx]}")
    return " + ".join(parts)


def _render_columns(header, rows) -> list[str]:
    widths = [len(h) for h in header]
    for row in rows:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    out = ["  ".join(h.ljust(widths[k]) for k, h in enumerate(header)).rstrip()]
    for row in rows:
        out.append("  ".join(c.ljust(widths[k]) for k, c in enumerate(row)).rstrip())
    return out


def _cmd_fusion_table(args) -> int:
    G = _load_group(args, args.group)
    if args.max_group_order:
        table = fusion_table(G, bound=args.max_group_order)
    else:
        table = fusion_table(G)
    labels = table.labels()
    doc = ser.fusion_table_to_json(table)

    lines = [f"simple bimodules of Hilb({_group_name(G)}): {len(labels)}"]
    for mi, mid in enumerate(qsystems(G)):
        rows_of = [i for i, s in enumerate(table.simples) if s.target == mid]
        cols_of = [j for j, s in enumerate(table.simples) if s.source == mid]
        lines.append("")
        lines.append(f"products through Q{mi + 1}:")
        header = ["left \\ right"] + [labels[j] for j in cols_of]
        rows = []
        for i in rows_of:
            row = [labels[i]]
            for j in cols_of:
                row.append(_fmt_terms(labels, table.product(i, j)))
            rows.append(row)
        lines.extend(_render_columns(header, rows))
    _emit(args, doc, lines)
    return 0


def _cmd_qsystems(args) -> int:
    G = _load_group(args, args.group)
    reps = qsystems(G)
    entries = []
    lines = [f"Q-systems of Hilb({_group_name(G)}): {len(reps)}"]
    for k, q in enumerate(reps):
        H = q.subgroup
        entries.append(
            {
                "label": f"Q{k + 1}",
                "subgroup": ser.subgroup_to_json(H),
                "order": H.order,
                "schur_trivial": H.is_cyclic(),
            }
        )
        gens = ", ".join(str(list(g)) for g in H.minimal_generators()) or "0"
        lines.append(
            f"  Q{k + 1}: order {H.order}, generated by {gens}"
            + ("" if H.is_cyclic() else "  [may admit nontrivial twists]")
        )
    doc = {"group": ser.group_to_json(G), "qsystems": entries}
    _emit(args, doc, lines)
    return 0


def _cmd_bimodules(args) -> int:
    G = _load_group(args, args.group)
    reps = qsystems(G)
    if not (1 <= args.source <= len(reps) and 1 <= args.target <= len(reps)):
        raise InvalidInputError(
            f"source/target must be between 1 and {len(reps)}"
        )
    P = reps[args.source - 1]
    Q = reps[args.target - 1]
    sims = simple_bimodules(P, Q)
    doc = {
        "group": ser.group_to_json(G),
        "source": f"Q{args.source}",
        "target": f"Q{args.target}",
        "bimodules": [
            {
                "label": bimodule_label(s),
                "dimension": s.dimension,
                **ser.bimodule_to_json(s),
            }
            for s in sims
        ],
    }
    lines = [f"simple Q{args.source}-Q{args.target} bimodules: {len(sims)}"]
    for s in sims:
        lines.append(
            f"  {bimodule_label(s)}: dimension {s.dimension}, "
            f"coset rep {list(s.coset.rep)}"
        )
    _emit(args, doc, lines)
    return 0


def _describe_object(label, desc, scale) -> str:
    if isinstance(desc, RankOneForm):
        S = "{" + ",".join(map(str, sorted(desc.prime_set))) + "}"
        return (
            f"  {label}: rank 1, image {scale} * Z[1/{S}] "
            f"(eigenvalue {desc.eigenvalue})"
        )
    if isinstance(desc, DirectSumForm):
        parts = []
        for b in desc.blocks:
            S = "{" + ",".join(map(str, sorted(b.prime_set))) + "}"
            parts.append(f"{scaled_localization(b).scale} * Z[1/{S}]")
        return f"  {label}: rank {desc.rank}, direct sum " + " + ".join(parts)
    return f"  {label}: rank {desc.rank} (no closed identification)"


def _cmd_invariant(args) -> int:
    d = ser.diagram_from_json(_load_json(args.diagram))
    bound = args.max_group_order or DEFAULT_GROUP_ORDER_BOUND
    if d.group.order > bound:
        raise ResourceLimitError(
            f"group order {d.group.order} exceeds the bound {bound}"
        )
    inv = compute_invariant(d)
    doc = ser.invariant_to_json(inv)
    lines = [f"invariant over Hilb({_group_name(inv.group)})", "objects:"]
    for k, label in enumerate(inv.labels):
        lines.append(_describe_object(label, inv.objects[k], inv.scales[k]))
    lines.append("multipliers:")
    for X, q in inv.morphisms:
        shown = "undefined" if q is None else str(q)
        lines.append(f"  {bimodule_label(X)}: {shown}")
    pointed = doc["pointed"]
    lines.append(
        f"pointed class: {pointed}"
        if isinstance(pointed, str)
        else f"pointed class vector: {pointed}"
    )
    _emit(args, doc, lines)
    return 0


def _cmd_compare(args) -> int:
    d1 = ser.diagram_from_json(_load_json(args.first))
    d2 = ser.diagram_from_json(_load_json(args.second))
    bound = args.max_group_order or DEFAULT_GROUP_ORDER_BOUND
    for d in (d1, d2):
        if d.group.order > bound:
            raise ResourceLimitError(
                f"group order {d.group.order} exceeds the bound {bound}"
            )
    inv1 = compute_invariant(d1)
    inv2 = compute_invariant(d2)
    verdict = compare(inv1, inv2, se_lag=args.se_lag, se_entries=args.se_entries)
    doc = ser.verdict_to_json(verdict)
    lines = [f"verdict: {verdict.status}"]
    if verdict.witness is not None:
        lines.append("witness:")
        for label, u in verdict.witness:
            lines.append(f"  {label} -> {u}")
    if verdict.certificate is not None:
        c = verdict.certificate
        lines.append(f"certificate: {c.kind} at {c.at}: {c.left} vs {c.right}")
    if verdict.reason is not None:
        lines.append(f"reason: {verdict.reason}")
    _emit(args, doc, lines)
    return verdict.exit_code


def _cmd_oracle(args) -> int:
    G = _load_group(args, args.group)
    reps = qsystems(G)
    pairs = []
    lines = [f"crossed-product oracle over Hilb({_group_name(G)})"]
    all_ok = True
    for i, P in enumerate(reps):
        for j, Q in enumerate(reps):
            categorical = len(simple_bimodules(P, Q))
            blocks = crossed_product_blocks(G, Q.subgroup, P.subgroup)
            ok = categorical == blocks.k0_rank
            all_ok = all_ok and ok
            pairs.append(
                {
                    "source": f"Q{i + 1}",
                    "target": f"Q{j + 1}",
                    "categorical": categorical,
                    "crossed_rank": blocks.k0_rank,
                    "ok": ok,
                }
            )
            lines.append(
                f"  Q{i + 1} -> Q{j + 1}: bimodules {categorical}, "
                f"crossed K0 rank {blocks.k0_rank}: {'PASS' if ok else 'FAIL'}"
            )
    lines.append("oracle: " + ("PASS" if all_ok else "FAIL"))
    doc = {"group": ser.group_to_json(G), "pairs": pairs, "all_ok": all_ok}
    _emit(args, doc, lines)
    if not all_ok:
        raise OracleFailureError("categorical and crossed-product counts disagree")
    return 0


def _cmd_k0(args) -> int:
    sys_ = ser.matrix_from_json(_load_json(args.matrix))
    desc = stationary_k0(sys_)
    doc = ser.k0_to_json(desc)
    scale = (
        str(scaled_localization(desc).scale) if isinstance(desc, RankOneForm) else None
    )
    lines = [_describe_object("matrix", desc, scale).strip()]
    _emit(args, doc, lines)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="output format (default: text)",
    )
    common.add_argument(
        "--max-group-order", type=int, default=0, metavar="N",
        help=f"refuse groups with more than N elements (default {DEFAULT_GROUP_ORDER_BOUND})",
    )

    parser = argparse.ArgumentParser(
        prog="afinv",
        description="Exact invariants of AF-actions of pointed fusion categories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fusion-table", parents=[common],
                       help="all simple bimodules and their compositions")
    p.add_argument("group", help="group JSON file (or - for stdin)")
    p.set_defaults(handler=_cmd_fusion_table)

    p = sub.add_parser("qsystems", parents=[common],
                       help="representative Q-systems of the category")
    p.add_argument("group")
    p.set_defaults(handler=_cmd_qsystems)

    p = sub.add_parser("bimodules", parents=[common],
                       help="simple bimodules between two Q-systems")
    p.add_argument("group")
    p.add_argument("--source", type=int, required=True, metavar="I",
                   help="1-based index of the source Q-system")
    p.add_argument("--target", type=int, required=True, metavar="J",
                   help="1-based index of the target Q-system")
    p.set_defaults(handler=_cmd_bimodules)

    p = sub.add_parser("invariant", parents=[common],
                       help="compute the pointed invariant of a diagram")
    p.add_argument("diagram")
    p.set_defaults(handler=_cmd_invariant)

    p = sub.add_parser("compare", parents=[common],
                       help="decide equivalence of two diagrams")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--se-lag", type=int, default=0, metavar="L",
                   help="probe bounded shift equivalence up to this lag")
    p.add_argument("--se-entries", type=int, default=0, metavar="E",
                   help="entry bound for the shift-equivalence probe")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("oracle", parents=[common],
                       help="cross-check simple counts against crossed products")
    p.add_argument("group")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("k0", parents=[common],
                       help="identify the limit of one stationary matrix")
    p.add_argument("--matrix", required=True, metavar="FILE",
                   help="matrix JSON file (or - for stdin)")
    p.set_defaults(handler=_cmd_k0)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = args.handler(args)
        seen = set()
        for w in caught:
            msg = str(w.message)
            if msg not in seen:
                seen.add(msg)
                print(f"warning: {msg}", file=sys.stderr)
        return code
    except (InvalidInputError, UnsupportedFeatureError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InternalConsistencyError, OracleFailureError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

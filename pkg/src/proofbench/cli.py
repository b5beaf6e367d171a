"""Batch command line: parse, check, instantiate, transform, export, and
launch the explorer service.

Exit codes: 0 success, 1 domain error (bad file, failed check, violated
precondition), 2 usage error.  Output is deterministic: identical
invocations print identical bytes.  The environment variable
PROOFBENCH_LIMITS ("maxClauses,maxSeconds") overrides refuter limits.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .calculus import (
    LKProof,
    ProofDatabase,
    ProofSchema,
    check_database,
    instantiate_schema,
)
from .ceres import (
    RefuterLimits,
    ceres_cut_elim,
    char_clause_set,
    compute_projections,
    extract_struct,
)
from .errors import WorkbenchError
from .exporters import ExportFormat, export_clause_set, export_proof
from .parsing import parse_path
from .transform import (
    extract_cut_formulas,
    gentzen_cut_elim,
    herbrand_sequent,
    regularize,
    skolemize,
)
from .view import proof_text, tree_text


def limits_from_env() -> RefuterLimits:
    raw = os.environ.get("PROOFBENCH_LIMITS")
    if not raw:
        return RefuterLimits()
    try:
        max_clauses, max_seconds = raw.split(",")
        return RefuterLimits(int(max_clauses), float(max_seconds))
    except ValueError:
        raise WorkbenchError(
            f"PROOFBENCH_LIMITS must be 'maxClauses,maxSeconds', got {raw!r}"
        ) from None


def _load(path: str) -> ProofDatabase:
    if not Path(path).exists():
        raise WorkbenchError(f"no such file: {path}")
    return parse_path(path)


def _resolve(db: ProofDatabase, name: str, n: int | None) -> LKProof:
    entry = db.proofs.get(name)
    if entry is None:
        raise WorkbenchError(f"no proof named {name!r} (have: {', '.join(sorted(db.proofs))})")
    if isinstance(entry, ProofSchema):
        if n is None:
            raise WorkbenchError(f"{name!r} is a schema; pass --n to pick an instance")
        return instantiate_schema(db, name, n)
    return entry


def _summary(db: ProofDatabase) -> str:
    plain = sorted(k for k, v in db.proofs.items() if isinstance(v, LKProof))
    schemas = sorted(k for k, v in db.proofs.items() if isinstance(v, ProofSchema))
    parts = []
    if plain:
        parts.append(f"{len(plain)} proof{'s' if len(plain) != 1 else ''} ({', '.join(plain)})")
    if schemas:
        parts.append(f"{len(schemas)} schema{'s' if len(schemas) != 1 else ''} ({', '.join(schemas)})")
    if not parts:
        parts.append("empty database")
    return "; ".join(parts)


def cmd_parse(args) -> int:
    db = _load(args.file)
    print(f"parsed: {_summary(db)}")
    for name in sorted(db.proofs):
        entry = db.proofs[name]
        if isinstance(entry, ProofSchema):
            print(f"  schema {name} [{entry.param}]: {entry.end_sequent}")
        else:
            print(f"  proof {name}: {entry.conclusion}")
    if db.sequent_lists:
        print(f"sequent lists: {', '.join(sorted(db.sequent_lists))}")
    if db.definitions:
        print(f"definitions: {len(db.definitions)}")
    return 0


def cmd_check(args) -> int:
    db = _load(args.file)
    if args.proof is not None and args.proof not in db.proofs:
        raise WorkbenchError(f"no proof named {args.proof!r}")
    report = check_database(db)
    if args.proof is not None:
        report.issues = [i for i in report.issues if i.path.startswith(args.proof)]
    if not report.ok:
        for issue in report.issues:
            print(str(issue), file=sys.stderr)
        return 1
    if args.proof is not None:
        entry = db.proofs[args.proof]
        kind = "schema" if isinstance(entry, ProofSchema) else "proof"
        print(f"ok: 1 {kind} ({args.proof})")
    else:
        print(f"ok: {_summary(db)}")
    return 0


def cmd_instantiate(args) -> int:
    db = _load(args.file)
    p = _resolve(db, args.proof, args.n)
    print(proof_text(p))
    return 0


def cmd_transform(args) -> int:
    db = _load(args.file)
    p = _resolve(db, args.proof, args.n)
    limits = limits_from_env()
    op = args.op
    if op == "gentzen":
        print(proof_text(gentzen_cut_elim(p)))
    elif op == "ceres":
        print(proof_text(ceres_cut_elim(p, limits)))
    elif op == "skolemize":
        print(proof_text(skolemize(p)))
    elif op == "regularize":
        print(proof_text(regularize(p)))
    elif op == "herbrand":
        hs = herbrand_sequent(p)
        print(hs.as_sequent())
        for side, members in (("left", hs.antecedent), ("right", hs.succedent)):
            for m in members:
                if m.witnesses:
                    ws = ", ".join(f"{v}:={t}" for v, t in m.witnesses)
                    print(f"  {side}: {m.formula}  from {m.origin}  [{ws}]")
    elif op == "struct":
        print(tree_text(extract_struct(p)))
    elif op == "clauseset":
        for c in char_clause_set(extract_struct(p)):
            print(f"{c} ;")
    elif op == "projections":
        projections = compute_projections(skolemize(regularize(p)))
        for i, pr in enumerate(projections):
            print(f"projection {i}: clause {pr.clause}")
            print(proof_text(pr.proof))
    elif op == "cutformulas":
        for f in extract_cut_formulas(p):
            print(f)
    else:  # pragma: no cover - argparse restricts choices
        raise WorkbenchError(f"unknown transform {op!r}")
    return 0


def cmd_export(args) -> int:
    db = _load(args.file)
    p = _resolve(db, args.proof, args.n)
    fmt = {"tex": ExportFormat.LATEX_PROOF, "tptp": ExportFormat.TPTP_CNF,
           "json": ExportFormat.JSON}[args.format]
    if fmt is ExportFormat.TPTP_CNF:
        data = export_clause_set(char_clause_set(extract_struct(p)), fmt)
    else:
        data = export_proof(p, fmt)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    db = _load(args.db) if args.db else ProofDatabase()
    app = create_app(db, static_dir=args.static_dir, cors=args.cors,
                     limits=limits_from_env())
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proofbench",
        description="Sequent-calculus workbench: parse, check, transform, "
                    "export and explore proofs and proof schemata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a database and print a summary")
    p.add_argument("file", help=".lks or .xml input, optionally .gz")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", help="validate every proof in the database")
    p.add_argument("file")
    p.add_argument("--proof", help="check only this entry")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("instantiate", help="print a schema instance")
    p.add_argument("file")
    p.add_argument("--proof", required=True)
    p.add_argument("--n", type=int, required=True, help="instance index (n >= 0)")
    p.set_defaults(func=cmd_instantiate)

    p = sub.add_parser("transform", help="run an analysis or transformation")
    p.add_argument("file")
    p.add_argument("--proof", required=True)
    p.add_argument("--op", required=True, choices=[
        "gentzen", "ceres", "skolemize", "regularize", "herbrand",
        "struct", "clauseset", "projections", "cutformulas",
    ])
    p.add_argument("--n", type=int, help="schema instance index")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("export", help="serialize a proof or its clause set")
    p.add_argument("file")
    p.add_argument("--proof", required=True)
    p.add_argument("--format", required=True, choices=["tex", "tptp", "json"])
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, help="schema instance index")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="start the explorer HTTP service")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--db", help="database file to load at startup")
    p.add_argument("--static-dir", help="directory with the viewer assets")
    p.add_argument("--cors", action="store_true", help="enable CORS (development)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WorkbenchError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: no such file: {e.filename}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

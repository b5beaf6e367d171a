"""HTTP/JSON facade for the browser explorer: load databases, list
objects, run transforms (cached by revision), fetch view documents,
search, and download exports.

One database per service instance; loads and transform writes are
serialized behind a single lock, and every served object is an
immutable snapshot, so concurrent readers never observe partial
updates.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import HTMLResponse, JSONResponse, Response

from .calculus import (
    LKProof,
    ProofDatabase,
    ProofSchema,
    check_database,
    instantiate_schema,
)
from .ceres import (
    ClauseSet,
    RefuterLimits,
    ceres_cut_elim,
    char_clause_set,
    compute_projections,
    extract_struct,
)
from .errors import (
    Cancelled,
    ParseError,
    PreconditionError,
    RefuterLimit,
    StructureError,
    ViewError,
    WorkbenchError,
)
from .exporters import (
    ExportFormat,
    FILE_SUFFIXES,
    MEDIA_TYPES,
    export_clause_set,
    export_proof,
    export_proof_json,
)
from .parsing import parse_hlks, parse_path, parse_simple_xml
from .transform import (
    CancelToken,
    extract_cut_formulas,
    gentzen_cut_elim,
    herbrand_sequent,
    regularize,
    skolemize,
)
from .view import ViewOptions, apply_view, document_to_dict, search as view_search

TRANSFORM_OPS = (
    "gentzen", "ceres", "skolemize", "regularize", "herbrand",
    "struct", "clauseset", "projections", "cutformulas",
)


@dataclass
class SessionState:
    db: ProofDatabase = field(default_factory=ProofDatabase)
    revision: int = 0
    derived: dict = field(default_factory=dict)   # name -> object
    cache: dict = field(default_factory=dict)     # (name, op, n) -> derived name
    pending: dict = field(default_factory=dict)   # derived name -> CancelToken
    lock: threading.Lock = field(default_factory=threading.Lock)

    def bump(self, db: ProofDatabase) -> int:
        with self.lock:
            self.db = db
            self.revision += 1
            self.derived.clear()
            self.cache.clear()
            return self.revision

    def lookup(self, name: str):
        if name in self.derived:
            return self.derived[name]
        return self.db.proofs.get(name)


def _error(status: int, reason: str, message: str, **extra):
    return HTTPException(status_code=status, detail={"reason": reason, "message": message, **extra})


def _domain_error(e: Exception) -> HTTPException:
    if isinstance(e, ParseError):
        return _error(400, "parse_error", str(e), line=e.span.line, column=e.span.column)
    if isinstance(e, StructureError):
        return _error(400, "structure_error", str(e), missing=e.missing, path=e.path)
    if isinstance(e, (PreconditionError, RefuterLimit, Cancelled)):
        return _error(422, "precondition_failed", str(e))
    if isinstance(e, ViewError):
        return _error(400, "view_error", str(e))
    if isinstance(e, WorkbenchError):
        return _error(400, "domain_error", str(e))
    raise e


def create_app(db: ProofDatabase | None = None, static_dir: str | None = None,
               cors: bool = False, limits: RefuterLimits | None = None) -> FastAPI:
    app = FastAPI(title="proofbench", docs_url=None, redoc_url=None)
    state = SessionState()
    if db is not None:
        state.bump(db)
    limits = limits or RefuterLimits()

    if cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
        )

    # ------------------------------------------------------------- database

    @app.get("/api/db")
    def get_db():
        entries = [
            {"name": name, "kind": state.db.kind_of(name)}
            for name in state.db.proofs
        ]
        defs = []
        if state.db.definitions:
            from .view import latex_term

            defs = [
                {"name": c.name, "expansion": str(t), "latex": latex_term(t)}
                for c, t in state.db.definitions
            ]
        return {
            "revision": state.revision,
            "proofs": entries,
            "sequentLists": sorted(state.db.sequent_lists),
            "definitions": defs,
        }

    @app.post("/api/db/load")
    def load_db(body: dict):
        fmt = body.get("format", "auto")
        try:
            if "text" in body:
                if fmt == "xml":
                    new_db = parse_simple_xml(body["text"])
                elif fmt in ("hlks", "lks", "auto"):
                    new_db = parse_hlks(body["text"])
                else:
                    raise _error(400, "bad_request", f"unknown format {fmt!r}")
            elif "path" in body:
                if not Path(body["path"]).exists():
                    raise _error(400, "bad_request", f"no such file: {body['path']}")
                new_db = parse_path(body["path"])
            else:
                raise _error(400, "bad_request", "body needs 'text' or 'path'")
        except HTTPException:
            raise
        except Exception as e:
            raise _domain_error(e)
        report = check_database(new_db)
        revision = state.bump(new_db)
        return {"revision": revision, "ok": report.ok,
                "issues": [str(i) for i in report.issues]}

    # ---------------------------------------------------------------- proofs

    def _instance(name: str, n: int | None) -> LKProof:
        entry = state.db.proofs.get(name)
        if entry is None:
            obj = state.derived.get(name)
            if isinstance(obj, LKProof):
                return obj
            raise _error(404, "not_found", f"no proof named {name!r}")
        if isinstance(entry, ProofSchema):
            if n is None:
                raise _error(422, "needs_instance",
                             f"{name!r} is a schema; pass n to pick an instance")
            key = (name, "instance", n)
            derived_name = f"{name}.{n}"
            if key not in state.cache:
                try:
                    inst = instantiate_schema(state.db, name, n)
                except Exception as e:
                    raise _domain_error(e)
                with state.lock:
                    state.derived[derived_name] = inst
                    state.cache[key] = derived_name
            return state.derived[state.cache[key]]
        return entry

    @app.get("/api/proof/{name}")
    def get_proof(name: str, n: int | None = None):
        proof = _instance(name, n)
        return json.loads(export_proof_json(proof))

    # ------------------------------------------------------------ transforms

    def _run_transform(op: str, proof: LKProof, token: CancelToken):
        if op == "gentzen":
            return gentzen_cut_elim(proof, token)
        if op == "ceres":
            return ceres_cut_elim(proof, limits, token)
        if op == "skolemize":
            return skolemize(proof)
        if op == "regularize":
            return regularize(proof)
        if op == "herbrand":
            return herbrand_sequent(proof)
        if op == "struct":
            return extract_struct(proof)
        if op == "clauseset":
            return char_clause_set(extract_struct(proof))
        if op == "projections":
            return compute_projections(skolemize(regularize(proof)))
        if op == "cutformulas":
            return tuple(extract_cut_formulas(proof))
        raise _error(400, "bad_request", f"unknown op {op!r}; have {TRANSFORM_OPS}")

    @app.post("/api/proof/{name}/transform")
    def transform(name: str, body: dict):
        op = body.get("op")
        if op not in TRANSFORM_OPS:
            raise _error(400, "bad_request", f"unknown op {op!r}; have {list(TRANSFORM_OPS)}")
        n = body.get("n")
        if "revision" in body and body["revision"] != state.revision:
            raise _error(409, "stale_revision",
                         f"request revision {body['revision']} != current {state.revision}",
                         revision=state.revision)
        proof = _instance(name, n)
        base = name if n is None else f"{name}.{n}"
        derived_name = f"{base}.{op}"
        key = (name, op, n)
        if key in state.cache:
            return {"name": state.cache[key], "computed": False, "revision": state.revision}
        token = CancelToken()
        state.pending[derived_name] = token
        try:
            result = _run_transform(op, proof, token)
        except HTTPException:
            raise
        except Exception as e:
            raise _domain_error(e)
        finally:
            state.pending.pop(derived_name, None)
        with state.lock:
            if op == "projections":
                clauses = ClauseSet(tuple(pr.clause for pr in result))
                state.derived[derived_name] = clauses
                for i, pr in enumerate(result):
                    state.derived[f"{derived_name}.{i}"] = pr.proof
            else:
                state.derived[derived_name] = result
            state.cache[key] = derived_name
        return {"name": derived_name, "computed": True, "revision": state.revision}

    @app.delete("/api/proof/{name}/transform")
    def cancel_transform(name: str, op: str, n: int | None = None):
        base = name if n is None else f"{name}.{n}"
        derived_name = f"{base}.{op}"
        token = state.pending.get(derived_name)
        if token is None:
            raise _error(404, "not_found", f"no pending transform {derived_name!r}")
        token.cancel()
        return {"cancelled": derived_name}

    # ---------------------------------------------------------------- views

    def _view_source(name: str, n: int | None):
        obj = state.lookup(name)
        if obj is None:
            raise _error(404, "not_found", f"no object named {name!r}")
        if isinstance(obj, ProofSchema):
            return _instance(name, n)
        return obj

    def _options(hideStructural: bool, hideContext: bool, markCutAncestors: bool,
                 focus: str | None, hidden: str | None) -> ViewOptions:
        return ViewOptions(
            hide_structural=hideStructural,
            hide_context=hideContext,
            mark_cut_ancestors=markCutAncestors,
            hidden_subtrees=frozenset(h for h in (hidden or "").split(",") if h),
            focus=focus or None,
        )

    @app.get("/api/object/{name}/view")
    def view(name: str,
             n: int | None = None,
             hideStructural: bool = False,
             hideContext: bool = False,
             markCutAncestors: bool = False,
             focus: str | None = None,
             hidden: str | None = None):
        source = _view_source(name, n)
        opts = _options(hideStructural, hideContext, markCutAncestors, focus, hidden)
        try:
            doc = apply_view(source, opts)
        except Exception as e:
            raise _domain_error(e)
        return {"name": name, "revision": state.revision, "document": document_to_dict(doc)}

    @app.get("/api/object/{name}/search")
    def object_search(name: str, q: str = Query(..., min_length=1),
                      n: int | None = None,
                      hideStructural: bool = False,
                      hideContext: bool = False,
                      markCutAncestors: bool = False,
                      focus: str | None = None,
                      hidden: str | None = None):
        source = _view_source(name, n)
        opts = _options(hideStructural, hideContext, markCutAncestors, focus, hidden)
        try:
            doc = apply_view(source, opts)
            matches = view_search(doc, q)
        except Exception as e:
            raise _domain_error(e)
        return {
            "query": q,
            "matches": [
                {"nodeId": m.node_id, "field": m.fld, "spans": [list(s) for s in m.spans]}
                for m in matches
            ],
        }

    @app.get("/api/object/{name}/export")
    def export(name: str, format: str, n: int | None = None):
        source = _view_source(name, n)
        fmt = {"tex": ExportFormat.LATEX_PROOF, "tptp": ExportFormat.TPTP_CNF,
               "json": ExportFormat.JSON}.get(format)
        if fmt is None:
            raise _error(400, "bad_request", f"unknown format {format!r}")
        try:
            if isinstance(source, LKProof):
                if fmt is ExportFormat.TPTP_CNF:
                    data = export_clause_set(char_clause_set(extract_struct(source)), fmt)
                else:
                    data = export_proof(source, fmt)
            elif isinstance(source, ClauseSet):
                if fmt is ExportFormat.JSON:
                    raise _error(400, "bad_request", "clause sets export as tex or tptp")
                data = export_clause_set(
                    source, ExportFormat.LATEX_CLAUSES if fmt is ExportFormat.LATEX_PROOF else fmt
                )
            else:
                raise _error(400, "bad_request",
                             f"object {name!r} has no {format} export")
        except HTTPException:
            raise
        except Exception as e:
            raise _domain_error(e)
        filename = name.replace("/", "_") + FILE_SUFFIXES[fmt]
        return Response(
            content=data,
            media_type=MEDIA_TYPES[fmt],
            headers={"Content-Disposition": f'attachment; filename="{filename}"'},
        )

    # ---------------------------------------------------------------- static

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="viewer")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<html><body><h1>proofbench service</h1>"
                "<p>The viewer assets are not built; the JSON API lives under "
                "<code>/api</code>.</p></body></html>"
            )

    return app


# Published response shapes, used by the contract tests and the viewer.
RESPONSE_SCHEMAS = {
    "db": {
        "type": "object",
        "required": ["revision", "proofs", "sequentLists", "definitions"],
        "properties": {
            "revision": {"type": "integer", "minimum": 0},
            "proofs": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "kind"],
                    "properties": {
                        "name": {"type": "string"},
                        "kind": {"enum": ["proof", "schema"]},
                    },
                },
            },
            "sequentLists": {"type": "array", "items": {"type": "string"}},
            "definitions": {"type": "array"},
        },
    },
    "transform": {
        "type": "object",
        "required": ["name", "computed", "revision"],
        "properties": {
            "name": {"type": "string"},
            "computed": {"type": "boolean"},
            "revision": {"type": "integer"},
        },
    },
    "view": {
        "type": "object",
        "required": ["name", "revision", "document"],
        "properties": {
            "document": {"$ref": "#/$defs/document"},
        },
        "$defs": {
            "render": {
                "type": "object",
                "required": ["id", "latex", "plain", "marks"],
                "properties": {
                    "id": {"type": "string"},
                    "latex": {"type": "string"},
                    "plain": {"type": "string"},
                    "marks": {"type": "array", "items": {"type": "integer"}},
                },
            },
            "proofNode": {
                "type": "object",
                "required": ["id", "rule", "sequent", "ant", "succ", "premises",
                             "dashed", "collapsed"],
                "properties": {
                    "id": {"type": "string"},
                    "rule": {"type": "string"},
                    "dashed": {"type": "boolean"},
                    "collapsed": {"type": "boolean"},
                    "sequent": {"$ref": "#/$defs/render"},
                    "ant": {"type": "array"},
                    "succ": {"type": "array"},
                    "premises": {"type": "array", "items": {"$ref": "#/$defs/proofNode"}},
                },
            },
            "treeNode": {
                "type": "object",
                "required": ["id", "label", "children", "collapsed"],
                "properties": {
                    "id": {"type": "string"},
                    "label": {"$ref": "#/$defs/render"},
                    "collapsed": {"type": "boolean"},
                    "children": {"type": "array", "items": {"$ref": "#/$defs/treeNode"}},
                },
            },
            "document": {
                "oneOf": [
                    {
                        "type": "object",
                        "required": ["kind", "root"],
                        "properties": {
                            "kind": {"const": "proof"},
                            "root": {"$ref": "#/$defs/proofNode"},
                        },
                    },
                    {
                        "type": "object",
                        "required": ["kind", "root"],
                        "properties": {
                            "kind": {"const": "tree"},
                            "root": {"$ref": "#/$defs/treeNode"},
                        },
                    },
                    {
                        "type": "object",
                        "required": ["kind", "items"],
                        "properties": {
                            "kind": {"const": "list"},
                            "items": {"type": "array", "items": {"$ref": "#/$defs/render"}},
                        },
                    },
                ]
            },
        },
    },
    "search": {
        "type": "object",
        "required": ["query", "matches"],
        "properties": {
            "matches": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["nodeId", "field", "spans"],
                    "properties": {
                        "nodeId": {"type": "string"},
                        "field": {"type": "string"},
                        "spans": {
                            "type": "array",
                            "items": {
                                "type": "array",
                                "items": {"type": "integer"},
                                "minItems": 2,
                                "maxItems": 2,
                            },
                        },
                    },
                },
            },
        },
    },
}

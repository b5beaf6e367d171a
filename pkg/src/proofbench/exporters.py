"""Serializers: LaTeX proof trees, LaTeX clause lists, TPTP cnf files,
and a versioned JSON proof format with a round-tripping reader.

Occurrence ids are canonicalized before serialization so identical
objects always produce identical bytes.
"""

from __future__ import annotations

import json
import re
from enum import Enum

from .calculus import (
    FormulaOccurrence,
    LinkRef,
    LKProof,
    RuleKind,
    Sequent,
)
from .ceres import Clause, ClauseSet
from .errors import ExportError, ParseError, SourceSpan
from .kernel import (
    Abs,
    And,
    App,
    Arrow,
    Atom,
    BaseType,
    BigAnd,
    BigOr,
    Const,
    Exists,
    ForAll,
    Imp,
    IND,
    Neg,
    Or,
    PARAM,
    PROP,
    SimpleType,
    Succ,
    Term,
    Var,
    Zero,
    num,
    succ_chain,
)
from .view import latex_formula, latex_sequent


class ExportFormat(Enum):
    LATEX_PROOF = "tex"
    LATEX_CLAUSES = "tex-clauses"
    TPTP_CNF = "tptp"
    JSON = "json"


MEDIA_TYPES = {
    ExportFormat.LATEX_PROOF: "text/x-latex",
    ExportFormat.LATEX_CLAUSES: "text/x-latex",
    ExportFormat.TPTP_CNF: "text/plain",
    ExportFormat.JSON: "application/json",
}

FILE_SUFFIXES = {
    ExportFormat.LATEX_PROOF: ".tex",
    ExportFormat.LATEX_CLAUSES: ".tex",
    ExportFormat.TPTP_CNF: ".p",
    ExportFormat.JSON: ".json",
}


# ------------------------------------------------------------- canonical ids

def canonical_ids(p: LKProof) -> LKProof:
    """Renumber occurrence ids 0..n-1 in a fixed traversal order."""
    from .calculus import _remap

    idmap: dict[int, int] = {}

    def collect(node: LKProof):
        for o in node.conclusion.occurrences():
            idmap[o.id] = len(idmap)
        if node.expansion is not None:
            collect(node.expansion)
        for q in node.premises:
            collect(q)

    collect(p)
    return _remap(p, idmap)


# ------------------------------------------------------------------- latex

def _latex_proof_lines(node: LKProof, out: list[str], indent: int) -> None:
    pad = "  " * indent
    label = node.rule_label().replace("\\", "\\backslash ")
    seq = latex_sequent(
        node.conclusion.ant_formulas(), node.conclusion.succ_formulas()
    )
    if not node.premises:
        out.append(f"{pad}\\infer[\\mathsf{{{label}}}]{{{seq}}}{{}}")
        return
    out.append(f"{pad}\\infer[\\mathsf{{{label}}}]{{{seq}}}{{")
    for i, q in enumerate(node.premises):
        _latex_proof_lines(q, out, indent + 1)
        if i + 1 < len(node.premises):
            out.append(f"{pad}  &")
    out.append(f"{pad}}}")


def export_proof_latex(p: LKProof) -> bytes:
    lines = [
        "\\documentclass{article}",
        "\\usepackage{proof}",
        "\\begin{document}",
        "\\[",
    ]
    _latex_proof_lines(canonical_ids(p), lines, 0)
    lines += ["\\]", "\\end{document}", ""]
    return "\n".join(lines).encode("utf-8")


def export_clause_set_latex(cs: ClauseSet) -> bytes:
    lines = [latex_sequent(c.ants, c.succs) + " ;" for c in cs]
    return "\n".join(lines + [""]).encode("utf-8")


# -------------------------------------------------------------------- tptp

class _NameMap:
    """Deterministic case mapping with collision suffixes."""

    def __init__(self, transform):
        self.transform = transform
        self.assigned: dict[str, str] = {}
        self.used: set[str] = set()

    def get(self, name: str) -> str:
        if name in self.assigned:
            return self.assigned[name]
        base = self.transform(name)
        if not base or not base[0].isalpha():
            base = ("f" + base) if self.transform is str.lower else ("V" + base)
        candidate = base
        n = 0
        while candidate in self.used:
            n += 1
            candidate = f"{base}_{n}"
        self.assigned[name] = candidate
        self.used.add(candidate)
        return candidate


def export_clause_set_tptp(cs: ClauseSet) -> bytes:
    """One `cnf(cN, axiom, ...).` line per clause; antecedent atoms are
    negated literals, names lowercased, variables uppercased."""
    lower = _NameMap(str.lower)
    upper = _NameMap(str.upper)

    def term(t: Term) -> str:
        if isinstance(t, Var):
            return upper.get(t.name)
        if isinstance(t, Const):
            return lower.get(t.name)
        if isinstance(t, (Zero, Succ)):
            base, k = succ_chain(t)
            if base is None:
                return str(k)
            s = term(base)
            for _ in range(k):
                s = f"{lower.get('s')}({s})"
            return s
        if isinstance(t, App):
            from .kernel import unapp

            head, args = unapp(t)
            return f"{term(head)}({','.join(term(a) for a in args)})"
        raise ExportError(f"cannot export term {t} to TPTP")

    def literal(a: Atom, positive: bool) -> str:
        if not isinstance(a, Atom):
            raise ExportError(f"clause member {a} is not atomic")
        s = lower.get(a.name)
        if a.args:
            s += f"({','.join(term(x) for x in a.args)})"
        return s if positive else "~" + s

    lines = []
    for i, c in enumerate(cs):
        lits = [literal(a, False) for a in c.ants] + [literal(a, True) for a in c.succs]
        body = " | ".join(lits) if lits else "$false"
        lines.append(f"cnf(c{i}, axiom, {body}).")
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


_TPTP_LINE = re.compile(r"cnf\(\s*([^,]+)\s*,\s*([^,]+)\s*,\s*(.*)\)\s*\.\s*$")


def import_tptp_cnf(text: str) -> ClauseSet:
    """Read back the cnf subset written by export_clause_set_tptp."""
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        m = _TPTP_LINE.match(line)
        if m is None:
            raise ParseError(SourceSpan("<tptp>", lineno, 1, len(line)), "a cnf clause", line)
        body = m.group(3).strip()
        ants: list[Atom] = []
        succs: list[Atom] = []
        if body != "$false":
            for lit in _split_literals(body):
                lit = lit.strip()
                if lit.startswith("~"):
                    ants.append(_parse_tptp_atom(lit[1:].strip(), lineno))
                else:
                    succs.append(_parse_tptp_atom(lit, lineno))
        clauses.append(Clause(tuple(ants), tuple(succs)))
    return ClauseSet(tuple(clauses))


def _split_literals(body: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "|" and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    return parts


_TPTP_ATOM = re.compile(r"([a-zA-Z0-9_$]+)\s*(?:\((.*)\))?$")


def _parse_tptp_atom(text: str, lineno: int) -> Atom:
    m = _TPTP_ATOM.match(text.strip())
    if m is None:
        raise ParseError(SourceSpan("<tptp>", lineno, 1, len(text)), "a literal", text)
    name, args = m.group(1), m.group(2)
    terms = tuple(_parse_tptp_term(a.strip(), lineno) for a in _split_args(args)) if args else ()
    return Atom(name, terms)


def _split_args(args: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(args):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(args[start:i])
            start = i + 1
    parts.append(args[start:])
    return parts


def _parse_tptp_term(text: str, lineno: int) -> Term:
    m = _TPTP_ATOM.match(text)
    if m is None:
        raise ParseError(SourceSpan("<tptp>", lineno, 1, len(text)), "a term", text)
    name, args = m.group(1), m.group(2)
    if args:
        from .kernel import app, fn_type

        sub = tuple(_parse_tptp_term(a.strip(), lineno) for a in _split_args(args))
        head = Const(name, fn_type([t.type for t in sub]))
        return app(head, *sub)
    if name[0].isupper():
        return Var(name, IND)
    return Const(name, IND)


# -------------------------------------------------------------------- json

FORMAT_VERSION = 1


def _type_json(t: SimpleType):
    if isinstance(t, BaseType):
        return t.name
    return {"src": _type_json(t.src), "dst": _type_json(t.dst)}


def _type_from_json(d) -> SimpleType:
    if isinstance(d, str):
        return {"i": IND, "o": PROP, "w": PARAM}.get(d, BaseType(d))
    return Arrow(_type_from_json(d["src"]), _type_from_json(d["dst"]))


def term_json(t: Term):
    if isinstance(t, Var):
        return {"k": "var", "name": t.name, "sort": _type_json(t.vartype)}
    if isinstance(t, Const):
        return {"k": "const", "name": t.name, "sort": _type_json(t.consttype)}
    if isinstance(t, Zero):
        return {"k": "zero"}
    if isinstance(t, Succ):
        return {"k": "succ", "arg": term_json(t.arg)}
    if isinstance(t, App):
        return {"k": "app", "fn": term_json(t.fn), "arg": term_json(t.arg)}
    if isinstance(t, Abs):
        return {"k": "abs", "var": term_json(t.var), "body": term_json(t.body)}
    if isinstance(t, Atom):
        return {"k": "atom", "name": t.name, "args": [term_json(a) for a in t.args]}
    if isinstance(t, Neg):
        return {"k": "neg", "sub": term_json(t.sub)}
    if isinstance(t, (And, Or, Imp)):
        k = {And: "and", Or: "or", Imp: "imp"}[type(t)]
        return {"k": k, "left": term_json(t.left), "right": term_json(t.right)}
    if isinstance(t, (ForAll, Exists)):
        k = "all" if isinstance(t, ForAll) else "ex"
        return {"k": k, "var": term_json(t.var), "body": term_json(t.body)}
    if isinstance(t, (BigAnd, BigOr)):
        k = "bigand" if isinstance(t, BigAnd) else "bigor"
        return {
            "k": k,
            "var": term_json(t.var),
            "lower": term_json(t.lower),
            "upper": term_json(t.upper),
            "body": term_json(t.body),
        }
    raise ExportError(f"cannot serialize {t!r}")


def term_from_json(d) -> Term:
    k = d["k"]
    if k == "var":
        return Var(d["name"], _type_from_json(d["sort"]))
    if k == "const":
        return Const(d["name"], _type_from_json(d["sort"]))
    if k == "zero":
        return Zero()
    if k == "succ":
        return Succ(term_from_json(d["arg"]))
    if k == "app":
        return App(term_from_json(d["fn"]), term_from_json(d["arg"]))
    if k == "abs":
        return Abs(term_from_json(d["var"]), term_from_json(d["body"]))
    if k == "atom":
        return Atom(d["name"], tuple(term_from_json(a) for a in d["args"]))
    if k == "neg":
        return Neg(term_from_json(d["sub"]))
    if k in ("and", "or", "imp"):
        cls = {"and": And, "or": Or, "imp": Imp}[k]
        return cls(term_from_json(d["left"]), term_from_json(d["right"]))
    if k in ("all", "ex"):
        cls = ForAll if k == "all" else Exists
        return cls(term_from_json(d["var"]), term_from_json(d["body"]))
    if k in ("bigand", "bigor"):
        cls = BigAnd if k == "bigand" else BigOr
        return cls(
            term_from_json(d["var"]),
            term_from_json(d["lower"]),
            term_from_json(d["upper"]),
            term_from_json(d["body"]),
        )
    raise ParseError(SourceSpan("<json>", 1, 1), "a known term kind", str(k))


def _occ_json(o: FormulaOccurrence) -> dict:
    return {
        "id": o.id,
        "parents": list(o.parents),
        "formula": term_json(o.formula),
        "plain": str(o.formula),
        "latex": latex_formula(o.formula),
    }


def _node_json(p: LKProof) -> dict:
    d = {
        "rule": p.rule.value,
        "conclusion": {
            "ant": [_occ_json(o) for o in p.conclusion.antecedent],
            "succ": [_occ_json(o) for o in p.conclusion.succedent],
        },
        "aux": list(p.aux),
        "main": list(p.main),
        "premises": [_node_json(q) for q in p.premises],
        "plain": str(p.conclusion),
        "latex": latex_sequent(p.conclusion.ant_formulas(), p.conclusion.succ_formulas()),
    }
    if p.witness is not None:
        d["witness"] = term_json(p.witness)
    if p.eigen is not None:
        d["eigen"] = term_json(p.eigen)
    if p.link is not None:
        d["link"] = {"name": p.link.name}
        if p.link.arg is not None:
            d["link"]["arg"] = term_json(p.link.arg)
    if p.label is not None:
        d["label"] = p.label
    if p.expansion is not None:
        d["expansion"] = _node_json(p.expansion)
    return d


def export_proof_json(p: LKProof) -> bytes:
    doc = {"formatVersion": FORMAT_VERSION, "kind": "proof", "root": _node_json(canonical_ids(p))}
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def import_proof_json(data: bytes | str) -> LKProof:
    doc = json.loads(data)
    if doc.get("formatVersion") != FORMAT_VERSION:
        raise ParseError(
            SourceSpan("<json>", 1, 1), f"formatVersion {FORMAT_VERSION}",
            str(doc.get("formatVersion")),
        )
    from .calculus import fresh_id

    idmap: dict[int, int] = {}

    def occ(d) -> FormulaOccurrence:
        new = idmap.setdefault(d["id"], fresh_id())
        parents = tuple(idmap.setdefault(q, fresh_id()) for q in d["parents"])
        return FormulaOccurrence(new, term_from_json(d["formula"]), parents)

    def node(d) -> LKProof:
        premises = tuple(node(q) for q in d["premises"])
        expansion = node(d["expansion"]) if "expansion" in d else None
        concl = Sequent(
            tuple(occ(o) for o in d["conclusion"]["ant"]),
            tuple(occ(o) for o in d["conclusion"]["succ"]),
        )
        link = None
        if "link" in d:
            arg = term_from_json(d["link"]["arg"]) if "arg" in d["link"] else None
            link = LinkRef(d["link"]["name"], arg)
        return LKProof(
            RuleKind(d["rule"]),
            concl,
            premises,
            aux=tuple(idmap.setdefault(i, fresh_id()) for i in d["aux"]),
            main=tuple(idmap.setdefault(i, fresh_id()) for i in d["main"]),
            witness=term_from_json(d["witness"]) if "witness" in d else None,
            eigen=term_from_json(d["eigen"]) if "eigen" in d else None,
            link=link,
            label=d.get("label"),
            expansion=expansion,
        )

    return node(doc["root"])


# ---------------------------------------------------------------- dispatch

def export_proof(p: LKProof, fmt: ExportFormat) -> bytes:
    if fmt is ExportFormat.LATEX_PROOF:
        return export_proof_latex(p)
    if fmt is ExportFormat.JSON:
        return export_proof_json(p)
    raise ExportError(f"proofs cannot be exported as {fmt.value}")


def export_clause_set(cs: ClauseSet, fmt: ExportFormat) -> bytes:
    if fmt is ExportFormat.LATEX_CLAUSES or fmt is ExportFormat.LATEX_PROOF:
        return export_clause_set_latex(cs)
    if fmt is ExportFormat.TPTP_CNF:
        return export_clause_set_tptp(cs)
    raise ExportError(f"clause sets cannot be exported as {fmt.value}")

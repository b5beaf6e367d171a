"""The display model: LaTeX strings for formulas, renderable documents
for proofs, trees and lists, view transformations (hide structural
rules, hide sequent context, cut-ancestor marking, split/hide), and
exact-substring search over the rendered strings.

Rendering table: /\\ -> \\land, \\/ -> \\lor, ~ -> \\neg, -> -> \\to,
|- -> \\vdash, all/ex -> \\forall/\\exists, BigAnd/BigOr ->
\\bigwedge/\\bigvee with bounds.  Search is case-sensitive and exact;
the search string must match the LaTeX form character by character.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .calculus import LKProof, RuleKind, Sequent, STRUCTURAL_RULES, cut_ancestors
from .ceres import CeresStruct, Clause, ClauseSet, Leaf, Refutation, ResolutionStep
from .ceres import FactorStep, InputStep, ResolventStep
from .errors import ViewError
from .kernel import (
    Abs,
    And,
    App,
    Atom,
    BigAnd,
    BigOr,
    Const,
    DefinitionList,
    Exists,
    ForAll,
    Formula,
    Imp,
    Neg,
    Or,
    Succ,
    Term,
    Var,
    Zero,
    succ_chain,
    unapp,
)
from .transform import HerbrandSequent


# ------------------------------------------------------------------ latex

def latex_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, (Zero, Succ)):
        base, k = succ_chain(t)
        if base is None:
            return str(k)
        if k == 0:
            return latex_term(base)
        return f"{latex_term(base)}+{k}"
    if isinstance(t, App):
        head, args = unapp(t)
        return f"{latex_term(head)}({','.join(latex_term(a) for a in args)})"
    if isinstance(t, Abs):
        return f"\\lambda {t.var.name}. {latex_term(t.body)}"
    raise ViewError(f"cannot render term {t!r}")


def _prec(f: Formula) -> int:
    if isinstance(f, Imp):
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    return 4


def _wrap(f: Formula, min_prec: int) -> str:
    s = latex_formula(f)
    return f"({s})" if _prec(f) < min_prec else s


def latex_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.name
        return f"{f.name}({','.join(latex_term(a) for a in f.args)})"
    if isinstance(f, Neg):
        return f"\\neg {_wrap(f.sub, 4)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, 3)} \\land {_wrap(f.right, 4)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, 2)} \\lor {_wrap(f.right, 3)}"
    if isinstance(f, Imp):
        return f"{_wrap(f.left, 2)} \\to {_wrap(f.right, 1)}"
    if isinstance(f, ForAll):
        return f"\\forall {f.var.name}\\, {_wrap(f.body, 4)}"
    if isinstance(f, Exists):
        return f"\\exists {f.var.name}\\, {_wrap(f.body, 4)}"
    if isinstance(f, BigAnd):
        return (
            f"\\bigwedge_{{{f.var.name}={latex_term(f.lower)}}}"
            f"^{{{latex_term(f.upper)}}} {_wrap(f.body, 4)}"
        )
    if isinstance(f, BigOr):
        return (
            f"\\bigvee_{{{f.var.name}={latex_term(f.lower)}}}"
            f"^{{{latex_term(f.upper)}}} {_wrap(f.body, 4)}"
        )
    raise ViewError(f"cannot render formula {f!r}")


def latex_sequent(ants, succs) -> str:
    left = ", ".join(latex_formula(f) for f in ants)
    right = ", ".join(latex_formula(f) for f in succs)
    return f"{left} \\vdash {right}".strip()


# -------------------------------------------------------------- documents

@dataclass(frozen=True)
class RenderFormula:
    occ_id: int
    latex: str
    plain: str


@dataclass(frozen=True)
class RenderNode:
    id: str
    latex: str
    plain: str
    highlights: tuple = ()
    marks: tuple = ()


@dataclass(frozen=True)
class ProofNode:
    id: str
    rule: str
    sequent: RenderNode
    ant: tuple[RenderFormula, ...]
    succ: tuple[RenderFormula, ...]
    premises: tuple["ProofNode", ...] = ()
    dashed: bool = False
    collapsed: bool = False

    def walk(self):
        yield self
        for q in self.premises:
            yield from q.walk()


@dataclass(frozen=True)
class TreeNode:
    id: str
    label: RenderNode
    children: tuple["TreeNode", ...] = ()
    collapsed: bool = False

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class ProofDoc:
    kind = "proof"
    root: ProofNode


@dataclass(frozen=True)
class TreeDoc:
    kind = "tree"
    root: TreeNode


@dataclass(frozen=True)
class ListDoc:
    kind = "list"
    items: tuple[RenderNode, ...]


ViewDocument = ProofDoc | TreeDoc | ListDoc


@dataclass(frozen=True)
class ViewOptions:
    hide_structural: bool = False
    hide_context: bool = False
    mark_cut_ancestors: bool = False
    hidden_subtrees: frozenset = frozenset()
    focus: str | None = None


def mark_cut_ancestors(p: LKProof) -> frozenset[int]:
    """Occurrence ids with a descendant that is a cut auxiliary."""
    return cut_ancestors(p)


# ------------------------------------------------------------- proof docs

def _child_aux_ids(parent: LKProof | None) -> frozenset[int]:
    return frozenset(parent.aux) if parent is not None else frozenset()


def _render_sequent_node(node: LKProof, path: str, opts: ViewOptions,
                         shown_below: frozenset[int], marks: frozenset[int]) -> tuple:
    # under hide-context, an inner sequent shows only the active formulas:
    # mains of its own inference plus auxes of the inference below it
    visible: set[int] | None = None
    if opts.hide_context and node.premises:
        visible = set(node.main) | set(shown_below)
    ants = []
    succs = []
    ant_parts = []
    succ_parts = []
    for side, bucket, parts in (
        (node.conclusion.antecedent, ants, ant_parts),
        (node.conclusion.succedent, succs, succ_parts),
    ):
        hidden_any = False
        for o in side:
            if visible is not None and o.id not in visible:
                hidden_any = True
                continue
            rf = RenderFormula(o.id, latex_formula(o.formula), str(o.formula))
            bucket.append(rf)
            parts.append(rf.latex)
        if hidden_any:
            parts.append("\\cdots")
    latex = f"{', '.join(ant_parts)} \\vdash {', '.join(succ_parts)}".strip()
    plain = str(node.conclusion) if visible is None else latex
    node_marks = tuple(
        o.id for o in node.conclusion.occurrences() if o.id in marks
    )
    rn = RenderNode(path, latex, plain, marks=node_marks)
    return rn, tuple(ants), tuple(succs)


def _proof_to_doc(p: LKProof, opts: ViewOptions) -> ProofDoc:
    marks: frozenset[int] = frozenset()
    if opts.mark_cut_ancestors:
        marks = cut_ancestors(p)

    if opts.focus is not None:
        target = p.node_at(opts.focus)
        if target is None:
            raise ViewError(f"no node {opts.focus!r} in the proof")
        p, base_path = target, opts.focus
    else:
        base_path = "r"

    def build(node: LKProof, path: str, shown_below: frozenset[int]) -> ProofNode:
        if path in opts.hidden_subtrees:
            rn, ants, succs = _render_sequent_node(node, path, opts, shown_below, marks)
            return ProofNode(path, node.rule_label(), rn, ants, succs, (), collapsed=True)
        if opts.hide_structural and node.rule in STRUCTURAL_RULES:
            # collapse the maximal structural chain into one dashed line
            top = node
            while top.rule in STRUCTURAL_RULES:
                top = top.premises[0]
            rn, ants, succs = _render_sequent_node(node, path, opts, shown_below, marks)
            inner = build(top, path + "0" * _chain_len(node), frozenset())
            return ProofNode(path, "*", rn, ants, succs, (inner,), dashed=True)
        rn, ants, succs = _render_sequent_node(node, path, opts, shown_below, marks)
        premises = tuple(
            build(q, path + str(i), frozenset(node.aux))
            for i, q in enumerate(node.premises)
        )
        return ProofNode(path, node.rule_label(), rn, ants, succs, premises)

    def _chain_len(node: LKProof) -> int:
        n = 0
        while node.rule in STRUCTURAL_RULES:
            n += 1
            node = node.premises[0]
        return n

    return ProofDoc(build(p, base_path, frozenset()))


# -------------------------------------------------------------- tree docs

def _struct_label(s: CeresStruct) -> tuple[str, str]:
    if isinstance(s, Leaf):
        return (_clause_latex(s.clause), str(s.clause))
    sym = "\\oplus" if s.__class__.__name__ == "Plus" else "\\otimes"
    plain = "+" if sym == "\\oplus" else "*"
    return sym, plain


def _clause_latex(c: Clause) -> str:
    return latex_sequent(c.ants, c.succs)


def _struct_to_tree(s: CeresStruct, path: str, opts: ViewOptions) -> TreeNode:
    latex, plain = _struct_label(s)
    label = RenderNode(path, latex, plain)
    if path in opts.hidden_subtrees:
        return TreeNode(path, label, (), collapsed=True)
    if isinstance(s, Leaf):
        return TreeNode(path, label)
    children = (
        _struct_to_tree(s.left, path + "0", opts),
        _struct_to_tree(s.right, path + "1", opts),
    )
    return TreeNode(path, label, children)


def _resolution_to_tree(step: ResolutionStep, path: str, opts: ViewOptions) -> TreeNode:
    kind = {"InputStep": "input", "ResolventStep": "resolve", "FactorStep": "factor"}[
        type(step).__name__
    ]
    label = RenderNode(path, f"{_clause_latex(step.clause)}\\;[{kind}]",
                       f"{step.clause}  [{kind}]")
    if path in opts.hidden_subtrees:
        return TreeNode(path, label, (), collapsed=True)
    children = tuple(
        _resolution_to_tree(q, path + str(i), opts)
        for i, q in enumerate(step.premises())
    )
    return TreeNode(path, label, children)


# ---------------------------------------------------------------- dispatch

def apply_view(source, opts: ViewOptions | None = None) -> ViewDocument:
    """Total dispatch: proofs render as proof documents, structs and
    refutations as trees, clause sets / sequent lists / definition lists
    as line lists."""
    opts = opts or ViewOptions()
    _validate_ids(source, opts)
    if isinstance(source, LKProof):
        return _proof_to_doc(source, opts)
    if isinstance(source, CeresStruct):
        return TreeDoc(_struct_to_tree(source, "r", opts))
    if isinstance(source, Refutation):
        return TreeDoc(_resolution_to_tree(source.root, "r", opts))
    if isinstance(source, ResolutionStep):
        return TreeDoc(_resolution_to_tree(source, "r", opts))
    if isinstance(source, ClauseSet):
        return ListDoc(tuple(
            RenderNode(f"i{i}", _clause_latex(c), str(c))
            for i, c in enumerate(source)
        ))
    if isinstance(source, HerbrandSequent):
        s = source.as_sequent()
        return ListDoc((
            RenderNode("i0", latex_sequent(s.ant_formulas(), s.succ_formulas()), str(s)),
        ))
    if isinstance(source, Sequent):
        return ListDoc((
            RenderNode("i0", latex_sequent(source.ant_formulas(), source.succ_formulas()),
                       str(source)),
        ))
    if isinstance(source, DefinitionList):
        return ListDoc(tuple(
            RenderNode(f"i{i}", f"{c.name} := {latex_term(t)}", f"{c.name} := {t}")
            for i, (c, t) in enumerate(source)
        ))
    if isinstance(source, (list, tuple)):
        items = []
        for i, s in enumerate(source):
            if isinstance(s, Sequent):
                items.append(RenderNode(
                    f"i{i}", latex_sequent(s.ant_formulas(), s.succ_formulas()), str(s)
                ))
            elif isinstance(s, Formula):
                items.append(RenderNode(f"i{i}", latex_formula(s), str(s)))
            else:
                items.append(RenderNode(f"i{i}", str(s), str(s)))
        return ListDoc(tuple(items))
    raise ViewError(f"cannot display object of type {type(source).__name__}")


def _validate_ids(source, opts: ViewOptions) -> None:
    ids: set[str] = set()
    if isinstance(source, LKProof):
        ids = {path for path, _ in source.nodes()}
    elif isinstance(source, (CeresStruct, Refutation, ResolutionStep)):
        # tree paths are validated lazily; compute them the same way
        def paths(n, path, out):
            out.add(path)
            kids = []
            if isinstance(n, CeresStruct):
                kids = [] if isinstance(n, Leaf) else [n.left, n.right]
            elif isinstance(n, ResolutionStep):
                kids = list(n.premises())
            for i, k in enumerate(kids):
                paths(k, path + str(i), out)

        root = source.root if isinstance(source, Refutation) else source
        paths(root, "r", ids)
    else:
        if opts.hidden_subtrees or opts.focus:
            raise ViewError("hide/focus options apply to proofs and trees only")
        return
    for h in opts.hidden_subtrees:
        if h not in ids:
            raise ViewError(f"no node {h!r} to hide")
    if opts.focus is not None and opts.focus not in ids:
        raise ViewError(f"no node {opts.focus!r} to focus")


# ------------------------------------------------------------------ search

@dataclass(frozen=True)
class SearchMatch:
    node_id: str
    fld: str
    spans: tuple[tuple[int, int], ...]


def _spans(haystack: str, needle: str) -> tuple[tuple[int, int], ...]:
    out = []
    start = haystack.find(needle)
    while start != -1:
        out.append((start, start + len(needle)))
        start = haystack.find(needle, start + 1)
    return tuple(out)


def search(doc: ViewDocument, query: str) -> list[SearchMatch]:
    """Exact substring matches over every rendered LaTeX string and every
    inference name; all (possibly overlapping) occurrences are reported."""
    if not query:
        raise ViewError("empty search query")
    out: list[SearchMatch] = []

    def consider(node_id: str, fld: str, text: str):
        sp = _spans(text, query)
        if sp:
            out.append(SearchMatch(node_id, fld, sp))

    if isinstance(doc, ProofDoc):
        for node in doc.root.walk():
            consider(node.id, "sequent", node.sequent.latex)
            consider(node.id, "rule", node.rule)
    elif isinstance(doc, TreeDoc):
        for node in doc.root.walk():
            consider(node.id, "label", node.label.latex)
    else:
        for item in doc.items:
            consider(item.id, "item", item.latex)
    return out


def node_latex(doc: ViewDocument, node_id) -> str:
    """The exact LaTeX string of a node or of a single formula occurrence
    (integer ids address occurrences inside proof documents)."""
    if isinstance(node_id, int) or (isinstance(node_id, str) and node_id.isdigit()):
        want = int(node_id)
        if isinstance(doc, ProofDoc):
            for node in doc.root.walk():
                for rf in node.ant + node.succ:
                    if rf.occ_id == want:
                        return rf.latex
        raise ViewError(f"no formula occurrence {node_id!r} in the document")
    if isinstance(doc, ProofDoc):
        for node in doc.root.walk():
            if node.id == node_id:
                return node.sequent.latex
    elif isinstance(doc, TreeDoc):
        for node in doc.root.walk():
            if node.id == node_id:
                return node.label.latex
    else:
        for item in doc.items:
            if item.id == node_id:
                return item.latex
    raise ViewError(f"no node {node_id!r} in the document")


# -------------------------------------------------------------- plain text

def proof_text(p: LKProof) -> str:
    """Deterministic indented rendering, one inference per line."""
    lines: list[str] = []

    def go(node: LKProof, depth: int):
        lines.append("  " * depth + f"[{node.rule_label()}] {node.conclusion}")
        for q in node.premises:
            go(q, depth + 1)

    go(p, 0)
    return "\n".join(lines)


def tree_text(source) -> str:
    """Indented rendering of a struct or refutation tree."""
    doc = apply_view(source)
    if not isinstance(doc, TreeDoc):
        raise ViewError(f"{type(source).__name__} is not a tree")
    lines: list[str] = []

    def go(node: TreeNode, depth: int):
        lines.append("  " * depth + node.label.plain)
        for c in node.children:
            go(c, depth + 1)

    go(doc.root, 0)
    return "\n".join(lines)


# -------------------------------------------------------------------- json

def document_to_dict(doc: ViewDocument) -> dict:
    if isinstance(doc, ProofDoc):
        return {"kind": "proof", "root": _proof_node_dict(doc.root)}
    if isinstance(doc, TreeDoc):
        return {"kind": "tree", "root": _tree_node_dict(doc.root)}
    return {
        "kind": "list",
        "items": [_render_dict(i) for i in doc.items],
    }


def _render_dict(r: RenderNode) -> dict:
    return {
        "id": r.id,
        "latex": r.latex,
        "plain": r.plain,
        "marks": list(r.marks),
    }


def _proof_node_dict(n: ProofNode) -> dict:
    return {
        "id": n.id,
        "rule": n.rule,
        "dashed": n.dashed,
        "collapsed": n.collapsed,
        "sequent": _render_dict(n.sequent),
        "ant": [{"occ": f.occ_id, "latex": f.latex, "plain": f.plain} for f in n.ant],
        "succ": [{"occ": f.occ_id, "latex": f.latex, "plain": f.plain} for f in n.succ],
        "premises": [_proof_node_dict(q) for q in n.premises],
    }


def _tree_node_dict(n: TreeNode) -> dict:
    return {
        "id": n.id,
        "label": _render_dict(n.label),
        "collapsed": n.collapsed,
        "children": [_tree_node_dict(c) for c in n.children],
    }

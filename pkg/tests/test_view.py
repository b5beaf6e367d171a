import random

import pytest

from proofbench.calculus import (
    RuleKind,
    axiom,
    cut,
    instantiate_schema,
    neg_l,
    weak_l,
)
from proofbench.ceres import ClauseSet, Clause, char_clause_set, extract_struct, refute, Refutation
from proofbench.errors import ViewError
from proofbench.kernel import Atom, BigAnd, Neg, ZERO, num, param_var
from proofbench.view import (
    ListDoc,
    ProofDoc,
    TreeDoc,
    ViewOptions,
    apply_view,
    document_to_dict,
    latex_formula,
    mark_cut_ancestors,
    node_latex,
    search,
)
from conftest import A, P, Q, build_chain_schema, chain_body


# ------------------------------------------------------------------ marks

def test_mark_cut_ancestors_one_cut(one_cut_proof):
    assert len(mark_cut_ancestors(one_cut_proof)) == 2


def test_mark_cut_ancestors_cut_free(forall_exists_proof):
    assert mark_cut_ancestors(forall_exists_proof) == frozenset()


def test_marks_survive_weakening(one_cut_proof):
    extended = weak_l(one_cut_proof, Q)
    assert mark_cut_ancestors(extended) == mark_cut_ancestors(one_cut_proof)
    doc = apply_view(extended, ViewOptions(mark_cut_ancestors=True))
    marked = [m for n in doc.root.walk() for m in n.sequent.marks]
    assert len(set(marked)) == 2


# ------------------------------------------------------------------- latex

def test_latex_table():
    i = param_var("i")
    k = param_var("k")
    assert latex_formula(Neg(Atom("P_{k+1}"))) == "\\neg P_{k+1}"
    assert latex_formula(Atom("P")) == "P"
    assert latex_formula(BigAnd(i, ZERO, k, A(i))) == "\\bigwedge_{i=0}^{k} A(i)"
    assert latex_formula(chain_body(num(0))) == "\\neg A(0) \\lor A(1)"


# --------------------------------------------------------------- documents

def test_default_view_is_identity(one_cut_proof):
    doc = apply_view(one_cut_proof)
    assert isinstance(doc, ProofDoc)
    nodes = list(doc.root.walk())
    assert [n.id for n in nodes] == [path for path, _ in one_cut_proof.nodes()]
    assert [n.rule for n in nodes] == ["cut", "ax", "ax"]
    assert doc.root.sequent.plain == "P |- P"


def test_hide_structural_collapses_chain(one_cut_proof):
    p = weak_l(one_cut_proof, Q)
    doc = apply_view(p, ViewOptions(hide_structural=True))
    nodes = list(doc.root.walk())
    visible = [n for n in nodes if not n.dashed]
    assert len(visible) == 3  # cut and the two axioms
    assert doc.root.dashed and doc.root.rule == "*"
    # the end-sequent stays visible on the dashed node
    assert doc.root.sequent.plain == str(p.conclusion)


def test_hide_structural_keeps_nonstructural_count(corpus_cut_proofs):
    from proofbench.calculus import STRUCTURAL_RULES, expand_autoprop

    for p in corpus_cut_proofs[:6]:
        q = expand_autoprop(p)
        doc = apply_view(q, ViewOptions(hide_structural=True))
        visible = [n for n in doc.root.walk() if not n.dashed]
        want = sum(1 for _, n in q.nodes() if n.rule not in STRUCTURAL_RULES)
        assert len(visible) == want


def test_hide_context_shows_active_formulas_only():
    p = neg_l(axiom(P), P)  # ~P, P |-
    p = weak_l(p, Q)
    doc = apply_view(p, ViewOptions(hide_context=True))
    root = doc.root
    # root inference is the weakening: only its main Q is visible
    assert [rf.plain for rf in root.ant] == ["Q"]
    assert "\\cdots" in root.sequent.latex
    # leaf sequents show everything
    leaf = root.premises[0].premises[0]
    assert [rf.plain for rf in leaf.ant] == ["P"]
    assert [rf.plain for rf in leaf.succ] == ["P"]


def test_focus_subproof(one_cut_proof):
    doc = apply_view(one_cut_proof, ViewOptions(focus="r0"))
    assert doc.root.rule == "ax"
    assert doc.root.id == "r0"


def test_hidden_subtree_collapses(one_cut_proof):
    doc = apply_view(one_cut_proof, ViewOptions(hidden_subtrees=frozenset({"r1"})))
    stub = doc.root.premises[1]
    assert stub.collapsed and stub.premises == ()


def test_dangling_ids_rejected(one_cut_proof):
    with pytest.raises(ViewError):
        apply_view(one_cut_proof, ViewOptions(focus="zzz"))
    with pytest.raises(ViewError):
        apply_view(one_cut_proof, ViewOptions(hidden_subtrees=frozenset({"r9"})))


def test_struct_tree_doc(one_cut_proof):
    s = extract_struct(one_cut_proof)
    doc = apply_view(s)
    assert isinstance(doc, TreeDoc)
    assert doc.root.label.plain == "+"
    assert len(doc.root.children) == 2
    collapsed = apply_view(s, ViewOptions(hidden_subtrees=frozenset({"r0"})))
    assert collapsed.root.children[0].collapsed


def test_clause_set_list_doc(one_cut_proof):
    cs = char_clause_set(extract_struct(one_cut_proof))
    doc = apply_view(cs)
    assert isinstance(doc, ListDoc)
    assert [i.plain for i in doc.items] == ["|- P", "P |-"]


def test_refutation_tree_duplicates_shared_steps(one_cut_proof):
    cs = char_clause_set(extract_struct(one_cut_proof))
    out = refute(cs)
    assert isinstance(out, Refutation)
    doc = apply_view(out)
    rendered = sum(1 for _ in doc.root.walk())
    assert rendered >= len(out.steps())


# ------------------------------------------------------------------ search

def test_search_finds_inference_name(one_cut_proof):
    doc = apply_view(one_cut_proof)
    hits = search(doc, "cut")
    assert len(hits) == 1
    assert hits[0].fld == "rule" and hits[0].node_id == "r"


def test_search_is_space_exact():
    p = neg_l(axiom(Atom("P_{k+1}")), Atom("P_{k+1}"))
    doc = apply_view(p)
    assert search(doc, "\\neg P_{k+1}")
    assert search(doc, "\\neg  P_{k+1}") == []


def test_search_no_match(one_cut_proof):
    assert search(apply_view(one_cut_proof), "zzz") == []


def test_search_matches_brute_force(corpus_cut_proofs):
    rng = random.Random(77)

    def brute(doc, query):
        texts = []
        if isinstance(doc, ProofDoc):
            for n in doc.root.walk():
                texts.append((n.id, "sequent", n.sequent.latex))
                texts.append((n.id, "rule", n.rule))
        elif isinstance(doc, TreeDoc):
            for n in doc.root.walk():
                texts.append((n.id, "label", n.label.latex))
        else:
            for i in doc.items:
                texts.append((i.id, "item", i.latex))
        out = []
        for nid, fld, text in texts:
            spans = []
            for start in range(len(text)):
                if text.startswith(query, start):
                    spans.append((start, start + len(query)))
            if spans:
                out.append((nid, fld, tuple(spans)))
        return out

    docs = [apply_view(p) for p in corpus_cut_proofs[:6]]
    docs.append(apply_view(extract_struct(corpus_cut_proofs[0])))
    docs.append(apply_view(char_clause_set(extract_struct(corpus_cut_proofs[0]))))
    corpus_queries = ["P", "\\land", "cut", "ax", "\\vdash", "Q \\lor", "zz", " "]
    for _ in range(200):
        doc = rng.choice(docs)
        q = rng.choice(corpus_queries)
        got = [(m.node_id, m.fld, m.spans) for m in search(doc, q)]
        assert got == brute(doc, q)


# -------------------------------------------------------------- node latex

def test_node_latex_examples():
    p = neg_l(axiom(Atom("P_{k+1}")), Atom("P_{k+1}"))
    doc = apply_view(p)
    neg_occ = next(rf for n in doc.root.walk() for rf in n.ant if rf.plain.startswith("~"))
    assert node_latex(doc, neg_occ.occ_id) == "\\neg P_{k+1}"
    q = apply_view(axiom(P))
    first = q.root.ant[0]
    assert node_latex(q, first.occ_id) == "P"
    assert node_latex(q, "r") == "P \\vdash P"
    with pytest.raises(ViewError):
        node_latex(q, "r99")


def test_document_serialization_shape(one_cut_proof):
    d = document_to_dict(apply_view(one_cut_proof))
    assert d["kind"] == "proof"
    assert d["root"]["rule"] == "cut"
    assert len(d["root"]["premises"]) == 2
    s = document_to_dict(apply_view(extract_struct(one_cut_proof)))
    assert s["kind"] == "tree"

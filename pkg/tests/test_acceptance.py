"""Acceptance suite: one test per release criterion, each printing a
PASS line.  Run with `pytest tests/test_acceptance.py -v -s`.

The desk corpus is the inductive chain schema, the three running
examples (one-cut, forall/exists, exists-identity), and a seeded family
of 20 random valid proofs with 1-2 cuts and at most 15 nodes.
"""

import gzip
import itertools
import random
import time
from pathlib import Path

import pytest

from proofbench.calculus import (
    Countermodel,
    LKProof,
    RuleKind,
    autoprop,
    check_proof,
    instantiate_schema,
    proof_equal,
    sequent_valid_truth_table,
    substitute_sequent,
)
from proofbench.ceres import (
    Refutation,
    RefuterLimits,
    ceres_cut_elim,
    char_clause_set,
    extract_struct,
    refute,
)
from proofbench.errors import StructureError
from proofbench.exporters import (
    ExportFormat,
    export_clause_set_tptp,
    export_proof_json,
    import_proof_json,
    import_tptp_cnf,
)
from proofbench.kernel import (
    And,
    Atom,
    Const,
    Imp,
    Neg,
    Or,
    is_quantifier_free,
    num,
    param_var,
)
from proofbench.parsing import parse_hlks, parse_path, parse_simple_xml, read_input
from proofbench.transform import (
    gentzen_cut_elim,
    herbrand_sequent,
    is_end_sequent_instance,
    skolemize,
)
from proofbench.view import ProofDoc, TreeDoc, apply_view, search
from conftest import (
    A,
    P,
    Q,
    R,
    build_chain_schema,
    conjunction_cut_proof,
    quantified_cut_proof,
    random_cut_proofs,
)

DATA = Path(__file__).parent / "data"
CHAIN_TEXT = (DATA / "chain.lks").read_text()

LIMITS = RefuterLimits(max_clauses=10000, max_seconds=10)


def _corpus_with_cuts():
    proofs = random_cut_proofs()
    proofs.append(conjunction_cut_proof())
    proofs.append(quantified_cut_proof())
    db = build_chain_schema()
    proofs += [instantiate_schema(db, "psi", n) for n in (1, 2)]
    return proofs


def _passed(name: str):
    print(f"ACCEPTANCE PASS: {name}")


def test_chain_schema_round_trip():
    start = time.perf_counter()
    db = parse_hlks(CHAIN_TEXT)
    schema = db.proofs["psi"]
    k = param_var("k")
    for n in (0, 1, 2, 3):
        inst = instantiate_schema(db, "psi", n)
        report = check_proof(inst)
        assert report.ok, f"n={n}: {report}"
        want = substitute_sequent(schema.end_sequent, {k: num(n)})
        assert inst.conclusion.same_formulas(want), f"n={n}"
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    _passed(f"chain schema round trip (n=0..3, {elapsed * 1000:.0f} ms)")


def test_ceres_unsatisfiability():
    proofs = _corpus_with_cuts()
    for i, p in enumerate(proofs):
        q = skolemize(p)
        cs = char_clause_set(extract_struct(q))
        out = refute(cs, LIMITS)
        assert isinstance(out, Refutation), f"corpus proof {i}: {out}"
    _passed(f"characteristic clause sets refuted ({len(proofs)} proofs with cuts)")


def test_ceres_output_contract():
    proofs = _corpus_with_cuts()
    for i, p in enumerate(proofs):
        out = ceres_cut_elim(p, LIMITS)
        report = check_proof(out)
        assert report.ok, f"corpus proof {i}: {report}"
        for _, node in out.nodes():
            if node.rule is RuleKind.CUT:
                occ = {o.id: o for q in node.premises for o in q.conclusion.occurrences()}
                assert isinstance(occ[node.aux[0]].formula, Atom), f"corpus proof {i}"
        assert out.conclusion.same_formulas(skolemize(p).conclusion), f"corpus proof {i}"
    _passed(f"resolution cut-elimination contract ({len(proofs)} proofs)")


def test_gentzen_contract(one_cut_proof):
    proofs = _corpus_with_cuts()
    for i, p in enumerate(proofs):
        out = gentzen_cut_elim(p)
        assert out.is_cut_free(), f"corpus proof {i}"
        report = check_proof(out)
        assert report.ok, f"corpus proof {i}: {report}"
        assert out.conclusion.same_formulas(p.conclusion), f"corpus proof {i}"
    reduced = gentzen_cut_elim(one_cut_proof)
    assert reduced.rule is RuleKind.AXIOM and reduced.size() == 1
    _passed(f"reductive cut-elimination contract ({len(proofs)} proofs; one-cut case exact)")


def test_herbrand_contract(forall_exists_proof, exists_id_proof):
    applicable = [forall_exists_proof, exists_id_proof]
    applicable += [gentzen_cut_elim(p) for p in _corpus_with_cuts()]
    applicable += [ceres_cut_elim(p, LIMITS) for p in _corpus_with_cuts()[:8]]
    for i, p in enumerate(applicable):
        hs = herbrand_sequent(p)
        members = hs.antecedent + hs.succedent
        for m in members:
            assert is_quantifier_free(m.formula), f"case {i}"
            assert is_end_sequent_instance(m.formula, m.origin), f"case {i}: {m.formula} / {m.origin}"
        assert sequent_valid_truth_table(
            [m.formula for m in hs.antecedent],
            [m.formula for m in hs.succedent],
        ), f"case {i}"
    hs = herbrand_sequent(forall_exists_proof)
    a = Const("a")
    assert [m.formula for m in hs.antecedent] == [Atom("P", (a,))]
    assert [m.formula for m in hs.succedent] == [Atom("P", (a,))]
    _passed(f"herbrand extraction contract ({len(applicable)} applicable proofs)")


XML_OMISSIONS = [
    # (document, missing piece named by the error)
    ("<prooftrees><proof><rule type='ax'><conclusion>P :- P</conclusion></rule></proof></prooftrees>",
     "symbol"),
    ("<prooftrees><proof symbol='p'><rule><conclusion>P :- P</conclusion></rule></proof></prooftrees>",
     "type"),
    ("<prooftrees><proof symbol='p'><rule type='negL'><conclusion>~P, P :- </conclusion>"
     "<prooflink/></rule></proof></prooftrees>",
     "symbol"),
    ("<prooftrees><proof symbol='p'><rule type='ax'></rule></proof></prooftrees>",
     "conclusion"),
    ("<prooftrees><proof symbol='p'></proof></prooftrees>",
     "rule"),
]


def test_parser_fidelity(tmp_path):
    # conforming documents parse
    for name in ("single_axiom.xml", "two_node.xml"):
        db = parse_simple_xml((DATA / name).read_text())
        assert db.proofs
    # each required-piece omission is a StructureError naming the piece
    for doc, missing in XML_OMISSIONS:
        with pytest.raises(StructureError) as e:
            parse_simple_xml(doc)
        assert e.value.missing == missing, doc
    # gzip transparency for every corpus file
    for f in sorted(DATA.iterdir()):
        gz = tmp_path / (f.name + ".gz")
        gz.write_bytes(gzip.compress(f.read_bytes()))
        assert read_input(gz) == f.read_text()
        plain_db = parse_path(f)
        gz_db = parse_path(gz)
        assert set(plain_db.proofs) == set(gz_db.proofs)
    _passed(f"parser fidelity ({len(XML_OMISSIONS)} omission cases; gzip transparent)")


def test_search_oracle():
    rng = random.Random(2025)
    proofs = _corpus_with_cuts()
    docs = [apply_view(p) for p in proofs[:10]]
    docs.append(apply_view(extract_struct(proofs[0])))
    docs.append(apply_view(char_clause_set(extract_struct(proofs[0]))))

    def texts_of(doc):
        if isinstance(doc, ProofDoc):
            for n in doc.root.walk():
                yield n.id, "sequent", n.sequent.latex
                yield n.id, "rule", n.rule
        elif isinstance(doc, TreeDoc):
            for n in doc.root.walk():
                yield n.id, "label", n.label.latex
        else:
            for i in doc.items:
                yield i.id, "item", i.latex

    def brute(doc, query):
        out = []
        for nid, fld, text in texts_of(doc):
            spans = tuple(
                (s, s + len(query))
                for s in range(len(text))
                if text.startswith(query, s)
            )
            if spans:
                out.append((nid, fld, spans))
        return out

    checked = 0
    for _ in range(200):
        doc = rng.choice(docs)
        pool = [t for _, _, t in texts_of(doc) if t]
        base = rng.choice(pool)
        if rng.random() < 0.7 and base:
            i = rng.randrange(len(base))
            j = min(len(base), i + 1 + rng.randrange(6))
            query = base[i:j]
        else:
            query = rng.choice(["cut", "\\land", "P", "zzz", "\\vdash", " "])
        got = [(m.node_id, m.fld, m.spans) for m in search(doc, query)]
        assert got == brute(doc, query), (query,)
        checked += 1

    # space sensitivity is exact: one space matches, two do not
    from proofbench.calculus import axiom, neg_l

    p = neg_l(axiom(Atom("P_{k+1}")), Atom("P_{k+1}"))
    doc = apply_view(p)
    assert search(doc, "\\neg P_{k+1}")
    assert search(doc, "\\neg  P_{k+1}") == []
    _passed(f"search equals brute-force scan ({checked} random pairs; space-exact case)")


def test_export_round_trip(one_cut_proof):
    corpus = _corpus_with_cuts() + [build_chain_schema().proofs["psi"].base]
    for i, p in enumerate(corpus):
        back = import_proof_json(export_proof_json(p))
        assert proof_equal(back, p), f"corpus proof {i}"
    cs = char_clause_set(extract_struct(one_cut_proof))
    text = export_clause_set_tptp(cs).decode()
    reparsed = import_tptp_cnf(text)
    out = refute(reparsed, LIMITS)
    assert isinstance(out, Refutation)
    assert all(not s.premises() for s in out.root.premises())  # one resolution step
    _passed(f"export round trips (json identity on {len(corpus)} proofs; tptp refutes in one step)")


def _formulas_by_connectives(max_conn: int):
    atoms = [P, Q, R]
    by_count = {0: list(atoms)}
    for c in range(1, max_conn + 1):
        bucket = [Neg(f) for f in by_count[c - 1]]
        for cf in range(c):
            cg = c - 1 - cf
            for f in by_count[cf]:
                for g in by_count[cg]:
                    bucket.extend((And(f, g), Or(f, g), Imp(f, g)))
        by_count[c] = bucket
    return by_count


def test_autoprop_completeness_small_scale():
    start = time.perf_counter()
    by_count = _formulas_by_connectives(3)
    checked = 0

    def check(ants, succs):
        nonlocal checked
        got = autoprop(ants, succs)
        want = sequent_valid_truth_table(ants, succs)
        if want:
            assert isinstance(got, LKProof), (ants, succs)
        else:
            assert isinstance(got, Countermodel), (ants, succs)
        checked += 1

    # every formula with at most three connectives, on either side
    for c in range(4):
        for f in by_count[c]:
            check((), (f,))
            check((f,), ())
    # every two-formula sequent with a total of at most two connectives
    small = by_count[0] + by_count[1] + by_count[2]
    for f in small:
        for g in small:
            if _conn(f) + _conn(g) <= 2:
                check((f,), (g,))
    elapsed = time.perf_counter() - start
    assert elapsed < 30, f"took {elapsed:.1f}s"
    _passed(
        f"autoprop agrees with truth tables ({checked} sequents, {elapsed:.1f}s)"
    )


def _conn(f) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Neg):
        return 1 + _conn(f.sub)
    return 1 + _conn(f.left) + _conn(f.right)

import itertools
import random

import pytest

from proofbench.calculus import (
    Countermodel,
    LKProof,
    RuleKind,
    Sequent,
    autoprop,
    axiom,
    check_database,
    check_proof,
    cut,
    cut_ancestors,
    eval_quantifier_free,
    exists_l,
    exists_r,
    expand_autoprop,
    forall_r,
    instantiate_schema,
    proof_equal,
    refresh_ids,
    sequent,
    sequent_valid_truth_table,
    substitute_proof,
    substitute_sequent,
    weak_l,
)
from proofbench.errors import (
    EigenvariableViolation,
    LinkError,
    MissingAux,
    NotPropositional,
)
from proofbench.kernel import (
    And,
    Atom,
    Exists,
    ForAll,
    Imp,
    Neg,
    Or,
    Var,
    num,
    param_var,
    succs,
)
from conftest import A, P, Q, R, build_chain_schema, chain_body

# ------------------------------------------------------------- inference

def test_axiom_shape():
    p = axiom(A(num(0)))
    assert str(p.conclusion) == "A(0) |- A(0)"
    assert check_proof(p).ok


def test_axiom_rejects_compound():
    with pytest.raises(Exception):
        axiom(And(P, Q))


def test_one_cut_proof_is_valid(one_cut_proof):
    assert str(one_cut_proof.conclusion) == "P |- P"
    assert check_proof(one_cut_proof).ok


def test_missing_aux_raises():
    with pytest.raises(MissingAux):
        cut(axiom(P), axiom(Q), P)


def test_eigenvariable_violation_detected():
    x = Var("x")
    alpha = Var("v0")
    # v0 |- occurs in the conclusion context: all x P(x) cannot be closed
    p = axiom(Atom("P", (alpha,)))
    p = weak_l(p, Atom("Q", (alpha,)))
    with pytest.raises(EigenvariableViolation):
        forall_r(p, ForAll(x, Atom("P", (x,))), alpha)


def test_check_flags_tampered_proof(one_cut_proof):
    # swap the conclusion of the cut for something it does not prove
    bad = LKProof(
        RuleKind.CUT,
        sequent([P], [Q]),
        one_cut_proof.premises,
        aux=one_cut_proof.aux,
    )
    assert not check_proof(bad).ok


def test_quantified_proofs_valid(forall_exists_proof, exists_id_proof):
    assert check_proof(forall_exists_proof).ok
    assert check_proof(exists_id_proof).ok
    assert str(forall_exists_proof.conclusion) == "all x P(x) |- ex x P(x)"


def test_multiset_end_sequent_equality(one_cut_proof):
    shuffled = Sequent(
        tuple(reversed(one_cut_proof.conclusion.antecedent)),
        tuple(reversed(one_cut_proof.conclusion.succedent)),
    )
    assert one_cut_proof.conclusion.same_formulas(shuffled)


def test_refresh_ids_preserves_structure(one_cut_proof):
    q = refresh_ids(one_cut_proof)
    assert proof_equal(one_cut_proof, q)
    assert check_proof(q).ok
    old = {o.id for _, n in one_cut_proof.nodes() for o in n.conclusion.occurrences()}
    new = {o.id for _, n in q.nodes() for o in n.conclusion.occurrences()}
    assert old.isdisjoint(new)


def test_substitute_proof_keeps_validity(exists_id_proof):
    q = substitute_proof(exists_id_proof, {Var("unrelated"): Var("other")})
    assert check_proof(q).ok


# -------------------------------------------------------------- ancestors

def test_cut_ancestors_one_cut(one_cut_proof):
    marked = cut_ancestors(one_cut_proof)
    # the cut auxes themselves: one P on each side of the two axioms
    assert len(marked) == 2


def test_cut_ancestors_cut_free(forall_exists_proof):
    assert cut_ancestors(forall_exists_proof) == frozenset()


def test_cut_ancestors_unchanged_by_weakening(one_cut_proof):
    assert cut_ancestors(weak_l(one_cut_proof, Q)) == cut_ancestors(one_cut_proof)


# --------------------------------------------------------------- autoprop

def test_autoprop_chain_sequent():
    got = autoprop((A(num(0)), Or(Neg(A(num(0))), A(num(1)))), (A(num(1)),))
    assert isinstance(got, LKProof)
    assert check_proof(got).ok
    assert got.is_cut_free()


def test_autoprop_excluded_middle():
    got = autoprop((), (Or(P, Neg(P)),))
    assert isinstance(got, LKProof)
    assert check_proof(got).ok


def test_autoprop_countermodel():
    got = autoprop((P,), (Q,))
    assert isinstance(got, Countermodel)
    assert got.assignment[P] is True
    assert got.assignment[Q] is False


def test_autoprop_rejects_quantifiers():
    x = Var("x")
    with pytest.raises(NotPropositional):
        autoprop((ForAll(x, Atom("P", (x,))),), ())


def _random_formula(rng, depth):
    if depth == 0:
        return rng.choice([P, Q, R])
    k = rng.randrange(4)
    if k == 0:
        return Neg(_random_formula(rng, depth - 1))
    cls = [And, Or, Imp][k - 1]
    return cls(_random_formula(rng, depth - 1), _random_formula(rng, depth - 1))


def test_autoprop_agrees_with_truth_tables():
    rng = random.Random(99)
    for _ in range(300):
        ants = tuple(_random_formula(rng, rng.randrange(3)) for _ in range(rng.randrange(3)))
        succs = tuple(_random_formula(rng, rng.randrange(3)) for _ in range(rng.randrange(3)))
        got = autoprop(ants, succs)
        want = sequent_valid_truth_table(ants, succs)
        if isinstance(got, LKProof):
            assert want
            report = check_proof(got)
            assert report.ok, f"{ants} |- {succs}\n{report}"
            assert got.conclusion.same_formulas(sequent(ants, succs))
            assert got.is_cut_free()
        else:
            assert not want
            # the countermodel really falsifies the sequent
            assert all(eval_quantifier_free(f, got.assignment) for f in ants)
            assert not any(eval_quantifier_free(f, got.assignment) for f in succs)


# ----------------------------------------------------------------- schema

def test_chain_schema_checks(chain_db):
    assert check_database(chain_db).ok


def test_chain_instance_0(chain_db):
    p = instantiate_schema(chain_db, "psi", 0)
    assert p.size() == 2  # autoprop leaf + one fold step
    assert check_proof(p).ok
    want = sequent(
        [A(num(0)), chain_db.proofs["psi"].end_sequent.antecedent[1].formula],
        [A(num(1))],
    )
    want = substitute_sequent(want, {param_var("k"): num(0)})
    assert p.conclusion.same_formulas(want)


def test_chain_instance_1(chain_db):
    p = instantiate_schema(chain_db, "psi", 1)
    assert check_proof(p).ok
    assert not p.has_links()
    end = chain_db.proofs["psi"].end_sequent
    want = substitute_sequent(end, {param_var("k"): num(1)})
    assert p.conclusion.same_formulas(want)
    # the linked subtree is the base instance
    kinds = [n.rule for _, n in p.nodes()]
    assert RuleKind.AND_EQ_L3 in kinds and RuleKind.AND_EQ_L1 in kinds


def test_chain_instance_3_copies(chain_db):
    p = instantiate_schema(chain_db, "psi", 3)
    assert check_proof(p).ok
    assert not p.has_links()
    # one cut per step copy, none in the base
    cuts = [n for _, n in p.nodes() if n.rule is RuleKind.CUT]
    assert len(cuts) == 3
    folds3 = [n for _, n in p.nodes() if n.rule is RuleKind.AND_EQ_L3]
    assert len(folds3) == 1  # exactly one base copy


@pytest.mark.parametrize("n", range(9))
def test_chain_instance_end_sequents(chain_db, n):
    p = instantiate_schema(chain_db, "psi", n)
    end = chain_db.proofs["psi"].end_sequent
    want = substitute_sequent(end, {param_var("k"): num(n)})
    assert p.conclusion.same_formulas(want)
    assert check_proof(p).ok


def test_instantiate_unknown_name(chain_db):
    with pytest.raises(LinkError):
        instantiate_schema(chain_db, "nope", 1)


def test_corpus_proofs_are_valid(corpus_cut_proofs):
    assert len(corpus_cut_proofs) == 20
    for p in corpus_cut_proofs:
        assert check_proof(p).ok
        assert p.size() <= 15
        assert sum(1 for _, n in p.nodes() if n.rule is RuleKind.CUT) in (1, 2)


def test_expand_autoprop_yields_plain_proof(chain_db):
    p = instantiate_schema(chain_db, "psi", 2)
    q = expand_autoprop(p)
    assert check_proof(q).ok
    assert all(n.rule is not RuleKind.AUTOPROP for _, n in q.nodes())
    assert q.conclusion.same_formulas(p.conclusion)

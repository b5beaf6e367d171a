"""Shared corpus: hand-built sample proofs, the chain-induction schema,
and a seeded generator of random valid proofs with cuts."""

import random

import pytest

from proofbench.calculus import (
    LKProof,
    ProofDatabase,
    ProofSchema,
    RuleKind,
    and_eq_l1,
    and_eq_l3,
    and_l,
    and_r,
    autoprop,
    autoprop_leaf,
    axiom,
    contr_l,
    contr_r,
    cut,
    exists_l,
    exists_r,
    forall_l,
    forall_r,
    neg_l,
    or_l,
    proof_link,
    sequent,
    weak_l,
    weak_r,
)
from proofbench.kernel import (
    And,
    Atom,
    BigAnd,
    Const,
    Exists,
    ForAll,
    Neg,
    Or,
    Var,
    ZERO,
    num,
    param_var,
    succs,
)

P = Atom("P")
Q = Atom("Q")
R = Atom("R")


def A(e):
    return Atom("A", (e,))


@pytest.fixture
def one_cut_proof():
    """cut(ax P|-P, ax P|-P) on P: the smallest proof with a cut."""
    return cut(axiom(P), axiom(P), P)


@pytest.fixture
def forall_exists_proof():
    """all x P(x) |- ex x P(x), proved through the instance a."""
    x = Var("x")
    a = Const("a")
    univ = ForAll(x, Atom("P", (x,)))
    exis = Exists(x, Atom("P", (x,)))
    p = axiom(Atom("P", (a,)))
    p = forall_l(p, univ, a)
    return exists_r(p, exis, a)


@pytest.fixture
def exists_id_proof():
    """ex x P(x) |- ex x P(x) through an eigenvariable."""
    x = Var("x")
    alpha = Var("v0")
    exis = Exists(x, Atom("P", (x,)))
    p = axiom(Atom("P", (alpha,)))
    p = exists_r(p, exis, alpha)
    return exists_l(p, exis, alpha)


def chain_body(i):
    return Or(Neg(A(i)), A(succs(i, 1)))


def build_chain_schema() -> ProofDatabase:
    """The sample inductive schema: psi proves
    A(0), BigAnd(i=0..k)(~A(i) \\/ A(i+1)) |- A(k+1)."""
    i = param_var("i")
    k = param_var("k")
    big = lambda hi: BigAnd(i, ZERO, hi, chain_body(i))  # noqa: E731

    end = sequent([A(num(0)), big(k)], [A(succs(k, 1))])

    # base: prove the unfolded sequent automatically, then fold
    base_seq = sequent([A(num(0)), chain_body(num(0))], [A(num(1))])
    exp = autoprop(base_seq.ant_formulas(), base_seq.succ_formulas())
    assert isinstance(exp, LKProof)
    base = autoprop_leaf(base_seq, exp)
    base = and_eq_l3(base, chain_body(num(0)), big(num(0)))

    # step: link at k, cut A(k+1) against the unfolded last link
    link = proof_link("psi", k, sequent([A(num(0)), big(k)], [A(succs(k, 1))]))
    ax1 = axiom(A(succs(k, 1)))
    n3 = neg_l(ax1, A(succs(k, 1)))
    ax2 = axiom(A(succs(k, 2)))
    n5 = or_l(n3, ax2, Neg(A(succs(k, 1))), A(succs(k, 2)))
    n6 = cut(link, n5, A(succs(k, 1)))
    n7 = and_l(n6, big(k), chain_body(succs(k, 1)))
    step = and_eq_l1(n7, And(big(k), chain_body(succs(k, 1))), big(succs(k, 1)))

    schema = ProofSchema("psi", k, end, base, step)
    return ProofDatabase(proofs={"psi": schema})


@pytest.fixture
def chain_db():
    return build_chain_schema()


def quantified_cut_proof() -> LKProof:
    """P(a) |- ex z P(z) with a cut on ex y P(y); exercises unification."""
    y = Var("y")
    z = Var("z")
    a = Const("a")
    alpha = Var("v0")
    ex_y = Exists(y, Atom("P", (y,)))
    ex_z = Exists(z, Atom("P", (z,)))
    left = exists_r(axiom(Atom("P", (a,))), ex_y, a)
    right = exists_r(axiom(Atom("P", (alpha,))), ex_z, alpha)
    right = exists_l(right, ex_y, alpha)
    return cut(left, right, ex_y)


def conjunction_cut_proof() -> LKProof:
    """P, Q |- P /\\ Q with a cut on P /\\ Q built from andR/andL."""
    lhs = and_r(axiom(P), axiom(Q), P, Q)
    rhs = and_l(and_r(axiom(P), axiom(Q), P, Q), P, Q)
    return cut(lhs, rhs, And(P, Q))


def _random_autoprop_piece(rng, atoms, right_of):
    """A small valid sequent with right_of in the succedent, autoproved."""
    extra = rng.sample(atoms, k=rng.randrange(0, 2))
    ants = tuple(extra) + (right_of,) if rng.random() < 0.5 else (right_of,)
    proof = autoprop(ants, (right_of,))
    assert isinstance(proof, LKProof)
    return proof


def random_cut_proofs(count: int = 20, seed: int = 2024) -> list[LKProof]:
    """Valid LK proofs with 1..2 cuts and modest size, deterministically."""
    rng = random.Random(seed)
    atoms = [P, Q, R]
    out = []
    while len(out) < count:
        cf = _random_cut_formula(rng, atoms)
        left = autoprop(_hyps_for(rng, cf, atoms), (cf,))
        right = autoprop((cf,), _goals_for(rng, cf, atoms))
        if not isinstance(left, LKProof) or not isinstance(right, LKProof):
            continue
        p = cut(left, right, cf)
        if rng.random() < 0.4:
            # a second, inner-formula cut below
            g = rng.choice(atoms)
            lemma = autoprop((g,), (g,))
            assert isinstance(lemma, LKProof)
            p = cut(weak_r(p, g), lemma, g)
        if rng.random() < 0.5:
            p = weak_l(p, rng.choice(atoms))
        if rng.random() < 0.3:
            p = weak_r(p, rng.choice(atoms))
        if p.size() <= 15:
            out.append(p)
    return out


def _random_cut_formula(rng, atoms):
    a, b = rng.choice(atoms), rng.choice(atoms)
    return rng.choice([
        a,
        And(a, b),
        Or(a, b),
        Neg(a),
        Or(Neg(a), b),
    ])


def _hyps_for(rng, cf, atoms):
    # hypotheses that propositionally entail cf
    if isinstance(cf, Atom):
        return (cf,)
    if isinstance(cf, And):
        return (cf.left, cf.right)
    if isinstance(cf, Or):
        return (rng.choice([cf.left, cf.right]),)
    if isinstance(cf, Neg):
        return (Neg(cf.sub),)
    return (cf,)


def _goals_for(rng, cf, atoms):
    # goals propositionally entailed by cf
    if isinstance(cf, Atom):
        return (cf,)
    if isinstance(cf, And):
        return (rng.choice([cf.left, cf.right]),)
    if isinstance(cf, Or):
        return (cf.left, cf.right)
    if isinstance(cf, Neg):
        return (Neg(cf.sub),)
    return (cf,)


@pytest.fixture(scope="session")
def corpus_cut_proofs():
    return random_cut_proofs()

import random

import pytest

from proofbench.errors import EmptyRange, UnboundParam
from proofbench.kernel import (
    IND,
    PARAM,
    And,
    Atom,
    BigAnd,
    BigOr,
    Const,
    DefinitionList,
    Exists,
    ForAll,
    Imp,
    Neg,
    Or,
    Substitution,
    Var,
    ZERO,
    app,
    eval_param,
    expand_definitions,
    fn_type,
    is_quantifier_free,
    num,
    param_var,
    substitute,
    succs,
    unfold_schema_connective,
)

x = Var("x")
y = Var("y")
z = Var("z")
a = Const("a")
b = Const("b")
f1 = Const("f", fn_type([IND]))
g2 = Const("g", fn_type([IND, IND]))


def P(*args):
    return Atom("P", tuple(args))


# ------------------------------------------------------------ substitution

def test_substitute_single_free_variable():
    assert substitute(P(x), {x: a}) == P(a)


def test_substitute_bound_occurrence_untouched():
    assert substitute(ForAll(x, P(x)), {x: a}) == ForAll(x, P(x))


def test_substitute_renames_captured_binder():
    got = substitute(ForAll(y, Atom("P", (x, y))), {x: app(f1, y)})
    want = ForAll(Var("y'"), Atom("P", (app(f1, y), Var("y'"))))
    assert got == want
    # and the displayed binder really is renamed
    assert "y'" in str(got)


def test_substitution_type_mismatch_rejected():
    with pytest.raises(TypeError):
        Substitution({x: num(1)})


def test_substitute_identity_when_domain_disjoint():
    rng = random.Random(7)
    for _ in range(200):
        t = _random_term(rng, depth=3)
        fresh = Var("unused_variable")
        assert substitute(t, {fresh: a}) == t


def test_substitute_roundtrip_alpha():
    # swapping x -> y -> x is the identity when y is fresh for t
    rng = random.Random(11)
    for _ in range(200):
        t = _random_term(rng, depth=3, vars_=(x, z))
        assert substitute(substitute(t, {x: y}), {y: x}) == t


def test_alpha_equivalent_terms_compare_equal():
    assert ForAll(x, P(x)) == ForAll(y, P(y))
    assert hash(ForAll(x, P(x))) == hash(ForAll(y, P(y)))
    assert ForAll(x, P(x)) != Exists(x, P(x))


# ------------------------------------- independent de Bruijn oracle

def _to_db(t, env):
    """Locally nameless view: bound variables by index, free by name."""
    from proofbench.kernel import Abs, App, Succ, Zero

    if isinstance(t, Var):
        if t in env:
            return ("b", len(env) - 1 - env[t])
        return ("f", t.name, str(t.type))
    if isinstance(t, Const):
        return ("c", t.name)
    if isinstance(t, Zero):
        return ("0",)
    if isinstance(t, Succ):
        return ("s", _to_db(t.arg, env))
    if isinstance(t, App):
        return ("a", _to_db(t.fn, env), _to_db(t.arg, env))
    if isinstance(t, Atom):
        return ("at", t.name, tuple(_to_db(u, env) for u in t.args))
    if isinstance(t, Neg):
        return ("n", _to_db(t.sub, env))
    if isinstance(t, (And, Or, Imp)):
        return (type(t).__name__, _to_db(t.left, env), _to_db(t.right, env))
    if isinstance(t, (Abs, ForAll, Exists)):
        env2 = dict(env)
        env2[t.var] = len(env)
        return ("l", type(t).__name__, _to_db(t.body, env2))
    raise AssertionError(t)


def _db_subst(d, name, typ, repl):
    """Substitution on the nameless form: trivially capture-avoiding."""
    tag = d[0]
    if tag == "f":
        return repl if (d[1], d[2]) == (name, typ) else d
    if tag in ("b", "c", "0"):
        return d
    if tag in ("s", "n"):
        return (tag, _db_subst(d[1], name, typ, repl))
    if tag in ("a", "And", "Or", "Imp"):
        return (tag, _db_subst(d[1], name, typ, repl), _db_subst(d[2], name, typ, repl))
    if tag == "at":
        return (tag, d[1], tuple(_db_subst(u, name, typ, repl) for u in d[2]))
    if tag == "l":
        return (tag, d[1], _db_subst(d[2], name, typ, repl))
    raise AssertionError(d)


def _random_term(rng, depth, vars_=(x, y, z)):
    if depth == 0 or rng.random() < 0.3:
        leaf = rng.choice(
            [P(rng.choice(vars_)), P(a), Atom("Q"), P(app(f1, rng.choice(vars_)))]
        )
        return leaf
    kind = rng.randrange(5)
    if kind == 0:
        return Neg(_random_term(rng, depth - 1, vars_))
    if kind == 1:
        return And(_random_term(rng, depth - 1, vars_), _random_term(rng, depth - 1, vars_))
    if kind == 2:
        return Or(_random_term(rng, depth - 1, vars_), _random_term(rng, depth - 1, vars_))
    if kind == 3:
        return ForAll(rng.choice(vars_), _random_term(rng, depth - 1, vars_))
    return Exists(rng.choice(vars_), _random_term(rng, depth - 1, vars_))


def test_substitution_agrees_with_de_bruijn_oracle():
    rng = random.Random(42)
    replacements = [a, b, app(f1, y), app(g2, y, z), app(f1, app(f1, x))]
    for _ in range(1000):
        t = _random_term(rng, depth=3)
        u = rng.choice(replacements)
        v = rng.choice([x, y, z])
        got = _to_db(substitute(t, {v: u}), {})
        want = _db_subst(_to_db(t, {}), v.name, str(v.type), _to_db(u, {}))
        assert got == want


# ------------------------------------------------------------- parameters

def test_eval_param_examples():
    k = param_var("k")
    assert eval_param(succs(k, 1), {"k": 2}) == 3
    assert eval_param(ZERO, {}) == 0
    assert eval_param(succs(succs(k, 1), 1), {"k": 0}) == 2


def test_eval_param_unbound():
    with pytest.raises(UnboundParam):
        eval_param(param_var("k"), {})


def test_eval_param_chain_additivity():
    rng = random.Random(3)
    for _ in range(100):
        n1 = rng.randrange(64)
        n2 = rng.randrange(64)
        assert eval_param(succs(num(n1), n2), {}) == n1 + n2
        k = param_var("k")
        assert eval_param(succs(k, n2), {"k": n1}) == n1 + n2


def test_numeral_rendering():
    k = param_var("k")
    assert str(num(3)) == "3"
    assert str(succs(k, 2)) == "k+2"
    assert str(k) == "k"


# ---------------------------------------------------------------- unfold

def _chain_body(i):
    return Or(Neg(Atom("A", (i,))), Atom("A", (succs(i, 1),)))


def test_unfold_base_case_is_single_instance():
    i = param_var("i")
    f = BigAnd(i, ZERO, ZERO, _chain_body(i))
    assert unfold_schema_connective(f, {}) == _chain_body(num(0))


def test_unfold_matches_direct_fold_oracle():
    i = param_var("i")
    k = param_var("k")
    f = BigAnd(i, ZERO, k, _chain_body(i))
    for n in range(7):
        got = unfold_schema_connective(f, {"k": n})
        # oracle: build the instance list and fold it left-associated
        parts = [_chain_body(num(j)) for j in range(n + 1)]
        want = parts[0]
        for p in parts[1:]:
            want = And(want, p)
        assert got == want


def test_unfold_no_connective_is_identity():
    assert unfold_schema_connective(Atom("A", (num(0),)), {}) == Atom("A", (num(0),))


def test_unfold_output_has_no_iterated_connectives():
    rng = random.Random(5)
    i = param_var("i")
    for _ in range(100):
        inner = rng.choice(
            [_chain_body(i), Atom("A", (i,)), Neg(Atom("B", (succs(i, 2),)))]
        )
        lo = rng.randrange(3)
        hi = lo + rng.randrange(3)
        cls = rng.choice([BigAnd, BigOr])
        f = cls(i, num(lo), num(hi), inner)
        out = unfold_schema_connective(f, {})
        assert is_quantifier_free(out)


def test_unfold_empty_range_rejected():
    i = param_var("i")
    f = BigAnd(i, num(2), num(1), Atom("A", (i,)))
    with pytest.raises(EmptyRange):
        unfold_schema_connective(f, {})


def test_unfold_substitutes_outer_parameters():
    i = param_var("i")
    k = param_var("k")
    f = And(BigAnd(i, ZERO, k, Atom("A", (i,))), Atom("A", (succs(k, 1),)))
    got = unfold_schema_connective(f, {"k": 1})
    want = And(And(Atom("A", (num(0),)), Atom("A", (num(1),))), Atom("A", (num(2),)))
    assert got == want


# ------------------------------------------------------------ definitions

def test_definition_list_rejects_cycles():
    c = Const("C", fn_type([], IND))
    with pytest.raises(ValueError):
        DefinitionList(((c, app(f1, c)),))


def test_definition_list_rejects_duplicates():
    c = Const("C")
    with pytest.raises(ValueError):
        DefinitionList(((c, a), (c, b)))


def test_expand_definitions():
    c = Const("C")
    d = Const("D")
    defs = DefinitionList(((c, app(f1, a)), (d, app(f1, c))))
    assert expand_definitions(P(d), defs) == P(app(f1, app(f1, a)))

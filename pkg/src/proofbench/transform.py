"""Proof transformations: reductive cut-elimination, skolemization,
regularization, Herbrand sequent extraction, and cut-formula listing.

Cut-elimination is implemented with mix semantics (remove every copy of
the cut formula, then weaken back the surplus), which gives the usual
grade/rank termination measure even across contractions.  Long runs can
be cancelled cooperatively through a CancelToken.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace

from .calculus import (
    LKProof,
    RuleKind,
    Sequent,
    cut_ancestors,
    expand_autoprop,
    refresh_ids,
    sequent,
    substitute_proof,
)
from . import calculus as lk
from .errors import Cancelled, PreconditionError
from .kernel import (
    And,
    Atom,
    BigAnd,
    BigOr,
    Const,
    Exists,
    ForAll,
    Formula,
    Imp,
    IND,
    Neg,
    Or,
    Term,
    Var,
    fn_type,
    app,
    is_quantifier_free,
    substitute,
    unfold_schema_connective,
)


class CancelToken:
    """Cooperative cancellation: long loops poll `check()`."""

    def __init__(self):
        self._cancelled = False

    def cancel(self) -> None:
        self._cancelled = True

    @property
    def cancelled(self) -> bool:
        return self._cancelled

    def check(self) -> None:
        if self._cancelled:
            raise Cancelled("operation cancelled")


NULL_TOKEN = CancelToken()

_eigen_names = itertools.count()


def _fresh_eigen(v: Var) -> Var:
    return Var(f"w{next(_eigen_names)}", v.vartype)


def _all_var_names(p: LKProof) -> set[str]:
    names: set[str] = set()
    for _, node in p.nodes():
        for o in node.conclusion.occurrences():
            names |= {v.name for v in o.formula.free_vars()}
        if node.eigen is not None:
            names.add(node.eigen.name)
        if node.witness is not None:
            names |= {v.name for v in node.witness.free_vars()}
    return names


def _require_plain(p: LKProof, op: str) -> LKProof:
    for _, node in p.nodes():
        if node.rule is RuleKind.PROOF_LINK:
            raise PreconditionError(f"{op}: proof contains links; instantiate first")
        if node.rule is RuleKind.GENERIC:
            raise PreconditionError(f"{op}: proof contains an unchecked generic node")
    return expand_autoprop(p)


# ----------------------------------------------------------- regularize

def regularize(p: LKProof) -> LKProof:
    """Rename eigenvariables so each strong inference uses its own."""
    counts = Counter(
        node.eigen.name for _, node in p.nodes() if node.eigen is not None
    )
    if all(c == 1 for c in counts.values()):
        return p
    used = _all_var_names(p)
    next_index: dict[str, int] = {}

    def go(node: LKProof) -> LKProof:
        node = replace(node, premises=tuple(go(q) for q in node.premises))
        if node.eigen is not None and counts[node.eigen.name] > 1:
            base = node.eigen.name
            i = next_index.get(base, 0)
            while f"{base}{i}" in used:
                i += 1
            next_index[base] = i + 1
            fresh = Var(f"{base}{i}", node.eigen.vartype)
            used.add(fresh.name)
            node = substitute_proof(node, {node.eigen: fresh})
        return node

    return go(p)


# ------------------------------------------------------------ skolemize

def _is_strong(f: Formula, positive: bool) -> bool:
    return (isinstance(f, ForAll) and positive) or (isinstance(f, Exists) and not positive)


class _SkolemGen:
    """Names s0, s1, ... in end-sequent left-to-right order."""

    def __init__(self, taken: set[str]):
        self.taken = taken
        self.n = 0

    def term(self, deps: list[Var]) -> Term:
        while f"s{self.n}" in self.taken:
            self.n += 1
        name = f"s{self.n}"
        self.n += 1
        if not deps:
            return Const(name, IND)
        head = Const(name, fn_type([v.type for v in deps]))
        return app(head, *deps)


def _sk_formula(f: Formula, positive: bool, gen: _SkolemGen, deps: list[Var]) -> Formula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return Neg(_sk_formula(f.sub, not positive, gen, deps))
    if isinstance(f, And):
        return And(_sk_formula(f.left, positive, gen, deps),
                   _sk_formula(f.right, positive, gen, deps))
    if isinstance(f, Or):
        return Or(_sk_formula(f.left, positive, gen, deps),
                  _sk_formula(f.right, positive, gen, deps))
    if isinstance(f, Imp):
        return Imp(_sk_formula(f.left, not positive, gen, deps),
                   _sk_formula(f.right, positive, gen, deps))
    if isinstance(f, (ForAll, Exists)):
        if _is_strong(f, positive):
            s = gen.term(deps)
            return _sk_formula(substitute(f.body, {f.var: s}), positive, gen, deps)
        return type(f)(f.var, _sk_formula(f.body, positive, gen, deps + [f.var]))
    if isinstance(f, (BigAnd, BigOr)):
        return type(f)(f.var, f.lower, f.upper,
                       _sk_formula(f.body, positive, gen, deps + [f.var]))
    raise PreconditionError(f"cannot skolemize {f!r}")


def _extract_at_var(pattern: Formula, var: Var, image: Formula) -> Term | None:
    """Find the term sitting at var's positions when `image` is a
    skolemized instance of `pattern`; opaque at inner strong positions."""
    found: list[Term] = []

    def terms(a: Term, b: Term) -> bool:
        if isinstance(a, Var) and a == var:
            found.append(b)
            return True
        if type(a) is not type(b):
            return False
        from .kernel import App, Succ, Zero

        if isinstance(a, (Const, Zero, Var)):
            return a == b
        if isinstance(a, Succ):
            return terms(a.arg, b.arg)
        if isinstance(a, App):
            return terms(a.fn, b.fn) and terms(a.arg, b.arg)
        return a == b

    def walk(a: Formula, b: Formula, positive: bool) -> bool:
        if isinstance(a, (ForAll, Exists)) and _is_strong(a, positive):
            # the quantifier is gone in the image; its variable is opaque
            return walk(substitute(a.body, {a.var: Var("⁇", a.var.vartype)}), b, positive)
        if isinstance(a, Atom):
            if not isinstance(b, Atom) or a.name != b.name or len(a.args) != len(b.args):
                return False
            ok = True
            for x, y in zip(a.args, b.args):
                if "⁇" in {v.name for v in x.free_vars()}:
                    continue  # opaque: contains an inner eigen position
                ok = ok and terms(x, y)
            return ok
        if isinstance(a, Neg):
            return isinstance(b, Neg) and walk(a.sub, b.sub, not positive)
        if isinstance(a, (And, Or)):
            return type(a) is type(b) and walk(a.left, b.left, positive) and walk(a.right, b.right, positive)
        if isinstance(a, Imp):
            return isinstance(b, Imp) and walk(a.left, b.left, not positive) and walk(a.right, b.right, positive)
        if isinstance(a, (ForAll, Exists)):
            if type(a) is not type(b):
                return False
            if a.var == var:
                return True  # shadowed below: no occurrences of var here
            body_b = substitute(b.body, {b.var: a.var}) if b.var != a.var else b.body
            return walk(a.body, body_b, positive)
        if isinstance(a, (BigAnd, BigOr)):
            if type(a) is not type(b):
                return False
            body_b = substitute(b.body, {b.var: a.var}) if b.var != a.var else b.body
            return walk(a.body, body_b, positive)
        return False

    if not walk(pattern, image, True):
        return None
    if not found:
        return None
    t0 = found[0]
    if any(t != t0 for t in found[1:]):
        return None
    return t0


def skolemize(p: LKProof) -> LKProof:
    """Remove strong quantifier inferences on end-sequent ancestors,
    replacing their eigenvariables by Skolem terms over the weakly
    quantified variables in scope.  Inferences inside cut-ancestor cones
    keep their eigenvariables; the result proves the skolemized
    end-sequent."""
    p = _require_plain(p, "skolemize")
    cutanc = cut_ancestors(p)
    needs = any(
        node.rule in lk.STRONG_QUANTIFIER_RULES and node.main[0] not in cutanc
        for _, node in p.nodes()
        if node.main
    )
    if not needs:
        return p
    p = regularize(p)
    cutanc = cut_ancestors(p)

    taken = {c for _, node in p.nodes() for o in node.conclusion.occurrences()
             for c in _const_names(o.formula)}
    gen = _SkolemGen(taken)
    targets: dict[int, Formula] = {}
    for o in p.conclusion.antecedent:
        targets[o.id] = _sk_formula(o.formula, False, gen, [])
    for o in p.conclusion.succedent:
        targets[o.id] = _sk_formula(o.formula, True, gen, [])

    return _sk_proof(p, targets, {}, cutanc)


def _const_names(f) -> set[str]:
    from .kernel import _constants

    return set(_constants(f))


def _sk_proof(node: LKProof, targets: dict[int, Formula], pending: dict, cutanc) -> LKProof:
    rule = node.rule

    def target_of(o) -> Formula:
        t = targets.get(o.id)
        if t is None:
            t = substitute(o.formula, pending) if pending else o.formula
        return t

    if rule is RuleKind.AXIOM:
        return lk.axiom(target_of(node.conclusion.antecedent[0]))

    premise_occ = {o.id: o for q in node.premises for o in q.conclusion.occurrences()}
    aux = [premise_occ[i] for i in node.aux]
    mains = [o for o in node.conclusion.occurrences() if o.id in set(node.main)]
    main = mains[0] if mains else None

    child_targets: dict[int, Formula] = {}
    for o in node.conclusion.occurrences():
        if o.id in set(node.main):
            continue
        child_targets[o.parents[0]] = target_of(o)

    def recurse(q: LKProof, extra_pending: dict | None = None) -> LKProof:
        pend = dict(pending)
        if extra_pending:
            pend.update(extra_pending)
        return _sk_proof(q, child_targets, pend, cutanc)

    if rule is RuleKind.CUT:
        # cut occurrences are cut-ancestors: their formulas stay, modulo pending
        for a in aux:
            child_targets[a.id] = substitute(a.formula, pending) if pending else a.formula
        left = recurse(node.premises[0])
        right = recurse(node.premises[1])
        return lk.cut(left, right, child_targets[aux[0].id])

    if rule in lk.STRONG_QUANTIFIER_RULES:
        mt = target_of(main)
        if main.id in cutanc:
            child_targets[aux[0].id] = substitute(mt.body, {mt.var: node.eigen})
            q = recurse(node.premises[0])
            builder = lk.forall_r if rule is RuleKind.FORALL_R else lk.exists_l
            return builder(q, mt, node.eigen)
        # dropped: the eigenvariable becomes the Skolem term embedded in mt
        skterm = _extract_at_var(main.formula.body, main.formula.var, mt)
        if skterm is None:
            skterm = Const("s_unused", IND)
        child_targets[aux[0].id] = mt
        return recurse(node.premises[0], {node.eigen: skterm})

    if rule in lk.WEAK_QUANTIFIER_RULES:
        mt = target_of(main)
        w = substitute(node.witness, pending) if pending else node.witness
        child_targets[aux[0].id] = substitute(mt.body, {mt.var: w})
        q = recurse(node.premises[0])
        builder = lk.forall_l if rule is RuleKind.FORALL_L else lk.exists_r
        return builder(q, mt, w)

    if rule is RuleKind.NEG_L or rule is RuleKind.NEG_R:
        mt = target_of(main)
        child_targets[aux[0].id] = mt.sub
        q = recurse(node.premises[0])
        return (lk.neg_l if rule is RuleKind.NEG_L else lk.neg_r)(q, mt.sub)

    if rule in (RuleKind.AND_L, RuleKind.OR_R, RuleKind.IMP_R):
        mt = target_of(main)
        child_targets[aux[0].id] = mt.left
        child_targets[aux[1].id] = mt.right
        q = recurse(node.premises[0])
        b = {RuleKind.AND_L: lk.and_l, RuleKind.OR_R: lk.or_r, RuleKind.IMP_R: lk.imp_r}[rule]
        return b(q, mt.left, mt.right)

    if rule in (RuleKind.AND_R, RuleKind.OR_L, RuleKind.IMP_L):
        mt = target_of(main)
        child_targets[aux[0].id] = mt.left
        child_targets[aux[1].id] = mt.right
        q1 = recurse(node.premises[0])
        q2 = recurse(node.premises[1])
        b = {RuleKind.AND_R: lk.and_r, RuleKind.OR_L: lk.or_l, RuleKind.IMP_L: lk.imp_l}[rule]
        return b(q1, q2, mt.left, mt.right)

    if rule in (RuleKind.WEAK_L, RuleKind.WEAK_R):
        mt = target_of(main)
        q = recurse(node.premises[0])
        return (lk.weak_l if rule is RuleKind.WEAK_L else lk.weak_r)(q, mt)

    if rule in (RuleKind.CONTR_L, RuleKind.CONTR_R):
        mt = target_of(main)
        child_targets[aux[0].id] = mt
        child_targets[aux[1].id] = mt
        q = recurse(node.premises[0])
        return (lk.contr_l if rule is RuleKind.CONTR_L else lk.contr_r)(q, mt)

    if rule in (RuleKind.AND_EQ_L1, RuleKind.AND_EQ_L3):
        mt = target_of(main)
        at = substitute(aux[0].formula, pending) if pending else aux[0].formula
        child_targets[aux[0].id] = at
        q = recurse(node.premises[0])
        b = lk.and_eq_l1 if rule is RuleKind.AND_EQ_L1 else lk.and_eq_l3
        return b(q, at, mt)

    raise PreconditionError(f"skolemize: unsupported rule {node.rule_label()}")


# ------------------------------------------------------- cut elimination

_RIGHT_INTROS = frozenset({
    RuleKind.NEG_R, RuleKind.AND_R, RuleKind.OR_R, RuleKind.IMP_R,
    RuleKind.FORALL_R, RuleKind.EXISTS_R,
})
_LEFT_INTROS = frozenset({
    RuleKind.NEG_L, RuleKind.AND_L, RuleKind.OR_L, RuleKind.IMP_L,
    RuleKind.FORALL_L, RuleKind.EXISTS_L,
    RuleKind.AND_EQ_L1, RuleKind.AND_EQ_L3,
})


def gentzen_cut_elim(p: LKProof, token: CancelToken | None = None) -> LKProof:
    """Reductive cut-elimination: eliminate an uppermost cut completely,
    repeat; contraction over a cut duplicates the other subproof."""
    token = token or NULL_TOKEN
    p = _require_plain(p, "gentzen_cut_elim")
    p = regularize(p)

    def go(node: LKProof) -> LKProof:
        token.check()
        if not node.premises:
            return node
        premises = tuple(go(q) for q in node.premises)
        if node.rule is RuleKind.CUT:
            a = _aux_formulas(node)[0]
            return _mix(premises[0], premises[1], a, token,
                        keep_left=_count(premises[0].conclusion.succ_formulas(), a) - 1,
                        keep_right=_count(premises[1].conclusion.ant_formulas(), a) - 1)
        return _reapply(node, premises)

    out = go(p)
    assert out.is_cut_free()
    assert out.conclusion.same_formulas(p.conclusion)
    return out


def _count(formulas, f) -> int:
    return sum(1 for g in formulas if g == f)


def _aux_formulas(node: LKProof) -> list[Formula]:
    occ = {o.id: o for q in node.premises for o in q.conclusion.occurrences()}
    return [occ[i].formula for i in node.aux]


def _main_occ(node: LKProof):
    if not node.main:
        return None
    ids = set(node.main)
    for o in node.conclusion.occurrences():
        if o.id in ids:
            return o
    return None


def _reapply(node: LKProof, premises: tuple[LKProof, ...]) -> LKProof:
    """Rebuild the same inference over transformed premises (formulas of
    the premises' end-sequents are unchanged)."""
    rule = node.rule
    if not premises:
        return node
    aux = _aux_formulas(node)
    m = _main_occ(node)
    if rule is RuleKind.CUT:
        return lk.cut(premises[0], premises[1], aux[0])
    if rule is RuleKind.NEG_L:
        return lk.neg_l(premises[0], aux[0])
    if rule is RuleKind.NEG_R:
        return lk.neg_r(premises[0], aux[0])
    if rule is RuleKind.AND_L:
        return lk.and_l(premises[0], aux[0], aux[1])
    if rule is RuleKind.OR_R:
        return lk.or_r(premises[0], aux[0], aux[1])
    if rule is RuleKind.IMP_R:
        return lk.imp_r(premises[0], aux[0], aux[1])
    if rule is RuleKind.AND_R:
        return lk.and_r(premises[0], premises[1], aux[0], aux[1])
    if rule is RuleKind.OR_L:
        return lk.or_l(premises[0], premises[1], aux[0], aux[1])
    if rule is RuleKind.IMP_L:
        return lk.imp_l(premises[0], premises[1], aux[0], aux[1])
    if rule is RuleKind.WEAK_L:
        return lk.weak_l(premises[0], m.formula)
    if rule is RuleKind.WEAK_R:
        return lk.weak_r(premises[0], m.formula)
    if rule is RuleKind.CONTR_L:
        return lk.contr_l(premises[0], m.formula)
    if rule is RuleKind.CONTR_R:
        return lk.contr_r(premises[0], m.formula)
    if rule is RuleKind.FORALL_L:
        return lk.forall_l(premises[0], m.formula, node.witness)
    if rule is RuleKind.EXISTS_R:
        return lk.exists_r(premises[0], m.formula, node.witness)
    if rule is RuleKind.FORALL_R:
        return lk.forall_r(premises[0], m.formula, node.eigen)
    if rule is RuleKind.EXISTS_L:
        return lk.exists_l(premises[0], m.formula, node.eigen)
    if rule is RuleKind.AND_EQ_L1:
        return lk.and_eq_l1(premises[0], aux[0], m.formula)
    if rule is RuleKind.AND_EQ_L3:
        return lk.and_eq_l3(premises[0], aux[0], m.formula)
    raise PreconditionError(f"cannot rebuild rule {node.rule_label()}")


def reapply_with_weakening(node: LKProof, premises: tuple[LKProof, ...]) -> LKProof:
    """Rebuild the inference over premises that may have lost some of the
    auxiliary occurrences (e.g. along a dropped branch): the missing aux
    formulas are weakened back in first."""
    premise_occ = {o.id: o for q in node.premises for o in q.conclusion.occurrences()}
    need: list[list[tuple[Formula, str]]] = [[] for _ in premises]
    for k, q in enumerate(node.premises):
        ant_ids = {o.id for o in q.conclusion.antecedent}
        succ_ids = {o.id for o in q.conclusion.succedent}
        for i in node.aux:
            if i in ant_ids:
                need[k].append((premise_occ[i].formula, "ant"))
            elif i in succ_ids:
                need[k].append((premise_occ[i].formula, "succ"))
    fixed = []
    for q, requirements in zip(premises, need):
        have_ant = Counter(q.conclusion.ant_formulas())
        have_succ = Counter(q.conclusion.succ_formulas())
        want_ant: Counter = Counter()
        want_succ: Counter = Counter()
        for f, side in requirements:
            (want_ant if side == "ant" else want_succ)[f] += 1
        for f in want_ant:
            while have_ant[f] < want_ant[f]:
                q = lk.weak_l(q, f)
                have_ant[f] += 1
        for f in want_succ:
            while have_succ[f] < want_succ[f]:
                q = lk.weak_r(q, f)
                have_succ[f] += 1
        fixed.append(q)
    return _reapply(node, tuple(fixed))


def adjust_multisets(p: LKProof, want_ant: Counter, want_succ: Counter) -> LKProof:
    """Weaken/contract to reach the exact target multisets."""
    have_ant = Counter(p.conclusion.ant_formulas())
    have_succ = Counter(p.conclusion.succ_formulas())
    order_ant = list(dict.fromkeys(list(p.conclusion.ant_formulas()) + list(want_ant)))
    order_succ = list(dict.fromkeys(list(p.conclusion.succ_formulas()) + list(want_succ)))
    for f in order_ant:
        d = have_ant[f] - want_ant[f]
        assert d <= 0 or want_ant[f] >= 1, f"cannot delete {f} from antecedent"
        while d > 0:
            p = lk.contr_l(p, f)
            d -= 1
        while d < 0:
            p = lk.weak_l(p, f)
            d += 1
    for f in order_succ:
        d = have_succ[f] - want_succ[f]
        assert d <= 0 or want_succ[f] >= 1, f"cannot delete {f} from succedent"
        while d > 0:
            p = lk.contr_r(p, f)
            d -= 1
        while d < 0:
            p = lk.weak_r(p, f)
            d += 1
    return p


def _freshen_eigen(node: LKProof) -> LKProof:
    if node.eigen is None:
        return node
    return substitute_proof(node, {node.eigen: _fresh_eigen(node.eigen)})


def _freshen_all_eigens(p: LKProof, clash: set[str]) -> LKProof:
    for _, node in p.nodes():
        if node.eigen is not None and node.eigen.name in clash:
            p = substitute_proof(p, {node.eigen: _fresh_eigen(node.eigen)})
    return p


def _aux_count(node: LKProof, premise: LKProof, a: Formula, side: str) -> int:
    """How many of node's aux occurrences sit in `premise` on `side` and
    carry the formula a (those must survive a mix past this node)."""
    occs = {
        o.id: o
        for o in (premise.conclusion.succedent if side == "succ" else premise.conclusion.antecedent)
    }
    return sum(1 for i in node.aux if i in occs and occs[i].formula == a)


def _mix(p1: LKProof, p2: LKProof, a: Formula, token: CancelToken,
         keep_left: int = 0, keep_right: int = 0) -> LKProof:
    """Cut-free proof of  Γ1, (Γ2 - a*) |- (Δ1 - a*), Δ2  from cut-free
    proofs of Γ1 |- Δ1 (a in Δ1) and Γ2 |- Δ2 (a in Γ2); keep_* retains
    that many surplus copies of a (restored by weakening).  Internal
    recursion returns lean sub-multiset results; the exact shape is
    restored in a single adjustment pass here."""
    ant1 = Counter(p1.conclusion.ant_formulas())
    ant2 = Counter(p2.conclusion.ant_formulas())
    succ1 = Counter(p1.conclusion.succ_formulas())
    succ2 = Counter(p2.conclusion.succ_formulas())
    ant2[a] = keep_right
    succ1[a] = keep_left
    want_ant = ant1 + ant2
    want_succ = succ1 + succ2
    want_ant += Counter()
    want_succ += Counter()
    raw = _mix_inner(p1, p2, a, token)
    return adjust_multisets(raw, want_ant, want_succ)


def _mix_inner(p1: LKProof, p2: LKProof, a: Formula, token: CancelToken) -> LKProof:
    """Mix without shape adjustment: the conclusion contains no a on the
    mixed sides and is a sub-multiset of the exact mix conclusion."""
    token.check()
    p1 = refresh_ids(p1)
    p2 = refresh_ids(p2)
    status, s = _reduce_left(p1, p2, a, token)
    if status == "principal":
        s = _reduce_right(s, p2, a, token)
    return s


def _reduce_left(p1: LKProof, p2: LKProof, a: Formula,
                 token: CancelToken) -> tuple[str, LKProof]:
    """Reduce p1 until its last inference introduces the mix formula on
    the right.  Returns ("done", proof) when the mix is resolved here,
    or ("principal", s) when s ends with a right introduction of a."""
    token.check()
    if p1.rule is RuleKind.AXIOM:
        # p1 = a |- a: everything comes from p2
        return "done", p2
    m = _main_occ(p1)
    principal = (
        m is not None
        and m.formula == a
        and any(o.id == m.id for o in p1.conclusion.succedent)
    )
    if not principal:
        node = p1
        if node.eigen is not None:
            clash = {v.name for o in p2.conclusion.occurrences() for v in o.formula.free_vars()}
            if node.eigen.name in clash:
                node = _freshen_eigen(node)
        new_premises = []
        for q in node.premises:
            keep = _aux_count(node, q, a, "succ")
            if _count(q.conclusion.succ_formulas(), a) > keep:
                new_premises.append(_mix_inner(q, p2, a, token))
            else:
                new_premises.append(q)
        return "done", reapply_with_weakening(node, tuple(new_premises))
    if p1.rule is RuleKind.WEAK_R:
        q = p1.premises[0]
        if _count(q.conclusion.succ_formulas(), a) > 0:
            return "done", _mix_inner(q, p2, a, token)
        # p2 is dropped; the caller's adjustment restores its context
        return "done", q
    if p1.rule is RuleKind.CONTR_R:
        return "done", _mix_inner(p1.premises[0], p2, a, token)
    # logical introduction of a on the right: clear residual copies first
    new_premises = []
    for q in p1.premises:
        keep = _aux_count(p1, q, a, "succ")
        if _count(q.conclusion.succ_formulas(), a) > keep:
            new_premises.append(_mix_inner(q, p2, a, token))
        else:
            new_premises.append(q)
    return "principal", reapply_with_weakening(p1, tuple(new_premises))


def _reduce_right(s: LKProof, p2: LKProof, a: Formula, token: CancelToken) -> LKProof:
    """s ends with a right introduction of a (single copy); reduce p2."""
    token.check()
    if p2.rule is RuleKind.AXIOM:
        return s
    m = _main_occ(p2)
    principal = (
        m is not None
        and m.formula == a
        and any(o.id == m.id for o in p2.conclusion.antecedent)
    )
    if not principal:
        node = p2
        if node.eigen is not None:
            clash = {v.name for o in s.conclusion.occurrences() for v in o.formula.free_vars()}
            if node.eigen.name in clash:
                node = _freshen_eigen(node)
        new_premises = []
        for q in node.premises:
            keep = _aux_count(node, q, a, "ant")
            if _count(q.conclusion.ant_formulas(), a) > keep:
                new_premises.append(_mix_inner(s, q, a, token))
            else:
                new_premises.append(q)
        return reapply_with_weakening(node, tuple(new_premises))
    if p2.rule is RuleKind.WEAK_L:
        q = p2.premises[0]
        if _count(q.conclusion.ant_formulas(), a) > 0:
            return _mix_inner(s, q, a, token)
        return q
    if p2.rule is RuleKind.CONTR_L:
        return _mix_inner(s, p2.premises[0], a, token)
    # logical elimination of a on the left: clear residual copies above
    # the principal inference before the grade step
    new_premises = []
    for q in p2.premises:
        keep = _aux_count(p2, q, a, "ant")
        if _count(q.conclusion.ant_formulas(), a) > keep:
            new_premises.append(_mix_inner(s, q, a, token))
        else:
            new_premises.append(q)
    t = reapply_with_weakening(p2, tuple(new_premises))
    return _grade(s, t, a, token)


def _grade(s: LKProof, t: LKProof, a: Formula, token: CancelToken) -> LKProof:
    """Both last inferences are principal for `a`: replace by mixes on
    proper subformulas; s introduces a on the right, t eliminates it on
    the left."""
    if isinstance(a, Neg):
        sp = s.premises[0]   # a.sub, Γ1 |- Δ1
        tp = t.premises[0]   # Γ2 |- Δ2, a.sub
        return _mix_inner(tp, sp, a.sub, token)
    if isinstance(a, And):
        s1, s2 = s.premises  # |- .., a.left   and  |- .., a.right
        tp = t.premises[0]   # a.left, a.right, .. |-
        u = _mix_inner(s1, tp, a.left, token)
        if _count(u.conclusion.ant_formulas(), a.right) > 0:
            u = _mix_inner(s2, u, a.right, token)
        return u
    if isinstance(a, Or):
        sp = s.premises[0]   # |- .., a.left, a.right
        t1, t2 = t.premises  # a.left, .. |-   and  a.right, .. |-
        u = _mix_inner(sp, t1, a.left, token)
        if _count(u.conclusion.succ_formulas(), a.right) > 0:
            u = _mix_inner(u, t2, a.right, token)
        return u
    if isinstance(a, Imp):
        sp = s.premises[0]   # a.left, Γ1 |- Δ1, a.right
        t1, t2 = t.premises  # Π1 |- Λ1, a.left  and  a.right, Π2 |- Λ2
        u = _mix_inner(t1, sp, a.left, token)
        if _count(u.conclusion.succ_formulas(), a.right) > 0:
            u = _mix_inner(u, t2, a.right, token)
        return u
    if isinstance(a, ForAll):
        # s: ForAllR with eigen; t: ForAllL with witness
        sp, tp = s.premises[0], t.premises[0]
        w = t.witness
        sp = _freshen_all_eigens(sp, {v.name for v in w.free_vars()})
        inst = substitute(a.body, {a.var: w})
        sp = substitute_proof(sp, {s.eigen: w})
        return _mix_inner(sp, tp, inst, token)
    if isinstance(a, Exists):
        # s: ExistsR with witness; t: ExistsL with eigen
        sp, tp = s.premises[0], t.premises[0]
        w = s.witness
        tp = _freshen_all_eigens(tp, {v.name for v in w.free_vars()})
        inst = substitute(a.body, {a.var: w})
        tp = substitute_proof(tp, {t.eigen: w})
        return _mix_inner(sp, tp, inst, token)
    raise PreconditionError(f"no reduction for cut formula {a}")


# --------------------------------------------------------------- herbrand

@dataclass(frozen=True)
class HerbrandMember:
    formula: Formula
    origin: Formula
    witnesses: tuple = ()

    def __str__(self) -> str:
        return str(self.formula)


@dataclass(frozen=True)
class HerbrandSequent:
    antecedent: tuple[HerbrandMember, ...]
    succedent: tuple[HerbrandMember, ...]

    def as_sequent(self) -> Sequent:
        return sequent(
            [m.formula for m in self.antecedent],
            [m.formula for m in self.succedent],
        )

    def __str__(self) -> str:
        return str(self.as_sequent())


def herbrand_sequent(p: LKProof) -> HerbrandSequent:
    """Quantifier-free instances of the end-sequent formulas collected
    from the weak quantifier inferences of a (skolemized) proof with at
    most atomic cuts."""
    p = _require_plain(p, "herbrand_sequent")
    for _, node in p.nodes():
        if node.rule is RuleKind.CUT:
            if not all(isinstance(f, Atom) for f in _aux_formulas(node)):
                raise PreconditionError(
                    "herbrand_sequent needs a cut-free proof (atomic cuts tolerated)"
                )
    p = skolemize(p)

    inst: dict[int, list[tuple[Formula, tuple]]] = {}

    def set_main(node, value):
        for o in node.conclusion.occurrences():
            if o.id in set(node.main):
                inst[o.id] = value

    for _, node in _postorder(p):
        if node.rule is RuleKind.AXIOM or node.rule is RuleKind.PROOF_LINK:
            for o in node.conclusion.occurrences():
                inst[o.id] = [(o.formula, ())]
            continue
        # context occurrences inherit
        main_ids = set(node.main)
        for o in node.conclusion.occurrences():
            if o.id not in main_ids:
                inst[o.id] = inst[o.parents[0]]
        if not node.main:
            continue
        aux = [
            next(o for q in node.premises for o in q.conclusion.occurrences() if o.id == i)
            for i in node.aux
        ]
        rule = node.rule
        if rule in (RuleKind.WEAK_L, RuleKind.WEAK_R):
            set_main(node, [])
        elif rule in (RuleKind.CONTR_L, RuleKind.CONTR_R):
            set_main(node, inst[aux[0].id] + inst[aux[1].id])
        elif rule in (RuleKind.NEG_L, RuleKind.NEG_R):
            set_main(node, [(Neg(f), w) for f, w in inst[aux[0].id]])
        elif rule in (RuleKind.AND_L, RuleKind.AND_R):
            set_main(node, _combine(And, inst[aux[0].id], inst[aux[1].id]))
        elif rule in (RuleKind.OR_L, RuleKind.OR_R):
            set_main(node, _combine(Or, inst[aux[0].id], inst[aux[1].id]))
        elif rule is RuleKind.IMP_L or rule is RuleKind.IMP_R:
            set_main(node, _combine(Imp, inst[aux[0].id], inst[aux[1].id]))
        elif rule in lk.WEAK_QUANTIFIER_RULES:
            m = _main_occ(node)
            var = m.formula.var
            set_main(node, [(f, w + ((var, node.witness),)) for f, w in inst[aux[0].id]])
        elif rule in (RuleKind.AND_EQ_L1, RuleKind.AND_EQ_L3):
            set_main(node, inst[aux[0].id])
        elif rule in lk.STRONG_QUANTIFIER_RULES:
            raise PreconditionError(
                "herbrand_sequent: strong quantifier inference survived skolemization"
            )
        # cut: aux instance lists are dropped

    def members(occs):
        out = []
        for o in occs:
            if is_quantifier_free(o.formula):
                out.append(HerbrandMember(o.formula, o.formula))
            else:
                for f, w in inst[o.id]:
                    out.append(HerbrandMember(f, o.formula, w))
        return tuple(out)

    hs = HerbrandSequent(members(p.conclusion.antecedent), members(p.conclusion.succedent))
    for m in hs.antecedent + hs.succedent:
        assert is_quantifier_free(m.formula)
    return hs


def _postorder(p: LKProof):
    for q in p.premises:
        yield from _postorder(q)
    yield "", p


def _combine(cls, left, right):
    return [(cls(f, g), wf + wg) for f, wf in left for g, wg in right]


def is_end_sequent_instance(member: Formula, origin: Formula) -> bool:
    """member is obtainable from origin by dropping weak quantifiers,
    substituting terms, and unfolding ground iterated connectives."""
    try:
        origin = unfold_schema_connective(origin)
    except Exception:
        return False
    return _flex_match(member, origin, {})


def _flex_match(m, o, env) -> bool:
    if isinstance(o, (ForAll, Exists)):
        env2 = dict(env)
        return _flex_match_binder(m, o, env2)
    if isinstance(o, Atom):
        if not isinstance(m, Atom) or m.name != o.name or len(m.args) != len(o.args):
            return False
        return all(_term_match(a, b, env) for b, a in zip(o.args, m.args))
    if isinstance(o, Neg):
        return isinstance(m, Neg) and _flex_match(m.sub, o.sub, env)
    if isinstance(o, (And, Or, Imp)):
        return type(m) is type(o) and _flex_match(m.left, o.left, env) and _flex_match(m.right, o.right, env)
    return m == o


def _flex_match_binder(m, o, env) -> bool:
    flex = o.var
    saved = env.get(flex, "absent")
    env[flex] = None
    ok = _flex_match(m, o.body, env)
    if saved == "absent":
        env.pop(flex, None)
    else:
        env[flex] = saved
    return ok


def _term_match(mt: Term, ot: Term, env: dict) -> bool:
    from .kernel import App, Succ, Zero

    if isinstance(ot, Var) and ot in env:
        if env[ot] is None:
            env[ot] = mt
            return True
        return env[ot] == mt
    if type(mt) is not type(ot):
        return False
    if isinstance(ot, (Var, Const, Zero)):
        return mt == ot
    if isinstance(ot, Succ):
        return _term_match(mt.arg, ot.arg, env)
    if isinstance(ot, App):
        return _term_match(mt.fn, ot.fn, env) and _term_match(mt.arg, ot.arg, env)
    return mt == ot


# ------------------------------------------------------------ cut formulas

def extract_cut_formulas(p: LKProof) -> list[Formula]:
    """Cut formulas in top-down, left-to-right order; duplicates kept."""
    out: list[Formula] = []
    for _, node in p.nodes():
        if node.rule is RuleKind.CUT:
            out.append(_aux_formulas(node)[0])
    return out

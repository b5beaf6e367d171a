"""Sequents with ancestor-tracked formula occurrences, LK/LKS rule
applications, proof checking, proof schemata with links, schema
instantiation, and the automatic propositional prover (autoprop).

Proofs are immutable trees.  Occurrence ids are drawn from a global
monotone counter, so they are unique within any proof built in one
process; equality of proofs ignores ids entirely.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    ArityError,
    EigenvariableViolation,
    EquivalenceMismatch,
    InferenceError,
    LinkError,
    MissingAux,
    NotPropositional,
)
from .kernel import (
    And,
    Atom,
    BigAnd,
    BigOr,
    Exists,
    ForAll,
    Formula,
    Imp,
    Neg,
    Or,
    Substitution,
    Term,
    Var,
    eval_param,
    is_ground_param,
    is_quantifier_free,
    num,
    substitute,
    subformula_atoms,
    unfold_schema_connective,
)

_ids = itertools.count()


def fresh_id() -> int:
    return next(_ids)


# ------------------------------------------------------------- sequents

@dataclass(frozen=True)
class FormulaOccurrence:
    """A formula at a position in a sequent, with links to the premise
    occurrences it descends from."""

    id: int
    formula: Formula
    parents: tuple[int, ...] = ()

    def __str__(self) -> str:
        return str(self.formula)


def occ(formula: Formula, parents: tuple[int, ...] = ()) -> FormulaOccurrence:
    return FormulaOccurrence(fresh_id(), formula, parents)


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[FormulaOccurrence, ...] = ()
    succedent: tuple[FormulaOccurrence, ...] = ()

    def ant_formulas(self) -> tuple[Formula, ...]:
        return tuple(o.formula for o in self.antecedent)

    def succ_formulas(self) -> tuple[Formula, ...]:
        return tuple(o.formula for o in self.succedent)

    def occurrences(self) -> tuple[FormulaOccurrence, ...]:
        return self.antecedent + self.succedent

    def same_formulas(self, other: "Sequent") -> bool:
        """Multiset equality on the underlying formulas of both sides."""
        return (
            Counter(self.ant_formulas()) == Counter(other.ant_formulas())
            and Counter(self.succ_formulas()) == Counter(other.succ_formulas())
        )

    def is_atomic(self) -> bool:
        return all(isinstance(o.formula, Atom) for o in self.occurrences())

    def __str__(self) -> str:
        left = ", ".join(str(o.formula) for o in self.antecedent)
        right = ", ".join(str(o.formula) for o in self.succedent)
        return f"{left} |- {right}".strip()


def sequent(ants, succs) -> Sequent:
    """Build a sequent of fresh parentless occurrences from formulas."""
    return Sequent(
        tuple(occ(f) for f in ants),
        tuple(occ(f) for f in succs),
    )


def sequents_equal(a: Sequent, b: Sequent) -> bool:
    return a.same_formulas(b)


# ---------------------------------------------------------------- rules

class RuleKind(Enum):
    AXIOM = "ax"
    CUT = "cut"
    NEG_L = "negL"
    NEG_R = "negR"
    AND_L = "andL"
    AND_R = "andR"
    OR_L = "orL"
    OR_R = "orR"
    IMP_L = "impL"
    IMP_R = "impR"
    FORALL_L = "allL"
    FORALL_R = "allR"
    EXISTS_L = "exL"
    EXISTS_R = "exR"
    WEAK_L = "weakL"
    WEAK_R = "weakR"
    CONTR_L = "contrL"
    CONTR_R = "contrR"
    AND_EQ_L1 = "andEqL1"
    AND_EQ_L3 = "andEqL3"
    PROOF_LINK = "pLink"
    AUTOPROP = "autoprop"
    GENERIC = "generic"


STRUCTURAL_RULES = frozenset(
    {RuleKind.WEAK_L, RuleKind.WEAK_R, RuleKind.CONTR_L, RuleKind.CONTR_R}
)

STRONG_QUANTIFIER_RULES = frozenset({RuleKind.FORALL_R, RuleKind.EXISTS_L})
WEAK_QUANTIFIER_RULES = frozenset({RuleKind.FORALL_L, RuleKind.EXISTS_R})

_ARITY = {
    RuleKind.AXIOM: 0,
    RuleKind.PROOF_LINK: 0,
    RuleKind.AUTOPROP: 0,
    RuleKind.CUT: 2,
    RuleKind.AND_R: 2,
    RuleKind.OR_L: 2,
    RuleKind.IMP_L: 2,
}


@dataclass(frozen=True)
class LinkRef:
    """Reference to another proof (schema) at a parameter value."""

    name: str
    arg: Term | None = None


@dataclass(frozen=True, eq=False)
class LKProof:
    """One inference node; the whole proof is the tree below it."""

    rule: RuleKind
    conclusion: Sequent
    premises: tuple["LKProof", ...] = ()
    aux: tuple[int, ...] = ()
    main: tuple[int, ...] = ()
    witness: Term | None = None
    eigen: Var | None = None
    link: LinkRef | None = None
    label: str | None = None
    expansion: "LKProof | None" = None

    @property
    def end_sequent(self) -> Sequent:
        return self.conclusion

    def rule_label(self) -> str:
        if self.rule is RuleKind.GENERIC and self.label:
            return self.label
        if self.rule is RuleKind.PROOF_LINK and self.link:
            arg = f", {self.link.arg}" if self.link.arg is not None else ""
            return f"pLink({self.link.name}{arg})"
        return self.rule.value

    def nodes(self, path: str = "r"):
        """Pre-order traversal yielding (path, node)."""
        yield path, self
        for i, p in enumerate(self.premises):
            yield from p.nodes(path + str(i))

    def node_at(self, path: str) -> "LKProof | None":
        if not path.startswith("r"):
            return None
        node = self
        for ch in path[1:]:
            i = int(ch)
            if i >= len(node.premises):
                return None
            node = node.premises[i]
        return node

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def is_cut_free(self) -> bool:
        return all(n.rule is not RuleKind.CUT for _, n in self.nodes())

    def has_links(self) -> bool:
        return any(n.rule is RuleKind.PROOF_LINK for _, n in self.nodes())

    def __eq__(self, other):
        if not isinstance(other, LKProof):
            return NotImplemented
        return proof_equal(self, other)

    def __hash__(self):
        return hash((self.rule, len(self.premises)))

    def __str__(self) -> str:
        return f"[{self.rule_label()}] {self.conclusion}"


def proof_equal(p: LKProof, q: LKProof) -> bool:
    """Structural equality: rule shape and formulas; occurrence ids ignored."""
    if p.rule is not q.rule or len(p.premises) != len(q.premises):
        return False
    if not p.conclusion.same_formulas(q.conclusion):
        return False
    if p.witness != q.witness or p.eigen != q.eigen or p.label != q.label:
        return False
    if (p.link is None) != (q.link is None):
        return False
    if p.link is not None and (p.link.name != q.link.name or p.link.arg != q.link.arg):
        return False
    if (p.expansion is None) != (q.expansion is None):
        return False
    if p.expansion is not None and not proof_equal(p.expansion, q.expansion):
        return False
    return all(proof_equal(a, b) for a, b in zip(p.premises, q.premises))


# ----------------------------------------------------- occurrence lookup

def _find_occ(side: tuple[FormulaOccurrence, ...], spec, taken=()) -> FormulaOccurrence:
    """Resolve an aux selector: occurrence, id, or first matching formula."""
    if isinstance(spec, FormulaOccurrence):
        for o in side:
            if o.id == spec.id and o.id not in taken:
                return o
        raise MissingAux(f"occurrence {spec.id} not in premise side")
    if isinstance(spec, int):
        for o in side:
            if o.id == spec and o.id not in taken:
                return o
        raise MissingAux(f"occurrence id {spec} not in premise side")
    for o in side:
        if o.id not in taken and o.formula == spec:
            return o
    raise MissingAux(f"no occurrence of {spec} in premise side")


def _pass(o: FormulaOccurrence) -> FormulaOccurrence:
    return occ(o.formula, (o.id,))


def _ctx(side, *consumed) -> tuple[FormulaOccurrence, ...]:
    skip = {o.id for o in consumed}
    return tuple(_pass(o) for o in side if o.id not in skip)


# ---------------------------------------------------------------- leaves

def axiom(a: Formula) -> LKProof:
    """The atomic axiom a |- a."""
    if not isinstance(a, Atom):
        raise InferenceError(f"axioms are restricted to atomic formulas, got {a}")
    return LKProof(RuleKind.AXIOM, sequent([a], [a]))


def proof_link(name: str, arg: Term | None, concl: Sequent) -> LKProof:
    return LKProof(RuleKind.PROOF_LINK, concl, link=LinkRef(name, arg))


def autoprop_leaf(concl: Sequent, expansion: LKProof) -> LKProof:
    if not expansion.conclusion.same_formulas(concl):
        raise InferenceError("autoprop expansion does not prove the stated sequent")
    return LKProof(RuleKind.AUTOPROP, concl, expansion=expansion)


def generic_node(label: str, concl: Sequent, premises=()) -> LKProof:
    """Display-only node for unrecognized rule names; flagged by check_proof."""
    return LKProof(RuleKind.GENERIC, concl, tuple(premises), label=label)


# ------------------------------------------------------------- inferences

def cut(p1: LKProof, p2: LKProof, cut_formula) -> LKProof:
    a1 = _find_occ(p1.conclusion.succedent, cut_formula)
    a2 = _find_occ(p2.conclusion.antecedent, a1.formula)
    concl = Sequent(
        _ctx(p1.conclusion.antecedent) + _ctx(p2.conclusion.antecedent, a2),
        _ctx(p1.conclusion.succedent, a1) + _ctx(p2.conclusion.succedent),
    )
    return LKProof(RuleKind.CUT, concl, (p1, p2), aux=(a1.id, a2.id))


def neg_l(p: LKProof, aux) -> LKProof:
    a = _find_occ(p.conclusion.succedent, aux)
    main = occ(Neg(a.formula), (a.id,))
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent, a),
    )
    return LKProof(RuleKind.NEG_L, concl, (p,), aux=(a.id,), main=(main.id,))


def neg_r(p: LKProof, aux) -> LKProof:
    a = _find_occ(p.conclusion.antecedent, aux)
    main = occ(Neg(a.formula), (a.id,))
    concl = Sequent(
        _ctx(p.conclusion.antecedent, a),
        _ctx(p.conclusion.succedent) + (main,),
    )
    return LKProof(RuleKind.NEG_R, concl, (p,), aux=(a.id,), main=(main.id,))


def and_l(p: LKProof, left, right) -> LKProof:
    a = _find_occ(p.conclusion.antecedent, left)
    b = _find_occ(p.conclusion.antecedent, right, taken={a.id})
    main = occ(And(a.formula, b.formula), (a.id, b.id))
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent, a, b),
        _ctx(p.conclusion.succedent),
    )
    return LKProof(RuleKind.AND_L, concl, (p,), aux=(a.id, b.id), main=(main.id,))


def and_r(p1: LKProof, p2: LKProof, left, right) -> LKProof:
    a = _find_occ(p1.conclusion.succedent, left)
    b = _find_occ(p2.conclusion.succedent, right)
    main = occ(And(a.formula, b.formula), (a.id, b.id))
    concl = Sequent(
        _ctx(p1.conclusion.antecedent) + _ctx(p2.conclusion.antecedent),
        _ctx(p1.conclusion.succedent, a) + _ctx(p2.conclusion.succedent, b) + (main,),
    )
    return LKProof(RuleKind.AND_R, concl, (p1, p2), aux=(a.id, b.id), main=(main.id,))


def or_l(p1: LKProof, p2: LKProof, left, right) -> LKProof:
    a = _find_occ(p1.conclusion.antecedent, left)
    b = _find_occ(p2.conclusion.antecedent, right)
    main = occ(Or(a.formula, b.formula), (a.id, b.id))
    concl = Sequent(
        (main,) + _ctx(p1.conclusion.antecedent, a) + _ctx(p2.conclusion.antecedent, b),
        _ctx(p1.conclusion.succedent) + _ctx(p2.conclusion.succedent),
    )
    return LKProof(RuleKind.OR_L, concl, (p1, p2), aux=(a.id, b.id), main=(main.id,))


def or_r(p: LKProof, left, right) -> LKProof:
    a = _find_occ(p.conclusion.succedent, left)
    b = _find_occ(p.conclusion.succedent, right, taken={a.id})
    main = occ(Or(a.formula, b.formula), (a.id, b.id))
    concl = Sequent(
        _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent, a, b) + (main,),
    )
    return LKProof(RuleKind.OR_R, concl, (p,), aux=(a.id, b.id), main=(main.id,))


def imp_l(p1: LKProof, p2: LKProof, left, right) -> LKProof:
    a = _find_occ(p1.conclusion.succedent, left)
    b = _find_occ(p2.conclusion.antecedent, right)
    main = occ(Imp(a.formula, b.formula), (a.id, b.id))
    concl = Sequent(
        (main,) + _ctx(p1.conclusion.antecedent) + _ctx(p2.conclusion.antecedent, b),
        _ctx(p1.conclusion.succedent, a) + _ctx(p2.conclusion.succedent),
    )
    return LKProof(RuleKind.IMP_L, concl, (p1, p2), aux=(a.id, b.id), main=(main.id,))


def imp_r(p: LKProof, left, right) -> LKProof:
    a = _find_occ(p.conclusion.antecedent, left)
    b = _find_occ(p.conclusion.succedent, right)
    main = occ(Imp(a.formula, b.formula), (a.id, b.id))
    concl = Sequent(
        _ctx(p.conclusion.antecedent, a),
        _ctx(p.conclusion.succedent, b) + (main,),
    )
    return LKProof(RuleKind.IMP_R, concl, (p,), aux=(a.id, b.id), main=(main.id,))


def weak_l(p: LKProof, f: Formula) -> LKProof:
    main = occ(f)
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent),
    )
    return LKProof(RuleKind.WEAK_L, concl, (p,), main=(main.id,))


def weak_r(p: LKProof, f: Formula) -> LKProof:
    main = occ(f)
    concl = Sequent(
        _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent) + (main,),
    )
    return LKProof(RuleKind.WEAK_R, concl, (p,), main=(main.id,))


def contr_l(p: LKProof, f) -> LKProof:
    a = _find_occ(p.conclusion.antecedent, f)
    b = _find_occ(p.conclusion.antecedent, a.formula, taken={a.id})
    main = occ(a.formula, (a.id, b.id))
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent, a, b),
        _ctx(p.conclusion.succedent),
    )
    return LKProof(RuleKind.CONTR_L, concl, (p,), aux=(a.id, b.id), main=(main.id,))


def contr_r(p: LKProof, f) -> LKProof:
    a = _find_occ(p.conclusion.succedent, f)
    b = _find_occ(p.conclusion.succedent, a.formula, taken={a.id})
    main = occ(a.formula, (a.id, b.id))
    concl = Sequent(
        _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent, a, b) + (main,),
    )
    return LKProof(RuleKind.CONTR_R, concl, (p,), aux=(a.id, b.id), main=(main.id,))


def _quantifier(rule, p, main_formula, aux_occ_side, term=None, eigen=None):
    cls = ForAll if rule in (RuleKind.FORALL_L, RuleKind.FORALL_R) else Exists
    if not isinstance(main_formula, cls):
        raise InferenceError(f"{rule.value} needs a {cls.__name__} main formula")
    inst = substitute(main_formula.body, {main_formula.var: term if term is not None else eigen})
    a = _find_occ(aux_occ_side, inst)
    return a, main_formula


def forall_l(p: LKProof, main_formula: ForAll, t: Term) -> LKProof:
    a, mf = _quantifier(RuleKind.FORALL_L, p, main_formula, p.conclusion.antecedent, term=t)
    main = occ(mf, (a.id,))
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent, a),
        _ctx(p.conclusion.succedent),
    )
    return LKProof(RuleKind.FORALL_L, concl, (p,), aux=(a.id,), main=(main.id,), witness=t)


def forall_r(p: LKProof, main_formula: ForAll, eigen: Var) -> LKProof:
    a, mf = _quantifier(RuleKind.FORALL_R, p, main_formula, p.conclusion.succedent, eigen=eigen)
    main = occ(mf, (a.id,))
    concl = Sequent(
        _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent, a) + (main,),
    )
    _check_eigen(eigen, concl)
    return LKProof(RuleKind.FORALL_R, concl, (p,), aux=(a.id,), main=(main.id,), eigen=eigen)


def exists_l(p: LKProof, main_formula: Exists, eigen: Var) -> LKProof:
    a, mf = _quantifier(RuleKind.EXISTS_L, p, main_formula, p.conclusion.antecedent, eigen=eigen)
    main = occ(mf, (a.id,))
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent, a),
        _ctx(p.conclusion.succedent),
    )
    _check_eigen(eigen, concl)
    return LKProof(RuleKind.EXISTS_L, concl, (p,), aux=(a.id,), main=(main.id,), eigen=eigen)


def exists_r(p: LKProof, main_formula: Exists, t: Term) -> LKProof:
    a, mf = _quantifier(RuleKind.EXISTS_R, p, main_formula, p.conclusion.succedent, term=t)
    main = occ(mf, (a.id,))
    concl = Sequent(
        _ctx(p.conclusion.antecedent),
        _ctx(p.conclusion.succedent, a) + (main,),
    )
    return LKProof(RuleKind.EXISTS_R, concl, (p,), aux=(a.id,), main=(main.id,), witness=t)


def _check_eigen(eigen: Var, concl: Sequent) -> None:
    for o in concl.occurrences():
        if eigen in o.formula.free_vars():
            raise EigenvariableViolation(
                f"eigenvariable {eigen} occurs in the conclusion {concl}"
            )


# --------------------------------------------- fold/unfold equivalence

def fold_normal_form(f: Formula) -> Formula:
    """Normal form under: BigAnd(i=l..l)F => F[i:=l],
    BigAnd(i=l..t+1)F => BigAnd(i=l..t)F /\\ F[i:=t+1]  (BigOr dually)."""
    from .kernel import Succ

    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return Neg(fold_normal_form(f.sub))
    if isinstance(f, (And, Or, Imp)):
        return type(f)(fold_normal_form(f.left), fold_normal_form(f.right))
    if isinstance(f, (ForAll, Exists)):
        return type(f)(f.var, fold_normal_form(f.body))
    if isinstance(f, (BigAnd, BigOr)):
        joiner = And if isinstance(f, BigAnd) else Or
        if f.lower == f.upper:
            return fold_normal_form(substitute(f.body, {f.var: f.lower}))
        if isinstance(f.upper, Succ):
            if (
                is_ground_param(f.lower)
                and is_ground_param(f.upper)
                and eval_param(f.lower) > eval_param(f.upper)
            ):
                return f
            head = type(f)(f.var, f.lower, f.upper.arg, f.body)
            last = substitute(f.body, {f.var: f.upper})
            return joiner(fold_normal_form(head), fold_normal_form(last))
        return type(f)(f.var, f.lower, f.upper, fold_normal_form(f.body))
    return f


def _and_eq(kind: RuleKind, p: LKProof, aux, main_formula: Formula) -> LKProof:
    a = _find_occ(p.conclusion.antecedent, aux)
    if fold_normal_form(a.formula) != fold_normal_form(main_formula):
        raise EquivalenceMismatch(
            f"{kind.value}: {a.formula} and {main_formula} do not share a normal form"
        )
    main = occ(main_formula, (a.id,))
    concl = Sequent(
        (main,) + _ctx(p.conclusion.antecedent, a),
        _ctx(p.conclusion.succedent),
    )
    return LKProof(kind, concl, (p,), aux=(a.id,), main=(main.id,))


def and_eq_l1(p: LKProof, aux, main_formula: Formula) -> LKProof:
    return _and_eq(RuleKind.AND_EQ_L1, p, aux, main_formula)


def and_eq_l3(p: LKProof, aux, main_formula: Formula) -> LKProof:
    return _and_eq(RuleKind.AND_EQ_L3, p, aux, main_formula)


_BUILDERS = {
    RuleKind.CUT: lambda ps, kw: cut(ps[0], ps[1], kw["formula"]),
    RuleKind.NEG_L: lambda ps, kw: neg_l(ps[0], kw["formula"]),
    RuleKind.NEG_R: lambda ps, kw: neg_r(ps[0], kw["formula"]),
    RuleKind.AND_L: lambda ps, kw: and_l(ps[0], kw["formula"], kw["formula2"]),
    RuleKind.AND_R: lambda ps, kw: and_r(ps[0], ps[1], kw["formula"], kw["formula2"]),
    RuleKind.OR_L: lambda ps, kw: or_l(ps[0], ps[1], kw["formula"], kw["formula2"]),
    RuleKind.OR_R: lambda ps, kw: or_r(ps[0], kw["formula"], kw["formula2"]),
    RuleKind.IMP_L: lambda ps, kw: imp_l(ps[0], ps[1], kw["formula"], kw["formula2"]),
    RuleKind.IMP_R: lambda ps, kw: imp_r(ps[0], kw["formula"], kw["formula2"]),
    RuleKind.WEAK_L: lambda ps, kw: weak_l(ps[0], kw["formula"]),
    RuleKind.WEAK_R: lambda ps, kw: weak_r(ps[0], kw["formula"]),
    RuleKind.CONTR_L: lambda ps, kw: contr_l(ps[0], kw["formula"]),
    RuleKind.CONTR_R: lambda ps, kw: contr_r(ps[0], kw["formula"]),
    RuleKind.FORALL_L: lambda ps, kw: forall_l(ps[0], kw["formula"], kw["witness"]),
    RuleKind.FORALL_R: lambda ps, kw: forall_r(ps[0], kw["formula"], kw["eigen"]),
    RuleKind.EXISTS_L: lambda ps, kw: exists_l(ps[0], kw["formula"], kw["eigen"]),
    RuleKind.EXISTS_R: lambda ps, kw: exists_r(ps[0], kw["formula"], kw["witness"]),
    RuleKind.AND_EQ_L1: lambda ps, kw: and_eq_l1(ps[0], kw["formula"], kw["formula2"]),
    RuleKind.AND_EQ_L3: lambda ps, kw: and_eq_l3(ps[0], kw["formula"], kw["formula2"]),
}


def build_inference(kind: RuleKind, premises, **kw) -> LKProof:
    """Generic checked constructor; premise count must match the rule."""
    premises = tuple(premises)
    expected = _ARITY.get(kind, 1)
    if len(premises) != expected:
        raise ArityError(f"{kind.value} takes {expected} premises, got {len(premises)}")
    if kind is RuleKind.AXIOM:
        return axiom(kw["formula"])
    if kind is RuleKind.PROOF_LINK:
        return proof_link(kw["name"], kw.get("arg"), kw["conclusion"])
    if kind is RuleKind.AUTOPROP:
        return autoprop_leaf(kw["conclusion"], kw["expansion"])
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise InferenceError(f"no builder for rule {kind.value}") from None
    return builder(premises, kw)


# --------------------------------------------------------- proof surgery

def refresh_ids(p: LKProof) -> LKProof:
    """Structurally identical proof with entirely fresh occurrence ids."""
    idmap: dict[int, int] = {}

    def collect(node: LKProof):
        for o in node.conclusion.occurrences():
            idmap[o.id] = fresh_id()
        for q in node.premises:
            collect(q)
        if node.expansion is not None:
            collect(node.expansion)

    collect(p)
    return _remap(p, idmap)


def _remap(node: LKProof, idmap: dict[int, int]) -> LKProof:
    def mo(o: FormulaOccurrence) -> FormulaOccurrence:
        return FormulaOccurrence(
            idmap.get(o.id, o.id),
            o.formula,
            tuple(idmap.get(q, q) for q in o.parents),
        )

    return LKProof(
        node.rule,
        Sequent(
            tuple(mo(o) for o in node.conclusion.antecedent),
            tuple(mo(o) for o in node.conclusion.succedent),
        ),
        tuple(_remap(q, idmap) for q in node.premises),
        aux=tuple(idmap.get(i, i) for i in node.aux),
        main=tuple(idmap.get(i, i) for i in node.main),
        witness=node.witness,
        eigen=node.eigen,
        link=node.link,
        label=node.label,
        expansion=_remap(node.expansion, idmap) if node.expansion else None,
    )


def rebind_root_ids(p: LKProof, idmap: dict[int, int]) -> LKProof:
    """Rename only the root conclusion's occurrence ids (parents intact)."""

    def mo(o: FormulaOccurrence) -> FormulaOccurrence:
        return FormulaOccurrence(idmap.get(o.id, o.id), o.formula, o.parents)

    return LKProof(
        p.rule,
        Sequent(
            tuple(mo(o) for o in p.conclusion.antecedent),
            tuple(mo(o) for o in p.conclusion.succedent),
        ),
        p.premises,
        aux=p.aux,
        main=tuple(idmap.get(i, i) for i in p.main),
        witness=p.witness,
        eigen=p.eigen,
        link=p.link,
        label=p.label,
        expansion=p.expansion,
    )


def substitute_proof(p: LKProof, sub: Substitution | dict) -> LKProof:
    """Apply a substitution to every formula, witness, eigenvariable and
    link argument of the proof, keeping ids and structure."""
    if isinstance(sub, dict):
        sub = Substitution(sub)
    if not sub:
        return p

    def mo(o: FormulaOccurrence) -> FormulaOccurrence:
        return FormulaOccurrence(o.id, substitute(o.formula, sub), o.parents)

    def go(node: LKProof) -> LKProof:
        eigen = node.eigen
        if eigen is not None:
            image = sub.get(eigen)
            if image is not None:
                if not isinstance(image, Var):
                    raise InferenceError(
                        f"substitution maps eigenvariable {eigen} to non-variable"
                    )
                eigen = image
        link = node.link
        if link is not None and link.arg is not None:
            link = LinkRef(link.name, substitute(link.arg, sub))
        return LKProof(
            node.rule,
            Sequent(
                tuple(mo(o) for o in node.conclusion.antecedent),
                tuple(mo(o) for o in node.conclusion.succedent),
            ),
            tuple(go(q) for q in node.premises),
            aux=node.aux,
            main=node.main,
            witness=substitute(node.witness, sub) if node.witness is not None else None,
            eigen=eigen,
            link=link,
            label=node.label,
            expansion=go(node.expansion) if node.expansion else None,
        )

    return go(p)


def expand_autoprop(p: LKProof) -> LKProof:
    """Replace every autoprop leaf by its stored expansion, grafting the
    expansion's end-sequent occurrences onto the leaf's ids."""
    if all(n.rule is not RuleKind.AUTOPROP for _, n in p.nodes()):
        return p
    if p.rule is RuleKind.AUTOPROP:
        exp = refresh_ids(p.expansion)
        idmap = _match_conclusions(exp.conclusion, p.conclusion)
        return expand_autoprop(rebind_root_ids(exp, idmap))
    if not p.premises and p.expansion is None:
        return p
    return LKProof(
        p.rule,
        p.conclusion,
        tuple(expand_autoprop(q) for q in p.premises),
        aux=p.aux,
        main=p.main,
        witness=p.witness,
        eigen=p.eigen,
        link=p.link,
        label=p.label,
    )


def _match_conclusions(src: Sequent, dst: Sequent) -> dict[int, int]:
    """Bijection src-occurrence-id -> dst-occurrence-id matching formulas."""
    idmap: dict[int, int] = {}
    for sside, dside in ((src.antecedent, dst.antecedent), (src.succedent, dst.succedent)):
        remaining = list(dside)
        for o in sside:
            for i, d in enumerate(remaining):
                if d.formula == o.formula:
                    idmap[o.id] = d.id
                    del remaining[i]
                    break
            else:
                raise InferenceError(
                    f"cannot align sequents: no counterpart for {o.formula}"
                )
        if remaining:
            raise InferenceError("cannot align sequents: size mismatch")
    return idmap


def cut_ancestors(p: LKProof) -> frozenset[int]:
    """Ids of occurrences with a descendant that is a cut auxiliary."""
    occs: dict[int, FormulaOccurrence] = {}
    seeds: set[int] = set()
    for _, node in p.nodes():
        for o in node.conclusion.occurrences():
            occs[o.id] = o
        if node.rule is RuleKind.CUT:
            seeds.update(node.aux)
    marked: set[int] = set()
    work = list(seeds)
    while work:
        i = work.pop()
        if i in marked:
            continue
        marked.add(i)
        o = occs.get(i)
        if o is not None:
            work.extend(o.parents)
    return frozenset(marked)


# -------------------------------------------------------------- checking

@dataclass(frozen=True)
class CheckIssue:
    path: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.path} [{self.rule}]: {self.message}"


@dataclass
class CheckReport:
    issues: list[CheckIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, path: str, rule: str, message: str) -> None:
        self.issues.append(CheckIssue(path, rule, message))

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(i) for i in self.issues)


def check_proof(p: LKProof) -> CheckReport:
    """Validate every node's local rule condition, eigenvariable side
    conditions, and parent-link consistency.  Empty report iff valid."""
    report = CheckReport()
    seen_ids: set[int] = set()
    for path, node in p.nodes():
        for o in node.conclusion.occurrences():
            if o.id in seen_ids:
                report.add(path, node.rule_label(), f"duplicate occurrence id {o.id}")
            seen_ids.add(o.id)
    for path, node in p.nodes():
        _check_node(node, path, report)
    return report


def _check_node(node: LKProof, path: str, report: CheckReport) -> None:
    label = node.rule_label()
    rule = node.rule

    if rule is RuleKind.GENERIC:
        report.add(path, label, "unknown rule type (display-only node)")
        return

    expected_arity = _ARITY.get(rule, 1)
    if len(node.premises) != expected_arity:
        report.add(path, label, f"expected {expected_arity} premises, got {len(node.premises)}")
        return

    if rule is RuleKind.AXIOM:
        c = node.conclusion
        if len(c.antecedent) != 1 or len(c.succedent) != 1:
            report.add(path, label, "axiom must conclude a |- a")
        elif c.antecedent[0].formula != c.succedent[0].formula:
            report.add(path, label, "axiom sides differ")
        elif not isinstance(c.antecedent[0].formula, Atom):
            report.add(path, label, "axiom formula is not atomic")
        for o in c.occurrences():
            if o.parents:
                report.add(path, label, "axiom occurrence has parents")
        return

    if rule is RuleKind.PROOF_LINK:
        if node.link is None:
            report.add(path, label, "proof link without target")
        return

    if rule is RuleKind.AUTOPROP:
        if node.expansion is None:
            report.add(path, label, "autoprop node without expansion")
            return
        if not node.expansion.conclusion.same_formulas(node.conclusion):
            report.add(path, label, "autoprop expansion proves a different sequent")
        if not node.expansion.is_cut_free():
            report.add(path, label, "autoprop expansion contains a cut")
        sub = check_proof(node.expansion)
        for issue in sub.issues:
            report.add(path + "/x" + issue.path, issue.rule, issue.message)
        return

    premise_occs: dict[int, FormulaOccurrence] = {}
    for q in node.premises:
        for o in q.conclusion.occurrences():
            premise_occs[o.id] = o

    for i in node.aux:
        if i not in premise_occs:
            report.add(path, label, f"aux occurrence {i} missing from premises")
            return

    concl_ids = {o.id for o in node.conclusion.occurrences()}
    for i in node.main:
        if i not in concl_ids:
            report.add(path, label, f"main occurrence {i} missing from conclusion")
            return

    main_ids = set(node.main)
    used: Counter = Counter()
    for o in node.conclusion.occurrences():
        for q in o.parents:
            if q not in premise_occs:
                report.add(path, label, f"parent {q} of occurrence {o.id} not in premises")
            used[q] += 1
        if o.id not in main_ids:
            if len(o.parents) != 1:
                report.add(path, label, f"context occurrence {o.id} has {len(o.parents)} parents")
            elif premise_occs.get(o.parents[0]) is not None and (
                premise_occs[o.parents[0]].formula != o.formula
            ):
                report.add(path, label, f"context occurrence {o.id} changes its formula")

    consumed = set(node.aux) if rule is RuleKind.CUT else set()
    for i, o in premise_occs.items():
        expected = 0 if i in consumed else 1
        if used[i] != expected:
            report.add(
                path, label,
                f"premise occurrence {i} ({o.formula}) has {used[i]} descendants, expected {expected}",
            )

    _check_rule_shape(node, path, report, premise_occs)


def _check_rule_shape(node, path, report, premise_occs) -> None:
    label = node.rule_label()
    rule = node.rule

    def aux_occ(k: int) -> FormulaOccurrence | None:
        if k < len(node.aux):
            return premise_occs.get(node.aux[k])
        report.add(path, label, "missing aux designation")
        return None

    def main_occ(k: int = 0) -> FormulaOccurrence | None:
        for o in node.conclusion.occurrences():
            if node.main and o.id == node.main[min(k, len(node.main) - 1)]:
                return o
        report.add(path, label, "missing main designation")
        return None

    def in_side(side, occ_id) -> bool:
        return any(o.id == occ_id for o in side)

    p1 = node.premises[0] if node.premises else None
    p2 = node.premises[1] if len(node.premises) > 1 else None

    if rule is RuleKind.CUT:
        a1, a2 = aux_occ(0), aux_occ(1)
        if a1 and a2:
            if a1.formula != a2.formula:
                report.add(path, label, "cut formulas differ")
            if not in_side(p1.conclusion.succedent, a1.id):
                report.add(path, label, "left cut aux not in left succedent")
            if not in_side(p2.conclusion.antecedent, a2.id):
                report.add(path, label, "right cut aux not in right antecedent")
        return

    m = main_occ()
    if m is None:
        return

    def expect(cond: bool, msg: str):
        if not cond:
            report.add(path, label, msg)

    if rule is RuleKind.NEG_L:
        a = aux_occ(0)
        if a:
            expect(m.formula == Neg(a.formula), "main is not the negation of aux")
            expect(in_side(node.conclusion.antecedent, m.id), "main must be on the left")
            expect(in_side(p1.conclusion.succedent, a.id), "aux must be in premise succedent")
    elif rule is RuleKind.NEG_R:
        a = aux_occ(0)
        if a:
            expect(m.formula == Neg(a.formula), "main is not the negation of aux")
            expect(in_side(node.conclusion.succedent, m.id), "main must be on the right")
            expect(in_side(p1.conclusion.antecedent, a.id), "aux must be in premise antecedent")
    elif rule in (RuleKind.AND_L, RuleKind.OR_R):
        a, b = aux_occ(0), aux_occ(1)
        if a and b:
            cls = And if rule is RuleKind.AND_L else Or
            expect(m.formula == cls(a.formula, b.formula), "main does not combine the aux pair")
    elif rule in (RuleKind.AND_R, RuleKind.OR_L, RuleKind.IMP_L):
        a, b = aux_occ(0), aux_occ(1)
        if a and b:
            cls = {RuleKind.AND_R: And, RuleKind.OR_L: Or, RuleKind.IMP_L: Imp}[rule]
            expect(m.formula == cls(a.formula, b.formula), "main does not combine the aux pair")
            if not in_side(p1.conclusion.occurrences(), a.id):
                report.add(path, label, "first aux must come from the left premise")
    elif rule is RuleKind.IMP_R:
        a, b = aux_occ(0), aux_occ(1)
        if a and b:
            expect(m.formula == Imp(a.formula, b.formula), "main does not combine the aux pair")
    elif rule in (RuleKind.WEAK_L, RuleKind.WEAK_R):
        expect(not m.parents, "weakening main must be parentless")
        side = node.conclusion.antecedent if rule is RuleKind.WEAK_L else node.conclusion.succedent
        expect(in_side(side, m.id), "weakening main on the wrong side")
    elif rule in (RuleKind.CONTR_L, RuleKind.CONTR_R):
        a, b = aux_occ(0), aux_occ(1)
        if a and b:
            expect(a.formula == b.formula == m.formula, "contraction formulas differ")
            expect(len(m.parents) == 2, "contraction main must have two parents")
    elif rule in (RuleKind.FORALL_L, RuleKind.EXISTS_R):
        a = aux_occ(0)
        if a:
            cls = ForAll if rule is RuleKind.FORALL_L else Exists
            if not isinstance(m.formula, cls):
                report.add(path, label, f"main must be a {cls.__name__} formula")
            elif node.witness is None:
                report.add(path, label, "missing substitution witness")
            else:
                inst = substitute(m.formula.body, {m.formula.var: node.witness})
                expect(a.formula == inst, "aux is not the stated instance of main")
    elif rule in (RuleKind.FORALL_R, RuleKind.EXISTS_L):
        a = aux_occ(0)
        if a:
            cls = ForAll if rule is RuleKind.FORALL_R else Exists
            if not isinstance(m.formula, cls):
                report.add(path, label, f"main must be a {cls.__name__} formula")
            elif node.eigen is None:
                report.add(path, label, "missing eigenvariable")
            else:
                inst = substitute(m.formula.body, {m.formula.var: node.eigen})
                expect(a.formula == inst, "aux is not the eigenvariable instance of main")
                for o in node.conclusion.occurrences():
                    if node.eigen in o.formula.free_vars():
                        report.add(path, label, f"eigenvariable {node.eigen} occurs in the conclusion")
                        break
    elif rule in (RuleKind.AND_EQ_L1, RuleKind.AND_EQ_L3):
        a = aux_occ(0)
        if a:
            expect(
                fold_normal_form(a.formula) == fold_normal_form(m.formula),
                "fold/unfold sides do not share a normal form",
            )
            expect(in_side(node.conclusion.antecedent, m.id), "equivalence main must be on the left")


# ------------------------------------------------------ schemas/database

@dataclass(frozen=True)
class ProofSchema:
    """A primitive-recursive family of proofs given by base and step."""

    name: str
    param: Var
    end_sequent: Sequent
    base: LKProof
    step: LKProof


@dataclass
class ProofDatabase:
    proofs: dict = field(default_factory=dict)  # name -> LKProof | ProofSchema
    sequent_lists: dict = field(default_factory=dict)  # name -> tuple[Sequent, ...]
    definitions: "object | None" = None  # DefinitionList
    meta: dict = field(default_factory=dict)  # verbatim per-proof attributes

    def schemas(self) -> dict[str, ProofSchema]:
        return {k: v for k, v in self.proofs.items() if isinstance(v, ProofSchema)}

    def lk_proofs(self) -> dict[str, LKProof]:
        return {k: v for k, v in self.proofs.items() if isinstance(v, LKProof)}

    def kind_of(self, name: str) -> str:
        v = self.proofs[name]
        return "schema" if isinstance(v, ProofSchema) else "proof"


def check_database(db: ProofDatabase) -> CheckReport:
    """Whole-database validation: each proof, link resolution, and the
    base/step contracts of every schema."""
    report = CheckReport()
    for name, entry in db.proofs.items():
        if isinstance(entry, ProofSchema):
            _check_schema(db, entry, report)
        else:
            _merge(report, check_proof(entry), name)
            _check_links(db, entry, name, report)
    return report


def _merge(report: CheckReport, sub: CheckReport, prefix: str) -> None:
    for issue in sub.issues:
        report.add(f"{prefix}:{issue.path}", issue.rule, issue.message)


def _check_links(db: ProofDatabase, p: LKProof, prefix: str, report: CheckReport) -> None:
    for path, node in p.nodes():
        if node.rule is not RuleKind.PROOF_LINK:
            continue
        target = db.proofs.get(node.link.name)
        if target is None:
            report.add(f"{prefix}:{path}", node.rule_label(),
                       f"link target {node.link.name!r} not in the database")
            continue
        if isinstance(target, ProofSchema):
            if node.link.arg is None:
                report.add(f"{prefix}:{path}", node.rule_label(), "schematic link without argument")
                continue
            want = substitute_sequent(target.end_sequent, {target.param: node.link.arg})
            if not node.conclusion.same_formulas(want):
                report.add(f"{prefix}:{path}", node.rule_label(),
                           f"link conclusion differs from {target.name} at {node.link.arg}")
        else:
            # a plain link to another proof of the same database
            if not node.conclusion.same_formulas(target.conclusion):
                report.add(f"{prefix}:{path}", node.rule_label(),
                           f"link conclusion differs from proof {node.link.name}")


def _check_schema(db: ProofDatabase, s: ProofSchema, report: CheckReport) -> None:
    _merge(report, check_proof(s.base), f"{s.name}.base")
    _merge(report, check_proof(s.step), f"{s.name}.step")
    if s.base.has_links():
        report.add(f"{s.name}.base", "pLink", "base case may not contain proof links")
    base_want = substitute_sequent(s.end_sequent, {s.param: num(0)})
    if not s.base.conclusion.same_formulas(base_want):
        report.add(f"{s.name}.base", "root", f"base proves {s.base.conclusion}, want {base_want}")
    from .kernel import Succ

    step_want = substitute_sequent(s.end_sequent, {s.param: Succ(s.param)})
    if not s.step.conclusion.same_formulas(step_want):
        report.add(f"{s.name}.step", "root", f"step proves {s.step.conclusion}, want {step_want}")
    _check_links(db, s.base, f"{s.name}.base", report)
    _check_links(db, s.step, f"{s.name}.step", report)


def substitute_sequent(s: Sequent, sub) -> Sequent:
    if isinstance(sub, dict):
        sub = Substitution(sub)
    return Sequent(
        tuple(FormulaOccurrence(o.id, substitute(o.formula, sub), o.parents) for o in s.antecedent),
        tuple(FormulaOccurrence(o.id, substitute(o.formula, sub), o.parents) for o in s.succedent),
    )


def instantiate_schema(db: ProofDatabase, name: str, n: int) -> LKProof:
    """The n-th member of a proof family: link-free and fully numeric."""
    entry = db.proofs.get(name)
    if entry is None:
        raise LinkError(f"no proof named {name!r} in the database")
    if isinstance(entry, LKProof):
        raise LinkError(f"{name!r} is a plain proof, not a schema")
    if n < 0:
        raise LinkError("schema instances exist for n >= 0 only")
    if n == 0:
        return entry.base
    grounded = substitute_proof(entry.step, {entry.param: num(n - 1)})
    return _resolve_links(db, grounded, name, n)


def _resolve_links(db: ProofDatabase, p: LKProof, self_name: str, n: int) -> LKProof:
    if p.rule is RuleKind.PROOF_LINK:
        if p.link.arg is None:
            raise LinkError(f"link to {p.link.name!r} lacks a parameter argument")
        try:
            value = eval_param(p.link.arg)
        except Exception as e:
            raise LinkError(f"link argument {p.link.arg} is not ground: {e}") from e
        if p.link.name == self_name and value >= n:
            raise LinkError(
                f"link to {self_name!r} at {value} does not decrease below {n}"
            )
        sub = refresh_ids(instantiate_schema(db, p.link.name, value))
        if not sub.conclusion.same_formulas(p.conclusion):
            raise LinkError(
                f"instance of {p.link.name!r} at {value} proves {sub.conclusion}, "
                f"link expects {p.conclusion}"
            )
        idmap = _match_conclusions(sub.conclusion, p.conclusion)
        return rebind_root_ids(sub, idmap)
    if not p.premises:
        return p
    return LKProof(
        p.rule,
        p.conclusion,
        tuple(_resolve_links(db, q, self_name, n) for q in p.premises),
        aux=p.aux,
        main=p.main,
        witness=p.witness,
        eigen=p.eigen,
        link=p.link,
        label=p.label,
        expansion=p.expansion,
    )


# --------------------------------------------------------------- autoprop

@dataclass(frozen=True)
class Countermodel:
    """A truth assignment on atoms falsifying the sequent."""

    assignment: dict

    def __str__(self) -> str:
        inner = ", ".join(f"{a}={'true' if v else 'false'}" for a, v in self.assignment.items())
        return "{" + inner + "}"


def eval_quantifier_free(f: Formula, assignment: dict) -> bool:
    if isinstance(f, Atom):
        return bool(assignment.get(f, False))
    if isinstance(f, Neg):
        return not eval_quantifier_free(f.sub, assignment)
    if isinstance(f, And):
        return eval_quantifier_free(f.left, assignment) and eval_quantifier_free(f.right, assignment)
    if isinstance(f, Or):
        return eval_quantifier_free(f.left, assignment) or eval_quantifier_free(f.right, assignment)
    if isinstance(f, Imp):
        return (not eval_quantifier_free(f.left, assignment)) or eval_quantifier_free(f.right, assignment)
    raise NotPropositional(f"formula {f} is not quantifier-free")


def sequent_valid_truth_table(ants, succs) -> bool:
    """Brute-force validity of a quantifier-free sequent."""
    atoms: list[Atom] = []
    seen = set()
    for f in tuple(ants) + tuple(succs):
        for a in subformula_atoms(f):
            if a not in seen:
                seen.add(a)
                atoms.append(a)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        assignment = dict(zip(atoms, bits))
        if all(eval_quantifier_free(f, assignment) for f in ants) and not any(
            eval_quantifier_free(f, assignment) for f in succs
        ):
            return False
    return True


def _ground_big(f: Formula) -> bool:
    return isinstance(f, (BigAnd, BigOr)) and is_ground_param(f.lower) and is_ground_param(f.upper)


def autoprop(ants, succs) -> LKProof | Countermodel:
    """Backward proof search with invertible rules; closes branches with
    atomic axioms plus weakenings.  Ground iterated conjunctions in the
    antecedent are proved through their unfolding and folded back with
    the equivalence rules; anything else non-propositional is rejected."""
    ants = tuple(ants)
    succs = tuple(succs)
    for f in ants + succs:
        if isinstance(f, (ForAll, Exists)):
            raise NotPropositional(f"quantified formula {f} in autoprop input")
        if isinstance(f, (BigAnd, BigOr)) and not _ground_big(f):
            raise NotPropositional(f"iterated connective {f} has symbolic bounds")
    for f in succs:
        if isinstance(f, (BigAnd, BigOr)):
            raise NotPropositional(
                f"iterated connective {f} in the succedent has no fold rule"
            )
    for f in ants:
        if isinstance(f, BigOr):
            raise NotPropositional(
                f"iterated disjunction {f} has no fold rule"
            )
    return _prove(ants, succs)


def _contract_all(p: LKProof, dup_ants, dup_succs) -> LKProof:
    for f in dup_ants:
        p = contr_l(p, f)
    for f in dup_succs:
        p = contr_r(p, f)
    return p


def _prove(ants: tuple, succs: tuple) -> LKProof | Countermodel:
    for i, f in enumerate(ants):
        if isinstance(f, Atom):
            continue
        rest = ants[:i] + ants[i + 1:]
        if isinstance(f, Neg):
            r = _prove(rest, succs + (f.sub,))
            return r if isinstance(r, Countermodel) else neg_l(r, f.sub)
        if isinstance(f, And):
            r = _prove((f.left, f.right) + rest, succs)
            return r if isinstance(r, Countermodel) else and_l(r, f.left, f.right)
        if isinstance(f, Or):
            r1 = _prove((f.left,) + rest, succs)
            if isinstance(r1, Countermodel):
                return r1
            r2 = _prove((f.right,) + rest, succs)
            if isinstance(r2, Countermodel):
                return r2
            return _contract_all(or_l(r1, r2, f.left, f.right), rest, succs)
        if isinstance(f, Imp):
            r1 = _prove(rest, succs + (f.left,))
            if isinstance(r1, Countermodel):
                return r1
            r2 = _prove((f.right,) + rest, succs)
            if isinstance(r2, Countermodel):
                return r2
            return _contract_all(imp_l(r1, r2, f.left, f.right), rest, succs)
        if isinstance(f, BigAnd):
            u = unfold_schema_connective(f)
            r = _prove((u,) + rest, succs)
            if isinstance(r, Countermodel):
                return r
            fold = and_eq_l3 if f.lower == f.upper else and_eq_l1
            return fold(r, u, f)
        raise NotPropositional(f"formula {f} is not propositional")
    for i, f in enumerate(succs):
        if isinstance(f, Atom):
            continue
        rest = succs[:i] + succs[i + 1:]
        if isinstance(f, Neg):
            r = _prove(ants + (f.sub,), rest)
            return r if isinstance(r, Countermodel) else neg_r(r, f.sub)
        if isinstance(f, Or):
            r = _prove(ants, (f.left, f.right) + rest)
            return r if isinstance(r, Countermodel) else or_r(r, f.left, f.right)
        if isinstance(f, Imp):
            r = _prove(ants + (f.left,), (f.right,) + rest)
            return r if isinstance(r, Countermodel) else imp_r(r, f.left, f.right)
        if isinstance(f, And):
            r1 = _prove(ants, (f.left,) + rest)
            if isinstance(r1, Countermodel):
                return r1
            r2 = _prove(ants, (f.right,) + rest)
            if isinstance(r2, Countermodel):
                return r2
            return _contract_all(and_r(r1, r2, f.left, f.right), ants, rest)
        raise NotPropositional(f"formula {f} is not propositional")

    # all members atomic: close or report a countermodel
    succ_set = set(succs)
    for f in ants:
        if f in succ_set:
            p = axiom(f)
            first_l = ants.index(f)
            first_r = succs.index(f)
            for j, g in enumerate(ants):
                if j != first_l:
                    p = weak_l(p, g)
            for j, g in enumerate(succs):
                if j != first_r:
                    p = weak_r(p, g)
            return p
    model: dict = {}
    for f in ants:
        model[f] = True
    for f in succs:
        model[f] = False
    return Countermodel(model)


def autoprop_sequent(s: Sequent) -> LKProof | Countermodel:
    return autoprop(s.ant_formulas(), s.succ_formulas())

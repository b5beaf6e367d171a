"""Cut-elimination by resolution: struct extraction, the characteristic
clause set, projections, an internal resolution refuter, and the
recombination of a ground refutation with the projections into an
essentially cut-free proof (atomic cuts only).

The refuter is a deterministic given-clause loop with binary resolution
and factoring under most-general unification; clause selection is by
symbol count with ties broken by insertion order.  Free variables of the
end-sequent are rigid: they behave as constants during unification.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass, field

from .calculus import (
    LKProof,
    RuleKind,
    Sequent,
    check_proof,
    cut_ancestors,
    expand_autoprop,
    refresh_ids,
    substitute_proof,
)
from . import calculus as lk
from .errors import PreconditionError, RefuterLimit
from .kernel import (
    App,
    Atom,
    Const,
    Formula,
    IND,
    PARAM,
    Substitution,
    Succ,
    Term,
    Var,
    Zero,
    num,
    substitute,
)
from .transform import (
    CancelToken,
    NULL_TOKEN,
    adjust_multisets,
    reapply_with_weakening,
    regularize,
    skolemize,
)


# ----------------------------------------------------------------- structs

class CeresStruct:
    """Plus/Times tree over axiom clause parts; mirrors the branching
    structure of the proof with cuts."""

    def leaves(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Leaf(CeresStruct):
    clause: "Clause"

    def leaves(self):
        yield self

    def __str__(self) -> str:
        return f"[{self.clause}]"


@dataclass(frozen=True)
class Plus(CeresStruct):
    left: CeresStruct
    right: CeresStruct

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Times(CeresStruct):
    left: CeresStruct
    right: CeresStruct

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


# ----------------------------------------------------------------- clauses

@dataclass(frozen=True)
class Clause:
    """A sequent of atoms."""

    ants: tuple[Atom, ...] = ()
    succs: tuple[Atom, ...] = ()

    def __post_init__(self):
        for a in self.ants + self.succs:
            if not isinstance(a, Atom):
                raise PreconditionError(f"clause member {a} is not atomic")

    def merge(self, other: "Clause") -> "Clause":
        return Clause(self.ants + other.ants, self.succs + other.succs)

    def is_empty(self) -> bool:
        return not self.ants and not self.succs

    def variables(self) -> tuple[Var, ...]:
        seen: list[Var] = []
        for a in self.ants + self.succs:
            for v in a.free_vars():
                if v not in seen:
                    seen.append(v)
        return tuple(sorted(seen, key=lambda v: v.name))

    def apply(self, sub) -> "Clause":
        if isinstance(sub, dict):
            sub = Substitution(sub)
        return Clause(
            tuple(substitute(a, sub) for a in self.ants),
            tuple(substitute(a, sub) for a in self.succs),
        )

    def weight(self) -> int:
        return sum(_symbols(a) for a in self.ants + self.succs)

    def __str__(self) -> str:
        left = ", ".join(str(a) for a in self.ants)
        right = ", ".join(str(a) for a in self.succs)
        return f"{left} |- {right}".strip()


def _symbols(t: Term) -> int:
    if isinstance(t, Atom):
        return 1 + sum(_symbols(a) for a in t.args)
    if isinstance(t, App):
        return _symbols(t.fn) + _symbols(t.arg)
    if isinstance(t, Succ):
        return 1 + _symbols(t.arg)
    return 1


def clause_key(c: Clause, rigid: frozenset = frozenset()):
    """Canonical form modulo renaming of non-rigid variables."""
    names: dict[Var, str] = {}

    def key(t: Term):
        if isinstance(t, Var):
            if t in rigid:
                return ("rigid", t.name)
            if t not in names:
                names[t] = f"_{len(names)}"
            return ("v", names[t], str(t.type))
        if isinstance(t, Const):
            return ("c", t.name)
        if isinstance(t, Zero):
            return ("z",)
        if isinstance(t, Succ):
            return ("s", key(t.arg))
        if isinstance(t, App):
            return ("a", key(t.fn), key(t.arg))
        if isinstance(t, Atom):
            return ("at", t.name, tuple(key(x) for x in t.args))
        raise TypeError(t)

    return (tuple(key(a) for a in c.ants), tuple(key(a) for a in c.succs))


@dataclass(frozen=True)
class ClauseSet:
    clauses: tuple[Clause, ...] = ()

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __str__(self) -> str:
        return ";\n".join(str(c) for c in self.clauses)


# ---------------------------------------------------------- struct/clauses

def _plain_checked(p: LKProof, op: str) -> LKProof:
    for _, node in p.nodes():
        if node.rule is RuleKind.PROOF_LINK:
            raise PreconditionError(f"{op}: instantiate the schema first (proof links present)")
        if node.rule is RuleKind.GENERIC:
            raise PreconditionError(f"{op}: proof contains unchecked generic nodes")
    p = expand_autoprop(p)
    report = check_proof(p)
    if not report.ok:
        raise PreconditionError(f"{op}: proof does not check: {report.issues[0]}")
    return p


def extract_struct(p: LKProof) -> CeresStruct:
    """Leaf at axioms (cut-ancestor part), pass-through at unary rules,
    Plus at binary rules with cut-ancestor auxes, Times otherwise."""
    p = _plain_checked(p, "extract_struct")
    marked = cut_ancestors(p)

    def go(node: LKProof) -> CeresStruct:
        if node.rule is RuleKind.AXIOM:
            return Leaf(Clause(
                tuple(o.formula for o in node.conclusion.antecedent if o.id in marked),
                tuple(o.formula for o in node.conclusion.succedent if o.id in marked),
            ))
        if len(node.premises) == 1:
            return go(node.premises[0])
        aux_cut = any(i in marked for i in node.aux)
        cls = Plus if aux_cut else Times
        return cls(go(node.premises[0]), go(node.premises[1]))

    return go(p)


def char_clause_set(s: CeresStruct) -> ClauseSet:
    """CL(Leaf c)={c}; CL(Plus)=union; CL(Times)=pairwise merge."""
    def go(t: CeresStruct) -> list[Clause]:
        if isinstance(t, Leaf):
            return [t.clause]
        if isinstance(t, Plus):
            return go(t.left) + go(t.right)
        return [a.merge(b) for a in go(t.left) for b in go(t.right)]

    out: list[Clause] = []
    seen = set()
    for c in go(s):
        k = clause_key(c)
        if k not in seen:
            seen.add(k)
            out.append(c)
    return ClauseSet(tuple(out))


# -------------------------------------------------------------- projections

@dataclass(frozen=True)
class Projection:
    proof: LKProof
    clause: Clause


def compute_projections(p: LKProof) -> list[Projection]:
    """One cut-free projection per characteristic clause; built by
    dropping cut-ancestor inferences and keeping the others."""
    p = _plain_checked(p, "compute_projections")
    marked = cut_ancestors(p)
    for path, node in p.nodes():
        if node.rule in lk.STRONG_QUANTIFIER_RULES and node.main[0] not in marked:
            raise PreconditionError(
                f"compute_projections: strong quantifier inference at {path} "
                f"({node.rule_label()} with eigenvariable {node.eigen}) — skolemize first"
            )

    def go(node: LKProof) -> list[tuple[LKProof, Clause]]:
        if node.rule is RuleKind.AXIOM:
            clause = Clause(
                tuple(o.formula for o in node.conclusion.antecedent if o.id in marked),
                tuple(o.formula for o in node.conclusion.succedent if o.id in marked),
            )
            return [(node, clause)]
        if len(node.premises) == 1:
            subs = go(node.premises[0])
            if all(i in marked for i in node.main) and node.main:
                return subs  # the inference works on cut ancestors: drop it
            return [(_project_apply(node, (q,)), c) for q, c in subs]
        aux_cut = any(i in marked for i in node.aux)
        ls, rs = go(node.premises[0]), go(node.premises[1])
        if aux_cut:
            return ls + rs
        return [
            (_project_apply(node, (a, b)), ca.merge(cb))
            for a, ca in ls
            for b, cb in rs
        ]

    out: list[Projection] = []
    seen = set()
    for proof, clause in go(p):
        k = clause_key(clause)
        if k not in seen:
            seen.add(k)
            out.append(Projection(refresh_ids(proof), clause))
    return out


def _project_apply(node: LKProof, premises: tuple[LKProof, ...]) -> LKProof:
    """Reapply an end-sequent inference to projection premises, weakening
    in auxiliary formulas that were lost along dropped branches."""
    return reapply_with_weakening(node, premises)


# ------------------------------------------------------------- unification

def unify_terms(a: Term, b: Term, sub: dict, rigid: frozenset) -> bool:
    """Extend sub to a most-general unifier of a and b; rigid variables
    act as constants.  Mutates sub; returns success."""
    a = _walk(a, sub)
    b = _walk(b, sub)
    if isinstance(a, Var) and a not in rigid:
        return _bind(a, b, sub, rigid)
    if isinstance(b, Var) and b not in rigid:
        return _bind(b, a, sub, rigid)
    if isinstance(a, Var) or isinstance(b, Var):
        return a == b
    if isinstance(a, Const) or isinstance(b, Const):
        return a == b
    if isinstance(a, Zero) or isinstance(b, Zero):
        return type(a) is type(b)
    if isinstance(a, Succ) and isinstance(b, Succ):
        return unify_terms(a.arg, b.arg, sub, rigid)
    if isinstance(a, App) and isinstance(b, App):
        return unify_terms(a.fn, b.fn, sub, rigid) and unify_terms(a.arg, b.arg, sub, rigid)
    return False


def _walk(t: Term, sub: dict) -> Term:
    while isinstance(t, Var) and t in sub:
        t = sub[t]
    return t


def _occurs(v: Var, t: Term, sub: dict) -> bool:
    t = _walk(t, sub)
    if t == v:
        return True
    if isinstance(t, Succ):
        return _occurs(v, t.arg, sub)
    if isinstance(t, App):
        return _occurs(v, t.fn, sub) or _occurs(v, t.arg, sub)
    return False


def _bind(v: Var, t: Term, sub: dict, rigid: frozenset) -> bool:
    if v == t:
        return True
    if v.type != t.type or _occurs(v, t, sub):
        return False
    sub[v] = t
    return True


def unify_atoms(a: Atom, b: Atom, rigid: frozenset) -> Substitution | None:
    if a.name != b.name or len(a.args) != len(b.args):
        return None
    sub: dict = {}
    for x, y in zip(a.args, b.args):
        if not unify_terms(x, y, sub, rigid):
            return None
    # resolve chains so images are fully walked
    out = {v: _resolve(t, sub) for v, t in sub.items()}
    return Substitution(out)


def _resolve(t: Term, sub: dict) -> Term:
    t = _walk(t, sub)
    if isinstance(t, Succ):
        return Succ(_resolve(t.arg, sub))
    if isinstance(t, App):
        return App(_resolve(t.fn, sub), _resolve(t.arg, sub))
    return t


# ----------------------------------------------------------------- refuter

@dataclass(frozen=True)
class RefuterLimits:
    max_clauses: int = 10000
    max_seconds: float = 10.0


class ResolutionStep:
    clause: Clause


@dataclass(frozen=True)
class InputStep(ResolutionStep):
    clause: Clause

    def premises(self):
        return ()


@dataclass(frozen=True)
class ResolventStep(ResolutionStep):
    clause: Clause
    left: ResolutionStep
    right: ResolutionStep
    left_index: int     # index into left.clause.succs
    right_index: int    # index into right.clause.ants
    renaming: Substitution  # applied to the right premise before unifying
    unifier: Substitution

    def premises(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class FactorStep(ResolutionStep):
    clause: Clause
    premise: ResolutionStep
    side: str           # "ant" | "succ"
    keep_index: int
    drop_index: int
    unifier: Substitution

    def premises(self):
        return (self.premise,)


@dataclass(frozen=True)
class Refutation:
    root: ResolutionStep
    generated: int

    def steps(self):
        """Topological order, inputs first; shared steps once."""
        seen: list[ResolutionStep] = []

        def visit(s):
            if any(s is t for t in seen):
                return
            for q in s.premises():
                visit(q)
            seen.append(s)

        visit(self.root)
        return seen


@dataclass(frozen=True)
class Saturated:
    clauses: tuple[Clause, ...]


@dataclass(frozen=True)
class LimitReached:
    reason: str
    generated: int


def _rename_apart(c: Clause, taken: set[str], rigid: frozenset) -> tuple[Clause, Substitution]:
    mapping: dict = {}
    i = 0
    for v in c.variables():
        if v in rigid:
            continue
        name = f"u{i}"
        while name in taken:
            i += 1
            name = f"u{i}"
        i += 1
        mapping[v] = Var(name, v.vartype)
    sub = Substitution(mapping)
    return c.apply(sub), sub


def refute(cs: ClauseSet, limits: RefuterLimits | None = None,
           rigid: frozenset = frozenset(),
           token: CancelToken | None = None) -> Refutation | Saturated | LimitReached:
    """Given-clause saturation with binary resolution and factoring."""
    limits = limits or RefuterLimits()
    token = token or NULL_TOKEN
    start = time.monotonic()
    generated = 0

    passive: list[tuple[int, int, ResolutionStep]] = []
    active: list[ResolutionStep] = []
    seen: set = set()
    counter = itertools.count()

    def push(step: ResolutionStep) -> ResolutionStep | None:
        nonlocal generated
        k = clause_key(step.clause, rigid)
        if k in seen:
            return None
        seen.add(k)
        generated += 1
        passive.append((step.clause.weight(), next(counter), step))
        return step

    for c in cs:
        step = push(InputStep(c))
        if step is not None and c.is_empty():
            return Refutation(step, generated)

    while passive:
        token.check()
        if generated > limits.max_clauses:
            return LimitReached(f"clause limit {limits.max_clauses} exceeded", generated)
        if time.monotonic() - start > limits.max_seconds:
            return LimitReached(f"time limit {limits.max_seconds}s exceeded", generated)
        passive.sort(key=lambda x: (x[0], x[1]))
        _, _, given = passive.pop(0)
        active.append(given)
        new_steps: list[ResolutionStep] = []
        for other in active:
            new_steps.extend(_resolvents(given, other, rigid))
            if other is not given:
                new_steps.extend(_resolvents(other, given, rigid))
        new_steps.extend(_factors(given, rigid))
        for step in new_steps:
            if push(step) is not None and step.clause.is_empty():
                return Refutation(step, generated)
    return Saturated(tuple(s.clause for s in active))


def _resolvents(left: ResolutionStep, right: ResolutionStep, rigid: frozenset):
    """Resolve a succedent atom of `left` against an antecedent atom of
    `right` (right premise renamed apart)."""
    taken = {v.name for v in left.clause.variables()}
    renamed, renaming = _rename_apart(right.clause, taken, rigid)
    for i, a in enumerate(left.clause.succs):
        for j, b in enumerate(renamed.ants):
            sigma = unify_atoms(a, b, rigid)
            if sigma is None:
                continue
            rest_left = Clause(
                left.clause.ants,
                left.clause.succs[:i] + left.clause.succs[i + 1:],
            )
            rest_right = Clause(
                renamed.ants[:j] + renamed.ants[j + 1:],
                renamed.succs,
            )
            clause = rest_left.merge(rest_right).apply(sigma)
            yield ResolventStep(clause, left, right, i, j, renaming, sigma)


def _factors(step: ResolutionStep, rigid: frozenset):
    c = step.clause
    for side, atoms in (("ant", c.ants), ("succ", c.succs)):
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                sigma = unify_atoms(atoms[i], atoms[j], rigid)
                if sigma is None:
                    continue
                rest = list(atoms)
                del rest[j]
                if side == "ant":
                    clause = Clause(tuple(rest), c.succs).apply(sigma)
                else:
                    clause = Clause(c.ants, tuple(rest)).apply(sigma)
                yield FactorStep(clause, step, side, i, j, sigma)


# ------------------------------------------------------------ recombination

def ceres_cut_elim(p: LKProof, limits: RefuterLimits | None = None,
                   token: CancelToken | None = None) -> LKProof:
    """Refute the characteristic clause set, ground the refutation, and
    splice the projections into it; all remaining cuts are atomic."""
    token = token or NULL_TOKEN
    q = _plain_checked(p, "ceres_cut_elim")
    if q.is_cut_free():
        return p
    q = skolemize(regularize(q))
    rigid = frozenset(
        v for o in q.conclusion.occurrences() for v in o.formula.free_vars()
    )
    cs = char_clause_set(extract_struct(q))
    projections = compute_projections(q)
    proj_by_key = {clause_key(pr.clause, rigid): pr for pr in projections}
    outcome = refute(cs, limits, rigid, token)
    if isinstance(outcome, LimitReached):
        raise RefuterLimit(outcome.reason)
    if isinstance(outcome, Saturated):
        raise PreconditionError(
            "characteristic clause set is satisfiable; the input proof cannot be valid"
        )

    def default_for(v: Var) -> Term:
        return num(0) if v.type == PARAM else Const("g0", IND)

    def grounding(step: ResolutionStep, theta: dict) -> dict:
        out = {}
        for v in step.clause.variables():
            if v in rigid:
                continue
            t = theta.get(v, v)
            t = _ground_term(t, theta, rigid, default_for)
            out[v] = t
        return out

    def build(step: ResolutionStep, theta: dict) -> LKProof:
        token.check()
        theta = grounding(step, theta)
        ground_clause = step.clause.apply(theta)
        if isinstance(step, InputStep):
            pr = proj_by_key[clause_key(step.clause, rigid)]
            sub = _match_clause(pr.clause, ground_clause, rigid)
            return substitute_proof(refresh_ids(pr.proof), sub)
        if isinstance(step, ResolventStep):
            atom = substitute(
                substitute(step.left.clause.succs[step.left_index], step.unifier),
                Substitution(theta),
            )
            atom = _ground_term(atom, {}, rigid, default_for)
            theta_l = _compose_ground(step.left.clause, step.unifier, theta, None)
            theta_r = _compose_ground(step.right.clause, step.unifier, theta, step.renaming)
            left = build(step.left, theta_l)
            right = build(step.right, theta_r)
            return lk.cut(left, right, atom)
        if isinstance(step, FactorStep):
            theta_p = _compose_ground(step.premise.clause, step.unifier, theta, None)
            inner = build(step.premise, theta_p)
            atoms = step.premise.clause.ants if step.side == "ant" else step.premise.clause.succs
            merged = substitute(substitute(atoms[step.keep_index], step.unifier), Substitution(theta))
            merged = _ground_term(merged, {}, rigid, default_for)
            contr = lk.contr_l if step.side == "ant" else lk.contr_r
            return contr(inner, merged)
        raise AssertionError(step)

    result = build(outcome.root, {})
    want_ant = Counter(q.conclusion.ant_formulas())
    want_succ = Counter(q.conclusion.succ_formulas())
    result = adjust_multisets(result, want_ant, want_succ)
    assert result.conclusion.same_formulas(q.conclusion)
    return result


def _ground_term(t: Term, theta: dict, rigid: frozenset, default) -> Term:
    if theta:
        t = substitute(t, Substitution(theta))
    loose = [v for v in t.free_vars() if v not in rigid]
    if loose:
        t = substitute(t, Substitution({v: default(v) for v in loose}))
    return t


def _compose_ground(premise_clause: Clause, unifier: Substitution, theta: dict,
                    renaming: Substitution | None) -> dict:
    """Map each premise variable through (renaming;) unifier; theta."""
    out = {}
    for v in premise_clause.variables():
        t: Term = v
        if renaming is not None:
            t = substitute(t, renaming)
        t = substitute(t, unifier)
        if theta:
            t = substitute(t, Substitution(theta))
        out[v] = t
    return out


def _match_clause(pattern: Clause, ground: Clause, rigid: frozenset) -> dict:
    """One-sided matching: substitution over pattern's variables mapping
    it onto the ground clause, member by member."""
    sub: dict = {}

    def match_term(a: Term, b: Term) -> bool:
        if isinstance(a, Var) and a not in rigid:
            if a in sub:
                return sub[a] == b
            sub[a] = b
            return True
        if type(a) is not type(b):
            return False
        if isinstance(a, (Var, Const, Zero)):
            return a == b
        if isinstance(a, Succ):
            return match_term(a.arg, b.arg)
        if isinstance(a, App):
            return match_term(a.fn, b.fn) and match_term(a.arg, b.arg)
        if isinstance(a, Atom):
            return (
                a.name == b.name
                and len(a.args) == len(b.args)
                and all(match_term(x, y) for x, y in zip(a.args, b.args))
            )
        return a == b

    for pa, ga in zip(pattern.ants + pattern.succs, ground.ants + ground.succs):
        if not match_term(pa, ga):
            raise PreconditionError(f"projection clause {pattern} does not match {ground}")
    return sub

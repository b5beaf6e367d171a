"""Logical kernel: simple types, terms, formulas, parameter arithmetic,
capture-avoiding substitution, and unfolding of iterated connectives.

All values are immutable after construction.  Equality on terms and
formulas is alpha-equivalence (bound variable names are ignored), which
makes formulas directly usable as multiset keys in sequents.  `str`
produces the concrete syntax accepted by the parsers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyRange, UnboundParam


# ----------------------------------------------------------------- types

class SimpleType:
    """Base of the type language: base sorts plus function arrows."""

    __slots__ = ()


@dataclass(frozen=True)
class BaseType(SimpleType):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow(SimpleType):
    src: SimpleType
    dst: SimpleType

    def __str__(self) -> str:
        return f"({self.src}>{self.dst})"


IND = BaseType("i")     # individuals
PROP = BaseType("o")    # propositions
PARAM = BaseType("w")   # natural-number parameters


def fn_type(arg_types, result: SimpleType = IND) -> SimpleType:
    """Right-fold a list of argument sorts into an arrow type."""
    t = result
    for a in reversed(tuple(arg_types)):
        t = Arrow(a, t)
    return t


# ----------------------------------------------------------------- terms

class Term:
    """A simply-typed term; formulas are the terms of type PROP.

    Subclasses are frozen dataclasses.  `canonical()` returns a nameless
    (de Bruijn style) tuple form; `__eq__`/`__hash__` go through it, so
    alpha-equivalent terms compare equal and share a hash.
    """

    @property
    def type(self) -> SimpleType:
        raise NotImplementedError

    def _canon(self, env: dict, depth: int):
        raise NotImplementedError

    def _collect_free(self, bound: frozenset, acc: set) -> None:
        raise NotImplementedError

    def canonical(self):
        c = self.__dict__.get("_canonical")
        if c is None:
            c = self._canon({}, 0)
            self.__dict__["_canonical"] = c
        return c

    def free_vars(self) -> frozenset:
        fv = self.__dict__.get("_free_vars")
        if fv is None:
            acc: set = set()
            self._collect_free(frozenset(), acc)
            fv = frozenset(acc)
            self.__dict__["_free_vars"] = fv
        return fv

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.canonical())
            self.__dict__["_hash"] = h
        return h


def _typekey(t: SimpleType) -> str:
    return str(t)


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    name: str
    vartype: SimpleType = IND

    @property
    def type(self) -> SimpleType:
        return self.vartype

    def _canon(self, env, depth):
        key = (self.name, _typekey(self.vartype))
        if key in env:
            return ("bv", env[key])
        return ("fv", self.name, key[1])

    def _collect_free(self, bound, acc):
        if self not in bound:
            acc.add(self)

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Var({self.name})"


@dataclass(frozen=True, eq=False, repr=False)
class Const(Term):
    name: str
    consttype: SimpleType = IND

    @property
    def type(self) -> SimpleType:
        return self.consttype

    def _canon(self, env, depth):
        return ("const", self.name, _typekey(self.consttype))

    def _collect_free(self, bound, acc):
        pass

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Const({self.name})"


@dataclass(frozen=True, eq=False, repr=False)
class App(Term):
    fn: Term
    arg: Term

    def __post_init__(self):
        ft = self.fn.type
        if not isinstance(ft, Arrow):
            raise TypeError(f"applied term {self.fn} has non-arrow type {ft}")
        if ft.src != self.arg.type:
            raise TypeError(
                f"argument {self.arg} has type {self.arg.type}, expected {ft.src}"
            )

    @property
    def type(self) -> SimpleType:
        return self.fn.type.dst

    def _canon(self, env, depth):
        return ("app", self.fn._canon(env, depth), self.arg._canon(env, depth))

    def _collect_free(self, bound, acc):
        self.fn._collect_free(bound, acc)
        self.arg._collect_free(bound, acc)

    def __str__(self) -> str:
        head, args = unapp(self)
        return f"{head}({','.join(str(a) for a in args)})"

    def __repr__(self) -> str:
        return f"App({self.fn!r},{self.arg!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Abs(Term):
    var: Var
    body: Term

    @property
    def type(self) -> SimpleType:
        return Arrow(self.var.type, self.body.type)

    def _canon(self, env, depth):
        env2 = dict(env)
        env2[(self.var.name, _typekey(self.var.type))] = depth
        return ("abs", _typekey(self.var.type), self.body._canon(env2, depth + 1))

    def _collect_free(self, bound, acc):
        self.body._collect_free(bound | {self.var}, acc)

    def __str__(self) -> str:
        return f"(^{self.var}. {self.body})"

    def __repr__(self) -> str:
        return f"Abs({self.var!r},{self.body!r})"


def app(head: Term, *args: Term) -> Term:
    """Apply a (curried) head to several arguments."""
    t = head
    for a in args:
        t = App(t, a)
    return t


def unapp(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Uncurry: return the head and the argument list of nested Apps."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, tuple(reversed(args))


# --------------------------------------------------- parameter arithmetic

@dataclass(frozen=True, eq=False, repr=False)
class Zero(Term):
    @property
    def type(self) -> SimpleType:
        return PARAM

    def _canon(self, env, depth):
        return ("zero",)

    def _collect_free(self, bound, acc):
        pass

    def __str__(self) -> str:
        return "0"

    def __repr__(self) -> str:
        return "Zero()"


@dataclass(frozen=True, eq=False, repr=False)
class Succ(Term):
    arg: Term

    def __post_init__(self):
        if self.arg.type != PARAM:
            raise TypeError(f"successor applied to non-parameter {self.arg}")

    @property
    def type(self) -> SimpleType:
        return PARAM

    def _canon(self, env, depth):
        return ("succ", self.arg._canon(env, depth))

    def _collect_free(self, bound, acc):
        self.arg._collect_free(bound, acc)

    def __str__(self) -> str:
        base, k = succ_chain(self)
        if base is None:
            return str(k)
        return f"{base}+{k}"

    def __repr__(self) -> str:
        return f"Succ({self.arg!r})"


ZERO = Zero()


def num(n: int) -> Term:
    """The numeral n as a successor chain."""
    if n < 0:
        raise ValueError("numerals are naturals")
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def succs(base: Term, k: int) -> Term:
    t = base
    for _ in range(k):
        t = Succ(t)
    return t


def param_var(name: str) -> Var:
    return Var(name, PARAM)


def succ_chain(e: Term) -> tuple[Term | None, int]:
    """Peel successors: returns (base-or-None-for-zero, offset)."""
    k = 0
    while isinstance(e, Succ):
        k += 1
        e = e.arg
    if isinstance(e, Zero):
        return None, k
    return e, k


def is_ground_param(e: Term) -> bool:
    base, _ = succ_chain(e)
    return base is None


def eval_param(e: Term, env: dict[str, int] | None = None) -> int:
    """Evaluate a parameter expression to a natural number."""
    env = env or {}
    base, k = succ_chain(e)
    if base is None:
        return k
    if isinstance(base, Var):
        if base.name in env:
            return env[base.name] + k
        raise UnboundParam(f"parameter {base.name} is not bound")
    raise UnboundParam(f"cannot evaluate parameter expression {e}")


# -------------------------------------------------------------- formulas

class Formula(Term):
    """A term of type PROP."""

    @property
    def type(self) -> SimpleType:
        return PROP


def _fml_str(f: Formula, min_prec: int) -> str:
    s = str(f)
    if _precedence(f) < min_prec:
        return f"({s})"
    return s


def _precedence(f: Formula) -> int:
    if isinstance(f, Imp):
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    return 4


@dataclass(frozen=True, eq=False, repr=False)
class Atom(Formula):
    name: str
    args: tuple[Term, ...] = ()

    def _canon(self, env, depth):
        return ("atom", self.name, tuple(a._canon(env, depth) for a in self.args))

    def _collect_free(self, bound, acc):
        for a in self.args:
            a._collect_free(bound, acc)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"

    def __repr__(self) -> str:
        return f"Atom({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Neg(Formula):
    sub: Formula

    def _canon(self, env, depth):
        return ("neg", self.sub._canon(env, depth))

    def _collect_free(self, bound, acc):
        self.sub._collect_free(bound, acc)

    def __str__(self) -> str:
        return f"~{_fml_str(self.sub, 4)}"

    def __repr__(self) -> str:
        return f"Neg({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def _canon(self, env, depth):
        return ("and", self.left._canon(env, depth), self.right._canon(env, depth))

    def _collect_free(self, bound, acc):
        self.left._collect_free(bound, acc)
        self.right._collect_free(bound, acc)

    def __str__(self) -> str:
        return f"{_fml_str(self.left, 3)} /\\ {_fml_str(self.right, 4)}"

    def __repr__(self) -> str:
        return f"And({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def _canon(self, env, depth):
        return ("or", self.left._canon(env, depth), self.right._canon(env, depth))

    def _collect_free(self, bound, acc):
        self.left._collect_free(bound, acc)
        self.right._collect_free(bound, acc)

    def __str__(self) -> str:
        return f"{_fml_str(self.left, 2)} \\/ {_fml_str(self.right, 3)}"

    def __repr__(self) -> str:
        return f"Or({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def _canon(self, env, depth):
        return ("imp", self.left._canon(env, depth), self.right._canon(env, depth))

    def _collect_free(self, bound, acc):
        self.left._collect_free(bound, acc)
        self.right._collect_free(bound, acc)

    def __str__(self) -> str:
        return f"{_fml_str(self.left, 2)} -> {_fml_str(self.right, 1)}"

    def __repr__(self) -> str:
        return f"Imp({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class ForAll(Formula):
    var: Var
    body: Formula

    def _canon(self, env, depth):
        env2 = dict(env)
        env2[(self.var.name, _typekey(self.var.type))] = depth
        return ("all", _typekey(self.var.type), self.body._canon(env2, depth + 1))

    def _collect_free(self, bound, acc):
        self.body._collect_free(bound | {self.var}, acc)

    def __str__(self) -> str:
        return f"all {self.var} {_fml_str(self.body, 4)}"

    def __repr__(self) -> str:
        return f"ForAll({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Formula):
    var: Var
    body: Formula

    def _canon(self, env, depth):
        env2 = dict(env)
        env2[(self.var.name, _typekey(self.var.type))] = depth
        return ("ex", _typekey(self.var.type), self.body._canon(env2, depth + 1))

    def _collect_free(self, bound, acc):
        self.body._collect_free(bound | {self.var}, acc)

    def __str__(self) -> str:
        return f"ex {self.var} {_fml_str(self.body, 4)}"

    def __repr__(self) -> str:
        return f"Exists({str(self)!r})"


class _BigConnective(Formula):
    """Common parts of the iterated conjunction/disjunction."""

    var: Var
    lower: Term
    upper: Term
    body: Formula

    _tag = ""
    _kw = ""

    def _check(self):
        if self.var.type != PARAM:
            raise TypeError(f"iteration index {self.var} must have parameter sort")
        if self.lower.type != PARAM or self.upper.type != PARAM:
            raise TypeError("iteration bounds must have parameter sort")

    def _canon(self, env, depth):
        env2 = dict(env)
        env2[(self.var.name, _typekey(self.var.type))] = depth
        return (
            self._tag,
            self.lower._canon(env, depth),
            self.upper._canon(env, depth),
            self.body._canon(env2, depth + 1),
        )

    def _collect_free(self, bound, acc):
        self.lower._collect_free(bound, acc)
        self.upper._collect_free(bound, acc)
        self.body._collect_free(bound | {self.var}, acc)

    def __str__(self) -> str:
        return (
            f"{self._kw}({self.var}={self.lower}..{self.upper})"
            f" {_fml_str(self.body, 4)}"
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class BigAnd(_BigConnective):
    var: Var
    lower: Term
    upper: Term
    body: Formula

    _tag = "bigand"
    _kw = "BigAnd"

    def __post_init__(self):
        self._check()


@dataclass(frozen=True, eq=False, repr=False)
class BigOr(_BigConnective):
    var: Var
    lower: Term
    upper: Term
    body: Formula

    _tag = "bigor"
    _kw = "BigOr"

    def __post_init__(self):
        self._check()


def is_quantifier_free(f: Formula) -> bool:
    """No ForAll/Exists and no iterated connective anywhere in f."""
    if isinstance(f, Atom):
        return True
    if isinstance(f, Neg):
        return is_quantifier_free(f.sub)
    if isinstance(f, (And, Or, Imp)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return False


def subformula_atoms(f: Formula):
    """Yield every atom of a quantifier-free formula."""
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Neg):
        yield from subformula_atoms(f.sub)
    elif isinstance(f, (And, Or, Imp)):
        yield from subformula_atoms(f.left)
        yield from subformula_atoms(f.right)
    else:
        yield from ()


# ---------------------------------------------------------- substitution

@dataclass(frozen=True)
class Substitution:
    """A finite, simultaneous, capture-avoiding map from variables to terms.

    The domain covers ordinary variables and parameter variables alike;
    types of a variable and its replacement must agree.
    """

    mapping: dict = field(default_factory=dict)

    def __post_init__(self):
        for v, t in self.mapping.items():
            if not isinstance(v, Var):
                raise TypeError(f"substitution domain entry {v!r} is not a variable")
            if v.type != t.type:
                raise TypeError(
                    f"cannot map {v} : {v.type} to {t} : {t.type}"
                )

    @staticmethod
    def of(*pairs) -> "Substitution":
        return Substitution(dict(pairs))

    def get(self, v: Var, default=None):
        return self.mapping.get(v, default)

    def domain(self) -> frozenset:
        return frozenset(self.mapping)

    def is_identity(self) -> bool:
        return all(v == t for v, t in self.mapping.items())

    def compose(self, other: "Substitution") -> "Substitution":
        """self then other: x -> other(self(x))."""
        m = {v: substitute(t, other) for v, t in self.mapping.items()}
        for v, t in other.mapping.items():
            if v not in m:
                m[v] = t
        return Substitution(m)

    def __bool__(self) -> bool:
        return bool(self.mapping)

    def __str__(self) -> str:
        inner = ", ".join(f"{v}:={t}" for v, t in self.mapping.items())
        return "{" + inner + "}"


def fresh_var(v: Var, avoid) -> Var:
    """A variable of v's sort whose name collides with nothing in avoid."""
    names = {x.name for x in avoid}
    name = v.name + "'"
    while name in names:
        name += "'"
    return Var(name, v.vartype)


def substitute(t: Term, s: Substitution | dict) -> Term:
    if isinstance(s, dict):
        s = Substitution(s)
    if not s.mapping:
        return t
    return _subst(t, s.mapping)


def _subst(t: Term, m: dict) -> Term:
    if isinstance(t, Var):
        return m.get(t, t)
    if isinstance(t, (Const, Zero)):
        return t
    if isinstance(t, Succ):
        return Succ(_subst(t.arg, m))
    if isinstance(t, App):
        return App(_subst(t.fn, m), _subst(t.arg, m))
    if isinstance(t, Atom):
        return Atom(t.name, tuple(_subst(a, m) for a in t.args))
    if isinstance(t, Neg):
        return Neg(_subst(t.sub, m))
    if isinstance(t, And):
        return And(_subst(t.left, m), _subst(t.right, m))
    if isinstance(t, Or):
        return Or(_subst(t.left, m), _subst(t.right, m))
    if isinstance(t, Imp):
        return Imp(_subst(t.left, m), _subst(t.right, m))
    if isinstance(t, (Abs, ForAll, Exists)):
        v, body = _subst_binder(t.var, t.body, m)
        return type(t)(v, body)
    if isinstance(t, (BigAnd, BigOr)):
        lower = _subst(t.lower, m)
        upper = _subst(t.upper, m)
        v, body = _subst_binder(t.var, t.body, m)
        return type(t)(v, lower, upper, body)
    raise TypeError(f"cannot substitute into {t!r}")


def _subst_binder(v: Var, body: Term, m: dict) -> tuple[Var, Term]:
    m2 = {k: t for k, t in m.items() if k != v}
    if not m2:
        return v, body
    image_fv: set = set()
    for t in m2.values():
        image_fv |= t.free_vars()
    if v in image_fv:
        avoid = image_fv | body.free_vars() | set(m2)
        v2 = fresh_var(v, avoid)
        body = _subst(body, {v: v2})
        v = v2
    return v, _subst(body, m2)


# ------------------------------------------- iterated-connective unfolding

def unfold_schema_connective(f: Formula, env: dict[str, int] | None = None) -> Formula:
    """Eliminate every BigAnd/BigOr of f, evaluating bounds under env.

    Free parameter variables bound in env are replaced by numerals first,
    so atom arguments like k+1 become concrete numerals as well.
    """
    env = env or {}
    if env:
        sub = Substitution({param_var(k): num(v) for k, v in env.items()})
        f = substitute(f, sub)
    return _unfold(f)


def _unfold(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return Neg(_unfold(f.sub))
    if isinstance(f, And):
        return And(_unfold(f.left), _unfold(f.right))
    if isinstance(f, Or):
        return Or(_unfold(f.left), _unfold(f.right))
    if isinstance(f, Imp):
        return Imp(_unfold(f.left), _unfold(f.right))
    if isinstance(f, ForAll):
        return ForAll(f.var, _unfold(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, _unfold(f.body))
    if isinstance(f, (BigAnd, BigOr)):
        lo = eval_param(f.lower)
        hi = eval_param(f.upper)
        if lo > hi:
            raise EmptyRange(f"empty iteration range {lo}..{hi} in {f}")
        parts = [
            _unfold(substitute(f.body, {f.var: num(i)}))
            for i in range(lo, hi + 1)
        ]
        joiner = And if isinstance(f, BigAnd) else Or
        out = parts[0]
        for p in parts[1:]:
            out = joiner(out, p)
        return out
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------- definition lists

@dataclass(frozen=True)
class DefinitionList:
    """Ordered display-level abbreviations: constant -> expansion.

    Abbreviation names are unique and no expansion reaches its own
    abbreviation, directly or through earlier definitions.
    """

    entries: tuple[tuple[Const, Term], ...] = ()

    def __post_init__(self):
        names = [c.name for c, _ in self.entries]
        if len(names) != len(set(names)):
            raise ValueError("duplicate abbreviation name in definition list")
        table = {c.name: t for c, t in self.entries}
        for c, t in self.entries:
            if self._reaches(t, c.name, table, set()):
                raise ValueError(f"abbreviation {c.name} occurs in its own expansion")

    @staticmethod
    def _reaches(t: Term, name: str, table: dict, seen: set) -> bool:
        for c in _constants(t):
            if c == name:
                return True
            if c in table and c not in seen:
                seen.add(c)
                if DefinitionList._reaches(table[c], name, table, seen):
                    return True
        return False

    def lookup(self, name: str) -> Term | None:
        for c, t in self.entries:
            if c.name == name:
                return t
        return None

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _constants(t: Term):
    if isinstance(t, Const):
        yield t.name
    elif isinstance(t, App):
        yield from _constants(t.fn)
        yield from _constants(t.arg)
    elif isinstance(t, Succ):
        yield from _constants(t.arg)
    elif isinstance(t, Atom):
        for a in t.args:
            yield from _constants(a)
    elif isinstance(t, Neg):
        yield from _constants(t.sub)
    elif isinstance(t, (And, Or, Imp)):
        yield from _constants(t.left)
        yield from _constants(t.right)
    elif isinstance(t, (Abs, ForAll, Exists)):
        yield from _constants(t.body)
    elif isinstance(t, (BigAnd, BigOr)):
        yield from _constants(t.lower)
        yield from _constants(t.upper)
        yield from _constants(t.body)


def expand_definitions(t: Term, defs: DefinitionList) -> Term:
    """Rewrite abbreviation constants by their expansions until none remain.

    Terminates because expansions never reach their own abbreviation.
    """
    table = {c.name: e for c, e in defs.entries}

    def go(u: Term) -> Term:
        if isinstance(u, Const) and u.name in table:
            return go(table[u.name])
        if isinstance(u, App):
            return App(go(u.fn), go(u.arg))
        if isinstance(u, Succ):
            return Succ(go(u.arg))
        if isinstance(u, Atom):
            return Atom(u.name, tuple(go(a) for a in u.args))
        if isinstance(u, Neg):
            return Neg(go(u.sub))
        if isinstance(u, (And, Or, Imp)):
            return type(u)(go(u.left), go(u.right))
        if isinstance(u, (Abs, ForAll, Exists)):
            return type(u)(u.var, go(u.body))
        if isinstance(u, (BigAnd, BigOr)):
            return type(u)(u.var, go(u.lower), go(u.upper), go(u.body))
        return u

    return go(t)

"""Input readers: the proof DSL (.lks), the XML interchange format
(.xml), and the shared formula/sequent grammar, all with exact error
positions.  Files may be gzip-compressed; detection is by magic bytes,
the extension is only a hint.

The formula grammar is LL(1).  Identifiers starting with u..z denote
individual variables, numerals and `name+offset` expressions denote
parameter values, and identifiers in parameter positions (iteration
bounds, link arguments, successor bases) get the parameter sort.
"""

from __future__ import annotations

import gzip
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from . import calculus as lk
from .calculus import (
    Countermodel,
    LKProof,
    ProofDatabase,
    ProofSchema,
    RuleKind,
    Sequent,
    autoprop,
    autoprop_leaf,
    axiom,
    generic_node,
    proof_link,
    refresh_ids,
    sequent,
)
from .errors import ParseError, SourceSpan, StructureError
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
    PARAM,
    Succ,
    Term,
    Var,
    ZERO,
    app,
    fn_type,
    num,
    param_var,
    substitute,
    succs,
)


class TypeClashError(ParseError):
    """A term or atom is used at two incompatible sorts."""


# ------------------------------------------------------------------ input

def read_input(path) -> str:
    """Read a text file, transparently gunzipping when the content is
    gzip-compressed (magic bytes 1f 8b)."""
    data = Path(path).read_bytes()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data.decode("utf-8")


# ------------------------------------------------------------------ lexer

_PUNCT = {
    "(": "LPAREN",
    ")": "RPAREN",
    "{": "LBRACE",
    "}": "RBRACE",
    ",": "COMMA",
    "+": "PLUS",
    "=": "EQ",
    "~": "NEG",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan


def tokenize(text: str, filename: str) -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)

    def push(kind, value, length=None):
        toks.append(Token(kind, value, SourceSpan(filename, line, col, length or len(value))))

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        two = text[i:i + 2]
        if two == "|-" or two == ":-":
            push("TURNSTILE", two)
            i += 2
            col += 2
            continue
        if two == "..":
            push("DOTDOT", two)
            i += 2
            col += 2
            continue
        if two == "/\\":
            push("AND", two)
            i += 2
            col += 2
            continue
        if two == "\\/":
            push("OR", two)
            i += 2
            col += 2
            continue
        if two == "->":
            push("IMP", two)
            i += 2
            col += 2
            continue
        if c == ":":
            push("COLON", c)
            i += 1
            col += 1
            continue
        if c in _PUNCT:
            push(_PUNCT[c], c)
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            push("NUMBER", text[i:j])
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_" or c == "\\":
            j = i + 1 if c != "\\" else i + 1
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            raw = text[i:j]
            value = raw[1:] if raw.startswith("\\") else raw
            if not value:
                raise ParseError(SourceSpan(filename, line, col), "an identifier", raw)
            push("IDENT", value, length=len(raw))
            col += j - i
            i = j
            continue
        raise ParseError(SourceSpan(filename, line, col), "a token", c)
    toks.append(Token("EOF", "", SourceSpan(filename, line, col, 0)))
    return toks


def _prescan_params(toks: list[Token]) -> set[str]:
    """Names that must carry the parameter sort: successor bases and
    iteration index variables."""
    params: set[str] = set()
    for i, t in enumerate(toks):
        if t.kind == "IDENT" and i + 1 < len(toks) and toks[i + 1].kind == "PLUS":
            params.add(t.value)
        if (
            t.kind == "IDENT"
            and t.value in ("BigAnd", "BigOr")
            and i + 2 < len(toks)
            and toks[i + 1].kind == "LPAREN"
            and toks[i + 2].kind == "IDENT"
        ):
            params.add(toks[i + 2].value)
    return params


_KEYWORDS = {"proof", "proves", "base", "step", "root"}


class _Parser:
    """Token-stream parser shared by the sequent grammar and the DSL."""

    def __init__(self, text: str, filename: str, params: set[str] | None = None):
        self.toks = tokenize(text, filename)
        self.pos = 0
        self.params: set[str] = set(params or ()) | _prescan_params(self.toks)
        self.bound: list[Var] = []
        self.pred_sig: dict[str, tuple] = {}
        self.fn_sig: dict[str, tuple] = {}

    # -- token plumbing

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(t.span, what or kind, t.value or "end of input")
        return self.next()

    def expect_kw(self, word: str) -> Token:
        t = self.peek()
        if t.kind != "IDENT" or t.value != word:
            raise ParseError(t.span, f"'{word}'", t.value or "end of input")
        return self.next()

    def at_kw(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "IDENT" and t.value == word

    # -- sequents

    def parse_sequent(self) -> Sequent:
        ants = self._formula_list()
        self.expect("TURNSTILE", "'|-'")
        succs_ = self._formula_list()
        return sequent(ants, succs_)

    def _formula_list(self) -> list[Formula]:
        out: list[Formula] = []
        if self.peek().kind in ("TURNSTILE", "EOF", "RPAREN", "LBRACE") or (
            self.peek().kind == "IDENT" and self.peek().value in _KEYWORDS
        ):
            return out
        out.append(self.parse_formula())
        while self.peek().kind == "COMMA":
            self.next()
            out.append(self.parse_formula())
        return out

    # -- formulas, by precedence

    def parse_formula(self) -> Formula:
        left = self._disj()
        if self.peek().kind == "IMP":
            self.next()
            return Imp(left, self.parse_formula())
        return left

    def _disj(self) -> Formula:
        f = self._conj()
        while self.peek().kind == "OR":
            self.next()
            f = Or(f, self._conj())
        return f

    def _conj(self) -> Formula:
        f = self._unary()
        while self.peek().kind == "AND":
            self.next()
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        t = self.peek()
        if t.kind == "NEG":
            self.next()
            return Neg(self._unary())
        if t.kind == "IDENT" and t.value in ("all", "ex"):
            self.next()
            vtok = self.expect("IDENT", "a variable")
            v = Var(vtok.value, IND)
            self.bound.append(v)
            try:
                body = self._unary()
            finally:
                self.bound.pop()
            return (ForAll if t.value == "all" else Exists)(v, body)
        if t.kind == "IDENT" and t.value in ("BigAnd", "BigOr"):
            self.next()
            self.expect("LPAREN")
            itok = self.expect("IDENT", "an index variable")
            v = param_var(itok.value)
            self.params.add(itok.value)
            self.expect("EQ", "'='")
            lo = self.parse_param_expr()
            self.expect("DOTDOT", "'..'")
            hi = self.parse_param_expr()
            self.expect("RPAREN")
            self.bound.append(v)
            try:
                body = self._unary()
            finally:
                self.bound.pop()
            return (BigAnd if t.value == "BigAnd" else BigOr)(v, lo, hi, body)
        if t.kind == "LPAREN":
            self.next()
            f = self.parse_formula()
            self.expect("RPAREN")
            return f
        if t.kind == "IDENT":
            return self._atom()
        raise ParseError(t.span, "a formula", t.value or "end of input")

    def _atom(self) -> Formula:
        name = self.expect("IDENT", "a predicate name")
        args: tuple[Term, ...] = ()
        if self.peek().kind == "LPAREN":
            self.next()
            lst = [self.parse_term()]
            while self.peek().kind == "COMMA":
                self.next()
                lst.append(self.parse_term())
            self.expect("RPAREN")
            args = tuple(lst)
        sig = tuple(str(a.type) for a in args)
        known = self.pred_sig.get(name.value)
        if known is None:
            self.pred_sig[name.value] = sig
        elif known != sig:
            raise TypeClashError(
                name.span, f"arguments of sorts {known} for {name.value}", str(sig)
            )
        return Atom(name.value, args)

    # -- terms

    def parse_term(self) -> Term:
        base = self._term_base()
        while self.peek().kind == "PLUS":
            plus = self.next()
            ntok = self.expect("NUMBER", "an offset numeral")
            if base.type != PARAM:
                raise TypeClashError(plus.span, "a parameter expression before '+'", str(base))
            base = succs(base, int(ntok.value))
        return base

    def _term_base(self) -> Term:
        t = self.peek()
        if t.kind == "NUMBER":
            self.next()
            return num(int(t.value))
        if t.kind == "IDENT":
            self.next()
            name = t.value
            for v in reversed(self.bound):
                if v.name == name:
                    return v
            if self.peek().kind == "LPAREN":
                self.next()
                args = [self.parse_term()]
                while self.peek().kind == "COMMA":
                    self.next()
                    args.append(self.parse_term())
                self.expect("RPAREN")
                sig = tuple(str(a.type) for a in args)
                known = self.fn_sig.get(name)
                if known is None:
                    self.fn_sig[name] = sig
                elif known != sig:
                    raise TypeClashError(
                        t.span, f"arguments of sorts {known} for {name}", str(sig)
                    )
                head = Const(name, fn_type([a.type for a in args], IND))
                return app(head, *args)
            if name in self.params:
                return param_var(name)
            if name[0] in "uvwxyz":
                return Var(name, IND)
            return Const(name, IND)
        raise ParseError(t.span, "a term", t.value or "end of input")

    def parse_param_expr(self) -> Term:
        t = self.peek()
        if t.kind == "IDENT":
            # bounds and link arguments are parameter positions by grammar
            self.params.add(t.value)
        e = self.parse_term()
        if e.type != PARAM:
            raise TypeClashError(t.span, "a parameter expression", str(e))
        return e


def parse_formula_sequent(text: str, filename: str = "<sequent>",
                          params: set[str] | None = None) -> Sequent:
    """Parse a single sequent; both `|-` and `:-` act as the turnstile."""
    p = _Parser(text, filename, params)
    s = p.parse_sequent()
    t = p.peek()
    if t.kind != "EOF":
        raise ParseError(t.span, "end of sequent", t.value)
    return s


# ------------------------------------------------------------------- DSL

_UNARY_RULES = {
    "negL": RuleKind.NEG_L,
    "negR": RuleKind.NEG_R,
    "andL": RuleKind.AND_L,
    "orR": RuleKind.OR_R,
    "impR": RuleKind.IMP_R,
    "weakL": RuleKind.WEAK_L,
    "weakR": RuleKind.WEAK_R,
    "contrL": RuleKind.CONTR_L,
    "contrR": RuleKind.CONTR_R,
    "andEqL1": RuleKind.AND_EQ_L1,
    "andEqL3": RuleKind.AND_EQ_L3,
    "allL": RuleKind.FORALL_L,
    "allR": RuleKind.FORALL_R,
    "exL": RuleKind.EXISTS_L,
    "exR": RuleKind.EXISTS_R,
}

_BINARY_RULES = {
    "cut": RuleKind.CUT,
    "andR": RuleKind.AND_R,
    "orL": RuleKind.OR_L,
    "impL": RuleKind.IMP_L,
}


class _BlockParser:
    """Parses one { ... } block of labelled rule lines into a proof."""

    def __init__(self, parser: _Parser):
        self.p = parser
        self.lines: dict[str, LKProof] = {}
        self.used: set[str] = set()
        self.spans: dict[str, SourceSpan] = {}

    def parse_block(self) -> tuple[LKProof, SourceSpan]:
        self.p.expect("LBRACE", "'{'")
        root: LKProof | None = None
        root_span: SourceSpan | None = None
        while self.p.peek().kind != "RBRACE":
            label_tok = self.p.peek()
            if label_tok.kind not in ("IDENT", "NUMBER"):
                raise ParseError(label_tok.span, "a line label or '}'", label_tok.value)
            self.p.next()
            label = label_tok.value
            self.p.expect("COLON", "':'")
            node = self._parse_rule_call()
            if label == "root":
                if root is not None:
                    raise ParseError(label_tok.span, "a single root line", "root")
                root = node
                root_span = label_tok.span
            else:
                if label in self.lines:
                    raise ParseError(label_tok.span, "a fresh line label", label)
                self.lines[label] = node
                self.spans[label] = label_tok.span
        close = self.p.expect("RBRACE")
        if root is None:
            raise ParseError(close.span, "a 'root:' line in the block", "}")
        return root, root_span

    def _ref(self) -> LKProof:
        t = self.p.peek()
        if t.kind not in ("IDENT", "NUMBER"):
            raise ParseError(t.span, "a premise label", t.value)
        self.p.next()
        node = self.lines.get(t.value)
        if node is None:
            raise ParseError(t.span, "a previously defined line label", t.value)
        if t.value in self.used:
            # reusing a line duplicates the subproof with fresh ids
            return refresh_ids(node)
        self.used.add(t.value)
        return node

    def _parse_rule_call(self) -> LKProof:
        name_tok = self.p.expect("IDENT", "a rule name")
        name = name_tok.value
        self.p.expect("LPAREN", "'('")
        node = self._dispatch(name, name_tok)
        self.p.expect("RPAREN", "')'")
        return node

    def _dispatch(self, name: str, name_tok) -> LKProof:
        p = self.p
        if name == "ax":
            seq = p.parse_sequent()
            return _axiom_or_autoprop(seq, name_tok.span)
        if name == "autoprop":
            seq = p.parse_sequent()
            got = autoprop(seq.ant_formulas(), seq.succ_formulas())
            if isinstance(got, Countermodel):
                raise ParseError(
                    name_tok.span, "a propositionally valid sequent", str(got)
                )
            return autoprop_leaf(seq, got)
        if name == "pLink":
            p.expect("LPAREN", "'('")
            target = p.expect("IDENT", "a proof name")
            p.expect("COMMA", "','")
            arg = p.parse_param_expr()
            p.expect("RPAREN", "')'")
            seq = p.parse_sequent()
            return proof_link(target.value, arg, seq)
        if name in _BINARY_RULES:
            left = self._ref()
            p.expect("COMMA", "','")
            right = self._ref()
            p.expect("COMMA", "','")
            f1 = p.parse_formula()
            f2 = None
            if p.peek().kind == "COMMA":
                p.next()
                f2 = p.parse_formula()
            return self._apply(name_tok, name, (left, right), f1, f2)
        if name in _UNARY_RULES:
            prem = self._ref()
            p.expect("COMMA", "','")
            f1 = p.parse_formula()
            extra = None
            if p.peek().kind == "COMMA":
                p.next()
                if name in ("allL", "exR"):
                    extra = p.parse_term()
                elif name in ("allR", "exL"):
                    vtok = p.expect("IDENT", "an eigenvariable")
                    extra = Var(vtok.value, IND)
                else:
                    extra = p.parse_formula()
            return self._apply(name_tok, name, (prem,), f1, extra)
        raise ParseError(name_tok.span, "a known rule name", name)

    def _apply(self, name_tok, name, premises, f1, f2) -> LKProof:
        kind = _BINARY_RULES.get(name) or _UNARY_RULES[name]
        kw: dict = {"formula": f1}
        if kind in (RuleKind.FORALL_L, RuleKind.EXISTS_R):
            if f2 is None:
                raise ParseError(name_tok.span, "a witness term argument", ")")
            kw["witness"] = f2
        elif kind in (RuleKind.FORALL_R, RuleKind.EXISTS_L):
            if f2 is None:
                raise ParseError(name_tok.span, "an eigenvariable argument", ")")
            kw["eigen"] = f2
        elif f2 is not None:
            kw["formula2"] = f2
        try:
            return lk.build_inference(kind, premises, **kw)
        except Exception as e:
            raise ParseError(name_tok.span, f"a well-formed {name} inference", str(e)) from e


def _axiom_or_autoprop(seq: Sequent, span: SourceSpan) -> LKProof:
    ants, succs_ = seq.ant_formulas(), seq.succ_formulas()
    if (
        len(ants) == 1
        and len(succs_) == 1
        and ants[0] == succs_[0]
        and isinstance(ants[0], Atom)
    ):
        return axiom(ants[0])
    got = autoprop(ants, succs_)
    if isinstance(got, Countermodel):
        raise ParseError(span, "a provable axiom sequent", str(got))
    return autoprop_leaf(seq, got)


def parse_hlks(text: str, filename: str = "<lks>") -> ProofDatabase:
    """Parse a proof DSL document into a database.  Each `proof N proves S`
    block yields a schema (base+step) or a plain proof (single block)."""
    p = _Parser(text, filename)
    db = ProofDatabase()
    while p.peek().kind != "EOF":
        p.expect_kw("proof")
        name = p.expect("IDENT", "a proof name")
        p.expect_kw("proves")
        end = p.parse_sequent()
        if p.at_kw("base"):
            p.next()
            base, base_span = _BlockParser(p).parse_block()
            if p.at_kw("step"):
                p.next()
                step, step_span = _BlockParser(p).parse_block()
                schema = _assemble_schema(name.value, end, base, base_span, step, step_span)
                db.proofs[name.value] = schema
            else:
                _require_same(base, end, base_span)
                db.proofs[name.value] = base
        elif p.peek().kind == "LBRACE":
            body, span = _BlockParser(p).parse_block()
            _require_same(body, end, span)
            db.proofs[name.value] = body
        else:
            t = p.peek()
            raise ParseError(t.span, "'base' or '{'", t.value or "end of input")
    _resolve_db_links(db, filename)
    return db


def _require_same(proof: LKProof, end: Sequent, span: SourceSpan) -> None:
    if not proof.conclusion.same_formulas(end):
        raise ParseError(
            span, f"a proof of {end}", str(proof.conclusion)
        )


def _assemble_schema(name, end, base, base_span, step, step_span) -> ProofSchema:
    param = _schema_param(name, end, step, step_span)
    base_want = lk.substitute_sequent(end, {param: num(0)})
    if not base.conclusion.same_formulas(base_want):
        raise ParseError(base_span, f"a base proof of {base_want}", str(base.conclusion))
    step_want = lk.substitute_sequent(end, {param: Succ(param)})
    if not step.conclusion.same_formulas(step_want):
        raise ParseError(step_span, f"a step proof of {step_want}", str(step.conclusion))
    return ProofSchema(name, param, end, base, step)


def _schema_param(name, end: Sequent, step: LKProof, span: SourceSpan) -> Var:
    free = set()
    for o in end.occurrences():
        free |= {v for v in o.formula.free_vars() if v.type == PARAM}
    if len(free) == 1:
        return free.pop()
    if len(free) > 1:
        raise ParseError(span, "a single schema parameter", str(sorted(v.name for v in free)))
    # constant family: take the variable of a self link, or a fresh one
    for _, node in step.nodes():
        if node.rule is RuleKind.PROOF_LINK and node.link.name == name:
            if isinstance(node.link.arg, Var):
                return node.link.arg
    return param_var("k")


def _resolve_db_links(db: ProofDatabase, filename: str) -> None:
    span = SourceSpan(filename, 1, 1)
    names = set(db.proofs)
    for pname, entry in db.proofs.items():
        proofs = (entry.base, entry.step) if isinstance(entry, ProofSchema) else (entry,)
        for pr in proofs:
            for _, node in pr.nodes():
                if node.rule is RuleKind.PROOF_LINK and node.link.name not in names:
                    raise ParseError(
                        span, f"a link target defined in this file ({pname})",
                        node.link.name,
                    )


# ------------------------------------------------------------------- XML

_XML_RULE_NAMES = dict(_UNARY_RULES) | dict(_BINARY_RULES) | {
    "ax": RuleKind.AXIOM,
    "autoprop": RuleKind.AUTOPROP,
}


def parse_simple_xml(text: str, filename: str = "<xml>") -> ProofDatabase:
    """Parse the XML interchange format: prooftrees > proof > rule tree,
    with rule conclusions in the shared sequent syntax (`:-` turnstile)."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        line, col = getattr(e, "position", (1, 1))
        raise ParseError(SourceSpan(filename, line, col), "well-formed XML", str(e)) from e
    if root.tag != "prooftrees":
        raise StructureError("/", "prooftrees", f"/: root element is {root.tag!r}, expected 'prooftrees'")
    db = ProofDatabase()
    elements: dict[str, tuple[ET.Element, str]] = {}
    order: list[str] = []
    for i, child in enumerate(root):
        path = f"prooftrees/proof[{i}]"
        if child.tag != "proof":
            raise StructureError(path, "proof", f"{path}: unexpected element {child.tag!r}")
        symbol = child.get("symbol")
        if symbol is None:
            raise StructureError(path, "symbol")
        rules = list(child)
        if len(rules) != 1 or rules[0].tag != "rule":
            raise StructureError(path, "rule", f"{path}: proof must contain exactly one rule element")
        elements[symbol] = (rules[0], path)
        order.append(symbol)
        if child.get("calculus") is not None:
            db.meta[symbol] = {"calculus": child.get("calculus")}

    building: set[str] = set()

    def build(symbol: str) -> LKProof:
        if symbol in db.proofs:
            return db.proofs[symbol]
        if symbol in building:
            raise StructureError(f"proof {symbol!r}", "acyclic links",
                                 f"proof links form a cycle through {symbol!r}")
        building.add(symbol)
        element, path = elements[symbol]
        proof = _build_rule(element, f"{path}/rule", filename, build, elements)
        building.discard(symbol)
        db.proofs[symbol] = proof
        return proof

    for symbol in order:
        build(symbol)
    return db


def _build_rule(el: ET.Element, path: str, filename: str, build, elements) -> LKProof:
    rtype = el.get("type")
    if rtype is None:
        raise StructureError(path, "type")
    children = list(el)
    if not children or children[0].tag != "conclusion":
        raise StructureError(path, "conclusion",
                             f"{path}: first child of rule must be 'conclusion'")
    concl_text = children[0].text or ""
    concl = parse_formula_sequent(concl_text, filename)
    premises: list[LKProof] = []
    for i, sub in enumerate(children[1:]):
        sub_path = f"{path}/{sub.tag}[{i}]"
        if sub.tag == "rule":
            premises.append(_build_rule(sub, sub_path, filename, build, elements))
        elif sub.tag == "prooflink":
            symbol = sub.get("symbol")
            if symbol is None:
                raise StructureError(sub_path, "symbol")
            if symbol not in elements:
                raise StructureError(sub_path, "resolvable symbol",
                                     f"{sub_path}: link target {symbol!r} not in document")
            target = build(symbol)
            premises.append(proof_link(symbol, None, sequent(
                target.conclusion.ant_formulas(), target.conclusion.succ_formulas()
            )))
        else:
            raise StructureError(sub_path, "rule or prooflink",
                                 f"{sub_path}: unexpected element {sub.tag!r}")
    return _reconstruct(rtype, premises, concl, el.get("param"))


def _reconstruct(rtype: str, premises: list[LKProof], concl: Sequent,
                 param: str | None) -> LKProof:
    """Turn a typed XML node into a fully wired inference; nodes that do
    not fit their claimed rule load as display-only generic nodes."""
    kind = _XML_RULE_NAMES.get(rtype)
    if kind is None:
        return generic_node(rtype, concl, premises)
    try:
        node = _rebuild_typed(kind, premises, concl, param)
    except Exception:
        return generic_node(rtype, concl, premises)
    if node is None or not node.conclusion.same_formulas(concl):
        return generic_node(rtype, concl, premises)
    return node


def _counter(formulas):
    from collections import Counter

    return Counter(formulas)


def _only(counter) -> Formula | None:
    items = list(counter.elements())
    return items[0] if len(items) == 1 else None


def _rebuild_typed(kind, premises, concl, param) -> LKProof | None:
    if kind is RuleKind.AXIOM:
        ants, succs_ = concl.ant_formulas(), concl.succ_formulas()
        if len(ants) == 1 and len(succs_) == 1 and ants[0] == succs_[0] and isinstance(ants[0], Atom):
            return axiom(ants[0])
        got = autoprop(ants, succs_)
        return autoprop_leaf(concl, got) if isinstance(got, LKProof) else None
    if kind is RuleKind.AUTOPROP:
        got = autoprop(concl.ant_formulas(), concl.succ_formulas())
        return autoprop_leaf(concl, got) if isinstance(got, LKProof) else None

    if len(premises) != (2 if kind in (RuleKind.CUT, RuleKind.AND_R, RuleKind.OR_L, RuleKind.IMP_L) else 1):
        return None
    p1 = premises[0]
    ant_gone = _counter(sum((p.conclusion.ant_formulas() for p in premises), ())) - _counter(concl.ant_formulas())
    ant_new = _counter(concl.ant_formulas()) - _counter(sum((p.conclusion.ant_formulas() for p in premises), ()))
    succ_gone = _counter(sum((p.conclusion.succ_formulas() for p in premises), ())) - _counter(concl.succ_formulas())
    succ_new = _counter(concl.succ_formulas()) - _counter(sum((p.conclusion.succ_formulas() for p in premises), ()))

    if kind is RuleKind.CUT:
        f = _only(succ_gone)
        if f is None or _only(ant_gone) != f:
            return None
        return lk.cut(premises[0], premises[1], f)
    if kind is RuleKind.NEG_L:
        m = _only(ant_new)
        return lk.neg_l(p1, m.sub) if isinstance(m, Neg) else None
    if kind is RuleKind.NEG_R:
        m = _only(succ_new)
        return lk.neg_r(p1, m.sub) if isinstance(m, Neg) else None
    if kind is RuleKind.AND_L:
        m = _only(ant_new)
        return lk.and_l(p1, m.left, m.right) if isinstance(m, And) else None
    if kind is RuleKind.AND_R:
        m = _only(succ_new)
        return lk.and_r(premises[0], premises[1], m.left, m.right) if isinstance(m, And) else None
    if kind is RuleKind.OR_L:
        m = _only(ant_new)
        return lk.or_l(premises[0], premises[1], m.left, m.right) if isinstance(m, Or) else None
    if kind is RuleKind.OR_R:
        m = _only(succ_new)
        return lk.or_r(p1, m.left, m.right) if isinstance(m, Or) else None
    if kind is RuleKind.IMP_L:
        m = _only(ant_new)
        return lk.imp_l(premises[0], premises[1], m.left, m.right) if isinstance(m, Imp) else None
    if kind is RuleKind.IMP_R:
        m = _only(succ_new)
        return lk.imp_r(p1, m.left, m.right) if isinstance(m, Imp) else None
    if kind is RuleKind.WEAK_L:
        return lk.weak_l(p1, _only(ant_new)) if _only(ant_new) is not None else None
    if kind is RuleKind.WEAK_R:
        return lk.weak_r(p1, _only(succ_new)) if _only(succ_new) is not None else None
    if kind is RuleKind.CONTR_L:
        return lk.contr_l(p1, _only(ant_gone)) if _only(ant_gone) is not None else None
    if kind is RuleKind.CONTR_R:
        return lk.contr_r(p1, _only(succ_gone)) if _only(succ_gone) is not None else None
    if kind in (RuleKind.AND_EQ_L1, RuleKind.AND_EQ_L3):
        m, a = _only(ant_new), _only(ant_gone)
        if m is None or a is None:
            return None
        fold = lk.and_eq_l1 if kind is RuleKind.AND_EQ_L1 else lk.and_eq_l3
        return fold(p1, a, m)
    if kind in (RuleKind.FORALL_L, RuleKind.EXISTS_R):
        new, gone = (ant_new, ant_gone) if kind is RuleKind.FORALL_L else (succ_new, succ_gone)
        m, inst = _only(new), _only(gone)
        cls = ForAll if kind is RuleKind.FORALL_L else Exists
        if not isinstance(m, cls) or inst is None:
            return None
        t = _match_instance(m.body, m.var, inst, param)
        if t is None:
            return None
        builder = lk.forall_l if kind is RuleKind.FORALL_L else lk.exists_r
        return builder(p1, m, t)
    if kind in (RuleKind.FORALL_R, RuleKind.EXISTS_L):
        new, gone = (succ_new, succ_gone) if kind is RuleKind.FORALL_R else (ant_new, ant_gone)
        m, inst = _only(new), _only(gone)
        cls = ForAll if kind is RuleKind.FORALL_R else Exists
        if not isinstance(m, cls) or inst is None:
            return None
        t = _match_instance(m.body, m.var, inst, param)
        if not isinstance(t, Var):
            return None
        builder = lk.forall_r if kind is RuleKind.FORALL_R else lk.exists_l
        return builder(p1, m, t)
    return None


def _match_instance(body: Formula, var: Var, inst: Formula, param: str | None) -> Term | None:
    """Find t with body[var:=t] == inst; tries the param attribute first."""
    if param:
        try:
            t = _Parser(param, "<param>").parse_term()
            if substitute(body, {var: t}) == inst:
                return t
        except ParseError:
            pass
    found: list[Term] = []

    def walk(b, i) -> bool:
        if b == var and isinstance(b, Var):
            found.append(i)
            return True
        if type(b) is not type(i):
            return b == i
        if isinstance(b, Atom):
            return b.name == i.name and len(b.args) == len(i.args) and all(
                walk(x, y) for x, y in zip(b.args, i.args)
            )
        if isinstance(b, Neg):
            return walk(b.sub, i.sub)
        if isinstance(b, (And, Or, Imp)):
            return walk(b.left, i.left) and walk(b.right, i.right)
        if isinstance(b, (ForAll, Exists)):
            if b.var == var:  # shadowed: no substitution below
                return b == i
            return b.var == i.var and walk(b.body, i.body)
        if isinstance(b, Succ):
            return isinstance(i, Succ) and walk(b.arg, i.arg)
        if isinstance(b, App):
            return isinstance(i, App) and walk(b.fn, i.fn) and walk(b.arg, i.arg)
        return b == i

    if not walk(body, inst):
        return None
    if not found:
        return None  # vacuous: witness cannot be inferred
    t0 = found[0]
    if any(t != t0 for t in found[1:]):
        return None
    return t0


# ------------------------------------------------------------- file level

def parse_path(path) -> ProofDatabase:
    """Dispatch on the (possibly .gz-wrapped) extension."""
    name = Path(path).name
    stem = name[:-3] if name.endswith(".gz") else name
    text = read_input(path)
    if stem.endswith(".xml"):
        return parse_simple_xml(text, filename=name)
    return parse_hlks(text, filename=name)

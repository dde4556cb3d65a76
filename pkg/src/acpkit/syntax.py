"""Concrete syntax for process files, terms, and specifications.

A process file consists of `act`, `comm`, `proc`, and `root` declarations:

    act send, recv, pass;           // the alphabet
    comm send | recv = pass;        // synchronization table
    proc X = send . X + recv;      // recursion equations
    root X;

Term syntax: `delta`, action and variable names, `+` (weakest), `.`
(strongest, right-associative), and the equally strong merge operators `||`,
`|_`, and `|`, which may be repeated (left-associatively) but must be
parenthesized against each other.  `encap({a, b}, t)` blocks actions, and
`<X | X = t, Y = u>` is an inline recursion constant.  Unicode spellings
(`·`, `∥`, `⫦`, `δ`, `∂`) are accepted on input; comments run from `//` to
end of line.

Printing uses minimal parentheses and round-trips: parsing the printed form
yields a structurally equal value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .comm import DELTA, CommFn
from .terms import (
    Action,
    Alt,
    CommMerge,
    Encap,
    Inaction,
    LeftMerge,
    Par,
    Rec,
    RecSpec,
    Seq,
    Term,
    Var,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class MixedMergeWithoutParens(ParseError):
    def __init__(self, line: int, col: int):
        super().__init__(
            "mixing ||, |_ and | at the same level requires parentheses", line, col
        )


class UndeclaredAction(ParseError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"action {name!r} is not declared", line, col)
        self.name = name


KEYWORDS = {"act", "comm", "proc", "root", "delta", "encap"}

_UNICODE_SIMPLE = {"·": ".", "∥": "||", "⫦": "|_", "δ": "delta", "∂": "encap"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "kw", or the symbol itself; "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isascii() and ch.isalpha():
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in KEYWORDS else "name"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch in _UNICODE_SIMPLE:
            sym = _UNICODE_SIMPLE[ch]
            if sym in KEYWORDS:
                tokens.append(_Token("kw", sym, line, col))
            else:
                tokens.append(_Token(sym, sym, line, col))
            i += 1
            col += 1
            continue
        if text.startswith("||", i) or text.startswith("|_", i):
            sym = text[i : i + 2]
            tokens.append(_Token(sym, sym, line, col))
            i += 2
            col += 2
            continue
        if ch in "|+.(){},;=<>":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


_MERGE_OPS = {"||": Par, "|_": LeftMerge, "|": CommMerge}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what or kind}, found {tok.text or 'end of input'!r}",
                tok.line,
                tok.col,
            )
        return self.next()

    def expect_kw(self, word: str) -> _Token:
        tok = self.peek()
        if tok.kind != "kw" or tok.text != word:
            raise ParseError(f"expected {word!r}", tok.line, tok.col)
        return self.next()

    # Terms are parsed with bare names as variables; `_resolve` later turns
    # names from the alphabet into action constants.

    def term(self) -> Term:
        left = self.merge()
        while self.peek().kind == "+":
            self.next()
            left = Alt(left, self.merge())
        return left

    def merge(self) -> Term:
        left = self.seq()
        op = None
        while self.peek().kind in _MERGE_OPS:
            tok = self.next()
            if op is not None and tok.kind != op:
                raise MixedMergeWithoutParens(tok.line, tok.col)
            op = tok.kind
            left = _MERGE_OPS[op](left, self.seq())
        return left

    def seq(self) -> Term:
        left = self.prim()
        if self.peek().kind == ".":
            self.next()
            return Seq(left, self.seq())
        return left

    def prim(self) -> Term:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "delta":
            self.next()
            return Inaction()
        if tok.kind == "kw" and tok.text == "encap":
            self.next()
            self.expect("(")
            self.expect("{")
            names = [self.expect("name").text]
            while self.peek().kind == ",":
                self.next()
                names.append(self.expect("name").text)
            self.expect("}")
            self.expect(",")
            body = self.term()
            self.expect(")")
            return Encap(frozenset(names), body)
        if tok.kind == "name":
            self.next()
            return Var(tok.text)
        if tok.kind == "(":
            self.next()
            body = self.term()
            self.expect(")")
            return body
        if tok.kind == "<":
            self.next()
            var = self.expect("name").text
            self.expect("|")
            pairs = [self.equation()]
            while self.peek().kind == ",":
                self.next()
                pairs.append(self.equation())
            self.expect(">")
            lhs = {name for name, _ in pairs}
            if var not in lhs:
                raise ParseError(
                    f"recursion constant variable {var!r} is not defined inside <...>",
                    tok.line,
                    tok.col,
                )
            return Rec(var, RecSpec.of(pairs))
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}", tok.line, tok.col)

    def equation(self):
        name = self.expect("name").text
        self.expect("=")
        return name, self.term()


def _resolve(t: Term, alphabet: frozenset, bound: frozenset, where) -> Term:
    """Turn parsed bare names from the alphabet into action constants.

    Names bound by an enclosing recursive specification stay variables; a
    bound name that is also a declared action is rejected as ambiguous.
    """
    if isinstance(t, (Inaction, Action)):
        return t
    if isinstance(t, Var):
        if t.name in bound:
            return t
        if t.name in alphabet:
            return Action(t.name)
        return t
    if isinstance(t, (Alt, Seq, Par, LeftMerge, CommMerge)):
        return type(t)(
            _resolve(t.left, alphabet, bound, where),
            _resolve(t.right, alphabet, bound, where),
        )
    if isinstance(t, Encap):
        for name in t.blocked:
            if name not in alphabet:
                raise UndeclaredAction(name, *where)
        return Encap(t.blocked, _resolve(t.body, alphabet, bound, where))
    if isinstance(t, Rec):
        inner = t.spec.variables()
        clash = inner & alphabet
        if clash:
            raise ParseError(
                f"name {sorted(clash)[0]!r} is declared as an action but used "
                "as a recursion variable",
                *where,
            )
        bound2 = bound | inner
        return Rec(
            t.var,
            RecSpec.of(
                (name, _resolve(rhs, alphabet, bound2, where)) for name, rhs in t.spec
            ),
        )
    raise TypeError(f"not a term: {t!r}")


def parse_term(text: str, alphabet) -> Term:
    """Parse a single term against a known alphabet."""
    p = _Parser(text)
    raw = p.term()
    p.expect("eof", "end of input")
    return _resolve(raw, frozenset(alphabet), frozenset(), (1, 1))


@dataclass(frozen=True)
class SpecFile:
    """A parsed process file."""

    alphabet: tuple  # declaration order
    comm_entries: tuple  # of (a, b, result-or-DELTA)
    processes: RecSpec
    root: str | None = None

    def comm_fn(self) -> CommFn:
        return CommFn.of(self.alphabet, self.comm_entries)


def parse(text: str) -> SpecFile:
    """Parse a whole process file.  Declarations may come in any order;
    every action used must be declared by an `act` line somewhere."""
    p = _Parser(text)
    alphabet = []
    comm_entries = []
    raw_procs = []
    positions = {}
    root = None
    while p.peek().kind != "eof":
        tok = p.peek()
        if tok.kind != "kw":
            raise ParseError(
                f"expected a declaration, found {tok.text!r}", tok.line, tok.col
            )
        if tok.text == "act":
            p.next()
            alphabet.append(p.expect("name").text)
            while p.peek().kind == ",":
                p.next()
                alphabet.append(p.expect("name").text)
            p.expect(";")
        elif tok.text == "comm":
            p.next()
            a = p.expect("name")
            p.expect("|")
            b = p.expect("name")
            p.expect("=")
            if p.peek().kind == "kw" and p.peek().text == "delta":
                p.next()
                c = None
            else:
                c = p.expect("name")
            p.expect(";")
            comm_entries.append((a, b, c))
        elif tok.text == "proc":
            p.next()
            name_tok = p.expect("name")
            p.expect("=")
            rhs = p.term()
            p.expect(";")
            raw_procs.append((name_tok.text, rhs))
            positions[name_tok.text] = (name_tok.line, name_tok.col)
        elif tok.text == "root":
            p.next()
            root = p.expect("name").text
            p.expect(";")
        else:
            raise ParseError(f"unexpected keyword {tok.text!r}", tok.line, tok.col)

    declared = frozenset(alphabet)
    entries = []
    for a, b, c in comm_entries:
        for tok in (a, b) + (() if c is None else (c,)):
            if tok.text not in declared:
                raise UndeclaredAction(tok.text, tok.line, tok.col)
        entries.append((a.text, b.text, DELTA if c is None else c.text))

    proc_vars = {name for name, _ in raw_procs}
    clash = proc_vars & declared
    if clash:
        name = sorted(clash)[0]
        raise ParseError(
            f"name {name!r} is declared both as an action and as a process",
            *positions[name],
        )
    resolved = [
        (name, _resolve(rhs, declared, frozenset(proc_vars), positions[name]))
        for name, rhs in raw_procs
    ]
    if root is not None and root not in proc_vars:
        raise ParseError(f"root {root!r} has no proc declaration", 1, 1)
    return SpecFile(
        alphabet=tuple(alphabet),
        comm_entries=tuple(entries),
        processes=RecSpec.of(resolved),
        root=root,
    )


# -- printing ----------------------------------------------------------------

_ALT, _MERGE, _SEQ, _PRIM = 1, 2, 3, 4


def _render(t: Term):
    """Returns (text, level, merge-op kind or None)."""
    if isinstance(t, Inaction):
        return "delta", _PRIM, None
    if isinstance(t, (Action, Var)):
        return t.name, _PRIM, None
    if isinstance(t, Alt):
        left = _child(t.left, _ALT, "any")
        right = _child(t.right, _MERGE, "any")
        return f"{left} + {right}", _ALT, None
    if isinstance(t, Seq):
        left = _child(t.left, _PRIM, "any")
        right = _child(t.right, _SEQ, "any")
        return f"{left} . {right}", _SEQ, None
    if isinstance(t, (Par, LeftMerge, CommMerge)):
        op = {Par: "||", LeftMerge: "|_", CommMerge: "|"}[type(t)]
        left = _child(t.left, _MERGE, type(t))
        right = _child(t.right, _SEQ, "any")
        return f"{left} {op} {right}", _MERGE, type(t)
    if isinstance(t, Encap):
        names = ", ".join(sorted(t.blocked))
        return f"encap({{{names}}}, {pretty_term(t.body)})", _PRIM, None
    if isinstance(t, Rec):
        eqs = ", ".join(f"{name} = {pretty_term(rhs)}" for name, rhs in t.spec)
        return f"<{t.var} | {eqs}>", _PRIM, None
    raise TypeError(f"not a term: {t!r}")


def _child(t: Term, min_level: int, same_op) -> str:
    """Render a child, parenthesizing when its level is too weak or when two
    different merge operators would meet without disambiguation."""
    text, level, op = _render(t)
    if level > min_level:
        return text
    if level == min_level and (level != _MERGE or same_op == "any" or op is same_op):
        return text
    return f"({text})"


def pretty_term(t: Term) -> str:
    return _render(t)[0]


def pretty_spec(spec: RecSpec) -> str:
    return "\n".join(f"proc {name} = {pretty_term(rhs)};" for name, rhs in spec)


def pretty_spec_file(sf: SpecFile) -> str:
    lines = []
    if sf.alphabet:
        lines.append("act " + ", ".join(sf.alphabet) + ";")
    for a, b, c in sf.comm_entries:
        result = "delta" if c is DELTA else c
        lines.append(f"comm {a} | {b} = {result};")
    lines.append(pretty_spec(sf.processes))
    if sf.root is not None:
        lines.append(f"root {sf.root};")
    return "\n".join(lines) + "\n"

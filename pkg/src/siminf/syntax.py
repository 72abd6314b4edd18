"""First-order syntax: symbols, signatures, terms, formulas and their text form.

Formulas are immutable trees of frozen dataclasses.  ``str(formula)`` prints
the ASCII concrete syntax accepted by :func:`parse_formula`, using the fewest
parentheses that still parse back to the same tree.

Grammar (lowest precedence first)::

    formula := iff
    iff     := imp ('<->' imp)*            left-associative
    imp     := or ('->' imp)?              right-associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | quant | atom | '(' formula ')'
    quant   := ('forall' | 'exists') VAR '.' formula
    atom    := REL '(' term (',' term)* ')' | term '=' term
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

__all__ = [
    "Symbol", "Signature", "Var", "Const", "Term",
    "Formula", "Atom", "Eq", "Not", "And", "Or", "Implies", "Iff",
    "Forall", "Exists", "FormulaError", "ParseError", "UnknownSymbolError",
    "ArityError", "parse_formula", "parse_signature", "free_variables",
    "symbols_of", "is_sentence", "conjoin", "subformulas",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VARIABLE = re.compile(r"[a-z][a-zA-Z0-9_]*")
KEYWORDS = frozenset({"forall", "exists"})


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownSymbolError(FormulaError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown symbol {name!r}{where}")


class ArityError(FormulaError):
    def __init__(self, name: str, expected: int, got: int):
        self.name = name
        self.expected = expected
        self.got = got
        super().__init__(f"{name} expects {expected} argument(s), got {got}")


@dataclass(frozen=True, order=True)
class Symbol:
    """A non-logical symbol; arity 0 is a constant, arity >= 1 a relation."""

    name: str
    arity: int

    def __post_init__(self):
        if not self.name or not _IDENT.fullmatch(self.name):
            raise ValueError(f"bad symbol name {self.name!r}")
        if self.name in KEYWORDS:
            raise ValueError(f"{self.name!r} is a reserved word")
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name}")

    @property
    def is_constant(self) -> bool:
        return self.arity == 0

    @property
    def is_relation(self) -> bool:
        return self.arity > 0

    def __str__(self):
        return f"{self.name}/{self.arity}"


class Signature:
    """An ordered set of symbols with unique names.

    Iteration follows declaration order; equality ignores order.
    """

    __slots__ = ("_symbols", "_by_name")

    def __init__(self, symbols: Iterable[Symbol] = ()):
        by_name: dict[str, Symbol] = {}
        for sym in symbols:
            old = by_name.get(sym.name)
            if old is not None and old != sym:
                raise ValueError(f"symbol {sym.name} declared with arities {old.arity} and {sym.arity}")
            by_name[sym.name] = sym
        self._by_name = by_name
        self._symbols = tuple(by_name.values())

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._symbols)

    def __len__(self):
        return len(self._symbols)

    def __contains__(self, item) -> bool:
        if isinstance(item, Symbol):
            return self._by_name.get(item.name) == item
        return item in self._by_name

    def __getitem__(self, name: str) -> Symbol:
        return self._by_name[name]

    def get(self, name: str) -> Symbol | None:
        return self._by_name.get(name)

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self._by_name == other._by_name

    def __hash__(self):
        return hash(frozenset(self._symbols))

    def __le__(self, other: "Signature") -> bool:
        return all(sym in other for sym in self._symbols)

    def __or__(self, other: "Signature") -> "Signature":
        return Signature((*self._symbols, *other))

    def with_symbol(self, sym: Symbol) -> "Signature":
        return Signature((*self._symbols, sym))

    @property
    def constants(self) -> tuple[Symbol, ...]:
        return tuple(s for s in self._symbols if s.arity == 0)

    @property
    def relations(self) -> tuple[Symbol, ...]:
        return tuple(s for s in self._symbols if s.arity > 0)

    def __str__(self):
        return " ".join(str(s) for s in self._symbols)

    def __repr__(self):
        return f"Signature({str(self)!r})"


def parse_signature(text: str) -> Signature:
    """Parse ``"C/1 E/1 H/2 s/0"`` into a :class:`Signature`."""
    symbols = []
    for item in text.split():
        name, sep, arity = item.partition("/")
        if not sep or not arity.isdigit():
            raise ValueError(f"bad signature entry {item!r}; expected NAME/ARITY")
        symbols.append(Symbol(name, int(arity)))
    return Signature(symbols)


# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


# --- formulas --------------------------------------------------------------

class Formula:
    __slots__ = ()
    # binding strength used by the printer; higher binds tighter
    prec = 100

    def __str__(self):
        return _show(self)

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    rel: str
    args: tuple

    def __repr__(self):
        return f"Atom({self})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term

    def __repr__(self):
        return f"Eq({self})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula
    prec = 90

    def __repr__(self):
        return f"Not({self.body!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    prec = 80
    op = "&"


class Or(_Binary):
    prec = 70
    op = "|"


class Implies(_Binary):
    prec = 60
    op = "->"


class Iff(_Binary):
    prec = 50
    op = "<->"


@dataclass(frozen=True, repr=False)
class _Quantifier(Formula):
    var: str
    body: Formula
    prec = 10

    def __repr__(self):
        return f"{type(self).__name__}({self.var!r}, {self.body!r})"


class Forall(_Quantifier):
    keyword = "forall"


class Exists(_Quantifier):
    keyword = "exists"


def _wrap(f: Formula, min_prec: int) -> str:
    text = _show(f)
    return f"({text})" if f.prec < min_prec else text


def _show(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"{f.rel}({', '.join(map(str, f.args))})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        # a quantifier under '~' would swallow whatever follows it
        return "~" + _wrap(f.body, Not.prec)
    if isinstance(f, _Binary):
        if isinstance(f, Implies):
            left = _wrap(f.left, f.prec + 1)
            right = _wrap(f.right, f.prec)
        else:
            left = _wrap(f.left, f.prec)
            right = _wrap(f.right, f.prec + 1)
        return f"{left} {f.op} {right}"
    if isinstance(f, _Quantifier):
        return f"{f.keyword} {f.var}. {_show(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def conjoin(formulas: Iterable[Formula]) -> Formula | None:
    """Left-nested conjunction of ``formulas``; ``None`` when empty."""
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return result


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not) or isinstance(f, _Quantifier):
        yield from subformulas(f.body)
    elif isinstance(f, _Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var))
    if isinstance(f, Eq):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, _Binary):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, _Quantifier):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def symbols_of(f: Formula) -> Signature:
    """The non-logical symbols occurring in ``f`` (equality excluded)."""
    found: dict[str, Symbol] = {}

    def term(t):
        if isinstance(t, Const):
            found.setdefault(t.name, Symbol(t.name, 0))

    for sub in subformulas(f):
        if isinstance(sub, Atom):
            for t in sub.args:
                term(t)
            found.setdefault(sub.rel, Symbol(sub.rel, len(sub.args)))
        elif isinstance(sub, Eq):
            term(sub.left)
            term(sub.right)
    return Signature(found.values())


# --- parser ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|[~&|().,=])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            tokens.append(("op", m.group(1), start))
        else:
            tokens.append(("id", m.group(2), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind == "eof":
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"unexpected {found}", pos, repr(value))

    def at(self, value: str) -> bool:
        kind, text, _ = self.peek()
        return kind == "op" and text == value

    def parse(self) -> Formula:
        f = self.iff()
        kind, text, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {text!r}", pos, "end of input")
        return f

    def iff(self):
        f = self.imp()
        while self.at("<->"):
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.at("->"):
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.at("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, text, pos = self.peek()
        if kind == "op" and text == "~":
            self.take()
            return Not(self.unary())
        if kind == "op" and text == "(":
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if kind == "id" and text in KEYWORDS:
            self.take()
            vkind, var, vpos = self.take()
            if vkind != "id" or var in KEYWORDS or not _VARIABLE.fullmatch(var):
                raise ParseError(f"bad bound variable {var!r}", vpos, "variable")
            if var in self.sig:
                raise ParseError(f"{var!r} is a declared symbol, not a variable", vpos, "variable")
            self.expect(".")
            body = self.iff()
            return Forall(var, body) if text == "forall" else Exists(var, body)
        if kind == "id":
            sym = self.sig.get(text)
            if sym is not None and sym.arity > 0:
                return self.atom(sym)
            left = self.term()
            self.expect("=")
            return Eq(left, self.term())
        found = "end of input" if kind == "eof" else repr(text)
        raise ParseError(f"unexpected {found}", pos, "formula")

    def atom(self, sym: Symbol):
        self.take()
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.take()
            args.append(self.term())
        self.expect(")")
        if len(args) != sym.arity:
            raise ArityError(sym.name, sym.arity, len(args))
        return Atom(sym.name, tuple(args))

    def term(self) -> Term:
        kind, text, pos = self.take()
        if kind != "id" or text in KEYWORDS:
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"unexpected {found}", pos, "term")
        sym = self.sig.get(text)
        if sym is not None:
            if sym.arity != 0:
                raise ArityError(sym.name, sym.arity, 0)
            return Const(text)
        if _VARIABLE.fullmatch(text):
            if self.at("("):
                raise UnknownSymbolError(text, pos)
            return Var(text)
        raise UnknownSymbolError(text, pos)


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse ``text`` against ``sig``.

    Lowercase identifiers that are not declared constants are variables;
    every other identifier must be declared in ``sig``.

    >>> sig = parse_signature("C/1 E/1")
    >>> str(parse_formula("forall x.(C(x)|E(x))", sig))
    'forall x. C(x) | E(x)'
    """
    return _Parser(text, sig).parse()

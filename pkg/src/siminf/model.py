"""Finite structures, databases and Tarskian satisfaction.

A database is a finite structure paired with a finite theory whose sentences
are all true in it.  Element ids are opaque strings so that identity survives
updates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or,
    Signature, Symbol, Var, FormulaError, UnknownSymbolError, free_variables,
    parse_formula, parse_signature, symbols_of,
)

__all__ = [
    "FiniteStructure", "Database", "StructureError", "DatabaseFormatError",
    "satisfies", "holds", "check_correctness", "load_database",
    "parse_database", "format_database", "format_structure",
]


class StructureError(ValueError):
    pass


class UnassignedVariableError(FormulaError):
    pass


def _freeze_relation(tuples: Iterable) -> frozenset:
    return frozenset(tuple(t) for t in tuples)


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    """A finite first-order structure.

    ``domain`` keeps insertion order, which fixes the order used when
    printing and when the planner enumerates candidate payloads.
    """

    signature: Signature
    domain: tuple
    constants: Mapping[str, str]
    relations: Mapping[str, frozenset]

    def __init__(self, signature: Signature, domain: Iterable[str],
                 constants: Mapping[str, str], relations: Mapping[str, Iterable] | None = None):
        domain = tuple(domain)
        relations = dict(relations or {})
        if not domain:
            raise StructureError("empty domain")
        if len(set(domain)) != len(domain):
            raise StructureError("duplicate domain elements")
        members = set(domain)
        consts = {}
        rels = {}
        for sym in signature:
            if sym.arity == 0:
                if sym.name not in constants:
                    raise StructureError(f"constant {sym.name} is not interpreted")
                value = constants[sym.name]
                if value not in members:
                    raise StructureError(f"{sym.name} denotes {value!r}, which is not in the domain")
                consts[sym.name] = value
            else:
                ext = _freeze_relation(relations.get(sym.name, ()))
                for t in ext:
                    if len(t) != sym.arity:
                        raise StructureError(f"tuple {t} has wrong length for {sym}")
                    missing = [e for e in t if e not in members]
                    if missing:
                        raise StructureError(f"tuple {t} of {sym.name} leaves the domain")
                rels[sym.name] = ext
        extra = (set(constants) - set(consts)) | (set(relations) - set(rels))
        if extra:
            raise StructureError(f"interpretation given for undeclared symbols {sorted(extra)}")
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "constants", MappingProxyType(consts))
        object.__setattr__(self, "relations", MappingProxyType(rels))

    def interpretation(self, name: str):
        if name in self.constants:
            return self.constants[name]
        return self.relations[name]

    def key(self) -> tuple:
        """Hashable identity of the structure (domain order ignored)."""
        return (
            frozenset(self.domain),
            frozenset(self.constants.items()),
            frozenset(self.relations.items()),
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return self.signature == other.signature and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def referenced(self) -> set:
        """Elements mentioned by some constant or relation tuple."""
        used = set(self.constants.values())
        for ext in self.relations.values():
            for t in ext:
                used.update(t)
        return used

    def __str__(self):
        return format_structure(self)


@dataclass(frozen=True)
class Database:
    structure: FiniteStructure
    theory: tuple = field(default=())

    def __post_init__(self):
        theory = tuple(self.theory)
        object.__setattr__(self, "theory", theory)
        for sentence in theory:
            if free_variables(sentence):
                raise FormulaError(f"theory member {sentence} has free variables")
            if not symbols_of(sentence) <= self.structure.signature:
                raise FormulaError(f"theory member {sentence} is outside the signature")

    @property
    def signature(self) -> Signature:
        return self.structure.signature

    @property
    def domain(self) -> tuple:
        return self.structure.domain


def _value(s: FiniteStructure, t, a: Mapping[str, str]):
    if isinstance(t, Const):
        try:
            return s.constants[t.name]
        except KeyError:
            raise UnknownSymbolError(t.name) from None
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise UnassignedVariableError(f"variable {t.name} is unassigned") from None
    raise TypeError(f"not a term: {t!r}")


def satisfies(s: FiniteStructure, f: Formula, a: Mapping[str, str] | None = None) -> bool:
    """``s, a |= f`` by direct recursion; quantifiers range over the domain."""
    if a is None:
        a = {}
    if isinstance(f, Atom):
        ext = s.relations.get(f.rel)
        if ext is None:
            raise UnknownSymbolError(f.rel)
        return tuple(_value(s, t, a) for t in f.args) in ext
    if isinstance(f, Eq):
        return _value(s, f.left, a) == _value(s, f.right, a)
    if isinstance(f, Not):
        return not satisfies(s, f.body, a)
    if isinstance(f, And):
        return satisfies(s, f.left, a) and satisfies(s, f.right, a)
    if isinstance(f, Or):
        return satisfies(s, f.left, a) or satisfies(s, f.right, a)
    if isinstance(f, Implies):
        return not satisfies(s, f.left, a) or satisfies(s, f.right, a)
    if isinstance(f, Iff):
        return satisfies(s, f.left, a) == satisfies(s, f.right, a)
    if isinstance(f, Forall):
        return all(satisfies(s, f.body, {**a, f.var: e}) for e in s.domain)
    if isinstance(f, Exists):
        return any(satisfies(s, f.body, {**a, f.var: e}) for e in s.domain)
    raise TypeError(f"not a formula: {f!r}")


def holds(s: FiniteStructure, f: Formula) -> bool:
    """Truth of a sentence, counting sentences outside ``s``'s language as false."""
    if not symbols_of(f) <= s.signature:
        return False
    return satisfies(s, f)


def check_correctness(d: Database) -> tuple[bool, list]:
    failing = [phi for phi in d.theory if not satisfies(d.structure, phi)]
    return not failing, failing


# --- file format -----------------------------------------------------------

class DatabaseFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_ELEMENT = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")


def _parse_tuples(body: str, lineno: int, col: int) -> list[tuple]:
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise DatabaseFormatError("relation extension must be written { ... }", lineno, col)
    inner = body[1:-1].strip()
    if not inner:
        return []
    tuples = []
    for m in re.finditer(r"\(([^()]*)\)|([^,\s()]+)", inner):
        if m.group(1) is not None:
            parts = [p.strip() for p in m.group(1).split(",")]
        else:
            parts = [m.group(2)]
        for p in parts:
            if not _ELEMENT.fullmatch(p):
                raise DatabaseFormatError(f"bad element id {p!r}", lineno, col + m.start())
        tuples.append(tuple(parts))
    leftovers = re.sub(r"\([^()]*\)|[^,\s()]+|[,\s]", "", inner)
    if leftovers:
        raise DatabaseFormatError(f"cannot read tuples near {leftovers!r}", lineno, col)
    return tuples


def parse_database(text: str, check: bool = True) -> Database:
    """Read the line-oriented database format.

    With ``check`` (the default) a structure that falsifies part of its
    theory is rejected with :class:`DatabaseFormatError`.
    """
    sig = None
    domain = None
    constants: dict[str, str] = {}
    relations: dict[str, list] = {}
    theory_lines: list[tuple[int, int, str]] = []
    in_theory = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        if in_theory and (indent > 0 or not re.match(r"(signature|domain|const|rel|theory)\b", stripped)):
            theory_lines.append((lineno, indent + 1, stripped))
            continue
        in_theory = False
        head, _, rest = stripped.partition(" ")
        if stripped.startswith("signature:"):
            try:
                sig = parse_signature(stripped[len("signature:"):])
            except ValueError as e:
                raise DatabaseFormatError(str(e), lineno) from None
        elif stripped.startswith("domain:"):
            domain = stripped[len("domain:"):].split()
            for e in domain:
                if not _ELEMENT.fullmatch(e):
                    raise DatabaseFormatError(f"bad element id {e!r}", lineno)
        elif stripped.startswith("theory:"):
            in_theory = True
            tail = stripped[len("theory:"):].strip()
            if tail:
                theory_lines.append((lineno, indent + 1, tail))
        elif head == "const":
            m = re.fullmatch(r"(\w+)\s*=\s*(\S+)", rest.strip())
            if not m:
                raise DatabaseFormatError("expected 'const NAME = ELEMENT'", lineno)
            constants[m.group(1)] = m.group(2)
        elif head == "rel":
            name, eq, body = rest.partition("=")
            if not eq:
                raise DatabaseFormatError("expected 'rel NAME = { ... }'", lineno)
            col = indent + len("rel ") + len(name) + 2
            relations[name.strip()] = _parse_tuples(body, lineno, col)
        else:
            raise DatabaseFormatError(f"unrecognised line {stripped!r}", lineno, indent + 1)
    if sig is None:
        raise DatabaseFormatError("missing 'signature:' line", 1)
    if domain is None:
        raise DatabaseFormatError("missing 'domain:' line", 1)
    try:
        structure = FiniteStructure(sig, domain, constants, relations)
    except StructureError as e:
        raise DatabaseFormatError(str(e), 1) from None
    theory = []
    for lineno, col, src in theory_lines:
        try:
            theory.append(parse_formula(src, sig))
        except FormulaError as e:
            pos = getattr(e, "position", None) or 0
            raise DatabaseFormatError(str(e), lineno, col + pos) from None
    try:
        db = Database(structure, tuple(theory))
    except FormulaError as e:
        raise DatabaseFormatError(str(e), 1) from None
    if check:
        ok, failing = check_correctness(db)
        if not ok:
            raise DatabaseFormatError(
                "theory is false in the structure: " + "; ".join(map(str, failing)), 1)
    return db


def load_database(path, check: bool = True) -> Database:
    with open(path, encoding="utf-8") as fh:
        return parse_database(fh.read(), check=check)


def _fmt_tuple(t: tuple) -> str:
    return t[0] if len(t) == 1 else "(" + ",".join(t) + ")"


def _sorted_ext(s: FiniteStructure, ext) -> list:
    order = {e: i for i, e in enumerate(s.domain)}
    return sorted(ext, key=lambda t: [order[e] for e in t])


def format_structure(s: FiniteStructure) -> str:
    lines = [f"signature: {s.signature}", "domain: " + " ".join(s.domain)]
    for sym in s.signature.constants:
        lines.append(f"const {sym.name} = {s.constants[sym.name]}")
    for sym in s.signature.relations:
        body = ", ".join(_fmt_tuple(t) for t in _sorted_ext(s, s.relations[sym.name]))
        lines.append(f"rel {sym.name} = {{ {body} }}" if body else f"rel {sym.name} = {{ }}")
    return "\n".join(lines)


def format_database(d: Database) -> str:
    lines = [format_structure(d.structure), "theory:"]
    lines.extend(f"  {phi}" for phi in d.theory)
    return "\n".join(lines) + "\n"

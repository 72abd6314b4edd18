"""Structural operations on databases and update sequences.

An insertion adds one tuple to a relation (or points a constant at an
element), possibly bringing fresh elements into the domain and possibly
introducing the symbol.  A deletion removes one tuple (or re-points a
constant) and may drop elements that nothing references any more.  Both must
leave every sentence of the theory true.

Script format, one operation per line (``#`` starts a comment)::

    insert b = e_a          # constant b denotes existing e_a
    insert E (e_b*)         # '*' marks a fresh element
    delete H (e_s, e_a)
    delete C (e_s) drop e_s
    delete s -> e_a
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .model import Database, FiniteStructure, satisfies
from .syntax import Formula, FormulaError, Symbol, symbols_of

__all__ = [
    "InsertionSpec", "DeletionSpec", "Update", "UpdateError", "TheoryViolation",
    "MalformedPayload", "DanglingElement", "TupleNotPresent", "StepError",
    "ScriptError", "apply_insertion", "apply_deletion", "apply_op",
    "build_update", "is_coherent_with", "parse_script", "format_op", "format_script",
]


class UpdateError(ValueError):
    pass


class TheoryViolation(UpdateError):
    def __init__(self, sentence: Formula, structure: FiniteStructure):
        self.sentence = sentence
        self.structure = structure
        super().__init__(f"theory violated: {sentence}")


class MalformedPayload(UpdateError):
    pass


class DanglingElement(UpdateError):
    def __init__(self, element: str, where: str):
        self.element = element
        self.where = where
        super().__init__(f"cannot drop {element}: still referenced by {where}")


class TupleNotPresent(UpdateError):
    pass


class StepError(UpdateError):
    def __init__(self, step: int, cause: UpdateError):
        self.step = step
        self.cause = cause
        super().__init__(f"step {step}: {cause}")


@dataclass(frozen=True)
class InsertionSpec:
    """Insert ``payload`` into ``symbol``; ids listed in ``fresh`` are new elements."""

    symbol: Symbol
    payload: tuple
    fresh: frozenset = field(default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "payload", tuple(self.payload))
        object.__setattr__(self, "fresh", frozenset(self.fresh))
        if len(self.payload) != max(self.symbol.arity, 1):
            raise MalformedPayload(f"{self.symbol} needs {max(self.symbol.arity, 1)} element(s), got {len(self.payload)}")
        if not self.fresh <= set(self.payload):
            raise MalformedPayload("fresh elements must occur in the payload")

    def __str__(self):
        return format_op(self)


@dataclass(frozen=True)
class DeletionSpec:
    """Remove ``payload`` from ``symbol`` and drop the ids in ``drop``.

    For a constant the payload is the single element it is re-pointed to and
    ``drop`` may only contain its old referent.
    """

    symbol: Symbol
    payload: tuple
    drop: frozenset = field(default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "payload", tuple(self.payload))
        object.__setattr__(self, "drop", frozenset(self.drop))
        if len(self.payload) != max(self.symbol.arity, 1):
            raise MalformedPayload(f"{self.symbol} needs {max(self.symbol.arity, 1)} element(s), got {len(self.payload)}")
        if self.symbol.arity > 0 and not self.drop <= set(self.payload):
            raise MalformedPayload("only components of the deleted tuple may be dropped")

    def __str__(self):
        return format_op(self)


Op = Union[InsertionSpec, DeletionSpec]


def _check_theory(theory: Sequence[Formula], structure: FiniteStructure) -> None:
    for phi in theory:
        if not satisfies(structure, phi):
            raise TheoryViolation(phi, structure)


def _insert(d: Database, spec: InsertionSpec) -> FiniteStructure:
    s = d.structure
    sym = spec.symbol
    known = s.signature.get(sym.name)
    if known is not None and known != sym:
        raise MalformedPayload(f"{sym.name} has arity {known.arity}, not {sym.arity}")
    for e in spec.payload:
        if e in spec.fresh and e in s.domain:
            raise MalformedPayload(f"{e} is marked fresh but already in the domain")
        if e not in spec.fresh and e not in s.domain:
            raise MalformedPayload(f"{e} is not in the domain (mark new elements with '*')")
    domain = list(s.domain)
    for e in spec.payload:
        if e not in domain:
            domain.append(e)
    sig = s.signature if known else s.signature.with_symbol(sym)
    constants = dict(s.constants)
    relations = dict(s.relations)
    if sym.arity == 0:
        if constants.get(sym.name) == spec.payload[0]:
            raise MalformedPayload(f"{sym.name} already denotes {spec.payload[0]}")
        constants[sym.name] = spec.payload[0]
    else:
        ext = relations.get(sym.name, frozenset())
        if spec.payload in ext:
            raise MalformedPayload(f"{sym.name} already contains {spec.payload}")
        relations[sym.name] = ext | {spec.payload}
    return FiniteStructure(sig, domain, constants, relations)


def _delete(d: Database, spec: DeletionSpec) -> FiniteStructure:
    s = d.structure
    sym = spec.symbol
    if s.signature.get(sym.name) != sym:
        raise MalformedPayload(f"{sym} is not interpreted in the database")
    for e in spec.drop:
        if e not in s.domain:
            raise MalformedPayload(f"{e} is not in the domain")
    constants = dict(s.constants)
    relations = dict(s.relations)
    if sym.arity == 0:
        target = spec.payload[0]
        old = constants[sym.name]
        if not spec.drop <= {old}:
            raise MalformedPayload(f"only the old referent {old} of {sym.name} may be dropped")
        if target not in s.domain or target in spec.drop:
            raise MalformedPayload(f"{target} is not in the resulting domain")
        if target == old:
            raise MalformedPayload(f"{sym.name} already denotes {target}")
        constants[sym.name] = target
    else:
        ext = relations[sym.name]
        if spec.payload not in ext:
            raise TupleNotPresent(f"{spec.payload} is not in {sym.name}")
        relations[sym.name] = ext - {spec.payload}
    for e in sorted(spec.drop):
        for name, value in constants.items():
            if value == e:
                raise DanglingElement(e, f"constant {name}")
        for name, ext in relations.items():
            if any(e in t for t in ext):
                raise DanglingElement(e, f"relation {name}")
    domain = [e for e in s.domain if e not in spec.drop]
    if not domain:
        raise MalformedPayload("deletion would empty the domain")
    return FiniteStructure(s.signature, domain, constants, relations)


def apply_insertion(d: Database, spec: InsertionSpec) -> Database:
    structure = _insert(d, spec)
    _check_theory(d.theory, structure)
    return Database(structure, d.theory)


def apply_deletion(d: Database, spec: DeletionSpec) -> Database:
    structure = _delete(d, spec)
    _check_theory(d.theory, structure)
    return Database(structure, d.theory)


def apply_op(d: Database, op: Op) -> Database:
    if isinstance(op, InsertionSpec):
        return apply_insertion(d, op)
    if isinstance(op, DeletionSpec):
        return apply_deletion(d, op)
    raise TypeError(f"not an operation: {op!r}")


@dataclass(frozen=True)
class Update:
    """A finite sequence of databases D1..Dn and the operations linking them.

    ``violations`` is empty for validated updates.  Updates built with
    ``check_theory=False`` list ``(step, sentence)`` for every theory
    sentence that some step made false.
    """

    databases: tuple
    ops: tuple = ()
    violations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "databases", tuple(self.databases))
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.databases:
            raise ValueError("an update holds at least one database")
        if len(self.ops) != len(self.databases) - 1:
            raise ValueError("need exactly one operation per step")

    @property
    def base(self) -> Database:
        return self.databases[0]

    @property
    def final(self) -> Database:
        return self.databases[-1]

    @property
    def theory(self) -> tuple:
        return self.base.theory

    @property
    def structures(self) -> tuple:
        return tuple(d.structure for d in self.databases)

    @property
    def validated(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.databases)

    def extend(self, op: Op) -> "Update":
        return Update((*self.databases, apply_op(self.final, op)), (*self.ops, op))


def build_update(base: Database, ops: Iterable[Op], check_theory: bool = True) -> Update:
    """Apply ``ops`` in order starting from ``base``.

    Errors are raised as :class:`StepError` carrying the 1-based step index.
    With ``check_theory=False`` the structural conditions are still enforced
    but theory failures are collected in ``Update.violations`` instead.
    """
    databases = [base]
    done = []
    violations = []
    for step, op in enumerate(ops, start=1):
        current = databases[-1]
        try:
            if isinstance(op, InsertionSpec):
                structure = _insert(current, op)
            elif isinstance(op, DeletionSpec):
                structure = _delete(current, op)
            else:
                raise MalformedPayload(f"not an operation: {op!r}")
            if check_theory:
                _check_theory(current.theory, structure)
            else:
                violations.extend((step, phi) for phi in current.theory if not satisfies(structure, phi))
        except UpdateError as e:
            raise StepError(step, e) from e
        databases.append(Database(structure, current.theory))
        done.append(op)
    return Update(tuple(databases), tuple(done), tuple(violations))


def is_coherent_with(u: Update, f: Formula) -> bool:
    """True iff the last structure of ``u`` satisfies ``f``."""
    final = u.final.structure
    if not symbols_of(f) <= final.signature:
        raise FormulaError(f"{f} is not in the language of the final database")
    return satisfies(final, f)


# --- script format -----------------------------------------------------------

class ScriptError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


_ID = r"[A-Za-z_][A-Za-z0-9_]*"
_EL = r"[A-Za-z0-9_][A-Za-z0-9_']*\*?"
_INSERT_CONST = re.compile(rf"insert\s+({_ID})\s*=\s*({_EL})")
_DELETE_CONST = re.compile(rf"delete\s+({_ID})\s*->\s*({_EL})(?:\s+drop\s+(.+))?")
_REL_OP = re.compile(rf"(insert|delete)\s+({_ID})\s*(\([^()]*\)|{_EL})(?:\s+drop\s+(.+))?")


def _elements(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("("):
        text = text[1:-1]
    return [p.strip() for p in text.split(",") if p.strip()]


def _drop_list(text: str | None) -> frozenset:
    if not text:
        return frozenset()
    return frozenset(p.strip() for p in re.split(r"[,\s]+", text.strip()) if p.strip())


def parse_op(line: str, lineno: int = 1) -> Op:
    line = line.strip()
    try:
        m = _INSERT_CONST.fullmatch(line)
        if m:
            el = m.group(2)
            fresh = {el[:-1]} if el.endswith("*") else set()
            return InsertionSpec(Symbol(m.group(1), 0), (el.rstrip("*"),), fresh)
        m = _DELETE_CONST.fullmatch(line)
        if m:
            if m.group(2).endswith("*"):
                raise ScriptError("deletions cannot introduce fresh elements", lineno)
            return DeletionSpec(Symbol(m.group(1), 0), (m.group(2),), _drop_list(m.group(3)))
        m = _REL_OP.fullmatch(line)
        if m:
            kind, name, body, drop = m.groups()
            items = _elements(body)
            if not items:
                raise ScriptError("empty tuple", lineno)
            if kind == "insert":
                if drop:
                    raise ScriptError("'drop' only applies to deletions", lineno)
                fresh = {e[:-1] for e in items if e.endswith("*")}
                return InsertionSpec(Symbol(name, len(items)), tuple(e.rstrip("*") for e in items), fresh)
            if any(e.endswith("*") for e in items):
                raise ScriptError("deletions cannot introduce fresh elements", lineno)
            return DeletionSpec(Symbol(name, len(items)), tuple(items), _drop_list(drop))
    except (MalformedPayload, ValueError) as e:
        if isinstance(e, ScriptError):
            raise
        raise ScriptError(str(e), lineno) from None
    raise ScriptError(f"cannot read operation {line!r}", lineno)


def parse_script(text: str) -> list[Op]:
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            ops.append(parse_op(line, lineno))
    return ops


def format_op(op: Op) -> str:
    sym = op.symbol
    if isinstance(op, InsertionSpec):
        items = [e + ("*" if e in op.fresh else "") for e in op.payload]
        if sym.arity == 0:
            return f"insert {sym.name} = {items[0]}"
        return f"insert {sym.name} ({', '.join(items)})"
    if sym.arity == 0:
        text = f"delete {sym.name} -> {op.payload[0]}"
    else:
        text = f"delete {sym.name} ({', '.join(op.payload)})"
    if op.drop:
        text += " drop " + ", ".join(sorted(op.drop))
    return text


def format_script(ops: Iterable[Op]) -> str:
    return "".join(format_op(op) + "\n" for op in ops)

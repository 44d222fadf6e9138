"""Finite first-order structures, formulas, automorphisms and type classes.

Surface syntax of formulas::

    formula := quant | iff
    quant   := ("forall" | "exists") var {var} "." formula
    iff     := imp ["<->" imp]        imp := or ["->" imp]
    or      := and {"|" and}          and := unary {"&" unary}
    unary   := "~" unary | quant | "(" formula ")" | "true" | "false" | atom
    atom    := term "=" term | term "!=" term | Rel "(" term {"," term} ")"
             | term Rel term          (infix binary relation, e.g. x<=y, x E y)
    term    := var | Fun "(" term ")" | Const | "@" element

``@a`` is a parameter naming the universe element ``a``.  Free variables are
listed in order of first occurrence unless given explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceError
from .filters import Carrier

MAX_UNIVERSE = 8


# -- signatures and structures ---------------------------------------------------

@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[str, ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        names = [r for r, _ in self.relations] + list(self.functions) + list(self.constants)
        if len(names) != len(set(names)):
            raise DomainError("symbol names must be unique")
        for r, k in self.relations:
            if k < 1:
                raise DomainError(f"relation {r} needs arity at least 1")

    def arity(self, rel: str) -> int:
        for r, k in self.relations:
            if r == rel:
                return k
        raise DomainError(f"unknown relation {rel}")

    @property
    def relation_names(self):
        return tuple(r for r, _ in self.relations)


class FinStructure:
    """Universe plus relations (tuple sets), unary functions (tables), constants."""

    def __init__(
        self,
        universe: Iterable[Hashable],
        relations: dict[str, Iterable[tuple]] | None = None,
        functions: dict[str, dict] | None = None,
        constants: dict[str, Hashable] | None = None,
        *,
        arities: dict[str, int] | None = None,
        name: str = "",
    ):
        self.universe = Carrier(universe)
        self.name = name
        relations = relations or {}
        functions = functions or {}
        constants = constants or {}
        arities = dict(arities or {})
        rels = {}
        for r, tuples in relations.items():
            ts = frozenset(tuple(t) if isinstance(t, (tuple, list)) else (t,) for t in tuples)
            k = arities.get(r)
            if k is None:
                ks = {len(t) for t in ts}
                if len(ks) > 1:
                    raise DomainError(f"relation {r} has tuples of mixed length")
                if not ks:
                    raise DomainError(f"cannot infer arity of empty relation {r}; pass arities")
                k = ks.pop()
            for t in ts:
                if len(t) != k:
                    raise DomainError(f"tuple {t!r} in {r} has wrong length")
                for a in t:
                    if a not in self.universe:
                        raise DomainError(f"{a!r} in {r} is not in the universe")
            rels[r] = ts
            arities[r] = k
        for f, table in functions.items():
            for a in self.universe:
                if a not in table:
                    raise DomainError(f"function {f} is not total (missing {a!r})")
                if table[a] not in self.universe:
                    raise DomainError(f"function {f} leaves the universe at {a!r}")
        for c, a in constants.items():
            if a not in self.universe:
                raise DomainError(f"constant {c} names {a!r}, not in the universe")
        self.relations = rels
        self.functions = {f: {a: t[a] for a in self.universe} for f, t in functions.items()}
        self.constants = dict(constants)
        self.signature = Signature(
            tuple((r, arities[r]) for r in rels), tuple(self.functions), tuple(self.constants)
        )
        n = len(self.universe)
        self._rel_arrays = {}
        for r, ts in rels.items():
            arr = np.zeros((n,) * arities[r], dtype=bool)
            for t in ts:
                arr[tuple(self.universe.index(a) for a in t)] = True
            self._rel_arrays[r] = arr
        self._fun_arrays = {
            f: np.array([self.universe.index(t[a]) for a in self.universe], dtype=np.int64)
            for f, t in self.functions.items()
        }
        self._const_idx = {c: self.universe.index(a) for c, a in self.constants.items()}
        self._tables: dict = {}

    def __len__(self):
        return len(self.universe)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"FinStructure{label}(|M|={len(self)}, {sorted(self.relations)})"

    @property
    def elements(self):
        return self.universe.elements

    def idx(self, a) -> int:
        if a not in self.universe:
            raise DomainError(f"{a!r} is not in the universe")
        return self.universe.index(a)

    def holds(self, rel: str, *args) -> bool:
        return tuple(args) in self.relations[rel]

    # common structures
    @classmethod
    def pure_set(cls, n_or_elements, name="") -> "FinStructure":
        els = list(range(1, n_or_elements + 1)) if isinstance(n_or_elements, int) else list(n_or_elements)
        return cls(els, name=name or f"eq{len(els)}")

    @classmethod
    def chain(cls, n: int, rel: str = "<=", strict: bool = False) -> "FinStructure":
        els = list(range(1, n + 1))
        pairs = [(a, b) for a in els for b in els if (a < b if strict else a <= b)]
        return cls(els, {rel: pairs}, arities={rel: 2}, name=f"chain{n}")

    @classmethod
    def equivalence(cls, classes: Sequence[Sequence], rel: str = "E") -> "FinStructure":
        els = [a for c in classes for a in c]
        pairs = [(a, b) for c in classes for a in c for b in c]
        return cls(els, {rel: pairs}, arities={rel: 2}, name="equiv" + "".join(str(len(c)) for c in classes))

    @classmethod
    def binary(cls, n: int, code: int, rel: str = "R") -> "FinStructure":
        """Binary relation on 1..n whose adjacency bits are read from ``code``."""
        els = list(range(1, n + 1))
        pairs = [(a, b) for k, (a, b) in enumerate(product(els, els)) if code >> k & 1]
        return cls(els, {rel: pairs}, arities={rel: 2}, name=f"{rel}{n}#{code}")


def binary_corpus(max_size: int = 3, rel: str = "R") -> list[FinStructure]:
    """Every binary relation on universes 1..n for n <= max_size (labelled)."""
    out = []
    for n in range(1, max_size + 1):
        for code in range(2 ** (n * n)):
            out.append(FinStructure.binary(n, code, rel))
    return out


# -- formulas ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Param:
    element: Hashable


@dataclass(frozen=True)
class App:
    fun: str
    arg: "Term"


Term = Var | Const | Param | App


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class Not:
    body: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # "&", "|", "->", "<->"
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Quant:
    kind: str  # "forall" | "exists"
    var: str
    body: "Node"


Node = Eq | Rel | Truth | Not | BinOp | Quant


@dataclass(frozen=True)
class Formula:
    """A formula node together with its ordered free variables."""

    node: Node
    free: tuple[str, ...]
    text: str = field(default="", compare=False)

    @property
    def arity(self) -> int:
        return len(self.free)

    def __str__(self):
        return self.text or render(self.node)

    def rename_free(self, new: Sequence[str]) -> "Formula":
        if len(new) != len(self.free):
            raise DomainError("renaming must keep the number of free variables")
        mapping = dict(zip(self.free, new))
        return Formula(substitute(self.node, {v: Var(w) for v, w in mapping.items()}), tuple(new))

    def with_params(self, values: dict[str, Hashable]) -> "Formula":
        """Replace some free variables by parameters."""
        node = substitute(self.node, {v: Param(a) for v, a in values.items()})
        return Formula(node, tuple(v for v in self.free if v not in values))


def term_vars(t) -> list[str]:
    if isinstance(t, Var):
        return [t.name]
    if isinstance(t, App):
        return term_vars(t.arg)
    return []


def free_vars(node) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def add(vs, bound):
        for v in vs:
            if v not in bound and v not in out:
                out.append(v)

    def walk(n, bound):
        if isinstance(n, Eq):
            add(term_vars(n.left) + term_vars(n.right), bound)
        elif isinstance(n, Rel):
            add([v for t in n.args for v in term_vars(t)], bound)
        elif isinstance(n, Not):
            walk(n.body, bound)
        elif isinstance(n, BinOp):
            walk(n.left, bound)
            walk(n.right, bound)
        elif isinstance(n, Quant):
            walk(n.body, bound | {n.var})

    walk(node, frozenset())
    return out


def _fresh(avoid: set, base: str) -> str:
    k = 0
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def substitute(node, sub: dict):
    """Capture-avoiding substitution of terms for free variables."""

    def st(t):
        if isinstance(t, Var):
            return sub.get(t.name, t)
        if isinstance(t, App):
            return App(t.fun, st(t.arg))
        return t

    if isinstance(node, Eq):
        return Eq(st(node.left), st(node.right))
    if isinstance(node, Rel):
        return Rel(node.name, tuple(st(t) for t in node.args))
    if isinstance(node, Truth):
        return node
    if isinstance(node, Not):
        return Not(substitute(node.body, sub))
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute(node.left, sub), substitute(node.right, sub))
    if isinstance(node, Quant):
        inner = {k: v for k, v in sub.items() if k != node.var}
        incoming = {w for t in inner.values() for w in term_vars(t)}
        var, body = node.var, node.body
        if var in incoming:
            new = _fresh(incoming | set(free_vars(body)) | set(inner), var)
            body = substitute(body, {var: Var(new)})
            var = new
        return Quant(node.kind, var, substitute(body, inner))
    raise DomainError(f"not a formula node: {node!r}")


def quantifier_depth(node) -> int:
    if isinstance(node, Not):
        return quantifier_depth(node.body)
    if isinstance(node, BinOp):
        return max(quantifier_depth(node.left), quantifier_depth(node.right))
    if isinstance(node, Quant):
        return 1 + quantifier_depth(node.body)
    return 0


def render_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Param):
        return f"@{t.element}"
    return f"{t.fun}({render_term(t.arg)})"


def render(node) -> str:
    if isinstance(node, Eq):
        return f"{render_term(node.left)}={render_term(node.right)}"
    if isinstance(node, Rel):
        if len(node.args) == 2 and not node.name[0].isalpha():
            return f"{render_term(node.args[0])}{node.name}{render_term(node.args[1])}"
        return f"{node.name}({','.join(render_term(t) for t in node.args)})"
    if isinstance(node, Truth):
        return "true" if node.value else "false"
    if isinstance(node, Not):
        return f"~{render(node.body)}"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    return f"{node.kind} {node.var}. {render(node.body)}"


# -- convenience constructors -------------------------------------------------------

def conj(parts: Sequence) -> Node:
    parts = list(parts)
    if not parts:
        return Truth(True)
    out = parts[0]
    for p in parts[1:]:
        out = BinOp("&", out, p)
    return out


def disj(parts: Sequence) -> Node:
    parts = list(parts)
    if not parts:
        return Truth(False)
    out = parts[0]
    for p in parts[1:]:
        out = BinOp("|", out, p)
    return out


def relation_formula(rel: str, arity: int = 2, names: Sequence[str] = ("x", "y", "z", "w")) -> Formula:
    """``R(x,y,...)`` with free variables in argument order."""
    vs = tuple(names[:arity])
    return Formula(Rel(rel, tuple(Var(v) for v in vs)), vs, text=f"{rel}({','.join(vs)})")


def equality_formula() -> Formula:
    return Formula(Eq(Var("x"), Var("y")), ("x", "y"), text="x=y")


# -- parser ----------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow><->|->)|(?P<neq>!=)|(?P<sym>[<>]=?|[≤≥<>])|(?P<punct>[(),.~&|=@¬∧∨])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*|\d+))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, col0 = 1, 0
    while pos < len(text):
        if text[pos] == "\n":
            line += 1
            col0 = pos + 1
            pos += 1
            continue
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        val = {"¬": "~", "∧": "&", "∨": "|", "≤": "<=", "≥": ">="}.get(val, val)
        tokens.append((kind, val, line, start - col0 + 1))
        pos = m.end()
    tokens.append(("eof", "", line, len(text) - col0 + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature | None, params: Iterable | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = signature
        self.params = None if params is None else {str(a): a for a in params}

    def peek(self, k=0):
        return self.toks[self.i + k]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], tok[3])

    def expect(self, val):
        t = self.next()
        if t[1] != val:
            self.fail(f"expected {val!r}, found {t[1] or 'end of input'!r}", t)
        return t

    def formula(self):
        return self.iff()

    def iff(self):
        left = self.imp()
        if self.peek()[1] == "<->":
            self.next()
            return BinOp("<->", left, self.imp())
        return left

    def imp(self):
        left = self.or_()
        if self.peek()[1] == "->":
            self.next()
            return BinOp("->", left, self.imp())
        return left

    def or_(self):
        left = self.and_()
        while self.peek()[1] == "|":
            self.next()
            left = BinOp("|", left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.peek()[1] == "&":
            self.next()
            left = BinOp("&", left, self.unary())
        return left

    def unary(self):
        t = self.peek()
        if t[1] == "~":
            self.next()
            return Not(self.unary())
        if t[1] in ("forall", "exists"):
            return self.quant()
        if t[1] in ("true", "false"):
            self.next()
            return Truth(t[1] == "true")
        if t[1] == "(":
            # either a parenthesised formula or a term starting with "("?  Terms never do.
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def quant(self):
        kind = self.next()[1]
        names = []
        while self.peek()[0] == "ident" and self.peek()[1] not in ("forall", "exists"):
            names.append(self.next()[1])
        if not names:
            self.fail("quantifier needs a variable")
        self.expect(".")
        body = self.formula()
        for v in reversed(names):
            body = Quant(kind, v, body)
        return body

    def _is_rel(self, name):
        if self.sig is None:
            return True
        return name in self.sig.relation_names

    def atom(self):
        t = self.peek()
        if t[0] == "ident" and self.peek(1)[1] == "(" and self._is_rel(t[1]) and (
            self.sig is not None or not self._looks_like_term_start()
        ):
            name = self.next()[1]
            self.expect("(")
            args = [self.term()]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            if self.sig is not None and self.sig.arity(name) != len(args):
                self.fail(f"relation {name} takes {self.sig.arity(name)} arguments", t)
            return Rel(name, tuple(args))
        left = self.term()
        op = self.peek()
        if op[1] == "=":
            self.next()
            return Eq(left, self.term())
        if op[0] == "neq":
            self.next()
            return Not(Eq(left, self.term()))
        if op[0] == "sym" or (op[0] == "ident" and self._is_rel(op[1]) and op[1] not in ("forall", "exists")):
            if op[0] == "ident" and self.sig is None and self.peek(1)[0] not in ("ident", "punct"):
                self.fail("expected a relation", op)
            self.next()
            name = op[1]
            if self.sig is not None and name not in self.sig.relation_names:
                self.fail(f"unknown relation {name!r}", op)
            return Rel(name, (left, self.term()))
        self.fail(f"expected '=' or a relation after term, found {op[1] or 'end of input'!r}", op)

    def _looks_like_term_start(self):
        # without a signature, "f(x) = y" starts with a function application
        depth = 0
        j = self.i + 1
        while j < len(self.toks):
            v = self.toks[j][1]
            if v == "(":
                depth += 1
            elif v == ")":
                depth -= 1
                if depth == 0:
                    nxt = self.toks[j + 1]
                    return nxt[1] in ("=",) or nxt[0] in ("neq", "sym")
            j += 1
        return False

    def term(self):
        t = self.next()
        if t[1] == "@":
            a = self.next()
            if a[0] != "ident":
                self.fail("expected an element after '@'", a)
            val = a[1]
            if self.params is not None:
                if val not in self.params:
                    self.fail(f"unknown element {val!r}", a)
                return Param(self.params[val])
            return Param(int(val) if val.isdigit() else val)
        if t[0] != "ident":
            self.fail(f"expected a term, found {t[1] or 'end of input'!r}", t)
        name = t[1]
        if self.peek()[1] == "(":
            if self.sig is not None and name not in self.sig.functions:
                self.fail(f"unknown function {name!r}", t)
            self.next()
            arg = self.term()
            self.expect(")")
            return App(name, arg)
        if self.sig is not None and name in self.sig.constants:
            return Const(name)
        if name[0].isdigit():
            self.fail(f"bare element {name!r}; write @{name} for a parameter", t)
        return Var(name)


def parse(
    text: str,
    signature: Signature | None = None,
    free: Sequence[str] | None = None,
    elements: Iterable | None = None,
) -> Formula:
    """Parse a formula.  With a signature, symbol kinds and arities are checked."""
    p = _Parser(text, signature, elements)
    node = p.formula()
    if p.peek()[0] != "eof":
        p.fail(f"unexpected {p.peek()[1]!r}")
    fv = free_vars(node)
    if free is None:
        free = tuple(fv)
    else:
        free = tuple(free)
        missing = [v for v in fv if v not in free]
        if missing:
            raise ParseError(f"free variables {missing} not in the declared list")
    return Formula(node, free, text=text.strip())


# -- evaluation ------------------------------------------------------------------------

def _compile_term(M: FinStructure, t, slots: dict):
    if isinstance(t, Var):
        if t.name not in slots:
            raise DomainError(f"unbound variable {t.name}")
        k = slots[t.name]
        return lambda env: env[k]
    if isinstance(t, Const):
        if t.name not in M._const_idx:
            raise DomainError(f"unknown constant {t.name}")
        c = M._const_idx[t.name]
        return lambda env: c
    if isinstance(t, Param):
        c = M.idx(t.element)
        return lambda env: c
    if t.fun not in M._fun_arrays:
        raise DomainError(f"unknown function {t.fun}")
    table = M._fun_arrays[t.fun]
    inner = _compile_term(M, t.arg, slots)
    return lambda env: table[inner(env)]


def _compile(M: FinStructure, node, slots: dict):
    """Closure env(list of indices) -> bool."""
    if isinstance(node, Truth):
        v = node.value
        return lambda env: v
    if isinstance(node, Eq):
        a, b = _compile_term(M, node.left, slots), _compile_term(M, node.right, slots)
        return lambda env: a(env) == b(env)
    if isinstance(node, Rel):
        if node.name not in M._rel_arrays:
            raise DomainError(f"unknown relation {node.name}")
        arr = M._rel_arrays[node.name]
        if arr.ndim != len(node.args):
            raise DomainError(f"relation {node.name} has arity {arr.ndim}, got {len(node.args)} arguments")
        ts = [_compile_term(M, t, slots) for t in node.args]
        return lambda env: bool(arr[tuple(t(env) for t in ts)])
    if isinstance(node, Not):
        b = _compile(M, node.body, slots)
        return lambda env: not b(env)
    if isinstance(node, BinOp):
        l, r = _compile(M, node.left, slots), _compile(M, node.right, slots)
        if node.op == "&":
            return lambda env: l(env) and r(env)
        if node.op == "|":
            return lambda env: l(env) or r(env)
        if node.op == "->":
            return lambda env: (not l(env)) or r(env)
        return lambda env: l(env) == r(env)
    if isinstance(node, Quant):
        k = len(slots)
        inner = dict(slots)
        inner[node.var] = k
        body = _compile(M, node.body, inner)
        n = len(M)
        if node.kind == "exists":
            def ex(env):
                env = list(env[:k]) + [0]
                for a in range(n):
                    env[k] = a
                    if body(env):
                        return True
                return False
            return ex

        def fa(env):
            env = list(env[:k]) + [0]
            for a in range(n):
                env[k] = a
                if not body(env):
                    return False
            return True
        return fa
    raise DomainError(f"not a formula node: {node!r}")


def eval_formula(M: FinStructure, phi: Formula, assignment: Sequence) -> bool:
    """Tarskian satisfaction; ``assignment`` lists universe elements for ``phi.free``."""
    if len(assignment) != phi.arity:
        raise DomainError(f"formula has {phi.arity} free variables, got {len(assignment)} values")
    env = [M.idx(a) for a in assignment]
    fn = _compile(M, phi.node, {v: i for i, v in enumerate(phi.free)})
    return fn(env)


def truth_table(M: FinStructure, phi: Formula) -> np.ndarray:
    """Boolean array indexed by universe positions of the free variables (cached)."""
    key = (phi.node, phi.free)
    tab = M._tables.get(key)
    if tab is None:
        fn = _compile(M, phi.node, {v: i for i, v in enumerate(phi.free)})
        n = len(M)
        tab = np.zeros((n,) * phi.arity, dtype=bool)
        for env in product(range(n), repeat=phi.arity):
            tab[env] = fn(list(env))
        M._tables[key] = tab
    return tab


# -- automorphisms and orbits -------------------------------------------------------

def automorphisms(M: FinStructure, fixed: Iterable = (), *, guard_override: bool = False) -> list[tuple[int, ...]]:
    """Automorphisms fixing ``fixed`` pointwise, as position tuples (perm[i] = image of i)."""
    n = len(M)
    if n > MAX_UNIVERSE and not guard_override:
        raise ResourceError(f"universe of size {n} exceeds the guard of {MAX_UNIVERSE}", ("universe", MAX_UNIVERSE))
    fixed_idx = {M.idx(a) for a in fixed} | set(M._const_idx.values())
    rels = [(arr, [tuple(M.idx(a) for a in t) for t in M.relations[r]]) for r, arr in M._rel_arrays.items()]
    # each relation tuple becomes checkable once its largest position is assigned
    checks: list[list] = [[] for _ in range(n)]
    for arr, tuples in rels:
        for t in tuples:
            checks[max(t)].append((arr, t))
    # arity-wise counts give a cheap invariant per point
    invariants = []
    for a in range(n):
        inv = []
        for arr, _ in rels:
            for axis in range(arr.ndim):
                inv.append(int(np.take(arr, a, axis=axis).sum()))
            if arr.ndim >= 2:
                diag = arr
                for _ in range(arr.ndim - 1):
                    diag = np.diagonal(diag, axis1=0, axis2=1) if diag.ndim > 1 else diag
                inv.append(bool(diag[a]) if diag.ndim == 1 else 0)
        invariants.append(tuple(inv))
    funs = list(M._fun_arrays.values())
    perm = [-1] * n
    used = [False] * n
    out = []

    def consistent(i):
        for arr, t in checks[i]:
            if not arr[tuple(perm[x] for x in t)]:
                return False
        for f in funs:
            # f(perm(a)) = perm(f(a)) whenever both sides are known
            for a in range(i + 1):
                fa = f[a]
                if fa <= i and f[perm[a]] != perm[fa]:
                    return False
        return True

    def rec(i):
        if i == n:
            out.append(tuple(perm))
            return
        options = [i] if i in fixed_idx else range(n)
        for b in options:
            if used[b] or invariants[b] != invariants[i]:
                continue
            perm[i] = b
            used[b] = True
            if consistent(i):
                rec(i + 1)
            used[b] = False
            perm[i] = -1

    rec(0)
    return out


def automorphisms_labelled(M: FinStructure, fixed: Iterable = ()) -> list[dict]:
    els = M.elements
    return [{els[i]: els[p[i]] for i in range(len(els))} for p in automorphisms(M, fixed)]


def type_orbits(M: FinStructure, A: Iterable = (), n: int = 1) -> list[frozenset]:
    """Orbits of Aut(M/A) on n-tuples, each a frozenset of labelled tuples, in first-seen order."""
    A = list(A)
    for a in A:
        M.idx(a)
    group = automorphisms(M, A)
    els = M.elements
    seen = {}
    orbits = []
    for t in product(range(len(M)), repeat=n):
        if t in seen:
            continue
        orb = {tuple(g[x] for x in t) for g in group}
        for s in orb:
            seen[s] = len(orbits)
        orbits.append(frozenset(tuple(els[x] for x in s) for s in orb))
    return orbits


def orbit_labels(M: FinStructure, A: Iterable = (), n: int = 1) -> dict:
    """Map each labelled n-tuple to its orbit number."""
    return {t: k for k, orb in enumerate(type_orbits(M, A, n)) for t in orb}


# -- depth-bounded types ------------------------------------------------------------

def atomic_key(M: FinStructure, seeds: Sequence[int]):
    """Isomorphism invariant of the substructure generated by ``seeds`` (positions), seeds named."""
    ids: dict[int, int] = {}
    order: list[int] = []

    def intern(a):
        if a not in ids:
            ids[a] = len(order)
            order.append(a)
        return ids[a]

    seed_ids = tuple(intern(a) for a in list(seeds) + list(M._const_idx.values()))
    funs = list(M._fun_arrays.values())
    k = 0
    ftab = []
    while k < len(order):
        a = order[k]
        ftab.append(tuple(intern(int(f[a])) for f in funs))
        k += 1
    rels = []
    for arr in M._rel_arrays.values():
        sub = arr[np.ix_(*([order] * arr.ndim))]
        rels.append(sub.tobytes())
    return (seed_ids, tuple(ftab), tuple(rels))


def qtype_classes(M: FinStructure, r: int, q: int, A: Sequence = ()) -> np.ndarray:
    """Class id of every r-tuple (flattened C-order over positions) for depth-q formulas over A.

    Two tuples get the same id iff they satisfy the same formulas of quantifier
    depth <= q with parameters from A (Ehrenfeucht-Fraisse refinement).  Ids
    are numbered in order of first appearance.
    """
    key = ("qtype", r, q, tuple(A))
    if key not in M._tables:
        n = len(M)
        if n ** (r + q) > 2_000_000:
            raise ResourceError(f"{n}^{r + q} tuples needed for depth-{q} types", ("qdepth", q))
        Apos = [M.idx(a) for a in A]
        memo: dict = {}

        def cls(L, d):
            if (L, d) in memo:
                return memo[(L, d)]
            ids: dict = {}
            out = np.empty(n ** L, dtype=np.int64)
            if d == 0:
                for k, t in enumerate(product(range(n), repeat=L)):
                    out[k] = ids.setdefault(atomic_key(M, list(t) + Apos), len(ids))
            else:
                own = cls(L, d - 1)
                ext = cls(L + 1, d - 1).reshape(n ** L, n) if n else np.zeros((0, 0), dtype=np.int64)
                for k in range(n ** L):
                    out[k] = ids.setdefault((int(own[k]), frozenset(ext[k].tolist())), len(ids))
            memo[(L, d)] = out
            return out

        M._tables[key] = cls(r, q)
    return M._tables[key]

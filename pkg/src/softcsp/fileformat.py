"""Line-oriented text format for instances.

Grammar (one directive per line, ``#`` comments, blank lines ignored)::

    vcsp <n>                      header; variables are 1-based in files
    dom <i> <d_i>                 domain size; values run 0 .. d_i - 1
    unary <i> <a> <cost>
    binary <i> <j> <a> <b> <cost>     i != j; stored per unordered scope

    noc <n>                       header for laminar-objective instances
    dom <i> <d_i>
    set <id> (<i>,<a>) (<i>,<a>) ...
    fn <id> <f0> <f1> ... <fs>

Costs are decimal integers, ``p/q`` fractions, or ``inf``.  Unspecified
costs are 0.  A duplicate (scope, tuple) with a conflicting cost is an
error.  Serialization is canonical: parsing its own output reproduces the
structure bit-for-bit.
"""

from __future__ import annotations

import re

from .costs import Cost, ZERO
from .errors import ParseError
from .instance import VcspInstance
from .noc import NocInstance

_PAIR_RE = re.compile(r"^\((\d+),(\d+)\)$")


def _parse_cost(token: str, line: int) -> Cost:
    try:
        return Cost.parse(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(line, f"bad cost token {token!r}: {exc}") from None


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line, f"bad {what} {token!r}") from None


def parse(text: str) -> VcspInstance | NocInstance:
    """Parse instance text; raises ParseError with a line number on failure."""
    kind: str | None = None
    n = 0
    dom: dict[int, int] = {}
    unary: dict[tuple[int, int], Cost] = {}
    binary: dict[tuple[int, int, int, int], Cost] = {}
    sets: dict[int, list[tuple[int, int]]] = {}
    fns: dict[int, tuple[Cost, ...]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive = tokens[0]

        if directive in ("vcsp", "noc"):
            if kind is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tokens) != 2:
                raise ParseError(lineno, f"usage: {directive} <n>")
            kind = directive
            n = _parse_int(tokens[1], lineno, "variable count")
            if n < 0:
                raise ParseError(lineno, "variable count must be non-negative")
            continue
        if kind is None:
            raise ParseError(lineno, "file must start with 'vcsp <n>' or 'noc <n>'")

        if directive == "dom":
            if len(tokens) != 3:
                raise ParseError(lineno, "usage: dom <i> <d_i>")
            i = _parse_int(tokens[1], lineno, "variable")
            d = _parse_int(tokens[2], lineno, "domain size")
            if not (1 <= i <= n):
                raise ParseError(lineno, f"variable {i} out of range 1..{n}")
            if d < 1:
                raise ParseError(lineno, "domain size must be positive")
            if i in dom:
                raise ParseError(lineno, f"duplicate dom line for variable {i}")
            dom[i] = d
        elif directive == "unary" and kind == "vcsp":
            if len(tokens) != 4:
                raise ParseError(lineno, "usage: unary <i> <a> <cost>")
            i = _parse_int(tokens[1], lineno, "variable")
            a = _parse_int(tokens[2], lineno, "value")
            cost = _parse_cost(tokens[3], lineno)
            _check_pair(lineno, n, dom, i, a)
            key = (i - 1, a)
            if key in unary and unary[key] != cost:
                raise ParseError(lineno, f"conflicting unary cost for variable {i} value {a}")
            unary[key] = cost
        elif directive == "binary" and kind == "vcsp":
            if len(tokens) != 6:
                raise ParseError(lineno, "usage: binary <i> <j> <a> <b> <cost>")
            i = _parse_int(tokens[1], lineno, "variable")
            j = _parse_int(tokens[2], lineno, "variable")
            a = _parse_int(tokens[3], lineno, "value")
            b = _parse_int(tokens[4], lineno, "value")
            cost = _parse_cost(tokens[5], lineno)
            if i == j:
                raise ParseError(lineno, "binary scope must join two distinct variables")
            _check_pair(lineno, n, dom, i, a)
            _check_pair(lineno, n, dom, j, b)
            if i > j:
                i, j, a, b = j, i, b, a
            key = (i - 1, j - 1, a, b)
            if key in binary and binary[key] != cost:
                raise ParseError(
                    lineno, f"conflicting binary cost for scope ({i},{j}) tuple ({a},{b})"
                )
            binary[key] = cost
        elif directive == "set" and kind == "noc":
            if len(tokens) < 2:
                raise ParseError(lineno, "usage: set <id> (<i>,<a>) ...")
            sid = _parse_int(tokens[1], lineno, "set id")
            if sid in sets:
                raise ParseError(lineno, f"duplicate set id {sid}")
            members = []
            for tok in tokens[2:]:
                m = _PAIR_RE.match(tok)
                if not m:
                    raise ParseError(lineno, f"bad member token {tok!r}, expected (<i>,<a>)")
                i, a = int(m.group(1)), int(m.group(2))
                _check_pair(lineno, n, dom, i, a)
                members.append((i - 1, a))
            sets[sid] = members
        elif directive == "fn" and kind == "noc":
            if len(tokens) < 3:
                raise ParseError(lineno, "usage: fn <id> <f0> <f1> ...")
            sid = _parse_int(tokens[1], lineno, "set id")
            if sid in fns:
                raise ParseError(lineno, f"duplicate fn line for set {sid}")
            fns[sid] = tuple(_parse_cost(t, lineno) for t in tokens[2:])
        else:
            raise ParseError(lineno, f"unknown directive {directive!r} for a {kind} file")

    if kind is None:
        raise ParseError(1, "empty input: expected 'vcsp <n>' or 'noc <n>'")
    missing = [i for i in range(1, n + 1) if i not in dom]
    if missing:
        raise ParseError(1, f"missing dom line for variable(s) {missing}")
    domains = [dom[i] for i in range(1, n + 1)]

    if kind == "vcsp":
        return VcspInstance(domains, unary, binary)

    if set(sets) != set(fns):
        raise ParseError(1, "every set needs exactly one fn line and vice versa")
    ordered = sorted(sets)
    member_sets = tuple(frozenset(sets[sid]) for sid in ordered)
    functions = tuple(fns[sid] for sid in ordered)
    for sid, members, fn in zip(ordered, member_sets, functions):
        want = len({i for i, _ in members}) + 1
        if len(fn) != want:
            raise ParseError(
                1, f"set {sid} spans {want - 1} variables; fn must list {want} values"
            )
    return NocInstance(domains, member_sets, functions)


def _check_pair(lineno: int, n: int, dom: dict[int, int], i: int, a: int) -> None:
    if not (1 <= i <= n):
        raise ParseError(lineno, f"variable {i} out of range 1..{n}")
    if i not in dom:
        raise ParseError(lineno, f"variable {i} used before its dom line")
    if not (0 <= a < dom[i]):
        raise ParseError(lineno, f"value {a} out of range for variable {i}")


def serialize(obj: VcspInstance | NocInstance) -> str:
    """Canonical text form; two parses of the same file serialize identically."""
    if isinstance(obj, VcspInstance):
        lines = [f"vcsp {obj.n}"]
        for i, d in enumerate(obj.domains):
            lines.append(f"dom {i + 1} {d}")
        for (i, a), c in sorted(obj.unary_items()):
            lines.append(f"unary {i + 1} {a} {c}")
        for (i, j, a, b), c in sorted(obj.binary_items()):
            lines.append(f"binary {i + 1} {j + 1} {a} {b} {c}")
        return "\n".join(lines) + "\n"
    lines = [f"noc {obj.n}"]
    for i, d in enumerate(obj.domains):
        lines.append(f"dom {i + 1} {d}")
    order = sorted(range(len(obj.sets)), key=lambda k: (sorted(obj.sets[k]), k))
    for sid, k in enumerate(order, start=1):
        members = " ".join(f"({i + 1},{a})" for i, a in sorted(obj.sets[k]))
        lines.append(f"set {sid} {members}".rstrip())
    for sid, k in enumerate(order, start=1):
        values = " ".join(str(c) for c in obj.functions[k])
        lines.append(f"fn {sid} {values}")
    return "\n".join(lines) + "\n"


def parse_file(path: str) -> VcspInstance | NocInstance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())

"""Command-line interface: check, solve, generate, export-dot.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 infeasible optimum,
4 requested method inapplicable.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .costs import Cost, INFINITY
from .errors import (
    JwpPreconditionError,
    NotCrispError,
    ParseError,
    SoftcspError,
    TooLargeError,
)
from .fileformat import parse_file, serialize
from .flows import build_network, network_dot, solve_flow
from .hierarchy import extract_clique_hierarchy
from .instance import VcspInstance
from .jwp import check_jwp, eliminate_z, first_z_configuration
from .microstructure import (
    PATTERN_LIBRARY,
    build_microstructure,
    check_btp,
    find_induced_substructure,
    microstructure_dot,
)
from .models import (
    SchedulingSpec,
    gen_btp_independent_set,
    gen_courses,
    gen_office,
    gen_random_jwp,
    gen_scheduling,
    gen_softalldiff,
)
from .mwis import solve_via_mwis
from .noc import NocInstance, noc_brute_force, noc_network, solve_noc, validate_noc
from .oracle import brute_force_solve


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _csv_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _csv_costs(text: str) -> list[str]:
    return [tok.strip() for tok in text.replace(";", ",").split(",") if tok.strip()]


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_assignment(x) -> str:
    return " ".join(f"{i + 1}={a}" for i, a in enumerate(x))


# -- check ----------------------------------------------------------------------


def cmd_check(args) -> int:
    inst = parse_file(args.file)
    if isinstance(inst, NocInstance):
        problem = validate_noc(inst)
        print(f"noc: {'valid' if problem is None else 'invalid'}")
        if problem is not None:
            print(f"violation: {problem}")
        return 0

    witness = check_jwp(inst)
    print(f"jwp: {'yes' if witness is None else 'no'}")
    if witness is not None:
        i, j, k = (v + 1 for v in witness.variables)
        a, b, c = witness.values
        cij, cik, cjk = witness.costs
        print(
            f"jwp_witness: i={i} j={j} k={k} a={a} b={b} c={c} "
            f"cij={cij} cik={cik} cjk={cjk}"
        )
    z = first_z_configuration(inst)
    print(f"zfree: {'yes' if z is None else 'no'}")
    if z is not None:
        print(
            f"z_configuration: i={z.var_i + 1} j={z.var_j + 1} "
            f"a={z.a} b={z.b} c={z.c} d={z.d}"
        )
    if args.order:
        order = [v - 1 for v in _csv_ints(args.order)]
    else:
        order = list(range(inst.n))
    label = ",".join(str(v + 1) for v in order)
    violation = check_btp(inst, order)
    print(f"btp({label}): {'yes' if violation is None else 'no'}")
    if violation is not None:
        pairs = " ".join(f"({i + 1},{a})" for i, a in violation.pairs)
        print(f"btp_violation: {pairs}")
    if args.patterns:
        host_ms = build_microstructure(inst, complement=False, crisp_only=True)
        host_comp = build_microstructure(inst, complement=True, crisp_only=True)
        for name in (tok.strip() for tok in args.patterns.split(",")):
            if name not in PATTERN_LIBRARY:
                print(f"pattern {name}: unknown", file=sys.stderr)
                return 1
            pattern, wants_complement = PATTERN_LIBRARY[name]
            host = host_comp if wants_complement else host_ms
            hit = find_induced_substructure(host, pattern)
            print(f"pattern {name}: {'found' if hit is not None else 'absent'}")
    return 0


# -- solve ----------------------------------------------------------------------


def _report(method: str, x, cost: Cost) -> int:
    print(f"method: {method}")
    print(f"cost: {cost}")
    if x is not None:
        print(f"assignment: {_fmt_assignment(x)}")
    return 3 if cost.is_infinite else 0


def cmd_solve(args) -> int:
    inst = parse_file(args.file)
    method = args.method

    if isinstance(inst, NocInstance):
        if method in ("auto", "noc"):
            x, cost = solve_noc(inst)
            return _report("noc", x, cost)
        if method == "brute":
            x, cost = noc_brute_force(inst, args.max_brute)
            return _report("brute", x, cost)
        print(f"method {method} does not apply to a laminar-objective file", file=sys.stderr)
        return 4

    if method == "noc":
        print("method noc requires a noc file", file=sys.stderr)
        return 4
    if method == "flow":
        try:
            x, cost = solve_flow(inst)
        except JwpPreconditionError as exc:
            print(f"flow method inapplicable: {exc}", file=sys.stderr)
            return 4
        return _report("flow", x, cost)
    if method == "mwis":
        try:
            x, cost = solve_via_mwis(inst)
        except (NotCrispError, TooLargeError) as exc:
            print(f"mwis method inapplicable: {exc}", file=sys.stderr)
            return 4
        return _report("mwis", x, cost)
    if method == "brute":
        try:
            x, cost = brute_force_solve(inst, args.max_brute)
        except TooLargeError as exc:
            print(f"brute method inapplicable: {exc}", file=sys.stderr)
            return 4
        return _report("brute", x, cost)

    # auto: prefer the flow route whenever the instance qualifies
    if check_jwp(inst) is None:
        x, cost = solve_flow(inst)
        return _report("flow", x, cost)
    if inst.is_binary_crisp():
        try:
            x, cost = solve_via_mwis(inst)
            return _report("mwis", x, cost)
        except TooLargeError:
            pass
    try:
        x, cost = brute_force_solve(inst, args.max_brute)
    except TooLargeError as exc:
        print(f"no applicable method within budget: {exc}", file=sys.stderr)
        return 4
    return _report("brute", x, cost)


# -- generate -------------------------------------------------------------------


def cmd_generate(args) -> int:
    model = args.model
    if model == "softalldiff":
        domains = 1 if args.shared else args.d
        inst = gen_softalldiff(args.n, domains, args.variant)
    elif model == "scheduling":
        tokens = _csv_costs(args.lengths)
        if len(tokens) != args.jobs * args.machines:
            print(
                f"--lengths needs {args.jobs * args.machines} entries, got {len(tokens)}",
                file=sys.stderr,
            )
            return 1
        rows = [
            tuple(Cost.parse(t) for t in tokens[j * args.machines : (j + 1) * args.machines])
            for j in range(args.jobs)
        ]
        inst = gen_scheduling(SchedulingSpec(tuple(rows)))
    elif model == "btp-mis":
        edges = []
        if args.edges:
            for tok in args.edges.split(","):
                u, w = tok.split("-")
                edges.append((int(u), int(w)))
        inst = gen_btp_independent_set(args.vertices, edges)
    elif model == "random-jwp":
        levels = [Cost.parse(t) for t in _csv_costs(args.levels)]
        inst = gen_random_jwp(args.n, args.d, levels, args.seed)
    elif model == "office":
        groups = []
        if args.groups:
            for tok in args.groups.split(","):
                groups.append([int(p) for p in tok.split("-")])
        inst = gen_office(args.staff, _csv_ints(args.capacities), groups)
    elif model == "courses":
        inst = gen_courses(
            _csv_ints(args.slots),
            args.teachers,
            _csv_ints(args.capacities),
            [Cost.parse(t) for t in _csv_costs(args.overtime)],
        )
    else:  # unreachable: argparse restricts choices
        print(f"unknown model {model!r}", file=sys.stderr)
        return 1
    _emit(serialize(inst), args.output)
    return 0


# -- export-dot -----------------------------------------------------------------


def cmd_export_dot(args) -> int:
    inst = parse_file(args.file)
    if args.network:
        if isinstance(inst, NocInstance):
            net, _ = noc_network(inst)
        else:
            if check_jwp(inst) is not None:
                print("network export needs a joint-winner instance", file=sys.stderr)
                return 4
            reduced, _ = eliminate_z(inst)
            net = build_network(reduced, extract_clique_hierarchy(reduced))
        _emit(network_dot(net), args.output)
        return 0
    if isinstance(inst, NocInstance):
        print("laminar-objective files admit only --network export", file=sys.stderr)
        return 1
    g = build_microstructure(inst, complement=args.complement, crisp_only=args.complement)
    _emit(microstructure_dot(g), args.output)
    return 0


# -- wiring ---------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="softcsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify an instance file")
    p.add_argument("file")
    p.add_argument("--order", help="1-based variable ordering for the btp check, e.g. 2,1,3")
    p.add_argument("--patterns", help=f"comma list from: {', '.join(sorted(PATTERN_LIBRARY))}")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    p.add_argument(
        "--method",
        choices=("auto", "flow", "noc", "brute", "mwis"),
        default="auto",
    )
    p.add_argument("--max-brute", type=int, default=10**6)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="emit a model instance file")
    p.add_argument(
        "model",
        choices=("softalldiff", "scheduling", "btp-mis", "random-jwp", "office", "courses"),
    )
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--shared", action="store_true", help="softalldiff: one shared value")
    p.add_argument("--variant", choices=("graph", "variable"), default="graph")
    p.add_argument("--jobs", type=int, default=2)
    p.add_argument("--machines", type=int, default=1)
    p.add_argument("--lengths", default="1,1", help="row-major job x machine lengths")
    p.add_argument("--vertices", type=int, default=3)
    p.add_argument("--edges", default="", help="btp-mis: comma list of u-w pairs")
    p.add_argument("--levels", default="1,2", help="random-jwp: increasing cost levels")
    p.add_argument("--staff", type=int, default=2)
    p.add_argument("--capacities", default="1,1")
    p.add_argument("--groups", default="", help="office: comma list of dash-joined members")
    p.add_argument("--slots", default="1,1", help="courses: slot id per course")
    p.add_argument("--teachers", type=int, default=2)
    p.add_argument("--overtime", default="1,1")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("export-dot", help="emit graphviz for a file")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--complement", action="store_true")
    group.add_argument("--network", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except SoftcspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())

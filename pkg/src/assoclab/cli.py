"""Command-line front end: h-vectors, claim verification, conjecture checks and tables.

Exit codes: 0 pass, 1 claim failed (witnesses in the report), 2 usage or input
error, 3 refused by the size budget, 4 conjecture counterexample found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import bijections, conjectures
from .dyck import catalan_conv
from .graph import Graph, GraphError, graph_face_vector, graph_from_json, graph_from_spec
from .polynomial import (
    IntPolynomial,
    check_H_recurrence,
    count_real_roots,
    gamma_from_h,
    h_from_f,
    H_from_recurrence,
    is_real_rooted,
    is_symmetric,
)
from .poset import Poset, PosetError, face_vector, poset_from_json, poset_from_spec
from .stacksort import (
    branden_gamma_check,
    gen_S_nk,
    happy_phi,
    happy_phi_inverse,
    identity,
    inorder_read,
    inorder_tree,
    preimage,
    preimage_descent_polynomial,
    preimage_S_nk,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_CONJECTURE = 0, 1, 2, 3, 4
DEFAULT_BUDGET = 9
SCHEMA = 1


class BudgetExceeded(Exception):
    def __init__(self, size: int, budget: int, estimate: Optional[int] = None):
        self.size, self.budget, self.estimate = size, budget, estimate
        msg = f"size {size} exceeds budget {budget}"
        if estimate is not None:
            msg += f" (estimated {estimate} maximal objects)"
        super().__init__(msg + "; raise --budget to run anyway")


def _guard(size: int, budget: int, estimate: Optional[int] = None) -> None:
    if size > budget:
        raise BudgetExceeded(size, budget, estimate)


def _a_estimate(n: int, k: int) -> int:
    return math.factorial(k) * catalan_conv(n, k)


# ---------------------------------------------------------------------------
# input


_GRAPH_KINDS = ("lollipop", "path", "complete")


def load_input(spec: str) -> Poset | Graph:
    """A builtin ``kind:args`` string, or a JSON file holding a poset or a graph."""
    kind = spec.partition(":")[0]
    if kind in _GRAPH_KINDS:
        return graph_from_spec(spec)
    path = Path(spec)
    if path.is_file():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise PosetError(f"{spec}: invalid JSON ({e})") from None
        if "vertices" in data:
            return graph_from_json(data)
        if "elements" in data:
            return poset_from_json(data)
        raise PosetError(f"{spec}: expected an 'elements' (poset) or 'vertices' (graph) key")
    return poset_from_spec(spec)


def _parse_subset(P: Poset, text: str) -> list[int]:
    out = []
    for tok in (t.strip() for t in text.split(",") if t.strip()):
        if P.names and tok in P.names:
            out.append(P.names.index(tok))
        else:
            try:
                out.append(int(tok))
            except ValueError:
                raise PosetError(f"unknown element {tok!r}") from None
        if not 0 <= out[-1] < P.n:
            raise PosetError(f"element {tok!r} out of range")
    if not out:
        raise PosetError("empty subset")
    return out


# ---------------------------------------------------------------------------
# commands; each returns (report dict, exit code)


def _poly(p: IntPolynomial) -> list:
    return p.to_json()


def cmd_hvec(args) -> tuple[dict, int]:
    obj = load_input(args.input)
    if isinstance(obj, Poset):
        _guard(obj.n - 1, args.budget)
        fv = face_vector(obj)
        kind = "poset"
    else:
        _guard(obj.n_vertices, args.budget)
        fv = graph_face_vector(obj)
        kind = "graph"
    h = h_from_f(fv)
    rep: dict[str, Any] = {"schema": SCHEMA, "input": args.input, "kind": kind, "dim": fv.dim}
    rep["f"] = list(fv.counts)
    rep["h"] = _poly(h)
    if is_symmetric(h, fv.dim):
        rep["gamma"] = _poly(gamma_from_h(h, fv.dim))
    else:
        rep["gamma"] = None
        rep["note"] = "h is not symmetric; gamma omitted"
    rep["real_roots"] = count_real_roots(h)
    rep["real_rooted"] = is_real_rooted(h)
    return rep, EXIT_PASS


def _need(args, *names: str) -> list[int]:
    vals = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise PosetError(f"claim {args.claim!r} needs argument {name}")
        vals.append(v)
    return vals


def _verify_main(args) -> bijections.Report:
    n, k = _need(args, "n", "k")
    _guard(n + k, args.budget, _a_estimate(n, k))
    return bijections.main_theorem_check(n, k)


def _verify_size(args) -> bijections.Report:
    n, k = _need(args, "n", "k")
    _guard(n + k, args.budget, _a_estimate(n, k))
    got = len(preimage_S_nk(n, k))
    want = _a_estimate(n, k)
    return bijections.Report("preimage-size", {"n": n, "k": k}, got, want, got == want)


def _verify_bij(which: str) -> Callable:
    def run(args) -> bijections.Report:
        n, k = _need(args, "n", "k")
        _guard(n + k, args.budget, _a_estimate(n, k))
        return bijections.verify_round_trip(which, n, k)

    return run


def _verify_branden(args) -> bijections.Report:
    n, k = _need(args, "n", "k")
    _guard(n + k, args.budget, _a_estimate(n, k))
    rep = branden_gamma_check(gen_S_nk(n, k), n + k)
    d = n + k - 1
    gamma = gamma_from_h(rep.lhs, d)
    ok = rep.holds and rep.gamma_integral_nonnegative and IntPolynomial(rep.gamma) == gamma
    return bijections.Report(
        "branden-gamma",
        {"n": n, "k": k},
        rep.lhs,
        rep.rhs,
        ok,
        [] if ok else [{"gamma_from_peaks": [str(g) for g in rep.gamma], "gamma_from_h": _poly(gamma)}],
        {"gamma": _poly(gamma), "peak_counts": list(rep.peak_counts)},
    )


def _verify_happy(args) -> bijections.Report:
    (n,) = _need(args, "n")
    if n < 3:
        raise PosetError("happy needs n >= 3")
    _guard(n, args.budget)
    dom = [w for w in preimage(identity(n)) if w[0] < n and w[-1] < n]
    target = (2, 1) + tuple(range(3, n + 1))
    tgt = set(preimage(target))
    img, bad = set(), []
    for w in dom:
        T = inorder_tree(w)
        U = happy_phi(T)
        if happy_phi_inverse(U) != T or U.right_edges() != T.right_edges():
            bad.append({"source": list(w), "image": list(inorder_read(U))})
        img.add(inorder_read(U))
    ok = not bad and img == tgt and len(dom) == len(tgt)
    return bijections.Report("happy-coincidence", {"n": n}, len(dom), len(tgt), ok, bad[:5])


def _verify_recurrence(args) -> bijections.Report:
    (n,) = _need(args, "n")
    _guard(n + 2, args.budget, _a_estimate(n, 2))
    H = IntPolynomial()
    for t in gen_S_nk(n, 2):
        H = H + preimage_descent_polynomial(t)
    rhs = H_from_recurrence(n)
    return bijections.Report("H-recurrence", {"n": n}, H, rhs, check_H_recurrence(n, H))


def _verify_realroot(args) -> bijections.Report:
    # polynomial-time via the recurrence, so the budget does not apply
    (n,) = _need(args, "n")
    H = H_from_recurrence(n)
    roots = count_real_roots(H)
    ok = roots == n + 1 and is_real_rooted(H)
    return bijections.Report("H-real-rooted", {"n": n}, roots, n + 1, ok, [] if ok else [{"H": _poly(H)}], {"H": H})


VERIFIERS: dict[str, Callable] = {
    "main": _verify_main,
    "size": _verify_size,
    "f-bij": _verify_bij("f"),
    "g-bij": _verify_bij("g"),
    "branden": _verify_branden,
    "happy": _verify_happy,
    "recurrence": _verify_recurrence,
    "realroot": _verify_realroot,
}


def cmd_verify(args) -> tuple[dict, int]:
    rep = VERIFIERS[args.claim](args)
    return rep.to_json(), EXIT_PASS if rep.equal else EXIT_FAIL


def cmd_conjecture(args) -> tuple[dict, int]:
    results = []
    if args.which == "corpus":
        _guard(args.max_size, args.budget)
        for e in conjectures.corpus(args.max_size):
            for name, res in (
                ("c2", conjectures.check_c2(e.poset, e.bottom_pair())),
                ("chain-n", conjectures.check_chain_n(e.poset, e.chain_mask)),
            ):
                results.append({"poset": e.name, **res.to_json()})
    else:
        if args.input is None or args.subset is None:
            raise PosetError(f"conjecture {args.which} needs INPUT and --subset")
        P = load_input(args.input)
        if not isinstance(P, Poset):
            raise PosetError("conjectures apply to posets")
        _guard(P.n, args.budget)
        S = _parse_subset(P, args.subset)
        check = conjectures.check_c2 if args.which == "c2" else conjectures.check_chain_n
        results.append({"poset": args.input, **check(P, S).to_json()})
    ok = all(r["conjecture_status"] == "supported" for r in results)
    rep = {
        "schema": SCHEMA,
        "claim": f"conjecture-{args.which}",
        "conjecture_status": "supported" if ok else "counterexample",
        "instances": len(results),
        "results": results,
    }
    return rep, EXIT_PASS if ok else EXIT_CONJECTURE


def table_rows(max_sum: int) -> list[dict]:
    """One row per (n, k) with n >= 1, k >= 0, n + k <= max_sum."""
    rows = []
    for s in range(1, max_sum + 1):
        for n in range(s, 0, -1):
            k = s - n
            main = bijections.main_theorem_check(n, k)
            h = main.lhs
            d = n + k - 1
            count = len(preimage_S_nk(n, k))
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "h": _poly(h),
                    "gamma": _poly(gamma_from_h(h, d)),
                    "preimages": count,
                    "formula": _a_estimate(n, k),
                    "real_rooted": is_real_rooted(h),
                    "checks_pass": bool(main.equal and count == _a_estimate(n, k)),
                }
            )
    return rows


def cmd_table(args) -> tuple[dict, int]:
    _guard(args.max_sum, args.budget)
    rows = table_rows(args.max_sum)
    ok = all(r["checks_pass"] for r in rows)
    return {"schema": SCHEMA, "table": "A-family", "max_sum": args.max_sum, "rows": rows}, EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _flatten(rep: dict) -> tuple[list[str], list[dict]]:
    for key in ("rows", "results"):
        if key in rep and isinstance(rep[key], list):
            rows = rep[key]
            cols = sorted({c for r in rows for c in r}) if rows else []
            return cols, rows
    return sorted(rep), [rep]


def render(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, sort_keys=True, indent=2) + "\n"
    cols, rows = _flatten(rep)
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(cols)
        for r in rows:
            wr.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue()
    lines = []
    if rows is not None and len(rows) == 1 and rows[0] is rep:
        width = max((len(c) for c in cols), default=0)
        lines += [f"{c.ljust(width)}  {_cell(rep[c])}" for c in cols]
    else:
        head = {k: v for k, v in rep.items() if k not in ("rows", "results")}
        lines += [f"{k}: {_cell(v)}" for k, v in sorted(head.items())]
        if rows:
            lines.append("\t".join(cols))
            lines += ["\t".join(_cell(r.get(c)) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum n+k (or poset/graph size)")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="assoclab", description="Poset associahedra, stack-sorting and Dyck path toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hvec", parents=[common], help="f-, h- and gamma-vectors of a poset or graph")
    h.add_argument("input", help="chain:n, antichain:k, A:n,k, lollipop:n,k, path:n, complete:n or a JSON file")
    h.set_defaults(func=cmd_hvec)

    v = sub.add_parser("verify", parents=[common], help="check a theorem on one instance")
    v.add_argument("claim", choices=sorted(VERIFIERS))
    v.add_argument("n", type=int, nargs="?")
    v.add_argument("k", type=int, nargs="?")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("conjecture", parents=[common], help="test a recurrence conjecture")
    c.add_argument("which", choices=("c2", "chain-n", "corpus"))
    c.add_argument("input", nargs="?", help="poset spec or JSON file (not used by corpus)")
    c.add_argument("--subset", help="comma-separated element names or indices forming the autonomous chain")
    c.add_argument("--max-size", type=int, default=8, help="largest poset in the corpus sweep")
    c.set_defaults(func=cmd_conjecture)

    t = sub.add_parser("table", parents=[common], help="sweep A_{n,k} for n >= 1 and n+k <= max-sum")
    t.add_argument("--max-sum", type=int, default=6)
    t.set_defaults(func=cmd_table)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, code = args.func(args)
    except BudgetExceeded as e:
        rep, code = {"schema": SCHEMA, "error": "budget", "message": str(e), "size": e.size, "budget": e.budget}, EXIT_BUDGET
        if e.estimate is not None:
            rep["estimate"] = e.estimate
    except (PosetError, GraphError, ValueError, OSError) as e:
        print(f"assoclab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = render(rep, args.format)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

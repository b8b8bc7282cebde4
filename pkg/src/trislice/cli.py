"""Command-line workbench. Exit status: 0 ok, 1 domain error, 2 usage error."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import product
from pathlib import Path

from . import __version__
from .bounds import bound_report
from .errors import ParameterError, TrisliceError
from .family import SetFamily, read_families
from .ledger import SCHEMA_VERSION, ExperimentSpec, ledger_load, run_experiment, summary_table
from .linalg import dump_matrix, parse_matrix, rank
from .profile import IntersectionProfile, LiuConfiguration, parse_profile, verify_family
from .search import SearchBudget, default_workers, max_family
from .tensors import (
    frankl_wilson_matrix,
    liu_matrix,
    product_tensor,
    size_sorted,
    slice_decompose,
    snevily_matrix,
)
from .transforms import complement_replace, shrink_small, trace


def _int_list(text: str) -> list[int]:
    """``4,6,8`` or ``4..8`` (inclusive) or a mix of both."""
    out: list[int] = []
    try:
        for tok in text.split(","):
            tok = tok.strip()
            if ".." in tok:
                lo, hi = tok.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif tok:
                out.append(int(tok))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def _profile_arg(text: str) -> IntersectionProfile:
    try:
        return parse_profile(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj) + "\n")


def _fmt_witness(fam: SetFamily | None) -> str:
    return "none" if fam is None else str(fam)


# -- subcommands --------------------------------------------------------------


def cmd_verify(args, out) -> int:
    families = read_families(args.family)
    status = 0
    results = []
    for idx, fam in enumerate(families, 1):
        if args.n is not None and fam.n != args.n:
            raise ParameterError(f"family {idx} has n={fam.n}, expected {args.n}")
        report = verify_family(fam, args.profile, cap=None if args.all else 32)
        if not report.valid:
            status = 1
        results.append((idx, fam, report))
    if args.json:
        _emit_json(
            [
                {
                    "family": idx,
                    "valid": r.valid,
                    "truncated": r.truncated,
                    "violations": [str(v) for v in r.violations],
                }
                for idx, _, r in results
            ],
            out,
        )
        return status
    for idx, fam, r in results:
        prefix = f"family {idx}: " if len(results) > 1 else ""
        out.write(prefix + ("valid" if r.valid else "invalid") + "\n")
        for v in r.violations:
            out.write(f"  {v}\n")
        if r.truncated:
            out.write("  (more violations omitted; use --all)\n")
    return status


def cmd_bound(args, out) -> int:
    report = bound_report(args.n, args.p, args.profile)
    if args.json:
        _emit_json(report.to_dict(), out)
        return 0
    for e in report.entries:
        if e.applicable:
            tag = "" if e.proven else " [conjecture]"
            out.write(f"{e.name}: {e.value}{tag} ({e.note})\n")
        else:
            out.write(f"{e.name}: not applicable ({e.note})\n")
    out.write(f"tightest: {report.tightest if report.tightest is not None else 'none'}\n")
    return 0


def cmd_rank(args, out) -> int:
    mat = parse_matrix(Path(args.matrix).read_text())
    r = rank(mat)
    if args.json:
        _emit_json({"dim": mat.dim, "rank": r}, out)
    else:
        out.write(f"{r}\n")
    return 0


def _build_tensor(args):
    prof: IntersectionProfile = args.profile
    families = read_families(args.family)
    if args.kind == "liu":
        if len(families) != 2:
            raise ParameterError("liu needs a family file with two lines: lower, then upper")
        if prof.is_modular:
            raise ParameterError("liu needs an exact profile")
        cfg = LiuConfiguration(families[0], families[1], frozenset(prof.levels[-1]))
        if args.sort:
            cfg = cfg.lex_sorted()
        return liu_matrix(cfg, force=args.force)
    if len(families) != 1:
        raise ParameterError(f"expected one family in {args.family}, found {len(families)}")
    fam = families[0]
    if args.sort:
        fam = fam.lex_sorted() if args.kind == "snevily" else size_sorted(fam)
    if args.kind == "snevily":
        if not prof.is_modular or prof.k != 2:
            raise ParameterError("snevily needs a two-level modular profile mod:p:K|L")
        return snevily_matrix(fam, prof.levels[1], prof.modulus, force=args.force)
    if prof.is_modular:
        raise ParameterError("fw needs an exact profile")
    return frankl_wilson_matrix(fam, prof.levels[-1], force=args.force)


def cmd_tensor(args, out) -> int:
    tensor = _build_tensor(args)
    cert = tensor.certificate
    if args.emit == "matrix":
        out.write(dump_matrix(tensor.matrix))
        return 0
    if args.emit == "rank":
        if args.json:
            _emit_json({"dim": tensor.dim, "rank": tensor.rank()}, out)
        else:
            out.write(f"{tensor.rank()}\n")
        return 0
    info = {
        "dim": tensor.dim,
        "shape": cert.shape.value,
        "diagonal_nonzero": cert.diagonal_all_nonzero,
        "witness": None if cert.witness is None else [i + 1 for i in cert.witness],
        "rank": tensor.rank(),
    }
    if args.json:
        _emit_json(info, out)
    else:
        out.write(f"shape: {info['shape']}\n")
        out.write(f"diagonal nonzero: {str(info['diagonal_nonzero']).lower()}\n")
        if info["witness"] is not None:
            r, c = info["witness"]
            out.write(f"witness: nonzero entries on both sides of the diagonal, e.g. ({r},{c})\n")
        out.write(f"rank: {info['rank']} of {info['dim']}\n")
    return 0


def cmd_transform(args, out, err) -> int:
    families = read_families(args.family)
    results = []
    for fam in families:
        if args.op == "complement":
            if args.index is None:
                raise ParameterError("complement needs --index")
            results.append((complement_replace(fam, args.index - 1, args.profile), None))
        elif args.op == "shrink":
            results.append((shrink_small(fam, args.profile), None))
        else:
            if args.gamma is None:
                raise ParameterError("trace needs --gamma")
            res = trace(fam, args.gamma - 1, args.profile)
            results.append((res.family, res.profile))
    lines = []
    for fam, prof in results:
        if args.json:
            obj = {"n": fam.n, "sets": fam.to_lists()}
            if prof is not None:
                obj["profile"] = str(prof)
            lines.append(json.dumps(obj))
        else:
            lines.append(fam.to_json())
    text = "".join(ln + "\n" for ln in lines)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    for _, prof in results[:1]:
        if prof is not None and not args.json:
            err.write(f"profile: {prof}\n")
    return 0


def cmd_search(args, out) -> int:
    budget = SearchBudget(args.max_nodes, args.max_time, args.workers or default_workers())
    res = max_family(
        args.n, args.profile, budget, use_bounds=args.use_bounds, canonical=args.canonical
    )
    if args.json:
        _emit_json(
            {
                "n": res.n,
                "profile": str(res.profile),
                "max_size": res.max_size,
                "exhausted": res.exhausted,
                "infeasible": res.infeasible,
                "bound_cutoff": res.bound_cutoff,
                "witness": None if res.witness is None else res.witness.to_lists(),
                "nodes_visited": res.nodes_visited,
                "notes": list(res.notes),
            },
            out,
        )
        return 0
    if res.infeasible:
        out.write("infeasible\n")
    else:
        out.write(f"max_size: {res.max_size}\n")
        out.write(f"witness: {_fmt_witness(res.witness)}\n")
    out.write(f"exhausted: {str(res.exhausted).lower()}\n")
    out.write(f"nodes: {res.nodes_visited}\n")
    for note in res.notes:
        out.write(f"note: {note}\n")
    return 0


def cmd_decompose(args, out) -> int:
    shifts = [Fraction(s) for s in args.shifts] if args.shifts else [Fraction(-i) for i in range(args.l)]
    if len(shifts) != args.l:
        raise ParameterError(f"need {args.l} shifts, got {len(shifts)}")
    shifts = [int(s) if s.denominator == 1 else s for s in shifts]
    dec = slice_decompose(args.l, args.m, shifts)
    vecs = list(product((0, 1), repeat=args.m))
    ok = all(dec.evaluate(x, y) == product_tensor(x, y, shifts) for x in vecs for y in vecs)
    if args.json:
        _emit_json(
            {
                "l": args.l,
                "m": args.m,
                "terms": len(dec.terms),
                "bound": dec.bound,
                "reconstructs": ok,
                "monomials": [sorted(t.monomial) for t in dec.terms],
            },
            out,
        )
    else:
        for t in dec.terms:
            mono = "*".join(f"y{j}" for j in sorted(t.monomial)) or "1"
            out.write(f"{mono}: nonzero on {len(t.coefficients)} rows\n")
        out.write(f"terms: {len(dec.terms)} (bound {dec.bound})\n")
        out.write(f"reconstructs: {str(ok).lower()}\n")
    return 0 if ok else 1


def cmd_experiment(args, out) -> int:
    spec = ExperimentSpec(
        ns=tuple(args.n),
        profiles=tuple(args.profile),
        ps=tuple(args.p) if args.p else (None,),
        budget=SearchBudget(args.max_nodes, args.max_time, args.workers or default_workers()),
        ledger=args.ledger,
        table_format=args.format,
        canonical=args.canonical,
        use_bounds=args.use_bounds,
    )
    run_experiment(spec, table=out)
    return 0


def cmd_ledger(args, out, err) -> int:
    problems: list[str] = []
    records = ledger_load(args.path, lenient=args.lenient, problems=problems)
    for msg in problems:
        err.write(f"skipped {msg}\n")
    out.write(summary_table(records, args.format))
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trislice", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=f"trislice {__version__} (ledger schema {SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def budget_flags(p):
        p.add_argument("--max-nodes", type=int)
        p.add_argument("--max-time", type=float, help="seconds")
        p.add_argument("--workers", type=int, help="default from $TRISLICE_WORKERS or 1")
        p.add_argument("--canonical", action="store_true", help="symmetry-pruned search")
        p.add_argument("--use-bounds", action="store_true", help="stop at the tightest proven bound")

    p = sub.add_parser("verify", help="check families against a profile")
    p.add_argument("--n", type=int)
    p.add_argument("--profile", type=_profile_arg, required=True)
    p.add_argument("--family", required=True, help="family JSONL file")
    p.add_argument("--all", action="store_true", help="list every violation")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bound", help="evaluate the applicable bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--profile", type=_profile_arg, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("rank", help="exact rank of a dumped matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("tensor", help="build a proof tensor and certify it")
    p.add_argument("kind", choices=("snevily", "fw", "liu"))
    p.add_argument("--family", required=True)
    p.add_argument("--profile", type=_profile_arg, required=True)
    p.add_argument("--emit", choices=("matrix", "certificate", "rank"), default="certificate")
    p.add_argument("--force", action="store_true", help="skip the hypothesis check")
    p.add_argument("--sort", action="store_true", help="put the family in the order the tensor needs")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("transform", help="complement, trace or shrink families")
    p.add_argument("op", choices=("complement", "trace", "shrink"))
    p.add_argument("--family", required=True)
    p.add_argument("--profile", type=_profile_arg, required=True)
    p.add_argument("--index", type=int, help="1-based member to complement")
    p.add_argument("--gamma", type=int, help="1-based member to trace onto")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("search", help="exact maximum family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--profile", type=_profile_arg, required=True)
    budget_flags(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("decompose", help="slice decomposition of a product tensor")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument(
        "--shifts",
        type=lambda s: s.split(","),
        help="comma-separated constants f_1..f_l (default 0,-1,...)",
    )
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("experiment", help="search a grid and append to a ledger")
    p.add_argument("--n", type=_int_list, required=True, help="e.g. 4,6,8 or 4..8")
    p.add_argument("--p", type=_int_list)
    p.add_argument("--profile", action="append", required=True, help="template, {p} is substituted")
    p.add_argument("--ledger")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    budget_flags(p)

    p = sub.add_parser("ledger", help="load and audit a results ledger")
    p.add_argument("path")
    p.add_argument("--lenient", action="store_true", help="skip bad lines instead of failing")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "bound":
            return cmd_bound(args, out)
        if args.command == "rank":
            return cmd_rank(args, out)
        if args.command == "tensor":
            return cmd_tensor(args, out)
        if args.command == "transform":
            return cmd_transform(args, out, err)
        if args.command == "search":
            return cmd_search(args, out)
        if args.command == "decompose":
            return cmd_decompose(args, out)
        if args.command == "experiment":
            return cmd_experiment(args, out)
        return cmd_ledger(args, out, err)
    except (TrisliceError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

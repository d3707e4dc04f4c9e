"""Command-line interface.

Exit codes: 0 success, 1 negative property or verification result,
2 usage, parse, I/O or resource-limit error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify as suites
from .algebra import _describe_latin_violation, CayleyTable, PREDICATES, PredicateUndefined, TableError, dumps_table, loads_table, predicate_witness
from .crypto import CipherEnvelope, CryptoError, KeyBundle, decrypt, encrypt, generate_bundle
from .holomorph import build_holomorph, dumps_legend
from .isotopy import InvalidKey, build_isotope, derive_maps, loads_key
from .keedwell import AbelianGroupSpec, KeedwellParams, TABLE_LIMIT, _is_prime, find_params, keedwell_cipq
from .morphism import DEFAULT_LIMIT, OrderLimitError, automorphism_group, dumps_group

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2
STRUCTURAL = ("latin", "quasigroup", "loop")
LOOP_SUITE_MAX = 6


class UsageError(Exception):
    """Bad input; reported on stderr with exit code 2."""


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data) -> None:
    if isinstance(data, str):
        data = data.encode()
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load_table(path: str) -> CayleyTable:
    try:
        return loads_table(_read_text(path))
    except TableError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(args, record: dict, lines) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _sidecar(path: str, suffix: str) -> str:
    p = Path(path)
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    return str(p.with_name(stem + suffix))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gen_keedwell(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("--n must be >= 2")
    if _is_prime(n + 1):
        _emit(args, {"n": n, "error": "n+1 prime"},
              [f"n+1 prime: {n + 1} has no split r*s with r, s >= 2, so no Keedwell CIPQ of order {n}"])
        return EXIT_NEGATIVE
    if (args.r is None) != (args.s is None):
        raise UsageError("give both --r and --s or neither")
    if args.r is not None:
        try:
            params = KeedwellParams.make(n, args.r, args.s)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.require_nonunipotent and not params.nonunipotent:
            raise UsageError(f"r+s = {n}: ({args.r}, {args.s}) gives a unipotent table")
    else:
        options = find_params(n, require_nonunipotent=args.require_nonunipotent)
        if not options:
            _emit(args, {"n": n, "error": "no non-unipotent split"},
                  [f"every split of {n + 1} has r+s = {n}; no non-unipotent table"])
            return EXIT_NEGATIVE
        params = options[0]
    factors = tuple(args.factors) if args.factors else (n,)
    try:
        spec = AbelianGroupSpec(factors)
        table = keedwell_cipq(params, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params_path = args.params or _sidecar(args.out, ".params.json")
    _write(args.out, dumps_table(table))
    _write(params_path, json.dumps(params.to_dict()) + "\n")
    if not params.nonunipotent:
        print(f"warning: r+s = n = {n}; the table is unipotent (x.x constant)", file=sys.stderr)
    record = dict(params.to_dict(), factors=list(factors), table=args.out, params=params_path)
    _emit(args, record, [
        f"Keedwell CIPQ n={n} r={params.r} s={params.s} u={params.u} nonunipotent={str(params.nonunipotent).lower()}",
        f"table  -> {args.out}",
        f"params -> {params_path}",
    ])
    return EXIT_OK


def cmd_check(args) -> int:
    q = _load_table(args.table)
    prop = args.property
    low = prop.lower()
    if low in STRUCTURAL:
        if low == "loop":
            holds = q.is_loop
            witness = None if holds else (q.latin_violation if not q.is_quasigroup else "no two-sided identity")
        else:
            v = q.latin_violation
            holds = v is None
            witness = None if holds else v
    else:
        try:
            w = predicate_witness(q, prop)
        except PredicateUndefined as exc:
            _emit(args, {"property": prop, "holds": None, "reason": str(exc)}, [f"{prop}: undefined ({exc})"])
            return EXIT_NEGATIVE
        except TableError as exc:
            _emit(args, {"property": prop, "holds": False, "reason": str(exc)}, [f"{prop}: fails ({exc})"])
            return EXIT_NEGATIVE
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        holds, witness = w is None, w
    record = {"property": prop, "holds": holds, "witness": _jsonable(witness)}
    _emit(args, record, [f"{prop}: holds"] if holds else [f"{prop}: fails, witness {_describe_witness(witness)}"])
    return EXIT_OK if holds else EXIT_NEGATIVE


def _jsonable(w):
    if w is None or isinstance(w, str):
        return w
    return [int(a) for a in w] if not isinstance(w, dict) else w


def _describe_witness(w) -> str:
    if isinstance(w, str):
        return w
    if len(w) == 4:
        return _describe_latin_violation(w)
    return "(" + ", ".join(str(a) for a in w) + ")"


def cmd_aut(args) -> int:
    q = _load_table(args.table)
    try:
        group = automorphism_group(q, limit=args.limit)
    except OrderLimitError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        _write(args.out, dumps_group(group))
    record = {"n": q.n, "order": len(group), "elements": [list(p.image) for p in group]}
    lines = [f"|AUM| = {len(group)}"] + [f"  {p.cycles()}" for p in group]
    _emit(args, record, lines)
    return EXIT_OK


def cmd_holomorph(args) -> int:
    q = _load_table(args.table)
    try:
        aum = automorphism_group(q, limit=args.limit)
        hol = build_holomorph(q, aum, limit=args.table_limit)
    except OrderLimitError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    legend = args.legend or _sidecar(args.out, ".legend.json")
    _write(args.out, dumps_table(hol.base))
    _write(legend, dumps_legend(hol))
    record = {"n": q.n, "aum_order": len(aum), "order": hol.base.n, "table": args.out, "legend": legend}
    _emit(args, record, [f"H(L): order {hol.base.n} = |AUM| {len(aum)} x {q.n}", f"table  -> {args.out}", f"legend -> {legend}"])
    return EXIT_OK


def cmd_isotope(args) -> int:
    u = _load_table(args.table)
    try:
        key = loads_key(_read_text(args.key))
        v = build_isotope(u, key)
    except InvalidKey as exc:
        raise UsageError(f"{args.key}: {exc}") from None
    except TableError as exc:
        raise UsageError(str(exc)) from None
    maps = derive_maps(key)
    _write(args.out, dumps_table(v))
    record = {"n": u.n, "delta": list(maps.delta.image), "gamma": list(maps.gamma.image), "table": args.out}
    _emit(args, record, [f"delta = {maps.delta.cycles()}", f"gamma = {maps.gamma.cycles()}", f"V -> {args.out}"])
    return EXIT_OK


def _load_bundle(path: str) -> KeyBundle:
    try:
        bundle = KeyBundle.from_json(_read_text(path))
        bundle.cipq  # validates the key against the table
        return bundle
    except (CryptoError, InvalidKey, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_keygen(args) -> int:
    try:
        bundle = generate_bundle(args.n, args.r, args.s, factors=args.factors, seed=args.seed,
                                 nonunipotent=not args.allow_unipotent)
        bundle.cipq
    except (CryptoError, InvalidKey, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, bundle.to_json())
    p = bundle.params
    _emit(args, dict(p.to_dict(), bundle=args.out), [f"bundle n={p.n} r={p.r} s={p.s} -> {args.out}"])
    return EXIT_OK


def cmd_encrypt(args) -> int:
    bundle = _load_bundle(args.bundle)
    env = encrypt(bundle, _read_bytes(args.input))
    _write(args.output, env.to_json())
    return EXIT_OK


def cmd_decrypt(args) -> int:
    bundle = _load_bundle(args.bundle)
    try:
        env = CipherEnvelope.from_json(_read_text(args.input))
        data = decrypt(bundle, env)
    except CryptoError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    _write(args.output, data)
    return EXIT_OK


def cmd_verify(args) -> int:
    name = args.suite
    if name in ("osborn", "holomorph"):
        order = 5 if args.max_order is None else args.max_order
        if order > LOOP_SUITE_MAX or order < 1:
            raise UsageError(f"--max-order must be in 1..{LOOP_SUITE_MAX} for the {name} suite")
        if order == 6 and not args.allow_slow:
            raise UsageError("order 6 enumerates 9408 loops; pass --allow-slow to run it")
        report = suites.SUITES[name](order)
    elif name == "keedwell":
        order = 40 if args.max_order is None else args.max_order
        if order > TABLE_LIMIT:
            raise UsageError(f"--max-order above the table limit {TABLE_LIMIT}")
        report = suites.keedwell_suite(order)
    elif name == "isotopy":
        report = suites.isotopy_suite(trials=args.trials, seed=args.seed)
    elif name == "groups":
        report = suites.groups_suite()
    else:
        report = suites.automorphism_oracle_suite(6 if args.max_order is None else min(args.max_order, 6))
    if args.json:
        doc = report.to_dict()
        if not args.cases:
            doc.pop("cases")
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"suite {report.name}: {'PASS' if report.passed else 'FAIL'}")
        for check, ok in report.checks.items():
            print(f"  [{'ok' if ok else 'FAIL'}] {check}")
        for k, v in report.stats.items():
            print(f"  {k}: {json.dumps(v, sort_keys=True)}")
        for f in report.findings:
            print(f"  FINDING: {f}")
        if args.cases:
            for case in report.cases:
                print("  case " + json.dumps(case, sort_keys=True))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _factors(text: str):
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("factors must be comma-separated integers") from None
    if not out or any(f < 1 for f in out):
        raise argparse.ArgumentTypeError("factors must be positive")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasicrypt", description="Keedwell CIP quasigroups, holomorphs, isotopes and double encryption.")
    ap.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
        p.set_defaults(func=func)
        return p

    p = add("gen-keedwell", cmd_gen_keedwell, "write a Keedwell CIPQ table and its params record")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--factors", type=_factors, help="cyclic orders of the abelian group, e.g. 2,6 (default: n)")
    p.add_argument("--require-nonunipotent", action="store_true")
    p.add_argument("--out", default="keedwell.json")
    p.add_argument("--params", help="params file (default: <out>.params.json)")

    p = add("check", cmd_check, "test one property of a table")
    p.add_argument("table")
    p.add_argument("property", help="one of: " + ", ".join(STRUCTURAL + PREDICATES))

    p = add("aut", cmd_aut, "automorphism group of a table")
    p.add_argument("table")
    p.add_argument("--out")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="largest order searched")

    p = add("holomorph", cmd_holomorph, "write H(L) and a pair-index legend")
    p.add_argument("table")
    p.add_argument("--out", required=True)
    p.add_argument("--legend", help="legend file (default: <out>.legend.json)")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="largest source order")
    p.add_argument("--table-limit", type=int, default=TABLE_LIMIT, help="largest holomorph order")

    p = add("isotope", cmd_isotope, "build V from U and an (alpha, beta, psi) key")
    p.add_argument("table")
    p.add_argument("key")
    p.add_argument("--out", required=True)

    p = add("keygen", cmd_keygen, "generate a random key bundle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--factors", type=_factors)
    p.add_argument("--seed", type=int)
    p.add_argument("--allow-unipotent", action="store_true")
    p.add_argument("--out", required=True)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = add(name, func, f"{name} with a key bundle ('-' for stdin/stdout)")
        p.add_argument("bundle")
        p.add_argument("input", nargs="?", default="-")
        p.add_argument("output", nargs="?", default="-")

    p = add("verify", cmd_verify, "run a verification suite")
    p.add_argument("--suite", required=True, choices=("holomorph", "osborn", "isotopy", "keedwell", "groups", "aut-oracle"))
    p.add_argument("--max-order", type=int, help="loop order for osborn/holomorph (<= 6), n bound for keedwell")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-slow", action="store_true", help="permit order-6 loop enumeration")
    p.add_argument("--cases", action="store_true", help="include per-case records")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OrderLimitError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

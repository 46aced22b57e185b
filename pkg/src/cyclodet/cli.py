"""Command-line front end: range sweeps, single determinants, class numbers.

Exit codes: 0 when every check passed (or nothing to check), 1 on usage
errors, 2 when at least one verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .classno import fundamental_unit, h_neg
from .detkit import det
from .matrices import (
    build_C,
    build_D,
    build_D_delta,
    build_S,
    build_S_delta,
    build_T,
)
from .modarith import is_prime, legendre
from .subfield import quad_decompose, quartic_decompose
from .verify import SweepOptions, report_to_dict, run_range

CACHE_ENV = "CYCLODET_CACHE_DIR"


@dataclass
class RunConfig:
    pmin: int
    pmax: int
    delta_mode: str = "least"
    delta_value: int | None = None
    sweep_count: int = 3
    backend: str = "both"
    threads: int = 1
    output: str | None = None
    format: str = "json"
    cache_dir: str | None = None


def _parse_delta(text: str) -> tuple[str, int | None, int]:
    """--delta accepts 'least', 'sweep', 'sweep:K', or an explicit integer."""
    if text == "least":
        return "least", None, 3
    if text == "sweep":
        return "sweep", None, 3
    if text.startswith("sweep:"):
        return "sweep", None, int(text.split(":", 1)[1])
    return "explicit", int(text), 3


def _code_version_hash() -> str:
    here = Path(__file__).resolve().parent
    digest = hashlib.sha256()
    for path in sorted(here.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()[:16]


def _delta_tag(config: RunConfig) -> str:
    if config.delta_mode == "least":
        return "least"
    if config.delta_mode == "explicit":
        return f"d{config.delta_value}"
    return f"sweep{config.sweep_count}"


def reports_to_json(dicts: list[dict]) -> str:
    return json.dumps(dicts, sort_keys=True, indent=2) + "\n"


def reports_to_csv(dicts: list[dict]) -> str:
    names = sorted({name for d in dicts for name in d["checks"]})
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["p", "residue8"] + names)
    for d in dicts:
        row = [d["p"], d["residue8"]]
        for name in names:
            c = d["checks"].get(name)
            row.append("" if c is None else c["status"])
        writer.writerow(row)
    return buf.getvalue()


def exit_code_for(dicts: list[dict]) -> int:
    for d in dicts:
        for c in d["checks"].values():
            if c["status"] == "fail":
                return 2
    return 0


def cmd_verify(config: RunConfig) -> int:
    if config.pmin > config.pmax or config.pmin <= 3:
        print(
            f"error: need 3 < pmin <= pmax, got ({config.pmin}, {config.pmax})",
            file=sys.stderr,
        )
        return 1
    options = SweepOptions(
        delta_mode=config.delta_mode,
        delta_value=config.delta_value,
        sweep_count=config.sweep_count,
        backend=config.backend,
        threads=config.threads,
    )
    cache_dir = config.cache_dir or os.environ.get(CACHE_ENV)
    report_dicts: list[dict]
    if cache_dir:
        report_dicts = _run_with_cache(config, options, Path(cache_dir))
    else:
        reports = run_range(config.pmin, config.pmax, options)
        report_dicts = [report_to_dict(r) for r in reports]

    payload = (
        reports_to_json(report_dicts)
        if config.format == "json"
        else reports_to_csv(report_dicts)
    )
    try:
        if config.output:
            Path(config.output).write_text(payload, encoding="utf-8")
        else:
            sys.stdout.write(payload)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1
    return exit_code_for(report_dicts)


def _run_with_cache(
    config: RunConfig, options: SweepOptions, cache_dir: Path
) -> list[dict]:
    cache_dir.mkdir(parents=True, exist_ok=True)
    version = _code_version_hash()
    tag = _delta_tag(config)
    primes = [p for p in range(config.pmin, config.pmax + 1) if is_prime(p)]
    dicts: list[dict] = []
    missing: list[int] = []
    cached: dict[int, dict] = {}
    for p in primes:
        path = cache_dir / f"p{p}-{tag}-{version}.json"
        if path.exists():
            cached[p] = json.loads(path.read_text(encoding="utf-8"))
        else:
            missing.append(p)
    fresh: dict[int, dict] = {}
    if missing:
        # contiguous re-run is wasteful when the misses are sparse; run them
        # one by one through run_range to keep the worker pool semantics
        for p in missing:
            reports = run_range(p, p, options)
            d = report_to_dict(reports[0])
            fresh[p] = d
            path = cache_dir / f"p{p}-{tag}-{version}.json"
            path.write_text(json.dumps(d, sort_keys=True) + "\n", encoding="utf-8")
    for p in primes:
        dicts.append(cached.get(p) or fresh[p])
    return dicts


def cmd_det(args) -> int:
    p = args.p
    if not is_prime(p) or p < 3:
        print(f"error: p must be an odd prime, got {p}", file=sys.stderr)
        return 1
    family = args.family
    needs_delta = family in ("T", "SD", "DD")
    if needs_delta:
        if args.delta is None:
            print(f"error: family {family} needs --delta", file=sys.stderr)
            return 1
        if legendre(args.delta, p) != -1:
            print(
                f"error: delta={args.delta} is not a non-residue mod {p}",
                file=sys.stderr,
            )
            return 1
    elif args.delta is not None:
        print(f"error: family {family} takes no --delta", file=sys.stderr)
        return 1

    builders = {
        "S": lambda: build_S(p),
        "T": lambda: build_T(p, args.delta),
        "SD": lambda: build_S_delta(p, args.delta),
        "C": lambda: build_C(p),
        "D": lambda: build_D(p),
        "DD": lambda: build_D_delta(p, args.delta),
    }
    try:
        mat = builders[family]()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = det(mat, backend=args.backend)
    value = result.value
    suffix = f"({args.delta}, {p})" if needs_delta else f"({p})"
    if mat.kind == "int":
        print(f"det[{family}{suffix}] = {value}")
        return 0
    if value.is_rational:
        print(f"det[{family}{suffix}] = {value.rational_value()}")
    else:
        print(f"det[{family}{suffix}] coeffs = [{', '.join(str(c) for c in value.coeffs)}]")
    if p % 4 == 3:
        q = quad_decompose(value)
        print(f"quad: {q.x} + {q.y}*g  (g^2 = -{p})")
    else:
        try:
            qd = quartic_decompose(value, p)
            print(
                f"quartic: ({qd.alpha} + {qd.beta}*sqrt({p})) * delta, "
                f"delta_sign={qd.delta_sign}, a={qd.a}"
            )
        except (ArithmeticError, ValueError):
            q = quad_decompose(value)
            print(f"quad: {q.x} + {q.y}*g  (g^2 = {p})")
    return 0


def cmd_classno(args) -> int:
    p = args.p
    if not is_prime(p) or p <= 3:
        print(f"error: p must be a prime > 3, got {p}", file=sys.stderr)
        return 1
    if p % 4 == 3:
        print(f"h(-{p}) = {h_neg(p)}")
    else:
        from .classno import verify_product_formula

        result = verify_product_formula(p)
        t, u = fundamental_unit(p)
        print(f"h({p}) = {result.h}")
        print(f"eps_{p} = ({t} + {u}*sqrt({p}))/2")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclodet",
        description=(
            "Exact determinants of cyclotomic-unit and Legendre-symbol "
            "matrices, subfield decompositions, and identity verification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify all identities over a prime range")
    v.add_argument("--pmin", type=int, required=True)
    v.add_argument("--pmax", type=int, required=True)
    v.add_argument("--delta", default="least", help="least | sweep | sweep:K | <int>")
    v.add_argument("--backend", choices=["bareiss", "modular", "both"], default="both")
    v.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    v.add_argument("--out", default=None)
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--cache-dir", default=None)

    d = sub.add_parser("det", help="print one determinant exactly")
    d.add_argument("--family", choices=["S", "T", "SD", "C", "D", "DD"], required=True)
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--delta", type=int, default=None)
    d.add_argument("--backend", choices=["bareiss", "modular", "both"], default="both")

    c = sub.add_parser("classno", help="class number data for one prime")
    c.add_argument("--p", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.command == "verify":
        try:
            mode, value, count = _parse_delta(args.delta)
        except ValueError:
            print(f"error: bad --delta value {args.delta!r}", file=sys.stderr)
            return 1
        if args.threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return 1
        config = RunConfig(
            pmin=args.pmin,
            pmax=args.pmax,
            delta_mode=mode,
            delta_value=value,
            sweep_count=count,
            backend=args.backend,
            threads=args.threads,
            output=args.out,
            format=args.format,
            cache_dir=args.cache_dir,
        )
        return cmd_verify(config)
    if args.command == "det":
        return cmd_det(args)
    if args.command == "classno":
        return cmd_classno(args)
    return 1


if __name__ == "__main__":
    sys.exit(main())

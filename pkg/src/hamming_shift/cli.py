"""Command line front end.

    hamming-shift analyze --alpha 'pat:(01)^8' --n 16 --out out/
    hamming-shift verify --lemmas --max-L 12
    hamming-shift scan --family sparse:1-4 --n-grid 16:64:16 --out scan.csv
    hamming-shift sample --alpha 'pat:(01)^16' --n 32 --samples 1000000 --seed 7

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb
from pathlib import Path

from . import __version__
from .bitstring import ModKind, Modulus, decompose_blocks, parse_alpha
from .clt_approx import theorem_walkthrough
from .errors import HammingShiftError, TooWide
from .exact_dp import EXACT_LIMIT, joint_distribution, shift_report_from
from .families import make_alpha, parse_family, parse_grid
from .sampler import GENERATOR, estimate_fraction, sample_joint, thread_count
from .verify import verify_bounds, verify_dp, verify_lemmas

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_GUARD = 0, 1, 2, 3

SCAN_COLUMNS = [
    "family", "param", "n", "modulus", "method", "epsilon_num", "epsilon_den", "lth_fraction", "stderr", "seed",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _meta(args, command: str) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func", "alpha_parsed")}
    return {"tool": "hamming-shift", "tool_version": __version__, "command": command, "config": config}


def _csv_with_header(body: str, meta: dict) -> str:
    return f"# {json.dumps(meta, sort_keys=True)}\n{body}"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _modulus(args) -> Modulus:
    return Modulus(ModKind(args.mod), args.alpha_parsed.width)


def _resolve_alpha(args):
    args.alpha_parsed = parse_alpha(args.alpha, args.n)
    if args.n is None:
        args.n = args.alpha_parsed.width
    return args.alpha_parsed


# ------------------------------------------------------------------ analyze


def cmd_analyze(args) -> int:
    alpha = _resolve_alpha(args)
    mod = _modulus(args)
    meta = _meta(args, "analyze")
    use_exact = not args.sample and mod.width <= EXACT_LIMIT[mod.kind]
    out = Path(args.out) if args.out else None
    summary = {"alpha": str(alpha), "width": mod.width, "modulus": str(mod)}
    if use_exact:
        dist = joint_distribution(alpha, mod)
        report = shift_report_from(dist, alpha)
        summary.update(method="exact", **report.as_dict())
    else:
        est = estimate_fraction(alpha, mod, args.samples, args.seed)
        dist = sample_joint(alpha, mod, args.samples, args.seed) if mod.width <= 4096 else None
        light = sum(comb(mod.width, w) for w in range(mod.width // 2 + 1))
        eps = Fraction(light, mod.order) + Fraction(est.hits, est.samples) - Fraction(1, 2)
        summary.update(
            method="mc",
            lth_fraction=est.estimate,
            stderr=est.standard_error,
            epsilon=f"{eps.numerator}/{eps.denominator}",
            epsilon_float=float(eps),
            samples=est.samples,
            seed=est.seed,
            generator=GENERATOR,
        )
    blocks = decompose_blocks(alpha)
    block_doc = {**meta, "m": blocks.m, "blocks": [{"digit": d, "length": L} for d, L in blocks.blocks]}
    walk = None
    if args.walkthrough:
        walk = theorem_walkthrough(alpha, mod, trials=args.trials, seed=args.seed, mc_samples=args.samples)

    print(f"alpha   {alpha}  (n={mod.width}, {mod}, m={blocks.m})")
    print(f"method  {summary['method']}")
    print(f"epsilon {summary['epsilon']}  (~{summary['epsilon_float']:.6g})")
    print(f"light->heavy fraction {summary['lth_fraction']:.6g}")
    if walk is not None:
        print(f"walkthrough path={walk.path} L={walk.chosen_L} l={walk.chosen_l} "
              f"floor_log={walk.predicted_quadrant_floor_log} measured_log={walk.measured_log:.4g}")

    if out is not None:
        _write(out / "shift_report.json", json.dumps({**meta, **summary}, indent=1))
        _write(out / "blocks.json", json.dumps(block_doc, indent=1))
        if dist is not None:
            if args.format == "csv":
                _write(out / "joint.csv", _csv_with_header(dist.to_csv(), meta))
            else:
                _write(out / "joint.json", dist.to_json(**meta))
            if args.plot:
                from .plots import plot_joint

                plot_joint(dist, out / "joint.png", title=f"alpha={args.alpha}, n={mod.width}, {mod}")
        if walk is not None:
            walk.config.update(meta["config"])
            _write(out / "walkthrough.json", walk.to_json())
    elif walk is not None:
        print(walk.to_json())
    return EXIT_OK


# ------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    chosen = [s for s in ("dp", "lemmas", "bounds") if getattr(args, s)]
    if not chosen:
        chosen = ["dp", "lemmas", "bounds"]
    results = []
    for name in chosen:
        if name == "dp":
            results.append(verify_dp(args.max_n))
        elif name == "lemmas":
            results.append(verify_lemmas(args.max_L))
        else:
            results.append(verify_bounds(args.bound_L))
    for r in results:
        print(r.line())
        for f in r.failures:
            print(f"    failed: {f}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


# --------------------------------------------------------------------- scan


def scan_point(name: str, param: str, n: int, mod_kind: ModKind, samples: int, seed: int) -> dict:
    alpha = make_alpha(name, param, n)
    mod = Modulus(mod_kind, n)
    row = {"family": name, "param": param, "n": n, "modulus": mod_kind.value, "seed": ""}
    if n <= EXACT_LIMIT[mod_kind]:
        rep = shift_report_from(joint_distribution(alpha, mod), alpha)
        eps = rep.epsilon
        row.update(method="exact", lth_fraction=repr(float(rep.lth_fraction)), stderr="")
    else:
        est = estimate_fraction(alpha, mod, samples, seed)
        light = sum(comb(n, w) for w in range(n // 2 + 1))
        eps = Fraction(light, mod.order) + Fraction(est.hits, est.samples) - Fraction(1, 2)
        row.update(method="mc", lth_fraction=repr(est.estimate), stderr=repr(est.standard_error), seed=seed)
    row.update(epsilon_num=eps.numerator, epsilon_den=eps.denominator)
    return row


def _family_key(row):
    param = row["param"]
    return (row["family"], (0, int(param)) if param.lstrip("-").isdigit() else (1, param), row["n"])


def run_scan(families, grid, mod_kind, samples, seed) -> list[dict]:
    jobs = [(name, p, n) for name, params in families for p in params for n in grid]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        rows = list(pool.map(lambda j: scan_point(j[0], j[1], j[2], mod_kind, samples, seed), jobs))
    rows.sort(key=_family_key)
    return rows


def cmd_scan(args) -> int:
    families = [parse_family(f) for f in args.family]
    grid = parse_grid(args.n_grid)
    rows = run_scan(families, grid, ModKind(args.mod), args.samples, args.seed)
    meta = _meta(args, "scan")
    if args.format == "json":
        text = json.dumps({**meta, "rows": rows}, indent=1)
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        text = _csv_with_header(buf.getvalue(), meta)
    if args.out:
        _write(Path(args.out), text)
        if args.plot:
            from .plots import plot_scan

            plot_scan(rows, Path(args.out).with_suffix(".png"))
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------- sample


def cmd_sample(args) -> int:
    alpha = _resolve_alpha(args)
    mod = _modulus(args)
    est = estimate_fraction(alpha, mod, args.samples, args.seed)
    meta = _meta(args, "sample")
    text = est.to_json(**meta) + "\n"
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------- main


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned value")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hamming-shift", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_alpha=True):
        if need_alpha:
            sp.add_argument("--alpha", required=True, help="0b..., 0x..., decimal, rat:a,b,q or pat:(01)^8")
            sp.add_argument("--n", type=_positive, help="width in bits")
        sp.add_argument("--mod", choices=[k.value for k in ModKind], default="pow2")
        sp.add_argument("--samples", type=_positive, default=100000)
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument("--out", help="output directory (analyze) or file")

    a = sub.add_parser("analyze", help="exact or sampled report for one alpha")
    common(a)
    a.add_argument("--walkthrough", action="store_true", help="also build the proof walkthrough report")
    a.add_argument("--sample", action="store_true", help="force Monte Carlo")
    a.add_argument("--trials", type=_positive, default=20000, help="carry fixings sampled by the walkthrough")
    a.add_argument("--format", choices=["json", "csv"], default="csv", help="joint distribution format")
    a.add_argument("--plot", action="store_true", help="write joint.png next to the data")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the exact invariant suites")
    v.add_argument("--dp", action="store_true")
    v.add_argument("--lemmas", action="store_true")
    v.add_argument("--bounds", action="store_true")
    v.add_argument("--max-n", type=_positive, default=10)
    v.add_argument("--max-L", type=_positive, default=12)
    v.add_argument("--bound-L", type=_positive, default=64)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="sweep alpha families over widths")
    common(s, need_alpha=False)
    s.add_argument("--family", action="append", required=True,
                   help="sparse:1-4, blocks:n, blocks:2,4, periodic:2,4, random:1,2 (repeatable)")
    s.add_argument("--n-grid", required=True, help="16,32,64 or 16:64:16; empty for none")
    s.add_argument("--format", choices=["json", "csv"], default="csv")
    s.add_argument("--plot", action="store_true", help="write a PNG next to --out")
    s.set_defaults(func=cmd_scan)

    m = sub.add_parser("sample", help="Monte Carlo light->heavy estimate")
    common(m)
    m.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooWide as exc:
        print(f"hamming-shift: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except HammingShiftError as exc:
        print(f"hamming-shift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: JSON (or CSV) on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .classify import classify_search, classify_theorem, sweep, sweep_grid
from .errors import JumptileError
from .neighbors import ExpansionWord, LatticePoint, is_member, membership_table, verify_expansion
from .params import validate_params
from .render import render_attractor, render_parameter_map
from .sequences import tilde_bounds

log = logging.getLogger("jumptile")

CSV_FIELDS = ("p", "q", "m", "theorem", "search", "agree")


class UsageError(Exception):
    pass


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _params(args):
    return validate_params(args.p, args.q, args.m)


def _add_pqm(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-p", type=int, required=True, help="linear coefficient of x^2 + p x + q")
    sub.add_argument("-q", type=int, required=True, help="constant coefficient (det A)")
    sub.add_argument("-m", type=int, default=0, help="jump offset, digits {0..|q|-2, |q|+m}")


def _word_dict(word: ExpansionWord | None):
    return word.as_dict() if word is not None else None


def cmd_classify(args) -> int:
    params = _params(args)
    out: dict = {"params": params.as_dict()}
    verdicts = []
    if args.method in ("theorem", "both"):
        theorem = classify_theorem(params)
        out["theorem"] = theorem.verdict.value
        verdicts.append(theorem.verdict)
    if args.method in ("search", "both"):
        search = classify_search(params)
        out["search"] = search.verdict.value
        out["witnesses"] = search.evidence.as_dict()
        verdicts.append(search.verdict)
    out["verdict"] = verdicts[0].value
    out["agree"] = len(set(verdicts)) == 1 if len(verdicts) == 2 else None
    _emit(out)
    return 0


def cmd_decide(args) -> int:
    params = _params(args)
    point = LatticePoint(args.gamma, args.delta)
    table = membership_table(params)
    member, witness = is_member(params, point, table)
    _emit(
        {
            "params": params.as_dict(),
            "point": {"gamma": point.gamma, "delta": point.delta},
            "in_box": table.box.contains(point.gamma, point.delta),
            "member": member,
            "witness": _word_dict(witness),
            "verified": verify_expansion(params, witness, point) if witness else None,
        }
    )
    return 0


def cmd_bounds(args) -> int:
    params = _params(args)
    box = tilde_bounds(params)
    _emit(
        {
            "params": params.as_dict(),
            "discriminant": params.discriminant,
            "alpha_tilde_ub": fraction_str(box.alpha_tilde_ub),
            "alpha_tilde_ub_decimal": float(box.alpha_tilde_ub),
            "beta_tilde_ub": fraction_str(box.beta_tilde_ub),
            "beta_tilde_ub_decimal": float(box.beta_tilde_ub),
            "max_digit": params.max_digit,
            "gamma_max": box.gamma_max,
            "delta_max": box.delta_max,
            "box_states": box.n_states,
            "tail_index": box.tail_index,
        }
    )
    return 0


def sweep_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({**rec, "agree": "true" if rec["agree"] else "false"})
    return buf.getvalue()


def cmd_sweep(args) -> int:
    p_range, q_range = tuple(args.p_range), tuple(args.q_range)
    rows = sweep(p_range, q_range, args.m, jobs=args.jobs)
    _, skipped = sweep_grid(p_range, q_range, args.m)
    records = [r.as_record() for r in rows]
    for r in rows:
        if r.error:
            log.warning("p=%d q=%d m=%d: %s", r.params.p, r.params.q, r.params.m, r.error)
    if args.format == "csv":
        text = sweep_csv(records)
    else:
        text = json.dumps({"rows": records}, indent=2) + "\n"
    summary = {
        "rows": len(records),
        "skipped_invalid": len(skipped),
        "disagreements": sum(not r["agree"] for r in records),
        "connected_theorem": sum(r["theorem"] == "connected" for r in records),
    }
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _emit({**summary, "out": args.out, "format": args.format})
    else:
        sys.stdout.write(text)
        log.info("%s", json.dumps(summary))
    return 0


def _image_report(image, data: bytes, out: str) -> dict:
    return {
        "out": out,
        "format": data[:2].decode("ascii"),
        "width": image.width,
        "height": image.height,
        "bbox": list(image.bbox),
        "sha256": hashlib.sha256(data).hexdigest(),
    }


def cmd_render(args) -> int:
    params = _params(args)
    image = render_attractor(params, args.depth, args.size, args.size)
    data = image.save(args.out)
    _emit({"params": params.as_dict(), "depth": args.depth, **_image_report(image, data, args.out)})
    return 0


def cmd_map(args) -> int:
    image = render_parameter_map(tuple(args.p_range), tuple(args.q_range), args.m, args.cell)
    data = image.save(args.out)
    _emit({"m": args.m, **_image_report(image, data, args.out)})
    return 0


def _load_word(path: str) -> ExpansionWord:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return ExpansionWord.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read digit word from {path}: {exc}") from exc


def cmd_verify(args) -> int:
    params = _params(args)
    word = _load_word(args.word)
    point = LatticePoint(args.gamma, args.delta)
    ok = verify_expansion(params, word, point)
    _emit(
        {
            "params": params.as_dict(),
            "point": {"gamma": point.gamma, "delta": point.delta},
            "word": word.as_dict(),
            "valid": ok,
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumptile",
        description="Connectedness of self-affine fractals with collinear jump digit sets.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("classify", help="decide connectedness")
    _add_pqm(sub)
    sub.add_argument("--method", choices=("theorem", "search", "both"), default="both")
    sub.set_defaults(func=cmd_classify)

    sub = subs.add_parser("decide", help="is gamma v + delta Av in T - T?")
    _add_pqm(sub)
    sub.add_argument("--gamma", type=int, required=True)
    sub.add_argument("--delta", type=int, required=True)
    sub.set_defaults(func=cmd_decide)

    sub = subs.add_parser("bounds", help="certified alpha~/beta~ upper bounds and search box")
    _add_pqm(sub)
    sub.set_defaults(func=cmd_bounds)

    sub = subs.add_parser("sweep", help="theorem vs search over a (p, q) grid")
    sub.add_argument("--p-range", type=int, nargs=2, metavar=("LO", "HI"), required=True)
    sub.add_argument("--q-range", type=int, nargs=2, metavar=("LO", "HI"), required=True)
    sub.add_argument("-m", type=int, nargs="+", default=[0])
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("render", help="rasterize the attractor to PPM/PGM")
    _add_pqm(sub)
    sub.add_argument("--depth", type=int, default=8)
    sub.add_argument("--size", type=int, default=512)
    sub.add_argument("--out", required=True, help="output path (.pgm for P5, else P6)")
    sub.set_defaults(func=cmd_render)

    sub = subs.add_parser("map", help="render the (p, q) classification map")
    sub.add_argument("--p-range", type=int, nargs=2, metavar=("LO", "HI"), default=[-10, 10])
    sub.add_argument("--q-range", type=int, nargs=2, metavar=("LO", "HI"), default=[-10, 10])
    sub.add_argument("-m", type=int, default=0)
    sub.add_argument("--cell", type=int, default=8, help="pixels per cell")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_map)

    sub = subs.add_parser("verify", help="check a digit word sums to gamma v + delta Av")
    _add_pqm(sub)
    sub.add_argument("--word", required=True, help='JSON file {"preperiod": [...], "period": [...]}')
    sub.add_argument("--gamma", type=int, required=True)
    sub.add_argument("--delta", type=int, required=True)
    sub.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        _emit({"error": "UsageError", "message": str(exc)})
        print(f"jumptile: {exc}", file=sys.stderr)
        return 2
    except JumptileError as exc:
        _emit(exc.as_dict())
        print(f"jumptile: {exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""``entwit`` command-line front end.

Subcommands: ``gen``, ``analyze``, ``witness``, ``scan``, ``threshold`` and ``rate``.
Input problems (unreadable or invalid files, out-of-range parameters) exit with
status 2.  ``analyze`` exits 1 when any test detects entanglement and 0 otherwise.
"""

from __future__ import annotations

import argparse
import sys

from . import analysis, states
from .criteria import ppt_check, realignment_check
from .io import MatrixFileError, format_matrix, read_matrix
from .linalg import Dims
from .maps import LinearMap, detection_value, from_witness, tang_dual, tang_map
from .states import DensityMatrix
from .witness import (
    Witness,
    evaluate,
    optimize_witness,
    ppt_witness,
    projection_witness,
    realignment_witness,
)

EXIT_UNDETECTED, EXIT_DETECTED, EXIT_INPUT = 0, 1, 2

GEN_FAMILIES = (
    "werner", "upb", "horodecki", "mixed", "upb-noisy", "horodecki-noisy",
    "random", "random-ppt", "random-product", "random-separable",
)
METHODS = {"realign": "realign", "thm1": "realign", "ppt": "ppt", "thm2": "ppt", "projection": "projection"}


class InputError(Exception):
    pass


# --- argument helpers ---------------------------------------------------------


def seed_type(text: str) -> int:
    try:
        s = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2^64), got {s}")
    return s


def dims_type(text: str) -> Dims:
    parts = text.replace("x", ",").split(",")
    try:
        m, n = (int(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 3,3 or 3x3, got {text!r}") from None
    if m < 1 or n < 1:
        raise argparse.ArgumentTypeError(f"dims must be positive, got {text!r}")
    return Dims(m, n)


def _keyvals(text: str, allowed: tuple[str, ...]) -> dict[str, float]:
    """Parse ``a=1,b=2``; leading bare values fill ``allowed`` in order."""
    out, keyword_seen = {}, False
    for pos, item in enumerate(filter(None, text.split(","))):
        key, sep, val = item.partition("=")
        keyword_seen |= bool(sep)
        if not sep:
            if keyword_seen or pos >= len(allowed):
                raise InputError(f"positional value {item!r} after keywords or too many values")
            key, val = allowed[pos], item
        if key not in allowed:
            raise InputError(f"expected key=value with key in {allowed}, got {item!r}")
        if key in out:
            raise InputError(f"{key} given twice")
        try:
            out[key] = float(val)
        except ValueError:
            raise InputError(f"{key} must be a number, got {val!r}") from None
    return out


def load_state(path: str) -> DensityMatrix:
    mf = _read(path)
    try:
        return DensityMatrix(mf.mat, mf.dims)
    except ValueError as exc:
        raise InputError(f"{path}: not a valid state: {exc}") from None


def load_witness(path: str) -> Witness:
    mf = _read(path)
    try:
        eps = mf.meta.get("epsilon")
        return Witness(mf.mat, mf.dims, mf.meta.get("origin", "file"), epsilon=float(eps) if eps else None)
    except ValueError as exc:
        raise InputError(f"{path}: not a valid witness: {exc}") from None


def _read(path: str):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except MatrixFileError as exc:
        raise InputError(str(exc)) from None


def parse_map(spec: str) -> tuple[LinearMap, dict]:
    """``tang[:u,b,eps]``, ``tang-dual[:...]`` or a witness file (``[map:]FILE``).

    Tang parameters may be positional or ``key=value``.

    Returns the map and any extra keys (``b``) given with a tang spec.
    """
    name, _, rest = spec.partition(":")
    if name in ("tang", "tang-dual"):
        kv = _keyvals(rest, ("u", "b", "eps"))
        u = kv.get("u", 0.849)
        try:
            L = (tang_map if name == "tang" else tang_dual)(u, kv.get("eps"))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return L, {k: v for k, v in kv.items() if k == "b"}
    path = rest if name == "map" else spec
    return from_witness(load_witness(path)), {}


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# --- subcommands --------------------------------------------------------------


def cmd_gen(args) -> int:
    fam = args.family
    try:
        if fam == "werner":
            rho = states.werner_2x2(_need(args.f, "--f", fam))
        elif fam == "upb":
            rho = states.upb_tiles_bes()
        elif fam == "horodecki":
            rho = states.horodecki_2x4(_need(args.b, "--b", fam))
        elif fam == "mixed":
            rho = states.maximally_mixed(_need(args.dims, "--dims", fam))
        elif fam == "upb-noisy":
            rho = states.noisy_mixture(states.upb_tiles_bes(), _need(args.p, "--p", fam))
        elif fam == "horodecki-noisy":
            b = 0.218 if args.b is None else args.b
            rho = states.noisy_mixture(states.horodecki_2x4(b), _need(args.p, "--p", fam))
        else:
            dims = _need(args.dims, "--dims", fam)
            maker = {
                "random": states.random_density,
                "random-ppt": states.random_ppt_symmetric,
                "random-product": states.random_pure_product,
                "random-separable": states.random_separable,
            }[fam]
            rho = maker(dims, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(format_matrix(rho.mat, rho.dims, {"family": fam}), args.out)
    return 0


def _need(value, flag, fam):
    if value is None:
        raise InputError(f"family {fam!r} requires {flag}")
    return value


def cmd_analyze(args) -> int:
    rho = load_state(args.state)
    r = realignment_check(rho)
    p = ppt_check(rho)
    report = [
        ("realign_norm", r.value, r.entangled),
        ("ppt_min_eig", p.min_eigenvalue, p.entangled),
        ("ppt_norm", p.value, p.value > 1 + 1e-10),
    ]
    w_r = evaluate(realignment_witness(rho), rho)
    w_p = evaluate(ppt_witness(rho), rho)
    report += [("w_realign", w_r, w_r < -1e-10), ("w_ppt", w_p, w_p < -1e-10)]
    for path in args.witness:
        W = load_witness(path)
        try:
            t = evaluate(W, rho)
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
        report.append((f"witness[{path}]", t, t < -1e-10))
    for spec in args.map:
        L, _ = parse_map(spec)
        try:
            det = detection_value(L, rho)
        except ValueError as exc:
            raise InputError(f"{spec}: {exc}") from None
        report.append((f"map_lambda_min[{spec}]", det.lambda_min, det.entangled))

    detected = any(flag for _, _, flag in report)
    width = max(len(name) for name, _, _ in report)
    print(f"state {args.state}  dims {rho.dims.m}x{rho.dims.n}")
    for name, value, flag in report:
        print(f"{name:<{width}}  {value: .12g}  {'DETECTED' if flag else '-'}")
    print("verdict: " + ("entangled (detected)" if detected else "undetected"))
    if args.csv:
        header = ",".join(name for name, _, _ in report) + ",detected"
        row = ",".join(f"{v:.17g}" for _, v, _ in report) + f",{int(detected)}"
        _emit(header + "\n" + row + "\n", args.csv)
    return EXIT_DETECTED if detected else EXIT_UNDETECTED


def cmd_witness(args) -> int:
    if args.kind == "witness":
        W = load_witness(args.input)
    else:
        rho = load_state(args.input)
        method = METHODS[args.method]
        if method == "realign":
            W = realignment_witness(rho)
        elif method == "ppt":
            W = ppt_witness(rho)
        else:
            W = projection_witness(rho, restarts=args.restarts, seed=args.seed)
    meta = {"origin": W.origin}
    if W.epsilon is not None:
        meta["epsilon"] = f"{W.epsilon:.17g}"
    if args.optimize:
        W = optimize_witness(W, restarts=args.restarts, seed=args.seed)
        meta["epsilon"] = f"{W.epsilon:.17g}"
    _emit(format_matrix(W.mat, W.dims, meta), args.out)
    return 0


def cmd_scan(args) -> int:
    try:
        grid = analysis.parse_range(args.range)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    W = load_witness(args.witness) if args.witness else None
    L, extra = parse_map(args.map) if args.map else (None, {})
    b = extra.get("b", args.b)
    try:
        rows = analysis.scan(args.family, grid, b, W, L, jobs=args.jobs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(analysis.format_scan_csv(rows), args.out)
    return 0


def _detector(spec: str):
    """Returns the detector and any family overrides it carries."""
    name, _, rest = spec.partition(":")
    if name == "realign" and not rest:
        return analysis.realign_detector, {}
    if name == "ppt" and not rest:
        return analysis.ppt_detector, {}
    if name == "witness" and rest:
        return analysis.witness_detector(load_witness(rest)), {}
    if name in ("map", "tang", "tang-dual"):
        L, extra = parse_map(spec)
        return analysis.map_detector(L), extra
    raise InputError(f"unknown detector {spec!r}; use realign, ppt, witness:FILE, map:FILE or tang[:u=..,eps=..,b=..]")


def cmd_threshold(args) -> int:
    detector, extra = _detector(args.detector)
    if args.state:
        rho = load_state(args.state)
    elif args.family == "upb-noisy":
        rho = states.upb_tiles_bes()
    else:
        try:
            rho = states.horodecki_2x4(extra.get("b", args.b))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        res = analysis.mixture_threshold(rho, detector, args.tol)
    except analysis.BracketError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(f"detector cannot be applied to this state: {exc}") from None
    print(f"p* = {res.p_star:.10f}")
    print(f"diagnostic(p*) = {res.diagnostic:.6e}")
    print(f"diagnostic(0) = {res.d_lo:.6e}  diagnostic(1) = {res.d_hi:.6e}")
    return 0


def cmd_rate(args) -> int:
    W = load_witness(args.witness)
    if args.count < 1:
        raise InputError(f"--count must be positive, got {args.count}")
    r = analysis.ppt_symmetric_detection_rate(W, args.count, args.seed)
    print(f"samples {r.count}  dims {W.dims.m}x{W.dims.n}  seed {args.seed}")
    print(f"witness_rate     {r.witness:.6f}")
    print(f"witness_map_rate {r.witness_map:.6f}")
    print(f"realign_rate     {r.realignment:.6f}")
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="entwit", description="Bipartite entanglement witnesses and positive maps.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a state file")
    g.add_argument("--family", required=True, choices=GEN_FAMILIES)
    g.add_argument("--f", type=float, help="Werner parameter in [-1, 1]")
    g.add_argument("--b", type=float, help="Horodecki parameter in (0, 1); default 0.218 for horodecki-noisy")
    g.add_argument("--p", type=float, help="weight of the entangled state in [0, 1]")
    g.add_argument("--dims", type=dims_type, help="local dimensions, e.g. 3,3")
    g.add_argument("--seed", type=seed_type, default=0)
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="run every test on a state file")
    a.add_argument("state")
    a.add_argument("--map", action="append", default=[], help="tang[:u=..,eps=..], tang-dual[:...] or map:FILE")
    a.add_argument("--witness", action="append", default=[], help="witness file to evaluate")
    a.add_argument("--csv", help="also write a one-row CSV report here")
    a.set_defaults(func=cmd_analyze)

    w = sub.add_parser("witness", help="build a witness for a state")
    w.add_argument("input")
    w.add_argument("--method", choices=sorted(METHODS), default="realign")
    w.add_argument("--kind", choices=("state", "witness"), default="state",
                   help="read INPUT as a state (default) or as an existing witness to optimise")
    w.add_argument("--optimize", action="store_true", help="shift by the product-state minimum")
    w.add_argument("--restarts", type=int, default=50)
    w.add_argument("--seed", type=seed_type, default=0)
    w.add_argument("--out")
    w.set_defaults(func=cmd_witness)

    s = sub.add_parser("scan", help="CSV of every test along a state family")
    s.add_argument("--family", required=True, choices=analysis.FAMILIES)
    s.add_argument("--range", required=True, help="lo:hi:steps (steps points, inclusive)")
    s.add_argument("--b", type=float, default=0.218, help="Horodecki b for horodecki-noisy")
    s.add_argument("--map")
    s.add_argument("--witness")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan)

    t = sub.add_parser("threshold", help="bisect the noise weight at which a detector fires")
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", choices=("upb-noisy", "horodecki-noisy"))
    src.add_argument("--state", help="mix this state with white noise instead")
    t.add_argument("--detector", required=True)
    t.add_argument("--b", type=float, default=0.218)
    t.add_argument("--tol", type=float, default=1e-5)
    t.set_defaults(func=cmd_threshold)

    r = sub.add_parser("rate", help="detection rate on random PPT-symmetric states")
    r.add_argument("--witness", required=True)
    r.add_argument("--count", type=int, default=10_000)
    r.add_argument("--seed", type=seed_type, default=0)
    r.set_defaults(func=cmd_rate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"entwit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

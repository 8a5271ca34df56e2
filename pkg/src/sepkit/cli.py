"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed input, 2 invariant or
dimension violation, 3 ``analyze`` found the state entangled, 4
``bellbound`` observed a distance below 1/4.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import matrixfile as mf
from .errors import SepkitError
from .maps import (
    NOT_K_POSITIVE,
    NOT_POSITIVE,
    is_completely_positive,
    is_k_positive_numeric,
    is_positive_numeric,
    map_from_choi,
    map_from_kraus,
)
from .separability import ENTANGLED_CERTIFIED, analyze, bell_bound_check
from .states import BipartiteState
from .witness import (
    NOT_BLOCK_POSITIVE,
    Witness,
    detects,
    is_block_positive_numeric,
    map_from_witness,
    witness_from_map,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVARIANT = 2
EXIT_ENTANGLED = 3
EXIT_BOUND_FAILED = 4
DEFAULT_SEED = 42


class UsageError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in np.asarray(v)) + "]"


def _load(path, kinds):
    f = mf.load(path)
    if f.kind not in kinds:
        raise UsageError(f"{path}: expected kind {' or '.join(kinds)}, got '{f.kind}'", EXIT_PARSE)
    return f


def _load_state(path) -> BipartiteState:
    f = _load(path, ("state",))
    return BipartiteState(f.data, f.dA, f.dB)


def _load_witness(path) -> Witness:
    f = _load(path, ("witness",))
    return Witness(f.data, f.dA, f.dB)


def _load_map(path):
    f = _load(path, ("map-choi", "kraus-list"))
    if f.kind == "kraus-list":
        return map_from_kraus(list(f.data))
    return map_from_choi(f.data, f.dA, f.dB)


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_analyze(args) -> int:
    state = _load_state(args.path)
    t0 = time.perf_counter()
    rep = analyze(state, iterations=args.iterations, seed=args.seed)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    if args.json:
        print(json.dumps({
            "classification": rep.classification,
            "pptMinEig": rep.ppt.min_eigenvalue,
            "blockResidual": rep.block_residual,
            "distance": rep.distance,
            "runtimeMs": runtime_ms,
        }))
    else:
        print(f"classification: {rep.classification}")
        print(f"dims: {state.dA} x {state.dB}")
        print("partial transpose spectrum: " + ", ".join(f"{x:.10g}" for x in rep.ppt.spectrum))
        print(f"PPT min eigenvalue: {rep.ppt.min_eigenvalue:.10g}")
        print(f"block product residual: {rep.block_residual:.6g}")
        print(f"max block commutator: {rep.max_commutator:.6g}")
        dist = "skipped" if rep.distance is None else f"{rep.distance:.6g}"
        print(f"distance to separable (Frobenius, upper bound): {dist}")
        for note in rep.notes:
            print(f"note: {note}")
    return EXIT_ENTANGLED if rep.classification == ENTANGLED_CERTIFIED else EXIT_OK


def cmd_witness(args) -> int:
    sub = args.subcommand
    if sub == "from-map":
        m = _load_map(args.paths[0])
        w = witness_from_map(m)
        _emit(mf.dumps("witness", w.dA, w.dB, w.H), args.output)
        return EXIT_OK
    if sub == "to-map":
        w = _load_witness(args.paths[0])
        m = map_from_witness(w)
        _emit(mf.dumps("map-choi", m.d_in, m.d_out, m.choi), args.output)
        return EXIT_OK
    if sub == "check":
        w = _load_witness(args.paths[0])
        v = is_block_positive_numeric(w, restarts=args.restarts, seed=args.seed)
        print(f"verdict: {v.label}")
        print(f"min product-vector value: {v.value:.10g}")
        print(f"lambda_min(H): {w.min_eigenvalue:.10g}")
        print(f"Tr(H): {w.trace:.10g}")
        if v.label == NOT_BLOCK_POSITIVE:
            z, y = v.vectors
            print(f"z = {_fmt_vec(z)}")
            print(f"v = {_fmt_vec(y)}")
        return EXIT_OK
    if sub == "detect":
        if len(args.paths) != 2:
            raise UsageError("detect needs WITNESS and STATE paths", EXIT_PARSE)
        w = _load_witness(args.paths[0])
        state = _load_state(args.paths[1])
        value, flag = detects(w, state)
        print(f"Tr(H rho): {value:.10g}")
        print(f"detected: {'yes' if flag else 'no'}")
        return EXIT_OK
    raise UsageError(f"unknown witness subcommand {sub!r}", EXIT_PARSE)


def cmd_map(args) -> int:
    m = _load_map(args.path)
    if args.k is not None and not 1 <= args.k <= min(m.d_in, m.d_out):
        raise UsageError(f"--k must lie in [1, {min(m.d_in, m.d_out)}], got {args.k}", EXIT_INVARIANT)
    pos = is_positive_numeric(m, restarts=args.restarts, seed=args.seed)
    if pos.label == NOT_POSITIVE:
        x, y = pos.vectors
        print(f"positive: NO (value {pos.value:.10g}, x = {_fmt_vec(x)}, y = {_fmt_vec(y)})")
    elif pos.holds:
        print(f"positive: empirical-yes (min value {pos.value:.3g} over {pos.restarts} restarts)")
    else:
        print("positive: inconclusive")
    if args.k is not None:
        kp = is_k_positive_numeric(m, args.k, restarts=args.restarts, seed=args.seed)
        if kp.label == NOT_K_POSITIVE:
            print(f"{args.k}-positive: NO (value {kp.value:.10g}, psi = {_fmt_vec(kp.vectors[0])})")
        elif kp.holds:
            print(f"{args.k}-positive: empirical-yes (min value {kp.value:.3g})")
        else:
            print(f"{args.k}-positive: inconclusive")
    cp = is_completely_positive(m)
    print(f"CP: {'yes' if cp.is_cp else 'NO'} (lambda_min(choi) = {cp.min_eigenvalue:.10g})")
    return EXIT_OK


def cmd_bellbound(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1", EXIT_INVARIANT)
    res = bell_bound_check(args.samples, seed=args.seed)
    print(f"samples: {res.samples}")
    print(f"min trace-norm distance: {res.min_trace_norm_distance:.12g}")
    print(f"closest separable point (Frank-Wolfe) distance: {res.closest_distance:.12g}")
    print(f"bound 1/4: {'pass' if res.pass_ else 'FAIL'}")
    return EXIT_OK if res.pass_ else EXIT_BOUND_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepkit", description="Separability and positive-map analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify a bipartite state")
    a.add_argument("path")
    a.add_argument("--json", action="store_true")
    a.add_argument("--iterations", type=int, default=500)
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.set_defaults(func=cmd_analyze)

    w = sub.add_parser("witness", help="witness <-> map conversion and checks")
    w.add_argument("subcommand", choices=["from-map", "to-map", "check", "detect"])
    w.add_argument("paths", nargs="+")
    w.add_argument("-o", "--output")
    w.add_argument("--restarts", type=int)
    w.add_argument("--seed", type=int, default=DEFAULT_SEED)
    w.set_defaults(func=cmd_witness)

    m = sub.add_parser("map", help="positivity hierarchy of a linear map")
    m.add_argument("subcommand", choices=["test"])
    m.add_argument("path")
    m.add_argument("--k", type=int)
    m.add_argument("--restarts", type=int)
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)
    m.set_defaults(func=cmd_map)

    b = sub.add_parser("bellbound", help="reproduce the 1/4 distance bound for the Bell state")
    b.add_argument("--samples", type=int, default=10000)
    b.add_argument("--seed", type=int, default=DEFAULT_SEED)
    b.set_defaults(func=cmd_bellbound)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except mf.MatrixFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SepkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())

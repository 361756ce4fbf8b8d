"""Command-line entry point: ``qmaps <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure
(including theorem and contrapositive violations).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile

import numpy as np

from . import channels, classify, tomography
from .discord import OptimizerConfig, discord
from .qcore import haar_unitary
from .states import BipartiteState, example_operator

log = logging.getLogger("qmaps")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2


class InputError(Exception):
    pass


# --- state files -------------------------------------------------------------

def write_state(path: str, rho: BipartiteState) -> None:
    """Write a ``.qm`` file: JSON with keys dim_s, dim_e, re, im (row-major)."""
    flat = rho.mat.reshape(-1)
    obj = {"dim_s": rho.dim_s, "dim_e": rho.dim_e,
           "re": [float(x) for x in flat.real], "im": [float(x) for x in flat.imag]}
    _atomic_write(path, json.dumps(obj) + "\n")


def read_state(path: str) -> BipartiteState:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        ds, de = int(obj["dim_s"]), int(obj["dim_e"])
        n = ds * de
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
        if re.size != n * n or im.size != n * n:
            raise InputError(f"{path}: expected {n * n} entries in re and im")
        return BipartiteState((re + 1j * im).reshape(n, n), ds, de)
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read state file {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: not a valid bipartite state: {exc}") from exc


# --- output ------------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qmaps-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    if out:
        _atomic_write(out, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _check_out(path: str | None) -> None:
    if path is None:
        return
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d) or not os.access(d, os.W_OK):
        raise InputError(f"output directory {d} is not writable")


# --- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _dims(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        ds, de = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like NxM, got {text!r}")
    if ds < 1 or de < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return ds, de


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_positive, default=1e-8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=20)
    common.add_argument("--grid", type=_dims, default=(64, 128), help="discord grid as THETAxPHI")
    common.add_argument("--out", default=None, help="CSV output path (stdout if omitted)")

    p = _Parser(prog="qmaps", description="Reduced dynamics, complete positivity and discord.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep-example", parents=[common], help="closed-form vs numeric example spectrum")
    s.add_argument("--c23", type=float, default=0.5)
    s.add_argument("--points", type=int, default=101)

    s = sub.add_parser("discord", parents=[common], help="mutual information and discord of a state")
    s.add_argument("--state", required=True)

    s = sub.add_parser("classify", parents=[common], help="correlation class of a state")
    s.add_argument("--state", required=True)

    s = sub.add_parser("cp-check", parents=[common], help="CP test of the map induced from a state")
    s.add_argument("--state", default=None)
    s.add_argument("--c23", type=float, default=1.0)
    s.add_argument("--omega-t", type=float, default=0.05)

    s = sub.add_parser("theorem-check", parents=[common], help="randomized zero-discord => CP check")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--dims", type=_dims, action="append", default=None)

    s = sub.add_parser("ncp-search", parents=[common], help="search correlated states for not-CP maps")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--dims", type=_dims, action="append", default=None)
    s.add_argument("--sampler", choices=classify.SAMPLERS, default="random-correlated")

    s = sub.add_parser("tomo-sim", parents=[common], help="simulated process tomography, Howard scenario")
    s.add_argument("--mode", choices=[m.value for m in tomography.Mode], default="rotation-only")
    s.add_argument("--p0", type=float, default=0.7)
    s.add_argument("--c23", type=float, default=1.0, help="correlation strength in [0, 1]")
    s.add_argument("--omega-t", type=float, default=0.05)
    s.add_argument("--trials", type=int, default=1)
    return p


def _optimizer(args) -> OptimizerConfig:
    return OptimizerConfig(grid=tuple(args.grid), restarts=args.restarts, seed=args.seed)


# --- subcommands ---------------------------------------------------------------

def cmd_sweep_example(args) -> int:
    if args.points < 2:
        raise InputError("--points must be at least 2")
    rows = []
    for wt in np.linspace(0.0, np.pi / 2, args.points):
        lam, _ = channels.analytic_example(wt, args.c23)
        num = channels.choi_eig(channels.example_map(wt, args.c23)).lambdas
        rows.append([wt, *np.sort(lam)[::-1], *num, num[-1]])
    header = ["omega_t"] + [f"analytic_{k}" for k in range(1, 5)] + \
             [f"numeric_{k}" for k in range(1, 5)] + ["min_lambda"]
    emit_csv(header, rows, args.out)
    return EXIT_OK


def cmd_discord(args) -> int:
    rho = read_state(args.state)
    res = discord(rho, _optimizer(args))
    print(f"I = {res.mutual_info:.12g}")
    print(f"J = {res.j_max:.12g}")
    print(f"discord = {res.discord:.12g}")
    print(f"converged = {fmt(res.converged)}")
    if args.out:
        emit_csv(["mutual_info", "j_max", "discord", "converged", "restarts_used"],
                 [[res.mutual_info, res.j_max, res.discord, res.converged, res.restarts_used]], args.out)
    if not res.converged:
        log.warning("discord optimizer did not report convergence")
    log.debug("best basis vectors:\n%s", res.best_basis.vectors)
    return EXIT_OK


def cmd_classify(args) -> int:
    rho = read_state(args.state)
    c = classify.classify_state(rho, args.tol, _optimizer(args))
    print(c.label.value)
    if args.out:
        emit_csv(["class", "product_distance", "discord", "min_pt_eig"],
                 [[c.label.value, c.product_distance, c.discord, c.min_pt_eigenvalue]], args.out)
    return EXIT_OK


def cmd_cp_check(args) -> int:
    if args.state:
        rho = read_state(args.state)
    else:
        try:
            rho = BipartiteState(example_operator(np.zeros(3), args.c23), 2, 2)
        except ValueError as exc:
            raise InputError(f"--c23 {args.c23}: {exc}") from exc
    if (rho.dim_s, rho.dim_e) == (2, 2):
        u = channels.example_unitary(args.omega_t)
    else:
        u = haar_unitary(rho.dim, np.random.default_rng(args.seed))
    m = channels.map_from_joint(rho, u)
    lam = channels.choi_eig(m).lambdas
    ok, lo = channels.is_cp(m, args.tol)
    print(f"min_choi_eig = {lo:.12g}  cp = {fmt(ok)}")
    if args.out:
        emit_csv(["min_choi_eig", "is_cp"] + [f"lambda_{k + 1}" for k in range(len(lam))],
                 [[lo, ok, *lam]], args.out)
    return EXIT_OK


def cmd_theorem_check(args) -> int:
    dims = args.dims or [(2, 2)]
    recs = classify.theorem_harness(args.trials, dims, args.seed)
    emit_csv(classify.TrialRecord.CSV_HEADER, [r.csv_row() for r in recs], args.out)
    return EXIT_OK


def cmd_ncp_search(args) -> int:
    dims = args.dims or [(2, 2), (2, 3)]
    recs = classify.ncp_search(args.trials, args.sampler, args.seed, dims, _optimizer(args))
    emit_csv(classify.TrialRecord.CSV_HEADER, [r.csv_row() for r in recs], args.out)
    log.info("not-CP fraction: %.4f", classify.ncp_fraction(recs))
    return EXIT_OK


def cmd_tomo_sim(args) -> int:
    mode = tomography.Mode(args.mode)
    u = channels.example_unitary(args.omega_t)
    rows = []
    for k in range(args.trials):
        seed = args.seed + k
        try:
            res = tomography.howard_scenario(args.p0, args.c23, u, seed, mode)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        for branch, r in zip(("classical", "discordant"), res):
            rows.append([seed, branch, mode.value, r.min_eigenvalue, r.negativity,
                         r.cp_distance, r.condition_number, r.tp_violation])
    emit_csv(["seed", "branch", "mode", "min_eig", "negativity", "cp_distance", "condition_number",
              "tp_violation"], rows, args.out)
    return EXIT_OK


COMMANDS = {
    "sweep-example": cmd_sweep_example,
    "discord": cmd_discord,
    "classify": cmd_classify,
    "cp-check": cmd_cp_check,
    "theorem-check": cmd_theorem_check,
    "ncp-search": cmd_ncp_search,
    "tomo-sim": cmd_tomo_sim,
}


def _configure_logging() -> None:
    level = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("QMAPS_LOG", "quiet").lower(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def dispatch(argv: list[str] | None = None) -> int:
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _check_out(args.out)
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"qmaps: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (classify.TheoremViolation, classify.ContrapositiveViolation) as exc:
        print(f"qmaps: violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (np.linalg.LinAlgError, tomography.RankDeficientInputs, FloatingPointError) as exc:
        print(f"qmaps: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"qmaps: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

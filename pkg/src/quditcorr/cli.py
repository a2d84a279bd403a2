"""Command-line entry point.

Exit status: 0 when every report passes, 1 when at least one fails (the
failing records and their states go to a sidecar file), 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bell, entropy, maps, tomography
from .io import SchemaError, fixtures, load_density, load_matrix, matrix_to_json
from .linalg import DimensionError, InvalidDensityError, NotUnitaryError, random_density
from .report import InequalityReport, to_csv, to_jsonl

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    options: dict = field(default_factory=dict)
    trials: int = 1
    seed: int = 0
    fmt: str = "json"
    output: str | None = None
    violations: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.fmt not in ("json", "csv"):
            raise UsageError("format must be json or csv")


@dataclass
class _Record:
    data: dict
    passed: bool = True
    state: np.ndarray | None = None


def _from_report(rep: InequalityReport, state=None, **extra) -> _Record:
    d = rep.to_dict()
    d.update(extra)
    return _Record(d, rep.passed, state)


def _trial_rng(seed: int, trial: int, *more: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial, *more])


# -- subcommands ------------------------------------------------------------------


def _maps(cfg: RunConfig) -> list[_Record]:
    o = cfg.options
    kind, n = o["kind"], o["n"]
    L = maps.MAP_BUILDERS[kind](n)
    if cfg.action == "build":
        return [_Record({"kind": kind, "label": L.label, "n": n, "matrix": matrix_to_json(L.matrix)})]
    rep = maps.is_positive_map_on_sample(L, cfg.trials, np.random.default_rng([cfg.seed]))
    return [_from_report(rep, seed=cfg.seed)]


def _ineq(cfg: RunConfig) -> list[_Record]:
    o = cfg.options
    out = []
    if cfg.action in ("subadd", "mutual"):
        fn = entropy.check_subadditivity if cfg.action == "subadd" else entropy.single_qudit_mutual_info
        variant = o.get("variant") or ("portrait" if cfg.action == "subadd" else None)
        for i in range(cfg.trials):
            rho = random_density(o["n"], _trial_rng(cfg.seed, i))
            rep = fn(rho, q=o["q"], variant=variant)
            rep.digest = f"seed={cfg.seed},trial={i}"
            out.append(_from_report(rep, rho))
    elif cfg.action == "mono":
        if o["reduction"] == "perm":
            reds = [entropy.reduction("perm", [int(x) for x in o["perm"].split(",")])] if o.get("perm") else entropy.all_permutation_reductions()
        else:
            reds = [entropy.reduction(o["reduction"])]
        for i in range(cfg.trials):
            rho = random_density(4, _trial_rng(cfg.seed, i, 0))
            sigma = entropy.regularize(random_density(4, _trial_rng(cfg.seed, i, 1)))
            for red in reds:
                rep = entropy.check_monotonicity(rho, sigma, red)
                rep.digest = f"seed={cfg.seed},trial={i}"
                out.append(_from_report(rep, np.stack([rho, sigma])))
    elif cfg.action == "diag":
        for d in simplex_grid(o["grid"]):
            out.append(_from_report(entropy.diagonal_inequality(d)))
    return out


def simplex_grid(k: int) -> list[tuple[float, float, float]]:
    """Points (i, j, k-i-j)/k of the probability 3-simplex."""
    return [(i / k, j / k, (k - i - j) / k) for i in range(k + 1) for j in range(k + 1 - i)]


def _tomo(cfg: RunConfig) -> list[_Record]:
    o = cfg.options
    rho = load_density(o["state"])
    if cfg.action == "eval":
        u = load_matrix(o["unitary"])
        labels = None
        if o.get("labels"):
            labels = tomography.index_bijection(o["labels"]).label_strings()
        t = tomography.tomogram(rho, u, labels)
        return [_Record(t.to_dict())]
    dims = [int(x) for x in o["dims"].split(",")]
    need = int(np.prod(dims))
    padded = rho.shape[0] < need
    if padded:
        rho = tomography.embed_pad(rho, need)
    rep = tomography.no_signaling_check(rho, dims, cfg.trials, np.random.default_rng([cfg.seed]))
    return [_from_report(rep, rho, padded=padded, seed=cfg.seed)]


def _bell(cfg: RunConfig) -> list[_Record]:
    o = cfg.options
    if cfg.action == "laplace":
        rng = np.random.default_rng([cfg.seed])
        pts = rng.uniform(0.05, 0.95, (o["points"], 4))
        return [_from_report(bell.laplace_check(pts, o["h"]), seed=cfg.seed)]
    rho = load_density(o["state"])
    if rho.shape != (4, 4):
        raise UsageError("bell commands need a 4x4 state")
    if cfg.action == "ppt":
        res = bell.ppt_check(rho)
        rep = res.to_report()
        return [_from_report(rep, rho, min_pt_eigenvalue=res.min_pt_eigenvalue, is_ppt=res.is_ppt)]
    res = bell.optimize_chsh(
        rho,
        restarts=o["restarts"],
        rng_seed=cfg.seed,
        strict_paper_pairing=o["strict_paper_pairing"],
        max_evals=o["max_evals"],
    )
    return [_from_report(bell.chsh_report(res), rho, seed=cfg.seed)]


def _fixtures(cfg: RunConfig) -> list[_Record]:
    return [_Record({"fixture": p.name, "path": str(p)}) for p in fixtures(cfg.options["out"])]


DISPATCH = {"maps": _maps, "ineq": _ineq, "tomo": _tomo, "bell": _bell, "fixtures": _fixtures}


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def run(cfg: RunConfig) -> int:
    try:
        records = DISPATCH[cfg.command](cfg)
    except (SchemaError, InvalidDensityError, DimensionError, NotUnitaryError, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    data = [r.data for r in records]
    _write(to_csv(data) if cfg.fmt == "csv" else to_jsonl(data), cfg.output)
    failed = [r for r in records if not r.passed]
    if not failed:
        return EXIT_OK
    side = cfg.violations or ((cfg.output + ".violations.jsonl") if cfg.output else "quditcorr-violations.jsonl")
    lines = []
    for r in failed:
        rec = dict(r.data)
        if r.state is not None:
            st = np.asarray(r.state)
            rec["state"] = [matrix_to_json(s) for s in st] if st.ndim == 3 else matrix_to_json(st)
        lines.append(rec)
    Path(side).write_text(to_jsonl(lines))
    print(f"{len(failed)} violation(s); details in {side}", file=sys.stderr)
    return EXIT_VIOLATION


def _default_seed() -> int:
    env = os.environ.get("QUDITCORR_SEED")
    try:
        return int(env) if env else 0
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_default_seed(), help="default: $QUDITCORR_SEED or 0")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--violations", default=None, help="sidecar file for failing records")

    p = argparse.ArgumentParser(prog="quditcorr", description="Check quantum-correlation inequalities of single qudit states.")
    sub = p.add_subparsers(dest="command", required=True)

    mp = sub.add_parser("maps").add_subparsers(dest="action", required=True)
    for name in ("build", "check"):
        q = mp.add_parser(name, parents=[common])
        q.add_argument("--kind", choices=sorted(maps.MAP_BUILDERS), required=True)
        q.add_argument("--n", type=int, default=3)

    ip = sub.add_parser("ineq").add_subparsers(dest="action", required=True)
    for name in ("subadd", "mutual"):
        q = ip.add_parser(name, parents=[common])
        q.add_argument("--n", type=int, default=3)
        q.add_argument("--q", type=float, default=1.0)
        q.add_argument("--variant", choices=("portrait", "raw"), default=None)
    q = ip.add_parser("mono", parents=[common])
    q.add_argument("--reduction", choices=("ptrace", "j32", "alt", "perm"), default="ptrace")
    q.add_argument("--perm", default=None, help="comma-separated permutation of 0..3; default all 24")
    q = ip.add_parser("diag", parents=[common])
    q.add_argument("--grid", type=int, default=19, help="grid divisions; 19 gives 210 points")

    tp = sub.add_parser("tomo").add_subparsers(dest="action", required=True)
    q = tp.add_parser("eval", parents=[common])
    q.add_argument("--state", required=True)
    q.add_argument("--unitary", required=True)
    q.add_argument("--labels", choices=("two_qubit", "qudit32", "qubit_qutrit"), default=None)
    q = tp.add_parser("nosig", parents=[common])
    q.add_argument("--state", required=True)
    q.add_argument("--dims", default="2,2")

    bp = sub.add_parser("bell").add_subparsers(dest="action", required=True)
    q = bp.add_parser("chsh", parents=[common])
    q.add_argument("--state", required=True)
    q.add_argument("--restarts", type=int, default=32)
    q.add_argument("--max-evals", type=int, default=2000)
    q.add_argument("--strict-paper-pairing", action="store_true")
    q = bp.add_parser("ppt", parents=[common])
    q.add_argument("--state", required=True)
    q = bp.add_parser("laplace", parents=[common])
    q.add_argument("--points", type=int, default=100)
    q.add_argument("--h", type=float, default=1e-3)

    q = sub.add_parser("fixtures", parents=[common])
    q.add_argument("--out", default=".")
    return p


DEFAULT_TRIALS = {"maps": 100, "ineq": 100, "tomo": 100}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items() if k not in ("command", "action", "seed", "trials", "fmt", "output", "violations")}
    trials = ns.trials if ns.trials is not None else DEFAULT_TRIALS.get(ns.command, 1)
    return RunConfig(
        command=ns.command,
        action=getattr(ns, "action", None),
        options=opts,
        trials=trials,
        seed=ns.seed,
        fmt=ns.fmt,
        output=ns.output,
        violations=ns.violations,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: energy | region | stress | laminate | relax | scan | verify
| energy3d.  Structured output is JSON (stdout) or CSV (scan files);
floats are printed with shortest round-trip precision.  Exit codes:
0 ok, 2 usage/parse error, 3 domain error, 4 I/O error.

The environment variable ``NEMEM_THREADS`` caps the scan worker count
(0 or unset = auto); results are merged in deterministic row order, so
serial and parallel runs are bit-identical.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .algebra import svd32
from .constitutive import MaterialParams, bulk_energy, entropic_energy
from .membrane import DomainError, Region, classify, membrane_stress, psi
from .microstructure import measure_to_json_dict, young_measure_for
from .relaxation import OracleConfig, relax_lamination
from .verification import DEFAULT_R_VALUES, run_suites

__all__ = ["main"]


class SystemExit2(Exception):
    """Parse-level failure; the offending token is in the message."""


def _fmt(x):
    return repr(float(x))


def _parse_matrix(text, rows, cols):
    out = []
    row_chunks = [chunk for chunk in text.split(";")]
    if len(row_chunks) != rows:
        raise SystemExit2(f"matrix needs {rows} rows separated by ';', got {len(row_chunks)}")
    for chunk in row_chunks:
        entries = chunk.split()
        if len(entries) != cols:
            raise SystemExit2(f"matrix row {chunk!r} needs {cols} entries")
        row = []
        for tok in entries:
            try:
                row.append(float(tok))
            except ValueError:
                raise SystemExit2(f"bad matrix entry {tok!r}") from None
        out.append(row)
    return np.array(out)


def _parse_vector(text, n):
    entries = text.split()
    if len(entries) != n:
        raise SystemExit2(f"vector needs {n} entries, got {len(entries)}")
    vals = []
    for tok in entries:
        try:
            vals.append(float(tok))
        except ValueError:
            raise SystemExit2(f"bad vector entry {tok!r}") from None
    return np.array(vals)


def _params(args):
    try:
        return MaterialParams(mu=args.mu, r=args.r, kappa=getattr(args, "kappa", 0.0))
    except ValueError as exc:
        raise SystemExit2(str(exc)) from None


def _invariants(args):
    # Matrix input wins; otherwise the diagonal realization of the pair.
    if getattr(args, "F", None) is not None:
        F = _parse_matrix(args.F, 3, 2)
        sd = svd32(F)
        return F, sd.lamM, sd.delta
    if args.lamM is None or args.delta is None:
        raise SystemExit2("need either --F or both --lamM and --delta")
    if args.lamM < 0 or args.delta < 0:
        raise SystemExit2("--lamM and --delta must be non-negative")
    lam, dlt = args.lamM, args.delta
    if dlt > lam * lam * (1.0 + 1e-12):
        return None, lam, dlt  # unrealizable pair; handled per command
    F = np.array([[lam, 0.0], [0.0, dlt / lam if lam > 0 else 0.0], [0.0, 0.0]])
    return F, lam, dlt


def _cmd_energy(args):
    params = _params(args)
    _, lam, dlt = _invariants(args)
    region = classify(lam, dlt, params)
    if region is Region.INVALID:
        raise DomainError(
            f"(lamM, delta) = ({lam}, {dlt}) is not realizable by a 3x2 matrix"
        )
    energy = psi(lam, dlt, params)
    if args.normalized:
        energy = energy / (0.5 * params.mu)
    print(json.dumps({"region": region.value, "energy": energy}))
    return 0


def _cmd_region(args):
    params = _params(args)
    _, lam, dlt = _invariants(args)
    print(json.dumps({"region": classify(lam, dlt, params).value}))
    return 0


def _cmd_stress(args):
    params = _params(args)
    F, lam, dlt = _invariants(args)
    if F is None:
        raise DomainError(
            f"(lamM, delta) = ({lam}, {dlt}) is not realizable by a 3x2 matrix"
        )
    state = membrane_stress(F, params)
    out = {
        "region": state.region.value,
        "classification": state.classification,
        "sigma": state.sigma.tolist(),
        "principal_values": list(state.principal_values),
        "principal_dirs": [d.tolist() for d in state.principal_dirs],
    }
    print(json.dumps(out))
    return 0


def _cmd_energy3d(args):
    params = _params(args)
    F = _parse_matrix(args.F, 3, 3)
    if args.n is not None:
        n = _parse_vector(args.n, 3)
        energy = entropic_energy(F, n, params)
    else:
        energy = bulk_energy(F, params)
    print(json.dumps({"energy": energy if np.isfinite(energy) else "inf"}))
    return 0


def _cmd_laminate(args):
    params = _params(args)
    F = _parse_matrix(args.F, 3, 2)
    nu = young_measure_for(F, params)
    print(json.dumps(measure_to_json_dict(nu)))
    return 0


def _cmd_relax(args):
    params = _params(args)
    F = _parse_matrix(args.F, 3, 2)
    cfg = OracleConfig(
        depth=args.depth,
        n_dirs=args.n_dirs,
        t_grid=args.t_grid,
        refine_iters=args.refine_iters,
        seed=args.seed,
    )
    res = relax_lamination(F, params, cfg)
    out = {
        "value": res.value,
        "closed_form": res.closed_form,
        "gap": res.gap,
        "best_measure": measure_to_json_dict(res.best_measure),
    }
    print(json.dumps(out))
    return 0


def _thread_count():
    raw = os.environ.get("NEMEM_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def _scan_row(lam, deltas, params):
    cells = []
    for dlt in deltas:
        region = classify(lam, dlt, params)
        if region is Region.INVALID:
            cells.append((lam, dlt, region.value, None, None, None))
            continue
        energy = psi(lam, dlt, params)
        if 0.0 < dlt < lam * lam:
            F = np.array([[lam, 0.0], [0.0, dlt / lam], [0.0, 0.0]])
            s1, s2 = membrane_stress(F, params).principal_values
        else:
            s1 = s2 = None
        cells.append((lam, dlt, region.value, energy, s1, s2))
    return cells


def _cmd_scan(args):
    params = _params(args)
    for name, lo, hi, count in (
        ("lamM", args.lamM_min, args.lamM_max, args.lamM_count),
        ("delta", args.delta_min, args.delta_max, args.delta_count),
    ):
        if count < 2:
            raise SystemExit2(f"--{name}-count must be >= 2")
        if not (0.0 <= lo < hi):
            raise SystemExit2(f"--{name} range needs 0 <= min < max")
    lams = np.linspace(args.lamM_min, args.lamM_max, args.lamM_count)
    deltas = np.linspace(args.delta_min, args.delta_max, args.delta_count)

    n_threads = _thread_count()
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            rows = list(pool.map(lambda lam: _scan_row(lam, deltas, params), lams))
    else:
        rows = [_scan_row(lam, deltas, params) for lam in lams]

    try:
        with open(args.out, "w", newline="") as fh:
            if args.format == "csv":
                fh.write("lamM,delta,region,energy,sigma1,sigma2\n")
                for row in rows:
                    for lam, dlt, tag, energy, s1, s2 in row:
                        fields = [_fmt(lam), _fmt(dlt), tag]
                        fields += ["" if v is None else _fmt(v) for v in (energy, s1, s2)]
                        fh.write(",".join(fields) + "\n")
            else:
                records = [
                    {
                        "lamM": lam,
                        "delta": dlt,
                        "region": tag,
                        "energy": energy,
                        "sigma1": s1,
                        "sigma2": s2,
                    }
                    for row in rows
                    for lam, dlt, tag, energy, s1, s2 in row
                ]
                json.dump(records, fh)
                fh.write("\n")
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return 4
    return 0


def _cmd_verify(args):
    r_values = args.r if args.r else list(DEFAULT_R_VALUES)
    params_list = [MaterialParams(mu=args.mu, r=r) for r in r_values]
    try:
        reports = run_suites(
            args.suite,
            params_list,
            grid_n=args.grid,
            n_samples=args.samples,
            seed=args.seed,
        )
    except KeyError as exc:
        raise SystemExit2(str(exc)) from None
    ok = True
    for rep in reports:
        print(json.dumps(rep.to_json_dict()))
        ok = ok and rep.passed
    return 0 if ok else 1


def _add_material_flags(p, mu_default=1.0):
    p.add_argument("--r", type=float, default=1.0, help="chain anisotropy (>= 1)")
    p.add_argument("--mu", type=float, default=mu_default, help="shear modulus (> 0)")
    p.add_argument("--kappa", type=float, default=0.0, help="curvature modulus (>= 0)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nemem",
        description="Effective energy, stress, and microstructure of nematic "
        "elastomer membranes.",
    )
    parser.add_argument("--config", default=None, help="flat key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, with_pair in (
        ("energy", _cmd_energy, True),
        ("region", _cmd_region, True),
        ("stress", _cmd_stress, True),
    ):
        p = sub.add_parser(name)
        p.add_argument("--F", default=None, help="3x2 matrix 'a b; c d; e f'")
        if with_pair:
            p.add_argument("--lamM", type=float, default=None)
            p.add_argument("--delta", type=float, default=None)
        _add_material_flags(p)
        if name == "energy":
            p.add_argument(
                "--normalized", action="store_true", help="report energy in units of mu/2"
            )
        p.set_defaults(fn=fn)

    p = sub.add_parser("energy3d")
    p.add_argument("--F", required=True, help="3x3 matrix 'a b c; d e f; g h i'")
    p.add_argument("--n", default=None, help="director 'x y z' (omit to minimize)")
    _add_material_flags(p)
    p.set_defaults(fn=_cmd_energy3d)

    p = sub.add_parser("laminate")
    p.add_argument("--F", required=True, help="3x2 matrix 'a b; c d; e f'")
    _add_material_flags(p)
    p.set_defaults(fn=_cmd_laminate)

    p = sub.add_parser("relax")
    p.add_argument("--F", required=True, help="3x2 matrix 'a b; c d; e f'")
    _add_material_flags(p)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--n-dirs", dest="n_dirs", type=int, default=1024)
    p.add_argument("--t-grid", dest="t_grid", type=int, default=40)
    p.add_argument("--refine-iters", dest="refine_iters", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_relax)

    p = sub.add_parser("scan")
    p.add_argument("--lamM-min", type=float, required=True)
    p.add_argument("--lamM-max", type=float, required=True)
    p.add_argument("--lamM-count", type=int, required=True)
    p.add_argument("--delta-min", type=float, required=True)
    p.add_argument("--delta-max", type=float, required=True)
    p.add_argument("--delta-count", type=int, required=True)
    _add_material_flags(p)
    p.add_argument("--out", required=True, help="output path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("verify")
    p.add_argument(
        "--suite",
        required=True,
        help="appendixA | stress | envelope | frame | all",
    )
    p.add_argument("--r", type=float, action="append", default=None)
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)
    return parser


def _apply_config(argv, parser):
    # Flat key=value file applied as defaults; explicit flags win because
    # argparse parses them after set_defaults.
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise SystemExit2("--config needs a path")
    path = argv[idx + 1]
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        print(f"cannot read config {path}: {exc}", file=sys.stderr)
        raise SystemExit(4) from None
    defaults = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SystemExit2(f"bad config line {line!r}")
        key, value = line.split("=", 1)
        defaults[key.strip().replace("-", "_")] = value.strip()
    for action in parser._subparsers._group_actions[0].choices.values():
        coerced = {}
        for act in action._actions:
            if act.dest in defaults and act.type is not None:
                coerced[act.dest] = act.type(defaults[act.dest])
            elif act.dest in defaults:
                coerced[act.dest] = defaults[act.dest]
        action.set_defaults(**coerced)
    return argv


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config(argv, parser)
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``cpf-lab verify <suite>`` and ``cpf-lab snapshot``.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or config error,
3 I/O error. Reports are written to a temporary file and renamed into place.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from .config import load_defaults
from .cpf import PointSource
from .errors import CpfLabError
from .field import ModeSpec, occupancy_field
from .fock import SymmetricState
from .suites import SCHEMA_VERSION, SUITES, RunConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
COMPONENT_LABELS = ("1", "2", "3", "0")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        dims = [int(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must look like 32 or 32x16, got {text!r}") from exc
    if len(dims) == 1:
        dims = dims * 2
    if len(dims) != 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    return dims[0], dims[1]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpf-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES + ("all",))
    verify.add_argument("--epsilon", type=_floats, default=None,
                        help="comma-separated, strictly decreasing regularization widths")
    verify.add_argument("--step", type=float, default=None)
    verify.add_argument("--n-max", type=int, default=3)
    verify.add_argument("--kappa", type=float, default=None)
    verify.add_argument("--beta", choices=("+1", "-1", "both"), default="both")
    verify.add_argument("--out", default=None, help="report path (default: stdout)")
    verify.add_argument("--format", choices=("json", "csv"), default="json")

    snap = sub.add_parser("snapshot", help="export a transverse field grid")
    snap.add_argument("--grid", type=_grid, default=(32, 32))
    snap.add_argument("--mode-k", type=float, default=1.0)
    snap.add_argument("--t", type=float, default=0.0)
    snap.add_argument("--x3", type=float, default=0.0)
    snap.add_argument("--n", type=int, default=1, help="photon occupancy")
    snap.add_argument("--beta", choices=("+1", "-1"), default="+1")
    snap.add_argument("--xi", type=_floats, default=[1.0, 0.0], help="source point xi_a,xi_b")
    snap.add_argument("--kappa", type=float, default=None)
    snap.add_argument("--epsilon", type=float, default=0.1)
    snap.add_argument("--extent", type=float, default=0.5,
                      help="half-width of the grid around the source")
    snap.add_argument("--out", default=None)
    snap.add_argument("--format", choices=("json", "csv"), default="csv")
    return parser


def _atomic_write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cpf-lab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(rows: list[dict]) -> str:
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def report_text(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    return _csv_text(report["checks"])


def snapshot_rows(grid, mode_k, t, x3=0.0, n=1, beta=1, xi=(1.0, 0.0), kappa=1.0,
                  epsilon=0.1, extent=0.5) -> list[dict]:
    """Rows ``x1, x2, x3, t, re_A{mu}, im_A{mu}`` of the occupancy field on a grid."""
    source = PointSource(xi[0], xi[1], beta)
    state = SymmetricState.identical(n, source, kappa, mode_k)
    field = occupancy_field(state, ModeSpec(mode_k, beta), epsilon=epsilon)
    nx, ny = grid
    xs = np.linspace(xi[0] - extent, xi[0] + extent, nx)
    ys = np.linspace(xi[1] - extent, xi[1] + extent, ny)
    x1, x2 = np.meshgrid(xs, ys, indexing="ij")
    state.as_field(epsilon).require(x1, x2)
    values = field(x1, x2, x3, t)
    rows = []
    for i in range(nx):
        for j in range(ny):
            row = {"x1": float(x1[i, j]), "x2": float(x2[i, j]), "x3": x3, "t": t}
            for mu, label in enumerate(COMPONENT_LABELS):
                row[f"re_A{label}"] = float(values[i, j, mu].real)
                row[f"im_A{label}"] = float(values[i, j, mu].imag)
            rows.append(row)
    return rows


def _verify(args) -> int:
    defaults = load_defaults(step=args.step, kappa=args.kappa)
    cfg = RunConfig(
        suite=args.suite,
        epsilon_list=tuple(args.epsilon) if args.epsilon is not None else (defaults.epsilon,),
        step=defaults.step, n_max=args.n_max, kappa=defaults.kappa, beta=args.beta,
        output_path=args.out, format=args.format, defaults=defaults,
    )
    report = run_suites(cfg)
    _atomic_write(args.out, report_text(report, args.format))
    failed = [c for c in report["checks"] if not c["pass"]]
    for c in failed:
        print(f"FAIL [{c['suite']}] {c.get('check', c.get('observable'))}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _snapshot(args) -> int:
    defaults = load_defaults(kappa=args.kappa)
    if len(args.xi) != 2:
        raise CpfLabError("--xi needs two numbers")
    rows = snapshot_rows(args.grid, args.mode_k, args.t, args.x3, args.n, int(args.beta),
                         tuple(args.xi), defaults.kappa, args.epsilon, args.extent)
    if args.format == "csv":
        text = _csv_text(rows)
    else:
        text = json.dumps({"schema_version": SCHEMA_VERSION, "grid": list(args.grid), "rows": rows},
                          indent=1) + "\n"
    _atomic_write(args.out, text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _verify(args) if args.command == "verify" else _snapshot(args)
    except (CpfLabError, ValueError) as exc:
        print(f"cpf-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cpf-lab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end and the text file formats it emits.

Formats are plain text with 17-significant-digit decimals so every emitted
file is diff-able and round-trips losslessly through the readers here.
Exit codes: 0 success, 2 non-symplectic matrix, 3 dimension mismatch,
4 numeric non-convergence.
"""
import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import eigenstate as es
from . import numeric, overlap, symplectic
from .errors import (
    DeltaSupportedStateError,
    InvalidInputError,
    NonSymplecticError,
    QuadratureError,
    SympeigError,
)

EXIT_OK = 0
EXIT_NON_SYMPLECTIC = 2
EXIT_DIMENSION = 3
EXIT_NUMERIC = 4


def _fmt(value):
    return format(float(value), ".17g")


def _fmt_row(values):
    return " ".join(_fmt(v) for v in np.asarray(values, float).ravel())


# ---------------------------------------------------------------------------
# Matrix files: "q <n>" then 2q rows of 2q decimals.


def write_matrix_file(path, w):
    w = np.asarray(w, float)
    lines = [f"q {w.shape[0] // 2}"]
    lines += [_fmt_row(row) for row in w]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_file(path):
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("q "):
        raise InvalidInputError(f"{path}: expected a 'q <dim>' header")
    q = int(lines[0].split()[1])
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1 : 1 + 2 * q]]
    w = np.array(rows, float)
    if w.shape != (2 * q, 2 * q):
        raise InvalidInputError(f"{path}: expected a {2*q}x{2*q} matrix block")
    return w


# ---------------------------------------------------------------------------
# Eigenstate parameter files: key value lines, arrays with shape headers.


def _array_lines(key, a):
    a = np.atleast_2d(np.asarray(a, float))
    lines = [f"{key} rows {a.shape[0]} cols {a.shape[1]}"]
    if a.size:
        lines += [_fmt_row(row) for row in a]
    return lines


def write_params_file(path, state, residuals, grid_residual=None):
    lines = [
        "format sympeig-params-v1",
        f"flavor {state.flavor}",
        f"q {state.q_dim}",
        f"rank {state.rank}",
        f"eigenvalue {_fmt_row(state.eigenvalue)}",
        f"support_offset {_fmt_row(state.support_offset)}",
    ]
    lines += _array_lines("support_basis", state.support_basis.reshape(state.q_dim, -1))
    lines += _array_lines("quad_form", state.quad_form.reshape(state.rank, -1) if state.rank else np.zeros((0, 0)))
    lines.append(f"linear_vec {_fmt_row(state.linear_vec)}")
    lines.append(
        f"norm_const {_fmt(state.norm_const.real)} {_fmt(state.norm_const.imag)}"
    )
    lines.append(f"row_residual {_fmt(residuals.row_residual)}")
    lines.append(f"constraint_residual {_fmt(residuals.constraint_residual)}")
    if grid_residual is not None:
        lines.append(f"grid_eigen_residual {_fmt(grid_residual)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_params_file(path):
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    out = {}
    i = 0
    while i < len(lines):
        tokens = lines[i].split()
        key = tokens[0]
        if len(tokens) >= 5 and tokens[1] == "rows":
            rows, cols = int(tokens[2]), int(tokens[4])
            if rows * cols == 0:
                out[key] = np.zeros((rows, cols))
                i += 1
                continue
            block = [
                [float(t) for t in lines[i + 1 + r].split()] for r in range(rows)
            ]
            out[key] = np.array(block, float).reshape(rows, cols)
            i += 1 + rows
        else:
            vals = tokens[1:]
            if key in ("flavor", "format"):
                out[key] = vals[0]
            elif key in ("q", "rank"):
                out[key] = int(vals[0])
            elif key == "norm_const":
                out[key] = complex(float(vals[0]), float(vals[1]))
            else:
                out[key] = np.array([float(v) for v in vals])
            i += 1
    return out


def write_grid_csv(path, psi):
    grid = psi.grid()
    pts = grid.lattice_points()
    flat = psi.samples.ravel()
    header = ",".join([f"x_{d+1}" for d in range(psi.q_dim)] + ["re_psi", "im_psi"])
    lines = [header]
    for row, val in zip(pts, flat):
        cells = [_fmt(v) for v in row] + [_fmt(val.real), _fmt(val.imag)]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Verification report


def build_verify_report(w, omega=None, rank_tol=1e-10, tol=1e-10):
    """Key = value lines for the full algebraic check battery."""
    lines = []
    try:
        m = symplectic.validate(w, tol)
    except NonSymplecticError as exc:
        bil, cols, rows = symplectic._condition_norms(np.asarray(w, float), w.shape[0] // 2)
        lines.append("symplectic = no")
        lines.append(f"violation_bilinear = {_fmt(bil)}")
        lines.append(f"violation_column_conditions = {_fmt(cols)}")
        lines.append(f"violation_row_conditions = {_fmt(rows)}")
        return "\n".join(lines) + "\n", exc

    bil, cols, rows = symplectic._condition_norms(m.w, m.q)
    lines.append("symplectic = yes")
    lines.append(f"violation_bilinear = {_fmt(bil)}")
    lines.append(f"violation_column_conditions = {_fmt(cols)}")
    lines.append(f"violation_row_conditions = {_fmt(rows)}")
    ccr_defect = np.linalg.norm(symplectic.ccr_matrix(m) - symplectic.symplectic_form(m.q))
    lines.append(f"ccr_defect = {_fmt(ccr_defect)}")
    gaps = symplectic.null_intersection_gaps(m)
    for key, val in gaps.items():
        lines.append(f"null_gap_{key} = {_fmt(val)}")

    if omega is None:
        omega = np.ones(m.q)
    for flavor, build in (
        (es.FLAVOR_COORDINATE, es.coordinate_eigenstate),
        (es.FLAVOR_MOMENTUM, es.momentum_eigenstate),
    ):
        state = build(m, omega, rank_tol)
        rep = es.residual_check(state, m)
        lines.append(f"eigen_row_residual_{flavor} = {_fmt(rep.row_residual)}")
        lines.append(
            f"eigen_constraint_residual_{flavor} = {_fmt(rep.constraint_residual)}"
        )
        lines.append(f"support_rank_{flavor} = {state.rank}")
    return "\n".join(lines) + "\n", None


# ---------------------------------------------------------------------------
# Job plumbing


@dataclass
class JobSpec:
    """One eigenstate run: inputs, outputs to emit, and knobs."""

    matrix: np.ndarray
    flavor: str
    omega: np.ndarray
    outputs: tuple = ("params",)
    grid: numeric.GridSpec | None = None
    grid_points: int | None = None
    rank_tol: float = 1e-10
    fd_order: int = 4
    seed: int | None = None
    out_dir: Path = field(default_factory=Path)


def run(job):
    """Execute a JobSpec; returns the exit status after emitting files."""
    m = symplectic.validate(job.matrix)
    omega = np.asarray(job.omega, float)
    if omega.size != m.q:
        raise InvalidInputError(
            f"omega has length {omega.size}, expected {m.q}"
        )
    if job.flavor == es.FLAVOR_COORDINATE:
        state = es.coordinate_eigenstate(m, omega, job.rank_tol)
    elif job.flavor == es.FLAVOR_MOMENTUM:
        state = es.momentum_eigenstate(m, omega, job.rank_tol)
    else:
        raise InvalidInputError(f"unknown flavor {job.flavor!r}")

    out_dir = Path(job.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    residuals = es.residual_check(state, m)

    grid_residual = None
    if "grid_csv" in job.outputs:
        grid = job.grid or numeric.default_grid(
            state, points_per_axis=job.grid_points or numeric.DEFAULT_GRID_POINTS
        )
        try:
            psi = numeric.sample_state(state, grid)
        except DeltaSupportedStateError as exc:
            print(f"note: grid output skipped: {exc}", file=sys.stderr)
        else:
            write_grid_csv(out_dir / f"grid_{job.flavor}.csv", psi)
            grid_residual = numeric.eigen_equation_residual(
                m, job.flavor, psi, omega, fd_order=job.fd_order
            )
    if "params" in job.outputs:
        write_params_file(
            out_dir / f"params_{job.flavor}.txt", state, residuals,
            grid_residual=grid_residual,
        )
    if "verify_report" in job.outputs:
        report, _ = build_verify_report(m.w, omega, job.rank_tol)
        (out_dir / "verify_report.txt").write_text(report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def _parse_matrix(args):
    source = args.matrix
    path = Path(source)
    if path.exists():
        w = read_matrix_file(path)
    else:
        vals = [float(t) for t in source.replace(",", " ").split()]
        side = int(round(np.sqrt(len(vals))))
        if side * side != len(vals) or side % 2 != 0:
            raise InvalidInputError(
                f"inline matrix has {len(vals)} entries; need a square "
                "even-dimensional row-major layout"
            )
        w = np.array(vals).reshape(side, side)
    if getattr(args, "q", None) is not None and w.shape[0] != 2 * args.q:
        raise InvalidInputError(
            f"matrix is {w.shape[0]}x{w.shape[0]} but --q {args.q} was given"
        )
    return w


def _parse_vector(text, q, name):
    vals = [float(t) for t in text.replace(",", " ").split()]
    if len(vals) != q:
        raise InvalidInputError(f"{name} has length {len(vals)}, expected {q}")
    return np.array(vals)


def _add_common(parser):
    parser.add_argument("--matrix", required=True,
                        help="matrix file path or inline row-major numbers")
    parser.add_argument("--q", type=int, default=None,
                        help="expected configuration dimension (cross-check)")
    parser.add_argument("--rank-tol", type=float, default=1e-10)
    parser.add_argument("--out-dir", default=".")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sympeig",
        description="Eigenstates of symplectically transformed observables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eig = sub.add_parser("eigenstate", help="synthesize one eigenstate")
    _add_common(p_eig)
    p_eig.add_argument("--flavor", choices=("coordinate", "momentum"),
                       default="coordinate")
    p_eig.add_argument("--omega", required=True, help="comma-separated eigenvalues")
    p_eig.add_argument("--grid-n", type=int, default=None,
                       help="emit a sampled grid with this many points per axis")
    p_eig.add_argument("--grid-box", default=None,
                       help="lo,hi box bounds applied to every axis")
    p_eig.add_argument("--fd-order", type=int, default=4)
    p_eig.add_argument("--outputs", default="params",
                       help="comma set from params,grid_csv,verify_report")

    p_ov = sub.add_parser("overlap", help="pair two eigenstates")
    _add_common(p_ov)
    p_ov.add_argument("--flavor", choices=("coordinate", "momentum"),
                      default="coordinate")
    p_ov.add_argument("--omega", required=True, help="ket eigenvalues")
    p_ov.add_argument("--rho", required=True, help="bra eigenvalues")
    p_ov.add_argument("--cross", action="store_true",
                      help="momentum bra against coordinate ket")

    p_ver = sub.add_parser("verify", help="run the algebraic check battery")
    _add_common(p_ver)
    p_ver.add_argument("--omega", default=None)

    p_gen = sub.add_parser("generate", help="random symplectic matrix to a file")
    p_gen.add_argument("--q", type=int, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--factors", type=int, default=4)
    p_gen.add_argument("--out", default=None, help="output path")
    p_gen.add_argument("--out-dir", default=".")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except NonSymplecticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_SYMPLECTIC
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except SympeigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def _dispatch(args):
    if args.command == "generate":
        m = symplectic.random_symplectic(args.q, n_factors=args.factors,
                                         rng=args.seed)
        out = Path(args.out) if args.out else Path(args.out_dir) / (
            f"symplectic_q{args.q}_seed{args.seed}.txt"
        )
        out.parent.mkdir(parents=True, exist_ok=True)
        write_matrix_file(out, m.w)
        print(out)
        return EXIT_OK

    w = _parse_matrix(args)
    q = w.shape[0] // 2

    if args.command == "verify":
        omega = _parse_vector(args.omega, q, "omega") if args.omega else None
        report, err = build_verify_report(w, omega, args.rank_tol)
        print(report, end="")
        out_dir = Path(args.out_dir)
        if out_dir != Path("."):
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / "verify_report.txt").write_text(report)
        return EXIT_NON_SYMPLECTIC if err is not None else EXIT_OK

    if args.command == "eigenstate":
        omega = _parse_vector(args.omega, q, "omega")
        grid = None
        if args.grid_n is not None or args.grid_box is not None:
            n = args.grid_n or numeric.DEFAULT_GRID_POINTS
            if args.grid_box:
                lo, hi = (float(t) for t in args.grid_box.split(","))
                grid = numeric.GridSpec(np.full(q, lo), np.full(q, hi), n)
            else:
                grid = None  # auto box around the support offset
            outputs = set(args.outputs.split(",")) | {"grid_csv"}
        else:
            outputs = set(args.outputs.split(","))
        job = JobSpec(
            matrix=w,
            flavor=args.flavor,
            omega=omega,
            outputs=tuple(sorted(outputs)),
            grid=grid,
            grid_points=args.grid_n,
            rank_tol=args.rank_tol,
            fd_order=args.fd_order,
            out_dir=Path(args.out_dir),
        )
        return run(job)

    if args.command == "overlap":
        m = symplectic.validate(w)
        omega = _parse_vector(args.omega, q, "omega")
        rho = _parse_vector(args.rho, q, "rho")
        if args.cross:
            bra = es.momentum_eigenstate(m, rho, args.rank_tol)
            ket = es.coordinate_eigenstate(m, omega, args.rank_tol)
            result = overlap.cross_flavor_overlap(bra, ket)
            print("kind = cross_flavor")
            print(f"value_re = {_fmt(result.value.real)}")
            print(f"value_im = {_fmt(result.value.imag)}")
            print(f"coefficient_re = {_fmt(result.coefficient.real)}")
            print(f"coefficient_im = {_fmt(result.coefficient.imag)}")
        else:
            build = (
                es.coordinate_eigenstate
                if args.flavor == "coordinate"
                else es.momentum_eigenstate
            )
            bra = build(m, rho, args.rank_tol)
            ket = build(m, omega, args.rank_tol)
            product = overlap.same_flavor_overlap(bra, ket)
            coeff = product.collapsed_coefficient()
            print(f"kind = same_flavor_{args.flavor}")
            print(f"factor_dims = {' '.join(str(f.dim) for f in product.factors)}")
            print(f"forces_eta_zero = {overlap.forces_eta_zero(product)}")
            print(f"prefactor_re = {_fmt(product.prefactor.real)}")
            print(f"prefactor_im = {_fmt(product.prefactor.imag)}")
            print(f"collapse_coefficient_re = {_fmt(coeff.real)}")
            print(f"collapse_coefficient_im = {_fmt(coeff.imag)}")
        return EXIT_OK

    raise InvalidInputError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

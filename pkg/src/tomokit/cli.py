"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 a bound or inequality was
violated, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import report
from .numkernel import BoundViolation, NumericalFailure, haar_unitaries, haar_unitary, make_grid

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_NUMERICAL = 0, 1, 2, 3
SPIN_TOL = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    """Parsed command line with validated overrides."""

    command: str
    state_specs: list = field(default_factory=list)
    grid: tuple | None = None
    thetas: int | None = None
    seed: int = 0
    samples: int | None = None
    out: str | None = None
    tol: float | None = None
    json: bool = False

    def __post_init__(self):
        if self.tol is not None and self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.samples is not None and self.samples < 1:
            raise UsageError("--samples must be positive")
        if self.thetas is not None and self.thetas < 8:
            raise UsageError("--thetas must be >= 8")


class Emitter:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def __call__(self, **fields) -> None:
        text = report.json_line(**fields) if self.as_json else report.line(**fields)
        self.stream.write(text + "\n")

    def raw(self, text: str) -> None:
        self.stream.write(text + "\n")


# ---------------------------------------------------------------------------
# state specs


def _kv(body: str) -> dict:
    out = {}
    if not body:
        return out
    for tok in body.split(","):
        if "=" not in tok:
            raise UsageError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _num(d: dict, key: str, default=None, kind=float):
    if key not in d:
        if default is None:
            raise UsageError(f"missing parameter {key!r}")
        return default
    try:
        return kind(d[key])
    except ValueError as exc:
        raise UsageError(f"bad value for {key!r}: {d[key]!r}") from exc


def _only(d: dict, allowed: set, name: str) -> None:
    extra = set(d) - allowed
    if extra:
        raise UsageError(f"unknown parameter(s) for {name}: {', '.join(sorted(extra))}")


def parse_cv_state(spec: str, grid=None):
    """``fock:n=``, ``coherent:re=,im=``, ``thermal:nbar=``, ``cgauss:sq=,sp=,c=,mq=,mp=``, ``product:[a;b]``."""
    from .cvstates import classical_gaussian_density, coherent_state, fock_state, thermal_state
    from .multimode import MultimodeState

    name, _, body = spec.partition(":")
    if name == "product":
        if not (body.startswith("[") and body.endswith("]")):
            raise UsageError("product spec must look like product:[<spec>;<spec>]")
        parts = [p for p in body[1:-1].split(";") if p]
        if len(parts) < 2:
            raise UsageError("product spec needs at least two modes")
        modes = [parse_cv_state(p, grid) for p in parts]
        return MultimodeState.product(modes)
    d = _kv(body)
    if name == "fock":
        _only(d, {"n"}, name)
        return fock_state(_num(d, "n", kind=int), grid)
    if name == "coherent":
        _only(d, {"re", "im"}, name)
        return coherent_state(complex(_num(d, "re", 0.0), _num(d, "im", 0.0)), grid)
    if name == "thermal":
        _only(d, {"nbar", "cutoff"}, name)
        return thermal_state(_num(d, "nbar"), _num(d, "cutoff", 32, int))
    if name == "cgauss":
        _only(d, {"sq", "sp", "c", "mq", "mp"}, name)
        cov = [[_num(d, "sq"), _num(d, "c", 0.0)], [_num(d, "c", 0.0), _num(d, "sp")]]
        return classical_gaussian_density(_num(d, "mq", 0.0), _num(d, "mp", 0.0), cov)
    raise UsageError(f"unknown state kind {name!r}")


def parse_spin_state(spec: str):
    """``qubit:a,b``, ``pure:<vector>``, ``bell``, ``ghz``, ``haar:N=,seed=``, ``mixhaar:N=,seed=``."""
    from . import spintomo as sp

    name, _, body = spec.partition(":")
    if name == "bell":
        return sp.bell_state()
    if name == "ghz":
        return sp.ghz_state()
    if name == "qubit":
        try:
            a, b = (float(t) for t in body.split(","))
        except ValueError as exc:
            raise UsageError("qubit spec is qubit:<a>,<b>") from exc
        return sp.qubit_state(a, b)
    if name == "pure":
        try:
            vec = [complex(t.replace(" ", "")) for t in body.split(",")]
        except ValueError as exc:
            raise UsageError("pure spec is pure:<c0>,<c1>,... (Python complex literals)") from exc
        return sp.pure_spin_state(vec)
    if name in ("haar", "mixhaar"):
        d = _kv(body)
        _only(d, {"N", "seed"}, name)
        N, seed = _num(d, "N", kind=int), _num(d, "seed", 0, int)
        if N < 2:
            raise UsageError("N must be >= 2")
        return sp.haar_pure_state(N, seed) if name == "haar" else sp.haar_mixed_state(N, seed)
    raise UsageError(f"unknown spin state kind {name!r}")


def _grid(cfg: RunConfig):
    if cfg.grid is None:
        return None
    return make_grid(*cfg.grid)


def _thetagrid(cfg: RunConfig):
    from .numkernel import default_thetagrid

    return make_grid(0.0, 2 * np.pi, cfg.thetas) if cfg.thetas else default_thetagrid()


def _one_state(cfg: RunConfig, parser=parse_cv_state):
    if len(cfg.state_specs) != 1:
        raise UsageError("exactly one --state is required")
    if parser is parse_cv_state:
        return parse_cv_state(cfg.state_specs[0], _grid(cfg))
    return parser(cfg.state_specs[0])


def _tomogram_input(args, cfg: RunConfig):
    """A state spec or an optical tomogram file."""
    from .cvtomo import OpticalTomogram

    if getattr(args, "input", None):
        return OpticalTomogram.load(args.input)
    return _one_state(cfg)


def _load_or_spec(text: str, cfg: RunConfig):
    from .cvtomo import OpticalTomogram, optical_tomogram

    if os.path.exists(text):
        return OpticalTomogram.load(text)
    return optical_tomogram(parse_cv_state(text, _grid(cfg)), _thetagrid(cfg))


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _dims(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _write(cfg: RunConfig, text: str, emit: Emitter) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        emit.raw(text.rstrip("\n"))


# ---------------------------------------------------------------------------
# commands


def cmd_state(args, cfg, emit) -> int:
    from .cventropy import dispersion_matrix

    if args.spin:
        from .spintomo import eigenbasis_unitary, von_neumann_entropy

        rho = _one_state(cfg, parse_spin_state)
        vals, _ = eigenbasis_unitary(rho)
        emit(kind="spin", dim=rho.dim, purity=float(np.trace(rho.matrix @ rho.matrix).real), S_vN=von_neumann_entropy(rho))
        for k, v in enumerate(vals):
            emit(eigenvalue=k, value=v)
        return EXIT_OK
    st = _one_state(cfg)
    from .multimode import MultimodeState

    if isinstance(st, MultimodeState):
        emit(kind=st.kind, modes=st.mode_count)
        sigma = st.dispersion()
    else:
        emit(kind=type(st).__name__)
        sigma = dispersion_matrix(st).entries
    labels = [f"{a}{k + 1}" for k in range(sigma.shape[0] // 2) for a in ("p", "q")]
    for i, a in enumerate(labels):
        for j in range(i, len(labels)):
            emit(entry=f"{a},{labels[j]}", value=sigma[i, j])
    return EXIT_OK


def cmd_tomo(args, cfg, emit) -> int:
    from .cventropy import differential_entropy
    from .cvtomo import optical_tomogram, symplectic_tomogram

    if args.kind == "optical":
        w = optical_tomogram(_one_state(cfg), _thetagrid(cfg), _grid(cfg))
        h = w.xgrid.spacing
        ent = np.array([differential_entropy(r, h) for r in w.values])
        if cfg.out:
            w.save(cfg.out)
        else:
            emit.raw(w.to_csv().rstrip("\n"))
        emit(
            nx=w.xgrid.count,
            ntheta=w.thetagrid.count,
            max_norm_error=float(np.abs(w.row_norms() - 1).max()),
            min_row_entropy=float(ent.min()),
            max_row_entropy=float(ent.max()),
        )
        return EXIT_OK
    if args.kind == "symplectic":
        st = _one_state(cfg)
        mu, nu = float(args.mu), float(args.nu)
        M = symplectic_tomogram(st, _grid(cfg))
        g = _grid(cfg) or M.xgrid
        vals = M.evaluate(g.points, mu, nu)
        _write(cfg, "".join(f"{report.fmt(x)},{report.fmt(v)}\n" for x, v in zip(g.points, vals)), emit)
        emit(mu=mu, nu=nu, normalization=float(vals.sum() * g.spacing))
        return EXIT_OK
    from .multimode import MultimodeState, center_of_mass_tomogram

    st = _one_state(cfg)
    if not isinstance(st, MultimodeState):
        raise UsageError("tomo cm needs a product:[...] state")
    mu, nu = _floats(args.mu), _floats(args.nu)
    cm = center_of_mass_tomogram(st)
    g = _grid(cfg) or make_grid(-8.0, 8.0, 256)
    vals = cm.evaluate(g.points, mu, nu)
    _write(cfg, "".join(f"{report.fmt(x)},{report.fmt(v)}\n" for x, v in zip(g.points, vals)), emit)
    emit(modes=st.mode_count, normalization=float(vals.sum() * g.spacing))
    return EXIT_OK


def cmd_recon(args, cfg, emit) -> int:
    from .cvrecon import reconstruct_density_matrix, reconstruct_phase_space

    src = _tomogram_input(args, cfg)
    if args.phase_space:
        qg, pg, f = reconstruct_phase_space(src)
        text = "".join(
            f"{report.fmt(q)},{report.fmt(p)},{report.fmt(v)}\n" for i, q in enumerate(qg.points) for p, v in zip(pg.points, f[i])
        )
        _write(cfg, text, emit)
        emit(min_f=float(f.min()), integral=float(f.sum() * qg.spacing * pg.spacing))
        return EXIT_OK
    rho = reconstruct_density_matrix(src, cutoff=args.cutoff)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            for i in range(rho.shape[0]):
                fh.write(",".join(report.fmt(v) for v in np.concatenate([rho[i].real, rho[i].imag])) + "\n")
    eig = np.linalg.eigvalsh(rho)
    emit(
        cutoff=rho.shape[0],
        trace=float(np.trace(rho).real),
        purity=float(np.trace(rho @ rho).real),
        min_eig=float(eig.min()),
        mean_n=float(np.real(np.arange(rho.shape[0]) @ np.diag(rho))),
    )
    return EXIT_OK


def cmd_classify(args, cfg, emit) -> int:
    from .cvrecon import classify_tomogram

    res = classify_tomogram(_tomogram_input(args, cfg), tolerance=cfg.tol)
    if cfg.json:
        emit(
            classical=res.classical,
            quantum=res.quantum,
            min_f=res.min_phase_space_value,
            min_eig=res.min_density_eigenvalue,
            label=res.label,
        )
    else:
        emit.raw(res.report_line() + f" label={res.label}")
    return EXIT_OK


def cmd_fidelity(args, cfg, emit) -> int:
    from .fidelity import fidelity_from_tomograms

    F, im = fidelity_from_tomograms(_load_or_spec(args.a, cfg), _load_or_spec(args.b, cfg))
    emit(F=F, im_residual=im)
    tol = cfg.tol or 1e-3
    return EXIT_OK if im <= tol else EXIT_VIOLATION


def cmd_entropy(args, cfg, emit) -> int:
    if args.kind == "tomo":
        from .spintomo import min_over_unitaries, renyi_tomo_entropy, shannon_tomo_entropy, spin_tomogram

        rho = _one_state(cfg, parse_spin_state)
        u = haar_unitary(rho.dim, cfg.seed) if args.haar else np.eye(rho.dim)
        w = spin_tomogram(rho, u)
        qs = _floats(args.q) if args.q else np.array([])
        emit(H=shannon_tomo_entropy(w), **{f"R_{report.fmt(q)}": renyi_tomo_entropy(w, q) for q in qs})
        vmin, _ = min_over_unitaries(rho, "shannon", cfg.samples or 1000, cfg.seed)
        emit(min_H=vmin)
        return EXIT_OK
    from .cventropy import differential_entropy, position_momentum_entropies, renyi_differential_entropy
    from .cvtomo import symplectic_tomogram
    from .numkernel import WaveFunction

    st = _one_state(cfg)
    M = symplectic_tomogram(st, _grid(cfg))
    # rows at 0 and pi/2 are the position and momentum densities
    rows = np.maximum(M.rows(np.array([0.0, 0.5 * np.pi])), 0.0)
    h = M.xgrid.spacing
    if args.kind == "cv":
        if isinstance(st, WaveFunction):
            sx, spp = position_momentum_entropies(st)
        else:
            sx, spp = differential_entropy(rows[0], h), differential_entropy(rows[1], h)
        emit(S_x=sx, S_p=spp, sum=sx + spp)
        return EXIT_OK
    qs = _floats(args.q) if args.q else np.array([0.25, 0.5, 0.75, 2.0])
    for q in qs:
        emit(q=q, R_x=renyi_differential_entropy(rows[0], h, q), R_p=renyi_differential_entropy(rows[1], h, q))
    return EXIT_OK


def _spin_sweep_states(cfg: RunConfig, dim: int):
    """Fixed state from ``--state`` or Haar mixed states drawn per sample."""
    from .spintomo import haar_mixed_state

    if cfg.state_specs:
        rho = _one_state(cfg, parse_spin_state)
        if rho.dim != dim:
            raise UsageError(f"state dimension {rho.dim} does not match {dim}")
        return lambda k: rho
    return lambda k: haar_mixed_state(dim, cfg.seed + 7919 * (k + 1))


def cmd_ineq(args, cfg, emit) -> int:
    tol = cfg.tol or SPIN_TOL
    if args.kind in ("ur", "renyi-ur"):
        from .cventropy import entropic_ur_check, renyi_ur_check

        st = _one_state(cfg)
        if args.kind == "ur":
            n = cfg.thetas or 16
            rep = entropic_ur_check(st, np.arange(n) * (np.pi / n))
            for ln in rep.lines():
                emit.raw(ln)
            emit(min_residual=float(rep.residuals.min()))
            return EXIT_OK if rep.ok(cfg.tol or 1e-4) else EXIT_VIOLATION
        qs = _floats(args.q) if args.q else None
        rep = renyi_ur_check(st, float(args.theta), qs) if qs is not None else renyi_ur_check(st, float(args.theta))
        for ln in rep.lines():
            emit.raw(ln)
        emit(min_residual=float(rep.residuals.min()))
        return EXIT_OK if rep.ok(cfg.tol or 1e-3) else EXIT_VIOLATION

    from . import spintomo as sp

    samples = cfg.samples or 200
    worst = np.inf
    if args.kind == "spin-qft":
        dim = args.dim or (_one_state(cfg, parse_spin_state).dim if cfg.state_specs else 2)
        states = _spin_sweep_states(cfg, dim)
        us = haar_unitaries(dim, samples, cfg.seed)
        worst_by = {}
        for k, u in enumerate(us):
            rep = sp.qft_inequality_check(states(k), u, args.alpha, args.beta)
            for key, v in rep.values().items():
                worst_by[key] = min(worst_by.get(key, np.inf), v)
        emit(samples=samples, dim=dim, **{f"min_{k}": v for k, v in worst_by.items()})
        worst = min(worst_by.values())
    elif args.kind in ("subadd", "ssa"):
        if args.dims:
            dims = _dims(args.dims)
        elif cfg.state_specs:
            d = _one_state(cfg, parse_spin_state).dim
            dims = (2,) * int(round(np.log2(d))) if d & (d - 1) == 0 else None
            if dims is None or len(dims) != (2 if args.kind == "subadd" else 3):
                raise UsageError("--dims is required for this state")
        else:
            dims = (2, 3) if args.kind == "subadd" else (2, 2, 2)
        total = int(np.prod(dims))
        states = _spin_sweep_states(cfg, total)
        fn = sp.bipartite_subadditivity if args.kind == "subadd" else sp.tripartite_ssa
        identity = fn(states(0), dims, np.eye(total))
        emit(u="identity", **identity.entropies, residual=identity.shannon_residual, vn_residual=identity.von_neumann_residual)
        worst_sh = worst_vn = np.inf
        for k, u in enumerate(haar_unitaries(total, samples, cfg.seed)):
            rep = fn(states(k), dims, u)
            worst_sh = min(worst_sh, rep.shannon_residual)
            worst_vn = min(worst_vn, rep.von_neumann_residual)
        emit(samples=samples, dims=",".join(map(str, dims)), min_residual=worst_sh, min_vn_residual=worst_vn)
        worst = min(worst_sh, worst_vn, identity.shannon_residual)
    elif args.kind == "bounds":
        dim = args.dim or 4
        pair = sp.ObservablePair(np.eye(dim), sp.qft_matrix(dim))
        if cfg.state_specs:
            rho = _one_state(cfg, parse_spin_state)
            vals, vecs = sp.eigenbasis_unitary(rho)
            if vals[0] < 1 - 1e-10:
                raise UsageError("bounds needs a pure state")
            pair = sp.ObservablePair(np.eye(rho.dim), sp.qft_matrix(rho.dim))
            psis = [vecs[:, 0]]
        else:
            psis = [u[:, 0] for u in haar_unitaries(dim, samples, cfg.seed)]
        d = m = b = np.inf
        for psi in psis:
            rep = sp.measurement_bounds(pair, psi)
            d = min(d, rep.deutsch_residual)
            m = min(m, rep.maassen_uffink_residual)
            b = min(b, rep.mub_residual if rep.mub_residual is not None else np.inf)
        emit(samples=len(psis), min_deutsch=d, min_maassen_uffink=m, min_mub=b)
        worst = min(d, m, b)
    return EXIT_OK if worst >= -tol else EXIT_VIOLATION


def cmd_haar(args, cfg, emit) -> int:
    from .spintomo import group_average_entropy, maximally_mixed

    if cfg.state_specs:
        rho = _one_state(cfg, parse_spin_state)
    else:
        rho = maximally_mixed(args.dim or 2)
    res = group_average_entropy(rho, args.mode, cfg.samples or 10_000, cfg.seed, args.alpha, args.beta)
    emit.raw(res.line() if not cfg.json else report.json_line(mean=res.mean, stderr=res.stderr, residual=res.bound_residual))
    return EXIT_OK if res.ok() else EXIT_VIOLATION


def cmd_selftest(args, cfg, emit) -> int:
    from .acceptance import run_checks

    numbers = [int(t) for t in args.only.split(",")] if args.only else None
    results = run_checks(cfg.seed, numbers)
    for r in results:
        emit.raw(r.line())
    n_fail = sum(not r.passed for r in results)
    emit(checks=len(results), failed=n_fail)
    return EXIT_OK if n_fail == 0 else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", action="append", default=[], help="state spec (repeatable where meaningful)")
    p.add_argument("--grid", help="X grid as xmin,xmax,n")
    p.add_argument("--thetas", type=int, help="number of phase angles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out", help="output path")
    p.add_argument("--json", action="store_true", help="emit JSON lines instead of key=value")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tomokit", description="Tomographic probability tools for continuous and spin systems.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("state", help="describe a state")
    _common(p)
    p.add_argument("--spin", action="store_true", help="parse --state as a spin spec")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("tomo", help="compute tomograms")
    p.add_argument("kind", choices=["optical", "symplectic", "cm"])
    _common(p)
    p.add_argument("--mu", default="1")
    p.add_argument("--nu", default="0")
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("recon", help="reconstruct a density matrix or phase-space density")
    _common(p)
    p.add_argument("--in", dest="input", help="optical tomogram file")
    p.add_argument("--cutoff", type=int, default=32)
    p.add_argument("--phase-space", action="store_true")
    p.set_defaults(func=cmd_recon)

    p = sub.add_parser("classify", help="classical / quantum admissibility")
    _common(p)
    p.add_argument("--in", dest="input", help="optical tomogram file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fidelity", help="overlap of two tomograms")
    _common(p)
    p.add_argument("--a", required=True, help="tomogram file or state spec")
    p.add_argument("--b", required=True, help="tomogram file or state spec")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("entropy", help="entropies")
    p.add_argument("kind", choices=["cv", "renyi", "tomo"])
    _common(p)
    p.add_argument("--q", help="comma-separated Renyi orders")
    p.add_argument("--haar", action="store_true", help="spin tomogram at a Haar unitary drawn from --seed")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("ineq", help="uncertainty relations and entropic inequalities")
    p.add_argument("kind", choices=["ur", "renyi-ur", "spin-qft", "subadd", "ssa", "bounds"])
    _common(p)
    p.add_argument("--q", help="comma-separated orders in (0, 1)")
    p.add_argument("--theta", default="0")
    p.add_argument("--dim", type=int)
    p.add_argument("--dims", help="subsystem dimensions, e.g. 2,3")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=2.0 / 3.0)
    p.set_defaults(func=cmd_ineq)

    p = sub.add_parser("haar", help="Haar Monte-Carlo runs")
    p.add_argument("kind", choices=["avg"])
    _common(p)
    p.add_argument("--mode", choices=["shannon", "renyi-pair"], default="shannon")
    p.add_argument("--dim", type=int)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=2.0 / 3.0)
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    _common(p)
    p.add_argument("--only", help="comma-separated check numbers")
    p.set_defaults(func=cmd_selftest)
    return parser


def _config(args) -> RunConfig:
    grid = None
    if args.grid:
        parts = args.grid.split(",")
        try:
            grid = (float(parts[0]), float(parts[1]), int(parts[2]))
        except (ValueError, IndexError) as exc:
            raise UsageError("--grid is xmin,xmax,n") from exc
        if len(parts) != 3:
            raise UsageError("--grid is xmin,xmax,n")
    return RunConfig(
        command=args.command,
        state_specs=list(args.state),
        grid=grid,
        thetas=args.thetas,
        seed=args.seed,
        samples=args.samples,
        out=args.out,
        tol=args.tol,
        json=args.json,
    )


def run(argv=None, stdout=None) -> int:
    """Execute one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    emit = Emitter(args.json, stdout)
    try:
        cfg = _config(args)
        return args.func(args, cfg, emit)
    except UsageError as exc:
        sys.stderr.write(f"tomokit: error: {exc}\n")
        return EXIT_USAGE
    except BoundViolation as exc:
        sys.stderr.write(f"tomokit: bound violated: {exc}\n")
        return EXIT_VIOLATION
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"tomokit: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except (ValueError, TypeError, OSError) as exc:
        sys.stderr.write(f"tomokit: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line frontend.

Subcommands
-----------
purity          single evaluation, JSON record on stdout or to a file
covariance      covariance matrix, standard form, squeezing, log-negativity
sweep           one-parameter sweep to CSV
figure          reference figure datasets (fig1 .. fig7)
oracle-compare  method-vs-oracle residual table
selftest        run the acceptance criteria

Exit codes: 0 success, 1 usage error, 2 numerical-consistency failure,
3 resource cap exceeded.

Every emitted file is deterministic byte for byte for identical inputs.
Sweeps fan out over a thread pool capped by the OSCILLENT_THREADS
environment variable; results are written in input order regardless of
completion order.  A JSON file passed as --config supplies defaults for any
flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys as _sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import acceptance, exact, fock, gaussian, grid
from .errors import DomainError, NumericalConsistencyError, OscillentError, ResourceCapError
from .system import Coherent, NumberState, OscillatorSystem, Superposition, UnboundGaussian

__all__ = ["main", "run"]


class _UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract is 1
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_angle(text: str) -> float:
    """Angle literal: a float, or pi expressions like pi/6, 2*pi/3, -pi."""
    t = text.strip().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    sign = 1.0
    if t.startswith("-"):
        sign, t = -1.0, t[1:]
    num, den = 1.0, 1.0
    if "/" in t:
        t, d = t.split("/", 1)
        den = float(d)
    if "*" in t:
        n, t = t.split("*", 1)
        num = float(n)
    if t != "pi":
        raise _UsageError(f"cannot parse angle {text!r}")
    return sign * num * math.pi / den


def parse_state(text: str):
    """State literal -> StateSpec.

    number:M,N | coherent:ALPHA,BETA | unbound:M,TAU | sup:THETA |
    superposition:M,N,C;M,N,C;...  (complex numbers use Python syntax, 1+2j)
    """
    kind, _, rest = text.partition(":")
    try:
        if kind == "number":
            m, n = rest.split(",")
            return NumberState(int(m), int(n))
        if kind == "coherent":
            if not rest:
                return Coherent()
            a, b = rest.split(",")
            return Coherent(complex(a), complex(b))
        if kind == "unbound":
            m, tau = rest.split(",")
            return UnboundGaussian(int(m), float(tau))
        if kind == "sup":
            return Superposition.two_mode_mix(_parse_angle(rest))
        if kind == "superposition":
            terms = []
            for chunk in rest.split(";"):
                m, n, c = chunk.split(",")
                terms.append((int(m), int(n), complex(c)))
            return Superposition(tuple(terms))
    except (ValueError, DomainError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise _UsageError(f"bad state literal {text!r}: {exc}") from exc
    raise _UsageError(f"unknown state kind {kind!r} in {text!r}")


def _state_label(state) -> str:
    if isinstance(state, NumberState):
        return f"number:{state.m},{state.n}"
    if isinstance(state, Coherent):
        return f"coherent:{state.alpha},{state.beta}"
    if isinstance(state, UnboundGaussian):
        return f"unbound:{state.m},{_fmt(state.tau)}"
    if isinstance(state, Superposition):
        return "superposition:" + ";".join(f"{m},{n},{c}" for (m, n, c) in state.terms)
    return repr(state)


# ----------------------------------------------------------------------
# argument plumbing
# ----------------------------------------------------------------------


def _add_system_args(p: argparse.ArgumentParser):
    p.add_argument("--g", type=float, help="frequency ratio omega/Omega (dimensionless gauge)")
    p.add_argument("--mu1", type=float, help="mass fraction m1/(m1+m2)")
    p.add_argument("--c", type=float, help="untrapped scale ratio Gamma/gamma")
    p.add_argument("--gamma", type=float, help="untrapped relative-mode scale gamma")
    p.add_argument("--Gamma", type=float, default=1.0, help="center-of-mass scale (untrapped)")
    p.add_argument("--m1", type=float, help="mass of particle 1 (physical gauge)")
    p.add_argument("--m2", type=float, help="mass of particle 2 (physical gauge)")
    p.add_argument("--omega", type=float, help="relative-mode angular frequency (physical gauge)")
    p.add_argument("--Omega", type=float, help="trap angular frequency, 0 = untrapped (physical gauge)")
    p.add_argument("--hbar", type=float, default=1.0, help="action scale (physical gauge)")


def build_system(args) -> OscillatorSystem:
    if args.g is not None:
        if args.mu1 is None:
            raise _UsageError("--g needs --mu1")
        return OscillatorSystem.from_dimensionless(args.g, args.mu1)
    if args.c is not None or args.gamma is not None:
        if args.mu1 is None:
            raise _UsageError("--c/--gamma need --mu1")
        return OscillatorSystem.from_untrapped(args.mu1, Gamma=args.Gamma,
                                               c=args.c, gamma=args.gamma)
    if args.m1 is not None:
        missing = [n for n in ("m2", "omega", "Omega") if getattr(args, n) is None]
        if missing:
            raise _UsageError(f"physical gauge needs --{', --'.join(missing)}")
        Gamma = args.Gamma if args.Omega == 0 else None
        return OscillatorSystem.from_physical(args.m1, args.m2, args.omega,
                                              args.Omega, hbar=args.hbar, Gamma=Gamma)
    raise _UsageError("specify a system: --g/--mu1, --c/--gamma/--mu1, or --m1/--m2/--omega/--Omega")


def _system_params(sys: OscillatorSystem) -> dict:
    out = {"m1": sys.m1, "m2": sys.m2, "omega": sys.omega, "Omega": sys.Omega,
           "hbar": sys.hbar, "Gamma": sys.Gamma, "mu1": sys.mu1}
    if sys.is_trapped:
        out["g"] = sys.g
    else:
        out["c"] = sys.c
    return out


def _threads() -> int:
    env = os.environ.get("OSCILLENT_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise _UsageError("OSCILLENT_THREADS must be a positive integer")
        return n
    return min(4, os.cpu_count() or 1)


def compute_purity(sys: OscillatorSystem, state, method: str, args) -> dict:
    """Evaluate one purity with the requested method; returns a JSON-able record."""
    record: dict = {"method": method, "state": _state_label(state),
                    "system": _system_params(sys)}
    if method == "analytic":
        if isinstance(state, Coherent) or (isinstance(state, NumberState)
                                           and state.m == 0 and state.n == 0):
            record["purity"] = gaussian.purity_coherent(sys)
        elif isinstance(state, UnboundGaussian) and state.m == 0:
            record["purity"] = gaussian.purity_unbound_gaussian(sys, state.tau)
        else:
            raise _UsageError("analytic closed forms cover coherent/ground states and "
                              "the m = 0 spreading packet; use --method exact")
    elif method == "exact":
        record["purity"] = acceptance.method_purity(sys, state)
    elif method == "fock":
        if args.gamma1 is not None or args.gamma2 is not None:
            if args.gamma1 is None or args.gamma2 is None:
                raise _UsageError("pass both --gamma1 and --gamma2 or neither")
            basis = fock.BasisParams(args.gamma1, args.gamma2, args.jmax, args.kmax)
        else:
            basis = fock.default_basis(sys, jmax=args.jmax, kmax=args.kmax)
        record["purity"] = fock.purity_truncated(sys, state, basis)
        record["entropy"] = fock.entropy_truncated(sys, state, basis)
        record["basis"] = {"gamma1": basis.gamma1, "gamma2": basis.gamma2,
                           "jmax": basis.jmax, "kmax": basis.kmax}
    elif method == "oracle":
        res = grid.schmidt_analyze(sys, state,
                                   grid.GridSpec(args.n_points, args.extent))
        if res.norm_defect > 1e-3:
            raise NumericalConsistencyError(
                f"grid norm defect {res.norm_defect:.3e} exceeds 1e-3; enlarge --extent")
        record["purity"] = res.purity
        record["entropy"] = res.entropy
        record["norm_defect"] = res.norm_defect
    else:
        raise _UsageError(f"unknown method {method!r}")
    return record


# ----------------------------------------------------------------------
# output helpers
# ----------------------------------------------------------------------


def _emit_json(record: dict, path):
    text = json.dumps(record, sort_keys=True, default=_json_default)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_csv(path, header_params: dict, columns, rows):
    lines = [f"# params: {json.dumps(header_params, sort_keys=True)}",
             ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def _cmd_purity(args) -> int:
    sys_ = build_system(args)
    state = parse_state(args.state)
    record = compute_purity(sys_, state, args.method, args)
    _emit_json(record, args.output)
    return 0


def _cmd_covariance(args) -> int:
    sys_ = build_system(args)
    pack = gaussian.covariance_coherent(sys_)
    record = {
        "system": _system_params(sys_),
        "V": pack.V,
        "V_standard": pack.standard_form(),
        "r": pack.r,
        "logneg": pack.logneg,
        "scaler_s": pack.scaler_s,
    }
    _emit_json(record, args.output)
    return 0


def _sweep_values(args) -> np.ndarray:
    try:
        start, stop, count = args.range.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise _UsageError(f"bad --range {args.range!r}; expected START:STOP:COUNT") from exc
    if count < 2:
        raise _UsageError("sweep needs at least 2 points")
    if args.scale == "log":
        if start <= 0 or stop <= 0:
            raise _UsageError("log scale needs positive endpoints")
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _sweep_point(args, param: str, value: float) -> float:
    if param == "g":
        if args.mu1 is None:
            raise _UsageError("sweeping g needs --mu1")
        sys_ = OscillatorSystem.from_dimensionless(value, args.mu1)
        state = parse_state(args.state)
    elif param == "mu1":
        if args.c is not None or args.gamma is not None:
            sys_ = OscillatorSystem.from_untrapped(value, Gamma=args.Gamma,
                                                   c=args.c, gamma=args.gamma)
        elif args.g is not None:
            sys_ = OscillatorSystem.from_dimensionless(args.g, value)
        else:
            raise _UsageError("sweeping mu1 needs --g or --c/--gamma")
        state = parse_state(args.state)
    elif param == "c":
        if args.mu1 is None:
            raise _UsageError("sweeping c needs --mu1")
        sys_ = OscillatorSystem.from_untrapped(args.mu1, Gamma=args.Gamma, c=value)
        state = parse_state(args.state)
    elif param == "tau":
        sys_ = build_system(args)
        base = parse_state(args.state)
        if not isinstance(base, UnboundGaussian):
            raise _UsageError("sweeping tau needs --state unbound:M,TAU")
        state = UnboundGaussian(base.m, float(value))
    elif param == "theta":
        sys_ = build_system(args)
        state = Superposition.two_mode_mix(float(value))
    else:
        raise _UsageError(f"unknown sweep parameter {param!r}")
    return compute_purity(sys_, state, args.method, args)["purity"]


def _cmd_sweep(args) -> int:
    values = _sweep_values(args)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        purities = list(pool.map(lambda v: _sweep_point(args, args.param, float(v)), values))
    params = {"param": args.param, "range": args.range, "scale": args.scale,
              "method": args.method, "state": args.state}
    for name in ("g", "mu1", "c", "gamma", "Gamma", "hbar"):
        val = getattr(args, name)
        if val is not None and name != args.param:
            params[name] = val
    rows = [(float(v), float(p)) for v, p in zip(values, purities)]
    _write_csv(args.output, params, [args.param, "purity"], rows)
    return 0


# fixed parameter sets of the emitted figure datasets
_FIG12_COMBOS = [(1.0, 0.5), (1.0, 0.25), (10.0, 0.5), (10.0, 0.25)]
_FIG3_G = [1.0, 10.0, 100.0, 1000.0]
_FIG4_C = [1.0, 3.0, 10.0, 30.0]
_FIG5_G = [1.0, 5.0]
_FIG6_G = [1.0, 5.0]
_FIG6_THETA = [("0", 0.0), ("pi_6", math.pi / 6), ("pi_3", math.pi / 3)]
_FIG7_PAIRS = [(1 / math.sqrt(2), 1 / math.sqrt(2)), (1.0, 1.0),
               (1 / math.sqrt(2), 1.0), (1.0, 1 / math.sqrt(2))]
_FIG7_CASES = [(1.0, 0.5), (5.0, 0.5), (1.0, 0.1), (5.0, 0.1)]


def _mu_grid(n: int = 99) -> np.ndarray:
    return np.linspace(0.01, 0.99, n)


def _cmd_figure(args) -> int:
    os.makedirs(args.outdir, exist_ok=True)
    emitted = []

    def outpath(name: str) -> str:
        path = os.path.join(args.outdir, name)
        emitted.append(path)
        return path

    which = args.which
    if which in ("fig1", "fig2"):
        m, n = (0, 0) if which == "fig1" else (1, 0)
        spec = grid.GridSpec(n_points=args.points, extent_sigmas=8.0)
        for (g, mu1) in _FIG12_COMBOS:
            sys_ = OscillatorSystem.from_dimensionless(g, mu1)
            dg = grid.density_grid(sys_, NumberState(m, n), spec)
            params = json.dumps({"g": g, "mu1": mu1, "state": f"number:{m},{n}",
                                 "n": args.points}, sort_keys=True)
            grid.save_density_csv(dg, outpath(f"{which}_g{g:g}_mu{mu1:g}.csv"), params)
    elif which == "fig3":
        mus = _mu_grid()
        rows = [(float(mu),) + tuple(
            gaussian.purity_coherent(OscillatorSystem.from_dimensionless(g, float(mu)))
            for g in _FIG3_G) for mu in mus]
        _write_csv(outpath("fig3.csv"), {"g": _FIG3_G},
                   ["mu1"] + [f"P_g{g:g}" for g in _FIG3_G], rows)
    elif which == "fig4":
        flip = args.c_convention == "gamma-over-Gamma"
        mus = _mu_grid()
        rows = []
        for mu in mus:
            row = [float(mu)]
            for c in _FIG4_C:
                c_eff = 1.0 / c if flip else c
                sys_ = OscillatorSystem.from_untrapped(float(mu), c=c_eff)
                row.append(gaussian.purity_unbound_gaussian(sys_, 0.0))
            rows.append(tuple(row))
        _write_csv(outpath("fig4.csv"),
                   {"c": _FIG4_C, "c_convention": args.c_convention, "tau": 0.0},
                   ["mu1"] + [f"P_c{c:g}" for c in _FIG4_C], rows)
    elif which == "fig5":
        mus = _mu_grid()
        combos = [(m, n) for m in (0, 1, 2) for n in (0, 1, 2, 3)]
        for g in _FIG5_G:
            rows = []
            for mu in mus:
                sys_ = OscillatorSystem.from_dimensionless(g, float(mu))
                rows.append((float(mu),) + tuple(
                    exact.purity_number(sys_, m, n) for (m, n) in combos))
            _write_csv(outpath(f"fig5_g{g:g}.csv"), {"g": g},
                       ["mu1"] + [f"P{m}{n}" for (m, n) in combos], rows)
    elif which == "fig6":
        mus = _mu_grid()
        for g in _FIG6_G:
            rows = []
            for mu in mus:
                sys_ = OscillatorSystem.from_dimensionless(g, float(mu))
                rows.append((float(mu),) + tuple(
                    exact.purity_superposition(sys_, Superposition.two_mode_mix(th))
                    for (_, th) in _FIG6_THETA))
            _write_csv(outpath(f"fig6_g{g:g}.csv"),
                       {"g": g, "theta": [lbl for (lbl, _) in _FIG6_THETA]},
                       ["mu1"] + [f"P_theta_{lbl}" for (lbl, _) in _FIG6_THETA], rows)
    elif which == "fig7":
        for (g, mu1) in _FIG7_CASES:
            sys_ = OscillatorSystem.from_dimensionless(g, mu1)
            rows = fock.convergence_run(sys_, NumberState(0, 1), _FIG7_PAIRS,
                                        max_truncation=5)
            params = json.dumps({"g": g, "mu1": mu1, "state": "number:0,1"},
                                sort_keys=True)
            fock.write_convergence_csv(rows, outpath(f"fig7_g{g:g}_mu{mu1:g}.csv"), params)
    else:
        raise _UsageError(f"unknown figure {which!r}")
    for path in emitted:
        print(path)
    return 0


def _cmd_oracle_compare(args) -> int:
    spec = grid.GridSpec(n_points=args.n_points, extent_sigmas=args.extent)
    rows = []
    worst = 0.0
    for (label, sys_, state) in acceptance.oracle_cases():
        ref = acceptance.method_purity(sys_, state)
        got = grid.schmidt_analyze(sys_, state, spec).purity
        diff = abs(got - ref)
        worst = max(worst, diff)
        rows.append((label, float(ref), float(got), float(diff)))
    _write_csv(args.output, {"n_points": args.n_points, "extent": args.extent},
               ["case", "method_purity", "oracle_purity", "abs_diff"], rows)
    if worst > 1e-6:
        raise NumericalConsistencyError(f"worst method-vs-oracle residual {worst:.3e} exceeds 1e-6")
    return 0


def _cmd_selftest(args) -> int:
    selection = None
    if args.criteria:
        selection = [int(tok) for tok in args.criteria.split(",")]
    ok = acceptance.run_all(selection)
    if not ok:
        return 2
    return 0


# ----------------------------------------------------------------------
# parser assembly
# ----------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="oscillent",
                     description="Interparticle entanglement of two coupled oscillators.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        _add_system_args(p)
        p.add_argument("--config", help="JSON file supplying defaults for any flag")
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    def method_opts(p):
        p.add_argument("--method", choices=["analytic", "exact", "fock", "oracle"],
                       default="exact")
        p.add_argument("--jmax", type=int, default=12, help="fock truncation")
        p.add_argument("--kmax", type=int, default=None, help="fock truncation (default jmax)")
        p.add_argument("--gamma1", type=float, help="fock basis scale for particle 1")
        p.add_argument("--gamma2", type=float, help="fock basis scale for particle 2")
        p.add_argument("--n-points", type=int, default=512, help="oracle grid points per axis")
        p.add_argument("--extent", type=float, default=8.0, help="oracle half-width in sigmas")

    p = sub.add_parser("purity", help="single purity evaluation")
    common(p)
    method_opts(p)
    p.add_argument("--state", required=True, help="state literal, e.g. number:0,1")
    p.set_defaults(func=_cmd_purity)

    p = sub.add_parser("covariance", help="coherent-state covariance pipeline")
    common(p)
    p.set_defaults(func=_cmd_covariance)

    p = sub.add_parser("sweep", help="one-parameter sweep to CSV")
    common(p)
    method_opts(p)
    p.add_argument("--param", required=True, choices=["g", "mu1", "tau", "theta", "c"])
    p.add_argument("--range", required=True, help="START:STOP:COUNT")
    p.add_argument("--scale", choices=["linear", "log"], default="linear")
    p.add_argument("--state", default="coherent:", help="state literal")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="emit a reference figure dataset")
    p.add_argument("which", choices=[f"fig{i}" for i in range(1, 8)])
    p.add_argument("--outdir", default=".", help="output directory")
    p.add_argument("--points", type=int, default=201, help="grid points for density figures")
    p.add_argument("--c-convention", choices=["Gamma-over-gamma", "gamma-over-Gamma"],
                   default="Gamma-over-gamma",
                   help="meaning of the fig4 curve parameter c")
    p.add_argument("--config", help="JSON file supplying defaults for any flag")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("oracle-compare", help="method-vs-oracle residual table")
    p.add_argument("--config", help="JSON file supplying defaults for any flag")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--n-points", type=int, default=512)
    p.add_argument("--extent", type=float, default=8.0)
    p.set_defaults(func=_cmd_oracle_compare)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    p.set_defaults(func=_cmd_selftest)

    return parser


def _apply_config(args, argv):
    if getattr(args, "config", None) is None:
        return
    with open(args.config) as fh:
        values = json.load(fh)
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    for key, val in values.items():
        dest = key.replace("-", "_")
        if dest in explicit or not hasattr(args, dest):
            continue
        setattr(args, dest, val)


def run(argv=None) -> int:
    argv = list(_sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, argv)
        if getattr(args, "kmax", None) is None and hasattr(args, "jmax"):
            args.kmax = args.jmax
        return args.func(args)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 3
    except NumericalConsistencyError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except (DomainError, OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1
    except OscillentError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()

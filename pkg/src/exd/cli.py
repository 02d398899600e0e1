"""Command-line interface: ``exd <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 invalid or inadmissible
configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import moments as mom
from . import specfun
from .errors import AdmissibilityError, ConfigError, ExdError
from .exclusion import build_density, center_of_mass_crosscheck, two_body_systems
from .mass_density import MassDensity, continuum_moment
from .potentials import BOUNCER, HARMONIC, WELL, Eigenstate, PotentialSpec
from .quadrature import DEFAULT_TOL, TABLE_TOL

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

TABLE_TOLERANCE = 5e-5
INTERNAL_TOLERANCE = 1e-8

TABLE1 = ((0, 0.53192), (1, 0.61093), (10, 0.67388), (20, 0.67198))
TABLE2 = ((1, 0.59677), (2, 0.65984), (3, 0.66894), (5, 0.67223), (15, 0.67121))
CROSSCHECK_SETS = ((1.0, 3.0, 3.0, 1.0, 1.0), (1.0, 3.0, 5.0, 1.0, 2.0), (0.5, 2.0, 4.0, 3.0, 1.0))

_POTENTIAL_KINDS = {"well": WELL, "sho": HARMONIC, "linear": BOUNCER}


def fmt(x):
    return f"{x:.10g}"


# --------------------------------------------------------------------------
# Descriptors and configuration
# --------------------------------------------------------------------------


def _split_descriptor(text):
    name, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ConfigError(f"expected key=value in descriptor {text!r}, got {item!r}")
            params[key.strip()] = value.strip()
    return name.strip(), params


def _float(params, key, default):
    if key not in params:
        return default
    try:
        return float(params[key])
    except ValueError:
        raise ConfigError(f"{key}={params[key]!r} is not a number") from None


def parse_potential(text, domain):
    """``well|sho|linear[:l=<l>,F=<F>,variant=full|half]``."""
    name, params = _split_descriptor(text)
    if name not in _POTENTIAL_KINDS:
        raise ConfigError(f"unknown potential {name!r}; expected well, sho or linear")
    unknown = set(params) - {"l", "F", "variant"}
    if unknown:
        raise ConfigError(f"unknown potential parameter(s): {', '.join(sorted(unknown))}")
    variant = params.get("variant")
    if variant is None:
        half = domain[0] >= 0.0
    elif variant in ("full", "half"):
        half = variant == "half"
    else:
        raise ConfigError(f"variant must be full or half, got {variant!r}")
    try:
        return PotentialSpec(_POTENTIAL_KINDS[name], _float(params, "l", 1.0), _float(params, "F", 1.0), half)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_lambda(text, domain):
    """``uniform | power:r=<r> | invsqrt:l=<l>``, each with optional ``A=<A>``."""
    name, params = _split_descriptor(text)
    A = _float(params, "A", 1.0)
    try:
        if name == "uniform":
            return MassDensity.uniform(domain, A)
        if name == "power":
            if "r" not in params:
                raise ConfigError("power density needs r=<r>")
            return MassDensity.power(_float(params, "r", 0.0), domain, A)
        if name == "invsqrt":
            return MassDensity.inverse_sqrt_arc(_float(params, "l", 1.0), domain, A)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown mass density {name!r}; expected uniform, power or invsqrt")


def parse_domain(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"domain must be lo,hi; got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"empty domain {text!r}")
    return lo, hi


def parse_int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def default_tolerance():
    env = os.environ.get("EXD_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        tol = float(env)
    except ValueError:
        raise ConfigError(f"EXD_TOL={env!r} is not a number") from None
    if not tol > 0:
        raise ConfigError("EXD_TOL must be positive")
    return tol


@dataclass
class RunConfig:
    command: str
    potential: Optional[PotentialSpec] = None
    density: Optional[MassDensity] = None
    potential_text: str = ""
    lambda_text: str = ""
    n: Optional[int] = None
    n_list: List[int] = field(default_factory=list)
    k: List[int] = field(default_factory=lambda: [1])
    domain: Tuple[float, float] = (0.0, 1.0)
    samples: int = 1000
    tolerance: float = DEFAULT_TOL
    parity: Optional[str] = None
    weight: str = "position"
    output: Optional[str] = None
    format: str = "csv"
    suite: str = "all"
    config_path: Optional[str] = None

    def echo(self):
        out = {"command": self.command}
        if self.potential_text:
            out["potential"] = self.potential_text
        if self.lambda_text:
            out["lambda"] = self.lambda_text
        if self.n is not None:
            out["n"] = self.n
        if self.n_list:
            out["n_list"] = list(self.n_list)
        if self.command in ("moments", "converge"):
            out["k"] = list(self.k)
        if self.command in ("density", "moments", "converge", "partition"):
            out["domain"] = list(self.domain)
            out["tolerance"] = self.tolerance
        if self.command == "density":
            out["samples"] = self.samples
        if self.parity:
            out["parity"] = self.parity
        if self.weight != "position":
            out["weight"] = self.weight
        if self.config_path:
            out["config"] = self.config_path
        if self.command == "verify":
            out["suite"] = self.suite
        return out

    def state(self, n=None):
        n = self.n if n is None else n
        if n is None:
            raise ConfigError("--n is required")
        try:
            return Eigenstate(self.potential, n, self.parity)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def build_config(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command in ("density", "moments", "converge", "partition"):
        cfg.domain = parse_domain(args.domain)
        cfg.potential_text = args.potential
        cfg.lambda_text = args.lambda_
        cfg.potential = parse_potential(args.potential, cfg.domain)
        cfg.density = parse_lambda(args.lambda_, cfg.domain)
        cfg.n = args.n
        cfg.n_list = parse_int_list(args.n_list) if args.n_list else []
        cfg.k = parse_int_list(args.k) if args.k else [1]
        if any(k < 0 for k in cfg.k):
            raise ConfigError("moment orders must be nonnegative")
        cfg.parity = args.parity
        cfg.weight = getattr(args, "weight", "position")
        cfg.samples = args.samples
        if cfg.samples < 2:
            raise ConfigError("--samples must be at least 2")
    cfg.tolerance = args.tol if args.tol is not None else default_tolerance()
    if not cfg.tolerance > 0:
        raise ConfigError("tolerance must be positive")
    cfg.output = args.out
    cfg.format = args.format
    if args.command == "verify":
        cfg.suite = args.suite
    if args.command == "twobody":
        cfg.config_path = args.config
    if args.command == "converge" and not cfg.n_list:
        raise ConfigError("converge needs --n-list")
    return cfg


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def _cell(v):
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def render(cfg: RunConfig, columns, rows, diagnostics, comments=()):
    if cfg.format == "json":
        results = [dict(zip(columns, row)) for row in rows]
        doc = {"config": cfg.echo(), "results": results, "diagnostics": diagnostics}
        return json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    for key, value in cfg.echo().items():
        buf.write(f"# {key}={_cell(value) if not isinstance(value, list) else ','.join(map(_cell, value))}\n")
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return float(fmt(v)) if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".exd-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def trapezoid(y, x):
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def cmd_density(cfg: RunConfig):
    ed = build_density(cfg.density, cfg.state(), cfg.tolerance, cfg.weight)
    lo, hi = cfg.domain
    xs = np.linspace(lo, hi, cfg.samples)
    ps = ed(xs)
    boundaries = sorted({b for cell in ed.partition for b in cell} - {lo, hi})
    rows = [(float(x), float(p), "sample") for x, p in zip(xs, ps)]
    rows += [(float(b), float(ed(b)), "boundary") for b in boundaries]
    rows.sort(key=lambda r: (r[0], r[2]))

    t_h = trapezoid(ps, xs)
    if cfg.samples >= 3 and (cfg.samples - 1) % 2 == 0:
        t_2h = trapezoid(ps[::2], xs[::2])
    else:
        t_2h = trapezoid(ps[:-1:2].tolist() + [ps[-1]], xs[:-1:2].tolist() + [xs[-1]])
    bound = max(4.0 * abs(t_h - t_2h), 1e-9)
    diagnostics = {
        "C": ed.C,
        "N": ed.particle_count,
        "partition": [list(c) for c in ed.partition],
        "trapezoid_integral": t_h,
        "trapezoid_error_bound": bound,
        "admissibility": ed.report.as_dict(),
    }
    comments = [
        f"C={fmt(ed.C)}",
        f"N={ed.particle_count}",
        f"trapezoid_integral={fmt(t_h)} (sample rows only)",
        f"trapezoid_error_bound={fmt(bound)}",
    ]
    return render(cfg, ["x", "p", "row"], rows, diagnostics, comments)


def _closed_form(cfg, n, k):
    pot, dens = cfg.potential, cfg.density
    if (
        k == 1 and pot.kind == WELL and pot.half and dens.kind in ("uniform", "power")
        and dens.domain == (0.0, pot.l) and (dens.kind == "uniform" or dens.r in (0, 1, 2))
    ):
        r = 0 if dens.kind == "uniform" else int(dens.r)
        return mom.sinusoid_mean_closed(r, n, pot.l)
    return None


def cmd_moments(cfg: RunConfig):
    ed = build_density(cfg.density, cfg.state(), cfg.tolerance)
    rows = []
    for k in cfg.k:
        res = mom.moment(ed, k, cfg.tolerance)
        rows.append((res.n, res.k, res.value, res.method, res.continuum_limit, res.gap))
        closed = _closed_form(cfg, ed.state.n, k)
        if closed is not None:
            rows.append((res.n, k, closed, mom.CLOSED_FORM, res.continuum_limit, abs(closed - res.continuum_limit)))
    diagnostics = {"C": ed.C, "N": ed.particle_count}
    return render(cfg, ["n", "k", "value", "method", "continuum_limit", "gap"], rows, diagnostics,
                  [f"C={fmt(ed.C)}", f"N={ed.particle_count}"])


def cmd_converge(cfg: RunConfig):
    rows = []
    failures = 0
    for k in cfg.k:
        for res in mom.convergence_sweep(cfg.density, cfg.potential, k, cfg.n_list, cfg.parity, cfg.tolerance):
            rows.append((res.n, res.k, res.value, res.continuum_limit, res.gap, res.rel_gap, res.error or ""))
            failures += not res.ok
    diagnostics = {"failures": failures}
    text = render(cfg, ["n", "k", "value", "continuum_limit", "gap", "rel_gap", "error"], rows, diagnostics)
    return text


def cmd_partition(cfg: RunConfig):
    ed = build_density(cfg.density, cfg.state(), cfg.tolerance)
    probs = ed.interval_probabilities(cfg.tolerance)
    rows = [(i + 1, a, b, p) for i, ((a, b), p) in enumerate(zip(ed.partition, probs))]
    diagnostics = {"N": ed.particle_count, "probability_sum": math.fsum(probs)}
    return render(cfg, ["particle", "lo", "hi", "probability"], rows, diagnostics,
                  [f"N={ed.particle_count}", f"probability_sum={fmt(math.fsum(probs))}"])


_TWOBODY_KEYS = {"m1", "m2", "a", "b", "b_prime", "alpha1", "alpha2", "n", "center1", "center2"}


def read_twobody_config(path):
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key = key.strip()
        if not eq:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        if key not in _TWOBODY_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = float(value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: {key}={value.strip()!r} is not a number") from None
    for key in ("m1", "m2", "a", "b"):
        if key not in values:
            raise ConfigError(f"{path}: missing required key {key!r}")
    if ("center1" in values) != ("center2" in values):
        raise ConfigError(f"{path}: give both center1 and center2 or neither")
    return values


def cmd_twobody(cfg: RunConfig):
    v = read_twobody_config(cfg.config_path)
    a, b = v["a"], v["b"]
    b_prime = v.get("b_prime", b)
    n = int(v.get("n", 1))
    alphas = (v.get("alpha1", 1.0), v.get("alpha2", 2.0))
    centers = (v["center1"], v["center2"]) if "center1" in v else None
    if v["m1"] <= 0 or v["m2"] <= 0 or min(alphas) <= 0 or n < 1:
        raise ConfigError("masses and alphas must be positive, n >= 1")
    try:
        com = center_of_mass_crosscheck(a, b, b_prime, v["m1"], v["m2"], n, alphas, centers=centers)
        systems = two_body_systems(a, b, b_prime, v["m1"], v["m2"], n, alphas, centers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [(name, value, systems[name].exclusive) for name, value in com._asdict().items()]
    diagnostics = {"max_deviation": com.max_deviation()}
    return render(cfg, ["system", "mean", "exclusive"], rows, diagnostics,
                  [f"max_deviation={fmt(com.max_deviation())}"])


# --------------------------------------------------------------------------
# Verification suites
# --------------------------------------------------------------------------


@dataclass
class Check:
    suite: str
    label: str
    expected: float
    computed: float
    tolerance: float
    relative: bool = False
    informational: bool = False

    @property
    def passed(self):
        if self.informational:
            return True
        if not math.isfinite(self.computed):
            return False
        diff = abs(self.computed - self.expected)
        if self.relative:
            diff /= abs(self.expected)
        return diff <= self.tolerance

    def line(self):
        verdict = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        kind = "rel" if self.relative else "abs"
        return (f"{verdict} {self.suite}: {self.label} expected={fmt(self.expected)} "
                f"computed={fmt(self.computed)} tol={self.tolerance:g} ({kind})")


def _table_mean(pot, n, parity=None):
    dens = MassDensity.power(1, (0.0, 1.0))
    ed = build_density(dens, Eigenstate(pot, n, parity), TABLE_TOL)
    return mom.moment(ed, 1, TABLE_TOL).value


def verify_table1():
    pot = PotentialSpec(HARMONIC, 1.0, half=True)
    return [Check("table1", f"<x> harmonic n={n}", want, _table_mean(pot, n), TABLE_TOLERANCE)
            for n, want in TABLE1]


def verify_table2():
    pot = PotentialSpec(BOUNCER, 1.0, half=True)
    return [Check("table2", f"<x> linear odd k={k}", want, _table_mean(pot, k, "odd"), TABLE_TOLERANCE)
            for k, want in TABLE2]


def verify_closedforms():
    checks = []
    well = PotentialSpec(WELL, 1.0, half=True)
    for r in (0, 1, 2):
        dens = MassDensity.uniform((0.0, 1.0)) if r == 0 else MassDensity.power(r, (0.0, 1.0))
        for n in (1, 2, 3, 5, 10, 20, 50):
            ed = build_density(dens, Eigenstate(well, n))
            checks.append(Check("closedforms", f"sinusoid mean r={r} n={n}",
                                mom.sinusoid_mean_closed(r, n), mom.moment(ed, 1).value, 1e-9))
    for n in (1, 3, 10):
        checks.append(Check("closedforms", f"as-printed r=2 mean n={n}", mom.sinusoid_mean_closed(2, n),
                            mom.sinusoid_mean_printed_r2(n), 0.0, informational=True))
    for r in (0, 1, 2, 3):
        dens = MassDensity.power(r, (0.0, 1.0))
        checks.append(Check("closedforms", f"continuum mean r={r} = (r+1)/(r+2)",
                            (r + 1) / (r + 2), continuum_moment(dens, 1), 1e-10))
    for n in range(21):
        checks.append(Check("closedforms", f"<x^2> coefficient = 0.5 n={n}", 0.5,
                            mom.im_moment_coefficient(n, 2).C_nk, INTERNAL_TOLERANCE))
    for n in range(13):
        checks.append(Check("closedforms", f"<x^4> closed form vs quadrature n={n}",
                            mom.im_fourth_moment_closed(n), mom.im_moment_coefficient(n, 4).C_nk,
                            INTERNAL_TOLERANCE))
    checks.append(Check("closedforms", "<x^4> coefficient limit = 3/8", 0.375,
                        mom.im_fourth_moment_closed(10 ** 6), 1e-6))
    for n in range(13):
        checks.append(Check("closedforms", f"<x> coefficient closed form vs quadrature n={n}",
                            mom.im_first_moment_closed(n), mom.im_moment_coefficient(n, 1).C_nk,
                            INTERNAL_TOLERANCE))
    two_over_pi = 2.0 / math.pi
    checks.append(Check("closedforms", "<x> coefficient n=200 -> 2/pi", two_over_pi,
                        mom.im_first_moment_closed(200), 0.01, relative=True))
    gaps = [abs(mom.im_first_moment_closed(n) - two_over_pi) for n in (10, 20, 50, 100, 200)]
    monotone = all(g1 < g0 for g0, g1 in zip(gaps[:-1], gaps[1:]))
    checks.append(Check("closedforms", "|<x> coefficient - 2/pi| decreasing over n=10,20,50,100,200",
                        1.0, float(monotone), 0.0))
    for n in (0, 1, 2, 200):
        printed = mom.im_first_moment_printed(n)
        quad_val = mom.im_moment_coefficient(n, 1).C_nk if n <= 40 else mom.im_first_moment_closed(n)
        checks.append(Check("closedforms", f"as-printed <x> coefficient n={n} "
                            f"(ratio printed/quadrature={fmt(printed / quad_val)})",
                            quad_val, printed, 0.0, informational=True))
    checks.append(Check("closedforms", "factorial identity holds for n=0..20", 1.0,
                        float(all(specfun.factorial_identity_check(n) for n in range(21))), 0.0))
    checks.append(Check("closedforms", "Stirling ratio n=1000 -> 1/sqrt(pi)", 1.0 / math.sqrt(math.pi),
                        specfun.stirling_ratio(1000), 2e-4, relative=True))
    return checks


def verify_crosscheck():
    checks = []
    for a, b, bp, m1, m2 in CROSSCHECK_SETS:
        com = center_of_mass_crosscheck(a, b, bp, m1, m2)
        tag = f"a={a:g} b={b:g} b'={bp:g} m1={m1:g} m2={m2:g}"
        for name, value in com._asdict().items():
            if name == "point_masses":
                continue
            checks.append(Check("crosscheck", f"{name} vs point masses {tag}",
                                com.point_masses, value, 1e-9))
    return checks


SUITES = {
    "table1": verify_table1,
    "table2": verify_table2,
    "closedforms": verify_closedforms,
    "crosscheck": verify_crosscheck,
}


def run_verify(suite):
    names = list(SUITES) if suite == "all" else [suite]
    checks = []
    timings = {}
    for name in names:
        start = time.perf_counter()
        checks.extend(SUITES[name]())
        timings[name] = time.perf_counter() - start
    return checks, timings


def cmd_verify(cfg: RunConfig, stream=None):
    stream = stream or sys.stdout
    checks, timings = run_verify(cfg.suite)
    for c in checks:
        stream.write(c.line() + "\n")
    failed = sum(not c.passed for c in checks)
    for name, secs in timings.items():
        stream.write(f"# {name}: {secs:.2f}s\n")
    stream.write(f"# {len(checks) - failed}/{len(checks)} checks passed\n")
    if cfg.output:
        doc = {
            "config": cfg.echo(),
            "results": [
                {"suite": c.suite, "label": c.label, "expected": c.expected, "computed": c.computed,
                 "tolerance": c.tolerance, "verdict": c.line().split()[0]}
                for c in checks
            ],
            "diagnostics": {"failed": failed},
        }
        emit(json.dumps(_jsonable(doc), indent=2) + "\n", cfg.output)
    return EXIT_VERIFY if failed else EXIT_OK


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def make_parser():
    parser = argparse.ArgumentParser(
        prog="exd",
        description="Densities of mutually exclusive particles built from bound quantum states.",
        epilog="exit codes: 0 ok, 1 verification failure, 2 bad or inadmissible input, 3 numerical failure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--potential", default="well", help="well|sho|linear[:l=..,F=..,variant=full|half]")
        p.add_argument("--lambda", dest="lambda_", default="uniform", help="uniform | power:r=<r> | invsqrt:l=<l>")
        p.add_argument("--domain", default="0,1", help="lo,hi of the mass density")
        p.add_argument("--n", type=int, help="quantum number")
        p.add_argument("--n-list", help="comma-separated quantum numbers")
        p.add_argument("--k", help="moment order(s), comma-separated")
        p.add_argument("--parity", choices=("odd", "even"), help="bouncer state parity (default odd)")
        p.add_argument("--samples", type=int, default=1000)

    helps = {
        "density": "sample p(x; n) on a grid",
        "moments": "moments <x^k> of p(x; n)",
        "converge": "first moments over a list of quantum numbers",
        "partition": "particle cells and their probabilities",
    }
    for name, text in helps.items():
        common(sub.add_parser(name, help=text))
    sub.choices["density"].add_argument(
        "--weight", choices=("position", "momentum"), default="position",
        help="momentum swaps |psi|^2 for the signed psi*psi' (always rejected)",
    )
    twobody = sub.add_parser("twobody", help="center of mass of two-particle systems")
    twobody.add_argument("--config", required=True, help="key=value two-body configuration file")
    verify = sub.add_parser("verify", help="reproduce reference values and print PASS/FAIL lines")
    verify.add_argument("suite", nargs="?", default="all", choices=["all", *SUITES])

    for p in sub.choices.values():
        p.add_argument("--tol", type=float, help="absolute quadrature tolerance (env EXD_TOL)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")
    return parser


def _join_domain(argv):
    # "--domain -1,1" would otherwise read -1,1 as an option
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--domain" and i + 1 < len(argv):
            out.append(f"--domain={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


COMMANDS = {
    "density": cmd_density,
    "moments": cmd_moments,
    "converge": cmd_converge,
    "partition": cmd_partition,
    "twobody": cmd_twobody,
}


def main(argv: Optional[Sequence[str]] = None):
    parser = make_parser()
    argv = _join_domain(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        emit(COMMANDS[cfg.command](cfg), cfg.output)
        return EXIT_OK
    except AdmissibilityError as exc:
        sys.stderr.write(f"exd: {exc}\n  {exc.report.describe()}\n")
        return EXIT_CONFIG
    except ConfigError as exc:
        sys.stderr.write(f"exd: configuration error: {exc}\n")
        return EXIT_CONFIG
    except (ExdError, ArithmeticError) as exc:
        sys.stderr.write(f"exd: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except Exception as exc:  # never surface a traceback
        sys.stderr.write(f"exd: unexpected failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

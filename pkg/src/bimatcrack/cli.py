"""Batch front end: configure, solve, report and write profile data.

A run is described by an INI file (or by command-line flags alone for the
built-in example cases)::

    [run]
    mode = mode3              ; mode3 | planestrain
    direction = forward       ; forward | inverse
    grid_n = 1024
    tol = 1e-4                ; threshold applied to every residual
    balance_tol = 1e-6

    [constants]               ; or [materials] with mu_plus, mu_minus, nu_plus, nu_minus
    eta = 0.5
    k = 1

    [input]                   ; exactly one of: oracle, expressions, table
    oracle = antisym_411
    F = 1

    [output]
    dir = out
    formats = csv, plotdata, png
    stem = profile

Expression inputs give face tractions ``p_plus`` and ``p_minus`` (forward)
or ``jump_u`` and ``mean_u`` (inverse) as formulas in ``x``. Plane-strain
components carry a ``_1`` / ``_2`` suffix, e.g. ``p_plus_1``. A ``table``
key names a CSV file whose header holds ``x`` and the same field names; the
columns are resampled onto the solver grid.

Optional ``tip_<field>`` and ``far_<field>`` keys declare the power-law
exponents of a field at the crack tip and at infinity; by default fields are
bounded at the tip and decay exponentially.
"""
import argparse
import ast
import configparser
import dataclasses
import json
import math
import operator
import os
import pathlib
import sys

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from . import fieldops as fo
from . import mode3 as m3
from . import oracles as orc
from . import planestrain as ps
from .fieldops import NEG, POS
from .materials import MaterialPair, derive_constants, formal_constants, constants_to_dict

OUT_ENV = "BIMATCRACK_OUT"
MODES = ("mode3", "planestrain")
DIRECTIONS = ("forward", "inverse")
FORMATS = ("csv", "plotdata", "png")
CSV_HEADER = "x,jump_u,mean_u,sigma,u_upper,u_lower"
SERIES = ("jump_u", "mean_u", "sigma", "u_upper", "u_lower")


class ConfigError(ValueError):
    """The run description is malformed or incomplete."""


# expression language

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"exp": np.exp, "sqrt": np.sqrt}
_CONSTS = {"pi": math.pi}


def compile_expression(text):
    """Compile a formula in ``x`` to a vectorised callable.

    The grammar covers numbers, ``x``, ``pi``, ``+ - * / **``, unary signs
    and the functions ``exp`` and ``sqrt``.

    Raises
    ------
    ConfigError
        On any other syntax.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def check(node):
        if isinstance(node, ast.Expression):
            return check(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return
        if isinstance(node, ast.Name) and (node.id == "x" or node.id in _CONSTS):
            return
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            check(node.left)
            check(node.right)
            return
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            check(node.operand)
            return
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            check(node.args[0])
            return
        raise ConfigError(f"unsupported construct {ast.dump(node)[:40]} in {text!r}")

    check(tree)

    def ev(node, x):
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            return x if node.id == "x" else _CONSTS[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](ev(node.left, x), ev(node.right, x))
        if isinstance(node, ast.UnaryOp):
            return _UNOPS[type(node.op)](ev(node.operand, x))
        return _FUNCS[node.func.id](ev(node.args[0], x))

    def fn(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(ev(tree.body, x), dtype=float), x.shape).copy()

    return fn


# tabulated input

def read_table(path):
    """Read a CSV table with a header row; returns ``{column: array}``."""
    try:
        data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
    except OSError as exc:
        raise ConfigError(f"cannot read table {path}: {exc}") from None
    if data.dtype.names is None or "x" not in data.dtype.names:
        raise ConfigError(f"table {path} needs a header with an 'x' column")
    out = {name: np.atleast_1d(data[name]) for name in data.dtype.names}
    for name, col in out.items():
        if not np.all(np.isfinite(col)):
            raise ConfigError(f"table {path}: column {name!r} has unreadable or non-finite entries")
    return out


def resample(x_data, v_data, x_out, tip=0.0, far=-math.inf):
    """Resample one-sided data onto ``x_out`` (all on the same side of 0).

    Inside the data range a monotone cubic (PCHIP) interpolant in ``log|x|``
    is used. Towards the tip the nearest sample is continued as
    ``|x|**tip``; towards infinity as ``|x|**far`` or, for ``far = -inf``,
    as ``exp(-(|x| - |x_N|))``.
    """
    X = np.abs(np.asarray(x_data, dtype=float))
    v = np.asarray(v_data, dtype=float)
    order = np.argsort(X)
    X, v = X[order], v[order]
    if X.size < 2 or np.any(X <= 0) or np.any(np.diff(X) <= 0):
        raise ConfigError("table abscissae must be distinct, nonzero and on one side of 0")
    Xo = np.abs(np.asarray(x_out, dtype=float))
    out = np.empty_like(Xo)
    inside = (Xo >= X[0]) & (Xo <= X[-1])
    out[inside] = PchipInterpolator(np.log(X), v)(np.log(Xo[inside]))
    lo, hi = Xo < X[0], Xo > X[-1]
    out[lo] = v[0] * (Xo[lo] / X[0]) ** tip
    if math.isinf(far):
        out[hi] = v[-1] * np.exp(-(Xo[hi] - X[-1]))
    else:
        out[hi] = v[-1] * (Xo[hi] / X[-1]) ** far
    return out


# configuration

@dataclasses.dataclass
class RunConfig:
    """Everything one run needs.

    Exactly one of ``oracle``, ``expressions`` and ``table`` is set.
    ``materials`` holds ``mu_plus, mu_minus, nu_plus, nu_minus``;
    ``constants`` holds formal ``eta, k`` (and optionally in-plane constants).
    """

    mode: str = "mode3"
    direction: str = "forward"
    grid_n: int = 1024
    tol: float = 1e-4
    balance_tol: float = 1e-6
    materials: dict | None = None
    constants: dict | None = None
    oracle: str | None = None
    F: float = 1.0
    expressions: dict | None = None
    table: str | None = None
    exponents: dict = dataclasses.field(default_factory=dict)
    out: str | None = None
    formats: tuple = ("csv", "plotdata", "png")
    stem: str = "profile"

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        given = [k for k in ("oracle", "expressions", "table") if getattr(self, k)]
        if len(given) != 1:
            raise ConfigError(f"exactly one input specification is required, got {given or 'none'}")
        if not (self.tol > 0 and self.balance_tol > 0):
            raise ConfigError("tolerances must be positive")
        if self.oracle:
            if self.oracle not in orc.CASES:
                raise ConfigError(f"unknown oracle case {self.oracle!r}; choose from {orc.CASES}")
            if self.mode != "mode3":
                raise ConfigError("the oracle cases are anti-plane problems (mode = mode3)")
        if self.materials and self.constants:
            raise ConfigError("give either [materials] or [constants], not both")
        if not (self.oracle or self.materials or self.constants):
            raise ConfigError("material data missing: add [materials] or [constants]")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ConfigError(f"unknown output formats {sorted(bad)}")
        try:
            fo.make_grid(NEG, self.grid_n)
        except fo.GridError as exc:
            raise ConfigError(str(exc)) from None
        return self


def _floats(section):
    try:
        return {k: float(v) for k, v in section.items()}
    except ValueError as exc:
        raise ConfigError(f"[{section.name}]: {exc}") from None


def load_config(path):
    """Parse an INI run description into a :class:`RunConfig`."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    cfg = RunConfig()
    if cp.has_section("run"):
        r = cp["run"]
        cfg.mode = r.get("mode", cfg.mode)
        cfg.direction = r.get("direction", cfg.direction)
        try:
            cfg.grid_n = r.getint("grid_n", cfg.grid_n)
            cfg.tol = r.getfloat("tol", cfg.tol)
            cfg.balance_tol = r.getfloat("balance_tol", cfg.balance_tol)
        except ValueError as exc:
            raise ConfigError(f"[run]: {exc}") from None
    if cp.has_section("materials"):
        cfg.materials = _floats(cp["materials"])
    if cp.has_section("constants"):
        cfg.constants = _floats(cp["constants"])
    if cp.has_section("input"):
        inp = dict(cp["input"])
        base = pathlib.Path(path).parent
        cfg.oracle = inp.pop("oracle", None)
        if "F" in inp:
            cfg.F = float(inp.pop("F"))
        if "table" in inp:
            cfg.table = str(base / inp.pop("table"))
        cfg.exponents = {k: float(inp.pop(k)) for k in list(inp)
                         if k.startswith(("tip_", "far_"))}
        if inp:
            cfg.expressions = inp
    if cp.has_section("output"):
        o = cp["output"]
        if "dir" in o:
            cfg.out = str(pathlib.Path(path).parent / o["dir"])
        if "formats" in o:
            cfg.formats = tuple(s.strip() for s in o["formats"].split(",") if s.strip())
        cfg.stem = o.get("stem", cfg.stem)
    return cfg


def build_constants(cfg):
    """Bimaterial constants described by ``cfg``."""
    if cfg.materials:
        m = dict(cfg.materials)
        try:
            pair = MaterialPair(m.pop("mu_plus"), m.pop("mu_minus"),
                                m.pop("nu_plus", 0.3), m.pop("nu_minus", 0.3))
        except KeyError as exc:
            raise ConfigError(f"[materials] needs {exc.args[0]}") from None
        if m:
            raise ConfigError(f"unknown [materials] keys {sorted(m)}")
        return derive_constants(pair)
    if cfg.constants:
        c = dict(cfg.constants)
        try:
            eta, k = c.pop("eta"), c.pop("k")
        except KeyError as exc:
            raise ConfigError(f"[constants] needs {exc.args[0]}") from None
        return formal_constants(eta, k, **c)
    return orc.case_constants(cfg.oracle)


# input fields

def _field_names(mode, direction):
    base = ("p_plus", "p_minus") if direction == "forward" else ("jump_u", "mean_u")
    if mode == "mode3":
        return base
    return tuple(f"{b}_{i}" for b in base for i in (1, 2))


def _default_exponents(name):
    # tip, far
    if name.startswith("jump_u"):
        return 0.5, -math.inf
    return 0.0, -math.inf


def _sample_inputs(cfg, grid):
    """Sample the configured input fields; ``mean_u*`` on both sides."""
    names = _field_names(cfg.mode, cfg.direction)
    if cfg.expressions:
        unknown = set(cfg.expressions) - set(names)
        if unknown:
            raise ConfigError(f"unexpected input fields {sorted(unknown)}; expected {names}")
        fns = {n: compile_expression(cfg.expressions.get(n, "0")) for n in names}
    else:
        table = read_table(cfg.table)
        missing = [n for n in names if n not in table]
        if missing:
            raise ConfigError(f"table {cfg.table} lacks columns {missing}")
        x = table["x"]
        fns = {}
        for n in names:
            tip, far = _exponents(cfg, n)
            fns[n] = _table_fn(x, table[n], tip, far)
    out = {}
    for n in names:
        tip, far = _exponents(cfg, n)
        neg = fo.sample(grid, fns[n], NEG, tip, far)
        if n.startswith("mean_u"):
            pos = fo.sample(grid, fns[n], POS, tip, far)
            out[n] = fo.LineField(neg, pos)
        else:
            out[n] = neg
    for n, f in out.items():
        vals = f.values
        if not np.all(np.isfinite(vals)):
            raise ConfigError(f"input field {n} is not finite on the grid")
    return out


def _exponents(cfg, name):
    tip, far = _default_exponents(name)
    return cfg.exponents.get(f"tip_{name}", tip), cfg.exponents.get(f"far_{name}", far)


def _table_fn(x, v, tip, far):
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    neg, pos = x < 0, x > 0

    def fn(xo):
        xo = np.asarray(xo, dtype=float)
        res = np.zeros_like(xo)
        for mask_d, mask_o in ((neg, xo < 0), (pos, xo > 0)):
            if mask_o.any():
                if mask_d.sum() < 2:
                    continue
                res[mask_o] = resample(x[mask_d], v[mask_d], xo[mask_o], tip, far)
        return res

    return fn


def _stack(fields, base):
    a, b = fields[f"{base}_1"], fields[f"{base}_2"]
    if isinstance(a, fo.LineField):
        return fo.LineField(_stack({"n_1": a.neg, "n_2": b.neg}, "n"),
                            _stack({"p_1": a.pos, "p_2": b.pos}, "p"))
    return fo.HalfLineField(a.grid, np.stack([a.values, b.values]),
                            min(a.tip_exponent, b.tip_exponent),
                            max(a.far_exponent, b.far_exponent))


# solution container

@dataclasses.dataclass(frozen=True, eq=False)
class Profile:
    """Sampled displacement and traction profiles on the whole grid.

    Arrays have one entry per whole-line node (scalar problems) or shape
    ``(2, 2n)`` (plane strain). ``jump_u`` is zero ahead of the tip and
    ``sigma`` zero on the crack faces.
    """

    x: np.ndarray
    jump_u: np.ndarray
    mean_u: np.ndarray
    sigma: np.ndarray

    @property
    def u_upper(self):
        return self.mean_u + 0.5 * self.jump_u

    @property
    def u_lower(self):
        return self.mean_u - 0.5 * self.jump_u

    @property
    def ncomp(self):
        return 1 if self.jump_u.ndim == 1 else self.jump_u.shape[0]

    def component(self, i):
        if self.ncomp == 1:
            return self
        return Profile(self.x, self.jump_u[i], self.mean_u[i], self.sigma[i])

    @classmethod
    def from_solution(cls, sol):
        jump = fo.as_line(sol.jump_u)
        sigma = fo.as_line(sol.sigma_interface)
        mean = sol.mean_u
        return cls(jump.x, np.real(jump.values), np.real(mean.values), np.real(sigma.values))


@dataclasses.dataclass
class RunReport:
    """Outcome of :func:`run`."""

    mode: str
    direction: str
    input: str
    constants: dict
    grid: dict
    summary: dict
    residuals: dict
    balance: dict
    thresholds: dict
    exceeded: list
    reference: dict = dataclasses.field(default_factory=dict)
    manifest: list = dataclasses.field(default_factory=list)
    profile: Profile | None = None

    @property
    def ok(self):
        return not self.exceeded

    @property
    def exit_code(self):
        return 0 if self.ok else 1

    def to_dict(self):
        d = dataclasses.asdict(self)
        d.pop("profile")
        d["ok"] = self.ok
        return d


# output

def _fmt(v):
    return "%.17g" % v


def emit_profile(profile, path, format="csv"):
    """Write a profile; returns the list of files written.

    ``csv`` writes ``path`` (``<stem>_<i>.csv`` per component for vector
    fields) with the header ``x,jump_u,mean_u,sigma,u_upper,u_lower`` and
    every value at 17 significant digits. ``plotdata`` writes one
    ``<stem>_<series>.dat`` file per series with ``x value`` lines on the
    support of that series.

    Raises
    ------
    OSError
        If the path cannot be written.
    """
    path = pathlib.Path(path)
    files = []
    for i in range(profile.ncomp):
        p = profile.component(i)
        suffix = "" if profile.ncomp == 1 else f"_{i + 1}"
        if format == "csv":
            target = path.with_name(path.stem + suffix + ".csv")
            cols = [p.x, p.jump_u, p.mean_u, p.sigma, p.u_upper, p.u_lower]
            lines = [CSV_HEADER]
            lines += [",".join(_fmt(c[j]) for c in cols) for j in range(p.x.size)]
            target.write_text("\n".join(lines) + "\n")
            files.append(str(target))
        elif format == "plotdata":
            neg = p.x < 0
            support = {"jump_u": neg, "mean_u": np.ones_like(neg), "sigma": ~neg,
                       "u_upper": neg, "u_lower": neg}
            for name in SERIES:
                m = support[name]
                target = path.with_name(f"{path.stem}{suffix}_{name}.dat")
                vals = getattr(p, name)
                target.write_text("".join(f"{_fmt(a)} {_fmt(b)}\n"
                                          for a, b in zip(p.x[m], vals[m])))
                files.append(str(target))
        else:
            raise ValueError(f"unknown profile format {format!r}")
    return files


def render_figures(profile, path, window=(-5.0, 5.0)):
    """Render the crack-face displacements and the interfacial traction as PNG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = pathlib.Path(path)
    files = []
    for i in range(profile.ncomp):
        p = profile.component(i)
        suffix = "" if profile.ncomp == 1 else f"_{i + 1}"
        x = p.x
        neg = (x < 0) & (x >= window[0])
        pos = (x > 0) & (x <= window[1])
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
        ax1.plot(x[neg], p.u_upper[neg], label="upper face")
        ax1.plot(x[neg], p.u_lower[neg], label="lower face")
        ax1.plot(x[pos], p.mean_u[pos], label="interface")
        ax1.set_xlabel("x")
        ax1.set_ylabel("displacement")
        ax1.legend()
        ax2.plot(x[pos], p.sigma[pos])
        ax2.set_xlabel("x")
        ax2.set_ylabel("interfacial traction")
        ax2.set_yscale("symlog", linthresh=1e-6)
        fig.tight_layout()
        target = path.with_name(path.stem + suffix + ".png")
        fig.savefig(target, dpi=100, metadata={"Software": None})
        plt.close(fig)
        files.append(str(target))
    return files


def write_outputs(report, out_dir, formats, stem="profile"):
    """Write the profile in each format plus ``<stem>_report.json``."""
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = out / stem
    files = []
    for fmt in formats:
        if fmt == "png":
            files += render_figures(report.profile, base)
        else:
            files += emit_profile(report.profile, base, fmt)
    target = out / f"{stem}_report.json"
    report.manifest = files + [str(target)]
    target.write_text(json.dumps(_finite_or_null(report.to_dict()), indent=2, sort_keys=True,
                                 allow_nan=False, default=_json_default) + "\n")
    return report.manifest


def _finite_or_null(o):
    # strict JSON has no NaN or infinity; undefined constants are written as null
    if isinstance(o, dict):
        return {k: _finite_or_null(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_finite_or_null(v) for v in o]
    if isinstance(o, np.ndarray):
        return _finite_or_null(o.tolist())
    if isinstance(o, (float, np.floating)):
        return float(o) if math.isfinite(o) else None
    return o


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


# pipelines

def _flatten(res, prefix=""):
    """``{name: max}`` from nested residual dicts."""
    out = {}
    for k, v in res.items():
        if isinstance(v, dict):
            if "max" in v:
                out[prefix + k] = float(v["max"])
            else:
                out.update(_flatten(v, prefix + k + "."))
        else:
            out[prefix + k] = float(v)
    return out


def _rel_max(a, b, mask=None):
    a, b = np.asarray(a), np.asarray(b)
    if mask is not None:
        a, b = a[..., mask], b[..., mask]
    scale = np.max(np.abs(b)) or 1.0
    return float(np.max(np.abs(a - b)) / scale)


def value_at(f, x0):
    """Cubic-spline interpolation in ``log|x|`` of a half-line field at ``x0``."""
    y = math.log(abs(x0))
    v = CubicSpline(f.grid.y, np.real(f.values), axis=-1)(y)
    return float(v) if v.ndim == 0 else [float(c) for c in v]


def _summary(sol):
    return {"jump_u(-1)": value_at(sol.jump_u, -1.0),
            "sigma(1)": value_at(sol.sigma_interface, 1.0),
            "mean_u(-1)": value_at(sol.mean_u_neg, -1.0),
            "mean_u(1)": value_at(sol.mean_u_pos, 1.0),
            "max|jump_u|": float(np.max(np.abs(sol.jump_u.values))),
            "max|sigma|": float(np.max(np.abs(sol.sigma_interface.values)))}


def _mode3_loading(cfg, grid):
    if cfg.oracle:
        pp, pm = orc.case_loading(cfg.oracle, grid, cfg.F)
        return m3.Mode3Loading(pp, pm)
    f = _sample_inputs(cfg, grid)
    return m3.Mode3Loading(f["p_plus"], f["p_minus"])


def _run_mode3(cfg, constants, grid):
    tol = cfg.balance_tol
    reference = {}
    if cfg.direction == "forward":
        loading = _mode3_loading(cfg, grid)
        m3.check_balance(loading, tol)
        sol = m3.solve_forward(loading, constants, tol=tol)
        residuals = _flatten(sol.residuals)
        sig0, p0 = m3.balance_values(loading, sol)
        balance = {"sigma_bar(0)": sig0, "pbar(0)": p0, "sum": sig0 + p0,
                   "skew_net_force": loading.net_force()[1]}
        if cfg.oracle:
            ref = orc.case_fields(cfg.oracle, grid, constants, cfg.F)
            mn = grid.on(NEG).interior()
            mp = grid.on(POS).interior()
            reference = {"jump_u": _rel_max(sol.jump_u.values, ref["jump_u"], mn),
                         "sigma": _rel_max(sol.sigma_interface.values, ref["sigma"], mp)}
        return sol, residuals, balance, reference, "oracle" if cfg.oracle else "loading"

    # inverse: displacements in, face tractions out
    if cfg.oracle:
        loading = _mode3_loading(cfg, grid)
        fwd = m3.solve_forward(loading, constants, residuals=False, tol=tol)
        jump, mean = fwd.jump_u, fwd.mean_u
    else:
        f = _sample_inputs(cfg, grid)
        jump, mean = f["jump_u"], f["mean_u"]
        loading = None
    sym, skew = m3.recover_tractions(mean, jump, constants)
    rec = m3.Mode3Loading.from_parts(sym, skew)
    residuals = {"cross_check": sym.meta.get("cross_check", 0.0)}
    # forward again from the recovered tractions
    back = m3.solve_forward(rec, constants, residuals=False, tol=math.inf)
    mask = grid.on(NEG).interior()
    residuals["reforward_jump"] = _rel_max(back.jump_u.values, jump.values, mask)
    residuals["reforward_mean"] = _rel_max(back.mean_u_neg.values, mean.neg.values, mask)
    if loading is not None:
        reference = {"sym": _rel_max(sym.values, loading.sym.values, mask),
                     "skew": _rel_max(skew.values, loading.skew.values, mask)}
    sol = m3.Mode3Solution(jump, mean.neg, mean.pos, back.sigma_interface, {}, rec)
    net = rec.net_force()
    balance = {"recovered_net_force_sym": net[0], "recovered_net_force_skew": net[1]}
    return sol, residuals, balance, reference, "oracle" if cfg.oracle else "displacements"


def _floats_of(a):
    return [float(v) for v in np.atleast_1d(a)]


def _run_planestrain(cfg, constants, grid):
    symbols = ps.assemble_symbols(constants)
    tol = cfg.balance_tol
    f = _sample_inputs(cfg, grid)
    if cfg.direction == "forward":
        pp, pm = _stack(f, "p_plus"), _stack(f, "p_minus")
        sym = 0.5 * (pp + pm)
        skew = pp - pm
        ps.check_balance(skew, tol)
        sol = ps.solve_forward12(sym, skew, symbols, tol=tol)
        residuals = _flatten(sol.residuals)
        sig0, p0 = ps.balance_values12(sym, sol.sigma_interface)
        balance = {"sigma_bar(0)": _floats_of(sig0), "pbar(0)": _floats_of(p0),
                   "sum": _floats_of(sig0 + p0),
                   "skew_net_force": _floats_of(fo.integrate(skew))}
        return sol, residuals, balance, {}, "loading"
    jump, mean = _stack(f, "jump_u"), _stack(f, "mean_u")
    sym, skew = ps.recover_tractions12(mean, jump, symbols)
    back = ps.solve_forward12(sym, skew, symbols, tol=math.inf, residuals=False)
    mask = grid.on(NEG).interior()
    residuals = {"reforward_jump": _rel_max(back.jump_u.values, jump.values, mask),
                 "reforward_mean": _rel_max(back.mean_u_neg.values, mean.neg.values, mask)}
    sol = ps.PlaneStrainSolution(jump, mean.neg, mean.pos, back.sigma_interface, {})
    balance = {"recovered_net_force_sym": _floats_of(fo.integrate(sym)),
               "recovered_net_force_skew": _floats_of(fo.integrate(skew))}
    return sol, residuals, balance, {}, "displacements"


def run(config, write=True):
    """Execute the pipeline described by ``config``.

    Parameters
    ----------
    config : RunConfig
    write : bool
        Write the output files when an output directory is configured (or
        the ``BIMATCRACK_OUT`` environment variable is set).

    Returns
    -------
    RunReport
        ``exceeded`` lists every residual above ``config.tol``.

    Raises
    ------
    ConfigError, mode3.BalanceError, planestrain.BalanceError, ...
        Errors of the solver modules propagate unchanged.
    """
    cfg = config.validate()
    constants = build_constants(cfg)
    grid = fo.make_grid(NEG, cfg.grid_n)
    if cfg.mode == "mode3":
        sol, residuals, balance, reference, kind = _run_mode3(cfg, constants, grid)
    else:
        sol, residuals, balance, reference, kind = _run_planestrain(cfg, constants, grid)
    exceeded = sorted(k for k, v in residuals.items() if not v <= cfg.tol)
    report = RunReport(
        mode=cfg.mode, direction=cfg.direction,
        input=cfg.oracle or kind, constants=constants_to_dict(constants),
        grid={"n": grid.n, "ymax": grid.ymax}, summary=_summary(sol),
        residuals=residuals, balance=balance,
        thresholds={"residual": cfg.tol, "balance": cfg.balance_tol},
        exceeded=exceeded, reference=reference, profile=Profile.from_solution(sol))
    out = cfg.out or os.environ.get(OUT_ENV)
    if write and out:
        write_outputs(report, out, cfg.formats, cfg.stem)
    return report


# command line

def _parser():
    p = argparse.ArgumentParser(
        prog="bimatcrack",
        description="Interface crack solver: forward and inverse anti-plane and "
                    "plane-strain problems.")
    p.add_argument("--config", help="INI run description")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--direction", choices=DIRECTIONS)
    p.add_argument("--out", help=f"output directory (default: ${OUT_ENV})")
    p.add_argument("--grid-n", type=int, help="nodes per half-line (power of two)")
    p.add_argument("--tol", type=float, help="residual threshold")
    p.add_argument("--oracle", choices=orc.CASES, help="built-in example case")
    p.add_argument("--formats", help="comma-separated subset of csv,plotdata,png")
    return p


def _error_code(exc):
    mod = type(exc).__module__.rsplit(".", 1)[-1]
    return f"{mod}.{type(exc).__name__}"


def main(argv=None):
    """Command-line entry point; returns the process exit status.

    0: all residuals within threshold; 1: some residual exceeded; 2: the
    run could not be carried out (configuration or solver error).
    """
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.oracle:
            cfg.oracle, cfg.expressions, cfg.table = args.oracle, None, None
        for key in ("mode", "direction", "out", "tol"):
            if getattr(args, key) is not None:
                setattr(cfg, key, getattr(args, key))
        if args.grid_n is not None:
            cfg.grid_n = args.grid_n
        if args.formats is not None:
            cfg.formats = tuple(s.strip() for s in args.formats.split(",") if s.strip())
        report = run(cfg)
    except Exception as exc:        # noqa: BLE001 - reported with a module-qualified code
        known = (ConfigError, ValueError, ArithmeticError, OSError)
        if not isinstance(exc, known):
            raise
        print(f"error [{_error_code(exc)}]: {exc}", file=sys.stderr)
        return 2
    _print_report(report)
    return report.exit_code


def _print_report(report):
    print(f"{report.mode} {report.direction} ({report.input}), n = {report.grid['n']}")
    for k, v in report.summary.items():
        print(f"  {k:<12} {v}")
    print("residuals:")
    for k, v in sorted(report.residuals.items()):
        flag = "FAIL" if k in report.exceeded else "ok"
        print(f"  {k:<28} {v:.3e}  {flag}")
    print("balance:")
    for k, v in report.balance.items():
        print(f"  {k:<24} {v}")
    if report.reference:
        print("reference (relative max error vs closed form):")
        for k, v in report.reference.items():
            print(f"  {k:<10} {v:.3e}")
    for f in report.manifest:
        print(f"wrote {f}")
    print("status:", "ok" if report.ok else f"residuals above {report.thresholds['residual']:g}: "
          + ", ".join(report.exceeded))

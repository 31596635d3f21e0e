"""Convergence studies: configuration, error ladders, orders and CSV tables."""
from __future__ import annotations

import csv
import io
import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .oracle import PROBLEMS, SeriesSolution, error_L2, manufactured
from .profiles import CoefficientFn, MuProfile
from .stepper import ConfigurationError, ProblemSpec, RotheSolver

__all__ = [
    "co_rate",
    "ao_rate",
    "RunConfig",
    "parse_config",
    "load_config",
    "TableRow",
    "ConvergenceTable",
    "measure_error",
    "run_table",
    "TABLE_LADDER",
    "SPACE_LADDER",
]

log = logging.getLogger(__name__)

TABLE_LADDER = (0.01, 0.005, 0.0025, 0.00125, 0.000625)
SPACE_LADDER = (5, 10, 20, 30, 40, 50)


def co_rate(E1: float, E2: float, M1: int, M2: int) -> float:
    """Temporal order ``|log(E1/E2)| / |log(M2/M1)|``; NaN when undefined."""
    if M1 == M2:
        raise ValueError("step counts must differ")
    if not (E1 > 0 and E2 > 0 and M1 > 0 and M2 > 0):
        return math.nan
    return abs(math.log(E1 / E2)) / abs(math.log(M2 / M1))


def ao_rate(E: float, N: int) -> float:
    """Spatial exponent ``log(E) / log(N)``, i.e. ``E = N**ao``."""
    if not (E > 0 and N > 1):
        return math.nan
    return math.log(E) / math.log(N)


# ---------------------------------------------------------------- configuration


def _floats(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _ints(text):
    return tuple(int(v) for v in text.replace(",", " ").split())


@dataclass
class RunConfig:
    """Experiment settings; the attribute docs list the config-file key and default.

    Problems: ``ex1``, ``ex2-I``, ``ex2-II``, ``ex2-III``, ``ex3`` (manufactured
    solutions on (0, 1)) and ``mode`` (single sine mode with constant order,
    compared against the Mittag-Leffler series).
    """

    problem: str = "ex1"                 # problem
    mu_kind: str | None = None           # mu.kind   (default: the problem's own profile)
    mu_start: float | None = None        # mu.start
    mu_end: float | None = None          # mu.end
    mu_switch: float | None = None       # mu.switch (piecewise-step only)
    rho_kind: str | None = None          # rho.kind  (constant | exp-decay)
    rho_value: float | None = None       # rho.value
    beta_kind: str | None = None         # beta.kind
    beta_value: float | None = None      # beta.value
    nonlinearity: str | None = None      # nonlinearity (zero | logistic- | logistic+)
    a: float = 0.0                       # domain.a
    b: float = 1.0                       # domain.b
    T: float = 1.0                       # T
    N: int = 50                          # N
    n: int = 1600                        # n
    tau: float = 0.000625                # tau   (fixed step of space ladders)
    taus: tuple = TABLE_LADDER           # taus
    Ns: tuple = SPACE_LADDER             # Ns
    quad_order: int | None = None        # quad.order (default 2N)
    out: str | None = None               # out
    threads: int = 1                     # threads
    dump_times: tuple = ()               # dump.times
    dump_points: int = 101               # dump.points

    _KEYS = {
        "problem": ("problem", str),
        "mu.kind": ("mu_kind", str),
        "mu.start": ("mu_start", float),
        "mu.end": ("mu_end", float),
        "mu.switch": ("mu_switch", float),
        "rho.kind": ("rho_kind", str),
        "rho.value": ("rho_value", float),
        "beta.kind": ("beta_kind", str),
        "beta.value": ("beta_value", float),
        "nonlinearity": ("nonlinearity", str),
        "domain.a": ("a", float),
        "domain.b": ("b", float),
        "T": ("T", float),
        "N": ("N", int),
        "n": ("n", int),
        "tau": ("tau", float),
        "taus": ("taus", _floats),
        "Ns": ("Ns", _ints),
        "quad.order": ("quad_order", int),
        "out": ("out", str),
        "threads": ("threads", int),
        "dump.times": ("dump_times", _floats),
        "dump.points": ("dump_points", int),
    }

    @classmethod
    def from_mapping(cls, mapping):
        cfg = cls()
        for key, raw in mapping.items():
            try:
                attr, conv = cls._KEYS[key]
            except KeyError:
                raise ConfigurationError(f"unknown config key {key!r}") from None
            try:
                setattr(cfg, attr, conv(raw) if isinstance(raw, str) else raw)
            except ValueError as exc:
                raise ConfigurationError(f"bad value for {key!r}: {raw!r}") from exc
        cfg.check()
        return cfg

    def check(self):
        if self.problem not in PROBLEMS and self.problem != "mode":
            raise ConfigurationError(f"unknown problem {self.problem!r}")
        if any(not 0 < t < 1 for t in self.taus) or not 0 < self.tau < 1:
            raise ConfigurationError("all time steps must satisfy 0 < tau < 1")
        if any(N < 4 for N in self.Ns) or self.N < 4:
            raise ConfigurationError("all truncations must satisfy N >= 4")
        if self.threads < 1:
            raise ConfigurationError("threads must be >= 1")

    def to_mapping(self):
        out = {}
        for key, (attr, _) in self._KEYS.items():
            val = getattr(self, attr)
            if val is None or val == ():
                continue
            out[key] = " ".join(map(str, val)) if isinstance(val, tuple) else str(val)
        return out

    # -- problem construction

    def _mu_profile(self, default: MuProfile):
        if all(v is None for v in (self.mu_kind, self.mu_start, self.mu_end, self.mu_switch)):
            return default
        kind = self.mu_kind or default.kind
        start = default.mu0 if self.mu_start is None else self.mu_start
        end = (start if kind == "constant" else default.muT) if self.mu_end is None else self.mu_end
        switch = self.mu_switch if self.mu_switch is not None else (
            default.switch if kind == default.kind else None)
        return MuProfile(kind, start, end, self.T, switch=switch, table=default.table)

    def _coef(self, kind, value, default):
        if kind is None and value is None:
            return default
        return CoefficientFn(kind or default.kind, default.value if value is None else value)

    def setup(self):
        """``(ProblemSpec, exact)`` for the configured problem; ``exact(x, t)`` may be None."""
        if self.problem == "mode":
            if self.a != 0.0:
                raise ConfigurationError("the mode problem is posed on (0, L); set domain.a = 0")
            mu = self._mu_profile(MuProfile.constant(0.5, self.T))
            if mu.kind != "constant":
                raise ConfigurationError("the series oracle needs a constant order")
            L = self.b
            spec = ProblemSpec(
                mu=mu, a=0.0, b=L, T=self.T,
                phi0=lambda x: np.sin(np.pi * x / L),
                phi0_dx=lambda x: np.pi / L * np.cos(np.pi * x / L),
            )
            series = SeriesSolution(1, mu.mu0, phi0=spec.phi0, L=L)
            return spec, series
        if (self.a, self.b) != (0.0, 1.0):
            raise ConfigurationError("manufactured problems are posed on (0, 1)")
        base = manufactured(self.problem)
        mu = self._mu_profile(replace_T(base.mu, self.T))
        ms = manufactured(
            self.problem,
            mu=mu,
            rho=self._coef(self.rho_kind, self.rho_value, base.rho),
            beta=self._coef(self.beta_kind, self.beta_value, base.beta),
            nonlinearity=self.nonlinearity,
        )
        return ms.spec(), ms.exact


def replace_T(profile: MuProfile, T: float) -> MuProfile:
    if profile.T == T:
        return profile
    return MuProfile(profile.kind, profile.mu0, profile.muT, T, profile.switch, profile.table)


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, ``[section]`` lines are ignored."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def load_config(path, overrides=()) -> RunConfig:
    mapping = parse_config(Path(path).read_text(encoding="utf-8")) if path else {}
    for item in overrides:
        key, _, value = item.partition("=")
        mapping[key.strip()] = value.strip()
    return RunConfig.from_mapping(mapping)


# ---------------------------------------------------------------- tables


@dataclass
class TableRow:
    param: float
    error: float | None
    order: float | None = None
    note: str = ""


@dataclass
class ConvergenceTable:
    """Rows of ``(control parameter, E, order)``.

    ``kind`` is ``time`` (parameter tau, order C-O between adjacent rows, blank
    in the first row) or ``space`` (parameter N, order A-O of each row).
    """

    kind: str
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    HEADER = ("param", "error", "order")

    def fill_orders(self):
        if self.kind == "space":
            for row in self.rows:
                row.order = None if row.error is None else _finite(ao_rate(row.error, int(row.param)))
            return
        for k, row in enumerate(self.rows):
            prev = self.rows[k - 1] if k else None
            if prev is None or prev.error is None or row.error is None:
                row.order = None
                continue
            M1 = round(self.meta.get("T", 1.0) / prev.param)
            M2 = round(self.meta.get("T", 1.0) / row.param)
            row.order = _finite(co_rate(prev.error, row.error, M1, M2))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.HEADER)
        for row in self.rows:
            w.writerow([
                _fmt(row.param, "{:.6g}"),
                _fmt(row.error, "{:.6g}"),
                _fmt(row.order, "{:.3f}"),
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str = "time") -> "ConvergenceTable":
        reader = csv.reader(io.StringIO(text))
        header = tuple(next(reader))
        if header != cls.HEADER:
            raise ValueError(f"unexpected header {header}")
        rows = [TableRow(float(p), _parse(e), _parse(o)) for p, e, o in reader]
        return cls(kind, rows)

    def column(self, name):
        return [getattr(r, name) for r in self.rows]


def _finite(x):
    return None if x is None or not math.isfinite(x) else x


def _fmt(x, spec):
    return "" if x is None else spec.format(x)


def _parse(s):
    return float(s) if s.strip() else None


def measure_error(config: RunConfig, N: int, n: int) -> float:
    """``E = max_i ||Phi^N_i - Phi(t_i)||`` for one discretisation."""
    spec, exact = config.setup()
    if exact is None:
        raise ConfigurationError(f"problem {config.problem!r} has no reference solution")
    solver = RotheSolver(spec, N, n, config.quad_order)
    state, _ = solver.run()
    return error_L2(solver.space, state, exact)


def run_table(config: RunConfig, kind: str = "time") -> ConvergenceTable:
    """Time ladder (fixed ``N``, sweep ``taus``) or space ladder (fixed ``tau``, sweep ``Ns``)."""
    if kind == "time":
        jobs = [(tau, config.N, round(config.T / tau)) for tau in config.taus]
    elif kind == "space":
        n = round(config.T / config.tau)
        jobs = [(N, N, n) for N in config.Ns]
    else:
        raise ValueError("kind must be 'time' or 'space'")

    results = {}
    lock = threading.Lock()

    def work(k, param, N, n):
        try:
            err, note = measure_error(config, N, n), ""
        except Exception as exc:  # recorded per row, the table is still emitted
            log.warning("run %s=%s failed: %s", kind, param, exc)
            err, note = None, f"{type(exc).__name__}: {exc}"
        with lock:
            results[k] = TableRow(param, err, None, note)

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        futures = [pool.submit(work, k, *job) for k, job in enumerate(jobs)]
        for fut in futures:
            fut.result()
    table = ConvergenceTable(kind, [results[k] for k in sorted(results)])
    table.meta = {
        "problem": config.problem,
        "T": config.T,
        "fixed": {"N": config.N} if kind == "time" else {"tau": config.tau},
        "wall_time": time.perf_counter() - start,
    }
    table.fill_orders()
    return table

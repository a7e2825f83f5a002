"""Batch verification driver.

A sweep is described by a JSON file whose keys mirror :class:`SweepConfig`;
unknown keys are rejected.  Every check expands into a cross product of
parameters and yields one :class:`~rlfejer.ineq.InequalityReport` per
one-sided inequality.  Rows are sorted by ``case_id`` before they are
written, so the report depends only on the configuration and the seed.

Exit codes: 0 all certified cases hold, 1 a certified case failed,
2 usage, configuration, label or I/O error.

Function labels: spow, spow_q, linear, quadratic, exp, tpow, neg_quadratic.
Weight labels: one, parabola, vabs, cos2.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
import zlib
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ConfigError, DomainError, HypothesisWarning
from .funcspace import Catalog, FunctionSpec, WeightSpec, builtin_catalog
from .ineq import (
    IDENTITY_TOL,
    REDUCTION_TOL,
    InequalityReport,
    ReductionPair,
    SandwichKind,
    Theorem,
    bound_hypothesis,
    bound_rhs,
    fejer_midpoint_lhs,
    identity_residual,
    sandwich,
    sandwich_hypothesis,
)
from .quad import DEFAULT_TOL, Interval

CHECKS = ("identity", "sandwiches", "bounds", "reductions")
COLUMNS = ("case_id", "check", "theorem", "a", "b", "alpha", "s", "q", "f_label",
           "g_label", "lhs", "rhs", "slack", "ratio", "holds", "quad_error")
CERT_GRID = 12

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass
class SweepConfig:
    intervals: list[Interval] = field(default_factory=lambda: [Interval(0.0, 1.0)])
    alphas: list[float] = field(default_factory=lambda: [0.5, 1.0])
    s_values: list[float] = field(default_factory=lambda: [0.5, 1.0])
    q_values: list[float] = field(default_factory=lambda: [2.0])
    function_labels: list[str] = field(default_factory=lambda: list(builtin_catalog().functions))
    weight_labels: list[str] = field(default_factory=lambda: list(builtin_catalog().weights))
    checks: list[str] = field(default_factory=lambda: list(CHECKS))
    tol: float = DEFAULT_TOL
    seed: int = 0
    output_path: str = "report.csv"
    format: str = "csv"
    theorems: list[str] = field(default_factory=lambda: [t.value for t in Theorem])
    sandwich_kinds: list[str] = field(default_factory=lambda: [k.value for k in SandwichKind])
    # Multiplies every bound before comparison; anything but 1 exists only to
    # prove that the gate trips.
    rhs_scale: float = 1.0

    def validate(self, catalog: Catalog | None = None) -> None:
        catalog = catalog or builtin_catalog()
        if not self.checks:
            raise ConfigError("no checks requested")
        for c in self.checks:
            if c not in CHECKS:
                raise ConfigError(f"unknown check {c!r}; expected a subset of {CHECKS}")
        if not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise ConfigError("tol must be a positive number")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")
        for name in ("intervals", "alphas", "function_labels"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must be nonempty")
        if any(c != "sandwiches" for c in self.checks) or any(
                k in ("FEJER", "FRAC_FEJER") for k in self.sandwich_kinds):
            if not self.weight_labels:
                raise ConfigError("weight_labels must be nonempty")
        if ("bounds" in self.checks or "reductions" in self.checks) and not self.q_values:
            raise ConfigError("q_values must be nonempty")
        if not self.s_values:
            raise ConfigError("s_values must be nonempty")
        for a in self.alphas:
            if not a > 0:
                raise ConfigError(f"alpha must be > 0, got {a}")
        for s in self.s_values:
            if not 0 < s <= 1:
                raise ConfigError(f"s must lie in (0, 1], got {s}")
        for q in self.q_values:
            if not q > 1:
                raise ConfigError(f"q must exceed 1, got {q}")
        for t in self.theorems:
            if t not in Theorem._value2member_map_:
                raise ConfigError(f"unknown theorem {t!r}")
        for k in self.sandwich_kinds:
            if k not in SandwichKind._value2member_map_:
                raise ConfigError(f"unknown sandwich kind {k!r}")
        for lab in self.function_labels:
            catalog.function(lab)
        for lab in self.weight_labels:
            catalog.weight(lab)


def _interval(obj: Any) -> Interval:
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
        raise ConfigError(f"interval must be a pair [a, b], got {obj!r}")
    try:
        return Interval(float(obj[0]), float(obj[1]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad interval {obj!r}: {exc}") from None


def config_from_dict(data: dict) -> SweepConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {f.name for f in fields(SweepConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {unknown}")
    kw: dict[str, Any] = {}
    try:
        for key, val in data.items():
            if key == "intervals":
                kw[key] = [_interval(v) for v in val]
            elif key in ("alphas", "s_values", "q_values"):
                kw[key] = [float(v) for v in val]
            elif key in ("function_labels", "weight_labels", "checks", "theorems",
                         "sandwich_kinds"):
                if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
                    raise ConfigError(f"{key} must be a list of strings")
                kw[key] = list(val)
            elif key in ("tol", "rhs_scale"):
                kw[key] = float(val)
            elif key == "seed":
                if isinstance(val, bool) or int(val) != val:
                    raise ConfigError("seed must be an integer")
                kw[key] = int(val)
            else:
                kw[key] = str(val)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from None
    return SweepConfig(**kw)


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_dict(data)


# -- case generation --------------------------------------------------------

def _fmt_param(x: float) -> str:
    return format(x, "g")


def _case_id(check: str, theorem: str, iv: Interval, alpha=None, s=None, q=None,
             f_label="", g_label="", suffix="") -> str:
    parts = [check, theorem, f"[{_fmt_param(iv.a)};{_fmt_param(iv.b)}]"]
    for name, v in (("alpha", alpha), ("s", s), ("q", q)):
        if v is not None:
            parts.append(f"{name}={_fmt_param(v)}")
    if f_label:
        parts.append(f"f={f_label}")
    if g_label:
        parts.append(f"g={g_label}")
    return "/".join(parts) + suffix


def shift_interval(iv: Interval) -> Interval:
    """Translate an interval reaching below 0 onto ``[0, b - a]``.

    s-convexity is only defined on ``[0, inf)``; report rows carry the
    translated endpoints.
    """
    return iv if iv.a >= 0 else Interval(0.0, iv.width)


class _Runner:
    """Evaluates cases with memoised specs, certificates and left-hand sides."""

    def __init__(self, config: SweepConfig, catalog: Catalog):
        self.cfg = config
        self.cat = catalog
        self._fspecs: dict = {}
        self._wspecs: dict = {}
        self._certs: dict = {}
        self._lhs: dict = {}

    def rng(self, key: str) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed, zlib.crc32(key.encode())])

    def fspec(self, label: str, iv: Interval, s, q) -> FunctionSpec:
        key = (label, iv, s, q)
        if key not in self._fspecs:
            self._fspecs[key] = self.cat.function(label).make(
                iv, 1.0 if s is None else s, 2.0 if q is None else q)
        return self._fspecs[key]

    def wspec(self, label: str, iv: Interval) -> WeightSpec:
        key = (label, iv)
        if key not in self._wspecs:
            self._wspecs[key] = self.cat.weight(label).make(iv)
        return self._wspecs[key]

    def fam_sq(self, label: str, s_list, q_list):
        """(s, q) combinations a family instance actually depends on."""
        params = self.cat.function(label).params
        ss = list(s_list) if "s" in params else [None]
        qs = list(q_list) if "q" in params else [None]
        return [(s, q) for s in ss for q in qs]

    # identity
    def identity(self) -> Iterable[InequalityReport]:
        c = self.cfg
        for iv in c.intervals:
            for al in c.alphas:
                for fl in c.function_labels:
                    for s, q in self.fam_sq(fl, c.s_values, c.q_values):
                        f = self.fspec(fl, iv, s, q)
                        for gl in c.weight_labels:
                            g = self.wspec(gl, iv)
                            res, _, _, err = identity_residual(f, g, iv, al, c.tol,
                                                               full_output=True)
                            yield InequalityReport(
                                _case_id("identity", "L1", iv, al, s, q, fl, gl),
                                "identity", "L1", iv.a, iv.b, res, IDENTITY_TOL,
                                al, s, q, fl, gl, err)

    # sandwiches
    def sandwiches(self) -> Iterable[InequalityReport]:
        c = self.cfg
        for kind in map(SandwichKind, c.sandwich_kinds):
            frac = kind in (SandwichKind.FRAC_HH, SandwichKind.FRAC_FEJER)
            fejer = kind in (SandwichKind.FEJER, SandwichKind.FRAC_FEJER)
            for iv in c.intervals:
                for fl in c.function_labels:
                    params = self.cat.function(fl).params
                    s_list = c.s_values if (kind is SandwichKind.S_HH or "s" in params) else [None]
                    q_list = c.q_values if "q" in params else [None]
                    for s in s_list:
                        for q in q_list:
                            f = self.fspec(fl, iv, s if "s" in params else None, q)
                            cert_key = f"sandwich/{kind.value}/{fl}/{iv}/{s}/{q}"
                            if cert_key not in self._certs:
                                self._certs[cert_key] = sandwich_hypothesis(
                                    kind, f, iv, s, grid=CERT_GRID,
                                    rng=self.rng(cert_key)).certified
                            ok = self._certs[cert_key]
                            for al in (c.alphas if frac else [None]):
                                for gl in (c.weight_labels if fejer else [""]):
                                    g = self.wspec(gl, iv) if gl else None
                                    tri = sandwich(kind, f, iv, g, al, s, c.tol, check=False)
                                    for side, lhs, rhs in (("left", tri.left, tri.middle),
                                                           ("right", tri.middle, tri.right)):
                                        th = f"{kind.value}.{side}"
                                        yield InequalityReport(
                                            _case_id("sandwiches", th, iv, al, s, q, fl, gl),
                                            "sandwiches", th, iv.a, iv.b, lhs, rhs, al, s, q,
                                            fl, gl, tri.quad_error, certified=ok)

    def midpoint_lhs(self, fl, iv, s, q, al, gl):
        key = (fl, iv, s, q, al, gl)
        if key not in self._lhs:
            f = self.fspec(fl, iv, s, q)
            self._lhs[key] = fejer_midpoint_lhs(f, self.wspec(gl, iv), iv, al, self.cfg.tol,
                                                full_output=True)
        return self._lhs[key]

    def certify_bound(self, th: Theorem, fl, iv, fs, fq, s, q) -> bool:
        key = f"bound/{th.value}/{fl}/{iv}/{fs}/{fq}/{s}/{q}"
        if key not in self._certs:
            f = self.fspec(fl, iv, fs, fq)
            self._certs[key] = bound_hypothesis(th, f, iv, s, q, grid=CERT_GRID,
                                                rng=self.rng(key)).certified
        return self._certs[key]

    # bounds
    def bounds(self) -> Iterable[InequalityReport]:
        c = self.cfg
        for th in map(Theorem, c.theorems):
            classical = th in (Theorem.T4, Theorem.T5, Theorem.T6)
            uses_q = th not in (Theorem.T4, Theorem.T7)
            th_s = [1.0] if classical else c.s_values
            for iv in c.intervals:
                for fl in c.function_labels:
                    params = self.cat.function(fl).params
                    for s in th_s:
                        q_list = c.q_values if (uses_q or "q" in params) else [None]
                        for q in q_list:
                            fs = s if "s" in params else None
                            fq = q if "q" in params else None
                            f = self.fspec(fl, iv, fs, fq)
                            ok = self.certify_bound(th, fl, iv, fs, fq, s, q)
                            s_col = None if (classical and fs is None) else s
                            for al in c.alphas:
                                for gl in c.weight_labels:
                                    g = self.wspec(gl, iv)
                                    lhs, err = self.midpoint_lhs(fl, iv, fs, fq, al, gl)
                                    rhs = bound_rhs(th, f, g, iv, al,
                                                    None if classical else s,
                                                    q if uses_q else None, c.tol)
                                    yield InequalityReport(
                                        _case_id("bounds", th.value, iv, al, s_col, q, fl, gl),
                                        "bounds", th.value, iv.a, iv.b, lhs,
                                        rhs * c.rhs_scale, al, s_col, q, fl, gl, err,
                                        certified=ok)

    # reductions
    def reductions(self) -> Iterable[InequalityReport]:
        c = self.cfg
        pairs = [p for p in ReductionPair
                 if p.new.value in c.theorems and p.classical.value in c.theorems]
        for pair in pairs:
            gated = pair is ReductionPair.T7_T4
            th = pair.value
            for iv in c.intervals:
                for fl in c.function_labels:
                    params = self.cat.function(fl).params
                    q_list = c.q_values if (not gated or "q" in params) else [None]
                    for q in q_list:
                        fq = q if "q" in params else None
                        f = self.fspec(fl, iv, 1.0 if "s" in params else None, fq)
                        for al in c.alphas:
                            for gl in c.weight_labels:
                                g = self.wspec(gl, iv)
                                hq = None if gated else q
                                new = bound_rhs(pair.new, f, g, iv, al, 1.0, hq, c.tol)
                                old = bound_rhs(pair.classical, f, g, iv, al, None, hq, c.tol)
                                finite = math.isfinite(new) and math.isfinite(old) and old > 0
                                rel = abs(new - old) / old if finite else math.nan
                                yield InequalityReport(
                                    _case_id("reductions", th, iv, al, 1.0, q, fl, gl),
                                    "reductions", th, iv.a, iv.b, rel, REDUCTION_TOL,
                                    al, 1.0, q, fl, gl, 0.0, certified=finite, gated=gated,
                                    note=f"new={new!r} classical={old!r}")


def generate_rows(config: SweepConfig, catalog: Catalog | None = None) -> list[InequalityReport]:
    catalog = catalog or builtin_catalog()
    shifted = []
    for iv in map(shift_interval, config.intervals):
        if iv not in shifted:
            shifted.append(iv)
    runner = _Runner(replace(config, intervals=shifted), catalog)
    rows: list[InequalityReport] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        for check in CHECKS:
            if check in config.checks:
                rows.extend(getattr(runner, check)())
    rows.sort(key=lambda r: r.case_id)
    return rows


# -- report -----------------------------------------------------------------

def _num(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _row_values(r: InequalityReport) -> dict[str, Any]:
    return {
        "case_id": r.case_id, "check": r.check, "theorem": r.theorem,
        "a": r.a, "b": r.b, "alpha": r.alpha, "s": r.s, "q": r.q,
        "f_label": r.f_label, "g_label": r.g_label,
        "lhs": r.lhs, "rhs": r.rhs, "slack": r.slack, "ratio": r.ratio,
        "holds": r.holds, "quad_error": r.quad_error,
    }


def _csv_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _num(v)
    if v is None:
        return ""
    text = str(v)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _json_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, float):
        return _num(v) if math.isfinite(v) else "null"
    return json.dumps(v)


def render_report(rows: Sequence[InequalityReport], fmt: str) -> str:
    if not rows:
        raise ValueError("cannot emit an empty report")
    out = io.StringIO()
    if fmt == "csv":
        out.write(",".join(COLUMNS) + "\n")
        for r in rows:
            vals = _row_values(r)
            out.write(",".join(_csv_cell(vals[c]) for c in COLUMNS) + "\n")
    elif fmt == "json":
        objs = []
        for r in rows:
            vals = _row_values(r)
            objs.append("  {" + ", ".join(f"{json.dumps(c)}: {_json_value(vals[c])}"
                                           for c in COLUMNS) + "}")
        out.write("[\n" + ",\n".join(objs) + "\n]\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return out.getvalue()


def emit_report(rows: Sequence[InequalityReport], fmt: str, path: str | Path) -> None:
    """Write rows as CSV or JSON; numbers carry 17 significant digits."""
    text = render_report(rows, fmt)
    Path(path).write_text(text)


# -- sweep ------------------------------------------------------------------

@dataclass
class SweepSummary:
    cases: int
    passes: int
    failures: int
    warnings: int
    findings: int
    worst_ratio: float
    max_identity_residual: float
    failed_ids: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.failures else EXIT_OK

    def lines(self) -> list[str]:
        out = [
            f"cases run:              {self.cases}",
            f"passes:                 {self.passes}",
            f"failures:               {self.failures}",
            f"warnings (uncertified): {self.warnings}",
            f"findings (ungated):     {self.findings}",
            f"worst bound ratio:      {self.worst_ratio:.6g}",
            f"max identity residual:  {self.max_identity_residual:.3g}",
        ]
        out += [f"FAILED {cid}" for cid in self.failed_ids[:20]]
        return out


def summarize(rows: Sequence[InequalityReport]) -> SweepSummary:
    gate = [r for r in rows if r.certified and r.gated]
    failed = [r for r in gate if not r.holds]
    ratios = [r.ratio for r in gate if r.check == "bounds" and math.isfinite(r.ratio)]
    resid = [r.lhs for r in rows if r.check == "identity"]
    return SweepSummary(
        cases=len(rows),
        passes=len(gate) - len(failed),
        failures=len(failed),
        warnings=sum(1 for r in rows if not r.certified),
        findings=sum(1 for r in rows if r.certified and not r.gated and not r.holds),
        worst_ratio=max(ratios, default=0.0),
        max_identity_residual=max(resid, default=0.0),
        failed_ids=[r.case_id for r in failed],
    )


def reduction_table(rows: Sequence[InequalityReport]) -> list[str]:
    """Per-pair range of relative differences between new and classical bounds at s = 1."""
    out = []
    for pair in ReductionPair:
        vals = [r.lhs for r in rows if r.check == "reductions" and r.theorem == pair.value
                and r.certified]
        if vals:
            out.append(f"{pair.value:8s} rows={len(vals):4d} "
                       f"min rel diff={min(vals):.3e} max rel diff={max(vals):.3e}")
    return out


def run_sweep(config: SweepConfig, *, quiet: bool = False,
              catalog: Catalog | None = None) -> SweepSummary:
    """Run every enabled check, write the report and print a summary."""
    catalog = catalog or builtin_catalog()
    config.validate(catalog)
    rows = generate_rows(config, catalog)
    if not rows:
        raise ConfigError("configuration produced no cases")
    emit_report(rows, config.format, config.output_path)
    summary = summarize(rows)
    if not quiet:
        for line in summary.lines() + reduction_table(rows):
            print(line)
    return summary


def _parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    p = argparse.ArgumentParser(
        prog="rlfejer",
        description="Numerically verify fractional Hermite-Hadamard-Fejer "
                    "identities and bounds over a parameter sweep.",
    )
    p.add_argument("--config", help="JSON sweep configuration")
    p.add_argument("--out", help="report path (overrides output_path)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    p.add_argument("--quiet", action="store_true")
    return p.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse_args(argv)
    try:
        config = load_config(args.config) if args.config else SweepConfig()
        overrides: dict[str, Any] = {}
        if args.out is not None:
            overrides["output_path"] = args.out
        if args.format is not None:
            overrides["format"] = args.format
        if args.tol is not None:
            overrides["tol"] = args.tol
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.checks is not None:
            overrides["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
        config = replace(config, **overrides)
        summary = run_sweep(config, quiet=args.quiet)
    except (ConfigError, KeyError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())

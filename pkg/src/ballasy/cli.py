"""Command-line entry point ``ball-asy``: classify, verify and multiplier.

Exit codes: 0 success or pass, 1 malformed input, 2 uncovered regime,
3 failed verdict, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from typing import Sequence

from .asymptotics import lookup_case
from .exceptions import BallAsyError, CaseDriftError, DomainError, QuadratureError, UncoveredRegimeError
from .geometry import CPoint
from .kernels import FAMILY_PARAMS, KernelFamily
from .quadrature import QuadConfig
from .spaces import SpaceParams, catalog, criteria_record, matched_nu, sup_grid
from .verifier import SweepPlan, default_radii, run_sweep, verdict
from .weights import NormalWeight

EXIT_OK, EXIT_USAGE, EXIT_UNCOVERED, EXIT_FAIL, EXIT_IO = 0, 1, 2, 3, 4
CSV_SCHEMA = 1
CSV_COLUMNS = ("m", "radius", "dir_index", "coupling", "lhs", "lhs_err", "rhs", "ratio", "case_id")
PARAM_NAMES = ("delta", "t", "r", "k", "c")
COMMANDS = ("classify", "verify", "multiplier")
PSI_TAGS = ("const", "monomial", "kernel", "logkernel", "fw", "Gw", "psi1", "psi2", "psi3")


def _norm_tag(tag: str) -> str:
    return "".join(ch for ch in tag.lower() if ch.isalnum())


# command-line spellings: propB, propA-I, p31-G, l21-I1, ... (case and separators ignored)
FAMILY_ALIASES = {_norm_tag(t): t for t in FAMILY_PARAMS}
FAMILY_ALIASES.update({_norm_tag(t.replace("Prop", "")): t for t in FAMILY_PARAMS if t.startswith("Prop")})


def family_tag(name: str) -> str:
    try:
        return FAMILY_ALIASES[_norm_tag(name)]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; known: {', '.join(FAMILY_PARAMS)}") from None


# ----------------------------------------------------------------------
# run configuration

@dataclass(frozen=True)
class RunConfig:
    command: str = "classify"
    family: str = ""
    n: int = 1
    delta: float | None = None
    t: float | None = None
    r: float | None = None
    k: float | None = None
    c: float | None = None
    variant: str = "complex"
    coupling: str = "same"
    m_min: int = 2
    m_max: int = 13
    rel_tol: float = 1e-8
    seed: int = 0
    mc_samples: int = 200_000
    workers: int = 1
    window_bound: float = 50.0
    rhs_shift: float = 0.0
    psi: str = ""
    p: float = 2.0
    s: float = 1.0
    alpha: float = 1.0
    beta: float = 0.0
    nu_alpha: float | None = None
    nu_beta: float | None = None
    point: float = 0.9
    grid_m: int = 12
    output: str = ""
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")
        if not 1 <= self.m_min < self.m_max:
            raise DomainError("need 1 <= m_min < m_max")

    def family_params(self) -> dict:
        return {p: getattr(self, p) for p in PARAM_NAMES if getattr(self, p) is not None}

    def kernel_family(self) -> KernelFamily:
        return KernelFamily(family_tag(self.family), self.n, self.family_params(), self.variant)

    def quad(self) -> QuadConfig:
        return QuadConfig(rel_tol=self.rel_tol, mc_samples=self.mc_samples, seed=self.seed)

    def plan(self) -> SweepPlan:
        radii = default_radii(range(self.m_min, self.m_max + 1))
        return SweepPlan(radii=radii, coupling=self.coupling, cfg=self.quad())


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, text: str):
    kind = _TYPES[key]
    if kind == "str":
        return text
    if text == "none":
        if "None" not in kind:
            raise DomainError(f"{key} cannot be none")
        return None
    try:
        return int(text) if kind.startswith("int") else float(text)
    except ValueError:
        raise DomainError(f"{key}: cannot read {text!r}") from None


def emit_config(cfg: RunConfig) -> str:
    """Flat ``key = value`` text, one field per line."""
    lines = []
    for key, val in asdict(cfg).items():
        lines.append(f"{key} = {'none' if val is None else repr(val) if isinstance(val, float) else val}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> dict:
    """Inverse of ``emit_config``; blank lines and ``#`` comments are skipped."""
    out = {}
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = (s.strip() for s in line.partition("="))
        if not sep or key not in _TYPES:
            raise DomainError(f"config line {num}: expected a known 'key = value', got {raw!r}")
        out[key] = _coerce(key, val)
    return out


def load_config(text: str) -> RunConfig:
    return RunConfig(**parse_config(text))


# ----------------------------------------------------------------------
# argument parsing

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ball-asy", description="Asymptotic estimates for integrals on the complex ball.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    S = argparse.SUPPRESS

    def common(p):
        p.add_argument("--config", default=S, help="flat key = value file; flags override it")
        p.add_argument("--n", type=int, default=S, help="complex dimension")
        p.add_argument("--output", default=S, help="report path (stdout when omitted)")

    def fam(p):
        p.add_argument("--family", default=S, help="propA-I, propA-J, p31-G, p31-F, propB, propC, p32, l22, l21-I1, l21-I2")
        for name in PARAM_NAMES:
            p.add_argument(f"--{name}", type=float, default=S)
        p.add_argument("--variant", choices=("complex", "modulus"), default=S)

    c = sub.add_parser("classify", help="print the case and its right-hand side")
    common(c)
    fam(c)

    v = sub.add_parser("verify", help="boundary sweep with a pass/fail verdict")
    common(v)
    fam(v)
    v.add_argument("--coupling", choices=("same", "antipodal", "fixed", "rotated"), default=S)
    v.add_argument("--m-min", dest="m_min", type=int, default=S)
    v.add_argument("--m-max", dest="m_max", type=int, default=S)
    v.add_argument("--rel-tol", dest="rel_tol", type=float, default=S)
    v.add_argument("--seed", type=int, default=S)
    v.add_argument("--mc-samples", dest="mc_samples", type=int, default=S)
    v.add_argument("--workers", type=int, default=S)
    v.add_argument("--window-bound", dest="window_bound", type=float, default=S)
    v.add_argument("--format", choices=("csv", "json"), default=S)
    v.add_argument("--debug-rhs-shift", dest="rhs_shift", type=float, default=S,
                   help="add this to the boundary exponent of the right-hand side (negative control)")

    m = sub.add_parser("multiplier", help="grid criteria for a pointwise multiplier")
    common(m)
    m.add_argument("--psi", default=S, help=", ".join(PSI_TAGS))
    for name in ("p", "s", "alpha", "beta"):
        m.add_argument(f"--{name}", type=float, default=S)
    m.add_argument("--nu-alpha", dest="nu_alpha", type=float, default=S)
    m.add_argument("--nu-beta", dest="nu_beta", type=float, default=S)
    m.add_argument("--point", type=float, default=S, help="radius of w on the e1 axis for fw and Gw")
    m.add_argument("--grid-m", dest="grid_m", type=int, default=S)
    return ap


def resolve_config(argv: Sequence[str]) -> RunConfig:
    ns = vars(build_parser().parse_args(list(argv)))
    base = {}
    path = ns.pop("config", None)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            base = parse_config(fh.read())
    base.update(ns)
    return RunConfig(**base)


# ----------------------------------------------------------------------
# commands

def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write(cfg: RunConfig, text: str, out) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        (out or sys.stdout).write(text)


def cmd_classify(cfg: RunConfig, out=None) -> int:
    case = lookup_case(cfg.kernel_family())
    text = f"{case.cid.label}\nrhs: {case.formula}\n"
    _write(cfg, text, out)
    return EXIT_OK


def sweep_csv(rep) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={CSV_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rep.rows:
        w.writerow([repr(r.m), repr(r.radius), r.dir_index, r.coupling, repr(r.lhs),
                    repr(r.lhs_err), repr(r.rhs), repr(r.ratio), r.case_id])
    return buf.getvalue()


def sweep_summary(rep, v) -> dict:
    return {"case": str(rep.case), "window": v.window, "slope": v.slope,
            "predicted": v.predicted, "verdict": "pass" if v.passed else "fail",
            "excluded_rows": rep.excluded_rows}


def cmd_verify(cfg: RunConfig, out=None) -> int:
    rep = run_sweep(cfg.kernel_family(), cfg.plan(), workers=cfg.workers, rhs_shift=cfg.rhs_shift)
    v = verdict(rep, window_bound=cfg.window_bound)
    summary = dump_json(sweep_summary(rep, v))
    if cfg.output:
        _write(cfg, sweep_csv(rep) if cfg.format == "csv" else summary, out)
    (out or sys.stdout).write(summary)
    for reason in v.reasons:
        print(f"reason: {reason}", file=sys.stderr)
    return EXIT_OK if v.passed else EXIT_FAIL


def space_params(cfg: RunConfig) -> SpaceParams:
    mu = NormalWeight(cfg.alpha, cfg.beta)
    if cfg.nu_alpha is None:
        nu = matched_nu(mu, cfg.n, cfg.s, cfg.p)
        if cfg.nu_beta is not None:
            nu = replace(nu, beta=cfg.nu_beta)
    else:
        nu = NormalWeight(cfg.nu_alpha, cfg.beta if cfg.nu_beta is None else cfg.nu_beta)
    return SpaceParams(cfg.p, cfg.s, mu, nu, cfg.n)


def multiplier_function(cfg: RunConfig, sp: SpaceParams):
    if cfg.psi not in PSI_TAGS:
        raise DomainError(f"unknown catalog tag {cfg.psi!r}; known: {', '.join(PSI_TAGS)}")
    w = CPoint((cfg.point,) + (0.0,) * (cfg.n - 1))
    extra = {"fw": dict(w=w, mu=sp.mu, p=sp.p, s=sp.s), "Gw": dict(w=w, beta=sp.mu.beta)}
    return catalog(cfg.psi, cfg.n, **extra.get(cfg.psi, {}))


def cmd_multiplier(cfg: RunConfig, out=None) -> int:
    sp = space_params(cfg)
    psi = multiplier_function(cfg, sp)
    rec = criteria_record(psi, sp, sup_grid(cfg.n, cfg.grid_m, tangential=True, deep=True))
    _write(cfg, dump_json(rec), out)
    return EXIT_OK


COMMAND_TABLE = {"classify": cmd_classify, "verify": cmd_verify, "multiplier": cmd_multiplier}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = resolve_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BallAsyError, TypeError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMAND_TABLE[cfg.command](cfg)
    except UncoveredRegimeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_UNCOVERED
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DomainError, CaseDriftError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``eiszeros <command> [options]``.

Commands
  zeros            locate zeros, write CSV / SVG / JSON
  verify           print counts and verdicts per weight
  conjugate-check  half-period conjugation identities (series, hauptmodul, polynomial)
  identity-check   rescaling identities between registry groups
  qexp             print a q-expansion
  divpoly          print divisor polynomial coefficients

Exit codes: 0 success or advisory, 1 verification failure, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

log = logging.getLogger("eiszeros")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
JSON_SCHEMA = "eiszeros.report/1"
FORMATS = ("csv", "svg", "json")
CONFIG_KEYS = ("group", "weights", "precision", "trunc", "out", "format", "jobs", "convention",
               "pair", "tol")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    groups: list[str]
    weights: list[int]
    precision: int = 128
    trunc: int = 200
    out: Path | None = None
    formats: tuple[str, ...] = ("csv",)
    jobs: int = 1
    convention: str = "reduced"
    pair: tuple[str, str] | None = None
    tol: float = 1e-8
    extra: dict = field(default_factory=dict)


def parse_weights(text: str) -> list[int]:
    """``"12"``, ``"4,6,8"``, ``"4..40"`` or ``"4..40/4"`` (step defaults to 2)."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)(?:/(\d+))?", part)
        if m:
            a, b, step = int(m[1]), int(m[2]), int(m[3] or 2)
            if step <= 0 or b < a:
                raise ConfigError(f"bad weight range {part!r}")
            out.extend(range(a, b + 1, step))
        elif part.isdigit():
            out.append(int(part))
        else:
            raise ConfigError(f"cannot parse weights {text!r}")
    for w in out:
        if w < 4 or w % 2:
            raise ConfigError(f"weight {w} must be even and at least 4")
    return sorted(set(out))


def read_config_file(path) -> dict:
    values = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    from .groups import RegistryError, get_group
    values = read_config_file(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v  # flags win
    if "group" not in values and values.get("pair"):
        values["group"] = values["pair"]  # identity checks only need the pair
    if "group" not in values:
        raise ConfigError("--group is required")
    groups = [g.strip() for g in str(values["group"]).split(",") if g.strip()]
    for g in groups:
        try:
            get_group(g)
        except RegistryError as exc:
            raise ConfigError(str(exc)) from exc
    weights = parse_weights(values.get("weights", "12"))
    try:
        precision = int(values.get("precision", 128))
        trunc = int(values.get("trunc", 200))
        jobs = int(values.get("jobs", 1))
        tol = float(values.get("tol", 1e-8))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if precision < 64:
        raise ConfigError("precision must be at least 64 bits")
    if trunc < 16:
        raise ConfigError("truncation order must be at least 16")
    formats = tuple(f.strip() for f in str(values.get("format", "csv")).split(",") if f.strip())
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown format(s) {bad}; choose from {FORMATS}")
    convention = values.get("convention", "reduced")
    if convention not in ("reduced", "winding"):
        raise ConfigError(f"unknown convention {convention!r}")
    pair = None
    if values.get("pair"):
        names = [p.strip() for p in str(values["pair"]).split(",")]
        if len(names) != 2:
            raise ConfigError("--pair takes two comma-separated group names")
        for g in names:
            try:
                get_group(g)
            except RegistryError as exc:
                raise ConfigError(str(exc)) from exc
        pair = (names[0], names[1])
    out = Path(values["out"]) if values.get("out") else None
    return RunConfig(groups, weights, precision, trunc, out, formats, max(1, jobs), convention, pair, tol)


# -- per-(group, weight) jobs ---------------------------------------------------

def _job(group: str, weight: int, precision: int) -> dict:
    """Plain summary of one run, safe to send between processes."""
    from .divpoly import from_zeros
    from .zeros import report_rows, locate_zeros
    rep = locate_zeros(group, weight, precision)
    poly = from_zeros(rep)
    return {
        "group": group, "weight": weight, "rows": report_rows(rep),
        "z": [z.z for z in rep.zeros], "j": [z.j_value for z in rep.zeros],
        "a0": rep.a0, "a1": rep.a1, "summary": summary(rep),
        "divpoly": [[c.real, c.imag] for c in poly.coefficients],
    }


def summary(rep) -> dict:
    return {
        "group": rep.group.name, "weight": rep.weight, "precision": rep.precision,
        "acceptable": rep.group.acceptable, "advisory": rep.advisory,
        "valence_expected": str(rep.valence_expected), "valence_found": str(rep.valence_found),
        "zero_classes": len(rep.zeros), "off_arc": sum(z.multiplicity for z in rep.off_arc),
        "degree": rep.degree, "c": rep.c, "s1": rep.s1,
        "bound_halfline": rep.bound_halfline, "bound_interval": rep.bound_interval,
        "off_halfline_count": rep.off_halfline_count, "off_left_halfline_count": rep.off_left_halfline_count,
        "off_interval_count": rep.off_interval_count,
        "m_halfline": rep.m_halfline, "m_halfline_excluding_cusps": rep.m_halfline_no_cusps,
        "m_left_halfline": rep.m_left_halfline, "m_left_halfline_excluding_cusps": rep.m_left_halfline_no_cusps,
        "verdict_11prime": rep.verdict_11prime, "verdict_12": rep.verdict_12, "verdict_31": rep.verdict_31,
        "a0": rep.a0, "a1": rep.a1,
    }


def run_jobs(cfg: RunConfig) -> list[dict]:
    tasks = [(g, w, cfg.precision) for g in cfg.groups for w in cfg.weights]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_job, *zip(*tasks)))
    else:
        results = [_job(*t) for t in tasks]
    return sorted(results, key=lambda r: (r["group"], r["weight"]))


# -- commands ----------------------------------------------------------------------

def _out_dir(cfg: RunConfig) -> Path:
    out = cfg.out or Path("eiszeros-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps({"schema": JSON_SCHEMA, "version": __version__, **payload}, indent=2,
                               sort_keys=True) + "\n")


def cmd_zeros(cfg: RunConfig) -> int:
    import csv

    from .groups import get_group
    from .plots import figure
    from .zeros import CSV_HEADER
    results = run_jobs(cfg)
    out = _out_dir(cfg)
    by_group: dict[str, list[dict]] = {}
    for r in results:
        by_group.setdefault(r["group"], []).append(r)
    for name, rs in by_group.items():
        stem = name.replace("*", "star")
        if "csv" in cfg.formats:
            for r in rs:
                with open(out / f"{stem}_w{r['weight']}.csv", "w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(CSV_HEADER)
                    w.writerows(r["rows"])
        if "svg" in cfg.formats:
            figure(get_group(name), [{"weight": r["weight"], "z": r["z"], "j": r["j"]} for r in rs],
                   rs[0]["a0"], rs[0]["a1"], out / f"{stem}_zeros.svg")
        if "json" in cfg.formats:
            _write_json(out / f"{stem}_zeros.json", {"group": name, "results": [r["summary"] for r in rs]})
    for r in results:
        s = r["summary"]
        print(f"{s['group']}\tw={s['weight']}\tclasses={s['zero_classes']}\toff_arc={s['off_arc']}"
              f"\tvalence={s['valence_found']}")
    print(f"wrote output to {out}")
    return EXIT_OK


def _verdict_table(results: list[dict]) -> str:
    head = ("weight", "degP", "m", "m_nocusp", "c-s1", "off_half", "off_left", "off_int",
            "halfline", "interval", "left_half")
    lines = ["\t".join(head)]
    for r in results:
        s = r["summary"]
        lines.append("\t".join(str(v) for v in (
            s["weight"], s["degree"], s["m_halfline"], s["m_halfline_excluding_cusps"], s["bound_halfline"],
            s["off_halfline_count"], s["off_left_halfline_count"], s["off_interval_count"],
            _yn(s["verdict_11prime"]), _yn(s["verdict_12"]), _yn(s["verdict_31"]))))
    return "\n".join(lines)


def _yn(b: bool) -> str:
    return "pass" if b else "FAIL"


def cmd_verify(cfg: RunConfig) -> int:
    from .groups import get_group
    results = run_jobs(cfg)
    status = EXIT_OK
    for name in cfg.groups:
        rs = [r for r in results if r["group"] == name]
        group = get_group(name)
        print(f"# {name}  a0={rs[0]['a0']:.12g}  a1={rs[0]['a1']:.12g}")
        print(_verdict_table(rs))
        if not group.acceptable:
            print(f"warning: {name} has no acceptable fundamental domain; verdicts are advisory",
                  file=sys.stderr)
            continue
        if not all(r["summary"][k] for r in rs for k in ("verdict_11prime", "verdict_12", "verdict_31")):
            status = EXIT_FAIL
    if "json" in cfg.formats or cfg.out:
        out = _out_dir(cfg)
        _write_json(out / "verdicts.json", {"results": [r["summary"] for r in results]})
    return status


def _resolve_pair(cfg: RunConfig, kind: str) -> tuple[str, str, int]:
    """``(big, small, m)`` for rescaling or ``(group, conjugate, 0)`` for conjugation."""
    from .groups import get_group
    names = list(cfg.pair) if cfg.pair else [cfg.groups[0]]
    g = get_group(names[0])
    if kind == "conjugate":
        partner = g.conjugate
        if partner is None or (len(names) == 2 and names[1] != partner):
            raise ConfigError(f"{names} is not a conjugate pair in the registry")
        return g.name, partner, 0
    for a, b in ((names[0], names[-1]), (names[-1], names[0])):
        ga = get_group(a)
        if ga.rescale_of and (len(names) == 1 or ga.rescale_of[0] == b):
            return ga.name, ga.rescale_of[0], int(ga.rescale_of[1])
    if len(names) == 2 and names[0] == names[1]:
        return names[0], names[0], 1
    raise ConfigError(f"{names} is not a rescaling pair in the registry")


def cmd_conjugate_check(cfg: RunConfig) -> int:
    from .divpoly import DegreeMismatch, conjugation_identity_check, from_zeros
    from .forms import build_eisenstein, build_hauptmodul, conjugate_form, conjugate_hauptmodul
    from .zeros import locate_zeros
    a, b, _ = _resolve_pair(cfg, "conjugate")
    ok = True
    ja, jb = build_hauptmodul(a, cfg.trunc), build_hauptmodul(b, cfg.trunc)
    flip = conjugate_hauptmodul(ja).qexp.agrees_with(jb.qexp, cfg.trunc - 1)
    print(f"hauptmodul flip {a} -> {b}: {_yn(flip)}")
    ok &= flip
    for w in cfg.weights:
        ea, eb = build_eisenstein(a, w, cfg.trunc), build_eisenstein(b, w, cfg.trunc)
        series_ok = conjugate_form(ea.qexp).agrees_with(eb.qexp, cfg.trunc)
        try:
            poly_ok = conjugation_identity_check(from_zeros(locate_zeros(a, w, cfg.precision), cfg.convention),
                                                 from_zeros(locate_zeros(b, w, cfg.precision), cfg.convention),
                                                 cfg.tol)
        except DegreeMismatch as exc:
            print(f"w={w}: degree mismatch: {exc}")
            poly_ok = False
        print(f"w={w}\tseries {_yn(series_ok)}\tpolynomial {_yn(poly_ok)}")
        ok &= series_ok and poly_ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_identity_check(cfg: RunConfig) -> int:
    from .divpoly import CardinalityMismatch, rescale_identity_check
    from .forms import build_eisenstein
    from .zeros import locate_zeros
    big, small, m = _resolve_pair(cfg, "rescale")
    ok = True
    for w in cfg.weights:
        eb, es = build_eisenstein(big, w, cfg.trunc), build_eisenstein(small, w, cfg.trunc)
        series_ok = es.qexp.rescale(m, eb.qexp.width).agrees_with(eb.qexp, cfg.trunc)
        rb = locate_zeros(big, w, cfg.precision)
        try:
            zeros_ok = rescale_identity_check(rb, locate_zeros(small, w, cfg.precision), m, cfg.tol)
        except CardinalityMismatch as exc:
            print(f"w={w}: {exc}")
            zeros_ok = False
        off = sum(z.multiplicity for z in rb.off_arc)
        print(f"w={w}\t{big} = {small}(z*{m})\tseries {_yn(series_ok)}\tzeros {_yn(zeros_ok)}\toff_arc={off}")
        ok &= series_ok and zeros_ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_qexp(cfg: RunConfig, kind: str) -> int:
    from .forms import build_eisenstein, build_hauptmodul, qexp_text
    for g in cfg.groups:
        if kind == "hauptmodul":
            print(f"# hauptmodul {g}")
            print(qexp_text(build_hauptmodul(g, cfg.trunc).qexp.truncate(cfg.trunc)))
            continue
        for w in cfg.weights:
            print(f"# eisenstein {g} weight {w}")
            print(qexp_text(build_eisenstein(g, w, cfg.trunc).qexp.truncate(cfg.trunc)))
    return EXIT_OK


def cmd_divpoly(cfg: RunConfig) -> int:
    from .divpoly import from_zeros
    from .zeros import locate_zeros
    digits = max(6, int(cfg.precision * 0.30103) // 2 - 2)
    for g in cfg.groups:
        for w in cfg.weights:
            p = from_zeros(locate_zeros(g, w, cfg.precision), cfg.convention)
            print(f"# group={g} weight={w} convention={p.convention} degree={p.degree}")
            for c in p.coefficients:
                print(f"{c.real:.{digits}g}\t{c.imag:.{digits}g}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="registry group name(s), comma separated")
    common.add_argument("--weights", help="e.g. 12, 4,6,8, 4..40 or 4..40/4")
    common.add_argument("--precision", type=int, help="working precision in bits (default 128)")
    common.add_argument("--trunc", type=int, help="q-expansion truncation order (default 200)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", help="comma list of csv,svg,json")
    common.add_argument("--jobs", type=int, help="parallel (group, weight) jobs")
    common.add_argument("--convention", help="divisor polynomial convention: reduced or winding")
    common.add_argument("--pair", help="two group names for identity checks")
    common.add_argument("--tol", type=float, help="tolerance for identity checks")
    common.add_argument("--config", help="key=value config file; flags win")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="eiszeros", description="Zeros of Eisenstein series for genus-zero groups.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("zeros", "verify", "conjugate-check", "identity-check", "divpoly"):
        sub.add_parser(name, parents=[common])
    q = sub.add_parser("qexp", parents=[common])
    q.add_argument("--kind", choices=("eisenstein", "hauptmodul"), default="eisenstein")
    return p


def main(argv=None) -> int:
    from .divpoly import CardinalityMismatch, DegreeMismatch
    from .forms import FormError
    from .groups import ConstantError
    from .modular import NumericalError
    from .zeros import ZeroLocatorError
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    commands = {
        "zeros": cmd_zeros, "verify": cmd_verify, "conjugate-check": cmd_conjugate_check,
        "identity-check": cmd_identity_check, "divpoly": cmd_divpoly,
        "qexp": lambda c: cmd_qexp(c, args.kind),
    }
    try:
        return commands[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegreeMismatch, CardinalityMismatch) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ZeroLocatorError, NumericalError, FormError, ConstantError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface.

Exit status: 0 success / satisfied, 1 check failed or nothing found,
2 input or parameter error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import nss, symfun
from .cover import (
    CoverFamily,
    CoverParseError,
    GridSpec,
    appendix_cover,
    construct_layered_cover,
    construct_two_cover,
    verify_almost_cover,
)
from .errors import BudgetExceeded
from .poly import Polynomial, PolyParseError
from .search import certify, enumerate_candidates, find_cover

OK, FAILED, INPUT_ERROR, BUDGET = 0, 1, 2, 3

NODE_BUDGETS = {"low": 100_000, "default": 5_000_000, "high": 200_000_000, "unlimited": None}
N_BUDGETS = {"low": 100, "default": nss.DEFAULT_N_CAP, "high": 2000, "unlimited": 10**9}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    m: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    size: Optional[int] = None
    excluded: Optional[tuple] = None
    emit: str = "text"
    budget: str = "default"
    input: Optional[str] = None
    output: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = cls.__dataclass_fields__
        cfg = cls(**{k: v for k, v in vars(args).items() if k in fields and v is not None})
        cfg.validate()
        return cfg

    def validate(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise UsageError(f"--{name} must be >= 1")
        if self.k is not None and self.k < 1:
            raise UsageError("--k must be >= 1")
        if self.emit not in ("text", "json"):
            raise UsageError("--emit must be text or json")
        if self.excluded is not None and self.n is not None:
            if len(self.excluded) != self.n:
                raise UsageError(f"--excluded has {len(self.excluded)} coordinates, expected n={self.n}")
            if self.m is not None and not all(0 <= a <= self.m for a in self.excluded):
                raise UsageError(f"--excluded must lie in {{0..{self.m}}}^{self.n}")

    def need(self, *names: str):
        missing = [f"--{x}" for x in names if getattr(self, x) is None]
        if missing:
            raise UsageError(f"{self.command} needs {', '.join(missing)}")

    def node_budget(self) -> Optional[int]:
        return _parse_budget(self.budget, NODE_BUDGETS)

    def n_cap(self) -> int:
        return _parse_budget(self.budget, N_BUDGETS)


def _parse_budget(value: str, table: dict):
    if value in table:
        return table[value]
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"--budget must be an integer or one of {', '.join(table)}") from None


def _point(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


# -- report emission -----------------------------------------------------------

def _text_value(v) -> str:
    if isinstance(v, (list, dict, tuple)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(report: dict, emit: str) -> str:
    if emit == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    return "".join(f"{k}: {_text_value(v)}\n" for k, v in report.items())


def parse_text_report(text: str) -> dict:
    """Inverse of ``render(..., "text")``; values come back as strings."""
    out = {}
    for line in text.splitlines():
        key, _, value = line.partition(": ")
        out[key] = value
    return out


def _emit(cfg: RunConfig, report: dict, extra_text: str = ""):
    sys.stdout.write(render(report, cfg.emit))
    if extra_text and cfg.emit == "text":
        sys.stdout.write(extra_text)


def _write(path: Optional[str], text: str):
    if path:
        Path(path).write_text(text)


# -- commands ------------------------------------------------------------------

def _load_family(cfg: RunConfig, appendix: Optional[int]) -> CoverFamily:
    if appendix is not None:
        return appendix_cover(appendix)
    if cfg.input is None:
        raise UsageError("verify needs a cover file or --appendix N")
    try:
        text = Path(cfg.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.input}: {exc.strerror}") from None
    return CoverFamily.from_text(text)


def cmd_verify(cfg: RunConfig, appendix: Optional[int] = None) -> int:
    cfg.need("m", "n", "k")
    fam = _load_family(cfg, appendix)
    if fam.n is not None and fam.n != cfg.n:
        raise UsageError(f"cover file is in dimension {fam.n}, --n is {cfg.n}")
    rep = verify_almost_cover(GridSpec(cfg.m, cfg.n), cfg.k, fam, cfg.excluded)
    d = rep.to_dict()
    report = {"command": "verify", "m": cfg.m, "n": cfg.n, **{k: d[k] for k in (
        "k", "size", "excluded", "excluded_cover", "min_cover_excluding", "satisfied", "deficient", "per_point")}}
    _emit(cfg, report)
    return OK if rep.satisfied else FAILED


def cmd_construct(cfg: RunConfig, kind: str) -> int:
    if kind == "appendix":
        cfg.need("n")
        fam, g, k = appendix_cover(cfg.n), GridSpec(2, cfg.n), 3
    elif kind == "two-cover":
        cfg.need("m", "n")
        if cfg.n < 2:
            raise UsageError("the two-cover construction needs n >= 2")
        g, k = GridSpec(cfg.m, cfg.n), 2
        fam = construct_two_cover(g, cfg.excluded)
    else:
        cfg.need("m", "n", "k")
        g, k = GridSpec(cfg.m, cfg.n), cfg.k
        fam = construct_layered_cover(g, k)
    excluded = cfg.excluded if kind == "two-cover" else None
    rep = verify_almost_cover(g, k, fam, excluded)
    _write(cfg.output, fam.to_text())
    report = {"command": "construct", "kind": kind, "m": g.m, "n": g.n, "k": k,
              "size": fam.size(), "satisfied": rep.satisfied, "planes": fam.to_text().splitlines()}
    _emit(cfg, report)
    return OK if rep.satisfied else FAILED


def cmd_search(cfg: RunConfig) -> int:
    cfg.need("m", "n", "k", "size")
    g = GridSpec(cfg.m, cfg.n)
    cands = enumerate_candidates(g, cfg.excluded)
    fam = find_cover(g, cfg.k, cfg.size, cfg.excluded, candidates=cands, max_nodes=cfg.node_budget())
    report = {"command": "search", "m": cfg.m, "n": cfg.n, "k": cfg.k, "size": cfg.size,
              "candidates": len(cands), "found": fam is not None,
              "witness": fam.to_text().splitlines() if fam else []}
    if fam is not None:
        _write(cfg.output, fam.to_text())
    _emit(cfg, report)
    return OK if fam is not None else FAILED


def cmd_certify(cfg: RunConfig, witness: Optional[str]) -> int:
    cfg.need("m", "n", "k")
    fam = None
    use_appendix = witness == "appendix"
    if witness and not use_appendix:
        fam = CoverFamily.from_text(Path(witness).read_text())
    if use_appendix and not (cfg.m == 2 and cfg.k == 3 and cfg.n in (2, 3, 4)):
        raise UsageError("tabulated witnesses exist only for m=2, k=3, n in {2,3,4}")
    cert = certify(cfg.m, cfg.n, cfg.k, max_nodes=cfg.node_budget(), witness=fam, use_appendix=use_appendix)
    out = cfg.output
    _write(out, cert.witness.to_text())
    report = {"command": "certify", **cert.to_dict(), "witness_file": out or ""}
    _emit(cfg, report)
    return OK


def cmd_nss(cfg: RunConfig, action: str, method: str, pipeline: bool) -> int:
    cfg.need("m", "n", "k")
    if cfg.k < 2:
        raise UsageError("the reduced spaces need k >= 2")
    p = nss.SpaceParams(cfg.m, cfg.n, cfg.k)
    base = {"command": f"nss {action}", "m": p.m, "n": p.n, "k": p.k, "N": p.N, "deg_cap": p.deg_cap}
    if action == "rank":
        r = nss.psi_matrix_rank(p, n_cap=cfg.n_cap(), method=method)
        if cfg.output:
            from .linalg import format_matrix
            _write(cfg.output, format_matrix(nss.psi_matrix(p)))
        verdict = "isomorphism" if r.is_isomorphism else "not-isomorphism"
        report = {**base, "basis_size": r.basis_size, "rank": r.rank, "method": r.method, "verdict": verdict}
        _emit(cfg, report, f"N={r.N} rank={r.rank} {verdict}\n")
        return OK if r.is_isomorphism else FAILED
    if action == "reduce":
        if cfg.input is None:
            raise UsageError("nss reduce needs --input FILE (one term per line: c e1 .. en)")
        P = Polynomial.from_text(Path(cfg.input).read_text(), nvars=p.n)
        if P.nvars != p.n:
            raise UsageError(f"polynomial has {P.nvars} variables, --n is {p.n}")
        if p.N > cfg.n_cap():
            raise BudgetExceeded(f"N={p.N} exceeds cap {cfg.n_cap()}")
        P0 = nss.reduce(P, p)
        _write(cfg.output, P0.to_text())
        residual = nss.psi(P - P0, p)
        report = {**base, "input_degree": P.degree(), "degree": P0.degree(), "terms": len(P0),
                  "reduced": nss.is_reduced(P0, p), "residual_zero": residual.is_zero(),
                  "polynomial": P0.to_text().splitlines()}
        _emit(cfg, report)
        return OK if report["reduced"] and report["residual_zero"] else FAILED
    if action == "y":
        if p.n < p.k - 1:
            raise UsageError("Y_{m,k} is defined for n >= k-1")
        ys = symfun.y_sum(p.m, p.k, p.n)
        yc = symfun.y_closed(p.m, p.k, p.n)
        report = {**base, "y_sum": str(ys), "y_closed": "none" if yc is None else str(yc),
                  "agree": yc is None or yc == ys, "nonzero": ys != 0}
        if yc is None:
            report["note"] = "no closed form outside k in {2,3} or k=4 with m>=2"
        if pipeline:
            if p.N > cfg.n_cap():
                raise BudgetExceeded(f"N={p.N} exceeds cap {cfg.n_cap()}")
            anchor = nss.anchor_coefficient(p)
            report["anchor"] = "none" if anchor is None else str(anchor)
            report["agree"] = report["agree"] and anchor == ys
        _emit(cfg, report)
        return OK if report["agree"] else FAILED
    if action == "extremal":
        if p.k not in (2, 3, 4):
            raise UsageError("the extremal degree check is proven only for k in {2,3,4}")
        if p.n < p.k - 1:
            raise UsageError("the extremal degree check needs n >= k-1")
        l = 0 if cfg.l is None else cfg.l
        if not 0 <= l <= p.k - 2:
            raise UsageError("--l must satisfy 0 <= l <= k-2")
        d = nss.extremal_degree_check(p, l)
        report = {**base, "l": l, "degree": d, "bound": p.deg_cap, "attained": d == p.deg_cap}
        _emit(cfg, report)
        return OK if d == p.deg_cap else FAILED
    raise UsageError(f"unknown nss action {action}")


def cmd_coeffs(cfg: RunConfig) -> int:
    cfg.need("m", "k")
    report = {"command": "coeffs", **symfun.coefficient_report(cfg.m, cfg.k)}
    if cfg.k in (2, 3, 4):
        report["closed_forms"] = _closed_form_rows(cfg.m, cfg.k)
    if cfg.n is not None:
        if cfg.k < 2 or cfg.n < cfg.k - 1:
            raise UsageError("Y needs k >= 2 and n >= k-1")
        report["Y"] = str(symfun.y_sum(cfg.m, cfg.k, cfg.n))
    _emit(cfg, report)
    return OK if report.get("recurrence", True) else FAILED


def _closed_form_rows(m: int, k: int) -> dict:
    t = symfun.a_table(m, k)
    rows = {f"a[0][{m}]": [str(t.get(0, m)), str(symfun.a_top_closed(m, k))]}
    for kk, l, dr, f, mmin in symfun.CLOSED_FORMS:
        if kk == k and m >= mmin:
            rows[f"a[{l}][{m + dr}]"] = [str(t.get(l, m + dr)), str(f(m))]
    return rows


# -- argument parsing ----------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, grid=True, k=True):
    if grid:
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
    if k:
        p.add_argument("--k", type=int)
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.add_argument("--budget", default="default",
                   help="node cap (search) or N cap (nss): integer or low/default/high/unlimited")
    p.add_argument("--output", "-o")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypercover", description="Almost k-covers of the grid {0..m}^n.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check a cover file")
    v.add_argument("input", nargs="?")
    v.add_argument("--appendix", type=int, choices=[2, 3, 4], help="use a built-in tabulated cover")
    v.add_argument("--excluded", type=_point)
    _common(v)

    c = sub.add_parser("construct", help="explicit constructions")
    c.add_argument("kind", choices=["two-cover", "layered", "appendix"])
    c.add_argument("--excluded", type=_point)
    _common(c)

    s = sub.add_parser("search", help="exact search for a cover of a given size")
    s.add_argument("--size", type=int)
    s.add_argument("--excluded", type=_point)
    _common(s)

    ce = sub.add_parser("certify", help="match a cover against the proven lower bound")
    ce.add_argument("--witness", help="cover file to verify instead of searching, or 'appendix'")
    _common(ce)

    ns = sub.add_parser("nss", help="reduced-space computations")
    ns.add_argument("action", choices=["rank", "reduce", "y", "extremal"])
    ns.add_argument("--l", type=int)
    ns.add_argument("--input")
    ns.add_argument("--method", choices=["bareiss", "modular"], default="bareiss")
    ns.add_argument("--pipeline", action="store_true",
                    help="for 'y': also run the full reduction and W-basis expansion")
    _common(ns)

    co = sub.add_parser("coeffs", help="coefficient tables a[l][r], b[d]")
    co.add_argument("--m", type=int)
    co.add_argument("--k", type=int)
    co.add_argument("--n", type=int, help="also report Y for this n")
    co.add_argument("--emit", choices=["text", "json"], default="text")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        if args.command == "verify":
            return cmd_verify(cfg, args.appendix)
        if args.command == "construct":
            return cmd_construct(cfg, args.kind)
        if args.command == "search":
            return cmd_search(cfg)
        if args.command == "certify":
            return cmd_certify(cfg, args.witness)
        if args.command == "nss":
            return cmd_nss(cfg, args.action, args.method, args.pipeline)
        if args.command == "coeffs":
            return cmd_coeffs(cfg)
    except (UsageError, CoverParseError, PolyParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        if exc.partial:
            print(json.dumps(exc.partial, sort_keys=True, default=str), file=sys.stderr)
        return BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

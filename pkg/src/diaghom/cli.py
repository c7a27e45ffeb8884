"""Batch command-line front end.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or configuration error.
Every flag can also be set through an environment variable DIAGHOM_<FLAG>,
for example DIAGHOM_RING=z2; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Callable

from . import algebra as alg
from . import homology as hom
from . import idempotent as idem
from . import linkstate as ls
from . import tate
from .coeff import NotInvertible, RingSpec, parse_scalar
from .diagram import Diagram, Family, SizeTooLarge, compose, enumerate_diagrams

ENV_PREFIX = "DIAGHOM_"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Configuration


@dataclass
class JobConfig:
    command: str
    family: str | None = None
    group: str | None = None
    n: int | None = None
    r: int | None = None
    s: int | None = None
    params: dict = field(default_factory=dict)
    ring: RingSpec = field(default_factory=RingSpec.integers)
    D: int = 3
    fmt: str = "json"
    out: str | None = None
    threads: int = 1
    budget: int = hom.DEFAULT_BUDGET
    quotient: int | None = None
    extra: dict = field(default_factory=dict)

    def spec(self) -> alg.AlgebraSpec:
        if self.family is None:
            raise UsageError("--family is required")
        fam = Family.parse(self.family, self.r, self.s)
        if fam.kind != "WB" and self.n is None:
            raise UsageError("--n is required")
        params = {}
        for name in fam.params:
            if name not in self.params:
                raise UsageError(f"{fam} needs --{name}")
            params[name] = self.params[name]
        try:
            return alg.AlgebraSpec(fam, fam.size(self.n), self.ring, **params)
        except ValueError as e:
            raise UsageError(str(e)) from e

    def group_spec(self) -> alg.GroupSpec:
        if self.group is None:
            raise UsageError("--group is required")
        return alg.GroupSpec.parse(self.group)


def _env(name: str, fallback=None):
    return os.environ.get(ENV_PREFIX + name.upper(), fallback)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default=_env("family"))
    p.add_argument("--group", default=_env("group"))
    p.add_argument("--n", type=int, default=_env("n"))
    p.add_argument("--r", type=int, default=_env("r"))
    p.add_argument("--s", type=int, default=_env("s"))
    for name in ("delta", "epsilon", "gamma"):
        p.add_argument(f"--{name}", type=parse_scalar, default=_env(name), help="decimal or p/q")
    p.add_argument("--ring", default=_env("ring", "z"), help="z, q or z<m>")
    p.add_argument("--D", type=int, default=_env("d", "3"))
    p.add_argument("--format", choices=("json", "csv", "pretty"), default=_env("format", "json"))
    p.add_argument("--out", default=_env("out"))
    p.add_argument("--threads", type=int, default=_env("threads", "1"))
    p.add_argument("--budget", type=int, default=_env("budget", str(hom.DEFAULT_BUDGET)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diaghom", description="Diagram algebras and their (co)homology.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list basis diagrams or link states")
    _add_common(p)
    p.add_argument("--states", type=int, default=None, help="list link states with this many defects")
    p.add_argument("--kind", default="P", help="P, Q, QB or R")

    p = sub.add_parser("multiply", help="multiply two diagrams")
    _add_common(p)
    p.add_argument("left", help="diagram JSON")
    p.add_argument("right", help="diagram JSON")

    p = sub.add_parser("table", help="full structure-constant table")
    _add_common(p)

    p = sub.add_parser("homology", help="Tor and Ext of the trivial module")
    _add_common(p)
    p.add_argument("--quotient", type=int, default=_env("quotient"), help="quotient by the ideal at this level")

    p = sub.add_parser("verify", help="run a registered theorem check")
    _add_common(p)
    p.add_argument("theorem", nargs="?", help="registry id; omit with --list")
    p.add_argument("--list", action="store_true")
    p.add_argument("--force", action="store_true", help="run even if the hypotheses fail")

    p = sub.add_parser("tate", help="Tate cohomology of a G-centred algebra")
    _add_common(p)

    p = sub.add_parser("idempotents", help="per-link-state idempotent reports as JSON lines")
    _add_common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    try:
        ring = RingSpec.parse(args.ring)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.D < 0:
        raise UsageError("--D must be nonnegative")
    params = {k: getattr(args, k) for k in ("delta", "epsilon", "gamma") if getattr(args, k) is not None}
    for k, v in params.items():
        try:
            ring.normalize(v)
        except (ValueError, NotInvertible, ZeroDivisionError) as e:
            raise UsageError(f"--{k}={v} is not an element of {ring}") from e
    cfg = JobConfig(args.command, args.family, args.group, args.n, args.r, args.s, params, ring,
                    args.D, args.format, args.out, args.threads, args.budget)
    for extra in ("states", "kind", "left", "right", "theorem", "list", "force", "quotient"):
        if hasattr(args, extra):
            cfg.extra[extra] = getattr(args, extra)
    cfg.quotient = cfg.extra.get("quotient")
    return cfg


# ---------------------------------------------------------------------------
# Output


def _emit(cfg: JobConfig, obj, csv_rows: list | None = None, pretty: str | None = None) -> None:
    if cfg.fmt == "json" or (cfg.fmt == "csv" and csv_rows is None) or (cfg.fmt == "pretty" and pretty is None):
        text = obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True)
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        text = buf.getvalue().rstrip("\n")
    else:
        text = pretty
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# Commands


def cmd_enumerate(cfg: JobConfig) -> int:
    spec_fam = Family.parse(cfg.family, cfg.r, cfg.s) if cfg.family else None
    if spec_fam is None:
        raise UsageError("--family is required")
    if spec_fam.kind != "WB" and cfg.n is None:
        raise UsageError("--n is required")
    n = spec_fam.size(cfg.n)
    if cfg.extra.get("states") is not None:
        states = ls.link_state_sets(spec_fam, cfg.extra["states"], cfg.extra.get("kind", "P"), n)
        obj = {"family": spec_fam.token(), "n": n, "count": len(states),
               "states": [s.to_json() for s in states]}
        rows = [["index", "state"]] + [[i, s.dumps()] for i, s in enumerate(states)]
        pretty = "\n".join([f"{len(states)} link states"] + [repr(s) for s in states])
    else:
        ds = enumerate_diagrams(spec_fam, n)
        obj = {"family": spec_fam.token(), "n": n, "count": len(ds), "diagrams": [d.to_json() for d in ds]}
        rows = [["index", "diagram"]] + [[i, d.dumps()] for i, d in enumerate(ds)]
        pretty = "\n".join([f"{len(ds)} diagrams"] + [repr(d) for d in ds])
    _emit(cfg, obj, rows, pretty)
    return 0


def _parse_diagram(text: str, n: int) -> Diagram:
    try:
        d = Diagram.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad diagram {text!r}: {e}") from e
    if d.n != n:
        raise UsageError(f"diagram has size {d.n}, expected {n}")
    return d


def cmd_multiply(cfg: JobConfig) -> int:
    spec = cfg.spec()
    a = _parse_diagram(cfg.extra["left"], spec.n)
    b = _parse_diagram(cfg.extra["right"], spec.n)
    x = alg.AlgebraElement.basis_element(spec, a) * alg.AlgebraElement.basis_element(spec, b)
    res = compose(a, b, spec.family)
    obj = {"algebra": spec.to_json(), "product": x.to_json(), "loops": res.loops,
           "isolated_middle": res.isolated_middle, "blobbed_loops": res.blobbed_loops}
    _emit(cfg, obj, pretty=repr(x))
    return 0


def cmd_table(cfg: JobConfig) -> int:
    spec = cfg.spec()
    _emit(cfg, alg.dumps_table(alg.structure(spec)))
    return 0


def _augmented(cfg: JobConfig) -> hom.AugmentedAlgebra:
    if cfg.family and cfg.family.lower() == "trivial":
        return hom.AugmentedAlgebra.trivial(cfg.ring)
    if cfg.family is None:
        if cfg.group is None:
            raise UsageError("give --family or --group")
        return hom.AugmentedAlgebra.from_group(cfg.group_spec(), cfg.ring)
    spec = cfg.spec()
    if cfg.quotient is not None:
        try:
            return hom.AugmentedAlgebra.from_quotient(alg.QuotientSpec(spec, cfg.quotient))
        except ValueError as e:
            raise UsageError(str(e)) from e
    return hom.AugmentedAlgebra.from_spec(spec)


def _graded_rows(t: hom.GradedInvariants, e: hom.GradedInvariants) -> list:
    rows = [["degree", "tor", "ext"]]
    for k in range(len(t)):
        rows.append([k, t[k].describe(t.ring), e[k].describe(e.ring)])
    return rows


def cmd_homology(cfg: JobConfig) -> int:
    A = _augmented(cfg)
    t, e = hom.tor_ext(A, cfg.D, budget=cfg.budget, threads=cfg.threads)
    rows = _graded_rows(t, e)
    pretty = A.label + "\n" + "\n".join(f"{a:>6}  {b:<16} {c}" for a, b, c in rows)
    _emit(cfg, hom.result_json(A, cfg.D, t, e), rows, pretty)
    return 0


def cmd_tate(cfg: JobConfig) -> int:
    A = _augmented(cfg) if cfg.family else None
    G = cfg.group_spec()
    try:
        tab = tate.tate_table(A, G, cfg.D, cfg.ring, budget=cfg.budget) if A else tate.tate_group(G, cfg.D, cfg.ring)
    except tate.NotGCentred as exc:
        print(f"not {G}-centred: {exc}", file=sys.stderr)
        return 1
    rows = [["degree", "group"]] + [[p, g.describe(cfg.ring)] for p, g in tab.items()]
    _emit(cfg, tab.dumps(), rows, tab.pretty())
    return 0


def cmd_idempotents(cfg: JobConfig) -> int:
    spec = cfg.spec()
    reports = idem.verify_all(spec)
    lines = [json.dumps(r.to_json(), sort_keys=True) for r in reports]
    _emit(cfg, "\n".join(lines) if lines else "")
    return 0 if all(r.ok for r in reports) else 1


# ---------------------------------------------------------------------------
# Theorem registry


@dataclass(frozen=True)
class Theorem:
    id: str
    anchor: str
    summary: str
    defaults: dict
    hypothesis: Callable[[alg.AlgebraSpec], bool]
    target: Callable[[alg.AlgebraSpec], alg.GroupSpec]
    quotient: int | None = None


def _unit(spec, *names):
    return all(spec.ring.is_unit(spec.param(n)) for n in names)


def _odd(spec):
    return spec.n % 2 == 1


def _sym(spec):
    return alg.Symmetric(spec.n)


def _triv(spec):
    return alg.Trivial


def _walled(spec):
    return alg.ProductSymmetric(spec.family.r, spec.family.s)


REGISTRY: dict[str, Theorem] = {t.id: t for t in [
    Theorem("rb-invertible", "globally isomorphic to the (co)homology of the symmetric group",
            "rook-Brauer with delta, epsilon invertible matches S_n",
            dict(family="rb", n=2, delta=1, epsilon=1), lambda s: _unit(s, "delta", "epsilon"), _sym),
    Theorem("motzkin-vanishing", "k & ⋆=0", "Motzkin with delta, epsilon invertible is acyclic",
            dict(family="motzkin", n=2, delta=1, epsilon=1), lambda s: _unit(s, "delta", "epsilon"), _triv),
    Theorem("tl-quotient", "TL_n(δ)/(TL_n(δ) ∩ I_0)", "Temperley-Lieb modulo I_0 is acyclic for n > 1",
            dict(family="tl", n=2, delta=0), lambda s: s.n > 1, _triv, quotient=0),
    Theorem("tl-odd", "In particular, if n is odd", "Temperley-Lieb with n odd is acyclic",
            dict(family="tl", n=3, delta=0), _odd, _triv),
    Theorem("brauer-quotient", "B_n(δ)/(B_n(δ) ∩ I_0)", "Brauer modulo I_0 matches S_n for n > 1",
            dict(family="brauer", n=2, delta=0), lambda s: s.n > 1, _sym, quotient=0),
    Theorem("brauer-odd", "In particular, if n is odd", "Brauer with n odd matches S_n",
            dict(family="brauer", n=3, delta=0), _odd, _sym),
    Theorem("brauer-invertible", "when the parameter δ is invertible", "Brauer with delta invertible matches S_n",
            dict(family="brauer", n=2, delta=1), lambda s: _unit(s, "delta"), _sym),
    Theorem("rook", "if ε is invertible", "rook with epsilon invertible matches S_n",
            dict(family="rook", n=2, epsilon=1), lambda s: _unit(s, "epsilon"), _sym),
    Theorem("planar-rook", "PR_n(ε)/(PR_n(ε) ∩ I_{n-1}) ≅ k", "planar rook with epsilon invertible is acyclic",
            dict(family="planar-rook", n=3, epsilon=1), lambda s: _unit(s, "epsilon"), _triv),
    Theorem("thm-walled", "with δ invertible", "walled Brauer with delta invertible matches S_r x S_s",
            dict(family="walled", r=1, s=1, delta=1), lambda s: _unit(s, "delta"), _walled),
    Theorem("thm-walled-odd", "r+s is odd", "walled Brauer with r+s odd matches S_r x S_s",
            dict(family="walled", r=1, s=2, delta=0), lambda s: (s.family.r + s.family.s) % 2 == 1, _walled),
    Theorem("walled-quotient", "B_{r,s}(δ)/I_0", "walled Brauer modulo I_0 matches S_r x S_s",
            dict(family="walled", r=1, s=1, delta=0), lambda s: s.n > 1, _walled, quotient=0),
    Theorem("blob-invertible", "if both δ and γ are invertible", "blob with delta, gamma invertible is acyclic",
            dict(family="blob", n=2, delta=1, gamma=1), lambda s: _unit(s, "delta", "gamma"), _triv),
    Theorem("blob-quotient", "Bl_n(δ,γ)/𝓘_0", "blob modulo I_0 with gamma invertible is acyclic",
            dict(family="blob", n=2, delta=0, gamma=1), lambda s: _unit(s, "gamma"), _triv, quotient=0),
    Theorem("blob-odd", "k & ⋆=0", "blob with gamma invertible and n odd is acyclic",
            dict(family="blob", n=3, delta=0, gamma=1, ring="z2"), lambda s: _unit(s, "gamma") and _odd(s), _triv),
    Theorem("dilute", "Let δ be invertible in k", "dilute Temperley-Lieb with delta invertible is acyclic",
            dict(family="dtl", n=2, delta=1, ring="q"), lambda s: _unit(s, "delta"), _triv),
]}

SPECIAL = {
    "rb-remark": ("an equality e_1ρ_1e_1=εe_1", "e1 rho1 e1 equals epsilon e1 in RB_2"),
    "tate": ("true more or less by construction", "Tate table of a G-centred algebra equals that of G"),
}


def _fill_defaults(cfg: JobConfig, defaults: dict) -> JobConfig:
    if cfg.family is None:
        cfg.family = defaults.get("family")
        for key in ("n", "r", "s"):
            if getattr(cfg, key) is None and key in defaults:
                setattr(cfg, key, defaults[key])
        for key in ("delta", "epsilon", "gamma"):
            if key in defaults:
                cfg.params.setdefault(key, defaults[key])
        if "ring" in defaults and not cfg.extra.get("ring_explicit"):
            cfg.ring = RingSpec.parse(defaults["ring"])
        if "group" in defaults and cfg.group is None:
            cfg.group = defaults["group"]
    return cfg


def _rb_remark(cfg: JobConfig) -> tuple[bool, dict]:
    cfg = _fill_defaults(cfg, dict(family="rb", n=2, delta=2, epsilon=3))
    spec = cfg.spec()
    if spec.family.kind != "RB" or spec.n < 2:
        raise UsageError("rb-remark needs a rook-Brauer algebra with n >= 2")
    n = spec.n
    rest = [(i, -i) for i in range(3, n + 1)]
    e1 = Diagram.from_edges(n, [(1, 2), (-1, -2)] + rest)
    rho1 = Diagram.from_edges(n, [(2, -2)] + rest)
    E = alg.AlgebraElement.basis_element(spec, e1)
    R = alg.AlgebraElement.basis_element(spec, rho1)
    lhs = E * R * E
    rhs = E.scale(spec.epsilon)
    return lhs == rhs, {"algebra": spec.label(), "lhs": lhs.to_json(), "rhs": rhs.to_json()}


def _tate_check(cfg: JobConfig) -> tuple[bool, dict]:
    cfg = _fill_defaults(cfg, dict(family="rook", n=2, epsilon=1, group="S2"))
    A = _augmented(cfg)
    G = cfg.group_spec()
    try:
        tab = tate.tate_table(A, G, cfg.D, cfg.ring, budget=cfg.budget)
    except tate.NotGCentred as exc:
        return False, {"algebra": A.label, "refused": str(exc)}
    ref = tate.tate_group(G, cfg.D, cfg.ring)
    return tab == ref, {"algebra": A.label, "group": str(G), "table": tab.to_json(), "reference": ref.to_json()}


def _run_theorem(th: Theorem, cfg: JobConfig) -> tuple[bool, dict]:
    cfg = _fill_defaults(cfg, th.defaults)
    spec = cfg.spec()
    if not th.hypothesis(spec) and not cfg.extra.get("force"):
        raise UsageError(f"{spec.label()} does not satisfy the hypotheses of {th.id}")
    quotient = cfg.quotient if cfg.quotient is not None else th.quotient
    A = hom.AugmentedAlgebra.from_spec(spec) if quotient is None else \
        hom.AugmentedAlgebra.from_quotient(alg.QuotientSpec(spec, quotient))
    G = th.target(spec)
    rep = hom.g_centred_check(A, G, cfg.D, budget=cfg.budget, threads=cfg.threads)
    return rep.agree, {"algebra": A.label, "group": str(G), "rows": rep.rows}


def cmd_verify(cfg: JobConfig) -> int:
    if cfg.extra.get("list"):
        items = {k: {"anchor": t.anchor, "summary": t.summary} for k, t in REGISTRY.items()}
        items.update({k: {"anchor": a, "summary": s} for k, (a, s) in SPECIAL.items()})
        _emit(cfg, items, pretty="\n".join(f"{k:20} {v['summary']}" for k, v in sorted(items.items())))
        return 0
    tid = cfg.extra.get("theorem")
    if tid is None:
        raise UsageError("name a theorem id or pass --list")
    if tid == "rb-remark":
        ok, details = _rb_remark(cfg)
        anchor = SPECIAL[tid][0]
    elif tid == "tate":
        ok, details = _tate_check(cfg)
        anchor = SPECIAL[tid][0]
    elif tid in REGISTRY:
        ok, details = _run_theorem(REGISTRY[tid], cfg)
        anchor = REGISTRY[tid].anchor
    else:
        raise UsageError(f"unknown theorem id {tid!r}; see verify --list")
    obj = {"theorem": tid, "anchor": anchor, "ring": cfg.ring.token(), "D": cfg.D, "pass": ok, "details": details}
    _emit(cfg, obj, pretty=f"{'PASS' if ok else 'FAIL'} {tid} ({details.get('algebra', '')})")
    return 0 if ok else 1


COMMANDS = {
    "enumerate": cmd_enumerate,
    "multiply": cmd_multiply,
    "table": cmd_table,
    "homology": cmd_homology,
    "verify": cmd_verify,
    "tate": cmd_tate,
    "idempotents": cmd_idempotents,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        cfg = config_from_args(args)
        cfg.extra["ring_explicit"] = "--ring" in argv or _env("ring") is not None
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ValueError, SizeTooLarge, hom.BudgetExceeded, NotInvertible) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

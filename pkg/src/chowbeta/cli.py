"""Command-line front end.

    chowbeta <command> --spec problem.yaml [--m-range a..b] [--level M]
             [--grid N] [--tol x] [--out path] [--format text|structured]

Exit status: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .chow import chow_weights, hilbert_polynomial, WeightVector
from .errors import ChowBetaError
from .exact_algebra import format_rational, hilbert_function
from .filtration import (
    a_max_estimate,
    discrete_measure,
    expectation,
    filtered_embedding,
    vanishing_numbers,
)
from .kernels import BACKEND
from .okounkov import (
    concave_transform,
    concavity_defect,
    default_grid,
    integrate_pl,
    okounkov_body,
)
from .parsing import SpecError, parse_m_range, parse_spec
from .volumes import beta_report, expectation_identity, seshadri_bounds

COMMANDS = ("hilbert", "chow", "vanishing", "measure", "body", "transform", "beta", "seshadri", "verify")
DECIMAL_DIGITS = 6

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


def exact(x) -> str:
    return format_rational(Fraction(x))


def decimal(x, digits: int = DECIMAL_DIGITS) -> dict:
    return {"decimal": f"{float(x):.{digits}f}", "digits": digits}


class Report:
    def __init__(self, command: str, spec_name: str, config: dict):
        self.data = {"command": command, "spec": spec_name, "config": config,
                     "values": {}, "checks": [], "files": []}

    def value(self, name, v):
        self.data["values"][name] = v

    def check(self, name, passed, lhs, rhs):
        fmt = lambda x: exact(x) if isinstance(x, (int, Fraction)) else f"{float(x):.{DECIMAL_DIGITS}f}"
        self.data["checks"].append({"name": name, "passed": bool(passed), "lhs": fmt(lhs), "rhs": fmt(rhs)})

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.data["checks"])

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        lines = [f"command: {self.data['command']}", f"spec: {self.data['spec']}"]
        for k, v in self.data["values"].items():
            lines.append(f"{k} = {_text(v)}")
        for c in self.data["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"[{mark}] {c['name']}: {c['lhs']} vs {c['rhs']}")
        for f in self.data["files"]:
            lines.append(f"wrote {f}")
        return "\n".join(lines) + "\n"


def _text(v) -> str:
    if isinstance(v, dict) and set(v) == {"decimal", "digits"}:
        return v["decimal"]
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_text(x) for x in v) + "]"
    return str(v)


# -- data files ------------------------------------------------------------

def body_table(body) -> str:
    lines = [f"# okounkov-body d={body.dim} M={body.sample_level}"]
    for v in body.vertices:
        lines.append(" ".join(exact(c) for c in v))
    return "\n".join(lines) + "\n"


def transform_table(G, N: int) -> str:
    """Vertex coordinates, then simplices as vertex indices, then one value per vertex."""
    lines = [f"# concave-transform d={G.dim} M={G.sample_level} N={N}",
             f"# vertices {len(G.vertices)}"]
    lines += [" ".join(exact(c) for c in v) for v in G.vertices]
    lines.append(f"# simplices {len(G.simplices)}")
    lines += [" ".join(str(i) for i in s) for s in G.simplices]
    lines.append(f"# values {len(G.values)}")
    lines += [exact(v) for v in G.values]
    return "\n".join(lines) + "\n"


def read_table(text: str) -> dict:
    """Parse a body or transform table back into exact data."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split()
    kind = header[1]
    meta = dict(tok.split("=") for tok in header[2:])
    if kind == "okounkov-body":
        verts = [tuple(Fraction(x) for x in ln.split()) for ln in lines[1:]]
        return {"kind": kind, "meta": meta, "vertices": verts}
    out = {"kind": kind, "meta": meta, "vertices": [], "simplices": [], "values": []}
    section = None
    for ln in lines[1:]:
        if ln.startswith("#"):
            section = ln.split()[1]
        elif section == "simplices":
            out["simplices"].append(tuple(int(x) for x in ln.split()))
        elif section == "values":
            out["values"].append(Fraction(ln.strip()))
        else:
            out["vertices"].append(tuple(Fraction(x) for x in ln.split()))
    return out


# -- commands --------------------------------------------------------------

def _cfg(spec, args) -> dict:
    m_range = parse_m_range(args.m_range) if args.m_range else tuple(spec.param("m_range"))
    return {
        "m_range": m_range,
        "M": args.level if args.level is not None else spec.param("M"),
        "N": args.grid if args.grid is not None else spec.param("N"),
        "tol": args.tol if args.tol is not None else spec.param("tol"),
    }


def cmd_hilbert(spec, cfg, rep):
    X = spec.variety_spec()
    lo, hi = cfg["m_range"]
    rep.value("hilbert_function", {str(m): hilbert_function(X.ideal, m) for m in range(lo, hi + 1)})
    hp = hilbert_polynomial(X.ideal, cfg["m_range"], X.dim_hint)
    rep.value("hilbert_polynomial", [exact(c) for c in hp.coefficients])
    rep.value("dim_X", hp.degree)
    rep.value("degree_L_X", exact(hp.nlc(hp.degree)))


def _chow(spec, cfg):
    X = spec.variety_spec()
    if "weights" in spec.params:
        c = WeightVector(tuple(Fraction(str(w)) for w in spec.params["weights"]))
        ideal = X.ideal
    else:
        fe = filtered_embedding(X, spec.subscheme_spec())
        c, ideal = fe.weights, fe.variety.ideal
    return c, ideal, chow_weights(ideal, c, cfg["m_range"], X.dim_hint)


def cmd_chow(spec, cfg, rep):
    c, _, res = _chow(spec, cfg)
    rep.value("weights", [exact(x) for x in c.entries])
    rep.value("e_c", exact(res.e_c))
    rep.value("e_r", exact(res.e_r))
    rep.value("dim_X", res.dim_X)
    rep.value("degree_L_X", exact(res.degree_L_X))
    rep.value("normalized", exact(res.normalized))
    rep.value("s_polynomial", [exact(x) for x in res.s_polynomial.coefficients])
    rep.value("w_polynomial", [exact(x) for x in res.w_polynomial.coefficients])


def cmd_vanishing(spec, cfg, rep):
    X, Z = spec.variety_spec(), spec.subscheme_spec()
    lo, hi = cfg["m_range"]
    rep.value("vanishing_numbers", {str(m): list(vanishing_numbers(X, Z, m).numbers) for m in range(lo, hi + 1)})
    est = a_max_estimate(X, Z, cfg["m_range"])
    rep.value("a_max_estimate", exact(est.value))


def cmd_measure(spec, cfg, rep):
    X, Z = spec.variety_spec(), spec.subscheme_spec()
    lo, hi = cfg["m_range"]
    measures, exps = {}, {}
    for m in range(lo, hi + 1):
        mu = discrete_measure(vanishing_numbers(X, Z, m))
        measures[str(m)] = [[exact(s), exact(w)] for s, w in mu.atoms]
        exps[str(m)] = exact(expectation(mu))
    rep.value("measures", measures)
    rep.value("expectations", exps)


def _write(path, text, rep):
    Path(path).write_text(text)
    rep.data["files"].append(str(path))


def cmd_body(spec, cfg, rep, out=None):
    X = spec.variety_spec()
    body = okounkov_body(X, spec.flag_spec(), cfg["M"])
    rep.value("vertices", [[exact(c) for c in v] for v in body.vertices])
    rep.value("volume", exact(body.volume))
    rep.value("normalized_volume", exact(body.normalized_volume))
    if out:
        _write(out, body_table(body), rep)


def cmd_transform(spec, cfg, rep, out=None):
    X, Z = spec.variety_spec(), spec.subscheme_spec()
    flag = spec.flag_spec()
    grid = default_grid(a_max_estimate(X, Z, cfg["m_range"]).value, cfg["N"])
    G = concave_transform(X, Z, flag, cfg["M"], grid)
    body = okounkov_body(X, flag, cfg["M"])
    e = integrate_pl(G, body)
    rep.value("expectation", exact(e))
    rep.value("expectation_decimal", decimal(e))
    rep.value("vertices", len(G.vertices))
    rep.value("simplices", len(G.simplices))
    defect = concavity_defect(G)
    tol = float(grid[-1] / cfg["N"]) if grid[-1] else 0.0
    rep.check("concavity (midpoint defect <= grid step)", defect <= tol + 1e-12, defect, tol)
    if out:
        _write(out, transform_table(G, cfg["N"]), rep)


def _has_flag(spec) -> bool:
    try:
        spec.flag_spec()
        return True
    except ChowBetaError:
        return False


def cmd_beta(spec, cfg, rep):
    X, Z = spec.variety_spec(), spec.subscheme_spec()
    flag = spec.flag_spec() if _has_flag(spec) else None
    r = beta_report(X, Z, flag, cfg["m_range"], cfg["M"], cfg["N"])
    rep.value("beta_chow", exact(r.beta_chow))
    rep.value("beta_g", decimal(r.beta_g))
    rep.value("beta_g_band", decimal(r.beta_g_band))
    if r.beta_transform is not None:
        rep.value("beta_transform", decimal(r.beta_transform))
        rep.value("beta_transform_exact", exact(r.beta_transform))
    rep.value("vol_L", exact(r.vol_L))
    rep.value("a_max_used", exact(r.a_max_used))
    rep.value("t_eff", exact(r.t_eff))
    rep.value("e_c", exact(r.e_c))
    rep.value("inverse_m_coefficient", exact(r.inverse_m_coefficient))
    rep.value("discrepancies", {k: decimal(v) for k, v in r.discrepancies.items()})
    return r


def cmd_seshadri(spec, cfg, rep):
    X, Z = spec.variety_spec(), spec.subscheme_spec()
    eps = spec.params.get("known_epsilon")
    b = seshadri_bounds(X, Z, Fraction(str(eps)) if eps is not None else None, cfg["m_range"], strict=False)
    rep.value("upper", exact(b.upper))
    rep.value("upper_from_beta", exact(b.upper_from_beta))
    if b.upper_from_beta_point is not None:
        rep.value("upper_from_beta_point", exact(b.upper_from_beta_point))
    rep.value("beta", exact(b.beta))
    for name, passed, lhs, rhs in b.checks:
        rep.check(name, passed, lhs, rhs)


def cmd_verify(spec, cfg, rep):
    """Exact identity suite plus route agreement and any fixture expectations."""
    X, Z = spec.variety_spec(), spec.subscheme_spec()
    c, ideal, res = _chow(spec, cfg)
    lo, hi = cfg["m_range"]
    a_n = c.a_max
    d, deg = res.dim_X, res.degree_L_X
    for i, m in enumerate(range(lo, hi + 1)):
        lhs = res.w_values[i] + res.s_values[i]
        rhs = m * hilbert_function(ideal, m) * a_n
        rep.check(f"w(m,r) + s(m,c) = m Hilb(m) a_n [m={m}]", lhs == rhs, lhs, rhs)
    rep.check("e_c + e_r = (d+1) deg a_n", res.e_c + res.e_r == (d + 1) * deg * a_n,
              res.e_c + res.e_r, (d + 1) * deg * a_n)
    for m in range(lo, hi + 1):
        lhs, rhs = expectation_identity(X, Z, m)
        rep.check(f"E(nu_m) = s(m,c)/(m Hilb(m)) [m={m}]", lhs == rhs, lhs, rhs)
    flag = spec.flag_spec() if _has_flag(spec) else None
    r = beta_report(X, Z, flag, cfg["m_range"], cfg["M"], cfg["N"])
    tol = cfg["tol"]
    rep.value("beta_chow", exact(r.beta_chow))
    rep.value("beta_g", decimal(r.beta_g))
    rep.check("|beta_g - beta_chow| <= tol", r.discrepancies["g_vs_chow"] <= tol,
              r.discrepancies["g_vs_chow"], tol)
    if r.beta_transform is not None:
        rep.value("beta_transform", decimal(r.beta_transform))
        rep.check("|beta_transform - beta_chow| <= tol", r.discrepancies["transform_vs_chow"] <= tol,
                  r.discrepancies["transform_vs_chow"], tol)
    eps = spec.params.get("known_epsilon")
    if eps is not None:
        b = seshadri_bounds(X, Z, Fraction(str(eps)), cfg["m_range"], strict=False)
        for name, passed, lhs, rhs in b.checks:
            rep.check(name, passed, lhs, rhs)
    expected = spec.params.get("expected") or {}
    observed = {"beta": r.beta_chow, "e_c": res.e_c, "degree": Fraction(deg), "dim": Fraction(d)}
    for key, val in expected.items():
        if key not in observed:
            raise SpecError(f"unknown expected value {key!r}", key=f"params.expected.{key}")
        want = Fraction(str(val))
        rep.check(f"expected {key}", observed[key] == want, observed[key], want)


HANDLERS = {
    "hilbert": cmd_hilbert, "chow": cmd_chow, "vanishing": cmd_vanishing, "measure": cmd_measure,
    "body": cmd_body, "transform": cmd_transform, "beta": cmd_beta, "seshadri": cmd_seshadri,
    "verify": cmd_verify,
}


def fixture_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("chowbeta.fixtures").iterdir()
                  if p.name.endswith(".yaml"))


def load_spec_text(ref: str) -> tuple:
    """``ref`` is a path, or ``fixture:NAME`` for a bundled fixture."""
    if ref.startswith("fixture:"):
        name = ref.split(":", 1)[1]
        path = resources.files("chowbeta.fixtures") / f"{name}.yaml"
        if not path.is_file():
            raise SpecError(f"no bundled fixture {name!r}; available: {', '.join(fixture_names())}")
        return path.read_text(), name
    p = Path(ref)
    if not p.is_file():
        raise SpecError(f"spec file not found: {ref}")
    return p.read_text(), p.stem


def run(command: str, spec, cfg: dict, out: str | None = None) -> Report:
    if command not in HANDLERS:
        raise SpecError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    config = {"m_range": f"{cfg['m_range'][0]}..{cfg['m_range'][1]}", "M": cfg["M"], "N": cfg["N"],
              "tol": cfg["tol"]}
    rep = Report(command, spec.name, config)
    if command in ("body", "transform"):
        HANDLERS[command](spec, cfg, rep, out)
    else:
        HANDLERS[command](spec, cfg, rep)
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowbeta", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", required=True, help="problem file (YAML) or fixture:NAME")
    p.add_argument("--m-range", dest="m_range", help="degrees sampled, as a..b (default 1..8)")
    p.add_argument("--level", type=int, help="Okounkov level M (default 6)")
    p.add_argument("--grid", type=int, help="t-grid size N (default 32)")
    p.add_argument("--tol", type=float, help="route agreement tolerance (default 0.02)")
    p.add_argument("--out", help="data file for body/transform; report file otherwise")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        text, name = load_spec_text(args.spec)
        spec = parse_spec(text, name)
        cfg = _cfg(spec, args)
        for key in ("M", "N"):
            if cfg[key] < 1:
                raise SpecError(f"{key} must be positive")
        if cfg["tol"] <= 0:
            raise SpecError("tol must be positive")
    except SpecError as e:
        print(f"chowbeta: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = run(args.command, spec, cfg, args.out)
    except SpecError as e:
        print(f"chowbeta: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ChowBetaError as e:
        hint = " (hint: increase --m-range)" if "range" in str(e) else ""
        print(f"chowbeta: {type(e).__name__}: {e}{hint}", file=sys.stderr)
        return EXIT_CHECK
    text_out = rep.render(args.format)
    if args.out and args.command not in ("body", "transform"):
        Path(args.out).write_text(text_out)
    else:
        sys.stdout.write(text_out)
    return EXIT_OK if rep.ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())

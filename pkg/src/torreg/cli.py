"""Command-line front end.

    torreg variety hirz2.json
    torreg reg --variety hirz2.json --ideal ideal_I.json --window=-1,-1:11,11 --svg out.svg
    torreg powers --variety hirz2.json --ideal ideal_I.json --n 4
    torreg bounds --variety hirz2.json --degrees "1,1;0,2" --n 3
    torreg certify --variety hirz2.json --module module_rank3.json --start 0,4 --step=-1,0

Vectors with a leading minus sign need the ``--flag=value`` form.  Bare
file names that do not exist locally are looked up among the bundled data
files (hirz2.json, ideal_I.json, module_rank3.json, ...).

Exit status: 0 on success, 1 when a verification fails (the witness is
printed), 2 on bad input.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from importlib import resources

from .errors import (BudgetExceeded, InputError, SearchExhausted, TorregError,
                     UnsupportedError, VerificationFailure)
from .lattice import Window, add
from .regularity import (RegularityConfig, check_containment_bounds, is_d_regular,
                         nonregularity_certificate, reg_region)
from .ring import MonomialModule
from .toric import Fan, build_variety, fixture


@dataclass
class CommandConfig:
    subcommand: str
    variety: str = None
    ideal: str = None
    module: str = None
    window: Window = None
    n: int = 1
    oracle: str = "pattern"
    field: object = None
    svg: str = None
    caps: dict = dc_field(default_factory=dict)


def _read_json(path, what):
    if path is None:
        raise InputError("missing --%s" % what)
    try:
        if not os.path.exists(path):
            data = resources.files("torreg").joinpath("data", path)
            if data.is_file():
                return json.loads(data.read_text())
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError("no such %s file: %s" % (what, path)) from None
    except json.JSONDecodeError as exc:
        raise InputError("%s file is not valid JSON: %s" % (what, exc)) from None


def load_variety_arg(spec):
    """A fan JSON path, a bundled data file name, or a fixture name (H2, P1xP1)."""
    if spec is None:
        raise InputError("missing --variety")
    if not os.path.exists(spec) and not spec.endswith(".json"):
        return fixture(spec)
    return build_variety(Fan.from_json(_read_json(spec, "variety")), os.path.basename(spec))


def load_module_arg(variety, cfg):
    if cfg.ideal and cfg.module:
        raise InputError("give either --ideal or --module, not both")
    if cfg.ideal:
        data = _read_json(cfg.ideal, "ideal")
        if "gens" not in data:
            raise InputError("ideal JSON needs 'gens'")
        return MonomialModule.from_json(variety, data, os.path.basename(cfg.ideal))
    if cfg.module:
        return MonomialModule.from_json(variety, _read_json(cfg.module, "module"),
                                        os.path.basename(cfg.module))
    raise InputError("missing --ideal or --module")


def parse_field(text):
    if text in (None, "q", "Q"):
        return None
    try:
        p = int(text)
    except ValueError:
        raise InputError("--field must be q or a prime") from None
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise InputError("--field %d is not prime" % p)
    return p


def _vec(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError("bad vector %r" % text) from None


def default_window(module):
    """Bounding box of generator degrees padded by 2 * (sum of nef generators)."""
    X = module.variety
    rho = X.picard_rank
    degs = [tuple(g) for g in module.generator_degrees] or [(0,) * rho]
    pad = [2 * sum(c[k] for c in X.nef_gens) for k in range(rho)]
    lo = tuple(min(d[k] for d in degs) - pad[k] for k in range(rho))
    hi = tuple(max(d[k] for d in degs) + pad[k] for k in range(rho))
    return Window(lo, hi)


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _vecs(vs):
    return " ".join("(%s)" % ",".join(map(str, v)) for v in vs)


def cmd_variety(cfg, as_json=False):
    from .ring import monomial_str
    X = load_variety_arg(cfg.variety)
    out = X.summary()
    cx = X.chambers
    out["basis_variables"] = list(X.basis_vars)
    out["chambers"] = [[list(r) for r in c.rays] for c in cx.chambers]
    out["walls"] = [[list(r) for r in w.rays] for w, _ in cx.walls]
    if as_json:
        _emit(out)
        return 0
    print("variety: %s (Picard rank %d)" % (X.name, X.picard_rank))
    print("Pic basis: degrees of %s" % ", ".join("x%d" % i for i in X.basis_vars))
    print("degrees: " + _vecs(X.var_degrees))
    print("B = <%s>" % ", ".join(monomial_str(g) for g in X.irrelevant_generators))
    print("Nef rays: " + _vecs(X.nef.rays))
    print("Eff rays: " + _vecs(X.eff.rays))
    print("nef Hilbert basis: " + _vecs(X.nef_gens))
    for k, c in enumerate(cx.chambers):
        tag = " (Nef)" if k == cx.nef_index else ""
        print("chamber %d: cone%s%s" % (k, _vecs(c.rays), tag))
    for w, (i, j) in cx.walls:
        print("wall %d|%d: ray %s" % (i, j, _vecs(w.rays)))
    return 0


def _reg_config(cfg):
    pad = cfg.caps.get("pad")
    return RegularityConfig(pad=tuple(pad) if pad else None, field=cfg.field,
                            oracle=cfg.oracle, taylor_cap=cfg.caps.get("taylor_cap"))


def cmd_reg(cfg):
    X = load_variety_arg(cfg.variety)
    M = load_module_arg(X, cfg)
    W = cfg.window or default_window(M)
    if len(W.lower) != X.picard_rank:
        raise InputError("window rank %d does not match Picard rank %d"
                         % (len(W.lower), X.picard_rank))
    R = reg_region(M, W, _reg_config(cfg))
    out = R.to_json()
    out["check_window"] = [list(R.check_window.lower), list(R.check_window.upper)]
    out["bounds"] = check_containment_bounds(M, R).to_json()
    _emit(out)
    print("note: verdicts certified on window %s (cohomology checked on %s)"
          % (W, R.check_window), file=sys.stderr)
    if cfg.svg:
        if X.picard_rank != 2:
            print("note: SVG needs Picard rank 2; point list printed instead", file=sys.stderr)
        else:
            from .svg import render_staircase
            with open(cfg.svg, "w") as fh:
                fh.write(render_staircase(R.points, R.minima, X.nef, M.label))
    rep = out["bounds"]
    if not rep["eff_holds"] or (rep["nef_bound_applicable"] and not rep["nef_holds"]):
        print("FAIL: region escapes a proven translate bound: %s" % rep["violations"][:1],
              file=sys.stderr)
        return 1
    return 0


def cmd_powers(cfg):
    from .rees import verify_powers_theorem
    X = load_variety_arg(cfg.variety)
    if not cfg.ideal:
        raise InputError("powers needs --ideal")
    M = load_module_arg(X, cfg)
    if M.kind != "ideal":
        raise InputError("powers needs an ideal (no 'quotient' flag)")
    W = cfg.window or Window.square(-1, 11, X.picard_rank)
    reports = verify_powers_theorem(X, M.gens, cfg.n, W, cfg.caps.get("groebner_budget"))
    _emit([r.to_json() for r in reports])
    status = 0
    for r in reports:
        for name, ok in r.verdicts.items():
            print("n=%d %s %s" % (r.n, name, "PASS" if ok else "FAIL"), file=sys.stderr)
            if not ok:
                print("FAIL n=%d %s witness %s" % (r.n, name, list(r.witnesses[name])),
                      file=sys.stderr)
                status = 1
    return status


def cmd_bounds(cfg, degrees=None, a=None):
    from .rees import bounds_only, rees_resolution, shift_a
    X = load_variety_arg(cfg.variety)
    if degrees:
        P = [_vec(t) for t in degrees.split(";")]
        a = _vec(a) if a else None
    else:
        M = load_module_arg(X, cfg)
        if M.kind != "ideal":
            raise InputError("bounds needs an ideal or --degrees")
        P = [tuple(d) for d in M.generator_degrees]
        if a is None:
            a = shift_a(rees_resolution(X, M.gens, cfg.caps.get("groebner_budget")), X.nef)
        else:
            a = _vec(a)
    if any(len(p) != X.picard_rank for p in P):
        raise InputError("degree vectors must have length %d" % X.picard_rank)
    _emit([bounds_only(X, P, n, a) for n in range(1, cfg.n + 1)])
    return 0


def cmd_certify(cfg, start, step, count, verify=True):
    X = load_variety_arg(cfg.variety)
    M = load_module_arg(X, cfg)
    d = _vec(start)
    step = _vec(step)
    out, status = [], 0
    cap = cfg.caps.get("witness_cap", 16)
    for _ in range(count):
        entry = {"degree": list(d)}
        try:
            cert = nonregularity_certificate(M, d, cap=cap)
            entry["certificate"] = cert.to_json()
            if verify:
                W = Window(d, d)
                v = is_d_regular(M, d, W, _reg_config(cfg))
                entry["replay"] = v.status
                if v.regular:
                    print("FAIL: certificate at %s but the degree is regular on %s"
                          % (list(d), v.window), file=sys.stderr)
                    status = 1
        except (InputError, SearchExhausted) as exc:
            entry["inapplicable"] = str(exc)
        out.append(entry)
        d = add(d, step)
    _emit(out)
    return status


def build_parser():
    p = argparse.ArgumentParser(prog="torreg", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, module=True):
        sp.add_argument("--variety", help="fan JSON path or fixture name (H2, P1xP1, ...)")
        if module:
            sp.add_argument("--ideal", help="ideal JSON: {\"gens\": [[...], ...]}")
            sp.add_argument("--module", help="module JSON (gens/quotient or shifts/relations)")
        sp.add_argument("--window", help="x0,y0:x1,y1")
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--oracle", choices=("pattern", "taylor", "both"), default="pattern")
        sp.add_argument("--field", default="q", help="q or a prime")
        sp.add_argument("--svg")
        sp.add_argument("--caps", default="{}", help="JSON: pad, taylor_cap, groebner_budget, "
                        "witness_cap")

    v = sub.add_parser("variety", help="grading, irrelevant ideal, Nef/Eff, chambers")
    v.add_argument("path", nargs="?")
    common(v, module=False)
    v.add_argument("--json", action="store_true", help="machine-readable output")
    common(sub.add_parser("reg", help="regularity region and minima"))
    common(sub.add_parser("powers", help="check the bounds for reg(I^n), n = 1..N"))
    b = sub.add_parser("bounds", help="inner/outer bound translates only")
    common(b)
    b.add_argument("--degrees", help="generator degrees, e.g. \"1,1;0,2\"")
    b.add_argument("--a", help="upper bound of the Rees resolution shifts")
    c = sub.add_parser("certify", help="nonregularity certificates along a ray of degrees")
    common(c)
    c.add_argument("--start", required=True)
    c.add_argument("--step", required=True)
    c.add_argument("--count", type=int, default=5)
    c.add_argument("--no-verify", action="store_true")
    return p


def config_from_args(args):
    try:
        caps = json.loads(args.caps)
    except json.JSONDecodeError as exc:
        raise InputError("--caps is not valid JSON: %s" % exc) from None
    if not isinstance(caps, dict):
        raise InputError("--caps must be a JSON object")
    variety = args.variety or getattr(args, "path", None)
    if args.n < 1:
        raise InputError("--n must be positive")
    return CommandConfig(args.subcommand, variety, getattr(args, "ideal", None),
                         getattr(args, "module", None),
                         Window.parse(args.window) if args.window else None,
                         args.n, args.oracle, parse_field(args.field), args.svg, caps)


def run(args):
    cfg = config_from_args(args)
    if cfg.subcommand == "variety":
        return cmd_variety(cfg, args.json)
    if cfg.subcommand == "reg":
        return cmd_reg(cfg)
    if cfg.subcommand == "powers":
        return cmd_powers(cfg)
    if cfg.subcommand == "bounds":
        return cmd_bounds(cfg, args.degrees, args.a)
    return cmd_certify(cfg, args.start, args.step, args.count, not args.no_verify)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except VerificationFailure as exc:
        print("FAIL: %s" % exc)
        if exc.witness is not None:
            print("witness: %s" % json.dumps(exc.witness, sort_keys=True))
        return 1
    except UnsupportedError as exc:
        print("unsupported: %s" % exc, file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 2
    except InputError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except TorregError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

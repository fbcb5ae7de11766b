"""Command-line front end.

Exit codes: 0 definitive result, 1 usage or domain error, 2 search budget
exhausted without a verdict.
"""

from __future__ import annotations

import argparse
import cmath
import json
import sys
from typing import Optional

from graphprop import balls, graph as gcore, linalg, poly, resolvent, series, zoo
from graphprop.fields import ComplexApprox, field_make

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


# ---------------------------------------------------------------- helpers


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _graph(args):
    if not args.graph:
        raise CliError("usage", "--graph is required")
    return zoo.make_graph(args.graph)


def _vertex(args, g):
    return g.canonical(args.vertex) if args.vertex else g.root


def _exact(args):
    F = field_make(args.field)
    if not F.exact:
        raise CliError("domain", "this command needs an exact field")
    if args.lam is None:
        raise CliError("usage", "--lambda is required")
    return F, F.parse(args.lam)


def _complex(text: str) -> complex:
    if text is None:
        raise CliError("usage", "--lambda is required")
    return complex(ComplexApprox().parse(text))


def _cert_payload(result) -> dict:
    out = {"result": result.kind, "radius": result.radius}
    if hasattr(result, "certificate"):
        out["certificate"] = result.certificate.to_json()
    return out


# ---------------------------------------------------------------- commands


def cmd_ball(args) -> int:
    g = _graph(args)
    b = gcore.ball(g, _vertex(args, g), args.radius)
    if args.format == "dot":
        _emit(args, b.to_dot())
    elif args.format == "text":
        lines = [f"center {b.center} radius {b.radius}", f"interior ({len(b.interior)}): " + " ".join(b.interior),
                 f"closure ({len(b.closure)}): " + " ".join(b.closure)]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, _json(b.to_json()))
    return EXIT_OK


def cmd_classify(args) -> int:
    g = _graph(args)
    F, lam = _exact(args)
    res = balls.classify_vertex(g, F, lam, _vertex(args, g), args.rmax)
    if args.format == "text":
        _emit(args, f"{res.kind} (radius {res.radius})")
    else:
        _emit(args, _json(_cert_payload(res)))
    return EXIT_UNKNOWN if isinstance(res, balls.Unknown) else EXIT_OK


def cmd_radius(args) -> int:
    g = _graph(args)
    F, lam = _exact(args)
    fn = balls.radius_of_inconsistency if args.kind == "eigen" else balls.radius_of_propagator_inconsistency
    res = fn(g, F, lam, _vertex(args, g), args.rmax)
    if isinstance(res, balls.Finite):
        payload = {
            "result": "Finite",
            "radius": res.radius,
            "witness": [[linalg._jsonable(tag), F.format(b)] for tag, b in res.witness_rows()],
        }
        code = EXIT_OK
    else:
        payload = {"result": "AtLeast", "radius": res.radius}
        code = EXIT_UNKNOWN
    _emit(args, _json(payload) if args.format != "text" else f"{payload['result']} {payload['radius']}")
    return code


def cmd_propagator(args) -> int:
    g = _graph(args)
    F, lam = _exact(args)
    v = _vertex(args, g)
    for r in range(args.rmax + 1):
        cert = balls.propagator_with_support_in(g, F, lam, gcore.bfs_layers(g, v, r), v)
        if cert is not None:
            _emit(args, _json({"result": "global", "radius": r, "certificate": cert.to_json()}))
            return EXIT_OK
    cert = balls.ball_propagator(g, F, lam, v, args.rmax)
    if cert is None:
        _emit(args, _json({"result": "none", "radius": args.rmax}))
        return EXIT_OK
    _emit(args, _json({"result": "ball", "radius": args.rmax, "certificate": cert.to_json()}))
    return EXIT_UNKNOWN


def cmd_eigen(args) -> int:
    g = _graph(args)
    F, lam = _exact(args)
    v = _vertex(args, g)
    for r in range(args.rmax + 1):
        cert = balls.eigenfunction_with_support_in(g, F, lam, gcore.bfs_layers(g, v, r), v)
        if cert is not None:
            if args.minimize:
                cert = balls.minimize_support(g, F, lam, cert)
            _emit(args, _json({"result": "found", "radius": r, "certificate": cert.to_json()}))
            return EXIT_OK
    _emit(args, _json({"result": "Unknown", "radius": args.rmax}))
    return EXIT_UNKNOWN


def cmd_series(args) -> int:
    g = _graph(args)
    v = _vertex(args, g)
    if args.nonbacktracking:
        rep = series.nonbacktracking_counts(g, v, args.nmax)
        if args.format == "json":
            _emit(args, _json({"identity_holds": rep.ok, "degree": rep.degree,
                               "counts": rep.counts.counts}))
        else:
            _emit(args, rep.counts.to_csv())
        return EXIT_OK if rep.ok else EXIT_ERROR
    table = series.path_counts(g, v, args.nmax)
    if args.format == "json":
        report = series.series_propagator_check(g, v, max(args.nmax, 1), table if args.nmax >= 1 else None)
        _emit(args, _json({"source": table.source, "n_max": table.n_max, "counts": table.counts,
                           "propagator_check": [[n, ok] for n, ok in report]}))
    else:
        _emit(args, table.to_csv())
    return EXIT_OK


def cmd_green(args) -> int:
    g = _graph(args)
    v = _vertex(args, g)
    w = g.canonical(args.target) if args.target else v
    val = series.eval_green(g, _complex(args.lam), v, w, eps=args.epsilon)
    if args.format == "text":
        _emit(args, f"{val.value.real:.12g} {val.value.imag:+.12g}i (tail <= {val.tail_bound:.3g})")
    else:
        _emit(args, _json(val.to_json()))
    return EXIT_OK


def cmd_resolvent(args) -> int:
    g = _graph(args)
    v = _vertex(args, g)
    w = g.canonical(args.target) if args.target else v
    lam = _complex(args.lam)
    approx = resolvent.truncated_resolvent(g, lam, v, args.radius)
    val = approx.value(w)
    payload = {
        "lambda": [lam.real, lam.imag],
        "source": v,
        "target": w,
        "radius": args.radius,
        "value": [val.real, val.imag],
        "cauchy_delta": approx.cauchy_delta,
    }
    if args.format == "csv":
        _emit(args, resolvent.scan_to_csv([resolvent.ScanRow(lam, val, approx.cauchy_delta)]))
    elif args.format == "text":
        _emit(args, f"{val.real:.12g} {val.imag:+.12g}i (cauchy_delta {approx.cauchy_delta:.3g})")
    else:
        _emit(args, _json(payload))
    return EXIT_OK


def parse_grid(text: str) -> list[complex]:
    """'circle:R:N' (N points on |z| = R), 'line:a:b:N', or comma-separated values."""
    if text.startswith("circle:"):
        _, radius, count = text.split(":")
        n = int(count)
        return [float(radius) * cmath.exp(2j * cmath.pi * k / n) for k in range(n)]
    if text.startswith("line:"):
        _, a, b, count = text.split(":")
        za, zb, n = _complex(a), _complex(b), int(count)
        return [za + (zb - za) * k / max(n - 1, 1) for k in range(n)]
    return [_complex(t) for t in text.split(",") if t.strip()]


def cmd_scan(args) -> int:
    g = _graph(args)
    v = _vertex(args, g)
    w = g.canonical(args.target) if args.target else v
    rows = resolvent.resolvent_scan(g, v, w, parse_grid(args.grid), args.radius, jobs=args.jobs)
    _emit(args, resolvent.scan_to_csv(rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.certificate) as fh:
        data = json.load(fh)
    if "certificate" in data:
        data = data["certificate"]
    spec = args.graph or data.get("graph")
    if not spec:
        raise CliError("usage", "certificate names no graph; pass --graph")
    g = zoo.make_graph(spec)
    try:
        balls.certificate_from_json(data, g)
    except linalg.VerificationError as exc:
        _emit(args, f"INVALID: {exc}")
        return EXIT_ERROR
    _emit(args, "OK")
    return EXIT_OK


def cmd_zoo(args) -> int:
    entries = zoo.zoo_entries()
    if args.format == "json":
        _emit(args, _json([{"name": e.name, "params": {k: str(v) for k, v in e.params.items()},
                            "origin": e.origin, "notes": e.notes} for e in entries]))
        return EXIT_OK
    lines = []
    for e in entries:
        params = ",".join(f"{k}={v}" for k, v in e.params.items())
        lines.append(f"{e.name}{':' + params if params else ''}  -- {e.origin}")
        lines.extend(f"    {note}" for note in e.notes)
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_minors(args) -> int:
    g = _graph(args)
    if not g.is_finite:
        raise CliError("domain", "minors need a finite graph")
    minors = linalg.char_matrix_minors(g.edges(), len(g.vertices), g.vertices)
    payload = {
        "all_nonzero": all(bool(m) for m in minors.values()),
        "minors": [[u, w, poly.to_str(m, "x")] for (u, w), m in minors.items()],
    }
    _emit(args, _json(payload))
    return EXIT_OK


def cmd_qxcheck(args) -> int:
    g = _graph(args)
    rep = series.qx_consistency_check(g, _vertex(args, g), args.rmax)
    payload = {"consistent": rep.ok, "radii": [{"r": r, "consistent": ok, "unknowns": n} for r, ok, n in rep.radii]}
    _emit(args, _json(payload))
    return EXIT_OK if rep.ok else EXIT_ERROR


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, fmt: str):
    p.add_argument("--graph", help="family spec, e.g. chain, tree3, blowup_p:p=3,base=chain, file:g.json")
    p.add_argument("--field", default="Q", help="Q, GF:p, nf:<monic poly>, Qx (default Q)")
    p.add_argument("--lambda", dest="lam", help="spectral parameter in the field's scalar grammar")
    p.add_argument("--vertex", help="vertex label (default: the family root)")
    p.add_argument("--rmax", type=int, default=6)
    p.add_argument("--epsilon", type=float, default=1e-10)
    p.add_argument("--format", choices=["json", "csv", "dot", "text"], default=fmt)
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphprop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, fmt="json"):
        p = sub.add_parser(name, help=help_)
        _add_common(p, fmt)
        p.set_defaults(func=func)
        return p

    add("ball", cmd_ball, "extract B(v, r)").add_argument("--radius", type=int, default=1)
    add("classify", cmd_classify, "Singular / Local / Unknown with certificate")
    add("radius", cmd_radius, "radius of (propagator) inconsistency").add_argument(
        "--kind", choices=["eigen", "propagator"], default="eigen")
    add("propagator", cmd_propagator, "finite-support propagator search")
    add("eigen", cmd_eigen, "finite-support eigenfunction search").add_argument("--minimize", action="store_true")
    p = add("series", cmd_series, "walk-count table", "csv")
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--nonbacktracking", action="store_true")
    add("green", cmd_green, "series Green's function value").add_argument("--target")
    p = add("resolvent", cmd_resolvent, "Dirichlet-truncated resolvent")
    p.add_argument("--radius", type=int, default=30)
    p.add_argument("--target")
    p = add("scan", cmd_scan, "resolvent over a lambda grid (CSV)", "csv")
    p.add_argument("--grid", required=True, help="circle:R:N, line:a:b:N or a comma list")
    p.add_argument("--radius", type=int, default=30)
    p.add_argument("--target")
    p.add_argument("--jobs", type=int, default=1)
    add("verify", cmd_verify, "re-check a certificate file").add_argument("certificate")
    p = add("zoo", cmd_zoo, "list graph families", "text")
    p.add_argument("action", choices=["list"])
    add("minors", cmd_minors, "order n-1 minors of A - xE")
    add("qxcheck", cmd_qxcheck, "consistency of the eigen-systems over Q(x) with lambda = x")
    return parser


def run(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; 2 is reserved for Unknown here
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except CliError as exc:
        msg = f"{exc.kind}: {exc}"
    except (series.DomainError, series.UnsupportedError) as exc:
        msg = f"domain: {exc}"
    except (gcore.LabelError, zoo.ZooError) as exc:
        msg = f"input: {exc}"
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        msg = f"input: {exc}"
    sys.stderr.write("error: " + msg.replace("\n", " ") + "\n")
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

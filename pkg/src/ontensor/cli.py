"""Command line front end.

Every subcommand computes its full result before touching the output
directory, then writes a CSV (plus optional SVG / JSON) and prints a short
summary. Errors map onto exit codes through ``OntensorError.exit_code``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import census, criticality, series, trees
from .errors import InternalInconsistency, OntensorError, ValidationError
from .graphs import (
    EdgeColoredGraph,
    bubble_kind,
    degree,
    faces,
    is_bipartite,
    parse_graph,
)
from .library import BUILTINS
from .melonics import find_melons, reduce

OUT_ENV = "ONTENSOR_OUT"
DEFAULT_OUT = "ontensor-out"


@dataclass
class RunConfig:
    command: str
    out: Path
    svg: bool = False
    json: bool = False
    params: dict = field(default_factory=dict)


@dataclass
class Artifact:
    """One command's result: a CSV table, a summary, optional plot data."""

    stem: str
    header: list[str]
    rows: list[list]
    summary: list[str]
    record: dict
    plot: dict | None = None


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _real(text: str) -> float:
    try:
        x = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    return x


def _positive(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {k}")
    return k


def _non_negative(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {k}")
    return k


def _triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated counts B,C,D")
    return tuple(_non_negative(p) for p in parts)


def load_graph(source: str) -> tuple[str, EdgeColoredGraph]:
    """A built-in name or a path to a graph record."""
    if source in BUILTINS:
        return source, parse_graph(source)
    path = Path(source)
    if not path.is_file():
        raise ValidationError(
            f"{source!r} is neither a built-in graph ({', '.join(sorted(BUILTINS))}) nor a file"
        )
    return path.stem, parse_graph(path.read_text())


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_analyze(p: dict) -> Artifact:
    name, g = load_graph(p["graph"])
    kinds = [bubble_kind(g, nodes) for nodes in g.bubbles()]
    summary = [
        f"graph: {name}",
        f"nodes: {g.node_count}  external legs: {len(g.external)}",
        f"bubbles: {', '.join(kinds)}",
        f"bipartite: {'yes' if is_bipartite(g) else 'no'}",
    ]
    record: dict = {
        "graph": name, "nodes": g.node_count, "external": len(g.external),
        "bubbles": kinds, "bipartite": is_bipartite(g),
    }
    header = [
        "section (text)", "color (exact int)", "index (exact int)", "length_or_v (exact int)",
        "e (exact int)", "f (exact int)", "k (exact int)",
    ]
    rows: list[list] = []
    if not g.is_closed:
        melons = find_melons(g)
        summary.append(f"open graph: {len(melons)} melon(s); degree needs a vacuum graph")
        record["melons"] = [m.kind for m in melons]
        for i, m in enumerate(melons):
            rows.append(["melon", "", i, m.kind, "", "", ""])
        return Artifact(f"analyze-{name}", header, rows, summary, record)

    d = degree(g)
    core = reduce(g)
    nontrivial = [(j.color, c.k) for j in d.jackets for c in j.components if c.k]
    for i, f in enumerate(faces(g)):
        rows.append(["face", f.color, i, f.length, "", "", ""])
    for j in d.jackets:
        for i, c in enumerate(j.components):
            rows.append(["jacket", j.color, i, c.v, c.e, c.f, c.k])
    lengths = dict(sorted(d.face_lengths().items()))
    summary += [
        f"faces: {d.F}  by length: {lengths}",
        "jackets (color: demigenus per component): "
        + "; ".join(f"{j.color}: {[c.k for c in j.components]}" for j in d.jackets),
        f"non-trivial jacket components: {len(nontrivial)}"
        + (f" ({', '.join(f'color {c} k={k}' for c, k in nontrivial)})" if nontrivial else ""),
        f"omega = {_fmt(d.omega)}  (both degree formulas agree: 2*omega = {d.omega2})",
        f"reduce: {core.verdict} after {core.p} type I and {core.q} type II contractions",
    ]
    record.update(
        faces=d.F, face_lengths={str(k): v for k, v in lengths.items()},
        jackets={str(j.color): [c.k for c in j.components] for j in d.jackets},
        omega=_fmt(d.omega), two_omega=d.omega2, verdict=core.verdict,
        contractions={"I": core.p, "II": core.q},
    )
    return Artifact(f"analyze-{name}", header, rows, summary, record)


def cmd_census(p: dict) -> Artifact:
    n1, n2 = p["n1"], p["n2"]
    rep = census.enumerate_vacuum(n1, n2, max_nodes=p["max_nodes"], workers=p["workers"])
    chk = census.census_theorem_check(rep)
    rows = [list(r) for r in census.census_rows(rep)]
    counts = {_fmt(k): v for k, v in rep.omega_counts.items()}
    summary = [
        f"configuration: n1={n1} n2={','.join(map(str, n2))} ({rep.node_count} nodes)",
        f"connected classes: {rep.class_count}  by omega: {counts}",
        f"labelled matchings: {rep.labelled_total} (disconnected {rep.disconnected}),"
        f" expected {rep.expected_total}",
        f"theorem checks: {'pass' if chk.passed else 'FAIL'}",
    ] + [f"  {f}" for f in chk.failures[:10]]
    record = {
        "n1": n1, "n2": list(n2), "classes": rep.class_count, "omega_counts": counts,
        "labelled_total": rep.labelled_total, "disconnected": rep.disconnected,
        "checks_passed": chk.passed, "failures": chk.failures,
    }
    plot = {
        "kind": "bar", "title": f"census n1={n1} n2={n2}", "xlabel": "omega",
        "ylabel": "classes", "x": [float(k) for k in rep.omega_counts],
        "series": {"classes": list(rep.omega_counts.values())},
    }
    art = Artifact(f"census-{n1}-{'-'.join(map(str, n2))}", census.CSV_HEADER, rows, summary,
                   record, plot)
    if not chk.passed:
        raise _Failed(art)
    return art


def cmd_trees(p: dict) -> Artifact:
    pp, q = p["p"], p["q"]
    brute = trees.enumerate_trees(pp, q, budget=p["budget"])
    closed = series.c_pq(pp, q)
    ok = brute == closed
    summary = [
        str(brute),
        f"closed form (4p+2q)!/(p! q! (3p+q+1)!) = {closed}: {'match' if ok else 'MISMATCH'}",
    ]
    rows = [[pp, q, brute, closed]]
    header = ["p (exact int)", "q (exact int)", "brute_force_count (exact int)", "closed_form (exact int)"]
    art = Artifact(f"trees-{pp}-{q}", header, rows, summary,
                   {"p": pp, "q": q, "count": brute, "closed_form": closed})
    if not ok:
        raise _Failed(art, code=4)
    return art


def cmd_series(p: dict) -> Artifact:
    order, mu = p["order"], p["mu"]
    alpha = series.alpha_values(order, mu)
    via_series = series.glo_series(order).at(mu)
    if [Fraction(a) for a in alpha] != [Fraction(b) for b in via_series]:
        raise InternalInconsistency("alpha_n from the closed form and from the fixed point differ")
    h = series.h_values(order, mu)
    flo = series.flo_series(order).at(mu) if order >= 1 else [0]
    header = ["n (exact int)", "alpha_n (exact rational)", "h_n (exact rational)", "F_LO_n (exact rational)"]
    rows = [[n, _fmt(Fraction(alpha[n])), _fmt(Fraction(h[n])), _fmt(Fraction(flo[n]))]
            for n in range(order + 1)]
    summary = [
        f"mu = {_fmt(mu)}, orders 0..{order}",
        "alpha_n: closed form agrees with the fixed-point series",
    ] + [f"  n={r[0]}: alpha={r[1]}  h={r[2]}  F_LO={r[3]}" for r in rows[: min(len(rows), 8)]]
    pos = [n for n in range(1, order + 1) if alpha[n] > 0 and h[n] > 0]
    plot = {
        "kind": "line", "title": f"coefficients at mu={_fmt(mu)}", "xlabel": "n",
        "ylabel": "log coefficient", "x": pos,
        "series": {
            "log alpha_n": [_log(alpha[n]) for n in pos],
            "log h_n": [_log(h[n]) for n in pos],
        },
    }
    record = {"mu": _fmt(mu), "order": order, "rows": rows}
    return Artifact(f"series-{order}", header, rows, summary, record, plot)


def cmd_critical(p: dict) -> Artifact:
    pts = criticality.critical_curve(p["mu_min"], p["mu_max"], p["step"])
    header = [
        "mu (float)", "G_c (float)", "g_c (float)", "inverse_g_c (float)", "K (float)",
        "K_over_2sqrtpi (float)", "in_domain (0/1 flag)",
    ]
    norm = 2 * math.sqrt(math.pi)
    rows = [
        [c.mu, c.G_c, c.g_c, c.growth, c.K, c.K / norm, int(c.in_domain)] for c in pts
    ]
    summary = [f"{len(pts)} points on [{p['mu_min']}, {p['mu_max']}]"] + [
        f"  mu={c.mu:g}: G_c={c.G_c:.10f} g_c={c.g_c:.10f} 1/g_c={c.growth:.6f}"
        f" K/(2 sqrt(pi))={c.K / norm:.6f}"
        for c in pts
    ]
    plot = {
        "kind": "line", "title": "critical curve", "xlabel": "mu", "ylabel": "value",
        "x": [c.mu for c in pts],
        "series": {"1/g_c": [c.growth for c in pts], "G_c": [c.G_c for c in pts]},
    }
    record = {"points": [dict(zip(header, r)) for r in rows]}
    return Artifact("critical", header, rows, summary, record, plot)


def cmd_fit(p: dict) -> Artifact:
    mu, nmax, depth = p["mu"], p["nmax"], p["depth"]
    cp = criticality.critical_point(float(mu))
    seqs = {"alpha": series.alpha_values(nmax, mu), "h": series.h_values(nmax, mu)}
    header = [
        "sequence (text)", "n_max (exact int)", "growth (float)", "power (float)", "growth_residual (float)",
        "power_residual (float)", "inverse_g_c (float)",
    ]
    rows, summary = [], [f"mu = {_fmt(mu)}, n <= {nmax}, Richardson depth {depth}",
                         f"1/g_c = {cp.growth:.10f}"]
    for name, a in seqs.items():
        f = criticality.fit_exponents(a[1:], depth=depth)
        rows.append([name, nmax, f.growth, f.power, f.growth_residual, f.power_residual, cp.growth])
        summary.append(
            f"  {name}: growth={f.growth:.8f} (rel. dev. {abs(f.growth / cp.growth - 1):.2e})"
            f"  power={f.power:.6f}"
        )
    step = max(1, nmax // 200)
    ns = list(range(1, nmax + 1, step))
    lg = math.log(cp.g_c)
    plot = {
        "kind": "line", "title": f"coefficient decay at mu={_fmt(mu)}", "xlabel": "log n",
        "ylabel": "log(a_n g_c^n)", "x": [math.log(n) for n in ns],
        "series": {k: [_log(v[n]) + n * lg for n in ns] for k, v in seqs.items()},
    }
    record = {"mu": _fmt(mu), "fits": [dict(zip(header, r)) for r in rows]}
    return Artifact(f"fit-{nmax}", header, rows, summary, record, plot)


def _log(x) -> float:
    x = Fraction(x)
    return math.log(x.numerator) - math.log(x.denominator)


class _Failed(Exception):
    """A command produced its artifact but a built-in check failed."""

    def __init__(self, artifact: Artifact, code: int = 4):
        super().__init__(artifact.summary[-1])
        self.artifact = artifact
        self.code = code


COMMANDS = {
    "analyze": cmd_analyze,
    "census": cmd_census,
    "trees": cmd_trees,
    "series": cmd_series,
    "critical": cmd_critical,
    "fit": cmd_fit,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(art: Artifact) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(art.header)
    for row in art.rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def svg_text(plot: dict) -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "ontensor"
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in plot["series"].items():
        if plot["kind"] == "bar":
            ax.bar(plot["x"], ys, width=0.4, label=label)
        else:
            ax.plot(plot["x"], ys, marker=".", label=label)
    ax.set_title(plot["title"])
    ax.set_xlabel(plot["xlabel"])
    ax.set_ylabel(plot["ylabel"])
    ax.legend()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def emit(cfg: RunConfig, art: Artifact) -> list[Path]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    if not os.access(cfg.out, os.W_OK):
        raise ValidationError(f"output directory {cfg.out} is not writable")
    files = {cfg.out / f"{art.stem}.csv": csv_text(art)}
    if cfg.svg and art.plot is not None:
        files[cfg.out / f"{art.stem}.svg"] = svg_text(art.plot)
    if cfg.json:
        files[cfg.out / f"{art.stem}.json"] = json.dumps(art.record, indent=2, sort_keys=True) + "\n"
    for path, data in files.items():
        _atomic_write(path, data)
    return list(files)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None,
                        help=f"output directory (default: ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--svg", action="store_true", help="also write an SVG plot")
    common.add_argument("--json", action="store_true", help="also write a JSON summary")

    ap = argparse.ArgumentParser(prog="ontensor", description="Quartic O(N)^3 tensor model toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="faces, jackets, degree, core of a graph")
    a.add_argument("graph", help="built-in name or path to a graph record")

    c = sub.add_parser("census", parents=[common], help="vacuum graph census")
    c.add_argument("--n1", type=_non_negative, required=True, help="number of tetrahedra")
    c.add_argument("--n2", type=_triple, default=(0, 0, 0), help="pillows per color, B,C,D")
    c.add_argument("--max-nodes", type=_positive, default=census.DEFAULT_NODE_BUDGET)
    c.add_argument("--workers", type=_positive, default=1)

    t = sub.add_parser("trees", parents=[common], help="count plane trees")
    t.add_argument("--p", type=_non_negative, required=True)
    t.add_argument("--q", type=_non_negative, required=True)
    t.add_argument("--budget", type=_positive, default=trees.DEFAULT_TREE_BUDGET)

    s = sub.add_parser("series", parents=[common], help="exact coefficient tables at fixed mu")
    s.add_argument("--order", type=_non_negative, required=True)
    s.add_argument("--mu", type=_rational, required=True)

    k = sub.add_parser("critical", parents=[common], help="critical curve on a mu grid")
    k.add_argument("--mu-min", type=_real, required=True)
    k.add_argument("--mu-max", type=_real, required=True)
    k.add_argument("--step", type=_real, required=True)

    f = sub.add_parser("fit", parents=[common], help="growth and power fits")
    f.add_argument("--mu", type=_rational, required=True)
    f.add_argument("--nmax", type=_positive, required=True)
    f.add_argument("--depth", type=_positive, default=3)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    out = ns.out or Path(os.environ.get(OUT_ENV) or DEFAULT_OUT)
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "out", "svg", "json")}
    return RunConfig(ns.command, out, ns.svg, ns.json, params)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    status = 0
    try:
        art = COMMANDS[cfg.command](cfg.params)
    except _Failed as exc:
        art, status = exc.artifact, exc.code
    except OntensorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return exc.exit_code
    try:
        paths = emit(cfg, art)
    except OntensorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=stderr)
        return 2
    for line in art.summary:
        print(line, file=stdout)
    for path in paths:
        print(f"wrote {path}", file=stdout)
    if status:
        print(f"error: check failed in {cfg.command}", file=stderr)
    return status


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())

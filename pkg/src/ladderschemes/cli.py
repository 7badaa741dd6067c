"""Command-line entry point: enumeration, generation, series, bijections and verification.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from pathlib import Path

import click

from .stranded import code_hex, to_json


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _dump(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=1, sort_keys=True) + "\n", out)


def _schemes_json(schemes: dict) -> list[dict]:
    return [{"code": c.hex(), "graph": to_json(s)} for c, s in sorted(schemes.items())]


def census_csv(census) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["v", "g", "ell", "melon_free", "count"])
    for v, g, ell, free, count in census.rows():
        w.writerow([v, g, ell, int(free), count])
    return buf.getvalue()


def read_census_csv(text: str) -> list[tuple[int, int, int, bool, int]]:
    rows = csv.DictReader(io.StringIO(text))
    return [(int(r["v"]), int(r["g"]), int(r["ell"]), bool(int(r["melon_free"])), int(r["count"])) for r in rows]


@click.group()
def main() -> None:
    """Vanishing-grade graphs of the U(N)^2 x O(D) multi-matrix model."""


@main.command("enumerate")
@click.option("--vertices", "-v", type=int, required=True, help="Largest number of standard vertices.")
@click.option("--melon-free", is_flag=True, help="Also count melon-free graphs.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--bound", type=int, default=None, help="Override the oracle size cap.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def enumerate_cmd(vertices: int, melon_free: bool, threads: int, bound: int | None, out: str | None) -> None:
    """Brute-force census of rooted connected graphs by (v, g, ell)."""
    from .oracle import BoundExceeded, census

    try:
        c = census(vertices, melon_free=melon_free, workers=threads, bound=bound)
    except BoundExceeded as e:
        raise click.UsageError(str(e))
    _emit(census_csv(c), out)


@main.command()
@click.option("--genus", "-g", type=int, required=True)
@click.option("--two-pi", is_flag=True, help="Only 2PI schemes.")
@click.option("--dominant", is_flag=True, help="Only dominant schemes.")
@click.option("--cap", type=int, default=3, show_default=True, help="Longest explicit N-chain in the 2PI step.")
@click.option("--count", is_flag=True, help="Print the number of schemes only.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def schemes(genus: int, two_pi: bool, dominant: bool, cap: int, count: bool, out: str | None) -> None:
    """All vanishing-grade schemes of a genus."""
    from .dominant import is_dominant
    from .generate import generate_schemes

    if genus < 0:
        raise click.UsageError("genus must be non-negative")
    s = generate_schemes(genus, cap)
    chosen = s.schemes_2pi if two_pi else s.schemes
    if dominant:
        chosen = {c: x for c, x in chosen.items() if is_dominant(x)}
    if count:
        _emit(f"{len(chosen)}\n", out)
    else:
        _dump(_schemes_json(chosen), out)


@main.command()
@click.option("--genus", "-g", type=int, required=True)
@click.option("--max-vertices", "--vertices", "max_vertices", type=int, default=6, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def graphs(genus: int, max_vertices: int, out: str | None) -> None:
    """Melon-free vanishing-grade graphs of a genus up to a vertex budget."""
    from .generate import generate_level

    lev = generate_level(genus, max_vertices)
    _dump({"genus": genus, "max_vertices": max_vertices, "census": lev.census(),
           "graphs": [{"code": c.hex(), "graph": to_json(g)} for c, g in sorted(lev.graphs.items())]}, out)


@main.command()
@click.option("--genus", "-g", type=int, required=True)
@click.option("--order", "-k", type=int, required=True, help="Truncation order in lambda.")
@click.option("--two-pi", is_flag=True, help="Series of 2PI graphs only.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def gf(genus: int, order: int, two_pi: bool, out: str | None) -> None:
    """Exact generating function of rooted graphs of a genus."""
    from .generate import generate_schemes
    from .series import G_g, G_g_2pi, melonic_T, x_to_lambda
    from .stranded import cycle_graph

    if genus == 0:
        if two_pi:
            s = G_g_2pi([cycle_graph()], order)
        else:
            s = x_to_lambda(melonic_T(order // 2)).truncate(order)
    else:
        sch = generate_schemes(genus)
        s = G_g_2pi(list(sch.schemes_2pi.values()), order) if two_pi else G_g(list(sch.schemes.values()), order)
    _dump(s.to_json("lambda"), out)


@main.command()
@click.option("--genus", "-g", type=int, default=None)
@click.option("--list", "list_", is_flag=True, help="Print the decorated trees and schemes.")
@click.option("--count", is_flag=True, help="Print the closed-form count.")
@click.option("--series", is_flag=True, help="Triple-scaled series coefficients.")
@click.option("--order", "-k", type=int, default=20, show_default=True)
@click.option("--kappa", type=float, default=None, help="Evaluate D and <g> at this kappa.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def dominant(genus: int | None, list_: bool, count: bool, series: bool, order: int, kappa: float | None,
             out: str | None) -> None:
    """Dominant schemes, their trees, and the triple-scaled series D(kappa)."""
    from . import dominant as dm

    if series:
        s = dm.D_series(order)
        data = {"kappa_c": dm.KAPPA_C, "prefactor": dm.PREFACTOR, "coeffs_kappa2": s.coeffs.to_json("kappa^2")["coeffs"],
                "radius_estimate": s.radius() if order >= 10 else None}
        if kappa is not None:
            try:
                data.update({"kappa": kappa, "D": dm.D_closed(kappa), "mean_genus": dm.mean_genus(kappa)})
            except ValueError as e:
                raise click.UsageError(str(e))
        _dump(data, out)
        return
    if genus is None or genus < 1:
        raise click.UsageError("--genus >= 1 is required unless --series is given")
    if count:
        _emit(f"{dm.count_dominant(genus)}\n", out)
        return
    rows = []
    for t in dm.all_trees(genus):
        s = dm.tree_to_scheme(t)
        rows.append({"tree": str(t), "code": code_hex(s), "graph": to_json(s)} if list_ else {"tree": str(t)})
    _dump(rows, out)


@main.command()
@click.option("--n", "n", type=int, required=True, help="Half the number of vertices.")
@click.option("--list", "list_", is_flag=True, help="Print the dart involutions.")
@click.option("--bound", type=int, default=None, help="Override the map enumeration cap.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def maps(n: int, list_: bool, bound: int | None, out: str | None) -> None:
    """Rooted bridgeless planar cubic maps with 2n vertices."""
    from .maps2pi import MapBoundExceeded, count_cubic_maps, enumerate_cubic_maps

    try:
        ms = enumerate_cubic_maps(n, bound)
    except MapBoundExceeded as e:
        raise click.UsageError(str(e))
    data = {"n": n, "count": len(ms), "closed_form": count_cubic_maps(n)}
    if list_:
        data["maps"] = [list(m.alpha) for m in ms]
    _dump(data, out)


@main.command("two-pi")
@click.option("--genus", "-g", type=int, default=None)
@click.option("--count", is_flag=True, help="Closed-form count of 2PI-dominant schemes.")
@click.option("--list", "list_", is_flag=True, help="Schemes built from every decorated map.")
@click.option("--series", is_flag=True, help="Triple-scaled 2PI series coefficients.")
@click.option("--order", "-k", type=int, default=20, show_default=True)
@click.option("--kappa", type=float, default=None, help="Evaluate <g> and its variance at this kappa.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def two_pi(genus: int | None, count: bool, list_: bool, series: bool, order: int, kappa: float | None,
           out: str | None) -> None:
    """2PI-dominant schemes, spin maps and the series D~(kappa)."""
    from . import maps2pi as mp

    if series:
        data = {"kappa_c": mp.KAPPA_C, "coeffs_kappa2": mp.D_tilde_series(order).to_json("kappa^2")["coeffs"]}
        if order >= 20:
            data["critical"] = mp.critical_data(order)
        if kappa is not None:
            try:
                m1, m2 = mp.genus_moments(kappa)
            except ValueError as e:
                raise click.UsageError(str(e))
            data.update({"kappa": kappa, "mean_genus": m1, "second_moment": m2, "variance": m2 - m1 * m1})
        _dump(data, out)
        return
    if genus is None or genus < 1:
        raise click.UsageError("--genus >= 1 is required unless --series is given")
    if count or not list_:
        _emit(f"{mp.count_2pi_dominant(genus)}\n", out)
        return
    rows = []
    for sm in mp.spin_maps(genus):
        s = mp.map_to_scheme(sm)
        rows.append({"alpha": list(sm.cubic.alpha), "spins": list(sm.spins), "far": sm.far,
                     "code": code_hex(s), "graph": to_json(s)})
    _dump(rows, out)


@main.command()
@click.option("--suite", type=click.Choice(["invariants", "oracle", "schemes", "dominant", "two-pi", "series", "all"]),
              default="all", show_default=True)
@click.option("--fast", is_flag=True, help="Smaller bounds where a check allows it.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for report.json and report.txt.")
def verify(suite: str, fast: bool, out: str | None) -> None:
    """Run the end-to-end checks; exits 1 on any failure."""
    from .verify import run_verify

    report = run_verify(suite, fast)
    text = report.text()
    click.echo(text)
    if out:
        os.makedirs(out, exist_ok=True)
        Path(out, "report.json").write_text(json.dumps(report.to_json(), indent=1) + "\n")
        Path(out, "report.txt").write_text(text + "\n")
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":
    main()

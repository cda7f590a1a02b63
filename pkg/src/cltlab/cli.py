"""Command-line runner.

Subcommands: ``verify`` (the check suites), ``boundary`` (catalogue +
achronality), ``limits`` (scripted convergence cases), ``conformal``
(endpoint/pullback round trip), ``scri`` (null-infinity pipeline).  Each
writes a JSON report plus CSV sidecars, and renders figures next to them
unless ``--no-figures`` is given.  Exit status is 0 when every check
passed, otherwise the number of failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import cboundary as cb
from . import scri as sc
from . import setlimits as sl
from . import spacetimes as st
from .report import Report, write_catalogue_csv, write_profile_csv
from .scenario import Scenario, ScenarioError, load_scenario
from .suites import (
    build_boundary_catalogue,
    check_conformal_roundtrip,
    check_scri_pipeline,
    check_tauc_vs_closed_limit,
    run_suites,
    scripted_tauc_cases,
)

__all__ = ["main", "build_parser"]


def _echo(rec):
    print(f"{rec.status:4s}  {rec.id:36s} ({rec.timing_s:.2f}s)")


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("scenario", nargs="?", help="scenario TOML file")
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--resolution", type=float, help="override the grid spacing h")
    p.add_argument(
        "--window",
        nargs=4,
        type=float,
        metavar=("T0", "T1", "X0", "X1"),
        help="override the sampling window",
    )
    p.add_argument("--report", help="report JSON path (default <out>/report.json)")
    p.add_argument("--out", default="cltlab-out", help="output directory")
    p.add_argument("--emit-profiles", action="store_true", help="write per-entry profile CSVs")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cltlab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run the verification suites")
    _common_flags(verify)
    verify.add_argument(
        "--suite",
        choices=["finite", "continuum", "all"],
        default=None,
        help="which suite to run (default: scenario selection)",
    )
    for name, help_text in (
        ("boundary", "build the boundary catalogue and check achronality"),
        ("limits", "run the scripted convergence cases"),
        ("conformal", "endpoint/pullback round trip on the square"),
        ("scri", "null-infinity classification and regularity"),
    ):
        p = sub.add_parser(name, help=help_text)
        _common_flags(p)
    return ap


def _scenario_from(args) -> Scenario:
    if args.scenario:
        scn = load_scenario(args.scenario)
    else:
        scn = Scenario()
    window = None
    if args.window:
        t0, t1, x0, x1 = args.window
        window = ((t0, t1), (x0, x1))
    return scn.override(seed=args.seed, resolution=args.resolution, window=window)


def _finish(report: Report, args, default_name: str) -> int:
    out = Path(args.out)
    path = Path(args.report) if args.report else out / default_name
    report.write(path)
    failed = report.n_failed
    total = len(report.checks)
    print(f"{total - failed}/{total} checks passed; report: {path}")
    return min(failed, 120)


def _cmd_verify(args) -> int:
    scn = _scenario_from(args)
    if args.suite:
        suites = ("finite", "continuum") if args.suite == "all" else (args.suite,)
        scn = scn.override(suites=suites)
    report = run_suites(scn, echo=_echo)
    return _finish(report, args, "report.json")


def _cmd_boundary(args) -> int:
    scn = _scenario_from(args)
    report = Report(scenario=scn.describe(), seed=scn.seed)
    if scn.model == "vstrip":
        from .suites import build_vstrip_catalogue, check_vstrip_correspondence

        catalogue, cloud = build_vstrip_catalogue(scn)
        report.run(
            "interior-boundary-correspondence",
            "interior restriction is injective and class-preserving",
            lambda: check_vstrip_correspondence(scn),
            {"wall_band": "2h"},
        )
    elif scn.model == "mink2":
        catalogue, cloud = build_boundary_catalogue(scn)
        rep = cb.check_boundary_achronal(catalogue)
        report.run(
            "boundary-achronality",
            "boundary entries are pairwise unrelated",
            lambda: (rep.ok, {"pairs": rep.pairs_checked, "violations": rep.violations}),
        )
    else:
        print(f"boundary pipeline is defined for mink2 and vstrip, not {scn.model!r}", file=sys.stderr)
        return 2
    _echo(report.checks[-1])
    out = Path(args.out)
    refs = {}
    if args.emit_profiles:
        for entry in catalogue.entries:
            safe = entry.label.replace("<", "lt").replace("+", "plus")
            refs[entry.label] = f"profiles/{safe}.csv"
            write_profile_csv(entry.profile, out / refs[entry.label])
    table = write_catalogue_csv(catalogue, out / "catalogue.csv", refs)
    print(f"catalogue table: {table}")
    if not args.no_figures:
        from .figures import catalogue_figure

        fig = catalogue_figure(catalogue, out / "catalogue.png")
        print(f"figure: {fig}")
    return _finish(report, args, "boundary-report.json")


def _cmd_limits(args) -> int:
    scn = _scenario_from(args)
    report = Report(scenario=scn.describe(), seed=scn.seed)
    report.run(
        "tauc-vs-closed-limit",
        "profile convergence matches the metric closed limit",
        lambda: check_tauc_vs_closed_limit(scn),
        {"profile_tol": "2h", "closed_limit_radius": "h"},
    )
    _echo(report.checks[-1])
    out = Path(args.out)
    cases = scripted_tauc_cases(scn)
    trajectories = {}
    rows = []
    for i, (name, seq, S, _) in enumerate(cases):
        res = sl.tauc_converges(seq, S, tol=2 * scn.resolution)
        label = f"{name}-{i}"
        trajectories.setdefault(name, res.gaps)
        for n, g in enumerate(res.gaps, start=1):
            rows.append((label, n, g))
    import csv

    gaps_path = out / "gaps.csv"
    gaps_path.parent.mkdir(parents=True, exist_ok=True)
    with gaps_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["case", "n", "sup_gap"])
        for row in rows:
            w.writerow([row[0], row[1], repr(float(row[2]))])
    print(f"gap trajectories: {gaps_path}")
    if not args.no_figures:
        from .figures import gap_figure

        fig = gap_figure(trajectories, out / "gaps.png", tol=2 * scn.resolution)
        print(f"figure: {fig}")
    return _finish(report, args, "limits-report.json")


def _cmd_conformal(args) -> int:
    scn = _scenario_from(args)
    report = Report(scenario=scn.describe(), seed=scn.seed)
    report.run(
        "conformal-roundtrip",
        "endpoint pullbacks match curve pasts; rays hit the edges",
        lambda: check_conformal_roundtrip(scn),
        {"hausdorff": "3h", "endpoint_snap": "h/4"},
    )
    _echo(report.checks[-1])
    if not args.no_figures:
        ext = st.mink2_square_extension()
        umax = scn.window_t[1] - scn.window_x[0]
        params = np.linspace(-(umax - 1.0), umax - 1.0, scn.sizes["boundary_rays"])
        edges = sc.conformal_scri(ext, [float(c) for c in params])
        curves = [st.null_geodesic("u", float(c), domain=(-6.0, float("inf"))) for c in params]
        endpoints = cb.null_endpoint_check(ext, curves, scn.resolution).endpoints
        from .figures import square_figure

        fig = square_figure(edges, endpoints, Path(args.out) / "square.png")
        print(f"figure: {fig}")
    return _finish(report, args, "conformal-report.json")


def _cmd_scri(args) -> int:
    scn = _scenario_from(args)
    report = Report(scenario=scn.describe(), seed=scn.seed)
    report.run(
        "scri-pipeline",
        "classification exact; edge pullbacks, ampleness, past-completeness",
        lambda: check_scri_pipeline(scn),
        {"halfplane_collar": "2h"},
    )
    _echo(report.checks[-1])
    out = Path(args.out)
    catalogue, cloud = build_boundary_catalogue(scn)
    M = st.mink2()
    import math

    def counterpart(entry):
        """Edge point of the square matching the entry's family."""
        if entry.family is None:
            return [st.HALF_PI, st.HALF_PI] if entry.indicator.mask.all() else None
        fam, c = entry.family
        if fam == "u":
            return [math.atan(c), st.HALF_PI]
        return [st.HALF_PI, math.atan(c)]

    rows = []
    for entry in catalogue.entries:
        cls = sc.classify_boundary_ip(M, entry)
        rows.append(
            {
                "label": entry.label,
                "classification": cls.label,
                "family": entry.family[0] if entry.family else "",
                "parameter": float(entry.family[1]) if entry.family else None,
                "generators": [list(g) for g in cls.generators],
                "conformal_counterpart": counterpart(entry),
            }
        )
    import csv
    import json

    table = out / "classification.csv"
    table.parent.mkdir(parents=True, exist_ok=True)
    with table.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "classification", "family", "parameter", "conformal_counterpart"])
        for r in rows:
            cp = r["conformal_counterpart"]
            w.writerow(
                [
                    r["label"],
                    r["classification"],
                    r["family"],
                    r["parameter"],
                    "" if cp is None else f"({cp[0]:.6f},{cp[1]:.6f})",
                ]
            )
    (out / "classification.json").write_text(json.dumps(rows, indent=2) + "\n")
    print(f"classification table: {table}")
    if not args.no_figures:
        ext = st.mink2_square_extension()
        umax = scn.window_t[1] - scn.window_x[0]
        params = np.linspace(-(umax - 1.0), umax - 1.0, scn.sizes["boundary_rays"])
        edges = sc.conformal_scri(ext, [float(c) for c in params])
        from .figures import square_figure

        fig = square_figure(edges, [], out / "scri.png")
        print(f"figure: {fig}")
    return _finish(report, args, "scri-report.json")


_COMMANDS = {
    "verify": _cmd_verify,
    "boundary": _cmd_boundary,
    "limits": _cmd_limits,
    "conformal": _cmd_conformal,
    "scri": _cmd_scri,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except (sl.DomainError, sl.ToleranceError, st.ChartError, cb.ResolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

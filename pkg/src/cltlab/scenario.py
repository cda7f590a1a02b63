"""Scenario files: TOML sections describing a batch run.

A scenario pins the model, window, resolution, seed, suite selection and
the experiment sizes, so a run is reproducible from the file alone.  All
fields have defaults; an empty file is a valid scenario.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

__all__ = ["Scenario", "ScenarioError", "load_scenario", "DEFAULT_SIZES"]


class ScenarioError(ValueError):
    """Malformed scenario file."""


DEFAULT_SIZES = {
    "ip_seeds": 200,
    "completion_seeds": 200,
    "sequence_count": 500,
    "lipschitz_pairs": 1_000_000,
    "tauc_cases": 50,
    "chain_count": 100,
    "hstrip_chains": 100,
    "boundary_rays": 21,
    "vstrip_entries": 100,
    "roundtrip_chains": 50,
}


@dataclass(frozen=True)
class Scenario:
    name: str = "default"
    model: str = "mink2"
    seed: int = 7
    resolution: float = 0.02
    window_t: tuple[float, float] = (-2.0, 2.0)
    window_x: tuple[float, float] = (-2.0, 2.0)
    suites: tuple[str, ...] = ("finite", "continuum")
    sizes: dict = field(default_factory=lambda: dict(DEFAULT_SIZES))
    curves: tuple[dict, ...] = ()  # declared (kind, family/direction, offset, domain)
    regions: tuple[dict, ...] = ()  # declared primitive shapes plus combinators
    sequences: tuple[dict, ...] = ()  # declared convergence cases

    def describe(self) -> dict:
        return {
            "name": self.name,
            "model": self.model,
            "seed": self.seed,
            "resolution": self.resolution,
            "window": {"t": list(self.window_t), "x": list(self.window_x)},
            "suites": list(self.suites),
            "sizes": dict(self.sizes),
            "curves": [dict(c) for c in self.curves],
            "regions": [dict(r) for r in self.regions],
            "sequences": [dict(s) for s in self.sequences],
        }

    def override(self, *, seed=None, resolution=None, window=None, suites=None) -> "Scenario":
        out = self
        if seed is not None:
            out = replace(out, seed=int(seed))
        if resolution is not None:
            out = replace(out, resolution=float(resolution))
        if window is not None:
            (t0, t1), (x0, x1) = window
            out = replace(out, window_t=(float(t0), float(t1)), window_x=(float(x0), float(x1)))
        if suites is not None:
            out = replace(out, suites=tuple(suites))
        return out


def _expect(cond: bool, where: str, msg: str):
    if not cond:
        raise ScenarioError(f"{where}: {msg}")


def _pair(value, where) -> tuple[float, float]:
    _expect(isinstance(value, (list, tuple)) and len(value) == 2, where, "expected [lo, hi]")
    lo, hi = float(value[0]), float(value[1])
    _expect(lo < hi, where, "interval must be non-degenerate")
    return (lo, hi)


_CURVE_KEYS = {"name", "kind", "family", "offset", "base", "beta", "domain"}
_REGION_KINDS = {
    "rect",
    "past-cone",
    "future-cone",
    "halfplane",
    "band",
    "union",
    "intersection",
    "difference",
}


def _check_curve(c: dict, where: str) -> dict:
    _expect(isinstance(c, dict), where, "expected a table")
    for k in c:
        _expect(k in _CURVE_KEYS, f"{where}.{k}", "unknown curve field")
    kind = c.get("kind")
    _expect(kind in ("timelike", "null"), f"{where}.kind", "kind must be 'timelike' or 'null'")
    if kind == "null":
        _expect(c.get("family") in ("u", "v"), f"{where}.family", "null curves need family 'u' or 'v'")
        _expect(isinstance(c.get("offset"), (int, float)), f"{where}.offset", "numeric offset required")
    else:
        base = c.get("base", [0.0, 0.0])
        _expect(isinstance(base, list) and len(base) == 2, f"{where}.base", "base is [t, x]")
        beta = c.get("beta", 0.0)
        _expect(isinstance(beta, (int, float)) and abs(beta) < 1, f"{where}.beta", "|beta| < 1")
    dom = c.get("domain")
    if dom is not None:
        _expect(isinstance(dom, list) and len(dom) == 2, f"{where}.domain", "domain is [a, b]")
    return dict(c)


_REGION_FIELDS = {
    "rect": ("t", "x"),
    "past-cone": ("apex",),
    "future-cone": ("apex",),
    "halfplane": ("family", "c"),
    "band": ("axis", "range"),
}


def _check_region(r: dict, where: str, names: set) -> dict:
    _expect(isinstance(r, dict), where, "expected a table")
    kind = r.get("kind")
    _expect(kind in _REGION_KINDS, f"{where}.kind", f"kind must be one of {sorted(_REGION_KINDS)}")
    _expect(isinstance(r.get("name"), str) and r["name"], f"{where}.name", "regions need names")
    if kind in ("union", "intersection", "difference"):
        of = r.get("of")
        _expect(isinstance(of, list) and len(of) == 2, f"{where}.of", "combinators take two names")
        for n in of:
            _expect(n in names, f"{where}.of", f"unknown region {n!r} (declare operands first)")
    else:
        for fieldname in _REGION_FIELDS[kind]:
            _expect(fieldname in r, f"{where}.{fieldname}", f"{kind} regions need {fieldname!r}")
    return dict(r)


_SEQUENCE_KINDS = {"constant", "alternating", "monotone", "singleton"}


def _check_sequence(s: dict, where: str) -> dict:
    _expect(isinstance(s, dict), where, "expected a table")
    kind = s.get("kind")
    _expect(kind in _SEQUENCE_KINDS, f"{where}.kind", f"kind must be one of {sorted(_SEQUENCE_KINDS)}")
    _expect(isinstance(s.get("name"), str) and s["name"], f"{where}.name", "sequences need names")
    if kind in ("constant", "monotone"):
        _expect(isinstance(s.get("center"), (int, float)), f"{where}.center", "numeric center required")
    if kind == "alternating":
        cs = s.get("centers")
        _expect(isinstance(cs, list) and len(cs) == 2, f"{where}.centers", "two centers required")
    if kind == "singleton":
        rng = s.get("range", [20, 60])
        _expect(
            isinstance(rng, list) and len(rng) == 2 and rng[0] < rng[1],
            f"{where}.range",
            "range is [n0, n1] with n0 < n1",
        )
    return dict(s)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc

    known = {"scenario", "window", "suites", "sizes", "curves", "regions", "sequences"}
    for key in data:
        _expect(key in known, f"{path}:[{key}]", "unknown section")

    sc = data.get("scenario", {})
    name = str(sc.get("name", path.stem))
    model = str(sc.get("model", "mink2"))
    _expect(
        model in ("mink2", "hstrip", "vstrip", "square"),
        f"{path}:scenario.model",
        "model must be mink2, hstrip, vstrip or square",
    )
    seed = sc.get("seed", 7)
    _expect(isinstance(seed, int), f"{path}:scenario.seed", "seed must be an integer")
    resolution = float(sc.get("resolution", 0.02))
    _expect(resolution > 0, f"{path}:scenario.resolution", "resolution must be positive")

    win = data.get("window", {})
    window_t = _pair(win.get("t", [-2.0, 2.0]), f"{path}:window.t")
    window_x = _pair(win.get("x", [-2.0, 2.0]), f"{path}:window.x")

    suites = tuple(data.get("suites", {}).get("run", ["finite", "continuum"]))
    for s in suites:
        _expect(s in ("finite", "continuum"), f"{path}:suites.run", f"unknown suite {s!r}")

    sizes = dict(DEFAULT_SIZES)
    for k, v in data.get("sizes", {}).items():
        _expect(k in DEFAULT_SIZES, f"{path}:sizes.{k}", "unknown size key")
        _expect(isinstance(v, int) and v > 0, f"{path}:sizes.{k}", "sizes are positive integers")
        sizes[k] = v

    curves = tuple(
        _check_curve(c, f"{path}:curves[{i}]") for i, c in enumerate(data.get("curves", []))
    )
    region_names: set = set()
    regions = []
    for i, r in enumerate(data.get("regions", [])):
        checked = _check_region(r, f"{path}:regions[{i}]", region_names)
        region_names.add(checked["name"])
        regions.append(checked)
    sequences = tuple(
        _check_sequence(s, f"{path}:sequences[{i}]") for i, s in enumerate(data.get("sequences", []))
    )

    return Scenario(
        name=name,
        model=model,
        seed=seed,
        resolution=resolution,
        window_t=window_t,
        window_x=window_x,
        suites=suites,
        sizes=sizes,
        curves=curves,
        regions=tuple(regions),
        sequences=sequences,
    )

"""``juliasym`` command line.

Exit codes: 0 success / verified, 1 refuted or failed check, 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import imaging
from .dynamics import (escape_rate, escape_time_raster, ergodic_potential, general_escape_radius,
                       potential_difference, sample_julia)
from .errors import (DegenerateInput, InvalidExponents, InvalidWindow, JuliaSymError,
                     MissingEscapeRadius, ParseError)
from .isometry import apply_pairs
from .mcmullen import (McMullenParams, PARAM_MAX_ITER, classify_mcmullen_symmetries,
                       make_mcmullen, render_parameter_plane)
from .parser import parse_isometry, parse_map
from .rational import RationalMap
from .sphere import SpherePoint, r3_to_pairs
from .symmetry import (DEFAULT_CLASSIFY_SAMPLES, DEFAULT_MAX_ORDER, DEFAULT_TOL,
                       check_commutation, classify_symmetry_group, default_candidates,
                       shared_julia_criterion)

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
COMMANDS = ("render-julia", "render-param", "symmetries", "verify", "potential-check")
MIN_POTENTIAL_SAMPLES = 1000


@dataclass
class RunConfig:
    """Resolved settings for one command; omitted values are the documented defaults."""

    command: str
    map_spec: Optional[str] = None
    map_b: Optional[str] = None
    sigma: Optional[str] = None
    k: Optional[int] = None
    m: Optional[int] = None
    d: Optional[int] = None
    lam: Optional[str] = None
    window: tuple = (0.0, 0.0, 4.0)
    resolution: tuple = (400, 400)
    max_iter: Optional[int] = None
    seed: int = 0
    samples: Optional[int] = None
    tol: float = DEFAULT_TOL
    max_order: int = DEFAULT_MAX_ORDER
    escape_radius: Optional[float] = None
    points: int = 50
    format: str = "ppm"
    output_path: Optional[str] = None
    assume_non_exceptional: bool = True

    def __post_init__(self):
        self.window = tuple(float(t) for t in self.window)
        self.resolution = tuple(int(t) for t in self.resolution)
        if self.max_iter is None:
            self.max_iter = PARAM_MAX_ITER if self.command == "render-param" else 256
        if self.samples is None:
            self.samples = DEFAULT_CLASSIFY_SAMPLES if self.command == "symmetries" else 100_000

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["window"] = list(self.window)
        d["resolution"] = list(self.resolution)
        if isinstance(self.escape_radius, float) and math.isinf(self.escape_radius):
            d["escape_radius"] = "inf"
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        if d.get("escape_radius") == "inf":
            d["escape_radius"] = math.inf
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _window(text: str):
    try:
        cx, cy, w = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be cx,cy,w, got {text!r}") from None
    return (cx, cy, w)


def _resolution(text: str):
    try:
        W, H = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must be WxH, got {text!r}") from None
    return (W, H)


def _radius(text: str) -> float:
    if text.strip().lower() == "inf":
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"escape radius must be a number or inf, got {text!r}") from None


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes"):
        return True
    if text.lower() in ("0", "false", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="juliasym", description="Symmetries and pictures of Julia sets of rational maps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--map", dest="map_spec", help="map spec, e.g. 'z^2-1', 'mcmullen(2,2,1)', 'newton(z^3+1)'")
    common.add_argument("--m", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--lambda", dest="lam", help="McMullen parameter, e.g. 0.5+0.25i")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--out", dest="output_path")
    common.add_argument("--format", choices=("ppm", "png", "json"), default="ppm")
    common.add_argument("--echo-config", action="store_true",
                        help="print the resolved configuration as JSON and exit")
    common.add_argument("--assume-non-exceptional", type=_bool, default=True, metavar="BOOL")
    raster = _Parser(add_help=False)
    raster.add_argument("--window", type=_window, default=(0.0, 0.0, 4.0), metavar="CX,CY,W")
    raster.add_argument("--res", dest="resolution", type=_resolution, default=(400, 400), metavar="WxH")
    raster.add_argument("--iters", dest="max_iter", type=int)

    s = sub.add_parser("render-julia", parents=[common, raster], help="escape-time picture of J(R)")
    s.add_argument("--escape-radius", type=_radius, help="number or 'inf'; derived when infinity is superattracting")
    sub.add_parser("render-param", parents=[common, raster], help="McMullen parameter plane")
    s = sub.add_parser("symmetries", parents=[common], help="classify the symmetry group of J(R)")
    s.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    s = sub.add_parser("verify", parents=[common], help="commutation or shared-Julia-set check")
    s.add_argument("--sigma", help="isometry, e.g. 'i*z' or '1/z'")
    s.add_argument("--k", type=int)
    s.add_argument("--map-b", dest="map_b", help="second map for the shared Julia set criterion")
    s.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    s = sub.add_parser("potential-check", parents=[common], help="ergodic potential diagnostics")
    s.add_argument("--sigma")
    s.add_argument("--points", type=int, default=50)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    kw = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    return RunConfig(**kw)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _parse_lambda(text: str) -> complex:
    v = parse_map(text)
    if not v.is_constant():
        raise ParseError("--lambda must be a constant", 0, text)
    return complex(v.num.coeffs[0] / v.den.coeffs[0])


def resolve_map(cfg: RunConfig) -> tuple[RationalMap, str]:
    if cfg.map_spec:
        return parse_map(cfg.map_spec), cfg.map_spec
    if cfg.m is not None and cfg.d is not None:
        lam = _parse_lambda(cfg.lam) if cfg.lam else 0j
        spec = f"mcmullen({cfg.m},{cfg.d},{cfg.lam or 0})"
        return make_mcmullen(McMullenParams(cfg.m, cfg.d, lam)), spec
    raise ParseError("no map given: use --map or --m/--d/--lambda")


def _out(cfg: RunConfig, default_stem: str) -> Path:
    ext = cfg.format
    return Path(cfg.output_path) if cfg.output_path else Path(f"{default_stem}.{ext}")


def _sidecar(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".json") if path.suffix != ".json" else path


def _emit_raster(cfg: RunConfig, img: np.ndarray, record: dict, stem: str) -> None:
    path = _out(cfg, stem)
    if cfg.format == "json":
        imaging.write_json(path, record)
        print(f"wrote {path}")
        return
    imaging.write_image(path, img, cfg.format)
    imaging.write_json(_sidecar(path), record)
    print(f"wrote {path} and {_sidecar(path)}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_render_julia(cfg: RunConfig) -> int:
    R, spec = resolve_map(cfg)
    radius = cfg.escape_radius
    if radius is None:
        radius = general_escape_radius(R)
    raster = escape_time_raster(R, cfg.window, cfg.resolution, cfg.max_iter, radius)
    record = imaging.raster_record(raster, {"map": spec, "map_normalized": R.to_text(),
                                            "escape_radius": "inf" if math.isinf(radius) else radius,
                                            "kind": "julia"})
    _emit_raster(cfg, imaging.color_julia(raster), record, "julia")
    return EXIT_OK


def cmd_render_param(cfg: RunConfig) -> int:
    if cfg.m is None or cfg.d is None:
        raise InvalidExponents("render-param needs --m and --d")
    McMullenParams(cfg.m, cfg.d)
    raster, overlay = render_parameter_plane(cfg.m, cfg.d, cfg.window, cfg.resolution, cfg.max_iter)
    record = imaging.raster_record(raster, {"kind": "parameter-plane", "m": cfg.m, "d": cfg.d})
    record.update(overlay.to_dict())
    _emit_raster(cfg, imaging.color_parameter_plane(raster, overlay), record, "param")
    return EXIT_OK


def cmd_symmetries(cfg: RunConfig) -> int:
    R, spec = resolve_map(cfg)
    report = classify_symmetry_group(R, max_order=cfg.max_order, tol=cfg.tol,
                                     samples=cfg.samples, seed=cfg.seed, description=spec)
    if cfg.m is not None and cfg.d is not None and not cfg.map_spec:
        params = McMullenParams(cfg.m, cfg.d, _parse_lambda(cfg.lam) if cfg.lam else 0j)
        report.notes.append(f"closed-form McMullen classification: {classify_mcmullen_symmetries(params)}")
        if params.near_boundary:
            report.notes.append("near-boundary: ||lambda| - 1| < 1e-3, numeric verification may be ambiguous")
    if not cfg.assume_non_exceptional:
        report.notes.append("non-exceptionality not assumed: commutation evidence is not a certificate for Lattes maps")
    text = report.to_text()
    print(text)
    if cfg.output_path:
        path = Path(cfg.output_path)
        path.write_text(report.to_json() + "\n")
        path.with_suffix(".txt").write_text(text + "\n")
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    R, spec = resolve_map(cfg)
    if R.degree < 2:
        raise DegenerateInput("verify needs a map of degree >= 2")
    result: dict = {"map": spec}
    if cfg.map_b:
        S = parse_map(cfg.map_b)
        cands = [parse_isometry(cfg.sigma)] if cfg.sigma else default_candidates()
        sigma = shared_julia_criterion(R, S, cands, cfg.max_order)
        result.update({"check": "shared-julia", "map_b": cfg.map_b,
                       "sigma": None if sigma is None else str(sigma)})
        if sigma is None:
            print(f"no candidate certifies J({spec}) = J({cfg.map_b}) (inconclusive)")
            code = EXIT_INCONCLUSIVE
        else:
            print(f"J({spec}) = J({cfg.map_b}) certified by S R = sigma R S with sigma = {sigma}")
            code = EXIT_OK
    elif cfg.sigma:
        sigma = parse_isometry(cfg.sigma)
        ks = [cfg.k] if cfg.k is not None else range(1, max(R.degree, cfg.max_order) + 1)
        best = None
        for k in ks:
            ok, res = check_commutation(R, sigma, k)
            if best is None or res < best[2]:
                best = (k, ok, res)
            if ok:
                break
        k, ok, res = best
        result.update({"check": "commutation", "sigma": str(sigma), "k": k, "residual": res, "passed": ok})
        verdict = "pass" if ok else "fail"
        print(f"R o sigma = sigma^{k} o R: {verdict} (residual {res:.3e})")
        code = EXIT_OK if ok else EXIT_REFUTED
    else:
        raise ParseError("verify needs --sigma or --map-b")
    if cfg.output_path:
        imaging.write_json(cfg.output_path, result)
    return code


def _test_points(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed + 7919)
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    return r3_to_pairs(v)


def cmd_potential_check(cfg: RunConfig) -> int:
    R, spec = resolve_map(cfg)
    if R.degree < 2:
        raise DegenerateInput("potential-check needs a map of degree >= 2")
    warnings = []
    if cfg.samples < MIN_POTENTIAL_SAMPLES:
        warnings.append(f"insufficient samples: {cfg.samples} < {MIN_POTENTIAL_SAMPLES}; "
                        "error bands are unreliable")
    cloud = sample_julia(R, cfg.samples, seed=cfg.seed)
    pts = _test_points(cfg.points, cfg.seed)
    u = np.array([ergodic_potential(R, p, cloud).value for p in pts])
    total = u + escape_rate(R.lift(), pts)
    spread = float(np.std(total))
    ok = spread <= 0.05
    result = {"map": spec, "samples": cfg.samples, "points": cfg.points,
              "u_plus_G_mean": float(np.mean(total)), "u_plus_G_std": spread,
              "consistency_passed": ok, "warnings": warnings}
    print(f"u + G over {cfg.points} points: mean {np.mean(total):.6f}, std {spread:.4f} "
          f"({'pass' if ok else 'fail'} at 0.05)")
    if cfg.sigma:
        sigma = parse_isometry(cfg.sigma)
        imgs = apply_pairs(sigma, pts)
        worst = 0.0
        inv_ok = True
        for p, q in zip(pts, imgs):
            est = potential_difference(SpherePoint(*q), SpherePoint(*p), cloud)
            worst = max(worst, abs(est.value) / est.stderr)
            inv_ok &= abs(est.value) <= 3 * est.stderr
        result.update({"sigma": str(sigma), "max_z_score": worst, "invariance_passed": bool(inv_ok)})
        print(f"|u(sigma z) - u(z)| / stderr: max {worst:.2f} over {cfg.points} points "
              f"({'pass' if inv_ok else 'fail'} at 3)")
        ok = ok and inv_ok
    for w in warnings:
        print(f"warning: {w}")
    if cfg.output_path:
        imaging.write_json(cfg.output_path, result)
    return EXIT_OK if ok else EXIT_REFUTED


HANDLERS = {"render-julia": cmd_render_julia, "render-param": cmd_render_param,
            "symmetries": cmd_symmetries, "verify": cmd_verify,
            "potential-check": cmd_potential_check}


def run(cfg: RunConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg)
    except (ParseError, InvalidWindow, MissingEscapeRadius, InvalidExponents, DegenerateInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except JuliaSymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUTED


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    if ns.echo_config:
        print(cfg.to_json())
        return EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

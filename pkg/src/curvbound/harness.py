"""Scenario-driven verification of the curvature estimates.

A scenario binds an ambient model, a chart, a reference point and a range of
curvature orders k, then checks every estimate that applies:

  riemannian:  sup |H_{k+1}|/H_k >= C_b(r)   (r = refined max distance),
               the power chain, the product bound, and the H_2 corollary;
  lorentzian:  the four-term sandwich between inf/sup of H_{k+1}/H_k and
               C_{-b} at the refined distance extrema, plus the outer-ball
               bound.

Reports are deterministic given the configuration (fixed grids, no
randomness); only ``timing_ms`` varies between runs.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .comparison import c_b, c_hat_b
from .curvature import TAU_ELL
from .errors import ConfigError, GeometryError
from .immersion import build_patch, sample_grid
from .operators import (
    DistanceField,
    _orthonormal_hessian,
    newton_quadratic,
    operator_data,
    restrict_field,
)
from .spaceform import RIEMANNIAN, AmbientModel, ReferenceBall

H_FLOOR = 1e-9  # samples with H_k at or below this are excluded from ratios
MAX_EXCLUSION_RATE = 0.10


@dataclass
class ScenarioConfig:
    name: str
    model: AmbientModel
    reference_center: np.ndarray
    reference_radius: float | None
    chart_kind: str
    chart_params: dict
    orientation: str | None
    k_range: tuple
    resolution: int
    tol_equality: float
    tol_margin: float
    jets: str

    @property
    def n(self) -> int:
        return self.model.dimension - 1


def load_scenario(source) -> ScenarioConfig:
    """Parse a scenario from a dict, a JSON string, or a file path."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            raw = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"scenario file not found: {source}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {source}: {exc}") from exc
    elif isinstance(source, dict):
        raw = source
    else:
        raise ConfigError("scenario source must be a path or a dict")

    def need(obj, key, where):
        if key not in obj:
            raise ConfigError(f"missing field {key!r} in {where}")
        return obj[key]

    name = need(raw, "name", "scenario")
    amb = need(raw, "ambient", "scenario")
    try:
        model = AmbientModel(
            signature=need(amb, "signature", "ambient"),
            curvature=float(need(amb, "curvature", "ambient")),
            dimension=int(need(amb, "dimension", "ambient")),
            model_kind=need(amb, "model_kind", "ambient"),
        )
    except ValueError as exc:
        raise ConfigError(f"bad ambient model: {exc}") from exc
    ref = need(raw, "reference", "scenario")
    center = np.asarray(need(ref, "center", "reference"), dtype=float)
    radius = ref.get("radius")
    chart = need(raw, "chart", "scenario")
    k_range = tuple(int(v) for v in need(raw, "k_range", "scenario"))
    n = model.dimension - 1
    if len(k_range) != 2 or not (0 <= k_range[0] <= k_range[1] <= n - 1):
        raise ConfigError(
            f"k_range must lie within [0, {n - 1}] for dimension {model.dimension}"
        )
    resolution = int(raw.get("resolution", 16))
    if resolution < 8:
        raise ConfigError("estimate scenarios need resolution >= 8 per axis")
    tol = raw.get("tolerances", {})
    jets = raw.get("jets", "auto")
    default_eq = 1e-3 if jets == "fd" else 1e-6
    return ScenarioConfig(
        name=name,
        model=model,
        reference_center=center,
        reference_radius=None if radius is None else float(radius),
        chart_kind=need(chart, "kind", "chart"),
        chart_params=dict(chart.get("params", {})),
        orientation=chart.get("orientation"),
        k_range=k_range,
        resolution=resolution,
        tol_equality=float(tol.get("equality", default_eq)),
        tol_margin=float(tol.get("margin", 1e-6)),
        jets=jets,
    )


@dataclass
class CheckRecord:
    id: str
    anchor: str
    status: str  # pass | fail | hypothesis-violation | inconclusive | info
    residual: float | None
    worst_sample: list | None


@dataclass
class VerificationReport:
    scenario: str
    checks: list
    env: dict
    timing_ms: float

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "checks": [asdict(c) for c in self.checks],
            "env": self.env,
            "timing_ms": self.timing_ms,
        }

    @property
    def exit_code(self) -> int:
        statuses = {c.status for c in self.checks}
        if "hypothesis-violation" in statuses:
            return 2
        if "fail" in statuses or "inconclusive" in statuses:
            return 1
        return 0


def scenario_patch(config: ScenarioConfig):
    params = dict(config.chart_params)
    if config.chart_kind in ("geodesic_sphere", "hyperboloid", "perturbed_hyperboloid"):
        params.setdefault("center", list(config.reference_center))
    return build_patch(
        config.model,
        config.chart_kind,
        params,
        orientation=config.orientation,
        center=config.reference_center,
        jets=config.jets,
    )


@dataclass
class ScenarioSamples:
    """Grid frames with spectral data and distance restrictions attached."""

    points: list  # (param, frame, OperatorData, FieldSample)
    skipped: list
    patch: object = None
    field: object = None


def collect_samples(config: ScenarioConfig, resolution=None) -> ScenarioSamples:
    patch = scenario_patch(config)
    dist = DistanceField(config.model, config.reference_center)
    grid = sample_grid(patch, resolution or config.resolution)
    points = []
    for p, frame in grid.points:
        data = operator_data(frame, config.model.signature)
        sample = restrict_field(patch, dist, p, frame=frame)
        points.append((p, frame, data, sample))
    return ScenarioSamples(points=points, skipped=grid.skipped, patch=patch, field=dist)


def _refine_extremum(patch, fn, start, cell, rounds=14, sign=1.0):
    """Local grid-halving refinement of a scalar over the parameter box."""
    center = np.asarray(start, dtype=float)
    best = sign * fn(center)
    offsets = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    cell = np.asarray(cell, dtype=float)
    for _ in range(rounds):
        for combo in np.stack(
            np.meshgrid(*[center[i] + offsets * cell[i] for i in range(center.size)],
                        indexing="ij"),
            axis=-1,
        ).reshape(-1, center.size):
            q = np.clip(combo, patch.domain_lo, patch.domain_hi)
            try:
                val = sign * fn(q)
            except GeometryError:
                continue
            if val > best:
                best, center = val, q
        cell = cell / 2.0
    return center, sign * best


def refined_distance_extremum(samples: ScenarioSamples, mode: str):
    """(param, value) of the refined max or min of u over the patch."""
    sign = 1.0 if mode == "max" else -1.0
    patch, dist = samples.patch, samples.field
    values = [s.u for _, _, _, s in samples.points]
    idx = int(np.argmax(values)) if mode == "max" else int(np.argmin(values))
    start = samples.points[idx][0]
    cell = patch.domain_width / max(2, len(values) ** (1.0 / patch.n))

    def fn(q):
        return dist.value(np.asarray(patch.chart.value(q), dtype=float))

    return _refine_extremum(patch, fn, start, cell, sign=sign)


def _ratio_pool(samples: ScenarioSamples, k: int, absolute: bool):
    """Per-sample H_{k+1}/H_k with the H_k floor applied; returns exclusions."""
    ratios, params, excluded = [], [], 0
    for p, _, data, _ in samples.points:
        hk = data.H[k]
        if hk <= H_FLOOR:
            excluded += 1
            continue
        val = data.H[k + 1]
        ratios.append(abs(val) / hk if absolute else val / hk)
        params.append(p)
    return np.asarray(ratios), params, excluded


def _hypothesis_check(samples: ScenarioSamples, k: int) -> CheckRecord:
    worst = None
    worst_val = np.inf
    positive_trace = True
    for p, _, data, _ in samples.points:
        scale = max(1.0, float(np.abs(data.kappa).max()) ** max(k, 1))
        low = data.family.eigenvalues[k].min() / scale
        if low < worst_val:
            worst_val, worst = low, p
        if np.trace(data.family.P[k]) <= TAU_ELL:
            positive_trace = False
    ok = worst_val >= -TAU_ELL and positive_trace
    return CheckRecord(
        id=f"newton-psd-k{k}",
        anchor="P_k positive semidefinite with Tr P_k > 0",
        status="pass" if ok else "hypothesis-violation",
        residual=float(worst_val),
        worst_sample=list(map(float, worst)) if worst is not None else None,
    )


def verify_riemannian_estimate(config: ScenarioConfig, samples: ScenarioSamples) -> list:
    checks = []
    b = config.model.curvature
    _, r = refined_distance_extremum(samples, "max")
    cbr = c_b(b, r)
    checks.append(
        CheckRecord("enclosing-radius", "plumbing", "info", float(r), None)
    )
    if config.reference_radius is not None:
        status = "pass" if r <= config.reference_radius + config.tol_equality else "fail"
        checks.append(
            CheckRecord(
                "declared-radius-consistent",
                "plumbing",
                status,
                float(config.reference_radius - r),
                None,
            )
        )
    total = len(samples.points)
    for k in range(config.k_range[0], config.k_range[1] + 1):
        checks.append(_hypothesis_check(samples, k))
        ratios, params, excluded = _ratio_pool(samples, k, absolute=True)
        rate = excluded / max(total, 1)
        if rate > MAX_EXCLUSION_RATE:
            checks.append(
                CheckRecord(
                    f"ratio-lower-bound-k{k}",
                    "sup |H_{k+1}|/H_k >= C_b(r)",
                    "inconclusive",
                    float(rate),
                    None,
                )
            )
            continue
        i_best = int(np.argmax(ratios))
        margin = float(ratios[i_best] - cbr)
        checks.append(
            CheckRecord(
                f"ratio-lower-bound-k{k}",
                "sup |H_{k+1}|/H_k >= C_b(r)",
                "pass" if margin >= -config.tol_margin else "fail",
                margin,
                list(map(float, params[i_best])),
            )
        )
        checks.append(
            CheckRecord(
                f"equality-flag-k{k}",
                "equality is the distance-sphere case",
                "info",
                margin,
                None,
            )
        )
        # power chain needs positive H_{k+1} throughout
        hk1 = np.array([data.H[k + 1] for _, _, data, _ in samples.points])
        if np.all(hk1 > 0.0):
            power = float(np.max(hk1 ** (1.0 / (k + 1))))
            signed, _, _ = _ratio_pool(samples, k, absolute=False)
            chain_margin = power - float(signed.max())
            checks.append(
                CheckRecord(
                    f"power-chain-k{k}",
                    "sup H_{k+1}^{1/(k+1)} >= sup H_{k+1}/H_k",
                    "pass" if chain_margin >= -config.tol_margin else "fail",
                    chain_margin,
                    None,
                )
            )
        # product bound never needs exclusions
        sup_abs = float(np.max([abs(d.H[k + 1]) for _, _, d, _ in samples.points]))
        inf_hk = float(np.min([d.H[k] for _, _, d, _ in samples.points]))
        margin2 = sup_abs - cbr * inf_hk
        checks.append(
            CheckRecord(
                f"product-bound-k{k}",
                "sup |H_{k+1}| >= C_b(r) inf H_k",
                "pass" if margin2 >= -config.tol_margin else "fail",
                float(margin2),
                None,
            )
        )
        checks.append(
            CheckRecord(
                f"exclusion-rate-k{k}", "plumbing", "info", float(rate), None
            )
        )
    return checks


def verify_h2_corollary(config: ScenarioConfig, samples: ScenarioSamples) -> list:
    checks = []
    b = config.model.curvature
    n = config.n
    h1 = np.array([d.H[1] for _, _, d, _ in samples.points])
    h2 = np.array([d.H[2] for _, _, d, _ in samples.points])
    if np.any(h2 <= 0.0):
        return [
            CheckRecord(
                "h2-positive",
                "H_2 > 0 throughout",
                "hypothesis-violation",
                float(h2.min()),
                None,
            )
        ]
    checks.append(CheckRecord("h2-positive", "H_2 > 0 throughout", "pass", float(h2.min()), None))
    _, r = refined_distance_extremum(samples, "max")
    cbr = c_b(b, r)
    sup_ratio = float(np.max(h2 / h1))
    sup_sqrt = float(np.sqrt(h2.max()))
    m1 = sup_sqrt - sup_ratio
    m2 = sup_ratio - cbr
    checks.append(
        CheckRecord(
            "sqrt-h2-dominates-ratio",
            "sup sqrt(H_2) >= sup H_2/H_1",
            "pass" if m1 >= -config.tol_margin else "fail",
            m1,
            None,
        )
    )
    checks.append(
        CheckRecord(
            "h2-ratio-lower-bound",
            "sup H_2/H_1 >= C_b(r)",
            "pass" if m2 >= -config.tol_margin else "fail",
            m2,
            None,
        )
    )
    # normalized scalar curvature bound, s = b + H_2
    sup_s = b + float(h2.max())
    m3 = sup_s - (b + cbr * float(h1.min()))
    checks.append(
        CheckRecord(
            "scalar-curvature-bound",
            "sup s >= b + C_b(r) inf H_1",
            "pass" if m3 >= -config.tol_margin else "fail",
            m3,
            None,
        )
    )
    worst = np.inf
    worst_p = None
    for p, _, data, _ in samples.points:
        mu = n * data.H[1] - data.kappa
        if mu.min() < worst:
            worst, worst_p = float(mu.min()), p
    checks.append(
        CheckRecord(
            "first-newton-eigenvalues-positive",
            "n H - kappa_j > 0 when H_2 > 0 and H > 0",
            "pass" if worst > 0.0 else "fail",
            worst,
            list(map(float, worst_p)),
        )
    )
    return checks


def verify_lorentz_estimates(config: ScenarioConfig, samples: ScenarioSamples) -> list:
    checks = []
    b = config.model.curvature
    checks.append(
        CheckRecord(
            "spacelike-samples",
            "every grid point is spacelike and chronology-admissible",
            "pass" if not samples.skipped else "hypothesis-violation",
            float(len(samples.skipped)),
            None,
        )
    )
    if samples.skipped:
        return checks
    _, u_sup = refined_distance_extremum(samples, "max")
    _, u_inf = refined_distance_extremum(samples, "min")
    c_at_sup = c_hat_b(b, u_sup)
    c_at_inf = c_hat_b(b, u_inf)
    for k in range(config.k_range[0], config.k_range[1] + 1):
        checks.append(_hypothesis_check(samples, k))
        ratios, params, excluded = _ratio_pool(samples, k, absolute=False)
        if excluded:
            checks.append(
                CheckRecord(
                    f"sandwich-k{k}",
                    "ratio sandwich",
                    "inconclusive",
                    float(excluded),
                    None,
                )
            )
            continue
        inf_ratio = float(ratios.min())
        sup_ratio = float(ratios.max())
        gaps = {
            f"sandwich-lower-k{k}": (
                "inf H_{k+1}/H_k <= C_{-b}(sup u)",
                c_at_sup - inf_ratio,
                params[int(np.argmin(ratios))],
            ),
            f"sandwich-middle-k{k}": (
                "C_{-b}(sup u) <= C_{-b}(inf u)",
                c_at_inf - c_at_sup,
                None,
            ),
            f"sandwich-upper-k{k}": (
                "C_{-b}(inf u) <= sup H_{k+1}/H_k",
                sup_ratio - c_at_inf,
                params[int(np.argmax(ratios))],
            ),
        }
        worst_gap = np.inf
        for cid, (anchor, gap, wp) in gaps.items():
            worst_gap = min(worst_gap, gap)
            checks.append(
                CheckRecord(
                    cid,
                    anchor,
                    "pass" if gap >= -config.tol_margin else "fail",
                    float(gap),
                    None if wp is None else list(map(float, wp)),
                )
            )
        checks.append(
            CheckRecord(
                f"equality-flag-k{k}",
                "equality is the distance-level-set case",
                "info",
                float(max(abs(c_at_sup - inf_ratio), abs(sup_ratio - c_at_inf))),
                None,
            )
        )
    delta = u_inf
    checks.append(
        CheckRecord(
            "outer-ball",
            "bounded ratio keeps the image outside a future ball of radius delta",
            "pass" if delta > 0.0 else "fail",
            float(delta),
            None,
        )
    )
    return checks


def run_scenario(config: ScenarioConfig) -> VerificationReport:
    t0 = time.perf_counter()
    if config.reference_radius is not None:
        ReferenceBall(config.reference_center, config.reference_radius).validate(config.model)
    samples = collect_samples(config)
    if config.model.signature == RIEMANNIAN:
        checks = verify_riemannian_estimate(config, samples)
        if config.n >= 2:
            checks += verify_h2_corollary(config, samples)
    else:
        checks = verify_lorentz_estimates(config, samples)
    timing = (time.perf_counter() - t0) * 1000.0
    return VerificationReport(
        scenario=config.name,
        checks=checks,
        env={
            "resolution": config.resolution,
            "tol": {"equality": config.tol_equality, "margin": config.tol_margin},
            "jets": config.jets,
        },
        timing_ms=timing,
    )


def emit_report(report: VerificationReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), indent=2) + "\n")


def emit_samples_csv(config: ScenarioConfig, path) -> None:
    """Per-sample dump: parameters, u, |grad u|, and per-k operator data."""
    samples = collect_samples(config)
    ks = list(range(config.k_range[0], config.k_range[1] + 1))
    n = samples.patch.n
    header = [f"p{i}" for i in range(n)] + ["u", "grad_norm"]
    for k in ks:
        header += [f"H{k}", f"H{k + 1}", f"ratio_k{k}", f"q_lu_k{k}", f"key_residual_k{k}"]
    sig = config.model.signature
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for p, frame, data, s in samples.points:
            row = list(map(float, p)) + [s.u, float(np.sqrt(s.grad_norm_sq))]
            H_sym = _orthonormal_hessian(s, data.chol)
            for k in ks:
                tr = float(np.trace(data.family.P[k]))
                lk = float(np.trace(data.family.P[k] @ H_sym))
                quad = newton_quadratic(s, data, k)
                ck, Hk, Hk1 = data.c[k], data.H[k], data.H[k + 1]
                if sig == RIEMANNIAN:
                    rhs = c_b(config.model.curvature, s.u) * (ck * Hk - quad) + ck * Hk1 * s.normal_coef
                else:
                    rhs = -c_hat_b(config.model.curvature, s.u) * (ck * Hk + quad) + ck * Hk1 * np.sqrt(1.0 + s.grad_norm_sq)
                ratio = Hk1 / Hk if Hk > H_FLOOR else np.nan
                row += [Hk, Hk1, ratio, lk / tr if tr > 0 else np.nan, lk - rhs]
            writer.writerow(row)


def bundled_scenarios() -> dict:
    """Name -> path for the scenario files shipped with the package."""
    out = {}
    root = resources.files("curvbound").joinpath("scenarios")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = entry
    return out

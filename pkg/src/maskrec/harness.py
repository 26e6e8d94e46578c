"""Scenario configuration, Monte Carlo trial orchestration, and verification.

Reproducibility contract: a (scenario, seed) pair fully determines every
emitted mask and every numeric CSV cell except wall_time.  Each trial owns
an RNG stream derived from the scenario seed and the trial index, so runs
are identical whether trials execute serially or on a thread pool, and
results are merged in trial order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import estimator, locop, maskgeom, noise, tfcore
from .errors import ConfigurationError
from .maskgeom import Mask, make_mask, scaled_shape_spec
from .tfcore import TFGrid, Window, make_window

CSV_HEADER = "# maskrec-csv v1"
THREADS_ENV_VAR = "MASKREC_THREADS"

#: Default containment radii (continuous units): small cell-side multiples.
DEFAULT_R_CELLS = (2.0, 3.0, 4.0)


@dataclass(frozen=True)
class Scenario:
    """One fully specified estimation experiment."""

    n: int = 256
    shape: str = "disc:measure=100"
    model_window: str = tfcore.WINDOW_GAUSSIAN
    recon_window: str = tfcore.WINDOW_GAUSSIAN
    count: int = 20
    sigma: float = 1.0
    noise_kind: str = noise.KIND_COMPLEX
    trials: int = 50
    seed: int = 7
    r_list: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not 16 <= self.n <= 512:
            raise ConfigurationError(f"n must be in [16, 512], got {self.n}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if self.count < 1:
            raise ConfigurationError(f"K must be >= 1, got {self.count}")
        if self.noise_kind == noise.KIND_REAL and self.count < 4:
            raise ConfigurationError("real noise needs K >= 4")
        if self.noise_kind not in (noise.KIND_COMPLEX, noise.KIND_REAL):
            raise ConfigurationError(f"unknown noise kind {self.noise_kind!r}")
        if self.sigma <= 0:
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if not self.r_list:
            side = TFGrid(self.n).cell_side
            object.__setattr__(
                self, "r_list", tuple(c * side for c in DEFAULT_R_CELLS)
            )
        if list(self.r_list) != sorted(self.r_list):
            raise ConfigurationError("r_list must be sorted ascending")


PRESETS: dict[str, Scenario] = {
    "figure1-left": Scenario(),
    "figure1-right": Scenario(model_window=tfcore.WINDOW_GAUSSIAN_T2),
}

#: Mask bank exercised by the spectrum/plateau checks: a mix of shapes that
#: genuinely satisfy the largeness condition (full plane, wide bands, the
#: plane with a small hole) and disc scenarios that do not but are kept for
#: reporting.
SPECTRUM_BANK: tuple[tuple[str, int, str], ...] = (
    ("full-64", 64, "full"),
    ("band-96-128", 128, "rect:x0=0,f0=0,w=128,h=96"),
    ("band-160-256", 256, "rect:x0=0,f0=0,w=256,h=160"),
    ("holey-plane-64", 64, "not:disc:measure=4"),
    ("holey-plane-128", 128, "not:disc:measure=8"),
    ("figure1-disc-256", 256, "disc:measure=100"),
    ("disc-8-64", 64, "disc:measure=8"),
)


# ---------------------------------------------------------------------------
# Configuration files


def load_config(path: str | Path) -> dict[str, str]:
    """Parse a key/value config file: one ``key = value`` per line, # comments."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip()] = value.strip()
    return values


_SCENARIO_KEYS = {
    "n": int,
    "shape": str,
    "model_window": str,
    "recon_window": str,
    "K": int,
    "sigma": float,
    "noise_kind": str,
    "trials": int,
    "seed": int,
    "r_list": str,
}

_KEY_TO_FIELD = {"K": "count"}


def scenario_from_mapping(values: dict[str, str], base: Scenario | None = None) -> Scenario:
    """Build a scenario from string key/value pairs, over an optional base."""
    kwargs = {}
    for key, value in values.items():
        if key not in _SCENARIO_KEYS:
            raise ConfigurationError(f"unknown scenario key {key!r}")
        conv = _SCENARIO_KEYS[key]
        field_name = _KEY_TO_FIELD.get(key, key)
        if key == "r_list":
            kwargs[field_name] = tuple(float(v) for v in value.split(",") if v.strip())
        else:
            try:
                kwargs[field_name] = conv(value)
            except ValueError as exc:
                raise ConfigurationError(f"bad value for {key}: {value!r}") from exc
    if base is not None:
        return replace(base, **kwargs)
    return Scenario(**kwargs)


# ---------------------------------------------------------------------------
# Trials


@dataclass(frozen=True)
class TrialResult:
    """Outcome of a single seeded trial; deterministic except wall_time."""

    trial_index: int
    seed: int
    error: maskgeom.ErrorReport
    success_at_r: tuple[bool, ...]
    max_rho: float
    wall_time: float


@dataclass(frozen=True)
class Pipeline:
    """Scenario-level objects shared by all trials."""

    scenario: Scenario
    grid: TFGrid
    truth: Mask
    model: Window
    recon: Window
    H: np.ndarray


def build_pipeline(scenario: Scenario) -> Pipeline:
    grid = TFGrid(scenario.n)
    truth = make_mask(grid, scenario.shape)
    model = make_window(grid, scenario.model_window)
    recon = make_window(grid, scenario.recon_window)
    H = locop.assemble_locop(truth, model)
    return Pipeline(
        scenario=scenario, grid=grid, truth=truth, model=model, recon=recon, H=H
    )


def trial_seed(scenario_seed: int, trial_index: int) -> int:
    """Derive the noise seed of one trial; independent of execution order."""
    ss = np.random.SeedSequence(entropy=scenario_seed, spawn_key=(trial_index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial(
    pipeline: Pipeline, trial_index: int, keep_fields: bool = False
) -> tuple[TrialResult, dict]:
    """Sample, filter, estimate and score one trial.

    Returns the result and, when ``keep_fields`` is set, the rho field and
    estimate cells for artifact emission.
    """
    sc = pipeline.scenario
    started = time.perf_counter()
    seed = trial_seed(sc.seed, trial_index)
    batch = noise.sample_noise(
        pipeline.grid, sc.count, sc.sigma, kind=sc.noise_kind, seed=seed
    )
    if sc.noise_kind == noise.KIND_REAL:
        paired = noise.complexify(batch)
        avg = estimator.average_spectrogram(
            noise.filter_batch(paired, pipeline.H), pipeline.recon
        )
    else:
        avg = estimator.average_spectrogram(
            noise.filter_batch(batch, pipeline.H), pipeline.recon
        )
    est = estimator.estimate_mask(avg)
    report = maskgeom.error_report(pipeline.truth, est)
    success = tuple(report.containment_radius <= r for r in sc.r_list)
    result = TrialResult(
        trial_index=trial_index,
        seed=seed,
        error=report,
        success_at_r=success,
        max_rho=est.max_rho,
        wall_time=time.perf_counter() - started,
    )
    extras = {"rho": avg.rho, "estimate": est.cells} if keep_fields else {}
    return result, extras


def _resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigurationError(f"bad {THREADS_ENV_VAR}={env!r}") from exc
    return 1


def run_trials(
    pipeline: Pipeline, threads: int | None = None
) -> tuple[list[TrialResult], dict]:
    """Run all trials of a scenario; deterministic ordered merge."""
    sc = pipeline.scenario
    workers = _resolve_threads(threads)
    indices = range(sc.trials)
    if workers == 1:
        outcomes = [run_trial(pipeline, t, keep_fields=(t == 0)) for t in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                pool.map(lambda t: run_trial(pipeline, t, keep_fields=(t == 0)), indices)
            )
    results = [r for r, _ in outcomes]
    first_extras = outcomes[0][1]
    return results, first_extras


# ---------------------------------------------------------------------------
# CSV / artifact emission


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return format(value, ".17g")
    return str(value)


def _write_csv(path: Path, columns: list[str], rows: list[list], comments: list[str] = ()) -> None:
    lines = [CSV_HEADER]
    lines.extend(comments)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _success_columns(r_list: tuple[float, ...]) -> list[str]:
    return [f"success_r_{format(r, 'g')}" for r in r_list]


def run_simulate(
    scenario: Scenario, out_dir: str | Path, threads: int | None = None
) -> list[TrialResult]:
    """Run the scenario and emit trials.csv plus first-trial PGM artifacts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pipeline = build_pipeline(scenario)
    results, extras = run_trials(pipeline, threads)

    columns = (
        ["trial_index", "seed", "sym_diff_measure", "perimeter",
         "containment_radius", "ratio"]
        + _success_columns(scenario.r_list)
        + ["max_rho", "wall_time"]
    )
    rows = []
    for r in results:
        rows.append(
            [r.trial_index, r.seed, r.error.sym_diff_measure, r.error.perimeter,
             r.error.containment_radius, r.error.ratio]
            + list(r.success_at_r)
            + [r.max_rho, r.wall_time]
        )
    _write_csv(out / "trials.csv", columns, rows)

    maskgeom.write_mask_pgm(out / "truth.pgm", pipeline.truth)
    est_cells = extras["estimate"]
    maskgeom.write_mask_pgm(
        out / "estimate.pgm", Mask(cells=est_cells, grid=pipeline.grid)
    )
    maskgeom.write_mask_pgm(
        out / "symdiff.pgm",
        Mask(cells=pipeline.truth.cells ^ est_cells, grid=pipeline.grid),
    )
    max_used = maskgeom.write_field_pgm(out / "rho.pgm", extras["rho"])
    (out / "rho.meta.txt").write_text(
        "field = rho\nquantization = linear 8-bit\n"
        f"max_rho = {_fmt(float(max_used))}\n"
    )
    return results


def run_sweep(
    scenario: Scenario,
    axis: str,
    values: list,
    out_dir: str | Path,
    threads: int | None = None,
) -> list[dict]:
    """Sweep K, sigma, or the mask measure; emit one summary row per value."""
    if axis not in ("K", "sigma", "measure"):
        raise ConfigurationError(f"unknown sweep axis {axis!r}")
    if list(values) != sorted(values):
        raise ConfigurationError("sweep values must be sorted ascending")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    summary_rows: list[dict] = []
    for value in values:
        if axis == "K":
            sweep_scenario = replace(scenario, count=int(value))
        elif axis == "sigma":
            sweep_scenario = replace(scenario, sigma=float(value))
        else:
            sweep_scenario = replace(
                scenario, shape=scaled_shape_spec(scenario.shape, float(value))
            )
        pipeline = build_pipeline(sweep_scenario)
        results, _ = run_trials(pipeline, threads)
        sym = np.array([r.error.sym_diff_measure for r in results])
        ratios = np.array([r.error.ratio for r in results])
        successes = np.array([r.success_at_r for r in results], dtype=float)
        summary_rows.append(
            {
                "axis": axis,
                "value": value,
                "trials": len(results),
                "mean_sym_diff": float(sym.mean()),
                "median_sym_diff": float(np.median(sym)),
                "mean_ratio": float(ratios.mean()),
                "success_rates": tuple(successes.mean(axis=0)),
            }
        )

    columns = (
        ["axis", "value", "trials", "mean_sym_diff", "median_sym_diff", "mean_ratio"]
        + [c.replace("success_r_", "success_rate_r_") for c in _success_columns(scenario.r_list)]
    )
    rows = [
        [s["axis"], s["value"], s["trials"], s["mean_sym_diff"],
         s["median_sym_diff"], s["mean_ratio"], *s["success_rates"]]
        for s in summary_rows
    ]
    comments = []
    if axis == "K" and len(summary_rows) >= 2:
        comments.append(f"# diagnostic: {_failure_decay_comment(summary_rows)}")
    _write_csv(out / "summary.csv", columns, rows, comments=comments)
    return summary_rows


def _failure_decay_comment(summary_rows: list[dict]) -> str:
    """Fit an exponential decay rate of the failure rate against K.

    Reported for inspection only (the theory promises some exponential rate
    with unspecified constants); no test asserts the fitted value.
    """
    ks = np.array([float(s["value"]) for s in summary_rows])
    # failure rate at the largest configured radius, continuity-corrected
    fails = np.array([1.0 - s["success_rates"][-1] for s in summary_rows])
    trials = np.array([s["trials"] for s in summary_rows], dtype=float)
    corrected = (fails * trials + 0.5) / (trials + 1.0)
    slope = np.polyfit(ks, np.log(corrected), 1)[0]
    return f"failure_rate_exp_decay_per_K = {_fmt(float(-slope))}"


def run_spectrum(scenario: Scenario, out_dir: str | Path) -> Path:
    """Eigenvalue profile of the scenario's operator, with plateau columns."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pipeline = build_pipeline(scenario)
    omega = maskgeom.measure(pipeline.truth)
    spec = locop.spectrum(pipeline.H, omega)
    largeness = locop.check_largeness(pipeline.truth, pipeline.model)
    violations = locop.plateau_violations(spec)
    perim = maskgeom.perimeter(pipeline.truth)

    columns = ["m", "eigenvalue", "measure", "perimeter", "largeness_pass",
               "largeness_lhs", "largeness_rhs", "plateau_violations"]
    rows = [
        [m + 1, float(spec.eigenvalues[m]), omega, perim, largeness.passed,
         largeness.lhs, largeness.rhs, violations]
        for m in range(spec.eigenvalues.size)
    ]
    path = out / "spectrum.csv"
    _write_csv(path, columns, rows)
    return path


# ---------------------------------------------------------------------------
# Verification suite


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.defect <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: defect={self.defect:.3e} tol={self.tolerance:.3e}"


def _random_mask(grid: TFGrid, rng: np.random.Generator, fill: float = 0.2) -> Mask:
    cells = rng.random((grid.n, grid.n)) < fill
    return Mask(cells=cells, grid=grid)


def _reproducing_defect(g: Window, rng: np.random.Generator, points: int = 12) -> float:
    """Brute-force kernel-sum check of the lattice reproducing identity."""
    grid = g.grid
    n = grid.n
    f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    V = tfcore.stft(f, g).values
    # all time-frequency shifts of g, flattened as pi(x, xi) -> row x*n+xi
    t = np.arange(n)
    phases = np.exp(2j * np.pi * np.outer(t, t) / n)  # [xi, t]
    rolled = np.empty((n, n), dtype=np.complex128)
    for x in range(n):
        rolled[x] = np.roll(g.samples, x)
    shifts = np.einsum("xt,ft->xft", rolled, phases).reshape(n * n, n)
    worst = 0.0
    zs = rng.integers(0, n, size=(points, 2))
    for zx, zf in zs:
        pz = tfcore.tf_shift(g.samples, (int(zx), int(zf)), grid)
        kernel = shifts @ np.conj(pz)  # K(z, w) over all w
        total = np.dot(V.ravel(), kernel) * grid.cell_measure
        worst = max(worst, abs(total - V[zx, zf]))
    return worst


def run_verify(
    ns: tuple[int, ...] = (8, 16, 32),
    seed: int = 20240901,
    corrupt_window: bool = False,
) -> list[CheckResult]:
    """Run every module invariant at oracle-speed sizes.

    ``corrupt_window`` is a test hook that breaks the window normalization
    before the isometry check; it must turn that check red.
    """
    for n in ns:
        if not 8 <= n <= 64:
            raise ConfigurationError(f"verify sizes must lie in [8, 64], got {n}")
    checks: list[CheckResult] = []
    rng = np.random.default_rng(seed)

    for n in ns:
        grid = TFGrid(n)
        g = make_window(grid, tfcore.WINDOW_GAUSSIAN)
        phi = make_window(grid, tfcore.WINDOW_GAUSSIAN)
        g2 = make_window(grid, tfcore.WINDOW_GAUSSIAN_T2)

        iso_window = make_window(grid, tfcore.WINDOW_GAUSSIAN)
        if corrupt_window:
            iso_window.samples = iso_window.samples * (1.0 + 1e-4)
        signals = rng.standard_normal((100, n)) + 1j * rng.standard_normal((100, n))
        transforms = tfcore.stft_stack(signals, iso_window)
        energies = np.sum(np.abs(transforms) ** 2, axis=(1, 2))
        defect = float(np.max(np.abs(energies - np.sum(np.abs(signals) ** 2, axis=1))))
        checks.append(CheckResult(f"tfcore.isometry[n={n}]", defect, 1e-10))

        f = signals[0]
        F = tfcore.stft(f, g)
        z0 = (n // 3, (2 * n) // 3)
        shifted = tfcore.stft(tfcore.tf_shift(f, z0, grid), g)
        defect = float(
            np.max(np.abs(np.abs(shifted.values)
                          - np.abs(np.roll(F.values, z0, axis=(0, 1)))))
        )
        checks.append(CheckResult(f"tfcore.covariance[n={n}]", defect, 1e-10))

        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        lhs = np.sum(F.values * np.conj(G))
        rhs = np.sum(f * np.conj(tfcore.istft(tfcore.TFMatrix(G, grid), g)))
        checks.append(CheckResult(f"tfcore.adjoint[n={n}]", float(abs(lhs - rhs)), 1e-10))

        if n <= 32:
            checks.append(
                CheckResult(f"tfcore.reproducing[n={n}]", _reproducing_defect(g, rng), 1e-9)
            )

        disc = maskgeom.disc_mask(grid, grid.plane_measure / 8)
        masks = [disc, _random_mask(grid, rng)]
        trace_defect = 0.0
        for mask in masks:
            H = locop.assemble_locop(mask, g)
            trace_defect = max(
                trace_defect, abs(float(np.trace(H).real) - maskgeom.measure(mask))
            )
        checks.append(CheckResult(f"locop.trace[n={n}]", trace_defect, 1e-9))

        H = locop.assemble_locop(disc, g)
        spec = locop.spectrum(H, maskgeom.measure(disc))
        gram = spec.eigenvectors.conj().T @ spec.eigenvectors
        checks.append(
            CheckResult(
                f"locop.eigenvector_gram[n={n}]",
                float(np.max(np.abs(gram - np.eye(n)))),
                1e-9,
            )
        )
        checks.append(
            CheckResult(
                f"locop.eigenvalue_sum[n={n}]",
                abs(float(spec.eigenvalues.sum()) - spec.omega_measure),
                1e-9,
            )
        )

        grown = maskgeom.dilate(disc, 2.5 * grid.cell_side)
        spec_grown = locop.spectrum(
            locop.assemble_locop(grown, g), maskgeom.measure(grown)
        )
        defect = float(np.max(spec.eigenvalues - spec_grown.eigenvalues))
        checks.append(CheckResult(f"locop.monotonicity[n={n}]", defect, 1e-9))

        checks.append(
            CheckResult(
                f"locop.double_orth[n={n}]",
                locop.double_orthogonality_defect(spec, disc, g, m_max=8),
                1e-8,
            )
        )
        checks.append(
            CheckResult(
                f"locop.first_moment[n={n}]",
                locop.theta_first_moment(spec, phi, disc, g),
                1e-8,
            )
        )
        th = locop.theta(spec, phi)
        bound_defect = max(
            float(th.values.max()) - 1.0,
            float(th.values.sum() * grid.cell_measure) - spec.omega_measure,
            0.0,
        )
        checks.append(CheckResult(f"locop.theta_bounds[n={n}]", bound_defect, 1e-9))

        moment = locop.ambiguity_moment(g, phi)
        l1 = float(np.sum(np.abs(disc.cells - th.values)) * grid.cell_measure)
        checks.append(
            CheckResult(
                f"locop.theta_l1_bound[n={n}]",
                l1 - 2.0 * moment * maskgeom.perimeter(disc),
                0.0,
            )
        )
        checks.append(
            CheckResult(
                f"locop.far_field[n={n}]",
                locop.far_field_defect(spec, disc, g, phi),
                1e-8,
            )
        )
        reg_lhs, reg_rhs = locop.regularization_defect(disc, g, phi)
        checks.append(
            CheckResult(f"locop.regularization[n={n}]", reg_lhs - 1.1 * reg_rhs, 0.0)
        )
        reg_lhs2, reg_rhs2 = locop.regularization_defect(disc, g2, phi)
        checks.append(
            CheckResult(f"locop.regularization_t2[n={n}]", reg_lhs2 - 1.1 * reg_rhs2, 0.0)
        )

        batch = noise.sample_noise(grid, 10, 1.0, seed=seed + n)
        coeffs = noise.eigen_coefficients(batch, spec)
        parseval = float(
            np.max(
                np.abs(
                    np.sum(np.abs(coeffs) ** 2, axis=1)
                    - np.sum(np.abs(batch.realizations) ** 2, axis=1)
                )
            )
        )
        checks.append(CheckResult(f"noise.parseval[n={n}]", parseval, 1e-9))

        filtered = noise.filter_batch(batch, H)
        expansion = filtered - (coeffs * spec.eigenvalues) @ spec.eigenvectors.T
        checks.append(
            CheckResult(
                f"noise.eigen_expansion[n={n}]", float(np.max(np.abs(expansion))), 1e-9
            )
        )

        scaled = noise.sample_noise(grid, 10, 2.0, seed=seed + n)
        checks.append(
            CheckResult(
                f"noise.sigma_scaling[n={n}]",
                float(np.max(np.abs(scaled.realizations - 2.0 * batch.realizations))),
                0.0,
            )
        )

        masks_equal = []
        reference = None
        for sigma in (0.1, 1.0, 10.0):
            b = noise.sample_noise(grid, 8, sigma, seed=seed + n)
            est = estimator.estimate_mask(
                estimator.average_spectrogram(noise.filter_batch(b, H), phi)
            )
            if reference is None:
                reference = est.cells
            masks_equal.append(np.array_equal(est.cells, reference))
        checks.append(
            CheckResult(
                f"estimator.sigma_invariance[n={n}]",
                0.0 if all(masks_equal) else 1.0,
                0.0,
            )
        )

        est = estimator.estimate_mask(
            estimator.average_spectrogram(noise.filter_batch(batch, H), phi)
        )
        sane = (0.0 < est.threshold <= est.max_rho) and bool(est.cells.any())
        checks.append(
            CheckResult(f"estimator.threshold_sanity[n={n}]", 0.0 if sane else 1.0, 0.0)
        )
        level = estimator.level_set(
            estimator.average_spectrogram(noise.filter_batch(batch, H), phi),
            est.threshold,
        )
        checks.append(
            CheckResult(
                f"estimator.level_set_match[n={n}]",
                float(np.count_nonzero(level != est.cells)),
                0.0,
            )
        )

        rect = maskgeom.rect_mask(grid, 1, 2, 3, 2)
        perim_defect = abs(maskgeom.perimeter(rect) - 2 * (3 + 2) * grid.cell_side)
        a = _random_mask(grid, rng)
        b = _random_mask(grid, rng)
        c = _random_mask(grid, rng)
        sym_ab = maskgeom.error_report(a, b).sym_diff_measure
        sym_ba = maskgeom.error_report(b, a).sym_diff_measure
        sym_ac = maskgeom.error_report(a, c).sym_diff_measure
        sym_bc = maskgeom.error_report(b, c).sym_diff_measure
        geo_defect = max(
            perim_defect, abs(sym_ab - sym_ba), sym_ac - (sym_ab + sym_bc)
        )
        checks.append(CheckResult(f"maskgeom.geometry[n={n}]", geo_defect, 1e-12))

    # empty-mask scenario passes operator checks with a zero spectrum
    grid = TFGrid(ns[0])
    g = make_window(grid, tfcore.WINDOW_GAUSSIAN)
    empty = Mask(cells=np.zeros((grid.n, grid.n), bool), grid=grid)
    H0 = locop.assemble_locop(empty, g)
    spec0 = locop.spectrum(H0, 0.0)
    checks.append(
        CheckResult(
            "locop.empty_mask",
            max(float(np.max(np.abs(H0))), float(spec0.eigenvalues.max())),
            1e-12,
        )
    )

    # plateau on small bank members that satisfy the largeness condition
    for name, n, shape in SPECTRUM_BANK:
        if n > max(ns):
            continue
        grid = TFGrid(n)
        mask = make_mask(grid, shape)
        g = make_window(grid, tfcore.WINDOW_GAUSSIAN)
        largeness = locop.check_largeness(mask, g)
        if not largeness.passed:
            continue
        spec = locop.spectrum(locop.assemble_locop(mask, g), maskgeom.measure(mask))
        checks.append(
            CheckResult(
                f"locop.plateau[{name}]", float(locop.plateau_violations(spec)), 0.0
            )
        )

    return checks

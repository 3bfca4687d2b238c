"""Monte Carlo comparison of noise handling strategies for amplitude estimation.

Simulates the four-setting benchmark on a noisy device:

* ``noisy_a``     - flat shot counts, no use of the noise model;
* ``noisy_b``     - flat shot counts, depolarizing count correction only;
* ``noise_aware`` - count correction plus the noise-aware shot schedule;
* ``noiseless``   - flat shot counts on an ideal device, for reference.

Each replication samples a full depth sweep, estimates the amplitude from
every depth prefix, and the harness reports RMSE-versus-depth curves over
replications.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .device import SimulatedDevice, run_depth_sweep, subseed
from .estimation import (
    AmplitudeEstimate,
    GridSearchConfig,
    estimate_amplitude,
    shot_schedule,
)
from .models import Amplitude, DepolParams, GaussianNoiseParams, depol_equivalent

SETTINGS = ("noisy_a", "noisy_b", "noise_aware", "noiseless")

X_KINDS = ("depth", "queries")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full specification of one Monte Carlo comparison run.

    ``device`` carries the true angle and noise model; its own seed is
    ignored, replications derive per-run seeds from ``seed``.
    ``k_sigma_assumed`` feeds both the shot schedule and the count correction
    (via the zero-mean depolarizing equivalence).
    """

    device: SimulatedDevice
    truth_a: float
    max_depth: int
    n_shot_base: int
    k_sigma_assumed: float
    settings: tuple[str, ...] = SETTINGS
    replications: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 <= self.truth_a <= 1.0):
            raise ValueError(f"truth_a must lie in [0, 1], got {self.truth_a!r}")
        if self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth!r}")
        if self.n_shot_base < 1:
            raise ValueError(f"n_shot_base must be >= 1, got {self.n_shot_base!r}")
        if self.k_sigma_assumed < 0.0:
            raise ValueError(
                f"k_sigma_assumed must be >= 0, got {self.k_sigma_assumed!r}"
            )
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications!r}")
        unknown = [s for s in self.settings if s not in SETTINGS]
        if unknown or not self.settings:
            raise ValueError(f"settings must be a nonempty subset of {SETTINGS}")


@dataclass(frozen=True)
class RmseCurve:
    """RMSE per depth prefix for one setting, against one x-axis kind."""

    setting: str
    x_kind: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if self.x_kind not in X_KINDS:
            raise ValueError(f"x_kind must be one of {X_KINDS}, got {self.x_kind!r}")
        xs = [x for x, _ in self.points]
        if any(r < 0.0 for _, r in self.points) or xs != sorted(xs):
            raise ValueError("points must be x-ordered with rmse >= 0")


def _setting_schedule(config: ExperimentConfig, setting: str):
    depths = list(range(config.max_depth + 1))
    if setting == "noise_aware":
        return shot_schedule(depths, config.n_shot_base, config.k_sigma_assumed)
    return shot_schedule(depths, config.n_shot_base, 0.0)


def _correction_params(config: ExperimentConfig) -> DepolParams:
    return depol_equivalent(GaussianNoiseParams(k_mu=0.0, k_sigma=config.k_sigma_assumed))


def run_qae_trial(
    config: ExperimentConfig,
    setting: str,
    replication_index: int,
    grid: GridSearchConfig = GridSearchConfig(),
) -> list[AmplitudeEstimate]:
    """One replication of one setting: an estimate per depth prefix.

    Samples the full sweep m = 0..max_depth once, then estimates the
    amplitude from the records up to each prefix depth M.  Deterministic
    given (config.seed, replication_index, setting).
    """
    if setting not in config.settings:
        raise ValueError(f"setting {setting!r} not in config.settings")
    schedule = _setting_schedule(config, setting)
    device = replace(
        config.device,
        model=None if setting == "noiseless" else config.device.model,
        seed=subseed(config.seed, replication_index, SETTINGS.index(setting)),
    )
    records = run_depth_sweep(device, list(schedule.depths), list(schedule.shots))

    corrected = setting in ("noisy_b", "noise_aware")
    depol = _correction_params(config) if corrected else None
    estimates = []
    for prefix in range(1, len(records) + 1):
        estimates.append(
            estimate_amplitude(
                records[:prefix],
                method="corrected" if corrected else "naive",
                depol=depol,
                grid=grid,
            )
        )
    return estimates


def run_monte_carlo(
    config: ExperimentConfig,
    grid: GridSearchConfig = GridSearchConfig(),
    workers: int = 1,
) -> list[RmseCurve]:
    """RMSE curves over replications, two per setting (depth and query axes).

    rmse at prefix M is ``sqrt(mean over replications of (a_hat_M - truth_a)^2)``.
    The query axis is the cumulative oracle-call count
    ``sum_{m<=M} (2m+1) N_m`` of the setting's schedule.  Replications are
    independent; ``workers > 1`` evaluates them on a thread pool without
    changing the result.
    """
    n_prefixes = config.max_depth + 1

    def trial_errors(task: tuple[str, int]) -> np.ndarray:
        setting, rep = task
        estimates = run_qae_trial(config, setting, rep, grid=grid)
        return np.array([e.a_hat - config.truth_a for e in estimates])

    tasks = [(s, r) for s in config.settings for r in range(config.replications)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = list(pool.map(trial_errors, tasks))
    else:
        errors = [trial_errors(t) for t in tasks]

    curves = []
    for i, setting in enumerate(config.settings):
        errs = np.stack(errors[i * config.replications : (i + 1) * config.replications])
        rmse = np.sqrt(np.mean(errs**2, axis=0))
        schedule = _setting_schedule(config, setting)
        queries = np.cumsum(
            [(2 * m + 1) * n for m, n in schedule.entries], dtype=float
        )
        curves.append(
            RmseCurve(
                setting=setting,
                x_kind="depth",
                points=tuple((float(m), float(r)) for m, r in zip(range(n_prefixes), rmse)),
            )
        )
        curves.append(
            RmseCurve(
                setting=setting,
                x_kind="queries",
                points=tuple((float(q), float(r)) for q, r in zip(queries, rmse)),
            )
        )
    return curves


def misspecification_sweep(
    config: ExperimentConfig,
    factors: tuple[float, ...] = (0.5, 1.0, 2.0),
    grid: GridSearchConfig = GridSearchConfig(),
    workers: int = 1,
) -> dict[float, list[RmseCurve]]:
    """Robustness study: rerun the comparison with k_sigma_assumed scaled.

    Each factor multiplies the configured ``k_sigma_assumed`` (schedule and
    correction both follow), leaving the device itself untouched.
    """
    out = {}
    for factor in factors:
        scaled = replace(config, k_sigma_assumed=config.k_sigma_assumed * factor)
        out[float(factor)] = run_monte_carlo(scaled, grid=grid, workers=workers)
    return out


# ---------------------------------------------------------------------------
# JSON configuration (schema documented in schemas/experiment-config.schema.json).

def _device_from_json(doc: dict) -> SimulatedDevice:
    if "preset" in doc and "theta" in doc:
        raise ValueError("device: give either 'preset' or 'theta', not both")
    if "preset" in doc:
        from .device import preset_device

        base = preset_device(str(doc["preset"]))
        amp = base.amp
    elif "theta" in doc:
        amp = Amplitude(float(doc["theta"]))
    else:
        raise ValueError("device: missing 'preset' or 'theta'")

    noise = doc.get("noise", {"kind": "none"})
    kind = noise.get("kind")
    if kind == "none":
        model = None
    elif kind == "gaussian":
        model = GaussianNoiseParams(
            k_mu=float(noise["k_mu"]), k_sigma=float(noise["k_sigma"])
        )
    elif kind == "depolarizing":
        model = DepolParams(p_coh_tilde=float(noise["p_coh"]))
    else:
        raise ValueError(f"device.noise.kind must be gaussian|depolarizing|none, got {kind!r}")
    return SimulatedDevice(amp=amp, model=model)


def _default_k_sigma(device: SimulatedDevice) -> float:
    # Default to the device's true parameter (assumed known from prior
    # characterisation); for a depolarizing device use the equivalent rate.
    if isinstance(device.model, GaussianNoiseParams):
        return device.model.k_sigma
    if isinstance(device.model, DepolParams):
        if device.model.p_coh_tilde == 0.0:
            raise ValueError("k_sigma_assumed must be given for p_coh == 0")
        return -math.log(device.model.p_coh_tilde) / 2.0
    return 0.0


def config_from_json(doc: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from its JSON document form."""
    if not isinstance(doc, dict):
        raise ValueError("experiment config must be a JSON object")
    for field in ("device", "max_depth", "n_shot_base", "replications", "seed"):
        if field not in doc:
            raise ValueError(f"experiment config: missing field {field!r}")
    device = _device_from_json(doc["device"])
    truth_a = float(doc.get("truth_a", device.amp.a))
    k_sigma = (
        float(doc["k_sigma_assumed"])
        if "k_sigma_assumed" in doc
        else _default_k_sigma(device)
    )
    settings = tuple(doc.get("settings", SETTINGS))
    return ExperimentConfig(
        device=device,
        truth_a=truth_a,
        max_depth=int(doc["max_depth"]),
        n_shot_base=int(doc["n_shot_base"]),
        k_sigma_assumed=k_sigma,
        settings=settings,
        replications=int(doc["replications"]),
        seed=int(doc["seed"]),
    )

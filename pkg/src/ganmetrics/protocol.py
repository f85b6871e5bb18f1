"""Evaluation protocols: fixed sample counts, multi-seed runs, comparable reports.

A protocol pins everything two scores must share to be comparable: the
metric, the real/fake sample counts, the split count, and the feature source.
For each seed, real and fake subsamples are drawn from decorrelated streams
(seed mixed with "real"/"fake" through the documented 64-bit hash), the
metric is computed, and the results are aggregated as mean +/- sample std
(n-1) across seeds.  Reports embed input digests and reproduce bit-for-bit
on identical inputs, timing aside.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import GanMetricsError, InputError, InsufficientSamplesError
from .fid import compute_fid
from .inception import inception_score
from .kid import compute_kid
from .npyio import content_digest
from .rng import derive_key
from .stats import as_feature_matrix, as_logit_matrix, subsample

METRICS = ("is", "fid", "kid")

SCHEMA_VERSION = 1

DEFAULT_SEEDS = (0, 1, 2)

# Named recipes for the published evaluation methods: the baseline method for
# each metric (50K samples, 10 splits where applicable) and the per-model FID
# sample counts used for the CIFAR-10 reproductions.
PRESETS: dict[str, dict] = {
    "table4-is": {"metric": "is", "n_fake": 50_000, "splits": 10},
    "table4-fid": {"metric": "fid", "n_real": 50_000, "n_fake": 50_000},
    "table4-kid": {"metric": "kid", "n_real": 50_000, "n_fake": 50_000, "splits": 10},
    "table1-dcgan": {"metric": "fid", "n_real": 10_000, "n_fake": 10_000},
    "table1-wgan-gp": {"metric": "fid", "n_real": 50_000, "n_fake": 50_000},
    "table1-sngan": {"metric": "fid", "n_real": 10_000, "n_fake": 5_000},
    "table1-cgan-pd": {"metric": "fid", "n_real": 10_000, "n_fake": 5_000},
    "table1-ssgan": {"metric": "fid", "n_real": 10_000, "n_fake": 10_000},
    "table1-infomax-gan": {"metric": "fid", "n_real": 50_000, "n_fake": 10_000},
}

# Fields that must match for two reports to be comparable.
COMPARABILITY_FIELDS = ("metric", "n_real", "n_fake", "splits", "feature_source")


@dataclass(frozen=True)
class ProtocolConfig:
    metric: str
    n_fake: int
    n_real: int | None = None
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    splits: int | None = None
    feature_source: str = "unspecified"

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds:
            raise ValueError("seeds must be non-empty")
        if len(set(seeds)) != len(seeds):
            raise ValueError(f"seeds must be distinct, got {seeds}")
        if any(s < 0 for s in seeds):
            raise ValueError(f"seeds must be nonnegative, got {seeds}")
        object.__setattr__(self, "seeds", seeds)
        if self.n_fake < 1:
            raise ValueError(f"n_fake must be positive, got {self.n_fake}")
        if self.metric == "is":
            if self.n_real is not None:
                raise ValueError("n_real must be absent for the IS metric")
        else:
            if self.n_real is None:
                raise ValueError(f"n_real is required for {self.metric}")
            if self.n_real < 1:
                raise ValueError(f"n_real must be positive, got {self.n_real}")
        if self.metric == "fid":
            if self.splits is not None:
                raise ValueError("splits does not apply to fid")
        else:
            splits = self.splits if self.splits is not None else 10
            if splits < 1:
                raise ValueError(f"splits must be positive, got {splits}")
            object.__setattr__(self, "splits", int(splits))

    def to_json_dict(self) -> dict:
        return {
            "metric": self.metric,
            "n_real": self.n_real,
            "n_fake": self.n_fake,
            "seeds": list(self.seeds),
            "splits": self.splits,
            "feature_source": self.feature_source,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ProtocolConfig":
        return cls(
            metric=data["metric"],
            n_fake=data["n_fake"],
            n_real=data.get("n_real"),
            seeds=tuple(data.get("seeds", DEFAULT_SEEDS)),
            splits=data.get("splits"),
            feature_source=data.get("feature_source", "unspecified"),
        )


def preset_config(name: str, seeds=DEFAULT_SEEDS, feature_source: str = "unspecified",
                  **overrides) -> ProtocolConfig:
    """Instantiate a named preset, optionally overriding individual fields."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    params = dict(PRESETS[name])
    params.update(overrides)
    return ProtocolConfig(seeds=tuple(seeds), feature_source=feature_source, **params)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    value: float
    split_std: float | None = None

    def to_json_dict(self) -> dict:
        if self.split_std is None:
            return {"seed": self.seed, "value": self.value}
        return {"seed": self.seed, "mean": self.value, "std": self.split_std}


@dataclass(frozen=True)
class ScoreReport:
    config: ProtocolConfig
    per_seed: tuple[SeedResult, ...]
    mean: float
    std: float
    timing_ms: int
    input_digests: dict = field(default_factory=dict)

    def to_json_dict(self, include_timing: bool = True) -> dict:
        # Fixed key order; this is the on-disk report schema.
        return {
            "schema_version": SCHEMA_VERSION,
            "metric": self.config.metric,
            "config": self.config.to_json_dict(),
            "per_seed": [entry.to_json_dict() for entry in self.per_seed],
            "mean": self.mean,
            "std": self.std,
            "splits": self.config.splits,
            "feature_source": self.config.feature_source,
            "input_digests": self.input_digests,
            "timing_ms": self.timing_ms if include_timing else 0,
        }

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_timing=include_timing), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScoreReport":
        config = ProtocolConfig.from_json_dict(data["config"])
        per_seed = tuple(
            SeedResult(
                seed=entry["seed"],
                value=entry["value"] if "value" in entry else entry["mean"],
                split_std=entry.get("std"),
            )
            for entry in data["per_seed"]
        )
        return cls(
            config=config,
            per_seed=per_seed,
            mean=data["mean"],
            std=data["std"],
            timing_ms=data.get("timing_ms", 0),
            input_digests=data.get("input_digests", {}),
        )


def load_report(path) -> ScoreReport:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "config" not in data or "per_seed" not in data:
        raise InputError(f"{path}: not a score report")
    try:
        return ScoreReport.from_json_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed score report: {exc}") from exc


def _aggregate(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


def run_protocol(config: ProtocolConfig, real, fake) -> ScoreReport:
    """Execute one evaluation recipe and return a self-contained report."""
    needs_real = config.metric != "is"
    if needs_real:
        if real is None:
            raise ValueError(f"{config.metric} requires a real feature set")
        real = as_feature_matrix(real)
        if real.shape[0] < config.n_real:
            raise InsufficientSamplesError(
                f"real set has {real.shape[0]} rows but the protocol needs {config.n_real}"
            )
    fake = as_logit_matrix(fake) if config.metric == "is" else as_feature_matrix(fake)
    if fake.shape[0] < config.n_fake:
        raise InsufficientSamplesError(
            f"fake set has {fake.shape[0]} rows but the protocol needs {config.n_fake}"
        )

    start = time.perf_counter()
    per_seed = []
    for seed in config.seeds:
        try:
            fake_sub = subsample(fake, config.n_fake, seed=derive_key(seed, "fake"))
            if config.metric == "is":
                score = inception_score(fake_sub, splits=config.splits)
                per_seed.append(SeedResult(seed, score.mean, score.std))
            elif config.metric == "fid":
                real_sub = subsample(real, config.n_real, seed=derive_key(seed, "real"))
                per_seed.append(SeedResult(seed, compute_fid(real_sub, fake_sub).value))
            else:
                real_sub = subsample(real, config.n_real, seed=derive_key(seed, "real"))
                score = compute_kid(real_sub, fake_sub, splits=config.splits)
                per_seed.append(SeedResult(seed, score.mean, score.std))
        except GanMetricsError as exc:
            raise exc.__class__(f"seed {seed}: {exc}") from exc
    mean, std = _aggregate([entry.value for entry in per_seed])
    timing_ms = int((time.perf_counter() - start) * 1000)

    digests = {"real": content_digest(real) if needs_real else None,
               "fake": content_digest(fake)}
    return ScoreReport(
        config=config,
        per_seed=tuple(per_seed),
        mean=mean,
        std=std,
        timing_ms=timing_ms,
        input_digests=digests,
    )


@dataclass(frozen=True)
class ComparabilityVerdict:
    comparable: bool
    mismatches: tuple[str, ...] = ()

    def __str__(self) -> str:
        if self.comparable:
            return "COMPARABLE"
        return "INCOMPARABLE: " + ", ".join(self.mismatches)


def compare_reports(a: ScoreReport, b: ScoreReport) -> ComparabilityVerdict:
    """COMPARABLE iff metric, sample counts, splits, and feature source all match."""
    mismatches = []
    for name in COMPARABILITY_FIELDS:
        va, vb = getattr(a.config, name), getattr(b.config, name)
        if va != vb:
            mismatches.append(f"{name}: {va!r} != {vb!r}")
    return ComparabilityVerdict(comparable=not mismatches, mismatches=tuple(mismatches))

"""Monte Carlo verification harness.

Two modes:

* ``igm-equivalence``: PIGM, NIGM(r), LIGM and LIGM(r) must agree on random
  PRMs after rounding to ``epsilon`` decimals.
* ``wls-oracle``: the Nelder-Mead WLS optimizer, started at the PIGM weights,
  must agree with PIGM after rounding to ``epsilon`` decimals.

Seeding: trial ``i`` draws everything (order ``n``, shift ``r``, PRM seed,
optimizer seed) from ``numpy.random.SeedSequence(master_seed, spawn_key=(i,))``,
so any trial can be replayed on its own with :func:`replay_trial`.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, IGMError, ValidationError
from .methods import ligm, nigm, pigm
from .prm import JudgmentScale, PairwiseReciprocalMatrix, WeightsLike, _weights_array, random_prm, wls_objective
from .wls import OptimizerConfig, optimize_wls

MIN_ABS_R = 1e-6


class Mode(str, Enum):
    IGM_EQUIVALENCE = "igm-equivalence"
    WLS_ORACLE = "wls-oracle"


DEFAULT_EPSILON = {Mode.IGM_EQUIVALENCE: 8, Mode.WLS_ORACLE: 4}


@dataclass(frozen=True)
class VerificationConfig:
    samples: int
    mode: Mode = Mode.IGM_EQUIVALENCE
    n_max: int = 15
    scale: int = 9
    epsilon: Optional[int] = None
    master_seed: int = 0
    r_min: float = -1000.0
    r_max: float = 1000.0
    workers: int = 1
    max_evaluations: int = 500_000
    tolerance: float = 1e-6
    record_timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", DEFAULT_EPSILON[self.mode])
        if self.samples < 1:
            raise ValidationError("samples must be >= 1")
        if self.n_max < 3:
            raise ValidationError("n_max must be >= 3")
        if self.scale < 2:
            raise ValidationError("scale must be >= 2")
        if self.epsilon < 1:
            raise ValidationError("epsilon must be >= 1")
        if not self.r_min < self.r_max:
            raise ValidationError("r_min must be below r_max")
        if max(abs(self.r_min), abs(self.r_max)) < MIN_ABS_R:
            raise ValidationError("r range lies entirely inside the near-zero guard")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        d["mode"] = self.mode.value
        d["min_abs_r"] = MIN_ABS_R
        return d


@dataclass
class TrialRecord:
    index: int
    n: int
    r: float
    prm_seed: int
    prm_digest: str
    weights: dict
    discrepancy: float
    status: str = "ok"
    extra: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def failed(self) -> bool:
        return self.discrepancy != 0

    def reproduction(self, cfg: VerificationConfig) -> str:
        return (
            f"trial {self.index}: n={self.n} r={self.r!r} prm_seed={self.prm_seed} "
            f"master_seed={cfg.master_seed} status={self.status} discrepancy={self.discrepancy!r}"
        )


@dataclass
class SimulationReport:
    config: VerificationConfig
    trials: list
    error_detected: bool
    first_failure: Optional[TrialRecord]
    total_elapsed: float

    def counts(self) -> dict:
        out = {"trials": len(self.trials)}
        for t in self.trials:
            key = t.status.split(":")[0]
            out[key] = out.get(key, 0) + 1
        return out

    def labels(self) -> list:
        if self.config.mode is Mode.IGM_EQUIVALENCE:
            return ["PIGM", "NIGM(r)", "LIGM", "LIGM(r)"]
        return ["PIGM", "WLS"]

    def trials_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        labels = self.labels()
        extra_keys = sorted({k for t in self.trials for k in t.extra})
        writer.writerow(
            ["index", "n", "r", "prm_seed", "prm_digest"]
            + [f"w_{lab}" for lab in labels]
            + extra_keys
            + ["discrepancy", "status", "elapsed_ms"]
        )
        for t in self.trials:
            ws = [" ".join(f"{x:.12f}" for x in t.weights[lab]) if lab in t.weights else "" for lab in labels]
            ex = [repr(t.extra[k]) if k in t.extra else "" for k in extra_keys]
            elapsed = f"{t.elapsed * 1e3:.3f}" if self.config.record_timing else ""
            writer.writerow([t.index, t.n, repr(t.r), t.prm_seed, t.prm_digest] + ws + ex
                            + [repr(t.discrepancy), t.status, elapsed])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "config": self.config.echo(),
            "error_detected": self.error_detected,
            "counts": self.counts(),
            "first_failure": None if self.first_failure is None
            else self.first_failure.reproduction(self.config),
            "total_elapsed_ms": round(self.total_elapsed * 1e3, 3),
        }

    def write(self, out_dir) -> tuple:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        trials_path = out / "trials.csv"
        summary_path = out / "summary.json"
        trials_path.write_text(self.trials_csv())
        summary_path.write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n")
        return trials_path, summary_path


def _round_half_away(x: float, places: int) -> Decimal:
    return Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


def rounded_discrepancy(reference: WeightsLike, others: Sequence[WeightsLike], epsilon: int) -> float:
    """Round every component to ``epsilon`` decimals, sum the absolute
    differences of each vector in ``others`` against ``reference``, and round
    the total to ``epsilon - 1`` decimals.

    Rounding is decimal half-away-from-zero on the shortest repr of each
    float, so the result does not depend on binary representation quirks.
    """
    if epsilon < 1:
        raise ValidationError("epsilon must be >= 1")
    ref = _weights_array(reference)
    ref_r = [_round_half_away(x, epsilon) for x in ref]
    total = Decimal(0)
    for other in others:
        o = _weights_array(other)
        if o.shape != ref.shape:
            raise DimensionMismatch(f"vector of length {o.shape} against reference {ref.shape}")
        for a, b in zip(ref_r, o):
            total += abs(a - _round_half_away(b, epsilon))
    return float(total.quantize(Decimal(1).scaleb(-(epsilon - 1)), rounding=ROUND_HALF_UP))


def prm_digest(prm: PairwiseReciprocalMatrix) -> str:
    data = np.ascontiguousarray(prm.entries, dtype="<f8").tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


@dataclass(frozen=True)
class TrialDraw:
    index: int
    n: int
    r: float
    prm_seed: int
    optimizer_seed: int


def draw_trial(cfg: VerificationConfig, index: int) -> TrialDraw:
    rng = np.random.default_rng(np.random.SeedSequence(cfg.master_seed, spawn_key=(index,)))
    n = int(rng.integers(3, cfg.n_max + 1))
    r = float(rng.uniform(cfg.r_min, cfg.r_max))
    while abs(r) < MIN_ABS_R:
        r = float(rng.uniform(cfg.r_min, cfg.r_max))
    prm_seed = int(rng.integers(0, 2**63 - 1))
    opt_seed = int(rng.integers(0, 2**63 - 1))
    return TrialDraw(index, n, r, prm_seed, opt_seed)


def trial_prm(cfg: VerificationConfig, draw: TrialDraw) -> PairwiseReciprocalMatrix:
    return random_prm(draw.n, JudgmentScale.saaty(cfg.scale), draw.prm_seed)


def _igm_solvers() -> dict:
    return {
        "PIGM": lambda prm, r: pigm(prm).w,
        "NIGM(r)": lambda prm, r: nigm(prm, r).w,
        "LIGM": lambda prm, r: ligm(prm, 0.0).w,
        "LIGM(r)": lambda prm, r: ligm(prm, r).w,
    }


Solver = Callable[[PairwiseReciprocalMatrix, float], np.ndarray]


def _run_igm_trial(cfg: VerificationConfig, index: int, solvers: Optional[Mapping[str, Solver]] = None,
                   prm_source: Optional[Callable] = None) -> TrialRecord:
    t0 = time.perf_counter()
    draw = draw_trial(cfg, index)
    prm = (prm_source or trial_prm)(cfg, draw)
    table = dict(_igm_solvers())
    if solvers:
        table.update(solvers)
    rec = TrialRecord(index, draw.n, draw.r, draw.prm_seed, prm_digest(prm), {}, 0.0)
    try:
        for label, fn in table.items():
            rec.weights[label] = tuple(float(x) for x in fn(prm, draw.r))
    except IGMError as exc:
        rec.status = f"error:{type(exc).__name__}"
        rec.discrepancy = float("inf")
    else:
        ref = rec.weights["PIGM"]
        others = [rec.weights[k] for k in ("NIGM(r)", "LIGM", "LIGM(r)")]
        rec.discrepancy = rounded_discrepancy(ref, others, cfg.epsilon)
        if rec.discrepancy != 0:
            rec.status = "mismatch"
    rec.elapsed = time.perf_counter() - t0
    return rec


def _run_wls_trial(cfg: VerificationConfig, index: int, solvers: Optional[Mapping[str, Solver]] = None,
                   prm_source: Optional[Callable] = None) -> TrialRecord:
    t0 = time.perf_counter()
    draw = draw_trial(cfg, index)
    prm = (prm_source or trial_prm)(cfg, draw)
    rec = TrialRecord(index, draw.n, draw.r, draw.prm_seed, prm_digest(prm), {}, 0.0)
    try:
        w_ref = pigm(prm).w if not solvers or "PIGM" not in solvers else solvers["PIGM"](prm, draw.r)
        opt_cfg = OptimizerConfig(
            max_evaluations=cfg.max_evaluations,
            tolerance=cfg.tolerance,
            seed=draw.optimizer_seed,
            initial_point=w_ref,
        )
        res = optimize_wls(prm, opt_cfg)
    except IGMError as exc:
        rec.status = f"error:{type(exc).__name__}"
        rec.discrepancy = float("inf")
    else:
        rec.weights["PIGM"] = tuple(float(x) for x in w_ref)
        rec.weights["WLS"] = tuple(float(x) for x in res.weights.weights)
        rec.extra["objective_pigm"] = wls_objective(prm, w_ref)
        rec.extra["objective_wls"] = res.objective
        rec.extra["evaluations"] = res.evaluations
        rec.discrepancy = rounded_discrepancy(w_ref, [res.weights], cfg.epsilon)
        if rec.discrepancy != 0:
            rec.status = "mismatch"
        elif res.budget_exhausted:
            rec.status = "budget_exhausted"
    rec.elapsed = time.perf_counter() - t0
    return rec


_TRIAL_FN = {Mode.IGM_EQUIVALENCE: _run_igm_trial, Mode.WLS_ORACLE: _run_wls_trial}


def _run(cfg: VerificationConfig, solvers=None, prm_source=None) -> SimulationReport:
    trial_fn = _TRIAL_FN[cfg.mode]
    t0 = time.perf_counter()
    trials = []
    first_failure = None
    if cfg.workers == 1:
        for i in range(cfg.samples):
            rec = trial_fn(cfg, i, solvers, prm_source)
            trials.append(rec)
            if rec.failed:
                first_failure = rec
                break
    else:
        batch = cfg.workers * 16
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            start = 0
            while start < cfg.samples and first_failure is None:
                idx = range(start, min(start + batch, cfg.samples))
                futures = [pool.submit(trial_fn, cfg, i, solvers, prm_source) for i in idx]
                for fut in futures:
                    rec = fut.result()
                    if first_failure is None:
                        trials.append(rec)
                        if rec.failed:
                            first_failure = rec
                start += batch
    return SimulationReport(
        config=cfg,
        trials=trials,
        error_detected=first_failure is not None,
        first_failure=first_failure,
        total_elapsed=time.perf_counter() - t0,
    )


def run_igm_equivalence(cfg: VerificationConfig, solvers: Optional[Mapping[str, Solver]] = None,
                        prm_source: Optional[Callable] = None) -> SimulationReport:
    """Check PIGM = NIGM(r) = LIGM = LIGM(r) on ``cfg.samples`` random PRMs.

    ``solvers`` replaces individual methods by label (test doubles);
    ``prm_source(cfg, draw)`` replaces the random PRM generator.
    Stops at the first trial with a nonzero discrepancy.
    """
    if cfg.mode is not Mode.IGM_EQUIVALENCE:
        raise ValidationError("run_igm_equivalence needs mode igm-equivalence")
    return _run(cfg, solvers, prm_source)


def run_wls_verification(cfg: VerificationConfig, solvers: Optional[Mapping[str, Solver]] = None,
                         prm_source: Optional[Callable] = None) -> SimulationReport:
    """Check the WLS optimizer against PIGM on ``cfg.samples`` random PRMs."""
    if cfg.mode is not Mode.WLS_ORACLE:
        raise ValidationError("run_wls_verification needs mode wls-oracle")
    return _run(cfg, solvers, prm_source)


def run(cfg: VerificationConfig) -> SimulationReport:
    return _run(cfg)


def replay_trial(cfg: VerificationConfig, index: int) -> TrialRecord:
    return _TRIAL_FN[cfg.mode](cfg, index)

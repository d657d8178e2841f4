"""Monte Carlo loss/dephasing/thermal injection on query trajectories.

Rather than discretizing per gate, events are drawn on the continuous
residence intervals reported by the scheduler: excitation k spends 2kt in
the phonon waveguide and the rest of the query parked in transmons, so a
loss clock ticks at 1/T1_m or 1/T1_q depending on where the excitation
currently lives.  For the hybrid encoding each released qubit is an equal
superposition of "stayed in the register" and "went down the tree", which
is sampled as a fair branch choice per trajectory — averaging reproduces
the closed-form success probability exactly.

Detection is a pure function of the final measurement pattern: a lost
excitation leaves a register transmon in |f> (hybrid) or a dual-rail pair
in |00> (standard), both outside the logical subspace.  Dephasing and
thermal events are injected for classification only; neither is visible
to the dual-rail check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .qram import QramConfig
from .qram_types import Encoding
from .scheduling import build_schedule, residence_intervals

__all__ = [
    "NoiseModel",
    "NoiseEvent",
    "TrajectoryVerdict",
    "sample_trajectory",
    "inject_loss",
    "estimate_success_prob",
    "write_verdicts_jsonl",
]

_US_TO_NS = 1e3


def _rate_per_ns(T_us: float) -> float:
    """Decay rate in 1/ns for a lifetime given in microseconds."""
    if math.isinf(T_us):
        return 0.0
    return 1.0 / (T_us * _US_TO_NS)


@dataclass(frozen=True)
class NoiseModel:
    """Lifetimes in microseconds; math.inf disables a channel."""

    T1_q: float = math.inf
    T1_m: float = math.inf
    T2_q: float = math.inf
    T2_m: float = math.inf
    n_th: float = 0.0

    def __post_init__(self):
        for name in ("T1_q", "T1_m", "T2_q", "T2_m"):
            v = getattr(self, name)
            if not v > 0:
                raise InvalidParameterError(f"{name} must be > 0, got {v}")
        if self.n_th < 0:
            raise InvalidParameterError(f"n_th must be >= 0, got {self.n_th}")
        for t2, t1, pair in (
            (self.T2_q, self.T1_q, "T2_q/T1_q"),
            (self.T2_m, self.T1_m, "T2_m/T1_m"),
        ):
            if math.isfinite(t2) and math.isfinite(t1) and t2 > 2 * t1 + 1e-12:
                raise InvalidParameterError(f"unphysical {pair}: T2 > 2*T1")

    def dephasing_rate(self, medium: str) -> float:
        t2 = self.T2_q if medium == "transmon" else self.T2_m
        t1 = self.T1_q if medium == "transmon" else self.T1_m
        return max(_rate_per_ns(t2) - 0.5 * _rate_per_ns(t1), 0.0)

    def loss_rate(self, medium: str) -> float:
        return _rate_per_ns(self.T1_q if medium == "transmon" else self.T1_m)

    def thermal_rate(self, medium: str) -> float:
        return self.n_th * self.loss_rate(medium)


@dataclass(frozen=True)
class NoiseEvent:
    time_ns: float
    location: str  # e.g. "excitation3:waveguide"
    kind: str      # "loss" | "dephase" | "thermal"


@dataclass(frozen=True)
class TrajectoryVerdict:
    events: tuple
    detected: bool
    detection_basis: str | None = None

    @property
    def lossless(self) -> bool:
        return not any(e.kind == "loss" for e in self.events)


def _check_encoding(cfg: QramConfig) -> None:
    if cfg.encoding is Encoding.SINGLE_RAIL:
        raise InvalidParameterError(
            "single-rail carries no error-detection structure; "
            "use a hybrid or standard encoding"
        )


def _register_name(cfg: QramConfig, k: int) -> str:
    return "bus" if k == cfg.n else f"address_{k}"


def _classify(cfg: QramConfig, lost: list) -> tuple[bool, str | None]:
    """Detection verdict from the final measurement pattern."""
    if not lost:
        return False, None
    k = lost[0]
    if cfg.encoding is Encoding.HYBRID_DUAL_RAIL:
        return True, f"{_register_name(cfg, k)}:f"
    return True, f"{_register_name(cfg, k)}:00"


def _intervals(cfg: QramConfig, k: int, in_tree: bool):
    """(duration, medium) residence segments for excitation k."""
    sched = build_schedule(cfg.n, cfg.encoding, cfg.t)
    if cfg.encoding is Encoding.HYBRID_DUAL_RAIL and not in_tree:
        return [(0.0, sched.makespan, "transmon")]
    return residence_intervals(sched, k)


def sample_trajectory(cfg: QramConfig, noise: NoiseModel, seed) -> TrajectoryVerdict:
    """Draw one noisy trajectory and evaluate end-of-query detection."""
    _check_encoding(cfg)
    rng = np.random.default_rng(seed)
    hybrid = cfg.encoding is Encoding.HYBRID_DUAL_RAIL
    events: list[NoiseEvent] = []
    lost: list[int] = []
    for k in range(cfg.n + 1):
        in_tree = (not hybrid) or bool(rng.integers(0, 2))
        segs = _intervals(cfg, k, in_tree)
        # loss: one exponential clock run against the piecewise hazard
        budget = rng.exponential()
        for start, end, medium in segs:
            rate = noise.loss_rate(medium)
            dur = end - start
            if rate * dur >= budget:
                t_loss = start + budget / rate
                events.append(NoiseEvent(t_loss, f"excitation{k}:{medium}", "loss"))
                lost.append(k)
                break
            budget -= rate * dur
        # dephasing / thermal: Poisson counts per segment, classification only
        for start, end, medium in segs:
            dur = end - start
            for kind, rate in (("dephase", noise.dephasing_rate(medium)),
                               ("thermal", noise.thermal_rate(medium))):
                if rate <= 0 or dur <= 0:
                    continue
                for _ in range(rng.poisson(rate * dur)):
                    events.append(NoiseEvent(
                        start + dur * rng.random(),
                        f"excitation{k}:{medium}", kind,
                    ))
    events.sort(key=lambda e: e.time_ns)
    detected, basis = _classify(cfg, sorted(lost))
    return TrajectoryVerdict(tuple(events), detected, basis)


def inject_loss(cfg: QramConfig, excitation: int, time_ns: float) -> TrajectoryVerdict:
    """Force a single loss at a given time and run the detection rule."""
    _check_encoding(cfg)
    if not 0 <= excitation <= cfg.n:
        raise InvalidParameterError(f"no excitation {excitation} for n={cfg.n}")
    sched = build_schedule(cfg.n, cfg.encoding, cfg.t)
    if not 0 <= time_ns <= sched.makespan:
        raise InvalidParameterError("loss time outside the query window")
    medium = "transmon"
    for start, end, med in residence_intervals(sched, excitation):
        if start <= time_ns < end:
            medium = med
            break
    ev = NoiseEvent(time_ns, f"excitation{excitation}:{medium}", "loss")
    detected, basis = _classify(cfg, [excitation])
    return TrajectoryVerdict((ev,), detected, basis)


def estimate_success_prob(
    cfg: QramConfig, noise: NoiseModel, trials: int, seed
) -> tuple[float, float]:
    """Fraction of trajectories with zero loss events, with its stderr."""
    _check_encoding(cfg)
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    hybrid = cfg.encoding is Encoding.HYBRID_DUAL_RAIL
    sched = build_schedule(cfg.n, cfg.encoding, cfg.t)
    T = sched.makespan

    # per-excitation cumulative hazard for each branch
    haz_tree = np.empty(cfg.n + 1)
    for k in range(cfg.n + 1):
        haz_tree[k] = sum(
            (end - start) * noise.loss_rate(med)
            for start, end, med in residence_intervals(sched, k)
        )
    haz_reg = T * noise.loss_rate("transmon")

    if hybrid:
        in_tree = rng.integers(0, 2, size=(trials, cfg.n + 1)).astype(bool)
        hazard = np.where(in_tree, haz_tree[None, :], haz_reg)
    else:
        hazard = np.broadcast_to(haz_tree[None, :], (trials, cfg.n + 1))
    survived = rng.random((trials, cfg.n + 1)) < np.exp(-hazard)
    ok = survived.all(axis=1)
    p_hat = float(ok.mean())
    stderr = math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / trials)
    return p_hat, stderr


def write_verdicts_jsonl(path, verdicts, seeds=None) -> None:
    with open(path, "w") as fh:
        for i, v in enumerate(verdicts):
            rec = {
                "seed": None if seeds is None else seeds[i],
                "events": [
                    {"time_ns": e.time_ns, "location": e.location, "kind": e.kind}
                    for e in v.events
                ],
                "detected": v.detected,
                "detection_basis": v.detection_basis,
            }
            fh.write(json.dumps(rec) + "\n")

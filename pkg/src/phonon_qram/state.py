"""Sparse symbolic state vector over a register of three-level slots.

A configuration is a frozenset of (slot, level) pairs with level 1 (e) or
2 (f); any slot not listed is in its ground state.  Because a query only
ever excites one slot per routed excitation, the support stays small
(at most ~2N branches for an N-cell memory) even though the full Hilbert
space is astronomically large.

Gates are recorded as `GateRecord`s so an entire protocol can be exported,
replayed against an independent dense simulation, or cross-checked against
the routing schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NumericalFailureError

__all__ = ["GateRecord", "SparseState", "GATE_ARITY", "apply_gate"]

_SQ2 = 1.0 / math.sqrt(2.0)

Slot = tuple
Config = frozenset


@dataclass(frozen=True)
class GateRecord:
    """One gate in a protocol trace.

    `time` is in units of the routing step t, matching the schedule;
    `slots` are the qubit slots the gate touches, in a gate-specific order.
    """

    name: str
    slots: tuple
    time: float
    params: tuple = field(default=())


def _level(cfg: Config, slot: Slot) -> int:
    for s, l in cfg:
        if s == slot:
            return l
    return 0


def _with_level(cfg: Config, slot: Slot, level: int) -> Config:
    items = [(s, l) for s, l in cfg if s != slot]
    if level:
        items.append((slot, level))
    return frozenset(items)


def _move(cfg: Config, src: Slot, dst: Slot) -> Config:
    """Transfer the e excitation from src to dst (dst assumed ground)."""
    return _with_level(_with_level(cfg, src, 0), dst, 1)


# ---------------------------------------------------------------------------
# gate semantics: each returns a list of (config, amplitude_factor) branches

def _g_swap(cfg, slots, params):
    a, b = slots
    la, lb = _level(cfg, a), _level(cfg, b)
    return [(_with_level(_with_level(cfg, a, lb), b, la), 1.0)]


def _g_swap_ge(cfg, slots, params):
    # swap restricted to the {g, e} manifold; identity if either slot is f
    a, b = slots
    la, lb = _level(cfg, a), _level(cfg, b)
    if la == 2 or lb == 2:
        return [(cfg, 1.0)]
    return [(_with_level(_with_level(cfg, a, lb), b, la), 1.0)]


def _g_h_ge(cfg, slots, params):
    (a,) = slots
    la = _level(cfg, a)
    if la == 2:
        return [(cfg, 1.0)]
    if la == 0:
        return [(cfg, _SQ2), (_with_level(cfg, a, 1), _SQ2)]
    return [(_with_level(cfg, a, 0), _SQ2), (cfg, -_SQ2)]


def _g_z_ge(cfg, slots, params):
    (a,) = slots
    return [(cfg, -1.0 if _level(cfg, a) == 1 else 1.0)]


def _g_ladder_ge(cfg, slots, params):
    (a,) = slots
    la = _level(cfg, a)
    if la == 2:
        return [(cfg, 1.0)]
    return [(_with_level(cfg, a, 1 - la), 1.0)]


def _g_ladder_ef(cfg, slots, params):
    (a,) = slots
    la = _level(cfg, a)
    if la == 0:
        return [(cfg, 1.0)]
    return [(_with_level(cfg, a, 3 - la), 1.0)]


def _g_cz(cfg, slots, params):
    a, b = slots
    if _level(cfg, a) == 1 and _level(cfg, b) == 1:
        return [(cfg, -1.0)]
    return [(cfg, 1.0)]


def _g_route(cfg, slots, params):
    # conditional hop down one tree level; ctrl |e> sends the excitation
    # right unless the polarity is inverted
    ctrl, src, left, right = slots
    (invert,) = params
    if _level(cfg, src) != 1:
        return [(cfg, 1.0)]
    go_right = (_level(cfg, ctrl) == 1) != bool(invert)
    return [(_move(cfg, src, right if go_right else left), 1.0)]


def _g_uproute(cfg, slots, params):
    ctrl, left, right, dst = slots
    (invert,) = params
    go_right = (_level(cfg, ctrl) == 1) != bool(invert)
    src = right if go_right else left
    if _level(cfg, src) != 1:
        return [(cfg, 1.0)]
    return [(_move(cfg, src, dst), 1.0)]


def _g_route2(cfg, slots, params):
    # dual-rail-controlled hop: control rail 1 in |e> selects right,
    # rail 0 selects left; both-ground (outside logical subspace) is inert
    c0, c1, src, left, right = slots
    if _level(cfg, src) != 1:
        return [(cfg, 1.0)]
    if _level(cfg, c1) == 1:
        return [(_move(cfg, src, right), 1.0)]
    if _level(cfg, c0) == 1:
        return [(_move(cfg, src, left), 1.0)]
    return [(cfg, 1.0)]


def _g_uproute2(cfg, slots, params):
    c0, c1, left, right, dst = slots
    if _level(cfg, c1) == 1:
        src = right
    elif _level(cfg, c0) == 1:
        src = left
    else:
        return [(cfg, 1.0)]
    if _level(cfg, src) != 1:
        return [(cfg, 1.0)]
    return [(_move(cfg, src, dst), 1.0)]


def _g_qroute(cfg, slots, params):
    # data-register fan-out: excitation in src enters the tree when the
    # data-side control is excited, otherwise returns to its home slot
    ctrl, src, into_tree, back = slots
    if _level(cfg, src) != 1:
        return [(cfg, 1.0)]
    dst = into_tree if _level(cfg, ctrl) == 1 else back
    return [(_move(cfg, src, dst), 1.0)]


def _g_dualrail_h(cfg, slots, params):
    # single-excitation Hadamard in rail space
    r0, r1 = slots
    l0, l1 = _level(cfg, r0), _level(cfg, r1)
    if l0 == 1 and l1 != 1:
        return [(cfg, _SQ2), (_move(cfg, r0, r1), _SQ2)]
    if l1 == 1 and l0 != 1:
        return [(_move(cfg, r1, r0), _SQ2), (cfg, -_SQ2)]
    return [(cfg, 1.0)]


_GATES = {
    "swap": _g_swap,
    "swap_ge": _g_swap_ge,
    "h_ge": _g_h_ge,
    "z_ge": _g_z_ge,
    "ladder_ge": _g_ladder_ge,
    "ladder_ef": _g_ladder_ef,
    "cz": _g_cz,
    "route": _g_route,
    "uproute": _g_uproute,
    "route2": _g_route2,
    "uproute2": _g_uproute2,
    "qroute": _g_qroute,
    "dualrail_h": _g_dualrail_h,
}

GATE_ARITY = {
    "swap": 2, "swap_ge": 2, "h_ge": 1, "z_ge": 1, "ladder_ge": 1,
    "ladder_ef": 1, "cz": 2, "route": 4, "uproute": 4, "route2": 5,
    "uproute2": 5, "qroute": 4, "dualrail_h": 2,
}


def apply_gate(amps: dict, gate: GateRecord) -> dict:
    fn = _GATES[gate.name]
    out: dict = {}
    for cfg, amp in amps.items():
        for new_cfg, factor in fn(cfg, gate.slots, gate.params):
            out[new_cfg] = out.get(new_cfg, 0.0) + amp * factor
    return {c: a for c, a in out.items() if abs(a) > 1e-14}


class SparseState:
    """Mutable amplitude map config -> complex."""

    __slots__ = ("amps", "max_support")

    def __init__(self, amps: dict | None = None):
        self.amps = dict(amps) if amps else {frozenset(): 1.0 + 0.0j}
        self.max_support = len(self.amps)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amps.values()))

    def support(self) -> int:
        return len(self.amps)

    def level(self, cfg: Config, slot: Slot) -> int:
        return _level(cfg, slot)

    def apply(self, gate: GateRecord, check_norm: bool = True) -> None:
        self.amps = apply_gate(self.amps, gate)
        self.max_support = max(self.max_support, len(self.amps))
        if check_norm:
            n = self.norm()
            if abs(n - 1.0) > 1e-10:
                raise NumericalFailureError(
                    f"norm drifted to {n!r} after gate {gate.name}"
                )

    def apply_all(self, gates, check_norm: bool = True) -> None:
        for g in gates:
            self.apply(g, check_norm=check_norm)

    def amplitude(self, cfg: Config) -> complex:
        return self.amps.get(cfg, 0.0 + 0.0j)

    def copy(self) -> "SparseState":
        s = SparseState(self.amps)
        s.max_support = self.max_support
        return s

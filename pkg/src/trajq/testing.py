"""Brute-force reference implementations for tests.

Nothing in this module is used by production code paths; tests import both
and compare. The relaxed-evaluation oracle realizes the interpolated
continuum finitely: densify every segment with uniformly spaced points,
then run the strict evaluator over the densified trajectory. On generic
inputs (no tangency, nothing decided exactly on a region boundary) the
verdict converges to the exact relaxed one as the density grows. Atoms
satisfiable only on a measure-zero set, like "p WITHIN R AND NOT (p INSIDE
R)", can fool any finite density and are excluded from equivalence suites.

The Allen-label oracle decides a label by table lookup over the sign
pattern of the four endpoint differences, an exhaustive enumeration of the
13 mutually exclusive endpoint orderings, deliberately structured unlike
the production classifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Mapping

from .evaluate import EvalEnv, eval_strict
from .geometry import Interval, Region, lerp
from .model import Trajectory, build_trajectory, segments
from .predicate import Predicate, format_predicate
from .relations import AllenLabel


@dataclass(frozen=True)
class ResampleSpec:
    """Density of the finite realization: k extra points per segment."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")


def resample(t: Trajectory, spec: ResampleSpec) -> Trajectory:
    """Insert k uniformly spaced interpolated points into every segment.

    The recorded points are kept verbatim, so the result has
    n + k(n-1) points; a single-point trajectory is returned unchanged.
    """
    if len(t.points) == 1:
        return t
    samples: list[tuple[float, float, float]] = []
    k = spec.k
    for seg in segments(t):
        a = seg.start
        samples.append((a.x, a.y, a.tau))
        samples.extend(lerp(seg, j / (k + 1)) for j in range(1, k + 1))
    last = t.points[-1]
    samples.append((last.x, last.y, last.tau))
    return build_trajectory(samples)


def relaxed_oracle(
    ast: Predicate, t: Trajectory, env: EvalEnv, spec: ResampleSpec
) -> bool:
    """Finite stand-in for exact relaxed evaluation: densify, then strict."""
    return eval_strict(ast, resample(t, spec), env)


def _sign(a: float, b: float) -> int:
    return (a > b) - (a < b)


# Sign pattern (f vs s, l vs e, l vs s, f vs e) for span [f, l] against
# interval (s, e). Given f < l and s < e exactly these 13 patterns occur.
_ALLEN_CASES = {
    (-1, -1, -1, -1): AllenLabel.PRECEDES,
    (-1, -1, 0, -1): AllenLabel.MEETS,
    (-1, -1, 1, -1): AllenLabel.OVERLAPS,
    (-1, 0, 1, -1): AllenLabel.FINISHED_BY,
    (-1, 1, 1, -1): AllenLabel.CONTAINS,
    (0, -1, 1, -1): AllenLabel.STARTS,
    (0, 0, 1, -1): AllenLabel.EQUALS,
    (0, 1, 1, -1): AllenLabel.STARTED_BY,
    (1, -1, 1, -1): AllenLabel.DURING,
    (1, 0, 1, -1): AllenLabel.FINISHES,
    (1, 1, 1, -1): AllenLabel.OVERLAPPED_BY,
    (1, 1, 1, 0): AllenLabel.MET_BY,
    (1, 1, 1, 1): AllenLabel.PRECEDED_BY,
}


def allen_case_oracle(span: tuple[float, float], i: Interval) -> AllenLabel:
    """Label a time span against an interval by endpoint-order case lookup."""
    f, l = span
    if not f < l:
        raise ValueError(f"degenerate span ({f}, {l})")
    key = (
        _sign(f, i.tau_s),
        _sign(l, i.tau_e),
        _sign(l, i.tau_s),
        _sign(f, i.tau_e),
    )
    return _ALLEN_CASES[key]


def _env_json(env: EvalEnv) -> dict:
    out = {}
    for name, target in env.bindings.items():
        if isinstance(target, Region):
            out[name] = {
                "kind": "region",
                "bounds": [target.x_min, target.y_min, target.x_max, target.y_max],
            }
        else:
            out[name] = {"kind": "interval", "bounds": [target.tau_s, target.tau_e]}
    return out


def write_counterexample(
    out: IO[str],
    ast: Predicate,
    t: Trajectory,
    env: EvalEnv,
    expected: bool,
    actual: bool,
) -> None:
    """Append one JSON line describing a disagreement, for offline triage."""
    record = {
        "trajectory": [[p.x, p.y, p.tau] for p in t.points],
        "environment": _env_json(env),
        "predicate": format_predicate(ast),
        "expected": expected,
        "actual": actual,
    }
    out.write(json.dumps(record) + "\n")

"""Predicate evaluation over trajectories and relation filtering.

Three degrees of strictness decide which points a quantifier ranges over:

* strict: only the recorded points of the trajectory;
* relaxed: the continuum of the interpolated polyline, evaluated exactly
  through the parameter-set algebra (no sampling anywhere);
* approximated: strict evaluation after augmenting each segment with
  intermediate points produced by a pluggable strategy.

Relaxed evaluation computes, per segment, the exact parameter set where the
clause body holds (atoms map to parameter sets, AND/OR/NOT to intersection,
union, complement). An EXISTS clause holds iff some segment has a non-empty
body set within its domain; a FORALL clause holds iff no segment has a
non-empty counterexample set. Segment domains are half-open so that a
vertex shared by two segments is owned by exactly one of them, and the TFL
domain excludes just the two endpoint points (a measure-zero exclusion:
the inner continuum reaches arbitrarily close to both endpoints). Ground
clauses over pf/pl are the same in every mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import UnknownStrategyError, ValidationFailedError
from .geometry import (
    Interval,
    ParamInterval,
    ParamSet,
    PointClass,
    Region,
    TimeClass,
    classify_point_region,
    classify_time_interval,
    lerp,
    segment_interval_params,
    segment_region_params,
)
from .model import Segment, TrajectoriesRelation, Trajectory, TrajectoryPoint, segments
from .predicate import (
    And,
    Atom,
    Body,
    Domain,
    GroundClause,
    Not,
    Op,
    Or,
    PointRef,
    Predicate,
    Quantifier,
    QuantifiedClause,
    validate,
)


@dataclass(frozen=True)
class EvalEnv:
    """Named regions and intervals a predicate may reference."""

    bindings: Mapping[str, Region | Interval]


@dataclass(frozen=True)
class Strictness:
    """Evaluation mode; use the STRICT/RELAXED constants or approximated()."""

    kind: str  # "strict" | "relaxed" | "approximated"
    strategy: str | None = None
    param: int | None = None


STRICT = Strictness("strict")
RELAXED = Strictness("relaxed")


def approximated(strategy: str, param: int | None = None) -> Strictness:
    return Strictness("approximated", strategy, param)


@dataclass(frozen=True)
class ApproxStrategy:
    """Names a rule that proposes extra interpolation parameters per segment.

    The generator must return parameters within [0, 1] in ascending order;
    0 and 1 are tolerated and ignored (the segment endpoints are already
    recorded points).
    """

    name: str
    point_generator: Callable[[Segment], Sequence[float]]


def uniform_strategy(k: int) -> ApproxStrategy:
    """k evenly spaced interior points per segment: lam = j/(k+1), j=1..k."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    grid = tuple((j + 1) / (k + 1) for j in range(k))

    return ApproxStrategy(f"uniform-{k}", lambda seg: grid)


_STRATEGY_FACTORIES: dict[str, Callable[[int | None], ApproxStrategy]] = {}

DEFAULT_UNIFORM_K = 100


def register_strategy(name: str, factory: Callable[[int | None], ApproxStrategy]) -> None:
    """Register a strategy factory; the factory receives the optional integer
    parameter from the textual form ``approx:<name>[:k]``."""
    _STRATEGY_FACTORIES[name] = factory


def resolve_strategy(name: str, param: int | None = None) -> ApproxStrategy:
    try:
        factory = _STRATEGY_FACTORIES[name]
    except KeyError:
        known = ", ".join(sorted(_STRATEGY_FACTORIES)) or "none"
        raise UnknownStrategyError(
            f"no approximation strategy named {name!r} (registered: {known})"
        ) from None
    return factory(param)


register_strategy(
    "uniform", lambda param: uniform_strategy(DEFAULT_UNIFORM_K if param is None else param)
)


def _require_valid(ast: Predicate, env: EvalEnv) -> None:
    diags = validate(ast, env.bindings)
    if diags:
        raise ValidationFailedError(diags)


# --- strict machinery ---------------------------------------------------


def _atom_mask(
    atom: Atom, xs: np.ndarray, ys: np.ndarray, taus: np.ndarray, env: EvalEnv
) -> np.ndarray:
    target = env.bindings[atom.rhs]
    if isinstance(target, Region):
        within = (
            (xs >= target.x_min)
            & (xs <= target.x_max)
            & (ys >= target.y_min)
            & (ys <= target.y_max)
        )
        if atom.op is Op.WITHIN:
            return within
        if atom.op is Op.INSIDE:
            return (
                (xs > target.x_min)
                & (xs < target.x_max)
                & (ys > target.y_min)
                & (ys < target.y_max)
            )
        return ~within  # OUTSIDE; BEFORE/AFTER on regions is rejected by validation
    if atom.op is Op.WITHIN:
        return (taus >= target.tau_s) & (taus <= target.tau_e)
    if atom.op is Op.INSIDE:
        return (taus > target.tau_s) & (taus < target.tau_e)
    if atom.op is Op.OUTSIDE:
        return (taus < target.tau_s) | (taus > target.tau_e)
    if atom.op is Op.BEFORE:
        return taus < target.tau_s
    return taus > target.tau_e


def _body_mask(
    body: Body, xs: np.ndarray, ys: np.ndarray, taus: np.ndarray, env: EvalEnv
) -> np.ndarray:
    if isinstance(body, Atom):
        return _atom_mask(body, xs, ys, taus, env)
    if isinstance(body, Not):
        return ~_body_mask(body.child, xs, ys, taus, env)
    masks = [_body_mask(p, xs, ys, taus, env) for p in body.parts]
    out = masks[0]
    for m in masks[1:]:
        out = (out & m) if isinstance(body, And) else (out | m)
    return out


def _atom_at_point(atom: Atom, p: TrajectoryPoint, env: EvalEnv) -> bool:
    target = env.bindings[atom.rhs]
    if isinstance(target, Region):
        cls = classify_point_region(p.x, p.y, target)
        if atom.op is Op.WITHIN:
            return cls is not PointClass.EXTERIOR
        if atom.op is Op.INSIDE:
            return cls is PointClass.INTERIOR
        return cls is PointClass.EXTERIOR
    cls = classify_time_interval(p.tau, target)
    if atom.op is Op.WITHIN:
        return cls in (TimeClass.INTERIOR, TimeClass.BOUNDARY)
    if atom.op is Op.INSIDE:
        return cls is TimeClass.INTERIOR
    if atom.op is Op.OUTSIDE:
        return cls in (TimeClass.BEFORE, TimeClass.AFTER)
    if atom.op is Op.BEFORE:
        return cls is TimeClass.BEFORE
    return cls is TimeClass.AFTER


def _ground_body(body: Body, t: Trajectory, env: EvalEnv) -> bool:
    if isinstance(body, Atom):
        p = t.points[0] if body.subject is PointRef.FIRST else t.points[-1]
        return _atom_at_point(body, p, env)
    if isinstance(body, Not):
        return not _ground_body(body.child, t, env)
    if isinstance(body, And):
        return all(_ground_body(p, t, env) for p in body.parts)
    return any(_ground_body(p, t, env) for p in body.parts)


def _point_body(body: Body, p: TrajectoryPoint, env: EvalEnv) -> bool:
    """Body truth at one concrete point, for quantifiers over a 1-point trajectory."""
    if isinstance(body, Atom):
        return _atom_at_point(body, p, env)
    if isinstance(body, Not):
        return not _point_body(body.child, p, env)
    if isinstance(body, And):
        return all(_point_body(c, p, env) for c in body.parts)
    return any(_point_body(c, p, env) for c in body.parts)


def _strict_clause(clause: QuantifiedClause, t: Trajectory, env: EvalEnv) -> bool:
    if clause.domain is Domain.ALL_POINTS:
        xs, ys, taus = t.xs, t.ys, t.taus
    else:
        xs, ys, taus = t.xs[1:-1], t.ys[1:-1], t.taus[1:-1]
    if xs.size == 0:
        return clause.quantifier is Quantifier.FORALL
    mask = _body_mask(clause.body, xs, ys, taus, env)
    return bool(mask.any() if clause.quantifier is Quantifier.EXISTS else mask.all())


def eval_strict(ast: Predicate, t: Trajectory, env: EvalEnv) -> bool:
    """Truth of the predicate using only the recorded points."""
    _require_valid(ast, env)
    for clause in ast.clauses:
        if isinstance(clause, GroundClause):
            ok = _ground_body(clause.body, t, env)
        else:
            ok = _strict_clause(clause, t, env)
        if not ok:
            return False
    return True


# --- relaxed machinery --------------------------------------------------


def _body_params(body: Body, seg: Segment, env: EvalEnv) -> ParamSet:
    if isinstance(body, Atom):
        target = env.bindings[body.rhs]
        if isinstance(target, Region):
            if body.op is Op.WITHIN:
                return segment_region_params(seg, target, PointClass.INTERIOR).union(
                    segment_region_params(seg, target, PointClass.BOUNDARY)
                )
            if body.op is Op.INSIDE:
                return segment_region_params(seg, target, PointClass.INTERIOR)
            return segment_region_params(seg, target, PointClass.EXTERIOR)
        if body.op is Op.WITHIN:
            return segment_interval_params(seg, target, TimeClass.INTERIOR).union(
                segment_interval_params(seg, target, TimeClass.BOUNDARY)
            )
        if body.op is Op.INSIDE:
            return segment_interval_params(seg, target, TimeClass.INTERIOR)
        if body.op is Op.OUTSIDE:
            return segment_interval_params(seg, target, TimeClass.BEFORE).union(
                segment_interval_params(seg, target, TimeClass.AFTER)
            )
        if body.op is Op.BEFORE:
            return segment_interval_params(seg, target, TimeClass.BEFORE)
        return segment_interval_params(seg, target, TimeClass.AFTER)
    if isinstance(body, Not):
        return _body_params(body.child, seg, env).complement()
    sets = [_body_params(p, seg, env) for p in body.parts]
    out = sets[0]
    for s in sets[1:]:
        out = out.intersect(s) if isinstance(body, And) else out.union(s)
    return out


def _segment_domain(index: int, count: int, domain: Domain) -> ParamSet:
    """Parameter range of one segment that the quantifier owns.

    Interior vertices are owned by the segment that starts there, so ranges
    are [0, 1) except the final segment. Under TFL the very first parameter
    (the trajectory's first point) and the final endpoint are excluded.
    """
    last = index == count - 1
    if domain is Domain.ALL_POINTS:
        return ParamSet((ParamInterval(0.0, 1.0, True, last),))
    return ParamSet((ParamInterval(0.0, 1.0, index > 0, False),))


def _relaxed_clause(clause: QuantifiedClause, t: Trajectory, env: EvalEnv) -> bool:
    segs = segments(t)
    if not segs:
        if clause.domain is Domain.INNER_POINTS:
            return clause.quantifier is Quantifier.FORALL
        # one recorded point, no continuum: both quantifiers reduce to the body there
        return _point_body(clause.body, t.points[0], env)
    exists = clause.quantifier is Quantifier.EXISTS
    for i, seg in enumerate(segs):
        dom = _segment_domain(i, len(segs), clause.domain)
        body_set = _body_params(clause.body, seg, env)
        if exists:
            if not body_set.intersect(dom).is_empty:
                return True
        else:
            if not body_set.complement().intersect(dom).is_empty:
                return False
    return not exists


def eval_relaxed(ast: Predicate, t: Trajectory, env: EvalEnv) -> bool:
    """Truth of the predicate over the interpolated continuum, computed exactly."""
    _require_valid(ast, env)
    for clause in ast.clauses:
        if isinstance(clause, GroundClause):
            ok = _ground_body(clause.body, t, env)
        else:
            ok = _relaxed_clause(clause, t, env)
        if not ok:
            return False
    return True


# --- approximated machinery ---------------------------------------------


def _augmented_arrays(
    t: Trajectory, strategy: ApproxStrategy
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xs = [t.points[0].x]
    ys = [t.points[0].y]
    taus = [t.points[0].tau]
    for seg in segments(t):
        lams = list(strategy.point_generator(seg))
        if any(b < a for a, b in zip(lams, lams[1:])):
            raise ValueError(f"strategy {strategy.name!r} returned unsorted parameters")
        for lam in lams:
            if not 0.0 <= lam <= 1.0:
                raise ValueError(
                    f"strategy {strategy.name!r} returned parameter {lam} outside [0, 1]"
                )
            if 0.0 < lam < 1.0:
                x, y, tau = lerp(seg, lam)
                xs.append(x)
                ys.append(y)
                taus.append(tau)
        xs.append(seg.end.x)
        ys.append(seg.end.y)
        taus.append(seg.end.tau)
    return np.array(xs), np.array(ys), np.array(taus)


def eval_approximated(
    ast: Predicate, t: Trajectory, env: EvalEnv, strategy: ApproxStrategy
) -> bool:
    """Strict evaluation over the trajectory plus strategy-generated points.

    The augmented trajectory keeps the original first and last points as its
    endpoints, so ground clauses and the TFL domain are unaffected by how
    many intermediate points a strategy adds.
    """
    _require_valid(ast, env)
    xs, ys, taus = _augmented_arrays(t, strategy)
    for clause in ast.clauses:
        if isinstance(clause, GroundClause):
            if not _ground_body(clause.body, t, env):
                return False
            continue
        if clause.domain is Domain.ALL_POINTS:
            cx, cy, ct = xs, ys, taus
        else:
            cx, cy, ct = xs[1:-1], ys[1:-1], taus[1:-1]
        if cx.size == 0:
            ok = clause.quantifier is Quantifier.FORALL
        else:
            mask = _body_mask(clause.body, cx, cy, ct, env)
            ok = bool(mask.any() if clause.quantifier is Quantifier.EXISTS else mask.all())
        if not ok:
            return False
    return True


def evaluate(ast: Predicate, t: Trajectory, env: EvalEnv, s: Strictness) -> bool:
    """Evaluate under the mode named by a Strictness value."""
    if s.kind == "strict":
        return eval_strict(ast, t, env)
    if s.kind == "relaxed":
        return eval_relaxed(ast, t, env)
    if s.kind == "approximated":
        strategy = resolve_strategy(s.strategy, s.param)
        return eval_approximated(ast, t, env, strategy)
    raise ValueError(f"unknown strictness kind {s.kind!r}")


def select_st(
    rel: TrajectoriesRelation, ast: Predicate, env: EvalEnv, s: Strictness
) -> TrajectoriesRelation:
    """Filter a relation to the rows whose trajectory satisfies the predicate.

    Row order and schema are preserved. Row evaluations are independent and
    pure, so they could run concurrently; results do not depend on order of
    evaluation.
    """
    _require_valid(ast, env)
    if s.kind == "approximated":
        resolve_strategy(s.strategy, s.param)  # fail fast before touching rows
    kept = tuple(row for row in rel.rows if evaluate(ast, row[1], env, s))
    return TrajectoriesRelation(kept)

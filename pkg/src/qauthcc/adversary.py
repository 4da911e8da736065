"""Monte Carlo estimates under Eve's strategies.

Every trial is an independent session seeded from ``(seed, trial_index)``,
so estimates are bit-exact reproducible and do not depend on whether the
trials run sequentially or in worker processes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping

from . import seeding
from .analysis import fit_protocol
from .errors import ArgumentError, UnsupportedError
from .ledger import AuthKind, ComplexityExpr, ModelClass
from .protocols import Outcome, execute, get_spec, resolve_params
from .strategies import (
    AdversaryKind,
    FlipQubit,
    Impersonation,
    InterceptResend,
    NoAdversary,
    RewriteClassical,
    Substitution,
    UniformKeyGuess,
    UniformRandomBasis,
)

MIN_TRIALS = 100
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class RateEstimate:
    point: float
    lo: float
    hi: float
    trials: int
    hits: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ArgumentError("a rate needs at least one trial")

    def as_dict(self) -> dict:
        return {
            "point": self.point,
            "lo": self.lo,
            "hi": self.hi,
            "trials": self.trials,
            "hits": self.hits,
            "seed": self.seed,
        }


def wilson_interval(hits: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    p = hits / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def estimate(hits: int, trials: int, seed: int) -> RateEstimate:
    lo, hi = wilson_interval(hits, trials)
    return RateEstimate(hits / trials, lo, hi, trials, hits, seed)


def _run_chunk(args) -> list[Outcome]:
    protocol_id, params, adversary, seed, start, stop = args
    children = seeding.split(seed, stop)
    return [execute(protocol_id, params, children[i], adversary).outcome for i in range(start, stop)]


def run_trials(
    protocol_id: str,
    params: Mapping | None,
    adversary,
    trials: int,
    seed: int,
    workers: int = 1,
) -> Iterator[Outcome]:
    """Outcomes of ``trials`` independent sessions, in trial order."""
    spec = get_spec(protocol_id)
    if not spec.simulable:
        raise UnsupportedError(f"{protocol_id} is accounting-only and cannot be simulated")
    params = dict(params or {})
    if workers <= 1:
        for child in seeding.split(seed, trials):
            yield execute(protocol_id, params, child, adversary).outcome
        return
    step = math.ceil(trials / workers)
    chunks = [(protocol_id, params, adversary, seed, i, min(i + step, trials)) for i in range(0, trials, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for outcomes in pool.map(_run_chunk, chunks):
            yield from outcomes


def _check_trials(trials: int) -> None:
    if trials < MIN_TRIALS:
        raise ArgumentError(f"need at least {MIN_TRIALS} trials, got {trials}")


def detection_rate(
    protocol_id: str,
    params: Mapping | None,
    adversary: AdversaryKind | None,
    trials: int,
    seed: int,
    workers: int = 1,
) -> RateEstimate:
    """Fraction of sessions in which the parties flag tampering."""
    _check_trials(trials)
    hits = sum(o.eavesdrop_detected for o in run_trials(protocol_id, params, adversary, trials, seed, workers))
    return estimate(hits, trials, seed)


def impersonation_acceptance(
    protocol_id: str,
    params: Mapping | None,
    trials: int,
    seed: int,
    workers: int = 1,
) -> RateEstimate:
    """Fraction of sessions in which Eve, holding no key or pairs, is accepted as Alice."""
    spec = get_spec(protocol_id)
    if spec.kind is not AuthKind.IDENTITY:
        raise UnsupportedError(f"{protocol_id} authenticates data origin; impersonation applies to identity protocols")
    _check_trials(trials)
    adversary = Impersonation(UniformKeyGuess())
    hits = sum(o.accepted for o in run_trials(protocol_id, params, adversary, trials, seed, workers))
    return estimate(hits, trials, seed)


@dataclass(frozen=True)
class AdversarialCost:
    protocol_id: str
    model: ModelClass
    per_run: ComplexityExpr
    restarts: float
    failure: RateEstimate
    episodes: int
    notation: str
    expected_communications: float

    @property
    def expression(self) -> ComplexityExpr:
        """The per-run expression scaled by the measured restart factor."""
        if math.isinf(self.restarts):
            raise ArgumentError("no run succeeded; the restart factor is unbounded")
        r = Fraction(str(round(self.restarts, 4)))
        e = self.per_run
        return ComplexityExpr(e.coeff_n * r, e.coeff_m * r, e.constant * r, e.bound)

    def __iter__(self):
        yield self.expression
        yield self.failure

    def as_dict(self) -> dict:
        return {
            "protocol": self.protocol_id,
            "model": self.model.value,
            "per_run": self.per_run.as_dict(),
            "per_run_rendered": self.per_run.render(),
            "restarts": None if math.isinf(self.restarts) else self.restarts,
            "failure": self.failure.as_dict(),
            "episodes": self.episodes,
            "notation": self.notation,
            "expected_communications": (
                None if math.isinf(self.expected_communications) else self.expected_communications
            ),
        }


def adversarial_cost(
    protocol_id: str,
    params: Mapping | None,
    adversary: AdversaryKind | None,
    trials: int,
    seed: int,
    workers: int = 1,
) -> AdversarialCost:
    """Expected communications until an accepted, uncorrupted run, restarting on failure.

    The ``trials`` runs are independent, so cutting their sequence after
    every success simulates the restart policy directly; ``restarts`` is
    the mean length of the completed episodes.
    """
    spec = get_spec(protocol_id)
    if not spec.simulable:
        raise UnsupportedError(f"{protocol_id} is accounting-only and cannot be simulated")
    p = resolve_params(params)
    analysis = fit_protocol(protocol_id, seed=0, s=p["s"])
    per_run = analysis.fit.expr
    sizes = {"n": p["n"], "m": p["m"]}
    base = float(per_run.at(sizes))
    symbol = analysis.fit.model.symbol

    if adversary is None or isinstance(adversary, NoAdversary):
        failure = RateEstimate(0.0, 0.0, 0.0, 1, 0, seed)
        return AdversarialCost(
            protocol_id, analysis.fit.model, per_run, 1.0, failure, 0,
            f"{symbol}({spec.kind.function}) = {per_run.render()}", base,
        )

    _check_trials(trials)
    failures = 0
    run_length = 0
    episodes: list[int] = []
    for outcome in run_trials(protocol_id, p, adversary, trials, seed, workers):
        run_length += 1
        if outcome.failed:
            failures += 1
        else:
            episodes.append(run_length)
            run_length = 0
    restarts = sum(episodes) / len(episodes) if episodes else math.inf
    return AdversarialCost(
        protocol_id,
        analysis.fit.model,
        per_run,
        restarts,
        estimate(failures, trials, seed),
        len(episodes),
        f"{symbol}_E({spec.kind.function}) = {restarts:.4g} x ({per_run.render()})",
        restarts * base,
    )


def from_name(name: str, protocol_id: str) -> AdversaryKind | None:
    """Adversary used by the command line for ``--adversary NAME``."""
    if name == "none":
        return None
    if name == "intercept":
        return InterceptResend(UniformRandomBasis())
    if name == "substitute":
        if protocol_id == "zeng_guo":
            return Substitution(RewriteClassical((1,)))
        return Substitution(FlipQubit(0))
    if name == "impersonate":
        if get_spec(protocol_id).kind is not AuthKind.IDENTITY:
            raise UnsupportedError(f"{protocol_id} authenticates data origin; impersonation does not apply")
        return Impersonation(UniformKeyGuess())
    raise ArgumentError(f"unknown adversary {name!r}")

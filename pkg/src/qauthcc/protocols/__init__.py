"""Executable protocols and the registry of all ten analysed protocols."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..channel import ALICE, BOB, Session, open_session
from ..errors import ConfigurationError, UnsupportedError
from ..ledger import ResourceTally, tally
from ..seeding import SeedLike
from ..strategies import NoAdversary
from .common import ANGLE_LEVELS, ANGLE_STEP, Outcome, random_angles
from .curty_santos import run_curty_santos
from .kanamori import run_kanamori
from .li_barnum import run_li_barnum
from .li_zhang import run_li_zhang
from .registry import PROTOCOL_IDS, ProtocolSpec, get_spec, registry
from .zeng_guo import run_zeng_guo
from .zhang_li_guo import run_zhang_li_guo, run_zhang_li_guo_detailed

DEFAULT_PARAMS = {"n": 4, "m": 4, "s": 4, "k": None}

_RUNNERS: dict[str, Callable[[Mapping, Session], Outcome]] = {
    "kanamori": lambda p, s: run_kanamori(p["n"], session=s),
    "zhang_li_guo": lambda p, s: run_zhang_li_guo(p["n"], p["k"], session=s),
    "li_barnum": lambda p, s: run_li_barnum(p["n"], session=s),
    "li_zhang": lambda p, s: run_li_zhang(p["m"], session=s),
    "curty_santos": lambda p, s: run_curty_santos(p["m"], session=s),
    "zeng_guo": lambda p, s: run_zeng_guo(p["n"], p["s"], session=s),
}

SIMULABLE_IDS = tuple(pid for pid in PROTOCOL_IDS if pid in _RUNNERS)


@dataclass
class Execution:
    protocol_id: str
    params: dict
    outcome: Outcome
    session: Session

    @property
    def tally(self) -> ResourceTally:
        return tally(self.session.event_log())


def resolve_params(params: Mapping | None = None) -> dict:
    out = dict(DEFAULT_PARAMS)
    for key, value in (params or {}).items():
        if key not in out:
            raise ConfigurationError(f"unknown protocol parameter {key!r}")
        if value is not None:
            out[key] = value
    if out["k"] is None:
        out["k"] = out["n"]
    return out


def execute(
    protocol_id: str,
    params: Mapping | None = None,
    seed: SeedLike = 0,
    adversary=None,
) -> Execution:
    """Run one session of a simulable protocol, optionally under attack."""
    spec = get_spec(protocol_id)
    if not spec.simulable:
        raise UnsupportedError(
            f"{protocol_id} is accounting-only (declared {spec.declared_complexity.render()}); "
            "use `analyze` to inspect it"
        )
    p = resolve_params(params)
    session = open_session({ALICE, BOB}, seed)
    if adversary is not None and not isinstance(adversary, NoAdversary):
        session.install_adversary(adversary)
    outcome = _RUNNERS[protocol_id](p, session)
    return Execution(protocol_id, p, outcome, session)


def honest_tally(protocol_id: str, n: int, m: int, seed: SeedLike = 0, **extra) -> ResourceTally:
    """Tally of one honest run at sizes ``(n, m)``; used as a fitting runner."""
    params = {"n": n, "m": m, **extra}
    return execute(protocol_id, params, seed).tally


__all__ = [
    "ANGLE_LEVELS",
    "ANGLE_STEP",
    "DEFAULT_PARAMS",
    "Execution",
    "Outcome",
    "PROTOCOL_IDS",
    "ProtocolSpec",
    "SIMULABLE_IDS",
    "execute",
    "get_spec",
    "honest_tally",
    "random_angles",
    "registry",
    "resolve_params",
    "run_curty_santos",
    "run_kanamori",
    "run_li_barnum",
    "run_li_zhang",
    "run_zeng_guo",
    "run_zhang_li_guo",
    "run_zhang_li_guo_detailed",
]

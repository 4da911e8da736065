from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..channel import ALICE, BOB, EVE, PartyId, Session, open_session
from ..errors import ConfigurationError
from ..seeding import SeedLike
from ..strategies import is_impersonation

ANGLE_LEVELS = 1024
ANGLE_STEP = math.pi / ANGLE_LEVELS


@dataclass
class Outcome:
    accepted: bool
    eavesdrop_detected: bool
    message: tuple[int, ...] | None = None
    recovered_message: tuple[int, ...] | None = None
    session_key: tuple[float, ...] | None = None
    directions: dict[str, bool] = field(default_factory=dict)

    @property
    def corrupted(self) -> bool:
        return self.message is not None and self.recovered_message != self.message

    @property
    def failed(self) -> bool:
        """Rejected, or accepted with a wrong message; either forces a restart."""
        return not self.accepted or self.corrupted

    def summary(self) -> dict:
        out = {
            "accepted": self.accepted,
            "eavesdrop_detected": self.eavesdrop_detected,
        }
        if self.message is not None:
            out["message"] = "".join(map(str, self.message))
            out["recovered_message"] = "".join(map(str, self.recovered_message or ()))
        if self.session_key is not None:
            out["session_key_levels"] = [int(round(a / ANGLE_STEP)) for a in self.session_key]
        if self.directions:
            out["directions"] = dict(self.directions)
        return out


def random_angles(rng: np.random.Generator, n: int) -> tuple[float, ...]:
    """``n`` angles uniform over the 1024 quantization levels of ``[0, pi)``."""
    return tuple(float(ANGLE_STEP * k) for k in rng.integers(0, ANGLE_LEVELS, size=n))


def random_bits(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    return tuple(int(b) for b in rng.integers(0, 2, size=n))


def check_angles(angles: Sequence[float], n: int, what: str = "key") -> tuple[float, ...]:
    angles = tuple(float(a) for a in angles)
    if len(angles) != n:
        raise ConfigurationError(f"{what} has {len(angles)} angles, expected {n}")
    for a in angles:
        if not (0.0 <= a < math.pi):
            raise ConfigurationError(f"{what} angle {a} outside [0, pi)")
    return angles


def check_bits(bits: Sequence[int], n: int, what: str) -> tuple[int, ...]:
    bits = tuple(int(b) for b in bits)
    if len(bits) != n:
        raise ConfigurationError(f"{what} has {len(bits)} bits, expected {n}")
    if any(b not in (0, 1) for b in bits):
        raise ConfigurationError(f"{what} must contain only 0/1")
    return bits


def check_size(value: int, name: str, minimum: int = 1) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < minimum:
        raise ConfigurationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def ensure_session(session: Session | None, seed: SeedLike) -> Session:
    return session if session is not None else open_session({ALICE, BOB}, seed)


def claimant(session: Session) -> tuple[PartyId, np.random.Generator, bool]:
    """Who plays Alice's role: Alice herself, or Eve when impersonating."""
    if is_impersonation(session.adversary):
        return EVE, session.eve_rng, True
    return ALICE, session.rng, False

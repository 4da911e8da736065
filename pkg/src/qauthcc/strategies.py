"""Eve's strategies.

Channel-level strategies implement the session hooks ``on_quantum`` and
``on_classical``; :class:`Impersonation` has no hooks and is instead read
by the protocol runners, which then let Eve play the claimant's role
without any key material or entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import qsim
from .channel import EVE, PartyId, Session
from .errors import ArgumentError
from .qsim import Basis


@dataclass(frozen=True)
class NoAdversary:
    label = "none"


@dataclass(frozen=True)
class UniformRandomBasis:
    """Computational or diagonal, chosen independently per qubit."""

    choices: tuple[Basis, ...] = (qsim.Computational, qsim.Diagonal)

    def __post_init__(self):
        if not self.choices:
            raise ArgumentError("need at least one basis to choose from")


@dataclass(frozen=True)
class InterceptResend:
    """Measure in-flight qubits and forward the post-measurement states.

    ``legs`` restricts the attack to sends with those tags.
    """

    basis: Basis | UniformRandomBasis = UniformRandomBasis()
    legs: tuple[str, ...] | None = None

    label = "intercept-resend"

    def __post_init__(self):
        if not isinstance(self.basis, (Basis, UniformRandomBasis)):
            raise ArgumentError(f"unsupported basis strategy {self.basis!r}")
        if self.legs is not None:
            object.__setattr__(self, "legs", tuple(self.legs))

    def on_quantum(self, session: Session, handles: Sequence[int], sender: PartyId, receiver: PartyId, tag: str) -> None:
        if self.legs is not None and tag not in self.legs:
            return
        for h in handles:
            if isinstance(self.basis, UniformRandomBasis):
                basis = self.basis.choices[int(session.eve_rng.integers(len(self.basis.choices)))]
            else:
                basis = self.basis
            session.measure(EVE, [h], basis)


@dataclass(frozen=True)
class FlipQubit:
    """Apply X to the ``index``-th qubit to cross the quantum channel (0-based, session-wide)."""

    index: int = 0

    def __post_init__(self):
        if self.index < 0:
            raise ArgumentError("qubit index must be non-negative")


@dataclass(frozen=True)
class RewriteClassical:
    """XOR ``mask`` onto the leading bits of every classical payload."""

    mask: tuple[int, ...] = (1,)

    def __post_init__(self):
        mask = tuple(int(b) for b in self.mask)
        if not mask or any(b not in (0, 1) for b in mask) or not any(mask):
            raise ArgumentError("mask must be a non-empty bit tuple with at least one 1")
        object.__setattr__(self, "mask", mask)


@dataclass(frozen=True)
class Substitution:
    rule: FlipQubit | RewriteClassical = FlipQubit(0)

    label = "substitution"

    def __post_init__(self):
        if not isinstance(self.rule, (FlipQubit, RewriteClassical)):
            raise ArgumentError(f"unsupported tamper rule {self.rule!r}")

    def on_quantum(self, session: Session, handles: Sequence[int], sender: PartyId, receiver: PartyId, tag: str) -> None:
        if not isinstance(self.rule, FlipQubit):
            return
        offset = self.rule.index - session.qubits_in_flight
        if 0 <= offset < len(handles):
            session.apply(EVE, qsim.X, [handles[offset]])

    def on_classical(self, session: Session, bits: tuple[int, ...], sender: PartyId, receiver: PartyId, tag: str) -> tuple[int, ...]:
        if not isinstance(self.rule, RewriteClassical):
            return bits
        out = list(bits)
        for i, b in enumerate(self.rule.mask[: len(out)]):
            out[i] ^= b
        return tuple(out)


@dataclass(frozen=True)
class UniformKeyGuess:
    """Eve replaces every secret she lacks with a uniformly random guess."""


@dataclass(frozen=True)
class Impersonation:
    guess: UniformKeyGuess = UniformKeyGuess()

    label = "impersonation"


AdversaryKind = NoAdversary | InterceptResend | Substitution | Impersonation


def is_impersonation(adversary) -> bool:
    return isinstance(adversary, Impersonation)


def describe(adversary) -> str:
    if adversary is None or isinstance(adversary, NoAdversary):
        return "none"
    if isinstance(adversary, InterceptResend):
        b = adversary.basis
        basis = "uniform-random" if isinstance(b, UniformRandomBasis) else f"fixed({b.angle:.6g})"
        legs = "" if adversary.legs is None else f", legs={','.join(adversary.legs)}"
        return f"intercept-resend[{basis}{legs}]"
    if isinstance(adversary, Substitution):
        r = adversary.rule
        if isinstance(r, FlipQubit):
            return f"substitution[flip-qubit({r.index})]"
        return f"substitution[rewrite-classical({''.join(map(str, r.mask))})]"
    if isinstance(adversary, Impersonation):
        return "impersonation[uniform-key-guess]"
    raise ArgumentError(f"unknown adversary {adversary!r}")

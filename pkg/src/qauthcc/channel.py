"""Simulated communication fabric between named parties.

A :class:`Session` owns one logical quantum register shared by all
parties, an ownership map (qubit handle -> party) and an append-only
event log. Parties may only touch qubits they own; sends are the only way
ownership moves. An installed adversary sees every send before delivery.

The register is stored as a product of small dense blocks. Blocks merge
when a gate spans them and measured qubits are factored back out, so
sessions with many independent pairs never build one huge state vector.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import qsim, seeding
from .errors import (
    ArgumentError,
    CapacityError,
    ConfigurationError,
    InvalidSizeError,
    ProtocolLogicError,
    SessionStateError,
)
from .qsim import Basis, BellKind, Gate, StateVector

DEFAULT_CAPACITY = 1024


class PartyId(enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"
    EVE = "Eve"
    TRUSTED_CENTER = "TrustedCenter"

    def __str__(self) -> str:
        return self.value


ALICE, BOB, EVE, TRUSTED_CENTER = PartyId.ALICE, PartyId.BOB, PartyId.EVE, PartyId.TRUSTED_CENTER


class EbitPhase(enum.Enum):
    PRIOR = "Prior"
    IN_PROTOCOL = "InProtocol"


@dataclass(frozen=True)
class QuantumSend:
    count: int


@dataclass(frozen=True)
class ClassicalSend:
    count: int


@dataclass(frozen=True)
class EbitDistribution:
    count: int
    phase: EbitPhase


EventKind = QuantumSend | ClassicalSend | EbitDistribution


@dataclass(frozen=True)
class ChannelEvent:
    seq: int
    sender: PartyId
    receiver: PartyId
    kind: EventKind
    tag: str

    def __post_init__(self):
        if self.kind.count < 1:
            raise ArgumentError("event counts must be >= 1")


class _Register:
    """Product of dense blocks indexed by stable qubit handles."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._blocks: dict[int, tuple[StateVector, list[int]]] = {}
        self._where: dict[int, int] = {}
        self._next_handle = 0
        self._next_block = 0

    def __len__(self) -> int:
        return len(self._where)

    def __contains__(self, handle: int) -> bool:
        return handle in self._where

    def allocate(self, count: int) -> list[int]:
        if len(self._where) + count > self.capacity:
            raise CapacityError(
                f"allocating {count} qubits exceeds session capacity {self.capacity}"
            )
        zero = qsim.new_register(1)
        handles = []
        for _ in range(count):
            h = self._next_handle
            self._next_handle += 1
            self._new_block(zero, [h])
            handles.append(h)
        return handles

    def _new_block(self, state: StateVector, handles: list[int]) -> None:
        b = self._next_block
        self._next_block += 1
        self._blocks[b] = (state, handles)
        for h in handles:
            self._where[h] = b

    def _merge(self, handles: Sequence[int]) -> int:
        ids = []
        for h in handles:
            b = self._where[h]
            if b not in ids:
                ids.append(b)
        if len(ids) == 1:
            return ids[0]
        parts = [self._blocks.pop(b) for b in ids]
        try:
            state = qsim.tensor(*(p[0] for p in parts))
        except InvalidSizeError as exc:
            for b, p in zip(ids, parts):
                self._blocks[b] = p
            raise CapacityError(str(exc)) from exc
        merged = [h for p in parts for h in p[1]]
        self._new_block(state, merged)
        return self._where[merged[0]]

    def _positions(self, block: int, handles: Sequence[int]) -> list[int]:
        order = self._blocks[block][1]
        return [order.index(h) for h in handles]

    def apply(self, gate: Gate, handles: Sequence[int]) -> None:
        b = self._merge(handles)
        state, order = self._blocks[b]
        self._blocks[b] = (qsim.apply_gate(state, gate, self._positions(b, handles)), order)

    def measure(self, handles: Sequence[int], basis: Basis, rng: np.random.Generator) -> tuple[int, ...]:
        bits = []
        for h in handles:
            b = self._where[h]
            state, order = self._blocks[b]
            (bit,), state = qsim.measure(state, (order.index(h),), basis, rng)
            self._blocks[b] = (state, order)
            self._factor_out(b, [h])
            bits.append(bit)
        return tuple(bits)

    def measure_bell(self, a: int, b_: int, rng: np.random.Generator) -> BellKind:
        blk = self._merge((a, b_))
        state, order = self._blocks[blk]
        kind, state = qsim.measure_bell(state, order.index(a), order.index(b_), rng)
        self._blocks[blk] = (state, order)
        self._factor_out(blk, [a, b_])
        return kind

    def _factor_out(self, block: int, handles: list[int]) -> None:
        state, order = self._blocks[block]
        if len(order) == len(handles):
            return
        group, rest = qsim.split_qubits(state, self._positions(block, handles))
        remaining = [h for h in order if h not in handles]
        del self._blocks[block]
        self._new_block(group, list(handles))
        self._new_block(rest, remaining)

    def state_of(self, handles: Sequence[int]) -> StateVector:
        """State of exactly ``handles`` (in that order); they must be unentangled from the rest."""
        blocks = {self._where[h] for h in handles}
        parts = []
        for b in sorted(blocks):
            state, order = self._blocks[b]
            mine = [h for h in order if h in handles]
            if len(mine) != len(order):
                state, _ = qsim.split_qubits(state, [order.index(h) for h in mine])
            parts.append((state, mine))
        state = qsim.tensor(*(p[0] for p in parts))
        flat = [h for p in parts for h in p[1]]
        return qsim.permute(state, [flat.index(h) for h in handles])

    def discard(self, handles: Sequence[int]) -> None:
        """Drop ``handles``; together they must be unentangled from every other qubit."""
        by_block: dict[int, list[int]] = {}
        for h in handles:
            by_block.setdefault(self._where[h], []).append(h)
        for b, mine in by_block.items():
            self._factor_out(b, mine)
        for h in handles:
            b = self._where.pop(h)
            self._blocks.pop(b, None)


class Session:
    """One protocol execution: parties, register, adversary and event log."""

    _ids = itertools.count(1)

    def __init__(
        self,
        participants: Iterable[PartyId],
        seed: seeding.SeedLike = 0,
        capacity: int = DEFAULT_CAPACITY,
    ):
        parts = frozenset(participants)
        if PartyId.EVE in parts:
            raise ConfigurationError("Eve is never a declared participant; install an adversary instead")
        missing = {ALICE, BOB} - parts
        if missing:
            raise ConfigurationError(
                f"session needs Alice and Bob, missing {sorted(str(p) for p in missing)}"
            )
        self.id = f"session-{next(self._ids)}"
        self.seed = seed
        self.participants = parts
        honest, eve = seeding.split(seed, 2)
        self.rng = seeding.generator(honest)
        self.eve_rng = seeding.generator(eve)
        self.adversary = None
        self._log: list[ChannelEvent] = []
        self._register = _Register(capacity)
        self._owner: dict[int, PartyId] = {}
        self.qubits_in_flight = 0

    # -- bookkeeping -------------------------------------------------------

    def _party(self, party: PartyId) -> None:
        if party is EVE:
            if self.adversary is None:
                raise ProtocolLogicError("Eve acts only when an adversary is installed")
        elif party not in self.participants:
            raise ProtocolLogicError(f"{party} is not a participant of {self.id}")

    def _owned(self, party: PartyId, handles: Sequence[int]) -> None:
        for h in handles:
            owner = self._owner.get(h)
            if owner is None:
                raise ProtocolLogicError(f"qubit handle {h} does not exist")
            if owner is not party:
                raise ProtocolLogicError(f"{party} tried to use qubit {h} owned by {owner}")

    def _append(self, sender: PartyId, receiver: PartyId, kind: EventKind, tag: str) -> None:
        self._log.append(ChannelEvent(len(self._log) + 1, sender, receiver, kind, tag))

    def owner(self, handle: int) -> PartyId:
        return self._owner[handle]

    def owned_by(self, party: PartyId) -> list[int]:
        return [h for h, p in self._owner.items() if p is party]

    @property
    def live_qubits(self) -> int:
        return len(self._register)

    def event_log(self) -> tuple[ChannelEvent, ...]:
        return tuple(self._log)

    def install_adversary(self, adversary) -> None:
        if self._log:
            raise SessionStateError("an adversary must be installed before the first communication")
        self.adversary = adversary

    def _rng_for(self, party: PartyId) -> np.random.Generator:
        return self.eve_rng if party is EVE else self.rng

    # -- local operations --------------------------------------------------

    def allocate(self, party: PartyId, count: int) -> list[int]:
        self._party(party)
        if count < 1:
            raise ArgumentError("allocate at least one qubit")
        handles = self._register.allocate(count)
        for h in handles:
            self._owner[h] = party
        return handles

    def apply(self, party: PartyId, gate: Gate, handles: Sequence[int]) -> None:
        self._party(party)
        handles = list(handles)
        self._owned(party, handles)
        if gate.arity == 2:
            self._register.apply(gate, handles)
        else:
            for h in handles:
                self._register.apply(gate, [h])

    def create_pair(self, party: PartyId, kind: BellKind) -> tuple[int, int]:
        a, b = self.allocate(party, 2)
        self._register.apply(qsim.H, [a])
        self._register.apply(qsim.CNOT, [a, b])
        if kind in (BellKind.PSI_PLUS, BellKind.PSI_MINUS):
            self._register.apply(qsim.X, [b])
        if kind in (BellKind.PHI_MINUS, BellKind.PSI_MINUS):
            self._register.apply(qsim.Z, [a])
        return a, b

    def measure(self, party: PartyId, handles: Sequence[int], basis: Basis = qsim.Computational) -> tuple[int, ...]:
        self._party(party)
        self._owned(party, handles)
        return self._register.measure(handles, basis, self._rng_for(party))

    def measure_bell(self, party: PartyId, a: int, b: int) -> BellKind:
        self._party(party)
        if a == b:
            raise ArgumentError("Bell measurement needs two distinct qubits")
        self._owned(party, (a, b))
        return self._register.measure_bell(a, b, self._rng_for(party))

    def discard(self, party: PartyId, handles: Sequence[int]) -> None:
        self._party(party)
        self._owned(party, handles)
        self._register.discard(handles)
        for h in handles:
            del self._owner[h]

    def state_of(self, handles: Sequence[int]) -> StateVector:
        """Omniscient view of a group of qubits, for verification only."""
        return self._register.state_of(list(handles))

    # -- communication -----------------------------------------------------

    def distribute_ebits(
        self,
        count: int,
        kind: BellKind = BellKind.PHI_PLUS,
        phase: EbitPhase = EbitPhase.PRIOR,
        holders: tuple[PartyId, PartyId] = (ALICE, BOB),
        tag: str = "ebits",
    ) -> list[tuple[int, int]]:
        """Share ``count`` Bell pairs; first half to ``holders[0]``, second to ``holders[1]``.

        Prior pairs exist before the protocol and cost nothing. In-protocol
        pairs are created by ``holders[0]`` and the second halves travel
        over the quantum channel (adversary hooks included).
        """
        if count < 1:
            raise ArgumentError("distribute at least one pair")
        src, dst = holders
        self._party(src)
        self._party(dst)
        if self.live_qubits + 2 * count > self._register.capacity:
            raise CapacityError(f"{count} pairs exceed session capacity {self._register.capacity}")
        pairs = [self.create_pair(src, kind) for _ in range(count)]
        self._append(src, dst, EbitDistribution(count, phase), tag)
        travelling = [b for _, b in pairs]
        if phase is EbitPhase.PRIOR:
            for h in travelling:
                self._owner[h] = dst
        else:
            self._transit(src, dst, travelling, tag)
        return pairs

    def _transit(self, sender: PartyId, receiver: PartyId, handles: list[int], tag: str) -> None:
        hook = getattr(self.adversary, "on_quantum", None)
        if hook is not None:
            for h in handles:
                self._owner[h] = EVE
            hook(self, handles, sender, receiver, tag)
        for h in handles:
            self._owner[h] = receiver
        self.qubits_in_flight += len(handles)

    def send_qubits(self, sender: PartyId, receiver: PartyId, handles: Sequence[int], tag: str) -> list[int]:
        self._party(sender)
        self._party(receiver)
        handles = list(handles)
        if not handles:
            raise ArgumentError("send at least one qubit")
        self._owned(sender, handles)
        self._append(sender, receiver, QuantumSend(len(handles)), tag)
        self._transit(sender, receiver, handles, tag)
        return handles

    def send_classical(self, sender: PartyId, receiver: PartyId, bits: Sequence[int], tag: str) -> tuple[int, ...]:
        self._party(sender)
        self._party(receiver)
        payload = tuple(int(b) for b in bits)
        if not payload:
            raise ArgumentError("classical payload must be non-empty")
        if any(b not in (0, 1) for b in payload):
            raise ArgumentError("classical payload must be bits")
        self._append(sender, receiver, ClassicalSend(len(payload)), tag)
        hook = getattr(self.adversary, "on_classical", None)
        if hook is not None:
            delivered = tuple(hook(self, payload, sender, receiver, tag))
            if len(delivered) != len(payload):
                raise ProtocolLogicError("adversary changed the classical payload length")
            return delivered
        return payload


def open_session(participants: Iterable[PartyId], seed: seeding.SeedLike = 0, capacity: int = DEFAULT_CAPACITY) -> Session:
    return Session(participants, seed, capacity)

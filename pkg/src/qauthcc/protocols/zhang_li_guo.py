"""Identity authentication with reusable shared pairs (Zhang, Li and Guo).

Alice and Bob hold ``2k`` prior ``|Phi+>`` pairs and a secret angle
``theta``. Both rotate their halves by ``theta`` and afterwards read their
halves in that rotated frame. Bob sends ``n <= k`` qubits in random pure
states ``|psi_i>``; Alice applies CNOT controlled by her half of pair
``i`` and returns them; Bob's CNOT controlled by his half undoes hers and
he checks each qubit in the ``{|psi_i>, |psi_i>^perp}`` basis.

Because the halves are perfectly correlated in the shared frame the pairs
come out untouched and can be reused.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..channel import ALICE, BOB, Session
from ..errors import BudgetError
from ..qsim import BellKind, CNOT, Rotated, X, polarization
from ..seeding import SeedLike
from .common import Outcome, check_angles, check_size, claimant, ensure_session, random_angles

TAGS = ("zlg:psi-to-alice", "zlg:psi-to-bob")


@dataclass
class ZhangLiGuoRun:
    outcome: Outcome
    pairs: list[tuple[int, int]]
    theta: float


def run_zhang_li_guo_detailed(
    n: int,
    k: int | None = None,
    theta: float | None = None,
    seed: SeedLike = 0,
    session: Session | None = None,
) -> ZhangLiGuoRun:
    n = check_size(n, "n")
    k = n if k is None else check_size(k, "k")
    if n > k:
        raise BudgetError(f"n={n} exceeds the pair budget k={k}")
    s = ensure_session(session, seed)
    theta = random_angles(s.rng, 1)[0] if theta is None else check_angles([theta], 1, "theta")[0]
    party, prng, impersonating = claimant(s)

    pairs = s.distribute_ebits(2 * k, BellKind.PHI_PLUS, tag="zlg:prior-pairs")
    for a, b in pairs:
        s.apply(ALICE, polarization(theta), [a])
        s.apply(BOB, polarization(theta), [b])

    alphas = random_angles(s.rng, n)
    psi = s.allocate(BOB, n)
    for q, alpha in zip(psi, alphas):
        s.apply(BOB, polarization(alpha), [q])
    s.send_qubits(BOB, party, psi, TAGS[0])

    for (a, _), q in zip(pairs, psi):
        if impersonating:
            # no pair half to control on: guess the control bit
            if prng.integers(2):
                s.apply(party, X, [q])
        else:
            s.apply(ALICE, polarization(-theta), [a])
            s.apply(ALICE, CNOT, [a, q])
            s.apply(ALICE, polarization(theta), [a])
    s.send_qubits(party, BOB, psi, TAGS[1])

    for (_, b), q in zip(pairs, psi):
        s.apply(BOB, polarization(-theta), [b])
        s.apply(BOB, CNOT, [b, q])
        s.apply(BOB, polarization(theta), [b])
    results = [s.measure(BOB, [q], Rotated(alpha))[0] for q, alpha in zip(psi, alphas)]
    s.discard(BOB, psi)

    ok = not any(results)
    return ZhangLiGuoRun(Outcome(accepted=ok, eavesdrop_detected=not ok), pairs, theta)


def run_zhang_li_guo(
    n: int,
    k: int | None = None,
    theta: float | None = None,
    seed: SeedLike = 0,
    session: Session | None = None,
) -> Outcome:
    return run_zhang_li_guo_detailed(n, k, theta, seed, session).outcome

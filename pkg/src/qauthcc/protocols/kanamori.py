"""Identity authentication by rotated superpositions (Kanamori et al.).

Alice and Bob share ``n`` key angles. Three ``n``-qubit messages cross the
quantum channel and no entanglement or classical bit is used:

1. Alice encodes a random ``R_A`` and rotates qubit ``i`` by ``K[i]``.
2. Bob undoes ``K``, reads ``R_A``, then sends a random ``R_B`` rotated by
   the session key ``K_S`` and by ``K``.
3. Alice undoes ``K``, flips qubits where ``R_A`` is 1 and returns them;
   Bob undoes ``K_S``, reads ``R_A xor R_B`` and checks he gets ``R_B`` back.

The flip in step 3 is ``X`` preceded by ``Z``; together they equal a 90°
polarization turn, which commutes with the pending ``K_S`` rotation so
Bob can still remove it.
"""

from __future__ import annotations

from typing import Sequence

from ..channel import BOB, Session
from ..qsim import Computational, X, Z, polarization
from ..seeding import SeedLike
from .common import Outcome, check_angles, check_size, claimant, ensure_session, random_angles, random_bits

TAGS = ("kanamori:challenge", "kanamori:response", "kanamori:return")


def run_kanamori(
    n: int,
    key: Sequence[float] | None = None,
    seed: SeedLike = 0,
    session: Session | None = None,
) -> Outcome:
    n = check_size(n, "n")
    s = ensure_session(session, seed)
    key = random_angles(s.rng, n) if key is None else check_angles(key, n)
    party, prng, impersonating = claimant(s)
    # an impersonator has no key and guesses every angle
    party_key = random_angles(prng, n) if impersonating else key

    r_a = random_bits(prng, n)
    qs = s.allocate(party, n)
    for q, bit, theta in zip(qs, r_a, party_key):
        if bit:
            s.apply(party, X, [q])
        s.apply(party, polarization(theta), [q])
    s.send_qubits(party, BOB, qs, TAGS[0])

    for q, theta in zip(qs, key):
        s.apply(BOB, polarization(-theta), [q])
    r_a_seen = s.measure(BOB, qs, Computational)
    s.discard(BOB, qs)

    r_b = random_bits(s.rng, n)
    k_s = random_angles(s.rng, n)
    qs = s.allocate(BOB, n)
    for q, bit, theta, theta_s in zip(qs, r_b, key, k_s):
        if bit:
            s.apply(BOB, X, [q])
        s.apply(BOB, polarization(theta_s), [q])
        s.apply(BOB, polarization(theta), [q])
    s.send_qubits(BOB, party, qs, TAGS[1])

    for q, bit, theta in zip(qs, r_a, party_key):
        s.apply(party, polarization(-theta), [q])
        if bit:
            s.apply(party, Z, [q])
            s.apply(party, X, [q])
    s.send_qubits(party, BOB, qs, TAGS[2])

    for q, theta_s in zip(qs, k_s):
        s.apply(BOB, polarization(-theta_s), [q])
    xored = s.measure(BOB, qs, Computational)
    s.discard(BOB, qs)
    r_b_seen = tuple(v ^ a for v, a in zip(xored, r_a_seen))

    ok = r_b_seen == r_b
    return Outcome(accepted=ok, eavesdrop_detected=not ok, session_key=k_s)

"""Mutual identity authentication from shared pairs and a classical cipher (Zeng and Guo).

Alice and Bob share ``n`` prior ``|Phi+>`` pairs and an ``n``-bit key
``K1``. Bit ``i`` of ``K1`` picks the basis (computational or diagonal)
both use on pair ``i``, so honest results agree. They then exchange their
results encrypted under ``K1``, plus ``s`` check bits drawn from Alice's
results at key-selected positions: ``2n + s`` classical bits and no qubits.

The cipher is a stand-in keyed stream (SHAKE-256 over the key and a
label); its strength is not the point, only the bit counts and the
comparison logic are.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

from ..channel import ALICE, BOB, EbitPhase, Session
from ..qsim import BellKind, Computational, Diagonal
from ..seeding import SeedLike
from .common import Outcome, check_bits, check_size, claimant, ensure_session, random_bits

TAGS = ("zeng-guo:alice-results", "zeng-guo:bob-results", "zeng-guo:check-bits")


def keystream(key: Sequence[int], label: str, length: int) -> tuple[int, ...]:
    digest = hashlib.shake_256(bytes(key) + b"|" + label.encode()).digest((length + 7) // 8)
    return tuple((digest[i // 8] >> (i % 8)) & 1 for i in range(length))


def encrypt(key: Sequence[int], label: str, bits: Sequence[int]) -> tuple[int, ...]:
    return tuple(b ^ k for b, k in zip(bits, keystream(key, label, len(bits))))


decrypt = encrypt


def check_positions(key: Sequence[int], count: int) -> tuple[int, ...]:
    """Key-derived positions (with repetition) whose results are disclosed as checks."""
    if count == 0:
        return ()
    digest = hashlib.shake_256(bytes(key) + b"|positions").digest(2 * count)
    n = len(key)
    return tuple(int.from_bytes(digest[2 * j : 2 * j + 2], "little") % n for j in range(count))


def run_zeng_guo(
    n: int,
    s: int = 4,
    key: Sequence[int] | None = None,
    seed: SeedLike = 0,
    session: Session | None = None,
) -> Outcome:
    n = check_size(n, "n")
    s = check_size(s, "s", minimum=0)
    sess = ensure_session(session, seed)
    key = random_bits(sess.rng, n) if key is None else check_bits(key, n, "key")
    party, prng, impersonating = claimant(sess)
    bases = [Diagonal if k else Computational for k in key]

    pairs = sess.distribute_ebits(n, BellKind.PHI_PLUS, EbitPhase.PRIOR, tag="zeng-guo:prior-pairs")
    r_b = tuple(sess.measure(BOB, [b], basis)[0] for (_, b), basis in zip(pairs, bases))
    positions = check_positions(key, s)

    if impersonating:
        # no pair halves and no key: every ciphertext bit is a guess
        sent_results = random_bits(prng, n)
        sent_checks = random_bits(prng, s)
    else:
        r_a = tuple(sess.measure(ALICE, [a], basis)[0] for (a, _), basis in zip(pairs, bases))
        sent_results = encrypt(key, "alice", r_a)
        sent_checks = encrypt(key, "check", [r_a[p] for p in positions])

    got = decrypt(key, "alice", sess.send_classical(party, BOB, sent_results, TAGS[0]))
    bob_accepts = got == r_b

    reply = sess.send_classical(BOB, party, encrypt(key, "bob", r_b), TAGS[1])
    alice_accepts = None if impersonating else decrypt(key, "bob", reply) == r_a

    if s:
        checks = decrypt(key, "check", sess.send_classical(party, BOB, sent_checks, TAGS[2]))
        bob_accepts = bob_accepts and checks == tuple(r_b[p] for p in positions)

    directions = {"bob_accepts_alice": bob_accepts}
    if alice_accepts is not None:
        directions["alice_accepts_bob"] = alice_accepts
    ok = all(directions.values())
    return Outcome(accepted=ok, eavesdrop_detected=not ok, directions=directions)

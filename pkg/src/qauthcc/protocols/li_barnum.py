"""Identity authentication with entangled tokens (Li and Barnum).

The identification token is ``n`` prior ``|Phi+>`` pairs; no key is
shared. For every token pair Bob creates an auxiliary ``|Phi+>`` pair and
ships one half to Alice. She CNOTs it with her token half and sends it
back; Bob CNOTs it with his token half and measures the auxiliary pair in
the Bell basis, expecting ``|Phi+>``. Each token pair therefore costs two
quantum transmissions: the outbound auxiliary half and its return.
"""

from __future__ import annotations

from ..channel import ALICE, BOB, EbitPhase, Session
from ..qsim import BellKind, CNOT, X
from ..seeding import SeedLike
from .common import Outcome, check_size, claimant, ensure_session

TAGS = ("li-barnum:aux-to-alice", "li-barnum:aux-return")


def run_li_barnum(n: int, seed: SeedLike = 0, session: Session | None = None) -> Outcome:
    n = check_size(n, "n")
    s = ensure_session(session, seed)
    party, prng, impersonating = claimant(s)

    tokens = s.distribute_ebits(n, BellKind.PHI_PLUS, EbitPhase.PRIOR, tag="li-barnum:token")
    aux = s.distribute_ebits(n, BellKind.PHI_PLUS, EbitPhase.IN_PROTOCOL, holders=(BOB, party), tag=TAGS[0])

    for (a, _), (_, c) in zip(tokens, aux):
        if impersonating:
            # without the token Eve can only guess Alice's control bit
            if prng.integers(2):
                s.apply(party, X, [c])
        else:
            s.apply(ALICE, CNOT, [a, c])
    s.send_qubits(party, BOB, [c for _, c in aux], TAGS[1])

    outcomes = []
    for (_, b), (d, c) in zip(tokens, aux):
        s.apply(BOB, CNOT, [b, c])
        outcomes.append(s.measure_bell(BOB, d, c))
    ok = all(k is BellKind.PHI_PLUS for k in outcomes)
    return Outcome(accepted=ok, eavesdrop_detected=not ok)

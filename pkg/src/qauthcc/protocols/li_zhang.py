"""Message authentication with shared EPR pairs (Li and Zhang).

Each message bit is carried by two qubits in a Bell state, ``|Phi+>`` for
0 and ``|Phi->`` for 1. Alice CNOTs the first carrier with her half of a
prior pair before sending both carriers; Bob CNOTs with his half and
measures the carriers in the Bell basis. A ``|Psi+->`` result cannot come
from Alice and flags tampering.
"""

from __future__ import annotations

from typing import Sequence

from ..channel import ALICE, BOB, EbitPhase, Session
from ..errors import UnsupportedError
from ..qsim import BellKind, CNOT
from ..seeding import SeedLike
from ..strategies import is_impersonation
from .common import Outcome, check_bits, check_size, ensure_session, random_bits

ENCODE = {0: BellKind.PHI_PLUS, 1: BellKind.PHI_MINUS}
DECODE = {
    BellKind.PHI_PLUS: (0, True),
    BellKind.PHI_MINUS: (1, True),
    BellKind.PSI_PLUS: (0, False),
    BellKind.PSI_MINUS: (1, False),
}


def run_li_zhang(
    m: int,
    message: Sequence[int] | None = None,
    seed: SeedLike = 0,
    session: Session | None = None,
) -> Outcome:
    m = check_size(m, "m")
    s = ensure_session(session, seed)
    if is_impersonation(s.adversary):
        raise UnsupportedError("li_zhang authenticates data origin; use substitution or intercept-resend")
    message = random_bits(s.rng, m) if message is None else check_bits(message, m, "message")

    pairs = s.distribute_ebits(m, BellKind.PHI_PLUS, EbitPhase.PRIOR, tag="li-zhang:prior-pairs")
    recovered, valid = [], True
    for i, ((a, b), bit) in enumerate(zip(pairs, message)):
        c1, c2 = s.create_pair(ALICE, ENCODE[bit])
        s.apply(ALICE, CNOT, [a, c1])
        s.send_qubits(ALICE, BOB, [c1, c2], f"li-zhang:bit-{i}")
        s.apply(BOB, CNOT, [b, c1])
        value, ok = DECODE[s.measure_bell(BOB, c1, c2)]
        s.discard(BOB, [c1, c2])
        recovered.append(value)
        valid = valid and ok
    return Outcome(
        accepted=valid,
        eavesdrop_detected=not valid,
        message=message,
        recovered_message=tuple(recovered),
    )

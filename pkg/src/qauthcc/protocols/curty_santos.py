"""Classical-message authentication over a shared singlet (Curty and Santos).

The coding operators are left abstract by the protocol description; this
module fixes one concrete choice:

* ``|phi_0> = |0>|+>`` and ``|phi_1> = |1>|->`` (orthogonal product states);
* Alice CNOTs the value qubit with her singlet half and sends both qubits;
* Bob CNOTs with his half and flips the value qubit (singlet halves always
  disagree), reads the value ``x`` in the computational basis and checks
  the second qubit in the diagonal basis, expecting outcome ``x``.

A computational-basis intercept leaves the value intact but randomizes the
check qubit, so it is caught half the time per bit.
"""

from __future__ import annotations

from typing import Sequence

from ..channel import ALICE, BOB, EbitPhase, Session
from ..errors import UnsupportedError
from ..qsim import BellKind, CNOT, Computational, Diagonal, H, X, Z
from ..seeding import SeedLike
from ..strategies import is_impersonation
from .common import Outcome, check_bits, check_size, ensure_session, random_bits


def run_curty_santos(
    m: int,
    message: Sequence[int] | None = None,
    seed: SeedLike = 0,
    session: Session | None = None,
) -> Outcome:
    m = check_size(m, "m")
    s = ensure_session(session, seed)
    if is_impersonation(s.adversary):
        raise UnsupportedError("curty_santos authenticates data origin; use substitution or intercept-resend")
    message = random_bits(s.rng, m) if message is None else check_bits(message, m, "message")

    singlets = s.distribute_ebits(m, BellKind.singlet(), EbitPhase.PRIOR, tag="curty-santos:singlets")
    recovered, valid = [], True
    for i, ((a, b), bit) in enumerate(zip(singlets, message)):
        value, check = s.allocate(ALICE, 2)
        if bit:
            s.apply(ALICE, X, [value])
        s.apply(ALICE, H, [check])
        if bit:
            s.apply(ALICE, Z, [check])
        s.apply(ALICE, CNOT, [a, value])
        s.send_qubits(ALICE, BOB, [value, check], f"curty-santos:bit-{i}")

        s.apply(BOB, CNOT, [b, value])
        s.apply(BOB, X, [value])
        (x,) = s.measure(BOB, [value], Computational)
        (c,) = s.measure(BOB, [check], Diagonal)
        s.discard(BOB, [value, check])
        recovered.append(x)
        valid = valid and c == x
    return Outcome(
        accepted=valid,
        eavesdrop_detected=not valid,
        message=message,
        recovered_message=tuple(recovered),
    )

import math

import numpy as np
import pytest

from qauthcc.channel import (
    ALICE,
    BOB,
    EVE,
    ChannelEvent,
    ClassicalSend,
    EbitDistribution,
    EbitPhase,
    PartyId,
    QuantumSend,
    open_session,
)
from qauthcc.errors import (
    ArgumentError,
    CapacityError,
    ConfigurationError,
    ProtocolLogicError,
    SessionStateError,
)
from qauthcc.ledger import tally
from qauthcc.protocols import _RUNNERS, execute, resolve_params, run_kanamori
from qauthcc.qsim import BellKind, Computational, Diagonal, H, X, bell_state
from qauthcc.strategies import FlipQubit, InterceptResend, RewriteClassical, Substitution

TC = PartyId.TRUSTED_CENTER


def session(seed=7, **kw):
    return open_session({ALICE, BOB}, seed, **kw)


class TestOpen:
    def test_fresh_session_is_empty(self):
        s = session()
        assert s.event_log() == ()
        assert s.adversary is None
        assert s.live_qubits == 0

    def test_missing_bob(self):
        with pytest.raises(ConfigurationError):
            open_session({ALICE}, 1)

    def test_trusted_center_topology(self):
        s = open_session({ALICE, BOB, TC}, 1)
        pairs = s.distribute_ebits(1, holders=(TC, ALICE))
        assert s.owner(pairs[0][0]) is TC and s.owner(pairs[0][1]) is ALICE

    def test_eve_cannot_participate(self):
        with pytest.raises(ConfigurationError):
            open_session({ALICE, BOB, EVE}, 1)


class TestEbits:
    def test_prior_pairs_cost_nothing(self):
        s = session()
        pairs = s.distribute_ebits(4, BellKind.PHI_PLUS, EbitPhase.PRIOR)
        assert len(pairs) == 4
        assert all(s.owner(a) is ALICE and s.owner(b) is BOB for a, b in pairs)
        t = tally(s.event_log())
        assert (t.qubits_sent, t.classical_bits_sent, t.ebits_prior) == (0, 0, 4)

    def test_singlet_shared(self):
        s = session()
        (a, b), = s.distribute_ebits(1, BellKind.PSI_MINUS, EbitPhase.PRIOR)
        assert abs(abs(np.vdot(s.state_of([a, b]).amplitudes, bell_state(BellKind.PSI_MINUS).amplitudes)) - 1) < 1e-12

    def test_in_protocol_pairs_count_their_travelling_halves(self):
        s = session()
        s.distribute_ebits(2, BellKind.PHI_PLUS, EbitPhase.IN_PROTOCOL)
        t = tally(s.event_log())
        assert (t.qubits_sent, t.ebits_in_protocol, t.ebits_prior) == (2, 2, 0)

    def test_capacity(self):
        s = session(capacity=6)
        with pytest.raises(CapacityError):
            s.distribute_ebits(4)

    def test_zero_pairs(self):
        with pytest.raises(ArgumentError):
            session().distribute_ebits(0)


class TestSends:
    def test_quantum_send_logged(self):
        s = session()
        qs = s.allocate(ALICE, 3)
        assert s.send_qubits(ALICE, BOB, qs, "step") == qs
        (ev,) = s.event_log()
        assert ev == ChannelEvent(1, ALICE, BOB, QuantumSend(3), "step")
        assert all(s.owner(q) is BOB for q in qs)

    def test_sending_someone_elses_qubit(self):
        s = session()
        qs = s.allocate(ALICE, 1)
        with pytest.raises(ProtocolLogicError):
            s.send_qubits(BOB, ALICE, qs, "steal")

    def test_operating_on_someone_elses_qubit(self):
        s = session()
        qs = s.allocate(ALICE, 1)
        with pytest.raises(ProtocolLogicError):
            s.apply(BOB, X, qs)
        with pytest.raises(ProtocolLogicError):
            s.measure(BOB, qs)

    def test_classical_send_logged(self):
        s = session()
        bits = (1, 0) * 10
        assert s.send_classical(ALICE, BOB, bits, "payload") == bits
        assert s.event_log()[0].kind == ClassicalSend(20)

    def test_empty_classical_payload(self):
        with pytest.raises(ArgumentError):
            session().send_classical(ALICE, BOB, (), "empty")

    def test_non_bit_payload(self):
        with pytest.raises(ArgumentError):
            session().send_classical(ALICE, BOB, (0, 2), "bad")

    def test_sequence_numbers_increase(self):
        s = session()
        s.distribute_ebits(1)
        s.send_classical(ALICE, BOB, (1,), "a")
        s.send_qubits(ALICE, BOB, s.allocate(ALICE, 2), "b")
        assert [ev.seq for ev in s.event_log()] == [1, 2, 3]

    def test_log_is_a_snapshot(self):
        s = session()
        snapshot = s.event_log()
        s.send_classical(ALICE, BOB, (1,), "a")
        assert snapshot == () and len(s.event_log()) == 1

    def test_event_counts_must_be_positive(self):
        with pytest.raises(ArgumentError):
            ChannelEvent(1, ALICE, BOB, QuantumSend(0), "x")

    def test_kanamori_log(self):
        s = session()
        assert run_kanamori(4, session=s).accepted
        log = s.event_log()
        assert [ev.kind for ev in log] == [QuantumSend(4)] * 3
        assert [(ev.sender, ev.receiver) for ev in log] == [(ALICE, BOB), (BOB, ALICE), (ALICE, BOB)]


class TestAdversaryHooks:
    def test_intercept_collapses_in_flight_qubit(self):
        # |+> intercepted in the computational basis arrives as |0> or |1>
        s = session(seed=3)
        s.install_adversary(InterceptResend(Computational))
        outcomes = set()
        for _ in range(40):
            (q,) = s.allocate(ALICE, 1)
            s.apply(ALICE, H, [q])
            s.send_qubits(ALICE, BOB, [q], "probe")
            amps = s.state_of([q]).amplitudes
            assert np.allclose(np.abs(amps) ** 2, [1, 0]) or np.allclose(np.abs(amps) ** 2, [0, 1])
            outcomes.add(int(abs(amps[1]) > 0.5))
            s.discard(BOB, [q])
        assert outcomes == {0, 1}

    def test_intercept_in_matching_basis_is_harmless(self):
        s = session(seed=4)
        s.install_adversary(InterceptResend(Diagonal))
        (q,) = s.allocate(ALICE, 1)
        s.apply(ALICE, H, [q])
        s.send_qubits(ALICE, BOB, [q], "probe")
        assert np.allclose(s.state_of([q]).amplitudes, [1 / math.sqrt(2)] * 2)

    def test_intercept_breaks_entanglement(self):
        s = session(seed=5)
        s.install_adversary(InterceptResend(Computational))
        (a, b), = s.distribute_ebits(1, phase=EbitPhase.IN_PROTOCOL)
        probs = np.abs(s.state_of([a, b]).amplitudes) ** 2
        assert sorted(np.round(probs, 12)) == [0, 0, 0, 1]

    def test_substitution_rewrites_classical_payload(self):
        s = session()
        s.install_adversary(Substitution(RewriteClassical((1, 0, 1))))
        sent = (0, 0, 0, 0)
        got = s.send_classical(ALICE, BOB, sent, "msg")
        assert got != sent and len(got) == len(sent)
        assert got == (1, 0, 1, 0)

    def test_flip_targets_global_index(self):
        s = session()
        s.install_adversary(Substitution(FlipQubit(2)))
        first = s.allocate(ALICE, 2)
        s.send_qubits(ALICE, BOB, first, "a")
        second = s.allocate(ALICE, 2)
        s.send_qubits(ALICE, BOB, second, "b")
        assert [round(abs(s.state_of([q]).amplitudes[1])) for q in first + second] == [0, 0, 1, 0]

    def test_install_after_first_send(self):
        s = session()
        s.send_classical(ALICE, BOB, (1,), "x")
        with pytest.raises(SessionStateError):
            s.install_adversary(InterceptResend())

    def test_installing_none_is_transparent(self):
        for pid in ("kanamori", "li_zhang", "zhang_li_guo"):
            plain = execute(pid, None, 99)
            s = open_session({ALICE, BOB}, 99)
            s.install_adversary(None)
            outcome = _RUNNERS[pid](resolve_params(None), s)
            assert outcome == plain.outcome
            assert s.event_log() == plain.session.event_log()

    def test_eve_needs_an_installed_adversary(self):
        s = session()
        with pytest.raises(ProtocolLogicError):
            s.allocate(EVE, 1)


class TestOwnership:
    def test_every_live_qubit_has_one_owner(self):
        ex = execute("li_barnum", {"n": 3}, 1)
        s = ex.session
        owned = sum(len(s.owned_by(p)) for p in PartyId)
        assert owned == s.live_qubits

    def test_tally_matches_per_operation_counts(self):
        s = session()
        s.distribute_ebits(2, phase=EbitPhase.IN_PROTOCOL)
        s.send_qubits(ALICE, BOB, s.allocate(ALICE, 3), "q")
        s.send_classical(BOB, ALICE, (1, 1), "c")
        t = tally(s.event_log())
        assert (t.qubits_sent, t.classical_bits_sent, t.ebits_in_protocol) == (5, 2, 2)
        assert sum(ev.kind.count for ev in s.event_log() if isinstance(ev.kind, EbitDistribution)) == 2

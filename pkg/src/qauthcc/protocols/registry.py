"""The ten analysed protocols with their declared model and complexity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import UnknownProtocolError
from ..ledger import AuthKind, Bound, ComplexityExpr, ModelClass


@dataclass(frozen=True)
class ProtocolSpec:
    id: str
    kind: AuthKind
    declared_model: ModelClass
    declared_complexity: ComplexityExpr
    simulable: bool
    citation: str
    params: tuple[str, ...]
    summary: str = ""


def _expr(n=0, m=0, c=0, lower=False) -> ComplexityExpr:
    return ComplexityExpr(Fraction(n), Fraction(m), Fraction(c), Bound.LOWER_BOUND if lower else Bound.EXACT)


D, I = AuthKind.DATA_ORIGIN, AuthKind.IDENTITY
YAO, CB, HYB = ModelClass.YAO, ModelClass.CLEVE_BUHRMAN, ModelClass.HYBRID

_SPECS = (
    ProtocolSpec(
        "barnum_purity", D, YAO, _expr(n=1, m=1), False,
        "Barnum, Crepeau, Gottesman, Smith and Tapp: authentication of quantum messages",
        ("n", "m"), "purity-testing codes; one message of m + n qubits",
    ),
    ProtocolSpec(
        "yang_goppa", D, YAO, _expr(m=2), False,
        "Yang et al.: quantum message authentication with Goppa codes",
        ("m",), "Goppa-coded message of 2m qubits",
    ),
    ProtocolSpec(
        "curty_santos", D, HYB, _expr(m=2), True,
        "Curty and Santos: quantum authentication of classical messages",
        ("m",), "two qubits per bit, coded against a shared singlet",
    ),
    ProtocolSpec(
        "li_zhang", D, HYB, _expr(m=2), True,
        "Li and Zhang: quantum message authentication with EPR pairs",
        ("m",), "Bell-state carrier pair per bit, CNOT with shared pair",
    ),
    ProtocolSpec(
        "kanamori", I, YAO, _expr(n=3), True,
        "Kanamori, Yoo and Al-Shurman: authentication based on quantum superposition",
        ("n",), "three rotated n-qubit messages",
    ),
    ProtocolSpec(
        "zeng_guo", I, CB, _expr(n=2, lower=True), True,
        "Zeng and Guo: quantum authentication protocol with EPR pairs and symmetric cryptography",
        ("n",), "key-selected measurements, 2n + s encrypted classical bits",
    ),
    ProtocolSpec(
        "li_barnum", I, HYB, _expr(n=2), True,
        "Li and Barnum: quantum authentication using entangled states",
        ("n",), "entanglement token, auxiliary pair per token pair",
    ),
    ProtocolSpec(
        "zhang_li_guo", I, HYB, _expr(n=2), True,
        "Zhang, Li and Guo: quantum authentication using entangled states",
        ("n",), "probe qubits bounced off reusable rotated pairs",
    ),
    ProtocolSpec(
        "barnum_catalysis", I, HYB, _expr(n=1, lower=True), False,
        "Barnum: quantum secure identification using entanglement and catalysis",
        ("n",), "catalysed state conversion; count depends on the states",
    ),
    ProtocolSpec(
        "zeng_zhang", I, HYB, _expr(n=4, lower=True), False,
        "Zeng and Zhang: identity verification in quantum key distribution",
        ("n",), "trusted center distributes pairs; authentication plus key distribution",
    ),
)

PROTOCOL_IDS = tuple(p.id for p in _SPECS)


def registry() -> list[ProtocolSpec]:
    return list(_SPECS)


def get_spec(protocol_id: str) -> ProtocolSpec:
    for spec in _SPECS:
        if spec.id == protocol_id:
            return spec
    raise UnknownProtocolError(f"unknown protocol id {protocol_id!r}; known: {', '.join(PROTOCOL_IDS)}")

"""Resource accounting and complexity classification.

Channel events are folded into a :class:`ResourceTally`, the tally picks
one of the three communication models, exact affine expressions in the key
size ``n`` and message size ``m`` are fitted from measured counts, and
protocols are compared only inside their own model group.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .channel import ChannelEvent, ClassicalSend, EbitDistribution, EbitPhase, QuantumSend
from .errors import ArgumentError, ComparisonError, NonlinearityError, UnclassifiableError

REFERENCE_SIZE = {"n": 64, "m": 64}


@dataclass(frozen=True)
class ResourceTally:
    qubits_sent: int = 0
    classical_bits_sent: int = 0
    ebits_prior: int = 0
    ebits_in_protocol: int = 0

    def __post_init__(self):
        if min(self.qubits_sent, self.classical_bits_sent, self.ebits_prior, self.ebits_in_protocol) < 0:
            raise ArgumentError("tally counts must be non-negative")

    @property
    def ebits(self) -> int:
        return self.ebits_prior + self.ebits_in_protocol

    def as_dict(self) -> dict[str, int]:
        return {
            "qubits_sent": self.qubits_sent,
            "classical_bits_sent": self.classical_bits_sent,
            "ebits_prior": self.ebits_prior,
            "ebits_in_protocol": self.ebits_in_protocol,
        }


class ModelClass(enum.Enum):
    YAO = "Yao"
    CLEVE_BUHRMAN = "CleveBuhrman"
    HYBRID = "Hybrid"

    @property
    def symbol(self) -> str:
        return {"Yao": "Q", "CleveBuhrman": "C*", "Hybrid": "Q*"}[self.value]

    @property
    def label(self) -> str:
        return {"Yao": "Yao", "CleveBuhrman": "Cleve-Buhrman", "Hybrid": "Hybrid"}[self.value]


class AuthKind(enum.Enum):
    DATA_ORIGIN = "DataOrigin"
    IDENTITY = "Identity"

    @property
    def function(self) -> str:
        return "f_D" if self is AuthKind.DATA_ORIGIN else "f_I"


class Bound(enum.Enum):
    EXACT = "Exact"
    LOWER_BOUND = "LowerBound"


def tally(events: Iterable[ChannelEvent]) -> ResourceTally:
    q = c = prior = inproto = 0
    for ev in events:
        kind = ev.kind
        if isinstance(kind, QuantumSend):
            q += kind.count
        elif isinstance(kind, ClassicalSend):
            c += kind.count
        elif isinstance(kind, EbitDistribution):
            if kind.phase is EbitPhase.PRIOR:
                prior += kind.count
            else:
                inproto += kind.count
                # one half of every in-protocol pair crosses the quantum channel
                q += kind.count
        else:
            raise ArgumentError(f"unknown event kind {kind!r}")
    return ResourceTally(q, c, prior, inproto)


@dataclass(frozen=True)
class Classification:
    model: ModelClass
    flags: tuple[str, ...] = ()


def classify_detailed(t: ResourceTally) -> Classification:
    if t.qubits_sent == 0 and t.classical_bits_sent == 0:
        raise UnclassifiableError("no communication was recorded")
    if t.ebits == 0:
        if t.classical_bits_sent == 0:
            return Classification(ModelClass.YAO)
        if t.qubits_sent > 0:
            return Classification(ModelClass.HYBRID, ("qubits-and-classical-without-entanglement",))
        return Classification(ModelClass.CLEVE_BUHRMAN, ("classical-without-entanglement",))
    if t.qubits_sent == 0:
        return Classification(ModelClass.CLEVE_BUHRMAN)
    return Classification(ModelClass.HYBRID)


def classify(t: ResourceTally) -> ModelClass:
    return classify_detailed(t).model


def model_cost(t: ResourceTally, model: ModelClass) -> int:
    """The count each model charges: qubits, classical bits, or both."""
    if model is ModelClass.YAO:
        return t.qubits_sent
    if model is ModelClass.CLEVE_BUHRMAN:
        return t.classical_bits_sent
    return t.qubits_sent + t.classical_bits_sent


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class ComplexityExpr:
    """``coeff_m*m + coeff_n*n + constant``, exact or a lower bound."""

    coeff_n: Fraction = Fraction(0)
    coeff_m: Fraction = Fraction(0)
    constant: Fraction = Fraction(0)
    bound: Bound = Bound.EXACT

    def __post_init__(self):
        for name in ("coeff_n", "coeff_m", "constant"):
            v = Fraction(getattr(self, name))
            if v < 0:
                raise ArgumentError(f"{name} must be non-negative")
            object.__setattr__(self, name, v)

    @classmethod
    def parse_dict(cls, d: Mapping) -> "ComplexityExpr":
        return cls(
            Fraction(d["coeff_n"]), Fraction(d["coeff_m"]), Fraction(d["constant"]), Bound(d["bound"])
        )

    def as_dict(self) -> dict:
        return {
            "coeff_n": str(self.coeff_n),
            "coeff_m": str(self.coeff_m),
            "constant": str(self.constant),
            "bound": self.bound.value,
        }

    def evaluate(self, n: int = 0, m: int = 0) -> Fraction:
        return self.coeff_n * n + self.coeff_m * m + self.constant

    def at(self, sizes: Mapping[str, int]) -> Fraction:
        return self.evaluate(sizes.get("n", 0), sizes.get("m", 0))

    def same_terms(self, other: "ComplexityExpr") -> bool:
        return (self.coeff_n, self.coeff_m, self.constant) == (other.coeff_n, other.coeff_m, other.constant)

    def render_body(self) -> str:
        terms = []
        for coeff, sym in ((self.coeff_m, "m"), (self.coeff_n, "n")):
            if coeff == 0:
                continue
            terms.append(sym if coeff == 1 else f"{_fmt_coeff(coeff)}{sym}")
        if self.constant or not terms:
            terms.append(_fmt_coeff(self.constant))
        return " + ".join(terms)

    def render(self) -> str:
        body = self.render_body()
        return f"Ω({body})" if self.bound is Bound.LOWER_BOUND else body

    def __str__(self) -> str:
        return self.render()


def notation(model: ModelClass, expr: ComplexityExpr, kind: AuthKind, adversarial: bool = False) -> str:
    sub = "_E" if adversarial else ""
    return f"{model.symbol}{sub}({kind.function}) = {expr.render()}"


# -- fitting -----------------------------------------------------------------

Runner = Callable[[int, int], "ResourceTally"]


@dataclass(frozen=True)
class FitResult:
    expr: ComplexityExpr
    model: ModelClass
    points: tuple[tuple[int, int, int], ...]
    holdout: tuple[int, int, int] | None


def _rationalize(x: float) -> Fraction:
    return Fraction(x).limit_denominator(1000)


def fit_complexity_detailed(
    protocol_id: str,
    grid: Sequence[tuple[int, int]],
    runner: Runner,
    holdout: tuple[int, int] | None = (16, 16),
) -> FitResult:
    pts = list(dict.fromkeys((int(n), int(m)) for n, m in grid))
    if len(pts) < 3:
        raise ArgumentError(f"{protocol_id}: fitting needs at least 3 distinct grid points")
    counts = []
    model = None
    for n, m in pts:
        t = runner(n, m)
        mc = classify(t)
        if model is None:
            model = mc
        elif mc is not model:
            raise NonlinearityError(f"{protocol_id}: model changes from {model.value} to {mc.value} across the grid")
        counts.append(model_cost(t, model))
    ns = [p[0] for p in pts]
    ms = [p[1] for p in pts]
    cols, names = [], []
    if len(set(ns)) > 1:
        cols.append(ns)
        names.append("n")
    if len(set(ms)) > 1:
        cols.append(ms)
        names.append("m")
    cols.append([1] * len(pts))
    names.append("c")
    design = np.array(cols, dtype=float).T
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise ArgumentError(f"{protocol_id}: grid does not separate the size parameters")
    sol, *_ = np.linalg.lstsq(design, np.array(counts, dtype=float), rcond=None)
    coeffs = dict(zip(names, (_rationalize(v) for v in sol)))
    try:
        expr = ComplexityExpr(coeffs.get("n", 0), coeffs.get("m", 0), coeffs["c"])
    except ArgumentError as exc:
        raise NonlinearityError(f"{protocol_id}: fitted a negative coefficient ({exc})") from exc

    def check(n: int, m: int, measured: int) -> None:
        predicted = expr.evaluate(n if "n" in names else 0, m if "m" in names else 0)
        if predicted != measured:
            raise NonlinearityError(
                f"{protocol_id}: counts are not affine in (n, m); at n={n}, m={m} "
                f"measured {measured} but {expr.render()} predicts {predicted}"
            )

    for (n, m), cnt in zip(pts, counts):
        check(n, m, cnt)
    held = None
    if holdout is not None:
        hn = holdout[0] if "n" in names else pts[0][0]
        hm = holdout[1] if "m" in names else pts[0][1]
        t = runner(hn, hm)
        if classify(t) is not model:
            raise NonlinearityError(f"{protocol_id}: model changes at held-out point")
        cnt = model_cost(t, model)
        check(hn, hm, cnt)
        held = (hn, hm, cnt)
    return FitResult(expr, model, tuple((n, m, c) for (n, m), c in zip(pts, counts)), held)


def fit_complexity(
    protocol_id: str,
    grid: Sequence[tuple[int, int]],
    runner: Runner,
    holdout: tuple[int, int] | None = (16, 16),
) -> ComplexityExpr:
    """Fit ``a*n + b*m + c`` to the model cost measured by ``runner(n, m)``.

    Parameters that do not vary over ``grid`` are treated as unused. The
    fit must reproduce every grid point and the held-out point exactly.
    """
    return fit_complexity_detailed(protocol_id, grid, runner, holdout).expr


def agrees(fitted: ComplexityExpr, declared: ComplexityExpr) -> bool:
    """Does a measured exact expression match a declared one?

    Exact declarations must match term for term. A declared lower bound
    ``Ω(e)`` is matched by a measurement with the same size coefficients
    and a constant at least as large.
    """
    if declared.bound is Bound.EXACT:
        return fitted.bound is Bound.EXACT and fitted.same_terms(declared)
    return (
        fitted.coeff_n == declared.coeff_n
        and fitted.coeff_m == declared.coeff_m
        and fitted.constant >= declared.constant
    )


# -- comparison --------------------------------------------------------------

@dataclass(frozen=True)
class Entry:
    protocol_id: str
    model: ModelClass
    expr: ComplexityExpr


@dataclass(frozen=True)
class RankedEntry:
    protocol_id: str
    expr: ComplexityExpr
    value: Fraction
    rank: int


@dataclass(frozen=True)
class Crossover:
    """``cheaper`` needs fewer communications than ``other`` exactly when ``condition`` holds."""

    cheaper: str
    other: str
    condition: str


@dataclass
class Group:
    model: ModelClass
    ranked: list[RankedEntry] = field(default_factory=list)
    ties: list[tuple[str, ...]] = field(default_factory=list)
    crossovers: list[Crossover] = field(default_factory=list)
    not_comparable: list[tuple[str, str]] = field(default_factory=list)

    def ids(self) -> list[str]:
        return [r.protocol_id for r in self.ranked]


def _inequality(diff_n: Fraction, diff_m: Fraction, diff_c: Fraction) -> str:
    """Render ``diff_m*m + diff_n*n + diff_c < 0`` with positive terms on each side."""
    left = ComplexityExpr(max(diff_n, 0), max(diff_m, 0), max(diff_c, 0))
    right = ComplexityExpr(max(-diff_n, 0), max(-diff_m, 0), max(-diff_c, 0))
    return f"{left.render_body()} < {right.render_body()}"


def _condition(a: ComplexityExpr, b: ComplexityExpr) -> str | None:
    """Symbolic condition under which ``a`` is smaller than ``b``, if it depends on size."""
    dn, dm, dc = a.coeff_n - b.coeff_n, a.coeff_m - b.coeff_m, a.constant - b.constant
    signs = {(x > 0) - (x < 0) for x in (dn, dm) if x != 0}
    if not signs:
        return None
    if len(signs) == 1 and ((dc >= 0) if signs == {1} else (dc <= 0)):
        return None
    return _inequality(dn, dm, dc)


@dataclass
class Comparison:
    groups: list[Group]
    reference: dict[str, int]

    def group_of(self, protocol_id: str) -> Group:
        for g in self.groups:
            if protocol_id in g.ids():
                return g
        raise ArgumentError(f"{protocol_id} is not part of this comparison")

    def relation(self, a: str, b: str) -> str:
        """``"lower"``, ``"higher"``, ``"tied"`` or ``"not comparable"`` for ``a`` against ``b``."""
        ga, gb = self.group_of(a), self.group_of(b)
        if ga is not gb:
            raise ComparisonError(
                f"{a} ({ga.model.label}) and {b} ({gb.model.label}) use different models "
                "and cannot be ranked against each other"
            )
        if (a, b) in ga.not_comparable or (b, a) in ga.not_comparable:
            return "not comparable"
        ra = next(r for r in ga.ranked if r.protocol_id == a)
        rb = next(r for r in ga.ranked if r.protocol_id == b)
        if ra.value == rb.value:
            return "tied"
        return "lower" if ra.value < rb.value else "higher"

    def rank(self, a: str, b: str) -> str:
        return self.relation(a, b)


def compare(entries: Sequence[Entry | tuple], reference: Mapping[str, int] | None = None) -> Comparison:
    """Group entries by model, then order each group by cost at ``reference`` sizes.

    Exact expressions and lower bounds are ranked separately within a
    group; mixed pairs are listed as not comparable.
    """
    items = [e if isinstance(e, Entry) else Entry(*e) for e in entries]
    if not items:
        raise ArgumentError("nothing to compare")
    ref = dict(REFERENCE_SIZE)
    if reference:
        ref.update(reference)
    groups = []
    for model in ModelClass:
        members = [e for e in items if e.model is model]
        if not members:
            continue
        g = Group(model)
        for bound in Bound:
            sub = sorted(
                (e for e in members if e.expr.bound is bound),
                key=lambda e: (e.expr.at(ref), e.protocol_id),
            )
            rank, prev = 0, None
            for e in sub:
                v = e.expr.at(ref)
                if v != prev:
                    rank += 1
                    prev = v
                g.ranked.append(RankedEntry(e.protocol_id, e.expr, v, rank))
            by_value: dict[Fraction, list[str]] = {}
            for e in sub:
                by_value.setdefault(e.expr.at(ref), []).append(e.protocol_id)
            g.ties.extend(tuple(ids) for ids in by_value.values() if len(ids) > 1)
            for x, y in itertools.combinations(sub, 2):
                cond = _condition(x.expr, y.expr)
                if cond is not None:
                    g.crossovers.append(Crossover(x.protocol_id, y.protocol_id, cond))
        exact = [e for e in members if e.expr.bound is Bound.EXACT]
        lower = [e for e in members if e.expr.bound is Bound.LOWER_BOUND]
        g.not_comparable.extend((x.protocol_id, y.protocol_id) for x in exact for y in lower)
        groups.append(g)
    return Comparison(groups, ref)

"""Complexity analysis of registry entries over a fixed size grid."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ledger import (
    Entry,
    FitResult,
    ComplexityExpr,
    ModelClass,
    agrees,
    fit_complexity_detailed,
    notation,
)
from .protocols import ProtocolSpec, get_spec, honest_tally, registry

GRID_VALUES = (2, 4, 8)
HOLDOUT = 16
FIXED = 2


def analysis_grid(params: tuple[str, ...]) -> list[tuple[int, int]]:
    """(n, m) points varying each used parameter over GRID_VALUES, others held at FIXED."""
    pts: list[tuple[int, int]] = []
    if "n" in params:
        pts += [(v, FIXED) for v in GRID_VALUES]
    if "m" in params:
        pts += [(FIXED, v) for v in GRID_VALUES]
    return list(dict.fromkeys(pts))


@dataclass(frozen=True)
class Analysis:
    spec: ProtocolSpec
    fit: FitResult | None

    @property
    def model(self) -> ModelClass:
        return self.fit.model if self.fit else self.spec.declared_model

    @property
    def expr(self) -> ComplexityExpr:
        """Measured expression when available, the declared one otherwise."""
        return self.fit.expr if self.fit else self.spec.declared_complexity

    @property
    def agreement(self) -> bool | None:
        if self.fit is None:
            return None
        return self.fit.model is self.spec.declared_model and agrees(self.fit.expr, self.spec.declared_complexity)

    def notation(self) -> str:
        return notation(self.model, self.spec.declared_complexity, self.spec.kind)

    def entry(self) -> Entry:
        return Entry(self.spec.id, self.spec.declared_model, self.spec.declared_complexity)

    def as_dict(self) -> dict:
        spec = self.spec
        out = {
            "protocol": spec.id,
            "kind": spec.kind.function,
            "simulable": spec.simulable,
            "declared_model": spec.declared_model.value,
            "declared": spec.declared_complexity.as_dict(),
            "declared_rendered": spec.declared_complexity.render(),
            "notation": self.notation(),
            "citation": spec.citation,
        }
        if self.fit is not None:
            out.update(
                fitted_model=self.fit.model.value,
                fitted=self.fit.expr.as_dict(),
                fitted_rendered=self.fit.expr.render(),
                grid=[list(p) for p in self.fit.points],
                holdout=list(self.fit.holdout) if self.fit.holdout else None,
                agreement=self.agreement,
            )
        else:
            out.update(fitted_model=None, fitted=None, fitted_rendered=None, grid=None, holdout=None, agreement=None)
        return out


@lru_cache(maxsize=None)
def fit_protocol(protocol_id: str, seed: int = 0, s: int = 4) -> Analysis:
    """Fit a simulable protocol's honest cost; accounting-only ids keep their declaration."""
    spec = get_spec(protocol_id)
    if not spec.simulable:
        return Analysis(spec, None)
    extra = {"s": s} if protocol_id == "zeng_guo" else {}
    fit = fit_complexity_detailed(
        protocol_id,
        analysis_grid(spec.params),
        lambda n, m: honest_tally(protocol_id, n, m, seed, **extra),
        holdout=(HOLDOUT, HOLDOUT),
    )
    return Analysis(spec, fit)


def analyze_all(seed: int = 0) -> list[Analysis]:
    return [fit_protocol(spec.id, seed) for spec in registry()]

"""Normalizing functions for convex hulls of Gaussian samples.

b(t) = sqrt(2 ln t) is the scale of i.i.d. Gaussian maxima, c(t) =
sqrt(2 ln ln t) the law-of-the-iterated-logarithm scale. Both belong to the
iterated-log family g(t) = (2 ln^(k) t)^alpha (k = 1 and k = 2 with alpha =
1/2). The family g(t) = (2 ln^(k) t)^alpha is defined for t > E_k where
E_1 = e and E_k = exp(E_{k-1}), so every member is strictly positive and
increasing on its domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

B = "b"
C = "c"
ITERATED_LOG = "iterated-log"
CONSTANT = "constant"
TABLE = "user-table"
KINDS = (B, C, ITERATED_LOG, CONSTANT, TABLE)


def _tower(k: int) -> float:
    """E_k: e, e^e, e^(e^e), ..."""
    x = 1.0
    for _ in range(k):
        x = math.exp(x)
    return x


def _iterated_log(t: float, k: int) -> float:
    x = t
    for _ in range(k):
        x = math.log(x)
    return x


def eval_b(t: float) -> float:
    if not t > math.e:
        raise DomainError(f"b(t) = sqrt(2 ln t) requires t > e, got t={t!r}")
    return math.sqrt(2.0 * math.log(t))


def eval_c(t: float) -> float:
    if not t > _tower(2):
        raise DomainError(f"c(t) = sqrt(2 ln ln t) requires t > e^e, got t={t!r}")
    return math.sqrt(2.0 * math.log(math.log(t)))


@dataclass(frozen=True)
class Normalizer:
    """A normalizing function g(t), positive and nondecreasing on its domain.

    kind="iterated-log" uses ``k`` and ``alpha``; kind="constant" uses
    ``value``; kind="user-table" interpolates the pairs ``table_t``,
    ``table_g`` linearly and is undefined outside their range.
    """

    kind: str = B
    k: int = 1
    alpha: float = 0.5
    value: float = 1.0
    table_t: tuple = ()
    table_g: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown normalizer kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == ITERATED_LOG:
            if int(self.k) != self.k or self.k < 1:
                raise ParameterError(f"iterated-log depth k must be an integer >= 1, got {self.k!r}")
            if not self.alpha > 0:
                raise ParameterError(f"iterated-log exponent alpha must be > 0, got {self.alpha!r}")
        if self.kind == CONSTANT and not self.value > 0:
            raise ParameterError(f"constant normalizer must be > 0, got {self.value!r}")
        if self.kind == TABLE:
            t = np.asarray(self.table_t, dtype=float)
            g = np.asarray(self.table_g, dtype=float)
            if t.ndim != 1 or t.shape != g.shape or len(t) < 2:
                raise ParameterError("user-table needs matching t and g lists with >= 2 entries")
            if np.any(np.diff(t) <= 0):
                raise ParameterError("user-table t values must be strictly increasing")
            if np.any(g <= 0) or np.any(np.diff(g) < 0):
                raise ParameterError("user-table g values must be positive and nondecreasing")
            object.__setattr__(self, "table_t", tuple(t.tolist()))
            object.__setattr__(self, "table_g", tuple(g.tolist()))

    @property
    def lower_bound(self) -> float:
        """Infimum of the domain (excluded, except for user tables)."""
        if self.kind == B:
            return math.e
        if self.kind == C:
            return _tower(2)
        if self.kind == ITERATED_LOG:
            return _tower(self.k)
        if self.kind == TABLE:
            return self.table_t[0]
        return 0.0

    def in_domain(self, t: float) -> bool:
        if self.kind == TABLE:
            return self.table_t[0] <= t <= self.table_t[-1]
        return t > self.lower_bound

    def domain_text(self) -> str:
        if self.kind == TABLE:
            return f"{self.table_t[0]} <= t <= {self.table_t[-1]}"
        if self.kind == ITERATED_LOG:
            return f"t > E_{self.k} = {self.lower_bound:.6g}"
        return {B: "t > e", C: "t > e^e", CONSTANT: "t > 0"}[self.kind]

    def __call__(self, t: float) -> float:
        return eval_g(self, t)

    @property
    def label(self) -> str:
        if self.kind == ITERATED_LOG:
            return f"iterated-log(k={self.k}, alpha={self.alpha})"
        if self.kind == CONSTANT:
            return f"constant({self.value})"
        return self.kind


def eval_g(g: Normalizer, t: float) -> float:
    if g.kind == B:
        return eval_b(t)
    if g.kind == C:
        return eval_c(t)
    if not g.in_domain(t):
        raise DomainError(f"normalizer {g.label} requires {g.domain_text()}, got t={t!r}")
    if g.kind == ITERATED_LOG:
        return (2.0 * _iterated_log(t, g.k)) ** g.alpha
    if g.kind == CONSTANT:
        return g.value
    return float(np.interp(t, g.table_t, g.table_g))


def check_domain(g: Normalizer, ts) -> None:
    for t in ts:
        if not g.in_domain(t):
            raise DomainError(
                f"checkpoint n={t} is outside the domain of normalizer {g.label} ({g.domain_text()})"
            )

"""Structural statistics of a pair of variables.

Three objects drive the region computations downstream:

* the minimal sufficient statistic of one variable with respect to another
  (the coarsest relabeling that preserves the conditional law),
* the maximal common function of two variables (the finest random variable
  that is almost surely a deterministic function of each; its classes are
  the connected components of the support bipartite graph),
* the deterministic-correlation test: whether conditioning on the maximal
  common function renders the two variables independent.

Zero-probability symbols carry no label and are excluded from every
partition; the objects here are defined almost surely. Labelings are
canonical: label 0 is the class containing the smallest support symbol
index, and labels increase by first appearance, so results are reproducible
across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dist import JointPmf, marginal
from .errors import EmptySupportError, ShapeMismatchError

__all__ = [
    "DEFAULT_CI_TOL",
    "Statistic",
    "CommonFunction",
    "AuxChannel",
    "minimal_sufficient_statistic",
    "maximal_common_function",
    "conditional_independence_residual",
    "is_deterministically_correlated",
    "sample_feasible_aux",
]

DEFAULT_CI_TOL = 1e-9

# Conditional rows are rounded to this many decimals before exact grouping;
# pairwise-epsilon equality is not transitive, rounding-then-grouping is.
_ROW_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class Statistic:
    """Deterministic labeling of one variable's alphabet.

    ``labels[sym]`` is a class index in ``range(num_classes)`` for every
    positive-probability symbol and -1 for symbols off the support.
    """

    variable: str
    labels: tuple
    num_classes: int

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        used = sorted({v for v in labels if v >= 0})
        if used != list(range(self.num_classes)):
            raise ShapeMismatchError(
                f"labels {used} are not contiguous over {self.num_classes} classes"
            )
        if any(v < -1 for v in labels):
            raise ShapeMismatchError("labels must be >= -1")
        object.__setattr__(self, "labels", labels)

    @property
    def support(self) -> tuple:
        return tuple(v >= 0 for v in self.labels)

    def classes(self) -> tuple:
        """Symbols grouped by label, label order."""
        out = [[] for _ in range(self.num_classes)]
        for sym, lab in enumerate(self.labels):
            if lab >= 0:
                out[lab].append(sym)
        return tuple(tuple(cls) for cls in out)

    def as_partition(self) -> frozenset:
        """Label-free view, for comparing partitions."""
        return frozenset(frozenset(cls) for cls in self.classes())

    @classmethod
    def identity(cls, variable: str, support_mask) -> "Statistic":
        labels, nxt = [], 0
        for on in support_mask:
            labels.append(nxt if on else -1)
            nxt += 1 if on else 0
        return cls(variable, tuple(labels), nxt)

    @classmethod
    def constant(cls, variable: str, support_mask) -> "Statistic":
        labels = tuple(0 if on else -1 for on in support_mask)
        k = 1 if any(support_mask) else 0
        return cls(variable, labels, k)


@dataclass(frozen=True, eq=False)
class CommonFunction:
    """A pair of statistics with f(a) = g(b) on every positive-probability pair."""

    stat_a: Statistic
    stat_b: Statistic
    components: int

    def __post_init__(self):
        if self.stat_a.num_classes != self.components or \
                self.stat_b.num_classes != self.components:
            raise ShapeMismatchError("both sides must use the same component labels")


@dataclass(frozen=True, eq=False)
class AuxChannel:
    """Conditional pmf w(u | component) generating an auxiliary variable.

    Rows live on the probability simplex (within 1e-12). Any such channel
    applied to the maximal-common-function label yields an auxiliary variable
    whose conditional law given the source depends on the component alone,
    hence is simultaneously a function of either side of the pair.
    """

    components: int
    aux_card: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (self.components, self.aux_card):
            raise ShapeMismatchError(
                f"channel shape {m.shape} != ({self.components}, {self.aux_card})"
            )
        if np.any(m < 0.0):
            raise ShapeMismatchError("channel entries must be nonnegative")
        rows = m.sum(axis=1)
        if self.components and np.max(np.abs(rows - 1.0)) > 1e-12:
            raise ShapeMismatchError("channel rows must sum to 1 within 1e-12")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def _pair_table(p: JointPmf, a: str, b: str) -> np.ndarray:
    """Joint table of (a, b) with axis order (a, b)."""
    joint = marginal(p, (a, b))
    t = joint.probs
    return t if joint.variables == (a, b) else t.T


def minimal_sufficient_statistic(p: JointPmf, of: str, wrt) -> Statistic:
    """Coarsest labeling of ``of`` preserving the conditional law of ``wrt``.

    Positive-probability symbols of ``of`` are merged exactly when their
    conditional rows P(wrt | of = sym) agree after rounding each entry to 12
    decimals. Canonical labeling by first appearance in symbol order.

    Parameters
    ----------
    p : JointPmf
    of : str
        The variable being relabeled.
    wrt : str or iterable of str
        The variable group whose conditional law must be preserved;
        must not contain ``of``.

    Raises
    ------
    EmptySupportError
        If ``of`` (or ``wrt``) has no positive-probability symbol.
    """
    group = p.normalize_group(wrt)
    if of in group:
        raise ValueError(f"{of!r} cannot appear in its own conditioning group")
    if not group:
        raise ValueError("wrt must be a nonempty variable group")
    joint = marginal(p, (of,) + group)
    m = np.moveaxis(joint.probs, joint.axis(of), 0)
    m = m.reshape(m.shape[0], -1)
    weights = m.sum(axis=1)
    if not np.any(weights > 0.0):
        raise EmptySupportError(f"{of!r} has empty support")
    labels = [-1] * m.shape[0]
    seen: dict = {}
    for sym in range(m.shape[0]):
        if weights[sym] <= 0.0:
            continue
        row = np.round(m[sym] / weights[sym], _ROW_DECIMALS) + 0.0
        key = row.tobytes()
        if key not in seen:
            seen[key] = len(seen)
        labels[sym] = seen[key]
    return Statistic(of, tuple(labels), len(seen))


def maximal_common_function(p: JointPmf, a: str, b: str) -> CommonFunction:
    """Finest common relabeling of ``a`` and ``b``.

    Components of the bipartite graph on support symbols, with an edge
    wherever the pair has positive probability. Equal labels on both sides;
    canonical numbering by the smallest contained ``a``-symbol.

    Raises
    ------
    EmptySupportError
        If the pair has no positive-probability cell.
    """
    if a == b:
        raise ValueError("the two variables must be distinct")
    t = _pair_table(p, a, b)
    edges = t > 0.0
    if not edges.any():
        raise EmptySupportError(f"pair ({a!r}, {b!r}) has empty support")
    ca, cb = edges.shape
    lab_a = [-1] * ca
    lab_b = [-1] * cb
    comp = 0
    for start in range(ca):
        if lab_a[start] >= 0 or not edges[start].any():
            continue
        stack = [("a", start)]
        lab_a[start] = comp
        while stack:
            side, idx = stack.pop()
            if side == "a":
                for j in np.nonzero(edges[idx])[0]:
                    if lab_b[j] < 0:
                        lab_b[j] = comp
                        stack.append(("b", int(j)))
            else:
                for i in np.nonzero(edges[:, idx])[0]:
                    if lab_a[i] < 0:
                        lab_a[i] = comp
                        stack.append(("a", int(i)))
        comp += 1
    return CommonFunction(
        Statistic(a, tuple(lab_a), comp),
        Statistic(b, tuple(lab_b), comp),
        comp,
    )


def conditional_independence_residual(p: JointPmf, a: str, b: str,
                                      cf: CommonFunction | None = None) -> float:
    """Worst-case deviation of P(a,b | component) from product form.

    The max over components u and cells (a,b) in u of
    ``|P(a,b|u) - P(a|u) P(b|u)|``, including zero-probability cells inside
    the component block (support holes count as dependence).
    """
    if cf is None:
        cf = maximal_common_function(p, a, b)
    t = _pair_table(p, a, b)
    lab_a = np.asarray(cf.stat_a.labels)
    lab_b = np.asarray(cf.stat_b.labels)
    worst = 0.0
    for u in range(cf.components):
        block = t[np.ix_(lab_a == u, lab_b == u)]
        w = float(block.sum())
        if w <= 0.0:
            continue
        cond = block / w
        resid = np.abs(cond - np.outer(cond.sum(axis=1), cond.sum(axis=0)))
        worst = max(worst, float(resid.max()))
    return worst


def is_deterministically_correlated(p: JointPmf, a: str, b: str,
                                    ci_tol: float = DEFAULT_CI_TOL):
    """Whether the maximal common function renders ``a`` and ``b`` independent.

    Returns ``(verdict, common_function)``; the verdict is True iff the
    conditional-independence residual is at most ``ci_tol`` in every
    component.
    """
    cf = maximal_common_function(p, a, b)
    return conditional_independence_residual(p, a, b, cf) <= ci_tol, cf


def sample_feasible_aux(cf: CommonFunction, aux_card: int, seed) -> AuxChannel:
    """Pseudorandom channel from component labels to an auxiliary alphabet.

    Rows are Dirichlet(1, ..., 1) draws renormalized onto the simplex;
    deterministic for a fixed seed.
    """
    if aux_card < 1:
        raise ValueError("aux_card must be >= 1")
    rng = np.random.default_rng(seed)
    m = rng.dirichlet(np.ones(aux_card), size=cf.components)
    m = m / m.sum(axis=1, keepdims=True)
    return AuxChannel(cf.components, aux_card, m)

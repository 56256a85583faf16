"""Exact arithmetic on dense finite joint distributions.

A :class:`JointPmf` is a dense probability table over an ordered tuple of
named finite variables, stored as a numpy array whose axes follow the
variable order (so the flat row-major layout has the last variable varying
fastest). All information quantities are in bits (base-2 logarithms).

Conventions
-----------
* No silent renormalization anywhere: tables that do not sum to 1 within
  tolerance are rejected at load time, and every derived table preserves the
  total mass of its input exactly (up to float addition).
* ``0 * log 0`` is treated as 0; zero-probability cells are retained in
  tables but contribute nothing to any entropy.
* Conditional mutual information is clamped to 0 when it lands within
  ``NUM_TOL`` below zero (floating-point guard only).

All functions are pure; :class:`JointPmf` instances are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateVariableError,
    LabelMissingError,
    NegativeEntryError,
    OverlappingGroupsError,
    ShapeMismatchError,
    SumOutOfToleranceError,
    UnknownVariableError,
)

__all__ = [
    "DEFAULT_SUM_TOL",
    "NUM_TOL",
    "JointPmf",
    "load_pmf",
    "marginal",
    "entropy",
    "cond_mutual_info",
    "attach_statistic",
    "source_roles",
]

DEFAULT_SUM_TOL = 1e-9
NUM_TOL = 1e-12

# A variable group is a single name or an iterable of names; group order is
# always normalized to the distribution's variable order.
Group = "str | Iterable[str]"


def _entropy_of(table: np.ndarray) -> float:
    v = table.reshape(-1)
    v = v[v > 0.0]
    if v.size == 0:
        return 0.0
    # the + 0.0 turns a -0.0 (deterministic table) into +0.0
    return float(-(v * np.log2(v)).sum()) + 0.0


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Dense joint pmf over named finite variables.

    Attributes
    ----------
    variables : tuple[str, ...]
        Unique variable names, in table-axis order.
    cardinalities : tuple[int, ...]
        Alphabet size per variable; the product equals the table size.
    probs : numpy.ndarray
        Read-only float64 array of shape ``cardinalities`` with entries >= 0.
    """

    variables: tuple
    cardinalities: tuple
    probs: np.ndarray

    def __post_init__(self):
        names = tuple(str(v) for v in self.variables)
        cards = tuple(int(c) for c in self.cardinalities)
        if len(set(names)) != len(names):
            raise DuplicateVariableError(f"duplicate variable names in {names}")
        if not names:
            raise ShapeMismatchError("a joint pmf needs at least one variable")
        if len(names) != len(cards):
            raise ShapeMismatchError(
                f"{len(names)} variable names but {len(cards)} cardinalities"
            )
        if any(c < 1 for c in cards):
            raise ShapeMismatchError(f"cardinalities must be positive, got {cards}")
        arr = np.asarray(self.probs, dtype=np.float64)
        if arr.shape != cards:
            if arr.size != int(np.prod(cards)):
                raise ShapeMismatchError(
                    f"table has {arr.size} entries, expected {int(np.prod(cards))}"
                )
            arr = arr.reshape(cards)
        if np.any(arr < 0.0):
            worst = float(arr.min())
            raise NegativeEntryError(f"minimum table entry is {worst!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "variables", names)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "probs", arr)

    # -- variable bookkeeping -------------------------------------------------

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    def axis(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(
                f"{name!r} not among variables {self.variables}"
            ) from None

    def cardinality(self, name: str) -> int:
        return self.cardinalities[self.axis(name)]

    def normalize_group(self, group) -> tuple:
        """Return ``group`` as a tuple ordered by this pmf's variable order."""
        if isinstance(group, str):
            group = (group,)
        axes = sorted({self.axis(name) for name in group})
        return tuple(self.variables[i] for i in axes)

    def total(self) -> float:
        return float(self.probs.sum())


def load_pmf(table, variables, cardinalities, sum_tol: float = DEFAULT_SUM_TOL,
             prob_floor: float = 0.0) -> JointPmf:
    """Validate a raw probability table and wrap it as a :class:`JointPmf`.

    Parameters
    ----------
    table : array-like
        Flat row-major entries (last variable fastest) or an array already
        shaped like ``cardinalities``.
    variables, cardinalities
        Names and alphabet sizes, in axis order.
    sum_tol : float
        Maximum allowed deviation of the total mass from 1.
    prob_floor : float
        Entries strictly below this value are snapped to exact 0 before
        validation; the default 0.0 keeps every entry untouched.

    Raises
    ------
    ShapeMismatchError, NegativeEntryError, SumOutOfToleranceError,
    DuplicateVariableError
    """
    arr = np.asarray(table, dtype=np.float64)
    expected = int(np.prod([int(c) for c in cardinalities])) if len(cardinalities) else 0
    if arr.size != expected:
        raise ShapeMismatchError(f"table has {arr.size} entries, expected {expected}")
    if np.any(arr < 0.0):
        raise NegativeEntryError(f"minimum table entry is {float(arr.min())!r}")
    if prob_floor > 0.0:
        arr = np.where(arr < prob_floor, 0.0, arr)
    total = float(arr.sum())
    if abs(total - 1.0) > sum_tol:
        raise SumOutOfToleranceError(
            f"table sums to {total!r}, outside 1 +/- {sum_tol!r}"
        )
    return JointPmf(tuple(variables), tuple(cardinalities), arr)


def marginal(p: JointPmf, group) -> JointPmf:
    """Sum out every variable not in ``group``; keeps the original order."""
    keep = p.normalize_group(group)
    if not keep:
        raise ValueError("marginal needs a nonempty variable group")
    drop_axes = tuple(i for i, v in enumerate(p.variables) if v not in keep)
    out = p.probs.sum(axis=drop_axes) if drop_axes else p.probs
    cards = tuple(p.cardinalities[p.axis(v)] for v in keep)
    return JointPmf(keep, cards, out)


def entropy(p: JointPmf, group) -> float:
    """Shannon entropy H(group) in bits, with 0 log 0 = 0."""
    keep = p.normalize_group(group)
    if not keep:
        raise ValueError("entropy needs a nonempty variable group")
    return _entropy_of(marginal(p, keep).probs)


def cond_mutual_info(p: JointPmf, a, b, c=()) -> float:
    """Conditional mutual information I(a ; b | c) in bits.

    Computed as H(a,c) + H(b,c) - H(a,b,c) - H(c), which keeps the result
    exactly symmetric in ``a`` and ``b``. ``c`` may be empty (plain mutual
    information). Values within ``NUM_TOL`` below zero are clamped to 0.

    Raises
    ------
    OverlappingGroupsError
        If ``a`` and ``b`` overlap, or ``c`` overlaps either.
    UnknownVariableError
    """
    ga = p.normalize_group(a)
    gb = p.normalize_group(b)
    gc = p.normalize_group(c)
    if not ga or not gb:
        raise ValueError("both information arguments must be nonempty groups")
    sa, sb, sc = set(ga), set(gb), set(gc)
    if sa & sb:
        raise OverlappingGroupsError(f"groups {ga} and {gb} overlap")
    if sc & (sa | sb):
        raise OverlappingGroupsError(f"conditioning set {gc} overlaps an argument")
    h_ac = entropy(p, ga + gc)
    h_bc = entropy(p, gb + gc)
    h_abc = entropy(p, ga + gb + gc)
    h_c = entropy(p, gc) if gc else 0.0
    value = h_ac + h_bc - h_abc - h_c
    if -NUM_TOL <= value < 0.0:
        return 0.0
    return value


def source_roles(p: JointPmf) -> tuple:
    """Names of the (X, Y, Z) roles, assigned positionally.

    The three-terminal pipeline designates the first variable as the key
    holder X and the remaining two as Y and Z, in order.
    """
    if p.num_variables != 3:
        raise ShapeMismatchError(
            f"expected a 3-variable source, got {p.num_variables} variables"
        )
    return p.variables


def attach_statistic(p: JointPmf, stat, of: str | None = None,
                     new_name: str = "") -> JointPmf:
    """Augment ``p`` with a new variable equal to ``stat`` applied pointwise.

    The new variable is appended as the last axis, with cardinality equal to
    the statistic's class count. The marginal over the original variables is
    unchanged entrywise. Zero-probability symbols of ``of`` may be unlabeled;
    their (all-zero) slices stay at label-free zero mass.

    Raises
    ------
    LabelMissingError
        If some positive-probability symbol of ``of`` carries no label.
    """
    if not new_name:
        raise ValueError("new_name must be a nonempty variable name")
    of = stat.variable if of is None else of
    if of != stat.variable:
        raise ValueError(
            f"statistic is defined on {stat.variable!r}, not on {of!r}"
        )
    ax = p.axis(of)
    if new_name in p.variables:
        raise DuplicateVariableError(f"{new_name!r} already names a variable")
    card = p.cardinalities[ax]
    labels = stat.labels
    if len(labels) != card:
        raise ShapeMismatchError(
            f"statistic labels {len(labels)} symbols, variable has {card}"
        )
    k = max(stat.num_classes, 1)
    marg = marginal(p, of).probs
    for sym in range(card):
        if marg[sym] > 0.0 and labels[sym] < 0:
            raise LabelMissingError(
                f"symbol {sym} of {of!r} has positive probability but no label"
            )
    out = np.zeros(p.cardinalities + (k,), dtype=np.float64)
    src = np.moveaxis(p.probs, ax, 0)
    dst = np.moveaxis(out, ax, 0)
    for sym in range(card):
        lab = labels[sym]
        if lab >= 0:
            dst[sym, ..., lab] = src[sym]
    return JointPmf(p.variables + (new_name,), p.cardinalities + (k,), out)

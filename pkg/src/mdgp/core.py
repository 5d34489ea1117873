"""Domain types, distance metrics, and the objective/feasibility semantics.

Everything else in the package is validated against the functions here:
``objective_value`` defines what a grouping is worth and
``validate_grouping`` defines when it is admissible.

Element indices are 1-based throughout the public API, matching the
usual notation for this problem family.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

METRICS = ("manhattan", "euclidean", "gower")


class SchemaError(ValueError):
    """An attribute table is incompatible with the requested metric."""


@dataclass(frozen=True)
class AttributeTable:
    """Raw element data: N rows of K attribute values plus a per-column kind.

    Kinds are ``"num"`` (unitless reals) or ``"cat"`` (opaque labels compared
    only for equality).
    """

    rows: tuple[tuple, ...]
    schema: tuple[str, ...]

    def __init__(self, rows, schema):
        rows = tuple(tuple(r) for r in rows)
        schema = tuple(schema)
        if len(schema) == 0:
            raise ValueError("schema must have at least one attribute")
        if len(rows) == 0:
            raise ValueError("table must have at least one row")
        for kind in schema:
            if kind not in ("num", "cat"):
                raise ValueError(f"unknown attribute kind {kind!r}")
        for idx, row in enumerate(rows, 1):
            if len(row) != len(schema):
                raise ValueError(
                    f"row {idx} has {len(row)} values, schema has {len(schema)}"
                )
            for kind, value in zip(schema, row):
                if kind == "num":
                    if isinstance(value, bool) or not isinstance(value, (int, float)):
                        raise ValueError(f"row {idx}: {value!r} is not numeric")
                    if not np.isfinite(value):
                        raise ValueError(f"row {idx}: non-finite numeric value")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "schema", schema)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return len(self.schema)

    def numeric_columns(self) -> np.ndarray:
        """The numeric attributes as an (n, k_num) float array."""
        cols = [i for i, kind in enumerate(self.schema) if kind == "num"]
        return np.array([[row[i] for i in cols] for row in self.rows], dtype=float)


class DistanceMatrix:
    """Symmetric pairwise distances with dense upper-triangular storage.

    Only entries for i < j are stored (condensed form, same layout as
    ``scipy.spatial.distance.pdist``); the diagonal is implicitly zero.
    Lookups take 1-based indices.
    """

    __slots__ = ("n", "_condensed")

    def __init__(self, n: int, condensed):
        condensed = np.asarray(condensed, dtype=float)
        if n < 1:
            raise ValueError("element count must be >= 1")
        expected = n * (n - 1) // 2
        if condensed.shape != (expected,):
            raise ValueError(
                f"expected {expected} upper-triangular entries for n={n}, "
                f"got shape {condensed.shape}"
            )
        if expected and not np.all(np.isfinite(condensed)):
            raise ValueError("all distances must be finite")
        condensed.flags.writeable = False
        self.n = n
        self._condensed = condensed

    @classmethod
    def from_square(cls, matrix) -> "DistanceMatrix":
        """Build from a full square matrix; must be symmetric with zero diagonal."""
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("expected a square matrix")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix is not symmetric")
        if np.any(np.diag(m) != 0.0):
            raise ValueError("diagonal must be zero")
        n = m.shape[0]
        iu = np.triu_indices(n, k=1)
        return cls(n, m[iu])

    def _index(self, i: int, j: int) -> int:
        # 1-based i < j to condensed offset
        i0, j0 = i - 1, j - 1
        return self.n * i0 - i0 * (i0 + 1) // 2 + (j0 - i0 - 1)

    def lookup(self, i: int, j: int) -> float:
        """Distance between elements i and j (1-based); 0 when i == j."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"element index out of range: ({i}, {j})")
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self._condensed[self._index(i, j)])

    def condensed(self) -> np.ndarray:
        """The stored upper-triangular entries, pair order (1,2),(1,3),...,(n-1,n)."""
        return self._condensed

    def as_square(self) -> np.ndarray:
        """Full symmetric (n, n) array."""
        m = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        m[iu] = self._condensed
        return m + m.T

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._condensed, other._condensed)

    def __repr__(self) -> str:
        return f"DistanceMatrix(n={self.n})"


@dataclass(frozen=True)
class Instance:
    """A problem instance: distances plus group count G and size bounds [a, b]."""

    dist: DistanceMatrix
    G: int
    a: int
    b: int

    def __post_init__(self):
        n = self.dist.n
        if self.G < 1:
            raise ValueError("G must be >= 1")
        if not (1 <= self.a <= self.b <= n):
            raise ValueError(f"size bounds must satisfy 1 <= a <= b <= N, got a={self.a}, b={self.b}, N={n}")
        if not (self.G * self.a <= n <= self.G * self.b):
            raise ValueError(
                f"infeasible instance: need G*a <= N <= G*b, "
                f"got {self.G}*{self.a} <= {n} <= {self.G}*{self.b}"
            )

    @property
    def n(self) -> int:
        return self.dist.n


@dataclass(frozen=True)
class Grouping:
    """A partition of elements {1..N} into nonempty groups.

    Members of each group are kept ascending. Group order is preserved as
    constructed; use :func:`canonicalize` for the unique representative
    (groups ordered by smallest member).
    """

    groups: tuple[tuple[int, ...], ...]

    def __init__(self, groups):
        groups = tuple(tuple(sorted(g)) for g in groups)
        seen: set[int] = set()
        for g in groups:
            if not g:
                raise ValueError("groups must be nonempty")
            for e in g:
                if not isinstance(e, int) or isinstance(e, bool):
                    raise ValueError(f"element indices must be integers, got {e!r}")
                if e in seen:
                    raise ValueError(f"element {e} appears in more than one group")
                seen.add(e)
        if not seen:
            raise ValueError("grouping must contain at least one element")
        n = len(seen)
        if seen != set(range(1, n + 1)):
            raise ValueError(f"groups must partition 1..{n} exactly")
        object.__setattr__(self, "groups", groups)

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def group_count(self) -> int:
        return len(self.groups)

    def labels(self) -> dict[int, int]:
        """Element -> 1-based group label in stored order."""
        return {e: g for g, members in enumerate(self.groups, 1) for e in members}


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violations: tuple[str, ...] = field(default=())


def canonicalize(grouping: Grouping) -> Grouping:
    """Reorder groups by their smallest member (idempotent, value-preserving)."""
    return Grouping(sorted(grouping.groups, key=lambda g: g[0]))


def distance_matrix(table: AttributeTable, metric: str) -> DistanceMatrix:
    """Pairwise distances between the table's rows under the chosen metric.

    ``manhattan`` and ``euclidean`` require an all-numeric schema. ``gower``
    mixes kinds: numeric attributes contribute |v_i - v_j| / column range
    (0 when the column has zero range), categorical attributes contribute
    0/1 on equality, and the distance is the mean contribution, so every
    entry lies in [0, 1].
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
    n = table.n
    if metric in ("manhattan", "euclidean"):
        if any(kind != "num" for kind in table.schema):
            raise SchemaError(
                f"{metric} distance requires an all-numeric schema; "
                "use gower for mixed attributes"
            )
        x = table.numeric_columns()
        cond = pdist(x, "cityblock" if metric == "manhattan" else "euclidean")
        return DistanceMatrix(n, cond)

    # Gower: mean per-attribute contribution over all K columns.
    pairs = n * (n - 1) // 2
    total = np.zeros(pairs)
    iu, ju = np.triu_indices(n, k=1)
    for col, kind in enumerate(table.schema):
        if kind == "num":
            v = np.array([row[col] for row in table.rows], dtype=float)
            rng = v.max() - v.min()
            if rng > 0.0:
                total += np.abs(v[iu] - v[ju]) / rng
        else:
            v = np.array([row[col] for row in table.rows], dtype=object)
            total += (v[iu] != v[ju]).astype(float)
    return DistanceMatrix(n, total / table.k)


def objective_value(grouping: Grouping, dist: DistanceMatrix) -> float:
    """Sum of distances over unordered same-group pairs.

    Summation runs in fixed pair order (1,2),(1,3),...,(n-1,n) regardless of
    how the grouping is stored, so relabelings produce bit-identical values.
    """
    if grouping.n != dist.n:
        raise ValueError(
            f"grouping covers {grouping.n} elements, distance matrix has {dist.n}"
        )
    labels = np.empty(dist.n, dtype=np.int64)
    for g, members in enumerate(grouping.groups):
        for e in members:
            labels[e - 1] = g
    iu, ju = np.triu_indices(dist.n, k=1)
    same = labels[iu] == labels[ju]
    return float(dist.condensed()[same].sum())


def validate_grouping(grouping: Grouping, instance: Instance) -> FeasibilityReport:
    """Check group count and per-group size bounds; violations are data, not errors."""
    if grouping.n != instance.n:
        raise ValueError(
            f"grouping covers {grouping.n} elements, instance has {instance.n}"
        )
    violations = []
    if grouping.group_count != instance.G:
        violations.append(
            f"group count {grouping.group_count} != G={instance.G}"
        )
    for idx, members in enumerate(grouping.groups, 1):
        size = len(members)
        if size < instance.a:
            violations.append(f"group {idx} size {size} < a={instance.a}")
        elif size > instance.b:
            violations.append(f"group {idx} size {size} > b={instance.b}")
    return FeasibilityReport(feasible=not violations, violations=tuple(violations))

"""Explicit ILP construction over pair variables, plus encoding and checking.

Three variants share the same objective (distance-weighted pair variables)
and the same transitivity rows; they differ in how group sizes and the group
count are pinned down:

* ``equal``        degree of every element fixed to N/G - 1.
* ``degree_only``  degree bounded in [a-1, b-1] only. Intentionally defective:
                   it admits partitions with the wrong number of groups.
* ``unequal``      degree bounds plus leader variables y_j (element j is the
                   smallest index of its group; element 1 is an implicit
                   leader, so exactly G-1 of the y_j are 1).

Constraint names are stable (``tri1_i_j_k``, ``dmin_i``, ``dmax_i``,
``deq_i``, ``lex_i_j``, ``lforce_j``, ``lcount``) so violation reports and
exported LP files are diffable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

from .core import Grouping, Instance

VARIANTS = ("equal", "unequal", "degree_only")


@dataclass(frozen=True)
class PairVar:
    """Indicator that elements i and j (1-based, i < j) share a group."""

    i: int
    j: int

    def __post_init__(self):
        if not (1 <= self.i < self.j):
            raise ValueError(f"pair variable needs 1 <= i < j, got ({self.i}, {self.j})")

    @property
    def name(self) -> str:
        return f"x_{self.i}_{self.j}"


@dataclass(frozen=True)
class LeaderVar:
    """Indicator that element j (j >= 2) is the smallest index in its group."""

    j: int

    def __post_init__(self):
        if self.j < 2:
            raise ValueError("leader variables exist only for j >= 2")

    @property
    def name(self) -> str:
        return f"y_{self.j}"


VarRef = Union[PairVar, LeaderVar]


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[int, VarRef], ...]
    sense: str  # "<=", ">=", "="
    rhs: int

    def __post_init__(self):
        if self.sense not in ("<=", ">=", "="):
            raise ValueError(f"bad sense {self.sense!r}")
        refs = [v for _, v in self.terms]
        if len(refs) != len(set(refs)):
            raise ValueError(f"constraint {self.name}: duplicate variable in terms")


@dataclass(frozen=True)
class IlpModel:
    n: int
    variables: tuple[VarRef, ...]
    objective: tuple[tuple[float, PairVar], ...]
    constraints: tuple[LinearConstraint, ...]
    variant: str

    def pair_vars(self) -> list[PairVar]:
        return [v for v in self.variables if isinstance(v, PairVar)]

    def leader_vars(self) -> list[LeaderVar]:
        return [v for v in self.variables if isinstance(v, LeaderVar)]


@dataclass(frozen=True)
class PairAssignment:
    """Binary values for the pair variables and (for the unequal variant)
    the leader variables. Keys are (i, j) tuples and plain j indices."""

    x: dict[tuple[int, int], int]
    y: dict[int, int] | None = None

    def __post_init__(self):
        for (i, j), v in self.x.items():
            if not (1 <= i < j):
                raise ValueError(f"bad pair key ({i}, {j})")
            if v not in (0, 1):
                raise ValueError(f"x[{i},{j}] must be 0 or 1, got {v!r}")
        if self.y is not None:
            for j, v in self.y.items():
                if j < 2:
                    raise ValueError(f"bad leader key {j}")
                if v not in (0, 1):
                    raise ValueError(f"y[{j}] must be 0 or 1, got {v!r}")


@dataclass(frozen=True)
class CheckReport:
    objective: float
    violations: tuple[str, ...]

    @property
    def satisfied(self) -> bool:
        return not self.violations


def _pairs(n: int):
    return combinations(range(1, n + 1), 2)


def _objective(instance: Instance) -> tuple[tuple[float, PairVar], ...]:
    return tuple(
        (instance.dist.lookup(i, j), PairVar(i, j)) for i, j in _pairs(instance.n)
    )


def _triangle_rows(n: int) -> list[LinearConstraint]:
    rows = []
    for i, j, k in combinations(range(1, n + 1), 3):
        xij, xik, xjk = PairVar(i, j), PairVar(i, k), PairVar(j, k)
        suffix = f"{i}_{j}_{k}"
        rows.append(LinearConstraint(f"tri1_{suffix}", ((1, xij), (1, xjk), (-1, xik)), "<=", 1))
        rows.append(LinearConstraint(f"tri2_{suffix}", ((1, xij), (1, xik), (-1, xjk)), "<=", 1))
        rows.append(LinearConstraint(f"tri3_{suffix}", ((1, xik), (1, xjk), (-1, xij)), "<=", 1))
    return rows


def _degree_terms(i: int, n: int) -> tuple[tuple[int, VarRef], ...]:
    # row sum over the unordered pairs containing i
    return tuple(
        (1, PairVar(min(i, j), max(i, j))) for j in range(1, n + 1) if j != i
    )


def _degree_rows(n: int, a: int, b: int) -> list[LinearConstraint]:
    rows = [
        LinearConstraint(f"dmin_{i}", _degree_terms(i, n), ">=", a - 1)
        for i in range(1, n + 1)
    ]
    rows += [
        LinearConstraint(f"dmax_{i}", _degree_terms(i, n), "<=", b - 1)
        for i in range(1, n + 1)
    ]
    return rows


def build_equal(instance: Instance) -> IlpModel:
    """Equal-size variant: transitivity rows plus degree(i) = N/G - 1."""
    n, G = instance.n, instance.G
    if n % G != 0:
        raise ValueError(
            f"equal-size formulation inapplicable: N={n} is not divisible by G={G}"
        )
    size = n // G
    constraints = _triangle_rows(n)
    constraints += [
        LinearConstraint(f"deq_{i}", _degree_terms(i, n), "=", size - 1)
        for i in range(1, n + 1)
    ]
    return IlpModel(
        n=n,
        variables=tuple(PairVar(i, j) for i, j in _pairs(n)),
        objective=_objective(instance),
        constraints=tuple(constraints),
        variant="equal",
    )


def build_degree_only(instance: Instance) -> IlpModel:
    """Degree-bounds-only variant: admits any number of groups with sizes in
    [a, b]. Kept for demonstrating why the group count must be pinned."""
    n = instance.n
    constraints = _triangle_rows(n) + _degree_rows(n, instance.a, instance.b)
    return IlpModel(
        n=n,
        variables=tuple(PairVar(i, j) for i, j in _pairs(n)),
        objective=_objective(instance),
        constraints=tuple(constraints),
        variant="degree_only",
    )


def build_unequal(instance: Instance) -> IlpModel:
    """Full variant: degree bounds plus leader rows forcing exactly G groups.

    Per pair i < j: x_ij + y_j <= 1 (a grouped element is not a leader);
    per j >= 2: sum_{i<j} x_ij + y_j >= 1 (ungrouped-below elements lead);
    one count row: sum_j y_j = G - 1 (element 1 leads implicitly).
    """
    n, G = instance.n, instance.G
    constraints = _triangle_rows(n) + _degree_rows(n, instance.a, instance.b)
    for i, j in _pairs(n):
        constraints.append(
            LinearConstraint(
                f"lex_{i}_{j}", ((1, PairVar(i, j)), (1, LeaderVar(j))), "<=", 1
            )
        )
    for j in range(2, n + 1):
        terms = tuple((1, PairVar(i, j)) for i in range(1, j)) + ((1, LeaderVar(j)),)
        constraints.append(LinearConstraint(f"lforce_{j}", terms, ">=", 1))
    constraints.append(
        LinearConstraint(
            "lcount",
            tuple((1, LeaderVar(j)) for j in range(2, n + 1)),
            "=",
            G - 1,
        )
    )
    variables = tuple(PairVar(i, j) for i, j in _pairs(n)) + tuple(
        LeaderVar(j) for j in range(2, n + 1)
    )
    return IlpModel(
        n=n,
        variables=variables,
        objective=_objective(instance),
        constraints=tuple(constraints),
        variant="unequal",
    )


def build_model(instance: Instance, variant: str) -> IlpModel:
    """Dispatch on the variant name."""
    if variant == "equal":
        return build_equal(instance)
    if variant == "unequal":
        return build_unequal(instance)
    if variant == "degree_only":
        return build_degree_only(instance)
    raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")


def encode_grouping(grouping: Grouping, variant: str = "unequal") -> PairAssignment:
    """Pair/leader values induced by a grouping: x_ij = 1 iff i, j share a
    group; y_j = 1 iff j >= 2 is the smallest member of its group."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    n = grouping.n
    labels = grouping.labels()
    x = {(i, j): int(labels[i] == labels[j]) for i, j in _pairs(n)}
    y = None
    if variant == "unequal":
        minima = {min(g) for g in grouping.groups}
        y = {j: int(j in minima) for j in range(2, n + 1)}
    return PairAssignment(x=x, y=y)


def _value_of(asg: PairAssignment, var: VarRef) -> int:
    if isinstance(var, PairVar):
        return asg.x[(var.i, var.j)]
    assert asg.y is not None
    return asg.y[var.j]


def check_assignment(model: IlpModel, asg: PairAssignment) -> CheckReport:
    """Evaluate every constraint literally; violations are names, not errors."""
    want_pairs = {(v.i, v.j) for v in model.pair_vars()}
    if set(asg.x) != want_pairs:
        raise ValueError("assignment pair variables do not match the model")
    want_leaders = {v.j for v in model.leader_vars()}
    have_leaders = set(asg.y) if asg.y is not None else set()
    if have_leaders != want_leaders:
        raise ValueError("assignment leader variables do not match the model")

    objective = 0.0
    for coeff, var in model.objective:
        objective += coeff * asg.x[(var.i, var.j)]

    violations = []
    for con in model.constraints:
        lhs = sum(c * _value_of(asg, v) for c, v in con.terms)
        ok = (
            lhs <= con.rhs
            if con.sense == "<="
            else lhs >= con.rhs if con.sense == ">=" else lhs == con.rhs
        )
        if not ok:
            violations.append(con.name)
    return CheckReport(objective=objective, violations=tuple(violations))


def _coeff_str(c: float) -> str:
    # shortest exact decimal so re-parsing reproduces the float bit-for-bit
    return repr(float(c))


def _render_terms(terms, float_coeffs: bool) -> str:
    parts = []
    for idx, (coeff, var) in enumerate(terms):
        mag = abs(coeff)
        if float_coeffs:
            body = f"{_coeff_str(mag)} {var.name}"
        else:
            body = var.name if mag == 1 else f"{mag} {var.name}"
        if idx == 0:
            parts.append(body if coeff >= 0 else f"- {body}")
        else:
            parts.append(f"+ {body}" if coeff >= 0 else f"- {body}")
    return " ".join(parts)


def export_lp(model: IlpModel) -> str:
    """Serialize to LP text: Maximize / Subject To / Binaries / End.

    Variable names are ``x_<i>_<j>`` and ``y_<j>`` (1-based); pairs appear in
    lexicographic order and constraints in construction order, so exports are
    deterministic and diffable. Each constraint stays on one line.
    """
    lines = [f"\\ {model.variant} variant, n={model.n}", "Maximize"]
    obj_terms = tuple((c, v) for c, v in model.objective)
    lines.append(f" obj: {_render_terms(obj_terms, float_coeffs=True)}")
    lines.append("Subject To")
    for con in model.constraints:
        lines.append(
            f" {con.name}: {_render_terms(con.terms, float_coeffs=False)} {con.sense} {con.rhs}"
        )
    lines.append("Binaries")
    lines.append(" " + " ".join(v.name for v in model.variables))
    lines.append("End")
    return "\n".join(lines) + "\n"

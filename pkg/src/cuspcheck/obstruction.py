"""Divisor compatibility and the linear-algebra hypotheses of the glueing setup.

Two families of checks live here.  The first compares the affine
function of a polytope-with-facet pair against the one the facet
carries as a polytope in its own right: compatibility means the two
differ by a constant on the facet, checked exactly in the facet chart.
The second treats the abstract hypotheses on a configuration of fixed
points: a weighted moment balance relative to a subspace, a genericity
condition, and a kernel condition tied to evaluation data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .blowup import free_fixed_points
from .errors import (
    DimensionMismatch,
    InputValidationError,
    MissingEvaluationData,
)
from .extremal import AffineFunction, extremal_affine, restrict_affine
from .linalg import Matrix, Vector, nullspace, project_onto_columns, rank
from .polytope import DelzantPolytope, facet_polytope
from .rational import parse_rational


@dataclass(frozen=True)
class ObstructionReport:
    """Comparison of the pair's affine function with the facet's own.

    ``satisfied`` is the exact gradient equality in the facet chart;
    ``offset`` is the constant by which the two functions differ when
    they do (and the constant-term difference regardless).
    """

    a_pair: AffineFunction
    a_restricted: AffineFunction
    a_facet: AffineFunction
    difference_gradient: Vector
    offset: Fraction
    satisfied: bool

    def __bool__(self) -> bool:
        return self.satisfied


def check_facet_condition(
    poly: DelzantPolytope, divisor_facet: int | str
) -> ObstructionReport:
    """Exact test that the pair's affine function restricts compatibly."""
    if poly.dim < 2:
        raise DimensionMismatch(
            "the facet condition needs a polytope of dimension >= 2"
        )
    index = poly.resolve_facet(divisor_facet)
    a_pair = extremal_affine(poly, [index]).affine
    face, chart = facet_polytope(poly, index)
    a_restricted = restrict_affine(a_pair, chart)
    a_facet = extremal_affine(face).affine
    difference = tuple(
        a - b for a, b in zip(a_restricted.gradient, a_facet.gradient)
    )
    return ObstructionReport(
        a_pair=a_pair,
        a_restricted=a_restricted,
        a_facet=a_facet,
        difference_gradient=difference,
        offset=a_restricted.constant - a_facet.constant,
        satisfied=all(x == 0 for x in difference),
    )


@dataclass(frozen=True)
class MomentConfiguration:
    """Weighted fixed-point data against a distinguished subspace.

    ``n`` is the complex dimension entering the weight exponent,
    ``points`` are the moment images of the fixed points, ``weights``
    the positive coefficients, ``t_basis`` a tuple of vectors spanning
    the distinguished subspace (possibly empty), and ``eval_matrix``
    optionally carries evaluation data for the kernel condition.
    """

    n: int
    points: tuple[Vector, ...]
    weights: tuple[Fraction, ...]
    t_basis: tuple[Vector, ...]
    eval_matrix: Matrix | None = None

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"complex dimension must be a positive integer, got {self.n!r}")
        points = tuple(tuple(Fraction(x) for x in p) for p in self.points)
        if not points:
            raise ValueError("a moment configuration needs at least one point")
        dim = len(points[0])
        if any(len(p) != dim for p in points):
            raise DimensionMismatch("all points must have the same length")
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != len(points):
            raise DimensionMismatch(
                f"{len(points)} points but {len(weights)} weights"
            )
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        basis = tuple(tuple(Fraction(x) for x in col) for col in self.t_basis)
        if any(len(col) != dim for col in basis):
            raise DimensionMismatch("subspace basis columns must match point length")
        if basis and rank(basis) != len(basis):
            raise ValueError("subspace basis columns must be linearly independent")
        eval_matrix = self.eval_matrix
        if eval_matrix is not None:
            eval_matrix = tuple(
                tuple(Fraction(x) for x in row) for row in eval_matrix
            )
            if any(len(row) != dim for row in eval_matrix):
                raise DimensionMismatch(
                    "evaluation matrix rows must match point length"
                )
            if not eval_matrix:
                raise ValueError("evaluation matrix must have at least one row")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "t_basis", basis)
        object.__setattr__(self, "eval_matrix", eval_matrix)

    @property
    def dimension(self) -> int:
        return len(self.points[0])

    @classmethod
    def from_data(cls, data: object) -> "MomentConfiguration":
        """Build from the JSON wire format, with pointer-tagged errors."""
        errors: list[tuple[str, str]] = []
        if not isinstance(data, dict):
            raise InputValidationError([("", "configuration must be an object")])

        def parse_vector_list(key: str, required: bool) -> list[tuple[Fraction, ...]] | None:
            raw = data.get(key)
            if raw is None:
                if required:
                    errors.append((f"/{key}", "missing required field"))
                return None
            if not isinstance(raw, list):
                errors.append((f"/{key}", "must be an array of arrays"))
                return None
            out = []
            for i, entry in enumerate(raw):
                if not isinstance(entry, list):
                    errors.append((f"/{key}/{i}", "must be an array"))
                    continue
                row = []
                ok = True
                for j, value in enumerate(entry):
                    try:
                        row.append(parse_rational(value))
                    except (TypeError, ValueError) as exc:
                        errors.append((f"/{key}/{i}/{j}", str(exc)))
                        ok = False
                if ok:
                    out.append(tuple(row))
            return out

        n = data.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            errors.append(("/n", "must be a positive integer"))
            n = None
        points = parse_vector_list("points", required=True)
        basis = parse_vector_list("t_basis", required=True)
        eval_rows = parse_vector_list("eval_matrix", required=False)
        raw_weights = data.get("weights")
        weights: list[Fraction] | None = None
        if raw_weights is None:
            errors.append(("/weights", "missing required field"))
        elif not isinstance(raw_weights, list):
            errors.append(("/weights", "must be an array"))
        else:
            weights = []
            for i, value in enumerate(raw_weights):
                try:
                    weights.append(parse_rational(value))
                except (TypeError, ValueError) as exc:
                    errors.append((f"/weights/{i}", str(exc)))
        known = {"n", "points", "weights", "t_basis", "eval_matrix"}
        for key in sorted(set(data) - known):
            errors.append((f"/{key}", "unknown field"))
        if errors:
            raise InputValidationError(errors)
        assert n is not None and points is not None
        assert basis is not None and weights is not None
        try:
            return cls(
                n=n,
                points=tuple(points),
                weights=tuple(weights),
                t_basis=tuple(basis),
                eval_matrix=tuple(eval_rows) if eval_rows is not None else None,
            )
        except (ValueError, DimensionMismatch) as exc:
            raise InputValidationError([("", str(exc))]) from exc


@dataclass(frozen=True)
class BalanceResult:
    """Weighted point sum, its part in the subspace, and what is left over."""

    combination: Vector
    projection: Vector
    residual: Vector
    satisfied: bool

    def __bool__(self) -> bool:
        return self.satisfied


def check_balance(config: MomentConfiguration) -> BalanceResult:
    """Does the weighted point sum land in the distinguished subspace?

    The weights enter with exponent n - 1.  The sum is projected
    orthogonally onto the subspace; the condition holds exactly when
    the residual vanishes.
    """
    power = config.n - 1
    combination = tuple(
        sum(
            (w**power * p[i] for w, p in zip(config.weights, config.points)),
            Fraction(0),
        )
        for i in range(config.dimension)
    )
    projection, residual = project_onto_columns(config.t_basis, combination)
    return BalanceResult(
        combination=combination,
        projection=projection,
        residual=residual,
        satisfied=all(x == 0 for x in residual),
    )


def check_genericity(config: MomentConfiguration) -> bool:
    """Do the subspace and the points together span the whole space?"""
    vectors = list(config.t_basis) + list(config.points)
    return rank(vectors) == config.dimension


def check_kernel_condition(config: MomentConfiguration) -> bool:
    """Is the kernel of the evaluation matrix inside the subspace?

    Requires evaluation data; raises MissingEvaluationData without it.
    """
    if config.eval_matrix is None:
        raise MissingEvaluationData(
            "the kernel condition needs an evaluation matrix"
        )
    kernel = nullspace(config.eval_matrix, ncols=config.dimension)
    base_rank = rank(config.t_basis) if config.t_basis else 0
    for vec in kernel:
        if rank(list(config.t_basis) + [vec]) != base_rank:
            return False
    return True


@dataclass(frozen=True)
class HypothesesReport:
    """Joint outcome of the balance, genericity, and kernel checks."""

    balance: BalanceResult
    genericity: bool
    kernel: bool

    @property
    def satisfied(self) -> bool:
        return bool(self.balance) and self.genericity and self.kernel

    def __bool__(self) -> bool:
        return self.satisfied


def check_hypotheses(config: MomentConfiguration) -> HypothesesReport:
    """Run all three configuration checks; needs evaluation data present."""
    return HypothesesReport(
        balance=check_balance(config),
        genericity=check_genericity(config),
        kernel=check_kernel_condition(config),
    )


def toric_configuration(
    poly: DelzantPolytope,
    divisor_facet: int | str,
    weights: Sequence[Fraction] | None = None,
) -> MomentConfiguration:
    """Configuration induced by a polytope with a distinguished facet.

    Points are the fixed points off the distinguished facet; weights
    default to one each.  The torus itself supplies the distinguished
    subspace, so the basis is the full standard basis, and the induced
    evaluation data is trivial: invariant functions place no constraint
    beyond the subspace.
    """
    points = tuple(v.point for v in free_fixed_points(poly, divisor_facet))
    if weights is None:
        weight_tuple = tuple(Fraction(1) for _ in points)
    else:
        weight_tuple = tuple(parse_rational(w) for w in weights)
        if len(weight_tuple) != len(points):
            raise DimensionMismatch(
                f"{len(points)} free fixed points but {len(weight_tuple)} weights"
            )
    n = poly.dim
    basis = tuple(
        tuple(Fraction(1 if i == j else 0) for i in range(n)) for j in range(n)
    )
    zero_row = (tuple(Fraction(0) for _ in range(n)),)
    return MomentConfiguration(
        n=n,
        points=points,
        weights=weight_tuple,
        t_basis=basis,
        eval_matrix=zero_row,
    )

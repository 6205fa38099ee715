"""Delzant polytopes in halfspace form, with exact rational arithmetic.

A polytope is stored as {x : <u_i, x> >= c_i} with primitive integer
inward normals u_i and rational offsets c_i.  Construction validates
everything: non-emptiness, boundedness, full dimension, and that every
listed halfspace supports an actual facet.  Vertices are enumerated at
construction time and cached, so downstream code can treat a
DelzantPolytope as a fully checked immutable value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    ChartMismatch,
    DegenerateFacet,
    DegeneratePolytope,
    DimensionMismatch,
    EmptyPolytope,
    InputValidationError,
    NotUnimodular,
    UnboundedPolytope,
)
from .linalg import (
    IntVector,
    Vector,
    affine_rank,
    complete_primitive,
    det_int,
    dot,
    gcd_vector,
    inverse_unimodular,
    is_primitive,
    mat_vec,
    nullspace,
    rank,
    solve_linear,
    transpose,
)
from .rational import format_rational, parse_rational


def _as_int_vector(values: Iterable, what: str) -> IntVector:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"{what} entries must be integers, got {v!r}")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class Facet:
    """One halfspace <normal, x> >= offset with a primitive inward normal."""

    normal: IntVector
    offset: Fraction
    label: str | None = None

    def __post_init__(self) -> None:
        normal = _as_int_vector(self.normal, "facet normal")
        if all(x == 0 for x in normal):
            raise DegenerateFacet("facet normal is the zero vector")
        if not is_primitive(normal):
            raise DegenerateFacet(f"facet normal {normal} is not primitive")
        offset = parse_rational(self.offset)
        if self.label is not None and not isinstance(self.label, str):
            raise TypeError(f"facet label must be a string, got {self.label!r}")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)


@dataclass(frozen=True)
class Vertex:
    """A vertex point together with the indices of all facets tight there."""

    point: Vector
    active: tuple[int, ...]


@dataclass(frozen=True)
class FacetChart:
    """Lattice-adapted affine chart of a facet hyperplane.

    Maps y in R^{n-1} to origin + sum_k y_k basis[k], which parametrises
    {<normal, x> = offset} so that the chart's Lebesgue measure is the
    lattice boundary measure of the facet.
    """

    facet_index: int
    normal: IntVector
    offset: Fraction
    origin: Vector
    basis: tuple[IntVector, ...]

    def to_ambient(self, y: Sequence[Fraction]) -> Vector:
        if len(y) != len(self.basis):
            raise DimensionMismatch(
                f"chart takes {len(self.basis)} coordinates, got {len(y)}"
            )
        point = list(self.origin)
        for coord, vec in zip(y, self.basis):
            c = Fraction(coord)
            for i, v in enumerate(vec):
                point[i] += c * v
        return tuple(point)

    def from_ambient(self, x: Sequence[Fraction]) -> Vector:
        xv = tuple(Fraction(v) for v in x)
        if len(xv) != len(self.origin):
            raise DimensionMismatch(
                f"chart is for ambient dimension {len(self.origin)}, got {len(xv)}"
            )
        if dot(self.normal, xv) != self.offset:
            raise ChartMismatch("point does not lie on the facet hyperplane")
        diff = tuple(a - b for a, b in zip(xv, self.origin))
        gram = [[dot(bi, bj) for bj in self.basis] for bi in self.basis]
        rhs = [dot(bi, diff) for bi in self.basis]
        y = solve_linear(gram, rhs)
        assert y is not None, "chart basis vectors are independent"
        return y


@dataclass(frozen=True)
class DelzantReport:
    """Outcome of the vertexwise Delzant test; falsy when violated."""

    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _fourier_motzkin_feasible(
    constraints: list[tuple[tuple[Fraction, ...], Fraction]], nvars: int
) -> bool:
    # Constraints are sum(coef * x) >= rhs; eliminate the trailing
    # variable each round. Sizes here are tiny, blowup is a non-issue.
    cons = constraints
    for var in range(nvars - 1, -1, -1):
        lower, upper, rest = [], [], []
        for coef, rhs in cons:
            a = coef[var]
            if a > 0:
                lower.append((coef, rhs))
            elif a < 0:
                upper.append((coef, rhs))
            else:
                rest.append((coef[:var], rhs))
        for (cl, rl), (cu, ru) in itertools.product(lower, upper):
            al, au = cl[var], cu[var]
            coef = tuple(-au * a + al * b for a, b in zip(cl[:var], cu[:var]))
            rest.append((coef, -au * rl + al * ru))
        cons = list(dict.fromkeys(rest))
    return all(rhs <= 0 for _, rhs in cons)


def _primitive_int_vector(v: Sequence[Fraction]) -> IntVector:
    lcm = 1
    for x in v:
        fx = Fraction(x)
        lcm = lcm * fx.denominator // math.gcd(lcm, fx.denominator)
    ints = [int(Fraction(x) * lcm) for x in v]
    g = gcd_vector(ints)
    assert g > 0
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class DelzantPolytope:
    """Compact full-dimensional rational polytope in halfspace form.

    The constructor raises EmptyPolytope, UnboundedPolytope,
    DegeneratePolytope, or DegenerateFacet rather than ever producing an
    invalid instance. The checks run in that order, so an empty
    description is reported as empty even when its recession data also
    looks unbounded.
    """

    dim: int
    facets: tuple[Facet, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise DimensionMismatch(f"dimension must be a positive integer, got {self.dim!r}")
        facets = tuple(self.facets)
        object.__setattr__(self, "facets", facets)
        n = self.dim
        for i, f in enumerate(facets):
            if len(f.normal) != n:
                raise DimensionMismatch(
                    f"facet {i} has normal of length {len(f.normal)}, expected {n}"
                )
        for i, j in itertools.combinations(range(len(facets)), 2):
            if facets[i].normal == facets[j].normal:
                raise DegenerateFacet(
                    f"facets {i} and {j} share the normal {facets[i].normal}"
                )
        labels = [f.label for f in facets if f.label is not None]
        if len(labels) != len(set(labels)):
            raise ValueError("facet labels must be unique")

        normals = [f.normal for f in facets]
        offsets = [f.offset for f in facets]

        candidates = self._vertex_candidates(normals, offsets)
        if not candidates:
            constraints = [
                (tuple(Fraction(x) for x in u), c) for u, c in zip(normals, offsets)
            ]
            if not _fourier_motzkin_feasible(constraints, n):
                raise EmptyPolytope("no point satisfies all facet inequalities")

        frac_normals = [tuple(Fraction(x) for x in u) for u in normals]
        if rank(frac_normals) < n:
            raise UnboundedPolytope("facet normals do not span the ambient space")
        ray = self._recession_ray(normals)
        if ray is not None:
            raise UnboundedPolytope(f"recession direction {ray} is unbounded")

        # Bounded and feasible, hence a polytope: it must have vertices.
        assert candidates, "bounded nonempty polyhedron with no vertex candidates"
        vertices = []
        for point in sorted(candidates):
            active = tuple(
                i for i, (u, c) in enumerate(zip(normals, offsets)) if dot(u, point) == c
            )
            vertices.append(Vertex(point=point, active=active))
        object.__setattr__(self, "_vertices", tuple(vertices))

        barycenter = tuple(
            sum((v.point[i] for v in vertices), Fraction(0)) / len(vertices)
            for i in range(n)
        )
        for u, c in zip(normals, offsets):
            if dot(u, barycenter) == c:
                raise DegeneratePolytope(
                    "polytope is not full-dimensional: it lies in a facet hyperplane"
                )

        for i in range(len(facets)):
            tight = [v.point for v in vertices if i in v.active]
            if affine_rank(tight) != n - 1:
                raise DegenerateFacet(
                    f"facet {i} does not support an (n-1)-dimensional face"
                )

    def _vertex_candidates(
        self, normals: list[IntVector], offsets: list[Fraction]
    ) -> set[Vector]:
        n = self.dim
        cands: set[Vector] = set()
        for subset in itertools.combinations(range(len(normals)), n):
            mat = [normals[i] for i in subset]
            if det_int(mat) == 0:
                continue
            point = solve_linear(
                [tuple(Fraction(x) for x in row) for row in mat],
                [offsets[i] for i in subset],
            )
            assert point is not None
            if all(dot(u, point) >= c for u, c in zip(normals, offsets)):
                cands.add(point)
        return cands

    def _recession_ray(self, normals: list[IntVector]) -> IntVector | None:
        # The recession cone is pointed once the normals span R^n; a
        # nontrivial pointed cone has an extreme ray cut out by n-1
        # independent tight constraints, so scanning those suffices.
        n = self.dim
        for subset in itertools.combinations(range(len(normals)), n - 1):
            mat = [tuple(Fraction(x) for x in normals[i]) for i in subset]
            if mat and rank(mat) != n - 1:
                continue
            kernel = nullspace(mat, ncols=n)
            if len(kernel) != 1:
                continue
            z = _primitive_int_vector(kernel[0])
            for candidate in (z, tuple(-x for x in z)):
                if all(dot(u, candidate) >= 0 for u in normals):
                    return candidate
        return None

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices  # type: ignore[attr-defined]

    @property
    def normals(self) -> tuple[IntVector, ...]:
        return tuple(f.normal for f in self.facets)

    @property
    def offsets(self) -> tuple[Fraction, ...]:
        return tuple(f.offset for f in self.facets)

    def contains(self, point: Sequence[Fraction], strict: bool = False) -> bool:
        p = tuple(Fraction(x) for x in point)
        if len(p) != self.dim:
            raise DimensionMismatch(
                f"point has length {len(p)}, polytope dimension is {self.dim}"
            )
        if strict:
            return all(dot(f.normal, p) > f.offset for f in self.facets)
        return all(dot(f.normal, p) >= f.offset for f in self.facets)

    def tight_facets(self, point: Sequence[Fraction]) -> tuple[int, ...]:
        p = tuple(Fraction(x) for x in point)
        return tuple(
            i for i, f in enumerate(self.facets) if dot(f.normal, p) == f.offset
        )

    def resolve_facet(self, key: int | str) -> int:
        """Map a facet index or label to the facet's index."""
        if isinstance(key, bool):
            raise TypeError("facet key must be an index or a label")
        if isinstance(key, int):
            if not 0 <= key < len(self.facets):
                raise IndexError(f"facet index {key} out of range")
            return key
        for i, f in enumerate(self.facets):
            if f.label == key:
                return i
        raise KeyError(f"no facet labelled {key!r}")

    def to_data(self) -> dict:
        facets = []
        for f in self.facets:
            entry: dict = {"normal": list(f.normal), "offset": format_rational(f.offset)}
            if f.label is not None:
                entry["label"] = f.label
            facets.append(entry)
        return {"dim": self.dim, "facets": facets}

    @classmethod
    def from_data(cls, data: object) -> "DelzantPolytope":
        """Build from the JSON wire format, with pointer-tagged errors."""
        errors: list[tuple[str, str]] = []
        if not isinstance(data, dict):
            raise InputValidationError([("", "polytope document must be an object")])
        dim = data.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            errors.append(("/dim", "must be a positive integer"))
            dim = None
        raw_facets = data.get("facets")
        if not isinstance(raw_facets, list) or not raw_facets:
            errors.append(("/facets", "must be a non-empty array"))
            raw_facets = []
        unknown = set(data) - {"dim", "facets"}
        for key in sorted(unknown):
            errors.append((f"/{key}", "unknown field"))
        facets = []
        for i, entry in enumerate(raw_facets):
            base = f"/facets/{i}"
            if not isinstance(entry, dict):
                errors.append((base, "must be an object"))
                continue
            normal = entry.get("normal")
            if (
                not isinstance(normal, list)
                or not normal
                or any(isinstance(x, bool) or not isinstance(x, int) for x in normal)
            ):
                errors.append((f"{base}/normal", "must be an array of integers"))
                normal = None
            elif dim is not None and len(normal) != dim:
                errors.append(
                    (f"{base}/normal", f"length {len(normal)} does not match dim {dim}")
                )
                normal = None
            offset = entry.get("offset")
            try:
                offset = parse_rational(offset)
            except (TypeError, ValueError) as exc:
                errors.append((f"{base}/offset", str(exc)))
                offset = None
            label = entry.get("label")
            if label is not None and not isinstance(label, str):
                errors.append((f"{base}/label", "must be a string"))
                label = None
            for key in sorted(set(entry) - {"normal", "offset", "label"}):
                errors.append((f"{base}/{key}", "unknown field"))
            if normal is not None and offset is not None:
                try:
                    facets.append(Facet(normal=tuple(normal), offset=offset, label=label))
                except DegenerateFacet as exc:
                    errors.append((base, str(exc)))
        if errors:
            raise InputValidationError(errors)
        assert dim is not None
        return cls(dim=dim, facets=tuple(facets))


def enumerate_vertices(poly: DelzantPolytope) -> tuple[Vertex, ...]:
    """All vertices with their active facet sets, lexicographic by point."""
    return poly.vertices


def is_delzant(poly: DelzantPolytope) -> DelzantReport:
    """Vertexwise smoothness test: simple vertices with unimodular normals."""
    violations = []
    for v in poly.vertices:
        point = tuple(format_rational(x) for x in v.point)
        if len(v.active) != poly.dim:
            violations.append(
                f"vertex {point} lies on {len(v.active)} facets, expected {poly.dim}"
            )
            continue
        mat = [poly.facets[i].normal for i in v.active]
        d = det_int(mat)
        if d not in (1, -1):
            violations.append(
                f"vertex {point} has active normal determinant {d}, expected +-1"
            )
    return DelzantReport(ok=not violations, violations=tuple(violations))


def apply_unimodular(
    poly: DelzantPolytope,
    matrix: Sequence[Sequence[int]],
    translation: Sequence[Fraction] | None = None,
) -> DelzantPolytope:
    """Image of the polytope under x -> matrix @ x + translation.

    The matrix must be integer with determinant +-1, so the transformed
    normals stay primitive and the Delzant property is preserved.
    """
    n = poly.dim
    rows = [_as_int_vector(row, "transform") for row in matrix]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"transform must be a {n}x{n} integer matrix")
    inv = inverse_unimodular(rows)
    shift = (
        tuple(Fraction(0) for _ in range(n))
        if translation is None
        else tuple(parse_rational(t) for t in translation)
    )
    if len(shift) != n:
        raise DimensionMismatch("translation length does not match dimension")
    inv_t = transpose(inv)
    new_facets = []
    for f in poly.facets:
        new_normal = tuple(int(x) for x in mat_vec(inv_t, f.normal))
        new_offset = f.offset + dot(new_normal, shift)
        new_facets.append(Facet(normal=new_normal, offset=new_offset, label=f.label))
    return DelzantPolytope(dim=n, facets=tuple(new_facets))


def facet_polytope(
    poly: DelzantPolytope, facet: int | str
) -> tuple[DelzantPolytope, FacetChart]:
    """The facet as a polytope in its own lattice chart.

    The chart basis spans the facet hyperplane's lattice, so rational
    data transported through it keeps exact lattice normalisation. Only
    facets sharing a ridge with the chosen one contribute inequalities.
    """
    n = poly.dim
    if n < 2:
        raise DimensionMismatch("facet polytopes need ambient dimension >= 2")
    index = poly.resolve_facet(facet)
    chosen = poly.facets[index]
    w, basis = complete_primitive(chosen.normal)
    origin = tuple(chosen.offset * x for x in w)
    chart = FacetChart(
        facet_index=index,
        normal=chosen.normal,
        offset=chosen.offset,
        origin=origin,
        basis=basis,
    )

    on_facet = [v for v in poly.vertices if index in v.active]
    induced = []
    for j, other in enumerate(poly.facets):
        if j == index:
            continue
        shared = [v.point for v in on_facet if j in v.active]
        if affine_rank(shared) != n - 2:
            continue
        coeffs = tuple(int(dot(other.normal, b)) for b in basis)
        offset = other.offset - dot(other.normal, origin)
        g = gcd_vector(coeffs)
        assert g > 0, "ridge facet cannot be parallel to the chart"
        induced.append(
            Facet(
                normal=tuple(x // g for x in coeffs),
                offset=offset / g,
                label=other.label,
            )
        )
    return DelzantPolytope(dim=n - 1, facets=tuple(induced)), chart

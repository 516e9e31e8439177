"""Finite-dimensional Zinbiel algebras, their bimodules and morphisms.

A Zinbiel algebra (dual Leibniz algebra) is a vector space with a
bilinear product x*y obeying

    (x*y)*z = x*(y*z) + x*(z*y).

A bimodule over such an algebra carries left and right actions for which
the same identity holds whenever exactly one of the three arguments comes
from the module.  Everything is basis-presented through structure
constants, and every constructor verifies its defining identities
exhaustively on basis tuples; `IdentityError` carries the full list of
violations with exact residual vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field, FieldError
from .linalg import (Matrix, unit_vector, vec_add, vec_is_zero, vec_sub,
                     zero_vector)


@dataclass
class Violation:
    """One failed identity instance: where it failed and by how much."""
    label: str
    where: tuple
    residual: list


class IdentityError(ValueError):
    """A defining identity failed; .violations lists every failure."""

    def __init__(self, message: str, violations: list):
        super().__init__(message)
        self.violations = violations


def _check_cube_shape(dim: int, gamma) -> None:
    if len(gamma) != dim or any(
            len(plane) != dim or any(len(row) != dim for row in plane)
            for plane in gamma):
        raise ValueError(f"structure tensor must be {dim}x{dim}x{dim}")


class ZinbielAlgebra:
    """Basis-presented algebra: gamma[i][j][k] is the e_k coefficient of e_i*e_j."""

    __slots__ = ("field", "dim", "gamma", "_regular")

    def __init__(self, field: Field, dim: int, gamma):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        _check_cube_shape(dim, gamma)
        self.field = field
        self.dim = dim
        self.gamma = [[[field.coerce(x) for x in row] for row in plane]
                      for plane in gamma]
        self._regular = None
        bad = zinbiel_violations(field, dim, self.gamma)
        if bad:
            raise IdentityError(
                f"Zinbiel identity fails on {len(bad)} basis triple(s)", bad)

    def product_basis(self, i: int, j: int) -> list:
        """The vector e_i * e_j (a row of the structure tensor; treat as read-only)."""
        return self.gamma[i][j]

    def product(self, u: list, v: list) -> list:
        out = zero_vector(self.field, self.dim)
        for i, a in enumerate(u):
            if not a:
                continue
            plane = self.gamma[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                c = a * b
                for k, g in enumerate(plane[j]):
                    if g:
                        out[k] = out[k] + c * g
        return out

    def regular_bimodule(self) -> "Bimodule":
        """The algebra acting on itself by its own product (cached)."""
        if self._regular is None:
            g = self.gamma
            self._regular = Bimodule(self, self.dim, g, g)
        return self._regular

    def __eq__(self, other):
        if not isinstance(other, ZinbielAlgebra):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and self.gamma == other.gamma)

    def __repr__(self):
        return f"ZinbielAlgebra(dim={self.dim}, field={self.field})"


def zinbiel_violations(field: Field, dim: int, gamma) -> list[Violation]:
    """Residuals of (x*y)*z - x*(y*z) - x*(z*y) on all basis triples."""
    _check_cube_shape(dim, gamma)
    out = []
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                res = _zinbiel_residual(field, dim, gamma, i, j, k)
                if not vec_is_zero(res):
                    out.append(Violation("zinbiel", (i, j, k), res))
    return out


def _zinbiel_residual(field, dim, gamma, i, j, k):
    res = zero_vector(field, dim)
    for p, c in enumerate(gamma[i][j]):      # (e_i e_j) e_k
        if c:
            for b, g in enumerate(gamma[p][k]):
                if g:
                    res[b] = res[b] + c * g
    for q, c in enumerate(gamma[j][k]):      # e_i (e_j e_k)
        if c:
            for b, g in enumerate(gamma[i][q]):
                if g:
                    res[b] = res[b] - c * g
    for q, c in enumerate(gamma[k][j]):      # e_i (e_k e_j)
        if c:
            for b, g in enumerate(gamma[i][q]):
                if g:
                    res[b] = res[b] - c * g
    return res


class Bimodule:
    """Left and right actions of an algebra on a coefficient space.

    left[i][a] is the vector e_i * a_a, right[a][i] is a_a * e_i, both of
    length dim.  The mixed Zinbiel identities (one module slot among the
    three arguments) are verified on construction.
    """

    __slots__ = ("algebra", "dim", "left", "right")

    def __init__(self, algebra: ZinbielAlgebra, dim: int, left, right):
        if dim < 0:
            raise ValueError("module dimension must be nonnegative")
        field = algebra.field
        d = algebra.dim
        if len(left) != d or any(len(col) != dim for col in left) or any(
                len(v) != dim for col in left for v in col):
            raise ValueError(f"left action must be {d}x{dim}x{dim}")
        if len(right) != dim or any(len(col) != d for col in right) or any(
                len(v) != dim for col in right for v in col):
            raise ValueError(f"right action must be {dim}x{d}x{dim}")
        self.algebra = algebra
        self.dim = dim
        self.left = [[[field.coerce(x) for x in v] for v in col]
                     for col in left]
        self.right = [[[field.coerce(x) for x in v] for v in col]
                      for col in right]
        bad = bimodule_violations(algebra, dim, self.left, self.right)
        if bad:
            raise IdentityError(
                f"bimodule identities fail on {len(bad)} basis triple(s)", bad)

    @property
    def field(self):
        return self.algebra.field

    def left_act(self, i: int, avec: list) -> list:
        """e_i acting on a module vector."""
        out = zero_vector(self.field, self.dim)
        col = self.left[i]
        for a, c in enumerate(avec):
            if c:
                for b, v in enumerate(col[a]):
                    if v:
                        out[b] = out[b] + c * v
        return out

    def right_act(self, avec: list, i: int) -> list:
        """A module vector acted on by e_i from the right."""
        out = zero_vector(self.field, self.dim)
        for a, c in enumerate(avec):
            if c:
                for b, v in enumerate(self.right[a][i]):
                    if v:
                        out[b] = out[b] + c * v
        return out

    def __eq__(self, other):
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (self.algebra == other.algebra and self.dim == other.dim
                and self.left == other.left and self.right == other.right)

    def __repr__(self):
        return f"Bimodule(dim={self.dim} over {self.algebra!r})"


def bimodule_violations(algebra: ZinbielAlgebra, dim: int, left,
                        right) -> list[Violation]:
    """Mixed-identity residuals, one family per placement of the module slot."""
    field = algebra.field
    d = algebra.dim
    gamma = algebra.gamma

    def lact(i, avec):
        out = zero_vector(field, dim)
        for a, c in enumerate(avec):
            if c:
                for b, v in enumerate(left[i][a]):
                    if v:
                        out[b] = out[b] + c * v
        return out

    def ract(avec, i):
        out = zero_vector(field, dim)
        for a, c in enumerate(avec):
            if c:
                for b, v in enumerate(right[a][i]):
                    if v:
                        out[b] = out[b] + c * v
        return out

    def by_gamma(i, j, table):
        # table[k] for e_k, combined along the product e_i e_j
        out = zero_vector(field, dim)
        for k, g in enumerate(gamma[i][j]):
            if g:
                for b, v in enumerate(table[k]):
                    if v:
                        out[b] = out[b] + g * v
        return out

    out = []
    for a in range(dim):
        for j in range(d):
            for k in range(d):
                # (a*y)*z = a*(y z) + a*(z y)
                lhs = ract(right[a][j], k)
                rhs = vec_add(by_gamma(j, k, right[a]),
                              by_gamma(k, j, right[a]))
                res = vec_sub(lhs, rhs)
                if not vec_is_zero(res):
                    out.append(Violation("module-first", (a, j, k), res))
    for i in range(d):
        for a in range(dim):
            for k in range(d):
                # (x*a)*z = x*(a*z) + x*(z*a)
                lhs = ract(left[i][a], k)
                rhs = vec_add(lact(i, right[a][k]), lact(i, left[k][a]))
                res = vec_sub(lhs, rhs)
                if not vec_is_zero(res):
                    out.append(Violation("module-middle", (i, a, k), res))
    for i in range(d):
        for j in range(d):
            for a in range(dim):
                # (x y)*a = x*(y*a) + x*(a*y)
                lhs = zero_vector(field, dim)
                for k, g in enumerate(gamma[i][j]):
                    if g:
                        for b, v in enumerate(left[k][a]):
                            if v:
                                lhs[b] = lhs[b] + g * v
                rhs = vec_add(lact(i, left[j][a]), lact(i, right[a][j]))
                res = vec_sub(lhs, rhs)
                if not vec_is_zero(res):
                    out.append(Violation("module-last", (i, j, a), res))
    return out


class AlgebraMorphism:
    """Linear map between Zinbiel algebras that respects products.

    The matrix has one column per source basis vector, holding the target
    coordinates of its image.
    """

    __slots__ = ("source", "target", "matrix", "_bimodule")

    def __init__(self, source: ZinbielAlgebra, target: ZinbielAlgebra,
                 matrix: Matrix | list):
        if source.field != target.field:
            raise FieldError("morphism between algebras over different fields")
        if not isinstance(matrix, Matrix):
            matrix = Matrix(source.field, matrix, source.dim)
        if matrix.nrows != target.dim or matrix.ncols != source.dim:
            raise ValueError(
                f"matrix must be {target.dim}x{source.dim}, "
                f"got {matrix.nrows}x{matrix.ncols}")
        self.source = source
        self.target = target
        self.matrix = matrix
        self._bimodule = None
        bad = morphism_violations(source, target, matrix)
        if bad:
            raise IdentityError(
                f"map fails to respect products on {len(bad)} basis pair(s)",
                bad)

    def apply_basis(self, i: int) -> list:
        return self.matrix.column(i)

    def apply(self, vec: list) -> list:
        return self.matrix.matvec(vec)

    def as_bimodule(self) -> Bimodule:
        """The target as a source-bimodule through this morphism (cached)."""
        if self._bimodule is None:
            self._bimodule = bimodule_via_morphism(self)
        return self._bimodule

    def __eq__(self, other):
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.matrix == other.matrix)

    def __repr__(self):
        return (f"AlgebraMorphism({self.source.dim} -> {self.target.dim}, "
                f"field={self.source.field})")


def morphism_violations(source: ZinbielAlgebra, target: ZinbielAlgebra,
                        matrix: Matrix) -> list[Violation]:
    """Residuals of f(e_i e_j) - f(e_i) f(e_j) on all basis pairs."""
    out = []
    cols = [matrix.column(i) for i in range(source.dim)]
    for i in range(source.dim):
        for j in range(source.dim):
            lhs = matrix.matvec(source.product_basis(i, j))
            rhs = target.product(cols[i], cols[j])
            res = vec_sub(lhs, rhs)
            if not vec_is_zero(res):
                out.append(Violation("morphism", (i, j), res))
    return out


def identity_morphism(algebra: ZinbielAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(algebra, algebra,
                           Matrix.identity(algebra.field, algebra.dim))


def zero_morphism(source: ZinbielAlgebra,
                  target: ZinbielAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(source, target,
                           Matrix.zeros(source.field, target.dim, source.dim))


def bimodule_via_morphism(g: AlgebraMorphism) -> Bimodule:
    """The target of g as a bimodule over its source: r.s = g(r)s, s.r = s g(r)."""
    source, target = g.source, g.target
    field = source.field
    m = target.dim
    cols = [g.apply_basis(i) for i in range(source.dim)]
    left = [[target.product(cols[i], unit_vector(field, m, a))
             for a in range(m)] for i in range(source.dim)]
    right = [[target.product(unit_vector(field, m, a), cols[i])
              for i in range(source.dim)] for a in range(m)]
    return Bimodule(source, m, left, right)

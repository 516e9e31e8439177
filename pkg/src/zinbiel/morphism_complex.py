"""The deformation complex of a fixed morphism f: R -> S.

Degree-n elements are triples (xi; pi; phi) with xi an n-cochain on R,
pi an n-cochain on S (both with regular coefficients) and phi an
(n-1)-cochain R -> S with coefficients in S viewed as an R-bimodule
through f.  The degree-0 corner of the phi column is the zero space, so
degree-1 triples are just pairs (xi; pi).  The differential is

    d(xi; pi; phi) = (d xi; d pi; f.xi - pi.f - d phi)

with f.xi and pi.f the push-forwards along f.  The complex runs in
degrees 1..4; degree-4 triples exist as targets of the last differential.
"""

from __future__ import annotations

import itertools

from .algebra import AlgebraMorphism
from .cochains import (Cochain, all_tuples, differential,
                       differential_matrix, tuple_index)
from .linalg import Matrix, rank_nullspace, solve, zero_vector

MAX_DEGREE = 4


def morphism_cochain(f: AlgebraMorphism) -> Cochain:
    """The morphism itself as a 1-cochain R -> S (coefficients via f)."""
    rows = [f.apply_basis(i) for i in range(f.source.dim)]
    return Cochain(f.source, f.as_bimodule(), 1, rows)


def push_forward_left(f: AlgebraMorphism, xi: Cochain) -> Cochain:
    """Compose with f on the output: (f.xi)(x1..xn) = f(xi(x1..xn))."""
    if xi.source != f.source or xi.module.dim != f.source.dim:
        raise ValueError("cochain must map the source of f into itself")
    rows = [f.apply(row) for row in xi.coeffs]
    return Cochain(f.source, f.as_bimodule(), xi.arity, rows)


def push_forward_right(f: AlgebraMorphism, pi: Cochain) -> Cochain:
    """Precompose with f in every slot: (pi.f)(x1..xn) = pi(f x1, .., f xn)."""
    if pi.source != f.target or pi.module.dim != f.target.dim:
        raise ValueError("cochain must map the target of f into itself")
    n = pi.arity
    src = f.source
    cols = [[(j, v) for j, v in enumerate(f.apply_basis(i)) if v]
            for i in range(src.dim)]
    rows = []
    for tup in all_tuples(src.dim, n):
        out = zero_vector(src.field, f.target.dim)
        for combo in itertools.product(*(cols[i] for i in tup)):
            coef = None
            jt = 0
            for j, v in combo:
                jt = jt * f.target.dim + j
                coef = v if coef is None else coef * v
            row = pi.coeffs[jt]
            if coef is None:
                for b, x in enumerate(row):
                    if x:
                        out[b] = out[b] + x
            else:
                for b, x in enumerate(row):
                    if x:
                        out[b] = out[b] + coef * x
        rows.append(out)
    return Cochain(src, f.as_bimodule(), n, rows)


class TripleCochain:
    """Degree-n element (xi; pi; phi) of the deformation complex of f.

    For degree 1 the phi slot is structurally zero and stored as None.
    """

    __slots__ = ("morphism", "degree", "xi", "pi", "phi")

    def __init__(self, morphism: AlgebraMorphism, degree: int, xi: Cochain,
                 pi: Cochain, phi: Cochain | None):
        if not 1 <= degree <= MAX_DEGREE:
            raise ValueError(f"degree {degree} outside 1..{MAX_DEGREE}")
        if xi.source != morphism.source or \
                xi.module != morphism.source.regular_bimodule():
            raise ValueError(
                "first component must have regular coefficients on the source")
        if pi.source != morphism.target or \
                pi.module != morphism.target.regular_bimodule():
            raise ValueError(
                "second component must have regular coefficients on the target")
        if xi.arity != degree or pi.arity != degree:
            raise ValueError(f"component arities must equal the degree {degree}")
        if degree == 1:
            if phi is not None and not phi.is_zero():
                raise ValueError("degree-1 triples have a zero third component")
            phi = None
        else:
            if phi is None:
                raise ValueError(f"degree-{degree} triple needs a third component")
            if phi.arity != degree - 1 or phi.source != morphism.source:
                raise ValueError("third component has the wrong shape")
            if phi.module.dim != morphism.target.dim:
                raise ValueError("third component must take values in the target")
        self.morphism = morphism
        self.degree = degree
        self.xi = xi
        self.pi = pi
        self.phi = phi

    @property
    def field(self):
        return self.morphism.source.field

    @classmethod
    def zero(cls, morphism: AlgebraMorphism, degree: int) -> "TripleCochain":
        r, s = morphism.source, morphism.target
        xi = Cochain.zero(r, r.regular_bimodule(), degree)
        pi = Cochain.zero(s, s.regular_bimodule(), degree)
        phi = None
        if degree > 1:
            phi = Cochain.zero(r, morphism.as_bimodule(), degree - 1)
        return cls(morphism, degree, xi, pi, phi)

    def _compatible(self, other: "TripleCochain") -> None:
        if self.morphism != other.morphism or self.degree != other.degree:
            raise ValueError("triples live in different spaces")

    def __add__(self, other):
        self._compatible(other)
        phi = None if self.phi is None else self.phi + other.phi
        return TripleCochain(self.morphism, self.degree, self.xi + other.xi,
                             self.pi + other.pi, phi)

    def __sub__(self, other):
        self._compatible(other)
        phi = None if self.phi is None else self.phi - other.phi
        return TripleCochain(self.morphism, self.degree, self.xi - other.xi,
                             self.pi - other.pi, phi)

    def __neg__(self):
        phi = None if self.phi is None else -self.phi
        return TripleCochain(self.morphism, self.degree, -self.xi, -self.pi,
                             phi)

    def scale(self, c):
        phi = None if self.phi is None else self.phi.scale(c)
        return TripleCochain(self.morphism, self.degree, self.xi.scale(c),
                             self.pi.scale(c), phi)

    def is_zero(self) -> bool:
        return (self.xi.is_zero() and self.pi.is_zero()
                and (self.phi is None or self.phi.is_zero()))

    def flatten(self) -> list:
        flat = self.xi.flatten() + self.pi.flatten()
        if self.phi is not None:
            flat += self.phi.flatten()
        return flat

    @classmethod
    def from_flat(cls, morphism: AlgebraMorphism, degree: int,
                  flat: list) -> "TripleCochain":
        r, s = morphism.source, morphism.target
        na = r.dim ** degree * r.dim
        nb = s.dim ** degree * s.dim
        if len(flat) != triple_dim(morphism, degree):
            raise ValueError("flat vector has the wrong length")
        xi = Cochain.from_flat(r, r.regular_bimodule(), degree, flat[:na])
        pi = Cochain.from_flat(s, s.regular_bimodule(), degree,
                               flat[na:na + nb])
        phi = None
        if degree > 1:
            phi = Cochain.from_flat(r, morphism.as_bimodule(), degree - 1,
                                    flat[na + nb:])
        return cls(morphism, degree, xi, pi, phi)

    def __eq__(self, other):
        if not isinstance(other, TripleCochain):
            return NotImplemented
        return (self.morphism == other.morphism
                and self.degree == other.degree and self.xi == other.xi
                and self.pi == other.pi and self.phi == other.phi)

    def __repr__(self):
        return f"TripleCochain(degree={self.degree})"


def triple_dim(f: AlgebraMorphism, n: int) -> int:
    """Dimension of the degree-n piece of the deformation complex of f."""
    r, s = f.source, f.target
    base = r.dim ** n * r.dim + s.dim ** n * s.dim
    if n > 1:
        base += r.dim ** (n - 1) * s.dim
    return base


def morphism_differential(theta: TripleCochain) -> TripleCochain:
    """d(xi; pi; phi) = (d xi; d pi; f.xi - pi.f - d phi); degrees 1..3."""
    if theta.degree >= MAX_DEGREE:
        raise ValueError(f"no differential out of degree {theta.degree}")
    f = theta.morphism
    third = push_forward_left(f, theta.xi) - push_forward_right(f, theta.pi)
    if theta.phi is not None:
        third = third - differential(theta.phi)
    return TripleCochain(f, theta.degree + 1, differential(theta.xi),
                         differential(theta.pi), third)


def _push_left_matrix(f: AlgebraMorphism, n: int) -> Matrix:
    r, s = f.source, f.target
    field = r.field
    ntup = r.dim ** n
    grid = [[field.zero()] * (ntup * r.dim) for _ in range(ntup * s.dim)]
    for b in range(s.dim):
        for a in range(r.dim):
            v = f.matrix.rows[b][a]
            if v:
                for t in range(ntup):
                    grid[t * s.dim + b][t * r.dim + a] = v
    return Matrix(field, grid, ntup * r.dim)


def _push_right_matrix(f: AlgebraMorphism, n: int) -> Matrix:
    r, s = f.source, f.target
    field = r.field
    nrows = r.dim ** n * s.dim
    ncols = s.dim ** n * s.dim
    grid = [[field.zero()] * ncols for _ in range(nrows)]
    cols = [[(j, v) for j, v in enumerate(f.apply_basis(i)) if v]
            for i in range(r.dim)]
    for tup in all_tuples(r.dim, n):
        t = tuple_index(r.dim, tup)
        for combo in itertools.product(*(cols[i] for i in tup)):
            coef = field.one()
            jt = 0
            for j, v in combo:
                jt = jt * s.dim + j
                coef = coef * v
            for b in range(s.dim):
                row = t * s.dim + b
                col = jt * s.dim + b
                grid[row][col] = grid[row][col] + coef
    return Matrix(field, grid, ncols)


def morphism_differential_matrix(f: AlgebraMorphism, n: int) -> Matrix:
    """Matrix of the degree-n differential of the deformation complex,
    under the flattening xi-block, pi-block, phi-block."""
    if n not in (1, 2, 3):
        raise ValueError(f"no differential out of degree {n}")
    r, s = f.source, f.target
    field = r.field
    d_r = differential_matrix(r, r.regular_bimodule(), n)
    d_s = differential_matrix(s, s.regular_bimodule(), n)
    push_l = _push_left_matrix(f, n)
    push_r = _push_right_matrix(f, n)
    d_rs = None
    if n > 1:
        d_rs = differential_matrix(r, f.as_bimodule(), n - 1)

    nrows = triple_dim(f, n + 1)
    ncols = triple_dim(f, n)
    z = field.zero()
    grid = [[z] * ncols for _ in range(nrows)]

    col_xi = r.dim ** n * r.dim
    col_pi = s.dim ** n * s.dim
    row_xi = r.dim ** (n + 1) * r.dim
    row_pi = s.dim ** (n + 1) * s.dim

    def paste(block: Matrix, row0: int, col0: int, sign: int) -> None:
        # blocks occupy disjoint regions of the grid
        for i, brow in enumerate(block.rows):
            grow = grid[row0 + i]
            for j, v in enumerate(brow):
                if v:
                    grow[col0 + j] = v if sign > 0 else -v
    paste(d_r, 0, 0, +1)
    paste(d_s, row_xi, col_xi, +1)
    paste(push_l, row_xi + row_pi, 0, +1)
    paste(push_r, row_xi + row_pi, col_xi, -1)
    if d_rs is not None:
        paste(d_rs, row_xi + row_pi, col_xi + col_pi, -1)
    return Matrix(field, grid, ncols)


def morphism_cohomology_dim(f: AlgebraMorphism, n: int) -> int:
    """dim ker(d^n) - rank(d^{n-1}) in the deformation complex, n = 2 or 3."""
    if n not in (2, 3):
        raise ValueError(f"cohomology defined in degrees 2 and 3, not {n}")
    rank_out, _ = rank_nullspace(morphism_differential_matrix(f, n))
    kernel = triple_dim(f, n) - rank_out
    rank_in, _ = rank_nullspace(morphism_differential_matrix(f, n - 1))
    return kernel - rank_in


def is_cocycle(x) -> tuple[bool, "Cochain | TripleCochain"]:
    """Whether d(x) vanishes, together with the exact residual d(x).

    Accepts a Cochain (bimodule complex) or TripleCochain (morphism
    complex) of degree 2 or 3.
    """
    if isinstance(x, TripleCochain):
        if x.degree not in (2, 3):
            raise ValueError(f"cocycle test at degree {x.degree} undefined")
        res = morphism_differential(x)
    elif isinstance(x, Cochain):
        if x.arity not in (2, 3):
            raise ValueError(f"cocycle test at arity {x.arity} undefined")
        res = differential(x)
    else:
        raise TypeError(f"not a cochain: {x!r}")
    return res.is_zero(), res


def coboundary_preimage(x):
    """Some y with d(y) = x, or None; the representative is deterministic
    (free coefficients set to zero under the fixed flattening)."""
    if isinstance(x, TripleCochain):
        if x.degree not in (2, 3):
            raise ValueError(f"preimage at degree {x.degree} undefined")
        mat = morphism_differential_matrix(x.morphism, x.degree - 1)
        sol = solve(mat, x.flatten())
        if sol is None:
            return None
        return TripleCochain.from_flat(x.morphism, x.degree - 1, sol)
    if isinstance(x, Cochain):
        if x.arity not in (2, 3):
            raise ValueError(f"preimage at arity {x.arity} undefined")
        mat = differential_matrix(x.source, x.module, x.arity - 1)
        sol = solve(mat, x.flatten())
        if sol is None:
            return None
        return Cochain.from_flat(x.source, x.module, x.arity - 1, sol)
    raise TypeError(f"not a cochain: {x!r}")

"""First-order vector fields on Minkowski spacetime and their algebra.

The admissible symmetry fields (translations, Lorentz boosts, spatial
rotations) plus the deliberately excluded scaling field all have affine
coefficients, so their commutators are computed exactly from a small
coefficient matrix.  The frame fields adapted to hyperboloids, light cones
and foliation leaves carry hand-coded exact first derivatives instead.

Points are pairs ``(t, x)`` with ``x`` a length-3 array; scalar fields are
callables ``u(t, x) -> float``.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .foliation import TimeFunctionTable, drT_closed_form, drT_dr_closed_form

__all__ = ["VectorField", "make_field", "commutator", "apply_field",
           "apply_multiindex", "commute_with_operator_residual",
           "box_operator", "admissible_fields"]

_SINGULAR_TOL = 1e-8


class VectorField:
    """First-order operator sum_alpha c^alpha(t,x) d_alpha.

    ``affine`` is a (4, 5) matrix encoding c^alpha = A[alpha, 0]
    + A[alpha, 1] t + sum_a A[alpha, 1+a] x_a when the coefficients are
    degree <= 1 polynomials; commutators of affine fields stay affine and
    exact.  Otherwise ``coeff_fn(t, x) -> (4,)`` and, when available,
    ``deriv_fn(t, x) -> (4, 4)`` with entry [beta, alpha] = d_beta c^alpha.
    """

    def __init__(self, label: str, affine: np.ndarray | None = None,
                 coeff_fn=None, deriv_fn=None):
        self.label = label
        self.affine = None if affine is None else np.asarray(affine, float)
        self._coeff_fn = coeff_fn
        self._deriv_fn = deriv_fn

    def coefficients(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.affine is not None:
            p = np.concatenate(([1.0, t], x))
            return self.affine @ p
        return np.asarray(self._coeff_fn(t, x), dtype=float)

    def coefficient_derivatives(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.affine is not None:
            return self.affine[:, 1:].T.copy()
        if self._deriv_fn is None:
            raise ValueError(
                f"field {self.label!r} carries no coefficient derivatives")
        return np.asarray(self._deriv_fn(t, x), dtype=float)

    @property
    def has_derivatives(self) -> bool:
        return self.affine is not None or self._deriv_fn is not None

    def __repr__(self):
        return f"VectorField({self.label})"


def _affine(label: str, entries) -> VectorField:
    A = np.zeros((4, 5))
    for alpha, col, val in entries:
        A[alpha, col] = val
    return VectorField(label, affine=A)


def make_field(kind: str, *indices: int,
               table: TimeFunctionTable | None = None) -> VectorField:
    """Construct a built-in field.

    kinds: 'translation' (alpha in 0..3), 'boost' (a in 1..3),
    'rotation' (a, b distinct in 1..3), 'scaling',
    'semi_hyperboloidal' (a), 'null' (a),
    'slice_tangent' (a; requires a TimeFunctionTable).
    """
    if kind == "translation":
        (alpha,) = indices
        if alpha not in (0, 1, 2, 3):
            raise ValueError(f"translation index must be 0..3, got {alpha}")
        return _affine(f"d_{alpha}", [(alpha, 0, 1.0)])

    if kind == "boost":
        (a,) = indices
        _check_spatial(a)
        return _affine(f"L_{a}", [(0, 1 + a, 1.0), (a, 1, 1.0)])

    if kind == "rotation":
        a, b = indices
        _check_spatial(a)
        _check_spatial(b)
        if a == b:
            raise ValueError("rotation needs two distinct spatial indices")
        return _affine(f"Omega_{a}{b}", [(b, 1 + a, 1.0), (a, 1 + b, -1.0)])

    if kind == "scaling":
        return _affine("S", [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0),
                             (3, 4, 1.0)])

    if kind == "semi_hyperboloidal":
        (a,) = indices
        _check_spatial(a)
        return _semi_hyperboloidal(a)

    if kind == "null":
        (a,) = indices
        _check_spatial(a)
        return _null_frame(a)

    if kind == "slice_tangent":
        (a,) = indices
        _check_spatial(a)
        if table is None:
            raise ValueError("slice_tangent requires a TimeFunctionTable")
        return _slice_tangent(a, table)

    raise ValueError(f"unknown field kind {kind!r}")


def _check_spatial(a: int):
    if a not in (1, 2, 3):
        raise ValueError(f"spatial index must be 1..3, got {a}")


def _semi_hyperboloidal(a: int) -> VectorField:
    # (x_a / t) d_t + d_a ; undefined on {t = 0}
    def coeff(t, x):
        if abs(t) < _SINGULAR_TOL:
            raise ValueError("semi-hyperboloidal field undefined near t=0")
        c = np.zeros(4)
        c[0] = x[a - 1] / t
        c[a] = 1.0
        return c

    def deriv(t, x):
        if abs(t) < _SINGULAR_TOL:
            raise ValueError("semi-hyperboloidal field undefined near t=0")
        d = np.zeros((4, 4))
        d[0, 0] = -x[a - 1] / (t * t)
        d[a, 0] = 1.0 / t
        return d

    return VectorField(f"uh_{a}", coeff_fn=coeff, deriv_fn=deriv)


def _null_frame(a: int) -> VectorField:
    # (x^a / r) d_t + d_a ; undefined on {r = 0}
    def coeff(t, x):
        r = float(np.linalg.norm(x))
        if r < _SINGULAR_TOL:
            raise ValueError("null-frame field undefined near r=0")
        c = np.zeros(4)
        c[0] = x[a - 1] / r
        c[a] = 1.0
        return c

    def deriv(t, x):
        r = float(np.linalg.norm(x))
        if r < _SINGULAR_TOL:
            raise ValueError("null-frame field undefined near r=0")
        d = np.zeros((4, 4))
        for b in range(1, 4):
            d[b, 0] = (1.0 if b == a else 0.0) / r \
                - x[a - 1] * x[b - 1] / r ** 3
        return d

    return VectorField(f"null_{a}", coeff_fn=coeff, deriv_fn=deriv)


def _slice_tangent(a: int, table: TimeFunctionTable) -> VectorField:
    # d_a T d_t + d_a with d_a T = (x^a / r) dT/dr on the leaf of the table
    s = table.s

    def coeff(t, x):
        r = float(np.linalg.norm(x))
        if r < _SINGULAR_TOL:
            raise ValueError("slice-tangent field undefined near r=0")
        if r > table.r_max:
            raise ValueError(f"radius {r} outside slice domain")
        c = np.zeros(4)
        c[0] = x[a - 1] / r * float(drT_closed_form(s, r))
        c[a] = 1.0
        return c

    def deriv(t, x):
        r = float(np.linalg.norm(x))
        if r < _SINGULAR_TOL:
            raise ValueError("slice-tangent field undefined near r=0")
        if r > table.r_max:
            raise ValueError(f"radius {r} outside slice domain")
        dT = float(drT_closed_form(s, r))
        dT2 = float(drT_dr_closed_form(s, r))
        d = np.zeros((4, 4))
        for b in range(1, 4):
            delta = 1.0 if b == a else 0.0
            xa, xb = x[a - 1], x[b - 1]
            d[b, 0] = (delta / r - xa * xb / r ** 3) * dT \
                + xa * xb / r ** 2 * dT2
        return d

    return VectorField(f"tan_{a}", coeff_fn=coeff, deriv_fn=deriv)


def admissible_fields() -> list[VectorField]:
    """Translations, boosts and rotations (the scaling field excluded)."""
    fields = [make_field("translation", alpha) for alpha in range(4)]
    fields += [make_field("boost", a) for a in (1, 2, 3)]
    fields += [make_field("rotation", a, b) for a, b in ((1, 2), (1, 3),
                                                         (2, 3))]
    return fields


def commutator(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y], with coefficients X(Y^alpha) - Y(X^alpha).

    Exact (affine result) when both operands are affine; otherwise the
    result's coefficients are evaluated from the operands' supplied
    derivatives and the result itself carries no derivative data.
    """
    label = f"[{X.label},{Y.label}]"
    if X.affine is not None and Y.affine is not None:
        A, B = X.affine, Y.affine
        C = np.zeros((4, 5))
        for alpha in range(4):
            for beta in range(4):
                # d_beta Y^alpha and d_beta X^alpha are the constant matrix
                # entries in column 1+beta
                C[alpha] += A[beta] * B[alpha, 1 + beta] \
                    - B[beta] * A[alpha, 1 + beta]
        return VectorField(label, affine=C)

    if not (X.has_derivatives and Y.has_derivatives):
        raise ValueError("commutator needs coefficient derivatives on both "
                         "fields")

    def coeff(t, x):
        cX = X.coefficients(t, x)
        cY = Y.coefficients(t, x)
        dX = X.coefficient_derivatives(t, x)
        dY = Y.coefficient_derivatives(t, x)
        # [X,Y]^alpha = X^beta d_beta Y^alpha - Y^beta d_beta X^alpha
        return cX @ dY - cY @ dX

    return VectorField(label, coeff_fn=coeff)


def _default_step(t: float, x) -> float:
    return 1e-4 * (1.0 + float(np.hypot(t, np.linalg.norm(x))))


def apply_field(X: VectorField, u: Callable, p, h: float | None = None,
                richardson: bool = False) -> float:
    """X u at p by centered differences of step h (second order)."""
    t, x = p
    x = np.asarray(x, dtype=float)
    if h is None:
        h = _default_step(t, x)

    def approx(step):
        c = X.coefficients(t, x)
        val = c[0] * (u(t + step, x) - u(t - step, x)) / (2.0 * step)
        for a in range(3):
            if c[a + 1] == 0.0:
                continue
            e = np.zeros(3)
            e[a] = step
            val += c[a + 1] * (u(t, x + e) - u(t, x - e)) / (2.0 * step)
        return val

    if richardson:
        return (4.0 * approx(h / 2.0) - approx(h)) / 3.0
    return approx(h)


def apply_multiindex(ops: Sequence[VectorField], u: Callable, p,
                     h: float | None = None) -> float:
    """Nested application ops[0](ops[1](... u)); level k uses step h 2^k.

    The growing inner steps keep the nested differences from cancelling;
    beyond three levels double precision runs out, hence the length cap.
    """
    if len(ops) > 3:
        raise ValueError("apply_multiindex supports at most 3 fields")
    if len(ops) == 0:
        t, x = p
        return u(t, np.asarray(x, dtype=float))
    if h is None:
        t, x = p
        h = _default_step(t, np.asarray(x, dtype=float))
    if len(ops) == 1:
        return apply_field(ops[0], u, p, h)

    def inner(t, x):
        return apply_multiindex(ops[1:], u, (t, x), 2.0 * h)

    return apply_field(ops[0], inner, p, h)


def box_operator(u: Callable, p, h: float = 1e-3, c: float = 0.0) -> float:
    """(box - c^2) u at p: -d_t^2 + Laplacian, 3-point second differences."""
    t, x = p
    x = np.asarray(x, dtype=float)
    val = -(u(t + h, x) - 2.0 * u(t, x) + u(t - h, x)) / (h * h)
    for a in range(3):
        e = np.zeros(3)
        e[a] = h
        val += (u(t, x + e) - 2.0 * u(t, x) + u(t, x - e)) / (h * h)
    return val - c * c * u(t, x)


def commute_with_operator_residual(X: VectorField, c: float, u: Callable,
                                   p, h: float | None = None) -> float:
    """[X, box - c^2] u at p by finite differences.

    Vanishes at second order in h for the admissible fields; for the
    scaling field with c > 0 it tends to -2 box u instead, which is why
    that field is excluded from the admissible family.
    """
    t, x = p
    x = np.asarray(x, dtype=float)
    if h is None:
        h = 0.02 * (1.0 + float(np.hypot(t, np.linalg.norm(x))))

    def boxed(tq, xq):
        return box_operator(u, (tq, xq), h=2.0 * h, c=c)

    def Xu(tq, xq):
        return apply_field(X, u, (tq, xq), h=h)

    term1 = apply_field(X, boxed, p, h=h)
    term2 = box_operator(Xu, p, h=2.0 * h, c=c)
    return term1 - term2

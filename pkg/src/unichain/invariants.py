"""Rephasing-invariant phase algebra of unitary matrices.

The smallest quantities of a unitary V that survive multiplication by
diagonal phase matrices on either side are the fourth-order products

    V_aj V_bk conj(V_ak) conj(V_bj)

over a row pair (a, b) and a column pair (j, k); their imaginary parts
(a b; j k) detect non-removable phases and their real parts <a b; j k>
are invariant companions.  This module computes them, reduces sixth-order
invariants to them, organises the nearest-neighbour ones into a panel
lattice with its six unitarity relations (n = 4), evaluates the closed
forms available from the factor-chain parameterisation for n = 3 and
n = 4, analyses two-zero textures, and measures unitarity-triangle areas.

All row/column indices in this module are 1-based, matching the standard
notation for mixing matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .matrix_core import (
    DEFAULT_UNITARITY_TOL,
    DomainError,
    PreconditionError,
    is_unitary,
    require_square,
    wrap_angle,
)
from .recursive_param import (
    Decomposition,
    decompose,
    gauge_fix,
    reorder_chain,
)


def count_independent_phases(n: int) -> int:
    """Number of independent invariant phases of an n-by-n unitary."""
    if n < 1:
        raise DomainError(f"matrix order must be >= 1, got {n}")
    return (n - 1) * (n - 2) // 2


def _check_pair(pair, n: int, what: str) -> tuple:
    a, b = int(pair[0]), int(pair[1])
    if not (1 <= a <= n and 1 <= b <= n):
        raise DomainError(f"{what} indices {pair} out of range 1..{n}")
    if a == b:
        raise DomainError(f"{what} indices must be distinct, got {pair}")
    return a, b


def _raw_plaquette(x: np.ndarray, rows, cols) -> complex:
    a, b = rows
    j, k = cols
    return complex(
        x[a - 1, j - 1] * x[b - 1, k - 1] * np.conj(x[a - 1, k - 1]) * np.conj(x[b - 1, j - 1])
    )


@dataclass(frozen=True)
class Plaquette:
    """One canonical fourth-order invariant.

    Stored with rows and cols sorted ascending; other orientations are
    reconstructed by :meth:`oriented` (one swap conjugates the value, so
    the imaginary part is antisymmetric and the real part symmetric).
    """

    rows: tuple
    cols: tuple
    value: complex

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag

    def oriented(self, rows, cols) -> complex:
        """Value for any orientation of the same row/column index sets."""
        if set(rows) != set(self.rows) or set(cols) != set(self.cols):
            raise DomainError(
                f"orientation {rows}/{cols} does not match plaquette {self.rows}/{self.cols}"
            )
        flips = (tuple(rows) != self.rows) + (tuple(cols) != self.cols)
        return self.value.conjugate() if flips == 1 else self.value


def plaquette(x, rows, cols) -> Plaquette:
    """The invariant for row pair *rows* and column pair *cols* of *x*."""
    n = require_square(x)
    x = np.asarray(x, dtype=np.complex128)
    a, b = _check_pair(rows, n, "row")
    j, k = _check_pair(cols, n, "column")
    value = _raw_plaquette(x, (a, b), (j, k))
    if a > b:
        a, b = b, a
        value = value.conjugate()
    if j > k:
        j, k = k, j
        value = value.conjugate()
    return Plaquette(rows=(a, b), cols=(j, k), value=value)


@dataclass(frozen=True)
class PlaquetteTable:
    """All [n(n-1)/2]^2 canonical plaquettes of one matrix."""

    n: int
    values: dict

    def __len__(self) -> int:
        return len(self.values)

    def keys(self):
        return self.values.keys()

    def get(self, rows, cols) -> Plaquette:
        key = (tuple(sorted(rows)), tuple(sorted(cols)))
        return self.values[key]

    def value(self, rows, cols) -> complex:
        """Complex value in the requested (possibly non-canonical) orientation."""
        return self.get(rows, cols).oriented(tuple(rows), tuple(cols))

    def im(self, rows, cols) -> float:
        return self.value(rows, cols).imag

    def re(self, rows, cols) -> float:
        return self.value(rows, cols).real

    def max_abs_diff(self, other: "PlaquetteTable") -> float:
        if other.n != self.n:
            raise DomainError("tables belong to different matrix orders")
        return max(
            abs(p.value - other.values[key].value) for key, p in self.values.items()
        )


def plaquette_table(x, tol: float = DEFAULT_UNITARITY_TOL) -> PlaquetteTable:
    n = require_square(x)
    x = np.asarray(x, dtype=np.complex128)
    if not is_unitary(x, tol):
        raise DomainError(f"input is not unitary within {tol}")
    values = {}
    for rows in combinations(range(1, n + 1), 2):
        for cols in combinations(range(1, n + 1), 2):
            values[(rows, cols)] = Plaquette(rows, cols, _raw_plaquette(x, rows, cols))
    return PlaquetteTable(n=n, values=values)


def reduce_sextet(x, rows, cols, tol: float = 1e-12) -> tuple:
    """Reduce a sixth-order invariant to fourth-order ones.

    Returns (lhs, rhs) where lhs = Im(V_aj V_bk V_cl conj(V_ak V_bl V_cj))
    for row triple (a, b, c) and column triple (j, k, l), and rhs is the
    reduction [(ab, jk)<bc, jl> + <ab, jk>(bc, jl)] / |V_bj|^2.  Both are
    returned so callers can compare them; they agree whenever the pivot
    V_bj is meaningfully nonzero.
    """
    n = require_square(x)
    x = np.asarray(x, dtype=np.complex128)
    a, b, c = (int(i) for i in rows)
    j, k, l = (int(i) for i in cols)
    if len({a, b, c}) != 3 or not all(1 <= i <= n for i in (a, b, c)):
        raise DomainError(f"row triple {rows} must be distinct and in 1..{n}")
    if len({j, k, l}) != 3 or not all(1 <= i <= n for i in (j, k, l)):
        raise DomainError(f"column triple {cols} must be distinct and in 1..{n}")
    pivot = abs(x[b - 1, j - 1])
    if pivot <= tol:
        raise PreconditionError(
            f"pivot element V[{b},{j}] has modulus {pivot:.3e} <= {tol}; reduction undefined"
        )
    lhs = (
        x[a - 1, j - 1]
        * x[b - 1, k - 1]
        * x[c - 1, l - 1]
        * np.conj(x[a - 1, k - 1] * x[b - 1, l - 1] * x[c - 1, j - 1])
    ).imag
    p1 = _raw_plaquette(x, (a, b), (j, k))
    p2 = _raw_plaquette(x, (b, c), (j, l))
    rhs = (p1.imag * p2.real + p1.real * p2.imag) / pivot**2
    return float(lhs), float(rhs)


# --- omega phases and chain symmetries (n = 4, 5) ---------------------------


@dataclass(frozen=True)
class OmegaSet:
    """The (n-1)(n-2)/2 invariant phase combinations of an ascending chain."""

    n: int
    omegas: tuple


def _ascending_chars(d: Decomposition) -> dict:
    ks = [f.order_k for f in d.factors]
    if ks != sorted(ks):
        raise DomainError("expected an ascending chain")
    return {f.order_k: f.char for f in d.factors}


def omega_from_params(d: Decomposition) -> OmegaSet:
    """Assemble the invariant phases from component arguments.

    For n = 4, with x the order-3 and y the order-4 characteristic
    vectors: omega_1 = arg x2 - arg x1, omega_2 = arg y2 - arg y1,
    omega_3 = arg x2 + arg y3 - arg y2.  For n = 5 the order-5 vector z
    adds three more combinations.  Values are wrapped into (-pi, pi];
    they are unchanged by the chain symmetries of :func:`apply_symmetry`.
    """
    if d.ambient_n not in (4, 5):
        raise DomainError(f"omega phases are defined for n in {{4, 5}}, got n={d.ambient_n}")
    chars = _ascending_chars(d)
    px = np.angle(chars[3])
    py = np.angle(chars[4])
    if d.ambient_n == 4:
        omegas = (
            px[1] - px[0],
            py[1] - py[0],
            px[1] + py[2] - py[1],
        )
    else:
        pz = np.angle(chars[5])
        omegas = (
            px[1] - px[0],
            py[1] - py[0],
            pz[1] - pz[0],
            px[1] + py[2] - py[1],
            px[1] + pz[2] - pz[1],
            py[2] + pz[3] - pz[2],
        )
    return OmegaSet(n=d.ambient_n, omegas=tuple(wrap_angle(float(w)) for w in omegas))


_SYMMETRIES = ("S1", "S2", "S3")


def apply_symmetry(d: Decomposition, which: str, phase: float) -> Decomposition:
    """Transform chain parameters by one of the rephasing symmetries.

    S1 multiplies the order-3 vector by e^{i phase} and compensates on
    the last components rotated through it (y3, and z3 for n = 5); S2
    does the same one order up; S3 (n = 5 only) rephases the order-5
    vector.  The composed matrix changes only by external phase matrices,
    so every plaquette is unchanged.
    """
    n = d.ambient_n
    if n not in (4, 5):
        raise DomainError(f"chain symmetries are defined for n in {{4, 5}}, got n={n}")
    if which not in _SYMMETRIES or (which == "S3" and n == 4):
        raise DomainError(f"unsupported symmetry {which!r} for n={n}")
    chars = {k: v.copy() for k, v in _ascending_chars(d).items()}
    rot = np.exp(1j * phase)
    if which == "S1":
        chars[3] = chars[3] * rot
        chars[4][2] = chars[4][2] / rot
        if n == 5:
            chars[5][2] = chars[5][2] / rot
    elif which == "S2":
        chars[4] = chars[4] * rot
        if n == 5:
            chars[5][3] = chars[5][3] / rot
    else:
        chars[5] = chars[5] * rot
    # Unit-phase multiplication preserves the norm to machine precision,
    # so the vectors are not renormalised.
    new_factors = tuple(
        f.with_char(chars[f.order_k]) if f.order_k in (3, 4, 5) else f for f in d.factors
    )
    return d.replace(factors=new_factors)


# --- panel lattice and the six unitarity relations (n = 4) ------------------


@dataclass(frozen=True)
class PanelLattice:
    """Nearest-neighbour plaquettes P_ab = R_ab + i J_ab on an (n-1)^2 grid."""

    n: int
    panels: np.ndarray

    @property
    def J(self) -> np.ndarray:
        return self.panels.imag

    @property
    def R(self) -> np.ndarray:
        return self.panels.real

    def panel(self, a: int, b: int) -> complex:
        """P_ab, 1-based: the plaquette of rows (a, a+1) and columns (b, b+1)."""
        return complex(self.panels[a - 1, b - 1])


def panel_lattice(x, tol: float = DEFAULT_UNITARITY_TOL) -> PanelLattice:
    n = require_square(x)
    if n < 2:
        raise DomainError("panel lattice needs n >= 2")
    x = np.asarray(x, dtype=np.complex128)
    if not is_unitary(x, tol):
        raise DomainError(f"input is not unitary within {tol}")
    panels = np.empty((n - 1, n - 1), dtype=np.complex128)
    for a in range(n - 1):
        for b in range(n - 1):
            panels[a, b] = (
                x[a, b] * x[a + 1, b + 1] * np.conj(x[a, b + 1]) * np.conj(x[a + 1, b])
            )
    panels.setflags(write=False)
    return PanelLattice(n=n, panels=panels)


# Denominators |V_rc V_r'c'|^2 of the six relations, as 1-based entry pairs.
_RELATION_DENOMS = (
    ((1, 2), (2, 2)),
    ((3, 3), (3, 4)),
    ((2, 1), (2, 2)),
    ((3, 3), (4, 3)),
    ((3, 2), (3, 3)),
    ((2, 3), (3, 3)),
)


def _relation_coefficients(x: np.ndarray, zero_tol: float):
    lat = panel_lattice(x)
    J, R = lat.J, lat.R
    ms = []
    for (r1, c1), (r2, c2) in _RELATION_DENOMS:
        for (r, c) in ((r1, c1), (r2, c2)):
            if abs(x[r - 1, c - 1]) <= zero_tol:
                raise PreconditionError(
                    f"matrix element V[{r},{c}] has modulus {abs(x[r - 1, c - 1]):.3e} "
                    f"<= {zero_tol}; the panel relations divide by it"
                )
        ms.append(abs(x[r1 - 1, c1 - 1] * x[r2 - 1, c2 - 1]) ** 2)
    return J, R, ms


def panel_relation_residuals(x, zero_tol: float = 1e-9) -> np.ndarray:
    """LHS - RHS of the six panel unitarity relations of a 4-by-4 unitary.

    All six vanish (to rounding) for exactly unitary input.  Requires
    every matrix element appearing in a denominator to be nonzero beyond
    *zero_tol*.
    """
    n = require_square(x)
    if n != 4:
        raise DomainError(f"the six panel relations are specific to n=4, got n={n}")
    x = np.asarray(x, dtype=np.complex128)
    J, R, m = _relation_coefficients(x, zero_tol)
    res = np.array(
        [
            J[0, 2] - (1 + R[0, 0] / m[0]) * J[0, 1] - (R[0, 1] / m[0]) * J[0, 0],
            J[0, 2] - (1 + R[2, 2] / m[1]) * J[1, 2] - (R[1, 2] / m[1]) * J[2, 2],
            J[2, 0] - (1 + R[0, 0] / m[2]) * J[1, 0] - (R[1, 0] / m[2]) * J[0, 0],
            J[2, 0] - (1 + R[2, 2] / m[3]) * J[2, 1] - (R[2, 1] / m[3]) * J[2, 2],
            J[0, 1] - (R[1, 1] / m[4]) * J[2, 1] - (1 + R[2, 1] / m[4]) * J[1, 1],
            J[1, 0] - (R[1, 1] / m[5]) * J[1, 2] - (1 + R[1, 2] / m[5]) * J[1, 1],
        ]
    )
    return res


def basis_solve_n4(x, zero_tol: float = 1e-9, cond_limit: float = 1e12) -> dict:
    """Solve the six panel relations for the dependent imaginary parts.

    Given the basis {J_11, J_22, J_33} (and the real parts and moduli,
    which are invariant data), returns the six remaining J_ab of the
    4-by-4 panel lattice, keyed by (a, b).  The relations couple the
    unknowns in a single cycle, so they are solved as one 6-by-6 linear
    system; a near-singular system (degenerate moduli) is reported as
    unsolvable together with the directly computed panel values.
    """
    n = require_square(x)
    if n != 4:
        raise DomainError(f"the panel basis solve is specific to n=4, got n={n}")
    x = np.asarray(x, dtype=np.complex128)
    J, R, m = _relation_coefficients(x, zero_tol)
    # Unknowns u = (J12, J13, J21, J23, J31, J32), 1-based panel labels.
    a = np.zeros((6, 6))
    b = np.zeros(6)
    a[0, 1], a[0, 0], b[0] = 1.0, -(1 + R[0, 0] / m[0]), (R[0, 1] / m[0]) * J[0, 0]
    a[1, 1], a[1, 3], b[1] = 1.0, -(1 + R[2, 2] / m[1]), (R[1, 2] / m[1]) * J[2, 2]
    a[2, 4], a[2, 2], b[2] = 1.0, -(1 + R[0, 0] / m[2]), (R[1, 0] / m[2]) * J[0, 0]
    a[3, 4], a[3, 5], b[3] = 1.0, -(1 + R[2, 2] / m[3]), (R[2, 1] / m[3]) * J[2, 2]
    a[4, 0], a[4, 5], b[4] = 1.0, -(R[1, 1] / m[4]), (1 + R[2, 1] / m[4]) * J[1, 1]
    a[5, 2], a[5, 3], b[5] = 1.0, -(R[1, 1] / m[5]), (1 + R[1, 2] / m[5]) * J[1, 1]
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > cond_limit:
        direct = {key: float(J[key[0] - 1, key[1] - 1]) for key in _DEPENDENT_PANELS}
        raise PreconditionError(
            f"panel relation system is singular (cond={cond:.3e}); "
            f"directly computed panels: {direct}"
        )
    u = np.linalg.solve(a, b)
    return dict(zip(_DEPENDENT_PANELS, (float(v) for v in u)))


_DEPENDENT_PANELS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))


# --- closed forms from the chain parameters ---------------------------------


def _require_pinned_order2(d: Decomposition, tol: float = 1e-9):
    chars = _ascending_chars(d)
    if abs(chars[2][0] - 1.0) > tol:
        raise DomainError(
            "closed forms assume the order-2 characteristic scalar is pinned to 1 "
            "(canonical gauge); run gauge_fix first"
        )
    return chars


def closed_form_j_n3(d: Decomposition) -> float:
    """The unique invariant of a 3-by-3 chain: c2 c3 s2 s3^2 Im(conj(x1) x2)."""
    if d.ambient_n != 3:
        raise DomainError(f"expected n=3, got n={d.ambient_n}")
    chars = _require_pinned_order2(d)
    t2, t3 = d.factor(2).theta, d.factor(3).theta
    x = chars[3]
    return float(
        math.cos(t2)
        * math.cos(t3)
        * math.sin(t2)
        * math.sin(t3) ** 2
        * (np.conj(x[0]) * x[1]).imag
    )


def closed_forms_n4(d: Decomposition) -> tuple:
    """Closed forms for the (34,34) and (34,24) invariants of an n=4 chain.

    Only moduli of the characteristic components and the omega phases
    enter:

        (34,34) = c3 c4 s3 s4^2 |y3| (|x2 y2| sin w3 + |x1 y1| sin(w3+w2-w1))
        (34,24) = c4 s3 s4^2 |x2 y2| (s3 |x1 y1| sin(w1-w2) - c3 |y3| sin w3)
    """
    if d.ambient_n != 4:
        raise DomainError(f"expected n=4, got n={d.ambient_n}")
    chars = _require_pinned_order2(d)
    t3, t4 = d.factor(3).theta, d.factor(4).theta
    c3, s3 = math.cos(t3), math.sin(t3)
    c4, s4 = math.cos(t4), math.sin(t4)
    x, y = np.abs(chars[3]), np.abs(chars[4])
    w1, w2, w3 = omega_from_params(d).omegas
    p3434 = c3 * c4 * s3 * s4**2 * y[2] * (
        x[1] * y[1] * math.sin(w3) + x[0] * y[0] * math.sin(w3 + w2 - w1)
    )
    p3424 = c4 * s3 * s4**2 * x[1] * y[1] * (
        s3 * x[0] * y[0] * math.sin(w1 - w2) - c3 * y[2] * math.sin(w3)
    )
    return float(p3434), float(p3424)


# --- unitarity triangles -----------------------------------------------------


def _polygon_area(sides: np.ndarray) -> float:
    """Area of the closed polygon whose edges are the complex *sides*."""
    vertices = np.concatenate([[0.0 + 0.0j], np.cumsum(sides)])
    total = 0.0
    for i in range(len(vertices) - 1):
        total += (np.conj(vertices[i]) * vertices[i + 1]).imag
    total += (np.conj(vertices[-1]) * vertices[0]).imag
    return abs(0.5 * total)


def triangle_areas(x, tol: float = DEFAULT_UNITARITY_TOL) -> list:
    """Areas of the row- and column-orthogonality polygons.

    For every row pair (a, b) the sides are V_aj conj(V_bj), j = 1..n
    (and analogously down columns); unitarity closes the polygon.  For
    n = 3 every polygon is a triangle of area |J|/2.  Returns a list of
    (("rows"|"cols", i, j), area) with 1-based indices.
    """
    n = require_square(x)
    x = np.asarray(x, dtype=np.complex128)
    if not is_unitary(x, tol):
        raise DomainError(f"input is not unitary within {tol}")
    out = []
    for a, b in combinations(range(n), 2):
        out.append((("rows", a + 1, b + 1), _polygon_area(x[a, :] * np.conj(x[b, :]))))
    for j, k in combinations(range(n), 2):
        out.append((("cols", j + 1, k + 1), _polygon_area(x[:, j] * np.conj(x[:, k]))))
    return out


# --- two-zero textures (n = 4) ----------------------------------------------


@dataclass(frozen=True)
class ZeroTextureReport:
    """Invariant structure of a 4-by-4 unitary with two off-grid zeros.

    All index-carrying fields refer to the standard frame, the row/column
    relabelling that puts the vanishing entries at positions (1, 4) and
    (4, 1).  ``J`` and ``J_prime`` are the (12;12) and (34;34) invariants
    there; ``ratio`` is the closed-form prediction -s4^2/s3^2 for
    J'/J obtained by re-parameterising the matrix; ``sign_pattern`` maps
    each canonical plaquette to its place in the {+-J, +-J', J+J', 0}
    classification; ``triangle_areas`` holds the eight non-degenerate
    triangle areas (labelled, standard frame).
    """

    J: float
    J_prime: float
    ratio: float
    vanishing_count: int
    sign_pattern: dict
    triangle_areas: tuple
    J_closed_form: float
    J_prime_closed_form: float
    modulus_ratio_sq: dict
    zeros: tuple
    row_map: tuple
    col_map: tuple


#: The eight triangle pairs of the standard texture frame.
_TEXTURE_TRIANGLES = (
    ("rows", 1, 2),
    ("rows", 1, 3),
    ("rows", 2, 4),
    ("rows", 3, 4),
    ("cols", 1, 2),
    ("cols", 1, 3),
    ("cols", 2, 4),
    ("cols", 3, 4),
)


def _texture_permutation(x: np.ndarray, tol: float) -> tuple:
    """Row/column orders mapping the two zeros to (1, 4) and (4, 1)."""
    n = x.shape[0]
    zero_pos = [(r, c) for r in range(n) for c in range(n) if abs(x[r, c]) <= tol]
    if len(zero_pos) != 2:
        raise DomainError(
            f"texture needs exactly two entries below {tol}, found {len(zero_pos)} "
            f"at {[(r + 1, c + 1) for r, c in zero_pos]}"
        )
    (r1, c1), (r2, c2) = sorted(zero_pos)
    if r1 == r2 or c1 == c2:
        raise DomainError(
            f"zero entries must lie on distinct rows and columns, got "
            f"({r1 + 1},{c1 + 1}) and ({r2 + 1},{c2 + 1})"
        )
    other_rows = sorted(set(range(n)) - {r1, r2})
    other_cols = sorted(set(range(n)) - {c1, c2})
    row_order = [r1, *other_rows, r2]
    col_order = [c2, *other_cols, c1]
    return tuple(row_order), tuple(col_order), ((r1 + 1, c1 + 1), (r2 + 1, c2 + 1))


def zero_texture_analysis(
    x,
    tol: float = 1e-9,
    vanish_tol: float = 1e-10,
    unitarity_tol: float = DEFAULT_UNITARITY_TOL,
) -> ZeroTextureReport:
    """Analyse a 4-by-4 unitary whose two zeros share no row or column.

    The matrix is relabelled so the zeros sit at (1, 4) and (4, 1); there
    19 of the 36 imaginary invariants vanish and the remaining ones chain
    into +-J, +-J' and J+J'.  The closed forms come from relabelling once
    more so the zeros sit at (3, 4)/(4, 3), peeling that matrix into an
    ascending canonical chain and evaluating

        J = c2 c3 c4 s2 s3^2 Im(conj(x1) x2),
        J' = -c2 c3 c4 s2 s4^2 Im(conj(x1) x2),

    whence J'/J = -s4^2/s3^2.
    """
    n = require_square(x)
    if n != 4:
        raise DomainError(f"zero-texture analysis is specific to n=4, got n={n}")
    x = np.asarray(x, dtype=np.complex128)
    if not is_unitary(x, unitarity_tol):
        raise DomainError(f"input is not unitary within {unitarity_tol}")
    row_order, col_order, zeros = _texture_permutation(x, tol)
    std = x[np.ix_(row_order, col_order)]
    nonzero_min = min(
        abs(std[r, c]) for r in range(4) for c in range(4) if (r, c) not in ((0, 3), (3, 0))
    )
    if nonzero_min <= tol:
        raise DomainError(
            f"all entries off the texture must exceed {tol}; smallest is {nonzero_min:.3e}"
        )

    table = plaquette_table(std, tol=unitarity_tol)
    j_val = table.im((1, 2), (1, 2))
    jp_val = table.im((3, 4), (3, 4))

    ims = {key: p.im for key, p in table.values.items()}
    vanishing = sum(1 for v in ims.values() if abs(v) <= vanish_tol)
    candidates = (
        ("0", 0.0),
        ("+J", j_val),
        ("-J", -j_val),
        ("+J'", jp_val),
        ("-J'", -jp_val),
        ("J+J'", j_val + jp_val),
    )
    sign_pattern = {
        key: min(candidates, key=lambda c: abs(v - c[1]))[0] for key, v in ims.items()
    }

    areas = dict(triangle_areas(std, tol=unitarity_tol))
    tri = tuple((label, areas[label]) for label in _TEXTURE_TRIANGLES)

    # Closed forms: relabel rows/cols 1 <-> 3 so the zeros move to (3,4)/(4,3),
    # then peel into an ascending canonical chain.
    calc = std[np.ix_((2, 1, 0, 3), (2, 1, 0, 3))]
    chain = gauge_fix(reorder_chain(decompose(calc, unitarity_tol), range(2, 5)))
    t2, t3, t4 = (chain.factor(k).theta for k in (2, 3, 4))
    c2, s2 = math.cos(t2), math.sin(t2)
    c3, s3 = math.cos(t3), math.sin(t3)
    c4, s4 = math.cos(t4), math.sin(t4)
    xchar = chain.factor(3).char
    im_x = (np.conj(xchar[0]) * xchar[1]).imag
    j_closed = c2 * c3 * c4 * s2 * s3**2 * im_x
    jp_closed = -c2 * c3 * c4 * s2 * s4**2 * im_x
    if s3 <= tol:
        raise DomainError("texture is degenerate: the order-3 angle vanishes")
    ratio = -(s4**2) / s3**2

    ab = np.abs(std)
    modulus_ratio_sq = {
        "corner_products_rows": (ab[1, 3] * ab[2, 3] / (ab[1, 0] * ab[2, 0])) ** 2,
        "corner_products_cols": (ab[3, 1] * ab[3, 2] / (ab[0, 1] * ab[0, 2])) ** 2,
        "modulus_sums_rows": (
            (ab[1, 3] ** 2 + ab[2, 3] ** 2) / (ab[0, 1] ** 2 + ab[0, 2] ** 2)
        )
        ** 2,
        "modulus_sums_cols": (
            (ab[3, 1] ** 2 + ab[3, 2] ** 2) / (ab[1, 0] ** 2 + ab[2, 0] ** 2)
        )
        ** 2,
    }

    return ZeroTextureReport(
        J=float(j_val),
        J_prime=float(jp_val),
        ratio=float(ratio),
        vanishing_count=int(vanishing),
        sign_pattern=sign_pattern,
        triangle_areas=tri,
        J_closed_form=float(j_closed),
        J_prime_closed_form=float(jp_closed),
        modulus_ratio_sq={k: float(v) for k, v in modulus_ratio_sq.items()},
        zeros=zeros,
        row_map=tuple(i + 1 for i in row_order),
        col_map=tuple(i + 1 for i in col_order),
    )

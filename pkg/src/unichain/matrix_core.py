"""Complex dense matrix utilities.

Products, adjoints, unitarity checks, diagonal phase matrices and
Haar-distributed random unitaries.  Every matrix in this package is a
dense ``numpy.ndarray`` of dtype ``complex128``; matrix comparisons use
the max-norm (largest absolute entry), which is easy to reason about
entry by entry at the small sizes this library targets.

Tolerances are explicit parameters everywhere, with module-wide defaults
``DEFAULT_UNITARITY_TOL`` (1e-10) and ``DEFAULT_EQUALITY_TOL`` (1e-12).
All functions are pure; random sampling takes a mandatory seed and owns
its generator, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_UNITARITY_TOL = 1e-10
DEFAULT_EQUALITY_TOL = 1e-12

_TWO_PI = 2.0 * math.pi


class ShapeError(ValueError):
    """Operand dimensions are incompatible."""


class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class StructureError(ValueError):
    """A composite value (factor chain, JSON document) is malformed."""


class PreconditionError(ValueError):
    """A documented precondition on the input data is violated."""


class ConsistencyError(ArithmeticError):
    """An internal numerical consistency check failed."""


def as_matrix(a) -> np.ndarray:
    """Coerce *a* to a 2-d complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix contains non-finite entries")
    return m


def require_square(a: np.ndarray) -> int:
    """Return the order of *a*, raising :class:`ShapeError` if non-square."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


def maxnorm(a) -> float:
    """Largest absolute entry of *a* (0.0 for an empty array)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def max_abs_diff(a, b) -> float:
    """Max-norm of the entrywise difference of two equal-shape arrays."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return maxnorm(a - b)


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def unitarity_defect(a) -> float:
    """max(||a a^H - I||, ||a^H a - I||) in max-norm; input must be square."""
    n = require_square(a)
    a = np.asarray(a, dtype=np.complex128)
    eye = np.eye(n)
    return max(maxnorm(a @ a.conj().T - eye), maxnorm(a.conj().T @ a - eye))


def is_unitary(a, tol: float = DEFAULT_UNITARITY_TOL) -> bool:
    """True iff *a* is unitary within *tol* in max-norm (both orders checked)."""
    return unitarity_defect(a) <= tol


def wrap_angle(theta: float) -> float:
    """Reduce an angle to the canonical interval (-pi, pi]."""
    return math.pi - (math.pi - theta) % _TWO_PI


def wrap_angles(phases) -> np.ndarray:
    """Vectorised :func:`wrap_angle`."""
    phases = np.asarray(phases, dtype=float)
    return np.pi - np.mod(np.pi - phases, _TWO_PI)


def phase_vector(phases) -> np.ndarray:
    """Validate a sequence of real phases and return it as a float array."""
    p = np.asarray(phases, dtype=float)
    if p.ndim != 1:
        raise ShapeError(f"phase vector must be 1-d, got ndim={p.ndim}")
    if not np.all(np.isfinite(p)):
        raise DomainError("phase vector contains non-finite entries")
    return p


def phase_matrix(phases) -> np.ndarray:
    """Diagonal unitary diag(e^{i p_1}, ..., e^{i p_n})."""
    p = phase_vector(phases)
    return np.diag(np.exp(1j * p))


def haar_random(n: int, seed: int) -> np.ndarray:
    """Draw an n-by-n unitary from the Haar measure, deterministically.

    A matrix of independent standard complex Gaussians is QR-factorised
    and each column of Q is rescaled by the unit-modulus phase of the
    corresponding diagonal entry of R.  The rescaling makes the implied
    R-factor's diagonal real positive, which is what turns "QR of a
    Gaussian matrix" (biased) into an exactly Haar-distributed sample.

    The generator is PCG64 seeded with *seed*; identical (n, seed) give
    bitwise-identical output.
    """
    if n < 1:
        raise DomainError(f"matrix order must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


# --- JSON interchange -------------------------------------------------------
#
# Matrix files are {"n": int, "entries": [[re, im], ...]} with entries in
# row-major order.  Parsers reject wrong lengths and non-finite numbers.


def matrix_to_json_dict(a) -> dict:
    """Serialise a square matrix to its JSON document (plain dict)."""
    n = require_square(a)
    a = np.asarray(a, dtype=np.complex128)
    entries = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return {"n": n, "entries": entries}


def matrix_from_json_dict(obj) -> np.ndarray:
    """Parse and validate the JSON matrix document produced above."""
    if not isinstance(obj, dict):
        raise StructureError("matrix document must be a JSON object")
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"matrix document missing/invalid field: {exc}") from exc
    if n < 1:
        raise DomainError(f"matrix order must be >= 1, got {n}")
    if not isinstance(entries, list) or len(entries) != n * n:
        actual = len(entries) if isinstance(entries, list) else "non-list"
        raise StructureError(f"'entries' must hold {n * n} pairs, got {actual}")
    flat = np.empty(n * n, dtype=np.complex128)
    for i, pair in enumerate(entries):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise StructureError(f"entry {i} is not a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise DomainError(f"entry {i} is not finite: [{pair[0]}, {pair[1]}]")
        flat[i] = complex(re, im)
    return flat.reshape(n, n)

"""Shared construction helpers for the test suite."""

import math

import numpy as np

from unichain.recursive_param import ASCENDING, Decomposition, Factor


def random_char(rng, length):
    v = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    return v / np.linalg.norm(v)


def random_ascending_chain(rng, n, zero_phases=False):
    factors = tuple(
        Factor(n, k, rng.uniform(0, math.pi / 2), random_char(rng, k - 1))
        for k in range(2, n + 1)
    )
    if zero_phases:
        left = right = np.zeros(n)
    else:
        left = rng.uniform(-math.pi, math.pi, n)
        right = rng.uniform(-math.pi, math.pi, n)
    return Decomposition(n, factors, left, right, ASCENDING)


def pinned_chain_n4(rng):
    """Random ascending n=4 chain with the order-2 scalar pinned to 1."""
    t2, t3, t4 = rng.uniform(0.2, 1.4, 3)
    x = random_char(rng, 2)
    y = random_char(rng, 3)
    factors = (Factor(4, 2, t2, [1.0]), Factor(4, 3, t3, x), Factor(4, 4, t4, y))
    return Decomposition(4, factors, np.zeros(4), np.zeros(4), ASCENDING)


def texture_params(rng):
    """Chain parameters forcing zeros at entries (3,4) and (4,3) of the
    composed matrix: last component of y vanishes and y is orthogonal to x
    in the pairing x1 conj(y1) + x2 conj(y2)."""
    t2, t3, t4 = rng.uniform(0.3, 1.3, 3)
    x = random_char(rng, 2)
    psi = rng.uniform(-math.pi, math.pi)
    y = np.exp(1j * psi) * np.array([np.conj(x[1]), -np.conj(x[0]), 0.0])
    return (t2, t3, t4), x, y


def texture_matrix(rng):
    """A 4x4 unitary with exact zeros at (3,4) and (4,3), others generic."""
    from unichain.recursive_param import compose

    (t2, t3, t4), x, y = texture_params(rng)
    factors = (Factor(4, 2, t2, [1.0]), Factor(4, 3, t3, x), Factor(4, 4, t4, y))
    return compose(Decomposition(4, factors, np.zeros(4), np.zeros(4), ASCENDING))

import math
from itertools import combinations

import numpy as np
import pytest

from helpers import pinned_chain_n4, random_ascending_chain, random_char, texture_matrix
from unichain.matrix_core import (
    DomainError,
    PreconditionError,
    haar_random,
    max_abs_diff,
    maxnorm,
    phase_matrix,
)
from unichain.invariants import (
    apply_symmetry,
    basis_solve_n4,
    closed_form_j_n3,
    closed_forms_n4,
    count_independent_phases,
    omega_from_params,
    panel_lattice,
    panel_relation_residuals,
    plaquette,
    plaquette_table,
    reduce_sextet,
    triangle_areas,
    zero_texture_analysis,
)
from unichain.recursive_param import (
    ASCENDING,
    Decomposition,
    Factor,
    compose,
    decompose,
    gauge_fix,
    reorder_chain,
)


def levi_civita(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


class TestPlaquette:
    def test_2x2_imaginary_part_vanishes(self):
        for seed in range(5):
            x = haar_random(2, seed)
            assert abs(plaquette(x, (1, 2), (1, 2)).im) < 1e-15

    def test_identity_matrix(self):
        p = plaquette(np.eye(4), (1, 3), (2, 4))
        assert p.value == 0.0

    def test_repeated_index_rejected(self):
        with pytest.raises(DomainError):
            plaquette(np.eye(3), (1, 1), (1, 2))
        with pytest.raises(DomainError):
            plaquette(np.eye(3), (1, 2), (5, 2))

    def test_orientation_signs(self):
        x = haar_random(4, 3)
        base = plaquette(x, (1, 3), (2, 4))
        # one swap conjugates, two swaps restore
        assert base.oriented((3, 1), (2, 4)) == base.value.conjugate()
        assert base.oriented((1, 3), (4, 2)) == base.value.conjugate()
        assert base.oriented((3, 1), (4, 2)) == base.value

    def test_direct_value_any_orientation(self):
        x = haar_random(5, 4)
        for rows in ((2, 4), (4, 2)):
            for cols in ((1, 5), (5, 1)):
                direct = (
                    x[rows[0] - 1, cols[0] - 1]
                    * x[rows[1] - 1, cols[1] - 1]
                    * np.conj(x[rows[0] - 1, cols[1] - 1])
                    * np.conj(x[rows[1] - 1, cols[0] - 1])
                )
                p = plaquette(x, rows, cols)
                assert abs(p.oriented(rows, cols) - direct) < 1e-15


class TestPlaquetteTable:
    def test_counts(self):
        assert len(plaquette_table(haar_random(4, 0))) == 36
        assert len(plaquette_table(haar_random(3, 0))) == 9
        assert len(plaquette_table(haar_random(5, 0))) == 100

    def test_rephasing_invariance(self):
        rng = np.random.Generator(np.random.PCG64(1))
        for n in (3, 4, 5):
            x = haar_random(n, 10 + n)
            base = plaquette_table(x)
            for _ in range(5):
                left = phase_matrix(rng.uniform(-math.pi, math.pi, n))
                right = phase_matrix(rng.uniform(-math.pi, math.pi, n))
                assert base.max_abs_diff(plaquette_table(left @ x @ right)) < 1e-12

    def test_rejects_non_unitary(self):
        with pytest.raises(DomainError):
            plaquette_table(np.ones((3, 3)))


class TestEpsilonStructure:
    def test_all_nine_follow_single_j(self):
        for seed in range(10):
            x = haar_random(3, 100 + seed)
            t = plaquette_table(x)
            j = t.im((1, 2), (1, 2))
            for rows in combinations(range(1, 4), 2):
                for cols in combinations(range(1, 4), 2):
                    grow = ({1, 2, 3} - set(rows)).pop()
                    gcol = ({1, 2, 3} - set(cols)).pop()
                    sign = levi_civita((grow, *rows)) * levi_civita((gcol, *cols))
                    assert abs(t.im(rows, cols) - sign * j) < 1e-13


class TestSextetReduction:
    def test_identity_matrix(self):
        # pivot V[2,2] = 1 with rows (1,2,3), cols (2,1,3)
        lhs, rhs = reduce_sextet(np.eye(3), (1, 2, 3), (2, 1, 3))
        assert lhs == 0.0 and rhs == 0.0

    def test_random_4x4(self):
        for seed in range(20):
            x = haar_random(4, 200 + seed)
            lhs, rhs = reduce_sextet(x, (1, 2, 3), (1, 2, 3))
            assert abs(lhs - rhs) < 1e-12

    def test_random_5x5_random_indices(self):
        rng = np.random.Generator(np.random.PCG64(2))
        worst = 0.0
        for trial in range(100):
            x = haar_random(5, 300 + trial)
            rows = tuple(int(i) + 1 for i in rng.choice(5, 3, replace=False))
            cols = tuple(int(i) + 1 for i in rng.choice(5, 3, replace=False))
            if abs(x[rows[1] - 1, cols[0] - 1]) <= 1e-6:
                continue
            lhs, rhs = reduce_sextet(x, rows, cols)
            worst = max(worst, abs(lhs - rhs))
        assert worst < 1e-11

    def test_vanishing_pivot_rejected(self):
        x = np.eye(3)
        with pytest.raises(PreconditionError):
            reduce_sextet(x, (1, 2, 3), (1, 2, 3))  # pivot V[2,1] = 0

    def test_bad_indices_rejected(self):
        with pytest.raises(DomainError):
            reduce_sextet(np.eye(4), (1, 1, 2), (1, 2, 3))


class TestOmega:
    def test_real_positive_components_give_zero(self):
        factors = (
            Factor(4, 2, 0.4, [1.0]),
            Factor(4, 3, 0.7, [0.6, 0.8]),
            Factor(4, 4, 1.0, [0.48, 0.6, 0.64]),
        )
        d = Decomposition(4, factors, np.zeros(4), np.zeros(4), ASCENDING)
        assert maxnorm(omega_from_params(d).omegas) == 0.0

    def test_direct_substitution(self):
        x = np.array([0.6 * np.exp(0.1j), 0.8 * np.exp(0.3j)])
        factors = (
            Factor(4, 2, 0.4, [1.0]),
            Factor(4, 3, 0.7, x),
            Factor(4, 4, 1.0, [0.48, 0.6, 0.64]),
        )
        d = Decomposition(4, factors, np.zeros(4), np.zeros(4), ASCENDING)
        om = omega_from_params(d).omegas
        assert abs(om[0] - 0.2) < 1e-15
        assert abs(om[1]) < 1e-15
        assert abs(om[2] - 0.3) < 1e-15

    def test_invariance_under_symmetries(self):
        rng = np.random.Generator(np.random.PCG64(3))
        d = random_ascending_chain(rng, 4)
        base = omega_from_params(d).omegas
        d2 = apply_symmetry(apply_symmetry(d, "S1", 0.7), "S2", -1.3)
        for a, b in zip(base, omega_from_params(d2).omegas):
            assert abs(a - b) < 1e-14

    def test_n5_count_and_invariance(self):
        rng = np.random.Generator(np.random.PCG64(4))
        d = random_ascending_chain(rng, 5)
        base = omega_from_params(d).omegas
        assert len(base) == count_independent_phases(5) == 6
        d2 = apply_symmetry(d, "S1", 0.9)
        d2 = apply_symmetry(d2, "S2", -0.4)
        d2 = apply_symmetry(d2, "S3", 1.8)
        for a, b in zip(base, omega_from_params(d2).omegas):
            assert abs(a - b) < 1e-14

    def test_unsupported_order_rejected(self):
        rng = np.random.Generator(np.random.PCG64(5))
        with pytest.raises(DomainError):
            omega_from_params(random_ascending_chain(rng, 3))


class TestApplySymmetry:
    def test_zero_phase_is_identity(self):
        rng = np.random.Generator(np.random.PCG64(6))
        d = random_ascending_chain(rng, 4)
        out = apply_symmetry(d, "S1", 0.0)
        for a, b in zip(out.factors, d.factors):
            assert max_abs_diff(a.char, b.char) == 0.0

    def test_s1_table_invariance_n4(self):
        rng = np.random.Generator(np.random.PCG64(7))
        d = random_ascending_chain(rng, 4)
        base = plaquette_table(compose(d))
        out = apply_symmetry(d, "S1", 0.7)
        assert base.max_abs_diff(plaquette_table(compose(out))) < 1e-12

    def test_s2_table_invariance_n4(self):
        rng = np.random.Generator(np.random.PCG64(8))
        d = random_ascending_chain(rng, 4)
        base = plaquette_table(compose(d))
        out = apply_symmetry(d, "S2", -2.1)
        assert base.max_abs_diff(plaquette_table(compose(out))) < 1e-12

    def test_s3_table_invariance_n5(self):
        rng = np.random.Generator(np.random.PCG64(9))
        d = random_ascending_chain(rng, 5)
        base = plaquette_table(compose(d))
        out = apply_symmetry(d, "S3", 1.1)
        assert base.max_abs_diff(plaquette_table(compose(out))) < 1e-12

    def test_all_symmetries_n5(self):
        rng = np.random.Generator(np.random.PCG64(10))
        d = random_ascending_chain(rng, 5)
        base = plaquette_table(compose(d))
        for which, phase in (("S1", 0.3), ("S2", -0.8), ("S3", 2.5)):
            d = apply_symmetry(d, which, phase)
        assert base.max_abs_diff(plaquette_table(compose(d))) < 1e-12

    def test_unsupported_combinations_rejected(self):
        rng = np.random.Generator(np.random.PCG64(11))
        with pytest.raises(DomainError):
            apply_symmetry(random_ascending_chain(rng, 4), "S3", 0.1)
        with pytest.raises(DomainError):
            apply_symmetry(random_ascending_chain(rng, 3), "S1", 0.1)


class TestPanelLattice:
    def test_grid_shape(self):
        assert panel_lattice(haar_random(4, 1)).panels.shape == (3, 3)
        assert panel_lattice(haar_random(6, 1)).panels.shape == (5, 5)

    def test_identity_all_zero(self):
        assert maxnorm(panel_lattice(np.eye(4)).panels) == 0.0

    def test_p11_direct(self):
        x = haar_random(4, 2)
        direct = x[0, 0] * x[1, 1] * np.conj(x[0, 1]) * np.conj(x[1, 0])
        assert abs(panel_lattice(x).panel(1, 1) - direct) < 1e-15

    def test_matches_plaquettes(self):
        x = haar_random(4, 3)
        lat = panel_lattice(x)
        t = plaquette_table(x)
        for (a, b), rows, cols in (
            ((1, 1), (1, 2), (1, 2)),
            ((1, 2), (1, 2), (2, 3)),
            ((2, 2), (2, 3), (2, 3)),
            ((3, 2), (3, 4), (2, 3)),
        ):
            assert abs(lat.panel(a, b).imag - t.im(rows, cols)) < 1e-15


class TestPanelRelations:
    def test_z_identity_oracle(self):
        # For any complex triple, |z_b|^2 Im(z_a conj(z_c)) =
        # Re(z_a conj(z_b)) Im(z_b conj(z_c)) + Im(z_a conj(z_b)) Re(z_b conj(z_c)).
        rng = np.random.Generator(np.random.PCG64(12))
        for _ in range(50):
            za, zb, zc = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            lhs = abs(zb) ** 2 * (za * np.conj(zc)).imag
            rhs = (za * np.conj(zb)).real * (zb * np.conj(zc)).imag + (
                za * np.conj(zb)
            ).imag * (zb * np.conj(zc)).real
            assert abs(lhs - rhs) < 1e-12

    def test_first_relation_via_row_pair_sides(self):
        # Rebuild relation 1 independently from the row-(1,2) side products
        # and compare with the op's residual definition.
        x = haar_random(4, 13)
        z = x[0, :] * np.conj(x[1, :])
        m = abs(z[1]) ** 2
        j11 = (z[0] * np.conj(z[1])).imag
        r11 = (z[0] * np.conj(z[1])).real
        j12 = (z[1] * np.conj(z[2])).imag
        r12 = (z[1] * np.conj(z[2])).real
        j13 = (z[2] * np.conj(z[3])).imag
        residual = j13 - (1 + r11 / m) * j12 - (r12 / m) * j11
        assert abs(residual - panel_relation_residuals(x)[0]) < 1e-15

    def test_haar_residuals_small(self):
        for seed in range(20):
            assert maxnorm(panel_relation_residuals(haar_random(4, 400 + seed))) < 1e-12

    def test_real_orthogonal_residuals_exact_zero(self):
        rng = np.random.Generator(np.random.PCG64(14))
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        assert maxnorm(panel_relation_residuals(q.astype(complex))) == 0.0

    def test_hundred_haar(self):
        worst = 0.0
        for seed in range(100):
            worst = max(worst, maxnorm(panel_relation_residuals(haar_random(4, 500 + seed))))
        assert worst < 1e-11

    def test_vanishing_denominator_rejected(self):
        x = np.eye(4, dtype=complex)
        x[1, 1] = 0.0
        x[1, 2] = 1.0
        x[2, 1] = -1.0
        x[2, 2] = 0.0
        with pytest.raises(PreconditionError):
            panel_relation_residuals(x)

    def test_wrong_order_rejected(self):
        with pytest.raises(DomainError):
            panel_relation_residuals(haar_random(3, 0))


class TestBasisSolve:
    def test_matches_direct_panels(self):
        for seed in range(20):
            x = haar_random(4, 600 + seed)
            lat = panel_lattice(x)
            solved = basis_solve_n4(x)
            for (a, b), v in solved.items():
                assert abs(v - lat.J[a - 1, b - 1]) < 1e-10

    def test_orthogonal_gives_zeros(self):
        rng = np.random.Generator(np.random.PCG64(15))
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        solved = basis_solve_n4(q.astype(complex))
        assert maxnorm(list(solved.values())) < 1e-12

    def test_symmetric_matrix_pairs(self):
        # For a symmetric unitary the solved off-diagonal panels pair up.
        from unichain.symmetric import SymmetricParams, compose_symmetric

        rng = np.random.Generator(np.random.PCG64(16))
        chars = []
        for k in range(2, 5):
            v = rng.standard_normal(k - 1)
            chars.append(v / np.linalg.norm(v))
        p = SymmetricParams(4, tuple(rng.uniform(0.4, 1.2, 3)), tuple(chars))
        x = compose_symmetric(p)
        solved = basis_solve_n4(x)
        assert abs(solved[(1, 2)] - solved[(2, 1)]) < 1e-10
        assert abs(solved[(1, 3)] - solved[(3, 1)]) < 1e-10
        assert abs(solved[(2, 3)] - solved[(3, 2)]) < 1e-10


class TestClosedForms:
    def test_n3_zero_cases(self):
        z2 = Decomposition(
            3,
            (Factor(3, 2, 0.0, [1.0]), Factor(3, 3, 0.8, random_char(np.random.Generator(np.random.PCG64(17)), 2))),
            np.zeros(3),
            np.zeros(3),
            ASCENDING,
        )
        assert closed_form_j_n3(z2) == 0.0
        real_x = Decomposition(
            3,
            (Factor(3, 2, 0.5, [1.0]), Factor(3, 3, 0.8, [0.6, 0.8])),
            np.zeros(3),
            np.zeros(3),
            ASCENDING,
        )
        assert closed_form_j_n3(real_x) == 0.0

    def test_n3_matches_plaquette(self):
        rng = np.random.Generator(np.random.PCG64(18))
        for _ in range(20):
            t2, t3 = rng.uniform(0.1, 1.4, 2)
            x = random_char(rng, 2)
            d = Decomposition(
                3,
                (Factor(3, 2, t2, [1.0]), Factor(3, 3, t3, x)),
                np.zeros(3),
                np.zeros(3),
                ASCENDING,
            )
            j = closed_form_j_n3(d)
            t = plaquette_table(compose(d))
            assert abs(j - t.im((1, 2), (1, 2))) < 1e-13

    def test_n3_from_decompose(self):
        x = haar_random(3, 19)
        d = gauge_fix(reorder_chain(decompose(x), range(2, 4)))
        assert abs(closed_form_j_n3(d) - plaquette_table(x).im((1, 2), (1, 2))) < 1e-13

    def test_n3_requires_pinned_scalar(self):
        rng = np.random.Generator(np.random.PCG64(20))
        d = Decomposition(
            3,
            (Factor(3, 2, 0.5, [np.exp(0.3j)]), Factor(3, 3, 0.8, random_char(rng, 2))),
            np.zeros(3),
            np.zeros(3),
            ASCENDING,
        )
        with pytest.raises(DomainError):
            closed_form_j_n3(d)

    def test_n4_zero_cases(self):
        d = Decomposition(
            4,
            (
                Factor(4, 2, 0.4, [1.0]),
                Factor(4, 3, 0.9, [0.6, 0.8]),
                Factor(4, 4, 1.1, [0.48, 0.6, 0.64]),
            ),
            np.zeros(4),
            np.zeros(4),
            ASCENDING,
        )
        assert closed_forms_n4(d) == (0.0, 0.0)  # all phases zero
        rng = np.random.Generator(np.random.PCG64(21))
        d0 = Decomposition(
            4,
            (
                Factor(4, 2, 0.4, [1.0]),
                Factor(4, 3, 0.9, random_char(rng, 2)),
                Factor(4, 4, 0.0, random_char(rng, 3)),
            ),
            np.zeros(4),
            np.zeros(4),
            ASCENDING,
        )
        a, b = closed_forms_n4(d0)
        assert a == 0.0 and b == 0.0  # sin(theta_4) = 0

    def test_n4_matches_plaquettes(self):
        rng = np.random.Generator(np.random.PCG64(22))
        for _ in range(100):
            d = pinned_chain_n4(rng)
            t = plaquette_table(compose(d))
            f3434, f3424 = closed_forms_n4(d)
            assert abs(f3434 - t.im((3, 4), (3, 4))) < 1e-12
            assert abs(f3424 - t.im((3, 4), (2, 4))) < 1e-12

    def test_tables_depend_only_on_moduli_and_omegas(self):
        rng = np.random.Generator(np.random.PCG64(23))
        for _ in range(10):
            d = pinned_chain_n4(rng)
            base = plaquette_table(compose(d))
            other = apply_symmetry(d, "S1", rng.uniform(-math.pi, math.pi))
            other = apply_symmetry(other, "S2", rng.uniform(-math.pi, math.pi))
            # same component moduli, same omegas, different raw phases
            for k in (3, 4):
                assert max_abs_diff(np.abs(other.factor(k).char), np.abs(d.factor(k).char)) < 1e-15
            assert base.max_abs_diff(plaquette_table(compose(other))) < 1e-12


class TestTriangleAreas:
    def test_identity(self):
        assert all(area == 0.0 for _, area in triangle_areas(np.eye(4)))

    def test_n3_all_equal_half_j(self):
        for seed in range(10):
            x = haar_random(3, 700 + seed)
            j = plaquette_table(x).im((1, 2), (1, 2))
            areas = triangle_areas(x)
            assert len(areas) == 6
            for _, area in areas:
                assert abs(area - abs(j) / 2) < 1e-13

    def test_pair_labels(self):
        labels = [pair for pair, _ in triangle_areas(np.eye(3))]
        assert ("rows", 1, 2) in labels and ("cols", 2, 3) in labels


class TestZeroTexture:
    def test_constructed_texture_report(self):
        rng = np.random.Generator(np.random.PCG64(24))
        for _ in range(10):
            v = texture_matrix(rng)
            rep = zero_texture_analysis(v)
            assert rep.vanishing_count == 19
            assert abs(rep.J_prime / rep.J - rep.ratio) < 1e-11
            assert abs(rep.J - rep.J_closed_form) < 1e-11
            assert abs(rep.J_prime - rep.J_prime_closed_form) < 1e-11

    def test_sign_pattern_chains(self):
        rng = np.random.Generator(np.random.PCG64(25))
        v = texture_matrix(rng)
        rep = zero_texture_analysis(v)
        expected_j = {
            ((1, 2), (1, 2)): "+J",
            ((1, 2), (1, 3)): "-J",
            ((1, 2), (2, 3)): "+J",
            ((1, 3), (1, 2)): "-J",
            ((1, 3), (1, 3)): "+J",
            ((1, 3), (2, 3)): "-J",
            ((2, 3), (1, 2)): "+J",
            ((2, 3), (1, 3)): "-J",
        }
        expected_jp = {
            ((2, 3), (2, 4)): "-J'",
            ((2, 3), (3, 4)): "+J'",
            ((2, 4), (2, 3)): "-J'",
            ((2, 4), (2, 4)): "+J'",
            ((2, 4), (3, 4)): "-J'",
            ((3, 4), (2, 3)): "+J'",
            ((3, 4), (2, 4)): "-J'",
            ((3, 4), (3, 4)): "+J'",
        }
        for key, label in expected_j.items():
            assert rep.sign_pattern[key] == label, key
        for key, label in expected_jp.items():
            assert rep.sign_pattern[key] == label, key
        assert rep.sign_pattern[((2, 3), (2, 3))] == "J+J'"
        zero_labels = [l for l in rep.sign_pattern.values() if l == "0"]
        assert len(zero_labels) == 19

    def test_center_panel_is_sum(self):
        rng = np.random.Generator(np.random.PCG64(26))
        v = texture_matrix(rng)
        rep = zero_texture_analysis(v)
        row_order = [i - 1 for i in rep.row_map]
        col_order = [i - 1 for i in rep.col_map]
        std = v[np.ix_(row_order, col_order)]
        t = plaquette_table(std)
        assert abs(t.im((2, 3), (2, 3)) - (rep.J + rep.J_prime)) < 1e-12

    def test_modulus_ratios(self):
        rng = np.random.Generator(np.random.PCG64(27))
        v = texture_matrix(rng)
        rep = zero_texture_analysis(v)
        target = (rep.J_prime / rep.J) ** 2
        for value in rep.modulus_ratio_sq.values():
            assert abs(value - target) < 1e-11

    def test_triangle_areas_split(self):
        rng = np.random.Generator(np.random.PCG64(28))
        v = texture_matrix(rng)
        rep = zero_texture_analysis(v)
        assert len(rep.triangle_areas) == 8
        half_j = abs(rep.J) / 2
        half_jp = abs(rep.J_prime) / 2
        j_count = sum(1 for _, a in rep.triangle_areas if abs(a - half_j) < 1e-11)
        jp_count = sum(1 for _, a in rep.triangle_areas if abs(a - half_jp) < 1e-11)
        assert j_count >= 4 and jp_count >= 4 and j_count + jp_count >= 8

    def test_decomposed_moduli_relations(self):
        # |y1| = |x2| and |y2| = |x1| for the re-extracted chain of the
        # calculation frame, y3 = 0.
        rng = np.random.Generator(np.random.PCG64(29))
        v = texture_matrix(rng)  # zeros already at (3,4),(4,3)
        chain = gauge_fix(reorder_chain(decompose(v), range(2, 5)))
        x = np.abs(chain.factor(3).char)
        y = np.abs(chain.factor(4).char)
        assert abs(y[0] - x[1]) < 1e-12
        assert abs(y[1] - x[0]) < 1e-12
        assert y[2] < 1e-12

    def test_permuted_placements(self):
        rng = np.random.Generator(np.random.PCG64(30))
        v = texture_matrix(rng)
        for _ in range(5):
            rp = rng.permutation(4)
            cp = rng.permutation(4)
            w = v[np.ix_(rp, cp)]
            rep = zero_texture_analysis(w)
            assert rep.vanishing_count == 19
            assert abs(rep.J - rep.J_closed_form) < 1e-11
            assert abs(rep.J_prime - rep.J_prime_closed_form) < 1e-11
            assert abs(rep.J_prime / rep.J - rep.ratio) < 1e-11

    def test_rejects_wrong_zero_count(self):
        with pytest.raises(DomainError):
            zero_texture_analysis(haar_random(4, 31))  # no zeros at all

    def test_rejects_aligned_zeros(self):
        x = np.eye(4, dtype=complex)  # many zeros sharing rows/columns
        with pytest.raises(DomainError):
            zero_texture_analysis(x)

    def test_rejects_wrong_order(self):
        with pytest.raises(DomainError):
            zero_texture_analysis(haar_random(3, 32))


class TestCountIndependentPhases:
    def test_reference_values(self):
        assert count_independent_phases(3) == 1
        assert count_independent_phases(4) == 3
        assert count_independent_phases(5) == 6

    def test_small_orders(self):
        assert count_independent_phases(1) == 0
        assert count_independent_phases(2) == 0

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            count_independent_phases(0)

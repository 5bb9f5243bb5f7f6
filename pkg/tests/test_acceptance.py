"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""
import time

import numpy as np

from holonet.gerbe import flatten, gerbe_from_section, validate_gerbe
from holonet.lifting import (
    LiftProblem,
    ScalarPhasesFiber,
    lift_search,
    lift_via_det_section,
)
from holonet.netbundle import (
    HolonomyRep,
    QuotientHolonomyRep,
    chern_c1,
    equivalent,
    holonomy,
    morphism_dim,
    reconstruct,
    validate_cocycle,
)
from holonet.poset import path_frame, pi1_presentation
from holonet.tannaka import (
    check_symmetry_axioms,
    conjugate_solution,
    dual_recover_in_ambient,
    intertwiner_basis,
    normalizer_membership,
)
from holonet.unitary import (
    SpecialFiber,
    group_closure,
    max_norm,
    scalar_phase_group,
)

from helpers import (
    FREE_CORPUS,
    I2,
    PAULI_X,
    PAULI_Z,
    projective_plane,
    pseudocircle,
    random_unitary,
)


def report(number, text):
    print(f"criterion {number}: PASS ({text})")


def test_criterion_1_pseudocircle_fundamental_group():
    start = time.perf_counter()
    pres = pi1_presentation(pseudocircle(), "a")
    elapsed = time.perf_counter() - start
    assert pres.num_generators == 1
    assert pres.num_relations == 0
    assert elapsed < 1.0
    report(1, f"pi1 = free of rank 1 in {elapsed:.3f}s")


def test_criterion_2_reconstruction_round_trip():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    trips = 0
    for _, build, _ in FREE_CORPUS:
        poset = build()
        base = poset.elements[0]
        frame = path_frame(poset, base)
        pres = pi1_presentation(poset, base)
        for k in range(20):
            d = 1 + k % 3
            images = {g: random_unitary(d, rng) for g in pres.alive}
            rep = HolonomyRep(pres, images, d)
            z = reconstruct(rep, frame)
            assert validate_cocycle(z, 1e-9).ok
            back = holonomy(z, frame)
            for g in pres.alive:
                assert max_norm(back.image(g) - images[g]) <= 1e-8
            trips += 1
    elapsed = time.perf_counter() - start
    assert trips >= 100
    assert elapsed < 30.0
    report(2, f"{trips} round trips within 1e-8 in {elapsed:.2f}s")


def test_criterion_3_chern_class_counterexample():
    pres = pi1_presentation(pseudocircle(), "a")
    (g,) = pres.alive
    rep_triv = HolonomyRep(pres, {g: I2}, 2)
    rep_diag = HolonomyRep(pres, {g: np.diag([1j, -1j])}, 2)
    assert abs(chern_c1(rep_triv)[g] - 1.0) <= 1e-12
    assert abs(chern_c1(rep_diag)[g] - 1.0) <= 1e-12
    verdict = equivalent(rep_triv, rep_diag)
    assert verdict.witness is None and verdict.certified_distinct
    assert morphism_dim(rep_triv, rep_diag) == 0

    rng = np.random.default_rng(3)
    for _ in range(20):
        phases1 = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
        phases2 = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
        block = HolonomyRep(pres, {g: np.diag(np.concatenate([phases1, phases2]))}, 4)
        first = HolonomyRep(pres, {g: np.diag(phases1)}, 2)
        second = HolonomyRep(pres, {g: np.diag(phases2)}, 2)
        product = chern_c1(first)[g] * chern_c1(second)[g]
        assert abs(chern_c1(block)[g] - product) <= 1e-10
    report(3, "equal c1, certified inequivalent; c1 multiplicative on 20 joins")


def test_criterion_4_su_lifting_by_determinant_section():
    from holonet.lifting import relator_defect

    pres = pi1_presentation(pseudocircle(), "a")
    assert pres.relators == ()  # free fundamental group
    rng = np.random.default_rng(4)
    for k in range(20):
        d = 2 + k % 3
        z = np.exp(1j * rng.uniform(0, 2 * np.pi))
        problem = LiftProblem.from_presentation(
            pres, {pres.alive[0]: z}, SpecialFiber(d))
        result = lift_via_det_section(problem)
        assert result.lifted
        lift = result.images[0]
        assert abs(np.linalg.det(lift) - z) <= 1e-12
        defects = relator_defect(problem, result.images)
        assert all(max_norm(m - np.eye(d)) <= 1e-9 for m in defects.values())
    report(4, "20 determinant-section lifts with det residual <= 1e-12")


def test_criterion_5_pauli_obstruction():
    start = time.perf_counter()
    problem = LiftProblem(
        2,
        [(1, 1), (2, 2), (1, 2, -1, -2)],
        [PAULI_X, PAULI_Z],
        ScalarPhasesFiber(2, 8),
    )
    result = lift_search(problem)
    elapsed = time.perf_counter() - start
    assert result.status == "no-lift-in-search-space"
    assert result.defects_complete
    commutator_defects = result.defects[2]
    assert len(commutator_defects) == 1
    assert max_norm(commutator_defects[0] + I2) <= 1e-10
    assert elapsed < 5.0
    report(5, f"no lift over 8^2 phase choices, commutator defect -1, {elapsed:.2f}s")


def test_criterion_6_intertwiner_dimensions():
    s12 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    s123 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    s3 = group_closure([s12, s123], 10)
    assert intertwiner_basis(s3, 1, 0).dim == 1
    assert intertwiner_basis(s3, 2, 0).dim == 2
    assert intertwiner_basis(s3, 1, 1).dim == 2
    assert intertwiner_basis(s3, 2, 2).dim == 14

    signs = group_closure([-I2], 4)
    for r in range(4):
        for s in range(4):
            expected = 0 if (r + s) % 2 else 2 ** (r + s)
            assert intertwiner_basis(signs, r, s).dim == expected
    report(6, "S3 dims (1, 2, 2, 14) and sign-group parity pattern exact")


def test_criterion_7_symmetry_axioms():
    for d in (2, 3):
        result = check_symmetry_axioms(d, 3)
        assert result.flip_involution_exact
        assert result.unit_exact
        assert result.tensor_law_exact
        assert result.naturality_residual <= 1e-10
    report(7, "flip identities exact for d in {2, 3}, r,s,t <= 3; naturality <= 1e-10")


def test_criterion_8_conjugate_equations():
    s12 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    s123 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    groups = {1: None, 2: group_closure([-I2], 4), 3: group_closure([s12, s123], 10)}
    for d in (1, 2, 3):
        _, result = conjugate_solution(d, groups[d])
        assert result.left_residual <= 1e-12
        assert result.right_residual <= 1e-12
        assert result.invariance_residual <= 1e-12
    report(8, "conjugate contractions exact for d in {1, 2, 3} with invariance")


def test_criterion_9_tannaka_dual_recovery():
    signs = group_closure([-I2], 4)
    pauli = group_closure([PAULI_X, PAULI_Z, 1j * I2], 20)
    assert len(pauli) == 16
    recovered = dual_recover_in_ambient(signs, pauli, rmax=3)
    assert len(recovered) == 2
    assert recovered.contains(I2) and recovered.contains(-I2)
    # the central sign group is normalized by the whole Pauli group
    for e in pauli.elements:
        assert normalizer_membership(signs, e, rmax=1)
    report(9, "dual recovers exactly {+-1}; normalizer meets all 16 Pauli elements")


def test_criterion_10_gerbe_layer():
    signs = group_closure([-I2], 4)
    z4 = scalar_phase_group(2, 4)
    corpus = [
        (pseudocircle, PAULI_X, signs),
        (pseudocircle, np.exp(0.3j) * PAULI_Z, scalar_phase_group(2, 8)),
        (projective_plane, PAULI_X, signs),
        (projective_plane, 1j * PAULI_X, signs),
        (projective_plane, np.exp(1j * np.pi / 4) * PAULI_X, z4),
    ]
    agreements = 0
    free_flattened = 0
    for build, image, fiber in corpus:
        poset = build()
        pres = pi1_presentation(poset, "a")
        frame = path_frame(poset, "a")
        images = {g: image for g in pres.alive}
        qrep = QuotientHolonomyRep(pres, images, 2, fiber)
        cochain = gerbe_from_section(qrep, frame)
        result = validate_gerbe(cochain, 1e-9)
        assert result.ok
        assert result.crossed_module_residual <= 1e-9
        pair = flatten(cochain)
        lift = lift_search(LiftProblem.from_presentation(pres, images, fiber))
        assert lift.lifted == (pair is not None)
        agreements += 1
        if pres.num_relations == 0:
            assert pair is not None
            free_flattened += 1
    assert free_flattened >= 2
    report(10, f"{agreements} gerbes validated; flatten verdicts match lift search")

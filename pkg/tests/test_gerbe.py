import numpy as np

from holonet.gerbe import GerbeCochain, flatten, gerbe_from_section, validate_gerbe
from holonet.lifting import LiftProblem, lift_search
from holonet.netbundle import (
    HolonomyRep,
    QuotientHolonomyRep,
    reconstruct,
    transport,
    validate_cocycle,
)
from holonet.poset import (
    Path,
    PathFrame,
    compose,
    loop_of_generator,
    path_frame,
    pi1_presentation,
    reverse,
)
from holonet.unitary import (
    SpecialFiber,
    fiber_same_coset,
    group_closure,
    max_norm,
    scalar_phase_group,
)

from helpers import (
    HADAMARD,
    I2,
    PAULI_X,
    PAULI_Z,
    projective_plane,
    pseudocircle,
    random_special_unitary,
    theta,
)


def sign_group():
    return group_closure([-I2], 4)


def pseudocircle_quotient(image, fiber):
    p = pseudocircle()
    pres = pi1_presentation(p, "a")
    (g,) = pres.alive
    return QuotientHolonomyRep(pres, {g: image}, 2, fiber), path_frame(p, "a")


def rp2_quotient(image, fiber):
    p = projective_plane()
    pres = pi1_presentation(p, "a")
    (g,) = pres.alive
    return QuotientHolonomyRep(pres, {g: image}, 2, fiber), path_frame(p, "a")


# --- validation ---------------------------------------------------------------

def test_strict_cocycle_is_valid_gerbe_with_trivial_coboundary():
    qrep, frame = pseudocircle_quotient(PAULI_Z, sign_group())
    rep = HolonomyRep(qrep.presentation, qrep.images, 2)
    z = reconstruct(rep, frame)
    cochain = GerbeCochain(z.poset, 2, sign_group(), z.assignment)
    report = validate_gerbe(cochain)
    assert report.ok
    for c in z.poset.simplices2():
        assert max_norm(cochain.coboundary(c) - I2) <= 1e-12


def test_su2_gerbe_coboundary_has_unit_determinant():
    rng = np.random.default_rng(14)
    p = pseudocircle()
    pres = pi1_presentation(p, "a")
    frame = path_frame(p, "a")
    (g,) = pres.alive
    value = np.diag([np.exp(0.8j), 1.0]) @ random_special_unitary(2, rng)
    qrep = QuotientHolonomyRep(pres, {g: value}, 2, SpecialFiber(2))
    cochain = gerbe_from_section(qrep, frame)
    report = validate_gerbe(cochain)
    assert report.ok
    for c in p.simplices2():
        assert abs(np.linalg.det(cochain.coboundary(c)) - 1.0) <= 1e-9


def test_value_outside_normalizer_is_flagged():
    p = pseudocircle()
    b = next(x for x in p.simplices1() if not x.degenerate)
    cochain = GerbeCochain(p, 2, group_closure([PAULI_Z], 4), {b: HADAMARD})
    report = validate_gerbe(cochain)
    assert not report.ok
    assert any(bad == b for bad, _ in report.normalizer_violations)


def test_crossed_module_identity_is_automatic():
    qrep, frame = rp2_quotient(np.exp(1j * np.pi / 4) * PAULI_X,
                               scalar_phase_group(2, 4))
    cochain = gerbe_from_section(qrep, frame)
    report = validate_gerbe(cochain)
    assert report.ok
    assert report.crossed_module_residual <= 1e-9


# --- construction from quotient data -------------------------------------------

def test_from_section_strict_input_gives_trivial_coboundary():
    # free fundamental group: the section is an honest representation
    qrep, frame = pseudocircle_quotient(PAULI_X, sign_group())
    cochain = gerbe_from_section(qrep, frame)
    assert validate_gerbe(cochain).ok
    for c in cochain.poset.simplices2():
        assert max_norm(cochain.coboundary(c) - I2) <= 1e-12


def test_from_section_quotient_data_has_nontrivial_coboundary():
    qrep, frame = rp2_quotient(1j * PAULI_X, sign_group())
    cochain = gerbe_from_section(qrep, frame)
    report = validate_gerbe(cochain)
    assert report.ok
    nontrivial = [
        c for c in cochain.poset.simplices2()
        if max_norm(cochain.coboundary(c) - I2) > 1e-9
    ]
    assert nontrivial
    for c in nontrivial:
        assert sign_group().contains(cochain.coboundary(c))


def test_from_section_tree_values_are_identity():
    qrep, frame = pseudocircle_quotient(PAULI_X, sign_group())
    cochain = gerbe_from_section(qrep, frame)
    for b in frame.tree:
        assert max_norm(cochain.value(b) - I2) == 0.0


def test_base_change_conjugates_the_cochain():
    # rebuild the cochain on a frame translated to a new base: the two
    # cochains differ by a fixed inner isomorphism
    qrep, frame = pseudocircle_quotient(np.exp(1j * np.pi / 4) * PAULI_X,
                                        scalar_phase_group(2, 4))
    cochain = gerbe_from_section(qrep, frame)
    p = cochain.poset
    new_base = "c"
    delta = reverse(frame.routes[new_base])  # a -> c
    translated = PathFrame(
        new_base,
        {o: compose(delta, frame.routes[o]) for o in p.elements},
    )
    conjugator = cochain.transport(delta)
    for b in p.simplices1():
        loop = compose(
            translated.routes[b.d0],
            compose(Path(b.d1, ((b, 1),)), reverse(translated.routes[b.d1])),
        )
        rebased = cochain.transport(loop)
        expected = conjugator @ cochain.transport(
            compose(frame.routes[b.d0],
                    compose(Path(b.d1, ((b, 1),)), reverse(frame.routes[b.d1])))
        ) @ conjugator.conj().T
        assert max_norm(rebased - expected) <= 1e-12


# --- flattening -----------------------------------------------------------------

def test_trivial_gerbe_flattens_with_identity_pair():
    qrep, frame = pseudocircle_quotient(PAULI_X, sign_group())
    cochain = gerbe_from_section(qrep, frame)
    pair = flatten(cochain)
    assert pair is not None
    for o, v in pair.vertex_gauge.items():
        assert max_norm(v - I2) <= 1e-12
    assert not pair.fiber_correction


def test_free_pi1_gerbes_always_flatten():
    rng = np.random.default_rng(21)
    for build in (pseudocircle, theta):
        p = build()
        pres = pi1_presentation(p, p.elements[0])
        frame = path_frame(p, p.elements[0])
        images = {}
        for g in pres.alive:
            phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
            images[g] = phase * (PAULI_X if rng.integers(2) else PAULI_Z)
        qrep = QuotientHolonomyRep(pres, images, 2, scalar_phase_group(2, 8))
        cochain = gerbe_from_section(qrep, frame)
        assert validate_gerbe(cochain).ok
        assert flatten(cochain) is not None


def test_flatten_verifies_the_pair_identity():
    qrep, frame = rp2_quotient(PAULI_X, sign_group())
    cochain = gerbe_from_section(qrep, frame)
    pair = flatten(cochain)
    assert pair is not None
    z = pair.cocycle
    assert validate_cocycle(z).ok
    eye = np.eye(2, dtype=complex)
    for b in cochain.poset.simplices1():
        correction = pair.fiber_correction.get(b, eye)
        rebuilt = (pair.vertex_gauge[b.d0] @ correction @ cochain.value(b)
                   @ pair.vertex_gauge[b.d1].conj().T)
        assert max_norm(rebuilt - z.value(b)) <= 1e-9
        assert sign_group().contains(correction)


def test_flatten_preserves_quotient_holonomy():
    qrep, frame = rp2_quotient(PAULI_X, sign_group())
    cochain = gerbe_from_section(qrep, frame)
    pair = flatten(cochain, base="a")
    pres = qrep.presentation
    for g in pres.alive:
        loop = loop_of_generator(pres, frame, g)
        flat_h = transport(pair.cocycle, loop)
        original_h = cochain.transport(loop)
        assert fiber_same_coset(sign_group(), flat_h, original_h, 1e-9)


def test_obstructed_gerbes_do_not_flatten():
    cases = [
        (1j * PAULI_X, sign_group()),
        (np.exp(1j * np.pi / 4) * PAULI_X, scalar_phase_group(2, 4)),
    ]
    for image, fiber in cases:
        qrep, frame = rp2_quotient(image, fiber)
        cochain = gerbe_from_section(qrep, frame)
        assert validate_gerbe(cochain).ok
        assert flatten(cochain) is None


def test_flatten_agrees_with_lift_search_on_corpus():
    corpus = [
        (pseudocircle, PAULI_X, sign_group()),
        (pseudocircle, np.exp(0.3j) * HADAMARD, scalar_phase_group(2, 8)),
        (projective_plane, PAULI_X, sign_group()),
        (projective_plane, 1j * PAULI_X, sign_group()),
        (projective_plane, np.exp(1j * np.pi / 4) * PAULI_X, scalar_phase_group(2, 4)),
    ]
    for build, image, fiber in corpus:
        p = build()
        pres = pi1_presentation(p, "a")
        frame = path_frame(p, "a")
        images = {g: image for g in pres.alive}
        qrep = QuotientHolonomyRep(pres, images, 2, fiber)
        cochain = gerbe_from_section(qrep, frame)
        problem = LiftProblem.from_presentation(pres, images, fiber)
        lift = lift_search(problem)
        pair = flatten(cochain)
        assert lift.lifted == (pair is not None)


def test_su_gerbe_flattens_by_determinant_section():
    rng = np.random.default_rng(33)
    p = pseudocircle()
    pres = pi1_presentation(p, "a")
    frame = path_frame(p, "a")
    (g,) = pres.alive
    value = np.diag([np.exp(1.1j), 1.0]) @ random_special_unitary(2, rng)
    qrep = QuotientHolonomyRep(pres, {g: value}, 2, SpecialFiber(2))
    cochain = gerbe_from_section(qrep, frame)
    pair = flatten(cochain)
    assert pair is not None
    assert validate_cocycle(pair.cocycle).ok
    loop = loop_of_generator(pres, frame, g)
    flat_h = transport(pair.cocycle, loop)
    assert abs(np.linalg.det(flat_h) - np.linalg.det(value)) <= 1e-9

import pytest
from fractions import Fraction as Q

from klrb import fmod, hecke
from klrb.fmod import GradedModule, induce_F, modules_isomorphic_ungraded
from klrb.ground import SingularDenominator
from klrb.hecke import (DegenerateParameter, EigenvalueOutsideWindow,
                        HeckeFileError, HeckeModule, HeckeParams,
                        ParameterMismatch, check_Ei_compat,
                        hecke_from_text, hecke_to_text, intertwiner,
                        inverse_transport, transport, transport_B,
                        transport_C, verify_hecke)
from klrb.linalg import Mat
from klrb.quiver import DimVector, build_from_hecke_C


def test_params_validation():
    with pytest.raises(DegenerateParameter):
        HeckeParams("B", 1, q=2)
    with pytest.raises(DegenerateParameter):
        HeckeParams("C", 2, q0=-1, q1=3)
    p = HeckeParams("B", 2, q=3)
    assert p.q == 3


def test_parameter_quiver_consistency(window_q2):
    with pytest.raises(ParameterMismatch):
        transport(fmod.GradedModule.trivial(window_q2), HeckeParams("B", 3, q=2))
    with pytest.raises(ParameterMismatch):
        transport(fmod.GradedModule.trivial(window_q2), HeckeParams("B", 2, q=5))


def test_rank1_classification(window_q2, params_q2, crystal_q2):
    """The three simples at m = 1 transport onto the known classification."""
    q = window_q2
    seen = []
    for w in crystal_q2.nodes:
        M = w.module
        if M.m != 1:
            continue
        H = transport(M, params_q2)
        assert verify_hecke(H, params_q2).ok()
        if M.dim() == 1:
            seen.append((H.X[0][0, 0], H.T[0][0, 0]))
        else:
            seen.append("2dim")
    qv = Q(2)
    assert (qv, qv) in seen                 # X1 = q with T0 = q
    assert (1 / qv, -1 / qv) in seen        # X1 = 1/q with T0 = -1/q
    assert "2dim" in seen
    assert len(seen) == 3                   # and nothing else


def test_rank1_two_dim_matrix_matches_classification(window_q2, params_q2, crystal_q2):
    """The 2-dim simple transports, after a diagonal change of basis, to the
    explicit matrix with entries -i^2 a/b, a^2 - b^2/i^2, -i^2/b^2, a/b."""
    M = next(w.module for w in crystal_q2.nodes
             if w.module.m == 1 and w.module.dim() == 2)
    H = transport(M, params_q2)
    i = H.X[0][0, 0]
    assert H.X[0] == Mat([[i, 0], [0, 1 / i]])
    a = Q(2) - Q(1, 2)
    b = 1 - i * i
    target = Mat([[-i * i * a / b, a * a - b * b / (i * i)],
                  [-i * i / (b * b), a / b]])
    T = H.T[0]
    assert T[0, 0] == target[0, 0] and T[1, 1] == target[1, 1]
    assert T[0, 1] * T[1, 0] == target[0, 1] * target[1, 0]
    s = target[1, 0] / T[1, 0]
    D = Mat([[1, 0], [0, s]])
    assert D @ T @ D.inverse() == target
    assert D @ H.X[0] @ D.inverse() == H.X[0]


def test_transport_verifies_on_crystal(window_q2, params_q2, crystal_q2):
    for w in crystal_q2.nodes:
        if w.module.m == 0:
            continue
        H = transport(w.module, params_q2)
        rep = verify_hecke(H, params_q2)
        assert rep.ok(), rep.render()


def test_negative_control_perturbed_T0(window_q2, params_q2, crystal_q2):
    M = next(w.module for w in crystal_q2.nodes if w.module.m == 1)
    H = transport(M, params_q2)
    bad = HeckeModule("B", H.m, H.X,
                      [H.T[0] + Mat.identity(H.dim)] + H.T[1:])
    rep = verify_hecke(bad, params_q2)
    assert any(t.startswith("(d)") for t in rep.failures)


def test_inverse_transport_roundtrip(window_q2, params_q2, crystal_q2):
    for w in crystal_q2.nodes:
        M = w.module
        if M.m == 0:
            continue
        H = transport(M, params_q2)
        N = inverse_transport(H, params_q2, window_q2)
        assert fmod.validate(N).ok()
        assert sorted(N.blocks) == sorted(M.blocks)
        assert modules_isomorphic_ungraded(M, N)
        # characters agree after forgetting the grading
        for s in M.blocks:
            assert len(N.blocks[s]) == len(M.blocks[s])


def test_inverse_transport_radical_series_correspond(window_q2, params_q2):
    M = induce_F(fmod.GradedModule.trivial(window_q2), "2")  # not semisimple
    H = transport(M, params_q2)
    N = inverse_transport(H, params_q2, window_q2)

    def rad_series(mod):
        dims = [mod.dim()]
        cur = mod
        while cur.dim():
            sub = fmod.radical_submodule(cur)
            if sub.dim() == 0:
                break
            cur = fmod._sub_to_module(cur, sub)
            dims.append(cur.dim())
        return dims

    assert rad_series(M) == rad_series(N) == [2, 1]


def test_inverse_transport_rejects_foreign_spectrum(window_q2, params_q2):
    H = HeckeModule("B", 1, [Mat([[Q(7)]])], [Mat([[Q(2)]])])
    with pytest.raises(EigenvalueOutsideWindow):
        inverse_transport(H, params_q2, window_q2)


def test_example_6_8c_matrices_invert_to_the_2dim_simple(window_q2, params_q2, crystal_q2):
    i = Q(8)
    a = Q(2) - Q(1, 2)
    b = 1 - i * i
    X1 = Mat([[i, 0], [0, 1 / i]])
    T0 = Mat([[-i * i * a / b, a * a - b * b / (i * i)],
              [-i * i / (b * b), a / b]])
    H = HeckeModule("B", 1, [X1], [T0])
    assert verify_hecke(H, params_q2).ok()
    N = inverse_transport(H, params_q2, window_q2)
    M = next(w.module for w in crystal_q2.nodes
             if w.module.m == 1 and w.module.dim() == 2)
    assert modules_isomorphic_ungraded(M, N)


def test_intertwiner_property(window_q2, params_q2, crystal_q2):
    M = next(w.module for w in crystal_q2.nodes
             if w.module.m == 1 and w.module.dim() == 2)
    H = transport(M, params_q2)
    phi0 = intertwiner(H, params_q2, 0)
    assert phi0 @ H.X[0].inverse() @ phi0.inverse() == H.X[0]
    # pick a rank-2 module whose blocks avoid the p^2-linked singular locus
    M2 = next(w.module for w in crystal_q2.nodes
              if w.module.m == 2 and w.module.nu == DimVector.parse("8:2,1/8:2"))
    H2 = transport(M2, params_q2)
    phi1 = intertwiner(H2, params_q2, 1)
    assert phi1 @ H2.X[0] @ phi1.inverse() == H2.X[1]


def test_intertwiner_singular_denominator(params_q2):
    # X_2 = p^2 X_1 scalar puts the module on the singular locus of phi_1
    H = HeckeModule("B", 2, [Mat([[Q(1, 2)]]), Mat([[Q(2)]])],
                    [Mat([[Q(2)]]), Mat([[Q(2)]])])
    with pytest.raises(SingularDenominator):
        intertwiner(H, params_q2, 1)
    # X_1 = q scalar makes the phi_0 denominator vanish
    H0 = HeckeModule("B", 1, [Mat([[Q(2)]])], [Mat([[Q(2)]])])
    with pytest.raises(SingularDenominator):
        intertwiner(H0, params_q2, 0)


def test_Ei_compatibility(window_q2, params_q2, crystal_q2):
    for w in crystal_q2.nodes:
        if w.module.m == 0 or w.module.m > 2:
            continue
        rep = check_Ei_compat(w.module, params_q2)
        assert rep.ok(), rep.render()
    zero = GradedModule.zero(window_q2, DimVector.parse("2:1,1/2:1"))
    H = transport(zero, params_q2)
    assert H.is_zero()


def test_type_C_transport_and_cases():
    qc = build_from_hecke_C(["3", "1/3", "5", "1/5", "-3", "-1/3"], 2, 3, 5)
    params = HeckeParams("C", 2, q0=3, q1=5)
    g = fmod.build_crystal(qc, 1)
    count = 0
    for w in g.nodes:
        if w.module.m != 1:
            continue
        H = transport_C(w.module, params)
        assert verify_hecke(H, params).ok(), verify_hecke(H, params).render()
        count += 1
    assert count >= 5


def test_type_C_doubled_weight_branch():
    qc = build_from_hecke_C(["3", "1/3"], 2, -3, 3)
    assert qc.weight("3") == 2
    params = HeckeParams("C", 2, q0=-3, q1=3)
    g = fmod.build_crystal(qc, 2)
    for w in g.nodes:
        if w.module.m == 0:
            continue
        H = transport_C(w.module, params)
        assert verify_hecke(H, params).ok(), verify_hecke(H, params).render()


def test_specialization_agrees_with_B(window_q2, params_q2, crystal_q2):
    paramsC = HeckeParams("C", 2, q0=2, q1=2)
    for w in crystal_q2.nodes:
        if w.module.m == 0:
            continue
        HB = transport_B(w.module, params_q2)
        HC = transport_C(w.module, paramsC)
        assert all(a == b for a, b in zip(HB.X, HC.X))
        assert all(a == b for a, b in zip(HB.T, HC.T))


def test_hecke_file_roundtrip(window_q2, params_q2, crystal_q2):
    M = next(w.module for w in crystal_q2.nodes if w.module.m == 2)
    H = transport(M, params_q2)
    H2 = hecke_from_text(hecke_to_text(H))
    assert all(a == b for a, b in zip(H.X, H2.X))
    assert all(a == b for a, b in zip(H.T, H2.T))
    with pytest.raises(HeckeFileError):
        hecke_from_text("[hecke-module]\nfamily = B\n")


def _chain_module(quiver, vertex, depth):
    """F_i^depth(trivial): a valid module with nontrivially nilpotent kappa."""
    M = fmod.GradedModule.trivial(quiver)
    for _ in range(depth):
        M = induce_F(M, vertex)
    return M


def test_transport_with_nonnilpotent_free_kappa_B(window_q2, params_q2):
    """Regression: the rank-0 coefficient tables need the balanced series;
    modules where kappa^2 acts nontrivially catch any unbalanced choice."""
    M = _chain_module(window_q2, "8", 3)      # dim 48, kappa^2 != 0
    assert any(not (k @ k).is_zero()
               for table in M.kappa.values() for k in table.values())
    H = transport(M, params_q2)
    rep = verify_hecke(H, params_q2)
    assert rep.ok(), rep.render()
    N = inverse_transport(H, params_q2, window_q2)
    assert modules_isomorphic_ungraded(M, N)


def test_transport_with_nonnilpotent_free_kappa_C():
    qc = build_from_hecke_C(["3", "1/3"], 2, -3, 3)
    params = HeckeParams("C", 2, q0=-3, q1=3)
    M = _chain_module(qc, "3", 3)
    assert any(not (k @ k).is_zero()
               for table in M.kappa.values() for k in table.values())
    rep = verify_hecke(transport_C(M, params), params)
    assert rep.ok(), rep.render()
    qc2 = build_from_hecke_C(["3", "1/3", "5", "1/5", "-3", "-1/3"], 2, 3, 5)
    params2 = HeckeParams("C", 2, q0=3, q1=5)
    M2 = _chain_module(qc2, "5", 3)
    rep2 = verify_hecke(transport_C(M2, params2), params2)
    assert rep2.ok(), rep2.render()

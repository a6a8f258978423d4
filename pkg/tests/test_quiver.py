import random

import pytest

from klrb.ground import Poly, Q
from klrb.quiver import (DegenerateParameter, DimVector, ForbiddenVertex,
                         NotThetaStable, NotThetaSymmetric, OneLoop,
                         QuiverConfigError, ThetaFixedPoint, ThetaSequence,
                         build_abstract, build_from_hecke_B,
                         build_from_hecke_C, parse_quiver_config,
                         plain_sequences, sequences)
from klrb.weyl import EPS, SignedPerm, W


def test_window_arrows_theta_lambda(window_q2):
    q = window_q2
    # one arrow a -> b whenever a = p^2 b inside the window
    assert sorted(q.h) == [("1/2", "1/8"), ("2", "1/2"), ("8", "2")]
    assert q.theta("2") == "1/2"
    assert q.theta("8") == "1/8"
    assert {v: w for v, w in q.lam.items() if w} == {"2": 1}


def test_window_without_weight():
    q = build_from_hecke_B(["3", "1/3"], 2, 5)
    assert not q.h            # 4 * (1/3) is outside the window
    assert all(w == 0 for w in q.lam.values())


def test_builder_rejections():
    with pytest.raises(ForbiddenVertex):
        build_from_hecke_B(["1", "2", "1/2"], 2, 2)
    with pytest.raises(NotThetaStable):
        build_from_hecke_B(["2", "8"], 2, 2)
    with pytest.raises(DegenerateParameter):
        build_from_hecke_B(["2", "1/2"], 1, 2)
    with pytest.raises(DegenerateParameter):
        build_from_hecke_C(["2", "1/2"], 2, 1, 3)


def test_type_C_weight_rule():
    q = build_from_hecke_C(["3", "1/3"], 2, -3, 5)      # -q0 = 3 != q1
    assert {v: w for v, w in q.lam.items() if w} == {"3": 1}
    q2 = build_from_hecke_C(["3", "1/3"], 2, -3, 3)     # -q0 = q1 = 3: doubled
    assert {v: w for v, w in q2.lam.items() if w} == {"3": 2}
    q3 = build_from_hecke_C(["5", "1/5"], 2, 7, 11)     # no match
    assert all(w == 0 for w in q3.lam.values())


def test_abstract_builder_validates():
    # a 2-cycle with the swap involution is fine
    q = build_abstract(["a", "b"], {("a", "b"): 1, ("b", "a"): 1},
                       {"a": "b", "b": "a"}, {})
    assert q.arrows("a", "b") == 1
    with pytest.raises(ThetaFixedPoint):
        build_abstract(["a", "b"], {}, {"a": "a", "b": "b"}, {})
    with pytest.raises(OneLoop):
        build_abstract(["a", "b"], {("a", "a"): 1}, {"a": "b", "b": "a"}, {})


def test_cartan_and_Q_poly(window_q2):
    q = window_q2
    assert q.cartan("2", "2") == 2
    assert q.cartan("2", "8") == -1
    u, v = Poly.kappa(1, 2), Poly.kappa(2, 2)
    assert q.Q_poly("2", "8") == u - v           # h(2,8)=0, h(8,2)=1, sign +
    assert q.Q_poly("8", "2") == -(u - v)        # one arrow 8 -> 2 gives the sign
    assert q.Q_poly("2", "2").is_zero()
    assert q.Q_poly("2", "1/8") == Poly.one(2)   # non-adjacent
    # Q_(i,j)(u,v) = Q_(j,i)(v,u) on all pairs
    swap = [Poly.kappa(2, 2), Poly.kappa(1, 2)]
    for a in q.vertices:
        for b in q.vertices:
            assert q.Q_poly(a, b) == q.Q_poly(b, a).substitute(swap)


def test_sequences_enumeration(window_q2):
    q = window_q2
    nu = DimVector.parse("2:1,1/2:1")
    seqs = sequences(q, nu)
    assert [s.right for s in seqs] == [("1/2",), ("2",)]
    nu2 = DimVector.parse("2:2,1/2:2")
    assert len(sequences(q, nu2)) == 4
    empty = sequences(q, DimVector({}))
    assert len(empty) == 1 and empty[0].right == ()
    with pytest.raises(NotThetaSymmetric):
        sequences(q, DimVector.parse("2:1"))
    for s in sequences(q, nu2):
        assert s.content() == nu2
        full = s.full()
        for l in range(1, s.rank + 1):
            assert full[s.rank - l] == q.theta(full[s.rank + l - 1])


def test_plain_sequences(window_q2):
    got = plain_sequences(window_q2, DimVector.parse("2:2,8:1"))
    assert len(got) == 3


def test_act_sequence_preserves_membership(window_q2):
    q = window_q2
    nu = DimVector.parse("2:2,1/2:2")
    seqs = sequences(q, nu)
    keys = {s.right for s in seqs}
    rng = random.Random(9)
    for s in seqs:
        for _ in range(8):
            w = rng.choice(W(2).elements)
            assert s.act(w).right in keys
    # group action: (vw)(i) = v(w(i))
    for _ in range(40):
        v = rng.choice(W(2).elements)
        w = rng.choice(W(2).elements)
        s = rng.choice(seqs)
        assert s.act(w).act(v).right == s.act(v * w).right


def test_theta_sequence_entries(window_q2):
    s = ThetaSequence(("2", "8"), window_q2)
    assert s.entry(1) == "2" and s.entry(2) == "8"
    assert s.entry(0) == "1/2" and s.entry(-1) == "1/8"
    eps = SignedPerm.gen(EPS, 2)
    assert s.act(eps).right == ("1/2", "8")


def test_config_parsing_roundtrip(tmp_path, window_q2):
    text = "[hecke]\nfamily = B\nvalues = 2, 8, 1/2, 1/8\np = 2\nq = 2\n"
    q = parse_quiver_config(text)
    assert q.vertices == window_q2.vertices
    assert q.h == window_q2.h
    explicit = """
[vertices]
a
b
[arrows]
a -> b : 1
b -> a : 1
[theta]
a <-> b
[lambda]
a = 1
b = 0
"""
    q2 = parse_quiver_config(explicit)
    assert q2.weight("a") == 1 and q2.arrows("a", "b") == 1


def test_config_errors_carry_line_numbers():
    with pytest.raises(QuiverConfigError) as e:
        parse_quiver_config("[vertices]\na\n[arrows]\na => b\n")
    assert e.value.line == 4
    with pytest.raises(QuiverConfigError) as e:
        parse_quiver_config("stray\n")
    assert e.value.line == 1
    with pytest.raises(QuiverConfigError):
        parse_quiver_config("[hecke]\nvalues = 2, 1/2\np = 2\n")  # missing q

import pytest

from qchar import sl2
from qchar.cartan import build_diagram
from qchar.expansion import (
    INCONCLUSIVE,
    NOT_SPECIAL,
    SPECIAL_FM_CONSISTENT,
    QCharacter,
    expand_Li,
    fm_algorithm,
    generate_process,
    qchar_is_thin,
)
from qchar.monomials import (
    Monomial,
    a_monomial,
    divide_as_a_product,
    kr_highest,
    parse_monomial,
)

A1 = build_diagram("A", 1)
A2 = build_diagram("A", 2)
A3 = build_diagram("A", 3)
D4 = build_diagram("D", 4)


def test_expand_single_variable():
    m = Monomial.y(2, 5)
    char = expand_Li(A3, m, 2)
    assert char.terms == {m: 1, m * (a_monomial(A3, 2, 6) ** -1): 1}
    assert char.highest == m


def test_expand_no_content():
    m = parse_monomial("1_0 3_2")
    char = expand_Li(A3, m, 2)
    assert char.terms == {m: 1}


def test_expand_string_ladder():
    m = parse_monomial("2_0 2_2 2_4")
    char = expand_Li(A3, m, 2)
    assert char.multiplicity(m) == 1
    assert len(char) == 4  # length-3 string gives a 4-term ladder
    cur = m
    for power in (5, 3, 1):  # nested steps enter from the top down
        cur = cur * (a_monomial(A3, 2, power) ** -1)
        assert char.multiplicity(cur) == 1
    # the one-step interior descent lives in the standard cone below m,
    # not in this ladder (the enumeration tests pick it up there)
    assert m * (a_monomial(A3, 2, 1) ** -1) not in char


def test_expand_requires_node_dominance():
    with pytest.raises(ValueError):
        expand_Li(A3, parse_monomial("2_0^-1"), 2)
    # dominance is only needed at the expanded node
    m = parse_monomial("1_1 2_2^-1 3_5")
    assert expand_Li(A3, m, 1).multiplicity(m) == 1


def test_expand_matches_rank1_restriction():
    # restriction of the expansion to the node recovers the rank-1 character
    cases = [(A3, parse_monomial("2_0 2_2^2 2_6 1_3"), 2),
             (D4, parse_monomial("2_0 2_4 1_1"), 2),
             (A2, parse_monomial("1_0 1_2 2_1"), 1)]
    for c, m, i in cases:
        char = expand_Li(c, m, i)
        got = {}
        for mu, t in char.terms.items():
            restr = sl2.Sl2Monomial(mu.node_powers(i))
            got[restr] = got.get(restr, 0) + t
        expected = sl2.simple_qchar_sl2(sl2.Sl2Monomial(m.node_powers(i)))
        assert got == expected


def test_expand_scales_with_symmetrizer():
    # at a long node (r_i = 2) the ladder steps by q_i = q^2
    b2 = build_diagram("B", 2)
    m = Monomial.y(1, 0)
    char = expand_Li(b2, m, 1)
    assert char.terms == {m: 1, m * (a_monomial(b2, 1, 2) ** -1): 1}
    # two residue classes stay independent
    mm = parse_monomial("1_0 1_1")
    char = expand_Li(b2, mm, 1)
    assert len(char) == 4


def test_process_rank1_recovers_string_character():
    for k in (1, 2, 5):
        X = kr_highest(A1, 1, k, 0)
        trace = generate_process(A1, X)
        rep = fm_algorithm(A1, X)
        assert sorted(trace.chains, key=lambda m: m.key) == \
            sorted(rep.qchar.terms, key=lambda m: m.key)
        assert len(trace.chains) == k + 1
        assert not trace.partial


def test_process_counter_example():
    mp = parse_monomial("1_1 3_1 2_4")
    trace = generate_process(A3, mp)
    assert parse_monomial("1_3^-1 3_3^-1 2_2^2 2_4") in trace
    assert parse_monomial("2_2") in trace
    assert trace.replay(A3)
    # chains carry node-dominant roots only
    for chain in trace.chains.values():
        for step in chain:
            assert step.root.is_dominant([step.node])


def test_process_fork_example():
    m = parse_monomial("1_3 1_5 2_0")
    trace = generate_process(D4, m)
    for t in ["1_1 1_3 1_5 2_2^-1 3_1 4_1", "1_1 1_3 1_5 2_2 3_3^-1 4_3^-1",
              "1_1 1_3^2 1_5 2_4^-1", "1_1 1_3"]:
        assert parse_monomial(t) in trace
    assert m in trace and trace.chains[m] == ()
    assert trace.replay(D4)


def test_process_budget_flag():
    trace = generate_process(D4, parse_monomial("1_3 1_5 2_0"), budget=5)
    assert trace.partial


def test_process_subset_of_consistent_closure():
    cases = [(A2, Monomial.y(1, 0)), (A3, Monomial.y(2, 0)),
             (A3, kr_highest(A3, 1, 3, 0)), (D4, Monomial.y(2, 0))]
    for c, m in cases:
        rep = fm_algorithm(c, m)
        assert rep.verdict == SPECIAL_FM_CONSISTENT
        trace = generate_process(c, m)
        assert set(trace.chains) <= set(rep.qchar.terms)


def test_process_witnesses_against_start():
    m = parse_monomial("1_3 1_5 2_0")
    trace = generate_process(D4, m)
    for nu in trace.chains:
        assert divide_as_a_product(D4, nu, m) is not None


def test_fm_rank1_closed_forms():
    for k in range(1, 8):
        X = kr_highest(A1, 1, k, 0)
        rep = fm_algorithm(A1, X)
        assert rep.verdict == SPECIAL_FM_CONSISTENT
        got = {sl2.Sl2Monomial(m.node_powers(1)): t
               for m, t in rep.qchar.terms.items()}
        assert got == sl2.kr_qchar_sl2(k, 0)


def test_fm_counter_not_special():
    rep = fm_algorithm(A3, parse_monomial("1_1 3_1 2_4"))
    assert rep.verdict == NOT_SPECIAL
    assert rep.witness == parse_monomial("2_2")
    assert rep.witness.is_dominant()
    assert rep.chain
    # the chain ends at the witness and starts at the subject
    assert rep.chain[-1].result == rep.witness
    assert rep.chain[0].root == rep.subject


def test_fm_budget_inconclusive():
    rep = fm_algorithm(A3, kr_highest(A3, 2, 3, 0), budget=2)
    assert rep.verdict == INCONCLUSIVE
    assert "budget" in rep.diagnostic


def test_fm_fundamental_first_steps():
    # the ladder opens with the node's own root step, multiplicity one,
    # and every deeper monomial sits below a neighbor step after it
    for c in (A2, A3, build_diagram("A", 4)):
        for i in c.nodes:
            m = Monomial.y(i, 0)
            rep = fm_algorithm(c, m)
            assert rep.verdict == SPECIAL_FM_CONSISTENT
            first = m * (a_monomial(c, i, 1) ** -1)
            assert rep.qchar.multiplicity(first) == 1
            for mu in rep.qchar.terms:
                if mu in (m, first):
                    continue
                hooks = [first * (a_monomial(c, j, 2) ** -1)
                         for j in c.neighbors(i)]
                assert any(divide_as_a_product(c, mu, h) is not None
                           for h in hooks)


def test_fm_fundamental_duality():
    # negating powers and inverting maps the monomial set onto that of
    # another fundamental character
    for c, i in [(A2, 1), (A3, 2), (D4, 1), (D4, 2)]:
        rep = fm_algorithm(c, Monomial.y(i, 0))
        assert rep.verdict == SPECIAL_FM_CONSISTENT
        dual = {Monomial({(j, -s): -e for (j, s), e in m.items()}): t
                for m, t in rep.qchar.terms.items()}
        tops = [m for m in dual if m.is_dominant()]
        assert len(tops) == 1
        top = tops[0]
        assert len(top.key) == 1 and top.key[0][1] == 1
        dual_rep = fm_algorithm(c, top)
        assert dual_rep.verdict == SPECIAL_FM_CONSISTENT
        assert dual_rep.qchar.terms == dual


def test_fm_thin_families():
    for c in (A2, A3):
        for i in c.nodes:
            rep = fm_algorithm(c, Monomial.y(i, 0))
            assert qchar_is_thin(rep.qchar)
    # the fork fundamental at the branch node is not thin
    rep = fm_algorithm(D4, Monomial.y(2, 0))
    assert not qchar_is_thin(rep.qchar)
    assert rep.qchar.dimension() == len(rep.qchar) + 1


def test_fm_string_modules_unique_dominant_and_top_step():
    for c, i, k in [(A2, 1, 3), (A3, 2, 2), (A3, 2, 3), (D4, 2, 2)]:
        X = kr_highest(c, i, k, 0)
        rep = fm_algorithm(c, X)
        assert rep.verdict == SPECIAL_FM_CONSISTENT
        assert rep.qchar.dominant_monomials() == [X]
        gate = X * (a_monomial(c, i, c.r(i) * k) ** -1)
        for mu in rep.qchar.terms:
            if mu != X:
                assert divide_as_a_product(c, mu, gate) is not None


def test_fm_mult_two_forced_by_overlap():
    # two overlapping strings at one node force a repeated lower monomial
    rep = fm_algorithm(D4, Monomial.y(2, 0))
    mult2 = [m for m, t in rep.qchar.terms.items() if t == 2]
    assert mult2 == [parse_monomial("2_2 2_4^-1")]


def test_thinness_predicate():
    rep = fm_algorithm(A1, kr_highest(A1, 1, 4, 0))
    assert qchar_is_thin(rep.qchar)
    chi = QCharacter({Monomial.y(1, 0): 2})
    assert not qchar_is_thin(chi)


def test_all_monomials_thin_forces_thin_character():
    from qchar.monomials import is_thin_monomial
    consistent = []
    for c in (A2, A3):
        for i in c.nodes:
            consistent.append(fm_algorithm(c, Monomial.y(i, 0)))
            consistent.append(fm_algorithm(c, kr_highest(c, i, 3, 0)))
    consistent.append(fm_algorithm(D4, Monomial.y(2, 0)))
    saw_non_thin = False
    for rep in consistent:
        assert rep.verdict == SPECIAL_FM_CONSISTENT
        if all(is_thin_monomial(m) for m in rep.qchar.terms):
            assert qchar_is_thin(rep.qchar)
        else:
            saw_non_thin = True
    assert saw_non_thin  # the branch-node character exercises the other side


def test_trace_json_shape():
    m = parse_monomial("1_1 3_1 2_4")
    trace = generate_process(A3, m)
    doc = trace.to_json()
    assert doc["partial"] is False and doc["steps"] == trace.steps
    by_monomial = {tuple(sorted((e["node"], e["power"], e["exponent"])
                                for e in g["monomial"])): g["chain"]
                   for g in doc["generated"]}
    assert len(by_monomial) == len(trace.chains)
    for chain in by_monomial.values():
        for step in chain:
            assert {"node", "root", "result"} <= set(step)


def test_expand_all_outputs_admit_witness():
    cases = [(A3, parse_monomial("2_0 2_2 2_4"), 2),
             (D4, parse_monomial("1_3 1_5 2_0"), 1),
             (A2, parse_monomial("1_0 1_2 2_1"), 2)]
    for c, m, i in cases:
        for mu in expand_Li(c, m, i).terms:
            assert divide_as_a_product(c, mu, m) is not None

"""
Unit tests for the family generators and their witness sets
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from fractions import Fraction

import pytest

from core.construct import construct_half_ld
from core.errors import BadParameter, BudgetExceeded, HypothesisViolated
from core.families import (
    EXACT_GAMMA,
    EXACT_LTD,
    KINDS,
    UPPER_BOUND_WITNESS,
    FamilySpec,
    deg2_gadget,
    gadget_lower_bound,
    generate,
)
from core.locating import information_lower_bound, ld_number_exact, ltd_number_exact
from core.twins import closed_twins_of_degree, is_twin_free, open_twins_of_degree


def build(kind, **params):
    """Generate an instance from loose parameters"""
    return generate(FamilySpec.parse(kind, **params))


def test_every_kind_has_a_verified_witness():
    """Test each kind with default parameters"""
    for kind in KINDS:
        inst = build(kind)
        assert inst.check().is_valid, kind
        assert len(inst.witness) == inst.claimed, kind


def test_deg1_twins():
    """Test open twins of degree 1 push gamma to 7n/12"""
    inst = build("Deg1Twins", k=1)
    assert inst.graph.n == 12
    assert inst.graph.is_subcubic() and inst.graph.is_connected()
    assert open_twins_of_degree(inst.graph, 1)
    assert ld_number_exact(inst.graph).value == 7
    assert inst.ratio == Fraction(7, 12)
    with pytest.raises(HypothesisViolated) as exc:
        construct_half_ld(inst.graph)
    assert exc.value.hypothesis == "open-twins-deg1"


def test_deg1_twins_scales():
    """Test the construction repeats with k"""
    inst = build("Deg1Twins", k=3)
    assert inst.graph.n == 36
    assert inst.claimed == 21
    assert inst.check().is_valid


def test_deg2_twins():
    """Test the gadget chain with open twins of degree 2"""
    inst = build("Deg2Twins", k=1)
    assert inst.graph.n == 60
    assert len(inst.witness) == 32
    assert inst.check().is_valid
    assert open_twins_of_degree(inst.graph, 2)
    assert inst.graph.is_subcubic() and inst.graph.is_connected()
    with pytest.raises(HypothesisViolated) as exc:
        construct_half_ld(inst.graph)
    assert exc.value.hypothesis == "open-twins-deg2"


def test_deg2_twins_seeded_search():
    """Test a budgeted exact search on the gadget chain stays within known bounds"""
    inst = build("Deg2Twins", k=1)
    try:
        result = inst.solve(node_budget=20000)
    except BudgetExceeded as exc:
        assert exc.upper_bound == inst.claimed == 32
        assert information_lower_bound(inst.graph) == 20 <= exc.lower_bound <= 32
        assert len(exc.best_witness) == 32
    else:
        assert result.value == 32


def test_solve_uses_claim_kind():
    """Test instances solve for the parameter they claim"""
    assert build("LtdComb", p=4).solve().value == 8
    assert build("TightCubic10").solve().value == 5


def test_deg2_gadget():
    """Test each gadget needs six vertices besides its attachment vertex"""
    g, u, labels = deg2_gadget()
    assert g.n == 11
    assert labels[u] == "u_1"
    assert gadget_lower_bound() == 6


def test_closed_regular():
    """Test the 4-regular closed-twin family exceeds n/2"""
    inst = build("ClosedReg", r=4, k=1)
    assert inst.graph.n == 15
    assert inst.graph.is_regular(4)
    assert closed_twins_of_degree(inst.graph, 4)
    assert ld_number_exact(inst.graph).value == 8
    assert build("ClosedReg", r=5, k=2).claimed == 22


@pytest.mark.parametrize("k, gamma", [(1, 5), (2, 9)])
def test_tight_subcubic(k, gamma):
    """Test the twin-free subcubic family meets n/2 exactly"""
    inst = build("TightSubcubic", k=k)
    assert inst.graph.n == 8 * k + 2
    assert is_twin_free(inst.graph)
    assert inst.graph.is_subcubic()
    assert ld_number_exact(inst.graph).value == gamma


@pytest.mark.parametrize("k", range(1, 6))
def test_tight_subcubic_structure(k):
    """Test the family stays twin-free and connected as it grows"""
    inst = build("TightSubcubic", k=k)
    assert is_twin_free(inst.graph)
    assert inst.graph.is_subcubic() and inst.graph.is_connected()
    assert inst.check().is_valid
    assert len(inst.witness) == 4 * k + 1 == inst.graph.n // 2


def test_tight_cubic10():
    """Test the ten-vertex cubic graph with twins meets n/2"""
    inst = build("TightCubic10")
    assert inst.graph.is_cubic()
    assert ld_number_exact(inst.graph).value == 5
    assert [inst.labels[v] for v in inst.witness] == ["1", "2", "4", "6", "8"]


def test_ltd_comb():
    """Test the comb's LTD number"""
    inst = build("LtdComb", p=4)
    assert inst.claim_kind == EXACT_LTD
    assert ltd_number_exact(inst.graph).value == 8


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_corona(k):
    """Test a path with a pendant at every vertex"""
    inst = build("Corona", k=k)
    assert inst.graph.n == 2 * k
    assert ld_number_exact(inst.graph).value == k


@pytest.mark.parametrize("n", range(1, 21))
def test_path_witness(n):
    """Test the periodic path witness has size ceil(2n/5)"""
    inst = build("Path", n=n)
    assert inst.check().is_valid
    assert len(inst.witness) == inst.claimed == -(-2 * n // 5)
    if n <= 12:
        assert ld_number_exact(inst.graph).value == inst.claimed


@pytest.mark.parametrize("kind, value", [("Prism", 3), ("P2BoxC4", 4), ("CompleteBipartite33", 4)])
def test_reference_graphs(kind, value):
    """Test exact values of the small reference graphs"""
    inst = build(kind)
    assert ld_number_exact(inst.graph).value == value


def test_complete_and_star():
    """Test K_n and K_{1,n-1}"""
    for n in range(2, 7):
        assert ld_number_exact(build("CompleteK", n=n).graph).value == n - 1
        assert ld_number_exact(build("StarK1", n=n).graph).value == n - 1


def test_pattern_graphs():
    """Test the stated sets on the pattern graphs"""
    for i in range(7):
        inst = build("FGraph", i=i)
        assert inst.claim_kind == UPPER_BOUND_WITNESS
        assert inst.check().is_valid, i
        if i > 0:
            assert len(inst.witness) <= inst.graph.n // 2, i
    # F0 is K_{2,3}; its set is optimal but above n/2
    f0 = build("FGraph", i=0)
    assert f0.claimed == ld_number_exact(f0.graph).value == 3
    assert f0.claimed > f0.graph.n // 2
    f3 = build("FGraph", i=3)
    assert (f3.graph.n, f3.graph.m) == (6, 8)
    assert sorted(f3.labels[v] for v in f3.witness) == ["v", "x'", "z"]
    assert len(build("F3Prime").witness) == 2


def test_instance_dict():
    """Test the serialised instance"""
    d = build("ClosedReg", r=4, k=1).to_dict()
    assert d["kind"] == "ClosedReg(r=4, k=1)"
    assert d["claim_kind"] == EXACT_GAMMA
    assert d["ratio"] == "8/15"
    assert d["verified"] is True
    assert len(d["witness_labels"]) == 8


@pytest.mark.parametrize(
    "kind, params",
    [
        ("Nope", {}),
        ("ClosedReg", {"r": 3}),
        ("FGraph", {"i": 7}),
        ("CompleteK", {"n": 1}),
        ("Deg1Twins", {"k": 0}),
    ],
)
def test_bad_parameters(kind, params):
    """Test out-of-range parameters are rejected"""
    with pytest.raises(BadParameter):
        FamilySpec.parse(kind, **params)


def test_unused_parameter_rejected():
    """Test a parameter the kind does not take"""
    with pytest.raises(BadParameter):
        FamilySpec("Path", n=3, k=1)

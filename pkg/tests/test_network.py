import json
import random
import warnings
from fractions import Fraction

import pytest

from crnkit import (
    NetworkSyntaxError,
    NetworkValidationError,
    ReactionNetwork,
    parse_network,
)
from crnkit.network import Complex, ReactionStep

from .support import random_network


def step_tuples(net: ReactionNetwork):
    return [
        (s.reactant.as_dict(), s.product.as_dict(), s.rate) for s in net.steps
    ]


def named_step_tuples(net: ReactionNetwork):
    def by_name(cplx):
        return {net.species[i]: c for i, c in cplx.as_dict().items()}

    return [(by_name(s.reactant), by_name(s.product), s.rate) for s in net.steps]


def test_single_step():
    net = parse_network("X + Y ->[2] X")
    assert net.species == ("X", "Y")
    assert len(net.steps) == 1
    step = net.steps[0]
    assert step.reactant.coefficient(0) == 1
    assert step.reactant.coefficient(1) == 1
    assert step.product.coefficient(1) == 0
    assert step.rate == 2


def test_symbolic_rate():
    net = parse_network("A ->[k1] B")
    assert net.steps[0].rate == "k1"
    assert net.rate_parameters() == ("k1",)


def test_reversible_expands_to_two_steps():
    net = parse_network("A <=>[2,3] B")
    assert len(net.steps) == 2
    assert (net.steps[0].rate, net.steps[1].rate) == (Fraction(2), Fraction(3))
    assert net.steps[0].reactant.coefficient(0) == 1
    assert net.steps[1].reactant.coefficient(1) == 1


def test_backward_arrow():
    net = parse_network("A <-[5] B")
    step = net.steps[0]
    assert step.reactant.coefficient(1) == 1
    assert step.product.coefficient(0) == 1
    assert step.rate == 5


def test_chain_with_mixed_arrows():
    # middle complex feeds both ends
    net = parse_network("X <-[a] X + Y ->[b] Y")
    assert len(net.steps) == 2
    first, second = net.steps
    assert first.reactant.as_dict() == {0: 1, 1: 1}
    assert first.product.as_dict() == {0: 1}
    assert second.reactant.as_dict() == {0: 1, 1: 1}
    assert second.product.as_dict() == {1: 1}


def test_empty_complex_and_fractional_product():
    net = parse_network("0 ->[1] X\nX ->[2] 1/2Y")
    assert net.steps[0].reactant.is_empty
    assert net.steps[1].product.coefficient(1) == Fraction(1, 2)


def test_fractional_reactant_rejected():
    with pytest.raises(NetworkSyntaxError):
        parse_network("1/2X ->[1] Y")


def test_semicolon_and_comments():
    net = parse_network("# leading comment\nA ->[1] B; B ->[2] A  # trailing")
    assert len(net.steps) == 2


def test_species_numbered_by_first_appearance():
    net = parse_network("B ->[1] A\nC ->[1] B")
    assert net.species == ("B", "A", "C")


def test_duplicate_steps_merge_with_warning():
    with pytest.warns(UserWarning, match="merged"):
        net = parse_network("A ->[1] B\nA ->[2] B")
    assert len(net.steps) == 1
    assert net.steps[0].rate == 3


def test_duplicate_symbolic_steps_merge():
    with pytest.warns(UserWarning):
        net = parse_network("A ->[k1] B\nA ->[k2] B")
    assert len(net.steps) == 1
    assert net.steps[0].rate == "k1+k2"
    assert set(net.rate_parameters()) == {"k1", "k2"}


def test_self_loop_rejected():
    with pytest.raises(NetworkSyntaxError):
        parse_network("A + B ->[1] A + B")


def test_error_carries_position():
    with pytest.raises(NetworkSyntaxError) as info:
        parse_network("A ->[1] B\nA -> B")
    assert info.value.line == 2


def test_zero_rate_rejected():
    with pytest.raises(NetworkSyntaxError):
        parse_network("A ->[0] B")


def test_bad_species_name_rejected():
    with pytest.raises(NetworkValidationError):
        ReactionNetwork(
            ("9bad",),
            (
                ReactionStep(
                    Complex.from_mapping({0: Fraction(1)}),
                    Complex.from_mapping({0: Fraction(2)}),
                    Fraction(1),
                ),
            ),
        )


def test_stoichiometric_matrices(cascade_network):
    alpha, beta, gamma = cascade_network.stoichiometric_matrices()
    # 9 species x 10 steps, checked against the hand-built step vectors
    expected_gamma = [
        [-1, 1, 0, 0, 0, -1, 0, 0, 0, 0],
        [-1, 1, 0, 0, 0, -1, 0, 0, 0, 0],
        [1, -1, -1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, -1, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, -1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, -1, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, -1, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 2, -2, -2],
    ]
    assert gamma == [[Fraction(v) for v in row] for row in expected_gamma]
    for m in range(9):
        for r in range(10):
            assert gamma[m][r] == beta[m][r] - alpha[m][r]
            assert alpha[m][r] >= 0 and beta[m][r] >= 0


def test_render_parse_identity(cascade_network):
    again = parse_network(cascade_network.render())
    assert again.species == cascade_network.species
    assert step_tuples(again) == step_tuples(cascade_network)


def test_render_parse_identity_randomized():
    # render drops species that no step mentions, so compare by name
    rng = random.Random(2024)
    for _ in range(25):
        net = random_network(rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            again = parse_network(net.render())
        assert named_step_tuples(again) == named_step_tuples(net)
        if net.is_proper:
            assert set(again.species) == set(net.species)


def test_json_round_trip(example_network):
    data = json.loads(example_network.to_json())
    again = ReactionNetwork.from_dict(data)
    assert again.species == example_network.species
    assert step_tuples(again) == step_tuples(example_network)


def test_unused_species_and_proper():
    net = ReactionNetwork(
        ("A", "B", "C"),
        (
            ReactionStep(
                Complex.from_mapping({0: Fraction(1)}),
                Complex.from_mapping({1: Fraction(1)}),
                Fraction(1),
            ),
        ),
    )
    assert net.unused_species() == ("C",)
    assert not net.is_proper
    full = parse_network("A ->[1] B")
    assert full.is_proper

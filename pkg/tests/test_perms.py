"""Permutation groups: stabilizer-chain orders against closure oracles."""

import math
import random

import pytest

from hassett.perms import PermGroup, generate_group, transposition
from tests.oracles import naive_closure


def random_perm(rng, degree):
    p = list(range(degree))
    rng.shuffle(p)
    return tuple(p)


class TestGenerateGroup:
    def test_trivial_group(self):
        g = generate_group([], 5)
        assert g.order == 1
        assert g.generators == ()
        assert g.orbits == ((0,), (1,), (2,), (3,), (4,))

    def test_single_transposition(self):
        g = generate_group([transposition(0, 1, 5)], 5)
        assert g.order == 2
        assert g.orbits == ((0, 1), (2,), (3,), (4,))

    def test_adjacent_transpositions_give_full_symmetric_group(self):
        for n in (3, 4, 5, 6, 7):
            gens = [transposition(i, i + 1, n) for i in range(n - 1)]
            assert generate_group(gens, n).order == math.factorial(n)

    def test_product_of_symmetric_groups(self):
        # S_{1,2} x S_{4,5,6} on six points, as in a two-class weight datum
        gens = [
            transposition(0, 1, 6),
            transposition(3, 4, 6),
            transposition(3, 5, 6),
            transposition(4, 5, 6),
        ]
        g = generate_group(gens, 6)
        assert g.order == 12
        assert g.orbits == ((0, 1), (2,), (3, 4, 5))

    def test_cyclic_group(self):
        g = generate_group([(1, 2, 3, 4, 0)], 5)
        assert g.order == 5

    def test_large_symmetric_group_order_without_listing(self):
        gens = [transposition(i, i + 1, 12) for i in range(11)]
        assert generate_group(gens, 12).order == math.factorial(12)

    def test_alternating_group(self):
        # 3-cycles generate A_5, order 60
        gens = [(1, 2, 0, 3, 4), (0, 2, 3, 1, 4), (0, 1, 3, 4, 2)]
        assert generate_group(gens, 5).order == 60

    def test_identity_is_dropped_and_generators_canonical(self):
        ident = (0, 1, 2)
        g = generate_group([ident, (1, 0, 2), (1, 0, 2)], 3)
        assert g.generators == ((1, 0, 2),)

    def test_invalid_permutation_rejected(self):
        with pytest.raises(ValueError):
            generate_group([(0, 0, 1)], 3)
        with pytest.raises(ValueError):
            generate_group([(0, 1)], 3)

    def test_order_matches_bfs_closure_on_random_groups(self):
        rng = random.Random(606)
        for _ in range(40):
            degree = rng.randint(1, 6)
            gens = [random_perm(rng, degree) for _ in range(rng.randint(0, 3))]
            group = generate_group(gens, degree)
            assert group.order == len(naive_closure(gens, degree))
            listed = group.elements()
            assert listed is not None and len(listed) == group.order

    def test_order_divides_factorial(self):
        rng = random.Random(77)
        for _ in range(30):
            degree = rng.randint(1, 7)
            gens = [random_perm(rng, degree) for _ in range(2)]
            group = generate_group(gens, degree)
            assert math.factorial(degree) % group.order == 0

    def test_elements_respects_limit(self):
        gens = [transposition(i, i + 1, 5) for i in range(4)]
        group = generate_group(gens, 5)
        assert group.elements(limit=119) is None
        full = group.elements(limit=120)
        assert full is not None and len(full) == 120

    def test_one_based_generator_export(self):
        g = generate_group([transposition(0, 1, 4)], 4)
        assert g.to_one_based_generators() == [[2, 1, 3, 4]]

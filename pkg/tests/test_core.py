import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsymlab.core import (
    BooleanFunctionTable,
    IndexFunction,
    InputString,
    compose_index,
    compose_input,
    first_type_asymmetry_witness,
    image,
    is_symmetric_first_type,
    is_symmetric_second_type,
    second_type_asymmetry_witness,
)


def or_table(n):
    return BooleanFunctionTable(
        n, 2, {v: int(any(v)) for v in itertools.product((0, 1), repeat=n)}
    )


class TestCompose:
    def test_table_lookup(self):
        x = InputString(4, 8, (5, 7, 7, 2))
        g = IndexFunction(4, (1, 1, 3, 3))
        assert compose_input(x, g).values == (7, 7, 2, 2)

    def test_identity(self):
        x = InputString(3, 5, (4, 0, 2))
        assert compose_input(x, IndexFunction.identity(3)) == x

    def test_swap(self):
        x = InputString(2, 2, (0, 1))
        assert compose_input(x, IndexFunction(2, (1, 0))).values == (1, 0)

    def test_alphabet_preserved(self):
        x = InputString(2, 9, (3, 4))
        assert compose_input(x, IndexFunction(2, (0, 0))).M == 9

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            compose_input(InputString(2, 2, (0, 1)), IndexFunction(3, (0, 1, 2)))

    @settings(max_examples=60)
    @given(st.data())
    def test_associativity(self, data):
        n = data.draw(st.integers(1, 5))
        m = data.draw(st.integers(1, 4))
        x = InputString(n, m, tuple(data.draw(st.integers(0, m - 1)) for _ in range(n)))
        g = IndexFunction(n, tuple(data.draw(st.integers(0, n - 1)) for _ in range(n)))
        h = IndexFunction(n, tuple(data.draw(st.integers(0, n - 1)) for _ in range(n)))
        assert compose_input(compose_input(x, g), h) == compose_input(x, compose_index(g, h))


class TestImage:
    def test_small_range(self):
        assert image(IndexFunction(4, (1, 1, 3, 3))) == {1, 3}

    def test_identity_is_full(self):
        assert image(IndexFunction.identity(4)) == {0, 1, 2, 3}

    def test_constant(self):
        assert image(IndexFunction(5, (0, 0, 0, 0, 0))) == {0}

    def test_full_image_iff_injective(self):
        for values in itertools.product(range(3), repeat=3):
            g = IndexFunction(3, values)
            assert (len(image(g)) == 3) == (len(set(values)) == 3)


class TestValidation:
    def test_entry_out_of_range(self):
        with pytest.raises(ValueError):
            InputString(2, 3, (0, 3))

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            IndexFunction(3, (0, 1))

    def test_off_domain_lookup_raises(self):
        f = or_table(2)
        probe = InputString(2, 2, (0, 1))
        assert f.value(probe) == 1
        g = BooleanFunctionTable(2, 2, {(0, 0): 0})
        with pytest.raises(KeyError, match="outside the function domain"):
            g.value(probe)

    def test_table_rejects_bad_bit(self):
        with pytest.raises(ValueError):
            BooleanFunctionTable(1, 2, {(0,): 2})


class TestFirstTypeSymmetry:
    def test_or_is_symmetric(self):
        assert is_symmetric_first_type(or_table(4))

    def test_projection_is_not(self):
        proj = BooleanFunctionTable(2, 2, {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1})
        witness = first_type_asymmetry_witness(proj)
        assert witness is not None
        x, pi = witness
        moved = compose_input(x, pi)
        assert moved not in proj or proj.value(moved) != proj.value(x)

    def test_constant_vs_balanced_table(self):
        outputs = {(b,) * 4: 0 for b in (0, 1)}
        for ones in itertools.combinations(range(4), 2):
            vals = [0] * 4
            for i in ones:
                vals[i] = 1
            outputs[tuple(vals)] = 1
        assert is_symmetric_first_type(BooleanFunctionTable(4, 2, outputs))

    def test_guard(self):
        big = BooleanFunctionTable(9, 2, {(0,) * 9: 0})
        with pytest.raises(ValueError, match="refusing"):
            is_symmetric_first_type(big)

    def test_promise_domain_not_closed_is_witnessed(self):
        # (0,1) in the domain but its swap is not
        lop = BooleanFunctionTable(2, 2, {(0, 1): 1})
        assert not is_symmetric_first_type(lop)


class TestSecondTypeSymmetry:
    def test_all_entries_equal(self):
        outputs = {
            v: int(len(set(v)) == 1) for v in itertools.product(range(3), repeat=3)
        }
        assert is_symmetric_second_type(BooleanFunctionTable(3, 3, outputs))

    def test_or_fails_under_relabeling(self):
        f = or_table(3)
        witness = second_type_asymmetry_witness(f)
        assert witness is not None
        x, sigma, pi = witness
        relabeled = tuple(sigma[v] for v in compose_input(x, pi).values)
        assert f.outputs.get(relabeled) != f.value(x)

    def test_constant_one(self):
        outputs = {v: 1 for v in itertools.product(range(3), repeat=3)}
        assert is_symmetric_second_type(BooleanFunctionTable(3, 3, outputs))

    def test_guard(self):
        big = BooleanFunctionTable(3, 7, {(0, 0, 0): 0})
        with pytest.raises(ValueError, match="refusing"):
            is_symmetric_second_type(big)

    def test_second_implies_first(self):
        tables = [
            or_table(3),
            BooleanFunctionTable(
                3, 3, {v: int(len(set(v)) == 1) for v in itertools.product(range(3), repeat=3)}
            ),
            BooleanFunctionTable(2, 2, {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1}),
        ]
        for f in tables:
            if is_symmetric_second_type(f):
                assert is_symmetric_first_type(f)


class TestSerialization:
    def test_input_round_trip(self):
        x = InputString(3, 4, (0, 3, 2))
        assert InputString.from_json(x.to_json()) == x

    def test_index_round_trip(self):
        g = IndexFunction(4, (1, 1, 3, 0))
        assert IndexFunction.from_json(g.to_json()) == g

    def test_table_round_trip(self):
        f = or_table(3)
        assert BooleanFunctionTable.from_json(f.to_json()) == f

import numpy as np
import pytest

from spatialdensity.exceptions import InvalidDimensionError, NumericInputError
from spatialdensity.density.tree import build_tree, count_tree
from spatialdensity.graph.base import build_chain_graph


class TestDyadicTree:
    def test_depth_two_over_four_bins(self):
        tree = build_tree(4, 2)
        assert tree.nonterminal_nodes == ["", "0", "1"]
        assert tree.leaf_width == 1
        assert tree.bin_range("") == (0, 4)
        assert tree.bin_range("1") == (2, 4)
        assert tree.bin_range("10") == (2, 3)
        assert tree.is_leaf("01")
        assert not tree.is_leaf("0")

    def test_full_resolution_tree(self):
        tree = build_tree(2048, 11)
        assert len(tree.nonterminal_nodes) == 2047
        assert tree.leaf_width == 1

    def test_coarse_leaves(self):
        tree = build_tree(16, 2)
        assert tree.leaf_width == 4
        assert tree.bin_range("01") == (4, 8)

    @pytest.mark.parametrize("bins,depth", [(6, 2), (0, 1), (8, 0)])
    def test_invalid_shapes(self, bins, depth):
        with pytest.raises(InvalidDimensionError):
            build_tree(bins, depth)

    def test_levels_are_shallow_first(self):
        levels = list(build_tree(8, 3).levels())
        assert levels == [[""], ["0", "1"], ["00", "01", "10", "11"]]

    def test_children(self):
        tree = build_tree(8, 3)
        assert tree.children("01") == ("010", "011")
        with pytest.raises(InvalidDimensionError):
            tree.children("010")

    def test_bin_range_rejects_foreign_labels(self):
        with pytest.raises(InvalidDimensionError):
            build_tree(4, 2).bin_range("2")


class TestCountTree:
    def test_single_site(self):
        counts = count_tree(np.array([[3, 1, 2, 2]]), build_tree(4, 2))
        assert counts.m[""].tolist() == [8]
        assert counts.y[""].tolist() == [4]
        assert counts.m["0"].tolist() == [4]
        assert counts.y["0"].tolist() == [3]
        assert counts.m["1"].tolist() == [4]
        assert counts.y["1"].tolist() == [2]

    def test_one_dimensional_input_is_one_site(self):
        counts = count_tree(np.array([3, 1, 2, 2]), build_tree(4, 2))
        assert counts.num_sites == 1

    def test_all_zero_histogram(self):
        tree = build_tree(8, 3)
        counts = count_tree(np.zeros((2, 8)), tree)
        for label in tree.nonterminal_nodes:
            assert counts.is_empty(label)
            assert counts.y[label].sum() == 0

    def test_left_child_count_matches_direct_recount(self):
        rng = np.random.default_rng(5)
        histograms = rng.integers(0, 20, size=(3, 16))
        tree = build_tree(16, 3)
        counts = count_tree(histograms, tree)
        for label in tree.nonterminal_nodes:
            start, stop = tree.bin_range(label)
            left_start, left_stop = tree.bin_range(label + "0")
            np.testing.assert_array_equal(counts.m[label], histograms[:, start:stop].sum(axis=1))
            np.testing.assert_array_equal(
                counts.y[label], histograms[:, left_start:left_stop].sum(axis=1)
            )

    def test_problem_for_node(self):
        counts = count_tree(np.array([[3, 1, 2, 2], [0, 0, 1, 1]]), build_tree(4, 2))
        problem = counts.problem("0", build_chain_graph(2))
        assert problem.y.tolist() == [3.0, 0.0]
        assert problem.m.tolist() == [4.0, 0.0]

    @pytest.mark.parametrize(
        "histograms,error",
        [
            (np.array([[1, -1, 0, 0]]), NumericInputError),
            (np.array([[1.5, 0, 0, 0]]), NumericInputError),
            (np.array([[1, 0, 0]]), InvalidDimensionError),
        ],
    )
    def test_invalid_histograms(self, histograms, error):
        with pytest.raises(error):
            count_tree(histograms, build_tree(4, 2))

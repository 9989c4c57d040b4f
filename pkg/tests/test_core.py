import numpy as np
import pytest

from hgpart.core import (Hypergraph, Partition, PartitionConfig, cut_size,
                         imbalance, is_feasible, km1, max_feasible_block_weight,
                         parse_hmetis, read_partition, write_hmetis,
                         write_partition)

from conftest import H4_TEXT, random_hypergraph


class TestParse:
    def test_h4_counts(self, h4):
        assert h4.num_vertices == 4
        assert h4.num_edges == 3
        assert h4.total_pins == 7
        assert h4.vertex_weights == [1, 1, 1, 1]
        assert h4.edge_weights == [1, 1, 1]

    def test_pins_zero_indexed(self, h4):
        assert h4.pins == [[0, 1], [1, 2, 3], [0, 2]]
        assert h4.incident == [[0, 2], [0, 1], [1, 2], [1]]

    def test_fmt_11_weights(self):
        text = "2 3 11\n5 1 2\n7 2 3\n4\n6\n8\n"
        hg = parse_hmetis(text)
        assert hg.edge_weights == [5, 7]
        assert hg.vertex_weights == [4, 6, 8]
        assert hg.pins == [[0, 1], [1, 2]]

    def test_fmt_1_edge_weights_only(self):
        hg = parse_hmetis("1 2 1\n9 1 2\n")
        assert hg.edge_weights == [9]
        assert hg.vertex_weights == [1, 1]

    def test_fmt_10_vertex_weights_only(self):
        hg = parse_hmetis("1 2 10\n1 2\n3\n4\n")
        assert hg.vertex_weights == [3, 4]
        assert hg.edge_weights == [1]

    def test_comments_ignored(self):
        hg = parse_hmetis("% header comment\n3 4\n1 2\n% mid comment\n2 3 4\n1 3\n")
        assert hg.num_edges == 3

    def test_pin_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            parse_hmetis("1 4\n1 5\n")

    def test_duplicate_pin_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            parse_hmetis("1 4\n2 2\n")

    def test_nonpositive_weight(self):
        with pytest.raises(ValueError, match="nonpositive"):
            parse_hmetis("1 2 1\n0 1 2\n")
        with pytest.raises(ValueError, match="nonpositive"):
            parse_hmetis("1 2 10\n1 2\n1\n-3\n")

    def test_malformed_header(self):
        with pytest.raises(ValueError):
            parse_hmetis("abc def\n")
        with pytest.raises(ValueError):
            parse_hmetis("1\n1 2\n")
        with pytest.raises(ValueError):
            parse_hmetis("")

    def test_missing_lines(self):
        with pytest.raises(ValueError, match="content lines"):
            parse_hmetis("3 4\n1 2\n")

    def test_roundtrip_preserves_structure(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            hg = random_hypergraph(rng, weighted=True)
            back = parse_hmetis(write_hmetis(hg))
            assert back.num_vertices == hg.num_vertices
            assert back.num_edges == hg.num_edges
            assert back.pins == hg.pins
            assert back.vertex_weights == hg.vertex_weights
            assert back.edge_weights == hg.edge_weights


class TestMetrics:
    def test_cut_examples(self, h4):
        assert cut_size(h4, Partition(np.array([0, 0, 1, 1]), 2)) == 2
        assert cut_size(h4, Partition(np.array([0, 0, 0, 0]), 2)) == 0
        assert cut_size(h4, Partition(np.array([0, 1, 0, 1]), 2)) == 2

    def test_km1_examples(self, h4):
        assert km1(h4, Partition(np.array([0, 0, 1, 1]), 2)) == 2
        assert km1(h4, Partition(np.array([0, 0, 0, 0]), 2)) == 0
        assert km1(h4, Partition(np.array([0, 1, 2, 2]), 3)) == 3

    def test_imbalance_examples(self, h4):
        assert imbalance(h4, Partition(np.array([0, 0, 1, 1]), 2)) == 0.0
        assert imbalance(h4, Partition(np.array([0, 0, 0, 1]), 2)) == pytest.approx(0.5)
        assert imbalance(h4, Partition(np.array([0, 0, 0, 0]), 2)) == pytest.approx(1.0)

    def test_size_mismatch_rejected(self, h4):
        with pytest.raises(ValueError, match="covers"):
            cut_size(h4, Partition(np.array([0, 1]), 2))
        with pytest.raises(ValueError, match="covers"):
            km1(h4, Partition(np.array([0, 1]), 2))

    def test_km1_equals_cut_for_k2(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            hg = random_hypergraph(rng, weighted=True)
            part = Partition(rng.integers(0, 2, hg.num_vertices), 2)
            assert km1(hg, part) == cut_size(hg, part)

    def test_cut_relabel_invariance_and_bounds(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            hg = random_hypergraph(rng, weighted=True)
            part = Partition(rng.integers(0, 2, hg.num_vertices), 2)
            flipped = Partition(1 - part.block_of, 2)
            c = cut_size(hg, part)
            assert c == cut_size(hg, flipped)
            assert 0 <= c <= sum(hg.edge_weights)

    def test_feasibility_limit(self, h4):
        assert max_feasible_block_weight(4, 2, 0.1) == 2
        assert is_feasible(h4, Partition(np.array([0, 0, 1, 1]), 2), 0.1)
        assert not is_feasible(h4, Partition(np.array([0, 0, 0, 1]), 2), 0.1)


class TestPartitionIO:
    def test_write_example(self):
        assert write_partition(Partition(np.array([0, 0, 1, 1]), 2)) == "0\n0\n1\n1\n"

    def test_roundtrip_random(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            part = Partition(rng.integers(0, 2, int(rng.integers(1, 40))), 2)
            back = read_partition(write_partition(part))
            assert np.array_equal(back.block_of, part.block_of)

    def test_empty_partition(self):
        assert write_partition(Partition(np.array([], dtype=np.int64), 2)) == ""
        assert len(read_partition("").block_of) == 0


class TestValidation:
    def test_single_pin_edge_accepted(self):
        hg = Hypergraph(3, [[0], [0, 1, 2]])
        assert cut_size(hg, Partition(np.array([0, 1, 1]), 2)) == 1

    def test_constructor_rejects_bad_edges(self):
        with pytest.raises(ValueError):
            Hypergraph(3, [[0, 3]])
        with pytest.raises(ValueError):
            Hypergraph(3, [[1, 1]])
        with pytest.raises(ValueError):
            Hypergraph(3, [[]])
        with pytest.raises(ValueError):
            Hypergraph(3, [[0, 1]], vertex_weights=[1, 0, 1])

    def test_partition_config(self):
        PartitionConfig(k=2, epsilon=0.1)
        with pytest.raises(ValueError):
            PartitionConfig(k=1)
        with pytest.raises(ValueError):
            PartitionConfig(k=2, epsilon=-0.1)

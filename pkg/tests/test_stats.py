import random
from itertools import combinations

import numpy as np
import pytest

from cooccur.errors import DegenerateInputError, UsageError
from cooccur.stats import (
    BaseClassPolicy,
    CooccurrenceMatrix,
    CooccurrenceThreshold,
    FrequencyTable,
    build_matrix,
    cooccurring_for_base,
    count_frequencies,
    merge_matrices,
    select_base_classes,
)

from conftest import make_id_set, make_set


def brute_force_matrix(tset):
    """Independent oracle: double loop over all label pairs per transaction."""
    k = len(tset.vocabulary)
    cells = np.zeros((k, k), dtype=np.int64)
    for t in tset.transactions:
        for i in t.labels:
            cells[i, i] += 1
        for i, j in combinations(t.labels, 2):
            cells[i, j] += 1
            cells[j, i] += 1
    return cells


class TestCountFrequencies:
    def test_empty_set(self):
        table = count_frequencies(make_set([], names=["a", "b"]))
        assert table.n_images == 0
        assert (table.counts == 0).all()

    def test_four_image_fixture(self, four_set):
        table = count_frequencies(four_set)
        vocab = four_set.vocabulary
        assert int(table.counts[vocab.id_of("person")]) == 3
        assert int(table.counts[vocab.id_of("dog")]) == 3
        assert int(table.counts[vocab.id_of("car")]) == 2
        assert table.n_images == 4

    def test_doubling_doubles_counts(self, four_set):
        doubled_transactions = [
            [four_set.vocabulary.name_of(i) for i in t.labels]
            for t in four_set.transactions
        ] * 2
        doubled = make_set(doubled_transactions, names=four_set.vocabulary.names)
        once = count_frequencies(four_set)
        twice = count_frequencies(doubled)
        assert (twice.counts == 2 * once.counts).all()
        assert twice.n_images == 2 * once.n_images

    def test_count_bounds_enforced(self):
        with pytest.raises(UsageError):
            FrequencyTable(np.array([3]), 2)


class TestBuildMatrix:
    def test_four_image_fixture(self, four_set):
        m = build_matrix(four_set)
        v = four_set.vocabulary
        person, dog, car = v.id_of("person"), v.id_of("dog"), v.id_of("car")
        assert m.pair_count(person, dog) == 2
        assert m.pair_count(person, car) == 2
        assert m.pair_count(dog, car) == 1
        assert m.doc_frequency(person) == 3
        assert m.doc_frequency(dog) == 3
        assert m.doc_frequency(car) == 2

    def test_singletons_zero_off_diagonal(self):
        tset = make_set([["a"], ["b"], ["a"]])
        m = build_matrix(tset)
        off = m.cells - np.diag(np.diag(m.cells))
        assert (off == 0).all()

    def test_empty_set(self):
        m = build_matrix(make_set([], names=["a", "b", "c"]))
        assert m.dim == 3
        assert (m.cells == 0).all()

    def test_matches_brute_force_on_random_sets(self):
        rng = random.Random(9)
        for _ in range(60):
            k = rng.randint(1, 7)
            transactions = [
                rng.sample(range(k), rng.randint(0, k))
                for _ in range(rng.randint(0, 10))
            ]
            tset = make_id_set(transactions, k)
            assert (build_matrix(tset).cells == brute_force_matrix(tset)).all()

    def test_pair_bounded_by_frequencies(self, four_set):
        m = build_matrix(four_set)
        for i in range(m.dim):
            for j in range(m.dim):
                if i != j:
                    assert m.pair_count(i, j) <= min(
                        m.doc_frequency(i), m.doc_frequency(j)
                    )

    def test_partitioned_counting_merges_exactly(self, four_set):
        whole = build_matrix(four_set)
        vocab = four_set.vocabulary
        parts = []
        for chunk in (four_set.transactions[:2], four_set.transactions[2:]):
            from cooccur.ingest import TransactionSet

            parts.append(build_matrix(TransactionSet(vocab, chunk, len(chunk))))
        merged = merge_matrices(parts)
        assert (merged.cells == whole.cells).all()

    def test_symmetry_required(self):
        with pytest.raises(UsageError):
            CooccurrenceMatrix(np.array([[0, 1], [2, 0]]))


class TestSelectBaseClasses:
    def table(self, counts, n):
        return FrequencyTable(np.array(counts, dtype=np.int64), n)

    def test_top_k_breaks_ties_by_id(self):
        # person=0, dog=1, car=2 with counts 3, 3, 2
        table = self.table([3, 3, 2], 4)
        assert select_base_classes(table, BaseClassPolicy.top_k(2)) == [0, 1]

    def test_top_k_exceeding_label_count(self):
        table = self.table([3, 3, 2], 4)
        assert select_base_classes(table, BaseClassPolicy.top_k(10)) == [0, 1, 2]

    def test_min_fraction(self):
        table = self.table([3, 3, 2], 4)
        policy = BaseClassPolicy.min_fraction(0.7)
        assert select_base_classes(table, policy) == [0, 1]

    def test_min_fraction_boundary_is_inclusive(self):
        table = self.table([2], 4)
        assert select_base_classes(table, BaseClassPolicy.min_fraction(0.5)) == [0]

    def test_zero_count_labels_never_selected(self):
        table = self.table([0, 5], 5)
        assert select_base_classes(table, BaseClassPolicy.top_k(10)) == [1]

    def test_min_fraction_zero_images(self):
        table = self.table([0], 0)
        with pytest.raises(DegenerateInputError):
            select_base_classes(table, BaseClassPolicy.min_fraction(0.5))

    def test_order_independent_of_transaction_order(self, four_set):
        reversed_set = make_set(
            [
                [four_set.vocabulary.name_of(i) for i in t.labels]
                for t in reversed(four_set.transactions)
            ],
            names=four_set.vocabulary.names,
        )
        policy = BaseClassPolicy.top_k(3)
        assert select_base_classes(
            count_frequencies(four_set), policy
        ) == select_base_classes(count_frequencies(reversed_set), policy)

    def test_policy_validation(self):
        with pytest.raises(UsageError):
            BaseClassPolicy.top_k(0)
        with pytest.raises(UsageError):
            BaseClassPolicy.min_fraction(0.0)
        with pytest.raises(UsageError):
            BaseClassPolicy("weird")


class TestCooccurringForBase:
    def test_person_base_at_half(self, four_set):
        m = build_matrix(four_set)
        v = four_set.vocabulary
        rows = cooccurring_for_base(m, v.id_of("person"), 0.5)
        got = {(v.name_of(j), pair) for j, pair, _ in rows}
        assert got == {("dog", 2), ("car", 2)}
        for _, pair, prob in rows:
            assert prob == pair / 3

    def test_threshold_one_keeps_only_perfect(self, four_set):
        m = build_matrix(four_set)
        v = four_set.vocabulary
        assert cooccurring_for_base(m, v.id_of("person"), 1.0) == []
        # car appears only alongside person, so person is perfect for car.
        rows = cooccurring_for_base(m, v.id_of("car"), 1.0)
        assert [(v.name_of(j), pair) for j, pair, _ in rows] == [("person", 2)]

    def test_threshold_zero_requires_at_least_one_pair(self):
        tset = make_set([["a", "b"], ["c"]])
        m = build_matrix(tset)
        rows = cooccurring_for_base(m, 0, 0.0)
        assert [j for j, _, _ in rows] == [1]  # c never pairs with a

    def test_monotone_in_threshold(self, four_set):
        m = build_matrix(four_set)
        for base in range(m.dim):
            previous = None
            for t in (0.0, 0.3, 0.5, 0.7, 1.0):
                current = {j for j, _, _ in cooccurring_for_base(m, base, t)}
                if previous is not None:
                    assert current <= previous
                previous = current

    def test_degenerate_base(self):
        tset = make_set([["a"]], names=["a", "b"])
        with pytest.raises(DegenerateInputError):
            cooccurring_for_base(build_matrix(tset), 1, 0.5)

    def test_support_metric(self, four_set):
        m = build_matrix(four_set)
        v = four_set.vocabulary
        # pair(dog, person)=2 of 4 images -> passes 0.5 on support;
        # pair(dog, car)=1 of 4 -> fails.
        rows = cooccurring_for_base(
            m, v.id_of("dog"), 0.5, metric="support", n_images=4
        )
        assert [v.name_of(j) for j, _, _ in rows] == ["person"]

    def test_probabilities_in_unit_interval(self, four_set):
        m = build_matrix(four_set)
        for base in range(m.dim):
            for _, _, prob in cooccurring_for_base(m, base, 0.0):
                assert 0.0 <= prob <= 1.0

    def test_relabeling_permutes_results(self):
        tset = make_set([["a", "b"], ["a", "c"], ["a", "b", "c"], ["b"]])
        permuted = make_set(
            [["x" + n for n in [tset.vocabulary.name_of(i) for i in t.labels]]
             for t in tset.transactions],
            names=["xc", "xa", "xb"],  # a->1, b->2, c->0 under the new sort
        )
        m1, m2 = build_matrix(tset), build_matrix(permuted)
        v1, v2 = tset.vocabulary, permuted.vocabulary
        for name in ("a", "b", "c"):
            rows1 = cooccurring_for_base(m1, v1.id_of(name), 0.4)
            rows2 = cooccurring_for_base(m2, v2.id_of("x" + name), 0.4)
            names1 = {(v1.name_of(j), pair) for j, pair, _ in rows1}
            names2 = {(v2.name_of(j).removeprefix("x"), pair) for j, pair, _ in rows2}
            assert names1 == names2

    def test_threshold_validation(self):
        with pytest.raises(UsageError):
            CooccurrenceThreshold(1.5)

"""FP-tree construction, FP-growth mining, and association-rule generation.

The miner is exact: it returns precisely the itemsets whose support reaches
the given minimum, each with its exact integer support count. A brute-force
enumerator over the label power set doubles as an independent testing oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from cooccur.errors import ConsistencyError, SizeLimitError, UsageError
from cooccur.ingest import LabelVocabulary, TransactionSet


@dataclass(frozen=True)
class Itemset:
    """A non-empty set of label ids with its exact support count."""

    items: tuple[int, ...]
    support_count: int

    def __post_init__(self):
        if not self.items:
            raise UsageError("itemset must be non-empty")
        if any(b <= a for a, b in zip(self.items, self.items[1:])):
            raise UsageError("items must be strictly ascending")
        if self.support_count < 1:
            raise UsageError("support count must be positive")


@dataclass(frozen=True)
class AssociationRule:
    """antecedent -> consequent with exact support counts.

    ``confidence`` equals support_count / antecedent_support; both integer
    counts are kept so the identity can be re-checked without floating point.
    """

    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    support_count: int
    antecedent_support: int
    confidence: float


@dataclass(frozen=True)
class MiningConfig:
    """Knobs for the mining stage.

    ``min_support`` is an absolute transaction count when given as an int and
    a fraction of the image count when given as a float in (0, 1].
    """

    min_support: float | int = 0.01
    min_confidence: float = 0.5
    max_itemset_size: int | None = None

    def __post_init__(self):
        if isinstance(self.min_support, bool):
            raise UsageError("min_support must be a count or fraction, not bool")
        if isinstance(self.min_support, int):
            if self.min_support < 1:
                raise UsageError("absolute min_support must be >= 1")
        elif not 0.0 < self.min_support <= 1.0:
            raise UsageError("fractional min_support must be in (0, 1]")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise UsageError("min_confidence must be in [0, 1]")
        if self.max_itemset_size is not None and self.max_itemset_size < 1:
            raise UsageError("max_itemset_size must be >= 1")

    def min_support_count(self, n_images: int) -> int:
        if isinstance(self.min_support, int):
            return self.min_support
        x = self.min_support * n_images
        # Guard against float residue (0.05 * 100 == 5.000000000000001).
        nearest = round(x)
        count = nearest if abs(x - nearest) < 1e-9 else math.ceil(x)
        return max(1, count)


class _Node:
    __slots__ = ("item", "count", "parent", "children")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: dict[int, _Node] = {}


class FPTree:
    """Prefix tree of frequency-ordered transactions with per-item header lists.

    Items below the minimum support are dropped before insertion; surviving
    items are ordered by descending support (ties: ascending id), and
    transactions sharing a prefix in that order share nodes.
    """

    def __init__(self, min_support_count: int):
        if min_support_count < 1:
            raise UsageError("min_support_count must be >= 1")
        self.min_support_count = min_support_count
        self.root = _Node(None, None)
        self.header: dict[int, list[_Node]] = {}
        self.item_order: tuple[int, ...] = ()
        self._rank: dict[int, int] = {}
        self.n_paths = 0

    @classmethod
    def from_weighted(
        cls,
        weighted_itemlists: Iterable[tuple[Sequence[int], int]],
        min_support_count: int,
    ) -> "FPTree":
        """Build a tree from (items, weight) pairs; items unique per list."""
        weighted = [(tuple(items), count) for items, count in weighted_itemlists]
        support: dict[int, int] = {}
        for items, count in weighted:
            for item in items:
                support[item] = support.get(item, 0) + count
        tree = cls(min_support_count)
        frequent = sorted(
            (i for i, s in support.items() if s >= min_support_count),
            key=lambda i: (-support[i], i),
        )
        tree.item_order = tuple(frequent)
        tree._rank = {item: rank for rank, item in enumerate(frequent)}
        tree.header = {item: [] for item in frequent}
        rank = tree._rank
        for items, count in weighted:
            filtered = sorted(
                (i for i in items if i in rank), key=rank.__getitem__
            )
            if filtered:
                tree._insert(filtered, count)
        return tree

    def _insert(self, items: list[int], count: int):
        node = self.root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = _Node(item, node)
                node.children[item] = child
                self.header[item].append(child)
            child.count += count
            node = child
        self.n_paths += count

    def item_support(self, item: int) -> int:
        return sum(node.count for node in self.header[item])


def build_fp_tree(tset: TransactionSet, min_support_count: int) -> FPTree:
    """Build the mining tree over a transaction set (weight 1 per image)."""
    return FPTree.from_weighted(
        ((t.labels, 1) for t in tset.transactions), min_support_count
    )


def fp_growth(
    tree: FPTree,
    min_support_count: int,
    max_itemset_size: int | None = None,
) -> list[Itemset]:
    """Mine every itemset with support >= min_support_count from the tree.

    Classic recursion: items are taken in ascending-support order, each
    contributing its header-count support, and a conditional tree built from
    the item's prefix paths (its conditional pattern base) is mined for
    supersets. Output is sorted by (size, items) for determinism.
    """
    if min_support_count != tree.min_support_count:
        raise UsageError(
            "tree was built with a different min_support_count "
            f"({tree.min_support_count} != {min_support_count})"
        )
    results: list[Itemset] = []

    def mine(t: FPTree, suffix: tuple[int, ...]):
        for item in reversed(t.item_order):
            nodes = t.header[item]
            support = sum(n.count for n in nodes)
            items = tuple(sorted((item, *suffix)))
            results.append(Itemset(items, support))
            if max_itemset_size is not None and len(items) >= max_itemset_size:
                continue
            base = []
            for n in nodes:
                path = []
                p = n.parent
                while p.item is not None:
                    path.append(p.item)
                    p = p.parent
                if path:
                    base.append((tuple(reversed(path)), n.count))
            if base:
                conditional = FPTree.from_weighted(base, min_support_count)
                if conditional.item_order:
                    mine(conditional, items)

    mine(tree, ())
    results.sort(key=lambda s: (len(s.items), s.items))
    return results


def brute_force_itemsets(
    tset: TransactionSet, min_support_count: int
) -> list[Itemset]:
    """Exhaustive power-set enumeration; the independent oracle for fp_growth.

    Guarded to at most 20 distinct labels because enumeration is exponential.
    """
    if min_support_count < 1:
        raise UsageError("min_support_count must be >= 1")
    present = sorted({i for t in tset.transactions for i in t.labels})
    if len(present) > 20:
        raise SizeLimitError(
            f"{len(present)} distinct labels exceed the brute-force cap of 20"
        )
    position = {label: bit for bit, label in enumerate(present)}
    masks = []
    for t in tset.transactions:
        if t.labels:
            mask = 0
            for i in t.labels:
                mask |= 1 << position[i]
            masks.append(mask)
    out = []
    for subset in range(1, 1 << len(present)):
        support = sum(1 for m in masks if m & subset == subset)
        if support >= min_support_count:
            items = tuple(
                present[b] for b in range(len(present)) if subset >> b & 1
            )
            out.append(Itemset(items, support))
    out.sort(key=lambda s: (len(s.items), s.items))
    return out


def rules_from_itemsets(
    itemsets: Iterable[Itemset], min_confidence: float
) -> list[AssociationRule]:
    """Emit every rule from each itemset of size >= 2 that clears min_confidence.

    Every non-empty proper subset is tried as the antecedent. The confidence
    test cross-multiplies exact integer supports, so boundary values like 0.5
    behave exactly; the stored confidence float is for reporting only.
    Requires the input to be subset-closed, which an exact miner guarantees.
    """
    if not 0.0 <= min_confidence <= 1.0:
        raise UsageError("min_confidence must be in [0, 1]")
    frac = Fraction(str(min_confidence))
    support = {s.items: s.support_count for s in itemsets}
    rules = []
    for items, union_support in support.items():
        if len(items) < 2:
            continue
        for size in range(1, len(items)):
            for antecedent in combinations(items, size):
                antecedent_support = support.get(antecedent)
                if antecedent_support is None:
                    raise ConsistencyError(
                        f"itemsets are not subset-closed: missing {antecedent}"
                    )
                if (
                    union_support * frac.denominator
                    >= frac.numerator * antecedent_support
                ):
                    consequent = tuple(i for i in items if i not in antecedent)
                    rules.append(
                        AssociationRule(
                            antecedent,
                            consequent,
                            union_support,
                            antecedent_support,
                            union_support / antecedent_support,
                        )
                    )
    rules.sort(key=lambda r: (r.antecedent, r.consequent))
    return rules


def base_class_rules(
    rules: Iterable[AssociationRule], bases: Iterable[int]
) -> list[AssociationRule]:
    """Keep rules whose antecedent is exactly one base-class label."""
    wanted = set(bases)
    return [
        r for r in rules if len(r.antecedent) == 1 and r.antecedent[0] in wanted
    ]


def dump_tree(tree: FPTree, vocabulary: LabelVocabulary | None = None) -> str:
    """Indented one-node-per-line dump of the tree, for golden-file tests.

    Children print in item-order rank so the text is canonical regardless of
    insertion order.
    """
    lines: list[str] = []

    def walk(node: _Node, depth: int):
        for item in sorted(node.children, key=tree._rank.__getitem__):
            child = node.children[item]
            name = vocabulary.name_of(item) if vocabulary is not None else str(item)
            lines.append(f"{'  ' * depth}item:{name} count:{child.count}")
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "".join(line + "\n" for line in lines)

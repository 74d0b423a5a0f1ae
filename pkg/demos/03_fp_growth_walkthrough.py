"""From transactions to an FP-tree to frequent itemsets to rules.

The tree compresses transactions along shared frequency-ordered prefixes;
mining then recurses over conditional pattern bases instead of rescanning
the data. A brute-force power-set enumerator confirms the result.
"""

from cooccur import (
    base_class_rules,
    brute_force_itemsets,
    build_fp_tree,
    dump_tree,
    fp_growth,
    parse_transactions_tsv,
    rules_from_itemsets,
)

tset = parse_transactions_tsv(
    "img1\tdog,person\nimg2\tcar,dog,person\nimg3\tcar,person\nimg4\tdog\n"
)
vocab = tset.vocabulary
min_support = 2

tree = build_fp_tree(tset, min_support)
print(f"FP-tree at min support {min_support} "
      f"(item order: {[vocab.name_of(i) for i in tree.item_order]}):")
print(dump_tree(tree, vocab))

itemsets = fp_growth(tree, min_support)
print("frequent itemsets:")
for s in itemsets:
    names = "{" + ", ".join(vocab.name_of(i) for i in s.items) + "}"
    print(f"  {names}: {s.support_count}")

# The miner and the exhaustive oracle must agree item for item.
oracle = brute_force_itemsets(tset, min_support)
assert [(s.items, s.support_count) for s in itemsets] == [
    (s.items, s.support_count) for s in oracle
]
print("\nbrute-force oracle: exact match")

# Rules: every proper subset of a frequent itemset is tried as antecedent,
# and confidence = support(A u B) / support(A) is tested with exact integer
# arithmetic (0.5 really means one half, even at the boundary).
rules = rules_from_itemsets(itemsets, min_confidence=0.5)
print("\nrules at confidence >= 0.5:")
for r in rules:
    a = "{" + ", ".join(vocab.name_of(i) for i in r.antecedent) + "}"
    c = "{" + ", ".join(vocab.name_of(i) for i in r.consequent) + "}"
    print(f"  {a} -> {c}  support={r.support_count} "
          f"confidence={r.support_count}/{r.antecedent_support}")

# Keeping only single-label antecedents that are base classes gives exactly
# the base class -> co-occurring class facts the report is built from.
bases = [vocab.id_of("person"), vocab.id_of("dog")]
print("\nbase-class rules (bases: person, dog):")
for r in base_class_rules(rules, bases):
    print(f"  {vocab.name_of(r.antecedent[0])} -> "
          f"{vocab.name_of(r.consequent[0])} ({r.confidence:.3f})")

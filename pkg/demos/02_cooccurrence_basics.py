"""Frequencies, the co-occurrence matrix, base classes, and the threshold.

A 4-image toy dataset is enough to see every moving part:

    img1 {dog, person}   img2 {car, dog, person}
    img3 {car, person}   img4 {dog}
"""

from cooccur import (
    BaseClassPolicy,
    build_matrix,
    cooccurring_for_base,
    count_frequencies,
    parse_transactions_tsv,
    select_base_classes,
)

tset = parse_transactions_tsv(
    "img1\tdog,person\nimg2\tcar,dog,person\nimg3\tcar,person\nimg4\tdog\n"
)
vocab = tset.vocabulary

# Document frequency: in how many images does each label occur?
table = count_frequencies(tset)
print("document frequencies:")
for i, name in enumerate(vocab.names):
    print(f"  {name}: {int(table.counts[i])} of {table.n_images} images")

# The matrix counts images containing both labels; its diagonal repeats the
# document frequencies, so conditional probabilities need nothing else.
matrix = build_matrix(tset)
print("\nco-occurrence matrix (order:", vocab.names, ")")
print(matrix.cells)

# Base classes are the most frequent labels. Ties break by ascending id, so
# with the lexicographic vocabulary (car, dog, person) dog edges out person.
for policy in (BaseClassPolicy.top_k(2), BaseClassPolicy.min_fraction(0.7)):
    bases = select_base_classes(table, policy)
    print(f"\nbases via {policy.mode}: {[vocab.name_of(b) for b in bases]}")

# The threshold keeps labels whose conditional probability given the base
# reaches t. Watch dog's partners come and go as t moves.
dog = vocab.id_of("dog")
for t in (0.0, 0.5, 1.0):
    rows = cooccurring_for_base(matrix, dog, t)
    rendered = [
        f"{vocab.name_of(j)} ({pair}/{matrix.doc_frequency(dog)} = {prob:.3f})"
        for j, pair, prob in rows
    ]
    print(f"co-occurring with dog at t={t}: {rendered}")

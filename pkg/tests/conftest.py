from pathlib import Path

import pytest

from cooccur.ingest import LabelVocabulary, Transaction, TransactionSet

DATA = Path(__file__).parent / "data"

FOUR_TSV = DATA / "four_images.tsv"
COCO_JSON = DATA / "coco_100img_80cat.json"
VOC_DIR = DATA / "voc"
DETECTIONS = DATA / "detections.jsonl"
LABELS_TXT = DATA / "labels.txt"


def make_set(named_transactions, names=None, image_count=None):
    """Build a TransactionSet from lists of label names, one list per image."""
    if names is None:
        names = sorted({n for labels in named_transactions for n in labels})
    vocab = LabelVocabulary(names)
    transactions = tuple(
        Transaction.from_labels(f"img{i}", (vocab.id_of(n) for n in labels))
        for i, labels in enumerate(named_transactions)
    )
    if image_count is None:
        image_count = len(transactions)
    return TransactionSet(vocab, transactions, image_count)


def make_id_set(id_transactions, n_labels, image_count=None):
    """Build a TransactionSet straight from label-id lists."""
    vocab = LabelVocabulary([f"l{i:02d}" for i in range(n_labels)])
    transactions = tuple(
        Transaction.from_labels(f"img{i}", labels)
        for i, labels in enumerate(id_transactions)
    )
    if image_count is None:
        image_count = len(transactions)
    return TransactionSet(vocab, transactions, image_count)


@pytest.fixture
def four_set():
    """The 4-image market-basket fixture used throughout the suite.

    img1 {dog, person}, img2 {car, dog, person}, img3 {car, person},
    img4 {dog}; vocabulary car=0, dog=1, person=2.
    """
    return make_set([
        ["dog", "person"],
        ["car", "dog", "person"],
        ["car", "person"],
        ["dog"],
    ])


@pytest.fixture(scope="session")
def coco_text():
    return COCO_JSON.read_text()

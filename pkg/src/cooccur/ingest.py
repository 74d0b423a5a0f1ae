"""Parsers that turn annotation and detector-output formats into transactions.

Every parser produces a :class:`TransactionSet`: one label-set per image plus
a dense label vocabulary. Labels are presence flags, so repeated instances of
the same class within an image collapse to a single label. Images without any
label are kept as empty transactions and still count toward ``image_count``,
which downstream code uses as the support denominator.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from cooccur.errors import (
    FormatError,
    IntegrityError,
    ParseError,
    RangeError,
    UsageError,
    VocabularyError,
)


class LabelVocabulary:
    """Bijective mapping between dense 0-based label ids and label names."""

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not name:
                raise VocabularyError("label names must be non-empty")
        dupes = sorted(n for n, c in Counter(names).items() if c > 1)
        if dupes:
            raise VocabularyError(f"duplicate label names: {dupes}")
        self._names = names
        self._ids = {name: i for i, name in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise VocabularyError(f"unknown label name: {name!r}") from None

    def name_of(self, label_id: int) -> str:
        if not 0 <= label_id < len(self._names):
            raise VocabularyError(f"label id out of range: {label_id}")
        return self._names[label_id]

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelVocabulary) and self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    def __repr__(self) -> str:
        return f"LabelVocabulary({len(self)} labels)"


@dataclass(frozen=True)
class Transaction:
    """The set of distinct label ids present in one image, sorted ascending."""

    image_id: str
    labels: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.labels, self.labels[1:])):
            raise FormatError(
                f"labels of {self.image_id!r} must be strictly ascending"
            )

    @classmethod
    def from_labels(cls, image_id: str, labels: Iterable[int]) -> "Transaction":
        return cls(image_id, tuple(sorted(set(labels))))


@dataclass(frozen=True)
class TransactionSet:
    """A parsed dataset: vocabulary, per-image transactions, image count."""

    vocabulary: LabelVocabulary
    transactions: tuple[Transaction, ...]
    image_count: int

    def __post_init__(self):
        k = len(self.vocabulary)
        seen: set[str] = set()
        nonempty = 0
        for t in self.transactions:
            if t.image_id in seen:
                raise FormatError(f"duplicate image id: {t.image_id!r}")
            seen.add(t.image_id)
            if t.labels:
                nonempty += 1
                if t.labels[0] < 0 or t.labels[-1] >= k:
                    raise VocabularyError(
                        f"transaction {t.image_id!r} references a label id "
                        f"outside the vocabulary (K={k})"
                    )
        if self.image_count < nonempty:
            raise FormatError("image_count smaller than number of labelled images")


@dataclass(frozen=True)
class RawDetection:
    """One detector output row; bbox kept for provenance, unused by mining."""

    image_id: str
    label_name: str
    score: float
    bbox: tuple[float, float, float, float]

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise RangeError(f"score {self.score} outside [0, 1]")
        if self.bbox[2] < 0 or self.bbox[3] < 0:
            raise RangeError(f"bbox width/height must be non-negative: {self.bbox}")


def _field(obj, key, where):
    try:
        return obj[key]
    except (KeyError, TypeError):
        raise FormatError(f"{where} entry is missing field {key!r}") from None


def parse_coco(document: str) -> TransactionSet:
    """Parse a COCO instances-style JSON document.

    Only ``images[].id``, ``categories[].{id,name}`` and
    ``annotations[].{image_id,category_id}`` are read; every other field is
    ignored. Category ids are remapped to dense 0-based ids in ascending
    original-id order, and each image contributes one transaction regardless
    of how many annotation instances reference the same category.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    for key in ("images", "categories", "annotations"):
        if key not in data:
            raise FormatError(f"missing required array: {key!r}")

    cat_rows = data["categories"]
    orig_ids = [_field(c, "id", "category") for c in cat_rows]
    if len(set(orig_ids)) != len(orig_ids):
        raise FormatError("duplicate category ids")
    order = sorted(range(len(cat_rows)), key=lambda i: orig_ids[i])
    vocabulary = LabelVocabulary(_field(cat_rows[i], "name", "category") for i in order)
    dense = {orig_ids[i]: rank for rank, i in enumerate(order)}

    image_ids = [_field(img, "id", "image") for img in data["images"]]
    if len(set(image_ids)) != len(image_ids):
        raise FormatError("duplicate image ids")
    labels: dict = {img_id: set() for img_id in image_ids}

    for ann in data["annotations"]:
        img = _field(ann, "image_id", "annotation")
        cat = _field(ann, "category_id", "annotation")
        if img not in labels:
            raise IntegrityError(f"annotation references unknown image id {img}")
        if cat not in dense:
            raise IntegrityError(f"annotation references unknown category id {cat}")
        labels[img].add(dense[cat])

    transactions = tuple(
        Transaction.from_labels(str(img_id), labels[img_id]) for img_id in image_ids
    )
    return TransactionSet(vocabulary, transactions, image_count=len(image_ids))


def parse_voc(documents: Iterable[tuple[str, str]]) -> TransactionSet:
    """Parse a batch of Pascal VOC annotation XMLs given as (image_id, text).

    Only ``annotation/object/name`` elements are read. The vocabulary is the
    lexicographically sorted set of all object names seen across the batch,
    so it is discovered from the data rather than hard-coded.
    """
    docs = list(documents)
    per_image: list[tuple[str, set[str]]] = []
    seen_names: set[str] = set()
    for image_id, text in docs:
        try:
            root = ET.fromstring(text)
        except ET.ParseError as exc:
            raise ParseError(f"invalid XML for image {image_id!r}: {exc}") from exc
        if root.tag != "annotation":
            raise FormatError(
                f"image {image_id!r}: root element is {root.tag!r}, "
                "expected 'annotation'"
            )
        names: set[str] = set()
        for obj in root.findall("object"):
            el = obj.find("name")
            value = (el.text or "").strip() if el is not None else ""
            if not value:
                raise FormatError(f"image {image_id!r}: object with empty name")
            names.add(value)
        per_image.append((image_id, names))
        seen_names.update(names)

    vocabulary = LabelVocabulary(sorted(seen_names))
    transactions = tuple(
        Transaction.from_labels(image_id, (vocabulary.id_of(n) for n in names))
        for image_id, names in per_image
    )
    return TransactionSet(vocabulary, transactions, image_count=len(docs))


def parse_detections_jsonl(
    lines: Iterable[str] | str,
    vocabulary: LabelVocabulary,
    score_threshold: float,
) -> TransactionSet:
    """Parse detector output, one JSON object per line, dropping low scores.

    Each line holds ``{"image_id", "label", "score", "bbox"}``. Detections
    scoring below ``score_threshold`` are discarded. The vocabulary is
    closed: a label name outside it is an error. Images whose detections are
    all discarded still count toward ``image_count`` (empty transactions).
    """
    if not 0.0 <= score_threshold <= 1.0:
        raise UsageError(f"score threshold {score_threshold} outside [0, 1]")
    if isinstance(lines, str):
        lines = lines.splitlines()
    kept: dict[str, set[int]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid JSON: {exc.msg}") from exc
        try:
            image_id = str(obj["image_id"])
            label = obj["label"]
            score = float(obj["score"])
            bbox_raw = obj["bbox"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc!r}") from exc
        if not isinstance(bbox_raw, (list, tuple)) or len(bbox_raw) != 4:
            raise FormatError(f"line {lineno}: bbox must be [x, y, w, h]")
        try:
            detection = RawDetection(
                image_id, label, score, tuple(float(v) for v in bbox_raw)
            )
        except RangeError as exc:
            raise RangeError(f"line {lineno}: {exc}") from None
        if detection.label_name not in vocabulary:
            raise VocabularyError(
                f"line {lineno}: unknown label name {detection.label_name!r}"
            )
        slot = kept.setdefault(detection.image_id, set())
        if detection.score >= score_threshold:
            slot.add(vocabulary.id_of(detection.label_name))

    transactions = tuple(
        Transaction.from_labels(image_id, ids) for image_id, ids in kept.items()
    )
    return TransactionSet(vocabulary, transactions, image_count=len(kept))


def parse_transactions_tsv(lines: Iterable[str] | str) -> TransactionSet:
    """Parse the native TSV interchange format.

    One line per image: ``image_id<TAB>label1,label2,...`` where the label
    list may be empty. The vocabulary is the sorted set of distinct names, so
    the format round-trips with :func:`write_transactions_tsv` up to label-id
    renumbering.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    rows: list[tuple[str, list[str]]] = []
    seen_ids: set[str] = set()
    seen_names: set[str] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line:
            continue
        if "\t" not in line:
            raise FormatError(f"line {lineno}: expected image_id<TAB>labels")
        image_id, _, label_part = line.partition("\t")
        if not image_id:
            raise FormatError(f"line {lineno}: empty image id")
        if image_id in seen_ids:
            raise FormatError(f"line {lineno}: duplicate image id {image_id!r}")
        seen_ids.add(image_id)
        names = label_part.split(",") if label_part else []
        if any(not n for n in names):
            raise FormatError(f"line {lineno}: empty label name")
        rows.append((image_id, names))
        seen_names.update(names)

    vocabulary = LabelVocabulary(sorted(seen_names))
    transactions = tuple(
        Transaction.from_labels(image_id, (vocabulary.id_of(n) for n in names))
        for image_id, names in rows
    )
    return TransactionSet(vocabulary, transactions, image_count=len(rows))


def write_transactions_tsv(tset: TransactionSet) -> str:
    """Render a TransactionSet in the native TSV format, byte-deterministic.

    One line per transaction in stored order; labels appear as names in
    ascending-id order, comma-joined.
    """
    vocab = tset.vocabulary
    return "".join(
        f"{t.image_id}\t{','.join(vocab.name_of(i) for i in t.labels)}\n"
        for t in tset.transactions
    )

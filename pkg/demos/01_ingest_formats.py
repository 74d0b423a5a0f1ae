"""Walk through every supported input format.

All four parsers end up in the same place: a TransactionSet holding one
label-set per image plus a dense vocabulary. Repeated instances of a class
inside one image collapse to a single label, and images with no labels are
kept (they matter for support denominators).
"""

import json

from cooccur import (
    LabelVocabulary,
    parse_coco,
    parse_detections_jsonl,
    parse_transactions_tsv,
    parse_voc,
    write_transactions_tsv,
)


def show(title, tset):
    print(f"--- {title}")
    print(f"vocabulary ({len(tset.vocabulary)}): {tset.vocabulary.names}")
    for t in tset.transactions:
        names = [tset.vocabulary.name_of(i) for i in t.labels]
        print(f"  {t.image_id}: {names}")
    print(f"image_count = {tset.image_count}")
    print()


# 1. COCO-style JSON. Only images[].id, categories[].{id,name} and
#    annotations[].{image_id,category_id} are read. Note the two person
#    instances in image 1: they become one "person" label.
coco = {
    "images": [{"id": 1}, {"id": 2}, {"id": 3}],
    "categories": [{"id": 18, "name": "dog"}, {"id": 1, "name": "person"}],
    "annotations": [
        {"image_id": 1, "category_id": 1},
        {"image_id": 1, "category_id": 1},
        {"image_id": 1, "category_id": 18},
        {"image_id": 2, "category_id": 18},
    ],
}
show("COCO JSON", parse_coco(json.dumps(coco)))

# 2. Pascal VOC XML, one document per image. The vocabulary is discovered
#    from the data and sorted lexicographically.
voc_docs = [
    ("img001", "<annotation><object><name>dog</name></object>"
               "<object><name>person</name></object>"
               "<object><name>dog</name></object></annotation>"),
    ("img002", "<annotation><object><name>cat</name></object>"
               "<object><name>sofa</name></object></annotation>"),
]
show("Pascal VOC XML", parse_voc(voc_docs))

# 3. Detector output as JSONL, filtered by score against a closed
#    vocabulary. The dog in img1 scores 0.4 and is dropped at threshold 0.5,
#    but img1 itself still counts.
vocabulary = LabelVocabulary(["person", "dog"])
detections = "\n".join(
    json.dumps(d)
    for d in [
        {"image_id": "img1", "label": "person", "score": 0.9, "bbox": [1, 2, 3, 4]},
        {"image_id": "img1", "label": "dog", "score": 0.4, "bbox": [5, 6, 7, 8]},
        {"image_id": "img2", "label": "dog", "score": 0.6, "bbox": [0, 0, 9, 9]},
    ]
)
show("detections JSONL @ 0.5", parse_detections_jsonl(detections, vocabulary, 0.5))

# 4. The native TSV interchange format round-trips losslessly (label ids may
#    be renumbered, names never change).
text = "img1\tdog,person\nimg2\tcar,dog,person\nimg3\tcar,person\nimg4\tdog\n"
tset = parse_transactions_tsv(text)
show("native TSV", tset)
assert write_transactions_tsv(tset) == text
print("TSV round-trip: exact")

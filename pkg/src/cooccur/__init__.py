"""Co-occurrence statistics and frequent-pattern mining for multilabel data.

The pipeline: parse per-image label data (COCO JSON, Pascal VOC XML,
detections JSONL, or native TSV) into transactions, count label frequencies
and the pairwise co-occurrence matrix, pick base classes, mine frequent
itemsets with FP-growth, derive association rules, and report each base
class's co-occurring classes above a threshold. Everything is deterministic.
"""

from cooccur.errors import (
    ConsistencyError,
    CooccurError,
    DegenerateInputError,
    FormatError,
    IntegrityError,
    ParseError,
    RangeError,
    SizeLimitError,
    UsageError,
    VocabularyError,
)
from cooccur.ingest import (
    LabelVocabulary,
    RawDetection,
    Transaction,
    TransactionSet,
    parse_coco,
    parse_detections_jsonl,
    parse_transactions_tsv,
    parse_voc,
    write_transactions_tsv,
)
from cooccur.mining import (
    AssociationRule,
    FPTree,
    Itemset,
    MiningConfig,
    base_class_rules,
    brute_force_itemsets,
    build_fp_tree,
    dump_tree,
    fp_growth,
    rules_from_itemsets,
)
from cooccur.report import (
    CooccurrenceReport,
    ReportRow,
    build_report,
    chart_counts,
    ratio_4dp,
    render,
    render_chart_csv,
)
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

__version__ = "0.1.0"

__all__ = [
    "AssociationRule",
    "BaseClassPolicy",
    "ConsistencyError",
    "CooccurError",
    "CooccurrenceMatrix",
    "CooccurrenceReport",
    "CooccurrenceThreshold",
    "DegenerateInputError",
    "FPTree",
    "FormatError",
    "FrequencyTable",
    "IntegrityError",
    "Itemset",
    "LabelVocabulary",
    "MiningConfig",
    "ParseError",
    "RangeError",
    "RawDetection",
    "ReportRow",
    "SizeLimitError",
    "Transaction",
    "TransactionSet",
    "UsageError",
    "VocabularyError",
    "base_class_rules",
    "brute_force_itemsets",
    "build_fp_tree",
    "build_matrix",
    "build_report",
    "chart_counts",
    "cooccurring_for_base",
    "count_frequencies",
    "dump_tree",
    "fp_growth",
    "merge_matrices",
    "parse_coco",
    "parse_detections_jsonl",
    "parse_transactions_tsv",
    "parse_voc",
    "ratio_4dp",
    "render",
    "render_chart_csv",
    "rules_from_itemsets",
    "select_base_classes",
    "write_transactions_tsv",
]

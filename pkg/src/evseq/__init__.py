"""Compact, queryable representations of multidimensional event sequences.

An event grid assigns one activity to every (day, employee, time instant)
cell, with 0 meaning absent. Three index variants answer cell access and a
family of counting queries over it:

- ``wtrle``: composed wavelet-tree levels whose node bitvectors are
  run-length compressed.
- ``wtmap``: composed levels that strip runs first, index one symbol per
  run, and reconstruct counts through auxiliary bitmaps.
- ``baseline``: the run-compressed sequence itself, counting by traversal.
"""

from .baseline import BaselineSeq
from .bitvec import PlainBitVector, RleBitVector, SparseBitVector
from .chain import (IndexChain, QuerySpec, dimension_labels, format_query,
                    leaf_orders, parse_query_line)
from .errors import (BuildError, DomainError, EvseqError, FormatError,
                     IngestError, IntegrityError, NotFoundError, RangeError,
                     UnsupportedQueryError, UsageError)
from .events import (EventGrid, EventTuple, GridConfig, as_tuple_array,
                     day_prefix_end, decode_position, expand_to_grid,
                     infer_config, position_of, read_dictionary,
                     read_tuples_tsv, write_dictionary, write_tuples_tsv)
from .gen import (GenSpec, dataset_stats, gen_dataset, gen_queries,
                  sidecar_dict, write_sidecar)
from .storage import (index_from_bytes, index_to_bytes, load_index,
                      save_index, variant_of)
from .wavelet import WaveletTree
from .wtmap import WtMapLevel
from .wtrle import WtRleLevel

__version__ = "0.1.0"

__all__ = [
    "BaselineSeq",
    "BuildError",
    "DomainError",
    "EventGrid",
    "EventTuple",
    "EvseqError",
    "FormatError",
    "GenSpec",
    "GridConfig",
    "IndexChain",
    "IngestError",
    "IntegrityError",
    "NotFoundError",
    "PlainBitVector",
    "QuerySpec",
    "RangeError",
    "RleBitVector",
    "SparseBitVector",
    "UnsupportedQueryError",
    "UsageError",
    "WaveletTree",
    "WtMapLevel",
    "WtRleLevel",
    "as_tuple_array",
    "dataset_stats",
    "day_prefix_end",
    "decode_position",
    "dimension_labels",
    "expand_to_grid",
    "format_query",
    "gen_dataset",
    "gen_queries",
    "index_from_bytes",
    "index_to_bytes",
    "infer_config",
    "leaf_orders",
    "load_index",
    "parse_query_line",
    "position_of",
    "read_dictionary",
    "read_tuples_tsv",
    "save_index",
    "sidecar_dict",
    "variant_of",
    "write_dictionary",
    "write_sidecar",
    "write_tuples_tsv",
]

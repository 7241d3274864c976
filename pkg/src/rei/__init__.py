"""Bit-vector n-gram indexes that prefilter log lines before regex matching."""

from .baselines import InvertedIndex, SignatureIndex, build_inverted, build_signature, query_inverted, query_signature
from .bench import run_workload, sweep, trimmed_mean
from .corpus import Corpus, LogLine, Workload, load_corpus, load_queries
from .grams import GramDictionary, extract_literals, generate_ngrams
from .index import BitVectorIndex, IndexConfig, build_index, deserialize, index_size_bytes, serialize
from .query import ExactMatcher, QueryResult, ReMatcher, filter_groups, make_mask, query_indexed, query_scan
from .selection import GramSelector, compute_cover, english_grams, select_bene, select_freq, select_incr_bene
from .stats import bigram_in_trigram_overlap, intersection_percentage, selectivity, zipf_trigram_anomaly_probability
from .tuner import IndexTuner, estimate_score, index_size_bits, tune

__version__ = "0.1.0"

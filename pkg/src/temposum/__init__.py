"""Linguistic summaries of personal time series."""
from temposum.discretize import (BinningScheme, SymbolicSeries, gaussian_breakpoints, paa, partition,
                                 raw_range_scheme, sax_scheme, symbolize, z_normalize)
from temposum.errors import DataError, Suppressed, TemposumError
from temposum.fuzzy import Quantifier, best_pair, default_quantifiers, membership
from temposum.ingest import Dataset, load_cohort, load_csv
from temposum.metrics import NA, MetricSet, score
from temposum.mining import (Cluster, SequenceRule, WindowTuple, estimate_threshold, mine_frequent,
                             pair_with_followers, rules_from_patterns, similarity, squeezer)
from temposum.model import (Goal, Granularity, Guideline, ProtoformType, RunConfig, Summary, TimeSeries,
                            Vocabulary, default_health_vocabulary, heart_rate_vocabulary)
from temposum.pipeline import summarize, summarize_cohort
from temposum.protoforms import Context, gen_group
from temposum.provenance import ChartSpec, chart_for, write_chart

__version__ = "0.1.0"

__all__ = [
    "BinningScheme", "ChartSpec", "Cluster", "Context", "DataError", "Dataset", "Goal", "Granularity",
    "Guideline", "MetricSet", "NA", "ProtoformType", "Quantifier", "RunConfig", "SequenceRule", "Summary",
    "Suppressed", "SymbolicSeries", "TemposumError", "TimeSeries", "Vocabulary", "WindowTuple",
    "best_pair", "chart_for", "default_health_vocabulary", "default_quantifiers", "estimate_threshold",
    "gaussian_breakpoints", "gen_group", "heart_rate_vocabulary", "load_cohort", "load_csv", "membership",
    "mine_frequent", "paa", "pair_with_followers", "partition", "raw_range_scheme", "rules_from_patterns",
    "sax_scheme", "score", "similarity", "squeezer", "summarize", "summarize_cohort", "symbolize",
    "write_chart", "z_normalize",
]

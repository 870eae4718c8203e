"""The same machinery on a non-health series, driven only by vocabulary settings.

A synthetic daily temperature record is described with its own attribute
phrase, possessive and raw-value bins, with no code changes.

    python3 demos/weather_vocabulary.py
"""
from datetime import date, timedelta

import numpy as np

from temposum import RunConfig, TimeSeries, default_health_vocabulary, summarize

rng = np.random.default_rng(11)
days = 120
seasonal = 12 + 10 * np.sin(np.linspace(0, np.pi, days))
temps = seasonal + rng.normal(0, 2.5, days)
dates = tuple(date(2021, 3, 1) + timedelta(days=i) for i in range(days))
series = {"Temperature": TimeSeries("Temperature", dates, tuple(temps.round(1)), unit="degC")}

vocab = default_health_vocabulary()
vocab.attribute_phrases["Temperature"] = "temperature"
vocab.possessive = "the"
vocab.raw_bins["Temperature"] = [
    {"upper_bound": 5, "label": "cold"},
    {"upper_bound": 12, "label": "cool"},
    {"upper_bound": 20, "label": "mild"},
    {"upper_bound": 26, "label": "warm"},
    {"upper_bound": None, "label": "hot"},
]

run = summarize(series, RunConfig(), vocab,
                protoforms="StandardEvalTW,StandardEvalSTW,StandardTrend,Comparison,ClusterBasedPattern")
for s in run.summaries:
    print(s.text)

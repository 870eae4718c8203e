"""Small synthetic data builders shared by tests."""
from datetime import date, timedelta

import numpy as np

from temposum.model import TimeSeries

START = date(2018, 1, 1)


def series(name, values, start=START):
    dates = tuple(start + timedelta(days=i) for i in range(len(values)))
    return TimeSeries(name, dates, tuple(float(v) for v in values))


def noisy_user(seed, days=70, shift=0.0):
    rng = np.random.default_rng(seed)
    cal = 2000 + shift + 300 * rng.standard_normal(days)
    carb = 250 + 0.1 * (cal - 2000) + 30 * rng.standard_normal(days)
    return {"Calories": series("Calories", cal.round(1)), "Carbohydrates": series("Carbohydrates", carb.round(1))}


def write_user_csv(path, user):
    cal, carb = user["Calories"], user["Carbohydrates"]
    lines = ["Day,Calories,Carbohydrates"]
    lines += [f"{d},{a},{b}" for d, a, b in zip(cal.dates, cal.values, carb.values)]
    path.write_text("\n".join(lines) + "\n")

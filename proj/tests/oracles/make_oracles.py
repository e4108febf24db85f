#!/usr/bin/env python3
"""Regenerates the frozen oracle fixtures under tests/fixtures.

Needs numpy, scipy and vaderSentiment. The C++ tests only read the outputs,
so this script is run by hand when a fixture needs to change.
"""

import json
import math
import re
import string
from pathlib import Path

import numpy as np
from scipy import stats
from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"

VOWELS = set("aeiouy")
STRIP = string.punctuation + "‘’“”"


def syllables(word):
    w = "".join(c.lower() for c in word if c.isalpha())
    w = "".join(c if c.isascii() else "x" for c in w)
    groups = len(re.findall(r"[aeiouy]+", w))
    if groups > 1 and len(w) >= 2 and w.endswith("e") and w[-2] not in VOWELS:
        if not (len(w) >= 3 and w.endswith("le") and w[-3] not in VOWELS):
            groups -= 1
    return max(groups, 1)


def sentences(text):
    return max(1, sum(1 for seg in re.split(r"[.!?]", text) if seg.strip()))


def readability(text):
    words = text.split()
    w = len(words)
    s = sentences(text)
    letters = sum(c.isalpha() for c in text)
    alnum = sum(c.isalpha() or c.isdigit() for c in text)
    syl = [syllables(x) for x in words]
    wps = w / s
    spw = sum(syl) / w
    return {
        "ari": 4.71 * (alnum / w) + 0.5 * wps - 21.43,
        "cli": 0.0588 * (100.0 * letters / w) - 0.296 * (100.0 * s / w) - 15.8,
        "fk_grade": 0.39 * wps + 11.8 * spw - 15.59,
        "fr_ease_reversed": -(206.835 - 1.015 * wps - 84.6 * spw),
        "gunning_fog": 0.4 * (wps + 100.0 * sum(1 for y in syl if y >= 3) / w),
    }


def tokens(text):
    out = []
    for w in text.split():
        t = w.strip(STRIP).lower()
        if t:
            out.append(t)
    return out


def mtld_one_way(toks, threshold=0.72):
    factors = 0
    seen = set()
    start = 0
    current = 1.0
    for i, t in enumerate(toks):
        seen.add(t)
        current = len(seen) / (i - start + 1)
        if current <= threshold:
            factors += 1
            seen = set()
            start = i + 1
            current = 1.0
    total = factors + (1.0 - current) / (1.0 - threshold)
    if total == 0:
        total = 1.0
    return len(toks) / total


def diversity(text):
    toks = tokens(text)
    n = len(toks)
    types = len(set(toks))
    return {
        "ttr": types / n,
        "cttr": types / math.sqrt(2 * n),
        "mtld": (mtld_one_way(toks) + mtld_one_way(toks[::-1])) / 2,
    }


VADER_TITLES = [
    "I love this song",
    "This is the worst movie ever",
    "Absolutely amazing performance",
    "Not good at all",
    "The food was terrible and the service was slow",
    "What a beautiful day",
    "This is not bad",
    "I hate waiting in line",
    "Very happy with the results!!!",
    "The most AMAZING goal of the season",
    "A sad story about a lost dog",
    "Great video, thanks for sharing",
    "This is extremely disappointing",
    "Funny cat compilation",
    "Horrible accident on the highway",
    "The new album is fantastic",
    "I am not happy about this",
    "Incredible views from the summit",
    "Scary moment caught on camera",
    "Kind stranger helps lost child",
    "This game is so boring",
    "The best pizza in town",
    "An awful mistake by the referee",
    "Wonderful music for a calm evening",
    "Why is everyone so angry?",
    "He won the championship",
    "Failed attempt at a world record",
    "Hilarious prank gone wrong",
    "A truly excellent lecture",
    "Nobody likes a cheater",
]


def write_text_oracles():
    titles = (FIXTURES / "titles_100.txt").read_text(encoding="utf-8").splitlines()
    cols = ["ttr", "cttr", "mtld", "ari", "cli", "fk_grade", "fr_ease_reversed", "gunning_fog"]
    with open(FIXTURES / "readability_oracle.tsv", "w", encoding="utf-8") as f:
        f.write("title\t" + "\t".join(cols) + "\n")
        for t in titles:
            vals = {**diversity(t), **readability(t)}
            f.write(t + "\t" + "\t".join(repr(vals[c]) for c in cols) + "\n")

    sia = SentimentIntensityAnalyzer()
    with open(FIXTURES / "vader_oracle.tsv", "w", encoding="utf-8") as f:
        f.write("title\tcompound\n")
        for t in VADER_TITLES:
            f.write(f"{t}\t{sia.polarity_scores(t)['compound']!r}\n")


def write_stats_oracles():
    rng = np.random.default_rng(20240611)
    out = {}

    normal = np.round(rng.normal(0.0, 1.0, 60), 6)
    skewed = np.round(rng.lognormal(0.0, 0.8, 200), 6)
    out["k2"] = []
    for name, x in [("normal60", normal), ("lognormal200", skewed)]:
        r = stats.normaltest(x)
        out["k2"].append({"name": name, "sample": x.tolist(),
                          "k2": float(r.statistic), "p": float(r.pvalue)})

    out["student_t"] = []
    for t, dof in [(0.5, 3), (2.0, 10), (-1.3, 7.5), (3.7, 40), (8.0, 120), (1.0, 1)]:
        out["student_t"].append({"t": t, "dof": dof, "cdf": float(stats.t.cdf(t, dof)),
                                 "two_sided": float(2 * stats.t.sf(abs(t), dof))})

    out["wilcoxon_approx"] = []
    cont = np.round(rng.normal(0.15, 1.0, 80), 6)
    tied = np.round(rng.normal(0.3, 2.0, 120)).astype(float)
    for name, x in [("continuous80", cont), ("tied120", tied)]:
        nz = x[x != 0]
        r = stats.wilcoxon(nz, zero_method="wilcox", correction=True, method="approx")
        out["wilcoxon_approx"].append({"name": name, "sample": x.tolist(),
                                       "w": float(r.statistic), "p": float(r.pvalue)})

    out["paired_t"] = []
    for name, x in [("small", np.array([2.0, -1.0, 3.0, 0.0, 1.0])),
                    ("continuous80", cont)]:
        r = stats.ttest_1samp(x, 0.0)
        out["paired_t"].append({"name": name, "sample": x.tolist(),
                                "t": float(r.statistic), "p": float(r.pvalue)})

    a = np.round(rng.normal(0.0, 1.0, 40), 6)
    b = np.round(rng.normal(0.5, 2.0, 25), 6)
    r = stats.ttest_ind(a, b, equal_var=False)
    out["welch"] = {"a": a.tolist(), "b": b.tolist(), "t": float(r.statistic), "p": float(r.pvalue)}

    x = np.round(rng.normal(0.0, 1.0, 50), 3)
    y = np.round(x + rng.normal(0.0, 1.5, 50), 1)
    out["correlation"] = {"x": x.tolist(), "y": y.tolist(),
                          "pearson": float(stats.pearsonr(x, y)[0]),
                          "spearman": float(stats.spearmanr(x, y)[0])}

    with open(FIXTURES / "stats_oracle.json", "w", encoding="utf-8") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    write_text_oracles()
    write_stats_oracles()

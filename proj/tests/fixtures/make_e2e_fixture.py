#!/usr/bin/env python3
# Copyright 2026  The soundscape authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.
"""Writes the end-to-end scores/annotations fixture.

Per class, recordings above the planted threshold are true positives with
false positives spread evenly among them; below it sit all negatives and,
at the very bottom, the missed positives. Scores are k/1000 + 0.0005 so the
optimal cut lands exactly on the planted threshold. A few negatives carry a
short segment that the duration filter removes.
"""

import json
import random
import sys
from pathlib import Path

CLASSES = ["anthropophony", "biophony", "geophony"]
THETA = {"anthropophony": 0.722, "biophony": 0.920, "geophony": 0.571}
# (tp, fp, fn) chosen so F1 at the planted threshold is .678 / .937 / .776.
COUNTS = {"anthropophony": (40, 19, 19), "biophony": (59, 4, 4),
          "geophony": (45, 13, 13)}
RECORDINGS = 200
SHORT_PER_CLASS = 10
DURATION = 60.0
WINDOWS = 6


def q(k):
    return k / 1000.0 + 0.0005


def best_cut(scores, truth):
    """Exhaustive search over midpoints; ties go to the higher threshold."""
    distinct = sorted(set(scores))
    cuts = [1.0] + [(a + b) / 2 for a, b in zip(distinct, distinct[1:])][::-1]
    cuts.append(0.0)
    best = None
    for t in cuts:
        tp = sum(1 for s, y in zip(scores, truth) if s > t and y)
        fp = sum(1 for s, y in zip(scores, truth) if s > t and not y)
        fn = sum(1 for s, y in zip(scores, truth) if s <= t and y)
        f1 = 2 * tp / (2 * tp + fp + fn) if tp else 0.0
        if best is None or f1 > best[1] + 1e-12:
            best = (t, f1)
    return best


def main(out_dir):
    rng = random.Random(20240601)
    ids = [f"rec{i:03d}" for i in range(RECORDINGS)]
    max_score = {r: {} for r in ids}
    segments = {r: [] for r in ids}

    for cls in CLASSES:
        tp, fp, fn = COUNTS[cls]
        theta_k = round(THETA[cls] * 1000)
        order = ids[:]
        rng.shuffle(order)
        pos_hit, neg_hit = order[:tp], order[tp:tp + fp]
        missed = order[tp + fp:tp + fp + fn]
        negatives = order[tp + fp + fn:]
        short = set(negatives[:SHORT_PER_CLASS])

        # Above the cut: false positives spread evenly through the hits.
        fp_slots = {int((i + 0.5) * (tp + fp) / fp) for i in range(fp)}
        hits, falses = iter(pos_hit), iter(neg_hit)
        above = [next(falses) if slot in fp_slots else next(hits)
                 for slot in range(tp + fp)]
        assert sorted(above) == sorted(pos_hit + neg_hit)
        # Low ranks closest to the cut are hits, so raising the cut loses tp.
        for rank, r in enumerate(reversed(above)):
            max_score[r][cls] = q(theta_k + rank)
        for rank, r in enumerate(negatives):
            max_score[r][cls] = q(theta_k - 1 - rank // 2)
        for rank, r in enumerate(missed):
            max_score[r][cls] = q(rank)

        for r in pos_hit + missed:
            length = rng.choice([5.0, 8.0, 12.0, 20.0, 35.0])
            start = rng.randrange(0, int(DURATION - length) + 1)
            segments[r].append((cls, float(start), start + length))
        for r in short:
            length = rng.choice([1.0, 1.5, 2.0, 2.5])
            start = rng.randrange(0, 50)
            segments[r].append((cls, float(start), start + length))

        truth = [r in pos_hit or r in missed for r in ids]
        t, f1 = best_cut([max_score[r][cls] for r in ids], truth)
        assert abs(t - THETA[cls]) < 1e-9, (cls, t, f1)
        print(f"{cls}: planted {THETA[cls]} f1 {f1:.4f}", file=sys.stderr)

    out = Path(out_dir)
    with open(out / "e2e_scores.csv", "w") as f:
        f.write("recording_id,window_start_s,anthropophony,biophony,geophony\n")
        for r in ids:
            peak_window = {c: rng.randrange(WINDOWS) for c in CLASSES}
            for w in range(WINDOWS):
                row = []
                for c in CLASSES:
                    m = max_score[r][c]
                    if w == peak_window[c]:
                        row.append(m)
                    else:
                        row.append(max(0.0, round(m - 0.001 * rng.randint(1, 400), 4)))
                f.write(f"{r},{w * 10}," + ",".join(f"{v:.4f}" for v in row) + "\n")
    with open(out / "e2e_annotations.csv", "w") as f:
        f.write("recording_id,class,start_s,end_s\n")
        for r in ids:
            if not segments[r]:
                f.write(f"{r},silence,0,{DURATION:g}\n")
            for cls, a, b in sorted(segments[r]):
                f.write(f"{r},{cls},{a:g},{b:g}\n")
    pda = {"mode": "summed", "anthropophony": 0.05, "biophony": 0.05,
           "geophony": 0.05}
    with open(out / "e2e_tune_config.json", "w") as f:
        json.dump({"seed": 7, "pda": pda}, f, indent=2)
        f.write("\n")
    with open(out / "e2e_eval_config.json", "w") as f:
        json.dump({"seed": 7, "pda": pda,
                   "thresholds": {"mode": "per-class", **THETA}}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)

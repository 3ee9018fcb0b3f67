#!/usr/bin/env python3
# Copyright 2026 The Scorpion Twin Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact-arithmetic mAP reference for the fixtures in tests/fixtures/map.

Recomputes every expected value with fractions.Fraction and exits non-zero
on any disagreement with the fixture file.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path


def area(b):
    return max(Fraction(0), b[2] - b[0]) * max(Fraction(0), b[3] - b[1])


def iou(a, b):
    inter = [max(a[0], b[0]), max(a[1], b[1]), min(a[2], b[2]), min(a[3], b[3])]
    i = area(inter) if inter[0] < inter[2] and inter[1] < inter[3] else Fraction(0)
    u = area(a) + area(b) - i
    return i / u if u > 0 else Fraction(0)


def frac_box(b):
    return [Fraction(str(v)) for v in b]


def average_precision(hits, n_gt):
    if n_gt == 0 or not hits:
        return Fraction(0)
    points = []
    tp = 0
    for rank, hit in enumerate(hits, start=1):
        tp += hit
        points.append((Fraction(tp, n_gt), Fraction(tp, rank)))
    ap = Fraction(0)
    previous = Fraction(0)
    for i, (recall, _) in enumerate(points):
        best = max(p for _, p in points[i:])
        ap += (recall - previous) * best
        previous = recall
    return ap


def evaluate(fixture):
    threshold = Fraction(str(fixture["iou_threshold"]))
    images = fixture["images"]
    labels = sorted({d["label"] for im in images for d in im["detections"]} |
                    {g["label"] for im in images for g in im["truth"]})
    result = {"ap": {}, "flagged": []}
    total_tp = total_det = total_gt = 0
    present = []
    for label in labels:
        ranked = []
        for im_index, im in enumerate(images):
            for d_index, d in enumerate(im["detections"]):
                if d["label"] == label:
                    box = frac_box(d["box"])
                    ranked.append((-Fraction(str(d["confidence"])), box, im_index, d_index))
        ranked.sort()
        used = {(i, j): False for i, im in enumerate(images) for j in range(len(im["truth"]))}
        hits = []
        for _, box, im_index, _ in ranked:
            best, best_j = None, None
            for j, g in enumerate(images[im_index]["truth"]):
                if g["label"] != label or used[(im_index, j)]:
                    continue
                o = iou(box, frac_box(g["box"]))
                if o >= threshold and (best is None or o > best):
                    best, best_j = o, j
            if best_j is not None:
                used[(im_index, best_j)] = True
            hits.append(1 if best_j is not None else 0)
        n_gt = sum(1 for im in images for g in im["truth"] if g["label"] == label)
        ap = average_precision(hits, n_gt)
        result["ap"][label] = ap
        if n_gt == 0:
            result["flagged"].append(label)
        else:
            present.append(ap)
        total_tp += sum(hits)
        total_det += len(hits)
        total_gt += n_gt
    result["map"] = sum(present, Fraction(0)) / len(present) if present else Fraction(0)
    result["precision"] = Fraction(total_tp, total_det) if total_det else Fraction(0)
    result["recall"] = Fraction(total_tp, total_gt) if total_gt else Fraction(0)
    return result


def main(paths):
    failures = 0
    for path in paths:
        fixture = json.loads(Path(path).read_text())
        expected = fixture["expected"]
        got = evaluate(fixture)
        checks = [("map", got["map"], Fraction(expected["map"])),
                  ("precision", got["precision"], Fraction(expected["precision"])),
                  ("recall", got["recall"], Fraction(expected["recall"]))]
        for label, value in expected["ap"].items():
            checks.append((f"ap[{label}]", got["ap"].get(label), Fraction(value)))
        checks.append(("flagged", sorted(got["flagged"]), sorted(expected.get("flagged", []))))
        for name, value, want in checks:
            ok = value == want
            failures += not ok
            print(f"{'ok  ' if ok else 'FAIL'} {Path(path).name} {name}: {value} (fixture {want})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

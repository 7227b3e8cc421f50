#!/usr/bin/env python3
# Copyright 2026 The palo-forge Authors
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

"""Writes the test fixtures under tests/fixtures. Deterministic."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
LANGS = ["en", "zh", "fr", "es", "ru", "ja", "ar", "hi", "bn", "ur"]

TABLE1 = {
    "LLaVA-7B": [67.9, 55.7, 62.4, 64.5, 55.3, 59.2, 38.9, 29.4, 13.9, 21.8],
    "PALO-7B": [64.2, 55.7, 58.3, 61.0, 57.4, 57.5, 57.8, 57.6, 51.7, 55.3],
    "LLaVA-13B": [69.5, 62.9, 67.5, 64.6, 62.3, 65.3, 37.2, 27.8, 20.4, 22.1],
    "PALO-13B": [65.5, 62.1, 66.4, 65.9, 62.4, 60.6, 56.9, 66.8, 53.5, 59.6],
    "MobileVLM-1.7B": [46.6, 23.2, 28.1, 29.1, 28.1, 26.4, 12.4, 13.7, 15.6, 15.6],
    "MobilePALO-1.7B": [48.2, 34.0, 42.6, 40.1, 38.2, 32.5, 32.8, 26.8, 19.9, 24.1],
}
PAIRS = [("LLaVA-7B", "PALO-7B"), ("LLaVA-13B", "PALO-13B"),
         ("MobileVLM-1.7B", "MobilePALO-1.7B")]

TABLE2 = [
    ("665K-English", "en", [67.9, 55.7, 62.4, 64.5, 55.3, 59.2, 38.9, 29.4, 13.9, 21.8]),
    ("150K-Chinese", "zh", [59.3, 55.0, 60.0, 57.0, 32.9, 40.5, 21.2, 20.3, 21.7, 19.3]),
    ("150K-French", "fr", [51.0, 41.0, 57.8, 54.4, 35.4, 54.6, 17.6, 23.2, 13.1, 16.7]),
    ("150K-Spanish", "es", [61.1, 52.2, 54.8, 61.6, 50.1, 51.7, 27.8, 24.4, 15.4, 18.5]),
    ("150K-Russian", "ru", [55.2, 51.1, 62.2, 60.6, 57.8, 50.9, 25.3, 28.2, 13.6, 16.7]),
    ("150K-Japanese", "ja", [54.5, 41.1, 59.2, 57.6, 36.1, 57.6, 18.0, 23.6, 13.3, 18.4]),
    ("150K-Arabic", "ar", [67.8, 42.9, 56.4, 54.7, 38.4, 44.7, 56.0, 25.7, 19.4, 33.4]),
    ("150K-Hindi", "hi", [52.2, 39.1, 56.8, 54.0, 35.0, 33.4, 18.4, 54.1, 12.8, 23.8]),
    ("150K-Bengali", "bn", [26.4, 40.2, 56.0, 54.5, 37.3, 26.0, 12.8, 16.3, 34.8, 14.0]),
    ("150K-Urdu", "ur", [28.9, 30.6, 44.6, 50.1, 22.5, 16.0, 22.1, 25.5, 20.9, 47.7]),
    ("Combined", None, [64.2, 55.7, 58.3, 61.0, 57.4, 57.5, 57.8, 57.6, 51.7, 55.3]),
]

SUBJECTS = ["a red bicycle", "two dogs", "a market stall", "a harbour at dusk",
            "a kitchen table", "a mountain trail", "a city bus", "a birthday cake",
            "a chess board", "a flooded street"]


def scores(values):
    # Strings keep the published one-decimal text exact.
    return {lang: f"{v:.1f}" for lang, v in zip(LANGS, values)}


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n",
                            encoding="utf-8")


def record(i, turns):
    subject = SUBJECTS[i % len(SUBJECTS)]
    conv = []
    for t in range(turns // 2):
        q = f"What is happening around {subject}?" if t else \
            f"<image>\nDescribe {subject} in this picture."
        a = f"The picture shows {subject}. Detail number {t + 1} of record {i}."
        conv.append({"from": "human", "value": q})
        conv.append({"from": "gpt", "value": a})
    return {"id": f"rec{i:03d}", "image": f"images/{i:06d}.jpg", "conversations": conv}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    dump("mini.json", [record(i, 2 + 2 * (i % 2)) for i in range(3)])
    dump("records50.json", [record(i, 4) for i in range(50)])

    bench = []
    cats = ["conversation", "detail", "complex"]
    for q in range(60):
        image = q % 24
        bench.append({
            "image_id": f"img{image:02d}",
            "question_index": q,
            "question": f"What stands out about {SUBJECTS[q % 10]} in photo {image}?",
            "reference_answer": f"The photo shows {SUBJECTS[q % 10]} clearly. Item {q}.",
            "category": cats[q % 3],
            "lang": "en",
        })
    (OUT / "bench_en.jsonl").write_text(
        "".join(json.dumps(b, ensure_ascii=False) + "\n" for b in bench),
        encoding="utf-8")

    dump("table1_llava7b.json",
         {"model_id": "LLaVA-7B", "scores": scores(TABLE1["LLaVA-7B"])})
    dump("table1.json", {
        "rows": [{"model_id": m, "scores": scores(v)} for m, v in TABLE1.items()],
        "deltas": [{"baseline": b, "model": m} for b, m in PAIRS],
    })
    dump("table2.json", {"runs": [
        dict({"config": c, "scores": scores(v)}, **({"lang": l} if l else {}))
        for c, l, v in TABLE2]})


if __name__ == "__main__":
    main()

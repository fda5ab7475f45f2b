#!/usr/bin/env python3
"""Regenerates data/fixture/. Output is deterministic."""

import csv
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "fixture"

VOCAB = (
    "the campaign said voters state county ballot rally debate poll senate house economy "
    "jobs health care plan tonight reporter interview vice president administration policy "
    "country people week tax virus pandemic vaccine stimulus court justice election mail "
    "police protest city governor speech ad race swing district turnout crowd message "
    "question answer record night morning network coverage story news panel guest host"
).split()

SHOWS = {
    "fox": ["Hannity", "Tucker Carlson Tonight", "The Ingraham Angle", "Fox News Sunday"],
    "msnbc": ["The Rachel Maddow Show", "All In", "Hardball", "Deadline White House"],
}


def body(rng, words, mention_biden=True, mention_trump=True):
    out = [rng.choice(VOCAB) for _ in range(words)]
    # Names are placed as two-word tokens; the total stays `words`.
    slots = sorted(rng.sample(range(0, words - 2, 3), 6))
    names = []
    if mention_biden:
        names += ["Joe Biden"] * 3
    if mention_trump:
        names += ["Donald Trump"] * 3
    rng.shuffle(names)
    for slot, name in zip(slots, names):
        first, last = name.split()
        out[slot] = first
        out[slot + 1] = last
    return " ".join(out)


def transcripts(source, qualifying, rng):
    recs = []
    for i in range(qualifying):
        words = rng.randint(3000, 3400)
        day = 1 + (i * 3) % 28
        month = 6 + i % 5
        recs.append({
            "id": f"{source}-{i + 1:03d}",
            "source": "FoxNews" if source == "fox" else "MSNBC",
            "date": f"2020-{month:02d}-{day:02d}",
            "show": rng.choice(SHOWS[source]),
            "text": body(rng, words),
        })
    decoys = [
        ("early", "2020-05-28", 3200, True, True),
        ("late", "2020-11-02", 3200, True, True),
        ("no-trump", "2020-08-14", 3200, True, False),
        ("no-biden", "2020-09-09", 3100, False, True),
        ("short", "2020-07-07", 1200, True, True),
        ("long", "2020-10-12", 3900, True, True),
    ]
    for tag, date, words, b, t in decoys:
        recs.append({
            "id": f"{source}-decoy-{tag}",
            "source": "FoxNews" if source == "fox" else "MSNBC",
            "date": date,
            "show": rng.choice(SHOWS[source]),
            "text": body(rng, words, b, t),
        })
    rng.shuffle(recs)
    return recs


SURVEY_COLUMNS = [
    "id", "gender", "age", "race_ethnicity", "education", "income", "ideology_self",
    "ideology_dem_party", "ideology_rep_party", "trust_fox", "trust_msnbc",
]

# Every nonsubstantive code appears at least once in an ideology item and a
# trust item.
SURVEY_ROWS = [
    ["r01", 2, 24, 2, 4, 9, 2, 3, 6, 1, 4],
    ["r02", 1, 57, 1, 2, 13, 6, 1, 7, 5, 1],
    ["r03", 0, 35, 4, 3, 1, -7, -7, 5, -7, 3],
    ["r04", 2, 71, 3, 5, 18, -6, 2, -6, 2, -6],
    ["r05", 1, 19, 1, 1, 2, -1, 4, 6, -1, 2],
    ["r06", 2, 44, 2, 3, 10, 77, 77, 77, 77, 77],
    ["r07", 1, 63, 1, 4, 15, 98, 3, 98, 98, 4],
    ["r08", 2, 29, 4, 5, 7, 99, 99, 5, 3, 99],
    ["r09", 1, 82, 3, 2, 5, 4, 2, 7, 4, 98],
    ["r10", 2, 50, 1, 4, 12, 7, 1, 7, 5, 1],
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20201103)
    for source, n in (("fox", 11), ("msnbc", 10)):
        with open(OUT / f"{source}.jsonl", "w", encoding="utf-8", newline="\n") as f:
            for rec in transcripts(source, n, rng):
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    with open(OUT / "anes_sample.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(SURVEY_COLUMNS)
        w.writerows(SURVEY_ROWS)


if __name__ == "__main__":
    main()

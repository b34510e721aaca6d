#!/usr/bin/env python3
"""Generate the golden end-to-end dataset checked into tests/data/golden/.

Three transparent categories (food, staff, ambience) with disjoint topic
vocabularies plus neutral filler words.  The training corpus is sampled
deterministically; the 30 test sentences are hand-written below.  Rerunning
this script reproduces the checked-in files byte for byte.

Usage:
    python scripts/make_golden.py [output_dir]
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

SEED = 7
N_TRAIN_PER_TOPIC = 300

FOOD_VOCAB = [
    "food", "pizza", "pasta", "delicious", "bread", "tasty", "cheese",
    "spicy", "sauce", "noodles", "soup", "fresh", "dessert", "sweet",
    "menu", "seafood", "tender", "steak", "salad", "crisp", "rice",
    "cooked", "burger", "crunchy", "fries", "chicken", "curry", "savory",
    "flavor", "dish", "kitchen", "sushi", "flavorful", "dumplings",
    "meal", "tasted",
]

STAFF_VOCAB = [
    "staff", "waiter", "server", "friendly", "attentive", "greeted",
    "smile", "manager", "apologized", "politely", "delay", "members",
    "helpful", "quick", "respond", "hostess", "seated", "promptly",
    "courteously", "rude", "waitress", "ignored", "bartender",
    "welcoming", "chatted", "kindly", "service", "slow", "crew",
    "polite", "employees", "cheerful", "worked", "answered", "refilled",
    "attentively",
]

AMBIENCE_VOCAB = [
    "ambience", "dim", "lighting", "created", "cozy", "romantic",
    "atmosphere", "soft", "music", "elegant", "chandeliers", "decor",
    "modern", "wooden", "walls", "noisy", "crowded", "room", "relaxed",
    "vibe", "candles", "quiet", "jazz", "intimate", "patio", "charming",
    "views", "gentle", "breeze", "stylish", "furniture", "artwork",
    "character", "interior", "bright", "airy", "beautifully",
    "decorated", "calm", "peaceful", "setting", "tasteful", "ornaments",
    "magical", "twinkling", "fairy", "lights",
]

# Neutral words shared across every topic during training; they dilute but
# never decide a sentence's category.
FILLERS = [
    "place", "evening", "table", "night", "visit", "really", "quite",
    "felt", "came", "went", "stayed", "arrived", "offered", "offers",
    "gave", "made", "loved", "warm", "amazing", "perfectly", "absolutely",
    "every", "rich", "shared", "ruined", "played", "created", "hard",
    "remained", "questions", "glasses",
]

TOPICS = [
    ("food", FOOD_VOCAB),
    ("staff", STAFF_VOCAB),
    ("ambience", AMBIENCE_VOCAB),
]

TEST_SENTENCES = [
    # food
    ("The pizza and pasta were absolutely delicious.", "food"),
    ("Our bread arrived warm with tasty cheese.", "food"),
    ("I loved the spicy sauce on the noodles.", "food"),
    ("The soup tasted fresh and the dessert was sweet.", "food"),
    ("Their menu offers delicious seafood and tender steak.", "food"),
    ("The salad was crisp and the rice perfectly cooked.", "food"),
    ("We shared a tasty burger with crunchy fries.", "food"),
    ("The chicken curry had a rich savory flavor.", "food"),
    ("Every dish from the kitchen tasted amazing.", "food"),
    ("Fresh sushi and flavorful dumplings made the meal.", "food"),
    # staff
    ("The waiter was friendly and very attentive.", "staff"),
    ("Our server greeted us with a warm smile.", "staff"),
    ("The manager apologized politely for the delay.", "staff"),
    ("Staff members were helpful and quick to respond.", "staff"),
    ("The hostess seated us promptly and courteously.", "staff"),
    ("A rude waitress ignored our table all evening.", "staff"),
    ("The bartender was welcoming and chatted kindly.", "staff"),
    ("Service was slow but the crew stayed polite.", "staff"),
    ("The employees worked hard and remained cheerful.", "staff"),
    ("Our waiter answered questions and refilled glasses attentively.", "staff"),
    # ambience
    ("The dim lighting created a cozy romantic atmosphere.", "ambience"),
    ("Soft music played under the elegant chandeliers.", "ambience"),
    ("The decor felt modern with warm wooden walls.", "ambience"),
    ("A noisy crowded room ruined the relaxed vibe.", "ambience"),
    ("Candles and quiet jazz made the evening intimate.", "ambience"),
    ("The patio offered charming views and a gentle breeze.", "ambience"),
    ("Stylish furniture and artwork gave the place character.", "ambience"),
    ("The interior was bright airy and beautifully decorated.", "ambience"),
    ("A calm peaceful setting with tasteful ornaments.", "ambience"),
    ("The ambience was magical with twinkling fairy lights.", "ambience"),
]


def training_sentences(rng: random.Random) -> list[str]:
    lines = []
    for _, vocab in TOPICS:
        for i in range(N_TRAIN_PER_TOPIC):
            words = [vocab[i % len(vocab)]]  # round-robin guarantees coverage
            words += rng.choices(vocab, k=rng.randint(3, 7))
            if i % 2 == 0:
                words.append(FILLERS[(i // 2) % len(FILLERS)])
            rng.shuffle(words)
            lines.append(" ".join(words) + ".")
    rng.shuffle(lines)
    return lines


CONFIG = """\
[paths]
raw_corpus = train_corpus.txt
filtered_corpus = out/filtered.txt
model = out/vectors.txt
test_data = test_data.tsv
output_attention = out/output1.tsv
output_categories = out/output2.tsv
aspect_lexicon = out/aspects.tsv
eval_report = out/eval.tsv
timing_report = out/timing.tsv
expanded_groups = out/groups_expanded.tsv

[train]
dimensions = 64
window = 5
negative_samples = 5
epochs = 15
min_count = 5
seed = 11

[classify]
aggregation = mean
top_n_aspects = 25

[groups]
food = food
staff = staff
ambience = ambience
"""


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "tests" / "data" / "golden"
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    train_path = out_dir / "train_corpus.txt"
    train_path.write_text("\n".join(training_sentences(rng)) + "\n", encoding="utf-8")

    test_path = out_dir / "test_data.tsv"
    rows = ["sentence_text\tgold_category"]
    rows += [f"{text}\t{gold}" for text, gold in TEST_SENTENCES]
    test_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    (out_dir / "config.ini").write_text(CONFIG, encoding="utf-8")

    print(f"wrote {train_path} ({N_TRAIN_PER_TOPIC * len(TOPICS)} lines)")
    print(f"wrote {test_path} ({len(TEST_SENTENCES)} sentences)")
    print(f"wrote {out_dir / 'config.ini'}")


if __name__ == "__main__":
    main()

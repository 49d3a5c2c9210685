#!/usr/bin/env python3
"""Regenerate data/minicorpus/{en.txt,gold.tsv}.

1000 single-topic documents over 10 disjoint topic vocabularies, plus a
40-pair gold set: 20 within-topic pairs rated high, 20 cross-topic pairs
rated low. Output is a pure function of SEED.
"""

import argparse
import pathlib
import random

SEED = 20240501
N_DOCS = 1000

TOPICS = {
    "astronomy": "planet comet orbit galaxy nebula telescope asteroid meteor eclipse "
                 "satellite supernova quasar cosmos moonrise starlight observatory",
    "cooking": "recipe oven skillet simmer saucepan garlic onion butter flour dough "
               "roast marinade spatula broth pastry seasoning",
    "music": "melody rhythm guitar violin chord tempo orchestra piano drummer harmony "
             "concert symphony lyric trumpet cello soprano",
    "sailing": "sailboat harbor mast anchor keel rudder deckhand regatta mooring "
               "tide hull jib starboard yacht buoy compass",
    "botany": "petal stem root seedling pollen leaf blossom orchid fern moss "
              "chlorophyll sapling bulb tulip stamen sprout",
    "medicine": "patient doctor nurse clinic surgery vaccine diagnosis therapy "
                "fever symptom hospital prescription stethoscope ward dosage ailment",
    "finance": "bank loan interest mortgage stock bond investor dividend budget "
               "credit inflation portfolio equity lender savings broker",
    "geology": "granite basalt volcano magma fossil quartz sediment tectonic "
               "limestone mineral crater lava boulder erosion glacier canyon",
    "chess": "bishop knight rook pawn checkmate gambit castling grandmaster "
             "endgame stalemate queen opening tournament chessboard blitz tactic",
    "weather": "rain thunder drizzle forecast humidity storm breeze cloud snowfall "
               "hail lightning monsoon frost fog barometer blizzard",
}

FILLER = "the a of and to in with on for is was at by from that this it".split()

# (topic, word index, word index, rating); indices into the topic word list.
WITHIN = [
    ("astronomy", 0, 2, 9.4), ("astronomy", 4, 3, 8.1),
    ("cooking", 1, 2, 8.8), ("cooking", 7, 8, 7.6),
    ("music", 0, 9, 9.6), ("music", 3, 2, 7.9),
    ("sailing", 3, 4, 8.5), ("sailing", 1, 8, 9.1),
    ("botany", 0, 6, 9.0), ("botany", 7, 9, 7.4),
    ("medicine", 0, 1, 9.7), ("medicine", 4, 5, 8.3),
    ("finance", 0, 1, 8.9), ("finance", 4, 5, 8.0),
    ("geology", 3, 2, 9.3), ("geology", 4, 5, 7.2),
    ("chess", 1, 0, 8.6), ("chess", 2, 3, 7.8),
    ("weather", 0, 5, 9.2), ("weather", 1, 10, 8.4),
]
CROSS = [
    ("astronomy", 0, "cooking", 0, 0.4), ("music", 1, "finance", 2, 1.3),
    ("sailing", 3, "botany", 0, 0.9), ("medicine", 0, "chess", 0, 1.8),
    ("geology", 0, "weather", 5, 2.1), ("chess", 4, "cooking", 5, 0.2),
    ("finance", 0, "sailing", 0, 1.1), ("botany", 1, "astronomy", 2, 0.6),
    ("weather", 1, "music", 2, 1.6), ("cooking", 1, "geology", 1, 0.3),
    ("astronomy", 5, "medicine", 3, 1.4), ("music", 0, "chess", 6, 0.8),
    ("sailing", 6, "weather", 2, 2.3), ("botany", 9, "finance", 4, 0.5),
    ("geology", 6, "music", 3, 1.0), ("medicine", 5, "botany", 5, 1.9),
    ("finance", 7, "astronomy", 7, 0.7), ("chess", 5, "sailing", 9, 1.2),
    ("weather", 3, "medicine", 6, 1.7), ("cooking", 9, "geology", 9, 0.1),
]


def words(topic):
    return TOPICS[topic].split()


def make_documents(rng):
    names = sorted(TOPICS)
    docs = []
    for i in range(N_DOCS):
        vocab = words(names[i % len(names)])
        # Zipf-like preference inside the topic.
        weights = [1.0 / (r + 1) ** 0.6 for r in range(len(vocab))]
        length = rng.randint(18, 36)
        tokens = []
        for _ in range(length):
            if rng.random() < 0.3:
                tokens.append(rng.choice(FILLER))
            else:
                tokens.append(rng.choices(vocab, weights)[0])
        docs.append(" ".join(tokens))
    return docs


def make_gold():
    rows = []
    for topic, i, j, score in WITHIN:
        rows.append((words(topic)[i], words(topic)[j], score))
    for t1, i, t2, j, score in CROSS:
        rows.append((words(t1)[i], words(t2)[j], score))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    default_out = pathlib.Path(__file__).resolve().parent.parent / "data" / "minicorpus"
    parser.add_argument("--out", type=pathlib.Path, default=default_out)
    args = parser.parse_args()

    all_words = [w for t in TOPICS for w in words(t)]
    assert len(all_words) == len(set(all_words)), "topic vocabularies overlap"
    assert not set(all_words) & set(FILLER)

    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    docs = make_documents(rng)
    (args.out / "en.txt").write_text("\n".join(docs) + "\n", encoding="utf-8")
    gold = make_gold()
    assert len(gold) == 40
    with open(args.out / "gold.tsv", "w", encoding="utf-8") as f:
        f.write("# synthetic gold set: within-topic pairs high, cross-topic pairs low\n")
        f.write("word1\tword2\tscore\n")
        for w1, w2, s in gold:
            f.write(f"{w1}\t{w2}\t{s}\n")


if __name__ == "__main__":
    main()

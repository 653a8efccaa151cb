#!/usr/bin/env python3
"""Regenerate the bundled demo corpus under data/demo (deterministic)."""
import csv
import json
import random
import sys
from pathlib import Path

LEXICON = {
    "topic modeling": ["topic model", "topic models", "latent dirichlet allocation", "lda"],
    "network analysis": ["social network analysis", "network analysis", "graph analysis"],
    "text mining": ["text mining", "text analysis"],
    "named entity recognition": ["entity recognition", "ner"],
    "sentiment analysis": ["opinion mining", "sentiment classification"],
    "geographic information system": ["gis", "geographic information systems", "spatial mapping"],
    "optical character recognition": ["ocr", "text digitization"],
    "stylometry": ["stylometric analysis", "authorship attribution"],
    "word embedding": ["word embeddings", "word2vec"],
    "cluster analysis": ["clustering", "k-means"],
}

THEMES = [
    {
        "name": "literary history",
        "words": "novel poetry fiction authorship literary canon genre narrative poet verse prose century writers".split(),
        "methods": ["stylometry", "topic modeling", "word embedding", "text mining"],
    },
    {
        "name": "historical maps",
        "words": "map cartography territory boundary atlas landscape settlement region colonial survey parish spatial".split(),
        "methods": ["geographic information system", "optical character recognition", "cluster analysis"],
    },
    {
        "name": "archival newspapers",
        "words": "newspaper press archive periodical editorial journalism reader advertisement print circulation".split(),
        "methods": ["optical character recognition", "named entity recognition", "text mining", "sentiment analysis"],
    },
    {
        "name": "correspondence networks",
        "words": "letters correspondence scholars republic epistolary exchange sender recipient friendship intellectual".split(),
        "methods": ["network analysis", "named entity recognition", "cluster analysis"],
    },
]

FILLER = "collection corpus digital material sources evidence records analysis approach".split()
OPENERS = ["Reading", "Tracing", "Mapping", "Counting", "Revisiting", "Modelling", "Measuring", "Locating"]
PLACES = ["Lisbon", "Utrecht", "Krakow", "Dublin", "Lyon", "Bologna", "Aarhus", "Ghent", "Seville", "Bergen"]
NOISE = ["close reading", "archival research", "qualitative coding", "crowdsourcing", "deep reading"]


def make_doc(rng, idx, year):
    theme = THEMES[idx % len(THEMES)]
    methods = rng.sample(theme["methods"], rng.randint(1, 2))
    surfaces = [rng.choice([m] + LEXICON[m]) for m in methods]
    words = [rng.choice(theme["words"]) for _ in range(28)] + [rng.choice(FILLER) for _ in range(6)]
    cut = rng.randint(5, 20)
    abstract = " ".join(words[:cut]) + f" using {surfaces[0]}. " + " ".join(words[cut:])
    if len(surfaces) > 1:
        abstract += f" We also apply {surfaces[1]}."
    w = rng.sample(theme["words"], 3)
    title = f"{rng.choice(OPENERS)} {w[0]} and {w[1]}: {w[2]} in {theme['name']}, {rng.choice(PLACES)} {1600 + idx * 7}"
    return {
        "id": f"D{idx:03d}",
        "source": "wos" if idx % 2 == 0 else "crossref",
        "doi": f"10.5555/demo.{idx:03d}",
        "title": title,
        "abstract": abstract,
        "year": year,
        "venue": "Digital Scholarship Quarterly",
        "authors": [f"Author{idx % 7}, A.", f"Writer{idx % 5}, B."],
    }, methods


def levenshtein(a, b):
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def too_close(title, others):
    for o in others:
        if 1 - levenshtein(title.lower(), o.lower()) / max(len(title), len(o)) >= 0.75:
            return True
    return False


def main(out_dir):
    rng = random.Random(20240607)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    docs, gold = [], {}
    for i in range(60):
        year = 1992 if i == 0 else rng.randint(1993, 2022)
        doc, methods = make_doc(rng, i, year)
        while too_close(doc["title"], [d["title"] for d in docs]):
            doc, methods = make_doc(rng, i, year)
        docs.append(doc)
        gold[doc["id"]] = sorted(methods)

    # planted records: out-of-range year and three duplicates of different kinds
    early, _ = make_doc(rng, 60, 1991)
    early["id"] = "P1991"
    doi_dup = dict(docs[3], id="X-DOI", source="dimensions", doi="https://doi.org/10.5555/DEMO.003",
                   title=docs[3]["title"] + " (preprint)", abstract="")
    title_dup = dict(docs[8], id="X-TITLE", source="dimensions", doi=None, abstract=docs[8]["abstract"][:40])
    fuzzy_dup = dict(docs[13], id="X-FUZZY", source="dimensions", doi=None, abstract="",
                     title=docs[13]["title"][:-1] + chr(ord(docs[13]["title"][-1]) ^ 1))

    jsonl_records = docs[:40] + [early, doi_dup]
    csv_records = docs[40:] + [title_dup, fuzzy_dup]

    with open(out / "records.jsonl", "w") as f:
        for r in jsonl_records:
            f.write(json.dumps(r) + "\n")
    with open(out / "crossref.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["id", "source", "doi", "title", "abstract", "year", "venue", "authors"])
        for r in csv_records:
            w.writerow([r["id"], r["source"], r["doi"] or "", r["title"], r["abstract"], r["year"],
                        r["venue"], "; ".join(r["authors"])])

    with open(out / "lexicon.json", "w") as f:
        json.dump(LEXICON, f, indent=2)
        f.write("\n")

    with open(out / "gold.jsonl", "w") as f:
        for doc_id, methods in gold.items():
            f.write(json.dumps({"doc_id": doc_id, "methods": methods}) + "\n")

    # LLM-style candidates: true surfaces in varied case, plus noise outside the lexicon
    with open(out / "candidates.jsonl", "w") as f:
        for doc in docs:
            cands = [rng.choice([m, m.upper(), m.title()]) for m in gold[doc["id"]]]
            cands += rng.sample(NOISE, rng.randint(0, 2))
            rng.shuffle(cands)
            f.write(json.dumps({"doc_id": doc["id"], "candidates": cands}) + "\n")

    config = {
        "version": 1,
        "inputs": [{"path": "records.jsonl", "format": "jsonl"}, {"path": "crossref.csv", "format": "csv"}],
        "year-min": 1992,
        "year-max": 2022,
        "title-sim": 0.9,
        "lexicon": "lexicon.json",
        "candidates": "candidates.jsonl",
        "fallback-rule": True,
        "topic-mode": "sweep",
        "k-list": [2, 3, 4, 5, 6],
        "iterations": 500,
        "sigma": 0.001,
        "top-n": 35,
        "seed": 7,
        "out-dir": "run",
    }
    with open(out / "config.json", "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "demo")

#!/usr/bin/env python3
"""Regenerates the synthetic fixture datasets under fixtures/.

Every fixture is produced from fixed seeds, so re-running this script is a
no-op unless the generation logic itself changes. The committed outputs are
what the test suites consume; this script documents how they were built and
lets them be rebuilt or extended.

Fixtures:
  hermetic/      60 trading days + 1 settle day, ~150 mixed-sentiment news,
                 one 10-Q and one 10-K; exercises the full deterministic
                 end-to-end path.
  sentiment_led/ down-trending prices where each trading day's news sentiment
                 matches the sign of the NEXT day's move; the lexicon-driven
                 agent should front-run it and beat buy-and-hold.
  noise/         zero-drift random walk with news whose sentiment is
                 independent of returns; sanity bound on churn.
  adverse/       uniformly bullish news with a mid-test price slide; forces a
                 losing streak while long, so the self-adaptive risk switch
                 has to flip to averse.

Shared: tickers.json (sector metadata), rulebook.json (mock lexicon).

Usage: python3 scripts/gen_fixtures.py [--root DIR]
"""

import argparse
import json
import math
import random
from datetime import date, timedelta
from pathlib import Path

TICKER = "SYNX"

POSITIVE_TERMS = [
    "beat", "beats", "strong", "record", "surge", "upgrade", "bullish",
    "growth", "profit", "raises", "expands", "wins", "award", "breakthrough",
    "momentum", "rally", "optimistic", "outperform", "exceeds", "robust",
]
NEGATIVE_TERMS = [
    "miss", "misses", "weak", "recall", "plunge", "downgrade", "bearish",
    "decline", "loss", "cuts", "lawsuit", "probe", "delay", "shortfall",
    "warning", "slump", "pessimistic", "underperform", "drops", "fragile",
]
# Filler vocabulary is disjoint from both term lists.
FILLER = [
    "the", "company", "reported", "quarterly", "figures", "for", "its",
    "automation", "platform", "and", "analysts", "noted", "shipment",
    "volumes", "across", "regions", "while", "management", "discussed",
    "pipeline", "updates", "during", "a", "call", "with", "investors",
    "segment", "orders", "backlog", "guidance", "production", "capacity",
]


def trading_days(start: date, count: int):
    days = []
    d = start
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d += timedelta(days=1)
    return days


def write_ohlcv(path: Path, days, adj_closes, rng):
    rows = ["date,open,high,low,close,adj_close,volume"]
    prev_close = adj_closes[0] / 0.97
    for day, adj in zip(days, adj_closes):
        close = adj / 0.97
        open_ = prev_close * (1.0 + rng.uniform(-0.004, 0.004))
        hi = max(open_, close) * (1.0 + rng.uniform(0.0, 0.01))
        lo = min(open_, close) * (1.0 - rng.uniform(0.0, 0.01))
        volume = rng.randint(800_000, 5_000_000)
        rows.append(
            f"{day.isoformat()},{open_:.6f},{hi:.6f},{lo:.6f},{close:.6f},{adj:.6f},{volume}"
        )
        prev_close = close
    path.write_text("\n".join(rows) + "\n")


def news_sentence(rng, polarity_words):
    words = [rng.choice(FILLER) for _ in range(rng.randint(5, 9))]
    for w in polarity_words:
        words.insert(rng.randint(0, len(words)), w)
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def news_text(rng, polarity, strength):
    """2-4 sentences; `strength` polarity words land in the first two
    sentences (the mock summary keeps only those)."""
    pool = POSITIVE_TERMS if polarity > 0 else NEGATIVE_TERMS if polarity < 0 else []
    lead_words = [rng.choice(pool) for _ in range(strength)] if pool else []
    first = news_sentence(rng, lead_words[: (strength + 1) // 2])
    second = news_sentence(rng, lead_words[(strength + 1) // 2:])
    sentences = [first, second]
    for _ in range(rng.randint(0, 2)):
        sentences.append(news_sentence(rng, []))
    return " ".join(sentences)


def filing_text(rng, form):
    sentences = [
        f"Form {form} filed by {TICKER} covering routine reporting requirements.",
        news_sentence(rng, []),
    ]
    for _ in range(6):
        sentences.append(news_sentence(rng, []))
    return " ".join(sentences)


def doc(doc_id, day, kind, text):
    return {
        "id": doc_id,
        "ticker": TICKER,
        "date": day.isoformat(),
        "kind": kind,
        "text": text,
    }


def write_docs(path: Path, docs):
    with path.open("w") as fh:
        for d in docs:
            fh.write(json.dumps(d) + "\n")


def gen_hermetic(root: Path):
    rng = random.Random(20220103)
    days = trading_days(date(2022, 1, 3), 61)
    returns = [rng.uniform(-0.025, 0.027) for _ in range(60)]
    adj = [100.0]
    for r in returns:
        adj.append(adj[-1] * math.exp(r))

    out = root / "hermetic"
    out.mkdir(parents=True, exist_ok=True)
    write_ohlcv(out / "ohlcv.csv", days, adj, rng)

    docs = []
    n = 0
    for i, day in enumerate(days[:60]):
        for _ in range(rng.choice([0, 1, 2, 3, 3, 4, 5])):
            n += 1
            polarity = rng.choice([-1, 0, 1])
            pub = day
            # Some stories break on the weekend before a Monday session.
            if day.weekday() == 0 and rng.random() < 0.25:
                pub = day - timedelta(days=rng.randint(1, 2))
            docs.append(doc(f"n-{n:04d}", pub, "news",
                            news_text(rng, polarity, rng.randint(1, 3))))
        if i == 3:
            docs.append(doc("f-10k-2021", day, "10k", filing_text(rng, "10-K")))
        if i == 8:
            docs.append(doc("f-10q-q4", day, "10q", filing_text(rng, "10-Q")))
    write_docs(out / "documents.ndjson", docs)

    (out / "run.cfg").write_text(
        "\n".join([
            f"ticker={TICKER}",
            "ohlcv=fixtures/hermetic/ohlcv.csv",
            "documents=fixtures/hermetic/documents.ndjson",
            "metadata=fixtures/tickers.json",
            "rulebook=fixtures/rulebook.json",
            "templates=templates",
            "out=out/hermetic",
            f"train-start={days[0].isoformat()}",
            f"train-end={days[14].isoformat()}",
            f"test-start={days[15].isoformat()}",
            f"test-end={days[59].isoformat()}",
            "seed=7",
            "risk=self_adaptive",
        ]) + "\n"
    )
    print(f"hermetic: {len(days)} trading days, {len(docs)} documents")


def gen_sentiment_led(root: Path):
    rng = random.Random(20220701)
    days = trading_days(date(2022, 7, 4), 61)
    # Choppy with a clear downward drift; each return's sign is known a day
    # ahead via the news feed.
    returns = []
    for _ in range(60):
        sign = 1 if rng.random() < 0.42 else -1
        returns.append(sign * rng.uniform(0.015, 0.035) - 0.006)
    adj = [100.0]
    for r in returns:
        adj.append(adj[-1] * math.exp(r))

    out = root / "sentiment_led"
    out.mkdir(parents=True, exist_ok=True)
    write_ohlcv(out / "ohlcv.csv", days, adj, rng)

    docs = []
    n = 0
    for i, day in enumerate(days[:60]):
        polarity = 1 if returns[i] > 0 else -1
        for _ in range(5):
            n += 1
            docs.append(doc(f"n-{n:04d}", day, "news", news_text(rng, polarity, 3)))
        if i == 2:
            docs.append(doc("f-10k-led", day, "10k", filing_text(rng, "10-K")))
        if i == 7:
            docs.append(doc("f-10q-led", day, "10q", filing_text(rng, "10-Q")))
    write_docs(out / "documents.ndjson", docs)
    bh = sum(returns[15:60])
    print(f"sentiment_led: B&H test-window log return {bh:.4f}")


def gen_noise(root: Path):
    rng = random.Random(20230201)
    days = trading_days(date(2023, 2, 6), 61)
    returns = [rng.uniform(-0.018, 0.018) for _ in range(60)]
    adj = [100.0]
    for r in returns:
        adj.append(adj[-1] * math.exp(r))

    out = root / "noise"
    out.mkdir(parents=True, exist_ok=True)
    write_ohlcv(out / "ohlcv.csv", days, adj, rng)

    docs = []
    n = 0
    for i, day in enumerate(days[:60]):
        for _ in range(rng.choice([1, 2, 2, 3])):
            n += 1
            polarity = rng.choice([-1, 1])
            docs.append(doc(f"n-{n:04d}", day, "news", news_text(rng, polarity, 1)))
        if i == 2:
            docs.append(doc("f-10k-noise", day, "10k", filing_text(rng, "10-K")))
        if i == 7:
            docs.append(doc("f-10q-noise", day, "10q", filing_text(rng, "10-Q")))
    write_docs(out / "documents.ndjson", docs)
    print(f"noise: {len(docs)} documents")


def gen_adverse(root: Path):
    rng = random.Random(20230901)
    days = trading_days(date(2023, 9, 4), 41)
    # Up-drift except a seven-session slide in the middle of the test window
    # (test days are indices 10..39).
    returns = []
    for i in range(40):
        if 18 <= i < 25:
            returns.append(-rng.uniform(0.02, 0.04))
        else:
            returns.append(rng.uniform(-0.002, 0.018))
    adj = [100.0]
    for r in returns:
        adj.append(adj[-1] * math.exp(r))

    out = root / "adverse"
    out.mkdir(parents=True, exist_ok=True)
    write_ohlcv(out / "ohlcv.csv", days, adj, rng)

    docs = []
    n = 0
    for i, day in enumerate(days[:40]):
        for _ in range(2):
            n += 1
            docs.append(doc(f"n-{n:04d}", day, "news", news_text(rng, 1, 2)))
        if i == 1:
            docs.append(doc("f-10k-adv", day, "10k", filing_text(rng, "10-K")))
    write_docs(out / "documents.ndjson", docs)
    print(f"adverse: slide over sessions {days[18]}..{days[24]}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", default="fixtures", type=Path)
    args = parser.parse_args()
    root = args.root
    root.mkdir(parents=True, exist_ok=True)

    (root / "tickers.json").write_text(json.dumps({
        TICKER: {
            "sector_text": (
                f"{TICKER} operates in the industrial automation sector, "
                "supplying robotic assembly systems and the software that "
                "coordinates them. Demand follows capital spending cycles at "
                "manufacturers, and the order backlog gives several quarters "
                "of revenue visibility."
            )
        }
    }, indent=2) + "\n")

    (root / "rulebook.json").write_text(json.dumps({
        "positive_terms": POSITIVE_TERMS,
        "negative_terms": NEGATIVE_TERMS,
        "summary_sentences": 2,
        "neutral_direction": "Hold",
    }, indent=2) + "\n")

    gen_hermetic(root)
    gen_sentiment_led(root)
    gen_noise(root)
    gen_adverse(root)


if __name__ == "__main__":
    main()

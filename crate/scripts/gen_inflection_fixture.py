#!/usr/bin/env python3
"""Generate the synthetic inflection fixture (docs, topics, qrels).

Each topic is a bare noun. Its relevant documents mention the noun only in
inflected forms that the Snowball Turkish stemmer reduces to the query's
stem; its judged-nonrelevant documents contain the bare query form exactly
once. Unjudged background documents contain neither. Without stemming the
relevant documents cannot match the query; with stemming they should rank
first.

Usage: python3 scripts/gen_inflection_fixture.py crates/core/tests/fixtures/inflection
"""

import os
import random
import sys

from snowballstemmer import stemmer

SEED = 20090601
ROOTS = [
    "deprem", "seçim", "futbol", "bakan", "hükümet", "okul",
    "hastane", "meclis", "tiyatro", "polis", "orman", "köprü",
]
VOWELS = "aeıioöuü"
FILLER = (
    "bugün yapılan açıklama göre çok yeni büyük kadar olarak bir ancak sonra önce "
    "şehir merkezi halk bilgi konu yıl hafta gün akşam sabah uzman yetkili rapor "
    "sorun karar toplantı proje çalışma önemli genel ilk son başka aynı bazı tüm"
).split()

tr = stemmer("turkish")


def inflections(root):
    """Case and plural forms obeying vowel harmony (no consonant mutation)."""
    last = [c for c in root if c in VOWELS][-1]
    a = "a" if last in "aıou" else "e"
    i = {"a": "ı", "ı": "ı", "e": "i", "i": "i", "o": "u", "u": "u", "ö": "ü", "ü": "ü"}[last]
    vfinal = root[-1] in VOWELS
    d = "t" if root[-1] in "çfhkpsşt" else "d"
    pl = "l" + a + "r"
    return [
        root + d + a,                             # locative
        root + d + a + "n",                       # ablative
        root + ("n" + i + "n" if vfinal else i + "n"),  # genitive
        root + ("y" + a if vfinal else a),        # dative
        root + ("y" + i if vfinal else i),        # accusative
        root + pl,                                # plural
        root + pl + ("ı" if a == "a" else "i"),   # plural accusative
        root + pl + "d" + a,                      # plural locative
    ]


def variants(root):
    target = tr.stemWord(root)
    return [w for w in inflections(root) if tr.stemWord(w) == target]


def filler(rng, n, banned):
    words = []
    while len(words) < n:
        w = rng.choice(FILLER)
        if tr.stemWord(w) not in banned:
            words.append(w)
    return words


def main(outdir):
    rng = random.Random(SEED)
    os.makedirs(outdir, exist_ok=True)
    banned = {tr.stemWord(r) for r in ROOTS}
    docs, topics, qrels = [], [], []
    n = 0

    def add(text):
        nonlocal n
        n += 1
        docno = f"INF-{n:04d}"
        docs.append((docno, text))
        return docno

    for t, root in enumerate(ROOTS, start=1):
        forms = variants(root)
        assert len(forms) >= 3, (root, forms)
        qid = str(t)
        topics.append((qid, root))
        for _ in range(4):
            body = filler(rng, 12, banned) + rng.sample(forms, 3)
            rng.shuffle(body)
            qrels.append((qid, add(" ".join(body)), 1))
        for _ in range(4):
            body = filler(rng, 14, banned) + [root]
            rng.shuffle(body)
            qrels.append((qid, add(" ".join(body)), 0))
    for _ in range(40):
        add(" ".join(filler(rng, 15, banned)))

    with open(os.path.join(outdir, "docs.trec"), "w", encoding="utf-8") as f:
        for docno, text in docs:
            f.write(f"<DOC>\n<DOCNO>{docno}</DOCNO>\n<TEXT>\n{text}\n</TEXT>\n</DOC>\n")
    with open(os.path.join(outdir, "topics.txt"), "w", encoding="utf-8") as f:
        for qid, text in topics:
            f.write(f"{qid}\t{text}\n")
    with open(os.path.join(outdir, "qrels.txt"), "w", encoding="utf-8") as f:
        for qid, docno, rel in qrels:
            f.write(f"{qid} 0 {docno} {rel}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/fixtures/inflection")

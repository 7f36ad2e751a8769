#!/usr/bin/env python3
"""Regenerate crates/core/data/turkish_golden.tsv.

Builds a vocabulary of inflected Turkish word forms (noun and verb roots
combined with harmonised suffix chains, plus a handful of irregular and
edge-case words) and records the output of the reference Snowball Turkish
stemmer (the `snowballstemmer` package, version 2.2.0) for each.

    pip install snowballstemmer==2.2.0
    python3 scripts/gen_golden.py > crates/core/data/turkish_golden.tsv
"""
import random

import snowballstemmer

VOWELS = "aeıioöuü"
BACK = "aıou"
VOICELESS = "fstkçşhp"

NOUNS = """
ev kapı kitap ağaç göz okul gün kedi köpek araba çocuk şehir deprem seçim
haber ülke hükümet bakan yol deniz dağ ırmak su kuş balık ağabey anne baba
kardeş öğrenci öğretmen sınav ders masa sandalye kalem defter bilgisayar
telefon gazete dergi radyo film müzik şarkı oyun takım maç gol futbol
hastane doktor ilaç hasta yemek ekmek süt çay kahve şeker tuz para banka
borsa dolar fiyat vergi bütçe ekonomi meclis parti lider başkan ordu asker
savaş barış anlaşma toplantı karar yasa mahkeme hakim avukat polis suç
olay kaza yangın sel fırtına kar yağmur hava sıcaklık iklim çevre orman
tarla köy kent sokak cadde meydan köprü bina ev otel tatil turist müze
sanat resim heykel tiyatro sinema roman şiir yazar kitaplık üniversite
okul sınıf öğrenim bilim araştırma teknoloji internet şirket işçi patron
maaş emekli sigorta sağlık nüfus göç sınır komşu dost düşman halk millet
devlet tarih zaman yıl ay hafta saat dakika sabah akşam gece yüz el ayak
baş kalp kol parmak diş saç göğüs omuz dil kulak burun renk kitapçı
gözlük çiçek bahçe ağaçlık toprak taş demir altın gümüş kömür petrol gaz
elektrik enerji makine uçak gemi tren otobüs istasyon liman havalimanı
""".split()

VERBS = """
gel git yap al ver oku yaz bak gör bil sev iste söyle konuş düşün anla
çalış oyna koş yürü otur kalk başla bit aç kapa sat öde kazan kaybet
seç kur bul dinle öğren öğret taşı getir götür ara yaşa öl doğ büyü
""".split()

EXTRA = """
ad soyad ev el su at et ok ip iz öz
a e ı i o u ö ü
kapılar evde kitaplarımızdan gelecekmişsiniz gözlükçülük
türkiye istanbul ankara izmir avrupa amerika almanya
ilk son çok az daha en her bazı bütün hiç
ve ile için gibi kadar sonra önce ama fakat ancak
bir iki üç dört beş altı yedi sekiz dokuz on yüz bin milyon
kitapçıdaki evdekiler arabalarınızdaki okuldakilerin gözlerimizdekini
yapmışsınız gelmişler gidiyorduk okuyacaksınız yazmalıyız
güzelce yavaşça çocukça türkçe ingilizce
haberlerdir sorundur doğrudur güzeldir iyidir
dergicilik gazetecilik öğretmenlik arkadaşlık
ahmed umud kağıd mehmed ümid leri ları lerin soyadı adı
""".split()


def last_vowel(w):
    for ch in reversed(w):
        if ch in VOWELS:
            return ch
    return "e"


def harmonise(stem, template):
    """Realise a suffix template: A -> a/e, I -> ı/i/u/ü, D -> d/t, C -> c/ç,
    (y)/(n)/(s) buffers dropped after consonants."""
    out = stem
    i = 0
    while i < len(template):
        ch = template[i]
        if template.startswith("(y)", i) or template.startswith("(n)", i) or template.startswith("(s)", i):
            buf = template[i + 1]
            if out and out[-1] in VOWELS:
                out += buf
            i += 3
            continue
        lv = last_vowel(out)
        if ch == "A":
            out += "a" if lv in BACK else "e"
        elif ch == "I":
            out += {"a": "ı", "ı": "ı", "o": "u", "u": "u", "e": "i", "i": "i", "ö": "ü", "ü": "ü"}[lv]
        elif ch == "D":
            out += "t" if out and out[-1] in VOICELESS else "d"
        elif ch == "C":
            out += "ç" if out and out[-1] in VOICELESS else "c"
        else:
            out += ch
        i += 1
    return out


def soften(stem, suffix_template):
    """Final-consonant softening before a vowel-initial suffix."""
    first = suffix_template.lstrip("(yns)")
    if not first or first[0] not in "AIaeıioöuü" or len(stem) < 4:
        return stem
    return stem[:-1] + {"p": "b", "ç": "c", "t": "d", "k": "ğ"}.get(stem[-1], stem[-1])


NOUN_CHAINS = [
    "lAr", "lArI", "lArIn", "lArDA", "lArDAn", "lArA", "lArlA", "lArImIz", "lArInIz",
    "(y)I", "(y)A", "DA", "DAn", "(n)In", "(y)lA", "(s)I", "(s)InI", "(s)InDA", "(s)InDAn",
    "Im", "In", "ImIz", "InIz", "ImDA", "ImIzDAn", "InIzIn", "lArImIzDAn", "lArInDAki",
    "DAki", "DAkilAr", "DAkilArI", "nInki", "CA", "CAsInA", "DIr", "lArDIr", "DAdIr",
    "CIlIk", "lIk", "lIklAr", "sIz", "lI", "lIlAr", "(y)DI", "(y)mIş", "(y)sA", "(y)ken",
    "DAymIş", "lArDAydI", "ImDIr", "(y)Im", "sIn", "(y)Iz", "sInIz", "lArmIş",
]

VERB_CHAINS = [
    "DI", "DIm", "DIn", "DIk", "DInIz", "DIlAr", "mIş", "mIşIm", "mIşsIn", "mIşIz",
    "mIşsInIz", "mIşlAr", "sA", "sAm", "sAk", "sAn", "sAnIz", "DIysA", "mIştIr",
    "ArAk", "(y)ken", "(y)AcAk", "(y)AcAklAr", "(y)AcAkmIşsInIz", "mAk", "mAktA",
    "mAktAdIr", "mAlI", "mAlIyIz", "DIğI", "DIğInDA", "DIklArI", "(y)An", "(y)AnlAr",
    "(y)AnlArIn", "mIşCAsInA", "sInIz", "(y)Iz", "lAr",
]

RANDOM_MORPHEMES = [
    "lAr", "Im", "In", "(s)I", "ImIz", "InIz", "lArI", "DA", "DAn", "(y)A", "(y)I",
    "(n)In", "(y)lA", "ki", "DIr", "(y)DI", "(y)mIş", "(y)sA", "(y)ken", "sIn", "(y)Im",
    "(y)Iz", "sInIz", "CA", "CAsInA", "nDA", "nDAn", "nA", "nI",
]


def main():
    stemmer = snowballstemmer.stemmer("turkish")
    words = set()
    for noun in NOUNS:
        words.add(noun)
        for chain in NOUN_CHAINS:
            words.add(harmonise(soften(noun, chain), chain))
    for verb in VERBS:
        for chain in VERB_CHAINS:
            words.add(harmonise(verb, chain))
    words.update(EXTRA)
    rng = random.Random(20090601)
    roots = NOUNS + VERBS
    for _ in range(1200):
        w = rng.choice(roots)
        for _ in range(rng.randint(1, 4)):
            m = rng.choice(RANDOM_MORPHEMES)
            w = harmonise(soften(w, m), m)
        words.add(w)
    print("# word\tstem  (reference: snowballstemmer 2.2.0, algorithm=turkish)")
    for w in sorted(words):
        print(f"{w}\t{stemmer.stemWord(w)}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
# Copyright 2026 The Patrol Authors
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
"""Writes the bundled synthetic BBS corpus (romanized school-board posts).

150 harmful and 150 normal entries. Harmful entries carry vulgarities,
some in jargon spellings. Three entries spam "baka" (100, 80 and 60 times)
and a group of entries pairs "shine" with kimoi and its variants, so the
co-occurrence modes differ in the way the ranker tests expect.
"""

import argparse
import json
import random

TIMES = ["kyou", "ashita", "kinou", "raishuu no", "konshuu no", "natsuyasumi no", "asa no", "hiru no"]
EVENTS = ["shiai", "tesuto", "jugyou", "bunkasai", "taiikusai", "ensoku", "konsaato", "renshuu",
          "shukudai", "gasshuku", "taikai", "undoukai", "shiken", "bukatsu"]
CLUBS = ["sakkaa", "yakyuu", "basuke", "tenisu", "suiei", "rikujou", "bareebooru", "takkyuu",
         "kendou", "juudou", "bijutsu", "ongaku", "suisougaku", "gassho"]
SUBJECTS = ["eigo", "suugaku", "kokugo", "rika", "shakai", "rekishi", "chiri", "taiiku", "kateika"]
PLACES = ["toshokan", "taiikukan", "kyoushitsu", "undoujou", "shokudou", "kouen", "eki"]
GOOD_ADJ = ["tanoshii", "omoshiroi", "ii", "muzukashii", "isogashii", "taihen", "genki", "nigiyaka", "saikou", "suteki"]
FOOD = ["bentou", "pan", "ramen", "karee", "sushi", "keeki", "okashi", "juusu"]
CLOSERS = ["ne !", "yo !", "!", "ne", "yo", "desu", "desu ne", "da yo", "...", "kanaa"]
PEOPLE = ["aitsu", "ano ko", "omae", "ano onna", "ano otoko", "yatsu", "kimi"]
NAMES = ["Tanaka", "Suzuki", "Sato", "Takahashi", "Watanabe", "Ito", "Yamamoto", "Nakamura"]

# Vulgarities and the jargon spellings the normalizer should fold back.
VULGAR = ["shine", "uzai", "kimoi", "busu", "debu", "kiero", "tarashi", "pashiri", "busaiku", "panko",
          "kuso", "kasu", "gomi", "aho", "kuzu", "hage", "kichigai", "korosu", "damare", "mukatsuku",
          "kimoota", "boke", "noroma", "hentai", "inkya", "kusogaki", "gaki", "dasai", "zama", "temee",
          "uzee", "bussaiku", "buchaiku", "uzakoi", "kisama", "manuke", "tonma", "yariman", "bitchi"]
JARGON = ["uzaaai", "kimoooi", "shineee", "debuuu", "busuuu", "kieroo", "gomiii", "kasuuu"]
KIMOI_FORMS = ["kimoi"] * 4 + ["kimosu"] * 3 + ["kimoooi"] * 3 + ["kishoi"] * 2


def normal_entry(rng):
    pick = rng.randrange(8)
    if pick == 0:
        return f"{rng.choice(TIMES)} no {rng.choice(EVENTS)} wa {rng.choice(GOOD_ADJ)} {rng.choice(CLOSERS)}"
    if pick == 1:
        return f"{rng.choice(CLUBS)} bu no {rng.choice(EVENTS)} ganbarou {rng.choice(CLOSERS)}"
    if pick == 2:
        return f"{rng.choice(SUBJECTS)} no shukudai wa {rng.choice(['muzukashii', 'taihen', 'omoi', 'karui'])} {rng.choice(CLOSERS)}"
    if pick == 3:
        return f"{rng.choice(TIMES)} {rng.choice(PLACES)} de {rng.choice(SUBJECTS)} wo benkyou shimasu"
    if pick == 4:
        return f"{rng.choice(FOOD)} ga totemo oishii {rng.choice(CLOSERS)}"
    if pick == 5:
        return f"sensei arigatou ! {rng.choice(EVENTS)} wa {rng.choice(GOOD_ADJ)} deshita"
    if pick == 6:
        return f"minna {rng.choice(TIMES)} no {rng.choice(EVENTS)} ni kuru ? {rng.choice(['tanoshimi', 'yoroshiku', 'ganbarou'])} {rng.choice(CLOSERS)}"
    return f"{rng.choice(CLUBS)} no senpai wa {rng.choice(['yasashii', 'kakkoii', 'jouzu', 'tsuyoi'])} {rng.choice(CLOSERS)}"


def harmful_entry(rng):
    v1, v2 = rng.sample(VULGAR, 2)
    if rng.random() < 0.25:
        v1 = rng.choice(JARGON)
    who = rng.choice(PEOPLE)
    pick = rng.randrange(7)
    if pick == 0:
        return f"{who} {v1} {rng.choice(['da', 'desu', 'da yo', 'sugiru'])} {rng.choice(CLOSERS)}"
    if pick == 1:
        return f"{who} wa {v1} de {v2} {rng.choice(['da', 'dayo', 'jan'])}"
    if pick == 2:
        return f"{rng.choice(CLUBS)} bu no {who} maji {v1} {rng.choice(CLOSERS)}"
    if pick == 3:
        return f"{v1} ! {v2} ! {rng.choice(['kunna', 'dete ike', 'hayaku'])}"
    if pick == 4:
        return f"{rng.choice(NAMES)}-{rng.choice(['san', 'kun', 'chan'])} tte {v1} {rng.choice(['da yo ne', 'mitai', 'rashii'])}"
    if pick == 5:
        return f">>{rng.randrange(1, 300)} {who} {v1} sugi {rng.choice(CLOSERS)}"
    return f"{rng.choice(TIMES)} no {rng.choice(EVENTS)} de {who} ga {v1} {rng.choice(['datta', 'deshita', 'da'])} {v2}"


def build(seed):
    rng = random.Random(seed)
    harmful = []
    for n in (100, 80, 60):
        harmful.append(("H", " ".join(["baka"] * n) + " !"))
    harmful.append(("H", f"{rng.choice(PEOPLE)} baka da yo"))
    for form in KIMOI_FORMS:
        harmful.append(("H", f"{rng.choice(PEOPLE)} {form} {rng.choice(['shine', 'shine yo', 'shine !'])}"))
    while len(harmful) < 150:
        harmful.append(("D" if rng.random() < 0.2 else "H", harmful_entry(rng)))
    normal = [("N", normal_entry(rng)) for _ in range(150)]

    rows = harmful + normal
    rng.shuffle(rows)
    out = []
    for i, (label, text) in enumerate(rows, start=1):
        out.append({
            "id": f"syn-{i:04d}",
            "text": text,
            "source": rng.choice(["bbs-a", "bbs-b", "bbs-c"]),
            "timestamp": f"2009-{rng.randrange(1, 13):02d}-{rng.randrange(1, 29):02d}T{rng.randrange(24):02d}:{rng.randrange(60):02d}:00Z",
            "label": label,
        })
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20090901)
    ap.add_argument("--out", default="data/synthetic/corpus.jsonl")
    args = ap.parse_args()
    with open(args.out, "w", encoding="utf-8") as f:
        for row in build(args.seed):
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()

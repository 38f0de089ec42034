#!/usr/bin/env python3
"""Regenerate src/nlui/data/vocab.txt from the bundled data files.

Harvests every word in the manifest, corpora, and weather table, adds a
base list of common English words, and writes the line-per-token
vocabulary the deterministic encoder uses. Run from the repo root after
editing any bundled data:

    python scripts/gen_vocab.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from nlui.tokenize import Vocabulary  # noqa: E402

DATA = REPO / "src" / "nlui" / "data"

COMMON_WORDS = """
a about above across after afternoon again against ago all almost alone along
already also although always am an and another answer any anyone anything are
around as ask asked at away back bad be became because become been before began
begin behind being below best better between big bill bit book both bought box
boy bring brought but buy by call called came can cannot car carry case change
check child children city clean close cold come coming could country course cut
day days deep did different do does doing done door down during each early eat
eight eighteen eighty eleven else end enough even evening ever every everyone
everything eyes face fact family far fast father feel feet felt few fifteen
fifty find fine first five folks follow food for forty found four friend
friends from front full further game gave get gets getting girl give given go
goes going gone good got great group grow had half hand happy hard has have he
head hear heard held hello help her here high him his hold home hope hot hour
hours house how however hundred i idea if important in inside into is it its
just keep kept kids kind knew know known large last late later learn leave left
let life light like line list little live long look looked looking lot love
made make making man many may maybe me mean men might million mind mine minute
minutes miss moment money month months more morning most mother move much must
my name near need never new next nice night nine nineteen ninety no not nothing
now number numbers of off often oh okay old on once one only open or other our
out outside over own page paper part people per perhaps person place plan play
please point put question quick quite rain ran read ready real really rest
right room run said same saw say school second see seem seen seven seventeen
seventy she short should show side simple since six sixteen sixty small so some
someone something sometimes soon sorry sound speak stand start started stay
still stop story street strong such sun sure take talk tell ten than thank
thanks that the their them then there these they thing things think thirteen
thirty this those though thought thousand three through time times to today
together told tomorrow too took top toward town travel tree tried try turn
twelve twenty two under until up upon us use used very wait walk want wanted
warm was watch water way we week weeks well went were what when where which
while who whole why will win winter wish with within without woman women word
words work world would write wrong year years yes yesterday yet you young your
""".split()


def harvest_manifest(texts: list[str]) -> None:
    doc = json.loads((DATA / "manifest.json").read_text(encoding="utf-8"))
    for app in doc["apps"]:
        texts.extend([app["name"], app["description"], *app.get("examples", [])])
        for param in app["parameters"]:
            texts.extend(
                [
                    param["name"],
                    param["description"],
                    param["prompt"],
                    *param.get("examples", []),
                ]
            )


def harvest_corpora(texts: list[str]) -> None:
    for path in sorted((DATA / "corpus").glob("*.txt")):
        texts.append(path.read_text(encoding="utf-8"))


def harvest_weather(texts: list[str]) -> None:
    table = json.loads((DATA / "weather.json").read_text(encoding="utf-8"))
    for key, record in table.items():
        texts.extend([key, record["city"], record["summary"]])


def main() -> None:
    texts: list[str] = []
    harvest_manifest(texts)
    harvest_corpora(texts)
    harvest_weather(texts)
    vocab = Vocabulary.build(texts, extra_words=COMMON_WORDS)
    vocab.save(DATA / "vocab.txt")
    print(f"wrote {len(vocab)} tokens to {DATA / 'vocab.txt'}")


if __name__ == "__main__":
    main()

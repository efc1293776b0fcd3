#!/usr/bin/env python3
# Copyright 2026 The hass Authors
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

"""Regenerates data/lexicon.tsv and data/frequency.tsv.

Pronunciations come from CMUdict (ARPAbet) rendered as General American IPA
with the stress mark placed directly before the stressed vowel. Frequencies
come from wordfreq. Requires: pip install cmudict wordfreq
"""

import argparse
import pathlib
import re

import cmudict
import wordfreq

VOWELS = {
    "AA": "ɑː", "AE": "æ", "AW": "aʊ", "AY": "aɪ", "EH": "ɛ", "EY": "eɪ",
    "IH": "ɪ", "OW": "oʊ", "OY": "ɔɪ", "UH": "ʊ", "UW": "uː",
}
CONSONANTS = {
    "B": "b", "CH": "tʃ", "D": "d", "DH": "ð", "F": "f", "G": "ɡ", "HH": "h",
    "JH": "dʒ", "K": "k", "L": "l", "M": "m", "N": "n", "NG": "ŋ", "P": "p",
    "R": "ɹ", "S": "s", "SH": "ʃ", "T": "t", "TH": "θ", "V": "v", "W": "w",
    "Y": "j", "Z": "z", "ZH": "ʒ",
}

# Reduced citation forms for frequent function words.
OVERRIDES = {
    "the": "ðə", "a": "ə", "an": "ən", "of": "əv", "for": "fɜɹ", "to": "tə",
    "and": "ænd", "or": "ɔːɹ", "from": "fɹʌm", "at": "æt", "in": "ɪn",
    "on": "ɑːn", "with": "wɪð", "would": "wʊd", "could": "kʊd",
    "should": "ʃʊd", "was": "wʌz", "were": "wɜː", "are": "ɑːɹ", "uh": "ʌ",
    "um": "ʌm", "i": "aɪ", "you": "juː", "your": "jʊɹ", "my": "maɪ",
    "by": "baɪ", "as": "æz", "is": "ɪz", "it": "ɪt", "that": "ðæt",
    "them": "ðɛm", "than": "ðæn", "can": "kæn", "do": "duː", "be": "biː",
}

# Words needed by the bundled prompts, paraphrases, and examples that CMUdict
# lacks or renders badly.
MANUAL = {
    "seatbelts": "sˈiːtbɛlts",
    "windowsill": "wˈɪndoʊsɪl",
    "riverbank": "ɹˈɪvɜɹbæŋk",
    "motorbike": "mˈoʊtɜɹbaɪk",
    "seashells": "sˈiːʃɛlz",
    "candlelight": "kˈændəllaɪt",
    "chalkboard": "tʃˈɔːkbɔɹd",
    "satchel": "sˈætʃəl",
    "meows": "miˈaʊz",
    "erm": "ɜːm",
}


def arpabet_to_ipa(phones, function_word):
    out = []
    for i, ph in enumerate(phones):
        base = re.sub(r"\d", "", ph)
        stress = ph[-1] if ph[-1].isdigit() else None
        mark = ""
        if stress == "1" and not function_word:
            mark = "ˈ"
        elif stress == "2" and not function_word:
            mark = "ˌ"
        if base in CONSONANTS:
            out.append(CONSONANTS[base])
            continue
        prev_vowel = i > 0 and re.sub(r"\d", "", phones[i - 1]) not in CONSONANTS
        nxt = re.sub(r"\d", "", phones[i + 1]) if i + 1 < len(phones) else None
        if base == "AH":
            sym = "ə" if stress == "0" or function_word else "ʌ"
        elif base == "ER":
            if stress == "0" or function_word:
                sym = "əɹ" if prev_vowel else "ɜɹ"
            else:
                sym = "ɜː"
        elif base == "IY":
            sym = "i" if stress == "0" else "iː"
        elif base == "AO":
            sym = "ɔ" if nxt == "R" else "ɔː"
        else:
            sym = VOWELS[base]
        out.append(mark + sym)
    return "".join(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--size", type=int, default=10000)
    args = ap.parse_args()
    data = pathlib.Path(args.data)

    function_words = {}
    for line in (data / "function_words.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            w, tag = line.split("\t")
            function_words[w] = tag

    required = set(function_words)
    word_re = re.compile(r"[a-z]+(?:'[a-z]+)?")
    for name in ("prompts.txt", "circumlocutions.tsv"):
        for line in (data / name).read_text().splitlines():
            if line.startswith("#"):
                continue
            required.update(word_re.findall(line.lower()))
    required.update(word_re.findall(
        "except you know the place where you burn the wood orange light "
        "it was it went uh no just the one inside fire thin in um "
        "cat completely hearth go"))

    cmu = cmudict.dict()
    vocab = set(required)
    for w in wordfreq.top_n_list("en", 60000):
        if len(vocab) >= args.size + len(required):
            break
        if re.fullmatch(r"[a-z]+(?:'[a-z]+)?", w) and w in cmu:
            vocab.add(w)

    entries = {}
    for w in vocab:
        if w in MANUAL:
            entries[w] = MANUAL[w]
        elif w in OVERRIDES:
            entries[w] = OVERRIDES[w]
        elif w in cmu:
            phones = cmu[w][0]
            syllables = sum(ph[-1].isdigit() for ph in phones)
            # Monosyllabic function words are unstressed in connected speech.
            entries[w] = arpabet_to_ipa(phones, w in function_words and syllables == 1)
    missing = sorted(required - set(entries))
    if missing:
        raise SystemExit(f"no pronunciation for: {missing}")

    ranked = sorted(entries, key=lambda w: (-wordfreq.word_frequency(w, "en"), w))
    with open(data / "lexicon.tsv", "w") as f:
        f.write("# surface\tIPA (General American, stress before the nucleus)\n")
        for w in sorted(entries):
            f.write(f"{w}\t{entries[w]}\n")
    with open(data / "frequency.tsv", "w") as f:
        f.write("# surface\tZipf frequency, most frequent first\n")
        for w in ranked:
            f.write(f"{w}\t{wordfreq.zipf_frequency(w, 'en'):.2f}\n")
    print(f"{len(entries)} entries")


if __name__ == "__main__":
    main()

"""Shared fixtures data and random generators for the test suite."""

from __future__ import annotations

import itertools
import math
import random

from puce.codec import SymbolMode, render_unit
from puce.decoder import ChoiceSlot, EmissionLattice, FixedSlot
from puce.lexicon import DictionaryPair, build_dictionaries, parse_lexicon

# Canonical 8-entry lexicon used across the suite: homophones 马/码 share
# ma3, 乐 is polyphonic (yue4 canonical, le4 alternative).
FIXTURE_LEX = (
    "妈\tma1\n"
    "麻\tma2\n"
    "马\tma3\n"
    "码\tma3\n"
    "吗\tma5\n"
    "语\tyu3\n"
    "音\tyin1\n"
    "乐\tyue4;le4\n"
)


def fixture_pair() -> DictionaryPair:
    return build_dictionaries(parse_lexicon(FIXTURE_LEX))


def fixture_corpus(mode: SymbolMode) -> list[str]:
    """One line per code of the fixture (polyphones once per pronunciation)."""
    pair = fixture_pair()
    return [
        render_unit(code, mode)
        for codes in pair.encode_map.values()
        for code in codes
    ]


_BASES = [
    "ba", "bo", "bi", "bu", "pa", "po", "pi", "pu", "ma", "mo", "mi", "mu",
    "da", "de", "di", "du", "ta", "te", "ti", "tu", "na", "ne", "ni", "nu",
    "la", "le", "li", "lu", "ga", "ge", "gu", "ka", "ke", "ku", "ha", "he",
    "hu", "ji", "jia", "jie", "qi", "qia", "qie", "xi", "xia", "xie", "zha",
    "zhe", "zhi", "zhu", "cha", "che", "chi", "chu", "sha", "she", "shi",
    "shu", "ran", "re", "ri", "ru", "za", "ze", "zi", "zu", "ca", "ce", "ci",
    "cu", "sa", "se", "si", "su", "ya", "yan", "ye", "yi", "yin", "yu",
    "yue", "wa", "wan", "wo", "wu", "an", "en", "ang", "er", "ou",
]


def synthetic_lexicon_text(
    rng: random.Random,
    n_chars: int = 500,
    homophone_groups: int = 50,
    min_group_size: int = 3,
    polyphones: int = 20,
) -> str:
    """Deterministic lexicon with guaranteed homophone groups and polyphones.

    Characters are consecutive CJK ideographs so they never collide with
    anything else the tests use.
    """
    # keep group assignment from wrapping onto a character twice
    assert homophone_groups * (min_group_size + 2) <= n_chars
    chars = [chr(0x4E00 + i) for i in range(n_chars)]
    syllables = [(base, tone) for base in _BASES for tone in (1, 2, 3, 4, 5)]
    rng.shuffle(syllables)
    assignments: dict[str, list[tuple[str, int]]] = {c: [] for c in chars}

    queue = list(chars)
    pos = 0
    for g in range(homophone_groups):
        syl = syllables[g]
        size = min_group_size + rng.randint(0, 2)
        for _ in range(size):
            assignments[queue[pos % len(queue)]].append(syl)
            pos += 1
    rest = syllables[homophone_groups:]
    for char in chars:
        if not assignments[char]:
            assignments[char].append(rng.choice(rest))

    poly_chars = rng.sample(chars, polyphones)
    for char in poly_chars:
        extra = rng.choice(rest)
        while extra in assignments[char]:
            extra = rng.choice(rest)
        assignments[char].append(extra)

    lines = [
        char + "\t" + ";".join(f"{base}{tone}" for base, tone in prons)
        for char, prons in assignments.items()
    ]
    return "\n".join(lines) + "\n"


def random_sentence(rng: random.Random, chars: list[str], max_len: int = 30) -> str:
    return "".join(rng.choice(chars) for _ in range(rng.randint(1, max_len)))


def random_choice_slot(rng: random.Random, n_cands: int) -> ChoiceSlot:
    cis = rng.sample(range(1, 901), n_cands)
    weights = [rng.random() + 1e-3 for _ in range(n_cands)]
    total = sum(weights) * (1.0 + rng.random())  # strict sub-distribution
    cands = sorted(
        ((ci, math.log(w / total)) for ci, w in zip(cis, weights)),
        key=lambda c: (-c[1], c[0]),
    )
    return ChoiceSlot(tuple(cands))


def random_lattice(
    rng: random.Random,
    max_choice_slots: int = 8,
    max_cands: int = 15,
    max_product: int = 20000,
) -> EmissionLattice:
    """Random lattice small enough for exhaustive enumeration."""
    slots = []
    product = 1
    n_choice = rng.randint(1, max_choice_slots)
    for _ in range(n_choice):
        if rng.random() < 0.5:
            slots.append(FixedSlot(f"ma{rng.randint(1, 5)}", -rng.random()))
        cap = max(1, min(max_cands, max_product // max(product, 1)))
        k = rng.randint(1, cap)
        product *= k
        slots.append(random_choice_slot(rng, k))
    if rng.random() < 0.5:
        slots.append(FixedSlot(f"yu{rng.randint(1, 5)}", -rng.random()))
    return EmissionLattice(tuple(slots), SymbolMode.INT)


def enumerate_nbest(lattice: EmissionLattice, n_best: int) -> list[tuple[float, tuple[int, ...]]]:
    """Exhaustive oracle: top n_best (score, ci sequence) over all outcomes.

    Sums fixed logps first, then chosen logps in slot order, matching the
    arithmetic order the search uses, so scores agree bit for bit.
    """
    fixed_sum = 0.0
    choice_slots = []
    for slot in lattice.slots:
        if isinstance(slot, FixedSlot):
            fixed_sum += slot.logp
        else:
            choice_slots.append(slot.candidates)
    outcomes = []
    for combo in itertools.product(*choice_slots):
        score = 0.0
        for _, lp in combo:
            score += lp
        outcomes.append((fixed_sum + score, tuple(ci for ci, _ in combo)))
    outcomes.sort(key=lambda o: (-o[0], o[1]))
    return outcomes[:n_best]

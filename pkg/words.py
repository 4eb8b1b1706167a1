"""Generator words over x, the embedded copy of G and the machine generators C(g).

Grammar (tokens separated by whitespace)::

    token := base ("^" int)?
    base  := "x" | "C(" label ")" | "(" label ")" | label

A missing exponent means 1; a zero exponent is rejected.
"""
import enum
import logging
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

import mealy
from errors import UnknownLabel, WordSyntaxError, ZeroExponent
from fingroup import RESERVED_LABEL, FiniteGroup

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r'(?:C\((?P<state>[^\s()^]+)\)|\((?P<paren>[^\s()^]+)\)|(?P<bare>[^\s()^]+))'
    r'(?:\^(?P<exp>-?[0-9]+))?'
)


class LetterKind(enum.Enum):
    X = 'x'
    EMBEDDED = 'embedded'
    STATEGEN = 'stategen'


@dataclass(frozen=True)
class Letter:
    kind: LetterKind
    payload: int  # element index, 0 for X
    exponent: int


@dataclass(frozen=True)
class GenWord:
    group: FiniteGroup = field(compare=False, repr=False)
    letters: Tuple[Letter, ...] = ()

    def __len__(self):
        return len(self.letters)

    def __add__(self, other):
        return GenWord(self.group, self.letters + other.letters)

    def __str__(self):
        return format_word(self)


@dataclass(frozen=True)
class ConjugateSequence:
    """(prod x^level f x^-level) * x^t, factors in written order."""
    group: FiniteGroup = field(compare=False, repr=False)
    factors: Tuple[Tuple[int, int], ...] = ()
    t: int = 0


def parse(text: str, G: FiniteGroup) -> GenWord:
    letters = []
    for match in re.finditer(r'\S+', text):
        token, start = match.group(0), match.start()
        m = _TOKEN.fullmatch(token)
        if m is None:
            raise WordSyntaxError(start + _bad_offset(token), f"cannot read token {token!r}")
        exponent = 1
        if m.group('exp') is not None:
            exponent = int(m.group('exp'))
            if exponent == 0:
                raise ZeroExponent(start + m.start('exp'))
        if m.group('state') is not None:
            label = m.group('state')
            letters.append(Letter(LetterKind.STATEGEN, _lookup(G, label, start), exponent))
        else:
            label = m.group('paren') or m.group('bare')
            if m.group('bare') == RESERVED_LABEL:
                letters.append(Letter(LetterKind.X, 0, exponent))
            else:
                letters.append(Letter(LetterKind.EMBEDDED, _lookup(G, label, start), exponent))
    return GenWord(G, tuple(letters))


def _bad_offset(token):
    """Offset of the first character where no token prefix can continue."""
    for end in range(len(token), 0, -1):
        if _TOKEN.fullmatch(token[:end]):
            return end
    return 0


def _lookup(G, label, position):
    if label == RESERVED_LABEL:
        raise UnknownLabel(label, position)
    try:
        return G.index_of(label)
    except UnknownLabel:
        raise UnknownLabel(label, position) from None


def format_word(w: GenWord) -> str:
    tokens = []
    for letter in w.letters:
        if letter.kind is LetterKind.X:
            base = 'x'
        elif letter.kind is LetterKind.STATEGEN:
            base = f"C({w.group.labels[letter.payload]})"
        else:
            base = w.group.labels[letter.payload]
        tokens.append(base if letter.exponent == 1 else f"{base}^{letter.exponent}")
    return " ".join(tokens)


def inverse_word(w: GenWord) -> GenWord:
    return GenWord(w.group, tuple(Letter(l.kind, l.payload, -l.exponent) for l in reversed(w.letters)))


def free_reduce(w: GenWord) -> GenWord:
    stack: List[Letter] = []
    for letter in w.letters:
        if stack and stack[-1].kind is letter.kind and stack[-1].payload == letter.payload:
            top = stack.pop()
            exponent = top.exponent + letter.exponent
            if exponent:
                stack.append(Letter(letter.kind, letter.payload, exponent))
        else:
            stack.append(letter)
    return GenWord(w.group, tuple(stack))


def to_conjugates(w: GenWord, G: FiniteGroup = None) -> ConjugateSequence:
    """Push every power of x to the right end of the word.

    C(g) is expanded as x^-1 g first; the running x-exponent in front of an
    element of G becomes that factor's level.
    """
    G = G or w.group
    height = 0
    factors = []
    for letter in w.letters:
        e = letter.exponent
        if letter.kind is LetterKind.X:
            height += e
        elif letter.kind is LetterKind.EMBEDDED:
            g = G.pow_index(letter.payload, e)
            if g:
                factors.append((height, g))
        elif e > 0:
            g = letter.payload
            for _ in range(e):
                height -= 1
                if g:
                    factors.append((height, g))
        else:
            g_inv = int(G.inv[letter.payload])
            for _ in range(-e):
                if g_inv:
                    factors.append((height, g_inv))
                height += 1
    return ConjugateSequence(G, tuple(factors), height)


def from_conjugates(seq: ConjugateSequence) -> GenWord:
    letters = []
    for level, g in seq.factors:
        if level:
            letters.append(Letter(LetterKind.X, 0, level))
        letters.append(Letter(LetterKind.EMBEDDED, g, 1))
        if level:
            letters.append(Letter(LetterKind.X, 0, -level))
    if seq.t:
        letters.append(Letter(LetterKind.X, 0, seq.t))
    return GenWord(seq.group, tuple(letters))


# machine semantics

@lru_cache(maxsize=1024)
def _embedded_word_machine(G, g):
    return mealy.minimize(mealy.compose(mealy.x_machine(G), mealy.cayley_pointed(G, g)))


def letter_machines(letter: Letter, G: FiniteGroup) -> List[mealy.PointedMachine]:
    """The written sequence of base machines a letter expands to."""
    e = letter.exponent
    if letter.kind is LetterKind.X:
        base = mealy.x_machine(G) if e > 0 else mealy.cayley_pointed(G, 0)
    elif letter.kind is LetterKind.STATEGEN:
        base = mealy.cayley_pointed(G, letter.payload)
        if e < 0:
            base = mealy.PointedMachine(mealy.inverse_cayley_machine(G), letter.payload)
    else:
        base = _embedded_word_machine(G, letter.payload)
        if e < 0:
            base = mealy.pointed_inverse(base)
    return [base] * abs(e)


def to_machine(w: GenWord, G: FiniteGroup = None, budget=None) -> mealy.PointedMachine:
    """Pointed product of the letters' machines, rightmost factor acting first."""
    G = G or w.group
    machines = []
    for letter in w.letters:
        machines.extend(letter_machines(letter, G))
    return mealy.compose_all(machines, G.order, budget)


@lru_cache(maxsize=4096)
def conjugate_machine(G: FiniteGroup, level: int, g: int, budget=None) -> mealy.PointedMachine:
    """Minimal machine of x^level g x^-level, built by conjugating one level at a time."""
    if level == 0:
        return _embedded_word_machine(G, g)
    if level > 0:
        inner = conjugate_machine(G, level - 1, g, budget)
        outer, undo = mealy.x_machine(G), mealy.cayley_pointed(G, 0)
    else:
        inner = conjugate_machine(G, level + 1, g, budget)
        outer, undo = mealy.cayley_pointed(G, 0), mealy.x_machine(G)
    return mealy.minimize(mealy.compose(outer, mealy.minimize(mealy.compose(inner, undo, budget)), budget))


@lru_cache(maxsize=256)
def x_power_machine(G: FiniteGroup, t: int, budget=None) -> mealy.PointedMachine:
    if t == 0:
        return mealy.identity_machine(G.order)
    step = mealy.x_machine(G) if t > 0 else mealy.cayley_pointed(G, 0)
    previous = x_power_machine(G, t - 1 if t > 0 else t + 1, budget)
    return mealy.minimize(mealy.compose(step, previous, budget))


def to_machine_factored(w: GenWord, G: FiniteGroup = None, budget=None) -> mealy.PointedMachine:
    """The machine of w assembled from cached conjugate machines and x^t."""
    G = G or w.group
    seq = to_conjugates(w, G)
    result = x_power_machine(G, seq.t, budget)
    for level, g in reversed(seq.factors):
        result = mealy.minimize(mealy.compose(conjugate_machine(G, level, g, budget), result, budget))
    return result


def act_word(w: GenWord, letters: Sequence[int], G: FiniteGroup = None) -> List[int]:
    """Apply w to a finite word one base machine at a time."""
    G = G or w.group
    out = list(letters)
    for letter in reversed(w.letters):
        for machine in letter_machines(letter, G):
            out = mealy.act(machine, out)
    return out


def act_word_batch(w: GenWord, words: np.ndarray, G: FiniteGroup = None) -> np.ndarray:
    G = G or w.group
    out = np.asarray(words, dtype=np.int64)
    for letter in reversed(w.letters):
        for machine in letter_machines(letter, G):
            out = mealy.act_batch(machine, out)
    return out


def all_words(k: int, length: int) -> np.ndarray:
    """Every word of the given length over 0..k-1, one per row, in lexicographic order."""
    return np.indices((k,) * length).reshape(length, -1).T


def word_ranks(rows: np.ndarray, k: int) -> np.ndarray:
    """Position of each row in the lexicographic order of ``all_words``."""
    length = rows.shape[1]
    return rows @ (k ** np.arange(length - 1, -1, -1, dtype=np.int64))


@lru_cache(maxsize=128)
def _unit_permutation(G: FiniteGroup, unit: Letter, length: int) -> np.ndarray:
    inputs = all_words(G.order, length)
    ranks = word_ranks(act_word_batch(GenWord(G, (unit,)), inputs), G.order)
    perm = ranks.astype(np.min_scalar_type(G.order ** length - 1))
    perm.flags.writeable = False
    return perm


def act_all_words(w: GenWord, length: int) -> np.ndarray:
    """Rank of the image of every word of the given length under w.

    Each letter with exponent +-1 permutes the words of a fixed length; its
    permutation is computed once and reused, so a power costs one gather per
    step instead of a walk through the machine.
    """
    G = w.group
    image = np.arange(G.order ** length)
    for letter in reversed(w.letters):
        unit = Letter(letter.kind, letter.payload, 1 if letter.exponent > 0 else -1)
        perm = _unit_permutation(G, unit, length)
        for _ in range(abs(letter.exponent)):
            image = perm[image]
    return image


def random_word(G: FiniteGroup, rng: random.Random, max_len: int, height: int = 2) -> GenWord:
    """Seeded random word whose running x-height stays within [-height, height]."""
    letters = []
    level = 0
    for _ in range(rng.randint(0, max_len)):
        kind = rng.choice((LetterKind.X, LetterKind.EMBEDDED, LetterKind.STATEGEN))
        e = rng.choice((-2, -1, 1, 2)) if kind is not LetterKind.STATEGEN else rng.choice((-1, 1))
        shift = e if kind is LetterKind.X else (-e if kind is LetterKind.STATEGEN else 0)
        if abs(level + shift) > height:
            kind, shift = LetterKind.EMBEDDED, 0
        g = rng.randrange(G.order)
        letters.append(Letter(kind, 0 if kind is LetterKind.X else g, e))
        level += shift
    return GenWord(G, tuple(letters))

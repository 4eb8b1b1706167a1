"""Normal forms (prod x^i f_i x^-i) * x^t with strictly increasing levels i.

Factors are collected by insertion sort. Moving x^j h x^-j left past
x^i g x^-i (i > j) leaves the commutator x^j [x^(i-j) g x^-(i-j), h] x^-j
behind; for a group of class at most two that commutator is a product of
central conjugates x^l [g^-1, h^a] x^-l, which are merged at the end.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import coeffs
import words
from errors import ClassTooHigh, CoeffRangeExceeded
from fingroup import FiniteGroup, GroupElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormalForm:
    group: FiniteGroup = field(compare=False, repr=False)
    levels: Tuple[Tuple[int, int], ...] = ()
    t: int = 0

    def as_dict(self) -> Dict[int, str]:
        return {level: self.group.labels[g] for level, g in self.levels}

    @property
    def is_identity(self):
        return not self.levels and self.t == 0

    def __str__(self):
        return nf_format(self)


def _require_class_two(G):
    check = G.class_check
    if not check.ok:
        raise ClassTooHigh(G.name, check.witness)


def _index(value):
    return value.index if isinstance(value, GroupElement) else int(value)


def _corrections(G, n, g, h, M):
    out = []
    g_inv = int(G.inv[g])
    for l in range(1, n + 1):
        c = G.comm_index(g_inv, G.pow_index(h, M(n, l)))
        if c:
            out.append((l, c))
    return out


def correction(n: int, g, h, G: FiniteGroup, M: Optional[coeffs.CoeffMatrix] = None) -> List[Tuple[int, GroupElement]]:
    """Central factors [x^n g x^-n, h] = prod_l x^l [g^-1, h^(a_nl)] x^-l, identities omitted."""
    _require_class_two(G)
    if M is None:
        M = coeffs.coeff_matrix(n)
    elif M.n_max < n:
        raise CoeffRangeExceeded(f"coefficient matrix holds rows 1..{M.n_max}, row {n} needed")
    return [(l, GroupElement(G, c)) for l, c in _corrections(G, n, _index(g), _index(h), M)]


def _collect(G: FiniteGroup, factors: Iterable[Tuple[int, int]], t: int) -> NormalForm:
    result: List[Tuple[int, int]] = []
    central: Dict[int, int] = {}
    for level, h in factors:
        if not h:
            continue
        pos = len(result)
        while pos > 0 and result[pos - 1][0] > level:
            i, g = result[pos - 1]
            M = coeffs.coeff_matrix(i - level)
            for l, z in _corrections(G, i - level, g, h, M):
                central[level + l] = G.mul(central.get(level + l, 0), z)
            pos -= 1
        if pos > 0 and result[pos - 1][0] == level:
            merged = G.mul(result[pos - 1][1], h)
            if merged:
                result[pos - 1] = (level, merged)
            else:
                del result[pos - 1]
        else:
            result.insert(pos, (level, h))

    final = dict(result)
    for level, z in central.items():
        merged = G.mul(final.get(level, 0), z)
        if merged:
            final[level] = merged
        else:
            final.pop(level, None)
    return NormalForm(G, tuple(sorted(final.items())), t)


def normalize(w: words.GenWord, G: FiniteGroup = None) -> NormalForm:
    G = G or w.group
    _require_class_two(G)
    seq = words.to_conjugates(w, G)
    return _collect(G, seq.factors, seq.t)


def from_levels(G: FiniteGroup, levels, t: int = 0) -> NormalForm:
    """Build a normal form from a level -> element mapping (labels or indices)."""
    items = dict(levels).items()
    cleaned = {}
    for level, g in items:
        g = G.index_of(g) if isinstance(g, str) else _index(g)
        if g:
            cleaned[int(level)] = g
    return NormalForm(G, tuple(sorted(cleaned.items())), t)


def identity(G: FiniteGroup) -> NormalForm:
    return NormalForm(G, (), 0)


def nf_multiply(A: NormalForm, B: NormalForm) -> NormalForm:
    G = A.group
    if B.group is not G:
        raise ValueError("normal forms over different groups")
    _require_class_two(G)
    shifted = [(level + A.t, g) for level, g in B.levels]
    return _collect(G, list(A.levels) + shifted, A.t + B.t)


def nf_inverse(A: NormalForm) -> NormalForm:
    G = A.group
    _require_class_two(G)
    factors = [(level - A.t, int(G.inv[g])) for level, g in reversed(A.levels)]
    return _collect(G, factors, -A.t)


def nf_equal(A: NormalForm, B: NormalForm) -> bool:
    return A.group is B.group and A.levels == B.levels and A.t == B.t


def nf_power(A: NormalForm, e: int) -> NormalForm:
    if e < 0:
        A, e = nf_inverse(A), -e
    result = identity(A.group)
    base = A
    while e:
        if e & 1:
            result = nf_multiply(result, base)
        base = nf_multiply(base, base)
        e >>= 1
    return result


def torsion_order(A: NormalForm, bound: int) -> Optional[int]:
    """Order of A if it is at most ``bound``; None otherwise (always None when t != 0)."""
    if A.t:
        return None
    current = A
    for n in range(1, bound + 1):
        if current.is_identity:
            return n
        current = nf_multiply(current, A)
    return None


def to_word(A: NormalForm) -> words.GenWord:
    return words.from_conjugates(words.ConjugateSequence(A.group, A.levels, A.t))


def nf_format(A: NormalForm) -> str:
    if A.is_identity:
        return '1'
    body = ''.join(f"[{level}:{A.group.labels[g]}]" for level, g in A.levels)
    return f"{body} x^{A.t}" if body else f"x^{A.t}"


def random_normal_form(G: FiniteGroup, rng: random.Random, span: int = 3) -> NormalForm:
    levels = {}
    for level in range(-span, span + 1):
        if rng.random() < 0.5:
            g = rng.randrange(1, G.order) if G.order > 1 else 0
            levels[level] = g
    return from_levels(G, levels, rng.randint(-span, span))

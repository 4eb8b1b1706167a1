"""Finite groups given by validated multiplication tables.

Elements are the integers 0..k-1 with 0 the identity. Other modules work on
these indices directly (``G.mul``, ``G.inv``, ``G.pow_index``); callers that
want labelled values use :class:`GroupElement`.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from errors import (
    DuplicateLabel, GroupFileError, GroupMismatch, GroupTableError, InvalidLabel,
    NoIdentityAtIndexZero, NotAssociative, NotLatinSquare, ReservedLabelX, UnknownLabel,
    UnknownName,
)

logger = logging.getLogger(__name__)

RESERVED_LABEL = 'x'
_FORBIDDEN_CHARS = frozenset(' \t\r\n^()')


class ClassCheck(NamedTuple):
    ok: bool
    witness: Optional[Tuple[str, str, str]]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    labels: Tuple[str, ...]
    table: np.ndarray
    inv: np.ndarray
    elt_order: np.ndarray
    name: str = 'G'
    _index: dict = field(default_factory=dict, repr=False)
    _powers: tuple = field(default=(), repr=False)

    @property
    def order(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"<FiniteGroup(name='{self.name}', order={self.order})>"

    # index-level arithmetic

    def mul(self, a, b):
        return int(self.table[a, b])

    def pow_index(self, g, e):
        powers = self._powers[g]
        return powers[e % len(powers)]

    def comm_index(self, g, h):
        """Index of [g,h] = g^-1 h^-1 g h."""
        return int(self.commutators[g, h])

    def index_of(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    # element-level access

    @property
    def identity(self):
        return GroupElement(self, 0)

    def element(self, label):
        return GroupElement(self, self.index_of(label))

    def elements(self):
        return [GroupElement(self, i) for i in range(self.order)]

    @cached_property
    def commutators(self):
        t = self.table
        ids = np.arange(self.order)
        a = t[self.inv[:, None], self.inv[None, :]]
        b = t[a, ids[:, None]]
        out = t[b, ids[None, :]]
        out.flags.writeable = False
        return out

    @cached_property
    def central_mask(self):
        mask = (self.table == self.table.T).all(axis=1)
        mask.flags.writeable = False
        return mask

    @cached_property
    def class_check(self):
        comm = self.commutators
        bad = np.argwhere(~self.central_mask[comm])
        if bad.size == 0:
            return ClassCheck(True, None)
        g, h = (int(v) for v in bad[0])
        c = int(comm[g, h])
        z = int(np.argmax(self.table[c, :] != self.table[:, c]))
        return ClassCheck(False, (self.labels[g], self.labels[h], self.labels[z]))

    @cached_property
    def exponent(self):
        return math.lcm(*(int(o) for o in self.elt_order))


class GroupElement:
    __slots__ = ('group', 'index')

    def __init__(self, group, index):
        if not 0 <= index < group.order:
            raise IndexError(f"element index {index} outside 0..{group.order - 1}")
        object.__setattr__(self, 'group', group)
        object.__setattr__(self, 'index', int(index))

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @property
    def label(self):
        return self.group.labels[self.index]

    @property
    def is_identity(self):
        return self.index == 0

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group is other.group and self.index == other.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, e):
        return power(self, e)

    def __invert__(self):
        return inverse(self)

    def __repr__(self):
        return f"<GroupElement {self.label} of {self.group.name}>"

    def __str__(self):
        return self.label


# construction

def _as_index_table(labels, table):
    index = {lab: i for i, lab in enumerate(labels)}
    rows = []
    for r, row in enumerate(table):
        out = []
        for c, entry in enumerate(row):
            if isinstance(entry, str):
                if entry not in index:
                    raise GroupTableError(f"entry ({r}, {c}) has unknown label {entry!r}")
                out.append(index[entry])
            else:
                out.append(int(entry))
        rows.append(out)
    return rows


def _check_labels(labels):
    seen = {}
    for i, lab in enumerate(labels):
        if not isinstance(lab, str) or not lab or _FORBIDDEN_CHARS & set(lab):
            raise InvalidLabel(lab, i)
        if lab == RESERVED_LABEL:
            raise ReservedLabelX(i)
        if lab in seen:
            raise DuplicateLabel(lab, seen[lab], i)
        seen[lab] = i
    return seen


def _check_latin(t, k):
    expected = np.arange(k)
    for axis, kind in ((1, 'row'), (0, 'column')):
        ok = (np.sort(t, axis=axis) == (expected if axis == 1 else expected[:, None])).all(axis=axis)
        if not ok.all():
            idx = int(np.argmin(ok))
            line = t[idx, :] if axis == 1 else t[:, idx]
            values, counts = np.unique(line, return_counts=True)
            raise NotLatinSquare(kind, idx, int(values[np.argmax(counts)]))


def from_table(labels: Sequence[str], table, name='G') -> FiniteGroup:
    """Validate a multiplication table and build the group.

    ``table[r][c]`` is the product of element r and element c, given either
    as indices or as labels. Element 0 must be the identity.
    """
    labels = tuple(labels)
    k = len(labels)
    if k == 0:
        raise GroupTableError("a group needs at least one element")
    if len(table) != k or any(len(row) != k for row in table):
        raise GroupTableError(f"{k} labels given but the table is not {k} by {k}")
    index = _check_labels(labels)

    t = np.array(_as_index_table(labels, table), dtype=np.int64).reshape(k, k)
    out_of_range = np.argwhere((t < 0) | (t >= k))
    if out_of_range.size:
        r, c = (int(v) for v in out_of_range[0])
        raise GroupTableError(f"entry ({r}, {c}) = {int(t[r, c])} is not an element index")

    _check_latin(t, k)
    ids = np.arange(k)
    if not (t[0, :] == ids).all():
        raise NoIdentityAtIndexZero(0, int(np.argmax(t[0, :] != ids)))
    if not (t[:, 0] == ids).all():
        raise NoIdentityAtIndexZero(int(np.argmax(t[:, 0] != ids)), 0)

    bad = np.argwhere(t[t, :] != t[:, t])
    if bad.size:
        a, b, c = (int(v) for v in bad[0])
        raise NotAssociative(a, b, c)

    inv = np.argmin(t, axis=1)  # the unique column holding 0 in each row
    powers = []
    for g in range(k):
        seq = [0]
        cur = g
        while cur != 0:
            seq.append(cur)
            cur = int(t[cur, g])
        powers.append(tuple(seq))
    elt_order = np.array([len(p) for p in powers], dtype=np.int64)
    for arr in (t, inv, elt_order):
        arr.flags.writeable = False

    logger.debug("validated group %s of order %d", name, k)
    return FiniteGroup(labels=labels, table=t, inv=inv, elt_order=elt_order, name=name,
                       _index=index, _powers=tuple(powers))


def reindex(G: FiniteGroup, order: Sequence[int], name=None) -> FiniteGroup:
    """The same group with element ``order[i]`` moved to index i (order[0] must be 0)."""
    order = list(order)
    pos = {old: new for new, old in enumerate(order)}
    labels = [G.labels[old] for old in order]
    table = [[pos[G.mul(a, b)] for b in order] for a in order]
    return from_table(labels, table, name=name or G.name)


# arithmetic on elements

def _same_group(*elements):
    group = elements[0].group
    for e in elements[1:]:
        if e.group is not group:
            raise GroupMismatch(f"elements of {group.name} and {e.group.name} cannot be combined")
    return group


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    G = _same_group(a, b)
    return GroupElement(G, G.mul(a.index, b.index))


def inverse(a: GroupElement) -> GroupElement:
    return GroupElement(a.group, int(a.group.inv[a.index]))


def power(g: GroupElement, e: int) -> GroupElement:
    """g**e with the exponent reduced modulo the order of g first."""
    return GroupElement(g.group, g.group.pow_index(g.index, e))


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    G = _same_group(g, h)
    return GroupElement(G, G.comm_index(g.index, h.index))


def is_class_at_most_two(G: FiniteGroup) -> ClassCheck:
    return G.class_check


def center(G: FiniteGroup):
    return [GroupElement(G, int(i)) for i in np.flatnonzero(G.central_mask)]


def derived_subgroup(G: FiniteGroup):
    members = {0}
    frontier = set(int(c) for c in np.unique(G.commutators))
    while frontier:
        members |= frontier
        frontier = {G.mul(a, b) for a in members for b in members} - members
    return [GroupElement(G, i) for i in sorted(members)]


# catalog

def _build(elements, label, mul, name):
    labels = [label(e) for e in elements]
    pos = {e: i for i, e in enumerate(elements)}
    table = [[pos[mul(a, b)] for b in elements] for a in elements]
    return from_table(labels, table, name=name)


def _cyclic(n, name, gen='a'):
    def label(i):
        return 'e' if i == 0 else (gen if i == 1 else f'{gen}{i}')
    return _build(list(range(n)), label, lambda a, b: (a + b) % n, name)


def _dihedral(n, name):
    elements = [(i, j) for j in range(2) for i in range(n)]

    def label(e):
        i, j = e
        rot = '' if i == 0 else ('r' if i == 1 else f'r{i}')
        return (rot + ('s' if j else '')) or 'e'

    def mul(a, b):
        return ((a[0] + (b[0] if a[1] == 0 else -b[0])) % n, (a[1] + b[1]) % 2)
    return _build(elements, label, mul, name)


_UNITS = {
    ('1', '1'): (1, '1'), ('1', 'i'): (1, 'i'), ('1', 'j'): (1, 'j'), ('1', 'k'): (1, 'k'),
    ('i', '1'): (1, 'i'), ('i', 'i'): (-1, '1'), ('i', 'j'): (1, 'k'), ('i', 'k'): (-1, 'j'),
    ('j', '1'): (1, 'j'), ('j', 'i'): (-1, 'k'), ('j', 'j'): (-1, '1'), ('j', 'k'): (1, 'i'),
    ('k', '1'): (1, 'k'), ('k', 'i'): (1, 'j'), ('k', 'j'): (-1, 'i'), ('k', 'k'): (-1, '1'),
}


def _quaternion():
    elements = [(s, u) for u in '1ijk' for s in (1, -1)]

    def mul(a, b):
        sign, unit = _UNITS[(a[1], b[1])]
        return (a[0] * b[0] * sign, unit)
    return _build(elements, lambda e: ('-' if e[0] < 0 else '') + e[1], mul, 'q8')


def _heisenberg(p, name):
    elements = list(itertools.product(range(p), repeat=3))

    def mul(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] + u[0] * v[1]) % p)
    return _build(elements, lambda e: ''.join(str(c) for c in e), mul, name)


def _klein():
    def mul(a, b):
        return (a[0] ^ b[0], a[1] ^ b[1])
    names = {(0, 0): 'e', (1, 0): 'a', (0, 1): 'b', (1, 1): 'ab'}
    return _build([(0, 0), (1, 0), (0, 1), (1, 1)], names.get, mul, 'z2xz2')


CATALOG = {
    'z2': lambda: _cyclic(2, 'z2', gen='t'),
    'z4': lambda: _cyclic(4, 'z4'),
    'z2xz2': _klein,
    's3': lambda: _dihedral(3, 's3'),
    'd4': lambda: _dihedral(4, 'd4'),
    'q8': _quaternion,
    'heis3': lambda: _heisenberg(3, 'heis3'),
    'd8_16': lambda: _dihedral(8, 'd8_16'),
}

_builtin_cache = {}


def builtin(name: str) -> FiniteGroup:
    if name not in CATALOG:
        raise UnknownName(name, list(CATALOG))
    if name not in _builtin_cache:
        _builtin_cache[name] = CATALOG[name]()
    return _builtin_cache[name]


# group file format

def _content_lines(text):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        yield number, line.split()


def parse_group_text(text: str, name='G') -> FiniteGroup:
    lines = list(_content_lines(text))
    last_line = len(text.splitlines())
    if not lines:
        raise GroupFileError(last_line + 1, "expected 'order K'")
    number, tokens = lines[0]
    if len(tokens) != 2 or tokens[0] != 'order' or not tokens[1].isdigit() or int(tokens[1]) < 1:
        raise GroupFileError(number, "expected 'order K' with K a positive integer")
    k = int(tokens[1])
    if len(lines) < 2:
        raise GroupFileError(last_line + 1, "expected 'elements L0 ... L(K-1)'")
    number, tokens = lines[1]
    if tokens[0] != 'elements' or len(tokens) != k + 1:
        raise GroupFileError(number, f"expected 'elements' followed by {k} labels")
    labels = tokens[1:]
    try:
        _check_labels(labels)
    except GroupTableError as exc:
        raise GroupFileError(number, str(exc)) from exc
    rows = lines[2:]
    if len(rows) < k:
        raise GroupFileError(last_line + 1, f"file ends after {len(rows)} of {k} table rows")
    if len(rows) > k:
        raise GroupFileError(rows[k][0], "unexpected content after the table")
    known = set(labels)
    table = []
    for number, tokens in rows:
        if len(tokens) != k:
            raise GroupFileError(number, f"expected {k} labels, found {len(tokens)}")
        unknown = [tok for tok in tokens if tok not in known]
        if unknown:
            raise GroupFileError(number, f"unknown label {unknown[0]!r}")
        table.append(tokens)
    return from_table(labels, table, name=name)


def load_group_file(path) -> FiniteGroup:
    with open(path, mode='r', encoding='utf-8') as handle:
        text = handle.read()
    stem = str(path).replace('\\', '/').rsplit('/', 1)[-1].split('.')[0]
    return parse_group_text(text, name=stem or 'G')


def dump_group_file(G: FiniteGroup) -> str:
    out = [f"order {G.order}", "elements " + " ".join(G.labels)]
    for r in range(G.order):
        out.append(" ".join(G.labels[G.mul(r, c)] for c in range(G.order)))
    return "\n".join(out) + "\n"

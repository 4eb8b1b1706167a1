"""Letter-to-letter transducers and the tree automorphisms they define.

A pointed machine acts on words left to right. Products follow function
composition: ``compose(A, B)`` feeds the input through B first and its
output through A, so the word s1 s2 ... sm means s1(s2(...sm(w))).
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from config import get_config
from errors import AlphabetMismatch, LetterOutOfRange, NotInvertible, StateBudgetExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MealyMachine:
    delta: np.ndarray
    lam: np.ndarray
    state_labels: Optional[tuple] = None

    def __post_init__(self):
        if self.delta.shape != self.lam.shape or self.delta.ndim != 2:
            raise ValueError("delta and lambda must be state_count x alphabet_size arrays")
        m, k = self.delta.shape
        if m == 0 or k == 0:
            raise ValueError("a machine needs at least one state and one letter")
        if self.delta.min() < 0 or self.delta.max() >= m:
            raise ValueError("transition target out of range")
        if self.lam.min() < 0 or self.lam.max() >= k:
            raise ValueError("output letter out of range")
        self.delta.flags.writeable = False
        self.lam.flags.writeable = False

    @property
    def state_count(self):
        return self.delta.shape[0]

    @property
    def alphabet_size(self):
        return self.delta.shape[1]

    def non_permuting_state(self):
        """First state whose output row is not a permutation, or None."""
        ok = (np.sort(self.lam, axis=1) == np.arange(self.alphabet_size)).all(axis=1)
        return None if ok.all() else int(np.argmin(ok))

    @property
    def is_invertible(self):
        return self.non_permuting_state() is None

    def __repr__(self):
        return f"<MealyMachine(states={self.state_count}, letters={self.alphabet_size})>"


@dataclass(frozen=True, eq=False)
class PointedMachine:
    machine: MealyMachine
    initial: int

    def __post_init__(self):
        if not 0 <= self.initial < self.machine.state_count:
            raise ValueError(f"initial state {self.initial} out of range")

    @property
    def alphabet_size(self):
        return self.machine.alphabet_size

    @property
    def state_count(self):
        return self.machine.state_count

    def __repr__(self):
        return f"<PointedMachine(states={self.state_count}, initial={self.initial})>"


def make_machine(delta, lam, state_labels=None) -> MealyMachine:
    return MealyMachine(np.array(delta, dtype=np.int64), np.array(lam, dtype=np.int64),
                        tuple(state_labels) if state_labels is not None else None)


def identity_machine(k: int) -> PointedMachine:
    return PointedMachine(make_machine(np.zeros((1, k)), np.arange(k)[None, :]), 0)


@lru_cache(maxsize=64)
def cayley_machine(G) -> MealyMachine:
    """States and letters are the elements of G; both maps are q, a -> q*a."""
    return MealyMachine(np.array(G.table), np.array(G.table), G.labels)


def invert(M: MealyMachine) -> MealyMachine:
    bad = M.non_permuting_state()
    if bad is not None:
        raise NotInvertible(bad)
    lam = np.argsort(M.lam, axis=1, kind='stable')
    delta = np.take_along_axis(M.delta, lam, axis=1)
    return MealyMachine(delta, lam, M.state_labels)


def pointed_inverse(P: PointedMachine) -> PointedMachine:
    return PointedMachine(invert(P.machine), P.initial)


@lru_cache(maxsize=64)
def inverse_cayley_machine(G) -> MealyMachine:
    return invert(cayley_machine(G))


def cayley_pointed(G, g: int) -> PointedMachine:
    return PointedMachine(cayley_machine(G), g)


def x_machine(G) -> PointedMachine:
    """x, the inverse Cayley machine pointed at the identity (a reset automaton)."""
    return PointedMachine(inverse_cayley_machine(G), 0)


def embedded_machine(G, g: int) -> PointedMachine:
    """The element g(1,...,1): left-multiply the first letter by g, then stop."""
    k = G.order
    delta = np.ones((2, k), dtype=np.int64)
    lam = np.vstack([G.table[g], np.arange(k)])
    return PointedMachine(MealyMachine(delta, lam), 0)


def compose(A: PointedMachine, B: PointedMachine, budget=None) -> PointedMachine:
    """The product that applies B to the word first, then A.

    States are the pairs reachable from (initial A, initial B).
    """
    if A.alphabet_size != B.alphabet_size:
        raise AlphabetMismatch(f"alphabet sizes {A.alphabet_size} and {B.alphabet_size} differ")
    if budget is None:
        budget = get_config().STATE_BUDGET
    dA, lA = A.machine.delta, A.machine.lam
    dB, lB = B.machine.delta, B.machine.lam
    mB = B.state_count

    start = A.initial * mB + B.initial
    seen = np.array([start], dtype=np.int64)
    frontier = seen
    while frontier.size:
        p, q = np.divmod(frontier, mB)
        nxt = np.unique(dA[p[:, None], lB[q]] * mB + dB[q])
        new = np.setdiff1d(nxt, seen, assume_unique=True)
        if seen.size + new.size > budget:
            raise StateBudgetExceeded(budget)
        seen = np.union1d(seen, new)
        frontier = new

    p, q = np.divmod(seen, mB)
    mid = lB[q]
    lam = lA[p[:, None], mid]
    delta = np.searchsorted(seen, dA[p[:, None], mid] * mB + dB[q])
    initial = int(np.searchsorted(seen, start))
    logger.debug("composed %d x %d states -> %d reachable", A.state_count, B.state_count, seen.size)
    return PointedMachine(MealyMachine(delta, lam), initial)


def _canonical(P: PointedMachine) -> PointedMachine:
    """Restrict to reachable states, numbered breadth-first from the initial state."""
    delta, lam = P.machine.delta, P.machine.lam
    index = np.full(P.state_count, -1, dtype=np.int64)
    index[P.initial] = 0
    order = [np.array([P.initial], dtype=np.int64)]
    count = 1
    frontier = order[0]
    while frontier.size:
        cand = delta[frontier].ravel()
        _, first = np.unique(cand, return_index=True)
        cand = cand[np.sort(first)]
        cand = cand[index[cand] < 0]
        index[cand] = np.arange(count, count + cand.size)
        count += cand.size
        order.append(cand)
        frontier = cand
    order = np.concatenate(order)
    return PointedMachine(MealyMachine(index[delta[order]], lam[order]), 0)


def _refine(delta, lam):
    """Moore refinement; returns the block number of every state."""
    block = np.unique(lam, axis=0, return_inverse=True)[1].reshape(-1)
    count = int(block.max()) + 1
    while True:
        signature = np.column_stack([block, block[delta]])
        new = np.unique(signature, axis=0, return_inverse=True)[1].reshape(-1)
        new_count = int(new.max()) + 1
        if new_count == count:
            return new
        block, count = new, new_count


def minimize(P: PointedMachine) -> PointedMachine:
    P = _canonical(P)
    delta, lam = P.machine.delta, P.machine.lam
    block = _refine(delta, lam)
    _, reps = np.unique(block, return_index=True)
    quotient = MealyMachine(block[delta[reps]], lam[reps])
    return _canonical(PointedMachine(quotient, int(block[P.initial])))


def compose_all(machines: Sequence[PointedMachine], k: int, budget=None) -> PointedMachine:
    """Product of a written sequence (rightmost acts first), minimized after each step."""
    result = identity_machine(k)
    for M in reversed(machines):
        result = minimize(compose(M, result, budget))
    return result


def act(P: PointedMachine, word: Sequence[int]):
    k = P.alphabet_size
    q = P.initial
    out = []
    for pos, a in enumerate(word):
        if not 0 <= a < k:
            raise LetterOutOfRange(f"letter {a} at position {pos} outside 0..{k - 1}")
        out.append(int(P.machine.lam[q, a]))
        q = int(P.machine.delta[q, a])
    return out


def act_batch(P: PointedMachine, words: np.ndarray) -> np.ndarray:
    """Apply P to every row of a 2-D array of letters."""
    words = np.asarray(words, dtype=np.int64)
    if words.size and (words.min() < 0 or words.max() >= P.alphabet_size):
        raise LetterOutOfRange(f"letters must lie in 0..{P.alphabet_size - 1}")
    out = np.empty_like(words)
    state = np.full(words.shape[0], P.initial, dtype=np.int64)
    for t in range(words.shape[1]):
        column = words[:, t]
        out[:, t] = P.machine.lam[state, column]
        state = P.machine.delta[state, column]
    return out


def residual(P: PointedMachine, letter: int) -> PointedMachine:
    """The automorphism induced below the first letter ``letter``."""
    return PointedMachine(P.machine, int(P.machine.delta[P.initial, letter]))


def _identity_states(delta, lam):
    """Mask of states whose residual automorphism is the identity."""
    mask = (lam == np.arange(lam.shape[1])).all(axis=1)
    while True:
        new = mask & mask[delta].all(axis=1)
        if (new == mask).all():
            return mask
        mask = new


def is_identity(P: PointedMachine) -> bool:
    P = _canonical(P)
    return bool((P.machine.lam == np.arange(P.alphabet_size)).all())


def equal(P: PointedMachine, Q: PointedMachine) -> bool:
    """Exact equality of the induced tree automorphisms.

    Refines the disjoint union of both machines and compares the blocks of
    the two initial states.
    """
    if P.alphabet_size != Q.alphabet_size:
        raise AlphabetMismatch(f"alphabet sizes {P.alphabet_size} and {Q.alphabet_size} differ")
    P, Q = _canonical(P), _canonical(Q)
    offset = P.state_count
    delta = np.vstack([P.machine.delta, Q.machine.delta + offset])
    lam = np.vstack([P.machine.lam, Q.machine.lam])
    block = _refine(delta, lam)
    return bool(block[0] == block[offset])


def depth(P: PointedMachine) -> Optional[int]:
    """Least n such that P changes only the first n letters; None if infinite."""
    P = minimize(P)
    delta, lam = P.machine.delta, P.machine.lam
    trivial = _identity_states(delta, lam)
    if trivial[0]:
        return 0
    active = [int(q) for q in np.flatnonzero(~trivial)]
    successors = {q: {int(r) for r in delta[q] if not trivial[r]} for q in active}
    pending = {q: len(s) for q, s in successors.items()}
    parents = {q: [] for q in active}
    for q, succ in successors.items():
        for r in succ:
            parents[r].append(q)
    value = {}
    ready = deque(q for q in active if pending[q] == 0)
    while ready:
        q = ready.popleft()
        value[q] = 1 + max((value[r] for r in successors[q]), default=0)
        for p in parents[q]:
            pending[p] -= 1
            if pending[p] == 0:
                ready.append(p)
    if len(value) < len(active):
        return None
    return value[0]


def layer_witness(P: PointedMachine, n: int) -> Optional[list]:
    """A word of length n+1 whose last letter P changes, or None."""
    P = _canonical(P)
    delta, lam = P.machine.delta, P.machine.lam
    k = P.alphabet_size
    prefix = {0: []}
    for _ in range(n):
        nxt = {}
        for q, word in prefix.items():
            for a in range(k):
                nxt.setdefault(int(delta[q, a]), word + [a])
        prefix = nxt
    for q in sorted(prefix):
        moved = np.flatnonzero(lam[q] != np.arange(k))
        if moved.size:
            return prefix[q] + [int(moved[0])]
    return None


def dump(M: MealyMachine, letters=None) -> str:
    """Plain-text table, one ``state | input -> output / next-state`` line per pair."""
    letters = letters or [str(a) for a in range(M.alphabet_size)]
    states = M.state_labels or [str(q) for q in range(M.state_count)]
    lines = []
    for q in range(M.state_count):
        for a in range(M.alphabet_size):
            lines.append(f"{states[q]} | {letters[a]} -> "
                         f"{letters[M.lam[q, a]]} / {states[M.delta[q, a]]}")
    return "\n".join(lines) + "\n"

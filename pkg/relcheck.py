"""Machine-checked verification of the commutator relations and related claims.

Two independent decision procedures compare elements: ``machine`` (exact
equality of minimized transducers) and ``action`` (exhaustive action on all
words up to the depth bound). Per-check errors are recorded, never raised.
"""
import logging
import random
import time
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np
import pandas as pd

import coeffs
import mealy
import normalform
import words
from config import get_config
from errors import ActionCostExceeded, CayleyError
from fingroup import FiniteGroup
from words import GenWord, Letter, LetterKind

logger = logging.getLogger(__name__)

METHODS = ('machine', 'action')
PASS, FAIL, ERROR, VACUOUS = 'PASS', 'FAIL', 'ERROR', 'VACUOUS'


class Verdict(NamedTuple):
    passed: bool
    witness: Optional[str] = None
    vacuous: bool = False


@dataclass
class CheckResult:
    check_id: str
    n: Optional[int]
    g: str
    h: str
    verdict: str
    witness: Optional[str] = None

    def line(self):
        n = '-' if self.n is None else self.n
        return f"CHECK {self.check_id} n={n} g={self.g} h={self.h} {self.verdict}"


@dataclass
class VerificationReport:
    group: str
    kind: str = 'relations'
    method: Optional[str] = None
    checks: List[CheckResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def total(self):
        return len(self.checks)

    @property
    def passed(self):
        return sum(c.verdict in (PASS, VACUOUS) for c in self.checks)

    @property
    def failed(self):
        return sum(c.verdict == FAIL for c in self.checks)

    @property
    def errors(self):
        return sum(c.verdict == ERROR for c in self.checks)

    @property
    def ok(self):
        return self.passed == self.total

    def failures(self):
        return [c for c in self.checks if c.verdict in (FAIL, ERROR)]

    def summary(self):
        text = f"{self.total} checks, {self.passed} pass"
        if self.failed:
            text += f", {self.failed} fail"
        if self.errors:
            text += f", {self.errors} error"
        return text

    def summary_by_id(self):
        ids = []
        for c in self.checks:
            if c.check_id not in ids:
                ids.append(c.check_id)
        out = []
        for check_id in ids:
            group = [c for c in self.checks if c.check_id == check_id]
            good = sum(c.verdict in (PASS, VACUOUS) for c in group)
            out.append(f"{check_id}: {good}/{len(group)} pass")
        return out

    def to_frame(self) -> pd.DataFrame:
        rows = [{'check': c.check_id, 'n': '' if c.n is None else c.n, 'g': c.g, 'h': c.h,
                 'verdict': c.verdict, 'witness': c.witness or ''} for c in self.checks]
        return pd.DataFrame(rows, columns=['check', 'n', 'g', 'h', 'verdict', 'witness'])


def _record(report, check_id, n, g, h, fn):
    try:
        verdict = fn()
    except CayleyError as exc:
        logger.warning("%s n=%s g=%s h=%s: %s", check_id, n, g, h, exc)
        report.checks.append(CheckResult(check_id, n, g, h, ERROR, str(exc)))
        return
    if verdict.vacuous:
        status = VACUOUS
    else:
        status = PASS if verdict.passed else FAIL
    report.checks.append(CheckResult(check_id, n, g, h, status, verdict.witness))


# words of the relations

def _x(e):
    return Letter(LetterKind.X, 0, e)


def _g(g):
    return Letter(LetterKind.EMBEDDED, g, 1)


def _conjugate(n, g):
    return [_x(n), _g(g), _x(-n)] if n else [_g(g)]


def relation_words(G: FiniteGroup, n: int, g: int, h: int, M=None):
    """(LHS, RHS) of [x^n g x^-n, h] = prod_j x^j [g^-1, h^(a_nj)] x^-j."""
    M = M or coeffs.coeff_matrix(n)
    g_inv, h_inv = int(G.inv[g]), int(G.inv[h])
    lhs = _conjugate(n, g_inv) + [_g(h_inv)] + _conjugate(n, g) + [_g(h)]
    rhs = []
    for j in range(1, n + 1):
        c = G.comm_index(g_inv, G.pow_index(h, M(n, j)))
        if c:
            rhs.extend(_conjugate(j, c))
    return GenWord(G, tuple(lhs)), GenWord(G, tuple(rhs))


def _moved_word(P: mealy.PointedMachine, max_len: int):
    for n in range(max_len):
        witness = mealy.layer_witness(P, n)
        if witness is not None:
            return witness
    return None


def _labels(G, letters):
    return " ".join(G.labels[a] for a in letters)


def _machine_equal(u: GenWord, v: GenWord, budget=None) -> Verdict:
    P = words.to_machine_factored(u, budget=budget)
    Q = words.to_machine_factored(v, budget=budget)
    if mealy.equal(P, Q):
        return Verdict(True)
    moved = _moved_word(mealy.compose(P, mealy.pointed_inverse(Q), budget), 32)
    text = f"{words.format_word(u)} != {words.format_word(v)}"
    if moved is not None:
        text += f" on [{_labels(u.group, moved)}]"
    return Verdict(False, text)


def _action_identity(w: GenWord, length: int, action_budget=None) -> Verdict:
    """Whether w fixes every word of the given length; exhaustive."""
    G = w.group
    if action_budget is None:
        action_budget = get_config().ACTION_BUDGET
    cost = G.order ** length
    if cost > action_budget:
        raise ActionCostExceeded(cost, action_budget)
    image = words.act_all_words(w, length)
    moved = np.flatnonzero(image != np.arange(cost))
    if moved.size == 0:
        return Verdict(True)
    first = np.unravel_index(int(moved[0]), (G.order,) * length)
    return Verdict(False, f"moves [{_labels(G, (int(a) for a in first))}]")


def words_equal(u: GenWord, v: GenWord, method='machine', budget=None, action_budget=None) -> Verdict:
    """Equality of two group words.

    Over a nontrivial group x has infinite order, so different x-exponents
    mean different elements. Otherwise u v^-1 lies in N and is conjugated
    by x^-(lowest level) so the depth bound applies to the action oracle.
    """
    G = u.group
    cu, cv = words.to_conjugates(u), words.to_conjugates(v)
    if cu.t != cv.t and G.order > 1:
        return Verdict(False, f"x-exponents differ ({cu.t} vs {cv.t})")
    if method == 'machine':
        return _machine_equal(u, v, budget)
    w = u + words.inverse_word(v)
    seq = words.to_conjugates(w)
    if not seq.factors:
        return Verdict(True)
    lo = min(level for level, _ in seq.factors)
    hi = max(level for level, _ in seq.factors)
    shifted = GenWord(G, (_x(-lo),) + w.letters + (_x(lo),)) if lo else w
    verdict = _action_identity(shifted, hi - lo + 1, action_budget)
    if verdict.passed:
        return verdict
    return Verdict(False, f"{words.format_word(u)} != {words.format_word(v)}; {verdict.witness}")


def verify_relation(G: FiniteGroup, n: int, g: int, h: int, method='machine',
                    M=None, budget=None, action_budget=None) -> Verdict:
    if n < 1:
        raise ValueError("relations are indexed by n >= 1")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    lhs, rhs = relation_words(G, n, g, h, M)
    if method == 'machine':
        return _machine_equal(lhs, rhs, budget)
    verdict = _action_identity(lhs + words.inverse_word(rhs), n + 1, action_budget)
    if verdict.passed:
        return verdict
    return Verdict(False, f"{words.format_word(lhs)} != {words.format_word(rhs)}; {verdict.witness}")


def verify_all(G: FiniteGroup, n_max: int, method='machine', budget=None, action_budget=None,
               n_min: int = 1) -> VerificationReport:
    started = time.perf_counter()
    report = VerificationReport(G.name, 'relations', method)
    M = coeffs.coeff_matrix(n_max)
    for n in range(n_min, n_max + 1):
        logger.info("verifying relations of %s at n=%d (%s)", G.name, n, method)
        for g in range(G.order):
            for h in range(G.order):
                _record(report, 'relation', n, G.labels[g], G.labels[h],
                        lambda: verify_relation(G, n, g, h, method, M, budget, action_budget))
    report.wall_time = time.perf_counter() - started
    return report


def verify_wreath_coords(G: FiniteGroup, g: int, n: int, budget=None) -> Verdict:
    """x^n g x^-n = g(C_{g a}^-n C_a^n)_a, checked letter by letter."""
    if n < 0:
        raise ValueError("wreath coordinates are checked for n >= 0")
    P = words.to_machine(GenWord(G, tuple(_conjugate(n, g))), budget=budget)
    for a in range(G.order):
        out = int(P.machine.lam[P.initial, a])
        if out != G.mul(g, a):
            return Verdict(False, f"first letter {G.labels[a]} -> {G.labels[out]}")
        expected = GenWord(G, (Letter(LetterKind.STATEGEN, G.mul(g, a), -n),
                               Letter(LetterKind.STATEGEN, a, n)) if n else ())
        if not mealy.equal(mealy.residual(P, a), words.to_machine(expected, budget=budget)):
            return Verdict(False, f"residual below {G.labels[a]} differs from {words.format_word(expected)}")
    return Verdict(True)


def verify_depth(G: FiniteGroup, g: int, n: int, samples=200, seed=0, budget=None) -> Verdict:
    """x^n g x^-n has depth exactly n+1 for n >= 0 and infinite depth for n < 0."""
    if g == 0:
        return Verdict(True, "identity element", vacuous=True)
    P = words.conjugate_machine(G, n, g, budget)
    found = mealy.depth(P)
    if n < 0:
        # every non-identity state reaches a letter-moving state within state_count steps
        start = 4 * abs(n) + 8
        moved = next((w for w in (mealy.layer_witness(P, L) for L in range(start, start + P.state_count + 1))
                      if w is not None), None)
        if found is None and moved is not None:
            return Verdict(True)
        return Verdict(False, f"depth {found}, expected infinite")

    rng = np.random.default_rng(seed)
    length = n + 1 + 12
    inputs = rng.integers(0, G.order, size=(samples, length))
    outputs = mealy.act_batch(P, inputs)
    if (outputs[:, n + 1:] != inputs[:, n + 1:]).any():
        return Verdict(False, f"changes a letter beyond position {n + 1}")
    witness = mealy.layer_witness(P, n)
    if witness is None:
        return Verdict(False, f"no word has letter {n + 1} changed")
    if found != n + 1:
        return Verdict(False, f"depth {found}, expected {n + 1}")
    return Verdict(True)


def verify_embedding(G: FiniteGroup, budget=None) -> VerificationReport:
    """x C(g) = g(1,...,1), C(g) = x^-1 g and C(g)^-1 = g^-1 x for every g."""
    started = time.perf_counter()
    report = VerificationReport(G.name, 'embedding', 'machine')
    for g in range(G.order):
        label = G.labels[g]

        def embedding():
            P = words.to_machine(GenWord(G, (_x(1), Letter(LetterKind.STATEGEN, g, 1))), budget=budget)
            return Verdict(mealy.equal(P, mealy.embedded_machine(G, g)))

        def generator():
            lhs = GenWord(G, (Letter(LetterKind.STATEGEN, g, 1),))
            rhs = GenWord(G, (_x(-1), _g(g)))
            return Verdict(mealy.equal(words.to_machine(lhs, budget=budget), words.to_machine(rhs, budget=budget)))

        def generator_inverse():
            lhs = GenWord(G, (Letter(LetterKind.STATEGEN, g, -1),))
            rhs = GenWord(G, (_g(int(G.inv[g])), _x(1)))
            return Verdict(mealy.equal(words.to_machine(lhs, budget=budget), words.to_machine(rhs, budget=budget)))

        _record(report, 'embedding', None, label, '-', embedding)
        _record(report, 'generator', None, label, '-', generator)
        _record(report, 'generator-inverse', None, label, '-', generator_inverse)
    report.wall_time = time.perf_counter() - started
    return report


SMALL_POWER_STATES = 4096


def verify_infinite_order(G: FiniteGroup, m_max: int = 16) -> Verdict:
    """x^m moves the word g 1^m for every 1 <= m <= m_max (g the first non-identity element).

    Powers whose machine stays small are also checked with ``mealy.is_identity``.
    """
    if G.order == 1:
        return Verdict(False, "x is trivial over the trivial group")
    probe = [1] + [0] * m_max
    for m in range(1, m_max + 1):
        w = GenWord(G, (_x(m),))
        if words.act_word(w, probe[:m + 1]) == probe[:m + 1]:
            return Verdict(False, f"x^{m} fixes [{_labels(G, probe[:m + 1])}]")
        if G.order ** m <= SMALL_POWER_STATES and mealy.is_identity(words.x_power_machine(G, m)):
            return Verdict(False, f"machine of x^{m} is the identity")
    return Verdict(True)


def verify_depths(G: FiniteGroup, n_max: int, budget=None, n_min: int = 0) -> VerificationReport:
    started = time.perf_counter()
    report = VerificationReport(G.name, 'depth', 'machine')
    for n in range(n_min, n_max + 1):
        for g in range(G.order):
            _record(report, 'depth', n, G.labels[g], '-', lambda: verify_depth(G, g, n, budget=budget))
    report.wall_time = time.perf_counter() - started
    return report


def verify_wreath(G: FiniteGroup, n_max: int, budget=None, n_min: int = 0) -> VerificationReport:
    started = time.perf_counter()
    report = VerificationReport(G.name, 'wreath', 'machine')
    for n in range(n_min, n_max + 1):
        for g in range(G.order):
            _record(report, 'wreath', n, G.labels[g], '-', lambda: verify_wreath_coords(G, g, n, budget))
    report.wall_time = time.perf_counter() - started
    return report


def _partner(u: GenWord, rng: random.Random, max_len: int, height: int) -> GenWord:
    G = u.group
    kind = rng.randrange(4)
    if kind == 0:
        return words.random_word(G, rng, max_len, height)
    if kind == 1:
        return normalform.to_word(normalform.normalize(u))
    if kind == 2:
        g = rng.randrange(G.order)
        pos = rng.randint(0, len(u))
        padded = u.letters[:pos] + (_g(g), Letter(LetterKind.EMBEDDED, g, -1)) + u.letters[pos:]
        return words.free_reduce(GenWord(G, padded))
    g = rng.randrange(1, G.order) if G.order > 1 else 0
    return u + GenWord(G, (_g(g),))


def cross_validate(G: FiniteGroup, count=None, max_len=None, seed=None, height=None,
                   budget=None) -> VerificationReport:
    """Normal-form equality against machine equality on seeded random word pairs."""
    cfg = get_config()
    count = cfg.XVAL_COUNT if count is None else count
    max_len = cfg.XVAL_MAX_LEN if max_len is None else max_len
    seed = cfg.DEFAULT_SEED if seed is None else seed
    height = cfg.WORD_HEIGHT if height is None else height
    started = time.perf_counter()
    rng = random.Random(seed)
    report = VerificationReport(G.name, 'xval', 'machine')

    for i in range(count):
        u = words.random_word(G, rng, max_len, height)
        v = _partner(u, rng, max_len, height)

        def agree():
            nf_eq = normalform.nf_equal(normalform.normalize(u), normalform.normalize(v))
            machine_eq = mealy.equal(words.to_machine_factored(u, budget=budget),
                                     words.to_machine_factored(v, budget=budget))
            if nf_eq == machine_eq:
                return Verdict(True)
            return Verdict(False, f"[{words.format_word(u)}] vs [{words.format_word(v)}]: "
                                  f"normal forms {'equal' if nf_eq else 'differ'}, "
                                  f"machines {'equal' if machine_eq else 'differ'}")
        _record(report, 'xval', i, '-', '-', agree)

    for i in range(count):
        A = normalform.random_normal_form(G, rng)

        def roundtrip():
            B = normalform.normalize(normalform.to_word(A))
            return Verdict(normalform.nf_equal(A, B), None if normalform.nf_equal(A, B)
                           else f"{normalform.nf_format(A)} -> {normalform.nf_format(B)}")
        _record(report, 'nf-roundtrip', i, '-', '-', roundtrip)

    report.wall_time = time.perf_counter() - started
    return report


def verify_infinite_orders(G: FiniteGroup, m_max: int = 16) -> VerificationReport:
    started = time.perf_counter()
    report = VerificationReport(G.name, 'infinite-order', 'action')
    _record(report, 'infinite-order', m_max, '-', '-', lambda: verify_infinite_order(G, m_max))
    report.wall_time = time.perf_counter() - started
    return report

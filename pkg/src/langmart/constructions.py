"""Executable betting constructions over regular domains.

Each function returns a Setup whose step function realizes one concrete
strategy: betting along a fixed automaton, along an extracted regular
subset, by enumerative learning over an indexed family, by simulating a
machine on a self-scheduled text, by diagonalizing against a weighted
enumeration of setups, or by precomputing answers inside the gaps of the
ordered text.  All capital moves use fixed dyadic factors, and every
construction is meant to pass the engine's exact fairness audit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Callable

from .automata import (
    Dfa,
    NoSuccessorError,
    convolve,
    count_leq_ll,
    enumerate_ll,
    exponential_growth_witness,
    growth_class,
    min_ll,
    min_word_of_length_at_least,
    slice_count,
    succ_ll,
    words_of_length,
)
from .dyadic import Dyadic, HALF, ONE, THREE_HALVES, TWO, ZERO
from .engine import (
    Labeled,
    MState,
    NotNormedError,
    PAUSE,
    Setup,
    Stream,
    is_normed,
    make_text,
    run,
    truncated_sum,
)


class ConstructionError(Exception):
    pass


class LearnerStallError(ConstructionError):
    pass


class HypothesisExhaustedError(ConstructionError):
    pass


class DiagonalBoundError(ConstructionError):
    pass


# ---------------------------------------------------------------------------
# Automatic families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AutomaticFamily:
    """Indexed language collection: regular index set plus a two-track
    membership automaton reading (word, index) convolutions."""

    index_language: Dfa
    membership: Dfa

    def __post_init__(self):
        if self.membership.arity != 2:
            raise ValueError("membership relation must read two tracks")

    def member(self, word: str, index: str) -> bool:
        return self.membership.accepts(convolve((word, index)))

    def min_index(self) -> str:
        return min_ll(self.index_language)

    def succ_index(self, index: str) -> str:
        return succ_ll(self.index_language, index)


def prefix_family(alphabet: str = "01") -> AutomaticFamily:
    """The family L_e = {x : e is a prefix of x} indexed by all words."""
    from .automata import universe

    letters = tuple(alphabet)
    pad = "#"
    matching, done, dead = 0, 1, 2
    trans = {}
    for a in letters:
        for b in letters:
            trans[(matching, (a, b))] = matching if a == b else dead
        trans[(matching, (a, pad))] = done
        trans[(matching, (pad, a))] = dead
        trans[(done, (a, pad))] = done
    membership = Dfa(2, [letters, letters], 3, matching, [matching, done], trans)
    return AutomaticFamily(universe(alphabet), membership)


# ---------------------------------------------------------------------------
# Bettors for regular languages and regular subsets
# ---------------------------------------------------------------------------


def regular_bettor(lang: Dfa) -> Setup:
    """Bets 3/2 of the capital on the automaton's verdict, 1/2 against."""

    def step(state: MState, dp) -> MState:
        if dp is PAUSE:
            return state
        if lang.accepts(dp.word) == bool(dp.bit):
            return MState(state.capital * THREE_HALVES, state.memory)
        return MState(state.capital * HALF, state.memory)

    return Setup("regular_bettor", step, MState(ONE, ("",)), 1,
                 frozenset({THREE_HALVES, HALF}))


def subset_bettor(r: Dfa, side: str) -> Setup:
    """Neutral outside r; on r-members bets toward membership ('inside')
    or non-membership ('outside') of the target language."""
    if side not in ("inside", "outside"):
        raise ValueError(f"side must be inside/outside, not {side!r}")
    bet_bit = 1 if side == "inside" else 0

    def step(state: MState, dp) -> MState:
        if dp is PAUSE or not r.accepts(dp.word):
            return state
        if dp.bit == bet_bit:
            return MState(state.capital * THREE_HALVES, state.memory)
        return MState(state.capital * HALF, state.memory)

    return Setup(f"subset_bettor[{side}]", step, MState(ONE, ("",)), 1,
                 frozenset({ONE, THREE_HALVES, HALF}))


# ---------------------------------------------------------------------------
# Adversarial texts and language extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StallWitness:
    """State at which no searched word keeps the capital from rising."""

    state: MState
    stage: int
    search_bound: int


def adversarial_text(setup: Setup, domain: Dfa, oracle, *, mode: str = "any",
                     horizon: int = 100, search_bound: int = 1000):
    """Greedy text that never lets the setup's capital rise.

    At each stage the first search_bound domain words (ll order, skipping
    used words in repetition-free mode) are scanned for one whose honest
    label does not increase the capital; the least such word is appended.
    If none exists the search stalls and the current state is returned as
    a StallWitness instead of a text.
    """
    if mode not in ("any", "repetition-free"):
        raise ValueError(f"unknown mode {mode!r}")
    oracle_fn = oracle.accepts if isinstance(oracle, Dfa) else oracle
    pool = enumerate_ll(domain, search_bound)
    used: set[str] = set()
    state = setup.start
    items: list[str] = []
    for stage in range(horizon):
        chosen = None
        for x in pool:
            if mode == "repetition-free" and x in used:
                continue
            nxt = setup.step(state, Labeled(x, 1 if oracle_fn(x) else 0))
            if nxt.capital <= state.capital:
                chosen = (x, nxt)
                break
        if chosen is None:
            return StallWitness(state, stage, search_bound)
        x, state = chosen
        items.append(x)
        used.add(x)
    return make_text("from_sequence", items=items)


def extract_language(setup: Setup, state: MState) -> Callable[[str], bool]:
    """Membership predicate read off a stalled state: a word belongs iff
    the 1-labeled step pays strictly more than the 0-labeled step."""

    def predicate(word: str) -> bool:
        hi = setup.step(state, Labeled(word, 1))
        lo = setup.step(state, Labeled(word, 0))
        return hi.capital > lo.capital

    return predicate


# ---------------------------------------------------------------------------
# Enumerative learners over automatic families
# ---------------------------------------------------------------------------


def family_learner(fam: AutomaticFamily) -> Setup:
    """Keeps an index as memory: right bets pay 3/2, wrong bets halve the
    capital and advance the index to its ll-successor."""
    start_index = fam.min_index()

    def step(state: MState, dp) -> MState:
        if dp is PAUSE:
            return state
        e = state.memory[0]
        if fam.member(dp.word, e) == bool(dp.bit):
            return MState(state.capital * THREE_HALVES, (e,))
        try:
            return MState(state.capital * HALF, (fam.succ_index(e),))
        except NoSuccessorError:
            raise LearnerStallError(f"index set exhausted after {e!r}") from None

    return Setup("family_learner", step, MState(ONE, (start_index,)), 1,
                 frozenset({THREE_HALVES, HALF}))


def _ll_key(word: str, letters):
    order = {ch: i for i, ch in enumerate(letters)}
    return (len(word), tuple(order[ch] for ch in word))


def variant_family_learner(fam: AutomaticFamily) -> Setup:
    """Two-index dovetail: the working index e retries every index below a
    rising ceiling d, so each index is visited arbitrarily often; that is
    what tolerates a finite symmetric difference with a family member."""
    e0 = fam.min_index()
    letters = fam.index_language.alphabets[0]

    def step(state: MState, dp) -> MState:
        if dp is PAUSE:
            return state
        e, d = state.memory
        if fam.member(dp.word, e) == bool(dp.bit):
            return MState(state.capital * THREE_HALVES, (e, d))
        if _ll_key(e, letters) < _ll_key(d, letters):
            return MState(state.capital * HALF, (fam.succ_index(e), d))
        return MState(state.capital * HALF, (e0, fam.succ_index(d)))

    return Setup("variant_family_learner", step, MState(ONE, (e0, e0)), 2,
                 frozenset({THREE_HALVES, HALF}))


def dovetail_pairs(fam: AutomaticFamily, count: int) -> list[tuple[str, str]]:
    """Index pairs the variant learner visits under persistent wrong bets."""
    e0 = fam.min_index()
    pairs = [(e0, e0)]
    e, d = e0, e0
    letters = fam.index_language.alphabets[0]
    while len(pairs) < count:
        if _ll_key(e, letters) < _ll_key(d, letters):
            e = fam.succ_index(e)
        else:
            e, d = e0, fam.succ_index(d)
        pairs.append((e, d))
    return pairs


# ---------------------------------------------------------------------------
# Machine simulation on a self-scheduled text
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TmProgram:
    """Single-work-tape deterministic machine with a 0/1 output register.

    Configurations are strings "left|state|right" (head on the first
    letter of right); one step rewrites a bounded window, which is what
    keeps the per-stage work of the simulating bettor bounded.
    """

    start: str
    accept: str
    reject: str
    blank: str
    rules: dict  # (state, symbol) -> (write, move, state); move in LRS

    def __post_init__(self):
        names = {self.start, self.accept, self.reject}
        names.update(state for state, _ in self.rules)
        names.update(rule[2] for rule in self.rules.values())
        if any("|" in name for name in names):
            raise ValueError("state names must not contain '|'")
        symbols = {self.blank}
        symbols.update(sym for _, sym in self.rules)
        symbols.update(rule[0] for rule in self.rules.values())
        if any(len(sym) != 1 or sym == "|" for sym in symbols):
            raise ValueError("tape symbols must be single letters, not '|'")
        for _, move, _ in self.rules.values():
            if move not in ("L", "R", "S"):
                raise ValueError(f"bad move {move!r}")

    def init_config(self, word: str) -> str:
        return f"|{self.start}|{word}"

    def config_output(self, config: str) -> str | None:
        state = config.split("|")[1]
        if state == self.accept:
            return "1"
        if state == self.reject:
            return "0"
        return None

    def step_config(self, config: str) -> str:
        left, state, right = config.split("|")
        head = right[0] if right else self.blank
        rule = self.rules.get((state, head))
        if rule is None:
            # undefined pairs halt rejecting
            return f"{left}|{self.reject}|{right}"
        write, move, nxt = rule
        rest = right[1:] if right else ""
        if move == "S":
            left2, right2 = left, write + rest
        elif move == "R":
            left2, right2 = left + write, rest
        else:
            if left:
                left2, right2 = left[:-1], left[-1] + write + rest
            else:
                left2, right2 = "", self.blank + write + rest
        left2 = left2.lstrip(self.blank)
        if right2:
            right2 = right2[0] + right2[1:].rstrip(self.blank)
            if right2 == self.blank:
                right2 = ""
        return f"{left2}|{nxt}|{right2}"

    def decide(self, word: str, max_steps: int = 10**6) -> int:
        config = self.init_config(word)
        for _ in range(max_steps):
            out = self.config_output(config)
            if out is not None:
                return int(out)
            config = self.step_config(config)
        raise ConstructionError(f"machine ran past {max_steps} steps on {word!r}")

    def to_json(self) -> dict:
        return {
            "start": self.start, "accept": self.accept, "reject": self.reject,
            "blank": self.blank,
            "rules": sorted(
                [state, sym, write, move, nxt]
                for (state, sym), (write, move, nxt) in self.rules.items()
            ),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TmProgram":
        rules = {
            (state, sym): (write, move, nxt)
            for state, sym, write, move, nxt in data["rules"]
        }
        return cls(data["start"], data["accept"], data["reject"],
                   data["blank"], rules)


def tm_dynamic_bettor(prog: TmProgram, domain: Dfa) -> tuple[Setup, Callable]:
    """Simulates the machine one step per stage; the paired generator
    pauses the text until an output is ready, then schedules the simulated
    input itself and the bettor stakes everything on the computed verdict.
    """
    d0 = min_ll(domain)

    def generator(state: MState):
        m_in, _, m_out = state.memory
        return m_in if m_out else PAUSE

    def step(state: MState, dp) -> MState:
        m_in, m_work, m_out = state.memory
        if dp is PAUSE:
            if m_out:
                return state  # waiting for the scheduled word
            work = prog.init_config(m_in) if m_work == "" else prog.step_config(m_work)
            out = prog.config_output(work) or ""
            return MState(state.capital, (m_in, work, out))
        if m_out and dp.word == m_in:
            memory = (succ_ll(domain, m_in), "", "")
            if dp.bit == int(m_out):
                return MState(state.capital * TWO, memory)
            return MState(ZERO, memory)
        return state  # off-schedule words are not bet on

    setup = Setup("tm_dynamic_bettor", step, MState(ONE, (d0, "", "")), 3,
                  frozenset({TWO, ZERO, ONE}))
    return setup, generator


# ---------------------------------------------------------------------------
# Diagonalization against a finite enumeration of setups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertEntry:
    word: str
    bit: int
    capital: Dyadic


@dataclass(frozen=True)
class DiagonalCertificate:
    """Membership table of the constructed language with the weighted-sum
    capital recorded at each word's position; all capitals stay <= 2."""

    entries: tuple
    weight_base: Dyadic
    enum_hash: str
    setup_descriptors: tuple | None = None
    domain_json: dict | None = None

    def oracle(self) -> Callable[[str], bool]:
        table = {entry.word: entry.bit for entry in self.entries}
        return lambda w: bool(table[w])

    def to_json_obj(self) -> dict:
        return {
            "words": [
                {"w": e.word, "bit": e.bit, "capital": str(e.capital)}
                for e in self.entries
            ],
            "weight_base": str(self.weight_base),
            "enum_hash": self.enum_hash,
            "setups": list(self.setup_descriptors) if self.setup_descriptors else None,
            "domain": self.domain_json,
        }

    @classmethod
    def from_json_obj(cls, data: dict) -> "DiagonalCertificate":
        entries = tuple(
            CertEntry(row["w"], int(row["bit"]), Dyadic.parse(row["capital"]))
            for row in data["words"]
        )
        setups = data.get("setups")
        return cls(entries, Dyadic.parse(data["weight_base"]), data["enum_hash"],
                   tuple(setups) if setups else None, data.get("domain"))


def _enum_hash(descriptors, domain_json, weight_base: Dyadic) -> str:
    payload = json.dumps(
        {"setups": descriptors, "domain": domain_json, "weight_base": str(weight_base)},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def diagonalize(enum, domain: Dfa, words: int,
                weight_base: Dyadic = Dyadic(1, 2),
                descriptors=None) -> DiagonalCertificate:
    """Fix memberships of the first `words` domain words so that the
    weighted truncated sums of the enumerated setups never rise.

    For the t-th word the decision sum uses components up to index t-1;
    fairness gives one label under which that sum cannot increase (ties
    resolve to label 0), and the freshly included component can at most
    double, so the recorded capitals telescope below 2.
    """
    setups = list(enum)
    if not setups:
        raise ValueError("need at least one setup")
    for d in setups:
        if not is_normed(d):
            raise NotNormedError(f"{d.name} is not normed")
    top = len(setups) - 1
    weights = [weight_base**i for i in range(len(setups))]
    states = [d.start for d in setups]
    entries = []
    word = None
    for t in range(1, words + 1):
        word = min_ll(domain) if t == 1 else succ_ll(domain, word)
        cutoff = min(t - 1, top)
        next_capital = {}
        for bit in (0, 1):
            total = ZERO
            for i in range(cutoff + 1):
                stepped = setups[i].step(states[i], Labeled(word, bit))
                total = total + weights[i] * stepped.capital
            next_capital[bit] = total
        bit = 0 if next_capital[0] <= next_capital[1] else 1
        states = [d.step(s, Labeled(word, bit)) for d, s in zip(setups, states)]
        include = min(t, top)
        capital = ZERO
        for i in range(include + 1):
            capital = capital + weights[i] * states[i].capital
        if capital > TWO:
            raise DiagonalBoundError(f"capital {capital} exceeds 2 at {word!r}")
        entries.append(CertEntry(word, bit, capital))
    descriptors = tuple(descriptors) if descriptors else None
    names = list(descriptors) if descriptors else [d.name for d in setups]
    domain_json = domain.to_json()
    return DiagonalCertificate(
        tuple(entries), weight_base,
        _enum_hash(names, domain_json, weight_base),
        descriptors, domain_json,
    )


def replay_certificate(cert: DiagonalCertificate, enum, domain: Dfa) -> list[str]:
    """Recompute every recorded capital through the composite weighted-sum
    setups (an independent route from the per-component sums used when the
    certificate was produced).  Returns human-readable mismatches."""
    setups = list(enum)
    top = len(setups) - 1
    problems = []
    expected_words = enumerate_ll(domain, len(cert.entries))
    if [e.word for e in cert.entries] != expected_words:
        problems.append("word column is not the domain's ll prefix")
        return problems
    oracle = cert.oracle()
    words = [e.word for e in cert.entries]
    for t, entry in enumerate(cert.entries, start=1):
        if entry.capital > TWO:
            problems.append(f"capital bound violated at {entry.word!r}")
            continue
        composite = truncated_sum(setups[:min(t, top) + 1], cert.weight_base)
        text = make_text("from_sequence", items=words[:t])
        trace = run(composite, Stream(text, oracle), t, memory_growth_limit=None)
        if trace.final != entry.capital:
            problems.append(
                f"first divergence at {entry.word!r}: replayed {trace.final}, "
                f"recorded {entry.capital}")
            break
    return problems


def build_setup(descriptor: dict) -> Setup:
    """Rebuild a setup from a serializable descriptor (certificate replay)."""
    kind = descriptor["kind"]
    if kind == "regular_bettor":
        return regular_bettor(Dfa.from_json(descriptor["dfa"]))
    if kind == "subset_bettor":
        return subset_bettor(Dfa.from_json(descriptor["dfa"]), descriptor["side"])
    raise ValueError(f"unknown setup descriptor kind {kind!r}")


# ---------------------------------------------------------------------------
# Betting on polynomial-time languages inside ordered-text gaps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hypothesis:
    """Budgeted decision procedure: decide(word) is trusted only after
    cost(word) simulation ticks have been granted."""

    name: str
    decide: Callable[[str], int]
    cost: Callable[[str], int]


@dataclass(frozen=True)
class HypothesisSpace:
    hypotheses: tuple
    cycle: bool = False

    def __len__(self):
        return len(self.hypotheses)

    def get(self, index: int) -> Hypothesis:
        return self.hypotheses[index]

    def advance(self, index: int) -> int:
        index += 1
        if index < len(self.hypotheses):
            return index
        if self.cycle:
            return 0
        raise HypothesisExhaustedError("no hypotheses left")


def anchor_word(domain: Dfa, threshold: int) -> str:
    """Least domain word of length at least the threshold."""
    return min_word_of_length_at_least(domain, threshold)


def anchor_gap_report(domain: Dfa, count: int, k: int | None = None):
    """Check the gap inequality for the first `count` anchors.

    For each threshold t the anchor has at least 2^((t-k)/k) predecessors
    where k witnesses exponential growth, so consecutive anchors are
    separated by at least 2^((t-k)/k) - t positions.  Comparisons are done
    in exact integer arithmetic: gap + t >= 2^((t-k)/k) is checked as
    (gap + t)^k >= 2^(t-k).
    """
    if k is None:
        k = exponential_growth_witness(domain)
    rows = []
    prev = anchor_word(domain, 0)
    prev_count = count_leq_ll(domain, prev)
    for t in range(1, count + 1):
        word = anchor_word(domain, t)
        here = count_leq_ll(domain, word)
        gap = here - prev_count
        if t <= k:
            ok = gap + t >= 1  # the bound 2^((t-k)/k) is at most 1
        else:
            ok = gap + t >= 0 and (gap + t) ** k >= 2 ** (t - k)
        rows.append({"t": t, "anchor": word, "predecessors": here,
                     "gap": gap, "ok": ok})
        prev_count = here
    return rows


def pclass_bettor(hyp: HypothesisSpace, domain: Dfa) -> Setup:
    """Precompute the verdicts of scheduled anchor words, then bet 3/2 on
    the computed output when the anchor arrives in the ordered text.

    Anchors stretch apart at exponential pace (the next one is the least
    word at least as long as the anchor count forces), so any polynomial
    budget eventually fits in the gap; mismatched outputs advance the
    hypothesis, so a correct-and-fast hypothesis is settled on for good.
    """
    if growth_class(domain).kind != "exponential":
        raise ConstructionError("anchored betting needs an exponential domain")
    if not len(hyp):
        raise ValueError("empty hypothesis space")
    first = anchor_word(domain, 0)

    def ticked(memory: tuple) -> tuple:
        counter, anchor, m_in, idx, phase, work, out = memory
        if out == "" and phase == "run":
            work = work + "0"
            h = hyp.get(int(idx))
            if len(work) >= h.cost(m_in):
                out = str(h.decide(m_in))
                phase = "done"
        return (counter, anchor, m_in, idx, phase, work, out)

    def step(state: MState, dp) -> MState:
        if dp is PAUSE:
            return MState(state.capital, ticked(state.memory))
        counter, anchor, m_in, idx, phase, work, out = state.memory
        if dp.word != anchor:
            return MState(state.capital, ticked(state.memory))
        # activation: settle the bet, then schedule the next anchor
        if out != "":
            if dp.bit == int(out):
                capital = state.capital * THREE_HALVES
                new_idx = idx
            else:
                capital = state.capital * HALF
                new_idx = str(hyp.advance(int(idx)))
        else:
            capital = state.capital
            new_idx = idx
        counter = counter + "0"
        threshold = max(len(counter), len(anchor) + 1)
        nxt = anchor_word(domain, threshold)
        return MState(capital, (counter, nxt, nxt, new_idx, "run", "", ""))

    start = MState(ONE, ("", first, first, "0", "run", "", ""))
    return Setup("pclass_bettor", step, start, 7,
                 frozenset({THREE_HALVES, HALF, ONE}))


# ---------------------------------------------------------------------------
# Indexing the finite subsets of a bounded-slice domain
# ---------------------------------------------------------------------------

_LETTER_POOL = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"


class SliceCodec:
    """Finite subsets of a bounded-slice domain as index words: letter n
    encodes which of the (at most c) length-n domain words are present."""

    def __init__(self, domain: Dfa, c: int):
        if c < 1:
            raise ValueError("slice bound must be at least 1")
        taken = set(domain.alphabets[0])
        letters = [ch for ch in _LETTER_POOL if ch not in taken][: 2**c]
        if len(letters) < 2**c:
            raise ValueError(f"no letter pool for 2^{c} index letters")
        self.domain = domain
        self.c = c
        self.letters = tuple(letters)

    def letter_for_bits(self, bits) -> str:
        value = sum(1 << j for j, bit in enumerate(bits) if bit)
        return self.letters[value]

    def bits_for_letter(self, letter: str) -> tuple[int, ...]:
        value = self.letters.index(letter)
        return tuple((value >> j) & 1 for j in range(self.c))

    def slice_words(self, n: int) -> list[str]:
        return words_of_length(self.domain, n)

    def encode(self, words) -> str:
        members = set(words)
        for w in members:
            if not self.domain.accepts(w):
                raise ValueError(f"{w!r} is outside the domain")
        top = max((len(w) for w in members), default=-1)
        out = []
        for n in range(top + 1):
            slice_here = self.slice_words(n)
            bits = [1 if w in members else 0 for w in slice_here]
            if len(bits) > self.c:
                raise ValueError("slice bound violated by the domain")
            bits += [0] * (self.c - len(bits))
            out.append(self.letter_for_bits(bits))
        return "".join(out)

    def decode(self, index: str) -> frozenset:
        members = set()
        for n, letter in enumerate(index):
            bits = self.bits_for_letter(letter)
            slice_here = self.slice_words(n)
            for j, bit in enumerate(bits):
                if bit:
                    if j >= len(slice_here):
                        raise ValueError(
                            f"letter {letter!r} marks a missing slice position")
                    members.add(slice_here[j])
        return frozenset(members)


def _slice_schedule(domain: Dfa):
    """Slice sizes as (values, preperiod, period); sizes are eventually
    periodic on bounded-slice domains."""
    horizon = 8 * domain.n_states + 64
    sizes = [slice_count(domain, n) for n in range(horizon + 1)]
    for period in range(1, horizon // 3 + 1):
        for pre in range(0, horizon // 3 + 1):
            if all(sizes[i] == sizes[i + period]
                   for i in range(pre, horizon + 1 - period)):
                return sizes[: pre + period], pre, period
    raise ConstructionError("slice sizes show no small eventual period")


def finite_set_indexing(domain: Dfa) -> tuple[SliceCodec, AutomaticFamily]:
    """Index every finite subset of a bounded-slice domain.

    Returns the host-side codec together with an automatic family: a
    regular index language over the 2^c tuple letters and a two-track
    membership automaton that tracks, while reading the word, how many
    same-length domain words precede it lexicographically (the count never
    needs to pass the slice bound), then looks that position up in the
    tuple letter read where the word ends.
    """
    growth = growth_class(domain)
    if growth.kind != "bounded":
        raise ConstructionError("indexing needs a bounded-slice domain")
    c = max(growth.bound, 1)
    codec = SliceCodec(domain, c)
    sizes, pre, period = _slice_schedule(domain)

    def sched_next(i: int) -> int:
        return i + 1 if i + 1 < pre + period else pre

    kz = codec.letters[0]  # the all-empty tuple letter

    def letter_ok(letter: str, sched_i: int) -> bool:
        bits = codec.bits_for_letter(letter)
        return all(bit == 0 for j, bit in enumerate(bits) if j >= sizes[sched_i])

    # ---- index language over K ----
    # a state remembers the schedule position of the next slice and whether
    # the letter just read was the all-empty tuple (indices never end on it)
    sched_states = pre + period
    start_state = 0
    dead = 1 + 2 * sched_states

    def e_state(position: int, last_nonzero: bool) -> int:
        return 1 + 2 * position + (1 if last_nonzero else 0)

    accepting = [start_state]  # the empty index encodes the empty set
    accepting += [e_state(i, True) for i in range(sched_states)]
    trans = {}
    sources = [(start_state, 0)]
    for i in range(sched_states):
        for flag in (False, True):
            sources.append((e_state(i, flag), i))
    for src, position in sources:
        for letter in codec.letters:
            if letter_ok(letter, position):
                trans[(src, (letter,))] = e_state(sched_next(position), letter != kz)
            else:
                trans[(src, (letter,))] = dead
    index_language = Dfa(1, [codec.letters], dead + 1, start_state,
                         accepting, trans)

    # ---- membership relation over (word, index) convolutions ----
    letters = domain.alphabets[0]
    order = {ch: i for i, ch in enumerate(letters)}
    coreach = frozenset(domain.coreachable_states())
    cap = c + 1

    def read_state(sched_i, q, cnts):
        return ("read", sched_i, q, cnts)

    def tail_state(sched_i, last_nz):
        return ("tail", sched_i, last_nz)

    DEAD = ("dead",)

    def advance_counts(cnts, q, a):
        new = [0] * domain.n_states
        for p, count in enumerate(cnts):
            if not count:
                continue
            for ch in letters:
                r = domain.transitions[(p, (ch,))]
                if r in coreach:
                    new[r] = min(new[r] + count, cap)
        for ch in letters[: order[a]]:
            r = domain.transitions[(q, (ch,))]
            if r in coreach:
                new[r] = min(new[r] + 1, cap)
        return tuple(new)

    def successor(state, col):
        a, kappa = col
        if state == DEAD:
            return DEAD
        if state[0] == "tail":
            _, sched_i, last_nz = state
            if a != "#":
                return DEAD
            if not letter_ok(kappa, sched_i):
                return DEAD
            return tail_state(sched_next(sched_i), kappa != kz)
        _, sched_i, q, cnts = state
        if a != "#" and kappa != "#":
            if not letter_ok(kappa, sched_i):
                return DEAD
            return read_state(sched_next(sched_i),
                              domain.transitions[(q, (a,))],
                              advance_counts(cnts, q, a))
        if a != "#" and kappa == "#":
            return DEAD  # index too short: no letter covers this word's slice
        # word ended here; kappa decides membership via the rank
        if q not in domain.accepting:
            return DEAD
        if not letter_ok(kappa, sched_i):
            return DEAD
        rank = sum(cnts[p] for p in domain.accepting)
        bits = codec.bits_for_letter(kappa)
        if rank >= c or not bits[rank]:
            return DEAD
        return tail_state(sched_next(sched_i), kappa != kz)

    start = read_state(0, domain.start, tuple([0] * domain.n_states))
    columns = [
        (a, kappa)
        for a in letters + ("#",)
        for kappa in codec.letters + ("#",)
        if not (a == "#" and kappa == "#")
    ]
    index_of = {start: 0}
    ordered = [start]
    rel_trans = {}
    i = 0
    while i < len(ordered):
        state = ordered[i]
        for col in columns:
            nxt = successor(state, col)
            if nxt not in index_of:
                index_of[nxt] = len(ordered)
                ordered.append(nxt)
            rel_trans[(i, col)] = index_of[nxt]
        i += 1
    rel_accepting = [
        i for i, state in enumerate(ordered)
        if state[0] == "tail" and state[2]
    ]
    membership = Dfa(2, [letters, codec.letters], len(ordered), 0,
                     rel_accepting, rel_trans)
    return codec, AutomaticFamily(index_language, membership)

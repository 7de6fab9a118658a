"""Betting engine: states, data points, texts, streams, runs, setup algebra.

A state couples a capital value (exact dyadic) with a tuple of memory
words.  A step function consumes one data point, either a labeled domain
word or a pause, and returns the next state.  The engine audits every
labeled transition against the fairness identity

    2 * capital(s) == capital(step(s, x, 0)) + capital(step(s, x, 1))

with exact equality, checks that pauses never move capital, that capital
stays nonnegative, and optionally that each capital jump uses one of the
step's declared constant factors.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable

from .automata import Dfa, enumerate_ll, iter_ll
from .dyadic import Dyadic, ONE, ZERO

DEFAULT_THRESHOLD = Dyadic(2**20)
DEFAULT_STEP_BUDGET = 10**5
DEFAULT_VALIDITY_BUDGET = 10**4


class EngineError(Exception):
    pass


class FairnessViolationError(EngineError):
    pass


class PausePreservationError(EngineError):
    pass


class NegativeCapitalError(EngineError):
    pass


class BetFactorError(EngineError):
    pass


class MemoryDisciplineError(EngineError):
    pass


class ValidityBudgetError(EngineError):
    pass


class TextExhaustedError(EngineError):
    pass


class NotNormedError(EngineError):
    pass


# ---------------------------------------------------------------------------
# States and data points
# ---------------------------------------------------------------------------


class _PauseType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Pause"


PAUSE = _PauseType()


@dataclass(frozen=True)
class Labeled:
    word: str
    bit: int


@dataclass(frozen=True)
class MState:
    capital: Dyadic
    memory: tuple[str, ...]


@dataclass(frozen=True)
class Setup:
    """A step function with its start state.

    bet_factors lists the constant dyadic multipliers the step may apply
    to capital; None opts out of the ratio check (composite setups whose
    capital moves are sums of component moves).
    """

    name: str
    step: Callable[[MState, object], MState]
    start: MState
    arity: int
    bet_factors: frozenset | None = None


def is_normed(setup: Setup) -> bool:
    return setup.start.capital == ONE


# ---------------------------------------------------------------------------
# Texts and streams
# ---------------------------------------------------------------------------


class Text:
    """Stage-indexed source of domain words and pauses."""

    def __init__(self, item_at: Callable[[int], object], *, kind: str = "custom",
                 budget: int = DEFAULT_VALIDITY_BUDGET):
        self._item_at = item_at
        self.kind = kind
        self.budget = budget

    def at(self, n: int):
        return self._item_at(n)


class DynamicText:
    """Marker for texts produced by a state-reading generator g."""

    def __init__(self, generator: Callable[[MState], object], *,
                 budget: int = DEFAULT_VALIDITY_BUDGET):
        self.generator = generator
        self.budget = budget
        self.kind = "dynamic"


def make_text(kind: str, domain: Dfa | None = None, *, items=None,
              generator=None, budget: int = DEFAULT_VALIDITY_BUDGET):
    """Build a text: 'll' over a domain, 'from_sequence', or 'dynamic'."""
    if kind == "ll":
        if domain is None:
            raise ValueError("ll texts need a domain automaton")
        cache: list[str] = []
        source = iter_ll(domain)

        def item_at(n: int) -> str:
            while len(cache) <= n:
                try:
                    cache.append(next(source))
                except StopIteration:
                    raise TextExhaustedError(
                        "domain exhausted by the ordered text") from None
            return cache[n]

        return Text(item_at, kind="ll", budget=budget)
    if kind == "from_sequence":
        seq = list(items or ())

        def item_at(n: int):
            if n >= len(seq):
                raise TextExhaustedError(f"sequence text has only {len(seq)} stages")
            return seq[n]

        return Text(item_at, kind="from_sequence", budget=budget)
    if kind == "dynamic":
        if generator is None:
            raise ValueError("dynamic texts need a generator")
        return DynamicText(generator, budget=budget)
    raise ValueError(f"unknown text kind {kind!r}")


class Stream:
    """A text labeled by true membership in the target language."""

    def __init__(self, text: Text, oracle):
        self.text = text
        self.oracle = oracle.accepts if isinstance(oracle, Dfa) else oracle

    def datapoint(self, n: int):
        item = self.text.at(n)
        if item is PAUSE:
            return PAUSE
        return Labeled(item, 1 if self.oracle(item) else 0)


@dataclass(frozen=True)
class TextFlags:
    repetition_free: bool
    distinct_words: int
    exhaustive_up_to: int | None = None


def classify_text_prefix(prefix, domain: Dfa | None = None) -> TextFlags:
    """Prefix-verifiable properties only: these flags can never prove the
    infinite-horizon classes, they witness them on the seen part."""
    words = [item for item in prefix if item is not PAUSE]
    seen = set(words)
    repetition_free = len(seen) == len(words)
    exhaustive_up_to = None
    if domain is not None:
        members = enumerate_ll(domain, len(seen) + 1)
        exhaustive_up_to = 0
        for w in members:
            if w not in seen:
                break
            exhaustive_up_to += 1
    return TextFlags(repetition_free, len(seen), exhaustive_up_to)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    stage: int
    word: str | None  # None for the start entry and for pauses
    label: int | None
    capital: Dyadic


class CapitalTrace:
    def __init__(self, entries):
        self.entries = list(entries)

    def capitals(self):
        return [e.capital for e in self.entries]

    @property
    def final(self) -> Dyadic:
        return self.entries[-1].capital

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def max_capital(self) -> Dyadic:
        top = self.entries[0].capital
        for e in self.entries:
            if e.capital > top:
                top = e.capital
        return top

    def to_rows(self):
        rows = []
        for e in self.entries:
            word = "#" if e.word is None and e.stage > 0 else (e.word or "")
            label = "" if e.label is None else str(e.label)
            rows.append([e.stage, word, label, e.capital.num, e.capital.exp])
        return rows

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["stage", "word", "label", "capital_num", "capital_exp"])
            writer.writerows(self.to_rows())

    def to_json_obj(self):
        return [
            {"stage": s, "word": w, "label": l, "capital_num": n, "capital_exp": e}
            for s, w, l, n, e in self.to_rows()
        ]

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def succeeded(trace: CapitalTrace, threshold: Dyadic = DEFAULT_THRESHOLD) -> bool:
    """Threshold proxy for success: some capital in the trace reaches it."""
    if threshold <= trace.entries[0].capital:
        raise ValueError("threshold must exceed the starting capital")
    return any(e.capital >= threshold for e in trace.entries)


# ---------------------------------------------------------------------------
# The run loop
# ---------------------------------------------------------------------------


def _checked_step(setup: Setup, state: MState, dp, *, audit: bool,
                  enforce_factors: bool, memory_growth_limit: int | None):
    if dp is PAUSE:
        nxt = setup.step(state, PAUSE)
        if audit and nxt.capital != state.capital:
            raise PausePreservationError(
                f"pause moved capital {state.capital} -> {nxt.capital}")
    else:
        if audit:
            lo = setup.step(state, Labeled(dp.word, 0))
            hi = setup.step(state, Labeled(dp.word, 1))
            if lo.capital + hi.capital != state.capital * 2:
                raise FairnessViolationError(
                    f"2*{state.capital} != {lo.capital} + {hi.capital} "
                    f"at word {dp.word!r}")
            nxt = hi if dp.bit else lo
        else:
            nxt = setup.step(state, dp)
        if enforce_factors and setup.bet_factors is not None:
            if not any(state.capital * f == nxt.capital for f in setup.bet_factors):
                raise BetFactorError(
                    f"capital {state.capital} -> {nxt.capital} uses no declared "
                    f"factor at word {dp.word!r}")
    if nxt.capital < ZERO:
        raise NegativeCapitalError(f"capital went negative: {nxt.capital}")
    if len(nxt.memory) != setup.arity:
        raise MemoryDisciplineError(
            f"memory arity changed {setup.arity} -> {len(nxt.memory)}")
    if memory_growth_limit is not None:
        incoming = len(dp.word) if isinstance(dp, Labeled) else 0
        allowed = memory_growth_limit + 2 * incoming
        for before, after in zip(state.memory, nxt.memory):
            if len(after) - len(before) > allowed:
                raise MemoryDisciplineError(
                    f"memory word grew by {len(after) - len(before)} in one step")
    return nxt


def run(setup: Setup, stream: Stream, steps: int = DEFAULT_STEP_BUDGET, *,
        audit: bool = True, enforce_factors: bool = True,
        memory_growth_limit: int | None = 64,
        stop_threshold: Dyadic | None = None) -> CapitalTrace:
    """Drive the setup over `steps` data points; trace has steps+1 entries."""
    state = setup.start
    entries = [TraceEntry(0, None, None, state.capital)]
    budget = stream.text.budget
    pause_streak = 0
    for n in range(steps):
        dp = stream.datapoint(n)
        if dp is PAUSE:
            pause_streak += 1
            if pause_streak >= budget:
                raise ValidityBudgetError(
                    f"{pause_streak} consecutive pauses exceed budget {budget}")
        else:
            pause_streak = 0
        state = _checked_step(setup, state, dp, audit=audit,
                              enforce_factors=enforce_factors,
                              memory_growth_limit=memory_growth_limit)
        entries.append(TraceEntry(
            n + 1,
            dp.word if isinstance(dp, Labeled) else None,
            dp.bit if isinstance(dp, Labeled) else None,
            state.capital,
        ))
        if stop_threshold is not None and state.capital >= stop_threshold:
            break
    return CapitalTrace(entries)


def run_dynamic(setup: Setup, generator, oracle, steps: int = DEFAULT_STEP_BUDGET,
                *, budget: int = DEFAULT_VALIDITY_BUDGET, audit: bool = True,
                enforce_factors: bool = True,
                memory_growth_limit: int | None = 64) -> CapitalTrace:
    """Co-evolve text and state: stage n emits generator(state_n), labels it
    with the oracle, then steps."""
    oracle_fn = oracle.accepts if isinstance(oracle, Dfa) else oracle
    state = setup.start
    entries = [TraceEntry(0, None, None, state.capital)]
    pause_streak = 0
    for n in range(steps):
        item = generator(state)
        if item is PAUSE:
            dp = PAUSE
            pause_streak += 1
            if pause_streak >= budget:
                raise ValidityBudgetError(
                    f"generator paused {pause_streak} stages in a row "
                    f"(budget {budget})")
        else:
            dp = Labeled(item, 1 if oracle_fn(item) else 0)
            pause_streak = 0
        state = _checked_step(setup, state, dp, audit=audit,
                              enforce_factors=enforce_factors,
                              memory_growth_limit=memory_growth_limit)
        entries.append(TraceEntry(
            n + 1,
            dp.word if isinstance(dp, Labeled) else None,
            dp.bit if isinstance(dp, Labeled) else None,
            state.capital,
        ))
    return CapitalTrace(entries)


# ---------------------------------------------------------------------------
# Fairness audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    state: str
    word: str | None
    detail: str

    def to_json_obj(self):
        return {"kind": self.kind, "state": self.state,
                "word": self.word, "detail": self.detail}


@dataclass
class AuditReport:
    violations: list = field(default_factory=list)
    transitions_checked: int = 0
    states_visited: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self):
        return [v.to_json_obj() for v in self.violations]


def audit_fairness(setup: Setup, probe_words, *, max_states: int = 256,
                   include_pause: bool = True) -> AuditReport:
    """Exact fairness and pause checks on states reached from the start.

    Exploration closes the start state under stepping with every probe
    word and both labels (plus pauses), breadth first, up to max_states
    distinct states.  Violations are returned as data, never raised.
    """
    probe_words = list(probe_words)
    report = AuditReport()
    seen = {setup.start}
    frontier = [setup.start]
    while frontier and len(seen) <= max_states:
        state = frontier.pop(0)
        report.states_visited += 1
        state_repr = f"({state.capital}, {state.memory!r})"
        for w in probe_words:
            lo = setup.step(state, Labeled(w, 0))
            hi = setup.step(state, Labeled(w, 1))
            report.transitions_checked += 2
            if lo.capital + hi.capital != state.capital * 2:
                report.violations.append(Violation(
                    "fairness", state_repr, w,
                    f"2*{state.capital} != {lo.capital} + {hi.capital}"))
            for nxt in (lo, hi):
                if nxt.capital < ZERO:
                    report.violations.append(Violation(
                        "negative-capital", state_repr, w, str(nxt.capital)))
                if nxt not in seen and len(seen) < max_states:
                    seen.add(nxt)
                    frontier.append(nxt)
        if include_pause:
            nxt = setup.step(state, PAUSE)
            report.transitions_checked += 1
            if nxt.capital != state.capital:
                report.violations.append(Violation(
                    "pause", state_repr, None,
                    f"{state.capital} -> {nxt.capital}"))
            elif nxt not in seen and len(seen) < max_states:
                seen.add(nxt)
                frontier.append(nxt)
    return report


# ---------------------------------------------------------------------------
# Setup algebra
# ---------------------------------------------------------------------------


def _encode_state(state: MState) -> str:
    return json.dumps({"c": str(state.capital), "m": list(state.memory)})


def _decode_state(text: str) -> MState:
    data = json.loads(text)
    return MState(Dyadic.parse(data["c"]), tuple(data["m"]))


def add_setups(d1: Setup, d2: Setup) -> Setup:
    """Sum setup: capital is the sum of component capitals, memory carries
    both component states; its trace is the pointwise sum of the traces."""

    def step(state: MState, dp) -> MState:
        p = _decode_state(state.memory[0])
        q = _decode_state(state.memory[1])
        p2 = d1.step(p, dp)
        q2 = d2.step(q, dp)
        return MState(p2.capital + q2.capital, (_encode_state(p2), _encode_state(q2)))

    start = MState(d1.start.capital + d2.start.capital,
                   (_encode_state(d1.start), _encode_state(d2.start)))
    return Setup(f"({d1.name} + {d2.name})", step, start, 2, None)


def scale_setup(c: Dyadic, d: Setup) -> Setup:
    """Scaled setup: trace is c times the component trace, pointwise."""
    if c <= ZERO:
        raise ValueError("scale factor must be positive")

    def step(state: MState, dp) -> MState:
        p = _decode_state(state.memory[0])
        p2 = d.step(p, dp)
        return MState(c * p2.capital, (_encode_state(p2),))

    start = MState(c * d.start.capital, (_encode_state(d.start),))
    return Setup(f"({c} * {d.name})", step, start, 1, None)


def truncated_sum(setups, weight_base: Dyadic = Dyadic(1, 2)) -> Setup:
    """Weighted finite sum: component i enters with weight weight_base**i.

    Every component must be normed, so the starting capital is the
    geometric partial sum of the weights.
    """
    setups = list(setups)
    if not setups:
        raise ValueError("need at least one setup")
    for d in setups:
        if not is_normed(d):
            raise NotNormedError(f"{d.name} does not start at capital 1")
    total = setups[0]
    for i, d in enumerate(setups[1:], start=1):
        total = add_setups(total, scale_setup(weight_base**i, d))
    return total

"""Batch experiment runner.

Subcommands:
    run <config>        run one experiment described by an ini-style config
    verify <cert>       replay a diagonalization certificate
    growth <dfa-file>   classify a regular domain's growth
    audit <kind> ...    fairness-audit one construction

Configs are line-oriented ``key = value`` under ``[experiment]`` and
``[inputs]`` sections.  Artifacts (trace.csv, trace.json, audit.json,
certificate.json, ...) land in --out-dir.  Identical configs and seeds
produce byte-identical artifacts.  Exit status: 0 all invariants held,
1 invariant violation, 2 unreadable config or inputs.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from .automata import Dfa, enumerate_ll, growth_class, slice_count, words_of_length
from .constructions import (
    AutomaticFamily,
    DiagonalCertificate,
    Hypothesis,
    HypothesisSpace,
    StallWitness,
    TmProgram,
    adversarial_text,
    anchor_gap_report,
    build_setup,
    diagonalize,
    extract_language,
    family_learner,
    pclass_bettor,
    regular_bettor,
    replay_certificate,
    subset_bettor,
    tm_dynamic_bettor,
    variant_family_learner,
)
from .dyadic import Dyadic, decode_tworow, encode_tworow, rel_l, rel_p, rel_z, tworow_add
from .engine import (
    DEFAULT_THRESHOLD,
    Stream,
    audit_fairness,
    make_text,
    run,
    run_dynamic,
    succeeded,
)
from .grammar import Cfg, cyk_member, infinite_regular_subset, to_cnf
from .rng import Lcg


class ConfigError(Exception):
    pass


def _load_json(path: Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad JSON in {path}: {exc}") from None


def _load_dfa(path: Path) -> Dfa:
    data = _load_json(path)
    try:
        return Dfa.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad automaton in {path}: {exc}") from None


def _write_json(path: Path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _write_outputs(out_dir: Path, trace=None, audit=None, extra=None):
    out_dir.mkdir(parents=True, exist_ok=True)
    if trace is not None:
        trace.write_csv(out_dir / "trace.csv")
        trace.write_json(out_dir / "trace.json")
    if audit is not None:
        _write_json(out_dir / "audit.json", audit.to_json_obj())
    for name, obj in (extra or {}).items():
        _write_json(out_dir / name, obj)


class Experiment:
    """Parsed config plus resolved input files."""

    def __init__(self, config_path: Path, overrides: argparse.Namespace):
        parser = configparser.ConfigParser()
        read = parser.read(config_path)
        if not read:
            raise ConfigError(f"cannot read config {config_path}")
        if "experiment" not in parser:
            raise ConfigError("config needs an [experiment] section")
        self.base = config_path.parent
        self.exp = parser["experiment"]
        self.inputs = parser["inputs"] if "inputs" in parser else {}
        self.kind = self.exp.get("kind")
        if not self.kind:
            raise ConfigError("experiment kind missing")
        self.overrides = overrides

    def _num(self, key: str, default: int) -> int:
        override = getattr(self.overrides, key.replace("-", "_"), None)
        if override is not None:
            return override
        value = int(self.exp.get(key, default))
        if value <= 0:
            raise ConfigError(f"{key} must be positive, got {value}")
        return value

    @property
    def steps(self) -> int:
        return self._num("steps", 1000)

    @property
    def horizon(self) -> int:
        return self._num("horizon", 100)

    @property
    def search_bound(self) -> int:
        return self._num("search_bound", 1000)

    @property
    def seed(self) -> int:
        return self._num("seed", 1)

    @property
    def threshold(self) -> Dyadic:
        if self.overrides.threshold is not None:
            return Dyadic.parse(self.overrides.threshold)
        return Dyadic.parse(self.exp.get("threshold", str(DEFAULT_THRESHOLD)))

    def path(self, key: str) -> Path:
        value = self.inputs.get(key)
        if value is None:
            raise ConfigError(f"[inputs] {key} is required for kind {self.kind}")
        return self.base / value

    def dfa(self, key: str) -> Dfa:
        return _load_dfa(self.path(key))

    def oracle(self):
        """Membership oracle from oracle_dfa / oracle_grammar / oracle_tm."""
        if self.inputs.get("oracle_dfa"):
            return self.dfa("oracle_dfa").accepts
        if self.inputs.get("oracle_grammar"):
            cnf = to_cnf(Cfg.from_text(self.path("oracle_grammar").read_text()))
            return lambda w: cyk_member(cnf, w)
        if self.inputs.get("oracle_tm"):
            prog = TmProgram.from_json(_load_json(self.path("oracle_tm")))
            return lambda w: bool(prog.decide(w))
        raise ConfigError("no oracle_dfa / oracle_grammar / oracle_tm input")


def _probe_words(domain: Dfa, seed: int, count: int = 64) -> list[str]:
    rng = Lcg(seed)
    alphabet = "".join(domain.alphabets[0])
    words = enumerate_ll(domain, count // 2)
    words += [rng.word(alphabet, 8) for _ in range(count - len(words))]
    return sorted(set(words))


def _audited(setup, domain, seed) -> "AuditReport":
    return audit_fairness(setup, _probe_words(domain, seed))


def _finish(out_dir, trace, audit, extra=None, *, held: bool) -> int:
    _write_outputs(out_dir, trace, audit, extra)
    if audit is not None and not audit.ok:
        print(f"fairness audit failed: {len(audit.violations)} violations",
              file=sys.stderr)
        return 1
    return 0 if held else 1


# ---------------------------------------------------------------------------
# Experiment handlers (each returns the exit status)
# ---------------------------------------------------------------------------


def _run_regular_bettor(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    language = exp.dfa("language")
    oracle_keys = ("oracle_dfa", "oracle_grammar", "oracle_tm")
    oracle = exp.oracle() if any(exp.inputs.get(k) for k in oracle_keys) else language
    setup = regular_bettor(language)
    trace = run(setup, Stream(make_text("ll", domain), oracle), exp.steps)
    audit = _audited(setup, domain, exp.seed)
    return _finish(out_dir, trace, audit, held=True)


def _run_subset_bettor(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    subset = exp.dfa("subset")
    side = exp.exp.get("side", "inside")
    setup = subset_bettor(subset, side)
    trace = run(setup, Stream(make_text("ll", domain), exp.oracle()), exp.steps)
    audit = _audited(setup, domain, exp.seed)
    return _finish(out_dir, trace, audit, held=True)


def _run_adversarial(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    bettor = regular_bettor(exp.dfa("language"))
    oracle = exp.oracle()
    outcome = adversarial_text(bettor, domain, oracle,
                               mode=exp.exp.get("mode", "any"),
                               horizon=exp.horizon,
                               search_bound=exp.search_bound)
    audit = _audited(bettor, domain, exp.seed)
    if isinstance(outcome, StallWitness):
        predicate = extract_language(bettor, outcome.state)
        sample = {w: predicate(w) for w in enumerate_ll(domain, 64)}
        extra = {"stall.json": {
            "stage": outcome.stage,
            "search_bound": outcome.search_bound,
            "capital": str(outcome.state.capital),
            "extracted_sample": {w: bool(v) for w, v in sample.items()},
        }}
        return _finish(out_dir, None, audit, extra, held=True)
    trace = run(bettor, Stream(outcome, oracle), exp.horizon)
    held = trace.max_capital() <= bettor.start.capital
    if not held:
        print("adversarial text let the capital rise", file=sys.stderr)
    return _finish(out_dir, trace, audit, held=held)


def _run_family_learner(exp: Experiment, out_dir: Path, variant: bool) -> int:
    domain = exp.dfa("domain")
    fam = AutomaticFamily(exp.dfa("index_language"), exp.dfa("membership"))
    target = exp.exp.get("target_index", fam.min_index())
    difference = {w for w in exp.exp.get("difference", "").split(",") if w}

    def oracle(w: str) -> bool:
        return fam.member(w, target) != (w in difference)

    setup = variant_family_learner(fam) if variant else family_learner(fam)
    trace = run(setup, Stream(make_text("ll", domain), oracle), exp.steps)
    audit = _audited(setup, domain, exp.seed)
    return _finish(out_dir, trace, audit, held=True)


def _run_tm_dynamic(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    prog = TmProgram.from_json(_load_json(exp.path("tm")))
    setup, generator = tm_dynamic_bettor(prog, domain)
    trace = run_dynamic(setup, generator, lambda w: bool(prog.decide(w)), exp.steps)
    audit = _audited(setup, domain, exp.seed)
    return _finish(out_dir, trace, audit, held=True)


def _diagonalize_parts(exp: Experiment):
    domain = exp.dfa("domain")
    descriptors = []
    setups = []
    for key in sorted(k for k in exp.inputs if k.startswith("setup")):
        spec = exp.inputs[key]
        parts = spec.split(":")
        if parts[0] == "regular_bettor" and len(parts) == 2:
            desc = {"kind": "regular_bettor",
                    "dfa": _load_json(exp.base / parts[1])}
        elif parts[0] == "subset_bettor" and len(parts) == 3:
            desc = {"kind": "subset_bettor", "side": parts[1],
                    "dfa": _load_json(exp.base / parts[2])}
        else:
            raise ConfigError(f"bad setup spec {spec!r}")
        descriptors.append(desc)
        setups.append(build_setup(desc))
    if not setups:
        raise ConfigError("diagonalize needs setup1, setup2, ... inputs")
    return domain, setups, descriptors


def _run_diagonalize(exp: Experiment, out_dir: Path) -> int:
    domain, setups, descriptors = _diagonalize_parts(exp)
    words = int(exp.exp.get("words", 30))
    cert = diagonalize(setups, domain, words,
                       descriptors=[json.dumps(d, sort_keys=True) for d in descriptors])
    held = True
    if exp.overrides.replay:
        problems = replay_certificate(cert, setups, domain)
        for message in problems:
            print(message, file=sys.stderr)
        held = not problems
    audits = [_audited(s, domain, exp.seed) for s in setups]
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "certificate.json", cert.to_json_obj())
    _write_json(out_dir / "audit.json",
                [v.to_json_obj() for a in audits for v in a.violations])
    if any(not a.ok for a in audits):
        return 1
    return 0 if held else 1


def _run_pclass(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    hyps = []
    for spec in exp.exp.get("hypotheses", "").split(","):
        spec = spec.strip()
        if not spec:
            continue
        if spec == "const0":
            hyps.append(Hypothesis("const0", lambda w: 0, lambda w: len(w) + 1))
        elif spec == "const1":
            hyps.append(Hypothesis("const1", lambda w: 1, lambda w: len(w) + 1))
        elif spec.startswith("dfa:"):
            dfa = _load_dfa(exp.base / spec[4:])
            hyps.append(Hypothesis(spec, lambda w, d=dfa: int(d.accepts(w)),
                                   lambda w: len(w) + 1))
        else:
            raise ConfigError(f"bad hypothesis spec {spec!r}")
    if not hyps:
        raise ConfigError("pclass needs a hypotheses list")
    space = HypothesisSpace(tuple(hyps),
                            cycle=exp.exp.getboolean("cycle", True))
    setup = pclass_bettor(space, domain)
    trace = run(setup, Stream(make_text("ll", domain), exp.oracle()), exp.steps)
    audit = _audited(setup, domain, exp.seed)
    anchors = anchor_gap_report(domain, int(exp.exp.get("anchors", 10)))
    held = all(row["ok"] for row in anchors)
    for row in anchors:
        row["predecessors"] = str(row["predecessors"])
        row["gap"] = str(row["gap"])
    return _finish(out_dir, trace, audit, {"anchors.json": anchors}, held=held)


def _run_cfl_pipeline(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    grammar = Cfg.from_text(exp.path("grammar").read_text())
    cnf = to_cnf(grammar)
    r, side = infinite_regular_subset(cnf, domain)
    setup = subset_bettor(r, side)
    oracle = lambda w: cyk_member(cnf, w)
    trace = run(setup, Stream(make_text("ll", domain), oracle), exp.steps,
                audit=False, stop_threshold=exp.threshold)
    audit = _audited(setup, domain, exp.seed)
    members = enumerate_ll(r, 100)
    expect = side == "inside"
    leaks = [w for w in members if cyk_member(cnf, w) != expect]
    held = succeeded(trace, exp.threshold) and not leaks
    if leaks:
        print(f"extracted subset leaks: {leaks[:3]}", file=sys.stderr)
    extra = {"extracted.json": {"side": side, "dfa": r.to_json(),
                                "first_members": members[:20]}}
    return _finish(out_dir, trace, audit, extra, held=held)


def _run_growth_report(exp: Experiment, out_dir: Path) -> int:
    domain = exp.dfa("domain")
    report = _growth_obj(domain)
    _write_outputs(out_dir, extra={"growth.json": report})
    return 0 if report["consistent"] else 1


def _growth_obj(domain: Dfa) -> dict:
    cls = growth_class(domain)
    counts = [slice_count(domain, n) for n in range(13)]
    brute = [len(words_of_length(domain, n)) for n in range(13)]
    consistent = counts == brute
    if cls.kind == "bounded":
        consistent = consistent and all(c <= cls.bound for c in counts)
    return {
        "class": cls.kind,
        "bound": cls.bound,
        "slice_counts": counts,
        "consistent": consistent,
    }


def _run_dyadic_audit(exp: Experiment, out_dir: Path) -> int:
    rng = Lcg(exp.seed)
    count = int(exp.exp.get("count", 10000))
    failures = []
    max_carry = 0
    for _ in range(count):
        x, y = rng.dyadic(), rng.dyadic()
        cx, cy = encode_tworow(x), encode_tworow(y)
        log: list[int] = []
        total = tworow_add(cx, cy, log)
        if log:
            max_carry = max(max_carry, max(log))
        if decode_tworow(total) != x + y:
            failures.append(f"add mismatch at {x}, {y}")
        if rel_l(cx, cy) != (x < y) or rel_z(cx) != (x.num == 0) \
                or rel_p(cx) != (x.num > 0):
            failures.append(f"relation mismatch at {x}, {y}")
    if max_carry > 1:
        failures.append(f"carry state used {max_carry} > 1 bit")
    _write_outputs(out_dir, extra={"audit.json": failures})
    for f in failures[:5]:
        print(f, file=sys.stderr)
    return 0 if not failures else 1


_HANDLERS = {
    "regular-bettor": _run_regular_bettor,
    "subset-bettor": _run_subset_bettor,
    "adversarial": _run_adversarial,
    "family-learner": lambda e, o: _run_family_learner(e, o, variant=False),
    "variant-learner": lambda e, o: _run_family_learner(e, o, variant=True),
    "tm-dynamic": _run_tm_dynamic,
    "diagonalize": _run_diagonalize,
    "pclass": _run_pclass,
    "cfl-pipeline": _run_cfl_pipeline,
    "growth-report": _run_growth_report,
    "dyadic-audit": _run_dyadic_audit,
}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_run(args) -> int:
    try:
        exp = Experiment(Path(args.config), args)
        handler = _HANDLERS.get(exp.kind)
        if handler is None:
            raise ConfigError(f"unknown experiment kind {exp.kind!r}")
        return handler(exp, Path(args.out_dir))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def cmd_verify(args) -> int:
    try:
        cert = DiagonalCertificate.from_json_obj(_load_json(Path(args.certificate)))
        if not cert.setup_descriptors or not cert.domain_json:
            raise ConfigError("certificate carries no rebuildable setups")
        setups = [build_setup(json.loads(d)) for d in cert.setup_descriptors]
        domain = Dfa.from_json(cert.domain_json)
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"bad certificate: {exc}", file=sys.stderr)
        return 2
    problems = replay_certificate(cert, setups, domain)
    for message in problems:
        print(message, file=sys.stderr)
    if not problems:
        print(f"certificate verified: {len(cert.entries)} words, "
              f"capitals replayed exactly")
    return 0 if not problems else 1


def cmd_growth(args) -> int:
    try:
        domain = _load_dfa(Path(args.dfa_file))
    except ConfigError as exc:
        print(f"cannot load automaton: {exc}", file=sys.stderr)
        return 2
    report = _growth_obj(domain)
    print(json.dumps(report, indent=1, sort_keys=True))
    return 0 if report["consistent"] else 1


def cmd_audit(args) -> int:
    try:
        dfa = _load_dfa(Path(args.dfa)) if args.dfa else None
        if args.setup_kind == "regular-bettor":
            if dfa is None:
                raise ConfigError("--dfa required")
            setup, domain = regular_bettor(dfa), dfa
        elif args.setup_kind == "subset-bettor":
            if dfa is None:
                raise ConfigError("--dfa required")
            setup, domain = subset_bettor(dfa, args.side), dfa
        else:
            raise ConfigError(f"unknown setup kind {args.setup_kind!r}")
    except ConfigError as exc:
        print(f"audit setup error: {exc}", file=sys.stderr)
        return 2
    report = audit_fairness(setup, _probe_words(domain, args.seed or 1))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "audit.json", report.to_json_obj())
    print(f"checked {report.transitions_checked} transitions, "
          f"{len(report.violations)} violations")
    return 0 if report.ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="langmart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--steps", type=int)
    p_run.add_argument("--threshold", help='capital threshold, "num/2^exp"')
    p_run.add_argument("--horizon", type=int)
    p_run.add_argument("--search-bound", type=int, dest="search_bound")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out-dir", default=".", dest="out_dir")
    p_run.add_argument("--replay", action="store_true")
    p_run.set_defaults(fn=cmd_run)

    p_verify = sub.add_parser("verify", help="replay a certificate")
    p_verify.add_argument("certificate")
    p_verify.set_defaults(fn=cmd_verify)

    p_growth = sub.add_parser("growth", help="classify a domain's growth")
    p_growth.add_argument("dfa_file")
    p_growth.set_defaults(fn=cmd_growth)

    p_audit = sub.add_parser("audit", help="fairness-audit a construction")
    p_audit.add_argument("setup_kind")
    p_audit.add_argument("--dfa")
    p_audit.add_argument("--side", default="inside")
    p_audit.add_argument("--seed", type=int)
    p_audit.add_argument("--out-dir", default=".", dest="out_dir")
    p_audit.set_defaults(fn=cmd_audit)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

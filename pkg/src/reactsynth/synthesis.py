"""Emptiness of the product tree automaton and minimal-program extraction.

The automaton reads trees over a ranked alphabet whose letters are the
statement constructors; conditions and assigned expressions enter only
through their Boolean function. Saturation discovers reachable states in
rounds of increasing tree height, so the first witness recorded for a state
has minimal height. Among witnesses of equal height the smallest is kept,
comparing statement count first and then a fixed term order.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ResourceLimit
from .nba import SpecAutomaton
from .programs import (
    Assign, Expr, If, Input, Output, Prog, Seq, VariableSet, While,
    all_functions, canonical_expr, sem_expr,
)
from .signatures import (
    SEQ, AssignSym, DtaState, Engine, IfSym, InputSym, OutputSym, SeqSym,
    WhileSym, atom_program, engine_for,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 20_000
DEFAULT_MAX_SLICES = 100_000
PROBE_WORK = 100_000  # transitions tried by height rounds before deciding emptiness


def _table_index(f: frozenset) -> int:
    return sum(1 << s for s in f)


@dataclass(frozen=True)
class ConstructorAlphabet:
    atoms: tuple
    conditions: tuple  # Boolean functions usable in if / while

    @classmethod
    def build(cls, vars: VariableSet, exprs: Optional[Sequence[Expr]] = None):
        if exprs is None:
            functions = all_functions(vars)
        else:
            functions = sorted({sem_expr(e, vars) for e in exprs}, key=_table_index)
        atoms = []
        for name in vars.names:
            atoms += [InputSym(name), OutputSym(name)]
            atoms += [AssignSym(name, f) for f in functions]
        return cls(tuple(atoms), tuple(functions))

    @property
    def combiners(self):
        return (
            [SEQ]
            + [IfSym(f) for f in self.conditions]
            + [WhileSym(f) for f in self.conditions]
        )


def _rank(sym, vars):
    if isinstance(sym, InputSym):
        return (0, vars.index(sym.var), 0, 0)
    if isinstance(sym, OutputSym):
        return (0, vars.index(sym.var), 1, 0)
    if isinstance(sym, AssignSym):
        return (0, vars.index(sym.var), 2, _table_index(sym.rhs))
    if isinstance(sym, SeqSym):
        return (1, 0)
    if isinstance(sym, IfSym):
        return (2, _table_index(sym.cond))
    return (3, _table_index(sym.cond))


@dataclass(frozen=True)
class Witness:
    height: int
    size: int
    sym: object
    kids: tuple  # child DtaStates
    key: tuple  # total order used for tie-breaking


@dataclass
class StateTable:
    """Reachable product states, each with its recorded minimal witness."""

    engine: Optional[Engine] = None
    witnesses: dict = field(default_factory=dict)
    rounds: int = 0
    fixpoint: bool = False

    def __len__(self):
        return len(self.witnesses)

    def __contains__(self, st):
        return st in self.witnesses

    def states(self):
        return sorted(self.witnesses, key=lambda st: self.witnesses[st].key)

    def accepted(self):
        """Accepting states in minimal-witness order."""
        return [st for st in self.states() if self.engine.verdict(st).accepted]

    def program(self, st: DtaState) -> Prog:
        """Rebuild the witness program of ``st``."""
        w = self.witnesses[st]
        vars = self.engine.vars
        kids = [self.program(c) for c in w.kids]
        sym = w.sym
        if not kids:
            return atom_program(sym, vars)
        if isinstance(sym, SeqSym):
            return Seq(*kids)
        if isinstance(sym, IfSym):
            return If(canonical_expr(sym.cond, vars), *kids)
        return While(canonical_expr(sym.cond, vars), *kids)


def _offer(best, st, witness):
    current = best.get(st)
    if current is None or witness.key < current.key:
        best[st] = witness


def _rounds(engine, alphabet, max_height, max_states, max_work=None):
    """Yield ``(height, table, new_states)`` after each saturation round.

    ``max_work`` bounds the number of transitions computed in total.
    """
    vars = engine.vars
    work = [0]
    table = StateTable(engine)
    best = {}
    for sym in alphabet.atoms:
        _offer(best, engine.combine(sym, ()), Witness(1, 1, sym, (), (1, 1, _rank(sym, vars), ())))
    height = 1
    while True:
        table.witnesses.update(best)
        table.rounds = height
        if len(table) > max_states:
            raise ResourceLimit(f"more than {max_states} states after height {height}")
        log.debug("height %d: %d new, %d total", height, len(best), len(table))
        fresh = sorted(best, key=lambda st: best[st].key)
        if not fresh:
            table.fixpoint = True
        yield height, table, fresh
        if table.fixpoint or (max_height is not None and height >= max_height):
            return
        height += 1
        known = table.states()
        fresh_set = set(fresh)
        best = {}
        w = table.witnesses

        def consider(sym, kids):
            work[0] += 1
            if max_work is not None and work[0] > max_work:
                raise ResourceLimit(f"more than {max_work} transitions computed")
            st = engine.combine(sym, kids)
            if st in w:
                return
            if st not in best and len(w) + len(best) >= max_states:
                raise ResourceLimit(f"more than {max_states} states at height {height}")
            ws = [w[c] for c in kids]
            size = 1 + sum(x.size for x in ws)
            key = (height, size, _rank(sym, vars), tuple(x.key for x in ws))
            _offer(best, st, Witness(height, size, sym, kids, key))

        for body in fresh:
            for f in alphabet.conditions:
                consider(WhileSym(f), (body,))
        binary = [SEQ] + [IfSym(f) for f in alphabet.conditions]
        for a in known:
            a_fresh = a in fresh_set
            for b in (known if a_fresh else fresh):
                for sym in binary:
                    consider(sym, (a, b))


@dataclass(frozen=True)
class SynthesisOptions:
    max_height: Optional[int] = None  # None: run to fixpoint
    exprs: Optional[tuple] = None  # None: one expression per Boolean function
    max_states: int = DEFAULT_MAX_STATES
    max_slices: int = DEFAULT_MAX_SLICES
    verify: bool = False


def saturate(vars: VariableSet, nba: SpecAutomaton, k: int, opts: SynthesisOptions = SynthesisOptions()) -> StateTable:
    engine = engine_for(vars, nba, k)
    alphabet = ConstructorAlphabet.build(vars, opts.exprs)
    table = None
    for _, table, _ in _rounds(engine, alphabet, opts.max_height, opts.max_states):
        pass
    return table


@dataclass(frozen=True)
class Unrealizable:
    """No accepted program exists (``up_to_height`` None) or none up to that height."""

    up_to_height: Optional[int] = None

    def __str__(self):
        if self.up_to_height is None:
            return "UNREALIZABLE"
        return f"UNREALIZABLE up to height {self.up_to_height}"


def synthesize(vars: VariableSet, nba: SpecAutomaton, k: int, opts: SynthesisOptions = SynthesisOptions()):
    """A height-minimal accepted program, or :class:`Unrealizable`.

    Height rounds stop after the first round that reaches an accepting state
    and return its smallest witness. With ``max_height`` only they run, and
    failure is reported as unrealizable up to that height unless they
    reached a fixpoint.

    Without a height bound, a short run of height rounds settles small
    instances. Otherwise per-block slice saturation decides emptiness
    exactly, and when a program exists the height rounds are rerun with the
    full ``max_states`` budget. Should that budget run out, the slice
    witness is returned; it is accepted but not necessarily height-minimal.
    """
    engine = engine_for(vars, nba, k)
    alphabet = ConstructorAlphabet.build(vars, opts.exprs)
    if opts.max_height is not None:
        return _by_height(engine, alphabet, nba, k, vars, opts, None)
    try:
        return _by_height(engine, alphabet, nba, k, vars, opts, PROBE_WORK)
    except ResourceLimit:
        log.info("no answer within %d transitions, deciding emptiness by slices", PROBE_WORK)
    from .slices import SliceSaturation

    sat = SliceSaturation(engine, alphabet, opts.max_slices).run(stop_on_accept=True)
    hit = sat.accepted()
    if hit is None:
        return Unrealizable()
    try:
        return _by_height(engine, alphabet, nba, k, vars, opts, None)
    except ResourceLimit:
        log.warning("height rounds exceed %d states; returning a witness that may not be height-minimal", opts.max_states)
        return _checked(sat.program(sat.initial_block, hit), nba, k, vars, opts)


def _by_height(engine, alphabet, nba, k, vars, opts, max_work):
    for height, table, fresh in _rounds(engine, alphabet, opts.max_height, opts.max_states, max_work):
        hits = [st for st in fresh if engine.verdict(st).accepted]
        if hits:
            return _checked(table.program(hits[0]), nba, k, vars, opts)
        last = height
        exact = table.fixpoint
    return Unrealizable(None if exact else last)


def _checked(program, nba, k, vars, opts):
    if opts.verify:
        from .ioi import oracle_verdict

        checked = oracle_verdict(program, nba, k, vars)
        if checked != (True, True, True):
            raise AssertionError(f"synthesized program fails the oracle: {checked}")
    return program


@dataclass(frozen=True)
class Diagnostics:
    states: int
    rounds: int
    fixpoint: bool
    heights: tuple  # ((height, count), ...)
    verdicts: tuple  # (("sat=1 reactive=0 delay=1", count), ...)

    def __str__(self):
        lines = [f"states {self.states}", f"rounds {self.rounds}", f"fixpoint {int(self.fixpoint)}"]
        lines += [f"height {h}: {n}" for h, n in self.heights]
        lines += [f"verdict {v}: {n}" for v, n in self.verdicts]
        return "\n".join(lines)


def diagnostics(table: StateTable) -> Diagnostics:
    heights = Counter(w.height for w in table.witnesses.values())
    verdicts = Counter(str(table.engine.verdict(st)) for st in table.witnesses) if table.witnesses else Counter()
    return Diagnostics(
        len(table), table.rounds, table.fixpoint,
        tuple(sorted(heights.items())), tuple(sorted(verdicts.items())),
    )

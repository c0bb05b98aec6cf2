"""Nondeterministic Büchi automata over input/output bit pairs.

The automaton handed to the tool recognizes the *complement* of the
specification: a program is correct when none of its behaviours is accepted.

Text format, one item per line, ``#`` starts a comment::

    states: q0 q1
    initial: q0
    accepting: q1
    trans: q0 (0,1) q1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import MultipleInitial, ParseError, UndeclaredState, UnknownState

PairSymbol = tuple[int, int]  # (input bit, output bit)
SYMBOLS: tuple[PairSymbol, ...] = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class SpecAutomaton:
    states: tuple[str, ...]
    initial: str
    finals: frozenset[str]
    transitions: frozenset[tuple[str, PairSymbol, str]]
    _succ: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state names")
        if self.initial not in known:
            raise UndeclaredState(self.initial)
        for s in self.finals:
            if s not in known:
                raise UndeclaredState(s)
        succ = {(s, sym): set() for s in self.states for sym in SYMBOLS}
        for src, sym, dst in self.transitions:
            if src not in known:
                raise UndeclaredState(src)
            if dst not in known:
                raise UndeclaredState(dst)
            if sym not in SYMBOLS:
                raise ValueError(f"bad symbol {sym!r}")
            succ[src, sym].add(dst)
        object.__setattr__(
            self, "_succ", {key: frozenset(v) for key, v in succ.items()}
        )

    def successors(self, s: str, sym: PairSymbol) -> frozenset[str]:
        try:
            return self._succ[s, tuple(sym)]
        except KeyError:
            raise UnknownState(s) from None

    def sorted_transitions(self):
        order = {s: i for i, s in enumerate(self.states)}
        return sorted(
            self.transitions, key=lambda t: (order[t[0]], t[1], order[t[2]])
        )


def nba_successors(a: SpecAutomaton, s: str, sym: PairSymbol) -> frozenset[str]:
    return a.successors(s, sym)


_NAME = re.compile(r"[A-Za-z0-9_.\-]+")
_TRANS = re.compile(
    r"(?P<src>[A-Za-z0-9_.\-]+)\s*\(\s*(?P<a>[01])\s*,\s*(?P<b>[01])\s*\)\s*"
    r"(?P<dst>[A-Za-z0-9_.\-]+)"
)


def parse_nba(text: str) -> SpecAutomaton:
    states = None
    initial = None
    finals = []
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if not sep:
            raise ParseError(
                f"missing ':' in {line!r}", lineno, 1,
                ("'states:'", "'initial:'", "'accepting:'", "'trans:'"),
            )
        if key == "states":
            if states is not None:
                raise ParseError("states declared twice", lineno, 1)
            states = rest.split()
            for name in states:
                if not _NAME.fullmatch(name):
                    raise ParseError(f"bad state name {name!r}", lineno, 1)
            if len(set(states)) != len(states):
                raise ParseError("duplicate state names", lineno, 1)
            continue
        if states is None:
            raise ParseError("'states:' must come first", lineno, 1, ("'states:'",))
        if key == "initial":
            names = rest.split()
            if initial is not None or len(names) != 1:
                raise MultipleInitial(
                    "exactly one initial state is required", lineno, 1
                )
            initial = _declared(names[0], states, lineno)
        elif key == "accepting":
            finals.extend(_declared(n, states, lineno) for n in rest.split())
        elif key == "trans":
            m = _TRANS.fullmatch(rest)
            if m is None:
                raise ParseError(
                    f"bad transition {rest!r}", lineno, 1, ("'src (a,b) dst'",)
                )
            transitions.append((
                _declared(m["src"], states, lineno),
                (int(m["a"]), int(m["b"])),
                _declared(m["dst"], states, lineno),
            ))
        else:
            raise ParseError(
                f"unknown key {key!r}", lineno, 1,
                ("'states:'", "'initial:'", "'accepting:'", "'trans:'"),
            )
    if states is None:
        raise ParseError("no 'states:' line", None, None, ("'states:'",))
    if initial is None:
        raise MultipleInitial("no initial state given")
    return SpecAutomaton(tuple(states), initial, frozenset(finals), frozenset(transitions))


def _declared(name, states, lineno):
    if name not in states:
        raise UndeclaredState(name, lineno)
    return name


def serialize_nba(a: SpecAutomaton) -> str:
    lines = [
        "states: " + " ".join(a.states),
        "initial: " + a.initial,
        " ".join(["accepting:"] + [s for s in a.states if s in a.finals]),
    ]
    for src, (x, y), dst in a.sorted_transitions():
        lines.append(f"trans: {src} ({x},{y}) {dst}")
    return "\n".join(lines) + "\n"

"""Bottom-up signatures of program trees.

Three deterministic bottom-up tree automata are run side by side over a
program: one computes co-execution signatures (how the program's complete
and infinite computations drive the Büchi automaton for the complemented
specification), one computes reactivity signatures and one delay signatures.
A node's state depends only on its constructor, the denotation of its
condition and the states of its children, so evaluation is a fold.

Internally every relation is a *flagged relation* over a finite indexed
carrier, stored as ``rel[f][x]`` = bitmask of all ``y`` with ``(x, f, y)``.
Flags are small ints combined with bitwise or, which is ``max`` on one bit
and componentwise ``max`` on the (has-input, has-output) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import ArityMismatch
from .ioi import format_overhang
from .nba import SpecAutomaton
from .programs import (
    Assign, If, Input, Output, Prog, Seq, VariableSet, While, children,
    canonical_expr, program_variables, sem_expr,
)

# -- mask relations ----------------------------------------------------------


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _compose(r1, r2):
    nflags, n = len(r1), len(r1[0])
    out = [[0] * n for _ in range(nflags)]
    for f1 in range(nflags):
        row1 = r1[f1]
        for x in range(n):
            m = row1[x]
            if not m:
                continue
            for y in _bits(m):
                for f2 in range(nflags):
                    t = r2[f2][y]
                    if t:
                        out[f1 | f2][x] |= t
    return tuple(map(tuple, out))


def _restrict_source(r, mask):
    return tuple(
        tuple(t if (mask >> x) & 1 else 0 for x, t in enumerate(row)) for row in r
    )


def _restrict_target(r, mask):
    return tuple(tuple(t & mask for t in row) for row in r)


def _preimage(r, mask):
    hit = 0
    for row in r:
        for x, t in enumerate(row):
            if t & mask:
                hit |= 1 << x
    return hit


def _select(r_then, r_else, mask):
    return tuple(
        tuple(a if (mask >> x) & 1 else b for x, (a, b) in enumerate(zip(ra, rb)))
        for ra, rb in zip(r_then, r_else)
    )


def _closure(c):
    """Reflexive-transitive closure with flag accumulation, to fixpoint."""
    nflags, n = len(c), len(c[0])
    out = [[0] * n for _ in range(nflags)]
    for x in range(n):
        reach = [0] * nflags
        reach[0] = 1 << x
        frontier = list(reach)
        while any(frontier):
            new = [0] * nflags
            for f in range(nflags):
                for y in _bits(frontier[f]):
                    for g in range(nflags):
                        t = c[g][y]
                        if t:
                            new[f | g] |= t
            for h in range(nflags):
                new[h] &= ~reach[h]
                reach[h] |= new[h]
            frontier = new
        for h in range(nflags):
            out[h][x] = reach[h]
    return tuple(map(tuple, out))


def _cycle_nodes(c):
    """Carrier elements lying on a cycle of length >= 1 of ``c`` (flags ignored)."""
    n = len(c[0])
    step = [0] * n
    for row in c:
        for x, t in enumerate(row):
            step[x] |= t
    reach = _closure((tuple(step),))[0]
    found = 0
    for x in range(n):
        for y in _bits(step[x]):
            if (reach[y] >> x) & 1:
                found |= 1 << x
                break
    return found


def _flag_code(flag):
    if isinstance(flag, tuple):
        return sum(int(bool(b)) << i for i, b in enumerate(flag))
    return int(bool(flag))


def closure(tuples, carrier, zero=0):
    """Smallest flagged relation containing ``(x, zero, x)`` for every carrier
    element and closed under extension by a step of ``tuples``.

    Flags are bits (``0``/``1``) or tuples of bits; joining two flags takes the
    maximum componentwise. Returns a frozenset of ``(x, flag, y)``.
    """
    carrier = list(carrier)
    index = {x: i for i, x in enumerate(carrier)}
    width = len(zero) if isinstance(zero, tuple) else 1
    nflags = 1 << width
    rows = [[0] * len(carrier) for _ in range(nflags)]
    for x, f, y in tuples:
        rows[_flag_code(f)][index[x]] |= 1 << index[y]
    result = _closure(tuple(map(tuple, rows)))

    def decode(code):
        if isinstance(zero, tuple):
            return tuple((code >> i) & 1 for i in range(width))
        return code

    return frozenset(
        (carrier[x], decode(f), carrier[y])
        for f, row in enumerate(result)
        for x, m in enumerate(row)
        for y in _bits(m)
    )


# -- alphabet ----------------------------------------------------------------


@dataclass(frozen=True)
class InputSym:
    var: str


@dataclass(frozen=True)
class OutputSym:
    var: str


@dataclass(frozen=True)
class AssignSym:
    var: str
    rhs: frozenset  # denotation of the assigned expression


@dataclass(frozen=True)
class SeqSym:
    pass


@dataclass(frozen=True)
class IfSym:
    cond: frozenset


@dataclass(frozen=True)
class WhileSym:
    cond: frozenset


SEQ = SeqSym()
ATOM_SYMBOLS = (InputSym, OutputSym, AssignSym)


def arity(sym) -> int:
    if isinstance(sym, ATOM_SYMBOLS):
        return 0
    if isinstance(sym, (SeqSym, IfSym)):
        return 2
    if isinstance(sym, WhileSym):
        return 1
    raise TypeError(f"not a constructor symbol: {sym!r}")


def symbol_of(p: Prog, vars: VariableSet):
    """The ranked-alphabet letter labelling the root of ``p``."""
    if isinstance(p, Input):
        return InputSym(p.target)
    if isinstance(p, Output):
        return OutputSym(p.source)
    if isinstance(p, Assign):
        return AssignSym(p.target, sem_expr(p.rhs, vars))
    if isinstance(p, Seq):
        return SEQ
    if isinstance(p, If):
        return IfSym(sem_expr(p.cond, vars))
    if isinstance(p, While):
        return WhileSym(sem_expr(p.cond, vars))
    raise TypeError(f"not a program: {p!r}")


def atom_program(sym, vars: VariableSet) -> Prog:
    """The canonical leaf statement for an atom letter."""
    if isinstance(sym, InputSym):
        return Input(sym.var)
    if isinstance(sym, OutputSym):
        return Output(sym.var)
    if isinstance(sym, AssignSym):
        return Assign(sym.var, canonical_expr(sym.rhs, vars))
    raise TypeError(f"not an atom letter: {sym!r}")


# -- signature values --------------------------------------------------------


@dataclass(frozen=True)
class CoConfig:
    sigma: int
    state: str
    u: str = ""
    v: str = ""


@dataclass(frozen=True)
class CoSig:
    fin: tuple  # fin[f][gamma] -> mask of gamma'
    inf: int


@dataclass(frozen=True)
class ReactSig:
    fin: tuple  # fin[flags][sigma] -> mask of sigma'; flags bit0 = input, bit1 = output
    bad_inf: int


@dataclass(frozen=True)
class DelaySig:
    fin: tuple  # fin[0][(sigma, d)] -> mask of (sigma', d')
    viol: int


@dataclass(frozen=True)
class DtaState:
    co: CoSig
    react: ReactSig
    delay: DelaySig


@dataclass(frozen=True)
class Verdict:
    sat: bool
    reactive: bool
    delay_ok: bool

    def __iter__(self):
        return iter((self.sat, self.reactive, self.delay_ok))

    @property
    def accepted(self):
        return self.sat and self.reactive and self.delay_ok

    def __str__(self):
        return f"sat={int(self.sat)} reactive={int(self.reactive)} delay={int(self.delay_ok)}"


# -- the engine --------------------------------------------------------------


class Engine:
    """Signature algebra for fixed variables, automaton and delay bound.

    Results of every constructor application are memoized per component, so
    evaluating many programs that share subtrees or states is cheap.
    """

    def __init__(self, vars: VariableSet, nba: SpecAutomaton, k: int):
        if k < 0:
            raise ValueError("delay bound must be nonnegative")
        self.vars, self.nba, self.k = vars, nba, k
        nval = vars.universe_size
        self.nval = nval
        words = [""]
        for length in range(1, k + 1):
            words += [format(i, f"0{length}b") for i in range(1 << length)]
        self.overhangs = [("", "")] + [(w, "") for w in words[1:]] + [("", w) for w in words[1:]]
        self.cocfgs = [
            CoConfig(sigma, s, u, v)
            for sigma in range(nval)
            for s in nba.states
            for u, v in self.overhangs
        ]
        self.co_index = {c: i for i, c in enumerate(self.cocfgs)}
        self.width = 2 * k + 1
        self._masks = {}
        self._memo = {}
        self._eval_memo = {}
        self.initial_cocfg = self.co_index[CoConfig(0, nba.initial)]

    # carriers

    def delay_index(self, sigma, d):
        return sigma * self.width + d + self.k

    def delay_config(self, i):
        sigma, r = divmod(i, self.width)
        return sigma, r - self.k

    def _sigma_masks(self, f):
        key = frozenset(f)
        if key not in self._masks:
            co = val = dl = 0
            for i, c in enumerate(self.cocfgs):
                if c.sigma in key:
                    co |= 1 << i
            for s in key:
                val |= 1 << s
                for d in range(-self.k, self.k + 1):
                    dl |= 1 << self.delay_index(s, d)
            self._masks[key] = (co, val, dl)
        return self._masks[key]

    def _complement(self, mask, n):
        return ((1 << n) - 1) & ~mask

    # atoms

    def _atom_co(self, sym):
        n, vars, nba, k = len(self.cocfgs), self.vars, self.nba, self.k
        rows = [[0] * n, [0] * n]
        for i, c in enumerate(self.cocfgs):
            targets = []
            if isinstance(sym, InputSym):
                for a in (0, 1):
                    sigma2 = vars.assign(c.sigma, sym.var, a)
                    if c.v:
                        for t in nba.successors(c.state, (a, int(c.v[0]))):
                            targets.append((t in nba.finals, CoConfig(sigma2, t, "", c.v[1:])))
                    elif len(c.u) < k:
                        targets.append((0, CoConfig(sigma2, c.state, c.u + str(a), "")))
            elif isinstance(sym, OutputSym):
                b = vars.get(c.sigma, sym.var)
                if c.u:
                    for t in nba.successors(c.state, (int(c.u[0]), b)):
                        targets.append((t in nba.finals, CoConfig(c.sigma, t, c.u[1:], "")))
                elif len(c.v) < k:
                    targets.append((0, CoConfig(c.sigma, c.state, "", c.v + str(b))))
            else:
                value = int(c.sigma in sym.rhs)
                targets.append((0, CoConfig(vars.assign(c.sigma, sym.var, value), c.state, c.u, c.v)))
            for f, target in targets:
                rows[int(f)][i] |= 1 << self.co_index[target]
        return CoSig(tuple(map(tuple, rows)), 0)

    def _atom_react(self, sym):
        vars, n = self.vars, self.nval
        rows = [[0] * n for _ in range(4)]
        for s in range(n):
            if isinstance(sym, InputSym):
                for a in (0, 1):
                    rows[1][s] |= 1 << vars.assign(s, sym.var, a)
            elif isinstance(sym, OutputSym):
                rows[2][s] |= 1 << s
            else:
                rows[0][s] |= 1 << vars.assign(s, sym.var, int(s in sym.rhs))
        return ReactSig(tuple(map(tuple, rows)), 0)

    def _atom_delay(self, sym):
        vars, k = self.vars, self.k
        row = [0] * (self.nval * self.width)
        viol = 0
        for s in range(self.nval):
            for d in range(-k, k + 1):
                i = self.delay_index(s, d)
                if isinstance(sym, InputSym):
                    if d + 1 <= k:
                        for a in (0, 1):
                            row[i] |= 1 << self.delay_index(vars.assign(s, sym.var, a), d + 1)
                    else:
                        viol |= 1 << i
                elif isinstance(sym, OutputSym):
                    if d - 1 >= -k:
                        row[i] |= 1 << self.delay_index(s, d - 1)
                    else:
                        viol |= 1 << i
                else:
                    s2 = vars.assign(s, sym.var, int(s in sym.rhs))
                    row[i] |= 1 << self.delay_index(s2, d)
        return DelaySig((tuple(row),), viol)

    # constructors, one per component

    def cosig_of(self, sym, kids) -> CoSig:
        return self._apply("co", sym, kids)

    def react_sig_of(self, sym, kids) -> ReactSig:
        return self._apply("react", sym, kids)

    def delay_sig_of(self, sym, kids) -> DelaySig:
        return self._apply("delay", sym, kids)

    def _apply(self, component, sym, kids):
        kids = tuple(kids)
        if len(kids) != arity(sym):
            raise ArityMismatch(f"{type(sym).__name__} takes {arity(sym)} children, got {len(kids)}")
        if not isinstance(sym, ATOM_SYMBOLS):
            return getattr(self, "_" + component + "_" + type(sym).__name__[:-3].lower())(sym, *kids)
        # only atoms are cached: saturation combines far too many tuples to keep
        key = (component, sym)
        hit = self._memo.get(key)
        if hit is None:
            hit = {"co": self._atom_co, "react": self._atom_react, "delay": self._atom_delay}[component](sym)
            self._memo[key] = hit
        return hit

    def _co_seq(self, sym, a, b):
        return CoSig(_compose(a.fin, b.fin), a.inf | _preimage(a.fin, b.inf))

    def _co_if(self, sym, a, b):
        m = self._sigma_masks(sym.cond)[0]
        return CoSig(_select(a.fin, b.fin, m), (a.inf & m) | (b.inf & ~m))

    def _co_while(self, sym, body):
        m = self._sigma_masks(sym.cond)[0]
        star = _closure(_restrict_source(body.fin, m))
        fin = _restrict_target(star, self._complement(m, len(self.cocfgs)))
        # (gamma', 1, gamma') in star: an accepting cycle through whole iterations
        cyclic = 0
        for x, t in enumerate(star[1]):
            if (t >> x) & 1:
                cyclic |= 1 << x
        return CoSig(fin, _preimage(star, (body.inf | cyclic) & m))

    def _react_seq(self, sym, a, b):
        return ReactSig(_compose(a.fin, b.fin), a.bad_inf | _preimage(a.fin, b.bad_inf))

    def _react_if(self, sym, a, b):
        m = self._sigma_masks(sym.cond)[1]
        return ReactSig(_select(a.fin, b.fin, m), (a.bad_inf & m) | (b.bad_inf & ~m))

    def _react_while(self, sym, body):
        m = self._sigma_masks(sym.cond)[1]
        steps = _restrict_source(body.fin, m)
        star = _closure(steps)
        fin = _restrict_target(star, self._complement(m, self.nval))
        input_free = _cycle_nodes((steps[0], steps[2]))
        output_free = _cycle_nodes((steps[0], steps[1]))
        bad = _preimage(star, (body.bad_inf & m) | input_free | output_free)
        return ReactSig(fin, bad)

    def _delay_seq(self, sym, a, b):
        return DelaySig(_compose(a.fin, b.fin), a.viol | _preimage(a.fin, b.viol))

    def _delay_if(self, sym, a, b):
        m = self._sigma_masks(sym.cond)[2]
        return DelaySig(_select(a.fin, b.fin, m), (a.viol & m) | (b.viol & ~m))

    def _delay_while(self, sym, body):
        m = self._sigma_masks(sym.cond)[2]
        star = _closure(_restrict_source(body.fin, m))
        fin = _restrict_target(star, self._complement(m, self.nval * self.width))
        return DelaySig(fin, _preimage(star, body.viol & m))

    # whole states

    def combine(self, sym, kids) -> DtaState:
        """One transition of the product automaton."""
        kids = tuple(kids)
        return DtaState(
            self.cosig_of(sym, [c.co for c in kids]),
            self.react_sig_of(sym, [c.react for c in kids]),
            self.delay_sig_of(sym, [c.delay for c in kids]),
        )

    def eval(self, p: Prog) -> DtaState:
        hit = self._eval_memo.get(p)
        if hit is None:
            hit = self.combine(symbol_of(p, self.vars), [self.eval(c) for c in children(p)])
            self._eval_memo[p] = hit
        return hit

    def verdict(self, st: DtaState) -> Verdict:
        sat = not (st.co.inf >> self.initial_cocfg) & 1
        reactive = not any(row[0] for row in st.react.fin) and not st.react.bad_inf & 1
        delay_ok = not (st.delay.viol >> self.delay_index(0, 0)) & 1
        return Verdict(sat, reactive, delay_ok)

    # decoding

    def fin_tuples(self, co: CoSig):
        """``cosig_fin`` as a set of ``(CoConfig, f, CoConfig)``."""
        return frozenset(
            (self.cocfgs[x], f, self.cocfgs[y])
            for f, row in enumerate(co.fin)
            for x, m in enumerate(row)
            for y in _bits(m)
        )

    def inf_set(self, co: CoSig):
        return frozenset(self.cocfgs[x] for x in _bits(co.inf))

    def react_tuples(self, r: ReactSig):
        """``(sigma, has_input, has_output, sigma')`` tuples."""
        return frozenset(
            (x, f & 1, f >> 1, y)
            for f, row in enumerate(r.fin)
            for x, m in enumerate(row)
            for y in _bits(m)
        )

    def delay_tuples(self, dsig: DelaySig):
        return frozenset(
            (self.delay_config(x), self.delay_config(y))
            for x, m in enumerate(dsig.fin[0])
            for y in _bits(m)
        )

    def delay_violations(self, dsig: DelaySig):
        return frozenset(self.delay_config(x) for x in _bits(dsig.viol))

    def dump(self, st: DtaState) -> str:
        """Deterministic text rendering of all signature components."""
        fmt_s = self.vars.format_valuation
        order = {s: i for i, s in enumerate(self.nba.states)}

        def co_key(c):
            return (c.sigma, order[c.state], len(c.u), c.u, len(c.v), c.v)

        def co(c):
            return f"({fmt_s(c.sigma)}, {c.state}, {format_overhang(c.u, c.v)})"

        lines = ["[cosig.fin]"]
        fin = sorted(self.fin_tuples(st.co), key=lambda t: (co_key(t[0]), t[1], co_key(t[2])))
        lines += [f"{co(a)} {f} {co(b)}" for a, f, b in fin]
        lines.append("[cosig.inf]")
        lines += [co(c) for c in sorted(self.inf_set(st.co), key=co_key)]
        lines.append("[react.fin]")
        lines += [
            f"{fmt_s(a)} in={i} out={o} {fmt_s(b)}"
            for a, i, o, b in sorted(self.react_tuples(st.react))
        ]
        lines.append("[react.badinf]")
        lines += [fmt_s(s) for s in _bits(st.react.bad_inf)]
        lines.append("[delay.fin]")
        lines += [
            f"({fmt_s(a)}, {d}) ({fmt_s(b)}, {e})"
            for (a, d), (b, e) in sorted(self.delay_tuples(st.delay))
        ]
        lines.append("[delay.viol]")
        lines += [f"({fmt_s(s)}, {d})" for s, d in sorted(self.delay_violations(st.delay))]
        lines.append("[verdict]")
        lines.append(str(self.verdict(st)))
        return "\n".join(lines)


@lru_cache(maxsize=64)
def engine_for(vars: VariableSet, nba: SpecAutomaton, k: int) -> Engine:
    return Engine(vars, nba, k)


def _vars_of(p, vars):
    if vars is not None:
        return vars
    return VariableSet(tuple(dict.fromkeys(program_variables(p))))


def eval_program(p: Prog, nba: SpecAutomaton, k: int, vars: Optional[VariableSet] = None) -> DtaState:
    return engine_for(_vars_of(p, vars), nba, k).eval(p)


def verdict(st: DtaState, nba: SpecAutomaton, k: int, vars: VariableSet) -> Verdict:
    return engine_for(vars, nba, k).verdict(st)


def check_program_verdict(p: Prog, nba: SpecAutomaton, k: int, vars: Optional[VariableSet] = None) -> Verdict:
    """Evaluate ``p`` bottom-up and read off (sat, reactive, delay_ok)."""
    engine = engine_for(_vars_of(p, vars), nba, k)
    return engine.verdict(engine.eval(p))

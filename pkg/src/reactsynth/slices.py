"""Exact emptiness of the product automaton by per-block slice saturation.

Every component of a :class:`DtaState` is stored row by row, one row per
entry configuration, and the rows of an entry depend only on the behaviour
of the program started at that entry's valuation. Call the rows belonging to
one block of valuations a *slice*. ``if F`` copies the slices of its first
child on blocks inside ``F`` and those of its second child elsewhere, so when
the blocks are the atoms of the Boolean algebra generated by the condition
pool, the reachable states are exactly the products of reachable slices.
The verdict reads only the slice of the block holding the initial valuation.

Saturation therefore works on one slice set per block. ``if`` never creates
a new slice and is skipped; ``seq`` and ``while`` are applied to assembled
states. Each slice set is kept as an antichain: all constructors are monotone
for the order below and acceptance is antitone, so a slice dominated by
another one can never be needed in a smallest accepted program.

Dominance order: relation tuples are compared with flags taken into account.
A co-execution tuple ``(g, 1, g')`` covers ``(g, 0, g')``; a reactivity tuple
covers tuples of the same pair carrying *more* input/output flags.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

from .errors import ResourceLimit
from .programs import If, Prog, Seq, While, canonical_expr
from .signatures import (
    SEQ, CoSig, DelaySig, DtaState, Engine, ReactSig, WhileSym, _bits,
    atom_program,
)

log = logging.getLogger(__name__)


def blocks_of(vars, conditions):
    """Partition valuations by their membership pattern in every condition."""
    groups = {}
    for sigma in vars.valuations():
        pattern = tuple(sigma in f for f in conditions)
        groups.setdefault(pattern, []).append(sigma)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def co_classes(engine: Engine, atoms):
    """Coarsest partition of co-execution configurations respected by every atom.

    Two configurations share a class when they carry the same valuation and
    every atom leads them, with equal final-visit flags, into the same
    classes. Each constructor builds relations from atom relations by
    composition, union, restriction to valuations and closure, so a program
    can never tell members of one class apart: its rows from them hit the
    same classes with the same flags. Storing one row per class is exact.
    """
    relations = [engine.combine(a, ()).co.fin for a in atoms]
    n = len(engine.cocfgs)
    class_of = [c.sigma for c in engine.cocfgs]
    while True:
        signature = {}
        refined = []
        for i in range(n):
            key = (class_of[i],) + tuple(
                frozenset(class_of[j] for j in _bits(rel[f][i]))
                for rel in relations for f in range(2)
            )
            refined.append(signature.setdefault(key, len(signature)))
        if len(signature) == len(set(class_of)):
            break
        class_of = refined
    # renumber by first member so classes follow configuration order
    order = {}
    for c in class_of:
        order.setdefault(c, len(order))
    class_of = [order[c] for c in class_of]
    classes = [[] for _ in order]
    for i, c in enumerate(class_of):
        classes[c].append(i)
    return classes, class_of


@dataclass(frozen=True)
class Slice:
    co: tuple  # (fin0 rows, fin1 rows), one per configuration class, targets as class masks
    co_inf: int  # bits over the block's configuration classes
    react: tuple  # 4 flag rows over the block's valuations
    bad: int
    delay: tuple  # rows over the block's (sigma, d) configurations
    viol: int


@dataclass
class SliceWitness:
    sym: object  # atom symbol, SEQ or a WhileSym
    parts: tuple  # slice references ((block, Slice), ...)


class SliceSaturation:
    def __init__(self, engine: Engine, alphabet, max_slices: int = 100_000):
        self.engine = engine
        self.alphabet = alphabet
        self.max_slices = max_slices
        self.blocks = blocks_of(engine.vars, alphabet.conditions)
        self.block_of = {s: i for i, b in enumerate(self.blocks) for s in b}
        nval = engine.nval
        per = len(engine.cocfgs) // nval
        width = engine.width
        # row indices of each block inside the three carriers
        self.classes, self.class_of = co_classes(engine, alphabet.atoms)
        self._members = [sum(1 << i for i in c) for c in self.classes]
        self._co_rows = [
            [c for c, members in enumerate(self.classes) if self.block_of[engine.cocfgs[members[0]].sigma] == b]
            for b in range(len(self.blocks))
        ]
        self._val_rows = [list(b) for b in self.blocks]
        self._dl_rows = [[s * width + j for s in b for j in range(width)] for b in self.blocks]
        self._co_block = [self.block_of[engine.cocfgs[c[0]].sigma] for c in self.classes]
        self._dl_block = [self.block_of[i // width] for i in range(nval * width)]
        self.initial_block = self.block_of[0]
        self.slices = [dict() for _ in self.blocks]  # antichain: Slice -> dominance key
        self.witness = {}  # (block, Slice) -> SliceWitness, kept after pruning
        self.rounds = 0
        self.fixpoint = False
        self._filler = [self._zero_slice(b) for b in range(len(self.blocks))]

    # slices and states

    def _zero_slice(self, b):
        nco, nval, ndl = len(self._co_rows[b]), len(self._val_rows[b]), len(self._dl_rows[b])
        return Slice(((0,) * nco, (0,) * nco), 0, ((0,) * nval,) * 4, 0, ((0,) * ndl,), 0)

    def slice_of(self, st: DtaState, b: int) -> Slice:
        co_rows, val_rows, dl_rows = self._co_rows[b], self._val_rows[b], self._dl_rows[b]
        cls = self._class_mask
        return Slice(
            tuple(tuple(cls(row[self.classes[c][0]]) for c in co_rows) for row in st.co.fin),
            _gather(cls(st.co.inf), co_rows),
            tuple(tuple(row[i] for i in val_rows) for row in st.react.fin),
            _gather(st.react.bad_inf, val_rows),
            (tuple(st.delay.fin[0][i] for i in dl_rows),),
            _gather(st.delay.viol, dl_rows),
        )

    def assemble(self, parts) -> DtaState:
        """Full state whose slice on block ``b`` is ``parts[b]``."""
        eng = self.engine
        nco, nval, ndl = len(eng.cocfgs), eng.nval, eng.nval * eng.width
        co = [[0] * nco, [0] * nco]
        react = [[0] * nval for _ in range(4)]
        delay = [0] * ndl
        co_inf = bad = viol = 0
        for b, sl in enumerate(parts):
            for f in range(2):
                for c, t in zip(self._co_rows[b], sl.co[f]):
                    lifted = self._lift(t)
                    for i in self.classes[c]:
                        co[f][i] = lifted
            for f in range(4):
                for i, t in zip(self._val_rows[b], sl.react[f]):
                    react[f][i] = t
            for i, t in zip(self._dl_rows[b], sl.delay[0]):
                delay[i] = t
            co_inf |= self._lift(_scatter(sl.co_inf, self._co_rows[b]))
            bad |= _scatter(sl.bad, self._val_rows[b])
            viol |= _scatter(sl.viol, self._dl_rows[b])
        return DtaState(
            CoSig(tuple(map(tuple, co)), co_inf),
            ReactSig(tuple(map(tuple, react)), bad),
            DelaySig((tuple(delay),), viol),
        )

    def _class_mask(self, mask):
        out = 0
        for i in _bits(mask):
            out |= 1 << self.class_of[i]
        return out

    def _lift(self, class_mask):
        out = 0
        for c in _bits(class_mask):
            out |= self._members[c]
        return out

    def _key(self, sl: Slice) -> int:
        width = max(len(self.classes), self.engine.nval * self.engine.width) + 1
        parts = [a | b for a, b in zip(*sl.co)] + list(sl.co[1]) + [sl.co_inf]
        r = sl.react
        for f in range(4):
            # a tuple with flags f is covered by any tuple with flags contained in f
            parts += [r[f][i] | r[f & 1][i] | r[f & 2][i] | r[0][i] for i in range(len(r[0]))]
        parts.append(sl.bad)
        parts += list(sl.delay[0]) + [sl.viol]
        key = 0
        for x in parts:
            key = (key << width) | x
        return key

    def _targets(self, sl: Slice, b: int) -> tuple:
        """Blocks whose slices a sequential successor reads after ``sl``."""
        hit = set()
        for row in sl.co:
            for t in row:
                hit.update(self._co_block[i] for i in _bits(t))
        for row in sl.react:
            for t in row:
                hit.update(self.block_of[i] for i in _bits(t))
        for t in sl.delay[0]:
            hit.update(self._dl_block[i] for i in _bits(t))
        return tuple(sorted(hit))

    def _offer(self, b, sl, witness, fresh):
        table = self.slices[b]
        if sl in table:
            return
        key = self._key(sl)
        for other in table.values():
            if other & ~key == 0:
                return
        for old, other in list(table.items()):
            if key & ~other == 0:
                del table[old]
                fresh[b].discard(old)
        table[sl] = key
        self.witness.setdefault((b, sl), witness)
        fresh[b].add(sl)
        if sum(len(t) for t in self.slices) > self.max_slices:
            raise ResourceLimit(f"more than {self.max_slices} slices")

    # saturation

    def run(self, stop_on_accept: bool = False):
        """Saturate to a fixpoint, or until an accepting slice appears."""
        eng = self.engine
        nblocks = len(self.blocks)
        fresh = [set() for _ in range(nblocks)]
        for atom in self.alphabet.atoms:
            st = eng.combine(atom, ())
            for b in range(nblocks):
                self._offer(b, self.slice_of(st, b), SliceWitness(atom, ()), fresh)
        whiles = [WhileSym(f) for f in self.alphabet.conditions if f]
        while any(fresh):
            if stop_on_accept and self._accepting(fresh[self.initial_block]) is not None:
                return self
            self.rounds += 1
            log.debug("slice round %d: %s", self.rounds, [len(t) for t in self.slices])
            current = [list(t) for t in self.slices]
            new = [set() for _ in range(nblocks)]
            for sym in whiles:
                inside = sorted({self.block_of[s] for s in sym.cond})
                for choice in itertools.product(*(current[b] for b in inside)):
                    if not any(sl in fresh[b] for b, sl in zip(inside, choice)):
                        continue
                    parts = list(self._filler)
                    for b, sl in zip(inside, choice):
                        parts[b] = sl
                    st = eng.combine(sym, (self.assemble(parts),))
                    refs = tuple(zip(inside, choice))
                    for b in range(nblocks):
                        self._offer(b, self.slice_of(st, b), SliceWitness(sym, refs), new)
            for b in range(nblocks):
                for x in current[b]:
                    if x not in self.slices[b]:
                        continue
                    x_fresh = x in fresh[b]
                    targets = self._targets(x, b)
                    for choice in itertools.product(*(current[t] for t in targets)):
                        if not x_fresh and not any(sl in fresh[t] for t, sl in zip(targets, choice)):
                            continue
                        first = list(self._filler)
                        first[b] = x
                        second = list(self._filler)
                        for t, sl in zip(targets, choice):
                            second[t] = sl
                        st = eng.combine(SEQ, (self.assemble(first), self.assemble(second)))
                        refs = ((b, x),) + tuple(zip(targets, choice))
                        self._offer(b, self.slice_of(st, b), SliceWitness(SEQ, refs), new)
            fresh = [{sl for sl in n if sl in self.slices[b]} for b, n in enumerate(new)]
        self.fixpoint = True
        return self

    # results

    def accepted(self) -> Optional[Slice]:
        """An accepting slice on the initial block, if any."""
        return self._accepting(self.slices[self.initial_block])

    def _accepting(self, candidates):
        b = self.initial_block
        for sl in sorted(candidates, key=self.slices[b].get):
            parts = list(self._filler)
            parts[b] = sl
            if self.engine.verdict(self.assemble(parts)).accepted:
                return sl
        return None

    def program(self, b: int, sl: Slice) -> Prog:
        """A program whose state has slice ``sl`` on block ``b``."""
        return self._program(b, sl, {})

    def _program(self, b, sl, memo):
        if (b, sl) in memo:
            return memo[b, sl]
        witness = self.witness[b, sl]
        sym = witness.sym
        if sym is SEQ:
            (xb, x), *rest = witness.parts
            result = Seq(self._program(xb, x, memo), self._mix(rest, memo))
        elif isinstance(sym, WhileSym):
            result = While(canonical_expr(sym.cond, self.engine.vars), self._mix(witness.parts, memo))
        else:
            result = atom_program(sym, self.engine.vars)
        memo[b, sl] = result
        return result

    def _mix(self, refs, memo):
        """Program agreeing with each referenced slice on its block."""
        programs = [(self.blocks[b], self._program(b, sl, memo)) for b, sl in refs]
        if not programs:
            # the first part never terminates, any continuation will do
            return atom_program(self.alphabet.atoms[0], self.engine.vars)
        return self._decide(programs, list(self.alphabet.conditions))

    def _decide(self, programs, conditions):
        distinct = {p for _, p in programs}
        if len(distinct) == 1:
            return programs[0][1]
        for i, f in enumerate(conditions):
            inside = [(blk, p) for blk, p in programs if blk[0] in f]
            outside = [(blk, p) for blk, p in programs if blk[0] not in f]
            if inside and outside:
                rest = conditions[i + 1:]
                return If(
                    canonical_expr(f, self.engine.vars),
                    self._decide(inside, rest),
                    self._decide(outside, rest),
                )
        raise AssertionError("blocks are not separated by the condition pool")


def _gather(mask, rows):
    out = 0
    for j, i in enumerate(rows):
        if (mask >> i) & 1:
            out |= 1 << j
    return out


def _scatter(bits, rows):
    out = 0
    for j, i in enumerate(rows):
        if (bits >> j) & 1:
            out |= 1 << i
    return out

"""Operational semantics via Input/Output/Internal (IOI) machines.

This module is the brute-force ground truth for the signature engine. It
builds the explicit transition system of a program, simulates it, and decides
specification compliance, reactivity and bounded delay by graph search.

A machine state is a pair ``(control_point, sigma)``. Control points are the
preorder indices of atomic statements, plus ``EXIT`` (the program has
terminated) and ``DIVERGE``. Conditions of ``if``/``while`` consume no
transition: entering a compound statement is resolved immediately to the
first atomic statement it reaches. When that resolution runs around a loop
without ever reaching an atomic statement (``while true do { while false do
{...} }``) the loop spins forever without acting; such states are mapped to
``DIVERGE``, which carries an internal self-loop.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .nba import SpecAutomaton
from .programs import (
    Assign, If, Input, Output, Prog, Seq, VariableSet, While, check_program,
    eval_expr, program_variables, render_expr,
)

EXIT = -1
DIVERGE = -2

Label = tuple  # (input bit or None, output bit or None)
INTERNAL: Label = (None, None)


def format_label(label: Label) -> str:
    a, b = label
    return f"({'ε' if a is None else a},{'ε' if b is None else b})"


def format_overhang(u: str, v: str) -> str:
    return f"{u or 'ε'}|{v or 'ε'}"


class IoiMachine:
    """Explicit IOI machine of a program over a variable set.

    ``transitions[state]`` is a tuple of ``(label, target)`` pairs; exit
    states have none. ``entry[sigma]`` and ``exit[sigma]`` give the
    designated entry and exit state for each valuation.
    """

    def __init__(self, program: Prog, vars: VariableSet):
        check_program(program, vars)
        self.program = program
        self.vars = vars
        self._nodes = []
        self._cont = {}
        self._number(program, EXIT)
        self.atoms = {
            i: node for i, node in enumerate(self._nodes) if isinstance(node, (Assign, Input, Output))
        }
        self._resolved = {}
        valuations = vars.valuations()
        self.entry = {s: self._resolve(0, s) for s in valuations}
        self.exit = {s: (EXIT, s) for s in valuations}
        trans = {}
        for i, node in self.atoms.items():
            for s in valuations:
                trans[(i, s)] = self._atom_transitions(i, node, s)
        for s in valuations:
            trans[(EXIT, s)] = ()
        for q in set(self._resolved.values()):
            if q[0] == DIVERGE:
                trans[q] = ((INTERNAL, q),)
        self.transitions = trans
        self.initial = self.entry[0]

    def _number(self, node, cont):
        index = len(self._nodes)
        self._nodes.append(node)
        self._cont[index] = cont
        if isinstance(node, Seq):
            second_index = index + 1 + _count(node.first)
            self._number(node.first, second_index)
            self._number(node.second, cont)
        elif isinstance(node, If):
            self._number(node.then_branch, cont)
            self._number(node.else_branch, cont)
        elif isinstance(node, While):
            self._number(node.body, index)

    def _resolve(self, point, sigma):
        key = (point, sigma)
        if key in self._resolved:
            return self._resolved[key]
        seen = set()
        while point != EXIT:
            if point in seen:
                result = (DIVERGE, sigma)
                break
            seen.add(point)
            node = self._nodes[point]
            if isinstance(node, Seq):
                point += 1
            elif isinstance(node, If):
                if eval_expr(node.cond, sigma, self.vars):
                    point += 1
                else:
                    point += 1 + _count(node.then_branch)
            elif isinstance(node, While):
                if eval_expr(node.cond, sigma, self.vars):
                    point += 1
                else:
                    point = self._cont[point]
            else:
                result = (point, sigma)
                break
        else:
            result = (EXIT, sigma)
        self._resolved[key] = result
        return result

    def _atom_transitions(self, i, node, sigma):
        cont, vars = self._cont[i], self.vars
        if isinstance(node, Input):
            return tuple(
                ((a, None), self._resolve(cont, vars.assign(sigma, node.target, a)))
                for a in (0, 1)
            )
        if isinstance(node, Output):
            return (((None, vars.get(sigma, node.source)), self._resolve(cont, sigma)),)
        value = eval_expr(node.rhs, sigma, vars)
        return ((INTERNAL, self._resolve(cont, vars.assign(sigma, node.target, value))),)

    @property
    def states(self):
        return list(self.transitions)

    def reachable(self, start=None):
        """States reachable from ``start`` (default: the initial state), BFS order."""
        start = self.initial if start is None else start
        order, seen = [start], {start}
        for q in order:
            for _, r in self.transitions[q]:
                if r not in seen:
                    seen.add(r)
                    order.append(r)
        return order

    def control_point_name(self, cp: int) -> str:
        if cp == EXIT:
            return "exit"
        if cp == DIVERGE:
            return "diverge"
        node = self.atoms[cp]
        if isinstance(node, Input):
            text = f"input {node.target}"
        elif isinstance(node, Output):
            text = f"output {node.source}"
        else:
            text = f"{node.target} := {render_expr(node.rhs)}"
        return f"n{cp}[{text}]"

    def canonical_key(self):
        """Hashable shape of the machine reachable from the initial state.

        Two programs with equal keys have isomorphic reachable machines, so
        every oracle verdict is a function of this key.
        """
        order = self.reachable()
        number = {q: i for i, q in enumerate(order)}
        return tuple(
            (q[0] == EXIT, tuple((lab, number[r]) for lab, r in self.transitions[q]))
            for q in order
        )


def _count(node):
    if isinstance(node, Seq):
        return 1 + _count(node.first) + _count(node.second)
    if isinstance(node, If):
        return 1 + _count(node.then_branch) + _count(node.else_branch)
    if isinstance(node, While):
        return 1 + _count(node.body)
    return 1


def build_ioi(p: Prog, vars: VariableSet) -> IoiMachine:
    return IoiMachine(p, vars)


def _machine(p, vars):
    if isinstance(p, IoiMachine):
        return p
    if vars is None:
        # every statement mentions a variable, so this is never empty
        vars = VariableSet(tuple(dict.fromkeys(program_variables(p))))
    return IoiMachine(p, vars)


# -- simulation --------------------------------------------------------------


class Status(enum.Enum):
    TERMINATED = "terminated"
    INPUT_STARVED = "input-starved"
    STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class TraceLabel:
    input_word: str
    output_word: str
    status: Status
    steps: int


def simulate(p, inputs: str, max_steps: int = 10_000, vars: Optional[VariableSet] = None) -> TraceLabel:
    """Run the initial computation, feeding ``inputs`` at input transitions."""
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    m = _machine(p, vars)
    q = m.initial
    consumed, emitted = [], []
    pending = iter(inputs)
    steps = 0
    while True:
        if q[0] == EXIT:
            status = Status.TERMINATED
            break
        if steps >= max_steps:
            status = Status.STEP_LIMIT
            break
        moves = m.transitions[q]
        if moves[0][0][0] is not None:
            bit = next(pending, None)
            if bit is None:
                status = Status.INPUT_STARVED
                break
            if bit not in "01":
                raise ValueError(f"input bits must be 0 or 1, got {bit!r}")
            consumed.append(bit)
            q = moves[int(bit)][1]
        else:
            (label, q), = moves
            if label[1] is not None:
                emitted.append(str(label[1]))
        steps += 1
    return TraceLabel("".join(consumed), "".join(emitted), status, steps)


# -- oracles -----------------------------------------------------------------


@dataclass(frozen=True)
class ProductState:
    ioi: tuple  # (control point, sigma)
    nba: str
    u: str = ""  # pending inputs
    v: str = ""  # pending outputs


@dataclass(frozen=True)
class ProductEdge:
    src: ProductState
    label: Label
    dst: ProductState
    accepting: bool


@dataclass(frozen=True)
class Lasso:
    stem: tuple[ProductEdge, ...]
    cycle: tuple[ProductEdge, ...]


def _product_moves(m, a, k, ps):
    q, s, u, v = ps.ioi, ps.nba, ps.u, ps.v
    for label, r in m.transitions[q]:
        x, y = label
        if x is None and y is None:
            yield label, ProductState(r, s, u, v), False
        elif x is not None:
            if v:
                for t in a.successors(s, (x, int(v[0]))):
                    yield label, ProductState(r, t, u, v[1:]), t in a.finals
            elif len(u) < k:
                yield label, ProductState(r, s, u + str(x), v), False
        else:
            if u:
                for t in a.successors(s, (int(u[0]), y)):
                    yield label, ProductState(r, t, u[1:], v), t in a.finals
            elif len(v) < k:
                yield label, ProductState(r, s, u, v + str(y)), False


def _sccs(nodes, succ):
    """Tarjan's algorithm, iterative; returns a node -> component id map."""
    index, low, comp = {}, {}, {}
    stack, on_stack = [], set()
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = index[node]
                    if w == node:
                        break
    return comp


def _path(start, goal, edges_from, allowed=None):
    """Shortest edge path from start to goal (empty if start == goal)."""
    if start == goal:
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for e in edges_from[x]:
            y = e.dst
            if y in parent or (allowed is not None and y not in allowed):
                continue
            parent[y] = e
            if y == goal:
                path = []
                while y != start:
                    path.append(parent[y])
                    y = parent[y].src
                return path[::-1]
            queue.append(y)
    raise AssertionError("goal not reachable")


def oracle_sat(p, a: SpecAutomaton, k: int, vars: Optional[VariableSet] = None):
    """Decide whether no k-bounded behaviour of ``p`` is accepted by ``a``.

    Returns ``(True, None)`` or ``(False, lasso)``, the lasso being a stem
    and a cycle of product transitions whose cycle enters a final state.
    """
    if k < 0:
        raise ValueError("delay bound must be nonnegative")
    m = _machine(p, vars)
    start = ProductState(m.initial, a.initial)
    edges_from = {start: []}
    order = [start]
    accepting = []
    for x in order:
        out = edges_from[x]
        for label, y, acc in _product_moves(m, a, k, x):
            e = ProductEdge(x, label, y, acc)
            out.append(e)
            if acc:
                accepting.append(e)
            if y not in edges_from:
                edges_from[y] = []
                order.append(y)
    if not accepting:
        return True, None
    succ = {x: [e.dst for e in es] for x, es in edges_from.items()}
    comp = _sccs(order, succ)
    for e in accepting:
        if comp[e.src] == comp[e.dst]:
            scc = {x for x in order if comp[x] == comp[e.src]}
            stem = _path(start, e.src, edges_from)
            back = _path(e.dst, e.src, edges_from, allowed=scc)
            return False, Lasso(tuple(stem), tuple([e] + back))
    return True, None


def oracle_delay(p, k: int, vars: Optional[VariableSet] = None) -> bool:
    """True iff every initial computation keeps |#inputs - #outputs| <= k."""
    if k < 0:
        raise ValueError("delay bound must be nonnegative")
    m = _machine(p, vars)
    start = (m.initial, 0)
    seen, stack = {start}, [start]
    while stack:
        q, d = stack.pop()
        for (x, y), r in m.transitions[q]:
            nd = d + (x is not None) - (y is not None)
            if abs(nd) > k:
                return False
            if (r, nd) not in seen:
                seen.add((r, nd))
                stack.append((r, nd))
    return True


def _has_cycle(nodes, edges):
    """Kahn's algorithm on the subgraph induced by ``edges``."""
    indeg = dict.fromkeys(nodes, 0)
    out = {q: [] for q in nodes}
    for q, r in edges:
        out[q].append(r)
        indeg[r] += 1
    queue = [q for q in nodes if indeg[q] == 0]
    removed = 0
    while queue:
        q = queue.pop()
        removed += 1
        for r in out[q]:
            indeg[r] -= 1
            if indeg[r] == 0:
                queue.append(r)
    return removed < len(nodes)


def oracle_reactive(p, vars: Optional[VariableSet] = None) -> bool:
    """True iff every maximal initial computation is infinite with infinitely
    many inputs and infinitely many outputs."""
    m = _machine(p, vars)
    nodes = m.reachable()
    if any(q[0] == EXIT for q in nodes):
        return False
    without_input = [(q, r) for q in nodes for (x, _), r in m.transitions[q] if x is None]
    if _has_cycle(nodes, without_input):
        return False
    without_output = [(q, r) for q in nodes for (_, y), r in m.transitions[q] if y is None]
    return not _has_cycle(nodes, without_output)


def oracle_verdict(p, a: SpecAutomaton, k: int, vars: Optional[VariableSet] = None):
    """(sat, reactive, delay_ok) computed by explicit search."""
    m = _machine(p, vars)
    return (oracle_sat(m, a, k)[0], oracle_reactive(m), oracle_delay(m, k))


def format_lasso(lasso: Lasso, m: IoiMachine) -> str:
    def node(ps):
        cp, sigma = ps.ioi
        return (
            f"({m.control_point_name(cp)}, {m.vars.format_valuation(sigma)}, "
            f"{ps.nba}, {format_overhang(ps.u, ps.v)})"
        )

    def edge(e):
        mark = " *" if e.accepting else ""
        return f"  {node(e.src)} --{format_label(e.label)}--> {node(e.dst)}{mark}"

    lines = ["stem:"] + [edge(e) for e in lasso.stem]
    lines += ["cycle:"] + [edge(e) for e in lasso.cycle]
    return "\n".join(lines)

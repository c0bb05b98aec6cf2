"""Acceptance gate: one PASS/FAIL line per primary criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
Pinned tolerances: engine/oracle agreement must be exact (100%), the
exhaustive comparison must finish within ``EQUIVALENCE_BUDGET_S`` seconds,
and the realizable witness must have statement-tree height at most 3.
"""

from __future__ import annotations

import random
import sys
import time
from contextlib import nullcontext
from pathlib import Path


sys.path.insert(0, str(Path(__file__).resolve().parent))

from equivalence import compare_corpus  # noqa: E402

from reactsynth.corpus import default_pool, programs_by_height, programs_by_size  # noqa: E402
from reactsynth.fixtures import A_NEQ, A_NONE, AUTOMATA, B, P_ECHO  # noqa: E402
from reactsynth.ioi import IoiMachine, oracle_verdict  # noqa: E402
from reactsynth.nba import SYMBOLS, SpecAutomaton, parse_nba, serialize_nba  # noqa: E402
from reactsynth.programs import (  # noqa: E402
    TRUE, Assign, Input, Var, While, children, height, parse_program, render_program,
)
from reactsynth.signatures import (  # noqa: E402
    SEQ, IfSym, check_program_verdict, closure, engine_for, symbol_of,
)
from reactsynth.synthesis import SynthesisOptions, Unrealizable, synthesize  # noqa: E402

EQUIVALENCE_BUDGET_S = 600.0
WITNESS_MAX_HEIGHT = 3


def report(capsys, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    with capsys.disabled() if capsys is not None else nullcontext():
        print("\n" + line)
    return ok


def test_oracle_equivalence(capsys):
    r = compare_corpus(max_size=6, delays=(1, 2))
    ok = not r.mismatches and r.seconds < EQUIVALENCE_BUDGET_S
    detail = (
        f"{r.programs} programs x 6 configurations = {r.comparisons} comparisons, "
        f"{len(r.mismatches)} mismatches, {r.seconds:.0f}s (budget {EQUIVALENCE_BUDGET_S:.0f}s)"
    )
    assert report(capsys, "oracle equivalence", ok, detail), r.mismatches[:5]


def test_realizable_synthesis(capsys):
    start = time.perf_counter()
    p = synthesize(B, A_NEQ, 1, SynthesisOptions(verify=True))
    verdict = oracle_verdict(p, A_NEQ, 1, B)
    engine = tuple(check_program_verdict(p, A_NEQ, 1, B))
    ok = verdict == engine == (True, True, True) and height(p) <= WITNESS_MAX_HEIGHT
    detail = f"height {height(p)}, oracle {verdict}, {time.perf_counter() - start:.1f}s: {render_program(p)!r}"
    assert report(capsys, "realizable synthesis", ok, detail)


def test_unrealizability(capsys):
    cases = [("A_all", 1), ("A_all", 2)] + [(name, 0) for name in sorted(AUTOMATA)]
    results = []
    for name, k in cases:
        start = time.perf_counter()
        result = synthesize(B, AUTOMATA[name], k)
        results.append((name, k, result, time.perf_counter() - start))
    # Unrealizable() without a height means the fixpoint was reached
    ok = all(r == Unrealizable() for _, _, r, _ in results)
    detail = ", ".join(f"{n} k={k}: {r} ({t:.1f}s)" for n, k, r, t in results)
    assert report(capsys, "unrealizability", ok, detail)


def test_delay_boundary(capsys):
    checks = []
    for a in (A_NEQ, A_NONE):
        checks.append(("p_echo k=1", P_ECHO, a, 1, (True, True, True)))
        checks.append(("p_echo k=0", P_ECHO, a, 0, (True, True, False)))
    negatives = [
        ("Input(b)", Input("b")),
        ("While(true, b:=b)", While(TRUE, Assign("b", Var("b")))),
        ("While(true, input b)", While(TRUE, Input("b"))),
    ]
    bad = []
    for label, p, a, k, want in checks:
        got = tuple(check_program_verdict(p, a, k, B))
        if not got == oracle_verdict(p, a, k, B) == want:
            bad.append(f"{label}: {got}")
    for label, p in negatives:
        for k in (1, 2):
            got = check_program_verdict(p, A_NONE, k, B)
            # the reactivity component is the one that must fail
            if got.reactive or not got.sat:
                bad.append(f"{label} k={k}: {got}")
            if tuple(got) != oracle_verdict(p, A_NONE, k, B):
                bad.append(f"{label} k={k}: disagrees with oracle")
    detail = "p_echo (1,1,1) at k=1 and (1,1,0) at k=0; negatives reactive=0" if not bad else "; ".join(bad)
    assert report(capsys, "delay boundary", not bad, detail)


def _brute_closure(tuples, carrier):
    out = set()
    for x in carrier:
        seen, todo = {(x, 0)}, [(x, 0)]
        while todo:
            y, f = todo.pop()
            for a, g, b in tuples:
                if a == y and (b, f | g) not in seen:
                    seen.add((b, f | g))
                    todo.append((b, f | g))
        out |= {(x, f, y) for y, f in seen}
    return frozenset(out)


def _random_nba(rng):
    states = [f"s{i}" for i in range(rng.randint(1, 4))]
    trans = {(rng.choice(states), rng.choice(SYMBOLS), rng.choice(states)) for _ in range(rng.randint(0, 10))}
    finals = {s for s in states if rng.random() < 0.5}
    return SpecAutomaton(tuple(states), rng.choice(states), finals, trans)


def test_algebraic_properties(capsys):
    rng = random.Random(2024)
    failures = []
    # closure on 200 random relations over carriers of at most 4 elements
    for _ in range(200):
        carrier = list(range(rng.randint(1, 4)))
        c = frozenset((x, rng.randint(0, 1), y) for x in carrier for y in carrier if rng.random() < 0.3)
        d = c | frozenset((x, rng.randint(0, 1), y) for x in carrier for y in carrier if rng.random() < 0.2)
        cl = closure(c, carrier)
        if cl != _brute_closure(c, carrier) or closure(cl, carrier) != cl or not cl <= closure(d, carrier):
            failures.append(f"closure {sorted(c)}")
    # loop unrolling for every loop of the corpus (size <= 6)
    pool = default_pool(B)
    levels = programs_by_size(B, pool, 6)
    bodies = [p for level in levels[:6] for p in level]
    skip = Assign("b", Var("b"))
    unrolled = 0
    for name, a in AUTOMATA.items():
        for k in (1, 2):
            engine = engine_for(B, a, k)
            states = {}
            for p in bodies:
                states[p] = engine.combine(symbol_of(p, B), [states[c] for c in children(p)])
            skip_state = engine.eval(skip)
            for p in bodies:
                for e in pool:
                    f = symbol_of(While(e, p), B)
                    loop = engine.combine(f, (states[p],))
                    again = engine.combine(IfSym(f.cond), (engine.combine(SEQ, (states[p], loop)), skip_state))
                    unrolled += 1
                    if loop != again:
                        failures.append(f"unrolling {name} k={k} {p}")
    # program parse/render round trip over the whole corpus
    programs = 0
    for level in levels:
        for p in level:
            programs += 1
            if parse_program(render_program(p), B) != p:
                failures.append(f"round trip {p}")
    # automaton parse/serialize round trip
    automata = list(AUTOMATA.values()) + [_random_nba(rng) for _ in range(200)]
    for a in automata:
        text = serialize_nba(a)
        if parse_nba(text) != a or serialize_nba(parse_nba(text)) != text:
            failures.append(f"nba round trip {text!r}")
    detail = (
        f"200 closures, {unrolled} loop unrollings, {programs} program and "
        f"{len(automata)} automaton round trips, {len(failures)} failures"
    )
    assert report(capsys, "algebraic properties", not failures, detail), failures[:5]


def test_minimality(capsys):
    p = synthesize(B, A_NEQ, 1)
    h = height(p)
    levels = programs_by_height(B, default_pool(B), WITNESS_MAX_HEIGHT)
    shapes = {}
    accepted_heights = []
    for level_height, level in enumerate(levels):
        found = 0
        for q in level:
            m = IoiMachine(q, B)
            key = m.canonical_key()
            if key not in shapes:
                shapes[key] = oracle_verdict(m, A_NEQ, 1) == (True, True, True)
            found += shapes[key]
        if found:
            accepted_heights.append(level_height)
    total = sum(len(level) for level in levels)
    lowest = accepted_heights[0] if accepted_heights else None
    ok = lowest == h
    detail = f"synthesized height {h}; lowest accepted height among {total} programs of height <= {WITNESS_MAX_HEIGHT}: {lowest}"
    assert report(capsys, "minimality", ok, detail)


if __name__ == "__main__":
    results = []
    for test in [
        test_oracle_equivalence, test_realizable_synthesis, test_unrealizability,
        test_delay_boundary, test_algebraic_properties, test_minimality,
    ]:
        try:
            test(None)
            results.append(True)
        except AssertionError:
            results.append(False)
    print(f"\n{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)

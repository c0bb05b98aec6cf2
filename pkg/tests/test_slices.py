import pytest

from reactsynth.corpus import default_pool, enumerate_programs
from reactsynth.fixtures import A_ALL, A_NEQ, A_NONE, AUTOMATA, B
from reactsynth.ioi import oracle_verdict
from reactsynth.programs import TRUE, Var, VariableSet
from reactsynth.signatures import engine_for, symbol_of
from reactsynth.programs import children
from reactsynth.slices import SliceSaturation, blocks_of, co_classes
from reactsynth.synthesis import ConstructorAlphabet


def saturation(a, k, vars=B, exprs=None):
    return SliceSaturation(engine_for(vars, a, k), ConstructorAlphabet.build(vars, exprs))


def test_blocks_follow_the_condition_pool():
    vars = VariableSet(("x", "y"))
    full = ConstructorAlphabet.build(vars)
    assert blocks_of(vars, full.conditions) == [(0,), (1,), (2,), (3,)]
    only_x = ConstructorAlphabet.build(vars, [TRUE, Var("x")])
    assert blocks_of(vars, only_x.conditions) == [(0, 2), (1, 3)]


@pytest.mark.parametrize("name", sorted(AUTOMATA))
def test_classes_refine_valuation(name):
    engine = engine_for(B, AUTOMATA[name], 2)
    classes, class_of = co_classes(engine, ConstructorAlphabet.build(B).atoms)
    for members in classes:
        assert len({engine.cocfgs[i].sigma for i in members}) == 1
    assert sorted(i for c in classes for i in c) == list(range(len(engine.cocfgs)))
    assert all(class_of[i] == c for c, members in enumerate(classes) for i in members)


def test_universal_automaton_forgets_overhang_contents():
    engine = engine_for(B, A_ALL, 2)
    classes, _ = co_classes(engine, ConstructorAlphabet.build(B).atoms)
    # per valuation: no overhang, and one class per pending length and side
    assert len(classes) == 2 * 5


@pytest.mark.parametrize("name,k", [(n, k) for n in sorted(AUTOMATA) for k in (1, 2)])
def test_quotient_is_exact_on_small_corpus(name, k):
    sat = saturation(AUTOMATA[name], k)
    engine = sat.engine
    blocks = range(len(sat.blocks))

    def project(st):
        return [sat.slice_of(st, b) for b in blocks]

    for p in enumerate_programs(B, default_pool(B), 4):
        st = engine.eval(p)
        lifted = sat.assemble(project(st))
        assert engine.verdict(lifted) == engine.verdict(st)
        kids = children(p)
        if kids:
            rebuilt = engine.combine(symbol_of(p, B), [sat.assemble(project(engine.eval(c))) for c in kids])
            assert project(rebuilt) == project(st)


@pytest.mark.parametrize(
    "a,k",
    [(A_ALL, 0), (A_ALL, 1), (A_NEQ, 0), (A_NONE, 0)],
)
def test_empty_instances_reach_fixpoint(a, k):
    sat = saturation(a, k).run()
    assert sat.fixpoint
    assert sat.accepted() is None


@pytest.mark.parametrize("a,k", [(A_NONE, 1), (A_NEQ, 1)])
def test_witness_is_accepted(a, k):
    sat = saturation(a, k).run(stop_on_accept=True)
    hit = sat.accepted()
    assert hit is not None
    p = sat.program(sat.initial_block, hit)
    assert oracle_verdict(p, a, k, B) == (True, True, True)
    st = sat.engine.eval(p)
    assert sat.slice_of(st, sat.initial_block) == hit


def test_antichains_hold_no_dominated_slice():
    sat = saturation(A_ALL, 1).run()
    for table in sat.slices:
        keys = list(table.values())
        for i, x in enumerate(keys):
            for j, y in enumerate(keys):
                if i != j:
                    assert x & ~y != 0

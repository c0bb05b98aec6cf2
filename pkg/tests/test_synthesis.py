import pytest

from reactsynth.errors import ResourceLimit
from reactsynth.fixtures import A_ALL, A_NEQ, A_NONE, B, P_ECHO
from reactsynth.ioi import oracle_verdict
from reactsynth.programs import FALSE, TRUE, Not, Var, height
from reactsynth.signatures import engine_for
from reactsynth.synthesis import (
    ConstructorAlphabet, StateTable, SynthesisOptions, Unrealizable,
    diagnostics, saturate, synthesize,
)


def test_alphabet_is_semantic():
    alphabet = ConstructorAlphabet.build(B)
    assert len(alphabet.conditions) == 4
    assert len(alphabet.atoms) == 2 + 4
    restricted = ConstructorAlphabet.build(B, [TRUE, Var("b"), Not(Not(Var("b")))])
    assert len(restricted.conditions) == 2


def test_height_one_holds_the_atom_states():
    table = saturate(B, A_NONE, 1, SynthesisOptions(max_height=1))
    engine = engine_for(B, A_NONE, 1)
    atoms = ConstructorAlphabet.build(B).atoms
    assert len(table) == len({engine.combine(a, ()) for a in atoms}) == 6
    assert not table.fixpoint


def test_saturation_is_monotone():
    previous = set()
    for h in (1, 2):
        states = set(saturate(B, A_NEQ, 1, SynthesisOptions(max_height=h)).witnesses)
        assert previous <= states
        previous = states


def test_witnesses_rebuild_their_state():
    table = saturate(B, A_NEQ, 1, SynthesisOptions(max_height=2))
    for st in table.states()[:200]:
        w = table.witnesses[st]
        p = table.program(st)
        assert table.engine.eval(p) == st
        assert height(p) == w.height


def test_diagnostics():
    empty = diagnostics(StateTable(engine_for(B, A_NONE, 1)))
    assert empty.states == 0 and empty.heights == () and empty.verdicts == ()
    d = diagnostics(saturate(B, A_NONE, 1, SynthesisOptions(max_height=2)))
    assert sum(n for _, n in d.heights) == d.states
    assert sum(n for _, n in d.verdicts) == d.states
    assert dict(d.heights)[1] == 6
    assert str(d).startswith(f"states {d.states}\n")


def test_realizable_echo_specification():
    p = synthesize(B, A_NEQ, 1, SynthesisOptions(verify=True))
    assert height(p) <= 3
    assert oracle_verdict(p, A_NEQ, 1, B) == (True, True, True)
    assert p == P_ECHO


def test_bounded_mode_finds_the_same_program():
    assert synthesize(B, A_NEQ, 1, SynthesisOptions(max_height=3)) == P_ECHO


def test_synthesis_is_deterministic():
    opts = SynthesisOptions(max_height=3)
    assert synthesize(B, A_NONE, 1, opts) == synthesize(B, A_NONE, 1, opts)


@pytest.mark.parametrize("a", [A_NONE, A_ALL, A_NEQ])
def test_zero_delay_is_unrealizable(a):
    assert synthesize(B, a, 0) == Unrealizable()


def test_universal_violations_are_unrealizable():
    result = synthesize(B, A_ALL, 1)
    assert result == Unrealizable() and str(result) == "UNREALIZABLE"


def test_bounded_failure_reports_the_height():
    result = synthesize(B, A_NEQ, 1, SynthesisOptions(max_height=2))
    assert result == Unrealizable(2)
    assert str(result) == "UNREALIZABLE up to height 2"


def test_state_cap():
    with pytest.raises(ResourceLimit):
        saturate(B, A_NEQ, 1, SynthesisOptions(max_height=3, max_states=50))


def test_restricted_pool():
    opts = SynthesisOptions(exprs=(TRUE, Var("b")), verify=True)
    assert synthesize(B, A_NEQ, 1, opts) == P_ECHO
    assert len(ConstructorAlphabet.build(B, opts.exprs).atoms) == 4

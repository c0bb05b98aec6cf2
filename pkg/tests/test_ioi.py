import pytest

from reactsynth.fixtures import A_ALL, A_NEQ, A_NONE, B, P_ECHO, P_NEG
from reactsynth.ioi import (
    DIVERGE, EXIT, INTERNAL, IoiMachine, Status, build_ioi, format_lasso,
    oracle_delay, oracle_reactive, oracle_sat, oracle_verdict, simulate,
)
from reactsynth.programs import (
    FALSE, TRUE, Assign, If, Input, Not, Output, Seq, Var, VariableSet, While,
)

SPIN = While(TRUE, Assign("b", Var("b")))
LISTEN = While(TRUE, Input("b"))


def test_input_machine():
    m = build_ioi(Input("b"), B)
    start = m.entry[0]
    assert m.transitions[start] == (((0, None), (EXIT, 0)), ((1, None), (EXIT, 1)))
    for s in B.valuations():
        assert len(m.transitions[m.entry[s]]) == 2


def test_assign_machine():
    m = build_ioi(Assign("b", Not(Var("b"))), B)
    assert m.transitions[m.entry[0]] == ((INTERNAL, (EXIT, 1)),)


def test_atomic_machines_go_from_entry_to_exit():
    for p in [Input("b"), Output("b"), Assign("b", TRUE)]:
        m = build_ioi(p, B)
        for s in B.valuations():
            for _, target in m.transitions[m.entry[s]]:
                assert target[0] == EXIT


def _cycles_through(m, start):
    """Simple cycles reachable from ``start`` as lists of labels (tiny graphs only)."""
    out = []

    def walk(q, path, labels):
        for lab, r in m.transitions[q]:
            if r in path:
                out.append(labels[path.index(r):] + [lab])
            else:
                walk(r, path + [r], labels + [lab])

    walk(start, [start], [])
    return out


def test_echo_machine():
    m = build_ioi(P_ECHO, B)
    reach = m.reachable()
    assert all(q[0] != EXIT for q in reach)
    cycles = _cycles_through(m, m.initial)
    assert cycles
    for labels in cycles:
        kinds = ["in" if a is not None else "out" for a, _ in labels]
        assert "in" in kinds and "out" in kinds
        # inputs and outputs strictly alternate around every cycle
        assert all(x != y for x, y in zip(kinds, kinds[1:] + kinds[:1]))


def test_condition_without_atom_diverges():
    m = build_ioi(While(TRUE, While(FALSE, Output("b"))), B)
    assert m.initial == (DIVERGE, 0)
    assert m.transitions[m.initial] == ((INTERNAL, m.initial),)
    assert simulate(m, "", max_steps=5).status is Status.STEP_LIMIT


def test_if_resolves_without_transition():
    m = build_ioi(If(Var("b"), Input("b"), Output("b")), B)
    assert m.control_point_name(m.entry[0][0]) == "n2[output b]"
    assert m.control_point_name(m.entry[1][0]) == "n1[input b]"


@pytest.mark.parametrize(
    "p,inputs,max_steps,outputs,status",
    [
        (P_ECHO, "011", 10_000, "011", Status.INPUT_STARVED),
        (Input("b"), "1", 10_000, "", Status.TERMINATED),
        (SPIN, "", 10, "", Status.STEP_LIMIT),
        (P_NEG, "0110", 10_000, "1001", Status.INPUT_STARVED),
    ],
)
def test_simulate(p, inputs, max_steps, outputs, status):
    trace = simulate(p, inputs, max_steps, B)
    assert trace.output_word == outputs
    assert trace.status is status


def test_simulate_counts_steps():
    trace = simulate(SPIN, "", 10, B)
    assert trace.steps == 10 and trace.input_word == ""


def test_sat_examples():
    for p in [P_ECHO, P_NEG, Input("b"), SPIN]:
        for k in (0, 1, 2):
            assert oracle_sat(p, A_NONE, k, B) == (True, None)
    assert oracle_sat(P_ECHO, A_NEQ, 1, B)[0]
    ok, lasso = oracle_sat(P_NEG, A_NEQ, 1, B)
    assert not ok
    assert any(e.accepting for e in lasso.cycle)
    assert any(e.dst.nba == "q1" for e in lasso.stem + lasso.cycle)
    # the lasso is a path: consecutive edges connect and the cycle closes
    edges = lasso.stem + lasso.cycle
    for a, b in zip(edges, edges[1:]):
        assert a.dst == b.src
    assert lasso.cycle[-1].dst == lasso.cycle[0].src


def test_lasso_rendering():
    m = build_ioi(P_NEG, B)
    _, lasso = oracle_sat(m, A_NEQ, 1)
    text = format_lasso(lasso, m)
    assert text.startswith("stem:") and "\ncycle:\n" in text
    assert " *" in text and "q1" in text


def test_sat_ignores_runs_beyond_the_delay_bound():
    # two inputs per output: pending inputs grow without bound
    p = While(TRUE, Seq(Input("b"), Seq(Input("b"), Output("b"))))
    assert oracle_sat(p, A_ALL, 2, B)[0]
    assert not oracle_sat(P_ECHO, A_ALL, 1, B)[0]


@pytest.mark.parametrize(
    "p,expected",
    [(Input("b"), False), (SPIN, False), (LISTEN, False), (P_ECHO, True), (P_NEG, True)],
)
def test_reactive(p, expected):
    assert oracle_reactive(p, B) is expected


@pytest.mark.parametrize(
    "p,k,expected",
    [
        (P_ECHO, 1, True),
        (P_ECHO, 0, False),
        (Assign("b", Not(Var("b"))), 0, True),
        (SPIN, 0, True),
        (LISTEN, 3, False),
        (Seq(Input("b"), Input("b")), 1, False),
        (Seq(Input("b"), Input("b")), 2, True),
    ],
)
def test_delay(p, k, expected):
    assert oracle_delay(p, k, B) is expected


@pytest.mark.parametrize(
    "p,a,k,expected",
    [
        (P_ECHO, A_NEQ, 1, (True, True, True)),
        (P_NEG, A_NEQ, 1, (False, True, True)),
        (Input("b"), A_NONE, 1, (True, False, True)),
    ],
)
def test_verdict(p, a, k, expected):
    assert oracle_verdict(p, a, k, B) == expected


def test_variables_inferred_from_program():
    m = IoiMachine(P_ECHO, B)
    assert oracle_verdict(P_ECHO, A_NEQ, 1) == oracle_verdict(m, A_NEQ, 1)


def test_two_variable_echo():
    vars = VariableSet(("x", "y"))
    p = While(TRUE, Seq(Input("x"), Seq(Assign("y", Var("x")), Output("y"))))
    assert simulate(p, "0110", vars=vars).output_word == "0110"
    assert oracle_verdict(p, A_NEQ, 1, vars) == (True, True, True)

"""Small reference automata and programs used throughout tests and demos."""

from .nba import parse_nba
from .programs import (
    TRUE, Assign, Input, Not, Output, Seq, Var, VariableSet, While,
)

A_NONE_TEXT = """\
# empty language: every program satisfies the specification
states: q0
initial: q0
accepting:
"""

A_ALL_TEXT = """\
# universal language: the specification is empty
states: q0
initial: q0
accepting: q0
trans: q0 (0,0) q0
trans: q0 (0,1) q0
trans: q0 (1,0) q0
trans: q0 (1,1) q0
"""

A_NEQ_TEXT = """\
# accepts words with some position where the output differs from the input,
# i.e. the specification demands that every output echoes its input
states: q0 q1
initial: q0
accepting: q1
trans: q0 (0,0) q0
trans: q0 (1,1) q0
trans: q0 (0,1) q1
trans: q0 (1,0) q1
trans: q1 (0,0) q1
trans: q1 (0,1) q1
trans: q1 (1,0) q1
trans: q1 (1,1) q1
"""

A_NONE = parse_nba(A_NONE_TEXT)
A_ALL = parse_nba(A_ALL_TEXT)
A_NEQ = parse_nba(A_NEQ_TEXT)
AUTOMATA = {"A_none": A_NONE, "A_all": A_ALL, "A_neq": A_NEQ}

B = VariableSet(("b",))

P_ECHO = While(TRUE, Seq(Input("b"), Output("b")))
P_NEG = While(TRUE, Seq(Input("b"), Seq(Assign("b", Not(Var("b"))), Output("b"))))

P_ECHO_TEXT = "while true do {\n  input b ;\n  output b\n}"

"""Synthesis and checking of reactive programs over Boolean variables."""

from .errors import (
    ArityMismatch, MultipleInitial, ParseError, ReactSynthError, ResourceLimit,
    UndeclaredState, UnknownState, UnknownVariable,
)
from .ioi import (
    Status, TraceLabel, build_ioi, oracle_delay, oracle_reactive, oracle_sat,
    oracle_verdict, simulate,
)
from .nba import PairSymbol, SpecAutomaton, nba_successors, parse_nba, serialize_nba
from .programs import (
    FALSE, TRUE, And, Assign, Const, If, Input, Not, Or, Output, Seq, Var,
    VariableSet, While, canonical_expr, parse_expr, parse_program, render_expr,
    render_program,
)
from .signatures import (
    DtaState, Engine, Verdict, check_program_verdict, closure, engine_for,
    eval_program, verdict,
)
from .synthesis import (
    SynthesisOptions, Unrealizable, diagnostics, saturate, synthesize,
)

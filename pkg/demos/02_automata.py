"""Specification automata: parsing, serialization and successor queries."""

from reactsynth import nba_successors, parse_nba, serialize_nba
from reactsynth.fixtures import A_NEQ_TEXT

a = parse_nba(A_NEQ_TEXT)
print("states:", a.states, "initial:", a.initial, "accepting:", sorted(a.finals))
for sym in [(0, 0), (0, 1)]:
    print(f"q0 --{sym}--> {sorted(nba_successors(a, 'q0', sym))}")
print(serialize_nba(a))
assert parse_nba(serialize_nba(a)) == a

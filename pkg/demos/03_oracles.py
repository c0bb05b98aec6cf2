"""Explicit-state semantics: the IOI machine, simulation and trace oracles."""

from reactsynth import build_ioi, oracle_delay, oracle_reactive, oracle_sat, simulate
from reactsynth.fixtures import A_NEQ, B, P_ECHO, P_NEG
from reactsynth.ioi import format_lasso

m = build_ioi(P_ECHO, B)
print(f"echo machine: {len(m.states)} states")
print("simulate echo on 0110:", simulate(P_ECHO, "0110", vars=B))

for name, p in [("echo", P_ECHO), ("neg", P_NEG)]:
    ok, lasso = oracle_sat(p, A_NEQ, 1, B)
    print(f"{name}: sat={ok} reactive={oracle_reactive(p, B)} delay<=1={oracle_delay(p, 1, B)}")
    if lasso is not None:
        print("  violating behaviour:", format_lasso(lasso, build_ioi(p, B)))

# the echo program needs one pending input, so delay 0 is too tight
print("echo delay<=0:", oracle_delay(P_ECHO, 0, B))

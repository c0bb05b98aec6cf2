"""Compositional checking: program signatures and their verdicts."""

from reactsynth import check_program_verdict, engine_for
from reactsynth.fixtures import A_NEQ, B, P_ECHO, P_NEG
from reactsynth.ioi import oracle_verdict

engine = engine_for(B, A_NEQ, 1)
print(engine.dump(engine.eval(P_ECHO)))

for name, p in [("echo", P_ECHO), ("neg", P_NEG)]:
    for k in (0, 1, 2):
        v = check_program_verdict(p, A_NEQ, k, B)
        assert tuple(v) == oracle_verdict(p, A_NEQ, k, B)
        print(f"{name} k={k}: {v}")

"""Synthesis of height-minimal programs and unrealizability proofs."""

import time

from reactsynth import SynthesisOptions, Unrealizable, render_program, synthesize
from reactsynth.fixtures import AUTOMATA, B

for name in sorted(AUTOMATA):
    for k in (0, 1, 2):
        start = time.perf_counter()
        result = synthesize(B, AUTOMATA[name], k)
        shown = render_program(result).replace("\n", " ") if not isinstance(result, Unrealizable) else str(result)
        print(f"{name} k={k}: {shown} ({time.perf_counter() - start:.1f}s)")

# a height bound turns the search into a bounded one
print(synthesize(B, AUTOMATA["A_neq"], 1, SynthesisOptions(max_height=2)))

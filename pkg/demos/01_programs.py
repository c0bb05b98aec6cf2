"""Parse, render and canonicalize structured reactive programs."""

from reactsynth.programs import sem_expr
from reactsynth import VariableSet, canonical_expr, parse_expr, parse_program, render_expr, render_program

V = VariableSet(("a", "b"))

text = "while a || !a do { input a ; if a && b then { b := !b } else { output b } }"
p = parse_program(text, V)
print("parsed tree:", p)
print("rendered:")
print(render_program(p))
assert parse_program(render_program(p), V) == p

# canonical expressions identify conditions by their Boolean function
for e in ["a || !a", "!!b", "b && a"]:
    print(f"{e!r:12} -> {render_expr(canonical_expr(sem_expr(parse_expr(e, V), V), V))}")

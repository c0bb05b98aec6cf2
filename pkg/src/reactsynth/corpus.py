"""Exhaustive enumeration of small programs."""

from __future__ import annotations

from typing import Iterator, Sequence

from .programs import (
    FALSE, TRUE, Assign, Expr, If, Input, Not, Output, Prog, Seq, Var,
    VariableSet, While,
)


def default_pool(vars: VariableSet) -> list[Expr]:
    """Constants plus every variable and its negation."""
    pool: list[Expr] = [TRUE, FALSE]
    for name in vars.names:
        pool += [Var(name), Not(Var(name))]
    return pool


def atoms(vars: VariableSet, exprs: Sequence[Expr]) -> list[Prog]:
    result: list[Prog] = []
    for name in vars.names:
        result += [Input(name), Output(name)]
        result += [Assign(name, e) for e in exprs]
    return result


def programs_by_size(vars: VariableSet, exprs: Sequence[Expr], max_size: int) -> list[list[Prog]]:
    """``levels[n]`` holds every program with exactly ``n`` statement nodes.

    Subtrees are shared between levels, so memory stays proportional to the
    number of programs rather than their total size.
    """
    levels: list[list[Prog]] = [[], atoms(vars, exprs)]
    for n in range(2, max_size + 1):
        level = [While(e, body) for e in exprs for body in levels[n - 1]]
        for i in range(1, n - 1):
            for a in levels[i]:
                for b in levels[n - 1 - i]:
                    level.append(Seq(a, b))
                    level.extend(If(e, a, b) for e in exprs)
        levels.append(level)
    return levels


def enumerate_programs(vars: VariableSet, exprs: Sequence[Expr], max_size: int) -> Iterator[Prog]:
    for level in programs_by_size(vars, exprs, max_size):
        yield from level


def programs_by_height(vars: VariableSet, exprs: Sequence[Expr], max_height: int) -> list[list[Prog]]:
    """``levels[h]`` holds every program whose statement tree has height exactly ``h``."""
    levels: list[list[Prog]] = [[], atoms(vars, exprs)]
    for h in range(2, max_height + 1):
        below = [p for level in levels[:h - 1] for p in level]
        top = levels[h - 1]
        both = below + top
        level = [While(e, body) for e in exprs for body in top]
        pairs = [(a, b) for a in top for b in both] + [(a, b) for a in below for b in top]
        for a, b in pairs:
            level.append(Seq(a, b))
            level.extend(If(e, a, b) for e in exprs)
        levels.append(level)
    return levels

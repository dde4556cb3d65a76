"""Reduction of guarded recursive specifications to linear ones.

The algorithm keeps a FIFO worklist of pending equations `X_k = <closed
term>`.  Each stage pops the first entry, brings its closed term into head
normal form, emits a linear equation whose continuations are variables for
the branch successor terms, and enqueues any successor not seen before.
Successor terms are recognized by structural equality, so a process whose
reachable closed-term graph is finite yields a finite linear specification;
disabling memoization (`memo=False`) instead allocates one fresh variable per
branch, which runs the literal countably-infinite construction up to the
state budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from .comm import CommFn
from .rewrite import DEFAULT_FUEL, head_normal_form
from .terms import (
    Action,
    Rec,
    RecSpec,
    Seq,
    Term,
    ValidatedSpec,
    Var,
    sum_terms,
)


class LinearizeError(Exception):
    pass


class StateBudgetExceeded(LinearizeError):
    def __init__(self, max_states: int):
        super().__init__(f"linearization exceeded the budget of {max_states} states")
        self.max_states = max_states


@dataclass(frozen=True)
class LinearizeStats:
    stages: int
    equations: int
    merged_branches: int


@dataclass(frozen=True)
class LinearizationResult:
    spec: RecSpec  # linear; every rhs variable is defined
    root: str
    state_map: tuple  # tuple of (variable, closed Term it denotes)
    stats: LinearizeStats
    traces: tuple = ()  # per-stage (variable, axiom trace), only when requested

    def state_term(self, var: str) -> Term:
        for name, t in self.state_map:
            if name == var:
                return t
        raise KeyError(var)


VAR_PREFIX = "X"


def linearize(
    validated: ValidatedSpec,
    root: str,
    comm: CommFn,
    max_states: int = 10000,
    memo: bool = True,
    fuel: int = DEFAULT_FUEL,
    keep_traces: bool = False,
) -> LinearizationResult:
    """Produce a linear specification bisimilar to `<root | spec>`.

    Variables are numbered X0, X1, ... in allocation order (breadth-first),
    so identical inputs give identical outputs.  Raises StateBudgetExceeded
    when more than `max_states` variables would be needed.
    """
    spec = validated.spec
    if root not in spec.variables():
        raise KeyError(f"root {root!r} is not defined by the specification")
    if max_states < 1:
        raise ValueError("max_states must be at least 1")

    root_term = Rec(root, spec)
    names = {}  # closed term -> generated variable (memo mode only)
    state_map = []  # (variable, closed term), allocation order
    counter = 0

    def allocate(term: Term) -> str:
        nonlocal counter
        if counter >= max_states:
            raise StateBudgetExceeded(max_states)
        name = f"{VAR_PREFIX}{counter}"
        counter += 1
        if memo:
            names[term] = name
        state_map.append((name, term))
        return name

    worklist = [(allocate(root_term), root_term)]
    emitted = []
    traces = []
    stages = 0
    merged = 0

    while worklist:
        var, term = worklist.pop(0)
        stages += 1
        hnf, trace = head_normal_form(term, comm, fuel)
        if keep_traces:
            traces.append((var, trace))
        branches = []
        seen_branches = set()
        for a, cont in hnf.branches:
            if (a, cont) in seen_branches:
                merged += 1
                continue
            seen_branches.add((a, cont))
            succ = names.get(cont) if memo else None
            if succ is None:
                succ = allocate(cont)
                worklist.append((succ, cont))
            branches.append(Seq(Action(a), Var(succ)))
        terminals = []
        seen_terminals = set()
        for b in hnf.terminals:
            if b in seen_terminals:
                merged += 1
                continue
            seen_terminals.add(b)
            terminals.append(Action(b))
        emitted.append((var, sum_terms(branches + terminals)))

    return LinearizationResult(
        spec=RecSpec.of(emitted),
        root=f"{VAR_PREFIX}0",
        state_map=tuple(state_map),
        stats=LinearizeStats(stages=stages, equations=len(emitted), merged_branches=merged),
        traces=tuple(traces),
    )

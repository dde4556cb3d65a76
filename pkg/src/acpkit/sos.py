"""Structural operational semantics: one-step relations and reachable LTSs.

The step relation follows the operational rules: an action constant can
terminate with its action; sums union the behaviour of their operands;
sequential composition turns termination of the first operand into a step to
the second; the merge operators interleave and synchronize according to the
communication function; encapsulation filters; recursion constants behave as
their once-unfolded body.

Termination is modelled as action-labelled termination flags (`t` can do `a`
and then terminate successfully), not as edges to an extra tick state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .comm import DELTA, CommFn, gamma
from .terms import (
    Action,
    Alt,
    CommMerge,
    Encap,
    Inaction,
    LeftMerge,
    Par,
    Rec,
    Seq,
    Term,
    Var,
    subst_spec,
)

DEFAULT_UNFOLD_DEPTH = 10**4


class SosError(Exception):
    pass


class UnguardedRecursionDepth(SosError):
    def __init__(self, limit: int):
        super().__init__(
            f"exceeded {limit} nested recursion unfoldings without an action prefix"
        )
        self.limit = limit


class FreeVariableReached(SosError):
    def __init__(self, name: str):
        super().__init__(f"term is not closed: free variable {name!r}")
        self.name = name


def step_relation(t: Term, comm: CommFn, unfold_depth: int = DEFAULT_UNFOLD_DEPTH):
    """All one-step behaviour of a closed term.

    Returns (steps, term_acts): the set of (action, successor term) pairs and
    the set of actions with which the term can terminate immediately.
    """

    def go(u: Term, depth: int):
        if isinstance(u, Inaction):
            return set(), set()
        if isinstance(u, Action):
            return set(), {u.name}
        if isinstance(u, Var):
            raise FreeVariableReached(u.name)
        if isinstance(u, Alt):
            ls, lt = go(u.left, depth)
            rs, rt = go(u.right, depth)
            return ls | rs, lt | rt
        if isinstance(u, Seq):
            ls, lt = go(u.left, depth)
            steps = {(a, u.right) for a in lt}
            steps |= {(a, Seq(x, u.right)) for a, x in ls}
            return steps, set()
        if isinstance(u, Par):
            ls, lt = go(u.left, depth)
            rs, rt = go(u.right, depth)
            steps = {(a, u.right) for a in lt}
            steps |= {(a, u.left) for a in rt}
            steps |= {(a, Par(x, u.right)) for a, x in ls}
            steps |= {(a, Par(u.left, y)) for a, y in rs}
            term_acts = set()
            for a in lt:
                for b in rt:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        term_acts.add(c)
            for a in lt:
                for b, y in rs:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        steps.add((c, y))
            for a, x in ls:
                for b in rt:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        steps.add((c, x))
            for a, x in ls:
                for b, y in rs:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        steps.add((c, Par(x, y)))
            return steps, term_acts
        if isinstance(u, LeftMerge):
            ls, lt = go(u.left, depth)
            steps = {(a, u.right) for a in lt}
            steps |= {(a, Par(x, u.right)) for a, x in ls}
            return steps, set()
        if isinstance(u, CommMerge):
            ls, lt = go(u.left, depth)
            rs, rt = go(u.right, depth)
            steps = set()
            term_acts = set()
            for a in lt:
                for b in rt:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        term_acts.add(c)
            for a in lt:
                for b, y in rs:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        steps.add((c, y))
            for a, x in ls:
                for b in rt:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        steps.add((c, x))
            for a, x in ls:
                for b, y in rs:
                    c = gamma(comm, a, b)
                    if c is not DELTA:
                        steps.add((c, Par(x, y)))
            return steps, term_acts
        if isinstance(u, Encap):
            ls, lt = go(u.body, depth)
            steps = {(a, Encap(u.blocked, x)) for a, x in ls if a not in u.blocked}
            return steps, {a for a in lt if a not in u.blocked}
        if isinstance(u, Rec):
            if depth >= unfold_depth:
                raise UnguardedRecursionDepth(unfold_depth)
            return go(subst_spec(u.spec.rhs(u.var), u.spec), depth + 1)
        raise TypeError(f"not a term: {u!r}")

    try:
        return go(t, 0)
    except RecursionError:
        raise UnguardedRecursionDepth(unfold_depth) from None


@dataclass(frozen=True)
class Lts:
    """A finite labelled transition system over closed terms.

    State 0 is the root; states are pairwise structurally distinct terms.
    `truncated` records that exploration stopped at the state budget.
    """

    states: tuple  # tuple of Term
    edges: frozenset  # of (src index, action, dst index)
    terminations: frozenset  # of (state index, action)
    truncated: bool = False

    def successors(self, state: int):
        return {(a, dst) for src, a, dst in self.edges if src == state}

    def termination_actions(self, state: int) -> frozenset:
        return frozenset(a for s, a in self.terminations if s == state)


def generate_lts(
    t: Term,
    comm: CommFn,
    max_states: int = 10000,
    unfold_depth: int = DEFAULT_UNFOLD_DEPTH,
) -> Lts:
    """Breadth-first reachability closure of the step relation from `t`.

    States are identified by structural equality.  When the frontier would
    exceed `max_states`, the missing states (and the edges into them) are
    dropped and the result is marked truncated.
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    index = {t: 0}
    states = [t]
    edges = set()
    terminations = set()
    truncated = False
    queue = deque([0])
    while queue:
        i = queue.popleft()
        steps, term_acts = step_relation(states[i], comm, unfold_depth)
        for a in sorted(term_acts):
            terminations.add((i, a))
        for a, succ in sorted(steps, key=lambda s: (s[0], repr(s[1]))):
            j = index.get(succ)
            if j is None:
                if len(states) >= max_states:
                    truncated = True
                    continue
                j = len(states)
                index[succ] = j
                states.append(succ)
                queue.append(j)
            edges.add((i, a, j))
    return Lts(
        states=tuple(states),
        edges=frozenset(edges),
        terminations=frozenset(terminations),
        truncated=truncated,
    )


def export_lts(lts: Lts) -> str:
    """Line-oriented dump: a `states N` header, then edge and termination lines."""
    lines = [f"states {len(lts.states)}"]
    for src, a, dst in sorted(lts.edges):
        lines.append(f"edge {src} {a} {dst}")
    for s, a in sorted(lts.terminations):
        lines.append(f"term {s} {a}")
    if lts.truncated:
        lines.append("truncated")
    return "\n".join(lines) + "\n"


def export_aut(lts: Lts) -> str:
    """Aldebaran-style dump for external tools.

    Termination flags become edges labelled `a✓<action>` into one reserved
    final state appended after the ordinary states.
    """
    n = len(lts.states)
    has_final = bool(lts.terminations)
    edges = sorted(lts.edges)
    tick_edges = [(s, f"a✓{a}", n) for s, a in sorted(lts.terminations)]
    total_states = n + (1 if has_final else 0)
    total_edges = len(edges) + len(tick_edges)
    lines = [f"des (0, {total_edges}, {total_states})"]
    for src, a, dst in edges:
        lines.append(f'({src}, "{a}", {dst})')
    for src, label, dst in tick_edges:
        lines.append(f'({src}, "{label}", {dst})')
    return "\n".join(lines) + "\n"

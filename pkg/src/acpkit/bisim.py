"""Strong bisimilarity of LTS states.

Two deciders are provided: partition refinement (the production path) and a
naive greatest-fixpoint computation (a ground-truth oracle for tests).  Both
treat action-labelled termination flags as a third matching clause: related
states must be able to terminate with exactly the same actions.

When two states are not bisimilar, the refinement history is replayed into a
distinguishing experiment: a modal formula built from action steps (diamond),
conjunction, negation, and can-terminate-with atoms that holds of one state
and fails of the other.  A linear experiment is an iterated diamond; genuine
branching distinctions (`a.(b+c)` vs `a.b + a.c`) show up as a conjunction
under the last step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sos import Lts


class BisimError(Exception):
    pass


class InconclusiveTruncated(BisimError):
    def __init__(self):
        super().__init__("an input LTS was truncated; verdict would be unsound")


class BoundExceeded(BisimError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"naive oracle bound exceeded: {size} states > {bound}")


# -- distinguishing experiments ----------------------------------------------


@dataclass(frozen=True)
class CanTerm:
    """Atom: the state can terminate with this action."""

    action: str

    def render(self) -> str:
        return f"can-terminate-{self.action}"


@dataclass(frozen=True)
class Step:
    """The state has an `action` successor satisfying the sub-experiment."""

    action: str
    then: object

    def render(self) -> str:
        return f"<{self.action}> {self.then.render()}"


@dataclass(frozen=True)
class Not:
    sub: object

    def render(self) -> str:
        return f"not ({self.sub.render()})"


@dataclass(frozen=True)
class AllOf:
    parts: tuple

    def render(self) -> str:
        if not self.parts:
            return "true"
        return "(" + " and ".join(p.render() for p in self.parts) + ")"


def holds(lts: Lts, state: int, phi) -> bool:
    """Model-check a distinguishing experiment at a state."""
    if isinstance(phi, CanTerm):
        return phi.action in lts.termination_actions(state)
    if isinstance(phi, Step):
        return any(
            a == phi.action and holds(lts, dst, phi.then)
            for a, dst in lts.successors(state)
        )
    if isinstance(phi, Not):
        return not holds(lts, state, phi.sub)
    if isinstance(phi, AllOf):
        return all(holds(lts, state, p) for p in phi.parts)
    raise TypeError(f"not an experiment: {phi!r}")


# -- the disjoint union used by both deciders --------------------------------


class _Union:
    """Disjoint union of two LTSs with both query states re-indexed."""

    def __init__(self, l1: Lts, s1: int, l2: Lts, s2: int):
        if l1.truncated or l2.truncated:
            raise InconclusiveTruncated()
        off = len(l1.states)
        self.n = off + len(l2.states)
        self.s1 = s1
        self.s2 = off + s2
        self.succ = [[] for _ in range(self.n)]
        for src, a, dst in sorted(l1.edges):
            self.succ[src].append((a, dst))
        for src, a, dst in sorted(l2.edges):
            self.succ[off + src].append((a, off + dst))
        self.terms = [frozenset() for _ in range(self.n)]
        for i in range(len(l1.states)):
            self.terms[i] = l1.termination_actions(i)
        for i in range(len(l2.states)):
            self.terms[off + i] = l2.termination_actions(i)


# -- partition refinement ----------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of state indices covering the whole (union) LTS."""

    blocks: tuple  # tuple of frozenset

    def block_of(self, state: int) -> int:
        for i, b in enumerate(self.blocks):
            if state in b:
                return i
        raise KeyError(state)


def _refine(u: _Union):
    """Run refinement to a fixpoint.

    Returns (history, final block index per state).  `history` is the list of
    per-round block assignments, starting with the initial
    termination-actions partition; assignments are canonical (blocks numbered
    by first occurrence), so the whole computation is deterministic.
    """

    def canonical(key_of):
        mapping = {}
        assign = []
        for s in range(u.n):
            k = key_of(s)
            if k not in mapping:
                mapping[k] = len(mapping)
            assign.append(mapping[k])
        return assign

    assign = canonical(lambda s: tuple(sorted(u.terms[s])))
    history = [assign]
    while True:
        prev = history[-1]

        def signature(s):
            return (prev[s], tuple(sorted({(a, prev[d]) for a, d in u.succ[s]})))

        new = canonical(signature)
        if new == prev:
            return history, prev
        history.append(new)


def _distinguish(u: _Union, history, s: int, t: int):
    """Experiment holding at `s` and failing at `t`, given that refinement
    separated them.  Recursion is on the first round that separates the pair,
    so the modal depth is minimal with respect to the refinement history."""
    round_idx = next(k for k, assign in enumerate(history) if assign[s] != assign[t])
    if round_idx == 0:
        only_s = u.terms[s] - u.terms[t]
        if only_s:
            return CanTerm(sorted(only_s)[0])
        return Not(CanTerm(sorted(u.terms[t] - u.terms[s])[0]))
    prev = history[round_idx - 1]
    # Find a move one side has into a prev-block the other cannot reach.
    for attacker, defender, negate in ((s, t, False), (t, s, True)):
        for a, s2 in u.succ[attacker]:
            reachable = [d for b, d in u.succ[defender] if b == a]
            if prev[s2] not in {prev[d] for d in reachable}:
                parts = tuple(
                    _distinguish(u, history, s2, d) for d in sorted(set(reachable))
                )
                body = parts[0] if len(parts) == 1 else AllOf(parts)
                phi = Step(a, body)
                return Not(phi) if negate else phi
    raise AssertionError("separated pair without a separating move")


def bisimilar(l1: Lts, s1: int, l2: Lts, s2: int):
    """Decide strong bisimilarity of two states by partition refinement.

    Returns (True, Partition) or (False, experiment) where the experiment
    holds at (l1, s1) and fails at (l2, s2).  Raises InconclusiveTruncated if
    either LTS was cut off at a state budget.
    """
    u = _Union(l1, s1, l2, s2)
    history, final = _refine(u)
    if final[u.s1] == final[u.s2]:
        nblocks = max(final) + 1
        blocks = [set() for _ in range(nblocks)]
        for state, b in enumerate(final):
            blocks[b].add(state)
        return True, Partition(tuple(frozenset(b) for b in blocks))
    witness = _distinguish(u, history, u.s1, u.s2)
    return False, witness


DEFAULT_NAIVE_BOUND = 2000


def bisimilar_naive(
    l1: Lts, s1: int, l2: Lts, s2: int, bound: int = DEFAULT_NAIVE_BOUND
) -> bool:
    """Greatest-fixpoint oracle: start from all pairs agreeing on termination
    actions, delete pairs with an unmatchable step until nothing changes."""
    u = _Union(l1, s1, l2, s2)
    if u.n > bound:
        raise BoundExceeded(u.n, bound)
    related = {
        (i, j) for i in range(u.n) for j in range(u.n) if u.terms[i] == u.terms[j]
    }

    def matched(i, j):
        for a, i2 in u.succ[i]:
            if not any(b == a and (i2, j2) in related for b, j2 in u.succ[j]):
                return False
        return True

    changed = True
    while changed:
        changed = False
        for pair in list(related):
            i, j = pair
            if not (matched(i, j) and matched(j, i)):
                related.discard(pair)
                changed = True
    return (u.s1, u.s2) in related


def render_witness(phi) -> str:
    return phi.render()

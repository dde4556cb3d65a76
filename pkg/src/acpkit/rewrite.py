"""Head normal forms by axiom-directed rewriting, with replayable traces.

A head normal form exposes exactly the first-step behaviour of a closed
guarded term: a sum of action-prefixed branches followed by a sum of
terminating actions (the empty sum being delta).  The computation proceeds by
structural induction: sums merge the sub-results, sequential composition
distributes over the left sub-result, the merge operators distribute via
their defining axioms with synchronization resolved by the communication
function, encapsulation filters, and recursion constants are unfolded once
and re-examined.

Every transformation is recorded as an axiom application at an explicit
position, so that replaying the trace from the input term reproduces the
result term exactly.  Constants in the axioms for the merge operators and
communication range over actions and delta alike (only the encapsulation
axioms carry side conditions), which is what licenses steps such as
``delta |_ x => delta . x`` via the left-merge prefix axiom.
"""

from __future__ import annotations

from dataclasses import dataclass

from .comm import DELTA, CommFn, gamma
from .terms import (
    Action,
    Alt,
    BINARY,
    CommMerge,
    Encap,
    Inaction,
    LeftMerge,
    Par,
    Rec,
    RecSpec,
    Seq,
    Term,
    Var,
    flatten_alt,
    subst_spec,
    sum_terms,
)

DEFAULT_FUEL = 10**6


class RewriteError(Exception):
    pass


class FuelExhausted(RewriteError):
    def __init__(self, fuel: int):
        super().__init__(f"head normal form computation exceeded {fuel} axiom steps")
        self.fuel = fuel


class UnguardedTerm(RewriteError):
    def __init__(self, name: str):
        super().__init__(f"reached free variable {name!r}; term is not closed/guarded")
        self.name = name


class ReplayError(RewriteError):
    pass


@dataclass(frozen=True)
class AxiomStep:
    """One axiom application: the subterm at `path` was `before`, is `after`."""

    axiom: str
    path: tuple
    before: Term
    after: Term


@dataclass(frozen=True)
class HeadNormalForm:
    """Sum of (action, continuation) branches plus terminating actions.

    Both empty denotes delta.  Order is derivation order; duplicates are kept.
    """

    branches: tuple  # tuple of (action name, Term)
    terminals: tuple  # tuple of action names

    def is_deadlock(self) -> bool:
        return not self.branches and not self.terminals


def hnf_to_term(h: HeadNormalForm) -> Term:
    """The term a head normal form denotes: branches first, then terminals."""
    parts = [Seq(Action(a), t) for a, t in h.branches]
    parts += [Action(b) for b in h.terminals]
    return sum_terms(parts)


def subterm_at(t: Term, path: tuple) -> Term:
    for i in path:
        if isinstance(t, BINARY):
            t = t.left if i == 0 else t.right
        elif isinstance(t, Encap) and i == 0:
            t = t.body
        else:
            raise ReplayError(f"path {path} does not address a subterm")
    return t


def replace_at(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(t, BINARY):
        if i == 0:
            return type(t)(replace_at(t.left, rest, new), t.right)
        return type(t)(t.left, replace_at(t.right, rest, new))
    if isinstance(t, Encap) and i == 0:
        return Encap(t.blocked, replace_at(t.body, rest, new))
    raise ReplayError(f"path {path} does not address a subterm")


def replay(t: Term, trace) -> Term:
    """Re-apply a trace to its input term, checking each step's snapshot."""
    for step in trace:
        found = subterm_at(t, step.path)
        if found != step.before:
            raise ReplayError(
                f"trace step {step.axiom} @ {step.path}: expected {step.before!r}, "
                f"found {found!r}"
            )
        t = replace_at(t, step.path, step.after)
    return t


def _const_name(t: Term):
    """The action name of a constant, with DELTA for inaction; None otherwise."""
    if isinstance(t, Action):
        return t.name
    if isinstance(t, Inaction):
        return DELTA
    return False


def _is_constant(t: Term) -> bool:
    return isinstance(t, (Action, Inaction))


def _is_part(t: Term) -> bool:
    """A canonical summand: an action constant or an action-prefixed term."""
    return isinstance(t, Action) or (isinstance(t, Seq) and isinstance(t.left, Action))


class _Rewriter:
    """Holds the whole current term and the growing trace; all rewriting is
    done through `step`, which keeps the two in sync."""

    def __init__(self, term: Term, comm: CommFn, fuel: int):
        self.term = term
        self.comm = comm
        self.fuel = fuel
        self.steps = []

    def at(self, path: tuple) -> Term:
        return subterm_at(self.term, path)

    def step(self, axiom: str, path: tuple, after: Term) -> None:
        if len(self.steps) >= self.fuel:
            raise FuelExhausted(self.fuel)
        before = subterm_at(self.term, path)
        self.steps.append(AxiomStep(axiom, path, before, after))
        self.term = replace_at(self.term, path, after)

    # -- normalization to canonical head-normal shape ------------------------

    def normalize(self, path: tuple) -> None:
        t = self.at(path)
        if isinstance(t, (Inaction, Action)):
            return
        if isinstance(t, Var):
            raise UnguardedTerm(t.name)
        if isinstance(t, Seq):
            if isinstance(t.left, Action):
                return  # already an action-prefixed summand
            self.normalize(path + (0,))
            self.dist_seq(path)
            return
        if isinstance(t, Alt):
            self.normalize(path + (0,))
            self.normalize(path + (1,))
            self.combine_alt(path)
            return
        if isinstance(t, LeftMerge):
            self.normalize(path + (0,))
            self.dist_left_merge(path)
            return
        if isinstance(t, CommMerge):
            self.normalize(path + (0,))
            self.normalize(path + (1,))
            self.dist_comm_merge(path)
            return
        if isinstance(t, Par):
            expansion = Alt(
                Alt(LeftMerge(t.left, t.right), LeftMerge(t.right, t.left)),
                CommMerge(t.left, t.right),
            )
            self.step("CM1", path, expansion)
            self.normalize(path)
            return
        if isinstance(t, Encap):
            self.normalize(path + (0,))
            self.dist_encap(path)
            return
        if isinstance(t, Rec):
            body = subst_spec(t.spec.rhs(t.var), t.spec)
            self.step("RDP", path, body)
            self.normalize(path)
            return
        raise TypeError(f"not a term: {t!r}")

    def combine_alt(self, path: tuple) -> None:
        """Merge two canonical children of a sum: drop delta summands and
        reassociate to a left-nested chain."""
        t = self.at(path)
        if isinstance(t.right, Inaction):
            self.step("A6", path, t.left)
            return
        if isinstance(t.left, Inaction):
            self.step("A1", path, Alt(t.right, t.left))
            self.step("A6", path, t.right)
            return
        if isinstance(t.right, Alt):
            rotated = Alt(Alt(t.left, t.right.left), t.right.right)
            self.step("A2", path, rotated)
            self.combine_alt(path + (0,))

    def dist_seq(self, path: tuple) -> None:
        t = self.at(path)
        left = t.left
        if isinstance(left, Inaction):
            self.step("A7", path, Inaction())
        elif isinstance(left, Action):
            pass
        elif isinstance(left, Seq):
            self.step("A5", path, Seq(left.left, Seq(left.right, t.right)))
        else:  # Alt
            self.step("A4", path, Alt(Seq(left.left, t.right), Seq(left.right, t.right)))
            self.dist_seq(path + (0,))
            self.dist_seq(path + (1,))

    def dist_left_merge(self, path: tuple) -> None:
        t = self.at(path)
        left = t.left
        if _is_constant(left):
            self.step("CM2", path, Seq(left, t.right))
            if isinstance(left, Inaction):
                self.step("A7", path, Inaction())
        elif isinstance(left, Seq):
            self.step("CM3", path, Seq(left.left, Par(left.right, t.right)))
        else:  # Alt
            self.step(
                "CM4", path, Alt(LeftMerge(left.left, t.right), LeftMerge(left.right, t.right))
            )
            self.dist_left_merge(path + (0,))
            self.dist_left_merge(path + (1,))

    def _apply_cf(self, path: tuple) -> None:
        """Resolve a communication merge of two constants via the table."""
        t = self.at(path)
        result = gamma(self.comm, _const_name(t.left), _const_name(t.right))
        self.step("CF", path, Inaction() if result is DELTA else Action(result))

    def dist_comm_merge(self, path: tuple) -> None:
        t = self.at(path)
        left, right = t.left, t.right
        if isinstance(left, Alt):
            self.step(
                "CM8", path, Alt(CommMerge(left.left, right), CommMerge(left.right, right))
            )
            self.dist_comm_merge(path + (0,))
            self.dist_comm_merge(path + (1,))
            self.combine_alt(path)
        elif isinstance(right, Alt):
            self.step(
                "CM9", path, Alt(CommMerge(left, right.left), CommMerge(left, right.right))
            )
            self.dist_comm_merge(path + (0,))
            self.dist_comm_merge(path + (1,))
            self.combine_alt(path)
        elif _is_constant(left) and _is_constant(right):
            self._apply_cf(path)
        elif _is_constant(left):  # right is a prefix
            self.step("CM6", path, Seq(CommMerge(left, right.left), right.right))
            self._apply_cf(path + (0,))
            self.dist_seq(path)
        elif _is_constant(right):  # left is a prefix
            self.step("CM5", path, Seq(CommMerge(left.left, right), left.right))
            self._apply_cf(path + (0,))
            self.dist_seq(path)
        else:  # both prefixes
            self.step(
                "CM7",
                path,
                Seq(CommMerge(left.left, right.left), Par(left.right, right.right)),
            )
            self._apply_cf(path + (0,))
            self.dist_seq(path)

    def dist_encap(self, path: tuple) -> None:
        t = self.at(path)
        body, blocked = t.body, t.blocked
        if isinstance(body, Inaction):
            self.step("D1", path, body)
        elif isinstance(body, Action):
            if body.name in blocked:
                self.step("D2", path, Inaction())
            else:
                self.step("D1", path, body)
        elif isinstance(body, Seq):
            self.step(
                "D4", path, Seq(Encap(blocked, body.left), Encap(blocked, body.right))
            )
            self.dist_encap(path + (0,))
            self.dist_seq(path)
        else:  # Alt
            self.step("D3", path, Alt(Encap(blocked, body.left), Encap(blocked, body.right)))
            self.dist_encap(path + (0,))
            self.dist_encap(path + (1,))
            self.combine_alt(path)

    # -- summand ordering ----------------------------------------------------

    def reorder_summands(self) -> None:
        """Bubble terminal summands after branch summands, stably, using
        commutativity/associativity steps on the left-nested chain."""
        parts = flatten_alt(self.term) if not isinstance(self.term, Inaction) else []
        n = len(parts)
        changed = True
        while changed:
            changed = False
            for i in range(n - 1):
                if isinstance(parts[i], Action) and isinstance(parts[i + 1], Seq):
                    self._swap_adjacent(parts, i)
                    changed = True

    def _swap_adjacent(self, parts: list, i: int) -> None:
        n = len(parts)
        pair_path = (0,) * (n - i - 2)
        if i == 0:
            node = self.at(pair_path)
            self.step("A1", pair_path, Alt(node.right, node.left))
        else:
            node = self.at(pair_path)  # Alt(Alt(prefix, p_i), p_{i+1})
            prefix = node.left.left
            self.step("A2", pair_path, Alt(prefix, Alt(node.left.right, node.right)))
            inner = self.at(pair_path + (1,))
            self.step("A1", pair_path + (1,), Alt(inner.right, inner.left))
            node = self.at(pair_path)
            self.step("A2", pair_path, Alt(Alt(node.left, node.right.left), node.right.right))
        parts[i], parts[i + 1] = parts[i + 1], parts[i]


def head_normal_form(t: Term, comm: CommFn, fuel: int = DEFAULT_FUEL):
    """Bring a closed guarded term into head normal form.

    Returns (HeadNormalForm, trace).  Replaying the trace on `t` yields
    exactly `hnf_to_term` of the result.  Raises UnguardedTerm on free
    variables and FuelExhausted when the step budget runs out (which, for
    validated guarded input, it does not).
    """
    rw = _Rewriter(t, comm, fuel)
    try:
        rw.normalize(())
        rw.reorder_summands()
    except RecursionError:
        raise FuelExhausted(fuel) from None
    final = rw.term
    branches = []
    terminals = []
    if not isinstance(final, Inaction):
        for part in flatten_alt(final):
            if isinstance(part, Action):
                terminals.append(part.name)
            else:
                branches.append((part.left.name, part.right))
    h = HeadNormalForm(branches=tuple(branches), terminals=tuple(terminals))
    return h, tuple(rw.steps)


def render_trace(trace) -> str:
    """One step per line: `<axiom> @ <path>: <before> => <after>`."""
    from .syntax import pretty_term

    lines = []
    for s in trace:
        where = ".".join(str(i) for i in s.path) or "root"
        lines.append(f"{s.axiom} @ {where}: {pretty_term(s.before)} => {pretty_term(s.after)}")
    return "\n".join(lines)

"""Term and recursive-specification representation for ACP with guarded recursion.

Terms are immutable trees built from the action and inaction constants, the
binary composition operators, encapsulation, process variables, and recursion
constants that carry their defining specification inline.  Structural equality
(and hashing) is the identity used everywhere else in the toolkit, notably as
the memoization key of the linearizer and the state identity of generated
transition systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class SpecError(Exception):
    """Base class for specification validation failures."""


class DuplicateLhs(SpecError):
    def __init__(self, name: str):
        super().__init__(f"duplicate left-hand variable {name!r}")
        self.name = name


class UnboundVariable(SpecError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} is not defined by the specification")
        self.name = name


class UnguardedAfterBudget(SpecError):
    def __init__(self, name: str, budget: int):
        super().__init__(
            f"right-hand side of {name!r} not guarded after {budget} unfolding rounds"
        )
        self.name = name
        self.budget = budget


@dataclass(frozen=True)
class Term:
    """Abstract base node; concrete node classes below."""

    __slots__ = ()


@dataclass(frozen=True)
class Inaction(Term):
    """The deadlock constant: the process that cannot do anything."""

    __slots__ = ()

    def __repr__(self):
        return "delta"


@dataclass(frozen=True)
class Action(Term):
    """An atomic action constant: performs the action, then terminates."""

    __slots__ = ("name",)
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Var(Term):
    """A process variable (only meaningful inside a specification)."""

    __slots__ = ("name",)
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Alt(Term):
    """Alternative composition: behaves as one operand or the other."""

    __slots__ = ("left", "right")
    left: Term
    right: Term


@dataclass(frozen=True)
class Seq(Term):
    """Sequential composition: the right operand runs after the left terminates."""

    __slots__ = ("left", "right")
    left: Term
    right: Term


@dataclass(frozen=True)
class Par(Term):
    """Parallel composition (free merge with communication)."""

    __slots__ = ("left", "right")
    left: Term
    right: Term


@dataclass(frozen=True)
class LeftMerge(Term):
    """Parallel composition that must start with a step of the left operand."""

    __slots__ = ("left", "right")
    left: Term
    right: Term


@dataclass(frozen=True)
class CommMerge(Term):
    """Parallel composition that must start with a synchronized step."""

    __slots__ = ("left", "right")
    left: Term
    right: Term


@dataclass(frozen=True)
class Encap(Term):
    """Encapsulation: blocks the actions in `blocked`."""

    __slots__ = ("blocked", "body")
    blocked: frozenset
    body: Term


@dataclass(frozen=True)
class RecSpec:
    """A recursive specification: an ordered map from variables to terms.

    Equality is structural and order-sensitive; left-hand variables must be
    pairwise distinct.
    """

    equations: tuple  # tuple of (str, Term)

    def __post_init__(self):
        seen = set()
        for name, _ in self.equations:
            if name in seen:
                raise DuplicateLhs(name)
            seen.add(name)

    @classmethod
    def of(cls, pairs: Iterable) -> "RecSpec":
        return cls(tuple((name, rhs) for name, rhs in pairs))

    def variables(self) -> frozenset:
        return frozenset(name for name, _ in self.equations)

    def rhs(self, name: str) -> Term:
        for lhs, rhs in self.equations:
            if lhs == name:
                return rhs
        raise UnboundVariable(name)

    def __iter__(self) -> Iterator:
        return iter(self.equations)

    def __len__(self) -> int:
        return len(self.equations)


@dataclass(frozen=True)
class Rec(Term):
    """The recursion constant: the `var` component of the unique solution of `spec`."""

    __slots__ = ("var", "spec")
    var: str
    spec: RecSpec

    def __post_init__(self):
        if self.var not in self.spec.variables():
            raise UnboundVariable(self.var)


BINARY = (Alt, Seq, Par, LeftMerge, CommMerge)


def free_vars(t: Term) -> frozenset:
    """Variables with at least one free occurrence in `t`.

    Occurrences of a specification's own variables inside a recursion constant
    are bound by that specification.
    """
    if isinstance(t, (Inaction, Action)):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, BINARY):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, Encap):
        return free_vars(t.body)
    if isinstance(t, Rec):
        bound = t.spec.variables()
        inner = frozenset()
        for _, rhs in t.spec:
            inner |= free_vars(rhs)
        return inner - bound
    raise TypeError(f"not a term: {t!r}")


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def subst_spec(t: Term, spec: RecSpec) -> Term:
    """Replace every free occurrence of each specification variable X in `t`
    by the recursion constant for X, leaving all other structure intact."""
    targets = spec.variables()

    def go(u: Term, shadowed: frozenset) -> Term:
        if isinstance(u, (Inaction, Action)):
            return u
        if isinstance(u, Var):
            if u.name in targets and u.name not in shadowed:
                return Rec(u.name, spec)
            return u
        if isinstance(u, BINARY):
            left = go(u.left, shadowed)
            right = go(u.right, shadowed)
            if left is u.left and right is u.right:
                return u
            return type(u)(left, right)
        if isinstance(u, Encap):
            body = go(u.body, shadowed)
            return u if body is u.body else Encap(u.blocked, body)
        if isinstance(u, Rec):
            inner_bound = u.spec.variables()
            shadowed2 = shadowed | inner_bound
            new_eqs = tuple((name, go(rhs, shadowed2)) for name, rhs in u.spec)
            if all(a is b for (_, a), (_, b) in zip(new_eqs, u.spec.equations)):
                return u
            return Rec(u.var, RecSpec(new_eqs))
        raise TypeError(f"not a term: {u!r}")

    return go(t, frozenset())


def is_guarded(t: Term) -> bool:
    """True iff every free variable occurrence of `t` sits inside the right
    argument of a sequential composition whose left argument is an action
    constant."""

    def ok(u: Term, guarded: bool, bound: frozenset) -> bool:
        if isinstance(u, (Inaction, Action)):
            return True
        if isinstance(u, Var):
            return guarded or u.name in bound
        if isinstance(u, Seq):
            right_guarded = guarded or isinstance(u.left, Action)
            return ok(u.left, guarded, bound) and ok(u.right, right_guarded, bound)
        if isinstance(u, BINARY):
            return ok(u.left, guarded, bound) and ok(u.right, guarded, bound)
        if isinstance(u, Encap):
            return ok(u.body, guarded, bound)
        if isinstance(u, Rec):
            inner = bound | u.spec.variables()
            return all(ok(rhs, guarded, inner) for _, rhs in u.spec)
        raise TypeError(f"not a term: {u!r}")

    return ok(t, False, frozenset())


DEFAULT_UNFOLD_BUDGET = 16


@dataclass(frozen=True)
class ValidatedSpec:
    """A specification that passed `validate_spec`, together with the guarded
    right-hand sides obtained by unfolding (identical to the originals when no
    unfolding was needed)."""

    spec: RecSpec
    guarded_rhs: tuple  # tuple of (str, Term), guarded forms, same order
    unfold_rounds: int = 0

    def variables(self) -> frozenset:
        return self.spec.variables()


def _unfold_unguarded(t: Term, spec: RecSpec) -> Term:
    """One round: replace every unguarded free variable occurrence by its
    defining right-hand side."""

    def go(u: Term, guarded: bool, bound: frozenset) -> Term:
        if isinstance(u, (Inaction, Action)):
            return u
        if isinstance(u, Var):
            if guarded or u.name in bound:
                return u
            return spec.rhs(u.name)
        if isinstance(u, Seq):
            right_guarded = guarded or isinstance(u.left, Action)
            return Seq(go(u.left, guarded, bound), go(u.right, right_guarded, bound))
        if isinstance(u, BINARY):
            return type(u)(go(u.left, guarded, bound), go(u.right, guarded, bound))
        if isinstance(u, Encap):
            return Encap(u.blocked, go(u.body, guarded, bound))
        if isinstance(u, Rec):
            return u  # closed with respect to its own specification
        raise TypeError(f"not a term: {u!r}")

    return go(t, False, frozenset())


def validate_spec(spec: RecSpec, unfold_budget: int = DEFAULT_UNFOLD_BUDGET) -> ValidatedSpec:
    """Check well-formedness of a recursive specification.

    Every right-hand side must mention only defined variables and must be
    syntactically guarded, possibly after at most `unfold_budget` rounds of
    replacing unguarded variable occurrences by their defining terms.

    Raises DuplicateLhs, UnboundVariable or UnguardedAfterBudget.
    """
    defined = spec.variables()  # RecSpec construction already rejects duplicates
    for name, rhs in spec:
        loose = free_vars(rhs) - defined
        if loose:
            raise UnboundVariable(sorted(loose)[0])

    guarded = []
    rounds_used = 0
    for name, rhs in spec:
        current = rhs
        rounds = 0
        while not is_guarded(current):
            if rounds >= unfold_budget:
                raise UnguardedAfterBudget(name, unfold_budget)
            current = _unfold_unguarded(current, spec)
            rounds += 1
        guarded.append((name, current))
        rounds_used = max(rounds_used, rounds)
    return ValidatedSpec(spec=spec, guarded_rhs=tuple(guarded), unfold_rounds=rounds_used)


def is_linear_term(t: Term) -> bool:
    """Membership in the linear-term grammar: delta, a, a.X, and sums thereof."""
    if isinstance(t, (Inaction, Action)):
        return True
    if isinstance(t, Seq):
        return isinstance(t.left, Action) and isinstance(t.right, Var)
    if isinstance(t, Alt):
        return is_linear_term(t.left) and is_linear_term(t.right)
    return False


def is_linear_spec(spec: RecSpec) -> bool:
    return all(is_linear_term(rhs) for _, rhs in spec)


def sum_terms(ts) -> Term:
    """Left-nested sum of a sequence of terms; the empty sum is delta."""
    ts = list(ts)
    if not ts:
        return Inaction()
    acc = ts[0]
    for t in ts[1:]:
        acc = Alt(acc, t)
    return acc


def flatten_alt(t: Term) -> list:
    """The summand list of a (possibly nested) alternative composition."""
    if isinstance(t, Alt):
        return flatten_alt(t.left) + flatten_alt(t.right)
    return [t]

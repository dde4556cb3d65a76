"""The communication function: which pairs of actions synchronize, and to what.

The function is total on actions-plus-delta: pairs not listed in the table
yield delta, delta absorbs everything, and the table is keyed by unordered
pairs so commutativity holds by construction.  Associativity is a genuine
constraint and is checked by brute force over all triples.
"""

from __future__ import annotations

from dataclasses import dataclass

#: Stand-in for delta in communication-function positions.
DELTA = None


class CommError(Exception):
    pass


class UnknownAction(CommError):
    def __init__(self, name):
        super().__init__(f"action {name!r} is not in the declared alphabet")
        self.name = name


class NotAssociative(CommError):
    def __init__(self, a, b, c, left, right):
        def show(x):
            return "delta" if x is DELTA else x

        super().__init__(
            f"gamma(gamma({show(a)},{show(b)}),{show(c)}) = {show(left)} "
            f"!= {show(right)} = gamma({show(a)},gamma({show(b)},{show(c)}))"
        )
        self.triple = (a, b, c)
        self.results = (left, right)


@dataclass(frozen=True)
class CommFn:
    """Communication table over a finite alphabet.

    `table` holds unordered pairs {a, b} (singletons for a = b) with their
    non-delta result; pairs mapping to delta are simply absent.
    """

    alphabet: frozenset
    table: tuple = ()  # sorted tuple of (frozenset pair, result action)

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.table))

    @classmethod
    def of(cls, alphabet, entries=()) -> "CommFn":
        """Build from an iterable of (a, b, result) triples; a DELTA result is
        equivalent to omitting the entry."""
        alphabet = frozenset(alphabet)
        table = {}
        for a, b, c in entries:
            for x in (a, b):
                if x not in alphabet:
                    raise UnknownAction(x)
            if c is not DELTA and c not in alphabet:
                raise UnknownAction(c)
            if c is not DELTA:
                table[frozenset((a, b))] = c
        ordered = sorted(table.items(), key=lambda kv: sorted(kv[0]))
        return cls(alphabet=alphabet, table=tuple(ordered))


def gamma(f: CommFn, a, b):
    """Result of synchronously performing `a` and `b`; DELTA when impossible."""
    if a is DELTA or b is DELTA:
        return DELTA
    if a not in f.alphabet:
        raise UnknownAction(a)
    if b not in f.alphabet:
        raise UnknownAction(b)
    return f._map.get(frozenset((a, b)), DELTA)


def validate_comm(f: CommFn) -> None:
    """Check associativity over all triples of alphabet-plus-delta.

    Commutativity and delta absorption hold structurally; raises
    NotAssociative on the first violating triple (triples visited in sorted
    order, for deterministic diagnostics).
    """
    domain = [DELTA] + sorted(f.alphabet)
    for a in domain:
        for b in domain:
            ab = gamma(f, a, b)
            for c in domain:
                left = gamma(f, ab, c)
                right = gamma(f, a, gamma(f, b, c))
                if left != right:
                    raise NotAssociative(a, b, c, left, right)

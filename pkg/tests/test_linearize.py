import time

import pytest

from acpkit import (
    Action,
    Alt,
    Rec,
    RecSpec,
    Seq,
    StateBudgetExceeded,
    Var,
    bisimilar,
    generate_lts,
    is_linear_spec,
    linearize,
    validate_spec,
)
from acpkit.terms import free_vars

from gen import HANDSHAKE, random_guarded_spec, rng

A, B, C = Action("a"), Action("b"), Action("c")


def run(spec, root, **kw):
    return linearize(validate_spec(spec), root, HANDSHAKE, **kw)


class TestHandWorkedExamples:
    def test_single_loop(self):
        result = run(RecSpec.of([("X", Seq(A, Var("X")))]), "X")
        assert result.spec == RecSpec.of([("X0", Seq(A, Var("X0")))])
        assert result.root == "X0"

    def test_two_state_loop(self):
        spec = RecSpec.of([("X", Seq(A, Alt(Seq(B, Var("X")), C)))])
        result = run(spec, "X")
        assert result.spec == RecSpec.of(
            [
                ("X0", Seq(A, Var("X1"))),
                ("X1", Alt(Seq(B, Var("X0")), C)),
            ]
        )
        assert result.stats.stages == 2

    def test_already_linear_input_is_renamed_copy(self):
        spec = RecSpec.of(
            [("P", Alt(Seq(A, Var("Q")), B)), ("Q", Seq(C, Var("P")))]
        )
        result = run(spec, "P")
        renaming = {"P": "X0", "Q": "X1"}

        def rename(t):
            if isinstance(t, Var):
                return Var(renaming[t.name])
            if isinstance(t, (Alt, Seq)):
                return type(t)(rename(t.left), rename(t.right))
            return t

        expected = RecSpec.of((renaming[n], rename(rhs)) for n, rhs in spec)
        assert result.spec == expected


class TestBudgets:
    def test_infinite_state_process_is_reported(self):
        spec = RecSpec.of([("X", Seq(A, Seq(Var("X"), B)))])
        start = time.monotonic()
        with pytest.raises(StateBudgetExceeded):
            run(spec, "X", max_states=100)
        assert time.monotonic() - start < 1.0

    def test_no_memo_reproduces_unbounded_unrolling(self):
        spec = RecSpec.of([("X", Seq(A, Var("X")))])
        with pytest.raises(StateBudgetExceeded):
            run(spec, "X", max_states=100, memo=False)


class TestProperties:
    def test_random_specs(self):
        r = rng(41)
        for _ in range(100):
            spec = random_guarded_spec(r)
            root = spec.equations[0][0]
            result = run(spec, root)
            assert is_linear_spec(result.spec)
            defined = result.spec.variables()
            for _, rhs in result.spec:
                assert free_vars(rhs) <= defined
            original = generate_lts(Rec(root, spec), HANDSHAKE)
            linear = generate_lts(Rec(result.root, result.spec), HANDSHAKE)
            assert bisimilar(original, 0, linear, 0)[0]

    def test_state_map_soundness(self):
        r = rng(42)
        for _ in range(30):
            spec = random_guarded_spec(r)
            root = spec.equations[0][0]
            result = run(spec, root)
            for name, term in result.state_map:
                denoted = generate_lts(term, HANDSHAKE)
                as_var = generate_lts(Rec(name, result.spec), HANDSHAKE)
                assert bisimilar(denoted, 0, as_var, 0)[0]

    def test_deterministic(self):
        r = rng(43)
        for _ in range(30):
            spec = random_guarded_spec(r)
            root = spec.equations[0][0]
            assert run(spec, root) == run(spec, root)

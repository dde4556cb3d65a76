"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; all randomness is seeded, so the suite is reproducible.
"""

import time

from acpkit import (
    Action,
    Alt,
    CommMerge,
    Encap,
    Inaction,
    LeftMerge,
    Par,
    Rec,
    RecSpec,
    Seq,
    StateBudgetExceeded,
    Var,
    bisimilar,
    bisimilar_naive,
    gamma,
    generate_lts,
    head_normal_form,
    hnf_to_term,
    holds,
    is_linear_spec,
    linearize,
    parse,
    parse_term,
    pretty_spec_file,
    pretty_term,
    validate_spec,
)
from acpkit.cli import main as cli_main
from acpkit.comm import DELTA
from acpkit.terms import free_vars

from gen import (
    ALPHABET,
    HANDSHAKE,
    random_closed_guarded_term,
    random_closed_term,
    random_guarded_spec,
    random_lts,
    rng,
)
from test_syntax import random_printable_term

import pytest


def ok(message):
    print(f"PASS: {message}")


def lts(t, max_states=10000):
    return generate_lts(t, HANDSHAKE, max_states=max_states)


def equivalent(t, u):
    return bisimilar(lts(t), 0, lts(u), 0)[0]


# -- criterion 1: every axiom is sound for bisimilarity ----------------------


def _axiom_schemas():
    d = Inaction()

    def act(r):
        return Action(r.choice(ALPHABET))

    def const(r):  # constants range over actions and delta
        return d if r.random() < 0.2 else act(r)

    def encap_set(r):
        return frozenset(r.sample(ALPHABET, r.randint(1, 2)))

    def cf_rhs(r, a, b):
        g = gamma(HANDSHAKE, getattr(a, "name", DELTA), getattr(b, "name", DELTA))
        return d if g is DELTA else Action(g)

    return {
        "A1": lambda r, x, y, z: (Alt(x, y), Alt(y, x)),
        "A2": lambda r, x, y, z: (Alt(Alt(x, y), z), Alt(x, Alt(y, z))),
        "A3": lambda r, x, y, z: (Alt(x, x), x),
        "A4": lambda r, x, y, z: (Seq(Alt(x, y), z), Alt(Seq(x, z), Seq(y, z))),
        "A5": lambda r, x, y, z: (Seq(Seq(x, y), z), Seq(x, Seq(y, z))),
        "A6": lambda r, x, y, z: (Alt(x, d), x),
        "A7": lambda r, x, y, z: (Seq(d, x), d),
        "CM1": lambda r, x, y, z: (
            Par(x, y),
            Alt(Alt(LeftMerge(x, y), LeftMerge(y, x)), CommMerge(x, y)),
        ),
        "CM2": lambda r, x, y, z: (lambda a: (LeftMerge(a, x), Seq(a, x)))(const(r)),
        "CM3": lambda r, x, y, z: (lambda a: (LeftMerge(Seq(a, x), y), Seq(a, Par(x, y))))(
            act(r)
        ),
        "CM4": lambda r, x, y, z: (
            LeftMerge(Alt(x, y), z),
            Alt(LeftMerge(x, z), LeftMerge(y, z)),
        ),
        "CM5": lambda r, x, y, z: (
            lambda a, b: (CommMerge(Seq(a, x), b), Seq(CommMerge(a, b), x))
        )(act(r), const(r)),
        "CM6": lambda r, x, y, z: (
            lambda a, b: (CommMerge(a, Seq(b, x)), Seq(CommMerge(a, b), x))
        )(const(r), act(r)),
        "CM7": lambda r, x, y, z: (
            lambda a, b: (
                CommMerge(Seq(a, x), Seq(b, y)),
                Seq(CommMerge(a, b), Par(x, y)),
            )
        )(act(r), act(r)),
        "CM8": lambda r, x, y, z: (
            CommMerge(Alt(x, y), z),
            Alt(CommMerge(x, z), CommMerge(y, z)),
        ),
        "CM9": lambda r, x, y, z: (
            CommMerge(x, Alt(y, z)),
            Alt(CommMerge(x, y), CommMerge(x, z)),
        ),
        "CF": lambda r, x, y, z: (lambda a, b: (CommMerge(a, b), cf_rhs(r, a, b)))(
            const(r), const(r)
        ),
        "D1": lambda r, x, y, z: (
            lambda h: (lambda a: (Encap(h, a), a))(
                Action(r.choice([n for n in ALPHABET if n not in h]))
                if len(h) < len(ALPHABET)
                else d
            )
        )(encap_set(r)),
        "D2": lambda r, x, y, z: (
            lambda h: (Encap(h, Action(r.choice(sorted(h)))), d)
        )(encap_set(r)),
        "D3": lambda r, x, y, z: (
            lambda h: (Encap(h, Alt(x, y)), Alt(Encap(h, x), Encap(h, y)))
        )(encap_set(r)),
        "D4": lambda r, x, y, z: (
            lambda h: (Encap(h, Seq(x, y)), Seq(Encap(h, x), Encap(h, y)))
        )(encap_set(r)),
    }


def test_criterion_1_axiom_soundness():
    start = time.monotonic()
    schemas = _axiom_schemas()
    assert len(schemas) == 21  # A1-A7, CM1-CM9, CF, D1-D4
    r = rng(1001)
    for name, schema in schemas.items():
        for _ in range(200):
            x, y, z = (random_closed_term(r, 4) for _ in range(3))
            lhs, rhs = schema(r, x, y, z)
            assert equivalent(lhs, rhs), f"axiom {name} unsound for {pretty_term(lhs)}"
    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"axiom soundness took {elapsed:.1f}s"
    ok(f"criterion 1: 21 axioms x 200 instances all bisimilar ({elapsed:.1f}s)")


# -- criterion 2: head normal forms preserve meaning and traces replay -------


def test_criterion_2_hnf_preservation():
    from acpkit import replay

    r = rng(1002)
    for _ in range(500):
        t = random_closed_guarded_term(r)
        h, trace = head_normal_form(t, HANDSHAKE)
        back = hnf_to_term(h)
        assert replay(t, trace) == back
        assert equivalent(t, back)
    ok("criterion 2: 500 head normal forms bisimilar to input, traces replay exactly")


# -- criterion 3: linearizer output is linear, closed, and bisimilar ---------


def test_criterion_3_linearizer():
    r = rng(1003)
    for _ in range(200):
        spec = random_guarded_spec(r)
        root = spec.equations[0][0]
        result = linearize(validate_spec(spec), root, HANDSHAKE)
        assert is_linear_spec(result.spec)
        defined = result.spec.variables()
        assert all(free_vars(rhs) <= defined for _, rhs in result.spec)
        assert bisimilar(
            lts(Rec(root, spec)), 0, lts(Rec(result.root, result.spec)), 0
        )[0]
    golden_one = linearize(
        validate_spec(RecSpec.of([("X", Seq(Action("a"), Var("X")))])), "X", HANDSHAKE
    )
    assert golden_one.spec == RecSpec.of([("X0", Seq(Action("a"), Var("X0")))])
    two = RecSpec.of(
        [("X", Seq(Action("a"), Alt(Seq(Action("b"), Var("X")), Action("c"))))]
    )
    golden_two = linearize(validate_spec(two), "X", HANDSHAKE)
    assert golden_two.spec == RecSpec.of(
        [
            ("X0", Seq(Action("a"), Var("X1"))),
            ("X1", Alt(Seq(Action("b"), Var("X0")), Action("c"))),
        ]
    )
    ok("criterion 3: 200 random specs linearize correctly; goldens match")


# -- criterion 4: infinite-state inputs are reported, fast -------------------


def test_criterion_4_infinite_state_honesty():
    pushdown = validate_spec(
        RecSpec.of([("X", Seq(Action("a"), Seq(Var("X"), Action("b"))))])
    )
    start = time.monotonic()
    with pytest.raises(StateBudgetExceeded):
        linearize(pushdown, "X", HANDSHAKE, max_states=100)
    elapsed = time.monotonic() - start
    assert elapsed < 1.0

    loop = validate_spec(RecSpec.of([("X", Seq(Action("a"), Var("X")))]))
    with pytest.raises(StateBudgetExceeded):
        linearize(loop, "X", HANDSHAKE, max_states=100, memo=False)
    ok(f"criterion 4: state budgets reported honestly ({elapsed*1000:.0f}ms)")


# -- criterion 5: partition refinement agrees with the naive oracle ----------


def test_criterion_5_checker_equivalence():
    r = rng(1005)
    for _ in range(500):
        cap = r.choice((8, 8, 15, 25, 60, 100))
        l1, l2 = random_lts(r, max_states=cap), random_lts(r, max_states=cap)
        assert len(l1.states) + len(l2.states) <= 200
        s1, s2 = r.randrange(len(l1.states)), r.randrange(len(l2.states))
        verdict, witness = bisimilar(l1, s1, l2, s2)
        assert verdict == bisimilar_naive(l1, s1, l2, s2)
        if not verdict:
            assert holds(l1, s1, witness)
            assert not holds(l2, s2, witness)
    ok("criterion 5: 500 LTS pairs, refinement agrees with oracle, witnesses replay")


# -- criterion 6: expansion law ----------------------------------------------


def test_criterion_6_expansion_law():
    r = rng(1006)
    for _ in range(200):
        x, y = random_closed_term(r, 3), random_closed_term(r, 3)
        expansion = Alt(Alt(LeftMerge(x, y), LeftMerge(y, x)), CommMerge(x, y))
        assert equivalent(Par(x, y), expansion)
    ok("criterion 6: expansion law holds on 200 random pairs")


# -- criterion 7: one-level contexts preserve bisimilarity -------------------


def test_criterion_7_congruence():
    r = rng(1007)
    checked = 0
    while checked < 100:
        t1 = random_closed_guarded_term(r, 3)
        variant = r.choice(("hnf", "double", "plus_delta"))
        if variant == "hnf":
            t2 = hnf_to_term(head_normal_form(t1, HANDSHAKE)[0])
        elif variant == "double":
            t2 = Alt(t1, t1)
        else:
            t2 = Alt(t1, Inaction())
        assert equivalent(t1, t2)
        u = random_closed_term(r, 2)
        blocked = frozenset(r.sample(ALPHABET, 1))
        contexts = [
            lambda s: Alt(s, u),
            lambda s: Alt(u, s),
            lambda s: Seq(s, u),
            lambda s: Seq(u, s),
            lambda s: Par(s, u),
            lambda s: Par(u, s),
            lambda s: LeftMerge(s, u),
            lambda s: LeftMerge(u, s),
            lambda s: CommMerge(s, u),
            lambda s: CommMerge(u, s),
            lambda s: Encap(blocked, s),
        ]
        for ctx in contexts:
            assert equivalent(ctx(t1), ctx(t2))
        checked += 1
    ok("criterion 7: 100 bisimilar pairs preserved by all one-level contexts")


# -- criterion 8: round-trip and pipeline determinism ------------------------


def test_criterion_8_roundtrip_and_determinism(tmp_path, capsys):
    r = rng(1008)
    for _ in range(1000):
        t = random_printable_term(r)
        assert parse_term(pretty_term(t), ALPHABET) == t
    path = tmp_path / "pipeline.acp"
    path.write_text(
        "act a, b, c;\ncomm a | b = c;\n"
        "proc X = a . (b . X + c) + encap({a}, a || b);\nroot X;\n"
    )
    outputs = set()
    for _ in range(3):
        for args in (
            ["check", str(path)],
            ["linearize", str(path), "--stats", "--trace"],
            ["lts", str(path), "--format", "aut"],
            ["lts", str(path), "--format", "lts"],
        ):
            code = cli_main(args)
            out = capsys.readouterr().out
            outputs.add((args[1] if args[0] == "lts" else args[0], tuple(args), out, code))
    assert len(outputs) == 4
    linear_out = next(o for o in outputs if o[1][0] == "linearize")[2]
    assert is_linear_spec(parse(linear_out).processes)
    ok("criterion 8: 1000 round-trips exact; CLI pipeline byte-identical across runs")

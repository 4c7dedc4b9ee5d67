"""Built-in property suites behind the ``selftest`` CLI command.

Scaled-down versions of the acceptance properties, each printed as one
pass/fail line.  Seeds are fixed so the command is deterministic.
"""

from __future__ import annotations

import random
from typing import Callable

from .blowup import blowup_along, decompose_to_simple
from .errors import EngineError
from .lifting import lift_from_localization, lift_from_residue
from .rankone import Strategy, uniformize_rank_one
from .randgen import (
    random_composite_model,
    random_localization_ratio,
    random_member_query,
    random_model,
    random_residue_ratio,
    random_singular_plane_model,
)
from .ringmodel import (
    monomial_member,
    monomial_member_bruteforce,
    ring_equal,
)


def _blowup_factorization(trials: int) -> None:
    rng = random.Random(101)
    for _ in range(trials):
        R = random_model(rng)
        ideal = [g for g in R.gens if rng.random() < 0.7] or list(R.gens)
        step = blowup_along(R, ideal)
        chain = decompose_to_simple(step)
        final = chain[-1].result if chain else step.source
        assert ring_equal(final, step.result)


def _pivot_independence(trials: int) -> None:
    rng = random.Random(202)
    found = 0
    while found < trials:
        R = random_model(rng)
        ideal = list(R.gens)
        vals = sorted(R.val.value(u) for u in ideal)
        if len(ideal) < 2 or vals[0] != vals[1]:
            continue
        found += 1
        tied = [u for u in ideal if R.val.value(u) == vals[0]]
        results = []
        for pivot in tied[:2]:
            gens = tuple(R.gens) + tuple(
                tuple(a - b for a, b in zip(u, pivot)) for u in ideal if u != pivot
            )
            from .ringmodel import RingModel

            results.append(RingModel(dim=R.dim, gens=gens, val=R.val, inverted=R.inverted))
        assert ring_equal(results[0], results[1])


def _lift_invariants(trials: int) -> None:
    rng = random.Random(303)
    done = 0
    while done < trials:
        R, level = random_composite_model(rng)
        try:
            a, b = random_localization_ratio(rng, R, level)
            from .ringmodel import center_of, localize_at

            direct = blowup_along(localize_at(R, center_of(R, level)), [a, b])
            simple = direct if direct.is_simple else decompose_to_simple(direct)[0]
            lift_from_localization(R, level, simple)
            ratio = random_residue_ratio(rng, R, level)
            if ratio is not None:
                a2, b2 = ratio
                from .ringmodel import residue_ring

                bar = blowup_along(residue_ring(R, center_of(R, level)), [a2, b2])
                if bar.is_simple:
                    lift_from_residue(R, level, bar)
            done += 1
        except EngineError:
            continue


def _membership_oracle(trials: int) -> None:
    rng = random.Random(404)
    for _ in range(trials):
        R = random_model(rng, max_dim=3, max_gens=4, max_entry=4)
        q = random_member_query(rng, R)
        fast = monomial_member(q, R)
        slow = monomial_member_bruteforce(q, R, bound=8)
        assert (fast is None) == (slow is None), (R, q)
        if fast is not None:
            assert fast.is_exact() and slow.is_exact()


def _plane_termination(trials: int) -> None:
    rng = random.Random(505)
    for _ in range(trials):
        R = random_singular_plane_model(rng)
        outcome = uniformize_rank_one(R, Strategy(kind="pairmin", fuel=64))
        assert outcome.status == "done", R


def _fixture_round_trips() -> None:
    from pathlib import Path

    from .instances import parse_instance, trace_to_dict
    from .reduction import uniformize
    from .verify import verify_dict

    fixtures = Path(__file__).resolve().parents[2] / "fixtures"
    if not fixtures.is_dir():
        return
    for name in sorted(fixtures.glob("*.json")):
        inst = parse_instance(name)
        trace = uniformize(
            inst.model(), inst.mode, inst.targets, inst.strategy_obj()
        )
        report = verify_dict(trace_to_dict(inst, trace))
        assert report.valid, f"{name}: {report.failure}"


def run_selftest(trials: int = 25) -> bool:
    suites: list[tuple[str, Callable[[], None]]] = [
        ("blowup factorization matches one-shot", lambda: _blowup_factorization(trials)),
        ("tied pivots give equal rings", lambda: _pivot_independence(trials)),
        ("lifts satisfy their equalities", lambda: _lift_invariants(trials)),
        ("membership agrees with brute force", lambda: _membership_oracle(3 * trials)),
        ("plane models resolve under pairmin", lambda: _plane_termination(trials)),
        ("fixtures run and verify", _fixture_round_trips),
    ]
    ok = True
    for label, fn in suites:
        try:
            fn()
        except AssertionError as exc:
            ok = False
            print(f"fail  {label}: {exc}")
        except Exception as exc:  # pragma: no cover - defensive
            ok = False
            print(f"error {label}: {exc}")
        else:
            print(f"ok    {label}")
    return ok

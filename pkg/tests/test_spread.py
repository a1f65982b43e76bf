"""Spreads, signature classes and the two certifiers."""
import dataclasses
import itertools

import numpy as np
import pytest

from bubbletower.spread import (
    CertificateKind,
    CertificationError,
    LadderError,
    PartitionError,
    SpreadMember,
    StripLadder,
    build_spread,
    comparison_certify,
    load_flags_file,
    load_spread_file,
    partition,
    sigma,
    subcritical_slack_check,
    theorem1_certify,
    validate_spreading,
)
from bubbletower.spread.certify import pinching

SPREADS_DIR = "spreads"


@pytest.fixture
def spread_file(data_dir):
    return load_spread_file(data_dir / SPREADS_DIR / "two_member.toml")


@pytest.fixture
def spread(spread_file):
    return build_spread(
        spread_file.members,
        spread_file.ladder,
        spread_file.fixed_indices,
        spread_file.n,
        spread_file.energy_constant,
    )


@pytest.fixture
def flags(data_dir):
    return load_flags_file(data_dir / SPREADS_DIR / "two_member_flags.toml")


def test_ladder_validation():
    with pytest.raises(LadderError):
        StripLadder(lower=(1.0, 1.5), upper=(2.0, 2.5))

    with pytest.raises(LadderError):
        StripLadder(lower=(1.0,), upper=(0.5,))

    with pytest.raises(LadderError):
        StripLadder(lower=(0.0,), upper=(0.5,))

    with pytest.raises(LadderError):
        StripLadder(lower=(), upper=())

    ladder = StripLadder(lower=(0.5, 1.0), upper=(0.6, 1.2))
    assert ladder.strip_of(0.55) == 1
    assert ladder.strip_of(1.2) == 2
    assert ladder.strip_of(0.8) is None
    with pytest.raises(LadderError):
        ladder.bounds(3)


def test_member_signature(spread_file):
    first, second = spread_file.members
    assert first.ordered_points() == [0, 1]
    assert first.signature == frozenset({1, 2})
    assert second.signature == frozenset({1})

    with pytest.raises(LadderError):
        SpreadMember("bad", (1.0, 2.0), (1.0,), (0, 3))


def test_strip_map(spread):
    assert spread.strip_map == {
        frozenset({1}): 1,
        frozenset({2}): 2,
        frozenset({1, 2}): 3,
    }

    first, second = spread.members
    assert spread.mu(first) == pytest.approx(1.5 ** (2.0 / 3.0))
    assert spread.mu(second) == pytest.approx(4.2 ** (-1.0 / 3.0))
    assert spread.mu(first) == pytest.approx(1.3104, abs=1e-4)
    assert spread.mu(second) == pytest.approx(0.6198, abs=1e-4)


def test_spreading_violations(spread_file):
    ladder = spread_file.ladder
    first = spread_file.members[0]

    def check(member, n=3, fixed=(1, 2)):
        return validate_spreading(member, ladder, fixed, n)

    assert check(first).passed

    audit = check(dataclasses.replace(first, laplacians=(-3.0, 0.0, 2.0)))
    assert not audit.passed
    assert audit.violated_member == "K1"

    # Three non-minimal critical points against two fixed indices
    audit = check(dataclasses.replace(first, morse_indices=(3, 1, 2)))
    assert not audit.passed

    # Singleton energy 2^(-1/3) = 0.794 misses strip 1
    audit = check(dataclasses.replace(first, values=(2.0, 1.0, 0.5)))
    assert not audit.passed
    assert audit.violated_subset == (1,)

    with pytest.raises(LadderError):
        check(first, n=2)

    with pytest.raises(LadderError):
        check(first, fixed=(2, 1))

    with pytest.raises(LadderError):
        check(first, fixed=(1, 4))


def test_duplicate_members(spread_file):
    first = spread_file.members[0]
    with pytest.raises(LadderError):
        build_spread([first, first], spread_file.ladder, spread_file.fixed_indices, 3)


def test_partition(spread, flags):
    class_partition = partition(spread)
    assert class_partition.order == [1, 3]
    assert [c.members for c in class_partition.classes] == [["K2"], ["K1"]]
    assert class_partition.class_of("K1").signature == frozenset({1, 2})

    assert sigma(class_partition, flags, 2.0) == 3
    assert sigma(class_partition, {"K1": True, "K2": True}, 2.0) == 0
    assert sigma(class_partition, {}, 2.0) == 3

    with pytest.raises(LadderError):
        sigma(class_partition, flags, 0.0)


def test_theorem1(spread, flags):
    class_partition = partition(spread)
    certificate = theorem1_certify(spread, class_partition, 0.95, 1.05, flags)

    assert certificate.kind == CertificateKind.THEOREM1
    assert certificate.energy_bound == pytest.approx((1.05 / 0.95) * 1.35)
    assert certificate.exempt_class == 3
    assert certificate.audit

    certificate = theorem1_certify(spread, class_partition, 0.95, 1.05)
    assert certificate.exempt_class is None


def test_theorem1_denials(spread):
    class_partition = partition(spread)
    with pytest.raises(CertificationError) as info:
        theorem1_certify(spread, class_partition, 0.8, 1.05)

    assert info.value.condition == "gap"

    with pytest.raises(CertificationError) as info:
        theorem1_certify(spread, class_partition, 0.99, 1.01)

    assert info.value.condition == "pinching"

    with pytest.raises(LadderError):
        theorem1_certify(spread, class_partition, 1.05, 0.95)


def test_comparison(spread):
    class_partition = partition(spread)
    upper, lower = spread.member("K1"), spread.member("K2")
    certificate = comparison_certify(
        upper, lower, 0.95, 1.1, spread, class_partition, 0.95, 1.1
    )

    assert certificate.kind == CertificateKind.COMPARISON
    assert certificate.window == pytest.approx((0.95 * 1.25, 1.1 * 1.35), abs=1e-12)
    assert certificate.energy_bound == pytest.approx((1.1 / 0.95) * 1.35)
    assert "K1" in certificate.conditional_on
    assert "pinching (critical values only)" in " ".join(certificate.audit)


def test_comparison_denials(spread):
    class_partition = partition(spread)
    upper, lower = spread.member("K1"), spread.member("K2")

    def condition(*args, **kwargs):
        with pytest.raises(CertificationError) as info:
            comparison_certify(*args, **kwargs)

        return info.value.condition

    def compare(first, second, kappa_prev, kappa_sigma, **kwargs):
        return condition(
            first,
            second,
            kappa_prev,
            kappa_sigma,
            spread,
            class_partition,
            kwargs.pop("kappa_low", kappa_prev),
            kwargs.pop("kappa_high", kappa_sigma),
            **kwargs,
        )

    assert compare(upper, lower, 0.95, 1.2) == "gap"
    assert compare(upper, lower, 0.95, 1.1, energy_cap=1.5) == "bound"
    assert compare(lower, upper, 0.95, 1.1) == "order"

    far_lower = dataclasses.replace(lower, values=(8.4, 1.05, 0.5))
    assert compare(upper, far_lower, 0.95, 1.1) == "pinching"


def test_comparison_bound_uses_class_level(spread):
    class_partition = partition(spread)
    upper, lower = spread.member("K1"), spread.member("K2")
    level = theorem1_certify(spread, class_partition, 0.95, 1.05).energy_bound

    # (1.1 / 0.95) * 1.35 = 1.563 is above L = (1.05 / 0.95) * 1.35 = 1.492
    with pytest.raises(CertificationError) as info:
        comparison_certify(upper, lower, 0.95, 1.1, spread, class_partition, 0.95, 1.05)

    assert info.value.condition == "bound"
    assert str(level) in str(info.value)

    # Kappas inside the class range always meet the bound
    certificate = comparison_certify(
        upper, lower, 0.95, 1.05, spread, class_partition, 0.95, 1.05
    )
    assert certificate.energy_bound == pytest.approx(level)
    assert "kappas inside [0.95, 1.05]" in certificate.audit

    with pytest.raises(LadderError):
        comparison_certify(upper, lower, 0.95, 1.05, spread, class_partition, 1.05, 0.95)


def test_slack_check(spread):
    class_partition = partition(spread)
    upper, lower = spread.member("K1"), spread.member("K2")
    certificate = subcritical_slack_check(
        upper, lower, 0.95, 1.1, spread, class_partition, 0.95, 1.1
    )
    assert certificate is not None

    # Gap margin is about 6%, far below a 10% widening
    assert (
        subcritical_slack_check(
            upper, lower, 0.95, 1.1, spread, class_partition, 0.95, 1.1, margin=0.1
        )
        is None
    )


# Height function on S^3 and a bump that leaves both poles unchanged
HEIGHT = "2 + x4"
BUMPED = "2 + x4 + 0.45*(1 - x4^2)"


def height_member(label: str, expression=None, laplacians=(-3.0, 3.0)):
    return SpreadMember(
        label=label,
        values=(3.0, 1.0),
        laplacians=laplacians,
        morse_indices=(3, 0),
        expression=expression,
    )


def test_pinching_without_expressions():
    result = pinching(height_member("K1"), height_member("K2"), 0.97, 1.03, 3)
    assert result.passed
    assert not result.pointwise
    assert result.scope == "critical values only"


def test_pinching_at_sample_points():
    upper = height_member("K1", HEIGHT)
    shifted = SpreadMember(
        label="K2",
        values=(3.1, 1.1),
        laplacians=(-3.0, 3.0),
        morse_indices=(3, 0),
        expression="2.1 + x4",
    )

    # K2 / K1 stays within [1.033, 1.1] on the whole sphere
    result = pinching(upper, shifted, 0.95, 1.05, 3)
    assert result.passed
    assert result.pointwise
    assert result.scope == "pointwise"

    # Critical values agree, but near the equator K2 / K1 exceeds 1.2
    bumped = height_member("K2", BUMPED, laplacians=(-0.3, 5.7))
    values_only = pinching(height_member("K1"), height_member("K2"), 0.97, 1.03, 3)
    assert values_only.passed

    result = pinching(upper, bumped, 0.97, 1.03, 3)
    assert not result.passed
    assert result.pointwise
    assert "sample points" in result.where


# -----------------------------------------------------------------------------


def random_spread_members(rng: np.random.Generator):
    """Members of a random spread on S^3 with strips around each subset energy"""
    n = 3
    m = int(rng.integers(1, 9))

    # Near-binary weights K^(-1/2) keep all 2^m - 1 subset sums apart
    scale = rng.uniform(0.02, 0.06)
    weights = scale * 2.0 ** rng.permutation(m) * (1.0 + rng.uniform(-1e-3, 1e-3, size=m))
    base = np.sort(weights**-2.0)[::-1]

    def energy(values, subset):
        return sum(values[j] ** -0.5 for j in subset) ** (2.0 / 3.0)

    subsets = [
        subset
        for size in range(1, m + 1)
        for subset in itertools.combinations(range(m), size)
    ]
    energies = sorted(energy(base, subset) for subset in subsets)
    gap = float(np.min(np.diff([0.0] + energies)))
    if gap < 1e-3:
        return None

    ladder = StripLadder(
        lower=tuple(e - gap / 4 for e in energies),
        upper=tuple(e + gap / 4 for e in energies),
    )
    fixed_indices = tuple(
        ladder.strip_of(energy(base, (j,))) for j in range(m)
    )
    fixed_sorted = tuple(sorted(fixed_indices))

    eps = gap / (8.0 * max(energies))
    members = []
    minimum = 0.5 * float(np.min(base))
    for k in range(int(rng.integers(2, 7))):
        values = base * (1.0 + rng.uniform(-eps, eps, size=m))
        signs = rng.choice([-1.0, 1.0], size=m)
        signs[int(rng.integers(0, m))] = -1.0
        members.append(
            SpreadMember(
                label=f"K{k}",
                values=tuple(values) + (minimum,),
                laplacians=tuple(signs) + (1.0,),
                morse_indices=tuple(int(rng.integers(1, n + 1)) for _ in range(m))
                + (0,),
            )
        )

    return n, ladder, fixed_sorted, members


def test_random_spreads(rng):
    checked = 0
    largest = 0
    while checked < 100:
        generated = random_spread_members(rng)
        if generated is None:
            continue

        n, ladder, fixed_indices, members = generated
        spread = build_spread(members, ladder, fixed_indices, n)
        class_partition = partition(spread)

        strips = {m.label: ladder.strip_of(spread.mu(m)) for m in members}
        for first, second in itertools.combinations(members, 2):
            assert (first.signature == second.signature) == (
                strips[first.label] == strips[second.label]
            )

        assert sorted(class_partition.order) == class_partition.order
        largest = max(largest, len(fixed_indices))
        checked += 1

    assert largest >= 6


def test_partition_mismatch(spread_file):
    ladder = StripLadder(lower=(0.6, 0.95, 1.25), upper=(0.65, 1.02, 1.35))
    first = spread_file.members[0]

    # mu above every strip
    member = dataclasses.replace(first, label="K3", values=(1.5, 1.0, 0.5))
    spread = dataclasses.replace(
        build_spread([first], ladder, (1, 2), 3), members=[first, member]
    )
    with pytest.raises(PartitionError):
        partition(spread)

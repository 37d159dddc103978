"""Lattice enumeration, disk counts, and configuration behavior."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import eigencond.lattice as lattice_mod
from conftest import brute_min_separation
from eigencond.lattice import (Configuration, enumerate_lattice_in_disk,
                               first_n_lattice_points, first_n_sites,
                               lattice_count, nearest_neighbor_distances,
                               pairwise_min_separation, translate_to_centroid)

DENSITY = 2.0 * math.pi / math.sqrt(3.0)  # limit of count / r^2


def brute_disk_sites(r, closed=True):
    """Oracle: scan a generous box and filter on the exact integer form."""
    bound = int(math.ceil(2.0 * r)) + 3
    limit = (r * (1.0 + 8.0 * np.finfo(float).eps)) ** 2 if closed else r * r
    out = set()
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            q = a * a + a * b + b * b
            if (q <= limit) if closed else (q < limit):
                out.add((a, b))
    return out


def test_disk_r_half_contains_only_origin():
    pts = enumerate_lattice_in_disk(0.5, closed=True)
    assert [(p.a, p.b) for p in pts] == [(0, 0)]


def test_disk_r1_closed_has_seven_points():
    pts = enumerate_lattice_in_disk(1.0, closed=True)
    assert len(pts) == 7
    assert {(p.a, p.b) for p in pts} == brute_disk_sites(1.0, closed=True)


def test_disk_r1_open_excludes_the_unit_ring():
    assert len(enumerate_lattice_in_disk(1.0, closed=False)) == 1


def test_disk_r0():
    assert len(enumerate_lattice_in_disk(0.0, closed=True)) == 1
    assert enumerate_lattice_in_disk(0.0, closed=False) == []


@pytest.mark.parametrize("r", [2.5, 5.0, 7.3, 11.0])
def test_disk_matches_bruteforce(r):
    pts = enumerate_lattice_in_disk(r, closed=True)
    assert {(p.a, p.b) for p in pts} == brute_disk_sites(r, closed=True)
    assert len({(p.a, p.b) for p in pts}) == len(pts)  # no duplicates


def test_disk_r50_count_and_error_band():
    # count frozen from the brute-force oracle; deviation from the area term
    # pi r^2 / (sqrt(3)/2) stays within 2 * r^(2/3)
    pts = enumerate_lattice_in_disk(50.0, closed=True)
    assert len(pts) == 9061
    main_term = math.pi * 50.0 ** 2 / (math.sqrt(3.0) / 2.0)
    assert abs(len(pts) - main_term) <= 2.0 * 50.0 ** (2.0 / 3.0)


def test_ordering_modulus_then_angle_then_coords():
    pts = enumerate_lattice_in_disk(1.0, closed=True)
    assert [(p.a, p.b) for p in pts] == [
        (0, 0), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


def test_enumeration_is_bit_stable():
    first = enumerate_lattice_in_disk(12.5, closed=True)
    second = enumerate_lattice_in_disk(12.5, closed=True)
    assert [(p.a, p.b, p.z) for p in first] == [(p.a, p.b, p.z) for p in second]


def test_sorted_prefixes_are_consistent():
    small = [(p.a, p.b) for p in first_n_sites(40)]
    large = [(p.a, p.b) for p in first_n_sites(150)]
    assert large[:40] == small


@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_rejects_bad_radius(bad):
    with pytest.raises(ValueError):
        enumerate_lattice_in_disk(bad)
    with pytest.raises(ValueError):
        lattice_count(bad)


def test_count_examples():
    assert lattice_count(0.0) == 1
    assert lattice_count(1.0) == 7
    assert lattice_count(100.0) == 36295
    assert abs(lattice_count(100.0) - DENSITY * 100.0 ** 2) / (DENSITY * 100.0 ** 2) < 0.01


def test_count_equals_enumeration_cardinality():
    for r in (0.0, 1.0, 3.3, 9.0, 20.0):
        assert lattice_count(r) == len(enumerate_lattice_in_disk(r, closed=True))


@given(st.floats(min_value=0.0, max_value=40.0), st.floats(min_value=0.0, max_value=5.0))
def test_count_monotone(r, bump):
    assert lattice_count(r) <= lattice_count(r + bump)


@pytest.mark.parametrize("r", [50.0, 100.0, 200.0])
def test_count_density_limit(r):
    assert abs(lattice_count(r) / r ** 2 - DENSITY) / DENSITY < 0.02


def test_first_n_origin_first():
    c = first_n_lattice_points(1)
    assert c.n == 1 and c.points[0] == 0.0


def test_first_n_seven():
    c = first_n_lattice_points(7)
    moduli = sorted(np.abs(c.points))
    assert moduli[0] == 0.0
    assert np.allclose(moduli[1:], 1.0, rtol=0, atol=1e-15)
    assert c.min_separation == 1.0


def test_first_n_rejects_zero():
    with pytest.raises(ValueError):
        first_n_lattice_points(0)


def test_first_n_10k_max_modulus_band():
    c = first_n_lattice_points(10_000)
    limit = 3.0 ** 0.25 * math.sqrt(10_000) / math.sqrt(2.0 * math.pi)
    assert 0.95 * limit <= np.abs(c.points).max() <= 1.05 * limit


@pytest.mark.parametrize("n", [2, 7, 50, 200, 500])
def test_first_n_min_separation_is_one(n):
    c = first_n_lattice_points(n)
    assert c.min_separation == 1.0
    # brute force reproduces the analytic value to a few ulps (the embedding
    # rounds b*sqrt(3)/2 per row)
    assert abs(brute_min_separation(c.points) - 1.0) <= 1e-13


def test_translate_two_points():
    c = translate_to_centroid(Configuration([0.0, 1.0]))
    assert np.allclose(sorted(c.points, key=lambda z: z.real), [-0.5, 0.5], atol=0)


def test_translate_preserves_distances():
    c = Configuration([0.0, 1.0, 1.0j])
    t = translate_to_centroid(c)
    assert abs(t.points.mean()) < 1e-15
    orig = np.abs(c.points[:, None] - c.points[None, :])
    new = np.abs(t.points[:, None] - t.points[None, :])
    assert np.allclose(orig, new, rtol=0, atol=1e-15)


def test_lattice_centroid_shift_below_unity():
    c = first_n_lattice_points(100)
    assert abs(c.points.mean()) < 1.0
    assert abs(translate_to_centroid(c).points.mean()) < 1e-12


def test_translate_min_separation_within_ulps():
    # recomputing from translated points moves the minimum by rounding only;
    # the bound scales with (point scale / gap), so desk-scale families stay
    # within 4 ulps
    eps = np.finfo(float).eps
    rng = np.random.default_rng(5)
    cases = [first_n_lattice_points(n).points for n in (20, 100, 200)]
    for _ in range(10):
        jitter = 0.12 * (rng.standard_normal(25) + 1j * rng.standard_normal(25))
        cases.append(first_n_lattice_points(25).points + jitter)
    for z in cases:
        before = pairwise_min_separation(z)
        after = brute_min_separation(translate_to_centroid(Configuration(z)).points)
        assert abs(after - before) <= 4.0 * eps * before


def test_translate_carries_the_cached_separation():
    c = Configuration([0.0, 1.0, 5.0], min_separation=1.0)
    assert translate_to_centroid(c).min_separation == 1.0


@given(st.integers(min_value=2, max_value=50), st.integers(min_value=0, max_value=10_000))
def test_min_separation_matches_bruteforce(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert Configuration(z).min_separation == brute_min_separation(z)


def test_nearest_neighbor_chunking(monkeypatch):
    rng = np.random.default_rng(11)
    z = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    whole = nearest_neighbor_distances(z)
    monkeypatch.setattr(lattice_mod, "_PAIR_BLOCK", 64)
    chunked = nearest_neighbor_distances(z)
    assert np.array_equal(whole, chunked)


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration([])
    with pytest.raises(ValueError):
        Configuration([1.0, complex(math.nan, 0.0)])
    with pytest.raises(ValueError):
        _ = Configuration([1.0]).min_separation
    with pytest.raises(ValueError):
        Configuration([0.0, 1.0], min_separation=-1.0)


def test_configuration_points_are_immutable():
    c = Configuration([0.0, 1.0])
    with pytest.raises(ValueError):
        c.points[0] = 5.0

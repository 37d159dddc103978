"""Scale-invariant separation functionals and their leading-order constants.

S_p of a configuration is the p-norm of the point moduli divided by the
minimum pairwise gap.  S_2 and S_inf coincide with the Frobenius- and
operator-norm eigenvector conditioning of the diagonal matrix built from the
points, and for the triangular-lattice prefix they grow like
c_p * n^(1/2 + 1/p) with c_p = (2/(p+2))^(1/p) * 3^(1/4) / sqrt(2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .lattice import Configuration, first_n_lattice_points


def _validate_p(p) -> float:
    p = float(p)
    if math.isnan(p) or p <= 0.0:
        raise ValueError(f"p must be positive (math.inf allowed), got {p!r}")
    return p


def modulus_p_norm(moduli, p: float) -> float:
    """(sum m_i^p)^(1/p), computed as max * (sum (m_i/max)^p)^(1/p).

    The rescaling keeps large p (>= 100) from overflowing.
    """
    m = np.asarray(moduli, dtype=float)
    top = float(m.max())
    if math.isinf(p) or top == 0.0:
        return top
    return top * float(np.sum((m / top) ** p)) ** (1.0 / p)


def separation_functional(c: Configuration, p) -> float:
    """p-norm of the moduli over the minimum gap; +inf when points coincide.

    Invariant under rescaling and rotation of the configuration.
    """
    p = _validate_p(p)
    if c.n < 2:
        raise ValueError("the separation functional needs at least two points")
    gap = c.min_separation
    if gap == 0.0:
        return math.inf
    return modulus_p_norm(np.abs(c.points), p) / gap


def proposition_constant(p) -> float:
    """Leading-order coefficient c_p of the minimal separation functional.

    c_p = (2/(p+2))^(1/p) * 3^(1/4)/sqrt(2*pi); the limit p -> inf is
    3^(1/4)/sqrt(2*pi), and c_2 = 3^(1/4)/(2*sqrt(pi)).
    """
    p = _validate_p(p)
    base = 3.0 ** 0.25 / math.sqrt(2.0 * math.pi)
    if math.isinf(p):
        return base
    return (2.0 / (p + 2.0)) ** (1.0 / p) * base


def _growth_scale(n: int, p: float) -> float:
    return float(n) ** (0.5 + (0.0 if math.isinf(p) else 1.0 / p))


@dataclass(frozen=True)
class AsymptoticRow:
    """One convergence-table entry: raw functional value against c_p * n^(1/2+1/p)."""

    n: int
    raw: float
    scale: float
    ratio: float
    target: float


def convergence_study(p, n_values: Sequence[int],
                      generator: Callable[[int], Configuration] | None = None,
                      ) -> list[AsymptoticRow]:
    """Evaluate S_p over a generator at increasing n, normalized by the growth scale."""
    p = _validate_p(p)
    ns = [int(v) for v in n_values]
    if not ns:
        raise ValueError("n_values must be nonempty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_values must be strictly increasing")
    gen = first_n_lattice_points if generator is None else generator
    target = proposition_constant(p)
    rows = []
    for n in ns:
        raw = separation_functional(gen(n), p)
        scale = _growth_scale(n, p)
        rows.append(AsymptoticRow(n=n, raw=raw, scale=scale, ratio=raw / scale,
                                  target=target))
    return rows


class BoundCertificate(NamedTuple):
    value: float
    bound: float
    margin: float


def lower_bound_certificate(c: Configuration, p) -> BoundCertificate:
    """Compare S_p(c) with the leading-order bound c_p * n^(1/2+1/p).

    The bound is asymptotic: finite configurations may legally have margin
    below 1, so the margin is reported, never asserted.
    """
    p = _validate_p(p)
    value = separation_functional(c, p)
    bound = proposition_constant(p) * _growth_scale(c.n, p)
    return BoundCertificate(value=value, bound=bound, margin=value / bound)

"""Change of basis between the two families of central characters.

The quantized symbols are never materialized as Hecke-algebra elements;
each one is known through its expansion over the plain symbols (and back),
with exact rational-function coefficients:

    (q-1)^len(rho) Sigma_{rho,q} = sum_nu ((q^nu - 1)/z_nu) <p_nu|h_rho> Sigma_nu
    (q^rho - 1)    Sigma_rho     = sum_nu (q-1)^len(nu) <m_nu|p_rho> Sigma_{nu,q}

where q^nu - 1 is the product of (q^{nu_i} - 1) over the parts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache

from qplancherel.characters import char_normalized, char_normalized_float
from qplancherel.observables import ObservableExpansion, eval_expansion
from qplancherel.partitions import (
    Partition,
    falling_factorial,
    partitions_of,
    size,
    z_of,
)
from qplancherel.ratfunc import QRat, one_minus_q_pow
from qplancherel.symfunc import scalar_mp, scalar_ph


@cache
def sigma_q_in_sigma(rho: Partition) -> ObservableExpansion:
    """Sigma_{rho,q} expanded over the plain symbols Sigma_nu.

    The (q-1)^len(rho) factor divides out; the resulting coefficients
    reduce to polynomials in q.
    """
    k = size(rho)
    lr = len(rho)
    denom = QRat(one_minus_q_pow((1,) * lr))  # (1-q)^len(rho)
    terms = {}
    for nu in partitions_of(k):
        pairing = scalar_ph(nu, rho)
        if pairing == 0:
            continue
        sign = -1 if (len(nu) - lr) % 2 else 1
        num = QRat(one_minus_q_pow(nu)) * Fraction(sign * pairing, z_of(nu))
        terms[nu] = num / denom
    return ObservableExpansion(terms)


@cache
def sigma_in_sigma_q(rho: Partition) -> ObservableExpansion:
    """Sigma_rho expanded over the quantized symbols.

    Index partitions stand for Sigma_{nu,q}; coefficients have poles
    only where q^rho = 1.
    """
    lr = len(rho)
    denom = QRat(one_minus_q_pow(rho))  # up to sign, q^rho - 1
    terms = {}
    for nu in partitions_of(size(rho)):
        pairing = scalar_mp(nu, rho)
        if pairing == 0:
            continue
        sign = -1 if (len(nu) - lr) % 2 else 1
        num = QRat(one_minus_q_pow((1,) * len(nu))) * (sign * pairing)
        terms[nu] = num / denom
    return ObservableExpansion(terms)


def ram_round_trip(rho: Partition) -> ObservableExpansion:
    """Substitute the first transform into the second; must be Sigma_rho."""
    out = ObservableExpansion({})
    for nu, c in sigma_in_sigma_q(rho).terms.items():
        out = out + sigma_q_in_sigma(nu).scale(c)
    return out


def q_char_normalized(lam: Partition, mu: Partition) -> QRat:
    """Normalized q-character on the minimal-length class of type
    mu 1^(n-|mu|), exact in q.

    Evaluates the Sigma-expansion of the quantized symbol at lam and
    strips the falling-factorial normalization.
    """
    n, k = size(lam), size(mu)
    if k > n:
        raise ValueError(f"|mu| = {k} exceeds |lam| = {n}")
    if k == 0:
        return QRat(1)
    return eval_expansion(sigma_q_in_sigma(mu), lam) / falling_factorial(n, k)


def q_char_normalized_float(lam: Partition, mu: Partition, q0: float) -> float:
    """Float path for large lam: same expansion, characters via the
    log-space evaluator."""
    n, k = size(lam), size(mu)
    if k > n:
        raise ValueError(f"|mu| = {k} exceeds |lam| = {n}")
    if k == 0:
        return 1.0
    total = 0.0
    for nu, c in sigma_q_in_sigma(mu).terms.items():
        total += c.eval_at(q0) * char_normalized_float(lam, nu)
    return total


def q_char_normalized_exact_at(lam: Partition, mu: Partition, q0: Fraction) -> Fraction:
    """Exact numeric value at rational q0 (pole-free after reduction)."""
    n, k = size(lam), size(mu)
    if k > n:
        raise ValueError(f"|mu| = {k} exceeds |lam| = {n}")
    if k == 0:
        return Fraction(1)
    total = Fraction(0)
    for nu, c in sigma_q_in_sigma(mu).terms.items():
        total += c.eval_at(q0) * char_normalized(lam, nu)
    return total

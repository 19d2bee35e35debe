"""GF(2) linear algebra on bit-packed matrices.

A matrix is a tuple of row integers: bit ``j`` of ``rows[i]`` is entry
``(i, j)``. Vectors are integers with component ``j`` at bit ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass

from vacrand.lfsr.core import N_CELLS


def identity(n: int) -> tuple:
    return tuple(1 << i for i in range(n))


def mat_vec(a, v: int) -> int:
    out = 0
    for i, row in enumerate(a):
        out |= (bin(row & v).count("1") & 1) << i
    return out


def mat_mul(a, b) -> tuple:
    """Product ``a @ b``: row i of the result XORs the rows of b selected by row i of a."""
    rows = []
    for ra in a:
        acc = 0
        j = 0
        while ra:
            if ra & 1:
                acc ^= b[j]
            ra >>= 1
            j += 1
        rows.append(acc)
    return tuple(rows)


def mat_pow(a, e: int) -> tuple:
    """``a**e`` by square-and-multiply."""
    if e < 0:
        raise ValueError("negative exponent")
    result = identity(len(a))
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def from_columns(cols, n_rows: int) -> tuple:
    rows = [0] * n_rows
    for j, c in enumerate(cols):
        for i in range(n_rows):
            if (c >> i) & 1:
                rows[i] |= 1 << j
    return tuple(rows)


def probe_linear_map(f, n_in: int, n_out: int) -> tuple:
    """Matrix of a linear map given as a function on bit vectors."""
    return from_columns([f(1 << j) for j in range(n_in)], n_out)


def transition_matrix() -> tuple:
    """Zero-input serial step as a 63x63 matrix: cell j takes cell j-1, cell 0 takes s62^s61."""
    rows = [0] * N_CELLS
    rows[0] = (1 << 62) | (1 << 61)
    for j in range(1, N_CELLS):
        rows[j] = 1 << (j - 1)
    return tuple(rows)


def trial_division(n: int) -> dict[int, int]:
    """Prime factorization by trial division; returns {prime: exponent}."""
    if n < 1:
        raise ValueError("n must be positive")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


@dataclass
class OrderReport:
    order_candidate: int
    factors: dict
    identity_at_candidate: bool
    proper_divisor_checks: dict

    @property
    def is_exact(self) -> bool:
        return self.identity_at_candidate and not any(self.proper_divisor_checks.values())


def check_order(a, candidate: int, factors: dict | None = None) -> OrderReport:
    """Check that ``candidate`` is exactly the multiplicative order of ``a``.

    True when ``a**candidate == I`` and ``a**(candidate/p) != I`` for each
    prime p dividing candidate. ``proper_divisor_checks`` maps p to whether
    ``a**(candidate/p)`` collapsed to the identity.
    """
    if factors is None:
        factors = trial_division(candidate)
    eye = identity(len(a))
    full = mat_pow(a, candidate) == eye
    checks = {p: mat_pow(a, candidate // p) == eye for p in sorted(factors)}
    return OrderReport(candidate, dict(factors), full, checks)


def maximal_length_report() -> OrderReport:
    return check_order(transition_matrix(), (1 << N_CELLS) - 1)

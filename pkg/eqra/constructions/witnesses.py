"""Explicit intermediate points for the composition lemma on Z_p^2.

For distinct kernels a, b among eta0, eta1, alpha_1..alpha_{p-1}, every pair
(u, v) has some y with u a y and y b v, so a ; b is the universal relation.
The functions here compute y in closed form.
"""

import itertools
from typing import List, Optional, Tuple

from eqra.constructions.zp2 import Point, check_prime
from eqra.exceptions import ConstructionException


def in_eta(coordinate: int, u: Point, v: Point) -> bool:
    return u[coordinate] == v[coordinate]


def in_alpha(p: int, k: int, u: Point, v: Point) -> bool:
    return (k * u[0] - u[1]) % p == (k * v[0] - v[1]) % p


def _check_k(p: int, k: int) -> None:
    if not 1 <= k <= p - 1:
        raise ConstructionException(f"k must satisfy 1 <= k <= {p - 1}, got {k}")


def case1_witness(p: int, k: int, u: Point, v: Point, coordinate: int = 0) -> Point:
    """y with u eta_coordinate y and y alpha_k v.

    For eta0, ``y = (u0, k*u0 + v1 - k*v0)``; for eta1, ``y0`` solves
    ``k*y0 - u1 = k*v0 - v1``.
    """
    check_prime(p)
    _check_k(p, k)
    if coordinate == 0:
        return (u[0] % p, (k * u[0] + v[1] - k * v[0]) % p)
    if coordinate == 1:
        y0 = pow(k, -1, p) * (k * v[0] - v[1] + u[1]) % p
        return (y0, u[1] % p)
    raise ConstructionException(f"coordinate must be 0 or 1, got {coordinate}")


def case2_witness(p: int, i: int, j: int, u: Point, v: Point) -> Point:
    """y with u alpha_i y and y alpha_j v.

    ``y0 = (j - i)^-1 * (u1 - i*u0 + j*v0 - v1)`` and ``y1 = j*(y0 - v0) + v1``.
    """
    check_prime(p)
    _check_k(p, i)
    _check_k(p, j)
    if i == j:
        raise ConstructionException("case 2 needs i != j")
    y0 = pow(j - i, -1, p) * (u[1] - i * u[0] + j * v[0] - v[1]) % p
    y1 = (j * (y0 - v[0]) + v[1]) % p
    return (y0, y1)


def _points(p: int) -> List[Point]:
    return list(itertools.product(range(p), repeat=2))


Failure = Tuple[str, Tuple[int, ...], Point, Point]


def case1_failures(p: int, coordinate: int = 0) -> List[Failure]:
    """Every (k, u, v) where the case 1 witness breaks a membership or, for unrelated u and v, coincides with u or v."""
    failures = []
    for k in range(1, p):
        for u, v in itertools.product(_points(p), repeat=2):
            y = case1_witness(p, k, u, v, coordinate)
            if not (in_eta(coordinate, u, y) and in_alpha(p, k, y, v)):
                failures.append(("membership", (k,), u, v))
            elif _unrelated(u, v, in_eta(coordinate, u, v), in_alpha(p, k, u, v)) and y in (u, v):
                failures.append(("distinctness", (k,), u, v))
    return failures


def case2_failures(p: int) -> List[Failure]:
    """Every (i, j, u, v) where the case 2 witness breaks a membership or, for unrelated u and v, coincides with u or v."""
    failures = []
    for i, j in itertools.permutations(range(1, p), 2):
        for u, v in itertools.product(_points(p), repeat=2):
            y = case2_witness(p, i, j, u, v)
            if not (in_alpha(p, i, u, y) and in_alpha(p, j, y, v)):
                failures.append(("membership", (i, j), u, v))
            elif _unrelated(u, v, in_alpha(p, i, u, v), in_alpha(p, j, u, v)) and y in (u, v):
                failures.append(("distinctness", (i, j), u, v))
    return failures


def _unrelated(u: Point, v: Point, first: bool, second: bool) -> bool:
    return u != v and not first and not second


def first_failure(failures: List[Failure]) -> Optional[dict]:
    if not failures:
        return None
    kind, params, u, v = failures[0]
    return {"kind": kind, "parameters": list(params), "u": list(u), "v": list(v)}

"""The kernel relations of Z_p^2.

Points (x0, x1) of Z_p^2 are encoded as ``x0 * p + x1``. The family holds the
coordinate kernels eta0 (x0 = y0) and eta1 (x1 = y1) and, for k = 1..p-1,
alpha_k: ``k*x0 - x1 == k*y0 - y1 (mod p)``. Together with the identity and
the universal relation these are the p + 3 congruences of the group Z_p^2.
"""

import json
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from eqra.exceptions import ConstructionException, NOutOfRangeException, NotPrimeException, PrimeTooLargeException
from eqra.logic.formulas import Structure
from eqra.relations import relcore
from eqra.relations.relation_io import relation_to_json, relation_to_text
from eqra.relations.relcore import BinRel
from eqra.settings import config
from eqra.utils.helpers import ensure_directory_exists

logger = logging.getLogger(__name__)

Point = Tuple[int, int]

UNIVERSAL_NAME = "U"
IDENTITY_NAME = "I"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def next_prime(start: int) -> int:
    """Smallest prime at least ``start``."""
    candidate = max(start, 2)
    while not is_prime(candidate):
        candidate += 1
    return candidate


def _kernel(keys: np.ndarray) -> BinRel:
    return BinRel(keys[:, None] == keys[None, :])


@dataclass(frozen=True, eq=False)
class Zp2Family:
    """eta0, eta1 and alpha_1..alpha_{p-1} on Z_p^2 (``alpha[k - 1]`` is alpha_k)."""

    p: int
    eta0: BinRel
    eta1: BinRel
    alpha: Tuple[BinRel, ...]

    @property
    def n_base(self) -> int:
        return self.p * self.p

    def encode(self, point: Point) -> int:
        return (point[0] % self.p) * self.p + point[1] % self.p

    def decode(self, index: int) -> Point:
        return divmod(index, self.p)

    def alpha_k(self, k: int) -> BinRel:
        if not 1 <= k < self.p:
            raise NOutOfRangeException(f"alpha_k needs 1 <= k <= {self.p - 1}, got {k}")
        return self.alpha[k - 1]

    def named(self) -> Dict[str, BinRel]:
        """Symbols E0, E1, A1..A{p-1}."""
        relations = {"E0": self.eta0, "E1": self.eta1}
        relations.update({f"A{k}": r for k, r in enumerate(self.alpha, start=1)})
        return relations

    def structure(self, symbols: Sequence[str] = ()) -> Structure:
        """Structure over the named relations (all of them when symbols is empty)."""
        named = self.named()
        chosen = symbols or list(named)
        return Structure(self.n_base, {s: named[s] for s in chosen})

    def kernels(self) -> List[BinRel]:
        """eta0, eta1, alpha_1..alpha_{p-1}: the p + 1 proper nontrivial congruences."""
        return [self.eta0, self.eta1, *self.alpha]

    def congruence_set(self) -> List[BinRel]:
        return [relcore.identity(self.n_base), *self.kernels(), relcore.universal(self.n_base)]

    def format_point(self, index: int) -> str:
        x0, x1 = self.decode(index)
        return f"({x0},{x1})"


def check_prime(p: int) -> int:
    """Validate a modulus.

    Raises:
        NotPrimeException: If p is not prime.
        PrimeTooLargeException: If p exceeds ``MAX_PRIME``.
    """
    if not is_prime(p):
        raise NotPrimeException(f"{p} is not prime")
    if p > config.MAX_PRIME:
        raise PrimeTooLargeException(f"p = {p} exceeds the supported maximum {config.MAX_PRIME}")
    return p


def zp2_family(p: int) -> Zp2Family:
    """Build the kernel relations of Z_p^2."""
    check_prime(p)
    x0, x1 = np.divmod(np.arange(p * p), p)
    alpha = tuple(_kernel((k * x0 - x1) % p) for k in range(1, p))
    logger.debug(f"Built Z_{p}^2 family on {p * p} points")
    return Zp2Family(p, _kernel(x0), _kernel(x1), alpha)


def lemma1_hypothesis(p: int, n: int) -> bool:
    """Whether (p, n) satisfies 1 <= n < p - 2."""
    return 1 <= n < p - 2


def make_m_names(n: int) -> List[str]:
    return [UNIVERSAL_NAME, IDENTITY_NAME, "E0", "E1"] + [f"A{k}" for k in range(1, n + 1)]


def make_M(p: int, n: int, unsafe: bool = False) -> List[BinRel]:
    """The generator list ``[1, 1', eta0, eta1, alpha_1, ..., alpha_n]``.

    Args:
        p: Prime modulus.
        n: Number of alpha relations.
        unsafe: Accept any 1 <= n <= p - 1, outside the lemma's hypothesis.

    Raises:
        NotPrimeException: If p is not prime.
        NOutOfRangeException: If n is out of range.
    """
    check_prime(p)
    if unsafe:
        if not 1 <= n <= p - 1:
            raise NOutOfRangeException(f"n must satisfy 1 <= n <= {p - 1}, got {n}")
        if not lemma1_hypothesis(p, n):
            logger.warning(f"make_M({p}, {n}) is outside 1 <= n < p - 2")
    elif not lemma1_hypothesis(p, n):
        raise NOutOfRangeException(f"n must satisfy 1 <= n < p - 2 = {p - 2}, got {n}")
    family = zp2_family(p)
    size = family.n_base
    return [relcore.universal(size), relcore.identity(size), family.eta0, family.eta1, *family.alpha[:n]]


def emit_family(family: Zp2Family, directory: str) -> List[str]:
    """Write each relation as a pair-list file plus a ``structure.json`` of all of them.

    Returns:
        The written paths, structure file last.

    Raises:
        ConstructionException: The directory cannot be created or written.
    """
    written = []
    structure = {
        "n": family.n_base,
        "relations": {symbol: relation_to_json(r)["pairs"] for symbol, r in family.named().items()},
    }
    try:
        ensure_directory_exists(directory)
        for symbol, relation in family.named().items():
            path = os.path.join(directory, f"{symbol}.rel")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(relation_to_text(relation))
            written.append(path)
        path = os.path.join(directory, "structure.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(structure, fh, sort_keys=True)
        written.append(path)
    except OSError as e:
        raise ConstructionException(f"Cannot write relation files to {directory}: {e.strerror or e}") from None
    logger.info(f"Wrote {len(written)} files for Z_{family.p}^2 to {directory}")
    return written

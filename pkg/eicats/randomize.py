"""
Seeded random modules for property checks.

Random modules are cut out of free and cofree modules: a submodule generated by random
elements, or the quotient by one. All randomness comes from a NumPy generator.
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np

from . import exactla as la
from .eicat import FiniteEICategory, full_subcategory, maximal_objects
from .repmod import (
    CatModule,
    ChainComplex,
    Side,
    dualize,
    extend_by_zero,
    free_module,
    quotient,
    restrict,
    short_exact_sequence,
    submodule_generated,
    trivial_module_at,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 3
DEFAULT_ATTEMPTS = 20


def get_rng(seed: Union[int, np.random.Generator, None] = 0) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_elements(rng: np.random.Generator, dim: int, count: int, low: int = -2, high: int = 2) -> np.ndarray:
    """A dim × count exact matrix of small random integers."""
    values = rng.integers(low, high + 1, size=(dim, count))
    return la.exact_matrix([[int(x) for x in row] for row in values], shape=(dim, count))


def _ambient(cat: FiniteEICategory, side: Side, rng: np.random.Generator) -> CatModule:
    """A free module or a cofree module (the dual of a free module on the other side)."""
    obj = cat.objects[int(rng.integers(len(cat.objects)))]
    if rng.integers(2):
        return free_module(cat, side, obj)
    return dualize(free_module(cat, side.opposite, obj))


def _candidate(cat: FiniteEICategory, side: Side, rng: np.random.Generator) -> CatModule:
    ambient = _ambient(cat, side, rng)
    nonzero = [obj for obj in cat.objects if ambient.dims[obj] > 0]
    obj = nonzero[int(rng.integers(len(nonzero)))]
    count = int(rng.integers(1, 3))
    elements = {obj: random_elements(rng, ambient.dims[obj], count)}
    sub, inclusion = submodule_generated(ambient, elements)
    if rng.integers(2):
        return sub
    module, _ = quotient(ambient, inclusion)
    return module


def random_module(
    cat: FiniteEICategory,
    side: Union[Side, str] = Side.LEFT,
    rng: Union[int, np.random.Generator, None] = 0,
    max_dim: int = DEFAULT_MAX_DIM,
    nonzero: bool = True,
    attempts: int = DEFAULT_ATTEMPTS,
) -> CatModule:
    """
    A random finite-dimensional module with every V(i) of dimension at most max_dim.

    Args:
        cat (FiniteEICategory): The category.
        side (Side): Left or right.
        rng: A seed or a NumPy generator.
        max_dim (int): The largest dimension allowed at any object.
        nonzero (bool): Reject the zero module.
        attempts (int): How many candidates to try before falling back to a trivial module at a random object.
    """
    side = Side(side)
    rng = get_rng(rng)
    for _ in range(attempts):
        module = _candidate(cat, side, rng)
        if max(module.dims.values(), default=0) <= max_dim and not (nonzero and module.is_zero()):
            module.name = "R"
            return module
    obj = cat.objects[int(rng.integers(len(cat.objects)))]
    logger.debug("Falling back to the trivial module at %s", obj)
    return trivial_module_at(cat, side, obj)


def random_vanishing_module(
    cat: FiniteEICategory,
    side: Union[Side, str] = Side.LEFT,
    rng: Union[int, np.random.Generator, None] = 0,
    max_dim: int = DEFAULT_MAX_DIM,
) -> CatModule:
    """A random module which is zero at every maximal object of the category."""
    side = Side(side)
    rng = get_rng(rng)
    lower = [obj for obj in cat.objects if obj not in maximal_objects(cat, cat.objects)]
    module = random_module(cat, side, rng, max_dim=max_dim, nonzero=False)
    sub = full_subcategory(cat, lower).category
    vanishing = extend_by_zero(restrict(module, sub), cat)
    vanishing.name = "R|"
    return vanishing


def random_pair(
    cat: FiniteEICategory, rng: Union[int, np.random.Generator, None] = 0, max_dim: int = DEFAULT_MAX_DIM
) -> Tuple[CatModule, CatModule]:
    """Two random left modules."""
    rng = get_rng(rng)
    return random_module(cat, Side.LEFT, rng, max_dim), random_module(cat, Side.LEFT, rng, max_dim)


def random_short_exact_sequence(
    cat: FiniteEICategory,
    side: Union[Side, str] = Side.LEFT,
    rng: Union[int, np.random.Generator, None] = 0,
    max_dim: int = DEFAULT_MAX_DIM,
    module: Optional[CatModule] = None,
) -> ChainComplex:
    """0 → S → V → V/S → 0 with S generated by a random element of a random module V."""
    side = Side(side)
    rng = get_rng(rng)
    module = module or random_module(cat, side, rng, max_dim)
    nonzero = [obj for obj in cat.objects if module.dims[obj] > 0]
    obj = nonzero[int(rng.integers(len(nonzero)))]
    sub, inclusion = submodule_generated(module, {obj: random_elements(rng, module.dims[obj], 1)})
    _, projection = quotient(module, inclusion)
    return short_exact_sequence(inclusion, projection)

"""
Truncations of the categories FI_G and VI_q, and the finite groups and fields used to build them.

The truncation at level N is the full subcategory on objects 0, ..., N. Morphism ids
encode the morphism data (an injection with a coloring, or the columns of a matrix),
so the same morphism has the same id at every level.
"""
from dataclasses import dataclass, field
from enum import Enum
import itertools
import logging
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .eicat import FiniteEICategory, Morphism

logger = logging.getLogger(__name__)

DEFAULT_CAP = 1000


class InstanceError(Exception):
    pass


class CapExceededError(InstanceError):
    pass


class Family(str, Enum):
    FI_G = "FI_G"
    VI_Q = "VI_q"

    def __str__(self):
        return self.value


def _table_violations(table: Sequence[Sequence[int]], name: str) -> List[str]:
    order = len(table)
    violations = []
    for r, row in enumerate(table):
        if len(row) != order:
            violations.append(f"{name} table row {r} has length {len(row)}, expected {order}")
        elif any(not isinstance(x, int) or not 0 <= x < order for x in row):
            violations.append(f"{name} table row {r} has entries outside 0..{order - 1}")
    return violations


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table on the elements 0, ..., order-1."""

    table: Tuple[Tuple[int, ...], ...]
    identity: int = 0
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == self.identity:
                return b
        raise InstanceError(f"Element {a} has no inverse.")

    def validate(self) -> List[str]:
        """Checks closure, associativity, the identity and inverses. Returns the violations found."""
        violations = _table_violations(self.table, "multiplication")
        if violations:
            return violations
        order = self.order
        if not 0 <= self.identity < order:
            return [f"identity {self.identity} is not an element"]
        elements = range(order)
        for a in elements:
            if self.table[self.identity][a] != a or self.table[a][self.identity] != a:
                violations.append(f"{self.identity} is not a two-sided identity for {a}")
            if not any(self.table[a][b] == self.identity and self.table[b][a] == self.identity for b in elements):
                violations.append(f"element {a} has no inverse")
        for a, b, c in itertools.product(elements, repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                violations.append(f"associativity fails for ({a}, {b}, {c})")
                break
        return violations


def group_from_table(table: Sequence[Sequence[int]], identity: Optional[int] = None, name: str = "") -> FiniteGroup:
    """
    Builds a validated group from a multiplication table.

    Args:
        table: table[a][b] is the product a·b.
        identity (int, optional): The identity element. Found from the table if not given.
        name (str): An optional name.

    Raises:
        InstanceError: Listing every axiom violation.
    """
    table = tuple(tuple(int(x) for x in row) for row in table)
    if identity is None:
        candidates = [e for e in range(len(table)) if all(table[e][a] == a for a in range(len(table)))]
        identity = candidates[0] if candidates else 0
    group = FiniteGroup(table=table, identity=identity, name=name)
    violations = group.validate()
    if violations:
        raise InstanceError("Not a group: " + "; ".join(violations))
    return group


def cyclic_group(n: int) -> FiniteGroup:
    """The cyclic group Z/n."""
    if n < 1:
        raise InstanceError(f"A cyclic group needs order at least 1, got {n}.")
    return group_from_table([[(a + b) % n for b in range(n)] for a in range(n)], identity=0, name=f"Z/{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """The symmetric group on n letters, elements in lexicographic order of their images."""
    elements = list(itertools.permutations(range(n)))
    index = {perm: k for k, perm in enumerate(elements)}
    table = [[index[tuple(a[b[x]] for x in range(n))] for b in elements] for a in elements]
    return group_from_table(table, identity=index[tuple(range(n))], name=f"S_{n}")


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


@dataclass(frozen=True)
class FiniteField:
    """A finite field on the elements 0, ..., order-1 with 0 and 1 as its zero and one."""

    add: Tuple[Tuple[int, ...], ...]
    mul: Tuple[Tuple[int, ...], ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.add)

    def validate(self) -> List[str]:
        violations = _table_violations(self.add, "addition") + _table_violations(self.mul, "multiplication")
        if violations:
            return violations
        if len(self.mul) != self.order:
            return ["addition and multiplication tables have different sizes"]
        additive = FiniteGroup(self.add, identity=0).validate()
        violations += [f"addition: {v}" for v in additive]
        nonzero = range(1, self.order)
        multiplicative = tuple(tuple(self.mul[a][b] - 1 for b in nonzero) for a in nonzero)
        if any(x < 0 for row in multiplicative for x in row):
            violations.append("the product of nonzero elements is zero")
        else:
            violations += [f"multiplication: {v}" for v in FiniteGroup(multiplicative, identity=0).validate()]
        elements = range(self.order)
        for a, b in itertools.product(elements, repeat=2):
            if self.add[a][b] != self.add[b][a] or self.mul[a][b] != self.mul[b][a]:
                violations.append(f"operations are not commutative at ({a}, {b})")
                break
        for a, b, c in itertools.product(elements, repeat=3):
            if self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]]:
                violations.append(f"distributivity fails for ({a}, {b}, {c})")
                break
        return violations


def prime_field(q: int) -> FiniteField:
    """The field F_q for a prime q."""
    if not is_prime(q):
        raise InstanceError(f"{q} is not prime; supply addition and multiplication tables for prime powers.")
    return FiniteField(
        add=tuple(tuple((a + b) % q for b in range(q)) for a in range(q)),
        mul=tuple(tuple((a * b) % q for b in range(q)) for a in range(q)),
        name=f"F_{q}",
    )


def field_from_tables(add: Sequence[Sequence[int]], mul: Sequence[Sequence[int]], name: str = "") -> FiniteField:
    """
    Builds a validated finite field from its addition and multiplication tables.

    Raises:
        InstanceError: Listing every axiom violation.
    """
    result = FiniteField(
        add=tuple(tuple(int(x) for x in row) for row in add),
        mul=tuple(tuple(int(x) for x in row) for row in mul),
        name=name,
    )
    violations = result.validate()
    if violations:
        raise InstanceError("Not a field: " + "; ".join(violations))
    return result


@dataclass(frozen=True)
class InstanceSpec:
    """A recipe for a truncation of FI_G or VI_q at a given level."""

    family: Family
    level: int
    group: Optional[FiniteGroup] = None
    field: Optional[FiniteField] = None
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.level < 0:
            raise InstanceError(f"The level must be nonnegative, got {self.level}.")
        if self.family == Family.FI_G and self.group is None:
            object.__setattr__(self, "group", cyclic_group(1))
        if self.family == Family.VI_Q and self.field is None:
            raise InstanceError("VI_q needs a field.")

    @property
    def q(self) -> Optional[int]:
        return self.field.order if self.field else None

    def at_level(self, level: int) -> "InstanceSpec":
        return InstanceSpec(family=self.family, level=level, group=self.group, field=self.field, cap=self.cap)

    def hom_count(self, m: int, n: int) -> int:
        """The closed-form size of C(m, n)."""
        if m > n:
            return 0
        if self.family == Family.FI_G:
            return self.group.order**m * factorial(n) // factorial(n - m)
        count = 1
        for k in range(m):
            count *= self.q**n - self.q**k
        return count

    def to_dict(self) -> dict:
        data = {"family": str(self.family), "level": self.level, "cap": self.cap}
        if self.family == Family.FI_G:
            data["group"] = {"table": [list(row) for row in self.group.table]}
        elif self.field.name == f"F_{self.field.order}":
            data["q"] = self.field.order
        else:
            data["field"] = {"add": [list(row) for row in self.field.add], "mul": [list(row) for row in self.field.mul]}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceSpec":
        """
        Reads a spec of the form {family, group|q|field, level, cap}.

        The group is {"cyclic": n} or {"symmetric": n} or {"table": [[...]]}.

        Raises:
            InstanceError: If the data cannot be understood.
        """
        try:
            return cls._from_dict(data)
        except (KeyError, ValueError, TypeError, AttributeError, IndexError) as err:
            raise InstanceError(f"Cannot read instance spec: {type(err).__name__}: {err}") from err

    @classmethod
    def _from_dict(cls, data: dict) -> "InstanceSpec":
        try:
            family = Family(data["family"])
            level = int(data["level"])
        except (KeyError, ValueError, TypeError) as err:
            raise InstanceError(f"Instance spec needs a 'family' (FI_G or VI_q) and an integer 'level': {err}")
        cap = int(data.get("cap", DEFAULT_CAP))

        if family == Family.FI_G:
            group_data = data.get("group", {"cyclic": 1})
            if isinstance(group_data, int):
                group = cyclic_group(group_data)
            elif "cyclic" in group_data:
                group = cyclic_group(int(group_data["cyclic"]))
            elif "symmetric" in group_data:
                group = symmetric_group(int(group_data["symmetric"]))
            elif "table" in group_data:
                group = group_from_table(group_data["table"], name=group_data.get("name", ""))
            else:
                raise InstanceError(f"Cannot understand group {group_data!r}.")
            return cls(family=family, level=level, group=group, cap=cap)

        if "field" in data:
            field_data = data["field"]
            finite_field = field_from_tables(field_data["add"], field_data["mul"], name=field_data.get("name", ""))
        elif "q" in data:
            finite_field = prime_field(int(data["q"]))
        else:
            raise InstanceError("VI_q needs 'q' or a 'field' with addition and multiplication tables.")
        return cls(family=family, level=level, field=finite_field, cap=cap)


def check_cap(spec: InstanceSpec):
    """
    Raises:
        CapExceededError: If some hom-set of the truncation is larger than the cap.
    """
    for m in range(spec.level + 1):
        for n in range(m, spec.level + 1):
            count = spec.hom_count(m, n)
            if count > spec.cap:
                raise CapExceededError(
                    f"|C({m},{n})| = {count} exceeds the cap of {spec.cap}. Raise the cap to generate this instance."
                )


def _fi_id(m: int, n: int, injection: Tuple[int, ...], coloring: Tuple[int, ...]) -> str:
    return f"{m}>{n}[{','.join(map(str, injection))}|{','.join(map(str, coloring))}]"


def fi_g_truncation(spec: InstanceSpec) -> FiniteEICategory:
    """
    The truncation of FI_G on the sets {0, ..., n-1} for n = 0, ..., N.

    A morphism m → n is a pair (f, c) of an injection f and a coloring c of {0, ..., m-1}
    by G. The composite of (f, c) followed by (f', c') is (f'', c'') with
    f''(x) = f'(f(x)) and c''(x) = c'(f(x))·c(x).

    Raises:
        InstanceError: If the spec is not for FI_G.
        CapExceededError: If a hom-set exceeds the cap.
    """
    if spec.family != Family.FI_G:
        raise InstanceError("fi_g_truncation needs an FI_G spec.")
    check_cap(spec)
    group = spec.group
    levels = range(spec.level + 1)

    data: Dict[str, Tuple[int, int, Tuple[int, ...], Tuple[int, ...]]] = {}
    lookup: Dict[Tuple[int, int, Tuple[int, ...], Tuple[int, ...]], str] = {}
    for m in levels:
        for n in range(m, spec.level + 1):
            for injection in itertools.permutations(range(n), m):
                for coloring in itertools.product(range(group.order), repeat=m):
                    key = (m, n, injection, coloring)
                    morphism = _fi_id(*key)
                    data[morphism] = key
                    lookup[key] = morphism

    by_source: Dict[int, List[str]] = {m: [] for m in levels}
    for morphism, (m, _, _, _) in data.items():
        by_source[m].append(morphism)

    compose = {}
    for f, (m, n, injection, coloring) in data.items():
        for g in by_source[n]:
            _, p, injection2, coloring2 = data[g]
            composite = tuple(injection2[injection[x]] for x in range(m))
            colors = tuple(group.multiply(coloring2[injection[x]], coloring[x]) for x in range(m))
            compose[(g, f)] = lookup[(m, p, composite, colors)]

    objects = [str(n) for n in levels]
    morphisms = [Morphism(morphism, str(key[0]), str(key[1])) for morphism, key in data.items()]
    identity = {str(n): lookup[(n, n, tuple(range(n)), (group.identity,) * n)] for n in levels}
    name = "FI" if group.order == 1 else f"FI_{group.name or 'G'}"
    logger.debug("Generated %s truncation at level %d with %d morphisms", name, spec.level, len(morphisms))
    return FiniteEICategory(
        objects, morphisms, identity, compose, levels={str(n): n for n in levels}, name=f"{name} N={spec.level}"
    )


def _vector_to_str(vector: Tuple[int, ...]) -> str:
    return "".join(map(str, vector)) if all(x < 10 for x in vector) else ".".join(map(str, vector))


def _vi_id(m: int, n: int, columns: Tuple[Tuple[int, ...], ...]) -> str:
    return f"{m}>{n}[{'|'.join(_vector_to_str(column) for column in columns)}]"


def _span(field_: FiniteField, columns: Sequence[Tuple[int, ...]], n: int) -> set:
    span = {(0,) * n}
    for column in columns:
        span = {
            tuple(field_.add[v[r]][field_.mul[scalar][column[r]]] for r in range(n))
            for v in span
            for scalar in range(field_.order)
        }
    return span


def injective_matrices(field_: FiniteField, m: int, n: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """All injective n×m matrices over the field, as tuples of columns in lexicographic order."""
    vectors = list(itertools.product(range(field_.order), repeat=n))
    results = []

    def extend(columns):
        if len(columns) == m:
            results.append(tuple(columns))
            return
        span = _span(field_, columns, n)
        for vector in vectors:
            if vector not in span:
                extend(columns + [vector])

    extend([])
    return results


def _matrix_product(field_: FiniteField, g: Tuple[Tuple[int, ...], ...], f: Tuple[Tuple[int, ...], ...], n: int):
    """Columns of G·F where G has columns g (each of length n) and F has columns f."""
    product = []
    for column in f:
        result = [0] * n
        for k, scalar in enumerate(column):
            if scalar:
                for r in range(n):
                    result[r] = field_.add[result[r]][field_.mul[scalar][g[k][r]]]
        product.append(tuple(result))
    return tuple(product)


def viq_truncation(spec: InstanceSpec) -> FiniteEICategory:
    """
    The truncation of VI_q on the spaces F_q^n for n = 0, ..., N.

    Morphisms m → n are the injective n×m matrices and composition is the matrix product.

    Raises:
        InstanceError: If the spec is not for VI_q.
        CapExceededError: If a hom-set exceeds the cap.
    """
    if spec.family != Family.VI_Q:
        raise InstanceError("viq_truncation needs a VI_q spec.")
    check_cap(spec)
    field_ = spec.field
    levels = range(spec.level + 1)

    data: Dict[str, Tuple[int, int, Tuple[Tuple[int, ...], ...]]] = {}
    lookup: Dict[Tuple[int, int, Tuple[Tuple[int, ...], ...]], str] = {}
    for m in levels:
        for n in range(m, spec.level + 1):
            for columns in injective_matrices(field_, m, n):
                morphism = _vi_id(m, n, columns)
                data[morphism] = (m, n, columns)
                lookup[(m, n, columns)] = morphism

    by_source: Dict[int, List[str]] = {m: [] for m in levels}
    for morphism, (m, _, _) in data.items():
        by_source[m].append(morphism)

    compose = {}
    for f, (m, n, columns) in data.items():
        for g in by_source[n]:
            _, p, columns2 = data[g]
            compose[(g, f)] = lookup[(m, p, _matrix_product(field_, columns2, columns, p))]

    def unit_columns(n):
        return tuple(tuple(int(r == c) for r in range(n)) for c in range(n))

    objects = [str(n) for n in levels]
    morphisms = [Morphism(morphism, str(key[0]), str(key[1])) for morphism, key in data.items()]
    identity = {str(n): lookup[(n, n, unit_columns(n))] for n in levels}
    logger.debug("Generated VI_%d truncation at level %d with %d morphisms", field_.order, spec.level, len(morphisms))
    return FiniteEICategory(
        objects,
        morphisms,
        identity,
        compose,
        levels={str(n): n for n in levels},
        name=f"VI_{field_.order} N={spec.level}",
    )


def generate(spec: InstanceSpec) -> FiniteEICategory:
    """Generates the truncation described by a spec."""
    if spec.family == Family.FI_G:
        return fi_g_truncation(spec)
    return viq_truncation(spec)


def fi_spec(level: int, group: Optional[FiniteGroup] = None, cap: int = DEFAULT_CAP) -> InstanceSpec:
    return InstanceSpec(family=Family.FI_G, level=level, group=group or cyclic_group(1), cap=cap)


def vi_spec(level: int, q: int = 2, cap: int = DEFAULT_CAP) -> InstanceSpec:
    return InstanceSpec(family=Family.VI_Q, level=level, field=prime_field(q), cap=cap)


def group_category(group: FiniteGroup) -> FiniteEICategory:
    """The category with one object whose morphisms are the elements of the group."""
    ids = [f"g{a}" for a in range(group.order)]
    morphisms = [Morphism(morphism, "0", "0") for morphism in ids]
    compose = {(ids[a], ids[b]): ids[group.multiply(a, b)] for a in range(group.order) for b in range(group.order)}
    return FiniteEICategory(
        ["0"], morphisms, {"0": ids[group.identity]}, compose, levels={"0": 0}, name=group.name or "group"
    )

"""
Exact linear algebra over the rationals.

Matrices are NumPy arrays with ``dtype=object`` whose entries are Python ``int`` or
:class:`fractions.Fraction` values. Integral entries may stay as ``int`` (structural
0/1 matrices are built that way) and all division happens inside this module on
``Fraction`` values, so no floating point value is ever produced.

Elimination keeps rows as sparse dictionaries and maintains the reduced row echelon
form incrementally. The reduced form is unique, so every result here is canonical:
identical inputs give identical outputs.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

Scalar = Union[int, Fraction]
SparseRow = Dict[int, Fraction]


def to_fraction(value) -> Fraction:
    """
    Converts a value to an exact rational.

    Args:
        value: An int, Fraction or a string of the form "p/q" (or "p").

    Raises:
        TypeError: If the value is a float.

    Returns:
        Fraction: The exact value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        return Fraction(int(value))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        raise TypeError(f"Refusing to convert floating point value {value} to an exact rational.")
    return Fraction(value)


def format_fraction(value: Scalar) -> str:
    """Formats a rational as "p/q", omitting the denominator when it is 1."""
    return str(to_fraction(value))


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> np.ndarray:
    matrix = zeros(n, n)
    for index in range(n):
        matrix[index, index] = 1
    return matrix


def exact_matrix(rows: Union[np.ndarray, Sequence[Sequence]], shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """
    Builds an exact matrix from nested sequences of ints, Fractions or "p/q" strings.

    Args:
        rows: The entries row by row.
        shape (tuple, optional): The shape. Required to build a matrix with zero rows but some columns.

    Raises:
        ValueError: If the rows are ragged or do not match the shape.

    Returns:
        np.ndarray: An object array of Fractions.
    """
    if isinstance(rows, np.ndarray):
        if shape is None:
            shape = rows.shape
        rows = rows.tolist()
    rows = [list(row) for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if len(rows) != shape[0]:
        raise ValueError(f"Expected {shape[0]} rows, got {len(rows)}.")

    matrix = zeros(*shape)
    for r, row in enumerate(rows):
        if len(row) != shape[1]:
            raise ValueError(f"Row {r} has {len(row)} entries, expected {shape[1]}.")
        for c, value in enumerate(row):
            matrix[r, c] = to_fraction(value)
    return matrix


def matmul(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Exact matrix product which also handles empty dimensions."""
    if left.shape[1] != right.shape[0]:
        raise ValueError(f"Cannot multiply matrices of shapes {left.shape} and {right.shape}.")
    if 0 in (left.shape[0], left.shape[1], right.shape[1]):
        return zeros(left.shape[0], right.shape[1])
    return left.dot(right)


def is_zero(matrix: np.ndarray) -> bool:
    return all(value == 0 for value in matrix.flat)


def equal(left: np.ndarray, right: np.ndarray) -> bool:
    """Exact equality of two matrices, shapes included."""
    return left.shape == right.shape and all(a == b for a, b in zip(left.flat, right.flat))


def hstack(matrices: Sequence[np.ndarray], rows: int) -> np.ndarray:
    """Concatenates matrices side by side. The row count is needed when the list is empty."""
    if not matrices:
        return zeros(rows, 0)
    return np.hstack(list(matrices))


def vstack(matrices: Sequence[np.ndarray], cols: int) -> np.ndarray:
    if not matrices:
        return zeros(0, cols)
    return np.vstack(list(matrices))


def block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(block.shape[0] for block in blocks)
    cols = sum(block.shape[1] for block in blocks)
    result = zeros(rows, cols)
    r = c = 0
    for block in blocks:
        result[r : r + block.shape[0], c : c + block.shape[1]] = block
        r += block.shape[0]
        c += block.shape[1]
    return result


def take_rows(matrix: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    return matrix[np.asarray(rows, dtype=np.intp), :]


def sparse_rows(matrix: np.ndarray) -> Iterator[SparseRow]:
    """Yields the rows of a matrix as dictionaries of their nonzero entries."""
    for row in matrix:
        yield {c: value for c, value in enumerate(row) if value != 0}


class EchelonForm:
    """
    The reduced row echelon form of a growing set of sparse rows.

    Every stored row has a leading 1 in its pivot column and zeros in all other pivot
    columns. Adding a row reduces it against the stored rows; if something is left the
    remainder becomes a new pivot row and its pivot column is cleared from the others.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: Dict[int, SparseRow] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(sorted(self._rows))

    def rows(self) -> List[Tuple[int, SparseRow]]:
        return [(pivot, self._rows[pivot]) for pivot in self.pivots]

    def reduce(self, row: SparseRow) -> SparseRow:
        """Returns the remainder of a row after clearing every pivot column."""
        row = {c: value for c, value in row.items() if value != 0}
        for pivot in [c for c in row if c in self._rows]:
            coeff = row.get(pivot)
            if not coeff:
                continue
            for c, value in self._rows[pivot].items():
                updated = row.get(c, 0) - coeff * value
                if updated:
                    row[c] = updated
                else:
                    row.pop(c, None)
        return row

    def add(self, row: SparseRow) -> bool:
        """
        Adds a row to the echelon form.

        Returns:
            bool: True if the row was independent of the rows already present.
        """
        row = self.reduce(row)
        if not row:
            return False

        pivot = min(row)
        scale = to_fraction(row[pivot])
        row = {c: to_fraction(value) / scale for c, value in row.items()}

        for other in self._rows.values():
            coeff = other.get(pivot)
            if not coeff:
                continue
            for c, value in row.items():
                updated = other.get(c, 0) - coeff * value
                if updated:
                    other[c] = updated
                else:
                    other.pop(c, None)

        self._rows[pivot] = row
        return True

    def extend(self, rows: Iterable[SparseRow]) -> "EchelonForm":
        for row in rows:
            self.add(row)
        return self

    def contains(self, row: SparseRow) -> bool:
        """Whether a row lies in the span of the stored rows."""
        return not self.reduce(row)

    def matrix(self) -> np.ndarray:
        """The reduced row echelon form as a dense matrix (zero rows dropped)."""
        result = zeros(self.rank, self.ncols)
        for r, (_, row) in enumerate(self.rows()):
            for c, value in row.items():
                result[r, c] = value
        return result

    def kernel(self, ncols: Optional[int] = None) -> "Subspace":
        """
        The solution space of the homogeneous system given by the stored rows.

        Args:
            ncols (int, optional): Only consider the first `ncols` columns as unknowns.
                Rows whose pivot lies beyond this limit are ignored. Defaults to all columns.

        Returns:
            Subspace: The kernel with its canonical basis. Each basis vector has a 1 in
            its own free column and zeros in the other free columns.
        """
        ncols = self.ncols if ncols is None else ncols
        free = [c for c in range(ncols) if c not in self._rows]
        position = {c: k for k, c in enumerate(free)}
        basis = zeros(ncols, len(free))
        for k, c in enumerate(free):
            basis[c, k] = 1
        for pivot, row in self._rows.items():
            if pivot >= ncols:
                continue
            for c, value in row.items():
                if c != pivot and c < ncols:
                    basis[pivot, position[c]] = -value
        return Subspace(basis, tuple(free))


@dataclass(eq=False)
class Subspace:
    """
    A subspace of k^n with a canonical basis.

    The basis restricted to `coordinate_rows` is the identity matrix, so the
    coordinates of a vector of the subspace are simply its entries in those rows.
    """

    basis: np.ndarray
    coordinate_rows: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """
        Coordinates of column vectors in the canonical basis.

        The vectors are assumed to lie in the subspace; use `contains` to check first.
        """
        return take_rows(vectors, self.coordinate_rows)

    def contains(self, vectors: np.ndarray) -> bool:
        return equal(matmul(self.basis, self.coordinates(vectors)), vectors)


def row_echelon(matrix: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """
    The reduced row echelon form of a matrix with its pivot columns.

    Pivoting is canonical: leftmost pivot, normalized to a leading 1.
    """
    echelon = EchelonForm(matrix.shape[1]).extend(sparse_rows(matrix))
    return echelon.matrix(), echelon.pivots


def rank(matrix: np.ndarray) -> int:
    """The rank of a matrix over the rationals."""
    if 0 in matrix.shape:
        return 0
    if matrix.shape[0] > matrix.shape[1]:
        matrix = matrix.T
    return EchelonForm(matrix.shape[1]).extend(sparse_rows(matrix)).rank


def kernel(matrix: np.ndarray) -> Subspace:
    """The kernel of a matrix with its canonical basis."""
    return EchelonForm(matrix.shape[1]).extend(sparse_rows(matrix)).kernel()


def kernel_basis(matrix: np.ndarray) -> np.ndarray:
    """
    A basis of the kernel of a matrix, as columns.

    The basis comes from the reduced row echelon form: one vector per free column,
    with a 1 in that column and zeros in the other free columns.
    """
    return kernel(matrix).basis


def column_space(matrix: np.ndarray) -> Subspace:
    """The span of the columns of a matrix with a canonical basis."""
    echelon = EchelonForm(matrix.shape[0]).extend(sparse_rows(matrix.T))
    rows = echelon.rows()
    basis = zeros(matrix.shape[0], len(rows))
    for k, (_, row) in enumerate(rows):
        for c, value in row.items():
            basis[c, k] = value
    return Subspace(basis, echelon.pivots)


@dataclass(eq=False)
class Solution:
    """All solutions X of A·X = B: a particular solution plus the kernel of A."""

    particular: Optional[np.ndarray]
    kernel: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve(left: np.ndarray, right: np.ndarray) -> Solution:
    """
    Solves A·X = B exactly.

    The particular solution is canonical: it is zero in every free column of A.
    An inconsistent system is returned as a Solution whose `particular` is None.

    Args:
        left (np.ndarray): The matrix A.
        right (np.ndarray): The matrix B with the same number of rows as A.

    Raises:
        ValueError: If the row counts differ.

    Returns:
        Solution: The particular solution (or None) and a kernel basis of A.
    """
    if left.shape[0] != right.shape[0]:
        raise ValueError(f"Row counts differ: {left.shape[0]} and {right.shape[0]}.")
    unknowns, columns = left.shape[1], right.shape[1]

    echelon = EchelonForm(unknowns + columns)
    if unknowns + columns:
        echelon.extend(sparse_rows(np.hstack([left, right])))
    kernel_matrix = echelon.kernel(unknowns).basis

    if any(pivot >= unknowns for pivot in echelon.pivots):
        return Solution(None, kernel_matrix)

    particular = zeros(unknowns, columns)
    for pivot, row in echelon.rows():
        for c, value in row.items():
            if c >= unknowns:
                particular[pivot, c - unknowns] = value
    return Solution(particular, kernel_matrix)


def solve_sparse(rows: Iterable[Tuple[SparseRow, Scalar]], nvars: int) -> Optional[Dict[int, Fraction]]:
    """
    Solves a sparse system of equations row·x = value for a single solution vector.

    Args:
        rows: Pairs of a sparse coefficient row over the unknowns 0, ..., nvars-1 and its right hand side.
        nvars (int): The number of unknowns.

    Returns:
        dict: The canonical particular solution (zero in every free unknown) as a sparse
        dictionary, or None if the system is inconsistent.
    """
    echelon = EchelonForm(nvars + 1)
    for row, value in rows:
        augmented = dict(row)
        if value:
            augmented[nvars] = value
        echelon.add(augmented)
    if nvars in echelon.pivots:
        return None
    return {pivot: row[nvars] for pivot, row in echelon.rows() if row.get(nvars)}


def coordinates_in(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Expresses column vectors in terms of a basis with linearly independent columns.

    Raises:
        ValueError: If some vector is not in the span of the basis.
    """
    solution = solve(basis, vectors)
    if not solution.consistent:
        raise ValueError("The vectors do not lie in the span of the basis.")
    return solution.particular


def quotient_map(spanning: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    The canonical projection onto k^n / S and a linear lift back, where S is spanned by the columns.

    The quotient uses pivot-complement coordinates: the coordinates of the class of v are
    the entries of v in the non-pivot rows after reducing v by the echelon basis of S.

    Returns:
        tuple: (projection, lift) with projection·lift equal to the identity.
    """
    n = spanning.shape[0]
    echelon = EchelonForm(n).extend(sparse_rows(spanning.T))
    pivots = set(echelon.pivots)
    rest = [c for c in range(n) if c not in pivots]
    position = {c: k for k, c in enumerate(rest)}

    projection = zeros(len(rest), n)
    lift = zeros(n, len(rest))
    for k, c in enumerate(rest):
        projection[k, c] = 1
        lift[c, k] = 1
    for pivot, row in echelon.rows():
        for c, value in row.items():
            if c != pivot:
                projection[position[c], pivot] = -value
    return projection, lift


def is_invertible(matrix: np.ndarray) -> bool:
    return matrix.shape[0] == matrix.shape[1] and rank(matrix) == matrix.shape[0]


def inverse(matrix: np.ndarray) -> np.ndarray:
    if not is_invertible(matrix):
        raise ValueError("Matrix is not invertible.")
    return solve(matrix, identity(matrix.shape[0])).particular


def matrix_to_json(matrix: np.ndarray) -> Union[List[List[str]], Dict[str, List[int]]]:
    """
    Serializes a matrix as nested lists of "p/q" strings.

    Matrices with a zero dimension carry their shape explicitly as {"shape": [rows, cols]}.
    """
    if 0 in matrix.shape:
        return {"shape": [int(matrix.shape[0]), int(matrix.shape[1])]}
    return [[format_fraction(value) for value in row] for row in matrix]


def matrix_from_json(data, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Reads a matrix written by `matrix_to_json`."""
    if isinstance(data, dict):
        if "shape" not in data:
            raise ValueError("A matrix object must have a 'shape'.")
        rows, cols = data["shape"]
        return exact_matrix(data.get("entries", [[] for _ in range(rows)]), shape=(rows, cols))
    return exact_matrix(data, shape=shape)

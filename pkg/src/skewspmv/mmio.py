"""Matrix Market coordinate I/O.

Supports the ``coordinate real`` flavor with the ``general``, ``symmetric``
and ``skew-symmetric`` qualifiers.  Files are 1-based text per the format;
everything in memory is 0-based.  Values are written with 17 significant
digits so a write/read round-trip reproduces every float64 bit-exactly.

Symmetric and skew-symmetric files store only one triangle; reading expands
the other triangle (``A[j, i] = A[i, j]`` resp. ``-A[i, j]``).  Explicit
zeros are kept on both read and write.
"""

from __future__ import annotations

import numpy as np

from .formats import CooMatrix, StructuralError, coo_normalize, validate_skew

__all__ = ["ParseError", "read_matrix", "write_matrix", "read_vector", "write_vector"]

QUALIFIERS = ("general", "symmetric", "skew-symmetric")

#: Format string reproducing any float64 exactly in decimal.
VALUE_FMT = "%.17g"


class ParseError(ValueError):
    """Malformed Matrix Market content; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_header(line: str, lineno: int) -> str:
    fields = line.split()
    if len(fields) != 5 or fields[0] != "%%MatrixMarket":
        raise ParseError(lineno, f"expected a %%MatrixMarket header, got {line.rstrip()!r}")
    banner, obj, fmt, field, qual = fields
    if obj.lower() != "matrix":
        raise ParseError(lineno, f"unsupported object {obj!r}, only 'matrix'")
    if fmt.lower() != "coordinate":
        raise ParseError(lineno, f"unsupported format {fmt!r}, only 'coordinate'")
    if field.lower() != "real":
        raise ParseError(lineno, f"unsupported field {field!r}, only 'real'")
    qual = qual.lower()
    if qual not in QUALIFIERS:
        raise ParseError(lineno, f"unsupported qualifier {qual!r}, expected one of {QUALIFIERS}")
    return qual


def read_matrix(path) -> tuple[CooMatrix, str]:
    """Read a Matrix Market coordinate file.

    Parameters
    ----------
    path : str or os.PathLike
        File to read.

    Returns
    -------
    (CooMatrix, str)
        The normalized matrix with both triangles materialized, and the
        qualifier the file declared (``"general"``, ``"symmetric"`` or
        ``"skew-symmetric"``).

    Raises
    ------
    ParseError
        Malformed header, size line or entry line (reported with its
        1-based line number).
    StructuralError
        Non-square size, entry count mismatch, an out-of-range coordinate,
        a strictly-upper entry in a symmetric/skew file, or a nonzero
        diagonal entry in a skew-symmetric file.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError(1, "empty file")
    qual = _parse_header(lines[0], 1)

    # size line: first non-comment, non-blank line after the header
    k = 1
    while k < len(lines) and (lines[k].startswith("%") or not lines[k].strip()):
        k += 1
    if k == len(lines):
        raise ParseError(len(lines), "missing size line")
    size_fields = lines[k].split()
    if len(size_fields) != 3:
        raise ParseError(k + 1, f"size line must be 'rows cols nnz', got {lines[k].rstrip()!r}")
    try:
        nrows, ncols, nnz = (int(f) for f in size_fields)
    except ValueError:
        raise ParseError(k + 1, f"non-integer size line {lines[k].rstrip()!r}") from None
    if nrows != ncols:
        raise StructuralError(f"matrix must be square, got {nrows}x{ncols}")
    if nnz < 0:
        raise ParseError(k + 1, f"negative entry count {nnz}")

    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz, dtype=np.float64)
    count = 0
    for lineno in range(k + 1, len(lines)):
        line = lines[lineno]
        if line.startswith("%") or not line.strip():
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(lineno + 1, f"entry line must be 'row col value', got {line.rstrip()!r}")
        try:
            i = int(fields[0])
            j = int(fields[1])
            v = float(fields[2])
        except ValueError:
            raise ParseError(lineno + 1, f"malformed entry {line.rstrip()!r}") from None
        if count >= nnz:
            raise StructuralError(f"file contains more than the declared {nnz} entries")
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise StructuralError(
                f"line {lineno + 1}: entry ({i}, {j}) outside declared {nrows}x{ncols} matrix"
            )
        if qual != "general" and j > i:
            raise StructuralError(
                f"line {lineno + 1}: {qual} file must store only the lower triangle, "
                f"got entry ({i}, {j})"
            )
        if qual == "skew-symmetric" and i == j and v != 0.0:
            raise StructuralError(
                f"line {lineno + 1}: skew-symmetric file has nonzero diagonal entry "
                f"({i}, {i}) = {fields[2]}"
            )
        rows[count] = i - 1
        cols[count] = j - 1
        vals[count] = v
        count += 1
    if count != nnz:
        raise StructuralError(f"declared {nnz} entries but file contains {count}")

    if qual != "general":
        off = rows != cols
        sign = -1.0 if qual == "skew-symmetric" else 1.0
        rows, cols, vals = (
            np.concatenate((rows, cols[off])),
            np.concatenate((cols, rows[off])),
            np.concatenate((vals, sign * vals[off])),
        )
    return coo_normalize(CooMatrix(nrows, rows, cols, vals)), qual


def write_matrix(path, m: CooMatrix, qualifier: str = "general") -> None:
    """Write a triplet matrix as Matrix Market coordinate text.

    The ``symmetric`` and ``skew-symmetric`` qualifiers first validate the
    appropriate symmetry, then store only the lower triangle (diagonal
    included for ``symmetric``, necessarily absent for ``skew-symmetric``).
    ``general`` stores every entry as-is.  Values use 17 significant digits,
    so reading the file back reproduces the matrix bit-exactly.
    """
    if qualifier not in QUALIFIERS:
        raise ValueError(f"qualifier must be one of {QUALIFIERS}, got {qualifier!r}")
    m = coo_normalize(m)
    if qualifier == "skew-symmetric":
        report = validate_skew(m)
        if report.asymmetry_count or report.violation_count or report.diagonal_class != "zero":
            raise StructuralError(
                "matrix is not strictly skew-symmetric: "
                f"{report.asymmetry_count} pattern asymmetries, "
                f"{report.violation_count} value violations, "
                f"diagonal class {report.diagonal_class!r}"
            )
        keep = m.row > m.col
    elif qualifier == "symmetric":
        dense_ok = _is_symmetric(m)
        if not dense_ok:
            raise StructuralError("matrix is not symmetric; cannot write 'symmetric' qualifier")
        keep = m.row >= m.col
    else:
        keep = np.ones(m.nnz, dtype=bool)

    r, c, v = m.row[keep], m.col[keep], m.val[keep]
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate real {qualifier}\n")
        fh.write(f"{m.n} {m.n} {r.size}\n")
        for i, j, x in zip(r, c, v):
            fh.write(f"{i + 1} {j + 1} {VALUE_FMT % x}\n")


def _is_symmetric(m: CooMatrix) -> bool:
    key = m.row * m.n + m.col
    mirror = m.col * m.n + m.row
    pos = np.searchsorted(key, mirror)
    pos_c = np.minimum(pos, max(key.size - 1, 0))
    if key.size == 0:
        return True
    found = (pos < key.size) & (key[pos_c] == mirror)
    if not np.all(found | (m.val == 0.0)):
        return False
    return bool(np.all(m.val[found] == m.val[pos_c[found]]))


def read_vector(path) -> np.ndarray:
    """Read a dense vector: one real value per line, blank lines ignored."""
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            try:
                values.append(float(s))
            except ValueError:
                raise ParseError(lineno, f"malformed vector entry {s!r}") from None
    return np.array(values, dtype=np.float64)


def write_vector(path, x) -> None:
    """Write a dense vector, one value per line with 17 significant digits."""
    x = np.asarray(x, dtype=np.float64).ravel()
    with open(path, "w", encoding="ascii") as fh:
        for v in x:
            fh.write(f"{VALUE_FMT % v}\n")

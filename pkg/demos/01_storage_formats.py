# coding: utf-8

# # Skew-symmetric storage from the ground up
#
# A skew-symmetric matrix satisfies A == -A.T, so storing the strictly
# lower triangle plus the diagonal is enough to reconstruct everything.
# This script walks one tiny matrix through the three storage formats the
# library understands: coordinate (COO), skyline (SSS), and CSR.

import numpy as np

from skewspmv import (
    CooMatrix,
    coo_normalize,
    coo_to_csr,
    coo_to_sss,
    sss_to_coo,
    validate_skew,
)
from skewspmv.mmio import read_matrix, write_matrix

# ## A 4x4 example, entered both ways
#
# from_entries takes every explicit entry; here we type both triangles by
# hand so validate_skew has something real to check.

lower = [(1, 0, 2.0), (2, 1, 3.0), (3, 0, 5.0), (3, 2, 1.0)]
entries = lower + [(j, i, -v) for i, j, v in lower]
coo = coo_normalize(CooMatrix.from_entries(4, entries))
print("COO entries (row, col, value):")
for i, j, v in coo.entries():
    print(f"  ({i}, {j}) {v:+.1f}")

# ## Validation
#
# The report classifies the diagonal and counts pattern/value problems.
# A clean matrix reports zero of each.

rep = validate_skew(coo)
print(f"\nvalidate_skew: asymmetries={rep.asymmetry_count} "
      f"violations={rep.violation_count} diagonal={rep.diagonal_class!r}")

# ## Skyline form
#
# coo_to_sss keeps only the strictly lower triangle (row_ptr/col_ind/
# off_diags) next to a dense diagonal.  The strictly upper half is implied
# with flipped sign, which is what halves the memory traffic later.

sss = coo_to_sss(coo)
print("\nskyline arrays:")
print("  row_ptr  ", sss.row_ptr.tolist())
print("  col_ind  ", sss.col_ind.tolist())
print("  off_diags", sss.off_diags.tolist())
print("  diags    ", sss.diags.tolist())

# Expanding back is exact: the stored triangle regenerates both halves.

dense = sss_to_coo(sss).to_dense()
print("\ndense expansion:\n", dense)
assert np.array_equal(dense, -dense.T), "expansion must be skew"

# ## CSR, for comparison with general sparse libraries

csr = coo_to_csr(coo)
print("\nCSR row_ptr", csr.row_ptr.tolist(), "col_ind", csr.col_ind.tolist())

# ## Matrix Market round trip
#
# Under the skew-symmetric qualifier the file stores just the strictly
# lower triangle: 4 body lines instead of 8.  The writer refuses the
# qualifier if the matrix does not actually satisfy it.

import tempfile, os

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "tiny.mtx")
    write_matrix(path, coo, qualifier="skew-symmetric")
    print("\nfile contents:")
    print(open(path).read())
    again, qualifier = read_matrix(path)
    print("read back qualifier:", qualifier)
    assert again.nnz == coo.nnz

print("storage demo done")

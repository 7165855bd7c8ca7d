"""Reader/writer for the MacKay `alist` sparse parity-check matrix format.

Layout: "n m", "max_col_deg max_row_deg", the n column degrees, the m row
degrees, then one line of 1-indexed check indices per column and one line
of 1-indexed bit indices per row.  Zero padding (used by some writers to
square off the lists) is accepted on read and not emitted on write.
"""

from __future__ import annotations

import numpy as np


def write_alist(H: np.ndarray, path) -> None:
    H = np.asarray(H, dtype=np.uint8) & 1
    m, n = H.shape
    col_deg = H.sum(axis=0)
    row_deg = H.sum(axis=1)
    lines = [
        f"{n} {m}",
        f"{int(col_deg.max(initial=0))} {int(row_deg.max(initial=0))}",
        " ".join(str(int(d)) for d in col_deg),
        " ".join(str(int(d)) for d in row_deg),
    ]
    for j in range(n):
        lines.append(" ".join(str(int(i) + 1) for i in np.nonzero(H[:, j])[0]))
    for i in range(m):
        lines.append(" ".join(str(int(j) + 1) for j in np.nonzero(H[i])[0]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path) -> np.ndarray:
    with open(path) as fh:
        tokens = fh.read().split("\n")
    rows = [line.split() for line in tokens]
    n, m = int(rows[0][0]), int(rows[0][1])
    col_deg = [int(x) for x in rows[2]]
    if len(col_deg) != n:
        raise ValueError(f"expected {n} column degrees, got {len(col_deg)}")
    H = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        for tok in rows[4 + j]:
            i = int(tok)
            if i > 0:
                H[i - 1, j] = 1
    # Cross-check against the per-row lists.
    for i in range(m):
        supp = sorted(int(t) - 1 for t in rows[4 + n + i] if int(t) > 0)
        if supp != sorted(np.nonzero(H[i])[0].tolist()):
            raise ValueError(f"alist row {i} inconsistent with column lists")
    return H
